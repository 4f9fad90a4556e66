use gwa::applications::{make_weyl, shipped_corpus};
use gwa::functor::{
    action_table_consistency, commutator_in_b, frobenius_module_check, frobenius_restriction_check,
    functor_f, functor_g, roundtrip_fg, roundtrip_gf, torsion_equals_em,
};
use gwa::linalg::Matrix;
use gwa::module::{verma_quotient, z_torsion, SubmoduleBasis};

fn residues(m: &Matrix) -> Vec<Vec<u64>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(|c| c.coeffs()[0]).collect())
        .collect()
}

#[test]
fn weyl_z4_verma_corner() {
    let inst = make_weyl(2, 2).unwrap();
    let r = inst.ring();
    let m = verma_quotient(&inst, r.zero(), 4).unwrap();
    assert_eq!(m.tau_nilpotency(), 2);
    let f = functor_f(&m).unwrap();
    let n = &f.module;
    assert_eq!(n.dim(), 2);
    assert_eq!(
        residues(&f.embedding),
        vec![vec![1, 0], vec![0, 0], vec![0, 1], vec![0, 0]]
    );
    assert_eq!(residues(n.x()), vec![vec![0, 2], vec![0, 0]]);
    assert_eq!(residues(n.y()), vec![vec![0, 0], vec![3, 0]]);
    let comm = &(n.y() * n.x()) - &(n.x() * n.y());
    assert_eq!(comm, Matrix::identity(r, 2).scale(r.int(2)));

    let expected = SubmoduleBasis::column_span(&f.embedding);
    assert_eq!(z_torsion(&m), expected);
    assert!(torsion_equals_em(&m).all_pass());

    let theta = roundtrip_gf(&m).unwrap();
    assert_eq!(
        residues(&theta.map),
        vec![
            vec![1, 0, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 0, 1]
        ]
    );
    let g = functor_g(&inst, n).unwrap();
    assert_eq!(g.dim(), 4);
    assert!(action_table_consistency(&g));
    roundtrip_fg(&inst, n).unwrap();
    frobenius_restriction_check(&inst, n).unwrap();
    frobenius_module_check(&m).unwrap();
    assert!(commutator_in_b(&m));
}

#[test]
fn whole_corpus_roundtrips() {
    for (inst, corpus) in shipped_corpus(7) {
        for entry in corpus {
            let m = &entry.module;
            let ctx = format!("{} / {}", inst, entry.label);
            let f = functor_f(m).unwrap_or_else(|e| panic!("{ctx}: {e}"));
            roundtrip_gf(m).unwrap_or_else(|e| panic!("{ctx}: GF {e}"));
            roundtrip_fg(&inst, &f.module).unwrap_or_else(|e| panic!("{ctx}: FG {e}"));
            frobenius_module_check(m).unwrap_or_else(|e| panic!("{ctx}: Fr {e}"));
            frobenius_restriction_check(&inst, &f.module)
                .unwrap_or_else(|e| panic!("{ctx}: Fr {e}"));
            assert!(torsion_equals_em(m).all_pass(), "{ctx}");
            assert!(commutator_in_b(m), "{ctx}");
        }
    }
}
