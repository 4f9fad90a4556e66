//! One line per acceptance criterion. Run with
//! `cargo test -p gwa --test acceptance`.

use std::path::Path;
use std::time::{Duration, Instant};

use gwa::applications::{
    make_classical, make_quantized, make_weyl, qint, seeded_corpus, shipped_instances, verma_corpus,
};
use gwa::functor::{
    commutator_in_b, frobenius_module_check, frobenius_restriction_check, functor_f, functor_g,
    roundtrip_fg, roundtrip_gf, torsion_equals_em,
};
use gwa::gwa::{validate_instance, GwaInstance};
use gwa::idempotent::IdempotentData;
use gwa::job::{run_job, JobConfig};
use gwa::linalg::Matrix;
use gwa::module::{z_torsion, MatrixModule, SubmoduleBasis};
use gwa::report::Report;
use gwa::ring::{CoefRing, Poly};
use gwa::selftest;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn all_pass(report: &Report) -> Result<usize, String> {
    match report.first_failure() {
        None => Ok(report.checks.len()),
        Some(c) => Err(c.to_string()),
    }
}

// Polynomials over Z/m as ascending coefficient vectors.
fn pmul(a: &[i64], b: &[i64], m: i64) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y).rem_euclid(m);
        }
    }
    out
}

/// Remainder modulo a monic polynomial.
fn prem(a: &[i64], f: &[i64], m: i64) -> Vec<i64> {
    let mut r: Vec<i64> = a.iter().map(|c| c.rem_euclid(m)).collect();
    let d = f.len() - 1;
    while r.len() > d {
        let lead = r.pop().unwrap();
        let shift = r.len() - d;
        for (k, c) in f[..d].iter().enumerate() {
            r[shift + k] = (r[shift + k] - lead * c).rem_euclid(m);
        }
    }
    r.resize(d, 0);
    r
}

/// Every idempotent of `Z/4[h]/((h^2 + h)^2)` congruent to `h + 1` mod `h^2 + h`,
/// by enumerating all 256 residues.
fn idempotents_over_h_plus_one() -> Vec<Vec<i64>> {
    let tau = [0, 1, 1];
    let tau2 = pmul(&tau, &tau, 4);
    let mut out = Vec::new();
    for code in 0..256i64 {
        let e: Vec<i64> = (0..4).map(|k| (code >> (2 * k)) & 3).collect();
        let square = prem(&pmul(&e, &e, 4), &tau2, 4);
        let residue = prem(&e, &tau, 4);
        if square == e && residue == vec![1, 1] {
            out.push(e);
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let inst = make_weyl(2, 2).map_err(|e| e.to_string())?;
    all_pass(&validate_instance(&inst))?;
    let oracle = idempotents_over_h_plus_one();
    ensure(
        oracle == vec![vec![1, 0, 1, 2]],
        format!("oracle idempotents {oracle:?}"),
    )?;
    let ring = inst.ring();
    let data = IdempotentData::new(&inst, 2).map_err(|e| e.to_string())?;
    ensure(
        data.e == Poly::from_ints(ring, &oracle[0]),
        format!("e = {}", data.e),
    )?;
    ensure(data.e.to_string() == "2*h^3 + h^2 + 1", "rendering of e")?;
    ensure(
        data.e_prime == Poly::from_ints(ring, &[1, 1]),
        format!("e' = {}", data.e_prime),
    )?;

    let m = gwa::module::verma_quotient(&inst, ring.int(0), 4).map_err(|e| e.to_string())?;
    let corner = functor_f(&m).map_err(|e| e.to_string())?;
    let n = &corner.module;
    ensure(n.dim() == 2, format!("dim F(M) = {}", n.dim()))?;
    let comm = &(n.y() * n.x()) - &(n.x() * n.y());
    ensure(
        comm == Matrix::identity(ring, 2).scale(ring.int(2)),
        "[y', x'] != 2",
    )?;
    all_pass(&torsion_equals_em(&m))?;
    let theta = roundtrip_gf(&m).map_err(|e| e.to_string())?;
    let g = functor_g(&inst, n).map_err(|e| e.to_string())?;
    ensure(
        theta.verify(&[(g.h(), m.h()), (g.x(), m.x()), (g.y(), m.y())]),
        "Θ fails to verify",
    )?;
    Ok("e = 2h^3 + h^2 + 1 (unique among 256 residues), dim F(M) = 2, [y', x'] = 2".into())
}

fn criterion_2() -> Outcome {
    let report = selftest::idempotent_suite(&[1, 2, 3]);
    let n = all_pass(&report)?;
    for needle in [
        "e^2 = e",
        "1 - e = a_",
        "Σ φ^i(e) = 1",
        "φ^i(e)φ^j(e) = 0",
        "eτ = ez·u",
        "u·uInv = e",
    ] {
        let count = report
            .checks
            .iter()
            .filter(|c| c.name.contains(needle))
            .count();
        ensure(
            count == 8 * 3,
            format!("{needle}: {count} checks, expected 24"),
        )?;
    }
    Ok(format!(
        "{n} identities over 8 instances x N in {{1, 2, 3}}"
    ))
}

/// Vermas over every shipped instance plus their pairwise direct sums.
fn roundtrip_corpus() -> Vec<(GwaInstance, MatrixModule)> {
    let mut out = Vec::new();
    for inst in shipped_instances() {
        let vermas = verma_corpus(&inst, 12, 2);
        for (i, a) in vermas.iter().enumerate() {
            out.push((inst.clone(), a.clone()));
            for b in vermas.iter().skip(i + 1).take(2) {
                out.push((inst.clone(), a.direct_sum(b).expect("same instance")));
            }
        }
    }
    out
}

fn check_roundtrips(inst: &GwaInstance, m: &MatrixModule) -> Result<(), String> {
    let corner = functor_f(m).map_err(|e| e.to_string())?;
    let n = &corner.module;
    let g = functor_g(inst, n).map_err(|e| e.to_string())?;
    let theta = roundtrip_gf(m).map_err(|e| e.to_string())?;
    ensure(
        theta.verify(&[(g.h(), m.h()), (g.x(), m.x()), (g.y(), m.y())]),
        "Θ: G(F(M)) -> M fails to verify",
    )?;
    let fg = functor_f(&g).map_err(|e| e.to_string())?;
    let iota = roundtrip_fg(inst, n).map_err(|e| e.to_string())?;
    ensure(
        iota.verify(&[
            (n.h(), fg.module.h()),
            (n.x(), fg.module.x()),
            (n.y(), fg.module.y()),
        ]),
        "N -> F(G(N)) fails to verify",
    )
}

fn criterion_3() -> Outcome {
    let corpus = roundtrip_corpus();
    ensure(
        corpus.len() >= 20,
        format!("corpus has {} modules", corpus.len()),
    )?;
    for (inst, m) in &corpus {
        check_roundtrips(inst, m).map_err(|e| format!("{} dim {}: {e}", inst.name(), m.dim()))?;
    }
    let sums = corpus
        .iter()
        .filter(|(_, m)| m.h()[(0, 0)] != m.h()[(m.dim() - 1, m.dim() - 1)])
        .count();
    Ok(format!(
        "{} modules ({sums} with distinct end weights), both roundtrips verified",
        corpus.len()
    ))
}

fn criterion_4() -> Outcome {
    let mut count = 0;
    for inst in shipped_instances() {
        for entry in seeded_corpus(&inst, 0) {
            let m = &entry.module;
            let corner = functor_f(m).map_err(|e| e.to_string())?;
            frobenius_restriction_check(&inst, &corner.module)
                .map_err(|e| format!("{} {}: {e}", inst.name(), entry.label))?;
            frobenius_module_check(m)
                .map_err(|e| format!("{} {}: {e}", inst.name(), entry.label))?;
            count += 1;
        }
    }
    Ok(format!("{count} corpus modules"))
}

fn criterion_5() -> Outcome {
    let ring = CoefRing::new(5, 2).map_err(|e| e.to_string())?;
    let q = ring.int(2) + ring.b();
    // (2 + b)^i = 2^i + i 2^{i-1} b; summed for i < 4 gives 15 + 17b = 2b.
    let oracle = ring.scalar(&[(1 + 2 + 4 + 8) % 5, (1 + 2 * 2 + 3 * 4) % 5]);
    ensure(oracle == ring.scalar(&[0, 2]), "oracle arithmetic")?;
    ensure(qint(4, q) == oracle, format!("[4]_q = {}", qint(4, q)))?;
    let q4 = ring.scalar(&[16 % 5, (4 * 8) % 5]);
    ensure(q.pow(4) == q4, format!("q^4 = {}", q.pow(4)))?;

    let inst = make_quantized(5, 2, 1, 2, 4).map_err(|e| e.to_string())?;
    let corpus = seeded_corpus(&inst, 0);
    ensure(!corpus.is_empty(), "empty corpus")?;
    let mut nonzero = 0;
    for entry in &corpus {
        let n = functor_f(&entry.module).map_err(|e| e.to_string())?.module;
        let lhs = &(n.x() * n.y()) - &(n.y() * n.x()).scale(q4);
        ensure(
            lhs == Matrix::identity(ring, n.dim()).scale(oracle),
            format!("{}: x'y' - q^4 y'x' != [4]_q", entry.label),
        )?;
        nonzero += usize::from(n.dim() > 0);
    }
    Ok(format!(
        "[4]_q = 2b, q^4 = 1 + 2b; relation holds on {} modules ({nonzero} nonzero)",
        corpus.len()
    ))
}

fn criterion_6() -> Outcome {
    let ring = CoefRing::integers_mod(4).map_err(|e| e.to_string())?;
    let inst =
        make_classical(&Poly::from_ints(ring, &[0, 0, 1]), 2, 2).map_err(|e| e.to_string())?;
    all_pass(&validate_instance(&inst))?;
    let vermas = verma_corpus(&inst, 16, 4);
    ensure(
        vermas.len() >= 3,
        format!("{} Verma quotients", vermas.len()),
    )?;
    for m in &vermas {
        check_roundtrips(&inst, m).map_err(|e| format!("dim {}: {e}", m.dim()))?;
    }
    Ok(format!(
        "{} Verma quotients, dims {:?}",
        vermas.len(),
        vermas.iter().map(|m| m.dim()).collect::<Vec<_>>()
    ))
}

fn criterion_7() -> Outcome {
    let report = selftest::simple_dim(0).map_err(|e| e.to_string())?;
    all_pass(&report)?;
    let points = report
        .checks
        .iter()
        .filter(|c| c.name.starts_with("G(N_"))
        .count();
    ensure(points >= 1, "no point module checked")?;
    let search = report
        .checks
        .iter()
        .find(|c| c.name.starts_with("every split simple"))
        .ok_or("missing corpus search")?;
    ensure(
        !search.detail.contains("simple dims []"),
        "search found no simple module",
    )?;
    Ok(format!(
        "{points} point modules; {}; split weights over F_5",
        search.detail
    ))
}

fn criterion_8() -> Outcome {
    all_pass(&selftest::algebra_suite(0, 200))?;
    let mut modules = 0;
    for inst in shipped_instances() {
        for entry in seeded_corpus(&inst, 0) {
            let m = &entry.module;
            ensure(
                commutator_in_b(m),
                format!("{} {}: [X^l, Y] ∉ bS", inst.name(), entry.label),
            )?;
            let t = z_torsion(m);
            ensure(t == z_torsion(m), "Howell form not reproducible")?;
            ensure(
                t == SubmoduleBasis::span(inst.ring(), m.dim(), &t.generators()),
                "Howell form changes under re-spanning",
            )?;
            modules += 1;
        }
    }
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let config = JobConfig::load(&data.join("weyl_z4.json")).map_err(|e| e.to_string())?;
    let first = run_job(&config, &data)
        .map_err(|e| e.to_string())?
        .to_json();
    let second = run_job(&config, &data)
        .map_err(|e| e.to_string())?
        .to_json();
    ensure(first == second, "two runs differ")?;
    let golden_path =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../gwa-cli/tests/golden/weyl_z4_report.json");
    let golden = std::fs::read_to_string(golden_path).map_err(|e| e.to_string())?;
    ensure(first == golden, "report differs from the golden file")?;
    Ok(format!("associativity and y^n x^n on 8 instances; {modules} corpus modules; golden report identical"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        (
            "1 Weyl over Z/4 end to end",
            criterion_1,
            Some(Duration::from_secs(1)),
        ),
        (
            "2 idempotent property suite",
            criterion_2,
            Some(Duration::from_secs(5)),
        ),
        (
            "3 roundtrip suite",
            criterion_3,
            Some(Duration::from_secs(30)),
        ),
        ("4 Frobenius clause", criterion_4, None),
        ("5 quantized corollary", criterion_5, None),
        ("6 classical corollary", criterion_6, None),
        (
            "7 simple-dimension corollary",
            criterion_7,
            Some(Duration::from_secs(30)),
        ),
        ("8 structural suites", criterion_8, None),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(limit)) if elapsed > limit => {
                Err(format!("took {elapsed:?}, limit {limit:?}"))
            }
            (other, _) => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {name}: PASS ({elapsed:.2?}) {detail}"),
            Err(err) => {
                failed += 1;
                println!("criterion {name}: FAIL ({elapsed:.2?}) {err}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 8 acceptance criteria passed");
}
