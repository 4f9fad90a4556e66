use gwa::applications::{
    classical_parts, make_classical, make_quantized, make_weyl, qint, shipped_instances,
};
use gwa::gwa::{gwa_multiply, gwa_power, random_element, yx_power_identity, GwaElement};
use gwa::idempotent::{crt_idempotent, hensel_lift_idempotent, TruncatedCompletion};
use gwa::ring::{CoefRing, Poly};
use gwa::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `(u + b)^k = u^k + k u^{k-1} b` in `(Z/m)[b]/(b^2)`, as `(c0, c1)`.
fn binomial_power(u: i64, k: u32, m: i64) -> (i64, i64) {
    let c0 = u.pow(k) % m;
    let c1 = if k == 0 {
        0
    } else {
        (k as i64 * u.pow(k - 1)) % m
    };
    (c0, c1)
}

#[test]
fn q_integers_against_binomial_expansion() {
    let ring = CoefRing::new(5, 2).unwrap();
    let q = ring.int(2) + ring.b();
    let (q4_0, q4_1) = binomial_power(2, 4, 5);
    assert_eq!(q.pow(4), ring.scalar(&[q4_0, q4_1]));
    assert_eq!(q.pow(4), ring.scalar(&[1, 2]));
    let (mut s0, mut s1) = (0, 0);
    for k in 0..4 {
        let (a, b) = binomial_power(2, k, 5);
        s0 += a;
        s1 += b;
    }
    assert_eq!(qint(4, q), ring.scalar(&[s0 % 5, s1 % 5]));
    assert_eq!(qint(4, q), ring.scalar(&[0, 2]));
}

#[test]
fn constructor_errors() {
    assert!(matches!(
        make_quantized(5, 4, 1, 1, 4),
        Err(Error::NotPrimitiveRoot(_))
    ));
    assert!(matches!(
        make_quantized(5, 2, 1, 1, 2),
        Err(Error::NotPrimitiveRoot(_))
    ));
    let z2 = CoefRing::integers_mod(2).unwrap();
    // v = h(h - 1) shares the root 1 with φ(v) = (h + 1) h modulo 2.
    let v = Poly::from_ints(z2, &[0, -1, 1]);
    assert!(matches!(
        make_classical(&v, 2, 1),
        Err(Error::NotComaximal(_))
    ));
    assert!(classical_parts(&[0, -1, 1], 2, 1)
        .unwrap()
        .assemble()
        .is_ok());
    assert!(matches!(make_weyl(4, 1), Err(Error::InvalidParameters(_))));
    // The trivial twist needs [1]_q v = v ∈ bS.
    for t in [1, 2] {
        assert!(make_quantized(5, 1, 0, t, 1).is_ok());
        assert!(matches!(
            make_quantized(5, 1, 1, t, 1),
            Err(Error::InvalidInstance(_))
        ));
    }
}

#[test]
fn quantized_automorphism_powers() {
    let inst = make_quantized(5, 2, 1, 2, 4).unwrap();
    let ring = inst.ring();
    let q = ring.int(2) + ring.b();
    let h = Poly::h(ring);
    for i in 0..8u64 {
        let expected = Poly::linear(q.pow(i), qint(i, q));
        assert_eq!(inst.phi().apply(&h, -(i as i64)), expected, "i = {i}");
    }
    // φ^{-4}(h) - h = (q^4 - 1) h + [4]_q has every coefficient in bS.
    let diff = &inst.phi().apply(&h, -4) - &h;
    assert!(diff.divide_scalar(&ring.b()).is_some());
}

/// Product of `φ^i(h)` for `i < n` over `F_5` with `φ(h) = 3h + 2`, by
/// schoolbook multiplication of coefficient lists.
fn orbit_product_f5(n: usize) -> Vec<i64> {
    let mut acc = vec![1i64];
    let mut shift = (1i64, 0i64);
    for _ in 0..n {
        let (a, c) = shift;
        let factor = [c, a];
        let mut next = vec![0i64; acc.len() + 1];
        for (i, x) in acc.iter().enumerate() {
            for (j, y) in factor.iter().enumerate() {
                next[i + j] = (next[i + j] + x * y) % 5;
            }
        }
        acc = next;
        shift = ((3 * a) % 5, (3 * c + 2) % 5);
    }
    acc
}

#[test]
fn quantized_yx_power_against_schoolbook_product() {
    let inst = make_quantized(5, 2, 1, 1, 4).unwrap();
    let ring = inst.ring();
    assert_eq!(
        inst.phi().apply(&Poly::h(ring), 1),
        Poly::from_ints(ring, &[2, 3])
    );
    let y4 = gwa_power(&inst, &GwaElement::y(ring), 4);
    let x4 = gwa_power(&inst, &GwaElement::x(ring), 4);
    let product = gwa_multiply(&inst, &y4, &x4);
    assert_eq!(product.homogeneous_degree(), Some(0));
    assert_eq!(
        product.coefficient(0),
        Poly::from_ints(ring, &orbit_product_f5(4))
    );
}

#[test]
fn yx_power_identity_on_every_instance() {
    for inst in shipped_instances() {
        for n in 1..=8 {
            assert!(yx_power_identity(&inst, n), "{} n = {n}", inst.name());
        }
    }
}

#[test]
fn associativity_on_seeded_triples() {
    for inst in shipped_instances() {
        let ring = inst.ring();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let a = random_element(ring, &mut rng, 2, 2);
            let b = random_element(ring, &mut rng, 2, 2);
            let c = random_element(ring, &mut rng, 2, 2);
            assert_eq!(
                gwa_multiply(&inst, &gwa_multiply(&inst, &a, &b), &c),
                gwa_multiply(&inst, &a, &gwa_multiply(&inst, &b, &c)),
                "{}",
                inst.name()
            );
        }
    }
}

fn newton_step(trunc: &TruncatedCompletion, e: &Poly) -> Poly {
    let ring = e.ring();
    let sq = trunc.mul(e, e);
    let cube = trunc.mul(&sq, e);
    trunc.reduce(&(&(&Poly::from_ints(ring, &[3]) * &sq) - &(&Poly::from_ints(ring, &[2]) * &cube)))
}

#[test]
fn newton_converges_quadratically() {
    for inst in shipped_instances() {
        let fine = TruncatedCompletion::new(&inst, 8).unwrap();
        let mut e = crt_idempotent(&inst).unwrap();
        for k in 0..=3u32 {
            let level = TruncatedCompletion::new(&inst, 1 << k).unwrap();
            let defect = &fine.mul(&e, &e) - &e;
            assert!(level.reduce(&defect).is_zero(), "{} step {k}", inst.name());
            e = newton_step(&fine, &e);
        }
        assert_eq!(
            e,
            hensel_lift_idempotent(&inst, &crt_idempotent(&inst).unwrap(), 8).unwrap()
        );
    }
}

#[test]
fn lifts_of_the_same_residue_agree() {
    for inst in shipped_instances() {
        let e_prime = crt_idempotent(&inst).unwrap();
        let ring = inst.ring();
        // e' + τ r reduces to e' modulo τ for any r.
        let other = &e_prime + &(&inst.tau() * &Poly::from_ints(ring, &[1, 2, 3]));
        for n in 1..=4 {
            let a = hensel_lift_idempotent(&inst, &e_prime, n).unwrap();
            let b = hensel_lift_idempotent(&inst, &other, n).unwrap();
            assert_eq!(a, b, "{} N = {n}", inst.name());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn product_is_graded(seed in 0u64..10_000, pick in 0usize..8) {
        let inst = &shipped_instances()[pick];
        let ring = inst.ring();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(ring, &mut rng, 3, 1);
        let b = random_element(ring, &mut rng, 3, 1);
        let product = gwa_multiply(inst, &a, &b);
        for (d, _) in product.terms() {
            let hit = a.terms().any(|(i, _)| b.terms().any(|(j, _)| i + j == d));
            prop_assert!(hit);
        }
        prop_assert_eq!(gwa_multiply(inst, &GwaElement::one(ring), &a), a.clone());
        prop_assert_eq!(gwa_multiply(inst, &a, &GwaElement::one(ring)), a);
    }
}
