//! The property suites run by `gwa selftest` and by the acceptance target.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::applications::{
    corollary_classical, corollary_quantized, corollary_simple_dim, corollary_weyl, make_quantized,
    random_invertible, shipped_corpus, shipped_instances,
};
use crate::functor::{commutator_in_b, functor_checks, FunctorContext};
use crate::gwa::{gwa_multiply, random_element, yx_power_identity};
use crate::idempotent::IdempotentData;
use crate::module::{z_torsion, MatrixModule, SubmoduleBasis};
use crate::report::{Check, Report};

/// `e^2 = e`, `1 - e = a_N z^N`, orbit orthogonality and `eτ = ez·u` for
/// every shipped instance at each precision.
pub fn idempotent_suite(precisions: &[usize]) -> Report {
    let mut report = Report::new();
    for inst in shipped_instances() {
        for &n in precisions {
            let data = IdempotentData::new(&inst, n);
            match data {
                Ok(data) => {
                    for mut check in data.checks(&inst).checks {
                        check.name = format!("[{} N={n}] {}", inst.name(), check.name);
                        report.push(check);
                    }
                }
                Err(err) => report.push(Check::new(
                    format!("[{} N={n}] idempotent data", inst.name()),
                    "Hensel lift: unique idempotent lift of e'",
                    false,
                    err.to_string(),
                )),
            }
        }
    }
    report
}

/// Associativity on `triples` seeded triples per instance and
/// `y^n x^n = z φ(z) ... φ^{n-1}(z)` for `n = 1..=8`.
pub fn algebra_suite(seed: u64, triples: usize) -> Report {
    let mut report = Report::new();
    for (k, inst) in shipped_instances().iter().enumerate() {
        let ring = inst.ring();
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
        let mut failures = Vec::new();
        for t in 0..triples {
            let a = random_element(ring, &mut rng, 2, 2);
            let b = random_element(ring, &mut rng, 2, 2);
            let c = random_element(ring, &mut rng, 2, 2);
            let left = gwa_multiply(inst, &gwa_multiply(inst, &a, &b), &c);
            let right = gwa_multiply(inst, &a, &gwa_multiply(inst, &b, &c));
            if left != right {
                failures.push(t);
            }
        }
        report.push(Check::new(
            format!("[{}] (ab)c = a(bc)", inst.name()),
            "normal form: H(R, φ, z) is associative",
            failures.is_empty(),
            if failures.is_empty() {
                format!("{triples} seeded triples")
            } else {
                format!("fails on triples {failures:?}")
            },
        ));
        let bad: Vec<u32> = (1..=8).filter(|&n| !yx_power_identity(inst, n)).collect();
        report.push(Check::new(
            format!(
                "[{}] y^n x^n = z φ(z) ... φ^(n-1)(z), n = 1..8",
                inst.name()
            ),
            "normal form: y^n x^n = z φ(z) ... φ^{n-1}(z)",
            bad.is_empty(),
            if bad.is_empty() {
                String::new()
            } else {
                format!("fails for n in {bad:?}")
            },
        ));
    }
    report
}

/// The functor battery, `[x^l, y] ∈ bH`, and Howell canonicity on the
/// shipped corpus.
pub fn corpus_suite(seed: u64) -> Report {
    let mut report = Report::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0;
    for (inst, corpus) in shipped_corpus(seed) {
        total += corpus.len();
        for entry in &corpus {
            let m = &entry.module;
            let label = format!("[{} {}]", inst.name(), entry.label);
            for mut check in functor_checks(m).checks {
                check.name = format!("{label} {}", check.name);
                report.push(check);
            }
            report.push(Check::new(
                format!("{label} [X^l, Y] ∈ b·S"),
                "[x^l, y] ∈ bH(R, φ, z)",
                commutator_in_b(m),
                String::new(),
            ));
            report.push(howell_canonicity(m, &mut rng, &label));
        }
    }
    report.push(Check::new(
        "corpus size",
        "roundtrip suite: at least 20 modules",
        total >= 20,
        format!("{total} modules"),
    ));
    report
}

/// Recomputing, re-spanning and changing generators leave Howell forms
/// unchanged.
fn howell_canonicity(m: &MatrixModule, rng: &mut ChaCha8Rng, label: &str) -> Check {
    let ring = m.instance().ring();
    let torsion = z_torsion(m);
    let again = z_torsion(m);
    let respan = SubmoduleBasis::span(ring, m.dim(), &torsion.generators());
    let mut ok = torsion == again && torsion == respan;
    if let Ok(ctx) = FunctorContext::new(m.instance(), m.h()) {
        let t = random_invertible(ring, m.dim(), rng);
        ok &= SubmoduleBasis::column_span(&ctx.e) == SubmoduleBasis::column_span(&(&ctx.e * &t));
    }
    Check::new(
        format!("{label} Howell form canonical"),
        "Howell normal form: equal spans have equal forms",
        ok,
        format!("{} rows", torsion.howell_rows().len()),
    )
}

/// The three corollary drivers with their canonical parameters.
pub fn corollary_suite(seed: u64) -> Report {
    let mut report = Report::new();
    let mut run = |name: &str, result: crate::Result<Report>| match result {
        Ok(r) => report.extend(r),
        Err(err) => report.push(Check::new(name, "corollary driver", false, err.to_string())),
    };
    run("Weyl corollary", corollary_weyl(2, 2, seed));
    run("quantized corollary", corollary_quantized(5, 2, 4, 2, seed));
    run("classical corollary", corollary_classical(seed));
    run("simple-dimension corollary", simple_dim(seed));
    report
}

/// The simple-dimension search on the F_5 quantized instance with `b = 0`.
pub fn simple_dim(seed: u64) -> crate::Result<Report> {
    let inst = make_quantized(5, 2, 1, 1, 4)?;
    let weights: Vec<_> = inst.ring().elements().collect();
    corollary_simple_dim(&inst, &weights, seed)
}

/// Every suite.
pub fn selftest(seed: u64) -> Report {
    let mut report = idempotent_suite(&[1, 2, 3]);
    report.extend(algebra_suite(seed, 200));
    report.extend(corpus_suite(seed));
    report.extend(corollary_suite(seed));
    report
}
