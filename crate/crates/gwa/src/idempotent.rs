//! The idempotent `e` of the τ-adic completion that projects onto the
//! `z`-adic part, computed in finite truncations `R/(τ^N)`.
//!
//! Everything here is exact. A truncation only knows its elements modulo
//! `τ^N`, and `φ(τ) = τ mod b`, so each application of φ costs `s - 1` powers
//! of τ where `b^s = 0`. [`IdempotentData::new`] computes `e` with that much
//! headroom and reduces back to the requested precision afterwards.

use crate::error::{Error, Result};
use crate::gwa::GwaInstance;
use crate::report::{Check, Report};
use crate::ring::{bezout_witness, Poly, QuotientRing};

/// `R/(τ^N)` with its monic modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedCompletion {
    tau: Poly,
    precision: usize,
    quotient: QuotientRing,
}

impl TruncatedCompletion {
    pub fn new(inst: &GwaInstance, precision: usize) -> Result<Self> {
        let tau = inst.tau().monic()?;
        let quotient = QuotientRing::new(&tau.pow(precision as u64))?;
        Ok(TruncatedCompletion {
            tau,
            precision,
            quotient,
        })
    }

    pub fn tau(&self) -> &Poly {
        &self.tau
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn quotient(&self) -> &QuotientRing {
        &self.quotient
    }

    pub fn reduce(&self, p: &Poly) -> Poly {
        self.quotient.reduce(p)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.quotient.mul(a, b)
    }
}

/// `e' = β Φ mod τ`, where `Φ = φ(z) ... φ^{l-1}(z)` and `αz + βΦ = 1`.
///
/// This is the idempotent of `R/(τ)` with `e' ≡ 1 mod z` and
/// `e' ≡ 0 mod φ^i(z)` for `1 <= i < l`; each of these is re-checked.
pub fn crt_idempotent(inst: &GwaInstance) -> Result<Poly> {
    let mod_tau = TruncatedCompletion::new(inst, 1)?;
    let cofactor = inst.cofactor();
    let w = bezout_witness(inst.z(), &cofactor)?;
    let e_prime = mod_tau.reduce(&(&w.beta * &cofactor));

    let idempotent = mod_tau.mul(&e_prime, &e_prime) == e_prime;
    let one_mod_z = (&Poly::one(inst.ring()) - &e_prime)
        .rem(inst.z())?
        .is_zero();
    let kills_orbit = (1..inst.twist() as i64)
        .map(|i| e_prime.rem(&inst.z_shift(i)))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(|r| r.is_zero());
    if !(idempotent && one_mod_z && kills_orbit) {
        return Err(Error::InvalidInstance(format!(
            "CRT idempotent {e_prime} fails its characterization"
        )));
    }
    Ok(e_prime)
}

/// Lifts an idempotent of `R/(τ)` to `R/(τ^N)` with the Newton map
/// `e -> 3e^2 - 2e^3`, `ceil(log2 N)` times.
pub fn hensel_lift_idempotent(
    inst: &GwaInstance,
    e_prime: &Poly,
    precision: usize,
) -> Result<Poly> {
    let trunc = TruncatedCompletion::new(inst, precision)?;
    let mod_tau = TruncatedCompletion::new(inst, 1)?;
    let start = mod_tau.reduce(e_prime);
    if mod_tau.mul(&start, &start) != start {
        return Err(Error::InvalidParameters(format!(
            "{e_prime} is not idempotent modulo τ"
        )));
    }
    Ok(newton_lift(&trunc, e_prime))
}

pub(crate) fn newton_lift(trunc: &TruncatedCompletion, start: &Poly) -> Poly {
    let ring = start.ring();
    let three = Poly::from_ints(ring, &[3]);
    let two = Poly::from_ints(ring, &[2]);
    let mut e = trunc.reduce(start);
    let iterations = trunc.precision.max(1).next_power_of_two().trailing_zeros();
    for _ in 0..iterations {
        let sq = trunc.mul(&e, &e);
        let cube = trunc.mul(&sq, &e);
        e = trunc.reduce(&(&(&three * &sq) - &(&two * &cube)));
    }
    e
}

/// Unit `u = e Φ` of the corner `eR/(τ^N)` with `eτ = ez u`, and its inverse
/// relative to the corner identity `e`.
pub fn corner_unit(inst: &GwaInstance, e: &Poly, precision: usize) -> Result<(Poly, Poly)> {
    let trunc = TruncatedCompletion::new(inst, precision)?;
    let e = trunc.reduce(e);
    let u = trunc.mul(&e, &inst.cofactor());
    let w = trunc
        .quotient
        .solve_mul(&u, &e)
        .ok_or_else(|| Error::NonUnit(format!("{u} in the corner of R/(τ^{precision})")))?;
    let u_inv = trunc.mul(&e, &w);
    Ok((u, u_inv))
}

/// Everything derived from `e` at a fixed target precision `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentData {
    pub precision: usize,
    pub working_precision: usize,
    pub tau: Poly,
    pub e_prime: Poly,
    /// `e` modulo `τ^N`.
    pub e: Poly,
    /// `e` modulo `τ^{working_precision}`.
    pub e_padded: Poly,
    /// `φ^i(e)` modulo `τ^N`, `0 <= i < l`.
    pub orbit: Vec<Poly>,
    pub u: Poly,
    pub u_inv: Poly,
}

impl IdempotentData {
    /// Computes `e` at `N + l(s - 1)` and everything else at `N`.
    pub fn new(inst: &GwaInstance, precision: usize) -> Result<Self> {
        if precision == 0 {
            return Err(Error::InvalidParameters(
                "precision must be positive".into(),
            ));
        }
        let working_precision = precision + inst.padding(inst.twist());
        let e_prime = crt_idempotent(inst)?;
        let e_padded = hensel_lift_idempotent(inst, &e_prime, working_precision)?;
        let trunc = TruncatedCompletion::new(inst, precision)?;
        let e = trunc.reduce(&e_padded);
        let orbit = (0..inst.twist() as i64)
            .map(|i| trunc.reduce(&inst.phi().apply(&e_padded, i)))
            .collect();
        let (u, u_inv) = corner_unit(inst, &e, precision)?;
        Ok(IdempotentData {
            precision,
            working_precision,
            tau: trunc.tau.clone(),
            e_prime,
            e,
            e_padded,
            orbit,
            u,
            u_inv,
        })
    }

    pub fn truncation(&self, inst: &GwaInstance) -> TruncatedCompletion {
        TruncatedCompletion::new(inst, self.precision).expect("built once already")
    }

    /// The full list of identities satisfied by `e`, `u`, and the orbit.
    pub fn checks(&self, inst: &GwaInstance) -> Report {
        let trunc = self.truncation(inst);
        let ring = inst.ring();
        let n = self.precision;
        let mut report = Report::new();

        report.push(Check::new(
            "1 - e' ∈ zR/(τ)",
            "CRT idempotent: 1 - e' ∈ zR/(τ)",
            (&Poly::one(ring) - &self.e_prime)
                .rem(inst.z())
                .is_ok_and(|r| r.is_zero()),
            format!("e' = {}", self.e_prime),
        ));
        report.push(Check::new(
            format!("e^2 = e mod τ^{n}"),
            "Hensel lift: unique idempotent lift of e'",
            trunc.mul(&self.e, &self.e) == self.e,
            format!("e = {}", self.e),
        ));
        let mod_tau = TruncatedCompletion::new(inst, 1).expect("τ has unit leading coefficient");
        report.push(Check::new(
            "e ≡ e' mod τ",
            "Hensel lift: unique idempotent lift of e'",
            mod_tau.reduce(&self.e) == mod_tau.reduce(&self.e_prime),
            String::new(),
        ));
        report.push(Check::from_result(
            format!("1 - e = a_{n} z^{n} mod τ^{n}"),
            "eM = M^{z∞}: 1 - e = a_n z^n mod τ^n",
            &a_n(inst, self, n),
            |a| format!("a_{n} = {a}"),
        ));
        report.extend(orbit_orthogonality_check(
            inst,
            &self.e_padded,
            self.working_precision,
            n,
        ));
        let tau = inst.tau();
        report.push(Check::new(
            "eτ = ez·u",
            "Lemma units-idempotents: ez=(eτ)u",
            trunc.mul(&self.e, &tau) == trunc.mul(&trunc.mul(&self.e, inst.z()), &self.u),
            format!("u = {}", self.u),
        ));
        report.push(Check::new(
            "u·uInv = e",
            "Lemma units-idempotents: u is a unit of eR",
            trunc.mul(&self.u, &self.u_inv) == self.e,
            format!("uInv = {}", self.u_inv),
        ));
        report
    }
}

/// `a_n` with `1 - e = a_n z^n` modulo `τ^n`, checked by re-multiplication.
pub fn a_n(inst: &GwaInstance, data: &IdempotentData, n: usize) -> Result<Poly> {
    if n > data.precision {
        return Err(Error::PrecisionInsufficient {
            have: data.precision,
            need: n,
        });
    }
    let trunc = TruncatedCompletion::new(inst, n)?;
    let z_n = inst.z().pow(n as u64);
    let residual = trunc.reduce(&(&Poly::one(inst.ring()) - &data.e));
    let a = residual.exact_div(&z_n)?;
    if trunc.mul(&a, &z_n) != residual {
        return Err(Error::NotDivisible(format!("1 - e by z^{n}")));
    }
    Ok(a)
}

/// Checks `Σ φ^i(e) = 1` and `φ^i(e) φ^j(e) = 0` for `i != j` modulo `τ^N`,
/// given `e` known modulo `τ^{have}`.
pub fn orbit_orthogonality_check(
    inst: &GwaInstance,
    e: &Poly,
    have: usize,
    precision: usize,
) -> Report {
    let mut report = Report::new();
    let need = precision + inst.padding(inst.twist());
    if have < need {
        report.push(Check::new(
            "orbit precision",
            "orbit decomposition: Σ φ^i(e) = 1",
            false,
            Error::PrecisionInsufficient { have, need }.to_string(),
        ));
        return report;
    }
    let trunc = match TruncatedCompletion::new(inst, precision) {
        Ok(t) => t,
        Err(err) => {
            report.push(Check::new(
                "orbit precision",
                "orbit decomposition",
                false,
                err.to_string(),
            ));
            return report;
        }
    };
    let l = inst.twist();
    let orbit: Vec<Poly> = (0..l as i64)
        .map(|i| trunc.reduce(&inst.phi().apply(e, i)))
        .collect();
    let sum = orbit
        .iter()
        .fold(Poly::zero(inst.ring()), |acc, p| &acc + p);
    report.push(Check::new(
        format!("Σ φ^i(e) = 1 mod τ^{precision}"),
        "orbit decomposition: Σ φ^i(e) = 1",
        trunc.reduce(&sum) == trunc.reduce(&Poly::one(inst.ring())),
        format!("sum = {}", trunc.reduce(&sum)),
    ));
    let mut offending = Vec::new();
    for i in 0..l {
        for j in i + 1..l {
            if !trunc.mul(&orbit[i], &orbit[j]).is_zero() {
                offending.push(format!("({i},{j})"));
            }
        }
    }
    report.push(Check::new(
        format!("φ^i(e)φ^j(e) = 0 mod τ^{precision}"),
        "orbit decomposition: φ^i(e)φ^j(e) = 0",
        offending.is_empty(),
        if offending.is_empty() {
            format!("{} pairs", l * (l.saturating_sub(1)) / 2)
        } else {
            format!("nonzero for {}", offending.join(", "))
        },
    ));
    report
}

/// The unpadded orbit identity for `e'`, which only holds modulo `(τ, b)`.
pub fn orbit_check_mod_tau_b(inst: &GwaInstance, e_prime: &Poly) -> Result<bool> {
    let mod_tau = TruncatedCompletion::new(inst, 1)?;
    let sum = (0..inst.twist() as i64).fold(Poly::zero(inst.ring()), |acc, i| {
        &acc + &mod_tau.reduce(&inst.phi().apply(e_prime, i))
    });
    let residual = mod_tau.reduce(&(&sum - &Poly::one(inst.ring())));
    Ok(residual.divide_scalar(&inst.b()).is_some())
}

/// Checks that `r -> e r` from `R/(z^n)` to `eR/(τ^n)` and `e r -> r mod z^n`
/// are mutually inverse on the monomials spanning both sides.
pub fn iso_f_roundtrip(inst: &GwaInstance, data: &IdempotentData, n: usize) -> Report {
    let mut report = Report::new();
    let anchor = "f_n: R/(z^n) ≅ eR/(τ^n)";
    let name = format!("f_{n} roundtrip");
    if n == 0 || n > data.precision {
        report.push(Check::new(
            name,
            anchor,
            false,
            Error::PrecisionInsufficient {
                have: data.precision,
                need: n,
            }
            .to_string(),
        ));
        return report;
    }
    let ring = inst.ring();
    let trunc = TruncatedCompletion::new(inst, n).expect("τ has unit leading coefficient");
    let z_n = match inst
        .z()
        .pow(n as u64)
        .monic()
        .and_then(|m| QuotientRing::new(&m))
    {
        Ok(q) => q,
        Err(err) => {
            report.push(Check::new(name, anchor, false, err.to_string()));
            return report;
        }
    };
    let e = trunc.reduce(&data.e);
    let forward = |r: &Poly| trunc.mul(&e, r);
    let backward = |p: &Poly| z_n.reduce(p);

    let mut failure = None;
    for j in 0..z_n.degree() {
        let m = Poly::monomial(ring.one(), j);
        if backward(&forward(&m)) != m {
            failure = Some(format!("g(f(h^{j})) != h^{j}"));
            break;
        }
    }
    if failure.is_none() {
        for j in 0..trunc.quotient.degree() {
            let em = forward(&Poly::monomial(ring.one(), j));
            if forward(&backward(&em)) != em {
                failure = Some(format!("f(g(e h^{j})) != e h^{j}"));
                break;
            }
        }
    }
    report.push(Check::new(
        name,
        anchor,
        failure.is_none(),
        failure
            .unwrap_or_else(|| format!("{} + {} monomials", z_n.degree(), trunc.quotient.degree())),
    ));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{AffineAutomorphism, CoefRing};

    fn weyl_z4() -> GwaInstance {
        let r = CoefRing::integers_mod(4).unwrap();
        GwaInstance::new(
            AffineAutomorphism::translation(r, 1),
            Poly::h(r),
            r.int(2),
            2,
        )
        .unwrap()
    }

    #[test]
    fn crt_idempotent_for_weyl_mod_four() {
        let inst = weyl_z4();
        assert_eq!(
            crt_idempotent(&inst).unwrap(),
            Poly::from_ints(inst.ring(), &[1, 1])
        );
    }

    #[test]
    fn hensel_lift_at_precision_two() {
        let inst = weyl_z4();
        let r = inst.ring();
        let e = hensel_lift_idempotent(&inst, &Poly::from_ints(r, &[1, 1]), 2).unwrap();
        assert_eq!(e, Poly::from_ints(r, &[1, 0, 1, 2]));
        assert_eq!(e.to_string(), "2*h^3 + h^2 + 1");
        let diff = &e - &Poly::from_ints(r, &[1, 1]);
        assert_eq!(
            diff.exact_div(&inst.tau()).unwrap(),
            Poly::from_ints(r, &[3, 2])
        );
    }

    #[test]
    fn trivial_idempotents_are_fixed() {
        let inst = weyl_z4();
        let r = inst.ring();
        for c in [0, 1] {
            let p = Poly::from_ints(r, &[c]);
            assert_eq!(hensel_lift_idempotent(&inst, &p, 5).unwrap(), p);
        }
        assert!(hensel_lift_idempotent(&inst, &Poly::h(r), 2).is_err());
    }

    #[test]
    fn orbit_needs_padding() {
        let inst = weyl_z4();
        let e_prime = crt_idempotent(&inst).unwrap();
        assert!(orbit_check_mod_tau_b(&inst, &e_prime).unwrap());
        let bare = hensel_lift_idempotent(&inst, &e_prime, 2).unwrap();
        let report = orbit_orthogonality_check(&inst, &bare, 2, 2);
        assert!(report.checks[0]
            .detail
            .contains("precision 2 is below the required 4"));
        let padded = hensel_lift_idempotent(&inst, &e_prime, 4).unwrap();
        assert!(orbit_orthogonality_check(&inst, &padded, 4, 2).all_pass());
    }

    #[test]
    fn corner_unit_values() {
        let inst = weyl_z4();
        let data = IdempotentData::new(&inst, 2).unwrap();
        let r = inst.ring();
        let at = |p: &Poly, v: i64| p.eval(r.int(v)).coeffs()[0];
        assert_eq!((at(&data.u, 0), at(&data.u, 2)), (1, 3));
        assert_eq!((at(&data.u_inv, 0), at(&data.u_inv, 2)), (1, 3));
        let report = data.checks(&inst);
        assert!(report.all_pass(), "{report}");
    }

    #[test]
    fn f_roundtrips() {
        let inst = weyl_z4();
        let data = IdempotentData::new(&inst, 2).unwrap();
        assert!(iso_f_roundtrip(&inst, &data, 1).all_pass());
        assert!(iso_f_roundtrip(&inst, &data, 2).all_pass());
        assert!(!iso_f_roundtrip(&inst, &data, 3).all_pass());
    }
}
