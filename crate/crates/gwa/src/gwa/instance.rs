use std::fmt;

use crate::error::{Error, Result};
use crate::report::{Check, Report};
use crate::ring::{bezout_witness, AffineAutomorphism, BezoutWitness, CoefRing, CoefScalar, Poly};

/// The data `(R, φ, z, b, l)` of a generalized Weyl algebra together with the
/// certificates for its standing hypotheses.
///
/// `R = k[b]/(b^t)[h]` is fixed by the coefficient ring of `φ`. Construction
/// through [`GwaInstance::new`] rejects instances whose certificates do not
/// verify; [`GwaInstance::assemble`] skips that step so that a broken
/// instance can still be inspected with [`validate_instance`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GwaInstance {
    name: String,
    phi: AffineAutomorphism,
    z: Poly,
    b: CoefScalar,
    twist: usize,
    witnesses: Vec<Option<BezoutWitness>>,
    twist_certificate: Option<Poly>,
}

impl GwaInstance {
    pub fn assemble(phi: AffineAutomorphism, z: Poly, b: CoefScalar, twist: usize) -> Result<Self> {
        let ring = phi.ring();
        if z.ring() != ring || b.ring() != ring {
            return Err(Error::RingMismatch);
        }
        if twist == 0 {
            return Err(Error::InvalidParameters(
                "twist exponent must be positive".into(),
            ));
        }
        let witnesses = (1..twist)
            .map(|i| bezout_witness(&z, &phi.apply(&z, i as i64)).ok())
            .collect();
        let twist_certificate = (&phi.apply(&z, twist as i64) - &z).divide_scalar(&b);
        Ok(GwaInstance {
            name: String::new(),
            phi,
            z,
            b,
            twist,
            witnesses,
            twist_certificate,
        })
    }

    pub fn new(phi: AffineAutomorphism, z: Poly, b: CoefScalar, twist: usize) -> Result<Self> {
        let inst = Self::assemble(phi, z, b, twist)?;
        let report = inst.validate();
        match report.first_failure() {
            None => Ok(inst),
            Some(c) => Err(match c.name.as_str() {
                n if n.starts_with("comaximal") => Error::NotComaximal(c.detail.clone()),
                _ => Error::InvalidInstance(format!("{}: {}", c.name, c.detail)),
            }),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> CoefRing {
        self.phi.ring()
    }

    pub fn phi(&self) -> &AffineAutomorphism {
        &self.phi
    }

    pub fn z(&self) -> &Poly {
        &self.z
    }

    pub fn b(&self) -> CoefScalar {
        self.b
    }

    pub fn twist(&self) -> usize {
        self.twist
    }

    /// Bézout witnesses for `(z, φ^i(z))`, `1 <= i < l`, where found.
    pub fn witnesses(&self) -> &[Option<BezoutWitness>] {
        &self.witnesses
    }

    /// `q` with `φ^l(z) - z = b*q`, where it exists.
    pub fn twist_certificate(&self) -> Option<&Poly> {
        self.twist_certificate.as_ref()
    }

    /// Smallest `s` with `b^s = 0`.
    pub fn b_nilpotency(&self) -> usize {
        self.b.nilpotency_index().unwrap_or(usize::MAX)
    }

    /// Extra τ-adic precision consumed by `applications` applications of φ.
    pub fn padding(&self, applications: usize) -> usize {
        applications * (self.b_nilpotency().saturating_sub(1))
    }

    /// `φ^k(z)`.
    pub fn z_shift(&self, k: i64) -> Poly {
        self.phi.apply(&self.z, k)
    }

    /// `∏_{i in range} φ^i(z)`.
    pub fn z_orbit_product(&self, range: std::ops::Range<i64>) -> Poly {
        range.fold(Poly::one(self.ring()), |acc, i| &acc * &self.z_shift(i))
    }

    /// `τ = z φ(z) ... φ^{l-1}(z) = y^l x^l`.
    pub fn tau(&self) -> Poly {
        self.z_orbit_product(0..self.twist as i64)
    }

    /// `∏_{i=1}^{l-1} φ^i(z)`, the cofactor of `z` in `τ`.
    pub fn cofactor(&self) -> Poly {
        self.z_orbit_product(1..self.twist as i64)
    }

    /// The instance `(R, φ^l, z)` with twist exponent 1, whose generators are
    /// `x' = x^l` and `y'` on the corner.
    pub fn twisted(&self) -> GwaInstance {
        let name = if self.name.is_empty() {
            String::new()
        } else {
            format!("{} twisted", self.name)
        };
        GwaInstance::assemble(self.phi.pow(self.twist as i64), self.z.clone(), self.b, 1)
            .expect("same ring and positive twist")
            .with_name(name)
    }

    pub fn validate(&self) -> Report {
        validate_instance(self)
    }
}

impl fmt::Display for GwaInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.name.is_empty() {
            write!(f, "{}: ", self.name)?;
        }
        write!(
            f,
            "H({}[h], h -> {}, z = {}), b = {}, l = {}",
            self.ring(),
            self.phi.image_of_h(1),
            self.z,
            self.b,
            self.twist
        )
    }
}

/// Re-verifies every hypothesis of the instance from scratch and reports each
/// identity with its witness. Never fails early.
pub fn validate_instance(inst: &GwaInstance) -> Report {
    let mut report = Report::new();
    let ring = inst.ring();
    let b = inst.b;

    let s = b.nilpotency_index();
    report.push(Check::new(
        "b nilpotent",
        "b nilpotent central element",
        s.is_some_and(|s| b.pow(s as u64).is_zero()),
        match s {
            Some(s) => format!("b = {b}, b^{s} = 0"),
            None => format!("b = {b} is not nilpotent"),
        },
    ));

    let l = inst.twist as i64;
    let diff = &inst.phi.apply(&inst.z, l) - &inst.z;
    let twist_ok = inst
        .twist_certificate
        .as_ref()
        .is_some_and(|q| diff == q.scale(b));
    report.push(Check::new(
        "twist hypothesis",
        "Theorem main: φ^l(z) - z ∈ bR",
        twist_ok,
        match &inst.twist_certificate {
            Some(q) if twist_ok => format!("φ^{l}(z) - z = {diff} = b*({q})"),
            _ => format!("φ^{l}(z) - z = {diff} is not in bR"),
        },
    ));

    for (k, w) in inst.witnesses.iter().enumerate() {
        let i = k as i64 + 1;
        let shifted = inst.z_shift(i);
        let ok = w.as_ref().is_some_and(|w| w.verify(&inst.z, &shifted));
        let detail = match w {
            Some(w) if ok => format!("({})*z + ({})*φ^{i}(z) = 1", w.alpha, w.beta),
            _ => match bezout_witness(&inst.z, &shifted) {
                Err(e) => e.to_string(),
                Ok(_) => "stored witness does not verify".into(),
            },
        };
        report.push(Check::new(
            format!("comaximal (z, φ^{i}(z))"),
            "Theorem main: (z, φ^i(z)) = R, 1 <= i <= l-1",
            ok,
            detail,
        ));
    }

    report.push(Check::new(
        "z not a zero divisor",
        "Theorem main: z is not a zero divisor",
        !inst.z.is_zero_divisor(),
        format!("z = {}", inst.z),
    ));

    let unit_lead = inst.z.leading_coeff().is_some_and(|c| c.is_unit());
    report.push(Check::new(
        "z has unit leading coefficient",
        "τ-adic truncation R/(τ^N) is free of finite rank",
        unit_lead,
        format!(
            "leading coefficient {}",
            inst.z.leading_coeff().unwrap_or(ring.zero())
        ),
    ));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weyl(modulus: u64, prime: i64, twist: usize) -> GwaInstance {
        let r = CoefRing::integers_mod(modulus).unwrap();
        GwaInstance::assemble(
            AffineAutomorphism::translation(r, 1),
            Poly::h(r),
            r.int(prime),
            twist,
        )
        .unwrap()
    }

    #[test]
    fn weyl_mod_four_is_valid() {
        let inst = weyl(4, 2, 2);
        let report = inst.validate();
        assert!(report.all_pass(), "{report}");
        assert_eq!(inst.tau(), Poly::from_ints(inst.ring(), &[0, 1, 1]));
        assert_eq!(inst.twist_certificate(), Some(&Poly::one(inst.ring())));
    }

    #[test]
    fn wrong_twist_is_reported_not_raised() {
        // φ^3(h) - h = 3 is a unit, and h, h+2 share the residue h mod 2.
        let report = weyl(4, 2, 3).validate();
        let failed: Vec<_> = report.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, vec!["twist hypothesis", "comaximal (z, φ^2(z))"]);
    }

    #[test]
    fn twisted_instance_is_valid() {
        let t = weyl(9, 3, 3).twisted();
        assert_eq!(t.twist(), 1);
        assert!(t.validate().all_pass());
        assert_eq!(t.phi().image_of_h(1), Poly::from_ints(t.ring(), &[3, 1]));
    }
}
