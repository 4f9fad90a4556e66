use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use rand::Rng;

use crate::gwa::instance::GwaInstance;
use crate::ring::{CoefRing, Poly};

/// An element of `H(R, φ, z)` in normal form `Σ r_d g_d`, coefficients on the
/// left, where `g_d = y^d` for `d > 0`, `g_d = x^{-d}` for `d < 0`, `g_0 = 1`.
///
/// Zero coefficients are never stored, so equality of elements is equality of
/// the maps.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GwaElement {
    ring: CoefRing,
    terms: BTreeMap<i64, Poly>,
}

impl GwaElement {
    pub fn zero(ring: CoefRing) -> Self {
        GwaElement {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: CoefRing) -> Self {
        Self::from_poly(Poly::one(ring))
    }

    pub fn from_poly(r: Poly) -> Self {
        Self::term(r, 0)
    }

    /// `r * g_degree`.
    pub fn term(r: Poly, degree: i64) -> Self {
        let mut e = Self::zero(r.ring());
        if !r.is_zero() {
            e.terms.insert(degree, r);
        }
        e
    }

    pub fn x(ring: CoefRing) -> Self {
        Self::term(Poly::one(ring), -1)
    }

    pub fn y(ring: CoefRing) -> Self {
        Self::term(Poly::one(ring), 1)
    }

    pub fn h(ring: CoefRing) -> Self {
        Self::from_poly(Poly::h(ring))
    }

    pub fn ring(&self) -> CoefRing {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Poly)> {
        self.terms.iter().map(|(&d, r)| (d, r))
    }

    pub fn coefficient(&self, degree: i64) -> Poly {
        self.terms
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.ring))
    }

    /// The single degree of a nonzero homogeneous element.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        match self.terms.len() {
            1 => self.terms.keys().next().copied(),
            _ => None,
        }
    }

    /// Coefficients of the right normal form `Σ g_d r'_d`, using
    /// `r g_d = g_d φ^{-d}(r)`.
    pub fn right_coefficients(&self, inst: &GwaInstance) -> BTreeMap<i64, Poly> {
        self.terms
            .iter()
            .map(|(&d, r)| (d, inst.phi().apply(r, -d)))
            .collect()
    }

    /// Inverse of [`GwaElement::right_coefficients`].
    pub fn from_right_coefficients(inst: &GwaInstance, coeffs: &BTreeMap<i64, Poly>) -> GwaElement {
        let mut e = Self::zero(inst.ring());
        for (&d, r) in coeffs {
            e = &e + &Self::term(inst.phi().apply(r, d), d);
        }
        e
    }

    fn add_term(&mut self, degree: i64, r: Poly) {
        if r.is_zero() {
            return;
        }
        let sum = &self.coefficient(degree) + &r;
        if sum.is_zero() {
            self.terms.remove(&degree);
        } else {
            self.terms.insert(degree, sum);
        }
    }
}

/// `g_m * g_k` in normal form, as a coefficient and a degree.
fn generator_product(inst: &GwaInstance, m: i64, k: i64) -> (Poly, i64) {
    let one = Poly::one(inst.ring());
    if m >= 0 && k >= 0 || m <= 0 && k <= 0 {
        return (one, m + k);
    }
    let phi = inst.phi();
    if m > 0 {
        // y^m x^c with y^c x^c = z φ(z) ... φ^{c-1}(z).
        let (a, c) = (m, -k);
        if a >= c {
            let p = inst.z_orbit_product(0..c);
            (phi.apply(&p, a - c), a - c)
        } else {
            (inst.z_orbit_product(0..a), a - c)
        }
    } else {
        // x^a y^c with x^a y^a = φ^{-1}(z) ... φ^{-a}(z).
        let (a, c) = (-m, k);
        let down = |n: i64| (1..=n).fold(one.clone(), |acc, i| &acc * &inst.z_shift(-i));
        if a >= c {
            (phi.apply(&down(c), -(a - c)), c - a)
        } else {
            (down(a), c - a)
        }
    }
}

/// Product in `H(R, φ, z)`, from `g_m s = φ^m(s) g_m` and the contraction of
/// `g_m g_k` through `yx = z`, `xy = φ^{-1}(z)`.
pub fn gwa_multiply(inst: &GwaInstance, a: &GwaElement, b: &GwaElement) -> GwaElement {
    let mut out = GwaElement::zero(inst.ring());
    for (&m, r) in &a.terms {
        for (&k, s) in &b.terms {
            let (c, d) = generator_product(inst, m, k);
            let coeff = &(r * &inst.phi().apply(s, m)) * &c;
            out.add_term(d, coeff);
        }
    }
    out
}

/// A seeded element with degrees in `-max_degree..=max_degree` and
/// coefficients of `h`-degree at most `max_h_degree`.
pub fn random_element<G: Rng>(
    ring: CoefRing,
    rng: &mut G,
    max_degree: i64,
    max_h_degree: usize,
) -> GwaElement {
    let mut out = GwaElement::zero(ring);
    let m = ring.modulus() as i64;
    for d in -max_degree..=max_degree {
        if rng.gen_bool(0.5) {
            let coeffs: Vec<_> = (0..=max_h_degree)
                .map(|_| {
                    let c: Vec<i64> = (0..ring.nilpotency())
                        .map(|_| rng.gen_range(0..m))
                        .collect();
                    ring.scalar(&c)
                })
                .collect();
            out.add_term(d, Poly::from_coeffs(ring, coeffs));
        }
    }
    out
}

/// `a^n`, with `a^0 = 1`.
pub fn gwa_power(inst: &GwaInstance, a: &GwaElement, n: u32) -> GwaElement {
    (0..n).fold(GwaElement::one(inst.ring()), |acc, _| {
        gwa_multiply(inst, &acc, a)
    })
}

/// Checks `y^n x^n = z φ(z) ... φ^{n-1}(z)` by multiplying out the left side.
pub fn yx_power_identity(inst: &GwaInstance, n: u32) -> bool {
    let ring = inst.ring();
    let lhs = gwa_multiply(
        inst,
        &gwa_power(inst, &GwaElement::y(ring), n),
        &gwa_power(inst, &GwaElement::x(ring), n),
    );
    lhs == GwaElement::from_poly(inst.z_orbit_product(0..n as i64))
}

impl Add for &GwaElement {
    type Output = GwaElement;
    fn add(self, rhs: &GwaElement) -> GwaElement {
        let mut out = self.clone();
        for (&d, r) in &rhs.terms {
            out.add_term(d, r.clone());
        }
        out
    }
}

impl Neg for &GwaElement {
    type Output = GwaElement;
    fn neg(self) -> GwaElement {
        GwaElement {
            ring: self.ring,
            terms: self.terms.iter().map(|(&d, r)| (d, -r)).collect(),
        }
    }
}

impl Sub for &GwaElement {
    type Output = GwaElement;
    fn sub(self, rhs: &GwaElement) -> GwaElement {
        self + &(-rhs)
    }
}

impl fmt::Display for GwaElement {
    /// Highest `y`-degree first, e.g. `3*y^2 + (h+1) + 2*x`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (&d, r) in self.terms.iter().rev() {
            let generator = match d {
                0 => String::new(),
                1 => "y".into(),
                -1 => "x".into(),
                d if d > 0 => format!("y^{d}"),
                d => format!("x^{}", -d),
            };
            let coeff = if r.is_single_term() {
                r.to_string()
            } else {
                format!("({})", r.to_compact_string())
            };
            parts.push(match (generator.is_empty(), r.is_one()) {
                (true, _) => coeff,
                (false, true) => generator,
                (false, false) => format!("{coeff}*{generator}"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for GwaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GwaElement({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::AffineAutomorphism;
    use proptest::prelude::*;

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
    fn defining_relations() {
        let inst = weyl_z4();
        let r = inst.ring();
        let (x, y) = (GwaElement::x(r), GwaElement::y(r));
        assert_eq!(gwa_multiply(&inst, &y, &x), GwaElement::h(r));
        assert_eq!(
            gwa_multiply(&inst, &x, &y),
            GwaElement::from_poly(Poly::from_ints(r, &[-1, 1]))
        );
        let xh = gwa_multiply(&inst, &x, &GwaElement::h(r));
        assert_eq!(xh, GwaElement::term(Poly::from_ints(r, &[-1, 1]), -1));
        // [y, x] = z - φ^{-1}(z) = 1.
        let comm = &gwa_multiply(&inst, &y, &x) - &gwa_multiply(&inst, &x, &y);
        assert_eq!(comm, GwaElement::one(r));
    }

    #[test]
    fn rendering() {
        let inst = weyl_z4();
        let r = inst.ring();
        let e = &(&GwaElement::term(Poly::from_ints(r, &[3]), 2)
            + &GwaElement::from_poly(Poly::from_ints(r, &[1, 1])))
            + &GwaElement::term(Poly::from_ints(r, &[2]), -1);
        assert_eq!(e.to_string(), "3*y^2 + (h+1) + 2*x");
        assert_eq!(GwaElement::zero(r).to_string(), "0");
        let _ = inst;
    }

    #[test]
    fn right_normal_form_roundtrip() {
        let inst = weyl_z4();
        let r = inst.ring();
        let e = GwaElement::term(Poly::h(r), 2);
        let right = e.right_coefficients(&inst);
        assert_eq!(right[&2], Poly::from_ints(r, &[-2, 1]));
        assert_eq!(GwaElement::from_right_coefficients(&inst, &right), e);
    }

    #[test]
    fn yx_powers_on_weyl() {
        let inst = weyl_z4();
        for n in 1..=8 {
            assert!(yx_power_identity(&inst, n));
        }
    }

    fn homogeneous(r: CoefRing) -> impl Strategy<Value = GwaElement> {
        (prop::collection::vec(0i64..4, 0..3), -3i64..4)
            .prop_map(move |(c, d)| GwaElement::term(Poly::from_ints(r, &c), d))
    }

    proptest! {
        #[test]
        fn associative_and_graded(
            a in homogeneous(CoefRing::integers_mod(4).unwrap()),
            b in homogeneous(CoefRing::integers_mod(4).unwrap()),
            c in homogeneous(CoefRing::integers_mod(4).unwrap()),
        ) {
            let inst = weyl_z4();
            let ab_c = gwa_multiply(&inst, &gwa_multiply(&inst, &a, &b), &c);
            let a_bc = gwa_multiply(&inst, &a, &gwa_multiply(&inst, &b, &c));
            prop_assert_eq!(&ab_c, &a_bc);
            let ab = gwa_multiply(&inst, &a, &b);
            if let (Some(da), Some(db), Some(dab)) =
                (a.homogeneous_degree(), b.homogeneous_degree(), ab.homogeneous_degree())
            {
                prop_assert_eq!(dab, da + db);
            }
        }

        #[test]
        fn coefficient_transport(c in prop::collection::vec(0i64..4, 0..4)) {
            let inst = weyl_z4();
            let r = inst.ring();
            let p = Poly::from_ints(r, &c);
            let rp = GwaElement::from_poly(p.clone());
            prop_assert_eq!(
                gwa_multiply(&inst, &GwaElement::x(r), &rp),
                GwaElement::term(inst.phi().apply(&p, -1), -1)
            );
            prop_assert_eq!(
                gwa_multiply(&inst, &GwaElement::y(r), &rp),
                GwaElement::term(inst.phi().apply(&p, 1), 1)
            );
        }
    }
}
