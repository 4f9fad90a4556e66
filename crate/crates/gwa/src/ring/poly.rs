use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::ring::scalar::{CoefRing, CoefScalar};

/// A univariate polynomial in `h` over `k[b]/(b^t)`.
///
/// Coefficients are stored in ascending degree with no trailing zeros, so the
/// zero polynomial has an empty coefficient vector and equality is
/// coefficientwise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ring: CoefRing,
    coeffs: Vec<CoefScalar>,
}

impl Poly {
    fn normalize(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn from_coeffs(ring: CoefRing, coeffs: Vec<CoefScalar>) -> Self {
        debug_assert!(coeffs.iter().all(|c| c.ring() == ring));
        Poly { ring, coeffs }.normalize()
    }

    /// Integer coefficients in ascending degree, reduced into the ring.
    pub fn from_ints(ring: CoefRing, coeffs: &[i64]) -> Self {
        Self::from_coeffs(ring, coeffs.iter().map(|&v| ring.int(v)).collect())
    }

    pub fn zero(ring: CoefRing) -> Self {
        Poly {
            ring,
            coeffs: Vec::new(),
        }
    }

    pub fn one(ring: CoefRing) -> Self {
        Self::constant(ring.one())
    }

    pub fn constant(c: CoefScalar) -> Self {
        Self::from_coeffs(c.ring(), vec![c])
    }

    /// The variable `h`.
    pub fn h(ring: CoefRing) -> Self {
        Self::monomial(ring.one(), 1)
    }

    pub fn monomial(c: CoefScalar, degree: usize) -> Self {
        let mut coeffs = vec![c.ring().zero(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(c.ring(), coeffs)
    }

    /// `a*h + c`.
    pub fn linear(a: CoefScalar, c: CoefScalar) -> Self {
        Self::from_coeffs(a.ring(), vec![c, a])
    }

    pub fn ring(&self) -> CoefRing {
        self.ring
    }

    pub fn coeffs(&self) -> &[CoefScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> CoefScalar {
        self.coeffs
            .get(k)
            .copied()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn leading_coeff(&self) -> Option<CoefScalar> {
        self.coeffs.last().copied()
    }

    pub fn scale(&self, c: CoefScalar) -> Poly {
        Self::from_coeffs(self.ring, self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn pow(&self, mut exp: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.ring);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, at: CoefScalar) -> CoefScalar {
        self.coeffs
            .iter()
            .rev()
            .fold(self.ring.zero(), |acc, &c| acc * at + c)
    }

    /// `p(a*h + c)`.
    pub fn compose_affine(&self, a: CoefScalar, c: CoefScalar) -> Poly {
        let inner = Poly::linear(a, c);
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(self.ring), |acc, &k| {
                &(&acc * &inner) + &Poly::constant(k)
            })
    }

    /// The associate of `self` with leading coefficient 1; requires a unit
    /// leading coefficient.
    pub fn monic(&self) -> Result<Poly> {
        let lc = self
            .leading_coeff()
            .ok_or_else(|| Error::NonUnit("zero polynomial has no monic associate".into()))?;
        let inv = lc
            .inverse()
            .ok_or_else(|| Error::NonUnit(format!("leading coefficient of {self}")))?;
        Ok(self.scale(inv))
    }

    /// Division with remainder by a polynomial whose leading coefficient is a
    /// unit. The remainder has degree below `deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let lc = divisor
            .leading_coeff()
            .ok_or_else(|| Error::NotDivisible("division by zero polynomial".into()))?;
        let lc_inv = lc
            .inverse()
            .ok_or_else(|| Error::NonUnit(format!("leading coefficient of {divisor}")))?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(self.ring), self.clone()));
        }
        let mut quot = vec![self.ring.zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let f = rem[k] * lc_inv;
            if f.is_zero() {
                continue;
            }
            quot[k - dd] = f;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + j] -= f * d;
            }
        }
        rem.truncate(dd);
        Ok((
            Poly::from_coeffs(self.ring, quot),
            Poly::from_coeffs(self.ring, rem),
        ))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Exact quotient `self / divisor`; errors if the remainder is nonzero.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotDivisible(format!("{self} by {divisor}")))
        }
    }

    /// Coefficientwise division by a scalar, if every coefficient is divisible.
    pub fn divide_scalar(&self, d: &CoefScalar) -> Option<Poly> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.divide(d))
            .collect::<Option<Vec<_>>>()?;
        Some(Poly::from_coeffs(self.ring, coeffs))
    }

    /// Image in `F_p[h]`, ascending coefficients, trailing zeros removed.
    pub fn residue(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.coeffs.iter().map(|c| c.residue()).collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    /// Lifts residues in `[0, p)` back to the coefficient ring.
    pub fn from_residue(ring: CoefRing, residue: &[u64]) -> Poly {
        Self::from_ints(ring, &residue.iter().map(|&v| v as i64).collect::<Vec<_>>())
    }

    /// McCoy: a polynomial over the local ring is a zero divisor exactly when
    /// every coefficient lies in the maximal ideal.
    pub fn is_zero_divisor(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_unit())
    }

    /// Compact rendering without spaces, used inside parentheses.
    pub fn to_compact_string(&self) -> String {
        self.to_string().replace(' ', "")
    }

    /// True when the rendering is a single term.
    pub(crate) fn is_single_term(&self) -> bool {
        let terms: usize = self
            .coeffs
            .iter()
            .map(|c| c.coeffs().iter().filter(|&&v| v != 0).count())
            .sum();
        terms <= 1
    }
}

fn add_coeffs(a: &Poly, b: &Poly, negate: bool) -> Poly {
    debug_assert_eq!(a.ring, b.ring);
    let n = a.coeffs.len().max(b.coeffs.len());
    let coeffs = (0..n)
        .map(|k| {
            if negate {
                a.coeff(k) - b.coeff(k)
            } else {
                a.coeff(k) + b.coeff(k)
            }
        })
        .collect();
    Poly::from_coeffs(a.ring, coeffs)
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        add_coeffs(self, rhs, false)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        add_coeffs(self, rhs, true)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.ring, self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.ring, rhs.ring);
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.ring);
        }
        let mut out = vec![self.ring.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(self.ring, out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({} over {})", self, self.ring)
    }
}

fn h_power(k: usize) -> String {
    match k {
        0 => String::new(),
        1 => "h".into(),
        _ => format!("h^{k}"),
    }
}

/// Canonical text form: the `b^0` part in descending powers of `h`, followed
/// by the `b^j` parts, e.g. `2*h^3 + h^2 + 1 + 1*b*h`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for j in 0..self.ring.nilpotency() {
            for k in (0..self.coeffs.len()).rev() {
                let v = self.coeffs[k].coeffs()[j];
                if v == 0 {
                    continue;
                }
                let hp = h_power(k);
                let bp = match j {
                    0 => String::new(),
                    1 => "b".into(),
                    _ => format!("b^{j}"),
                };
                let term = match (j, k) {
                    (0, 0) => format!("{v}"),
                    (0, _) if v == 1 => hp,
                    (0, _) => format!("{v}*{hp}"),
                    (_, 0) => format!("{v}*{bp}"),
                    _ => format!("{v}*{bp}*{hp}"),
                };
                terms.push(term);
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z4() -> CoefRing {
        CoefRing::integers_mod(4).unwrap()
    }

    #[test]
    fn canonical_rendering() {
        let r = CoefRing::new(4, 2).unwrap();
        let mut p = Poly::from_ints(r, &[1, 0, 1, 2]);
        p = &p + &Poly::monomial(r.b(), 1);
        assert_eq!(p.to_string(), "2*h^3 + h^2 + 1 + 1*b*h");
        assert_eq!(Poly::zero(r).to_string(), "0");
        assert_eq!(Poly::from_ints(z4(), &[1, 1]).to_compact_string(), "h+1");
    }

    #[test]
    fn division_by_unit_leading_coefficient() {
        let r = z4();
        let tau = Poly::from_ints(r, &[0, 1, 1]);
        let p = Poly::from_ints(r, &[1, 0, 1, 2]);
        let (q, rem) = p.div_rem(&tau).unwrap();
        assert_eq!(&(&q * &tau) + &rem, p);
        assert!(rem.degree().unwrap_or(0) < 2);
        assert!(p.div_rem(&Poly::from_ints(r, &[1, 2])).is_err());
    }

    #[test]
    fn zero_divisor_test_follows_mccoy() {
        let r = z4();
        assert!(Poly::from_ints(r, &[2, 2]).is_zero_divisor());
        assert!(!Poly::from_ints(r, &[2, 1]).is_zero_divisor());
        // 2 * (2h + 2) = 0
        assert!((&Poly::from_ints(r, &[2]) * &Poly::from_ints(r, &[2, 2])).is_zero());
    }

    #[test]
    fn affine_substitution() {
        let r = z4();
        let p = Poly::from_ints(r, &[0, 0, 1]);
        // (h - 1)^2 = h^2 - 2h + 1
        assert_eq!(
            p.compose_affine(r.one(), r.int(-1)),
            Poly::from_ints(r, &[1, -2, 1])
        );
    }

    fn poly_in(r: CoefRing) -> impl Strategy<Value = Poly> {
        prop::collection::vec(
            prop::collection::vec(0i64..r.modulus() as i64, r.nilpotency()),
            0..5,
        )
        .prop_map(move |cs| Poly::from_coeffs(r, cs.iter().map(|c| r.scalar(c)).collect()))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in poly_in(CoefRing::new(4, 2).unwrap()),
                       b in poly_in(CoefRing::new(4, 2).unwrap()),
                       c in poly_in(CoefRing::new(4, 2).unwrap())) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in poly_in(CoefRing::new(9, 1).unwrap()),
                                        b in poly_in(CoefRing::new(9, 1).unwrap()),
                                        x in 0i64..9) {
            let r = a.ring();
            let at = r.int(x);
            prop_assert_eq!((&a * &b).eval(at), a.eval(at) * b.eval(at));
            prop_assert_eq!((&a + &b).eval(at), a.eval(at) + b.eval(at));
        }
    }
}
