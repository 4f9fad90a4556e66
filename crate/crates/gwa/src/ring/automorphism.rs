use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::poly::Poly;
use crate::ring::scalar::{CoefRing, CoefScalar};

/// The ring automorphism `h -> a*h + c` of `k[b]/(b^t)[h]`, fixing scalars.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AffineAutomorphism {
    a: CoefScalar,
    c: CoefScalar,
}

impl AffineAutomorphism {
    /// `a` must be a unit.
    pub fn new(a: CoefScalar, c: CoefScalar) -> Result<Self> {
        if !a.is_unit() {
            return Err(Error::NonUnit(format!("automorphism slope {a}")));
        }
        Ok(AffineAutomorphism { a, c })
    }

    pub fn identity(ring: CoefRing) -> Self {
        AffineAutomorphism {
            a: ring.one(),
            c: ring.zero(),
        }
    }

    /// Translation `h -> h + shift`.
    pub fn translation(ring: CoefRing, shift: i64) -> Self {
        AffineAutomorphism {
            a: ring.one(),
            c: ring.int(shift),
        }
    }

    pub fn slope(&self) -> CoefScalar {
        self.a
    }

    pub fn offset(&self) -> CoefScalar {
        self.c
    }

    pub fn ring(&self) -> CoefRing {
        self.a.ring()
    }

    pub fn inverse(&self) -> Self {
        let a_inv = self.a.inverse().expect("slope is a unit");
        AffineAutomorphism {
            a: a_inv,
            c: -(a_inv * self.c),
        }
    }

    /// `self ∘ other`, i.e. `h -> self(other(h))`.
    pub fn compose(&self, other: &Self) -> Self {
        // other(h) = a' h + c'; applying self gives a'(a h + c) + c'.
        AffineAutomorphism {
            a: other.a * self.a,
            c: other.a * self.c + other.c,
        }
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { *self };
        let mut acc = Self::identity(self.ring());
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.c.is_zero()
    }

    /// The image `φ^k(h)` as a polynomial.
    pub fn image_of_h(&self, k: i64) -> Poly {
        let p = self.pow(k);
        Poly::linear(p.a, p.c)
    }

    /// `φ^power(p)`, i.e. `p(φ^power(h))`.
    pub fn apply(&self, p: &Poly, power: i64) -> Poly {
        let f = self.pow(power);
        p.compose_affine(f.a, f.c)
    }

    /// Evaluates `φ^power(h)` at a scalar weight.
    pub fn shift_weight(&self, weight: CoefScalar, power: i64) -> CoefScalar {
        let f = self.pow(power);
        f.a * weight + f.c
    }
}

/// Wire form `{"a": ..., "c": ...}` with scalars as coefficient arrays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineSpec {
    pub a: Vec<i64>,
    pub c: Vec<i64>,
}

impl AffineSpec {
    pub fn build(&self, ring: CoefRing) -> Result<AffineAutomorphism> {
        AffineAutomorphism::new(ring.scalar(&self.a), ring.scalar(&self.c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn translation_powers() {
        let r = CoefRing::integers_mod(4).unwrap();
        let phi = AffineAutomorphism::translation(r, 1);
        let h = Poly::h(r);
        assert_eq!(phi.apply(&h, 3), Poly::from_ints(r, &[3, 1]));
        let h2 = Poly::from_ints(r, &[0, 0, 1]);
        assert_eq!(phi.apply(&h2, -1), Poly::from_ints(r, &[1, -2, 1]));
    }

    #[test]
    fn quantized_inverse_powers() {
        // φ^{-1}(h) = 2h over F_5, so φ^{-2}(h) = 4h.
        let r = CoefRing::integers_mod(5).unwrap();
        let phi_inv = AffineAutomorphism::new(r.int(2), r.zero()).unwrap();
        let phi = phi_inv.inverse();
        assert_eq!(phi.apply(&Poly::h(r), -2), Poly::from_ints(r, &[0, 4]));
        assert!(phi.compose(&phi_inv).is_identity());
        let basis = [Poly::one(r), Poly::h(r), Poly::from_ints(r, &[0, 0, 1])];
        for p in &basis {
            assert_eq!(phi.apply(&phi.apply(p, -1), 1), *p);
        }
    }

    #[test]
    fn non_unit_slope_is_rejected() {
        let r = CoefRing::integers_mod(4).unwrap();
        assert!(AffineAutomorphism::new(r.int(2), r.zero()).is_err());
    }

    proptest! {
        #[test]
        fn powers_compose_and_respect_products(
            a in prop::collection::vec(0i64..25, 0..4),
            b in prop::collection::vec(0i64..25, 0..4),
            j in -4i64..5,
            k in -4i64..5,
        ) {
            let r = CoefRing::new(5, 2).unwrap();
            let phi = AffineAutomorphism::new(r.scalar(&[3, 1]), r.scalar(&[1, 2])).unwrap();
            let to_poly = |v: &[i64]| Poly::from_coeffs(r, v.iter().map(|&x| r.scalar(&[x % 5, x / 5])).collect());
            let (p, q) = (to_poly(&a), to_poly(&b));
            prop_assert_eq!(phi.apply(&phi.apply(&p, j), k), phi.apply(&p, j + k));
            prop_assert_eq!(phi.apply(&(&p * &q), k), &phi.apply(&p, k) * &phi.apply(&q, k));
        }
    }
}
