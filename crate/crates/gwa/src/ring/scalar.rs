use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::zmod::{self, add_mod, inv_mod, mul_mod, reduce_signed, sub_mod};

/// Largest supported nilpotency degree `t` of the formal nilpotent `b`.
pub const MAX_NILPOTENCY: usize = 6;

/// The coefficient ring `k[b]/(b^t)` with `k = Z/mZ` and `m` a prime power.
///
/// `t = 1` means there is no formal nilpotent; `b` is then zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCoefRing", into = "RawCoefRing")]
pub struct CoefRing {
    modulus: u64,
    nilpotency: usize,
    prime: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCoefRing {
    modulus: u64,
    nilpotency: usize,
}

impl TryFrom<RawCoefRing> for CoefRing {
    type Error = Error;
    fn try_from(raw: RawCoefRing) -> Result<Self> {
        CoefRing::new(raw.modulus, raw.nilpotency)
    }
}

impl From<CoefRing> for RawCoefRing {
    fn from(r: CoefRing) -> Self {
        RawCoefRing {
            modulus: r.modulus,
            nilpotency: r.nilpotency,
        }
    }
}

fn prime_of_power(m: u64) -> Option<u64> {
    if m < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= m && !m.is_multiple_of(p) {
        p += 1;
    }
    if !m.is_multiple_of(p) {
        p = m;
    }
    let mut rest = m;
    while rest.is_multiple_of(p) {
        rest /= p;
    }
    (rest == 1).then_some(p)
}

impl CoefRing {
    pub fn new(modulus: u64, nilpotency: usize) -> Result<Self> {
        let prime = prime_of_power(modulus)
            .ok_or_else(|| Error::InvalidRing(format!("modulus {modulus} is not a prime power")))?;
        if modulus > u32::MAX as u64 {
            return Err(Error::InvalidRing(format!(
                "modulus {modulus} is too large"
            )));
        }
        if nilpotency == 0 || nilpotency > MAX_NILPOTENCY {
            return Err(Error::InvalidRing(format!(
                "nilpotency degree {nilpotency} outside 1..={MAX_NILPOTENCY}"
            )));
        }
        Ok(CoefRing {
            modulus,
            nilpotency,
            prime,
        })
    }

    /// `Z/mZ` with no formal nilpotent.
    pub fn integers_mod(modulus: u64) -> Result<Self> {
        Self::new(modulus, 1)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn nilpotency(&self) -> usize {
        self.nilpotency
    }

    /// The residue characteristic `p` of `m = p^n`.
    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// True when the ring is the prime field `F_p`.
    pub fn is_field(&self) -> bool {
        self.nilpotency == 1 && self.modulus == self.prime
    }

    /// Smallest `L` with `(p, b)^L = 0`.
    pub fn radical_length(&self) -> usize {
        let mut n = 0;
        let mut m = self.modulus;
        while m > 1 {
            m /= self.prime;
            n += 1;
        }
        n + self.nilpotency - 1
    }

    pub fn zero(&self) -> CoefScalar {
        CoefScalar {
            ring: *self,
            c: [0; MAX_NILPOTENCY],
        }
    }

    pub fn one(&self) -> CoefScalar {
        self.int(1)
    }

    pub fn int(&self, v: i64) -> CoefScalar {
        let mut s = self.zero();
        s.c[0] = reduce_signed(v as i128, self.modulus);
        s
    }

    /// The formal nilpotent `b`; zero when `t = 1`.
    pub fn b(&self) -> CoefScalar {
        let mut s = self.zero();
        if self.nilpotency > 1 {
            s.c[1] = 1;
        }
        s
    }

    /// Builds `c_0 + c_1 b + ...` from signed coefficients; extra entries
    /// beyond `t` are dropped since `b^t = 0`.
    pub fn scalar(&self, coeffs: &[i64]) -> CoefScalar {
        let mut s = self.zero();
        for (slot, &v) in s.c.iter_mut().zip(coeffs).take(self.nilpotency) {
            *slot = reduce_signed(v as i128, self.modulus);
        }
        s
    }

    /// Every element of the ring, in lexicographic order of coefficients.
    pub fn elements(&self) -> impl Iterator<Item = CoefScalar> + '_ {
        let total = (self.modulus as u128).pow(self.nilpotency as u32);
        (0..total).map(move |mut k| {
            let mut s = self.zero();
            for j in 0..self.nilpotency {
                s.c[j] = (k % self.modulus as u128) as u64;
                k /= self.modulus as u128;
            }
            s
        })
    }
}

impl fmt::Display for CoefRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.nilpotency == 1 {
            write!(f, "Z/{}", self.modulus)
        } else {
            write!(f, "Z/{}[b]/(b^{})", self.modulus, self.nilpotency)
        }
    }
}

/// An element `c_0 + c_1 b + ... + c_{t-1} b^{t-1}` of `k[b]/(b^t)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoefScalar {
    ring: CoefRing,
    c: [u64; MAX_NILPOTENCY],
}

impl CoefScalar {
    pub fn ring(&self) -> CoefRing {
        self.ring
    }

    /// Residues `c_0, ..., c_{t-1}`.
    pub fn coeffs(&self) -> &[u64] {
        &self.c[..self.ring.nilpotency]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().iter().all(|&v| v == 0)
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring.one()
    }

    /// Image in the residue field `F_p`.
    pub fn residue(&self) -> u64 {
        self.c[0] % self.ring.prime
    }

    /// The ring is local with maximal ideal `(p, b)`.
    pub fn is_unit(&self) -> bool {
        self.residue() != 0
    }

    pub fn inverse(&self) -> Option<CoefScalar> {
        let m = self.ring.modulus;
        let c0_inv = inv_mod(self.c[0], m)?;
        // self = c0 (1 + n) with n nilpotent; invert the geometric series.
        let c0_inv_s = self.ring.int(c0_inv as i64);
        let n = *self * c0_inv_s - self.ring.one();
        let mut acc = self.ring.one();
        let mut term = self.ring.one();
        for _ in 1..self.ring.nilpotency {
            term *= -n;
            acc += term;
        }
        Some(acc * c0_inv_s)
    }

    pub fn pow(&self, mut exp: u64) -> CoefScalar {
        let mut base = *self;
        let mut acc = self.ring.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc *= base;
            }
            base *= base;
            exp >>= 1;
        }
        acc
    }

    /// Smallest `s >= 1` with `self^s = 0`, or `None` if not nilpotent.
    pub fn nilpotency_index(&self) -> Option<usize> {
        if self.is_unit() {
            return None;
        }
        let mut acc = *self;
        for s in 1..=self.ring.radical_length().max(1) {
            if acc.is_zero() {
                return Some(s);
            }
            acc *= *self;
        }
        acc.is_zero().then_some(self.ring.radical_length() + 1)
    }

    /// Matrix of multiplication by `self` on the `Z/m`-basis `1, b, ..., b^{t-1}`.
    pub fn multiplication_matrix(&self) -> Vec<Vec<u64>> {
        let t = self.ring.nilpotency;
        (0..t)
            .map(|i| {
                (0..t)
                    .map(|j| if i >= j { self.c[i - j] } else { 0 })
                    .collect()
            })
            .collect()
    }

    /// Some `q` with `divisor * q = self`, if one exists.
    pub fn divide(&self, divisor: &CoefScalar) -> Option<CoefScalar> {
        if let Some(inv) = divisor.inverse() {
            return Some(*self * inv);
        }
        let sol = zmod::solve(
            &divisor.multiplication_matrix(),
            self.ring.nilpotency,
            self.coeffs(),
            self.ring.modulus,
        )?;
        let mut q = self.ring.zero();
        q.c[..sol.len()].copy_from_slice(&sol);
        Some(q)
    }
}

impl Add for CoefScalar {
    type Output = CoefScalar;
    fn add(mut self, rhs: CoefScalar) -> CoefScalar {
        self += rhs;
        self
    }
}

impl AddAssign for CoefScalar {
    fn add_assign(&mut self, rhs: CoefScalar) {
        debug_assert_eq!(self.ring, rhs.ring);
        let m = self.ring.modulus;
        for j in 0..self.ring.nilpotency {
            self.c[j] = add_mod(self.c[j], rhs.c[j], m);
        }
    }
}

impl Sub for CoefScalar {
    type Output = CoefScalar;
    fn sub(mut self, rhs: CoefScalar) -> CoefScalar {
        self -= rhs;
        self
    }
}

impl SubAssign for CoefScalar {
    fn sub_assign(&mut self, rhs: CoefScalar) {
        debug_assert_eq!(self.ring, rhs.ring);
        let m = self.ring.modulus;
        for j in 0..self.ring.nilpotency {
            self.c[j] = sub_mod(self.c[j], rhs.c[j], m);
        }
    }
}

impl Neg for CoefScalar {
    type Output = CoefScalar;
    fn neg(self) -> CoefScalar {
        self.ring.zero() - self
    }
}

impl Mul for CoefScalar {
    type Output = CoefScalar;
    fn mul(self, rhs: CoefScalar) -> CoefScalar {
        debug_assert_eq!(self.ring, rhs.ring);
        let t = self.ring.nilpotency;
        let m = self.ring.modulus;
        let mut out = self.ring.zero();
        for i in 0..t {
            if self.c[i] == 0 {
                continue;
            }
            for j in 0..t - i {
                out.c[i + j] = add_mod(out.c[i + j], mul_mod(self.c[i], rhs.c[j], m), m);
            }
        }
        out
    }
}

impl MulAssign for CoefScalar {
    fn mul_assign(&mut self, rhs: CoefScalar) {
        *self = *self * rhs;
    }
}

impl fmt::Debug for CoefScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.ring)
    }
}

/// Renders `c_0 + c_1*b + c_2*b^2`, skipping zero terms.
impl fmt::Display for CoefScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (j, &v) in self.coeffs().iter().enumerate() {
            if v == 0 {
                continue;
            }
            terms.push(match j {
                0 => format!("{v}"),
                1 => format!("{v}*b"),
                _ => format!("{v}*b^{j}"),
            });
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

    fn f5b2() -> CoefRing {
        CoefRing::new(5, 2).unwrap()
    }

    #[test]
    fn rejects_composite_moduli() {
        assert!(CoefRing::new(6, 1).is_err());
        assert!(CoefRing::new(9, 1).is_ok());
        assert!(CoefRing::new(4, 0).is_err());
    }

    #[test]
    fn b_is_nilpotent_of_declared_degree() {
        let r = CoefRing::new(4, 3).unwrap();
        let b = r.b();
        assert!(!b.pow(2).is_zero());
        assert!(b.pow(3).is_zero());
        assert_eq!(b.nilpotency_index(), Some(3));
        let z4 = CoefRing::integers_mod(4).unwrap();
        assert_eq!(z4.int(2).nilpotency_index(), Some(2));
        assert_eq!(z4.int(3).nilpotency_index(), None);
    }

    #[test]
    fn inverse_of_deformed_unit() {
        let r = f5b2();
        let q = r.scalar(&[2, 1]);
        let inv = q.inverse().unwrap();
        assert!((q * inv).is_one());
        assert_eq!(r.b().inverse(), None);
    }

    #[test]
    fn division_by_nilpotent() {
        let z4 = CoefRing::integers_mod(4).unwrap();
        let q = z4.int(2).divide(&z4.int(2)).unwrap();
        assert_eq!(z4.int(2) * q, z4.int(2));
        assert_eq!(z4.int(1).divide(&z4.int(2)), None);
        let r = f5b2();
        let q = r.scalar(&[0, 3]).divide(&r.b()).unwrap();
        assert_eq!(r.b() * q, r.scalar(&[0, 3]));
    }

    #[test]
    fn display() {
        let r = CoefRing::new(4, 2).unwrap();
        assert_eq!(r.scalar(&[2, 1]).to_string(), "2 + 1*b");
        assert_eq!(r.zero().to_string(), "0");
    }

    fn scalar_in(r: CoefRing) -> impl Strategy<Value = CoefScalar> {
        prop::collection::vec(0i64..r.modulus() as i64, r.nilpotency())
            .prop_map(move |v| r.scalar(&v))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in scalar_in(CoefRing::new(9, 3).unwrap()),
                       b in scalar_in(CoefRing::new(9, 3).unwrap()),
                       c in scalar_in(CoefRing::new(9, 3).unwrap())) {
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * b, b * a);
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!((a + b) - b, a);
            if let Some(inv) = a.inverse() {
                prop_assert!((a * inv).is_one());
            } else {
                prop_assert!(!a.is_unit());
            }
        }
    }
}
