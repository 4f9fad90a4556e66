use crate::error::{Error, Result};
use crate::linalg::zmod;
use crate::ring::poly::Poly;
use crate::ring::scalar::CoefRing;

/// The quotient `R/(f)` of `R = k[b]/(b^t)[h]` by a polynomial with unit
/// leading coefficient. Elements are canonical remainders of degree `< deg f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientRing {
    modulus: Poly,
}

impl QuotientRing {
    /// `f` is replaced by its monic associate, which generates the same ideal.
    pub fn new(f: &Poly) -> Result<Self> {
        let modulus = f.monic()?;
        Ok(QuotientRing { modulus })
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn ring(&self) -> CoefRing {
        self.modulus.ring()
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    pub fn reduce(&self, p: &Poly) -> Poly {
        p.rem(&self.modulus).expect("modulus is monic")
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&(a * b))
    }

    pub fn pow(&self, a: &Poly, mut exp: u64) -> Poly {
        let mut base = self.reduce(a);
        let mut acc = self.reduce(&Poly::one(self.ring()));
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn contains_zero(&self, p: &Poly) -> bool {
        self.reduce(p).is_zero()
    }

    fn flatten(&self, p: &Poly) -> Vec<u64> {
        let t = self.ring().nilpotency();
        let mut out = vec![0u64; self.degree() * t];
        for (i, c) in p.coeffs().iter().enumerate() {
            out[i * t..(i + 1) * t].copy_from_slice(c.coeffs());
        }
        out
    }

    fn unflatten(&self, v: &[u64]) -> Poly {
        let ring = self.ring();
        let t = ring.nilpotency();
        let coeffs = v
            .chunks(t)
            .map(|ch| ring.scalar(&ch.iter().map(|&x| x as i64).collect::<Vec<_>>()))
            .collect();
        Poly::from_coeffs(ring, coeffs)
    }

    /// Matrix of `y -> x*y` over `Z/m` in the basis `b^j h^i` (row-major).
    fn multiplication_matrix(&self, x: &Poly) -> Vec<Vec<u64>> {
        let ring = self.ring();
        let t = ring.nilpotency();
        let n = self.degree() * t;
        let mut rows = vec![vec![0u64; n]; n];
        for i in 0..self.degree() {
            for j in 0..t {
                let b = ring.b().pow(j as u64);
                let image = self.mul(x, &Poly::monomial(b, i));
                for (row, v) in rows.iter_mut().zip(self.flatten(&image)) {
                    row[i * t + j] = v;
                }
            }
        }
        rows
    }

    /// Some `y` with `x*y = target`, found by a linear solve over `Z/m`.
    pub fn solve_mul(&self, x: &Poly, target: &Poly) -> Option<Poly> {
        let a = self.multiplication_matrix(&self.reduce(x));
        let rhs = self.flatten(&self.reduce(target));
        let sol = zmod::solve(&a, rhs.len(), &rhs, self.ring().modulus())?;
        Some(self.unflatten(&sol))
    }

    /// Inverse of `x` in `R/(f)`.
    pub fn unit_inverse(&self, x: &Poly) -> Result<Poly> {
        self.solve_mul(x, &Poly::one(self.ring()))
            .ok_or_else(|| Error::NonUnit(format!("{x} modulo {}", self.modulus)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4_mod_h2() -> QuotientRing {
        let r = CoefRing::integers_mod(4).unwrap();
        QuotientRing::new(&Poly::from_ints(r, &[0, 0, 1])).unwrap()
    }

    #[test]
    fn unit_inverse_examples() {
        let q = z4_mod_h2();
        let r = q.ring();
        assert_eq!(q.unit_inverse(&Poly::one(r)).unwrap(), Poly::one(r));
        assert_eq!(
            q.unit_inverse(&Poly::from_ints(r, &[3])).unwrap(),
            Poly::from_ints(r, &[3])
        );
        assert!(matches!(
            q.unit_inverse(&Poly::h(r)),
            Err(Error::NonUnit(_))
        ));
    }

    #[test]
    fn unit_with_nilpotent_part() {
        let q = z4_mod_h2();
        let r = q.ring();
        // h is nilpotent modulo h^2, so 3 + h is a unit.
        let x = Poly::from_ints(r, &[3, 1]);
        let y = q.unit_inverse(&x).unwrap();
        assert!(q.mul(&x, &y).is_one());
    }

    #[test]
    fn inverse_over_deformed_coefficients() {
        let r = CoefRing::new(5, 2).unwrap();
        let q = QuotientRing::new(&Poly::from_ints(r, &[0, 0, 0, 1])).unwrap();
        let x = &Poly::constant(r.scalar(&[2, 1])) + &Poly::monomial(r.b(), 2);
        let y = q.unit_inverse(&x).unwrap();
        assert!(q.mul(&x, &y).is_one());
    }
}
