use crate::error::{Error, Result};
use crate::linalg::zmod::{add_mod, inv_mod, mul_mod, sub_mod};
use crate::ring::poly::Poly;

/// A certificate `alpha*a + beta*b = 1` of comaximality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BezoutWitness {
    pub alpha: Poly,
    pub beta: Poly,
}

impl BezoutWitness {
    /// Re-multiplies and checks the identity exactly.
    pub fn verify(&self, a: &Poly, b: &Poly) -> bool {
        (&(&self.alpha * a) + &(&self.beta * b)).is_one()
    }
}

// Dense polynomials over F_p, ascending, no trailing zeros.
type Fp = Vec<u64>;

fn trim(mut v: Fp) -> Fp {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                sub_mod(
                    a.get(i).copied().unwrap_or(0),
                    b.get(i).copied().unwrap_or(0),
                    p,
                )
            })
            .collect(),
    )
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    trim(out)
}

fn fp_div_rem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p).expect("nonzero leading coefficient in a field");
    let mut rem = a.clone();
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![0u64; rem.len() - db];
    for k in (db..rem.len()).rev() {
        let f = mul_mod(rem[k], inv, p);
        quot[k - db] = f;
        for (j, &c) in b.iter().enumerate() {
            rem[k - db + j] = sub_mod(rem[k - db + j], mul_mod(f, c, p), p);
        }
    }
    (trim(quot), trim(rem))
}

/// Extended Euclid in `F_p[h]`: `(g, s, t)` with `s*a + t*b = g`.
fn fp_xgcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp_div_rem(&r0, &r1, p);
        let s2 = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t2 = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s2);
        (t0, t1) = (t1, t2);
    }
    (r0, s0, t0)
}

fn render_fp(v: &Fp) -> String {
    if v.is_empty() {
        return "0".into();
    }
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| match k {
            0 => format!("{c}"),
            1 => format!("{c}*h"),
            _ => format!("{c}*h^{k}"),
        })
        .collect();
    terms.join(" + ")
}

/// Computes `alpha, beta` with `alpha*a + beta*b = 1` over `(Z/p^n)[b]/(b^t)[h]`.
///
/// Euclid runs in the residue field `F_p[h]`; the resulting identity
/// `alpha*a + beta*b = 1 + eps` has `eps` in the nilpotent ideal `(p, b)`, and
/// the Newton step `(alpha, beta) <- (alpha, beta)*(2 - (alpha*a + beta*b))`
/// squares `eps` until it vanishes. When `b` has a unit leading coefficient
/// the witness is then normalized to `deg alpha < deg b`.
pub fn bezout_witness(a: &Poly, b: &Poly) -> Result<BezoutWitness> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch);
    }
    let ring = a.ring();
    let p = ring.prime();
    let (g, s, t) = fp_xgcd(&a.residue(), &b.residue(), p);
    if g.len() != 1 {
        return Err(Error::NotComaximal(render_fp(&g)));
    }
    let g_inv = inv_mod(g[0], p).expect("nonzero constant");
    let scale = |v: &Fp| v.iter().map(|&c| mul_mod(c, g_inv, p)).collect::<Vec<_>>();
    let mut alpha = Poly::from_residue(ring, &scale(&s));
    let mut beta = Poly::from_residue(ring, &scale(&t));

    let two = Poly::from_ints(ring, &[2]);
    let bound = 2 * (ring.radical_length() + 1);
    for _ in 0..bound {
        let combo = &(&alpha * a) + &(&beta * b);
        if combo.is_one() {
            break;
        }
        let correction = &two - &combo;
        alpha = &alpha * &correction;
        beta = &beta * &correction;
    }

    if b.degree().unwrap_or(0) >= 1 && b.leading_coeff().is_some_and(|c| c.is_unit()) {
        alpha = alpha.rem(b)?;
        let rest = &Poly::one(ring) - &(&alpha * a);
        beta = rest.exact_div(b)?;
    }
    let witness = BezoutWitness { alpha, beta };
    debug_assert!(witness.verify(a, b));
    Ok(witness)
}
