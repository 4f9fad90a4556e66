use crate::error::{Error, Result};
use crate::linalg::{zmod, Matrix};
use crate::module::MatrixModule;

/// Upper bound on projective points of `ker X` visited by [`simple_check`].
pub const MAX_POINTS: u64 = 1 << 20;

/// Row-reduced span over `F_p`, grown one vector at a time.
struct FieldSpan {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl FieldSpan {
    fn new(p: u64) -> Self {
        FieldSpan {
            p,
            rows: Vec::new(),
        }
    }

    /// Adds `v` if it is new; returns whether it was.
    fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let p = self.p;
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c != 0 {
                for (a, &b) in v.iter_mut().zip(row) {
                    *a = zmod::sub_mod(*a, zmod::mul_mod(c, b, p), p);
                }
            }
        }
        let Some(pivot) = v.iter().position(|&c| c != 0) else {
            return false;
        };
        let inv = zmod::inv_mod(v[pivot], p).expect("field");
        v.iter_mut().for_each(|c| *c = zmod::mul_mod(*c, inv, p));
        for (_, row) in self.rows.iter_mut() {
            let c = row[pivot];
            if c != 0 {
                for (a, &b) in row.iter_mut().zip(&v) {
                    *a = zmod::sub_mod(*a, zmod::mul_mod(c, b, p), p);
                }
            }
        }
        self.rows.push((pivot, v));
        true
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }
}

fn residue_mat_vec(a: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
    zmod::mat_vec(a, v, p)
}

/// Dimension of the submodule generated by `v` over `F_p`.
fn closure_dim(actions: &[Vec<Vec<u64>>], v: Vec<u64>, p: u64) -> usize {
    let mut span = FieldSpan::new(p);
    let mut queue = vec![v];
    while let Some(w) = queue.pop() {
        if span.insert(w.clone()) {
            for a in actions {
                queue.push(residue_mat_vec(a, &w, p));
            }
        }
    }
    span.dim()
}

fn require_field(m: &MatrixModule) -> Result<u64> {
    let ring = m.instance().ring();
    if !ring.is_field() {
        return Err(Error::UnsupportedRing(format!(
            "simplicity is decided over prime fields only, not {ring}"
        )));
    }
    Ok(ring.prime())
}

/// Whether `M` has no proper nonzero submodule.
///
/// Every nonzero submodule contains a nonzero vector killed by the nilpotent
/// `X`, so it suffices to close each projective point of `ker X` under `H`,
/// `X`, `Y`. Cost is `(p^k - 1)/(p - 1)` closures for `k = dim ker X`.
pub fn simple_check(m: &MatrixModule) -> Result<bool> {
    let p = require_field(m)?;
    let d = m.dim();
    if d == 0 {
        return Ok(false);
    }
    let kernel = zmod::kernel(&m.x().residue_rows(), d, p);
    let k = kernel.len() as u32;
    let points = (p.pow(k) - 1) / (p - 1);
    if points > MAX_POINTS {
        return Err(Error::UnsupportedRing(format!(
            "{points} kernel points exceed the search bound"
        )));
    }
    let actions = [
        m.h().residue_rows(),
        m.x().residue_rows(),
        m.y().residue_rows(),
    ];
    // Enumerate coefficient vectors whose first nonzero entry is 1.
    for lead in 0..k as usize {
        let free = k as usize - lead - 1;
        for idx in 0..p.pow(free as u32) {
            let mut coeffs = vec![0u64; k as usize];
            coeffs[lead] = 1;
            let mut rest = idx;
            for c in coeffs.iter_mut().skip(lead + 1) {
                *c = rest % p;
                rest /= p;
            }
            let mut v = vec![0u64; d];
            for (c, row) in coeffs.iter().zip(&kernel) {
                for (a, &b) in v.iter_mut().zip(row) {
                    *a = zmod::add_mod(*a, zmod::mul_mod(*c, b, p), p);
                }
            }
            if closure_dim(&actions, v, p) < d {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether the characteristic polynomial of `a` splits over `F_p`, i.e. the
/// generalized eigenspaces for eigenvalues in `F_p` fill the space.
pub fn splits_over_prime_field(a: &Matrix) -> bool {
    let ring = a.ring();
    let p = ring.prime();
    let d = a.rows();
    let mut total = 0;
    for lambda in 0..p {
        let shifted = Matrix::from_fn(ring, d, d, |i, j| {
            if i == j {
                a[(i, j)] - ring.int(lambda as i64)
            } else {
                a[(i, j)]
            }
        });
        let power = shifted.pow(d as u64);
        total += zmod::kernel(&power.residue_rows(), d, p).len();
    }
    total == d
}

/// Split-weight condition: `H` and `Y^l` both split over `F_p`.
pub fn has_split_weights(m: &MatrixModule) -> bool {
    let l = m.instance().twist() as u64;
    splits_over_prime_field(m.h()) && splits_over_prime_field(&m.y().pow(l))
}
