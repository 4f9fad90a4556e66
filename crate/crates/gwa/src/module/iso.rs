use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::matrix::unflatten_vector;
use crate::linalg::{zmod, Matrix};
use crate::module::MatrixModule;

/// An isomorphism `T: M1 -> M2` with `T A_i = B_i T` for every generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    pub map: Matrix,
    pub inverse: Matrix,
}

impl IsoWitness {
    /// Re-checks invertibility and equivariance for the listed action pairs.
    pub fn verify(&self, pairs: &[(&Matrix, &Matrix)]) -> bool {
        let n = self.map.rows();
        let id = Matrix::identity(self.map.ring(), n);
        self.map.is_square()
            && &self.map * &self.inverse == id
            && &self.inverse * &self.map == id
            && pairs.iter().all(|(a, b)| &self.map * *a == *b * &self.map)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    Iso(IsoWitness),
    /// No invertible intertwiner among the candidates tried. The dimension of
    /// the intertwiner space is reported; this is evidence, not proof.
    NoIsoFound {
        solution_rank: usize,
    },
}

impl IsoOutcome {
    pub fn witness(&self) -> Option<&IsoWitness> {
        match self {
            IsoOutcome::Iso(w) => Some(w),
            IsoOutcome::NoIsoFound { .. } => None,
        }
    }
}

const RANDOM_TRIES: usize = 64;

/// Basis (over `Z/m`) of the intertwiners `T` with `T A_i = B_i T`.
pub fn intertwiner_space(pairs: &[(&Matrix, &Matrix)], rows: usize, cols: usize) -> Vec<Matrix> {
    let Some((a0, _)) = pairs.first() else {
        return Vec::new();
    };
    let ring = a0.ring();
    let t = ring.nilpotency();
    let unknowns = rows * cols * t;
    let eq_len = pairs.len() * rows * cols * t;
    // Column per unknown, then transpose into a system of equations.
    let mut system = vec![vec![0u64; unknowns]; eq_len];
    let mut idx = 0;
    for i in 0..rows {
        for j in 0..cols {
            for power in 0..t {
                let mut e = Matrix::zeros(ring, rows, cols);
                e[(i, j)] = ring.b().pow(power as u64);
                let mut flat = Vec::with_capacity(eq_len);
                for (a, b) in pairs {
                    let diff = &(&e * *a) - &(*b * &e);
                    for r in 0..rows {
                        for c in 0..cols {
                            flat.extend_from_slice(diff[(r, c)].coeffs());
                        }
                    }
                }
                for (row, v) in system.iter_mut().zip(flat) {
                    row[idx] = v;
                }
                idx += 1;
            }
        }
    }
    zmod::kernel(&system, unknowns, ring.modulus())
        .iter()
        .map(|k| {
            let entries = unflatten_vector(ring, k);
            Matrix::from_fn(ring, rows, cols, |i, j| entries[i * cols + j])
        })
        .collect()
}

/// Searches for an isomorphism `M1 -> M2` of modules over the same algebra.
///
/// Tries each basis intertwiner, then seeded random combinations. Only
/// practical for small dimensions: the linear system has `d^2 t` unknowns.
pub fn module_iso_check(m1: &MatrixModule, m2: &MatrixModule, seed: u64) -> IsoOutcome {
    let pairs = [(m1.h(), m2.h()), (m1.x(), m2.x()), (m1.y(), m2.y())];
    iso_search(&pairs, m1.dim(), m2.dim(), seed)
}

/// [`module_iso_check`] for arbitrary labelled action pairs.
pub fn iso_search(pairs: &[(&Matrix, &Matrix)], d1: usize, d2: usize, seed: u64) -> IsoOutcome {
    if d1 != d2 {
        return IsoOutcome::NoIsoFound { solution_rank: 0 };
    }
    if d1 == 0 {
        let ring = pairs[0].0.ring();
        let empty = Matrix::zeros(ring, 0, 0);
        return IsoOutcome::Iso(IsoWitness {
            map: empty.clone(),
            inverse: empty,
        });
    }
    let basis = intertwiner_space(pairs, d2, d1);
    let accept = |t: &Matrix| {
        t.inverse().map(|inverse| IsoWitness {
            map: t.clone(),
            inverse,
        })
    };
    for t in &basis {
        if let Some(w) = accept(t) {
            return IsoOutcome::Iso(w);
        }
    }
    if !basis.is_empty() {
        let ring = basis[0].ring();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..RANDOM_TRIES {
            let mut t = Matrix::zeros(ring, d2, d1);
            for b in &basis {
                let c = ring.int(rng.gen_range(0..ring.modulus()) as i64);
                t = &t + &b.scale(c);
            }
            if let Some(w) = accept(&t) {
                return IsoOutcome::Iso(w);
            }
        }
    }
    IsoOutcome::NoIsoFound {
        solution_rank: basis.len(),
    }
}
