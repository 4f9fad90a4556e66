use std::fmt;

use crate::linalg::matrix::{flatten_vector, unflatten_vector};
use crate::linalg::{zmod, Matrix};
use crate::module::MatrixModule;
use crate::ring::{CoefRing, CoefScalar};

/// A submodule of `S^d`, stored as the Howell form of its `Z/m`-span in
/// flattened coordinates. Two spans are equal iff their forms are.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubmoduleBasis {
    ring: CoefRing,
    ambient: usize,
    rows: Vec<Vec<u64>>,
}

impl SubmoduleBasis {
    /// The `S`-span of `vectors`, each of length `ambient`.
    pub fn span(ring: CoefRing, ambient: usize, vectors: &[Vec<CoefScalar>]) -> Self {
        let b = ring.b();
        let mut rows = Vec::new();
        for v in vectors {
            let mut w = v.clone();
            for _ in 0..ring.nilpotency() {
                rows.push(flatten_vector(&w));
                w.iter_mut().for_each(|c| *c *= b);
            }
        }
        Self::from_flat(ring, ambient, &rows)
    }

    fn from_flat(ring: CoefRing, ambient: usize, rows: &[Vec<u64>]) -> Self {
        SubmoduleBasis {
            ring,
            ambient,
            rows: zmod::howell_form(rows, ambient * ring.nilpotency(), ring.modulus()),
        }
    }

    /// Span of the columns of `m`.
    pub fn column_span(m: &Matrix) -> Self {
        let cols: Vec<_> = (0..m.cols()).map(|j| m.column(j)).collect();
        Self::span(m.ring(), m.rows(), &cols)
    }

    pub fn zero(ring: CoefRing, ambient: usize) -> Self {
        Self::span(ring, ambient, &[])
    }

    pub fn full(ring: CoefRing, ambient: usize) -> Self {
        Self::column_span(&Matrix::identity(ring, ambient))
    }

    /// `{v : A v = 0}`.
    pub fn kernel_of(a: &Matrix) -> Self {
        let ring = a.ring();
        let k = zmod::kernel(&a.flatten(), a.cols() * ring.nilpotency(), ring.modulus());
        Self::from_flat(ring, a.cols(), &k)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// The Howell rows over `Z/m`.
    pub fn howell_rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// Generators as `S`-vectors.
    pub fn generators(&self) -> Vec<Vec<CoefScalar>> {
        self.rows
            .iter()
            .map(|r| unflatten_vector(self.ring, r))
            .collect()
    }

    /// Number of elements, as `log_p |N|`.
    pub fn length(&self) -> u32 {
        let p = self.ring.prime();
        self.rows
            .iter()
            .map(|r| {
                let pivot = *r.iter().find(|&&v| v != 0).expect("nonzero row");
                let mut order = self.ring.modulus() / zmod::gcd(pivot, self.ring.modulus());
                let mut e = 0;
                while order > 1 {
                    order /= p;
                    e += 1;
                }
                e
            })
            .sum()
    }

    pub fn contains(&self, v: &[CoefScalar]) -> bool {
        let mut rows = self.rows.clone();
        rows.push(flatten_vector(v));
        Self::from_flat(self.ring, self.ambient, &rows).rows == self.rows
    }

    pub fn is_closed_under(&self, a: &Matrix) -> bool {
        self.generators().iter().all(|g| {
            let col = Matrix::from_fn(self.ring, g.len(), 1, |i, _| g[i]);
            self.contains(&(a * &col).column(0))
        })
    }

    pub fn is_submodule_of(&self, other: &SubmoduleBasis) -> bool {
        self.generators().iter().all(|g| other.contains(g))
    }
}

impl fmt::Debug for SubmoduleBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SubmoduleBasis(Z/{}: {:?})",
            self.ring.modulus(),
            self.rows
        )
    }
}

/// `M^{z∞}`: the union of `ker z(H)^k`, computed until the kernel stops
/// growing. Returns the basis and the stabilization index.
pub fn z_torsion_with_index(m: &MatrixModule) -> (SubmoduleBasis, usize) {
    let zh = m.act(m.instance().z());
    let ring = m.instance().ring();
    let mut power = Matrix::identity(ring, m.dim());
    let mut prev = SubmoduleBasis::zero(ring, m.dim());
    let mut k = 0;
    loop {
        power = &power * &zh;
        let next = SubmoduleBasis::kernel_of(&power);
        if next == prev {
            return (prev, k);
        }
        prev = next;
        k += 1;
    }
}

pub fn z_torsion(m: &MatrixModule) -> SubmoduleBasis {
    z_torsion_with_index(m).0
}
