use crate::error::{Error, Result};
use crate::gwa::GwaInstance;
use crate::linalg::Matrix;
use crate::report::{Check, Report};
use crate::ring::Poly;

/// A finite-dimensional module over `H(R, φ, z)` given by the matrices of
/// `h`, `x` and `y` acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixModule {
    instance: GwaInstance,
    h: Matrix,
    x: Matrix,
    y: Matrix,
    tau_nilpotency: usize,
}

impl MatrixModule {
    /// Validates the relations and category-O conditions before returning.
    pub fn new(instance: &GwaInstance, h: Matrix, x: Matrix, y: Matrix) -> Result<Self> {
        let mut m = Self::unchecked(instance, h, x, y)?;
        let report = validate_module(&m);
        if let Some(c) = report.first_failure() {
            return Err(match c.name.as_str() {
                "x nilpotent" | "τ(H) nilpotent" => Error::NotCategoryO(c.detail.clone()),
                _ => Error::InvalidModule(format!("{}: {}", c.name, c.detail)),
            });
        }
        m.tau_nilpotency = m
            .tau_of_h()
            .nilpotency_index()
            .expect("validated as nilpotent");
        Ok(m)
    }

    /// Checks only shapes and rings.
    pub fn unchecked(instance: &GwaInstance, h: Matrix, x: Matrix, y: Matrix) -> Result<Self> {
        let d = h.rows();
        for (name, a) in [("H", &h), ("X", &x), ("Y", &y)] {
            if a.rows() != d || a.cols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "{name} is {}x{}, expected {d}x{d}",
                    a.rows(),
                    a.cols()
                )));
            }
            if a.ring() != instance.ring() {
                return Err(Error::RingMismatch);
            }
        }
        Ok(MatrixModule {
            instance: instance.clone(),
            h,
            x,
            y,
            tau_nilpotency: 0,
        })
    }

    pub fn zero(instance: &GwaInstance) -> Self {
        let z = Matrix::zeros(instance.ring(), 0, 0);
        Self::new(instance, z.clone(), z.clone(), z).expect("zero module is valid")
    }

    pub fn instance(&self) -> &GwaInstance {
        &self.instance
    }

    pub fn dim(&self) -> usize {
        self.h.rows()
    }

    pub fn h(&self) -> &Matrix {
        &self.h
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn y(&self) -> &Matrix {
        &self.y
    }

    /// Nilpotency index `N_M` of `τ(H)`.
    pub fn tau_nilpotency(&self) -> usize {
        self.tau_nilpotency
    }

    pub fn act(&self, p: &Poly) -> Matrix {
        self.h.eval_poly(p)
    }

    pub fn tau_of_h(&self) -> Matrix {
        self.act(&self.instance.tau())
    }

    /// `M ⊕ N` with block-diagonal actions.
    pub fn direct_sum(&self, other: &MatrixModule) -> Result<MatrixModule> {
        if self.instance != other.instance {
            return Err(Error::RingMismatch);
        }
        let r = self.instance.ring();
        MatrixModule::new(
            &self.instance,
            Matrix::block_diag(r, &[&self.h, &other.h]),
            Matrix::block_diag(r, &[&self.x, &other.x]),
            Matrix::block_diag(r, &[&self.y, &other.y]),
        )
    }

    /// The same module in the basis given by the columns of `t`, i.e. with
    /// actions `t^{-1} A t`.
    pub fn change_basis(&self, t: &Matrix) -> Result<MatrixModule> {
        let inv = t
            .inverse()
            .ok_or_else(|| Error::InvalidParameters("change of basis is not invertible".into()))?;
        let conj = |a: &Matrix| &(&inv * a) * t;
        MatrixModule::new(&self.instance, conj(&self.h), conj(&self.x), conj(&self.y))
    }

    /// Reinterprets the matrices over another instance on the same ring.
    pub fn over(&self, instance: &GwaInstance) -> Result<MatrixModule> {
        MatrixModule::new(instance, self.h.clone(), self.x.clone(), self.y.clone())
    }
}

/// Checks the four defining relations, nilpotency of `x`, and nilpotency of
/// `τ(H)`, reporting `N_M`.
pub fn validate_module(m: &MatrixModule) -> Report {
    let inst = &m.instance;
    let phi = inst.phi();
    let ring = inst.ring();
    let h = Poly::h(ring);
    let mut report = Report::new();
    let identity = |name: &str, anchor: &str, lhs: Matrix, rhs: Matrix| {
        let diff = &lhs - &rhs;
        Check::new(
            name,
            anchor,
            diff.is_zero(),
            if diff.is_zero() {
                String::new()
            } else {
                format!(
                    "differs in {} entries",
                    diff.to_rows()
                        .iter()
                        .flatten()
                        .filter(|c| !c.is_zero())
                        .count()
                )
            },
        )
    };
    report.push(identity(
        "YX = z(H)",
        "GWA relation: yx = z",
        &m.y * &m.x,
        m.act(inst.z()),
    ));
    report.push(identity(
        "XY = φ^{-1}(z)(H)",
        "GWA relation: xy = φ^{-1}(z)",
        &m.x * &m.y,
        m.act(&inst.z_shift(-1)),
    ));
    report.push(identity(
        "XH = φ^{-1}(h)(H)X",
        "GWA relation: xr = φ^{-1}(r)x",
        &m.x * &m.h,
        &m.act(&phi.apply(&h, -1)) * &m.x,
    ));
    report.push(identity(
        "YH = φ(h)(H)Y",
        "GWA relation: yr = φ(r)y",
        &m.y * &m.h,
        &m.act(&phi.apply(&h, 1)) * &m.y,
    ));
    let xn = m.x.nilpotency_index();
    report.push(Check::new(
        "x nilpotent",
        "category O: x acts locally nilpotently",
        xn.is_some(),
        xn.map(|k| format!("X^{k} = 0")).unwrap_or_default(),
    ));
    let tn = m.tau_of_h().nilpotency_index();
    report.push(Check::new(
        "τ(H) nilpotent",
        "Lemma category-O: τ acts locally nilpotently",
        tn.is_some(),
        tn.map(|k| format!("N_M = {k}")).unwrap_or_default(),
    ));
    report
}
