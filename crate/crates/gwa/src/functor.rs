//! The equivalence `F: O(H(R, φ, z)) -> O(H(R, φ^l, z))`, `F(M) = eM`, and
//! its inverse `G(N) = He ⊗ N`, realized on matrix modules.
//!
//! On `eM` the twisted generators act as `x' = e x^l` and
//! `y' = u^{-1} e y^l`, so that `y'x' = ez`. `G(N)` has the blocks
//! `t^0 N, ..., t^{l-1} N` with
//!
//! ```text
//! r · t^i n = t^i (e φ^{-i}(r) n)
//! y · t^i n = t^{i+1} n                  (i < l-1)
//! y · t^{l-1} n = t^0 (u y' n)
//! x · t^i n = t^{i-1} (e φ^{-i}(z) n)    (i > 0)
//! x · t^0 n = t^{l-1} (x' u^{-1} n)
//! ```

use crate::error::{Error, Result};
use crate::gwa::GwaInstance;
use crate::idempotent::IdempotentData;
use crate::linalg::Matrix;
use crate::module::{z_torsion, IsoWitness, MatrixModule, SubmoduleBasis};
use crate::report::{Check, Report};
use crate::ring::Poly;

/// `e`, `u`, `u^{-1}` evaluated at a matrix `H` on which `τ(H)` is nilpotent.
#[derive(Clone, Debug)]
pub struct FunctorContext {
    pub data: IdempotentData,
    pub e: Matrix,
    pub u: Matrix,
    pub u_inv: Matrix,
}

impl FunctorContext {
    pub fn new(inst: &GwaInstance, h: &Matrix) -> Result<Self> {
        let tau_h = h.eval_poly(&inst.tau());
        let precision = tau_h
            .nilpotency_index()
            .ok_or_else(|| Error::NotCategoryO("τ(H) is not nilpotent".into()))?;
        let data = IdempotentData::new(inst, precision)?;
        let ctx = FunctorContext {
            e: h.eval_poly(&data.e),
            u: h.eval_poly(&data.u),
            u_inv: h.eval_poly(&data.u_inv),
            data,
        };
        Ok(ctx)
    }

    /// `E^2 = E`, `EH = HE`, `U U^{-1} = E`.
    pub fn checks(&self, h: &Matrix) -> Report {
        let mut r = Report::new();
        r.push(Check::new(
            "E^2 = E",
            "corner transport: F(M) = eM",
            &self.e * &self.e == self.e,
            String::new(),
        ));
        r.push(Check::new(
            "EH = HE",
            "corner transport: F(M) = eM",
            &self.e * h == h * &self.e,
            String::new(),
        ));
        r.push(Check::new(
            "U·UInv = E",
            "Lemma units-idempotents: u is a unit of eR",
            &self.u * &self.u_inv == self.e,
            String::new(),
        ));
        r
    }
}

/// `F(M)` together with the inclusion `B: F(M) -> M` and a left inverse `L`.
#[derive(Clone, Debug)]
pub struct CornerModule {
    pub module: MatrixModule,
    pub embedding: Matrix,
    pub projection: Matrix,
    pub context: FunctorContext,
}

fn restrict(
    a: &Matrix,
    e: &Matrix,
    embedding: &Matrix,
    projection: &Matrix,
    name: &str,
) -> Result<Matrix> {
    let image = a * embedding;
    if e * &image != image {
        return Err(Error::CornerNotStable(name.into()));
    }
    Ok(projection * &image)
}

/// `F(M) = eM` as a module over `H(R, φ^l, z)`.
pub fn functor_f(m: &MatrixModule) -> Result<CornerModule> {
    let inst = m.instance();
    let ring = inst.ring();
    let context = FunctorContext::new(inst, m.h())?;
    let e = &context.e;
    let pivots = e.residue_pivot_columns();
    let embedding = e.select_columns(&pivots);
    let projection = if pivots.is_empty() {
        Matrix::zeros(ring, 0, m.dim())
    } else {
        embedding
            .left_inverse()
            .ok_or_else(|| Error::EquivalenceFailure("im E is not a free summand".into()))?
    };
    let l = inst.twist() as u64;
    let h = restrict(m.h(), e, &embedding, &projection, "h")?;
    let x = restrict(&m.x().pow(l), e, &embedding, &projection, "x^l")?;
    let y = restrict(
        &(&context.u_inv * &m.y().pow(l)),
        e,
        &embedding,
        &projection,
        "u^{-1} y^l",
    )?;
    let module = MatrixModule::new(&inst.twisted(), h, x, y)
        .map_err(|err| Error::EquivalenceFailure(format!("F(M) is not a module: {err}")))?;
    Ok(CornerModule {
        module,
        embedding,
        projection,
        context,
    })
}

/// `G(N)` over `H(R, φ, z)` for a module `N` over the twist of `inst`.
pub fn functor_g(inst: &GwaInstance, n: &MatrixModule) -> Result<MatrixModule> {
    if n.instance() != &inst.twisted() {
        return Err(Error::InvalidParameters(
            "G expects a module over the twisted instance".into(),
        ));
    }
    let ring = inst.ring();
    let l = inst.twist();
    let k = n.dim();
    let d = l * k;
    if k == 0 {
        return Ok(MatrixModule::zero(inst));
    }
    let ctx = FunctorContext::new(inst, n.h())?;
    let e_of = |p: &Poly| n.h().eval_poly(&(&ctx.data.e * p));
    let h_poly = Poly::h(ring);

    let mut h = Matrix::zeros(ring, d, d);
    let mut x = Matrix::zeros(ring, d, d);
    let mut y = Matrix::zeros(ring, d, d);
    let ident = Matrix::identity(ring, k);
    for i in 0..l {
        h.set_block(i * k, i * k, &e_of(&inst.phi().apply(&h_poly, -(i as i64))));
        if i + 1 < l {
            y.set_block((i + 1) * k, i * k, &ident);
        }
        if i > 0 {
            x.set_block((i - 1) * k, i * k, &e_of(&inst.z_shift(-(i as i64))));
        }
    }
    y.set_block(0, (l - 1) * k, &(&ctx.u * n.y()));
    x.set_block((l - 1) * k, 0, &(n.x() * &ctx.u_inv));
    MatrixModule::new(inst, h, x, y)
        .map_err(|err| Error::EquivalenceFailure(format!("G(N) is not a module: {err}")))
}

/// `G` on a morphism `g: N1 -> N2`: the same map on every block.
pub fn functor_g_morphism(inst: &GwaInstance, g: &Matrix) -> Matrix {
    let blocks: Vec<&Matrix> = std::iter::repeat_n(g, inst.twist()).collect();
    Matrix::block_diag(g.ring(), &blocks)
}

/// `F` on a morphism `f: M1 -> M2`.
pub fn functor_f_morphism(f: &Matrix, source: &CornerModule, target: &CornerModule) -> Matrix {
    &(&target.projection * f) * &source.embedding
}

/// Whether `f` intertwines the `h`, `x`, `y` actions of two modules.
pub fn is_module_map(f: &Matrix, source: &MatrixModule, target: &MatrixModule) -> bool {
    f * source.h() == target.h() * f
        && f * source.x() == target.x() * f
        && f * source.y() == target.y() * f
}

fn equivariance(
    map: &Matrix,
    source: &MatrixModule,
    target: &MatrixModule,
    labels: [&str; 3],
) -> Result<()> {
    let pairs = [
        (source.h(), target.h(), labels[0]),
        (source.x(), target.x(), labels[1]),
        (source.y(), target.y(), labels[2]),
    ];
    for (a, b, name) in pairs {
        if map * a != b * map {
            return Err(Error::EquivalenceFailure(format!(
                "not equivariant for {name}"
            )));
        }
    }
    Ok(())
}

/// `Θ: G(F(M)) -> M`, `t^i n -> y^i n`, checked to be an isomorphism.
pub fn roundtrip_gf(m: &MatrixModule) -> Result<IsoWitness> {
    let inst = m.instance();
    let ring = inst.ring();
    let corner = functor_f(m)?;
    let g = functor_g(inst, &corner.module)?;
    let k = corner.module.dim();
    let mut theta = Matrix::zeros(ring, m.dim(), g.dim());
    let mut y_power = corner.embedding.clone();
    for i in 0..inst.twist() {
        theta.set_block(0, i * k, &y_power);
        y_power = m.y() * &y_power;
    }
    let inverse = theta
        .inverse()
        .ok_or_else(|| Error::EquivalenceFailure("Θ is not invertible".into()))?;
    equivariance(&theta, &g, m, ["h", "x", "y"])?;
    Ok(IsoWitness {
        map: theta,
        inverse,
    })
}

/// Checks `e G(N) = t^0 N` and that `n -> t^0 n` is an isomorphism
/// `N -> F(G(N))`. The witness is that map in the basis of `F(G(N))`.
pub fn roundtrip_fg(inst: &GwaInstance, n: &MatrixModule) -> Result<IsoWitness> {
    let ring = inst.ring();
    let g = functor_g(inst, n)?;
    let corner = functor_f(&g)?;
    let k = n.dim();
    let mut include = Matrix::zeros(ring, g.dim(), k);
    include.set_block(0, 0, &Matrix::identity(ring, k));
    if SubmoduleBasis::column_span(&corner.context.e) != SubmoduleBasis::column_span(&include) {
        return Err(Error::EquivalenceFailure(
            "e·G(N) differs from t^0 N".into(),
        ));
    }
    let map = &corner.projection * &include;
    let inverse = map
        .inverse()
        .ok_or_else(|| Error::EquivalenceFailure("n -> t^0 n is not invertible".into()))?;
    equivariance(&map, n, &corner.module, ["h", "x'", "y'"])?;
    Ok(IsoWitness { map, inverse })
}

/// The `R_φ[y]`-module `R_φ[y] ⊗_Fr N`, with `Fr(y') = y^l`: basis
/// `y^i ⊗ n`, `r` acting on `y^i ⊗ n` by `φ^{-i}(r)`, and `y^l` acting on
/// `N` as `e y^l = u y'`. Returned as the pair `(H, Y)`.
pub fn frobenius_module(inst: &GwaInstance, n: &MatrixModule) -> Result<(Matrix, Matrix)> {
    let ring = inst.ring();
    let l = inst.twist();
    let k = n.dim();
    let d = l * k;
    let mut h = Matrix::zeros(ring, d, d);
    let mut y = Matrix::zeros(ring, d, d);
    if k == 0 {
        return Ok((h, y));
    }
    let ctx = FunctorContext::new(inst, n.h())?;
    for i in 0..l {
        let shifted = inst.phi().apply(&Poly::h(ring), -(i as i64));
        h.set_block(i * k, i * k, &n.h().eval_poly(&shifted));
        if i + 1 < l {
            y.set_block((i + 1) * k, i * k, &Matrix::identity(ring, k));
        }
    }
    y.set_block(0, (l - 1) * k, &(&ctx.u * n.y()));
    Ok((h, y))
}

/// `y^i ⊗ n <-> t^i n` between `R_φ[y] ⊗_Fr N` and `G(N)` restricted to
/// `h` and `y`.
pub fn frobenius_restriction_check(inst: &GwaInstance, n: &MatrixModule) -> Result<IsoWitness> {
    let (fh, fy) = frobenius_module(inst, n)?;
    let g = functor_g(inst, n)?;
    let map = Matrix::identity(inst.ring(), g.dim());
    if &map * &fh != g.h() * &map {
        return Err(Error::EquivalenceFailure(
            "Frobenius iso not equivariant for h".into(),
        ));
    }
    if &map * &fy != g.y() * &map {
        return Err(Error::EquivalenceFailure(
            "Frobenius iso not equivariant for y".into(),
        ));
    }
    Ok(IsoWitness {
        inverse: map.clone(),
        map,
    })
}

/// `M` restricted to `R_φ[y]` is `R_φ[y] ⊗_Fr F(M)`, via
/// `y^i ⊗ n -> y^i n`.
pub fn frobenius_module_check(m: &MatrixModule) -> Result<IsoWitness> {
    let inst = m.instance();
    let corner = functor_f(m)?;
    let (fh, fy) = frobenius_module(inst, &corner.module)?;
    let k = corner.module.dim();
    let mut map = Matrix::zeros(inst.ring(), m.dim(), inst.twist() * k);
    let mut y_power = corner.embedding.clone();
    for i in 0..inst.twist() {
        map.set_block(0, i * k, &y_power);
        y_power = m.y() * &y_power;
    }
    let inverse = map
        .inverse()
        .ok_or_else(|| Error::EquivalenceFailure("Frobenius map is not invertible".into()))?;
    if &map * &fh != m.h() * &map || &map * &fy != m.y() * &map {
        return Err(Error::EquivalenceFailure(
            "Frobenius map is not R_φ[y]-linear".into(),
        ));
    }
    Ok(IsoWitness { map, inverse })
}

/// Compares `im e(H)` with `M^{z∞}`.
pub fn torsion_equals_em(m: &MatrixModule) -> Report {
    let mut report = Report::new();
    let anchor = "eM = M^{z∞}";
    match FunctorContext::new(m.instance(), m.h()) {
        Err(err) => report.push(Check::new("eM = M^{z∞}", anchor, false, err.to_string())),
        Ok(ctx) => {
            let em = SubmoduleBasis::column_span(&ctx.e);
            let torsion = z_torsion(m);
            let ok = em == torsion;
            report.push(Check::new(
                "eM = M^{z∞}",
                anchor,
                ok,
                if ok {
                    format!("{} Howell rows", em.howell_rows().len())
                } else {
                    format!("eM = {em:?}, M^{{z∞}} = {torsion:?}")
                },
            ));
        }
    }
    report
}

/// `[X^l, Y]` has every entry in `b·S`.
pub fn commutator_in_b(m: &MatrixModule) -> bool {
    let l = m.instance().twist() as u64;
    let xl = m.x().pow(l);
    let comm = &(&xl * m.y()) - &(m.y() * &xl);
    comm.entries_divisible_by(&m.instance().b())
}

/// The action-table identities `yx = z` and `xy = φ^{-1}(z)` on every block
/// of `G(N)`.
pub fn action_table_consistency(g: &MatrixModule) -> bool {
    let inst = g.instance();
    (g.y() * g.x()) == g.act(inst.z()) && (g.x() * g.y()) == g.act(&inst.z_shift(-1))
}

/// The standard battery of functor checks on one module.
pub fn functor_checks(m: &MatrixModule) -> Report {
    let mut report = Report::new();
    let f = functor_f(m);
    report.push(Check::from_result(
        "F(M) is a module over the twist",
        "Theorem main: F(M) = M^{z∞} = eM",
        &f,
        |c| format!("dim F(M) = {}", c.module.dim()),
    ));
    if let Ok(c) = &f {
        report.extend(c.context.checks(m.h()));
        report.push(Check::new(
            "dim F(M) = rank E",
            "corner transport: F(M) = eM",
            c.module.dim() == c.context.e.residue_rank(),
            String::new(),
        ));
    }
    report.extend(torsion_equals_em(m));
    report.push(Check::from_result(
        "roundtrip G(F(M)) ≅ M",
        "Theorem main: F is an equivalence of categories",
        &roundtrip_gf(m),
        |w| format!("Θ is {}x{}", w.map.rows(), w.map.cols()),
    ));
    if let Ok(c) = &f {
        report.push(Check::from_result(
            "roundtrip F(G(N)) ≅ N",
            "Morita: G(N) = He ⊗ N, F(M) = eM",
            &roundtrip_fg(m.instance(), &c.module),
            |w| format!("dim {}", w.map.rows()),
        ));
        report.push(Check::from_result(
            "Frobenius restriction of G(N)",
            "Theorem main: l-th Frobenius homomorphism",
            &frobenius_restriction_check(m.instance(), &c.module),
            |_| String::new(),
        ));
    }
    report.push(Check::from_result(
        "Frobenius restriction of M",
        "Theorem main: l-th Frobenius homomorphism",
        &frobenius_module_check(m),
        |_| String::new(),
    ));
    report.push(Check::new(
        "[x^l, y] ∈ bH",
        "[x^l, y] ∈ bH(R, φ, z)",
        commutator_in_b(m),
        String::new(),
    ));
    report
}
