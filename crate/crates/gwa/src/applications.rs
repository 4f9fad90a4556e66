//! Shipped instances (Weyl algebras over `Z/p^n`, classical GWAs `A(v)`,
//! quantized Weyl algebras at roots of unity), q-integers, a seeded module
//! corpus, and drivers for the three corollaries.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::functor::{self, functor_f, functor_g, roundtrip_fg, roundtrip_gf};
use crate::gwa::GwaInstance;
use crate::linalg::zmod;
use crate::linalg::Matrix;
use crate::module::{has_split_weights, simple_check, verma_quotient, MatrixModule};
use crate::report::{Check, Report};
use crate::ring::{AffineAutomorphism, CoefRing, CoefScalar, Poly};

fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

fn prime_power(p: u64, n: u32) -> Result<u64> {
    if !is_prime(p) || n == 0 {
        return Err(Error::InvalidParameters(format!(
            "need p prime and n >= 1, got p = {p}, n = {n}"
        )));
    }
    p.checked_pow(n)
        .filter(|&m| m <= u32::MAX as u64)
        .ok_or_else(|| Error::InvalidParameters(format!("{p}^{n} is too large")))
}

/// The data of an instance before its hypotheses are checked.
#[derive(Clone, Debug)]
pub struct InstanceParts {
    pub phi: AffineAutomorphism,
    pub z: Poly,
    pub b: CoefScalar,
    pub twist: usize,
    pub name: String,
}

impl InstanceParts {
    /// Builds the instance and verifies every hypothesis.
    pub fn build(self) -> Result<GwaInstance> {
        GwaInstance::new(self.phi, self.z, self.b, self.twist).map(|i| i.with_name(self.name))
    }

    /// Builds the instance without checking hypotheses, for reporting.
    pub fn assemble(self) -> Result<GwaInstance> {
        GwaInstance::assemble(self.phi, self.z, self.b, self.twist).map(|i| i.with_name(self.name))
    }
}

pub fn weyl_parts(p: u64, n: u32) -> Result<InstanceParts> {
    let ring = CoefRing::integers_mod(prime_power(p, n)?)?;
    Ok(InstanceParts {
        phi: AffineAutomorphism::translation(ring, 1),
        z: Poly::h(ring),
        b: ring.int(p as i64),
        twist: p as usize,
        name: format!("weyl(p={p}, n={n})"),
    })
}

/// The Weyl algebra over `Z/p^n`: `φ(h) = h + 1`, `z = h`, `b = p`, `l = p`.
pub fn make_weyl(p: u64, n: u32) -> Result<GwaInstance> {
    weyl_parts(p, n)?.build()
}

/// `v` is given by its integer coefficients, lowest degree first.
pub fn classical_parts(v: &[i64], p: u64, n: u32) -> Result<InstanceParts> {
    let ring = CoefRing::integers_mod(prime_power(p, n)?)?;
    let v = Poly::from_ints(ring, v);
    Ok(InstanceParts {
        phi: AffineAutomorphism::translation(ring, 1),
        name: format!("classical(v={v}, p={p}, n={n})"),
        z: v,
        b: ring.int(p as i64),
        twist: p as usize,
    })
}

/// The classical GWA `A(v)` over `Z/p^n`: `yx = v(h)`, `xy = v(h - 1)`, with
/// `b = p`, `l = p`.
pub fn make_classical(v: &Poly, p: u64, n: u32) -> Result<GwaInstance> {
    let ring = CoefRing::integers_mod(prime_power(p, n)?)?;
    if v.ring() != ring {
        return Err(Error::RingMismatch);
    }
    let coeffs: Vec<i64> = v.coeffs().iter().map(|c| c.coeffs()[0] as i64).collect();
    classical_parts(&coeffs, p, n)?.build()
}

/// Order of `u` in `(Z/m)^*`, if it is a unit.
fn multiplicative_order(u: u64, m: u64) -> Option<u64> {
    zmod::inv_mod(u % m, m)?;
    let mut acc = u % m;
    let mut k = 1;
    while acc != 1 % m {
        acc = zmod::mul_mod(acc, u, m);
        k += 1;
    }
    Some(k)
}

pub fn quantized_parts(
    modulus: u64,
    u: i64,
    vscalar: i64,
    nilpotency: usize,
    twist: usize,
) -> Result<InstanceParts> {
    let ring = CoefRing::new(modulus, nilpotency)?;
    let u_res = ring.int(u).coeffs()[0];
    if multiplicative_order(u_res, modulus) != Some(twist as u64) {
        return Err(Error::NotPrimitiveRoot(format!(
            "{u} mod {modulus} (order {twist})"
        )));
    }
    let q = ring.int(u) + ring.b();
    let phi_inv = AffineAutomorphism::new(q, ring.int(vscalar))?;
    Ok(InstanceParts {
        phi: phi_inv.inverse(),
        z: Poly::h(ring),
        b: ring.b(),
        twist,
        name: format!("quantized(m={modulus}, u={u}, v={vscalar}, t={nilpotency}, l={twist})"),
    })
}

/// The quantized Weyl algebra `xy - q yx = v` over `(Z/m)[b]/(b^t)` with
/// `q = u + b`, as the GWA with `φ^{-1}(h) = q h + v`, `z = h`, twist `l`.
pub fn make_quantized(
    modulus: u64,
    u: i64,
    vscalar: i64,
    nilpotency: usize,
    twist: usize,
) -> Result<GwaInstance> {
    quantized_parts(modulus, u, vscalar, nilpotency, twist)?.build()
}

/// `[n]_q = 1 + q + ... + q^{n-1}`.
pub fn qint(n: u64, q: CoefScalar) -> CoefScalar {
    let mut acc = q.ring().zero();
    let mut power = q.ring().one();
    for _ in 0..n {
        acc += power;
        power *= q;
    }
    acc
}

/// The instances exercised by the test suites and `selftest`.
pub fn shipped_instances() -> Vec<GwaInstance> {
    let z4 = CoefRing::integers_mod(4).expect("valid ring");
    let mut out = Vec::new();
    for (p, n) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
        out.push(make_weyl(p, n).expect("shipped Weyl instance"));
    }
    for v in [Poly::h(z4), Poly::from_ints(z4, &[0, 0, 1])] {
        out.push(make_classical(&v, 2, 2).expect("shipped classical instance"));
    }
    for t in [1, 2] {
        out.push(make_quantized(5, 2, 1, t, 4).expect("shipped quantized instance"));
    }
    out
}

/// Weights `μ` with `z(μ) = 0`.
pub fn highest_weights(inst: &GwaInstance) -> Vec<CoefScalar> {
    inst.ring()
        .elements()
        .filter(|&mu| inst.z().eval(mu).is_zero())
        .collect()
}

/// Verma quotients at every highest weight, using the `per_weight` smallest
/// stable dimensions up to `max_dim`.
pub fn verma_corpus(inst: &GwaInstance, max_dim: usize, per_weight: usize) -> Vec<MatrixModule> {
    let mut out = Vec::new();
    for mu in highest_weights(inst) {
        for d in crate::module::verma::stable_dimensions(inst, mu, max_dim)
            .into_iter()
            .take(per_weight)
        {
            out.push(verma_quotient(inst, mu, d).expect("stable dimension"));
        }
    }
    out
}

/// A random invertible matrix `L U` with unit-triangular factors.
pub fn random_invertible(ring: CoefRing, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let mut entry = || {
        let coeffs: Vec<i64> = (0..ring.nilpotency())
            .map(|_| rng.gen_range(0..ring.modulus()) as i64)
            .collect();
        ring.scalar(&coeffs)
    };
    let mut lower = Matrix::identity(ring, n);
    let mut upper = Matrix::identity(ring, n);
    for i in 0..n {
        for j in 0..i {
            lower[(i, j)] = entry();
            upper[(j, i)] = entry();
        }
    }
    &lower * &upper
}

/// A module of the corpus with a short description of how it was built.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub label: String,
    pub module: MatrixModule,
}

/// Verma quotients over `inst`, one seeded direct sum of two of them, and
/// one seeded change of basis.
pub fn seeded_corpus(inst: &GwaInstance, seed: u64) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vermas = verma_corpus(inst, 20, 2);
    let mut out: Vec<CorpusEntry> = vermas
        .iter()
        .map(|m| CorpusEntry {
            label: format!("verma dim {} weight {}", m.dim(), m.h()[(0, 0)]),
            module: m.clone(),
        })
        .collect();
    if vermas.is_empty() {
        return out;
    }
    let a = vermas.choose(&mut rng).expect("nonempty");
    let b = vermas.choose(&mut rng).expect("nonempty");
    if a.dim() + b.dim() <= 40 {
        out.push(CorpusEntry {
            label: format!("sum of dims {} and {}", a.dim(), b.dim()),
            module: a.direct_sum(b).expect("same instance"),
        });
    }
    let c = vermas.choose(&mut rng).expect("nonempty");
    let t = random_invertible(inst.ring(), c.dim(), &mut rng);
    out.push(CorpusEntry {
        label: format!("verma dim {} in a random basis", c.dim()),
        module: c.change_basis(&t).expect("invertible"),
    });
    out
}

/// Corpora for every shipped instance, seeds derived from `seed`.
pub fn shipped_corpus(seed: u64) -> Vec<(GwaInstance, Vec<CorpusEntry>)> {
    shipped_instances()
        .into_iter()
        .enumerate()
        .map(|(i, inst)| {
            let corpus = seeded_corpus(&inst, seed.wrapping_add(i as u64));
            (inst, corpus)
        })
        .collect()
}

/// `[y', x'] = p` on `F(M)` for the Weyl algebra over `Z/p^n`, plus the
/// roundtrips and the Frobenius clause.
pub fn corollary_weyl(p: u64, n: u32, seed: u64) -> Result<Report> {
    let inst = make_weyl(p, n)?;
    let mut report = Report::new();
    let corpus = seeded_corpus(&inst, seed);
    if corpus.is_empty() {
        report.warn("empty corpus: vacuous pass");
    }
    let ring = inst.ring();
    for entry in &corpus {
        let m = &entry.module;
        let f = functor_f(m);
        report.push(Check::from_result(
            format!("[{}] [y', x'] = p on F(M)", entry.label),
            "Weyl instance: F(M) is a module over A_(1,p)",
            &f.and_then(|c| {
                let n = &c.module;
                let comm = &(n.y() * n.x()) - &(n.x() * n.y());
                let target = Matrix::identity(ring, n.dim()).scale(ring.int(p as i64));
                if comm == target {
                    Ok(n.dim())
                } else {
                    Err(Error::EquivalenceFailure("[y', x'] != p".into()))
                }
            }),
            |d| format!("dim F(M) = {d}"),
        ));
        report.push(Check::from_result(
            format!("[{}] Frobenius: y acts through y^p", entry.label),
            "Weyl instance: Frobenius Fr(y) = y^p",
            &functor::frobenius_module_check(m),
            |_| String::new(),
        ));
        report.push(Check::from_result(
            format!("[{}] G(F(M)) ≅ M", entry.label),
            "Theorem main: F is an equivalence of categories",
            &roundtrip_gf(m),
            |_| String::new(),
        ));
    }
    Ok(report)
}

/// `x'y' - q^l y'x' = [l]_q` on `F(M)` for the quantized Weyl algebra, and
/// the roundtrips.
pub fn corollary_quantized(
    modulus: u64,
    u: i64,
    twist: usize,
    nilpotency: usize,
    seed: u64,
) -> Result<Report> {
    let inst = make_quantized(modulus, u, 1, nilpotency, twist)?;
    let ring = inst.ring();
    let q = ring.int(u) + ring.b();
    let ql = q.pow(twist as u64);
    let lq = qint(twist as u64, q);
    let mut report = Report::new();
    report.push(Check::new(
        format!("[{twist}]_q"),
        "q-integers: [n]_q = 1 + q + ... + q^{n-1}",
        true,
        format!("q = {q}, q^{twist} = {ql}, [{twist}]_q = {lq}"),
    ));
    let corpus = seeded_corpus(&inst, seed);
    if corpus.is_empty() {
        report.warn("empty corpus: vacuous pass");
    }
    for entry in &corpus {
        let m = &entry.module;
        let relation = functor_f(m).and_then(|c| {
            let n = &c.module;
            let lhs = &(n.x() * n.y()) - &(n.y() * n.x()).scale(ql);
            let rhs = Matrix::identity(ring, n.dim()).scale(lq);
            if lhs == rhs {
                Ok(n.dim())
            } else {
                Err(Error::EquivalenceFailure("x'y' - q^l y'x' != [l]_q".into()))
            }
        });
        report.push(Check::from_result(
            format!("[{}] x'y' - q^l y'x' = [l]_q on F(M)", entry.label),
            "quantized corollary: O(A_{q^l,[l]_q}(S))",
            &relation,
            |d| format!("dim F(M) = {d}"),
        ));
        report.push(Check::from_result(
            format!("[{}] G(F(M)) ≅ M", entry.label),
            "Theorem main: F is an equivalence of categories",
            &roundtrip_gf(m),
            |_| String::new(),
        ));
    }
    Ok(report)
}

/// The classical GWA `A(h^2)` over `Z/4`: instance validity and both
/// roundtrips on its Verma quotients.
pub fn corollary_classical(seed: u64) -> Result<Report> {
    let ring = CoefRing::integers_mod(4)?;
    let v = Poly::from_ints(ring, &[0, 0, 1]);
    let inst = make_classical(&v, 2, 2)?;
    let mut report = inst.validate();
    let corpus = seeded_corpus(&inst, seed);
    if corpus.is_empty() {
        report.warn("empty corpus: vacuous pass");
    }
    for entry in &corpus {
        let m = &entry.module;
        report.push(Check::from_result(
            format!("[{}] G(F(M)) ≅ M", entry.label),
            "classical corollary: O(A(v)) ≅ O(H(R, φ^p, v))",
            &roundtrip_gf(m),
            |_| String::new(),
        ));
        report.push(Check::from_result(
            format!("[{}] F(G(N)) ≅ N", entry.label),
            "classical corollary: O(A(v)) ≅ O(H(R, φ^p, v))",
            &functor_f(m).and_then(|c| roundtrip_fg(&inst, &c.module)),
            |_| String::new(),
        ));
    }
    Ok(report)
}

/// The 1-dimensional module of the twist at weight `λ` with `x' = y' = 0`.
pub fn point_module(inst: &GwaInstance, weight: CoefScalar) -> Result<MatrixModule> {
    let ring = inst.ring();
    MatrixModule::new(
        &inst.twisted(),
        Matrix::diagonal(ring, &[weight]),
        Matrix::zeros(ring, 1, 1),
        Matrix::zeros(ring, 1, 1),
    )
}

/// Modules over the twist used by the simple-dimension search: point modules
/// and seeded 2-dimensional modules with `y' = c + d x'`, plus one with an
/// irreducible `y'` that the split-weight filter must exclude.
fn twisted_search_modules(inst: &GwaInstance, rng: &mut ChaCha8Rng) -> Vec<MatrixModule> {
    let ring = inst.ring();
    let twisted = inst.twisted();
    let p = ring.modulus() as i64;
    let mut out = Vec::new();
    for _ in 0..12 {
        let a = rng.gen_range(0..p);
        let c = rng.gen_range(0..p);
        let d = rng.gen_range(0..p);
        let x = Matrix::from_ints(ring, &[vec![0, a], vec![0, 0]]);
        let y = Matrix::from_ints(ring, &[vec![c, d], vec![0, c]]);
        let h = &y * &x;
        if let Ok(m) = MatrixModule::new(&twisted, h, x, y) {
            out.push(m);
        }
    }
    // y' with characteristic polynomial t^2 - r for a non-residue r.
    if let Some(r) = (1..p).find(|&r| (0..p).all(|s| (s * s - r) % p != 0)) {
        let zero = Matrix::zeros(ring, 2, 2);
        let y = Matrix::from_ints(ring, &[vec![0, r], vec![1, 0]]);
        if let Ok(m) = MatrixModule::new(&twisted, zero.clone(), zero, y) {
            out.push(m);
        }
    }
    out
}

/// Every simple module among `G(N)` for point modules `N` at highest weights
/// has dimension `l`, and so does every split-weight simple module in a
/// seeded corpus of dimension at most 8.
pub fn corollary_simple_dim(
    inst: &GwaInstance,
    weights: &[CoefScalar],
    seed: u64,
) -> Result<Report> {
    let ring = inst.ring();
    if !ring.is_field() {
        return Err(Error::UnsupportedRing(format!(
            "{ring} is not a prime field"
        )));
    }
    let l = inst.twist();
    let mut report = Report::new();
    report.warn("algebraically closed field replaced by split weights over F_p");
    let usable: Vec<_> = weights
        .iter()
        .copied()
        .filter(|&w| inst.z().eval(w).is_zero())
        .collect();
    if usable.is_empty() {
        report.warn("no weight with z(λ) = 0: vacuous pass");
    }
    for w in usable {
        let g = point_module(inst, w).and_then(|n| functor_g(inst, &n));
        let result = g.and_then(|g| Ok((g.dim(), simple_check(&g)?)));
        report.push(Check::new(
            format!("G(N_{w}) simple of dimension {l}"),
            "simple-dimension corollary: simples in O have dimension l",
            matches!(result, Ok((d, true)) if d == l),
            match &result {
                Ok((d, s)) => format!("dim {d}, simple = {s}"),
                Err(e) => e.to_string(),
            },
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<MatrixModule> = verma_corpus(inst, 8, 2);
    for &w in weights.iter().filter(|&&w| inst.z().eval(w).is_zero()) {
        candidates.push(functor_g(inst, &point_module(inst, w)?)?);
    }
    for n in twisted_search_modules(inst, &mut rng) {
        if let Ok(g) = functor_g(inst, &n) {
            candidates.push(g);
        }
    }
    let base = candidates.clone();
    for _ in 0..4 {
        let a = base.choose(&mut rng).expect("nonempty corpus");
        let b = base.choose(&mut rng).expect("nonempty corpus");
        if a.dim() + b.dim() <= 8 {
            candidates.push(a.direct_sum(b)?);
        }
    }
    for m in candidates.iter_mut() {
        let t = random_invertible(ring, m.dim(), &mut rng);
        *m = m.change_basis(&t)?;
    }
    let (mut simple_dims, mut skipped, mut bad) = (Vec::new(), 0, Vec::new());
    for m in candidates.iter().filter(|m| m.dim() <= 8) {
        if !has_split_weights(m) {
            skipped += 1;
            continue;
        }
        if simple_check(m)? {
            simple_dims.push(m.dim());
            if m.dim() != l {
                bad.push(m.dim());
            }
        }
    }
    if skipped > 0 {
        report.warn(format!(
            "{skipped} non-split modules excluded from the search"
        ));
    }
    report.push(Check::new(
        "every split simple in the corpus has dimension l",
        "simple-dimension corollary: simples in O have dimension l",
        bad.is_empty() && !simple_dims.is_empty(),
        format!(
            "{} candidates, simple dims {:?}{}",
            candidates.len(),
            simple_dims,
            if bad.is_empty() {
                String::new()
            } else {
                format!(", offending {bad:?}")
            }
        ),
    ));
    Ok(report)
}
