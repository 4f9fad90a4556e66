//! Batch jobs: a JSON config naming an instance and a list of commands, run
//! in order into a deterministic report.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::applications::{
    classical_parts, corollary_classical, corollary_quantized, corollary_simple_dim,
    corollary_weyl, quantized_parts, weyl_parts, InstanceParts,
};
use crate::error::{Error, Result};
use crate::functor::{
    action_table_consistency, functor_f, functor_g, roundtrip_fg, roundtrip_gf, torsion_equals_em,
};
use crate::gwa::{validate_instance, GwaInstance};
use crate::idempotent::{iso_f_roundtrip, IdempotentData};
use crate::linalg::Matrix;
use crate::module::json::{matrix_from_json, matrix_to_json, EntryJson, MatrixJson, ModuleJson};
use crate::module::{validate_module, z_torsion_with_index, MatrixModule};
use crate::report::{Check, Report};
use crate::ring::automorphism::AffineSpec;
use crate::ring::{CoefRing, Poly};
use crate::selftest;

pub const DEFAULT_PRECISION: usize = 2;

/// How the instance is built.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InstanceRecipe {
    Weyl {
        p: u64,
        n: u32,
    },
    Classical {
        v: Vec<i64>,
        p: u64,
        n: u32,
    },
    Quantized {
        modulus: u64,
        u: i64,
        #[serde(default = "one")]
        vscalar: i64,
        nilpotency: usize,
        twist: usize,
    },
    Explicit {
        ring: CoefRing,
        phi: AffineSpec,
        z: Vec<EntryJson>,
        b: EntryJson,
        twist: usize,
        #[serde(default)]
        name: Option<String>,
    },
}

fn one() -> i64 {
    1
}

impl Default for InstanceRecipe {
    fn default() -> Self {
        InstanceRecipe::Weyl { p: 2, n: 2 }
    }
}

impl InstanceRecipe {
    /// Parameter errors are returned; failed hypotheses are not, so that
    /// `check-instance` can report them.
    pub fn parts(&self) -> Result<InstanceParts> {
        match self {
            InstanceRecipe::Weyl { p, n } => weyl_parts(*p, *n),
            InstanceRecipe::Classical { v, p, n } => classical_parts(v, *p, *n),
            InstanceRecipe::Quantized {
                modulus,
                u,
                vscalar,
                nilpotency,
                twist,
            } => quantized_parts(*modulus, *u, *vscalar, *nilpotency, *twist),
            InstanceRecipe::Explicit {
                ring,
                phi,
                z,
                b,
                twist,
                name,
            } => {
                let coeffs = z
                    .iter()
                    .map(|c| c.to_scalar(*ring))
                    .collect::<Result<Vec<_>>>()?;
                let z = Poly::from_coeffs(*ring, coeffs);
                let phi = phi.build(*ring)?;
                Ok(InstanceParts {
                    name: name
                        .clone()
                        .unwrap_or_else(|| format!("explicit(z={z}, l={twist})")),
                    phi,
                    z,
                    b: b.to_scalar(*ring)?,
                    twist: *twist,
                })
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FunctorKind {
    F,
    G,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorollaryKind {
    Weyl,
    Quantized,
    Classical,
    SimpleDim,
}

impl fmt::Display for CorollaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorollaryKind::Weyl => "weyl",
            CorollaryKind::Quantized => "quantized",
            CorollaryKind::Classical => "classical",
            CorollaryKind::SimpleDim => "simple-dim",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Command {
    CheckInstance {},
    Idempotent {
        #[serde(default)]
        precision: Option<usize>,
    },
    Functor {
        which: FunctorKind,
        module: PathBuf,
    },
    Roundtrip {
        module: PathBuf,
    },
    Torsion {
        module: PathBuf,
    },
    Corollary {
        which: CorollaryKind,
    },
    Selftest {},
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::CheckInstance {} => write!(f, "check-instance"),
            Command::Idempotent { precision: Some(n) } => write!(f, "idempotent --precision {n}"),
            Command::Idempotent { precision: None } => write!(f, "idempotent"),
            Command::Functor { which, module } => {
                write!(f, "functor {which:?} --module {}", module.display())
            }
            Command::Roundtrip { module } => write!(f, "roundtrip --module {}", module.display()),
            Command::Torsion { module } => write!(f, "torsion --module {}", module.display()),
            Command::Corollary { which } => write!(f, "corollary {which}"),
            Command::Selftest {} => write!(f, "selftest"),
        }
    }
}

/// A job file. Every key is optional; the instance defaults to the Weyl
/// algebra over `Z/4`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(default)]
    pub instance: InstanceRecipe,
    #[serde(default)]
    pub commands: Vec<Command>,
    #[serde(default)]
    pub precision: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl JobConfig {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| in_file(path, e))
    }
}

fn in_file(path: &Path, err: Error) -> Error {
    match err {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => Error::Parse(format!("{}: {other}", path.display())),
    }
}

/// The outcome of one command.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommandReport {
    pub command: String,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, Value>,
}

impl CommandReport {
    fn new(command: &Command) -> Self {
        CommandReport {
            command: command.to_string(),
            ..Default::default()
        }
    }

    fn absorb(&mut self, report: Report) {
        self.checks.extend(report.checks);
        self.warnings.extend(report.warnings);
    }

    fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.values.insert(key.into(), value.into());
    }
}

/// The full report. Contains no timestamps, so equal inputs give
/// byte-identical JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobReport {
    pub instance: String,
    pub seed: u64,
    pub commands: Vec<CommandReport>,
    pub checks: usize,
    pub passed: usize,
    pub pass: bool,
    /// Files to write next to the report, as `(name, contents)`.
    #[serde(skip)]
    pub artifacts: Vec<(String, String)>,
}

impl JobReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("serializable");
        text.push('\n');
        text
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.commands
            .iter()
            .flat_map(|c| c.checks.iter())
            .filter(|c| !c.pass)
    }
}

impl fmt::Display for JobReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "instance: {}", self.instance)?;
        writeln!(f, "seed: {}", self.seed)?;
        for cmd in &self.commands {
            writeln!(f)?;
            writeln!(f, "== {} ==", cmd.command)?;
            for (k, v) in &cmd.values {
                match v {
                    Value::String(s) => writeln!(f, "{k} = {s}")?,
                    Value::Number(n) => writeln!(f, "{k} = {n}")?,
                    _ => {}
                }
            }
            for check in &cmd.checks {
                writeln!(f, "{check}")?;
            }
            for w in &cmd.warnings {
                writeln!(f, "warning: {w}")?;
            }
        }
        writeln!(f)?;
        writeln!(
            f,
            "{}/{} checks passed: {}",
            self.passed,
            self.checks,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Runs every command of `config`. Module paths are resolved against
/// `base_dir`. `Err` means a config or IO error; check failures are
/// recorded in the report.
pub fn run_job(config: &JobConfig, base_dir: &Path) -> Result<JobReport> {
    let parts = config.instance.parts()?;
    let inst = match parts.clone().build() {
        Ok(inst) => inst,
        Err(Error::NotComaximal(_) | Error::InvalidInstance(_)) => parts.assemble()?,
        Err(e) => return Err(e),
    };
    let hypotheses_hold = validate_instance(&inst).all_pass();
    let mut runner = Runner {
        config,
        inst: &inst,
        base_dir,
        artifacts: Vec::new(),
    };
    let mut commands = Vec::new();
    for cmd in &config.commands {
        let needs_valid = !matches!(
            cmd,
            Command::CheckInstance {} | Command::Corollary { .. } | Command::Selftest {}
        );
        if needs_valid && !hypotheses_hold {
            let mut out = CommandReport::new(cmd);
            out.checks.push(Check::new(
                "instance hypotheses",
                "GWA hypotheses: comaximal orbit, φ^l(z) ≡ z mod b",
                false,
                "run check-instance for the failing hypothesis",
            ));
            commands.push(out);
            continue;
        }
        commands.push(runner.run(cmd)?);
    }
    let checks = commands.iter().map(|c| c.checks.len()).sum();
    let passed = commands
        .iter()
        .map(|c| c.checks.iter().filter(|k| k.pass).count())
        .sum();
    Ok(JobReport {
        instance: inst.to_string(),
        seed: config.seed,
        pass: checks == passed,
        checks,
        passed,
        commands,
        artifacts: runner.artifacts,
    })
}

struct Runner<'a> {
    config: &'a JobConfig,
    inst: &'a GwaInstance,
    base_dir: &'a Path,
    artifacts: Vec<(String, String)>,
}

impl Runner<'_> {
    fn run(&mut self, cmd: &Command) -> Result<CommandReport> {
        let mut out = CommandReport::new(cmd);
        let inst = self.inst;
        let seed = self.config.seed;
        match cmd {
            Command::CheckInstance {} => {
                out.set("tau", inst.tau().to_string());
                out.set("twist", inst.twist());
                out.absorb(validate_instance(inst));
            }
            Command::Idempotent { precision } => {
                let n = precision
                    .or(self.config.precision)
                    .unwrap_or(DEFAULT_PRECISION);
                match IdempotentData::new(inst, n) {
                    Ok(data) => {
                        out.set("precision", data.precision);
                        out.set("working_precision", data.working_precision);
                        out.set("tau", data.tau.to_string());
                        out.set("e_prime", data.e_prime.to_string());
                        out.set("e", data.e.to_string());
                        out.set("u", data.u.to_string());
                        out.set("u_inv", data.u_inv.to_string());
                        out.absorb(data.checks(inst));
                        out.absorb(iso_f_roundtrip(inst, &data, n));
                    }
                    Err(err) => out.checks.push(Check::new(
                        "idempotent data",
                        "Hensel lift: unique idempotent lift of e'",
                        false,
                        err.to_string(),
                    )),
                }
            }
            Command::Functor { which, module } => {
                let source = match which {
                    FunctorKind::F => inst.clone(),
                    FunctorKind::G => inst.twisted(),
                };
                let Some(m) = self.load_module(module, &source, &mut out)? else {
                    return Ok(out);
                };
                match which {
                    FunctorKind::F => {
                        let result = functor_f(&m);
                        out.checks.push(Check::from_result(
                            "F(M) is a module over the twist",
                            "Theorem main: F(M) = M^{z∞} = eM",
                            &result,
                            |c| format!("dim F(M) = {}", c.module.dim()),
                        ));
                        if let Ok(c) = result {
                            out.absorb(c.context.checks(m.h()));
                            out.absorb(validate_module(&c.module));
                            out.set("dim", c.module.dim());
                            out.set("embedding", json!(matrix_to_json(&c.embedding)));
                            self.emit(
                                &mut out,
                                "functor_F.json",
                                ModuleJson::from_module(&c.module),
                            );
                        }
                    }
                    FunctorKind::G => {
                        let result = functor_g(inst, &m);
                        out.checks.push(Check::from_result(
                            "G(N) is a module over H(R, φ, z)",
                            "Morita: G(N) = He ⊗ N",
                            &result,
                            |g| format!("dim G(N) = {}", g.dim()),
                        ));
                        if let Ok(g) = result {
                            out.checks.push(Check::new(
                                "yx = z, xy = φ^{-1}(z) on G(N)",
                                "G action formulas",
                                action_table_consistency(&g),
                                String::new(),
                            ));
                            out.absorb(validate_module(&g));
                            out.set("dim", g.dim());
                            self.emit(&mut out, "functor_G.json", ModuleJson::from_module(&g));
                        }
                    }
                }
            }
            Command::Roundtrip { module } => {
                let Some(m) = self.load_module(module, inst, &mut out)? else {
                    return Ok(out);
                };
                let gf = roundtrip_gf(&m);
                out.checks.push(Check::from_result(
                    "roundtrip G(F(M)) ≅ M",
                    "Theorem main: F is an equivalence of categories",
                    &gf,
                    |w| format!("Θ is {}x{}", w.map.rows(), w.map.cols()),
                ));
                let fg = functor_f(&m).and_then(|c| {
                    let w = roundtrip_fg(inst, &c.module)?;
                    Ok((c, w))
                });
                out.checks.push(Check::from_result(
                    "roundtrip F(G(N)) ≅ N for N = F(M)",
                    "Morita: G(N) = He ⊗ N, F(M) = eM",
                    &fg,
                    |(_, w)| format!("dim {}", w.map.rows()),
                ));
                if let (Ok(w), Ok((c, _))) = (&gf, &fg) {
                    if let Ok(g) = functor_g(inst, &c.module) {
                        out.set("theta", json!(matrix_to_json(&w.map)));
                        self.emit(
                            &mut out,
                            "roundtrip_GF.json",
                            ModuleJson::from_module(&g).with_iso(&w.map),
                        );
                    }
                }
            }
            Command::Torsion { module } => {
                let Some(m) = self.load_module(module, inst, &mut out)? else {
                    return Ok(out);
                };
                let (torsion, index) = z_torsion_with_index(&m);
                out.set("stabilization_index", index);
                out.set("length", torsion.length());
                out.set("howell_rows", json!(torsion.howell_rows()));
                out.checks.push(Check::new(
                    "z-torsion stabilizes within dim M steps",
                    "z-torsion M^{z∞} = ker z(H)^d",
                    index <= m.dim().max(1),
                    format!("index {index}, dim {}", m.dim()),
                ));
                out.absorb(torsion_equals_em(&m));
            }
            Command::Corollary { which } => {
                let result = match which {
                    CorollaryKind::Weyl => {
                        let (p, n) = match &self.config.instance {
                            InstanceRecipe::Weyl { p, n } => (*p, *n),
                            _ => (2, 2),
                        };
                        corollary_weyl(p, n, seed)
                    }
                    CorollaryKind::Quantized => match &self.config.instance {
                        InstanceRecipe::Quantized {
                            modulus,
                            u,
                            nilpotency,
                            twist,
                            ..
                        } => corollary_quantized(*modulus, *u, *twist, *nilpotency, seed),
                        _ => corollary_quantized(5, 2, 4, 2, seed),
                    },
                    CorollaryKind::Classical => corollary_classical(seed),
                    CorollaryKind::SimpleDim => {
                        if inst.ring().is_field() && inst.b().is_zero() {
                            let weights: Vec<_> = inst.ring().elements().collect();
                            corollary_simple_dim(inst, &weights, seed)
                        } else {
                            selftest::simple_dim(seed)
                        }
                    }
                };
                match result {
                    Ok(r) => out.absorb(r),
                    Err(err) => out.checks.push(Check::new(
                        format!("corollary {which}"),
                        "corollary driver",
                        false,
                        err.to_string(),
                    )),
                }
            }
            Command::Selftest {} => out.absorb(selftest::selftest(seed)),
        }
        Ok(out)
    }

    /// Parse errors are config errors; a module that parses but fails its
    /// relations is a failed check.
    fn load_module(
        &self,
        path: &Path,
        inst: &GwaInstance,
        out: &mut CommandReport,
    ) -> Result<Option<MatrixModule>> {
        let full = self.base_dir.join(path);
        let text = std::fs::read_to_string(&full)
            .map_err(|e| Error::Io(format!("{}: {e}", full.display())))?;
        let parsed = ModuleJson::parse(&text).map_err(|e| in_file(&full, e))?;
        match parsed.to_module(inst) {
            Ok(m) => {
                out.checks.push(Check::new(
                    "module relations",
                    "category O: yx = z, xy = φ^{-1}(z), τ(H) nilpotent",
                    true,
                    format!("dim {}", m.dim()),
                ));
                if let Some(iso) = &parsed.iso {
                    out.checks.push(stored_iso_check(&m, iso));
                }
                Ok(Some(m))
            }
            Err(err @ (Error::Parse(_) | Error::DimensionMismatch(_))) => Err(in_file(&full, err)),
            Err(err) => {
                out.checks.push(Check::new(
                    "module relations",
                    "category O: yx = z, xy = φ^{-1}(z), τ(H) nilpotent",
                    false,
                    err.to_string(),
                ));
                Ok(None)
            }
        }
    }

    fn emit(&mut self, out: &mut CommandReport, name: &str, module: ModuleJson) {
        out.set("artifact", name);
        self.artifacts
            .push((name.to_string(), module.to_json_string() + "\n"));
    }
}

/// A stored `"iso"` witness must at least be invertible.
fn stored_iso_check(m: &MatrixModule, iso: &MatrixJson) -> Check {
    let ring = m.instance().ring();
    let parsed = matrix_from_json(ring, iso.len(), iso, "iso");
    let ok = parsed
        .as_ref()
        .ok()
        .and_then(Matrix::inverse)
        .is_some_and(|inv| inv.rows() == m.dim());
    Check::new(
        "stored iso witness is invertible",
        "module JSON: iso witness",
        ok,
        String::new(),
    )
}
