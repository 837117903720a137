//! The command implementations behind the CLI. Each returns a deterministic
//! report; timing lives only in the manifest and is never serialized.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{catalog_entries, catalog_get, RECONSTRUCTION_MODULES};
use crate::cohomology::cohomology;
use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::lie::{check_jacobi, extract_isotropy, IsotropyData, JacobiCheck, LieAlgebra};
use crate::reconstruction::sampling::{lemma_suite, Lemma};
use crate::reconstruction::{reconstruct, Context, ReconstructOptions, Reconstruction};

use super::doc::{entry_to_json, load_input, AlgebraDoc, Input, IsotropyDoc};
use super::expr::ModuleExpr;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_SEED: u64 = 20240229;

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub input_digest: Option<String>,
    pub options: BTreeMap<String, String>,
    pub engine_version: String,
    #[serde(skip)]
    pub timing: Duration,
}

impl RunManifest {
    fn new(command: &str, input_digest: Option<String>, options: &[(&str, String)]) -> Self {
        RunManifest {
            command: command.to_string(),
            input_digest,
            options: options.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            engine_version: ENGINE_VERSION.to_string(),
            timing: Duration::ZERO,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A mathematical violation was found (exit code 1).
    Violation,
}

#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub manifest: RunManifest,
    pub status: Status,
    pub report: Value,
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Structured,
    Text,
}

impl CommandOutput {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Structured => {
                let doc = json!({ "manifest": self.manifest, "report": self.report });
                let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut s = format!(
                    "{} (kleinrec {})\n",
                    self.manifest.command, self.manifest.engine_version
                );
                if let Some(d) = &self.manifest.input_digest {
                    let _ = writeln!(s, "input sha256 {d}");
                }
                for (k, v) in &self.manifest.options {
                    let _ = writeln!(s, "{k:<14} {v}");
                }
                s.push('\n');
                s.push_str(&self.text);
                s
            }
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::Violation => 1,
        }
    }
}

/// Exit code for a failed command: 1 when the input breaks a Lie algebra
/// axiom or is not a subalgebra, 2 for everything else.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::JacobiViolation { .. }
        | Error::NotRepresentation { .. }
        | Error::NotAntisymmetric { .. }
        | Error::NotSubalgebra { .. } => 1,
        _ => 2,
    }
}

fn timed(start: Instant, mut out: CommandOutput) -> CommandOutput {
    out.manifest.timing = start.elapsed();
    out
}

fn strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(Scalar::to_string).collect()
}

/// `H^degree(h, V)`; without a module expression, degree-1 cohomology of
/// the three reconstruction modules.
pub fn cmd_cohomology(input: &str, module: Option<&str>, degree: usize) -> Result<CommandOutput> {
    let start = Instant::now();
    let (inp, digest) = load_input(input)?;
    let data = inp.isotropy()?;
    let exprs: Vec<String> = match module {
        Some(m) => vec![m.to_string()],
        None => RECONSTRUCTION_MODULES.iter().map(|s| s.to_string()).collect(),
    };
    let mut spaces = Vec::new();
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:<16} {:>6} {:>12} {:>8} {:>4}",
        "module", "degree", "cochains", "ranks", "dim"
    );
    for src in &exprs {
        let e = ModuleExpr::parse(src)?;
        let v = e.build(&data);
        let sp = cohomology(data.h(), &v, degree)?;
        let s = sp.summary();
        let _ = writeln!(
            text,
            "{:<16} {:>6} {:>12} {:>8} {:>4}",
            s.module,
            degree,
            format!("{:?}", s.cochain_dims),
            format!("{:?}", s.ranks),
            s.dim
        );
        spaces.push(s);
    }
    let manifest = RunManifest::new(
        "cohomology",
        Some(digest),
        &[
            ("input", input.to_string()),
            ("module", module.unwrap_or("(reconstruction modules)").to_string()),
            ("degree", degree.to_string()),
        ],
    );
    Ok(timed(
        start,
        CommandOutput {
            manifest,
            status: Status::Ok,
            report: json!({ "spaces": spaces }),
            text,
        },
    ))
}

/// Isotropy data and the bracket components of an algebra split along
/// basis indices.
pub fn cmd_extract(input: &str, h_indices: Option<&[usize]>, complement: Option<&[usize]>) -> Result<CommandOutput> {
    let start = Instant::now();
    let (inp, digest) = load_input(input)?;
    let g = inp.algebra()?;
    let g = LieAlgebra::new(g.names().to_vec(), g.constants().clone())?;
    let h: Vec<usize> = match (h_indices, &inp) {
        (Some(h), _) => h.to_vec(),
        (None, Input::Algebra { h_indices: Some(h), .. }) => h.clone(),
        _ => return Err(Error::IndexSet("no subalgebra indices given".into())),
    };
    let ex = extract_isotropy(&g, &h, complement)?;
    let ctx = Context::new(ex.data.clone());
    let class = ctx.phi_space()?.class_of(&ex.phi)?;
    let mut text = String::new();
    let _ = writeln!(text, "h = {:?}, dim m = {}", h, ex.data.m_dim());
    for (i, r) in ex.data.rho().iter().enumerate() {
        let _ = writeln!(
            text,
            "rho({}) = {:?}",
            ex.data.h().names()[i],
            r.row_vecs().iter().map(|r| strings(r)).collect::<Vec<_>>()
        );
    }
    let _ = writeln!(text, "[phi] in H1(h, m*⊗h) = {:?}", strings(&class));
    let report = json!({
        "isotropy": IsotropyDoc::from_data(&ex.data),
        "basis_order": ex.basis_order,
        "phi": strings(&ex.phi),
        "phi_class": strings(&class),
        "theta_h": strings(&ex.theta_h),
        "theta_m": strings(&ex.theta_m),
    });
    let mut opts = vec![("input", input.to_string()), ("h_indices", format!("{h:?}"))];
    if let Some(c) = complement {
        opts.push(("complement", format!("{c:?}")));
    }
    let manifest = RunManifest::new("extract", Some(digest), &opts);
    Ok(timed(
        start,
        CommandOutput {
            manifest,
            status: Status::Ok,
            report,
            text,
        },
    ))
}

pub fn reconstruction_report(data: &IsotropyData, r: &Reconstruction) -> (Value, String) {
    let sys = &r.system;
    let branches: Vec<Value> = r
        .branches
        .iter()
        .enumerate()
        .map(|(i, b)| {
            json!({
                "index": i,
                "status": b.status,
                "decisions": b.decisions,
                "substitution": b.substitution.iter().map(|(k, v)| json!([k, v])).collect::<Vec<_>>(),
                "free_params": b.free_params,
                "residual": b.residual,
                "flat": b.flat,
                "phi_class_zero": b.phi_class_zero,
                "jacobi_ok": b.jacobi_ok,
                "ideal_witness": b.ideal_witness.iter().map(|v| strings(v)).collect::<Vec<_>>(),
                "algebra": b.algebra.as_ref().map(AlgebraDoc::from_algebra),
            })
        })
        .collect();
    let c1 = &sys.constraint1;
    let report = json!({
        "isotropy": IsotropyDoc::from_data(data),
        "phi_class_dim": r.phi_class_dim,
        "constraint1": {
            "equations": c1.equations(),
            "rank": c1.class_matrix.rank(),
            "admissible_phi_dim": c1.kernel.len(),
        },
        "module_splits": r.module_splits,
        "variables": sys.var_names,
        "equation_counts": sys.counts(),
        "equations": sys.equations,
        "options": r.options,
        "infeasible_branches": r.infeasible,
        "branches": branches,
        "rigidity": r.rigidity,
    });
    let mut text = String::new();
    let _ = writeln!(
        text,
        "H1(h, m*⊗h) dim {}; constraint 1: {} equations, rank {}",
        r.phi_class_dim,
        c1.equations(),
        c1.class_matrix.rank()
    );
    if r.module_splits {
        let _ = writeln!(
            text,
            "[phi] = 0 is forced: m is an h-invariant complement (the module splits)"
        );
    }
    let counts = sys.counts();
    let _ = writeln!(
        text,
        "equations: {} constraint-2, {} jac-m h-part, {} jac-m m-part ({} linear, {} quadratic)",
        counts.constraint2, counts.jac_m_h, counts.jac_m_m, counts.linear, counts.quadratic
    );
    let _ = writeln!(
        text,
        "branches: {} ({} infeasible pruned)",
        r.branches.len(),
        r.infeasible
    );
    for (i, b) in r.branches.iter().enumerate() {
        let kind = if b.flat { " flat" } else { "" };
        let _ = writeln!(text, "  [{i}] {:?}{kind} {}", b.status, b.decisions.join("; "));
        if !b.free_params.is_empty() {
            let _ = writeln!(text, "      free: {}", b.free_params.join(", "));
        }
        for res in &b.residual {
            let _ = writeln!(text, "      residual: {res} = 0");
        }
        if !b.ideal_witness.is_empty() {
            let _ = writeln!(text, "      ideal inside h of dim {}", b.ideal_witness.len());
        }
    }
    let _ = writeln!(
        text,
        "rigid: {} (effective branches {:?}, families {}, unsolved {})",
        r.rigidity.rigid, r.rigidity.effective, r.rigidity.families, r.rigidity.unsolved
    );
    (report, text)
}

pub fn cmd_reconstruct(input: &str, options: &ReconstructOptions) -> Result<CommandOutput> {
    let start = Instant::now();
    let (inp, digest) = load_input(input)?;
    let data = inp.isotropy()?;
    let r = reconstruct(&data, options)?;
    let (report, text) = reconstruction_report(&data, &r);
    let manifest = RunManifest::new(
        "reconstruct",
        Some(digest),
        &[
            ("input", input.to_string()),
            ("branch_depth", options.branch_depth.to_string()),
            ("normalize", options.normalize.to_string()),
        ],
    );
    Ok(timed(
        start,
        CommandOutput {
            manifest,
            status: Status::Ok,
            report,
            text,
        },
    ))
}

/// Jacobi check of an algebra and, when it carries `h_indices`, the
/// subalgebra and representation checks of its isotropy data.
pub fn cmd_verify(input: &str) -> Result<CommandOutput> {
    let start = Instant::now();
    let (inp, digest) = load_input(input)?;
    let mut text = String::new();
    let mut violations = Vec::new();
    let mut report = serde_json::Map::new();
    match &inp {
        Input::Isotropy(d) => {
            // construction already validated h and ρ
            let _ = writeln!(text, "isotropy data: h is a Lie algebra and rho is a representation");
            report.insert("isotropy".into(), json!(IsotropyDoc::from_data(d)));
        }
        Input::Algebra { algebra, h_indices } => {
            if let JacobiCheck::Violations(v) = check_jacobi(algebra) {
                for x in &v {
                    let (i, j, k) = x.triple;
                    let _ = writeln!(
                        text,
                        "Jacobi fails on ({i}, {j}, {k}): residual {:?}",
                        strings(&x.residual)
                    );
                    violations.push(json!({
                        "kind": "jacobi",
                        "triple": [i, j, k],
                        "residual": strings(&x.residual),
                    }));
                }
            }
            if let (Some(h), true) = (h_indices, violations.is_empty()) {
                match extract_isotropy(algebra, h, None) {
                    Ok(ex) => {
                        report.insert("isotropy".into(), json!(IsotropyDoc::from_data(&ex.data)));
                    }
                    Err(e) => {
                        let _ = writeln!(text, "isotropy: {e}");
                        violations.push(json!({ "kind": "isotropy", "message": e.to_string() }));
                    }
                }
            }
        }
    }
    let ok = violations.is_empty();
    if ok {
        text.push_str("OK\n");
    }
    report.insert("ok".into(), json!(ok));
    report.insert("violations".into(), Value::Array(violations));
    let manifest = RunManifest::new("verify", Some(digest), &[("input", input.to_string())]);
    Ok(timed(
        start,
        CommandOutput {
            manifest,
            status: if ok { Status::Ok } else { Status::Violation },
            report: Value::Object(report),
            text,
        },
    ))
}

pub fn cmd_lemmas(input: &str, samples: usize, seed: u64) -> Result<CommandOutput> {
    let start = Instant::now();
    let (inp, digest) = load_input(input)?;
    let ctx = Context::new(inp.isotropy()?);
    let r = lemma_suite(&ctx, samples, seed)?;
    let mut text = String::new();
    for lemma in Lemma::ALL {
        let (pass, total) = r
            .checks
            .iter()
            .filter(|c| c.lemma == lemma)
            .fold((0, 0), |(p, t), c| (p + usize::from(c.passed), t + 1));
        let _ = writeln!(text, "{:<17} {pass}/{total}", lemma.name());
    }
    let _ = writeln!(text, "{:<17} {}", "total", r.ratio());
    let status = if r.all_passed() { Status::Ok } else { Status::Violation };
    let report = json!({
        "passed": r.passed,
        "total": r.total,
        "ratio": r.ratio(),
        "failures": r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>(),
    });
    let manifest = RunManifest::new(
        "lemmas",
        Some(digest),
        &[
            ("input", input.to_string()),
            ("samples", samples.to_string()),
            ("seed", seed.to_string()),
        ],
    );
    Ok(timed(
        start,
        CommandOutput {
            manifest,
            status,
            report,
            text,
        },
    ))
}

pub fn cmd_catalog_list() -> CommandOutput {
    let start = Instant::now();
    let entries = catalog_entries();
    let mut text = String::new();
    let width = entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
    for e in &entries {
        let _ = writeln!(text, "{:<width$}  {}", e.name, e.description);
    }
    let report = json!(entries
        .iter()
        .map(|e| json!({ "name": e.name, "description": e.description }))
        .collect::<Vec<_>>());
    timed(
        start,
        CommandOutput {
            manifest: RunManifest::new("catalog list", None, &[]),
            status: Status::Ok,
            report,
            text,
        },
    )
}

/// `show` renders an entry for reading; `export` emits the importable document.
pub fn cmd_catalog_entry(name: &str, export: bool) -> Result<CommandOutput> {
    let start = Instant::now();
    let e = catalog_get(name)?;
    let doc = entry_to_json(&e);
    let mut text = String::new();
    if export {
        text = serde_json::to_string_pretty(&doc).expect("serializable");
        text.push('\n');
    } else {
        let _ = writeln!(text, "{}: {}", e.name, e.description);
        for (k, v) in &e.expected {
            let _ = writeln!(
                text,
                "  expected {k} = {} ({:?})",
                serde_json::to_string(&v.value).expect("serializable"),
                v.source
            );
        }
        if let Some(g) = e.algebra() {
            let _ = writeln!(text, "  basis {}", g.names().join(", "));
        }
        if let Some(d) = e.isotropy() {
            let _ = writeln!(text, "  dim h = {}, dim m = {}", d.h_dim(), d.m_dim());
        }
    }
    let command = if export { "catalog export" } else { "catalog show" };
    Ok(timed(
        start,
        CommandOutput {
            manifest: RunManifest::new(command, None, &[("name", name.to_string())]),
            status: Status::Ok,
            report: doc,
            text,
        },
    ))
}
