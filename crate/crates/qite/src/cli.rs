//! Experiment runner: a `key = value` run configuration dispatched to
//! ED / exact ITE / QITE / varQITE, emitting a trajectory CSV and a JSON
//! summary.
//!
//! # Configuration grammar
//!
//! Line-based, `#` starts a comment, `[section]` opens a section. Top-level
//! keys before any section header:
//!
//! ```text
//! method = ed | ite | qite | varqite | all
//! output = <dir>                  # optional; the --out flag overrides it
//! emit_fidelity = true|false      # default true
//! degenerate_subspace = true|false  # default false: single ED vector
//! degeneracy_tol = <float>        # default 1e-8
//! ```
//!
//! `[model]` takes either `n` / `j` / `g` (TFIM, defaults J = 1, g = 1) or
//! `hamiltonian_file = <path>` in the one-term-per-line text format, never
//! both. `[ite]` takes `dtau` (0.25) and `steps` (80). `[qite]` takes `dtau`
//! (0.25), `steps` (40), `domains` (comma list, default `2`), `rcond`
//! (1e-8), `include_identity` (false). `[varqite]` takes `eta` (0.05),
//! `steps` (200), `reps` (2), `theta0` (`pi/3`; accepts `pi`, `pi/<k>`, or
//! a float), `m_second_term` (true), `m_regularization` (1e-6), `v_method`
//! (`analytic` or `parameter-shift`). Unknown keys and duplicate keys are
//! rejected with the offending line number.
//!
//! # Output files
//!
//! `trajectory.csv` — header `method,step,beta,energy,fidelity,extra`, one
//! block of rows per executed method, numbers in C `%.12e` formatting, LF
//! line endings. `beta` is computed as `step × Δτ` (a product, never an
//! accumulated sum). `extra` is the per-step diagnostic: max least-squares
//! residual for QITE, `‖V‖` for varQITE, blank otherwise.
//!
//! `summary.json` — `e_gs`, final energy/fidelity and step count of each
//! method, wall-clock seconds, and the raw config echo.

use crate::model::{
    build_tfim, exact_ground, exact_ite_evolve, full_piece, load_hamiltonian, trotterize_tfim,
    GroundTruth, TfimParams,
};
use crate::pauli::PauliSum;
use crate::qite::{run_qite, QiteConfig};
use crate::statevec::StateVector;
use crate::varqite::{run_varqite, Ansatz, VMethod, VarQiteConfig};
use crate::Error;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Ed,
    Ite,
    Qite,
    VarQite,
    All,
}

#[derive(Clone, Debug)]
pub enum ModelSource {
    Tfim(TfimParams),
    File(PathBuf),
}

#[derive(Clone, Debug)]
pub struct IteSettings {
    pub dtau: f64,
    pub steps: usize,
}

/// A fully validated run configuration with defaults filled in.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub method: Method,
    pub model: ModelSource,
    pub ite: IteSettings,
    pub qite: QiteConfig,
    pub qite_domains: Vec<usize>,
    pub varqite: VarQiteConfig,
    pub varqite_reps: usize,
    pub emit_fidelity: bool,
    pub degenerate_subspace: bool,
    pub degeneracy_tol: f64,
    pub output: Option<PathBuf>,
    /// Raw config text, echoed into the summary.
    pub raw: String,
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Config {
        line,
        msg: msg.into(),
    }
}

fn parse_angle(line: usize, v: &str) -> Result<f64, Error> {
    use std::f64::consts::PI;
    let v = v.trim();
    let (sign, body) = match v.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, v),
    };
    if body == "pi" {
        return Ok(sign * PI);
    }
    if let Some(denom) = body.strip_prefix("pi/") {
        let d: f64 = denom
            .parse()
            .map_err(|_| err(line, format!("invalid angle `{v}`")))?;
        return Ok(sign * PI / d);
    }
    v.parse()
        .map_err(|_| err(line, format!("invalid angle `{v}`")))
}

fn parse_f64(line: usize, key: &str, v: &str) -> Result<f64, Error> {
    v.parse()
        .map_err(|_| err(line, format!("invalid number for `{key}`: `{v}`")))
}

fn parse_usize(line: usize, key: &str, v: &str) -> Result<usize, Error> {
    v.parse()
        .map_err(|_| err(line, format!("invalid integer for `{key}`: `{v}`")))
}

fn parse_bool(line: usize, key: &str, v: &str) -> Result<bool, Error> {
    match v {
        "true" | "on" | "yes" => Ok(true),
        "false" | "off" | "no" => Ok(false),
        _ => Err(err(line, format!("invalid boolean for `{key}`: `{v}`"))),
    }
}

/// Parse and validate a run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, Error> {
    let mut section = String::new();
    let mut entries: BTreeMap<(String, String), (usize, String)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| err(lineno, "unterminated section header"))?
                .trim();
            if !matches!(name, "model" | "ite" | "qite" | "varqite") {
                return Err(err(lineno, format!("unknown section `[{name}]`")));
            }
            section = name.to_string();
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(lineno, format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if let Some((prev, _)) = entries.get(&(section.clone(), key.clone())) {
            return Err(err(
                lineno,
                format!("duplicate key `{key}` (first set on line {prev})"),
            ));
        }
        entries.insert((section.clone(), key), (lineno, value));
    }

    let mut take = |sec: &str, key: &str| entries.remove(&(sec.to_string(), key.to_string()));

    // top level
    let method = match take("", "method") {
        Some((line, v)) => match v.as_str() {
            "ed" => Method::Ed,
            "ite" => Method::Ite,
            "qite" => Method::Qite,
            "varqite" => Method::VarQite,
            "all" => Method::All,
            other => return Err(err(line, format!("unknown method `{other}`"))),
        },
        None => return Err(err(0, "missing required key `method`")),
    };
    let emit_fidelity = match take("", "emit_fidelity") {
        Some((l, v)) => parse_bool(l, "emit_fidelity", &v)?,
        None => true,
    };
    let degenerate_subspace = match take("", "degenerate_subspace") {
        Some((l, v)) => parse_bool(l, "degenerate_subspace", &v)?,
        None => false,
    };
    let degeneracy_tol = match take("", "degeneracy_tol") {
        Some((l, v)) => parse_f64(l, "degeneracy_tol", &v)?,
        None => 1e-8,
    };
    let output = take("", "output").map(|(_, v)| PathBuf::from(v));

    // model
    let ham_file = take("model", "hamiltonian_file");
    let n = take("model", "n");
    let j = take("model", "j");
    let g = take("model", "g");
    let model = if let Some((line, path)) = ham_file {
        if let Some((l, _)) = n.or(j).or(g) {
            return Err(err(
                l,
                "`hamiltonian_file` excludes `n`/`j`/`g`; exactly one model source allowed",
            ));
        }
        let _ = line;
        ModelSource::File(PathBuf::from(path))
    } else {
        let (line, n) = n.ok_or_else(|| err(0, "missing `n` in [model] (or `hamiltonian_file`)"))?;
        let n = parse_usize(line, "n", &n)?;
        if n < 2 {
            return Err(err(line, "model size `n` must be at least 2"));
        }
        let j = match j {
            Some((l, v)) => parse_f64(l, "j", &v)?,
            None => 1.0,
        };
        let g = match g {
            Some((l, v)) => parse_f64(l, "g", &v)?,
            None => 1.0,
        };
        ModelSource::Tfim(TfimParams::new(n, j, g))
    };

    // ite
    let ite = IteSettings {
        dtau: match take("ite", "dtau") {
            Some((l, v)) => parse_f64(l, "dtau", &v)?,
            None => 0.25,
        },
        steps: match take("ite", "steps") {
            Some((l, v)) => parse_usize(l, "steps", &v)?,
            None => 80,
        },
    };
    if ite.dtau <= 0.0 {
        return Err(err(0, "[ite] dtau must be positive"));
    }

    // qite
    let mut qite = QiteConfig::default();
    if let Some((l, v)) = take("qite", "dtau") {
        qite.dtau = parse_f64(l, "dtau", &v)?;
        if qite.dtau <= 0.0 {
            return Err(err(l, "dtau must be positive"));
        }
    }
    if let Some((l, v)) = take("qite", "steps") {
        qite.steps = parse_usize(l, "steps", &v)?;
    }
    if let Some((l, v)) = take("qite", "rcond") {
        qite.rcond = parse_f64(l, "rcond", &v)?;
        if !(qite.rcond > 0.0 && qite.rcond < 1.0) {
            return Err(err(l, "rcond must lie in (0, 1)"));
        }
    }
    if let Some((l, v)) = take("qite", "include_identity") {
        qite.include_identity = parse_bool(l, "include_identity", &v)?;
    }
    let qite_domains = match take("qite", "domains") {
        Some((l, v)) => {
            let mut out = Vec::new();
            for part in v.split(',') {
                let d = parse_usize(l, "domains", part.trim())?;
                if d < 2 {
                    return Err(err(l, format!("domain_size ≥ 2 required, got {d}")));
                }
                out.push(d);
            }
            if out.is_empty() {
                return Err(err(l, "empty `domains` list"));
            }
            out
        }
        None => vec![2],
    };

    // varqite
    let mut varqite = VarQiteConfig::default();
    if let Some((l, v)) = take("varqite", "eta") {
        varqite.eta = parse_f64(l, "eta", &v)?;
        if varqite.eta <= 0.0 {
            return Err(err(l, "eta must be positive"));
        }
    }
    if let Some((l, v)) = take("varqite", "steps") {
        varqite.steps = parse_usize(l, "steps", &v)?;
    }
    if let Some((l, v)) = take("varqite", "theta0") {
        varqite.theta0 = parse_angle(l, &v)?;
    }
    if let Some((l, v)) = take("varqite", "m_second_term") {
        varqite.m_second_term = parse_bool(l, "m_second_term", &v)?;
    }
    if let Some((l, v)) = take("varqite", "m_regularization") {
        varqite.m_regularization = parse_f64(l, "m_regularization", &v)?;
        if varqite.m_regularization < 0.0 {
            return Err(err(l, "m_regularization must be non-negative"));
        }
    }
    let varqite_reps = match take("varqite", "reps") {
        Some((l, v)) => {
            let r = parse_usize(l, "reps", &v)?;
            if r == 0 {
                return Err(err(l, "reps must be at least 1"));
            }
            r
        }
        None => 2,
    };
    if let Some((l, v)) = take("varqite", "v_method") {
        varqite.v_method = match v.as_str() {
            "analytic" => VMethod::Analytic,
            "parameter-shift" | "parameter_shift" => VMethod::ParameterShift,
            other => return Err(err(l, format!("unknown v_method `{other}`"))),
        };
    }

    if let Some(((sec, key), (line, _))) = entries.into_iter().next() {
        let place = if sec.is_empty() {
            "top level".to_string()
        } else {
            format!("section [{sec}]")
        };
        return Err(err(line, format!("unknown key `{key}` in {place}")));
    }

    Ok(RunConfig {
        method,
        model,
        ite,
        qite,
        qite_domains,
        varqite,
        varqite_reps,
        emit_fidelity,
        degenerate_subspace,
        degeneracy_tol,
        output,
        raw: text.to_string(),
    })
}

struct Row {
    step: usize,
    beta: f64,
    energy: f64,
    fidelity: Option<f64>,
    extra: Option<f64>,
}

struct Block {
    method: String,
    rows: Vec<Row>,
}

/// C-style `%.12e` formatting: sign-carrying two-digit exponent.
fn fmt_e(x: f64) -> String {
    let s = format!("{x:.12e}");
    match s.split_once('e') {
        Some((mant, exp)) => {
            let (sign, digits) = match exp.strip_prefix('-') {
                Some(d) => ('-', d),
                None => ('+', exp),
            };
            format!("{mant}e{sign}{digits:0>2}")
        }
        None => s, // nan/inf
    }
}

/// Summary facts returned to the caller (and written to `summary.json`).
pub struct RunOutcome {
    pub e_gs: Option<f64>,
    pub final_energy: f64,
    pub final_fidelity: Option<f64>,
    pub trajectory_path: PathBuf,
    pub summary_path: PathBuf,
}

/// Execute a run and write `trajectory.csv` and `summary.json` under
/// `out_dir`. On error nothing is left behind.
pub fn run(cfg: &RunConfig, out_dir: &Path) -> Result<RunOutcome, Error> {
    let started = std::time::Instant::now();

    let h: PauliSum = match &cfg.model {
        ModelSource::Tfim(p) => build_tfim(p),
        ModelSource::File(path) => load_hamiltonian(path)?,
    };
    let n = h.n_qubits();

    let ground: Option<GroundTruth> = if n <= crate::pauli::MAX_DENSE_QUBITS {
        Some(exact_ground(&h, cfg.degeneracy_tol))
    } else {
        None
    };
    let need_ed = cfg.method == Method::Ed || cfg.emit_fidelity;
    if need_ed && ground.is_none() {
        return Err(Error::Invalid(format!(
            "exact diagonalization needs n ≤ {}, got {n}; disable emit_fidelity or shrink the model",
            crate::pauli::MAX_DENSE_QUBITS
        )));
    }
    // Single-state fidelity by default; the degenerate-subspace flag widens
    // the reference to the whole ground manifold.
    let reference: Option<Vec<StateVector>> = ground.as_ref().map(|g| {
        if cfg.degenerate_subspace {
            g.gs_basis.clone()
        } else {
            vec![g.gs_basis[0].clone()]
        }
    });
    // Same reference handed to the iterative runners for their own records.
    let ref_ground: Option<GroundTruth> = ground.as_ref().zip(reference.as_ref()).map(|(g, r)| {
        GroundTruth {
            e_gs: g.e_gs,
            gs_basis: r.clone(),
            degeneracy_tol: g.degeneracy_tol,
        }
    });
    let fidelity_of = |state: &StateVector| -> Option<f64> {
        if cfg.emit_fidelity {
            reference.as_ref().map(|r| state.fidelity(r))
        } else {
            None
        }
    };

    let psi0 = StateVector::zero_state(n);
    let mut blocks: Vec<Block> = Vec::new();

    let run_ite = |blocks: &mut Vec<Block>| {
        let traj = exact_ite_evolve(&h, &psi0, cfg.ite.dtau, cfg.ite.steps);
        let rows = traj
            .iter()
            .map(|rec| Row {
                step: (rec.beta / cfg.ite.dtau).round() as usize,
                beta: rec.beta,
                energy: rec.energy,
                fidelity: fidelity_of(&rec.state),
                extra: None,
            })
            .collect();
        blocks.push(Block {
            method: "ite".to_string(),
            rows,
        });
    };

    let run_qite_blocks = |blocks: &mut Vec<Block>| {
        for &d in &cfg.qite_domains {
            let mut qcfg = cfg.qite.clone();
            qcfg.domain_size = d;
            qcfg.record_fidelity = cfg.emit_fidelity;
            let pieces = if d >= n {
                vec![full_piece(&h)]
            } else {
                match &cfg.model {
                    ModelSource::Tfim(p) => trotterize_tfim(p, d),
                    ModelSource::File(_) => vec![full_piece(&h)],
                }
            };
            let reports = run_qite(&h, &pieces, &psi0, &qcfg, ref_ground.as_ref());
            let rows = reports
                .iter()
                .map(|rep| Row {
                    step: rep.step,
                    beta: rep.step as f64 * qcfg.dtau,
                    energy: rep.energy,
                    fidelity: rep.fidelity,
                    extra: rep
                        .pieces
                        .iter()
                        .map(|p| p.residual)
                        .fold(None, |acc: Option<f64>, r| {
                            Some(acc.map_or(r, |a| a.max(r)))
                        }),
                })
                .collect();
            blocks.push(Block {
                method: format!("qite_d{d}"),
                rows,
            });
        }
    };

    let run_varqite_block = |blocks: &mut Vec<Block>| {
        let ansatz = Ansatz::hardware_efficient(n, cfg.varqite_reps);
        let mut vcfg = cfg.varqite.clone();
        vcfg.record_fidelity = cfg.emit_fidelity;
        let traj = run_varqite(&h, &ansatz, &vcfg, ref_ground.as_ref());
        let rows = traj
            .records
            .iter()
            .map(|rec| Row {
                step: rec.step,
                beta: rec.step as f64 * vcfg.eta,
                energy: rec.energy,
                fidelity: rec.fidelity,
                extra: if rec.v_norm.is_finite() {
                    Some(rec.v_norm)
                } else {
                    None
                },
            })
            .collect();
        blocks.push(Block {
            method: "varqite".to_string(),
            rows,
        });
    };

    match cfg.method {
        Method::Ed => {
            let g = ground.as_ref().expect("checked above");
            blocks.push(Block {
                method: "ed".to_string(),
                rows: vec![Row {
                    step: 0,
                    beta: 0.0,
                    energy: g.e_gs,
                    fidelity: if cfg.emit_fidelity { Some(1.0) } else { None },
                    extra: None,
                }],
            });
        }
        Method::Ite => run_ite(&mut blocks),
        Method::Qite => run_qite_blocks(&mut blocks),
        Method::VarQite => run_varqite_block(&mut blocks),
        Method::All => {
            run_ite(&mut blocks);
            run_qite_blocks(&mut blocks);
            run_varqite_block(&mut blocks);
        }
    }

    // render CSV
    let mut csv = String::from("method,step,beta,energy,fidelity,extra\n");
    for block in &blocks {
        for row in &block.rows {
            let fid = row.fidelity.map(fmt_e).unwrap_or_default();
            let extra = row.extra.map(fmt_e).unwrap_or_default();
            csv.push_str(&format!(
                "{},{},{},{},{},{}\n",
                block.method,
                row.step,
                fmt_e(row.beta),
                fmt_e(row.energy),
                fid,
                extra
            ));
        }
    }

    let last_block = blocks.last().expect("at least one method ran");
    let last_row = last_block.rows.last().expect("at least one row");
    let e_gs = ground.as_ref().map(|g| g.e_gs);

    let mut methods = serde_json::Map::new();
    for block in &blocks {
        let last = block.rows.last().unwrap();
        methods.insert(
            block.method.clone(),
            serde_json::json!({
                "final_energy": last.energy,
                "final_fidelity": last.fidelity,
                "steps": last.step,
            }),
        );
    }
    let summary = serde_json::json!({
        "e_gs": e_gs,
        "final_energy": last_row.energy,
        "final_fidelity": last_row.fidelity,
        "steps": last_row.step,
        "wall_seconds": started.elapsed().as_secs_f64(),
        "methods": methods,
        "config": cfg.raw,
    });

    std::fs::create_dir_all(out_dir)?;
    let trajectory_path = out_dir.join("trajectory.csv");
    let summary_path = out_dir.join("summary.json");
    std::fs::write(&trajectory_path, csv)?;
    if let Err(e) = std::fs::write(&summary_path, format!("{:#}\n", summary)) {
        let _ = std::fs::remove_file(&trajectory_path);
        return Err(e.into());
    }

    Ok(RunOutcome {
        e_gs,
        final_energy: last_row.energy,
        final_fidelity: last_row.fidelity,
        trajectory_path,
        summary_path,
    })
}
