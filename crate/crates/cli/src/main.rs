//! `calibkit`: command-line front end to the calibkit library.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use calibkit::calibnum::{
    calibrated_orientation, coassoc_family_rank, coassoc_normal_iso, comass_estimate,
    normal_complement, restriction_max, sl_predicate, ComassConfig, Frame,
};
use calibkit::cartan::{
    build_g2_restrainers, cartan_test, g2_su2, polar_h, restraining_check, RestrainingCheck,
};
use calibkit::catalog::{self, CatalogKey};
use calibkit::exact::{Mat, Scalar, Subspace};
use calibkit::exterior::AltForm;
use calibkit::models::{
    build_g2_structure, sd_gram, standardize_sd_triple, torus_metric_roundtrip,
    torus_metric_roundtrip_f64, SDTriple,
};
use calibkit::report::{emit_report, run_suite, Format, Suite, SuiteOptions};
use calibkit::stabilizer::{
    stab_algebra, strong_admissibility, symbol_rank, FormSystem, SystemName,
};
use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "calibkit",
    version,
    about = "Exact and numerical checks for calibrated geometry"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a catalog object as JSON.
    Dump {
        #[arg(long)]
        name: String,
    },
    /// Stabilizer algebra and strong admissibility of a form system.
    Stab {
        #[arg(long)]
        system: String,
        #[arg(long)]
        json: bool,
    },
    /// Polar dimensions, Cartan test and extension ranks.
    Polar {
        #[arg(long)]
        system: String,
        /// Report h_k and the extension rank at this level only.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Restraining spaces and their checks (su3 or g2).
    Restrain {
        #[arg(long)]
        system: String,
        #[arg(long)]
        json: bool,
    },
    /// Comass lower bound by Stiefel ascent.
    Comass {
        /// Catalog key, or a path to a form in JSON.
        #[arg(long)]
        form: String,
        #[arg(long)]
        p: usize,
        /// Number of random restarts.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 500)]
        iters: usize,
        #[arg(long, env = "CALIBKIT_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Special Lagrangian or coassociative test of a frame read from JSON.
    Plane {
        #[arg(long, value_enum)]
        check: PlaneCheck,
        #[arg(long)]
        frame: PathBuf,
    },
    /// Standardize a self-dual triple to an orthonormal coframe.
    Sdtriple {
        #[arg(long)]
        input: PathBuf,
    },
    /// The G2-structure on R^4 + R^3 built from a self-dual triple.
    G2build {
        #[arg(long)]
        input: PathBuf,
    },
    /// Round trip g -> h -> g for a constant metric on the m-torus.
    Torus {
        /// Matrix JSON, inline or as a file path.
        #[arg(long)]
        g: String,
        #[arg(long)]
        m: usize,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(Suite::NAMES))]
        suite: String,
        /// Include the long comass suite in `all`.
        #[arg(long)]
        full: bool,
        #[arg(long, env = "CALIBKIT_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PlaneCheck {
    Sl,
    Coassoc,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Table,
    Json,
}

/// Bad input from the user, as opposed to a failed check.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

/// Whether every check of the command passed.
type Outcome = anyhow::Result<bool>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Dump { name } => dump(&name),
        Command::Stab { system, json } => stab(system_named(&system)?, json),
        Command::Polar { system, k, json } => polar(system_named(&system)?, k, json),
        Command::Restrain { system, json } => restrain(system_named(&system)?, json),
        Command::Comass {
            form,
            p,
            samples,
            iters,
            seed,
            json,
        } => comass(
            &form,
            p,
            ComassConfig {
                restarts: samples,
                iterations: iters,
                seed,
            },
            json,
        ),
        Command::Plane { check, frame } => plane(check, &frame),
        Command::Sdtriple { input } => sdtriple(&input),
        Command::G2build { input } => g2build(&input),
        Command::Torus { g, m } => torus(&g, m),
        Command::Verify {
            suite,
            full,
            seed,
            format,
            out,
        } => verify(&suite, full, seed, format, out.as_deref()),
    }
}

/// Write to stdout, treating a closed pipe as success.
fn emit(text: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

macro_rules! say {
    ($($arg:tt)*) => {
        emit(&format!("{}\n", format_args!($($arg)*)))?
    };
}

fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    emit(&format!("{}\n", serde_json::to_string_pretty(value)?))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn system_named(name: &str) -> anyhow::Result<SystemName> {
    name.parse().map_err(|_| {
        let known: Vec<&str> = SystemName::ALL.iter().map(|n| n.as_str()).collect();
        usage(format!(
            "unknown system `{name}`; known systems: {}",
            known.join(", ")
        ))
    })
}

fn catalog_key(name: &str) -> anyhow::Result<CatalogKey> {
    name.parse().map_err(|e| {
        usage(format!(
            "{e}; known keys: {}",
            catalog::KEY_NAMES.join(", ")
        ))
    })
}

fn dump(name: &str) -> Outcome {
    print_json(&catalog::get(catalog_key(name)?)?)?;
    Ok(true)
}

fn matrix_rows(m: &Mat) -> Vec<String> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect()
}

fn stab(name: SystemName, as_json: bool) -> Outcome {
    let sys = FormSystem::named(name);
    let g = stab_algebra(&sys);
    let closed = g.is_bracket_closed()?;
    let admissibility = strong_admissibility(&sys);
    let rank = match &admissibility {
        Ok(a) => a.symbol_rank,
        Err(_) => symbol_rank(&sys),
    };
    if as_json {
        print_json(&json!({
            "system": name.as_str(),
            "n": sys.dim(),
            "dim": g.dim(),
            "basis": g.matrices()?,
            "bracket_closed": closed,
            "symbol_rank": rank,
            "strong_admissibility": admissibility.as_ref().ok(),
            "error": admissibility.as_ref().err().map(|e| e.to_string()),
        }))?;
    } else {
        say!("system            {}", name.as_str());
        say!("stabilizer dim    {}", g.dim());
        say!("bracket closed    {closed}");
        say!("symbol rank       {rank}");
        match &admissibility {
            Ok(a) => {
                say!("expected rank     {}", a.expected_rank);
                say!(
                    "kernel dim        {} (forced {}, {})",
                    a.kernel_dim,
                    a.forced_kernel_dim,
                    if a.kernel_cross_check {
                        "agrees"
                    } else {
                        "differs"
                    }
                );
                say!("strongly admissible  {}", a.verdict);
            }
            Err(e) => say!("strongly admissible  n/a ({e})"),
        }
        for (i, x) in g.matrices()?.iter().enumerate() {
            say!("basis[{i}]");
            for row in matrix_rows(x) {
                say!("  {row}");
            }
        }
    }
    Ok(closed)
}

fn polar(name: SystemName, k: Option<usize>, as_json: bool) -> Outcome {
    let sys = FormSystem::named(name);
    if let Some(k) = k {
        let h = polar_h(&sys, k)?;
        let ext = cartan_test(&sys).profile.extension_rank(k).ok();
        if as_json {
            print_json(
                &json!({ "system": name.as_str(), "k": k, "h_dim": h.dim(), "h": h, "extension_rank": ext }),
            )?;
        } else {
            say!("dim h_{k} = {}", h.dim());
            if let Some(e) = ext {
                say!(
                    "dim S = {}, dim H(E_{k}) = {}, r = {}",
                    e.dim_s,
                    e.dim_h,
                    e.r
                );
            }
        }
        return Ok(true);
    }
    let t = cartan_test(&sys);
    let ext: Vec<_> = (0..sys.dim())
        .filter_map(|k| t.profile.extension_rank(k).ok())
        .collect();
    if as_json {
        print_json(&json!({ "system": name.as_str(), "cartan": t, "extension_ranks": ext }))?;
    } else {
        say!("h_dims         {:?}", t.profile.h_dims);
        say!("c_seq          {:?}", t.profile.c_seq);
        say!("sum c_k (k<n)  {}", t.c_sum);
        say!("symbol rank    {}", t.symbol_rank);
        say!("regular flag   {}", t.regular);
        say!("k  dim_H  r");
        for e in &ext {
            say!("{}  {:>5}  {}", e.k, e.dim_h, e.r);
        }
    }
    Ok(true)
}

fn restrain(name: SystemName, as_json: bool) -> Outcome {
    let sys = FormSystem::named(name);
    let entries: Vec<(String, Subspace, RestrainingCheck)> = match name {
        SystemName::Su3 => {
            let r6 = catalog::get_matrix(CatalogKey::R6)?;
            [
                (CatalogKey::W5, 3),
                (CatalogKey::W14, 4),
                (CatalogKey::W22, 5),
            ]
            .into_iter()
            .map(|(key, k)| {
                let w = catalog::get_space(key)?;
                let c = restraining_check(&w, &sys, k, std::slice::from_ref(&r6), &[])?;
                Ok((key.to_string(), w, c))
            })
            .collect::<anyhow::Result<_>>()?
        }
        SystemName::G2 => {
            let w = build_g2_restrainers(&sys)?;
            let r7 = catalog::get_matrix(CatalogKey::R7)?;
            let su2 = g2_su2().matrices()?;
            w.by_level()
                .into_iter()
                .map(|(k, space)| {
                    let c = restraining_check(space, &sys, k, std::slice::from_ref(&r7), &su2)?;
                    Ok((format!("W_{}", space.dim()), space.clone(), c))
                })
                .collect::<anyhow::Result<_>>()?
        }
        other => {
            return Err(usage(format!(
                "no restraining spaces for {}; use su3 or g2",
                other.as_str()
            )))
        }
    };
    let pass = entries.iter().all(|(_, _, c)| c.pass);
    if as_json {
        let list: Vec<Value> = entries
            .iter()
            .map(|(name, w, c)| json!({ "name": name, "space": w, "check": c }))
            .collect();
        print_json(&json!({ "system": name.as_str(), "spaces": list, "pass": pass }))?;
    } else {
        for (label, w, c) in &entries {
            say!(
                "{label}: dim {} vs h_{} dim {}, meet {}, join {}, conj {:?}, bracket {:?} -> {}",
                w.dim(),
                c.k,
                c.h_dim,
                c.meet_dim,
                c.join_dim,
                c.conj_invariant,
                c.bracket_invariant,
                if c.pass { "pass" } else { "FAIL" }
            );
            for (i, x) in w.matrices()?.iter().enumerate() {
                say!("  basis[{i}]: {}", matrix_rows(x).join(" ; "));
            }
        }
    }
    Ok(pass)
}

fn load_form(spec: &str) -> anyhow::Result<AltForm> {
    let path = Path::new(spec);
    if path.is_file() {
        return read_json(path);
    }
    let key = catalog_key(spec)?;
    catalog::get_form(key)?
        .into_real()
        .map_err(|_| usage(format!("{key} is complex; use its real or imaginary part")))
}

fn comass(spec: &str, p: usize, cfg: ComassConfig, as_json: bool) -> Outcome {
    let form = load_form(spec)?;
    if p != form.degree() {
        return Err(usage(format!(
            "--p {p} does not match the form degree {}",
            form.degree()
        )));
    }
    let r = comass_estimate(&form, p, cfg)?;
    if as_json {
        print_json(&r)?;
    } else {
        say!("comass >= {:.15}", r.estimate);
        say!(
            "restarts {}, iterations {}, seed {}, unconverged {}",
            r.samples,
            r.iterations,
            r.seed,
            r.unconverged_restarts
        );
        for (i, v) in r.argmax_frame.vectors().iter().enumerate() {
            say!("e{} = {:?}", i + 1, v);
        }
    }
    Ok(true)
}

const PLANE_TOL: f64 = 1e-9;

fn plane(check: PlaneCheck, path: &Path) -> Outcome {
    let frame: Frame = read_json(path)?;
    match check {
        PlaneCheck::Sl => {
            if (frame.n(), frame.p()) != (6, 3) {
                return Err(usage("the sl check needs a 3-frame in R^6"));
            }
            let v = sl_predicate(&frame, PLANE_TOL)?;
            print_json(&v)?;
            Ok(v.is_special == Some(true))
        }
        PlaneCheck::Coassoc => {
            if (frame.n(), frame.p()) != (7, 4) {
                return Err(usage("the coassoc check needs a 4-frame in R^7"));
            }
            let phi_residual = restriction_max(&catalog::phi0(), &frame)?;
            let coassociative = phi_residual <= PLANE_TOL;
            let orientation = calibrated_orientation(&catalog::star_phi0(), &frame, PLANE_TOL)?;
            let mut images = Vec::new();
            let mut rank = None;
            if coassociative {
                let normals = normal_complement(&frame);
                for j in 0..normals.ncols() {
                    let v: Vec<f64> = normals.column(j).iter().copied().collect();
                    images.push(
                        json!({ "normal": v, "image": coassoc_normal_iso(&frame, &v, PLANE_TOL)? }),
                    );
                }
                rank = Some(coassoc_family_rank(&frame, PLANE_TOL)?);
            }
            print_json(&json!({
                "coassociative": coassociative,
                "phi_residual": phi_residual,
                "calibrated_orientation": orientation,
                "normal_images": images,
                "family_rank": rank,
            }))?;
            Ok(coassociative && orientation.is_some())
        }
    }
}

fn sdtriple(path: &Path) -> Outcome {
    let t: SDTriple = read_json(path)?;
    let gram = sd_gram(&t)?;
    let c = standardize_sd_triple(&t)?;
    print_json(&json!({
        "gram": gram,
        "volume_factor": t.volume_factor()?,
        "alphas": c.alphas,
        "residuals": c.residuals,
    }))?;
    Ok(c.max_residual() < PLANE_TOL)
}

fn g2build(path: &Path) -> Outcome {
    let t: SDTriple = read_json(path)?;
    let g = build_g2_structure(&t)?;
    print_json(&g)?;
    Ok(g.witness_residual < PLANE_TOL)
}

/// Either exact entries (`"p/q"` strings or integers) or floats.
enum Metric {
    Exact(Mat),
    Float(DMatrix<f64>),
}

fn parse_metric(arg: &str) -> anyhow::Result<Metric> {
    let text = if Path::new(arg).is_file() {
        fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    } else {
        arg.to_string()
    };
    let value: Value = serde_json::from_str(&text).map_err(|e| usage(format!("--g: {e}")))?;
    let rows = match &value {
        Value::Object(map) => map
            .get("entries")
            .cloned()
            .ok_or_else(|| usage("--g: missing \"entries\""))?,
        other => other.clone(),
    };
    let rows: Vec<Vec<Value>> =
        serde_json::from_value(rows).map_err(|e| usage(format!("--g: {e}")))?;
    let exact: Option<Vec<Vec<Scalar>>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| serde_json::from_value(x.clone()).ok())
                .collect()
        })
        .collect();
    if let Some(rows) = exact {
        return Ok(Metric::Exact(Mat::from_rows(rows)?));
    }
    let n = rows.len();
    let mut m = DMatrix::zeros(n, n);
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(usage("--g: matrix is not square"));
        }
        for (j, x) in r.iter().enumerate() {
            m[(i, j)] = x
                .as_f64()
                .ok_or_else(|| anyhow!("--g: entry {x} is not a number"))?;
        }
    }
    Ok(Metric::Float(m))
}

fn torus(arg: &str, m: usize) -> Outcome {
    let metric = parse_metric(arg)?;
    let size = match &metric {
        Metric::Exact(g) => g.rows(),
        Metric::Float(g) => g.nrows(),
    };
    if size != m {
        return Err(usage(format!(
            "--m {m} does not match the {size}x{size} metric"
        )));
    }
    let metric = match metric {
        // without a rational square root of det g only the float variant applies
        Metric::Exact(g) if g.determinant()?.exact_root(2).is_none() => Metric::Float(g.to_f64()),
        other => other,
    };
    match metric {
        Metric::Exact(g) => {
            let r = torus_metric_roundtrip(&g)?;
            print_json(&json!({ "exact": true, "result": r }))?;
            Ok(r.roundtrip_ok)
        }
        Metric::Float(g) => {
            let r = torus_metric_roundtrip_f64(&g)?;
            let rows = |x: &DMatrix<f64>| -> Vec<Vec<f64>> {
                (0..x.nrows())
                    .map(|i| x.row(i).iter().copied().collect())
                    .collect()
            };
            print_json(&json!({
                "exact": false,
                "result": { "m": r.m, "h": rows(&r.h), "g_back": rows(&r.g_back), "roundtrip_ok": r.roundtrip_ok, "divergence_ok": r.divergence_ok },
            }))?;
            Ok(r.roundtrip_ok)
        }
    }
}

fn verify(suite: &str, full: bool, seed: u64, format: OutputFormat, out: Option<&Path>) -> Outcome {
    let suite: Suite = suite.parse().map_err(|e| usage(format!("{e}")))?;
    let report = run_suite(suite, SuiteOptions { full, seed });
    let format = match format {
        OutputFormat::Table => Format::Table,
        OutputFormat::Json => Format::Json,
    };
    let text = emit_report(&report, format);
    match out {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            say!(
                "suite {}: {} ({} checks) -> {}",
                report.suite,
                if report.passed() { "pass" } else { "FAIL" },
                report.checks.len(),
                path.display()
            );
        }
        None => emit(&text)?,
    }
    Ok(report.passed())
}
