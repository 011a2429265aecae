//! The `rotkit` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::actions::{
    classify_theorem1, distance_from_identity, fuchsian_o23, fuchsian_o23_pl, hat_phi, k_fold_lift, random_action,
    rotation_triple, triangle_action, Backend, CircleAction, RandomParams, RotationTriple,
};
use crate::circle::{translation_number, TranslationNumber, DEFAULT_THRESHOLD};
use crate::error::{Error, Result};
use crate::io::{read_action, write_action, ActionFile, Report};
use crate::rational::{fmt_q, Rational1};
use crate::semiconj::{build_markov, build_theta, certify_case1, path_witness, Case1Options, ThetaOptions};
use crate::words::{classify_conjugacy, Syllable, Word};

/// Default tolerance for θ residuals.
pub const THETA_THRESHOLD: f64 = 1e-6;
/// Distance from the identity that counts as a separating witness.
pub const SEPARATION_MARGIN: f64 = 0.01;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "rotkit",
    version,
    about = "Rotation numbers and semi-conjugacy certificates for Z/2 * Z/3 actions on the circle"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Comparison tolerance for floating-point data [default: 1e-9, or 1e-6 for theta residuals].
    #[arg(long, global = true)]
    pub threshold: Option<f64>,
    /// Leave wall-clock time out of the report.
    #[arg(long, global = true)]
    pub deterministic: bool,
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("source").required(true).args(["action", "fuchsian", "triangle"])))]
pub struct Source {
    /// Read the action from a JSON file.
    #[arg(long)]
    pub action: Option<PathBuf>,
    /// The Fuchsian action of the modular group.
    #[arg(long)]
    pub fuchsian: bool,
    /// The (2,3,k) triangle group action.
    #[arg(long, value_name = "K")]
    pub triangle: Option<i64>,
    /// Replace the action by its k-fold lift.
    #[arg(long, value_name = "K")]
    pub lift: Option<i64>,
    /// Representation for built-in actions: pl or mobius.
    #[arg(long, default_value = "mobius", value_parser = parse_backend)]
    pub backend: Backend,
}

fn parse_backend(s: &str) -> std::result::Result<Backend, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Source {
    fn build(&self) -> Result<CircleAction> {
        let base = if let Some(path) = &self.action {
            read_action(path)?
        } else if let Some(k) = self.triangle {
            if self.backend == Backend::Pl {
                return Err(Error::Precondition("triangle actions exist only on the mobius backend".into()));
            }
            triangle_action(k)?
        } else if self.backend == Backend::Pl {
            fuchsian_o23_pl()
        } else {
            fuchsian_o23()
        };
        match self.lift {
            Some(k) => k_fold_lift(&base, k),
            None => Ok(base),
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct RotBounds {
    /// Largest period searched for periodic points.
    #[arg(long, default_value_t = 30)]
    pub q_max: i64,
    /// Iterations for translation-number enclosures.
    #[arg(long, default_value_t = 10_000)]
    pub iters: u64,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Command {
    /// Rotation triple and classification.
    Triple {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        bounds: RotBounds,
    },
    /// Semi-conjugacy certificate for case 1 (1/2, 1/3, 0) or case 2 (1/2, 2/3, 1/5).
    Certify {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        case: u8,
        #[arg(long, default_value_t = 8)]
        max_syllables: usize,
        /// Markov window L.
        #[arg(long, default_value_t = 10)]
        window: i64,
        /// Largest gap between orbit points accepted by the theta builder.
        #[arg(long, default_value_t = 0.1)]
        max_gap: f64,
    },
    /// Compare the triangle action with the k-fold lift of the Fuchsian action.
    Counterexample {
        #[arg(long)]
        k: i64,
    },
    /// Random PL action with a prescribed rotation triple.
    Random {
        /// Target triple, e.g. "1/2,1/3,0" or "1/2,2/3,1/5".
        #[arg(long)]
        triple: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        breakpoints: usize,
        #[arg(long, default_value_t = 16)]
        denominator: i64,
        /// Also write the action file here.
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Discretized path between two case-1 actions.
    Path {
        /// Action file, "fuchsian", or "seed:N" for a random case-1 action.
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 16)]
        steps: usize,
    },
    /// Rotation number of the image of one word.
    Rot {
        #[command(flatten)]
        source: Source,
        /// Word over a, b, B (B = b^2).
        word: String,
        #[command(flatten)]
        bounds: RotBounds,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Triple { .. } => "triple",
            Command::Certify { .. } => "certify",
            Command::Counterexample { .. } => "counterexample",
            Command::Random { .. } => "random",
            Command::Path { .. } => "path",
            Command::Rot { .. } => "rot",
        }
    }
}

/// Outcome of one subcommand before it is wrapped in a report.
struct Outcome {
    passed: bool,
    result: Value,
    summary: Vec<String>,
}

/// Exit code for an error: 2 for bad input, 1 for failed checks.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::Io(_)
        | Error::InvalidLift(_)
        | Error::InvalidAction(_)
        | Error::InvalidK { .. }
        | Error::NoLiftExists { .. }
        | Error::UnsupportedTriple(_) => 2,
        _ => 1,
    }
}

/// Parses `args`, runs the command and writes the summary to `out`; returns
/// the exit code.
pub fn run(
    args: impl IntoIterator<Item = impl Into<OsString> + Clone>,
    out: &mut impl Write,
    err: &mut impl Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    if let Some(t) = cli.threshold {
        if !(t > 0.0 && t.is_finite()) {
            let _ = writeln!(err, "error: --threshold must be positive, got {t}");
            return 2;
        }
    }
    let start = Instant::now();
    let outcome = dispatch(&cli);
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let mut report = Report::new(cli.command.name(), &cli);
    report.wall_time_ms = (!cli.deterministic).then_some(elapsed);
    let code = match outcome {
        Ok(o) => {
            for line in &o.summary {
                let _ = writeln!(out, "{line}");
            }
            report.passed = o.passed;
            report.result = Some(o.result);
            if o.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            report.error = Some(e.to_string());
            exit_code(&e)
        }
    };
    let _ = writeln!(out, "{}", if code == 0 { "PASS" } else { "FAIL" });
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, report.to_json() + "\n") {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            return 2;
        }
    }
    code
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let thr = cli.threshold.unwrap_or(DEFAULT_THRESHOLD);
    let theta_thr = cli.threshold.unwrap_or(THETA_THRESHOLD);
    match &cli.command {
        Command::Triple { source, bounds } => cmd_triple(&source.build()?, bounds),
        Command::Certify { source, case, max_syllables, window, max_gap } => {
            let phi = source.build()?;
            if *case == 1 {
                cmd_certify_case1(&phi, *max_syllables, thr)
            } else {
                let opts = ThetaOptions { max_syllables: *max_syllables, threshold: theta_thr, max_gap: *max_gap };
                cmd_certify_case2(&phi, *window, thr, &opts)
            }
        }
        Command::Counterexample { k } => cmd_counterexample(*k, thr),
        Command::Random { triple, seed, breakpoints, denominator, save } => {
            let params =
                RandomParams { breakpoints: *breakpoints, denominator: *denominator, ..RandomParams::default() };
            cmd_random(&triple.parse()?, *seed, &params, save.as_deref())
        }
        Command::Path { from, to, steps } => cmd_path(&path_endpoint(from)?, &path_endpoint(to)?, *steps),
        Command::Rot { source, word, bounds } => cmd_rot(&source.build()?, &word.parse()?, bounds),
    }
}

fn case1_triple() -> RotationTriple {
    RotationTriple::of((1, 2), (1, 3), (0, 1))
}

fn path_endpoint(spec: &str) -> Result<CircleAction> {
    if spec == "fuchsian" {
        return Ok(fuchsian_o23_pl());
    }
    if let Some(seed) = spec.strip_prefix("seed:") {
        let seed = seed.parse().map_err(|_| Error::Parse(format!("bad seed in {spec:?}")))?;
        return random_action(&case1_triple(), seed, &RandomParams::default());
    }
    read_action(std::path::Path::new(spec))
}

fn cmd_triple(phi: &CircleAction, b: &RotBounds) -> Result<Outcome> {
    let t = rotation_triple(phi, b.q_max, b.iters)?;
    let class = classify_theorem1(&t)?;
    Ok(Outcome {
        passed: true,
        summary: vec![format!("triple {t}"), format!("class {class}")],
        result: json!({ "triple": t, "exact": t.is_exact(), "class": class, "backend": phi.backend() }),
    })
}

fn cmd_certify_case1(phi: &CircleAction, max_syllables: usize, thr: f64) -> Result<Outcome> {
    let cert = certify_case1(phi, max_syllables, &Case1Options { threshold: thr, ..Case1Options::default() })?;
    let mut summary =
        vec![format!("x0 = {}", cert.x0.render()), format!("I = {}, J = {}", cert.interval_i, cert.interval_j)];
    summary.extend(cert.clauses.iter().map(|c| format!("{} {}", verdict(c.pass), c.name)));
    summary.push(format!(
        "{} words up to {} syllables, {} hyperbolic classes trapped, {} words cross-checked",
        cert.words.len(),
        max_syllables,
        cert.hyperbolic_classes,
        cert.cross_checked
    ));
    Ok(Outcome { passed: cert.passed(), result: serde_json::to_value(&cert)?, summary })
}

fn cmd_certify_case2(phi: &CircleAction, window: i64, thr: f64, opts: &ThetaOptions) -> Result<Outcome> {
    let markov = build_markov(phi, window, thr)?;
    let theta = build_theta(phi, &markov, opts)?;
    let mut summary = vec![format!("x0 = {}", markov.x0.render())];
    summary
        .extend(markov.ineq.clauses.iter().chain(&markov.clauses).map(|c| format!("{} {}", verdict(c.pass), c.name)));
    summary.push(format!(
        "theta: {} orbit points, largest gap {:.4}, equivariance residual {:.3e}, period-5 residual {:.3e}",
        theta.table.len(),
        theta.largest_gap,
        theta.equivariance_residual,
        theta.period_residual
    ));
    if let Some(s) = &theta.deck_shift {
        summary.push(format!("theta is the translation by {}", s.render()));
    }
    Ok(Outcome {
        passed: markov.passed() && theta.passed(),
        result: json!({ "markov": markov, "theta": theta }),
        summary,
    })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "ok  "
    } else {
        "FAIL"
    }
}

/// `(αβ)^k`.
pub fn ab_power(k: usize) -> Word {
    Word::from_syllables(std::iter::repeat_n([Syllable::A, Syllable::B], k).flatten())
}

fn cmd_counterexample(k: i64, thr: f64) -> Result<Outcome> {
    let hat = hat_phi(k)?;
    let lift = k_fold_lift(&fuchsian_o23(), k)?;
    let (th, tl) = (rotation_triple(&hat, 30, 10_000)?, rotation_triple(&lift, 30, 10_000)?);
    let w = ab_power(k as usize);
    let hat_residual = distance_from_identity(&hat.apply(&w), 1000);
    let lift_distance = distance_from_identity(&lift.apply(&w), 1000);
    let equal = th == tl;
    let separated = hat_residual <= thr && lift_distance >= SEPARATION_MARGIN;
    Ok(Outcome {
        passed: equal && separated,
        summary: vec![
            format!("hat phi triple      {th}"),
            format!("{k}-fold lift triple {tl}"),
            format!("{} triples equal", verdict(equal)),
            format!("{} hat phi((ab)^{k}) is the identity: distance {hat_residual:.3e}", verdict(hat_residual <= thr)),
            format!(
                "{} lift((ab)^{k}) is not the identity: distance {lift_distance:.4}",
                verdict(lift_distance >= SEPARATION_MARGIN)
            ),
        ],
        result: json!({
            "k": k,
            "hat_triple": th,
            "lift_triple": tl,
            "triples_equal": equal,
            "hat_residual": hat_residual,
            "lift_distance": lift_distance,
            "margin": SEPARATION_MARGIN,
        }),
    })
}

fn cmd_random(
    target: &RotationTriple,
    seed: u64,
    params: &RandomParams,
    save: Option<&std::path::Path>,
) -> Result<Outcome> {
    let phi = random_action(target, seed, params)?;
    if let Some(path) = save {
        write_action(&phi, path)?;
    }
    let t = rotation_triple(&phi, 30, 10_000)?;
    Ok(Outcome {
        passed: true,
        summary: vec![format!("seed {seed}: triple {t}")],
        result: json!({ "seed": seed, "params": params, "triple": t, "action": ActionFile::from(&phi) }),
    })
}

fn cmd_path(phi0: &CircleAction, phi1: &CircleAction, steps: usize) -> Result<Outcome> {
    let path = path_witness(phi0, phi1, steps)?;
    let actions: Vec<ActionFile> = path.iter().map(ActionFile::from).collect();
    Ok(Outcome {
        passed: true,
        summary: vec![format!("{} actions, every triple {}", path.len(), case1_triple())],
        result: json!({ "steps": steps, "triple": case1_triple(), "actions": actions }),
    })
}

fn cmd_rot(phi: &CircleAction, w: &Word, b: &RotBounds) -> Result<Outcome> {
    let tn = translation_number(&phi.apply(w), b.q_max, b.iters);
    let rot = match &tn {
        TranslationNumber::Exact(t) => Rational1::from_q(t).to_string(),
        TranslationNumber::Enclosed(e) => format!("in [{}, {}] mod 1", fmt_q(&e.lo), fmt_q(&e.hi)),
    };
    let class = classify_conjugacy(w);
    Ok(Outcome {
        passed: true,
        summary: vec![format!("rot phi({w}) = {rot}")],
        result: json!({
            "word": w,
            "class": class,
            "translation_number": tn.render(),
            "exact": matches!(tn, TranslationNumber::Exact(_)),
            "rot": rot,
        }),
    })
}
