//! Command-line front end: witness generation, solving and verification,
//! each run recorded in a replayable manifest.
//!
//! Exit codes: 0 pass, 1 a verifier failed, 2 malformed input or a cap
//! refused the run, 3 a witness level could not be built.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::ell1::{build_l1_space, disjoint_split_check, IntervalVector, SplitOptions};
use crate::ell2::embeds_isometrically_l2;
use crate::error::Error;
use crate::metric::{ball_count, validate_space, FiniteMetricSpace};
use crate::net::NetSchedule;
use crate::solver::{embed_min_distortion, SolveConfig};
use crate::strict_convex::{
    build_space, certify_level, random_orthogonal, verify_embedding_rigidity, LevelImage,
    WitnessSpace,
};
use crate::{limits, seed};

/// Orthogonal images checked per level by `gen-sc` and `verify --rigidity`.
const ROTATED_IMAGES: usize = 5;
const RIGIDITY_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "lp-embed", version, about = "Finite metric witnesses and low-distortion embeddings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact rational L1 witness up to a string length.
    GenL1(GenL1Args),
    /// Strictly convex witness up to a level, with certificates.
    GenSc(GenScArgs),
    /// Minimize distortion into l_p^d.
    Solve(SolveArgs),
    /// Run verifiers on a space and optional certificates.
    Verify(VerifyArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct GenL1Args {
    #[arg(long)]
    pub max_len: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenScArgs {
    #[arg(long)]
    pub levels: usize,
    /// `a/(bn+c)`, `a/n`, or a comma list of per-level values.
    #[arg(long, default_value_t = NetSchedule::default().to_string())]
    pub delta_schedule: String,
    /// Master seed for the orthogonal images in the rigidity certificates.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub space: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
    /// Fill the CSV `seconds` column (makes the CSV run-dependent).
    #[arg(long)]
    pub record_time: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub space: PathBuf,
    /// Scaffold sidecar from `gen-sc`.
    #[arg(long)]
    pub rigidity: Option<PathBuf>,
    /// Interval vector JSON to test for a disjoint split.
    #[arg(long, requires = "n")]
    pub split: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub schoenberg: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for `verdict.json`; stdout only when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Output directory; defaults to the recorded one.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Record of one run. Everything but `wall_time` is a function of the
/// arguments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Full argument list after the program name.
    pub argv: Vec<String>,
    pub parameters: Value,
    pub seed: Option<u64>,
    pub version: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub wall_time: f64,
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Construction { .. } | Error::PartialBuild { .. } => 3,
            _ => 2,
        };
        Self::new(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::new(2, e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn pretty(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn write_file(dir: &Path, name: &str, contents: &str) -> CliResult<String> {
    fs::write(dir.join(name), contents)?;
    Ok(name.to_string())
}

fn read_space(path: &Path) -> CliResult<FiniteMetricSpace> {
    let text = fs::read_to_string(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    let space = FiniteMetricSpace::from_json_str(&text).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    let violations = validate_space(&space);
    if let Some(v) = violations.first() {
        return Err(Failure::new(2, format!("{}: not a metric ({v:?})", path.display())));
    }
    Ok(space)
}

struct Run<'a> {
    command: &'static str,
    argv: &'a [String],
    parameters: Value,
    seed: Option<u64>,
    inputs: Vec<String>,
    outputs: Vec<String>,
}

impl Run<'_> {
    fn finish(self, dir: &Path, start: Instant) -> CliResult<()> {
        let manifest = RunManifest {
            command: self.command.to_string(),
            argv: self.argv.to_vec(),
            parameters: self.parameters,
            seed: self.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: self.inputs,
            outputs: self.outputs,
            wall_time: start.elapsed().as_secs_f64(),
        };
        write_file(dir, "manifest.json", &pretty(&manifest))?;
        Ok(())
    }
}

fn gen_l1(args: &GenL1Args, argv: &[String]) -> CliResult<u8> {
    let start = Instant::now();
    let l1 = build_l1_space(args.max_len)?;
    fs::create_dir_all(&args.out)?;
    let mut run = Run {
        command: "gen-l1",
        argv,
        parameters: json!({ "max_len": args.max_len }),
        seed: None,
        inputs: vec![],
        outputs: vec![],
    };
    run.outputs.push(write_file(&args.out, "space.json", &l1.space.to_json_string())?);
    run.finish(&args.out, start)?;
    println!("gen-l1: {} members written to {}", l1.space.len(), args.out.display());
    Ok(0)
}

/// Level certificates plus rigidity of the identity and seeded rotations.
fn certify_witness(space: &WitnessSpace, master: u64) -> crate::Result<(Value, bool)> {
    let mut levels = Vec::new();
    let mut all_pass = true;
    for level in &space.levels {
        let n = level.n;
        let cert = certify_level(level)?;
        let mut pass = cert.ball_contained && (n == 1 || cert.origin_distance_bound >= n as f64);
        let prior = space.prior_axis_points(n);
        let identity = LevelImage::identity(level, &prior);
        let mut images = vec![verify_embedding_rigidity(level, &prior, &identity, RIGIDITY_TOL)?];
        let mut rng = seed::rng(master, &format!("rigidity/level{n}"));
        for _ in 0..ROTATED_IMAGES {
            let q = random_orthogonal(n + 1, &mut rng);
            images.push(verify_embedding_rigidity(level, &prior, &identity.mapped(&q), RIGIDITY_TOL)?);
        }
        pass &= images.iter().all(|o| o.passed);
        all_pass &= pass;
        levels.push(json!({
            "n": n,
            "passed": pass,
            "certificate": cert,
            "rigidity": images,
        }));
    }
    let mut balls = Vec::new();
    for r in 1..=space.max_level() {
        let radius = r as f64 + 0.5;
        let ball = ball_count(space, &radius)?;
        let beyond = ball.members.iter().filter(|(l, _)| *l > r).count();
        all_pass &= beyond == 0;
        balls.push(json!({ "radius": radius, "count": ball.count(), "cutoff_level": ball.cutoff_level, "members_beyond_radius_level": beyond }));
    }
    Ok((json!({ "passed": all_pass, "levels": levels, "balls": balls }), all_pass))
}

fn gen_sc(args: &GenScArgs, argv: &[String]) -> CliResult<u8> {
    let start = Instant::now();
    let schedule: NetSchedule = args.delta_schedule.parse()?;
    let witness = build_space(args.levels, &schedule)?;
    let cap = limits::cap(limits::EXPORT_CAP);
    if witness.len() > cap {
        return Err(Failure::new(
            2,
            format!(
                "witness has {} points, export cap is {cap} (set {} to raise it)",
                witness.len(),
                limits::CAP_ENV
            ),
        ));
    }
    let metric = witness.to_metric_space()?;
    let (certs, passed) = certify_witness(&witness, args.seed)?;
    fs::create_dir_all(&args.out)?;
    let mut run = Run {
        command: "gen-sc",
        argv,
        parameters: json!({ "levels": args.levels, "delta_schedule": schedule.to_string() }),
        seed: Some(args.seed),
        inputs: vec![],
        outputs: vec![],
    };
    run.outputs.push(write_file(&args.out, "space.json", &metric.to_json_string())?);
    run.outputs.push(write_file(&args.out, "scaffold.json", &pretty(&witness.scaffold_json()))?);
    run.outputs.push(write_file(&args.out, "certificates.json", &pretty(&certs))?);
    run.finish(&args.out, start)?;
    println!(
        "gen-sc: {} levels, {} points, certificates {}",
        args.levels,
        witness.len(),
        if passed { "pass" } else { "FAIL" }
    );
    Ok(if passed { 0 } else { 1 })
}

fn space_id(path: &Path) -> String {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    match path.parent().and_then(|p| p.file_name()) {
        Some(parent) if stem == "space" => parent.to_string_lossy().into_owned(),
        _ => stem,
    }
}

fn solve(args: &SolveArgs, argv: &[String]) -> CliResult<u8> {
    let start = Instant::now();
    let space = read_space(&args.space)?;
    let mut cfg = SolveConfig {
        p: args.p,
        dim: args.dim,
        restarts: args.restarts,
        seed: args.seed,
        ..SolveConfig::default()
    };
    if let Some(it) = args.iterations {
        cfg.iterations = it;
    }
    let res = embed_min_distortion(&space, &cfg)?;
    fs::create_dir_all(&args.out)?;
    let result = json!({
        "coords": res.coords,
        "distortion": res.report.distortion,
        "r": res.report.r,
        "converged": res.converged,
    });
    let seconds = if args.record_time {
        format!("{:.3}", start.elapsed().as_secs_f64())
    } else {
        String::new()
    };
    let csv = format!(
        "space_id,n,p,d,restarts,distortion,r,converged,seconds\n{},{},{},{},{},{},{},{},{}\n",
        space_id(&args.space),
        space.len(),
        cfg.p,
        cfg.dim,
        cfg.restarts,
        res.report.distortion,
        res.report.r,
        res.converged,
        seconds
    );
    let mut run = Run {
        command: "solve",
        argv,
        parameters: serde_json::to_value(&cfg).expect("serializable"),
        seed: Some(args.seed),
        inputs: vec![args.space.display().to_string()],
        outputs: vec![],
    };
    run.outputs.push(write_file(&args.out, "result.json", &pretty(&result))?);
    run.outputs.push(write_file(&args.out, "result.csv", &csv)?);
    run.finish(&args.out, start)?;
    println!("solve: distortion {} (upper bound), converged {}", res.report.distortion, res.converged);
    Ok(0)
}

fn verify(args: &VerifyArgs) -> CliResult<u8> {
    let space = read_space(&args.space)?;
    let mut checks = serde_json::Map::new();
    let mut passed = true;
    checks.insert("metric".into(), json!({ "passed": true, "points": space.len() }));

    if args.schoenberg {
        let verdict = embeds_isometrically_l2(&space)?;
        passed &= verdict.is_embeddable();
        checks.insert("schoenberg".into(), json!({ "passed": verdict.is_embeddable(), "verdict": verdict }));
    }

    if let Some(path) = &args.split {
        let n = args.n.expect("clap requires --n with --split");
        let text = fs::read_to_string(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
        let x: IntervalVector = serde_json::from_str(&text).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
        let verdict = disjoint_split_check(&x, n, SplitOptions::default())?;
        passed &= verdict.is_feasible();
        checks.insert("split".into(), json!({ "passed": verdict.is_feasible(), "n": n, "verdict": verdict }));
    }

    if let Some(path) = &args.rigidity {
        let text = fs::read_to_string(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
        let value: Value = serde_json::from_str(&text).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
        let witness = WitnessSpace::from_scaffold_json(value).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
        let (certs, ok) = certify_witness(&witness, args.seed)?;
        let matches = witness_matches_space(&witness, &space);
        passed &= ok && matches;
        checks.insert("rigidity".into(), json!({ "passed": ok && matches, "space_matches_scaffold": matches, "certificates": certs }));
    }

    let verdict = json!({ "passed": passed, "checks": checks });
    let text = pretty(&verdict);
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
        write_file(dir, "verdict.json", &text)?;
    }
    print!("{text}");
    Ok(if passed { 0 } else { 1 })
}

fn witness_matches_space(witness: &WitnessSpace, space: &FiniteMetricSpace) -> bool {
    if witness.len() != space.len() {
        return false;
    }
    let pts = witness.points();
    let tol = 1e-9 * space.diameter().max(1.0);
    (0..pts.len()).all(|i| {
        (i + 1..pts.len()).all(|j| (crate::vecops::dist2(&pts[i].coords, &pts[j].coords) - space.d(i, j)).abs() <= tol)
    })
}

fn replay(args: &ReplayArgs) -> CliResult<u8> {
    let text = fs::read_to_string(&args.manifest).map_err(|e| Failure::new(2, format!("{}: {e}", args.manifest.display())))?;
    let manifest: RunManifest = serde_json::from_str(&text).map_err(|e| Failure::new(2, format!("{}: {e}", args.manifest.display())))?;
    let mut argv = manifest.argv.clone();
    if let Some(out) = &args.out {
        match argv.iter().position(|a| a == "--out") {
            Some(k) if k + 1 < argv.len() => argv[k + 1] = out.display().to_string(),
            _ => {
                argv.push("--out".into());
                argv.push(out.display().to_string());
            }
        }
    }
    if argv.first().map(String::as_str) == Some("replay") {
        return Err(Failure::new(2, "a manifest cannot replay another replay"));
    }
    run_args(argv)
}

fn dispatch(cli: &Cli, argv: &[String]) -> CliResult<u8> {
    match &cli.command {
        Command::GenL1(a) => gen_l1(a, argv),
        Command::GenSc(a) => gen_sc(a, argv),
        Command::Solve(a) => solve(a, argv),
        Command::Verify(a) => verify(a),
        Command::Replay(a) => replay(a),
    }
}

/// Parses `argv` (without the program name) and runs it, returning the
/// process exit code.
pub fn run_args(argv: Vec<String>) -> CliResult<u8> {
    let cli = Cli::try_parse_from(std::iter::once("lp-embed".to_string()).chain(argv.iter().cloned()))
        .map_err(|e| Failure::new(2, e.to_string()))?;
    dispatch(&cli, &argv)
}

pub fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    if let Err(e) = Cli::try_parse_from(std::iter::once("lp-embed".to_string()).chain(argv.iter().cloned())) {
        // help and version go to stdout with exit 0
        let _ = e.print();
        return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
    }
    match run_args(argv) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("lp-embed: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn space_ids() {
        assert_eq!(space_id(Path::new("runs/cycle/space.json")), "cycle");
        assert_eq!(space_id(Path::new("cycle4.json")), "cycle4");
    }
}
