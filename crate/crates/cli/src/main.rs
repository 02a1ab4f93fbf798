mod parse;

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kendall::excursions::wiener_hopf_estimate;
use kendall::verify::{run_suite, DEFAULT_SEED};
use kendall::{
    forward, g_of, kernel_cdf_h, simulate_batch, stable_limit_cdf, Alpha64, ConvolutionPowerLaw64,
    ExcursionLaw64, SampledTransform64, StepDistribution64, WalkConfig64, WalkMode,
};

use parse::Grid;

const USAGE: u8 = 2;
const VERIFY_FAILED: u8 = 1;

#[derive(Parser)]
#[command(
    name = "kendall",
    version,
    about = "Kendall convolution algebra and random walks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Kernel,
    Recursion,
}

#[derive(Subcommand)]
enum Command {
    /// Williamson transform ν̂(t) and G(t) = ν̂(1/t) on a grid.
    Transform {
        #[arg(long, value_parser = parse::dist)]
        dist: StepDistribution64,
        #[arg(long, value_parser = parse::alpha)]
        alpha: Alpha64,
        #[arg(long, value_parser = parse::grid, allow_hyphen_values = true)]
        t_grid: Grid,
    },
    /// Recover F from a (t, ν̂, G) table as written by `transform`.
    Invert {
        #[arg(long)]
        transform: PathBuf,
        #[arg(long, value_parser = parse::alpha)]
        alpha: Alpha64,
    },
    /// Kernel mass of (0, t) under δ_x ⋄ δ_y.
    Convolve {
        #[arg(long, value_parser = parse::number, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, value_parser = parse::number, allow_hyphen_values = true)]
        y: f64,
        #[arg(long, value_parser = parse::alpha)]
        alpha: Alpha64,
        #[arg(long, value_parser = parse::grid, allow_hyphen_values = true)]
        t_grid: Grid,
    },
    /// CDF of the n-fold Kendall convolution power.
    PowerCdf {
        #[arg(long, value_parser = parse::dist)]
        dist: StepDistribution64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, value_parser = parse::alpha)]
        alpha: Alpha64,
        #[arg(long, value_parser = parse::grid, allow_hyphen_values = true)]
        t_grid: Grid,
    },
    /// CDF of the stable limit law.
    LimitCdf {
        #[arg(long, value_parser = parse::alpha)]
        alpha: Alpha64,
        #[arg(long, value_parser = parse::grid, allow_hyphen_values = true)]
        t_grid: Grid,
    },
    /// Simulate walk paths; prints first passages above 0.
    Simulate {
        #[arg(long, value_parser = parse::dist)]
        dist: StepDistribution64,
        #[arg(long, value_parser = parse::alpha)]
        alpha: Alpha64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        steps: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        paths: u64,
        #[arg(long, value_enum, default_value = "kernel")]
        mode: Mode,
        /// Use the recursion as literally stated, without reorientation.
        #[arg(long)]
        literal: bool,
        #[arg(long, env = "KENDALL_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Path values as CSV (path_id, step, value).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Restrict `--out` to these steps.
        #[arg(long, requires = "out", value_delimiter = ',', value_parser = clap::value_parser!(u64).range(1..))]
        marginals: Option<Vec<u64>>,
    },
    /// Overshoot CDF of the first ladder epoch and its series.
    Hitting {
        #[arg(long, value_parser = parse::dist)]
        dist: StepDistribution64,
        #[arg(long, value_parser = parse::alpha)]
        alpha: Alpha64,
        #[arg(long, value_parser = parse::grid, allow_hyphen_values = true)]
        t_grid: Grid,
        /// Terms of the series over τ.
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(1..))]
        terms: u32,
    },
    /// Joint transform E s^τ Ψ(u X_τ), closed form against simulation.
    Wienerhopf {
        #[arg(long, value_parser = parse::dist)]
        dist: StepDistribution64,
        #[arg(long, value_parser = parse::alpha)]
        alpha: Alpha64,
        #[arg(long, value_parser = parse::grid, allow_hyphen_values = true)]
        s_grid: Grid,
        #[arg(long, value_parser = parse::grid, allow_hyphen_values = true)]
        u_grid: Grid,
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(2..))]
        paths: u64,
        #[arg(long, default_value_t = 60, value_parser = clap::value_parser!(u64).range(1..))]
        steps: u64,
        #[arg(long, env = "KENDALL_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Run a verification suite and write the reports as JSON.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, env = "KENDALL_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1.0, value_parser = parse::number)]
        scale: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Verification(usize),
}

impl From<kendall::Error> for Failure {
    fn from(e: kendall::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            eprintln!(
                "{}",
                text.lines().next().unwrap_or("error: invalid arguments")
            );
            return ExitCode::from(USAGE);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Verification(n)) => {
            eprintln!("verification failed: {n} check(s)");
            ExitCode::from(VERIFY_FAILED)
        }
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn sink(path: Option<&PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

fn csv_out(
    path: Option<&PathBuf>,
    header: &[&str],
) -> Result<csv::Writer<Box<dyn Write>>, Failure> {
    let mut w = csv::Writer::from_writer(sink(path)?);
    w.write_record(header)?;
    Ok(w)
}

/// Writes `t` and one column per function over the grid.
fn tabulate(
    header: &[&str],
    grid: &Grid,
    row: impl Fn(f64) -> kendall::Result<Vec<f64>>,
) -> Outcome {
    let mut w = csv_out(None, header)?;
    for t in grid.points() {
        let mut rec = vec![fmt(t)];
        rec.extend(row(t)?.into_iter().map(fmt));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Transform {
            dist,
            alpha,
            t_grid,
        } => tabulate(&["t", "nu_hat", "g"], &t_grid, |t| {
            let g = if t == 0.0 {
                dist.magnitude_cdf(0.0)
            } else {
                g_of(&dist, alpha, t.abs())?
            };
            Ok(vec![forward(&dist, alpha, t)?, g])
        }),
        Command::Invert { transform, alpha } => invert(&transform, alpha),
        Command::Convolve {
            x,
            y,
            alpha,
            t_grid,
        } => tabulate(&["t", "kernel_cdf_h"], &t_grid, |t| {
            Ok(vec![kernel_cdf_h(x, y, t, alpha)])
        }),
        Command::PowerCdf {
            dist,
            n,
            alpha,
            t_grid,
        } => {
            let law = ConvolutionPowerLaw64::new(dist, n, alpha)?;
            tabulate(&["t", "cdf"], &t_grid, |t| Ok(vec![law.cdf(t)?]))
        }
        Command::LimitCdf { alpha, t_grid } => tabulate(&["t", "cdf"], &t_grid, |t| {
            Ok(vec![stable_limit_cdf(t, alpha)])
        }),
        Command::Simulate {
            dist,
            alpha,
            steps,
            paths,
            mode,
            literal,
            seed,
            out,
            marginals,
        } => {
            let mode = match (mode, literal) {
                (Mode::Kernel, false) => WalkMode::Kernel,
                (Mode::Kernel, true) => {
                    return Err(Failure::Usage(
                        "--literal applies to --mode recursion only".into(),
                    ))
                }
                (Mode::Recursion, false) => WalkMode::Recursion,
                (Mode::Recursion, true) => WalkMode::RecursionLiteral,
            };
            let marginals = marginals.map(|m| m.into_iter().map(|k| k as usize).collect());
            simulate(WalkRequest {
                dist,
                alpha,
                steps,
                paths,
                mode,
                seed,
                out,
                marginals,
            })
        }
        Command::Hitting {
            dist,
            alpha,
            t_grid,
            terms,
        } => {
            let law = ExcursionLaw64::new(dist, alpha)?;
            tabulate(&["t", "overshoot_cdf", "phi_partial"], &t_grid, |t| {
                Ok(vec![law.overshoot_cdf(t)?, law.phi_partial_sum(terms, t)?])
            })
        }
        Command::Wienerhopf {
            dist,
            alpha,
            s_grid,
            u_grid,
            paths,
            steps,
            seed,
        } => wiener_hopf(
            dist,
            alpha,
            &s_grid,
            &u_grid,
            paths as usize,
            steps as usize,
            seed,
        ),
        Command::Verify {
            suite,
            seed,
            scale,
            out,
        } => verify(&suite, seed, scale, out.as_ref()),
    }
}

fn invert(path: &Path, alpha: Alpha64) -> Outcome {
    let (t, g) = parse::read_columns(path, 0, 2).map_err(Failure::Usage)?;
    let (t, g): (Vec<f64>, Vec<f64>) = t.into_iter().zip(g).filter(|(t, _)| *t > 0.0).unzip();
    let sampled = SampledTransform64::new(alpha, t, g)?;
    let mut w = csv_out(None, &["t", "cdf"])?;
    for (t, f) in sampled.invert_nodes() {
        match f {
            Ok(f) => w.write_record([fmt(t), fmt(f)])?,
            Err(e) => eprintln!("note: skipping t = {t}: {e}"),
        }
    }
    w.flush()?;
    Ok(())
}

struct WalkRequest {
    dist: StepDistribution64,
    alpha: Alpha64,
    steps: u64,
    paths: u64,
    mode: WalkMode,
    seed: u64,
    out: Option<PathBuf>,
    marginals: Option<Vec<usize>>,
}

fn simulate(req: WalkRequest) -> Outcome {
    let (steps, paths) = (req.steps as usize, req.paths as usize);
    let mut config = WalkConfig64::new(req.dist, req.alpha, steps, paths)
        .with_mode(req.mode)
        .with_seed(req.seed);
    if let Some(m) = &req.marginals {
        if let Some(&bad) = m.iter().find(|&&k| k > steps) {
            return Err(Failure::Usage(format!(
                "marginal step {bad} exceeds --steps {steps}"
            )));
        }
        config = config.with_checkpoints(m.iter().copied());
    }
    if req.out.is_none() || req.marginals.is_some() {
        config = config.with_storage_limit(0);
    }
    let batch = simulate_batch(&config)?;

    let mut w = csv_out(None, &["path_id", "tau", "overshoot"])?;
    for p in batch.passages() {
        let tau = p.tau.map(|k| k.to_string()).unwrap_or_default();
        let over = p.overshoot.map(fmt).unwrap_or_default();
        w.write_record([p.path_id.to_string(), tau, over])?;
    }
    w.flush()?;

    let Some(out) = req.out.as_ref() else {
        return Ok(());
    };
    let mut w = csv_out(Some(out), &["path_id", "step", "value"])?;
    if req.marginals.is_some() {
        for (step, values) in batch.checkpoints() {
            for (i, v) in values.iter().enumerate() {
                w.write_record([i.to_string(), step.to_string(), fmt(*v)])?;
            }
        }
    } else {
        if !batch.has_trajectories() {
            return Err(Failure::Usage(format!(
                "{paths} paths of {steps} steps exceed the trajectory storage limit; use --marginals"
            )));
        }
        for i in 0..paths {
            for (k, v) in batch.trajectory(i).unwrap_or_default().iter().enumerate() {
                w.write_record([i.to_string(), (k + 1).to_string(), fmt(*v)])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn wiener_hopf(
    dist: StepDistribution64,
    alpha: Alpha64,
    s_grid: &Grid,
    u_grid: &Grid,
    paths: usize,
    steps: usize,
    seed: u64,
) -> Outcome {
    let law = ExcursionLaw64::new(dist.clone(), alpha)?;
    let config = WalkConfig64::new(dist, alpha, steps, paths)
        .with_seed(seed)
        .with_storage_limit(0);
    let batch = simulate_batch(&config)?;
    let crossed: Vec<(usize, f64)> = batch.attained_passages().collect();
    let mut w = csv_out(None, &["s", "u", "H_closed", "H_mc", "stderr"])?;
    for s in s_grid.points() {
        for u in u_grid.points() {
            let closed = law.wiener_hopf_h(s, u)?;
            let (mean, se) = wiener_hopf_estimate(crossed.iter().copied(), paths, alpha, s, u);
            w.write_record([fmt(s), fmt(u), fmt(closed), fmt(mean), fmt(se)])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn verify(suite: &str, seed: u64, scale: f64, out: Option<&PathBuf>) -> Outcome {
    let reports = run_suite(suite, seed, scale)?;
    let mut sink = sink(out)?;
    serde_json::to_writer_pretty(&mut sink, &reports).map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(sink)?;
    sink.flush()?;
    let failed = reports.iter().filter(|r| !r.passed()).count();
    eprintln!(
        "{} of {} reports passed",
        reports.len() - failed,
        reports.len()
    );
    for r in reports.iter().filter(|r| !r.passed()) {
        eprintln!(
            "FAIL {}: error {:e} > tolerance {:e}",
            r.check_id, r.error, r.tolerance
        );
    }
    if failed > 0 {
        return Err(Failure::Verification(failed));
    }
    Ok(())
}
