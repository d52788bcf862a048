use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use layered_ascent_cli::manifest::{
    IndicatorName, InitName, OutputFormat, ProblemName, RunManifest,
};
use layered_ascent_cli::{compare_to_table, presets, run_to_files, CliError};

#[derive(Parser)]
#[command(
    name = "layered-ascent",
    about = "Layered set-indicator ascent for Pareto-front approximation",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one run and export trace, final set, and summary.
    Run(Box<RunArgs>),
    /// Execute two runs sharing a problem and seed; print a comparison.
    Compare(Box<CompareArgs>),
    /// List the built-in presets.
    Presets,
}

#[derive(Args, Clone, Default)]
struct Overrides {
    /// Problem name: triangle | quadratic | supersphere | supersphere-box | layered-box | fig1.
    #[arg(long)]
    problem: Option<String>,
    /// Base indicator: mag | hv.
    #[arg(long)]
    indicator: Option<String>,
    /// Optimizer: gradient | hillclimb.
    #[arg(long)]
    optimizer: Option<String>,
    /// Initializer override (triangle-line, triangle-nested, quadratic-perturbed, das-dennis, layered-box, fig1).
    #[arg(long)]
    init: Option<String>,
    /// Supersphere bulge parameter.
    #[arg(long)]
    gamma: Option<f64>,
    /// Simplex-lattice resolution; fixes mu = (H+1)(H+2)/2 for lattice starts.
    #[arg(long = "H")]
    lattice_h: Option<usize>,
    /// Number of labelled points.
    #[arg(long)]
    mu: Option<usize>,
    /// Random seed (falls back to LAYERED_ASCENT_SEED, then 8).
    #[arg(long)]
    seed: Option<u64>,
    /// Iteration budget for plain runs.
    #[arg(long)]
    iters: Option<usize>,
    /// Episode budget for recovery runs.
    #[arg(long)]
    episodes: Option<usize>,
    /// Ascent step size.
    #[arg(long)]
    alpha: Option<f64>,
    /// Central finite-difference radius.
    #[arg(long = "fd-radius")]
    fd_radius: Option<f64>,
    /// Layer weight.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Repulsion weight.
    #[arg(long)]
    tau: Option<f64>,
    /// Repulsion length scale.
    #[arg(long)]
    sigma: Option<f64>,
    /// Pointwise direction normalization: on | off.
    #[arg(long)]
    normalize: Option<String>,
    /// Front size up to which the 3-D hypervolume is exact.
    #[arg(long = "exact-front-threshold")]
    exact_front_threshold: Option<usize>,
    /// Enable stagnation recovery (episode mode).
    #[arg(long)]
    recovery: bool,
    /// Stagnation window in episodes.
    #[arg(long = "recovery-window")]
    recovery_window: Option<usize>,
    /// Growth threshold that triggers a perturbation.
    #[arg(long = "recovery-min-growth")]
    recovery_min_growth: Option<f64>,
    /// Perturbation step length.
    #[arg(long = "recovery-step")]
    recovery_step: Option<f64>,
    /// Final episodes with recovery disabled.
    #[arg(long = "freeze-tail")]
    freeze_tail: Option<usize>,
    /// Trace sampling stride.
    #[arg(long = "sample-stride")]
    sample_stride: Option<usize>,
    /// Output format: csv | json.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    /// Built-in preset name.
    #[arg(long)]
    preset: Option<String>,
    /// Manifest file to load instead of a preset.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
    /// Output directory for trace, final set, and summary files.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Preset of the first run.
    #[arg(long)]
    a: String,
    /// Preset of the second run.
    #[arg(long)]
    b: String,
    /// Indicator override for the first run.
    #[arg(long = "indicator-a")]
    indicator_a: Option<String>,
    /// Indicator override for the second run.
    #[arg(long = "indicator-b")]
    indicator_b: Option<String>,
    /// Shared overrides applied to both runs.
    #[command(flatten)]
    overrides: Overrides,
    /// Output directory for the comparison table.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn apply_overrides(manifest: &mut RunManifest, o: &Overrides) -> Result<(), CliError> {
    if let Some(problem) = &o.problem {
        manifest.problem = problem.parse()?;
        manifest.init = manifest.init.take();
    }
    if let Some(indicator) = &o.indicator {
        manifest.indicator = indicator.parse()?;
    }
    if let Some(optimizer) = &o.optimizer {
        manifest.optimizer = optimizer.parse()?;
    }
    if let Some(init) = &o.init {
        manifest.init = Some(init.parse::<InitName>()?);
    }
    if let Some(gamma) = o.gamma {
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(CliError::Usage("gamma must be positive".into()));
        }
        manifest.gamma = gamma;
    }
    if let Some(h) = o.lattice_h {
        if h == 0 {
            return Err(CliError::Usage("H must be at least 1".into()));
        }
        manifest.lattice_h = h;
        // A new lattice resolution retires any preset point budget.
        manifest.mu = None;
    }
    if let Some(mu) = o.mu {
        manifest.mu = Some(mu);
    }
    if let Some(seed) = o.seed {
        manifest.seed = Some(seed);
    }
    if let Some(iters) = o.iters {
        manifest.iters = iters;
    }
    if let Some(episodes) = o.episodes {
        manifest.episodes = episodes;
    }
    if let Some(alpha) = o.alpha {
        manifest.alpha = alpha;
    }
    if let Some(h) = o.fd_radius {
        manifest.fd_radius = h;
    }
    if let Some(epsilon) = o.epsilon {
        manifest.epsilon = epsilon;
    }
    if let Some(tau) = o.tau {
        manifest.tau = tau;
    }
    if let Some(sigma) = o.sigma {
        manifest.sigma = sigma;
    }
    if let Some(normalize) = &o.normalize {
        manifest.normalize = match normalize.to_ascii_lowercase().as_str() {
            "on" => true,
            "off" => false,
            other => {
                return Err(CliError::Usage(format!(
                    "--normalize takes `on` or `off`, got `{other}`"
                )))
            }
        };
    }
    if let Some(threshold) = o.exact_front_threshold {
        manifest.exact_front_threshold = threshold;
    }
    if o.recovery {
        manifest.recovery = true;
    }
    if let Some(window) = o.recovery_window {
        manifest.recovery_window = window;
    }
    if let Some(growth) = o.recovery_min_growth {
        manifest.recovery_min_growth = growth;
    }
    if let Some(step) = o.recovery_step {
        manifest.recovery_step = step;
    }
    if let Some(tail) = o.freeze_tail {
        manifest.freeze_tail = tail;
    }
    if let Some(stride) = o.sample_stride {
        manifest.sample_stride = stride;
    }
    if let Some(format) = &o.format {
        manifest.format = format.parse::<OutputFormat>()?;
    }
    Ok(())
}

fn bare_manifest(problem: ProblemName) -> RunManifest {
    RunManifest::from_toml(&format!("problem = \"{problem}\""))
        .expect("a bare problem line is a valid manifest")
}

fn build_manifest(args: &RunArgs) -> Result<RunManifest, CliError> {
    let mut manifest = if let Some(preset) = &args.preset {
        presets::load_preset(preset)?
    } else if let Some(path) = &args.manifest {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        RunManifest::from_toml(&text)?
    } else if let Some(problem) = &args.overrides.problem {
        bare_manifest(problem.parse()?)
    } else {
        return Err(CliError::Usage(
            "nothing to run: give --preset, --manifest, or --problem".into(),
        ));
    };
    apply_overrides(&mut manifest, &args.overrides)?;
    Ok(manifest)
}

fn dispatch(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Run(args) => {
            let manifest = build_manifest(&args)?;
            run_to_files(&manifest, args.out.as_deref())
        }
        Command::Compare(args) => {
            let mut a = presets::load_preset(&args.a)?;
            let mut b = presets::load_preset(&args.b)?;
            apply_overrides(&mut a, &args.overrides)?;
            apply_overrides(&mut b, &args.overrides)?;
            if let Some(indicator) = &args.indicator_a {
                a.indicator = indicator.parse::<IndicatorName>()?;
                a.name = Some(format!("{}/{indicator}", args.a));
            }
            if let Some(indicator) = &args.indicator_b {
                b.indicator = indicator.parse::<IndicatorName>()?;
                b.name = Some(format!("{}/{indicator}", args.b));
            }
            compare_to_table(&a, &b, args.out.as_deref())
        }
        Command::Presets => Ok(presets::preset_names().join("\n") + "\n"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
