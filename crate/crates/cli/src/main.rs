use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coneoff_core::commands::{self, Command, DeltaMode, DemoKind, Input, Output, Sampling};
use coneoff_core::metric::FourPointMode;

#[derive(Parser)]
#[command(name = "coneoff", version, about = "Cones, cone-offs and rotation families over finite metric spaces")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    output: Format,
    /// Worker threads (0 picks the number of cores).
    #[arg(long, default_value_t = 0, global = true)]
    threads: usize,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Kv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Auto,
    Exact,
    Sampled,
}

#[derive(Args)]
struct SamplingArgs {
    /// Four-point scan: exact below 150 points under `auto`.
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    mode: Mode,
    #[arg(long, default_value_t = FourPointMode::DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SamplingArgs {
    fn get(&self) -> Sampling {
        let mode = match self.mode {
            Mode::Auto => DeltaMode::Auto,
            Mode::Exact => DeltaMode::Exact,
            Mode::Sampled => DeltaMode::Sampled,
        };
        Sampling { mode, samples: self.samples, seed: self.seed }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Four-point delta and fixed-geodesic thinness.
    Delta {
        input: PathBuf,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Rim distance function of a cone.
    Mu {
        #[arg(long)]
        r0: f64,
        #[arg(allow_negative_numbers = true)]
        values: Vec<f64>,
    },
    /// Materialized cone over the input space.
    Cone {
        input: PathBuf,
        #[arg(long)]
        r0: Option<f64>,
        #[arg(long)]
        radii: Option<usize>,
        /// Cone over a named subspace instead of the whole space.
        #[arg(long)]
        subspace: Option<String>,
        /// Also build the cone over the quotient by the declared generators.
        #[arg(long)]
        quotient: bool,
        #[arg(long)]
        emit_metric: bool,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Cone-off along a family of subspaces.
    Coneoff {
        input: PathBuf,
        #[arg(long)]
        r0: Option<f64>,
        #[arg(long)]
        radii: Option<usize>,
        /// Comma-separated subspace names; all declared subspaces by default.
        #[arg(long, value_delimiter = ',')]
        family: Vec<String>,
        /// Sampled pairs for the projection and path-metric audits.
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        #[arg(long)]
        emit_metric: bool,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Rips complex, mod-2 Betti numbers and the connectedness certificate.
    Rips {
        input: PathBuf,
        /// Scale; defaults to 4·delta plus the spanning-tree bottleneck plus the smallest positive distance.
        #[arg(long)]
        d: Option<f64>,
        #[arg(long, default_value_t = coneoff_core::rips::DEFAULT_MAXDIM)]
        maxdim: usize,
        #[arg(long)]
        certificate: Option<usize>,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Small-cancellation check of the declared rotation family.
    ScCheck {
        input: PathBuf,
        #[arg(long)]
        delta0: Option<f64>,
        #[arg(long = "Delta0")]
        big_delta0: Option<f64>,
        #[arg(long)]
        r0: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        radii: Option<usize>,
        /// Ball centres sampled for the local hyperbolicity check.
        #[arg(long, default_value_t = 8)]
        centres: usize,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Print a generated workspace document.
    Demo {
        #[command(subcommand)]
        kind: DemoCmd,
    },
}

#[derive(Subcommand)]
enum DemoCmd {
    /// Equally spaced points on a circle of perimeter 2π sinh r0.
    Circle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r0: f64,
    },
    /// Random tree with subtrees pairwise sharing at most one vertex.
    TreeFamily {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        filler: usize,
    },
    /// Cayley ball of F(a,b) with the translates of a relator's axis.
    FreeGroupBall {
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        relator: String,
    },
}

fn lower(cmd: Cmd) -> (Command, Option<PathBuf>) {
    match cmd {
        Cmd::Delta { input, sampling } => (Command::Delta { sampling: sampling.get() }, Some(input)),
        Cmd::Mu { r0, values } => (Command::Mu { r0, values }, None),
        Cmd::Cone { input, r0, radii, subspace, quotient, emit_metric, sampling } => (
            Command::Cone { r0, radii, subspace, quotient, emit_metric, sampling: sampling.get() },
            Some(input),
        ),
        Cmd::Coneoff { input, r0, radii, family, pairs, emit_metric, sampling } => (
            Command::ConeOff { r0, radii, family, pairs, emit_metric, sampling: sampling.get() },
            Some(input),
        ),
        Cmd::Rips { input, d, maxdim, certificate, sampling } => {
            (Command::Rips { scale: d, maxdim, certificate, sampling: sampling.get() }, Some(input))
        }
        Cmd::ScCheck { input, delta0, big_delta0, r0, epsilon, cap, radii, centres, sampling } => (
            Command::ScCheck { delta0, big_delta0, r0, epsilon, cap, radii, centres, sampling: sampling.get() },
            Some(input),
        ),
        Cmd::Demo { kind } => {
            let kind = match kind {
                DemoCmd::Circle { n, r0 } => DemoKind::Circle { n, r0 },
                DemoCmd::TreeFamily { seed, sizes, filler } => DemoKind::TreeFamily { seed, sizes, filler },
                DemoCmd::FreeGroupBall { radius, relator } => DemoKind::FreeGroupBall { radius, relator },
            };
            (Command::Demo(kind), None)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        eprintln!("error: cannot start worker pool: {e}");
        return ExitCode::from(2);
    }
    let (command, path) = lower(cli.command);
    let text = match &path {
        Some(p) => match std::fs::read_to_string(p) {
            Ok(t) => Some(t),
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", p.display());
                return ExitCode::from(2);
            }
        },
        None => None,
    };
    let name = path.as_ref().map(|p| p.display().to_string());
    let input = match (&name, &text) {
        (Some(name), Some(text)) => Some(Input { name, text }),
        _ => None,
    };
    match commands::run(&command, input) {
        Ok(Output::Report(r)) => {
            print!("{}", match cli.output {
                Format::Text => r.to_text(),
                Format::Kv => r.to_kv(),
            });
            ExitCode::SUCCESS
        }
        Ok(Output::Document(doc)) => {
            print!("{}", doc.render());
            ExitCode::SUCCESS
        }
        Err(e) => {
            match &name {
                Some(n) => eprintln!("error: {n}: {e}"),
                None => eprintln!("error: {e}"),
            }
            ExitCode::from(2)
        }
    }
}
