use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qcc_ilcap::acset::build_anticommuting_set_capped;
use qcc_ilcap::cli::{
    csv_column, exact_energy, format_significant, hamiltonian_text, load_problem,
    parse_scan_manifest, run_scheme, scan, RunConfig, Scheme,
};
use qcc_ilcap::constants::BOHR_TO_ANGSTROM;
use qcc_ilcap::morse::fit_morse;
use qcc_ilcap::screen::{gradients, ising_decompose};
use qcc_ilcap::{Error, Result};

#[derive(Parser)]
#[command(name = "qcc-ilcap", version, about = "Qubit coupled cluster with anti-commuting generator sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// TOML run configuration; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Electron count (overrides the input file).
    #[arg(long)]
    electrons: Option<usize>,
    /// Spin-penalty strength mu, adding (mu/2)(S^2 - S_z).
    #[arg(long)]
    penalty_mu: Option<f64>,
    /// Seed for optimizer restarts.
    #[arg(long)]
    seed: Option<u64>,
    /// iQCC iterations.
    #[arg(long)]
    iters: Option<usize>,
    /// Generators per iQCC iteration.
    #[arg(long)]
    gens: Option<usize>,
    /// Coefficient truncation threshold for dressed Hamiltonians.
    #[arg(long)]
    truncation: Option<f64>,
    /// Gradient threshold below which sectors are ignored.
    #[arg(long)]
    gradient_threshold: Option<f64>,
    /// Keep at most this many anti-commuting generators.
    #[arg(long)]
    max_size: Option<usize>,
    /// Also report the exact ground energy.
    #[arg(long)]
    exact: bool,
}

impl Common {
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if self.electrons.is_some() {
            cfg.electrons = self.electrons;
        }
        if let Some(v) = self.penalty_mu {
            cfg.penalty_mu = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.iters {
            cfg.iqcc.iterations = v;
        }
        if let Some(v) = self.gens {
            cfg.iqcc.generators = v;
        }
        if let Some(v) = self.truncation {
            cfg.iqcc.truncation = v;
        }
        if let Some(v) = self.gradient_threshold {
            cfg.iqcc.gradient_threshold = v;
        }
        if self.max_size.is_some() {
            cfg.ilcap.max_generators = self.max_size;
        }
        cfg.exact |= self.exact;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Map an FCIDUMP file to a qubit Hamiltonian in Pauli-word text form.
    Transform {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Rank X-word sectors by energy gradient.
    Screen {
        input: PathBuf,
        #[arg(long, default_value_t = 10)]
        top: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Build the anti-commuting generator set from the ranked sectors.
    Acset {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run iterative QCC.
    Iqcc {
        input: PathBuf,
        /// Write one checkpoint per iteration into this directory.
        #[arg(long)]
        checkpoint_dir: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// ILCAP estimates before (pre) or after (post) iQCC.
    Ilcap {
        input: PathBuf,
        #[arg(long, default_value = "pre")]
        scheme: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run a scheme over a '<coordinate> <path>' manifest and write CSV.
    Scan {
        manifest: PathBuf,
        #[arg(long)]
        scheme: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Fit a Morse curve to one CSV column.
    FitMorse {
        csv: PathBuf,
        #[arg(long, default_value = "E_exact")]
        column: String,
        /// Reduced mass in amu.
        #[arg(long)]
        mu: f64,
        /// Coordinates are in angstrom rather than bohr.
        #[arg(long)]
        angstrom: bool,
    },
    /// Exact ground energy of a Hamiltonian.
    Exact {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn write_or_print(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Config(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_scheme(problem: &qcc_ilcap::cli::Problem, cfg: &RunConfig) -> Result<()> {
    let r = run_scheme(problem, cfg);
    if r.energy_history.len() > 1 {
        for (i, e) in r.energy_history.iter().enumerate() {
            println!("iteration {i:>3}  {}", format_significant(*e, 12));
        }
    }
    for (label, e) in &r.estimates {
        println!("{label:<22} {}", format_significant(*e, 12));
    }
    match r.error {
        Some(e) => Err(Error::InvalidArgument(e)),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Transform { input, output, common } => {
            let cfg = common.config()?;
            let p = load_problem(&input, cfg.electrons, cfg.penalty_mu)?;
            write_or_print(output.as_ref(), &hamiltonian_text(&p))
        }
        Command::Screen { input, top, common } => {
            let cfg = common.config()?;
            let p = load_problem(&input, cfg.electrons, cfg.penalty_mu)?;
            let ranked = gradients(&ising_decompose(&p.hamiltonian), &p.reference)?;
            for w in ranked.top(top) {
                let word = w.word();
                println!("{:>4}  {:.6e}  {}", w.source_index, w.weight, word);
            }
            Ok(())
        }
        Command::Acset { input, common } => {
            let cfg = common.config()?;
            let p = load_problem(&input, cfg.electrons, cfg.penalty_mu)?;
            let ranked = gradients(&ising_decompose(&p.hamiltonian), &p.reference)?
                .above(cfg.iqcc.gradient_threshold);
            if ranked.is_empty() {
                println!("no sectors above the gradient threshold");
                return Ok(());
            }
            let set = build_anticommuting_set_capped(&ranked.entries, p.hamiltonian.n(), cfg.ilcap.max_generators)?;
            for i in 0..set.len() {
                println!(
                    "{:>4}  {:<9}  {:.6e}  {}",
                    set.x_sources[i], set.kinds[i], set.weights[i], set.generators[i]
                );
            }
            Ok(())
        }
        Command::Iqcc { input, checkpoint_dir, common } => {
            let mut cfg = common.config()?;
            cfg.scheme = Scheme::Iqcc;
            if checkpoint_dir.is_some() {
                cfg.output.checkpoints = checkpoint_dir;
            }
            let p = load_problem(&input, cfg.electrons, cfg.penalty_mu)?;
            print_scheme(&p, &cfg)
        }
        Command::Ilcap { input, scheme, common } => {
            let mut cfg = common.config()?;
            cfg.scheme = scheme.parse()?;
            let p = load_problem(&input, cfg.electrons, cfg.penalty_mu)?;
            print_scheme(&p, &cfg)
        }
        Command::Scan { manifest, scheme, output, workers, common } => {
            let mut cfg = common.config()?;
            if let Some(s) = scheme {
                cfg.scheme = s.parse()?;
            }
            if let Some(w) = workers {
                cfg.workers = w;
            }
            let base = manifest.parent().map(PathBuf::from).unwrap_or_default();
            let entries = parse_scan_manifest(&read(&manifest)?, &base)?;
            let csv = scan(&entries, &cfg)?;
            write_or_print(output.as_ref().or(cfg.output.csv.as_ref()), &csv)
        }
        Command::FitMorse { csv, column, mu, angstrom } => {
            let mut pts = csv_column(&read(&csv)?, &column)?;
            if angstrom {
                pts.iter_mut().for_each(|p| p.0 /= BOHR_TO_ANGSTROM);
            }
            let fit = fit_morse(&pts, mu)?;
            println!("D_e      {:.8} hartree", fit.d_e);
            println!("r_e      {:.8} bohr", fit.r_e);
            println!("a        {:.8} 1/bohr", fit.a);
            println!("E_min    {:.10} hartree", fit.e_min);
            println!("rms      {:.3e} hartree", fit.rms);
            println!("omega_e  {:.2} cm^-1", fit.omega_e);
            println!("omega_e x_e  {:.3} cm^-1", fit.omega_e_x_e);
            if fit.weak_d_e {
                println!("warning: D_e is weakly determined by these points");
            }
            Ok(())
        }
        Command::Exact { input, common } => {
            let cfg = common.config()?;
            let p = load_problem(&input, cfg.electrons, cfg.penalty_mu)?;
            println!("E_exact {}", format_significant(exact_energy(&p)?, 12));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
