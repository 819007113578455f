use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use vagg_sim::{bench, emit_report, params_summary, run_simulation, SimulationConfig, OUT_DIR_ENV};

#[derive(Parser)]
#[command(name = "vagg", about = "Verified secure aggregation simulator")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run repeated protocol rounds and write per-round reports.
    Simulate {
        /// TOML file overriding the defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the configured seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Report directory; `VAGG_OUT_DIR` takes precedence.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Start from the full-scale preset instead of desk defaults.
        #[arg(long)]
        full_scale: bool,
    },
    /// Per-stage costs over a sweep of dimensions.
    Bench {
        /// For example `d=1k,10k,100k`.
        #[arg(long)]
        sweep: String,
        /// Comma-separated projection counts.
        #[arg(long, default_value = "256")]
        k: String,
        /// Number of clients.
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// TOML file for the remaining settings.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Only compute exact message sizes; skip running rounds.
        #[arg(long)]
        predict_only: bool,
        /// Directory for bench.csv; `VAGG_OUT_DIR` takes precedence.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print gamma, B0, bit widths, the pass-rate table and max damage.
    Params {
        #[arg(long, default_value_t = 1000)]
        k: usize,
        #[arg(long, default_value_t = -128.0, allow_hyphen_values = true)]
        epsilon_log2: f64,
        #[arg(long, default_value_t = 1_000_000)]
        d: usize,
        /// log2 of the Gaussian standard deviation.
        #[arg(long = "M", default_value_t = 24.0)]
        m_log2: f64,
        #[arg(long, default_value_t = 1.0)]
        bound: f64,
        #[arg(long, default_value_t = 12)]
        frac_bits: u32,
    },
}

fn parse_count(s: &str) -> Result<usize> {
    let s = s.trim().to_ascii_lowercase();
    let (num, mul) = match s.chars().last() {
        Some('k') => (&s[..s.len() - 1], 1_000),
        Some('m') => (&s[..s.len() - 1], 1_000_000),
        _ => (s.as_str(), 1),
    };
    Ok(num.parse::<usize>().with_context(|| format!("bad count {s:?}"))? * mul)
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',').map(parse_count).collect()
}

fn load(config: &Option<PathBuf>, base: SimulationConfig) -> Result<SimulationConfig> {
    match config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(SimulationConfig::from_toml(&text)?)
        }
        None => Ok(base),
    }
}

fn out_dir(cli: Option<PathBuf>, cfg: Option<PathBuf>) -> PathBuf {
    std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).or(cli).or(cfg).unwrap_or_else(|| PathBuf::from("out"))
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Command::Simulate { config, seed, out, full_scale } => {
            let base = if full_scale { SimulationConfig::full_scale() } else { SimulationConfig::default() };
            let mut cfg = load(&config, base)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            cfg.validate()?;
            let reports = run_simulation(&cfg)?;
            for r in &reports {
                println!(
                    "round {:>3}: honest {}/{}  excluded honest {}  attackers passed {}  aggregate {}",
                    r.round,
                    r.honest_set.len(),
                    r.n,
                    r.honest_excluded,
                    r.attackers_passed,
                    if r.aggregate_correct { "exact" } else { "WRONG" }
                );
            }
            let dir = out_dir(out, cfg.out_dir.clone());
            for p in emit_report(&reports, &dir, &cfg.formats, cfg.write_transcripts)? {
                println!("wrote {}", p.display());
            }
        }
        Command::Bench { sweep, k, n, config, predict_only, out } => {
            let Some(ds) = sweep.strip_prefix("d=") else { bail!("--sweep expects d=<list>") };
            let mut base = load(&config, SimulationConfig { n, m: (n - 1) / 2, ..SimulationConfig::default() })?;
            base.attack = Default::default();
            let rows = bench(&base, &parse_list(ds)?, &parse_list(&k)?, predict_only)?;
            println!("{:>8} {:>6} {:>10} {:>10} {:>10} {:>12} {:>12} {:>12} {:>10}", "d", "k", "commit_s", "gen_s", "ver_s", "gen_exp", "prep_exp", "bytes", "ratio");
            for r in &rows {
                println!(
                    "{:>8} {:>6} {:>10.4} {:>10.4} {:>10.4} {:>12.1} {:>12.1} {:>12} {:>10.3}",
                    r.d, r.k, r.t_commit, r.t_proof_gen, r.t_proof_ver, r.exp_proof_gen, r.exp_prep, r.bytes_per_client, r.comm_ratio
                );
            }
            let dir = out_dir(out, base.out_dir.clone());
            std::fs::create_dir_all(&dir)?;
            let mut w = csv::Writer::from_path(dir.join("bench.csv"))?;
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()?;
            println!("wrote {}", dir.join("bench.csv").display());
        }
        Command::Params { k, epsilon_log2, d, m_log2, bound, frac_bits } => {
            let cfg = SimulationConfig { k, d, epsilon_log2, m_log2, bound, frac_bits, ..SimulationConfig::default() };
            print!("{}", params_summary(&cfg)?);
        }
    }
    Ok(())
}
