use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use capcert::certification::threshold_fidelity;
use capcert::harness::{
    certify_table, figure_table, format_number, run_certify, run_sample, run_sweep, sweep_table,
    Config, SweepSpec, Table,
};
use capcert::{Error, Result, ThresholdFamily};

/// Certified quantum-capacity lower bounds from probe-state statistics.
#[derive(Debug, Parser)]
#[command(name = "capcert", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON experiment configuration
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Write CSV here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Overrides the configured seed
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Overrides the configured shot count (0 = exact statistics)
    #[arg(long, global = true, value_name = "N")]
    shots: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certify one configuration; one-row CSV plus a summary on stderr
    Certify,
    /// Evaluate the configured sweep grid
    Sweep,
    /// Data behind figure 1 (depolarizing) or 2 (erasure)
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
    },
    /// Fidelity below which no noise level gives a positive bound
    Threshold {
        #[arg(long)]
        family: ThresholdFamily,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Finite-shot counts per outcome for the configured experiment
    Sample,
}

fn load_config(common: &Common) -> Result<Config> {
    let path = common
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("--config is required for this command".into()))?;
    let mut cfg = Config::from_path(path)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(shots) = common.shots {
        cfg.shots = shots;
    }
    Ok(cfg)
}

fn emit(table: &Table, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            table.write_csv(&mut w)?;
            w.flush()?;
        }
        None => table.write_csv(io::stdout().lock())?,
    }
    Ok(())
}

fn certify_cmd(common: &Common) -> Result<()> {
    let cfg = load_config(common)?;
    let (result, estimate) = if cfg.shots > 0 {
        let rep = run_sample(&cfg, cfg.shots, cfg.seed)?;
        (rep.result, Some(rep.qdet_estimate))
    } else {
        (run_certify(&cfg)?, None)
    };
    eprintln!("probe      {}", result.probe_label);
    eprintln!("channel    {}", result.channel_label);
    eprintln!("povm       {}", result.povm_label);
    eprintln!("grouping   {}", result.grouping.describe());
    eprintln!("S[E(rho)]  {}", format_number(result.output_entropy));
    eprintln!("H(p)       {}", format_number(result.prob_entropy));
    eprintln!("log2 t.p   {}", format_number(result.log_tp));
    eprintln!("Q_DET      {}", format_number(result.qdet));
    eprintln!("I_c        {}", format_number(result.coherent_information));
    if let Some(e) = estimate {
        eprintln!(
            "estimate   {} ({} shots, seed {})",
            format_number(e),
            cfg.shots,
            cfg.seed
        );
    }
    emit(
        &certify_table(&result, cfg.shots, estimate)?,
        common.out.as_deref(),
    )
}

fn sweep_cmd(common: &Common) -> Result<()> {
    let cfg = load_config(common)?;
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Config("configuration has no 'sweep' section".into()))?;
    let spec = SweepSpec::from_config(sweep)?;
    let rows = run_sweep(&cfg, &spec)?;
    emit(&sweep_table(&spec, &rows)?, common.out.as_deref())
}

fn threshold_cmd(common: &Common, family: ThresholdFamily, dim: usize) -> Result<()> {
    let computed: f64 = threshold_fidelity(family, dim)?;
    let reported = if dim == 2 {
        format_number(family.reported_qubit_threshold())
    } else {
        String::new()
    };
    eprintln!(
        "{family} threshold (d={dim}): computed {}",
        format_number(computed)
    );
    if dim == 2 {
        eprintln!("literature value: {reported}");
    }
    let mut table = Table::new(&["family", "d", "threshold", "reported"]);
    table.push(vec![
        family.to_string(),
        dim.to_string(),
        format_number(computed),
        reported,
    ])?;
    emit(&table, common.out.as_deref())
}

fn sample_cmd(common: &Common) -> Result<()> {
    let cfg = load_config(common)?;
    if cfg.shots == 0 {
        return Err(Error::Config(
            "sampling needs --shots or a positive 'shots' entry".into(),
        ));
    }
    let rep = run_sample(&cfg, cfg.shots, cfg.seed)?;
    let mut table = Table::new(&["outcome", "label", "probability", "t", "count", "frequency"]);
    let freqs = rep.record.frequencies()?;
    for (i, label) in rep.labels.iter().enumerate() {
        table.push(vec![
            i.to_string(),
            label.clone(),
            format_number(rep.result.probabilities.values()[i]),
            format_number(rep.result.t.values()[i]),
            rep.record.counts[i].to_string(),
            format_number(freqs.values()[i]),
        ])?;
    }
    eprintln!(
        "Q_DET exact {}, estimate {} ({} shots, seed {})",
        format_number(rep.result.qdet),
        format_number(rep.qdet_estimate),
        cfg.shots,
        cfg.seed
    );
    emit(&table, common.out.as_deref())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Certify => certify_cmd(&cli.common),
        Command::Sweep => sweep_cmd(&cli.common),
        Command::Figure { which } => emit(&figure_table(*which)?, cli.common.out.as_deref()),
        Command::Threshold { family, dim } => threshold_cmd(&cli.common, *family, *dim),
        Command::Sample => sample_cmd(&cli.common),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 3 })
        }
    }
}
