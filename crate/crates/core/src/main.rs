use clap::{Parser, Subcommand};
use dseqsync::harness::{self, CsvRow, SeqKind, SimConfig};
use dseqsync::opt::load_ue_stats;
use dseqsync::Result;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dseqsync", version, about = "CFO estimation with double synchronization sequences under low-resolution ADCs")]
struct Cli {
    /// TOML scenario file; built-in defaults otherwise.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides `master_seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output CSV path; stdout otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides `trials`.
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dump a synchronization sequence as `index,re,im`.
    GenSeq {
        /// zc | zc-time | aux0 | aux1 | sum | diff
        #[arg(long, default_value = "zc")]
        kind: SeqKind,
    },
    ZcSymmetry,
    RatioCurve,
    MseSweep,
    Crlb,
    LemmaVar,
    Optimize {
        /// `snr_db,bits,cfo_normalized` CSV, optionally with a `ue` column.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    Multiuser,
}

fn emit<R: CsvRow>(rows: &[R], out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            harness::write_csv(rows, &mut w)?;
            w.flush()?;
        }
        None => harness::write_csv(rows, std::io::stdout().lock())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = match &cli.config {
        Some(p) => SimConfig::load(p)?,
        None => SimConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.master_seed = s;
    }
    if let Some(t) = cli.trials {
        cfg.trials = t;
    }
    cfg.validate()?;
    let out = &cli.out;
    match cli.cmd {
        Cmd::GenSeq { kind } => emit(&harness::gen_seq(&cfg, kind)?, out),
        Cmd::ZcSymmetry => emit(&harness::run_zc_symmetry(&cfg)?, out),
        Cmd::RatioCurve => emit(&harness::run_ratio_curve(&cfg)?, out),
        Cmd::MseSweep => emit(&harness::run_mse_sweep(&cfg)?.rows, out),
        Cmd::Crlb => emit(&harness::run_crlb_compare(&cfg)?, out),
        Cmd::LemmaVar => emit(&harness::run_lemma_var(&cfg)?, out),
        Cmd::Optimize { stats } => {
            let stats = stats.map(load_ue_stats).transpose()?;
            emit(&harness::run_optimize(&cfg, stats.as_deref())?, out)
        }
        Cmd::Multiuser => emit(&harness::run_multiuser(&cfg)?, out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error kind={} msg={msg}", e.kind());
            ExitCode::FAILURE
        }
    }
}
