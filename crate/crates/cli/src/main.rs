//! Command-line front end for Eb/N0 sweeps and paired decoder comparisons.

mod parse;

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Parser, ValueEnum};
use stepgrand::sim::{self, SweepConfig, DEFAULT_MAX_FRAMES, DEFAULT_MIN_FRAME_ERRORS};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DecoderName {
    Grandab,
    Orbgrand,
    Stepgrand,
}

#[derive(Debug, Parser)]
#[command(
    name = "stepgrand",
    version,
    about = "Monte-Carlo FER simulation of GRAND decoders over BPSK/AWGN"
)]
struct Args {
    /// bch127, capolar128, alist:<path> or dense:<path>
    #[arg(long, default_value = "capolar128")]
    code: String,
    #[arg(long, value_enum, default_value = "stepgrand")]
    decoder: DecoderName,
    #[arg(long, default_value_t = 2)]
    alpha: usize,
    #[arg(long, default_value_t = 6)]
    beta: usize,
    #[arg(long, default_value_t = 6)]
    pmax: usize,
    /// Abandonment weight for grandab
    #[arg(long, default_value_t = 3)]
    ab: usize,
    /// Maximum logistic weight for orbgrand
    #[arg(long, default_value_t = 64)]
    lwmax: usize,
    /// start:step:stop or a comma-separated list, in dB
    #[arg(long)]
    ebn0: String,
    #[arg(long, default_value_t = DEFAULT_MIN_FRAME_ERRORS)]
    min_frame_errors: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_FRAMES)]
    max_frames: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Quantize LLRs to the 5-bit fixed-point format
    #[arg(long)]
    quantize: bool,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Output CSV; printed to stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Paired comparison, e.g. stepgrand,grandab:ab=3,orbgrand:lwmax=64:pmax=6
    #[arg(long)]
    compare: Option<String>,
}

fn run(args: Args) -> Result<()> {
    let code = parse::code(&args.code)?;
    let defaults = parse::Params {
        alpha: Some(args.alpha),
        beta: Some(args.beta),
        pmax: Some(args.pmax),
        ab: Some(args.ab),
        lwmax: Some(args.lwmax),
    };
    let variants = match &args.compare {
        Some(list) => {
            let v = parse::variant_list(list, defaults)?;
            if v.len() < 2 {
                bail!("--compare needs at least two variants");
            }
            v
        }
        None => {
            let name = match args.decoder {
                DecoderName::Grandab => "grandab",
                DecoderName::Orbgrand => "orbgrand",
                DecoderName::Stepgrand => "stepgrand",
            };
            vec![parse::variant(name, defaults)?]
        }
    };
    for v in &variants {
        v.validate(code.n())?;
    }
    let cfg = SweepConfig {
        code: args.code.clone(),
        variants,
        ebn0_db: parse::ebn0_list(&args.ebn0)?,
        min_frame_errors: args.min_frame_errors,
        max_frames: args.max_frames,
        seed: args.seed,
        quantize: args.quantize,
        workers: args.workers,
    };
    cfg.validate()?;

    let csv = if cfg.variants.len() > 1 {
        let mut points = Vec::new();
        for &e in &cfg.ebn0_db {
            let p = sim::simulate_point(&cfg, &code, e)?;
            for (v, s) in cfg.variants.iter().zip(&p.stats) {
                eprintln!(
                    "{e} dB {}: {} frames, FER {:.3e}",
                    v.label(),
                    s.frames,
                    s.fer
                );
            }
            points.push(p);
        }
        sim::compare_csv(&cfg, &code, &points)
    } else {
        let mut points = Vec::new();
        for &e in &cfg.ebn0_db {
            let p = sim::run_point(&cfg, &code, e)?;
            eprintln!(
                "{e} dB: {} frames, FER {:.3e}, avg queries {:.2}",
                p.frames, p.fer, p.avg_queries
            );
            points.push(p);
        }
        sim::sweep_csv(&cfg, &code, &points)
    };
    match &args.out {
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn main() -> Result<()> {
    run(Args::parse())
}
