//! Monte-Carlo frame-error simulation over BPSK/AWGN.
//!
//! Frame `i` of a point draws its message and noise from its own ChaCha
//! stream, seeded by `(seed, Eb/N0)` with stream number `i`. Batches of
//! frames are decoded in parallel and then folded in frame order up to the
//! exact point where a sequential run would stop, so results do not depend
//! on the worker count.
//!
//! When several variants are simulated together they see the same frames,
//! which pairs their errors for discordance tests.

pub mod stats;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;

use crate::channel::{quantize, transmit, ChannelConfig, LLR_BITS};
use crate::codes::LinearCode;
use crate::decoder::{Decoder, Variant};
use crate::gf2::BitWord;
use crate::{Error, Result};

pub const DEFAULT_MIN_FRAME_ERRORS: u64 = 100;
pub const DEFAULT_MAX_FRAMES: u64 = 100_000_000;

const BATCH: u64 = 2048;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    /// Code name echoed in CSV headers.
    pub code: String,
    /// One variant for a sweep; two or more for a comparison, the first
    /// being the reference for discordance counts.
    pub variants: Vec<Variant>,
    pub ebn0_db: Vec<f64>,
    pub min_frame_errors: u64,
    pub max_frames: u64,
    pub seed: u64,
    pub quantize: bool,
    pub workers: usize,
}

impl SweepConfig {
    pub fn new(code: impl Into<String>, variants: Vec<Variant>, ebn0_db: Vec<f64>) -> Self {
        Self {
            code: code.into(),
            variants,
            ebn0_db,
            min_frame_errors: DEFAULT_MIN_FRAME_ERRORS,
            max_frames: DEFAULT_MAX_FRAMES,
            seed: 0,
            quantize: false,
            workers: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.variants.is_empty() {
            return Err(Error::InvalidParameter("no decoder variant given".into()));
        }
        if self.ebn0_db.is_empty() {
            return Err(Error::InvalidParameter("empty Eb/N0 list".into()));
        }
        if let Some(x) = self.ebn0_db.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Eb/N0 {x} dB is not finite"
            )));
        }
        if self.min_frame_errors == 0 {
            return Err(Error::InvalidParameter(
                "min_frame_errors must be ≥ 1".into(),
            ));
        }
        if self.max_frames == 0 {
            return Err(Error::InvalidParameter("max_frames must be ≥ 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidParameter("workers must be ≥ 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PointStats {
    pub ebn0_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub fer: f64,
    pub ber: f64,
    pub avg_queries: f64,
    /// Only for variants with a latency model.
    pub avg_cycles: Option<f64>,
    pub wc_queries_obs: u64,
    pub wc_cycles_obs: Option<u64>,
    /// The point stopped at `max_frames` before reaching the error target.
    pub capped: bool,
    pub queries_sum: u64,
    pub queries_sq_sum: f64,
    pub cycles_sum: u64,
}

impl PointStats {
    /// Wilson interval on the FER.
    pub fn fer_interval(&self, level: f64) -> (f64, f64) {
        stats::wilson_interval(self.frame_errors, self.frames, level)
    }

    pub fn avg_queries_interval(&self, level: f64) -> (f64, f64) {
        stats::mean_interval(
            self.queries_sum as f64,
            self.queries_sq_sum,
            self.frames,
            level,
        )
    }

    fn add(&mut self, f: &FrameOutcome) {
        self.frames += 1;
        self.frame_errors += u64::from(f.error);
        self.bit_errors += f.bit_errors;
        self.queries_sum += f.queries;
        self.queries_sq_sum += (f.queries as f64).powi(2);
        self.wc_queries_obs = self.wc_queries_obs.max(f.queries);
        if let Some(c) = f.cycles {
            self.cycles_sum += c;
            self.wc_cycles_obs = Some(self.wc_cycles_obs.map_or(c, |w| w.max(c)));
        }
    }

    fn finalize(&mut self, k: usize, min_errors: u64, has_cycles: bool) {
        let n = self.frames as f64;
        self.fer = self.frame_errors as f64 / n;
        self.ber = self.bit_errors as f64 / (n * k.max(1) as f64);
        self.avg_queries = self.queries_sum as f64 / n;
        self.avg_cycles = has_cycles.then(|| self.cycles_sum as f64 / n);
        self.capped = self.frame_errors < min_errors;
    }
}

/// Paired result for several variants at one Eb/N0.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparePoint {
    pub ebn0_db: f64,
    pub stats: Vec<PointStats>,
    /// `only_ref[j]`: frames where the reference failed and variant `j`
    /// decoded correctly. Entry 0 is unused.
    pub only_ref: Vec<u64>,
    /// `only_other[j]`: frames where variant `j` failed and the reference
    /// decoded correctly.
    pub only_other: Vec<u64>,
}

#[derive(Clone, Copy, Debug)]
struct FrameOutcome {
    error: bool,
    bit_errors: u64,
    queries: u64,
    cycles: Option<u64>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Channel seed for one point: depends on the run seed and the Eb/N0 value.
pub fn point_seed(seed: u64, ebn0_db: f64) -> u64 {
    splitmix64(seed ^ splitmix64(ebn0_db.to_bits()))
}

fn random_message(k: usize, rng: &mut impl Rng) -> BitWord {
    let mut u = BitWord::zeros(k);
    for i in 0..k {
        if rng.random::<bool>() {
            u.set(i, true);
        }
    }
    u
}

fn simulate_frame(
    code: &LinearCode,
    channel: &ChannelConfig,
    quantized: bool,
    decoders: &mut [Decoder<'_>],
    index: u64,
) -> Result<Vec<FrameOutcome>> {
    let mut rng = channel.frame_rng(index);
    let u = random_message(code.k(), &mut rng);
    let c = code.encode(&u)?;
    let mut v = transmit(&c, channel, &mut rng);
    if quantized {
        v = quantize(&v, LLR_BITS)?;
    }
    decoders
        .iter_mut()
        .map(|d| {
            let r = d.decode(&v)?;
            // abandoned frames pass the hard decision through G⁻¹
            let u_hat = match r.message {
                Some(m) => m,
                None => code.unencode(&crate::channel::harden(&v))?,
            };
            let bit_errors = u_hat.distance(&u) as u64;
            Ok(FrameOutcome {
                error: r.abandoned || bit_errors > 0,
                bit_errors,
                queries: r.queries,
                cycles: r.cycles,
            })
        })
        .collect()
}

fn point_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start {workers} workers: {e}")))
}

/// Simulates every variant of `cfg` on shared frames at one Eb/N0 until
/// each has `min_frame_errors` errors or `max_frames` frames have run.
pub fn simulate_point(cfg: &SweepConfig, code: &LinearCode, ebn0_db: f64) -> Result<ComparePoint> {
    cfg.validate()?;
    let channel = ChannelConfig::new(ebn0_db, code.rate(), point_seed(cfg.seed, ebn0_db))?;
    let template: Vec<Decoder<'_>> = cfg
        .variants
        .iter()
        .map(|v| Decoder::new(code, v.clone()))
        .collect::<Result<_>>()?;
    let nv = template.len();
    let mut stats = vec![
        PointStats {
            ebn0_db,
            ..Default::default()
        };
        nv
    ];
    let mut only_ref = vec![0u64; nv];
    let mut only_other = vec![0u64; nv];
    let pool = point_pool(cfg.workers)?;
    let mut next = 0u64;
    let done = |stats: &[PointStats], frames: u64| {
        frames >= cfg.max_frames || stats.iter().all(|s| s.frame_errors >= cfg.min_frame_errors)
    };
    'outer: while !done(&stats, next) {
        let end = (next + BATCH).min(cfg.max_frames);
        let batch: Vec<Vec<FrameOutcome>> = pool.install(|| {
            (next..end)
                .into_par_iter()
                .map_init(
                    || template.clone(),
                    |decs, i| simulate_frame(code, &channel, cfg.quantize, decs, i),
                )
                .collect::<Result<_>>()
        })?;
        for outcomes in &batch {
            for (s, o) in stats.iter_mut().zip(outcomes) {
                s.add(o);
            }
            for j in 1..nv {
                match (outcomes[0].error, outcomes[j].error) {
                    (true, false) => only_ref[j] += 1,
                    (false, true) => only_other[j] += 1,
                    _ => {}
                }
            }
            next += 1;
            if done(&stats, next) {
                break 'outer;
            }
        }
    }
    for (s, d) in stats.iter_mut().zip(&template) {
        s.finalize(code.k(), cfg.min_frame_errors, d.latency_model().is_some());
    }
    Ok(ComparePoint {
        ebn0_db,
        stats,
        only_ref,
        only_other,
    })
}

/// Single-variant point.
pub fn run_point(cfg: &SweepConfig, code: &LinearCode, ebn0_db: f64) -> Result<PointStats> {
    if cfg.variants.len() != 1 {
        return Err(Error::InvalidParameter(format!(
            "a sweep takes one variant, got {}",
            cfg.variants.len()
        )));
    }
    Ok(simulate_point(cfg, code, ebn0_db)?.stats.remove(0))
}

pub const CSV_COLUMNS: &str =
    "ebn0_db,frames,frame_errors,bit_errors,fer,ber,avg_queries,avg_cycles,wc_queries_obs,wc_cycles_obs,capped";

fn opt<T: std::fmt::Display>(x: Option<T>) -> String {
    x.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

fn stats_fields(s: &PointStats) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        s.frames,
        s.frame_errors,
        s.bit_errors,
        s.fer,
        s.ber,
        s.avg_queries,
        opt(s.avg_cycles),
        s.wc_queries_obs,
        opt(s.wc_cycles_obs),
        s.capped
    )
}

fn header(cfg: &SweepConfig, code: &LinearCode, kind: &str) -> String {
    let mut h = String::new();
    let ebn0: Vec<String> = cfg.ebn0_db.iter().map(|x| x.to_string()).collect();
    let _ = writeln!(h, "# stepgrand {kind}");
    let _ = writeln!(h, "# code: {} n={} k={}", cfg.code, code.n(), code.k());
    for (j, v) in cfg.variants.iter().enumerate() {
        if cfg.variants.len() == 1 {
            let _ = writeln!(h, "# decoder: {}", v.label());
        } else {
            let _ = writeln!(h, "# v{j}: {}", v.label());
        }
    }
    let _ = writeln!(h, "# ebn0_db: {}", ebn0.join(" "));
    let _ = writeln!(
        h,
        "# seed: {} min_frame_errors: {} max_frames: {} quantize: {}",
        cfg.seed,
        cfg.min_frame_errors,
        cfg.max_frames,
        if cfg.quantize {
            format!("{LLR_BITS}-bit")
        } else {
            "off".into()
        }
    );
    let _ = writeln!(
        h,
        "# queries: membership tests per frame including the initial hard-decision check"
    );
    let _ = writeln!(h, "# cycles: 1 initial check + sorter + 1 per weight-1/2 step + 1 per composite syndrome; NA without a cycle model");
    let _ = writeln!(h, "# frame error: decoded message differs or decoding abandoned; capped: max_frames reached first");
    h
}

/// Narrow CSV for a single variant.
pub fn sweep_csv(cfg: &SweepConfig, code: &LinearCode, points: &[PointStats]) -> String {
    let mut out = header(cfg, code, "sweep");
    let _ = writeln!(out, "{CSV_COLUMNS}");
    for p in points {
        let _ = writeln!(out, "{},{}", p.ebn0_db, stats_fields(p));
    }
    out
}

/// Wide CSV: the per-variant columns prefixed `v{j}_`, then discordance
/// counts against `v0`.
pub fn compare_csv(cfg: &SweepConfig, code: &LinearCode, points: &[ComparePoint]) -> String {
    let mut out = header(cfg, code, "comparison");
    let nv = cfg.variants.len();
    let mut cols = vec!["ebn0_db".to_string()];
    for j in 0..nv {
        cols.extend(CSV_COLUMNS.split(',').skip(1).map(|c| format!("v{j}_{c}")));
    }
    for j in 1..nv {
        cols.push(format!("v{j}_only_v0_errors"));
        cols.push(format!("v{j}_only_v{j}_errors"));
    }
    let _ = writeln!(out, "{}", cols.join(","));
    for p in points {
        let mut row = vec![p.ebn0_db.to_string()];
        row.extend(p.stats.iter().map(stats_fields));
        for j in 1..nv {
            row.push(p.only_ref[j].to_string());
            row.push(p.only_other[j].to_string());
        }
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(contents.as_bytes())?;
    Ok(())
}

/// Runs every Eb/N0 point of a single-variant config and writes its CSV.
pub fn run_sweep(cfg: &SweepConfig, code: &LinearCode, out: &Path) -> Result<Vec<PointStats>> {
    cfg.validate()?;
    let points = cfg
        .ebn0_db
        .iter()
        .map(|&e| run_point(cfg, code, e))
        .collect::<Result<Vec<_>>>()?;
    write_file(out, &sweep_csv(cfg, code, &points))?;
    Ok(points)
}

/// Paired simulation of two or more variants; writes the wide CSV.
pub fn compare_decoders(
    cfg: &SweepConfig,
    code: &LinearCode,
    out: &Path,
) -> Result<Vec<ComparePoint>> {
    if cfg.variants.len() < 2 {
        return Err(Error::InvalidParameter(
            "a comparison needs at least two variants".into(),
        ));
    }
    let points = cfg
        .ebn0_db
        .iter()
        .map(|&e| simulate_point(cfg, code, e))
        .collect::<Result<Vec<_>>>()?;
    write_file(out, &compare_csv(cfg, code, &points))?;
    Ok(points)
}
