//! Cycle-count model of the step-GRAND hardware schedule.
//!
//! The datapath checks `ŷ` in one cycle, sorts reliabilities in a
//! `log₂ n`-stage pipeline, then tests all weight-1 patterns in one cycle
//! and all weight-2 patterns in one more. Each weight `hw ≥ 3` takes one
//! cycle per composite syndrome, i.e. per choice of the `hw − 2` lowest
//! ranks from `1..=γ_hw − 2`, for `C(γ_hw − 2, hw − 2)` cycles in all.
//!
//! Worst case: `3 + log₂ n + Σ_{hw≥3} C(γ_hw − 2, hw − 2)`. The fixed 3 is
//! taken as the initial check plus the weight-1 and weight-2 steps.
//! Priority-encoder readout cycles are not modeled.

use crate::decoder::DecodeTrace;
use crate::patterns::{lex_rank, StepSchedule};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatencyModel {
    pub n: usize,
    pub schedule: StepSchedule,
    pub sorter_cycles: u64,
    pub fixed_overhead: u64,
}

impl LatencyModel {
    /// Requires `n` to be a power of two.
    pub fn new(n: usize, schedule: StepSchedule) -> Result<Self> {
        if !n.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "code length {n} is not a power of two"
            )));
        }
        Self::padded(n, schedule)
    }

    /// As [`LatencyModel::new`], with the sorter padded to the next power of
    /// two for other lengths.
    pub fn padded(n: usize, schedule: StepSchedule) -> Result<Self> {
        schedule.check_length(n)?;
        Ok(Self {
            n,
            sorter_cycles: u64::from(n.next_power_of_two().trailing_zeros()),
            schedule,
            fixed_overhead: 3,
        })
    }

    /// Composite-syndrome steps for weight `hw` (0 below weight 3).
    pub fn composite_steps(&self, hw: usize) -> u64 {
        match self.schedule.gamma(hw) {
            Some(g) if hw >= 3 => binomial(g - 2, hw - 2),
            _ => 0,
        }
    }

    pub fn worst_case_cycles(&self) -> u64 {
        worst_case_cycles(self)
    }

    pub fn frame_cycles(&self, trace: &DecodeTrace) -> Result<u64> {
        frame_cycles(trace, self)
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    num_integer::binomial(n as u64, k as u64)
}

pub fn worst_case_cycles(m: &LatencyModel) -> u64 {
    m.fixed_overhead
        + m.sorter_cycles
        + (3..=m.schedule.p_max())
            .map(|hw| m.composite_steps(hw))
            .sum::<u64>()
}

pub fn frame_cycles(trace: &DecodeTrace, m: &LatencyModel) -> Result<u64> {
    let ranks = match trace {
        DecodeTrace::Initial => return Ok(1),
        DecodeTrace::Exhausted => return Ok(worst_case_cycles(m)),
        DecodeTrace::Hit { ranks } => ranks,
    };
    let hw = ranks.len();
    let gamma = m
        .schedule
        .gamma(hw)
        .ok_or_else(|| Error::MalformedTrace(format!("weight {hw} is not in the schedule")))?;
    if ranks.first() == Some(&0)
        || ranks.windows(2).any(|w| w[0] >= w[1])
        || ranks.last().is_some_and(|&r| r > gamma)
    {
        return Err(Error::MalformedTrace(format!(
            "ranks {ranks:?} are not an increasing subset of 1..={gamma}"
        )));
    }
    let base = 1 + m.sorter_cycles;
    Ok(match hw {
        1 => base + 1,
        2 => base + 2,
        _ => {
            let earlier: u64 = (3..hw).map(|h| m.composite_steps(h)).sum();
            let anchor = lex_rank(&ranks[..hw - 2], gamma - 2) as u64;
            base + 2 + earlier + anchor + 1
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AverageLatency {
    pub mean_cycles: f64,
    /// Information bits per second at the given clock.
    pub throughput_bps: f64,
}

pub fn average_cycles(cycles: &[u64], k: usize, f_clk_hz: f64) -> Result<AverageLatency> {
    if cycles.is_empty() {
        return Err(Error::InvalidParameter("no frames to average".into()));
    }
    let mean_cycles = cycles.iter().map(|&c| c as f64).sum::<f64>() / cycles.len() as f64;
    Ok(AverageLatency {
        mean_cycles,
        throughput_bps: throughput_bps(k, mean_cycles, f_clk_hz),
    })
}

/// `k·f_clk / cycles`.
pub fn throughput_bps(k: usize, cycles: f64, f_clk_hz: f64) -> f64 {
    k as f64 * f_clk_hz / cycles
}

pub fn latency_ns(cycles: f64, f_clk_hz: f64) -> f64 {
    cycles / f_clk_hz * 1e9
}
