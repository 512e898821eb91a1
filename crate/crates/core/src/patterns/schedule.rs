//! The step-GRAND subset schedule.
//!
//! With `α` segments, step size `β` and maximum weight `P` (α | P), segment
//! `i` starts at subset size `γ = T(α−i+1)·(P/α)·β`, where `T(m) = m(m+1)/2`,
//! and shrinks by `(α−i+1)·β` between its `P/α` successive Hamming weights.

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ScheduleEntry {
    /// Number of least reliable positions the weight is restricted to.
    pub gamma: usize,
    pub hw: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StepSchedule {
    alpha: usize,
    beta: usize,
    p_max: usize,
    entries: Vec<ScheduleEntry>,
}

impl StepSchedule {
    pub fn new(alpha: usize, beta: usize, p_max: usize) -> Result<Self> {
        if alpha == 0 || beta == 0 || p_max == 0 {
            return Err(Error::InvalidParameter(format!(
                "alpha, beta and p_max must be ≥ 1 (got {alpha}, {beta}, {p_max})"
            )));
        }
        if !p_max.is_multiple_of(alpha) {
            return Err(Error::InvalidParameter(format!(
                "alpha = {alpha} does not divide p_max = {p_max}"
            )));
        }
        let per_segment = p_max / alpha;
        let mut entries = Vec::with_capacity(p_max);
        let mut hw = 1;
        for seg in 1..=alpha {
            let m = alpha - seg + 1;
            let mut gamma = m * (m + 1) / 2 * per_segment * beta;
            for _ in 0..per_segment {
                entries.push(ScheduleEntry { gamma, hw });
                hw += 1;
                gamma -= m * beta;
            }
        }
        let s = Self {
            alpha,
            beta,
            p_max,
            entries,
        };
        s.validate()?;
        Ok(s)
    }

    /// A schedule with explicit entries, used for ad-hoc subsets. `alpha`
    /// and `beta` are reported as 0.
    pub fn from_entries(entries: Vec<ScheduleEntry>) -> Result<Self> {
        let s = Self {
            alpha: 0,
            beta: 0,
            p_max: entries.len(),
            entries,
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        for (i, e) in self.entries.iter().enumerate() {
            if e.hw != i + 1 {
                return Err(Error::InvalidParameter(format!(
                    "schedule entry {i} has weight {}, expected {}",
                    e.hw,
                    i + 1
                )));
            }
            if e.gamma < e.hw {
                return Err(Error::InvalidParameter(format!(
                    "subset size {} is smaller than its Hamming weight {}",
                    e.gamma, e.hw
                )));
            }
        }
        if self.entries.windows(2).any(|w| w[1].gamma >= w[0].gamma) {
            return Err(Error::InvalidParameter(
                "subset sizes must be strictly decreasing".into(),
            ));
        }
        Ok(())
    }

    /// Fails when the largest subset does not fit in a length-`n` code.
    pub fn check_length(&self, n: usize) -> Result<()> {
        match self.entries.first() {
            Some(e) if e.gamma > n => Err(Error::InvalidParameter(format!(
                "first subset size {} exceeds code length {n}",
                e.gamma
            ))),
            _ => Ok(()),
        }
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn p_max(&self) -> usize {
        self.p_max
    }

    pub fn entries(&self) -> &[ScheduleEntry] {
        &self.entries
    }

    /// Subset size for Hamming weight `hw`, if scheduled.
    pub fn gamma(&self, hw: usize) -> Option<usize> {
        hw.checked_sub(1)
            .and_then(|i| self.entries.get(i))
            .map(|e| e.gamma)
    }

    /// `Σ C(γ_hw, hw)`: patterns tested when nothing matches.
    pub fn pattern_count(&self) -> u128 {
        self.entries
            .iter()
            .map(|e| num_integer::binomial(e.gamma as u128, e.hw as u128))
            .sum()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.entries.iter().map(|e| (e.gamma, e.hw)).collect()
    }
}

pub fn build_step_schedule(alpha: usize, beta: usize, p_max: usize) -> Result<StepSchedule> {
    StepSchedule::new(alpha, beta, p_max)
}
