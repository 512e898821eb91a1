//! Weight-ordered subset streams (step-GRAND and GRANDAB).
//!
//! For a `(γ, w)` entry the stream visits every `w`-subset of `1..=γ` in
//! lexicographic order. The lowest `w − 2` ranks change slowest, which is
//! the order in which the hardware steps its composite syndromes.

use super::{PatternSource, StepSchedule, TepBlock};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct SubsetSource {
    /// `(universe, weight)` per stage.
    stages: Vec<(usize, usize)>,
    stage: usize,
    prefix: Vec<usize>,
    fresh: bool,
}

impl SubsetSource {
    pub fn new(stages: Vec<(usize, usize)>) -> Self {
        Self {
            stages,
            stage: 0,
            prefix: Vec::new(),
            fresh: true,
        }
    }

    pub fn step(schedule: &StepSchedule) -> Self {
        Self::new(schedule.entries().iter().map(|e| (e.gamma, e.hw)).collect())
    }

    pub fn grandab(n: usize, ab: usize) -> Result<Self> {
        if ab > n {
            return Err(Error::InvalidParameter(format!(
                "abandonment weight {ab} exceeds length {n}"
            )));
        }
        Ok(Self::new((1..=ab).map(|w| (n, w)).collect()))
    }

    /// Moves the prefix to its lexicographic successor among
    /// `(w−1)`-subsets of `1..=universe−1`. Returns false when exhausted.
    fn advance_prefix(&mut self, universe: usize) -> bool {
        let len = self.prefix.len();
        let top = universe - 1;
        for i in (0..len).rev() {
            // largest legal value at slot i
            if self.prefix[i] < top - (len - 1 - i) {
                self.prefix[i] += 1;
                for j in i + 1..len {
                    self.prefix[j] = self.prefix[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
}

impl PatternSource for SubsetSource {
    fn next_block(&mut self) -> Option<TepBlock<'_>> {
        loop {
            let &(universe, w) = self.stages.get(self.stage)?;
            if w == 0 || w > universe {
                self.stage += 1;
                self.fresh = true;
                continue;
            }
            if self.fresh {
                self.fresh = false;
                self.prefix.clear();
                self.prefix.extend(1..w);
            } else if w == 1 || !self.advance_prefix(universe) {
                self.stage += 1;
                self.fresh = true;
                continue;
            }
            let lo = self.prefix.last().map_or(1, |&p| p + 1);
            return Some(TepBlock {
                prefix: &self.prefix,
                last: lo..=universe,
            });
        }
    }

    fn reset(&mut self) {
        self.stage = 0;
        self.prefix.clear();
        self.fresh = true;
    }
}

/// 0-based position of `combo` among the `combo.len()`-subsets of
/// `1..=universe` in lexicographic order.
pub fn lex_rank(combo: &[usize], universe: usize) -> u128 {
    let m = combo.len();
    let mut rank = 0u128;
    let mut prev = 0;
    for (i, &c) in combo.iter().enumerate() {
        let remaining = (m - i - 1) as u128;
        for v in prev + 1..c {
            rank += num_integer::binomial((universe - v) as u128, remaining);
        }
        prev = c;
    }
    rank
}
