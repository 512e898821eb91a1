//! Test error pattern (TEP) generation.
//!
//! Patterns are sets of 1-based reliability ranks (rank 1 is the least
//! reliable position of the frame). Generators produce them lazily in
//! *blocks*: a fixed prefix of ranks plus a contiguous range for the last
//! rank. Lexicographic streams have long blocks, which lets the decoder scan
//! a whole block against the column-syndrome table in one tight loop while
//! keeping the exact one-pattern-at-a-time query order.

mod logistic;
mod schedule;
mod subsets;

use std::ops::RangeInclusive;

pub use logistic::{count_logistic_patterns, max_logistic_weight, LogisticSource};
pub use schedule::{build_step_schedule, ScheduleEntry, StepSchedule};
pub use subsets::{lex_rank, SubsetSource};

use crate::channel::SoftVector;
use crate::gf2::BitWord;
use crate::{Error, Result};

/// A test error pattern: strictly increasing 1-based reliability ranks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tep {
    ranks: Vec<usize>,
}

impl Tep {
    pub fn new(ranks: Vec<usize>) -> Result<Self> {
        if ranks.first() == Some(&0) || ranks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!(
                "ranks {ranks:?} are not strictly increasing 1-based indices"
            )));
        }
        Ok(Self { ranks })
    }

    pub fn empty() -> Self {
        Self { ranks: Vec::new() }
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn weight(&self) -> usize {
        self.ranks.len()
    }

    /// Sum of the ranks.
    pub fn logistic_weight(&self) -> usize {
        self.ranks.iter().sum()
    }
}

/// Patterns `prefix ∪ {r}` for each `r` in `last`, in increasing `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TepBlock<'a> {
    pub prefix: &'a [usize],
    pub last: RangeInclusive<usize>,
}

impl TepBlock<'_> {
    pub fn weight(&self) -> usize {
        self.prefix.len() + 1
    }
}

/// A resettable, lazily evaluated stream of pattern blocks.
pub trait PatternSource {
    /// The next nonempty block, or `None` when the stream is exhausted.
    fn next_block(&mut self) -> Option<TepBlock<'_>>;

    /// Rewinds to the start of the stream.
    fn reset(&mut self);

    /// Flattens the stream into individual patterns.
    fn into_teps(self) -> Teps<Self>
    where
        Self: Sized,
    {
        Teps::new(self)
    }
}

impl<S: PatternSource + ?Sized> PatternSource for &mut S {
    fn next_block(&mut self) -> Option<TepBlock<'_>> {
        (**self).next_block()
    }

    fn reset(&mut self) {
        (**self).reset()
    }
}

impl<S: PatternSource + ?Sized> PatternSource for Box<S> {
    fn next_block(&mut self) -> Option<TepBlock<'_>> {
        (**self).next_block()
    }

    fn reset(&mut self) {
        (**self).reset()
    }
}

/// Iterator over the patterns of a [`PatternSource`].
#[derive(Debug)]
pub struct Teps<S> {
    source: S,
    prefix: Vec<usize>,
    next_last: usize,
    end: usize,
}

impl<S: PatternSource> Teps<S> {
    fn new(source: S) -> Self {
        Self {
            source,
            prefix: Vec::new(),
            next_last: 1,
            end: 0,
        }
    }
}

impl<S: PatternSource> Iterator for Teps<S> {
    type Item = Tep;

    fn next(&mut self) -> Option<Tep> {
        while self.next_last > self.end {
            let block = self.source.next_block()?;
            self.prefix.clear();
            self.prefix.extend_from_slice(block.prefix);
            self.next_last = *block.last.start();
            self.end = *block.last.end();
        }
        let mut ranks = Vec::with_capacity(self.prefix.len() + 1);
        ranks.extend_from_slice(&self.prefix);
        ranks.push(self.next_last);
        self.next_last += 1;
        Some(Tep { ranks })
    }
}

/// Step-GRAND order: for each `(γ, HW)` entry, every HW-subset of ranks
/// `1..=γ` in lexicographic order.
pub fn step_grand_teps(schedule: &StepSchedule) -> Teps<SubsetSource> {
    SubsetSource::step(schedule).into_teps()
}

/// GRANDAB order: every pattern of weight 1, then 2, … up to `ab` over all
/// `n` positions.
pub fn grandab_teps(n: usize, ab: usize) -> Result<Teps<SubsetSource>> {
    Ok(SubsetSource::grandab(n, ab)?.into_teps())
}

/// ORBGRAND order: increasing logistic weight up to `lw_max`, at most
/// `p_max` flipped bits.
pub fn orbgrand_teps(n: usize, lw_max: usize, p_max: usize) -> Result<Teps<LogisticSource>> {
    Ok(LogisticSource::new(n, lw_max, p_max)?.into_teps())
}

/// Positions ordered by increasing `|LLR|`.
#[derive(Clone, Debug, PartialEq)]
pub struct SortedReliability {
    /// `perm[r - 1]` is the 0-based channel position of rank `r`.
    pub perm: Vec<usize>,
    pub abs_llr_sorted: Vec<f64>,
}

impl SortedReliability {
    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            abs_llr_sorted: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Channel position of 1-based rank `r`.
    #[inline]
    pub fn position(&self, r: usize) -> usize {
        self.perm[r - 1]
    }
}

/// Stable ascending sort of positions by `|LLR|`; ties keep channel order.
pub fn sort_reliability(v: &SoftVector) -> SortedReliability {
    let mut perm: Vec<usize> = (0..v.len()).collect();
    perm.sort_by(|&a, &b| v.llr[a].abs().total_cmp(&v.llr[b].abs()));
    let abs_llr_sorted = perm.iter().map(|&p| v.llr[p].abs()).collect();
    SortedReliability {
        perm,
        abs_llr_sorted,
    }
}

/// The length-`n` error vector with ones at the positions of `t`'s ranks.
pub fn map_ranks(t: &Tep, s: &SortedReliability, n: usize) -> Result<BitWord> {
    if s.len() != n {
        return Err(Error::Dimension(format!(
            "permutation has length {}, expected {n}",
            s.len()
        )));
    }
    let mut e = BitWord::zeros(n);
    for &r in t.ranks() {
        if r == 0 || r > n {
            return Err(Error::InvalidParameter(format!("rank {r} outside 1..={n}")));
        }
        e.set(s.position(r), true);
    }
    Ok(e)
}
