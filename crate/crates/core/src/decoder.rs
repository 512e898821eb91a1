//! The GRAND engine.
//!
//! A frame is hardened to `ŷ`. If `H·ŷᵀ = 0` the decoder stops after one
//! query. Otherwise patterns are taken from a [`PatternSource`] in order,
//! ranks mapped to channel positions through the reliability permutation,
//! and the first `e` with `H·(ŷ ⊕ e)ᵀ = 0` wins.
//!
//! Pattern syndromes are built by linearity: `s(e) = s_c ⊕ σ[r₁] ⊕ … ⊕ σ[r_w]`
//! where `σ[r]` is the column of `H` at the position of rank `r`. Within a
//! block only the last rank varies, so the block reduces to a search for the
//! partial syndrome in a contiguous slice of the table.

use crate::channel::{harden, SoftVector};
use crate::codes::LinearCode;
use crate::gf2::{words_for, BitWord};
use crate::hwmodel::LatencyModel;
use crate::patterns::{
    count_logistic_patterns, max_logistic_weight, sort_reliability, LogisticSource, PatternSource,
    SortedReliability, StepSchedule, SubsetSource, Tep, TepBlock,
};
use crate::{Error, Result};

/// Where a decode stopped.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DecodeTrace {
    /// `ŷ` was already a codeword.
    Initial,
    /// Success with the pattern of these 1-based reliability ranks.
    Hit { ranks: Vec<usize> },
    /// The stream ran out.
    Exhausted,
}

impl DecodeTrace {
    /// Hamming weight of the winning pattern (0 for the initial check).
    pub fn weight(&self) -> Option<usize> {
        match self {
            DecodeTrace::Initial => Some(0),
            DecodeTrace::Hit { ranks } => Some(ranks.len()),
            DecodeTrace::Exhausted => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub message: Option<BitWord>,
    pub codeword: Option<BitWord>,
    /// The accepted noise pattern; all zeros on abandonment.
    pub noise_guess: BitWord,
    /// Membership tests performed, including the initial `ŷ` test.
    pub queries: u64,
    pub abandoned: bool,
    /// Modeled hardware cycles, when a latency model applies.
    pub cycles: Option<u64>,
    pub trace: DecodeTrace,
}

/// `σ[r] = H·𝟙_{perm[r]}ᵀ` for `r = 1..=n`, packed `words` u64 per entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyndromeTable {
    n: usize,
    words: usize,
    data: Vec<u64>,
}

impl SyndromeTable {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Words per syndrome.
    pub fn words(&self) -> usize {
        self.words
    }

    /// Syndrome of the unit pattern at 1-based rank `r`.
    pub fn column(&self, r: usize) -> &[u64] {
        &self.data[(r - 1) * self.words..r * self.words]
    }

    /// `s_c ⊕ XOR of σ[r]` over the ranks of `t`.
    pub fn pattern_syndrome(&self, s_c: &BitWord, t: &Tep) -> BitWord {
        let mut acc = s_c.words().to_vec();
        for &r in t.ranks() {
            xor_into(&mut acc, self.column(r));
        }
        BitWord::from_words(s_c.len(), acc)
    }
}

/// Column syndromes of `H` in channel order, one packed entry per position.
#[derive(Clone, Debug)]
struct Columns {
    words: usize,
    data: Vec<u64>,
}

impl Columns {
    fn new(code: &LinearCode) -> Self {
        let ht = code.parity_check().transpose();
        let words = words_for(ht.cols());
        let mut data = Vec::with_capacity(ht.rows() * words);
        for pos in 0..ht.rows() {
            data.extend_from_slice(ht.row_words(pos));
        }
        Self { words, data }
    }

    fn permuted_into(&self, perm: &[usize], out: &mut Vec<u64>) {
        out.clear();
        for &p in perm {
            out.extend_from_slice(&self.data[p * self.words..(p + 1) * self.words]);
        }
    }
}

pub fn syndrome_precompute(code: &LinearCode, perm: &SortedReliability) -> Result<SyndromeTable> {
    let n = code.n();
    if perm.len() != n {
        return Err(Error::Dimension(format!(
            "permutation has length {}, code length is {n}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in &perm.perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidParameter(format!(
                "{:?} is not a permutation of 0..{n}",
                perm.perm
            )));
        }
    }
    let cols = Columns::new(code);
    let mut data = Vec::new();
    cols.permuted_into(&perm.perm, &mut data);
    Ok(SyndromeTable {
        n,
        words: cols.words,
        data,
    })
}

#[inline]
fn xor_into(acc: &mut [u64], x: &[u64]) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a ^= b;
    }
}

/// First `r` in the block's range whose table entry equals `target`.
#[inline]
fn scan_block(table: &[u64], words: usize, target: &[u64], block: &TepBlock<'_>) -> Option<usize> {
    let (lo, hi) = (*block.last.start(), *block.last.end());
    let slice = &table[(lo - 1) * words..hi * words];
    let offset = if words == 1 {
        let t = target[0];
        slice.iter().position(|&x| x == t)
    } else {
        slice.chunks_exact(words).position(|c| c == target)
    };
    offset.map(|i| lo + i)
}

fn check_length(v: &SoftVector, code: &LinearCode) -> Result<()> {
    if v.len() != code.n() {
        return Err(Error::Dimension(format!(
            "received vector has length {}, code length is {}",
            v.len(),
            code.n()
        )));
    }
    Ok(())
}

fn reliability(v: &SoftVector, uses_sorting: bool) -> SortedReliability {
    if uses_sorting {
        sort_reliability(v)
    } else {
        SortedReliability::identity(v.len())
    }
}

fn finish(
    code: &LinearCode,
    y: BitWord,
    perm: Option<&SortedReliability>,
    ranks: Option<Vec<usize>>,
    queries: u64,
) -> Result<DecodeResult> {
    let n = code.n();
    let mut e = BitWord::zeros(n);
    let trace = match (ranks, perm) {
        (Some(ranks), Some(perm)) => {
            for &r in &ranks {
                e.set(perm.position(r), true);
            }
            DecodeTrace::Hit { ranks }
        }
        (Some(_), None) => unreachable!("a hit always has a permutation"),
        (None, Some(_)) => {
            return Ok(DecodeResult {
                message: None,
                codeword: None,
                noise_guess: e,
                queries,
                abandoned: true,
                cycles: None,
                trace: DecodeTrace::Exhausted,
            })
        }
        (None, None) => DecodeTrace::Initial,
    };
    let mut c = y;
    c ^= &e;
    let message = code.unencode(&c)?;
    Ok(DecodeResult {
        message: Some(message),
        codeword: Some(c),
        noise_guess: e,
        queries,
        abandoned: false,
        cycles: None,
        trace,
    })
}

/// Block-scanning search over `source` against a permuted column table.
fn search<S: PatternSource + ?Sized>(
    source: &mut S,
    table: &[u64],
    n: usize,
    words: usize,
    s_c: &[u64],
    partial: &mut Vec<u64>,
) -> Result<(u64, Option<Vec<usize>>)> {
    let mut queries = 1u64;
    source.reset();
    while let Some(block) = source.next_block() {
        check_block_ranks(&block, n)?;
        partial.clear();
        partial.extend_from_slice(s_c);
        for &r in block.prefix {
            xor_into(partial, &table[(r - 1) * words..r * words]);
        }
        let (lo, hi) = (*block.last.start(), *block.last.end());
        match scan_block(table, words, partial, &block) {
            Some(r) => {
                queries += (r - lo + 1) as u64;
                let mut ranks = block.prefix.to_vec();
                ranks.push(r);
                return Ok((queries, Some(ranks)));
            }
            None => queries += (hi - lo + 1) as u64,
        }
    }
    Ok((queries, None))
}

fn check_block_ranks(block: &TepBlock<'_>, n: usize) -> Result<()> {
    if *block.last.end() > n {
        return Err(Error::InvalidParameter(format!(
            "pattern rank {} exceeds code length {n}",
            block.last.end()
        )));
    }
    Ok(())
}

/// Decodes one frame with patterns from `teps`, which is reset first.
pub fn decode<S: PatternSource + ?Sized>(
    v: &SoftVector,
    code: &LinearCode,
    teps: &mut S,
    uses_sorting: bool,
) -> Result<DecodeResult> {
    check_length(v, code)?;
    let mut columns = Vec::new();
    decode_with(
        v,
        code,
        &Columns::new(code),
        teps,
        uses_sorting,
        &mut columns,
    )
}

fn decode_with<S: PatternSource + ?Sized>(
    v: &SoftVector,
    code: &LinearCode,
    cols: &Columns,
    teps: &mut S,
    uses_sorting: bool,
    table: &mut Vec<u64>,
) -> Result<DecodeResult> {
    let y = harden(v);
    let s_c = code.syndrome(&y)?;
    if s_c.is_zero() {
        return finish(code, y, None, None, 1);
    }
    let perm = reliability(v, uses_sorting);
    cols.permuted_into(&perm.perm, table);
    let mut partial = Vec::with_capacity(cols.words);
    let (queries, ranks) = search(teps, table, code.n(), cols.words, s_c.words(), &mut partial)?;
    finish(code, y, Some(&perm), ranks, queries)
}

/// Reference decoder: one explicit `H·(ŷ ⊕ e)ᵀ` product per pattern.
pub fn decode_direct<I: IntoIterator<Item = Tep>>(
    v: &SoftVector,
    code: &LinearCode,
    teps: I,
    uses_sorting: bool,
) -> Result<DecodeResult> {
    check_length(v, code)?;
    let y = harden(v);
    let h = code.parity_check();
    if h.mat_vec(&y)?.is_zero() {
        return finish(code, y, None, None, 1);
    }
    let perm = reliability(v, uses_sorting);
    let mut queries = 1u64;
    for t in teps {
        queries += 1;
        let mut trial = y.clone();
        for &r in t.ranks() {
            if r == 0 || r > code.n() {
                return Err(Error::InvalidParameter(format!(
                    "pattern rank {r} outside 1..={}",
                    code.n()
                )));
            }
            trial.flip(perm.position(r));
        }
        if h.mat_vec(&trial)?.is_zero() {
            return finish(code, y, Some(&perm), Some(t.ranks().to_vec()), queries);
        }
    }
    finish(code, y, Some(&perm), None, queries)
}

/// A pattern order and its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    GrandAb { ab: usize },
    OrbGrand { lw_max: usize, p_max: usize },
    StepGrand(StepSchedule),
}

impl Variant {
    pub fn step(alpha: usize, beta: usize, p_max: usize) -> Result<Self> {
        Ok(Variant::StepGrand(StepSchedule::new(alpha, beta, p_max)?))
    }

    /// Soft-input variants sort reliabilities; GRANDAB works on hard bits.
    pub fn uses_sorting(&self) -> bool {
        !matches!(self, Variant::GrandAb { .. })
    }

    pub fn label(&self) -> String {
        match self {
            Variant::GrandAb { ab } => format!("grandab:ab={ab}"),
            Variant::OrbGrand { lw_max, p_max } => format!("orbgrand:lwmax={lw_max}:pmax={p_max}"),
            Variant::StepGrand(s) => format!(
                "stepgrand:alpha={}:beta={}:pmax={}",
                s.alpha(),
                s.beta(),
                s.p_max()
            ),
        }
    }

    /// Checks the parameters against code length `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            Variant::GrandAb { ab } if *ab > n => Err(Error::InvalidParameter(format!(
                "abandonment weight {ab} exceeds code length {n}"
            ))),
            Variant::OrbGrand { lw_max, .. } if *lw_max > max_logistic_weight(n) => {
                Err(Error::InvalidParameter(format!(
                    "maximum logistic weight {lw_max} exceeds {} for length {n}",
                    max_logistic_weight(n)
                )))
            }
            Variant::StepGrand(s) => s.check_length(n),
            _ => Ok(()),
        }
    }

    pub fn source(&self, n: usize) -> Result<VariantSource> {
        self.validate(n)?;
        Ok(match self {
            Variant::GrandAb { ab } => VariantSource::Subset(SubsetSource::grandab(n, *ab)?),
            Variant::OrbGrand { lw_max, p_max } => {
                VariantSource::Logistic(LogisticSource::new(n, *lw_max, *p_max)?)
            }
            Variant::StepGrand(s) => VariantSource::Subset(SubsetSource::step(s)),
        })
    }
}

/// Pattern queries when nothing matches, excluding the initial `ŷ` test.
pub fn worst_case_queries(variant: &Variant, n: usize) -> u128 {
    match variant {
        Variant::GrandAb { ab } => (1..=*ab.min(&n))
            .map(|w| num_integer::binomial(n as u128, w as u128))
            .sum(),
        Variant::OrbGrand { lw_max, p_max } => {
            count_logistic_patterns(n, (*lw_max).min(max_logistic_weight(n)), *p_max)
        }
        Variant::StepGrand(s) => s.pattern_count(),
    }
}

/// The pattern stream of a [`Variant`].
#[derive(Clone, Debug)]
pub enum VariantSource {
    Subset(SubsetSource),
    Logistic(LogisticSource),
}

impl PatternSource for VariantSource {
    fn next_block(&mut self) -> Option<TepBlock<'_>> {
        match self {
            VariantSource::Subset(s) => s.next_block(),
            VariantSource::Logistic(s) => s.next_block(),
        }
    }

    fn reset(&mut self) {
        match self {
            VariantSource::Subset(s) => s.reset(),
            VariantSource::Logistic(s) => s.reset(),
        }
    }
}

/// A reusable decoder for one code and variant. Not shared across threads;
/// clone one per worker.
#[derive(Clone, Debug)]
pub struct Decoder<'c> {
    code: &'c LinearCode,
    variant: Variant,
    source: VariantSource,
    columns: Columns,
    latency: Option<LatencyModel>,
    table: Vec<u64>,
}

impl<'c> Decoder<'c> {
    pub fn new(code: &'c LinearCode, variant: Variant) -> Result<Self> {
        let source = variant.source(code.n())?;
        let latency = match &variant {
            Variant::StepGrand(s) => Some(LatencyModel::padded(code.n(), s.clone())?),
            _ => None,
        };
        Ok(Self {
            code,
            variant,
            source,
            columns: Columns::new(code),
            latency,
            table: Vec::new(),
        })
    }

    pub fn code(&self) -> &'c LinearCode {
        self.code
    }

    pub fn variant(&self) -> &Variant {
        &self.variant
    }

    pub fn latency_model(&self) -> Option<&LatencyModel> {
        self.latency.as_ref()
    }

    pub fn worst_case_queries(&self) -> u128 {
        worst_case_queries(&self.variant, self.code.n())
    }

    pub fn decode(&mut self, v: &SoftVector) -> Result<DecodeResult> {
        check_length(v, self.code)?;
        let mut r = decode_with(
            v,
            self.code,
            &self.columns,
            &mut self.source,
            self.variant.uses_sorting(),
            &mut self.table,
        )?;
        if let Some(m) = &self.latency {
            r.cycles = Some(m.frame_cycles(&r.trace)?);
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::build_bch;
    use crate::gf2::BitMatrix;

    fn hamming() -> LinearCode {
        let h = BitMatrix::from_bit_rows(&[
            &[1, 1, 0, 1, 1, 0, 0],
            &[1, 0, 1, 1, 0, 1, 0],
            &[0, 1, 1, 1, 0, 0, 1],
        ])
        .unwrap();
        LinearCode::from_parity_check(h, "hamming").unwrap()
    }

    fn soft(bits: &BitWord, weak: &[usize]) -> SoftVector {
        SoftVector::new(
            (0..bits.len())
                .map(|i| {
                    let m = if weak.contains(&i) { 0.1 } else { 3.0 };
                    if bits.get(i) {
                        -m
                    } else {
                        m
                    }
                })
                .collect(),
        )
    }

    #[test]
    fn noiseless_frame_stops_at_first_query() {
        let code = hamming();
        let u = BitWord::from_str_bits("1011").unwrap();
        let c = code.encode(&u).unwrap();
        let mut d = Decoder::new(&code, Variant::GrandAb { ab: 2 }).unwrap();
        let r = d.decode(&soft(&c, &[])).unwrap();
        assert_eq!(r.queries, 1);
        assert_eq!(r.message, Some(u));
        assert_eq!(r.trace, DecodeTrace::Initial);
    }

    #[test]
    fn weakest_bit_flip_found_first() {
        let code = build_bch(7, 3).unwrap();
        let s = StepSchedule::new(2, 6, 6).unwrap();
        let u = BitWord::from_bits(
            &(0..code.k())
                .map(|i| (i % 3 == 1) as u8)
                .collect::<Vec<_>>(),
        );
        let c = code.encode(&u).unwrap();
        let mut y = c.clone();
        y.flip(40);
        let mut weak = soft(&y, &[40]);
        weak.llr[40] *= 0.5;
        let mut d = Decoder::new(&code, Variant::StepGrand(s.clone())).unwrap();
        let r = d.decode(&weak).unwrap();
        assert_eq!(r.codeword.as_ref(), Some(&c));
        assert_eq!(r.queries, 2);
        assert!(r.queries <= 1 + s.gamma(1).unwrap() as u64);
        assert_eq!(r.cycles, Some(9));
    }

    #[test]
    fn table_syndrome_matches_mat_vec() {
        use rand::{Rng, SeedableRng};
        let code = build_bch(7, 3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let perm = SortedReliability::identity(code.n());
        let table = syndrome_precompute(&code, &perm).unwrap();
        let zero = BitWord::zeros(code.n() - code.k());
        for _ in 0..1000 {
            let mut ranks: Vec<usize> = (1..=code.n()).filter(|_| rng.random_bool(0.05)).collect();
            ranks.dedup();
            let t = Tep::new(ranks).unwrap();
            let mut e = BitWord::zeros(code.n());
            for &r in t.ranks() {
                e.set(r - 1, true);
            }
            assert_eq!(
                table.pattern_syndrome(&zero, &t),
                code.syndrome(&e).unwrap()
            );
        }
        assert_eq!(table.pattern_syndrome(&zero, &Tep::empty()), zero);
    }

    #[test]
    fn identity_parity_check_gives_unit_columns() {
        let id = BitMatrix::identity(5);
        let h = BitMatrix::from_rows(&[id.row(0), id.row(1), id.row(2), id.row(3)]).unwrap();
        let code = LinearCode::from_parity_check(h, "t").unwrap();
        let table = syndrome_precompute(&code, &SortedReliability::identity(5)).unwrap();
        for r in 1..=4 {
            assert_eq!(table.column(r), BitWord::unit(4, r - 1).words());
        }
        assert_eq!(table.column(5), &[0]);
    }

    #[test]
    fn bad_permutation_is_rejected() {
        let code = hamming();
        let bad = SortedReliability {
            perm: vec![0, 1, 2, 3, 4, 5, 5],
            abs_llr_sorted: Vec::new(),
        };
        assert!(syndrome_precompute(&code, &bad).is_err());
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let code = hamming();
        let mut d = Decoder::new(&code, Variant::GrandAb { ab: 1 }).unwrap();
        assert!(matches!(
            d.decode(&SoftVector::new(vec![1.0; 6])),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn abandonment_reports_exhaustion() {
        // d = 5, so three errors stay at distance ≥ 2 from every codeword
        let code = build_bch(5, 2).unwrap();
        let mut y = BitWord::zeros(code.n());
        for i in [0, 1, 2] {
            y.flip(i);
        }
        let mut d = Decoder::new(&code, Variant::GrandAb { ab: 1 }).unwrap();
        let r = d.decode(&soft(&y, &[])).unwrap();
        assert!(r.abandoned);
        assert_eq!(r.queries, 1 + code.n() as u64);
        assert_eq!(r.trace, DecodeTrace::Exhausted);
        assert!(r.noise_guess.is_zero());
        assert_eq!(r.message, None);
    }

    #[test]
    fn worst_case_query_counts() {
        assert_eq!(
            worst_case_queries(&Variant::step(2, 6, 6).unwrap(), 128),
            8828
        );
        assert_eq!(
            worst_case_queries(&Variant::step(2, 7, 6).unwrap(), 127),
            15778
        );
        assert_eq!(
            worst_case_queries(&Variant::GrandAb { ab: 3 }, 128),
            349_632
        );
    }

    #[test]
    fn invalid_variants_for_length() {
        let code = hamming();
        assert!(Decoder::new(&code, Variant::GrandAb { ab: 8 }).is_err());
        assert!(Decoder::new(
            &code,
            Variant::OrbGrand {
                lw_max: 29,
                p_max: 3
            }
        )
        .is_err());
        assert!(Decoder::new(&code, Variant::step(2, 6, 6).unwrap()).is_err());
    }
}
