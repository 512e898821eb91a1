//! BPSK over AWGN, LLR computation, fixed-point quantization and hard
//! decisions.
//!
//! Bit 0 maps to `+1` and bit 1 to `−1`, so a positive LLR favours 0.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::gf2::BitWord;
use crate::{Error, Result};

/// Fractional bits of the fixed-point LLR format.
pub const LLR_FRACTIONAL_BITS: u32 = 3;
/// Default total LLR width: sign, one integer bit, three fractional bits.
pub const LLR_BITS: u32 = 5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelConfig {
    pub ebn0_db: f64,
    pub rate: f64,
    pub sigma: f64,
    pub seed: u64,
}

impl ChannelConfig {
    /// `σ = sqrt(1 / (2·R·10^(Eb/N0 / 10)))` for unit-energy symbols.
    pub fn new(ebn0_db: f64, rate: f64, seed: u64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "code rate {rate} outside (0, 1]"
            )));
        }
        if !ebn0_db.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Eb/N0 {ebn0_db} dB is not finite"
            )));
        }
        Ok(Self {
            ebn0_db,
            rate,
            sigma: noise_sigma(ebn0_db, rate),
            seed,
        })
    }

    /// Independent random stream for frame `index`. The stream depends only
    /// on `(seed, index)`, never on how frames are scheduled.
    pub fn frame_rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }
}

pub fn noise_sigma(ebn0_db: f64, rate: f64) -> f64 {
    let ebn0 = 10f64.powf(ebn0_db / 10.0);
    (1.0 / (2.0 * rate * ebn0)).sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SoftVector {
    pub llr: Vec<f64>,
    pub quantized: bool,
}

impl SoftVector {
    pub fn new(llr: Vec<f64>) -> Self {
        Self {
            llr,
            quantized: false,
        }
    }

    pub fn len(&self) -> usize {
        self.llr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.llr.is_empty()
    }
}

/// Modulates `c`, adds `N(0, σ²)` noise and returns `llr_i = 2·y_i/σ²`.
pub fn transmit(c: &BitWord, cfg: &ChannelConfig, rng: &mut impl Rng) -> SoftVector {
    let var = cfg.sigma * cfg.sigma;
    let llr = (0..c.len())
        .map(|i| {
            let x = if c.get(i) { -1.0 } else { 1.0 };
            let noise: f64 = rng.sample(StandardNormal);
            2.0 * (x + cfg.sigma * noise) / var
        })
        .collect();
    SoftVector::new(llr)
}

/// Sign-magnitude fixed point with three fractional bits: values saturate at
/// `±(2^(bits−1) − 1)/8` and round half away from zero to multiples of 1/8.
pub fn quantize(v: &SoftVector, bits: u32) -> Result<SoftVector> {
    if !(LLR_FRACTIONAL_BITS + 1..=32).contains(&bits) {
        return Err(Error::InvalidParameter(format!(
            "quantizer width {bits} must cover the sign and {LLR_FRACTIONAL_BITS} fractional bits"
        )));
    }
    let step = 1.0 / f64::from(1u32 << LLR_FRACTIONAL_BITS);
    let max_level = ((1u64 << (bits - 1)) - 1) as f64;
    let llr = v
        .llr
        .iter()
        .map(|&x| (x / step).round().clamp(-max_level, max_level) * step)
        .collect();
    Ok(SoftVector {
        llr,
        quantized: true,
    })
}

/// Hard decision: 1 iff the LLR is negative. Zero maps to 0.
pub fn harden(v: &SoftVector) -> BitWord {
    let mut w = BitWord::zeros(v.len());
    for (i, &l) in v.llr.iter().enumerate() {
        if l < 0.0 {
            w.set(i, true);
        }
    }
    w
}
