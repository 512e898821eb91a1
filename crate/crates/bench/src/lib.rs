//! Fixtures shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stepgrand::channel::{transmit, ChannelConfig};
use stepgrand::{BitWord, LinearCode, SoftVector};

/// `count` noisy frames of random messages at `ebn0_db`.
pub fn frames(code: &LinearCode, ebn0_db: f64, count: usize, seed: u64) -> Vec<SoftVector> {
    let ch = ChannelConfig::new(ebn0_db, code.rate(), seed).expect("valid channel");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let u = BitWord::from_bits(
                &(0..code.k())
                    .map(|_| rng.random_range(0..2u8))
                    .collect::<Vec<_>>(),
            );
            transmit(&code.encode(&u).expect("message length"), &ch, &mut rng)
        })
        .collect()
}
