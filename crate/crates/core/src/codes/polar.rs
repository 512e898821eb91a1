//! CRC-aided polar codes folded into a single linear generator.

use super::LinearCode;
use crate::gf2::BitMatrix;
use crate::{Error, Result};

const NR_RELIABILITY: &str = include_str!("../../data/nr_polar_reliability.txt");

/// A CRC generator polynomial. Bit `i` of `polynomial` is the coefficient of
/// `x^i`; the `x^degree` coefficient must be set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrcSpec {
    degree: u32,
    polynomial: u64,
}

impl CrcSpec {
    pub fn new(degree: u32, polynomial: u64) -> Result<Self> {
        if degree > 63 {
            return Err(Error::InvalidParameter(format!(
                "CRC degree {degree} exceeds 63"
            )));
        }
        if polynomial >> degree != 1 {
            return Err(Error::InvalidParameter(format!(
                "CRC polynomial {polynomial:#x} is not monic of degree {degree}"
            )));
        }
        Ok(Self { degree, polynomial })
    }

    /// The empty CRC (`g(x) = 1`): no parity bits appended.
    pub fn none() -> Self {
        Self {
            degree: 0,
            polynomial: 1,
        }
    }

    /// 5G NR CRC11: `x^11 + x^10 + x^9 + x^5 + 1`.
    pub fn nr_crc11() -> Self {
        Self {
            degree: 11,
            polynomial: (1 << 11) | (1 << 10) | (1 << 9) | (1 << 5) | 1,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    pub fn polynomial(&self) -> u64 {
        self.polynomial
    }

    /// Parity bits for `bits`, where `bits[0]` is the highest-degree message
    /// coefficient. The first returned bit is the highest-degree parity bit.
    pub fn parity(&self, bits: &[u8]) -> Vec<u8> {
        let d = self.degree;
        if d == 0 {
            return Vec::new();
        }
        let mask = (1u64 << d) - 1;
        let taps = self.polynomial & mask;
        let mut reg = 0u64;
        for &b in bits {
            let feedback = ((reg >> (d - 1)) & 1) ^ (b as u64 & 1);
            reg = (reg << 1) & mask;
            if feedback == 1 {
                reg ^= taps;
            }
        }
        (0..d).rev().map(|i| ((reg >> i) & 1) as u8).collect()
    }
}

/// In-place polar transform `x = v · F^{⊗log₂ n}` with `F = [[1, 0], [1, 1]]`,
/// natural (non bit-reversed) order.
pub fn polar_transform(bits: &mut [u8]) {
    let n = bits.len();
    assert!(
        n.is_power_of_two(),
        "polar transform length must be a power of two"
    );
    let mut half = 1;
    while half < n {
        for block in (0..n).step_by(2 * half) {
            for i in block..block + half {
                bits[i] ^= bits[i + half];
            }
        }
        half *= 2;
    }
}

/// The 5G NR reliability order restricted to length `n`, 1-based, least
/// reliable position first.
pub fn nr_reliability_sequence(n: usize) -> Result<Vec<usize>> {
    if !n.is_power_of_two() || !(2..=1024).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "reliability sequence length {n} must be a power of two in 2..=1024"
        )));
    }
    Ok(nr_sequence_1024()
        .into_iter()
        .filter(|&p| p < n)
        .map(|p| p + 1)
        .collect())
}

fn nr_sequence_1024() -> Vec<usize> {
    NR_RELIABILITY
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(str::split_whitespace)
        .map(|t| t.parse().expect("bundled reliability sequence is numeric"))
        .collect()
}

/// CRC-aided polar code: `k_info` message bits, then the CRC, placed on the
/// most reliable positions of `reliability` (1-based, ascending reliability)
/// with the remaining positions frozen to zero, then polar transformed.
pub fn build_ca_polar(
    n: usize,
    k_info: usize,
    crc: CrcSpec,
    reliability: &[usize],
) -> Result<LinearCode> {
    if !n.is_power_of_two() || n < 2 {
        return Err(Error::InvalidParameter(format!(
            "polar length {n} must be a power of two ≥ 2"
        )));
    }
    let coded = k_info + crc.degree();
    if k_info == 0 || coded > n {
        return Err(Error::InvalidParameter(format!(
            "need 1 ≤ k_info and k_info + crc degree ≤ n, got {k_info} + {} > {n}",
            crc.degree()
        )));
    }
    if reliability.len() != n {
        return Err(Error::InvalidParameter(format!(
            "reliability sequence has {} entries, expected {n}",
            reliability.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in reliability {
        if p == 0 || p > n || std::mem::replace(&mut seen[p - 1], true) {
            return Err(Error::InvalidParameter(format!(
                "reliability sequence is not a permutation of 1..={n} (entry {p})"
            )));
        }
    }
    let mut info_positions: Vec<usize> = reliability[n - coded..].iter().map(|&p| p - 1).collect();
    info_positions.sort_unstable();

    let mut g = BitMatrix::zeros(k_info, n);
    let mut msg = vec![0u8; k_info];
    let mut u = vec![0u8; n];
    for row in 0..k_info {
        msg.fill(0);
        msg[row] = 1;
        let parity = crc.parity(&msg);
        u.fill(0);
        for (&pos, &b) in info_positions.iter().zip(msg.iter().chain(&parity)) {
            u[pos] = b;
        }
        polar_transform(&mut u);
        for (c, &b) in u.iter().enumerate() {
            if b == 1 {
                g.set(row, c, true);
            }
        }
    }
    let name = if crc.degree() == 0 {
        format!("polar({n},{k_info})")
    } else {
        format!("ca-polar({n},{k_info}+{})", crc.degree())
    };
    LinearCode::from_generator(g, name)
}

/// The CA-polar (128, 105+11) code with the 5G NR sequence and CRC11.
pub fn nr_ca_polar_128() -> Result<LinearCode> {
    build_ca_polar(
        128,
        105,
        CrcSpec::nr_crc11(),
        &nr_reliability_sequence(128)?,
    )
}
