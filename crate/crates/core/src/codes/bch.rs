//! Narrow-sense binary BCH codes.

use std::collections::BTreeSet;

use super::LinearCode;
use crate::gf2::BitMatrix;
use crate::{Error, Result};

/// Primitive polynomials for GF(2^m), m = 3..=16, with bit `i` holding the
/// coefficient of `x^i`.
const PRIMITIVE_POLYS: [u32; 14] = [
    0b1011,      // x^3 + x + 1
    0b1_0011,    // x^4 + x + 1
    0b10_0101,   // x^5 + x^2 + 1
    0b100_0011,  // x^6 + x + 1
    0b1000_1001, // x^7 + x^3 + 1
    0x11d,       // x^8 + x^4 + x^3 + x^2 + 1
    0x211,       // x^9 + x^4 + 1
    0x409,       // x^10 + x^3 + 1
    0x805,       // x^11 + x^2 + 1
    0x1053,      // x^12 + x^6 + x^4 + x + 1
    0x201b,      // x^13 + x^4 + x^3 + x + 1
    0x4443,      // x^14 + x^10 + x^6 + x + 1
    0x8003,      // x^15 + x + 1
    0x1100b,     // x^16 + x^12 + x^3 + x + 1
];

pub fn default_primitive_polynomial(m: u32) -> Option<u32> {
    (3..=16)
        .contains(&m)
        .then(|| PRIMITIVE_POLYS[(m - 3) as usize])
}

/// GF(2^m) built from a primitive polynomial, with exp/log tables.
#[derive(Clone, Debug)]
pub struct Gf2m {
    m: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Gf2m {
    pub fn new(m: u32, primitive: u32) -> Result<Self> {
        if !(2..=16).contains(&m) {
            return Err(Error::InvalidParameter(format!(
                "field degree m = {m} outside 2..=16"
            )));
        }
        if primitive >> m != 1 {
            return Err(Error::InvalidParameter(format!(
                "polynomial {primitive:#x} does not have degree {m}"
            )));
        }
        let order = (1usize << m) - 1;
        let mut exp = vec![0u32; order];
        let mut log = vec![0u32; order + 1];
        let mut x = 1u32;
        for (i, e) in exp.iter_mut().enumerate() {
            if i > 0 && x == 1 {
                return Err(Error::InvalidParameter(format!(
                    "polynomial {primitive:#x} is not primitive over GF(2^{m})"
                )));
            }
            *e = x;
            log[x as usize] = i as u32;
            x <<= 1;
            if x >> m & 1 == 1 {
                x ^= primitive;
            }
        }
        if x != 1 {
            return Err(Error::InvalidParameter(format!(
                "polynomial {primitive:#x} is not primitive over GF(2^{m})"
            )));
        }
        Ok(Self { m, exp, log })
    }

    pub fn order(&self) -> usize {
        self.exp.len()
    }

    /// `α^i` for any integer exponent.
    pub fn alpha_pow(&self, i: usize) -> u32 {
        self.exp[i % self.order()]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] as usize + self.log[b as usize] as usize;
        self.exp[s % self.order()]
    }

    /// Cyclotomic coset of `i` modulo `2^m − 1`.
    pub fn cyclotomic_coset(&self, i: usize) -> BTreeSet<usize> {
        let order = self.order();
        let mut coset = BTreeSet::new();
        let mut c = i % order;
        while coset.insert(c) {
            c = c * 2 % order;
        }
        coset
    }

    /// Minimal polynomial of `α^i` as binary coefficients, index = degree.
    pub fn minimal_polynomial(&self, i: usize) -> Vec<u8> {
        // product of (x + α^c) over the coset, evaluated in GF(2^m)
        let mut poly = vec![1u32];
        for c in self.cyclotomic_coset(i) {
            let root = self.alpha_pow(c);
            let mut next = vec![0u32; poly.len() + 1];
            for (d, &coef) in poly.iter().enumerate() {
                next[d + 1] ^= coef;
                next[d] ^= self.mul(coef, root);
            }
            poly = next;
        }
        poly.into_iter()
            .map(|c| {
                debug_assert!(c <= 1, "minimal polynomial has a non-binary coefficient");
                c as u8
            })
            .collect()
    }

    pub fn degree(&self) -> u32 {
        self.m
    }
}

fn poly_mul(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] ^= y;
        }
    }
    out
}

/// Generator polynomial `lcm(M₁, M₃, …, M_{2t−1})`.
pub(crate) fn bch_generator_polynomial(field: &Gf2m, t: usize) -> Vec<u8> {
    let mut seen = BTreeSet::new();
    let mut g = vec![1u8];
    for i in (1..2 * t).step_by(2) {
        let rep = *field
            .cyclotomic_coset(i)
            .iter()
            .next()
            .expect("coset is nonempty");
        if seen.insert(rep) {
            g = poly_mul(&g, &field.minimal_polynomial(i));
        }
    }
    g
}

/// Narrow-sense binary BCH code of length `2^m − 1` correcting `t` errors,
/// over the default primitive polynomial for `m`.
pub fn build_bch(m: u32, t: usize) -> Result<LinearCode> {
    let prim = default_primitive_polynomial(m).ok_or_else(|| {
        Error::InvalidParameter(format!("BCH field degree m = {m} outside 3..=16"))
    })?;
    build_bch_with_primitive(m, t, prim)
}

pub fn build_bch_with_primitive(m: u32, t: usize, primitive: u32) -> Result<LinearCode> {
    if !(3..=16).contains(&m) {
        return Err(Error::InvalidParameter(format!(
            "BCH field degree m = {m} outside 3..=16"
        )));
    }
    if t == 0 {
        return Err(Error::InvalidParameter(
            "BCH error-correction capability t must be ≥ 1".into(),
        ));
    }
    let field = Gf2m::new(m, primitive)?;
    let n = field.order();
    if 2 * t > n {
        return Err(Error::InvalidParameter(format!(
            "t = {t} too large for length {n}"
        )));
    }
    let g = bch_generator_polynomial(&field, t);
    let deg = g.len() - 1;
    if deg >= n {
        return Err(Error::InvalidParameter(format!(
            "BCH(m = {m}, t = {t}) has no information bits"
        )));
    }
    let k = n - deg;
    let mut gen = BitMatrix::zeros(k, n);
    for row in 0..k {
        for (d, &c) in g.iter().enumerate() {
            if c == 1 {
                gen.set(row, row + d, true);
            }
        }
    }
    LinearCode::from_generator(gen, format!("bch({n},{k})"))
}
