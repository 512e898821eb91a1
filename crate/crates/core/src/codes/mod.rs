//! Binary linear block codes: the generator / parity-check / right-inverse
//! bundle, and constructors for the codes used in the experiments.

mod bch;
mod io;
mod polar;

pub use bch::{build_bch, build_bch_with_primitive, default_primitive_polynomial, Gf2m};
pub use io::{
    load_alist, load_dense, parse_alist, parse_dense, save_alist, save_dense, write_alist,
    write_dense,
};
pub use polar::{
    build_ca_polar, nr_ca_polar_128, nr_reliability_sequence, polar_transform, CrcSpec,
};

use crate::gf2::{BitMatrix, BitWord};
use crate::{Error, Result};

/// An `(n, k)` binary linear block code.
///
/// Holds a generator `G` (k×n), a parity-check matrix `H` ((n−k)×n) and a
/// right inverse `G⁻¹` (n×k) with `G·G⁻¹ = I_k`, so `(u·G)·G⁻¹ = u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    name: String,
    g: BitMatrix,
    h: BitMatrix,
    g_inv: BitMatrix,
}

impl LinearCode {
    /// Derives `H` and `G⁻¹` from a full-row-rank generator.
    pub fn from_generator(g: BitMatrix, name: impl Into<String>) -> Result<Self> {
        let h = g.nullspace_basis()?;
        let g_inv = g.right_inverse()?;
        Ok(Self {
            name: name.into(),
            g,
            h,
            g_inv,
        })
    }

    /// Derives `G` as a null-space basis of `H`. Linearly dependent rows of
    /// `H` are dropped, so the stored parity check is always (n−k)×n.
    pub fn from_parity_check(h: BitMatrix, name: impl Into<String>) -> Result<Self> {
        let h = independent_rows(&h);
        let g = h.nullspace_basis()?;
        if g.rows() == 0 {
            return Err(Error::InvalidParameter(
                "parity-check matrix has full column rank, so the code is empty".into(),
            ));
        }
        let g_inv = g.right_inverse()?;
        Ok(Self {
            name: name.into(),
            g,
            h,
            g_inv,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.g.cols()
    }

    pub fn k(&self) -> usize {
        self.g.rows()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.g
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.h
    }

    pub fn generator_right_inverse(&self) -> &BitMatrix {
        &self.g_inv
    }

    pub fn encode(&self, message: &BitWord) -> Result<BitWord> {
        self.g.vec_mat(message)
    }

    pub fn syndrome(&self, word: &BitWord) -> Result<BitWord> {
        self.h.mat_vec(word)
    }

    pub fn is_codeword(&self, word: &BitWord) -> Result<bool> {
        Ok(self.syndrome(word)?.is_zero())
    }

    /// Message recovery `û = c·G⁻¹`. Only meaningful for codewords.
    pub fn unencode(&self, codeword: &BitWord) -> Result<BitWord> {
        self.g_inv.vec_mat(codeword)
    }

    /// Checks `H·Gᵀ = 0`, `G·G⁻¹ = I_k`, `rank(G) = k` and `rank(H) = n − k`.
    pub fn check_invariants(&self) -> Result<()> {
        let (n, k) = (self.n(), self.k());
        if self.h.cols() != n || self.g_inv.rows() != n || self.g_inv.cols() != k {
            return Err(Error::Dimension(format!(
                "inconsistent shapes: G {}x{}, H {}x{}, G_inv {}x{}",
                k,
                n,
                self.h.rows(),
                self.h.cols(),
                self.g_inv.rows(),
                self.g_inv.cols()
            )));
        }
        if !self.h.mul(&self.g.transpose())?.is_zero() {
            return Err(Error::InvalidParameter("H·Gᵀ is not zero".into()));
        }
        if self.g.mul(&self.g_inv)? != BitMatrix::identity(k) {
            return Err(Error::InvalidParameter("G·G⁻¹ is not the identity".into()));
        }
        let rank_g = self.g.rank();
        if rank_g != k {
            return Err(Error::RankDeficient {
                expected: k,
                rank: rank_g,
            });
        }
        let rank_h = self.h.rank();
        if rank_h != n - k {
            return Err(Error::RankDeficient {
                expected: n - k,
                rank: rank_h,
            });
        }
        Ok(())
    }
}

/// A row basis of `m`, keeping the first occurrence of each independent row.
fn independent_rows(m: &BitMatrix) -> BitMatrix {
    // Each reduced row has its pivot bit cleared in every later reduced row.
    let mut reduced: Vec<(usize, BitWord)> = Vec::new();
    let mut kept = Vec::new();
    for row in m.row_iter() {
        let mut r = row.clone();
        for (p, b) in &reduced {
            if r.get(*p) {
                r ^= b;
            }
        }
        let pivot = r.ones().next();
        if let Some(p) = pivot {
            reduced.push((p, r));
            kept.push(row);
        }
    }
    if kept.is_empty() {
        return BitMatrix::zeros(0, m.cols());
    }
    BitMatrix::from_rows(&kept).expect("rows share a length")
}
