//! Mode bookkeeping for two-valued-coin walks on a cycle.
//!
//! Flat mode ordering is all `(x, +)` for ascending `x` followed by all
//! `(x, -)`; the doubled operator vector orders the annihilation block before
//! the creation block.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CVec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoinValue {
    Plus,
    Minus,
}

impl CoinValue {
    pub const BOTH: [CoinValue; 2] = [CoinValue::Plus, CoinValue::Minus];
}

impl std::fmt::Display for CoinValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoinValue::Plus => write!(f, "+"),
            CoinValue::Minus => write!(f, "-"),
        }
    }
}

/// Bijection between flat mode indices and (position, coin) pairs for a walk
/// with `d` positions and a two-valued coin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeLayout {
    d: usize,
}

impl ModeLayout {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::DimensionMismatch(
                "layout needs at least one position".into(),
            ));
        }
        Ok(Self { d })
    }

    pub fn positions(&self) -> usize {
        self.d
    }

    /// Total number of modes, 2d.
    pub fn mode_count(&self) -> usize {
        2 * self.d
    }

    pub fn index(&self, x: usize, coin: CoinValue) -> Result<usize> {
        if x >= self.d {
            return Err(Error::DimensionMismatch(format!(
                "position {x} out of range for {} positions",
                self.d
            )));
        }
        Ok(match coin {
            CoinValue::Plus => x,
            CoinValue::Minus => self.d + x,
        })
    }

    /// Same as [`index`](Self::index) but wraps signed positions onto the
    /// cycle, so x = -1 addresses the last vertex.
    pub fn index_signed(&self, x: i64, coin: CoinValue) -> Result<usize> {
        let d = self.d as i64;
        let wrapped = x.rem_euclid(d) as usize;
        self.index(wrapped, coin)
    }

    pub fn decode(&self, i: usize) -> Result<(usize, CoinValue)> {
        if i < self.d {
            Ok((i, CoinValue::Plus))
        } else if i < 2 * self.d {
            Ok((i - self.d, CoinValue::Minus))
        } else {
            Err(Error::DimensionMismatch(format!(
                "mode index {i} out of range for {} modes",
                2 * self.d
            )))
        }
    }
}

/// Coherent amplitudes over the modes of a walk, one complex entry per mode.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentInput {
    alpha: CVec,
}

impl CoherentInput {
    pub fn new(alpha: CVec) -> Self {
        Self { alpha }
    }

    pub fn vacuum(modes: usize) -> Self {
        Self {
            alpha: CVec::zeros(modes),
        }
    }

    /// Builds an input from sparse (position, coin, amplitude) entries; all
    /// unlisted modes stay at zero amplitude.
    pub fn from_entries(
        layout: &ModeLayout,
        entries: &[(i64, CoinValue, Complex64)],
    ) -> Result<Self> {
        let mut alpha = CVec::zeros(layout.mode_count());
        for &(x, coin, amp) in entries {
            let i = layout.index_signed(x, coin)?;
            alpha[i] += amp;
        }
        Ok(Self { alpha })
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.alpha
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// Total input photon number, sum of |alpha_i|^2.
    pub fn total_photon_number(&self) -> f64 {
        self.alpha.iter().map(|a| a.norm_sqr()).sum()
    }
}
