use crate::error::{Error, Result};

/// Shannon entropy in bits of a binary distribution (p, 1 − p), with 0·log 0 = 0.
/// Inputs within 1e-12 of [0, 1] are clamped.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&p) {
        return Err(Error::Domain {
            value: p,
            domain: "probability in [0, 1]",
        });
    }
    Ok(h2(p))
}

/// Unchecked binary entropy for hot loops; clamps its argument.
#[inline]
pub(crate) fn h2(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    let q = 1.0 - p;
    let mut h = 0.0;
    if p > 0.0 {
        h -= p * p.log2();
    }
    if q > 0.0 {
        h -= q * q.log2();
    }
    h
}

/// Entropy estimator applied to empirical outcome counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntropyEstimator {
    /// Entropy of the empirical frequencies; biased low by O(1/N).
    #[default]
    PlugIn,
    /// Plug-in plus (m − 1)/(2N ln 2) for m occupied bins.
    MillerMadow,
}

impl EntropyEstimator {
    /// Estimated entropy (bits) of a binary variable from its two counts.
    pub fn binary(&self, n0: u64, n1: u64) -> f64 {
        let n = n0 + n1;
        if n == 0 {
            return 0.0;
        }
        let plug_in = h2(n0 as f64 / n as f64);
        match self {
            Self::PlugIn => plug_in,
            Self::MillerMadow => {
                let occupied = (n0 > 0) as u64 + (n1 > 0) as u64;
                plug_in + (occupied.saturating_sub(1)) as f64 / (2.0 * n as f64 * std::f64::consts::LN_2)
            }
        }
    }
}
