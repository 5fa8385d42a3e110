use serde::Serialize;

use crate::{EnsembleConfig, Error, Result, TimeSeries};

/// Which decomposition produced a mode set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    #[serde(rename = "EMD")]
    Emd,
    #[serde(rename = "EEMD")]
    Eemd,
    #[serde(rename = "CEEMD")]
    Ceemd,
    #[serde(rename = "ACE-EMD")]
    AceEmd,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::Emd => "EMD",
            Method::Eemd => "EEMD",
            Method::Ceemd => "CEEMD",
            Method::AceEmd => "ACE-EMD",
        };
        f.write_str(s)
    }
}

/// Relative reconstruction error above which an exact-identity decomposition
/// is considered broken.
pub(crate) const RECONSTRUCTION_TOL: f64 = 1e-8;

/// A source series split into ordered intrinsic modes plus a residual.
///
/// Modes are ordered fast to slow. The defining identity is
/// `source = Σ modes + residual`; it holds to floating-point rounding for
/// EMD, CEEMD, and the adaptive complementary variant, and to an O(1/√N)
/// noise gap for plain EEMD (the uncancelled ensemble mean of the injected
/// noise).
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    source: TimeSeries,
    imfs: Vec<TimeSeries>,
    residual: TimeSeries,
    method: Method,
    config: EnsembleConfig,
}

impl Decomposition {
    /// Assembles a decomposition from parts, enforcing length agreement and —
    /// for exact-identity methods — the reconstruction tolerance. Used by the
    /// decomposition drivers and by readers of previously written mode files.
    pub fn from_parts(
        source: TimeSeries,
        imfs: Vec<TimeSeries>,
        residual: TimeSeries,
        method: Method,
        config: EnsembleConfig,
    ) -> Result<Self> {
        let n = source.len();
        if residual.len() != n || imfs.iter().any(|c| c.len() != n) {
            return Err(Error::InvalidConfig {
                reason: "component length differs from source length".to_string(),
            });
        }
        let dec = Self {
            source,
            imfs,
            residual,
            method,
            config,
        };
        if method != Method::Eemd {
            let err = dec.reconstruction_error();
            if err > RECONSTRUCTION_TOL {
                return Err(Error::InvalidConfig {
                    reason: format!(
                        "components do not sum back to the source: relative error {err:.3e}"
                    ),
                });
            }
        }
        Ok(dec)
    }

    pub fn source(&self) -> &TimeSeries {
        &self.source
    }

    pub fn imfs(&self) -> &[TimeSeries] {
        &self.imfs
    }

    pub fn imf(&self, j: usize) -> &TimeSeries {
        &self.imfs[j]
    }

    pub fn residual(&self) -> &TimeSeries {
        &self.residual
    }

    pub fn num_imfs(&self) -> usize {
        self.imfs.len()
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn config(&self) -> &EnsembleConfig {
        &self.config
    }

    /// Modes in order, residual last — the "n + 1 components" view used by
    /// orthogonality and separability diagnostics.
    pub fn components(&self) -> impl Iterator<Item = &TimeSeries> {
        self.imfs.iter().chain(std::iter::once(&self.residual))
    }

    /// Pointwise sum of all modes and the residual.
    pub fn reconstruction(&self) -> Vec<f64> {
        let mut acc = vec![0.0; self.source.len()];
        for c in self.components() {
            for (a, v) in acc.iter_mut().zip(c.values()) {
                *a += v;
            }
        }
        acc
    }

    /// Max-norm relative reconstruction error
    /// `max_t |x - Σc - r| / max_t |x|`.
    pub fn reconstruction_error(&self) -> f64 {
        let recon = self.reconstruction();
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for (x, s) in self.source.values().iter().zip(&recon) {
            num = num.max((x - s).abs());
            den = den.max(x.abs());
        }
        if den == 0.0 {
            num
        } else {
            num / den
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_parts_checks_lengths_and_identity() {
        let x = TimeSeries::from_values("x", vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let c = TimeSeries::from_values("c1", vec![0.5, 1.0, 1.5, 2.0]).unwrap();
        let r = TimeSeries::from_values("r", vec![0.5, 1.0, 1.5, 2.0]).unwrap();
        let d = Decomposition::from_parts(
            x.clone(),
            vec![c.clone()],
            r,
            Method::Emd,
            EnsembleConfig::default(),
        )
        .unwrap();
        assert_eq!(d.num_imfs(), 1);
        assert_eq!(d.reconstruction_error(), 0.0);

        let bad_len = TimeSeries::from_values("r", vec![0.5, 1.0]).unwrap();
        assert!(Decomposition::from_parts(
            x.clone(),
            vec![c.clone()],
            bad_len,
            Method::Emd,
            EnsembleConfig::default(),
        )
        .is_err());

        let bad_sum = TimeSeries::from_values("r", vec![0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(Decomposition::from_parts(
            x,
            vec![c],
            bad_sum,
            Method::Emd,
            EnsembleConfig::default(),
        )
        .is_err());
    }

    #[test]
    fn eemd_tag_tolerates_a_noise_gap() {
        let x = TimeSeries::from_values("x", vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let c = TimeSeries::from_values("c1", vec![0.5, 1.0, 1.5, 2.0]).unwrap();
        let r = TimeSeries::from_values("r", vec![0.4, 0.9, 1.4, 1.9]).unwrap();
        let d =
            Decomposition::from_parts(x, vec![c], r, Method::Eemd, EnsembleConfig::default())
                .unwrap();
        assert!(d.reconstruction_error() > 0.0);
    }
}
