//! Generalized geometric measure (GGM) of pure multimode Gaussian states.
//!
//! For a pure state the GGM is `1 - lambda_max`, where `lambda_max` is the
//! largest Schmidt coefficient over all bipartitions. In phase space the
//! Schmidt coefficient of the bipartition cut out by a mode subset is a
//! product over the symplectic spectrum `{nu_i}` of the reduced state:
//! `prod_i 2 / (1 + nu_i)`. Maximizing over all subsets of size
//! `1 ..= floor(n/2)` gives the exact GGM; restricting to single modes
//! gives an `O(n)` variant that is exact in the large-`n` regime, where
//! reduced spectra concentrate.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symplectic::{CovarianceMatrix, ModeSubset, SymplecticSpectrum, Tolerances};

/// Hard ceiling for full subset enumeration; beyond this the
/// `floor(n/2)`-subset count makes exact GGM impractical.
pub const FULL_ENUMERATION_LIMIT: usize = 24;

/// Symplectic eigenvalues this close to 1 are treated as exactly 1 in the
/// Schmidt product, so round-off can never push `lambda_max` above 1.
pub const UNIT_EIGENVALUE_CLAMP: f64 = 1e-9;

/// GGM value together with the extremal bipartition that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GgmResultJson", into = "GgmResultJson")]
pub struct GgmResult {
    value: f64,
    lambda_max: f64,
    argmax_subset: ModeSubset,
    argmax_spectrum: SymplecticSpectrum,
}

impl GgmResult {
    /// The GGM, in `[0, 1)`.
    pub fn value(&self) -> f64 {
        self.value
    }

    /// The maximal Schmidt coefficient, in `(0, 1]`.
    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    /// The mode subset realizing `lambda_max` (lexicographically smallest
    /// on ties).
    pub fn argmax_subset(&self) -> &ModeSubset {
        &self.argmax_subset
    }

    /// Symplectic spectrum of the extremal reduction.
    pub fn argmax_spectrum(&self) -> &SymplecticSpectrum {
        &self.argmax_spectrum
    }
}

#[derive(Serialize, Deserialize)]
struct GgmResultJson {
    ggm: f64,
    lambda_max: f64,
    argmax_modes: Vec<usize>,
    argmax_spectrum: Vec<f64>,
}

impl From<GgmResult> for GgmResultJson {
    fn from(result: GgmResult) -> Self {
        GgmResultJson {
            ggm: result.value,
            lambda_max: result.lambda_max,
            argmax_modes: result.argmax_subset.indices().to_vec(),
            argmax_spectrum: result.argmax_spectrum.values().to_vec(),
        }
    }
}

impl TryFrom<GgmResultJson> for GgmResult {
    type Error = Error;

    // The file stores only the subset indices; the smallest consistent
    // ambient system (the largest index) is used to rebuild the subset.
    fn try_from(json: GgmResultJson) -> Result<Self> {
        if (json.ggm - (1.0 - json.lambda_max)).abs() > 1e-12 {
            return Err(Error::InconsistentGgm { value: json.ggm, lambda_max: json.lambda_max });
        }
        let ambient = json.argmax_modes.last().copied().unwrap_or(0);
        let argmax_subset = ModeSubset::new(ambient, json.argmax_modes)?;
        Ok(GgmResult {
            value: json.ggm,
            lambda_max: json.lambda_max,
            argmax_subset,
            argmax_spectrum: SymplecticSpectrum::from_values_unchecked(json.argmax_spectrum),
        })
    }
}

fn schmidt_product(spectrum: &SymplecticSpectrum) -> f64 {
    spectrum
        .values()
        .iter()
        .map(|&nu| {
            let nu = if (nu - 1.0).abs() <= UNIT_EIGENVALUE_CLAMP { 1.0 } else { nu };
            2.0 / (1.0 + nu)
        })
        .product()
}

fn require_pure(sigma: &CovarianceMatrix) -> Result<()> {
    let tol = Tolerances::default();
    let residual = sigma.purity_residual();
    if residual > tol.purity {
        return Err(Error::NotPure { residual, tol: tol.purity });
    }
    Ok(())
}

/// Maximal Schmidt coefficient of the bipartition `subset | complement`:
/// `prod_i 2 / (1 + nu_i)` over the symplectic spectrum of the reduction.
pub fn bipartition_max_schmidt(sigma: &CovarianceMatrix, subset: &ModeSubset) -> Result<f64> {
    require_pure(sigma)?;
    if subset.ambient_modes() == sigma.modes() && subset.is_full() {
        return Err(Error::FullSubset);
    }
    let spectrum = sigma.reduce(subset)?.symplectic_spectrum()?;
    Ok(schmidt_product(&spectrum))
}

fn max_schmidt_over_sizes(
    sigma: &CovarianceMatrix,
    sizes: impl Iterator<Item = usize>,
) -> Result<GgmResult> {
    let n = sigma.modes();
    let mut best: Option<(f64, ModeSubset, SymplecticSpectrum)> = None;
    for m in sizes {
        for combo in (1..=n).combinations(m) {
            let subset = ModeSubset::new(n, combo)?;
            let spectrum = sigma.reduce(&subset)?.symplectic_spectrum()?;
            let product = schmidt_product(&spectrum);
            let replace = match &best {
                None => true,
                Some((best_product, best_subset, _)) => {
                    product > *best_product
                        || (product == *best_product && subset < *best_subset)
                }
            };
            if replace {
                best = Some((product, subset, spectrum));
            }
        }
    }
    let (lambda_max, argmax_subset, argmax_spectrum) =
        best.expect("subset enumeration is non-empty for n >= 2");
    Ok(GgmResult { value: 1.0 - lambda_max, lambda_max, argmax_subset, argmax_spectrum })
}

/// Exact GGM by enumerating every bipartition size `1 ..= floor(n/2)`.
///
/// Ties between subsets are broken towards the lexicographically smallest
/// index list, so the arg-max is deterministic.
pub fn compute_ggm(sigma: &CovarianceMatrix) -> Result<GgmResult> {
    let n = sigma.modes();
    if n < 2 {
        return Err(Error::SingleMode);
    }
    if n > FULL_ENUMERATION_LIMIT {
        return Err(Error::TooManyModes { n, max: FULL_ENUMERATION_LIMIT });
    }
    require_pure(sigma)?;
    max_schmidt_over_sizes(sigma, 1..=n / 2)
}

/// GGM restricted to single-mode reductions: `O(n)` instead of `O(2^n)`.
///
/// Exact whenever the maximal Schmidt coefficient comes from a single
/// mode, which holds in the large-`n` concentration regime; in general it
/// only upper-bounds the full GGM value.
pub fn compute_ggm_single_mode(sigma: &CovarianceMatrix) -> Result<GgmResult> {
    if sigma.modes() < 2 {
        return Err(Error::SingleMode);
    }
    require_pure(sigma)?;
    max_schmidt_over_sizes(sigma, std::iter::once(1))
}

/// Closed-form large-`n` Haar average of the GGM on the `nu_bar` shell:
/// `(nu_bar - 1) / (nu_bar + 1)`.
pub fn asymptotic_ggm(nu_bar: f64) -> Result<f64> {
    if nu_bar < 1.0 || nu_bar.is_nan() {
        return Err(Error::EnergyBelowVacuum(nu_bar));
    }
    Ok((nu_bar - 1.0) / (nu_bar + 1.0))
}
