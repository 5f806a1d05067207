//! Phase-space linear algebra for multimode Gaussian states.
//!
//! Conventions, fixed once for the whole crate:
//!
//! - Quadrature ordering is `R = (q_1..q_n, p_1..p_n)^T`, so every
//!   `2n x 2n` matrix is laid out in `n x n` blocks `[[qq, qp], [pq, pp]]`.
//! - The symplectic form is `J = [[0, -I], [I, 0]]` in that ordering.
//! - Vacuum covariance is the identity; symplectic eigenvalues of
//!   physical states satisfy `nu_i >= 1`, with equality exactly for pure
//!   states.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical tolerances for validity checks, sized for `f64` at `n <= 100`.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Max absolute asymmetry allowed in a covariance matrix.
    pub symmetry: f64,
    /// Slack below 1 allowed for symplectic eigenvalues before a state is
    /// rejected as unphysical; eigenvalues inside the slack are clamped to 1.
    pub physicality: f64,
    /// Frobenius-norm bound on `(J sigma)^2 + I` for purity.
    pub purity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { symmetry: 1e-10, physicality: 1e-8, purity: 1e-8 }
    }
}

/// The symplectic form `J` on `n` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    n: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticForm {
    /// Builds `J = [[0, -I_n], [I_n, 0]]`.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroModes);
        }
        let matrix = DMatrix::from_fn(2 * n, 2 * n, |r, c| {
            if r < n && c == r + n {
                -1.0
            } else if r >= n && c == r - n {
                1.0
            } else {
                0.0
            }
        });
        Ok(Self { n, matrix })
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// `J * m` without materializing `J`: negated p-rows on top, q-rows below.
pub(crate) fn j_times(m: &DMatrix<f64>) -> DMatrix<f64> {
    let dim = m.nrows();
    let n = dim / 2;
    DMatrix::from_fn(dim, dim, |r, c| {
        if r < n {
            -m[(r + n, c)]
        } else {
            m[(r - n, c)]
        }
    })
}

fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..m.nrows() {
        for c in (r + 1)..m.ncols() {
            worst = worst.max((m[(r, c)] - m[(c, r)]).abs());
        }
    }
    worst
}

/// Checks membership in `K(n) = Sp(2n, R) ∩ O(2n)` up to the symmetry
/// tolerance: `M M^T = I` and `M J M^T = J`.
pub fn is_orthosymplectic(m: &DMatrix<f64>) -> Result<bool> {
    is_orthosymplectic_with(m, &Tolerances::default())
}

pub fn is_orthosymplectic_with(m: &DMatrix<f64>, tol: &Tolerances) -> Result<bool> {
    if m.nrows() != m.ncols() || !m.nrows().is_multiple_of(2) || m.nrows() == 0 {
        return Err(Error::BadDimension { rows: m.nrows(), cols: m.ncols() });
    }
    let dim = m.nrows();
    let identity = DMatrix::<f64>::identity(dim, dim);
    let ortho = (m * m.transpose() - &identity).norm();
    if ortho > tol.symmetry {
        return Ok(false);
    }
    // M J M^T = J  <=>  M (J M^T) = J
    let symp = (m * j_times(&m.transpose()) - j_times(&identity)).norm();
    Ok(symp <= tol.symmetry)
}

/// A strictly increasing set of 1-based mode indices inside an `n`-mode
/// system, naming one side of a bipartition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ModeSubset {
    n: usize,
    indices: Vec<usize>,
}

impl ModeSubset {
    pub fn new(n: usize, indices: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroModes);
        }
        if indices.is_empty() {
            return Err(Error::EmptySubset);
        }
        for pair in indices.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::IndicesNotIncreasing { previous: pair[0], current: pair[1] });
            }
        }
        for &i in &indices {
            if i == 0 || i > n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
        }
        Ok(Self { n, indices })
    }

    /// 1-based mode indices, strictly increasing.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn ambient_modes(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.indices.len() == self.n
    }

    /// The remaining modes. Errors if this subset already covers everything.
    pub fn complement(&self) -> Result<Self> {
        if self.is_full() {
            return Err(Error::FullSubset);
        }
        let indices = (1..=self.n).filter(|i| !self.indices.contains(i)).collect();
        Self::new(self.n, indices)
    }
}

/// Symplectic eigenvalues of a state, one per mode, sorted descending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SymplecticSpectrum {
    values: Vec<f64>,
}

impl SymplecticSpectrum {
    /// Wraps already-computed values (used when parsing serialized results).
    pub(crate) fn from_values_unchecked(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// On-disk form of a covariance matrix: `2n x 2n` doubles, row major,
/// in the fixed `(q_1..q_n, p_1..p_n)` ordering.
#[derive(Serialize, Deserialize)]
struct CovarianceFile {
    n: usize,
    ordering: String,
    sigma: Vec<f64>,
}

impl From<CovarianceMatrix> for CovarianceFile {
    fn from(cm: CovarianceMatrix) -> Self {
        let dim = 2 * cm.n;
        let mut sigma = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                sigma.push(cm.sigma[(r, c)]);
            }
        }
        CovarianceFile { n: cm.n, ordering: "qqpp".to_string(), sigma }
    }
}

impl TryFrom<CovarianceFile> for CovarianceMatrix {
    type Error = Error;

    fn try_from(file: CovarianceFile) -> Result<Self> {
        if file.ordering != "qqpp" {
            return Err(Error::UnsupportedOrdering(file.ordering));
        }
        if file.n == 0 {
            return Err(Error::ZeroModes);
        }
        let dim = 2 * file.n;
        if file.sigma.len() != dim * dim {
            return Err(Error::BadPayloadLength {
                len: file.sigma.len(),
                expected: dim * dim,
                n: file.n,
            });
        }
        let matrix = DMatrix::from_row_slice(dim, dim, &file.sigma);
        CovarianceMatrix::new(matrix)
    }
}

/// Covariance matrix of an `n`-mode zero-mean Gaussian state.
///
/// Symmetry is checked at construction; physicality (all symplectic
/// eigenvalues `>= 1`) is checked wherever a spectrum is computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CovarianceFile", into = "CovarianceFile")]
pub struct CovarianceMatrix {
    n: usize,
    sigma: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Validates dimensions and symmetry with default tolerances.
    pub fn new(sigma: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerances(sigma, &Tolerances::default())
    }

    pub fn with_tolerances(sigma: DMatrix<f64>, tol: &Tolerances) -> Result<Self> {
        if sigma.nrows() != sigma.ncols() || !sigma.nrows().is_multiple_of(2) || sigma.nrows() == 0 {
            return Err(Error::BadDimension { rows: sigma.nrows(), cols: sigma.ncols() });
        }
        let asym = max_asymmetry(&sigma);
        if asym > tol.symmetry {
            return Err(Error::NotSymmetric { max_asym: asym, tol: tol.symmetry });
        }
        Ok(Self { n: sigma.nrows() / 2, sigma })
    }

    /// Wraps a matrix without the symmetry check. The dimension must still
    /// be an even positive number.
    ///
    /// Intended for callers that construct `sigma` by symmetric operations
    /// and for exercising validation error paths in tests.
    pub fn from_matrix_unchecked(sigma: DMatrix<f64>) -> Self {
        assert!(
            sigma.nrows() == sigma.ncols() && sigma.nrows().is_multiple_of(2) && sigma.nrows() > 0,
            "covariance matrix must be square with even positive dimension"
        );
        Self { n: sigma.nrows() / 2, sigma }
    }

    /// The vacuum state on `n` modes.
    pub fn vacuum(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroModes);
        }
        Ok(Self { n, sigma: DMatrix::identity(2 * n, 2 * n) })
    }

    /// Two-mode squeezed vacuum with squeezing parameter `r`: per-mode
    /// blocks `cosh(2r) I_2` with cross-mode correlations
    /// `<q1 q2> = sinh(2r)`, `<p1 p2> = -sinh(2r)`.
    pub fn two_mode_squeezed(r: f64) -> Self {
        let c = (2.0 * r).cosh();
        let s = (2.0 * r).sinh();
        let sigma = DMatrix::from_row_slice(
            4,
            4,
            &[
                c, s, 0.0, 0.0, //
                s, c, 0.0, 0.0, //
                0.0, 0.0, c, -s, //
                0.0, 0.0, -s, c,
            ],
        );
        Self { n: 2, sigma }
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.sigma
    }

    /// `Tr(sigma) / 2n`: the mean energy per mode, with vacuum at 1.
    pub fn average_energy_per_mode(&self) -> f64 {
        self.sigma.trace() / (2.0 * self.n as f64)
    }

    /// Frobenius norm of `(J sigma)^2 + I`; zero exactly for pure states.
    pub fn purity_residual(&self) -> f64 {
        let js = j_times(&self.sigma);
        let mut sq = &js * &js;
        for i in 0..sq.nrows() {
            sq[(i, i)] += 1.0;
        }
        sq.norm()
    }

    pub fn is_pure(&self) -> bool {
        self.is_pure_with(&Tolerances::default())
    }

    pub fn is_pure_with(&self, tol: &Tolerances) -> bool {
        self.purity_residual() <= tol.purity
    }

    /// Restriction to a subset of modes: picks rows and columns
    /// `{i} ∪ {i + n}` for each 1-based `i` in the subset and re-packs them
    /// in `(q, p)` block ordering for the reduced system.
    pub fn reduce(&self, subset: &ModeSubset) -> Result<CovarianceMatrix> {
        if subset.ambient_modes() != self.n {
            return Err(Error::AmbientMismatch { subset_n: subset.ambient_modes(), n: self.n });
        }
        let k = subset.len();
        let mut rows = Vec::with_capacity(2 * k);
        rows.extend(subset.indices().iter().map(|&i| i - 1));
        rows.extend(subset.indices().iter().map(|&i| i - 1 + self.n));
        let reduced = DMatrix::from_fn(2 * k, 2 * k, |r, c| self.sigma[(rows[r], rows[c])]);
        Ok(CovarianceMatrix { n: k, sigma: reduced })
    }

    /// Symplectic (Williamson) spectrum: the moduli of the eigenvalues of
    /// `i J sigma`, deduplicated into one value per mode, sorted descending.
    ///
    /// Eigenvalue moduli come in pairs that agree up to round-off; each
    /// pair is averaged. Values inside the physicality slack below 1 are
    /// clamped to 1; values below the slack are an error.
    pub fn symplectic_spectrum(&self) -> Result<SymplecticSpectrum> {
        self.symplectic_spectrum_with(&Tolerances::default())
    }

    pub fn symplectic_spectrum_with(&self, tol: &Tolerances) -> Result<SymplecticSpectrum> {
        let asym = max_asymmetry(&self.sigma);
        if asym > tol.symmetry {
            return Err(Error::NotSymmetric { max_asym: asym, tol: tol.symmetry });
        }
        let js = j_times(&self.sigma);
        let eigen = js.complex_eigenvalues();
        let mut moduli: Vec<f64> = eigen.iter().map(|z| z.norm()).collect();
        moduli.sort_by(|a, b| b.total_cmp(a));

        let mut values = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let nu = 0.5 * (moduli[2 * i] + moduli[2 * i + 1]);
            if nu < 1.0 - tol.physicality {
                return Err(Error::Unphysical { value: nu, tol: tol.physicality });
            }
            values.push(if nu < 1.0 { 1.0 } else { nu });
        }
        Ok(SymplecticSpectrum { values })
    }
}
