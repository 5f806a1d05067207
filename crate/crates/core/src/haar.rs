//! Haar-uniform sampling of pure `n`-mode Gaussian states on the fixed
//! average-energy-per-mode shell.
//!
//! Every pure covariance matrix factors as `sigma = O Gamma O^T` with
//! `O` in the orthogonal symplectic group `K(n)` and
//! `Gamma = diag(z_1..z_n) ⊕ diag(1/z_1..1/z_n)` a squeezing spectrum.
//! `K(n)` is isomorphic to `U(n)`, so a Haar-distributed `O` is obtained
//! by drawing a Haar unitary and embedding it as a real `2n x 2n` block
//! matrix. Fixing the mean energy per mode to `nu_bar` constrains the
//! squeezing values to the shell `(1/2n) sum(z_i + 1/z_i) = nu_bar`.
//!
//! Randomness contract: a sampler consumes its stream in a fixed,
//! documented order — a column-major fill of the complex Gaussian matrix
//! (real part before imaginary part for each entry), then a deterministic
//! orthonormalization. Parallel ensembles derive one ChaCha sub-stream
//! per worker from `(seed, worker_id)`, so results are reproducible for a
//! fixed seed and worker count.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::symplectic::{is_orthosymplectic_with, CovarianceMatrix, Tolerances};

/// Acceptable residual for the unitarity check `||U^dag U - I||_F`.
pub const UNITARY_TOL: f64 = 1e-10;

/// Acceptable residual for the energy-shell constraint.
pub const SHELL_TOL: f64 = 1e-10;

/// An element of `U(n)`, validated at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    n: usize,
    entries: DMatrix<Complex64>,
}

impl UnitaryMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::BadDimension { rows: entries.nrows(), cols: entries.ncols() });
        }
        let n = entries.nrows();
        let residual =
            (entries.adjoint() * &entries - DMatrix::<Complex64>::identity(n, n)).norm();
        if residual > UNITARY_TOL {
            return Err(Error::NotUnitary { residual, tol: UNITARY_TOL });
        }
        Ok(Self { n, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }
}

/// An element of `K(n) = Sp(2n, R) ∩ O(2n)`: a passive, energy-preserving
/// Gaussian operation.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoSymplectic {
    n: usize,
    matrix: DMatrix<f64>,
}

impl OrthoSymplectic {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let tol = Tolerances::default();
        if !is_orthosymplectic_with(&matrix, &tol)? {
            let dim = matrix.nrows();
            let identity = DMatrix::<f64>::identity(dim, dim);
            let ortho = (&matrix * matrix.transpose() - &identity).norm();
            let symp = (&matrix * crate::symplectic::j_times(&matrix.transpose())
                - crate::symplectic::j_times(&identity))
            .norm();
            return Err(Error::NotOrthoSymplectic { ortho, symp });
        }
        Ok(Self { n: matrix.nrows() / 2, matrix })
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `O sigma O^T`, re-symmetrized to scrub round-off.
    pub fn conjugate(&self, sigma: &CovarianceMatrix) -> Result<CovarianceMatrix> {
        if sigma.modes() != self.n {
            return Err(Error::DimensionMismatch {
                dim: 2 * sigma.modes(),
                n: self.n,
                expected: 2 * self.n,
            });
        }
        let raw = &self.matrix * sigma.matrix() * self.matrix.transpose();
        Ok(CovarianceMatrix::from_matrix_unchecked(symmetrize(raw)))
    }
}

fn symmetrize(mut m: DMatrix<f64>) -> DMatrix<f64> {
    let dim = m.nrows();
    for r in 0..dim {
        for c in (r + 1)..dim {
            let avg = 0.5 * (m[(r, c)] + m[(c, r)]);
            m[(r, c)] = avg;
            m[(c, r)] = avg;
        }
    }
    m
}

/// Draws `U` Haar-uniformly from `U(n)`.
///
/// A matrix of independent standard complex Gaussians is filled column by
/// column from the stream and orthonormalized by a QR factorization; the
/// column phases are then fixed so the triangular factor has positive real
/// diagonal, which makes the distribution exactly Haar rather than
/// QR-convention-dependent.
pub fn sample_haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<UnitaryMatrix> {
    if n == 0 {
        return Err(Error::ZeroModes);
    }
    let mut data = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        data.push(Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2));
    }
    // from_vec fills column-major, matching the documented stream order.
    let ginibre = DMatrix::from_vec(n, n, data);
    let qr = ginibre.qr();
    let r = qr.r();
    let mut u = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let modulus = d.norm();
        if modulus > 0.0 {
            let phase = d / modulus;
            for i in 0..n {
                u[(i, j)] *= phase;
            }
        }
    }
    Ok(UnitaryMatrix { n, entries: u })
}

/// Embeds `U = X + iY` into `K(n)` as `[[X, Y], [-Y, X]]`.
pub fn embed_unitary(u: &UnitaryMatrix) -> OrthoSymplectic {
    let n = u.dim();
    let matrix = DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let entry = u.entries[(r % n, c % n)];
        match (r < n, c < n) {
            (true, true) | (false, false) => entry.re,
            (true, false) => entry.im,
            (false, true) => -entry.im,
        }
    });
    OrthoSymplectic { n, matrix }
}

/// Squeezing values `z_i >= 1` on the energy shell
/// `(1/2n) sum(z_i + 1/z_i) = nu_bar`, defining
/// `Gamma = diag(z) ⊕ diag(1/z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SqueezingSpectrum {
    z: Vec<f64>,
    nu_bar: f64,
}

impl SqueezingSpectrum {
    /// The unique uniform spectrum on the shell: every
    /// `z_i = nu_bar + sqrt(nu_bar^2 - 1)`, the `z >= 1` root of
    /// `(z + 1/z)/2 = nu_bar`.
    pub fn uniform(n: usize, nu_bar: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroModes);
        }
        if nu_bar < 1.0 || nu_bar.is_nan() {
            return Err(Error::EnergyBelowVacuum(nu_bar));
        }
        let z = nu_bar + (nu_bar * nu_bar - 1.0).sqrt();
        Ok(Self { z: vec![z; n], nu_bar })
    }

    /// Accepts an arbitrary user-supplied spectrum on the shell.
    ///
    /// Values below 1 are replaced by their reciprocal first (relabeling
    /// `q <-> p` on that mode leaves the state set invariant); the shell
    /// constraint is then enforced to within [`SHELL_TOL`].
    pub fn validated(z: Vec<f64>, nu_bar: f64) -> Result<Self> {
        if z.is_empty() {
            return Err(Error::ZeroModes);
        }
        if nu_bar < 1.0 || nu_bar.is_nan() {
            return Err(Error::EnergyBelowVacuum(nu_bar));
        }
        let mut canonical = Vec::with_capacity(z.len());
        for &v in &z {
            if v <= 0.0 || !v.is_finite() {
                return Err(Error::NonPositiveSqueezing(v));
            }
            canonical.push(if v < 1.0 { 1.0 / v } else { v });
        }
        let n = canonical.len() as f64;
        let actual = canonical.iter().map(|&v| v + 1.0 / v).sum::<f64>() / (2.0 * n);
        let residual = (actual - nu_bar).abs();
        if residual > SHELL_TOL {
            return Err(Error::OffShell { actual, target: nu_bar, residual, tol: SHELL_TOL });
        }
        Ok(Self { z: canonical, nu_bar })
    }

    pub fn modes(&self) -> usize {
        self.z.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.z
    }

    pub fn nu_bar(&self) -> f64 {
        self.nu_bar
    }

    /// The diagonal of `Gamma` as a full `2n x 2n` covariance matrix.
    pub fn gamma_matrix(&self) -> DMatrix<f64> {
        let n = self.z.len();
        let mut diag = Vec::with_capacity(2 * n);
        diag.extend_from_slice(&self.z);
        diag.extend(self.z.iter().map(|&z| 1.0 / z));
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))
    }
}

/// How `Gamma` is chosen when sampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GammaPolicyRepr", into = "GammaPolicyRepr")]
pub enum GammaPolicy {
    /// All modes squeezed equally to sit on the shell.
    Uniform,
    /// Explicit list of `z` values, validated against the shell.
    Explicit(Vec<f64>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum GammaPolicyRepr {
    Name(String),
    List(Vec<f64>),
}

impl From<GammaPolicy> for GammaPolicyRepr {
    fn from(policy: GammaPolicy) -> Self {
        match policy {
            GammaPolicy::Uniform => GammaPolicyRepr::Name("uniform".to_string()),
            GammaPolicy::Explicit(z) => GammaPolicyRepr::List(z),
        }
    }
}

impl TryFrom<GammaPolicyRepr> for GammaPolicy {
    type Error = Error;

    fn try_from(repr: GammaPolicyRepr) -> Result<Self> {
        match repr {
            GammaPolicyRepr::Name(name) if name == "uniform" => Ok(GammaPolicy::Uniform),
            GammaPolicyRepr::Name(name) => Err(Error::BadGammaPolicy(name)),
            GammaPolicyRepr::List(z) => Ok(GammaPolicy::Explicit(z)),
        }
    }
}

/// Everything needed to draw one random pure state reproducibly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomStateSpec {
    pub n: usize,
    pub nu_bar: f64,
    pub seed: u64,
    #[serde(default = "GammaPolicy::default_uniform")]
    pub gamma: GammaPolicy,
}

impl GammaPolicy {
    fn default_uniform() -> Self {
        GammaPolicy::Uniform
    }
}

impl RandomStateSpec {
    pub fn new(n: usize, nu_bar: f64, seed: u64) -> Self {
        Self { n, nu_bar, seed, gamma: GammaPolicy::Uniform }
    }

    pub fn with_gamma(n: usize, nu_bar: f64, seed: u64, gamma: GammaPolicy) -> Self {
        Self { n, nu_bar, seed, gamma }
    }

    /// Resolves the gamma policy into a concrete spectrum on the shell.
    pub fn squeezing(&self) -> Result<SqueezingSpectrum> {
        match &self.gamma {
            GammaPolicy::Uniform => SqueezingSpectrum::uniform(self.n, self.nu_bar),
            GammaPolicy::Explicit(z) => {
                if z.len() != self.n {
                    return Err(Error::SqueezingLengthMismatch { len: z.len(), n: self.n });
                }
                SqueezingSpectrum::validated(z.clone(), self.nu_bar)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.squeezing().map(|_| ())
    }

    /// The base stream (worker 0) for this seed.
    pub fn rng(&self) -> ChaCha8Rng {
        self.rng_for_worker(0)
    }

    /// Sub-stream derivation `seed -> (seed, worker_id)`: ChaCha streams
    /// are independent, so parallel workers never overlap.
    pub fn rng_for_worker(&self, worker: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(worker);
        rng
    }
}

/// Draws one pure state `sigma = O Gamma O^T` from the given stream.
///
/// The result is pure, sits on the energy shell exactly (up to round-off),
/// and is bit-identical for identical `(spec, stream state)`.
pub fn sample_state<R: Rng + ?Sized>(
    spec: &RandomStateSpec,
    rng: &mut R,
) -> Result<CovarianceMatrix> {
    let squeezing = spec.squeezing()?;
    let unitary = sample_haar_unitary(spec.n, rng)?;
    let o = embed_unitary(&unitary);

    // O Gamma scales the columns of O; one real matmul finishes the job.
    let n = spec.n;
    let mut og = o.matrix().clone();
    for (j, &z) in squeezing.values().iter().enumerate() {
        let inv = 1.0 / z;
        for i in 0..2 * n {
            og[(i, j)] *= z;
            og[(i, j + n)] *= inv;
        }
    }
    let sigma = og * o.matrix().transpose();
    Ok(CovarianceMatrix::from_matrix_unchecked(symmetrize(sigma)))
}
