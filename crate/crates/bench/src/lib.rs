//! Shared fixtures for the criterion benches.

use gauss_ggm_core::{sample_state, CovarianceMatrix, RandomStateSpec};

/// One deterministic random pure state on the `nu_bar = 2.6` shell.
pub fn fixture_state(n: usize) -> CovarianceMatrix {
    let spec = RandomStateSpec::new(n, 2.6, 0xBE5C);
    sample_state(&spec, &mut spec.rng()).expect("fixture state")
}
