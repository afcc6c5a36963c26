//! Shared helpers for the benchmark targets.

use symeig_core::symplectic::plant_spd;
use symeig_core::SpdMatrix;

/// A reproducible planted instance with evenly spaced spectrum
/// `0.5, 1.0, …, n/2`.
pub fn planted_instance(n: usize, seed: u64) -> SpdMatrix {
    let spectrum: Vec<f64> = (1..=n).map(|i| 0.5 * i as f64).collect();
    plant_spd(n, &spectrum, seed, 0.3).expect("valid benchmark instance")
}
