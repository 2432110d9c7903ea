//! Long-time peakon resolution.
//!
//! As `t -> infinity` a conservative multi-peakon solution splits into a train
//! of single peakons, one per eigenvalue, travelling along the rays
//! `x = t / (2 lambda)` with height and speed `1 / (2 lambda)`:
//!
//! ```text
//!   u(x, t) = sum_lambda (1 / (2 lambda)) e^{-|x - t/(2 lambda) + xi_lambda|} + o(1)
//! ```
//!
//! uniformly in `x`. The phase shifts are explicit in the scattering data:
//!
//! ```text
//!   xi_lambda = ln|c_lambda(0)|
//!             + sum_{k != lambda} sgn(1/lambda - 1/k) ln|1 - lambda/k|.
//! ```
//!
//! [`resolution_error`] measures the sup-norm distance between the exact
//! (spectrally evolved) solution and this asymptotic train on a dense grid
//! covering all rays.

use crate::error::{Error, Result};
use crate::flow::solve_from_data;
use crate::profile::{ConservativeState, PeakonConfig};
use crate::spectral::forward_transform;

/// One asymptotic ray: eigenvalue and its phase shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseShift {
    pub lambda: f64,
    pub xi: f64,
}

/// Phase shifts per eigenvalue, aligned with the spectrum they were computed
/// from.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseShiftTable {
    entries: Vec<PhaseShift>,
}

impl PhaseShiftTable {
    pub fn entries(&self) -> &[PhaseShift] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Predicted peak location of the `lambda` ray at time `t`:
    /// `t / (2 lambda) - xi_lambda`.
    pub fn peak_location(&self, index: usize, t: f64) -> f64 {
        let e = self.entries[index];
        t / (2.0 * e.lambda) - e.xi
    }
}

/// Phase shifts from the spectrum and the coupling constants at time zero.
pub fn phase_shifts(sigma: &[f64], couplings: &[f64]) -> Result<PhaseShiftTable> {
    if sigma.len() != couplings.len() {
        return Err(Error::Asymptotics(
            "eigenvalue and coupling counts differ".into(),
        ));
    }
    for w in sigma.windows(2) {
        if w[0] == w[1] {
            return Err(Error::Asymptotics("repeated eigenvalue".into()));
        }
    }
    if sigma.contains(&0.0) || couplings.contains(&0.0) {
        return Err(Error::Asymptotics(
            "eigenvalues and couplings must be nonzero".into(),
        ));
    }
    let entries = sigma
        .iter()
        .zip(couplings)
        .map(|(&lambda, &c)| {
            let mut xi = c.abs().ln();
            for &k in sigma {
                if k != lambda {
                    xi += (1.0 / lambda - 1.0 / k).signum() * (1.0 - lambda / k).abs().ln();
                }
            }
            PhaseShift { lambda, xi }
        })
        .collect();
    Ok(PhaseShiftTable { entries })
}

/// The asymptotic peakon train at `(x, t)`.
pub fn asymptotic_profile(shifts: &PhaseShiftTable, x: f64, t: f64) -> f64 {
    shifts
        .entries
        .iter()
        .map(|e| {
            let center = t / (2.0 * e.lambda) - e.xi;
            (1.0 / (2.0 * e.lambda)) * (-(x - center).abs()).exp()
        })
        .sum()
}

/// Evaluation grid spanning all rays with a 20-unit margin at spacing 1e-2;
/// the exponential tails beyond contribute below 1e-8.
fn ray_grid(sigma: &[f64], t: f64) -> Vec<f64> {
    let rays: Vec<f64> = sigma.iter().map(|l| t / (2.0 * l)).collect();
    let lo = rays.iter().cloned().fold(f64::INFINITY, f64::min) - 20.0;
    let hi = rays.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 20.0;
    let n = ((hi - lo) / 1e-2).ceil() as usize;
    (0..=n).map(|i| lo + 1e-2 * i as f64).collect()
}

/// Sup-norm distance between the exact conservative solution at time `t` and
/// the asymptotic peakon train, over a dense grid covering all rays.
/// Collision signals from the exact solve propagate.
pub fn resolution_error(config0: &PeakonConfig, t: f64) -> Result<f64> {
    let base = forward_transform(config0)?;
    let shifts = phase_shifts(&base.eigenvalues, &base.couplings)?;
    let state: ConservativeState = solve_from_data(&base, t)?;
    let grid = ray_grid(&base.eigenvalues, t);
    let mut sup = 0.0f64;
    for &x in &grid {
        let diff = (state.eval_at(x) - asymptotic_profile(&shifts, x, t)).abs();
        if diff > sup {
            sup = diff;
        }
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::solve_conservative;

    fn config(pairs: &[(f64, f64)]) -> PeakonConfig {
        PeakonConfig::new(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn single_peakon_phase_shift_is_minus_position() {
        for &(p, q0) in &[(1.0, 0.4), (0.7, -2.0), (2.0, 1.5)] {
            let base = forward_transform(&config(&[(p, q0)])).unwrap();
            let shifts = phase_shifts(&base.eigenvalues, &base.couplings).unwrap();
            assert_eq!(shifts.len(), 1);
            assert!(
                (shifts.entries()[0].xi + q0).abs() < 1e-12,
                "xi = {} vs -q0 = {}",
                shifts.entries()[0].xi,
                -q0
            );
            // predicted peak location is the exact translation q0 + p t
            let loc = shifts.peak_location(0, 7.0);
            assert!((loc - (q0 + p * 7.0)).abs() < 1e-11);
        }
    }

    #[test]
    fn translation_shifts_all_phases() {
        let base_cfg = config(&[(0.8, -1.0), (1.9, 0.7)]);
        let d = 1.3;
        let moved = base_cfg.translated(d);
        let a = forward_transform(&base_cfg).unwrap();
        let b = forward_transform(&moved).unwrap();
        let sa = phase_shifts(&a.eigenvalues, &a.couplings).unwrap();
        let sb = phase_shifts(&b.eigenvalues, &b.couplings).unwrap();
        for (ea, eb) in sa.entries().iter().zip(sb.entries()) {
            assert!(
                ((eb.xi - ea.xi) + d).abs() < 1e-10,
                "xi shift {} vs -d = {}",
                eb.xi - ea.xi,
                -d
            );
        }
    }

    #[test]
    fn single_peakon_resolves_exactly() {
        for &t in &[0.0, 3.0, 25.0] {
            let err = resolution_error(&config(&[(1.4, -0.3)]), t).unwrap();
            assert!(err < 1e-12, "t = {t}: err = {err}");
        }
    }

    #[test]
    fn heights_and_speeds_follow_eigenvalues() {
        // fastest ray belongs to the smallest positive eigenvalue and is the
        // tallest peak
        let base = forward_transform(&config(&[(2.5, -8.0), (1.0, 0.0)])).unwrap();
        let shifts = phase_shifts(&base.eigenvalues, &base.couplings).unwrap();
        let t = 300.0;
        for e in shifts.entries() {
            let center = t / (2.0 * e.lambda) - e.xi;
            let height = asymptotic_profile(&shifts, center, t);
            assert!(
                (height - 1.0 / (2.0 * e.lambda)).abs() < 1e-6,
                "height at ray {}: {height}",
                e.lambda
            );
        }
    }

    #[test]
    fn profile_decays_at_infinity() {
        let base = forward_transform(&config(&[(1.0, 0.0), (0.5, 3.0)])).unwrap();
        let shifts = phase_shifts(&base.eigenvalues, &base.couplings).unwrap();
        assert!(asymptotic_profile(&shifts, 1e4, 0.0).abs() < 1e-8);
        assert!(asymptotic_profile(&shifts, -1e4, 0.0).abs() < 1e-8);
    }

    #[test]
    fn two_peakon_phase_shifts_match_exact_peaks_at_large_time() {
        let init = config(&[(2.0, -1.0), (1.0, 1.0)]);
        let t = 200.0;
        let base = forward_transform(&init).unwrap();
        let shifts = phase_shifts(&base.eigenvalues, &base.couplings).unwrap();
        let state = solve_conservative(&init, t).unwrap();
        // exact peak positions are the recovered q_n; predicted are
        // t/(2 lambda) - xi, matched by sorting
        let mut predicted: Vec<f64> = (0..shifts.len())
            .map(|i| shifts.peak_location(i, t))
            .collect();
        predicted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let exact = state.peaks.positions();
        assert_eq!(exact.len(), predicted.len());
        for (e, p) in exact.iter().zip(&predicted) {
            assert!((e - p).abs() < 1e-3, "peak at {e} vs predicted {p}");
        }
    }

    #[test]
    fn resolution_error_decreases_for_positive_train() {
        let init = config(&[(1.5, -4.0), (0.7, 2.0)]);
        let e10 = resolution_error(&init, 10.0).unwrap();
        let e50 = resolution_error(&init, 50.0).unwrap();
        assert!(e50 < e10, "error grew: {e10} -> {e50}");
    }

    #[test]
    fn mixed_signs_send_negative_eigenvalue_rays_left() {
        let init = config(&[(1.0, -1.0), (-0.6, 1.5)]);
        let base = forward_transform(&init).unwrap();
        let shifts = phase_shifts(&base.eigenvalues, &base.couplings).unwrap();
        let t = 120.0;
        for e in shifts.entries() {
            let center = t / (2.0 * e.lambda) - e.xi;
            if e.lambda < 0.0 {
                assert!(center < 0.0, "negative eigenvalue ray must travel left");
            } else {
                assert!(center > 0.0);
            }
        }
    }

    #[test]
    fn pipeline_respects_mirror_covariance() {
        // x -> -x, p -> -p: the asymptotic profile of the mirrored config at
        // -x equals the negated profile of the original at x.
        let init = config(&[(1.2, -0.8), (0.5, 1.4)]);
        let mirrored = PeakonConfig::new(
            init.peaks()
                .iter()
                .rev()
                .map(|pk| (-pk.p, -pk.q))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let a = forward_transform(&init).unwrap();
        let b = forward_transform(&mirrored).unwrap();
        let sa = phase_shifts(&a.eigenvalues, &a.couplings).unwrap();
        let sb = phase_shifts(&b.eigenvalues, &b.couplings).unwrap();
        let t = 40.0;
        for &x in &[-60.0, -10.0, 0.0, 15.0, 55.0] {
            let lhs = asymptotic_profile(&sb, -x, t);
            let rhs = -asymptotic_profile(&sa, x, t);
            assert!((lhs - rhs).abs() < 1e-10, "x = {x}: {lhs} vs {rhs}");
        }
    }
}
