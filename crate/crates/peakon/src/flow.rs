//! Exact time evolution on spectral data and conservative continuation
//! through collisions.
//!
//! The eigenvalues are constants of motion; the norming and coupling
//! constants evolve linearly:
//!
//! ```text
//!   gamma_lambda(t) = gamma_lambda(0) e^{-t / (2 lambda)},
//!   c_lambda(t)     = c_lambda(0)     e^{-t / (2 lambda)}.
//! ```
//!
//! The sign of the exponent is pinned by the translation oracle: inverting the
//! evolved data of a single peakon `{(p, q0)}` must give `q(t) = q0 + p t`
//! (rightward motion at speed `p`), which also matches the asymptotic rays
//! `x = t / (2 lambda)`. A single peakon has `gamma = e^{-q}` with
//! `1 / (2 lambda) = p`, forcing the minus sign above.
//!
//! Solving the flow at a collision instant is still possible: the energy that
//! leaves the peakon part concentrates into the singular measure `upsilon`.
//! For a symmetric peakon-antipeakon pair the collision state is explicit
//! (`u == 0` with `upsilon = 4 H0^2` at the collision point); general
//! simultaneous collision states beyond that pair are reported as collision
//! signals with a located time instead of a reconstruction.

use crate::error::{Error, Result};
use crate::moment::{hankel_determinants, invert_spectral, moments};
use crate::profile::{ConservativeState, DiscreteMeasure, PeakonConfig};
use crate::spectral::{forward_transform, SpectralData};
use crate::weyl::WeylRepresentation;

/// A point on the isospectral flow: base spectral data plus the elapsed time.
/// Eigenvalues are constant in `t`; the gammas stay positive and the
/// couplings nonzero, since the evolution factors are positive exponentials.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub base: SpectralData,
    pub t: f64,
}

impl FlowState {
    pub fn new(base: SpectralData, t: f64) -> Self {
        FlowState { base, t }
    }

    /// Spectral data at time `t`.
    pub fn data(&self) -> SpectralData {
        evolve_spectral(&self.base, self.t)
    }

    /// Conservative state at time `t`.
    pub fn state(&self) -> Result<ConservativeState> {
        solve_from_data(&self.base, self.t)
    }

    /// The same flow at another time (the map `t -> state` is stateless).
    pub fn at(&self, t: f64) -> Self {
        FlowState {
            base: self.base.clone(),
            t,
        }
    }
}

/// Spectral data advanced to time `t`: eigenvalues unchanged,
/// `gamma -> gamma e^{-t/(2 lambda)}`, `c -> c e^{-t/(2 lambda)}`.
pub fn evolve_spectral(base: &SpectralData, t: f64) -> SpectralData {
    let factor = |lambda: f64| (-t / (2.0 * lambda)).exp();
    SpectralData {
        eigenvalues: base.eigenvalues.clone(),
        gammas: base
            .gammas
            .iter()
            .zip(&base.eigenvalues)
            .map(|(g, &l)| g * factor(l))
            .collect(),
        couplings: base
            .couplings
            .iter()
            .zip(&base.eigenvalues)
            .map(|(c, &l)| c * factor(l))
            .collect(),
    }
}

/// Value of the flagged Stieltjes denominator `Delta_1[index]` along the flow
/// at time `t`, with the norming constants normalized by their maximum (a
/// positive rescaling, so sign and zeros are preserved). This is the quantity
/// whose zero crossing marks a collision.
pub fn flagged_hankel_along_flow(base: &SpectralData, index: usize, t: f64) -> Result<f64> {
    let evolved = evolve_spectral(base, t);
    let gmax = evolved
        .gammas
        .iter()
        .cloned()
        .fold(f64::MIN_POSITIVE, f64::max);
    let scaled: Vec<f64> = evolved.gammas.iter().map(|g| g / gmax).collect();
    if index == 0 || index > base.len() {
        return Err(Error::Flow(format!("Hankel index {index} out of range")));
    }
    let s = moments(&evolved.eigenvalues, &scaled, 2 * index - 1)?;
    let table = hankel_determinants(&s, index)?;
    Ok(table.delta1(index))
}

/// Locates the zero crossing of the flagged determinant near `t_guess` by
/// bracket expansion and bisection. Returns `None` when no sign change is
/// found nearby.
pub fn locate_collision(base: &SpectralData, index: usize, t_guess: f64) -> Option<f64> {
    let f = |s: f64| flagged_hankel_along_flow(base, index, s).ok();
    let mut h = 1e-6 * t_guess.abs().max(1.0);
    let (mut lo, mut hi) = (t_guess - h, t_guess + h);
    let mut flo = f(lo)?;
    let mut fhi = f(hi)?;
    for _ in 0..60 {
        if flo == 0.0 {
            return Some(lo);
        }
        if fhi == 0.0 {
            return Some(hi);
        }
        if flo.signum() != fhi.signum() {
            break;
        }
        h *= 2.0;
        lo = t_guess - h;
        hi = t_guess + h;
        flo = f(lo)?;
        fhi = f(hi)?;
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 || (hi - lo).abs() <= f64::EPSILON * mid.abs().max(1.0) {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Explicit symmetric peakon-antipeakon collision state with energy `4 H0^2`
/// concentrated at the origin, together with its Weyl representation
/// `z M(z) = 4 H0^2 z^2 / (1 - 4 H0^2 z^2)` (poles at the original
/// eigenvalues `+-1 / (2 H0)`).
pub fn antipeakon_collision_state(h0: f64) -> Result<(ConservativeState, WeylRepresentation)> {
    if !(h0 > 0.0) || !h0.is_finite() {
        return Err(Error::Flow(format!("H0 must be positive, got {h0}")));
    }
    let state = ConservativeState::with_singular_part(
        PeakonConfig::empty(),
        DiscreteMeasure::new([(0.0, 4.0 * h0 * h0)])?,
    )?;
    let weyl = WeylRepresentation::from_state(&state);
    Ok((state, weyl))
}

fn symmetric_pair_spectrum(eigenvalues: &[f64]) -> Option<f64> {
    if eigenvalues.len() != 2 {
        return None;
    }
    let (a, b) = (eigenvalues[0], eigenvalues[1]);
    if (a + b).abs() <= 1e-8 * (a.abs() + b.abs()) {
        // H0 from the symmetric spectrum +-1/(2 H0)
        Some(0.25 * (1.0 / a.abs() + 1.0 / b.abs()))
    } else {
        None
    }
}

/// Conservative solution at time `t` by forward transform, exact spectral
/// evolution, and Stieltjes inversion.
///
/// At a collision instant the inversion degenerates; for a symmetric
/// two-peakon antipeakon pair the explicit concentrated-energy state is
/// returned (translated to the collision point, read off the coupling
/// constants). Other exact collision instants yield a collision signal
/// carrying the located time and failing index.
pub fn solve_conservative(config0: &PeakonConfig, t: f64) -> Result<ConservativeState> {
    if config0.is_empty() {
        return Ok(ConservativeState::regular(PeakonConfig::empty()));
    }
    let base = forward_transform(config0)?;
    solve_from_data(&base, t)
}

/// Conservative solution at time `t` from already-computed spectral data.
pub fn solve_from_data(base: &SpectralData, t: f64) -> Result<ConservativeState> {
    let evolved = evolve_spectral(base, t);
    match invert_spectral(&evolved.eigenvalues, &evolved.gammas) {
        Ok(config) => Ok(ConservativeState::regular(config)),
        Err(Error::Collision(mut signal)) => {
            signal.time = locate_collision(base, signal.hankel_index, t).or(Some(t));
            if let Some(h0) = symmetric_pair_spectrum(&evolved.eigenvalues) {
                let product = evolved.couplings[0] * evolved.couplings[1];
                if product > 0.0 {
                    // c_+ c_- is invariant for a symmetric spectrum and equals
                    // e^{-2 x0} at the collision point x0.
                    let x0 = -0.5 * product.ln();
                    let state = ConservativeState::with_singular_part(
                        PeakonConfig::empty(),
                        DiscreteMeasure::new([(x0, 4.0 * h0 * h0)])?,
                    )?;
                    return Ok(state);
                }
            }
            Err(Error::Collision(signal))
        }
        Err(e) => Err(e),
    }
}

/// Both sides of the first two trace formulas:
/// `sum 1/lambda = int domega` and `sum 1/lambda^2 = 2 int dmu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceIdentities {
    /// `sum 1/lambda`
    pub sum_inv_lambda: f64,
    /// `int domega = 2 sum p_n` (or `sum omega_n`)
    pub omega_total: f64,
    /// `sum 1/lambda^2`
    pub sum_inv_lambda_sq: f64,
    /// `2 int dmu = 8 H + 2 sum upsilon_n`
    pub two_mu_total: f64,
}

impl TraceIdentities {
    /// Worst relative mismatch of the two identities.
    pub fn max_relative_error(&self) -> f64 {
        let e1 = (self.sum_inv_lambda - self.omega_total).abs()
            / self
                .omega_total
                .abs()
                .max(self.sum_inv_lambda.abs())
                .max(1e-30);
        let e2 =
            (self.sum_inv_lambda_sq - self.two_mu_total).abs() / self.two_mu_total.abs().max(1e-30);
        e1.max(e2)
    }
}

/// Evaluates the trace formulas for a state with spectrum `sigma`.
pub fn trace_identities(sigma: &[f64], state: &ConservativeState) -> TraceIdentities {
    TraceIdentities {
        sum_inv_lambda: sigma.iter().map(|l| 1.0 / l).sum(),
        omega_total: state.omega_total(),
        sum_inv_lambda_sq: sigma.iter().map(|l| 1.0 / (l * l)).sum(),
        two_mu_total: 2.0 * state.mu_total(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{integrate, two_peakon_blowup_time, IntegrateOptions};
    use crate::kernel::KernelParams;
    use crate::moment::invert_spectral;
    use crate::spectral::{eigenvalues_of_state, modified_norming_constants};
    use crate::weyl::weyl_eval;
    use num_complex::Complex64;

    fn config(pairs: &[(f64, f64)]) -> PeakonConfig {
        PeakonConfig::new(pairs.iter().copied()).unwrap()
    }

    fn symmetric_pair() -> PeakonConfig {
        config(&[(1.0, -1.0), (-1.0, 1.0)])
    }

    #[test]
    fn flow_state_wraps_the_evolution() {
        let init = config(&[(1.0, 0.0)]);
        let base = forward_transform(&init).unwrap();
        let flow = FlowState::new(base.clone(), 3.0);
        assert_eq!(flow.data(), evolve_spectral(&base, 3.0));
        let state = flow.state().unwrap();
        assert!((state.peaks.peaks()[0].q - 3.0).abs() < 1e-10);
        assert_eq!(flow.at(0.0).data(), base);
        assert!(flow.data().gammas.iter().all(|&g| g > 0.0));
        assert!(flow.data().couplings.iter().all(|&c| c != 0.0));
    }

    #[test]
    fn evolve_at_zero_is_identity() {
        let base = forward_transform(&config(&[(0.7, -1.0), (1.2, 0.8)])).unwrap();
        let same = evolve_spectral(&base, 0.0);
        assert_eq!(base, same);
    }

    #[test]
    fn evolve_is_a_one_parameter_group() {
        let base = forward_transform(&config(&[(0.7, -1.0), (1.2, 0.8)])).unwrap();
        let two_step = evolve_spectral(&evolve_spectral(&base, 1.3), 2.4);
        let one_step = evolve_spectral(&base, 3.7);
        for (a, b) in two_step.gammas.iter().zip(&one_step.gammas) {
            assert!((a - b).abs() <= 1e-13 * b.abs());
        }
        for (a, b) in two_step.couplings.iter().zip(&one_step.couplings) {
            assert!((a - b).abs() <= 1e-13 * b.abs());
        }
    }

    #[test]
    fn single_peakon_translation_oracle() {
        // the sign-pinning oracle: q(t) = q0 + p t
        for &(p, q0) in &[(1.0, 0.0), (0.6, -1.2), (2.5, 3.0)] {
            let base = forward_transform(&config(&[(p, q0)])).unwrap();
            for &t in &[1.0, 5.0, 10.0] {
                let evolved = evolve_spectral(&base, t);
                let back = invert_spectral(&evolved.eigenvalues, &evolved.gammas).unwrap();
                let want = q0 + p * t;
                assert!(
                    (back.peaks()[0].q - want).abs() < 1e-10,
                    "p={p}, q0={q0}, t={t}: got {}, want {want}",
                    back.peaks()[0].q
                );
                assert!((back.peaks()[0].p - p).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn solve_single_peakon() {
        let state = solve_conservative(&config(&[(1.0, 0.0)]), 3.0).unwrap();
        assert!(state.singular_energy.is_zero());
        assert_eq!(state.peaks.len(), 1);
        assert!((state.peaks.peaks()[0].q - 3.0).abs() < 1e-10);
    }

    #[test]
    fn spectral_solution_matches_ode_for_three_peakons() {
        let init = config(&[(0.9, -3.0), (1.4, 0.0), (0.5, 2.5)]);
        let t = 5.0;
        let traj = integrate(
            &KernelParams::peakon(),
            &init,
            t,
            &IntegrateOptions::default(),
        )
        .unwrap();
        let spectral = solve_conservative(&init, t).unwrap();
        let xs: Vec<f64> = (0..2000).map(|i| -15.0 + 0.015 * i as f64).collect();
        let ode_u = traj.final_state().eval_profile(&xs);
        let spec_u = spectral.peaks.eval_profile(&xs);
        let sup = ode_u
            .iter()
            .zip(&spec_u)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(sup <= 1e-6, "sup deviation {sup}");
    }

    #[test]
    fn eigenvalues_constant_along_ode_snapshots() {
        let init = config(&[(1.0, -2.0), (2.0, 2.0)]);
        let base = crate::spectral::eigenvalues(&init).unwrap();
        let opts = IntegrateOptions {
            sample_times: Some(vec![2.0, 6.0]),
            ..Default::default()
        };
        let traj = integrate(&KernelParams::peakon(), &init, 10.0, &opts).unwrap();
        for state in &traj.states {
            let sigma = crate::spectral::eigenvalues(state).unwrap();
            for (a, b) in sigma.iter().zip(&base) {
                assert!(
                    (a - b).abs() < 1e-6 * b.abs(),
                    "eigenvalue drifted: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn symmetric_collision_state_at_blowup() {
        let init = symmetric_pair();
        let tx = two_peakon_blowup_time(&init).unwrap().unwrap();
        let state = solve_conservative(&init, tx).unwrap();
        assert!(state.peaks.is_empty(), "u == 0 at the collision instant");
        let h0sq = init.hamiltonian();
        let atoms = state.singular_energy.atoms();
        assert_eq!(atoms.len(), 1);
        assert!(atoms[0].x.abs() < 1e-8, "collision at the origin");
        assert!(
            (atoms[0].w - 4.0 * h0sq).abs() < 1e-8,
            "upsilon = 4 H0^2: {} vs {}",
            atoms[0].w,
            4.0 * h0sq
        );
        assert!((state.total_energy - 4.0 * h0sq).abs() < 1e-8);
    }

    #[test]
    fn translated_collision_lands_off_origin() {
        let d = 0.7;
        let init = config(&[(1.0, -1.0 + d), (-1.0, 1.0 + d)]);
        let tx = two_peakon_blowup_time(&init).unwrap().unwrap();
        let state = solve_conservative(&init, tx).unwrap();
        let atoms = state.singular_energy.atoms();
        assert_eq!(atoms.len(), 1);
        assert!(
            (atoms[0].x - d).abs() < 1e-8,
            "collision point {} vs translation {d}",
            atoms[0].x
        );
    }

    #[test]
    fn conservative_continuation_is_time_reflection_negation() {
        // u(x, tx + s) = -u(x, tx - s) for the symmetric pair
        let init = symmetric_pair();
        let tx = two_peakon_blowup_time(&init).unwrap().unwrap();
        let s = 0.6;
        let before = solve_conservative(&init, tx - s).unwrap();
        let after = solve_conservative(&init, tx + s).unwrap();
        for &x in &[-3.0, -1.0, -0.2, 0.5, 2.0] {
            let a = after.eval_at(x);
            let b = -before.eval_at(x);
            assert!((a - b).abs() < 1e-8, "x = {x}: {a} vs {b}");
        }
        // total energy is conserved across the collision
        assert!((before.total_energy - after.total_energy).abs() < 1e-10);
        let at = solve_conservative(&init, tx).unwrap();
        assert!((at.total_energy - before.total_energy).abs() < 1e-8);
    }

    #[test]
    fn collision_state_weyl_closed_form() {
        for &h0 in &[0.5, 1.0, 1.7] {
            let (_, weyl) = antipeakon_collision_state(h0).unwrap();
            for &(re, im) in &[(0.3, 0.4), (-1.1, 0.9), (0.0, 2.0)] {
                let z = Complex64::new(re, im);
                let m = weyl_eval(&weyl, z).unwrap();
                let h0sq4 = 4.0 * h0 * h0;
                let want = h0sq4 * z * z / (1.0 - h0sq4 * z * z);
                assert!(
                    (z * m - want).norm() < 1e-12 * want.norm().max(1.0),
                    "h0 = {h0}, z = {z}"
                );
            }
        }
    }

    #[test]
    fn collision_state_poles_are_original_eigenvalues() {
        let (state, _) = antipeakon_collision_state(0.5).unwrap();
        let sigma = eigenvalues_of_state(&state).unwrap();
        assert_eq!(sigma.len(), 2);
        assert!((sigma[0] + 1.0).abs() < 1e-12);
        assert!((sigma[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn modified_norming_constants_are_flow_limits() {
        let init = symmetric_pair();
        let tx = two_peakon_blowup_time(&init).unwrap().unwrap();
        let base = forward_transform(&init).unwrap();
        let at_tx = evolve_spectral(&base, tx);
        let h0 = init.hamiltonian().sqrt();
        let (state, _) = antipeakon_collision_state(h0).unwrap();
        let sigma = eigenvalues_of_state(&state).unwrap();
        let modified = modified_norming_constants(&state, &sigma).unwrap();
        // evolved data is ordered like its eigenvalues; both should be 1/2
        for (lam, want) in sigma.iter().zip(&modified) {
            let idx = at_tx
                .eigenvalues
                .iter()
                .position(|l| (l - lam).abs() < 1e-9 * lam.abs())
                .expect("matching eigenvalue");
            assert!(
                (at_tx.gammas[idx] - want).abs() < 1e-6,
                "gamma at collision: {} vs modified {want}",
                at_tx.gammas[idx]
            );
        }
    }

    #[test]
    fn flagged_hankel_crosses_zero_at_blowup() {
        let init = symmetric_pair();
        let tx = two_peakon_blowup_time(&init).unwrap().unwrap();
        let base = forward_transform(&init).unwrap();
        let before = flagged_hankel_along_flow(&base, 1, tx - 1e-3).unwrap();
        let after = flagged_hankel_along_flow(&base, 1, tx + 1e-3).unwrap();
        assert!(before.signum() != after.signum(), "{before} vs {after}");
        let located = locate_collision(&base, 1, tx - 1e-3).unwrap();
        assert!((located - tx).abs() < 1e-6, "located {located} vs {tx}");
    }

    #[test]
    fn general_collision_reports_signal_with_time() {
        // non-symmetric antipeakon pair: collision exists but no explicit
        // reconstruction; expect a located collision signal at the instant
        let init = config(&[(2.0, -1.0), (-1.0, 1.0)]);
        let tx = two_peakon_blowup_time(&init).unwrap().unwrap();
        match solve_conservative(&init, tx) {
            Err(Error::Collision(sig)) => {
                let located = sig.time.expect("collision time located");
                assert!((located - tx).abs() < 1e-6, "located {located} vs {tx}");
            }
            other => panic!("expected collision signal, got {other:?}"),
        }
        // just past the instant the flow is regular again
        assert!(solve_conservative(&init, tx + 0.05).is_ok());
    }

    #[test]
    fn trace_identities_single_peakon() {
        let c = config(&[(1.0, 0.0)]);
        let sigma = crate::spectral::eigenvalues(&c).unwrap();
        let tr = trace_identities(&sigma, &ConservativeState::regular(c));
        assert!((tr.sum_inv_lambda - 2.0).abs() < 1e-12);
        assert!((tr.omega_total - 2.0).abs() < 1e-12);
        assert!((tr.sum_inv_lambda_sq - 4.0).abs() < 1e-12);
        assert!((tr.two_mu_total - 4.0).abs() < 1e-12);
    }

    #[test]
    fn trace_identities_collision_state() {
        let h0 = 0.93;
        let (state, _) = antipeakon_collision_state(h0).unwrap();
        let sigma = eigenvalues_of_state(&state).unwrap();
        let tr = trace_identities(&sigma, &state);
        assert!(tr.max_relative_error() < 1e-12, "{tr:?}");
        assert!((tr.sum_inv_lambda_sq - 8.0 * h0 * h0).abs() < 1e-10);
    }

    #[test]
    fn trace_identities_along_ode_snapshots() {
        let init = config(&[(0.8, -1.5), (1.6, 1.0)]);
        let opts = IntegrateOptions {
            sample_times: Some(vec![1.0, 3.0]),
            ..Default::default()
        };
        let traj = integrate(&KernelParams::peakon(), &init, 5.0, &opts).unwrap();
        for state in &traj.states {
            let sigma = crate::spectral::eigenvalues(state).unwrap();
            let tr = trace_identities(&sigma, &ConservativeState::regular(state.clone()));
            assert!(tr.max_relative_error() < 1e-8, "{tr:?}");
        }
    }
}
