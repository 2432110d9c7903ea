//! Core domain types: peakon configurations, discrete measures, conservative
//! states, and the pure evaluations defined on them (profiles, momentum,
//! Hamiltonians, the Liouville change of variables).
//!
//! A multi-peakon profile is `u(x) = sum_n p_n exp(-|x - q_n|)` with strictly
//! increasing positions `q_n` and nonzero masses `p_n`. The empty
//! configuration is legal and represents `u == 0`; collision states need it.

use crate::error::{Error, Result};

/// One peak: mass `p` (height and speed) and position `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub p: f64,
    pub q: f64,
}

/// An ordered multi-peakon configuration.
///
/// Invariants: positions strictly increasing, masses nonzero and finite.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PeakonConfig {
    peaks: Vec<Peak>,
}

impl PeakonConfig {
    /// Builds a configuration from `(mass, position)` pairs, validating the
    /// ordering and mass invariants.
    pub fn new(pairs: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let peaks: Vec<Peak> = pairs.into_iter().map(|(p, q)| Peak { p, q }).collect();
        for peak in &peaks {
            if !peak.p.is_finite() || !peak.q.is_finite() {
                return Err(Error::InvalidConfig("non-finite mass or position".into()));
            }
            if peak.p == 0.0 {
                return Err(Error::InvalidConfig("zero mass".into()));
            }
        }
        for w in peaks.windows(2) {
            if w[0].q >= w[1].q {
                return Err(Error::InvalidConfig(format!(
                    "positions not strictly increasing: {} >= {}",
                    w[0].q, w[1].q
                )));
            }
        }
        Ok(Self { peaks })
    }

    /// The empty configuration, `u == 0`.
    pub fn empty() -> Self {
        Self { peaks: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.peaks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.peaks.is_empty()
    }

    pub fn peaks(&self) -> &[Peak] {
        &self.peaks
    }

    pub fn masses(&self) -> Vec<f64> {
        self.peaks.iter().map(|pk| pk.p).collect()
    }

    pub fn positions(&self) -> Vec<f64> {
        self.peaks.iter().map(|pk| pk.q).collect()
    }

    /// Profile value `u(x)` at a single point.
    pub fn eval_at(&self, x: f64) -> f64 {
        self.peaks
            .iter()
            .map(|pk| pk.p * (-(x - pk.q).abs()).exp())
            .fold(0.0, |a, b| a + b)
    }

    /// Profile values at each sample point. The empty configuration returns
    /// zeros.
    pub fn eval_profile(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.eval_at(x)).collect()
    }

    /// Momentum measure `omega = 2 sum_n p_n delta_{q_n}`.
    pub fn momentum_measure(&self) -> DiscreteMeasure {
        DiscreteMeasure {
            atoms: self
                .peaks
                .iter()
                .map(|pk| Atom {
                    x: pk.q,
                    w: 2.0 * pk.p,
                })
                .collect(),
        }
    }

    /// Hamiltonian `H = 1/2 sum_{n,k} p_n p_k exp(-|q_n - q_k|)`.
    pub fn hamiltonian(&self) -> f64 {
        let mut h = 0.0;
        for (n, a) in self.peaks.iter().enumerate() {
            h += 0.5 * a.p * a.p;
            for b in &self.peaks[n + 1..] {
                h += a.p * b.p * (-(b.q - a.q).abs()).exp();
            }
        }
        h
    }

    /// Squared H^1 norm of the profile; identically `4 H`.
    pub fn h1_norm_squared(&self) -> f64 {
        4.0 * self.hamiltonian()
    }

    /// Total momentum `sum_n p_n`, conserved by the flow.
    pub fn total_momentum(&self) -> f64 {
        self.peaks.iter().map(|pk| pk.p).fold(0.0, |a, b| a + b)
    }

    /// The same configuration with every position shifted by `d`.
    pub fn translated(&self, d: f64) -> Self {
        Self {
            peaks: self
                .peaks
                .iter()
                .map(|pk| Peak {
                    p: pk.p,
                    q: pk.q + d,
                })
                .collect(),
        }
    }
}

/// A weighted atom of a discrete measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub x: f64,
    pub w: f64,
}

/// A finite discrete measure `sum_n w_n delta_{x_n}` with strictly increasing
/// atom positions. The zero measure has no atoms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiscreteMeasure {
    atoms: Vec<Atom>,
}

impl DiscreteMeasure {
    pub fn new(atoms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let atoms: Vec<Atom> = atoms.into_iter().map(|(x, w)| Atom { x, w }).collect();
        for atom in &atoms {
            if !atom.x.is_finite() || !atom.w.is_finite() {
                return Err(Error::InvalidConfig("non-finite atom".into()));
            }
            if atom.w == 0.0 {
                return Err(Error::InvalidConfig("zero atom weight".into()));
            }
        }
        for w in atoms.windows(2) {
            if w[0].x >= w[1].x {
                return Err(Error::InvalidConfig(
                    "atom positions not strictly increasing".into(),
                ));
            }
        }
        Ok(Self { atoms })
    }

    pub fn zero() -> Self {
        Self { atoms: Vec::new() }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Total mass `sum_n w_n`.
    pub fn total(&self) -> f64 {
        self.atoms.iter().map(|a| a.w).fold(0.0, |a, b| a + b)
    }

    /// Liouville change of variables onto the string interval (-1/2, 1/2):
    /// an atom at `x` with weight `w` maps to an atom at `tanh(x/2) / 2` with
    /// weight `4 cosh^2(x/2) w`. Atom ordering is preserved and the map is a
    /// bijection with inverse `x = 2 artanh(2 x')`.
    pub fn liouville_string(&self) -> DiscreteMeasure {
        DiscreteMeasure {
            atoms: self
                .atoms
                .iter()
                .map(|a| {
                    let c = (0.5 * a.x).cosh();
                    Atom {
                        x: 0.5 * (0.5 * a.x).tanh(),
                        w: 4.0 * c * c * a.w,
                    }
                })
                .collect(),
        }
    }
}

/// A conservative state `(u, mu)`: the peakon part of `u` together with the
/// singular part `upsilon` of the energy measure. Away from collisions the
/// singular part is zero; at a collision instant the local energy concentrates
/// into it, keeping the total `int dmu = 4H + sum upsilon_n` constant.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservativeState {
    pub peaks: PeakonConfig,
    pub singular_energy: DiscreteMeasure,
    pub total_energy: f64,
}

impl ConservativeState {
    /// A regular state: no singular energy, total energy `4H`.
    pub fn regular(peaks: PeakonConfig) -> Self {
        let total_energy = peaks.h1_norm_squared();
        Self {
            peaks,
            singular_energy: DiscreteMeasure::zero(),
            total_energy,
        }
    }

    /// A state with a singular energy part. Weights of `singular_energy` must
    /// be nonnegative and the energy balance `total = 4H + sum upsilon_n` must
    /// hold.
    pub fn with_singular_part(peaks: PeakonConfig, singular: DiscreteMeasure) -> Result<Self> {
        if singular.atoms().iter().any(|a| a.w < 0.0) {
            return Err(Error::InvalidConfig(
                "singular energy weights must be nonnegative".into(),
            ));
        }
        let total_energy = peaks.h1_norm_squared() + singular.total();
        Ok(Self {
            peaks,
            singular_energy: singular,
            total_energy,
        })
    }

    /// Momentum weight `int domega = 2 sum p_n`.
    pub fn omega_total(&self) -> f64 {
        2.0 * self.peaks.total_momentum()
    }

    /// Energy mass `int dmu = 4H + sum upsilon_n`.
    pub fn mu_total(&self) -> f64 {
        self.peaks.h1_norm_squared() + self.singular_energy.total()
    }

    /// Profile value `u(x)`; the singular part carries no profile.
    pub fn eval_at(&self, x: f64) -> f64 {
        self.peaks.eval_at(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(pairs: &[(f64, f64)]) -> PeakonConfig {
        PeakonConfig::new(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn profile_of_unit_peakon() {
        let c = config(&[(1.0, 0.0)]);
        assert_eq!(c.eval_at(0.0), 1.0);
        let half = c.eval_at(2.0f64.ln());
        assert!((half - 0.5).abs() < 1e-15, "e^(-ln 2) = 1/2, got {half}");
    }

    #[test]
    fn profile_odd_pair_vanishes_at_origin() {
        let c = config(&[(1.0, -1.0), (-1.0, 1.0)]);
        assert_eq!(c.eval_at(0.0), 0.0);
    }

    #[test]
    fn empty_config_is_zero_everywhere() {
        let c = PeakonConfig::empty();
        assert_eq!(c.eval_profile(&[-3.0, 0.0, 7.5]), vec![0.0, 0.0, 0.0]);
        assert_eq!(c.hamiltonian(), 0.0);
        assert!(c.momentum_measure().is_zero());
    }

    #[test]
    fn momentum_measure_doubles_masses() {
        let c = config(&[(1.0, 0.0)]);
        let m = c.momentum_measure();
        assert_eq!(m.atoms(), &[Atom { x: 0.0, w: 2.0 }]);

        let c = config(&[(1.0, -1.0), (-1.0, 1.0)]);
        let m = c.momentum_measure();
        assert_eq!(
            m.atoms(),
            &[Atom { x: -1.0, w: 2.0 }, Atom { x: 1.0, w: -2.0 }]
        );
    }

    #[test]
    fn hamiltonian_known_values() {
        assert!((config(&[(1.0, 0.0)]).hamiltonian() - 0.5).abs() < 1e-15);

        // Two unit peakons a gap ln 2 apart: H = 1/2 + 1/2 + e^{-ln 2} = 3/2.
        let h = config(&[(1.0, 0.0), (1.0, 2.0f64.ln())]).hamiltonian();
        assert!((h - 1.5).abs() < 1e-15, "got {h}");

        // Symmetric peakon-antipeakon pair at distance 2.
        let h = config(&[(1.0, -1.0), (-1.0, 1.0)]).hamiltonian();
        let expect = 1.0 - (-2.0f64).exp();
        assert!((h - expect).abs() < 1e-15, "got {h}, want {expect}");
    }

    #[test]
    fn h1_norm_matches_quadrature() {
        // 4H equals the integral of u^2 + u_x^2 over the line. Trapezoid rule
        // on a wide fine grid, with tails truncated where e^{-|x|} < 1e-17.
        let c = config(&[(1.3, -2.0), (-0.4, 0.5), (2.1, 3.0)]);
        let (lo, hi) = (-2.0 - 40.0, 3.0 + 40.0);
        let n = 1_600_000;
        let h = (hi - lo) / n as f64;
        let deriv = |x: f64| -> f64 {
            c.peaks()
                .iter()
                .map(|pk| -pk.p * (x - pk.q).signum() * (-(x - pk.q).abs()).exp())
                .sum()
        };
        let f = |x: f64| {
            let u = c.eval_at(x);
            let ux = deriv(x);
            u * u + ux * ux
        };
        let mut integral = 0.5 * (f(lo) + f(hi));
        for i in 1..n {
            integral += f(lo + i as f64 * h);
        }
        integral *= h;
        let rel = (integral - c.h1_norm_squared()).abs() / c.h1_norm_squared().abs();
        assert!(rel < 1e-6, "relative error {rel}");
    }

    #[test]
    fn liouville_string_unit_atom() {
        let m = DiscreteMeasure::new([(0.0, 2.0)]).unwrap();
        let s = m.liouville_string();
        assert_eq!(s.atoms(), &[Atom { x: 0.0, w: 8.0 }]);
    }

    #[test]
    fn liouville_string_general_atom() {
        let (p, q) = (0.7, -1.3);
        let m = DiscreteMeasure::new([(q, 2.0 * p)]).unwrap();
        let s = m.liouville_string();
        let want_x = 0.5 * (q / 2.0).tanh();
        let want_w = 8.0 * p * (q / 2.0).cosh().powi(2);
        assert!((s.atoms()[0].x - want_x).abs() < 1e-15);
        assert!((s.atoms()[0].w - want_w).abs() < 1e-15);
        assert!(m.liouville_string().atoms()[0].x.abs() < 0.5);
    }

    #[test]
    fn liouville_string_zero_measure() {
        assert!(DiscreteMeasure::zero().liouville_string().is_zero());
    }

    #[test]
    fn invalid_configs_rejected() {
        assert!(PeakonConfig::new([(1.0, 1.0), (1.0, 0.0)]).is_err());
        assert!(PeakonConfig::new([(1.0, 0.0), (1.0, 0.0)]).is_err());
        assert!(PeakonConfig::new([(0.0, 0.0)]).is_err());
        assert!(PeakonConfig::new([(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn conservative_energy_balance() {
        let peaks = config(&[(1.0, 0.0)]);
        let st = ConservativeState::regular(peaks.clone());
        assert_eq!(st.total_energy, 2.0);
        let st = ConservativeState::with_singular_part(
            PeakonConfig::empty(),
            DiscreteMeasure::new([(0.0, 3.0)]).unwrap(),
        )
        .unwrap();
        assert_eq!(st.total_energy, 3.0);
        assert!(ConservativeState::with_singular_part(
            peaks,
            DiscreteMeasure::new([(0.0, -1.0)]).unwrap(),
        )
        .is_err());
    }
}
