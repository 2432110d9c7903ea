//! Weyl-Titchmarsh function of the point-mass spectral problem, in its two
//! equivalent closed forms:
//!
//! - partial fractions over the eigenvalues: `M(z) = sum gamma / (lambda - z)`;
//! - a finite continued fraction in the string coefficients:
//!
//! ```text
//!   z M(z) - 1 = 1 / (-l_0 + 1 / (m_1 z + v_1 z^2 + 1 / (-l_1 + ... +
//!                1 / (m_N z + v_N z^2 - 1 / l_N))))
//! ```
//!
//! The dipole slots `v_n z^2` are zero for ordinary peakon data; a collision
//! state contributes `v_n = 4 upsilon_n cosh^2(x_n / 2)` instead of a mass
//! slot. `M` is never computed from its limit definition; the limit is only
//! cross-checked in tests.

use crate::error::{Error, Result};
use crate::profile::{ConservativeState, PeakonConfig};
use crate::spectral::{string_coefficients, SpectralData};
use num_complex::Complex64;

/// A pole of `M` with its residue data: `M(z) ~ gamma / (lambda - z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleResidue {
    pub lambda: f64,
    pub gamma: f64,
}

/// Continued-fraction data: per-atom mass slots `m_n`, dipole slots `v_n`,
/// and `N + 1` interval lengths `l_n` with `sum l_n = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StringData {
    pub masses: Vec<f64>,
    pub dipoles: Vec<f64>,
    pub lengths: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeylRepresentation {
    PartialFractions(Vec<PoleResidue>),
    ContinuedFraction(StringData),
}

impl WeylRepresentation {
    pub fn from_spectral_data(data: &SpectralData) -> Self {
        WeylRepresentation::PartialFractions(
            data.eigenvalues
                .iter()
                .zip(&data.gammas)
                .map(|(&lambda, &gamma)| PoleResidue { lambda, gamma })
                .collect(),
        )
    }

    pub fn from_config(config: &PeakonConfig) -> Self {
        let (masses, lengths) = string_coefficients(config);
        let dipoles = vec![0.0; masses.len()];
        WeylRepresentation::ContinuedFraction(StringData {
            masses,
            dipoles,
            lengths,
        })
    }

    /// Continued-fraction representation of a conservative state; singular
    /// energy atoms enter through the dipole slots.
    pub fn from_state(state: &ConservativeState) -> Self {
        let atoms = crate::spectral::state_atoms(state);
        let mut masses = Vec::with_capacity(atoms.len());
        let mut dipoles = Vec::with_capacity(atoms.len());
        let mut lengths = Vec::with_capacity(atoms.len() + 1);
        let mut prev_tanh = -1.0;
        for a in &atoms {
            let c = (0.5 * a.x).cosh();
            masses.push(4.0 * a.omega * c * c);
            dipoles.push(4.0 * a.upsilon * c * c);
            let t = (0.5 * a.x).tanh();
            lengths.push(0.5 * (t - prev_tanh));
            prev_tanh = t;
        }
        lengths.push(0.5 * (1.0 - prev_tanh));
        WeylRepresentation::ContinuedFraction(StringData {
            masses,
            dipoles,
            lengths,
        })
    }
}

fn guard_div(num: Complex64, den: Complex64, scale: f64) -> Result<Complex64> {
    if den.norm() <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::WeylPole);
    }
    Ok(num / den)
}

/// Evaluates `M(z)`. The two representations of the same configuration agree
/// pointwise and satisfy the Herglotz symmetry `M(z*) = M(z)*`.
pub fn weyl_eval(rep: &WeylRepresentation, z: Complex64) -> Result<Complex64> {
    match rep {
        WeylRepresentation::PartialFractions(poles) => {
            let mut m = Complex64::new(0.0, 0.0);
            for pr in poles {
                let den = pr.lambda - z;
                m += guard_div(
                    Complex64::new(pr.gamma, 0.0),
                    den,
                    pr.lambda.abs() + z.norm(),
                )?;
            }
            Ok(m)
        }
        WeylRepresentation::ContinuedFraction(data) => {
            let n = data.masses.len();
            if data.lengths.len() != n + 1 || data.dipoles.len() != n {
                return Err(Error::Spectral("continued fraction shape mismatch".into()));
            }
            if z.norm() == 0.0 {
                // z M(z) - 1 has a removable 0/0 at the origin in this form.
                return Err(Error::WeylPole);
            }
            if n == 0 {
                // no atoms: z M - 1 = 1/(-l_0) = -1, so M = 0, matching the
                // empty partial-fraction sum
                return Ok(Complex64::new(0.0, 0.0));
            }
            let slot = |k: usize| -> Complex64 { z * data.masses[k] + z * z * data.dipoles[k] };
            // innermost level: m_N z + v_N z^2 - 1/l_N
            let mut g = slot(n - 1)
                - guard_div(
                    Complex64::new(1.0, 0.0),
                    Complex64::new(data.lengths[n], 0.0),
                    1.0,
                )?;
            for k in (1..n).rev() {
                g = Complex64::new(-data.lengths[k], 0.0)
                    + guard_div(Complex64::new(1.0, 0.0), g, z.norm().max(1.0))?;
                g = slot(k - 1) + guard_div(Complex64::new(1.0, 0.0), g, z.norm().max(1.0))?;
            }
            g = Complex64::new(-data.lengths[0], 0.0)
                + guard_div(Complex64::new(1.0, 0.0), g, z.norm().max(1.0))?;
            // z M - 1 = 1/g
            let zm = Complex64::new(1.0, 0.0) + guard_div(Complex64::new(1.0, 0.0), g, 1.0)?;
            Ok(zm / z)
        }
    }
}
