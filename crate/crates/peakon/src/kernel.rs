//! Calogero-Francoise interaction kernels.
//!
//! The peakon Hamiltonian is one member of the family
//! `H = 1/2 sum_{n,k} p_n p_k G(q_n - q_k)` over even kernels `G`. Three real
//! branches are exposed:
//!
//! - hyperbolic:     `G(x) = a + b_plus cosh(nu x) + b_minus sinh(nu |x|)`
//! - trigonometric:  `G(x) = a + b_plus cos(nu x)  + b_minus sin(nu |x|)`
//! - polynomial:     `G(x) = a + b |x| + c x^2`
//!
//! The peakon case is hyperbolic with `(a, b_plus, b_minus, nu) = (0, 1, -1, 1)`,
//! i.e. `G(x) = cosh x - sinh|x| = exp(-|x|)`. The hyperbolic branch is
//! evaluated in the exponential basis so that this cancellation is exact.

use crate::error::{Error, Result};
use crate::profile::PeakonConfig;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "lowercase")]
pub enum KernelParams {
    Hyperbolic {
        a: f64,
        b_plus: f64,
        b_minus: f64,
        nu: f64,
    },
    Trigonometric {
        a: f64,
        b_plus: f64,
        b_minus: f64,
        nu: f64,
    },
    Polynomial {
        a: f64,
        b: f64,
        c: f64,
    },
}

impl KernelParams {
    /// The peakon kernel `G(x) = exp(-|x|)`.
    pub fn peakon() -> Self {
        KernelParams::Hyperbolic {
            a: 0.0,
            b_plus: 1.0,
            b_minus: -1.0,
            nu: 1.0,
        }
    }

    /// True when the kernel reduces exactly to `exp(-nu |x|)`-type decay with
    /// the peakon normalization, so the dedicated right-hand side applies.
    pub fn is_peakon(&self) -> bool {
        matches!(
            self,
            KernelParams::Hyperbolic { a, b_plus, b_minus, nu }
                if *a == 0.0 && *b_plus == 1.0 && *b_minus == -1.0 && *nu == 1.0
        )
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            KernelParams::Hyperbolic {
                a,
                b_plus,
                b_minus,
                nu,
            }
            | KernelParams::Trigonometric {
                a,
                b_plus,
                b_minus,
                nu,
            } => a.is_finite() && b_plus.is_finite() && b_minus.is_finite() && nu.is_finite(),
            KernelParams::Polynomial { a, b, c } => a.is_finite() && b.is_finite() && c.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::NonFiniteKernel)
        }
    }

    /// Kernel value `G(x)`. All branches are even in `x`.
    pub fn eval(&self, x: f64) -> f64 {
        let ax = x.abs();
        match *self {
            KernelParams::Hyperbolic {
                a,
                b_plus,
                b_minus,
                nu,
            } => {
                // b+ cosh + b- sinh of nu|x|, regrouped on e^{nu|x|}, e^{-nu|x|}
                let ep = (nu * ax).exp();
                let em = (-nu * ax).exp();
                a + 0.5 * (b_plus + b_minus) * ep + 0.5 * (b_plus - b_minus) * em
            }
            KernelParams::Trigonometric {
                a,
                b_plus,
                b_minus,
                nu,
            } => a + b_plus * (nu * x).cos() + b_minus * (nu * ax).sin(),
            KernelParams::Polynomial { a, b, c } => a + b * ax + c * x * x,
        }
    }

    /// One-sided derivative `G'(x)` with the symmetric convention
    /// `G'(0) = 0`; `G` is even, so `G'` is odd.
    pub fn deriv(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        let s = x.signum();
        let ax = x.abs();
        match *self {
            KernelParams::Hyperbolic {
                b_plus,
                b_minus,
                nu,
                ..
            } => {
                let ep = (nu * ax).exp();
                let em = (-nu * ax).exp();
                s * nu * (0.5 * (b_plus + b_minus) * ep - 0.5 * (b_plus - b_minus) * em)
            }
            KernelParams::Trigonometric {
                b_plus,
                b_minus,
                nu,
                ..
            } => s * nu * (-b_plus * (nu * ax).sin() + b_minus * (nu * ax).cos()),
            KernelParams::Polynomial { b, c, .. } => s * b + 2.0 * c * x,
        }
    }
}

/// Calogero-Francoise Hamiltonian `1/2 sum_{n,k} p_n p_k G(q_n - q_k)`.
pub fn cf_hamiltonian(params: &KernelParams, config: &PeakonConfig) -> Result<f64> {
    params.validate()?;
    let g0 = params.eval(0.0);
    let mut h = 0.0;
    for (n, a) in config.peaks().iter().enumerate() {
        h += 0.5 * a.p * a.p * g0;
        for b in &config.peaks()[n + 1..] {
            h += a.p * b.p * params.eval(b.q - a.q);
        }
    }
    Ok(h)
}
