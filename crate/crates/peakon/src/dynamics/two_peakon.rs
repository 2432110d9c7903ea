//! Closed-form two-peakon interaction.
//!
//! With `Q = q2 - q1 > 0`, `P = p2 - p1` and the conserved `P0 = p1 + p2`,
//! the pair system reduces to
//!
//! ```text
//!   P' = (h0^2 - P^2) / 2,       h0 = sqrt(4 H0^2 - P0^2),
//! ```
//!
//! a Riccati equation solved by a Moebius function of `e^{h0 t}`, while the
//! energy identity `2 H0^2 = (P0^2 + P^2)/2 + (P0^2 - P^2) e^{-Q} / 2` turns
//! `Q` into an explicit function of `P`. Opposite-sign pairs (`p1 p2 < 0`)
//! blow up: `P -> -inf` and `Q -> 0` at
//!
//! ```text
//!   t_x = ln((P(0) - h0) / (P(0) + h0)) / h0,
//! ```
//!
//! which is real exactly when `(P(0) - h0)(P(0) + h0) > 0`. The center of
//! momentum `q1 + q2` has no closed form here and is recovered by quadrature
//! of `(q1 + q2)' = P0 (1 + e^{-Q})`.

use crate::error::{Error, Result};
use crate::profile::PeakonConfig;

/// Reduced two-peakon variables at the initial time.
#[derive(Debug, Clone, Copy)]
pub struct TwoPeakonReduced {
    /// Conserved total momentum `p1 + p2`.
    pub p0: f64,
    /// Initial difference `P(0) = p2 - p1`.
    pub p_diff: f64,
    /// Initial gap `Q(0) = q2 - q1 > 0`.
    pub q_gap: f64,
    /// Conserved energy `H0^2 = H(p, q)`.
    pub h0sq: f64,
    /// `h0 = sqrt(4 H0^2 - P0^2)`, the asymptotic value of `|P|`.
    pub h0: f64,
    s0: f64,
}

impl TwoPeakonReduced {
    pub fn from_config(init: &PeakonConfig) -> Result<Self> {
        if init.len() != 2 {
            return Err(Error::Dynamics(format!(
                "two-peakon reduction needs N = 2, got {}",
                init.len()
            )));
        }
        let [a, b] = [init.peaks()[0], init.peaks()[1]];
        let p0 = a.p + b.p;
        let p_diff = b.p - a.p;
        let q_gap = b.q - a.q;
        let h0sq = init.hamiltonian();
        let h0sq4 = 4.0 * h0sq - p0 * p0;
        if h0sq4 <= 0.0 {
            return Err(Error::Dynamics("degenerate pair: 4 H0^2 <= P0^2".into()));
        }
        let reduced = TwoPeakonReduced {
            p0,
            p_diff,
            q_gap,
            h0sq,
            h0: h0sq4.sqrt(),
            s0: a.q + b.q,
        };
        // energy identity must hold at construction
        let lhs = 2.0 * h0sq;
        let rhs =
            0.5 * (p0 * p0 + p_diff * p_diff) + 0.5 * (p0 * p0 - p_diff * p_diff) * (-q_gap).exp();
        if (lhs - rhs).abs() > 1e-12 * lhs.abs().max(1.0) {
            return Err(Error::Dynamics("energy identity violated".into()));
        }
        Ok(reduced)
    }

    fn alpha(&self) -> f64 {
        self.p_diff + self.h0
    }

    fn beta(&self) -> f64 {
        self.p_diff - self.h0
    }

    /// `P(t) = p2 - p1`. Evaluated with `e^{-h0 t}` for `t >= 0` and
    /// `e^{h0 t}` for `t < 0` so neither branch can overflow.
    pub fn p_at(&self, t: f64) -> f64 {
        let (alpha, beta) = (self.alpha(), self.beta());
        if t >= 0.0 {
            let em = (-self.h0 * t).exp();
            self.h0 * (alpha + beta * em) / (alpha - beta * em)
        } else {
            let e = (self.h0 * t).exp();
            self.h0 * (alpha * e + beta) / (alpha * e - beta)
        }
    }

    /// `e^{-Q(t)}`, from the energy identity with the cancellation
    /// `h0^2 - P^2 = -4 alpha beta h0^2 e^{h0 t} / (alpha e^{h0 t} - beta)^2`
    /// carried out analytically.
    pub fn exp_neg_gap_at(&self, t: f64) -> f64 {
        let (alpha, beta) = (self.alpha(), self.beta());
        let p0sq = self.p0 * self.p0;
        let h0sq = self.h0 * self.h0;
        if t >= 0.0 {
            let em = (-self.h0 * t).exp();
            let u = alpha - beta * em;
            let v = alpha + beta * em;
            -4.0 * alpha * beta * h0sq * em / (p0sq * u * u - h0sq * v * v)
        } else {
            let e = (self.h0 * t).exp();
            let u = alpha * e - beta;
            let v = alpha * e + beta;
            -4.0 * alpha * beta * h0sq * e / (p0sq * u * u - h0sq * v * v)
        }
    }

    /// `Q(t) = q2 - q1`.
    pub fn gap_at(&self, t: f64) -> f64 {
        -self.exp_neg_gap_at(t).ln()
    }

    /// Finite blow-up time, when the pair has opposite signs. The returned
    /// time is negative when the collision lies in the past of the initial
    /// data (the pair separates forward in time).
    pub fn blowup_time(&self) -> Option<f64> {
        let (alpha, beta) = (self.alpha(), self.beta());
        if alpha * beta > 0.0 {
            Some((beta / alpha).ln() / self.h0)
        } else {
            None
        }
    }
}

/// Simpson-rule adaptive quadrature.
fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (left, ml, fml) = simpson(f, a, fa, m, fm);
        let (right, mr, fmr) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, left, ml, fml, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, right, mr, fmr, 0.5 * tol, depth - 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let (fa, fb) = (f(a), f(b));
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 48)
}

fn guard_blowup(reduced: &TwoPeakonReduced, t: f64) -> Result<()> {
    if let Some(tx) = reduced.blowup_time() {
        let crosses = (tx > 0.0 && t >= tx) || (tx < 0.0 && t <= tx);
        if crosses {
            return Err(Error::BeyondBlowup { t_blowup: tx });
        }
    }
    Ok(())
}

/// Exact two-peakon state at time `t`, valid on the maximal interval around
/// `t = 0` free of collisions.
pub fn two_peakon_exact(init: &PeakonConfig, t: f64) -> Result<PeakonConfig> {
    let reduced = TwoPeakonReduced::from_config(init)?;
    guard_blowup(&reduced, t)?;
    let p = reduced.p_at(t);
    let gap = reduced.gap_at(t);
    // center of momentum by quadrature; constant when P0 = 0
    let s = if reduced.p0 == 0.0 {
        reduced.s0
    } else {
        let rate = |tau: f64| reduced.p0 * (1.0 + reduced.exp_neg_gap_at(tau));
        reduced.s0 + adaptive_simpson(&rate, 0.0, t, 1e-13 * (1.0 + t.abs()))
    };
    let p1 = 0.5 * (reduced.p0 - p);
    let p2 = 0.5 * (reduced.p0 + p);
    let q1 = 0.5 * (s - gap);
    let q2 = 0.5 * (s + gap);
    PeakonConfig::new([(p1, q1), (p2, q2)])
        .map_err(|e| Error::Dynamics(format!("closed form left the phase space: {e}")))
}

/// Finite blow-up time of a two-peakon configuration, when one exists:
/// `t_x = ln((P(0) - h0)/(P(0) + h0)) / h0` if `(P(0) - h0)(P(0) + h0) > 0`
/// (equivalently `p1 p2 < 0`), `None` for same-sign pairs.
pub fn two_peakon_blowup_time(init: &PeakonConfig) -> Result<Option<f64>> {
    Ok(TwoPeakonReduced::from_config(init)?.blowup_time())
}
