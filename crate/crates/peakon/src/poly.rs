//! Real polynomials in coefficient form (ascending degree), with the root
//! finder used for Wronskian eigenvalue computation: companion-matrix
//! eigenvalues for initial estimates, Newton polishing with a deflation guard,
//! and a bisection fallback on sign changes. The Wronskians handled here have
//! exclusively real simple roots, which the finder verifies.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Real-coefficient polynomial, coefficients ascending. The zero polynomial
/// has no coefficients; otherwise the trailing (leading-degree) coefficient is
/// nonzero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![1.0] }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c z` for a single transfer-jump coefficient.
    pub fn linear_z(c: f64) -> Self {
        Self::from_coeffs(vec![0.0, c])
    }

    /// Builds from ascending coefficients, trimming exact trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Magnitude scale `sum |c_i| |x|^i` for relative residual tests.
    pub fn eval_scale(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0f64, |acc, &c| acc * ax + c.abs())
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        Polynomial::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| (i + 1) as f64 * c)
                .collect(),
        )
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Polynomial::from_coeffs(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        Polynomial::from_coeffs(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::from_coeffs(out)
    }

    /// All real roots of a polynomial known to have exclusively real simple
    /// roots. Companion-matrix eigenvalues seed Newton iteration; roots that
    /// fail to polish (or collapse onto a neighbor) are recovered by bisection
    /// between the polished neighbors. Returns roots in ascending order.
    pub fn real_simple_roots(&self) -> Result<Vec<f64>> {
        let n = match self.degree() {
            None | Some(0) => return Ok(Vec::new()),
            Some(n) => n,
        };
        let lead = *self.coeffs.last().unwrap();

        // Rescale z = s w so the companion matrix is well balanced: with
        // W(0) != 0 pick s = |c_0 / c_n|^(1/n), putting the root geometric
        // mean near 1.
        let c0 = self.coeffs[0];
        let s = if c0 != 0.0 {
            (c0.abs() / lead.abs()).powf(1.0 / n as f64)
        } else {
            1.0
        };
        let mut scaled = Vec::with_capacity(n + 1);
        let mut pw = 1.0;
        for &c in &self.coeffs {
            scaled.push(c * pw);
            pw *= s;
        }
        let slead = *scaled.last().unwrap();

        let mut companion = DMatrix::zeros(n, n);
        for i in 0..n {
            companion[(i, n - 1)] = -scaled[i] / slead;
        }
        for i in 1..n {
            companion[(i, i - 1)] = 1.0;
        }
        let mut estimates: Vec<f64> = companion
            .complex_eigenvalues()
            .iter()
            .map(|z| z.re * s)
            .collect();
        estimates.sort_by(|a, b| a.partial_cmp(b).unwrap());

        let deriv = self.derivative();
        let mut roots = Vec::with_capacity(n);
        for (i, &est) in estimates.iter().enumerate() {
            match self.polish_newton(&deriv, est) {
                Some(root) if !Self::collides(&roots, root, &estimates) => roots.push(root),
                _ => {
                    // Bisection fallback in the bracket delimited by the
                    // neighboring estimates (Cauchy bound at the ends).
                    let bound = 1.0
                        + self.coeffs[..n]
                            .iter()
                            .map(|c| (c / lead).abs())
                            .fold(0.0, f64::max);
                    let lo = if i == 0 {
                        -bound
                    } else {
                        0.5 * (estimates[i - 1] + est)
                    };
                    let hi = if i + 1 == n {
                        bound
                    } else {
                        0.5 * (est + estimates[i + 1])
                    };
                    let root = self.bisect(lo, hi).ok_or_else(|| {
                        Error::Spectral(format!(
                            "root polishing failed near z = {est}: no sign change in [{lo}, {hi}]"
                        ))
                    })?;
                    roots.push(root);
                }
            }
        }
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());

        // Simplicity check: the roots of a Wronskian are distinct.
        let span = roots.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        for w in roots.windows(2) {
            if (w[1] - w[0]).abs() <= 1e-12 * span {
                return Err(Error::Spectral(format!(
                    "roots {} and {} did not separate; conditioning failure",
                    w[0], w[1]
                )));
            }
        }
        if roots.len() != n {
            return Err(Error::Spectral("lost a root during polishing".into()));
        }
        Ok(roots)
    }

    fn collides(accepted: &[f64], candidate: f64, estimates: &[f64]) -> bool {
        let span = estimates.iter().fold(1e-300f64, |m, e| m.max(e.abs()));
        accepted
            .iter()
            .any(|&r| (r - candidate).abs() <= 1e-12 * span)
    }

    fn polish_newton(&self, deriv: &Polynomial, mut x: f64) -> Option<f64> {
        for _ in 0..60 {
            let f = self.eval(x);
            let scale = self.eval_scale(x).max(f64::MIN_POSITIVE);
            if f.abs() <= 1e-14 * scale {
                return Some(x);
            }
            let d = deriv.eval(x);
            if d == 0.0 || !d.is_finite() {
                return None;
            }
            let step = f / d;
            if !step.is_finite() {
                return None;
            }
            x -= step;
        }
        let scale = self.eval_scale(x).max(f64::MIN_POSITIVE);
        if self.eval(x).abs() <= 1e-13 * scale {
            Some(x)
        } else {
            None
        }
    }

    fn bisect(&self, mut lo: f64, mut hi: f64) -> Option<f64> {
        let mut flo = self.eval(lo);
        let fhi = self.eval(hi);
        if flo == 0.0 {
            return Some(lo);
        }
        if fhi == 0.0 {
            return Some(hi);
        }
        if flo.signum() == fhi.signum() {
            return None;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let fm = self.eval(mid);
            if fm == 0.0 || (hi - lo).abs() <= f64::EPSILON * mid.abs() {
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
}
