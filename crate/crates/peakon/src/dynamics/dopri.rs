//! Embedded Dormand-Prince 5(4) stepper with the classical 4th-order dense
//! output interpolant, used for trajectory recording and collision event
//! localization by bisection.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const A7: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
// bhat - b: error estimator weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// dense output weights
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// Dense representation of one accepted step on `[t0, t0 + h]`.
#[derive(Debug, Clone)]
pub struct DenseStep {
    pub t0: f64,
    pub h: f64,
    rcont: [Vec<f64>; 5],
}

impl DenseStep {
    pub fn t_end(&self) -> f64 {
        self.t0 + self.h
    }

    /// Interpolated state at `t` within the step span.
    pub fn eval(&self, t: f64, out: &mut [f64]) {
        let theta = if self.h == 0.0 {
            0.0
        } else {
            (t - self.t0) / self.h
        };
        let s1 = 1.0 - theta;
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.rcont[0][i]
                + theta
                    * (self.rcont[1][i]
                        + s1 * (self.rcont[2][i]
                            + theta * (self.rcont[3][i] + s1 * self.rcont[4][i])));
        }
    }
}

pub struct Dopri5<F> {
    f: F,
    pub t: f64,
    pub y: Vec<f64>,
    h: f64,
    k1: Vec<f64>,
    rtol: f64,
    atol: f64,
    max_steps: usize,
    pub steps: usize,
    pub rejected: usize,
}

impl<F: FnMut(f64, &[f64], &mut [f64])> Dopri5<F> {
    pub fn new(mut f: F, t0: f64, y0: Vec<f64>, rtol: f64, atol: f64, max_steps: usize) -> Self {
        let mut k1 = vec![0.0; y0.len()];
        f(t0, &y0, &mut k1);
        let mut solver = Dopri5 {
            f,
            t: t0,
            y: y0,
            h: 0.0,
            k1,
            rtol,
            atol,
            max_steps,
            steps: 0,
            rejected: 0,
        };
        solver.h = solver.initial_step();
        solver
    }

    fn scaled_norm(&self, v: &[f64], yref: &[f64]) -> f64 {
        if v.is_empty() {
            return 0.0;
        }
        let mut acc = 0.0;
        for (x, yr) in v.iter().zip(yref) {
            let sk = self.atol + self.rtol * yr.abs();
            acc += (x / sk) * (x / sk);
        }
        (acc / v.len() as f64).sqrt()
    }

    fn initial_step(&mut self) -> f64 {
        let n = self.y.len();
        if n == 0 {
            return 1.0;
        }
        let d0 = self.scaled_norm(&self.y.clone(), &self.y);
        let d1 = self.scaled_norm(&self.k1.clone(), &self.y);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        };
        let y1: Vec<f64> = self
            .y
            .iter()
            .zip(&self.k1)
            .map(|(y, k)| y + h0 * k)
            .collect();
        let mut f1 = vec![0.0; n];
        (self.f)(self.t + h0, &y1, &mut f1);
        let df: Vec<f64> = f1.iter().zip(&self.k1).map(|(a, b)| a - b).collect();
        let d2 = self.scaled_norm(&df, &self.y) / h0;
        let dm = d1.max(d2);
        let h1 = if dm <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / dm).powf(0.2)
        };
        (100.0 * h0).min(h1)
    }

    /// Advances one accepted step, never stepping past `t_limit`. Returns the
    /// dense interpolant for the step just taken.
    pub fn step(&mut self, t_limit: f64) -> Result<DenseStep> {
        let n = self.y.len();
        let mut k = vec![vec![0.0; n]; 7];
        k[0].copy_from_slice(&self.k1);
        loop {
            if self.steps + self.rejected > self.max_steps {
                return Err(Error::Dynamics(format!(
                    "step budget exhausted at t = {}",
                    self.t
                )));
            }
            let mut h = self.h.min(t_limit - self.t);
            if h <= 0.0 {
                h = self.h;
            }
            if h.abs() <= f64::EPSILON * self.t.abs().max(1.0) * 4.0 {
                return Err(Error::StepSizeUnderflow { t: self.t });
            }

            let stage = |k: &[Vec<f64>], coeffs: &[f64], y: &[f64], h: f64| -> Vec<f64> {
                let mut out = y.to_vec();
                for (j, &a) in coeffs.iter().enumerate() {
                    if a != 0.0 {
                        for i in 0..y.len() {
                            out[i] += h * a * k[j][i];
                        }
                    }
                }
                out
            };

            let y2 = stage(&k, &A2, &self.y, h);
            (self.f)(self.t + C[1] * h, &y2, &mut k[1]);
            let y3 = stage(&k, &A3, &self.y, h);
            (self.f)(self.t + C[2] * h, &y3, &mut k[2]);
            let y4 = stage(&k, &A4, &self.y, h);
            (self.f)(self.t + C[3] * h, &y4, &mut k[3]);
            let y5 = stage(&k, &A5, &self.y, h);
            (self.f)(self.t + C[4] * h, &y5, &mut k[4]);
            let y6 = stage(&k, &A6, &self.y, h);
            (self.f)(self.t + C[5] * h, &y6, &mut k[5]);
            // 5th order solution (A7 row == b weights, FSAL)
            let ynew = stage(&k, &A7, &self.y, h);
            (self.f)(self.t + h, &ynew, &mut k[6]);

            let mut err_vec = vec![0.0; n];
            for (j, &e) in E.iter().enumerate() {
                if e != 0.0 {
                    for i in 0..n {
                        err_vec[i] += h * e * k[j][i];
                    }
                }
            }
            let mut acc = 0.0;
            for i in 0..n {
                let sk = self.atol + self.rtol * self.y[i].abs().max(ynew[i].abs());
                acc += (err_vec[i] / sk) * (err_vec[i] / sk);
            }
            let err = if n == 0 { 0.0 } else { (acc / n as f64).sqrt() };

            if err <= 1.0 {
                // dense output coefficients
                let mut rcont: [Vec<f64>; 5] = [
                    self.y.clone(),
                    vec![0.0; n],
                    vec![0.0; n],
                    vec![0.0; n],
                    vec![0.0; n],
                ];
                for i in 0..n {
                    let ydiff = ynew[i] - self.y[i];
                    let bspl = h * k[0][i] - ydiff;
                    rcont[1][i] = ydiff;
                    rcont[2][i] = bspl;
                    rcont[3][i] = ydiff - h * k[6][i] - bspl;
                }
                for (j, &d) in D.iter().enumerate() {
                    if d != 0.0 {
                        for i in 0..n {
                            rcont[4][i] += h * d * k[j][i];
                        }
                    }
                }
                let step = DenseStep {
                    t0: self.t,
                    h,
                    rcont,
                };
                self.t += h;
                self.y = ynew;
                self.k1.copy_from_slice(&k[6]);
                self.steps += 1;
                let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
                self.h = h * fac;
                return Ok(step);
            }
            self.rejected += 1;
            let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            self.h = h * fac;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_exponential_decay() {
        let mut solver = Dopri5::new(
            |_t, y: &[f64], dy: &mut [f64]| dy[0] = -y[0],
            0.0,
            vec![1.0],
            1e-10,
            1e-12,
            100_000,
        );
        while solver.t < 5.0 {
            solver.step(5.0).unwrap();
        }
        assert!((solver.t - 5.0).abs() < 1e-12);
        assert!((solver.y[0] - (-5.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn dense_output_matches_harmonic_oscillator() {
        let mut solver = Dopri5::new(
            |_t, y: &[f64], dy: &mut [f64]| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            0.0,
            vec![1.0, 0.0],
            1e-11,
            1e-13,
            100_000,
        );
        let mut out = [0.0, 0.0];
        while solver.t < 6.0 {
            let step = solver.step(6.0).unwrap();
            let tm = step.t0 + 0.37 * step.h;
            step.eval(tm, &mut out);
            assert!(
                (out[0] - tm.cos()).abs() < 1e-8,
                "dense output at {tm}: {} vs {}",
                out[0],
                tm.cos()
            );
        }
    }
}
