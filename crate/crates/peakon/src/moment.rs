//! Inverse spectral transform via the Stieltjes moment problem.
//!
//! From spectral data `(sigma, gamma)` the pipeline runs
//!
//! ```text
//!   moments -> hankel_determinants -> stieltjes_coefficients
//!           -> peakons_from_coefficients
//! ```
//!
//! recovering the string coefficients `(m_n, l_n)` and from them the peakon
//! masses and positions. A vanishing Stieltjes denominator is not a failure of
//! the method: it happens exactly when two adjacent peaks collide, and is
//! reported as a [`CollisionSignal`].
//!
//! Hankel determinants of moment sequences are notoriously ill-conditioned,
//! and after long spectral evolution the norming constants span hundreds of
//! orders of magnitude, so every step from the moments onward is carried out
//! in exact rational arithmetic. `f64` inputs are embedded exactly (every
//! finite double is a dyadic rational); native rational inputs stay exact all
//! the way to the recovered coefficients.
//!
//! Index convention: `Delta[a][k]` is the `k x k` leading determinant with
//! `Delta[a][0] = 1` (empty determinant). Under this convention the
//! single-peakon data forces `m_1 = 8`, `l_0 = 1/2`, which the tests pin down.
//! The final interval length `l_N` is recovered from the total-length
//! constraint `sum l_n = 1`, since the moment sequence of `N` atoms has rank
//! `N` and offers no further determinant.

use crate::error::{CollisionSignal, Error, Result};
use crate::profile::PeakonConfig;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact conversion of a finite `f64` into a rational.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::MomentInverse(format!("non-finite value {x}")))
}

/// Exact power of two as `f64`: zero below the subnormal range, infinity above
/// the normal range. (`powi` is unusable here: it overflows internally for
/// large negative exponents.)
fn pow2(e: i64) -> f64 {
    if e >= 1024 {
        f64::INFINITY
    } else if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else if e >= -1074 {
        f64::from_bits(1u64 << (e + 1074) as u64)
    } else {
        0.0
    }
}

/// Rounds a rational to the nearest `f64`, correctly handling magnitudes far
/// outside the exponent range of intermediate conversions.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let num = r.numer().abs();
    let den = r.denom().abs();
    // Scale so the integer quotient keeps ~60 significant bits, then undo the
    // scaling with exact powers of two (split so neither factor overflows).
    let shift = 60i64 + den.bits() as i64 - num.bits() as i64;
    let scaled = if shift >= 0 {
        num << shift as u64
    } else {
        num >> (-shift) as u64
    };
    let q = (scaled / den).to_f64().unwrap_or(f64::INFINITY);
    let mag = (q * pow2(-60)) * pow2(60 - shift);
    if r.is_negative() {
        -mag
    } else {
        mag
    }
}

/// Moment sequence `s_0 .. s_K` of the spectral measure
/// `delta_0 + sum_lambda gamma_lambda delta_lambda`:
/// `s_0 = 1 + sum gamma` and `s_k = sum lambda^k gamma` for `k >= 1`.
///
/// The originating atoms `(lambda, gamma)` ride along so that downstream
/// determinant tolerances can bound the size of the largest monomial in the
/// determinant's expansion over the atoms, which is where the cancellation at
/// a collision actually happens.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    values: Vec<BigRational>,
    atoms: Vec<(f64, f64)>,
}

impl MomentSequence {
    /// Number of stored moments (`K + 1`).
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Moment `s_k` rounded to `f64`.
    pub fn value(&self, k: usize) -> f64 {
        rational_to_f64(&self.values[k])
    }

    pub fn values(&self) -> Vec<f64> {
        self.values.iter().map(rational_to_f64).collect()
    }

    pub fn exact(&self, k: usize) -> &BigRational {
        &self.values[k]
    }
}

/// Moments of exact spectral data.
pub fn moments_exact(sigma: &[BigRational], gammas: &[BigRational], top: usize) -> MomentSequence {
    let mut values = Vec::with_capacity(top + 1);
    let s0: BigRational = gammas.iter().fold(BigRational::one(), |acc, g| acc + g);
    values.push(s0);
    let mut powers: Vec<BigRational> = vec![BigRational::one(); sigma.len()];
    for _ in 1..=top {
        let mut s = BigRational::zero();
        for ((pw, lambda), gamma) in powers.iter_mut().zip(sigma).zip(gammas) {
            *pw *= lambda;
            s += &*pw * gamma;
        }
        values.push(s);
    }
    let atoms = sigma
        .iter()
        .zip(gammas)
        .map(|(l, g)| (rational_to_f64(l), rational_to_f64(g)))
        .collect();
    MomentSequence { values, atoms }
}

/// Moments of `f64` spectral data (embedded exactly).
pub fn moments(sigma: &[f64], gammas: &[f64], top: usize) -> Result<MomentSequence> {
    let sig: Vec<BigRational> = sigma
        .iter()
        .map(|&x| rational_from_f64(x))
        .collect::<Result<_>>()?;
    let gam: Vec<BigRational> = gammas
        .iter()
        .map(|&x| rational_from_f64(x))
        .collect::<Result<_>>()?;
    Ok(moments_exact(&sig, &gam, top))
}

/// Hankel determinants `Delta_0[k] = det(s_{i+j})` and
/// `Delta_1[k] = det(s_{i+j+1})` for `k x k` leading blocks, `k = 0 .. N`,
/// together with log2 monomial-size bounds used by the collision tolerance.
#[derive(Debug, Clone)]
pub struct HankelTable {
    delta0: Vec<BigRational>,
    delta1: Vec<BigRational>,
    log2_scale0: Vec<f64>,
    log2_scale1: Vec<f64>,
}

impl HankelTable {
    pub fn order(&self) -> usize {
        self.delta0.len() - 1
    }

    pub fn delta0(&self, k: usize) -> f64 {
        rational_to_f64(&self.delta0[k])
    }

    pub fn delta1(&self, k: usize) -> f64 {
        rational_to_f64(&self.delta1[k])
    }

    pub fn delta0_exact(&self, k: usize) -> &BigRational {
        &self.delta0[k]
    }

    pub fn delta1_exact(&self, k: usize) -> &BigRational {
        &self.delta1[k]
    }

    /// `|Delta_a[k]| < tol * scale_a[k]`, the float-mode collision test,
    /// carried out on logarithms so extreme dynamic ranges cannot overflow.
    fn below_tolerance(&self, family: usize, k: usize, log2_tol: f64) -> bool {
        let (d, s) = match family {
            0 => (&self.delta0[k], self.log2_scale0[k]),
            _ => (&self.delta1[k], self.log2_scale1[k]),
        };
        d.is_zero() || log2_abs(d) < log2_tol + s
    }

    fn is_exactly_zero(&self, family: usize, k: usize) -> bool {
        match family {
            0 => self.delta0[k].is_zero(),
            _ => self.delta1[k].is_zero(),
        }
    }
}

fn gcd_bigint(a: &BigInt, b: &BigInt) -> BigInt {
    let mut x = a.abs();
    let mut y = b.abs();
    while !y.is_zero() {
        let r = &x % &y;
        x = y;
        y = r;
    }
    x
}

fn lcm_bigint(a: BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    let g = gcd_bigint(&a, b);
    (a / g) * b
}

/// Exact determinant by fraction-free Bareiss elimination on a row-scaled
/// integer matrix.
fn det_exact(mat: &[Vec<BigRational>]) -> BigRational {
    let n = mat.len();
    if n == 0 {
        return BigRational::one();
    }
    // Clear denominators row by row, remembering the scaling.
    let mut scale = BigRational::one();
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for row in mat {
        let mut lcm = BigInt::one();
        for e in row {
            lcm = lcm_bigint(lcm, e.denom());
        }
        scale *= BigRational::new(BigInt::one(), lcm.clone());
        m.push(row.iter().map(|e| e.numer() * (&lcm / e.denom())).collect());
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigRational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev; // exact division by the Bareiss identity
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = BigRational::from_integer(m[n - 1][n - 1].clone()) * scale;
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// `log2 |r|`, `-inf` for zero; exact enough for tolerance comparisons.
fn log2_abs(r: &BigRational) -> f64 {
    fn log2_bigint(x: &BigInt) -> f64 {
        let bits = x.bits();
        if bits <= 52 {
            return x.to_f64().unwrap().log2();
        }
        let shift = bits - 52;
        let top = x >> shift;
        top.to_f64().unwrap().log2() + shift as f64
    }
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    log2_bigint(&r.numer().abs()) - log2_bigint(&r.denom().abs())
}

/// `log2` of the largest-monomial bound of a `k x k` Hankel determinant of
/// the atomic measure `sum w_i delta_{x_i}`: by the Heine expansion,
///
/// ```text
///   Delta_k = sum_{|S| = k} prod_{i in S} w_i prod_{i<j in S} (x_i - x_j)^2,
/// ```
///
/// a sum of monomials in the atoms, every one nonnegative for positive
/// weights. The bound is the full sum of magnitudes, accumulated in log space.
fn heine_log2_scale(atoms: &[(f64, f64)], k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    if atoms.len() < k {
        return f64::NEG_INFINITY;
    }
    let mut terms: Vec<f64> = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    fn rec(
        atoms: &[(f64, f64)],
        k: usize,
        start: usize,
        acc: f64,
        chosen: &mut Vec<usize>,
        terms: &mut Vec<f64>,
    ) {
        if chosen.len() == k {
            terms.push(acc);
            return;
        }
        if atoms.len() - start < k - chosen.len() {
            return;
        }
        for i in start..atoms.len() {
            let mut next = acc + atoms[i].1.abs().log2();
            for &j in chosen.iter() {
                next += 2.0 * (atoms[i].0 - atoms[j].0).abs().log2();
            }
            chosen.push(i);
            rec(atoms, k, i + 1, next, chosen, terms);
            chosen.pop();
        }
    }
    rec(atoms, k, 0, 0.0, &mut chosen, &mut terms);
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + terms.iter().map(|t| (t - m).exp2()).sum::<f64>().log2()
}

/// Computes the Hankel determinant table up to order `n`. Requires `2 n`
/// moments.
pub fn hankel_determinants(s: &MomentSequence, n: usize) -> Result<HankelTable> {
    if n > 0 && s.len() < 2 * n {
        return Err(Error::MomentInverse(format!(
            "need {} moments for order {n}, have {}",
            2 * n,
            s.len()
        )));
    }
    let block = |offset: usize, k: usize| -> Vec<Vec<BigRational>> {
        (0..k)
            .map(|i| (0..k).map(|j| s.values[i + j + offset].clone()).collect())
            .collect()
    };
    // Atom systems underlying the two determinant families: Delta_0 sees the
    // measure delta_0 + sum gamma delta_lambda, Delta_1 the shifted measure
    // sum (lambda gamma) delta_lambda (the unit atom at the origin drops out).
    let mut atoms0 = vec![(0.0, 1.0)];
    atoms0.extend_from_slice(&s.atoms);
    let atoms1: Vec<(f64, f64)> = s.atoms.iter().map(|&(l, g)| (l, l * g)).collect();

    let mut table = HankelTable {
        delta0: vec![BigRational::one()],
        delta1: vec![BigRational::one()],
        log2_scale0: vec![0.0],
        log2_scale1: vec![0.0],
    };
    for k in 1..=n {
        table.delta0.push(det_exact(&block(0, k)));
        table.delta1.push(det_exact(&block(1, k)));
        table.log2_scale0.push(heine_log2_scale(&atoms0, k));
        table.log2_scale1.push(heine_log2_scale(&atoms1, k));
    }
    Ok(table)
}

/// Recovered string coefficients: `N` masses and `N + 1` interval lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactCoefficients {
    pub masses: Vec<BigRational>,
    pub lengths: Vec<BigRational>,
}

fn stieltjes_core(
    table: &HankelTable,
    n: usize,
    vanished: impl Fn(&HankelTable, usize, usize) -> bool,
) -> Result<ExactCoefficients> {
    if table.order() < n {
        return Err(Error::MomentInverse(format!(
            "Hankel table of order {} too small for N = {n}",
            table.order()
        )));
    }
    // The Stieltjes formulas divide by Delta_1[1..N] and Delta_0[1..N]; scan
    // for the first vanishing denominator and report it as a collision.
    for k in 1..=n {
        if vanished(table, 1, k) || vanished(table, 0, k) {
            return Err(Error::Collision(CollisionSignal {
                hankel_index: k,
                time: None,
            }));
        }
    }
    let mut masses = Vec::with_capacity(n);
    let mut lengths = Vec::with_capacity(n + 1);
    for i in 1..=n {
        let d0 = &table.delta0[i];
        masses.push(d0 * d0 / (&table.delta1[i - 1] * &table.delta1[i]));
        let d1 = &table.delta1[i - 1];
        lengths.push(d1 * d1 / (&table.delta0[i - 1] * &table.delta0[i]));
    }
    // l_N from the total-length constraint sum l = 1.
    let partial: BigRational = lengths.iter().fold(BigRational::zero(), |a, b| a + b);
    lengths.push(BigRational::one() - partial);
    Ok(ExactCoefficients { masses, lengths })
}

/// Float-mode Stieltjes recovery: a determinant below `1e-10` times its
/// largest-monomial bound is treated as vanished (collision).
pub fn stieltjes_coefficients(table: &HankelTable, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let log2_tol = 1e-10f64.log2();
    let exact = stieltjes_core(table, n, |t, fam, k| t.below_tolerance(fam, k, log2_tol))?;
    Ok((
        exact.masses.iter().map(rational_to_f64).collect(),
        exact.lengths.iter().map(rational_to_f64).collect(),
    ))
}

/// Rational-mode Stieltjes recovery: only an exactly zero determinant is a
/// collision; the coefficients come back exact.
pub fn stieltjes_coefficients_exact(table: &HankelTable, n: usize) -> Result<ExactCoefficients> {
    stieltjes_core(table, n, |t, fam, k| t.is_exactly_zero(fam, k))
}

/// Rebuilds a peakon configuration from string coefficients:
/// `tanh(q_n / 2) = 2 sum_{k < n} l_k - 1` and `p_n = m_n / (8 cosh^2(q_n/2))`.
///
/// Positions and masses are formed from head/tail partial sums of the lengths,
/// which stays accurate when a far-out peak makes some `l` of order `e^{-|q|}`.
pub fn peakons_from_coefficients(m: &[f64], l: &[f64]) -> Result<PeakonConfig> {
    let n = m.len();
    if l.len() != n + 1 {
        return Err(Error::MomentInverse(format!(
            "need {} interval lengths for {} masses, got {}",
            n + 1,
            n,
            l.len()
        )));
    }
    let total: f64 = l.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::MomentInverse(format!(
            "interval lengths sum to {total}, expected 1"
        )));
    }
    let mut pairs = Vec::with_capacity(n);
    let mut head = 0.0f64;
    // tails[i] = l_i + ... + l_N, accumulated right-to-left
    let mut tails = vec![0.0f64; n + 2];
    for i in (0..=n).rev() {
        tails[i] = tails[i + 1] + l[i];
    }
    for (i, &mass_coeff) in m.iter().enumerate() {
        head += l[i];
        let tail = tails[i + 1];
        if !(head > 0.0) || !(tail > 0.0) {
            return Err(Error::MomentInverse(format!(
                "cumulative length at peak {} outside (0, 1)",
                i + 1
            )));
        }
        if mass_coeff == 0.0 {
            return Err(Error::MomentInverse(format!(
                "vanishing mass coefficient {}",
                i + 1
            )));
        }
        let q = (head / tail).ln();
        let p = mass_coeff * head * tail / (2.0 * total * total);
        pairs.push((p, q));
    }
    PeakonConfig::new(pairs)
        .map_err(|e| Error::MomentInverse(format!("recovered configuration invalid: {e}")))
}

fn validate_spectral_input(sigma_len: usize, gammas_len: usize) -> Result<()> {
    if sigma_len != gammas_len {
        return Err(Error::MomentInverse(
            "eigenvalue and norming constant counts differ".into(),
        ));
    }
    Ok(())
}

/// Full inverse transform `(sigma, gamma) -> PeakonConfig` in float mode.
///
/// The norming constants are pre-scaled by `1 / max(gamma)` and the recovered
/// positions translated back by `-ln max(gamma)` afterwards: rescaling every
/// `gamma` by a factor `s` is exactly the spectral image of translating the
/// configuration by `-ln s`, and the normalization keeps long-time data (where
/// the constants span hundreds of orders of magnitude) inside `f64` range.
pub fn invert_spectral(sigma: &[f64], gammas: &[f64]) -> Result<PeakonConfig> {
    validate_spectral_input(sigma.len(), gammas.len())?;
    let n = sigma.len();
    if n == 0 {
        return Ok(PeakonConfig::empty());
    }
    for &l in sigma {
        if l == 0.0 || !l.is_finite() {
            return Err(Error::MomentInverse(
                "eigenvalues must be nonzero finite".into(),
            ));
        }
    }
    for &g in gammas {
        if !(g > 0.0) || !g.is_finite() {
            return Err(Error::MomentInverse(
                "norming constants must be positive".into(),
            ));
        }
    }
    let gmax = gammas.iter().cloned().fold(f64::MIN_POSITIVE, f64::max);
    let scaled: Vec<f64> = gammas.iter().map(|g| g / gmax).collect();
    let s = moments(sigma, &scaled, (2 * n).saturating_sub(1))?;
    let table = hankel_determinants(&s, n)?;
    let (m, l) = stieltjes_coefficients(&table, n)?;
    let config = peakons_from_coefficients(&m, &l)?;
    Ok(config.translated(-gmax.ln()))
}

/// Full inverse transform on exact rational data; no rescaling, exact
/// determinants, exact coefficients. Positions and masses of the returned
/// configuration are the `f64` images of the exact coefficient formulas.
pub fn invert_spectral_exact(
    sigma: &[BigRational],
    gammas: &[BigRational],
) -> Result<PeakonConfig> {
    validate_spectral_input(sigma.len(), gammas.len())?;
    if sigma.is_empty() {
        return Ok(PeakonConfig::empty());
    }
    let exact = invert_coefficients_exact(sigma, gammas)?;
    peakons_from_coefficients(
        &exact.masses.iter().map(rational_to_f64).collect::<Vec<_>>(),
        &exact
            .lengths
            .iter()
            .map(rational_to_f64)
            .collect::<Vec<_>>(),
    )
}

/// Exact pipeline up to the string coefficients.
pub fn invert_coefficients_exact(
    sigma: &[BigRational],
    gammas: &[BigRational],
) -> Result<ExactCoefficients> {
    validate_spectral_input(sigma.len(), gammas.len())?;
    let n = sigma.len();
    if gammas.iter().any(|g| !g.is_positive()) {
        return Err(Error::MomentInverse(
            "norming constants must be positive".into(),
        ));
    }
    let s = moments_exact(sigma, gammas, (2 * n).saturating_sub(1));
    let table = hankel_determinants(&s, n)?;
    stieltjes_coefficients_exact(&table, n)
}
