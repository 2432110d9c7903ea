//! Forward spectral transform for the point-mass isospectral problem
//!
//! ```text
//!     -y'' + y/4 = z y omega + z^2 y upsilon,
//! ```
//!
//! where `omega = 2 sum p_n delta_{q_n}` is the momentum of a multi-peakon and
//! `upsilon` is the (usually empty) singular energy measure of a conservative
//! state. Away from the atoms every solution is `A e^{x/2} + B e^{-x/2}`; an
//! atom at `x0` leaves the value untouched and kicks the derivative by
//! `-J(z) y(x0)` with jump polynomial `J(z) = z w_omega + z^2 w_upsilon`.
//!
//! Propagating the interface conditions in coefficient form gives the Jost
//! solutions `phi_-` (equal to `e^{x/2}` left of everything) and `phi_+`
//! (equal to `e^{-x/2}` right of everything) with entries that are exact real
//! polynomials in `z`; the Wronskian, eigenvalues, norming constants, and
//! coupling constants all come out of that finite propagation without any
//! sampling.

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::profile::{ConservativeState, PeakonConfig};

/// A point interaction of the spectral problem: position, momentum weight
/// (`2 p_n` for a peakon) and singular energy weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SpectralAtom {
    pub x: f64,
    pub omega: f64,
    pub upsilon: f64,
}

impl SpectralAtom {
    fn jump(&self) -> Polynomial {
        Polynomial::from_coeffs(vec![0.0, self.omega, self.upsilon])
    }
}

pub(crate) fn config_atoms(config: &PeakonConfig) -> Vec<SpectralAtom> {
    config
        .peaks()
        .iter()
        .map(|pk| SpectralAtom {
            x: pk.q,
            omega: 2.0 * pk.p,
            upsilon: 0.0,
        })
        .collect()
}

/// Atoms of a conservative state: momentum atoms from the peakon part merged
/// with singular energy atoms (a shared position contributes to both weights).
pub(crate) fn state_atoms(state: &ConservativeState) -> Vec<SpectralAtom> {
    let mut atoms = config_atoms(&state.peaks);
    for a in state.singular_energy.atoms() {
        match atoms.iter_mut().find(|s| s.x == a.x) {
            Some(s) => s.upsilon += a.w,
            None => atoms.push(SpectralAtom {
                x: a.x,
                omega: 0.0,
                upsilon: a.w,
            }),
        }
    }
    atoms.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());
    atoms
}

/// Which spatial infinity the Jost solution is normalized at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `phi_+`, equal to `e^{-x/2}` near `+inf`.
    Plus,
    /// `phi_-`, equal to `e^{+x/2}` near `-inf`.
    Minus,
}

/// Piecewise Jost solution: on interval `i` (between interface points `i-1`
/// and `i`) the solution is `A_i(z) e^{x/2} + B_i(z) e^{-x/2}` with real
/// polynomial coefficients.
#[derive(Debug, Clone)]
pub struct JostSolution {
    direction: Direction,
    boundaries: Vec<f64>,
    pieces: Vec<(Polynomial, Polynomial)>,
}

impl JostSolution {
    pub(crate) fn propagate(atoms: &[SpectralAtom], direction: Direction) -> Self {
        let n = atoms.len();
        let mut pieces = vec![(Polynomial::zero(), Polynomial::zero()); n + 1];
        match direction {
            Direction::Minus => {
                pieces[0] = (Polynomial::one(), Polynomial::zero());
                for (k, atom) in atoms.iter().enumerate() {
                    let (a, b) = &pieces[k];
                    let j = atom.jump();
                    // derivative kick at the atom, regrouped on the
                    // exponential basis of the next interval
                    let s_minus = a.add(&b.scale((-atom.x).exp()));
                    let s_plus = a.scale(atom.x.exp()).add(b);
                    let a_next = a.sub(&j.mul(&s_minus));
                    let b_next = b.add(&j.mul(&s_plus));
                    pieces[k + 1] = (a_next, b_next);
                }
            }
            Direction::Plus => {
                pieces[n] = (Polynomial::zero(), Polynomial::one());
                for (k, atom) in atoms.iter().enumerate().rev() {
                    let (a, b) = &pieces[k + 1];
                    let j = atom.jump();
                    let s_minus = a.add(&b.scale((-atom.x).exp()));
                    let s_plus = a.scale(atom.x.exp()).add(b);
                    let a_prev = a.add(&j.mul(&s_minus));
                    let b_prev = b.sub(&j.mul(&s_plus));
                    pieces[k] = (a_prev, b_prev);
                }
            }
        }
        JostSolution {
            direction,
            boundaries: atoms.iter().map(|a| a.x).collect(),
            pieces,
        }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Interface positions separating the pieces.
    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    /// Coefficient pair `(A_i, B_i)` of piece `i`; piece 0 is unbounded to the
    /// left, piece `boundaries().len()` unbounded to the right.
    pub fn piece(&self, i: usize) -> (&Polynomial, &Polynomial) {
        (&self.pieces[i].0, &self.pieces[i].1)
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    fn piece_index(&self, x: f64) -> usize {
        self.boundaries.partition_point(|&b| b <= x)
    }

    /// Value at `(z, x)`.
    pub fn eval(&self, z: f64, x: f64) -> f64 {
        let (a, b) = self.piece(self.piece_index(x));
        a.eval(z) * (0.5 * x).exp() + b.eval(z) * (-0.5 * x).exp()
    }

    /// Spatial derivative at `(z, x)` away from the interfaces.
    pub fn eval_deriv(&self, z: f64, x: f64) -> f64 {
        let (a, b) = self.piece(self.piece_index(x));
        0.5 * a.eval(z) * (0.5 * x).exp() - 0.5 * b.eval(z) * (-0.5 * x).exp()
    }
}

/// Jost solution of a peakon configuration.
pub fn jost_solution(config: &PeakonConfig, direction: Direction) -> JostSolution {
    JostSolution::propagate(&config_atoms(config), direction)
}

pub(crate) fn wronskian_of_atoms(atoms: &[SpectralAtom]) -> Polynomial {
    // W = A_- B_+ - A_+ B_- is piece-independent; on the rightmost piece
    // phi_+ = (0, 1), so W is the leading A coefficient of phi_-.
    let minus = JostSolution::propagate(atoms, Direction::Minus);
    minus.pieces.last().unwrap().0.clone()
}

/// Wronskian `W(z) = phi_+ phi_-' - phi_+' phi_-` of a configuration, as an
/// exact coefficient polynomial of degree `N` with `W(0) = 1`. Its roots are
/// the eigenvalues.
pub fn wronskian_polynomial(config: &PeakonConfig) -> Polynomial {
    wronskian_of_atoms(&config_atoms(config))
}

pub(crate) fn eigenvalues_of_atoms(atoms: &[SpectralAtom]) -> Result<Vec<f64>> {
    let w = wronskian_of_atoms(atoms);
    let roots = w.real_simple_roots()?;
    if roots.contains(&0.0) {
        return Err(Error::Spectral("vanishing eigenvalue".into()));
    }
    Ok(roots)
}

/// The `N` real simple eigenvalues of a configuration, ascending.
pub fn eigenvalues(config: &PeakonConfig) -> Result<Vec<f64>> {
    if config.is_empty() {
        return Err(Error::Spectral(
            "eigenvalues of the empty configuration are undefined".into(),
        ));
    }
    let sigma = eigenvalues_of_atoms(&config_atoms(config))?;
    if sigma.len() != config.len() {
        return Err(Error::Spectral(format!(
            "expected {} eigenvalues, found {}",
            config.len(),
            sigma.len()
        )));
    }
    Ok(sigma)
}

/// Eigenvalues of the generalized problem attached to a conservative state.
pub fn eigenvalues_of_state(state: &ConservativeState) -> Result<Vec<f64>> {
    eigenvalues_of_atoms(&state_atoms(state))
}

fn check_eigenvalue_residual(w: &Polynomial, lambda: f64) -> Result<()> {
    let scale = w.eval_scale(lambda).max(f64::MIN_POSITIVE);
    if w.eval(lambda).abs() > 1e-8 * scale {
        return Err(Error::Spectral(format!(
            "z = {lambda} is not an eigenvalue (Wronskian residual too large)"
        )));
    }
    Ok(())
}

pub(crate) fn norming_constants_of_atoms(
    atoms: &[SpectralAtom],
    sigma: &[f64],
) -> Result<Vec<f64>> {
    let minus = JostSolution::propagate(atoms, Direction::Minus);
    let n = atoms.len();
    let w = minus.pieces[n].0.clone();
    let mut gammas = Vec::with_capacity(sigma.len());
    for &lambda in sigma {
        check_eigenvalue_residual(&w, lambda)?;
        // On each interval |phi'|^2 + |phi|^2/4 = (A^2/2) e^x + (B^2/2) e^{-x},
        // so the energy integral telescopes into boundary exponentials. The
        // leftmost piece has B = 0, the rightmost has A = W(lambda) ~ 0 (the
        // residual check above licenses dropping it).
        let mut inv_gamma = 0.0;
        for k in 0..=n {
            let a = if k == n {
                0.0
            } else {
                minus.pieces[k].0.eval(lambda)
            };
            let b = minus.pieces[k].1.eval(lambda);
            // piece k spans (x_{k-1}, x_k); exp terms vanish at the open ends
            let e_hi = if k == n { 0.0 } else { atoms[k].x.exp() };
            let e_lo = if k == 0 { 0.0 } else { atoms[k - 1].x.exp() };
            let em_lo = if k == 0 { 0.0 } else { (-atoms[k - 1].x).exp() };
            let em_hi = if k == n { 0.0 } else { (-atoms[k].x).exp() };
            inv_gamma += 0.5 * a * a * (e_hi - e_lo) + 0.5 * b * b * (em_lo - em_hi);
        }
        // singular energy contribution: sum lambda^2 |phi(x_k)|^2 upsilon_k
        for atom in atoms {
            if atom.upsilon != 0.0 {
                let phi = minus.eval(lambda, atom.x);
                inv_gamma += lambda * lambda * phi * phi * atom.upsilon;
            }
        }
        if !(inv_gamma > 0.0) {
            return Err(Error::Spectral(format!(
                "norming integral not positive at lambda = {lambda}"
            )));
        }
        gammas.push(1.0 / inv_gamma);
    }
    Ok(gammas)
}

/// Norming constants `gamma_lambda`: reciprocals of the `H^1`-type energy of
/// `phi_-` at each eigenvalue, evaluated in closed form piecewise. All results
/// are strictly positive.
pub fn norming_constants(config: &PeakonConfig, sigma: &[f64]) -> Result<Vec<f64>> {
    norming_constants_of_atoms(&config_atoms(config), sigma)
}

/// Modified norming constants of a conservative state, including the singular
/// energy term `int |lambda phi_-|^2 dupsilon`.
pub fn modified_norming_constants(state: &ConservativeState, sigma: &[f64]) -> Result<Vec<f64>> {
    norming_constants_of_atoms(&state_atoms(state), sigma)
}

/// Free-interval propagator of `(y, y')` for `-y'' + y/4 = 0` over distance
/// `d` (works in both directions).
fn propagate_free(v: f64, dv: f64, d: f64) -> (f64, f64) {
    let ch = (0.5 * d).cosh();
    let sh = (0.5 * d).sinh();
    (v * ch + dv * 2.0 * sh, v * 0.5 * sh + dv * ch)
}

pub(crate) fn coupling_constants_of_atoms(
    atoms: &[SpectralAtom],
    sigma: &[f64],
) -> Result<Vec<f64>> {
    let n = atoms.len();
    if n == 0 {
        return Err(Error::Spectral("no atoms, no coupling constants".into()));
    }
    let w = wronskian_of_atoms(atoms);
    let mut couplings = Vec::with_capacity(sigma.len());
    for &lambda in sigma {
        check_eigenvalue_residual(&w, lambda)?;
        // March phi_- and phi_+ as (value, derivative) data instead of global
        // exponential coefficients: every intermediate stays the size of the
        // solution itself, so widely separated peaks cannot force e^{q_i-q_j}
        // cancellations. Both solutions are recorded on the right face of
        // every atom, together with a conditioning bound: marching a solution
        // beyond the atom it is bound to contaminates it with the growing
        // mode, amplified by e^{gap/2} per free interval.
        let norm = |v: f64, dv: f64| (v * v + 4.0 * dv * dv).sqrt();
        let kick = |a: &SpectralAtom| lambda * a.omega + lambda * lambda * a.upsilon;

        let mut minus_vals = Vec::with_capacity(n);
        let mut minus_cond = Vec::with_capacity(n);
        let (mut v, mut dv) = ((0.5 * atoms[0].x).exp(), 0.5 * (0.5 * atoms[0].x).exp());
        let mut g = norm(v, dv);
        for k in 0..n {
            if k > 0 {
                let d = atoms[k].x - atoms[k - 1].x;
                (v, dv) = propagate_free(v, dv, d);
                g *= (0.5 * d).exp();
            }
            let j = kick(&atoms[k]);
            dv -= j * v;
            g *= 1.0 + 2.0 * j.abs();
            g = g.max(norm(v, dv));
            minus_vals.push((v, dv));
            minus_cond.push(g / norm(v, dv));
        }

        let mut plus_vals = vec![(0.0, 0.0); n];
        let mut plus_cond = vec![0.0; n];
        let (mut v, mut dv) = (
            (-0.5 * atoms[n - 1].x).exp(),
            -0.5 * (-0.5 * atoms[n - 1].x).exp(),
        );
        let mut g = norm(v, dv);
        for k in (0..n).rev() {
            if k < n - 1 {
                let d = atoms[k + 1].x - atoms[k].x;
                (v, dv) = propagate_free(v, dv, -d);
                g *= (0.5 * d).exp();
            }
            // arriving from the right: this is already the right face
            g = g.max(norm(v, dv));
            plus_vals[k] = (v, dv);
            plus_cond[k] = g / norm(v, dv);
            let j = kick(&atoms[k]);
            dv += j * v;
            g *= 1.0 + 2.0 * j.abs();
        }

        // Per-atom least-squares ratio of the (y, 2y') vectors; at an
        // eigenvalue they are proportional, and the quadratic form never
        // degenerates (value and derivative cannot vanish together). The
        // estimate at the best-conditioned atom is the coupling constant; the
        // others verify x-independence within their own conditioning.
        let estimates: Vec<f64> = (0..n)
            .map(|k| {
                let (vm, dvm) = minus_vals[k];
                let (vp, dvp) = plus_vals[k];
                (vp * vm + 4.0 * dvp * dvm) / (vm * vm + 4.0 * dvm * dvm)
            })
            .collect();
        let conds: Vec<f64> = (0..n).map(|k| minus_cond[k] + plus_cond[k]).collect();
        let best = (0..n)
            .min_by(|&a, &b| conds[a].partial_cmp(&conds[b]).unwrap())
            .unwrap();
        let c = estimates[best];
        if c == 0.0 || !c.is_finite() {
            return Err(Error::Spectral(format!(
                "degenerate coupling constant at lambda = {lambda}"
            )));
        }
        for (k, r) in estimates.iter().enumerate() {
            if (r - c).abs() > 1e-10 * conds[k].max(1.0) * c.abs() {
                return Err(Error::Spectral(format!(
                    "coupling ratio varies across intervals at lambda = {lambda} \
                     (atom {k}: {r} vs {c}, conditioning {:.2e})",
                    conds[k]
                )));
            }
        }
        couplings.push(c);
    }
    Ok(couplings)
}

/// Coupling constants `c_lambda = phi_+ / phi_-` at each eigenvalue, verified
/// x-independent across all intervals.
pub fn coupling_constants(config: &PeakonConfig, sigma: &[f64]) -> Result<Vec<f64>> {
    coupling_constants_of_atoms(&config_atoms(config), sigma)
}

/// String coefficients of the Liouville image of the momentum measure:
/// `m_n = 8 p_n cosh^2(q_n / 2)` and interval lengths
/// `l_n = (tanh(q_{n+1}/2) - tanh(q_n/2)) / 2` with `q_0 = -inf`,
/// `q_{N+1} = +inf`, so that `sum l_n = 1` by telescoping.
pub fn string_coefficients(config: &PeakonConfig) -> (Vec<f64>, Vec<f64>) {
    let n = config.len();
    let mut m = Vec::with_capacity(n);
    let mut l = Vec::with_capacity(n + 1);
    for pk in config.peaks() {
        let c = (0.5 * pk.q).cosh();
        m.push(8.0 * pk.p * c * c);
    }
    if n == 0 {
        l.push(1.0);
        return (m, l);
    }
    let q = config.positions();
    // Stable forms: 1 + tanh(y) = e^y / cosh(y) and
    // tanh(b) - tanh(a) = sinh(b - a) / (cosh(a) cosh(b)).
    l.push(0.5 * (0.5 * q[0]).exp() / (0.5 * q[0]).cosh());
    for k in 0..n - 1 {
        let (a, b) = (0.5 * q[k], 0.5 * q[k + 1]);
        l.push(0.5 * (b - a).sinh() / (a.cosh() * b.cosh()));
    }
    l.push(0.5 * (-0.5 * q[n - 1]).exp() / (0.5 * q[n - 1]).cosh());
    (m, l)
}

/// Spectral data of a configuration: eigenvalues with norming and coupling
/// constants. Eigenvalues are ascending; all `gamma > 0`, all `c != 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    pub gammas: Vec<f64>,
    pub couplings: Vec<f64>,
}

impl SpectralData {
    pub fn new(eigenvalues: Vec<f64>, gammas: Vec<f64>, couplings: Vec<f64>) -> Result<Self> {
        if eigenvalues.len() != gammas.len() || eigenvalues.len() != couplings.len() {
            return Err(Error::Spectral("spectral data length mismatch".into()));
        }
        if eigenvalues.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Spectral(
                "eigenvalues not strictly increasing".into(),
            ));
        }
        if eigenvalues.iter().any(|&l| l == 0.0 || !l.is_finite()) {
            return Err(Error::Spectral("eigenvalues must be nonzero reals".into()));
        }
        if gammas.iter().any(|&g| !(g > 0.0) || !g.is_finite()) {
            return Err(Error::Spectral("norming constants must be positive".into()));
        }
        if couplings.iter().any(|&c| c == 0.0 || !c.is_finite()) {
            return Err(Error::Spectral("coupling constants must be nonzero".into()));
        }
        Ok(Self {
            eigenvalues,
            gammas,
            couplings,
        })
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// Full forward transform of a configuration.
pub fn forward_transform(config: &PeakonConfig) -> Result<SpectralData> {
    let sigma = eigenvalues(config)?;
    let gammas = norming_constants(config, &sigma)?;
    let couplings = coupling_constants(config, &sigma)?;
    SpectralData::new(sigma, gammas, couplings)
}
