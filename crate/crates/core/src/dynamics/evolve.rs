//! Time evolution `psi(t) = exp(-i H t) psi(0)` (with hbar = 1) for static
//! Hamiltonians, and `d psi/dt = -i [A(t) H_walk + B(t) H_problem] psi` for
//! scheduled ones.
//!
//! The integrator is fixed-step fourth-order Runge-Kutta applied to the
//! spectrum-centered operator `H - c`, where `[c - r, c + r]` is a cheap
//! enclosure of the spectrum; the removed shift is restored as an exact
//! global phase. The step is at most `0.05 / ||H||` for a cheap norm bound
//! and is further shortened so that the worst-case RK4 norm loss over the
//! whole run stays a factor of five inside [`NORM_TOLERANCE`].

use serde::{Deserialize, Serialize};

use super::schedule::Schedule;
use super::spectral::spectrum;
use super::state::QuantumState;
use crate::error::{check_dim, invalid, Error, Result};
use crate::hamiltonian::{Hamiltonian, Representation, DENSIFY_LIMIT};
use crate::sparse::{BandStepper, Tridiagonal};
use crate::C64;

/// Allowed `|1 - ||psi(t)|| / ||psi(0)|||` for any evolution.
pub const NORM_TOLERANCE: f64 = 1e-6;

/// Default number of uniformly spaced trajectory samples.
pub const DEFAULT_SAMPLES: usize = 256;

const STEP_SCALE: f64 = 0.05;

// Worst-case norm loss the step policy plans for over one run.
const DRIFT_BUDGET: f64 = 2e-7;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const MINUS_I: C64 = C64 { re: 0.0, im: -1.0 };

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    /// Exact phases for diagonal operators, eigendecomposition for matrices up
    /// to [`DENSIFY_LIMIT`], RK4 otherwise.
    #[default]
    Auto,
    Eigen,
    Rk4,
}

/// States sampled along an evolution; the last entry is the final state.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<QuantumState>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &QuantumState {
        self.states
            .last()
            .expect("trajectory has at least one sample")
    }
}

/// `samples` uniform times from 0 to `t_final` inclusive (just `t_final` when `samples == 1`).
pub fn sample_times(t_final: f64, samples: usize) -> Result<Vec<f64>> {
    if samples == 0 {
        return Err(invalid("need at least one sample"));
    }
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(invalid(format!("time must be non-negative, got {t_final}")));
    }
    if samples == 1 {
        return Ok(vec![t_final]);
    }
    let last = (samples - 1) as f64;
    let mut times: Vec<f64> = (0..samples).map(|k| t_final * k as f64 / last).collect();
    times[samples - 1] = t_final;
    Ok(times)
}

/// Largest RK4 step for an operator with norm bound `norm_bound` and
/// centered spectral half-width `half_width`, integrated over `total_time`.
pub fn rk4_step_size(norm_bound: f64, half_width: f64, total_time: f64) -> f64 {
    if norm_bound <= 0.0 || total_time <= 0.0 {
        return f64::INFINITY;
    }
    let by_scale = STEP_SCALE / norm_bound;
    if half_width <= 0.0 {
        return by_scale;
    }
    // Per step RK4 shrinks |amplitude| by about (r dt)^6 / 144 for the
    // extremal eigencomponent.
    let by_drift = (144.0 * DRIFT_BUDGET / (total_time * half_width.powi(6))).powf(0.2);
    by_scale.min(by_drift)
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(invalid("need at least one evolution time"));
    }
    let mut prev = 0.0;
    for &t in times {
        if !(t >= prev && t.is_finite()) {
            return Err(invalid(
                "evolution times must be finite, non-negative and nondecreasing",
            ));
        }
        prev = t;
    }
    Ok(())
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn check_drift(v: &[C64], norm0: f64) -> Result<()> {
    drift_within(norm(v), norm0)
}

fn drift_within(norm: f64, norm0: f64) -> Result<()> {
    let drift = (norm / norm0 - 1.0).abs();
    if drift > NORM_TOLERANCE || drift.is_nan() {
        Err(Error::NormDrift {
            drift,
            tolerance: NORM_TOLERANCE,
        })
    } else {
        Ok(())
    }
}

/// `exp(-i H t) psi0` with automatic backend selection.
pub fn evolve_static(h: &Hamiltonian, psi0: &QuantumState, t: f64) -> Result<QuantumState> {
    evolve_static_with(h, psi0, t, Backend::Auto)
}

pub fn evolve_static_with(
    h: &Hamiltonian,
    psi0: &QuantumState,
    t: f64,
    backend: Backend,
) -> Result<QuantumState> {
    evolve_static_sampled(h, psi0, &[t], backend, |_, _| {})
}

/// Evolves `psi0` under a static `h`, calling `observer(t, psi(t))` at each
/// of the nondecreasing `times`. Returns the state at the last time.
pub fn evolve_static_sampled<F>(
    h: &Hamiltonian,
    psi0: &QuantumState,
    times: &[f64],
    backend: Backend,
    mut observer: F,
) -> Result<QuantumState>
where
    F: FnMut(f64, &[C64]),
{
    check_dim(h.dim(), psi0.dim())?;
    check_times(times)?;
    let norm0 = psi0.norm();
    if norm0 == 0.0 {
        return Err(Error::Unnormalized { norm: 0.0 });
    }
    let backend = match backend {
        Backend::Auto => match h.representation() {
            Representation::Diagonal(_) => Backend::Eigen,
            Representation::Dense(_) | Representation::Sparse(_) if h.dim() <= DENSIFY_LIMIT => {
                Backend::Eigen
            }
            _ => Backend::Rk4,
        },
        b => b,
    };
    let out = match backend {
        Backend::Rk4 => static_rk4(h, psi0.amplitudes(), times, &mut observer)?,
        _ => match h.as_diagonal() {
            Some(d) => static_diagonal(d, psi0.amplitudes(), times, &mut observer),
            None => static_eigen(h, psi0.amplitudes(), times, &mut observer)?,
        },
    };
    check_drift(&out, norm0)?;
    Ok(QuantumState::from_raw(out))
}

fn static_diagonal<F: FnMut(f64, &[C64])>(
    d: &[f64],
    psi0: &[C64],
    times: &[f64],
    observer: &mut F,
) -> Vec<C64> {
    let mut out = psi0.to_vec();
    for &t in times {
        for ((o, a), &e) in out.iter_mut().zip(psi0).zip(d) {
            *o = a * C64::from_polar(1.0, -e * t);
        }
        observer(t, &out);
    }
    out
}

fn static_eigen<F: FnMut(f64, &[C64])>(
    h: &Hamiltonian,
    psi0: &[C64],
    times: &[f64],
    observer: &mut F,
) -> Result<Vec<C64>> {
    let es = spectrum(h)?;
    let n = psi0.len();
    let v = &es.vectors;
    let coeffs: Vec<C64> = (0..n)
        .map(|k| (0..n).map(|j| v[(j, k)].conj() * psi0[j]).sum())
        .collect();
    let mut rotated = vec![ZERO; n];
    let mut out = vec![ZERO; n];
    for &t in times {
        for k in 0..n {
            rotated[k] = coeffs[k] * C64::from_polar(1.0, -es.values[k] * t);
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o = (0..n).map(|k| v[(j, k)] * rotated[k]).sum();
        }
        observer(t, &out);
    }
    Ok(out)
}

fn taylor_step(
    h: &Hamiltonian,
    shift: f64,
    dt: f64,
    y: &mut [C64],
    v: &mut Vec<C64>,
    w: &mut Vec<C64>,
) {
    // exp(-i H dt) to fourth order; identical to classic RK4 for a static H.
    v.copy_from_slice(y);
    for k in 1..=4 {
        let coeff = MINUS_I * (dt / k as f64);
        h.shifted_stage(v, coeff, shift, w, y);
        std::mem::swap(v, w);
    }
}

fn static_rk4<F: FnMut(f64, &[C64])>(
    h: &Hamiltonian,
    psi0: &[C64],
    times: &[f64],
    observer: &mut F,
) -> Result<Vec<C64>> {
    let (lo, hi) = h.spectral_interval();
    let shift = 0.5 * (lo + hi);
    let half_width = 0.5 * (hi - lo);
    let total = *times.last().unwrap();
    let dt_max = rk4_step_size(h.norm_bound(), half_width, total);
    let n = psi0.len();
    let norm0 = norm(psi0);
    let mut stepper = Stepper::new(h, shift, psi0);
    let mut phased = vec![ZERO; n];
    let mut t_now = 0.0;
    for &t in times {
        let span = t - t_now;
        if span > 0.0 {
            let steps = (span / dt_max).ceil().max(1.0) as usize;
            let dt = span / steps as f64;
            for _ in 0..steps {
                stepper.step(dt);
            }
            stepper.check_drift(norm0)?;
        }
        t_now = t;
        stepper.store(C64::from_polar(1.0, -shift * t), &mut phased);
        observer(t, &phased);
    }
    Ok(phased)
}

#[allow(clippy::large_enum_variant)]
enum Stepper<'a> {
    Band(BandStepper),
    General {
        h: &'a Hamiltonian,
        shift: f64,
        y: Vec<C64>,
        v: Vec<C64>,
        w: Vec<C64>,
    },
}

impl<'a> Stepper<'a> {
    fn new(h: &'a Hamiltonian, shift: f64, psi0: &[C64]) -> Self {
        if let Representation::Sparse(m) = h.representation() {
            if let Some(band) = Tridiagonal::from_csr(m) {
                let mut st = band.stepper(shift);
                st.load(psi0);
                return Stepper::Band(st);
            }
        }
        let n = psi0.len();
        Stepper::General {
            h,
            shift,
            y: psi0.to_vec(),
            v: vec![ZERO; n],
            w: vec![ZERO; n],
        }
    }

    fn step(&mut self, dt: f64) {
        match self {
            Stepper::Band(st) => st.step(dt),
            Stepper::General { h, shift, y, v, w } => taylor_step(h, *shift, dt, y, v, w),
        }
    }

    fn check_drift(&self, norm0: f64) -> Result<()> {
        match self {
            Stepper::Band(st) => drift_within(st.norm(), norm0),
            Stepper::General { y, .. } => check_drift(y, norm0),
        }
    }

    fn store(&self, phase: C64, out: &mut [C64]) {
        match self {
            Stepper::Band(st) => st.store(phase, out),
            Stepper::General { y, .. } => {
                for (o, a) in out.iter_mut().zip(y) {
                    *o = a * phase;
                }
            }
        }
    }
}

/// Integrates `A(t) h_walk + B(t) h_problem` from `psi0` and returns
/// `samples` uniformly spaced states including `t = 0` and `t_f`.
pub fn evolve_scheduled(
    h_walk: &Hamiltonian,
    h_problem: &Hamiltonian,
    sched: &Schedule,
    psi0: &QuantumState,
    samples: usize,
) -> Result<Trajectory> {
    let times = sample_times(sched.t_final(), samples)?;
    let mut states = Vec::with_capacity(times.len());
    evolve_scheduled_observed(h_walk, h_problem, sched, psi0, &times, |_, psi| {
        states.push(QuantumState::from_raw(psi.to_vec()))
    })?;
    Ok(Trajectory { times, states })
}

/// Scheduled evolution with an observer called at each of `times`
/// (nondecreasing, within `[0, t_f]`). Returns the state at the last time.
pub fn evolve_scheduled_observed<F>(
    h_walk: &Hamiltonian,
    h_problem: &Hamiltonian,
    sched: &Schedule,
    psi0: &QuantumState,
    times: &[f64],
    mut observer: F,
) -> Result<QuantumState>
where
    F: FnMut(f64, &[C64]),
{
    check_dim(h_walk.dim(), h_problem.dim())?;
    check_dim(h_walk.dim(), psi0.dim())?;
    check_times(times)?;
    if *times.last().unwrap() > sched.t_final() {
        return Err(invalid("sample time beyond the schedule duration"));
    }
    let norm0 = psi0.norm();
    if norm0 == 0.0 {
        return Err(Error::Unnormalized { norm: 0.0 });
    }

    let center = |(lo, hi): (f64, f64)| (0.5 * (lo + hi), 0.5 * (hi - lo));
    let (c_walk, r_walk) = center(h_walk.spectral_interval());
    let (c_prob, r_prob) = center(h_problem.spectral_interval());
    let (a_max, b_max) = sched.max_weights();
    let half_width = a_max * r_walk + b_max * r_prob;
    let norm_bound = a_max * h_walk.norm_bound() + b_max * h_problem.norm_bound();
    let dt_max = rk4_step_size(norm_bound, half_width, *times.last().unwrap());
    let shift_at = |t: f64| {
        let (a, b) = sched.weights(t);
        a * c_walk + b * c_prob
    };

    let n = psi0.dim();
    let mut y = psi0.amplitudes().to_vec();
    let mut k = vec![ZERO; n];
    let mut tmp = vec![ZERO; n];
    let mut acc = vec![ZERO; n];
    let mut phased = vec![ZERO; n];
    let mut phase_integral = 0.0;

    // k = -i (A H_w + B H_p - c) x
    let rhs = |t: f64, x: &[C64], k: &mut [C64]| {
        let (a, b) = sched.weights(t);
        let c = a * c_walk + b * c_prob;
        for (kj, xj) in k.iter_mut().zip(x) {
            *kj = C64::new(0.0, c) * xj;
        }
        if a != 0.0 {
            h_walk.apply_acc(x, MINUS_I * a, k);
        }
        if b != 0.0 {
            h_problem.apply_acc(x, MINUS_I * b, k);
        }
    };

    let mut t_now = 0.0;
    for &t_obs in times {
        let span = t_obs - t_now;
        if span > 0.0 {
            let steps = (span / dt_max).ceil().max(1.0) as usize;
            let dt = span / steps as f64;
            for s in 0..steps {
                let t = t_now + dt * s as f64;
                acc.copy_from_slice(&y);
                rhs(t, &y, &mut k);
                axpy_pair(&mut acc, dt / 6.0, &mut tmp, &y, dt / 2.0, &k);
                rhs(t + 0.5 * dt, &tmp, &mut k);
                axpy_pair(&mut acc, dt / 3.0, &mut tmp, &y, dt / 2.0, &k);
                rhs(t + 0.5 * dt, &tmp, &mut k);
                axpy_pair(&mut acc, dt / 3.0, &mut tmp, &y, dt, &k);
                rhs(t + dt, &tmp, &mut k);
                for (a, kj) in acc.iter_mut().zip(&k) {
                    *a += kj * (dt / 6.0);
                }
                std::mem::swap(&mut y, &mut acc);
                phase_integral +=
                    dt / 6.0 * (shift_at(t) + 4.0 * shift_at(t + 0.5 * dt) + shift_at(t + dt));
            }
            check_drift(&y, norm0)?;
        }
        t_now = t_obs;
        let phase = C64::from_polar(1.0, -phase_integral);
        for (p, a) in phased.iter_mut().zip(&y) {
            *p = a * phase;
        }
        observer(t_obs, &phased);
    }
    Ok(QuantumState::from_raw(phased))
}

// acc += wa * k; tmp = y + wt * k
fn axpy_pair(acc: &mut [C64], wa: f64, tmp: &mut [C64], y: &[C64], wt: f64, k: &[C64]) {
    for j in 0..k.len() {
        acc[j] += k[j] * wa;
        tmp[j] = y[j] + k[j] * wt;
    }
}
