//! Floating-point integration of the point system for cross-checks.
//!
//! Point `i` starts at the `i`-th unit vector at rest and is pushed by
//! `sum_k (x_i - x_k)(1/|x_i - x_k|^2 - h_ik)`.
//! The conserved energy is `sum y^2 / 2 - (1/2) sum_(r<s) (log d_rs^2 - h_rs d_rs^2)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::Matrix;

pub const DEFAULT_DT: f64 = 1e-3;
pub const DISTANCE_FLOOR: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimState {
    pub x: Matrix<f64>,
    pub y: Matrix<f64>,
    pub t: f64,
}

impl SimState {
    /// `X = I`, `Y = 0`.
    pub fn initial(m: usize) -> Self {
        SimState {
            x: Matrix::from_fn(m, |i, j| if i == j { 1.0 } else { 0.0 }),
            y: Matrix::filled(m, 0.0),
            t: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    pub fn with_reversed_velocities(&self) -> Self {
        SimState {
            y: self.y.map(|v| -v),
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyReport {
    pub kinetic: f64,
    pub potential: f64,
    pub total: f64,
    pub drift: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Integrator {
    /// Second-order velocity Verlet.
    Verlet,
    /// Fourth-order composition of three Verlet steps.
    #[default]
    Yoshida4,
}

fn squared_distance(x: &Matrix<f64>, i: usize, k: usize) -> f64 {
    x.row(i)
        .iter()
        .zip(x.row(k))
        .map(|(a, b)| (a - b) * (a - b))
        .sum()
}

/// Each pair is evaluated once and added with opposite signs.
pub fn total_force(x: &Matrix<f64>, g: &Graph) -> Result<Matrix<f64>> {
    total_force_with_floor(x, g, DISTANCE_FLOOR)
}

pub fn total_force_with_floor(x: &Matrix<f64>, g: &Graph, floor: f64) -> Result<Matrix<f64>> {
    let m = x.dim();
    if g.order() != m {
        return Err(Error::Contract(format!(
            "{m} points for a graph on {} vertices",
            g.order()
        )));
    }
    let mut f = Matrix::filled(m, 0.0);
    let mut pair = vec![0.0; m];
    for i in 0..m {
        for k in (i + 1)..m {
            let d2 = squared_distance(x, i, k);
            if d2.sqrt() < floor {
                return Err(Error::Singularity {
                    i,
                    k,
                    distance: d2.sqrt(),
                    floor,
                });
            }
            let c = 1.0 / d2 - f64::from(g.h(i, k));
            for (l, p) in pair.iter_mut().enumerate() {
                *p = (x[(i, l)] - x[(k, l)]) * c;
            }
            for (l, &p) in pair.iter().enumerate() {
                f[(i, l)] += p;
                f[(k, l)] -= p;
            }
        }
    }
    Ok(f)
}

fn verlet_step(state: &mut SimState, force: &mut Matrix<f64>, g: &Graph, dt: f64) -> Result<()> {
    let m = state.dim();
    let half = 0.5 * dt;
    for i in 0..m {
        for j in 0..m {
            state.y[(i, j)] += half * force[(i, j)];
            state.x[(i, j)] += dt * state.y[(i, j)];
        }
    }
    *force = total_force(&state.x, g)?;
    for i in 0..m {
        for j in 0..m {
            state.y[(i, j)] += half * force[(i, j)];
        }
    }
    state.t += dt;
    Ok(())
}

fn step(
    state: &mut SimState,
    force: &mut Matrix<f64>,
    g: &Graph,
    dt: f64,
    integrator: Integrator,
) -> Result<()> {
    match integrator {
        Integrator::Verlet => verlet_step(state, force, g, dt),
        Integrator::Yoshida4 => {
            let cbrt2 = 2f64.cbrt();
            let w1 = 1.0 / (2.0 - cbrt2);
            let w0 = -cbrt2 * w1;
            let t0 = state.t;
            for w in [w1, w0, w1] {
                verlet_step(state, force, g, w * dt)?;
            }
            state.t = t0 + dt;
            Ok(())
        }
    }
}

/// `steps` steps of size `dt` from `start`; `dt` may be negative.
pub fn integrate(
    g: &Graph,
    start: &SimState,
    steps: usize,
    dt: f64,
    integrator: Integrator,
) -> Result<SimState> {
    let mut state = start.clone();
    let mut force = total_force(&state.x, g)?;
    for _ in 0..steps {
        step(&mut state, &mut force, g, dt, integrator)?;
    }
    Ok(state)
}

fn step_count(t_end: f64, dt: f64) -> Result<usize> {
    if !(dt.is_finite() && dt != 0.0 && t_end.is_finite()) {
        return Err(Error::Validation(format!(
            "bad time step {dt} or horizon {t_end}"
        )));
    }
    let ratio = t_end / dt;
    if ratio < -1e-9 {
        return Err(Error::Validation(
            "time step and horizon have opposite signs".into(),
        ));
    }
    Ok(ratio.round().max(0.0) as usize)
}

/// From `X = I`, `Y = 0` to `t_end` with the default integrator. A negative `dt` with a
/// negative `t_end` runs backwards in time.
pub fn simulate(g: &Graph, t_end: f64, dt: f64) -> Result<SimState> {
    simulate_with(g, t_end, dt, Integrator::default())
}

pub fn simulate_with(g: &Graph, t_end: f64, dt: f64, integrator: Integrator) -> Result<SimState> {
    let steps = step_count(t_end, dt)?;
    integrate(g, &SimState::initial(g.order()), steps, dt, integrator)
}

pub fn potential_energy(x: &Matrix<f64>, g: &Graph) -> f64 {
    let m = x.dim();
    let mut sum = 0.0;
    for r in 0..m {
        for s in (r + 1)..m {
            let d2 = squared_distance(x, r, s);
            sum += d2.ln() - f64::from(g.h(r, s)) * d2;
        }
    }
    -0.5 * sum
}

/// Energies of `state`, with `drift` measured against `reference_total`.
pub fn energy(state: &SimState, g: &Graph, reference_total: f64) -> EnergyReport {
    let kinetic = 0.5 * state.y.as_slice().iter().map(|v| v * v).sum::<f64>();
    let potential = potential_energy(&state.x, g);
    let total = kinetic + potential;
    EnergyReport {
        kinetic,
        potential,
        total,
        drift: (total - reference_total).abs(),
    }
}

/// Energy of the initial configuration.
pub fn initial_energy(g: &Graph) -> f64 {
    potential_energy(&SimState::initial(g.order()).x, g)
}

/// Pairwise distances, ascending.
pub fn distance_signature(state: &SimState) -> Vec<f64> {
    let m = state.dim();
    let mut out = Vec::with_capacity(m * m.saturating_sub(1) / 2);
    for i in 0..m {
        for k in (i + 1)..m {
            out.push(squared_distance(&state.x, i, k).sqrt());
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Largest entry of `|X(relabelled g) - P^T X(g) P|`.
pub fn check_equivariance(g: &Graph, perm: &[usize], t_end: f64, dt: f64) -> Result<f64> {
    let relabelled = g.relabel(perm)?;
    let a = simulate(g, t_end, dt)?;
    let b = simulate(&relabelled, t_end, dt)?;
    let moved = a.x.permuted(perm);
    Ok(max_abs_diff(&moved, &b.x))
}

pub fn max_abs_diff(a: &Matrix<f64>, b: &Matrix<f64>) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, Serialize)]
pub struct Sample {
    pub t: f64,
    pub x: Vec<f64>,
    pub energy: EnergyReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub final_state: SimState,
    pub max_drift: f64,
}

/// Integrates from rest, sampling every `sample_every` steps plus the final state. The
/// drift is tracked at every step.
pub fn trajectory(
    g: &Graph,
    t_end: f64,
    dt: f64,
    sample_every: usize,
    integrator: Integrator,
) -> Result<Trajectory> {
    let steps = step_count(t_end, dt)?;
    let e0 = initial_energy(g);
    let mut state = SimState::initial(g.order());
    let mut force = total_force(&state.x, g)?;
    let sample = |s: &SimState| Sample {
        t: s.t,
        x: s.x.as_slice().to_vec(),
        energy: energy(s, g, e0),
    };
    let mut samples = vec![sample(&state)];
    let mut max_drift = 0.0f64;
    for n in 1..=steps {
        step(&mut state, &mut force, g, dt, integrator)?;
        let report = energy(&state, g, e0);
        max_drift = max_drift.max(report.drift);
        if n == steps || (sample_every > 0 && n % sample_every == 0) {
            samples.push(sample(&state));
        }
    }
    Ok(Trajectory {
        samples,
        final_state: state,
        max_drift,
    })
}

/// Tab-separated rows `t x_00 .. x_(m-1)(m-1) kinetic potential total drift`.
pub fn render_trajectory(traj: &Trajectory) -> String {
    let mut out = String::new();
    for s in &traj.samples {
        let mut fields = vec![format!("{}", s.t)];
        fields.extend(s.x.iter().map(|v| format!("{v:.17e}")));
        for v in [
            s.energy.kinetic,
            s.energy.potential,
            s.energy.total,
            s.energy.drift,
        ] {
            fields.push(format!("{v:.17e}"));
        }
        out.push_str(&fields.join("\t"));
        out.push('\n');
    }
    out
}
