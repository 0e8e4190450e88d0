use num_complex::Complex64;

use super::{Dynamics, OracleError, OracleState};

/// Largest step relative to the fastest rate of the generator.
pub const STABILITY_FACTOR: f64 = 0.1;
/// Norm growth over one step that signals an unstable integration.
pub const MAX_STEP_GROWTH: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    pub dt: f64,
    pub t_end: f64,
    /// Record the norm (and optionally the state) every this many steps.
    pub sample_every: usize,
    pub keep_states: bool,
}

impl EvolveOptions {
    pub fn new(dt: f64, t_end: f64) -> Self {
        Self { dt, t_end, sample_every: 100, keep_states: false }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    /// Recorded snapshots, aligned with `times` when requested.
    pub states: Vec<OracleState>,
    pub final_state: OracleState,
    pub final_time: f64,
}

/// y ← y + h·k
fn axpy(y: &mut OracleState, h: f64, k: &OracleState) {
    for (a, b) in y.c_r.iter_mut().zip(&k.c_r) {
        *a += h * b;
    }
    for (a, b) in y.c_l.iter_mut().zip(&k.c_l) {
        *a += h * b;
    }
    y.beta_a += h * k.beta_a;
    y.beta_c += h * k.beta_c;
}

/// out ← y + h·k
fn offset(out: &mut OracleState, y: &OracleState, h: f64, k: &OracleState) {
    fn lane(out: &mut [Complex64], y: &[Complex64], h: f64, k: &[Complex64]) {
        for ((o, a), b) in out.iter_mut().zip(y).zip(k) {
            *o = a + h * b;
        }
    }
    lane(&mut out.c_r, &y.c_r, h, &k.c_r);
    lane(&mut out.c_l, &y.c_l, h, &k.c_l);
    out.beta_a = y.beta_a + h * k.beta_a;
    out.beta_c = y.beta_c + h * k.beta_c;
}

struct Rk4 {
    k1: OracleState,
    k2: OracleState,
    k3: OracleState,
    k4: OracleState,
    tmp: OracleState,
}

impl Rk4 {
    fn new(n: usize) -> Self {
        let z = OracleState::vacuum(n);
        Self { k1: z.clone(), k2: z.clone(), k3: z.clone(), k4: z.clone(), tmp: z }
    }

    fn step(&mut self, f: &Dynamics, y: &mut OracleState, dt: f64) {
        f.derivative(y, &mut self.k1);
        offset(&mut self.tmp, y, dt / 2.0, &self.k1);
        f.derivative(&self.tmp, &mut self.k2);
        offset(&mut self.tmp, y, dt / 2.0, &self.k2);
        f.derivative(&self.tmp, &mut self.k3);
        offset(&mut self.tmp, y, dt, &self.k3);
        f.derivative(&self.tmp, &mut self.k4);
        axpy(y, dt / 6.0, &self.k1);
        axpy(y, dt / 3.0, &self.k2);
        axpy(y, dt / 3.0, &self.k3);
        axpy(y, dt / 6.0, &self.k4);
    }
}

/// Classical fourth-order Runge–Kutta with a fixed step. The integration runs
/// for ⌈t_end/dt⌉ steps.
pub fn evolve(
    initial: OracleState,
    dynamics: &Dynamics,
    opts: &EvolveOptions,
) -> Result<Trajectory, OracleError> {
    let limit = STABILITY_FACTOR / dynamics.max_rate();
    if !(opts.dt > 0.0 && opts.dt <= limit) {
        return Err(OracleError::StepTooLarge { dt: opts.dt, limit });
    }
    if !(opts.t_end.is_finite() && opts.t_end >= 0.0) {
        return Err(OracleError::InvalidWavepacket(format!("bad end time {}", opts.t_end)));
    }
    let n = dynamics.n_modes();
    if initial.c_r.len() != n || initial.c_l.len() != n {
        return Err(OracleError::InvalidGrid(format!(
            "state has {} / {} modes, dynamics {}",
            initial.c_r.len(),
            initial.c_l.len(),
            n
        )));
    }
    let steps = (opts.t_end / opts.dt - 1e-9).ceil().max(0.0) as usize;
    let every = opts.sample_every.max(1);
    let mut rk = Rk4::new(n);
    let mut y = initial;
    let mut norm = y.norm_sqr();
    let mut traj = Trajectory {
        times: vec![0.0],
        norms: vec![norm],
        states: if opts.keep_states { vec![y.clone()] } else { Vec::new() },
        final_state: OracleState::vacuum(0),
        final_time: 0.0,
    };
    for step in 1..=steps {
        rk.step(dynamics, &mut y, opts.dt);
        let next = y.norm_sqr();
        let t = step as f64 * opts.dt;
        if next - norm > MAX_STEP_GROWTH {
            return Err(OracleError::StepRejected { time: t, growth: next - norm });
        }
        norm = next;
        if step % every == 0 || step == steps {
            traj.times.push(t);
            traj.norms.push(norm);
            if opts.keep_states {
                traj.states.push(y.clone());
            }
        }
    }
    traj.final_time = steps as f64 * opts.dt;
    traj.final_state = y;
    Ok(traj)
}
