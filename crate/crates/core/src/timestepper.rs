//! Integrating-factor RK4 time stepping.
//!
//! With `v(t) = exp(-t L) u(t)` the stiff linear part is integrated
//! exactly and classical RK4 is applied to the remaining nonlinear term.
//! In the original variable one step of size `h` reads
//!
//! ```text
//! k1 = N(u)
//! k2 = N(E2 (u + h/2 k1))
//! k3 = N(E2 u + h/2 k2)
//! k4 = N(E u + h E2 k3)
//! u' = E u + h/6 (E k1 + 2 E2 (k2 + k3) + k4)
//! ```
//!
//! with `E = exp(L h)` and `E2 = exp(L h / 2)` per mode.

use ndarray::{Array2, Zip};
use num_complex::Complex64;

use crate::calming::Calming;
use crate::dynamics::{LinearSymbol, Model};
use crate::error::{Error, Result};
use crate::field::{Field, Shape, Spectrum};
use crate::norms::{l2_norm, linf_norm, SobolevWeight};
use crate::spectral::{Axis, Grid};

/// A one-step scheme for `u' = L u + N(u)` with diagonal `L`.
pub trait TimeStepper: Sized {
    fn new(symbol: &LinearSymbol, dt: f64) -> Result<Self>;

    fn dt(&self) -> f64;

    /// Advances `state` from `t` to `t + dt`.
    fn step(&self, model: &Model, state: &Spectrum, t: f64) -> Result<Spectrum>;
}

/// Integrating-factor RK4 with precomputed exponential factors.
#[derive(Debug, Clone)]
pub struct IfRk4 {
    dt: f64,
    exp_half: Array2<f64>,
    exp_full: Array2<f64>,
}

impl IfRk4 {
    pub fn exp_half(&self) -> &Array2<f64> {
        &self.exp_half
    }

    pub fn exp_full(&self) -> &Array2<f64> {
        &self.exp_full
    }
}

fn combine<F>(out_shape: &Spectrum, f: F) -> Spectrum
where
    F: Fn(usize) -> Array2<Complex64>,
{
    let comps = (0..out_shape.shape().components()).map(f).collect();
    Spectrum::new(comps).expect("components share one shape")
}

impl TimeStepper for IfRk4 {
    fn new(symbol: &LinearSymbol, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt != 0.0) {
            return Err(Error::InvalidParameter(format!(
                "time step must be finite and non-zero, got {dt}"
            )));
        }
        Ok(IfRk4 {
            dt,
            exp_half: symbol.exponential(0.5 * dt),
            exp_full: symbol.exponential(dt),
        })
    }

    fn dt(&self) -> f64 {
        self.dt
    }

    fn step(&self, model: &Model, u: &Spectrum, t: f64) -> Result<Spectrum> {
        let h = self.dt;
        let e = &self.exp_full;
        let e2 = &self.exp_half;

        let k1 = model.nonlinear(u)?;
        let a = combine(u, |c| {
            Zip::from(&u.components()[c])
                .and(&k1.components()[c])
                .and(e2)
                .map_collect(|&u, &k, &e2| (u + k * (0.5 * h)) * e2)
        });
        let k2 = model.nonlinear(&a)?;
        let b = combine(u, |c| {
            Zip::from(&u.components()[c])
                .and(&k2.components()[c])
                .and(e2)
                .map_collect(|&u, &k, &e2| u * e2 + k * (0.5 * h))
        });
        let k3 = model.nonlinear(&b)?;
        let cstage = combine(u, |c| {
            Zip::from(&u.components()[c])
                .and(&k3.components()[c])
                .and(e)
                .and(e2)
                .map_collect(|&u, &k, &e, &e2| u * e + k * (h * e2))
        });
        let k4 = model.nonlinear(&cstage)?;

        let next = combine(u, |c| {
            let mut out = Zip::from(&u.components()[c])
                .and(&k1.components()[c])
                .and(e)
                .map_collect(|&u, &k1, &e| (u + k1 * (h / 6.0)) * e);
            Zip::from(&mut out)
                .and(&k2.components()[c])
                .and(&k3.components()[c])
                .and(&k4.components()[c])
                .and(e2)
                .for_each(|o, &k2, &k3, &k4, &e2| {
                    *o += ((k2 + k3) * (2.0 * e2) + k4) * (h / 6.0);
                });
            out
        });

        let energy = next.energy();
        if !energy.is_finite() {
            return Err(Error::BlowUp {
                t: t + h,
                norm_name: "L2",
                value: energy.sqrt(),
            });
        }
        Ok(next)
    }
}

/// A state together with its clock and the stepper for the current `dt`.
#[derive(Debug, Clone)]
pub struct StepperState {
    pub state: Spectrum,
    pub t: f64,
    stepper: IfRk4,
}

impl StepperState {
    pub fn new(model: &Model, state: Spectrum, t: f64, dt: f64) -> Result<Self> {
        Ok(StepperState {
            state,
            t,
            stepper: IfRk4::new(model.symbol(), dt)?,
        })
    }

    pub fn dt(&self) -> f64 {
        self.stepper.dt()
    }

    pub fn stepper(&self) -> &IfRk4 {
        &self.stepper
    }

    /// Changes the step size, recomputing the exponential factors.
    pub fn set_dt(&mut self, model: &Model, dt: f64) -> Result<()> {
        if dt != self.stepper.dt() {
            self.stepper = IfRk4::new(model.symbol(), dt)?;
        }
        Ok(())
    }

    pub fn advance(&mut self, model: &Model) -> Result<()> {
        self.state = self.stepper.step(model, &self.state, self.t)?;
        self.t += self.stepper.dt();
        Ok(())
    }
}

/// Pointwise magnitude of the advecting velocity: `eta(u)` for the vector
/// form, `eta(grad phi) / 2` for the scalar form.
pub fn advecting_speed(state: &Spectrum, calming: &Calming, g: &Grid) -> Result<Array2<f64>> {
    let calmed_norm = |p: f64, q: f64| {
        let [a, b] = calming.apply([p, q]);
        a.hypot(b)
    };
    Ok(match state.shape() {
        Shape::Vector => {
            let u = g.inverse(state)?;
            Zip::from(u.component(0))
                .and(u.component(1))
                .map_collect(|&p, &q| calmed_norm(p, q))
        }
        Shape::Scalar => {
            let a = state.component(0);
            let (px, py) = g.inverse_pair(
                &g.derivative_component(a, Axis::X, 1),
                &g.derivative_component(a, Axis::Y, 1),
            );
            Zip::from(&px)
                .and(&py)
                .map_collect(|&p, &q| 0.5 * calmed_norm(p, q))
        }
    })
}

/// `cfl * dx / max |eta(u)|` for a physical velocity field; infinite when
/// the field vanishes identically.
pub fn advective_cfl_limit(u: &Field, calming: &Calming, g: &Grid, cfl: f64) -> f64 {
    let speed = match u.components() {
        [p, q] => Zip::from(p).and(q).fold(0.0f64, |m, &p, &q| {
            let [a, b] = calming.apply([p, q]);
            m.max(a.hypot(b))
        }),
        [p] => p.iter().fold(0.0f64, |m, &p| {
            let [a, _] = calming.apply([p, 0.0]);
            m.max(a.abs())
        }),
        _ => unreachable!(),
    };
    cfl_from_speed(speed, g, cfl)
}

fn cfl_from_speed(speed: f64, g: &Grid, cfl: f64) -> f64 {
    if speed > 0.0 {
        cfl * g.dx() / speed
    } else {
        f64::INFINITY
    }
}

/// One step of a fixed-dt march.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannedStep {
    pub dt: f64,
    /// Time at the end of the step.
    pub t: f64,
    /// Whether a snapshot is due at the end of the step.
    pub snapshot: bool,
}

/// Fixed-step march from `0` to `t_end`.
///
/// Steps have size `dt`, except that the last step before each snapshot
/// time and before `t_end` is shortened so that those times are hit
/// exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub dt: f64,
    pub t_end: f64,
    pub snapshot_every: Option<f64>,
}

impl Schedule {
    pub fn new(dt: f64, t_end: f64, snapshot_every: Option<f64>) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter(format!("dt must be > 0, got {dt}")));
        }
        if !(t_end.is_finite() && t_end >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "final time must be >= 0, got {t_end}"
            )));
        }
        if let Some(every) = snapshot_every {
            if !(every.is_finite() && every > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "snapshot interval must be > 0, got {every}"
                )));
            }
        }
        Ok(Schedule {
            dt,
            t_end,
            snapshot_every,
        })
    }

    pub fn steps(&self) -> Vec<PlannedStep> {
        // relative slack when deciding whether a segment needs one more step
        const SLACK: f64 = 1e-9;
        let mut targets = Vec::new();
        if let Some(every) = self.snapshot_every {
            let mut k = 1u64;
            loop {
                let t = k as f64 * every;
                if t >= self.t_end * (1.0 - SLACK) {
                    break;
                }
                targets.push((t, true));
                k += 1;
            }
        }
        if self.t_end > 0.0 {
            targets.push((self.t_end, self.snapshot_every.is_some()));
        }

        let mut steps = Vec::new();
        let mut start = 0.0;
        for (target, snapshot) in targets {
            let span = target - start;
            let count = ((span / self.dt) * (1.0 - SLACK)).ceil().max(1.0) as usize;
            for i in 1..count {
                steps.push(PlannedStep {
                    dt: self.dt,
                    t: start + i as f64 * self.dt,
                    snapshot: false,
                });
            }
            steps.push(PlannedStep {
                dt: span - (count - 1) as f64 * self.dt,
                t: target,
                snapshot,
            });
            start = target;
        }
        steps
    }
}

/// Norms recorded after every step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSample {
    pub t: f64,
    pub l2: f64,
    pub linf: f64,
    pub h2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CflWarning {
    pub t: f64,
    pub dt: f64,
    pub limit: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub norms: Vec<NormSample>,
    pub snapshots: Vec<(f64, Spectrum)>,
    pub cfl_warnings: Vec<CflWarning>,
    pub final_state: Spectrum,
    pub final_time: f64,
}

/// Records norms and (on request) snapshots of a running solution.
struct Recorder<'a> {
    model: &'a Model,
    h2: SobolevWeight,
    cfl: f64,
    traj: Trajectory,
}

impl<'a> Recorder<'a> {
    fn observe(&mut self, t: f64, state: &Spectrum, snapshot: bool) -> Result<()> {
        let g = self.model.grid();
        let physical = g.inverse(state)?;
        self.traj.norms.push(NormSample {
            t,
            l2: l2_norm(state, g),
            linf: linf_norm(&physical, g),
            h2: self.h2.norm(state),
        });
        if snapshot {
            self.traj.snapshots.push((t, state.clone()));
        }
        Ok(())
    }

    /// Checks the step about to be taken from `state`.
    fn check_cfl(&mut self, t: f64, dt: f64, state: &Spectrum) -> Result<()> {
        let g = self.model.grid();
        let speed = advecting_speed(state, &self.model.form().calming, g)?;
        let limit = cfl_from_speed(speed.fold(0.0, |m: f64, &v| m.max(v)), g, self.cfl);
        if dt > limit {
            self.traj.cfl_warnings.push(CflWarning { t, dt, limit });
        }
        Ok(())
    }
}

/// Options for [`evolve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    pub schedule: Schedule,
    /// Courant number used by the CFL monitor.
    pub cfl: f64,
}

/// Marches `initial` to `schedule.t_end`, recording norms after every step
/// and snapshots at the scheduled times (the initial state is always kept).
pub fn evolve(model: &Model, initial: &Spectrum, opts: &EvolveOptions) -> Result<Trajectory> {
    if initial.shape() != model.form().shape || initial.n() != model.grid().n() {
        return Err(Error::ShapeMismatch(format!(
            "initial data is {} {}x{}, model expects {} {}x{}",
            initial.shape(),
            initial.n(),
            initial.n(),
            model.form().shape,
            model.grid().n(),
            model.grid().n()
        )));
    }
    let mut rec = Recorder {
        model,
        h2: SobolevWeight::new(model.grid(), 2.0),
        cfl: opts.cfl,
        traj: Trajectory {
            norms: Vec::new(),
            snapshots: Vec::new(),
            cfl_warnings: Vec::new(),
            final_state: initial.clone(),
            final_time: 0.0,
        },
    };
    rec.observe(0.0, initial, true)?;

    let mut state = StepperState::new(model, initial.clone(), 0.0, opts.schedule.dt)?;
    for step in opts.schedule.steps() {
        rec.check_cfl(state.t, step.dt, &state.state)?;
        state.set_dt(model, step.dt)?;
        state.advance(model)?;
        state.t = step.t;
        rec.observe(step.t, &state.state, step.snapshot)?;
    }
    rec.traj.final_time = state.t;
    rec.traj.final_state = state.state;
    Ok(rec.traj)
}
