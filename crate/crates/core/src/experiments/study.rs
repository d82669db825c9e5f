//! Reference-versus-calmed comparisons and calming-parameter sweeps.
//!
//! The uncalmed reference and every calmed run share grid, initial data and
//! step schedule. All runs advance in lockstep, so the reference is computed
//! once per sweep and never stored; calmed runs for different `epsilon` are
//! independent and are stepped in parallel.

use rayon::prelude::*;

use crate::calming::{Calming, CalmingKind};
use crate::dynamics::Model;
use crate::error::{Error, Result};
use crate::field::Spectrum;
use crate::norms::{l2_norm, linf_norm, SobolevWeight};
use crate::spectral::Grid;
use crate::timestepper::{Schedule, StepperState};

use super::config::RunConfig;
use super::fit::{fit_loglog_slope, LogLogFit};
use super::initial::make_initial;
use super::io::ErrorSeries;

/// Running error norms of `w = u_eps - u`.
#[derive(Debug, Clone, Default)]
pub struct ErrorAccumulator {
    max_l2: f64,
    max_linf: f64,
    h2_sq_integral: f64,
    last: Option<(f64, f64)>,
}

impl ErrorAccumulator {
    /// Records `w` at time `t`; times must be non-decreasing.
    pub fn observe(&mut self, t: f64, w: &Spectrum, g: &Grid, h2: &SobolevWeight) -> Result<()> {
        self.max_l2 = self.max_l2.max(l2_norm(w, g));
        self.max_linf = self.max_linf.max(linf_norm(&g.inverse(w)?, g));
        let h2_sq = h2.norm(w).powi(2);
        if let Some((t0, prev)) = self.last {
            self.h2_sq_integral += 0.5 * (t - t0) * (prev + h2_sq);
        }
        self.last = Some((t, h2_sq));
        Ok(())
    }

    pub fn finish(&self, epsilon: f64) -> ErrorSeries {
        ErrorSeries {
            epsilon,
            err_linf_l2: self.max_l2,
            err_linf_linf: self.max_linf,
            err_l2_h2: self.h2_sq_integral.sqrt(),
        }
    }
}

struct Lane {
    calming: Calming,
    model: Model,
    state: StepperState,
    acc: ErrorAccumulator,
    failure: Option<Error>,
}

fn lane_label(calming: &Calming) -> String {
    format!("calmed {} eps={}", calming.kind(), calming.epsilon())
}

/// Runs the reference and one calmed run per entry of `calmings` in
/// lockstep. Fails only if the reference fails.
fn sweep(cfg: &RunConfig, calmings: &[Calming]) -> Result<Vec<Result<ErrorSeries>>> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let base = cfg.form()?;
    let initial = make_initial(&cfg.initial, &grid, cfg.shape)?;
    let h2 = SobolevWeight::new(&grid, 2.0);

    let reference_model = Model::new(grid.clone(), base.with_calming(Calming::identity()))?;
    let mut reference = StepperState::new(&reference_model, initial.clone(), 0.0, cfg.dt)?;

    let mut lanes = calmings
        .iter()
        .map(|&calming| {
            let model = Model::new(grid.clone(), base.with_calming(calming))?;
            let state = StepperState::new(&model, initial.clone(), 0.0, cfg.dt)?;
            let mut acc = ErrorAccumulator::default();
            acc.observe(0.0, &Spectrum::zeros(grid.n(), cfg.shape), &grid, &h2)?;
            Ok(Lane {
                calming,
                model,
                state,
                acc,
                failure: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let schedule = Schedule::new(cfg.dt, cfg.t_end, None)?;
    for step in schedule.steps() {
        reference.set_dt(&reference_model, step.dt)?;
        reference.advance(&reference_model).map_err(|e| Error::RunFailed {
            run: "reference".into(),
            source: Box::new(e),
        })?;
        reference.t = step.t;
        let reference_state = &reference.state;

        lanes
            .par_iter_mut()
            .filter(|lane| lane.failure.is_none())
            .for_each(|lane| {
                let result = (|| {
                    lane.state.set_dt(&lane.model, step.dt)?;
                    lane.state.advance(&lane.model)?;
                    lane.state.t = step.t;
                    let w = lane.state.state.difference(reference_state)?;
                    lane.acc.observe(step.t, &w, &grid, &h2)
                })();
                if let Err(e) = result {
                    lane.failure = Some(e);
                }
            });
    }

    Ok(lanes
        .into_iter()
        .map(|lane| match lane.failure {
            None => Ok(lane.acc.finish(lane.calming.epsilon())),
            Some(e) => Err(Error::RunFailed {
                run: lane_label(&lane.calming),
                source: Box::new(e),
            }),
        })
        .collect())
}

/// Error norms between the calmed run and the uncalmed reference from the
/// same initial data.
pub fn run_pair(cfg: &RunConfig, calming: Calming) -> Result<ErrorSeries> {
    if calming.is_identity() {
        return Err(Error::InvalidParameter(
            "run_pair compares a calmed run against the identity reference".into(),
        ));
    }
    sweep(cfg, &[calming])?
        .pop()
        .expect("one lane per calming")
}

/// Slopes of the three error norms against `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormFits {
    pub linf_l2: LogLogFit,
    pub linf_linf: LogLogFit,
    pub l2_h2: LogLogFit,
}

#[derive(Debug)]
pub struct ConvergenceReport {
    pub kind: CalmingKind,
    /// Successful runs, in sweep order.
    pub series: Vec<ErrorSeries>,
    /// Calming parameters whose run failed, with the reason.
    pub failures: Vec<(f64, Error)>,
    /// Present when at least two runs succeeded with positive errors.
    pub fits: Option<NormFits>,
}

impl ConvergenceReport {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn fit_norms(series: &[ErrorSeries]) -> Result<NormFits> {
    let pts = |f: fn(&ErrorSeries) -> f64| -> Vec<(f64, f64)> {
        series.iter().map(|s| (s.epsilon, f(s))).collect()
    };
    Ok(NormFits {
        linf_l2: fit_loglog_slope(&pts(|s| s.err_linf_l2))?,
        linf_linf: fit_loglog_slope(&pts(|s| s.err_linf_linf))?,
        l2_h2: fit_loglog_slope(&pts(|s| s.err_l2_h2))?,
    })
}

/// One calmed run per `epsilon` against a single shared reference, then
/// log-log slope fits per error norm.
pub fn convergence_study(
    cfg: &RunConfig,
    kind: CalmingKind,
    eps_list: &[f64],
) -> Result<ConvergenceReport> {
    let mut check = cfg.clone();
    check.kind = kind;
    check.eps_list = eps_list.to_vec();
    check.validate_sweep()?;

    let calmings = eps_list
        .iter()
        .map(|&eps| Calming::new(kind, eps))
        .collect::<Result<Vec<_>>>()?;
    let mut series = Vec::new();
    let mut failures = Vec::new();
    for (eps, result) in eps_list.iter().zip(sweep(cfg, &calmings)?) {
        match result {
            Ok(s) => series.push(s),
            Err(e) => failures.push((*eps, e)),
        }
    }
    let fits = fit_norms(&series).ok();
    Ok(ConvergenceReport {
        kind,
        series,
        failures,
        fits,
    })
}
