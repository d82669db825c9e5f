//! Single-run driver: evolve a configuration and write its outputs.

use std::fs;
use std::path::{Path, PathBuf};

use crate::dynamics::Model;
use crate::error::{Error, Result};
use crate::timestepper::{evolve, EvolveOptions, Schedule, Trajectory};

use super::config::RunConfig;
use super::initial::make_initial;
use super::io::{write_error_csv, write_norm_csv, write_snapshot, SnapshotMeta};
use super::study::ConvergenceReport;

pub const MANIFEST_FILE: &str = "manifest.txt";
pub const NORMS_FILE: &str = "norms.csv";
pub const ERRORS_FILE: &str = "errors.csv";

/// Runs `cfg` in memory without touching the filesystem (except to read
/// custom initial data).
pub fn simulate(cfg: &RunConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let model = Model::new(grid.clone(), cfg.form()?)?;
    let initial = make_initial(&cfg.initial, &grid, cfg.shape)?;
    let opts = EvolveOptions {
        schedule: Schedule::new(cfg.dt, cfg.t_end, Some(cfg.snapshot_every))?,
        cfl: cfg.cfl,
    };
    evolve(&model, &initial, &opts)
}

pub fn write_manifest(cfg: &RunConfig) -> Result<PathBuf> {
    let dir = &cfg.output_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(MANIFEST_FILE);
    fs::write(&path, cfg.to_text()).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Writes snapshots `snap_NNNNN.{bin,meta}` and the per-step norm table.
pub fn write_trajectory(cfg: &RunConfig, traj: &Trajectory) -> Result<Vec<PathBuf>> {
    let grid = cfg.grid()?;
    let dir: &Path = &cfg.output_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for (idx, (t, state)) in traj.snapshots.iter().enumerate() {
        let field = grid.inverse(state)?;
        let meta = SnapshotMeta {
            n: cfg.n,
            shape: cfg.shape,
            lambda: cfg.lambda,
            epsilon: cfg.epsilon,
            kind: cfg.kind,
            t: *t,
            dt: cfg.dt,
        };
        written.push(write_snapshot(dir, &format!("snap_{idx:05}"), &field, &meta)?);
    }
    let norms = dir.join(NORMS_FILE);
    write_norm_csv(&norms, &traj.norms)?;
    written.push(norms);
    Ok(written)
}

/// Writes the completed rows of a study.
pub fn write_report(cfg: &RunConfig, report: &ConvergenceReport) -> Result<PathBuf> {
    let dir = &cfg.output_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(ERRORS_FILE);
    write_error_csv(&path, &report.series)?;
    Ok(path)
}
