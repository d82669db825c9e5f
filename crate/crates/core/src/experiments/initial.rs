//! Initial data.

use crate::error::{Error, Result};
use crate::field::{Field, Shape, Spectrum};
use crate::spectral::Grid;

use super::config::InitialPreset;
use super::io::load_snapshot;

/// `sin(x+y) + sin x + sin y`.
pub fn sines_potential(x: f64, y: f64) -> f64 {
    (x + y).sin() + x.sin() + y.sin()
}

/// Gradient of [`sines_potential`].
pub fn grad_sines(x: f64, y: f64) -> [f64; 2] {
    [(x + y).cos() + x.cos(), (x + y).cos() + y.cos()]
}

/// Larger, more oscillatory vector data.
pub fn high_osc(x: f64, y: f64) -> [f64; 2] {
    [
        4.0 * ((x + y).cos() + (3.0 * x).sin()),
        4.0 * ((x + y).cos() + (4.0 * y).cos()),
    ]
}

/// Evaluates a preset on the grid and transforms it.
pub fn make_initial(preset: &InitialPreset, g: &Grid, shape: Shape) -> Result<Spectrum> {
    let n = g.n();
    let field = match (preset, shape) {
        (InitialPreset::GradSines, Shape::Vector) => Field::from_fn(n, shape, grad_sines),
        (InitialPreset::GradSines, Shape::Scalar) => {
            Field::from_fn(n, shape, |x, y| [sines_potential(x, y), 0.0])
        }
        (InitialPreset::HighOsc, Shape::Vector) => Field::from_fn(n, shape, high_osc),
        (InitialPreset::HighOsc, Shape::Scalar) => {
            return Err(Error::InvalidParameter(
                "high-osc initial data is only defined for the vector form".into(),
            ))
        }
        (InitialPreset::Custom(path), _) => {
            let (field, meta) = load_snapshot(path)?;
            if meta.n != n || meta.shape != shape {
                return Err(Error::ShapeMismatch(format!(
                    "{} holds a {} {}x{} field, run expects {} {}x{}",
                    path.display(),
                    meta.shape,
                    meta.n,
                    meta.n,
                    shape,
                    n,
                    n
                )));
            }
            field
        }
    };
    g.forward(&field)
}
