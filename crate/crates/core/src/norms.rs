//! Norms on the torus `[-pi, pi)^2`.
//!
//! With true Fourier-series coefficients, Parseval reads
//! `||f||_{L2}^2 = (2 pi)^2 sum_k |u_k|^2`, and the Sobolev norm uses the
//! weight `(1 + |k|)^{2s}` with the same `(2 pi)^2` factor so that `s = 0`
//! recovers the L2 norm.

use crate::field::{Field, Spectrum};
use crate::spectral::{domain_length, Grid};

/// L2 norm from spectral coefficients (all components).
pub fn l2_norm(f: &Spectrum, _g: &Grid) -> f64 {
    domain_length() * f.energy().sqrt()
}

/// L2 norm by rectangle-rule quadrature over the collocation points.
pub fn l2_norm_physical(f: &Field, g: &Grid) -> f64 {
    let sum: f64 = f
        .components()
        .iter()
        .flat_map(|c| c.iter())
        .map(|v| v * v)
        .sum();
    g.dx() * sum.sqrt()
}

/// `( (2 pi)^2 sum_k (1 + |k|)^{2s} |u_k|^2 )^{1/2}`.
pub fn hs_norm(f: &Spectrum, s: f64, g: &Grid) -> f64 {
    SobolevWeight::new(g, s).norm(f)
}

/// Precomputed `(1 + |k|)^{2s}` weights for repeated H^s evaluations.
#[derive(Debug, Clone)]
pub struct SobolevWeight {
    weight: ndarray::Array2<f64>,
}

impl SobolevWeight {
    pub fn new(g: &Grid, s: f64) -> Self {
        SobolevWeight {
            weight: g.wavenumber_sq().mapv(|k2| (1.0 + k2.sqrt()).powf(2.0 * s)),
        }
    }

    pub fn norm(&self, f: &Spectrum) -> f64 {
        let sum: f64 = f
            .components()
            .iter()
            .map(|c| {
                c.iter()
                    .zip(self.weight.iter())
                    .map(|(z, w)| w * z.norm_sqr())
                    .sum::<f64>()
            })
            .sum();
        domain_length() * sum.sqrt()
    }
}

/// Maximum pointwise Euclidean magnitude (absolute value for scalars).
pub fn linf_norm(f: &Field, _g: &Grid) -> f64 {
    f.magnitude().iter().fold(0.0, |m, &v| m.max(v))
}
