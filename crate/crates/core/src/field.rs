//! Field containers.
//!
//! A [`Field`] holds real values at the `n x n` collocation points
//! `x_i = -pi + i*dx`, `y_j = -pi + j*dx`, stored row-major with the `x`
//! index varying slowest (element `[i, j]`). A [`Spectrum`] holds the
//! matching Fourier-series coefficients in transform order.

use std::fmt;
use std::str::FromStr;

use ndarray::{Array2, Zip};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Number of components carried by a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    Scalar,
    Vector,
}

impl Shape {
    pub fn components(self) -> usize {
        match self {
            Shape::Scalar => 1,
            Shape::Vector => 2,
        }
    }

    pub fn from_components(count: usize) -> Result<Self> {
        match count {
            1 => Ok(Shape::Scalar),
            2 => Ok(Shape::Vector),
            other => Err(Error::ShapeMismatch(format!(
                "fields have 1 or 2 components, got {other}"
            ))),
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Scalar => "scalar",
            Shape::Vector => "vector",
        })
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "scalar" => Ok(Shape::Scalar),
            "vector" => Ok(Shape::Vector),
            other => Err(Error::InvalidParameter(format!(
                "unknown form '{other}' (expected 'vector' or 'scalar')"
            ))),
        }
    }
}

fn check_components<T>(comps: &[Array2<T>]) -> Result<usize> {
    Shape::from_components(comps.len())?;
    let dim = comps[0].dim();
    if dim.0 != dim.1 {
        return Err(Error::ShapeMismatch(format!(
            "components must be square, got {}x{}",
            dim.0, dim.1
        )));
    }
    if comps.iter().any(|c| c.dim() != dim) {
        return Err(Error::ShapeMismatch(
            "components have differing sizes".into(),
        ));
    }
    Ok(dim.0)
}

/// A real scalar or 2-vector field in physical space.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    comps: Vec<Array2<f64>>,
}

impl Field {
    pub fn new(comps: Vec<Array2<f64>>) -> Result<Self> {
        check_components(&comps)?;
        Ok(Field { comps })
    }

    pub fn zeros(n: usize, shape: Shape) -> Self {
        Field {
            comps: vec![Array2::zeros((n, n)); shape.components()],
        }
    }

    /// Samples `f(x, y)` at the collocation points of an `n x n` grid.
    pub fn from_fn<F>(n: usize, shape: Shape, f: F) -> Self
    where
        F: Fn(f64, f64) -> [f64; 2],
    {
        let dx = crate::spectral::domain_length() / n as f64;
        let comps = (0..shape.components())
            .map(|c| {
                Array2::from_shape_fn((n, n), |(i, j)| {
                    let x = -std::f64::consts::PI + i as f64 * dx;
                    let y = -std::f64::consts::PI + j as f64 * dx;
                    f(x, y)[c]
                })
            })
            .collect();
        Field { comps }
    }

    pub fn n(&self) -> usize {
        self.comps[0].nrows()
    }

    pub fn shape(&self) -> Shape {
        Shape::from_components(self.comps.len()).expect("validated on construction")
    }

    pub fn components(&self) -> &[Array2<f64>] {
        &self.comps
    }

    pub fn component(&self, c: usize) -> &Array2<f64> {
        &self.comps[c]
    }

    pub fn into_components(self) -> Vec<Array2<f64>> {
        self.comps
    }

    /// Pointwise Euclidean magnitude across components.
    pub fn magnitude(&self) -> Array2<f64> {
        match self.comps.as_slice() {
            [s] => s.mapv(f64::abs),
            [u, v] => Zip::from(u).and(v).map_collect(|&a, &b| a.hypot(b)),
            _ => unreachable!(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().all(|c| c.iter().all(|v| v.is_finite()))
    }
}

/// Fourier-series coefficients of a real scalar or 2-vector field.
///
/// Coefficients are stored in transform order along both axes: index `m`
/// corresponds to wavenumber `m` for `m <= n/2` and `m - n` otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    comps: Vec<Array2<Complex64>>,
}

impl Spectrum {
    pub fn new(comps: Vec<Array2<Complex64>>) -> Result<Self> {
        check_components(&comps)?;
        Ok(Spectrum { comps })
    }

    pub fn zeros(n: usize, shape: Shape) -> Self {
        Spectrum {
            comps: vec![Array2::zeros((n, n)); shape.components()],
        }
    }

    pub fn n(&self) -> usize {
        self.comps[0].nrows()
    }

    pub fn shape(&self) -> Shape {
        Shape::from_components(self.comps.len()).expect("validated on construction")
    }

    pub fn components(&self) -> &[Array2<Complex64>] {
        &self.comps
    }

    pub fn components_mut(&mut self) -> &mut [Array2<Complex64>] {
        &mut self.comps
    }

    pub fn component(&self, c: usize) -> &Array2<Complex64> {
        &self.comps[c]
    }

    pub fn into_components(self) -> Vec<Array2<Complex64>> {
        self.comps
    }

    /// Coefficient at integer wavenumber `(kx, ky)` of component `c`.
    pub fn coeff(&self, c: usize, kx: i64, ky: i64) -> Complex64 {
        let n = self.n() as i64;
        let i = kx.rem_euclid(n) as usize;
        let j = ky.rem_euclid(n) as usize;
        self.comps[c][[i, j]]
    }

    pub fn set_coeff(&mut self, c: usize, kx: i64, ky: i64, value: Complex64) {
        let n = self.n() as i64;
        let i = kx.rem_euclid(n) as usize;
        let j = ky.rem_euclid(n) as usize;
        self.comps[c][[i, j]] = value;
    }

    pub fn ensure_compatible(&self, other: &Spectrum) -> Result<()> {
        if self.n() != other.n() || self.comps.len() != other.comps.len() {
            return Err(Error::ShapeMismatch(format!(
                "spectra differ: {} {}x{} vs {} {}x{}",
                self.shape(),
                self.n(),
                self.n(),
                other.shape(),
                other.n(),
                other.n()
            )));
        }
        Ok(())
    }

    /// `self - other`, componentwise.
    pub fn difference(&self, other: &Spectrum) -> Result<Spectrum> {
        self.ensure_compatible(other)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Spectrum { comps })
    }

    /// Multiplies every component by a per-mode real factor.
    pub fn scale_modes(&mut self, factor: &Array2<f64>) {
        for c in &mut self.comps {
            Zip::from(c).and(factor).for_each(|z, &f| *z *= f);
        }
    }

    pub fn is_finite(&self) -> bool {
        self.comps
            .iter()
            .all(|c| c.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }

    /// Sum of `|u_k|^2` over all modes and components.
    pub fn energy(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .map(|z| z.norm_sqr())
            .sum()
    }

    /// Largest coefficient magnitude over all modes and components.
    pub fn max_abs(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, z| m.max(z.norm()))
    }
}
