//! Right-hand sides in spectral space.
//!
//! Both forms are written as `d/dt u_k = L(k) u_k + N(u)_k` with the
//! diagonal linear symbol `L(k) = lambda |k|^2 - |k|^4` and a pseudo-spectral
//! nonlinear term: derivatives in Fourier space, products at the collocation
//! points, one 2/3 truncation of the final product.
//!
//! - vector: `N(u) = -(eta(u) . grad) u`
//! - scalar: `N(phi) = -1/2 (eta(grad phi) . grad) phi`
//!
//! Only the advecting velocity passes through `eta`; the differentiated
//! field is left uncalmed.

use ndarray::{Array2, Zip};

use crate::calming::Calming;
use crate::error::{Error, Result};
use crate::field::{Shape, Spectrum};
use crate::spectral::{Axis, Grid};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquationForm {
    pub shape: Shape,
    pub calming: Calming,
    pub lambda: f64,
}

impl EquationForm {
    pub fn new(shape: Shape, calming: Calming, lambda: f64) -> Result<Self> {
        // lambda = 0 is admitted: it gives the purely hyperdiffusive problem
        // used to check the integrator against closed-form decay.
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be finite and non-negative, got {lambda}"
            )));
        }
        Ok(EquationForm {
            shape,
            calming,
            lambda,
        })
    }

    pub fn with_calming(self, calming: Calming) -> Self {
        EquationForm { calming, ..self }
    }
}

/// Per-mode multiplier `lambda |k|^2 - |k|^4` of the linear terms.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSymbol {
    values: Array2<f64>,
}

impl LinearSymbol {
    pub fn new(g: &Grid, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be finite and non-negative, got {lambda}"
            )));
        }
        Ok(LinearSymbol {
            values: g.wavenumber_sq().mapv(|k2| lambda * k2 - k2 * k2),
        })
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn at(&self, kx: i64, ky: i64) -> f64 {
        let n = self.values.nrows() as i64;
        self.values[[kx.rem_euclid(n) as usize, ky.rem_euclid(n) as usize]]
    }

    /// `exp(L dt)` for every mode.
    pub fn exponential(&self, dt: f64) -> Array2<f64> {
        self.values.mapv(|l| (l * dt).exp())
    }
}

fn check(state: &Spectrum, shape: Shape, g: &Grid) -> Result<()> {
    if state.shape() != shape {
        return Err(Error::ShapeMismatch(format!(
            "{} equation given a {} state",
            shape,
            state.shape()
        )));
    }
    if state.n() != g.n() {
        return Err(Error::ShapeMismatch(format!(
            "state is {}x{} but grid is {}x{}",
            state.n(),
            state.n(),
            g.n(),
            g.n()
        )));
    }
    Ok(())
}

/// `-(eta(u) . grad) u`, dealiased.
pub fn nonlinear_rhs_vector(u: &Spectrum, calming: &Calming, g: &Grid) -> Result<Spectrum> {
    check(u, Shape::Vector, g)?;
    let [a1, a2] = u.components() else {
        unreachable!()
    };
    let (u1, u2) = g.inverse_pair(a1, a2);
    let (ux1, ux2) = g.inverse_pair(
        &g.derivative_component(a1, Axis::X, 1),
        &g.derivative_component(a2, Axis::X, 1),
    );
    let (uy1, uy2) = g.inverse_pair(
        &g.derivative_component(a1, Axis::Y, 1),
        &g.derivative_component(a2, Axis::Y, 1),
    );

    let n = g.n();
    let mut w1 = Array2::zeros((n, n));
    let mut w2 = Array2::zeros((n, n));
    Zip::from(&mut w1)
        .and(&mut w2)
        .and(&u1)
        .and(&u2)
        .for_each(|w1, w2, &p, &q| [*w1, *w2] = calming.apply([p, q]));
    let advect = |dx: &Array2<f64>, dy: &Array2<f64>| {
        Zip::from(&w1)
            .and(&w2)
            .and(dx)
            .and(dy)
            .map_collect(|&a, &b, &dx, &dy| -(a * dx + b * dy))
    };
    let n1 = advect(&ux1, &uy1);
    let n2 = advect(&ux2, &uy2);

    let (mut h1, mut h2) = g.forward_pair(&n1, &n2);
    g.dealias_component(&mut h1);
    g.dealias_component(&mut h2);
    Spectrum::new(vec![h1, h2])
}

/// `-1/2 (eta(grad phi) . grad) phi`, dealiased.
pub fn nonlinear_rhs_scalar(phi: &Spectrum, calming: &Calming, g: &Grid) -> Result<Spectrum> {
    check(phi, Shape::Scalar, g)?;
    let a = phi.component(0);
    let (px, py) = g.inverse_pair(
        &g.derivative_component(a, Axis::X, 1),
        &g.derivative_component(a, Axis::Y, 1),
    );
    let prod = Zip::from(&px).and(&py).map_collect(|&gx, &gy| {
        let [w1, w2] = calming.apply([gx, gy]);
        -0.5 * (w1 * gx + w2 * gy)
    });
    let mut h = g.forward_scalar(&prod);
    g.dealias_component(&mut h);
    Spectrum::new(vec![h])
}

/// A discretised equation: grid, form and linear symbol.
#[derive(Debug, Clone)]
pub struct Model {
    grid: Grid,
    form: EquationForm,
    symbol: LinearSymbol,
    nonlinear_enabled: bool,
}

impl Model {
    pub fn new(grid: Grid, form: EquationForm) -> Result<Self> {
        let symbol = LinearSymbol::new(&grid, form.lambda)?;
        Ok(Model {
            grid,
            form,
            symbol,
            nonlinear_enabled: true,
        })
    }

    /// Drops the nonlinear term, leaving the pure linear evolution.
    pub fn linear_only(mut self) -> Self {
        self.nonlinear_enabled = false;
        self
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn form(&self) -> &EquationForm {
        &self.form
    }

    pub fn symbol(&self) -> &LinearSymbol {
        &self.symbol
    }

    pub fn nonlinear(&self, state: &Spectrum) -> Result<Spectrum> {
        if !self.nonlinear_enabled {
            check(state, self.form.shape, &self.grid)?;
            return Ok(Spectrum::zeros(self.grid.n(), self.form.shape));
        }
        match self.form.shape {
            Shape::Vector => nonlinear_rhs_vector(state, &self.form.calming, &self.grid),
            Shape::Scalar => nonlinear_rhs_scalar(state, &self.form.calming, &self.grid),
        }
    }

    /// `L u + N(u)`.
    pub fn full_rhs(&self, state: &Spectrum) -> Result<Spectrum> {
        let mut out = self.nonlinear(state)?;
        for (o, s) in out.components_mut().iter_mut().zip(state.components()) {
            Zip::from(o)
                .and(s)
                .and(self.symbol.values())
                .for_each(|o, &s, &l| *o += s * l);
        }
        Ok(out)
    }
}
