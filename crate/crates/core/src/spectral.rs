//! Spectral discretisation of the periodic square `[-pi, pi)^2`.
//!
//! Coefficients are true Fourier-series coefficients,
//! `f(x, y) = sum_k u_k exp(i (kx x + ky y))`, so the forward transform
//! divides by `n^2` and corrects for the grid starting at `-pi` rather than
//! `0` (a factor `(-1)^(kx + ky)`).

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use ndarray::{s, Array2, Zip};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::field::{Field, Spectrum};

pub const MIN_N: usize = 8;
pub const MAX_N: usize = 4096;

/// Side length of the periodic domain.
pub fn domain_length() -> f64 {
    2.0 * PI
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// An `n x n` collocation grid with its FFT plans and wavenumber tables.
#[derive(Clone)]
pub struct Grid {
    n: usize,
    dx: f64,
    wavenumbers: Vec<i64>,
    cutoff: usize,
    keep: Vec<bool>,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.n)
            .field("dx", &self.dx)
            .field("cutoff", &self.cutoff)
            .finish()
    }
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if !n.is_multiple_of(2) || !(MIN_N..=MAX_N).contains(&n) {
            return Err(Error::InvalidGridSize(n));
        }
        let half = (n / 2) as i64;
        let wavenumbers: Vec<i64> = (0..n as i64)
            .map(|m| if m <= half { m } else { m - n as i64 })
            .collect();
        let cutoff = n / 3;
        let keep = wavenumbers
            .iter()
            .map(|k| k.unsigned_abs() as usize <= cutoff)
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Grid {
            n,
            dx: domain_length() / n as f64,
            wavenumbers,
            cutoff,
            keep,
            fft: planner.plan_fft_forward(n),
            ifft: planner.plan_fft_inverse(n),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Integer wavenumbers per axis in transform order.
    pub fn wavenumbers(&self) -> &[i64] {
        &self.wavenumbers
    }

    /// Largest retained wavenumber per axis under 2/3 dealiasing.
    pub fn dealias_cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn is_retained(&self, i: usize, j: usize) -> bool {
        self.keep[i] && self.keep[j]
    }

    /// `|k|^2` for every mode.
    pub fn wavenumber_sq(&self) -> Array2<f64> {
        Array2::from_shape_fn((self.n, self.n), |(i, j)| {
            let kx = self.wavenumbers[i] as f64;
            let ky = self.wavenumbers[j] as f64;
            kx * kx + ky * ky
        })
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if n != self.n {
            return Err(Error::ShapeMismatch(format!(
                "field is {n}x{n} but grid is {}x{}",
                self.n, self.n
            )));
        }
        Ok(())
    }

    /// 2D transform as row transforms, transpose, row transforms, transpose.
    fn fft2(&self, buf: &mut Array2<Complex64>, plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        let data = buf.as_slice_mut().expect("transform buffers are contiguous");
        let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
        let mut columns = vec![Complex64::default(); n * n];
        plan.process_with_scratch(data, &mut scratch);
        transpose::transpose(data, &mut columns, n, n);
        plan.process_with_scratch(&mut columns, &mut scratch);
        transpose::transpose(&columns, data, n, n);
    }

    /// Multiplies by `(-1)^(i+j) * scale`, the shift from a grid origin at
    /// `-pi` (wavenumber parity equals index parity since `n` is even).
    fn shift_phase(buf: &mut Array2<Complex64>, scale: f64) {
        let data = buf.as_slice_mut().expect("transform buffers are contiguous");
        let n = (data.len() as f64).sqrt() as usize;
        for (i, row) in data.chunks_exact_mut(n).enumerate() {
            let s = if i % 2 == 0 { scale } else { -scale };
            for pair in row.chunks_exact_mut(2) {
                pair[0] *= s;
                pair[1] *= -s;
            }
        }
    }

    /// Forward transform of two real arrays packed as one complex transform.
    pub fn forward_pair(
        &self,
        a: &Array2<f64>,
        b: &Array2<f64>,
    ) -> (Array2<Complex64>, Array2<Complex64>) {
        let n = self.n;
        let mut buf = Zip::from(a)
            .and(b)
            .map_collect(|&re, &im| Complex64::new(re, im));
        self.fft2(&mut buf, &self.fft);
        Self::shift_phase(&mut buf, 1.0 / (n * n) as f64);
        let src = buf.as_slice().expect("transform buffers are contiguous");
        let mut ha = Vec::with_capacity(n * n);
        let mut hb = Vec::with_capacity(n * n);
        for i in 0..n {
            let ni = (n - i) % n;
            for j in 0..n {
                let nj = (n - j) % n;
                let c = src[i * n + j];
                let cm = src[ni * n + nj].conj();
                ha.push((c + cm) * 0.5);
                // (c - cm) / (2i)
                let d = (c - cm) * 0.5;
                hb.push(Complex64::new(d.im, -d.re));
            }
        }
        let shape = (n, n);
        (
            Array2::from_shape_vec(shape, ha).expect("n x n"),
            Array2::from_shape_vec(shape, hb).expect("n x n"),
        )
    }

    /// Inverse transform of two real-field spectra packed as `a + i b`.
    pub fn inverse_pair(
        &self,
        a: &Array2<Complex64>,
        b: &Array2<Complex64>,
    ) -> (Array2<f64>, Array2<f64>) {
        let mut buf = Zip::from(a)
            .and(b)
            .map_collect(|&za, &zb| za + Complex64::new(-zb.im, zb.re));
        Self::shift_phase(&mut buf, 1.0);
        self.fft2(&mut buf, &self.ifft);
        (buf.mapv(|z| z.re), buf.mapv(|z| z.im))
    }

    pub fn forward_scalar(&self, a: &Array2<f64>) -> Array2<Complex64> {
        let n = self.n;
        let mut buf = a.mapv(|re| Complex64::new(re, 0.0));
        self.fft2(&mut buf, &self.fft);
        Self::shift_phase(&mut buf, 1.0 / (n * n) as f64);
        buf
    }

    pub fn inverse_scalar(&self, a: &Array2<Complex64>) -> Array2<f64> {
        let mut buf = a.as_standard_layout().into_owned();
        Self::shift_phase(&mut buf, 1.0);
        self.fft2(&mut buf, &self.ifft);
        buf.mapv(|z| z.re)
    }

    pub fn forward(&self, f: &Field) -> Result<Spectrum> {
        self.check_n(f.n())?;
        let comps = match f.components() {
            [s] => vec![self.forward_scalar(s)],
            [u, v] => {
                let (a, b) = self.forward_pair(u, v);
                vec![a, b]
            }
            _ => unreachable!(),
        };
        Spectrum::new(comps)
    }

    pub fn inverse(&self, s: &Spectrum) -> Result<Field> {
        self.check_n(s.n())?;
        let comps = match s.components() {
            [a] => vec![self.inverse_scalar(a)],
            [a, b] => {
                let (u, v) = self.inverse_pair(a, b);
                vec![u, v]
            }
            _ => unreachable!(),
        };
        Field::new(comps)
    }

    /// Per-index multiplier `(i k)^order` along one axis, with the Nyquist
    /// entry zeroed for odd orders.
    fn derivative_factors(&self, order: u32) -> Vec<Complex64> {
        let half = (self.n / 2) as i64;
        self.wavenumbers
            .iter()
            .map(|&k| {
                if order % 2 == 1 && k == half {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(0.0, k as f64).powu(order)
                }
            })
            .collect()
    }

    /// Applies `d^order / d axis^order` to one spectral component.
    pub fn derivative_component(
        &self,
        a: &Array2<Complex64>,
        axis: Axis,
        order: u32,
    ) -> Array2<Complex64> {
        let factors = self.derivative_factors(order);
        let mut out = a.to_owned();
        for (mut row, &fi) in out.outer_iter_mut().zip(&factors) {
            match axis {
                Axis::X => row.mapv_inplace(|z| z * fi),
                Axis::Y => row.iter_mut().zip(&factors).for_each(|(z, &fj)| *z *= fj),
            }
        }
        out
    }

    pub fn derivative(&self, s: &Spectrum, axis: Axis, order: u32) -> Result<Spectrum> {
        self.check_n(s.n())?;
        if order == 0 {
            return Err(Error::InvalidParameter(
                "derivative order must be positive".into(),
            ));
        }
        Spectrum::new(
            s.components()
                .iter()
                .map(|c| self.derivative_component(c, axis, order))
                .collect(),
        )
    }

    /// Zeroes every mode with `|kx| > kc` or `|ky| > kc`.
    pub fn dealias_component(&self, a: &mut Array2<Complex64>) {
        let zero = Complex64::new(0.0, 0.0);
        // retained indices per axis are 0..=kc and n-kc..n
        let dropped = self.cutoff + 1..self.n - self.cutoff;
        for (mut row, &keep) in a.outer_iter_mut().zip(&self.keep) {
            if keep {
                row.slice_mut(s![dropped.clone()]).fill(zero);
            } else {
                row.fill(zero);
            }
        }
    }

    pub fn dealias(&self, s: &mut Spectrum) -> Result<()> {
        self.check_n(s.n())?;
        for c in s.components_mut() {
            self.dealias_component(c);
        }
        Ok(())
    }

    /// Largest coefficient magnitude among modes removed by dealiasing.
    pub fn tail_max(&self, s: &Spectrum) -> f64 {
        let mut m: f64 = 0.0;
        for c in s.components() {
            for ((i, j), z) in c.indexed_iter() {
                if !self.is_retained(i, j) {
                    m = m.max(z.norm());
                }
            }
        }
        m
    }
}

/// Copies the modes representable on both grids from `s` into a spectrum
/// of size `target`. Nyquist modes of either grid are dropped.
pub fn transfer(s: &Spectrum, target: usize) -> Spectrum {
    let n = s.n();
    let kmax = (n.min(target) / 2) as i64 - 1;
    let mut out = Spectrum::zeros(target, s.shape());
    for c in 0..s.shape().components() {
        for kx in -kmax..=kmax {
            for ky in -kmax..=kmax {
                out.set_coeff(c, kx, ky, s.coeff(c, kx, ky));
            }
        }
    }
    out
}
