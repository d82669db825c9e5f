//! Independent numerical oracles for the right-hand side and the stepper.

use calmks::dynamics::{nonlinear_rhs_scalar, nonlinear_rhs_vector};
use calmks::experiments::initial::{grad_sines, sines_potential};
use calmks::experiments::{fit_loglog_slope, simulate, InitialPreset, RunConfig};
use calmks::norms::l2_norm;
use calmks::spectral::transfer;
use calmks::timestepper::StepperState;
use calmks::{Calming, CalmingKind, EquationForm, Field, Grid, Model, Shape, Spectrum};

fn rel_diff(a: &Spectrum, b: &Spectrum, g: &Grid) -> f64 {
    l2_norm(&a.difference(b).unwrap(), g) / l2_norm(b, g)
}

/// Smooth vector data with support in `|k_j| <= 20`.
fn band_limited(x: f64, y: f64) -> [f64; 2] {
    [
        0.4 * (3.0 * x - 2.0 * y).cos() + 0.2 * (20.0 * x + 7.0 * y).sin() + 0.3 * (x + 20.0 * y).cos(),
        0.5 * (5.0 * y).sin() - 0.25 * (17.0 * x - 20.0 * y).cos() + 0.1,
    ]
}

#[test]
fn nonlinear_term_agrees_with_refined_grid() {
    let coarse = Grid::new(128).unwrap();
    let fine = Grid::new(256).unwrap();
    for calming in [Calming::identity(), Calming::new(CalmingKind::Type2, 0.01).unwrap()] {
        let u128 = coarse.forward(&Field::from_fn(128, Shape::Vector, band_limited)).unwrap();
        let u256 = fine.forward(&Field::from_fn(256, Shape::Vector, band_limited)).unwrap();
        let n128 = nonlinear_rhs_vector(&u128, &calming, &coarse).unwrap();
        let mut n256 = transfer(&nonlinear_rhs_vector(&u256, &calming, &fine).unwrap(), 128);
        coarse.dealias(&mut n256).unwrap();
        let err = rel_diff(&n128, &n256, &coarse);
        assert!(err < 1e-10, "{calming}: {err:e}");
    }

    let phi = |x: f64, y: f64| [(20.0 * x - 3.0 * y).sin() + 0.5 * (4.0 * x + 19.0 * y).cos(), 0.0];
    let p128 = coarse.forward(&Field::from_fn(128, Shape::Scalar, phi)).unwrap();
    let p256 = fine.forward(&Field::from_fn(256, Shape::Scalar, phi)).unwrap();
    let id = Calming::identity();
    let n128 = nonlinear_rhs_scalar(&p128, &id, &coarse).unwrap();
    let mut n256 = transfer(&nonlinear_rhs_scalar(&p256, &id, &fine).unwrap(), 128);
    coarse.dealias(&mut n256).unwrap();
    assert!(rel_diff(&n128, &n256, &coarse) < 1e-10);
}

/// `-(eta(u) . grad) u` for the gradient initial data, evaluated from the
/// exact field on an `m x m` grid and projected onto the dealiased modes of
/// an `n x n` grid.
fn quadrature_oracle(calming: &Calming, n: usize, m: usize) -> Spectrum {
    let fine = Grid::new(m).unwrap();
    let exact = Field::from_fn(m, Shape::Vector, |x, y| {
        let u = grad_sines(x, y);
        let w = calming.apply(u);
        let ux = [-(x + y).sin() - x.sin(), -(x + y).sin()];
        let uy = [-(x + y).sin(), -(x + y).sin() - y.sin()];
        [
            -(w[0] * ux[0] + w[1] * uy[0]),
            -(w[0] * ux[1] + w[1] * uy[1]),
        ]
    });
    let mut oracle = transfer(&fine.forward(&exact).unwrap(), n);
    Grid::new(n).unwrap().dealias(&mut oracle).unwrap();
    oracle
}

fn quadrature_error(calming: &Calming, n: usize) -> f64 {
    let g = Grid::new(n).unwrap();
    let u = g.forward(&Field::from_fn(n, Shape::Vector, grad_sines)).unwrap();
    let computed = nonlinear_rhs_vector(&u, calming, &g).unwrap();
    rel_diff(&computed, &quadrature_oracle(calming, n, 4 * n), &g)
}

#[test]
fn nonlinear_term_matches_fine_quadrature() {
    for calming in [
        Calming::identity(),
        Calming::new(CalmingKind::Type2, 0.1).unwrap(),
        Calming::new(CalmingKind::Type3, 0.1).unwrap(),
    ] {
        let err = quadrature_error(&calming, 128);
        assert!(err < 1e-8, "{calming}: {err:e}");
    }
}

#[test]
fn type1_quadrature_error_decays_algebraically() {
    // eta_1 is only Lipschitz where u = 0, so the aliasing error of the
    // product decays algebraically in n rather than spectrally
    let c = Calming::new(CalmingKind::Type1, 0.1).unwrap();
    let errs: Vec<f64> = [32, 64, 128, 256].iter().map(|&n| quadrature_error(&c, n)).collect();
    assert!(errs[2] < 1e-6, "{errs:?}");
    for w in errs.windows(2) {
        assert!(w[1] < w[0] / 4.0, "{errs:?}");
    }
}

#[test]
fn type3_scalar_term_is_within_defect_bound_of_identity() {
    let n = 64;
    let g = Grid::new(n).unwrap();
    let eps = 0.01;
    let phi = g
        .forward(&Field::from_fn(n, Shape::Scalar, |x, y| [x.sin() + y.cos(), 0.0]))
        .unwrap();
    let calmed = nonlinear_rhs_scalar(&phi, &Calming::new(CalmingKind::Type3, eps).unwrap(), &g).unwrap();
    let plain = nonlinear_rhs_scalar(&phi, &Calming::identity(), &g).unwrap();
    let diff = l2_norm(&calmed.difference(&plain).unwrap(), &g);

    // |N_eps - N_0| <= 1/2 |eta(v) - v| |v| <= 1/2 eps^2 |v|^4 pointwise, and
    // dealiasing does not increase the discrete L2 norm
    let bound_field = Field::from_fn(n, Shape::Scalar, |x, y| {
        let v2 = x.cos().powi(2) + y.sin().powi(2);
        [0.5 * eps * eps * v2 * v2, 0.0]
    });
    let bound = l2_norm(&g.forward(&bound_field).unwrap(), &g);
    assert!(diff > 0.0 && diff <= bound, "{diff:e} > {bound:e}");
}

#[test]
fn calmed_term_converges_to_identity_at_defect_rate() {
    let g = Grid::new(64).unwrap();
    let u = g.forward(&Field::from_fn(64, Shape::Vector, grad_sines)).unwrap();
    let plain = nonlinear_rhs_vector(&u, &Calming::identity(), &g).unwrap();
    for kind in [CalmingKind::Type1, CalmingKind::Type2, CalmingKind::Type3] {
        let pts: Vec<(f64, f64)> = [1e-1, 1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&eps| {
                let c = Calming::new(kind, eps).unwrap();
                let n = nonlinear_rhs_vector(&u, &c, &g).unwrap();
                (eps, l2_norm(&n.difference(&plain).unwrap(), &g))
            })
            .collect();
        let alpha = Calming::new(kind, 0.1).unwrap().defect_bound().unwrap().alpha;
        let fit = fit_loglog_slope(&pts).unwrap();
        assert!((fit.slope - alpha).abs() <= 0.2, "{kind}: {}", fit.slope);
    }
}

#[test]
fn full_rhs_matches_difference_quotient_of_short_steps() {
    let g = Grid::new(64).unwrap();
    let form = EquationForm::new(Shape::Vector, Calming::identity(), 4.1).unwrap();
    let model = Model::new(g.clone(), form).unwrap();
    let u0 = g.forward(&Field::from_fn(64, Shape::Vector, grad_sines)).unwrap();
    // forward steps only: a negative step would amplify rounding in the
    // stiff modes by exp(|L| h)
    let h = 1e-6;
    let diff = |dt: f64| {
        let mut s = StepperState::new(&model, u0.clone(), 0.0, dt).unwrap();
        s.advance(&model).unwrap();
        let mut d = s.state.difference(&u0).unwrap();
        for c in d.components_mut() {
            c.mapv_inplace(|z| z / dt);
        }
        d
    };
    // Richardson combination of the h and 2h difference quotients
    let (d1, d2) = (diff(h), diff(2.0 * h));
    let fd = Spectrum::new(
        d1.components()
            .iter()
            .zip(d2.components())
            .map(|(a, b)| a * 2.0 - b)
            .collect(),
    )
    .unwrap();
    let rhs = model.full_rhs(&u0).unwrap();
    let err = rel_diff(&fd, &rhs, &g);
    assert!(err < 1e-6, "{err:e}");
}

#[test]
fn linear_evolution_is_exact_over_many_steps() {
    let g = Grid::new(32).unwrap();
    let form = EquationForm::new(Shape::Vector, Calming::identity(), 4.1).unwrap();
    let model = Model::new(g.clone(), form).unwrap().linear_only();
    let u0 = g.forward(&Field::from_fn(32, Shape::Vector, band_limited_low)).unwrap();
    let (dt, m) = (1e-3, 50);
    let mut s = StepperState::new(&model, u0.clone(), 0.0, dt).unwrap();
    for _ in 0..m {
        s.advance(&model).unwrap();
    }
    let mut expected = u0;
    expected.scale_modes(&model.symbol().exponential(m as f64 * dt));
    let err = rel_diff(&s.state, &expected, &g);
    assert!(err < 1e-12, "{err:e}");
}

fn band_limited_low(x: f64, y: f64) -> [f64; 2] {
    [(2.0 * x).cos() + 0.3 * (x - 3.0 * y).sin(), 0.5 * (x + y).sin() + (4.0 * y).cos()]
}

#[test]
fn repeated_runs_are_bit_identical() {
    let cfg = RunConfig {
        kind: CalmingKind::Type1,
        epsilon: 0.05,
        n: 32,
        dt: 1e-3,
        t_end: 0.05,
        initial: InitialPreset::HighOsc,
        ..RunConfig::default()
    };
    let a = simulate(&cfg).unwrap();
    let b = simulate(&cfg).unwrap();
    assert_eq!(a.final_state, b.final_state);
    assert_eq!(a.norms, b.norms);
}

#[test]
fn damped_regime_decays_monotonically() {
    // lambda = 0.5 < 1: every nonzero mode is damped, and gradient data keeps
    // a zero mean under the vector equation
    let cfg = RunConfig {
        shape: Shape::Vector,
        kind: CalmingKind::Identity,
        lambda: 0.5,
        n: 32,
        dt: 1e-3,
        t_end: 2.0,
        initial: InitialPreset::GradSines,
        ..RunConfig::default()
    };
    let traj = simulate(&cfg).unwrap();
    let tail = &traj.norms[traj.norms.len() / 4..];
    for w in tail.windows(2) {
        assert!(w[1].l2 < w[0].l2, "L2 grew at t = {}", w[1].t);
    }
    assert!(tail.last().unwrap().l2 < 0.5 * traj.norms[0].l2);
}

#[test]
fn scalar_gradient_matches_vector_initial_data() {
    let g = Grid::new(32).unwrap();
    let phi = g
        .forward(&Field::from_fn(32, Shape::Scalar, |x, y| [sines_potential(x, y), 0.0]))
        .unwrap();
    let u = g.forward(&Field::from_fn(32, Shape::Vector, grad_sines)).unwrap();
    for (c, axis) in [(0, calmks::Axis::X), (1, calmks::Axis::Y)] {
        let d = g.derivative(&phi, axis, 1).unwrap();
        let uc = Spectrum::new(vec![u.component(c).clone()]).unwrap();
        assert!(l2_norm(&d.difference(&uc).unwrap(), &g) < 1e-12);
    }
}
