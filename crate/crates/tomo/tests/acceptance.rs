//! End-to-end acceptance suite: one test per criterion, each printing a
//! single pass/fail line (run with --nocapture to see them on success).

use std::sync::Arc;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng as _, SeedableRng as _};
use rand_chacha::ChaCha8Rng;

use tomo::asymptotics::{
    boundary_exponent, finite_expansion_test, oscillatory_integral, oscillatory_integral_surface,
};
use tomo::bodies::{Body, Direction, Ellipsoid, LpBall, Polytope};
use tomo::grid::DirectionGrid;
use tomo::harmonics::test_coefficient_polynomiality;
use tomo::moments::{
    build_s_order1, detect_ellipsoid, fit_homogeneous, geometric_series_check,
    moment_tables_up_to, recover_support_product, tangent_moments, TangentMeasure,
};
use tomo::polyalg::{
    fit_polynomial, hilbert_pv, test_hilbert_polynomiality, test_polynomial_integrability,
    test_power_polynomiality,
};
use tomo::quad::unit_ball_volume;
use tomo::report::Verdict;
use tomo::slice::{
    chebyshev_points, cutoff_volume, invert_radon_3d_body, section_function, CutoffSign,
    QuadMethod, QuadratureConfig,
};

fn report(n: u32, name: &str, ok: bool, detail: &str) {
    println!("ACCEPTANCE {n} ({name}): {}", if ok { "pass" } else { "fail" });
    assert!(ok, "criterion {n} ({name}): {detail}");
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn random_direction(rng: &mut ChaCha8Rng, n: usize) -> Direction {
    loop {
        let v = DVector::from_iterator(n, (0..n).map(|_| rng.gen_range(-1.0..1.0)));
        if v.norm() > 0.1 {
            return Direction::from_vector(v).unwrap();
        }
    }
}

/// Random SPD shape with eigenvalues in [0.5, 2.5] and a center small
/// enough that the origin stays well inside.
fn random_ellipsoid(rng: &mut ChaCha8Rng, n: usize, centered: bool) -> Ellipsoid {
    let m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let q = m.qr().q();
    let eig = DVector::from_iterator(n, (0..n).map(|_| rng.gen_range(0.5..2.5)));
    let shape = &q * DMatrix::from_diagonal(&eig) * q.transpose();
    let center = if centered {
        DVector::zeros(n)
    } else {
        let r = f64::sqrt(eig.min()) * 0.3;
        DVector::from_iterator(n, (0..n).map(|_| rng.gen_range(-r..r)))
    };
    Ellipsoid::new(shape, center).unwrap()
}

#[test]
fn criterion_01_ball_section_formula() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_exact = 0.0f64;
    let mut ok_mc = true;
    for n in [2usize, 3] {
        let ball = Body::Ellipsoid(Ellipsoid::unit_ball(n));
        let kappa = unit_ball_volume(n - 1);
        for _ in 0..20 {
            let xi = random_direction(&mut rng, n);
            let t: f64 = rng.gen_range(-0.9..0.9);
            let want = kappa * (1.0 - t * t).powf((n as f64 - 1.0) / 2.0);
            let (got, _) = section_function(&ball, &xi, t, &cfg()).unwrap();
            worst_exact = worst_exact.max((got - want).abs() / want);

            let mc_cfg = QuadratureConfig {
                method: QuadMethod::MonteCarlo,
                samples: 200_000,
                ..cfg()
            };
            let (mc, sigma) = section_function(&ball, &xi, t, &mc_cfg).unwrap();
            if (mc - want).abs() > 4.0 * sigma {
                ok_mc = false;
            }
        }
    }
    let ok = worst_exact < 1e-8 && ok_mc && start.elapsed().as_secs() < 10;
    report(
        1,
        "ball section formula",
        ok,
        &format!(
            "worst exact rel {worst_exact:.3e}, mc-in-4-sigma {ok_mc}, {:?}",
            start.elapsed()
        ),
    );
}

#[test]
fn criterion_02_odd_dim_polynomial_integrability() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..100 {
        let body = Body::Ellipsoid(random_ellipsoid(&mut rng, 3, false));
        let dirs: Vec<Direction> = (0..3).map(|_| random_direction(&mut rng, 3)).collect();
        let r = test_polynomial_integrability(&body, &dirs, 6, 1e-7, &cfg()).unwrap();
        if r.verdict != Verdict::Polynomial
            || r.items
                .iter()
                .any(|it| it.degree != Some(2) || it.relative_residual >= 1e-7)
        {
            ok = false;
            detail = format!("ellipsoid {i}: {}", r.conclusion);
            break;
        }
        // V-(t) along one direction is a cubic
        let xi = &dirs[0];
        let (b_minus, b_plus) = match &body {
            Body::Ellipsoid(e) => {
                let w = e.quad_form(xi).sqrt();
                let c = xi.dot(e.center());
                (c - w, c + w)
            }
            _ => unreachable!(),
        };
        let ts = chebyshev_points(b_minus, b_plus, 20);
        let vs: Vec<f64> = ts
            .iter()
            .map(|&t| cutoff_volume(&body, xi, t, CutoffSign::Minus, &cfg()).unwrap())
            .collect();
        let fit = fit_polynomial(&ts, &vs, 3, 1e-7).unwrap();
        if fit.verdict != Verdict::Polynomial || fit.relative_residual >= 1e-7 {
            ok = false;
            detail = format!("ellipsoid {i}: cutoff residual {:.3e}", fit.relative_residual);
            break;
        }
    }
    let fast = start.elapsed().as_secs() < 120;
    report(
        2,
        "odd-dim polynomial integrability",
        ok && fast,
        &format!("{detail} elapsed {:?}", start.elapsed()),
    );
}

#[test]
fn criterion_03_even_dim_impossibility() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut bodies = vec![
        Body::Ellipsoid(Ellipsoid::unit_ball(2)),
        Body::Polytope(Polytope::cube(2, 1.0).unwrap()),
        Body::LpBall(LpBall::new(4.0, vec![1.0, 1.0], vec![0.0, 0.0]).unwrap()),
    ];
    for _ in 0..5 {
        bodies.push(Body::Ellipsoid(random_ellipsoid(&mut rng, 2, false)));
    }
    let mut ok = true;
    let mut detail = String::new();
    for (i, body) in bodies.iter().enumerate() {
        let dirs: Vec<Direction> = (0..4).map(|_| random_direction(&mut rng, 2)).collect();
        let r = test_polynomial_integrability(body, &dirs, 20, 1e-7, &cfg()).unwrap();
        let plateau = r.items.iter().all(|it| it.relative_residual > 1e-3);
        if r.verdict != Verdict::NotPolynomial || !plateau {
            ok = false;
            detail = format!("body {i}: {}", r.conclusion);
            break;
        }
    }
    report(3, "even-dim impossibility", ok, &detail);
}

#[test]
fn criterion_04_theorem_3_4_equivalences() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..20 {
        let body = Body::Ellipsoid(random_ellipsoid(&mut rng, 2, true));
        let dirs: Vec<Direction> = (0..3).map(|_| random_direction(&mut rng, 2)).collect();
        let sq = test_power_polynomiality(&body, 2, &dirs, 4, 1e-6, &cfg()).unwrap();
        let hb = test_hilbert_polynomiality(&body, &dirs, 3, 1e-5, &cfg()).unwrap();
        let sq_ok = sq.verdict == Verdict::Polynomial
            && sq.items.iter().all(|it| it.degree == Some(2) && it.relative_residual < 1e-6);
        let hb_ok = hb.verdict == Verdict::Polynomial
            && hb.items.iter().all(|it| it.degree <= Some(1) && it.relative_residual < 1e-5);
        if !sq_ok || !hb_ok {
            ok = false;
            detail = format!("ellipse {i}: A^2 {}, HA {}", sq.conclusion, hb.conclusion);
            break;
        }
    }
    for body in [
        Body::Polytope(Polytope::cube(2, 1.0).unwrap()),
        Body::LpBall(LpBall::new(4.0, vec![1.0, 1.0], vec![0.0, 0.0]).unwrap()),
    ] {
        let dirs = vec![Direction::from_angle(0.35), Direction::from_angle(1.2)];
        // degree 6 keeps the quadratic alternative testable while the
        // square-root tails stay unfittable above 1e-3
        let sq = test_power_polynomiality(&body, 2, &dirs, 6, 1e-6, &cfg()).unwrap();
        let hb = test_hilbert_polynomiality(&body, &dirs, 20, 1e-5, &cfg()).unwrap();
        let sq_fails = sq.verdict == Verdict::NotPolynomial
            && sq.items.iter().all(|it| it.relative_residual > 1e-3);
        let hb_fails = hb.verdict == Verdict::NotPolynomial
            && hb.items.iter().all(|it| it.relative_residual > 1e-3);
        if !sq_fails || !hb_fails {
            ok = false;
            detail = format!("counterexample: A^2 {}, HA {}", sq.conclusion, hb.conclusion);
            break;
        }
    }
    report(4, "theorem 3.4 equivalences", ok, &detail);
}

#[test]
fn criterion_05_hilbert_oracle() {
    let f = |s: f64| 2.0 * (1.0 - s * s).max(0.0).sqrt();
    let mut worst = 0.0f64;
    for t in [-0.5, 0.0, 0.5, 0.8] {
        let got = hilbert_pv(&f, (-1.0, 1.0), t).unwrap();
        worst = worst.max((got - 2.0 * t).abs());
    }
    report(
        5,
        "hilbert transform oracle",
        worst < 1e-6,
        &format!("worst abs error {worst:.3e}"),
    );
}

#[test]
fn criterion_06_boundary_exponent() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for i in 0..50 {
        let n = if i % 2 == 0 { 2 } else { 3 };
        let body = Body::Ellipsoid(random_ellipsoid(&mut rng, n, false));
        let xi = random_direction(&mut rng, n);
        let alpha = boundary_exponent(&body, &xi, 0.05, 24, &cfg()).unwrap();
        worst = worst.max((alpha - (n as f64 - 1.0) / 2.0).abs());
    }
    report(
        6,
        "boundary exponent",
        worst < 0.02,
        &format!("worst deviation {worst:.4}"),
    );
}

#[test]
fn criterion_07_backprojection_inversion() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let e = random_ellipsoid(&mut rng, 3, false);
    let body = Body::Ellipsoid(e.clone());
    let grid = DirectionGrid::default_for_dim(3);
    let mut worst_in = 0.0f64;
    let mut worst_out = 0.0f64;
    for _ in 0..20 {
        // interior: random point of the inscribed half-size ellipsoid
        let u = random_direction(&mut rng, 3);
        let r: f64 = rng.gen_range(0.0..0.5f64);
        let x = e.center() + (e.shape() * u.coords()).scale(r / e.quad_form(&u).sqrt());
        assert!(body.membership(&x));
        let bp = invert_radon_3d_body(&body, &x, &grid, &cfg()).unwrap();
        worst_in = worst_in.max((bp.value - 1.0).abs());

        // far exterior: well outside the bounding radius
        let u = random_direction(&mut rng, 3);
        let rho = body.bounding_radius() * rng.gen_range(1.5..2.5);
        let y = u.coords().scale(rho);
        assert!(!body.membership(&y));
        let bp = invert_radon_3d_body(&body, &y, &grid, &cfg()).unwrap();
        worst_out = worst_out.max(bp.value.abs());
    }
    let ok = worst_in < 1e-2 && worst_out < 1e-2 && start.elapsed().as_secs() < 300;
    report(
        7,
        "back-projection inversion",
        ok,
        &format!(
            "interior dev {worst_in:.3e}, exterior dev {worst_out:.3e}, {:?}",
            start.elapsed()
        ),
    );
}

#[test]
fn criterion_08_harmonic_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bodies = vec![Body::Ellipsoid(
        Ellipsoid::ball(3, 1.0, vec![0.0, 0.0, 0.3]).unwrap(),
    )];
    for _ in 0..20 {
        bodies.push(Body::Ellipsoid(random_ellipsoid(&mut rng, 3, false)));
    }
    let mut ok = true;
    let mut detail = String::new();
    for (i, body) in bodies.iter().enumerate() {
        let r = test_coefficient_polynomiality(body, 4, 1e-6, &cfg()).unwrap();
        let degrees_ok = r.items.iter().all(|it| {
            let k: usize = it.label[2..it.label.find(',').unwrap()].parse().unwrap();
            it.degree.is_none_or(|d| d <= k + 3)
        });
        if r.verdict != Verdict::Polynomial
            || !degrees_ok
            || r.items.iter().any(|it| it.relative_residual >= 1e-6)
        {
            ok = false;
            detail = format!("body {i}: {}", r.conclusion);
            break;
        }
    }
    report(8, "harmonic coefficient polynomiality", ok, &detail);
}

#[test]
fn criterion_09_stationary_phase() {
    let ball3 = Body::Ellipsoid(Ellipsoid::unit_ball(3));
    let xi3 = Direction::new(vec![0.0, 0.0, 1.0]).unwrap();
    let ball_fit = finite_expansion_test(&ball3, &xi3, 2, &cfg()).unwrap();
    // oscillatory integral against the closed form at a few frequencies
    let mut worst_oracle = 0.0f64;
    for lam in [5.0, 11.0, 20.0] {
        let got = oscillatory_integral(&ball3, &xi3, lam, &cfg()).unwrap();
        let want = Complex64::new(
            0.0,
            4.0 * std::f64::consts::PI * (lam.sin() - lam * lam.cos()) / (lam * lam),
        );
        worst_oracle = worst_oracle.max((got - want).norm() / want.norm());
    }
    let disk = Body::Ellipsoid(Ellipsoid::unit_ball(2));
    let disk_fit = finite_expansion_test(&disk, &Direction::from_angle(0.0), 6, &cfg()).unwrap();
    // dual-path identity on ellipsoids
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_dual = 0.0f64;
    for _ in 0..10 {
        let n = if rng.gen_bool(0.5) { 2 } else { 3 };
        let e = random_ellipsoid(&mut rng, n, false);
        let body = Body::Ellipsoid(e.clone());
        let xi = random_direction(&mut rng, n);
        let lam = rng.gen_range(1.0..10.0);
        let a = oscillatory_integral(&body, &xi, lam, &cfg()).unwrap();
        let b = oscillatory_integral_surface(&e, &xi, lam).unwrap();
        worst_dual = worst_dual.max((a - b).norm() / a.norm().max(1e-12));
    }
    let ok = ball_fit.verdict == Verdict::Finite
        && ball_fit.relative_residual < 1e-6
        && worst_oracle < 1e-9
        && disk_fit.verdict == Verdict::NotFinite
        && disk_fit.relative_residual > 1e-2
        && worst_dual < 1e-6;
    report(
        9,
        "stationary phase",
        ok,
        &format!(
            "ball residual {:.3e}, oracle {worst_oracle:.3e}, disk residual {:.3e}, dual {worst_dual:.3e}",
            ball_fit.relative_residual, disk_fit.relative_residual
        ),
    );
}

#[test]
fn criterion_10_tangent_measure_machinery() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let grid = Arc::new(DirectionGrid::circle(720));
    let mut worst_series = 0.0f64;
    let mut worst_recover = 0.0f64;
    let mut worst_det = 0.0f64;
    for _ in 0..20 {
        let e = random_ellipsoid(&mut rng, 2, true);
        let body = Body::Ellipsoid(e.clone());
        let tm = TangentMeasure::from_body(&body, grid.clone()).unwrap();
        let tables: Vec<_> = (0..5).map(|k| tangent_moments(&tm, k)).collect();
        worst_series = worst_series.max(geometric_series_check(&tables, &tm.h).unwrap());

        let first4: [_; 4] = std::array::from_fn(|k| tables[k].clone());
        let rec = recover_support_product(&first4);
        for (i, v) in rec.iter().enumerate() {
            let xi = grid.points[i].coords();
            let want = (e.shape() * xi).dot(xi);
            worst_recover = worst_recover.max((v.unwrap() - want).abs());
        }
        for i in (0..grid.len()).step_by(97) {
            let h = tm.h[i];
            let hr = tm.h[grid.antipode[i]];
            let det = build_s_order1(h, hr).determinant();
            worst_det = worst_det.max((det - h * h * hr * hr).abs());
        }
    }
    let ok = worst_series < 1e-12 && worst_recover < 1e-9 && worst_det < 1e-12;
    report(
        10,
        "tangent-measure matrix machinery",
        ok,
        &format!("series {worst_series:.3e}, recover {worst_recover:.3e}, det {worst_det:.3e}"),
    );
}

#[test]
fn criterion_11_ellipsoid_detector() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..100 {
        let n = if i % 2 == 0 { 2 } else { 3 };
        let body = Body::Ellipsoid(random_ellipsoid(&mut rng, n, false));
        let r = detect_ellipsoid(&body, 1e-9).unwrap();
        if r.verdict != Verdict::Ellipsoid
            || r.items.iter().any(|it| it.relative_residual >= 1e-9)
        {
            ok = false;
            detail = format!("ellipsoid {i}: {}", r.conclusion);
            break;
        }
    }
    // random H-polytope: intersection of slabs in generic directions
    let mut halfspaces = Vec::new();
    for _ in 0..5 {
        let d = random_direction(&mut rng, 2);
        let b = rng.gen_range(0.8..1.5);
        halfspaces.push((d.coords().clone(), b));
        halfspaces.push((-d.coords().clone(), b * rng.gen_range(0.8..1.2)));
    }
    let counterexamples = [
        Body::Polytope(Polytope::cube(2, 1.0).unwrap()),
        Body::Polytope(Polytope::regular_polygon(5, 1.0).unwrap()),
        Body::LpBall(LpBall::new(4.0, vec![1.0, 1.0], vec![0.0, 0.0]).unwrap()),
        Body::Polytope(Polytope::new(halfspaces).unwrap()),
    ];
    for (i, body) in counterexamples.iter().enumerate() {
        let r = detect_ellipsoid(body, 1e-9).unwrap();
        if r.verdict != Verdict::NotEllipsoid
            || !r.items.iter().any(|it| it.relative_residual > 1e-3)
        {
            ok = false;
            detail = format!("counterexample {i}: {}", r.conclusion);
            break;
        }
    }
    let fast = start.elapsed().as_secs() < 120;
    report(
        11,
        "ellipsoid detector",
        ok && fast,
        &format!("{detail} elapsed {:?}", start.elapsed()),
    );
}

#[test]
fn criterion_12_moment_range_conditions() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let corpus: Vec<(&str, Body)> = vec![
        ("disk", Body::Ellipsoid(Ellipsoid::unit_ball(2))),
        (
            "ellipse",
            Body::Ellipsoid(
                Ellipsoid::new(
                    DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 1.0])),
                    DVector::zeros(2),
                )
                .unwrap(),
            ),
        ),
        (
            "random ellipse",
            Body::Ellipsoid(random_ellipsoid(&mut rng, 2, false)),
        ),
        ("square", Body::Polytope(Polytope::cube(2, 1.0).unwrap())),
        (
            "pentagon",
            Body::Polytope(Polytope::regular_polygon(5, 1.0).unwrap()),
        ),
        (
            "lp ball",
            Body::LpBall(LpBall::new(4.0, vec![1.0, 0.8], vec![0.1, 0.0]).unwrap()),
        ),
        ("ball3", Body::Ellipsoid(Ellipsoid::unit_ball(3))),
        (
            "random ellipsoid",
            Body::Ellipsoid(random_ellipsoid(&mut rng, 3, false)),
        ),
        ("cube3", Body::Polytope(Polytope::cube(3, 1.0).unwrap())),
    ];
    let mut ok = true;
    let mut detail = String::new();
    'outer: for (name, body) in &corpus {
        let grid = Arc::new(DirectionGrid::default_for_dim(body.dim()));
        let tables = moment_tables_up_to(body, 6, &grid, &cfg()).unwrap();
        for table in &tables {
            let fit = fit_homogeneous(table, 1e-6).unwrap();
            if fit.verdict != Verdict::Polynomial {
                ok = false;
                detail = format!(
                    "{name}, k = {}: residual {:.3e}",
                    table.k, fit.relative_residual
                );
                break 'outer;
            }
        }
    }
    report(12, "moment range conditions", ok, &detail);
}
