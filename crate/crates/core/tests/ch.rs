use alpha_fluids_core::ch::*;
use alpha_fluids_core::rng::SplitMix64;
use alpha_fluids_core::Error;
use proptest::prelude::*;
use std::f64::consts::PI;

fn run(mut s: CHState, dt: f64, steps: usize) -> CHState {
    for _ in 0..steps {
        s = ch_step_rk4(&s, dt).unwrap();
    }
    s
}

fn sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn energy_is_conserved_on_both_boundary_conditions() {
    let grids = [Grid1D::dirichlet(512).unwrap(), Grid1D::periodic(512, 1.0).unwrap()];
    for g in grids {
        let s0 = CHState::from_fn(g, |x| 0.5 * (PI * x).sin().powi(2) + 0.2 * (2.0 * PI * x).sin());
        let e0 = ch_energy(&s0);
        let s1 = run(s0, 1e-4, 2000);
        let drift = (ch_energy(&s1) - e0).abs() / e0;
        assert!(drift < 1e-6, "{:?}: {drift:e}", g.bc());
    }
}

#[test]
fn dirichlet_rhs_self_converges() {
    let rhs = |n: usize| {
        let g = Grid1D::dirichlet(n).unwrap();
        ch_rhs_eulerian(&CHState::from_fn(g, |x| (PI * x).sin()))
    };
    // nodes of the n-grid are every 4th node of the (4n + 3)-grid
    let diff = |n: usize| {
        let (c, f) = (rhs(n), rhs(4 * n + 3));
        (0..n).map(|i| (c[i] - f[4 * i + 3]).abs()).fold(0.0, f64::max)
    };
    let (a, b) = (diff(31), diff(63));
    assert!(a / b > 3.5, "{a} {b}");
}

#[test]
fn eulerian_and_lagrangian_agree() {
    let g = Grid1D::dirichlet(256).unwrap();
    let s0 = CHState::from_fn(g, |x| 0.1 * (PI * x).sin());
    let dt = 1e-3;
    let e = run(s0.clone(), dt, 500);
    let mut l = CHLagrangianState::from_eulerian(&s0).unwrap();
    for _ in 0..500 {
        l = ch_spray_step(&l, dt).unwrap();
    }
    let diff = sup(e.u(), l.to_eulerian().unwrap().u());
    assert!(diff < 1e-4, "{diff:e}");
}

#[test]
fn spray_is_homogeneous() {
    let g = Grid1D::dirichlet(64).unwrap();
    let s = CHState::from_fn(g, |x| 0.2 * (PI * x).sin() * (1.0 + x));
    let s2 = CHState::new(g, s.u().iter().map(|v| 2.0 * v).collect()).unwrap();
    let advance = |s: &CHState, dt: f64, n: usize| {
        let mut l = CHLagrangianState::from_eulerian(s).unwrap();
        for _ in 0..n {
            l = ch_spray_step(&l, dt).unwrap();
        }
        l
    };
    let a = advance(&s2, 0.01, 40);
    let b = advance(&s, 0.02, 40);
    assert!(sup(a.eta(), b.eta()) < 1e-13);
}

fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

#[test]
fn frak_u_matches_dense_oracle() {
    let n = 40;
    let g = Grid1D::dirichlet(n).unwrap();
    let h = g.h();
    let mut rng = SplitMix64::new(5);
    let u: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
    let v: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
    // padded samples and second-order slopes, one-sided at the ends
    let pad = |w: &[f64]| {
        let mut p = vec![0.0];
        p.extend_from_slice(w);
        p.push(0.0);
        let m = p.len();
        let mut s: Vec<f64> = (0..m)
            .map(|i| {
                if i == 0 || i == m - 1 {
                    0.0
                } else {
                    (p[i + 1] - p[i - 1]) / (2.0 * h)
                }
            })
            .collect();
        s[0] = (-3.0 * p[0] + 4.0 * p[1] - p[2]) / (2.0 * h);
        s[m - 1] = (3.0 * p[m - 1] - 4.0 * p[m - 2] + p[m - 3]) / (2.0 * h);
        (p, s)
    };
    let ((pu, su), (pv, sv)) = (pad(&u), pad(&v));
    let q: Vec<f64> = (0..n + 2).map(|i| pu[i] * pv[i] + 0.5 * su[i] * sv[i]).collect();
    let rhs: Vec<f64> = (1..=n).map(|i| (q[i + 1] - q[i - 1]) / (2.0 * h)).collect();
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        a[i][i] = 1.0 + 2.0 / (h * h);
        if i > 0 {
            a[i][i - 1] = -1.0 / (h * h);
        }
        if i + 1 < n {
            a[i][i + 1] = -1.0 / (h * h);
        }
    }
    let oracle = dense_solve(a, rhs);
    let ours = frak_u_1d(&u, &v, &g).unwrap();
    assert!(sup(&ours, &oracle) < 1e-10);
    assert!(frak_u_1d(&u, &vec![0.0; n], &g).unwrap().iter().all(|x| *x == 0.0));
}

#[test]
fn curvature_is_scale_invariant_and_rejects_degenerate_planes() {
    let g = Grid1D::periodic(128, 2.0 * PI).unwrap();
    let x = g.sample(f64::sin);
    let y = g.sample(|t| (2.0 * t).cos());
    let k = ch_sectional_curvature(&x, &y, &g).unwrap();
    let x2: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
    assert!((ch_sectional_curvature(&x2, &y, &g).unwrap() - k).abs() < 1e-9 * k.abs());
    assert!((ch_sectional_curvature(&y, &x, &g).unwrap() - k).abs() < 1e-9 * k.abs());
    assert!(matches!(
        ch_sectional_curvature(&x, &x, &g),
        Err(Error::DegeneratePlane { .. })
    ));
}

#[test]
fn curvature_self_converges_under_refinement() {
    let k = |n: usize| {
        let g = Grid1D::periodic(n, 2.0 * PI).unwrap();
        ch_sectional_curvature(&g.sample(f64::sin), &g.sample(|t| (2.0 * t).cos()), &g).unwrap()
    };
    let (a, b, c) = (k(256), k(512), k(1024));
    let (d1, d2) = ((a - b).abs(), (b - c).abs());
    // second-order scheme: the ratio tends to 4 (from below for this pair)
    assert!(c.is_finite() && (d1 / d2 - 4.0).abs() < 0.1, "{a} {b} {c}: {}", d1 / d2);
}

#[test]
fn covariant_derivative_is_metric_to_second_order() {
    let defect = |n: usize| {
        let g = Grid1D::periodic(n, 2.0 * PI).unwrap();
        let x = g.sample(|t| t.sin() + 0.3 * (3.0 * t).cos());
        let y = g.sample(|t| (2.0 * t + 0.4).cos());
        let z = g.sample(|t| (t - 1.0).sin() + 0.5 * (2.0 * t).sin());
        let ip = |a: &[f64], b: &[f64]| ch_inner_product(a, b, &g).unwrap();
        let c = |a: &[f64], b: &[f64]| ch_covariant_derivative(a, b, &g).unwrap();
        (ip(&c(&x, &y), &z) + ip(&y, &c(&x, &z))).abs()
    };
    let (a, b) = (defect(128), defect(256));
    assert!(a < 1e-2 && a / b > 3.5, "{a} {b}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn frak_u_is_symmetric_and_bilinear(seed in any::<u64>(), s in -3.0f64..3.0) {
        let g = Grid1D::dirichlet(33).unwrap();
        let mut rng = SplitMix64::new(seed);
        let mut draw = || (0..33).map(|_| rng.uniform(-1.0, 1.0)).collect::<Vec<f64>>();
        let (u, v, w) = (draw(), draw(), draw());
        let uv = frak_u_1d(&u, &v, &g).unwrap();
        prop_assert!(sup(&uv, &frak_u_1d(&v, &u, &g).unwrap()) < 1e-11);
        let comb: Vec<f64> = u.iter().zip(&w).map(|(a, b)| a + s * b).collect();
        let lhs = frak_u_1d(&comb, &v, &g).unwrap();
        let rhs: Vec<f64> = uv.iter().zip(frak_u_1d(&w, &v, &g).unwrap()).map(|(a, b)| a + s * b).collect();
        prop_assert!(sup(&lhs, &rhs) < 1e-11);
    }
}
