//! Acceptance suite: one PASS/FAIL line per criterion, driven by the shipped
//! configs in `configs/`. Run a subset with
//! `cargo test -p alpha-fluids --test acceptance -- 4 9`.

use alpha_fluids::checkpoint::Checkpoint;
use alpha_fluids::config::{parse_config, Dissipation, RunConfig};
use alpha_fluids::experiments::{co_rotation_rate, initial_velocity, run_experiment, RunOutcome};
use alpha_fluids::output::Cell;
use alpha_fluids_core::ch::{ch_rhs_eulerian, CHState, Grid1D};
use alpha_fluids_core::euler::{
    blob_diagnostics, blob_speed, blob_step_rk4, rhs_vorticity, step_plan, third_grade_energy, third_grade_rhs,
    third_grade_step_rk4, BlobEnsemble, DissipationMode, ThirdGradeParams, VorticityState,
};
use alpha_fluids_core::geometry::{jacobi_evolve, sectional_curvature, TrigVectorField};
use alpha_fluids_core::helmholtz::{
    helmholtz_apply, helmholtz_inverse, leray_project, stokes_pressure, stokes_project,
};
use alpha_fluids_core::initial::{random_seeded, single_mode};
use alpha_fluids_core::rng::SplitMix64;
use alpha_fluids_core::spectral::{inner_product_alpha, Rank};
use alpha_fluids_core::{AlphaParam, PhysicalField, SpectralField, TorusGrid2D};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

// Tolerances, all fixed here.
const C1_TOL: f64 = 1e-12;
const C1_SECONDS: f64 = 1.0;
const C2_TOL: f64 = 1e-12;
const C2_ORTHO_TOL: f64 = 1e-11;
const C3_REL_TOL: f64 = 1e-6;
const C4_DRIFT_TOL: f64 = 1e-8;
const C4_SECONDS: f64 = 300.0;
const C5_TRANSPORT_TOL: f64 = 1e-4;
const C5_VOLUME_TOL: f64 = 1e-3;
const C5_GAIN: f64 = 8.0;
const C5_COARSE_MAP_DT: [f64; 3] = [1e-1, 5e-2, 2.5e-2];
const C6_SLOPE: (f64, f64) = (0.8, 1.2);
const C6_SECONDS: f64 = 1200.0;
const C7_REL_TOL: f64 = 1e-10;
const C7_NONPOS_TOL: f64 = 1e-12;
const C7_PAIRS: usize = 50;
const C7_SECONDS: f64 = 60.0;
const C8_BRACKET: f64 = 1e-3;
const C8_SAMPLES: usize = 10;
const C9_RATIO: (f64, f64) = (2.0 * 0.7, 2.0 * 1.3);
const C9_NORM_TOL: f64 = 1e-8;
const C10_ENERGY_TOL: f64 = 1e-6;
const C10_LAGRANGIAN_TOL: f64 = 1e-4;
const C10_MIN_ORDER: f64 = 1.9;
const C11_RATE_TOL: f64 = 1e-4;
const C11_DRIFT_TOL: f64 = 1e-8;
const C11_POINT_ALPHA: f64 = 1e-2;
const C12_REDUCTION_TOL: f64 = 1e-10;
const C12_THIRD_GRADE: (f64, f64) = (0.1, 0.05); // (α₂, β) for the energy run
const C13_RESTART_TOL: f64 = 1e-14;

type Check = Result<String, String>;

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn load(name: &str) -> RunConfig {
    let path = configs_dir().join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_config(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn scratch(tag: &str) -> tempfile::TempDir {
    tempfile::Builder::new()
        .prefix(&format!("acc-{tag}-"))
        .tempdir()
        .expect("temp dir")
}

fn run(cfg: &RunConfig, dir: &Path) -> Result<RunOutcome, String> {
    run_experiment(cfg, dir).map_err(|e| format!("run failed: {e}"))
}

fn summary(o: &RunOutcome, key: &str) -> f64 {
    let v = o.manifest.get(key).unwrap_or_else(|| panic!("manifest has no `{key}`"));
    v.parse().unwrap_or(f64::NAN)
}

fn al(a: f64) -> AlphaParam {
    AlphaParam::new(a).expect("valid α")
}

fn verdict(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1() -> Check {
    let cfg = load("c01_spectral.cfg");
    let start = Instant::now();
    let mut worst = [0.0f64; 3];
    for n in [cfg.n, 2 * cfg.n] {
        let g = TorusGrid2D::square(n).unwrap();
        let u = random_seeded(g, cfg.seed, cfg.slope, cfg.kmax).unwrap();
        let p = u.to_physical();
        let scale = u.max_abs();
        // Parseval: S·Σ|û|² against the grid quadrature of |u|²
        let spectral = inner_product_alpha(&u, &u, AlphaParam::zero()).unwrap();
        let physical: f64 = (0..2)
            .map(|c| p.component(c).iter().map(|v| v * v).sum::<f64>())
            .sum::<f64>()
            * g.area()
            / g.len() as f64;
        worst[0] = worst[0].max((spectral - physical).abs() / spectral);
        worst[1] = worst[1].max(p.to_spectral().max_diff(&u) / scale);
        for j in [[1i64, 0], [0, 3], [2, -5], [7, 4], [-(n as i64) / 2 + 1, 3]] {
            let phase = 0.37;
            let f = PhysicalField::from_fn(g, |x, y| (j[0] as f64 * x + j[1] as f64 * y + phase).cos()).to_spectral();
            let s = |x: f64, y: f64| -(j[0] as f64 * x + j[1] as f64 * y + phase).sin();
            let dx = PhysicalField::from_fn(g, |x, y| j[0] as f64 * s(x, y));
            let dy = PhysicalField::from_fn(g, |x, y| j[1] as f64 * s(x, y));
            let norm = (j[0].abs().max(j[1].abs())) as f64;
            worst[2] = worst[2].max(f.dx().to_physical().max_diff(&dx) / norm);
            worst[2] = worst[2].max(f.dy().to_physical().max_diff(&dy) / norm);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        worst.iter().all(|w| *w < C1_TOL) && secs < C1_SECONDS,
        format!(
            "Parseval {:.1e}, round trip {:.1e}, derivative {:.1e} (tol {C1_TOL:.0e}); {secs:.2} s (limit {C1_SECONDS} s)",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn c2() -> Check {
    let cfg = load("c02_projections.cfg");
    let g = TorusGrid2D::square(cfg.n).unwrap();
    let a = al(cfg.alpha);
    let sol = random_seeded(g, cfg.seed, cfg.slope, cfg.kmax).unwrap();
    let phi = random_seeded(g, cfg.seed + 1, cfg.slope, cfg.kmax)
        .unwrap()
        .take_component(0);
    let f = &sol + &phi.gradient().unwrap();
    let rel = |x: &SpectralField, y: &SpectralField| x.max_diff(y) / y.max_abs();
    let round = rel(&helmholtz_apply(&helmholtz_inverse(&f, a), a), &f)
        .max(rel(&helmholtz_inverse(&helmholtz_apply(&f, a), a), &f));
    let p = leray_project(&f).unwrap();
    let idem = rel(&leray_project(&p).unwrap(), &p);
    let v = stokes_project(&f, a).unwrap();
    let grad_part = helmholtz_inverse(&stokes_pressure(&f, a).unwrap().gradient().unwrap(), a);
    let split = rel(&(&v + &grad_part), &f);
    let ip = |x: &SpectralField, y: &SpectralField| inner_product_alpha(x, y, a).unwrap();
    let ortho = ip(&v, &grad_part).abs() / (ip(&v, &v) * ip(&grad_part, &grad_part)).sqrt();
    let same = rel(&v, &p);
    verdict(
        round < C2_TOL && idem < C2_TOL && split < C2_TOL && ortho < C2_ORTHO_TOL && same < C2_TOL,
        format!(
            "inverse round trip {round:.1e}, Leray idempotence {idem:.1e}, decomposition {split:.1e} (tol {C2_TOL:.0e}); \
             α-orthogonality {ortho:.1e} (tol {C2_ORTHO_TOL:.0e}); Stokes vs Leray {same:.1e} (tol {C2_TOL:.0e})"
        ),
    )
}

fn decay_rate(file: &str) -> Result<(f64, f64), String> {
    let cfg = load(file);
    let dir = scratch("c3");
    run(&cfg, dir.path())?;
    let end = Checkpoint::read(&dir.path().join("final.alfl")).map_err(|e| e.to_string())?;
    let g = TorusGrid2D::new(cfg.n, cfg.n, cfg.length, cfg.length).unwrap();
    let s0 = VorticityState::from_velocity(&initial_velocity(&cfg, g).unwrap(), al(cfg.alpha)).unwrap();
    let [jx, jy] = cfg.k1;
    let measured = -(end.field.coeff(0, jx, jy).norm() / s0.q().coeff(0, jx, jy).norm()).ln() / end.t;
    let k2 = g.k_sq(
        TorusGrid2D::slot(jx, cfg.n).unwrap(),
        TorusGrid2D::slot(jy, cfg.n).unwrap(),
    );
    let expected = match cfg.dissipation {
        Dissipation::Viscous => cfg.nu * k2 / (1.0 + cfg.alpha * cfg.alpha * k2),
        Dissipation::Strong => cfg.nu * k2,
        Dissipation::Inviscid => 0.0,
    };
    Ok((measured, expected))
}

fn c3() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, file) in [("viscous", "c03_viscous_decay.cfg"), ("strong", "c03_strong_decay.cfg")] {
        let (m, e) = decay_rate(file)?;
        let rel = (m - e).abs() / e;
        ok &= rel < C3_REL_TOL;
        parts.push(format!("{name} rate {m:.10} vs {e:.10} (rel {rel:.1e})"));
    }
    verdict(ok, format!("{}; tol {C3_REL_TOL:.0e}", parts.join(", ")))
}

fn c4() -> Check {
    let cfg = load("c04_casimirs.cfg");
    let dir = scratch("c4");
    let start = Instant::now();
    let o = run(&cfg, dir.path())?;
    let secs = start.elapsed().as_secs_f64();
    let keys = [
        "energy_drift",
        "casimir_1_drift",
        "casimir_2_drift",
        "casimir_3_drift",
        "casimir_4_drift",
    ];
    let drifts: Vec<f64> = keys.iter().map(|k| summary(&o, k)).collect();
    let worst = drifts.iter().cloned().fold(0.0, f64::max);
    verdict(
        o.manifest.get("status") == Some("OK") && drifts.iter().all(|d| *d < C4_DRIFT_TOL) && secs < C4_SECONDS,
        format!(
            "drifts E {:.1e}, ∫q {:.1e}, ∫q² {:.1e}, ∫q³ {:.1e}, ∫q⁴ {:.1e} (worst {worst:.1e}, tol {C4_DRIFT_TOL:.0e}); \
             no abort; {secs:.1} s (limit {C4_SECONDS} s)",
            drifts[0], drifts[1], drifts[2], drifts[3], drifts[4]
        ),
    )
}

fn c5() -> Check {
    let cfg = load("c05_flowmap.cfg");
    let dir = scratch("c5");
    let o = run(&cfg, dir.path())?;
    let transport = summary(&o, "transport_check");
    let m = cfg.m;
    let v_fine = summary(&o, "volume_check");
    let v64 = summary(&o, &format!("volume_check_m{}", m / 2));
    let v32 = summary(&o, &format!("volume_check_m{}", m / 4));
    let vol_gain = v32 / v_fine;
    // the transport error at map_dt = 1e-2 sits at round-off, so its
    // convergence is measured from a coarser step; the solver step is halved
    // along with it so RK4 stage times stay on solver snapshots
    let mut errs = Vec::new();
    for dt in C5_COARSE_MAP_DT {
        let mut c = cfg.clone();
        c.map_dt = dt;
        c.dt = dt / 10.0;
        c.m = 32;
        let d = scratch("c5dt");
        errs.push(summary(&run(&c, d.path())?, "transport_check"));
    }
    let gains = [errs[0] / errs[1], errs[1] / errs[2]];
    verdict(
        transport < C5_TRANSPORT_TOL
            && v32 < C5_VOLUME_TOL
            && vol_gain >= C5_GAIN
            && gains.iter().all(|g| *g >= C5_GAIN),
        format!(
            "transport {transport:.1e} (tol {C5_TRANSPORT_TOL:.0e}); volume m={} {v32:.2e} (tol {C5_VOLUME_TOL:.0e}); \
             volume gain over two h-halvings {vol_gain:.1}x (single halving {:.1}x); transport at map dt {:?}: \
             {:.2e}, {:.2e}, {:.2e} (solver dt = map dt / 10), gains {:.1}x, {:.1}x (need ≥{C5_GAIN}x)",
            m / 4,
            v64 / v_fine,
            C5_COARSE_MAP_DT,
            errs[0],
            errs[1],
            errs[2],
            gains[0],
            gains[1]
        ),
    )
}

fn c6() -> Check {
    let cfg = load("c06_visc_limit.cfg");
    let dir = scratch("c6");
    let start = Instant::now();
    let o = run(&cfg, dir.path())?;
    let secs = start.elapsed().as_secs_f64();
    let table = o
        .recorder
        .tables
        .iter()
        .find(|t| t.name == "summary")
        .ok_or("no summary table")?;
    let mut ok = secs < C6_SECONDS;
    let mut parts = Vec::new();
    for v in &cfg.variants {
        let errs: Vec<(f64, f64)> = table
            .rows
            .iter()
            .filter(|r| r[0] == Cell::Text(v.name().into()))
            .map(|r| match (&r[1], &r[2]) {
                (Cell::Num(nu), Cell::Num(e)) => (*nu, *e),
                _ => (f64::NAN, f64::NAN),
            })
            .collect();
        let mut by_nu = errs.clone();
        by_nu.sort_by(|a, b| b.0.total_cmp(&a.0));
        let decreasing = by_nu.windows(2).all(|w| w[1].1 < w[0].1);
        let slope = summary(&o, &format!("slope_{}", v.name()));
        ok &= decreasing && slope >= C6_SLOPE.0 && slope <= C6_SLOPE.1 && errs.len() == cfg.nus.len();
        let list: Vec<String> = by_nu.iter().map(|(nu, e)| format!("{nu:.0e}:{e:.2e}")).collect();
        parts.push(format!(
            "{} [{}] strictly decreasing={decreasing} slope {slope:.3}",
            v.name(),
            list.join(" ")
        ));
    }
    verdict(
        ok,
        format!(
            "{}; slope window {:?}, fixed T = {}; {secs:.0} s (limit {C6_SECONDS} s)",
            parts.join("; "),
            C6_SLOPE,
            cfg.t_end
        ),
    )
}

fn c7() -> Check {
    let cfg = load("c07_curvature.cfg");
    let dir = scratch("c7");
    let start = Instant::now();
    let o = run(&cfg, dir.path())?;
    let table = o
        .recorder
        .tables
        .iter()
        .find(|t| t.name == "curvature")
        .ok_or("no curvature table")?;
    let k = match table.rows.first().map(|r| (&r[0], &r[1])) {
        Some((Cell::Num(a), Cell::Num(k))) if *a == 0.0 => *k,
        _ => return Err("first curvature row is not α = 0".into()),
    };
    let anchor = -1.0 / (8.0 * PI * PI);
    let rel = (k - anchor).abs() / anchor.abs();
    let g = TorusGrid2D::square(cfg.geo_n).unwrap();
    let mut rng = SplitMix64::new(cfg.seed);
    let mut draw = || loop {
        let j = [(rng.next_u64() % 7) as i64 - 3, (rng.next_u64() % 7) as i64 - 3];
        if j != [0, 0] {
            return j;
        }
    };
    let mut worst = f64::NEG_INFINITY;
    let mut done = 0;
    while done < C7_PAIRS {
        let (a, b) = (draw(), draw());
        if a == b || a == [-b[0], -b[1]] {
            continue;
        }
        let x = TrigVectorField::stream_mode(g, a).unwrap();
        let y = TrigVectorField::stream_mode(g, b).unwrap();
        let kk =
            sectional_curvature(x.field(), y.field(), AlphaParam::zero()).map_err(|e| format!("{a:?} {b:?}: {e}"))?;
        worst = worst.max(kk);
        done += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        rel < C7_REL_TOL && worst <= C7_NONPOS_TOL && secs < C7_SECONDS,
        format!(
            "K = {k:.15e} vs -1/(8π²) = {anchor:.15e} (rel {rel:.1e}, tol {C7_REL_TOL:.0e}); \
             max K over {C7_PAIRS} random pairs {worst:.2e} (tol {C7_NONPOS_TOL:.0e}); {secs:.1} s"
        ),
    )
}

fn c8() -> Check {
    let cfg = load("c08_alpha_sweep.cfg");
    let dir = scratch("c8");
    let o = run(&cfg, dir.path())?;
    let l = [cfg.k[0] + cfg.eps[0], cfg.k[1] + cfg.eps[1]];
    let g = TorusGrid2D::square(cfg.geo_n).unwrap();
    let x = TrigVectorField::stream_mode(g, cfg.k).unwrap();
    let y = TrigVectorField::stream_mode(g, l).unwrap();
    let kk = |a: f64| sectional_curvature(x.field(), y.field(), al(a)).map_err(|e| e.to_string());
    match o.manifest.get("alpha0") {
        Some("none") | None => {
            let table = o
                .recorder
                .tables
                .iter()
                .find(|t| t.name == "alpha_sweep")
                .ok_or("no sweep table")?;
            let ks: Vec<f64> = table
                .rows
                .iter()
                .filter_map(|r| match r[1] {
                    Cell::Num(v) => Some(v),
                    _ => None,
                })
                .collect();
            let (lo, hi) = ks
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
            Err(format!(
                "k={:?}, l={l:?}: no sign change on [0, 1]; K ∈ [{lo:.4e}, {hi:.4e}] over {} probes, K(0) = {:.4e}, K(1) = {:.4e}",
                cfg.k,
                ks.len(),
                kk(0.0)?,
                kk(1.0)?
            ))
        }
        Some(v) => {
            let a0: f64 = v.parse().map_err(|_| format!("bad alpha0 `{v}`"))?;
            let (below, above) = (kk(a0 - C8_BRACKET)?, kk(a0 + C8_BRACKET)?);
            let samples: Vec<f64> = (1..=C8_SAMPLES)
                .map(|i| kk(a0 + (1.0 - a0) * i as f64 / C8_SAMPLES as f64))
                .collect::<Result<_, _>>()?;
            let ok = a0 > 0.0 && a0 < 1.0 && below < 0.0 && above > 0.0 && samples.iter().all(|s| *s > 0.0);
            verdict(
                ok,
                format!(
                    "α₀ = {a0:.6}; K(α₀∓{C8_BRACKET:.0e}) = {below:.3e}, {above:.3e}; min K over {C8_SAMPLES} samples above α₀ {:.3e}",
                    samples.iter().cloned().fold(f64::INFINITY, f64::min)
                ),
            )
        }
    }
}

fn c9() -> Check {
    let cfg = load("c09_jacobi.cfg");
    let dir = scratch("c9");
    let o = run(&cfg, dir.path())?;
    let ratio = summary(&o, "error_ratio");
    let g = TorusGrid2D::new(cfg.n, cfg.n, cfg.length, cfg.length).unwrap();
    let shear = single_mode(g, [0, 1], 1.0).unwrap();
    let zero = SpectralField::zeros(g, Rank::Vector);
    let tr = jacobi_evolve(&shear, &shear, &zero, cfg.t_end, cfg.dt, al(cfg.alpha)).map_err(|e| e.to_string())?;
    let n0 = tr.samples[0].norm_y;
    let dev = tr.samples.iter().map(|s| (s.norm_y - n0).abs()).fold(0.0, f64::max) / n0;
    verdict(
        ratio >= C9_RATIO.0 && ratio <= C9_RATIO.1 && dev < C9_NORM_TOL,
        format!(
            "FD error ratio for ε {:?}: {ratio:.6} (window {:?}); shear tangential-field norm deviation {dev:.1e} (tol {C9_NORM_TOL:.0e})",
            cfg.jacobi_eps, C9_RATIO
        ),
    )
}

fn c10() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for file in ["c10_ch_dirichlet.cfg", "c10_ch_periodic.cfg"] {
        let cfg = load(file);
        let dir = scratch("c10");
        let drift = summary(&run(&cfg, dir.path())?, "energy_drift");
        ok &= drift < C10_ENERGY_TOL;
        parts.push(format!("{:?} energy drift {drift:.1e}", cfg.ch_bc));
    }
    let cfg = load("c10_ch_lagrangian.cfg");
    let dir = scratch("c10l");
    let lag = summary(&run(&cfg, dir.path())?, "lagrangian_diff");
    ok &= lag < C10_LAGRANGIAN_TOL;
    parts.push(format!("Eulerian vs Lagrangian at t = {} {lag:.1e}", cfg.t_end));
    let errs: Vec<f64> = [64, 128, 256]
        .iter()
        .map(|&n| {
            let s = CHState::from_fn(Grid1D::periodic(n, 2.0 * PI).unwrap(), f64::sin);
            let exact = s.grid().sample(|x| -0.6 * (2.0 * x).sin());
            ch_rhs_eulerian(&s)
                .iter()
                .zip(&exact)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    let orders = [(errs[0] / errs[1]).log2(), (errs[1] / errs[2]).log2()];
    ok &= orders.iter().all(|o| *o >= C10_MIN_ORDER);
    parts.push(format!(
        "sin x RHS errors {:.2e}, {:.2e}, {:.2e} at n = 64, 128, 256, orders {:.3}, {:.3}",
        errs[0], errs[1], errs[2], orders[0], orders[1]
    ));
    verdict(
        ok,
        format!(
            "{}; tols energy {C10_ENERGY_TOL:.0e}, agreement {C10_LAGRANGIAN_TOL:.0e}, order ≥ {C10_MIN_ORDER}",
            parts.join(", ")
        ),
    )
}

/// Mean angular velocity of blob 0 about the origin over `t_end`.
fn measured_rate(e0: &BlobEnsemble, t_end: f64, dt: f64) -> Result<(f64, BlobEnsemble), String> {
    let (steps, h) = step_plan(t_end, dt).map_err(|e| e.to_string())?;
    let mut e = e0.clone();
    let mut theta = 0.0;
    let mut last = e.positions()[0];
    for _ in 0..steps {
        e = blob_step_rk4(&e, h).map_err(|err| err.to_string())?;
        let p = e.positions()[0];
        theta += (last[0] * p[1] - last[1] * p[0]).atan2(last[0] * p[0] + last[1] * p[1]);
        last = p;
    }
    Ok((theta / (steps as f64 * h), e))
}

fn c11() -> Check {
    let mut cfg = load("c11_blobs.cfg");
    let d = 2.0 * cfg.radius;
    let omega = co_rotation_rate(cfg.gamma, d, cfg.alpha);
    cfg.t_end = 2.0 * PI / omega;
    let dir = scratch("c11");
    let o = run(&cfg, dir.path())?;
    let rate = summary(&o, "rotation_rate");
    let rate_err = (rate - omega).abs() / omega;
    let h = summary(&o, "hamiltonian_drift");
    let l = summary(&o, "angular_impulse_drift");
    let p = summary(&o, "linear_impulse_change") / (cfg.gamma.abs() * cfg.radius);
    // α → 0: blob pair against the point-vortex rate Γ/(πd²)
    let pv = cfg.gamma / (PI * d * d);
    let e0 = BlobEnsemble::ring(2, cfg.radius, cfg.gamma, al(C11_POINT_ALPHA)).unwrap();
    let (small, e1) = measured_rate(&e0, 2.0 * PI / pv, cfg.dt)?;
    let pv_err = (small - pv).abs() / pv;
    let speed_err = (blob_speed(cfg.gamma, d, al(C11_POINT_ALPHA)) - cfg.gamma / (2.0 * PI * d)).abs()
        / (cfg.gamma / (2.0 * PI * d));
    let l_small = {
        let (a, b) = (
            blob_diagnostics(&e0).angular_impulse,
            blob_diagnostics(&e1).angular_impulse,
        );
        (a - b).abs() / a.abs()
    };
    verdict(
        rate_err < C11_RATE_TOL && h < C11_DRIFT_TOL && l < C11_DRIFT_TOL && p < C11_DRIFT_TOL && pv_err < C11_RATE_TOL
            && speed_err < C11_RATE_TOL,
        format!(
            "Ω {rate:.12} vs {omega:.12} over one period (rel {rate_err:.1e}, tol {C11_RATE_TOL:.0e}); drifts H {h:.1e}, \
             L {l:.1e}, P {p:.1e} (tol {C11_DRIFT_TOL:.0e}); α = {C11_POINT_ALPHA}: rate rel {pv_err:.1e}, \
             speed rel {speed_err:.1e} vs point vortices (L drift {l_small:.1e})"
        ),
    )
}

fn c12() -> Check {
    let cfg = load("c12_third_grade.cfg");
    let g = TorusGrid2D::new(cfg.n, cfg.n, cfg.length, cfg.length).unwrap();
    let a = al(cfg.alpha);
    let u = random_seeded(g, cfg.seed, cfg.slope, cfg.kmax).unwrap();
    let lans = ThirdGradeParams::new(cfg.alpha * cfg.alpha, 0.0, 0.0, cfg.nu).map_err(|e| e.to_string())?;
    let du = third_grade_rhs(&u, &lans).map_err(|e| e.to_string())?;
    let dq = helmholtz_apply(&du, a).curl().unwrap();
    let s = VorticityState::from_velocity(&u, a).unwrap();
    let reference = rhs_vorticity(&s, DissipationMode::viscous(cfg.nu).unwrap());
    let reduction = dq.max_diff(&reference) / reference.max_abs();
    let full = ThirdGradeParams::new(cfg.alpha * cfg.alpha, C12_THIRD_GRADE.0, C12_THIRD_GRADE.1, cfg.nu)
        .map_err(|e| e.to_string())?;
    let (steps, h) = step_plan(cfg.t_end, cfg.dt).map_err(|e| e.to_string())?;
    let mut v = u.clone();
    let mut energies = vec![third_grade_energy(&v, &full).unwrap()];
    for _ in 0..steps {
        v = third_grade_step_rk4(&v, h, &full).map_err(|e| e.to_string())?;
        energies.push(third_grade_energy(&v, &full).unwrap());
    }
    let worst_rise = energies
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max);
    verdict(
        reduction < C12_REDUCTION_TOL && worst_rise <= 0.0,
        format!(
            "α₂ = β = 0 reduction {reduction:.1e} (tol {C12_REDUCTION_TOL:.0e}); (α₂, β, ν) = ({}, {}, {}): energy {:.6e} → \
             {:.6e} over t = {}, largest step change {worst_rise:.2e} (must be ≤ 0)",
            C12_THIRD_GRADE.0,
            C12_THIRD_GRADE.1,
            cfg.nu,
            energies[0],
            energies[energies.len() - 1],
            cfg.t_end
        ),
    )
}

fn files_without_wall_time(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            let mut bytes = std::fs::read(&p).unwrap();
            if name == "manifest.txt" {
                let text = String::from_utf8(bytes).unwrap();
                bytes = text
                    .lines()
                    .filter(|l| !l.starts_with("wall_time_s="))
                    .collect::<Vec<_>>()
                    .join("\n")
                    .into();
            }
            (name, bytes)
        })
        .collect();
    out.sort();
    out
}

fn c13() -> Check {
    let cfg = load("c13_restart.cfg");
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    pool.install(|| {
        let full = scratch("c13a");
        run(&cfg, full.path())?;
        let mid = format!("checkpoint_{:08}.alfl", cfg.checkpoint_every);
        let mut resumed = cfg.clone();
        resumed.resume = Some(full.path().join(&mid).to_string_lossy().into_owned());
        let second = scratch("c13b");
        run(&resumed, second.path())?;
        let a = Checkpoint::read(&full.path().join("final.alfl")).map_err(|e| e.to_string())?;
        let b = Checkpoint::read(&second.path().join("final.alfl")).map_err(|e| e.to_string())?;
        let restart = a.field.max_diff(&b.field) / a.field.max_abs();
        let t_match = a.t == b.t;

        let mut round_trips = 0;
        for entry in std::fs::read_dir(configs_dir()).unwrap() {
            let p = entry.unwrap().path();
            let c = parse_config(&std::fs::read_to_string(&p).unwrap()).map_err(|e| e.to_string())?;
            let back = parse_config(&c.serialize()).map_err(|e| format!("{}: {e}", p.display()))?;
            if back != c || back.serialize() != c.serialize() {
                return Err(format!("{} does not round-trip", p.display()));
            }
            round_trips += 1;
        }

        let mut identical = Vec::new();
        for file in ["c13_restart.cfg", "c09_jacobi.cfg", "c11_blobs.cfg"] {
            let c = load(file);
            let (x, y) = (scratch("c13x"), scratch("c13y"));
            run(&c, x.path())?;
            run(&c, y.path())?;
            identical.push((
                file,
                files_without_wall_time(x.path()) == files_without_wall_time(y.path()),
            ));
        }
        verdict(
            restart <= C13_RESTART_TOL && t_match && identical.iter().all(|(_, s)| *s),
            format!(
                "restart from {mid} vs uninterrupted: {restart:.1e} (tol {C13_RESTART_TOL:.0e}), same t {t_match}; \
                 {round_trips} configs round-trip; byte-identical reruns {:?}",
                identical
            ),
        )
    })
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Check); 13] = [
        (1, "spectral transforms", c1),
        (2, "Helmholtz, Leray and Stokes", c2),
        (3, "linear viscous decay", c3),
        (4, "Casimir conservation", c4),
        (5, "vorticity transport and volume", c5),
        (6, "viscosity limit", c6),
        (7, "ideal-fluid curvature", c7),
        (8, "curvature sign flip in α", c8),
        (9, "Jacobi fields", c9),
        (10, "Camassa-Holm", c10),
        (11, "vortex blobs", c11),
        (12, "third-grade fluid", c12),
        (13, "restart, round trip, reproducibility", c13),
    ];
    let wanted: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for (id, name, check) in criteria {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let result = std::panic::catch_unwind(check)
            .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into())));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail} [{secs:.1} s]"),
            Err(detail) => {
                println!("criterion {id:>2} FAIL  {name}: {detail} [{secs:.1} s]");
                failed.push(id);
            }
        }
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
