//! Experiment drivers. Each run writes its CSV tables and `manifest.txt`
//! into the output directory, also when it aborts.

use crate::checkpoint::{Checkpoint, CheckpointError};
use crate::config::{ChBc, ConfigError, Dissipation, FlowKind, Preset, RunConfig};
use crate::output::{Cell, Manifest, Status, Table};
use alpha_fluids_core::bessel::k1;
use alpha_fluids_core::ch::{ch_energy, ch_spray_step, ch_step_rk4, CHLagrangianState, CHState, Grid1D};
use alpha_fluids_core::euler::{
    blob_diagnostics, blob_step_rk4, casimir_scales, casimirs, energy_alpha, step_plan, step_rk4, BlobEnsemble,
    DissipationMode, VorticityState,
};
use alpha_fluids_core::flow::{advect_flow_map, transport_check, volume_check, FlowMap, SolverSource, SteadySource};
use alpha_fluids_core::geometry::{
    arnold_closed_form, find_alpha0, jacobi_evolve, sectional_curvature, TrigVectorField,
};
use alpha_fluids_core::initial::{random_seeded, single_mode, two_mode};
use alpha_fluids_core::spectral::inner_product_alpha;
use alpha_fluids_core::{AlphaParam, Error as CoreError, SpectralField, TorusGrid2D};
use rayon::prelude::*;
use std::f64::consts::PI;
use std::path::Path;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("numerical abort after t = {last_good_t}: {source}")]
    Numerical { source: CoreError, last_good_t: f64 },
    #[error("invalid run parameters: {0}")]
    Core(CoreError),
    #[error(transparent)]
    Checkpoint(#[from] CheckpointError),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    /// 2 for numerical aborts (blow-up, CFL, particle crossing), 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Numerical { .. } => 2,
            _ => 1,
        }
    }
}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::BlowUp { t_last_good, .. } | CoreError::MonotonicityLost { t_last_good, .. } => {
                RunError::Numerical {
                    source: e,
                    last_good_t: t_last_good,
                }
            }
            CoreError::CflViolation { .. } => RunError::Numerical {
                source: e,
                last_good_t: f64::NAN,
            },
            e => RunError::Core(e),
        }
    }
}

/// Tables and summary values accumulated during a run.
#[derive(Debug, Default)]
pub struct Recorder {
    pub tables: Vec<Table>,
    pub summary: Vec<(String, String)>,
    pub last_good_t: f64,
}

impl Recorder {
    fn table(&mut self, name: &str, header: &[&str]) -> usize {
        self.tables.push(Table::new(name, header));
        self.tables.len() - 1
    }

    fn note(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.into(), value.to_string()));
    }

    fn num(&mut self, key: &str, x: f64) {
        self.note(key, crate::output::fmt_f64(x));
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub manifest: Manifest,
    pub recorder: Recorder,
}

/// Runs the configured experiment, writing outputs to `out`.
pub fn run_experiment(cfg: &RunConfig, out: &Path) -> Result<RunOutcome, RunError> {
    std::fs::create_dir_all(out)?;
    let start = Instant::now();
    let mut rec = Recorder::default();
    use crate::config::Experiment::*;
    let result = match cfg.experiment {
        Simulate2d => simulate2d(cfg, &mut rec, out),
        Blob => blob(cfg, &mut rec),
        Ch => ch(cfg, &mut rec),
        Curvature => curvature(cfg, &mut rec),
        ViscLimit => visc_limit(cfg, &mut rec),
        AlphaSweep => alpha_sweep(cfg, &mut rec),
        Jacobi => jacobi(cfg, &mut rec),
        Flowmap => flowmap(cfg, &mut rec),
    };
    for t in &rec.tables {
        t.write(out)?;
    }
    let (status, last) = match &result {
        Ok(()) => (Status::Ok, rec.last_good_t),
        Err(RunError::Numerical { last_good_t, .. }) if last_good_t.is_finite() => (Status::Incomplete, *last_good_t),
        Err(_) => (Status::Incomplete, rec.last_good_t),
    };
    let mut manifest = Manifest::new(cfg.experiment.name(), &cfg.serialize(), status, last);
    manifest.set("seed", &cfg.seed.to_string());
    for (k, v) in &rec.summary {
        manifest.set(k, v);
    }
    if let Err(e) = &result {
        manifest.set("error", &e.to_string());
    }
    manifest.set("wall_time_s", &format!("{:.3}", start.elapsed().as_secs_f64()));
    manifest.write(out)?;
    std::fs::write(out.join("config.cfg"), cfg.serialize())?;
    result.map(|()| RunOutcome {
        manifest,
        recorder: rec,
    })
}

fn grid2d(cfg: &RunConfig) -> Result<TorusGrid2D, RunError> {
    Ok(TorusGrid2D::new(cfg.n, cfg.n, cfg.length, cfg.length)?)
}

fn alpha(cfg: &RunConfig) -> Result<AlphaParam, RunError> {
    Ok(AlphaParam::new(cfg.alpha)?)
}

pub fn dissipation_mode(kind: Dissipation, nu: f64) -> Result<DissipationMode, RunError> {
    Ok(match kind {
        Dissipation::Inviscid => DissipationMode::Inviscid,
        Dissipation::Viscous => DissipationMode::viscous(nu)?,
        Dissipation::Strong => DissipationMode::strong(nu)?,
    })
}

pub fn initial_velocity(cfg: &RunConfig, grid: TorusGrid2D) -> Result<SpectralField, RunError> {
    Ok(match cfg.preset {
        Preset::SingleMode => single_mode(grid, cfg.k1, cfg.amps[0])?,
        Preset::TwoMode => two_mode(grid, cfg.k1, cfg.k2, cfg.amps)?,
        Preset::RandomSeeded => random_seeded(grid, cfg.seed, cfg.slope, cfg.kmax)?,
        Preset::BlobRing => {
            return Err(RunError::Usage(
                "blob_ring is only valid for the blob experiment".into(),
            ))
        }
    })
}

/// `‖u‖_{H¹}`.
pub fn h1_norm(u: &SpectralField) -> f64 {
    inner_product_alpha(u, u, AlphaParam::new(1.0).expect("unit"))
        .expect("vector field")
        .sqrt()
}

fn simulate2d(cfg: &RunConfig, rec: &mut Recorder, out: &Path) -> Result<(), RunError> {
    let grid = grid2d(cfg)?;
    let a = alpha(cfg)?;
    let mode = dissipation_mode(cfg.dissipation, cfg.nu)?;
    let (steps, h) = step_plan(cfg.t_end, cfg.dt)?;
    let (mut s, first) = match &cfg.resume {
        Some(p) => {
            let c = Checkpoint::read(Path::new(p))?;
            if c.field.grid() != &grid || c.alpha != cfg.alpha {
                return Err(RunError::Usage(format!(
                    "checkpoint {p} does not match the configured grid/alpha"
                )));
            }
            let s = c.to_state()?;
            let k = (s.t() / h).round() as usize;
            (s, k.min(steps))
        }
        None => (VorticityState::from_velocity(&initial_velocity(cfg, grid)?, a)?, 0),
    };
    rec.last_good_t = s.t();
    let ts = rec.table(
        "series",
        &[
            "t [time]",
            "E_alpha [energy]",
            "casimir_1 [q*area]",
            "casimir_2 [q^2*area]",
            "casimir_3 [q^3*area]",
            "casimir_4 [q^4*area]",
        ],
    );
    let row = |s: &VorticityState| -> Result<Vec<f64>, RunError> {
        let mut r = vec![s.t(), energy_alpha(s)];
        r.extend(casimirs(s.q(), 4)?);
        Ok(r)
    };
    let r0 = row(&s)?;
    let scales = casimir_scales(s.q(), 4)?;
    rec.tables[ts].push_nums(&r0);
    for i in first..steps {
        s = step_rk4(&s, h, mode)?;
        rec.last_good_t = s.t();
        if (i + 1) % cfg.output_every == 0 || i + 1 == steps {
            let r = row(&s)?;
            rec.tables[ts].push_nums(&r);
        }
        if cfg.checkpoint_every > 0 && (i + 1) % cfg.checkpoint_every == 0 {
            Checkpoint::from_state("simulate2d", &s, cfg.nu)
                .write(&out.join(format!("checkpoint_{:08}.alfl", i + 1)))?;
        }
    }
    Checkpoint::from_state("simulate2d", &s, cfg.nu).write(&out.join("final.alfl"))?;
    let r1 = row(&s)?;
    rec.num("t_final", s.t());
    rec.num("energy_drift", (r1[1] - r0[1]).abs() / r0[1]);
    for n in 0..4 {
        rec.num(
            &format!("casimir_{}_drift", n + 1),
            (r1[2 + n] - r0[2 + n]).abs() / scales[n],
        );
    }
    Ok(())
}

/// Two-blob co-rotation rate `(Γ/πd²)(1 - (d/α)K₁(d/α))`.
pub fn co_rotation_rate(gamma: f64, d: f64, alpha: f64) -> f64 {
    let s = d / alpha;
    gamma / (PI * d * d) * (1.0 - s * k1(s))
}

fn blob(cfg: &RunConfig, rec: &mut Recorder) -> Result<(), RunError> {
    if cfg.preset != Preset::BlobRing {
        return Err(RunError::Usage("the blob experiment needs preset = blob_ring".into()));
    }
    let mut e = BlobEnsemble::ring(cfg.blobs, cfg.radius, cfg.gamma, alpha(cfg)?)?;
    let (steps, h) = step_plan(cfg.t_end, cfg.dt)?;
    let ts = rec.table(
        "series",
        &[
            "t [time]",
            "H [energy]",
            "P_x [circulation*length]",
            "P_y [circulation*length]",
            "L [circulation*length^2]",
            "theta_0 [rad]",
        ],
    );
    let d0 = blob_diagnostics(&e);
    let mut theta = 0.0;
    let mut last = e.positions()[0];
    let row = |t: f64, e: &BlobEnsemble, theta: f64| {
        let d = blob_diagnostics(e);
        vec![
            t,
            d.hamiltonian,
            d.linear_impulse[0],
            d.linear_impulse[1],
            d.angular_impulse,
            theta,
        ]
    };
    rec.tables[ts].push_nums(&row(0.0, &e, 0.0));
    let mut t = 0.0;
    for i in 0..steps {
        e = blob_step_rk4(&e, h).map_err(|err| match err {
            CoreError::BlowUp { reason, .. } => CoreError::BlowUp { t_last_good: t, reason },
            other => other,
        })?;
        t = (i + 1) as f64 * h;
        rec.last_good_t = t;
        let p = e.positions()[0];
        let dth = (last[0] * p[1] - last[1] * p[0]).atan2(last[0] * p[0] + last[1] * p[1]);
        theta += dth;
        last = p;
        if (i + 1) % cfg.output_every == 0 || i + 1 == steps {
            rec.tables[ts].push_nums(&row(t, &e, theta));
        }
    }
    let d1 = blob_diagnostics(&e);
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
    rec.num("t_final", t);
    rec.num("hamiltonian_drift", rel(d1.hamiltonian, d0.hamiltonian));
    rec.num("angular_impulse_drift", rel(d1.angular_impulse, d0.angular_impulse));
    rec.num(
        "linear_impulse_change",
        (d1.linear_impulse[0] - d0.linear_impulse[0]).hypot(d1.linear_impulse[1] - d0.linear_impulse[1]),
    );
    if t > 0.0 {
        rec.num("rotation_rate", theta / t);
    }
    if cfg.blobs == 2 {
        rec.num(
            "rotation_rate_theory",
            co_rotation_rate(cfg.gamma, 2.0 * cfg.radius, cfg.alpha),
        );
    }
    Ok(())
}

pub fn ch_initial(cfg: &RunConfig) -> Result<CHState, RunError> {
    let a = cfg.ch_amplitude;
    Ok(match cfg.ch_bc {
        ChBc::Dirichlet => CHState::from_fn(Grid1D::dirichlet(cfg.ch_n)?, |x| a * (PI * x).sin()),
        ChBc::Periodic => CHState::from_fn(Grid1D::periodic(cfg.ch_n, 1.0)?, |x| a * (2.0 * PI * x).sin()),
    })
}

fn ch(cfg: &RunConfig, rec: &mut Recorder) -> Result<(), RunError> {
    let mut s = ch_initial(cfg)?;
    if cfg.ch_lagrangian && cfg.ch_bc != ChBc::Dirichlet {
        return Err(RunError::Usage(
            "the Lagrangian formulation needs bc = dirichlet".into(),
        ));
    }
    let mut lag = if cfg.ch_lagrangian {
        Some(CHLagrangianState::from_eulerian(&s)?)
    } else {
        None
    };
    let (steps, h) = step_plan(cfg.t_end, cfg.dt)?;
    let ts = rec.table(
        "series",
        &[
            "t [time]",
            "energy [H1 norm^2]",
            "sup_norm [velocity]",
            "lagrangian_diff [velocity]",
        ],
    );
    let e0 = ch_energy(&s);
    let sup = |u: &[f64]| u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let diff = |s: &CHState, l: &Option<CHLagrangianState>| -> Result<f64, RunError> {
        Ok(match l {
            Some(l) => {
                let ul = l.to_eulerian()?;
                s.u().iter().zip(ul.u()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
            }
            None => f64::NAN,
        })
    };
    rec.tables[ts].push_nums(&[0.0, e0, sup(s.u()), diff(&s, &lag)?]);
    for i in 0..steps {
        s = ch_step_rk4(&s, h)?;
        if let Some(l) = &lag {
            lag = Some(ch_spray_step(l, h)?);
        }
        rec.last_good_t = s.t();
        if (i + 1) % cfg.output_every == 0 || i + 1 == steps {
            let r = [s.t(), ch_energy(&s), sup(s.u()), diff(&s, &lag)?];
            rec.tables[ts].push_nums(&r);
        }
    }
    rec.num("t_final", s.t());
    rec.num("energy_drift", (ch_energy(&s) - e0).abs() / e0);
    if lag.is_some() {
        rec.num("lagrangian_diff", diff(&s, &lag)?);
    }
    Ok(())
}

fn curvature(cfg: &RunConfig, rec: &mut Recorder) -> Result<(), RunError> {
    let g = TorusGrid2D::square(cfg.geo_n)?;
    let x = TrigVectorField::stream_mode(g, cfg.k)?;
    let y = TrigVectorField::stream_mode(g, cfg.l)?;
    let ts = rec.table("curvature", &["alpha [length]", "K [1/area]"]);
    for &a in &cfg.alphas {
        let kk = sectional_curvature(x.field(), y.field(), AlphaParam::new(a)?)?;
        rec.tables[ts].push_nums(&[a, kk]);
    }
    match arnold_closed_form(cfg.k, cfg.l, g.area()) {
        Ok(v) => rec.num("closed_form_alpha0", v),
        Err(e) => rec.note("closed_form_alpha0", format!("undefined ({e})")),
    }
    Ok(())
}

fn alpha_sweep(cfg: &RunConfig, rec: &mut Recorder) -> Result<(), RunError> {
    let g = TorusGrid2D::square(cfg.geo_n)?;
    let search = find_alpha0(g, cfg.k, cfg.eps)?;
    let ts = rec.table("alpha_sweep", &["alpha [length]", "K [1/area]"]);
    for (a, kk) in &search.probes {
        rec.tables[ts].push_nums(&[*a, *kk]);
    }
    match search.flip {
        Some(f) => {
            rec.num("alpha0", f.alpha0);
            rec.num("K_below", f.k_below);
            rec.num("K_above", f.k_above);
            rec.num("bracket_delta", f.delta);
        }
        None => {
            rec.note("alpha0", "none");
            let kmax = search.probes.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
            rec.num("K_max_on_unit_interval", kmax);
        }
    }
    Ok(())
}

/// Final velocity of a run of `t_end` from `u0`.
fn evolve(
    u0: &SpectralField,
    a: AlphaParam,
    mode: DissipationMode,
    t_end: f64,
    dt: f64,
) -> Result<SpectralField, RunError> {
    let (steps, h) = step_plan(t_end, dt)?;
    let mut s = VorticityState::from_velocity(u0, a)?;
    for _ in 0..steps {
        s = step_rk4(&s, h, mode)?;
    }
    Ok(s.velocity().clone())
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

fn visc_limit(cfg: &RunConfig, rec: &mut Recorder) -> Result<(), RunError> {
    let grid = grid2d(cfg)?;
    let a = alpha(cfg)?;
    let u0 = initial_velocity(cfg, grid)?;
    let mut jobs = vec![(Dissipation::Inviscid, 0.0)];
    for v in &cfg.variants {
        jobs.extend(cfg.nus.iter().map(|nu| (*v, *nu)));
    }
    let finals: Vec<Result<SpectralField, RunError>> = jobs
        .par_iter()
        .map(|(v, nu)| evolve(&u0, a, dissipation_mode(*v, *nu)?, cfg.t_end, cfg.dt))
        .collect();
    let mut finals = finals.into_iter().collect::<Result<Vec<_>, _>>()?;
    let reference = finals.remove(0);
    let ts = rec.table("summary", &["variant", "nu [viscosity]", "h1_error [H1 norm]"]);
    for v in &cfg.variants {
        let mut errs = Vec::new();
        for (j, (jv, nu)) in jobs[1..].iter().enumerate() {
            if jv == v {
                let e = h1_norm(&(&finals[j] - &reference));
                rec.tables[ts].push(vec![Cell::from(v.name()), Cell::from(*nu), Cell::from(e)]);
                errs.push(e);
            }
        }
        rec.num(&format!("slope_{}", v.name()), loglog_slope(&cfg.nus, &errs));
    }
    rec.last_good_t = cfg.t_end;
    Ok(())
}

/// Perturbation direction for the Jacobi experiment.
pub fn jacobi_direction(cfg: &RunConfig, grid: TorusGrid2D) -> Result<SpectralField, RunError> {
    let kmax = cfg.kmax.min((cfg.n / 3) as i64).min(4);
    Ok(random_seeded(grid, cfg.seed ^ 0x9e37_79b9_7f4a_7c15, cfg.slope, kmax)?.scale(0.1))
}

fn jacobi(cfg: &RunConfig, rec: &mut Recorder) -> Result<(), RunError> {
    let grid = grid2d(cfg)?;
    let a = alpha(cfg)?;
    let u0 = initial_velocity(cfg, grid)?;
    let ydot0 = jacobi_direction(cfg, grid)?;
    let zero = SpectralField::zeros(grid, alpha_fluids_core::spectral::Rank::Vector);
    let tr = jacobi_evolve(&u0, &zero, &ydot0, cfg.t_end, cfg.dt, a)?;
    let ts = rec.table("series", &["t [time]", "norm_Y [alpha norm]", "norm_dU [alpha norm]"]);
    for (i, s) in tr.samples.iter().enumerate() {
        if i % cfg.output_every == 0 || i + 1 == tr.samples.len() {
            rec.tables[ts].push_nums(&[s.t, s.norm_y, s.norm_ydot]);
        }
    }
    rec.last_good_t = cfg.t_end;
    let base = evolve(&u0, a, DissipationMode::Inviscid, cfg.t_end, cfg.dt)?;
    let perturbed: Vec<Result<SpectralField, RunError>> = cfg
        .jacobi_eps
        .par_iter()
        .map(|eps| evolve(&u0.axpy(*eps, &ydot0), a, DissipationMode::Inviscid, cfg.t_end, cfg.dt))
        .collect();
    let fd = rec.table("finite_difference", &["eps [1]", "error [alpha norm]"]);
    let mut errs = Vec::new();
    for (eps, p) in cfg.jacobi_eps.iter().zip(perturbed) {
        let quotient = (&p? - &base).scale(1.0 / eps);
        let d = &quotient - &tr.delta_u;
        let e = inner_product_alpha(&d, &d, a)?.sqrt();
        rec.tables[fd].push_nums(&[*eps, e]);
        errs.push(e);
    }
    if errs.len() >= 2 {
        rec.num("error_ratio", errs[0] / errs[1]);
    }
    Ok(())
}

fn flowmap(cfg: &RunConfig, rec: &mut Recorder) -> Result<(), RunError> {
    let grid = grid2d(cfg)?;
    let a = alpha(cfg)?;
    let u0 = initial_velocity(cfg, grid)?;
    let s0 = VorticityState::from_velocity(&u0, a)?;
    let q0 = s0.q().clone();
    let mode = dissipation_mode(cfg.dissipation, cfg.nu)?;
    let mut solver = SolverSource::new(s0, cfg.dt, mode)?;
    let mut steady = SteadySource(u0);
    let mut map = FlowMap::identity(&grid, cfg.m)?;
    let ts = rec.table("series", &["t [time]", "volume_check [1]", "transport_check [q]"]);
    let measure = |map: &FlowMap, solver: &SolverSource| -> Result<[f64; 3], RunError> {
        let tc = match cfg.kind {
            FlowKind::Riemannian => transport_check(&q0, solver.state().q(), map)?,
            FlowKind::Group => f64::NAN,
        };
        Ok([map.t(), volume_check(map), tc])
    };
    rec.tables[ts].push_nums(&measure(&map, &solver)?);
    let total = (cfg.t_end / cfg.map_dt).round() as usize;
    let mut done = 0;
    while done < total {
        let n = cfg.output_every.min(total - done);
        let span = n as f64 * cfg.map_dt;
        map = match cfg.kind {
            FlowKind::Riemannian => advect_flow_map(&mut solver, &map, cfg.map_dt, span)?,
            FlowKind::Group => advect_flow_map(&mut steady, &map, cfg.map_dt, span)?,
        };
        done += n;
        rec.last_good_t = map.t();
        rec.tables[ts].push_nums(&measure(&map, &solver)?);
    }
    let last = measure(&map, &solver)?;
    rec.num("t_final", last[0]);
    rec.num("volume_check", last[1]);
    rec.num("transport_check", last[2]);
    // the same trajectories read on sparser lattices, for the O(h²) study
    let mut stride = 2;
    while cfg.m % stride == 0 && cfg.m / stride >= 8 {
        rec.num(
            &format!("volume_check_m{}", cfg.m / stride),
            volume_check(&map.coarsen(stride)?),
        );
        stride *= 2;
    }
    Ok(())
}
