//! Flow maps `∂_t η = u(t, η)`: exact evaluation of band-limited fields at
//! scattered points, RK4 particle advection, volume and transport
//! diagnostics, and the Riemannian and group exponential maps.

use crate::error::{Error, Result};
use crate::euler::vorticity::{step_rk4, DissipationMode, VorticityState};
use crate::spectral::{AlphaParam, SpectralField, TorusGrid2D};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Relative modulus below which modes are skipped during evaluation.
const MODE_CUTOFF: f64 = 1e-18;

/// The active Fourier modes of a real field, one per conjugate pair, ready
/// for evaluation at arbitrary points.
#[derive(Debug, Clone)]
pub struct ModeTable {
    kx0: f64,
    ky0: f64,
    jx: Vec<i64>,
    jy: Vec<i64>,
    /// Weighted coefficients (2c, or c for self-conjugate slots), per component.
    coef: Vec<Vec<Complex64>>,
    jx_range: (i64, i64),
    jy_range: (i64, i64),
}

impl ModeTable {
    pub fn new(f: &SpectralField) -> Self {
        let g = *f.grid();
        let ncomp = f.components().len();
        let cmax = f.max_abs();
        let (mut jx, mut jy) = (Vec::new(), Vec::new());
        let mut coef = vec![Vec::new(); ncomp];
        let (mut rx, mut ry) = ((i64::MAX, i64::MIN), (i64::MAX, i64::MIN));
        for ix in 0..g.nx() {
            for iy in 0..g.ny() {
                let i = g.index(ix, iy);
                let partner = g.index((g.nx() - ix) % g.nx(), (g.ny() - iy) % g.ny());
                if partner < i {
                    continue;
                }
                let w = if partner == i { 1.0 } else { 2.0 };
                if f.components().iter().all(|c| c[i].norm() <= MODE_CUTOFF * cmax) {
                    continue;
                }
                let (a, b) = (g.jx(ix), g.jy(iy));
                jx.push(a);
                jy.push(b);
                rx = (rx.0.min(a), rx.1.max(a));
                ry = (ry.0.min(b), ry.1.max(b));
                for (c, comp) in coef.iter_mut().zip(f.components()) {
                    c.push(comp[i] * w);
                }
            }
        }
        if jx.is_empty() {
            rx = (0, 0);
            ry = (0, 0);
        }
        Self {
            kx0: 2.0 * PI / g.lx(),
            ky0: 2.0 * PI / g.ly(),
            jx,
            jy,
            coef,
            jx_range: rx,
            jy_range: ry,
        }
    }

    pub fn active_modes(&self) -> usize {
        self.jx.len()
    }

    fn powers(base: f64, range: (i64, i64), out: &mut Vec<Complex64>) {
        out.clear();
        let step = Complex64::from_polar(1.0, base);
        let mut z = Complex64::from_polar(1.0, base * range.0 as f64);
        for _ in range.0..=range.1 {
            out.push(z);
            z *= step;
        }
    }

    /// Values of every component at `p`, written into `out`.
    pub fn eval_into(&self, p: [f64; 2], ex: &mut Vec<Complex64>, ey: &mut Vec<Complex64>, out: &mut [f64]) {
        Self::powers(self.kx0 * p[0], self.jx_range, ex);
        Self::powers(self.ky0 * p[1], self.jy_range, ey);
        out.iter_mut().for_each(|v| *v = 0.0);
        for m in 0..self.jx.len() {
            let z = ex[(self.jx[m] - self.jx_range.0) as usize] * ey[(self.jy[m] - self.jy_range.0) as usize];
            for (o, c) in out.iter_mut().zip(&self.coef) {
                let a = c[m];
                *o += a.re * z.re - a.im * z.im;
            }
        }
    }

    pub fn eval_many(&self, points: &[[f64; 2]]) -> Vec<Vec<f64>> {
        let (mut ex, mut ey) = (Vec::new(), Vec::new());
        let mut buf = vec![0.0; self.coef.len()];
        points
            .iter()
            .map(|&p| {
                self.eval_into(p, &mut ex, &mut ey, &mut buf);
                buf.clone()
            })
            .collect()
    }
}

/// Exact values `u(x) = Σ_k û(k)e^{ik·x}` of a vector field at `points`.
pub fn eval_velocity_at(u: &SpectralField, points: &[[f64; 2]]) -> Result<Vec<[f64; 2]>> {
    u.require(crate::spectral::Rank::Vector, "velocity must be a vector field")?;
    Ok(ModeTable::new(u)
        .eval_many(points)
        .into_iter()
        .map(|v| [v[0], v[1]])
        .collect())
}

/// Exact values of a scalar field at `points`.
pub fn eval_scalar_at(f: &SpectralField, points: &[[f64; 2]]) -> Result<Vec<f64>> {
    f.require(crate::spectral::Rank::Scalar, "expected a scalar field")?;
    Ok(ModeTable::new(f).eval_many(points).into_iter().map(|v| v[0]).collect())
}

/// Images `η(t, x_i)` of a uniform `m × m` reference lattice. Positions are
/// stored unwrapped (continuous in time); periodicity is applied when the
/// map is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowMap {
    m: usize,
    period: [f64; 2],
    reference: Vec<[f64; 2]>,
    positions: Vec<[f64; 2]>,
    t: f64,
}

impl FlowMap {
    pub fn identity(grid: &TorusGrid2D, m: usize) -> Result<Self> {
        if m < 8 {
            return Err(Error::InvalidGrid(format!("tracer lattice needs m ≥ 8, got {m}")));
        }
        let (lx, ly) = (grid.lx(), grid.ly());
        let reference: Vec<[f64; 2]> = (0..m * m)
            .map(|k| [lx * (k / m) as f64 / m as f64, ly * (k % m) as f64 / m as f64])
            .collect();
        Ok(Self {
            m,
            period: [lx, ly],
            positions: reference.clone(),
            reference,
            t: 0.0,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn reference(&self) -> &[[f64; 2]] {
        &self.reference
    }

    pub fn positions(&self) -> &[[f64; 2]] {
        &self.positions
    }

    /// The sub-lattice of every `stride`-th tracer in each direction.
    pub fn coarsen(&self, stride: usize) -> Result<FlowMap> {
        if stride == 0 || self.m % stride != 0 || self.m / stride < 8 {
            return Err(Error::InvalidGrid(format!("cannot coarsen m = {} by {stride}", self.m)));
        }
        let mc = self.m / stride;
        let pick = |v: &[[f64; 2]]| -> Vec<[f64; 2]> {
            (0..mc * mc)
                .map(|k| v[(k / mc) * stride * self.m + (k % mc) * stride])
                .collect()
        };
        Ok(FlowMap {
            m: mc,
            period: self.period,
            reference: pick(&self.reference),
            positions: pick(&self.positions),
            t: self.t,
        })
    }

    /// Largest distance between corresponding tracers.
    pub fn max_distance(&self, other: &FlowMap) -> f64 {
        self.positions
            .iter()
            .zip(&other.positions)
            .map(|(a, b)| (a[0] - b[0]).hypot(a[1] - b[1]))
            .fold(0.0, f64::max)
    }
}

/// Time-dependent velocity supplied to the advection loop. Calls arrive with
/// non-decreasing `t`.
pub trait VelocitySource {
    fn velocity(&mut self, t: f64) -> Result<SpectralField>;
}

/// A frozen field.
pub struct SteadySource(pub SpectralField);

impl VelocitySource for SteadySource {
    fn velocity(&mut self, _t: f64) -> Result<SpectralField> {
        Ok(self.0.clone())
    }
}

/// Streams snapshots of a running Euler-α solve and blends the two that
/// bracket the requested time linearly.
pub struct SolverSource {
    prev: VorticityState,
    current: VorticityState,
    dt: f64,
    mode: DissipationMode,
}

impl SolverSource {
    pub fn new(initial: VorticityState, dt: f64, mode: DissipationMode) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::NonPositiveTimeStep(dt));
        }
        Ok(Self {
            prev: initial.clone(),
            current: initial,
            dt,
            mode,
        })
    }

    /// The most recent solver snapshot.
    pub fn state(&self) -> &VorticityState {
        &self.current
    }

    /// Steps the solver until its time reaches `t`.
    pub fn advance_to(&mut self, t: f64) -> Result<()> {
        let tol = 1e-9 * self.dt;
        while self.current.t() < t - tol {
            let next = step_rk4(&self.current, self.dt, self.mode)?;
            self.prev = std::mem::replace(&mut self.current, next);
        }
        Ok(())
    }
}

impl VelocitySource for SolverSource {
    fn velocity(&mut self, t: f64) -> Result<SpectralField> {
        self.advance_to(t)?;
        let (t0, t1) = (self.prev.t(), self.current.t());
        let tol = 1e-9 * self.dt;
        if (t1 - t).abs() <= tol || t1 == t0 {
            return Ok(self.current.velocity().clone());
        }
        let w = (t - t0) / (t1 - t0);
        Ok(self.prev.velocity().scale(1.0 - w).axpy(w, self.current.velocity()))
    }
}

fn eval_positions(table: &ModeTable, pos: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let (mut ex, mut ey) = (Vec::new(), Vec::new());
    let mut buf = [0.0; 2];
    pos.iter()
        .map(|&p| {
            table.eval_into(p, &mut ex, &mut ey, &mut buf);
            buf
        })
        .collect()
}

fn offset(pos: &[[f64; 2]], k: &[[f64; 2]], h: f64) -> Vec<[f64; 2]> {
    pos.iter()
        .zip(k)
        .map(|(p, v)| [p[0] + h * v[0], p[1] + h * v[1]])
        .collect()
}

/// RK4 advection of every tracer over `[map0.t, map0.t + t_span]` in
/// `round(t_span/dt)` equal steps. `t_span = 0` returns the map unchanged.
pub fn advect_flow_map(source: &mut dyn VelocitySource, map0: &FlowMap, dt: f64, t_span: f64) -> Result<FlowMap> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::NonPositiveTimeStep(dt));
    }
    if t_span == 0.0 {
        return Ok(map0.clone());
    }
    if !(t_span >= dt) {
        return Err(Error::InvalidParameter {
            name: "T",
            reason: format!("horizon {t_span} shorter than the step {dt}"),
        });
    }
    let steps = (t_span / dt).round() as usize;
    let h = t_span / steps as f64;
    let mut map = map0.clone();
    let mut table = ModeTable::new(&source.velocity(map.t)?);
    for s in 0..steps {
        let t0 = map0.t + s as f64 * h;
        let mid = ModeTable::new(&source.velocity(t0 + 0.5 * h)?);
        let end = ModeTable::new(&source.velocity(t0 + h)?);
        let p = &map.positions;
        let k1 = eval_positions(&table, p);
        let k2 = eval_positions(&mid, &offset(p, &k1, 0.5 * h));
        let k3 = eval_positions(&mid, &offset(p, &k2, 0.5 * h));
        let k4 = eval_positions(&end, &offset(p, &k3, h));
        for (i, q) in map.positions.iter_mut().enumerate() {
            for c in 0..2 {
                q[c] += h / 6.0 * (k1[i][c] + 2.0 * k2[i][c] + 2.0 * k3[i][c] + k4[i][c]);
            }
            if !(q[0].is_finite() && q[1].is_finite()) {
                return Err(Error::BlowUp {
                    t_last_good: t0,
                    reason: format!("tracer {i} left the domain"),
                });
            }
        }
        map.t = t0 + h;
        table = end;
    }
    map.t = map0.t + t_span;
    Ok(map)
}

/// `max |det Dη - 1|` over the lattice, with `Dη` from centred differences
/// of the periodic displacement `η(x) - x`.
pub fn volume_check(map: &FlowMap) -> f64 {
    let m = map.m;
    let hx = map.period[0] / m as f64;
    let hy = map.period[1] / m as f64;
    let disp = |i: usize, j: usize| {
        let k = (i % m) * m + (j % m);
        [
            map.positions[k][0] - map.reference[k][0],
            map.positions[k][1] - map.reference[k][1],
        ]
    };
    let mut worst: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            let (xp, xm) = (disp(i + 1, j), disp(i + m - 1, j));
            let (yp, ym) = (disp(i, j + 1), disp(i, j + m - 1));
            let a = 1.0 + (xp[0] - xm[0]) / (2.0 * hx);
            let c = (xp[1] - xm[1]) / (2.0 * hx);
            let b = (yp[0] - ym[0]) / (2.0 * hy);
            let d = 1.0 + (yp[1] - ym[1]) / (2.0 * hy);
            worst = worst.max((a * d - b * c - 1.0).abs());
        }
    }
    worst
}

/// `max_i |q_t(η(t, x_i)) - q₀(x_i)|`.
pub fn transport_check(q0: &SpectralField, q_t: &SpectralField, map: &FlowMap) -> Result<f64> {
    if q0.grid() != q_t.grid() {
        return Err(Error::GridMismatch);
    }
    let a = eval_scalar_at(q_t, &map.positions)?;
    let b = eval_scalar_at(q0, &map.reference)?;
    Ok(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpKind {
    /// Flow of the evolving inviscid Euler-α solution (the geodesic).
    Riemannian,
    /// Flow of the frozen initial field.
    Group,
}

/// Exponential map on an `m × m` tracer lattice; `T = 0` gives the identity.
pub fn exponential_map(
    u0: &SpectralField,
    t_end: f64,
    kind: ExpKind,
    dt: f64,
    alpha: AlphaParam,
    m: usize,
) -> Result<FlowMap> {
    let map0 = FlowMap::identity(u0.grid(), m)?;
    match kind {
        ExpKind::Group => advect_flow_map(&mut SteadySource(u0.clone()), &map0, dt, t_end),
        ExpKind::Riemannian => {
            let s0 = VorticityState::from_velocity(u0, alpha)?;
            let mut src = SolverSource::new(s0, dt, DissipationMode::Inviscid)?;
            advect_flow_map(&mut src, &map0, dt, t_end)
        }
    }
}
