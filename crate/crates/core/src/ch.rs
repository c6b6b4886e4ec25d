//! Camassa–Holm equation on `[0, 1]` (Dirichlet) and on a periodic interval,
//! the geodesic equation of the H¹ metric `⟨X, Y⟩ = ∫(XY + X_x Y_x)`.
//!
//! The Eulerian solver integrates the momentum form
//! `m_t + u m_x + 2m u_x = 0`, `m = (1 - ∂²)u`, written as
//! `u_t = -(1 - D²)⁻¹[m·Du + D(m u)]` with centred differences. Because `D`
//! is skew on either grid, the discrete energy `u·(1 - D²)u·h` is conserved
//! by the semi-discrete flow. The Lagrangian solver integrates the spray
//! `η̈ = -[(1 - ∂²)⁻¹∂(u² + u_x²/2)]∘η`, `u = η̇∘η⁻¹`.

use crate::error::{Error, Result};
use crate::helmholtz::{helmholtz_solve_dirichlet_1d, helmholtz_solve_periodic_1d, DirichletGrid1D};
use crate::interp::Pchip;
use crate::spectral::AlphaParam;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bc {
    Dirichlet,
    Periodic,
}

/// Uniform 1D grid. Dirichlet grids cover `[0, 1]` and store only the `n`
/// interior nodes `(i + 1)h`, `h = 1/(n + 1)`; periodic grids cover
/// `[0, L)` with nodes `i·h`, `h = L/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n: usize,
    bc: Bc,
    length: f64,
}

impl Grid1D {
    pub fn dirichlet(n: usize) -> Result<Self> {
        DirichletGrid1D::new(n)?;
        Ok(Self {
            n,
            bc: Bc::Dirichlet,
            length: 1.0,
        })
    }

    pub fn periodic(n: usize, length: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 points, got {n}")));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidGrid(format!("period must be positive, got {length}")));
        }
        Ok(Self {
            n,
            bc: Bc::Periodic,
            length,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bc(&self) -> Bc {
        self.bc
    }

    pub fn h(&self) -> f64 {
        match self.bc {
            Bc::Dirichlet => 1.0 / (self.n + 1) as f64,
            Bc::Periodic => self.length / self.n as f64,
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        match self.bc {
            Bc::Dirichlet => (i + 1) as f64 * self.h(),
            Bc::Periodic => i as f64 * self.h(),
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes().into_iter().map(f).collect()
    }

    fn check(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                got: u.len(),
            });
        }
        Ok(())
    }

    /// `u[i]` with zero ghosts (Dirichlet) or wrap-around (periodic).
    fn at(&self, u: &[f64], i: isize) -> f64 {
        let n = self.n as isize;
        match self.bc {
            Bc::Dirichlet if i < 0 || i >= n => 0.0,
            Bc::Dirichlet => u[i as usize],
            Bc::Periodic => u[i.rem_euclid(n) as usize],
        }
    }

    /// Centred first difference.
    fn d(&self, u: &[f64]) -> Vec<f64> {
        let h2 = 2.0 * self.h();
        (0..self.n as isize)
            .map(|i| (self.at(u, i + 1) - self.at(u, i - 1)) / h2)
            .collect()
    }

    /// Three-point second difference.
    fn d2(&self, u: &[f64]) -> Vec<f64> {
        let hh = self.h() * self.h();
        (0..self.n as isize)
            .map(|i| (self.at(u, i + 1) - 2.0 * self.at(u, i) + self.at(u, i - 1)) / hh)
            .collect()
    }

    /// Solves `(1 - D²)w = f`.
    fn helmholtz(&self, f: &[f64]) -> Vec<f64> {
        let one = AlphaParam::new(1.0).expect("unit length scale");
        match self.bc {
            Bc::Dirichlet => helmholtz_solve_dirichlet_1d(&DirichletGrid1D::new(self.n).expect("validated"), f, one)
                .expect("matching length"),
            Bc::Periodic => helmholtz_solve_periodic_1d(self.h(), f, one).expect("validated"),
        }
    }

    /// Values and slopes on all nodes, including both boundary nodes for a
    /// Dirichlet grid (one-sided second-order slopes there).
    fn with_slopes(&self, u: &[f64]) -> (Vec<f64>, Vec<f64>) {
        match self.bc {
            Bc::Periodic => (u.to_vec(), self.d(u)),
            Bc::Dirichlet => {
                let h = self.h();
                let mut p = Vec::with_capacity(self.n + 2);
                p.push(0.0);
                p.extend_from_slice(u);
                p.push(0.0);
                let m = p.len();
                let mut s = vec![0.0; m];
                for i in 1..m - 1 {
                    s[i] = (p[i + 1] - p[i - 1]) / (2.0 * h);
                }
                s[0] = (-3.0 * p[0] + 4.0 * p[1] - p[2]) / (2.0 * h);
                s[m - 1] = (3.0 * p[m - 1] - 4.0 * p[m - 2] + p[m - 3]) / (2.0 * h);
                (p, s)
            }
        }
    }

    /// Nodes including the Dirichlet endpoints.
    fn full_nodes(&self) -> Vec<f64> {
        match self.bc {
            Bc::Periodic => self.nodes(),
            Bc::Dirichlet => (0..self.n + 2).map(|i| i as f64 * self.h()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CHState {
    grid: Grid1D,
    u: Vec<f64>,
    t: f64,
}

impl CHState {
    pub fn new(grid: Grid1D, u: Vec<f64>) -> Result<Self> {
        grid.check(&u)?;
        if !u.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "u",
                reason: "non-finite samples".into(),
            });
        }
        Ok(Self { grid, u, t: 0.0 })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Self {
        Self {
            u: grid.sample(f),
            grid,
            t: 0.0,
        }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }
}

/// `𝔘(u, v) = (1 - ∂²)⁻¹∂(uv + u_x v_x/2)`, symmetrised in the
/// derivative product.
pub fn frak_u_1d(u: &[f64], v: &[f64], grid: &Grid1D) -> Result<Vec<f64>> {
    grid.check(u)?;
    grid.check(v)?;
    let (pu, su) = grid.with_slopes(u);
    let (pv, sv) = grid.with_slopes(v);
    let g: Vec<f64> = (0..pu.len())
        .map(|i| pu[i] * pv[i] + 0.25 * (su[i] * sv[i] + sv[i] * su[i]))
        .collect();
    let dg = match grid.bc {
        Bc::Periodic => grid.d(&g),
        Bc::Dirichlet => (1..=grid.n).map(|i| (g[i + 1] - g[i - 1]) / (2.0 * grid.h())).collect(),
    };
    Ok(grid.helmholtz(&dg))
}

/// Eulerian right-hand side `-(1 - D²)⁻¹[m·Du + D(m u)]`.
pub fn ch_rhs_eulerian(state: &CHState) -> Vec<f64> {
    let g = &state.grid;
    let u = &state.u;
    let m: Vec<f64> = u.iter().zip(g.d2(u)).map(|(a, b)| a - b).collect();
    let du = g.d(u);
    let mu: Vec<f64> = m.iter().zip(u).map(|(a, b)| a * b).collect();
    let f: Vec<f64> = m
        .iter()
        .zip(&du)
        .zip(g.d(&mu))
        .map(|((a, b), c)| -(a * b + c))
        .collect();
    g.helmholtz(&f)
}

fn axpy(u: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    u.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

fn rk4_combine(u: &[f64], h: f64, k: [&[f64]; 4]) -> Vec<f64> {
    (0..u.len())
        .map(|i| u[i] + h / 6.0 * (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]))
        .collect()
}

/// One RK4 step of the Eulerian solver.
pub fn ch_step_rk4(state: &CHState, dt: f64) -> Result<CHState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::NonPositiveTimeStep(dt));
    }
    let at = |u: Vec<f64>| CHState {
        grid: state.grid,
        u,
        t: state.t,
    };
    let k1 = ch_rhs_eulerian(state);
    let k2 = ch_rhs_eulerian(&at(axpy(&state.u, 0.5 * dt, &k1)));
    let k3 = ch_rhs_eulerian(&at(axpy(&state.u, 0.5 * dt, &k2)));
    let k4 = ch_rhs_eulerian(&at(axpy(&state.u, dt, &k3)));
    let u = rk4_combine(&state.u, dt, [&k1, &k2, &k3, &k4]);
    if !u.iter().all(|v| v.is_finite()) {
        return Err(Error::BlowUp {
            t_last_good: state.t,
            reason: "non-finite velocity".into(),
        });
    }
    Ok(CHState {
        grid: state.grid,
        u,
        t: state.t + dt,
    })
}

/// `∫(u² + u_x²)` by the trapezoidal rule with one-sided cell differences,
/// `h Σ u_i² + h Σ ((u_{i+1} - u_i)/h)²`.
pub fn ch_energy(state: &CHState) -> f64 {
    ch_inner_product(&state.u, &state.u, &state.grid).expect("state length")
}

/// Discrete H¹ inner product matching [`ch_energy`].
pub fn ch_inner_product(a: &[f64], b: &[f64], grid: &Grid1D) -> Result<f64> {
    grid.check(a)?;
    grid.check(b)?;
    let h = grid.h();
    let l2: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let cells = match grid.bc {
        Bc::Dirichlet => grid.n as isize + 1,
        Bc::Periodic => grid.n as isize,
    };
    let first = match grid.bc {
        Bc::Dirichlet => -1,
        Bc::Periodic => 0,
    };
    let h1: f64 = (first..first + cells)
        .map(|i| (grid.at(a, i + 1) - grid.at(a, i)) * (grid.at(b, i + 1) - grid.at(b, i)))
        .sum();
    Ok(h * l2 + h1 / h)
}

/// Particle positions `η` and velocities `η̇` at the interior nodes of a
/// Dirichlet grid; `η(0) = 0` and `η(1) = 1` are fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct CHLagrangianState {
    grid: Grid1D,
    eta: Vec<f64>,
    etadot: Vec<f64>,
    t: f64,
}

impl CHLagrangianState {
    /// `η = id`, `η̇ = u`.
    pub fn from_eulerian(state: &CHState) -> Result<Self> {
        if state.grid.bc != Bc::Dirichlet {
            return Err(Error::InvalidParameter {
                name: "bc",
                reason: "the Lagrangian solver is posed on the Dirichlet interval".into(),
            });
        }
        Ok(Self {
            grid: state.grid,
            eta: state.grid.nodes(),
            etadot: state.u.clone(),
            t: state.t,
        })
    }

    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    pub fn etadot(&self) -> &[f64] {
        &self.etadot
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    /// Eulerian velocity `η̇∘η⁻¹` on the grid nodes.
    pub fn to_eulerian(&self) -> Result<CHState> {
        let u = velocity_on_grid(&self.grid, &self.eta, &self.etadot, self.t)?;
        Ok(CHState::new(self.grid, u)?.with_time(self.t))
    }
}

fn with_ends(v: &[f64], a: f64, b: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(v.len() + 2);
    out.push(a);
    out.extend_from_slice(v);
    out.push(b);
    out
}

fn velocity_on_grid(grid: &Grid1D, eta: &[f64], etadot: &[f64], t: f64) -> Result<Vec<f64>> {
    let x = with_ends(eta, 0.0, 1.0);
    if let Some(i) = (1..x.len()).find(|&i| !(x[i] > x[i - 1])) {
        return Err(Error::MonotonicityLost {
            t_last_good: t,
            index: i.saturating_sub(1),
        });
    }
    let p = Pchip::new(&x, &with_ends(etadot, 0.0, 0.0))?;
    Ok(p.eval_many(&grid.nodes()))
}

/// Spray acceleration at the particles.
fn spray(grid: &Grid1D, eta: &[f64], etadot: &[f64], t: f64) -> Result<Vec<f64>> {
    let u = velocity_on_grid(grid, eta, etadot, t)?;
    let f = frak_u_1d(&u, &u, grid)?;
    let p = Pchip::new(&grid.full_nodes(), &with_ends(&f, 0.0, 0.0))?;
    Ok(p.eval_many(eta).into_iter().map(|v| -v).collect())
}

/// One RK4 step of `(η, η̇)' = (η̇, -[𝔘(u, u)]∘η)`. Fails with
/// [`Error::MonotonicityLost`] if particles cross at any stage.
pub fn ch_spray_step(state: &CHLagrangianState, dt: f64) -> Result<CHLagrangianState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::NonPositiveTimeStep(dt));
    }
    let g = &state.grid;
    let t = state.t;
    let (e0, v0) = (&state.eta, &state.etadot);
    let a1 = spray(g, e0, v0, t)?;
    let (e1, v1) = (axpy(e0, 0.5 * dt, v0), axpy(v0, 0.5 * dt, &a1));
    let a2 = spray(g, &e1, &v1, t)?;
    let (e2, v2) = (axpy(e0, 0.5 * dt, &v1), axpy(v0, 0.5 * dt, &a2));
    let a3 = spray(g, &e2, &v2, t)?;
    let (e3, v3) = (axpy(e0, dt, &v2), axpy(v0, dt, &a3));
    let a4 = spray(g, &e3, &v3, t)?;
    let eta = rk4_combine(e0, dt, [v0, &v1, &v2, &v3]);
    let etadot = rk4_combine(v0, dt, [&a1, &a2, &a3, &a4]);
    if let Some(i) = (1..eta.len()).find(|&i| !(eta[i] > eta[i - 1])) {
        return Err(Error::MonotonicityLost {
            t_last_good: t,
            index: i - 1,
        });
    }
    if !(eta[0] > 0.0 && eta[eta.len() - 1] < 1.0) {
        return Err(Error::MonotonicityLost {
            t_last_good: t,
            index: 0,
        });
    }
    Ok(CHLagrangianState {
        grid: state.grid,
        eta,
        etadot,
        t: t + dt,
    })
}

/// `∇̃_x y = y_x·x + 𝔘(x, y)`.
pub fn ch_covariant_derivative(x: &[f64], y: &[f64], grid: &Grid1D) -> Result<Vec<f64>> {
    let u = frak_u_1d(x, y, grid)?;
    Ok(grid.d(y).iter().zip(x).zip(&u).map(|((dy, x), u)| dy * x + u).collect())
}

/// `R̃(x, y)z = ∇̃_y∇̃_x z - ∇̃_x∇̃_y z + ∇̃_{[x,y]}z`, `[x, y] = y_x x - x_x y`.
pub fn ch_curvature_op(x: &[f64], y: &[f64], z: &[f64], grid: &Grid1D) -> Result<Vec<f64>> {
    let c = |a: &[f64], b: &[f64]| ch_covariant_derivative(a, b, grid);
    let (dx, dy) = (grid.d(x), grid.d(y));
    let br: Vec<f64> = (0..grid.n).map(|i| dy[i] * x[i] - dx[i] * y[i]).collect();
    let a = c(y, &c(x, z)?)?;
    let b = c(x, &c(y, z)?)?;
    let e = c(&br, z)?;
    Ok((0..grid.n).map(|i| a[i] - b[i] + e[i]).collect())
}

/// `⟨R̃(x, y)x, y⟩ / (⟨x, x⟩⟨y, y⟩ - ⟨x, y⟩²)` in the discrete H¹ product.
///
/// The difference connection is metric only up to `O(h²)`, so the numerator
/// is taken as `½(⟨R̃(x,y)x, y⟩ - ⟨R̃(x,y)y, x⟩)`: the same continuum value,
/// but exactly symmetric in `x` and `y` on every grid.
pub fn ch_sectional_curvature(x: &[f64], y: &[f64], grid: &Grid1D) -> Result<f64> {
    let ip = |a: &[f64], b: &[f64]| ch_inner_product(a, b, grid);
    let (xx, yy, xy) = (ip(x, x)?, ip(y, y)?, ip(x, y)?);
    let gram = xx * yy - xy * xy;
    let threshold = crate::geometry::connection::DEGENERACY_THRESHOLD * xx * yy;
    if !(gram > threshold) {
        return Err(Error::DegeneratePlane { gram, threshold });
    }
    let rxy_x = ch_curvature_op(x, y, x, grid)?;
    let rxy_y = ch_curvature_op(x, y, y, grid)?;
    Ok(0.5 * (ip(&rxy_x, y)? - ip(&rxy_y, x)?) / gram)
}
