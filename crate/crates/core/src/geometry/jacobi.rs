//! Jacobi fields along Euler-α geodesics.
//!
//! A variation `η_ε` of the Lagrangian flow is described in Eulerian terms by
//! the displacement `W = (∂_ε η)∘η⁻¹` and the velocity perturbation `δu`:
//!
//! ```text
//! ∂_t δq = -trunc(δu·∇q + u·∇δq),    δq = (1 - α²Δ) curl δu
//! ∂_t W  = P trunc(δu - ∇_u W + ∇_W u)
//! ```
//!
//! The Jacobi field is `Y = W`; its initial velocity `Ẏ(0)` is taken to be
//! `δu(0)`. Base flow, `δq` and `W` advance together with RK4.

use crate::error::{Error, Result};
use crate::euler::vorticity::{advect, check_blowup, velocity_from_q, VorticityState};
use crate::helmholtz::{helmholtz_apply, leray_project};
use crate::spectral::{inner_product_alpha, AlphaParam, PhysicalField, Rank, SpectralField};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiSample {
    pub t: f64,
    /// `‖Y‖_α`.
    pub norm_y: f64,
    /// `‖δu‖_α`.
    pub norm_ydot: f64,
}

#[derive(Debug, Clone)]
pub struct JacobiTrajectory {
    pub samples: Vec<JacobiSample>,
    pub base: VorticityState,
    pub y: SpectralField,
    pub delta_u: SpectralField,
}

#[derive(Clone)]
struct Stage {
    q: SpectralField,
    dq: SpectralField,
    w: SpectralField,
}

impl Stage {
    fn axpy(&self, h: f64, k: &Stage) -> Stage {
        Stage {
            q: self.q.axpy(h, &k.q),
            dq: self.dq.axpy(h, &k.dq),
            w: self.w.axpy(h, &k.w),
        }
    }
}

/// `trunc((a·∇)b)` for vector fields, formed on the native grid.
fn directional(a: &SpectralField, b: &SpectralField) -> SpectralField {
    let ap = a.to_physical();
    let comp = |c: usize| {
        let bc = b.take_component(c);
        let gx = bc.dx().to_physical();
        let gy = bc.dy().to_physical();
        let prod: Vec<f64> = (0..ap.grid().len())
            .map(|i| ap.component(0)[i] * gx.component(0)[i] + ap.component(1)[i] * gy.component(0)[i])
            .collect();
        PhysicalField::scalar(*a.grid(), prod)
            .expect("grid-sized product")
            .to_spectral()
            .dealias_two_thirds()
    };
    SpectralField::vector(comp(0), comp(1)).expect("scalar components")
}

fn with_mean(mut u: SpectralField, mean: [f64; 2]) -> SpectralField {
    for (c, m) in mean.iter().enumerate() {
        u.component_mut(c)[0] += m;
    }
    u
}

struct Rhs {
    alpha: AlphaParam,
    mean: [f64; 2],
    dmean: [f64; 2],
}

impl Rhs {
    fn velocities(&self, s: &Stage) -> Result<(SpectralField, SpectralField)> {
        Ok((
            with_mean(velocity_from_q(&s.q, self.alpha)?, self.mean),
            with_mean(velocity_from_q(&s.dq, self.alpha)?, self.dmean),
        ))
    }

    fn eval(&self, s: &Stage) -> Result<Stage> {
        let (u, du) = self.velocities(s)?;
        let q = -&advect(&u, &s.q);
        let dq = -&(&advect(&du, &s.q) + &advect(&u, &s.dq));
        let lie = &directional(&s.w, &u) - &directional(&u, &s.w);
        let w = leray_project(&(&du.dealias_two_thirds() + &lie))?;
        Ok(Stage { q, dq, w })
    }
}

fn norm(u: &SpectralField, alpha: AlphaParam) -> Result<f64> {
    Ok(inner_product_alpha(u, u, alpha)?.sqrt())
}

/// Integrates the Jacobi equation along the inviscid geodesic from `u0` for
/// `t_end` with RK4 steps close to `dt`, recording `‖Y‖_α` and `‖δu‖_α` at
/// every step (including `t = 0`).
pub fn jacobi_evolve(
    u0: &SpectralField,
    y0: &SpectralField,
    ydot0: &SpectralField,
    t_end: f64,
    dt: f64,
    alpha: AlphaParam,
) -> Result<JacobiTrajectory> {
    for f in [u0, y0, ydot0] {
        f.require(Rank::Vector, "Jacobi data are vector fields")?;
    }
    if u0.grid() != y0.grid() || u0.grid() != ydot0.grid() {
        return Err(Error::GridMismatch);
    }
    let (steps, h) = crate::euler::step_plan(t_end, dt)?;
    let mean = u0.mean();
    let dmean = ydot0.mean();
    let rhs = Rhs {
        alpha,
        mean: [mean[0], mean[1]],
        dmean: [dmean[0], dmean[1]],
    };
    let mut s = Stage {
        q: helmholtz_apply(&u0.curl()?, alpha),
        dq: helmholtz_apply(&ydot0.curl()?, alpha),
        w: leray_project(y0)?,
    };
    let sample = |t: f64, s: &Stage| -> Result<JacobiSample> {
        let (_, du) = rhs.velocities(s)?;
        Ok(JacobiSample {
            t,
            norm_y: norm(&s.w, alpha)?,
            norm_ydot: norm(&du, alpha)?,
        })
    };
    let mut samples = vec![sample(0.0, &s)?];
    for i in 0..steps {
        let k1 = rhs.eval(&s)?;
        let k2 = rhs.eval(&s.axpy(0.5 * h, &k1))?;
        let k3 = rhs.eval(&s.axpy(0.5 * h, &k2))?;
        let k4 = rhs.eval(&s.axpy(h, &k3))?;
        let next = s
            .axpy(h / 6.0, &k1)
            .axpy(h / 3.0, &k2)
            .axpy(h / 3.0, &k3)
            .axpy(h / 6.0, &k4);
        let t_prev = i as f64 * h;
        for f in [&next.q, &next.dq, &next.w] {
            check_blowup(t_prev, f)?;
        }
        s = next;
        samples.push(sample((i + 1) as f64 * h, &s)?);
    }
    let (_, du) = rhs.velocities(&s)?;
    Ok(JacobiTrajectory {
        samples,
        base: VorticityState::new(s.q, alpha, rhs.mean)?.with_time(steps as f64 * h),
        y: s.w,
        delta_u: du,
    })
}
