//! Euler-α / LANS-α on the torus in potential-vorticity form,
//! `∂_t q + u·∇q = D(q)`, `q = (1 - α²Δ)ω`, `ω = curl u`.

use crate::error::{Error, Result};
use crate::helmholtz::{helmholtz_apply, helmholtz_inverse};
use crate::spectral::{inner_product_alpha, AlphaParam, PhysicalField, Rank, SpectralField};
use num_complex::Complex64;
use std::sync::OnceLock;

/// Coefficient modulus beyond which a run is declared blown up.
pub const BLOWUP_THRESHOLD: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DissipationMode {
    Inviscid,
    /// `+νΔω` on the right of the q-equation (momentum `νΔu`).
    Viscous(f64),
    /// `+νΔq`, i.e. momentum `ν(1 - α²Δ)Δu`.
    Strong(f64),
}

impl DissipationMode {
    pub fn viscous(nu: f64) -> Result<Self> {
        check_nu(nu).map(Self::Viscous)
    }

    pub fn strong(nu: f64) -> Result<Self> {
        check_nu(nu).map(Self::Strong)
    }

    pub fn nu(&self) -> f64 {
        match *self {
            Self::Inviscid => 0.0,
            Self::Viscous(nu) | Self::Strong(nu) => nu,
        }
    }
}

fn check_nu(nu: f64) -> Result<f64> {
    if nu.is_finite() && nu > 0.0 {
        Ok(nu)
    } else {
        Err(Error::InvalidParameter {
            name: "nu",
            reason: format!("viscosity must be positive, got {nu}"),
        })
    }
}

#[derive(Debug, Clone)]
struct Derived {
    omega: SpectralField,
    psi: SpectralField,
    u: SpectralField,
}

/// Prognostic potential vorticity plus the separately carried mean flow.
/// Derived fields are computed lazily and cached.
#[derive(Debug, Clone)]
pub struct VorticityState {
    q: SpectralField,
    alpha: AlphaParam,
    t: f64,
    mean_flow: [f64; 2],
    derived: OnceLock<Derived>,
}

impl VorticityState {
    pub fn new(q: SpectralField, alpha: AlphaParam, mean_flow: [f64; 2]) -> Result<Self> {
        q.require(Rank::Scalar, "potential vorticity is a scalar field")?;
        if !q.is_finite() || !mean_flow.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "q",
                reason: "non-finite initial data".into(),
            });
        }
        Ok(Self {
            q,
            alpha,
            t: 0.0,
            mean_flow,
            derived: OnceLock::new(),
        })
    }

    /// State whose velocity is `u` (its mean becomes the mean flow).
    pub fn from_velocity(u: &SpectralField, alpha: AlphaParam) -> Result<Self> {
        let q = helmholtz_apply(&u.curl()?, alpha);
        let m = u.mean();
        Self::new(q, alpha, [m[0], m[1]])
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    pub fn q(&self) -> &SpectralField {
        &self.q
    }

    pub fn alpha(&self) -> AlphaParam {
        self.alpha
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn mean_flow(&self) -> [f64; 2] {
        self.mean_flow
    }

    fn derived(&self) -> &Derived {
        self.derived.get_or_init(|| {
            let omega = helmholtz_inverse(&self.q, self.alpha);
            let psi = stream_function(&omega);
            let mut u = psi.perp_gradient().expect("scalar stream function");
            for c in 0..2 {
                u.component_mut(c)[0] = Complex64::new(self.mean_flow[c], 0.0);
            }
            Derived { omega, psi, u }
        })
    }

    pub fn omega(&self) -> &SpectralField {
        &self.derived().omega
    }

    pub fn psi(&self) -> &SpectralField {
        &self.derived().psi
    }

    /// Velocity including the mean flow.
    pub fn velocity(&self) -> &SpectralField {
        &self.derived().u
    }

    fn with_q(&self, q: SpectralField, t: f64) -> Self {
        Self {
            q,
            alpha: self.alpha,
            t,
            mean_flow: self.mean_flow,
            derived: OnceLock::new(),
        }
    }
}

/// Zero-mean solution of `Δψ = ω`.
fn stream_function(omega: &SpectralField) -> SpectralField {
    omega.apply_symbol(|kx, ky| {
        let k2 = kx * kx + ky * ky;
        if k2 == 0.0 {
            0.0
        } else {
            -1.0 / k2
        }
    })
}

/// `u = ∇⊥ψ`, `Δψ = (1 - α²Δ)⁻¹q`; zero mean (the mean flow is carried by
/// [`VorticityState`]).
pub fn velocity_from_q(q: &SpectralField, alpha: AlphaParam) -> Result<SpectralField> {
    q.require(Rank::Scalar, "potential vorticity is a scalar field")?;
    stream_function(&helmholtz_inverse(q, alpha)).perp_gradient()
}

/// Dealiased advection `trunc(u·∇q)` computed on the native grid.
pub(crate) fn advect(u: &SpectralField, q: &SpectralField) -> SpectralField {
    let up = u.to_physical();
    let gq = q.gradient().expect("scalar").to_physical();
    let prod: Vec<f64> = (0..up.grid().len())
        .map(|i| up.component(0)[i] * gq.component(0)[i] + up.component(1)[i] * gq.component(1)[i])
        .collect();
    PhysicalField::scalar(*u.grid(), prod)
        .expect("grid-sized product")
        .to_spectral()
        .dealias_two_thirds()
}

/// `dq/dt = -trunc(u·∇q) + {0 | νΔω | νΔq}`.
pub fn rhs_vorticity(state: &VorticityState, mode: DissipationMode) -> SpectralField {
    let adv = advect(state.velocity(), &state.q);
    match mode {
        DissipationMode::Inviscid => -&adv,
        DissipationMode::Viscous(nu) => state.omega().laplacian().scale(nu).axpy(-1.0, &adv),
        DissipationMode::Strong(nu) => state.q.laplacian().scale(nu).axpy(-1.0, &adv),
    }
}

/// Largest `|k|` on the grid, used in the Courant number.
fn max_wavenumber(q: &SpectralField) -> f64 {
    let g = q.grid();
    let kx = std::f64::consts::PI * g.nx() as f64 / g.lx();
    let ky = std::f64::consts::PI * g.ny() as f64 / g.ly();
    (kx * kx + ky * ky).sqrt()
}

/// `dt·max|u|·max|k|`.
pub fn courant_number(state: &VorticityState, dt: f64) -> f64 {
    let up = state.velocity().to_physical();
    let umax = (0..up.grid().len())
        .map(|i| up.component(0)[i].hypot(up.component(1)[i]))
        .fold(0.0, f64::max);
    dt * umax * max_wavenumber(&state.q)
}

/// One classical RK4 step. Rejects `dt ≤ 0` and Courant numbers ≥ 1 (warns
/// above 0.5); reports blow-up when the new state is non-finite or
/// `max|q̂| > 1e12`.
pub fn step_rk4(state: &VorticityState, dt: f64, mode: DissipationMode) -> Result<VorticityState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::NonPositiveTimeStep(dt));
    }
    let courant = courant_number(state, dt);
    if courant >= 1.0 {
        return Err(Error::CflViolation { courant });
    }
    if courant > 0.5 {
        log::warn!("Courant number {courant:.3} exceeds 0.5 at t = {}", state.t);
    }
    let k1 = rhs_vorticity(state, mode);
    let s2 = state.with_q(state.q.axpy(0.5 * dt, &k1), state.t + 0.5 * dt);
    let k2 = rhs_vorticity(&s2, mode);
    let s3 = state.with_q(state.q.axpy(0.5 * dt, &k2), state.t + 0.5 * dt);
    let k3 = rhs_vorticity(&s3, mode);
    let s4 = state.with_q(state.q.axpy(dt, &k3), state.t + dt);
    let k4 = rhs_vorticity(&s4, mode);
    let incr = k1.axpy(2.0, &k2).axpy(2.0, &k3).axpy(1.0, &k4);
    let next = state.with_q(state.q.axpy(dt / 6.0, &incr), state.t + dt);
    check_blowup(state.t, &next.q)?;
    Ok(next)
}

pub(crate) fn check_blowup(t_last_good: f64, q: &SpectralField) -> Result<()> {
    if !q.is_finite() {
        return Err(Error::BlowUp {
            t_last_good,
            reason: "non-finite coefficients".into(),
        });
    }
    let m = q.max_abs();
    if m > BLOWUP_THRESHOLD {
        return Err(Error::BlowUp {
            t_last_good,
            reason: format!("max coefficient modulus {m:e} exceeds {BLOWUP_THRESHOLD:e}"),
        });
    }
    Ok(())
}

/// Advances `steps` RK4 steps, calling `observe` after each one.
pub fn integrate(
    state: &VorticityState,
    dt: f64,
    steps: usize,
    mode: DissipationMode,
    mut observe: impl FnMut(&VorticityState),
) -> Result<VorticityState> {
    let mut s = state.clone();
    for _ in 0..steps {
        s = step_rk4(&s, dt, mode)?;
        observe(&s);
    }
    Ok(s)
}

/// Number of steps of size close to `dt` covering `[0, t_end]`, and the
/// exact step that lands on `t_end`.
pub fn step_plan(t_end: f64, dt: f64) -> Result<(usize, f64)> {
    if !(dt > 0.0) {
        return Err(Error::NonPositiveTimeStep(dt));
    }
    let n = (t_end / dt).round().max(0.0) as usize;
    if n == 0 {
        return Ok((0, dt));
    }
    Ok((n, t_end / n as f64))
}

/// Samples of `q` on a grid fine enough that the mean of `q^p`, `p ≤ pmax`,
/// is free of aliasing (the zero mode only aliases from wavevectors ≥ M).
fn fine_samples(q: &SpectralField, pmax: usize) -> Result<(Vec<f64>, f64)> {
    let g = *q.grid();
    let (sx, sy) = q.support(0.0);
    let fine = |s: i64, n: usize| -> usize {
        let m = (pmax as i64 * s + 1) as usize;
        (m + m % 2).max(n)
    };
    let fg = g.with_size(fine(sx, g.nx()), fine(sy, g.ny()))?;
    let p = q.to_physical_on(&fg)?;
    let w = g.area() / fg.len() as f64;
    Ok((p.into_components().remove(0), w))
}

/// `[∫q, ∫q², …, ∫q^nmax]` by exact quadrature of the band-limited powers.
pub fn casimirs(q: &SpectralField, nmax: usize) -> Result<Vec<f64>> {
    q.require(Rank::Scalar, "Casimirs take a scalar field")?;
    if nmax == 0 {
        return Err(Error::InvalidParameter {
            name: "nmax",
            reason: "need at least one Casimir".into(),
        });
    }
    let (vals, w) = fine_samples(q, nmax)?;
    let mut out = vec![0.0; nmax];
    for &v in &vals {
        let mut pw = 1.0;
        for o in out.iter_mut() {
            pw *= v;
            *o += pw;
        }
    }
    Ok(out.into_iter().map(|s| s * w).collect())
}

/// `[∫|q|, …, ∫|q|^nmax]`, the natural scale for Casimir drifts (the signed
/// odd Casimirs can vanish).
pub fn casimir_scales(q: &SpectralField, nmax: usize) -> Result<Vec<f64>> {
    q.require(Rank::Scalar, "Casimirs take a scalar field")?;
    let (vals, w) = fine_samples(q, nmax.max(1))?;
    Ok((1..=nmax)
        .map(|n| vals.iter().map(|v| v.abs().powi(n as i32)).sum::<f64>() * w)
        .collect())
}

/// `E = ½⟨u, u⟩_α`, mean flow included.
pub fn energy_alpha(state: &VorticityState) -> f64 {
    let u = state.velocity();
    0.5 * inner_product_alpha(u, u, state.alpha).expect("vector velocity")
}
