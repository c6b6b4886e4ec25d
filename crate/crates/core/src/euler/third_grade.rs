//! Third-grade fluid on the torus in momentum form:
//!
//! ```text
//! ∂_t(1 - α₁Δ)u = νΔu - ∇_u(1 - α₁Δ)u + α₁(∇u)ᵗΔu
//!               + (α₁ + α₂)(AΔu + 2 div(∇u∇uᵗ)) + β div(Tr(AAᵗ)A) - ∇p,
//! A = ∇u + ∇uᵗ,  div u = 0.
//! ```
//!
//! At `α₂ = β = 0` this is LANS-α with `α² = α₁`. Quadratic products are
//! dealiased by the 2/3 rule; the cubic term is formed on a grid padded to
//! twice the resolution, which makes it exact before truncation.

use crate::error::{Error, Result};
use crate::helmholtz::{helmholtz_inverse, leray_project};
use crate::spectral::{inner_product_alpha, velocity_gradient, AlphaParam, PhysicalField, Rank, SpectralField};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThirdGradeParams {
    alpha1: f64,
    alpha2: f64,
    beta: f64,
    nu: f64,
}

impl ThirdGradeParams {
    pub fn new(alpha1: f64, alpha2: f64, beta: f64, nu: f64) -> Result<Self> {
        let bad = |name, reason: &str| {
            Err(Error::InvalidParameter {
                name,
                reason: reason.into(),
            })
        };
        if !(alpha1.is_finite() && alpha1 > 0.0) {
            return bad("alpha1", "must be positive");
        }
        for (name, v) in [("alpha2", alpha2), ("beta", beta), ("nu", nu)] {
            if !(v.is_finite() && v >= 0.0) {
                return bad(name, "must be nonnegative");
            }
        }
        Ok(Self {
            alpha1,
            alpha2,
            beta,
            nu,
        })
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// The length scale with `α² = α₁`.
    pub fn alpha(&self) -> AlphaParam {
        AlphaParam::new(self.alpha1.sqrt()).expect("alpha1 > 0")
    }
}

fn scalar_of(grid: &crate::TorusGrid2D, v: Vec<f64>) -> SpectralField {
    PhysicalField::scalar(*grid, v)
        .expect("grid-sized samples")
        .to_spectral()
}

/// Row-wise divergence `(div T)_i = ∂_j T_ij` of a spectral 2×2 tensor.
fn div_rows(t: &[[SpectralField; 2]; 2]) -> Result<SpectralField> {
    SpectralField::vector(&t[0][0].dx() + &t[0][1].dy(), &t[1][0].dx() + &t[1][1].dy())
}

/// `du/dt` for the third-grade system (pressure eliminated by projection).
pub fn third_grade_rhs(u: &SpectralField, p: &ThirdGradeParams) -> Result<SpectralField> {
    u.require(Rank::Vector, "third-grade velocity is a vector field")?;
    let grid = *u.grid();
    let n = grid.len();
    let a1 = p.alpha1;
    let ud = u.dealias_two_thirds();
    let lap = ud.laplacian();
    let v = ud.axpy(-a1, &lap);

    let up = ud.to_physical();
    let lp = lap.to_physical();
    let g = velocity_gradient(&ud);
    let gv = velocity_gradient(&v);

    // quadratic terms, pointwise
    let mut quad = [vec![0.0; n], vec![0.0; n]];
    let mut t = [[vec![0.0; n], vec![0.0; n]], [vec![0.0; n], vec![0.0; n]]];
    let c3 = a1 + p.alpha2;
    for k in 0..n {
        let uu = [up.component(0)[k], up.component(1)[k]];
        let w = [lp.component(0)[k], lp.component(1)[k]];
        let gk = [[g[0][0][k], g[0][1][k]], [g[1][0][k], g[1][1][k]]];
        for i in 0..2 {
            let adv = uu[0] * gv[i][0][k] + uu[1] * gv[i][1][k];
            let tr = gk[0][i] * w[0] + gk[1][i] * w[1];
            let a_lap = (gk[i][0] + gk[0][i]) * w[0] + (gk[i][1] + gk[1][i]) * w[1];
            quad[i][k] = -adv + a1 * tr + c3 * a_lap;
            for j in 0..2 {
                t[i][j][k] = gk[i][0] * gk[j][0] + gk[i][1] * gk[j][1];
            }
        }
    }
    let [q0, q1] = quad;
    let mut force = SpectralField::vector(scalar_of(&grid, q0), scalar_of(&grid, q1))?.dealias_two_thirds();
    if c3 != 0.0 {
        let ts = t.map(|row| row.map(|c| scalar_of(&grid, c).dealias_two_thirds()));
        force = force.axpy(2.0 * c3, &div_rows(&ts)?);
    }

    if p.beta != 0.0 {
        let fine = grid.with_size(2 * grid.nx(), 2 * grid.ny())?;
        let uf = ud.resample(&fine)?;
        let gf = velocity_gradient(&uf);
        let m = fine.len();
        let mut c = [[vec![0.0; m], vec![0.0; m]], [vec![0.0; m], vec![0.0; m]]];
        for k in 0..m {
            let a = [
                [2.0 * gf[0][0][k], gf[0][1][k] + gf[1][0][k]],
                [gf[0][1][k] + gf[1][0][k], 2.0 * gf[1][1][k]],
            ];
            let s = a[0][0] * a[0][0] + 2.0 * a[0][1] * a[0][1] + a[1][1] * a[1][1];
            for i in 0..2 {
                for j in 0..2 {
                    c[i][j][k] = s * a[i][j];
                }
            }
        }
        let cs = c.map(|row| {
            row.map(|x| {
                scalar_of(&fine, x)
                    .resample(&grid)
                    .expect("same domain")
                    .dealias_two_thirds()
            })
        });
        force = force.axpy(p.beta, &div_rows(&cs)?);
    }

    if p.nu != 0.0 {
        force = force.axpy(p.nu, &lap);
    }
    Ok(helmholtz_inverse(&leray_project(&force)?, p.alpha()))
}

/// One classical RK4 step of the third-grade system.
pub fn third_grade_step_rk4(u: &SpectralField, dt: f64, p: &ThirdGradeParams) -> Result<SpectralField> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::NonPositiveTimeStep(dt));
    }
    let k1 = third_grade_rhs(u, p)?;
    let k2 = third_grade_rhs(&u.axpy(0.5 * dt, &k1), p)?;
    let k3 = third_grade_rhs(&u.axpy(0.5 * dt, &k2), p)?;
    let k4 = third_grade_rhs(&u.axpy(dt, &k3), p)?;
    let next = u.axpy(dt / 6.0, &k1.axpy(2.0, &k2).axpy(2.0, &k3).axpy(1.0, &k4));
    if !next.is_finite() {
        return Err(Error::BlowUp {
            t_last_good: f64::NAN,
            reason: "non-finite third-grade velocity".into(),
        });
    }
    Ok(next)
}

/// `½⟨u, u⟩_α` with `α² = α₁`.
pub fn third_grade_energy(u: &SpectralField, p: &ThirdGradeParams) -> Result<f64> {
    Ok(0.5 * inner_product_alpha(u, u, p.alpha())?)
}
