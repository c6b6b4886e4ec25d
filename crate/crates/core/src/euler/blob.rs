//! Free-space vortex blobs for Euler-α.
//!
//! A blob of circulation `Γ` at the origin induces the velocity
//! `Γ/(2πr²)·(1 - (r/α)K₁(r/α))·(-y, x)`, the perpendicular gradient of the
//! Green's function of `Δ(1 - α²Δ)`. The kernel vanishes as `r → 0`, so blobs
//! never self-interact and coincident blobs exert no force on each other.

use crate::bessel::{k0, one_minus_x_k1};
use crate::error::{Error, Result};
use crate::spectral::AlphaParam;
use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, PartialEq)]
pub struct BlobEnsemble {
    positions: Vec<[f64; 2]>,
    circulations: Vec<f64>,
    alpha: AlphaParam,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlobDiagnostics {
    pub hamiltonian: f64,
    pub linear_impulse: [f64; 2],
    pub angular_impulse: f64,
    pub total_circulation: f64,
}

impl BlobEnsemble {
    pub fn new(positions: Vec<[f64; 2]>, circulations: Vec<f64>, alpha: AlphaParam) -> Result<Self> {
        if positions.len() != circulations.len() {
            return Err(Error::SizeMismatch {
                expected: positions.len(),
                got: circulations.len(),
            });
        }
        if alpha.value() <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: "blob radius must be positive".into(),
            });
        }
        if !positions.iter().flatten().chain(&circulations).all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "blobs",
                reason: "positions and circulations must be finite".into(),
            });
        }
        for i in 0..positions.len() {
            for j in i + 1..positions.len() {
                if positions[i] == positions[j] {
                    return Err(Error::CoincidentBlobs(i, j));
                }
            }
        }
        Ok(Self {
            positions,
            circulations,
            alpha,
        })
    }

    /// `n` equal blobs on a circle of radius `radius` about the origin.
    pub fn ring(n: usize, radius: f64, gamma: f64, alpha: AlphaParam) -> Result<Self> {
        let positions = (0..n)
            .map(|i| {
                let th = 2.0 * PI * i as f64 / n as f64;
                [radius * th.cos(), radius * th.sin()]
            })
            .collect();
        Self::new(positions, vec![gamma; n], alpha)
    }

    pub fn positions(&self) -> &[[f64; 2]] {
        &self.positions
    }

    pub fn circulations(&self) -> &[f64] {
        &self.circulations
    }

    pub fn alpha(&self) -> AlphaParam {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Same blobs with every circulation negated (time reversal).
    pub fn reversed(&self) -> Self {
        Self {
            positions: self.positions.clone(),
            circulations: self.circulations.iter().map(|g| -g).collect(),
            alpha: self.alpha,
        }
    }

    fn with_positions(&self, positions: Vec<[f64; 2]>) -> Self {
        Self {
            positions,
            circulations: self.circulations.clone(),
            alpha: self.alpha,
        }
    }
}

/// Velocity induced at offset `d` from a unit-circulation blob.
pub fn blob_kernel(d: [f64; 2], alpha: AlphaParam) -> [f64; 2] {
    let r2 = d[0] * d[0] + d[1] * d[1];
    if r2 == 0.0 {
        return [0.0, 0.0];
    }
    let r = r2.sqrt();
    let f = one_minus_x_k1(r / alpha.value()) / (2.0 * PI * r2);
    [-f * d[1], f * d[0]]
}

/// Speed induced at distance `d` by a blob of circulation `gamma`.
pub fn blob_speed(gamma: f64, d: f64, alpha: AlphaParam) -> f64 {
    gamma / (2.0 * PI * d) * one_minus_x_k1(d / alpha.value())
}

/// Velocities of all blobs by ordered direct summation.
pub fn blob_rhs(e: &BlobEnsemble) -> Vec<[f64; 2]> {
    let n = e.len();
    let mut vel = vec![[0.0; 2]; n];
    for j in 0..n {
        for i in 0..n {
            if i == j {
                continue;
            }
            let d = [
                e.positions[j][0] - e.positions[i][0],
                e.positions[j][1] - e.positions[i][1],
            ];
            let k = blob_kernel(d, e.alpha);
            vel[j][0] += e.circulations[i] * k[0];
            vel[j][1] += e.circulations[i] * k[1];
        }
    }
    vel
}

fn shifted(e: &BlobEnsemble, k: &[[f64; 2]], h: f64) -> BlobEnsemble {
    e.with_positions(
        e.positions
            .iter()
            .zip(k)
            .map(|(p, v)| [p[0] + h * v[0], p[1] + h * v[1]])
            .collect(),
    )
}

/// One classical RK4 step of the blob positions.
pub fn blob_step_rk4(e: &BlobEnsemble, dt: f64) -> Result<BlobEnsemble> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::NonPositiveTimeStep(dt));
    }
    let k1 = blob_rhs(e);
    let k2 = blob_rhs(&shifted(e, &k1, 0.5 * dt));
    let k3 = blob_rhs(&shifted(e, &k2, 0.5 * dt));
    let k4 = blob_rhs(&shifted(e, &k3, dt));
    let positions: Vec<[f64; 2]> = (0..e.len())
        .map(|i| {
            let p = e.positions[i];
            let inc = |c: usize| k1[i][c] + 2.0 * k2[i][c] + 2.0 * k3[i][c] + k4[i][c];
            [p[0] + dt / 6.0 * inc(0), p[1] + dt / 6.0 * inc(1)]
        })
        .collect();
    if !positions.iter().flatten().all(|v| v.is_finite()) {
        return Err(Error::BlowUp {
            t_last_good: f64::NAN,
            reason: "non-finite blob position".into(),
        });
    }
    Ok(e.with_positions(positions))
}

/// `ln r + K₀(r/α)`, continuous at `r = 0` where it equals `ln(2α) - γ`.
fn pair_potential(r: f64, alpha: f64) -> f64 {
    if r == 0.0 {
        (2.0 * alpha).ln() - EULER_GAMMA
    } else {
        r.ln() + k0(r / alpha)
    }
}

pub fn blob_diagnostics(e: &BlobEnsemble) -> BlobDiagnostics {
    let a = e.alpha.value();
    let mut h = 0.0;
    for i in 0..e.len() {
        for j in 0..e.len() {
            if i != j {
                let d0 = e.positions[i][0] - e.positions[j][0];
                let d1 = e.positions[i][1] - e.positions[j][1];
                h += e.circulations[i] * e.circulations[j] * pair_potential(d0.hypot(d1), a);
            }
        }
    }
    let mut imp = [0.0; 2];
    let mut ang = 0.0;
    let mut tot = 0.0;
    for (p, g) in e.positions.iter().zip(&e.circulations) {
        imp[0] += g * p[0];
        imp[1] += g * p[1];
        ang += g * (p[0] * p[0] + p[1] * p[1]);
        tot += g;
    }
    BlobDiagnostics {
        hamiltonian: -h / (4.0 * PI),
        linear_impulse: imp,
        angular_impulse: ang,
        total_circulation: tot,
    }
}
