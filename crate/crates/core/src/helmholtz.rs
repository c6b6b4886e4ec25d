//! The smoothing inverse `(1 - α²Δ)⁻¹`, Leray and Stokes projections on the
//! torus, and tridiagonal Helmholtz solves on 1D grids.

use crate::error::{Error, Result};
use crate::spectral::{AlphaParam, Rank, SpectralField};
use num_complex::Complex64;

/// `f̂(k) ↦ f̂(k)/(1 + α²|k|²)`, componentwise.
pub fn helmholtz_inverse(f: &SpectralField, alpha: AlphaParam) -> SpectralField {
    f.apply_symbol(|kx, ky| 1.0 / alpha.symbol(kx * kx + ky * ky))
}

/// `(1 - α²Δ)f`, componentwise. Unlike [`SpectralField::laplacian`] this
/// keeps Nyquist modes, so it inverts [`helmholtz_inverse`] exactly.
pub fn helmholtz_apply(f: &SpectralField, alpha: AlphaParam) -> SpectralField {
    f.apply_symbol(|kx, ky| alpha.symbol(kx * kx + ky * ky))
}

fn split(u: &SpectralField, what: &'static str) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    u.require(Rank::Vector, what)?;
    Ok((u.component(0).to_vec(), u.component(1).to_vec()))
}

/// Leray (Hodge) projection `û ↦ û - k(k·û)/|k|²`; the mean mode passes
/// through unchanged.
pub fn leray_project(u: &SpectralField) -> Result<SpectralField> {
    let (mut a, mut b) = split(u, "Leray projection takes a vector field")?;
    let g = *u.grid();
    for ix in 0..g.nx() {
        let kx = g.kx(ix);
        for iy in 0..g.ny() {
            let ky = g.ky(iy);
            let k2 = kx * kx + ky * ky;
            if k2 == 0.0 {
                continue;
            }
            let i = g.index(ix, iy);
            let d = (a[i] * kx + b[i] * ky) / k2;
            a[i] -= d * kx;
            b[i] -= d * ky;
        }
    }
    SpectralField::from_components(g, vec![a, b])
}

/// Pressure `p` of the Stokes decomposition `F = v + (1 - α²Δ)⁻¹∇p`,
/// `div v = 0`: `p̂ = -i(1 + α²|k|²)(k·F̂)/|k|²`.
pub fn stokes_pressure(f: &SpectralField, alpha: AlphaParam) -> Result<SpectralField> {
    let (a, b) = split(f, "Stokes projection takes a vector field")?;
    let g = *f.grid();
    let mut p = vec![Complex64::new(0.0, 0.0); g.len()];
    for ix in 0..g.nx() {
        let kx = g.kx(ix);
        for iy in 0..g.ny() {
            let ky = g.ky(iy);
            let k2 = kx * kx + ky * ky;
            if k2 == 0.0 {
                continue;
            }
            let i = g.index(ix, iy);
            p[i] = Complex64::new(0.0, -alpha.symbol(k2) / k2) * (a[i] * kx + b[i] * ky);
        }
    }
    SpectralField::from_components(g, vec![p])
}

/// Divergence-free summand of the `⟨·,·⟩_α`-orthogonal decomposition
/// `F = v + (1 - α²Δ)⁻¹∇p`. Built from the pressure solve rather than the
/// Leray multiplier; on the flat torus the two coincide mode by mode.
pub fn stokes_project(f: &SpectralField, alpha: AlphaParam) -> Result<SpectralField> {
    let p = stokes_pressure(f, alpha)?;
    let g = *f.grid();
    // full-spectrum gradient (Nyquist kept so the projection is exact)
    let mut gp = [p.component(0).to_vec(), p.component(0).to_vec()];
    for ix in 0..g.nx() {
        for iy in 0..g.ny() {
            let i = g.index(ix, iy);
            let s = 1.0 / alpha.symbol(g.k_sq(ix, iy));
            gp[0][i] *= Complex64::new(0.0, g.kx(ix) * s);
            gp[1][i] *= Complex64::new(0.0, g.ky(iy) * s);
        }
    }
    let comps = (0..2)
        .map(|c| f.component(c).iter().zip(&gp[c]).map(|(x, y)| x - y).collect())
        .collect();
    SpectralField::from_components(g, comps)
}

/// Uniform interior grid on `[0, 1]` with homogeneous Dirichlet ends:
/// nodes `x_i = i·h`, `i = 1..=n`, `h = 1/(n + 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirichletGrid1D {
    n: usize,
}

impl DirichletGrid1D {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 interior points, got {n}")));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        1.0 / (self.n + 1) as f64
    }

    /// Interior node `i` (0-based), at `(i + 1)h`.
    pub fn x(&self, i: usize) -> f64 {
        (i + 1) as f64 * self.h()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }
}

/// Thomas algorithm for `sub[i]·w[i-1] + diag[i]·w[i] + sup[i]·w[i+1] = rhs[i]`
/// (`sub[0]` and `sup[n-1]` ignored). Assumes diagonal dominance.
pub fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut beta = diag[0];
    c[0] = sup[0] / beta;
    d[0] = rhs[0] / beta;
    for i in 1..n {
        beta = diag[i] - sub[i] * c[i - 1];
        c[i] = if i + 1 < n { sup[i] / beta } else { 0.0 };
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    d
}

/// Cyclic tridiagonal solve (corner entries `sub[0]` at `(0, n-1)` and
/// `sup[n-1]` at `(n-1, 0)`) by the Sherman–Morrison correction.
pub fn solve_cyclic_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let (a, c) = (sub[0], sup[n - 1]);
    let gamma = -diag[0];
    let mut bb = diag.to_vec();
    bb[0] -= gamma;
    bb[n - 1] -= c * a / gamma;
    let x = solve_tridiagonal(sub, &bb, sup, rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = c;
    let z = solve_tridiagonal(sub, &bb, sup, &u);
    let fact = (x[0] + a * x[n - 1] / gamma) / (1.0 + z[0] + a * z[n - 1] / gamma);
    x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect()
}

/// Second-order solve of `(1 - α²∂²)w = f` on a Dirichlet grid.
pub fn helmholtz_solve_dirichlet_1d(grid: &DirichletGrid1D, f: &[f64], alpha: AlphaParam) -> Result<Vec<f64>> {
    if f.len() != grid.n {
        return Err(Error::SizeMismatch {
            expected: grid.n,
            got: f.len(),
        });
    }
    let r = alpha.squared() / (grid.h() * grid.h());
    let off = vec![-r; grid.n];
    let diag = vec![1.0 + 2.0 * r; grid.n];
    Ok(solve_tridiagonal(&off, &diag, &off, f))
}

/// Second-order solve of `(1 - α²∂²)w = f` on a periodic grid of spacing `h`.
pub fn helmholtz_solve_periodic_1d(h: f64, f: &[f64], alpha: AlphaParam) -> Result<Vec<f64>> {
    if f.len() < 3 {
        return Err(Error::InvalidGrid(format!("need at least 3 points, got {}", f.len())));
    }
    let r = alpha.squared() / (h * h);
    if r == 0.0 {
        return Ok(f.to_vec());
    }
    let off = vec![-r; f.len()];
    let diag = vec![1.0 + 2.0 * r; f.len()];
    Ok(solve_cyclic_tridiagonal(&off, &diag, &off, f))
}
