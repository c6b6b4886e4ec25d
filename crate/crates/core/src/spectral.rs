//! Fourier representation of real fields on the flat 2D torus.
//!
//! Coefficients are stored for every wavevector of an `nx × ny` grid in FFT
//! order (index `ix * ny + iy`, signed wavenumber `ix` for `ix < nx/2`,
//! `ix - nx` otherwise). The forward transform divides by `nx·ny`, so stored
//! coefficients coincide with the analytic Fourier coefficients
//! `f(x) = Σ_k f̂(k) e^{i k·x}`.

use crate::error::{Error, Result};
use crate::fft;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusGrid2D {
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
}

impl TorusGrid2D {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        for (name, n) in [("nx", nx), ("ny", ny)] {
            if n < 4 || n % 2 != 0 {
                return Err(Error::InvalidGrid(format!(
                    "{name} = {n}: collocation counts must be even and at least 4"
                )));
            }
        }
        for (name, l) in [("lx", lx), ("ly", ly)] {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidGrid(format!("{name} = {l}: period must be positive")));
            }
        }
        Ok(Self { nx, ny, lx, ly })
    }

    /// `n × n` grid on the `2π`-periodic torus.
    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n, 2.0 * PI, 2.0 * PI)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn ly(&self) -> f64 {
        self.ly
    }

    /// Torus area `S = Lx·Ly`.
    pub fn area(&self) -> f64 {
        self.lx * self.ly
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        ix * self.ny + iy
    }

    /// Signed wavenumber index for storage slot `i` of an `n`-point axis.
    pub fn signed(i: usize, n: usize) -> i64 {
        if i < n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// Storage slot for signed index `j`, if the axis resolves it.
    pub fn slot(j: i64, n: usize) -> Option<usize> {
        let half = (n / 2) as i64;
        if j >= -half && j < half {
            Some(j.rem_euclid(n as i64) as usize)
        } else {
            None
        }
    }

    pub fn mode_index(&self, jx: i64, jy: i64) -> Option<usize> {
        Some(self.index(Self::slot(jx, self.nx)?, Self::slot(jy, self.ny)?))
    }

    pub fn jx(&self, ix: usize) -> i64 {
        Self::signed(ix, self.nx)
    }

    pub fn jy(&self, iy: usize) -> i64 {
        Self::signed(iy, self.ny)
    }

    pub fn kx(&self, ix: usize) -> f64 {
        2.0 * PI / self.lx * self.jx(ix) as f64
    }

    pub fn ky(&self, iy: usize) -> f64 {
        2.0 * PI / self.ly * self.jy(iy) as f64
    }

    pub fn k_sq(&self, ix: usize, iy: usize) -> f64 {
        let (kx, ky) = (self.kx(ix), self.ky(iy));
        kx * kx + ky * ky
    }

    pub fn x(&self, ix: usize) -> f64 {
        self.lx * ix as f64 / self.nx as f64
    }

    pub fn y(&self, iy: usize) -> f64 {
        self.ly * iy as f64 / self.ny as f64
    }

    fn is_nyquist(&self, ix: usize, iy: usize) -> bool {
        ix == self.nx / 2 || iy == self.ny / 2
    }

    /// Same periods, different resolution.
    pub fn with_size(&self, nx: usize, ny: usize) -> Result<Self> {
        Self::new(nx, ny, self.lx, self.ly)
    }

    fn same_domain(&self, other: &Self) -> bool {
        self.lx == other.lx && self.ly == other.ly
    }
}

/// Filtering length scale α ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaParam {
    alpha: f64,
}

impl AlphaParam {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: format!("must be finite and nonnegative, got {alpha}"),
            });
        }
        Ok(Self { alpha })
    }

    pub fn zero() -> Self {
        Self { alpha: 0.0 }
    }

    pub fn value(&self) -> f64 {
        self.alpha
    }

    pub fn squared(&self) -> f64 {
        self.alpha * self.alpha
    }

    /// Fourier symbol of `1 - α²Δ`.
    pub fn symbol(&self, k_sq: f64) -> f64 {
        1.0 + self.squared() * k_sq
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank {
    Scalar,
    Vector,
}

impl Rank {
    fn components(self) -> usize {
        match self {
            Rank::Scalar => 1,
            Rank::Vector => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffOp {
    X,
    Y,
    Laplacian,
    /// `∇⊥ψ = (-∂_y ψ, ∂_x ψ)`
    PerpGradient,
    Gradient,
    Divergence,
    /// `∂_x u² - ∂_y u¹`
    Curl,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: TorusGrid2D,
    comps: Vec<Vec<Complex64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalField {
    grid: TorusGrid2D,
    comps: Vec<Vec<f64>>,
}

impl SpectralField {
    pub fn zeros(grid: TorusGrid2D, rank: Rank) -> Self {
        Self {
            grid,
            comps: vec![vec![ZERO; grid.len()]; rank.components()],
        }
    }

    pub fn from_components(grid: TorusGrid2D, comps: Vec<Vec<Complex64>>) -> Result<Self> {
        if comps.is_empty() || comps.len() > 2 {
            return Err(Error::RankMismatch("fields have one or two components"));
        }
        for c in &comps {
            if c.len() != grid.len() {
                return Err(Error::SizeMismatch {
                    expected: grid.len(),
                    got: c.len(),
                });
            }
        }
        Ok(Self { grid, comps })
    }

    pub fn vector(a: SpectralField, b: SpectralField) -> Result<Self> {
        if a.grid != b.grid {
            return Err(Error::GridMismatch);
        }
        if a.rank() != Rank::Scalar || b.rank() != Rank::Scalar {
            return Err(Error::RankMismatch("vector components must be scalars"));
        }
        let grid = a.grid;
        let mut comps = a.comps;
        comps.extend(b.comps);
        Ok(Self { grid, comps })
    }

    /// Scalar field with a single real cosine/sine mode, `amp·cos(j·x + phase)`.
    pub fn cosine_mode(grid: TorusGrid2D, j: [i64; 2], amp: f64, phase: f64) -> Result<Self> {
        let mut f = Self::zeros(grid, Rank::Scalar);
        f.add_real_mode(0, j, amp, phase)?;
        Ok(f)
    }

    /// Adds `amp·cos(j·x + phase)` to component `c`.
    pub fn add_real_mode(&mut self, c: usize, j: [i64; 2], amp: f64, phase: f64) -> Result<()> {
        let half = Complex64::from_polar(0.5 * amp, phase);
        let p = self.grid.mode_index(j[0], j[1]);
        let m = self.grid.mode_index(-j[0], -j[1]);
        match (p, m) {
            (Some(p), Some(m)) if p == m => {
                // zero mode
                self.comps[c][p] += Complex64::new(amp * phase.cos(), 0.0);
                Ok(())
            }
            (Some(p), Some(m)) if 2 * j[0].abs() < self.grid.nx as i64 && 2 * j[1].abs() < self.grid.ny as i64 => {
                self.comps[c][p] += half;
                self.comps[c][m] += half.conj();
                Ok(())
            }
            _ => Err(Error::SupportOverflow {
                required: j[0].abs().max(j[1].abs()),
                available: (self.grid.nx.min(self.grid.ny) / 2 - 1) as i64,
            }),
        }
    }

    pub fn grid(&self) -> &TorusGrid2D {
        &self.grid
    }

    pub fn rank(&self) -> Rank {
        if self.comps.len() == 1 {
            Rank::Scalar
        } else {
            Rank::Vector
        }
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.comps[c]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        &mut self.comps[c]
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.comps
    }

    /// Scalar field holding component `c`.
    pub fn take_component(&self, c: usize) -> SpectralField {
        SpectralField {
            grid: self.grid,
            comps: vec![self.comps[c].clone()],
        }
    }

    /// Coefficient at signed wavevector index `(jx, jy)`; zero if unresolved.
    pub fn coeff(&self, c: usize, jx: i64, jy: i64) -> Complex64 {
        self.grid.mode_index(jx, jy).map_or(ZERO, |i| self.comps[c][i])
    }

    pub fn set_coeff(&mut self, c: usize, jx: i64, jy: i64, value: Complex64) -> Result<()> {
        let i = self.grid.mode_index(jx, jy).ok_or(Error::SupportOverflow {
            required: jx.abs().max(jy.abs()),
            available: (self.grid.nx.min(self.grid.ny) / 2) as i64,
        })?;
        self.comps[c][i] = value;
        Ok(())
    }

    pub fn mean(&self) -> Vec<f64> {
        self.comps.iter().map(|c| c[0].re).collect()
    }

    pub fn to_physical(&self) -> PhysicalField {
        let comps = self
            .comps
            .iter()
            .map(|c| {
                let mut buf = c.clone();
                fft::fft2(&mut buf, self.grid.nx, self.grid.ny, true);
                buf.into_iter().map(|z| z.re).collect()
            })
            .collect();
        PhysicalField { grid: self.grid, comps }
    }

    /// Re-expresses the field on a grid of the same periods but another size.
    ///
    /// Modes the target cannot resolve are dropped. A Nyquist mode of the
    /// source is split evenly between `±n/2` so the padded field stays real;
    /// the Nyquist modes of a smaller target are zeroed.
    pub fn resample(&self, target: &TorusGrid2D) -> Result<SpectralField> {
        if !self.grid.same_domain(target) {
            return Err(Error::GridMismatch);
        }
        let mut out = SpectralField {
            grid: *target,
            comps: vec![vec![ZERO; target.len()]; self.comps.len()],
        };
        let (snx, sny) = (self.grid.nx, self.grid.ny);
        for ix in 0..snx {
            let jx = self.grid.jx(ix);
            let jxs: &[i64] = if ix == snx / 2 && target.nx > snx {
                &[jx, -jx]
            } else {
                &[jx]
            };
            for iy in 0..sny {
                let jy = self.grid.jy(iy);
                let jys: &[i64] = if iy == sny / 2 && target.ny > sny {
                    &[jy, -jy]
                } else {
                    &[jy]
                };
                let weight = 1.0 / (jxs.len() * jys.len()) as f64;
                for &a in jxs {
                    for &b in jys {
                        let Some(t) = target.mode_index(a, b) else { continue };
                        let (tx, ty) = (t / target.ny, t % target.ny);
                        if target.nx < snx || target.ny < sny {
                            if target.is_nyquist(tx, ty) {
                                continue;
                            }
                        }
                        for (oc, sc) in out.comps.iter_mut().zip(&self.comps) {
                            oc[t] += sc[ix * sny + iy] * weight;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Samples on a finer grid (zero padding); exact for band-limited fields.
    pub fn to_physical_on(&self, fine: &TorusGrid2D) -> Result<PhysicalField> {
        Ok(self.resample(fine)?.to_physical())
    }

    pub(crate) fn map_modes(&self, mut f: impl FnMut(usize, usize, usize, Complex64) -> Complex64) -> Self {
        let mut out = self.clone();
        for (c, comp) in out.comps.iter_mut().enumerate() {
            for ix in 0..self.grid.nx {
                for iy in 0..self.grid.ny {
                    let i = ix * self.grid.ny + iy;
                    comp[i] = f(c, ix, iy, comp[i]);
                }
            }
        }
        out
    }

    /// Multiplies every mode by a real Fourier symbol `m(kx, ky)`.
    pub fn apply_symbol(&self, m: impl Fn(f64, f64) -> f64) -> Self {
        let g = self.grid;
        self.map_modes(|_, ix, iy, z| z * m(g.kx(ix), g.ky(iy)))
    }

    fn zero_nyquist(mut self) -> Self {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        for comp in &mut self.comps {
            for iy in 0..ny {
                comp[(nx / 2) * ny + iy] = ZERO;
            }
            for ix in 0..nx {
                comp[ix * ny + ny / 2] = ZERO;
            }
        }
        self
    }

    /// Componentwise `∂_x`.
    pub fn dx(&self) -> Self {
        let g = self.grid;
        self.map_modes(|_, ix, _, z| z * Complex64::new(0.0, g.kx(ix)))
            .zero_nyquist()
    }

    /// Componentwise `∂_y`.
    pub fn dy(&self) -> Self {
        let g = self.grid;
        self.map_modes(|_, _, iy, z| z * Complex64::new(0.0, g.ky(iy)))
            .zero_nyquist()
    }

    /// Componentwise Laplacian.
    pub fn laplacian(&self) -> Self {
        let g = self.grid;
        self.map_modes(|_, ix, iy, z| z * -g.k_sq(ix, iy)).zero_nyquist()
    }

    pub fn derivative(&self, op: DiffOp) -> Result<SpectralField> {
        match op {
            DiffOp::X => Ok(self.dx()),
            DiffOp::Y => Ok(self.dy()),
            DiffOp::Laplacian => Ok(self.laplacian()),
            DiffOp::Gradient => {
                self.require(Rank::Scalar, "gradient needs a scalar field")?;
                SpectralField::vector(self.dx(), self.dy())
            }
            DiffOp::PerpGradient => {
                self.require(Rank::Scalar, "perpendicular gradient needs a scalar field")?;
                SpectralField::vector(-&self.dy(), self.dx())
            }
            DiffOp::Divergence => {
                self.require(Rank::Vector, "divergence needs a vector field")?;
                Ok(&self.take_component(0).dx() + &self.take_component(1).dy())
            }
            DiffOp::Curl => {
                self.require(Rank::Vector, "curl needs a vector field")?;
                Ok(&self.take_component(1).dx() - &self.take_component(0).dy())
            }
        }
    }

    pub fn gradient(&self) -> Result<SpectralField> {
        self.derivative(DiffOp::Gradient)
    }

    pub fn divergence(&self) -> Result<SpectralField> {
        self.derivative(DiffOp::Divergence)
    }

    pub fn curl(&self) -> Result<SpectralField> {
        self.derivative(DiffOp::Curl)
    }

    pub fn perp_gradient(&self) -> Result<SpectralField> {
        self.derivative(DiffOp::PerpGradient)
    }

    pub(crate) fn require(&self, rank: Rank, msg: &'static str) -> Result<()> {
        if self.rank() == rank {
            Ok(())
        } else {
            Err(Error::RankMismatch(msg))
        }
    }

    /// Zeroes modes with `|jx| > nx·fraction/2` or `|jy| > ny·fraction/2`.
    pub fn truncate(&self, fraction: f64) -> Self {
        let g = self.grid;
        let cx = g.nx as f64 * fraction / 2.0;
        let cy = g.ny as f64 * fraction / 2.0;
        self.map_modes(|_, ix, iy, z| {
            if (g.jx(ix).abs() as f64) > cx || (g.jy(iy).abs() as f64) > cy {
                ZERO
            } else {
                z
            }
        })
    }

    /// 2/3-rule truncation: zero modes with `|jx| > nx/3` or `|jy| > ny/3`.
    pub fn dealias_two_thirds(&self) -> Self {
        self.truncate(2.0 / 3.0)
    }

    /// Largest `|jx|`, `|jy|` among coefficients with modulus above `tol`.
    pub fn support(&self, tol: f64) -> (i64, i64) {
        let mut s = (0, 0);
        for comp in &self.comps {
            for ix in 0..self.grid.nx {
                for iy in 0..self.grid.ny {
                    if comp[ix * self.grid.ny + iy].norm() > tol {
                        s.0 = s.0.max(self.grid.jx(ix).abs());
                        s.1 = s.1.max(self.grid.jy(iy).abs());
                    }
                }
            }
        }
        s
    }

    /// Largest `|f̂(k) - conj f̂(-k)|`; zero for exactly real fields.
    pub fn hermitian_defect(&self) -> f64 {
        let g = self.grid;
        let mut worst: f64 = 0.0;
        for comp in &self.comps {
            for ix in 0..g.nx {
                for iy in 0..g.ny {
                    let mx = (g.nx - ix) % g.nx;
                    let my = (g.ny - iy) % g.ny;
                    let d = comp[ix * g.ny + iy] - comp[mx * g.ny + my].conj();
                    worst = worst.max(d.norm());
                }
            }
        }
        worst
    }

    /// Projects onto real fields, `f̂(k) ← ½(f̂(k) + conj f̂(-k))`.
    pub fn hermitian_part(&self) -> Self {
        let g = self.grid;
        let src = self.clone();
        self.map_modes(|c, ix, iy, z| {
            let mx = (g.nx - ix) % g.nx;
            let my = (g.ny - iy) % g.ny;
            0.5 * (z + src.comps[c][mx * g.ny + my].conj())
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest coefficient difference; fields must share grid and rank.
    pub fn max_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        self.comps
            .iter()
            .zip(&other.comps)
            .flat_map(|(a, b)| a.iter().zip(b))
            .fold(0.0, |m, (x, y)| m.max((x - y).norm()))
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_modes(|_, _, _, z| z * s)
    }

    /// `self + s·other`
    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        assert_eq!(self.comps.len(), other.comps.len(), "rank mismatch");
        let mut out = self.clone();
        for (a, b) in out.comps.iter_mut().zip(&other.comps) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y * s;
            }
        }
        out
    }

    /// `Σ_k Re(f̂(k)·conj ĝ(k))·w(k)` summed over components.
    pub(crate) fn weighted_dot(&self, other: &Self, w: impl Fn(f64) -> f64) -> f64 {
        let g = self.grid;
        let mut s = 0.0;
        for (a, b) in self.comps.iter().zip(&other.comps) {
            for ix in 0..g.nx {
                for iy in 0..g.ny {
                    let i = ix * g.ny + iy;
                    s += (a[i] * b[i].conj()).re * w(g.k_sq(ix, iy));
                }
            }
        }
        s
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(-1.0, rhs)
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self.scale(-1.0)
    }
}

impl Mul<&SpectralField> for f64 {
    type Output = SpectralField;
    fn mul(self, rhs: &SpectralField) -> SpectralField {
        rhs.scale(self)
    }
}

impl PhysicalField {
    pub fn scalar(grid: TorusGrid2D, data: Vec<f64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                got: data.len(),
            });
        }
        Ok(Self {
            grid,
            comps: vec![data],
        })
    }

    pub fn vector(grid: TorusGrid2D, u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        for d in [&u, &v] {
            if d.len() != grid.len() {
                return Err(Error::SizeMismatch {
                    expected: grid.len(),
                    got: d.len(),
                });
            }
        }
        Ok(Self {
            grid,
            comps: vec![u, v],
        })
    }

    pub fn from_fn(grid: TorusGrid2D, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut data = Vec::with_capacity(grid.len());
        for ix in 0..grid.nx {
            for iy in 0..grid.ny {
                data.push(f(grid.x(ix), grid.y(iy)));
            }
        }
        Self {
            grid,
            comps: vec![data],
        }
    }

    pub fn from_fn_vector(grid: TorusGrid2D, f: impl Fn(f64, f64) -> [f64; 2]) -> Self {
        let mut u = Vec::with_capacity(grid.len());
        let mut v = Vec::with_capacity(grid.len());
        for ix in 0..grid.nx {
            for iy in 0..grid.ny {
                let [a, b] = f(grid.x(ix), grid.y(iy));
                u.push(a);
                v.push(b);
            }
        }
        Self {
            grid,
            comps: vec![u, v],
        }
    }

    pub fn grid(&self) -> &TorusGrid2D {
        &self.grid
    }

    pub fn rank(&self) -> Rank {
        if self.comps.len() == 1 {
            Rank::Scalar
        } else {
            Rank::Vector
        }
    }

    pub fn component(&self, c: usize) -> &[f64] {
        &self.comps[c]
    }

    pub fn into_components(self) -> Vec<Vec<f64>> {
        self.comps
    }

    pub fn to_spectral(&self) -> SpectralField {
        let scale = 1.0 / self.grid.len() as f64;
        let comps = self
            .comps
            .iter()
            .map(|c| {
                let mut buf: Vec<Complex64> = c.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                fft::fft2(&mut buf, self.grid.nx, self.grid.ny, false);
                buf.iter_mut().for_each(|z| *z *= scale);
                buf
            })
            .collect();
        SpectralField { grid: self.grid, comps }
    }

    /// Forward transform followed by resampling onto `coarse`.
    pub fn to_spectral_on(&self, coarse: &TorusGrid2D) -> Result<SpectralField> {
        self.to_spectral().resample(coarse)
    }

    /// `(1/S)∫ f` by the rectangle rule (exact for resolved trigonometric
    /// polynomials).
    pub fn mean(&self, c: usize) -> f64 {
        self.comps[c].iter().sum::<f64>() / self.grid.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        self.comps
            .iter()
            .zip(&other.comps)
            .flat_map(|(a, b)| a.iter().zip(b))
            .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }
}

fn check_pair(u: &SpectralField, v: &SpectralField) -> Result<()> {
    if u.grid != v.grid {
        return Err(Error::GridMismatch);
    }
    u.require(Rank::Vector, "inner product takes vector fields")?;
    v.require(Rank::Vector, "inner product takes vector fields")
}

/// `⟨u, v⟩_α = ∫ (1 - α²Δ)u · v`, evaluated mode-wise as
/// `S·Σ_k (1 + α²|k|²) Re(û·conj v̂)`. Equals the deformation form
/// [`inner_product_alpha_deformation`] on divergence-free fields.
pub fn inner_product_alpha(u: &SpectralField, v: &SpectralField, alpha: AlphaParam) -> Result<f64> {
    check_pair(u, v)?;
    Ok(u.grid.area() * u.weighted_dot(v, |k2| alpha.symbol(k2)))
}

/// `(u, v)_{L²} + (α²/2)(£_u g, £_v g)_{L²}` with `£_u g = ∇u + ∇uᵗ`, by grid
/// quadrature. Valid for any (not necessarily solenoidal) vector fields.
pub fn inner_product_alpha_deformation(u: &SpectralField, v: &SpectralField, alpha: AlphaParam) -> Result<f64> {
    check_pair(u, v)?;
    let s = u.grid.area();
    let up = u.to_physical();
    let vp = v.to_physical();
    let mut l2 = 0.0;
    for c in 0..2 {
        l2 += dot_mean(up.component(c), vp.component(c));
    }
    let gu = velocity_gradient(u);
    let gv = velocity_gradient(v);
    let mut def = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let a: Vec<f64> = gu[i][j].iter().zip(&gu[j][i]).map(|(x, y)| x + y).collect();
            let b: Vec<f64> = gv[i][j].iter().zip(&gv[j][i]).map(|(x, y)| x + y).collect();
            def += dot_mean(&a, &b);
        }
    }
    Ok(s * (l2 + 0.5 * alpha.squared() * def))
}

fn dot_mean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / a.len() as f64
}

/// Grid samples of `G[i][j] = ∂_j u_i`.
pub(crate) fn velocity_gradient(u: &SpectralField) -> [[Vec<f64>; 2]; 2] {
    let c0 = u.take_component(0);
    let c1 = u.take_component(1);
    let p = |f: SpectralField| f.to_physical().into_components().remove(0);
    [[p(c0.dx()), p(c0.dy())], [p(c1.dx()), p(c1.dy())]]
}
