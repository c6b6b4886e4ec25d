//! Levi-Civita connection of the right-invariant α-metric at the identity of
//! the volume-preserving diffeomorphism group of the flat torus, and its
//! curvature.
//!
//! With `G_ij = ∂_j u_i`,
//!
//! ```text
//! 𝒰(u)     = α²(1 - α²Δ)⁻¹{div[G Gᵗ + G G - Gᵗ G] + ∇ Tr(G G)}
//! 𝔘(x, y)  = ¼(𝒰(x + y) - 𝒰(x - y))
//! ∇̃_x y    = P[∇_x y + 𝔘(x, y)]
//! R̃(x,y)z = ∇̃_y∇̃_x z - ∇̃_x∇̃_y z + ∇̃_{[x,y]} z,   [x, y] = ∇_x y - ∇_y x
//! K(x, y)  = ⟨R̃(x,y)x, y⟩_α / (⟨x,x⟩_α⟨y,y⟩_α - ⟨x,y⟩_α²)
//! ```
//!
//! All pointwise products are formed on a grid of twice the resolution and
//! truncated back, so for band-limited inputs every operator is exact up to
//! roundoff. Callers must leave enough spectral room; [`curvature_op`]
//! checks this up front.

use crate::error::{Error, Result};
use crate::helmholtz::{helmholtz_inverse, leray_project};
use crate::initial::stream_mode;
use crate::spectral::{inner_product_alpha, AlphaParam, PhysicalField, Rank, SpectralField, TorusGrid2D};

/// A divergence-free, finitely supported vector field with a descriptive label.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigVectorField {
    field: SpectralField,
    label: String,
}

impl TrigVectorField {
    pub fn new(field: SpectralField, label: impl Into<String>) -> Result<Self> {
        field.require(Rank::Vector, "trigonometric fields are vector fields")?;
        let div = field.divergence()?.max_abs();
        let scale = field.max_abs().max(f64::MIN_POSITIVE);
        if div > 1e-12 * scale.max(1.0) {
            return Err(Error::InvalidParameter {
                name: "field",
                reason: format!("divergence {div:e} is not negligible"),
            });
        }
        Ok(Self {
            field,
            label: label.into(),
        })
    }

    /// `∇⊥ cos(k·x)`.
    pub fn stream_mode(grid: TorusGrid2D, k: [i64; 2]) -> Result<Self> {
        Self::new(
            stream_mode(grid, k, 1.0, 0.0)?,
            format!("cos({}x + {}y) stream mode", k[0], k[1]),
        )
    }

    pub fn field(&self) -> &SpectralField {
        &self.field
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Largest `|j|` along either axis among nonzero coefficients.
    pub fn max_wavenumber(&self) -> i64 {
        let (a, b) = self.field.support(1e-13 * self.field.max_abs());
        a.max(b)
    }
}

/// Exact pointwise products of band-limited fields via a 2× padded grid.
pub(crate) struct Products {
    native: TorusGrid2D,
    fine: TorusGrid2D,
}

impl Products {
    pub(crate) fn new(native: TorusGrid2D) -> Self {
        let fine = native
            .with_size(2 * native.nx(), 2 * native.ny())
            .expect("doubling a valid grid");
        Self { native, fine }
    }

    /// Samples of a scalar field on the fine grid.
    pub(crate) fn up(&self, f: &SpectralField) -> Vec<f64> {
        f.to_physical_on(&self.fine)
            .expect("same domain")
            .into_components()
            .remove(0)
    }

    pub(crate) fn down(&self, v: Vec<f64>) -> SpectralField {
        PhysicalField::scalar(self.fine, v)
            .expect("fine-grid samples")
            .to_spectral_on(&self.native)
            .expect("same domain")
    }

    fn components(&self, u: &SpectralField) -> [Vec<f64>; 2] {
        [self.up(&u.take_component(0)), self.up(&u.take_component(1))]
    }

    /// `G[i][j] = ∂_j u_i` on the fine grid.
    fn gradient(&self, u: &SpectralField) -> [[Vec<f64>; 2]; 2] {
        let c = [u.take_component(0), u.take_component(1)];
        [
            [self.up(&c[0].dx()), self.up(&c[0].dy())],
            [self.up(&c[1].dx()), self.up(&c[1].dy())],
        ]
    }

    fn vector(&self, a: Vec<f64>, b: Vec<f64>) -> SpectralField {
        SpectralField::vector(self.down(a), self.down(b)).expect("scalar components")
    }
}

fn check_vector(u: &SpectralField) -> Result<()> {
    u.require(Rank::Vector, "geometry operators act on vector fields")
}

fn check_pair(x: &SpectralField, y: &SpectralField) -> Result<()> {
    check_vector(x)?;
    check_vector(y)?;
    if x.grid() != y.grid() {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

/// Flat covariant derivative `∇_x y = (x·∇)y`.
pub fn flat_covariant(x: &SpectralField, y: &SpectralField) -> Result<SpectralField> {
    check_pair(x, y)?;
    let p = Products::new(*x.grid());
    let xs = p.components(x);
    let g = p.gradient(y);
    let n = xs[0].len();
    let row = |i: usize| -> Vec<f64> { (0..n).map(|k| xs[0][k] * g[i][0][k] + xs[1][k] * g[i][1][k]).collect() };
    Ok(p.vector(row(0), row(1)))
}

/// Lie-algebra bracket `[x, y] = ∇_x y - ∇_y x`.
pub fn bracket(x: &SpectralField, y: &SpectralField) -> Result<SpectralField> {
    Ok(&flat_covariant(x, y)? - &flat_covariant(y, x)?)
}

/// `𝒰(u)`.
pub fn cal_u(u: &SpectralField, alpha: AlphaParam) -> Result<SpectralField> {
    check_vector(u)?;
    let p = Products::new(*u.grid());
    let g = p.gradient(u);
    let n = g[0][0].len();
    // T = G Gᵗ + G G - Gᵗ G, and Tr(G G)
    let mut t = [[vec![0.0; n], vec![0.0; n]], [vec![0.0; n], vec![0.0; n]]];
    let mut tr = vec![0.0; n];
    for k in 0..n {
        let m = [[g[0][0][k], g[0][1][k]], [g[1][0][k], g[1][1][k]]];
        for i in 0..2 {
            for j in 0..2 {
                let mut s = 0.0;
                for l in 0..2 {
                    s += m[i][l] * m[j][l] + m[i][l] * m[l][j] - m[l][i] * m[l][j];
                }
                t[i][j][k] = s;
            }
        }
        tr[k] = m[0][0] * m[0][0] + 2.0 * m[0][1] * m[1][0] + m[1][1] * m[1][1];
    }
    let [[t00, t01], [t10, t11]] = t;
    let (t00, t01, t10, t11) = (p.down(t00), p.down(t01), p.down(t10), p.down(t11));
    let trs = p.down(tr);
    let v = SpectralField::vector(
        &(&t00.dx() + &t01.dy()) + &trs.dx(),
        &(&t10.dx() + &t11.dy()) + &trs.dy(),
    )?;
    Ok(helmholtz_inverse(&v, alpha).scale(alpha.squared()))
}

/// `𝔘(x, y) = ¼(𝒰(x + y) - 𝒰(x - y))`, the symmetric bilinear form of 𝒰.
pub fn frak_u(x: &SpectralField, y: &SpectralField, alpha: AlphaParam) -> Result<SpectralField> {
    check_pair(x, y)?;
    Ok(cal_u(&(x + y), alpha)?.axpy(-1.0, &cal_u(&(x - y), alpha)?).scale(0.25))
}

/// `∇̃_x y = P[∇_x y + 𝔘(x, y)]`; Leray-projected flat derivative at `α = 0`.
pub fn covariant_derivative(x: &SpectralField, y: &SpectralField, alpha: AlphaParam) -> Result<SpectralField> {
    let flat = flat_covariant(x, y)?;
    if alpha.value() == 0.0 {
        return leray_project(&flat);
    }
    leray_project(&(&flat + &frak_u(x, y, alpha)?))
}

/// `M_x y = (1 - P)∇_x y + ½P𝔘(x, y)`, the bounded operator splitting the
/// smooth part of the connection.
pub fn m_op(x: &SpectralField, y: &SpectralField, alpha: AlphaParam) -> Result<SpectralField> {
    let flat = flat_covariant(x, y)?;
    let grad_part = &flat - &leray_project(&flat)?;
    let smooth = leray_project(&frak_u(x, y, alpha)?)?;
    Ok(grad_part.axpy(0.5, &smooth))
}

/// The connection defect `D_x y = ∇̃_x y - ∇_x y = -(1 - P)∇_x y + P𝔘(x, y)`.
pub fn connection_defect(x: &SpectralField, y: &SpectralField, alpha: AlphaParam) -> Result<SpectralField> {
    Ok(&covariant_derivative(x, y, alpha)? - &flat_covariant(x, y)?)
}

/// Checks that every intermediate of `R̃(x, y)z` stays resolvable.
fn check_support(fields: &[&SpectralField]) -> Result<()> {
    let g = fields[0].grid();
    let mut need = (0, 0);
    for f in fields {
        let s = f.support(1e-13 * f.max_abs());
        need = (need.0 + s.0, need.1 + s.1);
    }
    let avail = ((g.nx() / 2 - 1) as i64, (g.ny() / 2 - 1) as i64);
    if need.0 > avail.0 || need.1 > avail.1 {
        return Err(Error::SupportOverflow {
            required: need.0.max(need.1),
            available: avail.0.min(avail.1),
        });
    }
    Ok(())
}

/// `R̃(x, y)z`, assembled from the flat connection and the defect `D`:
///
/// `(D_y D_x - D_x D_y + D_{[x,y]})z + ∇_y D_x z - ∇_x D_y z + D_y ∇_x z - D_x ∇_y z`
///
/// (the flat curvature terms cancel identically). Errors with
/// [`Error::SupportOverflow`] when the grid is too small to hold the result
/// without aliasing.
pub fn curvature_op(
    x: &SpectralField,
    y: &SpectralField,
    z: &SpectralField,
    alpha: AlphaParam,
) -> Result<SpectralField> {
    check_pair(x, y)?;
    check_pair(x, z)?;
    check_support(&[x, y, z])?;
    let d = |a: &SpectralField, b: &SpectralField| connection_defect(a, b, alpha);
    let f = flat_covariant;
    let br = bracket(x, y)?;
    let dxz = d(x, z)?;
    let dyz = d(y, z)?;
    let fxz = f(x, z)?;
    let fyz = f(y, z)?;
    let mut r = d(y, &dxz)?;
    r = &r - &d(x, &dyz)?;
    r = &r + &d(&br, z)?;
    r = &r + &f(y, &dxz)?;
    r = &r - &f(x, &dyz)?;
    r = &r + &d(y, &fxz)?;
    r = &r - &d(x, &fyz)?;
    Ok(r)
}

/// `R̃(x, y)z` by literal composition of covariant derivatives; an
/// independent assembly of [`curvature_op`] used for cross-checking.
pub fn curvature_by_composition(
    x: &SpectralField,
    y: &SpectralField,
    z: &SpectralField,
    alpha: AlphaParam,
) -> Result<SpectralField> {
    check_support(&[x, y, z])?;
    let c = |a: &SpectralField, b: &SpectralField| covariant_derivative(a, b, alpha);
    let br = bracket(x, y)?;
    Ok(&(&c(y, &c(x, z)?)? - &c(x, &c(y, z)?)?) + &c(&br, z)?)
}

/// Relative Gram-determinant threshold below which a plane is degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// `K(x, y) = ⟨R̃(x,y)x, y⟩_α / (⟨x,x⟩_α⟨y,y⟩_α - ⟨x,y⟩_α²)`. With this
/// orientation single stream-mode pairs at `α = 0` reproduce the classical
/// non-positive curvature of ideal hydrodynamics.
pub fn sectional_curvature(x: &SpectralField, y: &SpectralField, alpha: AlphaParam) -> Result<f64> {
    check_pair(x, y)?;
    let ip = |a: &SpectralField, b: &SpectralField| inner_product_alpha(a, b, alpha);
    let (xx, yy, xy) = (ip(x, x)?, ip(y, y)?, ip(x, y)?);
    let gram = xx * yy - xy * xy;
    let threshold = DEGENERACY_THRESHOLD * xx * yy;
    if !(gram > threshold) {
        return Err(Error::DegeneratePlane { gram, threshold });
    }
    let r = curvature_op(x, y, x, alpha)?;
    Ok(ip(&r, y)? / gram)
}

/// Closed-form curvature of the plane spanned by the stream modes `cos(k·x)`
/// and `cos(l·x)` of ideal flow on a flat torus of area `s`:
/// `-(|k|² + |l|²) sin²β sin²γ / (4S)`, `β = ∠(k, l)`, `γ = ∠(k + l, k - l)`.
pub fn arnold_closed_form(k: [i64; 2], l: [i64; 2], area: f64) -> Result<f64> {
    if k == [0, 0] || l == [0, 0] {
        return Err(Error::InvalidParameter {
            name: "k",
            reason: "wavevectors must be nonzero".into(),
        });
    }
    if k == l || k == [-l[0], -l[1]] {
        return Err(Error::ParallelWavevectors);
    }
    let f = |v: [i64; 2]| [v[0] as f64, v[1] as f64];
    let (k, l) = (f(k), f(l));
    let dot = |a: [f64; 2], b: [f64; 2]| a[0] * b[0] + a[1] * b[1];
    let cross = |a: [f64; 2], b: [f64; 2]| a[0] * b[1] - a[1] * b[0];
    let sin2 = |a: [f64; 2], b: [f64; 2]| cross(a, b).powi(2) / (dot(a, a) * dot(b, b));
    let s = [k[0] + l[0], k[1] + l[1]];
    let d = [k[0] - l[0], k[1] - l[1]];
    Ok(-(dot(k, k) + dot(l, l)) * sin2(k, l) * sin2(s, d) / (4.0 * area))
}

/// A bracketed sign change `K(α₀ - δ) < 0 < K(α₀ + δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignFlip {
    pub alpha0: f64,
    pub k_below: f64,
    pub k_above: f64,
    pub delta: f64,
}

/// Curvature samples `(α, K)` on `α = 0, 0.01, …, 1` and the first
/// negative-to-positive sign change, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct Alpha0Search {
    pub probes: Vec<(f64, f64)>,
    pub flip: Option<SignFlip>,
}

/// Scans `α ∈ [0, 1]` for a negative-to-positive sign change of the
/// curvature of the plane spanned by the stream modes `k` and `k + eps`,
/// then bisects to an absolute tolerance of `1e-4` (`1e-5` in practice).
pub fn find_alpha0(grid: TorusGrid2D, k: [i64; 2], eps: [i64; 2]) -> Result<Alpha0Search> {
    let l = [k[0] + eps[0], k[1] + eps[1]];
    let x = TrigVectorField::stream_mode(grid, k)?;
    let y = TrigVectorField::stream_mode(grid, l)?;
    let kf = |a: f64| sectional_curvature(x.field(), y.field(), AlphaParam::new(a)?);
    let steps = 100;
    let mut probes = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let a = i as f64 / steps as f64;
        probes.push((a, kf(a)?));
    }
    let Some(w) = probes.windows(2).find(|w| w[0].1 < 0.0 && w[1].1 > 0.0) else {
        return Ok(Alpha0Search { probes, flip: None });
    };
    let (mut lo, mut hi) = (w[0].0, w[1].0);
    while hi - lo > 1e-5 {
        let mid = 0.5 * (lo + hi);
        if kf(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha0 = 0.5 * (lo + hi);
    let delta = 1e-3;
    let flip = SignFlip {
        alpha0,
        k_below: kf((alpha0 - delta).max(0.0))?,
        k_above: kf(alpha0 + delta)?,
        delta,
    };
    Ok(Alpha0Search {
        probes,
        flip: Some(flip),
    })
}
