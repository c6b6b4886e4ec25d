//! Binary checkpoints of spectral states.
//!
//! Layout, all multi-byte values little-endian:
//!
//! | bytes | content |
//! |---|---|
//! | 4 | magic `ALFL` |
//! | 4 | version `u32` = 1 |
//! | 16 | experiment tag, ASCII, NUL padded |
//! | 12 | `nx`, `ny`, `ncomp` as `u32` |
//! | 56 | `lx`, `ly`, `α`, `ν`, `t`, mean flow `u`, `v` as `f64` |
//! | 16·ncomp·nx·ny | coefficients, row-major over `(kx, ky)` in FFT order, re/im interleaved |

use alpha_fluids_core::euler::VorticityState;
use alpha_fluids_core::{AlphaParam, SpectralField, TorusGrid2D};
use num_complex::Complex64;
use std::io::{Read, Write};
use std::path::Path;
use thiserror::Error;

pub const MAGIC: &[u8; 4] = b"ALFL";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 16 + 12 + 56;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("not a checkpoint: bad magic {0:?}")]
    BadMagic([u8; 4]),
    #[error("unsupported checkpoint version {0} (expected {VERSION})")]
    Version(u32),
    #[error("truncated checkpoint: {0}")]
    Truncated(String),
    #[error("invalid checkpoint contents: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub tag: String,
    pub field: SpectralField,
    pub alpha: f64,
    pub nu: f64,
    pub t: f64,
    pub mean_flow: [f64; 2],
}

impl Checkpoint {
    pub fn from_state(tag: &str, state: &VorticityState, nu: f64) -> Self {
        Self {
            tag: tag.to_string(),
            field: state.q().clone(),
            alpha: state.alpha().value(),
            nu,
            t: state.t(),
            mean_flow: state.mean_flow(),
        }
    }

    pub fn to_state(&self) -> Result<VorticityState, CheckpointError> {
        let alpha = AlphaParam::new(self.alpha).map_err(|e| CheckpointError::Invalid(e.to_string()))?;
        Ok(VorticityState::new(self.field.clone(), alpha, self.mean_flow)
            .map_err(|e| CheckpointError::Invalid(e.to_string()))?
            .with_time(self.t))
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, CheckpointError> {
        let g = self.field.grid();
        if self.tag.len() > 16 || !self.tag.is_ascii() {
            return Err(CheckpointError::Invalid(format!(
                "tag `{}` is not ≤16 ASCII bytes",
                self.tag
            )));
        }
        let ncomp = self.field.components().len();
        let mut out = Vec::with_capacity(HEADER_LEN + 16 * ncomp * g.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        let mut tag = [0u8; 16];
        tag[..self.tag.len()].copy_from_slice(self.tag.as_bytes());
        out.extend_from_slice(&tag);
        for d in [g.nx(), g.ny(), ncomp] {
            out.extend_from_slice(&(d as u32).to_le_bytes());
        }
        for v in [
            g.lx(),
            g.ly(),
            self.alpha,
            self.nu,
            self.t,
            self.mean_flow[0],
            self.mean_flow[1],
        ] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for comp in self.field.components() {
            for z in comp {
                out.extend_from_slice(&z.re.to_le_bytes());
                out.extend_from_slice(&z.im.to_le_bytes());
            }
        }
        Ok(out)
    }

    pub fn from_bytes(b: &[u8]) -> Result<Self, CheckpointError> {
        if b.len() < 8 {
            return Err(CheckpointError::Truncated(format!("{} bytes", b.len())));
        }
        let magic: [u8; 4] = b[0..4].try_into().expect("4 bytes");
        if &magic != MAGIC {
            return Err(CheckpointError::BadMagic(magic));
        }
        let version = u32::from_le_bytes(b[4..8].try_into().expect("4 bytes"));
        if version != VERSION {
            return Err(CheckpointError::Version(version));
        }
        if b.len() < HEADER_LEN {
            return Err(CheckpointError::Truncated(format!(
                "header needs {HEADER_LEN} bytes, got {}",
                b.len()
            )));
        }
        let tag_bytes = &b[8..24];
        let end = tag_bytes.iter().position(|c| *c == 0).unwrap_or(16);
        let tag = std::str::from_utf8(&tag_bytes[..end])
            .map_err(|_| CheckpointError::Invalid("tag is not ASCII".into()))?
            .to_string();
        let u = |o: usize| u32::from_le_bytes(b[o..o + 4].try_into().expect("4 bytes")) as usize;
        let f = |o: usize| f64::from_le_bytes(b[o..o + 8].try_into().expect("8 bytes"));
        let (nx, ny, ncomp) = (u(24), u(28), u(32));
        let vals: Vec<f64> = (0..7).map(|i| f(36 + 8 * i)).collect();
        let need = HEADER_LEN + 16 * ncomp * nx * ny;
        if b.len() != need {
            let msg = format!("payload for {ncomp}×{nx}×{ny} needs {need} bytes, file has {}", b.len());
            return Err(if b.len() < need {
                CheckpointError::Truncated(msg)
            } else {
                CheckpointError::Invalid(msg)
            });
        }
        let grid = TorusGrid2D::new(nx, ny, vals[0], vals[1]).map_err(|e| CheckpointError::Invalid(e.to_string()))?;
        let mut comps = Vec::with_capacity(ncomp);
        let mut o = HEADER_LEN;
        for _ in 0..ncomp {
            let mut c = Vec::with_capacity(nx * ny);
            for _ in 0..nx * ny {
                c.push(Complex64::new(f(o), f(o + 8)));
                o += 16;
            }
            comps.push(c);
        }
        let field = SpectralField::from_components(grid, comps).map_err(|e| CheckpointError::Invalid(e.to_string()))?;
        Ok(Self {
            tag,
            field,
            alpha: vals[2],
            nu: vals[3],
            t: vals[4],
            mean_flow: [vals[5], vals[6]],
        })
    }

    pub fn write(&self, path: &Path) -> Result<(), CheckpointError> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(&self.to_bytes()?)?;
        f.sync_all()?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self, CheckpointError> {
        let mut b = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut b)?;
        Self::from_bytes(&b)
    }
}
