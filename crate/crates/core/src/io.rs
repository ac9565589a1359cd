//! Binary field dumps and trajectory manifests.
//!
//! Field format `NVF1`: little-endian header (magic `NVF1`, `nx: u64`,
//! `ny: u64`, `lx: f64`, `ly: f64`) followed by row-major complex pairs of
//! 64-bit floats (outer index `ix`, inner `iy`).

use crate::field::SpectralField;
use crate::grid::GridSpec;
use crate::timestep::Trajectory;
use crate::{NvError, Result};
use ndarray::Array2;
use num_complex::Complex64;
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 4] = b"NVF1";

pub fn write_field<W: Write>(w: &mut W, f: &SpectralField) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(f.grid.nx as u64).to_le_bytes())?;
    w.write_all(&(f.grid.ny as u64).to_le_bytes())?;
    w.write_all(&f.grid.lx.to_le_bytes())?;
    w.write_all(&f.grid.ly.to_le_bytes())?;
    for ix in 0..f.grid.nx {
        for iy in 0..f.grid.ny {
            let z = f.coeffs[[ix, iy]];
            w.write_all(&z.re.to_le_bytes())?;
            w.write_all(&z.im.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_field<R: Read>(r: &mut R) -> Result<SpectralField> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(NvError::BadFieldFile(format!(
            "bad magic {:?}, expected NVF1",
            magic
        )));
    }
    let mut b8 = [0u8; 8];
    let mut next_u64 = |r: &mut R| -> Result<u64> {
        r.read_exact(&mut b8)?;
        Ok(u64::from_le_bytes(b8))
    };
    let nx = next_u64(r)? as usize;
    let ny = next_u64(r)? as usize;
    let mut next_f64 = |r: &mut R| -> Result<f64> {
        let mut b = [0u8; 8];
        r.read_exact(&mut b)?;
        Ok(f64::from_le_bytes(b))
    };
    let lx = next_f64(r)?;
    let ly = next_f64(r)?;
    let grid = GridSpec::new(nx, ny, lx, ly)
        .map_err(|e| NvError::BadFieldFile(format!("invalid header grid: {e}")))?;
    let mut coeffs = Array2::<Complex64>::zeros((nx, ny));
    for ix in 0..nx {
        for iy in 0..ny {
            let re = next_f64(r)?;
            let im = next_f64(r)?;
            coeffs[[ix, iy]] = Complex64::new(re, im);
        }
    }
    SpectralField::from_coeffs(grid, coeffs)
}

pub fn save_field(path: &Path, f: &SpectralField) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_field(&mut w, f)
}

pub fn load_field(path: &Path) -> Result<SpectralField> {
    let mut r = std::io::BufReader::new(std::fs::File::open(path)?);
    read_field(&mut r)
}

/// Dump a trajectory as one field file per stored sample plus a plain-text
/// manifest (`key = value` lines) recording the run geometry.
pub fn save_trajectory(dir: &Path, traj: &Trajectory, extra: &[(String, String)]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut manifest = String::new();
    manifest.push_str("format = nvlab-trajectory-v1\n");
    manifest.push_str(&format!("grid.nx = {}\n", traj.grid.nx));
    manifest.push_str(&format!("grid.ny = {}\n", traj.grid.ny));
    manifest.push_str(&format!("grid.lx = {:.17e}\n", traj.grid.lx));
    manifest.push_str(&format!("grid.ly = {:.17e}\n", traj.grid.ly));
    manifest.push_str(&format!("samples = {}\n", traj.states.len()));
    for (k, v) in extra {
        manifest.push_str(&format!("{k} = {v}\n"));
    }
    for (i, (t, f)) in traj.times.iter().zip(&traj.states).enumerate() {
        let name = format!("state_{i:06}.nvf");
        save_field(&dir.join(&name), f)?;
        manifest.push_str(&format!("state.{i}.t = {t:.17e}\n"));
        manifest.push_str(&format!("state.{i}.file = {name}\n"));
    }
    std::fs::write(dir.join("manifest.txt"), manifest)?;
    Ok(())
}
