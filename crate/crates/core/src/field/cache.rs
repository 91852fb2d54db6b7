//! Binary cache of the antilog and Zech tables.
//!
//! Layout, all integers little-endian `u32`:
//!
//! ```text
//! "FF6C" | version | p | f | c_0 .. c_{6f-1} | antilog[0..q^6-1] | zech[0..q^6-1]
//! ```
//!
//! Zero is encoded as `0xFFFFFFFF` in the Zech table.

use std::fs;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use super::{build_field_with_budget, check_size, FieldCtx, FieldParams};
use crate::error::{Error, Result};

pub const CACHE_MAGIC: &[u8; 4] = b"FF6C";
pub const CACHE_VERSION: u32 = 1;

fn io_err(e: std::io::Error) -> Error {
    Error::Cache(e.to_string())
}

/// Cache file name for `(p, f)` inside `dir`.
pub fn cache_path(dir: &Path, p: u64, f: u32) -> PathBuf {
    dir.join(format!("ff6c_p{p}_f{f}.bin"))
}

pub fn write_cache(ctx: &FieldCtx, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io_err)?;
    }
    let tmp = path.with_extension("tmp");
    {
        let mut w = BufWriter::new(fs::File::create(&tmp).map_err(io_err)?);
        let params = ctx.params();
        w.write_all(CACHE_MAGIC).map_err(io_err)?;
        let header = [CACHE_VERSION, params.p as u32, params.f];
        for word in header.iter().chain(ctx.polynomial()) {
            w.write_all(&word.to_le_bytes()).map_err(io_err)?;
        }
        for word in ctx.antilog_table().iter().chain(ctx.zech_table()) {
            w.write_all(&word.to_le_bytes()).map_err(io_err)?;
        }
        w.flush().map_err(io_err)?;
    }
    fs::rename(&tmp, path).map_err(io_err)
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf).map_err(io_err)?;
    Ok(u32::from_le_bytes(buf))
}

/// Loads a cached context without repeating the polynomial search or the
/// power walk. The stored Zech table must agree with the one recomputed from
/// the antilog table, and the antilog table must satisfy the companion
/// recurrence on a sample of exponents.
pub fn read_cache(path: &Path) -> Result<FieldCtx> {
    let mut r = BufReader::new(fs::File::open(path).map_err(io_err)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(io_err)?;
    if &magic != CACHE_MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    let version = read_u32(&mut r)?;
    if version != CACHE_VERSION {
        return Err(Error::Cache(format!("unsupported version {version}")));
    }
    let p = read_u32(&mut r)? as u64;
    let f = read_u32(&mut r)?;
    check_size(p, f, u64::MAX)?;
    let poly = (0..6 * f)
        .map(|_| read_u32(&mut r))
        .collect::<Result<Vec<_>>>()?;
    if poly.iter().any(|&c| c as u64 >= p) {
        return Err(Error::Cache("polynomial coefficient out of range".into()));
    }
    let order = FieldParams::new(p, f).order() as usize;
    let mut words = vec![0u8; 8 * order];
    r.read_exact(&mut words).map_err(io_err)?;
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing).map_err(io_err)? != 0 {
        return Err(Error::Cache("trailing bytes".into()));
    }
    let stored: Vec<u32> = words
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let params = FieldParams::new(p, f);
    let mut stored = stored;
    let zech = stored.split_off(order);
    let ctx = FieldCtx::from_antilog(params, poly, stored)?;
    if ctx.zech_table() != &zech[..] {
        return Err(Error::Cache(
            "Zech table disagrees with antilog table".into(),
        ));
    }
    let step = (order / 1024).max(1);
    for e in (0..order - 1).step_by(step) {
        let x = super::FElem::from_exp(e as u32);
        if ctx.mul_by_x_vector(ctx.to_vector(x)) != ctx.to_vector(ctx.mul(x, ctx.gamma())) {
            return Err(Error::Cache(
                "antilog table disagrees with polynomial".into(),
            ));
        }
    }
    Ok(ctx)
}

/// Reads the cache for `(p, f)` from `dir` if present and valid, otherwise
/// builds the field and writes the cache.
pub fn load_or_build(dir: &Path, p: u64, f: u32, budget: u64) -> Result<FieldCtx> {
    check_size(p, f, budget)?;
    let path = cache_path(dir, p, f);
    if path.exists() {
        if let Ok(ctx) = read_cache(&path) {
            return Ok(ctx);
        }
    }
    let ctx = build_field_with_budget(p, f, budget)?;
    write_cache(&ctx, &path)?;
    Ok(ctx)
}
