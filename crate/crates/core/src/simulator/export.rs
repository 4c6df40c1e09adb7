//! Trajectory export as CSV triplets or compact binary frames.
//!
//! Binary layout, all little-endian:
//! `b"MHTRAJ01"`, `u32 n_t`, `u32 n_x`, then `n_x` node positions,
//! `n_t` times, the `n_t × n_x` prey field and the `n_t × n_x` predator
//! field, each as row-major `f64`.

use std::io::{self, Read, Write};

use super::Trajectory;
use crate::report::sig12;

pub const BINARY_MAGIC: &[u8; 8] = b"MHTRAJ01";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    U,
    V,
}

impl Field {
    pub fn name(&self) -> &'static str {
        match self {
            Field::U => "u",
            Field::V => "v",
        }
    }
}

/// Writes `t,x,<field>` rows for every snapshot and node.
pub fn write_csv<W: Write>(traj: &Trajectory, field: Field, mut w: W) -> io::Result<()> {
    writeln!(w, "t,x,{}", field.name())?;
    let data = match field {
        Field::U => &traj.u,
        Field::V => &traj.v,
    };
    for (t, row) in traj.times.iter().zip(data) {
        let ts = sig12(*t);
        for (x, val) in traj.x.iter().zip(row) {
            writeln!(w, "{ts},{},{}", sig12(*x), sig12(*val))?;
        }
    }
    Ok(())
}

/// Frames read back from the binary format.
#[derive(Debug, Clone, PartialEq)]
pub struct Frames {
    pub x: Vec<f64>,
    pub times: Vec<f64>,
    pub u: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
}

pub fn write_binary<W: Write>(traj: &Trajectory, mut w: W) -> io::Result<()> {
    let n_t = u32::try_from(traj.times.len()).map_err(|_| io::Error::other("too many frames"))?;
    let n_x = u32::try_from(traj.x.len()).map_err(|_| io::Error::other("too many nodes"))?;
    w.write_all(BINARY_MAGIC)?;
    w.write_all(&n_t.to_le_bytes())?;
    w.write_all(&n_x.to_le_bytes())?;
    let mut put = |xs: &[f64]| -> io::Result<()> {
        for x in xs {
            w.write_all(&x.to_le_bytes())?;
        }
        Ok(())
    };
    put(&traj.x)?;
    put(&traj.times)?;
    for row in &traj.u {
        put(row)?;
    }
    for row in &traj.v {
        put(row)?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut r: R) -> io::Result<Frames> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != BINARY_MAGIC {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            "bad trajectory magic",
        ));
    }
    let mut word = [0u8; 4];
    r.read_exact(&mut word)?;
    let n_t = u32::from_le_bytes(word) as usize;
    r.read_exact(&mut word)?;
    let n_x = u32::from_le_bytes(word) as usize;
    let mut take = |n: usize| -> io::Result<Vec<f64>> {
        let mut buf = vec![0u8; n * 8];
        r.read_exact(&mut buf)?;
        Ok(buf
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    };
    let x = take(n_x)?;
    let times = take(n_t)?;
    let u = (0..n_t).map(|_| take(n_x)).collect::<io::Result<_>>()?;
    let v = (0..n_t).map(|_| take(n_x)).collect::<io::Result<_>>()?;
    Ok(Frames { x, times, u, v })
}
