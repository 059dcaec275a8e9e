//! The `LPF1` binary field format.
//!
//! Layout, all integers `u32` and all floats `f64`, little-endian:
//! magic `LPF1`, version, dim, ncomp, `dim` axis sizes, lattice denominator,
//! representation flag (0 spectral, 1 physical), then the payload with
//! components outermost and samples or frequencies row-major in DFT index
//! order. Spectral entries are stored as `re, im` pairs.

use std::fs::File;
use std::io::{BufReader, BufWriter, ErrorKind, Read, Write};
use std::path::Path;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{Field, FieldData, Grid, Representation};

pub const MAGIC: [u8; 4] = *b"LPF1";
pub const VERSION: u32 = 1;

const MAX_COMPONENTS: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldFileHeader {
    pub version: u32,
    pub dim: usize,
    pub ncomp: usize,
    pub sizes: Vec<usize>,
    pub lattice_denominator: u32,
    pub representation: Representation,
}

impl FieldFileHeader {
    pub fn of(f: &Field) -> Self {
        Self {
            version: VERSION,
            dim: f.grid().dim(),
            ncomp: f.ncomp(),
            sizes: f.grid().sizes().to_vec(),
            lattice_denominator: f.grid().lattice_denominator(),
            representation: f.representation(),
        }
    }

    /// Payload size in bytes.
    pub fn payload_len(&self) -> usize {
        let per = match self.representation {
            Representation::Spectral => 2,
            Representation::Physical => 1,
        };
        self.ncomp * self.sizes.iter().product::<usize>() * per * 8
    }
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn to_u32(v: usize, what: &str) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::Format(format!("{what} = {v} does not fit in 32 bits")))
}

pub fn write_field<W: Write>(f: &Field, mut sink: W) -> Result<()> {
    let h = FieldFileHeader::of(f);
    let mut head = Vec::with_capacity(32);
    head.extend_from_slice(&MAGIC);
    put_u32(&mut head, h.version);
    put_u32(&mut head, to_u32(h.dim, "dim")?);
    put_u32(&mut head, to_u32(h.ncomp, "ncomp")?);
    for &n in &h.sizes {
        put_u32(&mut head, to_u32(n, "axis size")?);
    }
    put_u32(&mut head, h.lattice_denominator);
    put_u32(
        &mut head,
        match h.representation {
            Representation::Spectral => 0,
            Representation::Physical => 1,
        },
    );
    sink.write_all(&head)?;
    let mut payload = Vec::with_capacity(h.payload_len());
    match f.data() {
        FieldData::Spectral(comps) => {
            for z in comps.iter().flatten() {
                payload.extend_from_slice(&z.re.to_le_bytes());
                payload.extend_from_slice(&z.im.to_le_bytes());
            }
        }
        FieldData::Physical(comps) => {
            for x in comps.iter().flatten() {
                payload.extend_from_slice(&x.to_le_bytes());
            }
        }
    }
    sink.write_all(&payload)?;
    sink.flush()?;
    Ok(())
}

fn read_exact<R: Read>(src: &mut R, buf: &mut [u8], what: &str) -> Result<()> {
    src.read_exact(buf).map_err(|e| match e.kind() {
        ErrorKind::UnexpectedEof => Error::Format(format!("truncated {what}")),
        _ => Error::Io(e),
    })
}

fn get_u32<R: Read>(src: &mut R, what: &str) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact(src, &mut b, what)?;
    Ok(u32::from_le_bytes(b))
}

pub fn read_header<R: Read>(src: &mut R) -> Result<FieldFileHeader> {
    let mut magic = [0u8; 4];
    read_exact(src, &mut magic, "magic")?;
    if magic != MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let version = get_u32(src, "version")?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let dim = get_u32(src, "dim")? as usize;
    if !(2..=3).contains(&dim) {
        return Err(Error::Format(format!("dimension {dim} is not 2 or 3")));
    }
    let ncomp = get_u32(src, "ncomp")? as usize;
    if ncomp == 0 || ncomp > MAX_COMPONENTS {
        return Err(Error::Format(format!(
            "component count {ncomp} outside 1..={MAX_COMPONENTS}"
        )));
    }
    let sizes = (0..dim)
        .map(|_| get_u32(src, "axis size").map(|n| n as usize))
        .collect::<Result<Vec<_>>>()?;
    let lattice_denominator = get_u32(src, "lattice denominator")?;
    let representation = match get_u32(src, "representation flag")? {
        0 => Representation::Spectral,
        1 => Representation::Physical,
        other => return Err(Error::Format(format!("unknown representation flag {other}"))),
    };
    Ok(FieldFileHeader {
        version,
        dim,
        ncomp,
        sizes,
        lattice_denominator,
        representation,
    })
}

pub fn read_field<R: Read>(mut source: R) -> Result<Field> {
    let h = read_header(&mut source)?;
    let grid = Grid::new(h.dim, &h.sizes, h.lattice_denominator).map_err(|e| Error::Format(e.to_string()))?;
    let mut payload = vec![0u8; h.payload_len()];
    read_exact(&mut source, &mut payload, "payload")?;
    let mut extra = [0u8; 1];
    if source.read(&mut extra)? != 0 {
        return Err(Error::Format("trailing bytes after payload".into()));
    }
    let floats: Vec<f64> = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    let n = grid.len();
    match h.representation {
        Representation::Spectral => {
            let comps = floats
                .chunks_exact(2 * n)
                .map(|c| c.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect())
                .collect();
            Field::from_spectral(grid, comps)
        }
        Representation::Physical => Field::from_physical(grid, floats.chunks_exact(n).map(<[f64]>::to_vec).collect()),
    }
}

pub fn save_field(f: &Field, path: impl AsRef<Path>) -> Result<()> {
    write_field(f, BufWriter::new(File::create(path)?))
}

pub fn load_field(path: impl AsRef<Path>) -> Result<Field> {
    read_field(BufReader::new(File::open(path)?))
}
