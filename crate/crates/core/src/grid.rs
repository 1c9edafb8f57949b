//! Little-endian binary block for sampled grids.
//!
//! Layout: magic `EXKG`, `u32` version (1), `u32` dtype (1 = complex128 as
//! interleaved re/im `f64`, 2 = `f64`), `u32` ndim, `ndim` x `u64` dims, then
//! the values in row-major order.

use std::io::{Cursor, Read};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_complex::Complex64;

use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"EXKG";
const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub enum GridData {
    Complex(Vec<Complex64>),
    Real(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridBlock {
    pub dims: Vec<u64>,
    pub data: GridData,
}

impl GridBlock {
    pub fn complex(dims: Vec<u64>, values: Vec<Complex64>) -> Result<Self> {
        let block = GridBlock { dims, data: GridData::Complex(values) };
        block.check_len()?;
        Ok(block)
    }

    pub fn real(dims: Vec<u64>, values: Vec<f64>) -> Result<Self> {
        let block = GridBlock { dims, data: GridData::Real(values) };
        block.check_len()?;
        Ok(block)
    }

    pub fn len(&self) -> usize {
        match &self.data {
            GridData::Complex(v) => v.len(),
            GridData::Real(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn check_len(&self) -> Result<()> {
        let expect = self.dims.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d));
        if expect != Some(self.len() as u64) {
            return Err(Error::Data(format!("grid dims {:?} do not match {} values", self.dims, self.len())));
        }
        Ok(())
    }

    /// Values as complex numbers; real grids get zero imaginary parts.
    pub fn complex_values(&self) -> Vec<Complex64> {
        match &self.data {
            GridData::Complex(v) => v.clone(),
            GridData::Real(v) => v.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        let dtype = match self.data {
            GridData::Complex(_) => 1,
            GridData::Real(_) => 2,
        };
        for v in [VERSION, dtype, self.dims.len() as u32] {
            out.write_u32::<LittleEndian>(v).expect("vec write");
        }
        for &d in &self.dims {
            out.write_u64::<LittleEndian>(d).expect("vec write");
        }
        match &self.data {
            GridData::Complex(v) => {
                for z in v {
                    out.write_f64::<LittleEndian>(z.re).expect("vec write");
                    out.write_f64::<LittleEndian>(z.im).expect("vec write");
                }
            }
            GridData::Real(v) => {
                for &x in v {
                    out.write_f64::<LittleEndian>(x).expect("vec write");
                }
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let truncated = |_| Error::Data("grid block is truncated".into());
        let mut r = Cursor::new(bytes);
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic).map_err(truncated)?;
        if &magic != MAGIC {
            return Err(Error::Data("not an EXKG grid block".into()));
        }
        let version = r.read_u32::<LittleEndian>().map_err(truncated)?;
        if version != VERSION {
            return Err(Error::Data(format!("unsupported grid block version {version}")));
        }
        let dtype = r.read_u32::<LittleEndian>().map_err(truncated)?;
        let ndim = r.read_u32::<LittleEndian>().map_err(truncated)?;
        let dims = (0..ndim).map(|_| r.read_u64::<LittleEndian>().map_err(truncated)).collect::<Result<Vec<_>>>()?;
        let count = dims.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d)).ok_or_else(|| Error::Data("grid too large".into()))?;
        let width = if dtype == 1 { 16 } else { 8 };
        let remaining = (bytes.len() as u64).saturating_sub(r.position());
        if count.checked_mul(width) != Some(remaining) {
            return Err(Error::Data(format!("grid block holds {remaining} data bytes, dims need {count} values")));
        }
        let mut read = || r.read_f64::<LittleEndian>().map_err(truncated);
        let data = match dtype {
            1 => GridData::Complex((0..count).map(|_| Ok(Complex64::new(read()?, read()?))).collect::<Result<_>>()?),
            2 => GridData::Real((0..count).map(|_| read()).collect::<Result<_>>()?),
            other => return Err(Error::Data(format!("unknown grid dtype {other}"))),
        };
        Ok(GridBlock { dims, data })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = GridBlock::complex(vec![2, 2], (0..4).map(|i| Complex64::new(i as f64, -(i as f64))).collect()).unwrap();
        let bytes = g.to_bytes();
        assert_eq!(&bytes[..4], b"EXKG");
        assert_eq!(bytes.len(), 4 + 12 + 16 + 64);
        assert_eq!(GridBlock::from_bytes(&bytes).unwrap(), g);
        let r = GridBlock::real(vec![3], vec![1.0, 2.0, 3.5]).unwrap();
        assert_eq!(GridBlock::from_bytes(&r.to_bytes()).unwrap(), r);
        assert!(GridBlock::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        assert!(GridBlock::real(vec![2], vec![1.0]).is_err());
    }
}
