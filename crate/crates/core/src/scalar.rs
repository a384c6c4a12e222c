//! Scalar abstraction for the numeric parts of the toolkit.
//!
//! Relatedness, overlap and correlation code is written against [`Scalar`]
//! so the same routines run in `f32` (compact indices) or `f64` (reports and
//! oracles). Set-level quantities that must be exact are expressed as
//! [`num_rational::Ratio`] and converted at the edge.

use std::fmt::{Debug, Display};
use std::io::{self, Read, Write};
use std::iter::Sum;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, ToPrimitive};

/// floating point: f32 or f64
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + for<'a> Sum<&'a Self> + Debug + Display + Default + Send + Sync + 'static
{
    /// Width in bytes of the on-disk little-endian encoding.
    const WIDTH: u8;

    fn write_le<W: Write>(self, w: &mut W) -> io::Result<()>;
    fn read_le<R: Read>(r: &mut R) -> io::Result<Self>;

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize fits every float type")
    }

    fn from_ratio(r: Ratio<usize>) -> Self {
        Self::from_usize_lossy(*r.numer()) / Self::from_usize_lossy(*r.denom())
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    const WIDTH: u8 = 4;

    fn write_le<W: Write>(self, w: &mut W) -> io::Result<()> {
        w.write_f32::<LittleEndian>(self)
    }

    fn read_le<R: Read>(r: &mut R) -> io::Result<Self> {
        r.read_f32::<LittleEndian>()
    }
}

impl Scalar for f64 {
    const WIDTH: u8 = 8;

    fn write_le<W: Write>(self, w: &mut W) -> io::Result<()> {
        w.write_f64::<LittleEndian>(self)
    }

    fn read_le<R: Read>(r: &mut R) -> io::Result<Self> {
        r.read_f64::<LittleEndian>()
    }
}
