//! Length-prefixed canonical encodings shared by bundles, proofs and messages.

use crate::error::{Error, Result};
use crate::group::{Point, Scalar};

#[derive(Default)]
pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn u8(&mut self, v: u8) -> &mut Self {
        self.buf.push(v);
        self
    }

    pub fn u32(&mut self, v: u32) -> &mut Self {
        self.buf.extend_from_slice(&v.to_le_bytes());
        self
    }

    pub fn u64(&mut self, v: u64) -> &mut Self {
        self.buf.extend_from_slice(&v.to_le_bytes());
        self
    }

    pub fn bytes(&mut self, b: &[u8]) -> &mut Self {
        self.u32(b.len() as u32);
        self.buf.extend_from_slice(b);
        self
    }

    pub fn point(&mut self, p: &Point) -> &mut Self {
        self.buf.extend_from_slice(&p.to_bytes());
        self
    }

    pub fn scalar(&mut self, s: &Scalar) -> &mut Self {
        self.buf.extend_from_slice(&s.to_bytes());
        self
    }

    pub fn points(&mut self, ps: &[Point]) -> &mut Self {
        self.u32(ps.len() as u32);
        ps.iter().for_each(|p| {
            self.point(p);
        });
        self
    }

    pub fn scalars(&mut self, ss: &[Scalar]) -> &mut Self {
        self.u32(ss.len() as u32);
        ss.iter().for_each(|s| {
            self.scalar(s);
        });
        self
    }

    pub fn finish(self) -> Vec<u8> {
        self.buf
    }
}

pub struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Reader { buf }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.buf.len() < n {
            return Err(Error::Decode("unexpected end of input".into()));
        }
        let (head, tail) = self.buf.split_at(n);
        self.buf = tail;
        Ok(head)
    }

    pub fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    pub fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    pub fn bytes(&mut self) -> Result<&'a [u8]> {
        let n = self.u32()? as usize;
        self.take(n)
    }

    pub fn point(&mut self) -> Result<Point> {
        let b: [u8; 32] = self.take(32)?.try_into().expect("32 bytes");
        Point::from_bytes(b).ok_or_else(|| Error::Decode("invalid point encoding".into()))
    }

    pub fn scalar(&mut self) -> Result<Scalar> {
        let b: [u8; 32] = self.take(32)?.try_into().expect("32 bytes");
        Scalar::from_canonical_bytes(b)
            .ok_or_else(|| Error::Decode("non-canonical scalar".into()))
    }

    fn len(&mut self, elem: usize) -> Result<usize> {
        let n = self.u32()? as usize;
        if n.saturating_mul(elem) > self.buf.len() {
            return Err(Error::Decode("length prefix exceeds input".into()));
        }
        Ok(n)
    }

    pub fn points(&mut self) -> Result<Vec<Point>> {
        let n = self.len(32)?;
        (0..n).map(|_| self.point()).collect()
    }

    pub fn scalars(&mut self) -> Result<Vec<Scalar>> {
        let n = self.len(32)?;
        (0..n).map(|_| self.scalar()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    /// Errors unless the whole input was consumed.
    pub fn finish(self) -> Result<()> {
        if self.buf.is_empty() {
            Ok(())
        } else {
            Err(Error::Decode(format!("{} trailing bytes", self.buf.len())))
        }
    }
}
