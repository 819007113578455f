//! Fiat–Shamir transcripts.
//!
//! Each protocol starts from its own ASCII context tag; every appended item is
//! length-prefixed so distinct input sequences never hash identically.

use sha2::{Digest, Sha512};

use crate::group::{Point, Scalar};

#[derive(Clone)]
pub struct Transcript {
    hasher: Sha512,
}

impl Transcript {
    pub fn new(context: &'static str) -> Self {
        let mut t = Transcript {
            hasher: Sha512::new(),
        };
        t.append_bytes(b"vagg/fs/v1");
        t.append_bytes(context.as_bytes());
        t
    }

    pub fn append_bytes(&mut self, bytes: &[u8]) {
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    pub fn append_u64(&mut self, v: u64) {
        self.append_bytes(&v.to_le_bytes());
    }

    pub fn append_point(&mut self, p: &Point) {
        self.append_bytes(&p.to_bytes());
    }

    pub fn append_points(&mut self, ps: &[Point]) {
        self.append_u64(ps.len() as u64);
        for p in ps {
            self.append_point(p);
        }
    }

    pub fn append_scalar(&mut self, s: &Scalar) {
        self.append_bytes(&s.to_bytes());
    }

    pub fn append_scalars(&mut self, ss: &[Scalar]) {
        self.append_u64(ss.len() as u64);
        for s in ss {
            self.append_scalar(s);
        }
    }

    /// Derives a challenge and folds it back into the state, so later
    /// challenges depend on earlier ones.
    pub fn challenge(&mut self, label: &'static str) -> Scalar {
        self.append_bytes(label.as_bytes());
        let out: [u8; 64] = self.hasher.clone().finalize().into();
        let c = Scalar::from_bytes_wide(&out);
        self.append_scalar(&c);
        c
    }
}
