use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use curve25519_dalek::scalar::Scalar as DalekScalar;
use rand::{CryptoRng, RngCore};

/// Element of the scalar field Z_p, where p is the prime order of the group.
///
/// Signed integers are embedded as `v mod p`, so a negative `v` is stored as
/// `p - |v|`.
#[derive(Clone, Copy, PartialEq, Eq, Default)]
pub struct Scalar(pub(crate) DalekScalar);

impl Scalar {
    pub const ZERO: Scalar = Scalar(DalekScalar::ZERO);
    pub const ONE: Scalar = Scalar(DalekScalar::ONE);
    pub const ENCODED_LEN: usize = 32;

    pub fn from_u64(v: u64) -> Self {
        Scalar(DalekScalar::from(v))
    }

    pub fn from_u128(v: u128) -> Self {
        Scalar(DalekScalar::from(v))
    }

    pub fn from_i64(v: i64) -> Self {
        Self::from_i128(v as i128)
    }

    pub fn from_i128(v: i128) -> Self {
        let mag = Scalar(DalekScalar::from(v.unsigned_abs()));
        if v < 0 {
            -mag
        } else {
            mag
        }
    }

    /// `2^e` for `e < 253`.
    pub fn pow2(e: u32) -> Self {
        assert!(e < 253, "2^{e} exceeds the field");
        let mut bytes = [0u8; 32];
        bytes[(e / 8) as usize] = 1 << (e % 8);
        Scalar(DalekScalar::from_bytes_mod_order(bytes))
    }

    pub fn random<R: RngCore + CryptoRng + ?Sized>(rng: &mut R) -> Self {
        let mut wide = [0u8; 64];
        rng.fill_bytes(&mut wide);
        Scalar(DalekScalar::from_bytes_mod_order_wide(&wide))
    }

    pub fn from_bytes_wide(bytes: &[u8; 64]) -> Self {
        Scalar(DalekScalar::from_bytes_mod_order_wide(bytes))
    }

    /// Canonical 32-byte little-endian encoding.
    pub fn to_bytes(&self) -> [u8; 32] {
        self.0.to_bytes()
    }

    /// Rejects non-canonical encodings (values >= p).
    pub fn from_canonical_bytes(bytes: [u8; 32]) -> Option<Self> {
        Option::from(DalekScalar::from_canonical_bytes(bytes)).map(Scalar)
    }

    pub fn is_zero(&self) -> bool {
        self.0 == DalekScalar::ZERO
    }

    pub fn invert(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Scalar(self.0.invert()))
        }
    }

    pub fn square(&self) -> Self {
        Scalar(self.0 * self.0)
    }

    /// Interprets the element as a signed integer when it lies within
    /// `(-2^127, 2^127)` under the mod-p embedding.
    pub fn to_i128(&self) -> Option<i128> {
        let bytes = self.to_bytes();
        if bytes[16..].iter().all(|&b| b == 0) && bytes[15] & 0x80 == 0 {
            let mut lo = [0u8; 16];
            lo.copy_from_slice(&bytes[..16]);
            return Some(i128::from_le_bytes(lo));
        }
        let neg = (-*self).to_bytes();
        if neg[16..].iter().all(|&b| b == 0) && neg[15] & 0x80 == 0 {
            let mut lo = [0u8; 16];
            lo.copy_from_slice(&neg[..16]);
            return Some(-i128::from_le_bytes(lo));
        }
        None
    }

    /// Interprets the element as an unsigned integer when it is below 2^128.
    pub fn to_u128(&self) -> Option<u128> {
        let bytes = self.to_bytes();
        if bytes[16..].iter().all(|&b| b == 0) {
            let mut lo = [0u8; 16];
            lo.copy_from_slice(&bytes[..16]);
            Some(u128::from_le_bytes(lo))
        } else {
            None
        }
    }

    /// Position of the highest set bit plus one (0 for zero).
    pub fn bit_len(&self) -> u32 {
        let bytes = self.to_bytes();
        for (i, &b) in bytes.iter().enumerate().rev() {
            if b != 0 {
                return i as u32 * 8 + (8 - b.leading_zeros());
            }
        }
        0
    }

    /// `[1, x, x^2, ..., x^(n-1)]`
    pub fn powers(x: Scalar, n: usize) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(n);
        let mut cur = Scalar::ONE;
        for _ in 0..n {
            out.push(cur);
            cur *= x;
        }
        out
    }

    /// Inverts every element with a single field inversion. Panics on zero.
    pub fn batch_invert(values: &mut [Scalar]) {
        let mut inner: Vec<DalekScalar> = values.iter().map(|s| s.0).collect();
        assert!(inner.iter().all(|s| *s != DalekScalar::ZERO), "zero in batch inversion");
        DalekScalar::batch_invert(&mut inner);
        for (v, s) in values.iter_mut().zip(inner) {
            v.0 = s;
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_i128() {
            Some(v) => write!(f, "Scalar({v})"),
            None => {
                write!(f, "Scalar(0x")?;
                for b in self.to_bytes().iter().rev() {
                    write!(f, "{b:02x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl From<u64> for Scalar {
    fn from(v: u64) -> Self {
        Scalar::from_u64(v)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_i64(v)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 + rhs.0)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 - rhs.0)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 * rhs.0)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        self.0 -= rhs.0;
    }
}

impl MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        self.0 *= rhs.0;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::ZERO, |a, b| a + b)
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::ZERO, |a, b| a + *b)
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::ONE, |a, b| a * b)
    }
}

/// Inner product over Z_p.
pub fn inner_product(a: &[Scalar], b: &[Scalar]) -> Scalar {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| *x * *y).sum()
}
