use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use curve25519_dalek::ristretto::{CompressedRistretto, RistrettoPoint};
use curve25519_dalek::traits::Identity;

use super::ops;
use super::Scalar;

/// Element of the prime-order Ristretto group.
///
/// The group law is written additively: `a + b` is the product `a·b` and
/// `p * s` is the exponentiation `p^s`.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Point(pub(crate) RistrettoPoint);

impl Point {
    pub const ENCODED_LEN: usize = 32;

    pub fn identity() -> Self {
        Point(RistrettoPoint::identity())
    }

    pub fn is_identity(&self) -> bool {
        self.0 == RistrettoPoint::identity()
    }

    /// Canonical 32-byte compressed encoding; the identity encodes as all zeros.
    pub fn to_bytes(&self) -> [u8; 32] {
        self.0.compress().to_bytes()
    }

    pub fn from_bytes(bytes: [u8; 32]) -> Option<Self> {
        CompressedRistretto(bytes).decompress().map(Point)
    }

    pub fn double(&self) -> Self {
        *self + *self
    }

    /// Compressed encodings of `2·p` for every input, sharing one field inversion.
    pub(crate) fn double_and_compress_batch(points: &[Point]) -> Vec<[u8; 32]> {
        let inner: Vec<RistrettoPoint> = points.iter().map(|p| p.0).collect();
        RistrettoPoint::double_and_compress_batch(&inner)
            .into_iter()
            .map(|c| c.to_bytes())
            .collect()
    }
}

impl Default for Point {
    fn default() -> Self {
        Point::identity()
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point(")?;
        for b in &self.to_bytes()[..8] {
            write!(f, "{b:02x}")?;
        }
        write!(f, "..)")
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        ops::record_add();
        Point(self.0 + rhs.0)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        ops::record_add();
        Point(self.0 - rhs.0)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point(-self.0)
    }
}

impl AddAssign for Point {
    fn add_assign(&mut self, rhs: Point) {
        *self = *self + rhs;
    }
}

impl SubAssign for Point {
    fn sub_assign(&mut self, rhs: Point) {
        *self = *self - rhs;
    }
}

impl Mul<Scalar> for Point {
    type Output = Point;
    fn mul(self, rhs: Scalar) -> Point {
        ops::record_mul();
        Point(self.0 * rhs.0)
    }
}

impl Mul<&Scalar> for &Point {
    type Output = Point;
    fn mul(self, rhs: &Scalar) -> Point {
        *self * *rhs
    }
}

impl Sum for Point {
    fn sum<I: Iterator<Item = Point>>(iter: I) -> Point {
        iter.fold(Point::identity(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Point> for Point {
    fn sum<I: Iterator<Item = &'a Point>>(iter: I) -> Point {
        iter.fold(Point::identity(), |a, b| a + *b)
    }
}
