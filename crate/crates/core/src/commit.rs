//! Pedersen vector commitments with a single per-client blind.

use crate::error::{Error, Result};
use crate::group::{multiexp, multiexp_small, GeneratorSet, Point, Scalar};
use crate::protocol::ClientId;
use crate::vsss::CheckString;
use crate::wire::{Reader, Writer};

/// Fixed-point update coordinates as signed integers.
pub type UpdateVector = Vec<i64>;

/// A blind share sealed for one recipient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncryptedShare {
    pub to: ClientId,
    pub ciphertext: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommitmentBundle {
    pub y: Vec<Point>,
    pub z: Point,
    pub shares: Vec<EncryptedShare>,
    pub check_string: CheckString,
}

impl CommitmentBundle {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.points(&self.y).point(&self.z).u32(self.shares.len() as u32);
        for s in &self.shares {
            w.u32(s.to).bytes(&s.ciphertext);
        }
        w.points(&self.check_string.points);
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let y = r.points()?;
        let z = r.point()?;
        let n = r.u32()? as usize;
        let shares = (0..n)
            .map(|_| {
                Ok(EncryptedShare {
                    to: r.u32()?,
                    ciphertext: r.bytes()?.to_vec(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let points = r.points()?;
        r.finish()?;
        if points.is_empty() {
            return Err(Error::Decode("empty check string".into()));
        }
        Ok(CommitmentBundle {
            y,
            z,
            shares,
            check_string: CheckString { points },
        })
    }
}

/// `y_l = g^{u_l} w_l^r` for every coordinate, and `z = g^r`.
pub fn commit_update(u: &[i64], r: &Scalar, gens: &GeneratorSet) -> Result<(Vec<Point>, Point)> {
    if u.len() != gens.w.len() {
        return Err(Error::LengthMismatch {
            expected: gens.w.len(),
            found: u.len(),
        });
    }
    let y = u
        .iter()
        .zip(&gens.w)
        .map(|(&ul, wl)| {
            multiexp_small(&[gens.g], &[ul]).expect("single term") + *wl * *r
        })
        .collect();
    Ok((y, gens.g * *r))
}

/// Coordinate-wise product of commitment vectors; the identity vector for an
/// empty set.
pub fn aggregate_commitments(ys: &[&[Point]], d: usize) -> Result<Vec<Point>> {
    let mut acc = vec![Point::identity(); d];
    for y in ys {
        if y.len() != d {
            return Err(Error::LengthMismatch {
                expected: d,
                found: y.len(),
            });
        }
        for (a, p) in acc.iter_mut().zip(y.iter()) {
            *a += *p;
        }
    }
    Ok(acc)
}

/// Alternative layout with `e` blinds and `d/e` bases: coordinate `e·p + q`
/// is committed as `g^{u} P_p^{r_{q+1}}`.
pub fn commit_update_shared_blinds(
    u: &[i64],
    r_vec: &[Scalar],
    bases: &[Point],
    g: &Point,
) -> Result<Vec<Point>> {
    let (d, e) = (u.len(), r_vec.len());
    if e == 0 || d % e != 0 {
        return Err(Error::Divisibility { d, e });
    }
    if bases.len() != d / e {
        return Err(Error::LengthMismatch {
            expected: d / e,
            found: bases.len(),
        });
    }
    Ok(u
        .iter()
        .enumerate()
        .map(|(idx, &ul)| {
            let (p, q) = (idx / e, idx % e);
            multiexp(&[*g, bases[p]], &[Scalar::from_i64(ul), r_vec[q]]).expect("two terms")
        })
        .collect())
}
