//! Σ-protocol showing the secret of `y2_i` is the square of the secret of `y1_i`.

use rand::{CryptoRng, RngCore};

use crate::error::{Error, Result};
use crate::group::{multiexp, Point, Scalar};
use crate::transcript::Transcript;
use crate::wire::{Reader, Writer};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareProof {
    pub t1: Vec<Point>,
    pub t2: Vec<Point>,
    pub s1: Vec<Scalar>,
    pub s2: Vec<Scalar>,
    pub s3: Vec<Scalar>,
}

fn challenge(g: &Point, h: &Point, y1: &[Point], y2: &[Point], t1: &[Point], t2: &[Point]) -> Scalar {
    let mut tr = Transcript::new("vagg/square");
    tr.append_point(g);
    tr.append_point(h);
    tr.append_points(y1);
    tr.append_points(y2);
    tr.append_points(t1);
    tr.append_points(t2);
    tr.challenge("c")
}

/// Proves `y1_i = g^{x_i} h^{r1_i}` and `y2_i = g^{x_i²} h^{r2_i}` for all `i`.
#[allow(clippy::too_many_arguments)]
pub fn gen_prf_sq<R: RngCore + CryptoRng + ?Sized>(
    g: &Point,
    h: &Point,
    y1: &[Point],
    y2: &[Point],
    x: &[Scalar],
    r1: &[Scalar],
    r2: &[Scalar],
    rng: &mut R,
) -> Result<SquareProof> {
    let k = y1.len();
    for len in [y2.len(), x.len(), r1.len(), r2.len()] {
        if len != k {
            return Err(Error::LengthMismatch { expected: k, found: len });
        }
    }
    let mut v = || (0..k).map(|_| Scalar::random(rng)).collect::<Vec<_>>();
    let (v1, v2, v3) = (v(), v(), v());
    let t1: Vec<Point> = (0..k).map(|i| *g * v1[i] + *h * v2[i]).collect();
    let t2: Vec<Point> = (0..k).map(|i| y1[i] * v1[i] + *h * v3[i]).collect();
    let c = challenge(g, h, y1, y2, &t1, &t2);
    let s1 = (0..k).map(|i| v1[i] - c * x[i]).collect();
    let s2 = (0..k).map(|i| v2[i] - c * r1[i]).collect();
    let s3 = (0..k).map(|i| v3[i] - c * (r2[i] - r1[i] * x[i])).collect();
    Ok(SquareProof { t1, t2, s1, s2, s3 })
}

/// Checks all `2k` equalities at once with fresh random weights.
pub fn ver_prf_sq<R: RngCore + CryptoRng + ?Sized>(
    g: &Point,
    h: &Point,
    y1: &[Point],
    y2: &[Point],
    proof: &SquareProof,
    rng: &mut R,
) -> bool {
    let k = y1.len();
    let p = proof;
    if [y2.len(), p.t1.len(), p.t2.len(), p.s1.len(), p.s2.len(), p.s3.len()]
        .iter()
        .any(|&l| l != k)
    {
        return false;
    }
    let c = challenge(g, h, y1, y2, &p.t1, &p.t2);
    let alpha: Vec<Scalar> = (0..k).map(|_| Scalar::random(rng)).collect();
    let beta: Vec<Scalar> = (0..k).map(|_| Scalar::random(rng)).collect();

    let mut bases = Vec::with_capacity(2 + 4 * k);
    let mut scalars = Vec::with_capacity(2 + 4 * k);
    bases.push(*g);
    scalars.push((0..k).map(|i| alpha[i] * p.s1[i]).sum());
    bases.push(*h);
    scalars.push((0..k).map(|i| alpha[i] * p.s2[i] + beta[i] * p.s3[i]).sum());
    for i in 0..k {
        bases.extend([y1[i], y2[i], p.t1[i], p.t2[i]]);
        scalars.extend([alpha[i] * c + beta[i] * p.s1[i], c * beta[i], -alpha[i], -beta[i]]);
    }
    multiexp(&bases, &scalars).is_ok_and(|acc| acc.is_identity())
}

impl SquareProof {
    pub fn write(&self, w: &mut Writer) {
        w.points(&self.t1).points(&self.t2);
        w.scalars(&self.s1).scalars(&self.s2).scalars(&self.s3);
    }

    pub fn read(r: &mut Reader) -> Result<Self> {
        Ok(SquareProof {
            t1: r.points()?,
            t2: r.points()?,
            s1: r.scalars()?,
            s2: r.scalars()?,
            s3: r.scalars()?,
        })
    }
}
