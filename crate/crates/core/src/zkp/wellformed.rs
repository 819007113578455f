//! Σ-protocol showing `z = g^r`, `e_i = g^{v_i} h_i^r` and `o_i = g^{v_i} q^{s_i}`.

use rand::{CryptoRng, RngCore};

use crate::error::{Error, Result};
use crate::group::{multiexp, Point, Scalar};
use crate::transcript::Transcript;
use crate::wire::{Reader, Writer};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellFormedProof {
    pub u: Point,
    pub t: Vec<Point>,
    pub t_star: Vec<Point>,
    pub y: Scalar,
    pub y_vec: Vec<Scalar>,
    pub y_prime: Vec<Scalar>,
}

#[allow(clippy::too_many_arguments)]
fn challenge(
    g: &Point,
    q: &Point,
    h: &[Point],
    z: &Point,
    e: &[Point],
    o: &[Point],
    u: &Point,
    t: &[Point],
    t_star: &[Point],
) -> Scalar {
    let mut tr = Transcript::new("vagg/well-formed");
    tr.append_point(g);
    tr.append_point(q);
    tr.append_points(h);
    tr.append_point(z);
    tr.append_points(e);
    tr.append_points(o);
    tr.append_point(u);
    tr.append_points(t);
    tr.append_points(t_star);
    tr.challenge("c")
}

/// `h`, `e` and `v_star` have length `k+1`; `o` and `s` have length `k`.
#[allow(clippy::too_many_arguments)]
pub fn gen_prf_wf<R: RngCore + CryptoRng + ?Sized>(
    g: &Point,
    q: &Point,
    h: &[Point],
    z: &Point,
    e: &[Point],
    o: &[Point],
    r: &Scalar,
    v_star: &[Scalar],
    s: &[Scalar],
    rng: &mut R,
) -> Result<WellFormedProof> {
    let k1 = h.len();
    if k1 == 0 {
        return Err(Error::LengthMismatch { expected: 1, found: 0 });
    }
    for (len, expected) in [(e.len(), k1), (v_star.len(), k1), (o.len(), k1 - 1), (s.len(), k1 - 1)] {
        if len != expected {
            return Err(Error::LengthMismatch { expected, found: len });
        }
    }
    let w = Scalar::random(rng);
    let x: Vec<Scalar> = (0..k1).map(|_| Scalar::random(rng)).collect();
    let x_prime: Vec<Scalar> = (1..k1).map(|_| Scalar::random(rng)).collect();
    let u = *g * w;
    let t: Vec<Point> = (0..k1).map(|i| *g * x[i] + h[i] * w).collect();
    let t_star: Vec<Point> = (1..k1).map(|i| *g * x[i] + *q * x_prime[i - 1]).collect();
    let c = challenge(g, q, h, z, e, o, &u, &t, &t_star);
    Ok(WellFormedProof {
        u,
        y: w - c * *r,
        y_vec: (0..k1).map(|i| x[i] - c * v_star[i]).collect(),
        y_prime: (1..k1).map(|i| x_prime[i - 1] - c * s[i - 1]).collect(),
        t,
        t_star,
    })
}

/// Batched check of `u = g^y z^c`, `t_i = g^{y_i} h_i^y e_i^c` and
/// `t*_i = g^{y_i} q^{y'_i} o_i^c` under fresh random weights.
#[allow(clippy::too_many_arguments)]
pub fn ver_prf_wf<R: RngCore + CryptoRng + ?Sized>(
    g: &Point,
    q: &Point,
    h: &[Point],
    z: &Point,
    e: &[Point],
    o: &[Point],
    proof: &WellFormedProof,
    rng: &mut R,
) -> bool {
    let k1 = h.len();
    let p = proof;
    if k1 == 0
        || e.len() != k1
        || p.t.len() != k1
        || p.y_vec.len() != k1
        || o.len() != k1 - 1
        || p.t_star.len() != k1 - 1
        || p.y_prime.len() != k1 - 1
    {
        return false;
    }
    let c = challenge(g, q, h, z, e, o, &p.u, &p.t, &p.t_star);
    let alpha = Scalar::random(rng);
    let beta: Vec<Scalar> = (0..k1).map(|_| Scalar::random(rng)).collect();
    let gamma: Vec<Scalar> = (1..k1).map(|_| Scalar::random(rng)).collect();

    let mut g_exp = alpha * p.y;
    let mut q_exp = Scalar::ZERO;
    let mut bases = Vec::with_capacity(4 + 3 * k1 + 2 * k1);
    let mut scalars = Vec::with_capacity(bases.capacity());
    bases.extend([*z, p.u]);
    scalars.extend([alpha * c, -alpha]);
    for i in 0..k1 {
        g_exp += beta[i] * p.y_vec[i];
        bases.extend([h[i], e[i], p.t[i]]);
        scalars.extend([beta[i] * p.y, beta[i] * c, -beta[i]]);
    }
    for i in 1..k1 {
        let gi = gamma[i - 1];
        g_exp += gi * p.y_vec[i];
        q_exp += gi * p.y_prime[i - 1];
        bases.extend([o[i - 1], p.t_star[i - 1]]);
        scalars.extend([gi * c, -gi]);
    }
    bases.extend([*g, *q]);
    scalars.extend([g_exp, q_exp]);
    multiexp(&bases, &scalars).is_ok_and(|acc| acc.is_identity())
}

impl WellFormedProof {
    pub fn write(&self, w: &mut Writer) {
        w.point(&self.u).points(&self.t).points(&self.t_star);
        w.scalar(&self.y).scalars(&self.y_vec).scalars(&self.y_prime);
    }

    pub fn read(r: &mut Reader) -> Result<Self> {
        Ok(WellFormedProof {
            u: r.point()?,
            t: r.points()?,
            t_star: r.points()?,
            y: r.scalar()?,
            y_vec: r.scalars()?,
            y_prime: r.scalars()?,
        })
    }
}
