//! Aggregated logarithmic range proof for `m` commitments `V_j = g^{v_j} q^{γ_j}`
//! with each `v_j ∈ [0, 2^b)`.
//!
//! The `b·m` bits are padded to a power of two with `a_L = 0, a_R = −1` and
//! zero weight, so any bit width and count are supported, including widths
//! beyond 64 bits.

use rand::{CryptoRng, RngCore};

use crate::error::{Error, Result};
use crate::group::{inner_product, multiexp, Point, RangeGenerators, Scalar};
use crate::transcript::Transcript;
use crate::wire::{Reader, Writer};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeProof {
    pub a: Point,
    pub s: Point,
    pub t1: Point,
    pub t2: Point,
    pub tau_x: Scalar,
    pub mu: Scalar,
    pub t_hat: Scalar,
    pub l_vec: Vec<Point>,
    pub r_vec: Vec<Point>,
    pub a_final: Scalar,
    pub b_final: Scalar,
}

/// Padded length and its log for `bits·count` constraints.
fn padded(bits: u32, count: usize) -> (usize, usize) {
    let n = (bits as usize * count).next_power_of_two();
    (n, n.trailing_zeros() as usize)
}

/// `c_i = z^{2+j}·2^{bit}` for real positions, 0 for padding.
fn weights(z: &Scalar, bits: u32, count: usize, n: usize) -> Vec<Scalar> {
    let two = Scalar::powers(Scalar::from_u64(2), bits as usize);
    let mut out = Vec::with_capacity(n);
    let mut zj = z.square();
    for _ in 0..count {
        out.extend(two.iter().map(|p| zj * *p));
        zj *= *z;
    }
    out.resize(n, Scalar::ZERO);
    out
}

fn statement(g: &Point, q: &Point, bits: u32, commitments: &[Point]) -> Transcript {
    let mut tr = Transcript::new("vagg/range");
    tr.append_point(g);
    tr.append_point(q);
    tr.append_u64(bits as u64);
    tr.append_points(commitments);
    tr
}

fn bit(v: &[u8; 32], i: usize) -> bool {
    v[i / 8] >> (i % 8) & 1 == 1
}

/// Proves every value lies in `[0, 2^bits)`; refuses otherwise.
#[allow(clippy::too_many_arguments)]
pub fn gen_prf_bd<R: RngCore + CryptoRng + ?Sized>(
    g: &Point,
    q: &Point,
    gens: &RangeGenerators,
    bits: u32,
    commitments: &[Point],
    values: &[Scalar],
    blinds: &[Scalar],
    rng: &mut R,
) -> Result<RangeProof> {
    for v in values {
        if bits > 250 || v.bit_len() > bits {
            return Err(Error::RangeValueOutOfRange { bits });
        }
    }
    prove(g, q, gens, bits, commitments, values, blinds, rng)
}

/// Builds a proof from the low `bits` bits of each value without checking the
/// range. The result verifies only if the values really are in range; this
/// models a prover attempting to cheat.
#[allow(clippy::too_many_arguments)]
pub fn forge_prf_bd<R: RngCore + CryptoRng + ?Sized>(
    g: &Point,
    q: &Point,
    gens: &RangeGenerators,
    bits: u32,
    commitments: &[Point],
    values: &[Scalar],
    blinds: &[Scalar],
    rng: &mut R,
) -> Result<RangeProof> {
    prove(g, q, gens, bits.min(250), commitments, values, blinds, rng)
}

#[allow(clippy::too_many_arguments)]
fn prove<R: RngCore + CryptoRng + ?Sized>(
    g: &Point,
    q: &Point,
    gens: &RangeGenerators,
    bits: u32,
    commitments: &[Point],
    values: &[Scalar],
    blinds: &[Scalar],
    rng: &mut R,
) -> Result<RangeProof> {
    let count = values.len();
    if count == 0 || commitments.len() != count || blinds.len() != count || bits == 0 {
        return Err(Error::LengthMismatch { expected: count.max(1), found: commitments.len() });
    }
    let (n, lg) = padded(bits, count);
    if n > gens.capacity() {
        return Err(Error::InvalidParameters(format!(
            "range proof needs {n} generators, have {}",
            gens.capacity()
        )));
    }
    let (gv, hv) = (&gens.g_vec[..n], &gens.h_vec[..n]);

    let mut a_l = vec![Scalar::ZERO; n];
    let mut a_r = vec![-Scalar::ONE; n];
    let alpha = Scalar::random(rng);
    let mut a_commit = *q * alpha;
    for (j, v) in values.iter().enumerate() {
        let bytes = v.to_bytes();
        for i in 0..bits as usize {
            if bit(&bytes, i) {
                a_l[j * bits as usize + i] = Scalar::ONE;
                a_r[j * bits as usize + i] = Scalar::ZERO;
            }
        }
    }
    // A = q^α G^{a_L} H^{a_R} with 0/±1 exponents is a signed sum of bases.
    for i in 0..n {
        if a_l[i] == Scalar::ONE {
            a_commit += gv[i];
        } else {
            a_commit -= hv[i];
        }
    }
    let s_l: Vec<Scalar> = (0..n).map(|_| Scalar::random(rng)).collect();
    let s_r: Vec<Scalar> = (0..n).map(|_| Scalar::random(rng)).collect();
    let rho = Scalar::random(rng);
    let mut bases: Vec<Point> = Vec::with_capacity(2 * n + 1);
    bases.push(*q);
    bases.extend_from_slice(gv);
    bases.extend_from_slice(hv);
    let mut sc = Vec::with_capacity(2 * n + 1);
    sc.push(rho);
    sc.extend_from_slice(&s_l);
    sc.extend_from_slice(&s_r);
    let s_commit = multiexp(&bases, &sc)?;

    let mut tr = statement(g, q, bits, commitments);
    tr.append_point(&a_commit);
    tr.append_point(&s_commit);
    let y = tr.challenge("y");
    let z = tr.challenge("z");

    let y_pow = Scalar::powers(y, n);
    let c = weights(&z, bits, count, n);
    let l0: Vec<Scalar> = a_l.iter().map(|a| *a - z).collect();
    let r0: Vec<Scalar> = (0..n).map(|i| y_pow[i] * (a_r[i] + z) + c[i]).collect();
    let r1: Vec<Scalar> = (0..n).map(|i| y_pow[i] * s_r[i]).collect();
    let t1 = inner_product(&l0, &r1) + inner_product(&s_l, &r0);
    let t2 = inner_product(&s_l, &r1);

    let (tau1, tau2) = (Scalar::random(rng), Scalar::random(rng));
    let t1_commit = *g * t1 + *q * tau1;
    let t2_commit = *g * t2 + *q * tau2;
    tr.append_point(&t1_commit);
    tr.append_point(&t2_commit);
    let x = tr.challenge("x");

    let mut zj = z.square();
    let mut tau_x = tau2 * x.square() + tau1 * x;
    for gamma in blinds {
        tau_x += zj * *gamma;
        zj *= z;
    }
    let mu = alpha + rho * x;
    let l: Vec<Scalar> = (0..n).map(|i| l0[i] + s_l[i] * x).collect();
    let r: Vec<Scalar> = (0..n).map(|i| r0[i] + r1[i] * x).collect();
    let t_hat = inner_product(&l, &r);
    tr.append_scalar(&tau_x);
    tr.append_scalar(&mu);
    tr.append_scalar(&t_hat);
    let w = tr.challenge("w");
    let u = gens.u * w;

    // The current bases are kept as `factor_i · point_i`, so each fold costs
    // one exponentiation per pair; H'_i = H_i^{y^{-i}} starts as factors.
    let y_inv = y.invert().expect("challenge is nonzero");
    let mut g_pts: Vec<Point> = gv.to_vec();
    let mut g_f = vec![Scalar::ONE; n];
    let mut h_pts: Vec<Point> = hv.to_vec();
    let mut h_f = Scalar::powers(y_inv, n);
    let (mut a_cur, mut b_cur) = (l, r);
    let mut l_vec = Vec::with_capacity(lg);
    let mut r_vec = Vec::with_capacity(lg);
    let mut len = n;
    while len > 1 {
        let half = len / 2;
        let (a_lo, a_hi) = a_cur.split_at(half);
        let (b_lo, b_hi) = b_cur.split_at(half);
        let c_l = inner_product(a_lo, b_hi);
        let c_r = inner_product(a_hi, b_lo);
        let mut lb: Vec<Point> = Vec::with_capacity(len + 1);
        let mut ls: Vec<Scalar> = Vec::with_capacity(len + 1);
        let mut rb: Vec<Point> = Vec::with_capacity(len + 1);
        let mut rs: Vec<Scalar> = Vec::with_capacity(len + 1);
        for i in 0..half {
            lb.extend([g_pts[half + i], h_pts[i]]);
            ls.extend([a_lo[i] * g_f[half + i], b_hi[i] * h_f[i]]);
            rb.extend([g_pts[i], h_pts[half + i]]);
            rs.extend([a_hi[i] * g_f[i], b_lo[i] * h_f[half + i]]);
        }
        lb.push(u);
        ls.push(c_l);
        rb.push(u);
        rs.push(c_r);
        let l_pt = multiexp(&lb, &ls)?;
        let r_pt = multiexp(&rb, &rs)?;
        tr.append_point(&l_pt);
        tr.append_point(&r_pt);
        let e = tr.challenge("u");
        let e_inv = e.invert().expect("challenge is nonzero");
        a_cur = (0..half).map(|i| a_lo[i] * e + a_hi[i] * e_inv).collect();
        b_cur = (0..half).map(|i| b_lo[i] * e_inv + b_hi[i] * e).collect();
        l_vec.push(l_pt);
        r_vec.push(r_pt);
        if half > 1 {
            // G' = e^{-1} G_lo + e G_hi,  H' = e H_lo + e^{-1} H_hi
            fold(&mut g_pts, &mut g_f, half, e_inv, e);
            fold(&mut h_pts, &mut h_f, half, e, e_inv);
        }
        len = half;
    }
    Ok(RangeProof {
        a: a_commit,
        s: s_commit,
        t1: t1_commit,
        t2: t2_commit,
        tau_x,
        mu,
        t_hat,
        l_vec,
        r_vec,
        a_final: a_cur[0],
        b_final: b_cur[0],
    })
}

/// Replaces `f_lo·P_lo·x_lo + f_hi·P_hi·x_hi` pairs by
/// `(x_lo f_lo)·(P_lo + (x_hi f_hi / (x_lo f_lo))·P_hi)`.
fn fold(pts: &mut Vec<Point>, f: &mut Vec<Scalar>, half: usize, x_lo: Scalar, x_hi: Scalar) {
    let mut lo: Vec<Scalar> = f[..half].iter().map(|v| *v * x_lo).collect();
    let mut inv = lo.clone();
    Scalar::batch_invert(&mut inv);
    for i in 0..half {
        let ratio = f[half + i] * x_hi * inv[i];
        pts[i] = pts[i] + pts[half + i] * ratio;
    }
    pts.truncate(half);
    lo.truncate(half);
    *f = lo;
}

/// Verifies with a single multi-exponentiation over `2N + 2 log N + m + 7` bases.
#[allow(clippy::too_many_arguments)]
pub fn ver_prf_bd<R: RngCore + CryptoRng + ?Sized>(
    g: &Point,
    q: &Point,
    gens: &RangeGenerators,
    bits: u32,
    commitments: &[Point],
    proof: &RangeProof,
    rng: &mut R,
) -> bool {
    let count = commitments.len();
    if count == 0 || bits == 0 || bits > 250 {
        return false;
    }
    let (n, lg) = padded(bits, count);
    if n > gens.capacity() || proof.l_vec.len() != lg || proof.r_vec.len() != lg {
        return false;
    }
    let p = proof;
    let mut tr = statement(g, q, bits, commitments);
    tr.append_point(&p.a);
    tr.append_point(&p.s);
    let y = tr.challenge("y");
    let z = tr.challenge("z");
    tr.append_point(&p.t1);
    tr.append_point(&p.t2);
    let x = tr.challenge("x");
    tr.append_scalar(&p.tau_x);
    tr.append_scalar(&p.mu);
    tr.append_scalar(&p.t_hat);
    let w = tr.challenge("w");
    let mut us = Vec::with_capacity(lg);
    for (l, r) in p.l_vec.iter().zip(&p.r_vec) {
        tr.append_point(l);
        tr.append_point(r);
        us.push(tr.challenge("u"));
    }
    if us.iter().any(Scalar::is_zero) || y.is_zero() {
        return false;
    }
    let mut us_inv = us.clone();
    Scalar::batch_invert(&mut us_inv);

    // s_i = ∏_j u_j^{±1}, sign from bit (lg−1−j) of i.
    let mut s = vec![Scalar::ONE; n];
    s[0] = us_inv.iter().copied().product();
    for i in 1..n {
        let top = usize::BITS - 1 - i.leading_zeros();
        let j = lg - 1 - top as usize;
        s[i] = s[i - (1 << top)] * us[j].square();
    }
    let mut s_inv = s.clone();
    Scalar::batch_invert(&mut s_inv);

    let y_pow = Scalar::powers(y, n);
    let y_inv_pow = {
        let mut v = y_pow.clone();
        Scalar::batch_invert(&mut v);
        v
    };
    let c = weights(&z, bits, count, n);
    let sum_y: Scalar = y_pow.iter().copied().sum();
    let sum_c: Scalar = c.iter().copied().sum();
    let delta = (z - z.square()) * sum_y - z * sum_c;
    let beta = Scalar::random(rng);

    let mut bases = Vec::with_capacity(2 * n + 2 * lg + count + 7);
    let mut scalars = Vec::with_capacity(bases.capacity());
    for i in 0..n {
        bases.push(gens.g_vec[i]);
        scalars.push(-z - p.a_final * s[i]);
    }
    for i in 0..n {
        bases.push(gens.h_vec[i]);
        scalars.push(z + (c[i] - p.b_final * s_inv[i]) * y_inv_pow[i]);
    }
    for j in 0..lg {
        bases.extend([p.l_vec[j], p.r_vec[j]]);
        scalars.extend([us[j].square(), us_inv[j].square()]);
    }
    bases.extend([p.a, p.s, gens.u, *q, *g, p.t1, p.t2]);
    scalars.extend([
        Scalar::ONE,
        x,
        w * (p.t_hat - p.a_final * p.b_final),
        -p.mu + beta * p.tau_x,
        beta * (p.t_hat - delta),
        -beta * x,
        -beta * x.square(),
    ]);
    let mut zj = z.square();
    for v in commitments {
        bases.push(*v);
        scalars.push(-beta * zj);
        zj *= z;
    }
    multiexp(&bases, &scalars).is_ok_and(|acc| acc.is_identity())
}

impl RangeProof {
    pub fn write(&self, w: &mut Writer) {
        w.point(&self.a).point(&self.s).point(&self.t1).point(&self.t2);
        w.scalar(&self.tau_x).scalar(&self.mu).scalar(&self.t_hat);
        w.points(&self.l_vec).points(&self.r_vec);
        w.scalar(&self.a_final).scalar(&self.b_final);
    }

    pub fn read(r: &mut Reader) -> Result<Self> {
        Ok(RangeProof {
            a: r.point()?,
            s: r.point()?,
            t1: r.point()?,
            t2: r.point()?,
            tau_x: r.scalar()?,
            mu: r.scalar()?,
            t_hat: r.scalar()?,
            l_vec: r.points()?,
            r_vec: r.points()?,
            a_final: r.scalar()?,
            b_final: r.scalar()?,
        })
    }
}
