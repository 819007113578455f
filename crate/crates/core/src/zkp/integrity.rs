//! The composed proof `π = (e*, o, o', p, ρ, τ, σ, μ)` that a committed update
//! passes the probabilistic norm check.

use std::fmt;

use rand::{CryptoRng, RngCore};

use super::crt::ver_crt;
use super::range::{forge_prf_bd, gen_prf_bd, ver_prf_bd, RangeProof};
use super::square::{gen_prf_sq, ver_prf_sq, SquareProof};
use super::wellformed::{gen_prf_wf, ver_prf_wf, WellFormedProof};
use crate::error::{Error, Result};
use crate::group::{GeneratorSet, Point, Scalar};
use crate::sampling::{CheckParameters, SampleMatrix};
use crate::wire::{Reader, Writer};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegrityProof {
    pub e_star: Vec<Point>,
    pub o: Vec<Point>,
    pub o_prime: Vec<Point>,
    pub p_commit: Point,
    pub rho: WellFormedProof,
    pub tau: SquareProof,
    pub sigma: RangeProof,
    pub mu: RangeProof,
}

/// Which sub-check rejected a proof.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProofFailure {
    /// Component dimensions do not match the parameters.
    Malformed,
    /// `e*` is not consistent with the commitment `y` under `A`.
    Consistency,
    /// ρ rejected: `z`, `e*` and `o` do not share blinds and secrets.
    WellFormed,
    /// τ rejected: `o'` does not commit to the squares of `o`.
    Square,
    /// σ rejected: some projection is outside the signed `b_ip`-bit range.
    ProjectionRange,
    /// `p` differs from `g^{B0} (∏ o')^{-1}`.
    BoundCommitment,
    /// μ rejected: the sum of squares exceeds `B0`.
    Bound,
}

impl ProofFailure {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProofFailure::Malformed => "malformed",
            ProofFailure::Consistency => "consistency",
            ProofFailure::WellFormed => "well-formed",
            ProofFailure::Square => "square",
            ProofFailure::ProjectionRange => "projection-range",
            ProofFailure::BoundCommitment => "bound-commitment",
            ProofFailure::Bound => "bound",
        }
    }
}

impl fmt::Display for ProofFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn bound_commitment(g: &Point, b0: u128, o_prime: &[Point]) -> Point {
    *g * Scalar::from_u128(b0) - o_prime.iter().sum::<Point>()
}

fn shifted(g: &Point, b_ip: u32, o: &[Point]) -> Vec<Point> {
    let shift = *g * Scalar::pow2(b_ip - 1);
    o.iter().map(|ot| shift + *ot).collect()
}

/// Honest proof generation. Fails with [`Error::BoundExceeded`] when the
/// update does not satisfy `Σ_t ⟨a_t, u⟩² ≤ B0`.
#[allow(clippy::too_many_arguments)]
pub fn gen_integrity_proof<R: RngCore + CryptoRng + ?Sized>(
    params: &CheckParameters,
    gens: &GeneratorSet,
    a: &SampleMatrix,
    h: &[Point],
    z: &Point,
    r: &Scalar,
    u: &[i64],
    rng: &mut R,
) -> Result<IntegrityProof> {
    build(params, gens, a, h, z, r, u, false, rng)
}

/// Runs the same steps without refusing out-of-bound updates; the range
/// proofs are built from truncated bits. Used to model a cheating client.
#[allow(clippy::too_many_arguments)]
pub fn forge_integrity_proof<R: RngCore + CryptoRng + ?Sized>(
    params: &CheckParameters,
    gens: &GeneratorSet,
    a: &SampleMatrix,
    h: &[Point],
    z: &Point,
    r: &Scalar,
    u: &[i64],
    rng: &mut R,
) -> Result<IntegrityProof> {
    build(params, gens, a, h, z, r, u, true, rng)
}

#[allow(clippy::too_many_arguments)]
fn build<R: RngCore + CryptoRng + ?Sized>(
    params: &CheckParameters,
    gens: &GeneratorSet,
    a: &SampleMatrix,
    h: &[Point],
    z: &Point,
    r: &Scalar,
    u: &[i64],
    forge: bool,
    rng: &mut R,
) -> Result<IntegrityProof> {
    let k = a.k();
    if u.len() != a.d() || h.len() != k + 1 || k == 0 {
        return Err(Error::LengthMismatch { expected: a.d(), found: u.len() });
    }
    let (g, q) = (&gens.g, &gens.q);
    let v = a.projections(u);
    let half = 1i128 << (params.b_ip - 1);
    let sum_sq = v.iter().fold(0u128, |acc, x| {
        acc.saturating_add(x.unsigned_abs().saturating_mul(x.unsigned_abs()))
    });
    if !forge {
        if sum_sq > params.b0 {
            return Err(Error::BoundExceeded);
        }
        if v.iter().any(|x| *x < -half || *x >= half) {
            return Err(Error::RangeValueOutOfRange { bits: params.b_ip });
        }
    }

    let v_sc: Vec<Scalar> = v.iter().map(|x| Scalar::from_i128(*x)).collect();
    let mut v_star = Vec::with_capacity(k + 1);
    v_star.push(a.projection0(u));
    v_star.extend_from_slice(&v_sc);
    let e_star: Vec<Point> = (0..=k).map(|t| *g * v_star[t] + h[t] * *r).collect();

    let s: Vec<Scalar> = (0..k).map(|_| Scalar::random(rng)).collect();
    let s_prime: Vec<Scalar> = (0..k).map(|_| Scalar::random(rng)).collect();
    let v_sq: Vec<Scalar> = v_sc.iter().map(Scalar::square).collect();
    let o: Vec<Point> = (0..k).map(|t| *g * v_sc[t] + *q * s[t]).collect();
    let o_prime: Vec<Point> = (0..k).map(|t| *g * v_sq[t] + *q * s_prime[t]).collect();
    let p_commit = bound_commitment(g, params.b0, &o_prime);

    let rho = gen_prf_wf(g, q, h, z, &e_star, &o, r, &v_star, &s, rng)?;
    let tau = gen_prf_sq(g, q, &o, &o_prime, &v_sc, &s, &s_prime, rng)?;

    let shift = Scalar::pow2(params.b_ip - 1);
    let sigma_vals: Vec<Scalar> = v_sc.iter().map(|x| *x + shift).collect();
    let sigma_comms = shifted(g, params.b_ip, &o);
    let mu_val = Scalar::from_u128(params.b0) - v_sq.iter().copied().sum::<Scalar>();
    let mu_blind = -s_prime.iter().copied().sum::<Scalar>();
    let range = &gens.range;
    let (sigma, mu) = if forge {
        (
            forge_prf_bd(g, q, range, params.b_ip, &sigma_comms, &sigma_vals, &s, rng)?,
            forge_prf_bd(g, q, range, params.b_max, &[p_commit], &[mu_val], &[mu_blind], rng)?,
        )
    } else {
        (
            gen_prf_bd(g, q, range, params.b_ip, &sigma_comms, &sigma_vals, &s, rng)?,
            gen_prf_bd(g, q, range, params.b_max, &[p_commit], &[mu_val], &[mu_blind], rng)?,
        )
    };
    Ok(IntegrityProof { e_star, o, o_prime, p_commit, rho, tau, sigma, mu })
}

/// Verifies every component; on rejection reports the first failing check.
#[allow(clippy::too_many_arguments)]
pub fn ver_integrity_proof<R: RngCore + CryptoRng + ?Sized>(
    params: &CheckParameters,
    gens: &GeneratorSet,
    a: &SampleMatrix,
    h: &[Point],
    z: &Point,
    y: &[Point],
    proof: &IntegrityProof,
    rng: &mut R,
) -> std::result::Result<(), ProofFailure> {
    let k = a.k();
    let p = proof;
    if h.len() != k + 1
        || y.len() != a.d()
        || p.e_star.len() != k + 1
        || p.o.len() != k
        || p.o_prime.len() != k
    {
        return Err(ProofFailure::Malformed);
    }
    let (g, q) = (&gens.g, &gens.q);
    if !ver_crt(y, &p.e_star, a, rng) {
        return Err(ProofFailure::Consistency);
    }
    if !ver_prf_wf(g, q, h, z, &p.e_star, &p.o, &p.rho, rng) {
        return Err(ProofFailure::WellFormed);
    }
    if !ver_prf_sq(g, q, &p.o, &p.o_prime, &p.tau, rng) {
        return Err(ProofFailure::Square);
    }
    if !ver_prf_bd(g, q, &gens.range, params.b_ip, &shifted(g, params.b_ip, &p.o), &p.sigma, rng) {
        return Err(ProofFailure::ProjectionRange);
    }
    if p.p_commit != bound_commitment(g, params.b0, &p.o_prime) {
        return Err(ProofFailure::BoundCommitment);
    }
    if !ver_prf_bd(g, q, &gens.range, params.b_max, &[p.p_commit], &p.mu, rng) {
        return Err(ProofFailure::Bound);
    }
    Ok(())
}

impl IntegrityProof {
    /// Serialized size of a proof for `k` projections with the given bit
    /// widths, obtained by encoding a placeholder of the same shape.
    pub fn encoded_len(k: usize, b_ip: u32, b_max: u32) -> usize {
        let pts = |n: usize| vec![Point::identity(); n];
        let scs = |n: usize| vec![Scalar::ZERO; n];
        let range = |bits: u32, count: usize| {
            let lg = (bits as usize * count).next_power_of_two().trailing_zeros() as usize;
            RangeProof {
                a: Point::identity(),
                s: Point::identity(),
                t1: Point::identity(),
                t2: Point::identity(),
                tau_x: Scalar::ZERO,
                mu: Scalar::ZERO,
                t_hat: Scalar::ZERO,
                l_vec: pts(lg),
                r_vec: pts(lg),
                a_final: Scalar::ZERO,
                b_final: Scalar::ZERO,
            }
        };
        IntegrityProof {
            e_star: pts(k + 1),
            o: pts(k),
            o_prime: pts(k),
            p_commit: Point::identity(),
            rho: WellFormedProof {
                u: Point::identity(),
                t: pts(k + 1),
                t_star: pts(k),
                y: Scalar::ZERO,
                y_vec: scs(k + 1),
                y_prime: scs(k),
            },
            tau: SquareProof { t1: pts(k), t2: pts(k), s1: scs(k), s2: scs(k), s3: scs(k) },
            sigma: range(b_ip, k),
            mu: range(b_max, 1),
        }
        .to_bytes()
        .len()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.points(&self.e_star).points(&self.o).points(&self.o_prime).point(&self.p_commit);
        self.rho.write(&mut w);
        self.tau.write(&mut w);
        self.sigma.write(&mut w);
        self.mu.write(&mut w);
        w.finish()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let proof = IntegrityProof {
            e_star: r.points()?,
            o: r.points()?,
            o_prime: r.points()?,
            p_commit: r.point()?,
            rho: WellFormedProof::read(&mut r)?,
            tau: SquareProof::read(&mut r)?,
            sigma: RangeProof::read(&mut r)?,
            mu: RangeProof::read(&mut r)?,
        };
        r.finish()?;
        Ok(proof)
    }
}
