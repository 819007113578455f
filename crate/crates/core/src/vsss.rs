//! Verifiable Shamir sharing with Feldman check strings.

use rand::{CryptoRng, RngCore};

use crate::error::{Error, Result};
use crate::group::{multiexp, Point, Scalar};

/// Evaluation `f(index)` of the sharing polynomial; indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Share {
    pub index: u32,
    pub value: Scalar,
}

/// `(g^{f_0}, g^{f_1}, ..., g^{f_{t-1}})`, where `f_0` is the secret.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckString {
    pub points: Vec<Point>,
}

impl CheckString {
    pub fn threshold(&self) -> usize {
        self.points.len()
    }

    /// Commitment to the secret, `g^{f(0)}`.
    pub fn secret_commitment(&self) -> Point {
        self.points[0]
    }

    /// `∏_j Ψ_j^{index^j}`, the expected value of `g^{f(index)}`.
    pub fn evaluate(&self, index: u32) -> Point {
        let powers = Scalar::powers(Scalar::from_u64(index as u64), self.points.len());
        multiexp(&self.points, &powers).expect("lengths match")
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.points.iter().flat_map(|p| p.to_bytes()).collect()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.is_empty() || bytes.len() % 32 != 0 {
            return Err(Error::Decode("check string length".into()));
        }
        let points = bytes
            .chunks_exact(32)
            .map(|c| {
                Point::from_bytes(c.try_into().expect("32-byte chunk"))
                    .ok_or_else(|| Error::Decode("check string point".into()))
            })
            .collect::<Result<_>>()?;
        Ok(CheckString { points })
    }
}

fn check_threshold(n: usize, t: usize) -> Result<()> {
    if t == 0 || t > n || n > u32::MAX as usize {
        return Err(Error::InvalidThreshold { t, n });
    }
    Ok(())
}

/// Shares `r` among `n` parties so that any `t` recover it.
pub fn ss_share<R: RngCore + CryptoRng + ?Sized>(
    r: Scalar,
    n: usize,
    t: usize,
    g: &Point,
    rng: &mut R,
) -> Result<(Vec<Share>, CheckString)> {
    check_threshold(n, t)?;
    let mut coeffs = Vec::with_capacity(t);
    coeffs.push(r);
    coeffs.extend((1..t).map(|_| Scalar::random(rng)));
    ss_share_with_coefficients(&coeffs, n, g)
}

/// Shares the polynomial with the given coefficients, constant term first.
pub fn ss_share_with_coefficients(
    coeffs: &[Scalar],
    n: usize,
    g: &Point,
) -> Result<(Vec<Share>, CheckString)> {
    check_threshold(n, coeffs.len())?;
    let shares = (1..=n as u32)
        .map(|index| {
            let x = Scalar::from_u64(index as u64);
            let value = coeffs.iter().rev().fold(Scalar::ZERO, |acc, c| acc * x + *c);
            Share { index, value }
        })
        .collect();
    let points = coeffs.iter().map(|c| *g * *c).collect();
    Ok((shares, CheckString { points }))
}

pub fn ss_verify(psi: &CheckString, share: &Share, n: usize, t: usize, g: &Point) -> bool {
    if psi.points.len() != t || share.index == 0 || share.index as usize > n {
        return false;
    }
    *g * share.value == psi.evaluate(share.index)
}

/// Lagrange interpolation at zero over the given shares.
pub fn ss_recover(shares: &[Share], t: usize) -> Result<Scalar> {
    if shares.len() < t || t == 0 {
        return Err(Error::NotEnoughShares {
            needed: t,
            got: shares.len(),
        });
    }
    let mut seen = std::collections::HashSet::new();
    for s in shares {
        if s.index == 0 || !seen.insert(s.index) {
            return Err(Error::BadShareIndex(s.index));
        }
    }
    let xs: Vec<Scalar> = shares.iter().map(|s| Scalar::from_u64(s.index as u64)).collect();
    let mut denoms: Vec<Scalar> = (0..xs.len())
        .map(|i| {
            (0..xs.len())
                .filter(|&j| j != i)
                .map(|j| xs[j] - xs[i])
                .product()
        })
        .collect();
    Scalar::batch_invert(&mut denoms);
    Ok(shares
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let num: Scalar = (0..xs.len()).filter(|&j| j != i).map(|j| xs[j]).product();
            s.value * num * denoms[i]
        })
        .sum())
}

/// Combines sharings held at one index: check strings multiply pointwise and
/// share values add.
pub fn ss_combine(psis: &[&CheckString], shares: &[Share]) -> Result<(CheckString, Share)> {
    if psis.is_empty() || psis.len() != shares.len() {
        return Err(Error::SharingMismatch);
    }
    let t = psis[0].points.len();
    let index = shares[0].index;
    if psis.iter().any(|p| p.points.len() != t) || shares.iter().any(|s| s.index != index) {
        return Err(Error::SharingMismatch);
    }
    Ok((combine_check_strings(psis)?, Share {
        index,
        value: shares.iter().map(|s| s.value).sum(),
    }))
}

pub fn combine_check_strings(psis: &[&CheckString]) -> Result<CheckString> {
    let t = psis.first().ok_or(Error::SharingMismatch)?.points.len();
    if psis.iter().any(|p| p.points.len() != t) {
        return Err(Error::SharingMismatch);
    }
    let points = (0..t).map(|j| psis.iter().map(|p| p.points[j]).sum()).collect();
    Ok(CheckString { points })
}
