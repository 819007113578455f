//! Key agreement and authenticated encryption of blind shares.

use chacha20poly1305::aead::{Aead, KeyInit, Payload};
use chacha20poly1305::{ChaCha20Poly1305, Key, Nonce};
use rand::{CryptoRng, RngCore};
use sha2::{Digest, Sha256};

use super::ClientId;
use crate::error::{Error, Result};
use crate::group::{Point, Scalar};

#[derive(Clone)]
pub struct KeyPair {
    sk: Scalar,
    pub pk: Point,
}

impl KeyPair {
    pub fn generate<R: RngCore + CryptoRng + ?Sized>(g: &Point, rng: &mut R) -> Self {
        let sk = Scalar::random(rng);
        KeyPair { sk, pk: *g * sk }
    }

    /// Symmetric key shared with the owner of `peer_pk`; both sides derive
    /// the same value from the Diffie–Hellman point.
    pub fn pairwise_key(&self, me: ClientId, peer: ClientId, peer_pk: &Point) -> [u8; 32] {
        let shared = *peer_pk * self.sk;
        let (lo, hi) = (me.min(peer), me.max(peer));
        let mut h = Sha256::new();
        h.update(b"vagg/pairwise/v1");
        h.update(shared.to_bytes());
        h.update(lo.to_le_bytes());
        h.update(hi.to_le_bytes());
        h.finalize().into()
    }
}

fn nonce_and_aad(round: u32, from: ClientId, to: ClientId) -> ([u8; 12], [u8; 12]) {
    let mut nonce = [0u8; 12];
    nonce[..4].copy_from_slice(&round.to_le_bytes());
    nonce[4..8].copy_from_slice(&from.to_le_bytes());
    nonce[8..].copy_from_slice(&to.to_le_bytes());
    let mut aad = [0u8; 12];
    aad[..4].copy_from_slice(&from.to_le_bytes());
    aad[4..8].copy_from_slice(&to.to_le_bytes());
    aad[8..].copy_from_slice(&round.to_le_bytes());
    (nonce, aad)
}

pub fn seal_share(key: &[u8; 32], round: u32, from: ClientId, to: ClientId, value: &Scalar) -> Result<Vec<u8>> {
    let (nonce, aad) = nonce_and_aad(round, from, to);
    ChaCha20Poly1305::new(Key::from_slice(key))
        .encrypt(Nonce::from_slice(&nonce), Payload { msg: &value.to_bytes(), aad: &aad })
        .map_err(|_| Error::Crypto)
}

/// `None` if authentication fails or the plaintext is not a canonical scalar.
pub fn open_share(key: &[u8; 32], round: u32, from: ClientId, to: ClientId, ct: &[u8]) -> Option<Scalar> {
    let (nonce, aad) = nonce_and_aad(round, from, to);
    let pt = ChaCha20Poly1305::new(Key::from_slice(key))
        .decrypt(Nonce::from_slice(&nonce), Payload { msg: ct, aad: &aad })
        .ok()?;
    Scalar::from_canonical_bytes(pt.try_into().ok()?)
}
