//! Wire messages, envelopes and the binary round transcript.

use super::ClientId;
use crate::commit::CommitmentBundle;
use crate::error::{Error, Result};
use crate::group::Point;
use crate::vsss::{CheckString, Share};
use crate::wire::{Reader, Writer};
use crate::zkp::IntegrityProof;

/// Sender/recipient id of the server.
pub const SERVER: ClientId = 0;

/// A peer's check string and, if one was sent, the share sealed for the recipient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelayedShare {
    pub from: ClientId,
    pub check_string: CheckString,
    pub ciphertext: Option<Vec<u8>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Message {
    Commit(Box<CommitmentBundle>),
    Shares(Vec<RelayedShare>),
    Flags(Vec<ClientId>),
    ClearShareRequest(Vec<ClientId>),
    ClearShares(Vec<Share>),
    ForwardedShare { from: ClientId, share: Share },
    ProofRequest { s: [u8; 32], h: Vec<Point>, malicious: Vec<ClientId> },
    Proof(Box<IntegrityProof>),
    AggregateRequest(Vec<ClientId>),
    AggregateShare(Share),
    Abort(String),
}

fn write_ids(w: &mut Writer, ids: &[ClientId]) {
    w.u32(ids.len() as u32);
    ids.iter().for_each(|i| {
        w.u32(*i);
    });
}

fn read_ids(r: &mut Reader) -> Result<Vec<ClientId>> {
    let n = r.u32()? as usize;
    (0..n).map(|_| r.u32()).collect()
}

fn write_share(w: &mut Writer, s: &Share) {
    w.u32(s.index).scalar(&s.value);
}

fn read_share(r: &mut Reader) -> Result<Share> {
    Ok(Share { index: r.u32()?, value: r.scalar()? })
}

impl Message {
    pub fn tag(&self) -> u8 {
        match self {
            Message::Commit(_) => 1,
            Message::Shares(_) => 2,
            Message::Flags(_) => 3,
            Message::ClearShareRequest(_) => 4,
            Message::ClearShares(_) => 5,
            Message::ForwardedShare { .. } => 6,
            Message::ProofRequest { .. } => 7,
            Message::Proof(_) => 8,
            Message::AggregateRequest(_) => 9,
            Message::AggregateShare(_) => 10,
            Message::Abort(_) => 11,
        }
    }

    pub fn payload(&self) -> Vec<u8> {
        let mut w = Writer::new();
        match self {
            Message::Commit(b) => return b.to_bytes(),
            Message::Shares(list) => {
                w.u32(list.len() as u32);
                for s in list {
                    w.u32(s.from).points(&s.check_string.points);
                    match &s.ciphertext {
                        Some(ct) => w.u8(1).bytes(ct),
                        None => w.u8(0),
                    };
                }
            }
            Message::Flags(ids) | Message::ClearShareRequest(ids) | Message::AggregateRequest(ids) => {
                write_ids(&mut w, ids)
            }
            Message::ClearShares(shares) => {
                w.u32(shares.len() as u32);
                shares.iter().for_each(|s| write_share(&mut w, s));
            }
            Message::ForwardedShare { from, share } => {
                w.u32(*from);
                write_share(&mut w, share);
            }
            Message::ProofRequest { s, h, malicious } => {
                w.bytes(s).points(h);
                write_ids(&mut w, malicious);
            }
            Message::Proof(p) => return p.to_bytes(),
            Message::AggregateShare(s) => write_share(&mut w, s),
            Message::Abort(reason) => {
                w.bytes(reason.as_bytes());
            }
        }
        w.finish()
    }

    pub fn decode(tag: u8, payload: &[u8]) -> Result<Self> {
        let mut r = Reader::new(payload);
        let msg = match tag {
            1 => return Ok(Message::Commit(Box::new(CommitmentBundle::from_bytes(payload)?))),
            2 => {
                let n = r.u32()? as usize;
                let list = (0..n)
                    .map(|_| {
                        let from = r.u32()?;
                        let points = r.points()?;
                        let ciphertext = match r.u8()? {
                            0 => None,
                            1 => Some(r.bytes()?.to_vec()),
                            _ => return Err(Error::Decode("option flag".into())),
                        };
                        Ok(RelayedShare { from, check_string: CheckString { points }, ciphertext })
                    })
                    .collect::<Result<_>>()?;
                Message::Shares(list)
            }
            3 => Message::Flags(read_ids(&mut r)?),
            4 => Message::ClearShareRequest(read_ids(&mut r)?),
            5 => {
                let n = r.u32()? as usize;
                Message::ClearShares((0..n).map(|_| read_share(&mut r)).collect::<Result<_>>()?)
            }
            6 => Message::ForwardedShare { from: r.u32()?, share: read_share(&mut r)? },
            7 => {
                let s: [u8; 32] = r
                    .bytes()?
                    .try_into()
                    .map_err(|_| Error::Decode("seed length".into()))?;
                Message::ProofRequest { s, h: r.points()?, malicious: read_ids(&mut r)? }
            }
            8 => return Ok(Message::Proof(Box::new(IntegrityProof::from_bytes(payload)?))),
            9 => Message::AggregateRequest(read_ids(&mut r)?),
            10 => Message::AggregateShare(read_share(&mut r)?),
            11 => Message::Abort(
                String::from_utf8(r.bytes()?.to_vec()).map_err(|_| Error::Decode("utf-8".into()))?,
            ),
            t => return Err(Error::Decode(format!("unknown message tag {t}"))),
        };
        r.finish()?;
        Ok(msg)
    }
}

/// `tag u8 | from u32 | to u32 | len u32 | payload`, all little-endian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    pub tag: u8,
    pub from: ClientId,
    pub to: ClientId,
    pub payload: Vec<u8>,
}

impl Envelope {
    pub const HEADER_LEN: usize = 13;

    pub fn new(from: ClientId, to: ClientId, msg: &Message) -> Self {
        Envelope { tag: msg.tag(), from, to, payload: msg.payload() }
    }

    pub fn encoded_len(&self) -> usize {
        Self::HEADER_LEN + self.payload.len()
    }

    pub fn encode_into(&self, out: &mut Vec<u8>) {
        out.push(self.tag);
        out.extend_from_slice(&self.from.to_le_bytes());
        out.extend_from_slice(&self.to.to_le_bytes());
        out.extend_from_slice(&(self.payload.len() as u32).to_le_bytes());
        out.extend_from_slice(&self.payload);
    }

    pub fn message(&self) -> Result<Message> {
        Message::decode(self.tag, &self.payload)
    }

    /// Splits a transcript back into envelopes.
    pub fn parse_log(mut bytes: &[u8]) -> Result<Vec<Envelope>> {
        let mut out = Vec::new();
        while !bytes.is_empty() {
            if bytes.len() < Self::HEADER_LEN {
                return Err(Error::Decode("truncated envelope header".into()));
            }
            let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().expect("4 bytes"));
            let (tag, from, to, len) = (bytes[0], u32_at(1), u32_at(5), u32_at(9) as usize);
            let end = Self::HEADER_LEN + len;
            if bytes.len() < end {
                return Err(Error::Decode("truncated envelope payload".into()));
            }
            out.push(Envelope { tag, from, to, payload: bytes[Self::HEADER_LEN..end].to_vec() });
            bytes = &bytes[end..];
        }
        Ok(out)
    }
}
