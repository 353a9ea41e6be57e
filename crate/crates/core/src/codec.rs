//! Binary encodings of parameters, keys and ciphertexts.
//!
//! Layout: `"AHIB"`, a version byte, the backend tag byte, the maximum depth
//! as a big-endian `u16`, then a sequence of items, each a big-endian `u32`
//! length followed by that many bytes. Item 0 is a one-byte object kind
//! (`P`, `M`, `K` or `C`). Group elements use the backend's canonical
//! (compressed, for curves) encoding; decoding validates group membership.
//!
//! Everything except public parameters is decoded relative to a
//! [`PublicParams`], which fixes the backend and the depth.

use crate::backend::{BackendTag, GroupElement, GroupSuite, PairingBackend, ScalarField};
use crate::error::CodecError;
use crate::identity::HierarchicalIdentity;
use crate::scheme::{Ciphertext, MasterKey, PrivateKey, PublicParams};

pub const MAGIC: &[u8; 4] = b"AHIB";
pub const VERSION: u8 = 1;

const KIND_PP: u8 = b'P';
const KIND_MK: u8 = b'M';
const KIND_SK: u8 = b'K';
const KIND_CT: u8 = b'C';

struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    fn new(tag: BackendTag, max_depth: usize, kind: u8) -> Self {
        let mut buf = MAGIC.to_vec();
        buf.push(VERSION);
        buf.push(tag as u8);
        buf.extend((max_depth as u16).to_be_bytes());
        let mut w = Writer { buf };
        w.item(&[kind]);
        w
    }

    fn item(&mut self, bytes: &[u8]) {
        self.buf.extend((bytes.len() as u32).to_be_bytes());
        self.buf.extend_from_slice(bytes);
    }

    fn elems<E: GroupElement>(&mut self, elems: &[E]) {
        for e in elems {
            self.item(&e.encode());
        }
    }
}

struct Header {
    tag: BackendTag,
    max_depth: usize,
    kind: u8,
}

struct Reader<'a> {
    items: Vec<&'a [u8]>,
    pos: usize,
}

fn parse(bytes: &[u8]) -> Result<(Header, Reader<'_>), CodecError> {
    if bytes.len() < 8 {
        return Err(CodecError::Truncated);
    }
    if &bytes[..4] != MAGIC {
        return Err(CodecError::BadMagic);
    }
    if bytes[4] != VERSION {
        return Err(CodecError::UnsupportedVersion(bytes[4]));
    }
    let tag = BackendTag::from_byte(bytes[5])?;
    let max_depth = u16::from_be_bytes([bytes[6], bytes[7]]) as usize;
    let mut rest = &bytes[8..];
    let mut items = Vec::new();
    while !rest.is_empty() {
        if rest.len() < 4 {
            return Err(CodecError::Truncated);
        }
        let len = u32::from_be_bytes(rest[..4].try_into().expect("4 bytes")) as usize;
        rest = &rest[4..];
        if rest.len() < len {
            return Err(CodecError::Truncated);
        }
        items.push(&rest[..len]);
        rest = &rest[len..];
    }
    let kind = match items.first() {
        Some([k]) => *k,
        Some(_) => return Err(CodecError::BadLength { expected: 1, found: items[0].len() }),
        None => return Err(CodecError::Truncated),
    };
    Ok((Header { tag, max_depth, kind }, Reader { items, pos: 1 }))
}

impl Header {
    fn expect_kind(&self, kind: u8) -> Result<(), CodecError> {
        if self.kind != kind {
            return Err(CodecError::WrongKind { expected: kind as char, found: self.kind as char });
        }
        Ok(())
    }

    fn expect_params<B: PairingBackend>(&self, pp: &PublicParams<B>) -> Result<(), CodecError> {
        if self.tag != pp.suite.tag() || self.max_depth != pp.max_depth {
            return Err(CodecError::BackendMismatch);
        }
        Ok(())
    }
}

impl<'a> Reader<'a> {
    fn remaining(&self) -> usize {
        self.items.len() - self.pos
    }

    fn expect_remaining(&self, n: usize) -> Result<(), CodecError> {
        if self.remaining() != n {
            return Err(CodecError::BadElementCount);
        }
        Ok(())
    }

    fn next(&mut self) -> Result<&'a [u8], CodecError> {
        let item = self.items.get(self.pos).ok_or(CodecError::Truncated)?;
        self.pos += 1;
        Ok(item)
    }

    fn elem<E: GroupElement>(&mut self, template: &E) -> Result<E, CodecError> {
        E::decode_like(template, self.next()?)
    }

    fn triple<E: GroupElement>(&mut self, template: &E) -> Result<[E; 3], CodecError> {
        Ok([self.elem(template)?, self.elem(template)?, self.elem(template)?])
    }
}

/// The backend tag of an encoded object, without decoding it.
pub fn peek_backend(bytes: &[u8]) -> Result<BackendTag, CodecError> {
    Ok(parse(bytes)?.0.tag)
}

impl<B: PairingBackend> PublicParams<B> {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new(self.suite.tag(), self.max_depth, KIND_PP);
        w.item(&self.suite.to_bytes());
        w.elems(&self.g);
        w.elems(&self.h);
        for u in &self.u {
            w.elems(u);
        }
        w.elems(&self.w);
        w.elems(&[self.omega]);
        w.buf
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CodecError> {
        let (header, mut r) = parse(bytes)?;
        header.expect_kind(KIND_PP)?;
        if header.max_depth == 0 {
            return Err(CodecError::OutOfRange);
        }
        let suite = GroupSuite::<B>::from_bytes(r.next()?)?;
        if suite.tag() != header.tag {
            return Err(CodecError::BackendMismatch);
        }
        let l = header.max_depth;
        r.expect_remaining(3 * (l + 3) + 1)?;
        let b = suite.backend();
        let (g1, g2, gt) = (b.g1_identity(), b.g2_identity(), b.gt_identity());
        let g = r.triple(&g1)?;
        let h = r.triple(&g1)?;
        let u = (0..l).map(|_| r.triple(&g1)).collect::<Result<_, _>>()?;
        let w = r.triple(&g2)?;
        let omega = r.elem(&gt)?;
        Ok(PublicParams { suite, max_depth: l, g, h, u, w, omega })
    }
}

impl<B: PairingBackend> MasterKey<B> {
    pub fn to_bytes(&self, pp: &PublicParams<B>) -> Vec<u8> {
        let mut w = Writer::new(pp.suite.tag(), pp.max_depth, KIND_MK);
        w.elems(&[self.g_hat, self.g_hat_alpha, self.h_hat]);
        w.elems(&self.u_hat);
        w.buf
    }

    pub fn from_bytes(bytes: &[u8], pp: &PublicParams<B>) -> Result<Self, CodecError> {
        let (header, mut r) = parse(bytes)?;
        header.expect_kind(KIND_MK)?;
        header.expect_params(pp)?;
        r.expect_remaining(3 + pp.max_depth)?;
        let t = pp.suite.backend().g2_identity();
        let g_hat = r.elem(&t)?;
        let g_hat_alpha = r.elem(&t)?;
        let h_hat = r.elem(&t)?;
        let u_hat = (0..pp.max_depth).map(|_| r.elem(&t)).collect::<Result<_, _>>()?;
        Ok(MasterKey { g_hat, g_hat_alpha, h_hat, u_hat })
    }
}

impl<B: PairingBackend> PrivateKey<B> {
    /// `6·(2 + l − m)` group elements after the identity.
    pub fn to_bytes(&self, pp: &PublicParams<B>) -> Vec<u8> {
        let mut w = Writer::new(pp.suite.tag(), pp.max_depth, KIND_SK);
        w.item(&(self.depth() as u16).to_be_bytes());
        for c in self.identity.components() {
            w.item(&c.encode());
        }
        w.elems(&self.k1);
        w.elems(&self.k2);
        for b in &self.l3 {
            w.elems(b);
        }
        w.elems(&self.r1);
        w.elems(&self.r2);
        for b in &self.r3 {
            w.elems(b);
        }
        w.buf
    }

    pub fn from_bytes(bytes: &[u8], pp: &PublicParams<B>) -> Result<Self, CodecError> {
        let (header, mut r) = parse(bytes)?;
        header.expect_kind(KIND_SK)?;
        header.expect_params(pp)?;
        let depth_item = r.next()?;
        let depth = match depth_item {
            [a, b] => u16::from_be_bytes([*a, *b]) as usize,
            _ => return Err(CodecError::BadLength { expected: 2, found: depth_item.len() }),
        };
        if depth > pp.max_depth {
            return Err(CodecError::OutOfRange);
        }
        let levels = pp.max_depth - depth;
        r.expect_remaining(depth + 6 * (2 + levels))?;
        let zero = pp.suite.scalar(0);
        let components = (0..depth)
            .map(|_| ScalarField::decode_like(&zero, r.next()?))
            .collect::<Result<Vec<_>, _>>()?;
        let identity = HierarchicalIdentity::new(components).map_err(|_| CodecError::OutOfRange)?;
        let t = pp.suite.backend().g2_identity();
        let k1 = r.triple(&t)?;
        let k2 = r.triple(&t)?;
        let l3 = (0..levels).map(|_| r.triple(&t)).collect::<Result<_, _>>()?;
        let r1 = r.triple(&t)?;
        let r2 = r.triple(&t)?;
        let r3 = (0..levels).map(|_| r.triple(&t)).collect::<Result<_, _>>()?;
        Ok(PrivateKey { identity, k1, k2, l3, r1, r2, r3 })
    }
}

impl<B: PairingBackend> Ciphertext<B> {
    pub fn to_bytes(&self, pp: &PublicParams<B>) -> Vec<u8> {
        let mut w = Writer::new(pp.suite.tag(), pp.max_depth, KIND_CT);
        w.elems(&[self.c]);
        w.elems(&self.c1);
        w.elems(&self.c2);
        w.buf
    }

    pub fn from_bytes(bytes: &[u8], pp: &PublicParams<B>) -> Result<Self, CodecError> {
        let (header, mut r) = parse(bytes)?;
        header.expect_kind(KIND_CT)?;
        header.expect_params(pp)?;
        r.expect_remaining(7)?;
        let b = pp.suite.backend();
        let c = r.elem(&b.gt_identity())?;
        let c1 = r.triple(&b.g1_identity())?;
        let c2 = r.triple(&b.g1_identity())?;
        Ok(Ciphertext { c, c1, c2 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::MockBackend;
    use crate::scheme;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn fixture() -> (MasterKey<MockBackend>, PublicParams<MockBackend>, ChaCha20Rng) {
        let suite = GroupSuite::mock(1009, 3).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let (mk, pp) = scheme::setup(&suite, 3, &mut rng).unwrap();
        (mk, pp, rng)
    }

    #[test]
    fn round_trips() {
        let (mk, pp, mut rng) = fixture();
        let pp2 = PublicParams::<MockBackend>::from_bytes(&pp.to_bytes()).unwrap();
        assert_eq!(pp2.to_bytes(), pp.to_bytes());
        assert_eq!(MasterKey::from_bytes(&mk.to_bytes(&pp), &pp).unwrap(), mk);
        let id = HierarchicalIdentity::new(vec![pp.suite.scalar(4)]).unwrap();
        let sk = scheme::keygen(&id, &mk, &pp, &mut rng).unwrap();
        assert_eq!(PrivateKey::from_bytes(&sk.to_bytes(&pp), &pp).unwrap(), sk);
        let ct = scheme::encrypt(&id, &pp.omega, &pp, &mut rng).unwrap();
        assert_eq!(Ciphertext::from_bytes(&ct.to_bytes(&pp), &pp).unwrap(), ct);
    }

    #[test]
    fn rejects_damage() {
        let (mk, pp, _) = fixture();
        let bytes = pp.to_bytes();
        assert!(matches!(PublicParams::<MockBackend>::from_bytes(&bytes[..bytes.len() - 1]), Err(CodecError::Truncated)));
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(PublicParams::<MockBackend>::from_bytes(&bad), Err(CodecError::BadMagic)));
        let mut bad = bytes.clone();
        bad[4] = 9;
        assert!(matches!(PublicParams::<MockBackend>::from_bytes(&bad), Err(CodecError::UnsupportedVersion(9))));
        assert!(matches!(
            MasterKey::<MockBackend>::from_bytes(&bytes, &pp),
            Err(CodecError::WrongKind { expected: 'M', found: 'P' })
        ));
        let mut extra = mk.to_bytes(&pp);
        extra.extend([0, 0, 0, 0]);
        assert!(matches!(MasterKey::from_bytes(&extra, &pp), Err(CodecError::BadElementCount)));
        assert_eq!(peek_backend(&bytes).unwrap(), BackendTag::Mock);
    }

    #[test]
    fn foreign_params_rejected() {
        let (mk, pp, _) = fixture();
        let suite = GroupSuite::mock(1009, 3).unwrap();
        let (_, other) = scheme::setup(&suite, 4, &mut ChaCha20Rng::seed_from_u64(1)).unwrap();
        assert!(matches!(MasterKey::from_bytes(&mk.to_bytes(&pp), &other), Err(CodecError::BackendMismatch)));
    }
}
