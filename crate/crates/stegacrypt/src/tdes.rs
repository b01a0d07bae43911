//! Triple-DES EDE composition over three independent keys, plus the
//! byte-stream cipher built on it: CBC chaining with PKCS#7 padding over
//! 8-octet blocks.

use crate::des::{self, Block, DesKey, RoundKeySchedule};
use crate::error::Error;

pub const BLOCK_LEN: usize = 8;
pub const KEY_LEN: usize = 24;

/// An ordered (K1, K2, K3) triple. Encryption runs E(k3, D(k2, E(k1, b))),
/// decryption the exact reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TdesKey {
    k1: DesKey,
    k2: DesKey,
    k3: DesKey,
}

/// CBC initialization vector. Must be fresh and random per message; the
/// caller owns generation so this module stays deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Iv(pub [u8; 8]);

/// Non-fatal key-quality findings. Effective security may be silently
/// reduced by these; callers decide whether to surface them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyWarning {
    /// K1 and K2 agree in their effective bits, collapsing EDE toward
    /// single DES under K3.
    DegenerateK1K2,
    /// K2 and K3 agree in their effective bits, collapsing EDE toward
    /// single DES under K1.
    DegenerateK2K3,
    /// One of the components is a published DES weak or semi-weak key.
    WeakComponent { index: usize },
}

// The four weak and twelve semi-weak DES keys, parity bits included.
#[rustfmt::skip]
const SUSPECT_KEYS: [[u8; 8]; 16] = [
    [0x01, 0x01, 0x01, 0x01, 0x01, 0x01, 0x01, 0x01],
    [0xFE, 0xFE, 0xFE, 0xFE, 0xFE, 0xFE, 0xFE, 0xFE],
    [0xE0, 0xE0, 0xE0, 0xE0, 0xF1, 0xF1, 0xF1, 0xF1],
    [0x1F, 0x1F, 0x1F, 0x1F, 0x0E, 0x0E, 0x0E, 0x0E],
    [0x01, 0xFE, 0x01, 0xFE, 0x01, 0xFE, 0x01, 0xFE],
    [0xFE, 0x01, 0xFE, 0x01, 0xFE, 0x01, 0xFE, 0x01],
    [0x1F, 0xE0, 0x1F, 0xE0, 0x0E, 0xF1, 0x0E, 0xF1],
    [0xE0, 0x1F, 0xE0, 0x1F, 0xF1, 0x0E, 0xF1, 0x0E],
    [0x01, 0xE0, 0x01, 0xE0, 0x01, 0xF1, 0x01, 0xF1],
    [0xE0, 0x01, 0xE0, 0x01, 0xF1, 0x01, 0xF1, 0x01],
    [0x1F, 0xFE, 0x1F, 0xFE, 0x0E, 0xFE, 0x0E, 0xFE],
    [0xFE, 0x1F, 0xFE, 0x1F, 0xFE, 0x0E, 0xFE, 0x0E],
    [0x01, 0x1F, 0x01, 0x1F, 0x01, 0x0E, 0x01, 0x0E],
    [0x1F, 0x01, 0x1F, 0x01, 0x0E, 0x01, 0x0E, 0x01],
    [0xE0, 0xFE, 0xE0, 0xFE, 0xF1, 0xFE, 0xF1, 0xFE],
    [0xFE, 0xE0, 0xFE, 0xE0, 0xFE, 0xF1, 0xFE, 0xF1],
];

impl TdesKey {
    pub fn new(k1: DesKey, k2: DesKey, k3: DesKey) -> Self {
        TdesKey { k1, k2, k3 }
    }

    /// Partition 24 octets of key material: K1 = octets 0..8, K2 = 8..16,
    /// K3 = 16..24.
    pub fn from_material(material: &[u8]) -> Result<Self, Error> {
        if material.len() != KEY_LEN {
            return Err(Error::WrongKeyLength { actual: material.len() });
        }
        let part = |range: std::ops::Range<usize>| {
            DesKey::new(material[range].try_into().unwrap())
        };
        Ok(TdesKey::new(part(0..8), part(8..16), part(16..24)))
    }

    pub fn components(&self) -> (&DesKey, &DesKey, &DesKey) {
        (&self.k1, &self.k2, &self.k3)
    }

    /// Weak-key and degeneracy findings. Warnings, never errors: no key
    /// policy is enforced, but silent security loss is worth flagging.
    pub fn warnings(&self) -> Vec<KeyWarning> {
        let mut out = Vec::new();
        if self.k1.effective_bytes() == self.k2.effective_bytes() {
            out.push(KeyWarning::DegenerateK1K2);
        }
        if self.k2.effective_bytes() == self.k3.effective_bytes() {
            out.push(KeyWarning::DegenerateK2K3);
        }
        for (index, key) in [self.k1, self.k2, self.k3].iter().enumerate() {
            let eff = key.effective_bytes();
            if SUSPECT_KEYS
                .iter()
                .any(|s| DesKey::new(*s).effective_bytes() == eff)
            {
                out.push(KeyWarning::WeakComponent { index });
            }
        }
        out
    }

    fn schedules(&self) -> [RoundKeySchedule; 3] {
        [
            des::key_schedule(&self.k1),
            des::key_schedule(&self.k2),
            des::key_schedule(&self.k3),
        ]
    }
}

fn encrypt_with(schedules: &[RoundKeySchedule; 3], block: Block) -> Block {
    let after_k1 = des::encrypt_with_schedule(block, &schedules[0]);
    let after_k2 = des::decrypt_with_schedule(after_k1, &schedules[1]);
    des::encrypt_with_schedule(after_k2, &schedules[2])
}

fn decrypt_with(schedules: &[RoundKeySchedule; 3], block: Block) -> Block {
    let after_k3 = des::decrypt_with_schedule(block, &schedules[2]);
    let after_k2 = des::encrypt_with_schedule(after_k3, &schedules[1]);
    des::decrypt_with_schedule(after_k2, &schedules[0])
}

/// E(k3, D(k2, E(k1, block))).
pub fn encrypt_block(block: Block, key: &TdesKey) -> Block {
    encrypt_with(&key.schedules(), block)
}

/// D(k1, E(k2, D(k3, block))); exact inverse of [`encrypt_block`].
pub fn decrypt_block(block: Block, key: &TdesKey) -> Block {
    decrypt_with(&key.schedules(), block)
}

/// CBC-encrypt an arbitrary-length byte stream. PKCS#7 padding is always
/// applied, so output length is (len/8 + 1) * 8 rounded to blocks.
pub fn encrypt_stream(plaintext: &[u8], key: &TdesKey, iv: &Iv) -> Vec<u8> {
    let schedules = key.schedules();
    let pad = BLOCK_LEN - plaintext.len() % BLOCK_LEN;
    let mut padded = plaintext.to_vec();
    padded.extend(std::iter::repeat(pad as u8).take(pad));

    let mut out = Vec::with_capacity(padded.len());
    let mut chain = Block::from_bytes(iv.0);
    for chunk in padded.chunks_exact(BLOCK_LEN) {
        let block = Block::from_bytes(chunk.try_into().unwrap());
        chain = encrypt_with(&schedules, Block(block.0 ^ chain.0));
        out.extend_from_slice(&chain.to_bytes());
    }
    out
}

/// Inverse of [`encrypt_stream`]; validates and strips the padding.
pub fn decrypt_stream(ciphertext: &[u8], key: &TdesKey, iv: &Iv) -> Result<Vec<u8>, Error> {
    if ciphertext.is_empty() || ciphertext.len() % BLOCK_LEN != 0 {
        return Err(Error::BadCiphertextLength { actual: ciphertext.len() });
    }
    let schedules = key.schedules();
    let mut out = Vec::with_capacity(ciphertext.len());
    let mut chain = Block::from_bytes(iv.0);
    for chunk in ciphertext.chunks_exact(BLOCK_LEN) {
        let block = Block::from_bytes(chunk.try_into().unwrap());
        let plain = decrypt_with(&schedules, block);
        out.extend_from_slice(&Block(plain.0 ^ chain.0).to_bytes());
        chain = block;
    }

    let pad = *out.last().unwrap() as usize;
    if pad == 0 || pad > BLOCK_LEN || out[out.len() - pad..].iter().any(|&b| b != pad as u8) {
        return Err(Error::BadPadding);
    }
    out.truncate(out.len() - pad);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_key(rng: &mut StdRng) -> TdesKey {
        let material: [u8; 24] = rng.gen();
        TdesKey::from_material(&material).unwrap()
    }

    fn oracle_encrypt(material: &[u8; 24], block: [u8; 8]) -> [u8; 8] {
        use ::des::cipher::{BlockEncrypt, KeyInit};
        let cipher = ::des::TdesEde3::new_from_slice(material).unwrap();
        let mut buf = block.into();
        cipher.encrypt_block(&mut buf);
        buf.into()
    }

    #[test]
    fn split_key_partitions_in_order() {
        let material: Vec<u8> = (0..24).collect();
        let key = TdesKey::from_material(&material).unwrap();
        let (k1, k2, k3) = key.components();
        assert_eq!(k1.bytes(), &[0, 1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(k2.bytes(), &[8, 9, 10, 11, 12, 13, 14, 15]);
        assert_eq!(k3.bytes(), &[16, 17, 18, 19, 20, 21, 22, 23]);
    }

    #[test]
    fn split_key_rejects_wrong_length() {
        assert!(matches!(
            TdesKey::from_material(&[0u8; 23]),
            Err(Error::WrongKeyLength { actual: 23 })
        ));
        assert!(matches!(
            TdesKey::from_material(&[0u8; 25]),
            Err(Error::WrongKeyLength { actual: 25 })
        ));
    }

    #[test]
    fn repeated_material_gives_equal_components() {
        let mut material = [0u8; 24];
        for chunk in material.chunks_exact_mut(8) {
            chunk.copy_from_slice(&[0xA5; 8]);
        }
        let key = TdesKey::from_material(&material).unwrap();
        let (k1, k2, k3) = key.components();
        assert_eq!(k1, k2);
        assert_eq!(k2, k3);
    }

    #[test]
    fn degenerates_to_single_des_with_equal_keys() {
        let mut rng = StdRng::seed_from_u64(10);
        for _ in 0..100 {
            let single = DesKey::new(rng.gen());
            let triple = TdesKey::new(single, single, single);
            let block = Block(rng.gen());
            assert_eq!(encrypt_block(block, &triple), des::encrypt_block(block, &single));
        }
    }

    #[test]
    fn matches_reference_implementation() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..100 {
            let material: [u8; 24] = rng.gen();
            let key = TdesKey::from_material(&material).unwrap();
            let block: [u8; 8] = rng.gen();
            let ours = encrypt_block(Block::from_bytes(block), &key).to_bytes();
            assert_eq!(ours, oracle_encrypt(&material, block));
        }
    }

    #[test]
    fn block_roundtrip() {
        let mut rng = StdRng::seed_from_u64(12);
        for _ in 0..1000 {
            let key = random_key(&mut rng);
            let block = Block(rng.gen());
            assert_eq!(decrypt_block(encrypt_block(block, &key), &key), block);
        }
    }

    #[test]
    fn stream_lengths_follow_padding_rule() {
        let mut rng = StdRng::seed_from_u64(13);
        let key = random_key(&mut rng);
        let iv = Iv(rng.gen());
        assert_eq!(encrypt_stream(&[], &key, &iv).len(), 8);
        assert_eq!(encrypt_stream(&[0u8; 8], &key, &iv).len(), 16);
        assert_eq!(encrypt_stream(&[0u8; 9], &key, &iv).len(), 16);
    }

    #[test]
    fn stream_roundtrip_all_small_lengths() {
        let mut rng = StdRng::seed_from_u64(14);
        let key = random_key(&mut rng);
        for len in 0..=128 {
            let iv = Iv(rng.gen());
            let msg: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
            let ct = encrypt_stream(&msg, &key, &iv);
            assert_eq!(decrypt_stream(&ct, &key, &iv).unwrap(), msg);
        }
    }

    #[test]
    fn identical_blocks_encrypt_differently_under_cbc() {
        let mut rng = StdRng::seed_from_u64(15);
        let key = random_key(&mut rng);
        let iv = Iv(rng.gen());
        let msg = [0x42u8; 16];
        let ct = encrypt_stream(&msg, &key, &iv);
        assert_ne!(ct[0..8], ct[8..16]);
    }

    #[test]
    fn wrong_key_yields_bad_padding() {
        let mut rng = StdRng::seed_from_u64(16);
        let mut bad_padding_seen = 0;
        for _ in 0..100 {
            let key = random_key(&mut rng);
            let other = random_key(&mut rng);
            let iv = Iv(rng.gen());
            let ct = encrypt_stream(b"some patient record", &key, &iv);
            if decrypt_stream(&ct, &other, &iv).is_err() {
                bad_padding_seen += 1;
            }
        }
        // Random final block has valid padding with probability under 1/256
        // per trial, so seeing zero errors in 100 trials is effectively
        // impossible.
        assert!(bad_padding_seen >= 1);
    }

    #[test]
    fn short_ciphertext_rejected() {
        let mut rng = StdRng::seed_from_u64(17);
        let key = random_key(&mut rng);
        let iv = Iv([0; 8]);
        assert!(matches!(
            decrypt_stream(&[0u8; 7], &key, &iv),
            Err(Error::BadCiphertextLength { actual: 7 })
        ));
        assert!(matches!(
            decrypt_stream(&[], &key, &iv),
            Err(Error::BadCiphertextLength { actual: 0 })
        ));
    }

    #[test]
    fn ciphertext_does_not_echo_plaintext() {
        let mut rng = StdRng::seed_from_u64(18);
        for _ in 0..1000 {
            let key = random_key(&mut rng);
            let iv = Iv(rng.gen());
            let msg: Vec<u8> = (0..16).map(|_| rng.gen()).collect();
            let ct = encrypt_stream(&msg, &key, &iv);
            assert_ne!(&ct[..msg.len()], &msg[..]);
        }
    }

    #[test]
    fn forty_eight_rounds_per_block() {
        let key = TdesKey::from_material(&[7u8; 24]).unwrap();
        let before = des::rounds_executed();
        encrypt_block(Block(0), &key);
        assert_eq!(des::rounds_executed() - before, 48);
        let before = des::rounds_executed();
        decrypt_block(Block(0), &key);
        assert_eq!(des::rounds_executed() - before, 48);
    }

    #[test]
    fn weak_key_warnings() {
        let weak = DesKey::new([0x01; 8]);
        let fine = DesKey::new([0x13, 0x34, 0x57, 0x79, 0x9B, 0xBC, 0xDF, 0xF1]);
        let other = DesKey::new([0x5A, 0x5A, 0x5A, 0x5A, 0x5A, 0x5A, 0x5A, 0x5A]);

        let key = TdesKey::new(weak, fine, other);
        assert_eq!(key.warnings(), vec![KeyWarning::WeakComponent { index: 0 }]);

        let key = TdesKey::new(fine, fine, other);
        assert!(key.warnings().contains(&KeyWarning::DegenerateK1K2));

        let key = TdesKey::new(fine, other, other);
        assert!(key.warnings().contains(&KeyWarning::DegenerateK2K3));

        let key = TdesKey::new(fine, other, fine);
        assert!(key.warnings().is_empty());
    }
}
