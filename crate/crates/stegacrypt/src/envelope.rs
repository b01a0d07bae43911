//! The self-describing encrypted container: key derivation, IV handling,
//! CRC integrity check, and the bit-exact wire format.
//!
//! Wire layout, all integers big-endian:
//!
//! | offset | len | field                                        |
//! |--------|-----|----------------------------------------------|
//! | 0      | 4   | magic `"SGE1"`                               |
//! | 4      | 1   | version, `0x01`                              |
//! | 5      | 1   | flags, bit 0 = key was passphrase-derived    |
//! | 6      | 16  | salt (all zero in raw-key mode)              |
//! | 22     | 8   | CBC IV                                       |
//! | 30     | 4   | ciphertext length, positive multiple of 8    |
//! | 34     | 4   | CRC-32 (IEEE) of the ciphertext              |
//! | 38     | n   | ciphertext                                   |
//!
//! The CRC is a corruption check, not a MAC: it distinguishes a damaged
//! payload from a wrong key, but offers no authenticity guarantee.

use rand::rngs::OsRng;
use rand::{CryptoRng, RngCore};
use sha2::Sha256;

use crate::error::Error;
use crate::tdes::{self, Iv, TdesKey};

pub const MAGIC: [u8; 4] = *b"SGE1";
pub const VERSION: u8 = 0x01;
pub const HEADER_LEN: usize = 38;
pub const SALT_LEN: usize = 16;
/// Fixed for format version 1; a different count means a new version byte.
pub const PBKDF2_ITERATIONS: u32 = 100_000;
/// Largest plaintext the 4-octet length field can frame after padding.
pub const MAX_PLAINTEXT_LEN: usize = u32::MAX as usize - 63;

const FLAG_PASSPHRASE: u8 = 0x01;

/// Key material supplied by the caller: either the raw 24 octets or a
/// passphrase to stretch.
#[derive(Clone)]
pub enum Secret {
    RawKey([u8; 24]),
    Passphrase(String),
}

impl Secret {
    pub fn passphrase(s: impl Into<String>) -> Result<Self, Error> {
        let s = s.into();
        if s.is_empty() {
            return Err(Error::EmptyPassphrase);
        }
        Ok(Secret::Passphrase(s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    pub flags: u8,
    pub salt: [u8; SALT_LEN],
    pub iv: [u8; 8],
    pub crc32: u32,
    pub ciphertext: Vec<u8>,
}

impl Envelope {
    pub fn passphrase_derived(&self) -> bool {
        self.flags & FLAG_PASSPHRASE != 0
    }

    pub fn serialized_len(&self) -> usize {
        HEADER_LEN + self.ciphertext.len()
    }
}

/// Stretch a passphrase into 24 octets of key material with
/// PBKDF2-HMAC-SHA256 at [`PBKDF2_ITERATIONS`]. Deterministic across
/// platforms for a fixed (passphrase, salt).
pub fn derive_key(passphrase: &str, salt: &[u8; SALT_LEN]) -> Result<[u8; 24], Error> {
    if passphrase.is_empty() {
        return Err(Error::EmptyPassphrase);
    }
    let mut out = [0u8; 24];
    pbkdf2::pbkdf2_hmac::<Sha256>(passphrase.as_bytes(), salt, PBKDF2_ITERATIONS, &mut out);
    Ok(out)
}

fn key_for(secret: &Secret, salt: &[u8; SALT_LEN]) -> Result<TdesKey, Error> {
    let material = match secret {
        Secret::RawKey(material) => *material,
        Secret::Passphrase(p) => derive_key(p, salt)?,
    };
    TdesKey::from_material(&material)
}

/// Encrypt `plaintext` into an envelope with salt and IV drawn from `rng`.
/// Exposed so tests can run deterministically; production callers use
/// [`seal`], which draws from the OS.
pub fn seal_with_rng<R: RngCore + CryptoRng>(
    plaintext: &[u8],
    secret: &Secret,
    rng: &mut R,
) -> Result<Envelope, Error> {
    if plaintext.len() > MAX_PLAINTEXT_LEN {
        return Err(Error::PlaintextTooLarge { actual: plaintext.len() });
    }

    let (flags, salt) = match secret {
        Secret::RawKey(_) => (0u8, [0u8; SALT_LEN]),
        Secret::Passphrase(_) => {
            let mut salt = [0u8; SALT_LEN];
            rng.fill_bytes(&mut salt);
            (FLAG_PASSPHRASE, salt)
        }
    };
    let mut iv = [0u8; 8];
    rng.fill_bytes(&mut iv);

    let key = key_for(secret, &salt)?;
    let ciphertext = tdes::encrypt_stream(plaintext, &key, &Iv(iv));
    let crc32 = crc32fast::hash(&ciphertext);
    Ok(Envelope { flags, salt, iv, crc32, ciphertext })
}

pub fn seal(plaintext: &[u8], secret: &Secret) -> Result<Envelope, Error> {
    seal_with_rng(plaintext, secret, &mut OsRng)
}

/// Recover the plaintext. The CRC is checked before any decryption so
/// corruption and wrong-key failures stay distinguishable.
pub fn open(env: &Envelope, secret: &Secret) -> Result<Vec<u8>, Error> {
    let computed = crc32fast::hash(&env.ciphertext);
    if computed != env.crc32 {
        return Err(Error::CrcMismatch { stored: env.crc32, computed });
    }
    let key = key_for(secret, &env.salt)?;
    tdes::decrypt_stream(&env.ciphertext, &key, &Iv(env.iv))
}

pub fn encode(env: &Envelope) -> Vec<u8> {
    let mut out = Vec::with_capacity(env.serialized_len());
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(env.flags);
    out.extend_from_slice(&env.salt);
    out.extend_from_slice(&env.iv);
    out.extend_from_slice(&(env.ciphertext.len() as u32).to_be_bytes());
    out.extend_from_slice(&env.crc32.to_be_bytes());
    out.extend_from_slice(&env.ciphertext);
    out
}

pub fn decode(bytes: &[u8]) -> Result<Envelope, Error> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::TruncatedEnvelope { needed: HEADER_LEN, available: bytes.len() });
    }
    if bytes[0..4] != MAGIC {
        return Err(Error::BadMagic);
    }
    if bytes[4] != VERSION {
        return Err(Error::BadVersion { actual: bytes[4] });
    }
    let flags = bytes[5];
    let salt: [u8; SALT_LEN] = bytes[6..22].try_into().unwrap();
    let iv: [u8; 8] = bytes[22..30].try_into().unwrap();
    let ct_len = u32::from_be_bytes(bytes[30..34].try_into().unwrap());
    let crc32 = u32::from_be_bytes(bytes[34..38].try_into().unwrap());

    if ct_len == 0 || ct_len % 8 != 0 {
        return Err(Error::BadLengthField { ct_len });
    }
    let needed = HEADER_LEN + ct_len as usize;
    if bytes.len() != needed {
        return Err(Error::TruncatedEnvelope { needed, available: bytes.len() });
    }
    let ciphertext = bytes[HEADER_LEN..].to_vec();
    let computed = crc32fast::hash(&ciphertext);
    if computed != crc32 {
        return Err(Error::CrcMismatch { stored: crc32, computed });
    }
    Ok(Envelope { flags, salt, iv, crc32, ciphertext })
}
