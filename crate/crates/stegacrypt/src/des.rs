//! Single-DES block primitive: key schedule, 16 Feistel rounds, and the
//! fixed permutation/substitution tables, operating on 64-bit blocks.
//!
//! Bit numbering follows the DES convention throughout: bit 1 is the most
//! significant bit of the first octet. The `permute` helper below is the
//! only place that convention is translated into shifts.

use std::cell::Cell;

thread_local! {
    // Per-thread so concurrent callers cannot skew each other's readings.
    static ROUND_COUNTER: Cell<u64> = const { Cell::new(0) };
}

/// Feistel rounds executed so far on the calling thread. A full DES block
/// operation adds 16; a 3DES block operation adds 48.
pub fn rounds_executed() -> u64 {
    ROUND_COUNTER.with(|c| c.get())
}

/// 64 bits of key material. Bit 8 of each octet is a parity bit and never
/// reaches the cipher: PC-1 discards it, so keys differing only in parity
/// produce identical round-key schedules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DesKey([u8; 8]);

impl DesKey {
    pub fn new(bytes: [u8; 8]) -> Self {
        DesKey(bytes)
    }

    pub fn bytes(&self) -> &[u8; 8] {
        &self.0
    }

    /// The 56 effective bits, with parity masked off. Two keys are
    /// cipher-equivalent iff their effective bytes match.
    pub fn effective_bytes(&self) -> [u8; 8] {
        let mut out = self.0;
        for b in &mut out {
            *b &= 0xFE;
        }
        out
    }
}

/// A 64-bit block. Serialized big-endian: the first octet of a message is
/// the most significant octet of the block value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Block(pub u64);

impl Block {
    pub fn from_bytes(bytes: [u8; 8]) -> Self {
        Block(u64::from_be_bytes(bytes))
    }

    pub fn to_bytes(self) -> [u8; 8] {
        self.0.to_be_bytes()
    }
}

/// The 16 per-round 48-bit subkeys, in encryption order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundKeySchedule {
    keys: [u64; 16],
}

impl RoundKeySchedule {
    pub fn round_keys(&self) -> &[u64; 16] {
        &self.keys
    }
}

// Tables transcribed from the published DES standard (FIPS 46-3). Entries
// are 1-based source-bit positions per the standard's numbering.

#[rustfmt::skip]
const IP: [u8; 64] = [
    58, 50, 42, 34, 26, 18, 10,  2,
    60, 52, 44, 36, 28, 20, 12,  4,
    62, 54, 46, 38, 30, 22, 14,  6,
    64, 56, 48, 40, 32, 24, 16,  8,
    57, 49, 41, 33, 25, 17,  9,  1,
    59, 51, 43, 35, 27, 19, 11,  3,
    61, 53, 45, 37, 29, 21, 13,  5,
    63, 55, 47, 39, 31, 23, 15,  7,
];

#[rustfmt::skip]
const FP: [u8; 64] = [
    40,  8, 48, 16, 56, 24, 64, 32,
    39,  7, 47, 15, 55, 23, 63, 31,
    38,  6, 46, 14, 54, 22, 62, 30,
    37,  5, 45, 13, 53, 21, 61, 29,
    36,  4, 44, 12, 52, 20, 60, 28,
    35,  3, 43, 11, 51, 19, 59, 27,
    34,  2, 42, 10, 50, 18, 58, 26,
    33,  1, 41,  9, 49, 17, 57, 25,
];

#[rustfmt::skip]
const EXPANSION: [u8; 48] = [
    32,  1,  2,  3,  4,  5,
     4,  5,  6,  7,  8,  9,
     8,  9, 10, 11, 12, 13,
    12, 13, 14, 15, 16, 17,
    16, 17, 18, 19, 20, 21,
    20, 21, 22, 23, 24, 25,
    24, 25, 26, 27, 28, 29,
    28, 29, 30, 31, 32,  1,
];

#[rustfmt::skip]
const P: [u8; 32] = [
    16,  7, 20, 21, 29, 12, 28, 17,
     1, 15, 23, 26,  5, 18, 31, 10,
     2,  8, 24, 14, 32, 27,  3,  9,
    19, 13, 30,  6, 22, 11,  4, 25,
];

#[rustfmt::skip]
const PC1: [u8; 56] = [
    57, 49, 41, 33, 25, 17,  9,
     1, 58, 50, 42, 34, 26, 18,
    10,  2, 59, 51, 43, 35, 27,
    19, 11,  3, 60, 52, 44, 36,
    63, 55, 47, 39, 31, 23, 15,
     7, 62, 54, 46, 38, 30, 22,
    14,  6, 61, 53, 45, 37, 29,
    21, 13,  5, 28, 20, 12,  4,
];

#[rustfmt::skip]
const PC2: [u8; 48] = [
    14, 17, 11, 24,  1,  5,
     3, 28, 15,  6, 21, 10,
    23, 19, 12,  4, 26,  8,
    16,  7, 27, 20, 13,  2,
    41, 52, 31, 37, 47, 55,
    30, 40, 51, 45, 33, 48,
    44, 49, 39, 56, 34, 53,
    46, 42, 50, 36, 29, 32,
];

const SHIFTS: [u8; 16] = [1, 1, 2, 2, 2, 2, 2, 2, 1, 2, 2, 2, 2, 2, 2, 1];

#[rustfmt::skip]
const SBOXES: [[u8; 64]; 8] = [
    [
        14,  4, 13,  1,  2, 15, 11,  8,  3, 10,  6, 12,  5,  9,  0,  7,
         0, 15,  7,  4, 14,  2, 13,  1, 10,  6, 12, 11,  9,  5,  3,  8,
         4,  1, 14,  8, 13,  6,  2, 11, 15, 12,  9,  7,  3, 10,  5,  0,
        15, 12,  8,  2,  4,  9,  1,  7,  5, 11,  3, 14, 10,  0,  6, 13,
    ],
    [
        15,  1,  8, 14,  6, 11,  3,  4,  9,  7,  2, 13, 12,  0,  5, 10,
         3, 13,  4,  7, 15,  2,  8, 14, 12,  0,  1, 10,  6,  9, 11,  5,
         0, 14,  7, 11, 10,  4, 13,  1,  5,  8, 12,  6,  9,  3,  2, 15,
        13,  8, 10,  1,  3, 15,  4,  2, 11,  6,  7, 12,  0,  5, 14,  9,
    ],
    [
        10,  0,  9, 14,  6,  3, 15,  5,  1, 13, 12,  7, 11,  4,  2,  8,
        13,  7,  0,  9,  3,  4,  6, 10,  2,  8,  5, 14, 12, 11, 15,  1,
        13,  6,  4,  9,  8, 15,  3,  0, 11,  1,  2, 12,  5, 10, 14,  7,
         1, 10, 13,  0,  6,  9,  8,  7,  4, 15, 14,  3, 11,  5,  2, 12,
    ],
    [
         7, 13, 14,  3,  0,  6,  9, 10,  1,  2,  8,  5, 11, 12,  4, 15,
        13,  8, 11,  5,  6, 15,  0,  3,  4,  7,  2, 12,  1, 10, 14,  9,
        10,  6,  9,  0, 12, 11,  7, 13, 15,  1,  3, 14,  5,  2,  8,  4,
         3, 15,  0,  6, 10,  1, 13,  8,  9,  4,  5, 11, 12,  7,  2, 14,
    ],
    [
         2, 12,  4,  1,  7, 10, 11,  6,  8,  5,  3, 15, 13,  0, 14,  9,
        14, 11,  2, 12,  4,  7, 13,  1,  5,  0, 15, 10,  3,  9,  8,  6,
         4,  2,  1, 11, 10, 13,  7,  8, 15,  9, 12,  5,  6,  3,  0, 14,
        11,  8, 12,  7,  1, 14,  2, 13,  6, 15,  0,  9, 10,  4,  5,  3,
    ],
    [
        12,  1, 10, 15,  9,  2,  6,  8,  0, 13,  3,  4, 14,  7,  5, 11,
        10, 15,  4,  2,  7, 12,  9,  5,  6,  1, 13, 14,  0, 11,  3,  8,
         9, 14, 15,  5,  2,  8, 12,  3,  7,  0,  4, 10,  1, 13, 11,  6,
         4,  3,  2, 12,  9,  5, 15, 10, 11, 14,  1,  7,  6,  0,  8, 13,
    ],
    [
         4, 11,  2, 14, 15,  0,  8, 13,  3, 12,  9,  7,  5, 10,  6,  1,
        13,  0, 11,  7,  4,  9,  1, 10, 14,  3,  5, 12,  2, 15,  8,  6,
         1,  4, 11, 13, 12,  3,  7, 14, 10, 15,  6,  8,  0,  5,  9,  2,
         6, 11, 13,  8,  1,  4, 10,  7,  9,  5,  0, 15, 14,  2,  3, 12,
    ],
    [
        13,  2,  8,  4,  6, 15, 11,  1, 10,  9,  3, 14,  5,  0, 12,  7,
         1, 15, 13,  8, 10,  3,  7,  4, 12,  5,  6, 11,  0, 14,  9,  2,
         7, 11,  4,  1,  9, 12, 14,  2,  0,  6, 10, 13, 15,  3,  5,  8,
         2,  1, 14,  7,  4, 10,  8, 13, 15, 12,  9,  0,  3,  5,  6, 11,
    ],
];

/// Gather the bits named by `table` out of `value`. `width` is the bit width
/// of `value`; table entries count from 1 at the most significant bit.
fn permute(value: u64, width: u8, table: &[u8]) -> u64 {
    let mut out = 0u64;
    for &pos in table {
        out <<= 1;
        out |= (value >> (width - pos)) & 1;
    }
    out
}

/// Derive the 16 round keys from a key. Decryption uses the same schedule
/// applied in reverse order.
pub fn key_schedule(key: &DesKey) -> RoundKeySchedule {
    let key64 = u64::from_be_bytes(key.0);
    // PC-1 drops the parity bits, leaving the 56-bit C||D register.
    let mut cd = permute(key64, 64, &PC1);

    let mut keys = [0u64; 16];
    for (round_key, &shift) in keys.iter_mut().zip(SHIFTS.iter()) {
        for _ in 0..shift {
            // Rotate the 28-bit halves left independently.
            let c = (cd >> 28) & 0x0FFF_FFFF;
            let d = cd & 0x0FFF_FFFF;
            let c = ((c << 1) | (c >> 27)) & 0x0FFF_FFFF;
            let d = ((d << 1) | (d >> 27)) & 0x0FFF_FFFF;
            cd = (c << 28) | d;
        }
        *round_key = permute(cd, 56, &PC2);
    }
    RoundKeySchedule { keys }
}

/// The keyed f-function: expand the 32-bit half, mix in the round key,
/// substitute through S1..S8, permute.
fn feistel(half: u32, round_key: u64) -> u32 {
    let expanded = permute(half as u64, 32, &EXPANSION) ^ round_key;
    let mut substituted = 0u32;
    for (i, sbox) in SBOXES.iter().enumerate() {
        let chunk = ((expanded >> (42 - 6 * i)) & 0x3F) as usize;
        // Row is the outer bit pair, column the middle four bits.
        let row = ((chunk >> 4) & 0x2) | (chunk & 0x1);
        let col = (chunk >> 1) & 0xF;
        substituted = (substituted << 4) | u32::from(sbox[row * 16 + col]);
    }
    permute(substituted as u64, 32, &P) as u32
}

fn run_rounds(block: Block, keys: impl Iterator<Item = u64>) -> Block {
    let permuted = permute(block.0, 64, &IP);
    let mut left = (permuted >> 32) as u32;
    let mut right = permuted as u32;

    for round_key in keys {
        ROUND_COUNTER.with(|c| c.set(c.get() + 1));
        let next = left ^ feistel(right, round_key);
        left = right;
        right = next;
    }

    // Halves are swapped before the final permutation.
    let preoutput = (u64::from(right) << 32) | u64::from(left);
    Block(permute(preoutput, 64, &FP))
}

pub fn encrypt_with_schedule(block: Block, schedule: &RoundKeySchedule) -> Block {
    run_rounds(block, schedule.keys.iter().copied())
}

pub fn decrypt_with_schedule(block: Block, schedule: &RoundKeySchedule) -> Block {
    run_rounds(block, schedule.keys.iter().rev().copied())
}

pub fn encrypt_block(block: Block, key: &DesKey) -> Block {
    encrypt_with_schedule(block, &key_schedule(key))
}

pub fn decrypt_block(block: Block, key: &DesKey) -> Block {
    decrypt_with_schedule(block, &key_schedule(key))
}
