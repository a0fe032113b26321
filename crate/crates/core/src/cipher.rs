//! Encryption and decryption over a [`KeyStore`].
//!
//! Encryption zigzag-scans the plaintext bytes, reads each byte as a quad,
//! and replaces it with the position of that quad in the key sequence,
//! searching circularly from a start location `draw(seed, i, n)`.
//! Decryption reads the four bases at each stored position and undoes the scan.
//!
//! Each position is independent of the others, so encryption runs in
//! parallel and still produces the same output as a sequential pass.
//!
//! File layout (little-endian):
//!
//! ```text
//! "DNAZ" | version u8 = 1 | flags u8 | width u32 | height u32 | seed u64
//!        | key fingerprint [32] | payload
//! ```
//!
//! flags bit0: payload is bit-packed; bit1: 8x8 block zigzag scan.
//! An unpacked payload is one u32 per position. A packed payload is one
//! byte holding the index width in bits, then every index written MSB-first
//! at that width, zero-padded to a byte boundary.

use rayon::prelude::*;

use crate::dna_codec::{byte_to_quad, quad_to_byte};
use crate::error::{Error, Result};
use crate::image_io::Raster;
use crate::keystore::{Fingerprint, KeyStore};
use crate::zigzag::{ScanMode, ZigzagPerm};

pub const CIPHERTEXT_MAGIC: &[u8; 4] = b"DNAZ";
pub const CIPHERTEXT_VERSION: u8 = 1;
const FLAG_PACKED: u8 = 0b01;
const FLAG_BLOCK8: u8 = 0b10;
const HEADER_LEN: usize = 4 + 1 + 1 + 4 + 4 + 8 + 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    pub width: u32,
    pub height: u32,
    pub scan: ScanMode,
    pub key_fingerprint: Fingerprint,
    pub seed: u64,
    /// One key-sequence position per plaintext byte, in scan order.
    pub indices: Vec<u32>,
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Start location for scan position `i`: a stateless function of `(seed, i)`
/// reduced modulo `n`.
#[inline]
pub fn draw(seed: u64, i: u64, n: u64) -> u64 {
    debug_assert!(n > 0);
    let stream = mix64(seed ^ 0x6A09_E667_F3BC_C909);
    mix64(stream.wrapping_add(GOLDEN_GAMMA.wrapping_mul(i.wrapping_add(1)))) % n
}

pub fn encrypt(img: &Raster, ks: &KeyStore, seed: u64) -> Result<Ciphertext> {
    encrypt_with_scan(img, ks, seed, ScanMode::FullFrame)
}

pub fn encrypt_with_scan(
    img: &Raster,
    ks: &KeyStore,
    seed: u64,
    scan: ScanMode,
) -> Result<Ciphertext> {
    let (width, height) = dims_u32(img.width(), img.height())?;
    let perm = ZigzagPerm::for_mode(img.height(), img.width(), scan)?;
    let scanned = perm.apply(img.pixels())?;
    let n = ks.len() as u64;

    let indices = scanned
        .par_iter()
        .enumerate()
        .map(|(i, &b)| {
            let q = byte_to_quad(b);
            let p = ks.lookup_from(q, draw(seed, i as u64, n) as usize)?;
            debug_assert_eq!(quad_to_byte(ks.sequence().quad_at(p as usize)), b);
            Ok(p)
        })
        .collect::<Result<Vec<u32>>>()?;

    Ok(Ciphertext {
        width,
        height,
        scan,
        key_fingerprint: *ks.fingerprint(),
        seed,
        indices,
    })
}

pub fn decrypt(ct: &Ciphertext, ks: &KeyStore) -> Result<Raster> {
    if &ct.key_fingerprint != ks.fingerprint() {
        return Err(Error::KeyMismatch);
    }
    decrypt_ignoring_fingerprint(ct, ks)
}

/// Decrypt without comparing key fingerprints. This exists to measure how a
/// wrong key corrupts the output; normal callers want [`decrypt`].
pub fn decrypt_ignoring_fingerprint(ct: &Ciphertext, ks: &KeyStore) -> Result<Raster> {
    let (w, h) = (ct.width as usize, ct.height as usize);
    let perm = ZigzagPerm::for_mode(h, w, ct.scan)?;
    if ct.indices.len() != perm.len() {
        return Err(Error::LengthMismatch {
            expected: perm.len(),
            actual: ct.indices.len(),
        });
    }
    let seq = ks.sequence();
    let scanned = ct
        .indices
        .iter()
        .enumerate()
        .map(|(position, &index)| {
            if !seq.is_indexable_window(index as usize) {
                return Err(Error::IndexOutOfRange { position, index });
            }
            Ok(quad_to_byte(seq.quad_at(index as usize)))
        })
        .collect::<Result<Vec<u8>>>()?;
    Raster::new(w, h, perm.invert_apply(&scanned)?)
}

fn dims_u32(width: usize, height: usize) -> Result<(u32, u32)> {
    let conv = |v: usize| {
        u32::try_from(v).map_err(|_| Error::DimensionMismatch(format!("{v} exceeds u32")))
    };
    Ok((conv(width)?, conv(height)?))
}

/// Bits needed for indices into a key of `key_len` bases: `ceil(log2(key_len - 3))`, at least 1.
pub fn packed_index_bits(key_len: usize) -> u8 {
    let windows = key_len.saturating_sub(3).max(2) as u64;
    (64 - (windows - 1).leading_zeros()).max(1) as u8
}

impl Ciphertext {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Serialize with one u32 per index.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.header(0);
        out.reserve(self.indices.len() * 4);
        for &i in &self.indices {
            out.extend_from_slice(&i.to_le_bytes());
        }
        out
    }

    /// Serialize with `bits`-wide packed indices. Fails if an index does not fit.
    pub fn to_packed_bytes(&self, bits: u8) -> Result<Vec<u8>> {
        if !(1..=32).contains(&bits) {
            return Err(Error::MalformedCiphertext(format!(
                "index width {bits} not in 1..=32"
            )));
        }
        if let Some(&big) = self.indices.iter().find(|&&i| bits < 32 && i >> bits != 0) {
            return Err(Error::MalformedCiphertext(format!(
                "index {big} does not fit in {bits} bits"
            )));
        }
        let mut out = self.header(FLAG_PACKED);
        out.push(bits);
        let mut acc: u64 = 0;
        let mut filled = 0u32;
        for &i in &self.indices {
            acc = (acc << bits) | u64::from(i);
            filled += u32::from(bits);
            while filled >= 8 {
                filled -= 8;
                out.push((acc >> filled) as u8);
            }
            acc &= (1u64 << filled) - 1;
        }
        if filled > 0 {
            out.push((acc << (8 - filled)) as u8);
        }
        Ok(out)
    }

    fn header(&self, flags: u8) -> Vec<u8> {
        let flags = flags
            | match self.scan {
                ScanMode::FullFrame => 0,
                ScanMode::Block8 => FLAG_BLOCK8,
            };
        let mut out = Vec::with_capacity(HEADER_LEN);
        out.extend_from_slice(CIPHERTEXT_MAGIC);
        out.push(CIPHERTEXT_VERSION);
        out.push(flags);
        out.extend_from_slice(&self.width.to_le_bytes());
        out.extend_from_slice(&self.height.to_le_bytes());
        out.extend_from_slice(&self.seed.to_le_bytes());
        out.extend_from_slice(&self.key_fingerprint);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |m: String| Error::MalformedCiphertext(m);
        if bytes.len() < HEADER_LEN {
            return Err(bad(format!(
                "{} bytes is shorter than the header",
                bytes.len()
            )));
        }
        if &bytes[..4] != CIPHERTEXT_MAGIC {
            return Err(bad("bad magic".into()));
        }
        if bytes[4] != CIPHERTEXT_VERSION {
            return Err(bad(format!("unsupported version {}", bytes[4])));
        }
        let flags = bytes[5];
        if flags & !(FLAG_PACKED | FLAG_BLOCK8) != 0 {
            return Err(bad(format!("unknown flags {flags:#04x}")));
        }
        let le32 = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes"));
        let width = le32(6);
        let height = le32(10);
        let seed = u64::from_le_bytes(bytes[14..22].try_into().expect("8 bytes"));
        let key_fingerprint: Fingerprint = bytes[22..54].try_into().expect("32 bytes");
        if width == 0 || height == 0 {
            return Err(Error::ZeroDimension);
        }
        let count = (width as usize)
            .checked_mul(height as usize)
            .ok_or_else(|| bad("dimensions overflow".into()))?;
        let payload = &bytes[HEADER_LEN..];
        let scan = if flags & FLAG_BLOCK8 != 0 {
            ScanMode::Block8
        } else {
            ScanMode::FullFrame
        };

        let indices = if flags & FLAG_PACKED == 0 {
            if payload.len() != count * 4 {
                return Err(bad(format!(
                    "payload is {} bytes, expected {}",
                    payload.len(),
                    count * 4
                )));
            }
            payload
                .chunks_exact(4)
                .map(|c| u32::from_le_bytes(c.try_into().expect("4 bytes")))
                .collect()
        } else {
            let (&bits, packed) = payload
                .split_first()
                .ok_or_else(|| bad("missing index width".into()))?;
            if !(1..=32).contains(&bits) {
                return Err(bad(format!("index width {bits} not in 1..=32")));
            }
            let need = (count * bits as usize).div_ceil(8);
            if packed.len() != need {
                return Err(bad(format!(
                    "packed payload is {} bytes, expected {need}",
                    packed.len()
                )));
            }
            unpack(packed, bits, count)
        };

        Ok(Ciphertext {
            width,
            height,
            scan,
            key_fingerprint,
            seed,
            indices,
        })
    }
}

fn unpack(packed: &[u8], bits: u8, count: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(count);
    let mut acc: u64 = 0;
    let mut filled = 0u32;
    let mut bytes = packed.iter();
    let mask = (1u64 << bits) - 1;
    while out.len() < count {
        while filled < u32::from(bits) {
            acc = (acc << 8) | u64::from(*bytes.next().expect("length checked by caller"));
            filled += 8;
        }
        filled -= u32::from(bits);
        out.push(((acc >> filled) & mask) as u32);
        acc &= (1u64 << filled) - 1;
    }
    out
}
