//! DNA digital coding between bytes and four-nucleotide quads.
//!
//! Each bit pair maps to one base: `C = 00`, `A = 01`, `T = 10`, `G = 11`.
//! A byte is read most-significant pair first, so `0x1B` (`00 01 10 11`)
//! is the quad `CATG`.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Nucleotide {
    C = 0b00,
    A = 0b01,
    T = 0b10,
    G = 0b11,
}

impl Nucleotide {
    pub const ALL: [Nucleotide; 4] = [Nucleotide::C, Nucleotide::A, Nucleotide::T, Nucleotide::G];

    #[inline]
    pub fn from_bits(bits: u8) -> Nucleotide {
        Self::ALL[(bits & 0b11) as usize]
    }

    #[inline]
    pub fn bits(self) -> u8 {
        self as u8
    }

    /// Case-insensitive; `None` for anything outside `ACGT`.
    pub fn from_ascii(c: u8) -> Option<Nucleotide> {
        match c.to_ascii_uppercase() {
            b'C' => Some(Nucleotide::C),
            b'A' => Some(Nucleotide::A),
            b'T' => Some(Nucleotide::T),
            b'G' => Some(Nucleotide::G),
            _ => None,
        }
    }

    pub fn to_ascii(self) -> u8 {
        match self {
            Nucleotide::C => b'C',
            Nucleotide::A => b'A',
            Nucleotide::T => b'T',
            Nucleotide::G => b'G',
        }
    }

    /// Watson-Crick partner: A-T, C-G.
    pub fn complement(self) -> Nucleotide {
        match self {
            Nucleotide::A => Nucleotide::T,
            Nucleotide::T => Nucleotide::A,
            Nucleotide::C => Nucleotide::G,
            Nucleotide::G => Nucleotide::C,
        }
    }
}

/// Four nucleotides encoding exactly one byte; `self.0[0]` carries the top bit pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Quad(pub [Nucleotide; 4]);

impl Quad {
    pub fn nucleotides(&self) -> [Nucleotide; 4] {
        self.0
    }

    pub fn complement(self) -> Quad {
        Quad(self.0.map(Nucleotide::complement))
    }
}

pub fn byte_to_quad(b: u8) -> Quad {
    Quad([
        Nucleotide::from_bits(b >> 6),
        Nucleotide::from_bits(b >> 4),
        Nucleotide::from_bits(b >> 2),
        Nucleotide::from_bits(b),
    ])
}

pub fn quad_to_byte(q: Quad) -> u8 {
    q.0.iter().fold(0u8, |acc, n| (acc << 2) | n.bits())
}

pub fn complement(q: Quad) -> Quad {
    q.complement()
}

impl From<u8> for Quad {
    fn from(b: u8) -> Self {
        byte_to_quad(b)
    }
}

impl From<Quad> for u8 {
    fn from(q: Quad) -> Self {
        quad_to_byte(q)
    }
}

impl fmt::Display for Nucleotide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ascii() as char)
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in self.0 {
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseQuadError(String);

impl fmt::Display for ParseQuadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a quad of A/C/G/T: {:?}", self.0)
    }
}

impl std::error::Error for ParseQuadError {}

impl FromStr for Quad {
    type Err = ParseQuadError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        if bytes.len() != 4 {
            return Err(ParseQuadError(s.to_owned()));
        }
        let mut out = [Nucleotide::C; 4];
        for (slot, &c) in out.iter_mut().zip(bytes) {
            *slot = Nucleotide::from_ascii(c).ok_or_else(|| ParseQuadError(s.to_owned()))?;
        }
        Ok(Quad(out))
    }
}
