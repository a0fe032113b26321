#![allow(dead_code)]

use std::path::PathBuf;

use dnaz::dna_codec::{Nucleotide, Quad};
use dnaz::image_io::{load_pgm, Raster};
use dnaz::keystore::{KeyStore, Sequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn testdata(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../testdata")
        .join(name)
}

pub fn camera() -> Raster {
    load_pgm(&std::fs::read(testdata("camera256.pgm")).unwrap()).unwrap()
}

pub fn key_from_file(name: &str) -> KeyStore {
    KeyStore::from_fasta(&std::fs::read_to_string(testdata(name)).unwrap()).unwrap()
}

/// The 81211 bp key: `DNAZ_REAL_KEY_FASTA` when set, else the bundled stand-in.
pub fn real_key() -> (KeyStore, String) {
    match std::env::var("DNAZ_REAL_KEY_FASTA") {
        Ok(path) if !path.is_empty() => {
            let ks = KeyStore::from_fasta(&std::fs::read_to_string(&path).unwrap()).unwrap();
            (ks, path)
        }
        _ => (
            key_from_file("standin_81211.fa"),
            "standin_81211.fa".to_owned(),
        ),
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_raster(rng: &mut impl Rng, w: usize, h: usize) -> Raster {
    Raster::new(w, h, (0..w * h).map(|_| rng.gen()).collect()).unwrap()
}

pub fn random_bases(rng: &mut impl Rng, len: usize) -> Vec<Nucleotide> {
    (0..len)
        .map(|_| Nucleotide::ALL[rng.gen_range(0..4)])
        .collect()
}

pub fn seq_from(bases: &[Nucleotide]) -> Sequence {
    Sequence::from_nucleotides(bases, "test").unwrap()
}

// ---- independent oracles -------------------------------------------------

/// Zigzag by sorting every cell on (anti-diagonal, within-diagonal key).
/// Even diagonals climb (column increasing), odd diagonals descend (row increasing).
pub fn zigzag_oracle(rows: usize, cols: usize) -> Vec<(usize, usize)> {
    let mut cells: Vec<(usize, usize)> = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| (r, c)))
        .collect();
    cells.sort_by_key(|&(r, c)| {
        let s = r + c;
        (s, if s % 2 == 0 { c } else { r })
    });
    cells
}

/// Quad at `p` read straight from a base slice.
pub fn quad_of(bases: &[Nucleotide], p: usize) -> Quad {
    Quad([bases[p], bases[p + 1], bases[p + 2], bases[p + 3]])
}

/// Naive sliding-window scan: every start position of `q`.
pub fn naive_positions(bases: &[Nucleotide], q: Quad) -> Vec<u32> {
    (0..bases.len().saturating_sub(3))
        .filter(|&p| quad_of(bases, p) == q)
        .map(|p| p as u32)
        .collect()
}

/// Naive circular scan from `start`, one full lap.
pub fn naive_lookup(bases: &[Nucleotide], q: Quad, start: usize) -> Option<u32> {
    let n = bases.len();
    (0..n)
        .map(|k| (start + k) % n)
        .find(|&p| p + 4 <= n && quad_of(bases, p) == q)
        .map(|p| p as u32)
}
