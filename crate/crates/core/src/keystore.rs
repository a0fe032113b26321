//! The shared key: a reference nucleotide sequence packed 2 bits per base,
//! plus a 4-mer occurrence index over it.
//!
//! Positions are 0-based and counted in bases. Residues other than `ACGT`
//! (e.g. `N` runs in GenBank contigs) are kept as gaps: they occupy a
//! position, are stored as `C` bits in the packed buffer, and any 4-base
//! window touching one is left out of the index.
//!
//! Persisted layout (little-endian):
//!
//! ```text
//! "DNAK" | 0x01 | u64 base count | packed bases | 32-byte fingerprint
//!        [ | u64 gap-run count | (u64 start, u64 len) * count ]
//! ```
//!
//! The trailing gap section is written only when the sequence has gaps.
//! Bases are packed MSB-first, four per byte, zero-padded at the tail.
//! The index is rebuilt on load.

use sha2::{Digest, Sha256};

use crate::dna_codec::{byte_to_quad, quad_to_byte, Nucleotide, Quad};
use crate::error::{Error, Result};

pub const KEYSTORE_MAGIC: &[u8; 4] = b"DNAK";
pub const KEYSTORE_VERSION: u8 = 0x01;

pub type Fingerprint = [u8; 32];

/// A maximal run of non-`ACGT` residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapRun {
    pub start: u64,
    pub len: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    len: usize,
    packed: Vec<u8>,
    gaps: Vec<GapRun>,
    source_id: String,
}

#[derive(Default)]
struct SequenceBuilder {
    len: usize,
    packed: Vec<u8>,
    gaps: Vec<GapRun>,
}

impl SequenceBuilder {
    fn push_bits(&mut self, bits: u8) {
        let slot = self.len % 4;
        if slot == 0 {
            self.packed.push(0);
        }
        let last = self.packed.last_mut().expect("byte pushed above");
        *last |= (bits & 0b11) << (6 - 2 * slot);
        self.len += 1;
    }

    fn push(&mut self, n: Nucleotide) {
        self.push_bits(n.bits());
    }

    fn push_gap(&mut self) {
        let pos = self.len as u64;
        match self.gaps.last_mut() {
            Some(run) if run.start + run.len == pos => run.len += 1,
            _ => self.gaps.push(GapRun { start: pos, len: 1 }),
        }
        self.push_bits(0);
    }

    fn finish(self, source_id: String) -> Result<Sequence> {
        if self.len < 4 {
            return Err(Error::SequenceTooShort(self.len));
        }
        if self.len > u32::MAX as usize {
            return Err(Error::SequenceTooLong(self.len));
        }
        Ok(Sequence {
            len: self.len,
            packed: self.packed,
            gaps: self.gaps,
            source_id,
        })
    }
}

impl Sequence {
    pub fn from_nucleotides(bases: &[Nucleotide], source_id: impl Into<String>) -> Result<Self> {
        let mut b = SequenceBuilder::default();
        for &n in bases {
            b.push(n);
        }
        b.finish(source_id.into())
    }

    /// Parse `ACGT` text; any other non-whitespace character becomes a gap.
    pub fn from_ascii(text: &str, source_id: impl Into<String>) -> Result<Self> {
        let mut b = SequenceBuilder::default();
        for c in text.bytes().filter(|c| !c.is_ascii_whitespace()) {
            match Nucleotide::from_ascii(c) {
                Some(n) => b.push(n),
                None => b.push_gap(),
            }
        }
        b.finish(source_id.into())
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn packed(&self) -> &[u8] {
        &self.packed
    }

    pub fn gaps(&self) -> &[GapRun] {
        &self.gaps
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    /// Base at `pos`; gap positions read as `C`.
    #[inline]
    pub fn base(&self, pos: usize) -> Nucleotide {
        Nucleotide::from_bits(self.packed[pos / 4] >> (6 - 2 * (pos % 4)))
    }

    pub fn is_gap(&self, pos: usize) -> bool {
        let pos = pos as u64;
        let i = self.gaps.partition_point(|run| run.start + run.len <= pos);
        self.gaps.get(i).is_some_and(|run| run.start <= pos)
    }

    /// Whether the window `[pos, pos + 4)` lies inside the sequence and avoids every gap.
    pub fn is_indexable_window(&self, pos: usize) -> bool {
        if pos + 4 > self.len {
            return false;
        }
        let (lo, hi) = (pos as u64, pos as u64 + 4);
        let i = self.gaps.partition_point(|run| run.start + run.len <= lo);
        !self.gaps.get(i).is_some_and(|run| run.start < hi)
    }

    /// Decode the 4 bases starting at `pos`. Panics if the window runs past the end.
    pub fn quad_at(&self, pos: usize) -> Quad {
        Quad([
            self.base(pos),
            self.base(pos + 1),
            self.base(pos + 2),
            self.base(pos + 3),
        ])
    }

    /// A copy with one base replaced (gap status at `pos` is cleared).
    pub fn with_base(&self, pos: usize, n: Nucleotide) -> Sequence {
        let mut out = self.clone();
        let shift = 6 - 2 * (pos % 4);
        out.packed[pos / 4] = (out.packed[pos / 4] & !(0b11 << shift)) | (n.bits() << shift);
        if self.is_gap(pos) {
            let mut b = SequenceBuilder::default();
            for p in 0..self.len {
                if p != pos && self.is_gap(p) {
                    b.push_gap();
                } else {
                    b.push(out.base(p));
                }
            }
            out.gaps = b.gaps;
        }
        out
    }

    pub fn to_ascii(&self) -> String {
        (0..self.len)
            .map(|p| {
                if self.is_gap(p) {
                    'N'
                } else {
                    self.base(p).to_ascii() as char
                }
            })
            .collect()
    }
}

/// Parse FASTA text. Records are concatenated in file order; `source_id`
/// is the first header line without its `>`.
pub fn parse_fasta(text: &str) -> Result<Sequence> {
    let mut lines = text.lines().map(|l| l.trim_end_matches('\r'));
    let header = loop {
        match lines.next() {
            None => return Err(Error::NoHeader),
            Some(l) if l.trim().is_empty() => continue,
            Some(l) => match l.strip_prefix('>') {
                Some(h) => break h.trim().to_owned(),
                None => return Err(Error::NoHeader),
            },
        }
    };
    let mut b = SequenceBuilder::default();
    for line in lines {
        if line.starts_with('>') || line.starts_with(';') {
            continue;
        }
        for c in line.bytes().filter(|c| !c.is_ascii_whitespace()) {
            match Nucleotide::from_ascii(c) {
                Some(n) => b.push(n),
                None => b.push_gap(),
            }
        }
    }
    if b.len == 0 {
        return Err(Error::EmptySequence);
    }
    b.finish(header)
}

/// Sorted start positions of every quad, stored as one flat array with
/// 257 bucket offsets (bucket = quad byte code).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmerIndex {
    offsets: Vec<u32>,
    positions: Vec<u32>,
}

pub fn build_index(seq: &Sequence) -> KmerIndex {
    // Two passes over a rolling 8-bit code: count, then scatter.
    let windows = || {
        let mut code = 0u8;
        let mut run = 0usize;
        let mut gap_iter = seq.gaps.iter().peekable();
        (0..seq.len).filter_map(move |p| {
            while gap_iter.peek().is_some_and(|g| g.start + g.len <= p as u64) {
                gap_iter.next();
            }
            let gap = gap_iter.peek().is_some_and(|g| g.start <= p as u64);
            if gap {
                run = 0;
                return None;
            }
            code = (code << 2) | seq.base(p).bits();
            run += 1;
            (run >= 4).then(|| (code, (p - 3) as u32))
        })
    };

    let mut counts = [0u32; 256];
    for (code, _) in windows() {
        counts[code as usize] += 1;
    }
    let mut offsets = vec![0u32; 257];
    for q in 0..256 {
        offsets[q + 1] = offsets[q] + counts[q];
    }
    let mut cursor: Vec<u32> = offsets[..256].to_vec();
    let mut positions = vec![0u32; offsets[256] as usize];
    for (code, p) in windows() {
        let slot = &mut cursor[code as usize];
        positions[*slot as usize] = p;
        *slot += 1;
    }
    KmerIndex { offsets, positions }
}

impl KmerIndex {
    pub fn positions(&self, q: Quad) -> &[u32] {
        let code = quad_to_byte(q) as usize;
        &self.positions[self.offsets[code] as usize..self.offsets[code + 1] as usize]
    }

    pub fn count(&self, q: Quad) -> usize {
        self.positions(q).len()
    }

    /// Total number of indexed windows.
    pub fn total(&self) -> usize {
        self.positions.len()
    }

    /// Smallest indexed position `>= start` holding `q`, wrapping to the
    /// first occurrence when none lies at or after `start`.
    pub fn first_at_or_after(&self, q: Quad, start: usize) -> Option<u32> {
        let list = self.positions(q);
        let i = list.partition_point(|&p| (p as usize) < start);
        list.get(i).or_else(|| list.first()).copied()
    }
}

pub fn fingerprint(seq: &Sequence) -> Fingerprint {
    let mut h = Sha256::new();
    h.update((seq.len as u64).to_le_bytes());
    h.update(&seq.packed);
    for run in &seq.gaps {
        h.update(run.start.to_le_bytes());
        h.update(run.len.to_le_bytes());
    }
    h.finalize().into()
}

/// Per-quad occurrence counts for reporting key coverage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coverage {
    pub counts: [u32; 256],
}

impl Coverage {
    pub fn missing(&self) -> Vec<Quad> {
        (0..=255u8)
            .filter(|&b| self.counts[b as usize] == 0)
            .map(byte_to_quad)
            .collect()
    }

    pub fn min(&self) -> u32 {
        *self.counts.iter().min().expect("256 entries")
    }

    pub fn max(&self) -> u32 {
        *self.counts.iter().max().expect("256 entries")
    }

    pub fn is_complete(&self) -> bool {
        self.min() > 0
    }
}

/// The symmetric key: sequence, its index and its fingerprint.
#[derive(Debug, Clone)]
pub struct KeyStore {
    sequence: Sequence,
    index: KmerIndex,
    fingerprint: Fingerprint,
}

impl KeyStore {
    pub fn new(sequence: Sequence) -> Self {
        let index = build_index(&sequence);
        let fingerprint = fingerprint(&sequence);
        Self {
            sequence,
            index,
            fingerprint,
        }
    }

    pub fn from_fasta(text: &str) -> Result<Self> {
        parse_fasta(text).map(Self::new)
    }

    pub fn sequence(&self) -> &Sequence {
        &self.sequence
    }

    pub fn index(&self) -> &KmerIndex {
        &self.index
    }

    pub fn fingerprint(&self) -> &Fingerprint {
        &self.fingerprint
    }

    pub fn len(&self) -> usize {
        self.sequence.len
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.len == 0
    }

    /// Circular first match of `q` at or after `start`.
    pub fn lookup_from(&self, q: Quad, start: usize) -> Result<u32> {
        self.index
            .first_at_or_after(q, start)
            .ok_or(Error::KeyCoverage {
                byte: quad_to_byte(q),
                quad: q,
            })
    }

    pub fn coverage(&self) -> Coverage {
        let mut counts = [0u32; 256];
        for (b, slot) in counts.iter_mut().enumerate() {
            *slot = self.index.count(byte_to_quad(b as u8)) as u32;
        }
        Coverage { counts }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let seq = &self.sequence;
        let mut out = Vec::with_capacity(4 + 1 + 8 + seq.packed.len() + 32);
        out.extend_from_slice(KEYSTORE_MAGIC);
        out.push(KEYSTORE_VERSION);
        out.extend_from_slice(&(seq.len as u64).to_le_bytes());
        out.extend_from_slice(&seq.packed);
        out.extend_from_slice(&self.fingerprint);
        if !seq.gaps.is_empty() {
            out.extend_from_slice(&(seq.gaps.len() as u64).to_le_bytes());
            for run in &seq.gaps {
                out.extend_from_slice(&run.start.to_le_bytes());
                out.extend_from_slice(&run.len.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::MalformedKeystore(m.to_owned());
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4).ok_or_else(|| bad("truncated magic"))? != KEYSTORE_MAGIC {
            return Err(bad("bad magic"));
        }
        let version = r.take(1).ok_or_else(|| bad("truncated version"))?[0];
        if version != KEYSTORE_VERSION {
            return Err(Error::MalformedKeystore(format!(
                "unsupported version {version}"
            )));
        }
        let len = r.u64().ok_or_else(|| bad("truncated length"))?;
        let len = usize::try_from(len).map_err(|_| bad("length overflows"))?;
        let packed = r
            .take(len.div_ceil(4))
            .ok_or_else(|| bad("truncated packed bases"))?
            .to_vec();
        let stored: Fingerprint = r
            .take(32)
            .ok_or_else(|| bad("truncated fingerprint"))?
            .try_into()
            .expect("32 bytes");
        let mut gaps = Vec::new();
        if r.pos < bytes.len() {
            let count = r.u64().ok_or_else(|| bad("truncated gap count"))?;
            for _ in 0..count {
                let start = r.u64().ok_or_else(|| bad("truncated gap run"))?;
                let glen = r.u64().ok_or_else(|| bad("truncated gap run"))?;
                if glen == 0 || start.saturating_add(glen) > len as u64 {
                    return Err(bad("gap run outside sequence"));
                }
                gaps.push(GapRun { start, len: glen });
            }
            if gaps.windows(2).any(|w| w[0].start + w[0].len > w[1].start) {
                return Err(bad("gap runs not sorted"));
            }
        }
        if r.pos != bytes.len() {
            return Err(bad("trailing bytes"));
        }
        if len < 4 {
            return Err(Error::SequenceTooShort(len));
        }
        if len > u32::MAX as usize {
            return Err(Error::SequenceTooLong(len));
        }
        let sequence = Sequence {
            len,
            packed,
            gaps,
            source_id: String::new(),
        };
        let ks = KeyStore::new(sequence);
        if ks.fingerprint != stored {
            return Err(bad("fingerprint does not match contents"));
        }
        Ok(ks)
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        let end = self.pos.checked_add(n)?;
        let s = self.bytes.get(self.pos..end)?;
        self.pos = end;
        Some(s)
    }

    fn u64(&mut self) -> Option<u64> {
        self.take(8)
            .map(|s| u64::from_le_bytes(s.try_into().expect("8 bytes")))
    }
}
