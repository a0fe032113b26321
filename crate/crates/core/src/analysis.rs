//! Statistical and attack analyses for plaintext and ciphertext planes:
//! histograms, adjacent-pixel Pearson correlation, the XOR mask
//! (chosen/known-plaintext) attack, and index-level differential metrics.
//!
//! Ciphertexts hold 32-bit indices, so they are analysed through a
//! [`cipher_view`]: one chosen byte of each index, in scan order,
//! reshaped to the image's `height x width`.

use serde::Serialize;

use crate::cipher::Ciphertext;
use crate::error::{Error, Result};
use crate::image_io::Raster;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Histogram {
    pub bins: Vec<u64>,
    pub total: u64,
}

impl Histogram {
    pub fn mean(&self) -> f64 {
        self.total as f64 / 256.0
    }

    /// Largest `|bin - mean|` over all bins.
    pub fn max_deviation(&self) -> f64 {
        let mean = self.mean();
        self.bins
            .iter()
            .map(|&b| (b as f64 - mean).abs())
            .fold(0.0, f64::max)
    }

    /// Pearson chi-square statistic against the uniform distribution (255 d.o.f.).
    pub fn chi_square_uniform(&self) -> f64 {
        let mean = self.mean();
        if mean == 0.0 {
            return 0.0;
        }
        self.bins
            .iter()
            .map(|&b| (b as f64 - mean).powi(2) / mean)
            .sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,count\n");
        for (v, c) in self.bins.iter().enumerate() {
            out.push_str(&format!("{v},{c}\n"));
        }
        out
    }
}

pub fn histogram(plane: &[u8]) -> Histogram {
    let mut bins = vec![0u64; 256];
    for &v in plane {
        bins[v as usize] += 1;
    }
    Histogram {
        bins,
        total: plane.len() as u64,
    }
}

/// Pearson correlation in the raw-sums form
/// `(nΣxy − ΣxΣy) / (sqrt(nΣx² − (Σx)²) · sqrt(nΣy² − (Σy)²))`.
pub fn pearson<T: Copy + Into<f64>>(x: &[T], y: &[T]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "pearson inputs of length {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::DegenerateInput);
    }
    let n = x.len() as f64;
    let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (&a, &b) in x.iter().zip(y) {
        let (a, b): (f64, f64) = (a.into(), b.into());
        sx += a;
        sy += b;
        sxx += a * a;
        syy += b * b;
        sxy += a * b;
    }
    let vx = n * sxx - sx * sx;
    let vy = n * syy - sy * sy;
    if vx <= 0.0 || vy <= 0.0 {
        return Err(Error::DegenerateInput);
    }
    Ok(((n * sxy - sx * sy) / (vx.sqrt() * vy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Row,
    Col,
    Diag,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::Row, Direction::Col, Direction::Diag];

    pub fn name(self) -> &'static str {
        match self {
            Direction::Row => "row",
            Direction::Col => "col",
            Direction::Diag => "diag",
        }
    }
}

/// Every adjacent pair in `direction`, row-major over the first pixel.
pub fn adjacent_pairs(plane: &Raster, direction: Direction) -> Result<(Vec<u8>, Vec<u8>)> {
    let (w, h) = (plane.width(), plane.height());
    let (dr, dc) = match direction {
        Direction::Row => (0, 1),
        Direction::Col => (1, 0),
        Direction::Diag => (1, 1),
    };
    if w <= dc || h <= dr {
        return Err(Error::TooSmall {
            width: w,
            height: h,
            direction: direction.name(),
        });
    }
    let cap = (h - dr) * (w - dc);
    let (mut xs, mut ys) = (Vec::with_capacity(cap), Vec::with_capacity(cap));
    for r in 0..h - dr {
        for c in 0..w - dc {
            xs.push(plane.get(r, c));
            ys.push(plane.get(r + dr, c + dc));
        }
    }
    Ok((xs, ys))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionalCorrelation {
    /// `None` when one side of the pairs is constant.
    pub r: Option<f64>,
    pub pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub row: DirectionalCorrelation,
    pub col: DirectionalCorrelation,
    pub diag: DirectionalCorrelation,
}

impl CorrelationReport {
    pub fn get(&self, d: Direction) -> &DirectionalCorrelation {
        match d {
            Direction::Row => &self.row,
            Direction::Col => &self.col,
            Direction::Diag => &self.diag,
        }
    }
}

pub fn correlation_report(plane: &Raster) -> Result<CorrelationReport> {
    let one = |d| -> Result<DirectionalCorrelation> {
        let (x, y) = adjacent_pairs(plane, d)?;
        let r = match pearson(&x, &y) {
            Ok(r) => Some(r),
            Err(Error::DegenerateInput) => None,
            Err(e) => return Err(e),
        };
        Ok(DirectionalCorrelation { r, pairs: x.len() })
    };
    Ok(CorrelationReport {
        row: one(Direction::Row)?,
        col: one(Direction::Col)?,
        diag: one(Direction::Diag)?,
    })
}

/// Byte `plane` (0 = least significant) of every index, reshaped to the image grid.
pub fn cipher_view(ct: &Ciphertext, plane: u8) -> Result<Raster> {
    if plane > 3 {
        return Err(Error::DimensionMismatch(format!(
            "byte plane {plane} not in 0..=3"
        )));
    }
    let bytes = ct
        .indices
        .iter()
        .map(|&i| i.to_le_bytes()[plane as usize])
        .collect();
    Raster::new(ct.width as usize, ct.height as usize, bytes)
}

fn same_shape(a: &Raster, b: &Raster) -> Result<()> {
    if a.same_shape(b) {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )))
    }
}

/// Element-wise XOR of two equally sized rasters.
pub fn xor_mask(c: &Raster, c1: &Raster) -> Result<Raster> {
    same_shape(c, c1)?;
    let px = c
        .pixels()
        .iter()
        .zip(c1.pixels())
        .map(|(a, b)| a ^ b)
        .collect();
    Raster::new(c.width(), c.height(), px)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Resisted,
    Broken,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackResult {
    pub verdict: Verdict,
    pub match_fraction: f64,
}

/// Try to recover `z` as `m XOR z1`; broken only if every byte matches.
pub fn mask_attack(m: &Raster, z1: &Raster, z: &Raster) -> Result<AttackResult> {
    same_shape(m, z1)?;
    same_shape(m, z)?;
    let guess = xor_mask(m, z1)?;
    let matches = guess
        .pixels()
        .iter()
        .zip(z.pixels())
        .filter(|(a, b)| a == b)
        .count();
    let verdict = if matches == z.len() {
        Verdict::Broken
    } else {
        Verdict::Resisted
    };
    Ok(AttackResult {
        verdict,
        match_fraction: matches as f64 / z.len() as f64,
    })
}

/// Fraction of positions whose indices differ between two ciphertexts.
pub fn diff_metric(e1: &Ciphertext, e2: &Ciphertext) -> Result<f64> {
    if e1.width != e2.width || e1.height != e2.height || e1.indices.len() != e2.indices.len() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            e1.width, e1.height, e2.width, e2.height
        )));
    }
    if e1.indices.is_empty() {
        return Ok(0.0);
    }
    let differ = e1
        .indices
        .iter()
        .zip(&e2.indices)
        .filter(|(a, b)| a != b)
        .count();
    Ok(differ as f64 / e1.indices.len() as f64)
}

/// What an analysed plane came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PlaneSource {
    Image,
    Ciphertext { byte_plane: u8 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub source: PlaneSource,
    pub width: usize,
    pub height: usize,
    pub histogram: Histogram,
    pub histogram_max_deviation: f64,
    pub histogram_chi_square: f64,
    /// `None` when the plane is smaller than 2x2.
    pub correlation: Option<CorrelationReport>,
}

pub fn analyze_plane(plane: &Raster, source: PlaneSource) -> AnalysisReport {
    let histogram = histogram(plane.pixels());
    AnalysisReport {
        source,
        width: plane.width(),
        height: plane.height(),
        histogram_max_deviation: histogram.max_deviation(),
        histogram_chi_square: histogram.chi_square_uniform(),
        histogram,
        correlation: correlation_report(plane).ok(),
    }
}
