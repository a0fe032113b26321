//! JPEG zigzag scan order, generalized to arbitrary `rows x cols` grids,
//! used purely as a permutation of a row-major byte stream.
//!
//! Cells are visited by increasing anti-diagonal `s = row + col`. Even `s`
//! runs bottom-left to top-right and odd `s` runs top-right to bottom-left,
//! which reproduces the familiar 8x8 pattern `(0,0) (0,1) (1,0) (2,0) (1,1) ...`.

use crate::error::{Error, Result};

/// How the scan covers the image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScanMode {
    /// One zigzag over the whole frame.
    #[default]
    FullFrame,
    /// Zigzag within each 8x8 tile, tiles taken in row-major order.
    Block8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZigzagPerm {
    rows: usize,
    cols: usize,
    order: Vec<(usize, usize)>,
    // order flattened to row-major offsets
    linear: Vec<usize>,
}

/// Full-frame zigzag order of a `rows x cols` grid.
pub fn zigzag_order(rows: usize, cols: usize) -> Result<ZigzagPerm> {
    if rows == 0 || cols == 0 {
        return Err(Error::ZeroDimension);
    }
    Ok(ZigzagPerm::from_order(rows, cols, walk(rows, cols, 0, 0)))
}

/// Walk the anti-diagonals of a `rows x cols` window whose top-left is
/// `(r0, c0)`, bouncing off the window edges.
fn walk(rows: usize, cols: usize, r0: usize, c0: usize) -> Vec<(usize, usize)> {
    let n = rows * cols;
    let mut out = Vec::with_capacity(n);
    let (mut r, mut c) = (0usize, 0usize);
    let mut up = true;
    loop {
        out.push((r0 + r, c0 + c));
        if out.len() == n {
            break;
        }
        if up {
            if c + 1 == cols {
                r += 1;
                up = false;
            } else if r == 0 {
                c += 1;
                up = false;
            } else {
                r -= 1;
                c += 1;
            }
        } else if r + 1 == rows {
            c += 1;
            up = true;
        } else if c == 0 {
            r += 1;
            up = true;
        } else {
            r += 1;
            c -= 1;
        }
    }
    out
}

impl ZigzagPerm {
    fn from_order(rows: usize, cols: usize, order: Vec<(usize, usize)>) -> Self {
        let linear = order.iter().map(|&(r, c)| r * cols + c).collect();
        Self {
            rows,
            cols,
            order,
            linear,
        }
    }

    /// Zigzag applied independently to each `block x block` tile.
    pub fn blocked(rows: usize, cols: usize, block: usize) -> Result<Self> {
        if rows == 0 || cols == 0 || block == 0 {
            return Err(Error::ZeroDimension);
        }
        if !rows.is_multiple_of(block) || !cols.is_multiple_of(block) {
            return Err(Error::NotBlockAligned { rows, cols, block });
        }
        let mut order = Vec::with_capacity(rows * cols);
        for br in (0..rows).step_by(block) {
            for bc in (0..cols).step_by(block) {
                order.extend(walk(block, block, br, bc));
            }
        }
        Ok(Self::from_order(rows, cols, order))
    }

    pub fn for_mode(rows: usize, cols: usize, mode: ScanMode) -> Result<Self> {
        match mode {
            ScanMode::FullFrame => zigzag_order(rows, cols),
            ScanMode::Block8 => Self::blocked(rows, cols, 8),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> &[(usize, usize)] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Row-major offset of the cell visited at scan step `k`.
    #[inline]
    pub fn source_offset(&self, k: usize) -> usize {
        self.linear[k]
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.linear.len() {
            return Err(Error::LengthMismatch {
                expected: self.linear.len(),
                actual: len,
            });
        }
        Ok(())
    }

    /// Row-major data to scan order: `out[k] = data[order[k]]`.
    pub fn apply<T: Copy>(&self, data: &[T]) -> Result<Vec<T>> {
        self.check_len(data.len())?;
        Ok(self.linear.iter().map(|&src| data[src]).collect())
    }

    /// Scan order back to row-major.
    pub fn invert_apply<T: Copy>(&self, data: &[T]) -> Result<Vec<T>> {
        self.check_len(data.len())?;
        let mut out = data.to_vec();
        for (&dst, &v) in self.linear.iter().zip(data) {
            out[dst] = v;
        }
        Ok(out)
    }
}

/// Convenience wrappers matching the free-function style of the other modules.
pub fn apply(perm: &ZigzagPerm, data: &[u8]) -> Result<Vec<u8>> {
    perm.apply(data)
}

pub fn invert_apply(perm: &ZigzagPerm, data: &[u8]) -> Result<Vec<u8>> {
    perm.invert_apply(data)
}
