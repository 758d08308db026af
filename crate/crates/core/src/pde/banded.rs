//! Banded LU with partial pivoting, solving a single right-hand side.

use crate::error::{Error, Result};

/// Square matrix with `kl` sub- and `ku` super-diagonals. Each row keeps
/// `kl` extra columns on the right for pivoting fill-in.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            width,
            data: vec![0.0; n * width],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn offset(&self, row: usize, col: usize) -> usize {
        debug_assert!(col + self.kl >= row && col <= row + self.kl + self.ku);
        row * self.width + col + self.kl - row
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        if col + self.kl < row || col > row + self.ku {
            return 0.0;
        }
        self.data[self.offset(row, col)]
    }

    pub fn add(&mut self, row: usize, col: usize, value: f64) {
        assert!(
            col + self.kl >= row && col <= row + self.ku,
            "entry ({row}, {col}) outside the band"
        );
        let k = self.offset(row, col);
        self.data[k] += value;
    }

    /// Splits the storage into consecutive blocks of `rows` matrix rows for
    /// parallel assembly. Each block's closure receives its first row index
    /// and a [`RowBlock`] restricted to those rows.
    pub fn row_blocks_mut(&mut self, rows: usize) -> impl Iterator<Item = RowBlock<'_>> {
        let (kl, ku, width) = (self.kl, self.ku, self.width);
        self.data
            .chunks_mut(rows * width)
            .enumerate()
            .map(move |(k, data)| RowBlock { first: k * rows, kl, ku, width, data })
    }

    /// Overwrites `rhs` with the solution of `A x = rhs`, destroying `self`.
    pub fn solve_in_place(mut self, rhs: &mut [f64]) -> Result<()> {
        let n = self.n;
        assert_eq!(rhs.len(), n);
        let (kl, ku, w) = (self.kl, self.ku, self.width);
        let reach = kl + ku;

        for i in 0..n {
            let last_row = (i + kl).min(n - 1);
            let last_col = (i + reach).min(n - 1);

            let mut pivot = i;
            let mut best = self.data[self.offset(i, i)].abs();
            for r in i + 1..=last_row {
                let v = self.data[self.offset(r, i)].abs();
                if v > best {
                    best = v;
                    pivot = r;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::NonConvergence {
                    what: "banded LU (singular pivot)",
                    iterations: i,
                    residual: best,
                });
            }
            if pivot != i {
                for c in i..=last_col {
                    let a = self.offset(i, c);
                    let b = self.offset(pivot, c);
                    self.data.swap(a, b);
                }
                rhs.swap(i, pivot);
            }

            let diag = self.data[self.offset(i, i)];
            let span = last_col - i;
            for r in i + 1..=last_row {
                let k = self.offset(r, i);
                let factor = self.data[k] / diag;
                if factor == 0.0 {
                    continue;
                }
                self.data[k] = 0.0;
                // Rows i and r as contiguous slices over columns i+1..=last_col.
                let src_start = self.offset(i, i) + 1;
                let dst_start = k + 1;
                let (head, tail) = self.data.split_at_mut(dst_start);
                let src = &head[src_start..src_start + span];
                let dst = &mut tail[..span];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d -= factor * s;
                }
                rhs[r] -= factor * rhs[i];
            }
        }

        for i in (0..n).rev() {
            let last_col = (i + reach).min(n - 1);
            let base = i * w + kl - i;
            let mut s = rhs[i];
            for c in i + 1..=last_col {
                s -= self.data[base + c] * rhs[c];
            }
            rhs[i] = s / self.data[base + i];
        }
        Ok(())
    }
}

/// A contiguous run of rows of a [`BandMatrix`].
pub struct RowBlock<'a> {
    first: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: &'a mut [f64],
}

impl RowBlock<'_> {
    pub fn add(&mut self, row: usize, col: usize, value: f64) {
        assert!(
            col + self.kl >= row && col <= row + self.ku,
            "entry ({row}, {col}) outside the band"
        );
        let local = row - self.first;
        self.data[local * self.width + col + self.kl - row] += value;
    }
}
