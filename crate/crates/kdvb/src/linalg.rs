//! Banded matrix storage and a banded LU solver with partial pivoting.
//!
//! Every time step of the collocation scheme solves one banded system whose
//! coefficients depend on the current state, so the factorization is redone
//! on each call; nothing is cached across solves.

use crate::error::{Error, Result};

/// Square banded matrix with `kl` subdiagonals and `ku` superdiagonals.
///
/// Entries are stored row-compact: row `i` holds its band `A[i, i-kl ..= i+ku]`
/// contiguously. Entries outside the band are structurally zero.
#[derive(Debug, Clone)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    /// All-zero matrix. Requires `kl, ku < n`.
    pub fn zero(n: usize, kl: usize, ku: usize) -> Result<Self> {
        if n == 0 || kl >= n || ku >= n {
            return Err(Error::InvalidBandwidth { n, kl, ku });
        }
        Ok(Self {
            n,
            kl,
            ku,
            data: vec![0.0; n * (kl + ku + 1)],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kl(&self) -> usize {
        self.kl
    }

    pub fn ku(&self) -> usize {
        self.ku
    }

    #[inline]
    fn width(&self) -> usize {
        self.kl + self.ku + 1
    }

    #[inline]
    fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && j + self.kl >= i && j <= i + self.ku
    }

    /// Entry `A[i, j]`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[i * self.width() + (j + self.kl - i)]
        } else {
            0.0
        }
    }

    /// Overwrites `A[i, j]`. Panics when `(i, j)` is outside the band.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(
            self.in_band(i, j),
            "entry ({i}, {j}) outside band kl={} ku={} n={}",
            self.kl,
            self.ku,
            self.n
        );
        let w = self.width();
        self.data[i * w + (j + self.kl - i)] = value;
    }

    /// Adds `value` to `A[i, j]`. Panics when `(i, j)` is outside the band.
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        assert!(
            self.in_band(i, j),
            "entry ({i}, {j}) outside band kl={} ku={} n={}",
            self.kl,
            self.ku,
            self.n
        );
        let w = self.width();
        self.data[i * w + (j + self.kl - i)] += value;
    }

    /// Banded matrix-vector product.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: x.len(),
            });
        }
        let w = self.width();
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(self.n - 1);
            let row = &self.data[i * w..(i + 1) * w];
            let mut acc = 0.0;
            for j in lo..=hi {
                acc += row[j + self.kl - i] * x[j];
            }
            y[i] = acc;
        }
        Ok(y)
    }

    /// Solves `A x = rhs` by banded LU with partial pivoting.
    ///
    /// Row interchanges stay inside the band window, so the factorization
    /// needs `kl` extra columns of workspace and runs in O(n kl (kl + ku)).
    /// A pivot below `n * eps * max|A|` reports [`Error::SingularMatrix`].
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        if rhs.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: rhs.len(),
            });
        }
        let n = self.n;
        let kl = self.kl;
        let ku = self.ku;
        let w = kl + ku + 1;

        let max_abs = self.data.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        let tol = max_abs * n as f64 * f64::EPSILON;
        if max_abs == 0.0 {
            return Err(Error::SingularMatrix);
        }

        // Working copy with rows left-aligned to their first in-range column:
        // au[i][j] = A[i, max(0, i - kl) + j].
        let mut au = vec![0.0; n * w];
        for i in 0..n {
            let shift = kl.saturating_sub(i); // leading out-of-range slots
            for j in shift..w {
                au[i * w + (j - shift)] = self.data[i * w + j];
            }
        }
        let mut multipliers = vec![0.0; n * kl];
        let mut pivots = vec![0usize; n];
        let mut x = rhs.to_vec();

        for k in 0..n {
            let reach = kl.min(n - 1 - k); // rows that can hold the pivot
            let mut p = k;
            let mut best = au[k * w].abs();
            for i in k + 1..=k + reach {
                let v = au[i * w].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= tol {
                return Err(Error::SingularMatrix);
            }
            pivots[k] = p;
            if p != k {
                for j in 0..w {
                    au.swap(k * w + j, p * w + j);
                }
            }
            let pivot = au[k * w];
            for i in k + 1..=k + reach {
                let factor = au[i * w] / pivot;
                multipliers[k * kl + (i - k - 1)] = factor;
                for j in 1..w {
                    au[i * w + j - 1] = au[i * w + j] - factor * au[k * w + j];
                }
                au[i * w + w - 1] = 0.0;
            }
        }

        // forward substitution with the recorded interchanges
        for k in 0..n {
            let p = pivots[k];
            if p != k {
                x.swap(k, p);
            }
            let reach = kl.min(n - 1 - k);
            for i in k + 1..=k + reach {
                x[i] -= multipliers[k * kl + (i - k - 1)] * x[k];
            }
        }
        // back substitution: row k of U occupies au[k][0..w), diagonal first
        for k in (0..n).rev() {
            let mut acc = x[k];
            let reach = (w - 1).min(n - 1 - k);
            for j in 1..=reach {
                acc -= au[k * w + j] * x[k + j];
            }
            x[k] = acc / au[k * w];
        }
        Ok(x)
    }
}
