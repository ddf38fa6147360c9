use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::SeriesError;

/// A finite run of exact integers indexed contiguously from `start`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntSequence {
    start: usize,
    values: Vec<i128>,
}

impl IntSequence {
    pub fn new(start: usize, values: Vec<i128>) -> Self {
        Self { start, values }
    }

    pub fn from_u64(start: usize, values: &[u64]) -> Self {
        Self::new(start, values.iter().map(|&v| i128::from(v)).collect())
    }

    /// Values of `f` on `start..=end`.
    pub fn tabulate(start: usize, end: usize, f: impl FnMut(usize) -> i128) -> Self {
        Self::new(start, (start..=end).map(f).collect())
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// Last index, or `None` when empty.
    pub fn end(&self) -> Option<usize> {
        (!self.values.is_empty()).then(|| self.start + self.values.len() - 1)
    }

    pub fn values(&self) -> &[i128] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: usize) -> Option<i128> {
        n.checked_sub(self.start)
            .and_then(|i| self.values.get(i))
            .copied()
    }

    /// Value at `n`. Panics outside the stored range.
    pub fn at(&self, n: usize) -> i128 {
        self.get(n).unwrap_or_else(|| {
            panic!(
                "index {n} outside {}..{}",
                self.start,
                self.start + self.len()
            )
        })
    }

    pub fn indexed(&self) -> impl Iterator<Item = (usize, i128)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.start + i, v))
    }

    /// The part of the sequence with indices in `from..=to`, clamped.
    pub fn slice(&self, from: usize, to: usize) -> Self {
        let from = from.max(self.start);
        let values = self
            .indexed()
            .filter(|&(n, _)| n >= from && n <= to)
            .map(|(_, v)| v)
            .collect();
        Self::new(from, values)
    }

    /// Backward difference of the given order: `s'(n) = s(n) − s(n−1)`,
    /// iterated. The result starts `order` places later.
    pub fn finite_difference(&self, order: usize) -> Result<Self, SeriesError> {
        if order == 0 || order >= self.len() {
            return Err(SeriesError::OrderTooLarge {
                order,
                len: self.len(),
            });
        }
        let mut v = self.values.clone();
        for _ in 0..order {
            v = v.windows(2).map(|w| w[1] - w[0]).collect();
        }
        Ok(Self::new(self.start + order, v))
    }

    /// Running sums, same indices.
    pub fn partial_sums(&self) -> Self {
        let mut acc = 0i128;
        Self::new(
            self.start,
            self.values
                .iter()
                .map(|&v| {
                    acc += v;
                    acc
                })
                .collect(),
        )
    }

    /// Least `n` with `s(n) < s(n−1)`.
    pub fn first_descent(&self) -> Option<usize> {
        self.values
            .windows(2)
            .position(|w| w[1] < w[0])
            .map(|i| self.start + i + 1)
    }

    /// The part functions `s_i(t) = s(k·t + i)` for `i = 0..k`. Each part is
    /// indexed by `t`.
    pub fn split_residues(&self, k: usize) -> Result<Vec<Self>, SeriesError> {
        if k < 2 {
            return Err(SeriesError::Modulus(k));
        }
        Ok((0..k)
            .map(|i| {
                let t0 = self.start.saturating_sub(i).div_ceil(k);
                let values = self
                    .indexed()
                    .filter(|&(n, _)| n % k == i)
                    .map(|(_, v)| v)
                    .collect();
                Self::new(t0, values)
            })
            .collect())
    }

    /// Inverse of [`split_residues`](Self::split_residues).
    pub fn interleave(parts: &[Self]) -> Result<Self, SeriesError> {
        let k = parts.len();
        if k < 2 {
            return Err(SeriesError::Modulus(k));
        }
        let mut all: Vec<(usize, i128)> = parts
            .iter()
            .enumerate()
            .flat_map(|(i, p)| p.indexed().map(move |(t, v)| (k * t + i, v)))
            .collect();
        all.sort_unstable_by_key(|&(n, _)| n);
        let start = all.first().map_or(0, |&(n, _)| n);
        if all.iter().enumerate().any(|(j, &(n, _))| n != start + j) {
            return Err(SeriesError::NotContiguous);
        }
        Ok(Self::new(start, all.into_iter().map(|(_, v)| v).collect()))
    }

    /// CSV `n,<column>`.
    pub fn to_csv(&self, column: &str) -> String {
        let mut out = format!("n,{column}\n");
        for (n, v) in self.indexed() {
            let _ = writeln!(out, "{n},{v}");
        }
        out
    }

    /// Tab-separated `n<TAB>value` lines for plotting.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (n, v) in self.indexed() {
            let _ = writeln!(out, "{n}\t{v}");
        }
        out
    }
}
