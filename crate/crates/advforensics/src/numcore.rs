//! Minimal dense vector/matrix arithmetic and a deterministic RNG.
//!
//! Everything here is plain `f64` with no SIMD or BLAS ambitions; the models
//! and attacks in this toolkit are small enough that clarity and bit-level
//! reproducibility matter more than throughput.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense vector of 64-bit floats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(pub Vec<f64>);

impl Vector {
    pub fn zeros(len: usize) -> Self {
        Vector(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.len(), other.len());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// `self + scale * other`, elementwise.
    pub fn add_scaled(&self, other: &Vector, scale: f64) -> Vector {
        debug_assert_eq!(self.len(), other.len());
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + scale * b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.len(), other.len());
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, factor: f64) -> Vector {
        Vector(self.0.iter().map(|v| v * factor).collect())
    }

    /// Clamp every component to the unit interval.
    pub fn clamp01(&self) -> Vector {
        Vector(self.0.iter().map(|v| v.clamp(0.0, 1.0)).collect())
    }

    pub fn argmax(&self) -> usize {
        // Ties resolve to the lowest index.
        let mut best = 0;
        for (i, &v) in self.0.iter().enumerate().skip(1) {
            if v > self.0[best] {
                best = i;
            }
        }
        best
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl std::ops::IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl From<Vec<f64>> for Vector {
    fn from(values: Vec<f64>) -> Self {
        Vector(values)
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub values: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            values: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r > 0 { rows[0].len() } else { 0 };
        let mut values = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            values.extend_from_slice(row);
        }
        Matrix {
            rows: r,
            cols: c,
            values,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.values[i * n + i] = 1.0;
        }
        m
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: f64) {
        self.values[row * self.cols + col] = v;
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.cols..(row + 1) * self.cols]
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn shape_valid(&self) -> bool {
        self.rows * self.cols == self.values.len()
    }
}

/// Matrix-vector product.
pub fn matvec(m: &Matrix, v: &Vector) -> Result<Vector> {
    if m.cols != v.len() {
        return Err(Error::DimensionMismatch {
            context: "matvec",
            expected: m.cols,
            got: v.len(),
        });
    }
    let mut out = Vec::with_capacity(m.rows);
    for r in 0..m.rows {
        out.push(m.row(r).iter().zip(&v.0).map(|(a, b)| a * b).sum());
    }
    Ok(Vector(out))
}

/// Transposed matrix-vector product, `mᵀ v`.
pub fn matvec_t(m: &Matrix, v: &Vector) -> Result<Vector> {
    if m.rows != v.len() {
        return Err(Error::DimensionMismatch {
            context: "matvec_t",
            expected: m.rows,
            got: v.len(),
        });
    }
    let mut out = vec![0.0; m.cols];
    for r in 0..m.rows {
        let vr = v.0[r];
        for (o, w) in out.iter_mut().zip(m.row(r)) {
            *o += w * vr;
        }
    }
    Ok(Vector(out))
}

/// Norm orders used by the attacks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormOrder {
    L2,
    Linf,
}

/// Vector norm under the given order.
pub fn norm(v: &Vector, order: NormOrder) -> f64 {
    match order {
        NormOrder::L2 => v.0.iter().map(|x| x * x).sum::<f64>().sqrt(),
        NormOrder::Linf => v.0.iter().fold(0.0_f64, |acc, x| acc.max(x.abs())),
    }
}

/// Componentwise sign with `sign(0) = 0`.
pub fn sign(v: &Vector) -> Vector {
    Vector(
        v.0.iter()
            .map(|&x| {
                if x > 0.0 {
                    1.0
                } else if x < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            })
            .collect(),
    )
}

/// Deterministic RNG: SplitMix64 over a 64-bit Weyl sequence.
///
/// Constants are the reference ones (increment 0x9E3779B97F4A7C15, mix
/// multipliers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB). Identical seeds
/// produce identical streams on every platform; all downstream randomness in
/// the toolkit flows from one master seed through [`Rng::derive`].
#[derive(Debug, Clone)]
pub struct Rng {
    seed: u64,
    state: u64,
}

const WEYL: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { seed, state: seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Child generator for parallel task `stream`; depends only on
    /// `(seed, stream)`, not on how much of this stream was consumed.
    pub fn derive(&self, stream: u64) -> Rng {
        Rng::new(splitmix64(
            self.seed ^ splitmix64(stream.wrapping_add(WEYL)),
        ))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(WEYL);
        splitmix64(self.state)
    }

    /// Uniform in `[0, 1)` with 53 bits of mantissa.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Uniform integer in `[0, n)`.
    pub fn next_below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// Standard normal via Box-Muller (no spare caching, so the stream
    /// position is a pure function of call count).
    pub fn next_gaussian(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64(); // (0, 1], keeps ln finite
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, slice: &mut [T]) {
        for i in (1..slice.len()).rev() {
            let j = self.next_below(i + 1);
            slice.swap(i, j);
        }
    }

    /// `k` distinct indices drawn from `0..n` (partial Fisher-Yates).
    pub fn sample_indices(&mut self, n: usize, k: usize) -> Vec<usize> {
        debug_assert!(k <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.next_below(n - i);
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}
