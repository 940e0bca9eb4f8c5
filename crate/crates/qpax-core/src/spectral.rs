//! Quadrature grid, parity decomposition and the spectral operators built
//! from the DCT-I and DST-I matrices.
//!
//! Parity refers to the reflection `s -> pi - s` across the major axis. On the
//! grid `s_i = i pi / N - pi / 2` the reflection maps node `i` to node
//! `(2N - i) mod 2N`, so an even function is determined by its values on
//! `s_0..=s_N` and an odd one by its values on `s_1..s_{N-1}`.

use crate::error::{check_len, Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Cx, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureGrid<T> {
    n: usize,
    nodes: Vec<T>,
    dt: T,
}

impl<T: Real> QuadratureGrid<T> {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config(format!("grid needs N >= 2, got {n}")));
        }
        let dt = T::PI() / T::of(n);
        let nodes = (0..2 * n).map(|i| T::of(i) * dt - T::FRAC_PI_2()).collect();
        Ok(Self { n, nodes, dt })
    }

    /// Half the number of nodes.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        2 * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> T {
        self.nodes[i]
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    /// Index of the mirror node of `i`.
    pub fn mirror(&self, i: usize) -> usize {
        (2 * self.n - i) % (2 * self.n)
    }

    /// Index distance folded into `[0, N]` by periodicity.
    pub fn folded_distance(&self, i: usize, j: usize) -> usize {
        let d = i.abs_diff(j) % (2 * self.n);
        d.min(2 * self.n - d)
    }
}

/// Even part on `s_0..=s_N` and odd part on `s_1..s_{N-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParityPair<T> {
    pub even: Vec<Cx<T>>,
    pub odd: Vec<Cx<T>>,
}

impl<T: Real> ParityPair<T> {
    pub fn zeros(n: usize) -> Self {
        Self { even: vec![Cx::new(T::zero(), T::zero()); n + 1], odd: vec![Cx::new(T::zero(), T::zero()); n - 1] }
    }
}

pub fn parity_split<T: Real>(samples: &[Cx<T>], grid: &QuadratureGrid<T>) -> Result<ParityPair<T>> {
    check_len(grid.len(), samples.len())?;
    let n = grid.n();
    let half = T::lit(0.5);
    let even = (0..=n).map(|i| (samples[i] + samples[grid.mirror(i)]) * half).collect();
    let odd = (1..n).map(|i| (samples[i] - samples[grid.mirror(i)]) * half).collect();
    Ok(ParityPair { even, odd })
}

pub fn parity_recombine<T: Real>(pair: &ParityPair<T>, grid: &QuadratureGrid<T>) -> Result<Vec<Cx<T>>> {
    let n = grid.n();
    check_len(n + 1, pair.even.len())?;
    check_len(n - 1, pair.odd.len())?;
    let mut out = Vec::with_capacity(2 * n);
    out.push(pair.even[0]);
    for i in 1..n {
        out.push(pair.even[i] + pair.odd[i - 1]);
    }
    out.push(pair.even[n]);
    for i in n + 1..2 * n {
        let m = 2 * n - i;
        out.push(pair.even[m] - pair.odd[m - 1]);
    }
    Ok(out)
}

/// DCT-I matrix of size `N + 1` with halved first and last columns.
pub fn dct_matrix<T: Real>(n: usize) -> Matrix<T> {
    let scale = (T::lit(2.0) / T::of(n)).sqrt();
    let w = T::PI() / T::of(n);
    Matrix::from_fn(n + 1, n + 1, |i, j| {
        let v = scale * (T::of((i * j) % (2 * n)) * w).cos();
        if j == 0 || j == n {
            v * T::lit(0.5)
        } else {
            v
        }
    })
}

/// DST-I matrix of size `N - 1`.
pub fn dst_matrix<T: Real>(n: usize) -> Matrix<T> {
    let scale = (T::lit(2.0) / T::of(n)).sqrt();
    let w = T::PI() / T::of(n);
    Matrix::from_fn(n - 1, n - 1, |i, j| scale * (T::of(((i + 1) * (j + 1)) % (2 * n)) * w).sin())
}

fn conjugate_diag<T: Real>(c: &Matrix<T>, d: &[T]) -> Matrix<T> {
    let n = c.rows();
    Matrix::from_fn(n, n, |i, j| (0..n).fold(T::zero(), |s, m| s + c[(i, m)] * d[m] * c[(m, j)]))
}

/// `C diag(0, -1, ..., -N) C`, the first-order operator on even functions.
pub fn l1_even<T: Real>(n: usize) -> Matrix<T> {
    let d: Vec<T> = (0..=n).map(|m| -T::of(m)).collect();
    conjugate_diag(&dct_matrix(n), &d)
}

/// `S diag(1, ..., N - 1) S`, the first-order operator on odd functions.
pub fn l1_odd<T: Real>(n: usize) -> Matrix<T> {
    let d: Vec<T> = (1..n).map(T::of).collect();
    conjugate_diag(&dst_matrix(n), &d)
}

/// Inverse of [`l1_odd`], `S diag(1, 1/2, ..., 1/(N - 1)) S`.
pub fn l1_odd_inverse<T: Real>(n: usize) -> Matrix<T> {
    let d: Vec<T> = (1..n).map(|m| T::of(m).recip()).collect();
    conjugate_diag(&dst_matrix(n), &d)
}

/// Weights `R_k` for `integral ln(4 sin^2((s - t) / 2)) g(t) dt`, `k = 0..=N`.
pub fn kress_weights<T: Real>(n: usize) -> Vec<T> {
    let nn = T::of(n);
    let pi = T::PI();
    (0..=n)
        .map(|k| {
            let sign = if k % 2 == 0 { T::one() } else { -T::one() };
            let mut s = T::zero();
            for m in 1..n {
                s += (T::of((m * k) % (2 * n)) * pi / nn).cos() / T::of(m);
            }
            -sign * pi / (nn * nn) - T::lit(2.0) * pi / nn * s
        })
        .collect()
}

/// `C diag(0, -2 pi, -2 pi / 2, ..., -2 pi / N) C`, the logarithmic integral
/// restricted to even functions.
pub fn w_even<T: Real>(n: usize) -> Matrix<T> {
    let d: Vec<T> = (0..=n).map(|m| if m == 0 { T::zero() } else { -T::TAU() / T::of(m) }).collect();
    conjugate_diag(&dct_matrix(n), &d)
}

/// Operators for one grid size, built once and shared across parameter sweeps.
#[derive(Clone, Debug)]
pub struct SpectralOps<T> {
    pub grid: QuadratureGrid<T>,
    pub l1_even: Matrix<T>,
    pub l1_odd: Matrix<T>,
    pub l1_odd_inverse: Matrix<T>,
    pub w_even: Matrix<T>,
    pub kress: Vec<T>,
}

impl<T: Real> SpectralOps<T> {
    pub fn new(n: usize) -> Result<Self> {
        let grid = QuadratureGrid::new(n)?;
        Ok(Self {
            grid,
            l1_even: l1_even(n),
            l1_odd: l1_odd(n),
            l1_odd_inverse: l1_odd_inverse(n),
            w_even: w_even(n),
            kress: kress_weights(n),
        })
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }
}
