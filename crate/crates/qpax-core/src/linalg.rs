//! Dense matrices and LU factorisation with partial pivoting.

use std::cell::Cell;
use std::ops::{Add, Index, IndexMut, Mul};

use num_traits::Zero;

use crate::error::{check_len, Error, Result};
use crate::scalar::{Cx, Real};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Copy + Zero> Matrix<E> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![E::zero(); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<E>) -> Result<Self> {
        check_len(rows * cols, data.len())?;
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[E] {
        &self.data
    }

    pub fn map<F: Copy + Zero>(&self, f: impl Fn(E) -> F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    /// Square sub-block with rows and columns in `range`.
    pub fn block(&self, range: std::ops::Range<usize>) -> Self {
        let off = range.start;
        let n = range.len();
        Self::from_fn(n, n, |i, j| self[(i + off, j + off)])
    }
}

impl<E: Copy + Zero + Add<Output = E> + Mul<Output = E>> Matrix<E> {
    pub fn matvec(&self, v: &[E]) -> Vec<E> {
        assert_eq!(v.len(), self.cols, "matvec dimension");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(E::zero(), |acc, (&a, &b)| acc + a * b))
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..other.cols {
                    out.data[i * other.cols + j] = out.data[i * other.cols + j] + a * other[(k, j)];
                }
            }
        }
        out
    }
}

impl<T: Real> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    /// Applies a real matrix to a complex vector.
    pub fn apply(&self, v: &[Cx<T>]) -> Vec<Cx<T>> {
        assert_eq!(v.len(), self.cols, "apply dimension");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(Cx::zero(), |acc, (&a, &b)| acc + b * a))
            .collect()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn to_complex(&self) -> Matrix<Cx<T>> {
        self.map(|x| Cx::new(x, T::zero()))
    }
}

impl<T: Real> Matrix<Cx<T>> {
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.norm()))
    }
}

impl<E> Index<(usize, usize)> for Matrix<E> {
    type Output = E;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &E {
        &self.data[i * self.cols + j]
    }
}

impl<E> IndexMut<(usize, usize)> for Matrix<E> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        &mut self.data[i * self.cols + j]
    }
}

thread_local! {
    static FACTORISATIONS: Cell<usize> = const { Cell::new(0) };
}

/// Number of LU factorisations performed on the current thread.
pub fn factorization_count() -> usize {
    FACTORISATIONS.with(|c| c.get())
}

/// Condition estimates above this raise the ill-conditioning flag.
pub const ILL_CONDITIONED: f64 = 1e12;

#[derive(Clone, Debug)]
pub struct Lu<T> {
    n: usize,
    lu: Vec<Cx<T>>,
    piv: Vec<usize>,
    norm1: T,
    growth: T,
}

pub fn lu_factor<T: Real>(a: &Matrix<Cx<T>>) -> Result<Lu<T>> {
    if a.rows != a.cols {
        return Err(Error::Config(format!("matrix is {}x{}, expected square", a.rows, a.cols)));
    }
    if a.data.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return Err(Error::Domain("matrix has non-finite entries".into()));
    }
    FACTORISATIONS.with(|c| c.set(c.get() + 1));
    let n = a.rows;
    let mut lu = a.data.clone();
    let mut piv: Vec<usize> = (0..n).collect();
    let amax = a.max_abs();
    let norm1 = (0..n).map(|j| (0..n).fold(T::zero(), |s, i| s + a[(i, j)].norm())).fold(T::zero(), T::max);
    for k in 0..n {
        let mut p = k;
        let mut best = lu[k * n + k].norm();
        for i in k + 1..n {
            let v = lu[i * n + k].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == T::zero() {
            return Err(Error::Singular { column: k });
        }
        if p != k {
            for j in 0..n {
                lu.swap(k * n + j, p * n + j);
            }
            piv.swap(k, p);
        }
        let d = lu[k * n + k];
        for i in k + 1..n {
            let l = lu[i * n + k] / d;
            lu[i * n + k] = l;
            if l == Cx::zero() {
                continue;
            }
            for j in k + 1..n {
                let u = lu[k * n + j];
                lu[i * n + j] -= l * u;
            }
        }
    }
    let umax = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).fold(T::zero(), |m, (i, j)| m.max(lu[i * n + j].norm()));
    let growth = if amax > T::zero() { umax / amax } else { T::one() };
    Ok(Lu { n, lu, piv, norm1, growth })
}

impl<T: Real> Lu<T> {
    pub fn order(&self) -> usize {
        self.n
    }

    /// Largest entry of `U` over largest entry of `A`.
    pub fn pivot_growth(&self) -> T {
        self.growth
    }

    pub fn solve(&self, b: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
        check_len(self.n, b.len())?;
        let n = self.n;
        let mut x: Vec<Cx<T>> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s / self.lu[i * n + i];
        }
        Ok(x)
    }

    /// Solves `A^H x = b`.
    pub fn solve_adjoint(&self, b: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
        check_len(self.n, b.len())?;
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for j in 0..i {
                s -= self.lu[j * n + i].conj() * y[j];
            }
            y[i] = s / self.lu[i * n + i].conj();
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= self.lu[j * n + i].conj() * y[j];
            }
            y[i] = s;
        }
        let mut x = vec![Cx::zero(); n];
        for (k, &p) in self.piv.iter().enumerate() {
            x[p] = y[k];
        }
        Ok(x)
    }

    /// One-norm condition estimate from five steps of Hager's iteration.
    pub fn cond_estimate(&self) -> T {
        let n = self.n;
        if n == 0 {
            return T::one();
        }
        let mut x = vec![Cx::new(T::of(n).recip(), T::zero()); n];
        let mut est = T::zero();
        let mut last: Option<usize> = None;
        for _ in 0..5 {
            let y = match self.solve(&x) {
                Ok(y) => y,
                Err(_) => return T::infinity(),
            };
            est = y.iter().fold(T::zero(), |s, v| s + v.norm());
            let xi: Vec<Cx<T>> = y
                .iter()
                .map(|v| {
                    let r = v.norm();
                    if r > T::zero() {
                        v / r
                    } else {
                        Cx::new(T::one(), T::zero())
                    }
                })
                .collect();
            let z = match self.solve_adjoint(&xi) {
                Ok(z) => z,
                Err(_) => return T::infinity(),
            };
            let (jmax, zmax) = z.iter().enumerate().fold((0, T::zero()), |(bj, bm), (j, v)| {
                if v.norm() > bm {
                    (j, v.norm())
                } else {
                    (bj, bm)
                }
            });
            let ztx = z.iter().zip(&x).fold(T::zero(), |s, (a, b)| s + (a.conj() * b).re);
            if zmax <= ztx || last == Some(jmax) {
                break;
            }
            last = Some(jmax);
            x = vec![Cx::zero(); n];
            x[jmax] = Cx::new(T::one(), T::zero());
        }
        self.norm1 * est
    }
}

#[derive(Clone, Debug)]
pub struct DenseSystem<T> {
    pub matrix: Matrix<Cx<T>>,
    pub rhs: Vec<Cx<T>>,
}

#[derive(Clone, Debug)]
pub struct LuSolution<T> {
    pub x: Vec<Cx<T>>,
    pub pivot_growth: T,
    pub cond_estimate: T,
    pub ill_conditioned: bool,
}

pub fn lu_solve<T: Real>(system: &DenseSystem<T>) -> Result<LuSolution<T>> {
    check_len(system.matrix.rows(), system.rhs.len())?;
    let lu = lu_factor(&system.matrix)?;
    let x = lu.solve(&system.rhs)?;
    let cond = lu.cond_estimate();
    Ok(LuSolution {
        x,
        pivot_growth: lu.pivot_growth(),
        cond_estimate: cond,
        ill_conditioned: !(cond <= T::lit(ILL_CONDITIONED)),
    })
}

pub fn norm_inf<T: Real>(v: &[Cx<T>]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.norm()))
}

/// `|u - v|_inf / |v|_inf`.
pub fn rel_err_inf<T: Real>(u: &[Cx<T>], v_ref: &[Cx<T>]) -> Result<T> {
    check_len(v_ref.len(), u.len())?;
    let den = norm_inf(v_ref);
    if !(den > T::zero()) {
        return Err(Error::Domain("reference vector has zero norm".into()));
    }
    let num = u.iter().zip(v_ref).fold(T::zero(), |m, (a, b)| m.max((a - b).norm()));
    Ok(num / den)
}
