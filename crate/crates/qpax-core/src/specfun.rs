//! Bessel and Hankel functions of real argument, and the regular factors
//! `Psi` and `Phi` of the logarithmic kernel splitting.
//!
//! `J_n` comes from Miller's downward recurrence normalised with
//! `J_0 + 2 sum J_2k = 1`. `Y_0` and `Y_1` follow from the Neumann series over
//! the same sequence, and higher orders from upward recurrence.

use crate::error::{Error, Result};
use crate::scalar::{cx, Cx, Real};

/// Below this argument `Psi` and `Phi` switch to their power series.
pub const SERIES_SWITCH: f64 = 1e-2;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn check_arg<T: Real>(x: T, name: &str) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("{name}: non-finite argument {x}")));
    }
    if x < T::zero() {
        return Err(Error::Domain(format!("{name}: negative argument {x}")));
    }
    Ok(())
}

fn miller_start<T: Real>(nmax: usize, x: T) -> usize {
    let top = x.to_f64().unwrap_or(0.0).max(nmax as f64);
    let m = (top + 30.0 + 3.0 * top.sqrt()).ceil() as usize;
    m + (m & 1)
}

/// Raw Miller sequence `J_0..=J_m` for `x > 0`, where `m >= nmax` is the
/// starting index of the recurrence.
fn miller<T: Real>(nmax: usize, x: T) -> Vec<T> {
    let m = miller_start(nmax, x);
    let big = T::max_value().sqrt();
    let two_over_x = T::lit(2.0) / x;
    let mut f = vec![T::zero(); m + 2];
    f[m] = T::min_positive_value().sqrt();
    let mut norm = T::zero();
    for k in (1..=m).rev() {
        f[k - 1] = T::of(k) * two_over_x * f[k] - f[k + 1];
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += f[k - 1];
        }
        if f[k - 1].abs() > big {
            let s = big.recip();
            for v in f[k - 1..].iter_mut() {
                *v = *v * s;
            }
            norm = norm * s;
        }
    }
    norm = f[0] + T::lit(2.0) * norm;
    f.truncate(m + 1);
    for v in f.iter_mut() {
        *v = *v / norm;
    }
    f
}

/// `J_0(x), ..., J_nmax(x)` for `x >= 0`.
pub fn bessel_j_seq<T: Real>(nmax: usize, x: T) -> Result<Vec<T>> {
    check_arg(x, "bessel_j_seq")?;
    if x == T::zero() {
        let mut v = vec![T::zero(); nmax + 1];
        v[0] = T::one();
        return Ok(v);
    }
    let mut j = miller(nmax, x);
    j.truncate(nmax + 1);
    Ok(j)
}

fn y01_from<T: Real>(j: &[T], x: T) -> (T, T) {
    let pi = T::PI();
    let two_pi = T::lit(2.0) / pi;
    let lg = (x / T::lit(2.0)).ln() + T::lit(EULER_GAMMA);
    let mut s0 = T::zero();
    let mut s1 = T::zero();
    let mut k = 1;
    while 2 * k + 1 < j.len() {
        let sign = if k % 2 == 0 { T::one() } else { -T::one() };
        let kk = T::of(k);
        s0 += sign * j[2 * k] / kk;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / kk;
        k += 1;
    }
    let y0 = two_pi * lg * j[0] - T::lit(2.0) * two_pi * s0;
    let y1 = -two_pi * (j[0] / x - lg * j[1]) + two_pi * s1;
    (y0, y1)
}

/// `Y_0(x), ..., Y_nmax(x)` for `x > 0`.
pub fn bessel_y_seq<T: Real>(nmax: usize, x: T) -> Result<Vec<T>> {
    check_arg(x, "bessel_y_seq")?;
    if x == T::zero() {
        return Err(Error::Domain("bessel_y_seq: Y_n is singular at 0".into()));
    }
    let j = miller(1, x);
    let (y0, y1) = y01_from(&j, x);
    let mut y = Vec::with_capacity(nmax + 1);
    y.push(y0);
    if nmax >= 1 {
        y.push(y1);
    }
    for n in 1..nmax {
        let next = T::of(2 * n) / x * y[n] - y[n - 1];
        y.push(next);
    }
    Ok(y)
}

fn check_order(order: u32) -> Result<()> {
    if order > 1 {
        return Err(Error::Domain(format!("order {order} not supported, use 0 or 1")));
    }
    Ok(())
}

/// Bessel function of the first kind of order 0 or 1.
pub fn bessel_j<T: Real>(order: u32, x: T) -> Result<T> {
    check_order(order)?;
    Ok(bessel_j_seq(1, x)?[order as usize])
}

/// Bessel function of the second kind of order 0 or 1.
pub fn bessel_y<T: Real>(order: u32, x: T) -> Result<T> {
    check_order(order)?;
    check_arg(x, "bessel_y")?;
    if x == T::zero() {
        return Err(Error::Domain("bessel_y: singular at 0".into()));
    }
    let j = miller(1, x);
    let (y0, y1) = y01_from(&j, x);
    Ok(if order == 0 { y0 } else { y1 })
}

/// `J_0, J_1, Y_0, Y_1` at one argument `x > 0`, sharing the recurrence.
pub fn bessel_jy01<T: Real>(x: T) -> Result<[T; 4]> {
    check_arg(x, "bessel_jy01")?;
    if x == T::zero() {
        return Err(Error::Domain("bessel_jy01: Y is singular at 0".into()));
    }
    let j = miller(1, x);
    let (y0, y1) = y01_from(&j, x);
    Ok([j[0], j[1], y0, y1])
}

/// Hankel function of the first kind `H_n^(1)(x) = J_n(x) + i Y_n(x)`.
pub fn hankel1<T: Real>(order: u32, x: T) -> Result<Cx<T>> {
    check_order(order)?;
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::Domain(format!("hankel1: argument must be positive, got {x}")));
    }
    let [j0, j1, y0, y1] = bessel_jy01(x)?;
    Ok(if order == 0 { cx(j0, y0) } else { cx(j1, y1) })
}

/// `H(z) = (i pi / 2) z H_1^(1)(z)`, with `H(0) = 1`.
pub fn h_factor<T: Real>(z: T) -> Result<Cx<T>> {
    check_arg(z, "h_factor")?;
    if z == T::zero() {
        return Ok(cx(T::one(), T::zero()));
    }
    let [_, j1, _, y1] = bessel_jy01(z)?;
    let half_pi = T::FRAC_PI_2();
    Ok(cx(-half_pi * z * y1, half_pi * z * j1))
}

fn digamma_int<T: Real>(n: usize) -> T {
    // psi(n) for integer n >= 1
    let mut h = T::zero();
    for j in 1..n {
        h += T::of(j).recip();
    }
    h - T::lit(EULER_GAMMA)
}

fn psi_series<T: Real>(z: T, k: T) -> Cx<T> {
    let w = -(z * z) / T::lit(4.0);
    let mut j1_over = T::zero();
    let mut s = T::zero();
    let mut t = T::one();
    for j in 0..40usize {
        if j > 0 {
            t = t * w / (T::of(j) * T::of(j + 1));
        }
        j1_over += t;
        let term = t * (digamma_int::<T>(j + 1) + digamma_int::<T>(j + 2));
        s += term;
        if t.abs() < T::epsilon() * T::lit(1e-3) {
            break;
        }
    }
    let zj1 = z * z / T::lit(2.0) * j1_over;
    let s = z * z / T::lit(4.0) * s;
    let lg = (T::lit(4.0) / k).ln();
    cx(T::one() + zj1 * lg + s, zj1 * T::FRAC_PI_2())
}

/// `Psi(z) = H(z) + (z J_1(z) / 2) ln(4 z^2 / k^2)`, the analytic part of `H`.
pub fn psi_regularized<T: Real>(z: T, k: T) -> Result<Cx<T>> {
    check_arg(z, "psi_regularized")?;
    if !(k > T::zero()) || !k.is_finite() {
        return Err(Error::Domain(format!("psi_regularized: wavenumber must be positive, got {k}")));
    }
    if z < T::lit(SERIES_SWITCH) {
        return Ok(psi_series(z, k));
    }
    Ok(psi_direct(z, k))
}

pub(crate) fn psi_direct<T: Real>(z: T, k: T) -> Cx<T> {
    let [_, j1, _, y1] = bessel_jy01(z).expect("positive argument");
    let half_pi = T::FRAC_PI_2();
    let lg = (T::lit(4.0) * z * z / (k * k)).ln();
    cx(-half_pi * z * y1 + z * j1 / T::lit(2.0) * lg, half_pi * z * j1)
}

/// `Phi(z) = J_1(z) / z` with `Phi(0) = 1/2`.
pub fn phi_ratio<T: Real>(z: T) -> Result<T> {
    check_arg(z, "phi_ratio")?;
    if z < T::lit(SERIES_SWITCH) {
        let w = -(z * z) / T::lit(4.0);
        let mut t = T::one();
        let mut s = T::one();
        for j in 1..20usize {
            t = t * w / (T::of(j) * T::of(j + 1));
            s += t;
            if t.abs() < T::epsilon() * T::lit(1e-3) {
                break;
            }
        }
        return Ok(s / T::lit(2.0));
    }
    Ok(bessel_j(1, z)? / z)
}
