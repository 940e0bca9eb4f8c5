//! Ellipse parameterisation and the boundary integral kernels.
//!
//! The ellipse is `y(t) = (eps cos t, sin t)`. All kernels are the double
//! layer kernels multiplied by the arc speed, so `integral K(s, t) mu(t) dt`
//! is taken against the plain parameter `t`.

use crate::error::{Error, Result};
use crate::scalar::{cx, re, Cx, Real};
use crate::specfun::{bessel_jy01, h_factor, phi_ratio, psi_regularized};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipseShape<T> {
    epsilon: T,
}

impl<T: Real> EllipseShape<T> {
    pub fn new(epsilon: T) -> Result<Self> {
        if !(epsilon > T::zero() && epsilon < T::one()) {
            return Err(Error::Config(format!("epsilon must lie in (0, 1), got {epsilon}")));
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    /// Focal half distance `sqrt(1 - eps^2)`.
    pub fn focal(&self) -> T {
        (T::one() - self.epsilon * self.epsilon).sqrt()
    }
}

pub fn ellipse_point<T: Real>(t: T, shape: &EllipseShape<T>) -> (T, T) {
    (shape.epsilon * t.cos(), t.sin())
}

/// Tangent `y'(t)`.
pub fn ellipse_tangent<T: Real>(t: T, shape: &EllipseShape<T>) -> (T, T) {
    (-shape.epsilon * t.sin(), t.cos())
}

/// Outward normal scaled by the arc speed, `(cos t, eps sin t)`.
pub fn ellipse_scaled_normal<T: Real>(t: T, shape: &EllipseShape<T>) -> (T, T) {
    (t.cos(), shape.epsilon * t.sin())
}

pub fn chord_r<T: Real>(s: T, t: T, shape: &EllipseShape<T>) -> T {
    let two = T::lit(2.0);
    let half_d = (s - t) / two;
    let half_s = (s + t) / two;
    let e = shape.epsilon;
    let (sn, cs) = half_s.sin_cos();
    two * half_d.sin().abs() * (cs * cs + e * e * sn * sn).sqrt()
}

pub fn laplace_kernel<T: Real>(s: T, t: T, shape: &EllipseShape<T>) -> T {
    let e = shape.epsilon;
    let den = T::one() + e * e + (T::one() - e * e) * (s + t).cos();
    -e / (T::TAU() * den)
}

pub fn z_eps<T: Real>(s: T, t: T, shape: &EllipseShape<T>, k: T) -> T {
    k * chord_r(s, t, shape)
}

/// `K = H(z) K^L`, equal to `K^L` on the diagonal.
pub fn helmholtz_kernel<T: Real>(s: T, t: T, shape: &EllipseShape<T>, k: T) -> Cx<T> {
    let z = z_eps(s, t, shape, k);
    let kl = laplace_kernel(s, t, shape);
    if z == T::zero() {
        return re(kl);
    }
    h_factor(z).expect("nonnegative argument") * kl
}

fn log_sin2<T: Real>(s: T, t: T) -> T {
    let v = ((s - t) / T::lit(2.0)).sin();
    (T::lit(4.0) * v * v).ln()
}

/// Smooth factor of the logarithmic part, `K1 = -(z J_1(z) / 2) K^L`.
pub fn kress_k1<T: Real>(s: T, t: T, shape: &EllipseShape<T>, k: T) -> T {
    let z = z_eps(s, t, shape, k);
    if z == T::zero() {
        return T::zero();
    }
    let [_, j1, _, _] = bessel_jy01(z).expect("positive argument");
    -z * j1 / T::lit(2.0) * laplace_kernel(s, t, shape)
}

/// Remainder `K2 = K - K1 ln(4 sin^2((s - t) / 2))`, equal to `K^L` on the
/// diagonal.
pub fn kress_k2<T: Real>(s: T, t: T, shape: &EllipseShape<T>, k: T) -> Cx<T> {
    let z = z_eps(s, t, shape, k);
    let kl = laplace_kernel(s, t, shape);
    if z == T::zero() {
        return re(kl);
    }
    let [_, j1, _, y1] = bessel_jy01(z).expect("positive argument");
    let half = T::lit(0.5);
    let pi = T::PI();
    let lg = log_sin2(s, t);
    // (i pi / 2) z H_1 + (z J_1 / 2) ln(4 sin^2)
    cx(half * z * (-pi * y1 + j1 * lg), half * z * pi * j1) * kl
}

/// Both splitting factors at once, sharing the Bessel evaluation.
pub(crate) fn kress_pair<T: Real>(s: T, t: T, shape: &EllipseShape<T>, k: T) -> (T, Cx<T>) {
    let z = z_eps(s, t, shape, k);
    let kl = laplace_kernel(s, t, shape);
    if z == T::zero() {
        return (T::zero(), re(kl));
    }
    let [_, j1, _, y1] = bessel_jy01(z).expect("positive argument");
    let half = T::lit(0.5);
    let pi = T::PI();
    let lg = log_sin2(s, t);
    let k1 = -half * z * j1 * kl;
    let k2 = cx(half * z * (-pi * y1 + j1 * lg), half * z * pi * j1) * kl;
    (k1, k2)
}

/// `psi_s(t) = Psi(k |sin s - sin t|)`.
pub fn psi_s<T: Real>(s: T, t: T, k: T) -> Cx<T> {
    psi_regularized(k * (s.sin() - t.sin()).abs(), k).expect("valid arguments")
}

/// `phi_s(t) = 2 k^2 sin^2((s - t) / 2) Phi(k |sin s - sin t|)`.
pub fn phi_s<T: Real>(s: T, t: T, k: T) -> T {
    let v = ((s - t) / T::lit(2.0)).sin();
    T::lit(2.0) * k * k * v * v * phi_ratio(k * (s.sin() - t.sin()).abs()).expect("valid argument")
}

/// A closed curve `t -> (eps y1(t), y2(t))` with a known mirror map, used to
/// probe the kernel factorisation away from the ellipse.
pub trait GeneralCurve<T: Real> {
    fn period(&self) -> T;
    fn y1(&self, t: T) -> T;
    fn y2(&self, t: T) -> T;
    fn dy1(&self, t: T) -> T;
    fn dy2(&self, t: T) -> T;
    fn ddy2(&self, t: T) -> T;
    /// Mirror map: `y2(sigma(t)) = y2(t)`.
    fn sigma(&self, t: T) -> T;
    /// Parameters where `y2' = 0`.
    fn degenerate_points(&self) -> Vec<T>;
}

pub fn general_curve_laplace_kernel<T: Real, C: GeneralCurve<T> + ?Sized>(
    s: T,
    t: T,
    epsilon: T,
    curve: &C,
) -> T {
    let d1 = curve.y1(s) - curve.y1(t);
    let d2 = curve.y2(s) - curve.y2(t);
    let num = curve.dy2(t) * d1 - curve.dy1(t) * d2;
    let den = epsilon * epsilon * d1 * d1 + d2 * d2;
    epsilon / T::TAU() * num / den
}

/// Limit of `eps K(s, sigma(s))` as `eps -> 0`.
pub fn mirror_asymptote<T: Real, C: GeneralCurve<T> + ?Sized>(s: T, curve: &C) -> T {
    let m = curve.sigma(s);
    curve.dy2(m) / (T::TAU() * (curve.y1(s) - curve.y1(m)))
}

/// Limit of `eps K` at a degenerate point.
pub fn degenerate_asymptote<T: Real, C: GeneralCurve<T> + ?Sized>(s: T, curve: &C) -> T {
    let m = curve.sigma(s);
    -curve.ddy2(m) / (T::lit(2.0) * T::TAU() * curve.dy1(m))
}

/// The ellipse written as a general curve, `(y1, y2) = (cos, sin)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct EllipseCurve;

impl<T: Real> GeneralCurve<T> for EllipseCurve {
    fn period(&self) -> T {
        T::TAU()
    }
    fn y1(&self, t: T) -> T {
        t.cos()
    }
    fn y2(&self, t: T) -> T {
        t.sin()
    }
    fn dy1(&self, t: T) -> T {
        -t.sin()
    }
    fn dy2(&self, t: T) -> T {
        t.cos()
    }
    fn ddy2(&self, t: T) -> T {
        -t.sin()
    }
    fn sigma(&self, t: T) -> T {
        T::PI() - t
    }
    fn degenerate_points(&self) -> Vec<T> {
        vec![-T::FRAC_PI_2(), T::FRAC_PI_2()]
    }
}
