//! Incident fields: values and the Cartesian derivatives the solvers need.

use crate::scalar::{Cx, Real};
use crate::spectral::Parity;

/// Step of the central difference stencils.
pub const FD_STEP: f64 = 1e-2;

const D1: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
const D2: [f64; 4] = [8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0];
const D2_CENTER: f64 = -205.0 / 72.0;

/// Eighth order central first derivative of `f` at 0.
pub fn central_d1<T: Real>(f: impl Fn(T) -> Cx<T>, h: T) -> Cx<T> {
    let mut acc = Cx::new(T::zero(), T::zero());
    for (i, &c) in D1.iter().enumerate() {
        let d = T::of(i + 1) * h;
        acc += (f(d) - f(-d)) * T::lit(c);
    }
    acc / h
}

/// Eighth order central second derivative of `f` at 0.
pub fn central_d2<T: Real>(f: impl Fn(T) -> Cx<T>, h: T) -> Cx<T> {
    let mut acc = f(T::zero()) * T::lit(D2_CENTER);
    for (i, &c) in D2.iter().enumerate() {
        let d = T::of(i + 1) * h;
        acc += (f(d) + f(-d)) * T::lit(c);
    }
    acc / (h * h)
}

/// A solution of the Helmholtz equation defined on the whole plane.
///
/// Derivatives default to finite differences. Fields with a known parity in
/// `x` return exact zeros on the axis `x = 0` where symmetry forces them.
pub trait IncidentField<T: Real>: Send + Sync {
    fn value(&self, x: T, y: T) -> Cx<T>;

    fn tag(&self) -> String;

    /// Parity under `x -> -x`, if any.
    fn x_parity(&self) -> Option<Parity> {
        None
    }

    fn dx(&self, x: T, y: T) -> Cx<T> {
        if x == T::zero() && self.x_parity() == Some(Parity::Even) {
            return Cx::new(T::zero(), T::zero());
        }
        central_d1(|d| self.value(x + d, y), T::lit(FD_STEP))
    }

    fn dy(&self, x: T, y: T) -> Cx<T> {
        if x == T::zero() && self.x_parity() == Some(Parity::Odd) {
            return Cx::new(T::zero(), T::zero());
        }
        central_d1(|d| self.value(x, y + d), T::lit(FD_STEP))
    }

    fn dxx(&self, x: T, y: T) -> Cx<T> {
        if x == T::zero() && self.x_parity() == Some(Parity::Odd) {
            return Cx::new(T::zero(), T::zero());
        }
        central_d2(|d| self.value(x + d, y), T::lit(FD_STEP))
    }

    /// Value on the axis, exactly zero for fields odd in `x`.
    fn axis_value(&self, y: T) -> Cx<T> {
        if self.x_parity() == Some(Parity::Odd) {
            return Cx::new(T::zero(), T::zero());
        }
        self.value(T::zero(), y)
    }
}

/// Exact plane wave `exp(i k (x cos a + y sin a))`.
#[derive(Clone, Copy, Debug)]
pub struct ExactPlaneWave<T> {
    pub k: T,
    pub alpha: T,
}

impl<T: Real> ExactPlaneWave<T> {
    fn dir(&self) -> (T, T) {
        (self.alpha.cos(), self.alpha.sin())
    }
}

impl<T: Real> IncidentField<T> for ExactPlaneWave<T> {
    fn value(&self, x: T, y: T) -> Cx<T> {
        let (a, b) = self.dir();
        let ph = self.k * (x * a + y * b);
        Cx::new(ph.cos(), ph.sin())
    }

    fn tag(&self) -> String {
        format!("exact-planewave:{}", self.alpha)
    }

    fn dx(&self, x: T, y: T) -> Cx<T> {
        self.value(x, y) * Cx::new(T::zero(), self.k * self.dir().0)
    }

    fn dy(&self, x: T, y: T) -> Cx<T> {
        self.value(x, y) * Cx::new(T::zero(), self.k * self.dir().1)
    }

    fn dxx(&self, x: T, y: T) -> Cx<T> {
        let a = self.k * self.dir().0;
        -self.value(x, y) * (a * a)
    }
}

/// The zero field.
#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroField;

impl<T: Real> IncidentField<T> for ZeroField {
    fn value(&self, _: T, _: T) -> Cx<T> {
        Cx::new(T::zero(), T::zero())
    }
    fn tag(&self) -> String {
        "zero".into()
    }
    fn dx(&self, _: T, _: T) -> Cx<T> {
        Cx::new(T::zero(), T::zero())
    }
    fn dy(&self, _: T, _: T) -> Cx<T> {
        Cx::new(T::zero(), T::zero())
    }
    fn dxx(&self, _: T, _: T) -> Cx<T> {
        Cx::new(T::zero(), T::zero())
    }
}
