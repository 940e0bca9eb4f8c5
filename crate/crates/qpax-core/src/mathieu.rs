//! Mathieu functions and the separable reference solutions on the ellipse.
//!
//! Elliptical coordinates are `x = c sinh(xi) sin(eta)`, `y = c cosh(xi) cos(eta)`
//! with `c = sqrt(1 - eps^2)`, so the boundary is `xi = artanh(eps)` and the
//! boundary parameter is `s = pi/2 - eta`. Angular functions are normalised
//! with `integral ce^2 = pi` over a period and the coefficient of the leading
//! harmonic is positive. Radial functions use Bessel product series.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::incident::{central_d1, IncidentField};
use crate::scalar::{cx, re, Cx, Real};
use crate::specfun::{bessel_j_seq, bessel_y_seq};
use crate::spectral::{Parity, QuadratureGrid};
use crate::BoundaryCondition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MathieuKind {
    Ce,
    Se,
}

impl MathieuKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Ce => "ce",
            Self::Se => "se",
        }
    }
}

/// Radial kind: 1 is regular, 3 is outgoing (`J + iY` products).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadialKind {
    First,
    Second,
    Third,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipticCoords<T> {
    pub xi: T,
    pub eta: T,
    pub c: T,
}

impl<T: Real> EllipticCoords<T> {
    pub fn from_cartesian(x: T, y: T, c: T) -> Self {
        let z = (cx(y, x) / c).acosh();
        let (mut xi, mut eta) = (z.re, z.im);
        if xi < T::zero() {
            xi = -xi;
            eta = -eta;
        }
        Self { xi, eta, c }
    }

    pub fn to_cartesian(&self) -> (T, T) {
        (self.c * self.xi.sinh() * self.eta.sin(), self.c * self.xi.cosh() * self.eta.cos())
    }
}

/// `artanh(eps)`, the boundary coordinate.
pub fn boundary_xi<T: Real>(epsilon: T) -> T {
    T::lit(0.5) * ((T::one() + epsilon) / (T::one() - epsilon)).ln()
}

/// `q = c^2 k^2 / 4`.
pub fn mathieu_q<T: Real>(epsilon: T, k: T) -> T {
    (T::one() - epsilon * epsilon) * k * k / T::lit(4.0)
}

fn sturm_count<T: Real>(d: &[T], e: &[T], x: T) -> usize {
    let tiny = T::min_positive_value().sqrt();
    let mut count = 0;
    let mut p = d[0] - x;
    if p < T::zero() {
        count += 1;
    }
    for i in 1..d.len() {
        if p == T::zero() {
            p = tiny;
        }
        p = d[i] - x - e[i - 1] * e[i - 1] / p;
        if p < T::zero() {
            count += 1;
        }
    }
    count
}

/// `idx`-th smallest eigenvalue of a symmetric tridiagonal matrix, by bisection.
fn tridiagonal_eigenvalue<T: Real>(d: &[T], e: &[T], idx: usize) -> T {
    let n = d.len();
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for i in 0..n {
        let r = if i > 0 { e[i - 1].abs() } else { T::zero() } + if i + 1 < n { e[i].abs() } else { T::zero() };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    let pad = T::one() + (hi - lo).abs() * T::epsilon();
    lo = lo - pad;
    hi = hi + pad;
    for _ in 0..400 {
        let mid = (lo + hi) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(d, e, mid) > idx {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo + hi) * T::lit(0.5)
}

/// Inverse iteration for the eigenvector of `lambda`.
fn tridiagonal_eigenvector<T: Real>(d: &[T], e: &[T], lambda: T) -> Vec<T> {
    let n = d.len();
    let scale = d.iter().chain(e.iter()).fold(T::one(), |m, v| m.max(v.abs()));
    let floor = scale * T::epsilon();
    let mut v = vec![T::one(); n];
    for _ in 0..3 {
        // Dense Gaussian elimination with partial pivoting on T - lambda I.
        let mut a = vec![T::zero(); n * n];
        for i in 0..n {
            a[i * n + i] = d[i] - lambda;
            if i + 1 < n {
                a[i * n + i + 1] = e[i];
                a[(i + 1) * n + i] = e[i];
            }
        }
        let mut b = v.clone();
        for k in 0..n {
            let mut p = k;
            for i in k + 1..(k + 2).min(n) {
                if a[i * n + k].abs() > a[p * n + k].abs() {
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                b.swap(k, p);
            }
            if a[k * n + k].abs() < floor {
                a[k * n + k] = floor;
            }
            for i in k + 1..(k + 2).min(n) {
                let l = a[i * n + k] / a[k * n + k];
                for j in k..n {
                    let u = a[k * n + j];
                    a[i * n + j] -= l * u;
                }
                b[i] = b[i] - l * b[k];
            }
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..n {
                s -= a[i * n + j] * b[j];
            }
            b[i] = s / a[i * n + i];
        }
        let norm = b.iter().fold(T::zero(), |s, x| s + *x * *x).sqrt();
        v = b.into_iter().map(|x| x / norm).collect();
    }
    v
}

/// Characteristic value and Fourier coefficients of one angular function.
#[derive(Clone, Debug, PartialEq)]
pub struct MathieuBasis<T> {
    kind: MathieuKind,
    m: u32,
    q: T,
    a: T,
    coeffs: Vec<T>,
    orders: Vec<u32>,
}

const MAX_TERMS: usize = 2000;

impl<T: Real> MathieuBasis<T> {
    pub fn new(kind: MathieuKind, m: u32, q: T) -> Result<Self> {
        if kind == MathieuKind::Se && m == 0 {
            return Err(Error::Domain("se_0 does not exist".into()));
        }
        if !(q >= T::zero()) || !q.is_finite() {
            return Err(Error::Domain(format!("Mathieu parameter must be nonnegative, got {q}")));
        }
        let mut nt = m as usize / 2 + 20;
        loop {
            let basis = Self::build(kind, m, q, nt);
            let cmax = basis.coeffs.iter().fold(T::zero(), |a, c| a.max(c.abs()));
            let last = basis.coeffs.last().map_or(T::zero(), |c| c.abs());
            if last <= T::lit(1e-14) * cmax {
                return Ok(basis.trimmed());
            }
            nt *= 2;
            if nt > MAX_TERMS {
                return Err(Error::Oracle(format!("{}_{m} coefficients did not decay for q = {q}", kind.name())));
            }
        }
    }

    fn build(kind: MathieuKind, m: u32, q: T, nt: usize) -> Self {
        let mu = m as usize;
        let (orders, idx): (Vec<u32>, usize) = match (kind, mu % 2) {
            (MathieuKind::Ce, 0) => ((0..nt as u32).map(|r| 2 * r).collect(), mu / 2),
            (_, 1) => ((0..nt as u32).map(|r| 2 * r + 1).collect(), (mu - 1) / 2),
            _ => ((0..nt as u32).map(|r| 2 * r + 2).collect(), (mu - 2) / 2),
        };
        let mut d: Vec<T> = orders.iter().map(|&o| T::of((o * o) as usize)).collect();
        let mut e = vec![q; nt - 1];
        match (kind, mu % 2) {
            (MathieuKind::Ce, 0) => e[0] = q * T::SQRT_2(),
            (MathieuKind::Ce, _) => d[0] += q,
            (MathieuKind::Se, 1) => d[0] -= q,
            _ => {}
        }
        let a = tridiagonal_eigenvalue(&d, &e, idx);
        let mut c = tridiagonal_eigenvector(&d, &e, a);
        if kind == MathieuKind::Ce && mu % 2 == 0 {
            c[0] = c[0] / T::SQRT_2();
        }
        if c[idx] < T::zero() {
            for v in c.iter_mut() {
                *v = -*v;
            }
        }
        Self { kind, m, q, a, coeffs: c, orders }
    }

    fn trimmed(mut self) -> Self {
        let cmax = self.coeffs.iter().fold(T::zero(), |a, c| a.max(c.abs()));
        let keep = self.dominant_index() + 1;
        while self.coeffs.len() > keep && self.coeffs.last().is_some_and(|c| c.abs() <= T::epsilon() * T::lit(1e-3) * cmax) {
            self.coeffs.pop();
            self.orders.pop();
        }
        self
    }

    pub fn kind(&self) -> MathieuKind {
        self.kind
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> T {
        self.q
    }

    /// Characteristic value `a_m(q)` or `b_m(q)`.
    pub fn characteristic_value(&self) -> T {
        self.a
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coeffs
    }

    /// Harmonic of each coefficient.
    pub fn harmonics(&self) -> &[u32] {
        &self.orders
    }

    fn dominant_index(&self) -> usize {
        let m = self.m as usize;
        match (self.kind, m % 2) {
            (MathieuKind::Ce, 0) => m / 2,
            (_, 1) => (m - 1) / 2,
            _ => (m - 2) / 2,
        }
    }

    pub fn parity_in_x(&self) -> Parity {
        match self.kind {
            MathieuKind::Ce => Parity::Even,
            MathieuKind::Se => Parity::Odd,
        }
    }

    fn sum(&self, eta: T, deriv: u8) -> T {
        let mut s = T::zero();
        for (&c, &o) in self.coeffs.iter().zip(&self.orders) {
            let w = T::of(o as usize);
            let (sn, cs) = (w * eta).sin_cos();
            s += c * match (self.kind, deriv) {
                (MathieuKind::Ce, 0) => cs,
                (MathieuKind::Ce, 1) => -w * sn,
                (MathieuKind::Ce, _) => -w * w * cs,
                (MathieuKind::Se, 0) => sn,
                (MathieuKind::Se, 1) => w * cs,
                (MathieuKind::Se, _) => -w * w * sn,
            };
        }
        s
    }

    /// `ce_m(eta)` or `se_m(eta)`.
    pub fn angular(&self, eta: T) -> T {
        self.sum(eta, 0)
    }

    pub fn angular_d(&self, eta: T) -> T {
        self.sum(eta, 1)
    }

    pub fn angular_dd(&self, eta: T) -> T {
        self.sum(eta, 2)
    }

    /// Largest Bessel order the product series touches.
    pub fn max_bessel_order(&self) -> usize {
        self.coeffs.len() + self.m as usize / 2 + 3
    }

    /// Radial function and its `xi` derivative.
    pub fn radial(&self, kind: RadialKind, xi: T) -> Result<(Cx<T>, Cx<T>)> {
        let tables = RadialTables::new(self.q, xi, self.max_bessel_order(), kind)?;
        Ok(self.radial_with(&tables))
    }

    /// Radial function evaluated from shared Bessel tables.
    pub fn radial_with(&self, t: &RadialTables<T>) -> (Cx<T>, Cx<T>) {
        let m = self.m as i64;
        let (s, pre_c, off, sign, shift) = match (self.kind, m % 2) {
            (MathieuKind::Ce, 0) => (m / 2, 0usize, 0i64, T::one(), 0i64),
            (MathieuKind::Ce, _) => ((m - 1) / 2, 0, 1, T::one(), 0),
            (MathieuKind::Se, 1) => ((m - 1) / 2, 0, 1, -T::one(), 0),
            _ => (m / 2, 1, 0, -T::one(), 1),
        };
        let cs = self.coeffs[(s as usize) - pre_c];
        let eps_s = if self.kind == MathieuKind::Ce && m == 0 { T::lit(2.0) } else { T::one() };
        let parity = |n: i64| if n.rem_euclid(2) == 0 { T::one() } else { -T::one() };
        let pre = parity(s) / (eps_s * cs);
        let mut val = Cx::new(T::zero(), T::zero());
        let mut der = Cx::new(T::zero(), T::zero());
        for (l, &c) in self.coeffs.iter().enumerate() {
            let big_l = l as i64 + shift;
            let w = parity(big_l) * c;
            let (a1, b1) = (big_l - s, big_l + s + off);
            let (a2, b2) = (big_l + s + off, big_l - s);
            let v = t.c(b1) * t.j(a1) + t.c(b2) * (sign * t.j(a2));
            let dv = t.c(b1) * t.dj(a1) + t.dc(b1) * t.j(a1) + (t.c(b2) * t.dj(a2) + t.dc(b2) * t.j(a2)) * sign;
            val += v * w;
            der += dv * w;
        }
        (val * pre, der * pre)
    }
}

/// Bessel tables at `u1 = sqrt(q) e^{-xi}` and `u2 = sqrt(q) e^{xi}`,
/// with the chain rule factors for `xi` derivatives folded in.
#[derive(Clone, Debug)]
pub struct RadialTables<T> {
    u1: T,
    u2: T,
    j1: Vec<T>,
    c2: Vec<Cx<T>>,
}

impl<T: Real> RadialTables<T> {
    pub fn new(q: T, xi: T, max_order: usize, kind: RadialKind) -> Result<Self> {
        if !(q > T::zero()) {
            return Err(Error::Domain("radial functions need q > 0".into()));
        }
        let h = q.sqrt();
        let u1 = h * (-xi).exp();
        let u2 = h * xi.exp();
        let n = max_order + 1;
        let j1 = bessel_j_seq(n, u1)?;
        let c2 = match kind {
            RadialKind::First => bessel_j_seq(n, u2)?.into_iter().map(re).collect(),
            RadialKind::Second => bessel_y_seq(n, u2)?.into_iter().map(re).collect(),
            RadialKind::Third => {
                let j = bessel_j_seq(n, u2)?;
                let y = bessel_y_seq(n, u2)?;
                j.into_iter().zip(y).map(|(a, b)| cx(a, b)).collect()
            }
        };
        Ok(Self { u1, u2, j1, c2 })
    }

    fn sgn(n: i64) -> T {
        if n < 0 && n % 2 != 0 {
            -T::one()
        } else {
            T::one()
        }
    }

    fn j(&self, n: i64) -> T {
        Self::sgn(n) * self.j1[n.unsigned_abs() as usize]
    }

    fn c(&self, n: i64) -> Cx<T> {
        self.c2[n.unsigned_abs() as usize] * Self::sgn(n)
    }

    /// `d/dxi J_n(u1) = -u1 J_n'(u1)`.
    fn dj(&self, n: i64) -> T {
        -self.u1 * (self.j(n - 1) - self.j(n + 1)) * T::lit(0.5)
    }

    /// `d/dxi C_n(u2) = u2 C_n'(u2)`.
    fn dc(&self, n: i64) -> Cx<T> {
        (self.c(n - 1) - self.c(n + 1)) * (self.u2 * T::lit(0.5))
    }
}

/// Cache key free helper: builds a basis and wraps it for sharing.
pub fn mathieu_basis<T: Real>(kind: MathieuKind, m: u32, q: T) -> Result<Arc<MathieuBasis<T>>> {
    MathieuBasis::new(kind, m, q).map(Arc::new)
}

/// Field `sum_j coef_j M^(1)_j(xi) S_j(eta)`, a finite combination of regular
/// separable solutions.
#[derive(Clone, Debug)]
pub struct MathieuField<T> {
    terms: Vec<(Arc<MathieuBasis<T>>, Cx<T>)>,
    c: T,
    q: T,
    tag: String,
    parity: Option<Parity>,
}

impl<T: Real> MathieuField<T> {
    /// Single mode `M^(1)_m(xi) S_m(eta)`.
    pub fn mode(kind: MathieuKind, m: u32, k: T, epsilon: T) -> Result<Self> {
        let q = mathieu_q(epsilon, k);
        let b = mathieu_basis(kind, m, q)?;
        let parity = Some(b.parity_in_x());
        let tag = format!("m{}:{m}", kind.name());
        Ok(Self { terms: vec![(b, cx(T::one(), T::zero()))], c: (T::one() - epsilon * epsilon).sqrt(), q, tag, parity })
    }

    /// Plane wave in direction `(cos alpha, sin alpha)`, truncated at order `mmax`.
    pub fn plane_wave(alpha: T, k: T, epsilon: T, mmax: u32) -> Result<Self> {
        let q = mathieu_q(epsilon, k);
        let eta0 = T::FRAC_PI_2() - alpha;
        let mut terms = Vec::new();
        let i_pow = |m: u32| match m % 4 {
            0 => cx(T::one(), T::zero()),
            1 => cx(T::zero(), T::one()),
            2 => cx(-T::one(), T::zero()),
            _ => cx(T::zero(), -T::one()),
        };
        let two = T::lit(2.0);
        let mut ce_zero = true;
        let mut se_zero = true;
        for m in 0..=mmax {
            let b = mathieu_basis(MathieuKind::Ce, m, q)?;
            let v = b.angular(eta0);
            ce_zero &= v == T::zero();
            terms.push((b, i_pow(m) * (two * v)));
        }
        for m in 1..=mmax {
            let b = mathieu_basis(MathieuKind::Se, m, q)?;
            let v = b.angular(eta0);
            se_zero &= v == T::zero();
            terms.push((b, i_pow(m) * (two * v)));
        }
        let parity = match (ce_zero, se_zero) {
            (false, true) => Some(Parity::Even),
            (true, false) => Some(Parity::Odd),
            _ => None,
        };
        Ok(Self { terms, c: (T::one() - epsilon * epsilon).sqrt(), q, tag: format!("planewave:{alpha}"), parity })
    }

    pub fn terms(&self) -> &[(Arc<MathieuBasis<T>>, Cx<T>)] {
        &self.terms
    }

    pub fn focal(&self) -> T {
        self.c
    }

    pub fn q(&self) -> T {
        self.q
    }

    fn max_order(&self) -> usize {
        self.terms.iter().map(|(b, _)| b.max_bessel_order()).max().unwrap_or(1)
    }

    /// Sum over terms of `coef * f(basis, radial) * angular`.
    fn combine(&self, xi: T, eta: T, kind: RadialKind, weights: impl Fn(usize, Cx<T>) -> Cx<T>, use_der: bool) -> Cx<T> {
        let tables = RadialTables::new(self.q, xi, self.max_order(), kind).expect("valid radial arguments");
        let mut acc = Cx::new(T::zero(), T::zero());
        for (j, (b, c)) in self.terms.iter().enumerate() {
            let (v, d) = b.radial_with(&tables);
            let r = if use_der { d } else { v };
            acc += weights(j, *c) * r * b.angular(eta);
        }
        acc
    }

    pub fn value_elliptic(&self, xi: T, eta: T) -> Cx<T> {
        self.combine(xi, eta, RadialKind::First, |_, c| c, false)
    }
}

impl<T: Real> IncidentField<T> for MathieuField<T> {
    fn value(&self, x: T, y: T) -> Cx<T> {
        let p = EllipticCoords::from_cartesian(x, y, self.c);
        self.value_elliptic(p.xi, p.eta)
    }

    fn tag(&self) -> String {
        self.tag.clone()
    }

    fn x_parity(&self) -> Option<Parity> {
        self.parity
    }
}

/// Plane wave truncated at order 15.
pub fn plane_wave_incident<T: Real>(alpha: T, k: T, epsilon: T) -> Result<MathieuField<T>> {
    MathieuField::plane_wave(alpha, k, epsilon, 15)
}

/// Exact scattering solution for an incident [`MathieuField`].
#[derive(Clone, Debug)]
pub struct ScatteringOracle<T> {
    bc: BoundaryCondition,
    field: MathieuField<T>,
    xi_b: T,
    /// Per term: incident radial value and derivative at the boundary, and
    /// the scattered coefficient.
    data: Vec<(Cx<T>, Cx<T>, Cx<T>, Cx<T>, Cx<T>)>,
}

impl<T: Real> ScatteringOracle<T> {
    pub fn new(bc: BoundaryCondition, field: MathieuField<T>, epsilon: T) -> Result<Self> {
        let xi_b = boundary_xi(epsilon);
        let mut data = Vec::with_capacity(field.terms.len());
        for (b, coef) in &field.terms {
            let (r1, d1) = b.radial(RadialKind::First, xi_b)?;
            let (r3, d3) = b.radial(RadialKind::Third, xi_b)?;
            let (num, den) = match bc {
                BoundaryCondition::SoundHard => (d1, d3),
                BoundaryCondition::SoundSoft => (r1, r3),
            };
            if !(den.norm() > T::min_positive_value().sqrt()) || !den.norm().is_finite() {
                return Err(Error::Oracle(format!(
                    "{}_{} radial denominator {den} is degenerate at xi = {xi_b}",
                    b.kind().name(),
                    b.order()
                )));
            }
            let beta = -(*coef) * num / den;
            data.push((r1, d1, r3, d3, beta));
        }
        Ok(Self { bc, field, xi_b, data })
    }

    pub fn boundary_condition(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn incident(&self) -> &MathieuField<T> {
        &self.field
    }

    /// Scattered field coefficients, one per incident term.
    pub fn scattered_coefficients(&self) -> Vec<Cx<T>> {
        self.data.iter().map(|d| d.4).collect()
    }

    /// Boundary unknown at parameter `s`: the total field for sound-hard and
    /// its `xi` derivative for sound-soft.
    pub fn boundary(&self, s: T) -> Cx<T> {
        let eta = T::FRAC_PI_2() - s;
        let mut acc = Cx::new(T::zero(), T::zero());
        for ((b, coef), &(r1, d1, r3, d3, beta)) in self.field.terms.iter().zip(&self.data) {
            let radial = match self.bc {
                BoundaryCondition::SoundHard => *coef * r1 + beta * r3,
                BoundaryCondition::SoundSoft => *coef * d1 + beta * d3,
            };
            acc += radial * b.angular(eta);
        }
        acc
    }

    pub fn boundary_samples(&self, grid: &QuadratureGrid<T>) -> Vec<Cx<T>> {
        grid.nodes().iter().map(|&s| self.boundary(s)).collect()
    }

    pub fn scattered_elliptic(&self, xi: T, eta: T) -> Cx<T> {
        let betas: Vec<Cx<T>> = self.scattered_coefficients();
        self.field.combine(xi, eta, RadialKind::Third, |j, _| betas[j], false)
    }

    pub fn scattered(&self, x: T, y: T) -> Cx<T> {
        let p = EllipticCoords::from_cartesian(x, y, self.field.c);
        self.scattered_elliptic(p.xi, p.eta)
    }

    pub fn total_elliptic(&self, xi: T, eta: T) -> Cx<T> {
        self.field.value_elliptic(xi, eta) + self.scattered_elliptic(xi, eta)
    }

    pub fn total(&self, x: T, y: T) -> Cx<T> {
        let p = EllipticCoords::from_cartesian(x, y, self.field.c);
        self.total_elliptic(p.xi, p.eta)
    }

    pub fn boundary_xi(&self) -> T {
        self.xi_b
    }
}

/// Scattered coefficients obtained by projecting boundary data of an
/// arbitrary incident field onto each angular function with a `points`
/// trapezoid rule in `eta`.
pub fn integral_coefficients<T: Real>(
    bc: BoundaryCondition,
    incident: &dyn IncidentField<T>,
    bases: &[Arc<MathieuBasis<T>>],
    epsilon: T,
    points: usize,
) -> Result<Vec<Cx<T>>> {
    let c = (T::one() - epsilon * epsilon).sqrt();
    let xi_b = boundary_xi(epsilon);
    let at = |xi: T, eta: T| {
        let (x, y) = EllipticCoords { xi, eta, c }.to_cartesian();
        incident.value(x, y)
    };
    let h = T::TAU() / T::of(points);
    let g: Vec<(T, Cx<T>)> = (0..points)
        .map(|j| {
            let eta = T::of(j) * h;
            let v = match bc {
                BoundaryCondition::SoundHard => central_d1(|d| at(xi_b + d, eta), T::lit(1e-3)),
                BoundaryCondition::SoundSoft => at(xi_b, eta),
            };
            (eta, v)
        })
        .collect();
    let mut out = Vec::with_capacity(bases.len());
    for b in bases {
        let mut proj = Cx::new(T::zero(), T::zero());
        for &(eta, v) in &g {
            proj += v * b.angular(eta);
        }
        proj = proj * h / T::PI();
        let (r3, d3) = b.radial(RadialKind::Third, xi_b)?;
        let den = match bc {
            BoundaryCondition::SoundHard => d3,
            BoundaryCondition::SoundSoft => r3,
        };
        out.push(-proj / den);
    }
    Ok(out)
}
