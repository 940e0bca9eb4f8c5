//! Invariant suite behind the `selftest` command.

use std::fmt::Write as _;

use qpax_core::geometry::{helmholtz_kernel, kress_k1, kress_k2, laplace_kernel};
use qpax_core::mathieu::{MathieuKind, RadialKind};
use qpax_core::spectral::{dct_matrix, dst_matrix, kress_weights, parity_recombine, parity_split};
use qpax_core::{Basis, BoundaryCondition, Ellipse, Grid, Ops, Oracle, Pair, RealMatrix, C64};

use crate::source::SourceSpec;

#[derive(Clone, Debug, Default)]
pub struct SelftestOptions {
    /// Added to the leading entry of every DCT matrix before checking.
    pub dct_fault: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = if c.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{tag}  {:<28} {:>10.3e}  tol {:.0e}", c.name, c.residual, c.tolerance);
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        let _ = writeln!(s, "{} checks, {failed} failed", self.checks.len());
        s
    }
}

fn identity_error(m: &RealMatrix) -> f64 {
    let p = m.matmul(m);
    let mut e = 0.0f64;
    for i in 0..p.rows() {
        for j in 0..p.cols() {
            let d = if i == j { 1.0 } else { 0.0 };
            e = e.max((p[(i, j)] - d).abs());
        }
    }
    e
}

fn involutions(opts: &SelftestOptions) -> f64 {
    let mut worst = 0.0f64;
    for n in 2..=128 {
        let mut c = dct_matrix::<f64>(n);
        if let Some(d) = opts.dct_fault {
            c[(0, 0)] += d;
        }
        worst = worst.max(identity_error(&c)).max(identity_error(&dst_matrix::<f64>(n)));
    }
    worst
}

fn sample(g: &Grid, f: impl Fn(f64) -> f64) -> Vec<C64> {
    g.nodes().iter().map(|&s| C64::new(f(s), 0.0)).collect()
}

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

fn eigenrelations() -> f64 {
    let mut worst = 0.0f64;
    for n in [2, 3, 8, 17, 32, 64] {
        let ops = Ops::new(n).expect("valid size");
        let g = &ops.grid;
        let apply = |v: &[C64]| {
            let p = parity_split(v, g).expect("full grid");
            let q = Pair { even: ops.l1_even.apply(&p.even), odd: ops.l1_odd.apply(&p.odd) };
            parity_recombine(&q, g).expect("half grids")
        };
        for m in 0..=n {
            let mf = m as f64;
            let sgn = if m % 2 == 0 { 1.0 } else { -1.0 };
            let got = apply(&sample(g, |s| (mf * s).cos()));
            worst = worst.max(max_diff(&got, &sample(g, |s| -sgn * mf * (mf * s).cos())));
            let got = apply(&sample(g, |s| (mf * s).sin()));
            worst = worst.max(max_diff(&got, &sample(g, |s| sgn * mf * (mf * s).sin())));
        }
    }
    worst
}

fn kress_identity() -> f64 {
    let n = 32;
    let g = Grid::new(n).expect("valid size");
    let r = kress_weights::<f64>(n);
    let mut worst = 0.0f64;
    for m in 1..n as i64 {
        for mm in [m as f64, -(m as f64)] {
            for i in 0..2 * n {
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..2 * n {
                    acc += C64::from_polar(r[g.folded_distance(i, j)], mm * g.node(j));
                }
                let want = C64::from_polar(-std::f64::consts::TAU / m as f64, mm * g.node(i));
                worst = worst.max((acc - want).norm());
            }
        }
    }
    worst
}

fn splitting() -> f64 {
    let g = Grid::new(32).expect("valid size");
    let mut worst = 0.0f64;
    for e in [1e-4, 1e-2, 0.3] {
        let shape = Ellipse::new(e).expect("valid eps");
        for k in [0.5, 2.0, 8.0] {
            for i in 0..g.len() {
                for j in 0..g.len() {
                    if i == j {
                        continue;
                    }
                    let (a, b) = (g.node(i), g.node(j));
                    let lg = (4.0 * ((a - b) / 2.0).sin().powi(2)).ln();
                    let lhs = kress_k2(a, b, &shape, k) + kress_k1(a, b, &shape, k) * lg;
                    let rhs = helmholtz_kernel(a, b, &shape, k);
                    worst = worst.max((lhs - rhs).norm() / rhs.norm().max(1.0));
                }
            }
        }
    }
    worst
}

fn kernel_integral() -> f64 {
    let n = 4096;
    let h = std::f64::consts::TAU / n as f64;
    let mut worst = 0.0f64;
    for e in [0.1, 0.3, 0.7] {
        let shape = Ellipse::new(e).expect("valid eps");
        for s0 in [0.0, 0.7, 2.0, -1.3] {
            let sum: f64 = (0..n).map(|j| laplace_kernel(s0, j as f64 * h, &shape)).sum::<f64>() * h;
            worst = worst.max((sum + 0.5).abs());
        }
    }
    worst
}

fn bases() -> Vec<Basis> {
    let mut out = Vec::new();
    for q in [0.25, 1.0, 4.0] {
        for m in 0..=6 {
            out.push(Basis::new(MathieuKind::Ce, m, q).expect("valid basis"));
            if m > 0 {
                out.push(Basis::new(MathieuKind::Se, m, q).expect("valid basis"));
            }
        }
    }
    out
}

fn angular_ode() -> f64 {
    let mut worst = 0.0f64;
    for b in bases() {
        let (a, q) = (b.characteristic_value(), b.q());
        for i in 0..64 {
            let eta = i as f64 * std::f64::consts::TAU / 64.0;
            let r = b.angular_dd(eta) + (a - 2.0 * q * (2.0 * eta).cos()) * b.angular(eta);
            worst = worst.max(r.abs() / (1.0 + a.abs() + 2.0 * q));
        }
    }
    worst
}

fn radial_ode() -> f64 {
    let h = 1e-3;
    let mut worst = 0.0f64;
    for b in bases() {
        let (a, q) = (b.characteristic_value(), b.q());
        for kind in [RadialKind::First, RadialKind::Third] {
            for xi in [0.05, 0.3, 1.0] {
                let d = |x: f64| b.radial(kind, x).expect("radial value").1;
                let dd = (-d(xi + 2.0 * h) + d(xi + h) * 8.0 - d(xi - h) * 8.0 + d(xi - 2.0 * h)) / (12.0 * h);
                let (v, dv) = b.radial(kind, xi).expect("radial value");
                let coef = a - 2.0 * q * (2.0 * xi).cosh();
                let scale = (1.0 + coef.abs()) * v.norm().max(dv.norm());
                worst = worst.max((dd - v * coef).norm() / scale);
            }
        }
    }
    worst
}

fn oracle_bc() -> f64 {
    let h = 1e-4;
    let mut worst = 0.0f64;
    for src in ["mce:3", "mse:2", "planewave:0.4"] {
        let spec: SourceSpec = src.parse().expect("valid source");
        for e in [0.01, 0.3] {
            let field = spec.incident(2.0, e, None).expect("incident field");
            for bc in [BoundaryCondition::SoundHard, BoundaryCondition::SoundSoft] {
                let oracle = Oracle::new(bc, field.clone(), e).expect("oracle");
                let xb = oracle.boundary_xi();
                let mut resid = 0.0f64;
                let mut scale = 0.0f64;
                for i in 0..48 {
                    let eta = i as f64 * std::f64::consts::TAU / 48.0;
                    let u = |x: f64| oracle.total_elliptic(x, eta);
                    let r = match bc {
                        BoundaryCondition::SoundHard => {
                            (-u(xb + 2.0 * h) + u(xb + h) * 8.0 - u(xb - h) * 8.0 + u(xb - 2.0 * h)) / (12.0 * h)
                        }
                        BoundaryCondition::SoundSoft => u(xb),
                    };
                    resid = resid.max(r.norm());
                    scale = scale.max(field.value_elliptic(xb, eta).norm());
                }
                worst = worst.max(resid / scale);
            }
        }
    }
    worst
}

fn split_round_trip() -> f64 {
    let mut worst = 0.0f64;
    for n in [2, 5, 16, 63] {
        let g = Grid::new(n).expect("valid size");
        let v: Vec<C64> = (0..2 * n).map(|i| C64::new((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos())).collect();
        let back = parity_recombine(&parity_split(&v, &g).expect("full grid"), &g).expect("half grids");
        worst = worst.max(max_diff(&back, &v));
    }
    worst
}

pub fn run_selftest(opts: &SelftestOptions) -> Report {
    let checks = vec![
        Check { name: "dct-dst-involution", residual: involutions(opts), tolerance: 1e-13 },
        Check { name: "l1-eigenrelations", residual: eigenrelations(), tolerance: 1e-11 },
        Check { name: "kress-fourier-identity", residual: kress_identity(), tolerance: 1e-10 },
        Check { name: "kernel-splitting", residual: splitting(), tolerance: 1e-12 },
        Check { name: "double-layer-integral", residual: kernel_integral(), tolerance: 1e-10 },
        Check { name: "mathieu-angular-ode", residual: angular_ode(), tolerance: 1e-8 },
        Check { name: "mathieu-radial-ode", residual: radial_ode(), tolerance: 1e-8 },
        Check { name: "oracle-boundary-condition", residual: oracle_bc(), tolerance: 1e-7 },
        Check { name: "parity-split-round-trip", residual: split_round_trip(), tolerance: 1e-14 },
    ];
    Report { checks }
}
