use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::sync::Arc;

use proptest::prelude::*;
use qpax_core::geometry::{phi_s, psi_s};
use qpax_core::helmholtz::*;
use qpax_core::incident::{ExactPlaneWave, IncidentField, ZeroField};
use qpax_core::linalg::rel_err_inf;
use qpax_core::mathieu::{MathieuKind, RadialKind};
use qpax_core::spectral::{parity_split, Parity};
use qpax_core::{BoundaryCondition, Ellipse, Error, Field, Method, Ops, Oracle, Scattering, C64};

use BoundaryCondition::{SoundHard, SoundSoft};
use MathieuKind::{Ce, Se};

const K: f64 = 2.0;

#[derive(Clone, Copy, Debug)]
enum Src {
    Mode(MathieuKind, u32),
    Wave(f64),
}

fn field(src: Src, e: f64) -> Field {
    match src {
        Src::Mode(kind, m) => Field::mode(kind, m, K, e).unwrap(),
        Src::Wave(a) => Field::plane_wave(a, K, e, 15).unwrap(),
    }
}

fn setup(src: Src, e: f64, bc: BoundaryCondition, n: usize) -> (Scattering, Oracle) {
    let f = field(src, e);
    let oracle = Oracle::new(bc, f.clone(), e).unwrap();
    let p = Scattering::new(Ellipse::new(e).unwrap(), K, bc, Arc::new(f), n).unwrap();
    (p, oracle)
}

fn error(src: Src, e: f64, bc: BoundaryCondition, n: usize, m: Method) -> f64 {
    let (p, oracle) = setup(src, e, bc, n);
    let sol = solve(&p, m).unwrap();
    rel_err_inf(&sol.values, &oracle.boundary_samples(&p.ops.grid)).unwrap()
}

/// Least squares slope of log10(err) against log10(eps).
fn slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|p| p.1 >= 1e-13 && p.1 <= 0.5).map(|p| (p.0.log10(), p.1.log10())).collect();
    assert!(pts.len() >= 4, "{points:?}");
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn sweep_slope(src: Src, bc: BoundaryCondition, m: Method) -> f64 {
    let pts: Vec<(f64, f64)> =
        (0..=4).map(|i| 10f64.powi(-6 + i)).map(|e| (e, error(src, e, bc, 32, m))).collect();
    slope(&pts)
}

#[test]
fn pqr_matches_oracle_at_moderate_eps() {
    for bc in [SoundHard, SoundSoft] {
        for (kind, lo) in [(Ce, 0), (Se, 1)] {
            for m in lo..=4 {
                let err = error(Src::Mode(kind, m), 0.5, bc, 64, Method::Pqr);
                assert!(err <= 1e-6, "{bc:?} {kind:?}{m}: {err}");
            }
        }
    }
}

#[test]
fn pqr_and_mpqr_at_small_eps() {
    assert!(error(Src::Wave(0.0), 1e-6, SoundHard, 32, Method::Pqr) >= 0.1);
    assert!(error(Src::Mode(Se, 2), 1e-4, SoundHard, 32, Method::Mpqr) >= 0.1);
    let k = sweep_slope(Src::Mode(Ce, 3), SoundHard, Method::Mpqr);
    assert!((0.7..=1.3).contains(&k), "{k}");
}

#[test]
fn zero_incident_gives_zero() {
    let sh = Ellipse::new(0.01).unwrap();
    for bc in [SoundHard, SoundSoft] {
        let p = Scattering::new(sh, K, bc, Arc::new(ZeroField), 16).unwrap();
        for m in [Method::Pqr, Method::Mpqr, Method::Qpax] {
            let s = solve(&p, m).unwrap();
            assert!(s.values.iter().all(|v| v.norm() == 0.0), "{bc:?} {m}");
            let u = evaluate_exterior_point(&s, &p, 3.0, 1.0).unwrap();
            assert_eq!(u.norm(), 0.0);
        }
    }
}

#[test]
fn rejects_bad_problems() {
    let sh = Ellipse::new(0.1).unwrap();
    assert!(Scattering::new(sh, 0.0, SoundHard, Arc::new(ZeroField), 16).is_err());
    assert!(Scattering::new(sh, 2.0, SoundHard, Arc::new(ZeroField), 1).is_err());
    let p = Scattering::new(sh, 2.0, SoundHard, Arc::new(ZeroField), 16).unwrap();
    assert!(solve(&p, Method::Ptr).is_err());
}

#[test]
fn h1_reduces_to_l1_for_small_k() {
    let ops = Ops::new(32).unwrap();
    for (parity, l1) in [(Parity::Even, &ops.l1_even), (Parity::Odd, &ops.l1_odd)] {
        let h = assemble_h1(parity, 1e-8, &ops);
        let mut lmax = 0.0f64;
        let mut dmax = 0.0f64;
        for i in 0..l1.rows() {
            for j in 0..l1.cols() {
                lmax = lmax.max(l1[(i, j)].abs());
                dmax = dmax.max((h[(i, j)] - C64::new(l1[(i, j)], 0.0)).norm());
            }
        }
        assert!(dmax <= 1e-8 * lmax + 1e-12, "{parity:?}: {dmax}");
    }
}

#[test]
fn h1_diagonal_uses_unit_psi() {
    let ops = Ops::new(16).unwrap();
    let h = assemble_h1(Parity::Even, K, &ops);
    let g = &ops.grid;
    for i in 0..=16 {
        let s = g.node(i);
        let ln = (phi_s(s, s, K) + phi_s(s, PI - s, K)) / 2.0;
        let want = ops.l1_even[(i, i)] - ops.w_even[(i, i)] * ln / TAU;
        assert!((h[(i, i)] - C64::new(want, 0.0)).norm() < 1e-13);
    }
}

/// Continuous operator on the constant function, evaluated at `s`: the
/// first-order part through the cosine expansion of the even projection
/// of `psi_s`, the log part by a singularity-subtracted midpoint sum.
fn h1_even_on_constant(s: f64) -> C64 {
    let theta = |t: f64| t + FRAC_PI_2;
    let g = |t: f64| (psi_s(s, t, K) + psi_s(s, PI - t, K)) / 2.0;
    let n = 10_000;
    let h = TAU / n as f64;
    let mut l1 = C64::new(0.0, 0.0);
    for m in 1..60 {
        let mut a = C64::new(0.0, 0.0);
        for j in 0..n {
            let t = (j as f64 + 0.5) * h;
            a += g(t) * (m as f64 * theta(t)).cos();
        }
        a *= h / PI;
        l1 -= a * (m as f64) * (m as f64 * theta(s)).cos();
    }
    let lg = |t: f64| (phi_s(s, t, K) + phi_s(s, PI - t, K)) / 2.0;
    let g0 = lg(s);
    let mut ln = 0.0;
    for j in 0..n {
        let t = s + (j as f64 + 0.5) * h;
        ln += (4.0 * ((s - t) / 2.0).sin().powi(2)).ln() * (lg(t) - g0);
    }
    l1 - C64::new(ln * h / TAU, 0.0)
}

#[test]
fn h1_matches_continuous_operator() {
    let ops = Ops::new(32).unwrap();
    let h = assemble_h1(Parity::Even, K, &ops);
    let out = h.matvec(&vec![C64::new(1.0, 0.0); 33]);
    assert!(out.iter().any(|v| v.norm() > 1e-3));
    for i in [1, 7, 12, 20, 29] {
        let want = h1_even_on_constant(ops.grid.node(i));
        assert!((out[i] - want).norm() < 1e-6, "row {i}: {} vs {want}", out[i]);
    }
}

#[test]
fn sound_hard_qpax_slopes() {
    let k = sweep_slope(Src::Mode(Ce, 3), SoundHard, Method::Qpax);
    assert!((1.6..=2.4).contains(&k), "even {k}");
    let k = sweep_slope(Src::Mode(Se, 2), SoundHard, Method::Qpax);
    assert!((0.7..=1.3).contains(&k), "odd {k}");
    let k = sweep_slope(Src::Wave(0.0), SoundHard, Method::Qpax);
    assert!((0.7..=1.3).contains(&k), "plane wave {k}");
}

#[test]
fn incidence_angle_sweep() {
    let k = sweep_slope(Src::Wave(FRAC_PI_2), SoundHard, Method::Qpax);
    assert!((1.6..=2.4).contains(&k), "pi/2: {k}");
    let k = sweep_slope(Src::Wave(FRAC_PI_4), SoundHard, Method::Qpax);
    assert!((0.7..=1.3).contains(&k), "pi/4: {k}");
}

#[test]
fn sound_soft_qpax_slopes() {
    let even = sweep_slope(Src::Mode(Ce, 3), SoundSoft, Method::Qpax);
    let odd = sweep_slope(Src::Mode(Se, 2), SoundSoft, Method::Qpax);
    assert!((0.7..=1.3).contains(&even), "even {even}");
    assert!((1.6..=2.4).contains(&odd), "odd {odd}");
    for m in [Method::Pqr, Method::Mpqr] {
        let err = error(Src::Mode(Ce, 3), 1e-4, SoundSoft, 32, m);
        assert!(err >= 0.1, "{m}: {err}");
    }
}

#[test]
fn sound_soft_methods_agree_at_moderate_eps() {
    for e in [0.1, 0.3, 0.5] {
        let (p, _) = setup(Src::Wave(0.3), e, SoundSoft, 64);
        let a = solve(&p, Method::Pqr).unwrap().values;
        let b = solve(&p, Method::Qpax).unwrap().values;
        let err = rel_err_inf(&b, &a).unwrap();
        assert!(err < 2.0 * e, "{e}: {err}");
    }
}

#[test]
fn qpax_preserves_parity() {
    for bc in [SoundHard, SoundSoft] {
        for (kind, m) in [(Ce, 3), (Se, 2)] {
            let (p, _) = setup(Src::Mode(kind, m), 1e-3, bc, 16);
            let s = solve(&p, Method::Qpax).unwrap();
            let parts = parity_split(&s.values, &p.ops.grid).unwrap();
            let (zero, other) = if kind == Ce { (&parts.odd, &parts.even) } else { (&parts.even, &parts.odd) };
            let scale = other.iter().fold(0.0f64, |a, v| a.max(v.norm()));
            assert!(zero.iter().all(|v| v.norm() <= 1e-13 * scale), "{bc:?} {kind:?}");
        }
    }
}

#[test]
fn exact_plane_wave_matches_expansion() {
    let e = 1e-3;
    let sh = Ellipse::new(e).unwrap();
    let exact = Scattering::new(sh, K, SoundHard, Arc::new(ExactPlaneWave { k: K, alpha: 0.4 }), 32).unwrap();
    let (series, oracle) = setup(Src::Wave(0.4), e, SoundHard, 32);
    let a = solve(&exact, Method::Qpax).unwrap().values;
    let b = solve(&series, Method::Qpax).unwrap().values;
    assert!(rel_err_inf(&a, &b).unwrap() < 1e-8);
    let want = oracle.boundary_samples(&series.ops.grid);
    assert!(rel_err_inf(&a, &want).unwrap() < 10.0 * e);
}

#[test]
fn exterior_field_matches_oracle() {
    let (p, oracle) = setup(Src::Mode(Ce, 2), 0.5, SoundHard, 64);
    let s = solve(&p, Method::Pqr).unwrap();
    for (x, y) in [(2.0, 0.0), (0.3, 1.8), (-1.5, -1.5), (0.0, 3.0)] {
        let u = evaluate_exterior_point(&s, &p, x, y).unwrap();
        let w = oracle.scattered(x, y);
        assert!((u - w).norm() < 1e-6 * w.norm().max(1e-2), "({x}, {y}): {u} vs {w}");
    }
    let (p, oracle) = setup(Src::Mode(Se, 3), 0.5, SoundSoft, 64);
    let s = solve(&p, Method::Pqr).unwrap();
    for (x, y) in [(2.0, 0.5), (-0.4, -2.2)] {
        let u = evaluate_exterior_point(&s, &p, x, y).unwrap();
        let w = oracle.scattered(x, y);
        assert!((u - w).norm() < 1e-6 * w.norm().max(1e-2), "({x}, {y}): {u} vs {w}");
    }
}

#[test]
fn far_field_from_qpax() {
    let e = 1e-3;
    let (p, oracle) = setup(Src::Wave(0.0), e, SoundHard, 64);
    let s = solve(&p, Method::Qpax).unwrap();
    for a in [0.0, 1.0, 2.5, 4.0] {
        let (x, y) = (100.0 * f64::cos(a), 100.0 * f64::sin(a));
        let u = evaluate_exterior_point(&s, &p, x, y).unwrap();
        let w = oracle.scattered(x, y);
        assert!((u - w).norm() <= 5e-3 * w.norm(), "angle {a}: {u} vs {w}");
    }
}

#[test]
fn amplitude_map_spot_checks() {
    let e = 0.01;
    let (p, oracle) = setup(Src::Wave(0.0), e, SoundHard, 64);
    let s = solve(&p, Method::Qpax).unwrap();
    let inc = oracle.incident();
    let mut got = Vec::new();
    let mut want = Vec::new();
    for i in 0..10 {
        let x = -4.5 + i as f64;
        let y = 3.7 - 0.8 * i as f64;
        got.push(C64::new((evaluate_exterior_point(&s, &p, x, y).unwrap() + inc.value(x, y)).norm(), 0.0));
        want.push(C64::new(oracle.total(x, y).norm(), 0.0));
    }
    // measured against the peak amplitude of the map
    let err = rel_err_inf(&got, &want).unwrap();
    assert!(err <= 1e-2, "{err} {got:?} {want:?}");
    // with exact boundary data the trapezoid rule itself is far more accurate
    let mut exact = s.clone();
    exact.values = oracle.boundary_samples(&p.ops.grid);
    for (x, y) in [(-0.5, 0.5), (3.0, 2.0)] {
        let u = evaluate_exterior_point(&exact, &p, x, y).unwrap();
        assert!((u - oracle.scattered(x, y)).norm() < 1e-12);
    }
}

#[test]
fn refuses_inside_and_close_points() {
    let (p, _) = setup(Src::Mode(Ce, 0), 0.1, SoundHard, 32);
    let s = solve(&p, Method::Pqr).unwrap();
    assert!(matches!(evaluate_exterior_point(&s, &p, 0.0, 0.5), Err(Error::Domain(_))));
    assert!(matches!(evaluate_exterior_point(&s, &p, 0.15, 0.0), Err(Error::TooClose { .. })));
    assert!(evaluate_exterior_point(&s, &p, 1.0, 0.0).is_ok());
    let d = boundary_distance(0.0, 2.0, &p.shape).unwrap();
    assert!((d - 1.0).abs() < 1e-12);
    assert!(boundary_distance(0.05, 0.0, &p.shape).is_none());
}

#[test]
fn oracle_radial_data_is_consistent() {
    // sound-hard boundary values are the total field on the ellipse
    let (p, oracle) = setup(Src::Mode(Ce, 1), 0.2, SoundHard, 16);
    let xi = oracle.boundary_xi();
    for s in [0.3, 1.2] {
        let direct = oracle.total_elliptic(xi, FRAC_PI_2 - s);
        assert!((direct - oracle.boundary(s)).norm() < 1e-12);
    }
    let b = &oracle.incident().terms()[0].0;
    let (v, _) = b.radial(RadialKind::First, xi).unwrap();
    assert!(v.norm() > 0.0);
    assert_eq!(p.ops.n(), 16);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn solvers_are_linear(a in -2.0f64..2.0, b in -2.0f64..2.0, e in 1e-4f64..0.5) {
        let sh = Ellipse::new(e).unwrap();
        let w = ExactPlaneWave { k: K, alpha: 0.7 };
        let one = Scattering::new(sh, K, SoundHard, Arc::new(w), 12).unwrap();
        let scaled = Scaled { inner: w, c: C64::new(a, b) };
        let two = Scattering::new(sh, K, SoundHard, Arc::new(scaled), 12).unwrap();
        for m in [Method::Pqr, Method::Mpqr, Method::Qpax] {
            let x = solve(&one, m).unwrap().values;
            let y = solve(&two, m).unwrap().values;
            for (u, v) in x.iter().zip(&y) {
                prop_assert!((u * C64::new(a, b) - v).norm() <= 1e-8 * (1.0 + v.norm()));
            }
        }
    }
}

struct Scaled {
    inner: ExactPlaneWave<f64>,
    c: C64,
}

impl IncidentField<f64> for Scaled {
    fn value(&self, x: f64, y: f64) -> C64 {
        self.inner.value(x, y) * self.c
    }
    fn tag(&self) -> String {
        "scaled".into()
    }
}

