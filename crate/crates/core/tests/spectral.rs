use std::f64::consts::PI;

use longwave::spectral::*;
use longwave::Error;
use num_complex::Complex64;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn max_diff(a: &Field, b: &Field) -> f64 {
    a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn grid_examples() {
    let g = make_grid(8, 2.0 * PI, -PI).unwrap();
    assert!(close(g.spacing(), PI / 4.0, 1e-15));
    let ks = g.wavenumbers_sorted();
    let expect: Vec<f64> = (-4..4).map(|j| j as f64).collect();
    for (k, e) in ks.iter().zip(&expect) {
        assert!(close(*k, *e, 1e-14), "{k} vs {e}");
    }
    let g = make_grid(1024, 400.0, -200.0).unwrap();
    assert_eq!(g.spacing(), 0.390625);
    assert_eq!(g.spacing() * g.n() as f64, g.length());
}

#[test]
fn grid_errors() {
    let e = make_grid(12, 2.0 * PI, 0.0).unwrap_err();
    assert!(matches!(e, Error::GridSize(12)));
    assert!(e.to_string().contains("power of two"));
    assert!(make_grid(4, 1.0, 0.0).is_err());
    assert!(make_grid(16, 0.0, 0.0).is_err());
    assert!(make_grid(16, -1.0, 0.0).is_err());
}

#[test]
fn k0_on_cosine() {
    let g = make_grid(64, 2.0 * PI, 0.0).unwrap();
    for k in [1.0, 3.0, 7.0] {
        let f = Field::from_fn(g, |a| (k * a).cos());
        let out = apply(&builtin_symbol("K0").unwrap(), &f).unwrap();
        let want = Field::from_fn(g, |a| k.tanh() * (k * a).sin());
        assert!(max_diff(&out, &want) < 1e-13);
    }
}

#[test]
fn l_on_cosine_and_constant() {
    let g = make_grid(64, 2.0 * PI, 0.0).unwrap();
    let l = builtin_symbol("L").unwrap();
    let f = Field::from_fn(g, |a| (2.0 * a).cos());
    let want = Field::from_fn(g, |a| -(2.0 / 2f64.tanh()) * (2.0 * a).cos());
    assert!(max_diff(&apply(&l, &f).unwrap(), &want) < 1e-13);
    let one = apply(&l, &Field::constant(g, 1.0)).unwrap();
    assert!(one.values().iter().all(|v| close(*v, -1.0, 1e-14)));
}

#[test]
fn dinv_on_sine_and_constant() {
    let g = make_grid(32, 2.0 * PI, 0.0).unwrap();
    let dinv = builtin_symbol("Dinv").unwrap();
    let f = Field::from_fn(g, |a| (3.0 * a).sin());
    let want = Field::from_fn(g, |a| -(3.0 * a).cos() / 3.0);
    assert!(max_diff(&apply(&dinv, &f).unwrap(), &want) < 1e-14);
    let e = apply(&dinv, &Field::constant(g, 1.0)).unwrap_err();
    assert!(matches!(e, Error::ZeroModePresent(_)));
    assert!(e.to_string().contains("zero mode present"));
}

#[test]
fn builtin_values() {
    let k0 = builtin_symbol("K0").unwrap().eval(1.0);
    assert!(close(k0.re, 0.0, 0.0) && close(k0.im, -0.7615941559557649, 1e-15));
    assert_eq!(builtin_symbol("Linv").unwrap().eval(0.0), Complex64::new(-1.0, 0.0));
    assert_eq!(builtin_symbol("L").unwrap().eval(0.0), Complex64::new(-1.0, 0.0));
    let s = builtin_symbol("one_plus_K0sq").unwrap().eval(20.0);
    assert!(s.re >= 0.0 && s.re <= 1e-16);
    // independent: 1 - tanh^2 = sech^2
    let x = 0.7f64;
    let want = 1.0 / x.cosh().powi(2);
    assert!(close(builtin_symbol("one_plus_K0sq").unwrap().eval(x).re, want, 1e-15));
    let sh = builtin_symbol("shift(0.5)").unwrap().eval(2.0);
    assert!(close(sh.re, 1f64.cos(), 1e-15) && close(sh.im, 1f64.sin(), 1e-15));
    assert_eq!(builtin_symbol("D").unwrap().eval(2.0), Complex64::new(0.0, 2.0));
    assert_eq!(builtin_symbol("Dinv").unwrap().eval(0.0), Complex64::new(0.0, 0.0));
    assert!(matches!(builtin_symbol("K7"), Err(Error::UnknownOperator(_))));
}

#[test]
fn linv_is_reciprocal_of_l_near_zero() {
    let l = builtin_symbol("L").unwrap();
    let li = builtin_symbol("Linv").unwrap();
    for k in [0.0, 1e-9, 1e-5, 1e-4, 2e-4, 0.1, 1.0, 30.0] {
        let p = l.eval(k) * li.eval(k);
        assert!(close(p.re, 1.0, 1e-15) && p.im == 0.0, "k={k} {p}");
        let exact = if k == 0.0 { -1.0 } else { -k / f64::tanh(k) };
        assert!(close(l.eval(k).re, exact, 1e-14 * exact.abs()));
    }
}

#[test]
fn truncation_values() {
    let k = 0.1f64;
    let k3 = longwave_truncation(Truncated::K0eps, 3).unwrap().eval(k);
    // -i (k - k^3/3): the order-3 Maclaurin polynomial of -i tanh k
    assert!(close(k3.im, -(k - k.powi(3) / 3.0), 1e-16));
    assert!(close(k3.im, -0.09966666666666667, 1e-15));
    let k5 = longwave_truncation(Truncated::K0eps, 5).unwrap().eval(k);
    assert!(close(k5.im, -(k - k.powi(3) / 3.0 + 2.0 * k.powi(5) / 15.0), 1e-16));
    assert!(close(k5.im, -k.tanh(), 1e-8));
    let l0 = longwave_truncation(Truncated::Leps, 0).unwrap();
    for k in [0.0, 0.3, 5.0] {
        assert_eq!(l0.eval(k), Complex64::new(-1.0, 0.0));
    }
    assert_eq!(longwave_truncation(Truncated::Linveps, 2).unwrap().eval(0.0), Complex64::new(-1.0, 0.0));
    // Leps order 4: -1 + (1/3)(ik)^2 + (1/45)(ik)^4 = -1 - k^2/3 + k^4/45, Taylor of -k/tanh k
    let l4 = longwave_truncation(Truncated::Leps, 4).unwrap().eval(0.05).re;
    assert!(close(l4, -1.0 - 0.0025 / 3.0 + 0.05f64.powi(4) / 45.0, 1e-16));
    assert!(close(l4, -0.05 / 0.05f64.tanh(), 1e-10));
    // Linveps order 4: -1 - (1/3)(ik)^2 - (2/15)(ik)^4 = -1 + k^2/3 - 2k^4/15, Taylor of -tanh k/k
    let li4 = longwave_truncation(Truncated::Linveps, 4).unwrap().eval(0.05).re;
    assert!(close(li4, -(0.05f64.tanh() / 0.05), 1e-9));
}

#[test]
fn truncation_order_errors() {
    assert!(matches!(longwave_truncation(Truncated::K0eps, 2), Err(Error::TruncationOrder { .. })));
    assert!(longwave_truncation(Truncated::K0eps, 7).is_err());
    assert!(longwave_truncation(Truncated::Leps, 1).is_err());
    assert!(longwave_truncation(Truncated::Linveps, 6).is_err());
    for o in [1, 3, 5] {
        assert!(longwave_truncation(Truncated::K0eps, o).is_ok());
    }
    for o in [0, 2, 4] {
        assert!(longwave_truncation(Truncated::Leps, o).is_ok());
        assert!(longwave_truncation(Truncated::Linveps, o).is_ok());
    }
}

#[test]
fn sobolev_examples() {
    let g = make_grid(64, 2.0 * PI, 0.0).unwrap();
    assert_eq!(sobolev_norm(&Field::zeros(g), 4.0), 0.0);
    let f = Field::from_fn(g, f64::sin);
    assert!(close(sobolev_norm(&f, 0.0), PI.sqrt(), 1e-13));
    assert!(close(sobolev_norm(&f, 1.0), (2.0 * PI).sqrt(), 1e-13));
    // same mode on a finer, longer grid gives the continuum value scaled by the period
    let g2 = make_grid(256, 4.0 * PI, -PI).unwrap();
    let f2 = Field::from_fn(g2, |a| (3.0 * a).sin());
    assert!(close(sobolev_norm(&f2, 2.0), (2.0 * PI).sqrt() * 10.0, 1e-11));
    assert!(SobolevIndex::new(-1.0).is_err());
    assert!(SobolevIndex::new(f64::NAN).is_err());
}

#[test]
fn identities() {
    assert!(trig_identity_defect() <= 1e-12);
    let g = make_grid(256, 40.0, -20.0).unwrap();
    let f = Field::from_fn(g, |x| (-(x - 1.0).powi(2)).exp() + 0.3 * (-(x + 3.0).powi(2) / 2.0).exp());
    let l = builtin_symbol("L").unwrap();
    let li = builtin_symbol("Linv").unwrap();
    let back = apply(&l, &apply(&li, &f).unwrap()).unwrap();
    assert!(max_diff(&back, &f) <= 1e-12 * f.max_abs());
    let kl = apply(&builtin_symbol("K0").unwrap(), &apply(&l, &f).unwrap()).unwrap();
    let d = apply(&builtin_symbol("D").unwrap(), &f).unwrap();
    assert!(max_diff(&kl, &d) <= 1e-12 * d.max_abs());
}

#[test]
fn trig_identity_independent_lattice() {
    // independent recomputation on a shifted lattice
    let mut worst: f64 = 0.0;
    for i in 0..37 {
        for j in 0..41 {
            let l = -2.9 + 5.8 * i as f64 / 36.0;
            let k = -2.7 + 5.6 * j as f64 / 40.0;
            if (l - k).abs() < 1e-3 {
                continue;
            }
            let lhs = (l.tanh() - k.tanh()) / (l - k).tanh();
            worst = worst.max((lhs - (1.0 - k.tanh() * l.tanh())).abs());
        }
    }
    assert!(worst < 1e-12);
}

#[test]
fn workhorse_slope() {
    // f = F(eps alpha) on an alpha-grid of period 40/eps
    let k0 = builtin_symbol("K0").unwrap();
    let k5 = longwave_truncation(Truncated::K0eps, 5).unwrap();
    let eps = [0.05, 0.07, 0.1, 0.14, 0.2];
    let norms: Vec<f64> = eps
        .iter()
        .map(|&e| {
            let g = make_grid(512, 40.0 / e, -20.0 / e).unwrap();
            let f = Field::from_fn(g, |a| (-(e * a).powi(2)).exp());
            let diff = apply(&k0, &f).unwrap() - apply(&k5, &f).unwrap();
            diff.sobolev(4.0)
        })
        .collect();
    let r = longwave::residual::fit_slope(&eps, &norms).unwrap();
    assert!(r.slope >= 6.4, "slope {}", r.slope);
}

#[test]
fn non_finite_symbol_reported() {
    let g = make_grid(16, 2.0 * PI, 0.0).unwrap();
    let bad = Multiplier::new("inv_k", Parity::OddImaginary, |k| Complex64::new(0.0, 1.0 / k));
    let e = apply(&bad, &Field::from_fn(g, f64::sin)).unwrap_err();
    assert!(matches!(e, Error::NonFiniteSymbol { .. }));
}

#[test]
fn realness_of_odd_and_even_symbols() {
    let g = make_grid(128, 30.0, -15.0).unwrap();
    let f = Field::from_fn(g, |x| (-(x * x)).exp() * (1.0 + x));
    for name in ["K0", "L", "Linv", "D", "one_plus_K0sq"] {
        let z = builtin_symbol(name).unwrap().apply_complex(&f).unwrap();
        let im = z.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        assert!(im <= 1e-12, "{name}: {im}");
    }
}

#[test]
fn field_roundtrip_and_products() {
    let g = make_grid(128, 2.0 * PI, 0.0).unwrap();
    let f = Field::from_fn(g, |a| (a.sin() + 0.5 * (3.0 * a).cos()).exp());
    let back = Field::from_coefficients(g, &f.coefficients()).unwrap();
    assert!(max_diff(&back, &f) <= 1e-12 * f.max_abs());
    let a = Field::from_fn(g, f64::sin);
    let b = Field::from_fn(g, f64::cos);
    let p = &a * &b;
    let want = Field::from_fn(g, |x| 0.5 * (2.0 * x).sin());
    assert!(max_diff(&p, &want) < 1e-14);
    let d3 = Field::from_fn(g, |x| (2.0 * x).sin()).derivative(3);
    let e3 = max_diff(&d3, &Field::from_fn(g, |x| -8.0 * (2.0 * x).cos()));
    // round-off at the top modes is amplified by k_max^3
    assert!(e3 < 1e-9, "{e3}");
    // shift(c) samples f(x + c)
    let s = a.shift(0.3);
    assert!(max_diff(&s, &Field::from_fn(g, |x| (x + 0.3).sin())) < 1e-14);
    assert!(close(f.eval_at(1.234), (1.234f64.sin() + 0.5 * (3.0 * 1.234f64).cos()).exp(), 1e-12));
    assert!(matches!(Field::from_values(g, vec![0.0; 3]), Err(Error::SampleCount { .. })));
}

#[test]
fn csv_and_binary_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let g = make_grid(64, 12.5, -3.0).unwrap();
    let f = Field::from_fn(g, |x| (-(x * x)).exp() / 3.0);
    let p = dir.path().join("f.csv");
    io::write_csv(&f, &p).unwrap();
    let text = std::fs::read_to_string(&p).unwrap();
    assert!(text.starts_with("coordinate,value\n"));
    let back = io::read_csv(&p).unwrap();
    assert_eq!(back, f);
    let p = dir.path().join("f.bin");
    io::write_binary(&f, &p).unwrap();
    let bytes = std::fs::read(&p).unwrap();
    assert_eq!(bytes.len(), 24 + 8 * 64);
    assert_eq!(u64::from_le_bytes(bytes[0..8].try_into().unwrap()), 64);
    assert_eq!(f64::from_le_bytes(bytes[8..16].try_into().unwrap()), 12.5);
    assert_eq!(f64::from_le_bytes(bytes[16..24].try_into().unwrap()), -3.0);
    assert_eq!(io::read_binary(&p).unwrap(), f);
    assert!(io::from_bytes(&bytes[..30]).is_err());
}
