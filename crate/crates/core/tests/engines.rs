use num_complex::Complex;
use polykern::model_circle::{hp_kernel, hp_verblunsky, HuaPickrellParams};
use polykern::opuc::{
    analytic_moments, kernel_cd, kernel_direct, monic_from_moments, trig_moments, verblunsky_from_moments,
    CircleWeight, SmoothFactor, TrigPolynomial,
};
use polykern::quadrature::QuadConfig;
use polykern::{Ext, Real, C64};
use proptest::prelude::*;

#[test]
fn quadrature_and_analytic_moments_agree() {
    for &(g, t) in &[(-0.3, 0.7), (0.0, 0.0), (1.0, 0.0), (2.5, 0.7)] {
        let w = CircleWeight::new(g, t, SmoothFactor::Trig(TrigPolynomial::two_plus_cos())).unwrap();
        let quad = trig_moments(&w, 30, &QuadConfig::default()).unwrap();
        let exact = analytic_moments::<f64>(&w, 30).unwrap();
        for k in 0..=30 {
            assert!((quad.c[k] - exact.c[k]).norm() < 1e-11 * exact.c[0].norm(), "γ={g} τ={t} k={k}");
        }
    }
}

#[test]
fn tabulated_factor_reproduces_trig_factor() {
    let samples: Vec<f64> = (0..16).map(|j| 2.0 + (2.0 * std::f64::consts::PI * j as f64 / 16.0).cos()).collect();
    let tab = CircleWeight::new(0.5, 0.2, SmoothFactor::Tabulated { samples }).unwrap();
    let trig = CircleWeight::new(0.5, 0.2, SmoothFactor::Trig(TrigPolynomial::two_plus_cos())).unwrap();
    let (a, b) = (analytic_moments::<f64>(&tab, 20).unwrap(), analytic_moments::<f64>(&trig, 20).unwrap());
    for (x, y) in a.c.iter().zip(&b.c) {
        assert!((x - y).norm() < 1e-14);
    }
}

#[test]
fn three_routes_to_verblunsky_coefficients_agree() {
    let p = HuaPickrellParams::new(1.5, -0.4).unwrap();
    let moms = analytic_moments::<Ext>(&p.weight(), 80).unwrap();
    let szego = verblunsky_from_moments(&moms, 80).unwrap();
    let chol = monic_from_moments(&moms, 80).unwrap().verblunsky;
    let closed = hp_verblunsky::<Ext>(80, &p);
    for k in 0..80 {
        assert!((szego.alpha[k] - closed.alpha[k]).norm().as_f64() < 1e-28);
        assert!((chol.alpha[k] - closed.alpha[k]).norm().as_f64() < 1e-25);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_form_kernel_matches_moment_engine(
        gamma in -0.45f64..3.0, tau in -1.5f64..1.5, n in 1usize..120,
        rz in 0.5f64..1.2, tz in 0.0f64..std::f64::consts::TAU, rw in 0.5f64..1.2, tw in 0.0f64..std::f64::consts::TAU,
    ) {
        let p = HuaPickrellParams::new(gamma, tau).unwrap();
        let (z, w) = (C64::from_polar(rz, tz), C64::from_polar(rw, tw));
        let closed = hp_kernel::<f64>(n, z, w, &p).unwrap().value;
        let moms = analytic_moments::<Ext>(&p.weight(), n + 1).unwrap();
        let vc = verblunsky_from_moments(&moms, n + 1).unwrap();
        let lift = |x: C64| Complex::new(Ext::lit(x.re), Ext::lit(x.im));
        let direct = kernel_direct(&vc, n, lift(z), lift(w)).unwrap().value;
        let direct = C64::new(direct.re.as_f64(), direct.im.as_f64());
        prop_assert!((closed - direct).norm() <= 1e-8 * direct.norm().max(1.0), "{closed} vs {direct}");
        if (1.0 - z * w.conj()).norm() > 1e-3 {
            let cd = kernel_cd(&vc, n, lift(z), lift(w)).unwrap().value;
            let cd = C64::new(cd.re.as_f64(), cd.im.as_f64());
            prop_assert!((cd - direct).norm() <= 1e-9 * direct.norm().max(1.0));
        }
    }
}
