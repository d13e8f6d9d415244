use num_complex::Complex;
use rayon::prelude::*;

use super::{ChristoffelRow, ConvergenceRow, Precision, Setting, StudyConfig};
use crate::error::{Error, Result};
use crate::lemniscate::{self, boundary_point, build_basis, h_func, limit_a, mu0_kernel};
use crate::model_circle::{christoffel_limit, hp_kernel, limit_kernel, HuaPickrellParams, HP_CD_SWITCH};
use crate::opuc::{analytic_moments, kernel_cd, kernel_direct, verblunsky_from_moments, VerblunskyCoefficients};
use crate::scalar::{lift, lower, Real};
use crate::{Ext, C64};

/// Dispatches on `cfg.setting`.
pub fn run_study(cfg: &StudyConfig) -> Result<Vec<ConvergenceRow>> {
    match cfg.setting {
        Setting::Lemniscate => run_lemniscate_study(cfg),
        _ => run_circle_study(cfg),
    }
}

/// `e^{ia/n}` in precision `T`.
fn scaled_point<T: Real>(a: C64, n: usize) -> Complex<T> {
    (Complex::<T>::i() * lift::<T>(a) / T::from_count(n)).exp()
}

enum CircleEngine<T> {
    Model(HuaPickrellParams),
    Moments(VerblunskyCoefficients<T>),
}

impl<T: Real> CircleEngine<T> {
    fn build(cfg: &StudyConfig, n_max: usize) -> Result<Self> {
        match cfg.setting {
            Setting::CircleModel => Ok(Self::Model(cfg.hua_pickrell()?)),
            Setting::CirclePerturbed => {
                let moms = analytic_moments::<T>(&cfg.circle_weight()?, n_max + 1)?;
                Ok(Self::Moments(verblunsky_from_moments(&moms, n_max + 1)?))
            }
            Setting::Lemniscate => Err(Error::Config("not a circle setting".into())),
        }
    }

    fn kernel(&self, n: usize, z: Complex<T>, w: Complex<T>) -> Result<Complex<T>> {
        match self {
            Self::Model(p) => Ok(hp_kernel(n, z, w, p)?.value),
            Self::Moments(vc) => {
                let gap = (Complex::new(T::one(), T::zero()) - z * w.conj()).norm();
                if gap < T::lit(HP_CD_SWITCH) {
                    Ok(kernel_direct(vc, n, z, w)?.value)
                } else {
                    Ok(kernel_cd(vc, n, z, w)?.value)
                }
            }
        }
    }
}

fn circle_rows<T: Real>(cfg: &StudyConfig) -> Result<Vec<ConvergenceRow>> {
    let ns = cfg.n_values();
    let grid = cfg.grid();
    let p = cfg.hua_pickrell()?;
    let engine = CircleEngine::<T>::build(cfg, *ns.last().expect("validated"))?;
    let one = Complex::new(T::one(), T::zero());
    let diag: Vec<Complex<T>> = ns.par_iter().map(|&n| engine.kernel(n, one, one)).collect::<Result<_>>()?;
    let limits: Vec<C64> =
        grid.par_iter().map(|g| Ok(limit_kernel(g.a(), g.b(), &p)?.value)).collect::<Result<_>>()?;
    let tasks: Vec<(usize, usize)> = (0..ns.len()).flat_map(|i| (0..grid.len()).map(move |j| (i, j))).collect();
    tasks
        .par_iter()
        .map(|&(i, j)| {
            let (n, g) = (ns[i], &grid[j]);
            let k = engine.kernel(n, scaled_point(g.a(), n), scaled_point(g.b(), n))?;
            Ok(ConvergenceRow::new(n, g.a(), g.b(), lower(k / diag[i]), limits[j]))
        })
        .collect()
}

/// `K_n(e^{ia/n}, e^{ib/n}) / K_n(1, 1)` against the limiting kernel, over
/// `n_list × point_grid`. The model weight goes through the closed forms, a
/// perturbed weight through its moments and the Szegő recursion.
pub fn run_circle_study(cfg: &StudyConfig) -> Result<Vec<ConvergenceRow>> {
    cfg.validate()?;
    if cfg.setting == Setting::Lemniscate {
        return Err(Error::Config("run_circle_study needs a circle setting".into()));
    }
    match cfg.precision()? {
        Precision::Double => circle_rows::<f64>(cfg),
        Precision::Extended => circle_rows::<Ext>(cfg),
    }
}

/// `K_n(z0 + a/n, z0 + b/n) / K_n(z0, z0)` against `H(A(a, b))` for area
/// measure on the lemniscate.
pub fn run_lemniscate_study(cfg: &StudyConfig) -> Result<Vec<ConvergenceRow>> {
    cfg.validate()?;
    if cfg.setting != Setting::Lemniscate {
        return Err(Error::Config("run_lemniscate_study needs the lemniscate setting".into()));
    }
    let p = cfg.lemniscate()?;
    let ns = cfg.n_values();
    let grid = cfg.grid();
    let basis = build_basis(*ns.last().expect("validated"), &p, &cfg.basis)?;
    let bp = boundary_point(cfg.t, cfg.j, &p);
    let z0 = bp.z0;
    let diag: Vec<C64> = ns.iter().map(|&n| Ok(mu0_kernel(n, z0, z0, &basis)?.value)).collect::<Result<_>>()?;
    let tasks: Vec<(usize, usize)> = (0..ns.len()).flat_map(|i| (0..grid.len()).map(move |j| (i, j))).collect();
    tasks
        .par_iter()
        .map(|&(i, j)| {
            let (n, g) = (ns[i], &grid[j]);
            let nf = n as f64;
            let k = mu0_kernel(n, z0 + g.a() / nf, z0 + g.b() / nf, &basis)?.value;
            let limit = h_func(limit_a(g.a(), g.b(), &bp, &p));
            Ok(ConvergenceRow::new(n, g.a(), g.b(), k / diag[i], limit))
        })
        .collect()
}

fn circle_christoffel<T: Real>(cfg: &StudyConfig) -> Result<Vec<ChristoffelRow>> {
    let ns = cfg.n_values();
    let p = cfg.hua_pickrell()?;
    let g0 = cfg.circle_weight()?.g_at_zero();
    let engine = CircleEngine::<T>::build(cfg, *ns.last().expect("validated"))?;
    let points: Vec<C64> = cfg.christoffel_points.iter().map(|a| C64::new(a[0], a[1])).collect();
    let targets: Vec<f64> = points.iter().map(|&a| Ok(g0 * christoffel_limit(a, &p)?)).collect::<Result<_>>()?;
    let tasks: Vec<(usize, usize)> = (0..ns.len()).flat_map(|i| (0..points.len()).map(move |j| (i, j))).collect();
    tasks
        .par_iter()
        .map(|&(i, j)| {
            let (n, a) = (ns[i], points[j]);
            let z = scaled_point::<T>(a, n);
            let lambda = T::one() / engine.kernel(n, z, z)?.re;
            let scale = T::from_count(n).powf(T::lit(2.0 * cfg.gamma + 1.0));
            Ok(ChristoffelRow::new(n, a, (scale * lambda).as_f64(), targets[j]))
        })
        .collect()
}

/// Scaled Christoffel functions and their limits.
///
/// Circle: `n^{2γ+1} λ_n(e^{ia/n})` against `g(0) Γ(2γ+2) / L(a, a)`.
/// Lemniscate: `n² λ_n(z0 + a/n)` against
/// `2π μ' r^{2m} / (|z0|^{2m−2} H(A(a, a)))`, `μ'` the configured density.
pub fn run_christoffel_study(cfg: &StudyConfig) -> Result<Vec<ChristoffelRow>> {
    cfg.validate()?;
    if cfg.christoffel_points.is_empty() {
        return Err(Error::Config("christoffel_points is empty".into()));
    }
    match (cfg.setting, cfg.precision()?) {
        (Setting::Lemniscate, _) => lemniscate_christoffel(cfg),
        (_, Precision::Double) => circle_christoffel::<f64>(cfg),
        (_, Precision::Extended) => circle_christoffel::<Ext>(cfg),
    }
}

fn lemniscate_christoffel(cfg: &StudyConfig) -> Result<Vec<ChristoffelRow>> {
    let p = cfg.lemniscate()?;
    let ns = cfg.n_values();
    let basis = build_basis(*ns.last().expect("validated"), &p, &cfg.basis)?;
    let bp = boundary_point(cfg.t, cfg.j, &p);
    let rho = p.rho();
    let base = 2.0 * std::f64::consts::PI * cfg.density * rho * rho / bp.z0.norm().powi(2 * p.m as i32 - 2);
    let points: Vec<C64> = cfg.christoffel_points.iter().map(|a| C64::new(a[0], a[1])).collect();
    let tasks: Vec<(usize, usize)> = (0..ns.len()).flat_map(|i| (0..points.len()).map(move |j| (i, j))).collect();
    tasks
        .par_iter()
        .map(|&(i, j)| {
            let (n, a) = (ns[i], points[j]);
            let nf = n as f64;
            // λ for density μ' against area is μ' / K_area
            let lambda = cfg.density * lemniscate::christoffel(n, bp.z0 + a / nf, &basis)?;
            let target = base / h_func(limit_a(a, a, &bp, &p)).re;
            Ok(ChristoffelRow::new(n, a, nf * nf * lambda, target))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{default_grid, max_error_at, GridPoint};
    use crate::hyperfun::rising_factorial;
    use crate::lemniscate::{AreaResolution, BasisOptions};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn model(gamma: f64, tau: f64, ns: &[usize], grid: Vec<GridPoint>) -> StudyConfig {
        StudyConfig { gamma, tau, n_list: ns.to_vec(), point_grid: grid, ..StudyConfig::default() }
    }

    #[test]
    fn lebesgue_case_matches_geometric_sum() {
        let cfg = model(0.0, 0.0, &[7, 40], vec![GridPoint::new(c(1.0, 0.0), c(2.0, 0.0))]);
        let rows = run_circle_study(&cfg).unwrap();
        for r in &rows {
            let n = r.n as f64;
            let q = (C64::i() * (r.a - r.b.conj()) / n).exp();
            let sum: C64 = (0..=r.n).map(|k| q.powu(k as u32)).sum::<C64>() / (n + 1.0);
            assert!((r.ratio - sum).norm() < 1e-13, "{} vs {}", r.ratio, sum);
            let d = r.a - r.b.conj();
            let lim = ((C64::i() * d).exp() - 1.0) / (C64::i() * d);
            assert!((r.limit - lim).norm() < 1e-13);
        }
    }

    #[test]
    fn origin_pair_is_exactly_one() {
        let cfg = model(1.0, 0.5, &[5, 50], vec![GridPoint::new(c(0.0, 0.0), c(0.0, 0.0))]);
        for r in run_circle_study(&cfg).unwrap() {
            assert!((r.ratio - 1.0).norm() < 1e-14 && (r.limit - 1.0).norm() < 1e-13);
        }
    }

    #[test]
    fn model_error_decreases_at_the_spec_point() {
        let cfg = model(1.0, 0.5, &[200, 2000], vec![GridPoint::new(c(0.0, 1.0), c(1.0, 0.0))]);
        let rows = run_circle_study(&cfg).unwrap();
        assert!(rows[1].abs_err < rows[0].abs_err, "{rows:?}");
    }

    #[test]
    fn perturbed_path_reduces_to_model_for_unit_g() {
        // same weight through the moment engine
        let grid = vec![GridPoint::new(c(1.0, 0.0), c(0.0, -1.0)), GridPoint::new(c(2.0, 0.0), c(2.0, 0.0))];
        let m = model(1.0, 0.7, &[30, 60], grid.clone());
        let mut p = StudyConfig { setting: Setting::CirclePerturbed, g: Some(crate::opuc::SmoothFactor::One), ..m.clone() };
        p.precision_bits = Some(113);
        let (a, b) = (run_circle_study(&m).unwrap(), run_circle_study(&p).unwrap());
        for (x, y) in a.iter().zip(&b) {
            assert!((x.ratio - y.ratio).norm() < 1e-11, "{} vs {}", x.ratio, y.ratio);
        }
    }

    #[test]
    fn rows_are_ordered_and_repeatable() {
        let cfg = model(2.5, 0.7, &[10, 20, 30], default_grid());
        let a = run_circle_study(&cfg).unwrap();
        let b = run_circle_study(&cfg).unwrap();
        assert_eq!(a.len(), 3 * 64);
        assert!(a.windows(2).all(|w| w[0].n <= w[1].n));
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(crate::harness::csv_line(x), crate::harness::csv_line(y));
            assert_eq!(x.abs_err, (x.ratio - x.limit).norm());
        }
        assert!(max_error_at(&a, 30).unwrap() < max_error_at(&a, 10).unwrap());
    }

    #[test]
    fn christoffel_model_matches_telescoped_value() {
        // γ = 1, τ = 0, a = 0: n³ λ_n(1) = n³ n! / (4)_n
        let cfg = StudyConfig { gamma: 1.0, tau: 0.0, n_list: vec![10, 100], ..StudyConfig::default() };
        for r in run_christoffel_study(&cfg).unwrap() {
            let n = r.n;
            let exact = (n as f64).powi(3) / rising_factorial(4.0, n) * (1..=n).map(|k| k as f64).product::<f64>();
            assert!((r.scaled / exact - 1.0).abs() < 1e-12);
            assert!((r.target - 6.0).abs() < 1e-12);
        }
        // γ = τ = 0: n λ_n = n/(n+1)
        let cfg = StudyConfig { gamma: 0.0, tau: 0.0, n_list: vec![9], ..StudyConfig::default() };
        let r = run_christoffel_study(&cfg).unwrap()[0];
        assert!((r.scaled - 0.9).abs() < 1e-14 && (r.target - 1.0).abs() < 1e-13);
    }

    #[test]
    fn lemniscate_study_examples() {
        let cfg = StudyConfig {
            setting: Setting::Lemniscate,
            m: 2,
            n_list: vec![20, 40],
            point_grid: vec![GridPoint::new(c(0.0, 0.0), c(0.0, 0.0)), GridPoint::new(c(1.0, 0.0), c(0.0, 1.0))],
            basis: BasisOptions { oracle_degree: 40, oracle_resolution: AreaResolution { radial: 48, angular: 128 }, resolution: AreaResolution { radial: 96, angular: 256 } },
            ..StudyConfig::default()
        };
        let rows = run_lemniscate_study(&cfg).unwrap();
        assert_eq!(rows.len(), 4);
        assert!((rows[0].ratio - 1.0).norm() < 1e-14 && (rows[0].limit - 1.0).norm() < 1e-15);
        assert!(rows[3].abs_err < rows[1].abs_err);
        assert!(run_circle_study(&cfg).is_err());
    }

    #[test]
    fn disk_christoffel_trend() {
        // m = 1 is a disk of radius r about 1: n² λ_n → 2π μ' r²
        let cfg = StudyConfig {
            setting: Setting::Lemniscate,
            m: 1,
            r: Some(0.5),
            density: 2.0,
            n_list: vec![10, 40],
            basis: BasisOptions { oracle_degree: 10, oracle_resolution: AreaResolution { radial: 48, angular: 128 }, resolution: AreaResolution { radial: 96, angular: 256 } },
            ..StudyConfig::default()
        };
        let rows = run_christoffel_study(&cfg).unwrap();
        let target = 2.0 * std::f64::consts::PI * 2.0 * 0.25;
        assert!((rows[0].target - target).abs() < 1e-13);
        assert!(rows[1].rel_dev < rows[0].rel_dev && rows[1].rel_dev < 0.1);
    }
}
