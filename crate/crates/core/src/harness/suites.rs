use num_traits::Float;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{default_grid, DEFAULT_GAMMAS, DEFAULT_RHO, DEFAULT_TAUS};
use crate::error::{Error, Result};
use crate::hyperfun::{hyp1f1_with, SeriesOptions};
use crate::lemniscate::{
    self, boundary_point, build_basis, derform_closed, derform_sum, gram_schmidt_oracle, h_func, h_partial,
    kappa_asymptotic, mu0_kernel, AreaResolution, BasisOptions, KappaKind, LemniscateParams, QuotientBanks,
};
use crate::model_circle::{
    fbound_constant, fbound_sides, hb_margin, hp_kernel, hp_monic_coefficients, hp_verblunsky, limit_kernel,
    or_constant, or_sides, t_func, zeroo_quotient, HuaPickrellParams,
};
use crate::opuc::{
    analytic_moments, christoffel, christoffel_oracle, monic_from_moments, verblunsky_from_moments, CircleWeight,
    SmoothFactor, TrigPolynomial, VerblunskyCoefficients,
};
use crate::scalar::{cis, lift, Real};
use crate::{CExt, Ext, C64};

pub const PROPERTY_SUITES: [&str; 11] = [
    "kummer",
    "t_positive",
    "zeroo_quotient",
    "hb_margin",
    "fbound",
    "or_bound",
    "derform",
    "h_partial",
    "limit_kernel",
    "symmetry",
    "verblunsky",
];

pub const ORACLE_SUITES: [&str; 3] = ["circle_oracle", "lemniscate_oracle", "christoffel_oracle"];

/// Outcome of one property suite. `worst` is the extreme observed statistic
/// and `margin` its distance from `bound` (negative when the suite fails).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub worst: f64,
    pub bound: f64,
    pub margin: f64,
    pub checks: usize,
    pub failure: Option<String>,
}

impl SuiteReport {
    pub fn summary(&self) -> String {
        format!(
            "{} {}: worst {:.3e} (bound {:.1e}, margin {:.3e}, {} checks){}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.worst,
            self.bound,
            self.margin,
            self.checks,
            self.failure.as_deref().map(|f| format!(" -- {f}")).unwrap_or_default()
        )
    }
}

#[derive(Clone, Copy, Debug)]
enum Bound {
    AtMost(f64),
    Below(f64),
    AtLeast(f64),
    Above(f64),
}

impl Bound {
    fn holds(self, v: f64) -> bool {
        match self {
            Bound::AtMost(b) => v <= b,
            Bound::Below(b) => v < b,
            Bound::AtLeast(b) => v >= b,
            Bound::Above(b) => v > b,
        }
    }

    fn upper(self) -> bool {
        matches!(self, Bound::AtMost(_) | Bound::Below(_))
    }

    fn value(self) -> f64 {
        match self {
            Bound::AtMost(b) | Bound::Below(b) | Bound::AtLeast(b) | Bound::Above(b) => b,
        }
    }
}

struct Tracker {
    name: String,
    bound: Bound,
    worst: f64,
    checks: usize,
    failure: Option<String>,
}

impl Tracker {
    fn new(name: &str, bound: Bound) -> Self {
        let worst = if bound.upper() { f64::NEG_INFINITY } else { f64::INFINITY };
        Self { name: name.into(), bound, worst, checks: 0, failure: None }
    }

    fn record(&mut self, v: f64, ctx: impl FnOnce() -> String) {
        self.checks += 1;
        if v.is_nan() {
            self.worst = f64::NAN;
        } else if !self.worst.is_nan() {
            self.worst = if self.bound.upper() { self.worst.max(v) } else { self.worst.min(v) };
        }
        if !self.bound.holds(v) && self.failure.is_none() {
            self.failure = Some(format!("{}: {v:e}", ctx()));
        }
    }

    fn check<T>(&mut self, r: Result<T>, ctx: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks += 1;
                if self.failure.is_none() {
                    self.failure = Some(format!("{}: {e}", ctx()));
                }
                None
            }
        }
    }

    fn finish(self) -> SuiteReport {
        let b = self.bound.value();
        let margin = if self.bound.upper() { b - self.worst } else { self.worst - b };
        let passed = self.failure.is_none() && self.checks > 0 && !self.worst.is_nan();
        SuiteReport {
            name: self.name,
            passed,
            worst: self.worst,
            bound: b,
            margin,
            checks: self.checks,
            failure: self.failure,
        }
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn param_set() -> Vec<HuaPickrellParams> {
    DEFAULT_GAMMAS
        .iter()
        .flat_map(|&g| DEFAULT_TAUS.iter().map(move |&t| HuaPickrellParams::new(g, t).expect("valid defaults")))
        .collect()
}

/// Offsets with `|a| ≤ 3` used by the bound sweeps.
fn sweep_offsets() -> [C64; 10] {
    [c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(3.0, 0.0), c(-3.0, 0.0), c(0.0, 2.0), c(0.0, -2.0), c(2.0, 2.0), c(-1.5, 1.0), c(0.7, -2.5)]
}

/// Runs every suite matching `selector` (a comma-separated list of suite
/// names); `None` runs the property and oracle suites.
pub fn run_property_suites(selector: Option<&str>) -> Result<Vec<SuiteReport>> {
    let names: Vec<&str> = match selector {
        None => PROPERTY_SUITES.iter().chain(ORACLE_SUITES.iter()).copied().collect(),
        Some(s) => s.split(',').map(str::trim).filter(|s| !s.is_empty()).collect(),
    };
    for n in &names {
        if !PROPERTY_SUITES.contains(n) && !ORACLE_SUITES.contains(n) {
            return Err(Error::Config(format!("unknown suite {n:?}")));
        }
    }
    names.par_iter().map(|n| run_suite(n)).collect()
}

/// The oracle-equivalence suites.
pub fn run_oracle_checks() -> Result<Vec<SuiteReport>> {
    ORACLE_SUITES.par_iter().map(|n| run_suite(n)).collect()
}

pub fn run_suite(name: &str) -> Result<SuiteReport> {
    Ok(match name {
        "kummer" => kummer(),
        "t_positive" => t_positive(),
        "zeroo_quotient" => zeroo(),
        "hb_margin" => hb(),
        "fbound" => fbound(),
        "or_bound" => or_bound(),
        "derform" => derform(),
        "h_partial" => h_partial_suite(),
        "limit_kernel" => limit_kernel_suite(),
        "symmetry" => symmetry(),
        "verblunsky" => verblunsky(),
        "circle_oracle" => circle_oracle(),
        "lemniscate_oracle" => lemniscate_oracle(),
        "christoffel_oracle" => christoffel_cross(),
        _ => return Err(Error::Config(format!("unknown suite {name:?}"))),
    })
}

/// `₁F₁(a; b; z) = e^z ₁F₁(b − a; b; −z)`, both sides by direct summation,
/// in double and in extended precision.
fn kummer() -> SuiteReport {
    let mut t = Tracker::new("kummer", Bound::AtMost(1e-10));
    let az = [c(-2.5, 0.0), c(-0.3, 0.4), c(0.5, 0.0), c(1.0, 1.0), c(3.0, 0.0)];
    let bz = [c(0.7, 0.0), c(1.5, 0.0), c(2.5, 0.5), c(4.0, 0.0)];
    let direct64 = SeriesOptions::<f64> { kummer: false, ..SeriesOptions::default() };
    let direct128 = SeriesOptions::<Ext> { tol: Ext::lit(1e-30), kummer: false, ..SeriesOptions::default() };
    for &a in &az {
        for &b in &bz {
            for &radius in &[0.5, 2.0, 6.0] {
                for k in 0..8 {
                    let z = cis(0.3 + k as f64 * std::f64::consts::FRAC_PI_4) * radius;
                    let ctx = || format!("a={a} b={b} z={z}");
                    let lhs = hyp1f1_with(a, b, z, &direct64).map(|v| v.value);
                    let rhs = hyp1f1_with(b - a, b, -z, &direct64).map(|v| v.value * z.exp());
                    if let (Some(l), Some(r)) = (t.check(lhs, ctx), t.check(rhs, ctx)) {
                        t.record((l - r).norm() / l.norm().max(r.norm()).max(1.0), ctx);
                    }
                    let (ae, be, ze): (CExt, CExt, CExt) = (lift(a), lift(b), lift(z));
                    let lhs = hyp1f1_with(ae, be, ze, &direct128).map(|v| v.value);
                    let rhs = hyp1f1_with(be - ae, be, -ze, &direct128).map(|v| v.value * ze.exp());
                    if let (Some(l), Some(r)) = (t.check(lhs, ctx), t.check(rhs, ctx)) {
                        t.record(((l - r).norm() / l.norm().max(r.norm())).as_f64(), ctx);
                    }
                }
            }
        }
    }
    t.finish()
}

fn t_positive() -> SuiteReport {
    let mut t = Tracker::new("t_positive", Bound::Above(0.0));
    for &g in &DEFAULT_GAMMAS {
        for k in -80..=80 {
            let a = k as f64 * 0.25;
            if let Some(v) = t.check(t_func(a, g), || format!("gamma={g} a={a}")) {
                t.record(v, || format!("gamma={g} a={a}"));
            }
        }
    }
    t.finish()
}

fn zeroo() -> SuiteReport {
    let mut t = Tracker::new("zeroo_quotient", Bound::Above(0.0));
    for &g in &DEFAULT_GAMMAS {
        for k in -12..=12 {
            for &im in &[-3.0, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 3.0] {
                let a = c(k as f64 * 0.5, im);
                if let Some(v) = t.check(zeroo_quotient(a, g), || format!("gamma={g} a={a}")) {
                    t.record(v, || format!("gamma={g} a={a}"));
                }
            }
        }
    }
    t.finish()
}

fn hb() -> SuiteReport {
    let mut t = Tracker::new("hb_margin", Bound::AtLeast(-1e-10));
    for p in param_set() {
        for k in -12..=12 {
            for &im in &[0.05, 0.3, 1.0, 2.5] {
                let z = c(k as f64 * 0.5, im);
                let ctx = || format!("{} z={z}", p.tag());
                if let Some(v) = t.check(hb_margin(z, &p), ctx) {
                    t.record(v, ctx);
                }
            }
        }
    }
    t.finish()
}

/// Ratio of the two sides of the terminating-series bound; at most one.
fn fbound() -> SuiteReport {
    let mut t = Tracker::new("fbound", Bound::AtMost(1.0 + 1e-12));
    let ck = fbound_constant(3.0, 1);
    for p in param_set() {
        for &n in &[1usize, 2, 3, 5, 8, 13, 25, 50, 100, 200] {
            for &m in &[0, 1.min(n), n / 3, n / 2, n] {
                for &a in &sweep_offsets() {
                    let ctx = || format!("{} n={n} m={m} a={a}", p.tag());
                    if let Some((l, r)) = t.check(fbound_sides(a, n, m, &p, ck), ctx) {
                        t.record(l / r, ctx);
                    }
                }
            }
        }
    }
    t.finish()
}

fn or_bound() -> SuiteReport {
    let mut t = Tracker::new("or_bound", Bound::AtMost(1.0 + 1e-12));
    let ck = or_constant(3.0, 1);
    for j in 0..32 {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / 32.0;
        for &n in &[1usize, 2, 5, 10, 50, 200, 1000] {
            for &r in &[0.01, 0.5, 1.0, 2.0, 3.0] {
                for &a in &sweep_offsets() {
                    let (l, rhs) = or_sides(theta, a, n, r, ck);
                    t.record(l / rhs, || format!("theta={theta} n={n} r={r} a={a}"));
                }
            }
        }
    }
    t.finish()
}

fn derform() -> SuiteReport {
    let mut t = Tracker::new("derform", Bound::AtMost(1e-10));
    let pts = [c(0.5, 0.0), c(-0.7, 0.2), c(0.0, 1.1), cis(1.0) * 0.9, c(1.3, 0.0), c(-1.0, 0.0), c(0.95, 0.1)];
    for &z in &pts {
        for &p in &[0usize, 1, 5, 20, 60, 150] {
            let s = derform_sum(z, p);
            let scale: f64 = (0..=p).map(|k| (k as f64 + 1.0) * z.norm().powi(k as i32)).sum();
            t.record((s - derform_closed(z, p)).norm() / scale.max(s.norm()), || format!("z={z} P={p}"));
        }
    }
    t.finish()
}

/// Ratio of the errors `|h_L(z) − H(z)|` at `L = 1000` and `L = 500`;
/// first-order convergence gives about one half.
fn h_partial_suite() -> SuiteReport {
    let mut t = Tracker::new("h_partial", Bound::AtMost(0.6));
    let pts = [c(3.0, 0.0), c(-3.0, 0.0), c(0.0, 3.0), c(1.5, -2.0), c(0.5, 0.5), c(0.0, 0.0)];
    for &z in &pts {
        let e = |l: usize| (h_partial(z, l) - h_func(z)).norm();
        t.record(e(1000) / e(500), || format!("z={z}"));
    }
    t.finish()
}

/// `L(0, 0) = 1`, `L(a, b) = conj L(b, a)` and the closed form at `γ = τ = 0`.
fn limit_kernel_suite() -> SuiteReport {
    let mut t = Tracker::new("limit_kernel", Bound::AtMost(1e-10));
    let grid = default_grid();
    for p in param_set() {
        let ctx = || p.tag();
        if let Some(v) = t.check(limit_kernel(C64::new(0.0, 0.0), C64::new(0.0, 0.0), &p), ctx) {
            t.record((v.value - 1.0).norm(), ctx);
        }
        for g in &grid {
            let ctx = || format!("{} a={} b={}", p.tag(), g.a(), g.b());
            let ab = t.check(limit_kernel(g.a(), g.b(), &p), ctx);
            let ba = t.check(limit_kernel(g.b(), g.a(), &p), ctx);
            if let (Some(ab), Some(ba)) = (ab, ba) {
                t.record((ab.value - ba.value.conj()).norm() / ab.value.norm().max(1.0), ctx);
            }
        }
    }
    let p = HuaPickrellParams::new(0.0, 0.0).expect("valid");
    for g in &grid {
        let d = g.a() - g.b().conj();
        let exact = if d.norm() == 0.0 { c(1.0, 0.0) } else { ((C64::i() * d).exp() - 1.0) / (C64::i() * d) };
        let ctx = || format!("gamma=tau=0 a={} b={}", g.a(), g.b());
        if let Some(v) = t.check(limit_kernel(g.a(), g.b(), &p), ctx) {
            t.record((v.value - exact).norm(), ctx);
        }
    }
    t.finish()
}

/// Hermitian symmetry of the circle kernels; rotation, conjugation and
/// Hermitian symmetry of the lemniscate kernel.
fn symmetry() -> SuiteReport {
    let mut t = Tracker::new("symmetry", Bound::AtMost(1e-10));
    let (z, w) = (cis(0.3) * 0.95, c(0.2, -1.1));
    for p in param_set() {
        let ctx = || p.tag();
        let a = t.check(hp_kernel(50, z, w, &p), ctx);
        let b = t.check(hp_kernel(50, w, z, &p), ctx);
        if let (Some(a), Some(b)) = (a, b) {
            t.record((a.value - b.value.conj()).norm() / a.value.norm(), ctx);
        }
    }
    for m in [2usize, 3] {
        let p = LemniscateParams::from_rho(DEFAULT_RHO, m).expect("valid");
        let ctx = || format!("m={m}");
        let Some(basis) = t.check(gram_schmidt_oracle::<f64>(30, &p, AreaResolution { radial: 64, angular: 256 }), ctx)
        else {
            continue;
        };
        let omega = cis(2.0 * std::f64::consts::PI / m as f64);
        let (z, w) = (c(1.1, 0.2), c(0.9, -0.1));
        let k = |z, w| mu0_kernel(30, z, w, &basis).map(|e| e.value);
        if let (Some(a), Some(rot), Some(cj), Some(sw)) = (
            t.check(k(z, w), ctx),
            t.check(k(omega * z, omega * w), ctx),
            t.check(k(z.conj(), w.conj()), ctx),
            t.check(k(w, z), ctx),
        ) {
            let s = a.norm();
            t.record((a - rot).norm() / s, || format!("m={m} rotation"));
            t.record((a - cj.conj()).norm() / s, || format!("m={m} conjugation"));
            t.record((a - sw.conj()).norm() / s, || format!("m={m} hermitian"));
        }
    }
    t.finish()
}

/// Invariants of a set of Verblunsky coefficients as a suite report:
/// the statistic is `max |α_k|`, which must stay below one.
pub fn check_verblunsky<T: Real>(vc: &VerblunskyCoefficients<T>, name: &str) -> SuiteReport {
    let mut t = Tracker::new(name, Bound::Below(1.0));
    t.check(vc.check_invariants(), || vc.measure_tag.clone());
    for (k, a) in vc.alpha.iter().enumerate() {
        t.record(a.norm().as_f64(), || format!("{} alpha_{k}", vc.measure_tag));
    }
    t.finish()
}

fn verblunsky() -> SuiteReport {
    let mut reports = Vec::new();
    for p in param_set() {
        reports.push(check_verblunsky(&hp_verblunsky::<f64>(500, &p), "verblunsky"));
        let weight = CircleWeight::new(p.gamma, p.tau, SmoothFactor::Trig(TrigPolynomial::two_plus_cos()));
        let engine = weight
            .and_then(|w| analytic_moments::<Ext>(&w, 200))
            .and_then(|m| verblunsky_from_moments(&m, 200));
        match engine {
            Ok(vc) => reports.push(check_verblunsky(&vc, "verblunsky")),
            Err(e) => {
                let mut t = Tracker::new("verblunsky", Bound::Below(1.0));
                t.check::<()>(Err(e), || p.tag());
                reports.push(t.finish());
            }
        }
    }
    merge("verblunsky", Bound::Below(1.0), reports)
}

fn merge(name: &str, bound: Bound, reports: Vec<SuiteReport>) -> SuiteReport {
    let mut t = Tracker::new(name, bound);
    for r in reports {
        t.checks += r.checks.saturating_sub(1);
        t.record(r.worst, || r.name.clone());
        if t.failure.is_none() {
            t.failure = r.failure;
        }
    }
    t.finish()
}

/// Closed-form monic coefficients and Verblunsky coefficients of the model
/// weight against the Cholesky engine, in extended precision, `n ≤ 60`.
fn circle_oracle() -> SuiteReport {
    let mut t = Tracker::new("circle_oracle", Bound::AtMost(1e-8));
    let n_max = 60;
    for p in param_set() {
        let ctx = || p.tag();
        let Some(basis) =
            t.check(analytic_moments::<Ext>(&p.weight(), n_max).and_then(|m| monic_from_moments(&m, n_max)), ctx)
        else {
            continue;
        };
        for n in 0..=n_max {
            let closed = hp_monic_coefficients::<Ext>(n, &p);
            let engine = &basis.monic[n];
            let scale = closed.iter().map(|x| x.norm()).fold(Ext::lit(1.0), |a, b| a.max(b));
            let diff = closed.iter().zip(engine).map(|(a, b)| (*a - *b).norm()).fold(Ext::lit(0.0), |a, b| a.max(b));
            t.record((diff / scale).as_f64(), || format!("{} n={n} coefficients", p.tag()));
        }
        // α_k = −(y)_{k+1} / (1 + ȳ)_{k+1}
        let y: CExt = lift(p.y());
        let one = CExt::new(Ext::lit(1.0), Ext::lit(0.0));
        let mut ratio = one;
        for (k, a) in basis.verblunsky.alpha.iter().enumerate() {
            let kf = Ext::from_count(k);
            ratio = ratio * (y + kf) / (y.conj() + one + kf);
            t.record((*a + ratio).norm().as_f64(), || format!("{} alpha_{k}", p.tag()));
        }
    }
    t.finish()
}

/// Lemniscate basis against the brute-force Gram–Schmidt oracle for
/// `m ∈ {2, 3}`, `r^m = 0.6`, degrees up to 60: the exact polynomials
/// `z^{m−1}(z^m − 1)^k`, their leading coefficients, and the closed-form
/// remaining classes above the empirically located threshold.
fn lemniscate_oracle() -> SuiteReport {
    let mut exact = Tracker::new("lemniscate_oracle", Bound::AtMost(1e-8));
    let mut closed = Tracker::new("lemniscate_oracle", Bound::AtMost(lemniscate::QUOTIENT_TOL));
    let n_max = 60;
    for m in [2usize, 3] {
        let p = LemniscateParams::from_rho(DEFAULT_RHO, m).expect("valid");
        let ctx = || format!("m={m}");
        let Some(oracle) =
            exact.check(gram_schmidt_oracle::<f64>(n_max, &p, AreaResolution { radial: 64, angular: 256 }), ctx)
        else {
            continue;
        };
        for n in (m - 1..=n_max).step_by(m) {
            let (k, _) = p.split(n);
            let e = oracle.adapted(n).expect("in range");
            let dev = e.iter().enumerate().map(|(i, x)| (x - if i == k { 1.0 } else { 0.0 }).norm()).fold(0.0, f64::max);
            exact.record(dev, || format!("m={m} n={n} adapted"));
            // z^{m−1} (z^m − 1)^k = Σ_i C(k,i) (−1)^{k−i} z^{m−1+mi}
            let coef = oracle.monic_coefficients(n).expect("in range");
            let mut expect = vec![0.0; n + 1];
            let mut binom = 1.0;
            for i in 0..=k {
                expect[m - 1 + m * i] = binom * if (k - i) % 2 == 0 { 1.0 } else { -1.0 };
                binom = binom * (k - i) as f64 / (i + 1) as f64;
            }
            let scale = expect.iter().fold(1.0f64, |a, b| a.max(b.abs()));
            let dev = coef.iter().zip(&expect).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale;
            exact.record(dev, || format!("m={m} n={n} monomial coefficients"));
            match (oracle.kappa_sq(n), kappa_asymptotic(n, &p)) {
                (Ok(a), Ok(b)) if b.kind == KappaKind::Exact => {
                    exact.record((a / b.kappa_sq - 1.0).abs(), || format!("m={m} n={n} kappa"));
                }
                _ => exact.record(f64::NAN, || format!("m={m} n={n} kappa unavailable")),
            }
        }
        let (k_top, _) = p.split(n_max);
        let Some(banks) = closed.check(QuotientBanks::new(&p, k_top, 0), ctx) else {
            continue;
        };
        for s in 0..m - 1 {
            let mut devs = Vec::new();
            for k in 0..=k_top {
                let n = k * m + s;
                if n > n_max {
                    break;
                }
                let Some(cf) = closed.check(banks.banks[s].quotient_coefficients(k, &p), ctx) else {
                    break;
                };
                let o = oracle.adapted(n).expect("in range");
                devs.push((k, cf.iter().zip(o).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)));
            }
            let threshold = devs.iter().rposition(|&(_, d)| !(d <= lemniscate::QUOTIENT_TOL)).map_or(0, |i| i + 1);
            if threshold >= devs.len() {
                closed.record(f64::NAN, || format!("m={m} s={s}: no k matches the closed form"));
            }
            for &(k, d) in &devs[threshold.min(devs.len())..] {
                closed.record(d, || format!("m={m} s={s} k={k}"));
            }
        }
    }
    let (a, b) = (exact.finish(), closed.finish());
    let passed = a.passed && b.passed;
    SuiteReport {
        name: "lemniscate_oracle".into(),
        passed,
        worst: a.worst.max(b.worst / lemniscate::QUOTIENT_TOL * 1e-8),
        bound: 1e-8,
        margin: a.margin.min(b.margin / lemniscate::QUOTIENT_TOL * 1e-8),
        checks: a.checks + b.checks,
        failure: a.failure.or(b.failure),
    }
}

/// `λ_n` from the kernel engines against a pivoted-LU solve with the full
/// Gram matrix, relative error, `n ≤ 60`, on both settings.
fn christoffel_cross() -> SuiteReport {
    let mut t = Tracker::new("christoffel_oracle", Bound::AtMost(1e-8));
    let ns = [1usize, 5, 10, 20, 40, 60];
    let zs = [c(1.0, 0.0), cis(0.3), c(0.5, 0.2), cis(2.0) * 1.1];
    for p in param_set() {
        for g in [SmoothFactor::One, SmoothFactor::Trig(TrigPolynomial::two_plus_cos())] {
            let ctx = || format!("{} {g:?}", p.tag());
            let moms = t.check(CircleWeight::new(p.gamma, p.tau, g.clone()).and_then(|w| analytic_moments::<Ext>(&w, 60)), ctx);
            let Some(moms) = moms else { continue };
            let Some(vc) = t.check(verblunsky_from_moments(&moms, 60), ctx) else { continue };
            for &n in &ns {
                for &z in &zs {
                    let zt: CExt = lift(z);
                    let ctx = || format!("{} {g:?} n={n} z={z}", p.tag());
                    if let (Some(a), Some(b)) =
                        (t.check(christoffel(&vc, n, zt), ctx), t.check(christoffel_oracle(&moms, n, zt), ctx))
                    {
                        t.record((a / b - Ext::lit(1.0)).abs().as_f64(), ctx);
                    }
                }
            }
        }
    }
    let opts = BasisOptions::default();
    for m in [2usize, 3] {
        let p = LemniscateParams::from_rho(DEFAULT_RHO, m).expect("valid");
        let ctx = || format!("m={m}");
        let Some(basis) = t.check(build_basis(60, &p, &opts), ctx) else { continue };
        let z0 = boundary_point(0.9, 0, &p).z0;
        let pts = [z0 + c(0.01, 0.02), z0 + c(-0.05, 0.0), c(1.0, 0.1), c(1.3, 0.4)];
        for &n in &ns {
            for &z in &pts {
                let ctx = || format!("m={m} n={n} z={z}");
                let a = t.check(lemniscate::christoffel(n, z, &basis), ctx);
                let b = t.check(lemniscate::christoffel_oracle::<f64>(n, z, &p, AreaResolution { radial: 64, angular: 256 }), ctx);
                if let (Some(a), Some(b)) = (a, b) {
                    t.record((a / b - 1.0).abs(), ctx);
                }
            }
        }
    }
    t.finish()
}
