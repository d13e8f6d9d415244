//! Experiment driver: study configuration, convergence and Christoffel
//! studies for both settings, the property-suite runner and CSV output.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lemniscate::{BasisOptions, LemniscateParams};
use crate::model_circle::HuaPickrellParams;
use crate::opuc::{CircleWeight, SmoothFactor, TrigPolynomial};
use crate::C64;

mod study;
mod suites;

pub use study::{run_christoffel_study, run_circle_study, run_lemniscate_study, run_study};
pub use suites::{
    check_verblunsky, run_oracle_checks, run_property_suites, run_suite, SuiteReport, ORACLE_SUITES,
    PROPERTY_SUITES,
};

/// `γ` values of the default circle parameter set.
pub const DEFAULT_GAMMAS: [f64; 4] = [-0.3, 0.0, 1.0, 2.5];
/// `τ` values of the default circle parameter set.
pub const DEFAULT_TAUS: [f64; 2] = [0.0, 0.7];
/// `r^m` of the default lemniscate.
pub const DEFAULT_RHO: f64 = 0.6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Setting {
    #[default]
    CircleModel,
    CirclePerturbed,
    Lemniscate,
}

/// Working precision selected from `precision_bits`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Double,
    Extended,
}

impl Precision {
    pub fn from_bits(bits: u32) -> Result<Self> {
        match bits {
            1..=53 => Ok(Precision::Double),
            54..=113 => Ok(Precision::Extended),
            _ => Err(Error::Config(format!("precision_bits = {bits} is not supported (at most 113)"))),
        }
    }

    pub fn bits(self) -> u32 {
        match self {
            Precision::Double => 53,
            Precision::Extended => 113,
        }
    }
}

/// One `(a, b)` pair of the scaling grid, stored as `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub a: [f64; 2],
    pub b: [f64; 2],
}

impl GridPoint {
    pub fn new(a: C64, b: C64) -> Self {
        Self { a: [a.re, a.im], b: [b.re, b.im] }
    }

    pub fn a(&self) -> C64 {
        C64::new(self.a[0], self.a[1])
    }

    pub fn b(&self) -> C64 {
        C64::new(self.b[0], self.b[1])
    }
}

/// `{0, ±1, ±2, i, −i, 1+i}²`, row-major in `a`.
pub fn default_grid() -> Vec<GridPoint> {
    let pts = [
        C64::new(0.0, 0.0),
        C64::new(1.0, 0.0),
        C64::new(-1.0, 0.0),
        C64::new(2.0, 0.0),
        C64::new(-2.0, 0.0),
        C64::new(0.0, 1.0),
        C64::new(0.0, -1.0),
        C64::new(1.0, 1.0),
    ];
    pts.iter().flat_map(|&a| pts.iter().map(move |&b| GridPoint::new(a, b))).collect()
}

/// Study configuration, read from TOML. Every field has a default; empty
/// `n_list` and `point_grid` fall back to the per-setting defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StudyConfig {
    pub setting: Setting,
    pub gamma: f64,
    pub tau: f64,
    /// Smooth factor; unset means `1` for the model and `2 + cos θ` for the perturbed weight.
    pub g: Option<SmoothFactor>,
    /// Lemniscate radius; give either `r` or `rho = r^m`.
    pub r: Option<f64>,
    pub rho: Option<f64>,
    pub m: usize,
    /// Boundary point parameter and component.
    pub t: f64,
    pub j: usize,
    /// Constant density of the lemniscate measure against area.
    pub density: f64,
    pub n_list: Vec<usize>,
    pub point_grid: Vec<GridPoint>,
    /// Scaling offsets `a` used by the Christoffel study.
    pub christoffel_points: Vec<[f64; 2]>,
    /// Unset means 53, or 113 for the perturbed circle weight.
    pub precision_bits: Option<u32>,
    pub output_path: Option<PathBuf>,
    pub basis: BasisOptions,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            setting: Setting::CircleModel,
            gamma: 1.0,
            tau: 0.5,
            g: None,
            r: None,
            rho: None,
            m: 2,
            t: std::f64::consts::FRAC_PI_3,
            j: 0,
            density: 1.0,
            n_list: Vec::new(),
            point_grid: Vec::new(),
            christoffel_points: vec![[0.0, 0.0]],
            precision_bits: None,
            output_path: None,
            basis: BasisOptions::default(),
        }
    }
}

impl StudyConfig {
    pub fn for_setting(setting: Setting) -> Self {
        Self { setting, ..Self::default() }
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn n_values(&self) -> Vec<usize> {
        if !self.n_list.is_empty() {
            return self.n_list.clone();
        }
        match self.setting {
            Setting::CircleModel | Setting::CirclePerturbed => vec![200, 500, 1000, 2000],
            Setting::Lemniscate => [40, 80, 150].iter().map(|k| k * self.m).collect(),
        }
    }

    pub fn grid(&self) -> Vec<GridPoint> {
        if self.point_grid.is_empty() { default_grid() } else { self.point_grid.clone() }
    }

    pub fn bits(&self) -> u32 {
        self.precision_bits.unwrap_or(match self.setting {
            Setting::CirclePerturbed => 113,
            _ => 53,
        })
    }

    pub fn precision(&self) -> Result<Precision> {
        Precision::from_bits(self.bits())
    }

    pub fn smooth_factor(&self) -> SmoothFactor {
        match (&self.g, self.setting) {
            (Some(g), _) => g.clone(),
            (None, Setting::CirclePerturbed) => SmoothFactor::Trig(TrigPolynomial::two_plus_cos()),
            (None, _) => SmoothFactor::One,
        }
    }

    pub fn hua_pickrell(&self) -> Result<HuaPickrellParams> {
        HuaPickrellParams::new(self.gamma, self.tau)
    }

    pub fn circle_weight(&self) -> Result<CircleWeight> {
        CircleWeight::new(self.gamma, self.tau, self.smooth_factor())
    }

    pub fn lemniscate(&self) -> Result<LemniscateParams> {
        match (self.r, self.rho) {
            (Some(_), Some(_)) => Err(Error::Config("give either r or rho, not both".into())),
            (Some(r), None) => LemniscateParams::new(r, self.m),
            (None, rho) => LemniscateParams::from_rho(rho.unwrap_or(DEFAULT_RHO), self.m),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_values();
        if n.is_empty() || n.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(format!("n_list must be nonempty and strictly increasing, got {n:?}")));
        }
        if n[0] == 0 {
            return Err(Error::Config("n_list entries must be positive".into()));
        }
        if self.grid().iter().any(|g| g.a.iter().chain(&g.b).any(|x| !x.is_finite())) {
            return Err(Error::Config("grid points must be finite".into()));
        }
        let precision = self.precision()?;
        match self.setting {
            Setting::CircleModel => {
                if self.smooth_factor() != SmoothFactor::One {
                    return Err(Error::Config("circle_model uses g = 1; use circle_perturbed for other g".into()));
                }
                self.hua_pickrell()?;
            }
            Setting::CirclePerturbed => {
                self.hua_pickrell()?;
                self.circle_weight()?;
            }
            Setting::Lemniscate => {
                self.lemniscate()?;
                if precision != Precision::Double {
                    return Err(Error::Config("the lemniscate engine runs in double precision".into()));
                }
                if !(self.density > 0.0 && self.density.is_finite()) {
                    return Err(Error::Config(format!("density must be positive, got {}", self.density)));
                }
            }
        }
        Ok(())
    }
}

/// One row of a universality study.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub a: C64,
    pub b: C64,
    pub ratio: C64,
    pub limit: C64,
    pub abs_err: f64,
}

impl ConvergenceRow {
    pub fn new(n: usize, a: C64, b: C64, ratio: C64, limit: C64) -> Self {
        Self { n, a, b, ratio, limit, abs_err: (ratio - limit).norm() }
    }
}

/// One row of a Christoffel study: `scaled` is `n^{2γ+1} λ_n` on the circle
/// and `n² λ_n` on the lemniscate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChristoffelRow {
    pub n: usize,
    pub a: C64,
    pub scaled: f64,
    pub target: f64,
    pub rel_dev: f64,
}

impl ChristoffelRow {
    pub fn new(n: usize, a: C64, scaled: f64, target: f64) -> Self {
        Self { n, a, scaled, target, rel_dev: (scaled / target - 1.0).abs() }
    }
}

pub const CSV_HEADER: &str = "n,re_a,im_a,re_b,im_b,re_ratio,im_ratio,re_limit,im_limit,abs_err";
pub const CHRISTOFFEL_CSV_HEADER: &str = "n,re_a,im_a,scaled,target,rel_dev";

fn push_floats(line: &mut String, xs: &[f64]) {
    for x in xs {
        let _ = write!(line, ",{x:.16e}");
    }
}

pub fn csv_line(row: &ConvergenceRow) -> String {
    let mut line = row.n.to_string();
    push_floats(
        &mut line,
        &[row.a.re, row.a.im, row.b.re, row.b.im, row.ratio.re, row.ratio.im, row.limit.re, row.limit.im, row.abs_err],
    );
    line
}

pub fn christoffel_csv_line(row: &ChristoffelRow) -> String {
    let mut line = row.n.to_string();
    push_floats(&mut line, &[row.a.re, row.a.im, row.scaled, row.target, row.rel_dev]);
    line
}

pub fn write_csv<W: Write>(rows: &[ConvergenceRow], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", csv_line(r))?;
    }
    Ok(())
}

pub fn write_christoffel_csv<W: Write>(rows: &[ChristoffelRow], mut out: W) -> Result<()> {
    writeln!(out, "{CHRISTOFFEL_CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", christoffel_csv_line(r))?;
    }
    Ok(())
}

/// Parses a line written by [`csv_line`].
pub fn parse_csv_line(line: &str) -> Result<ConvergenceRow> {
    let f: Vec<&str> = line.trim().split(',').collect();
    if f.len() != 10 {
        return Err(Error::Config(format!("expected 10 CSV fields, got {}", f.len())));
    }
    let n = f[0].parse().map_err(|e| Error::Config(format!("bad n: {e}")))?;
    let x: Vec<f64> = f[1..]
        .iter()
        .map(|s| s.parse::<f64>().map_err(|e| Error::Config(format!("bad float {s}: {e}"))))
        .collect::<Result<_>>()?;
    Ok(ConvergenceRow {
        n,
        a: C64::new(x[0], x[1]),
        b: C64::new(x[2], x[3]),
        ratio: C64::new(x[4], x[5]),
        limit: C64::new(x[6], x[7]),
        abs_err: x[8],
    })
}

/// Largest `abs_err` among the rows with the given `n`.
pub fn max_error_at(rows: &[ConvergenceRow], n: usize) -> Option<f64> {
    rows.iter().filter(|r| r.n == n).map(|r| r.abs_err).reduce(f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_has_sixty_four_pairs() {
        let g = default_grid();
        assert_eq!(g.len(), 64);
        assert_eq!(g[0], GridPoint::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0)));
        assert_eq!(g[63].a(), C64::new(1.0, 1.0));
    }

    #[test]
    fn precision_mapping() {
        assert_eq!(Precision::from_bits(24).unwrap(), Precision::Double);
        assert_eq!(Precision::from_bits(53).unwrap(), Precision::Double);
        assert_eq!(Precision::from_bits(64).unwrap(), Precision::Extended);
        assert_eq!(Precision::from_bits(113).unwrap(), Precision::Extended);
        assert!(Precision::from_bits(200).is_err());
        assert!(Precision::from_bits(0).is_err());
    }

    #[test]
    fn config_round_trips_through_toml() {
        let mut cfg = StudyConfig::for_setting(Setting::CirclePerturbed);
        cfg.n_list = vec![10, 20];
        cfg.point_grid = vec![GridPoint::new(C64::new(1.0, 0.0), C64::new(0.0, 2.0))];
        let text = cfg.to_toml_string().unwrap();
        let back = StudyConfig::from_toml_str(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn config_parses_documented_keys() {
        let cfg = StudyConfig::from_toml_str(
            r#"
            setting = "circle_perturbed"
            gamma = 0.5
            tau = -0.2
            n_list = [50, 300]
            precision_bits = 113
            point_grid = [{ a = [1.0, 0.0], b = [0.0, 1.0] }]
            [g]
            kind = "trig"
            cos = [3.0, 0.5]
            sin = [0.0, 0.25]
            "#,
        )
        .unwrap();
        assert_eq!(cfg.setting, Setting::CirclePerturbed);
        assert_eq!(cfg.n_values(), vec![50, 300]);
        assert_eq!(cfg.precision().unwrap(), Precision::Extended);
        assert!((cfg.circle_weight().unwrap().g_at_zero() - 3.5).abs() < 1e-15);

        let lem = StudyConfig::from_toml_str("setting = \"lemniscate\"\nm = 3\nrho = 0.6\n").unwrap();
        assert!((lem.lemniscate().unwrap().rho() - 0.6).abs() < 1e-14);
        assert_eq!(lem.n_values(), vec![120, 240, 450]);
    }

    #[test]
    fn config_rejects_invalid_input() {
        assert!(StudyConfig::from_toml_str("n_list = [10, 10]").is_err());
        assert!(StudyConfig::from_toml_str("n_list = [20, 10]").is_err());
        assert!(StudyConfig::from_toml_str("gamma = -0.7").is_err());
        assert!(StudyConfig::from_toml_str("unknown_key = 1").is_err());
        assert!(StudyConfig::from_toml_str("setting = \"lemniscate\"\nr = 0.7\nrho = 0.5").is_err());
        assert!(StudyConfig::from_toml_str("setting = \"lemniscate\"\nprecision_bits = 113").is_err());
        assert!(StudyConfig::from_toml_str("precision_bits = 256").is_err());
        assert!(StudyConfig::from_toml_str("[g]\nkind = \"trig\"\ncos = [2.0, 1.0]").is_err());
        assert!(StudyConfig::from_toml_str("setting = \"circle_perturbed\"\n[g]\nkind = \"trig\"\ncos = [0.5, 1.0]").is_err());
    }

    #[test]
    fn csv_line_round_trips_bit_exactly() {
        let row = ConvergenceRow::new(
            17,
            C64::new(1.0, -0.0),
            C64::new(0.1, 1.0 / 3.0),
            C64::new(0.12345678901234568, -2.0e-300),
            C64::new(std::f64::consts::PI, 1e300),
        );
        let back = parse_csv_line(&csv_line(&row)).unwrap();
        assert_eq!(back.ratio, row.ratio);
        assert_eq!(back.limit, row.limit);
        assert_eq!(back.abs_err.to_bits(), row.abs_err.to_bits());
        let mut buf = Vec::new();
        write_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(text.lines().count(), 2);
    }
}
