//! Scenario files and their resolution against command-line flags.
//!
//! ```toml
//! name = "tilted"
//! seed = 7
//!
//! [metric]
//! # either a built-in specifier ...
//! # builtin = "fubini_study_chart:1,1"
//! # ... or inline entries h<i><j> over x1..xn, y1..yn (h<j><i> defaults
//! # to the conjugate of h<i><j>)
//! n = 2
//! h11 = "1 + x1*x2"
//! h12 = "(x1 + i*y2)/5"
//! h22 = "1 + y1^2"
//! radius = 0.5
//!
//! [solver]
//! c = 1.0
//! M = 8
//! D = 20
//! tol = 1e-9
//!
//! [majorant]
//! R = 0.25
//!
//! [checks]
//! system = true
//! curvature = false
//!
//! [perturb]
//! target = "v"
//! order = 2
//! epsilon = 1e-3
//!
//! [output]
//! dir = "out/tilted"
//! ```
//!
//! Flags given on the command line override file values.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{Jet, C64};
use crate::kahler::{ChartKind, HermitianJetMatrix, InitialData, MetricSpec};
use crate::solver::{Solution, SolverConfig};
use crate::verifier::DEFAULT_TOLERANCE;

use super::expr;

pub const DEFAULT_ORDER: usize = 8;
pub const DEFAULT_MAJORANT_RADIUS: f64 = 0.25;
pub const DEFAULT_INLINE_RADIUS: f64 = 0.5;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: Option<String>,
    pub seed: Option<u64>,
    pub metric: Option<MetricSection>,
    pub solver: Option<SolverSection>,
    pub majorant: Option<MajorantSection>,
    pub checks: Option<Checks>,
    pub perturb: Option<Perturbation>,
    pub output: Option<OutputSection>,
}

#[derive(Debug, Default, Deserialize)]
pub struct MetricSection {
    pub builtin: Option<String>,
    pub n: Option<usize>,
    pub radius: Option<f64>,
    #[serde(flatten)]
    pub entries: BTreeMap<String, toml::Value>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub c: Option<f64>,
    #[serde(alias = "M", alias = "order")]
    pub m: Option<usize>,
    #[serde(alias = "D", alias = "degree")]
    pub d: Option<usize>,
    #[serde(alias = "tolerance")]
    pub tol: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MajorantSection {
    #[serde(alias = "R", alias = "radius")]
    pub r: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
}

/// Which verifier checks `verify` runs. All on when none is selected.
#[derive(Clone, Copy, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct Checks {
    pub system: bool,
    pub consequence: bool,
    pub laplacian: bool,
    pub curvature: bool,
    pub smoothness: bool,
}

impl Checks {
    pub fn any(&self) -> bool {
        self.system || self.consequence || self.laplacian || self.curvature || self.smoothness
    }

    pub fn all() -> Checks {
        Checks {
            system: true,
            consequence: true,
            laplacian: true,
            curvature: true,
            smoothness: true,
        }
    }

    pub fn or(self, other: Checks) -> Checks {
        Checks {
            system: self.system || other.system,
            consequence: self.consequence || other.consequence,
            laplacian: self.laplacian || other.laplacian,
            curvature: self.curvature || other.curvature,
            smoothness: self.smoothness || other.smoothness,
        }
    }
}

/// Fault injection: adds `epsilon (1 + x1^2 + y1^2)` to one coefficient of
/// a solved series (to every diagonal entry for `g`).
#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Perturbation {
    pub target: PerturbTarget,
    pub order: usize,
    pub epsilon: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbTarget {
    V,
    G,
    WInv,
    ExpU,
}

impl std::str::FromStr for Perturbation {
    type Err = Error;

    /// `target:order:epsilon`, e.g. `v:2:1e-3`.
    fn from_str(s: &str) -> Result<Perturbation> {
        let parts: Vec<&str> = s.split(':').collect();
        let [target, order, eps] = parts[..] else {
            return Err(Error::Parse(format!("perturbation '{s}' is not target:order:epsilon")));
        };
        let target = match target {
            "v" => PerturbTarget::V,
            "g" => PerturbTarget::G,
            "w_inv" | "w" => PerturbTarget::WInv,
            "exp_u" => PerturbTarget::ExpU,
            other => return Err(Error::Parse(format!("unknown perturbation target '{other}'"))),
        };
        Ok(Perturbation {
            target,
            order: order
                .parse()
                .map_err(|e| Error::Parse(format!("bad perturbation order: {e}")))?,
            epsilon: eps
                .parse()
                .map_err(|e| Error::Parse(format!("bad perturbation epsilon: {e}")))?,
        })
    }
}

impl Perturbation {
    pub fn apply(&self, sol: &mut Solution) -> Result<()> {
        if self.order > sol.reached_order {
            return Err(Error::InvalidInput(format!(
                "perturbation order {} exceeds reached order {}",
                self.order, sol.reached_order
            )));
        }
        let bump = |target: &Jet| -> Jet {
            let mut b = target.zero_like(target.valid_degree());
            let one = C64::new(self.epsilon, 0.0);
            let mut e = vec![0u8; target.nvars()];
            b.add_to_coeff(&e, one);
            for var in [0, 1] {
                e[var] = 2;
                if target.valid_degree() >= 2 {
                    b.add_to_coeff(&e, one);
                }
                e[var] = 0;
            }
            target.try_add(&b).expect("same basis")
        };
        let k = self.order;
        match self.target {
            PerturbTarget::V => {
                let c = sol.v.coeff_mut(k);
                *c = bump(c);
            }
            PerturbTarget::WInv => {
                let c = sol.w_inv.coeff_mut(k);
                *c = bump(c);
            }
            PerturbTarget::ExpU => {
                let c = sol.exp_u.coeff_mut(k);
                *c = bump(c);
            }
            PerturbTarget::G => {
                for i in 0..sol.n() {
                    let c = sol.g.get_mut(i, i).coeff_mut(k);
                    *c = bump(c);
                }
            }
        }
        Ok(())
    }
}

/// Where the initial metric comes from.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricSource {
    Builtin { spec: String },
    Inline { n: usize, entries: BTreeMap<String, String>, radius: f64 },
}

/// Values set on the command line; `None` defers to the scenario file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub metric: Option<String>,
    pub c: Option<f64>,
    pub order: Option<usize>,
    pub degree: Option<usize>,
    pub radius: Option<f64>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub checks: Checks,
    pub perturb: Option<Perturbation>,
}

/// A fully resolved scenario, embedded verbatim in every report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scenario {
    pub name: String,
    pub metric: MetricSource,
    pub c: f64,
    #[serde(rename = "M")]
    pub order: usize,
    #[serde(rename = "D")]
    pub degree: usize,
    #[serde(rename = "R")]
    pub majorant_radius: f64,
    pub tolerance: f64,
    pub seed: u64,
    pub checks: Checks,
    pub perturb: Option<Perturbation>,
    #[serde(skip)]
    pub output_dir: Option<PathBuf>,
}

/// Default spatial degree cap: enough to keep every order fully valid.
pub fn default_degree(order: usize) -> usize {
    2 * order + 2
}

impl Scenario {
    pub fn from_file(path: &Path, ov: &Overrides) -> Result<Scenario> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        let file: ScenarioFile = toml::from_str(&text)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "scenario".into());
        Scenario::resolve(file, &stem, ov)
    }

    pub fn from_flags(ov: &Overrides) -> Result<Scenario> {
        let spec = ov
            .metric
            .clone()
            .ok_or_else(|| Error::InvalidInput("no metric given (use --metric or --metric-file)".into()))?;
        Scenario::resolve(ScenarioFile::default(), &spec, ov)
    }

    fn resolve(file: ScenarioFile, default_name: &str, ov: &Overrides) -> Result<Scenario> {
        let solver = file.solver.unwrap_or_default();
        let seed = ov.seed.or(file.seed).unwrap_or(0);
        let order = ov.order.or(solver.m).unwrap_or(DEFAULT_ORDER);
        let degree = ov.degree.or(solver.d).unwrap_or_else(|| default_degree(order));
        let metric = match &ov.metric {
            Some(spec) => MetricSource::Builtin { spec: with_seed(spec, seed) },
            None => metric_source(file.metric.unwrap_or_default(), seed)?,
        };
        let checks = ov.checks.or(file.checks.unwrap_or_default());
        let sc = Scenario {
            name: file.name.unwrap_or_else(|| default_name.to_string()),
            metric,
            c: ov.c.or(solver.c).unwrap_or(1.0),
            order,
            degree,
            majorant_radius: ov
                .radius
                .or(file.majorant.and_then(|m| m.r))
                .unwrap_or(DEFAULT_MAJORANT_RADIUS),
            tolerance: ov.tol.or(solver.tol).unwrap_or(DEFAULT_TOLERANCE),
            seed,
            checks: if checks.any() { checks } else { Checks::all() },
            perturb: ov.perturb.clone().or(file.perturb),
            output_dir: file.output.and_then(|o| o.dir),
        };
        sc.validate()?;
        Ok(sc)
    }

    fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::InvalidInput("M must be positive".into()));
        }
        if self.degree < 2 {
            return Err(Error::InvalidInput("D must be at least 2".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidInput("tolerance must be positive".into()));
        }
        if !self.c.is_finite() {
            return Err(Error::InvalidInput("c must be finite".into()));
        }
        Ok(())
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            tolerance: self.tolerance,
            ..SolverConfig::new(self.c, self.order, self.degree)
        }
    }

    pub fn initial_data(&self) -> Result<InitialData> {
        match &self.metric {
            MetricSource::Builtin { spec } => spec.parse::<MetricSpec>()?.build(self.degree),
            MetricSource::Inline { n, entries, radius } => {
                inline_metric(&self.name, *n, entries, *radius, self.degree)
            }
        }
    }
}

/// Supplies the scenario seed to a `perturbed_flat` specifier that omits it.
fn with_seed(spec: &str, seed: u64) -> String {
    let spec = spec.trim();
    match spec.strip_prefix("perturbed_flat:") {
        Some(args) if args.split(',').count() == 2 => format!("{spec},{seed}"),
        _ => spec.to_string(),
    }
}

fn metric_source(m: MetricSection, seed: u64) -> Result<MetricSource> {
    if let Some(spec) = m.builtin {
        if m.n.is_some() || !m.entries.is_empty() {
            return Err(Error::InvalidInput(
                "[metric] takes either builtin or inline entries, not both".into(),
            ));
        }
        return Ok(MetricSource::Builtin { spec: with_seed(&spec, seed) });
    }
    let n = m
        .n
        .ok_or_else(|| Error::InvalidInput("[metric] needs builtin or n with entries".into()))?;
    if n == 0 || n > 4 {
        return Err(Error::InvalidInput(format!("complex dimension {n} not in 1..=4")));
    }
    let mut entries = BTreeMap::new();
    for (key, value) in m.entries {
        let idx = key
            .strip_prefix('h')
            .filter(|s| s.len() == 2 && s.chars().all(|c| c.is_ascii_digit()))
            .map(|s| {
                let b = s.as_bytes();
                ((b[0] - b'0') as usize, (b[1] - b'0') as usize)
            });
        match idx {
            Some((i, j)) if (1..=n).contains(&i) && (1..=n).contains(&j) => {}
            _ => return Err(Error::InvalidInput(format!("unknown [metric] key '{key}'"))),
        }
        let text = match value {
            toml::Value::String(s) => s,
            toml::Value::Integer(v) => v.to_string(),
            toml::Value::Float(v) => v.to_string(),
            other => return Err(Error::InvalidInput(format!("{key}: expected expression, got {other}"))),
        };
        entries.insert(key, text);
    }
    for i in 1..=n {
        for j in i..=n {
            if !entries.contains_key(&format!("h{i}{j}")) && !entries.contains_key(&format!("h{j}{i}")) {
                if i == j {
                    return Err(Error::InvalidInput(format!("missing diagonal entry h{i}{i}")));
                }
                entries.insert(format!("h{i}{j}"), "0".into());
            }
        }
    }
    Ok(MetricSource::Inline {
        n,
        entries,
        radius: m.radius.unwrap_or(DEFAULT_INLINE_RADIUS),
    })
}

fn inline_metric(
    name: &str,
    n: usize,
    entries: &BTreeMap<String, String>,
    radius: f64,
    degree: usize,
) -> Result<InitialData> {
    let jet = |key: &str| -> Result<Option<Jet>> {
        entries
            .get(key)
            .map(|src| {
                expr::parse(src)
                    .and_then(|e| e.to_jet(n, degree))
                    .map_err(|e| Error::InvalidInput(format!("{key}: {e}")))
            })
            .transpose()
    };
    let h = HermitianJetMatrix::try_from_fn(n, |i, j| {
        let (a, b) = (i + 1, j + 1);
        if let Some(x) = jet(&format!("h{a}{b}"))? {
            return Ok(x);
        }
        // only the transposed entry was given
        Ok(jet(&format!("h{b}{a}"))?.expect("entry presence checked").conj())
    })?;
    InitialData::new(name, ChartKind::Inline, h, radius)
}
