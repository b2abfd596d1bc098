//! Built-in real-analytic Kähler metrics, addressable by name.
//!
//! Specifier syntax (as accepted on the command line):
//!
//! | specifier                              | metric                                        |
//! |----------------------------------------|-----------------------------------------------|
//! | `flat:N`                               | identity on C^N                               |
//! | `fubini_study_chart:N,SCALE`           | `SCALE * ddbar log(1 + |z|^2)` on the affine chart |
//! | `perturbed_flat:N,EPS,SEED[,DEGREE]`   | `I + EPS * ddbar phi`, `phi` a seeded random real polynomial |
//! | `product:SPEC+SPEC+...`                | block-diagonal product in disjoint coordinates |

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{complex_mixed_hessian, ChartKind, HermitianJetMatrix, InitialData};
use crate::error::{Error, Result};
use crate::jet::{Basis, Jet, C64};

const FS_RADIUS: f64 = std::f64::consts::FRAC_1_SQRT_2;
const PERTURBED_RADIUS: f64 = 0.5;
const DEFAULT_PERTURBATION_DEGREE: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub enum MetricSpec {
    Flat { n: usize },
    FubiniStudyChart { n: usize, scale: f64 },
    PerturbedFlat { n: usize, epsilon: f64, seed: u64, degree: usize },
    Product(Vec<MetricSpec>),
}

impl MetricSpec {
    pub fn n(&self) -> usize {
        match self {
            MetricSpec::Flat { n }
            | MetricSpec::FubiniStudyChart { n, .. }
            | MetricSpec::PerturbedFlat { n, .. } => *n,
            MetricSpec::Product(parts) => parts.iter().map(MetricSpec::n).sum(),
        }
    }

    pub fn build(&self, degree: usize) -> Result<InitialData> {
        let (chart, h, radius) = self.jets(degree)?;
        InitialData::new(self.to_string(), chart, h, radius)
    }

    fn jets(&self, degree: usize) -> Result<(ChartKind, HermitianJetMatrix<Jet>, f64)> {
        match *self {
            MetricSpec::Flat { n } => Ok((ChartKind::Flat, identity(n, degree), 1.0)),
            MetricSpec::FubiniStudyChart { n, scale } => {
                if scale.is_nan() || scale <= 0.0 {
                    return Err(Error::InvalidInput("Fubini-Study scale must be positive".into()));
                }
                Ok((
                    ChartKind::FubiniStudy { n, scale },
                    fubini_study(n, scale, degree)?,
                    FS_RADIUS,
                ))
            }
            MetricSpec::PerturbedFlat {
                n,
                epsilon,
                seed,
                degree: pdeg,
            } => Ok((
                ChartKind::PerturbedFlat {
                    epsilon,
                    seed,
                    degree: pdeg,
                },
                perturbed_flat(n, epsilon, seed, pdeg, degree)?,
                PERTURBED_RADIUS,
            )),
            MetricSpec::Product(ref parts) => {
                let total = self.n();
                let mut blocks = Vec::new();
                let mut charts = Vec::new();
                let mut radius = f64::INFINITY;
                for p in parts {
                    let (c, h, r) = p.jets(degree)?;
                    charts.push(c);
                    blocks.push(h);
                    radius = radius.min(r);
                }
                let zero = Jet::zero(total, degree);
                let mut entries = vec![zero; total * total];
                let mut offset = 0;
                for b in &blocks {
                    for i in 0..b.n() {
                        for j in 0..b.n() {
                            entries[(offset + i) * total + offset + j] =
                                b.get(i, j).embed(total, 2 * offset)?;
                        }
                    }
                    offset += b.n();
                }
                Ok((
                    ChartKind::Product { factors: charts },
                    HermitianJetMatrix::from_entries(total, entries)?,
                    radius,
                ))
            }
        }
    }
}

impl fmt::Display for MetricSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricSpec::Flat { n } => write!(f, "flat:{n}"),
            MetricSpec::FubiniStudyChart { n, scale } => write!(f, "fubini_study_chart:{n},{scale}"),
            MetricSpec::PerturbedFlat {
                n,
                epsilon,
                seed,
                degree,
            } => write!(f, "perturbed_flat:{n},{epsilon},{seed},{degree}"),
            MetricSpec::Product(parts) => {
                let s: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "product:{}", s.join("+"))
            }
        }
    }
}

impl FromStr for MetricSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<MetricSpec> {
        let s = s.trim();
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        if name == "product" {
            let parts = rest
                .split('+')
                .filter(|p| !p.trim().is_empty())
                .map(MetricSpec::from_str)
                .collect::<Result<Vec<_>>>()?;
            if parts.is_empty() {
                return Err(Error::Parse("product needs at least one factor".into()));
            }
            return Ok(MetricSpec::Product(parts));
        }
        let args: Vec<&str> = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split(',').map(str::trim).collect()
        };
        let num = |i: usize, what: &str| -> Result<f64> {
            args.get(i)
                .ok_or_else(|| Error::Parse(format!("{name}: missing {what}")))?
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("{name}: bad {what}: {e}")))
        };
        let dim = |i: usize| -> Result<usize> {
            let v = args
                .get(i)
                .ok_or_else(|| Error::Parse(format!("{name}: missing dimension")))?
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("{name}: bad dimension: {e}")))?;
            if v == 0 || v > 4 {
                return Err(Error::InvalidInput(format!("{name}: dimension {v} not in 1..=4")));
            }
            Ok(v)
        };
        match name {
            "flat" => Ok(MetricSpec::Flat { n: dim(0)? }),
            "fubini_study_chart" => Ok(MetricSpec::FubiniStudyChart {
                n: dim(0)?,
                scale: if args.len() > 1 { num(1, "scale")? } else { 1.0 },
            }),
            "perturbed_flat" => {
                let seed = args
                    .get(2)
                    .map(|s| s.parse::<u64>())
                    .transpose()
                    .map_err(|e| Error::Parse(format!("perturbed_flat: bad seed: {e}")))?
                    .unwrap_or(0);
                let degree = args
                    .get(3)
                    .map(|s| s.parse::<usize>())
                    .transpose()
                    .map_err(|e| Error::Parse(format!("perturbed_flat: bad degree: {e}")))?
                    .unwrap_or(DEFAULT_PERTURBATION_DEGREE);
                Ok(MetricSpec::PerturbedFlat {
                    n: dim(0)?,
                    epsilon: num(1, "epsilon")?,
                    seed,
                    degree,
                })
            }
            other => Err(Error::InvalidInput(format!("unknown built-in metric '{other}'"))),
        }
    }
}

/// Builds a named built-in metric with jets of degree cap `degree`.
pub fn builtin_metric(spec: &str, degree: usize) -> Result<InitialData> {
    spec.parse::<MetricSpec>()?.build(degree)
}

/// `(name, parameter synopsis, description)` for every built-in metric.
pub fn list_builtin_metrics() -> Vec<(&'static str, &'static str, &'static str)> {
    vec![
        ("flat", "N", "Euclidean metric on C^N"),
        (
            "fubini_study_chart",
            "N[,SCALE]",
            "Fubini-Study metric SCALE*ddbar log(1+|z|^2) on the affine chart of CP^N",
        ),
        (
            "perturbed_flat",
            "N,EPS[,SEED[,DEGREE]]",
            "I + EPS*ddbar(phi) with phi a seeded random real polynomial of degree DEGREE+2",
        ),
        ("product", "SPEC+SPEC+...", "block-diagonal product metric in disjoint coordinates"),
    ]
}

fn identity(n: usize, degree: usize) -> HermitianJetMatrix<Jet> {
    HermitianJetMatrix::from_fn(n, |i, j| Jet::constant(n, degree, if i == j { 1.0 } else { 0.0 }))
}

fn fubini_study(n: usize, scale: f64, degree: usize) -> Result<HermitianJetMatrix<Jet>> {
    let z: Vec<Jet> = (0..n)
        .map(|k| &Jet::coordinate(n, degree, 2 * k) + &Jet::coordinate(n, degree, 2 * k + 1).scale(C64::i()))
        .collect();
    let zbar: Vec<Jet> = z.iter().map(Jet::conj).collect();
    let mut s = Jet::constant(n, degree, 1.0);
    for k in 0..n {
        s = &s + &(&z[k] * &zbar[k]);
    }
    let inv = s.recip()?;
    let inv2 = &inv * &inv;
    HermitianJetMatrix::try_from_fn(n, |i, j| {
        let mut e = (&(&zbar[i] * &z[j]) * &inv2).scale(-1.0);
        if i == j {
            e = &e + &inv;
        }
        Ok(e.scale(scale))
    })
}

fn perturbed_flat(
    n: usize,
    epsilon: f64,
    seed: u64,
    pdeg: usize,
    degree: usize,
) -> Result<HermitianJetMatrix<Jet>> {
    if !epsilon.is_finite() {
        return Err(Error::InvalidInput("perturbation size must be finite".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // potential phi: monomials of degree 2..=pdeg+2, coefficient scaled so
    // each monomial's second derivatives are of unit size
    let top = pdeg + 2;
    let basis = Basis::shared(2 * n, top);
    let mut terms = Vec::new();
    for d in 2..=top {
        let norm = 1.0 / (d * (d - 1)) as f64;
        for idx in basis.block(d) {
            let c: f64 = rng.random_range(-1.0..=1.0);
            terms.push((basis.exponents(idx).to_vec(), C64::new(c * norm, 0.0)));
        }
    }
    let phi = Jet::from_terms(n, degree.max(top), terms.iter().map(|(e, c)| (e.as_slice(), *c)))?;
    let hess = complex_mixed_hessian(&phi)?;
    let one = Jet::constant(n, degree, 1.0);
    HermitianJetMatrix::try_from_fn(n, |i, j| {
        // H is 4 ddbar; the perturbation is eps * ddbar phi
        let p = hess.get(i, j).with_max_degree(degree).scale(epsilon * 0.25);
        Ok(if i == j { &one + &p } else { p })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_is_identity() {
        let d = builtin_metric("flat:2", 6).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = Jet::constant(2, 6, if i == j { 1.0 } else { 0.0 });
                assert!(d.h.get(i, j).approx_eq(&want, 0.0));
            }
        }
    }

    #[test]
    fn fubini_study_n1_taylor() {
        // (1 + r^2)^{-2} = 1 - 2 r^2 + 3 r^4 - 4 r^6 + ...
        let d = builtin_metric("fubini_study_chart:1,1", 8).unwrap();
        let h = d.h.get(0, 0);
        assert!((h.coeff(&[0, 0]) - 1.0).norm() < 1e-15);
        assert!((h.coeff(&[2, 0]) + 2.0).norm() < 1e-14);
        assert!((h.coeff(&[0, 2]) + 2.0).norm() < 1e-14);
        assert!((h.coeff(&[4, 0]) - 3.0).norm() < 1e-14);
        assert!((h.coeff(&[2, 2]) - 6.0).norm() < 1e-14);
        assert!((h.coeff(&[0, 6]) + 4.0).norm() < 1e-13);
        assert!(h.coeff(&[1, 0]).norm() < 1e-15);
    }

    #[test]
    fn zero_perturbation_is_flat() {
        let p = builtin_metric("perturbed_flat:1,0,7,4", 8).unwrap();
        let f = builtin_metric("flat:1", 8).unwrap();
        assert!(p.h.get(0, 0).approx_eq(f.h.get(0, 0), 0.0));
    }

    #[test]
    fn perturbed_is_hermitian_and_seeded() {
        let a = builtin_metric("perturbed_flat:2,0.1,3", 8).unwrap();
        let b = builtin_metric("perturbed_flat:2,0.1,3", 8).unwrap();
        let c = builtin_metric("perturbed_flat:2,0.1,4", 8).unwrap();
        assert!(a.h.hermitian_defect() < 1e-15);
        assert!(a.h.get(0, 1).approx_eq(b.h.get(0, 1), 0.0));
        assert!(!a.h.get(0, 1).approx_eq(c.h.get(0, 1), 1e-6));
    }

    #[test]
    fn product_is_block_diagonal() {
        let p = builtin_metric("product:flat:1+fubini_study_chart:1,1", 6).unwrap();
        assert_eq!(p.n(), 2);
        assert!(p.h.get(0, 1).is_zero());
        assert!((p.h.get(1, 1).coeff(&[0, 0, 2, 0]) + 2.0).norm() < 1e-14);
        assert!(p.h.get(0, 0).approx_eq(&Jet::constant(2, 6, 1.0), 0.0));
    }

    #[test]
    fn spec_round_trip_and_errors() {
        for s in ["flat:3", "fubini_study_chart:2,0.5", "perturbed_flat:1,0.1,9,3", "product:flat:1+flat:2"] {
            assert_eq!(s.parse::<MetricSpec>().unwrap().to_string(), s);
        }
        assert!("sphere:2".parse::<MetricSpec>().is_err());
        assert!("flat:0".parse::<MetricSpec>().is_err());
        // a large perturbation loses positivity for some seed, with either sign
        for eps in [50.0, -50.0] {
            assert!((0..16).any(|s| builtin_metric(&format!("perturbed_flat:1,{eps},{s},2"), 6).is_err()));
        }
    }
}
