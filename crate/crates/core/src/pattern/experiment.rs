//! Radius sweeps over a grid pattern.

use serde::Serialize;

use super::{encode_point, sample_training_points, score, GridPattern, Scheme, TrainingMask};
use crate::encoding::BitVector;
use crate::error::{Error, Result};
use crate::network::{CC4Network, TieBreaker, TiePolicy, TrainingSample};
use crate::oracle::oracle_classify;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleSize {
    Count(usize),
    /// Share of all cells in `(0, 1]`, rounded to the nearest count.
    Fraction(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Sampling {
    Mask(TrainingMask),
    Random { size: SampleSize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub pattern: GridPattern,
    pub scheme: Scheme,
    pub radii: Vec<u32>,
    pub sampling: Sampling,
    pub tie_policy: TiePolicy,
}

/// Which classifier scores the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    Network,
    Oracle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadiusRun {
    pub radius: u32,
    pub predicted: GridPattern,
    pub classified: usize,
    pub misclassified: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stability {
    pub radii: Vec<u32>,
    pub value: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub pattern: GridPattern,
    pub scheme: Scheme,
    pub tie_policy: TiePolicy,
    pub sample_seed: Option<u64>,
    pub mask: TrainingMask,
    /// One run per distinct radius, ascending.
    pub runs: Vec<RadiusRun>,
    /// Spread of misclassification over every radius after the smallest;
    /// `None` when fewer than two such radii were run.
    pub stability: Option<Stability>,
}

impl ExperimentConfig {
    fn validate(&self) -> Result<()> {
        self.scheme.validate()?;
        if self.radii.is_empty() {
            return Err(Error::Argument("at least one radius is required".into()));
        }
        let max = self.scheme.max_value();
        if self.pattern.rows() > max || self.pattern.cols() > max {
            return Err(Error::Range {
                value: self.pattern.rows().max(self.pattern.cols()) as i64,
                min: 1,
                max: max as i64,
            });
        }
        match &self.sampling {
            Sampling::Mask(mask) => {
                mask.check_against(&self.pattern)?;
                if mask.is_empty() {
                    return Err(Error::Argument("training mask is empty".into()));
                }
            }
            Sampling::Random { size, .. } => {
                self.sample_count(*size)?;
            }
        }
        Ok(())
    }

    fn sample_count(&self, size: SampleSize) -> Result<usize> {
        let cells = self.pattern.cell_count();
        let count = match size {
            SampleSize::Count(n) => n,
            SampleSize::Fraction(f) => {
                if !(f > 0.0 && f <= 1.0) {
                    return Err(Error::Argument(format!(
                        "sample fraction {f} outside (0, 1]"
                    )));
                }
                ((f * cells as f64).round() as usize).max(1)
            }
        };
        if count == 0 || count > cells {
            return Err(Error::Argument(format!(
                "sample size {count} outside 1..={cells}"
            )));
        }
        Ok(count)
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    run_experiment_with(config, Engine::Network)
}

/// Runs the sweep. Radii are deduplicated and run in ascending order; under
/// a seeded tie policy one tie stream is shared by the whole run, consumed
/// in ascending radius then row-major cell order.
pub fn run_experiment_with(config: &ExperimentConfig, engine: Engine) -> Result<ExperimentResult> {
    config.validate()?;
    let pattern = &config.pattern;
    let (mask, sample_seed) = match &config.sampling {
        Sampling::Mask(mask) => (mask.clone(), None),
        Sampling::Random { size, seed } => (
            sample_training_points(pattern, config.sample_count(*size)?, *seed)?,
            Some(*seed),
        ),
    };

    let cell_inputs = (0..pattern.rows())
        .flat_map(|r| (0..pattern.cols()).map(move |c| (r, c)))
        .map(|(r, c)| encode_point(r + 1, c + 1, &config.scheme))
        .collect::<Result<Vec<_>>>()?;
    let samples: Vec<TrainingSample> = mask
        .entries()
        .map(|(r, c, label)| {
            TrainingSample::new(
                cell_inputs[r * pattern.cols() + c].clone(),
                BitVector::from_lsb_bits([label]),
            )
        })
        .collect();

    let mut radii = config.radii.clone();
    radii.sort_unstable();
    radii.dedup();

    let mut ties = TieBreaker::new(config.tie_policy);
    let mut runs = Vec::with_capacity(radii.len());
    for &radius in &radii {
        let network = match engine {
            Engine::Network => Some(CC4Network::train(&samples, radius, config.tie_policy)?),
            Engine::Oracle => None,
        };
        let labels = cell_inputs
            .iter()
            .map(|input| {
                let out = match &network {
                    Some(net) => net.classify_with(input, &mut ties)?,
                    None => oracle_classify(&samples, radius, input, &mut ties)?,
                };
                Ok(out.get(0))
            })
            .collect::<Result<Vec<_>>>()?;
        let predicted = GridPattern::new(pattern.rows(), pattern.cols(), labels)?;
        let (classified, misclassified) = score(&predicted, pattern)?;
        runs.push(RadiusRun {
            radius,
            predicted,
            classified,
            misclassified,
        });
    }

    let mut result = ExperimentResult {
        pattern: pattern.clone(),
        scheme: config.scheme,
        tie_policy: config.tie_policy,
        sample_seed,
        mask,
        runs,
        stability: None,
    };
    if radii.len() >= 3 {
        let tail = &radii[1..];
        result.stability = Some(Stability {
            radii: tail.to_vec(),
            value: stability_metric(&result, tail)?,
        });
    }
    Ok(result)
}

/// Max minus min of `counts`; needs at least two values.
pub fn misclassification_spread(counts: &[usize]) -> Result<usize> {
    if counts.len() < 2 {
        return Err(Error::Argument("stability needs at least two radii".into()));
    }
    let max = counts.iter().max().unwrap();
    let min = counts.iter().min().unwrap();
    Ok(max - min)
}

/// Spread of the misclassified counts over `radii`, which must all have
/// been run.
pub fn stability_metric(result: &ExperimentResult, radii: &[u32]) -> Result<usize> {
    let mut wanted = radii.to_vec();
    wanted.sort_unstable();
    wanted.dedup();
    let counts = wanted
        .iter()
        .map(|r| {
            result
                .run(*r)
                .map(|run| run.misclassified)
                .ok_or_else(|| Error::Argument(format!("radius {r} was not part of the run")))
        })
        .collect::<Result<Vec<_>>>()?;
    misclassification_spread(&counts)
}

#[derive(Serialize)]
struct SchemeEcho {
    kind: &'static str,
    width: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
}

#[derive(Serialize)]
struct ConfigEcho {
    rows: usize,
    cols: usize,
    scheme: SchemeEcho,
    radii: Vec<u32>,
    sample_count: usize,
    sample_seed: Option<u64>,
    tie_policy: &'static str,
    tie_seed: Option<u64>,
}

#[derive(Serialize)]
struct RunEcho<'a> {
    radius: u32,
    classified: usize,
    misclassified: usize,
    map: &'a str,
}

#[derive(Serialize)]
struct Report<'a> {
    config: ConfigEcho,
    mask: String,
    runs: Vec<RunEcho<'a>>,
    stability: Option<&'a Stability>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'static str>,
}

impl ExperimentResult {
    pub fn run(&self, radius: u32) -> Option<&RadiusRun> {
        self.runs.iter().find(|r| r.radius == radius)
    }

    pub fn radii(&self) -> Vec<u32> {
        self.runs.iter().map(|r| r.radius).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("radius,classified,misclassified\n");
        for run in &self.runs {
            out.push_str(&format!(
                "{},{},{}\n",
                run.radius, run.classified, run.misclassified
            ));
        }
        out
    }

    /// Human-readable counts table.
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:>6} {:>10} {:>13}\n",
            "radius", "classified", "misclassified"
        );
        for run in &self.runs {
            out.push_str(&format!(
                "{:>6} {:>10} {:>13}\n",
                run.radius, run.classified, run.misclassified
            ));
        }
        match &self.stability {
            Some(s) => out.push_str(&format!("stability over r={:?}: {}\n", s.radii, s.value)),
            None => out.push_str("stability: not reported (needs at least three radii)\n"),
        }
        out
    }

    pub fn to_json(&self) -> String {
        let maps: Vec<String> = self.runs.iter().map(|r| r.predicted.render()).collect();
        let report = Report {
            config: ConfigEcho {
                rows: self.pattern.rows(),
                cols: self.pattern.cols(),
                scheme: SchemeEcho {
                    kind: self.scheme.name(),
                    width: self.scheme.width(),
                    k: self.scheme.spread(),
                },
                radii: self.radii(),
                sample_count: self.mask.len(),
                sample_seed: self.sample_seed,
                tie_policy: self.tie_policy.name(),
                tie_seed: self.tie_policy.seed(),
            },
            mask: self.mask.render(),
            runs: self
                .runs
                .iter()
                .zip(&maps)
                .map(|(run, map)| RunEcho {
                    radius: run.radius,
                    classified: run.classified,
                    misclassified: run.misclassified,
                    map,
                })
                .collect(),
            stability: self.stability.as_ref(),
            note: self
                .stability
                .is_none()
                .then_some("stability omitted: fewer than two radii after the smallest"),
        };
        let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
        text.push('\n');
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config(sampling: Sampling, radii: Vec<u32>) -> ExperimentConfig {
        ExperimentConfig {
            pattern: GridPattern::parse("##oo\n#ooo\noo##\n").unwrap(),
            scheme: Scheme::Unary { width: 4 },
            radii,
            sampling,
            tie_policy: TiePolicy::Zero,
        }
    }

    #[test]
    fn full_mask_recall_at_radius_zero() {
        let pattern = GridPattern::spiral();
        for scheme in [Scheme::Unary { width: 16 }, Scheme::spread_for(3, 16)] {
            let config = ExperimentConfig {
                sampling: Sampling::Mask(TrainingMask::full(&pattern)),
                pattern: pattern.clone(),
                scheme,
                radii: vec![0],
                tie_policy: TiePolicy::Zero,
            };
            let result = run_experiment(&config).unwrap();
            assert_eq!(result.runs[0].misclassified, 0);
            assert_eq!(result.runs[0].predicted, pattern);
        }
    }

    #[test]
    fn counts_conserved_and_radii_sorted() {
        let config = small_config(
            Sampling::Random {
                size: SampleSize::Fraction(0.5),
                seed: 1,
            },
            vec![3, 1, 2, 1],
        );
        let result = run_experiment(&config).unwrap();
        assert_eq!(result.radii(), vec![1, 2, 3]);
        assert_eq!(result.mask.len(), 6);
        for run in &result.runs {
            assert_eq!(run.classified + run.misclassified, 12);
        }
        let s = result.stability.as_ref().unwrap();
        assert_eq!(s.radii, vec![2, 3]);
        assert_eq!(s.value, stability_metric(&result, &[2, 3]).unwrap());
        assert!(stability_metric(&result, &[2]).is_err());
        assert!(stability_metric(&result, &[2, 7]).is_err());
    }

    #[test]
    fn oracle_engine_agrees() {
        for policy in [TiePolicy::Zero, TiePolicy::One, TiePolicy::SeededRandom(3)] {
            let mut config = small_config(
                Sampling::Random {
                    size: SampleSize::Count(5),
                    seed: 9,
                },
                vec![0, 1, 2, 3, 4],
            );
            config.tie_policy = policy;
            let net = run_experiment_with(&config, Engine::Network).unwrap();
            let oracle = run_experiment_with(&config, Engine::Oracle).unwrap();
            assert_eq!(net, oracle, "{policy}");
        }
    }

    #[test]
    fn spread_metric_values() {
        assert_eq!(misclassification_spread(&[30, 30, 24]).unwrap(), 6);
        assert_eq!(misclassification_spread(&[22, 36, 46]).unwrap(), 24);
        assert_eq!(misclassification_spread(&[5, 5]).unwrap(), 0);
        assert!(misclassification_spread(&[5]).is_err());
    }

    #[test]
    fn config_errors() {
        let bad = [
            small_config(
                Sampling::Random {
                    size: SampleSize::Count(0),
                    seed: 1,
                },
                vec![1],
            ),
            small_config(
                Sampling::Random {
                    size: SampleSize::Count(13),
                    seed: 1,
                },
                vec![1],
            ),
            small_config(
                Sampling::Random {
                    size: SampleSize::Fraction(0.0),
                    seed: 1,
                },
                vec![1],
            ),
            small_config(
                Sampling::Random {
                    size: SampleSize::Fraction(1.5),
                    seed: 1,
                },
                vec![1],
            ),
            small_config(
                Sampling::Random {
                    size: SampleSize::Count(2),
                    seed: 1,
                },
                vec![],
            ),
            small_config(Sampling::Mask(TrainingMask::new(3, 4).unwrap()), vec![1]),
            small_config(Sampling::Mask(TrainingMask::new(2, 4).unwrap()), vec![1]),
        ];
        for config in &bad {
            assert!(run_experiment(config).is_err(), "{config:?}");
        }
        let mut narrow = small_config(
            Sampling::Random {
                size: SampleSize::Count(2),
                seed: 1,
            },
            vec![1],
        );
        narrow.scheme = Scheme::Unary { width: 3 };
        assert!(matches!(run_experiment(&narrow), Err(Error::Range { .. })));
    }

    #[test]
    fn reports_agree() {
        let config = small_config(
            Sampling::Random {
                size: SampleSize::Count(4),
                seed: 2,
            },
            vec![2],
        );
        let result = run_experiment(&config).unwrap();
        assert!(result.stability.is_none());
        let json: serde_json::Value = serde_json::from_str(&result.to_json()).unwrap();
        assert!(json["stability"].is_null());
        assert!(json["note"].is_string());
        let csv = result.to_csv();
        let run = &json["runs"][0];
        assert_eq!(
            csv.lines().nth(1).unwrap(),
            format!(
                "{},{},{}",
                run["radius"], run["classified"], run["misclassified"]
            )
        );
        assert_eq!(
            run["map"].as_str().unwrap(),
            result.runs[0].predicted.render()
        );
    }
}
