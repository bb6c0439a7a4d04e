//! Regenerates the bundled mask and the golden sweep outputs using the
//! brute-force classifier only.
//!
//! cargo run -p cc4 --example derive_goldens -- crates/core/fixtures

use std::path::PathBuf;

use cc4::pattern::{run_experiment_with, Engine, Sampling};
use cc4::{sample_training_points, ExperimentConfig, GridPattern, Scheme, TiePolicy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    let pattern = GridPattern::spiral();
    let mask = sample_training_points(&pattern, 58, 42)?;
    std::fs::write(dir.join("mask_seed42_n58.txt"), mask.render())?;

    for (tag, scheme) in [
        ("unary16", Scheme::Unary { width: 16 }),
        ("spread3", Scheme::spread_for(3, 16)),
    ] {
        let config = ExperimentConfig {
            pattern: pattern.clone(),
            scheme,
            radii: vec![1, 2, 3, 4],
            sampling: Sampling::Mask(mask.clone()),
            tie_policy: TiePolicy::Zero,
        };
        let result = run_experiment_with(&config, Engine::Oracle)?;
        for run in &result.runs {
            std::fs::write(
                dir.join("golden")
                    .join(format!("{tag}_r{}.txt", run.radius)),
                run.predicted.render(),
            )?;
        }
        std::fs::write(
            dir.join("golden").join(format!("{tag}_counts.csv")),
            result.to_csv(),
        )?;
        println!("{tag}:\n{}", result.table());
    }
    Ok(())
}
