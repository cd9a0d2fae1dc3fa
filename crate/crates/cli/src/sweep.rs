//! `sweep`: exact optimal-profile mass over a grid of degrees and rationality
//! levels, written as CSV.

use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, ValueEnum};
use coordlab::dynamics::{beta_bound_closed_form, gibbs_lower_bound, GibbsModel};
use coordlab::enumerate::check_enumerable;
use coordlab::graph::check_feasible;
use coordlab::{GameSpec, Graph};
use serde::Deserialize;

use crate::{CliResult, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Deserialize)]
pub struct BetaGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default = "linear")]
    pub scale: Scale,
}

fn linear() -> Scale {
    Scale::Linear
}

impl BetaGrid {
    fn validate(&self) -> CliResult {
        let ok = self.min >= 0.0
            && self.max >= self.min
            && self.max.is_finite()
            && self.count >= 1
            && (self.scale == Scale::Linear || self.min > 0.0);
        if ok {
            Ok(())
        } else {
            Err(Failure::usage(format!(
                "invalid beta grid: min={} max={} count={} ({:?} scale needs 0 <= min <= max{})",
                self.min,
                self.max,
                self.count,
                self.scale,
                if self.scale == Scale::Log {
                    ", min > 0"
                } else {
                    ""
                }
            )))
        }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.min + t * (self.max - self.min),
                    Scale::Log => (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .collect()
    }
}

/// Sweep parameters as read from a JSON file.
#[derive(Debug, Clone, Deserialize)]
pub struct SweepSpec {
    pub n: usize,
    pub theta: f64,
    pub degrees: Vec<usize>,
    pub betas: BetaGrid,
    #[serde(default)]
    pub delta: Option<f64>,
    pub output_path: PathBuf,
}

impl SweepSpec {
    fn validate(&self) -> CliResult {
        if self.degrees.is_empty() {
            return Err(Failure::usage("no degrees given"));
        }
        for &k in &self.degrees {
            check_feasible(self.n, k)?;
        }
        check_enumerable(self.n)?;
        self.betas.validate()
    }
}

#[derive(Args)]
pub struct SweepArgs {
    /// JSON sweep specification; replaces the grid flags.
    #[arg(long, conflicts_with_all = ["n", "theta", "degrees", "out"])]
    spec: Option<PathBuf>,
    #[arg(long, required_unless_present = "spec")]
    n: Option<usize>,
    #[arg(long, allow_negative_numbers = true, required_unless_present = "spec")]
    theta: Option<f64>,
    /// Comma-separated degrees.
    #[arg(long, value_delimiter = ',', required_unless_present = "spec")]
    degrees: Vec<usize>,
    #[arg(long, default_value_t = 0.0)]
    beta_min: f64,
    #[arg(long, default_value_t = 10.0)]
    beta_max: f64,
    #[arg(long, default_value_t = 101)]
    beta_count: usize,
    #[arg(long, value_enum, default_value_t = Scale::Linear)]
    beta_scale: Scale,
    /// Also report beta_min and the closed-form bound per degree for this delta.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, required_unless_present = "spec")]
    out: Option<PathBuf>,
}

impl SweepArgs {
    fn resolve(&self) -> CliResult<SweepSpec> {
        if let Some(path) = &self.spec {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            return serde_json::from_str(&text)
                .map_err(|e| Failure::usage(format!("bad sweep spec {}: {e}", path.display())));
        }
        Ok(SweepSpec {
            n: self.n.expect("required by clap"),
            theta: self.theta.expect("required by clap"),
            degrees: self.degrees.clone(),
            betas: BetaGrid {
                min: self.beta_min,
                max: self.beta_max,
                count: self.beta_count,
                scale: self.beta_scale,
            },
            delta: self.delta,
            output_path: self.out.clone().expect("required by clap"),
        })
    }
}

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn run(args: &SweepArgs) -> CliResult {
    let spec = args.resolve()?;
    spec.validate()?;
    let betas = spec.betas.points();
    let path = &spec.output_path;
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
    let io = |e: csv::Error| Failure::usage(format!("cannot write {}: {e}", path.display()));
    writer
        .write_record([
            "n",
            "k",
            "theta",
            "beta",
            "g_exact",
            "g_lower_bound",
            "expected_potential",
        ])
        .map_err(io)?;
    for &k in &spec.degrees {
        let game = GameSpec::new(Arc::new(Graph::circulant(spec.n, k)?), spec.theta)?;
        let model = GibbsModel::new(game)?;
        for &beta in &betas {
            let table = model.table(beta)?;
            writer
                .write_record([
                    spec.n.to_string(),
                    k.to_string(),
                    sci(spec.theta),
                    sci(beta),
                    sci(model.optimal_mass(beta)),
                    sci(gibbs_lower_bound(spec.n, k, spec.theta, beta)),
                    sci(table.expected_potential),
                ])
                .map_err(io)?;
        }
        if let Some(delta) = spec.delta {
            let bound = beta_bound_closed_form(spec.n, k, spec.theta, delta)?;
            let b = model.beta_min(delta)?;
            println!("k = {k}: beta_min = {b}, bound = {bound}");
        }
    }
    writer
        .flush()
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
    println!(
        "wrote {} rows to {}",
        spec.degrees.len() * betas.len(),
        path.display()
    );
    Ok(())
}
