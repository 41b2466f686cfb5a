//! TOML configuration.
//!
//! Every table mirrors the flags of the matching subcommands; a flag given on
//! the command line wins over the file. Scalars and lists are interchangeable
//! where a command takes a list.
//!
//! ```toml
//! [output]
//! format = "csv"        # csv | json
//! plot = "svg"          # none | svg
//! out_dir = "results"
//! threads = 4
//!
//! [two_charge]          # two solve / sweep / boundary
//! eps = [1e-2, 5e-3]
//! gamma = 100.0
//! profile = 400
//!
//! [charges]             # charges optimize / converge
//! n = [25, 50, 100]
//! eps = 1e-3
//! R = 1.0
//! seed = 7
//! restarts = 8
//! tol = 1e-9
//! shell_delta = 1e-9
//!
//! [regime]              # regime map
//! eps = [1e-4, 1e-3]
//! gamma = [300.0, 1000.0]
//! n = [2, 10, 100]
//! c_threshold = 100.53096491487338
//! gamma0 = 201.06192982974676
//! delta0 = 1e-2
//!
//! [nondim]
//! r0 = 1.0
//! rsigma = 1.0
//! rb = 5.0
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::args::{Format, PlotMode};
use crate::CliError;

/// A scalar or a list in the config file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub two_charge: TwoChargeSection,
    #[serde(default)]
    pub charges: ChargesSection,
    #[serde(default)]
    pub regime: RegimeSection,
    #[serde(default)]
    pub nondim: NondimSection,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub format: Option<Format>,
    pub plot: Option<PlotMode>,
    pub out_dir: Option<PathBuf>,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoChargeSection {
    pub eps: Option<OneOrMany<f64>>,
    pub gamma: Option<OneOrMany<f64>>,
    pub profile: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChargesSection {
    pub n: Option<OneOrMany<usize>>,
    pub eps: Option<f64>,
    #[serde(rename = "R")]
    pub radius: Option<f64>,
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub tol: Option<f64>,
    pub shell_delta: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegimeSection {
    pub eps: Option<OneOrMany<f64>>,
    pub gamma: Option<OneOrMany<f64>>,
    pub n: Option<OneOrMany<usize>>,
    pub c_threshold: Option<f64>,
    pub gamma0: Option<f64>,
    pub delta0: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NondimSection {
    pub r0: Option<f64>,
    pub rsigma: Option<f64>,
    pub rb: Option<f64>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("bad config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_example_parses() {
        let doc = include_str!("config.rs");
        let start = doc.find("//! ```toml").unwrap();
        let body: String = doc[start..]
            .lines()
            .skip(1)
            .take_while(|l| !l.starts_with("//! ```"))
            .map(|l| l.trim_start_matches("//!").trim_start_matches(' '))
            .collect::<Vec<_>>()
            .join("\n");
        let cfg = RunConfig::parse(&body).unwrap();
        assert_eq!(cfg.output.format, Some(Format::Csv));
        assert_eq!(cfg.charges.n.unwrap().to_vec(), vec![25, 50, 100]);
        assert_eq!(cfg.two_charge.gamma, Some(OneOrMany::One(100.0)));
        assert_eq!(cfg.nondim.rb, Some(5.0));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(RunConfig::parse("[charges]\nradius = 1.0\n"), Err(CliError::Usage(_))));
        assert!(RunConfig::parse("").unwrap() == RunConfig::default());
    }
}
