use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::attack::GaConfig;
use crate::detect::Detector;
use crate::error::{Error, Result};
use crate::graph::{generate_planted_partition, load_edge_list, Dataset, GraphFormat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Epa,
    Ab,
    Ad,
    Aq,
    As,
    Dw,
    Dr,
    /// Uniformly random rewiring.
    Random,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Epa,
        Method::Ab,
        Method::Ad,
        Method::Aq,
        Method::As,
        Method::Dw,
        Method::Dr,
        Method::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Epa => "epa",
            Method::Ab => "ab",
            Method::Ad => "ad",
            Method::Aq => "aq",
            Method::As => "as",
            Method::Dw => "dw",
            Method::Dr => "dr",
            Method::Random => "random",
        }
    }

    /// Whether the method can run at `scale`.
    pub fn supports(self, scale: ScaleKind) -> bool {
        match self {
            Method::Epa => true,
            Method::Ab | Method::Ad | Method::Aq | Method::As | Method::Random => {
                scale == ScaleKind::Global
            }
            Method::Dw => scale == ScaleKind::Community,
            Method::Dr => scale == ScaleKind::Node,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Method::ALL
            .into_iter()
            .find(|m| m.name() == lower)
            .ok_or_else(|| Error::config("method", format!("unknown method `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaleKind {
    #[default]
    Global,
    Community,
    Node,
}

impl ScaleKind {
    pub fn name(self) -> &'static str {
        match self {
            ScaleKind::Global => "global",
            ScaleKind::Community => "community",
            ScaleKind::Node => "node",
        }
    }
}

impl fmt::Display for ScaleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScaleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "global" => Ok(ScaleKind::Global),
            "community" => Ok(ScaleKind::Community),
            "node" => Ok(ScaleKind::Node),
            other => Err(Error::config("scale", format!("unknown scale `{other}`"))),
        }
    }
}

/// How the attacked community or node is chosen.
///
/// Written as `kind:value`. Communities: `size:R` picks the R-th largest
/// detected community, `index:I` a community by index. Nodes: `degree:R`,
/// `betweenness:R` and `combined:R` pick by rank (1 = top), `node:V` by ID.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TargetSelector {
    CommunityBySize(usize),
    CommunityIndex(usize),
    NodeByDegree(usize),
    NodeByBetweenness(usize),
    NodeByCombined(usize),
    Node(usize),
}

impl TargetSelector {
    pub fn scale(self) -> ScaleKind {
        match self {
            TargetSelector::CommunityBySize(_) | TargetSelector::CommunityIndex(_) => {
                ScaleKind::Community
            }
            _ => ScaleKind::Node,
        }
    }
}

impl FromStr for TargetSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::config("target", msg);
        let (kind, value) = s
            .split_once(':')
            .ok_or_else(|| bad(format!("expected `kind:value`, got `{s}`")))?;
        let value: usize = value
            .trim()
            .parse()
            .map_err(|_| bad(format!("`{value}` is not a non-negative integer")))?;
        let ranked = |v: usize| {
            if v == 0 {
                Err(bad("ranks start at 1".into()))
            } else {
                Ok(v)
            }
        };
        match kind.trim().to_ascii_lowercase().as_str() {
            "size" => Ok(TargetSelector::CommunityBySize(ranked(value)?)),
            "index" | "community" => Ok(TargetSelector::CommunityIndex(value)),
            "degree" => Ok(TargetSelector::NodeByDegree(ranked(value)?)),
            "betweenness" => Ok(TargetSelector::NodeByBetweenness(ranked(value)?)),
            "combined" => Ok(TargetSelector::NodeByCombined(ranked(value)?)),
            "node" | "id" => Ok(TargetSelector::Node(value)),
            other => Err(bad(format!("unknown selector `{other}`"))),
        }
    }
}

impl fmt::Display for TargetSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetSelector::CommunityBySize(r) => write!(f, "size:{r}"),
            TargetSelector::CommunityIndex(i) => write!(f, "index:{i}"),
            TargetSelector::NodeByDegree(r) => write!(f, "degree:{r}"),
            TargetSelector::NodeByBetweenness(r) => write!(f, "betweenness:{r}"),
            TargetSelector::NodeByCombined(r) => write!(f, "combined:{r}"),
            TargetSelector::Node(v) => write!(f, "node:{v}"),
        }
    }
}

impl TryFrom<String> for TargetSelector {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<TargetSelector> for String {
    fn from(t: TargetSelector) -> String {
        t.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantedSpec {
    pub sizes: Vec<usize>,
    pub p_in: f64,
    pub p_out: f64,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSpec {
    /// Name used in result rows; defaults to the file stem or `planted`.
    pub name: Option<String>,
    pub path: Option<PathBuf>,
    pub format: Option<GraphFormat>,
    pub planted: Option<PlantedSpec>,
}

impl DatasetSpec {
    pub fn display_name(&self) -> String {
        if let Some(name) = &self.name {
            return name.clone();
        }
        match &self.path {
            Some(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "dataset".into()),
            None => "planted".into(),
        }
    }

    pub fn load(&self) -> Result<Dataset> {
        match (&self.path, &self.planted) {
            (Some(path), None) => {
                let format = self.format.unwrap_or_else(|| GraphFormat::from_path(path));
                load_edge_list(path, format)
            }
            (None, Some(p)) => {
                let (graph, truth) = generate_planted_partition(&p.sizes, p.p_in, p.p_out, p.seed)?;
                Ok(Dataset {
                    labels: (0..graph.node_count()).map(|v| v.to_string()).collect(),
                    graph,
                    ground_truth: Some(truth),
                })
            }
            (Some(_), Some(_)) => Err(Error::config(
                "dataset",
                "give either `path` or `planted`, not both",
            )),
            (None, None) => Err(Error::config("dataset", "needs `path` or `planted`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackSpec {
    pub method: Method,
    #[serde(default)]
    pub scale: ScaleKind,
    pub target: Option<TargetSelector>,
    /// Explicit budget β; also the GA's maximum θ.
    pub budget: Option<usize>,
    /// Budget as a percentage `k` of the original links: ⌈k·m/100⌉.
    pub budget_pct: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::config(
                "out_format",
                format!("unknown output format `{other}`"),
            )),
        }
    }
}

fn default_detectors() -> Vec<Detector> {
    Detector::ALL.to_vec()
}

fn default_repetitions() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: DatasetSpec,
    pub attack: AttackSpec,
    #[serde(default)]
    pub ga: GaConfig,
    #[serde(default = "default_detectors")]
    pub detectors: Vec<Detector>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default)]
    pub base_seed: u64,
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub output_format: OutputFormat,
    /// Leave `walltime_s` empty so reports are byte-reproducible.
    #[serde(default)]
    pub omit_walltime: bool,
}

impl ExperimentConfig {
    /// A config with defaults for everything but the dataset and method.
    pub fn new(dataset: DatasetSpec, method: Method) -> Self {
        ExperimentConfig {
            dataset,
            attack: AttackSpec {
                method,
                scale: ScaleKind::Global,
                target: None,
                budget: None,
                budget_pct: None,
            },
            ga: GaConfig::default(),
            detectors: default_detectors(),
            repetitions: default_repetitions(),
            base_seed: 0,
            output: None,
            output_format: OutputFormat::Csv,
            omit_walltime: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.ga.validate()?;
        if self.repetitions < 1 {
            return Err(Error::config("repetitions", "must be at least 1"));
        }
        if self.detectors.is_empty() {
            return Err(Error::config("detectors", "list is empty"));
        }
        let attack = &self.attack;
        if !attack.method.supports(attack.scale) {
            return Err(Error::config(
                "method",
                format!("`{}` does not run at {} scale", attack.method, attack.scale),
            ));
        }
        match (attack.scale, attack.target) {
            (ScaleKind::Global, Some(_)) => {
                return Err(Error::config("target", "global attacks take no target"));
            }
            (ScaleKind::Global, None) => {}
            (scale, None) => {
                return Err(Error::config(
                    "target",
                    format!("{scale} attacks need a target"),
                ));
            }
            (scale, Some(t)) if t.scale() != scale => {
                return Err(Error::config(
                    "target",
                    format!("`{t}` does not select a {scale}"),
                ));
            }
            _ => {}
        }
        if attack.budget.is_some() && attack.budget_pct.is_some() {
            return Err(Error::config(
                "budget",
                "give either `budget` or `budget_pct`",
            ));
        }
        if attack.budget == Some(0) {
            return Err(Error::config("budget", "must be at least 1"));
        }
        if let Some(k) = attack.budget_pct {
            if !(k > 0.0 && k <= 100.0) {
                return Err(Error::config(
                    "budget_pct",
                    format!("must be in (0, 100], got {k}"),
                ));
            }
        }
        match (&self.dataset.path, &self.dataset.planted) {
            (Some(_), Some(_)) => {
                return Err(Error::config("dataset", "give either `path` or `planted`"))
            }
            (None, None) => return Err(Error::config("dataset", "needs `path` or `planted`")),
            _ => {}
        }
        Ok(())
    }

    /// The budget β for a graph with `m` links.
    pub fn resolve_budget(&self, m: usize) -> usize {
        match (self.attack.budget, self.attack.budget_pct) {
            (Some(b), _) => b,
            (None, Some(k)) => budget_from_pct(k, m),
            (None, None) => self.ga.theta,
        }
    }
}

/// ⌈k·m/100⌉, at least 1.
pub fn budget_from_pct(k: f64, m: usize) -> usize {
    // round first so that e.g. 5% of 100 is exactly 5
    let raw = k * m as f64 / 100.0;
    let snapped = (raw * 1e9).round() / 1e9;
    (snapped.ceil() as usize).max(1)
}

/// Reads and validates a TOML experiment config. Relative dataset and
/// output paths are taken relative to the config file.
pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    let mut config = parse_config_str(&text)?;
    let base = path.parent().unwrap_or(Path::new(""));
    if let Some(p) = &mut config.dataset.path {
        if p.is_relative() {
            *p = base.join(&*p);
        }
    }
    if let Some(p) = &mut config.output {
        if p.is_relative() {
            *p = base.join(&*p);
        }
    }
    Ok(config)
}

pub fn parse_config_str(text: &str) -> Result<ExperimentConfig> {
    let config: ExperimentConfig = toml::from_str(text).map_err(config_error)?;
    config.validate()?;
    Ok(config)
}

fn config_error(e: toml::de::Error) -> Error {
    let message = e.message().to_string();
    let key = message
        .split('`')
        .nth(1)
        .filter(|_| message.starts_with("unknown field"))
        .map(str::to_string)
        .unwrap_or_else(|| "config".into());
    Error::config(key, message)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config_str(
            r#"
            dataset = { path = "karate.txt" }
            attack = { method = "epa" }
            "#,
        )
        .unwrap();
        assert_eq!(c.ga, GaConfig::default());
        assert_eq!(c.ga.population, 100);
        assert_eq!(c.ga.generations, 200);
        assert_eq!(c.ga.crossover_rate, 0.6);
        assert_eq!(c.ga.mutation_rate, 0.1);
        assert_eq!(c.ga.c, 4.0);
        assert_eq!(c.ga.epsilon, 0.5);
        assert_eq!(c.detectors, Detector::ALL.to_vec());
        assert_eq!(c.attack.scale, ScaleKind::Global);
    }

    #[test]
    fn range_errors_name_the_key() {
        let err = parse_config_str(
            r#"
            dataset = { path = "x.txt" }
            attack = { method = "epa" }
            ga = { crossover_rate = 1.5 }
            "#,
        )
        .unwrap_err();
        assert!(
            matches!(err, Error::Config { ref key, .. } if key == "crossover_rate"),
            "{err}"
        );
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse_config_str(
            r#"
            dataset = { path = "x.txt" }
            attack = { method = "epa" }
            colour = 3
            "#,
        )
        .unwrap_err();
        assert!(
            matches!(err, Error::Config { ref key, .. } if key == "colour"),
            "{err}"
        );
    }

    #[test]
    fn percentage_budgets_round_up() {
        assert_eq!(budget_from_pct(5.0, 613), 31);
        assert_eq!(budget_from_pct(5.0, 100), 5);
        assert_eq!(budget_from_pct(1.0, 10), 1);
        assert_eq!(budget_from_pct(3.0, 1), 1);
    }

    #[test]
    fn targets_parse_and_match_scales() {
        assert_eq!(
            "size:1".parse::<TargetSelector>().unwrap(),
            TargetSelector::CommunityBySize(1)
        );
        assert_eq!(
            "combined:3".parse::<TargetSelector>().unwrap(),
            TargetSelector::NodeByCombined(3)
        );
        assert!("degree:0".parse::<TargetSelector>().is_err());
        assert!("degree".parse::<TargetSelector>().is_err());
        let err = parse_config_str(
            r#"
            dataset = { path = "x.txt" }
            attack = { method = "epa", scale = "node", target = "size:1" }
            "#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Config { ref key, .. } if key == "target"));
        let err = parse_config_str(
            r#"
            dataset = { path = "x.txt" }
            attack = { method = "dw", scale = "global" }
            "#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Config { ref key, .. } if key == "method"));
    }
}
