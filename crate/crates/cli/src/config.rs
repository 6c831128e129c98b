//! Run configuration: one JSON file per run, plus a few flag overrides.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use trimotion::discretize::{grid_for, make_grid, Grid, OffsetRule};
use trimotion::model::{PotentialSpec, RationalOrReal};
use trimotion::reduction::{build_jacobi, map_threebody, reduce_to_2d, BoxDomain, JacobiFrame, ReducedProblem2D};

use crate::custom::attach_callback;
use crate::failure::{Failure, ResultExt};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Solve,
    Oracle,
    Map3,
    Verify,
    Scan,
    Converge,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Self::Solve => "solve",
            Self::Oracle => "oracle",
            Self::Map3 => "map3",
            Self::Verify => "verify",
            Self::Scan => "scan",
            Self::Converge => "converge",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Must agree with the subcommand when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<PotentialSpec>,
    /// Reduced problem written by `map3`, used instead of `system`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jacobi: Option<JacobiBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionBlock>,
    #[serde(default)]
    pub discretization: DiscretizationBlock,
    #[serde(default)]
    pub solver: SolverBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyBlock>,
    #[serde(default)]
    pub output: OutputBlock,
}

/// Masses and dimension of a three-body system for `map3`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JacobiBlock {
    pub masses: [f64; 3],
    pub d: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionBlock {
    /// Shorthand for `d1 = d2 = d`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d1: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d2: Option<u32>,
    /// Angular momenta `[L_x, L_y]`.
    #[serde(default)]
    pub l: [u32; 2],
    #[serde(default, rename = "box", skip_serializing_if = "Option::is_none")]
    pub domain: Option<BoxDomain>,
}

impl ReductionBlock {
    fn dimensions(&self) -> Result<(u32, u32), Failure> {
        match (self.d, self.d1, self.d2) {
            (Some(d), None, None) => Ok((d, d)),
            (None, Some(d1), Some(d2)) => Ok((d1, d2)),
            _ => Err(Failure::config("reduction needs either d or both d1 and d2")),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Offset {
    /// Offset only when a node would land on a singular ray.
    #[default]
    Avoid,
    None,
    ShiftY,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscretizationBlock {
    /// Interior nodes `[n_x, n_y]`.
    #[serde(default = "default_n")]
    pub n: [usize; 2],
    #[serde(default)]
    pub offset: Offset,
    /// Nodes per axis on each rung of a `converge` ladder.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ladder: Option<Vec<usize>>,
}

fn default_n() -> [usize; 2] {
    [100, 100]
}

impl Default for DiscretizationBlock {
    fn default() -> Self {
        Self {
            n: default_n(),
            offset: Offset::default(),
            ladder: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverBlock {
    #[serde(default = "default_levels")]
    pub levels: usize,
    /// Absolute residual target `‖H v − λ v‖`.
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    /// Relative gap below which neighbouring levels are clustered.
    #[serde(default = "default_degeneracy_tol")]
    pub degeneracy_tol: f64,
}

fn default_levels() -> usize {
    6
}
fn default_tol() -> f64 {
    1e-8
}
fn default_max_iter() -> usize {
    500
}
fn default_degeneracy_tol() -> f64 {
    1e-6
}

impl Default for SolverBlock {
    fn default() -> Self {
        Self {
            levels: default_levels(),
            tol: default_tol(),
            max_iter: default_max_iter(),
            degeneracy_tol: default_degeneracy_tol(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanBlock {
    pub k: Vec<RationalOrReal>,
    #[serde(default = "default_scan_levels")]
    pub levels_per_k: usize,
    #[serde(default = "default_scan_tol")]
    pub tol: f64,
}

fn default_scan_levels() -> usize {
    20
}
fn default_scan_tol() -> f64 {
    1e-8
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyBlock {
    /// Check ids; empty runs every built-in check.
    #[serde(default)]
    pub checks: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    /// Whitespace-separated table for gnuplot (`scan` only).
    Dat,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    /// Relative paths resolve against the config file's directory.
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    /// File stem; defaults to the command name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefix: Option<String>,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

fn default_dir() -> PathBuf {
    PathBuf::from(".")
}
fn default_formats() -> Vec<Format> {
    vec![Format::Csv, Format::Json]
}

impl Default for OutputBlock {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            prefix: None,
            formats: default_formats(),
        }
    }
}

/// Flag values that replace their config counterparts.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub levels: Option<usize>,
    pub grid: Option<[usize; 2]>,
    pub out: Option<PathBuf>,
}

/// Parses `N`, `NX,NY` or `NXxNY`.
pub fn parse_grid(s: &str) -> Result<[usize; 2], String> {
    let parts: Vec<&str> = s.split([',', 'x']).map(str::trim).collect();
    let nums: Vec<usize> = parts
        .iter()
        .map(|p| p.parse::<usize>().map_err(|e| format!("bad grid size {p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match nums[..] {
        [n] => Ok([n, n]),
        [nx, ny] => Ok([nx, ny]),
        _ => Err(format!("expected N or NX,NY, got {s:?}")),
    }
}

/// A parsed configuration with its location resolved.
#[derive(Clone, Debug)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub base_dir: PathBuf,
    pub command: Command,
}

impl LoadedConfig {
    pub fn load(path: &Path, command: Command, overrides: &Overrides) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
        let mut config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Failure::config(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column())))?;
        if let Some(c) = config.command {
            if c != command {
                return Err(Failure::config(format!("config is for {c}, not {command}")));
            }
        }
        config.command = Some(command);
        if let Some(m) = overrides.levels {
            config.solver.levels = m;
        }
        if let Some(n) = overrides.grid {
            config.discretization.n = n;
        }
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        if let Some(out) = &overrides.out {
            config.output.dir = std::env::current_dir()
                .map(|cwd| cwd.join(out))
                .unwrap_or_else(|_| out.clone());
        }
        let loaded = Self {
            config,
            base_dir,
            command,
        };
        loaded.check()?;
        Ok(loaded)
    }

    fn check(&self) -> Result<(), Failure> {
        let s = &self.config.solver;
        if s.levels == 0 {
            return Err(Failure::config("solver.levels must be at least 1"));
        }
        if !(s.tol > 0.0) || !(s.degeneracy_tol > 0.0) {
            return Err(Failure::config("solver tolerances must be positive"));
        }
        if self.config.output.formats.is_empty() {
            return Err(Failure::config("output.formats is empty"));
        }
        Ok(())
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn out_dir(&self) -> PathBuf {
        self.resolve(&self.config.output.dir)
    }

    pub fn prefix(&self) -> String {
        self.config
            .output
            .prefix
            .clone()
            .unwrap_or_else(|| self.command.to_string())
    }

    pub fn wants(&self, format: Format) -> bool {
        self.config.output.formats.contains(&format)
    }

    pub fn system(&self) -> Result<PotentialSpec, Failure> {
        let spec = self
            .config
            .system
            .clone()
            .ok_or_else(|| Failure::config(format!("{} needs a system block", self.command)))?;
        attach_callback(spec)
    }

    /// The reduced planar problem, from `problem` or from `system` and
    /// `reduction`.
    pub fn reduced_problem(&self) -> Result<ReducedProblem2D, Failure> {
        match (&self.config.problem, &self.config.system) {
            (Some(path), None) => {
                let path = self.resolve(path);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
                let doc: serde_json::Value = serde_json::from_str(&text)
                    .map_err(|e| Failure::config(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column())))?;
                let inner = doc.get("problem").cloned().unwrap_or(doc);
                let mut problem: ReducedProblem2D =
                    serde_json::from_value(inner).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
                problem.base = attach_callback(problem.base)?;
                if let Some(domain) = self.config.reduction.as_ref().and_then(|r| r.domain) {
                    problem.domain = BoxDomain::new(domain.x_max, domain.y_max).classify()?;
                }
                Ok(problem)
            }
            (None, Some(_)) => {
                let r = self
                    .config
                    .reduction
                    .as_ref()
                    .ok_or_else(|| Failure::config("a system needs a reduction block"))?;
                let (d1, d2) = r.dimensions()?;
                reduce_to_2d(&self.system()?, d1, d2, r.l[0], r.l[1], r.domain).classify()
            }
            _ => Err(Failure::config("give exactly one of system and problem")),
        }
    }

    /// Jacobi frame and reduced problem of a three-body system.
    pub fn three_body(&self) -> Result<(JacobiFrame, ReducedProblem2D), Failure> {
        let jacobi = self
            .config
            .jacobi
            .as_ref()
            .ok_or_else(|| Failure::config("map3 needs a jacobi block"))?;
        let frame = build_jacobi(jacobi.masses, jacobi.d).classify()?;
        let (l, domain) = match &self.config.reduction {
            Some(r) if r.d.is_some() || r.d1.is_some() || r.d2.is_some() => {
                return Err(Failure::config("map3 takes its dimension from the jacobi block"))
            }
            Some(r) => (r.l, r.domain),
            None => ([0, 0], None),
        };
        let problem = map_threebody(&self.system()?, &frame, l[0], l[1], domain).classify()?;
        Ok((frame, problem))
    }

    pub fn grid(&self, problem: &ReducedProblem2D, n: [usize; 2]) -> Result<Grid, Failure> {
        let [nx, ny] = n;
        match self.config.discretization.offset {
            Offset::Avoid => grid_for(problem, nx, ny),
            Offset::None => make_grid(&problem.domain, nx, ny, &OffsetRule::None),
            Offset::ShiftY => make_grid(&problem.domain, nx, ny, &OffsetRule::ShiftY),
        }
        .classify()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_flag_forms() {
        assert_eq!(parse_grid("40"), Ok([40, 40]));
        assert_eq!(parse_grid("40,60"), Ok([40, 60]));
        assert_eq!(parse_grid("40x60"), Ok([40, 60]));
        assert!(parse_grid("40,60,80").is_err());
        assert!(parse_grid("a").is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        let r: Result<RunConfig, _> = serde_json::from_str(r#"{"solver": {"levels": 3, "tolerance": 1e-3}}"#);
        assert!(r.is_err());
        let r: Result<RunConfig, _> = serde_json::from_str(r#"{"sytem": {}}"#);
        assert!(r.is_err());
    }

    #[test]
    fn shipped_examples_parse() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/configs");
        let mut count = 0;
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.extension().is_some_and(|e| e == "json") {
                let text = std::fs::read_to_string(&path).unwrap();
                serde_json::from_str::<RunConfig>(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
                count += 1;
            }
        }
        assert!(count >= 6);
    }

    #[test]
    fn defaults_fill_in() {
        let c: RunConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(c.discretization.n, [100, 100]);
        assert_eq!(c.solver.levels, 6);
        assert_eq!(c.output.formats, vec![Format::Csv, Format::Json]);
    }
}
