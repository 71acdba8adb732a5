use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{CommonArgs, Format};
use crate::chaos::Distribution;
use crate::error::{Error, Result};
use crate::model::ProcessParams;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Text(String),
    Values(Vec<f64>),
}

/// Contents of a `--config` file. Keys match the long flag names.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub k: Option<u32>,
    pub hurst: Option<f64>,
    pub lambda: Option<f64>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub paths: Option<usize>,
    pub seed: Option<u64>,
    pub dist: Option<Distribution>,
    pub grid: Option<GridSpec>,
    pub tol: Option<f64>,
    #[serde(rename = "tail-tol", alias = "tail_tol")]
    pub tail_tol: Option<f64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub oracle: Option<bool>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("bad config {}: {e}", path.display())))
    }
}

/// Fully resolved settings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub params: ProcessParams,
    #[serde(rename = "N")]
    pub n: usize,
    pub paths: usize,
    pub seed: u64,
    pub dist: Distribution,
    pub grid: Vec<f64>,
    pub tol: f64,
    pub tail_tol: f64,
    pub threads: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub oracle: bool,
}

/// Comma-separated values, or `start:stop:count` for an even grid.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::Config(format!("cannot parse grid '{text}'"));
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').map(str::trim).collect();
        let [a, b, n] = parts[..] else { return Err(bad()) };
        let a: f64 = a.parse().map_err(|_| bad())?;
        let b: f64 = b.parse().map_err(|_| bad())?;
        let n: usize = n.parse().map_err(|_| bad())?;
        if n < 2 {
            return Ok(vec![a]);
        }
        return Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect());
    }
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
        .collect()
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Config("grid must not be empty".into()));
    }
    if let Some(&t) = grid.iter().find(|&&t| !(t >= 0.0) || !t.is_finite()) {
        return Err(Error::Config(format!("grid times must be finite and >= 0, got {t}")));
    }
    Ok(())
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> Result<Self> {
        let file = match &args.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let k = args.k.or(file.k).unwrap_or(1);
        let hurst = args.hurst.or(file.hurst).unwrap_or(0.75);
        let lambda = args.lambda.or(file.lambda).unwrap_or(1.0);
        let params = ProcessParams::new(k, hurst, lambda)?;
        let grid = match (&args.grid, &file.grid) {
            (Some(g), _) => parse_grid(g)?,
            (None, Some(GridSpec::Text(g))) => parse_grid(g)?,
            (None, Some(GridSpec::Values(v))) => v.clone(),
            (None, None) => vec![0.25, 0.5, 1.0],
        };
        check_grid(&grid)?;
        let n = args.n.or(file.n).unwrap_or(1024);
        if n == 0 {
            return Err(Error::Config("N must be >= 1".into()));
        }
        let paths = args.paths.or(file.paths).unwrap_or(1);
        if paths == 0 {
            return Err(Error::Config("paths must be >= 1".into()));
        }
        let tol = args.tol.or(file.tol).unwrap_or(crate::covariance::DEFAULT_TOL);
        let tail_tol = args.tail_tol.or(file.tail_tol).unwrap_or(1e-10);
        for (name, v) in [("tol", tol), ("tail-tol", tail_tol)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be > 0, got {v}")));
            }
        }
        Ok(RunConfig {
            params,
            n,
            paths,
            seed: args.seed.or(file.seed).unwrap_or(0),
            dist: args.dist.or(file.dist).unwrap_or_default(),
            grid,
            tol,
            tail_tol,
            threads: args.threads.or(file.threads).unwrap_or(0),
            out: args.out.clone().or(file.out),
            format: args.format.or(file.format).unwrap_or_default(),
            oracle: args.oracle || file.oracle.unwrap_or(false),
        })
    }

    /// Runs `f` on a rayon pool sized by `threads`.
    pub fn in_pool<T: Send>(&self, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| Error::Config(format!("cannot start thread pool: {e}")))?;
        pool.install(f)
    }

    /// `# key=value` lines shared by every CSV artifact.
    pub fn header(&self) -> Vec<(String, String)> {
        vec![
            ("k".into(), self.params.k().to_string()),
            ("hurst".into(), self.params.hurst().to_string()),
            ("lambda".into(), self.params.lambda().to_string()),
            ("d".into(), self.params.d().to_string()),
            ("N".into(), self.n.to_string()),
            ("paths".into(), self.paths.to_string()),
            ("seed".into(), self.seed.to_string()),
            ("dist".into(), self.dist.to_string()),
            ("tail_tol".into(), format!("{:e}", self.tail_tol)),
        ]
    }
}
