use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;

use super::config::RunConfig;
use super::verify::{run_suite, Suite};
use super::{Format, Function};
use crate::chaos::{simulate_paths, ChaosCoefficients};
use crate::covariance::CovarianceTable;
use crate::error::{Error, Result};
use crate::{oracle, specfun};

fn write_header<W: Write>(out: &mut W, header: &[(String, String)]) -> io::Result<()> {
    for (k, v) in header {
        writeln!(out, "# {k}={v}")?;
    }
    Ok(())
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            Box::new(BufWriter::new(File::create(p)?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Writes `paths.{csv,json}` and `manifest.json` into the output directory.
pub fn simulate(cfg: &RunConfig, record_timing: bool) -> Result<bool> {
    let start = Instant::now();
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("thp-out"));
    fs::create_dir_all(&dir)?;
    let coeffs = ChaosCoefficients::build(&cfg.params, cfg.n, cfg.tail_tol)?;
    let paths = simulate_paths(&cfg.params, cfg.n, cfg.paths, cfg.seed, cfg.dist, cfg.tail_tol)?;

    let mut header = cfg.header();
    header.push(("M".into(), coeffs.len().to_string()));
    header.push(("tail_l2".into(), format!("{:e}", coeffs.tail_l2())));
    header.push(("generator".into(), "chacha8 stream=path_id".into()));
    let path_file = match cfg.format {
        Format::Csv => {
            let name = dir.join("paths.csv");
            let mut out = BufWriter::new(File::create(&name)?);
            write_header(&mut out, &header)?;
            writeln!(out, "path_id,t,value")?;
            for (id, p) in paths.iter().enumerate() {
                for (t, v) in p.points() {
                    writeln!(out, "{id},{t},{v}")?;
                }
            }
            out.flush()?;
            name
        }
        Format::Json => {
            let name = dir.join("paths.json");
            let body = json!({
                "header": header.iter().cloned().collect::<std::collections::BTreeMap<_, _>>(),
                "paths": paths.iter().map(|p| &p.values).collect::<Vec<_>>(),
            });
            fs::write(&name, serde_json::to_string_pretty(&body)? + "\n")?;
            name
        }
    };
    let mut manifest = json!({
        "command": "simulate",
        "params": cfg.params,
        "N": cfg.n,
        "paths": cfg.paths,
        "seed": cfg.seed,
        "dist": cfg.dist,
        "tail_tol": cfg.tail_tol,
        "truncation_M": coeffs.len(),
        "tail_l2_bound": coeffs.tail_l2(),
        "per_step_lambda": coeffs.lambda_n(),
        "generator": "chacha8, stream = path_id",
        "files": [path_file.file_name().map(|f| f.to_string_lossy().into_owned())],
    });
    if record_timing {
        manifest["wall_time_s"] = json!(start.elapsed().as_secs_f64());
    }
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(true)
}

pub fn covariance(cfg: &RunConfig) -> Result<bool> {
    let table = CovarianceTable::build(&cfg.params, &cfg.grid, cfg.tol)?;
    let mut cross = Vec::new();
    if cfg.oracle {
        for (i, &t) in cfg.grid.iter().enumerate() {
            for (j, &s) in cfg.grid.iter().enumerate().skip(i) {
                let slow = oracle::covariance_2d_oracle(t, s, &cfg.params, cfg.tol)?;
                cross.push(json!({"t": t, "s": s, "fast": table.values[i][j], "oracle": slow.value}));
            }
        }
    }
    let mut out = open_output(cfg.out.as_deref())?;
    match cfg.format {
        Format::Csv => {
            let mut extra = vec![("grid_points".to_string(), cfg.grid.len().to_string())];
            extra.push(("min_eigenvalue".into(), format!("{:e}", table.min_eigenvalue())));
            table.write_csv(&mut out, &extra)?;
            for f in &table.failures {
                writeln!(out, "# failure t={} s={}: {}", f.t, f.s, f.reason)?;
            }
            for c in &cross {
                writeln!(out, "# oracle {c}")?;
            }
        }
        Format::Json => {
            let body = json!({"table": table, "oracle": cross});
            writeln!(out, "{}", serde_json::to_string_pretty(&body)?)?;
        }
    }
    out.flush()?;
    for f in &table.failures {
        eprintln!("cell ({}, {}) failed: {}", f.t, f.s, f.reason);
    }
    Ok(table.failures.is_empty())
}

pub fn verify(cfg: &RunConfig, suite: Suite) -> Result<bool> {
    let report = run_suite(suite, cfg)?;
    let mut out = open_output(cfg.out.as_deref())?;
    writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    out.flush()?;
    Ok(report.passed)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SpecfunArgs {
    pub x: Option<f64>,
    pub nu: Option<f64>,
    pub z: Option<f64>,
    pub beta: Option<f64>,
    pub mu: Option<f64>,
}

fn need(name: &str, v: Option<f64>) -> Result<f64> {
    v.ok_or_else(|| Error::Config(format!("missing --{name}")))
}

pub fn specfun_eval(function: Function, a: SpecfunArgs, with_oracle: bool, tol: f64) -> Result<bool> {
    let (value, reference) = match function {
        Function::Gamma => (specfun::gamma(need("x", a.x)?)?, None),
        Function::LnGamma => (specfun::ln_gamma(need("x", a.x)?)?, None),
        Function::BesselK | Function::BesselKScaled => {
            let (nu, z) = (need("nu", a.nu)?, need("z", a.z)?);
            let scaled = function == Function::BesselKScaled;
            let v = if scaled {
                specfun::bessel_k_scaled(nu, z)?
            } else {
                specfun::bessel_k(nu, z)?
            };
            let r = if with_oracle {
                let k = oracle::bessel_k_oracle(nu, z, tol)?;
                Some(if scaled { k * z.exp() } else { k })
            } else {
                None
            };
            (v, r)
        }
        Function::TemperedProductIntegral => (
            specfun::tempered_product_integral(need("nu", a.nu)?, need("beta", a.beta)?, need("mu", a.mu)?)?,
            None,
        ),
    };
    let mut body = json!({
        "function": format!("{function:?}"),
        "x": a.x, "nu": a.nu, "z": a.z, "beta": a.beta, "mu": a.mu,
        "value": value,
    });
    if let Some(r) = reference {
        body["oracle"] = json!(r);
        body["rel_diff"] = json!(((value - r) / r).abs());
    }
    println!("{body}");
    Ok(true)
}
