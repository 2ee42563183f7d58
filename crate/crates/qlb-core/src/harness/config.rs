//! Flat key=value configuration files. Unknown and duplicate keys are
//! rejected so typos in sweep definitions cannot pass silently.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::harness::{CaseConfig, CaseKind, Mode};
use crate::resources::log_spaced;

const KNOWN_KEYS: &[&str] = &[
    "case",
    "lattice",
    "nx",
    "ny",
    "steps",
    "delta_rho",
    "viscosity",
    "A_x",
    "A_y",
    "k_x",
    "k_y",
    "variant",
    "mode",
    "output_dir",
    "seed",
];

/// Baseline configuration for a case; individual keys can be overridden.
pub fn default_config(case: CaseKind) -> CaseConfig {
    match case {
        CaseKind::Discontinuity1d => CaseConfig {
            case,
            lattice: crate::lattice::LatticeName::D1Q3,
            nx: 500,
            ny: 1,
            steps: 200,
            delta_rho: 5e-5,
            viscosities: vec![1.0 / 6.0],
            a_x: 0.0,
            a_y: 0.0,
            k_x: 0,
            k_y: 0,
            variant: crate::operators::Variant::LayoutA,
            mode: Mode::QuantumEmulated,
            output_dir: PathBuf::from("out"),
            seed: 0,
        },
        CaseKind::Kolmogorov2d => CaseConfig {
            case,
            lattice: crate::lattice::LatticeName::D2Q9,
            nx: 32,
            ny: 32,
            steps: 100,
            delta_rho: 0.0,
            viscosities: log_spaced(0.0088, 1.0 / 6.0, 8),
            a_x: 0.3,
            a_y: 0.2,
            k_x: 1,
            k_y: 4,
            variant: crate::operators::Variant::LayoutA,
            mode: Mode::QuantumEmulated,
            output_dir: PathBuf::from("out"),
            seed: 0,
        },
        CaseKind::Resources => CaseConfig {
            case,
            lattice: crate::lattice::LatticeName::D2Q9,
            nx: 0,
            ny: 0,
            steps: 0,
            delta_rho: 0.0,
            viscosities: vec![],
            a_x: 0.0,
            a_y: 0.0,
            k_x: 0,
            k_y: 0,
            variant: crate::operators::Variant::LayoutA,
            mode: Mode::QuantumEmulated,
            output_dir: PathBuf::from("out"),
            seed: 0,
        },
    }
}

pub fn parse_config_file(path: &Path) -> Result<CaseConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<CaseConfig> {
    let mut pairs: BTreeMap<String, String> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected key=value, got `{line}`", lineno + 1))
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!("unknown key `{key}`")));
        }
        if pairs.insert(key.clone(), value).is_some() {
            return Err(Error::Config(format!("duplicate key `{key}`")));
        }
    }

    let case: CaseKind = pairs
        .get("case")
        .ok_or_else(|| Error::Config("missing required key `case`".to_string()))?
        .parse()?;
    let mut cfg = default_config(case);

    for (key, value) in &pairs {
        apply_key(&mut cfg, key, value)?;
    }
    validate(&cfg)?;
    Ok(cfg)
}

fn apply_key(cfg: &mut CaseConfig, key: &str, value: &str) -> Result<()> {
    let bad = |what: &str| Error::Config(format!("key `{key}`: invalid {what} `{value}`"));
    match key {
        "case" => {}
        "lattice" => cfg.lattice = value.parse()?,
        "nx" => cfg.nx = value.parse().map_err(|_| bad("integer"))?,
        "ny" => cfg.ny = value.parse().map_err(|_| bad("integer"))?,
        "steps" => cfg.steps = value.parse().map_err(|_| bad("integer"))?,
        "delta_rho" => cfg.delta_rho = value.parse().map_err(|_| bad("float"))?,
        "viscosity" => {
            let mut out = Vec::new();
            for part in value.split(',') {
                out.push(part.trim().parse::<f64>().map_err(|_| bad("float list"))?);
            }
            cfg.viscosities = out;
        }
        "A_x" => cfg.a_x = value.parse().map_err(|_| bad("float"))?,
        "A_y" => cfg.a_y = value.parse().map_err(|_| bad("float"))?,
        "k_x" => cfg.k_x = value.parse().map_err(|_| bad("integer"))?,
        "k_y" => cfg.k_y = value.parse().map_err(|_| bad("integer"))?,
        "variant" => cfg.variant = value.parse()?,
        "mode" => cfg.mode = value.parse()?,
        "output_dir" => cfg.output_dir = PathBuf::from(value),
        "seed" => cfg.seed = value.parse().map_err(|_| bad("integer"))?,
        _ => unreachable!("key list checked by caller"),
    }
    Ok(())
}

fn validate(cfg: &CaseConfig) -> Result<()> {
    match cfg.case {
        CaseKind::Discontinuity1d => {
            if cfg.lattice != crate::lattice::LatticeName::D1Q3 || cfg.ny != 1 {
                return Err(Error::Config(
                    "discontinuity_1d requires lattice=d1q3 and ny=1".to_string(),
                ));
            }
            if cfg.nx < 8 {
                return Err(Error::Config("discontinuity_1d requires nx >= 8".to_string()));
            }
            if cfg.viscosities.len() != 1 {
                return Err(Error::Config(
                    "discontinuity_1d takes exactly one viscosity".to_string(),
                ));
            }
        }
        CaseKind::Kolmogorov2d => {
            if cfg.lattice != crate::lattice::LatticeName::D2Q9 {
                return Err(Error::Config("kolmogorov_2d requires lattice=d2q9".to_string()));
            }
            if cfg.nx == 0 || cfg.ny == 0 {
                return Err(Error::Config("kolmogorov_2d requires nx, ny > 0".to_string()));
            }
            if cfg.viscosities.is_empty() {
                return Err(Error::Config("kolmogorov_2d requires a viscosity list".to_string()));
            }
        }
        CaseKind::Resources => {}
    }
    for nu in &cfg.viscosities {
        if !(*nu > 0.0) {
            return Err(Error::Config(format!("viscosity must be positive, got {nu}")));
        }
    }
    Ok(())
}

/// Output directory precedence: explicit flag, then the environment
/// override, then the configured directory.
pub fn resolve_output_dir(cfg: &CaseConfig, flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Ok(env) = std::env::var("QLB_OUT_DIR") {
        if !env.is_empty() {
            return PathBuf::from(env);
        }
    }
    cfg.output_dir.clone()
}
