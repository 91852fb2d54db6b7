//! Run configuration: command-line flags merged over an optional
//! `key = value` file. Flags always win.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use hemisystem::verify::CheckKind;

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Field size q = p^f.
    #[arg(long, conflicts_with_all = ["p", "f"])]
    pub q: Option<u64>,
    /// Characteristic.
    #[arg(long, requires = "f")]
    pub p: Option<u64>,
    /// Extension degree of F_q over F_p.
    #[arg(long, requires = "p")]
    pub f: Option<u32>,
    /// Base point d0 of the conic partition (an element of I_Q).
    #[arg(long)]
    pub d0: Option<u32>,
    /// Comma-separated checks: lines,perp,chars,srg,group,conic,gauss.
    #[arg(long)]
    pub checks: Option<String>,
    /// Output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for cached field tables.
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    /// Number of sampled vertex pairs for the strong-regularity check.
    #[arg(long)]
    pub sample: Option<usize>,
    /// Allow outputs beyond the default size limit.
    #[arg(long)]
    pub force: bool,
    /// Relative tolerance for floating-point identities.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Descriptor to verify instead of constructing one.
    #[arg(long)]
    pub descriptor: Option<PathBuf>,
    /// File of point ids (one per line) to verify in place of M.
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// `key = value` configuration file mirroring the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub p: Option<u64>,
    pub f: Option<u32>,
    pub d0: Option<u32>,
    pub checks: Option<Vec<CheckKind>>,
    pub out: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub sample: Option<usize>,
    pub force: bool,
    pub tolerance: Option<f64>,
    pub descriptor: Option<PathBuf>,
    pub points: Option<PathBuf>,
}

/// Error for malformed input; maps to exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct InvalidInput(pub String);

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(InvalidInput(msg.into()))
}

/// Splits `q` into `(p, f)`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut f = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        f += 1;
    }
    (rest == 1).then_some((p, f))
}

pub fn parse_checks(s: &str) -> Result<Vec<CheckKind>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.parse::<CheckKind>().map_err(invalid))
        .collect()
}

fn parse_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))
        .map_err(|e| invalid(format!("{e:#}")))?;
    let mut map = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| invalid(format!("config line {}: expected key = value", no + 1)))?;
        map.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(map)
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| invalid(format!("config key {key}: cannot parse '{v}'")))
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> Result<RunConfig> {
        let file = match &args.config {
            Some(path) => parse_file(path)?,
            None => BTreeMap::new(),
        };
        const KEYS: [&str; 13] = [
            "q",
            "p",
            "f",
            "d0",
            "checks",
            "out",
            "cache-dir",
            "sample",
            "force",
            "tolerance",
            "descriptor",
            "points",
            "config",
        ];
        if let Some(k) = file.keys().find(|k| !KEYS.contains(&k.as_str())) {
            bail!(invalid(format!("unknown config key '{k}'")));
        }
        let get = |k: &str| file.get(k).map(String::as_str);

        let (p, f) = if let Some(q) = args.q {
            Self::split_q(q)?
        } else if let (Some(p), Some(f)) = (args.p, args.f) {
            (Some(p), Some(f))
        } else if let Some(q) = get("q") {
            Self::split_q(parse_value("q", q)?)?
        } else {
            (
                get("p").map(|v| parse_value("p", v)).transpose()?,
                get("f").map(|v| parse_value("f", v)).transpose()?,
            )
        };
        let checks = match (&args.checks, get("checks")) {
            (Some(s), _) => Some(parse_checks(s)?),
            (None, Some(s)) => Some(parse_checks(s)?),
            _ => None,
        };
        Ok(RunConfig {
            p,
            f,
            d0: args
                .d0
                .or(get("d0").map(|v| parse_value("d0", v)).transpose()?),
            checks,
            out: args.out.clone().or(get("out").map(PathBuf::from)),
            cache_dir: args
                .cache_dir
                .clone()
                .or(get("cache-dir").map(PathBuf::from)),
            sample: args.sample.or(get("sample")
                .map(|v| parse_value("sample", v))
                .transpose()?),
            force: args.force
                || get("force")
                    .map(|v| parse_value("force", v))
                    .transpose()?
                    .unwrap_or(false),
            tolerance: args.tolerance.or(get("tolerance")
                .map(|v| parse_value("tolerance", v))
                .transpose()?),
            descriptor: args
                .descriptor
                .clone()
                .or(get("descriptor").map(PathBuf::from)),
            points: args.points.clone().or(get("points").map(PathBuf::from)),
        })
    }

    fn split_q(q: u64) -> Result<(Option<u64>, Option<u32>)> {
        let (p, f) =
            prime_power(q).ok_or_else(|| invalid(format!("q = {q} is not a prime power")))?;
        Ok((Some(p), Some(f)))
    }

    /// `(p, f)`, required.
    pub fn field(&self) -> Result<(u64, u32)> {
        match (self.p, self.f) {
            (Some(p), Some(f)) if f >= 1 => Ok((p, f)),
            _ => Err(invalid("a field is required: pass --q or --p and --f")),
        }
    }

    pub fn q(&self) -> Result<u64> {
        let (p, f) = self.field()?;
        p.checked_pow(f).ok_or_else(|| invalid("q is too large"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(11), Some((11, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn flags_win_over_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        fs::write(
            &path,
            "# comment\nq = 7\nsample = 50\nchecks = lines, chars\ncache_dir = /tmp/x\n",
        )
        .unwrap();
        let args = CommonArgs {
            q: Some(3),
            config: Some(path.clone()),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(&args).unwrap();
        assert_eq!(cfg.field().unwrap(), (3, 1));
        assert_eq!(cfg.sample, Some(50));
        assert_eq!(cfg.checks, Some(vec![CheckKind::Lines, CheckKind::Chars]));
        assert_eq!(cfg.cache_dir, Some(PathBuf::from("/tmp/x")));

        let only_file = CommonArgs {
            config: Some(path),
            ..Default::default()
        };
        assert_eq!(RunConfig::resolve(&only_file).unwrap().q().unwrap(), 7);
    }

    #[test]
    fn bad_input() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.conf");
        fs::write(&path, "colour = blue\n").unwrap();
        let args = CommonArgs {
            config: Some(path),
            ..Default::default()
        };
        assert!(RunConfig::resolve(&args).is_err());
        assert!(parse_checks("lines,bogus").is_err());
        let args = CommonArgs {
            q: Some(6),
            ..Default::default()
        };
        assert!(RunConfig::resolve(&args).is_err());
    }
}
