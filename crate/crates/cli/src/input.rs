use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use sha2::{Digest, Sha256};

use surfarith_core::numfield::rat::parse_rat;
use surfarith_core::numfield::{BaseElem, BaseField, ExtField, FieldElem};

/// Input files read so far; their digest goes into the report.
#[derive(Default)]
pub struct Inputs {
    hasher: Option<Sha256>,
}

impl Inputs {
    pub fn read_json<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.hasher.get_or_insert_with(Sha256::new).update(&bytes);
        serde_json::from_slice(&bytes).map_err(|e| surfarith_core::Error::Parse(format!("{}: {e}", path.display())).into())
    }

    pub fn digest(self) -> Option<String> {
        self.hasher.map(|h| format!("sha256:{:x}", h.finalize()))
    }
}

/// `Q`, `Q(sqrt 5)`, `Q(√5)` or just `5`.
pub fn parse_field(s: &str) -> Result<BaseField> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.eq_ignore_ascii_case("q") {
        return Ok(BaseField::rationals());
    }
    let inner = t
        .strip_prefix("Q(")
        .and_then(|r| r.strip_suffix(')'))
        .map(|r| r.trim_start_matches("sqrt").trim_start_matches('√').trim_matches(|c| c == '(' || c == ')'))
        .unwrap_or(&t);
    let m: u64 = inner.parse().map_err(|_| surfarith_core::Error::Parse(format!("bad field '{s}'")))?;
    Ok(BaseField::quadratic(m)?)
}

/// `u` or `u,v` for u + v·√m.
pub fn parse_base_elem(f: BaseField, s: &str) -> Result<BaseElem> {
    let parts: Vec<String> = s.split(',').map(|p| p.trim().to_string()).collect();
    Ok(f.parse_elem(&parts)?)
}

/// Comma-separated rationals, lifted into the tower.
pub fn parse_multipliers(e: &ExtField, s: &str) -> Result<Vec<FieldElem>> {
    s.split(',').map(|p| Ok(e.rat(parse_rat(p.trim())?))).collect()
}

pub fn parse_primes(s: &str) -> Result<Vec<u64>> {
    let ps = s
        .split(',')
        .map(|p| p.trim().parse::<u64>().map_err(|_| surfarith_core::Error::Parse(format!("bad prime '{p}'"))))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if ps.is_empty() {
        bail!(surfarith_core::Error::Parse("no primes given".into()));
    }
    Ok(ps)
}

pub fn required(p: &Option<PathBuf>, flag: &str) -> Result<PathBuf> {
    p.clone().ok_or_else(|| surfarith_core::Error::Parse(format!("{flag} is required")).into())
}
