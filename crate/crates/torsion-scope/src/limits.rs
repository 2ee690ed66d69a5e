use torsion_scope_core::{ScanLimits, DEFAULT_AMBIENT_CAP, DEFAULT_CLOSURE_CAP};

use crate::error::{usage, CliError};

pub const CAP_ENV: &str = "TORSION_SCOPE_CAP";

/// Closure and ambient caps for one run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub closure_cap: usize,
    pub ambient_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            closure_cap: DEFAULT_CLOSURE_CAP,
            ambient_cap: DEFAULT_AMBIENT_CAP,
        }
    }
}

impl Limits {
    /// Reads [`CAP_ENV`]. Accepts a bare element count (closure cap) or a
    /// comma list of `closure=N` and `ambient=M`.
    pub fn from_env() -> Result<Self, CliError> {
        match std::env::var(CAP_ENV) {
            Ok(v) => Self::parse(&v),
            Err(std::env::VarError::NotPresent) => Ok(Self::default()),
            Err(e) => Err(usage(format!("{CAP_ENV}: {e}"))),
        }
    }

    pub fn parse(s: &str) -> Result<Self, CliError> {
        let mut out = Self::default();
        let s = s.trim();
        if s.is_empty() {
            return Ok(out);
        }
        let bad = |what: &str| usage(format!("{CAP_ENV}: cannot parse '{what}'"));
        if let Ok(n) = s.parse::<usize>() {
            out.closure_cap = n;
        } else {
            for part in s.split(',') {
                let (key, value) = part.split_once('=').ok_or_else(|| bad(part))?;
                let value: u64 = value.trim().parse().map_err(|_| bad(part))?;
                match key.trim() {
                    "closure" => out.closure_cap = value as usize,
                    "ambient" => out.ambient_cap = value,
                    _ => return Err(bad(part)),
                }
            }
        }
        if out.closure_cap == 0 || out.ambient_cap < 2 {
            return Err(bad(s));
        }
        Ok(out)
    }

    pub fn scan(&self) -> ScanLimits {
        ScanLimits {
            ambient_cap: self.ambient_cap,
            closure_cap: self.closure_cap,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(Limits::parse("").unwrap(), Limits::default());
        assert_eq!(Limits::parse("500").unwrap().closure_cap, 500);
        let l = Limits::parse("closure=10, ambient=2401").unwrap();
        assert_eq!((l.closure_cap, l.ambient_cap), (10, 2401));
        assert!(Limits::parse("ambient=1").is_err());
        assert!(Limits::parse("depth=3").is_err());
        assert!(Limits::parse("closure=x").is_err());
    }
}
