//! Pipeline thresholds and their `key=value` file form.

use crate::agpv::DEFAULT_TH_BIN_DIV;
use crate::error::{Error, Result};
use crate::extraction::{ExtractParams, SizeRange};
use crate::matching::MatchParams;

/// Every tunable threshold of extraction and recognition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    /// DOG magnitude a pixel must exceed to join a component.
    pub t_dog: f64,
    pub th_f: f64,
    pub th_rec: f64,
    /// AGPV binarization threshold is the peak of the smoothed projection
    /// divided by this.
    pub th_bin_div: f64,
    pub octaves: usize,
}

impl Default for Params {
    fn default() -> Self {
        let e = ExtractParams::default();
        let m = MatchParams::default();
        Self {
            t_dog: e.t_dog,
            th_f: m.th_f,
            th_rec: m.th_rec,
            th_bin_div: DEFAULT_TH_BIN_DIV,
            octaves: e.octaves,
        }
    }
}

impl Params {
    pub fn extract(&self) -> ExtractParams {
        ExtractParams {
            t_dog: self.t_dog,
            octaves: self.octaves,
            size: SizeRange::default(),
        }
    }

    pub fn matching(&self) -> MatchParams {
        MatchParams {
            th_f: self.th_f,
            th_rec: self.th_rec,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("t_dog", self.t_dog),
            ("th_f", self.th_f),
            ("th_rec", self.th_rec),
            ("th_bin_div", self.th_bin_div),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.octaves == 0 {
            return Err(Error::Config("octaves must be at least 1".into()));
        }
        Ok(())
    }

    /// Set one threshold by name. Returns `Ok(false)` for keys this type
    /// does not own so callers can layer their own settings on top.
    pub fn set(&mut self, key: &str, value: &str) -> Result<bool> {
        let num = || {
            value
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("{key}: not a number: {value:?}")))
        };
        match key {
            "t_dog" => self.t_dog = num()?,
            "th_f" => self.th_f = num()?,
            "th_rec" => self.th_rec = num()?,
            "th_bin_div" => self.th_bin_div = num()?,
            "octaves" => {
                self.octaves = value
                    .parse()
                    .map_err(|_| Error::Config(format!("octaves: not an integer: {value:?}")))?
            }
            _ => return Ok(false),
        }
        Ok(true)
    }
}

/// Parse `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key=value", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(Error::Config(format!("line {}: empty key", i + 1)));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_round() {
        let kv = parse_kv("# thresholds\nt_dog = 3.5\n\nth_rec=2 # tighter\noctaves=3\nseed = 9\n")
            .unwrap();
        let mut p = Params::default();
        let mut rest = vec![];
        for (k, v) in &kv {
            if !p.set(k, v).unwrap() {
                rest.push(k.clone());
            }
        }
        assert_eq!((p.t_dog, p.th_rec, p.octaves), (3.5, 2.0, 3));
        assert_eq!(rest, ["seed"]);
        p.validate().unwrap();
    }

    #[test]
    fn bad_values() {
        assert!(parse_kv("novalue\n").is_err());
        assert!(parse_kv(" = 3\n").is_err());
        let mut p = Params::default();
        assert!(p.set("th_f", "abc").is_err());
        p.th_f = 0.0;
        assert!(p.validate().is_err());
        let p = Params {
            octaves: 0,
            ..Params::default()
        };
        assert!(p.validate().is_err());
    }
}
