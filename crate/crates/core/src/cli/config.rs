//! Run settings: built-in defaults, then a TOML file, then flags.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::prolong::{BbarInterpretation, BracketConvention, Reduction};
use crate::scalar::Gamma2;

#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub gamma2: Gamma2,
    pub reduction: Reduction,
    pub bracket_convention: BracketConvention,
    pub bbar_interpretation: BbarInterpretation,
    pub seed: u64,
    pub grid: usize,
    pub dt_safety: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            gamma2: Gamma2::Compact,
            reduction: Reduction::I,
            bracket_convention: BracketConvention::GF,
            bbar_interpretation: BbarInterpretation::Inverse,
            seed: 0,
            grid: 64,
            dt_safety: 0.9,
        }
    }
}

/// Raw key/value overrides, as strings.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides(pub BTreeMap<String, String>);

pub const KEYS: [&str; 7] = ["gamma2", "reduction", "bracket_convention", "bbar_interpretation", "seed", "grid", "dt_safety"];

fn scalar_text(v: &toml::Value) -> Option<String> {
    match v {
        toml::Value::String(s) => Some(s.clone()),
        toml::Value::Integer(i) => Some(if *i > 0 { format!("+{i}") } else { i.to_string() }),
        toml::Value::Float(f) => Some(f.to_string()),
        toml::Value::Boolean(b) => Some(b.to_string()),
        _ => None,
    }
}

fn collect(t: &toml::Table, path: &str, out: &mut BTreeMap<String, String>) -> Result<()> {
    for (k, v) in t {
        let full = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
        if let toml::Value::Table(inner) = v {
            collect(inner, &full, out)?;
            continue;
        }
        if !KEYS.contains(&k.as_str()) {
            return Err(Error::InvalidParameter(format!("unknown configuration key `{full}`")));
        }
        let s = scalar_text(v).ok_or_else(|| Error::InvalidParameter(format!("`{full}` must be a scalar")))?;
        if out.insert(k.clone(), s).is_some() {
            return Err(Error::InvalidParameter(format!("configuration key `{k}` given twice")));
        }
    }
    Ok(())
}

impl Overrides {
    /// Keys may sit at top level or inside any table, e.g. `[model] gamma2 = -1`.
    pub fn from_toml(text: &str) -> Result<Self> {
        let t: toml::Table = text.parse().map_err(|e: toml::de::Error| {
            let (line, column) = e
                .span()
                .map(|s| {
                    let before = &text[..s.start];
                    (before.matches('\n').count() + 1, s.start - before.rfind('\n').map_or(0, |p| p + 1) + 1)
                })
                .unwrap_or((1, 1));
            Error::Parse { line, column, expected: e.message().to_string() }
        })?;
        let mut out = BTreeMap::new();
        collect(&t, "", &mut out)?;
        Ok(Overrides(out))
    }

    pub fn set(&mut self, k: &str, v: Option<impl ToString>) {
        if let Some(v) = v {
            self.0.insert(k.to_string(), v.to_string());
        }
    }
}

impl Settings {
    pub fn apply(mut self, o: &Overrides) -> Result<Self> {
        let bad = |k: &str, v: &str| Error::InvalidParameter(format!("invalid value `{v}` for `{k}`"));
        for (k, v) in &o.0 {
            match k.as_str() {
                "gamma2" => self.gamma2 = v.parse()?,
                "reduction" => self.reduction = v.parse()?,
                "bracket_convention" => self.bracket_convention = v.parse()?,
                "bbar_interpretation" => self.bbar_interpretation = v.parse()?,
                "seed" => self.seed = v.trim_start_matches('+').parse().map_err(|_| bad(k, v))?,
                "grid" => self.grid = v.trim_start_matches('+').parse().map_err(|_| bad(k, v))?,
                "dt_safety" => {
                    self.dt_safety = v.parse().map_err(|_| bad(k, v))?;
                    if !(self.dt_safety > 0.0 && self.dt_safety <= 1.0) {
                        return Err(bad(k, v));
                    }
                }
                _ => return Err(Error::InvalidParameter(format!("unknown configuration key `{k}`"))),
            }
        }
        Ok(self)
    }

    /// Settings resolved from defaults, then `file`, then `flags`.
    pub fn resolve(file: Option<&Overrides>, flags: &Overrides) -> Result<Self> {
        let mut s = Settings::default();
        if let Some(f) = file {
            s = s.apply(f)?;
        }
        s.apply(flags)
    }

    pub fn echo(&self) -> BTreeMap<String, String> {
        [
            ("gamma2", self.gamma2.to_string()),
            ("reduction", self.reduction.to_string()),
            ("bracket_convention", self.bracket_convention.to_string()),
            ("bbar_interpretation", self.bbar_interpretation.to_string()),
            ("seed", self.seed.to_string()),
            ("grid", self.grid.to_string()),
            ("dt_safety", self.dt_safety.to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_tables_and_flag_precedence() {
        let file = Overrides::from_toml("[model]\ngamma2 = -1\nreduction = \"ii\"\n[sim]\ngrid = 32\n").unwrap();
        let mut flags = Overrides::default();
        flags.set("grid", Some(128));
        let s = Settings::resolve(Some(&file), &flags).unwrap();
        assert_eq!(s.gamma2, Gamma2::Noncompact);
        assert_eq!(s.reduction, Reduction::II);
        assert_eq!(s.grid, 128);
    }

    #[test]
    fn positive_integer_gamma() {
        let file = Overrides::from_toml("gamma2 = 1").unwrap();
        assert_eq!(Settings::resolve(Some(&file), &Overrides::default()).unwrap().gamma2, Gamma2::Compact);
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(Overrides::from_toml("colour = 3").is_err());
        assert!(matches!(Overrides::from_toml("gamma2 = "), Err(Error::Parse { line: 1, .. })));
    }
}
