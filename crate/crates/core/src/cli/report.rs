//! Deterministic structured reports, in a line-oriented text form and JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl Status {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub key: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    pub status: Status,
    pub entries: Vec<Entry>,
}

impl Section {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        Section { name: name.into(), status, entries: Vec::new() }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.entries.push(Entry { key: key.into(), value: value.to_string() });
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|e| e.key == key).map(|e| e.value.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub sections: Vec<Section>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidParameter(format!("unknown format `{s}`"))),
        }
    }
}

const HEADER: &str = "# spinprolong report";

fn escape(s: &str, key: bool) -> String {
    let mut out = String::with_capacity(s.len() + 1);
    if key && s.is_empty() {
        // keeps an empty key distinguishable from a blank line
        out.push_str("\\e");
    }
    for ch in s.chars() {
        match ch {
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '=' if key => out.push_str("\\="),
            c => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut it = s.chars();
    while let Some(c) = it.next() {
        if c == '\\' {
            match it.next() {
                Some('n') => out.push('\n'),
                Some('e') => {}
                Some(o) => out.push(o),
                None => out.push('\\'),
            }
        } else {
            out.push(c);
        }
    }
    out
}

/// Split `key = value` at the first unescaped `=`.
fn split_entry(line: &str) -> Option<(&str, &str)> {
    let b = line.as_bytes();
    let mut i = 0;
    while i < b.len() {
        match b[i] {
            b'\\' => i += 2,
            b'=' => {
                let k = line[..i].strip_suffix(' ')?;
                let v = line[i + 1..].strip_prefix(' ').unwrap_or(&line[i + 1..]);
                return Some((k, v));
            }
            _ => i += 1,
        }
    }
    None
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.into(),
            config: BTreeMap::new(),
            sections: Vec::new(),
        }
    }

    pub fn with_config(mut self, key: &str, value: impl ToString) -> Self {
        self.config.insert(key.to_string(), value.to_string());
        self
    }

    pub fn push(&mut self, s: Section) {
        self.sections.push(s);
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// Any FAIL section makes the report a failure.
    pub fn passed(&self) -> bool {
        self.sections.iter().all(|s| s.status != Status::Fail)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{HEADER}");
        let _ = writeln!(out, "version = {}", escape(&self.version, false));
        let _ = writeln!(out, "command = {}", escape(&self.command, false));
        for (k, v) in &self.config {
            let _ = writeln!(out, "config.{} = {}", escape(k, true), escape(v, false));
        }
        for s in &self.sections {
            let _ = writeln!(out, "\n[{}] {}", escape(&s.name, true), s.status.label());
            for e in &s.entries {
                let _ = writeln!(out, "{} = {}", escape(&e.key, true), escape(&e.value, false));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn emit(&self, f: Format) -> String {
        match f {
            Format::Text => self.to_text(),
            Format::Json => self.to_json(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            expected: "a report document".into(),
        })
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let err = |line: usize, expected: &str| Error::Parse { line, column: 1, expected: expected.into() };
        let mut lines = text.lines().enumerate().map(|(n, l)| (n + 1, l));
        match lines.next() {
            Some((_, HEADER)) => {}
            _ => return Err(err(1, "report header")),
        }
        let mut r = Report { version: String::new(), command: String::new(), config: BTreeMap::new(), sections: vec![] };
        for (n, line) in lines {
            if line.is_empty() {
                continue;
            }
            let entry = split_entry(line);
            if let (None, Some(rest)) = (entry, line.strip_prefix('[')) {
                let (name, status) = rest.rsplit_once("] ").ok_or_else(|| err(n, "`] STATUS`"))?;
                let status = match status {
                    "PASS" => Status::Pass,
                    "FAIL" => Status::Fail,
                    "INFO" => Status::Info,
                    _ => return Err(err(n, "PASS, FAIL or INFO")),
                };
                r.sections.push(Section::new(unescape(name), status));
                continue;
            }
            let (k, v) = entry.ok_or_else(|| err(n, "`key = value` or `[section] STATUS`"))?;
            let (k, v) = (unescape(k), unescape(v));
            match r.sections.last_mut() {
                Some(s) => s.entries.push(Entry { key: k, value: v }),
                None => match k.as_str() {
                    "version" => r.version = v,
                    "command" => r.command = v,
                    _ => {
                        let ck = k.strip_prefix("config.").ok_or_else(|| err(n, "version, command or config.*"))?;
                        r.config.insert(ck.to_string(), v);
                    }
                },
            }
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("derive").with_config("gamma2", "+1");
        let mut s = Section::new("table = [odd]", Status::Pass);
        s.push("[X1,X4]", "X6").push("", "empty key").push("weird = key\\", "multi\nline");
        r.push(s);
        r.push(Section::new("empty", Status::Info));
        r
    }

    #[test]
    fn empty_report_is_header_only() {
        let r = Report::new("x");
        let t = r.to_text();
        assert!(t.starts_with(HEADER));
        assert_eq!(t.lines().count(), 3);
    }

    #[test]
    fn text_round_trip() {
        let r = sample();
        assert_eq!(Report::parse_text(&r.to_text()).unwrap(), r);
        assert_eq!(r.to_text(), sample().to_text());
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn fail_section_fails_report() {
        let mut r = sample();
        assert!(r.passed());
        r.push(Section::new("bad", Status::Fail));
        assert!(!r.passed());
    }
}
