//! `output.txt` and `solution.txt`.
//!
//! Both start with `key=value` lines. `solution.txt` continues with a
//! `[certified]` section and an `[unknown]` section holding one box per line,
//! each component written as `[lo,hi]` with 17 significant digits so every
//! endpoint reads back as the same double.

use std::collections::BTreeMap;

use crate::interval::{Interval, IntervalBox};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{file} line {line}: {msg}")]
pub struct FormatError {
    pub file: &'static str,
    pub line: usize,
    pub msg: String,
}

pub fn fmt_endpoint(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_box(b: &IntervalBox) -> String {
    b.iter().map(|iv| format!("[{},{}]", fmt_endpoint(iv.lo()), fmt_endpoint(iv.hi()))).collect::<Vec<_>>().join(" x ")
}

pub fn parse_box(s: &str) -> Result<IntervalBox, String> {
    let mut out = Vec::new();
    for part in s.split(" x ") {
        let body = part
            .trim()
            .strip_prefix('[')
            .and_then(|p| p.strip_suffix(']'))
            .ok_or_else(|| format!("expected [lo,hi], got '{part}'"))?;
        let (lo, hi) = body.split_once(',').ok_or_else(|| format!("expected [lo,hi], got '{part}'"))?;
        let lo: f64 = lo.trim().parse().map_err(|_| format!("bad endpoint '{lo}'"))?;
        let hi: f64 = hi.trim().parse().map_err(|_| format!("bad endpoint '{hi}'"))?;
        if !(lo <= hi) {
            return Err(format!("empty interval [{lo},{hi}]"));
        }
        out.push(Interval::new(lo, hi));
    }
    Ok(IntervalBox::new(out))
}

fn parse_header<'a>(
    file: &'static str,
    lines: &mut std::iter::Peekable<impl Iterator<Item = (usize, &'a str)>>,
) -> Result<Vec<(String, String)>, FormatError> {
    let mut out = Vec::new();
    while let Some((no, line)) = lines.peek().copied() {
        if line.starts_with('[') {
            break;
        }
        lines.next();
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| FormatError { file, line: no + 1, msg: format!("expected key=value, got '{line}'") })?;
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

/// Run summary for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputFile {
    pub solver: String,
    pub config: String,
    pub status: String,
    pub wall_time: f64,
    pub parse_time: f64,
    pub certified: usize,
    pub unknown: usize,
    pub cells: u64,
    /// Keys this tool does not write, kept in order.
    pub extra: Vec<(String, String)>,
}

impl OutputFile {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "solver={}\nconfig={}\nstatus={}\nwall_time={}\nparse_time={}\ncertified={}\nunknown={}\ncells={}\n",
            self.solver,
            self.config,
            self.status,
            fmt_endpoint(self.wall_time),
            fmt_endpoint(self.parse_time),
            self.certified,
            self.unknown,
            self.cells
        );
        for (k, v) in &self.extra {
            s.push_str(&format!("{k}={v}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> Result<OutputFile, FormatError> {
        let file = "output.txt";
        let mut lines = text.lines().enumerate().peekable();
        let header = parse_header(file, &mut lines)?;
        if let Some((no, l)) = lines.next() {
            return Err(FormatError { file, line: no + 1, msg: format!("unexpected '{l}'") });
        }
        let mut map: BTreeMap<&str, &str> = BTreeMap::new();
        let mut extra = Vec::new();
        const KNOWN: [&str; 8] =
            ["solver", "config", "status", "wall_time", "parse_time", "certified", "unknown", "cells"];
        for (k, v) in &header {
            if KNOWN.contains(&k.as_str()) {
                map.insert(k, v);
            } else {
                extra.push((k.clone(), v.clone()));
            }
        }
        let get = |k: &str| map.get(k).copied().ok_or_else(|| FormatError { file, line: 0, msg: format!("missing {k}") });
        let num = |k: &str| -> Result<f64, FormatError> {
            get(k)?.parse().map_err(|_| FormatError { file, line: 0, msg: format!("bad {k}") })
        };
        let int = |k: &str| -> Result<u64, FormatError> {
            get(k)?.parse().map_err(|_| FormatError { file, line: 0, msg: format!("bad {k}") })
        };
        let out = OutputFile {
            solver: get("solver")?.to_string(),
            config: get("config")?.to_string(),
            status: get("status")?.to_string(),
            wall_time: num("wall_time")?,
            parse_time: num("parse_time")?,
            certified: int("certified")? as usize,
            unknown: int("unknown")? as usize,
            cells: int("cells")?,
            extra,
        };
        // only canonical text is accepted, so writing it back is lossless
        if out.to_text() != text {
            return Err(FormatError { file, line: 0, msg: "header keys out of canonical order".into() });
        }
        Ok(out)
    }
}

/// Certified and unknown boxes of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionFile {
    pub solver: String,
    pub config: String,
    pub variables: Vec<String>,
    pub certified: Vec<IntervalBox>,
    pub unknown: Vec<IntervalBox>,
}

impl SolutionFile {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "solver={}\nconfig={}\nvariables={}\n[certified]\n",
            self.solver,
            self.config,
            self.variables.join(",")
        );
        for b in &self.certified {
            s.push_str(&fmt_box(b));
            s.push('\n');
        }
        s.push_str("[unknown]\n");
        for b in &self.unknown {
            s.push_str(&fmt_box(b));
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<SolutionFile, FormatError> {
        let file = "solution.txt";
        let mut lines = text.lines().enumerate().peekable();
        let header = parse_header(file, &mut lines)?;
        let keys: Vec<&str> = header.iter().map(|(k, _)| k.as_str()).collect();
        if keys != ["solver", "config", "variables"] {
            return Err(FormatError { file, line: 1, msg: "expected solver, config, variables header".into() });
        }
        let variables: Vec<String> =
            if header[2].1.is_empty() { Vec::new() } else { header[2].1.split(',').map(String::from).collect() };
        let mut certified = Vec::new();
        let mut unknown = Vec::new();
        let mut section: Option<&mut Vec<IntervalBox>> = None;
        let mut seen = Vec::new();
        for (no, line) in lines {
            match line {
                "[certified]" => {
                    seen.push("certified");
                    section = Some(&mut certified);
                }
                "[unknown]" => {
                    seen.push("unknown");
                    section = Some(&mut unknown);
                }
                _ => {
                    let b = parse_box(line).map_err(|msg| FormatError { file, line: no + 1, msg })?;
                    if b.dim() != variables.len() {
                        return Err(FormatError {
                            file,
                            line: no + 1,
                            msg: format!("box has {} components, expected {}", b.dim(), variables.len()),
                        });
                    }
                    match section.as_mut() {
                        Some(v) => v.push(b),
                        None => return Err(FormatError { file, line: no + 1, msg: "box outside a section".into() }),
                    }
                }
            }
        }
        if seen != ["certified", "unknown"] {
            return Err(FormatError { file, line: 0, msg: "expected [certified] then [unknown]".into() });
        }
        let out = SolutionFile {
            solver: header[0].1.clone(),
            config: header[1].1.clone(),
            variables,
            certified,
            unknown,
        };
        if out.to_text() != text {
            return Err(FormatError { file, line: 0, msg: "non-canonical number formatting".into() });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_lines_round_trip_exactly() {
        let b = IntervalBox::new(vec![
            Interval::new(0.1, 0.30000000000000004),
            Interval::new(-1e-300, 5e300),
            Interval::new(f64::NEG_INFINITY, 2.0),
        ]);
        let s = fmt_box(&b);
        assert_eq!(parse_box(&s).unwrap(), b);
        assert!(s.starts_with("[1.0000000000000001e-1,3.0000000000000004e-1] x"));
    }

    #[test]
    fn solution_file_round_trip() {
        let f = SolutionFile {
            solver: "boxsolve 0.1.0".into(),
            config: "abc".into(),
            variables: vec!["x".into(), "y".into()],
            certified: vec![IntervalBox::from_bounds(&[(0.5, 0.75), (1.0, 1.0)])],
            unknown: vec![],
        };
        let t = f.to_text();
        assert_eq!(SolutionFile::parse(&t).unwrap(), f);
        assert!(SolutionFile::parse("solver=a\nconfig=b\nvariables=x\n[certified]\n[0,1] x [0,1]\n[unknown]\n").is_err());
    }

    #[test]
    fn output_file_round_trip() {
        let o = OutputFile {
            solver: "boxsolve".into(),
            config: "c".into(),
            status: "complete".into(),
            wall_time: 0.25,
            parse_time: 1e-4,
            certified: 3,
            unknown: 1,
            cells: 77,
            extra: vec![("note".into(), "x=y".into())],
        };
        assert_eq!(OutputFile::parse(&o.to_text()).unwrap(), o);
        assert!(OutputFile::parse("status=complete\n").is_err());
    }
}
