//! Text formats for witnesses and simulation traces.
//!
//! A witness reads
//!
//! ```text
//! sat
//! b0
//! #0
//! 0 0000 out
//! @0
//! 5 1
//! #1
//! ...
//! .
//! ```
//!
//! `b<j>` names the violated property. Each frame has a `#<f>` stanza of
//! register lines `<state index> <binary> [symbol]` and an `@<f>` stanza of
//! input lines `<op id> <binary>`. Array values take one line per stored
//! index, `<k> [<binary index>] <binary>`, after a default line
//! `<k> [*] <binary>`. A trace uses the same stanzas without the two header
//! lines.

use std::collections::BTreeMap;
use std::fmt::Write;

use btor2kit_core::bmc::{SatStatus, Witness};
use btor2kit_core::interp::{ArrayValue, Frame, Trace, Value};
use btor2kit_core::ir::{OpId, Program};
use btor2kit_core::{BitvecConst, Sort};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("witness line {line}: {message}")]
pub struct WitnessError {
    pub line: usize,
    pub message: String,
}

fn value_lines(out: &mut String, key: &str, v: &Value, symbol: Option<&str>) {
    let suffix = symbol.map(|s| format!(" {s}")).unwrap_or_default();
    match v {
        Value::Bv(b) => {
            let _ = writeln!(out, "{key} {}{suffix}", b.to_binary());
        }
        Value::Array(a) => {
            let _ = writeln!(out, "{key} [*] {}{suffix}", a.default_element().to_binary());
            for (i, e) in a.overrides() {
                let index = BitvecConst::new(a.index_width(), i.clone());
                let _ = writeln!(out, "{key} [{}] {}{suffix}", index.to_binary(), e.to_binary());
            }
        }
    }
}

fn frame_stanzas(out: &mut String, p: &Program, f: usize, frame: &Frame) {
    let _ = writeln!(out, "#{f}");
    for (i, v) in frame.states.iter().enumerate() {
        value_lines(out, &i.to_string(), v, p.states.get(i).and_then(|s| s.symbol.as_deref()));
    }
    let _ = writeln!(out, "@{f}");
    for (id, v) in &frame.inputs {
        value_lines(out, &id.0.to_string(), v, None);
    }
}

pub fn write_witness(p: &Program, w: &Witness) -> String {
    let mut out = String::new();
    match (w.status, w.violated_property) {
        (SatStatus::Sat, Some(j)) => {
            let _ = writeln!(out, "sat\nb{j}");
        }
        (SatStatus::Unsat, _) => out.push_str("unsat\n"),
        _ => out.push_str("unknown\n"),
    }
    for (f, frame) in w.frames.iter().enumerate() {
        frame_stanzas(&mut out, p, f, frame);
    }
    out.push_str(".\n");
    out
}

pub fn write_trace(p: &Program, trace: &Trace) -> String {
    let mut out = String::new();
    for (f, frame) in trace.to_frames().iter().enumerate() {
        frame_stanzas(&mut out, p, f, frame);
    }
    out.push_str(".\n");
    out
}

struct Reader<'a> {
    p: &'a Program,
    total: usize,
    lines: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> Reader<'a> {
    fn err(line: usize, message: impl Into<String>) -> WitnessError {
        WitnessError { line: line + 1, message: message.into() }
    }

    fn next_line(&mut self) -> Option<(usize, &'a str)> {
        for (n, l) in self.lines.by_ref() {
            let l = l.trim();
            if !l.is_empty() && !l.starts_with(';') {
                return Some((n, l));
            }
        }
        None
    }

    fn peek_line(&mut self) -> Option<(usize, &'a str)> {
        while let Some((_, l)) = self.lines.peek() {
            let l = l.trim();
            if l.is_empty() || l.starts_with(';') {
                self.lines.next();
            } else {
                break;
            }
        }
        self.lines.peek().map(|(n, l)| (*n, l.trim()))
    }

    /// Reads the `key value` lines of one stanza into values of the given
    /// sorts.
    fn stanza(&mut self, sort_of: impl Fn(u64) -> Option<Sort>) -> Result<BTreeMap<u64, Value>, WitnessError> {
        let mut values: BTreeMap<u64, Value> = BTreeMap::new();
        while let Some((n, line)) = self.peek_line() {
            if line.starts_with('#') || line.starts_with('@') || line == "." {
                break;
            }
            self.lines.next();
            let mut words = line.split_whitespace();
            let key: u64 =
                words.next().and_then(|k| k.parse().ok()).ok_or_else(|| Self::err(n, "expected an index"))?;
            let sort = sort_of(key).ok_or_else(|| Self::err(n, format!("no state or input {key}")))?;
            let mut word = words.next().ok_or_else(|| Self::err(n, "missing value"))?;
            let bits =
                |w: &str| BitvecConst::from_binary(w).ok_or_else(|| Self::err(n, format!("`{w}` is not binary")));
            match sort {
                Sort::Bitvec(w) => {
                    let v = bits(word)?;
                    if v.width() != w {
                        return Err(Self::err(n, format!("expected {w} bits, found {}", v.width())));
                    }
                    values.insert(key, Value::Bv(v));
                }
                Sort::Array { index, element } => {
                    let slot = word
                        .strip_prefix('[')
                        .and_then(|s| s.strip_suffix(']'))
                        .ok_or_else(|| Self::err(n, "array entries need an `[index]`"))?;
                    word = words.next().ok_or_else(|| Self::err(n, "missing value"))?;
                    let v = bits(word)?;
                    if v.width() != element {
                        return Err(Self::err(n, format!("expected {element} bits, found {}", v.width())));
                    }
                    if slot == "*" {
                        values.insert(key, Value::Array(ArrayValue::filled(index, v)));
                    } else {
                        let i = bits(slot)?;
                        if i.width() != index {
                            return Err(Self::err(n, format!("expected a {index}-bit index")));
                        }
                        let entry = values
                            .entry(key)
                            .or_insert_with(|| Value::Array(ArrayValue::filled(index, BitvecConst::zero(element))));
                        let Value::Array(a) = entry else { unreachable!() };
                        a.store(&i, v);
                    }
                }
            }
        }
        Ok(values)
    }

    fn frames(&mut self) -> Result<Vec<Frame>, WitnessError> {
        let p = self.p;
        let mut frames = Vec::new();
        loop {
            let (n, line) = self.next_line().ok_or_else(|| Self::err(self.total.saturating_sub(1), "missing `.`"))?;
            if line == "." {
                return Ok(frames);
            }
            let expected = format!("#{}", frames.len());
            if line != expected {
                return Err(Self::err(n, format!("expected `{expected}`, found `{line}`")));
            }
            let states = self.stanza(|k| p.states.get(k as usize).map(|s| s.sort))?;
            if !states.is_empty() && states.len() != p.states.len() {
                return Err(Self::err(
                    n,
                    format!("frame {} lists {} of {} registers", frames.len(), states.len(), p.states.len()),
                ));
            }
            let mut frame = Frame { states: states.into_values().collect(), ..Frame::default() };
            if let Some((_, l)) = self.peek_line() {
                if l == format!("@{}", frames.len()) {
                    self.lines.next();
                    let inputs = self.stanza(|k| p.inputs().find(|op| u64::from(op.id.0) == k).map(|op| op.sort))?;
                    frame.inputs = inputs.into_iter().map(|(k, v)| (OpId(k as u32), v)).collect();
                }
            }
            frames.push(frame);
        }
    }
}

/// Parses every witness in `text`, checking values against `p`.
pub fn parse_witnesses(p: &Program, text: &str) -> Result<Vec<Witness>, WitnessError> {
    let mut r = Reader { p, total: text.lines().count(), lines: text.lines().enumerate().peekable() };
    let mut out = Vec::new();
    while let Some((n, status)) = r.next_line() {
        let mut w = Witness {
            status: SatStatus::Unknown,
            violated_property: None,
            violation_frame: None,
            frames: Vec::new(),
            warnings: Vec::new(),
        };
        match status {
            "sat" => {
                let (m, prop) = r.next_line().ok_or_else(|| Reader::err(n + 1, "missing `b<j>` line"))?;
                let j = prop
                    .strip_prefix('b')
                    .and_then(|j| j.parse::<usize>().ok())
                    .ok_or_else(|| Reader::err(m, format!("expected `b<j>`, found `{prop}`")))?;
                w.status = SatStatus::Sat;
                w.violated_property = Some(j);
            }
            "unsat" => w.status = SatStatus::Unsat,
            "unknown" => {}
            other => return Err(Reader::err(n, format!("expected a status, found `{other}`"))),
        }
        w.frames = r.frames()?;
        if w.status == SatStatus::Sat {
            w.violation_frame = w.frames.len().checked_sub(1).map(|f| f as u32);
        }
        out.push(w);
    }
    Ok(out)
}

/// Parses a trace written by [`write_trace`] into frames.
pub fn parse_trace(p: &Program, text: &str) -> Result<Vec<Frame>, WitnessError> {
    Reader { p, total: text.lines().count(), lines: text.lines().enumerate().peekable() }.frames()
}
