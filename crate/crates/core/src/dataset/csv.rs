//! CSV reader and writer.
//!
//! ```text
//! pendingA:state,pendingB:state,act:action,label
//! # action-map: w=0,rA=1,rB=2
//! 0,0,0,good
//! 0,0,1,bad
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{ActionMap, Dataset, Role, Variable, VariableSchema};
use crate::error::{Error, Result};

const ACTION_MAP: &str = "action-map";

fn ingest(line: usize, message: impl Into<String>) -> Error {
    Error::Ingest { line, message: message.into() }
}

impl Dataset {
    pub fn load(path: impl AsRef<Path>) -> Result<Dataset> {
        let text = fs::read_to_string(path)?;
        Self::parse_csv(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for v in self.schema.vars() {
            let _ = write!(out, "{}:{},", v.name, v.role.as_str());
        }
        out.push_str("label\n");

        let first_action = self
            .schema
            .vars()
            .iter()
            .find(|v| v.role == Role::Action)
            .map(|v| v.name.as_str());
        let short = self.action_maps.len() == 1
            && first_action == Some(self.action_maps[0].var.as_str());
        for map in &self.action_maps {
            let entries: Vec<String> = map
                .labels
                .iter()
                .enumerate()
                .map(|(i, l)| format!("{l}={i}"))
                .collect();
            if short {
                let _ = writeln!(out, "# {ACTION_MAP}: {}", entries.join(","));
            } else {
                let _ = writeln!(out, "# {ACTION_MAP}({}): {}", map.var, entries.join(","));
            }
        }

        for (x, good) in self.iter() {
            for v in x {
                let _ = write!(out, "{v},");
            }
            out.push_str(if good { "good\n" } else { "bad\n" });
        }
        out
    }

    pub fn parse_csv(text: &str) -> Result<Dataset> {
        let mut schema: Option<VariableSchema> = None;
        let mut pending_maps: Vec<(usize, Option<String>, Vec<String>)> = Vec::new();
        let mut data: Option<Dataset> = None;

        for (idx, raw) in text.split('\n').enumerate() {
            let line_no = idx + 1;
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.trim().is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(map) = parse_action_map(comment.trim(), line_no)? {
                    pending_maps.push((line_no, map.0, map.1));
                }
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let Some(d) = data.as_mut() else {
                let s = parse_header(&fields, line_no)?;
                data = Some(Dataset::empty(s.clone()));
                schema = Some(s);
                continue;
            };
            let arity = d.arity();
            if fields.len() != arity + 1 {
                return Err(ingest(
                    line_no,
                    format!("expected {} fields, found {}", arity + 1, fields.len()),
                ));
            }
            let mut x = Vec::with_capacity(arity);
            for f in &fields[..arity] {
                let v: u64 = f
                    .parse()
                    .map_err(|_| ingest(line_no, format!("not a natural number: {f:?}")))?;
                x.push(v);
            }
            let good = match fields[arity] {
                "good" => true,
                "bad" => false,
                other => return Err(ingest(line_no, format!("unknown label {other:?}"))),
            };
            d.insert(x, good).map_err(|e| match e {
                Error::ConflictingLabel(v) => {
                    ingest(line_no, format!("vector {v:?} appears with both labels"))
                }
                other => other,
            })?;
        }

        let (Some(schema), Some(mut d)) = (schema, data) else {
            return Err(ingest(1, "missing header"));
        };
        for (line_no, var, labels) in pending_maps {
            let var = match var {
                Some(v) => v,
                None => schema
                    .vars()
                    .iter()
                    .find(|v| v.role == Role::Action)
                    .map(|v| v.name.clone())
                    .ok_or_else(|| ingest(line_no, "action map without an action variable"))?,
            };
            if !schema.vars().iter().any(|v| v.name == var) {
                return Err(ingest(line_no, format!("action map for unknown variable {var:?}")));
            }
            d.action_maps.push(ActionMap { var, labels });
        }
        Ok(d)
    }
}

fn parse_header(fields: &[&str], line: usize) -> Result<VariableSchema> {
    let Some((last, vars)) = fields.split_last() else {
        return Err(ingest(line, "empty header"));
    };
    if *last != "label" {
        return Err(ingest(line, "header must end with `label`"));
    }
    let mut out = Vec::with_capacity(vars.len());
    for f in vars {
        let (name, role) = f
            .split_once(':')
            .ok_or_else(|| ingest(line, format!("header field {f:?} is not name:role")))?;
        let role = match role {
            "state" => Role::State,
            "action" => Role::Action,
            other => return Err(ingest(line, format!("unknown role {other:?}"))),
        };
        out.push(Variable { name: name.to_string(), role });
    }
    VariableSchema::new(out).map_err(|e| ingest(line, e.to_string()))
}

/// Parses `action-map: a=0,b=1` or `action-map(var): a=0,b=1`.
#[allow(clippy::type_complexity)]
fn parse_action_map(comment: &str, line: usize) -> Result<Option<(Option<String>, Vec<String>)>> {
    let Some(rest) = comment.strip_prefix(ACTION_MAP) else {
        return Ok(None);
    };
    let (var, body) = if let Some(r) = rest.strip_prefix('(') {
        let (var, body) = r
            .split_once(')')
            .ok_or_else(|| ingest(line, "unterminated action-map variable"))?;
        (Some(var.to_string()), body)
    } else {
        (None, rest)
    };
    let body = body
        .trim_start()
        .strip_prefix(':')
        .ok_or_else(|| ingest(line, "malformed action-map comment"))?
        .trim();
    let mut labels: Vec<Option<String>> = Vec::new();
    for entry in body.split(',').filter(|e| !e.trim().is_empty()) {
        let (label, code) = entry
            .trim()
            .rsplit_once('=')
            .ok_or_else(|| ingest(line, format!("malformed action-map entry {entry:?}")))?;
        let code: usize = code
            .parse()
            .map_err(|_| ingest(line, format!("bad action code in {entry:?}")))?;
        if code >= labels.len() {
            labels.resize(code + 1, None);
        }
        if labels[code].replace(label.to_string()).is_some() {
            return Err(ingest(line, format!("action code {code} assigned twice")));
        }
    }
    let labels = labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.ok_or_else(|| ingest(line, format!("action code {i} missing"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Some((var, labels)))
}
