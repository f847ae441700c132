//! Tree JSON and Graphviz DOT.
//!
//! JSON layout: `{"arity": d, "vars": [...], "root": node}` where a node is
//! one of
//!
//! ```text
//! {"kind": "inner", "var": i, "op": "ge", "const": c, "sat": node, "unsat": node}
//! {"kind": "leaf", "answer": true}
//! {"kind": "classifier", "w": [...], "b": b}
//! ```
//!
//! Floats are written in shortest round-trip form, so export is byte-stable.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use super::{DecisionTree, Node};
use crate::dataset::Label;
use crate::error::{Error, Result};
use crate::numeric::LinearClassifier;
use crate::predicate::{Op, Predicate};

#[derive(Serialize)]
struct TreeOut<'a> {
    arity: usize,
    vars: &'a [String],
    root: NodeOut<'a>,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum NodeOut<'a> {
    Inner {
        var: usize,
        op: &'static str,
        #[serde(rename = "const")]
        constant: u64,
        sat: Box<NodeOut<'a>>,
        unsat: Box<NodeOut<'a>>,
    },
    Leaf {
        answer: bool,
    },
    Classifier {
        w: &'a [f64],
        b: f64,
    },
}

impl<'a> From<&'a Node> for NodeOut<'a> {
    fn from(n: &'a Node) -> Self {
        match n {
            Node::Inner { predicate, sat, unsat } => NodeOut::Inner {
                var: predicate.var,
                op: predicate.op.name(),
                constant: predicate.constant,
                sat: Box::new(sat.as_ref().into()),
                unsat: Box::new(unsat.as_ref().into()),
            },
            Node::Leaf(l) => NodeOut::Leaf { answer: l.is_yes() },
            Node::Classifier(c) => NodeOut::Classifier { w: &c.w, b: c.b },
        }
    }
}

fn parse_err(path: &str, message: impl Into<String>) -> Error {
    Error::TreeParse { path: path.to_string(), message: message.into() }
}

fn field<'v>(obj: &'v Map<String, Value>, key: &str, path: &str) -> Result<&'v Value> {
    obj.get(key).ok_or_else(|| parse_err(path, format!("missing field `{key}`")))
}

fn as_u64(v: &Value, path: &str, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| parse_err(path, format!("`{what}` must be a natural number")))
}

fn as_f64(v: &Value, path: &str, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| parse_err(path, format!("`{what}` must be a number")))
}

fn only_keys(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(parse_err(path, format!("unexpected field `{k}`"))),
        None => Ok(()),
    }
}

fn parse_node(v: &Value, path: &str, arity: usize) -> Result<Node> {
    let obj = v.as_object().ok_or_else(|| parse_err(path, "node must be an object"))?;
    let kind = field(obj, "kind", path)?
        .as_str()
        .ok_or_else(|| parse_err(path, "`kind` must be a string"))?;
    match kind {
        "inner" => {
            only_keys(obj, &["kind", "var", "op", "const", "sat", "unsat"], path)?;
            let var = as_u64(field(obj, "var", path)?, path, "var")? as usize;
            if var >= arity {
                return Err(parse_err(path, format!("variable index {var} out of range for arity {arity}")));
            }
            let op_name = field(obj, "op", path)?
                .as_str()
                .ok_or_else(|| parse_err(path, "`op` must be a string"))?;
            let op = Op::from_name(op_name).ok_or_else(|| parse_err(path, format!("unknown op `{op_name}`")))?;
            let constant = as_u64(field(obj, "const", path)?, path, "const")?;
            let sat = parse_node(field(obj, "sat", path)?, &format!("{path}.sat"), arity)?;
            let unsat = parse_node(field(obj, "unsat", path)?, &format!("{path}.unsat"), arity)?;
            Ok(Node::inner(Predicate::new(var, op, constant), sat, unsat))
        }
        "leaf" => {
            only_keys(obj, &["kind", "answer"], path)?;
            let answer = field(obj, "answer", path)?
                .as_bool()
                .ok_or_else(|| parse_err(path, "`answer` must be a boolean"))?;
            Ok(Node::Leaf(Label::from_bool(answer)))
        }
        "classifier" => {
            only_keys(obj, &["kind", "w", "b"], path)?;
            let w = field(obj, "w", path)?
                .as_array()
                .ok_or_else(|| parse_err(path, "`w` must be an array"))?
                .iter()
                .map(|x| as_f64(x, path, "w"))
                .collect::<Result<Vec<f64>>>()?;
            if w.len() != arity {
                return Err(parse_err(path, format!("`w` has {} entries, expected {arity}", w.len())));
            }
            let b = as_f64(field(obj, "b", path)?, path, "b")?;
            let c = LinearClassifier::new(w, b).map_err(|e| parse_err(path, e.to_string()))?;
            Ok(Node::Classifier(c))
        }
        other => Err(parse_err(path, format!("unknown node kind `{other}`"))),
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl DecisionTree {
    pub fn to_json(&self) -> String {
        let out = TreeOut { arity: self.arity(), vars: &self.vars, root: (&self.root).into() };
        let mut s = serde_json::to_string_pretty(&out).expect("tree serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<DecisionTree> {
        let v: Value = serde_json::from_str(text)?;
        let obj = v.as_object().ok_or_else(|| parse_err("$", "tree must be an object"))?;
        only_keys(obj, &["arity", "vars", "root"], "$")?;
        let arity = as_u64(field(obj, "arity", "$")?, "$", "arity")? as usize;
        let vars = field(obj, "vars", "$")?
            .as_array()
            .ok_or_else(|| parse_err("$", "`vars` must be an array"))?
            .iter()
            .map(|n| n.as_str().map(str::to_string).ok_or_else(|| parse_err("$", "`vars` must hold strings")))
            .collect::<Result<Vec<String>>>()?;
        if vars.len() != arity {
            return Err(parse_err("$", format!("{} variable names for arity {arity}", vars.len())));
        }
        let root = parse_node(field(obj, "root", "$")?, "root", arity)?;
        DecisionTree::new(vars, root)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<DecisionTree> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        Ok(std::fs::write(path, self.to_json())?)
    }

    /// Graphviz rendering; `sat` edges solid, `unsat` edges dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph tree {\n    node [fontname=\"monospace\"];\n");
        let mut next = 0;
        self.dot_node(&self.root, &mut next, &mut out);
        out.push_str("}\n");
        out
    }

    fn dot_node(&self, n: &Node, next: &mut usize, out: &mut String) -> usize {
        let id = *next;
        *next += 1;
        match n {
            Node::Inner { predicate, sat, unsat } => {
                let label = predicate.display_with(&self.vars).to_string();
                writeln!(out, "    n{id} [shape=box, label=\"{}\"];", dot_escape(&label)).unwrap();
                let s = self.dot_node(sat, next, out);
                writeln!(out, "    n{id} -> n{s} [style=solid];").unwrap();
                let u = self.dot_node(unsat, next, out);
                writeln!(out, "    n{id} -> n{u} [style=dashed];").unwrap();
            }
            Node::Leaf(l) => {
                writeln!(out, "    n{id} [shape=ellipse, label=\"{l}\"];").unwrap();
            }
            Node::Classifier(c) => {
                let terms: Vec<String> =
                    c.w.iter().zip(&self.vars).map(|(w, v)| format!("{w}*{v}")).collect();
                let label = format!("yes iff {} >= {}", terms.join(" + "), c.b);
                writeln!(out, "    n{id} [shape=ellipse, label=\"{}\"];", dot_escape(&label)).unwrap();
            }
        }
        id
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> DecisionTree {
        let c = LinearClassifier::new(vec![-1.0, 0.1, 1.0 / 3.0], 0.0).unwrap();
        let root = Node::inner(
            Predicate::new(2, Op::Eq, 0),
            Node::Classifier(c),
            Node::inner(Predicate::new(0, Op::Lt, 4), Node::yes(), Node::no()),
        );
        DecisionTree::new(vec!["pendingA".into(), "pendingB".into(), "act".into()], root).unwrap()
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let t = sample();
        let text = t.to_json();
        let back = DecisionTree::from_json(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_json(), text);
        assert!(text.contains("\"kind\": \"classifier\""));
        assert!(text.contains("\"const\": 0"));
    }

    #[test]
    fn floats_survive_parsing_exactly() {
        // needs correctly rounded parsing, not the fast approximate path
        let c = LinearClassifier::new(vec![0.6666666666666666, 0.0], 1.6666666666666663).unwrap();
        let t = DecisionTree::new(vec!["a".into(), "b".into()], Node::Classifier(c)).unwrap();
        assert_eq!(DecisionTree::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn parse_errors_carry_node_paths() {
        let bad = r#"{"arity":1,"vars":["x"],"root":{"kind":"inner","var":0,"op":"ge","const":1,
            "sat":{"kind":"leaf","answer":true},
            "unsat":{"kind":"inner","var":0,"op":"ge","const":2,
                     "sat":{"kind":"leaf","answer":"no"},"unsat":{"kind":"leaf","answer":false}}}}"#;
        match DecisionTree::from_json(bad) {
            Err(Error::TreeParse { path, .. }) => assert_eq!(path, "root.unsat.sat"),
            other => panic!("{other:?}"),
        }
        let bad_op = r#"{"arity":1,"vars":["x"],"root":{"kind":"inner","var":0,"op":"~","const":1,
            "sat":{"kind":"leaf","answer":true},"unsat":{"kind":"leaf","answer":false}}}"#;
        assert!(matches!(DecisionTree::from_json(bad_op), Err(Error::TreeParse { .. })));
        assert!(DecisionTree::from_json("{").is_err());
        let bad_arity = r#"{"arity":2,"vars":["x"],"root":{"kind":"leaf","answer":true}}"#;
        assert!(DecisionTree::from_json(bad_arity).is_err());
    }

    #[test]
    fn dot_labels() {
        let dot = sample().to_dot();
        assert!(dot.contains("label=\"act = 0\""));
        assert!(dot.contains("label=\"pendingA < 4\""));
        assert!(dot.contains("yes iff -1*pendingA + 0.1*pendingB + 0.3333333333333333*act >= 0"));
        assert!(dot.contains("style=dashed"));
        assert!(dot.contains("style=solid"));
    }
}
