//! Command reports: a JSON object with sorted keys, and a plain-text rendering of it.

use std::collections::BTreeMap;
use std::fmt::Write;

use dgforge_core::dg::HomologyTable;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Input {
    pub name: String,
    pub kind: String,
    /// SHA-256 of the canonical form of the document.
    pub sha256: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<Input>,
    pub parameters: BTreeMap<String, Value>,
    pub certificates: BTreeMap<String, bool>,
    pub tables: BTreeMap<String, Value>,
    pub verified_ranges: Vec<(i64, i64)>,
    /// Documents produced by the command, in canonical form.
    pub documents: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.to_string(), ..Default::default() }
    }

    pub fn param(&mut self, k: &str, v: impl Serialize) -> &mut Self {
        self.parameters.insert(k.into(), serde_json::to_value(v).expect("serializable"));
        self
    }

    pub fn cert(&mut self, k: &str, v: bool) -> &mut Self {
        self.certificates.insert(k.into(), v);
        self
    }

    pub fn table(&mut self, k: &str, v: impl Serialize) -> &mut Self {
        self.tables.insert(k.into(), serde_json::to_value(v).expect("serializable"));
        self
    }

    pub fn document(&mut self, k: &str, v: Value) -> &mut Self {
        self.documents.insert(k.into(), v);
        self
    }

    pub fn all_certified(&self) -> bool {
        self.certificates.values().all(|&b| b)
    }

    pub fn to_json(&self) -> String {
        crate::doc::to_canonical(&serde_json::to_value(self).expect("reports serialize"))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "dgforge {}", self.command).unwrap();
        if !self.inputs.is_empty() {
            writeln!(out, "\ninputs").unwrap();
            let rows: Vec<Vec<String>> =
                self.inputs.iter().map(|i| vec![i.name.clone(), i.kind.clone(), i.sha256[..12].to_string()]).collect();
            columns(&mut out, 2, &rows);
        }
        if !self.parameters.is_empty() {
            writeln!(out, "\nparameters").unwrap();
            let rows: Vec<Vec<String>> = self.parameters.iter().map(|(k, v)| vec![k.clone(), scalar(v)]).collect();
            columns(&mut out, 2, &rows);
        }
        if !self.certificates.is_empty() {
            writeln!(out, "\ncertificates").unwrap();
            let rows: Vec<Vec<String>> = self
                .certificates
                .iter()
                .map(|(k, &v)| vec![if v { "ok" } else { "FAIL" }.to_string(), k.clone()])
                .collect();
            columns(&mut out, 2, &rows);
        }
        if !self.verified_ranges.is_empty() {
            let r: Vec<String> = self.verified_ranges.iter().map(|(a, b)| format!("{a}..{b}")).collect();
            writeln!(out, "\nverified ranges: {}", r.join(", ")).unwrap();
        }
        for (k, v) in &self.tables {
            writeln!(out, "\n{k}").unwrap();
            render(&mut out, 2, v);
        }
        if !self.documents.is_empty() {
            writeln!(out, "\ndocuments").unwrap();
            let rows: Vec<Vec<String>> = self.documents.iter().map(|(k, v)| vec![k.clone(), summary(v)]).collect();
            columns(&mut out, 2, &rows);
        }
        out
    }
}

fn summary(doc: &Value) -> String {
    let len = |k: &str| doc.get(k).and_then(Value::as_array).map_or(0, Vec::len);
    if doc.get("cells").is_some() {
        format!("twisted complex, {} cells", len("cells"))
    } else if doc.get("algebra").is_some() {
        format!("module, dimension {}", len("basis"))
    } else {
        format!("algebra, dimension {}", len("basis"))
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(a) if a.iter().all(is_scalar) => {
            format!("[{}]", a.iter().map(scalar).collect::<Vec<_>>().join(", "))
        }
        v => v.to_string(),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(is_scalar),
        v => is_scalar(v),
    }
}

fn columns(out: &mut String, indent: usize, rows: &[Vec<String>]) {
    let n = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..n).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    for r in rows {
        let mut line = " ".repeat(indent);
        for (c, cell) in r.iter().enumerate() {
            if c + 1 == r.len() {
                line.push_str(cell);
            } else {
                line.push_str(&format!("{cell:<w$}  ", w = widths[c]));
            }
        }
        writeln!(out, "{}", line.trim_end()).unwrap();
    }
}

fn render(out: &mut String, indent: usize, v: &Value) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            let (simple, nested): (Vec<_>, Vec<_>) = map.iter().partition(|(_, v)| flat(v));
            let rows: Vec<Vec<String>> = simple.iter().map(|(k, v)| vec![(*k).clone(), scalar(v)]).collect();
            columns(out, indent, &rows);
            for (k, v) in nested {
                writeln!(out, "{pad}{k}").unwrap();
                render(out, indent + 2, v);
            }
        }
        Value::Array(items) if items.is_empty() => writeln!(out, "{pad}(none)").unwrap(),
        Value::Array(items) if items.iter().all(|i| i.as_object().is_some_and(|o| o.values().all(flat))) => {
            let mut keys: Vec<&String> = Vec::new();
            for i in items {
                for k in i.as_object().unwrap().keys() {
                    if !keys.contains(&k) {
                        keys.push(k);
                    }
                }
            }
            let mut rows = vec![keys.iter().map(|k| (*k).clone()).collect::<Vec<_>>()];
            for i in items {
                rows.push(keys.iter().map(|k| i.get(k.as_str()).map_or("-".into(), scalar)).collect());
            }
            columns(out, indent, &rows);
        }
        Value::Array(items) if items.iter().all(is_scalar) => writeln!(out, "{pad}{}", scalar(v)).unwrap(),
        Value::Array(items) if items.iter().all(flat) => {
            for i in items {
                writeln!(out, "{pad}{}", scalar(i)).unwrap();
            }
        }
        Value::Array(items) => {
            for (n, i) in items.iter().enumerate() {
                writeln!(out, "{pad}[{n}]").unwrap();
                render(out, indent + 2, i);
            }
        }
        v => writeln!(out, "{pad}{}", scalar(v)).unwrap(),
    }
}

/// `{idempotents, rows: [{degree, dims, total}]}`
pub fn homology_table(h: &HomologyTable, idempotents: &[String]) -> Value {
    let rows: Vec<Value> =
        h.rows().iter().map(|(p, dims)| json!({ "degree": p, "dims": dims, "total": dims.iter().sum::<usize>() })).collect();
    json!({ "idempotents": idempotents, "rows": rows })
}
