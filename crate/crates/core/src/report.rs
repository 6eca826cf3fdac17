//! Report documents and their text and key/value renderings.

use crate::metric::SLACK;

/// Shortest round-trip decimal form; `inf`, `-inf` and `nan` for non-finite
/// values, scientific notation outside `[1e-6, 1e15)`.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (1e-6..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Num(f64),
    Count(usize),
    Flag(bool),
    Text(String),
    Nums(Vec<f64>),
    Counts(Vec<usize>),
}

impl Value {
    fn render(&self) -> String {
        match self {
            Value::Num(v) => fmt_num(*v),
            Value::Count(c) => c.to_string(),
            Value::Flag(b) => b.to_string(),
            Value::Text(s) => s.clone(),
            Value::Nums(v) => v.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(","),
            Value::Counts(v) => v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
        }
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Count(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Flag(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl From<Vec<f64>> for Value {
    fn from(v: Vec<f64>) -> Self {
        Value::Nums(v)
    }
}

impl From<Vec<usize>> for Value {
    fn from(v: Vec<usize>) -> Self {
        Value::Counts(v)
    }
}

/// Direction of an audited inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// observed ≤ bound
    AtMost,
    /// observed ≥ bound
    AtLeast,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Entry {
    Value { key: String, value: Value, formula: String },
    Audit { key: String, observed: f64, relation: Relation, bound: f64, pass: bool, formula: String },
    Note(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportDocument {
    pub command: String,
    pub entries: Vec<Entry>,
}

impl ReportDocument {
    pub fn new(command: impl Into<String>) -> Self {
        Self { command: command.into(), entries: Vec::new() }
    }

    pub fn value(&mut self, key: &str, value: impl Into<Value>, formula: &str) {
        self.entries.push(Entry::Value { key: key.into(), value: value.into(), formula: formula.into() });
    }

    /// Records an inequality checked with the global slack.
    pub fn audit(&mut self, key: &str, observed: f64, relation: Relation, bound: f64, formula: &str) -> bool {
        let pass = match relation {
            Relation::AtMost => observed <= bound + SLACK,
            Relation::AtLeast => observed >= bound - SLACK,
        };
        self.audit_with(key, observed, relation, bound, pass, formula);
        pass
    }

    /// Records an inequality whose verdict was decided by the caller.
    pub fn audit_with(&mut self, key: &str, observed: f64, relation: Relation, bound: f64, pass: bool, formula: &str) {
        self.entries.push(Entry::Audit {
            key: key.into(),
            observed,
            relation,
            bound,
            pass,
            formula: formula.into(),
        });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.entries.push(Entry::Note(text.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| match e {
            Entry::Value { key: k, .. } | Entry::Audit { key: k, .. } => k == key,
            Entry::Note(_) => false,
        })
    }

    /// Numeric value of a `Value` entry or the observed side of an audit.
    pub fn number(&self, key: &str) -> Option<f64> {
        match self.get(key)? {
            Entry::Value { value: Value::Num(v), .. } => Some(*v),
            Entry::Value { value: Value::Count(c), .. } => Some(*c as f64),
            Entry::Audit { observed, .. } => Some(*observed),
            _ => None,
        }
    }

    pub fn passed(&self, key: &str) -> Option<bool> {
        match self.get(key)? {
            Entry::Audit { pass, .. } => Some(*pass),
            Entry::Value { value: Value::Flag(b), .. } => Some(*b),
            _ => None,
        }
    }

    pub fn audits_pass(&self) -> bool {
        self.entries.iter().all(|e| !matches!(e, Entry::Audit { pass: false, .. }))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        for e in &self.entries {
            match e {
                Entry::Value { key, value, formula } => {
                    out.push_str(&format!("{key} = {}    [{formula}]\n", value.render()));
                }
                Entry::Audit { key, observed, relation, bound, pass, formula } => {
                    let rel = match relation {
                        Relation::AtMost => "<=",
                        Relation::AtLeast => ">=",
                    };
                    out.push_str(&format!(
                        "audit {key}: {} {rel} {} {}    [{formula}]\n",
                        fmt_num(*observed),
                        fmt_num(*bound),
                        if *pass { "PASS" } else { "FAIL" }
                    ));
                }
                Entry::Note(text) => out.push_str(&format!("note: {text}\n")),
            }
        }
        out
    }

    pub fn to_kv(&self) -> String {
        let mut out = format!("command={}\n", self.command);
        let mut notes = 0;
        for e in &self.entries {
            match e {
                Entry::Value { key, value, formula } => {
                    out.push_str(&format!("{key}={}\n{key}.formula={formula}\n", value.render()));
                }
                Entry::Audit { key, observed, relation, bound, pass, formula } => {
                    let rel = match relation {
                        Relation::AtMost => "le",
                        Relation::AtLeast => "ge",
                    };
                    out.push_str(&format!(
                        "audit.{key}.observed={}\naudit.{key}.relation={rel}\naudit.{key}.bound={}\naudit.{key}.pass={pass}\naudit.{key}.formula={formula}\n",
                        fmt_num(*observed),
                        fmt_num(*bound),
                    ));
                }
                Entry::Note(text) => {
                    out.push_str(&format!("note.{notes}={text}\n"));
                    notes += 1;
                }
            }
        }
        out
    }
}
