use serde::{Deserialize, Serialize};

use super::FiniteMonoid;
use crate::error::{Error, Result};

/// Text form:
///
/// ```text
/// monoid <name>
/// elements <e1> ... <en>
/// identity <ei>        # omitted for semigroups
/// table
/// <n rows of n labels>
/// ```
pub fn write_monoid_file(m: &FiniteMonoid) -> String {
    let mut out = format!("monoid {}\nelements {}\n", m.name, m.elements.join(" "));
    if let Some(e) = m.identity {
        out.push_str(&format!("identity {}\n", m.elements[e]));
    }
    out.push_str("table\n");
    let width = m.elements.iter().map(String::len).max().unwrap_or(1);
    for row in &m.table {
        let cells: Vec<String> = row
            .iter()
            .map(|&c| format!("{:<width$}", m.elements[c]))
            .collect();
        out.push_str(cells.join(" ").trim_end());
        out.push('\n');
    }
    out
}

pub fn parse_monoid_file(text: &str) -> Result<FiniteMonoid> {
    let mut name = None;
    let mut elements: Option<Vec<String>> = None;
    let mut identity_label = None;
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut in_table = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| Error::invalid(format!("line {}: {msg}", lineno + 1));
        if in_table {
            rows.push(line.split_whitespace().map(str::to_owned).collect());
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match key {
            "monoid" => name = Some(rest.trim().to_owned()),
            "elements" => elements = Some(rest.split_whitespace().map(str::to_owned).collect()),
            "identity" => identity_label = Some(rest.trim().to_owned()),
            "table" => in_table = true,
            _ => return Err(err(&format!("unexpected keyword {key:?}"))),
        }
    }
    let elements = elements.ok_or_else(|| Error::invalid("missing 'elements' line"))?;
    let index = |l: &str| {
        elements
            .iter()
            .position(|e| e == l)
            .ok_or_else(|| Error::invalid(format!("unknown element label {l:?}")))
    };
    let identity = identity_label.as_deref().map(index).transpose()?;
    let table = rows
        .iter()
        .map(|r| r.iter().map(|c| index(c)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    FiniteMonoid::new(name.unwrap_or_else(|| "unnamed".into()), elements, identity, table)
}

/// JSON mirror of the text format, with labels in the table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidJson {
    pub name: String,
    pub elements: Vec<String>,
    pub identity: Option<String>,
    pub table: Vec<Vec<String>>,
}

impl From<&FiniteMonoid> for MonoidJson {
    fn from(m: &FiniteMonoid) -> Self {
        MonoidJson {
            name: m.name.clone(),
            elements: m.elements.clone(),
            identity: m.identity.map(|e| m.elements[e].clone()),
            table: m
                .table
                .iter()
                .map(|r| r.iter().map(|&c| m.elements[c].clone()).collect())
                .collect(),
        }
    }
}

impl TryFrom<MonoidJson> for FiniteMonoid {
    type Error = Error;

    fn try_from(j: MonoidJson) -> Result<Self> {
        let index = |l: &str| {
            j.elements
                .iter()
                .position(|e| e == l)
                .ok_or_else(|| Error::invalid(format!("unknown element label {l:?}")))
        };
        let identity = j.identity.as_deref().map(index).transpose()?;
        let table = j
            .table
            .iter()
            .map(|r| r.iter().map(|c| index(c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        FiniteMonoid::new(j.name.clone(), j.elements.clone(), identity, table)
    }
}

impl Serialize for FiniteMonoid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MonoidJson::from(self).serialize(s)
    }
}
