//! Text form of a figure:
//!
//! ```text
//! poset <name>
//! nodes
//! <id> "<label>" [gen=A,B,...] [ids="<item>; <item>"]
//! family <stem> <start> "<label with $n>" ids="..." above=<id> below=<id>
//! covers
//! <lower> <upper>
//! ```
//!
//! An `ids` item is an identity `u = v`, a named system (see
//! [`bases::system`](crate::equations::bases::system)), `sigma_<n>` or
//! `sigma_inf`. A `family` line stands for the chain `<stem><start>`,
//! `<stem><start+1>`, ... up to the truncation depth, inserted between
//! `above` and `below`.

use std::collections::HashMap;

use super::{Poset, VarietyNode};
use crate::equations::bases;
use crate::error::{Error, Result};
use crate::words::{sigma, sigma_infinity, Identity};

struct Family {
    stem: String,
    start: usize,
    label: String,
    ids: String,
    above: String,
    below: String,
}

fn identities(spec: &str) -> Result<Vec<Identity>> {
    let mut out = Vec::new();
    for item in spec.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        if item.contains('=') {
            out.push(crate::words::parse_identity(item)?);
        } else if item == "sigma_inf" {
            out.push(sigma_infinity());
        } else if let Some(n) = item.strip_prefix("sigma_").and_then(|d| d.parse().ok()) {
            out.push(sigma(n)?);
        } else {
            out.extend(bases::system(item)?);
        }
    }
    Ok(out)
}

fn fields(tokens: &[String], line: usize) -> Result<HashMap<String, String>> {
    tokens
        .iter()
        .map(|t| {
            t.split_once('=')
                .map(|(k, v)| (k.to_owned(), v.to_owned()))
                .ok_or_else(|| Error::invalid(format!("line {line}: expected key=value, found {t:?}")))
        })
        .collect()
}

fn node(id: &str, label: &str, f: &HashMap<String, String>, ids_text: Option<&str>) -> Result<VarietyNode> {
    let generators = f
        .get("gen")
        .map(|g| g.split(',').map(|s| s.trim().to_owned()).filter(|s| !s.is_empty()).collect())
        .unwrap_or_default();
    let ids = match ids_text.or(f.get("ids").map(String::as_str)) {
        Some(t) => identities(t)?,
        None => Vec::new(),
    };
    Ok(VarietyNode {
        id: id.to_owned(),
        label: label.to_owned(),
        generators,
        identities: ids,
    })
}

/// Parses a figure file, expanding any family up to `depth` (the index of
/// the last chain member kept).
pub fn parse_poset(text: &str, depth: usize) -> Result<Poset> {
    #[derive(PartialEq)]
    enum Section {
        Head,
        Nodes,
        Covers,
    }
    let mut name = None;
    let mut section = Section::Head;
    let mut nodes: Vec<VarietyNode> = Vec::new();
    let mut cover_names: Vec<(String, String)> = Vec::new();
    let mut families: Vec<Family> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens =
            shlex::split(line).ok_or_else(|| Error::invalid(format!("line {lineno}: unbalanced quotes")))?;
        match (tokens[0].as_str(), &section) {
            ("poset", Section::Head) if tokens.len() == 2 => name = Some(tokens[1].clone()),
            ("nodes", _) => section = Section::Nodes,
            ("covers", _) => section = Section::Covers,
            ("family", Section::Nodes) if tokens.len() >= 4 => {
                let f = fields(&tokens[4..], lineno)?;
                let get = |k: &str| {
                    f.get(k)
                        .cloned()
                        .ok_or_else(|| Error::invalid(format!("line {lineno}: family needs {k}=")))
                };
                families.push(Family {
                    stem: tokens[1].clone(),
                    start: tokens[2]
                        .parse()
                        .map_err(|_| Error::invalid(format!("line {lineno}: bad family start")))?,
                    label: tokens[3].clone(),
                    ids: f.get("ids").cloned().unwrap_or_default(),
                    above: get("above")?,
                    below: get("below")?,
                });
            }
            (_, Section::Nodes) if tokens.len() >= 2 => {
                let f = fields(&tokens[2..], lineno)?;
                nodes.push(node(&tokens[0], &tokens[1], &f, None)?);
            }
            (_, Section::Covers) if tokens.len() == 2 => cover_names.push((tokens[0].clone(), tokens[1].clone())),
            _ => return Err(Error::invalid(format!("line {lineno}: unexpected {line:?}"))),
        }
    }
    let name = name.ok_or_else(|| Error::invalid("missing poset header"))?;
    for fam in &families {
        let mut prev = fam.above.clone();
        for n in fam.start..=depth {
            let id = format!("{}{n}", fam.stem);
            let label = fam.label.replace("$n", &n.to_string());
            let ids = fam.ids.replace("$n", &n.to_string());
            nodes.push(node(&id, &label, &HashMap::new(), Some(&ids))?);
            cover_names.push((prev, id.clone()));
            prev = id;
        }
        cover_names.push((prev, fam.below.clone()));
    }
    let index: HashMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (n.id.as_str(), i)).collect();
    if index.len() != nodes.len() {
        return Err(Error::invalid("duplicate node id"));
    }
    let covers = cover_names
        .iter()
        .map(|(a, b)| match (index.get(a.as_str()), index.get(b.as_str())) {
            (Some(&x), Some(&y)) => Ok((x, y)),
            _ => Err(Error::UnknownName(format!("node in cover {a} {b}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Poset { name, nodes, covers })
}
