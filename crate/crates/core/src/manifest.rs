//! Batches of checks written one per line as `<kind> <args...>`.
//!
//! | kind | arguments |
//! |---|---|
//! | `expect-holds` | `<class> "<u = v>"` |
//! | `expect-fails` | `<class> "<u = v>" [witness="x=b y=c"]` |
//! | `expect-isoterm-verdict` | `<class> <word> not-isoterm\|certified\|bounded-only\|not-refuted [witness=<word>]` |
//! | `expect-member-verdict` | `<A> <class> member\|not-member\|unknown [witness="<u = v>"]` |
//! | `expect-derivation-valid` | `<script> [proves="<u = v>"]` |
//! | `expect-order` | `<monoid> <n>` |
//! | `expect-iso` | `<monoid> <monoid> [anti]` |
//! | `expect-lattice` | `<figure> [depth=<d>] [nodes=<n>] [confirmed]` |
//!
//! A class is one or more monoids joined with `+`; a monoid is a catalog
//! name or a path ending in `.monoid`. Words may be written as family calls
//! such as `wn_xyxy(3)`, `"wn_xyxy'(3)"` (quoted for the prime),
//! `wn_zimin(4)` or `zimin(2)`. A script is `golden:<name>` or a path to a
//! JSON file. Paths are relative to the manifest. `#` starts a comment.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::deduction::{golden, DerivationScript};
use crate::equations::{
    evaluate, isoterm_class, isoterm_falsify, member_class, satisfies_class, IsotermBudget, IsotermVerdict,
    MemberCaps, MemberVerdict, DEFAULT_BUDGET,
};
use crate::error::{Error, Result};
use crate::lattice::{load_figure, semantic_check_all, validate_lattice, SemanticCaps};
use crate::monoids::{catalog, find_isomorphism, parse_monoid_file, FiniteMonoid};
use crate::words::{parse_identity, parse_word, wn_xyxy, wn_zimin, zimin, Identity, Variable, Word};

/// The built-in manifest run by `verify-paper`.
pub const DEFAULT_MANIFEST: &str = include_str!("../data/paper.manifest");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsotermExpect {
    NotIsoterm,
    Certified,
    BoundedOnly,
    /// Only the falsifier runs; it must not find a witness.
    NotRefuted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MemberExpect {
    Member,
    NotMember,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Check {
    ExpectHolds {
        class: Vec<String>,
        identity: Identity,
    },
    ExpectFails {
        class: Vec<String>,
        identity: Identity,
        witness: Option<Vec<(Variable, String)>>,
    },
    ExpectIsotermVerdict {
        class: Vec<String>,
        word: Word,
        expected: IsotermExpect,
        witness: Option<Word>,
    },
    ExpectMemberVerdict {
        candidate: String,
        class: Vec<String>,
        expected: MemberExpect,
        witness: Option<Identity>,
    },
    ExpectDerivationValid {
        script: String,
        proves: Option<Identity>,
    },
    ExpectOrder {
        monoid: String,
        order: usize,
    },
    ExpectIso {
        a: String,
        b: String,
        anti: bool,
    },
    ExpectLattice {
        figure: String,
        depth: usize,
        nodes: Option<usize>,
        confirmed: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ManifestEntry {
    pub index: usize,
    pub line: usize,
    pub text: String,
    pub check: Check,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryResult {
    pub index: usize,
    pub line: usize,
    pub text: String,
    pub passed: bool,
    pub detail: String,
    pub evidence: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ManifestReport {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub entries: Vec<EntryResult>,
}

impl ManifestReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise")
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let tag = if e.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("[{tag}] #{} (line {}) {}\n", e.index + 1, e.line, e.text));
            if !e.passed || !e.detail.is_empty() {
                out.push_str(&format!("       {}\n", e.detail));
            }
        }
        out.push_str(&format!("{} entries: {} passed, {} failed\n", self.total, self.passed, self.failed));
        out
    }
}

/// Resolves a word argument, expanding the family calls.
pub fn resolve_word(text: &str) -> Result<Word> {
    let call = text.strip_suffix(')').and_then(|t| t.split_once('('));
    if let Some((name, arg)) = call {
        if let Ok(n) = arg.trim().parse::<usize>() {
            match name.trim() {
                "wn_xyxy" => return wn_xyxy(n, false),
                "wn_xyxy'" => return wn_xyxy(n, true),
                "wn_zimin" => return wn_zimin(n, false),
                "wn_zimin'" => return wn_zimin(n, true),
                "zimin" => return zimin(n),
                _ => {}
            }
        }
    }
    Ok(parse_word(text)?)
}

/// A catalog name, or a monoid file when the text ends in `.monoid`.
pub fn resolve_monoid(text: &str, base: &Path) -> Result<FiniteMonoid> {
    if text.ends_with(".monoid") {
        let path = base.join(text);
        let body = std::fs::read_to_string(&path).map_err(|e| Error::io(path.display().to_string(), e))?;
        return parse_monoid_file(&body);
    }
    catalog(text)
}

/// Splits `A+B+C` into the generators of a join.
pub fn resolve_class(names: &[String], base: &Path) -> Result<Vec<FiniteMonoid>> {
    names.iter().map(|n| resolve_monoid(n, base)).collect()
}

fn split_class(text: &str) -> Vec<String> {
    text.split('+').map(|s| s.trim().to_owned()).filter(|s| !s.is_empty()).collect()
}

/// `x=b y=c` as a list of variable and element label.
pub fn parse_assignment(text: &str) -> Result<Vec<(Variable, String)>> {
    text.split_whitespace()
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("assignment item {kv:?} is not var=label")))?;
            let var = Variable::try_new(k).ok_or_else(|| Error::invalid(format!("bad variable {k:?}")))?;
            Ok((var, v.to_owned()))
        })
        .collect()
}

fn parse_entry(tokens: &[String]) -> Result<Check> {
    let kind = tokens[0].as_str();
    let mut positional = Vec::new();
    let mut opts: HashMap<&str, &str> = HashMap::new();
    let mut flags = Vec::new();
    for t in &tokens[1..] {
        match t.split_once('=') {
            Some((k, v)) if matches!(k, "witness" | "proves" | "depth" | "nodes") => {
                opts.insert(k, v);
            }
            _ if matches!(t.as_str(), "anti" | "confirmed") => flags.push(t.as_str()),
            _ => positional.push(t.as_str()),
        }
    }
    let arity = |n: usize| {
        if positional.len() == n {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "{kind} takes {n} positional arguments, found {}",
                positional.len()
            )))
        }
    };
    let number = |s: &str| s.parse::<usize>().map_err(|_| Error::invalid(format!("{s:?} is not a number")));
    Ok(match kind {
        "expect-holds" => {
            arity(2)?;
            Check::ExpectHolds {
                class: split_class(positional[0]),
                identity: parse_identity(positional[1])?,
            }
        }
        "expect-fails" => {
            arity(2)?;
            Check::ExpectFails {
                class: split_class(positional[0]),
                identity: parse_identity(positional[1])?,
                witness: opts.get("witness").map(|w| parse_assignment(w)).transpose()?,
            }
        }
        "expect-isoterm-verdict" => {
            arity(3)?;
            let expected = match positional[2] {
                "not-isoterm" => IsotermExpect::NotIsoterm,
                "certified" => IsotermExpect::Certified,
                "bounded-only" => IsotermExpect::BoundedOnly,
                "not-refuted" => IsotermExpect::NotRefuted,
                other => return Err(Error::invalid(format!("unknown isoterm verdict {other:?}"))),
            };
            Check::ExpectIsotermVerdict {
                class: split_class(positional[0]),
                word: resolve_word(positional[1])?,
                expected,
                witness: opts.get("witness").map(|w| resolve_word(w)).transpose()?,
            }
        }
        "expect-member-verdict" => {
            arity(3)?;
            let expected = match positional[2] {
                "member" => MemberExpect::Member,
                "not-member" => MemberExpect::NotMember,
                "unknown" => MemberExpect::Unknown,
                other => return Err(Error::invalid(format!("unknown member verdict {other:?}"))),
            };
            Check::ExpectMemberVerdict {
                candidate: positional[0].to_owned(),
                class: split_class(positional[1]),
                expected,
                witness: opts.get("witness").map(|w| parse_identity(w)).transpose()?,
            }
        }
        "expect-derivation-valid" => {
            arity(1)?;
            Check::ExpectDerivationValid {
                script: positional[0].to_owned(),
                proves: opts.get("proves").map(|w| parse_identity(w)).transpose()?,
            }
        }
        "expect-order" => {
            arity(2)?;
            Check::ExpectOrder {
                monoid: positional[0].to_owned(),
                order: number(positional[1])?,
            }
        }
        "expect-iso" => {
            arity(2)?;
            Check::ExpectIso {
                a: positional[0].to_owned(),
                b: positional[1].to_owned(),
                anti: flags.contains(&"anti"),
            }
        }
        "expect-lattice" => {
            arity(1)?;
            Check::ExpectLattice {
                figure: positional[0].to_owned(),
                depth: opts.get("depth").map(|d| number(d)).transpose()?.unwrap_or(crate::lattice::DEFAULT_DEPTH),
                nodes: opts.get("nodes").map(|d| number(d)).transpose()?,
                confirmed: flags.contains(&"confirmed"),
            }
        }
        other => return Err(Error::invalid(format!("unknown entry kind {other:?}"))),
    })
}

/// Parses every line; any error aborts with its line number.
pub fn parse_manifest(text: &str) -> Result<Vec<ManifestEntry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fail = |e: Error| Error::invalid(format!("manifest line {}: {e}", i + 1));
        let tokens = shlex::split(line).ok_or_else(|| fail(Error::invalid("unbalanced quotes")))?;
        let check = parse_entry(&tokens).map_err(fail)?;
        out.push(ManifestEntry {
            index: out.len(),
            line: i + 1,
            text: line.to_owned(),
            check,
        });
    }
    Ok(out)
}

struct Outcome {
    passed: bool,
    detail: String,
    evidence: Value,
}

fn outcome(passed: bool, detail: impl Into<String>, evidence: Value) -> Result<Outcome> {
    Ok(Outcome {
        passed,
        detail: detail.into(),
        evidence,
    })
}

fn load_script(name: &str, base: &Path) -> Result<DerivationScript> {
    match name.strip_prefix("golden:") {
        Some(g) => golden::script(g),
        None => {
            let path = base.join(name);
            let body = std::fs::read_to_string(&path).map_err(|e| Error::io(path.display().to_string(), e))?;
            DerivationScript::from_json(&body)
        }
    }
}

fn execute(check: &Check, base: &Path) -> Result<Outcome> {
    match check {
        Check::ExpectHolds { class, identity } => {
            let ms = resolve_class(class, base)?;
            let r = satisfies_class(&ms, identity, DEFAULT_BUDGET)?;
            let detail = match &r.witness {
                Some(w) => format!("fails: {w}"),
                None => "holds".into(),
            };
            outcome(r.holds, detail, json!(r))
        }
        Check::ExpectFails {
            class,
            identity,
            witness,
        } => {
            let ms = resolve_class(class, base)?;
            let r = satisfies_class(&ms, identity, DEFAULT_BUDGET)?;
            if r.holds {
                return outcome(false, "holds", json!(r));
            }
            let found = r.witness.as_ref().map(|w| w.to_string()).unwrap_or_default();
            let Some(given) = witness else {
                return outcome(true, format!("fails: {found}"), json!(r));
            };
            // the given assignment must separate the sides in some member of the class
            let refutes = ms.iter().find_map(|m| {
                let theta: Option<BTreeMap<Variable, usize>> =
                    given.iter().map(|(v, l)| m.index_of(l).map(|i| (*v, i))).collect();
                let theta = theta?;
                let a = evaluate(m, &identity.lhs, &theta).ok()?;
                let b = evaluate(m, &identity.rhs, &theta).ok()?;
                (a != b).then(|| format!("{} != {} in {}", m.label(a), m.label(b), m.name))
            });
            match refutes {
                Some(d) => outcome(true, format!("given witness gives {d}"), json!(r)),
                None => outcome(false, format!("given witness does not separate; found {found}"), json!(r)),
            }
        }
        Check::ExpectIsotermVerdict {
            class,
            word,
            expected,
            witness,
        } => {
            let ms = resolve_class(class, base)?;
            let budget = IsotermBudget::default();
            if *expected == IsotermExpect::NotRefuted {
                let r = isoterm_falsify(&ms, word, &budget)?;
                let detail = match &r.witness {
                    Some(w) => format!("refuted by {w}"),
                    None => format!(
                        "no witness among {} candidates; decided up to length {}",
                        r.candidates, r.decided_length
                    ),
                };
                return outcome(r.witness.is_none(), detail, json!(r));
            }
            let v = isoterm_class(&ms, word, &budget)?;
            let got = match &v {
                IsotermVerdict::NotIsoterm { .. } => IsotermExpect::NotIsoterm,
                IsotermVerdict::Certified { .. } => IsotermExpect::Certified,
                IsotermVerdict::BoundedOnly { .. } => IsotermExpect::BoundedOnly,
            };
            let mut passed = got == *expected;
            let mut detail = format!("{v:?}");
            if let (true, Some(w)) = (passed, witness) {
                let holds = w != word && satisfies_class(&ms, &Identity::new(word.clone(), w.clone()), DEFAULT_BUDGET)?.holds;
                passed = holds;
                detail.push_str(&format!("; given witness {w} {}", if holds { "re-verifies" } else { "does not hold" }));
            }
            outcome(passed, detail, json!(v))
        }
        Check::ExpectMemberVerdict {
            candidate,
            class,
            expected,
            witness,
        } => {
            let a = resolve_monoid(candidate, base)?;
            let ms = resolve_class(class, base)?;
            let v = member_class(&a, &ms, &MemberCaps::default())?;
            let got = match &v {
                MemberVerdict::Member { .. } => MemberExpect::Member,
                MemberVerdict::NotMember { .. } => MemberExpect::NotMember,
                MemberVerdict::Unknown { .. } => MemberExpect::Unknown,
            };
            let mut passed = got == *expected;
            let mut detail = format!("{v:?}");
            if let MemberVerdict::NotMember { witness: found } = &v {
                let recheck = satisfies_class(&ms, found, DEFAULT_BUDGET)?.holds
                    && !satisfies_class(std::slice::from_ref(&a), found, DEFAULT_BUDGET)?.holds;
                passed &= recheck;
                detail.push_str(if recheck { "; witness re-verifies" } else { "; witness does not re-verify" });
                if let Some(w) = witness {
                    passed &= w == found;
                }
            }
            outcome(passed, detail, json!(v))
        }
        Check::ExpectDerivationValid { script, proves } => {
            let s = load_script(script, base)?;
            match s.check()? {
                Ok(proved) => {
                    let ok = proves.as_ref().is_none_or(|p| p.same_up_to_orientation(&proved));
                    outcome(
                        ok,
                        format!("{} steps prove {proved}", s.steps.len()),
                        json!({ "proved": proved, "steps": s.steps.len() }),
                    )
                }
                Err(f) => outcome(false, format!("step {}: {}", f.index, f.reason), json!(f)),
            }
        }
        Check::ExpectOrder { monoid, order } => {
            let m = resolve_monoid(monoid, base)?;
            outcome(m.order() == *order, format!("order {}", m.order()), json!({ "order": m.order() }))
        }
        Check::ExpectIso { a, b, anti } => {
            let (ma, mb) = (resolve_monoid(a, base)?, resolve_monoid(b, base)?);
            match find_isomorphism(&ma, &mb, *anti) {
                Some(iso) => {
                    let ok = iso.verify(&ma, &mb);
                    let pairs: Vec<String> = iso
                        .map
                        .iter()
                        .enumerate()
                        .map(|(i, &j)| format!("{}->{}", ma.label(i), mb.label(j)))
                        .collect();
                    outcome(ok, pairs.join(" "), json!(iso))
                }
                None => outcome(false, "no isomorphism", Value::Null),
            }
        }
        Check::ExpectLattice {
            figure,
            depth,
            nodes,
            confirmed,
        } => {
            let p = load_figure(figure, *depth)?;
            let r = validate_lattice(&p);
            let mut passed = r.is_lattice && nodes.is_none_or(|n| n == p.len());
            let mut detail = format!("{} nodes, {} covers, lattice: {}", r.nodes, r.covers, r.is_lattice);
            let mut edges = Value::Null;
            if *confirmed {
                let checks = semantic_check_all(&p, &SemanticCaps::default())?;
                let ok = checks.iter().filter(|c| c.verdict.is_confirmed()).count();
                passed &= ok == checks.len();
                detail.push_str(&format!(", {ok}/{} edges confirmed", checks.len()));
                edges = json!(checks);
            }
            outcome(passed, detail, json!({ "report": r, "edges": edges }))
        }
    }
}

/// Runs parsed entries in parallel; the report keeps entry order.
pub fn run_entries(entries: &[ManifestEntry], base: &Path) -> ManifestReport {
    let results: Vec<EntryResult> = entries
        .par_iter()
        .map(|e| {
            let o = execute(&e.check, base).unwrap_or_else(|err| Outcome {
                passed: false,
                detail: format!("error: {err}"),
                evidence: Value::Null,
            });
            EntryResult {
                index: e.index,
                line: e.line,
                text: e.text.clone(),
                passed: o.passed,
                detail: o.detail,
                evidence: o.evidence,
            }
        })
        .collect();
    let passed = results.iter().filter(|r| r.passed).count();
    ManifestReport {
        total: results.len(),
        passed,
        failed: results.len() - passed,
        entries: results,
    }
}

pub fn run_manifest_text(text: &str, base: &Path) -> Result<ManifestReport> {
    Ok(run_entries(&parse_manifest(text)?, base))
}

pub fn run_manifest(path: &Path) -> Result<ManifestReport> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let base: PathBuf = path.parent().map(Path::to_path_buf).unwrap_or_default();
    run_manifest_text(&text, &base)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> ManifestReport {
        run_manifest_text(text, Path::new(".")).unwrap()
    }

    #[test]
    fn empty_manifest_passes() {
        let r = run("# nothing here\n\n");
        assert_eq!(r.total, 0);
        assert!(r.all_passed());
    }

    #[test]
    fn one_wrong_expectation() {
        let r = run("expect-order M(xy) 5\nexpect-order M(xy) 6\nexpect-holds E^1 \"x^3 = x^2\"\n");
        assert_eq!((r.passed, r.failed), (2, 1));
        assert!(!r.entries[1].passed);
        assert_eq!(r.entries.iter().map(|e| e.index).collect::<Vec<_>>(), [0, 1, 2]);
    }

    #[test]
    fn witnesses_are_checked() {
        let r = run(concat!(
            "expect-fails E^1 \"x^2 y^2 h x^2 y^2 = x^2 y^2 h y^2 x^2\" witness=\"x=b y=c h=a\"\n",
            "expect-fails E^1 \"x^2 y^2 h x^2 y^2 = x^2 y^2 h y^2 x^2\" witness=\"x=1 y=1 h=1\"\n",
            "expect-member-verdict L2^1 Q^1 not-member witness=\"x^2y^2 = y^2x^2\"\n",
            "expect-isoterm-verdict M(x) x^2 not-isoterm witness=x^3\n",
        ));
        let passed: Vec<bool> = r.entries.iter().map(|e| e.passed).collect();
        assert_eq!(passed, [true, false, true, true]);
    }

    #[test]
    fn parse_errors_abort() {
        assert!(parse_manifest("expect-order M(xy)\n").is_err());
        assert!(parse_manifest("expect-everything\n").is_err());
        let e = parse_manifest("expect-order M(x) 3\nexpect-holds E^1 \"x = \n").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
    }

    #[test]
    fn families_and_scripts() {
        assert_eq!(resolve_word("wn_xyxy(2)").unwrap(), wn_xyxy(2, false).unwrap());
        assert_eq!(resolve_word("wn_zimin'(3)").unwrap(), wn_zimin(3, true).unwrap());
        assert_eq!(resolve_word("xy").unwrap(), parse_word("xy").unwrap());
        let r = run("expect-derivation-valid golden:sigma-1-to-2 proves=\"x^2 h1 y^2 h2 x^2y^2 = x^2 h1 y^2 h2 y^2 x^2\"\n");
        assert!(r.all_passed(), "{}", r.summary());
    }

    #[test]
    fn parses_shipped_manifest() {
        let entries = parse_manifest(DEFAULT_MANIFEST).unwrap();
        assert!(entries.len() > 40);
    }
}
