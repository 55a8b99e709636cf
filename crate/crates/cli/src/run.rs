use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use isoterm_core::deduction::{
    derive_bounded, lambda_reduce, sigma_classify, to_canonical, DerivationScript, DeriveCaps, DeriveOutcome,
    NamedRule, SigmaClass,
};
use isoterm_core::equations::{
    isoterm_class, isoterm_falsify, member_class, satisfies_class, IsotermBudget, IsotermVerdict, MemberCaps,
    MemberVerdict, DEFAULT_BUDGET,
};
use isoterm_core::lattice::{dot_export, load_figure, semantic_check_all, validate_lattice, SemanticCaps};
use isoterm_core::manifest::{resolve_class, resolve_monoid, resolve_word, run_manifest, run_manifest_text, DEFAULT_MANIFEST};
use isoterm_core::monoids::{adjoin_identity, direct_product, rees_quotient, write_monoid_file, MonoidJson};
use isoterm_core::words::parse_identity;
use isoterm_core::{Error, Identity, Result};

use crate::{Command, LatticeCmd, MonoidCmd, SigmaCmd};

pub struct Output {
    pub code: u8,
    pub text: String,
    pub json: Value,
}

fn ok(text: String, json: Value) -> Result<Output> {
    Ok(Output { code: 0, text, json })
}

fn verdict(pass: bool, text: String, json: Value) -> Result<Output> {
    Ok(Output {
        code: if pass { 0 } else { 1 },
        text,
        json,
    })
}

/// Overflows and failed preconditions are answers about the input, not usage errors.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } | Error::CapExceeded(_) | Error::Precondition(_) => 1,
        _ => 2,
    }
}

fn class(text: &str) -> Result<Vec<isoterm_core::FiniteMonoid>> {
    let names: Vec<String> = text.split('+').map(|s| s.trim().to_owned()).collect();
    resolve_class(&names, Path::new("."))
}

fn identity(text: &str) -> Result<Identity> {
    Ok(parse_identity(text)?)
}

fn show(m: &isoterm_core::FiniteMonoid) -> Result<Output> {
    ok(write_monoid_file(m), json!(MonoidJson::from(m)))
}

pub fn dispatch(cmd: Command) -> Result<Output> {
    match cmd {
        Command::Monoid(m) => monoid(m),
        Command::Check { class: c, identity: id } => {
            let ms = class(&c)?;
            let id = identity(&id)?;
            let r = satisfies_class(&ms, &id, DEFAULT_BUDGET)?;
            let text = match &r.witness {
                None => format!("holds: {id}\n"),
                Some(w) => format!("fails: {id}\nwitness in {}: {w}\n", w.monoid),
            };
            verdict(r.holds, text, json!({ "identity": id, "result": r }))
        }
        Command::Isoterm {
            class: c,
            word,
            falsify_only,
        } => {
            let ms = class(&c)?;
            let w = resolve_word(&word)?;
            let budget = IsotermBudget::default();
            if falsify_only {
                let r = isoterm_falsify(&ms, &w, &budget)?;
                let text = match &r.witness {
                    Some(x) => format!("not an isoterm: {w} = {x}\n"),
                    None => format!(
                        "no witness found: {} candidates, all words up to length {} decided\n",
                        r.candidates, r.decided_length
                    ),
                };
                return verdict(r.witness.is_none(), text, json!(r));
            }
            let v = isoterm_class(&ms, &w, &budget)?;
            let text = match &v {
                IsotermVerdict::NotIsoterm { witness } => format!("not an isoterm: {w} = {witness}\n"),
                IsotermVerdict::Certified { free_elements } => {
                    format!("isoterm: certified in a relatively free monoid of {free_elements} elements\n")
                }
                IsotermVerdict::BoundedOnly { length_bound, reason } => {
                    format!("no witness up to length {length_bound}; not certified ({reason})\n")
                }
            };
            verdict(!v.is_not_isoterm(), text, json!(v))
        }
        Command::Member { a, b } => {
            let ma = resolve_monoid(&a, Path::new("."))?;
            let mb = class(&b)?;
            let v = member_class(&ma, &mb, &MemberCaps::default())?;
            let text = match &v {
                MemberVerdict::Member { free_elements } => {
                    format!("member: {a} is a quotient of a submonoid of a free object with {free_elements} elements\n")
                }
                MemberVerdict::NotMember { witness } => format!("not a member: {witness} holds in {b}, fails in {a}\n"),
                MemberVerdict::Unknown { reason } => format!("unknown: {reason}\n"),
            };
            verdict(matches!(v, MemberVerdict::Member { .. }), text, json!(v))
        }
        Command::Deduce {
            rules,
            identity: id,
            max_visited,
            max_len,
            script_out,
        } => {
            let text = std::fs::read_to_string(&rules).map_err(|e| Error::io(rules.display().to_string(), e))?;
            let named = NamedRule::parse_list(&text)?;
            let sigma: Vec<Identity> = named.iter().map(|r| r.identity.clone()).collect();
            let target = identity(&id)?;
            let caps = DeriveCaps {
                max_visited,
                max_len,
                ..DeriveCaps::default()
            };
            match derive_bounded(&sigma, &target, &caps)? {
                DeriveOutcome::Found(steps) => {
                    let mut out = String::new();
                    if let Some(first) = steps.first() {
                        writeln!(out, "{}", first.from).unwrap();
                    }
                    for s in &steps {
                        writeln!(out, "  = {}    [{} {:?}]", s.to, s.rule, s.direction).unwrap();
                    }
                    writeln!(out, "derived in {} steps", steps.len()).unwrap();
                    let script = DerivationScript::from_steps("deduce", named, &steps);
                    if let Some(path) = script_out {
                        std::fs::write(&path, script.to_json() + "\n")
                            .map_err(|e| Error::io(path.display().to_string(), e))?;
                    }
                    ok(out, serde_json::from_str(&script.to_json()).expect("script json"))
                }
                DeriveOutcome::Exhausted { visited } => verdict(
                    false,
                    format!("not derivable with words of length at most {max_len} ({visited} words searched)\n"),
                    json!({ "outcome": "exhausted", "visited": visited }),
                ),
                DeriveOutcome::CapHit { visited } => verdict(
                    false,
                    format!("undecided: search stopped after {visited} words\n"),
                    json!({ "outcome": "cap-hit", "visited": visited }),
                ),
            }
        }
        Command::Canonical { word } => {
            let w = resolve_word(&word)?;
            let (c, steps) = to_canonical(&w, &DeriveCaps::default())?;
            ok(
                format!("{c}\n({} steps from {w})\n", steps.len()),
                json!({ "word": w, "canonical": c.to_word(), "steps": steps.len() }),
            )
        }
        Command::Sigma(SigmaCmd::Classify { identity: id }) => {
            let id = identity(&id)?;
            let lambdas = lambda_reduce(&id.lhs, &id.rhs)?;
            let classes: Vec<SigmaClass> = lambdas.iter().map(sigma_classify).collect();
            // the identities together define the smallest of their varieties
            let overall = classes
                .iter()
                .copied()
                .min_by_key(|c| match c {
                    SigmaClass::Index(n) => *n,
                    SigmaClass::Infinity => usize::MAX,
                })
                .expect("distinct words give at least one lambda identity");
            let mut text = String::new();
            for (l, c) in lambdas.iter().zip(&classes) {
                writeln!(text, "{l}    {c}").unwrap();
            }
            writeln!(text, "defines E^1{{{overall}}}").unwrap();
            let rows: Vec<Value> = lambdas
                .iter()
                .zip(&classes)
                .map(|(l, c)| json!({ "lambda": l.to_identity(), "class": c.to_string() }))
                .collect();
            ok(text, json!({ "lambdas": rows, "class": overall.to_string() }))
        }
        Command::Lattice(LatticeCmd::Validate { fig, semantic }) => {
            let p = load_figure(&fig.figure, fig.depth)?;
            let r = validate_lattice(&p);
            let mut text = format!(
                "{}: {} nodes, {} covers, {}\n",
                r.name,
                r.nodes,
                r.covers,
                if r.is_lattice { "a lattice" } else { "not a lattice" }
            );
            for pr in &r.problems {
                writeln!(text, "  {pr:?}").unwrap();
            }
            let mut pass = r.is_lattice;
            let mut edges = Value::Null;
            if semantic {
                let checks = semantic_check_all(&p, &SemanticCaps::default())?;
                for c in &checks {
                    writeln!(text, "  {} < {}: {:?}", c.lower, c.upper, c.verdict).unwrap();
                }
                pass &= !checks
                    .iter()
                    .any(|c| matches!(c.verdict, isoterm_core::lattice::EdgeVerdict::Refuted { .. }));
                edges = json!(checks);
            }
            verdict(pass, text, json!({ "report": r, "edges": edges }))
        }
        Command::Lattice(LatticeCmd::Dot { fig }) => {
            let p = load_figure(&fig.figure, fig.depth)?;
            let dot = dot_export(&p);
            ok(dot.clone(), json!({ "dot": dot, "poset": p }))
        }
        Command::VerifyPaper { manifest } => {
            let r = match manifest {
                Some(path) => run_manifest(&path)?,
                None => run_manifest_text(DEFAULT_MANIFEST, Path::new("."))?,
            };
            verdict(r.all_passed(), r.summary(), serde_json::from_str(&r.to_json()).expect("report json"))
        }
    }
}

fn monoid(cmd: MonoidCmd) -> Result<Output> {
    let base = Path::new(".");
    match cmd {
        MonoidCmd::Show { monoid } => show(&resolve_monoid(&monoid, base)?),
        MonoidCmd::Validate { monoid } => {
            let m = resolve_monoid(&monoid, base)?;
            let r = m.validate();
            let text = match &r.violation {
                None => format!("{}: valid, order {}\n", m.name, r.order),
                Some(v) => format!("{}: invalid: {v:?}\n", m.name),
            };
            verdict(r.ok, text, json!(r))
        }
        MonoidCmd::Product { a, b } => show(&direct_product(&resolve_monoid(&a, base)?, &resolve_monoid(&b, base)?)),
        MonoidCmd::Rees { words } => {
            let ws = words.iter().map(|w| resolve_word(w)).collect::<Result<Vec<_>>>()?;
            show(&rees_quotient(&ws))
        }
        MonoidCmd::Adjoin1 { monoid } => show(&adjoin_identity(&resolve_monoid(&monoid, base)?)),
    }
}
