//! Shipped derivation scripts: each must re-check, and the ignored test
//! `regenerate` rebuilds them from their waypoint chains.

use isoterm_core::deduction::{golden, DerivationScript, DeriveCaps, NamedRule};
use isoterm_core::equations::bases;
use isoterm_core::words::{parse_identity, parse_word, sigma, Word};

fn words(chain: &[&str]) -> Vec<Word> {
    chain.iter().map(|s| parse_word(s).unwrap()).collect()
}

fn rules(names: &[&str], extra: &[(&str, &str)]) -> Vec<NamedRule> {
    let mut r = bases::named(names).unwrap();
    r.extend(extra.iter().map(|(n, t)| NamedRule {
        name: (*n).to_owned(),
        identity: parse_identity(t).unwrap(),
    }));
    r
}

const E: [&str; 4] = ["e-power", "e-left", "e-right", "e-square"];
const EA: [&str; 3] = ["e-power", "e-left", "e-right"];

fn build(name: &str) -> DerivationScript {
    let caps = DeriveCaps {
        max_visited: 400_000,
        ..DeriveCaps::default()
    };
    let (rules, chain, note): (Vec<NamedRule>, Vec<&str>, &str) = match name {
        "no-l2-commute" => (
            rules(&[&E[..], &["no-l2"]].concat(), &[]),
            vec![
                "y^2x^2",
                "y^4x^4",
                "y^2x^2y^2x^2",
                "x^2y^2x^2y^2x^2",
                "x^2y^4x^4",
                "x^6y^4",
                "x^2y^2",
            ],
            "x^2y^2 = y^2x^2 from the basis of E^1 and the identity excluding L2",
        ),
        "no-q-a-lb" => (
            rules(&[&EA[..], &["no-q-a"]].concat(), &[]),
            vec!["xyxzx", "x^2yx^2zx^2", "x^2yzx^2", "xyzx"],
            "xyxzx = xyzx from the first three basis identities and the first identity excluding Q",
        ),
        "no-q-b-lb" => (
            rules(&[&E[..], &["no-q-b"]].concat(), &[]),
            vec![
                "xyxzx",
                "x^2yx^2zx^2",
                "(x^2yx^2zx^2)^2",
                "(xy^2xz^2x^2)^2",
                "(x^2y^2z^2x^2)^2",
                "(x^2yzx^2)^2",
                "x^2yzx^2",
                "xyzx",
            ],
            "xyxzx = xyzx from the basis of E^1 and the second identity excluding Q",
        ),
        "block-removal" => (
            rules(&E, &[("lambda", "x^2 h1 x^2 h2 y^2 h3 x^2y^2 = x^2 h1 x^2 h2 y^2 h3 y^2x^2")]),
            vec![
                "x^2 h2 y^2 h3 x^2y^2",
                "x^5 h2 y^2 h3 x^2y^2",
                "x^5 h2 y^2 h3 y^2x^2",
                "x^2 h2 y^2 h3 y^2x^2",
            ],
            "two equal neighbouring blocks: the shorter identity follows from the longer one",
        ),
        other => {
            let n: usize = other
                .strip_prefix("sigma-")
                .and_then(|r| r.split_once("-to-"))
                .and_then(|(a, _)| a.parse().ok())
                .expect("known script name");
            let target = sigma(n + 1).unwrap();
            let rules = vec![NamedRule {
                name: format!("sigma_{n}"),
                identity: sigma(n).unwrap(),
            }];
            let chain = [target.lhs.clone(), target.rhs.clone()];
            let s = DerivationScript::expand(other, rules, &chain, &caps).unwrap();
            return DerivationScript {
                note: Some(format!("sigma_{} by one substitution instance of sigma_{n}", n + 1)),
                ..s
            };
        }
    };
    let chain = words(&chain);
    // intermediate words need not be much longer than the chain itself
    let longest = chain.iter().map(Word::len).max().unwrap_or(0);
    let caps = DeriveCaps {
        max_len: longest + 2,
        ..caps
    };
    let mut s = match DerivationScript::expand(name, rules.clone(), &chain, &caps) {
        Ok(s) => s,
        Err(e) => panic!("{name}: {e}"),
    };
    s.note = Some(note.to_owned());
    s
}

#[test]
fn shipped_scripts_check() {
    assert!(!golden::NAMES.is_empty());
    for name in golden::NAMES {
        let s = golden::script(name).unwrap();
        let proved = s.check().unwrap().unwrap_or_else(|e| panic!("{name}: {e:?}"));
        assert!(!proved.is_trivial(), "{name}");
    }
}

#[test]
fn shipped_conclusions() {
    let concl = |n: &str| golden::script(n).unwrap().check().unwrap().unwrap();
    assert!(concl("no-l2-commute").same_up_to_orientation(&parse_identity("x^2y^2 = y^2x^2").unwrap()));
    assert!(concl("no-q-a-lb").same_up_to_orientation(&parse_identity("xyxzx = xyzx").unwrap()));
    assert!(concl("no-q-b-lb").same_up_to_orientation(&parse_identity("xyxzx = xyzx").unwrap()));
    for n in 1..=5 {
        let name = format!("sigma-{n}-to-{}", n + 1);
        assert_eq!(concl(&name), sigma(n + 1).unwrap());
        assert_eq!(golden::script(&name).unwrap().steps.len(), 1);
    }
}

#[test]
#[ignore = "rebuilds data/scripts; run with --ignored --release"]
fn regenerate() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/scripts");
    for name in golden::NAMES {
        let s = build(name);
        assert!(s.check().unwrap().is_ok(), "{name}");
        println!("{name}: {} steps, {} of the waypoints kept", s.steps.len(), s.waypoints.len());
        std::fs::write(dir.join(format!("{name}.json")), s.to_json() + "\n").unwrap();
    }
}
