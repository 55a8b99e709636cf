//! The acceptance suite. Every criterion runs on its own, prints one
//! `PASS`/`FAIL` line, and the test fails if any criterion does.
//!
//! Random inputs come from a ChaCha generator; set `ACCEPTANCE_SEED` to
//! replay a different stream.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use isoterm_core::deduction::{golden, is_canonical, lambda_reduce, sigma_classify, CanonicalWord};
use isoterm_core::equations::{
    bases, isoterm, isoterm_falsify, lq_equiv_syntactic, member, satisfies, satisfies_all, satisfies_with_budget,
    IsotermBudget, IsotermVerdict, MemberCaps, MemberVerdict, DEFAULT_BUDGET,
};
use isoterm_core::lattice::{load_figure, m3_subvariety_count, semantic_check_all, validate_lattice, SemanticCaps};
use isoterm_core::monoids::{catalog, catalog_names, find_isomorphism, from_presentation, Presentation};
use isoterm_core::words::{
    match_pattern, parse_identity, parse_word, sigma, sigma_infinity, wn_xyxy, wn_zimin, zimin, zimin_decompose,
    MatchOptions,
};
use isoterm_core::{FiniteMonoid, Identity, Variable, Word};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn m(name: &str) -> FiniteMonoid {
    catalog(name).unwrap()
}

fn id(text: &str) -> Identity {
    parse_identity(text).unwrap()
}

fn holds(name: &str, i: &Identity) -> bool {
    satisfies(&m(name), i).unwrap().holds
}

fn seed() -> u64 {
    std::env::var("ACCEPTANCE_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(20_240_601)
}

fn c1_e_table() -> Outcome {
    let e = m("E");
    ensure!(e.elements == ["0", "a", "ac", "b", "c"], "elements {:?}", e.elements);
    let expected = [
        ["0", "0", "0", "0", "0"],
        ["0", "0", "0", "0", "ac"],
        ["0", "0", "0", "ac", "ac"],
        ["0", "a", "ac", "b", "b"],
        ["0", "a", "ac", "c", "c"],
    ];
    for (i, row) in expected.iter().enumerate() {
        for (j, want) in row.iter().enumerate() {
            ensure!(e.label(e.mul(i, j)) == *want, "E[{i}][{j}] = {}", e.label(e.mul(i, j)));
        }
    }
    ensure!(e.validate().ok, "E is not associative");
    let p = |w: &[&str]| e.product_of(w).unwrap();
    let relations: [(&[&str], &[&str]); 8] = [
        (&["a", "a"], &["0"]),
        (&["a", "b"], &["0"]),
        (&["b", "a"], &["a"]),
        (&["c", "a"], &["a"]),
        (&["b", "b"], &["b"]),
        (&["b", "c"], &["b"]),
        (&["c", "c"], &["c"]),
        (&["c", "b"], &["c"]),
    ];
    for (l, r) in relations {
        ensure!(p(l) == p(r), "relation {l:?} = {r:?} fails");
    }
    let pres = Presentation::parse("E", "a,b,c | a^2=ab=0, ba=ca=a, b^2=bc=b, c^2=cb=c").unwrap();
    ensure!(from_presentation(&pres, 64).unwrap() == e, "presentation closure differs from the table");
    ensure!(m("E^1").order() == 6, "|E^1| = {}", m("E^1").order());
    Ok(())
}

fn c2_basis() -> Outcome {
    let e1 = m("E^1");
    for i in bases::e_basis() {
        ensure!(i.content().len() <= 3, "{i} needs more than 216 substitutions");
        ensure!(satisfies(&e1, &i).unwrap().holds, "E^1 fails {i}");
    }
    Ok(())
}

fn c3_sigma_chain() -> Outcome {
    let r = satisfies(&m("E^1"), &sigma_infinity()).unwrap();
    let w = r.witness.ok_or("E^1 satisfies sigma_inf")?;
    ensure!(w.to_string() == "x=b y=c h=a gives 0 != ac", "witness {w}");
    for n in 1..=6 {
        let s = sigma(n).unwrap();
        for name in ["L2^1", "Q^1"] {
            ensure!(holds(name, &s), "{name} fails sigma_{n}");
        }
    }
    Ok(())
}

fn c4_scripts() -> Outcome {
    let expected = [
        ("no-l2-commute", id("x^2y^2 = y^2x^2")),
        ("no-q-a-lb", id("xyxzx = xyzx")),
        ("no-q-b-lb", id("xyxzx = xyzx")),
        ("block-removal", id("x^2 h2 y^2 h3 x^2y^2 = x^2 h2 y^2 h3 y^2x^2")),
    ];
    for (name, want) in expected {
        let got = golden::script(name).unwrap().check().unwrap().map_err(|e| format!("{name}: {e:?}"))?;
        ensure!(got.same_up_to_orientation(&want), "{name} proves {got}");
    }
    for n in 1..=5 {
        let name = format!("sigma-{n}-to-{}", n + 1);
        let got = golden::script(&name).unwrap().check().unwrap().map_err(|e| format!("{name}: {e:?}"))?;
        ensure!(got == sigma(n + 1).unwrap(), "{name} proves {got}");
    }
    Ok(())
}

fn c5_w2_identity() -> Outcome {
    let mx = m("M(xyxy)");
    ensure!(mx.order() == 9, "|M(xyxy)| = {}", mx.order());
    let i = Identity::new(wn_xyxy(2, false).unwrap(), parse_word("x0 x1 y z x0 x2 y z x1 x2").unwrap());
    ensure!(!i.is_trivial(), "trivial");
    ensure!(satisfies(&mx, &i).unwrap().holds, "M(xyxy) fails {i}");
    Ok(())
}

fn c6_isoterm_falsify() -> Outcome {
    let mx = m("M(xyxy)");
    let b = IsotermBudget::default();
    let v = isoterm(&mx, &wn_xyxy(2, false).unwrap(), &b).unwrap();
    ensure!(v.is_not_isoterm(), "w_2: {v:?}");
    for n in [3, 4] {
        for primed in [false, true] {
            let w = wn_xyxy(n, primed).unwrap();
            let r = isoterm_falsify(std::slice::from_ref(&mx), &w, &b).unwrap();
            ensure!(r.witness.is_none(), "{w} = {}", r.witness.unwrap());
        }
    }
    Ok(())
}

fn c7_isoterm_certify() -> Outcome {
    let b = IsotermBudget::default();
    let v = isoterm(&m("M(xyxy)"), &parse_word("xyxy").unwrap(), &b).unwrap();
    ensure!(matches!(v, IsotermVerdict::Certified { .. }), "xyxy: {v:?}");
    let v = isoterm(&m("M(x)"), &parse_word("x^2").unwrap(), &b).unwrap();
    ensure!(
        v == IsotermVerdict::NotIsoterm {
            witness: parse_word("x^3").unwrap()
        },
        "x^2: {v:?}"
    );
    Ok(())
}

fn independence(family: impl Fn(usize, bool) -> Word, range: std::ops::RangeInclusive<usize>) -> Outcome {
    let mut checked = 0usize;
    for n in range.clone() {
        let (w, w1) = (family(n, false), family(n, true));
        for k in range.clone().filter(|&k| k != n) {
            for theta in match_pattern(&w, &family(k, false), MatchOptions::default()) {
                ensure!(
                    w.substitute(&theta) == w1.substitute(&theta),
                    "n={n} k={k}: {theta:?} separates the pair"
                );
                checked += 1;
            }
        }
    }
    ensure!(checked > 0, "no substitutions were examined");
    Ok(())
}

fn c8_independence_xyxy() -> Outcome {
    independence(|n, p| wn_xyxy(n, p).unwrap(), 3..=6)
}

fn c9_independence_zimin() -> Outcome {
    independence(|n, p| wn_zimin(n, p).unwrap(), 3..=5)
}

fn c10_zimin() -> Outcome {
    // the decomposition needs at least three parts
    ensure!(zimin_decompose(2).is_err(), "z_2 has no decomposition");
    for n in 3..=10 {
        let d = zimin_decompose(n).unwrap();
        ensure!(d.reassemble() == zimin(n).unwrap(), "z_{n} does not reassemble");
        d.check_properties().map_err(|e| format!("z_{n}: {e}"))?;
    }
    let b = IsotermBudget::default();
    for name in ["B2^1", "A2^1"] {
        for n in 1..=3 {
            let r = isoterm_falsify(&[m(name)], &zimin(n).unwrap(), &b).unwrap();
            ensure!(r.witness.is_none(), "z_{n} in {name}: {}", r.witness.unwrap());
        }
    }
    Ok(())
}

fn c11_rees() -> Outcome {
    for (w, order) in [("M(1)", 2), ("M(x)", 3), ("M(xy)", 5), ("M(xyx)", 7), ("M(xyxy)", 9)] {
        ensure!(m(w).order() == order, "|{w}| = {}", m(w).order());
    }
    ensure!(find_isomorphism(&m("M(x)"), &m("N2^1"), false).is_some(), "M(x) !~ N2^1");
    ensure!(find_isomorphism(&m("M(xyx)"), &m("N6^1"), false).is_some(), "M(xyx) !~ N6^1");
    Ok(())
}

fn c12_bases() -> Outcome {
    ensure!(satisfies_all(&m("M(xyxy)"), &bases::m4_basis()).unwrap().all_hold(), "M(xyxy) and the M4 basis");
    for name in ["L2^1", "M(x)", "R2^1", "Z2"] {
        ensure!(satisfies_all(&m(name), &bases::m3_basis(2)).unwrap().all_hold(), "{name} and the M3 basis");
    }
    ensure!(satisfies_all(&m("Q^1"), &bases::q_basis()).unwrap().all_hold(), "Q^1 and its basis");
    let no_l2 = bases::lookup("no-l2").unwrap();
    ensure!(holds("Q^1", &no_l2), "Q^1 fails {no_l2}");
    ensure!(!holds("E^1", &no_l2), "E^1 satisfies {no_l2}");
    Ok(())
}

fn c13_member() -> Outcome {
    let caps = MemberCaps::default();
    let v = member(&m("M(x)"), &m("M(xy)"), &caps).unwrap();
    ensure!(matches!(v, MemberVerdict::Member { .. }), "M(x) in M(xy): {v:?}");
    let v = member(&m("M(1)"), &m("M(x)"), &caps).unwrap();
    ensure!(matches!(v, MemberVerdict::Member { .. }), "M(1) in M(x): {v:?}");
    let MemberVerdict::NotMember { witness } = member(&m("L2^1"), &m("Q^1"), &caps).unwrap() else {
        return Err("L2^1 reported inside Q^1".into());
    };
    ensure!(witness.same_up_to_orientation(&id("x^2y^2 = y^2x^2")), "witness {witness}");
    ensure!(holds("Q^1", &witness) && !holds("L2^1", &witness), "witness {witness} does not re-verify");
    Ok(())
}

/// A random canonical word: `blocks` blocks of distinct squares separated by
/// simple variables, drawn from `squares` and `seps`.
fn random_canonical(rng: &mut ChaCha8Rng, squares: &[Variable], seps: &[Variable], max_len: usize) -> CanonicalWord {
    loop {
        let s = rng.gen_range(0..=seps.len());
        let mut separators = seps.to_vec();
        separators.shuffle(rng);
        separators.truncate(s);
        let blocks: Vec<Vec<Variable>> = (0..=s)
            .map(|_| {
                let mut b = squares.to_vec();
                b.shuffle(rng);
                b.truncate(rng.gen_range(0..=squares.len()));
                b
            })
            .collect();
        let c = CanonicalWord { blocks, separators };
        let w = c.to_word();
        if w.len() <= max_len && is_canonical(&w).as_ref() == Some(&c) {
            return c;
        }
    }
}

fn vars(names: &[&str]) -> Vec<Variable> {
    names.iter().map(|n| Variable::new(n)).collect()
}

fn c14_lq_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed());
    let (squares, seps) = (vars(&["x", "y", "z"]), vars(&["h", "t"]));
    let (q1, l1) = (m("Q^1"), m("L2^1"));
    let mut done = 0;
    let mut agree_q = [0usize; 2];
    while done < 500 {
        let u = random_canonical(&mut rng, &squares, &seps, 8);
        let v = if rng.gen_bool(0.5) {
            // a nearby word: shuffled blocks, sometimes a square moved
            let mut c = u.clone();
            for b in &mut c.blocks {
                b.shuffle(&mut rng);
            }
            if rng.gen_bool(0.3) && c.blocks.len() > 1 {
                let from = rng.gen_range(0..c.blocks.len());
                if let Some(x) = c.blocks[from].pop() {
                    let to = rng.gen_range(0..c.blocks.len());
                    c.blocks[to].insert(0, x);
                }
            }
            c
        } else {
            random_canonical(&mut rng, &squares, &seps, 8)
        };
        let (uw, vw) = (u.to_word(), v.to_word());
        if is_canonical(&vw).is_none() || vw.len() > 8 {
            continue;
        }
        let both = Identity::new(uw.clone(), vw.clone());
        if both.content().len() > 4 {
            continue;
        }
        let syn = lq_equiv_syntactic(&uw, &vw).unwrap();
        let q = satisfies(&q1, &both).unwrap().holds;
        let l = satisfies(&l1, &both).unwrap().holds;
        ensure!(syn.q_holds == q, "Q^1 on {both}: syntactic {} semantic {q}", syn.q_holds);
        ensure!(syn.l_holds == l, "L2^1 on {both}: syntactic {} semantic {l}", syn.l_holds);
        agree_q[usize::from(q)] += 1;
        done += 1;
    }
    ensure!(agree_q[0] > 0 && agree_q[1] > 0, "the sample only had one kind of pair: {agree_q:?}");
    Ok(())
}

/// Catalog monoids (and `^1` forms) with an identity element that satisfy
/// the basis of `E¹`. Semigroups are left out: without 1 no variable can be
/// deleted, and the reduction relies on deletion.
fn e_monoids() -> Vec<FiniteMonoid> {
    let basis = bases::e_basis();
    let mut out = Vec::new();
    for name in catalog_names().into_iter().filter(|n| n != "Zk") {
        for form in [name.clone(), format!("{name}^1")] {
            let mo = m(&form);
            if mo.identity.is_some() && satisfies_all(&mo, &basis).unwrap().all_hold() {
                out.push(mo);
            }
        }
    }
    out
}

fn holds_budgeted(mo: &FiniteMonoid, i: &Identity) -> Result<bool, String> {
    satisfies_with_budget(mo, i, DEFAULT_BUDGET)
        .map(|r| r.holds)
        .map_err(|e| format!("{} on {i}: {e}", mo.name))
}

fn c15_lambda_sigma() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed() ^ 0x5eed);
    let (squares, seps) = (vars(&["x", "y", "z"]), vars(&["h", "t"]));
    let monoids = e_monoids();
    ensure!(monoids.len() >= 3, "only {} catalog monoids lie in E^1", monoids.len());
    let mut done = 0;
    let mut tries = 0;
    while done < 100 {
        tries += 1;
        ensure!(tries < 100_000, "could not draw 100 identities valid in L2^1 and Q^1");
        let u = random_canonical(&mut rng, &squares, &seps, 12);
        let mut c = u.clone();
        for b in c.blocks.iter_mut().skip(1) {
            b.shuffle(&mut rng);
        }
        let (uw, vw) = (u.to_word(), c.to_word());
        let lq = lq_equiv_syntactic(&uw, &vw).unwrap();
        if uw == vw || !(lq.q_holds && lq.l_holds) {
            continue;
        }
        let ident = Identity::new(uw.clone(), vw.clone());
        let lambdas = lambda_reduce(&uw, &vw).map_err(|e| format!("{ident}: {e}"))?;
        let sigmas: Vec<Identity> = lambdas.iter().map(|l| sigma_classify(l).identity()).collect();
        for mo in &monoids {
            let direct = holds_budgeted(mo, &ident)?;
            let mut via_lambda = true;
            for l in &lambdas {
                via_lambda &= holds_budgeted(mo, &l.to_identity())?;
            }
            let mut via_sigma = true;
            for s in &sigmas {
                via_sigma &= holds_budgeted(mo, s)?;
            }
            ensure!(
                direct == via_lambda && via_lambda == via_sigma,
                "{} on {ident}: direct {direct}, lambda {via_lambda}, sigma {via_sigma}",
                mo.name
            );
        }
        done += 1;
    }
    Ok(())
}

fn c16_figures() -> Outcome {
    for fig in ["Fig1", "Fig2", "Fig3", "Fig4"] {
        let p = load_figure(fig, 3).unwrap();
        let r = validate_lattice(&p);
        ensure!(r.is_lattice, "{fig}: {:?}", r.problems);
    }
    let fig1 = load_figure("Fig1", 1).unwrap();
    let (nodes, _, total) = m3_subvariety_count(&fig1);
    ensure!(nodes == 15 && total == 60, "Fig1 count {nodes}, total {total}");
    for fig in ["Fig2", "Fig3"] {
        let p = load_figure(fig, 1).unwrap();
        for c in semantic_check_all(&p, &SemanticCaps::default()).unwrap() {
            ensure!(c.verdict.is_confirmed(), "{fig} {} < {}: {:?}", c.lower, c.upper, c.verdict);
        }
    }
    Ok(())
}

fn c17_mxy() -> Outcome {
    let r = satisfies_all(&m("M(xy)"), &bases::mxy_basis()).unwrap();
    ensure!(r.all_hold(), "{r:?}");
    Ok(())
}

fn main() {
    let criteria: [Criterion; 17] = [
        ("E table, relations and order of E^1", c1_e_table),
        ("E^1 satisfies its basis", c2_basis),
        ("sigma chain in E^1, L2^1 and Q^1", c3_sigma_chain),
        ("shipped derivation scripts", c4_scripts),
        ("an identity of M(xyxy) moving w_2", c5_w2_identity),
        ("isoterm falsifier on the xyxy family", c6_isoterm_falsify),
        ("isoterm certification", c7_isoterm_certify),
        ("independence of the xyxy family", c8_independence_xyxy),
        ("independence of the Zimin family", c9_independence_zimin),
        ("Zimin decompositions and isoterms", c10_zimin),
        ("Rees quotient orders and isomorphisms", c11_rees),
        ("variety bases", c12_bases),
        ("membership", c13_member),
        ("syntactic L2/Q criteria agree with satisfaction", c14_lq_oracle),
        ("lambda and sigma reductions agree with satisfaction", c15_lambda_sigma),
        ("figures", c16_figures),
        ("semigroup basis of M(xy)", c17_mxy),
    ];
    println!("acceptance seed {}", seed());
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({secs:.1}s)", i + 1),
            Err(e) => {
                println!("FAIL {:>2} {name} ({secs:.1}s): {e}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed.len(), criteria.len());
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
