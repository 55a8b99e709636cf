use proptest::prelude::*;

use isoterm_core::deduction::{check_derivation, directly_deducible, is_canonical};
use isoterm_core::equations::{lq_equiv_syntactic, satisfies};
use isoterm_core::monoids::{adjoin_identity, catalog, direct_product, find_isomorphism};
use isoterm_core::words::{parse_identity, parse_word};
use isoterm_core::{Identity, Substitution, Variable, Word};

fn word_over(names: &'static [&'static str], max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::sample::select(names), 0..=max).prop_map(|v| Word::from_names(&v))
}

fn small_monoid() -> impl Strategy<Value = &'static str> {
    prop::sample::select(&["E^1", "Q^1", "L2^1", "R2^1", "B2^1", "A0^1", "M(xy)", "M(xyx)", "Z3", "N2^1"][..])
}

fn squares_word() -> impl Strategy<Value = Word> {
    // blocks of distinct squares separated by the simple letters h and t
    let block = prop::sample::subsequence(vec!["x", "y", "z"], 0..=3).prop_shuffle();
    (block.clone(), any::<bool>(), block.clone(), any::<bool>(), block).prop_map(|(a, h, b, t, c)| {
        let mut w = Word::empty();
        let sq = |w: &mut Word, blk: &[&str]| {
            for x in blk {
                w.extend(&parse_word(&format!("{x}^2")).unwrap());
            }
        };
        sq(&mut w, &a);
        if h {
            w.push(Variable::new("h"));
            sq(&mut w, &b);
        }
        if t {
            w.push(Variable::new("t"));
            sq(&mut w, &c);
        }
        w
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn display_parses_back(w in word_over(&["x", "y", "z", "h1"], 12)) {
        prop_assert_eq!(parse_word(&w.to_string()).unwrap(), w);
    }

    #[test]
    fn shortlex_puts_shorter_first(u in word_over(&["x", "y"], 6), v in word_over(&["x", "y"], 6)) {
        if u.len() < v.len() {
            prop_assert!(u < v);
        }
    }

    #[test]
    fn witnesses_recheck(
        name in small_monoid(),
        u in word_over(&["x", "y", "z"], 6),
        v in word_over(&["x", "y", "z"], 6),
    ) {
        let m = catalog(name).unwrap();
        let id = Identity::new(u, v);
        let r = satisfies(&m, &id).unwrap();
        prop_assert_eq!(r.holds, r.witness.is_none());
        if let Some(w) = r.witness {
            prop_assert!(w.recheck(&m, &id), "{} in {}", w, name);
        }
        if id.is_trivial() {
            prop_assert!(r.holds);
        }
    }

    #[test]
    fn satisfaction_is_symmetric(
        name in small_monoid(),
        u in word_over(&["x", "y"], 6),
        v in word_over(&["x", "y"], 6),
    ) {
        let m = catalog(name).unwrap();
        let a = satisfies(&m, &Identity::new(u.clone(), v.clone())).unwrap().holds;
        let b = satisfies(&m, &Identity::new(v, u)).unwrap().holds;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn products_keep_identities(
        u in word_over(&["x", "y"], 6),
        v in word_over(&["x", "y"], 6),
    ) {
        let (a, b) = (catalog("L2^1").unwrap(), catalog("Q^1").unwrap());
        let id = Identity::new(u, v);
        let both = satisfies(&a, &id).unwrap().holds && satisfies(&b, &id).unwrap().holds;
        prop_assert_eq!(satisfies(&direct_product(&a, &b), &id).unwrap().holds, both);
    }

    #[test]
    fn instances_are_directly_deducible(
        a in word_over(&["p", "q"], 3),
        b in word_over(&["p", "q"], 3),
        ix in word_over(&["p", "q"], 3),
        iy in word_over(&["p", "q"], 3),
    ) {
        let rule = parse_identity("x y x = x^2 y").unwrap();
        let theta: Substitution = [(Variable::new("x"), ix), (Variable::new("y"), iy)].into_iter().collect();
        let inst = rule.substitute(&theta);
        let target = Identity::new(a.concat(&inst.lhs).concat(&b), a.concat(&inst.rhs).concat(&b));
        if !target.is_trivial() {
            let step = directly_deducible(&target, &rule);
            prop_assert!(step.is_some(), "{}", target);
            prop_assert!(check_derivation(&[step.unwrap()], &[rule]).is_ok());
        }
    }

    #[test]
    fn canonical_words_round_trip(w in squares_word()) {
        let c = is_canonical(&w).expect("built in canonical form");
        prop_assert_eq!(c.to_word(), w);
    }

    #[test]
    fn lq_criteria_are_symmetric(u in squares_word(), v in squares_word()) {
        prop_assert_eq!(lq_equiv_syntactic(&u, &v).unwrap(), lq_equiv_syntactic(&v, &u).unwrap());
        let same = lq_equiv_syntactic(&u, &u).unwrap();
        prop_assert!(same.q_holds && same.l_holds);
    }
}

#[test]
fn adjoined_identity_adds_one_element() {
    for name in ["E", "Q", "L2", "B2"] {
        let m = catalog(name).unwrap();
        let m1 = adjoin_identity(&m);
        assert_eq!(m1.order(), m.order() + 1);
        assert!(find_isomorphism(&m1, &m1, false).is_some());
    }
}
