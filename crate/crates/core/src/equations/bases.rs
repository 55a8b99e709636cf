//! Named identity systems.

use crate::deduction::NamedRule;
use crate::error::{Error, Result};
use crate::words::Identity;

/// Name and text of every identity known by name.
pub const NAMED: &[(&str, &str)] = &[
    ("e-power", "x^3 = x^2"),
    ("e-left", "x^2yx = xyx"),
    ("e-right", "xyx^2 = xyx"),
    ("e-square", "xy^2x = x^2y^2"),
    ("no-l2", "x^2(y^2x^2)^2 = (y^2x^2)^2"),
    ("no-q-a", "x^2yx^2zx^2 = x^2yzx^2"),
    ("no-q-b", "(x^2yx^2)^2 = x^2yx^2"),
    ("lb", "xyxzx = xyzx"),
    ("q-commute", "x^2y^2 = y^2x^2"),
    ("m4-1", "x^13 h x k x = x h x k x"),
    ("m4-2", "x h x^2 k x = x^3 h k x"),
    ("m4-3", "x h y^2 x^2 k y = x h x^2 y^2 k y"),
    ("m4-4", "x h y k x y t x d y = x h y k y x t x d y"),
    ("m4-5", "x h y k x y t y d x = x h y k y x t y d x"),
    ("mxy-1", "x^4 = x^2"),
    ("mxy-2", "xyx = x^2y"),
    ("mxy-3", "xyx = yx^2"),
];

pub fn lookup(name: &str) -> Result<Identity> {
    NAMED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| Identity::parse(t))
        .ok_or_else(|| Error::UnknownName(format!("identity {name}")))
}

pub fn named(names: &[&str]) -> Result<Vec<NamedRule>> {
    names
        .iter()
        .map(|n| {
            Ok(NamedRule {
                name: (*n).to_owned(),
                identity: lookup(n)?,
            })
        })
        .collect()
}

fn list(names: &[&str]) -> Vec<Identity> {
    names.iter().map(|n| lookup(n).expect("known name")).collect()
}

/// The four-identity basis of `E¹`.
pub fn e_basis() -> Vec<Identity> {
    list(&["e-power", "e-left", "e-right", "e-square"])
}

/// Basis of `Q¹`: the first three `E¹` identities and `x²y² ≈ y²x²`.
pub fn q_basis() -> Vec<Identity> {
    list(&["e-power", "e-left", "e-right", "q-commute"])
}

/// Basis of `L₂¹ ∨ B₀¹`.
pub fn lb_basis() -> Vec<Identity> {
    let mut b = e_basis();
    b.push(lookup("lb").expect("known name"));
    b
}

/// Basis of the variety generated by `L₂¹, M(x), R₂¹` and `Z_n`.
pub fn m3_basis(n: usize) -> Vec<Identity> {
    vec![
        Identity::parse(&format!("x^{} h x = x h x", n + 1)),
        Identity::parse("x h x t x = x^2 h t x"),
        Identity::parse("x h x y t y = x h y x t y"),
    ]
}

/// Basis of the variety generated by all monoids of order four.
pub fn m4_basis() -> Vec<Identity> {
    list(&["m4-1", "m4-2", "m4-3", "m4-4", "m4-5"])
}

/// Semigroup basis of `M(xy)`.
pub fn mxy_basis() -> Vec<Identity> {
    list(&["mxy-1", "mxy-2", "mxy-3"])
}

/// Identity sets selectable by name (used by the command line).
pub fn system(name: &str) -> Result<Vec<Identity>> {
    match name {
        "E" => Ok(e_basis()),
        "Q" => Ok(q_basis()),
        "LB" => Ok(lb_basis()),
        "M4" => Ok(m4_basis()),
        "Mxy" => Ok(mxy_basis()),
        _ => {
            if let Some(n) = name.strip_prefix("M3-").and_then(|d| d.parse().ok()) {
                Ok(m3_basis(n))
            } else {
                lookup(name).map(|i| vec![i])
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_names_parse() {
        for (n, _) in NAMED {
            let id = lookup(n).unwrap();
            assert!(!id.is_trivial(), "{n}");
        }
        assert!(lookup("nope").is_err());
    }

    #[test]
    fn systems() {
        assert_eq!(e_basis().len(), 4);
        assert_eq!(system("M3-2").unwrap()[0], Identity::parse("x^3hx = xhx"));
        assert_eq!(system("e-square").unwrap().len(), 1);
        assert_eq!(lookup("no-l2").unwrap().lhs.len(), 10);
    }
}
