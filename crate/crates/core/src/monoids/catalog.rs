use super::{adjoin_identity, parse_monoid_file, rees_quotient, FiniteMonoid};
use crate::error::{Error, Result};
use crate::words::parse_word;

/// Named presentations and the frozen tables derived from them.
pub(crate) const PRESENTED: &[(&str, &str, &str)] = &[
    ("A0", "a,b | a^2=a, b^2=b, ab=0", include_str!("../../data/monoids/A0.monoid")),
    ("A2", "a,b | a^2=aba=a, b^2=0, bab=b", include_str!("../../data/monoids/A2.monoid")),
    ("B0", "a,b,c | a^2=a, b^2=b, ab=ba=0, ac=cb=c", include_str!("../../data/monoids/B0.monoid")),
    ("B2", "a,b | a^2=b^2=0, aba=a, bab=b", include_str!("../../data/monoids/B2.monoid")),
    ("E", "a,b,c | a^2=ab=0, ba=ca=a, b^2=bc=b, c^2=cb=c", include_str!("../../data/monoids/E.monoid")),
    ("I", "a,b | ab=a, ba=0, b^2=b", include_str!("../../data/monoids/I.monoid")),
    ("J", "a,b | ba=a, ab=0, b^2=b", include_str!("../../data/monoids/J.monoid")),
    ("L2", "a,b | a^2=ab=a, b^2=ba=b", include_str!("../../data/monoids/L2.monoid")),
    ("N2", "a | a^2=0", include_str!("../../data/monoids/N2.monoid")),
    ("N6", "a,b | a^2=b^2=aba=0", include_str!("../../data/monoids/N6.monoid")),
    ("O", "a,b | a^2=ba=a, b^2=1", include_str!("../../data/monoids/O.monoid")),
    ("P2", "a,b | a^2=ab=a, b^2a=b^2", include_str!("../../data/monoids/P2.monoid")),
    ("Q", "a,b,c | a^2=a, ab=b, ca=c, ac=ba=cb=0", include_str!("../../data/monoids/Q.monoid")),
    ("R2", "a,b | a^2=ba=a, b^2=ab=b", include_str!("../../data/monoids/R2.monoid")),
];

/// Base names accepted by [`catalog`], without the `^1` and `M(...)` forms.
pub fn catalog_names() -> Vec<String> {
    let mut names: Vec<String> = PRESENTED.iter().map(|(n, _, _)| n.to_string()).collect();
    names.extend(["S3".into(), "Zk".into()]);
    names
}

/// The cyclic group of order `k`, elements `1, g, g2, …`.
pub fn cyclic_group(k: usize) -> Result<FiniteMonoid> {
    if k == 0 {
        return Err(Error::invalid("cyclic group of order 0"));
    }
    let elements = (0..k)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "g".to_string(),
            _ => format!("g{i}"),
        })
        .collect();
    let table = (0..k).map(|i| (0..k).map(|j| (i + j) % k).collect()).collect();
    FiniteMonoid::new(format!("Z{k}"), elements, Some(0), table)
}

/// The symmetric group on three points; `p·q` applies `p` first.
pub fn symmetric_group_s3() -> FiniteMonoid {
    let perms: [(&str, [usize; 3]); 6] = [
        ("1", [0, 1, 2]),
        ("(12)", [1, 0, 2]),
        ("(13)", [2, 1, 0]),
        ("(23)", [0, 2, 1]),
        ("(123)", [1, 2, 0]),
        ("(132)", [2, 0, 1]),
    ];
    let table = perms
        .iter()
        .map(|(_, p)| {
            perms
                .iter()
                .map(|(_, q)| {
                    let r = [q[p[0]], q[p[1]], q[p[2]]];
                    perms.iter().position(|(_, s)| *s == r).unwrap()
                })
                .collect()
        })
        .collect();
    FiniteMonoid::new(
        "S3",
        perms.iter().map(|(l, _)| l.to_string()).collect(),
        Some(0),
        table,
    )
    .expect("S3 table is well formed")
}

fn base(name: &str) -> Result<Option<FiniteMonoid>> {
    if let Some((_, _, text)) = PRESENTED.iter().find(|(n, _, _)| *n == name) {
        return Ok(Some(parse_monoid_file(text)?));
    }
    if name == "S3" {
        return Ok(Some(symmetric_group_s3()));
    }
    let digits = name
        .strip_prefix("Z(")
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| name.strip_prefix('Z'));
    if let Some(d) = digits {
        if let Ok(k) = d.parse::<usize>() {
            return cyclic_group(k).map(Some);
        }
    }
    if let Some(inner) = name.strip_prefix("M(").and_then(|r| r.strip_suffix(')')) {
        let words = inner
            .split(',')
            .map(|w| parse_word(w.trim()))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        return Ok(Some(rees_quotient(&words)));
    }
    Ok(None)
}

/// Looks up a named monoid.
///
/// Accepts the presented semigroups (`A0 A2 B0 B2 E I J L2 N2 N6 O P2 Q R2`),
/// `S3`, cyclic groups `Zk` / `Z(k)`, Rees quotients `M(w1, w2, …)`, and any
/// of these with an adjoined identity written `X^1` (or `X1` when unambiguous).
pub fn catalog(name: &str) -> Result<FiniteMonoid> {
    let name = name.trim();
    if let Some(m) = base(name)? {
        return Ok(m);
    }
    let stem = name
        .strip_suffix("^1")
        .or_else(|| name.strip_suffix('1'))
        .filter(|s| !s.is_empty());
    if let Some(stem) = stem {
        if let Some(m) = base(stem)? {
            return Ok(adjoin_identity(&m));
        }
    }
    Err(Error::UnknownName(name.to_owned()))
}
