//! Derivation scripts shipped with the crate.

use super::DerivationScript;
use crate::error::{Error, Result};

const SCRIPTS: &[(&str, &str)] = &[
    ("no-l2-commute", include_str!("../../data/scripts/no-l2-commute.json")),
    ("no-q-a-lb", include_str!("../../data/scripts/no-q-a-lb.json")),
    ("no-q-b-lb", include_str!("../../data/scripts/no-q-b-lb.json")),
    ("block-removal", include_str!("../../data/scripts/block-removal.json")),
    ("sigma-1-to-2", include_str!("../../data/scripts/sigma-1-to-2.json")),
    ("sigma-2-to-3", include_str!("../../data/scripts/sigma-2-to-3.json")),
    ("sigma-3-to-4", include_str!("../../data/scripts/sigma-3-to-4.json")),
    ("sigma-4-to-5", include_str!("../../data/scripts/sigma-4-to-5.json")),
    ("sigma-5-to-6", include_str!("../../data/scripts/sigma-5-to-6.json")),
];

pub const NAMES: &[&str] = &["no-l2-commute", "no-q-a-lb", "no-q-b-lb", "block-removal", "sigma-1-to-2", "sigma-2-to-3", "sigma-3-to-4", "sigma-4-to-5", "sigma-5-to-6"];

pub fn script(name: &str) -> Result<DerivationScript> {
    SCRIPTS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownName(format!("script {name}")))
        .and_then(|(_, text)| DerivationScript::from_json(text))
}
