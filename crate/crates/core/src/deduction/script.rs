use serde::{Deserialize, Serialize};

use super::{check_derivation, conclusion, derive_bounded, DeriveCaps, DeriveOutcome, DerivationStep, Direction, StepFailure};
use crate::error::{Error, Result};
use crate::words::{Identity, Substitution, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedRule {
    pub name: String,
    pub identity: Identity,
}

impl NamedRule {
    /// One rule per line as `u = v` or `name: u = v`; a line holding only a
    /// system name (such as `E`) adds that system. `#` starts a comment.
    pub fn parse_list(text: &str) -> Result<Vec<NamedRule>> {
        let mut out = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (name, body) = match line.split_once(':') {
                Some((n, b)) => (Some(n.trim().to_owned()), b.trim()),
                None => (None, line),
            };
            if !body.contains('=') && !body.contains('≈') {
                let sys = crate::equations::bases::system(body)
                    .map_err(|e| Error::invalid(format!("rules line {}: {e}", i + 1)))?;
                for (k, identity) in sys.into_iter().enumerate() {
                    out.push(NamedRule {
                        name: format!("{body}.{}", k + 1),
                        identity,
                    });
                }
                continue;
            }
            let identity = crate::words::parse_identity(body)
                .map_err(|e| Error::invalid(format!("rules line {}: {e}", i + 1)))?;
            out.push(NamedRule {
                name: name.unwrap_or_else(|| format!("r{}", out.len() + 1)),
                identity,
            });
        }
        Ok(out)
    }
}

/// A step whose rule is a reference into the script's rule table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptStep {
    pub from: Word,
    pub to: Word,
    pub rule: String,
    pub direction: Direction,
    pub theta: Substitution,
    pub left: Word,
    pub right: Word,
}

/// Serialised derivation: a rule table, the steps, and optionally the
/// coarser chain of words the steps were expanded from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationScript {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub rules: Vec<NamedRule>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub waypoints: Vec<Word>,
    pub steps: Vec<ScriptStep>,
}

impl DerivationScript {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scripts serialise")
    }

    pub fn sigma(&self) -> Vec<Identity> {
        self.rules.iter().map(|r| r.identity.clone()).collect()
    }

    fn rule(&self, name: &str) -> Result<&Identity> {
        self.rules
            .iter()
            .find(|r| r.name == name)
            .map(|r| &r.identity)
            .ok_or_else(|| Error::UnknownName(format!("rule {name}")))
    }

    fn rule_name(rules: &[NamedRule], id: &Identity) -> String {
        rules
            .iter()
            .find(|r| r.identity == *id)
            .map(|r| r.name.clone())
            .expect("steps only use listed rules")
    }

    /// Steps with the rule references resolved.
    pub fn steps(&self) -> Result<Vec<DerivationStep>> {
        self.steps
            .iter()
            .map(|s| {
                Ok(DerivationStep {
                    from: s.from.clone(),
                    to: s.to.clone(),
                    rule: self.rule(&s.rule)?.clone(),
                    direction: s.direction,
                    theta: s.theta.clone(),
                    left: s.left.clone(),
                    right: s.right.clone(),
                })
            })
            .collect()
    }

    /// Runs [`check_derivation`] and checks the waypoints appear in order.
    pub fn check(&self) -> Result<std::result::Result<Identity, StepFailure>> {
        let steps = self.steps()?;
        if let Err(e) = check_derivation(&steps, &self.sigma()) {
            return Ok(Err(e));
        }
        let Some(proved) = conclusion(&steps) else {
            return Ok(Err(StepFailure {
                index: 0,
                reason: "empty derivation".into(),
            }));
        };
        let words: Vec<&Word> = std::iter::once(&steps[0].from).chain(steps.iter().map(|s| &s.to)).collect();
        let mut pos = 0;
        for (k, wp) in self.waypoints.iter().enumerate() {
            match words[pos..].iter().position(|w| *w == wp) {
                Some(p) => pos += p,
                None => {
                    return Ok(Err(StepFailure {
                        index: steps.len(),
                        reason: format!("waypoint {k} ({wp}) is not on the derivation"),
                    }))
                }
            }
        }
        Ok(Ok(proved))
    }

    pub fn from_steps(name: &str, rules: Vec<NamedRule>, steps: &[DerivationStep]) -> Self {
        let steps = steps
            .iter()
            .map(|s| ScriptStep {
                from: s.from.clone(),
                to: s.to.clone(),
                rule: Self::rule_name(&rules, &s.rule),
                direction: s.direction,
                theta: s.theta.clone(),
                left: s.left.clone(),
                right: s.right.clone(),
            })
            .collect();
        DerivationScript {
            name: name.to_owned(),
            note: None,
            rules,
            waypoints: Vec::new(),
            steps,
        }
    }

    /// Fills in the steps between consecutive waypoints by bounded search,
    /// cutting out any word that would repeat. Waypoints lost to such a cut
    /// are dropped from the record.
    pub fn expand(name: &str, rules: Vec<NamedRule>, waypoints: &[Word], caps: &DeriveCaps) -> Result<Self> {
        let sigma: Vec<Identity> = rules.iter().map(|r| r.identity.clone()).collect();
        let mut steps: Vec<DerivationStep> = Vec::new();
        for pair in waypoints.windows(2) {
            let target = Identity::new(pair[0].clone(), pair[1].clone());
            match derive_bounded(&sigma, &target, caps)? {
                DeriveOutcome::Found(s) => steps.extend(s),
                other => {
                    return Err(Error::invalid(format!("no derivation for {target}: {other:?}")));
                }
            }
        }
        let mut out: Vec<DerivationStep> = Vec::new();
        for st in steps {
            if let Some(k) = out.iter().position(|s| s.from == st.to) {
                out.truncate(k);
                continue;
            }
            out.push(st);
        }
        let mut script = Self::from_steps(name, rules, &out);
        let on_path = |w: &Word| out.first().is_some_and(|s| s.from == *w) || out.iter().any(|s| s.to == *w);
        script.waypoints = waypoints.iter().filter(|w| on_path(w)).cloned().collect();
        Ok(script)
    }
}
