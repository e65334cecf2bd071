use std::fmt;

use serde::{Deserialize, Serialize};

use super::rules::{names, RuleSet};
use super::term::{parse_term, Term};
use super::SphereError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: String,
    pub justification: String,
    /// Child-index path of the rewritten subterm.
    pub pos: Vec<usize>,
    pub before: Term,
    pub after: Term,
}

/// An audited chain of rewrites from `goal.0` to `goal.1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationTrace {
    pub goal: (Term, Term),
    pub steps: Vec<TraceStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStepJson {
    pub rule: String,
    pub paper_ref: String,
    pub pos: Vec<usize>,
    pub before: String,
    pub after: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceJson {
    pub goal: [String; 2],
    pub steps: Vec<TraceStepJson>,
}

struct Builder<'a> {
    rules: &'a RuleSet,
    current: Term,
    steps: Vec<TraceStep>,
}

impl<'a> Builder<'a> {
    fn new(rules: &'a RuleSet, start: Term) -> Self {
        Builder {
            rules,
            current: start,
            steps: Vec::new(),
        }
    }

    fn rewrite(&mut self, name: &str, pos: Vec<usize>) {
        let rule = self.rules.get(name).expect("standard rule");
        let sub = self.current.at(&pos).expect("valid position");
        let new = rule
            .apply(sub)
            .unwrap_or_else(|| panic!("{name} does not apply to {sub}"));
        let after = self.current.replaced(&pos, new).expect("valid position");
        self.steps.push(TraceStep {
            rule: rule.name.to_string(),
            justification: rule.justification.to_string(),
            pos,
            before: self.current.clone(),
            after: after.clone(),
        });
        self.current = after;
    }

    fn finish(self, start: Term) -> DerivationTrace {
        DerivationTrace {
            goal: (start, self.current),
            steps: self.steps,
        }
    }
}

fn check_n(n: u32) -> Result<(), SphereError> {
    if n == 0 {
        return Err(SphereError::InvalidArgument("n must be at least 1".into()));
    }
    Ok(())
}

/// `Qeven(n) ≃ P1 /\ ... /\ P1` by induction: each step rewrites the
/// innermost even quadric with the cofiber rule and resolves it with the
/// split rule; the base case is `Qeven(1) ≃ P1`.
pub fn derive_even(n: u32) -> Result<DerivationTrace, SphereError> {
    check_n(n)?;
    let rules = RuleSet::standard();
    let start = Term::QuadEven(n);
    let mut b = Builder::new(&rules, start.clone());
    loop {
        let pos = b
            .current
            .find(&|t| matches!(t, Term::QuadEven(_)))
            .expect("an even quadric remains until the base case");
        if let Some(Term::QuadEven(1)) = b.current.at(&pos) {
            b.rewrite(names::Q2_IS_P1, pos);
            break;
        }
        b.rewrite(names::EVEN_COFIBER, pos.clone());
        b.rewrite(names::SPLIT_COFIBER, pos);
    }
    let trace = b.finish(start);
    debug_assert_eq!(trace.goal.1, Term::power(Term::P1, n));
    Ok(trace)
}

/// `X(n) ≃ pt`: the same induction with X-leaves, the axiom `X(1) ≃ pt`,
/// then collapsing smash products with a point.
pub fn derive_contractible(n: u32) -> Result<DerivationTrace, SphereError> {
    check_n(n)?;
    let rules = RuleSet::standard();
    let start = Term::X(n);
    let mut b = Builder::new(&rules, start.clone());
    loop {
        let pos = b
            .current
            .find(&|t| matches!(t, Term::X(_)))
            .expect("an X leaf remains until the base case");
        if let Some(Term::X(1)) = b.current.at(&pos) {
            b.rewrite(names::X2_CONTRACTIBLE, pos);
            break;
        }
        b.rewrite(names::X_COFIBER, pos.clone());
        b.rewrite(names::SPLIT_COFIBER, pos);
    }
    while let Some(pos) = b
        .current
        .find(&|t| matches!(t, Term::Smash(a, _) if **a == Term::Point))
    {
        b.rewrite(names::POINT_LEFT, pos);
    }
    let trace = b.finish(start);
    debug_assert_eq!(trace.goal.1, Term::Point);
    Ok(trace)
}

impl DerivationTrace {
    /// Re-applies every step against `rules` and checks that the chain
    /// starts at `goal.0`, ends at `goal.1`, and never changes the class.
    pub fn replay(&self, rules: &RuleSet) -> Result<(), SphereError> {
        let fail = |step: usize, detail: String| SphereError::Replay { step, detail };
        let mut current = self.goal.0.clone();
        for (k, s) in self.steps.iter().enumerate() {
            if s.before != current {
                return Err(fail(k, format!("expected {current}, trace has {}", s.before)));
            }
            let rule = rules
                .get(&s.rule)
                .ok_or_else(|| fail(k, format!("rule {} is not registered", s.rule)))?;
            if rule.justification != s.justification {
                return Err(fail(k, format!("justification of {} was altered", s.rule)));
            }
            let sub = current
                .at(&s.pos)
                .ok_or_else(|| fail(k, format!("no subterm at {:?}", s.pos)))?;
            let new = rule
                .apply(sub)
                .ok_or_else(|| fail(k, format!("{} does not apply to {sub}", s.rule)))?;
            let after = current.replaced(&s.pos, new).expect("position checked");
            if after != s.after {
                return Err(fail(k, format!("rewrite gives {after}, trace has {}", s.after)));
            }
            if after.class() != current.class() {
                return Err(fail(k, "class changed".into()));
            }
            current = after;
        }
        if current != self.goal.1 {
            return Err(fail(
                self.steps.len(),
                format!("chain ends at {current}, goal is {}", self.goal.1),
            ));
        }
        Ok(())
    }

    pub fn count(&self, rule: &str) -> usize {
        self.steps.iter().filter(|s| s.rule == rule).count()
    }

    pub fn to_json(&self) -> TraceJson {
        TraceJson {
            goal: [self.goal.0.to_string(), self.goal.1.to_string()],
            steps: self
                .steps
                .iter()
                .map(|s| TraceStepJson {
                    rule: s.rule.clone(),
                    paper_ref: s.justification.clone(),
                    pos: s.pos.clone(),
                    before: s.before.to_string(),
                    after: s.after.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &TraceJson) -> Result<Self, SphereError> {
        let steps = j
            .steps
            .iter()
            .map(|s| {
                Ok(TraceStep {
                    rule: s.rule.clone(),
                    justification: s.paper_ref.clone(),
                    pos: s.pos.clone(),
                    before: parse_term(&s.before)?,
                    after: parse_term(&s.after)?,
                })
            })
            .collect::<Result<Vec<_>, SphereError>>()?;
        Ok(DerivationTrace {
            goal: (parse_term(&j.goal[0])?, parse_term(&j.goal[1])?),
            steps,
        })
    }
}

impl fmt::Display for DerivationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "goal: {} ~ {}", self.goal.0, self.goal.1)?;
        for (k, s) in self.steps.iter().enumerate() {
            writeln!(f, "{:>3}. {} at {:?}: {}", k + 1, s.rule, s.pos, s.after)?;
            writeln!(f, "     ({})", s.justification)?;
        }
        Ok(())
    }
}
