use std::collections::HashMap;
use std::fmt;

use super::term::{ClassPoly, Term};
use super::SphereError;

/// `var + offset`, or a literal when `var` is `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPat {
    pub var: Option<&'static str>,
    pub offset: i64,
}

impl IntPat {
    pub fn lit(v: i64) -> Self {
        IntPat { var: None, offset: v }
    }

    pub fn var(name: &'static str, offset: i64) -> Self {
        IntPat {
            var: Some(name),
            offset,
        }
    }

    fn eval(&self, b: &Bindings) -> Option<i64> {
        match self.var {
            None => Some(self.offset),
            Some(v) => b.ints.get(v).map(|x| x + self.offset),
        }
    }

    fn bind(&self, value: u32, b: &mut Bindings) -> bool {
        let value = value as i64;
        match self.var {
            None => value == self.offset,
            Some(v) => {
                let want = value - self.offset;
                match b.ints.get(v) {
                    Some(&x) => x == want,
                    None => {
                        b.ints.insert(v, want);
                        true
                    }
                }
            }
        }
    }
}

impl fmt::Display for IntPat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.var, self.offset) {
            (None, v) => write!(f, "{v}"),
            (Some(v), 0) => write!(f, "?{v}"),
            (Some(v), o) if o > 0 => write!(f, "?{v}+{o}"),
            (Some(v), o) => write!(f, "?{v}-{}", -o),
        }
    }
}

/// Term patterns with term metavariables (`?X`) and integer metavariables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pat {
    Point,
    S1,
    Gm,
    P1,
    Smash(Box<Pat>, Box<Pat>),
    Plus(Box<Pat>),
    Susp(Box<Pat>),
    Quot(Box<Pat>, Box<Pat>),
    QuadOdd(IntPat),
    QuadEven(IntPat),
    X(IntPat),
    /// Left-associated smash power; only valid on the right-hand side.
    Pow(Box<Pat>, IntPat),
    Var(&'static str),
}

#[derive(Clone, Debug, Default)]
pub struct Bindings {
    terms: HashMap<&'static str, Term>,
    ints: HashMap<&'static str, i64>,
}

fn bx(p: Pat) -> Box<Pat> {
    Box::new(p)
}

impl Pat {
    pub fn smash(a: Pat, b: Pat) -> Pat {
        Pat::Smash(bx(a), bx(b))
    }

    pub fn quot(a: Pat, b: Pat) -> Pat {
        Pat::Quot(bx(a), bx(b))
    }

    pub fn plus(a: Pat) -> Pat {
        Pat::Plus(bx(a))
    }

    fn matches(&self, t: &Term, b: &mut Bindings) -> bool {
        match (self, t) {
            (Pat::Point, Term::Point) | (Pat::S1, Term::S1) | (Pat::Gm, Term::Gm) | (Pat::P1, Term::P1) => true,
            (Pat::Smash(p, q), Term::Smash(a, c)) | (Pat::Quot(p, q), Term::Quot(a, c)) => {
                p.matches(a, b) && q.matches(c, b)
            }
            (Pat::Plus(p), Term::Plus(a)) | (Pat::Susp(p), Term::Susp(a)) => p.matches(a, b),
            (Pat::QuadOdd(k), Term::QuadOdd(m)) | (Pat::QuadEven(k), Term::QuadEven(m)) | (Pat::X(k), Term::X(m)) => {
                k.bind(*m, b)
            }
            (Pat::Var(v), t) => match b.terms.get(v) {
                Some(bound) => bound == t,
                None => {
                    b.terms.insert(v, t.clone());
                    true
                }
            },
            _ => false,
        }
    }

    fn build(&self, b: &Bindings) -> Option<Term> {
        let idx = |k: &IntPat| k.eval(b).and_then(|v| u32::try_from(v).ok());
        Some(match self {
            Pat::Point => Term::Point,
            Pat::S1 => Term::S1,
            Pat::Gm => Term::Gm,
            Pat::P1 => Term::P1,
            Pat::Smash(p, q) => Term::smash(p.build(b)?, q.build(b)?),
            Pat::Quot(p, q) => Term::quot(p.build(b)?, q.build(b)?),
            Pat::Plus(p) => Term::plus(p.build(b)?),
            Pat::Susp(p) => Term::susp(p.build(b)?),
            Pat::QuadOdd(k) => Term::QuadOdd(idx(k).filter(|&m| m >= 1)?),
            Pat::QuadEven(k) => Term::QuadEven(idx(k)?),
            Pat::X(k) => Term::X(idx(k).filter(|&m| m >= 1)?),
            Pat::Pow(p, k) => Term::power(p.build(b)?, idx(k).filter(|&m| m >= 1)?),
            Pat::Var(v) => b.terms.get(v)?.clone(),
        })
    }

    fn collect_vars(&self, terms: &mut Vec<&'static str>, ints: &mut Vec<&'static str>) {
        let mut int = |k: &IntPat| {
            if let Some(v) = k.var {
                if !ints.contains(&v) {
                    ints.push(v);
                }
            }
        };
        match self {
            Pat::Smash(p, q) | Pat::Quot(p, q) => {
                p.collect_vars(terms, ints);
                q.collect_vars(terms, ints);
            }
            Pat::Plus(p) | Pat::Susp(p) => p.collect_vars(terms, ints),
            Pat::Pow(p, k) => {
                int(k);
                p.collect_vars(terms, ints);
            }
            Pat::QuadOdd(k) | Pat::QuadEven(k) | Pat::X(k) => int(k),
            Pat::Var(v) if !terms.contains(v) => terms.push(v),
            _ => {}
        }
    }

    /// Class with term metavariables as formal variables (slot `2 + index`)
    /// and integer metavariables taken from `ints`.
    fn class(&self, vars: &[&'static str], ints: &HashMap<&'static str, i64>) -> Option<ClassPoly> {
        let dim = 2 + vars.len();
        let b = Bindings {
            terms: HashMap::new(),
            ints: ints.clone(),
        };
        let leaf = |t: Term| t.class();
        Some(match self {
            Pat::Var(v) => {
                let k = vars.iter().position(|x| x == v)?;
                ClassPoly::variable(dim, 2 + k)
            }
            Pat::Smash(p, q) => p.class(vars, ints)?.mul(&q.class(vars, ints)?),
            Pat::Quot(p, q) => p.class(vars, ints)?.sub(&q.class(vars, ints)?),
            Pat::Plus(p) => p.class(vars, ints)?.add(&ClassPoly::monomial(vec![0, 0], 1)),
            Pat::Susp(p) => Term::S1.class().mul(&p.class(vars, ints)?),
            Pat::Pow(p, k) => {
                let e = k.eval(&b)?;
                if e < 1 {
                    return None;
                }
                let c = p.class(vars, ints)?;
                (1..e).fold(c.clone(), |acc, _| acc.mul(&c))
            }
            other => leaf(other.build(&b)?),
        })
    }
}

impl fmt::Display for Pat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pat::Point => write!(f, "pt"),
            Pat::S1 => write!(f, "S1"),
            Pat::Gm => write!(f, "Gm"),
            Pat::P1 => write!(f, "P1"),
            Pat::QuadOdd(k) => write!(f, "Qodd({k})"),
            Pat::QuadEven(k) => write!(f, "Qeven({k})"),
            Pat::X(k) => write!(f, "X({k})"),
            Pat::Plus(a) => write!(f, "Plus({a})"),
            Pat::Susp(a) => write!(f, "Susp({a})"),
            Pat::Quot(a, b) => write!(f, "Quot({a}, {b})"),
            Pat::Pow(a, k) => write!(f, "({a})^({k})"),
            Pat::Var(v) => write!(f, "?{v}"),
            Pat::Smash(a, b) => match **b {
                Pat::Smash(..) => write!(f, "{a} /\\ ({b})"),
                _ => write!(f, "{a} /\\ {b}"),
            },
        }
    }
}

/// A directed equivalence `lhs ≃ rhs`, applicable when every integer
/// metavariable meets its lower bound.
#[derive(Clone, Debug)]
pub struct Rule {
    pub name: &'static str,
    pub justification: &'static str,
    pub lhs: Pat,
    pub rhs: Pat,
    pub lower_bounds: Vec<(&'static str, i64)>,
}

impl Rule {
    pub fn apply(&self, t: &Term) -> Option<Term> {
        let mut b = Bindings::default();
        if !self.lhs.matches(t, &mut b) {
            return None;
        }
        let ok = self
            .lower_bounds
            .iter()
            .all(|(v, lo)| b.ints.get(v).is_some_and(|x| x >= lo));
        if !ok {
            return None;
        }
        self.rhs.build(&b)
    }

    /// Checks that both sides have the same formal class: term
    /// metavariables stay symbolic, integer metavariables range over
    /// `lower_bound ..= lower_bound + RANGE`.
    fn check_sound(&self) -> Result<(), SphereError> {
        const RANGE: i64 = 12;
        let (mut terms, mut ints) = (Vec::new(), Vec::new());
        self.lhs.collect_vars(&mut terms, &mut ints);
        let (mut rterms, mut rints) = (Vec::new(), Vec::new());
        self.rhs.collect_vars(&mut rterms, &mut rints);
        let unsound = |detail: String| SphereError::UnsoundRule {
            name: self.name.to_string(),
            detail,
        };
        if let Some(v) = rterms.iter().find(|v| !terms.contains(v)) {
            return Err(unsound(format!("?{v} is unbound on the left")));
        }
        if let Some(v) = rints.iter().find(|v| !ints.contains(v)) {
            return Err(unsound(format!("?{v} is unbound on the left")));
        }
        let lo = |v: &str| self.lower_bounds.iter().find(|(n, _)| *n == v).map_or(0, |(_, l)| *l);
        // all integer assignments in the box; rules use at most two
        let mut assignments = vec![HashMap::new()];
        for v in &ints {
            assignments = assignments
                .into_iter()
                .flat_map(|a: HashMap<&'static str, i64>| {
                    (lo(v)..=lo(v) + RANGE).map(move |x| {
                        let mut a = a.clone();
                        a.insert(*v, x);
                        a
                    })
                })
                .collect();
        }
        for a in &assignments {
            let l = self.lhs.class(&terms, a);
            let r = self.rhs.class(&terms, a);
            match (l, r) {
                (Some(l), Some(r)) if l == r => {}
                (Some(_), Some(_)) => {
                    return Err(unsound(format!("classes differ at {a:?}")));
                }
                _ => {
                    return Err(unsound(format!("a side is undefined at {a:?}")));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} => {}", self.name, self.lhs, self.rhs)?;
        for (v, lo) in &self.lower_bounds {
            write!(f, " [?{v} >= {lo}]")?;
        }
        Ok(())
    }
}

/// An immutable table of rules, each checked for class preservation when
/// registered.
#[derive(Clone, Debug, Default)]
pub struct RuleSet {
    rules: Vec<Rule>,
}

pub mod names {
    pub const Q2_IS_P1: &str = "q2-is-p1";
    pub const Q4_IS_P1_SQUARED: &str = "q4-is-p1-smash-p1";
    pub const EVEN_COFIBER: &str = "even-cofiber";
    pub const SPLIT_COFIBER: &str = "split-cofiber";
    pub const OCTAHEDRAL: &str = "octahedral";
    pub const Q1_IS_GM: &str = "q1-is-gm";
    pub const ODD_CHAIN: &str = "odd-chain";
    pub const P1_IS_S1_GM: &str = "p1-is-s1-smash-gm";
    pub const SUSP: &str = "suspension";
    pub const X2_CONTRACTIBLE: &str = "x2-contractible";
    pub const X_COFIBER: &str = "x-cofiber";
    pub const POINT_LEFT: &str = "point-smash";
    pub const POINT_RIGHT: &str = "smash-point";
}

impl RuleSet {
    pub fn register(&mut self, rule: Rule) -> Result<(), SphereError> {
        if self.get(rule.name).is_some() {
            return Err(SphereError::UnsoundRule {
                name: rule.name.to_string(),
                detail: "name already registered".into(),
            });
        }
        rule.check_sound()?;
        self.rules.push(rule);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// The axioms and resolved cofiber sequences of the quadric calculus.
    pub fn standard() -> RuleSet {
        use names::*;
        let n = |o| IntPat::var("n", o);
        let m = |o| IntPat::var("m", o);
        let v = Pat::Var;
        let rules = vec![
            Rule {
                name: Q2_IS_P1,
                justification: "Q2 is SL2 modulo its diagonal torus, which is P1 up to A1-equivalence",
                lhs: Pat::QuadEven(IntPat::lit(1)),
                rhs: Pat::P1,
                lower_bounds: vec![],
            },
            Rule {
                name: Q4_IS_P1_SQUARED,
                justification: "Q4 is A1-equivalent to P1 smash P1",
                lhs: Pat::QuadEven(IntPat::lit(2)),
                rhs: Pat::smash(Pat::P1, Pat::P1),
                lower_bounds: vec![],
            },
            Rule {
                name: EVEN_COFIBER,
                justification: "the open chart {xn != 0} and its complement Q_{2n-2} x A1 give a cofiber sequence (Q_{2n-2})_+ smash P1 -> Q_{2n} with fiber P1",
                lhs: Pat::QuadEven(n(0)),
                rhs: Pat::quot(Pat::smash(Pat::plus(Pat::QuadEven(n(-1))), Pat::P1), Pat::P1),
                lower_bounds: vec![("n", 2)],
            },
            Rule {
                name: SPLIT_COFIBER,
                justification: "the cofiber sequence Y -> X_+ smash Y -> X smash Y splits",
                lhs: Pat::quot(Pat::smash(Pat::plus(v("X")), v("Y")), v("Y")),
                rhs: Pat::smash(v("X"), v("Y")),
                lower_bounds: vec![],
            },
            Rule {
                name: OCTAHEDRAL,
                justification: "octahedral axiom for the composite X -> Y -> Z",
                lhs: Pat::quot(Pat::quot(v("Z"), v("X")), Pat::quot(v("Y"), v("X"))),
                rhs: Pat::quot(v("Z"), v("Y")),
                lower_bounds: vec![],
            },
            Rule {
                name: Q1_IS_GM,
                justification: "Q1 = {x1 y1 = 1} is Gm",
                lhs: Pat::QuadOdd(IntPat::lit(1)),
                rhs: Pat::Gm,
                lower_bounds: vec![],
            },
            Rule {
                name: ODD_CHAIN,
                justification: "Q_{2m-1} -> A^m minus 0 is an A1-weak equivalence, and A^m minus 0 is S^{m-1}_s smash Gm^m",
                lhs: Pat::QuadOdd(m(0)),
                rhs: Pat::smash(Pat::Pow(bx(Pat::S1), m(-1)), Pat::Pow(bx(Pat::Gm), m(0))),
                lower_bounds: vec![("m", 2)],
            },
            Rule {
                name: P1_IS_S1_GM,
                justification: "P1 is S1_s smash Gm",
                lhs: Pat::P1,
                rhs: Pat::smash(Pat::S1, Pat::Gm),
                lower_bounds: vec![],
            },
            Rule {
                name: SUSP,
                justification: "simplicial suspension is smashing with S1_s",
                lhs: Pat::Susp(bx(v("X"))),
                rhs: Pat::smash(Pat::S1, v("X")),
                lower_bounds: vec![],
            },
            Rule {
                name: X2_CONTRACTIBLE,
                justification: "X2 is isomorphic to A2",
                lhs: Pat::X(IntPat::lit(1)),
                rhs: Pat::Point,
                lower_bounds: vec![],
            },
            Rule {
                name: X_COFIBER,
                justification: "the chart {xn != 0} of X_{2n} and its complement X_{2n-2} x A1 give a cofiber sequence (X_{2n-2})_+ smash P1 -> X_{2n} with fiber P1",
                lhs: Pat::X(n(0)),
                rhs: Pat::quot(Pat::smash(Pat::plus(Pat::X(n(-1))), Pat::P1), Pat::P1),
                lower_bounds: vec![("n", 2)],
            },
            Rule {
                name: POINT_LEFT,
                justification: "smashing with a point gives a point",
                lhs: Pat::smash(Pat::Point, v("Y")),
                rhs: Pat::Point,
                lower_bounds: vec![],
            },
            Rule {
                name: POINT_RIGHT,
                justification: "smashing with a point gives a point",
                lhs: Pat::smash(v("Y"), Pat::Point),
                rhs: Pat::Point,
                lower_bounds: vec![],
            },
        ];
        let mut set = RuleSet::default();
        for r in rules {
            set.register(r).expect("standard rules preserve classes");
        }
        set
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::parse_term;

    #[test]
    fn standard_rules_register() {
        let rs = RuleSet::standard();
        assert_eq!(rs.rules().len(), 13);
    }

    #[test]
    fn cofiber_and_split() {
        let rs = RuleSet::standard();
        let cof = rs.get(names::EVEN_COFIBER).unwrap();
        let t = cof.apply(&Term::QuadEven(3)).unwrap();
        assert_eq!(t.to_string(), "Quot(Plus(Qeven(2)) /\\ P1, P1)");
        assert!(cof.apply(&Term::QuadEven(1)).is_none());
        let split = rs.get(names::SPLIT_COFIBER).unwrap();
        assert_eq!(split.apply(&t).unwrap(), parse_term("Qeven(2) /\\ P1").unwrap());
    }

    #[test]
    fn odd_chain_builds_powers() {
        let rs = RuleSet::standard();
        let r = rs.get(names::ODD_CHAIN).unwrap();
        let t = r.apply(&Term::QuadOdd(3)).unwrap();
        assert_eq!(t, parse_term("S1^2 /\\ (Gm^3)").unwrap());
    }

    #[test]
    fn unsound_rules_are_refused() {
        let mut rs = RuleSet::default();
        let bad = Rule {
            name: "bad",
            justification: "",
            lhs: Pat::QuadEven(IntPat::var("n", 0)),
            rhs: Pat::Pow(Box::new(Pat::P1), IntPat::var("n", 1)),
            lower_bounds: vec![("n", 1)],
        };
        assert!(matches!(rs.register(bad), Err(SphereError::UnsoundRule { .. })));
        let dropped = Rule {
            name: "drops-plus",
            justification: "",
            lhs: Pat::smash(Pat::plus(Pat::Var("X")), Pat::Var("Y")),
            rhs: Pat::smash(Pat::Var("X"), Pat::Var("Y")),
            lower_bounds: vec![],
        };
        assert!(rs.register(dropped).is_err());
        let unbound = Rule {
            name: "unbound",
            justification: "",
            lhs: Pat::P1,
            rhs: Pat::Var("X"),
            lower_bounds: vec![],
        };
        assert!(rs.register(unbound).is_err());
    }
}
