use std::collections::BTreeMap;
use std::fmt;

use super::SphereError;

/// Pointed motivic-space expressions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Point,
    /// The simplicial circle.
    S1,
    Gm,
    P1,
    Smash(Box<Term>, Box<Term>),
    /// Disjoint base point.
    Plus(Box<Term>),
    /// `Smash(S1, t)`.
    Susp(Box<Term>),
    /// Cofiber of an inclusion `b → a`.
    Quot(Box<Term>, Box<Term>),
    /// `Q_{2m-1}`, `m ≥ 1`.
    QuadOdd(u32),
    /// `Q_{2m}`, `m ≥ 0`.
    QuadEven(u32),
    /// `X_{2n} = Q_{2n} ∖ E_n`, `n ≥ 1`.
    X(u32),
}

impl Term {
    pub fn smash(a: Term, b: Term) -> Term {
        Term::Smash(Box::new(a), Box::new(b))
    }

    pub fn plus(a: Term) -> Term {
        Term::Plus(Box::new(a))
    }

    pub fn susp(a: Term) -> Term {
        Term::Susp(Box::new(a))
    }

    pub fn quot(a: Term, b: Term) -> Term {
        Term::Quot(Box::new(a), Box::new(b))
    }

    /// Left-associated smash power, `k ≥ 1`.
    pub fn power(t: Term, k: u32) -> Term {
        assert!(k >= 1, "smash powers start at 1");
        (1..k).fold(t.clone(), |acc, _| Term::smash(acc, t.clone()))
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Smash(a, b) | Term::Quot(a, b) => vec![a, b],
            Term::Plus(a) | Term::Susp(a) => vec![a],
            _ => Vec::new(),
        }
    }

    /// Subterm at a path of child indices.
    pub fn at(&self, pos: &[usize]) -> Option<&Term> {
        match pos.split_first() {
            None => Some(self),
            Some((&k, rest)) => self.children().get(k)?.at(rest),
        }
    }

    /// A copy with the subterm at `pos` replaced.
    pub fn replaced(&self, pos: &[usize], new: Term) -> Option<Term> {
        let Some((&k, rest)) = pos.split_first() else {
            return Some(new);
        };
        let sub = |a: &Term| a.replaced(rest, new.clone()).map(Box::new);
        Some(match (self, k) {
            (Term::Smash(a, b), 0) => Term::Smash(sub(a)?, b.clone()),
            (Term::Smash(a, b), 1) => Term::Smash(a.clone(), sub(b)?),
            (Term::Quot(a, b), 0) => Term::Quot(sub(a)?, b.clone()),
            (Term::Quot(a, b), 1) => Term::Quot(a.clone(), sub(b)?),
            (Term::Plus(a), 0) => Term::Plus(sub(a)?),
            (Term::Susp(a), 0) => Term::Susp(sub(a)?),
            _ => return None,
        })
    }

    /// Path of the first subterm (preorder) satisfying `pred`.
    pub fn find(&self, pred: &impl Fn(&Term) -> bool) -> Option<Vec<usize>> {
        if pred(self) {
            return Some(Vec::new());
        }
        self.children().iter().enumerate().find_map(|(k, c)| {
            c.find(pred).map(|mut p| {
                p.insert(0, k);
                p
            })
        })
    }

    fn mentions_plus_or_quot(&self) -> bool {
        matches!(self, Term::Plus(_) | Term::Quot(..)) || self.children().iter().any(|c| c.mentions_plus_or_quot())
    }

    /// Formal class in `ℤ[s, t]`: `S1 ↦ s`, `Gm ↦ t`, smash multiplies,
    /// a disjoint base point adds 1, a cofiber subtracts, contractible
    /// pieces vanish.
    pub fn class(&self) -> ClassPoly {
        match self {
            Term::Point | Term::X(_) => ClassPoly::zero(2),
            Term::S1 => ClassPoly::monomial(vec![1, 0], 1),
            Term::Gm => ClassPoly::monomial(vec![0, 1], 1),
            Term::P1 => ClassPoly::monomial(vec![1, 1], 1),
            Term::QuadOdd(m) => ClassPoly::monomial(vec![m.saturating_sub(1), *m], 1),
            Term::QuadEven(m) => ClassPoly::monomial(vec![*m, *m], 1),
            Term::Smash(a, b) => a.class().mul(&b.class()),
            Term::Plus(a) => a.class().add(&ClassPoly::monomial(vec![0, 0], 1)),
            Term::Susp(a) => Term::S1.class().mul(&a.class()),
            Term::Quot(a, b) => a.class().sub(&b.class()),
        }
    }
}

/// The motivic sphere bidegree `(i, j)` of `S^i_s ∧ Gm^j`.
pub fn bidegree(t: &Term) -> Result<(u32, u32), SphereError> {
    if t.mentions_plus_or_quot() {
        return Err(SphereError::NonSphereTerm(format!(
            "{t} contains a disjoint base point or cofiber"
        )));
    }
    t.class()
        .as_sphere()
        .ok_or_else(|| SphereError::NonSphereTerm(format!("{t} is not a sphere")))
}

/// Sparse polynomial with integer coefficients; exponent vectors have a
/// fixed length (`s`, `t`, then one slot per formal variable).
#[derive(Clone, Debug)]
pub struct ClassPoly {
    dim: usize,
    terms: BTreeMap<Vec<u32>, i64>,
}

impl ClassPoly {
    pub fn zero(dim: usize) -> Self {
        ClassPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(exps: Vec<u32>, c: i64) -> Self {
        let mut p = Self::zero(exps.len());
        if c != 0 {
            p.terms.insert(exps, c);
        }
        p
    }

    /// A fresh formal variable in slot `k` of a `dim`-slot ring.
    pub fn variable(dim: usize, k: usize) -> Self {
        let mut e = vec![0; dim];
        e[k] = 1;
        Self::monomial(e, 1)
    }

    fn widened(&self, dim: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, &c)| {
                let mut e = e.clone();
                e.resize(dim, 0);
                (e, c)
            })
            .collect();
        ClassPoly { dim, terms }
    }

    fn combine(&self, other: &Self, sign: i64) -> Self {
        let dim = self.dim.max(other.dim);
        let mut out = self.widened(dim);
        for (e, c) in other.widened(dim).terms {
            let v = out.terms.entry(e.clone()).or_insert(0);
            *v += sign * c;
            if *v == 0 {
                out.terms.remove(&e);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -1)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let dim = self.dim.max(other.dim);
        let (a, b) = (self.widened(dim), other.widened(dim));
        let mut out = Self::zero(dim);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out = out.add(&Self::monomial(e, ca * cb));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(i, j)` when the class is the single monomial `s^i t^j`.
    pub fn as_sphere(&self) -> Option<(u32, u32)> {
        let mut it = self.terms.iter();
        match (it.next(), it.next()) {
            (Some((e, &1)), None) if e[2..].iter().all(|&x| x == 0) => Some((e[0], e[1])),
            _ => None,
        }
    }
}

impl PartialEq for ClassPoly {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl Eq for ClassPoly {}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Point => write!(f, "pt"),
            Term::S1 => write!(f, "S1"),
            Term::Gm => write!(f, "Gm"),
            Term::P1 => write!(f, "P1"),
            Term::QuadOdd(m) => write!(f, "Qodd({m})"),
            Term::QuadEven(m) => write!(f, "Qeven({m})"),
            Term::X(n) => write!(f, "X({n})"),
            Term::Plus(a) => write!(f, "Plus({a})"),
            Term::Susp(a) => write!(f, "Susp({a})"),
            Term::Quot(a, b) => write!(f, "Quot({a}, {b})"),
            Term::Smash(a, b) => match **b {
                Term::Smash(..) => write!(f, "{a} /\\ ({b})"),
                _ => write!(f, "{a} /\\ {b}"),
            },
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> SphereError {
        SphereError::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), SphereError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{tok}'")))
        }
    }

    fn int(&mut self) -> Result<u32, SphereError> {
        self.skip_ws();
        let len = self.rest().chars().take_while(|c| c.is_ascii_digit()).count();
        if len == 0 {
            return Err(self.err("expected an integer"));
        }
        let v = self.rest()[..len]
            .parse()
            .map_err(|_| self.err("integer out of range"))?;
        self.pos += len;
        Ok(v)
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let len = self.rest().chars().take_while(|c| c.is_ascii_alphanumeric()).count();
        if len == 0 || !self.rest().starts_with(|c: char| c.is_ascii_alphabetic()) {
            return None;
        }
        let id = &self.rest()[..len];
        self.pos += len;
        Some(id)
    }

    fn term(&mut self) -> Result<Term, SphereError> {
        let mut acc = self.power()?;
        while self.eat("/\\") {
            acc = Term::smash(acc, self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Term, SphereError> {
        let mut t = self.atom()?;
        while self.eat("^") {
            let at = self.pos;
            let k = self.int()?;
            if k == 0 {
                self.pos = at;
                return Err(self.err("smash powers start at 1"));
            }
            t = Term::power(t, k);
        }
        Ok(t)
    }

    fn indexed(&mut self, min: u32, what: &str) -> Result<u32, SphereError> {
        self.expect("(")?;
        let at = self.pos;
        let k = self.int()?;
        if k < min {
            self.pos = at;
            return Err(self.err(format!("{what} index must be at least {min}")));
        }
        self.expect(")")?;
        Ok(k)
    }

    fn atom(&mut self) -> Result<Term, SphereError> {
        if self.eat("(") {
            let t = self.term()?;
            self.expect(")")?;
            return Ok(t);
        }
        let start = self.pos;
        let Some(id) = self.ident() else {
            return Err(self.err("expected a term"));
        };
        let t = match id {
            "pt" => Term::Point,
            "S1" => Term::S1,
            "Gm" => Term::Gm,
            "P1" => Term::P1,
            "Qodd" => Term::QuadOdd(self.indexed(1, "Qodd")?),
            "Qeven" => Term::QuadEven(self.indexed(0, "Qeven")?),
            "X" => Term::X(self.indexed(1, "X")?),
            "Plus" | "Susp" => {
                self.expect("(")?;
                let a = self.term()?;
                self.expect(")")?;
                if id == "Plus" {
                    Term::plus(a)
                } else {
                    Term::susp(a)
                }
            }
            "Quot" => {
                self.expect("(")?;
                let a = self.term()?;
                self.expect(",")?;
                let b = self.term()?;
                self.expect(")")?;
                Term::quot(a, b)
            }
            other => {
                self.pos = start;
                return Err(self.err(format!("unknown symbol '{other}'")));
            }
        };
        Ok(t)
    }
}

pub fn parse_term(src: &str) -> Result<Term, SphereError> {
    let mut p = Parser { src, pos: 0 };
    let t = p.term()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(t)
}

impl std::str::FromStr for Term {
    type Err = SphereError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_bidegree() {
        let t = parse_term("S1 /\\ Gm^2").unwrap();
        assert_eq!(t, Term::smash(Term::S1, Term::smash(Term::Gm, Term::Gm)));
        assert_eq!(bidegree(&t).unwrap(), (1, 2));
        assert_eq!(parse_term("Qeven(3)").unwrap(), Term::QuadEven(3));
        let p4 = parse_term("P1^4").unwrap();
        assert_eq!(bidegree(&p4).unwrap(), (4, 4));
        assert_eq!(bidegree(&p4).unwrap(), bidegree(&Term::QuadEven(4)).unwrap());
        assert_eq!(bidegree(&Term::Gm).unwrap(), (0, 1));
        assert_eq!(bidegree(&Term::QuadOdd(3)).unwrap(), (2, 3));
    }

    #[test]
    fn printing_is_a_fixed_point() {
        for s in [
            "S1 /\\ Gm^2",
            "P1^3 /\\ (Gm /\\ S1)",
            "Quot(Plus(Qeven(2)) /\\ P1, P1)",
            "Susp(Qodd(4))",
            "((pt))",
        ] {
            let once = parse_term(s).unwrap().to_string();
            let twice = parse_term(&once).unwrap().to_string();
            assert_eq!(once, twice, "{s}");
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_term("S1 /\\ Foo") {
            Err(SphereError::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
        assert!(parse_term("Gm^0").is_err());
        assert!(parse_term("Qodd(0)").is_err());
        assert!(parse_term("S1 Gm").is_err());
    }

    #[test]
    fn plus_has_no_bidegree() {
        let t = parse_term("Plus(Qeven(1))").unwrap();
        assert!(matches!(bidegree(&t), Err(SphereError::NonSphereTerm(_))));
        assert!(bidegree(&Term::Point).is_err());
    }

    #[test]
    fn positions() {
        let t = parse_term("Gm /\\ Quot(P1, S1)").unwrap();
        assert_eq!(t.at(&[1, 0]), Some(&Term::P1));
        let r = t.replaced(&[1, 1], Term::Gm).unwrap();
        assert_eq!(r.to_string(), "Gm /\\ Quot(P1, Gm)");
        assert_eq!(t.find(&|x| *x == Term::S1), Some(vec![1, 1]));
        assert!(t.replaced(&[0, 0], Term::Gm).is_none());
    }
}
