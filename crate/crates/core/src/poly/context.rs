use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{Monomial, PolyError, Polynomial};

/// Monomial order. Variables are compared in the context's declared
/// precedence, which is also the storage order of exponent vectors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonomialOrder {
    #[default]
    GradedLex,
    Lex,
}

/// Coefficient domain. The prime-field mode runs the same code path with
/// coefficients reduced into `[0, p)` and is only meant for cross-checks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoeffDomain {
    #[default]
    Integers,
    PrimeField(u64),
}

/// A presented ring `R[vars] / (relation)` where the relation, if any, is a
/// single generator. A single polynomial is a Gröbner basis of the principal
/// ideal it generates, so reduction by its leading term yields unique normal
/// forms whenever the leading coefficient is invertible in the coefficient
/// domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingContext {
    names: Vec<String>,
    order: MonomialOrder,
    domain: CoeffDomain,
    relation: Option<Relation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Relation {
    poly: Polynomial,
    lead: Monomial,
    // inverse of the leading coefficient in the coefficient domain
    lead_inv: BigInt,
}

type OrderKey = (u32, Monomial);

impl RingContext {
    /// Free polynomial ring on `names`, in the given precedence order.
    pub fn new<S: AsRef<str>>(names: &[S], order: MonomialOrder, domain: CoeffDomain) -> Result<Self, PolyError> {
        let mut seen = HashSet::new();
        let mut owned = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            if n.is_empty() || !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(PolyError::InvalidVariableName(n.to_string()));
            }
            if n.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                return Err(PolyError::InvalidVariableName(n.to_string()));
            }
            if !seen.insert(n) {
                return Err(PolyError::DuplicateVariable(n.to_string()));
            }
            owned.push(n.to_string());
        }
        if let CoeffDomain::PrimeField(p) = domain {
            if p < 2 {
                return Err(PolyError::InvalidModulus(p));
            }
        }
        Ok(RingContext {
            names: owned,
            order,
            domain,
            relation: None,
        })
    }

    pub fn free<S: AsRef<str>>(names: &[S]) -> Result<Self, PolyError> {
        Self::new(names, MonomialOrder::GradedLex, CoeffDomain::Integers)
    }

    /// Installs `relation` as the principal relation. Its leading monomial
    /// becomes the reduction target.
    pub fn with_relation(mut self, relation: Polynomial) -> Result<Self, PolyError> {
        self.check_arity(&relation)?;
        let relation = self.canonical(relation.terms);
        let Some((lc, lead)) = relation.leading_term().cloned() else {
            return Err(PolyError::ZeroRelation);
        };
        let lead_inv = match self.domain {
            CoeffDomain::Integers => {
                if lc.abs().is_one() {
                    lc.clone()
                } else {
                    return Err(PolyError::NonUnitLeadingCoefficient(lc.to_string()));
                }
            }
            CoeffDomain::PrimeField(p) => {
                let p = BigInt::from(p);
                lc.modpow(&(&p - 2u32), &p)
            }
        };
        self.relation = Some(Relation {
            poly: relation,
            lead,
            lead_inv,
        });
        Ok(self)
    }

    /// The same variables and order without the relation.
    pub fn without_relation(&self) -> RingContext {
        RingContext {
            relation: None,
            ..self.clone()
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn domain(&self) -> CoeffDomain {
        self.domain
    }

    pub fn relation(&self) -> Option<&Polynomial> {
        self.relation.as_ref().map(|r| &r.poly)
    }

    pub fn relation_lead(&self) -> Option<&Monomial> {
        self.relation.as_ref().map(|r| &r.lead)
    }

    pub fn var_index(&self, name: &str) -> Result<usize, PolyError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    pub fn var(&self, name: &str) -> Result<Polynomial, PolyError> {
        Ok(self.var_at(self.var_index(name)?))
    }

    pub fn var_at(&self, index: usize) -> Polynomial {
        Polynomial::from_sorted(vec![(BigInt::one(), Monomial::var(self.nvars(), index))])
    }

    pub fn constant(&self, c: impl Into<BigInt>) -> Polynomial {
        self.monomial_term(c.into(), Monomial::one(self.nvars()))
    }

    pub fn one(&self) -> Polynomial {
        self.constant(1)
    }

    pub fn monomial_term(&self, c: BigInt, m: Monomial) -> Polynomial {
        let c = self.norm_coef(c);
        if c.is_zero() {
            Polynomial::zero()
        } else {
            Polynomial::from_sorted(vec![(c, m)])
        }
    }

    pub fn check_arity(&self, p: &Polynomial) -> Result<(), PolyError> {
        match p.terms.iter().find(|(_, m)| m.len() != self.nvars()) {
            Some((_, m)) => Err(PolyError::ArityMismatch {
                expected: self.nvars(),
                found: m.len(),
            }),
            None => Ok(()),
        }
    }

    pub fn cmp_monomials(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.order {
            MonomialOrder::GradedLex => a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)),
            MonomialOrder::Lex => a.cmp(b),
        }
    }

    fn key(&self, m: Monomial) -> OrderKey {
        match self.order {
            MonomialOrder::GradedLex => (m.degree(), m),
            MonomialOrder::Lex => (0, m),
        }
    }

    pub(crate) fn norm_coef(&self, c: BigInt) -> BigInt {
        match self.domain {
            CoeffDomain::Integers => c,
            CoeffDomain::PrimeField(p) => c.mod_floor(&BigInt::from(p)),
        }
    }

    /// Canonical form of an arbitrary list of terms (no relation reduction).
    pub fn canonical(&self, terms: impl IntoIterator<Item = (BigInt, Monomial)>) -> Polynomial {
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (c, m) in terms {
            *acc.entry(m).or_insert_with(BigInt::zero) += c;
        }
        self.finish(acc)
    }

    fn finish(&self, acc: HashMap<Monomial, BigInt>) -> Polynomial {
        let mut terms: Vec<(BigInt, Monomial)> = acc
            .into_iter()
            .filter_map(|(m, c)| {
                let c = self.norm_coef(c);
                (!c.is_zero()).then_some((c, m))
            })
            .collect();
        terms.sort_by(|a, b| self.cmp_monomials(&b.1, &a.1));
        Polynomial::from_sorted(terms)
    }

    pub fn add(&self, p: &Polynomial, q: &Polynomial) -> Polynomial {
        self.merge(p, q, false)
    }

    pub fn sub(&self, p: &Polynomial, q: &Polynomial) -> Polynomial {
        self.merge(p, q, true)
    }

    fn merge(&self, p: &Polynomial, q: &Polynomial, negate_q: bool) -> Polynomial {
        let mut out = Vec::with_capacity(p.terms.len() + q.terms.len());
        let (mut i, mut j) = (0, 0);
        let sign = |c: &BigInt| if negate_q { -c } else { c.clone() };
        while i < p.terms.len() && j < q.terms.len() {
            let (a, b) = (&p.terms[i], &q.terms[j]);
            match self.cmp_monomials(&a.1, &b.1) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((self.norm_coef(sign(&b.0)), b.1.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.norm_coef(&a.0 + sign(&b.0));
                    if !c.is_zero() {
                        out.push((c, a.1.clone()));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(p.terms[i..].iter().cloned());
        out.extend(q.terms[j..].iter().map(|(c, m)| (self.norm_coef(sign(c)), m.clone())));
        Polynomial::from_sorted(out)
    }

    pub fn neg(&self, p: &Polynomial) -> Polynomial {
        Polynomial::from_sorted(p.terms.iter().map(|(c, m)| (self.norm_coef(-c), m.clone())).collect())
    }

    pub fn scale(&self, p: &Polynomial, c: &BigInt) -> Polynomial {
        self.canonical(p.terms.iter().map(|(a, m)| (a * c, m.clone())))
    }

    /// Product in the free ring (no relation reduction).
    pub fn mul(&self, p: &Polynomial, q: &Polynomial) -> Polynomial {
        if p.is_zero() || q.is_zero() {
            return Polynomial::zero();
        }
        let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(p.terms.len() * q.terms.len());
        for (a, ma) in &p.terms {
            for (b, mb) in &q.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(BigInt::zero) += a * b;
            }
        }
        self.finish(acc)
    }

    /// Power in the free ring.
    pub fn pow(&self, p: &Polynomial, e: u32) -> Polynomial {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, p);
        }
        acc
    }

    /// Normal form modulo the relation: no monomial of the result is
    /// divisible by the relation's leading monomial.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        let Some(rel) = &self.relation else {
            return p.clone();
        };
        if !p.terms.iter().any(|(_, m)| rel.lead.divides(m)) {
            return p.clone();
        }
        let tail = &rel.poly.terms[1..];
        let mut work: BTreeMap<OrderKey, BigInt> =
            p.terms.iter().map(|(c, m)| (self.key(m.clone()), c.clone())).collect();
        let mut out = Vec::new();
        while let Some(((_, m), c)) = work.pop_last() {
            let c = self.norm_coef(c);
            if c.is_zero() {
                continue;
            }
            match m.div(&rel.lead) {
                Some(q) => {
                    let factor = c * &rel.lead_inv;
                    for (gc, gm) in tail {
                        let e = work.entry(self.key(gm.mul(&q))).or_insert_with(BigInt::zero);
                        *e -= &factor * gc;
                    }
                }
                None => out.push((c, m)),
            }
        }
        Polynomial::from_sorted(out)
    }

    pub fn mul_reduced(&self, p: &Polynomial, q: &Polynomial) -> Polynomial {
        self.reduce(&self.mul(p, q))
    }

    pub fn pow_reduced(&self, p: &Polynomial, e: u32) -> Polynomial {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul_reduced(&acc, p);
        }
        acc
    }

    /// Multivariate division of `p` by `divisors` in the free ring: returns
    /// quotients `q` and remainder `r` with `p = Σ qi·di + r`, where no term
    /// of `r` is divisible by a leading term of any `di`. Over the integers a
    /// leading term divides only when its coefficient divides exactly.
    pub fn divide(&self, p: &Polynomial, divisors: &[Polynomial]) -> (Vec<Polynomial>, Polynomial) {
        let mut quotients: Vec<Vec<(BigInt, Monomial)>> = vec![Vec::new(); divisors.len()];
        let mut work: BTreeMap<OrderKey, BigInt> =
            p.terms.iter().map(|(c, m)| (self.key(m.clone()), c.clone())).collect();
        let mut rem = Vec::new();
        while let Some(((_, m), c)) = work.pop_last() {
            let c = self.norm_coef(c);
            if c.is_zero() {
                continue;
            }
            let hit = divisors.iter().enumerate().find_map(|(k, d)| {
                let (lc, lm) = d.leading_term()?;
                let q = m.div(lm)?;
                let f = self.coef_quotient(&c, lc)?;
                Some((k, q, f))
            });
            match hit {
                Some((k, q, f)) => {
                    for (gc, gm) in &divisors[k].terms[1..] {
                        let e = work.entry(self.key(gm.mul(&q))).or_insert_with(BigInt::zero);
                        *e -= &f * gc;
                    }
                    quotients[k].push((f, q));
                }
                None => rem.push((c, m)),
            }
        }
        let quotients = quotients.into_iter().map(|t| self.canonical(t)).collect();
        (quotients, Polynomial::from_sorted(rem))
    }

    fn coef_quotient(&self, c: &BigInt, lc: &BigInt) -> Option<BigInt> {
        match self.domain {
            CoeffDomain::Integers => (c % lc).is_zero().then(|| c / lc),
            CoeffDomain::PrimeField(p) => {
                let p = BigInt::from(p);
                Some((c * lc.modpow(&(&p - 2u32), &p)).mod_floor(&p))
            }
        }
    }

    /// Evaluates `p` by substituting `images[i]` for variable `i`. `one` fixes
    /// the target ring.
    pub fn eval<T: crate::ring::RingElem>(&self, p: &Polynomial, images: &[T], one: &T) -> T {
        assert_eq!(images.len(), self.nvars(), "one image per variable");
        let mut powers: Vec<Vec<T>> = images.iter().map(|_| vec![one.clone()]).collect();
        let mut acc = one.zero_like();
        for (c, m) in &p.terms {
            let mut t = one.scaled(c);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().times(&images[i]);
                    cache.push(next);
                }
                t = t.times(&cache[e as usize]);
            }
            acc = acc.plus(&t);
        }
        acc
    }

    /// Polynomial substitution: `images[i]` (a polynomial of `target`)
    /// replaces variable `i` of this context. No relation reduction.
    pub fn substitute(&self, p: &Polynomial, images: &[Polynomial], target: &RingContext) -> Polynomial {
        assert_eq!(images.len(), self.nvars(), "one image per variable");
        let mut acc = Polynomial::zero();
        for (c, m) in &p.terms {
            let mut t = target.constant(c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = target.mul(&t, &target.pow(&images[i], e));
                }
            }
            acc = target.add(&acc, &t);
        }
        acc
    }

    /// `p` is literally divisible by variable `index`: returns `p / var`.
    pub fn div_by_var(&self, p: &Polynomial, index: usize) -> Option<Polynomial> {
        if p.terms.iter().any(|(_, m)| m.exponents()[index] == 0) {
            return None;
        }
        Some(Polynomial::from_sorted(
            p.terms
                .iter()
                .map(|(c, m)| (c.clone(), m.with_exponent(index, m.exponents()[index] - 1)))
                .collect(),
        ))
    }

    /// Exact division of `p` by `1 + var`, treating `p` as a univariate
    /// polynomial in that variable with coefficients in the others.
    pub fn div_by_one_plus_var(&self, p: &Polynomial, index: usize) -> Option<Polynomial> {
        if p.is_zero() {
            return Some(Polynomial::zero());
        }
        // group by the exponent vector with `index` zeroed
        let mut groups: HashMap<Monomial, BTreeMap<u32, BigInt>> = HashMap::new();
        for (c, m) in &p.terms {
            groups
                .entry(m.with_exponent(index, 0))
                .or_default()
                .insert(m.exponents()[index], c.clone());
        }
        let mut out = Vec::new();
        for (base, coeffs) in groups {
            let deg = *coeffs.keys().next_back().unwrap();
            if deg == 0 {
                return None;
            }
            // synthetic division by (v + 1) from the top
            let mut carry = BigInt::zero();
            let mut quotient = vec![BigInt::zero(); deg as usize];
            for k in (1..=deg).rev() {
                let a = coeffs.get(&k).cloned().unwrap_or_default();
                let q = self.norm_coef(a - &carry);
                carry = q.clone();
                quotient[(k - 1) as usize] = q;
            }
            let a0 = coeffs.get(&0).cloned().unwrap_or_default();
            if !self.norm_coef(a0 - carry).is_zero() {
                return None;
            }
            for (k, q) in quotient.into_iter().enumerate() {
                if !q.is_zero() {
                    out.push((q, base.with_exponent(index, k as u32)));
                }
            }
        }
        Some(self.canonical(out))
    }

    pub fn display<'a>(&'a self, p: &'a Polynomial) -> PolyDisplay<'a> {
        PolyDisplay { ctx: self, poly: p }
    }
}

pub struct PolyDisplay<'a> {
    ctx: &'a RingContext,
    poly: &'a Polynomial,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (c, m)) in self.poly.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ctx.names[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ctx.names[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
