use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::certificate::apply_step;
use super::{alpha_in, check_range, ElementaryCertificate, ElementaryStep, Side, StepKind, SuslinError};
use crate::linalg::RingMatrix;
use crate::poly::{Polynomial, QuotientElement, RingContext};
use crate::quadric::{make_quadric, Parity};
use crate::ring::RingElem;

/// Bounds for the pivot search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Pivot candidates tried at each level before backtracking.
    pub branch: usize,
    /// Levels at which alternatives are explored; deeper levels commit to
    /// the first candidate.
    pub backtrack_depth: usize,
    /// Total search nodes before giving up.
    pub max_nodes: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            branch: 4,
            backtrack_depth: 4,
            max_nodes: 256,
        }
    }
}

#[derive(Clone)]
struct State {
    m: RingMatrix,
    rows: Vec<usize>,
    cols: Vec<usize>,
    steps: Vec<ElementaryStep>,
    pivots: Vec<(usize, usize)>,
}

struct Candidate {
    r: usize,
    c: usize,
    steps: Vec<ElementaryStep>,
    cost: usize,
}

fn unit_sign(e: &QuotientElement) -> Option<BigInt> {
    e.value().as_constant().filter(|c| c.abs().is_one())
}

fn add_step(side: Side, i: usize, j: usize, scalar: QuotientElement) -> ElementaryStep {
    ElementaryStep {
        side,
        kind: StepKind::AddMultiple,
        i,
        j,
        scalar,
    }
}

fn swap_step(ctx: &Arc<RingContext>, side: Side, i: usize, j: usize) -> ElementaryStep {
    ElementaryStep {
        side,
        kind: StepKind::SwapWithSign,
        i,
        j,
        scalar: QuotientElement::zero(ctx),
    }
}

/// Tries to turn entry `(r, c)` into a unit by adding multiples of the other
/// active lines. The lift `1 − a` is taken as is and shifted by `±(relation)`,
/// and each lift is divided by the other entries of the line.
fn make_unit(st: &State, r: usize, c: usize, side: Side) -> Option<Vec<ElementaryStep>> {
    let ctx = st.m.get(0, 0).context().clone();
    let rel = ctx.relation().cloned().unwrap_or_else(Polynomial::zero);
    let (others, entry): (Vec<usize>, Vec<Polynomial>) = match side {
        Side::Row => st
            .rows
            .iter()
            .filter(|&&i| i != r && !st.m.get(i, c).is_zero())
            .map(|&i| (i, st.m.get(i, c).value().clone()))
            .unzip(),
        Side::Col => st
            .cols
            .iter()
            .filter(|&&j| j != c && !st.m.get(r, j).is_zero())
            .map(|&j| (j, st.m.get(r, j).value().clone()))
            .unzip(),
    };
    if others.is_empty() {
        return None;
    }
    let line = match side {
        Side::Row => r,
        Side::Col => c,
    };
    let target = ctx.sub(&ctx.one(), st.m.get(r, c).value());
    for lift in [target.clone(), ctx.add(&target, &rel), ctx.sub(&target, &rel)] {
        let (qs, rem) = ctx.divide(&lift, &entry);
        if !ctx.reduce(&rem).is_zero() {
            continue;
        }
        let steps: Vec<ElementaryStep> = others
            .iter()
            .zip(qs)
            .filter(|(_, q)| !q.is_zero())
            .map(|(&k, q)| add_step(side, line, k, QuotientElement::new(&ctx, q)))
            .collect();
        return Some(steps);
    }
    None
}

fn candidates(st: &State) -> Vec<Candidate> {
    let mut out = Vec::new();
    for &r in &st.rows {
        for &c in &st.cols {
            if unit_sign(st.m.get(r, c)).is_some() {
                out.push(Candidate {
                    r,
                    c,
                    steps: Vec::new(),
                    cost: 0,
                });
                continue;
            }
            for side in [Side::Row, Side::Col] {
                if let Some(steps) = make_unit(st, r, c, side) {
                    let cost = steps.iter().map(|s| s.scalar.value().num_terms()).sum::<usize>();
                    out.push(Candidate { r, c, steps, cost });
                }
            }
        }
    }
    out.sort_by_key(|cand| (cand.cost, cand.r, cand.c));
    out
}

/// Applies the candidate's steps and clears the pivot's row and column.
fn eliminate(st: &State, cand: &Candidate) -> Result<State, SuslinError> {
    let mut next = st.clone();
    for step in &cand.steps {
        apply_step(&mut next.m, step)?;
        next.steps.push(step.clone());
    }
    let (r, c) = (cand.r, cand.c);
    let sign = unit_sign(next.m.get(r, c))
        .ok_or_else(|| SuslinError::InvalidCertificate(format!("pivot ({r}, {c}) is not a unit after its steps")))?;
    for &i in &st.rows {
        if i == r || next.m.get(i, c).is_zero() {
            continue;
        }
        let s = next.m.get(i, c).scaled(&sign).negated();
        let step = add_step(Side::Row, i, r, s);
        apply_step(&mut next.m, &step)?;
        next.steps.push(step);
    }
    for &j in &st.cols {
        if j == c || next.m.get(r, j).is_zero() {
            continue;
        }
        let s = next.m.get(r, j).scaled(&sign).negated();
        let step = add_step(Side::Col, j, c, s);
        apply_step(&mut next.m, &step)?;
        next.steps.push(step);
    }
    next.rows.retain(|&i| i != r);
    next.cols.retain(|&j| j != c);
    next.pivots.push((r, c));
    Ok(next)
}

fn search(st: State, needed: usize, limits: &SearchLimits, nodes: &mut usize) -> Result<Option<State>, SuslinError> {
    if st.pivots.len() == needed {
        return Ok(Some(st));
    }
    *nodes += 1;
    if *nodes > limits.max_nodes {
        return Ok(None);
    }
    let width = if st.pivots.len() < limits.backtrack_depth {
        limits.branch
    } else {
        1
    };
    for cand in candidates(&st).iter().take(width) {
        let next = eliminate(&st, cand)?;
        if let Some(done) = search(next, needed, limits, nodes)? {
            return Ok(Some(done));
        }
    }
    Ok(None)
}

/// Moves the pivots onto the trailing diagonal and makes them `+1`.
fn place_pivots(st: &mut State) -> Result<(), SuslinError> {
    let ctx = st.m.get(0, 0).context().clone();
    let size = st.m.rows();
    let k = st.pivots.len();
    for side in [Side::Row, Side::Col] {
        let mut at: Vec<usize> = (0..size).collect();
        for (p, &(r, c)) in st.pivots.clone().iter().enumerate() {
            let target = size - k + p;
            let orig = if side == Side::Row { r } else { c };
            let cur = at.iter().position(|&o| o == orig).unwrap();
            if cur != target {
                let step = swap_step(&ctx, side, target, cur);
                apply_step(&mut st.m, &step)?;
                st.steps.push(step);
                at.swap(target, cur);
            }
        }
    }
    for t in size - k..size {
        let sign = unit_sign(st.m.get(t, t))
            .ok_or_else(|| SuslinError::InvalidCertificate(format!("diagonal entry {t} is not a unit")))?;
        if sign.is_negative() {
            // two signed swaps negate both rows
            for _ in 0..2 {
                let step = swap_step(&ctx, Side::Row, t, 0);
                apply_step(&mut st.m, &step)?;
                st.steps.push(step);
            }
        }
    }
    Ok(())
}

fn is_block_form(m: &RingMatrix, n: usize) -> bool {
    (0..m.rows()).all(|i| {
        (0..m.cols()).all(|j| {
            let e = m.get(i, j);
            match (i < n, j < n) {
                (true, true) => true,
                (false, false) if i == j => e.value().is_one(),
                _ => e.is_zero(),
            }
        })
    })
}

/// `αn` over `O(Q_{2n-1})`.
pub fn alpha_on_quadric(n: usize) -> Result<RingMatrix, SuslinError> {
    let q = make_quadric(Parity::Odd, n)?;
    alpha_in(q.context(), n)
}

/// Reduces `αn` over `O(Q_{2n-1})` to `βn ⊕ I` by elementary operations.
pub fn suslin_beta(n: usize) -> Result<(RingMatrix, ElementaryCertificate), SuslinError> {
    suslin_beta_with(n, SearchLimits::default())
}

pub fn suslin_beta_with(n: usize, limits: SearchLimits) -> Result<(RingMatrix, ElementaryCertificate), SuslinError> {
    check_range(n, 1, super::MAX_ALPHA_N)?;
    let alpha = alpha_on_quadric(n)?;
    let size = alpha.rows();
    let needed = size - n;
    let start = State {
        m: alpha.clone(),
        rows: (0..size).collect(),
        cols: (0..size).collect(),
        steps: Vec::new(),
        pivots: Vec::new(),
    };
    let mut nodes = 0;
    let Some(mut done) = search(start, needed, &limits, &mut nodes)? else {
        return Err(SuslinError::ReductionNotFound {
            n,
            detail: format!(
                "search exhausted after {nodes} nodes (branch {}, backtrack depth {})",
                limits.branch, limits.backtrack_depth
            ),
        });
    };
    place_pivots(&mut done)?;
    let cert = ElementaryCertificate { steps: done.steps };
    let reduced = cert.replay(&alpha)?;
    if !is_block_form(&reduced, n) {
        return Err(SuslinError::InvalidCertificate(
            "replay does not give the block form".into(),
        ));
    }
    Ok((reduced.block(n, n), cert))
}

/// Replays `cert` on `αn` over `O(Q_{2n-1})` and checks that the result is
/// `beta ⊕ I`.
pub fn check_beta(n: usize, beta: &RingMatrix, cert: &ElementaryCertificate) -> Result<(), SuslinError> {
    let alpha = alpha_on_quadric(n)?;
    let reduced = cert.replay(&alpha)?;
    if !is_block_form(&reduced, n) || &reduced.block(n, n) != beta {
        return Err(SuslinError::InvalidCertificate(format!(
            "replay on alpha_{n} does not reproduce beta_{n} with a trailing identity"
        )));
    }
    Ok(())
}
