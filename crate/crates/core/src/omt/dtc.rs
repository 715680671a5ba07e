//! Minimum cost of a single assignment extended with interface (dis)equalities
//! and their strict-inequality companions.

use crate::arith::DeltaRational;
use crate::ast::{equality_atom, normalize_comparison, Cmp, LinAtom, Linear, Rel, Term};
use crate::euf::EGraph;
use crate::lra::{LraSolver, MinResult};
use crate::sat::Lit;

use super::Ext;

/// One total assignment split by theory. Boolean literals are omitted: the
/// assignment is assumed to satisfy the formula propositionally.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdiAssignment {
    /// Arithmetic literals.
    pub lra: Vec<(LinAtom, bool)>,
    /// Literals over uninterpreted terms, `(lhs = rhs)` with a polarity.
    pub euf: Vec<(Term, Term, bool)>,
    /// Interface equalities: true ones form the equality part, false ones the disequality part.
    pub eq: Vec<(String, String, bool)>,
    /// Companions of each interface pair `(a, b)`: truth of `a < b` and of `a > b`.
    pub ineq: Vec<(String, String, bool, bool)>,
}

/// `+∞` when either theory rejects the assignment, otherwise the arithmetic
/// minimum over the arithmetic part, the true interface equalities and the
/// companions. False interface equalities only reach the congruence solver.
/// Negated arithmetic equalities are split into their two strict cases.
pub fn mincost_of_assignment(mu: &EdiAssignment, cost: &str) -> Ext {
    let mut g = EGraph::new();
    let mut tag = 0u32;
    let mut next = || {
        tag += 1;
        Lit::pos(tag)
    };
    for (l, r, pos) in &mu.euf {
        match g.assert_terms(l, r, *pos, next()) {
            Ok(Ok(())) => {}
            Ok(Err(_)) => return Ext::PosInf,
            Err(e) => panic!("{}", e),
        }
    }
    for (a, b, pos) in &mu.eq {
        match g.assert_terms(&Term::var(a), &Term::var(b), *pos, next()) {
            Ok(Ok(())) => {}
            Ok(Err(_)) => return Ext::PosInf,
            Err(e) => panic!("{}", e),
        }
    }
    let mut fixed: Vec<(LinAtom, bool)> = Vec::new();
    let mut splits: Vec<LinAtom> = Vec::new();
    for (a, pos) in &mu.lra {
        if a.rel == Rel::Eq && !pos {
            splits.push(a.clone());
        } else {
            fixed.push((a.clone(), *pos));
        }
    }
    for (a, b, pos) in &mu.eq {
        if *pos {
            fixed.push((equality_atom(a, b), true));
        }
    }
    for (a, b, lt, gt) in &mu.ineq {
        let diff = Linear::var(a).minus(&Linear::var(b));
        for (op, truth) in [(Cmp::Lt, lt), (Cmp::Gt, gt)] {
            if let Ok((atom, pos)) = normalize_comparison(diff.clone(), op) {
                fixed.push((atom, pos == *truth));
            }
        }
    }
    let mut best = Ext::PosInf;
    for mask in 0u64..(1u64 << splits.len()) {
        let mut lits = fixed.clone();
        for (i, a) in splits.iter().enumerate() {
            // bit set: expr > 0, i.e. ¬(expr ≤ 0); clear: expr < 0
            let rel = if mask >> i & 1 == 1 { Rel::Le } else { Rel::Ge };
            lits.push((LinAtom { expr: a.expr.clone(), rel }, false));
        }
        let v = minimize_conjunction(&lits, cost);
        if v < best {
            best = v;
        }
    }
    best
}

/// Minimum of `cost` over a conjunction of arithmetic literals.
pub fn minimize_conjunction(lits: &[(LinAtom, bool)], cost: &str) -> Ext {
    let mut s = LraSolver::new();
    s.var(cost);
    for (i, (a, pos)) in lits.iter().enumerate() {
        if a.rel == Rel::Eq && !pos {
            panic!("negated equality must be split first");
        }
        if s.assert_atom(a, *pos, Lit::pos(i as u32)).is_err() {
            return Ext::PosInf;
        }
    }
    if s.check().is_err() {
        return Ext::PosInf;
    }
    match s.minimize(cost).expect("checked") {
        MinResult::Unbounded => Ext::NegInf,
        MinResult::Minimum { value, .. } => Ext::Finite(normalize(value)),
    }
}

fn normalize(v: DeltaRational) -> DeltaRational {
    super::normalize_strict(v)
}
