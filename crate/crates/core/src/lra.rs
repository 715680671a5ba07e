//! Backtrackable simplex over delta-rationals: bound assertion with eager clash
//! detection, feasibility repair, bound propagation and phase-II minimization.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{epsilon_for_pairs, DeltaRational, Rational};
use crate::ast::{LinAtom, Linear, Rel};
use crate::sat::Lit;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bound {
    pub value: DeltaRational,
    /// Literal whose assertion produced this bound.
    pub tag: Lit,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LraError {
    #[error("backtrack mark is stale or unknown")]
    StaleMark,
    #[error("minimize requires a satisfiable check first")]
    NotChecked,
    #[error("unknown variable `{0}`")]
    UnknownVar(String),
}

/// Handle returned by `mark`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mark {
    depth: usize,
    serial: u64,
}

/// One step of a minimization certificate: `coeff · var ≥ coeff · bound` holds under `tag`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertEntry {
    pub coeff: Rational,
    pub var: usize,
    pub bound: DeltaRational,
    pub tag: Lit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinResult {
    Minimum {
        value: DeltaRational,
        /// Rational model of the structural variables attaining a value within the ε-shift.
        witness: BTreeMap<String, Rational>,
        /// `cost = Σ coeff·var` identically, and each entry bounds its summand from below.
        certificate: Vec<CertEntry>,
    },
    Unbounded,
}

#[derive(Clone, Debug)]
enum Undo {
    Lower(usize, Option<Bound>),
    Upper(usize, Option<Bound>),
    Assigned(usize),
}

#[derive(Clone, Debug)]
struct RegAtom {
    var: usize,
    rel: Rel,
    rhs: Rational,
    lit: Lit,
}

pub type Row = BTreeMap<usize, Rational>;

#[derive(Clone, Debug, Default)]
pub struct LraSolver {
    names: Vec<String>,
    by_name: HashMap<String, usize>,
    /// Structural definition of each slack, keyed by the atom's variable part.
    slack_of: HashMap<Linear, usize>,
    defs: Vec<Option<Row>>,
    rows: Vec<Option<Row>>,
    lower: Vec<Option<Bound>>,
    upper: Vec<Option<Bound>>,
    value: Vec<DeltaRational>,
    atoms: Vec<RegAtom>,
    atom_index: HashMap<LinAtom, usize>,
    var_atoms: Vec<Vec<usize>>,
    assigned: Vec<bool>,
    trail: Vec<Undo>,
    marks: Vec<(usize, u64)>,
    next_serial: u64,
    dirty: BTreeSet<usize>,
    checked: bool,
    pivots: u64,
}

fn neg_one() -> Rational {
    -Rational::one()
}

impl LraSolver {
    pub fn new() -> LraSolver {
        LraSolver::default()
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn pivots(&self) -> u64 {
        self.pivots
    }

    fn push_var(&mut self, name: String, def: Option<Row>) -> usize {
        let v = self.names.len();
        self.by_name.insert(name.clone(), v);
        self.names.push(name);
        self.defs.push(def);
        self.rows.push(None);
        self.lower.push(None);
        self.upper.push(None);
        self.value.push(DeltaRational::zero());
        self.var_atoms.push(Vec::new());
        v
    }

    /// Index of a structural variable, created on first use.
    pub fn var(&mut self, name: &str) -> usize {
        if let Some(&v) = self.by_name.get(name) {
            return v;
        }
        self.push_var(name.to_string(), None)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn var_name(&self, v: usize) -> &str {
        &self.names[v]
    }

    /// Variable standing for the variable part of `expr`.
    fn term_var(&mut self, expr: &Linear) -> usize {
        let key = expr.var_part();
        if key.coeffs.len() == 1 {
            let (name, c) = key.coeffs.iter().next().unwrap();
            if c.is_one() {
                return self.var(name);
            }
        }
        if let Some(&s) = self.slack_of.get(&key) {
            return s;
        }
        let mut def = Row::new();
        for (name, c) in &key.coeffs {
            let x = self.var(name);
            def.insert(x, c.clone());
        }
        // express over the current nonbasic variables
        let mut row = Row::new();
        let mut val = DeltaRational::zero();
        for (&x, c) in &def {
            val = &val + &(&self.value[x] * c);
            match &self.rows[x] {
                Some(r) => {
                    for (&y, d) in r.clone().iter() {
                        add_coeff(&mut row, y, &(c * d));
                    }
                }
                None => add_coeff(&mut row, x, c),
            }
        }
        let s = self.push_var(format!("@slack{}", self.names.len()), Some(def));
        self.rows[s] = Some(row);
        self.value[s] = val;
        self.slack_of.insert(key, s);
        s
    }

    /// Linear combination of structural variables that `v` stands for.
    pub fn definition(&self, v: usize) -> Linear {
        match &self.defs[v] {
            Some(def) => Linear::from_terms(def.iter().map(|(&x, c)| (self.names[x].clone(), c.clone())), Rational::zero()),
            None => Linear::var(&self.names[v]),
        }
    }

    /// Makes `atom` visible to `deduce`, reported through `lit` (the positive literal).
    pub fn register_atom(&mut self, atom: &LinAtom, lit: Lit) {
        if self.atom_index.contains_key(atom) {
            return;
        }
        let var = self.term_var(&atom.expr);
        let id = self.atoms.len();
        self.atoms.push(RegAtom { var, rel: atom.rel, rhs: atom.rhs(), lit });
        self.assigned.push(false);
        self.atom_index.insert(atom.clone(), id);
        self.var_atoms[var].push(id);
    }

    pub fn mark(&mut self) -> Mark {
        let serial = self.next_serial;
        self.next_serial += 1;
        self.marks.push((self.trail.len(), serial));
        Mark { depth: self.marks.len() - 1, serial }
    }

    /// Restores the assertions present when `mark` was issued and drops that mark.
    pub fn backtrack_to(&mut self, mark: Mark) -> Result<(), LraError> {
        match self.marks.get(mark.depth) {
            Some(&(len, serial)) if serial == mark.serial => {
                while self.trail.len() > len {
                    match self.trail.pop().unwrap() {
                        Undo::Lower(v, b) => self.lower[v] = b,
                        Undo::Upper(v, b) => self.upper[v] = b,
                        Undo::Assigned(a) => self.assigned[a] = false,
                    }
                }
                self.marks.truncate(mark.depth);
                self.checked = false;
                Ok(())
            }
            _ => Err(LraError::StaleMark),
        }
    }

    /// Asserts `atom` (or its negation). Negated equalities carry no bound and are ignored.
    pub fn assert_atom(&mut self, atom: &LinAtom, positive: bool, tag: Lit) -> Result<(), Vec<Lit>> {
        self.checked = false;
        if !self.atom_index.contains_key(atom) {
            self.register_atom(atom, if positive { tag } else { !tag });
        }
        let id = self.atom_index[atom];
        if !self.assigned[id] {
            self.assigned[id] = true;
            self.trail.push(Undo::Assigned(id));
        }
        let v = self.atoms[id].var;
        let k = self.atoms[id].rhs.clone();
        let exact = DeltaRational::from_rational(k.clone());
        match (atom.rel, positive) {
            (Rel::Le, true) => self.assert_upper(v, exact, tag),
            (Rel::Ge, true) => self.assert_lower(v, exact, tag),
            (Rel::Le, false) => self.assert_lower(v, DeltaRational::new(k, Rational::one()), tag),
            (Rel::Ge, false) => self.assert_upper(v, DeltaRational::new(k, neg_one()), tag),
            (Rel::Eq, true) => {
                self.assert_lower(v, exact.clone(), tag)?;
                self.assert_upper(v, exact, tag)
            }
            (Rel::Eq, false) => Ok(()),
        }
    }

    pub fn assert_lower(&mut self, v: usize, value: DeltaRational, tag: Lit) -> Result<(), Vec<Lit>> {
        self.checked = false;
        if matches!(&self.lower[v], Some(b) if b.value >= value) {
            return Ok(());
        }
        if let Some(u) = &self.upper[v] {
            if value > u.value {
                return Err(dedup(vec![tag, u.tag]));
            }
        }
        let old = self.lower[v].replace(Bound { value: value.clone(), tag });
        self.trail.push(Undo::Lower(v, old));
        self.dirty.insert(v);
        if self.rows[v].is_none() && self.value[v] < value {
            self.update(v, value);
        }
        Ok(())
    }

    pub fn assert_upper(&mut self, v: usize, value: DeltaRational, tag: Lit) -> Result<(), Vec<Lit>> {
        self.checked = false;
        if matches!(&self.upper[v], Some(b) if b.value <= value) {
            return Ok(());
        }
        if let Some(l) = &self.lower[v] {
            if value < l.value {
                return Err(dedup(vec![tag, l.tag]));
            }
        }
        let old = self.upper[v].replace(Bound { value: value.clone(), tag });
        self.trail.push(Undo::Upper(v, old));
        self.dirty.insert(v);
        if self.rows[v].is_none() && self.value[v] > value {
            self.update(v, value);
        }
        Ok(())
    }

    pub fn lower_bound(&self, v: usize) -> Option<&Bound> {
        self.lower[v].as_ref()
    }

    pub fn upper_bound(&self, v: usize) -> Option<&Bound> {
        self.upper[v].as_ref()
    }

    pub fn value_of(&self, v: usize) -> &DeltaRational {
        &self.value[v]
    }

    /// Moves nonbasic `v` to `target`, shifting every basic variable accordingly.
    fn update(&mut self, v: usize, target: DeltaRational) {
        let delta = &target - &self.value[v];
        for b in 0..self.rows.len() {
            if let Some(row) = &self.rows[b] {
                if let Some(a) = row.get(&v) {
                    let shift = &delta * a;
                    self.value[b] = &self.value[b] + &shift;
                }
            }
        }
        self.value[v] = target;
    }

    /// Exchanges basic `b` with nonbasic `n`.
    fn pivot(&mut self, b: usize, n: usize) {
        self.pivots += 1;
        let row = self.rows[b].take().expect("pivot on a nonbasic row");
        let a = row[&n].clone();
        let inv = Rational::one() / &a;
        let mut new_row = Row::new();
        new_row.insert(b, inv.clone());
        for (&x, c) in &row {
            if x != n {
                new_row.insert(x, -(c * &inv));
            }
        }
        for r in 0..self.rows.len() {
            let Some(other) = &mut self.rows[r] else { continue };
            let Some(c) = other.remove(&n) else { continue };
            for (&x, d) in &new_row {
                add_coeff(other, x, &(&c * d));
            }
        }
        self.rows[n] = Some(new_row);
        #[cfg(debug_assertions)]
        self.check_rows();
    }

    #[cfg(debug_assertions)]
    fn check_rows(&self) {
        for (b, row) in self.rows.iter().enumerate() {
            if let Some(row) = row {
                let mut acc = DeltaRational::zero();
                for (&x, c) in row {
                    assert!(self.rows[x].is_none(), "row mentions a basic variable");
                    acc = &acc + &(&self.value[x] * c);
                }
                assert_eq!(acc, self.value[b], "row equation violated");
            }
        }
    }

    fn pivot_and_update(&mut self, b: usize, n: usize, target: DeltaRational) {
        let a = self.rows[b].as_ref().unwrap()[&n].clone();
        let theta = (&target - &self.value[b]).scale(&(Rational::one() / a));
        let new_n = &self.value[n] + &theta;
        self.update(n, new_n);
        debug_assert_eq!(self.value[b], target);
        self.pivot(b, n);
    }

    fn below_upper(&self, v: usize) -> bool {
        self.upper[v].as_ref().map_or(true, |u| self.value[v] < u.value)
    }

    fn above_lower(&self, v: usize) -> bool {
        self.lower[v].as_ref().map_or(true, |l| self.value[v] > l.value)
    }

    /// Repairs the valuation; on failure returns an unsatisfiable set of asserted tags.
    pub fn check(&mut self) -> Result<(), Vec<Lit>> {
        loop {
            let mut violated = None;
            for b in 0..self.rows.len() {
                if self.rows[b].is_none() {
                    continue;
                }
                if matches!(&self.lower[b], Some(l) if self.value[b] < l.value) {
                    violated = Some((b, true));
                    break;
                }
                if matches!(&self.upper[b], Some(u) if self.value[b] > u.value) {
                    violated = Some((b, false));
                    break;
                }
            }
            let Some((b, raise)) = violated else {
                self.checked = true;
                return Ok(());
            };
            let row = self.rows[b].clone().unwrap();
            let entering = row.iter().find(|(&x, a)| {
                if raise == a.is_positive() {
                    self.below_upper(x)
                } else {
                    self.above_lower(x)
                }
            });
            match entering {
                Some((&n, _)) => {
                    let target = if raise { &self.lower[b] } else { &self.upper[b] };
                    let target = target.as_ref().unwrap().value.clone();
                    self.pivot_and_update(b, n, target);
                }
                None => {
                    let mut tags = vec![if raise { &self.lower[b] } else { &self.upper[b] }.as_ref().unwrap().tag];
                    for (&x, a) in &row {
                        let bound = if raise == a.is_positive() { &self.upper[x] } else { &self.lower[x] };
                        tags.push(bound.as_ref().unwrap().tag);
                    }
                    self.checked = false;
                    return Err(dedup(tags));
                }
            }
        }
    }

    /// Registered, unassigned atoms whose truth value follows from a single current bound
    /// (two for equalities). Each entry is the implied literal and its explanation.
    pub fn deduce(&mut self) -> Vec<(Lit, Vec<Lit>)> {
        let mut out = Vec::new();
        let dirty = std::mem::take(&mut self.dirty);
        for v in dirty {
            for &id in &self.var_atoms[v] {
                if self.assigned[id] {
                    continue;
                }
                let atom = &self.atoms[id];
                let k = DeltaRational::from_rational(atom.rhs.clone());
                let lo = self.lower[v].as_ref();
                let hi = self.upper[v].as_ref();
                let implied = match atom.rel {
                    Rel::Ge => match (lo, hi) {
                        (Some(l), _) if l.value >= k => Some((atom.lit, vec![l.tag])),
                        (_, Some(u)) if u.value < k => Some((!atom.lit, vec![u.tag])),
                        _ => None,
                    },
                    Rel::Le => match (lo, hi) {
                        (_, Some(u)) if u.value <= k => Some((atom.lit, vec![u.tag])),
                        (Some(l), _) if l.value > k => Some((!atom.lit, vec![l.tag])),
                        _ => None,
                    },
                    Rel::Eq => match (lo, hi) {
                        (Some(l), _) if l.value > k => Some((!atom.lit, vec![l.tag])),
                        (_, Some(u)) if u.value < k => Some((!atom.lit, vec![u.tag])),
                        (Some(l), Some(u)) if l.value == k && u.value == k => Some((atom.lit, dedup(vec![l.tag, u.tag]))),
                        _ => None,
                    },
                };
                out.extend(implied);
            }
        }
        out
    }

    /// Concrete rational values of the structural variables under the current valuation.
    pub fn model(&self) -> BTreeMap<String, Rational> {
        let mut pairs = Vec::new();
        for v in 0..self.num_vars() {
            if let Some(l) = &self.lower[v] {
                pairs.push((&l.value, &self.value[v]));
            }
            if let Some(u) = &self.upper[v] {
                pairs.push((&self.value[v], &u.value));
            }
        }
        let eps = epsilon_for_pairs(pairs);
        (0..self.num_vars())
            .filter(|&v| self.defs[v].is_none())
            .map(|v| (self.names[v].clone(), self.value[v].concretize(&eps)))
            .collect()
    }

    /// Phase-II simplex on the current tableau driving `cost` down.
    pub fn minimize(&mut self, cost: &str) -> Result<MinResult, LraError> {
        if !self.checked {
            return Err(LraError::NotChecked);
        }
        let c = self.var_index(cost).ok_or_else(|| LraError::UnknownVar(cost.to_string()))?;
        loop {
            let obj: Row = match &self.rows[c] {
                Some(r) => r.clone(),
                None => Row::from([(c, Rational::one())]),
            };
            // entering: lowest index nonbasic that improves the objective
            let entering = obj.iter().find(|(&x, a)| if a.is_positive() { self.above_lower(x) } else { self.below_upper(x) });
            let Some((&n, a_n)) = entering else {
                let mut certificate = Vec::new();
                for (&x, a) in &obj {
                    let b = if a.is_positive() { &self.lower[x] } else { &self.upper[x] }.as_ref().unwrap();
                    certificate.push(CertEntry { coeff: a.clone(), var: x, bound: b.value.clone(), tag: b.tag });
                }
                return Ok(MinResult::Minimum { value: self.value[c].clone(), witness: self.model(), certificate });
            };
            let increase = a_n.is_negative();
            // ratio test: own bound first, then rows in index order
            let mut best: Option<(DeltaRational, Option<usize>)> = None;
            let own = if increase { &self.upper[n] } else { &self.lower[n] };
            if let Some(b) = own {
                let t = if increase { &b.value - &self.value[n] } else { &self.value[n] - &b.value };
                best = Some((t, None));
            }
            for r in 0..self.rows.len() {
                let Some(row) = &self.rows[r] else { continue };
                let Some(coef) = row.get(&n) else { continue };
                // basic r moves by coef·dir·t
                let grows = coef.is_positive() == increase;
                let limit = if grows { &self.upper[r] } else { &self.lower[r] };
                let Some(b) = limit else { continue };
                let t = (&b.value - &self.value[r]).scale(&(Rational::one() / coef.abs()));
                let t = if grows { t } else { -&t };
                let better = match &best {
                    None => true,
                    Some((bt, br)) => t < *bt || (t == *bt && br.map_or(false, |br| r < br)),
                };
                if better {
                    best = Some((t, Some(r)));
                }
            }
            match best {
                None => return Ok(MinResult::Unbounded),
                Some((t, None)) => {
                    let target = if increase { &self.value[n] + &t } else { &self.value[n] - &t };
                    self.update(n, target);
                }
                Some((_, Some(r))) => {
                    let coef = self.rows[r].as_ref().unwrap()[&n].clone();
                    let grows = coef.is_positive() == increase;
                    let target = if grows { &self.upper[r] } else { &self.lower[r] }.as_ref().unwrap().value.clone();
                    self.pivot_and_update(r, n, target);
                }
            }
        }
    }
}

fn add_coeff(row: &mut Row, x: usize, c: &Rational) {
    if c.is_zero() {
        return;
    }
    let e = row.entry(x).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        row.remove(&x);
    }
}

fn dedup(mut tags: Vec<Lit>) -> Vec<Lit> {
    tags.sort();
    tags.dedup();
    tags
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::ast::{normalize_comparison, Cmp};

    fn atom(terms: &[(&str, i64)], op: Cmp, k: i64) -> (LinAtom, bool) {
        let lin = Linear::from_terms(terms.iter().map(|(v, c)| (v.to_string(), int(*c))), int(-k));
        normalize_comparison(lin, op).unwrap()
    }

    fn assert_(s: &mut LraSolver, a: (LinAtom, bool), tag: u32) -> Result<(), Vec<Lit>> {
        s.assert_atom(&a.0, a.1, Lit::pos(tag))
    }

    #[test]
    fn assert_examples() {
        let mut s = LraSolver::new();
        assert_(&mut s, atom(&[("x", 1)], Cmp::Ge, 1), 0).unwrap();
        let mut c = assert_(&mut s, atom(&[("x", 1)], Cmp::Le, 0), 1).unwrap_err();
        c.sort();
        assert_eq!(c, vec![Lit::pos(0), Lit::pos(1)]);

        let mut s = LraSolver::new();
        assert_(&mut s, atom(&[("x", 1)], Cmp::Lt, 2), 0).unwrap();
        let x = s.var_index("x").unwrap();
        assert_eq!(s.upper_bound(x).unwrap().value, DeltaRational::new(int(2), int(-1)));

        let mut s = LraSolver::new();
        assert_(&mut s, atom(&[("x", 1)], Cmp::Ge, 1), 0).unwrap();
        assert_(&mut s, atom(&[("x", 1)], Cmp::Le, 5), 1).unwrap();
        assert!(s.check().is_ok());
    }

    #[test]
    fn check_examples() {
        let mut s = LraSolver::new();
        assert_(&mut s, atom(&[("x", 1), ("y", 1)], Cmp::Ge, 2), 0).unwrap();
        assert_(&mut s, atom(&[("x", 1)], Cmp::Le, 0), 1).unwrap();
        assert_(&mut s, atom(&[("y", 1)], Cmp::Le, 1), 2).unwrap();
        assert_eq!(s.check(), Err(vec![Lit::pos(0), Lit::pos(1), Lit::pos(2)]));

        let mut s = LraSolver::new();
        assert_(&mut s, atom(&[("x", 1), ("y", 1)], Cmp::Ge, 2), 0).unwrap();
        assert_(&mut s, atom(&[("x", 1)], Cmp::Le, 1), 1).unwrap();
        assert_(&mut s, atom(&[("y", 1)], Cmp::Le, 1), 2).unwrap();
        s.check().unwrap();
        let m = s.model();
        assert_eq!(m["x"], int(1));
        assert_eq!(m["y"], int(1));

        let mut s = LraSolver::new();
        assert_(&mut s, atom(&[("x", 1)], Cmp::Gt, 0), 0).unwrap();
        assert_(&mut s, atom(&[("x", 1)], Cmp::Lt, 1), 1).unwrap();
        s.check().unwrap();
        let x = s.model()["x"].clone();
        assert!(x > int(0) && x < int(1));
    }

    #[test]
    fn deduce_examples() {
        let mut s = LraSolver::new();
        let (ge1, _) = atom(&[("x", 1)], Cmp::Ge, 1);
        s.register_atom(&ge1, Lit::pos(5));
        assert!(s.deduce().is_empty());
        assert_(&mut s, atom(&[("x", 1)], Cmp::Ge, 3), 0).unwrap();
        assert_eq!(s.deduce(), vec![(Lit::pos(5), vec![Lit::pos(0)])]);

        let mut s = LraSolver::new();
        let (gt2, pol) = atom(&[("x", 1)], Cmp::Gt, 2);
        assert!(!pol);
        s.register_atom(&gt2, Lit::pos(5));
        assert_(&mut s, atom(&[("x", 1)], Cmp::Le, 0), 0).unwrap();
        // registered atom is x ≤ 2, so the deduced literal is ¬(x > 2)
        assert_eq!(s.deduce(), vec![(Lit::pos(5), vec![Lit::pos(0)])]);
    }

    #[test]
    fn backtrack_examples() {
        let mut s = LraSolver::new();
        assert_(&mut s, atom(&[("x", 1)], Cmp::Ge, 1), 0).unwrap();
        let m = s.mark();
        assert!(assert_(&mut s, atom(&[("x", 1)], Cmp::Le, 0), 1).is_err());
        s.backtrack_to(m).unwrap();
        assert!(s.check().is_ok());
        assert_eq!(s.backtrack_to(m), Err(LraError::StaleMark));

        let m1 = s.mark();
        let m2 = s.mark();
        s.backtrack_to(m2).unwrap();
        s.backtrack_to(m1).unwrap();
    }

    #[test]
    fn minimize_examples() {
        let mut s = LraSolver::new();
        assert_(&mut s, atom(&[("cost", 1), ("x", -1), ("y", -1)], Cmp::Eq, 0), 0).unwrap();
        assert_(&mut s, atom(&[("x", 1)], Cmp::Ge, 1), 1).unwrap();
        assert_(&mut s, atom(&[("y", 1)], Cmp::Ge, 0), 2).unwrap();
        assert_eq!(s.minimize("cost"), Err(LraError::NotChecked));
        s.check().unwrap();
        match s.minimize("cost").unwrap() {
            MinResult::Minimum { value, .. } => assert_eq!(value, DeltaRational::from_rational(int(1))),
            r => panic!("{:?}", r),
        }

        let mut s = LraSolver::new();
        assert_(&mut s, atom(&[("cost", 1)], Cmp::Gt, 2), 0).unwrap();
        s.check().unwrap();
        match s.minimize("cost").unwrap() {
            MinResult::Minimum { value, .. } => assert_eq!(value, DeltaRational::new(int(2), int(1))),
            r => panic!("{:?}", r),
        }

        let mut s = LraSolver::new();
        assert_(&mut s, atom(&[("cost", 1)], Cmp::Le, 0), 0).unwrap();
        s.check().unwrap();
        assert_eq!(s.minimize("cost").unwrap(), MinResult::Unbounded);
    }
}
