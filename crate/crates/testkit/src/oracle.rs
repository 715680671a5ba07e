//! Reference solvers that work by exhaustive enumeration. They are slow and
//! simple on purpose and only meant for small instances.

use std::collections::{BTreeSet, HashMap};

use num_traits::{Signed, Zero};
use omt_core::arith::{DeltaRational, Rational};
use omt_core::ast::{equality_atom, interface_equalities, normalize_comparison, purify, Atom, Cmp, Formula, LinAtom, Linear, Rel, Term};
use omt_core::encoders::{MaxSmtInstance, PbObjective};
use omt_core::lra::{LraSolver, Mark, MinResult};
use omt_core::omt::dtc::EdiAssignment;
use omt_core::omt::{normalize_strict, Ext, OmtProblem};
use omt_core::sat::Lit;

/// Kleene evaluation; `None` when the value depends on unassigned atoms.
pub fn eval3(phi: &Formula, val: &dyn Fn(&Atom) -> Option<bool>) -> Option<bool> {
    match phi {
        Formula::True => Some(true),
        Formula::False => Some(false),
        Formula::Atom(a) => val(a),
        Formula::Not(g) => eval3(g, val).map(|b| !b),
        Formula::And(v) => {
            let mut open = false;
            for g in v {
                match eval3(g, val) {
                    Some(false) => return Some(false),
                    None => open = true,
                    _ => {}
                }
            }
            if open {
                None
            } else {
                Some(true)
            }
        }
        Formula::Or(v) => {
            let mut open = false;
            for g in v {
                match eval3(g, val) {
                    Some(true) => return Some(true),
                    None => open = true,
                    _ => {}
                }
            }
            if open {
                None
            } else {
                Some(false)
            }
        }
        Formula::Implies(a, b) => match (eval3(a, val), eval3(b, val)) {
            (Some(false), _) | (_, Some(true)) => Some(true),
            (Some(true), Some(false)) => Some(false),
            _ => None,
        },
        Formula::Iff(a, b) => match (eval3(a, val), eval3(b, val)) {
            (Some(x), Some(y)) => Some(x == y),
            _ => None,
        },
    }
}

/// First satisfying assignment of a DIMACS-style clause list, trying assignments in binary order.
pub fn brute_sat(num_vars: usize, clauses: &[Vec<i32>]) -> Option<Vec<bool>> {
    assert!(num_vars <= 24);
    let masks: Vec<(u32, u32)> = clauses
        .iter()
        .map(|c| {
            let mut pos = 0u32;
            let mut neg = 0u32;
            for &l in c {
                let bit = 1u32 << (l.unsigned_abs() - 1);
                if l > 0 {
                    pos |= bit
                } else {
                    neg |= bit
                }
            }
            (pos, neg)
        })
        .collect();
    (0u32..1 << num_vars)
        .find(|&a| masks.iter().all(|&(p, n)| a & p != 0 || !a & n != 0))
        .map(|a| (0..num_vars).map(|i| a >> i & 1 == 1).collect())
}

/// `a·x ≤ b` where `b` may carry an infinitesimal.
#[derive(Clone, Debug)]
struct Row {
    a: Vec<Rational>,
    b: DeltaRational,
}

fn rows_of(atom: &LinAtom, positive: bool, vars: &[String]) -> Vec<Row> {
    let c: Vec<Rational> = vars.iter().map(|v| atom.expr.coeff(v)).collect();
    let neg: Vec<Rational> = c.iter().map(|x| -x).collect();
    let k = atom.expr.constant.clone();
    let one = Rational::from_integer(1.into());
    let le = |a: Vec<Rational>, b: Rational, strict: bool| Row { a, b: DeltaRational::new(b, if strict { -one.clone() } else { Rational::zero() }) };
    match (atom.rel, positive) {
        (Rel::Le, true) => vec![le(c, -k, false)],
        (Rel::Le, false) => vec![le(neg, k, true)],
        (Rel::Ge, true) => vec![le(neg, k, false)],
        (Rel::Ge, false) => vec![le(c, -k, true)],
        (Rel::Eq, true) => vec![le(c, -k.clone(), false), le(neg, k, false)],
        (Rel::Eq, false) => panic!("negated equality must be split first"),
    }
}

/// Solves `m·x = r` exactly for a square system, with two right-hand columns
/// (real and infinitesimal parts). `None` when singular.
fn solve(mut m: Vec<Vec<Rational>>, mut r: Vec<[Rational; 2]>) -> Option<Vec<[Rational; 2]>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, piv);
        r.swap(col, piv);
        let inv = Rational::from_integer(1.into()) / &m[col][col];
        for j in col..n {
            m[col][j] = &m[col][j] * &inv;
        }
        for p in 0..2 {
            r[col][p] = &r[col][p] * &inv;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..n {
                    let t = &f * &m[col][j];
                    m[i][j] -= t;
                }
                for p in 0..2 {
                    let t = &f * &r[col][p];
                    r[i][p] -= t;
                }
            }
        }
    }
    Some(r)
}

fn dot(a: &[Rational], x: &[[Rational; 2]]) -> DeltaRational {
    let mut real = Rational::zero();
    let mut delta = Rational::zero();
    for (c, xi) in a.iter().zip(x) {
        if !c.is_zero() {
            real += c * &xi[0];
            delta += c * &xi[1];
        }
    }
    DeltaRational::new(real, delta)
}

/// Minimum of `obj·x` over the basic feasible points of a bounded row system.
fn vertex_min(n: usize, rows: &[Row], obj: &[Rational]) -> Option<DeltaRational> {
    let mut best: Option<DeltaRational> = None;
    let mut pick = Vec::with_capacity(n);
    fn rec(n: usize, start: usize, pick: &mut Vec<usize>, rows: &[Row], obj: &[Rational], best: &mut Option<DeltaRational>) {
        if pick.len() == n {
            let m = pick.iter().map(|&i| rows[i].a.clone()).collect();
            let r = pick.iter().map(|&i| [rows[i].b.real.clone(), rows[i].b.delta.clone()]).collect();
            if let Some(x) = solve(m, r) {
                if rows.iter().all(|row| dot(&row.a, &x) <= row.b) {
                    let v = dot(obj, &x);
                    if best.as_ref().map_or(true, |b| v < *b) {
                        *best = Some(v);
                    }
                }
            }
            return;
        }
        for i in start..rows.len() {
            if rows.len() - i < n - pick.len() {
                break;
            }
            pick.push(i);
            rec(n, i + 1, pick, rows, obj, best);
            pick.pop();
        }
    }
    rec(n, 0, &mut pick, rows, obj, &mut best);
    best
}

fn boxed(n: usize, mut rows: Vec<Row>, bound: Rational) -> Vec<Row> {
    for i in 0..n {
        for sign in [1, -1] {
            let mut a = vec![Rational::zero(); n];
            a[i] = Rational::from_integer(sign.into());
            rows.push(Row { a, b: DeltaRational::from_rational(bound.clone()) });
        }
    }
    rows
}

/// Infimum of `cost` over a conjunction of arithmetic literals by vertex
/// enumeration: a huge box makes the feasible set a polytope, and a separate
/// normalized cone search detects unbounded descent.
pub fn lp_min(lits: &[(LinAtom, bool)], cost: &str) -> Ext {
    if let Some(i) = lits.iter().position(|(a, p)| a.rel == Rel::Eq && !p) {
        let mut best = Ext::PosInf;
        for rel in [Rel::Le, Rel::Ge] {
            let mut v = lits.to_vec();
            v[i] = (LinAtom { expr: lits[i].0.expr.clone(), rel }, false);
            best = best.min(lp_min(&v, cost));
        }
        return best;
    }
    let mut names = BTreeSet::new();
    names.insert(cost.to_string());
    for (a, _) in lits {
        names.extend(a.expr.coeffs.keys().cloned());
    }
    let vars: Vec<String> = names.into_iter().collect();
    let n = vars.len();
    let rows: Vec<Row> = lits.iter().flat_map(|(a, p)| rows_of(a, *p, &vars)).collect();
    let obj: Vec<Rational> = vars.iter().map(|v| Rational::from_integer(i64::from(v == cost).into())).collect();
    let big = Rational::from_integer(num_traits::pow(10.into(), 40));
    let Some(best) = vertex_min(n, &boxed(n, rows.clone(), big), &obj) else {
        return Ext::PosInf;
    };
    let cone: Vec<Row> = rows.iter().map(|r| Row { a: r.a.clone(), b: DeltaRational::zero() }).collect();
    let one = Rational::from_integer(1.into());
    if let Some(v) = vertex_min(n, &boxed(n, cone, one), &obj) {
        if v.real.is_negative() {
            return Ext::NegInf;
        }
    }
    Ext::Finite(normalize_strict(best))
}

fn subterms(t: &Term, out: &mut Vec<Term>) {
    if out.contains(t) {
        return;
    }
    if let Term::App(_, args) = t {
        for a in args {
            subterms(a, out);
        }
    }
    out.push(t.clone());
}

/// Congruence closure by repeated scanning of all application pairs.
pub fn cc_consistent(eqs: &[(Term, Term)], diseqs: &[(Term, Term)]) -> bool {
    let mut terms = Vec::new();
    for (l, r) in eqs.iter().chain(diseqs) {
        subterms(l, &mut terms);
        subterms(r, &mut terms);
    }
    let idx: HashMap<&Term, usize> = terms.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut parent: Vec<usize> = (0..terms.len()).collect();
    fn find(p: &[usize], mut i: usize) -> usize {
        while p[i] != i {
            i = p[i];
        }
        i
    }
    for (l, r) in eqs {
        let (a, b) = (find(&parent, idx[l]), find(&parent, idx[r]));
        parent[a] = b;
    }
    loop {
        let mut changed = false;
        for i in 0..terms.len() {
            for j in i + 1..terms.len() {
                if let (Term::App(f, xs), Term::App(g, ys)) = (&terms[i], &terms[j]) {
                    if f == g
                        && xs.len() == ys.len()
                        && xs.iter().zip(ys).all(|(x, y)| find(&parent, idx[x]) == find(&parent, idx[y]))
                    {
                        let (a, b) = (find(&parent, i), find(&parent, j));
                        if a != b {
                            parent[a] = b;
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    diseqs.iter().all(|(l, r)| find(&parent, idx[l]) != find(&parent, idx[r]))
}

/// Satisfiability of a formula over propositions and term equalities: every
/// subterm becomes a constant, and all partitions of the constants that respect
/// functional consistency are tried together with all proposition values.
pub fn euf_formula_sat(phi: &Formula) -> bool {
    let mut terms = Vec::new();
    let mut props = Vec::new();
    phi.visit_atoms(&mut |a| match a {
        Atom::Euf(l, r) => {
            subterms(l, &mut terms);
            subterms(r, &mut terms);
        }
        Atom::Prop(p) => {
            if !props.contains(p) {
                props.push(p.clone())
            }
        }
        other => panic!("unexpected atom {:?}", other),
    });
    assert!(terms.len() <= 10 && props.len() <= 10);
    let idx: HashMap<&Term, usize> = terms.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let apps: Vec<(usize, &String, Vec<usize>)> = terms
        .iter()
        .enumerate()
        .filter_map(|(i, t)| match t {
            Term::App(f, args) => Some((i, f, args.iter().map(|a| idx[a]).collect())),
            _ => None,
        })
        .collect();
    let mut block = vec![0usize; terms.len()];
    fn partitions(i: usize, max: usize, block: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if i == block.len() {
            return visit(block);
        }
        for b in 0..=max {
            block[i] = b;
            if partitions(i + 1, max.max(b + 1), block, visit) {
                return true;
            }
        }
        false
    }
    let mut visit = |block: &[usize]| {
        for (x, (i, f, xs)) in apps.iter().enumerate() {
            for (j, g, ys) in &apps[x + 1..] {
                if f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(a, b)| block[*a] == block[*b]) && block[*i] != block[*j] {
                    return false;
                }
            }
        }
        (0u32..1 << props.len()).any(|mask| {
            phi.eval(&|a| match a {
                Atom::Euf(l, r) => block[idx[l]] == block[idx[r]],
                Atom::Prop(p) => mask >> props.iter().position(|q| q == p).unwrap() & 1 == 1,
                _ => unreachable!(),
            })
        })
    };
    partitions(0, 0, &mut block, &mut visit)
}

enum Undo {
    Nothing,
    Split,
    Lra(Mark),
    Eq,
    Diseq,
}

/// Depth-first enumeration of atom assignments with theory pruning. Once the
/// formula is decided true, remaining atoms are left free; for combined
/// problems every arrangement of the interface pairs is then tried.
struct Enumeration<'a> {
    phi: &'a Formula,
    atoms: Vec<Atom>,
    index: HashMap<Atom, usize>,
    value: Vec<Option<bool>>,
    lra: LraSolver,
    splits: Vec<LinAtom>,
    eqs: Vec<(Term, Term)>,
    diseqs: Vec<(Term, Term)>,
    pairs: Vec<(String, String)>,
    cost: String,
    best: Ext,
    tag: u32,
}

impl<'a> Enumeration<'a> {
    fn new(phi: &'a Formula, cost: &str, pairs: Vec<(String, String)>) -> Self {
        let atoms = phi.atoms();
        let index = atoms.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        let mut lra = LraSolver::new();
        lra.var(cost);
        Enumeration {
            phi,
            value: vec![None; atoms.len()],
            atoms,
            index,
            lra,
            splits: Vec::new(),
            eqs: Vec::new(),
            diseqs: Vec::new(),
            pairs,
            cost: cost.to_string(),
            best: Ext::PosInf,
            tag: 0,
        }
    }

    fn status(&self) -> Option<bool> {
        eval3(self.phi, &|a| self.value[self.index[a]])
    }

    fn push_lra(&mut self, a: &LinAtom, positive: bool) -> Option<Undo> {
        if a.rel == Rel::Eq && !positive {
            self.splits.push(a.clone());
            return Some(Undo::Split);
        }
        let m = self.lra.mark();
        self.tag += 1;
        if self.lra.assert_atom(a, positive, Lit::pos(self.tag)).is_ok() && self.lra.check().is_ok() {
            Some(Undo::Lra(m))
        } else {
            self.lra.backtrack_to(m).unwrap();
            None
        }
    }

    fn push_euf(&mut self, l: &Term, r: &Term, positive: bool) -> Option<Undo> {
        let undo = if positive {
            self.eqs.push((l.clone(), r.clone()));
            Undo::Eq
        } else {
            self.diseqs.push((l.clone(), r.clone()));
            Undo::Diseq
        };
        if cc_consistent(&self.eqs, &self.diseqs) {
            Some(undo)
        } else {
            self.pop(undo);
            None
        }
    }

    fn pop(&mut self, u: Undo) {
        match u {
            Undo::Nothing => {}
            Undo::Split => {
                self.splits.pop();
            }
            Undo::Lra(m) => self.lra.backtrack_to(m).unwrap(),
            Undo::Eq => {
                self.eqs.pop();
            }
            Undo::Diseq => {
                self.diseqs.pop();
            }
        }
    }

    fn run(&mut self, i: usize) {
        match self.status() {
            Some(false) => return,
            Some(true) => return self.arrange(0),
            None => {}
        }
        let atom = self.atoms[i].clone();
        for val in [true, false] {
            self.value[i] = Some(val);
            let undo = match &atom {
                Atom::Prop(_) => Some(Undo::Nothing),
                Atom::Lra(a) => self.push_lra(a, val),
                Atom::Euf(l, r) => self.push_euf(l, r, val),
                Atom::Mixed(..) => panic!("formula must be purified"),
            };
            if let Some(u) = undo {
                self.run(i + 1);
                self.pop(u);
            }
        }
        self.value[i] = None;
    }

    fn arrange(&mut self, p: usize) {
        if p == self.pairs.len() {
            return self.leaf();
        }
        let (a, b) = self.pairs[p].clone();
        let (ta, tb) = (Term::var(&a), Term::var(&b));
        let diff = Linear::var(&a).minus(&Linear::var(&b));
        let mut cases = vec![(true, equality_atom(&a, &b), true)];
        for op in [Cmp::Lt, Cmp::Gt] {
            let (atom, pos) = normalize_comparison(diff.clone(), op).expect("distinct variables");
            cases.push((false, atom, pos));
        }
        for (same, atom, pos) in cases {
            if let Some(u1) = self.push_euf(&ta, &tb, same) {
                if let Some(u2) = self.push_lra(&atom, pos) {
                    self.arrange(p + 1);
                    self.pop(u2);
                }
                self.pop(u1);
            }
        }
    }

    fn leaf(&mut self) {
        let splits = self.splits.clone();
        for mask in 0u64..1 << splits.len() {
            let m = self.lra.mark();
            let mut ok = true;
            for (i, a) in splits.iter().enumerate() {
                let rel = if mask >> i & 1 == 1 { Rel::Le } else { Rel::Ge };
                self.tag += 1;
                ok &= self.lra.assert_atom(&LinAtom { expr: a.expr.clone(), rel }, false, Lit::pos(self.tag)).is_ok();
                if !ok {
                    break;
                }
            }
            if ok && self.lra.check().is_ok() {
                let v = match self.lra.minimize(&self.cost).expect("checked") {
                    MinResult::Unbounded => Ext::NegInf,
                    MinResult::Minimum { value, .. } => Ext::Finite(normalize_strict(value)),
                };
                if v < self.best {
                    self.best = v;
                }
            }
            self.lra.backtrack_to(m).unwrap();
        }
    }
}

/// Optimum of an arithmetic problem: minimum over all assignments to the atoms
/// that satisfy the formula of the minimum of the cost over the chosen literals.
pub fn omt_oracle(p: &OmtProblem) -> Ext {
    let phi = p.bounded_formula();
    let mut e = Enumeration::new(&phi, &p.cost, Vec::new());
    e.run(0);
    e.best
}

/// Optimum of a combined problem: the formula is purified, then every atom
/// assignment is extended with every arrangement (`=`, `<`, `>`) of the
/// interface variable pairs and checked by both theories.
pub fn dtc_oracle(p: &OmtProblem) -> Ext {
    let pure = purify(&p.bounded_formula());
    let pairs = interface_equalities(&pure.interface);
    let mut e = Enumeration::new(&pure.formula, &p.cost, pairs);
    e.run(0);
    e.best
}

fn props_of(phi: &Formula, extra: impl IntoIterator<Item = String>) -> Vec<String> {
    let mut names = BTreeSet::new();
    phi.visit_atoms(&mut |a| match a {
        Atom::Prop(p) => {
            names.insert(p.clone());
        }
        other => panic!("propositional formula expected, found {:?}", other),
    });
    names.extend(extra);
    names.into_iter().collect()
}

fn prop_eval(phi: &Formula, props: &[String], mask: u32) -> bool {
    phi.eval(&|a| match a {
        Atom::Prop(p) => mask >> props.iter().position(|q| q == p).unwrap() & 1 == 1,
        _ => unreachable!(),
    })
}

/// Minimum of the weighted sum over models of a propositional constraint.
pub fn pb_brute(o: &PbObjective) -> Option<Rational> {
    let props = props_of(&o.constraint, o.terms.iter().map(|t| t.0.clone()));
    assert!(props.len() <= 20);
    (0u32..1 << props.len())
        .filter(|&m| prop_eval(&o.constraint, &props, m))
        .map(|m| {
            o.terms
                .iter()
                .filter(|(x, _)| prop_eval(&Formula::prop(x), &props, m))
                .map(|(_, a)| a.clone())
                .sum::<Rational>()
        })
        .min()
}

/// Minimum total weight of falsified soft clauses over models of the hard part.
pub fn maxsmt_brute(m: &MaxSmtInstance) -> Option<Rational> {
    let mut all = vec![m.hard.clone()];
    all.extend(m.soft.iter().map(|s| s.0.clone()));
    let props = props_of(&Formula::And(all), []);
    assert!(props.len() <= 20);
    (0u32..1 << props.len())
        .filter(|&mask| prop_eval(&m.hard, &props, mask))
        .map(|mask| m.soft.iter().filter(|(c, _)| !prop_eval(c, &props, mask)).map(|(_, w)| w.clone()).sum::<Rational>())
        .min()
}

/// Shortest strip for integer rectangles `(w, h)`, trying only positions that
/// are sums of other rectangles' sizes; every packing can be pushed left and
/// down into one of those.
pub fn strip_brute(rects: &[(i64, i64)], height: i64) -> i64 {
    let n = rects.len();
    let sums = |pick: &dyn Fn(usize) -> i64, skip: usize| -> Vec<i64> {
        let others: Vec<i64> = (0..n).filter(|&j| j != skip).map(pick).collect();
        let mut s: BTreeSet<i64> = BTreeSet::new();
        for mask in 0u32..1 << others.len() {
            s.insert((0..others.len()).filter(|&k| mask >> k & 1 == 1).map(|k| others[k]).sum());
        }
        s.into_iter().collect()
    };
    let xs: Vec<Vec<i64>> = (0..n).map(|i| sums(&|j| rects[j].0, i)).collect();
    let ys: Vec<Vec<i64>> = (0..n).map(|i| sums(&|j| rects[j].1, i).into_iter().filter(|&y| y + rects[i].1 <= height).collect()).collect();
    let mut best: i64 = rects.iter().map(|r| r.0).sum();
    let mut placed: Vec<(i64, i64)> = Vec::new();
    fn rec(i: usize, rects: &[(i64, i64)], xs: &[Vec<i64>], ys: &[Vec<i64>], placed: &mut Vec<(i64, i64)>, len: i64, best: &mut i64) {
        if i == rects.len() {
            *best = (*best).min(len);
            return;
        }
        let (w, h) = rects[i];
        for &x in &xs[i] {
            if x + w >= *best {
                continue;
            }
            for &y in &ys[i] {
                let clear = placed.iter().enumerate().all(|(j, &(px, py))| {
                    let (pw, ph) = rects[j];
                    x + w <= px || px + pw <= x || y + h <= py || py + ph <= y
                });
                if clear {
                    placed.push((x, y));
                    rec(i + 1, rects, xs, ys, placed, len.max(x + w), best);
                    placed.pop();
                }
            }
        }
    }
    rec(0, rects, &xs, &ys, &mut placed, 0, &mut best);
    best
}

/// Smallest zero-wait makespan, trying both orders of every pair of stages that
/// share a machine and computing earliest starts by longest paths.
pub fn jobshop_brute(jobs: &[Vec<(usize, i64)>]) -> i64 {
    let offsets: Vec<Vec<i64>> = jobs
        .iter()
        .map(|st| st.iter().scan(0, |acc, s| { let here = *acc; *acc += s.1; Some(here) }).collect())
        .collect();
    let totals: Vec<i64> = jobs.iter().map(|st| st.iter().map(|s| s.1).sum()).collect();
    // (a, stage a, b, stage b) for stages on the same machine
    let mut conflicts = Vec::new();
    for a in 0..jobs.len() {
        for b in a + 1..jobs.len() {
            for (sa, (ma, _)) in jobs[a].iter().enumerate() {
                for (sb, (mb, _)) in jobs[b].iter().enumerate() {
                    if ma == mb {
                        conflicts.push((a, sa, b, sb));
                    }
                }
            }
        }
    }
    assert!(conflicts.len() <= 20);
    let mut best = i64::MAX;
    for mask in 0u32..1 << conflicts.len() {
        // edge (u, v, w): t_v ≥ t_u + w
        let edges: Vec<(usize, usize, i64)> = conflicts
            .iter()
            .enumerate()
            .map(|(k, &(a, sa, b, sb))| {
                if mask >> k & 1 == 0 {
                    (a, b, offsets[a][sa] + jobs[a][sa].1 - offsets[b][sb])
                } else {
                    (b, a, offsets[b][sb] + jobs[b][sb].1 - offsets[a][sa])
                }
            })
            .collect();
        let mut t = vec![0i64; jobs.len()];
        let mut stable = false;
        for _ in 0..=jobs.len() {
            let mut changed = false;
            for &(u, v, w) in &edges {
                if t[u] + w > t[v] {
                    t[v] = t[u] + w;
                    changed = true;
                }
            }
            if !changed {
                stable = true;
                break;
            }
        }
        if stable {
            let span = (0..jobs.len()).map(|j| t[j] + totals[j]).max().unwrap_or(0);
            best = best.min(span);
        }
    }
    best
}

/// Expected value of one assignment: `+∞` when the term literals together with
/// the interface (dis)equalities are inconsistent, otherwise the arithmetic
/// infimum over the arithmetic part, the true interface equalities and the
/// strict-order companions.
pub fn dispatch_oracle(mu: &EdiAssignment, cost: &str) -> Ext {
    let mut eqs = Vec::new();
    let mut diseqs = Vec::new();
    for (l, r, pos) in &mu.euf {
        if *pos { eqs.push((l.clone(), r.clone())) } else { diseqs.push((l.clone(), r.clone())) }
    }
    for (a, b, pos) in &mu.eq {
        let pair = (Term::var(a), Term::var(b));
        if *pos { eqs.push(pair) } else { diseqs.push(pair) }
    }
    if !cc_consistent(&eqs, &diseqs) {
        return Ext::PosInf;
    }
    let mut lits = mu.lra.clone();
    for (a, b, pos) in &mu.eq {
        if *pos {
            lits.push((equality_atom(a, b), true));
        }
    }
    for (a, b, lt, gt) in &mu.ineq {
        let diff = Linear::var(a).minus(&Linear::var(b));
        for (op, truth) in [(Cmp::Lt, *lt), (Cmp::Gt, *gt)] {
            let (atom, pos) = normalize_comparison(diff.clone(), op).expect("distinct variables");
            lits.push((atom, pos == truth));
        }
    }
    lp_min(&lits, cost)
}
