//! Lazy SMT engine: the CDCL solver driven by an arithmetic and (optionally) a
//! congruence-closure solver through the theory hook.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};

use crate::arith::{int, DeltaRational, Rational};
use crate::ast::{cnfize, equality_atom, interface_equalities, normalize_comparison, purify, Atom, Cmp, LinAtom, Linear, Literal, Rel, Term};
use crate::euf::{self, EGraph, NodeId};
use crate::lra::{self, LraSolver};
use crate::sat::{HookAction, LBool, Lit, SatSolver, SolveResult, Theory, Var};

use super::{Model, OmtError};

#[derive(Clone, Debug)]
enum Kind {
    Prop(String),
    Lra(LinAtom),
    Euf(NodeId, NodeId),
    /// Equality between two interface variables, shared by both solvers.
    Iface(LinAtom, NodeId, NodeId),
}

#[derive(Clone, Copy, Debug)]
pub struct SmtOptions {
    pub pure_literal_filtering: bool,
    pub theory_propagation: bool,
}

impl Default for SmtOptions {
    fn default() -> Self {
        SmtOptions { pure_literal_filtering: true, theory_propagation: true }
    }
}

/// Called on every total, theory-consistent assignment.
pub trait ModelHook {
    fn on_model(&mut self, bridge: &mut Bridge, solver: &SatSolver) -> HookAction;
    fn assumptions_failed(&mut self, _bridge: &mut Bridge, _core: &[Lit]) -> Option<Vec<Lit>> {
        None
    }
}

struct Level {
    pos: usize,
    level: u32,
    lra: lra::Mark,
    euf: Option<euf::Mark>,
}

/// Theory side of the engine.
pub struct Bridge {
    kinds: Vec<Kind>,
    by_atom: HashMap<Atom, Var>,
    pub lra: LraSolver,
    pub euf: Option<EGraph>,
    send_pos: Vec<bool>,
    send_neg: Vec<bool>,
    processed: usize,
    levels: Vec<Level>,
    explanations: HashMap<Lit, Vec<Lit>>,
    iface_eqs: Vec<(NodeId, NodeId, Lit)>,
    options: SmtOptions,
    cost: Option<String>,
    pub hook: Option<Box<dyn ModelHook>>,
}

impl Bridge {
    fn new(options: SmtOptions, cost: Option<&str>, with_euf: bool) -> Bridge {
        let mut lra = LraSolver::new();
        if let Some(c) = cost {
            lra.var(c);
        }
        let lra_mark = lra.mark();
        let mut euf = if with_euf { Some(EGraph::new()) } else { None };
        let euf_mark = euf.as_mut().map(|g| g.mark());
        Bridge {
            kinds: Vec::new(),
            by_atom: HashMap::new(),
            lra,
            euf,
            send_pos: Vec::new(),
            send_neg: Vec::new(),
            processed: 0,
            levels: vec![Level { pos: 0, level: 0, lra: lra_mark, euf: euf_mark }],
            explanations: HashMap::new(),
            iface_eqs: Vec::new(),
            options,
            cost: cost.map(str::to_string),
            hook: None,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.kinds.len()
    }

    fn push_kind(&mut self, kind: Kind) -> Var {
        let v = Var(self.kinds.len() as u32);
        if let Kind::Lra(a) | Kind::Iface(a, _, _) = &kind {
            self.lra.register_atom(a, Lit::new(v, true));
        }
        if let Kind::Iface(_, x, y) = &kind {
            self.iface_eqs.push((*x, *y, Lit::new(v, true)));
        }
        self.kinds.push(kind);
        self.send_pos.push(true);
        self.send_neg.push(true);
        v
    }

    /// Literal for an arithmetic atom, allocating a fresh variable when new.
    /// Equality atoms need their split clauses, which only `Smt` adds.
    pub fn lra_lit(&mut self, atom: &LinAtom, positive: bool) -> Lit {
        let key = Atom::Lra(atom.clone());
        let v = match self.by_atom.get(&key) {
            Some(&v) => v,
            None => {
                let v = self.push_kind(Kind::Lra(atom.clone()));
                self.by_atom.insert(key, v);
                v
            }
        };
        Lit::new(v, positive)
    }

    /// Literal for `cost op c`; `op` must not be `Eq` or `Ne`.
    pub fn cost_lit(&mut self, op: Cmp, c: &Rational) -> Lit {
        let cost = self.cost.clone().expect("no cost variable");
        let mut e = Linear::var(&cost);
        e.constant = -c.clone();
        let (atom, pos) = normalize_comparison(e, op).expect("cost atom is not constant");
        debug_assert!(atom.rel != Rel::Eq);
        self.lra_lit(&atom, pos)
    }

    fn assert_lit(&mut self, lit: Lit) -> Result<(), Vec<Lit>> {
        let v = lit.var().index();
        let pos = lit.is_positive();
        match &self.kinds[v] {
            Kind::Prop(_) => Ok(()),
            Kind::Lra(a) => {
                let send = if pos { self.send_pos[v] } else { self.send_neg[v] };
                if !send || (a.rel == Rel::Eq && !pos) {
                    return Ok(());
                }
                let a = a.clone();
                self.lra.assert_atom(&a, pos, lit)
            }
            &Kind::Euf(x, y) => {
                let g = self.euf.as_mut().unwrap();
                if pos {
                    g.assert_eq(x, y, lit)
                } else {
                    g.assert_diseq(x, y, lit)
                }
            }
            Kind::Iface(a, x, y) => {
                let (x, y) = (*x, *y);
                if pos {
                    let a = a.clone();
                    self.lra.assert_atom(&a, true, lit)?;
                    self.euf.as_mut().unwrap().assert_eq(x, y, lit)
                } else {
                    self.euf.as_mut().unwrap().assert_diseq(x, y, lit)
                }
            }
        }
    }

    /// Current values: arithmetic variables from the simplex, propositions from the
    /// trail, and class-consistent values for variables seen only by the congruence solver.
    pub fn build_model(&self, solver: &SatSolver) -> Model {
        let mut reals = self.lra.model();
        let mut bools = BTreeMap::new();
        for (v, k) in self.kinds.iter().enumerate() {
            if let Kind::Prop(name) = k {
                let val = v < solver.num_vars() && solver.var_value(Var(v as u32)) == LBool::True;
                bools.insert(name.clone(), val);
            }
        }
        if let Some(g) = &self.euf {
            let mut euf_vars = BTreeSet::new();
            for a in self.by_atom.keys() {
                if let Atom::Euf(l, r) = a {
                    l.collect_vars(&mut euf_vars);
                    r.collect_vars(&mut euf_vars);
                }
            }
            let mut class_value: HashMap<NodeId, Rational> = HashMap::new();
            for (name, val) in &reals {
                if let Some(n) = g.node_of(&Term::var(name)) {
                    class_value.entry(g.find(n)).or_insert_with(|| val.clone());
                }
            }
            let mut next = reals.values().map(|r| r.abs()).max().unwrap_or_else(Rational::zero).floor() + Rational::one();
            for name in euf_vars {
                if reals.contains_key(&name) {
                    continue;
                }
                let n = g.node_of(&Term::var(&name)).unwrap();
                let val = class_value
                    .entry(g.find(n))
                    .or_insert_with(|| {
                        let v = next.clone();
                        next += int(1);
                        v
                    })
                    .clone();
                reals.insert(name, val);
            }
        }
        Model { reals, bools }
    }
}

impl Theory for Bridge {
    fn check(&mut self, solver: &SatSolver, complete: bool) -> HookAction {
        let trail = solver.trail();
        while self.processed < trail.len() {
            let lit = trail[self.processed];
            let level = solver.level_of(lit.var());
            if level > self.levels.last().unwrap().level {
                let lra = self.lra.mark();
                let euf = self.euf.as_mut().map(|g| g.mark());
                self.levels.push(Level { pos: self.processed, level, lra, euf });
            }
            self.processed += 1;
            if let Err(tags) = self.assert_lit(lit) {
                return HookAction::Conflict(tags.into_iter().map(|l| !l).collect());
            }
        }
        if let Err(tags) = self.lra.check() {
            return HookAction::Conflict(tags.into_iter().map(|l| !l).collect());
        }
        if self.options.theory_propagation {
            let mut props = Vec::new();
            for (l, why) in self.lra.deduce() {
                if solver.value(l) == LBool::Undef {
                    self.explanations.insert(l, why);
                    props.push(l);
                }
            }
            if let Some(g) = &self.euf {
                let open: Vec<_> = self.iface_eqs.iter().filter(|e| solver.value(e.2) == LBool::Undef).copied().collect();
                for (l, why) in g.check_and_deduce(&open) {
                    self.explanations.insert(l, why);
                    props.push(l);
                }
            }
            if !props.is_empty() {
                return HookAction::Propagate(props);
            }
        }
        if complete {
            if let Some(mut hook) = self.hook.take() {
                let action = hook.on_model(self, solver);
                self.hook = Some(hook);
                return action;
            }
        }
        HookAction::Continue
    }

    fn explain(&mut self, lit: Lit) -> Vec<Lit> {
        self.explanations.get(&lit).cloned().unwrap_or_default()
    }

    fn backtrack(&mut self, _level: u32, trail_len: usize) {
        self.processed = self.processed.min(trail_len);
        let mut restore = None;
        while self.levels.len() > 1 && self.levels.last().unwrap().pos >= trail_len {
            restore = self.levels.pop();
        }
        if let Some(l) = restore {
            self.lra.backtrack_to(l.lra).expect("simplex mark");
            if let (Some(g), Some(m)) = (self.euf.as_mut(), l.euf) {
                g.backtrack_to(m).expect("egraph mark");
            }
        }
        if trail_len == 0 {
            let base = &mut self.levels[0];
            self.lra.backtrack_to(base.lra).expect("simplex mark");
            base.lra = self.lra.mark();
            if let (Some(g), Some(m)) = (self.euf.as_mut(), base.euf) {
                g.backtrack_to(m).expect("egraph mark");
                base.euf = Some(g.mark());
            }
        }
    }

    fn assumptions_failed(&mut self, core: &[Lit]) -> Option<Vec<Lit>> {
        let mut hook = self.hook.take()?;
        let out = hook.assumptions_failed(self, core);
        self.hook = Some(hook);
        out
    }
}

/// SAT solver plus theory bridge for one formula.
pub struct Smt {
    pub sat: SatSolver,
    pub bridge: Bridge,
    /// Variables shared by arithmetic and uninterpreted atoms.
    pub interface: BTreeSet<String>,
}

fn split_eq(atom: &LinAtom) -> (LinAtom, LinAtom) {
    (LinAtom { expr: atom.expr.clone(), rel: Rel::Ge }, LinAtom { expr: atom.expr.clone(), rel: Rel::Le })
}

impl Smt {
    /// Encodes `phi` (purified and clausified). `cost`, when given, is never
    /// subject to pure-literal filtering.
    pub fn build(phi: &crate::ast::Formula, cost: Option<&str>, options: SmtOptions) -> Result<Smt, OmtError> {
        let pur = purify(phi);
        let mut with_euf = false;
        pur.formula.visit_atoms(&mut |a| with_euf |= matches!(a, Atom::Euf(..)));
        let interface = if with_euf { pur.interface.clone() } else { BTreeSet::new() };
        let mut smt = Smt { sat: SatSolver::new(), bridge: Bridge::new(options, cost, with_euf), interface };
        let mut clauses: Vec<Vec<Lit>> = Vec::new();
        let iface_pairs = interface_equalities(&smt.interface);
        let iface_atoms: HashMap<LinAtom, (String, String)> =
            iface_pairs.iter().map(|(a, b)| (equality_atom(a, b), (a.clone(), b.clone()))).collect();
        for c in cnfize(&pur.formula) {
            let mut lits = Vec::with_capacity(c.lits.len());
            for l in &c.lits {
                lits.push(smt.literal(l, &iface_atoms, &mut clauses)?);
            }
            clauses.push(lits);
        }
        for (a, b) in &iface_pairs {
            let atom = equality_atom(a, b);
            smt.literal(&Literal::new(Atom::Lra(atom), true), &iface_atoms, &mut clauses)?;
        }
        if options.pure_literal_filtering {
            let n = smt.bridge.num_vars();
            let mut pos = vec![false; n];
            let mut neg = vec![false; n];
            for c in &clauses {
                for l in c {
                    if l.is_positive() {
                        pos[l.var().index()] = true;
                    } else {
                        neg[l.var().index()] = true;
                    }
                }
            }
            for v in 0..n {
                let exempt = match &smt.bridge.kinds[v] {
                    Kind::Lra(a) => cost.map_or(false, |c| a.mentions(c)),
                    _ => true,
                };
                if !exempt {
                    smt.bridge.send_pos[v] = pos[v];
                    smt.bridge.send_neg[v] = neg[v];
                }
            }
        }
        smt.sat.ensure_vars(smt.bridge.num_vars());
        for c in &clauses {
            smt.sat.add_clause(c);
        }
        Ok(smt)
    }

    fn literal(
        &mut self,
        l: &Literal,
        iface: &HashMap<LinAtom, (String, String)>,
        clauses: &mut Vec<Vec<Lit>>,
    ) -> Result<Lit, OmtError> {
        if let Some(&v) = self.bridge.by_atom.get(&l.atom) {
            return Ok(Lit::new(v, l.positive));
        }
        let v = match &l.atom {
            Atom::Prop(p) => self.bridge.push_kind(Kind::Prop(p.clone())),
            Atom::Lra(a) => {
                let v = match iface.get(a) {
                    Some((x, y)) => {
                        let g = self.bridge.euf.as_mut().unwrap();
                        let nx = g.add_term(&Term::var(x)).map_err(|e| OmtError::Invalid(e.to_string()))?;
                        let ny = g.add_term(&Term::var(y)).map_err(|e| OmtError::Invalid(e.to_string()))?;
                        self.bridge.push_kind(Kind::Iface(a.clone(), nx, ny))
                    }
                    None => self.bridge.push_kind(Kind::Lra(a.clone())),
                };
                self.bridge.by_atom.insert(l.atom.clone(), v);
                if a.rel == Rel::Eq {
                    // eq ↔ (ge ∧ le); a false equality picks one strict side
                    let (ge, le) = split_eq(a);
                    let ge = self.literal(&Literal::new(Atom::Lra(ge), true), iface, clauses)?;
                    let le = self.literal(&Literal::new(Atom::Lra(le), true), iface, clauses)?;
                    let eq = Lit::new(v, true);
                    clauses.push(vec![eq, !ge, !le]);
                    clauses.push(vec![!eq, ge]);
                    clauses.push(vec![!eq, le]);
                    clauses.push(vec![ge, le]);
                }
                return Ok(Lit::new(v, l.positive));
            }
            Atom::Euf(x, y) => {
                let g = self.bridge.euf.as_mut().unwrap();
                let nx = g.add_term(x).map_err(|e| OmtError::Invalid(e.to_string()))?;
                let ny = g.add_term(y).map_err(|e| OmtError::Invalid(e.to_string()))?;
                self.bridge.push_kind(Kind::Euf(nx, ny))
            }
            Atom::Mixed(..) => return Err(OmtError::Invalid("unpurified atom".into())),
        };
        self.bridge.by_atom.insert(l.atom.clone(), v);
        Ok(Lit::new(v, l.positive))
    }

    pub fn solve(&mut self, assumptions: &[Lit]) -> SolveResult {
        self.sat.ensure_vars(self.bridge.num_vars());
        self.sat.solve_with(assumptions, &mut self.bridge)
    }

    pub fn model(&self) -> Model {
        self.bridge.build_model(&self.sat)
    }

    /// Current value of the cost variable in the simplex valuation.
    pub fn cost_value(&self, cost: &str) -> Option<DeltaRational> {
        self.bridge.lra.var_index(cost).map(|v| self.bridge.lra.value_of(v).clone())
    }
}
