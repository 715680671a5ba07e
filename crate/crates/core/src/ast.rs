//! Terms, atoms and formulas over linear rational arithmetic with uninterpreted
//! functions, plus Boolean abstraction, CNF conversion and purification.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::arith::Rational;

/// Surface comparison operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cmp {
    Eq,
    Ne,
    Le,
    Lt,
    Ge,
    Gt,
}

impl Cmp {
    /// Operator obtained by swapping the two sides.
    pub fn mirrored(self) -> Cmp {
        match self {
            Cmp::Le => Cmp::Ge,
            Cmp::Lt => Cmp::Gt,
            Cmp::Ge => Cmp::Le,
            Cmp::Gt => Cmp::Lt,
            other => other,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Eq => "=",
            Cmp::Ne => "distinct",
            Cmp::Le => "<=",
            Cmp::Lt => "<",
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
        }
    }

    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Cmp::Eq => lhs == rhs,
            Cmp::Ne => lhs != rhs,
            Cmp::Le => lhs <= rhs,
            Cmp::Lt => lhs < rhs,
            Cmp::Ge => lhs >= rhs,
            Cmp::Gt => lhs > rhs,
        }
    }
}

/// Relation of a normalized arithmetic atom `expr rel 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

/// `Σ coeffs[x]·x + constant` with zero coefficients removed; keys iterate in name order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Linear {
    pub coeffs: BTreeMap<String, Rational>,
    pub constant: Rational,
}

impl Linear {
    pub fn var(name: &str) -> Linear {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(name.to_string(), Rational::one());
        Linear { coeffs, constant: Rational::zero() }
    }

    pub fn constant(c: Rational) -> Linear {
        Linear { coeffs: BTreeMap::new(), constant: c }
    }

    pub fn from_terms<I: IntoIterator<Item = (String, Rational)>>(terms: I, constant: Rational) -> Linear {
        let mut l = Linear::constant(constant);
        for (v, c) in terms {
            l.add_term(&v, &c);
        }
        l
    }

    pub fn add_term(&mut self, var: &str, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(var.to_string()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(var);
        }
    }

    pub fn add_scaled(&mut self, other: &Linear, c: &Rational) {
        for (v, a) in &other.coeffs {
            self.add_term(v, &(a * c));
        }
        self.constant += &other.constant * c;
    }

    pub fn plus(&self, other: &Linear) -> Linear {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn minus(&self, other: &Linear) -> Linear {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn scaled(&self, c: &Rational) -> Linear {
        let mut out = Linear::default();
        out.add_scaled(self, c);
        out
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, var: &str) -> Rational {
        self.coeffs.get(var).cloned().unwrap_or_else(Rational::zero)
    }

    /// The same combination without its constant.
    pub fn var_part(&self) -> Linear {
        Linear { coeffs: self.coeffs.clone(), constant: Rational::zero() }
    }

    pub fn eval(&self, values: &BTreeMap<String, Rational>) -> Option<Rational> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.coeffs {
            acc += c * values.get(v)?;
        }
        Some(acc)
    }

    pub fn to_term(&self) -> Term {
        let mut items: Vec<(Rational, Term)> =
            self.coeffs.iter().map(|(v, c)| (c.clone(), Term::Var(v.clone()))).collect();
        if items.is_empty() {
            return Term::Const(self.constant.clone());
        }
        if items.len() == 1 && self.constant.is_zero() && items[0].0.is_one() {
            return items.pop().unwrap().1;
        }
        Term::Sum(items, self.constant.clone())
    }
}

/// Arithmetic atom `expr rel 0` whose first coefficient is exactly one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinAtom {
    pub expr: Linear,
    pub rel: Rel,
}

impl LinAtom {
    /// Right-hand side when the atom is read as `var_part rel rhs`.
    pub fn rhs(&self) -> Rational {
        -self.expr.constant.clone()
    }

    pub fn mentions(&self, var: &str) -> bool {
        self.expr.coeffs.contains_key(var)
    }

    pub fn holds(&self, values: &BTreeMap<String, Rational>) -> Option<bool> {
        let v = self.expr.eval(values)?;
        Some(match self.rel {
            Rel::Le => !v.is_positive(),
            Rel::Ge => !v.is_negative(),
            Rel::Eq => v.is_zero(),
        })
    }

    /// Reads the atom as `t ⋈ cost` with `cost` absent from `t`.
    pub fn cost_form(&self, cost: &str) -> Option<(Linear, Cmp)> {
        let a = self.expr.coeffs.get(cost)?.clone();
        // a·cost + rest rel 0  ⇔  cost rel' −rest/a
        let mut rest = self.expr.clone();
        rest.coeffs.remove(cost);
        let t = rest.scaled(&(-Rational::one() / &a));
        let cost_side = match (self.rel, a.is_positive()) {
            (Rel::Eq, _) => Cmp::Eq,
            (Rel::Le, true) | (Rel::Ge, false) => Cmp::Le,
            (Rel::Ge, true) | (Rel::Le, false) => Cmp::Ge,
        };
        // cost ⋈ t  ⇔  t ⋈' cost
        Some((t, cost_side.mirrored()))
    }
}

/// Normalizes `expr op 0` into an atom plus a polarity, or a constant truth value.
pub fn normalize_comparison(expr: Linear, op: Cmp) -> Result<(LinAtom, bool), bool> {
    let lead = match expr.coeffs.values().next() {
        None => {
            let zero = Rational::zero();
            return Err(op.holds(&expr.constant, &zero));
        }
        Some(c) => c.clone(),
    };
    let op = if lead.is_negative() { op.mirrored() } else { op };
    let expr = expr.scaled(&(Rational::one() / lead));
    let (rel, positive) = match op {
        Cmp::Le => (Rel::Le, true),
        Cmp::Ge => (Rel::Ge, true),
        Cmp::Lt => (Rel::Ge, false),
        Cmp::Gt => (Rel::Le, false),
        Cmp::Eq => (Rel::Eq, true),
        Cmp::Ne => (Rel::Eq, false),
    };
    Ok((LinAtom { expr, rel }, positive))
}

/// A term. `Sum` holds linear combinations; when every summand is a variable it is a
/// plain linear term, otherwise it mixes arithmetic with applications.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(Rational),
    App(String, Vec<Term>),
    Sum(Vec<(Rational, Term)>, Rational),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn app(f: &str, args: Vec<Term>) -> Term {
        Term::App(f.to_string(), args)
    }

    /// Normalized `Σ cᵢ·tᵢ + k`: nested sums flattened, like summands merged, zeros dropped.
    pub fn sum(items: Vec<(Rational, Term)>, constant: Rational) -> Term {
        let mut acc: BTreeMap<Term, Rational> = BTreeMap::new();
        let mut k = constant;
        fn push(acc: &mut BTreeMap<Term, Rational>, k: &mut Rational, c: Rational, t: Term) {
            match t {
                Term::Const(v) => *k += c * v,
                Term::Sum(inner, ik) => {
                    *k += &c * ik;
                    for (ci, ti) in inner {
                        push(acc, k, &c * ci, ti);
                    }
                }
                other => {
                    let e = acc.entry(other).or_insert_with(Rational::zero);
                    *e += c;
                }
            }
        }
        for (c, t) in items {
            push(&mut acc, &mut k, c, t);
        }
        let items: Vec<(Rational, Term)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(t, c)| (c, t)).collect();
        if items.is_empty() {
            return Term::Const(k);
        }
        if items.len() == 1 && k.is_zero() && items[0].0.is_one() {
            return items.into_iter().next().unwrap().1;
        }
        Term::Sum(items, k)
    }

    pub fn add(a: Term, b: Term) -> Term {
        Term::sum(vec![(Rational::one(), a), (Rational::one(), b)], Rational::zero())
    }

    pub fn scale(c: Rational, t: Term) -> Term {
        Term::sum(vec![(c, t)], Rational::zero())
    }

    /// The linear form of the term, when it contains no applications.
    pub fn to_linear(&self) -> Option<Linear> {
        match self {
            Term::Var(v) => Some(Linear::var(v)),
            Term::Const(c) => Some(Linear::constant(c.clone())),
            Term::App(..) => None,
            Term::Sum(items, k) => {
                let mut l = Linear::constant(k.clone());
                for (c, t) in items {
                    l.add_scaled(&t.to_linear()?, c);
                }
                Some(l)
            }
        }
    }

    pub fn is_uninterpreted(&self) -> bool {
        matches!(self, Term::Var(_) | Term::App(..))
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Term::Sum(items, _) => items.iter().for_each(|(_, t)| t.collect_vars(out)),
        }
    }

    fn has_app(&self) -> bool {
        match self {
            Term::App(..) => true,
            Term::Sum(items, _) => items.iter().any(|(_, t)| t.has_app()),
            _ => false,
        }
    }
}

/// Theory or propositional atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Prop(String),
    Lra(LinAtom),
    /// Equality between uninterpreted terms; sides stored in term order.
    Euf(Term, Term),
    /// Comparison mixing arithmetic and applications, removed by `purify`.
    /// The operator is one of `Eq`, `Le`, `Ge`.
    Mixed(Term, Cmp, Term),
}

impl Atom {
    pub fn is_theory(&self) -> bool {
        !matches!(self, Atom::Prop(_))
    }

    pub fn euf(a: Term, b: Term) -> Atom {
        if a <= b {
            Atom::Euf(a, b)
        } else {
            Atom::Euf(b, a)
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        match self {
            Atom::Prop(_) => {}
            Atom::Lra(a) => out.extend(a.expr.coeffs.keys().cloned()),
            Atom::Euf(a, b) | Atom::Mixed(a, _, b) => {
                a.collect_vars(&mut out);
                b.collect_vars(&mut out);
            }
        }
        out
    }
}

/// Atom with a polarity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn new(atom: Atom, positive: bool) -> Literal {
        Literal { atom, positive }
    }

    pub fn negated(&self) -> Literal {
        Literal { atom: self.atom.clone(), positive: !self.positive }
    }

    pub fn to_formula(&self) -> Formula {
        let a = Formula::Atom(self.atom.clone());
        if self.positive {
            a
        } else {
            Formula::Not(Box::new(a))
        }
    }
}

/// Disjunction of literals without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    pub lits: Vec<Literal>,
}

impl Clause {
    /// Drops duplicate literals; `None` when the clause is a tautology.
    pub fn new(lits: Vec<Literal>) -> Option<Clause> {
        let mut seen: HashSet<&Literal> = HashSet::new();
        let mut out = Vec::with_capacity(lits.len());
        for l in &lits {
            if seen.contains(&l.negated()) {
                return None;
            }
            if seen.insert(l) {
                out.push(l.clone());
            }
        }
        Some(Clause { lits: out })
    }

    pub fn to_formula(&self) -> Formula {
        Formula::or(self.lits.iter().map(Literal::to_formula).collect())
    }
}

/// Boolean combination of atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn prop(name: &str) -> Formula {
        Formula::Atom(Atom::Prop(name.to_string()))
    }

    pub fn atom(a: Atom) -> Formula {
        Formula::Atom(a)
    }

    pub fn literal(a: Atom, positive: bool) -> Formula {
        Literal::new(a, positive).to_formula()
    }

    /// `expr op 0` as a normalized arithmetic literal.
    pub fn lra(expr: Linear, op: Cmp) -> Formula {
        match normalize_comparison(expr, op) {
            Ok((a, pos)) => Formula::literal(Atom::Lra(a), pos),
            Err(true) => Formula::True,
            Err(false) => Formula::False,
        }
    }

    /// `lhs op rhs` for arbitrary terms.
    pub fn compare(lhs: Term, op: Cmp, rhs: Term) -> Formula {
        if let (Some(l), Some(r)) = (lhs.to_linear(), rhs.to_linear()) {
            return Formula::lra(l.minus(&r), op);
        }
        if matches!(op, Cmp::Eq | Cmp::Ne) && lhs.is_uninterpreted() && rhs.is_uninterpreted() {
            if lhs == rhs {
                return if op == Cmp::Eq { Formula::True } else { Formula::False };
            }
            return Formula::literal(Atom::euf(lhs, rhs), op == Cmp::Eq);
        }
        let (op, pos) = match op {
            Cmp::Eq => (Cmp::Eq, true),
            Cmp::Ne => (Cmp::Eq, false),
            Cmp::Le => (Cmp::Le, true),
            Cmp::Ge => (Cmp::Ge, true),
            Cmp::Lt => (Cmp::Ge, false),
            Cmp::Gt => (Cmp::Le, false),
        };
        Formula::literal(Atom::Mixed(lhs, op, rhs), pos)
    }

    /// `var op c`.
    pub fn var_cmp(var: &str, op: Cmp, c: Rational) -> Formula {
        let mut e = Linear::var(var);
        e.constant = -c;
        Formula::lra(e, op)
    }

    pub fn not(f: Formula) -> Formula {
        match f {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(g) => *g,
            other => Formula::Not(Box::new(other)),
        }
    }

    pub fn and(mut v: Vec<Formula>) -> Formula {
        match v.len() {
            0 => Formula::True,
            1 => v.pop().unwrap(),
            _ => Formula::And(v),
        }
    }

    pub fn or(mut v: Vec<Formula>) -> Formula {
        match v.len() {
            0 => Formula::False,
            1 => v.pop().unwrap(),
            _ => Formula::Or(v),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Distinct atoms in order of first occurrence.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        self.visit_atoms(&mut |a| {
            if seen.insert(a.clone()) {
                out.push(a.clone());
            }
        });
        out
    }

    pub fn visit_atoms(&self, f: &mut dyn FnMut(&Atom)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => f(a),
            Formula::Not(g) => g.visit_atoms(f),
            Formula::And(v) | Formula::Or(v) => v.iter().for_each(|g| g.visit_atoms(f)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
        }
    }

    /// All variable and proposition names.
    pub fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |a| match a {
            Atom::Prop(p) => {
                out.insert(p.clone());
            }
            other => out.extend(other.vars()),
        });
        out
    }

    /// Rebuilds the formula with every atom replaced by `f(atom)`.
    pub fn map_atoms(&self, f: &mut dyn FnMut(&Atom) -> Formula) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => f(a),
            Formula::Not(g) => Formula::Not(Box::new(g.map_atoms(f))),
            Formula::And(v) => Formula::And(v.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Or(v) => Formula::Or(v.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Implies(a, b) => Formula::Implies(Box::new(a.map_atoms(f)), Box::new(b.map_atoms(f))),
            Formula::Iff(a, b) => Formula::Iff(Box::new(a.map_atoms(f)), Box::new(b.map_atoms(f))),
        }
    }

    pub fn eval(&self, value: &dyn Fn(&Atom) -> bool) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => value(a),
            Formula::Not(g) => !g.eval(value),
            Formula::And(v) => v.iter().all(|g| g.eval(value)),
            Formula::Or(v) => v.iter().any(|g| g.eval(value)),
            Formula::Implies(a, b) => !a.eval(value) || b.eval(value),
            Formula::Iff(a, b) => a.eval(value) == b.eval(value),
        }
    }

    /// Removes constants below the root and collapses double negations.
    pub fn simplify(&self) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => self.clone(),
            Formula::Not(g) => Formula::not(g.simplify()),
            Formula::And(v) => {
                let mut out = Vec::new();
                for g in v {
                    match g.simplify() {
                        Formula::True => {}
                        Formula::False => return Formula::False,
                        Formula::And(inner) => out.extend(inner),
                        other => out.push(other),
                    }
                }
                Formula::and(out)
            }
            Formula::Or(v) => {
                let mut out = Vec::new();
                for g in v {
                    match g.simplify() {
                        Formula::False => {}
                        Formula::True => return Formula::True,
                        Formula::Or(inner) => out.extend(inner),
                        other => out.push(other),
                    }
                }
                Formula::or(out)
            }
            Formula::Implies(a, b) => match (a.simplify(), b.simplify()) {
                (Formula::False, _) | (_, Formula::True) => Formula::True,
                (Formula::True, b) => b,
                (a, Formula::False) => Formula::not(a),
                (a, b) => Formula::implies(a, b),
            },
            Formula::Iff(a, b) => match (a.simplify(), b.simplify()) {
                (Formula::True, x) | (x, Formula::True) => x,
                (Formula::False, x) | (x, Formula::False) => Formula::not(x),
                (a, b) => Formula::iff(a, b),
            },
        }
    }
}

/// Produces names not present in a reserved set.
#[derive(Clone, Debug)]
pub struct FreshNames {
    prefix: String,
    next: usize,
    taken: BTreeSet<String>,
}

impl FreshNames {
    pub fn new(prefix: &str, taken: BTreeSet<String>) -> FreshNames {
        FreshNames { prefix: prefix.to_string(), next: 1, taken }
    }

    pub fn fresh(&mut self) -> String {
        loop {
            let name = format!("{}{}", self.prefix, self.next);
            self.next += 1;
            if self.taken.insert(name.clone()) {
                return name;
            }
        }
    }
}

/// Propositional skeleton plus the proposition ↦ theory atom map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abstraction {
    pub skeleton: Formula,
    pub map: Vec<(String, Atom)>,
}

impl Abstraction {
    pub fn refine(&self) -> Formula {
        let lookup: HashMap<&str, &Atom> = self.map.iter().map(|(p, a)| (p.as_str(), a)).collect();
        self.skeleton.map_atoms(&mut |a| match a {
            Atom::Prop(p) => match lookup.get(p.as_str()) {
                Some(t) => Formula::Atom((*t).clone()),
                None => Formula::Atom(a.clone()),
            },
            other => Formula::Atom(other.clone()),
        })
    }
}

pub fn boolean_abstraction(phi: &Formula) -> Abstraction {
    let mut fresh = FreshNames::new("@p", phi.names());
    let mut by_atom: HashMap<Atom, String> = HashMap::new();
    let mut map = Vec::new();
    let skeleton = phi.map_atoms(&mut |a| {
        if !a.is_theory() {
            return Formula::Atom(a.clone());
        }
        let name = by_atom
            .entry(a.clone())
            .or_insert_with(|| {
                let n = fresh.fresh();
                map.push((n.clone(), a.clone()));
                n
            })
            .clone();
        Formula::prop(&name)
    });
    Abstraction { skeleton, map }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Polarity {
    Pos,
    Neg,
    Both,
}

impl Polarity {
    fn flip(self) -> Polarity {
        match self {
            Polarity::Pos => Polarity::Neg,
            Polarity::Neg => Polarity::Pos,
            Polarity::Both => Polarity::Both,
        }
    }
    fn pos(self) -> bool {
        self != Polarity::Neg
    }
    fn neg(self) -> bool {
        self != Polarity::Pos
    }
}

/// Polarity-aware clause-form converter; labels are fresh propositions.
pub struct Cnfizer {
    fresh: FreshNames,
    clauses: Vec<Clause>,
}

impl Cnfizer {
    pub fn new(taken: BTreeSet<String>) -> Cnfizer {
        Cnfizer { fresh: FreshNames::new("@l", taken), clauses: Vec::new() }
    }

    fn emit(&mut self, lits: Vec<Literal>) {
        if let Some(c) = Clause::new(lits) {
            self.clauses.push(c);
        }
    }

    pub fn add(&mut self, phi: &Formula) {
        let phi = phi.simplify();
        self.top(&phi);
    }

    pub fn finish(self) -> Vec<Clause> {
        self.clauses
    }

    fn top(&mut self, f: &Formula) {
        match f {
            Formula::True => {}
            Formula::False => self.clauses.push(Clause { lits: vec![] }),
            Formula::And(v) => v.iter().for_each(|g| self.top(g)),
            Formula::Not(g) => match g.as_ref() {
                Formula::Or(v) => v.iter().for_each(|h| self.top(&Formula::not(h.clone()))),
                Formula::Implies(a, b) => {
                    self.top(a);
                    self.top(&Formula::not((**b).clone()));
                }
                _ => self.top_clause(f),
            },
            _ => self.top_clause(f),
        }
    }

    fn top_clause(&mut self, f: &Formula) {
        let mut disjuncts = Vec::new();
        collect_disjuncts(f, &mut disjuncts);
        let lits = disjuncts.iter().map(|d| self.label(d, Polarity::Pos)).collect();
        self.emit(lits);
    }

    fn label(&mut self, f: &Formula, pol: Polarity) -> Literal {
        match f {
            Formula::Atom(a) => Literal::new(a.clone(), true),
            Formula::Not(g) => self.label(g, pol.flip()).negated(),
            Formula::True | Formula::False => {
                // constants only survive at the root after simplification
                let p = Atom::Prop(self.fresh.fresh());
                let truth = matches!(f, Formula::True);
                self.emit(vec![Literal::new(p.clone(), truth)]);
                Literal::new(p, true)
            }
            Formula::And(v) => {
                let kids: Vec<Literal> = v.iter().map(|g| self.label(g, pol)).collect();
                let p = Literal::new(Atom::Prop(self.fresh.fresh()), true);
                if pol.pos() {
                    for k in &kids {
                        self.emit(vec![p.negated(), k.clone()]);
                    }
                }
                if pol.neg() {
                    let mut c = vec![p.clone()];
                    c.extend(kids.iter().map(Literal::negated));
                    self.emit(c);
                }
                p
            }
            Formula::Or(_) | Formula::Implies(..) => {
                let mut ds = Vec::new();
                collect_disjuncts(f, &mut ds);
                let kids: Vec<Literal> = ds.iter().map(|g| self.label(g, pol)).collect();
                let p = Literal::new(Atom::Prop(self.fresh.fresh()), true);
                if pol.pos() {
                    let mut c = vec![p.negated()];
                    c.extend(kids.iter().cloned());
                    self.emit(c);
                }
                if pol.neg() {
                    for k in &kids {
                        self.emit(vec![p.clone(), k.negated()]);
                    }
                }
                p
            }
            Formula::Iff(a, b) => {
                let la = self.label(a, Polarity::Both);
                let lb = self.label(b, Polarity::Both);
                let p = Literal::new(Atom::Prop(self.fresh.fresh()), true);
                if pol.pos() {
                    self.emit(vec![p.negated(), la.negated(), lb.clone()]);
                    self.emit(vec![p.negated(), la.clone(), lb.negated()]);
                }
                if pol.neg() {
                    self.emit(vec![p.clone(), la.clone(), lb.clone()]);
                    self.emit(vec![p.clone(), la.negated(), lb.negated()]);
                }
                p
            }
        }
    }
}

fn collect_disjuncts(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::Or(v) => v.iter().for_each(|g| collect_disjuncts(g, out)),
        Formula::Implies(a, b) => {
            collect_disjuncts(&Formula::not((**a).clone()), out);
            collect_disjuncts(b, out);
        }
        Formula::Not(g) => match g.as_ref() {
            Formula::And(v) => v.iter().for_each(|h| collect_disjuncts(&Formula::not(h.clone()), out)),
            Formula::Not(h) => collect_disjuncts(h, out),
            _ => out.push(f.clone()),
        },
        _ => out.push(f.clone()),
    }
}

/// Clause form of `phi`, equisatisfiable and linear in its size.
pub fn cnfize(phi: &Formula) -> Vec<Clause> {
    let mut c = Cnfizer::new(phi.names());
    c.add(phi);
    c.finish()
}

/// Pure formula plus the variables shared by arithmetic and uninterpreted atoms.
#[derive(Clone, Debug)]
pub struct Purified {
    pub formula: Formula,
    pub interface: BTreeSet<String>,
}

struct Purifier {
    fresh: FreshNames,
    defs: Vec<Formula>,
    memo: HashMap<Term, String>,
}

impl Purifier {
    fn name_for(&mut self, t: &Term) -> (String, bool) {
        if let Some(n) = self.memo.get(t) {
            return (n.clone(), false);
        }
        let n = self.fresh.fresh();
        self.memo.insert(t.clone(), n.clone());
        (n, true)
    }

    /// Linear form of `t`, naming every application with a fresh variable.
    fn arith(&mut self, t: &Term) -> Linear {
        match t {
            Term::Var(v) => Linear::var(v),
            Term::Const(c) => Linear::constant(c.clone()),
            Term::Sum(items, k) => {
                let mut l = Linear::constant(k.clone());
                for (c, s) in items {
                    let sl = self.arith(s);
                    l.add_scaled(&sl, c);
                }
                l
            }
            Term::App(..) => {
                let pure = self.uninterp(t);
                let (w, new) = self.name_for(&pure);
                if new {
                    self.defs.push(Formula::Atom(Atom::euf(Term::Var(w.clone()), pure)));
                }
                Linear::var(&w)
            }
        }
    }

    /// Uninterpreted term whose arguments contain no arithmetic.
    fn uninterp(&mut self, t: &Term) -> Term {
        match t {
            Term::Var(_) => t.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.uninterp(a)).collect()),
            Term::Const(_) | Term::Sum(..) => {
                let lin = self.arith(t);
                let as_term = lin.to_term();
                let (w, new) = self.name_for(&as_term);
                if new {
                    self.defs.push(Formula::lra(Linear::var(&w).minus(&lin), Cmp::Eq));
                }
                Term::Var(w)
            }
        }
    }

    fn atom(&mut self, a: &Atom) -> Formula {
        match a {
            Atom::Prop(_) | Atom::Lra(_) => Formula::Atom(a.clone()),
            Atom::Euf(l, r) => {
                if !l.has_app() && !r.has_app() && l.is_uninterpreted() && r.is_uninterpreted() {
                    return Formula::Atom(a.clone());
                }
                let pl = self.uninterp(l);
                let pr = self.uninterp(r);
                Formula::compare(pl, Cmp::Eq, pr)
            }
            Atom::Mixed(l, op, r) => {
                let ll = self.arith(l);
                let rl = self.arith(r);
                Formula::lra(ll.minus(&rl), *op)
            }
        }
    }
}

fn is_pure_euf_atom(l: &Term, r: &Term) -> bool {
    fn pure(t: &Term) -> bool {
        match t {
            Term::Var(_) => true,
            Term::App(_, args) => args.iter().all(pure),
            _ => false,
        }
    }
    pure(l) && pure(r)
}

/// Variables occurring both in an arithmetic atom and in an uninterpreted atom.
pub fn interface_vars(phi: &Formula) -> BTreeSet<String> {
    let mut lra = BTreeSet::new();
    let mut euf = BTreeSet::new();
    phi.visit_atoms(&mut |a| match a {
        Atom::Lra(l) => lra.extend(l.expr.coeffs.keys().cloned()),
        Atom::Euf(..) => euf.extend(a.vars()),
        _ => {}
    });
    lra.intersection(&euf).cloned().collect()
}

/// Replaces alien subterms by fresh variables with defining atoms conjoined.
pub fn purify(phi: &Formula) -> Purified {
    let mut p = Purifier { fresh: FreshNames::new("@w", phi.names()), defs: Vec::new(), memo: HashMap::new() };
    let needs_work = {
        let mut any = false;
        phi.visit_atoms(&mut |a| match a {
            Atom::Mixed(..) => any = true,
            Atom::Euf(l, r) if !is_pure_euf_atom(l, r) => any = true,
            _ => {}
        });
        any
    };
    let formula = if needs_work {
        let body = phi.map_atoms(&mut |a| p.atom(a));
        let mut all = vec![body];
        all.append(&mut p.defs);
        Formula::and(all)
    } else {
        phi.clone()
    };
    let interface = interface_vars(&formula);
    Purified { formula, interface }
}

/// Unordered pairs of interface variables, each oriented by name order.
pub fn interface_equalities(vars: &BTreeSet<String>) -> Vec<(String, String)> {
    let v: Vec<&String> = vars.iter().collect();
    let mut out = Vec::new();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            out.push((v[i].clone(), v[j].clone()));
        }
    }
    out
}

/// The arithmetic atom `a − b = 0` used for an interface equality.
pub fn equality_atom(a: &str, b: &str) -> LinAtom {
    let e = Linear::var(a).minus(&Linear::var(b));
    match normalize_comparison(e, Cmp::Eq) {
        Ok((atom, _)) => atom,
        Err(_) => unreachable!("distinct variables"),
    }
}

fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{}", v),
            Term::Const(c) => write!(f, "{}", fmt_rational(c)),
            Term::App(g, args) => {
                write!(f, "({}", g)?;
                for a in args {
                    write!(f, " {}", a)?;
                }
                write!(f, ")")
            }
            Term::Sum(items, k) => {
                write!(f, "(+")?;
                for (c, t) in items {
                    if c.is_one() {
                        write!(f, " {}", t)?;
                    } else {
                        write!(f, " (* {} {})", fmt_rational(c), t)?;
                    }
                }
                if !k.is_zero() {
                    write!(f, " {}", fmt_rational(k))?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Linear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_term())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Prop(p) => write!(f, "{}", p),
            Atom::Lra(a) => {
                let op = match a.rel {
                    Rel::Le => "<=",
                    Rel::Ge => ">=",
                    Rel::Eq => "=",
                };
                write!(f, "({} {} {})", op, a.expr.var_part(), fmt_rational(&a.rhs()))
            }
            Atom::Euf(l, r) => write!(f, "(= {} {})", l, r),
            Atom::Mixed(l, op, r) => write!(f, "({} {} {})", op.symbol(), l, r),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "(not {})", self.atom)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(a) => write!(f, "{}", a),
            Formula::Not(g) => write!(f, "(not {})", g),
            Formula::And(v) | Formula::Or(v) => {
                write!(f, "({}", if matches!(self, Formula::And(_)) { "and" } else { "or" })?;
                for g in v {
                    write!(f, " {}", g)?;
                }
                write!(f, ")")
            }
            Formula::Implies(a, b) => write!(f, "(=> {} {})", a, b),
            Formula::Iff(a, b) => write!(f, "(= {} {})", a, b),
        }
    }
}
