//! Seeded random instances sized for the reference solvers.

use num_traits::{Signed, Zero};
use omt_core::arith::{int, rat, DeltaRational, Rational};
use omt_core::ast::{normalize_comparison, purify, Atom, Cmp, Formula, LinAtom, Linear, Term};
use omt_core::encoders::{MaxSmtInstance, PbObjective};
use omt_core::omt::dtc::EdiAssignment;
use omt_core::omt::OmtProblem;
use rand::seq::SliceRandom;
use rand::Rng;

pub const COST: &str = "cost";

/// Mostly small integers, sometimes a fraction; numerator and denominator at most 10.
pub fn small_rat<R: Rng>(rng: &mut R) -> Rational {
    if rng.gen_bool(0.7) {
        int(rng.gen_range(-10..=10))
    } else {
        rat(rng.gen_range(-10..=10), rng.gen_range(2..=10))
    }
}

fn nonzero_rat<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let c = if rng.gen_bool(0.8) { int(rng.gen_range(-3..=3)) } else { small_rat(rng) };
        if !c.is_zero() {
            return c;
        }
    }
}

pub fn random_cmp<R: Rng>(rng: &mut R) -> Cmp {
    *[Cmp::Le, Cmp::Lt, Cmp::Ge, Cmp::Gt, Cmp::Eq, Cmp::Ne].choose(rng).unwrap()
}

/// Linear expression over one to `max_terms` distinct variables plus a constant.
pub fn random_linear<R: Rng>(rng: &mut R, vars: &[String], max_terms: usize) -> Linear {
    let k = rng.gen_range(1..=max_terms.min(vars.len()));
    let mut e = Linear::constant(small_rat(rng));
    for v in vars.choose_multiple(rng, k) {
        e.add_term(v, &nonzero_rat(rng));
    }
    e
}

fn literal<R: Rng>(rng: &mut R, f: &Formula) -> Formula {
    if rng.gen_bool(0.5) {
        f.clone()
    } else {
        Formula::not(f.clone())
    }
}

/// Random Boolean structure over a pool of atoms: clauses plus occasional
/// implications, equivalences and negated conjunctions.
fn random_body<R: Rng>(rng: &mut R, pool: &[Formula], parts: usize) -> Vec<Formula> {
    let mut out = Vec::new();
    if pool.is_empty() {
        return out;
    }
    for _ in 0..parts {
        let pick = |rng: &mut R| {
            let a = pool.choose(rng).unwrap();
            literal(rng, a)
        };
        let f = match rng.gen_range(0..10) {
            0 => Formula::iff(pick(rng), Formula::or(vec![pick(rng), pick(rng)])),
            1 => Formula::implies(Formula::and(vec![pick(rng), pick(rng)]), pick(rng)),
            2 => Formula::not(Formula::and(vec![pick(rng), pick(rng)])),
            _ => {
                let w = rng.gen_range(1..=3);
                Formula::or((0..w).map(|_| pick(rng)).collect())
            }
        };
        out.push(f);
    }
    out
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{}{}", prefix, i)).collect()
}

/// Arithmetic problem with at most 8 propositions, 4 real variables (the cost
/// included) and 12 arithmetic atoms, explicit bounds counted.
pub fn random_omt<R: Rng>(rng: &mut R) -> OmtProblem {
    let vars = names("x", rng.gen_range(1..=3));
    let mut all = vars.clone();
    all.push(COST.to_string());
    let props = names("A", rng.gen_range(0..=8));
    let mut budget: usize = 12;
    let lower = if rng.gen_bool(0.1) { Some(small_rat(rng)) } else { None };
    let mut upper = if rng.gen_bool(0.1) { Some(small_rat(rng)) } else { None };
    if let (Some(l), Some(u)) = (&lower, &upper) {
        // the range must be nonempty
        if l >= u {
            upper = Some(l + int(1));
        }
    }
    budget -= lower.is_some() as usize + upper.is_some() as usize;

    let mut parts = Vec::new();
    let anchor_op = *[Cmp::Ge, Cmp::Gt, Cmp::Eq].choose(rng).unwrap();
    let anchor = Formula::lra(Linear::var(COST).minus(&random_linear(rng, &vars, 2)), anchor_op);
    budget -= 1;
    let mut pool: Vec<Formula> = props.iter().map(|p| Formula::prop(p)).collect();
    if rng.gen_bool(0.8) || props.is_empty() {
        parts.push(anchor);
    } else {
        let other = Formula::lra(Linear::var(COST).minus(&random_linear(rng, &vars, 2)), anchor_op);
        budget -= 1;
        let a = Formula::prop(&props[0]);
        parts.push(Formula::implies(a.clone(), anchor));
        parts.push(Formula::implies(Formula::not(a), other));
    }
    if rng.gen_bool(0.4) {
        budget -= 1;
        parts.push(Formula::var_cmp(COST, Cmp::Ge, small_rat(rng)));
    }
    for v in &vars {
        for (op, chance) in [(Cmp::Ge, 0.85), (Cmp::Le, 0.4)] {
            if budget > 2 && rng.gen_bool(chance) {
                budget -= 1;
                let b = Formula::var_cmp(v, op, small_rat(rng));
                if rng.gen_bool(0.8) {
                    parts.push(b);
                } else {
                    pool.push(b);
                }
            }
        }
    }
    let extra = rng.gen_range(1..=budget.max(1));
    for _ in 0..extra {
        let f = Formula::lra(random_linear(rng, &all, 3), random_cmp(rng));
        pool.push(f);
    }
    let n = rng.gen_range(1..=5);
    parts.extend(random_body(rng, &pool, n));
    OmtProblem::new(Formula::and(parts), COST).with_bounds(lower, upper)
}

/// Combined problem whose purified form has at most three interface variables.
pub fn random_euf_omt<R: Rng>(rng: &mut R) -> OmtProblem {
    loop {
        let p = euf_candidate(rng);
        let pure = purify(&p.bounded_formula());
        if pure.interface.len() <= 3 && !pure.interface.is_empty() {
            return p;
        }
    }
}

fn euf_candidate<R: Rng>(rng: &mut R) -> OmtProblem {
    let vars = names("x", rng.gen_range(2..=3));
    let mut all = vars.clone();
    all.push(COST.to_string());
    let var = |rng: &mut R| Term::var(vars.choose(rng).unwrap());
    let app = |rng: &mut R| -> Term {
        match rng.gen_range(0..4) {
            0 => Term::app("g", vec![var(rng), var(rng)]),
            1 => Term::app("f", vec![Term::app("f", vec![var(rng)])]),
            _ => Term::app("f", vec![var(rng)]),
        }
    };
    let mut pool = Vec::new();
    for _ in 0..rng.gen_range(1..=4) {
        let l = app(rng);
        let r = if rng.gen_bool(0.5) { app(rng) } else { var(rng) };
        pool.push(Formula::compare(l, Cmp::Eq, r));
    }
    for _ in 0..rng.gen_range(1..=5) {
        pool.push(Formula::lra(random_linear(rng, &all, 2), random_cmp(rng)));
    }
    if rng.gen_bool(0.4) {
        let t = Term::app("f", vec![var(rng)]);
        pool.push(Formula::compare(t, *[Cmp::Ge, Cmp::Le, Cmp::Eq].choose(rng).unwrap(), Term::Const(small_rat(rng))));
    }
    pool.push(Formula::prop("B0"));
    let mut parts = vec![Formula::lra(Linear::var(COST).minus(&random_linear(rng, &vars, 2)), *[Cmp::Ge, Cmp::Gt, Cmp::Eq].choose(rng).unwrap())];
    for v in &vars {
        if rng.gen_bool(0.9) {
            parts.push(Formula::var_cmp(v, Cmp::Ge, int(rng.gen_range(-5..=0))));
        }
        if rng.gen_bool(0.4) {
            parts.push(Formula::var_cmp(v, Cmp::Le, int(rng.gen_range(0..=5))));
        }
    }
    let n = rng.gen_range(1..=5);
    parts.extend(random_body(rng, &pool, n));
    OmtProblem::new(Formula::and(parts), COST)
}

fn lra_literal<R: Rng>(rng: &mut R, vars: &[String], max_terms: usize, allow_diseq: bool) -> Option<(LinAtom, bool)> {
    let mut op = random_cmp(rng);
    if !allow_diseq && op == Cmp::Ne {
        op = Cmp::Eq;
    }
    normalize_comparison(random_linear(rng, vars, max_terms), op).ok()
}

/// Conjunction of arithmetic literals over `cost` and up to three more variables.
pub fn random_lp<R: Rng>(rng: &mut R, allow_diseq: bool) -> Vec<(LinAtom, bool)> {
    let mut vars = names("x", rng.gen_range(1..=3));
    let mut lits = Vec::new();
    if rng.gen_bool(0.8) {
        let def = Linear::var(COST).minus(&random_linear(rng, &vars, 3));
        lits.extend(normalize_comparison(def, *[Cmp::Eq, Cmp::Ge, Cmp::Gt].choose(rng).unwrap()).ok());
    }
    vars.push(COST.to_string());
    for _ in 0..rng.gen_range(1..=6) {
        lits.extend(lra_literal(rng, &vars, 3, allow_diseq));
    }
    lits
}

/// Assignment for the dispatch table; usually a consistent arrangement of the
/// interface pairs, occasionally a contradictory one.
pub fn random_edi<R: Rng>(rng: &mut R) -> EdiAssignment {
    let vars = names("x", 3);
    let mut with_cost = vars.clone();
    with_cost.push(COST.to_string());
    let mut mu = EdiAssignment::default();
    if rng.gen_bool(0.8) {
        mu.lra.extend(normalize_comparison(Linear::var(COST).minus(&random_linear(rng, &vars, 2)), Cmp::Ge).ok());
    }
    for v in &vars {
        if rng.gen_bool(0.7) {
            mu.lra.extend(normalize_comparison(Linear::var(v).minus(&Linear::constant(small_rat(rng))), Cmp::Ge).ok());
        }
    }
    for _ in 0..rng.gen_range(0..=3) {
        mu.lra.extend(lra_literal(rng, &with_cost, 2, true));
    }
    let term = |rng: &mut R| -> Term {
        let v = Term::var(vars.choose(rng).unwrap());
        if rng.gen_bool(0.6) {
            Term::app("f", vec![v])
        } else {
            v
        }
    };
    for _ in 0..rng.gen_range(0..=3) {
        let (l, r) = (term(rng), term(rng));
        if l != r {
            mu.euf.push((l, r, rng.gen_bool(0.5)));
        }
    }
    for i in 0..vars.len() {
        for j in i + 1..vars.len() {
            if rng.gen_bool(0.3) {
                continue;
            }
            let (a, b) = (vars[i].clone(), vars[j].clone());
            let (eq, lt, gt) = match rng.gen_range(0..3) {
                0 => (true, false, false),
                1 => (false, true, false),
                _ => (false, false, true),
            };
            if rng.gen_bool(0.1) {
                mu.eq.push((a.clone(), b.clone(), !eq));
            } else {
                mu.eq.push((a.clone(), b.clone(), eq));
            }
            mu.ineq.push((a, b, lt, gt));
        }
    }
    mu
}

/// Random `k`-variable clause list in DIMACS numbering.
pub fn random_cnf<R: Rng>(rng: &mut R, num_vars: usize) -> Vec<Vec<i32>> {
    let m = rng.gen_range(1..=5 * num_vars);
    (0..m)
        .map(|_| {
            let w = *[1, 2, 3, 3, 3, 4].choose(rng).unwrap();
            (0..w)
                .map(|_| {
                    let v = rng.gen_range(1..=num_vars as i32);
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect()
}

/// Terms over three constants, a unary `f` and a binary `g`, nested at most twice.
pub fn random_term<R: Rng>(rng: &mut R, depth: u32) -> Term {
    let leaf = |rng: &mut R| Term::var(["a", "b", "c"].choose(rng).unwrap());
    if depth == 0 || rng.gen_bool(0.4) {
        return leaf(rng);
    }
    if rng.gen_bool(0.7) {
        Term::app("f", vec![random_term(rng, depth - 1)])
    } else {
        Term::app("g", vec![random_term(rng, depth - 1), leaf(rng)])
    }
}

fn count_subterms(t: &Term, seen: &mut std::collections::BTreeSet<Term>) {
    if seen.insert(t.clone()) {
        if let Term::App(_, args) = t {
            args.iter().for_each(|a| count_subterms(a, seen));
        }
    }
}

/// Conjunction of term (dis)equalities with at most nine distinct subterms.
pub fn random_euf_literals<R: Rng>(rng: &mut R) -> Vec<(Term, Term, bool)> {
    let n = rng.gen_range(1..=5);
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    while out.len() < n {
        let (l, r) = (random_term(rng, 2), random_term(rng, 2));
        let mut grown = seen.clone();
        count_subterms(&l, &mut grown);
        count_subterms(&r, &mut grown);
        if l != r && grown.len() <= 9 {
            seen = grown;
            out.push((l, r, rng.gen_bool(0.65)));
        }
    }
    out
}

pub fn euf_literal(l: &Term, r: &Term, positive: bool) -> Formula {
    Formula::literal(Atom::euf(l.clone(), r.clone()), positive)
}

/// Small formula over term equalities and two propositions.
pub fn random_euf_formula<R: Rng>(rng: &mut R) -> Formula {
    let mut pool = vec![Formula::prop("P"), Formula::prop("Q")];
    for _ in 0..rng.gen_range(2..=4) {
        let (l, r) = (random_term(rng, 1), random_term(rng, 1));
        if l != r {
            pool.push(euf_literal(&l, &r, true));
        }
    }
    let n = rng.gen_range(1..=5);
    Formula::and(random_body(rng, &pool, n))
}

fn random_prop_cnf<R: Rng>(rng: &mut R, props: &[String], clauses: usize, width: usize) -> Formula {
    Formula::and(
        (0..clauses)
            .map(|_| {
                let w = rng.gen_range(1..=width);
                Formula::or(
                    (0..w)
                        .map(|_| {
                            let p = Formula::prop(props.choose(rng).unwrap());
                            literal(rng, &p)
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

/// Weighted sum over at most six propositions with a random clause constraint.
pub fn random_pb<R: Rng>(rng: &mut R, positive: bool) -> PbObjective {
    let props = names("X", rng.gen_range(1..=6));
    let terms = props
        .iter()
        .map(|p| {
            let w = loop {
                let w = small_rat(rng);
                if !w.is_zero() {
                    break w;
                }
            };
            (p.clone(), if positive && w < Rational::zero() { -w } else { w })
        })
        .collect();
    let n = rng.gen_range(0..=5);
    PbObjective { terms, constraint: random_prop_cnf(rng, &props, n, 3) }
}

/// Hard clauses plus at most five weighted soft clauses over at most five propositions.
pub fn random_maxsmt<R: Rng>(rng: &mut R) -> MaxSmtInstance {
    let props = names("A", rng.gen_range(1..=5));
    let n = rng.gen_range(0..=3);
    let hard = random_prop_cnf(rng, &props, n, 3);
    let soft = (0..rng.gen_range(1..=5))
        .map(|_| {
            let w = loop {
                let w = small_rat(rng).abs();
                if !w.is_zero() {
                    break w;
                }
            };
            (random_prop_cnf(rng, &props, 1, 2), w)
        })
        .collect();
    MaxSmtInstance { hard, soft }
}

/// Random problem conjoined with a contradiction of one of several kinds.
pub fn unsat_instance<R: Rng>(rng: &mut R) -> OmtProblem {
    let base = random_omt(rng);
    let c = small_rat(rng);
    let clash = match rng.gen_range(0..4) {
        0 => Formula::and(vec![Formula::var_cmp("x0", Cmp::Gt, c.clone()), Formula::var_cmp("x0", Cmp::Lt, c)]),
        1 => {
            let lt = |a: &str, b: &str| Formula::lra(Linear::var(a).minus(&Linear::var(b)), Cmp::Lt);
            Formula::and(vec![lt("x0", "u1"), lt("u1", "u2"), lt("u2", "x0")])
        }
        2 => {
            let a = Formula::prop("Z");
            Formula::and(vec![Formula::or(vec![a.clone(), Formula::var_cmp(COST, Cmp::Le, c.clone())]), Formula::not(a), Formula::var_cmp(COST, Cmp::Gt, c)])
        }
        _ => Formula::and(vec![Formula::var_cmp(COST, Cmp::Eq, c.clone()), Formula::var_cmp(COST, Cmp::Ne, c)]),
    };
    OmtProblem { formula: Formula::and(vec![base.formula, clash]), ..base }
}

/// Satisfiable side constraints that never bound the cost from below.
pub fn unbounded_instance<R: Rng>(rng: &mut R) -> OmtProblem {
    let vars = names("y", rng.gen_range(1..=3));
    let mut parts = Vec::new();
    // the cost follows a free variable downwards
    let free = "d0";
    let mut def = Linear::var(COST);
    def.add_term(free, &int(-rng.gen_range(1..=3)));
    def.constant = small_rat(rng);
    parts.push(Formula::lra(def, *[Cmp::Le, Cmp::Lt, Cmp::Eq].choose(rng).unwrap()));
    if rng.gen_bool(0.5) {
        parts.push(Formula::var_cmp(free, Cmp::Le, small_rat(rng)));
    }
    let mut pool = vec![Formula::prop("A0"), Formula::prop("A1")];
    for v in &vars {
        pool.push(Formula::var_cmp(v, *[Cmp::Le, Cmp::Ge, Cmp::Lt, Cmp::Gt].choose(rng).unwrap(), small_rat(rng)));
    }
    if vars.len() > 1 {
        pool.push(Formula::lra(random_linear(rng, &vars, 2), Cmp::Le));
    }
    let n = rng.gen_range(1..=3);
    for f in random_body(rng, &pool, n) {
        // keep each clause satisfiable by a fresh escape proposition
        parts.push(Formula::or(vec![f, Formula::prop("ESC")]));
    }
    OmtProblem::new(Formula::and(parts), COST)
}

/// Random finite set of values for concretization checks.
pub fn random_delta_set<R: Rng>(rng: &mut R) -> Vec<DeltaRational> {
    (0..rng.gen_range(2..=10))
        .map(|_| {
            let delta = match rng.gen_range(0..3) {
                0 => Rational::zero(),
                1 => int(rng.gen_range(-3..=3)),
                _ => small_rat(rng),
            };
            DeltaRational::new(small_rat(rng), delta)
        })
        .collect()
}
