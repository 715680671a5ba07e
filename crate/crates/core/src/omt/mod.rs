//! Optimization drivers over the lazy SMT engine.
//!
//! Both schemas repeatedly find a satisfying assignment, minimize the cost over
//! its arithmetic part and learn a unit that excludes every cost at or above the
//! best value found. The offline schema restarts the search through the public
//! incremental interface; the inline schema does the minimization inside the
//! CDCL loop and keeps going.

pub mod certify;
pub mod dtc;
pub mod smt;

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{rat, DeltaRational, Rational};
use crate::ast::{Atom, Cmp, Formula, Term};
use crate::lra::MinResult;
use crate::sat::{HookAction, Lit, SatSolver, SolveResult};

use smt::{Bridge, ModelHook, Smt, SmtOptions};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OmtError {
    #[error("invalid problem: {0}")]
    Invalid(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("result is not an optimum")]
    NotOptimum,
}

/// Minimize `cost` subject to `formula`, optionally within `[lower, upper[`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmtProblem {
    pub formula: Formula,
    pub cost: String,
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl OmtProblem {
    pub fn new(formula: Formula, cost: &str) -> OmtProblem {
        OmtProblem { formula, cost: cost.to_string(), lower: None, upper: None }
    }

    pub fn with_bounds(mut self, lower: Option<Rational>, upper: Option<Rational>) -> OmtProblem {
        self.lower = lower;
        self.upper = upper;
        self
    }

    pub fn validate(&self) -> Result<(), OmtError> {
        let mut bad = None;
        self.formula.visit_atoms(&mut |a| {
            if let Atom::Prop(p) = a {
                if *p == self.cost {
                    bad = Some(format!("cost `{}` is used as a proposition", p));
                }
            }
        });
        if let Some(msg) = bad {
            return Err(OmtError::Invalid(msg));
        }
        if let (Some(l), Some(u)) = (&self.lower, &self.upper) {
            if l >= u {
                return Err(OmtError::Invalid(format!("empty range [{}, {}[", l, u)));
            }
        }
        Ok(())
    }

    /// The formula with the range conjoined: `cost ≥ lower` and `cost < upper`.
    pub fn bounded_formula(&self) -> Formula {
        let mut parts = vec![self.formula.clone()];
        if let Some(l) = &self.lower {
            parts.push(Formula::var_cmp(&self.cost, Cmp::Ge, l.clone()));
        }
        if let Some(u) = &self.upper {
            parts.push(Formula::var_cmp(&self.cost, Cmp::Lt, u.clone()));
        }
        Formula::and(parts)
    }
}

/// A value extended with both infinities; variant order gives the numeric order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Ext {
    NegInf,
    Finite(DeltaRational),
    PosInf,
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::NegInf => write!(f, "-inf"),
            Ext::PosInf => write!(f, "+inf"),
            Ext::Finite(d) => write!(f, "{}", d),
        }
    }
}

/// Values for real variables and propositions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    pub reals: BTreeMap<String, Rational>,
    pub bools: BTreeMap<String, bool>,
}

impl Model {
    pub fn real(&self, name: &str) -> Rational {
        self.reals.get(name).cloned().unwrap_or_else(Rational::zero)
    }

    /// Truth value of a formula without uninterpreted atoms; `None` otherwise.
    /// Absent variables read as zero and absent propositions as false.
    pub fn eval(&self, phi: &Formula) -> Option<bool> {
        let mut pure = true;
        phi.visit_atoms(&mut |a| pure &= matches!(a, Atom::Prop(_) | Atom::Lra(_)));
        if !pure {
            return None;
        }
        let lookup = |a: &Atom| match a {
            Atom::Prop(p) => self.bools.get(p).copied().unwrap_or(false),
            Atom::Lra(l) => {
                let mut vals = self.reals.clone();
                for v in l.expr.coeffs.keys() {
                    vals.entry(v.clone()).or_insert_with(Rational::zero);
                }
                l.holds(&vals).unwrap()
            }
            _ => unreachable!(),
        };
        Some(phi.eval(&lookup))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Schema {
    Offline,
    Inline,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Linear,
    Binary,
    Adaptive,
}

#[derive(Clone, Debug)]
pub struct OmtConfig {
    pub schema: Schema,
    pub strategy: Strategy,
    pub seed: Option<u64>,
    pub timeout: Option<Duration>,
    pub smt: SmtOptions,
}

impl OmtConfig {
    pub fn new(schema: Schema, strategy: Strategy) -> OmtConfig {
        OmtConfig { schema, strategy, seed: None, timeout: None, smt: SmtOptions::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// `value.delta > 0` marks a strict infimum, normalized to delta one.
    Optimum { value: DeltaRational, model: Model },
    Unsat,
    Unbounded { model: Model },
    Timeout { best: Option<(DeltaRational, Model)> },
}

impl Outcome {
    pub fn value(&self) -> Option<&DeltaRational> {
        match self {
            Outcome::Optimum { value, .. } => Some(value),
            _ => None,
        }
    }

    /// The optimum as an extended value; `None` on timeout.
    pub fn ext(&self) -> Option<Ext> {
        match self {
            Outcome::Optimum { value, .. } => Some(Ext::Finite(value.clone())),
            Outcome::Unsat => Some(Ext::PosInf),
            Outcome::Unbounded { .. } => Some(Ext::NegInf),
            Outcome::Timeout { .. } => None,
        }
    }

    pub fn is_strict(&self) -> bool {
        self.value().map_or(false, |v| v.delta.is_positive())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OmtStats {
    pub smt_calls: u64,
    pub minimize_calls: u64,
    pub conflicts: u64,
    pub decisions: u64,
    pub linear_steps: u64,
    pub binary_steps: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmtResult {
    pub outcome: Outcome,
    pub stats: OmtStats,
    pub lower: Ext,
    pub upper: Ext,
    /// The cost variable is shared with uninterpreted atoms.
    pub cost_is_interface: bool,
    /// Range `[lower, upper[` after every iteration.
    pub trace: Vec<(Ext, Ext)>,
}

/// Next search step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// Solve under the assumption `cost < pivot`.
    Pivot(Rational),
    Linear,
}

/// Midpoint of the real parts, when it lies strictly inside `]lb, ub[`.
pub fn pick_pivot(lb: &Ext, ub: &Ext) -> Step {
    match (lb, ub) {
        (Ext::Finite(l), Ext::Finite(u)) => {
            let p = (&l.real + &u.real) / Rational::from_integer(2.into());
            let dp = DeltaRational::from_rational(p.clone());
            if *l < dp && dp < *u {
                Step::Pivot(p)
            } else {
                Step::Linear
            }
        }
        _ => Step::Linear,
    }
}

/// Collapses any positive infinitesimal part to one.
pub fn normalize_strict(v: DeltaRational) -> DeltaRational {
    if v.delta.is_positive() {
        DeltaRational::new(v.real, Rational::one())
    } else {
        v
    }
}

/// Bound state and strategy bookkeeping shared by both schemas.
struct Search {
    strategy: Strategy,
    cost: String,
    lb: Ext,
    ub: Ext,
    best: Option<(DeltaRational, Model)>,
    unbounded: Option<Model>,
    binary_mode: bool,
    slow: u32,
    force_linear: bool,
    pivot: Option<(Rational, Lit)>,
    stats: OmtStats,
    trace: Vec<(Ext, Ext)>,
}

impl Search {
    fn new(strategy: Strategy, cost: &str, lower: Option<&Rational>) -> Search {
        Search {
            strategy,
            cost: cost.to_string(),
            lb: lower.map_or(Ext::NegInf, |l| Ext::Finite(DeltaRational::from_rational(l.clone()))),
            ub: Ext::PosInf,
            best: None,
            unbounded: None,
            binary_mode: false,
            slow: 0,
            force_linear: false,
            pivot: None,
            stats: OmtStats::default(),
            trace: Vec::new(),
        }
    }

    fn next_step(&mut self) -> Step {
        if self.force_linear {
            self.force_linear = false;
            self.stats.linear_steps += 1;
            return Step::Linear;
        }
        let binary = match self.strategy {
            Strategy::Linear => false,
            Strategy::Binary => true,
            Strategy::Adaptive => self.binary_mode,
        };
        let step = if binary { pick_pivot(&self.lb, &self.ub) } else { Step::Linear };
        match step {
            Step::Linear => self.stats.linear_steps += 1,
            Step::Pivot(_) => self.stats.binary_steps += 1,
        }
        step
    }

    /// Assumptions for the next solve.
    fn assumptions(&mut self, bridge: &mut Bridge) -> Vec<Lit> {
        match self.next_step() {
            Step::Linear => {
                self.pivot = None;
                Vec::new()
            }
            Step::Pivot(p) => {
                let lit = bridge.cost_lit(Cmp::Lt, &p);
                self.pivot = Some((p, lit));
                vec![lit]
            }
        }
    }

    fn record_minimum(&mut self, m: DeltaRational, model: Model) {
        let m = normalize_strict(m);
        debug_assert!(Ext::Finite(m.clone()) < self.ub, "cost did not decrease");
        if self.strategy == Strategy::Adaptive {
            if let (Ext::Finite(l), Ext::Finite(u)) = (&self.lb, &self.ub) {
                let span = &u.real - &l.real;
                if span.is_positive() {
                    let progress = (&u.real - &m.real) / span;
                    if progress < rat(1, 10) {
                        self.slow += 1;
                        if self.slow >= 2 {
                            self.binary_mode = true;
                        }
                    } else {
                        self.slow = 0;
                    }
                }
            }
        }
        self.ub = Ext::Finite(m.clone());
        self.best = Some((m, model));
        self.trace.push((self.lb.clone(), self.ub.clone()));
    }

    fn pivot_failed(&mut self) {
        if let Some((p, _)) = self.pivot.take() {
            let lb = Ext::Finite(DeltaRational::from_rational(p));
            if lb > self.lb {
                self.lb = lb;
            }
        }
        self.force_linear = true;
        self.binary_mode = false;
        self.slow = 0;
        self.trace.push((self.lb.clone(), self.ub.clone()));
    }

    /// Unit excluding every cost at or above the best value.
    fn bound_lit(&self, bridge: &mut Bridge) -> Lit {
        let (m, _) = self.best.as_ref().unwrap();
        if m.delta.is_positive() {
            bridge.cost_lit(Cmp::Le, &m.real)
        } else {
            bridge.cost_lit(Cmp::Lt, &m.real)
        }
    }

    fn pivot_in(&self, core: &[Lit]) -> bool {
        matches!(&self.pivot, Some((_, l)) if core.contains(l))
    }

    /// Minimizes over the current assignment; `false` when unbounded.
    fn minimize(&mut self, bridge: &mut Bridge, solver: &SatSolver) -> bool {
        self.stats.minimize_calls += 1;
        match bridge.lra.minimize(&self.cost).expect("minimize after a consistent check") {
            MinResult::Unbounded => {
                self.unbounded = Some(bridge.build_model(solver));
                false
            }
            MinResult::Minimum { value, .. } => {
                let model = bridge.build_model(solver);
                self.record_minimum(value, model);
                true
            }
        }
    }

    fn finish(mut self, smt: &Smt, timed_out: bool, start: Instant) -> OmtResult {
        let st = smt.sat.stats();
        self.stats.conflicts = st.conflicts;
        self.stats.decisions = st.decisions;
        self.stats.elapsed = start.elapsed();
        let cost_is_interface = smt.interface.contains(&self.cost);
        let (outcome, lower, upper) = if let Some(model) = self.unbounded {
            (Outcome::Unbounded { model }, Ext::NegInf, Ext::NegInf)
        } else if timed_out {
            (Outcome::Timeout { best: self.best }, self.lb, self.ub)
        } else if let Some((value, model)) = self.best {
            let v = Ext::Finite(value.clone());
            (Outcome::Optimum { value, model }, v.clone(), v)
        } else {
            (Outcome::Unsat, Ext::PosInf, Ext::PosInf)
        };
        OmtResult { outcome, stats: self.stats, lower, upper, cost_is_interface, trace: self.trace }
    }
}

struct InlineHook {
    search: Rc<RefCell<Search>>,
}

impl ModelHook for InlineHook {
    fn on_model(&mut self, bridge: &mut Bridge, solver: &SatSolver) -> HookAction {
        let mut s = self.search.borrow_mut();
        if !s.minimize(bridge, solver) {
            return HookAction::Stop;
        }
        let unit = s.bound_lit(bridge);
        let assumptions = s.assumptions(bridge);
        HookAction::Learn { clauses: vec![vec![unit]], assumptions: Some(assumptions) }
    }

    fn assumptions_failed(&mut self, bridge: &mut Bridge, core: &[Lit]) -> Option<Vec<Lit>> {
        let mut s = self.search.borrow_mut();
        if !s.pivot_in(core) {
            return None;
        }
        s.pivot_failed();
        Some(s.assumptions(bridge))
    }
}

fn setup(p: &OmtProblem, cfg: &OmtConfig) -> Result<(Smt, Search, Instant), OmtError> {
    p.validate()?;
    if cfg.schema == Schema::Offline && cfg.strategy == Strategy::Adaptive {
        return Err(OmtError::Unsupported("the adaptive strategy is only available inline".into()));
    }
    let start = Instant::now();
    let mut smt = Smt::build(&p.bounded_formula(), Some(&p.cost), cfg.smt)?;
    smt.sat.ensure_vars(smt.bridge.num_vars());
    if let Some(seed) = cfg.seed {
        smt.sat.randomize_activity(seed);
    }
    smt.sat.set_deadline(cfg.timeout.map(|t| start + t));
    let search = Search::new(cfg.strategy, &p.cost, p.lower.as_ref());
    Ok((smt, search, start))
}

fn run_offline(p: &OmtProblem, cfg: &OmtConfig) -> Result<OmtResult, OmtError> {
    let (mut smt, mut search, start) = setup(p, cfg)?;
    let mut timed_out = false;
    loop {
        let assumptions = search.assumptions(&mut smt.bridge);
        search.stats.smt_calls += 1;
        match smt.solve(&assumptions) {
            SolveResult::Sat => {
                if !search.minimize(&mut smt.bridge, &smt.sat) {
                    break;
                }
                let unit = search.bound_lit(&mut smt.bridge);
                smt.sat.add_clause(&[unit]);
            }
            SolveResult::Unsat(core) => {
                if search.pivot_in(&core) {
                    search.pivot_failed();
                } else {
                    break;
                }
            }
            SolveResult::Unknown | SolveResult::Stopped => {
                timed_out = true;
                break;
            }
        }
    }
    Ok(search.finish(&smt, timed_out, start))
}

fn run_inline(p: &OmtProblem, cfg: &OmtConfig) -> Result<OmtResult, OmtError> {
    let (mut smt, search, start) = setup(p, cfg)?;
    let search = Rc::new(RefCell::new(search));
    smt.bridge.hook = Some(Box::new(InlineHook { search: search.clone() }));
    let assumptions = search.borrow_mut().assumptions(&mut smt.bridge);
    search.borrow_mut().stats.smt_calls += 1;
    let res = smt.solve(&assumptions);
    smt.bridge.hook = None;
    let timed_out = match res {
        SolveResult::Unknown => true,
        SolveResult::Stopped => search.borrow().unbounded.is_none(),
        SolveResult::Unsat(_) => false,
        SolveResult::Sat => unreachable!("the inline hook never accepts a model"),
    };
    let search = Rc::try_unwrap(search).ok().expect("hook released").into_inner();
    Ok(search.finish(&smt, timed_out, start))
}

/// Minimizes `p.cost` subject to `p.formula` with the chosen schema and strategy.
/// Problems with uninterpreted atoms go through delayed theory combination.
pub fn optimize(p: &OmtProblem, cfg: &OmtConfig) -> Result<OmtResult, OmtError> {
    match cfg.schema {
        Schema::Offline => run_offline(p, cfg),
        Schema::Inline => run_inline(p, cfg),
    }
}

pub fn omt_offline(p: &OmtProblem, strategy: Strategy) -> Result<OmtResult, OmtError> {
    optimize(p, &OmtConfig::new(Schema::Offline, strategy))
}

pub fn omt_inline(p: &OmtProblem, strategy: Strategy) -> Result<OmtResult, OmtError> {
    optimize(p, &OmtConfig::new(Schema::Inline, strategy))
}

/// Inline optimization of a problem mixing arithmetic and uninterpreted functions.
pub fn omt_dtc(p: &OmtProblem, strategy: Strategy) -> Result<OmtResult, OmtError> {
    omt_inline(p, strategy)
}

/// Outcome of a plain satisfiability check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmtOutcome {
    Sat(Model),
    Unsat,
    Unknown,
}

pub fn smt_check(phi: &Formula) -> Result<SmtOutcome, OmtError> {
    let mut smt = Smt::build(phi, None, SmtOptions::default())?;
    Ok(match smt.solve(&[]) {
        SolveResult::Sat => SmtOutcome::Sat(smt.model()),
        SolveResult::Unsat(_) => SmtOutcome::Unsat,
        _ => SmtOutcome::Unknown,
    })
}

/// Whether `t` mentions an uninterpreted application.
pub fn has_uninterpreted(phi: &Formula) -> bool {
    fn term_has_app(t: &Term) -> bool {
        match t {
            Term::App(..) => true,
            Term::Sum(items, _) => items.iter().any(|(_, s)| term_has_app(s)),
            _ => false,
        }
    }
    let mut any = false;
    phi.visit_atoms(&mut |a| match a {
        Atom::Euf(..) => any = true,
        Atom::Mixed(l, _, r) => any |= term_has_app(l) || term_has_app(r),
        _ => {}
    });
    any
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::ast::Linear;

    fn ge(v: &str, c: i64) -> Formula {
        Formula::var_cmp(v, Cmp::Ge, int(c))
    }

    fn le(v: &str, c: i64) -> Formula {
        Formula::var_cmp(v, Cmp::Le, int(c))
    }

    fn all_configs() -> Vec<OmtConfig> {
        vec![
            OmtConfig::new(Schema::Offline, Strategy::Linear),
            OmtConfig::new(Schema::Offline, Strategy::Binary),
            OmtConfig::new(Schema::Inline, Strategy::Linear),
            OmtConfig::new(Schema::Inline, Strategy::Binary),
            OmtConfig::new(Schema::Inline, Strategy::Adaptive),
        ]
    }

    #[test]
    fn driver_examples() {
        let cost_eq_x = Formula::lra(Linear::var("cost").minus(&Linear::var("x")), Cmp::Eq);
        let phi = Formula::and(vec![cost_eq_x, ge("x", 1), Formula::or(vec![ge("x", 5), le("x", 2)])]);
        for cfg in all_configs() {
            let p = OmtProblem::new(phi.clone(), "cost");
            let r = optimize(&p, &cfg).unwrap();
            assert_eq!(r.outcome.value(), Some(&DeltaRational::from_rational(int(1))), "{:?}", cfg);

            let p = OmtProblem::new(Formula::and(vec![ge("cost", 1), le("cost", 0)]), "cost");
            assert_eq!(optimize(&p, &cfg).unwrap().outcome, Outcome::Unsat);

            let p = OmtProblem::new(le("cost", 0), "cost");
            assert!(matches!(optimize(&p, &cfg).unwrap().outcome, Outcome::Unbounded { .. }));

            let strict = Formula::and(vec![Formula::var_cmp("cost", Cmp::Gt, int(2)), le("cost", 3)]);
            let r = optimize(&OmtProblem::new(strict, "cost"), &cfg).unwrap();
            assert_eq!(r.outcome.value(), Some(&DeltaRational::new(int(2), int(1))));
            assert!(r.outcome.is_strict());
        }
    }

    #[test]
    fn pivot_examples() {
        let f = |r: i64, d: i64| Ext::Finite(DeltaRational::new(int(r), int(d)));
        assert_eq!(pick_pivot(&f(0, 0), &f(10, 0)), Step::Pivot(int(5)));
        assert_eq!(pick_pivot(&Ext::NegInf, &f(4, 0)), Step::Linear);
        assert_eq!(pick_pivot(&f(1, 0), &f(1, 1)), Step::Linear);
    }

    #[test]
    fn offline_adaptive_rejected() {
        let p = OmtProblem::new(ge("cost", 0), "cost");
        assert!(matches!(optimize(&p, &OmtConfig::new(Schema::Offline, Strategy::Adaptive)), Err(OmtError::Unsupported(_))));
    }
}
