//! Incremental CDCL solver: two watched literals, first-UIP learning, VSIDS,
//! phase saving, Luby restarts, push/pop frames, assumptions and a theory hook.

use std::fmt;
use std::ops::Not;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Literal encoded as `2·var + sign` (sign 1 for negative).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit(var.0 * 2 + u32::from(!positive))
    }

    pub fn pos(var: u32) -> Lit {
        Lit::new(Var(var), true)
    }

    pub fn neg(var: u32) -> Lit {
        Lit::new(Var(var), false)
    }

    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// DIMACS integer (1-based, negative for negated).
    pub fn from_dimacs(i: i64) -> Lit {
        assert!(i != 0);
        Lit::new(Var((i.unsigned_abs() - 1) as u32), i > 0)
    }

    pub fn to_dimacs(self) -> i64 {
        let v = i64::from(self.var().0) + 1;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LBool {
    True,
    False,
    Undef,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reason {
    Decision,
    Clause(usize),
    Theory,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrailEntry {
    pub lit: Lit,
    pub level: u32,
    pub reason: Reason,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SatError {
    #[error("pop called with no open frame")]
    PopEmpty,
    #[error("dimacs line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
}

/// What a theory listener wants the engine to do next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HookAction {
    Continue,
    /// Clause whose literals are all false on the trail.
    Conflict(Vec<Lit>),
    /// Implied literals; explanations are fetched lazily through `Theory::explain`.
    Propagate(Vec<Lit>),
    /// Permanent clauses added at level 0, optionally replacing the assumptions.
    Learn { clauses: Vec<Vec<Lit>>, assumptions: Option<Vec<Lit>> },
    /// Abandon the search.
    Stop,
}

/// Callbacks from the engine. `check` runs after each propagation fixpoint and
/// before each decision.
pub trait Theory {
    fn check(&mut self, solver: &SatSolver, complete: bool) -> HookAction;
    /// True literals on the trail that imply `lit`.
    fn explain(&mut self, lit: Lit) -> Vec<Lit>;
    /// The trail was cut back to `trail_len` entries, ending at decision level `level`.
    fn backtrack(&mut self, level: u32, trail_len: usize);
    /// Assumptions `core` cannot hold together; `Some` continues with new assumptions.
    fn assumptions_failed(&mut self, _core: &[Lit]) -> Option<Vec<Lit>> {
        None
    }
}

/// Listener that accepts everything.
pub struct NoTheory;

impl Theory for NoTheory {
    fn check(&mut self, _: &SatSolver, _: bool) -> HookAction {
        HookAction::Continue
    }
    fn explain(&mut self, _: Lit) -> Vec<Lit> {
        Vec::new()
    }
    fn backtrack(&mut self, _: u32, _: usize) {}
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveResult {
    Sat,
    /// Subset of the assumptions that is unsatisfiable with the clauses.
    Unsat(Vec<Lit>),
    /// The deadline passed.
    Unknown,
    /// The theory asked to stop.
    Stopped,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SatStats {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub learned: u64,
    pub deleted: u64,
}

#[derive(Clone, Debug)]
struct ClauseData {
    lits: Vec<Lit>,
    learned: bool,
    lbd: u32,
    activity: f64,
    /// Frame of an original clause; for learned clauses the deepest frame used.
    frame: u32,
    deleted: bool,
}

const VAR_DECAY: f64 = 0.95;
const CLAUSE_DECAY: f64 = 0.999;
const RESTART_BASE: u64 = 100;
const REDUCE_INTERVAL: u64 = 2000;
const KEEP_LBD: u32 = 3;

pub struct SatSolver {
    clauses: Vec<ClauseData>,
    watches: Vec<Vec<usize>>,
    assigns: Vec<LBool>,
    level: Vec<u32>,
    reason: Vec<Reason>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    phase: Vec<bool>,
    seen: Vec<bool>,
    level0_tag: Vec<u32>,
    units: Vec<usize>,
    frame_depth: u32,
    /// Set when the clauses are unsatisfiable at level 0; holds the deepest frame used.
    inconsistent: Option<u32>,
    assumptions: Vec<Lit>,
    deadline: Option<Instant>,
    stats: SatStats,
    since_reduce: u64,
    /// Trail length the theory last saw, when the trail was cut without telling it.
    unsynced: Option<usize>,
}

impl Default for SatSolver {
    fn default() -> Self {
        Self::new()
    }
}

fn luby(mut x: u64) -> u64 {
    // Luby sequence 1,1,2,1,1,2,4,...; x is zero-based
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    1u64 << seq
}

impl SatSolver {
    pub fn new() -> SatSolver {
        SatSolver {
            clauses: Vec::new(),
            watches: Vec::new(),
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            cla_inc: 1.0,
            phase: Vec::new(),
            seen: Vec::new(),
            level0_tag: Vec::new(),
            units: Vec::new(),
            frame_depth: 0,
            inconsistent: None,
            assumptions: Vec::new(),
            deadline: None,
            stats: SatStats::default(),
            since_reduce: 0,
            unsynced: None,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.assigns.len()
    }

    pub fn new_var(&mut self) -> Var {
        let v = Var(self.assigns.len() as u32);
        self.assigns.push(LBool::Undef);
        self.level.push(0);
        self.reason.push(Reason::Decision);
        self.activity.push(0.0);
        self.phase.push(false);
        self.seen.push(false);
        self.level0_tag.push(0);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        v
    }

    pub fn ensure_vars(&mut self, n: usize) {
        while self.num_vars() < n {
            self.new_var();
        }
    }

    /// Gives each variable a small seeded initial activity.
    pub fn randomize_activity(&mut self, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for a in self.activity.iter_mut() {
            *a += rng.gen_range(0.0..1e-3);
        }
    }

    pub fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.deadline = deadline;
    }

    pub fn stats(&self) -> SatStats {
        self.stats
    }

    pub fn value(&self, lit: Lit) -> LBool {
        match self.assigns[lit.var().index()] {
            LBool::Undef => LBool::Undef,
            LBool::True => {
                if lit.is_positive() {
                    LBool::True
                } else {
                    LBool::False
                }
            }
            LBool::False => {
                if lit.is_positive() {
                    LBool::False
                } else {
                    LBool::True
                }
            }
        }
    }

    pub fn var_value(&self, v: Var) -> LBool {
        self.assigns[v.index()]
    }

    pub fn level_of(&self, v: Var) -> u32 {
        self.level[v.index()]
    }

    pub fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    pub fn trail(&self) -> &[Lit] {
        &self.trail
    }

    pub fn trail_entries(&self) -> Vec<TrailEntry> {
        self.trail
            .iter()
            .map(|&l| TrailEntry { lit: l, level: self.level[l.var().index()], reason: self.reason[l.var().index()] })
            .collect()
    }

    /// Truth values of all variables; unassigned ones read as false.
    pub fn model(&self) -> Vec<bool> {
        self.assigns.iter().map(|a| *a == LBool::True).collect()
    }

    pub fn frame_depth(&self) -> u32 {
        self.frame_depth
    }

    /// Opens a new clause frame.
    pub fn push(&mut self) -> u32 {
        self.frame_depth += 1;
        self.frame_depth
    }

    /// Opens a frame holding `clauses`.
    pub fn push_clauses(&mut self, clauses: &[Vec<Lit>]) -> u32 {
        let f = self.push();
        for c in clauses {
            self.add_clause(c);
        }
        f
    }

    /// Drops the newest frame together with every learned clause that used it.
    pub fn pop(&mut self) -> Result<(), SatError> {
        if self.frame_depth == 0 {
            return Err(SatError::PopEmpty);
        }
        let top = self.frame_depth;
        for c in self.clauses.iter_mut() {
            if !c.deleted && c.frame >= top && (c.learned || c.frame == top) {
                c.deleted = true;
            }
        }
        self.frame_depth -= 1;
        if matches!(self.inconsistent, Some(t) if t >= top) {
            self.inconsistent = None;
        }
        self.units.retain(|&ci| !self.clauses[ci].deleted);
        self.reset_trail();
        Ok(())
    }

    fn mark_unsynced(&mut self) {
        let len = self.trail.len();
        self.unsynced = Some(self.unsynced.map_or(len, |u| u.min(len)));
    }

    fn reset_trail(&mut self) {
        for &l in &self.trail {
            let v = l.var().index();
            self.assigns[v] = LBool::Undef;
            self.level0_tag[v] = 0;
        }
        self.trail.clear();
        self.trail_lim.clear();
        self.qhead = 0;
        self.mark_unsynced();
        let units = self.units.clone();
        for ci in units {
            let l = self.clauses[ci].lits[0];
            match self.value(l) {
                LBool::Undef => self.enqueue(l, Reason::Clause(ci)),
                LBool::False => {
                    let t = self.clauses[ci].frame.max(self.level0_tag[l.var().index()]);
                    self.inconsistent = Some(self.inconsistent.map_or(t, |o| o.max(t)));
                }
                LBool::True => {}
            }
        }
    }

    /// Adds a clause to the current frame. Must be called between searches.
    pub fn add_clause(&mut self, lits: &[Lit]) {
        let frame = self.frame_depth;
        self.add_clause_tagged(lits, frame, false);
    }

    fn add_clause_tagged(&mut self, lits: &[Lit], frame: u32, learned: bool) -> Option<usize> {
        if self.decision_level() > 0 {
            self.cancel_until(0);
            self.mark_unsynced();
        }
        let mut c: Vec<Lit> = Vec::with_capacity(lits.len());
        for &l in lits {
            self.ensure_vars(l.var().index() + 1);
            if c.contains(&!l) {
                return None;
            }
            if !c.contains(&l) {
                c.push(l);
            }
        }
        if c.is_empty() {
            self.inconsistent = Some(self.inconsistent.map_or(frame, |o| o.max(frame)));
            return None;
        }
        // non-false literals first
        c.sort_by_key(|&l| match self.value(l) {
            LBool::True => 0,
            LBool::Undef => 1,
            LBool::False => 2,
        });
        let ci = self.clauses.len();
        self.clauses.push(ClauseData { lits: c.clone(), learned, lbd: 0, activity: 0.0, frame, deleted: false });
        if c.len() == 1 {
            self.units.push(ci);
        } else {
            self.watches[c[0].index()].push(ci);
            self.watches[c[1].index()].push(ci);
        }
        match (self.value(c[0]), c.get(1).map(|&l| self.value(l))) {
            (LBool::False, _) => {
                let t = c.iter().map(|l| self.level0_tag[l.var().index()]).max().unwrap_or(0).max(frame);
                self.inconsistent = Some(self.inconsistent.map_or(t, |o| o.max(t)));
            }
            (LBool::Undef, None) | (LBool::Undef, Some(LBool::False)) => self.enqueue(c[0], Reason::Clause(ci)),
            _ => {}
        }
        Some(ci)
    }

    fn enqueue(&mut self, lit: Lit, reason: Reason) {
        let v = lit.var().index();
        debug_assert_eq!(self.assigns[v], LBool::Undef);
        self.assigns[v] = if lit.is_positive() { LBool::True } else { LBool::False };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        if self.decision_level() == 0 {
            self.level0_tag[v] = match reason {
                Reason::Clause(ci) => {
                    let c = &self.clauses[ci];
                    c.lits.iter().filter(|&&l| l != lit).map(|l| self.level0_tag[l.var().index()]).fold(c.frame, u32::max)
                }
                _ => 0,
            };
        }
        self.trail.push(lit);
    }

    fn enqueue_theory(&mut self, lit: Lit, theory: &mut dyn Theory) {
        self.enqueue(lit, Reason::Theory);
        if self.decision_level() == 0 {
            let ante = theory.explain(lit);
            let t = ante.iter().map(|l| self.level0_tag[l.var().index()]).max().unwrap_or(0);
            self.level0_tag[lit.var().index()] = t;
        }
    }

    fn new_decision_level(&mut self) {
        self.trail_lim.push(self.trail.len());
    }

    /// Opens a decision level and assigns `lit` there.
    pub fn decide(&mut self, lit: Lit) {
        self.ensure_vars(lit.var().index() + 1);
        self.new_decision_level();
        self.stats.decisions += 1;
        self.enqueue(lit, Reason::Decision);
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let start = self.trail_lim[level as usize];
        for i in (start..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var().index();
            self.assigns[v] = LBool::Undef;
            self.phase[v] = l.is_positive();
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(level as usize);
        self.qhead = self.qhead.min(start);
    }

    fn backtrack(&mut self, level: u32, theory: &mut dyn Theory) {
        self.cancel_until(level);
        theory.backtrack(self.decision_level(), self.trail.len());
    }

    /// Unit propagation to fixpoint; returns the conflicting clause, if any.
    pub fn propagate_units(&mut self) -> Option<Vec<Lit>> {
        self.propagate().map(|ci| self.clauses[ci].lits.clone())
    }

    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.index()]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < ws.len() {
                let ci = ws[i];
                i += 1;
                if self.clauses[ci].deleted {
                    continue;
                }
                if self.clauses[ci].lits[0] == false_lit {
                    self.clauses[ci].lits.swap(0, 1);
                }
                let first = self.clauses[ci].lits[0];
                if self.value(first) == LBool::True {
                    ws[j] = ci;
                    j += 1;
                    continue;
                }
                let len = self.clauses[ci].lits.len();
                let mut moved = false;
                for k in 2..len {
                    let l = self.clauses[ci].lits[k];
                    if self.value(l) != LBool::False {
                        self.clauses[ci].lits.swap(1, k);
                        self.watches[l.index()].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = ci;
                j += 1;
                if self.value(first) == LBool::False {
                    conflict = Some(ci);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                } else {
                    self.enqueue(first, Reason::Clause(ci));
                }
            }
            ws.truncate(j);
            let fresh = std::mem::replace(&mut self.watches[false_lit.index()], ws);
            self.watches[false_lit.index()].extend(fresh);
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn reason_lits(&mut self, lit: Lit, theory: &mut dyn Theory) -> (Vec<Lit>, u32) {
        match self.reason[lit.var().index()] {
            Reason::Clause(ci) => {
                self.bump_clause(ci);
                (self.clauses[ci].lits.clone(), self.clauses[ci].frame)
            }
            Reason::Theory => {
                let mut c = vec![lit];
                c.extend(theory.explain(lit).into_iter().map(|l| !l));
                (c, 0)
            }
            Reason::Decision => (vec![lit], 0),
        }
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in self.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
    }

    fn bump_clause(&mut self, ci: usize) {
        if !self.clauses[ci].learned {
            return;
        }
        self.clauses[ci].activity += self.cla_inc;
        if self.clauses[ci].activity > 1e20 {
            for c in self.clauses.iter_mut().filter(|c| c.learned) {
                c.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP analysis of a clause that is false at the current level.
    /// Returns the learned clause (asserting literal first), backjump level and frame tag.
    fn analyze(&mut self, conflict: Vec<Lit>, mut tag: u32, theory: &mut dyn Theory) -> (Vec<Lit>, u32, u32) {
        let dl = self.decision_level();
        let mut out = vec![Lit(0)];
        let mut pathc = 0usize;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        let mut clause = conflict;
        loop {
            for &q in &clause {
                if Some(q) == p {
                    continue;
                }
                let v = q.var().index();
                if self.seen[v] {
                    continue;
                }
                if self.level[v] == 0 {
                    tag = tag.max(self.level0_tag[v]);
                    continue;
                }
                self.seen[v] = true;
                self.bump_var(v);
                if self.level[v] >= dl {
                    pathc += 1;
                } else {
                    out.push(q);
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var().index()] {
                    break;
                }
            }
            let pl = self.trail[idx];
            self.seen[pl.var().index()] = false;
            pathc -= 1;
            p = Some(pl);
            if pathc == 0 {
                break;
            }
            let (c, t) = self.reason_lits(pl, theory);
            tag = tag.max(t);
            clause = c;
        }
        out[0] = !p.unwrap();
        for l in &out[1..] {
            self.seen[l.var().index()] = false;
        }
        let mut bj = 0;
        if out.len() > 1 {
            let mut best = 1;
            for k in 2..out.len() {
                if self.level[out[k].var().index()] > self.level[out[best].var().index()] {
                    best = k;
                }
            }
            out.swap(1, best);
            bj = self.level[out[1].var().index()];
        }
        (out, bj, tag)
    }

    /// Learned clause and backjump level for a clause false under the trail;
    /// `None` when the conflict sits at level 0.
    pub fn analyze_conflict(&mut self, conflict: &[Lit]) -> Option<(Vec<Lit>, u32)> {
        let max_level = conflict.iter().map(|l| self.level[l.var().index()]).max().unwrap_or(0);
        if max_level == 0 {
            return None;
        }
        self.cancel_until(max_level);
        let (learned, bj, _) = self.analyze(conflict.to_vec(), 0, &mut NoTheory);
        Some((learned, bj))
    }

    fn lbd(&self, lits: &[Lit]) -> u32 {
        let mut levels: Vec<u32> = lits.iter().map(|l| self.level[l.var().index()]).collect();
        levels.sort_unstable();
        levels.dedup();
        levels.len() as u32
    }

    /// Resolves a conflict; returns false when the clauses are unsatisfiable.
    fn handle_conflict(&mut self, conflict: Vec<Lit>, tag: u32, theory: &mut dyn Theory) -> bool {
        self.stats.conflicts += 1;
        self.since_reduce += 1;
        let max_level = conflict.iter().map(|l| self.level[l.var().index()]).max().unwrap_or(0);
        if max_level == 0 || conflict.is_empty() {
            let t = conflict.iter().map(|l| self.level0_tag[l.var().index()]).fold(tag, u32::max);
            self.inconsistent = Some(self.inconsistent.map_or(t, |o| o.max(t)));
            return false;
        }
        if max_level < self.decision_level() {
            self.backtrack(max_level, theory);
        }
        let (learned, bj, ltag) = self.analyze(conflict, tag, theory);
        self.backtrack(bj, theory);
        self.stats.learned += 1;
        let lbd = self.lbd(&learned);
        let ci = self.clauses.len();
        self.clauses.push(ClauseData {
            lits: learned.clone(),
            learned: true,
            lbd,
            activity: self.cla_inc,
            frame: ltag,
            deleted: false,
        });
        if learned.len() == 1 {
            self.units.push(ci);
        } else {
            self.watches[learned[0].index()].push(ci);
            self.watches[learned[1].index()].push(ci);
        }
        self.enqueue(learned[0], Reason::Clause(ci));
        self.var_inc /= VAR_DECAY;
        self.cla_inc /= CLAUSE_DECAY;
        true
    }

    /// Assumptions responsible for `lit` being false.
    fn analyze_final(&mut self, lit: Lit, theory: &mut dyn Theory) -> Vec<Lit> {
        let mut core = vec![!lit];
        if self.decision_level() == 0 {
            return core;
        }
        self.seen[lit.var().index()] = true;
        let start = self.trail_lim[0];
        for i in (start..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var().index();
            if !self.seen[v] {
                continue;
            }
            match self.reason[v] {
                Reason::Decision => {
                    if l != lit && l != !lit {
                        core.push(l);
                    }
                }
                _ => {
                    let (c, _) = self.reason_lits(l, theory);
                    for q in c.into_iter().skip(1) {
                        if self.level[q.var().index()] > 0 {
                            self.seen[q.var().index()] = true;
                        }
                    }
                }
            }
            self.seen[v] = false;
        }
        self.seen[lit.var().index()] = false;
        core
    }

    fn pick_branch(&self) -> Option<Var> {
        let mut best: Option<usize> = None;
        for v in 0..self.num_vars() {
            if self.assigns[v] != LBool::Undef {
                continue;
            }
            match best {
                None => best = Some(v),
                Some(b) if self.activity[v] > self.activity[b] => best = Some(v),
                _ => {}
            }
        }
        best.map(|v| Var(v as u32))
    }

    fn locked(&self, ci: usize) -> bool {
        let l = self.clauses[ci].lits[0];
        self.value(l) == LBool::True && self.reason[l.var().index()] == Reason::Clause(ci)
    }

    fn reduce_db(&mut self) {
        let mut cands: Vec<usize> = (0..self.clauses.len())
            .filter(|&ci| {
                let c = &self.clauses[ci];
                c.learned && !c.deleted && c.lbd > KEEP_LBD && c.lits.len() > 1 && !self.locked(ci)
            })
            .collect();
        cands.sort_by(|&a, &b| {
            let (ca, cb) = (&self.clauses[a], &self.clauses[b]);
            cb.lbd.cmp(&ca.lbd).then(ca.activity.partial_cmp(&cb.activity).unwrap()).then(a.cmp(&b))
        });
        let n = cands.len() / 2;
        for &ci in &cands[..n] {
            self.clauses[ci].deleted = true;
            self.stats.deleted += 1;
        }
    }

    #[cfg(debug_assertions)]
    fn check_model(&self) {
        for c in &self.clauses {
            if c.deleted || c.learned {
                continue;
            }
            assert!(c.lits.iter().any(|&l| self.value(l) == LBool::True), "model violates an input clause");
        }
    }

    pub fn solve(&mut self, assumptions: &[Lit]) -> SolveResult {
        self.solve_with(assumptions, &mut NoTheory)
    }

    /// Searches for an assignment satisfying the clauses and `assumptions`.
    /// On `Sat` the trail holds the model until the next mutation.
    pub fn solve_with(&mut self, assumptions: &[Lit], theory: &mut dyn Theory) -> SolveResult {
        for &a in assumptions {
            self.ensure_vars(a.var().index() + 1);
        }
        self.assumptions = assumptions.to_vec();
        self.cancel_until(0);
        let synced = self.unsynced.take().map_or(self.trail.len(), |u| u.min(self.trail.len()));
        theory.backtrack(0, synced);
        if self.inconsistent.is_some() {
            return SolveResult::Unsat(Vec::new());
        }
        let mut restart_round = 0u64;
        let mut conflicts_here = 0u64;
        let mut limit = luby(restart_round) * RESTART_BASE;
        let mut ticks = 0u64;
        loop {
            if let Some(ci) = self.propagate() {
                let lits = self.clauses[ci].lits.clone();
                let frame = self.clauses[ci].frame;
                self.bump_clause(ci);
                if !self.handle_conflict(lits, frame, theory) {
                    return SolveResult::Unsat(Vec::new());
                }
                conflicts_here += 1;
                if self.since_reduce >= REDUCE_INTERVAL {
                    self.since_reduce = 0;
                    self.reduce_db();
                }
                continue;
            }
            if conflicts_here >= limit {
                conflicts_here = 0;
                restart_round += 1;
                limit = luby(restart_round) * RESTART_BASE;
                self.stats.restarts += 1;
                self.backtrack(0, theory);
                continue;
            }
            ticks += 1;
            if ticks % 64 == 0 {
                if let Some(d) = self.deadline {
                    if Instant::now() >= d {
                        return SolveResult::Unknown;
                    }
                }
            }
            let complete = self.trail.len() == self.num_vars();
            match theory.check(self, complete) {
                HookAction::Continue => {}
                HookAction::Conflict(c) => {
                    if !self.handle_conflict(c, 0, theory) {
                        return SolveResult::Unsat(Vec::new());
                    }
                    conflicts_here += 1;
                    continue;
                }
                HookAction::Propagate(lits) => {
                    let mut progressed = false;
                    for l in lits {
                        match self.value(l) {
                            LBool::True => {}
                            LBool::Undef => {
                                self.enqueue_theory(l, theory);
                                progressed = true;
                            }
                            LBool::False => {
                                let mut c = vec![l];
                                c.extend(theory.explain(l).into_iter().map(|a| !a));
                                if !self.handle_conflict(c, 0, theory) {
                                    return SolveResult::Unsat(Vec::new());
                                }
                                conflicts_here += 1;
                                progressed = true;
                                break;
                            }
                        }
                    }
                    if progressed {
                        continue;
                    }
                }
                HookAction::Learn { clauses, assumptions } => {
                    self.backtrack(0, theory);
                    if let Some(a) = assumptions {
                        for &l in &a {
                            self.ensure_vars(l.var().index() + 1);
                        }
                        self.assumptions = a;
                    }
                    let frame = self.frame_depth;
                    for c in clauses {
                        self.add_clause_tagged(&c, frame, false);
                    }
                    self.backtrack(0, theory);
                    if self.inconsistent.is_some() {
                        return SolveResult::Unsat(Vec::new());
                    }
                    continue;
                }
                HookAction::Stop => return SolveResult::Stopped,
            }
            let dl = self.decision_level() as usize;
            if dl < self.assumptions.len() {
                let a = self.assumptions[dl];
                match self.value(a) {
                    LBool::True => self.new_decision_level(),
                    LBool::Undef => {
                        self.new_decision_level();
                        self.enqueue(a, Reason::Decision);
                    }
                    LBool::False => {
                        let core = self.analyze_final(!a, theory);
                        match theory.assumptions_failed(&core) {
                            Some(next) => {
                                for &l in &next {
                                    self.ensure_vars(l.var().index() + 1);
                                }
                                self.assumptions = next;
                                self.backtrack(0, theory);
                            }
                            None => return SolveResult::Unsat(core),
                        }
                    }
                }
                continue;
            }
            match self.pick_branch() {
                None => {
                    #[cfg(debug_assertions)]
                    self.check_model();
                    return SolveResult::Sat;
                }
                Some(v) => {
                    self.stats.decisions += 1;
                    self.new_decision_level();
                    let lit = Lit::new(v, self.phase[v.index()]);
                    self.enqueue(lit, Reason::Decision);
                }
            }
        }
    }
}

/// Parsed DIMACS CNF.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dimacs {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
}

pub fn parse_dimacs(text: &str) -> Result<Dimacs, SatError> {
    let mut num_vars = None;
    let mut declared = 0usize;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(SatError::Dimacs { line: no + 1, msg: "expected `p cnf V C`".into() });
            }
            let v = parts[2].parse().map_err(|_| SatError::Dimacs { line: no + 1, msg: "bad variable count".into() })?;
            declared = parts[3].parse().map_err(|_| SatError::Dimacs { line: no + 1, msg: "bad clause count".into() })?;
            num_vars = Some(v);
            continue;
        }
        let nv = num_vars.ok_or(SatError::Dimacs { line: no + 1, msg: "clause before header".into() })?;
        for tok in line.split_whitespace() {
            let i: i64 = tok.parse().map_err(|_| SatError::Dimacs { line: no + 1, msg: format!("bad literal `{}`", tok) })?;
            if i == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                if i.unsigned_abs() as usize > nv {
                    return Err(SatError::Dimacs { line: no + 1, msg: format!("variable {} out of range", i) });
                }
                current.push(Lit::from_dimacs(i));
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    let num_vars = num_vars.ok_or(SatError::Dimacs { line: 0, msg: "missing header".into() })?;
    if clauses.len() != declared {
        return Err(SatError::Dimacs { line: 0, msg: format!("header declares {} clauses, found {}", declared, clauses.len()) });
    }
    Ok(Dimacs { num_vars, clauses })
}

impl SatSolver {
    pub fn from_dimacs(d: &Dimacs) -> SatSolver {
        let mut s = SatSolver::new();
        s.ensure_vars(d.num_vars);
        for c in &d.clauses {
            s.add_clause(c);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: u32 = 0;
    const B: u32 = 1;
    const C: u32 = 2;

    #[test]
    fn luby_prefix() {
        let seq: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn push_pop_examples() {
        let mut s = SatSolver::new();
        s.push_clauses(&[vec![Lit::pos(A)]]);
        s.push_clauses(&[vec![Lit::neg(A)]]);
        assert_eq!(s.solve(&[]), SolveResult::Unsat(vec![]));
        s.pop().unwrap();
        assert_eq!(s.solve(&[]), SolveResult::Sat);

        let mut s = SatSolver::new();
        s.push_clauses(&[vec![Lit::pos(A), Lit::pos(B)]]);
        assert_eq!(s.solve(&[]), SolveResult::Sat);
        s.push_clauses(&[vec![Lit::neg(A)]]);
        assert_eq!(s.solve(&[]), SolveResult::Sat);
        assert_eq!(s.value(Lit::pos(B)), LBool::True);
        assert_eq!(s.value(Lit::pos(A)), LBool::False);

        let mut s = SatSolver::new();
        assert_eq!(s.pop(), Err(SatError::PopEmpty));
    }

    #[test]
    fn propagate_examples() {
        let mut s = SatSolver::new();
        s.add_clause(&[Lit::neg(A), Lit::pos(B)]);
        s.decide(Lit::pos(A));
        assert_eq!(s.propagate_units(), None);
        let e = s.trail_entries();
        assert_eq!(e[1].lit, Lit::pos(B));
        assert_eq!(e[1].level, 1);
        assert!(matches!(e[1].reason, Reason::Clause(_)));

        let mut s = SatSolver::new();
        s.add_clause(&[Lit::neg(A), Lit::pos(B)]);
        s.add_clause(&[Lit::neg(A), Lit::neg(B)]);
        s.decide(Lit::pos(A));
        let confl = s.propagate_units().expect("conflict");
        assert_eq!(confl.len(), 2);
        assert!(confl.contains(&Lit::neg(A)));

        let mut s = SatSolver::new();
        s.add_clause(&[Lit::pos(A), Lit::pos(B)]);
        assert_eq!(s.propagate_units(), None);
        assert!(s.trail().is_empty());
    }

    #[test]
    fn analyze_examples() {
        let mut s = SatSolver::new();
        s.add_clause(&[Lit::neg(A), Lit::pos(B)]);
        s.add_clause(&[Lit::neg(A), Lit::neg(B)]);
        s.decide(Lit::pos(A));
        let confl = s.propagate_units().unwrap();
        let (learned, bj) = s.analyze_conflict(&confl).unwrap();
        assert_eq!(learned, vec![Lit::neg(A)]);
        assert_eq!(bj, 0);

        let mut s = SatSolver::new();
        s.add_clause(&[Lit::neg(C), Lit::pos(B)]);
        s.add_clause(&[Lit::neg(A), Lit::neg(B), Lit::neg(C)]);
        s.decide(Lit::pos(A));
        assert_eq!(s.propagate_units(), None);
        s.decide(Lit::pos(C));
        let confl = s.propagate_units().unwrap();
        let (learned, bj) = s.analyze_conflict(&confl).unwrap();
        let at_two = learned.iter().filter(|l| s.level_of(l.var()) == 2).count();
        assert_eq!(at_two, 1);
        assert_eq!(bj, 1);

        let mut s = SatSolver::new();
        s.add_clause(&[Lit::pos(A)]);
        s.add_clause(&[Lit::neg(A)]);
        assert_eq!(s.analyze_conflict(&[Lit::neg(A)]), None);
    }

    #[test]
    fn solve_examples() {
        let mut s = SatSolver::new();
        s.add_clause(&[Lit::pos(A), Lit::pos(B)]);
        s.add_clause(&[Lit::neg(A)]);
        s.add_clause(&[Lit::neg(B)]);
        assert_eq!(s.solve(&[]), SolveResult::Unsat(vec![]));

        let mut s = SatSolver::new();
        s.add_clause(&[Lit::pos(A), Lit::pos(B)]);
        s.add_clause(&[Lit::neg(A)]);
        assert_eq!(s.solve(&[]), SolveResult::Sat);
        assert_eq!(s.value(Lit::pos(B)), LBool::True);

        let mut s = SatSolver::new();
        s.add_clause(&[Lit::neg(A), Lit::neg(B)]);
        match s.solve(&[Lit::pos(A), Lit::pos(B)]) {
            SolveResult::Unsat(mut core) => {
                core.sort();
                assert_eq!(core, vec![Lit::pos(A), Lit::pos(B)]);
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn dimacs_roundtrip() {
        let d = parse_dimacs("c hi\np cnf 3 2\n1 -2 0\n2 3 0\n").unwrap();
        assert_eq!(d.num_vars, 3);
        assert_eq!(d.clauses[0], vec![Lit::from_dimacs(1), Lit::from_dimacs(-2)]);
        let mut s = SatSolver::from_dimacs(&d);
        assert_eq!(s.solve(&[]), SolveResult::Sat);
        assert!(parse_dimacs("1 2 0").is_err());
        assert!(parse_dimacs("p cnf 1 1\n2 0\n").is_err());
    }
}
