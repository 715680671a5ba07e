//! Translations into optimization problems: disjunctive programs, pseudo-Boolean
//! objectives and weighted MaxSMT, plus strip-packing and job-shop generators.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{fmt_pq, int, parse_rational, Rational};
use crate::ast::{Cmp, FreshNames, Formula, Linear};
use crate::omt::{Model, OmtProblem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error("bad rational `{0}`")]
    BadRational(String),
}

fn parse(text: &str) -> Result<Rational, EncodeError> {
    parse_rational(text).ok_or_else(|| EncodeError::BadRational(text.to_string()))
}

/// `lhs ≤ rhs` with rationals written as text.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub lhs: BTreeMap<String, String>,
    pub rhs: String,
}

impl Row {
    pub fn new(lhs: &[(&str, Rational)], rhs: Rational) -> Row {
        Row { lhs: lhs.iter().map(|(v, c)| (v.to_string(), fmt_pq(c))).collect(), rhs: fmt_pq(&rhs) }
    }

    fn to_formula(&self) -> Result<Formula, EncodeError> {
        let mut e = Linear::constant(-parse(&self.rhs)?);
        for (v, c) in &self.lhs {
            e.add_term(v, &parse(c)?);
        }
        Ok(Formula::lra(e, Cmp::Le))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarDecl {
    pub name: String,
    /// Upper bound; the lower bound is zero.
    pub ub: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disjunct {
    /// Name of the Boolean selecting this disjunct.
    pub label: String,
    pub rows: Vec<Row>,
    pub charge: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disjunction {
    /// Cost variable charged by the chosen disjunct.
    pub z: String,
    pub disjuncts: Vec<Disjunct>,
}

/// Linear generalized disjunctive program: minimize `Σ z_k + d·x` subject to
/// common rows, `0 ≤ x ≤ ub`, one chosen disjunct per disjunction and `prop_cnf`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LgdpModel {
    pub vars: Vec<VarDecl>,
    #[serde(default)]
    pub d: BTreeMap<String, String>,
    #[serde(default)]
    pub common: Vec<Row>,
    #[serde(default)]
    pub disjunctions: Vec<Disjunction>,
    /// Extra clauses over the disjunct labels; `-Y` negates.
    #[serde(default)]
    pub prop_cnf: Vec<Vec<String>>,
}

/// Encoded program with what is needed to read a model back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LgdpEncoding {
    pub problem: OmtProblem,
    pub vars: Vec<String>,
    pub labels: Vec<Vec<String>>,
}

/// Continuous values and the chosen disjunct of each disjunction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LgdpSolution {
    pub x: BTreeMap<String, Rational>,
    pub chosen: Vec<Vec<String>>,
}

impl LgdpEncoding {
    pub fn decode(&self, model: &Model) -> LgdpSolution {
        LgdpSolution {
            x: self.vars.iter().map(|v| (v.clone(), model.real(v))).collect(),
            chosen: self
                .labels
                .iter()
                .map(|ls| ls.iter().filter(|l| model.bools.get(*l).copied().unwrap_or(false)).cloned().collect())
                .collect(),
        }
    }
}

fn prop_literal(text: &str) -> Formula {
    match text.strip_prefix('-') {
        Some(p) => Formula::not(Formula::prop(p)),
        None => Formula::prop(text),
    }
}

fn fresh_cost(taken: &BTreeSet<String>) -> String {
    if !taken.contains("cost") {
        return "cost".to_string();
    }
    FreshNames::new("cost", taken.clone()).fresh()
}

impl LgdpModel {
    pub fn validate(&self) -> Result<(), EncodeError> {
        let mut errors = Vec::new();
        let mut names = BTreeSet::new();
        for v in &self.vars {
            if !names.insert(v.name.clone()) {
                errors.push(format!("variable {} declared twice", v.name));
            }
            match parse_rational(&v.ub) {
                Some(u) if u.is_negative() => errors.push(format!("variable {} has negative bound", v.name)),
                None => errors.push(format!("variable {} has bad bound `{}`", v.name, v.ub)),
                _ => {}
            }
        }
        let check_row = |r: &Row, what: &str, errors: &mut Vec<String>| {
            for (v, c) in &r.lhs {
                if !names.contains(v) {
                    errors.push(format!("{}: undeclared variable {}", what, v));
                }
                if parse_rational(c).is_none() {
                    errors.push(format!("{}: bad coefficient `{}`", what, c));
                }
            }
            if parse_rational(&r.rhs).is_none() {
                errors.push(format!("{}: bad right-hand side `{}`", what, r.rhs));
            }
        };
        for (i, r) in self.common.iter().enumerate() {
            check_row(r, &format!("common row {}", i), &mut errors);
        }
        for (v, c) in &self.d {
            if !names.contains(v) {
                errors.push(format!("cost weight on undeclared variable {}", v));
            }
            if parse_rational(c).is_none() {
                errors.push(format!("bad cost weight `{}`", c));
            }
        }
        let mut labels = BTreeSet::new();
        let mut zs = BTreeSet::new();
        for (k, disj) in self.disjunctions.iter().enumerate() {
            if disj.disjuncts.len() < 2 {
                errors.push(format!("disjunction {} has fewer than two disjuncts", k));
            }
            if names.contains(&disj.z) || !zs.insert(disj.z.clone()) {
                errors.push(format!("disjunction {}: cost variable {} is not fresh", k, disj.z));
            }
            for (j, dj) in disj.disjuncts.iter().enumerate() {
                if !labels.insert(dj.label.clone()) {
                    errors.push(format!("disjunction {} disjunct {}: label {} reused", k, j, dj.label));
                }
                match parse_rational(&dj.charge) {
                    Some(c) if c.is_negative() => errors.push(format!("disjunction {} disjunct {}: negative charge", k, j)),
                    None => errors.push(format!("disjunction {} disjunct {}: bad charge `{}`", k, j, dj.charge)),
                    _ => {}
                }
                for (i, r) in dj.rows.iter().enumerate() {
                    check_row(r, &format!("disjunction {} disjunct {} row {}", k, j, i), &mut errors);
                }
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(EncodeError::Invalid(errors.join("; ")))
        }
    }
}

/// cost = Σ z_k + d·x over the common rows, box bounds, side clauses, exactly one
/// disjunct per disjunction and the redundant charge range of each z_k.
pub fn encode_lgdp(m: &LgdpModel) -> Result<LgdpEncoding, EncodeError> {
    m.validate()?;
    let mut taken: BTreeSet<String> = m.vars.iter().map(|v| v.name.clone()).collect();
    for d in &m.disjunctions {
        taken.insert(d.z.clone());
        taken.extend(d.disjuncts.iter().map(|j| j.label.clone()));
    }
    let cost = fresh_cost(&taken);
    let mut parts = Vec::new();
    let mut cost_def = Linear::var(&cost);
    for (v, c) in &m.d {
        cost_def.add_term(v, &-parse(c)?);
    }
    for d in &m.disjunctions {
        cost_def.add_term(&d.z, &int(-1));
    }
    parts.push(Formula::lra(cost_def, Cmp::Eq));
    for r in &m.common {
        parts.push(r.to_formula()?);
    }
    for v in &m.vars {
        parts.push(Formula::var_cmp(&v.name, Cmp::Ge, Rational::zero()));
        parts.push(Formula::var_cmp(&v.name, Cmp::Le, parse(&v.ub)?));
    }
    for c in &m.prop_cnf {
        parts.push(Formula::or(c.iter().map(|l| prop_literal(l)).collect()));
    }
    let mut labels = Vec::new();
    for d in &m.disjunctions {
        let names: Vec<String> = d.disjuncts.iter().map(|j| j.label.clone()).collect();
        // exactly one selector: one at-least-one clause plus pairwise at-most-one
        parts.push(Formula::or(names.iter().map(|n| Formula::prop(n)).collect()));
        for a in 0..names.len() {
            for b in a + 1..names.len() {
                parts.push(Formula::or(vec![Formula::not(Formula::prop(&names[a])), Formula::not(Formula::prop(&names[b]))]));
            }
        }
        let mut branches = Vec::new();
        let mut charges = Vec::new();
        for dj in &d.disjuncts {
            let charge = parse(&dj.charge)?;
            let mut conj = vec![Formula::prop(&dj.label)];
            for r in &dj.rows {
                conj.push(r.to_formula()?);
            }
            conj.push(Formula::var_cmp(&d.z, Cmp::Eq, charge.clone()));
            branches.push(Formula::and(conj));
            charges.push(charge);
        }
        parts.push(Formula::or(branches));
        let lo = charges.iter().min().unwrap().clone();
        let hi = charges.iter().max().unwrap().clone();
        parts.push(Formula::var_cmp(&d.z, Cmp::Ge, lo));
        parts.push(Formula::var_cmp(&d.z, Cmp::Le, hi));
        labels.push(names);
    }
    Ok(LgdpEncoding {
        problem: OmtProblem::new(Formula::and(parts), &cost),
        vars: m.vars.iter().map(|v| v.name.clone()).collect(),
        labels,
    })
}

/// Rectangles `(width, height)` packed into a strip of height `height`, minimizing its length `L`.
pub fn strip_packing_model(rects: &[(Rational, Rational)], height: &Rational) -> LgdpModel {
    let total_w: Rational = rects.iter().map(|r| r.0.clone()).sum();
    let mut m = LgdpModel::default();
    for i in 0..rects.len() {
        m.vars.push(VarDecl { name: format!("x{}", i), ub: fmt_pq(&total_w) });
        m.vars.push(VarDecl { name: format!("y{}", i), ub: fmt_pq(&(height - &rects[i].1)) });
    }
    m.vars.push(VarDecl { name: "L".into(), ub: fmt_pq(&total_w) });
    m.d.insert("L".into(), "1".into());
    let one = int(1);
    for (i, (w, _)) in rects.iter().enumerate() {
        m.common.push(Row::new(&[(&format!("x{}", i), one.clone()), ("L", -one.clone())], -w.clone()));
    }
    for i in 0..rects.len() {
        for j in i + 1..rects.len() {
            let (xi, xj, yi, yj) = (format!("x{}", i), format!("x{}", j), format!("y{}", i), format!("y{}", j));
            let (wi, hi) = &rects[i];
            let (wj, hj) = &rects[j];
            // a + size ≤ b  ⇔  a − b ≤ −size
            let before = |a: &str, b: &str, size: &Rational| Row::new(&[(a, one.clone()), (b, -one.clone())], -size.clone());
            let d = |tag: &str, row: Row| Disjunct { label: format!("Y{}_{}_{}", i, j, tag), rows: vec![row], charge: "0".into() };
            m.disjunctions.push(Disjunction {
                z: format!("z{}_{}", i, j),
                disjuncts: vec![
                    d("left", before(&xi, &xj, wi)),
                    d("right", before(&xj, &xi, wj)),
                    d("below", before(&yi, &yj, hi)),
                    d("above", before(&yj, &yi, hj)),
                ],
            });
        }
    }
    m
}

/// Seeded rectangles: integer widths in 1..=4, heights in 1..=⌊height⌋ (or `height` itself below one).
pub fn gen_strip_rects(n: usize, height: &Rational, seed: u64) -> Vec<(Rational, Rational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hmax = height.floor().to_integer();
    (0..n)
        .map(|_| {
            let w = int(rng.gen_range(1..=4));
            let h = if hmax >= 1.into() {
                let top = hmax.to_i64().unwrap_or(i64::MAX).min(1_000_000);
                int(rng.gen_range(1..=top))
            } else {
                height.clone()
            };
            (w, h)
        })
        .collect()
}

pub fn gen_strip_packing(n: usize, height: &Rational, seed: u64) -> LgdpModel {
    strip_packing_model(&gen_strip_rects(n, height, seed), height)
}

/// Zero-wait job shop: each job is a chain of `(machine, duration)` stages that
/// run back to back from the job's start `t_j`; the makespan `M` is minimized.
pub fn jobshop_model(jobs: &[Vec<(usize, Rational)>]) -> LgdpModel {
    let horizon: Rational = jobs.iter().flat_map(|j| j.iter().map(|s| s.1.clone())).sum();
    let mut m = LgdpModel::default();
    for j in 0..jobs.len() {
        m.vars.push(VarDecl { name: format!("t{}", j), ub: fmt_pq(&horizon) });
    }
    m.vars.push(VarDecl { name: "M".into(), ub: fmt_pq(&horizon) });
    m.d.insert("M".into(), "1".into());
    let one = int(1);
    let offsets: Vec<Vec<Rational>> = jobs
        .iter()
        .map(|stages| {
            let mut acc = Rational::zero();
            stages
                .iter()
                .map(|s| {
                    let here = acc.clone();
                    acc += &s.1;
                    here
                })
                .collect()
        })
        .collect();
    for (j, stages) in jobs.iter().enumerate() {
        let total: Rational = stages.iter().map(|s| s.1.clone()).sum();
        m.common.push(Row::new(&[(&format!("t{}", j), one.clone()), ("M", -one.clone())], -total));
    }
    for a in 0..jobs.len() {
        for b in a + 1..jobs.len() {
            for (sa, (ma, da)) in jobs[a].iter().enumerate() {
                for (sb, (mb, db)) in jobs[b].iter().enumerate() {
                    if ma != mb {
                        continue;
                    }
                    let (ta, tb) = (format!("t{}", a), format!("t{}", b));
                    // stage sa of a ends before stage sb of b starts, or the reverse
                    let first = Row::new(&[(&ta, one.clone()), (&tb, -one.clone())], &offsets[b][sb] - &offsets[a][sa] - da);
                    let second = Row::new(&[(&tb, one.clone()), (&ta, -one.clone())], &offsets[a][sa] - &offsets[b][sb] - db);
                    let tag = format!("{}_{}_m{}_{}_{}", a, b, ma, sa, sb);
                    m.disjunctions.push(Disjunction {
                        z: format!("z{}", tag),
                        disjuncts: vec![
                            Disjunct { label: format!("B{}", tag), rows: vec![first], charge: "0".into() },
                            Disjunct { label: format!("A{}", tag), rows: vec![second], charge: "0".into() },
                        ],
                    });
                }
            }
        }
    }
    m
}

/// Seeded jobs: each visits every machine once in a random order, durations 1..=5.
pub fn gen_jobshop_jobs(jobs: usize, stages: usize, seed: u64) -> Vec<Vec<(usize, Rational)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..jobs)
        .map(|_| {
            let mut order: Vec<usize> = (0..stages).collect();
            for i in (1..order.len()).rev() {
                let k = rng.gen_range(0..=i);
                order.swap(i, k);
            }
            order.into_iter().map(|mach| (mach, int(rng.gen_range(1..=5)))).collect()
        })
        .collect()
}

pub fn gen_jobshop(jobs: usize, stages: usize, seed: u64) -> LgdpModel {
    jobshop_model(&gen_jobshop_jobs(jobs, stages, seed))
}

/// Minimize `Σ weight·[atom]` subject to `constraint`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbObjective {
    pub terms: Vec<(String, Rational)>,
    pub constraint: Formula,
}

/// Each term becomes a real `x_i` with `(¬X ∨ x_i = a) ∧ (X ∨ x_i = 0)` plus the
/// redundant range `0 ≤ x_i ≤ a` (sign-flipped for negative `a`); cost = Σ x_i.
pub fn encode_pb(o: &PbObjective) -> Result<OmtProblem, EncodeError> {
    let mut seen = BTreeSet::new();
    for (x, _) in &o.terms {
        if !seen.insert(x.clone()) {
            return Err(EncodeError::Invalid(format!("atom {} appears twice in the objective", x)));
        }
    }
    let mut taken = o.constraint.names();
    taken.extend(seen);
    let cost = fresh_cost(&taken);
    taken.insert(cost.clone());
    let mut fresh = FreshNames::new("pb", taken);
    let mut parts = vec![o.constraint.clone()];
    let mut sum = Linear::var(&cost);
    for (atom, a) in &o.terms {
        let x = fresh.fresh();
        sum.add_term(&x, &int(-1));
        let p = Formula::prop(atom);
        parts.push(Formula::or(vec![Formula::not(p.clone()), Formula::var_cmp(&x, Cmp::Eq, a.clone())]));
        parts.push(Formula::or(vec![p, Formula::var_cmp(&x, Cmp::Eq, Rational::zero())]));
        let (lo, hi) = if a.is_negative() { (a.clone(), Rational::zero()) } else { (Rational::zero(), a.clone()) };
        parts.push(Formula::var_cmp(&x, Cmp::Ge, lo));
        parts.push(Formula::var_cmp(&x, Cmp::Le, hi));
    }
    parts.push(Formula::lra(sum, Cmp::Eq));
    Ok(OmtProblem::new(Formula::and(parts), &cost))
}

/// Hard formula plus weighted soft clauses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxSmtInstance {
    pub hard: Formula,
    pub soft: Vec<(Formula, Rational)>,
}

/// Problem plus the relaxation proposition of each soft clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxSmtEncoding {
    pub problem: OmtProblem,
    pub relax: Vec<String>,
}

impl MaxSmtEncoding {
    /// Indices of soft clauses whose relaxation is off in `model`.
    pub fn satisfied(&self, model: &Model) -> Vec<usize> {
        (0..self.relax.len()).filter(|&j| !model.bools.get(&self.relax[j]).copied().unwrap_or(false)).collect()
    }
}

/// Relaxes each soft clause `C_j` to `(R_j ∨ C_j)` and minimizes `Σ weight_j·[R_j]`.
pub fn encode_maxsmt(m: &MaxSmtInstance) -> Result<MaxSmtEncoding, EncodeError> {
    for (j, (_, w)) in m.soft.iter().enumerate() {
        if !w.is_positive() {
            return Err(EncodeError::Invalid(format!("soft clause {} has non-positive weight {}", j, w)));
        }
    }
    let mut taken = m.hard.names();
    for (c, _) in &m.soft {
        taken.extend(c.names());
    }
    let mut fresh = FreshNames::new("relax", taken);
    let mut parts = vec![m.hard.clone()];
    let mut terms = Vec::new();
    let mut relax = Vec::new();
    for (c, w) in &m.soft {
        let r = fresh.fresh();
        parts.push(Formula::or(vec![Formula::prop(&r), c.clone()]));
        terms.push((r.clone(), w.clone()));
        relax.push(r);
    }
    let problem = encode_pb(&PbObjective { terms, constraint: Formula::and(parts) })?;
    Ok(MaxSmtEncoding { problem, relax })
}

/// Hard part is the constraint; each term `a·X` becomes the soft clause `(¬X)` of weight `a`.
pub fn pb_to_maxsmt(o: &PbObjective) -> Result<MaxSmtInstance, EncodeError> {
    let mut soft = Vec::new();
    for (x, a) in &o.terms {
        if !a.is_positive() {
            return Err(EncodeError::Invalid(format!("weight of {} must be positive, got {}", x, a)));
        }
        soft.push((Formula::not(Formula::prop(x)), a.clone()));
    }
    Ok(MaxSmtInstance { hard: o.constraint.clone(), soft })
}

/// Description file for a propositional PB objective.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PbFile {
    pub terms: Vec<(String, String)>,
    #[serde(default)]
    pub clauses: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoftClause {
    pub clause: Vec<String>,
    pub weight: String,
}

/// Description file for a propositional MaxSMT instance.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxSmtFile {
    #[serde(default)]
    pub hard: Vec<Vec<String>>,
    #[serde(default)]
    pub soft: Vec<SoftClause>,
}

fn clauses_formula(cs: &[Vec<String>]) -> Formula {
    Formula::and(cs.iter().map(|c| Formula::or(c.iter().map(|l| prop_literal(l)).collect())).collect())
}

impl PbFile {
    pub fn to_objective(&self) -> Result<PbObjective, EncodeError> {
        let terms = self.terms.iter().map(|(x, w)| Ok((x.clone(), parse(w)?))).collect::<Result<_, EncodeError>>()?;
        Ok(PbObjective { terms, constraint: clauses_formula(&self.clauses) })
    }
}

impl MaxSmtFile {
    pub fn to_instance(&self) -> Result<MaxSmtInstance, EncodeError> {
        let soft = self
            .soft
            .iter()
            .map(|s| Ok((clauses_formula(std::slice::from_ref(&s.clause)), parse(&s.weight)?)))
            .collect::<Result<_, EncodeError>>()?;
        Ok(MaxSmtInstance { hard: clauses_formula(&self.hard), soft })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::omt::{omt_inline, Strategy};

    fn optimum(p: &OmtProblem) -> Rational {
        let r = omt_inline(p, Strategy::Linear).unwrap();
        let v = r.outcome.value().cloned().expect("optimum");
        assert_eq!(v.delta, Rational::zero());
        v.real
    }

    fn two_case(ub: i64) -> LgdpModel {
        LgdpModel {
            vars: vec![VarDecl { name: "x".into(), ub: ub.to_string() }],
            d: BTreeMap::new(),
            common: vec![],
            disjunctions: vec![Disjunction {
                z: "z1".into(),
                disjuncts: vec![
                    Disjunct { label: "Y1".into(), rows: vec![Row::new(&[("x", int(-1))], int(-3))], charge: "2".into() },
                    Disjunct { label: "Y2".into(), rows: vec![Row::new(&[("x", int(-1))], int(0))], charge: "5".into() },
                ],
            }],
            prop_cnf: vec![],
        }
    }

    #[test]
    fn lgdp_examples() {
        let e = encode_lgdp(&two_case(2)).unwrap();
        assert_eq!(optimum(&e.problem), int(5));
        let e = encode_lgdp(&two_case(4)).unwrap();
        assert_eq!(optimum(&e.problem), int(2));
        let pure = LgdpModel {
            vars: vec![VarDecl { name: "x".into(), ub: "100".into() }],
            d: BTreeMap::from([("x".to_string(), "1".to_string())]),
            common: vec![Row::new(&[("x", int(-1))], int(-7))],
            ..Default::default()
        };
        assert_eq!(optimum(&encode_lgdp(&pure).unwrap().problem), int(7));

        let mut bad = two_case(2);
        bad.disjunctions[0].disjuncts.pop();
        assert!(matches!(encode_lgdp(&bad), Err(EncodeError::Invalid(_))));
    }

    #[test]
    fn pb_examples() {
        let c = Formula::or(vec![Formula::prop("X1"), Formula::prop("X2")]);
        let o = PbObjective { terms: vec![("X1".into(), int(2)), ("X2".into(), int(3))], constraint: c.clone() };
        assert_eq!(optimum(&encode_pb(&o).unwrap()), int(2));
        let o = PbObjective { terms: vec![("X1".into(), int(1))], constraint: Formula::True };
        assert_eq!(optimum(&encode_pb(&o).unwrap()), int(0));
        let o = PbObjective { terms: vec![("X1".into(), int(-1))], constraint: Formula::True };
        assert_eq!(optimum(&encode_pb(&o).unwrap()), int(-1));
    }

    #[test]
    fn maxsmt_examples() {
        let a = || Formula::prop("A");
        let m = MaxSmtInstance { hard: Formula::True, soft: vec![(a(), int(2)), (Formula::not(a()), int(3))] };
        assert_eq!(optimum(&encode_maxsmt(&m).unwrap().problem), int(2));
        let m = MaxSmtInstance { hard: Formula::not(a()), soft: vec![(a(), int(5))] };
        assert_eq!(optimum(&encode_maxsmt(&m).unwrap().problem), int(5));
        let m = MaxSmtInstance { hard: a(), soft: vec![(a(), int(5))] };
        assert_eq!(optimum(&encode_maxsmt(&m).unwrap().problem), int(0));

        let o = PbObjective { terms: vec![("X1".into(), int(2))], constraint: Formula::True };
        let back = pb_to_maxsmt(&o).unwrap();
        assert_eq!(optimum(&encode_maxsmt(&back).unwrap().problem), int(0));
        let o = PbObjective { terms: vec![("X1".into(), int(0))], constraint: Formula::True };
        assert!(pb_to_maxsmt(&o).is_err());
    }

    #[test]
    fn generator_examples() {
        let unit = vec![(int(1), int(1)), (int(1), int(1))];
        assert_eq!(optimum(&encode_lgdp(&strip_packing_model(&unit, &int(1))).unwrap().problem), int(2));
        assert_eq!(optimum(&encode_lgdp(&strip_packing_model(&unit, &int(2))).unwrap().problem), int(1));
        assert_eq!(optimum(&encode_lgdp(&strip_packing_model(&[(int(3), int(1))], &int(1))).unwrap().problem), int(3));

        let one_machine = vec![vec![(0, int(2))], vec![(0, int(3))]];
        assert_eq!(optimum(&encode_lgdp(&jobshop_model(&one_machine)).unwrap().problem), int(5));
        let chain = vec![vec![(0, int(2)), (1, int(3))]];
        assert_eq!(optimum(&encode_lgdp(&jobshop_model(&chain)).unwrap().problem), int(5));
        let disjoint = vec![vec![(0, int(2))], vec![(1, int(3))]];
        assert_eq!(optimum(&encode_lgdp(&jobshop_model(&disjoint)).unwrap().problem), int(3));

        assert_eq!(gen_strip_packing(3, &int(3), 7), gen_strip_packing(3, &int(3), 7));
        assert_eq!(gen_jobshop(2, 2, 7), gen_jobshop(2, 2, 7));
    }
}
