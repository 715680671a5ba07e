//! Independent confirmation of a reported optimum with two fresh satisfiability checks.

use num_traits::Signed;

use crate::arith::{min_positive_gap, rat, DeltaRational, Rational};
use crate::ast::{Atom, Cmp, Formula};

use super::{smt_check, OmtError, OmtProblem, OmtResult, Outcome, SmtOutcome};

/// Verdict of one check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    /// The formula shape that was checked, e.g. `phi and cost < 3`.
    pub query: String,
    pub expected_sat: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// Nothing cheaper is feasible.
    pub below: Check,
    /// The value (or, for a strict optimum, a point just above it) is feasible.
    pub attained: Check,
    /// Offset used for a strict optimum.
    pub epsilon: Option<Rational>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.below.passed && self.attained.passed
    }
}

/// Cap on the offset above a strict optimum.
pub fn epsilon_cap() -> Rational {
    rat(1, 1_000_000)
}

/// Number of times the offset is halved before the feasibility check gives up.
const HALVINGS: usize = 24;

/// Half the distance from `m` to the nearest other constant in the problem, capped.
pub fn strict_epsilon(p: &OmtProblem, m: &Rational) -> Rational {
    let mut consts = Vec::new();
    p.bounded_formula().visit_atoms(&mut |a| {
        if let Atom::Lra(l) = a {
            consts.push(l.rhs());
        }
    });
    let cap = epsilon_cap();
    match min_positive_gap(m, consts.iter()) {
        Some(g) => {
            let half = g / Rational::from_integer(2.into());
            if half < cap {
                half
            } else {
                cap
            }
        }
        None => cap,
    }
}

fn holds(phi: &Formula, expected_sat: bool) -> Result<bool, OmtError> {
    match smt_check(phi)? {
        SmtOutcome::Sat(_) => Ok(expected_sat),
        SmtOutcome::Unsat => Ok(!expected_sat),
        SmtOutcome::Unknown => Ok(false),
    }
}

/// Checks that `value` is the minimum of `p`: for a non-strict `m`, `cost < m` is
/// unsatisfiable and `cost = m` satisfiable; for a strict `m`, `cost ≤ m` is
/// unsatisfiable and `cost = m + ε` satisfiable for a small positive `ε`.
pub fn certify_value(p: &OmtProblem, value: &DeltaRational) -> Result<Certificate, OmtError> {
    let phi = p.bounded_formula();
    let m = &value.real;
    let cost = &p.cost;
    let with = |op: Cmp, c: &Rational| Formula::and(vec![phi.clone(), Formula::var_cmp(cost, op, c.clone())]);
    if value.delta.is_positive() {
        let below = Check { query: format!("phi and {} <= {}", cost, m), expected_sat: false, passed: holds(&with(Cmp::Le, m), false)? };
        let mut eps = strict_epsilon(p, m);
        let mut passed = false;
        for _ in 0..HALVINGS {
            if holds(&with(Cmp::Eq, &(m + &eps)), true)? {
                passed = true;
                break;
            }
            eps /= Rational::from_integer(2.into());
        }
        if !passed {
            eps = strict_epsilon(p, m);
        }
        let attained = Check { query: format!("phi and {} = {} + {}", cost, m, eps), expected_sat: true, passed };
        Ok(Certificate { below, attained, epsilon: Some(eps) })
    } else {
        let below = Check { query: format!("phi and {} < {}", cost, m), expected_sat: false, passed: holds(&with(Cmp::Lt, m), false)? };
        let attained = Check { query: format!("phi and {} = {}", cost, m), expected_sat: true, passed: holds(&with(Cmp::Eq, m), true)? };
        Ok(Certificate { below, attained, epsilon: None })
    }
}

pub fn certify(p: &OmtProblem, r: &OmtResult) -> Result<Certificate, OmtError> {
    match &r.outcome {
        Outcome::Optimum { value, .. } => certify_value(p, value),
        _ => Err(OmtError::NotOptimum),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    #[test]
    fn certify_examples() {
        let p = OmtProblem::new(Formula::var_cmp("cost", Cmp::Ge, int(3)), "cost");
        assert!(certify_value(&p, &DeltaRational::from_rational(int(3))).unwrap().passed());
        let c = certify_value(&p, &DeltaRational::from_rational(int(2))).unwrap();
        assert!(c.below.passed);
        assert!(!c.attained.passed);

        let strict = Formula::and(vec![Formula::var_cmp("cost", Cmp::Gt, int(2)), Formula::var_cmp("cost", Cmp::Le, int(3))]);
        let p = OmtProblem::new(strict, "cost");
        let c = certify_value(&p, &DeltaRational::new(int(2), int(1))).unwrap();
        assert!(c.passed());
        assert!(c.epsilon.is_some());
    }
}
