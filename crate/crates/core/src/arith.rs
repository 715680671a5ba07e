//! Exact rationals and the delta-rational pairs used for strict bounds.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Builds `n/d`. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p`, `p/q` or a decimal such as `-2.75`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let digits = whole.trim_start_matches(['-', '+']);
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let mut joined = String::with_capacity(digits.len() + frac.len());
        joined.push_str(if digits.is_empty() { "0" } else { digits });
        joined.push_str(frac);
        let mut n: BigInt = joined.parse().ok()?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Some(Rational::new(n, d));
    }
    let n: BigInt = text.parse().ok()?;
    Some(Rational::from_integer(n))
}

/// Always prints `p/q`, even when `q` is one.
pub fn fmt_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Value `real + delta·ε` for a symbolic positive infinitesimal ε.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DeltaRational {
    /// Standard part.
    pub real: Rational,
    /// Coefficient of ε.
    pub delta: Rational,
}

impl DeltaRational {
    pub fn new(real: Rational, delta: Rational) -> Self {
        DeltaRational { real, delta }
    }

    pub fn from_rational(real: Rational) -> Self {
        DeltaRational { real, delta: Rational::zero() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.real.is_zero() && self.delta.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        DeltaRational { real: &self.real * c, delta: &self.delta * c }
    }

    /// Value obtained by fixing ε to a concrete rational.
    pub fn concretize(&self, eps: &Rational) -> Rational {
        &self.real + &self.delta * eps
    }
}

/// Lexicographic comparison on (real, delta).
pub fn delta_compare(a: &DeltaRational, b: &DeltaRational) -> Ordering {
    a.cmp(b)
}

/// `a + c·b`, componentwise.
pub fn delta_combine(a: &DeltaRational, c: &Rational, b: &DeltaRational) -> DeltaRational {
    DeltaRational { real: &a.real + c * &b.real, delta: &a.delta + c * &b.delta }
}

impl Add for &DeltaRational {
    type Output = DeltaRational;
    fn add(self, o: &DeltaRational) -> DeltaRational {
        DeltaRational { real: &self.real + &o.real, delta: &self.delta + &o.delta }
    }
}

impl Sub for &DeltaRational {
    type Output = DeltaRational;
    fn sub(self, o: &DeltaRational) -> DeltaRational {
        DeltaRational { real: &self.real - &o.real, delta: &self.delta - &o.delta }
    }
}

impl Mul<&Rational> for &DeltaRational {
    type Output = DeltaRational;
    fn mul(self, c: &Rational) -> DeltaRational {
        self.scale(c)
    }
}

impl Neg for &DeltaRational {
    type Output = DeltaRational;
    fn neg(self) -> DeltaRational {
        DeltaRational { real: -&self.real, delta: -&self.delta }
    }
}

impl fmt::Display for DeltaRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.delta.is_zero() {
            write!(f, "{}", self.real)
        } else {
            write!(f, "{} + {}*eps", self.real, self.delta)
        }
    }
}

/// Largest safe ε for a family of ordered pairs `lo ≤ hi`: for every `0 < ε ≤ result`,
/// concretizing both sides keeps each pair ordered (strictly when `lo < hi`).
pub fn epsilon_for_pairs<'a, I>(pairs: I) -> Rational
where
    I: IntoIterator<Item = (&'a DeltaRational, &'a DeltaRational)>,
{
    let mut eps = Rational::one();
    for (lo, hi) in pairs {
        if lo.real < hi.real && lo.delta > hi.delta {
            // need ε·(lo.δ − hi.δ) < hi.r − lo.r
            let limit = (&hi.real - &lo.real) / (&lo.delta - &hi.delta);
            let half = limit / int(2);
            if half < eps {
                eps = half;
            }
        }
    }
    eps
}

/// A rational ε₀ > 0 such that for every 0 < ε ≤ ε₀ the concrete values of `values`
/// are ordered exactly as `delta_compare` orders them.
pub fn concretization_epsilon(values: &[DeltaRational]) -> Rational {
    let mut sorted: Vec<&DeltaRational> = values.iter().collect();
    sorted.sort();
    sorted.dedup();
    epsilon_for_pairs(sorted.windows(2).map(|w| (w[0], w[1])))
}

/// Smallest positive distance between `x` and any element of `others`.
pub fn min_positive_gap<'a, I>(x: &Rational, others: I) -> Option<Rational>
where
    I: IntoIterator<Item = &'a Rational>,
{
    others
        .into_iter()
        .map(|c| (c - x).abs())
        .filter(|g| g.is_positive())
        .min()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(r: i64, e: i64) -> DeltaRational {
        DeltaRational::new(int(r), int(e))
    }

    #[test]
    fn compare_examples() {
        assert_eq!(delta_compare(&d(2, 0), &d(2, -1)), Ordering::Greater);
        assert_eq!(delta_compare(&d(1, 5), &d(2, -100)), Ordering::Less);
        assert_eq!(delta_compare(&d(3, 0), &d(3, 0)), Ordering::Equal);
    }

    #[test]
    fn combine_examples() {
        assert_eq!(delta_combine(&d(1, 0), &int(2), &d(0, 1)), d(1, 2));
        assert_eq!(delta_combine(&d(0, 0), &int(0), &d(7, -3)), d(0, 0));
        let half = DeltaRational::new(rat(1, 2), int(1));
        assert_eq!(delta_combine(&half, &int(-1), &half), d(0, 0));
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(parse_rational("3"), Some(int(3)));
        assert_eq!(parse_rational("-6/4"), Some(rat(-3, 2)));
        assert_eq!(parse_rational("2.75"), Some(rat(11, 4)));
        assert_eq!(parse_rational("-0.5"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(int(3).to_string(), "3");
        assert_eq!(rat(-3, 2).to_string(), "-3/2");
        assert_eq!(fmt_pq(&int(3)), "3/1");
        assert_eq!(d(2, 0).to_string(), "2");
        assert_eq!(DeltaRational::new(rat(1, 2), int(-1)).to_string(), "1/2 + -1*eps");
    }

    #[test]
    fn epsilon_keeps_order() {
        let vals = vec![d(0, 5), d(1, -3), d(1, 0), DeltaRational::new(rat(1, 10), int(0))];
        let eps = concretization_epsilon(&vals);
        assert!(eps.is_positive());
        let mut sorted = vals.clone();
        sorted.sort();
        for w in sorted.windows(2) {
            assert!(w[0].concretize(&eps) < w[1].concretize(&eps));
        }
    }
}
