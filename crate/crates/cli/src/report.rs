//! Line-oriented run report: one `key: value` per line in a fixed order.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use omt_core::arith::{fmt_pq, parse_rational, DeltaRational, Rational};
use omt_core::omt::{Model, OmtConfig, OmtResult, Outcome, Schema, Strategy};

use crate::problem::{Objective, ProblemFile, Sort};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Unsat,
    Unbounded,
    Timeout,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::Unsat => "unsat",
            Status::Unbounded => "unbounded",
            Status::Timeout => "timeout",
        }
    }

    fn parse(s: &str) -> Option<Status> {
        Some(match s {
            "optimal" => Status::Optimal,
            "unsat" => Status::Unsat,
            "unbounded" => Status::Unbounded,
            "timeout" => Status::Timeout,
            _ => return None,
        })
    }
}

/// Objective as printed: in the direction of the problem file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObjValue {
    PosInf,
    NegInf,
    /// Value and whether it is a strict bound rather than attained.
    Finite(Rational, bool),
    None,
}

impl ObjValue {
    pub fn render(&self) -> String {
        match self {
            ObjValue::PosInf => "+inf".into(),
            ObjValue::NegInf => "-inf".into(),
            ObjValue::Finite(v, false) => fmt_pq(v),
            ObjValue::Finite(v, true) => format!("{} (strict)", fmt_pq(v)),
            ObjValue::None => "none".into(),
        }
    }

    fn parse(s: &str) -> Option<ObjValue> {
        Some(match s {
            "+inf" => ObjValue::PosInf,
            "-inf" => ObjValue::NegInf,
            "none" => ObjValue::None,
            _ => match s.strip_suffix(" (strict)") {
                Some(v) => ObjValue::Finite(parse_rational(v)?, true),
                None => ObjValue::Finite(parse_rational(s)?, false),
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportStats {
    pub smt_calls: u64,
    pub minimize_calls: u64,
    pub conflicts: u64,
    pub time_ms: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunReport {
    pub status: Status,
    pub objective: ObjValue,
    pub algorithm: Schema,
    pub search: Strategy,
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
    pub seed: Option<u64>,
    /// Declared constants in declaration order, values already rendered.
    pub model: Vec<(String, String)>,
    pub stats: Option<ReportStats>,
    pub cost_interface: bool,
}

pub fn schema_name(s: Schema) -> &'static str {
    match s {
        Schema::Offline => "offline",
        Schema::Inline => "inline",
    }
}

pub fn strategy_name(s: Strategy) -> &'static str {
    match s {
        Strategy::Linear => "lin",
        Strategy::Binary => "bin",
        Strategy::Adaptive => "ada",
    }
}

pub fn parse_schema(s: &str) -> Option<Schema> {
    match s {
        "offline" => Some(Schema::Offline),
        "inline" => Some(Schema::Inline),
        _ => None,
    }
}

pub fn parse_strategy(s: &str) -> Option<Strategy> {
    match s {
        "lin" => Some(Strategy::Linear),
        "bin" => Some(Strategy::Binary),
        "ada" => Some(Strategy::Adaptive),
        _ => None,
    }
}

fn opt_rat(r: &Option<Rational>) -> String {
    r.as_ref().map_or("none".into(), fmt_pq)
}

fn model_lines(pf: &ProblemFile, model: Option<&Model>) -> Vec<(String, String)> {
    let Some(m) = model else { return Vec::new() };
    pf.model_symbols()
        .into_iter()
        .map(|(n, s)| {
            let v = match s {
                Sort::Real => fmt_pq(&m.real(n)),
                Sort::Bool => m.bools.get(n).copied().unwrap_or(false).to_string(),
            };
            (n.to_string(), v)
        })
        .collect()
}

impl RunReport {
    /// Translates a solver result on `pf.to_problem()` back to the file's objective direction.
    pub fn from_result(pf: &ProblemFile, cfg: &OmtConfig, r: &OmtResult, with_stats: bool) -> RunReport {
        let maximize = matches!(pf.objective, Objective::Maximize(_));
        let flip = |v: &DeltaRational| {
            let strict = v.delta.is_positive();
            ObjValue::Finite(if maximize { -v.real.clone() } else { v.real.clone() }, strict)
        };
        let (status, objective, model) = match &r.outcome {
            Outcome::Optimum { value, model } => (Status::Optimal, flip(value), Some(model)),
            Outcome::Unsat => (Status::Unsat, if maximize { ObjValue::NegInf } else { ObjValue::PosInf }, None),
            Outcome::Unbounded { model } => (Status::Unbounded, if maximize { ObjValue::PosInf } else { ObjValue::NegInf }, Some(model)),
            Outcome::Timeout { best } => match best {
                Some((v, m)) => (Status::Timeout, flip(v), Some(m)),
                None => (Status::Timeout, ObjValue::None, None),
            },
        };
        let stats = with_stats.then(|| ReportStats {
            smt_calls: r.stats.smt_calls,
            minimize_calls: r.stats.minimize_calls,
            conflicts: r.stats.conflicts,
            time_ms: r.stats.elapsed.as_millis(),
        });
        RunReport {
            status,
            objective,
            algorithm: cfg.schema,
            search: cfg.strategy,
            lower: pf.lower.clone(),
            upper: pf.upper.clone(),
            seed: cfg.seed,
            model: model_lines(pf, model),
            stats,
            cost_interface: r.cost_is_interface,
        }
    }

    /// Optimum of the minimization problem produced by `pf.to_problem()`.
    pub fn solver_value(&self, pf: &ProblemFile) -> Option<DeltaRational> {
        let ObjValue::Finite(v, strict) = &self.objective else { return None };
        let real = if matches!(pf.objective, Objective::Maximize(_)) { -v.clone() } else { v.clone() };
        let delta = if *strict { Rational::one() } else { Rational::zero() };
        Some(DeltaRational::new(real, delta))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: &str| {
            let _ = writeln!(out, "{}: {}", k, v);
        };
        line("status", self.status.as_str());
        line("objective", &self.objective.render());
        line("algorithm", schema_name(self.algorithm));
        line("search", strategy_name(self.search));
        line("lower-bound", &opt_rat(&self.lower));
        line("upper-bound", &opt_rat(&self.upper));
        line("seed", &self.seed.map_or("none".into(), |s| s.to_string()));
        for (n, v) in &self.model {
            line(&format!("model.{}", n), v);
        }
        if let Some(s) = &self.stats {
            line("smt-calls", &s.smt_calls.to_string());
            line("minimize-calls", &s.minimize_calls.to_string());
            line("conflicts", &s.conflicts.to_string());
            line("time-ms", &s.time_ms.to_string());
        }
        if self.cost_interface {
            line("cost-interface", "true");
        }
        out
    }

    pub fn parse(text: &str) -> Result<RunReport, String> {
        let mut fields: Vec<(&str, &str)> = Vec::new();
        for (i, l) in text.lines().enumerate() {
            if l.trim().is_empty() {
                continue;
            }
            let Some((k, v)) = l.split_once(": ") else {
                return Err(format!("line {}: expected `key: value`", i + 1));
            };
            fields.push((k, v.trim()));
        }
        let get = |k: &str| fields.iter().find(|(key, _)| *key == k).map(|(_, v)| *v).ok_or_else(|| format!("missing `{}`", k));
        let bound = |k: &str| -> Result<Option<Rational>, String> {
            match get(k)? {
                "none" => Ok(None),
                v => parse_rational(v).map(Some).ok_or_else(|| format!("bad rational in `{}`", k)),
            }
        };
        let num = |k: &str| -> Result<Option<u128>, String> {
            match fields.iter().find(|(key, _)| *key == k) {
                None => Ok(None),
                Some((_, v)) => v.parse().map(Some).map_err(|_| format!("bad number in `{}`", k)),
            }
        };
        let status = Status::parse(get("status")?).ok_or("bad `status`")?;
        let objective = ObjValue::parse(get("objective")?).ok_or("bad `objective`")?;
        let algorithm = parse_schema(get("algorithm")?).ok_or("bad `algorithm`")?;
        let search = parse_strategy(get("search")?).ok_or("bad `search`")?;
        let seed = match get("seed")? {
            "none" => None,
            s => Some(s.parse().map_err(|_| "bad `seed`")?),
        };
        let model = fields
            .iter()
            .filter_map(|(k, v)| k.strip_prefix("model.").map(|n| (n.to_string(), v.to_string())))
            .collect();
        let stats = match (num("smt-calls")?, num("minimize-calls")?, num("conflicts")?, num("time-ms")?) {
            (Some(a), Some(b), Some(c), Some(t)) => Some(ReportStats { smt_calls: a as u64, minimize_calls: b as u64, conflicts: c as u64, time_ms: t }),
            (None, None, None, None) => None,
            _ => return Err("incomplete statistics".into()),
        };
        Ok(RunReport {
            status,
            objective,
            algorithm,
            search,
            lower: bound("lower-bound")?,
            upper: bound("upper-bound")?,
            seed,
            model,
            stats,
            cost_interface: get("cost-interface").map_or(false, |v| v == "true"),
        })
    }

    /// Rendering without the timing line, for comparisons across runs.
    pub fn render_untimed(&self) -> String {
        let mut r = self.clone();
        if let Some(s) = &mut r.stats {
            s.time_ms = 0;
        }
        r.render()
    }
}
