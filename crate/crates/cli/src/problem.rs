//! Problem files: an s-expression subset of SMT-LIB with an objective directive.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use omt_core::arith::{fmt_pq, parse_rational, Rational};
use omt_core::ast::{Atom, Cmp, FreshNames, Formula, LinAtom, Linear, Rel, Term};
use omt_core::omt::OmtProblem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sort {
    Real,
    Bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Const(String, Sort),
    /// Function from `arity` reals to a real.
    Fun(String, usize),
}

impl Decl {
    pub fn name(&self) -> &str {
        match self {
            Decl::Const(n, _) | Decl::Fun(n, _) => n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Objective {
    Minimize(String),
    Maximize(String),
}

impl Objective {
    pub fn var(&self) -> &str {
        match self {
            Objective::Minimize(v) | Objective::Maximize(v) => v,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub decls: Vec<Decl>,
    pub assertions: Vec<Formula>,
    pub objective: Objective,
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

#[derive(Clone, Debug)]
enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

fn err<T>(p: Pos, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line: p.line, col: p.col, msg: msg.into() })
}

fn read_sexps(text: &str) -> Result<Vec<Sexp>, ParseError> {
    let mut stack: Vec<(Vec<Sexp>, Pos)> = Vec::new();
    let mut top = Vec::new();
    let (mut line, mut col) = (1, 0);
    let mut chars = text.chars().peekable();
    let mut word = String::new();
    let mut word_pos = Pos { line: 1, col: 1 };
    fn flush(word: &mut String, pos: Pos, stack: &mut [(Vec<Sexp>, Pos)], top: &mut Vec<Sexp>) {
        if !word.is_empty() {
            let a = Sexp::Atom(std::mem::take(word), pos);
            match stack.last_mut() {
                Some((v, _)) => v.push(a),
                None => top.push(a),
            }
        }
    }
    while let Some(c) = chars.next() {
        col += 1;
        let here = Pos { line, col };
        match c {
            '\n' => {
                flush(&mut word, word_pos, &mut stack, &mut top);
                line += 1;
                col = 0;
            }
            ';' => {
                flush(&mut word, word_pos, &mut stack, &mut top);
                while let Some(&d) = chars.peek() {
                    if d == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '(' => {
                flush(&mut word, word_pos, &mut stack, &mut top);
                stack.push((Vec::new(), here));
            }
            ')' => {
                flush(&mut word, word_pos, &mut stack, &mut top);
                let Some((items, p)) = stack.pop() else {
                    return err(here, "unbalanced `)`");
                };
                let l = Sexp::List(items, p);
                match stack.last_mut() {
                    Some((v, _)) => v.push(l),
                    None => top.push(l),
                }
            }
            c if c.is_whitespace() => flush(&mut word, word_pos, &mut stack, &mut top),
            c => {
                if word.is_empty() {
                    word_pos = here;
                }
                word.push(c);
            }
        }
    }
    flush(&mut word, word_pos, &mut stack, &mut top);
    if let Some((_, p)) = stack.last() {
        return err(*p, "unclosed `(`");
    }
    Ok(top)
}

const BOOL_HEADS: &[&str] = &["not", "and", "or", "=>", "xor", "=", "distinct", "<=", "<", ">=", ">", "ite"];
const IGNORED: &[&str] = &["set-logic", "set-info", "set-option", "check-sat", "get-model", "get-value", "get-objectives", "exit"];

struct Parser {
    sorts: HashMap<String, Decl>,
}

impl Parser {
    fn is_bool(&self, s: &Sexp) -> bool {
        match s {
            Sexp::Atom(a, _) => a == "true" || a == "false" || matches!(self.sorts.get(a), Some(Decl::Const(_, Sort::Bool))),
            Sexp::List(items, _) => matches!(items.first(), Some(Sexp::Atom(h, _)) if BOOL_HEADS.contains(&h.as_str())),
        }
    }

    fn formula(&self, s: &Sexp) -> Result<Formula, ParseError> {
        match s {
            Sexp::Atom(a, p) => match a.as_str() {
                "true" => Ok(Formula::True),
                "false" => Ok(Formula::False),
                _ => match self.sorts.get(a) {
                    Some(Decl::Const(_, Sort::Bool)) => Ok(Formula::prop(a)),
                    Some(_) => err(*p, format!("`{}` is not Boolean", a)),
                    None => err(*p, format!("undeclared symbol `{}`", a)),
                },
            },
            Sexp::List(items, p) => {
                let Some(Sexp::Atom(head, hp)) = items.first() else {
                    return err(*p, "expected an operator");
                };
                let args = &items[1..];
                let fs = || args.iter().map(|a| self.formula(a)).collect::<Result<Vec<_>, _>>();
                let need = |n: usize| if args.len() == n { Ok(()) } else { err(*p, format!("`{}` takes {} arguments", head, n)) };
                let at_least = |n: usize| if args.len() >= n { Ok(()) } else { err(*p, format!("`{}` takes at least {} arguments", head, n)) };
                match head.as_str() {
                    "not" => {
                        need(1)?;
                        Ok(Formula::not(self.formula(&args[0])?))
                    }
                    "and" => Ok(Formula::and(fs()?)),
                    "or" => Ok(Formula::or(fs()?)),
                    "=>" => {
                        at_least(2)?;
                        let mut v = fs()?;
                        let mut acc = v.pop().unwrap();
                        while let Some(a) = v.pop() {
                            acc = Formula::implies(a, acc);
                        }
                        Ok(acc)
                    }
                    "xor" => {
                        need(2)?;
                        let v = fs()?;
                        Ok(Formula::not(Formula::iff(v[0].clone(), v[1].clone())))
                    }
                    "ite" => {
                        need(3)?;
                        let v = fs()?;
                        Ok(Formula::and(vec![
                            Formula::implies(v[0].clone(), v[1].clone()),
                            Formula::implies(Formula::not(v[0].clone()), v[2].clone()),
                        ]))
                    }
                    "=" if args.first().map_or(false, |a| self.is_bool(a)) => {
                        at_least(2)?;
                        let v = fs()?;
                        Ok(Formula::and(v.windows(2).map(|w| Formula::iff(w[0].clone(), w[1].clone())).collect()))
                    }
                    "=" | "<=" | "<" | ">=" | ">" => {
                        at_least(2)?;
                        let op = match head.as_str() {
                            "=" => Cmp::Eq,
                            "<=" => Cmp::Le,
                            "<" => Cmp::Lt,
                            ">=" => Cmp::Ge,
                            _ => Cmp::Gt,
                        };
                        let ts = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                        Ok(Formula::and(ts.windows(2).map(|w| Formula::compare(w[0].clone(), op, w[1].clone())).collect()))
                    }
                    "distinct" => {
                        at_least(2)?;
                        let ts = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                        let mut v = Vec::new();
                        for i in 0..ts.len() {
                            for j in i + 1..ts.len() {
                                v.push(Formula::compare(ts[i].clone(), Cmp::Ne, ts[j].clone()));
                            }
                        }
                        Ok(Formula::and(v))
                    }
                    other => match self.sorts.get(other) {
                        Some(_) => err(*hp, format!("`{}` is not a Boolean operator", other)),
                        None => err(*hp, format!("unknown operator `{}`", other)),
                    },
                }
            }
        }
    }

    fn constant(&self, s: &Sexp) -> Result<Option<Rational>, ParseError> {
        Ok(match self.term(s)? {
            Term::Const(c) => Some(c),
            _ => None,
        })
    }

    fn term(&self, s: &Sexp) -> Result<Term, ParseError> {
        match s {
            Sexp::Atom(a, p) => {
                if let Some(r) = parse_rational(a) {
                    return Ok(Term::Const(r));
                }
                match self.sorts.get(a) {
                    Some(Decl::Const(_, Sort::Real)) => Ok(Term::var(a)),
                    Some(Decl::Const(_, Sort::Bool)) => err(*p, format!("`{}` is Boolean, expected a real term", a)),
                    Some(Decl::Fun(_, n)) => err(*p, format!("`{}` expects {} arguments", a, n)),
                    None => err(*p, format!("undeclared symbol `{}`", a)),
                }
            }
            Sexp::List(items, p) => {
                let Some(Sexp::Atom(head, hp)) = items.first() else {
                    return err(*p, "expected an operator");
                };
                let args = &items[1..];
                let ts = || args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>();
                let one = Rational::one();
                match head.as_str() {
                    "+" => Ok(Term::sum(ts()?.into_iter().map(|t| (one.clone(), t)).collect(), Rational::zero())),
                    "-" => {
                        let v = ts()?;
                        match v.len() {
                            0 => err(*p, "`-` needs an argument"),
                            1 => Ok(Term::scale(-one, v[0].clone())),
                            _ => {
                                let mut items = vec![(one.clone(), v[0].clone())];
                                items.extend(v[1..].iter().map(|t| (-one.clone(), t.clone())));
                                Ok(Term::sum(items, Rational::zero()))
                            }
                        }
                    }
                    "*" => {
                        let mut factor = one;
                        let mut rest: Option<Term> = None;
                        for a in args {
                            match self.constant(a)? {
                                Some(c) => factor *= c,
                                None if rest.is_none() => rest = Some(self.term(a)?),
                                None => return err(a.pos(), "nonlinear product"),
                            }
                        }
                        Ok(match rest {
                            Some(t) => Term::scale(factor, t),
                            None => Term::Const(factor),
                        })
                    }
                    "/" => {
                        if args.len() != 2 {
                            return err(*p, "`/` takes 2 arguments");
                        }
                        match self.constant(&args[1])? {
                            Some(d) if !d.is_zero() => Ok(Term::scale(one / d, self.term(&args[0])?)),
                            Some(_) => err(args[1].pos(), "division by zero"),
                            None => err(args[1].pos(), "division by a non-constant"),
                        }
                    }
                    f => match self.sorts.get(f) {
                        Some(Decl::Fun(_, n)) => {
                            if args.len() != *n {
                                return err(*hp, format!("`{}` expects {} arguments, got {}", f, n, args.len()));
                            }
                            Ok(Term::app(f, ts()?))
                        }
                        Some(_) => err(*hp, format!("`{}` is not a function", f)),
                        None if BOOL_HEADS.contains(&f) => err(*hp, format!("`{}` is Boolean, expected a real term", f)),
                        None => err(*hp, format!("undeclared symbol `{}`", f)),
                    },
                }
            }
        }
    }
}

fn atom_text(s: &Sexp) -> Option<&str> {
    match s {
        Sexp::Atom(a, _) => Some(a),
        _ => None,
    }
}

fn sort_of(s: &Sexp) -> Result<Sort, ParseError> {
    match atom_text(s) {
        Some("Real") => Ok(Sort::Real),
        Some("Bool") => Ok(Sort::Bool),
        _ => err(s.pos(), "unsupported sort; use Real or Bool"),
    }
}

fn bound_value(p: &Parser, s: &Sexp) -> Result<Rational, ParseError> {
    match p.constant(s) {
        Ok(Some(c)) => Ok(c),
        _ => err(s.pos(), "expected a rational constant"),
    }
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, ParseError> {
    let mut parser = Parser { sorts: HashMap::new() };
    let mut decls = Vec::new();
    let mut assertions = Vec::new();
    let mut objective = None;
    let mut lower = None;
    let mut upper = None;
    let mut end = Pos { line: 1, col: 1 };
    for cmd in read_sexps(text)? {
        end = cmd.pos();
        let Sexp::List(items, p) = &cmd else {
            return err(cmd.pos(), "expected a command in parentheses");
        };
        let Some(head) = items.first().and_then(atom_text) else {
            return err(*p, "expected a command name");
        };
        let args = &items[1..];
        match head {
            "declare-fun" | "declare-const" => {
                let (name, params, sort) = match (head, args) {
                    ("declare-fun", [n, Sexp::List(ps, _), s]) => (n, ps.as_slice(), s),
                    ("declare-const", [n, s]) => (n, &[][..], s),
                    _ => return err(*p, format!("malformed `{}`", head)),
                };
                let Some(name_text) = atom_text(name).filter(|n| parse_rational(n).is_none()) else {
                    return err(name.pos(), "expected a symbol");
                };
                if parser.sorts.contains_key(name_text) || BOOL_HEADS.contains(&name_text) || ["+", "-", "*", "/", "true", "false"].contains(&name_text) {
                    return err(name.pos(), format!("`{}` is already declared or reserved", name_text));
                }
                let result = sort_of(sort)?;
                let decl = if params.is_empty() {
                    Decl::Const(name_text.to_string(), result)
                } else {
                    for q in params {
                        if sort_of(q)? != Sort::Real {
                            return err(q.pos(), "function arguments must be Real");
                        }
                    }
                    if result != Sort::Real {
                        return err(sort.pos(), "functions must return Real");
                    }
                    Decl::Fun(name_text.to_string(), params.len())
                };
                parser.sorts.insert(name_text.to_string(), decl.clone());
                decls.push(decl);
            }
            "assert" => {
                if args.len() != 1 {
                    return err(*p, "`assert` takes one formula");
                }
                assertions.push(parser.formula(&args[0])?);
            }
            "minimize" | "maximize" => {
                if objective.is_some() {
                    return err(*p, "duplicate objective");
                }
                let [v] = args else {
                    return err(*p, format!("`{}` takes one variable", head));
                };
                let Some(name) = atom_text(v) else {
                    return err(v.pos(), "expected a variable");
                };
                match parser.sorts.get(name) {
                    Some(Decl::Const(_, Sort::Real)) => {}
                    Some(_) => return err(v.pos(), format!("objective `{}` must be a real variable", name)),
                    None => return err(v.pos(), format!("undeclared symbol `{}`", name)),
                }
                objective = Some(if head == "minimize" { Objective::Minimize(name.into()) } else { Objective::Maximize(name.into()) });
            }
            "set-lower-bound" | "set-upper-bound" => {
                let [v] = args else {
                    return err(*p, format!("`{}` takes one value", head));
                };
                let slot = if head == "set-lower-bound" { &mut lower } else { &mut upper };
                if slot.is_some() {
                    return err(*p, format!("duplicate `{}`", head));
                }
                *slot = Some(bound_value(&parser, v)?);
            }
            h if IGNORED.contains(&h) => {}
            other => return err(*p, format!("unknown command `{}`", other)),
        }
    }
    let Some(objective) = objective else {
        return err(end, "missing objective: add (minimize x) or (maximize x)");
    };
    Ok(ProblemFile { decls, assertions, objective, lower, upper })
}

fn num(r: &Rational) -> String {
    let mag = r.abs();
    let body = if mag.is_integer() { mag.numer().to_string() } else { format!("(/ {} {})", mag.numer(), mag.denom()) };
    if r.is_negative() {
        format!("(- {})", body)
    } else {
        body
    }
}

pub fn print_term(t: &Term) -> String {
    match t {
        Term::Var(v) => v.clone(),
        Term::Const(c) => num(c),
        Term::App(f, args) => format!("({} {})", f, args.iter().map(print_term).collect::<Vec<_>>().join(" ")),
        Term::Sum(items, k) => {
            let mut parts: Vec<String> = items
                .iter()
                .map(|(c, t)| if c.is_one() { print_term(t) } else { format!("(* {} {})", num(c), print_term(t)) })
                .collect();
            if !k.is_zero() {
                parts.push(num(k));
            }
            if parts.len() == 1 {
                parts.pop().unwrap()
            } else {
                format!("(+ {})", parts.join(" "))
            }
        }
    }
}

fn print_lin_atom(a: &LinAtom) -> String {
    let op = match a.rel {
        Rel::Le => "<=",
        Rel::Ge => ">=",
        Rel::Eq => "=",
    };
    let lhs = Term::sum(a.expr.var_part().coeffs.iter().map(|(v, c)| (c.clone(), Term::var(v))).collect(), Rational::zero());
    format!("({} {} {})", op, print_term(&lhs), num(&a.rhs()))
}

pub fn print_formula(f: &Formula) -> String {
    let many = |op: &str, v: &[Formula]| format!("({} {})", op, v.iter().map(print_formula).collect::<Vec<_>>().join(" "));
    match f {
        Formula::True => "true".into(),
        Formula::False => "false".into(),
        Formula::Atom(Atom::Prop(p)) => p.clone(),
        Formula::Atom(Atom::Lra(a)) => print_lin_atom(a),
        Formula::Atom(Atom::Euf(l, r)) => format!("(= {} {})", print_term(l), print_term(r)),
        Formula::Atom(Atom::Mixed(l, op, r)) => format!("({} {} {})", op.symbol(), print_term(l), print_term(r)),
        Formula::Not(g) => format!("(not {})", print_formula(g)),
        Formula::And(v) => many("and", v),
        Formula::Or(v) => many("or", v),
        Formula::Implies(a, b) => format!("(=> {} {})", print_formula(a), print_formula(b)),
        Formula::Iff(a, b) => format!("(= {} {})", print_formula(a), print_formula(b)),
    }
}

/// Canonical text; parsing it gives back an identical problem.
pub fn print_problem(pf: &ProblemFile) -> String {
    let mut out = String::new();
    for d in &pf.decls {
        match d {
            Decl::Const(n, Sort::Real) => out += &format!("(declare-fun {} () Real)\n", n),
            Decl::Const(n, Sort::Bool) => out += &format!("(declare-fun {} () Bool)\n", n),
            Decl::Fun(n, k) => out += &format!("(declare-fun {} ({}) Real)\n", n, vec!["Real"; *k].join(" ")),
        }
    }
    for a in &pf.assertions {
        out += &format!("(assert {})\n", print_formula(a));
    }
    match &pf.objective {
        Objective::Minimize(v) => out += &format!("(minimize {})\n", v),
        Objective::Maximize(v) => out += &format!("(maximize {})\n", v),
    }
    if let Some(l) = &pf.lower {
        out += &format!("(set-lower-bound {})\n", fmt_pq(l));
    }
    if let Some(u) = &pf.upper {
        out += &format!("(set-upper-bound {})\n", fmt_pq(u));
    }
    out
}

fn collect_funs(t: &Term, out: &mut BTreeMap<String, usize>) {
    match t {
        Term::App(f, args) => {
            out.insert(f.clone(), args.len());
            args.iter().for_each(|a| collect_funs(a, out));
        }
        Term::Sum(items, _) => items.iter().for_each(|(_, s)| collect_funs(s, out)),
        _ => {}
    }
}

impl ProblemFile {
    /// Declares every symbol of a solver-level problem and minimizes its cost.
    pub fn from_problem(p: &OmtProblem) -> ProblemFile {
        let mut reals = BTreeSet::new();
        let mut bools = BTreeSet::new();
        let mut funs = BTreeMap::new();
        reals.insert(p.cost.clone());
        p.formula.visit_atoms(&mut |a| match a {
            Atom::Prop(n) => {
                bools.insert(n.clone());
            }
            Atom::Lra(_) => reals.extend(a.vars()),
            Atom::Euf(l, r) | Atom::Mixed(l, _, r) => {
                reals.extend(a.vars());
                collect_funs(l, &mut funs);
                collect_funs(r, &mut funs);
            }
        });
        let mut decls: Vec<Decl> = reals.into_iter().map(|n| Decl::Const(n, Sort::Real)).collect();
        decls.extend(bools.into_iter().map(|n| Decl::Const(n, Sort::Bool)));
        decls.extend(funs.into_iter().map(|(n, k)| Decl::Fun(n, k)));
        let assertions = match &p.formula {
            Formula::And(v) => v.clone(),
            other => vec![other.clone()],
        };
        ProblemFile { decls, assertions, objective: Objective::Minimize(p.cost.clone()), lower: p.lower.clone(), upper: p.upper.clone() }
    }

    pub fn formula(&self) -> Formula {
        Formula::and(self.assertions.clone())
    }

    /// Solver-level problem. A maximized `x` becomes a fresh cost constrained
    /// to `-x`; bounds then read `lower < x ≤ upper`, mirroring `lower ≤ x < upper`
    /// for minimization.
    pub fn to_problem(&self) -> OmtProblem {
        match &self.objective {
            Objective::Minimize(v) => OmtProblem::new(self.formula(), v).with_bounds(self.lower.clone(), self.upper.clone()),
            Objective::Maximize(v) => {
                let taken = self.decls.iter().map(|d| d.name().to_string()).collect();
                let cost = FreshNames::new(&format!("{}_neg", v), taken).fresh();
                let mut def = Linear::var(&cost);
                def.add_term(v, &Rational::one());
                let mut all = self.assertions.clone();
                all.push(Formula::lra(def, Cmp::Eq));
                OmtProblem::new(Formula::and(all), &cost).with_bounds(self.upper.as_ref().map(|u| -u), self.lower.as_ref().map(|l| -l))
            }
        }
    }

    /// Declared real and Boolean constants in declaration order.
    pub fn model_symbols(&self) -> Vec<(&str, Sort)> {
        self.decls
            .iter()
            .filter_map(|d| match d {
                Decl::Const(n, s) => Some((n.as_str(), *s)),
                Decl::Fun(..) => None,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let pf = parse_problem("(declare-fun x () Real)(assert (>= x 3))(minimize x)").unwrap();
        assert_eq!(pf.objective, Objective::Minimize("x".into()));
        let pf = parse_problem("(declare-fun x () Real)(assert (<= x 3))(maximize x)").unwrap();
        assert_eq!(pf.objective, Objective::Maximize("x".into()));
        let e = parse_problem("(declare-fun x () Real)\n(minimize y)").unwrap_err();
        assert!(e.msg.contains("`y`"));
        assert_eq!((e.line, e.col), (2, 11));
    }

    #[test]
    fn parse_errors() {
        let dup = parse_problem("(declare-fun x () Real)(minimize x)(minimize x)").unwrap_err();
        assert!(dup.msg.contains("duplicate objective"));
        let arity = parse_problem("(declare-fun x () Real)(declare-fun f (Real) Real)(assert (= (f x x) x))(minimize x)").unwrap_err();
        assert!(arity.msg.contains("expects 1"));
        let nonlinear = parse_problem("(declare-fun x () Real)(assert (= (* x x) 1))(minimize x)").unwrap_err();
        assert!(nonlinear.msg.contains("nonlinear"));
        assert!(parse_problem("(declare-fun x () Real)(assert (>= x 3)").is_err());
        assert!(parse_problem("(declare-fun x () Real)").unwrap_err().msg.contains("missing objective"));
    }

    #[test]
    fn printing_round_trips() {
        let text = "; comment\n(declare-fun x () Real)(declare-fun y () Real)(declare-fun A () Bool)(declare-fun f (Real Real) Real)\n\
                    (assert (or A (< (+ x (* 2 y)) (/ 7 2))))\n(assert (=> A (= (f x y) (- x 1))))\n\
                    (assert (distinct x y))(assert (= A (>= y -1.5)))(assert (xor A (= (f y x) (f x y))))\n\
                    (minimize x)(set-lower-bound -3/2)(set-upper-bound 10)";
        let pf = parse_problem(text).unwrap();
        let printed = print_problem(&pf);
        assert_eq!(parse_problem(&printed).unwrap(), pf);
        assert_eq!(print_problem(&parse_problem(&printed).unwrap()), printed);
    }
}
