//! Two-sorted abstract syntax: justification terms and formulas.
//!
//! Propositional variables are `x0, x1, ...` and justification variables are
//! `v0, v1, ...`; each family is well-ordered by index. Constants come in the
//! same two sorts (`ConstD` propositional, `ConstC` justification) and must be
//! declared before use. Quantifier nodes are *proper*: the bound variable has
//! to occur free in the body, and the smart constructors reject anything else.

mod lex;
mod parse;
mod render;

pub use parse::{parse_formula, parse_substitution, parse_term};
pub use render::{render_formula, render_term};

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Propositional variable `x<i>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarP(pub u32);

/// Justification variable `v<i>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarJ(pub u32);

impl fmt::Display for VarP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl fmt::Display for VarJ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Declared constant names, split by sort. `props` feed `Formula::Const`,
/// `justs` feed `Term::Const`; the two sets must be disjoint and may not
/// collide with the reserved variable spellings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub props: BTreeSet<String>,
    pub justs: BTreeSet<String>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(props: &[&str], justs: &[&str]) -> Self {
        let mut sig = Self::new();
        for p in props {
            sig.declare_prop(p).expect("bad signature");
        }
        for j in justs {
            sig.declare_just(j).expect("bad signature");
        }
        sig
    }

    pub fn declare_prop(&mut self, name: &str) -> Result<(), SyntaxError> {
        Self::check_name(name)?;
        if self.justs.contains(name) {
            return Err(SyntaxError::DuplicateConstant(name.to_string()));
        }
        self.props.insert(name.to_string());
        Ok(())
    }

    pub fn declare_just(&mut self, name: &str) -> Result<(), SyntaxError> {
        Self::check_name(name)?;
        if self.props.contains(name) {
            return Err(SyntaxError::DuplicateConstant(name.to_string()));
        }
        self.justs.insert(name.to_string());
        Ok(())
    }

    fn check_name(name: &str) -> Result<(), SyntaxError> {
        if name.is_empty()
            || !name.chars().next().unwrap().is_ascii_alphabetic()
            || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            || is_variable_spelling(name)
            || is_keyword(name)
        {
            return Err(SyntaxError::BadConstantName(name.to_string()));
        }
        Ok(())
    }
}

pub(crate) fn is_variable_spelling(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some('x') | Some('v'))
        && name.len() > 1
        && chars.all(|c| c.is_ascii_digit())
}

pub(crate) fn is_keyword(name: &str) -> bool {
    matches!(
        name,
        "all" | "ex" | "jall" | "jex" | "box" | "dia" | "true" | "false" | "const" | "prop"
            | "just"
    )
}

/// Justification term: variables and constants closed under application
/// product `*` and sum `+`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(VarJ),
    Const(String),
    Prod(Box<Term>, Box<Term>),
    Sum(Box<Term>, Box<Term>),
}

impl Term {
    pub fn prod(s: Term, t: Term) -> Term {
        Term::Prod(Box::new(s), Box::new(t))
    }

    pub fn sum(s: Term, t: Term) -> Term {
        Term::Sum(Box::new(s), Box::new(t))
    }

    /// Justification variables occurring in the term.
    pub fn vars(&self) -> BTreeSet<VarJ> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<VarJ>) {
        match self {
            Term::Var(u) => {
                out.insert(*u);
            }
            Term::Const(_) => {}
            Term::Prod(s, t) | Term::Sum(s, t) => {
                s.collect_vars(out);
                t.collect_vars(out);
            }
        }
    }

    /// Constant symbols occurring in the term.
    pub fn consts(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_consts(&mut out);
        out
    }

    fn collect_consts(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(_) => {}
            Term::Const(c) => {
                out.insert(c.clone());
            }
            Term::Prod(s, t) | Term::Sum(s, t) => {
                s.collect_consts(out);
                t.collect_consts(out);
            }
        }
    }
}

/// Core formula constructors. Sugar (`dia`, `ex`, `jex`, `&`, `|`, `<->`) is
/// eliminated at parse time, so a `Formula` value is always in the core
/// language.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Var(VarP),
    Const(String),
    Implies(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    /// Propositional identity `phi == psi`.
    Ident(Box<Formula>, Box<Formula>),
    /// Propositional reference `phi < psi` ("psi says something about phi").
    Refers(Box<Formula>, Box<Formula>),
    /// Term identity `s == t`.
    TermIdent(Term, Term),
    /// Justification order `s <= t`.
    TermLe(Term, Term),
    IsTrue(Box<Formula>),
    IsFalse(Box<Formula>),
    Box(Box<Formula>),
    /// Membership `phi : t` ("the proposition phi belongs to justification t").
    Member(Box<Formula>, Term),
    Forall(VarP, Box<Formula>),
    Jforall(VarJ, Box<Formula>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("sort error at {pos}: {msg}")]
    Sort { pos: usize, msg: String },
    #[error("improper formula: quantified variable {var} is not free in the body")]
    ImproperFormula { var: String },
    #[error("unknown constant `{0}` (missing declaration)")]
    UnknownConstant(String),
    #[error("constant `{0}` declared under both sorts")]
    DuplicateConstant(String),
    #[error("invalid constant name `{0}`")]
    BadConstantName(String),
}

impl Formula {
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn ident(a: Formula, b: Formula) -> Formula {
        Formula::Ident(Box::new(a), Box::new(b))
    }

    pub fn refers(a: Formula, b: Formula) -> Formula {
        Formula::Refers(Box::new(a), Box::new(b))
    }

    pub fn is_true(a: Formula) -> Formula {
        Formula::IsTrue(Box::new(a))
    }

    pub fn is_false(a: Formula) -> Formula {
        Formula::IsFalse(Box::new(a))
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::Box(Box::new(a))
    }

    pub fn member(a: Formula, t: Term) -> Formula {
        Formula::Member(Box::new(a), t)
    }

    /// `all x. a`; rejects improper quantification.
    pub fn forall(x: VarP, a: Formula) -> Result<Formula, SyntaxError> {
        if !a.fvar_p().contains(&x) {
            return Err(SyntaxError::ImproperFormula { var: x.to_string() });
        }
        Ok(Formula::Forall(x, Box::new(a)))
    }

    /// `jall u. a`; rejects improper quantification.
    pub fn jforall(u: VarJ, a: Formula) -> Result<Formula, SyntaxError> {
        if !a.fvar_j().contains(&u) {
            return Err(SyntaxError::ImproperFormula { var: u.to_string() });
        }
        Ok(Formula::Jforall(u, Box::new(a)))
    }

    // Defined connectives, eliminated on construction.

    /// `dia a` is `~ box ~ a`.
    pub fn dia(a: Formula) -> Formula {
        Formula::not(Formula::boxed(Formula::not(a)))
    }

    /// `a & b` is `~(a -> ~b)`.
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::implies(a, Formula::not(b)))
    }

    /// `a | b` is `~a -> b`.
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::implies(Formula::not(a), b)
    }

    /// `a <-> b` is `(a -> b) & (b -> a)` with `&` eliminated.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    /// `ex x. a` is `~ all x. ~a`.
    pub fn exists(x: VarP, a: Formula) -> Result<Formula, SyntaxError> {
        Ok(Formula::not(Formula::forall(x, Formula::not(a))?))
    }

    /// `jex u. a` is `~ jall u. ~a`.
    pub fn jexists(u: VarJ, a: Formula) -> Result<Formula, SyntaxError> {
        Ok(Formula::not(Formula::jforall(u, Formula::not(a))?))
    }

    /// Free propositional variables.
    pub fn fvar_p(&self) -> BTreeSet<VarP> {
        self.fcon().vars_p
    }

    /// Free justification variables.
    pub fn fvar_j(&self) -> BTreeSet<VarJ> {
        self.fcon().vars_j
    }

    /// Free variables and all occurring constants, one traversal.
    pub fn fcon(&self) -> FreeCon {
        let mut acc = FreeCon::default();
        let mut bound = Bound::default();
        self.collect_fcon(&mut bound, &mut acc);
        acc
    }

    fn collect_fcon(&self, bound: &mut Bound, acc: &mut FreeCon) {
        match self {
            Formula::Var(x) => {
                if !bound.p.contains(x) {
                    acc.vars_p.insert(*x);
                }
            }
            Formula::Const(d) => {
                acc.consts_d.insert(d.clone());
            }
            Formula::Implies(a, b) | Formula::Ident(a, b) | Formula::Refers(a, b) => {
                a.collect_fcon(bound, acc);
                b.collect_fcon(bound, acc);
            }
            Formula::Not(a) | Formula::IsTrue(a) | Formula::IsFalse(a) | Formula::Box(a) => {
                a.collect_fcon(bound, acc);
            }
            Formula::TermIdent(s, t) | Formula::TermLe(s, t) => {
                collect_term_fcon(s, bound, acc);
                collect_term_fcon(t, bound, acc);
            }
            Formula::Member(a, t) => {
                a.collect_fcon(bound, acc);
                collect_term_fcon(t, bound, acc);
            }
            Formula::Forall(x, a) => {
                let fresh = bound.p.insert(*x);
                a.collect_fcon(bound, acc);
                if fresh {
                    bound.p.remove(x);
                }
            }
            Formula::Jforall(u, a) => {
                let fresh = bound.j.insert(*u);
                a.collect_fcon(bound, acc);
                if fresh {
                    bound.j.remove(u);
                }
            }
        }
    }

    /// All variables, free or bound.
    pub fn all_vars(&self) -> (BTreeSet<VarP>, BTreeSet<VarJ>) {
        let mut p = BTreeSet::new();
        let mut j = BTreeSet::new();
        self.collect_all_vars(&mut p, &mut j);
        (p, j)
    }

    fn collect_all_vars(&self, p: &mut BTreeSet<VarP>, j: &mut BTreeSet<VarJ>) {
        match self {
            Formula::Var(x) => {
                p.insert(*x);
            }
            Formula::Const(_) => {}
            Formula::Implies(a, b) | Formula::Ident(a, b) | Formula::Refers(a, b) => {
                a.collect_all_vars(p, j);
                b.collect_all_vars(p, j);
            }
            Formula::Not(a) | Formula::IsTrue(a) | Formula::IsFalse(a) | Formula::Box(a) => {
                a.collect_all_vars(p, j);
            }
            Formula::TermIdent(s, t) | Formula::TermLe(s, t) => {
                for u in s.vars().into_iter().chain(t.vars()) {
                    j.insert(u);
                }
            }
            Formula::Member(a, t) => {
                a.collect_all_vars(p, j);
                for u in t.vars() {
                    j.insert(u);
                }
            }
            Formula::Forall(x, a) => {
                p.insert(*x);
                a.collect_all_vars(p, j);
            }
            Formula::Jforall(u, a) => {
                j.insert(*u);
                a.collect_all_vars(p, j);
            }
        }
    }

    /// True iff every quantifier in the tree binds a variable free in its body.
    pub fn is_proper(&self) -> bool {
        match self {
            Formula::Var(_) | Formula::Const(_) | Formula::TermIdent(..) | Formula::TermLe(..) => {
                true
            }
            Formula::Implies(a, b) | Formula::Ident(a, b) | Formula::Refers(a, b) => {
                a.is_proper() && b.is_proper()
            }
            Formula::Not(a) | Formula::IsTrue(a) | Formula::IsFalse(a) | Formula::Box(a) => {
                a.is_proper()
            }
            Formula::Member(a, _) => a.is_proper(),
            Formula::Forall(x, a) => a.fvar_p().contains(x) && a.is_proper(),
            Formula::Jforall(u, a) => a.fvar_j().contains(u) && a.is_proper(),
        }
    }

    /// Tree size (number of formula and term nodes).
    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Const(_) => 1,
            Formula::Implies(a, b) | Formula::Ident(a, b) | Formula::Refers(a, b) => {
                1 + a.size() + b.size()
            }
            Formula::Not(a) | Formula::IsTrue(a) | Formula::IsFalse(a) | Formula::Box(a) => {
                1 + a.size()
            }
            Formula::TermIdent(s, t) | Formula::TermLe(s, t) => 1 + term_size(s) + term_size(t),
            Formula::Member(a, t) => 1 + a.size() + term_size(t),
            Formula::Forall(_, a) | Formula::Jforall(_, a) => 1 + a.size(),
        }
    }
}

pub fn term_size(t: &Term) -> usize {
    match t {
        Term::Var(_) | Term::Const(_) => 1,
        Term::Prod(a, b) | Term::Sum(a, b) => 1 + term_size(a) + term_size(b),
    }
}

fn collect_term_fcon(t: &Term, bound: &Bound, acc: &mut FreeCon) {
    match t {
        Term::Var(u) => {
            if !bound.j.contains(u) {
                acc.vars_j.insert(*u);
            }
        }
        Term::Const(c) => {
            acc.consts_c.insert(c.clone());
        }
        Term::Prod(s, u) | Term::Sum(s, u) => {
            collect_term_fcon(s, bound, acc);
            collect_term_fcon(u, bound, acc);
        }
    }
}

#[derive(Default)]
struct Bound {
    p: BTreeSet<VarP>,
    j: BTreeSet<VarJ>,
}

/// Free variables plus occurring constants (`fcon` in the substitution laws).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FreeCon {
    pub vars_p: BTreeSet<VarP>,
    pub vars_j: BTreeSet<VarJ>,
    pub consts_d: BTreeSet<String>,
    pub consts_c: BTreeSet<String>,
}

impl FreeCon {
    pub fn from_term(t: &Term) -> FreeCon {
        let mut acc = FreeCon::default();
        collect_term_fcon(t, &Bound::default(), &mut acc);
        acc
    }

    pub fn is_empty(&self) -> bool {
        self.vars_p.is_empty()
            && self.vars_j.is_empty()
            && self.consts_d.is_empty()
            && self.consts_c.is_empty()
    }

    pub fn union_with(&mut self, other: &FreeCon) {
        self.vars_p.extend(other.vars_p.iter().copied());
        self.vars_j.extend(other.vars_j.iter().copied());
        self.consts_d.extend(other.consts_d.iter().cloned());
        self.consts_c.extend(other.consts_c.iter().cloned());
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_formula(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_term(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xp(i: u32) -> Formula {
        Formula::Var(VarP(i))
    }

    #[test]
    fn forall_rejects_improper_body() {
        // all x0. d1 and all x0. (x1 -> d1) do not bind anything
        let d1 = Formula::Const("d1".into());
        assert!(Formula::forall(VarP(0), d1.clone()).is_err());
        let body = Formula::implies(xp(1), d1);
        assert!(Formula::forall(VarP(0), body).is_err());
    }

    #[test]
    fn jforall_rejects_improper_body() {
        // jall v0. (v1 <= v1)
        let body = Formula::TermLe(Term::Var(VarJ(1)), Term::Var(VarJ(1)));
        assert!(Formula::jforall(VarJ(0), body).is_err());
    }

    #[test]
    fn fvar_examples() {
        let f = Formula::forall(VarP(0), Formula::implies(xp(0), xp(1))).unwrap();
        let fc = f.fcon();
        assert_eq!(fc.vars_p, BTreeSet::from([VarP(1)]));
        assert!(fc.vars_j.is_empty());

        let m = Formula::member(xp(0), Term::Var(VarJ(0)));
        let fc = m.fcon();
        assert_eq!(fc.vars_p, BTreeSet::from([VarP(0)]));
        assert_eq!(fc.vars_j, BTreeSet::from([VarJ(0)]));

        let g = Formula::jforall(
            VarJ(0),
            Formula::TermLe(Term::Var(VarJ(0)), Term::Var(VarJ(1))),
        )
        .unwrap();
        let fc = g.fcon();
        assert!(fc.vars_p.is_empty());
        assert_eq!(fc.vars_j, BTreeSet::from([VarJ(1)]));
    }

    #[test]
    fn is_proper_examples() {
        let d1 = Formula::Const("d1".into());
        let good = Formula::Forall(
            VarP(0),
            Box::new(Formula::implies(xp(0), d1.clone())),
        );
        assert!(good.is_proper());
        let bad = Formula::Forall(VarP(0), Box::new(Formula::implies(xp(1), d1)));
        assert!(!bad.is_proper());
        let bad_j = Formula::Jforall(
            VarJ(0),
            Box::new(Formula::TermLe(Term::Var(VarJ(1)), Term::Var(VarJ(1)))),
        );
        assert!(!bad_j.is_proper());
    }

    #[test]
    fn shadowed_binder_keeps_outer_occurrence_free() {
        // all x0. (x0 -> all x0. (x0 -> x1)): inner binder shadows; outer body
        // still proper, x1 free.
        let inner = Formula::Forall(VarP(0), Box::new(Formula::implies(xp(0), xp(1))));
        let outer = Formula::Forall(VarP(0), Box::new(Formula::implies(xp(0), inner)));
        assert!(outer.is_proper());
        assert_eq!(outer.fvar_p(), BTreeSet::from([VarP(1)]));
    }
}
