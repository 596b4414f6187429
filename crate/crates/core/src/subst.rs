//! The substitution calculus: application with forced-variable renaming,
//! composition, normalization under the identity substitution,
//! alpha-congruence, and the syntactic reference relation.
//!
//! A substitution maps propositional slots (variables `x<i>` and constants)
//! to formulas and justification slots (variables `v<i>` and constants) to
//! terms, and is the identity outside a finite support. Passing under a
//! binder replaces the bound variable by the *forced* variable: the least
//! variable of the right sort strictly greater than every free variable of
//! that sort in the substituted quantified formula (the least variable of
//! the family when that set is empty). The forced name is observable and
//! normative; nothing here uses de Bruijn indices.

use std::collections::BTreeMap;

use crate::syntax::{Formula, Term, VarJ, VarP};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SlotP {
    Var(VarP),
    Const(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SlotJ {
    Var(VarJ),
    Const(String),
}

/// Finite deviation from the identity, sort-preserving by construction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    prop: BTreeMap<SlotP, Formula>,
    just: BTreeMap<SlotJ, Term>,
}

impl Substitution {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn is_identity_map(&self) -> bool {
        self.prop.is_empty() && self.just.is_empty()
    }

    pub fn set_var_p(&mut self, x: VarP, f: Formula) {
        self.prop.insert(SlotP::Var(x), f);
    }

    pub fn set_var_j(&mut self, u: VarJ, t: Term) {
        self.just.insert(SlotJ::Var(u), t);
    }

    pub fn set_const_d(&mut self, name: &str, f: Formula) {
        self.prop.insert(SlotP::Const(name.to_string()), f);
    }

    pub fn set_const_c(&mut self, name: &str, t: Term) {
        self.just.insert(SlotJ::Const(name.to_string()), t);
    }

    pub fn of_var_p(x: VarP, f: Formula) -> Self {
        let mut s = Self::identity();
        s.set_var_p(x, f);
        s
    }

    pub fn of_var_j(u: VarJ, t: Term) -> Self {
        let mut s = Self::identity();
        s.set_var_j(u, t);
        s
    }

    pub fn of_const_d(name: &str, f: Formula) -> Self {
        let mut s = Self::identity();
        s.set_const_d(name, f);
        s
    }

    pub fn of_const_c(name: &str, t: Term) -> Self {
        let mut s = Self::identity();
        s.set_const_c(name, t);
        s
    }

    /// Image of a propositional variable (identity outside the support).
    pub fn var_p(&self, x: VarP) -> Formula {
        self.prop
            .get(&SlotP::Var(x))
            .cloned()
            .unwrap_or(Formula::Var(x))
    }

    pub fn var_j(&self, u: VarJ) -> Term {
        self.just
            .get(&SlotJ::Var(u))
            .cloned()
            .unwrap_or(Term::Var(u))
    }

    pub fn const_d(&self, name: &str) -> Formula {
        self.prop
            .get(&SlotP::Const(name.to_string()))
            .cloned()
            .unwrap_or(Formula::Const(name.to_string()))
    }

    pub fn const_c(&self, name: &str) -> Term {
        self.just
            .get(&SlotJ::Const(name.to_string()))
            .cloned()
            .unwrap_or(Term::Const(name.to_string()))
    }

    pub fn support(&self) -> (Vec<SlotP>, Vec<SlotJ>) {
        (
            self.prop.keys().cloned().collect(),
            self.just.keys().cloned().collect(),
        )
    }

    /// Update: same map except `x` now goes to `f` (Def-style `sigma[x:=f]`).
    pub fn with_var_p(&self, x: VarP, f: Formula) -> Self {
        let mut s = self.clone();
        s.set_var_p(x, f);
        s
    }

    pub fn with_var_j(&self, u: VarJ, t: Term) -> Self {
        let mut s = self.clone();
        s.set_var_j(u, t);
        s
    }
}

/// Least propositional variable strictly greater than every free
/// propositional variable of `node[sigma]`, computed from the fcon of the
/// quantified formula; `x0` when the set is empty.
pub fn forced_var_p(node: &Formula, sigma: &Substitution) -> VarP {
    let fc = node.fcon();
    let mut max: Option<u32> = None;
    let mut feed = |f: &Formula| {
        for y in f.fvar_p() {
            max = Some(max.map_or(y.0, |m| m.max(y.0)));
        }
    };
    for x in &fc.vars_p {
        feed(&sigma.var_p(*x));
    }
    for d in &fc.consts_d {
        feed(&sigma.const_d(d));
    }
    // justification slots map to terms, which contain no propositional
    // variables, so they contribute nothing here
    VarP(max.map_or(0, |m| m + 1))
}

/// Least justification variable strictly greater than every free
/// justification variable of `node[sigma]`; `v0` when the set is empty.
pub fn forced_var_j(node: &Formula, sigma: &Substitution) -> VarJ {
    let fc = node.fcon();
    let mut max: Option<u32> = None;
    let feed_f = |f: &Formula, max: &mut Option<u32>| {
        for u in f.fvar_j() {
            *max = Some(max.map_or(u.0, |m| m.max(u.0)));
        }
    };
    let feed_t = |t: &Term, max: &mut Option<u32>| {
        for u in t.vars() {
            *max = Some(max.map_or(u.0, |m| m.max(u.0)));
        }
    };
    for x in &fc.vars_p {
        feed_f(&sigma.var_p(*x), &mut max);
    }
    for d in &fc.consts_d {
        feed_f(&sigma.const_d(d), &mut max);
    }
    for u in &fc.vars_j {
        feed_t(&sigma.var_j(*u), &mut max);
    }
    for c in &fc.consts_c {
        feed_t(&sigma.const_c(c), &mut max);
    }
    VarJ(max.map_or(0, |m| m + 1))
}

/// Apply a substitution to a formula (postfix `phi[sigma]`).
pub fn apply(phi: &Formula, sigma: &Substitution) -> Formula {
    match phi {
        Formula::Var(x) => sigma.var_p(*x),
        Formula::Const(d) => sigma.const_d(d),
        Formula::Implies(a, b) => Formula::implies(apply(a, sigma), apply(b, sigma)),
        Formula::Not(a) => Formula::not(apply(a, sigma)),
        Formula::Ident(a, b) => Formula::ident(apply(a, sigma), apply(b, sigma)),
        Formula::Refers(a, b) => Formula::refers(apply(a, sigma), apply(b, sigma)),
        Formula::TermIdent(s, t) => Formula::TermIdent(apply_term(s, sigma), apply_term(t, sigma)),
        Formula::TermLe(s, t) => Formula::TermLe(apply_term(s, sigma), apply_term(t, sigma)),
        Formula::IsTrue(a) => Formula::is_true(apply(a, sigma)),
        Formula::IsFalse(a) => Formula::is_false(apply(a, sigma)),
        Formula::Box(a) => Formula::boxed(apply(a, sigma)),
        Formula::Member(a, t) => Formula::member(apply(a, sigma), apply_term(t, sigma)),
        Formula::Forall(x, a) => {
            let y = forced_var_p(phi, sigma);
            let inner = sigma.with_var_p(*x, Formula::Var(y));
            Formula::Forall(y, Box::new(apply(a, &inner)))
        }
        Formula::Jforall(u, a) => {
            let v = forced_var_j(phi, sigma);
            let inner = sigma.with_var_j(*u, Term::Var(v));
            Formula::Jforall(v, Box::new(apply(a, &inner)))
        }
    }
}

/// Apply a substitution to a term (`t[sigma]`).
pub fn apply_term(t: &Term, sigma: &Substitution) -> Term {
    match t {
        Term::Var(u) => sigma.var_j(*u),
        Term::Const(c) => sigma.const_c(c),
        Term::Prod(a, b) => Term::prod(apply_term(a, sigma), apply_term(b, sigma)),
        Term::Sum(a, b) => Term::sum(apply_term(a, sigma), apply_term(b, sigma)),
    }
}

/// `sigma . tau` maps every slot `z` to `sigma(z)[tau]`; then
/// `phi[sigma . tau] = phi[sigma][tau]`.
pub fn compose(sigma: &Substitution, tau: &Substitution) -> Substitution {
    let mut out = Substitution::identity();
    for (slot, f) in &sigma.prop {
        out.prop.insert(slot.clone(), apply(f, tau));
    }
    for (slot, t) in &sigma.just {
        out.just.insert(slot.clone(), apply_term(t, tau));
    }
    for (slot, f) in &tau.prop {
        out.prop.entry(slot.clone()).or_insert_with(|| f.clone());
    }
    for (slot, t) in &tau.just {
        out.just.entry(slot.clone()).or_insert_with(|| t.clone());
    }
    out
}

/// `phi[epsilon]`: renames every bound variable to its forced name.
pub fn normalize(phi: &Formula) -> Formula {
    apply(phi, &Substitution::identity())
}

/// Alpha-congruence, decided through normal forms: `phi =a psi` iff
/// `phi[epsilon] = psi[epsilon]`.
pub fn alpha_eq(phi: &Formula, psi: &Formula) -> bool {
    normalize(phi) == normalize(psi)
}

/// Syntactic reference `phi < psi` ("psi says something about phi"): some
/// non-root subformula occurrence of `psi` is alpha-congruent to `phi` and
/// none of `phi`'s free variables is captured on the way down.
pub fn syn_ref(phi: &Formula, psi: &Formula) -> bool {
    let fc = phi.fcon();
    let phi_norm = normalize(phi);
    let mut walker = RefWalker {
        fvp: fc.vars_p.iter().copied().collect(),
        fvj: fc.vars_j.iter().copied().collect(),
        phi_norm,
        shadow_p: 0,
        shadow_j: 0,
    };
    walker.search(psi, true)
}

struct RefWalker {
    fvp: Vec<VarP>,
    fvj: Vec<VarJ>,
    phi_norm: Formula,
    // how many of phi's free variables are currently captured
    shadow_p: u32,
    shadow_j: u32,
}

impl RefWalker {
    fn search(&mut self, node: &Formula, is_root: bool) -> bool {
        if !is_root
            && self.shadow_p == 0
            && self.shadow_j == 0
            && normalize(node) == self.phi_norm
        {
            return true;
        }
        match node {
            Formula::Var(_)
            | Formula::Const(_)
            | Formula::TermIdent(..)
            | Formula::TermLe(..) => false,
            Formula::Implies(a, b) | Formula::Ident(a, b) | Formula::Refers(a, b) => {
                self.search(a, false) || self.search(b, false)
            }
            Formula::Not(a)
            | Formula::IsTrue(a)
            | Formula::IsFalse(a)
            | Formula::Box(a)
            | Formula::Member(a, _) => self.search(a, false),
            Formula::Forall(x, a) => {
                let hit = self.fvp.contains(x);
                if hit {
                    self.shadow_p += 1;
                }
                let found = self.search(a, false);
                if hit {
                    self.shadow_p -= 1;
                }
                found
            }
            Formula::Jforall(u, a) => {
                let hit = self.fvj.contains(u);
                if hit {
                    self.shadow_j += 1;
                }
                let found = self.search(a, false);
                if hit {
                    self.shadow_j -= 1;
                }
                found
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_substitution, Signature};

    fn sig() -> Signature {
        Signature::with(&["d1", "d2"], &["c1"])
    }

    fn f(src: &str) -> Formula {
        parse_formula(src, &sig()).unwrap()
    }

    fn s(src: &str) -> Substitution {
        parse_substitution(src, &sig()).unwrap()
    }

    #[test]
    fn binder_renames_to_forced_variable() {
        // fcon = {x1}, sigma(x1) = x0, so the forced variable is x1
        let got = apply(&f("all x0. x0 -> x1"), &s(r#"[x1:="x0"]"#));
        assert_eq!(got, f("all x1. x1 -> x0"));
    }

    #[test]
    fn constants_pass_through_plain_substitution() {
        let got = apply(&f("x0 -> d1"), &s(r#"[x0:="box x0"]"#));
        assert_eq!(got, f("box x0 -> d1"));
    }

    #[test]
    fn forced_variable_defaults_to_least() {
        // substituted result has no free justification variables, so v0
        let got = apply(&f("jall v0. x0 : v0"), &s(r#"[x0:="x1"]"#));
        assert_eq!(got, f("jall v0. x1 : v0"));
    }

    #[test]
    fn compose_maps_through() {
        let st = compose(&s(r#"[x0:="x1"]"#), &s(r#"[x1:="d1"]"#));
        assert_eq!(st.var_p(VarP(0)), f("d1"));
        assert_eq!(st.var_p(VarP(1)), f("d1"));
    }

    #[test]
    fn compose_agrees_with_sequential_application() {
        let phi = f("x0 -> x1");
        let a = s(r#"[x0:="x1"]"#);
        let b = s(r#"[x1:="d1"]"#);
        let lhs = apply(&phi, &compose(&a, &b));
        let rhs = apply(&apply(&phi, &a), &b);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, f("d1 -> d1"));
    }

    #[test]
    fn compose_with_identity_is_pointwise_identity() {
        let sg = s(r#"[x0:="box x1", v1:="c1 + v0"]"#);
        let c = compose(&Substitution::identity(), &sg);
        assert_eq!(c.var_p(VarP(0)), sg.var_p(VarP(0)));
        assert_eq!(c.var_j(VarJ(1)), sg.var_j(VarJ(1)));
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&f("all x5. x5 -> x1")), f("all x2. x2 -> x1"));
        assert_eq!(normalize(&f("x0")), f("x0"));
        let g = f("all x3. jall v2. (x3 : v2) -> x0");
        assert_eq!(normalize(&normalize(&g)), normalize(&g));
    }

    #[test]
    fn alpha_examples() {
        assert!(alpha_eq(&f("all x0. x0 -> d1"), &f("all x1. x1 -> d1")));
        assert!(alpha_eq(&f("jall v0. x0 : v0"), &f("jall v1. x0 : v1")));
        assert!(!alpha_eq(&f("all x0. x0 -> x1"), &f("all x1. x1 -> x1")));
    }

    #[test]
    fn syn_ref_anchor_cases() {
        assert!(syn_ref(&f("x0"), &f("x0 -> d1")));
        assert!(!syn_ref(&f("x0"), &f("all x0. x0 -> d1")));
        for phi in ["x0", "d1", "box x0 -> x1", "all x0. x0 : v0"] {
            let phi = f(phi);
            assert!(!syn_ref(&phi, &phi));
        }
    }

    #[test]
    fn syn_ref_sees_alpha_variants() {
        let phi = f("all x0. x0 -> x1");
        let psi = f("(all x2. x2 -> x1) -> d1");
        assert!(syn_ref(&phi, &psi));
    }

    #[test]
    fn syn_ref_respects_partial_capture() {
        // x1 is free in phi and bound on the path, even though x0 is not
        let phi = f("x0 -> x1");
        let psi = f("all x1. (x0 -> x1) -> x1");
        assert!(!syn_ref(&phi, &psi));
    }
}
