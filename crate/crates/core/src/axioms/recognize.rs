//! Shape-directed recognition of axiom instances.
//!
//! `recognize` strips the prefix of universal quantifiers (both sorts),
//! tries each schema in a fixed order and confirms a match by rebuilding the
//! instance, with the tautology check last. Schemas (xii) and (xxiii) are
//! never inferred here: reconstructing their substitution witnesses is a
//! second-order matching problem, so they check only against supplied
//! witnesses (the proof format always carries them).

use super::{build_instance, is_skeleton_tautology, SchemaId, SystemId, Witnesses};
use crate::syntax::{Formula, Term};

/// Remove the maximal prefix of universal quantifiers whose bound variable is
/// free in the remaining body (the closure clauses of the axiom set). On
/// proper formulas the freeness check always succeeds.
pub fn strip_closure(phi: &Formula) -> (usize, &Formula) {
    let mut depth = 0;
    let mut cur = phi;
    loop {
        match cur {
            Formula::Forall(x, body) if body.fvar_p().contains(x) => {
                depth += 1;
                cur = body;
            }
            Formula::Jforall(u, body) if body.fvar_j().contains(u) => {
                depth += 1;
                cur = body;
            }
            _ => return (depth, cur),
        }
    }
}

/// Try to identify `phi` as an axiom of the given system, reconstructing
/// witnesses. Rebuilding the returned pair yields the closure-stripped body
/// of `phi` exactly.
pub fn recognize(phi: &Formula, sys: SystemId) -> Option<(SchemaId, Witnesses)> {
    let (_, body) = strip_closure(phi);
    let order: &[SchemaId] = &[
        SchemaId::I,
        SchemaId::Ii,
        SchemaId::Iii,
        SchemaId::Iv,
        SchemaId::V,
        SchemaId::Vi,
        SchemaId::Vii,
        SchemaId::Viii,
        SchemaId::Ix,
        SchemaId::X,
        SchemaId::Xi,
        SchemaId::Xiii,
        SchemaId::Xiv,
        SchemaId::Xv,
        SchemaId::Xvi,
        SchemaId::Xvii,
        SchemaId::Xviii,
        SchemaId::Xix,
        SchemaId::Xx,
        SchemaId::Xxi,
        SchemaId::Xxii,
        SchemaId::Four,
        SchemaId::E,
    ];
    for &id in order {
        if !sys.allows_schema(id) {
            continue;
        }
        if let Some(w) = match_schema(id, body) {
            if build_instance(id, &w).as_ref() == Ok(body) {
                return Some((id, w));
            }
        }
    }
    if is_skeleton_tautology(body) == Ok(true) {
        return Some((SchemaId::Taut, Witnesses::phi(body.clone())));
    }
    None
}

fn match_schema(id: SchemaId, body: &Formula) -> Option<Witnesses> {
    match id {
        SchemaId::I => {
            let (a, b) = match_iff(body)?;
            let inner = match_is_true(a)?;
            (inner == b).then(|| Witnesses::phi(b.clone()))
        }
        SchemaId::Ii => {
            let (a, b) = match_iff(body)?;
            let inner = match_is_false(a)?;
            let neg = match_not(b)?;
            (inner == neg).then(|| Witnesses::phi(inner.clone()))
        }
        SchemaId::Iii => {
            let (l, r) = match_implies(body)?;
            let (impl_phi_psi, s) = match_member(l)?;
            let (phi, psi) = match_implies(impl_phi_psi)?;
            let (l2, r2) = match_implies(r)?;
            let (phi2, t) = match_member(l2)?;
            let (psi2, st) = match_member(r2)?;
            let (s2, t2) = match_prod(st)?;
            (phi2 == phi && psi2 == psi && s2 == s && t2 == t).then(|| Witnesses {
                phi: Some(phi.clone()),
                psi: Some(psi.clone()),
                s: Some(s.clone()),
                t: Some(t.clone()),
                ..Default::default()
            })
        }
        SchemaId::Iv => {
            let (l, r) = match_implies(body)?;
            let (phi, s) = match_member(l)?;
            let (phi2, st) = match_member(r)?;
            let (s2, t) = match_sum(st)?;
            (phi2 == phi && s2 == s).then(|| Witnesses {
                phi: Some(phi.clone()),
                s: Some(s.clone()),
                t: Some(t.clone()),
                ..Default::default()
            })
        }
        SchemaId::V => {
            let (l, r) = match_implies(body)?;
            let (phi, t) = match_member(l)?;
            let (phi2, st) = match_member(r)?;
            let (s, t2) = match_sum(st)?;
            (phi2 == phi && t2 == t).then(|| Witnesses {
                phi: Some(phi.clone()),
                s: Some(s.clone()),
                t: Some(t.clone()),
                ..Default::default()
            })
        }
        SchemaId::Vi => {
            let (a, b) = match_iff(body)?;
            let phi = match_box(a)?;
            let inner = match_not(b)?;
            if let Formula::Jforall(u, jbody) = inner {
                let neg = match_not(jbody)?;
                let (phi2, tm) = match_member(neg)?;
                if *tm == Term::Var(*u) && phi2 == phi {
                    return Some(Witnesses {
                        phi: Some(phi.clone()),
                        u: Some(*u),
                        ..Default::default()
                    });
                }
            }
            None
        }
        SchemaId::Vii => {
            let (l, r) = match_implies(body)?;
            let phi = match_box(l)?;
            (phi == r).then(|| Witnesses::phi(phi.clone()))
        }
        SchemaId::Viii => {
            if let Formula::Refers(a, b) = body {
                Some(Witnesses::phi_psi((**a).clone(), (**b).clone()))
            } else {
                None
            }
        }
        SchemaId::Ix => {
            let (l, r) = match_implies(body)?;
            let (phi, psi) = match_refers(l)?;
            let (l2, r2) = match_implies(r)?;
            let (psi2, chi) = match_refers(l2)?;
            let (phi2, chi2) = match_refers(r2)?;
            (phi2 == phi && psi2 == psi && chi2 == chi).then(|| Witnesses {
                phi: Some(phi.clone()),
                psi: Some(psi.clone()),
                chi: Some(chi.clone()),
                ..Default::default()
            })
        }
        SchemaId::X => {
            if let Formula::Ident(a, b) = body {
                Some(Witnesses::phi_psi((**a).clone(), (**b).clone()))
            } else {
                None
            }
        }
        SchemaId::Xi => {
            let (l, r) = match_implies(body)?;
            let (phi, psi) = match_ident(l)?;
            let (phi2, psi2) = match_implies(r)?;
            (phi2 == phi && psi2 == psi)
                .then(|| Witnesses::phi_psi(phi.clone(), psi.clone()))
        }
        SchemaId::Xiii => {
            let (l, r) = match_implies(body)?;
            let inner = match_not(r)?;
            if let Formula::Jforall(u, jbody) = inner {
                let phi = match_not(jbody)?;
                for t in subterms_of(l) {
                    let w = Witnesses {
                        phi: Some(phi.clone()),
                        u: Some(*u),
                        t: Some(t.clone()),
                        ..Default::default()
                    };
                    if build_instance(SchemaId::Xiii, &w).as_ref() == Ok(body) {
                        return Some(w);
                    }
                }
            }
            None
        }
        SchemaId::Xiv => {
            let (l, r) = match_implies(body)?;
            if let Formula::Jforall(u, phi) = l {
                for t in subterms_of(r) {
                    let w = Witnesses {
                        phi: Some((**phi).clone()),
                        u: Some(*u),
                        t: Some(t.clone()),
                        ..Default::default()
                    };
                    if build_instance(SchemaId::Xiv, &w).as_ref() == Ok(body) {
                        return Some(w);
                    }
                }
            }
            None
        }
        SchemaId::Xv => {
            let (l, r) = match_implies(body)?;
            if let Formula::Jforall(u, jbody) = l {
                let (psi, phi) = match_implies(jbody)?;
                return Some(Witnesses {
                    phi: Some(phi.clone()),
                    psi: Some(psi.clone()),
                    u: Some(*u),
                    ..Default::default()
                });
            }
            let _ = r;
            None
        }
        SchemaId::Xvi => {
            let (l, _) = match_implies(body)?;
            if let Formula::Jforall(u, jbody) = l {
                let (psi, phi) = match_implies(jbody)?;
                return Some(Witnesses {
                    phi: Some(phi.clone()),
                    psi: Some(psi.clone()),
                    u: Some(*u),
                    ..Default::default()
                });
            }
            None
        }
        SchemaId::Xvii => {
            let (l, r) = match_implies(body)?;
            let inner = match_not(r)?;
            if let Formula::Forall(x, fbody) = inner {
                let phi = match_not(fbody)?;
                for psi in subformulas_of(l) {
                    let w = Witnesses {
                        phi: Some(phi.clone()),
                        psi: Some(psi.clone()),
                        x: Some(*x),
                        ..Default::default()
                    };
                    if build_instance(SchemaId::Xvii, &w).as_ref() == Ok(body) {
                        return Some(w);
                    }
                }
            }
            None
        }
        SchemaId::Xviii => {
            let (l, r) = match_implies(body)?;
            if let Formula::Forall(x, phi) = l {
                for psi in subformulas_of(r) {
                    let w = Witnesses {
                        phi: Some((**phi).clone()),
                        psi: Some(psi.clone()),
                        x: Some(*x),
                        ..Default::default()
                    };
                    if build_instance(SchemaId::Xviii, &w).as_ref() == Ok(body) {
                        return Some(w);
                    }
                }
            }
            None
        }
        SchemaId::Xix | SchemaId::Xx => {
            let (l, _) = match_implies(body)?;
            if let Formula::Forall(x, fbody) = l {
                let (psi, phi) = match_implies(fbody)?;
                return Some(Witnesses {
                    phi: Some(phi.clone()),
                    psi: Some(psi.clone()),
                    x: Some(*x),
                    ..Default::default()
                });
            }
            None
        }
        SchemaId::Xxi => {
            let (a, b) = match_iff(body)?;
            if let Formula::TermLe(s, t) = a {
                if let Formula::Forall(x, _) = b {
                    return Some(Witnesses {
                        s: Some(s.clone()),
                        t: Some(t.clone()),
                        x: Some(*x),
                        ..Default::default()
                    });
                }
            }
            None
        }
        SchemaId::Xxii => {
            let (a, _) = match_iff(body)?;
            if let Formula::TermIdent(s, t) = a {
                return Some(Witnesses {
                    s: Some(s.clone()),
                    t: Some(t.clone()),
                    ..Default::default()
                });
            }
            None
        }
        SchemaId::Four => {
            let (l, r) = match_implies(body)?;
            let phi = match_box(l)?;
            let bb = match_box(r)?;
            let inner = match_box(bb)?;
            (inner == phi).then(|| Witnesses::phi(phi.clone()))
        }
        SchemaId::E => {
            // dia phi -> box dia phi, with dia already eliminated
            let (l, r) = match_implies(body)?;
            let phi = match_not(l).and_then(match_box).and_then(match_not)?;
            let rb = match_box(r)?;
            let phi2 = match_not(rb).and_then(match_box).and_then(match_not)?;
            (phi2 == phi).then(|| Witnesses::phi(phi.clone()))
        }
        SchemaId::Taut | SchemaId::Xii | SchemaId::Xxiii => None,
    }
}

fn match_implies(f: &Formula) -> Option<(&Formula, &Formula)> {
    if let Formula::Implies(a, b) = f {
        Some((a, b))
    } else {
        None
    }
}

fn match_not(f: &Formula) -> Option<&Formula> {
    if let Formula::Not(a) = f {
        Some(a)
    } else {
        None
    }
}

fn match_box(f: &Formula) -> Option<&Formula> {
    if let Formula::Box(a) = f {
        Some(a)
    } else {
        None
    }
}

fn match_is_true(f: &Formula) -> Option<&Formula> {
    if let Formula::IsTrue(a) = f {
        Some(a)
    } else {
        None
    }
}

fn match_is_false(f: &Formula) -> Option<&Formula> {
    if let Formula::IsFalse(a) = f {
        Some(a)
    } else {
        None
    }
}

fn match_member(f: &Formula) -> Option<(&Formula, &Term)> {
    if let Formula::Member(a, t) = f {
        Some((a, t))
    } else {
        None
    }
}

fn match_refers(f: &Formula) -> Option<(&Formula, &Formula)> {
    if let Formula::Refers(a, b) = f {
        Some((a, b))
    } else {
        None
    }
}

fn match_ident(f: &Formula) -> Option<(&Formula, &Formula)> {
    if let Formula::Ident(a, b) = f {
        Some((a, b))
    } else {
        None
    }
}

fn match_prod(t: &Term) -> Option<(&Term, &Term)> {
    if let Term::Prod(a, b) = t {
        Some((a, b))
    } else {
        None
    }
}

fn match_sum(t: &Term) -> Option<(&Term, &Term)> {
    if let Term::Sum(a, b) = t {
        Some((a, b))
    } else {
        None
    }
}

/// `iff` in core form: `~((a -> b) -> ~(b -> a))`.
fn match_iff(f: &Formula) -> Option<(&Formula, &Formula)> {
    let outer = match_not(f)?;
    let (fwd, neg_back) = match_implies(outer)?;
    let (a, b) = match_implies(fwd)?;
    let back = match_not(neg_back)?;
    let (b2, a2) = match_implies(back)?;
    (a2 == a && b2 == b).then_some((a, b))
}

/// Every term occurring in the formula, plus all of their subterms.
fn subterms_of(f: &Formula) -> Vec<Term> {
    let mut terms = Vec::new();
    collect_formula_terms(f, &mut terms);
    let mut out: Vec<Term> = Vec::new();
    for t in terms {
        collect_subterms(&t, &mut out);
    }
    out
}

fn collect_formula_terms(f: &Formula, out: &mut Vec<Term>) {
    match f {
        Formula::Var(_) | Formula::Const(_) => {}
        Formula::Implies(a, b) | Formula::Ident(a, b) | Formula::Refers(a, b) => {
            collect_formula_terms(a, out);
            collect_formula_terms(b, out);
        }
        Formula::Not(a) | Formula::IsTrue(a) | Formula::IsFalse(a) | Formula::Box(a) => {
            collect_formula_terms(a, out);
        }
        Formula::TermIdent(s, t) | Formula::TermLe(s, t) => {
            out.push(s.clone());
            out.push(t.clone());
        }
        Formula::Member(a, t) => {
            collect_formula_terms(a, out);
            out.push(t.clone());
        }
        Formula::Forall(_, a) | Formula::Jforall(_, a) => collect_formula_terms(a, out),
    }
}

fn collect_subterms(t: &Term, out: &mut Vec<Term>) {
    if !out.contains(t) {
        out.push(t.clone());
    }
    if let Term::Prod(a, b) | Term::Sum(a, b) = t {
        collect_subterms(a, out);
        collect_subterms(b, out);
    }
}

/// The formula and all of its subformulas (term positions excluded).
fn subformulas_of(f: &Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    collect_subformulas(f, &mut out);
    out
}

fn collect_subformulas(f: &Formula, out: &mut Vec<Formula>) {
    if !out.contains(f) {
        out.push(f.clone());
    }
    match f {
        Formula::Var(_)
        | Formula::Const(_)
        | Formula::TermIdent(..)
        | Formula::TermLe(..) => {}
        Formula::Implies(a, b) | Formula::Ident(a, b) | Formula::Refers(a, b) => {
            collect_subformulas(a, out);
            collect_subformulas(b, out);
        }
        Formula::Not(a) | Formula::IsTrue(a) | Formula::IsFalse(a) | Formula::Box(a) => {
            collect_subformulas(a, out);
        }
        Formula::Member(a, _) => collect_subformulas(a, out),
        Formula::Forall(_, a) | Formula::Jforall(_, a) => collect_subformulas(a, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Signature, VarJ, VarP};

    fn sig() -> Signature {
        Signature::with(&["d1", "d2"], &["c1"])
    }

    fn f(src: &str) -> Formula {
        parse_formula(src, &sig()).unwrap()
    }

    #[test]
    fn recognizes_vii() {
        let (id, w) = recognize(&f("box x0 -> x0"), SystemId::Ax).unwrap();
        assert_eq!(id, SchemaId::Vii);
        assert_eq!(w.phi, Some(f("x0")));
    }

    #[test]
    fn recognizes_vii_under_closure() {
        let (id, w) = recognize(&f("all x0.(box x0 -> x0)"), SystemId::Ax).unwrap();
        assert_eq!(id, SchemaId::Vii);
        assert_eq!(w.phi, Some(f("x0")));
    }

    #[test]
    fn recognizes_tautology_last() {
        let (id, _) = recognize(&f("x0 -> x0"), SystemId::Ax).unwrap();
        assert_eq!(id, SchemaId::Taut);
        assert!(recognize(&f("x0 -> x1"), SystemId::Ax).is_none());
    }

    #[test]
    fn recognizes_xiv_with_inferred_term() {
        let phi = f("x0 : v0");
        let w = Witnesses {
            phi: Some(phi),
            u: Some(VarJ(0)),
            t: Some(Term::prod(Term::Const("c1".into()), Term::Var(VarJ(1)))),
            ..Default::default()
        };
        let inst = build_instance(SchemaId::Xiv, &w).unwrap();
        let (id, got) = recognize(&inst, SystemId::Ax).unwrap();
        assert_eq!(id, SchemaId::Xiv);
        assert_eq!(build_instance(id, &got).unwrap(), inst);
        assert_eq!(got, w);
    }

    #[test]
    fn recognizes_xviii_with_inferred_formula() {
        let w = Witnesses {
            phi: Some(f("x0 -> x1")),
            x: Some(VarP(0)),
            psi: Some(f("box d1")),
            ..Default::default()
        };
        let inst = build_instance(SchemaId::Xviii, &w).unwrap();
        let (id, got) = recognize(&inst, SystemId::Ax).unwrap();
        assert_eq!(id, SchemaId::Xviii);
        assert_eq!(build_instance(id, &got).unwrap(), inst);
    }

    #[test]
    fn four_and_e_require_their_system() {
        let four = f("box x0 -> box box x0");
        assert!(recognize(&four, SystemId::Ax).is_none());
        let (id, _) = recognize(&four, SystemId::Ax4AxNec).unwrap();
        assert_eq!(id, SchemaId::Four);

        let e = f("dia x0 -> box dia x0");
        assert!(recognize(&e, SystemId::Ax4AxNec).is_none());
        let (id, _) = recognize(&e, SystemId::AxeAxNec).unwrap();
        assert_eq!(id, SchemaId::E);
    }

    #[test]
    fn xii_is_not_inferred() {
        let inst = f("(d1 == d2) -> (~d1 == ~d2)");
        assert!(recognize(&inst, SystemId::Ax).is_none());
    }
}
