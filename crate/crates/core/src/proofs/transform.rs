//! Proof transformers: the K-distribution template, the Necessitation
//! transformer, and constant generalization.
//!
//! All three splice checker-validated steps; nothing is trusted beyond the
//! axiom builders. Reasoning "under" universal quantifiers is done the
//! Hilbert way: tautologies and axiom instances enter pre-closed (the axiom
//! set is closed under universal quantification) and Modus Ponens is lifted
//! through the distribution schemas, one binder at a time.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::axioms::{
    build_instance, is_skeleton_tautology, jexists_member, SchemaId, SystemId, Witnesses,
};
use crate::subst::{alpha_eq, apply, apply_term, compose, forced_var_j, forced_var_p, normalize, Substitution};
use crate::syntax::{Formula, Term, VarJ, VarP};

use super::{check, Derivation, Justification, Step};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransformError {
    #[error("input derivation is not accepted at step {index}: {reason}")]
    InputNotAccepted { index: usize, reason: String },
    #[error("the derivation has hypotheses; necessitation needs a theorem")]
    HypothesesPresent,
    #[error("system {0} lacks the Axiom Necessitation rule")]
    SystemLacksAxNec(SystemId),
    #[error(
        "necessitating an AxNec step needs schema (4), which {0} does not provide"
    )]
    FourUnavailable(SystemId),
    #[error("constant `{0}` occurs in a hypothesis")]
    ConstantInHypotheses(String),
    #[error("constant `{0}` does not occur in the conclusion")]
    ConstantAbsent(String),
    #[error("variable {0} already occurs in the conclusion")]
    VariableNotFresh(String),
    #[error("an AxNec step mentions the constant; its boxed formula cannot be generalized")]
    AxNecStepBlocksGeneralization,
    #[error("internal transformer invariant failed: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Binder {
    P(VarP),
    J(VarJ),
}

fn close(binders: &[Binder], f: Formula) -> Formula {
    let mut out = f;
    for b in binders.iter().rev() {
        out = match b {
            Binder::P(x) => Formula::Forall(*x, Box::new(out)),
            Binder::J(u) => Formula::Jforall(*u, Box::new(out)),
        };
    }
    out
}

fn peel(f: &Formula, n: usize) -> Result<&Formula, TransformError> {
    let mut cur = f;
    for _ in 0..n {
        cur = match cur {
            Formula::Forall(_, b) | Formula::Jforall(_, b) => b,
            _ => {
                return Err(TransformError::Internal(format!(
                    "expected a quantifier prefix of length {n} on `{f}`"
                )))
            }
        };
    }
    Ok(cur)
}

fn split_implies(f: &Formula) -> Result<(&Formula, &Formula), TransformError> {
    match f {
        Formula::Implies(a, b) => Ok((a, b)),
        _ => Err(TransformError::Internal(format!(
            "expected an implication, found `{f}`"
        ))),
    }
}

struct Builder {
    system: SystemId,
    hypotheses: Vec<Formula>,
    steps: Vec<Step>,
}

impl Builder {
    fn new(system: SystemId, hypotheses: Vec<Formula>) -> Self {
        Builder {
            system,
            hypotheses,
            steps: Vec::new(),
        }
    }

    fn push(&mut self, formula: Formula, just: Justification) -> usize {
        self.steps.push(Step { formula, just });
        self.steps.len() - 1
    }

    fn formula(&self, i: usize) -> &Formula {
        &self.steps[i].formula
    }

    fn ax(&mut self, id: SchemaId, w: Witnesses) -> Result<usize, TransformError> {
        self.ax_closed(&[], id, w)
    }

    fn ax_closed(
        &mut self,
        binders: &[Binder],
        id: SchemaId,
        w: Witnesses,
    ) -> Result<usize, TransformError> {
        let inst = build_instance(id, &w)
            .map_err(|e| TransformError::Internal(format!("schema {id}: {e}")))?;
        let closed = close(binders, inst);
        if !closed.is_proper() {
            return Err(TransformError::Internal(format!(
                "closure produced an improper formula `{closed}`"
            )));
        }
        Ok(self.push(closed, Justification::Ax(id, w)))
    }

    fn taut(&mut self, f: Formula) -> Result<usize, TransformError> {
        self.taut_closed(&[], f)
    }

    fn taut_closed(&mut self, binders: &[Binder], f: Formula) -> Result<usize, TransformError> {
        if is_skeleton_tautology(&f) != Ok(true) {
            return Err(TransformError::Internal(format!(
                "not a tautology skeleton: `{f}`"
            )));
        }
        let closed = close(binders, f);
        if !closed.is_proper() {
            return Err(TransformError::Internal(format!(
                "closure produced an improper formula `{closed}`"
            )));
        }
        Ok(self.push(closed, Justification::Ax(SchemaId::Taut, Witnesses::default())))
    }

    fn mp(&mut self, i: usize, j: usize) -> Result<usize, TransformError> {
        let (ante, cons) = split_implies(self.formula(j))?;
        if ante != self.formula(i) {
            return Err(TransformError::Internal(format!(
                "modus ponens mismatch between `{}` and `{}`",
                self.formula(i),
                self.formula(j)
            )));
        }
        let cons = cons.clone();
        Ok(self.push(cons, Justification::Mp(i, j)))
    }

    /// Modus ponens under a stack of universal quantifiers shared by both
    /// premises, lifted through the distribution schemas.
    fn mp_under(&mut self, binders: &[Binder], i: usize, j: usize) -> Result<usize, TransformError> {
        let Some((&z, outer)) = binders.split_last() else {
            return self.mp(i, j);
        };
        let p = peel(self.formula(i), binders.len())?.clone();
        let q = {
            let body = peel(self.formula(j), binders.len())?;
            let (ante, cons) = split_implies(body)?;
            if *ante != p {
                return Err(TransformError::Internal(format!(
                    "lifted modus ponens mismatch under {} binders",
                    binders.len()
                )));
            }
            cons.clone()
        };
        let dist = match z {
            Binder::J(u) => self.ax_closed(
                outer,
                SchemaId::Xv,
                Witnesses {
                    phi: Some(q),
                    psi: Some(p),
                    u: Some(u),
                    ..Default::default()
                },
            )?,
            Binder::P(x) => self.ax_closed(
                outer,
                SchemaId::Xix,
                Witnesses {
                    phi: Some(q),
                    psi: Some(p),
                    x: Some(x),
                    ..Default::default()
                },
            )?,
        };
        let halfway = self.mp_under(outer, j, dist)?;
        self.mp_under(outer, i, halfway)
    }

    /// From `close(outer, Qz.(B -> T))` with `z` not free in `T`, derive
    /// `close(outer, (~Qz.~B) -> T)`: the existential elimination pattern.
    fn exists_elim(
        &mut self,
        outer: &[Binder],
        z: Binder,
        premise: usize,
    ) -> Result<usize, TransformError> {
        let body = peel(self.formula(premise), outer.len() + 1)?;
        let (b, t) = split_implies(body)?;
        let (b, t) = (b.clone(), t.clone());
        let not_t = Formula::not(t.clone());
        let not_b = Formula::not(b.clone());
        let all_not_b = match z {
            Binder::P(x) => Formula::Forall(x, Box::new(not_b.clone())),
            Binder::J(u) => Formula::Jforall(u, Box::new(not_b.clone())),
        };
        let ex = Formula::not(all_not_b.clone());

        let mut inner: Vec<Binder> = outer.to_vec();
        inner.push(z);
        let contra = Formula::implies(
            Formula::implies(b.clone(), t.clone()),
            Formula::implies(not_t.clone(), not_b.clone()),
        );
        let s1 = self.taut_closed(&inner, contra)?;
        let s2 = match z {
            Binder::J(u) => self.ax_closed(
                outer,
                SchemaId::Xv,
                Witnesses {
                    phi: Some(Formula::implies(not_t.clone(), not_b.clone())),
                    psi: Some(Formula::implies(b.clone(), t.clone())),
                    u: Some(u),
                    ..Default::default()
                },
            )?,
            Binder::P(x) => self.ax_closed(
                outer,
                SchemaId::Xix,
                Witnesses {
                    phi: Some(Formula::implies(not_t.clone(), not_b.clone())),
                    psi: Some(Formula::implies(b.clone(), t.clone())),
                    x: Some(x),
                    ..Default::default()
                },
            )?,
        };
        let s3 = self.mp_under(outer, s1, s2)?;
        let s4 = self.mp_under(outer, premise, s3)?;
        let s5 = match z {
            Binder::J(u) => self.ax_closed(
                outer,
                SchemaId::Xvi,
                Witnesses {
                    phi: Some(not_b.clone()),
                    psi: Some(not_t.clone()),
                    u: Some(u),
                    ..Default::default()
                },
            )?,
            Binder::P(x) => self.ax_closed(
                outer,
                SchemaId::Xx,
                Witnesses {
                    phi: Some(not_b.clone()),
                    psi: Some(not_t.clone()),
                    x: Some(x),
                    ..Default::default()
                },
            )?,
        };
        let s6 = self.mp_under(outer, s4, s5)?;
        let s7 = self.taut_closed(
            outer,
            Formula::implies(
                Formula::implies(not_t.clone(), all_not_b.clone()),
                Formula::implies(ex.clone(), Formula::not(not_t.clone())),
            ),
        )?;
        let s8 = self.mp_under(outer, s6, s7)?;
        let s9 = self.taut_closed(
            outer,
            Formula::implies(
                Formula::implies(ex.clone(), Formula::not(not_t.clone())),
                Formula::implies(
                    Formula::implies(Formula::not(not_t.clone()), t.clone()),
                    Formula::implies(ex.clone(), t.clone()),
                ),
            ),
        )?;
        let s10 = self.mp_under(outer, s8, s9)?;
        let s11 = self.taut_closed(
            outer,
            Formula::implies(Formula::not(not_t.clone()), t.clone()),
        )?;
        self.mp_under(outer, s11, s10)
    }

    /// Append another derivation's steps, shifting its internal references.
    fn splice(&mut self, other: &Derivation) -> usize {
        let offset = self.steps.len();
        for step in &other.steps {
            let just = match &step.just {
                Justification::Mp(i, j) => Justification::Mp(i + offset, j + offset),
                other => other.clone(),
            };
            self.steps.push(Step {
                formula: step.formula.clone(),
                just,
            });
        }
        self.steps.len() - 1
    }

    /// Bridge from an accepted step to an alpha-congruent target formula via
    /// the identity-of-alpha-variants axiom.
    fn alpha_bridge(&mut self, from: usize, target: Formula) -> Result<usize, TransformError> {
        let source = self.formula(from).clone();
        if source == target {
            return Ok(from);
        }
        if !alpha_eq(&source, &target) {
            return Err(TransformError::Internal(format!(
                "`{source}` and `{target}` are not alpha-congruent"
            )));
        }
        let ident = self.ax(
            SchemaId::X,
            Witnesses::phi_psi(source.clone(), target.clone()),
        )?;
        let xi = self.ax(SchemaId::Xi, Witnesses::phi_psi(source, target))?;
        let imp = self.mp(ident, xi)?;
        self.mp(from, imp)
    }

    fn finish(self) -> Derivation {
        Derivation {
            system: self.system,
            hypotheses: self.hypotheses,
            steps: self.steps,
        }
    }
}

/// A checked, hypothesis-free derivation of
/// `box(phi -> psi) -> (box phi -> box psi)` in the base system.
///
/// The construction routes through the justification machinery: necessity as
/// justified truth in both directions, the application axiom under two
/// universal justification quantifiers, introduction of the existential via
/// the instantiation schema with the product term, and two existential
/// eliminations.
pub fn derive_k(phi: &Formula, psi: &Formula) -> Derivation {
    build_k(phi, psi).expect("the K template must assemble for proper inputs")
}

fn build_k(phi: &Formula, psi: &Formula) -> Result<Derivation, TransformError> {
    let phin = normalize(phi);
    let psin = normalize(psi);
    let a = Formula::implies(phin.clone(), psin.clone());
    let base = a.fvar_j().iter().map(|v| v.0 + 1).max().unwrap_or(0);
    let u = VarJ(base);
    let v = VarJ(base + 1);
    let y = VarJ(base + 2);

    let qa = jexists_member(&a, u);
    let qphi = jexists_member(&phin, v);
    let qpsi = jexists_member(&psin, y);
    let box_a = Formula::boxed(a.clone());
    let box_phi = Formula::boxed(phin.clone());
    let box_psi = Formula::boxed(psin.clone());

    let mut b = Builder::new(SystemId::Ax, Vec::new());

    // necessity as justified truth, unpacked in the needed directions
    let iff_a = b.ax(
        SchemaId::Vi,
        Witnesses {
            phi: Some(a.clone()),
            u: Some(u),
            ..Default::default()
        },
    )?;
    let g1 = extract_direction(&mut b, iff_a, &box_a, &qa, true)?;
    let iff_phi = b.ax(
        SchemaId::Vi,
        Witnesses {
            phi: Some(phin.clone()),
            u: Some(v),
            ..Default::default()
        },
    )?;
    let g2 = extract_direction(&mut b, iff_phi, &box_phi, &qphi, true)?;
    let iff_psi = b.ax(
        SchemaId::Vi,
        Witnesses {
            phi: Some(psin.clone()),
            u: Some(y),
            ..Default::default()
        },
    )?;
    let g3 = extract_direction(&mut b, iff_psi, &box_psi, &qpsi, false)?;

    // under jall u, jall v: application plus existential introduction give
    // (A:u) -> ((phi:v) -> Ex y.(psi:y))
    let au = Formula::member(a.clone(), Term::Var(u));
    let phiv = Formula::member(phin.clone(), Term::Var(v));
    let psiuv = Formula::member(psin.clone(), Term::prod(Term::Var(u), Term::Var(v)));
    let bu = [Binder::J(u)];
    let buv = [Binder::J(u), Binder::J(v)];

    let c_app = b.ax_closed(
        &buv,
        SchemaId::Iii,
        Witnesses {
            phi: Some(phin.clone()),
            psi: Some(psin.clone()),
            s: Some(Term::Var(u)),
            t: Some(Term::Var(v)),
            ..Default::default()
        },
    )?;
    let c_intro = b.ax_closed(
        &buv,
        SchemaId::Xiii,
        Witnesses {
            phi: Some(Formula::member(psin.clone(), Term::Var(y))),
            u: Some(y),
            t: Some(Term::prod(Term::Var(u), Term::Var(v))),
            ..Default::default()
        },
    )?;
    let app_body = Formula::implies(
        au.clone(),
        Formula::implies(phiv.clone(), psiuv.clone()),
    );
    let chained = Formula::implies(au.clone(), Formula::implies(phiv.clone(), qpsi.clone()));
    let t_syl = b.taut_closed(
        &buv,
        Formula::implies(
            app_body,
            Formula::implies(
                Formula::implies(psiuv.clone(), qpsi.clone()),
                chained.clone(),
            ),
        ),
    )?;
    let m1 = b.mp_under(&buv, c_app, t_syl)?;
    let m2 = b.mp_under(&buv, c_intro, m1)?;

    let swapped = Formula::implies(phiv.clone(), Formula::implies(au.clone(), qpsi.clone()));
    let t_swap = b.taut_closed(&buv, Formula::implies(chained, swapped))?;
    let m3 = b.mp_under(&buv, m2, t_swap)?;

    // eliminate v, swap back, eliminate u
    let m4 = b.exists_elim(&bu, Binder::J(v), m3)?;
    let t_swap2 = b.taut_closed(
        &bu,
        Formula::implies(
            Formula::implies(qphi.clone(), Formula::implies(au.clone(), qpsi.clone())),
            Formula::implies(au.clone(), Formula::implies(qphi.clone(), qpsi.clone())),
        ),
    )?;
    let m5 = b.mp_under(&bu, m4, t_swap2)?;
    let m6 = b.exists_elim(&[], Binder::J(u), m5)?;

    // assemble box A -> (box phi -> box psi)
    let r = Formula::implies(qphi.clone(), qpsi.clone());
    let t_a = b.taut(Formula::implies(
        Formula::implies(box_a.clone(), qa.clone()),
        Formula::implies(
            Formula::implies(qa.clone(), r.clone()),
            Formula::implies(box_a.clone(), r.clone()),
        ),
    ))?;
    let p1 = b.mp(g1, t_a)?;
    let s_a = b.mp(m6, p1)?;
    let t_b = b.taut(Formula::implies(
        b.formula(s_a).clone(),
        Formula::implies(
            Formula::implies(box_phi.clone(), qphi.clone()),
            Formula::implies(
                box_a.clone(),
                Formula::implies(box_phi.clone(), qpsi.clone()),
            ),
        ),
    ))?;
    let p2 = b.mp(s_a, t_b)?;
    let s_b = b.mp(g2, p2)?;
    let t_c = b.taut(Formula::implies(
        b.formula(s_b).clone(),
        Formula::implies(
            Formula::implies(qpsi.clone(), box_psi.clone()),
            Formula::implies(
                box_a.clone(),
                Formula::implies(box_phi.clone(), box_psi.clone()),
            ),
        ),
    ))?;
    let p3 = b.mp(s_b, t_c)?;
    let k_hat = b.mp(g3, p3)?;

    let target = Formula::implies(
        Formula::boxed(Formula::implies(phi.clone(), psi.clone())),
        Formula::implies(Formula::boxed(phi.clone()), Formula::boxed(psi.clone())),
    );
    b.alpha_bridge(k_hat, target)?;
    Ok(b.finish())
}

/// Extract one direction of a desugared biconditional step.
fn extract_direction(
    b: &mut Builder,
    iff_idx: usize,
    p: &Formula,
    q: &Formula,
    forward: bool,
) -> Result<usize, TransformError> {
    let wanted = if forward {
        Formula::implies(p.clone(), q.clone())
    } else {
        Formula::implies(q.clone(), p.clone())
    };
    let t = b.taut(Formula::implies(b.formula(iff_idx).clone(), wanted))?;
    b.mp(iff_idx, t)
}

/// Turn an accepted hypothesis-free AxNec-system derivation of `phi` into an
/// accepted derivation of `box phi`.
///
/// Axiom steps are re-boxed by the AxNec rule, AxNec steps are pushed through
/// schema (4), and Modus Ponens steps distribute through a spliced K
/// template. The induction is a single pass memoizing one boxed step per
/// input index.
pub fn necessitate(d: &Derivation) -> Result<Derivation, TransformError> {
    let verdict = check(d);
    if !verdict.accepted {
        let (index, reason) = verdict.first_failure.unwrap();
        return Err(TransformError::InputNotAccepted { index, reason });
    }
    if !d.hypotheses.is_empty() {
        return Err(TransformError::HypothesesPresent);
    }
    if !d.system.has_axnec() {
        return Err(TransformError::SystemLacksAxNec(d.system));
    }

    let mut b = Builder::new(d.system, Vec::new());
    for step in &d.steps {
        b.push(step.formula.clone(), step.just.clone());
    }
    let mut boxed: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, step) in d.steps.iter().enumerate() {
        let bi = match &step.just {
            Justification::Hyp => unreachable!("hypothesis-free by precondition"),
            Justification::Ax(id, w) => b.push(
                Formula::boxed(step.formula.clone()),
                Justification::AxNec(*id, w.clone()),
            ),
            Justification::AxNec(_, _) => {
                if d.system != SystemId::Ax4AxNec {
                    return Err(TransformError::FourUnavailable(d.system));
                }
                let Formula::Box(inner) = &step.formula else {
                    return Err(TransformError::Internal("AxNec step is not boxed".into()));
                };
                let four = b.ax(SchemaId::Four, Witnesses::phi((**inner).clone()))?;
                b.mp(i, four)?
            }
            Justification::Mp(p, q) => {
                let k = derive_k(&d.steps[*p].formula, &step.formula);
                let k_end = b.splice(&k);
                let half = b.mp(boxed[q], k_end)?;
                b.mp(boxed[p], half)?
            }
        };
        boxed.insert(i, bi);
    }
    Ok(b.finish())
}

/// Which constant to generalize and the quantified variable to use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenTarget {
    Prop { constant: String, var: VarP },
    Just { constant: String, var: VarJ },
}

impl GenTarget {
    fn constant(&self) -> &str {
        match self {
            GenTarget::Prop { constant, .. } | GenTarget::Just { constant, .. } => constant,
        }
    }

    fn swap_to(&self, var: Binder) -> Substitution {
        match (self, var) {
            (GenTarget::Prop { constant, .. }, Binder::P(x)) => {
                Substitution::of_const_d(constant, Formula::Var(x))
            }
            (GenTarget::Just { constant, .. }, Binder::J(u)) => {
                Substitution::of_const_c(constant, Term::Var(u))
            }
            _ => unreachable!("sorted by construction"),
        }
    }
}

fn occurs_const(f: &Formula, target: &GenTarget) -> bool {
    let fc = f.fcon();
    match target {
        GenTarget::Prop { constant, .. } => fc.consts_d.contains(constant),
        GenTarget::Just { constant, .. } => fc.consts_c.contains(constant),
    }
}

/// From an accepted derivation of `phi` in which the constant occurs only
/// below the hypotheses, produce an accepted derivation of the universal
/// closure `Q w.(phi[k := w])`.
pub fn generalize_constant(
    d: &Derivation,
    target: &GenTarget,
) -> Result<Derivation, TransformError> {
    let verdict = check(d);
    if !verdict.accepted {
        let (index, reason) = verdict.first_failure.unwrap();
        return Err(TransformError::InputNotAccepted { index, reason });
    }
    let Some(conclusion) = d.conclusion().cloned() else {
        return Err(TransformError::Internal("empty derivation".into()));
    };
    if !occurs_const(&conclusion, target) {
        return Err(TransformError::ConstantAbsent(target.constant().into()));
    }
    for h in &d.hypotheses {
        if occurs_const(h, target) {
            return Err(TransformError::ConstantInHypotheses(target.constant().into()));
        }
    }
    let (all_p, all_j) = conclusion.all_vars();
    match target {
        GenTarget::Prop { var, .. } => {
            if all_p.contains(var) {
                return Err(TransformError::VariableNotFresh(var.to_string()));
            }
        }
        GenTarget::Just { var, .. } => {
            if all_j.contains(var) {
                return Err(TransformError::VariableNotFresh(var.to_string()));
            }
        }
    }

    // internal working variable, fresh for the entire derivation including
    // witness data
    let fresh = fresh_binder(d, target);
    let swap = target.swap_to(fresh);

    let mut b = Builder::new(d.system, d.hypotheses.clone());
    for step in &d.steps {
        b.push(step.formula.clone(), step.just.clone());
    }

    let mut generalized: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, step) in d.steps.iter().enumerate() {
        if !occurs_const(&step.formula, target) {
            continue;
        }
        let goal = close(&[fresh], apply(&step.formula, &swap));
        let gi = match &step.just {
            Justification::Hyp => {
                return Err(TransformError::ConstantInHypotheses(
                    target.constant().into(),
                ))
            }
            Justification::Ax(id, w) => {
                generalize_axiom_step(&mut b, &step.formula, *id, w, target, fresh, &swap, goal.clone())?
            }
            Justification::AxNec(_, _) => {
                return Err(TransformError::AxNecStepBlocksGeneralization)
            }
            Justification::Mp(p, q) => {
                let phi_new = apply(&step.formula, &swap);
                let q_gen = generalized[q];
                if occurs_const(&d.steps[*p].formula, target) {
                    let psi_new = apply(&d.steps[*p].formula, &swap);
                    let dist = distribution_axiom(&mut b, fresh, psi_new, phi_new)?;
                    let half = b.mp(q_gen, dist)?;
                    b.mp(generalized[p], half)?
                } else {
                    let psi_hat = apply(&d.steps[*p].formula, &swap);
                    let dist = export_axiom(&mut b, fresh, psi_hat.clone(), phi_new)?;
                    let half = b.mp(q_gen, dist)?;
                    let p_hat = b.alpha_bridge(*p, psi_hat)?;
                    b.mp(p_hat, half)?
                }
            }
        };
        if b.formula(gi) != &goal {
            return Err(TransformError::Internal(format!(
                "generalized step mismatch: `{}` vs `{goal}`",
                b.formula(gi)
            )));
        }
        generalized.insert(i, gi);
    }

    // rename the working variable to the requested one
    let last = b.steps.len() - 1;
    let requested = match target {
        GenTarget::Prop { var, .. } => Binder::P(*var),
        GenTarget::Just { var, .. } => Binder::J(*var),
    };
    if requested != fresh {
        let goal = close(&[requested], apply(&conclusion, &target.swap_to(requested)));
        b.alpha_bridge(last, goal)?;
    }
    Ok(b.finish())
}

fn fresh_binder(d: &Derivation, target: &GenTarget) -> Binder {
    let mut max_p = 0u32;
    let mut max_j = 0u32;
    let feed_f = |f: &Formula, max_p: &mut u32, max_j: &mut u32| {
        let (p, j) = f.all_vars();
        for x in p {
            *max_p = (*max_p).max(x.0 + 1);
        }
        for u in j {
            *max_j = (*max_j).max(u.0 + 1);
        }
    };
    let feed_t = |t: &Term, max_j: &mut u32| {
        for u in t.vars() {
            *max_j = (*max_j).max(u.0 + 1);
        }
    };
    for h in &d.hypotheses {
        feed_f(h, &mut max_p, &mut max_j);
    }
    for step in &d.steps {
        feed_f(&step.formula, &mut max_p, &mut max_j);
        if let Justification::Ax(_, w) | Justification::AxNec(_, w) = &step.just {
            for f in [&w.phi, &w.psi, &w.chi].into_iter().flatten() {
                feed_f(f, &mut max_p, &mut max_j);
            }
            for t in [&w.s, &w.t].into_iter().flatten() {
                feed_t(t, &mut max_j);
            }
            if let Some(x) = w.x {
                max_p = max_p.max(x.0 + 1);
            }
            if let Some(u) = w.u {
                max_j = max_j.max(u.0 + 1);
            }
            for sigma in [&w.sigma, &w.sigma2].into_iter().flatten() {
                let (sp, sj) = sigma.support();
                for slot in sp {
                    if let crate::subst::SlotP::Var(x) = slot {
                        max_p = max_p.max(x.0 + 1);
                    }
                    feed_f(&sigma_image_p(sigma, &slot), &mut max_p, &mut max_j);
                }
                for slot in sj {
                    if let crate::subst::SlotJ::Var(u) = slot {
                        max_j = max_j.max(u.0 + 1);
                    }
                    feed_t(&sigma_image_j(sigma, &slot), &mut max_j);
                }
            }
        }
    }
    match target {
        GenTarget::Prop { .. } => Binder::P(VarP(max_p)),
        GenTarget::Just { .. } => Binder::J(VarJ(max_j)),
    }
}

fn sigma_image_p(sigma: &Substitution, slot: &crate::subst::SlotP) -> Formula {
    match slot {
        crate::subst::SlotP::Var(x) => sigma.var_p(*x),
        crate::subst::SlotP::Const(d) => sigma.const_d(d),
    }
}

fn sigma_image_j(sigma: &Substitution, slot: &crate::subst::SlotJ) -> Term {
    match slot {
        crate::subst::SlotJ::Var(u) => sigma.var_j(*u),
        crate::subst::SlotJ::Const(c) => sigma.const_c(c),
    }
}

fn distribution_axiom(
    b: &mut Builder,
    z: Binder,
    psi: Formula,
    phi: Formula,
) -> Result<usize, TransformError> {
    match z {
        Binder::J(u) => b.ax(
            SchemaId::Xv,
            Witnesses {
                phi: Some(phi),
                psi: Some(psi),
                u: Some(u),
                ..Default::default()
            },
        ),
        Binder::P(x) => b.ax(
            SchemaId::Xix,
            Witnesses {
                phi: Some(phi),
                psi: Some(psi),
                x: Some(x),
                ..Default::default()
            },
        ),
    }
}

fn export_axiom(
    b: &mut Builder,
    z: Binder,
    psi: Formula,
    phi: Formula,
) -> Result<usize, TransformError> {
    match z {
        Binder::J(u) => b.ax(
            SchemaId::Xvi,
            Witnesses {
                phi: Some(phi),
                psi: Some(psi),
                u: Some(u),
                ..Default::default()
            },
        ),
        Binder::P(x) => b.ax(
            SchemaId::Xx,
            Witnesses {
                phi: Some(phi),
                psi: Some(psi),
                x: Some(x),
                ..Default::default()
            },
        ),
    }
}

#[allow(clippy::too_many_arguments)]
fn generalize_axiom_step(
    b: &mut Builder,
    formula: &Formula,
    id: SchemaId,
    w: &Witnesses,
    target: &GenTarget,
    fresh: Binder,
    swap: &Substitution,
    goal: Formula,
) -> Result<usize, TransformError> {
    let (prefix, body) = split_closure_binders(formula);
    let swapped_step = if id == SchemaId::Taut {
        let body_new = apply(body, swap);
        if is_skeleton_tautology(&body_new) != Ok(true) {
            return Err(TransformError::Internal(
                "constant swap broke a tautology skeleton".into(),
            ));
        }
        let mut binders = vec![fresh];
        binders.extend(prefix.iter().copied());
        let closed = close(&binders, body_new);
        if !closed.is_proper() {
            return Err(TransformError::Internal(
                "swapped tautology closure is improper".into(),
            ));
        }
        b.push(closed, Justification::Ax(SchemaId::Taut, Witnesses::default()))
    } else {
        let w_new = swap_witnesses(id, w, target, swap)?;
        let mut binders = vec![fresh];
        binders.extend(prefix.iter().copied());
        b.ax_closed(&binders, id, w_new)?
    };
    b.alpha_bridge(swapped_step, goal)
}

fn split_closure_binders(f: &Formula) -> (Vec<Binder>, &Formula) {
    let mut out = Vec::new();
    let mut cur = f;
    loop {
        match cur {
            Formula::Forall(x, body) if body.fvar_p().contains(x) => {
                out.push(Binder::P(*x));
                cur = body;
            }
            Formula::Jforall(u, body) if body.fvar_j().contains(u) => {
                out.push(Binder::J(*u));
                cur = body;
            }
            _ => return (out, cur),
        }
    }
}

/// Witnesses for the same schema describing the constant-swapped instance:
/// `build_instance(id, swapped)` is alpha-congruent (and in the single-binder
/// cases equal) to `build_instance(id, w)[k := w]`.
fn swap_witnesses(
    id: SchemaId,
    w: &Witnesses,
    target: &GenTarget,
    swap: &Substitution,
) -> Result<Witnesses, TransformError> {
    let _ = target;
    let sub_f = |f: &Option<Formula>| f.as_ref().map(|f| apply(f, swap));
    let sub_t = |t: &Option<Term>| t.as_ref().map(|t| apply_term(t, swap));
    let missing = |name: &'static str| TransformError::Internal(format!("missing witness {name}"));

    let mut out = Witnesses::default();
    match id {
        SchemaId::Taut => unreachable!("handled by the caller"),
        SchemaId::I
        | SchemaId::Ii
        | SchemaId::Vii
        | SchemaId::Four
        | SchemaId::E => {
            out.phi = sub_f(&w.phi);
        }
        SchemaId::Iii => {
            out.phi = sub_f(&w.phi);
            out.psi = sub_f(&w.psi);
            out.s = sub_t(&w.s);
            out.t = sub_t(&w.t);
        }
        SchemaId::Iv | SchemaId::V => {
            out.phi = sub_f(&w.phi);
            out.s = sub_t(&w.s);
            out.t = sub_t(&w.t);
        }
        SchemaId::Vi => {
            let phi = w.phi.as_ref().ok_or(missing("phi"))?;
            let u = w.u.ok_or(missing("u"))?;
            let node = Formula::Jforall(
                u,
                Box::new(Formula::not(Formula::member(phi.clone(), Term::Var(u)))),
            );
            let u_new = forced_var_j(&node, swap);
            out.phi = Some(apply(phi, swap));
            out.u = Some(u_new);
        }
        SchemaId::Viii | SchemaId::X | SchemaId::Xi => {
            out.phi = sub_f(&w.phi);
            out.psi = sub_f(&w.psi);
        }
        SchemaId::Ix => {
            out.phi = sub_f(&w.phi);
            out.psi = sub_f(&w.psi);
            out.chi = sub_f(&w.chi);
        }
        SchemaId::Xii => {
            out.chi = w.chi.clone();
            out.sigma = w.sigma.as_ref().map(|s| compose(s, swap));
            out.sigma2 = w.sigma2.as_ref().map(|s| compose(s, swap));
        }
        SchemaId::Xiii | SchemaId::Xiv => {
            let phi = w.phi.as_ref().ok_or(missing("phi"))?;
            let u = w.u.ok_or(missing("u"))?;
            let node = if id == SchemaId::Xiii {
                Formula::Jforall(u, Box::new(Formula::not(phi.clone())))
            } else {
                Formula::Jforall(u, Box::new(phi.clone()))
            };
            let u_new = forced_var_j(&node, swap);
            out.phi = Some(apply(phi, &swap.with_var_j(u, Term::Var(u_new))));
            out.u = Some(u_new);
            out.t = sub_t(&w.t);
        }
        SchemaId::Xv | SchemaId::Xvi => {
            let phi = w.phi.as_ref().ok_or(missing("phi"))?;
            let psi = w.psi.as_ref().ok_or(missing("psi"))?;
            let u = w.u.ok_or(missing("u"))?;
            let node = Formula::Jforall(
                u,
                Box::new(Formula::implies(psi.clone(), phi.clone())),
            );
            let u_new = forced_var_j(&node, swap);
            let inner = swap.with_var_j(u, Term::Var(u_new));
            out.phi = Some(apply(phi, &inner));
            out.psi = Some(if id == SchemaId::Xv {
                apply(psi, &inner)
            } else {
                apply(psi, swap)
            });
            out.u = Some(u_new);
        }
        SchemaId::Xvii | SchemaId::Xviii => {
            let phi = w.phi.as_ref().ok_or(missing("phi"))?;
            let x = w.x.ok_or(missing("x"))?;
            let node = if id == SchemaId::Xvii {
                Formula::Forall(x, Box::new(Formula::not(phi.clone())))
            } else {
                Formula::Forall(x, Box::new(phi.clone()))
            };
            let x_new = forced_var_p(&node, swap);
            out.phi = Some(apply(phi, &swap.with_var_p(x, Formula::Var(x_new))));
            out.x = Some(x_new);
            out.psi = sub_f(&w.psi);
        }
        SchemaId::Xix | SchemaId::Xx => {
            let phi = w.phi.as_ref().ok_or(missing("phi"))?;
            let psi = w.psi.as_ref().ok_or(missing("psi"))?;
            let x = w.x.ok_or(missing("x"))?;
            let node = Formula::Forall(
                x,
                Box::new(Formula::implies(psi.clone(), phi.clone())),
            );
            let x_new = forced_var_p(&node, swap);
            let inner = swap.with_var_p(x, Formula::Var(x_new));
            out.phi = Some(apply(phi, &inner));
            out.psi = Some(if id == SchemaId::Xix {
                apply(psi, &inner)
            } else {
                apply(psi, swap)
            });
            out.x = Some(x_new);
        }
        SchemaId::Xxi => {
            let s = w.s.as_ref().ok_or(missing("s"))?;
            let t = w.t.as_ref().ok_or(missing("t"))?;
            let x = w.x.ok_or(missing("x"))?;
            let node = Formula::Forall(
                x,
                Box::new(Formula::implies(
                    Formula::member(Formula::Var(x), s.clone()),
                    Formula::member(Formula::Var(x), t.clone()),
                )),
            );
            let x_new = forced_var_p(&node, swap);
            out.s = Some(apply_term(s, swap));
            out.t = Some(apply_term(t, swap));
            out.x = Some(x_new);
        }
        SchemaId::Xxii => {
            out.s = sub_t(&w.s);
            out.t = sub_t(&w.t);
        }
        SchemaId::Xxiii => {
            out.t = w.t.clone();
            out.sigma = w.sigma.as_ref().map(|s| compose(s, swap));
            out.sigma2 = w.sigma2.as_ref().map(|s| compose(s, swap));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::check;
    use super::*;
    use crate::syntax::{parse_formula, Signature};

    fn sig() -> Signature {
        Signature::with(&["d1", "d2"], &["c1"])
    }

    fn f(src: &str) -> Formula {
        parse_formula(src, &sig()).unwrap()
    }

    #[test]
    fn k_template_checks_for_simple_inputs() {
        let k = derive_k(&f("x0"), &f("x1"));
        assert_eq!(k.system, SystemId::Ax);
        assert!(k.hypotheses.is_empty());
        let v = check(&k);
        assert!(v.accepted, "{:?}", v.first_failure);
        assert_eq!(
            k.conclusion().unwrap(),
            &f("box(x0 -> x1) -> (box x0 -> box x1)")
        );
    }

    #[test]
    fn k_template_conclusion_shape_for_constants() {
        let k = derive_k(&f("d1"), &f("d1"));
        assert!(check(&k).accepted);
        assert_eq!(
            k.conclusion().unwrap(),
            &f("box(d1 -> d1) -> (box d1 -> box d1)")
        );
    }

    #[test]
    fn k_template_handles_quantified_inputs() {
        // non-canonical bound names force the final alpha bridge
        let phi = f("all x5. x5 -> x1");
        let psi = f("jall v4. x0 : v4");
        let k = derive_k(&phi, &psi);
        let v = check(&k);
        assert!(v.accepted, "{:?}", v.first_failure);
        let expected = Formula::implies(
            Formula::boxed(Formula::implies(phi.clone(), psi.clone())),
            Formula::implies(Formula::boxed(phi), Formula::boxed(psi)),
        );
        assert_eq!(k.conclusion().unwrap(), &expected);
    }

    #[test]
    fn necessitate_axiom_step() {
        let d = Derivation {
            system: SystemId::Ax4AxNec,
            hypotheses: vec![],
            steps: vec![Step {
                formula: f("box x0 -> x0"),
                just: Justification::Ax(SchemaId::Vii, Witnesses::phi(f("x0"))),
            }],
        };
        let out = necessitate(&d).unwrap();
        assert!(check(&out).accepted);
        assert_eq!(out.conclusion().unwrap(), &f("box (box x0 -> x0)"));
    }

    #[test]
    fn necessitate_axnec_step_uses_four() {
        let d = Derivation {
            system: SystemId::Ax4AxNec,
            hypotheses: vec![],
            steps: vec![Step {
                formula: f("box (box x0 -> x0)"),
                just: Justification::AxNec(SchemaId::Vii, Witnesses::phi(f("x0"))),
            }],
        };
        let out = necessitate(&d).unwrap();
        let v = check(&out);
        assert!(v.accepted, "{:?}", v.first_failure);
        assert_eq!(out.conclusion().unwrap(), &f("box box (box x0 -> x0)"));
    }

    #[test]
    fn necessitate_mp_step_splices_k() {
        // derive x0 -> x0 by mp from two tautologies, then box it
        let a = f("x0 -> x0");
        let b_f = f("(x0 -> x0) -> (x0 -> x0)");
        let d = Derivation {
            system: SystemId::Ax4AxNec,
            hypotheses: vec![],
            steps: vec![
                Step {
                    formula: a.clone(),
                    just: Justification::Ax(SchemaId::Taut, Witnesses::default()),
                },
                Step {
                    formula: b_f,
                    just: Justification::Ax(SchemaId::Taut, Witnesses::default()),
                },
                Step {
                    formula: a.clone(),
                    just: Justification::Mp(0, 1),
                },
            ],
        };
        let out = necessitate(&d).unwrap();
        let v = check(&out);
        assert!(v.accepted, "{:?}", v.first_failure);
        assert_eq!(out.conclusion().unwrap(), &Formula::boxed(a));
    }

    #[test]
    fn necessitate_rejects_hypotheses_and_wrong_systems() {
        let d = Derivation {
            system: SystemId::Ax4AxNec,
            hypotheses: vec![f("d1")],
            steps: vec![Step {
                formula: f("d1"),
                just: Justification::Hyp,
            }],
        };
        assert_eq!(necessitate(&d), Err(TransformError::HypothesesPresent));

        let d = Derivation {
            system: SystemId::Ax4,
            hypotheses: vec![],
            steps: vec![Step {
                formula: f("box x0 -> x0"),
                just: Justification::Ax(SchemaId::Vii, Witnesses::phi(f("x0"))),
            }],
        };
        assert_eq!(
            necessitate(&d),
            Err(TransformError::SystemLacksAxNec(SystemId::Ax4))
        );
    }

    #[test]
    fn generalize_constant_paper_instance() {
        // from |- (d1:s) -> (d1:s) to |- all x0.((x0:s) -> (x0:s))
        let s = Term::Const("c1".into());
        let inst = Formula::implies(
            Formula::member(Formula::Const("d1".into()), s.clone()),
            Formula::member(Formula::Const("d1".into()), s.clone()),
        );
        let d = Derivation {
            system: SystemId::Ax,
            hypotheses: vec![],
            steps: vec![Step {
                formula: inst,
                just: Justification::Ax(SchemaId::Taut, Witnesses::default()),
            }],
        };
        let out = generalize_constant(
            &d,
            &GenTarget::Prop {
                constant: "d1".into(),
                var: VarP(0),
            },
        )
        .unwrap();
        let v = check(&out);
        assert!(v.accepted, "{:?}", v.first_failure);
        assert_eq!(
            out.conclusion().unwrap(),
            &f("all x0.((x0 : c1) -> (x0 : c1))")
        );
    }

    #[test]
    fn generalize_constant_axiom_vii() {
        let d = Derivation {
            system: SystemId::Ax,
            hypotheses: vec![],
            steps: vec![Step {
                formula: f("box d1 -> d1"),
                just: Justification::Ax(SchemaId::Vii, Witnesses::phi(f("d1"))),
            }],
        };
        let out = generalize_constant(
            &d,
            &GenTarget::Prop {
                constant: "d1".into(),
                var: VarP(0),
            },
        )
        .unwrap();
        let v = check(&out);
        assert!(v.accepted, "{:?}", v.first_failure);
        assert_eq!(out.conclusion().unwrap(), &f("all x0.(box x0 -> x0)"));
    }

    #[test]
    fn generalize_constant_through_modus_ponens() {
        // derive d1:c1 -> ((d1:c1) | d2) by taut+mp, generalize c1
        let a = f("(d1 : c1) -> (~(d1 : c1) -> d2)");
        let taut2 = Formula::implies(f("d1 : c1 -> d1 : c1"), a.clone());
        let d = Derivation {
            system: SystemId::Ax,
            hypotheses: vec![],
            steps: vec![
                Step {
                    formula: f("d1 : c1 -> d1 : c1"),
                    just: Justification::Ax(SchemaId::Taut, Witnesses::default()),
                },
                Step {
                    formula: taut2,
                    just: Justification::Ax(SchemaId::Taut, Witnesses::default()),
                },
                Step {
                    formula: a,
                    just: Justification::Mp(0, 1),
                },
            ],
        };
        let out = generalize_constant(
            &d,
            &GenTarget::Just {
                constant: "c1".into(),
                var: VarJ(0),
            },
        )
        .unwrap();
        let v = check(&out);
        assert!(v.accepted, "{:?}", v.first_failure);
        assert_eq!(
            out.conclusion().unwrap(),
            &f("jall v0.((d1 : v0) -> (~(d1 : v0) -> d2))")
        );
    }

    #[test]
    fn generalize_constant_rejects_bad_inputs() {
        let d = Derivation {
            system: SystemId::Ax,
            hypotheses: vec![f("d1")],
            steps: vec![Step {
                formula: f("d1"),
                just: Justification::Hyp,
            }],
        };
        let t = GenTarget::Prop {
            constant: "d1".into(),
            var: VarP(0),
        };
        assert_eq!(
            generalize_constant(&d, &t),
            Err(TransformError::ConstantInHypotheses("d1".into()))
        );

        let d = Derivation {
            system: SystemId::Ax,
            hypotheses: vec![],
            steps: vec![Step {
                formula: f("x0 -> x0"),
                just: Justification::Ax(SchemaId::Taut, Witnesses::default()),
            }],
        };
        assert_eq!(
            generalize_constant(&d, &t),
            Err(TransformError::ConstantAbsent("d1".into()))
        );

        let d = Derivation {
            system: SystemId::Ax,
            hypotheses: vec![],
            steps: vec![Step {
                formula: f("d1 -> d1"),
                just: Justification::Ax(SchemaId::Taut, Witnesses::default()),
            }],
        };
        assert_eq!(
            generalize_constant(
                &d,
                &GenTarget::Prop {
                    constant: "d1".into(),
                    var: VarP(0)
                }
            )
            .map(|out| out.conclusion().cloned()),
            Ok(Some(f("all x0. (x0 -> x0)")))
        );
    }
}
