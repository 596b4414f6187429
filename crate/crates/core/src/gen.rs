//! Seeded generators for formulas, terms, substitutions, witnesses and
//! assignments. Everything is driven by an explicit ChaCha stream so sampled
//! checks are reproducible run to run.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::axioms::{build_instance, SchemaId, SystemId, Witnesses};
use crate::models::Assignment;
use crate::proofs::{Derivation, Justification, Step};
use crate::subst::{normalize, syn_ref, Substitution};
use crate::syntax::{Formula, Signature, Term, VarJ, VarP};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Name pool the generators draw from.
#[derive(Debug, Clone)]
pub struct Vocab {
    pub props: Vec<String>,
    pub justs: Vec<String>,
    pub var_p_range: u32,
    pub var_j_range: u32,
}

impl Default for Vocab {
    fn default() -> Self {
        Vocab {
            props: vec!["d1".into(), "d2".into()],
            justs: vec!["c1".into()],
            var_p_range: 3,
            var_j_range: 3,
        }
    }
}

impl Vocab {
    pub fn from_signature(sig: &Signature) -> Self {
        Vocab {
            props: sig.props.iter().cloned().collect(),
            justs: sig.justs.iter().cloned().collect(),
            var_p_range: 3,
            var_j_range: 3,
        }
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::new();
        for p in &self.props {
            let _ = sig.declare_prop(p);
        }
        for j in &self.justs {
            let _ = sig.declare_just(j);
        }
        sig
    }
}

pub fn gen_var_p(rng: &mut ChaCha8Rng, vocab: &Vocab) -> VarP {
    VarP(rng.gen_range(0..vocab.var_p_range))
}

pub fn gen_var_j(rng: &mut ChaCha8Rng, vocab: &Vocab) -> VarJ {
    VarJ(rng.gen_range(0..vocab.var_j_range))
}

pub fn gen_term(rng: &mut ChaCha8Rng, vocab: &Vocab, depth: u32) -> Term {
    if depth == 0 || rng.gen_bool(0.45) {
        if !vocab.justs.is_empty() && rng.gen_bool(0.35) {
            let i = rng.gen_range(0..vocab.justs.len());
            return Term::Const(vocab.justs[i].clone());
        }
        return Term::Var(gen_var_j(rng, vocab));
    }
    let a = gen_term(rng, vocab, depth - 1);
    let b = gen_term(rng, vocab, depth - 1);
    if rng.gen_bool(0.5) {
        Term::prod(a, b)
    } else {
        Term::sum(a, b)
    }
}

/// Random proper formula with bounded depth.
pub fn gen_formula(rng: &mut ChaCha8Rng, vocab: &Vocab, depth: u32) -> Formula {
    if depth == 0 {
        return gen_leaf(rng, vocab);
    }
    match rng.gen_range(0..14u32) {
        0 | 1 => Formula::implies(
            gen_formula(rng, vocab, depth - 1),
            gen_formula(rng, vocab, depth - 1),
        ),
        2 => Formula::not(gen_formula(rng, vocab, depth - 1)),
        3 => Formula::ident(
            gen_formula(rng, vocab, depth - 1),
            gen_formula(rng, vocab, depth - 1),
        ),
        4 => Formula::refers(
            gen_formula(rng, vocab, depth - 1),
            gen_formula(rng, vocab, depth - 1),
        ),
        5 => Formula::TermIdent(
            gen_term(rng, vocab, depth - 1),
            gen_term(rng, vocab, depth - 1),
        ),
        6 => Formula::TermLe(
            gen_term(rng, vocab, depth - 1),
            gen_term(rng, vocab, depth - 1),
        ),
        7 => Formula::is_true(gen_formula(rng, vocab, depth - 1)),
        8 => Formula::is_false(gen_formula(rng, vocab, depth - 1)),
        9 => Formula::boxed(gen_formula(rng, vocab, depth - 1)),
        10 => Formula::member(
            gen_formula(rng, vocab, depth - 1),
            gen_term(rng, vocab, depth - 1),
        ),
        11 => {
            let body = gen_formula(rng, vocab, depth - 1);
            let free: Vec<VarP> = body.fvar_p().into_iter().collect();
            if free.is_empty() {
                body
            } else {
                let x = free[rng.gen_range(0..free.len())];
                Formula::Forall(x, Box::new(body))
            }
        }
        12 => {
            let body = gen_formula(rng, vocab, depth - 1);
            let free: Vec<VarJ> = body.fvar_j().into_iter().collect();
            if free.is_empty() {
                body
            } else {
                let u = free[rng.gen_range(0..free.len())];
                Formula::Jforall(u, Box::new(body))
            }
        }
        _ => gen_leaf(rng, vocab),
    }
}

fn gen_leaf(rng: &mut ChaCha8Rng, vocab: &Vocab) -> Formula {
    if !vocab.props.is_empty() && rng.gen_bool(0.3) {
        let i = rng.gen_range(0..vocab.props.len());
        Formula::Const(vocab.props[i].clone())
    } else {
        Formula::Var(gen_var_p(rng, vocab))
    }
}

/// Formula guaranteed to have `x` free.
pub fn gen_formula_with_free_p(
    rng: &mut ChaCha8Rng,
    vocab: &Vocab,
    depth: u32,
    x: VarP,
) -> Formula {
    let f = gen_formula(rng, vocab, depth);
    if f.fvar_p().contains(&x) {
        f
    } else if rng.gen_bool(0.5) {
        Formula::implies(Formula::Var(x), f)
    } else {
        Formula::implies(f, Formula::Var(x))
    }
}

/// Formula guaranteed to have `u` free.
pub fn gen_formula_with_free_j(
    rng: &mut ChaCha8Rng,
    vocab: &Vocab,
    depth: u32,
    u: VarJ,
) -> Formula {
    let f = gen_formula(rng, vocab, depth);
    if f.fvar_j().contains(&u) {
        f
    } else {
        Formula::member(f, Term::Var(u))
    }
}

/// Formula guaranteed to avoid `u` among its free justification variables.
pub fn gen_formula_without_free_j(
    rng: &mut ChaCha8Rng,
    vocab: &Vocab,
    depth: u32,
    u: VarJ,
) -> Formula {
    for _ in 0..8 {
        let f = gen_formula(rng, vocab, depth);
        if !f.fvar_j().contains(&u) {
            return f;
        }
    }
    Formula::Var(VarP(0))
}

pub fn gen_formula_without_free_p(
    rng: &mut ChaCha8Rng,
    vocab: &Vocab,
    depth: u32,
    x: VarP,
) -> Formula {
    for _ in 0..8 {
        let f = gen_formula(rng, vocab, depth);
        if !f.fvar_p().contains(&x) {
            return f;
        }
    }
    Formula::TermLe(Term::Var(VarJ(0)), Term::Var(VarJ(0)))
}

/// Random substitution with variable-only support.
pub fn gen_substitution(rng: &mut ChaCha8Rng, vocab: &Vocab) -> Substitution {
    let mut sigma = Substitution::identity();
    for _ in 0..rng.gen_range(0..3u32) {
        sigma.set_var_p(gen_var_p(rng, vocab), gen_formula(rng, vocab, 2));
    }
    for _ in 0..rng.gen_range(0..3u32) {
        sigma.set_var_j(gen_var_j(rng, vocab), gen_term(rng, vocab, 2));
    }
    sigma
}

/// Random assignment over the free variables of `phi`.
pub fn sample_assignment(
    rng: &mut ChaCha8Rng,
    n_values: usize,
    n_justs: usize,
    phi: &Formula,
) -> Assignment {
    let fc = phi.fcon();
    let mut gamma = Assignment::new();
    for x in fc.vars_p {
        gamma.prop.insert(x, rng.gen_range(0..n_values));
    }
    for u in fc.vars_j {
        gamma.just.insert(u, rng.gen_range(0..n_justs));
    }
    gamma
}

fn gen_tautology(rng: &mut ChaCha8Rng, vocab: &Vocab) -> Formula {
    let a = gen_formula(rng, vocab, 1);
    let b = gen_formula(rng, vocab, 1);
    let c = gen_formula(rng, vocab, 1);
    match rng.gen_range(0..6u32) {
        0 => Formula::implies(a.clone(), a),
        1 => Formula::implies(a.clone(), Formula::implies(b, a)),
        2 => Formula::implies(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(
                Formula::implies(b, c.clone()),
                Formula::implies(a, c),
            ),
        ),
        3 => Formula::implies(Formula::not(Formula::not(a.clone())), a),
        4 => Formula::implies(a.clone(), Formula::not(Formula::not(a))),
        5 => Formula::implies(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(Formula::not(b), Formula::not(a)),
        ),
        _ => unreachable!(),
    }
}

/// Valid witnesses for a schema, or `None` when this draw failed a side
/// condition (callers retry).
pub fn gen_witnesses(rng: &mut ChaCha8Rng, id: SchemaId, vocab: &Vocab) -> Option<Witnesses> {
    let mut w = Witnesses::default();
    match id {
        SchemaId::Taut => {
            w.phi = Some(gen_tautology(rng, vocab));
        }
        SchemaId::I | SchemaId::Ii | SchemaId::Vii | SchemaId::Four | SchemaId::E => {
            w.phi = Some(gen_formula(rng, vocab, 2));
        }
        SchemaId::Iii => {
            w.phi = Some(gen_formula(rng, vocab, 2));
            w.psi = Some(gen_formula(rng, vocab, 2));
            w.s = Some(gen_term(rng, vocab, 2));
            w.t = Some(gen_term(rng, vocab, 2));
        }
        SchemaId::Iv | SchemaId::V => {
            w.phi = Some(gen_formula(rng, vocab, 2));
            w.s = Some(gen_term(rng, vocab, 2));
            w.t = Some(gen_term(rng, vocab, 2));
        }
        SchemaId::Vi => {
            let phi = gen_formula(rng, vocab, 2);
            let next = phi.fvar_j().iter().map(|v| v.0 + 1).max().unwrap_or(0);
            w.u = Some(VarJ(next + rng.gen_range(0..2)));
            w.phi = Some(phi);
        }
        SchemaId::Viii => {
            let phi = gen_formula(rng, vocab, 1);
            let filler = gen_formula(rng, vocab, 1);
            let psi = match rng.gen_range(0..4u32) {
                0 => Formula::implies(phi.clone(), filler),
                1 => Formula::implies(filler, Formula::not(phi.clone())),
                2 => Formula::boxed(Formula::ident(phi.clone(), filler)),
                _ => Formula::is_true(phi.clone()),
            };
            if !syn_ref(&phi, &psi) {
                return None;
            }
            w.phi = Some(phi);
            w.psi = Some(psi);
        }
        SchemaId::Ix => {
            w.phi = Some(gen_formula(rng, vocab, 2));
            w.psi = Some(gen_formula(rng, vocab, 2));
            w.chi = Some(gen_formula(rng, vocab, 2));
        }
        SchemaId::X => {
            let phi = gen_formula(rng, vocab, 3);
            let psi = if rng.gen_bool(0.5) {
                phi.clone()
            } else {
                normalize(&phi)
            };
            w.phi = Some(phi);
            w.psi = Some(psi);
        }
        SchemaId::Xi => {
            w.phi = Some(gen_formula(rng, vocab, 2));
            w.psi = Some(gen_formula(rng, vocab, 2));
        }
        SchemaId::Xii => {
            let x = gen_var_p(rng, vocab);
            w.chi = Some(gen_formula_with_free_p(rng, vocab, 2, x));
            w.sigma = Some(gen_substitution(rng, vocab));
            w.sigma2 = Some(gen_substitution(rng, vocab));
        }
        SchemaId::Xiii | SchemaId::Xiv => {
            let u = gen_var_j(rng, vocab);
            w.u = Some(u);
            w.phi = Some(gen_formula_with_free_j(rng, vocab, 2, u));
            w.t = Some(gen_term(rng, vocab, 2));
        }
        SchemaId::Xv => {
            let u = gen_var_j(rng, vocab);
            w.u = Some(u);
            w.psi = Some(gen_formula_with_free_j(rng, vocab, 2, u));
            w.phi = Some(gen_formula_with_free_j(rng, vocab, 2, u));
        }
        SchemaId::Xvi => {
            let u = gen_var_j(rng, vocab);
            w.u = Some(u);
            w.psi = Some(gen_formula_without_free_j(rng, vocab, 2, u));
            w.phi = Some(gen_formula_with_free_j(rng, vocab, 2, u));
        }
        SchemaId::Xvii | SchemaId::Xviii => {
            let x = gen_var_p(rng, vocab);
            w.x = Some(x);
            w.phi = Some(gen_formula_with_free_p(rng, vocab, 2, x));
            w.psi = Some(gen_formula(rng, vocab, 2));
        }
        SchemaId::Xix => {
            let x = gen_var_p(rng, vocab);
            w.x = Some(x);
            w.psi = Some(gen_formula_with_free_p(rng, vocab, 2, x));
            w.phi = Some(gen_formula_with_free_p(rng, vocab, 2, x));
        }
        SchemaId::Xx => {
            let x = gen_var_p(rng, vocab);
            w.x = Some(x);
            w.psi = Some(gen_formula_without_free_p(rng, vocab, 2, x));
            w.phi = Some(gen_formula_with_free_p(rng, vocab, 2, x));
        }
        SchemaId::Xxi => {
            w.s = Some(gen_term(rng, vocab, 2));
            w.t = Some(gen_term(rng, vocab, 2));
            w.x = Some(gen_var_p(rng, vocab));
        }
        SchemaId::Xxii => {
            w.s = Some(gen_term(rng, vocab, 2));
            w.t = Some(gen_term(rng, vocab, 2));
        }
        SchemaId::Xxiii => {
            let u = gen_var_j(rng, vocab);
            let base = gen_term(rng, vocab, 2);
            let base = if base.vars().is_empty() {
                Term::prod(base, Term::Var(u))
            } else {
                base
            };
            w.t = Some(base);
            w.sigma = Some(gen_substitution(rng, vocab));
            w.sigma2 = Some(gen_substitution(rng, vocab));
        }
    }
    Some(w)
}

/// Sampled axiom instance of the given system, retrying until a draw
/// satisfies its schema's side conditions.
pub fn sample_axiom_instance(
    rng: &mut ChaCha8Rng,
    sys: SystemId,
    vocab: &Vocab,
) -> Option<(SchemaId, Witnesses, Formula)> {
    for _ in 0..64 {
        let id = SchemaId::ALL[rng.gen_range(0..SchemaId::ALL.len())];
        if !sys.allows_schema(id) {
            continue;
        }
        let Some(w) = gen_witnesses(rng, id, vocab) else {
            continue;
        };
        if let Ok(inst) = build_instance(id, &w) {
            return Some((id, w, inst));
        }
    }
    None
}

/// Random accepted hypothesis-free derivation of at most `max_len` steps.
/// Axiom steps, AxNec steps (when the system has the rule) and Modus Ponens
/// steps all occur; MP premises are manufactured from in-proof tautologies.
pub fn gen_derivation(
    rng: &mut ChaCha8Rng,
    vocab: &Vocab,
    max_len: usize,
    sys: SystemId,
) -> Derivation {
    let target = rng.gen_range(1..=max_len.max(1));
    let mut steps: Vec<Step> = Vec::new();
    while steps.len() < target {
        let roll = rng.gen_range(0..10u32);
        if roll < 4 || steps.is_empty() {
            if let Some((id, w, inst)) = sample_axiom_instance(rng, sys, vocab) {
                steps.push(Step {
                    formula: inst,
                    just: Justification::Ax(id, w),
                });
            }
        } else if roll < 6 && sys.has_axnec() {
            if let Some((id, w, inst)) = sample_axiom_instance(rng, sys, vocab) {
                steps.push(Step {
                    formula: Formula::boxed(inst),
                    just: Justification::AxNec(id, w),
                });
            }
        } else if roll < 9 && steps.len() + 2 <= target {
            // fi, taut fi -> (g -> fi), then mp ends with g -> fi
            let i = rng.gen_range(0..steps.len());
            let fi = steps[i].formula.clone();
            let g = gen_formula(rng, vocab, 1);
            let taut = Formula::implies(
                fi.clone(),
                Formula::implies(g.clone(), fi.clone()),
            );
            steps.push(Step {
                formula: taut,
                just: Justification::Ax(SchemaId::Taut, Witnesses::default()),
            });
            let j = steps.len() - 1;
            steps.push(Step {
                formula: Formula::implies(g, fi),
                just: Justification::Mp(i, j),
            });
        } else {
            // direct modus ponens when an applicable pair already exists
            let mut found = None;
            'outer: for j in 0..steps.len() {
                if let Formula::Implies(a, b) = &steps[j].formula {
                    for i in 0..steps.len() {
                        if steps[i].formula == **a {
                            found = Some((i, j, (**b).clone()));
                            break 'outer;
                        }
                    }
                }
            }
            if let Some((i, j, b)) = found {
                steps.push(Step {
                    formula: b,
                    just: Justification::Mp(i, j),
                });
            }
        }
    }
    Derivation {
        system: sys,
        hypotheses: Vec::new(),
        steps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_formulas_are_proper() {
        let mut rng = seeded_rng(7);
        let vocab = Vocab::default();
        for _ in 0..500 {
            let f = gen_formula(&mut rng, &vocab, 4);
            assert!(f.is_proper(), "{f}");
        }
    }

    #[test]
    fn generated_derivations_are_accepted() {
        let mut rng = seeded_rng(23);
        let vocab = Vocab::default();
        let mut with_mp = 0;
        for _ in 0..120 {
            let d = gen_derivation(&mut rng, &vocab, 8, SystemId::Ax4AxNec);
            let v = crate::proofs::check(&d);
            assert!(v.accepted, "{:?}", v.first_failure);
            assert!(d.steps.len() <= 8);
            if d.steps.iter().any(|s| matches!(s.just, Justification::Mp(..))) {
                with_mp += 1;
            }
        }
        assert!(with_mp >= 30, "only {with_mp} derivations exercised MP");
    }

    #[test]
    fn every_schema_generates_instances() {
        let vocab = Vocab::default();
        for id in SchemaId::ALL {
            let mut rng = seeded_rng(11 + id as u64);
            let mut ok = 0;
            for _ in 0..40 {
                if let Some(w) = gen_witnesses(&mut rng, id, &vocab) {
                    if build_instance(id, &w).is_ok() {
                        ok += 1;
                    }
                }
            }
            assert!(ok >= 20, "schema {id} produced too few instances: {ok}");
        }
    }
}
