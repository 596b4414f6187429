//! The axiom system: schema identifiers, witnessed instance construction,
//! shape-directed recognition, and the skeleton tautology check.
//!
//! Schema ids follow the source enumeration (i)-(xxiii); `four` is
//! `box phi -> box box phi` and `e` is `dia phi -> box dia phi`. `taut`
//! covers the propositional base: any formula whose implication/negation
//! skeleton is a classical tautology.

mod recognize;

pub use recognize::{recognize, strip_closure};

use std::fmt;

use thiserror::Error;

use crate::subst::{alpha_eq, apply, apply_term, syn_ref, Substitution};
use crate::syntax::{Formula, Term, VarJ, VarP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemaId {
    Taut,
    I,
    Ii,
    Iii,
    Iv,
    V,
    Vi,
    Vii,
    Viii,
    Ix,
    X,
    Xi,
    Xii,
    Xiii,
    Xiv,
    Xv,
    Xvi,
    Xvii,
    Xviii,
    Xix,
    Xx,
    Xxi,
    Xxii,
    Xxiii,
    Four,
    E,
}

impl SchemaId {
    pub const ALL: [SchemaId; 26] = [
        SchemaId::Taut,
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
        SchemaId::Xii,
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
        SchemaId::Xxiii,
        SchemaId::Four,
        SchemaId::E,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemaId::Taut => "taut",
            SchemaId::I => "i",
            SchemaId::Ii => "ii",
            SchemaId::Iii => "iii",
            SchemaId::Iv => "iv",
            SchemaId::V => "v",
            SchemaId::Vi => "vi",
            SchemaId::Vii => "vii",
            SchemaId::Viii => "viii",
            SchemaId::Ix => "ix",
            SchemaId::X => "x",
            SchemaId::Xi => "xi",
            SchemaId::Xii => "xii",
            SchemaId::Xiii => "xiii",
            SchemaId::Xiv => "xiv",
            SchemaId::Xv => "xv",
            SchemaId::Xvi => "xvi",
            SchemaId::Xvii => "xvii",
            SchemaId::Xviii => "xviii",
            SchemaId::Xix => "xix",
            SchemaId::Xx => "xx",
            SchemaId::Xxi => "xxi",
            SchemaId::Xxii => "xxii",
            SchemaId::Xxiii => "xxiii",
            SchemaId::Four => "four",
            SchemaId::E => "e",
        }
    }

    pub fn parse(name: &str) -> Option<SchemaId> {
        SchemaId::ALL.iter().copied().find(|id| id.name() == name)
    }

    /// Base schemas belong to every system; `four`/`e` only to extensions.
    pub fn is_base(self) -> bool {
        !matches!(self, SchemaId::Four | SchemaId::E)
    }
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemId {
    Ax,
    Ax4,
    Axe,
    Ax4AxNec,
    AxeAxNec,
}

impl SystemId {
    pub fn name(self) -> &'static str {
        match self {
            SystemId::Ax => "AX",
            SystemId::Ax4 => "AX4",
            SystemId::Axe => "AXE",
            SystemId::Ax4AxNec => "AX4_AXNEC",
            SystemId::AxeAxNec => "AXE_AXNEC",
        }
    }

    pub fn parse(name: &str) -> Option<SystemId> {
        match name {
            "AX" => Some(SystemId::Ax),
            "AX4" => Some(SystemId::Ax4),
            "AXE" => Some(SystemId::Axe),
            "AX4_AXNEC" => Some(SystemId::Ax4AxNec),
            "AXE_AXNEC" => Some(SystemId::AxeAxNec),
            _ => None,
        }
    }

    pub fn has_axnec(self) -> bool {
        matches!(self, SystemId::Ax4AxNec | SystemId::AxeAxNec)
    }

    pub fn allows_schema(self, id: SchemaId) -> bool {
        match id {
            SchemaId::Four => matches!(self, SystemId::Ax4 | SystemId::Ax4AxNec),
            SchemaId::E => matches!(self, SystemId::Axe | SystemId::AxeAxNec),
            _ => true,
        }
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Named schema parameters. Only the fields a schema mentions are read;
/// extras are rejected so that witnessed steps stay canonical.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Witnesses {
    pub phi: Option<Formula>,
    pub psi: Option<Formula>,
    pub chi: Option<Formula>,
    pub s: Option<Term>,
    pub t: Option<Term>,
    pub x: Option<VarP>,
    pub u: Option<VarJ>,
    pub sigma: Option<Substitution>,
    pub sigma2: Option<Substitution>,
}

impl Witnesses {
    pub fn phi(f: Formula) -> Self {
        Witnesses {
            phi: Some(f),
            ..Default::default()
        }
    }

    pub fn phi_psi(a: Formula, b: Formula) -> Self {
        Witnesses {
            phi: Some(a),
            psi: Some(b),
            ..Default::default()
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AxiomError {
    #[error("schema {schema} needs witness `{name}`")]
    MissingWitness { schema: SchemaId, name: &'static str },
    #[error("schema {schema}: side condition violated: {condition}")]
    SideConditionViolated {
        schema: SchemaId,
        condition: String,
    },
    #[error("the base expression has no free variables")]
    EmptyVariableSet,
    #[error("tautology check limited to 16 distinct atoms, found {0}")]
    AtomBudgetExceeded(usize),
}

fn need<T: Clone>(
    w: &Option<T>,
    schema: SchemaId,
    name: &'static str,
) -> Result<T, AxiomError> {
    w.clone().ok_or(AxiomError::MissingWitness { schema, name })
}

fn side(ok: bool, schema: SchemaId, condition: &str) -> Result<(), AxiomError> {
    if ok {
        Ok(())
    } else {
        Err(AxiomError::SideConditionViolated {
            schema,
            condition: condition.to_string(),
        })
    }
}

/// `(sigma(z1) == sigma'(z1)) & ... & (sigma(zn) == sigma'(zn))` over the free
/// variables of `base`, propositional variables first, each family ascending,
/// `&` eliminated left-associatively.
pub fn expand_sigma_eq(
    sigma: &Substitution,
    sigma2: &Substitution,
    base: &Formula,
) -> Result<Formula, AxiomError> {
    let fc = base.fcon();
    let mut conjuncts: Vec<Formula> = Vec::new();
    for x in &fc.vars_p {
        conjuncts.push(Formula::ident(sigma.var_p(*x), sigma2.var_p(*x)));
    }
    for u in &fc.vars_j {
        conjuncts.push(Formula::TermIdent(sigma.var_j(*u), sigma2.var_j(*u)));
    }
    fold_conj(conjuncts)
}

/// Same for a term base; only justification variables occur.
pub fn expand_sigma_eq_term(
    sigma: &Substitution,
    sigma2: &Substitution,
    base: &Term,
) -> Result<Formula, AxiomError> {
    let conjuncts: Vec<Formula> = base
        .vars()
        .iter()
        .map(|u| Formula::TermIdent(sigma.var_j(*u), sigma2.var_j(*u)))
        .collect();
    fold_conj(conjuncts)
}

fn fold_conj(conjuncts: Vec<Formula>) -> Result<Formula, AxiomError> {
    let mut it = conjuncts.into_iter();
    let first = it.next().ok_or(AxiomError::EmptyVariableSet)?;
    Ok(it.fold(first, Formula::and))
}

/// Construct the exact canonical instance of a schema. All internal
/// substitution applications go through the substitution calculus, so bound
/// variables in the output carry their forced names.
pub fn build_instance(id: SchemaId, w: &Witnesses) -> Result<Formula, AxiomError> {
    use SchemaId::*;
    match id {
        Taut => {
            let phi = need(&w.phi, id, "phi")?;
            side(
                is_skeleton_tautology(&phi)?,
                id,
                "formula skeleton must be a classical tautology",
            )?;
            Ok(phi)
        }
        I => {
            let phi = need(&w.phi, id, "phi")?;
            Ok(Formula::iff(Formula::is_true(phi.clone()), phi))
        }
        Ii => {
            let phi = need(&w.phi, id, "phi")?;
            Ok(Formula::iff(
                Formula::is_false(phi.clone()),
                Formula::not(phi),
            ))
        }
        Iii => {
            let phi = need(&w.phi, id, "phi")?;
            let psi = need(&w.psi, id, "psi")?;
            let s = need(&w.s, id, "s")?;
            let t = need(&w.t, id, "t")?;
            Ok(Formula::implies(
                Formula::member(Formula::implies(phi.clone(), psi.clone()), s.clone()),
                Formula::implies(
                    Formula::member(phi, t.clone()),
                    Formula::member(psi, Term::prod(s, t)),
                ),
            ))
        }
        Iv => {
            let phi = need(&w.phi, id, "phi")?;
            let s = need(&w.s, id, "s")?;
            let t = need(&w.t, id, "t")?;
            Ok(Formula::implies(
                Formula::member(phi.clone(), s.clone()),
                Formula::member(phi, Term::sum(s, t)),
            ))
        }
        V => {
            let phi = need(&w.phi, id, "phi")?;
            let s = need(&w.s, id, "s")?;
            let t = need(&w.t, id, "t")?;
            Ok(Formula::implies(
                Formula::member(phi.clone(), t.clone()),
                Formula::member(phi, Term::sum(s, t)),
            ))
        }
        Vi => {
            let phi = need(&w.phi, id, "phi")?;
            let u = need(&w.u, id, "u")?;
            side(
                !phi.fvar_j().contains(&u),
                id,
                "u must not be free in phi",
            )?;
            let ex = jexists_member(&phi, u);
            Ok(Formula::iff(Formula::boxed(phi), ex))
        }
        Vii => {
            let phi = need(&w.phi, id, "phi")?;
            Ok(Formula::implies(Formula::boxed(phi.clone()), phi))
        }
        Viii => {
            let phi = need(&w.phi, id, "phi")?;
            let psi = need(&w.psi, id, "psi")?;
            side(syn_ref(&phi, &psi), id, "phi must syntactically refer into psi")?;
            Ok(Formula::refers(phi, psi))
        }
        Ix => {
            let phi = need(&w.phi, id, "phi")?;
            let psi = need(&w.psi, id, "psi")?;
            let chi = need(&w.chi, id, "chi")?;
            Ok(Formula::implies(
                Formula::refers(phi.clone(), psi.clone()),
                Formula::implies(Formula::refers(psi, chi.clone()), Formula::refers(phi, chi)),
            ))
        }
        X => {
            let phi = need(&w.phi, id, "phi")?;
            let psi = need(&w.psi, id, "psi")?;
            side(alpha_eq(&phi, &psi), id, "phi and psi must be alpha-congruent")?;
            Ok(Formula::ident(phi, psi))
        }
        Xi => {
            let phi = need(&w.phi, id, "phi")?;
            let psi = need(&w.psi, id, "psi")?;
            Ok(Formula::implies(
                Formula::ident(phi.clone(), psi.clone()),
                Formula::implies(phi, psi),
            ))
        }
        Xii => {
            let chi = need(&w.chi, id, "chi")?;
            let sigma = need(&w.sigma, id, "sigma")?;
            let sigma2 = need(&w.sigma2, id, "sigma'")?;
            // The conjunction only covers variables, so any constant slot
            // occurring in chi must be moved identically by both sides.
            let fc = chi.fcon();
            let constants_agree = fc
                .consts_d
                .iter()
                .all(|d| sigma.const_d(d) == sigma2.const_d(d))
                && fc
                    .consts_c
                    .iter()
                    .all(|c| sigma.const_c(c) == sigma2.const_c(c));
            side(
                constants_agree,
                id,
                "sigma and sigma' must agree on constant slots occurring in chi",
            )?;
            let ante = expand_sigma_eq(&sigma, &sigma2, &chi)?;
            Ok(Formula::implies(
                ante,
                Formula::ident(apply(&chi, &sigma), apply(&chi, &sigma2)),
            ))
        }
        Xiii => {
            let phi = need(&w.phi, id, "phi")?;
            let u = need(&w.u, id, "u")?;
            let t = need(&w.t, id, "t")?;
            side(phi.fvar_j().contains(&u), id, "u must be free in phi")?;
            let inst = apply(&phi, &Substitution::of_var_j(u, t));
            Ok(Formula::implies(
                inst,
                Formula::not(Formula::Jforall(u, Box::new(Formula::not(phi)))),
            ))
        }
        Xiv => {
            let phi = need(&w.phi, id, "phi")?;
            let u = need(&w.u, id, "u")?;
            let t = need(&w.t, id, "t")?;
            side(phi.fvar_j().contains(&u), id, "u must be free in phi")?;
            let inst = apply(&phi, &Substitution::of_var_j(u, t));
            Ok(Formula::implies(
                Formula::Jforall(u, Box::new(phi)),
                inst,
            ))
        }
        Xv => {
            let phi = need(&w.phi, id, "phi")?;
            let psi = need(&w.psi, id, "psi")?;
            let u = need(&w.u, id, "u")?;
            side(
                psi.fvar_j().contains(&u) && phi.fvar_j().contains(&u),
                id,
                "u must be free in both psi and phi",
            )?;
            Ok(Formula::implies(
                Formula::Jforall(u, Box::new(Formula::implies(psi.clone(), phi.clone()))),
                Formula::implies(
                    Formula::Jforall(u, Box::new(psi)),
                    Formula::Jforall(u, Box::new(phi)),
                ),
            ))
        }
        Xvi => {
            let phi = need(&w.phi, id, "phi")?;
            let psi = need(&w.psi, id, "psi")?;
            let u = need(&w.u, id, "u")?;
            side(!psi.fvar_j().contains(&u), id, "u must not be free in psi")?;
            side(phi.fvar_j().contains(&u), id, "u must be free in phi")?;
            Ok(Formula::implies(
                Formula::Jforall(u, Box::new(Formula::implies(psi.clone(), phi.clone()))),
                Formula::implies(psi, Formula::Jforall(u, Box::new(phi))),
            ))
        }
        Xvii => {
            let phi = need(&w.phi, id, "phi")?;
            let x = need(&w.x, id, "x")?;
            let psi = need(&w.psi, id, "psi")?;
            side(phi.fvar_p().contains(&x), id, "x must be free in phi")?;
            let inst = apply(&phi, &Substitution::of_var_p(x, psi));
            Ok(Formula::implies(
                inst,
                Formula::not(Formula::Forall(x, Box::new(Formula::not(phi)))),
            ))
        }
        Xviii => {
            let phi = need(&w.phi, id, "phi")?;
            let x = need(&w.x, id, "x")?;
            let psi = need(&w.psi, id, "psi")?;
            side(phi.fvar_p().contains(&x), id, "x must be free in phi")?;
            let inst = apply(&phi, &Substitution::of_var_p(x, psi));
            Ok(Formula::implies(Formula::Forall(x, Box::new(phi)), inst))
        }
        Xix => {
            let phi = need(&w.phi, id, "phi")?;
            let psi = need(&w.psi, id, "psi")?;
            let x = need(&w.x, id, "x")?;
            side(
                psi.fvar_p().contains(&x) && phi.fvar_p().contains(&x),
                id,
                "x must be free in both psi and phi",
            )?;
            Ok(Formula::implies(
                Formula::Forall(x, Box::new(Formula::implies(psi.clone(), phi.clone()))),
                Formula::implies(
                    Formula::Forall(x, Box::new(psi)),
                    Formula::Forall(x, Box::new(phi)),
                ),
            ))
        }
        Xx => {
            let phi = need(&w.phi, id, "phi")?;
            let psi = need(&w.psi, id, "psi")?;
            let x = need(&w.x, id, "x")?;
            side(!psi.fvar_p().contains(&x), id, "x must not be free in psi")?;
            side(phi.fvar_p().contains(&x), id, "x must be free in phi")?;
            Ok(Formula::implies(
                Formula::Forall(x, Box::new(Formula::implies(psi.clone(), phi.clone()))),
                Formula::implies(psi, Formula::Forall(x, Box::new(phi))),
            ))
        }
        Xxi => {
            let s = need(&w.s, id, "s")?;
            let t = need(&w.t, id, "t")?;
            let x = need(&w.x, id, "x")?;
            let body = Formula::implies(
                Formula::member(Formula::Var(x), s.clone()),
                Formula::member(Formula::Var(x), t.clone()),
            );
            Ok(Formula::iff(
                Formula::TermLe(s, t),
                Formula::Forall(x, Box::new(body)),
            ))
        }
        Xxii => {
            let s = need(&w.s, id, "s")?;
            let t = need(&w.t, id, "t")?;
            Ok(Formula::iff(
                Formula::TermIdent(s.clone(), t.clone()),
                Formula::and(
                    Formula::TermLe(s.clone(), t.clone()),
                    Formula::TermLe(t, s),
                ),
            ))
        }
        Xxiii => {
            let t = need(&w.t, id, "t")?;
            let sigma = need(&w.sigma, id, "sigma")?;
            let sigma2 = need(&w.sigma2, id, "sigma'")?;
            let constants_agree = t
                .consts()
                .iter()
                .all(|c| sigma.const_c(c) == sigma2.const_c(c));
            side(
                constants_agree,
                id,
                "sigma and sigma' must agree on constant slots occurring in t",
            )?;
            let ante = expand_sigma_eq_term(&sigma, &sigma2, &t)?;
            Ok(Formula::implies(
                ante,
                Formula::TermIdent(apply_term(&t, &sigma), apply_term(&t, &sigma2)),
            ))
        }
        Four => {
            let phi = need(&w.phi, id, "phi")?;
            Ok(Formula::implies(
                Formula::boxed(phi.clone()),
                Formula::boxed(Formula::boxed(phi)),
            ))
        }
        E => {
            let phi = need(&w.phi, id, "phi")?;
            Ok(Formula::implies(
                Formula::dia(phi.clone()),
                Formula::boxed(Formula::dia(phi)),
            ))
        }
    }
}

/// `jex u.(phi : u)` in core form, with the binder name used verbatim.
pub fn jexists_member(phi: &Formula, u: VarJ) -> Formula {
    Formula::not(Formula::Jforall(
        u,
        Box::new(Formula::not(Formula::member(phi.clone(), Term::Var(u)))),
    ))
}

/// Abstracts maximal non-implication/non-negation subformulas into atoms and
/// decides classical tautology by exhaustive valuation.
pub fn is_skeleton_tautology(phi: &Formula) -> Result<bool, AxiomError> {
    let mut atoms: Vec<&Formula> = Vec::new();
    collect_atoms(phi, &mut atoms);
    if atoms.len() > 16 {
        return Err(AxiomError::AtomBudgetExceeded(atoms.len()));
    }
    let n = atoms.len();
    for mask in 0..(1u32 << n) {
        if !eval_skeleton(phi, &atoms, mask) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn collect_atoms<'a>(f: &'a Formula, atoms: &mut Vec<&'a Formula>) {
    match f {
        Formula::Implies(a, b) => {
            collect_atoms(a, atoms);
            collect_atoms(b, atoms);
        }
        Formula::Not(a) => collect_atoms(a, atoms),
        atom => {
            if !atoms.iter().any(|known| *known == atom) {
                atoms.push(atom);
            }
        }
    }
}

fn eval_skeleton(f: &Formula, atoms: &[&Formula], mask: u32) -> bool {
    match f {
        Formula::Implies(a, b) => {
            !eval_skeleton(a, atoms, mask) || eval_skeleton(b, atoms, mask)
        }
        Formula::Not(a) => !eval_skeleton(a, atoms, mask),
        atom => {
            let idx = atoms.iter().position(|known| *known == atom).unwrap();
            mask & (1 << idx) != 0
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

    #[test]
    fn sigma_eq_single_variable() {
        let sigma = parse_substitution(r#"[x0:="d1"]"#, &sig()).unwrap();
        let sigma2 = parse_substitution(r#"[x0:="d2"]"#, &sig()).unwrap();
        let got = expand_sigma_eq(&sigma, &sigma2, &f("~x0")).unwrap();
        assert_eq!(got, f("d1 == d2"));
    }

    #[test]
    fn sigma_eq_orders_prop_before_just() {
        let eps = Substitution::identity();
        let base = f("x1 -> (x0 : v0)");
        let got = expand_sigma_eq(&eps, &eps, &base).unwrap();
        // x0, x1 then v0, conjunction left-associated and desugared
        let expected = Formula::and(
            Formula::and(f("x0 == x0"), f("x1 == x1")),
            f("v0 == v0"),
        );
        assert_eq!(got, expected);
    }

    #[test]
    fn sigma_eq_term_base() {
        let eps = Substitution::identity();
        let base = Term::prod(Term::Var(VarJ(0)), Term::Var(VarJ(1)));
        let got = expand_sigma_eq_term(&eps, &eps, &base).unwrap();
        assert_eq!(got, Formula::and(f("v0 == v0"), f("v1 == v1")));
    }

    #[test]
    fn sigma_eq_rejects_closed_base() {
        let eps = Substitution::identity();
        assert_eq!(
            expand_sigma_eq(&eps, &eps, &f("d1")),
            Err(AxiomError::EmptyVariableSet)
        );
        assert_eq!(
            expand_sigma_eq_term(&eps, &eps, &Term::Const("c1".into())),
            Err(AxiomError::EmptyVariableSet)
        );
    }

    #[test]
    fn build_vii() {
        let got = build_instance(SchemaId::Vii, &Witnesses::phi(f("x0"))).unwrap();
        assert_eq!(got, f("box x0 -> x0"));
    }

    #[test]
    fn build_xii_recovers_sci_axiom() {
        let w = Witnesses {
            chi: Some(f("~x0")),
            sigma: Some(parse_substitution(r#"[x0:="d1"]"#, &sig()).unwrap()),
            sigma2: Some(parse_substitution(r#"[x0:="d2"]"#, &sig()).unwrap()),
            ..Default::default()
        };
        let got = build_instance(SchemaId::Xii, &w).unwrap();
        assert_eq!(got, f("(d1 == d2) -> (~d1 == ~d2)"));
    }

    #[test]
    fn build_vi_desugared() {
        let w = Witnesses {
            phi: Some(f("d1")),
            u: Some(VarJ(0)),
            ..Default::default()
        };
        let got = build_instance(SchemaId::Vi, &w).unwrap();
        assert_eq!(got, f("box d1 <-> jex v0.(d1 : v0)"));
    }

    #[test]
    fn vi_side_condition() {
        let w = Witnesses {
            phi: Some(f("x0 : v0")),
            u: Some(VarJ(0)),
            ..Default::default()
        };
        assert!(matches!(
            build_instance(SchemaId::Vi, &w),
            Err(AxiomError::SideConditionViolated { .. })
        ));
    }

    #[test]
    fn taut_examples() {
        assert!(is_skeleton_tautology(&f("box x0 -> box x0")).unwrap());
        assert!(!is_skeleton_tautology(&f("x0 -> x1")).unwrap());
        assert!(
            is_skeleton_tautology(&f("((x0 : true) -> x1) -> (~x1 -> ~(x0 : true))")).unwrap()
        );
    }

    #[test]
    fn atom_budget() {
        // 17 distinct atoms
        let mut big = f("x0");
        for i in 1..17 {
            big = Formula::implies(big, f(&format!("x{i}")));
        }
        assert!(matches!(
            is_skeleton_tautology(&big),
            Err(AxiomError::AtomBudgetExceeded(17))
        ));
    }
}
