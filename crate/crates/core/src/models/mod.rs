//! Finite, table-driven models: representation, well-formedness validation,
//! the evaluator, derived sets, condition checks for the (4)/(E)/AxNec
//! extensions, and the two concrete preset families.
//!
//! A model carries a finite proposition universe `M` with designated `TRUE`
//! and `NECESSARY` subsets, a finite justification-name algebra with `REASON`
//! sets, a transitive reference relation, and value tables realizing the
//! truth conditions. Connectives with no table (identity, order, reference,
//! quantifiers) evaluate through designated value pairs. In override mode the
//! box/membership clauses consult the axiom recognizer, which reproduces the
//! syntax-dependent necessity of the 4-valued construction; the validator
//! flags that mode since the value of `box phi` then depends on the shape of
//! `phi`, not only on its value.

mod file;

pub use file::{parse_model, render_model, ModelFileError};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::axioms::{recognize, SystemId};
use crate::syntax::{Formula, Signature, Term, VarJ, VarP};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mode {
    Strict,
    Override { nec_val: usize, system: SystemId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteModel {
    /// Proposition value names; indices into this vector are values.
    pub values: Vec<String>,
    pub true_set: BTreeSet<usize>,
    pub nec_set: BTreeSet<usize>,
    /// Justification names.
    pub justs: Vec<String>,
    pub leq: BTreeSet<(usize, usize)>,
    pub plus: Vec<Vec<usize>>,
    pub dot: Vec<Vec<usize>>,
    pub reason: Vec<BTreeSet<usize>>,
    pub ref_rel: BTreeSet<(usize, usize)>,
    pub f_impl: Vec<Vec<usize>>,
    pub f_neg: Vec<usize>,
    pub f_istrue: Vec<usize>,
    pub f_isfalse: Vec<usize>,
    pub f_box: Vec<usize>,
    /// `f_mem[value][name]`.
    pub f_mem: Vec<Vec<usize>>,
    pub eq_pair: (usize, usize),
    pub teq_pair: (usize, usize),
    pub le_pair: (usize, usize),
    pub ref_pair: (usize, usize),
    pub q_pair: (usize, usize),
    pub jq_pair: (usize, usize),
    pub const_prop: BTreeMap<String, usize>,
    pub const_just: BTreeMap<String, usize>,
    pub default_prop: usize,
    pub default_just: usize,
    pub mode: Mode,
}

/// Finite assignment; variables outside the map read the model defaults.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    pub prop: BTreeMap<VarP, usize>,
    pub just: BTreeMap<VarJ, usize>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_p(mut self, x: VarP, v: usize) -> Self {
        self.prop.insert(x, v);
        self
    }

    pub fn set_j(mut self, u: VarJ, l: usize) -> Self {
        self.just.insert(u, l);
        self
    }
}

/// Validator clause identifiers. Roman numerals refer to the value-level
/// truth conditions; the rest name structural requirements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    TruthI,
    TruthII,
    TruthIII,
    TruthIV,
    TruthIX,
    TruthX,
    TruthXI,
    TruthXII,
    NecSubsetTrue,
    NecUnionReasons,
    OrderIso,
    LeqPartialOrder,
    RefTransitive,
    Designated(&'static str),
    TableShape,
    ConstRange,
    DefaultRange,
    ModeNec,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clause::TruthI => write!(f, "clause i"),
            Clause::TruthII => write!(f, "clause ii"),
            Clause::TruthIII => write!(f, "clause iii"),
            Clause::TruthIV => write!(f, "clause iv"),
            Clause::TruthIX => write!(f, "clause ix"),
            Clause::TruthX => write!(f, "clause x"),
            Clause::TruthXI => write!(f, "clause xi"),
            Clause::TruthXII => write!(f, "clause xii"),
            Clause::NecSubsetTrue => write!(f, "necessary-subset-of-true"),
            Clause::NecUnionReasons => write!(f, "necessary-is-union-of-reasons"),
            Clause::OrderIso => write!(f, "order-isomorphism"),
            Clause::LeqPartialOrder => write!(f, "leq-partial-order"),
            Clause::RefTransitive => write!(f, "reference-transitive"),
            Clause::Designated(which) => write!(f, "designated-{which}"),
            Clause::TableShape => write!(f, "table-shape"),
            Clause::ConstRange => write!(f, "constant-range"),
            Clause::DefaultRange => write!(f, "default-range"),
            Clause::ModeNec => write!(f, "override-nec-value"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub clause: Clause,
    pub witness: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Warning {
    /// Override mode: the box/membership clauses consult formula shape.
    SyntaxDependentBox,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::SyntaxDependentBox => write!(f, "SyntaxDependentBox"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub failures: Vec<Failure>,
    pub warnings: Vec<Warning>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("constant `{0}` has no interpretation in the model")]
    UnknownConstant(String),
    #[error("value index out of range (run validate first)")]
    BadTable,
}

impl FiniteModel {
    pub fn value_name(&self, v: usize) -> &str {
        &self.values[v]
    }

    pub fn just_name(&self, l: usize) -> &str {
        &self.justs[l]
    }

    pub fn value_index(&self, name: &str) -> Option<usize> {
        self.values.iter().position(|v| v == name)
    }

    pub fn just_index(&self, name: &str) -> Option<usize> {
        self.justs.iter().position(|v| v == name)
    }

    pub fn false_set(&self) -> BTreeSet<usize> {
        (0..self.values.len())
            .filter(|v| !self.true_set.contains(v))
            .collect()
    }

    /// Declarations implied by the model's constant interpretations.
    pub fn signature(&self) -> Signature {
        let mut sig = Signature::new();
        for d in self.const_prop.keys() {
            let _ = sig.declare_prop(d);
        }
        for c in self.const_just.keys() {
            let _ = sig.declare_just(c);
        }
        sig
    }

    /// Exhaustive well-formedness check over `M` and `L`.
    pub fn validate(&self) -> Report {
        let mut rep = Report::default();
        let n = self.values.len();
        let k = self.justs.len();
        let mut fail = |clause: Clause, witness: String| {
            rep.failures.push(Failure { clause, witness });
        };

        // shapes first; everything below indexes freely once they hold
        let shape_ok = n > 0
            && k > 0
            && self.f_impl.len() == n
            && self.f_impl.iter().all(|row| row.len() == n && row.iter().all(|v| *v < n))
            && [&self.f_neg, &self.f_istrue, &self.f_isfalse, &self.f_box]
                .iter()
                .all(|t| t.len() == n && t.iter().all(|v| *v < n))
            && self.f_mem.len() == n
            && self.f_mem.iter().all(|row| row.len() == k && row.iter().all(|v| *v < n))
            && self.plus.len() == k
            && self.plus.iter().all(|row| row.len() == k && row.iter().all(|l| *l < k))
            && self.dot.len() == k
            && self.dot.iter().all(|row| row.len() == k && row.iter().all(|l| *l < k))
            && self.reason.len() == k
            && self.reason.iter().all(|r| r.iter().all(|v| *v < n))
            && self.true_set.iter().all(|v| *v < n)
            && self.nec_set.iter().all(|v| *v < n)
            && self.leq.iter().all(|(a, b)| *a < k && *b < k)
            && self.ref_rel.iter().all(|(a, b)| *a < n && *b < n);
        if !shape_ok {
            fail(Clause::TableShape, "tables do not match |M| and |L|".into());
            return rep;
        }

        if !self.nec_set.is_subset(&self.true_set) {
            let w = self.nec_set.difference(&self.true_set).next().unwrap();
            fail(Clause::NecSubsetTrue, self.value_name(*w).to_string());
        }
        let union: BTreeSet<usize> = self.reason.iter().flatten().copied().collect();
        if union != self.nec_set {
            fail(
                Clause::NecUnionReasons,
                format!(
                    "union of reason sets is {{{}}}",
                    union
                        .iter()
                        .map(|v| self.value_name(*v))
                        .collect::<Vec<_>>()
                        .join(" ")
                ),
            );
        }

        // leq is a partial order
        for a in 0..k {
            if !self.leq.contains(&(a, a)) {
                fail(Clause::LeqPartialOrder, format!("{} not reflexive", self.just_name(a)));
            }
        }
        for &(a, b) in &self.leq {
            if a != b && self.leq.contains(&(b, a)) {
                fail(
                    Clause::LeqPartialOrder,
                    format!("{} and {} violate antisymmetry", self.just_name(a), self.just_name(b)),
                );
            }
            for &(b2, c) in &self.leq {
                if b2 == b && !self.leq.contains(&(a, c)) {
                    fail(
                        Clause::LeqPartialOrder,
                        format!("transitivity fails at {} {} {}", self.just_name(a), self.just_name(b), self.just_name(c)),
                    );
                }
            }
        }

        // l -> REASON(l) is an order isomorphism onto the image
        for a in 0..k {
            for b in 0..k {
                let incl = self.reason[a].is_subset(&self.reason[b]);
                let le = self.leq.contains(&(a, b));
                if le != incl {
                    fail(
                        Clause::OrderIso,
                        format!(
                            "{} <= {} is {} but inclusion is {}",
                            self.just_name(a),
                            self.just_name(b),
                            le,
                            incl
                        ),
                    );
                }
                if a != b && self.reason[a] == self.reason[b] {
                    fail(
                        Clause::OrderIso,
                        format!("{} and {} name the same reason set", self.just_name(a), self.just_name(b)),
                    );
                }
            }
        }

        for &(a, b) in &self.ref_rel {
            for &(b2, c) in &self.ref_rel {
                if b2 == b && !self.ref_rel.contains(&(a, c)) {
                    fail(
                        Clause::RefTransitive,
                        format!(
                            "transitivity fails at {} {} {}",
                            self.value_name(a),
                            self.value_name(b),
                            self.value_name(c)
                        ),
                    );
                }
            }
        }

        // membership constraints, value level
        let tr = |v: &usize| self.true_set.contains(v);
        for a in 0..n {
            for b in 0..n {
                let want = !tr(&a) || tr(&b);
                if tr(&self.f_impl[a][b]) != want {
                    fail(
                        Clause::TruthI,
                        format!("{} {}", self.value_name(a), self.value_name(b)),
                    );
                }
            }
            if tr(&self.f_neg[a]) != !tr(&a) {
                fail(Clause::TruthII, self.value_name(a).to_string());
            }
            if tr(&self.f_istrue[a]) != tr(&a) {
                fail(Clause::TruthIII, self.value_name(a).to_string());
            }
            if tr(&self.f_isfalse[a]) != !tr(&a) {
                fail(Clause::TruthIV, self.value_name(a).to_string());
            }
            if tr(&self.f_box[a]) != self.nec_set.contains(&a) {
                fail(Clause::TruthIX, self.value_name(a).to_string());
            }
            for l in 0..k {
                if tr(&self.f_mem[a][l]) != self.reason[l].contains(&a) {
                    fail(
                        Clause::TruthX,
                        format!("{} {}", self.value_name(a), self.just_name(l)),
                    );
                }
            }
        }

        // justification closure
        for a in 0..n {
            for b in 0..n {
                for l in 0..k {
                    for m in 0..k {
                        if self.reason[l].contains(&self.f_impl[a][b])
                            && self.reason[m].contains(&a)
                            && !self.reason[self.dot[l][m]].contains(&b)
                        {
                            fail(
                                Clause::TruthXI,
                                format!(
                                    "{} {} {} {}",
                                    self.value_name(a),
                                    self.value_name(b),
                                    self.just_name(l),
                                    self.just_name(m)
                                ),
                            );
                        }
                    }
                }
            }
        }
        for a in 0..n {
            for l in 0..k {
                for m in 0..k {
                    if (self.reason[l].contains(&a) || self.reason[m].contains(&a))
                        && !self.reason[self.plus[l][m]].contains(&a)
                    {
                        fail(
                            Clause::TruthXII,
                            format!(
                                "{} {} {}",
                                self.value_name(a),
                                self.just_name(l),
                                self.just_name(m)
                            ),
                        );
                    }
                }
            }
        }

        for (which, pair) in [
            ("eq", self.eq_pair),
            ("teq", self.teq_pair),
            ("le", self.le_pair),
            ("ref", self.ref_pair),
            ("quant", self.q_pair),
            ("jquant", self.jq_pair),
        ] {
            if pair.0 >= n || pair.1 >= n || !tr(&pair.0) || tr(&pair.1) {
                fail(
                    Clause::Designated(which),
                    format!("pair must be (true, false) values, got indexes {:?}", pair),
                );
            }
        }

        for (name, v) in &self.const_prop {
            if *v >= n {
                fail(Clause::ConstRange, name.clone());
            }
        }
        for (name, l) in &self.const_just {
            if *l >= k {
                fail(Clause::ConstRange, name.clone());
            }
        }
        if self.default_prop >= n || self.default_just >= k {
            fail(Clause::DefaultRange, "defaults out of range".into());
        }

        if let Mode::Override { nec_val, .. } = self.mode {
            if !self.nec_set.contains(&nec_val) {
                fail(Clause::ModeNec, format!("override value index {nec_val}"));
            }
            rep.warnings.push(Warning::SyntaxDependentBox);
        }

        rep
    }

    /// Evaluate a formula to a proposition value.
    pub fn eval(&self, gamma: &Assignment, phi: &Formula) -> Result<usize, EvalError> {
        match phi {
            Formula::Var(x) => Ok(*gamma.prop.get(x).unwrap_or(&self.default_prop)),
            Formula::Const(d) => self
                .const_prop
                .get(d)
                .copied()
                .ok_or_else(|| EvalError::UnknownConstant(d.clone())),
            Formula::Implies(a, b) => {
                let va = self.eval(gamma, a)?;
                let vb = self.eval(gamma, b)?;
                Ok(self.f_impl[va][vb])
            }
            Formula::Not(a) => Ok(self.f_neg[self.eval(gamma, a)?]),
            Formula::IsTrue(a) => Ok(self.f_istrue[self.eval(gamma, a)?]),
            Formula::IsFalse(a) => Ok(self.f_isfalse[self.eval(gamma, a)?]),
            Formula::Ident(a, b) => {
                let va = self.eval(gamma, a)?;
                let vb = self.eval(gamma, b)?;
                Ok(if va == vb { self.eq_pair.0 } else { self.eq_pair.1 })
            }
            Formula::Refers(a, b) => {
                let va = self.eval(gamma, a)?;
                let vb = self.eval(gamma, b)?;
                Ok(if self.ref_rel.contains(&(va, vb)) {
                    self.ref_pair.0
                } else {
                    self.ref_pair.1
                })
            }
            Formula::TermIdent(s, t) => {
                let ls = self.eval_term(gamma, s)?;
                let lt = self.eval_term(gamma, t)?;
                Ok(if ls == lt { self.teq_pair.0 } else { self.teq_pair.1 })
            }
            Formula::TermLe(s, t) => {
                let ls = self.eval_term(gamma, s)?;
                let lt = self.eval_term(gamma, t)?;
                Ok(if self.leq.contains(&(ls, lt)) {
                    self.le_pair.0
                } else {
                    self.le_pair.1
                })
            }
            Formula::Box(a) => {
                if let Some(v) = self.override_value(a) {
                    return Ok(v);
                }
                Ok(self.f_box[self.eval(gamma, a)?])
            }
            Formula::Member(a, t) => {
                let lt = self.eval_term(gamma, t)?;
                if let Some(v) = self.override_value(a) {
                    return Ok(v);
                }
                Ok(self.f_mem[self.eval(gamma, a)?][lt])
            }
            Formula::Forall(x, a) => {
                let mut all_true = true;
                for m in 0..self.values.len() {
                    let mut g = gamma.clone();
                    g.prop.insert(*x, m);
                    if !self.true_set.contains(&self.eval(&g, a)?) {
                        all_true = false;
                        break;
                    }
                }
                Ok(if all_true { self.q_pair.0 } else { self.q_pair.1 })
            }
            Formula::Jforall(u, a) => {
                let mut all_true = true;
                for l in 0..self.justs.len() {
                    let mut g = gamma.clone();
                    g.just.insert(*u, l);
                    if !self.true_set.contains(&self.eval(&g, a)?) {
                        all_true = false;
                        break;
                    }
                }
                Ok(if all_true { self.jq_pair.0 } else { self.jq_pair.1 })
            }
        }
    }

    fn override_value(&self, phi: &Formula) -> Option<usize> {
        if let Mode::Override { nec_val, system } = self.mode {
            if recognize(phi, system).is_some() {
                return Some(nec_val);
            }
        }
        None
    }

    pub fn eval_term(&self, gamma: &Assignment, t: &Term) -> Result<usize, EvalError> {
        match t {
            Term::Var(u) => Ok(*gamma.just.get(u).unwrap_or(&self.default_just)),
            Term::Const(c) => self
                .const_just
                .get(c)
                .copied()
                .ok_or_else(|| EvalError::UnknownConstant(c.clone())),
            Term::Prod(a, b) => {
                let la = self.eval_term(gamma, a)?;
                let lb = self.eval_term(gamma, b)?;
                Ok(self.dot[la][lb])
            }
            Term::Sum(a, b) => {
                let la = self.eval_term(gamma, a)?;
                let lb = self.eval_term(gamma, b)?;
                Ok(self.plus[la][lb])
            }
        }
    }

    pub fn satisfies(&self, gamma: &Assignment, phi: &Formula) -> Result<bool, EvalError> {
        Ok(self.true_set.contains(&self.eval(gamma, phi)?))
    }

    /// `POSSIBLE = {a : f_neg(a) not in NECESSARY}` and its complement.
    pub fn derived_sets(&self) -> (BTreeSet<usize>, BTreeSet<usize>) {
        let mut possible = BTreeSet::new();
        let mut impossible = BTreeSet::new();
        for a in 0..self.values.len() {
            if self.nec_set.contains(&self.f_neg[a]) {
                impossible.insert(a);
            } else {
                possible.insert(a);
            }
        }
        (possible, impossible)
    }

    /// Value-level check of the extension conditions.
    pub fn check_condition(&self, which: Condition) -> ConditionReport {
        match which {
            Condition::Four => {
                for a in 0..self.values.len() {
                    if self.true_set.contains(&self.f_box[a])
                        && !self.true_set.contains(&self.f_box[self.f_box[a]])
                    {
                        return ConditionReport::fail(self.value_name(a));
                    }
                }
                ConditionReport::pass()
            }
            Condition::E => {
                let (possible, _) = self.derived_sets();
                for a in possible {
                    if !self.nec_set.contains(&self.f_neg[self.f_box[self.f_neg[a]]]) {
                        return ConditionReport::fail(self.value_name(a));
                    }
                }
                ConditionReport::pass()
            }
            Condition::AxNecSample(k) => {
                let system = match self.mode {
                    Mode::Override { system, .. } => system,
                    Mode::Strict => SystemId::Ax4AxNec,
                };
                let mut rng = crate::gen::seeded_rng(0x5eed_ab5e);
                let vocab = crate::gen::Vocab::from_signature(&self.signature());
                let mut checked = 0;
                while checked < k {
                    let Some((_, _, inst)) = crate::gen::sample_axiom_instance(&mut rng, system, &vocab)
                    else {
                        continue;
                    };
                    let gamma = crate::gen::sample_assignment(
                        &mut rng,
                        self.values.len(),
                        self.justs.len(),
                        &inst,
                    );
                    let boxed = Formula::boxed(inst.clone());
                    match self.eval(&gamma, &boxed) {
                        Ok(v) if self.true_set.contains(&v) => {}
                        _ => {
                            return ConditionReport::fail(&crate::syntax::render_formula(&inst));
                        }
                    }
                    checked += 1;
                }
                ConditionReport::pass()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    Four,
    E,
    AxNecSample(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub pass: bool,
    pub witness: Option<String>,
}

impl ConditionReport {
    fn pass() -> Self {
        ConditionReport {
            pass: true,
            witness: None,
        }
    }

    fn fail(witness: &str) -> Self {
        ConditionReport {
            pass: false,
            witness: Some(witness.to_string()),
        }
    }
}

/// Value indices of the 4-valued construction.
pub mod four_valued {
    pub const T: usize = 0;
    pub const F: usize = 1;
    pub const NEC: usize = 2;
    pub const IMP: usize = 3;
}

/// The 4-valued model extracted from the S4 correspondence proof:
/// `M = {t, f, nec, imp}`, one justification name with `REASON = {nec}`,
/// total reference, and the box/membership table overridden to `nec` on
/// axioms of the given system.
pub fn preset_s4_four_valued(sys: SystemId) -> FiniteModel {
    assert!(sys.has_axnec(), "the 4-valued preset needs an AxNec system");
    use four_valued::*;
    let total_ref = (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).collect();
    // implication: t if a=f or b=t; f if (t,f); nec if a=imp or b=nec;
    // imp if (nec,imp); f otherwise
    let f_impl = vec![
        vec![T, F, NEC, F],
        vec![T, T, T, T],
        vec![T, F, NEC, IMP],
        vec![T, NEC, NEC, NEC],
    ];
    let f_neg = vec![F, T, IMP, NEC];
    let f_box = vec![F, F, NEC, F];
    FiniteModel {
        values: vec!["t".into(), "f".into(), "nec".into(), "imp".into()],
        true_set: BTreeSet::from([T, NEC]),
        nec_set: BTreeSet::from([NEC]),
        justs: vec!["l".into()],
        leq: BTreeSet::from([(0, 0)]),
        plus: vec![vec![0]],
        dot: vec![vec![0]],
        reason: vec![BTreeSet::from([NEC])],
        ref_rel: total_ref,
        f_impl,
        f_neg: f_neg.clone(),
        f_istrue: vec![T, F, NEC, IMP],
        f_isfalse: f_neg,
        f_box: f_box.clone(),
        f_mem: f_box.into_iter().map(|v| vec![v]).collect(),
        eq_pair: (T, F),
        teq_pair: (T, F),
        le_pair: (T, F),
        ref_pair: (T, F),
        q_pair: (T, F),
        jq_pair: (T, F),
        const_prop: BTreeMap::new(),
        const_just: BTreeMap::new(),
        default_prop: T,
        default_just: 0,
        mode: Mode::Override {
            nec_val: NEC,
            system: sys,
        },
    }
}

/// The 2-valued extensional model family: `NECESSARY = TRUE` and box,
/// membership and truth predicates are all the identity.
pub fn preset_extensional() -> FiniteModel {
    FiniteModel {
        values: vec!["t".into(), "f".into()],
        true_set: BTreeSet::from([0]),
        nec_set: BTreeSet::from([0]),
        justs: vec!["l".into()],
        leq: BTreeSet::from([(0, 0)]),
        plus: vec![vec![0]],
        dot: vec![vec![0]],
        reason: vec![BTreeSet::from([0])],
        ref_rel: BTreeSet::from([(0, 0), (0, 1), (1, 0), (1, 1)]),
        f_impl: vec![vec![0, 1], vec![0, 0]],
        f_neg: vec![1, 0],
        f_istrue: vec![0, 1],
        f_isfalse: vec![1, 0],
        f_box: vec![0, 1],
        f_mem: vec![vec![0], vec![1]],
        eq_pair: (0, 1),
        teq_pair: (0, 1),
        le_pair: (0, 1),
        ref_pair: (0, 1),
        q_pair: (0, 1),
        jq_pair: (0, 1),
        const_prop: BTreeMap::new(),
        const_just: BTreeMap::new(),
        default_prop: 0,
        default_just: 0,
        mode: Mode::Strict,
    }
}

/// The 4-valued tables without the axiom override; a strict model useful for
/// property tests.
pub fn preset_s4_strict() -> FiniteModel {
    let mut m = preset_s4_four_valued(SystemId::Ax4AxNec);
    m.mode = Mode::Strict;
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn f(src: &str) -> Formula {
        parse_formula(src, &Signature::new()).unwrap()
    }

    #[test]
    fn presets_validate() {
        let rep = preset_extensional().validate();
        assert!(rep.passed());
        assert!(rep.warnings.is_empty());

        let rep = preset_s4_four_valued(SystemId::Ax4AxNec).validate();
        assert!(rep.passed(), "{:?}", rep.failures);
        assert_eq!(rep.warnings, vec![Warning::SyntaxDependentBox]);

        assert!(preset_s4_strict().validate().passed());
    }

    #[test]
    fn mutation_is_rejected_with_clause_ii() {
        let mut m = preset_extensional();
        m.f_neg[0] = 0;
        let rep = m.validate();
        assert!(!rep.passed());
        assert_eq!(rep.failures[0].clause, Clause::TruthII);
        assert_eq!(rep.failures[0].witness, "t");
    }

    #[test]
    fn four_valued_table_spot_checks() {
        use four_valued::*;
        let m = preset_s4_four_valued(SystemId::Ax4AxNec);
        let g = Assignment::new().set_p(VarP(0), NEC);
        assert_eq!(m.eval(&g, &f("~x0")).unwrap(), IMP);
        let g = Assignment::new().set_p(VarP(0), IMP);
        // default interpretation sends unmapped x1 to t; imp -> t is t, but
        // imp -> nec is nec per the table
        let g2 = g.clone().set_p(VarP(1), NEC);
        assert_eq!(m.eval(&g2, &f("x0 -> x1")).unwrap(), NEC);
        assert_eq!(m.eval(&g, &f("x0 -> x1")).unwrap(), T);
    }

    #[test]
    fn extensional_box_is_identity() {
        let m = preset_extensional();
        let g = Assignment::new().set_p(VarP(0), 0);
        assert_eq!(m.eval(&g, &f("box x0")).unwrap(), 0);
        let g = Assignment::new().set_p(VarP(0), 1);
        assert_eq!(m.eval(&g, &f("box x0")).unwrap(), 1);
    }

    #[test]
    fn override_boxes_axioms_to_nec() {
        use four_valued::*;
        let m = preset_s4_four_valued(SystemId::Ax4AxNec);
        let g = Assignment::new().set_p(VarP(0), F);
        // x0 -> x0 is a tautology: box gives nec regardless of the value
        assert_eq!(m.eval(&g, &f("box (x0 -> x0)")).unwrap(), NEC);
        // x0 is not an axiom
        assert_eq!(m.eval(&g, &f("box x0")).unwrap(), F);
    }

    #[test]
    fn derived_sets_examples() {
        use four_valued::*;
        let m = preset_s4_four_valued(SystemId::Ax4AxNec);
        let (possible, impossible) = m.derived_sets();
        assert_eq!(possible, BTreeSet::from([T, F, NEC]));
        assert_eq!(impossible, BTreeSet::from([IMP]));

        let m = preset_extensional();
        let (possible, impossible) = m.derived_sets();
        assert_eq!(possible, BTreeSet::from([0]));
        assert_eq!(impossible, BTreeSet::from([1]));
    }

    #[test]
    fn condition_checks() {
        let s4 = preset_s4_four_valued(SystemId::Ax4AxNec);
        assert!(s4.check_condition(Condition::Four).pass);
        let e = s4.check_condition(Condition::E);
        assert!(!e.pass);
        assert_eq!(e.witness.as_deref(), Some("t"));

        let ext = preset_extensional();
        assert!(ext.check_condition(Condition::Four).pass);
        assert!(ext.check_condition(Condition::E).pass);
    }

    #[test]
    fn liar_is_semantically_refuted_in_both_presets() {
        let liar_negation = f("~ ex x0. (x0 == (x0 : false))");
        for m in [
            preset_s4_four_valued(SystemId::Ax4AxNec),
            preset_extensional(),
        ] {
            // exhaust all assignments of the (only) free-ish variable space:
            // the formula is closed, so a single evaluation per model suffices,
            // but sweep defaults anyway
            for v in 0..m.values.len() {
                let mut m2 = m.clone();
                m2.default_prop = v;
                assert!(m2.satisfies(&Assignment::new(), &liar_negation).unwrap());
            }
        }
    }
}
