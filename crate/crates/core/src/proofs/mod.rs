//! Hilbert derivations and their checker.
//!
//! A step is a hypothesis, a witnessed axiom instance (universal closure
//! allowed), an Axiom Necessitation step (`box` of an axiom, in the AxNec
//! systems only), or Modus Ponens from two earlier steps. The checker never
//! searches: every axiom step carries its schema id and witnesses, and a step
//! validates only if rebuilding from those witnesses reproduces the
//! closure-stripped formula exactly.

mod file;
mod transform;

pub use file::{parse_proof, render_proof, ProofFileError};
pub use transform::{derive_k, generalize_constant, necessitate, GenTarget, TransformError};

use crate::axioms::{build_instance, is_skeleton_tautology, strip_closure, SchemaId, SystemId, Witnesses};
use crate::syntax::Formula;

#[derive(Debug, Clone, PartialEq)]
pub enum Justification {
    Hyp,
    Ax(SchemaId, Witnesses),
    AxNec(SchemaId, Witnesses),
    Mp(usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub formula: Formula,
    pub just: Justification,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub system: SystemId,
    pub hypotheses: Vec<Formula>,
    pub steps: Vec<Step>,
}

impl Derivation {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub accepted: bool,
    pub first_failure: Option<(usize, String)>,
}

impl Verdict {
    fn accept() -> Self {
        Verdict {
            accepted: true,
            first_failure: None,
        }
    }

    fn reject(index: usize, reason: impl Into<String>) -> Self {
        Verdict {
            accepted: false,
            first_failure: Some((index, reason.into())),
        }
    }
}

/// Validate every step; the verdict carries the first failing step.
pub fn check(d: &Derivation) -> Verdict {
    for (i, step) in d.steps.iter().enumerate() {
        if let Err(reason) = check_step(d, i, step) {
            return Verdict::reject(i, reason);
        }
    }
    Verdict::accept()
}

fn check_step(d: &Derivation, index: usize, step: &Step) -> Result<(), String> {
    match &step.just {
        Justification::Hyp => {
            if d.hypotheses.contains(&step.formula) {
                Ok(())
            } else {
                Err("formula is not a hypothesis".into())
            }
        }
        Justification::Ax(id, w) => {
            if !d.system.allows_schema(*id) {
                return Err(format!("schema {id} is not part of system {}", d.system));
            }
            check_axiom_formula(&step.formula, *id, w)
        }
        Justification::AxNec(id, w) => {
            if !d.system.has_axnec() {
                return Err(format!("system {} lacks the Axiom Necessitation rule", d.system));
            }
            if !d.system.allows_schema(*id) {
                return Err(format!("schema {id} is not part of system {}", d.system));
            }
            let Formula::Box(inner) = &step.formula else {
                return Err("an AxNec step must conclude a boxed formula".into());
            };
            check_axiom_formula(inner, *id, w)
        }
        Justification::Mp(i, j) => {
            if *i >= index || *j >= index {
                return Err("modus ponens may only use earlier steps".into());
            }
            let expected = Formula::implies(d.steps[*i].formula.clone(), step.formula.clone());
            if d.steps[*j].formula == expected {
                Ok(())
            } else {
                Err(format!(
                    "modus ponens mismatch: step {j} is not `{}`",
                    expected
                ))
            }
        }
    }
}

/// Accept `formula` as the (possibly universally closed) instance the
/// witnesses describe.
pub fn check_axiom_formula(formula: &Formula, id: SchemaId, w: &Witnesses) -> Result<(), String> {
    let (_, body) = strip_closure(formula);
    if id == SchemaId::Taut {
        if let Some(phi) = &w.phi {
            if phi != body {
                return Err("witness instance mismatch".into());
            }
        }
        match is_skeleton_tautology(body) {
            Ok(true) => Ok(()),
            Ok(false) => Err("formula skeleton is not a tautology".into()),
            Err(e) => Err(e.to_string()),
        }
    } else {
        match build_instance(id, w) {
            Ok(inst) if inst == *body => Ok(()),
            Ok(_) => Err("witness instance mismatch".into()),
            Err(e) => Err(e.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Signature};

    fn sig() -> Signature {
        Signature::with(&["d1", "d2"], &["c1"])
    }

    fn f(src: &str) -> Formula {
        parse_formula(src, &sig()).unwrap()
    }

    #[test]
    fn modus_ponens_example() {
        let d = Derivation {
            system: SystemId::Ax,
            hypotheses: vec![f("d1"), f("d1 -> d2")],
            steps: vec![
                Step {
                    formula: f("d1"),
                    just: Justification::Hyp,
                },
                Step {
                    formula: f("d1 -> d2"),
                    just: Justification::Hyp,
                },
                Step {
                    formula: f("d2"),
                    just: Justification::Mp(0, 1),
                },
            ],
        };
        assert!(check(&d).accepted);
    }

    #[test]
    fn axnec_example() {
        let d = Derivation {
            system: SystemId::Ax4AxNec,
            hypotheses: vec![],
            steps: vec![
                Step {
                    formula: f("box x0 -> x0"),
                    just: Justification::Ax(SchemaId::Vii, Witnesses::phi(f("x0"))),
                },
                Step {
                    formula: f("box (box x0 -> x0)"),
                    just: Justification::AxNec(SchemaId::Vii, Witnesses::phi(f("x0"))),
                },
            ],
        };
        assert!(check(&d).accepted);
    }

    #[test]
    fn witness_mismatch_is_rejected() {
        let d = Derivation {
            system: SystemId::Ax4AxNec,
            hypotheses: vec![],
            steps: vec![Step {
                formula: f("box d1"),
                just: Justification::AxNec(SchemaId::Vii, Witnesses::phi(f("d1"))),
            }],
        };
        let v = check(&d);
        assert!(!v.accepted);
        let (idx, reason) = v.first_failure.unwrap();
        assert_eq!(idx, 0);
        assert!(reason.contains("witness instance mismatch"), "{reason}");
    }

    #[test]
    fn axnec_requires_the_rule() {
        let d = Derivation {
            system: SystemId::Ax4,
            hypotheses: vec![],
            steps: vec![Step {
                formula: f("box (box x0 -> x0)"),
                just: Justification::AxNec(SchemaId::Vii, Witnesses::phi(f("x0"))),
            }],
        };
        assert!(!check(&d).accepted);
    }

    #[test]
    fn closed_axiom_step_is_accepted() {
        let d = Derivation {
            system: SystemId::Ax,
            hypotheses: vec![],
            steps: vec![Step {
                formula: f("all x0.(box x0 -> x0)"),
                just: Justification::Ax(SchemaId::Vii, Witnesses::phi(f("x0"))),
            }],
        };
        assert!(check(&d).accepted);
    }

    #[test]
    fn check_is_monotone_in_hypotheses() {
        let mut d = Derivation {
            system: SystemId::Ax,
            hypotheses: vec![f("d1")],
            steps: vec![Step {
                formula: f("d1"),
                just: Justification::Hyp,
            }],
        };
        assert!(check(&d).accepted);
        d.hypotheses.push(f("box d2"));
        assert!(check(&d).accepted);
    }
}
