//! S4 Kripke semantics: satisfaction on finite preorder frames, the
//! translation into the 4-valued model, an equivalence audit between the two
//! semantics, and exhaustive small-frame countermodel search.
//!
//! The correspondence with the 4-valued model is audited, not assumed: the
//! audit evaluates each corpus formula independently on both sides and
//! records agreement, because the translation provably disagrees on some
//! contingent necessities (see the two-world example in the tests).

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::axioms::SystemId;
use crate::models::{preset_s4_four_valued, four_valued, Assignment, FiniteModel};
use crate::syntax::{render_formula, Formula, VarP};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    pub worlds: Vec<String>,
    /// Accessibility; always stored reflexively and transitively closed.
    pub rel: Vec<Vec<bool>>,
    /// Valuation per world; absent variables are false.
    pub val: Vec<BTreeMap<VarP, bool>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KripkeError {
    #[error("formula leaves the modal fragment at `{0}`")]
    OutsideModalFragment(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("world budget is limited to 5, requested {0}")]
    BudgetExceeded(usize),
    #[error("frame file line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl KripkeModel {
    /// Build a frame from edges, applying the reflexive-transitive closure.
    pub fn new(
        worlds: Vec<String>,
        edges: &[(usize, usize)],
        val: Vec<BTreeMap<VarP, bool>>,
    ) -> KripkeModel {
        let n = worlds.len();
        let mut rel = vec![vec![false; n]; n];
        for w in 0..n {
            rel[w][w] = true;
        }
        for &(a, b) in edges {
            rel[a][b] = true;
        }
        // Warshall closure
        for k in 0..n {
            for i in 0..n {
                if rel[i][k] {
                    for j in 0..n {
                        if rel[k][j] {
                            rel[i][j] = true;
                        }
                    }
                }
            }
        }
        let mut val = val;
        val.resize(n, BTreeMap::new());
        KripkeModel { worlds, rel, val }
    }

    pub fn world_index(&self, name: &str) -> Result<usize, KripkeError> {
        self.worlds
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| KripkeError::UnknownWorld(name.to_string()))
    }

    /// Confirm the relation equals its reflexive-transitive closure.
    pub fn is_preorder(&self) -> bool {
        let n = self.worlds.len();
        (0..n).all(|w| self.rel[w][w])
            && (0..n).all(|a| {
                (0..n).all(|b| {
                    !self.rel[a][b] || (0..n).all(|c| !self.rel[b][c] || self.rel[a][c])
                })
            })
    }

    /// Standard satisfaction over the modal fragment (variables, negation,
    /// implication, box).
    pub fn sat(&self, w: usize, phi: &Formula) -> Result<bool, KripkeError> {
        match phi {
            Formula::Var(x) => Ok(*self.val[w].get(x).unwrap_or(&false)),
            Formula::Not(a) => Ok(!self.sat(w, a)?),
            Formula::Implies(a, b) => Ok(!self.sat(w, a)? || self.sat(w, b)?),
            Formula::Box(a) => {
                for w2 in 0..self.worlds.len() {
                    if self.rel[w][w2] && !self.sat(w2, a)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            other => Err(KripkeError::OutsideModalFragment(render_formula(other))),
        }
    }

    /// All propositional variables mentioned by any world's valuation.
    pub fn variables(&self) -> BTreeSet<VarP> {
        self.val.iter().flat_map(|m| m.keys().copied()).collect()
    }

    /// The 4-valued model plus the assignment that classifies each variable
    /// by its truth and necessity at `w`.
    pub fn translate(&self, w: usize, sys: SystemId) -> (FiniteModel, Assignment) {
        let model = preset_s4_four_valued(sys);
        let mut gamma = Assignment::new();
        for x in self.variables() {
            let holds = self.sat(w, &Formula::Var(x)).unwrap();
            let boxed = self
                .sat(w, &Formula::boxed(Formula::Var(x)))
                .unwrap();
            let boxed_neg = self
                .sat(w, &Formula::boxed(Formula::not(Formula::Var(x))))
                .unwrap();
            let value = if boxed {
                four_valued::NEC
            } else if boxed_neg {
                four_valued::IMP
            } else if holds {
                four_valued::T
            } else {
                four_valued::F
            };
            gamma.prop.insert(x, value);
        }
        (model, gamma)
    }

    /// Evaluate every corpus formula on both sides and record agreement.
    pub fn audit(
        &self,
        w: usize,
        sys: SystemId,
        corpus: &[Formula],
    ) -> Result<AuditReport, KripkeError> {
        let (model, gamma) = self.translate(w, sys);
        let mut rows = Vec::with_capacity(corpus.len());
        for phi in corpus {
            let kripke_verdict = self.sat(w, phi)?;
            let model_verdict = model
                .satisfies(&gamma, phi)
                .expect("preset model evaluates the modal fragment");
            rows.push(AuditRow {
                formula: phi.clone(),
                model_verdict,
                kripke_verdict,
            });
        }
        Ok(AuditReport { rows })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditRow {
    pub formula: Formula,
    pub model_verdict: bool,
    pub kripke_verdict: bool,
}

impl AuditRow {
    pub fn agree(&self) -> bool {
        self.model_verdict == self.kripke_verdict
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub rows: Vec<AuditRow>,
}

impl AuditReport {
    pub fn disagreements(&self) -> Vec<&AuditRow> {
        self.rows.iter().filter(|r| !r.agree()).collect()
    }
}

/// All modal-fragment formulas of tree depth at most `depth` over the first
/// `nvars` propositional variables, deduplicated up to canonical variable
/// renaming (variables renumbered in order of first occurrence). Enumeration
/// order is fixed: by depth, within a depth negations, boxes, then
/// implications over earlier formulas in index order.
pub fn modal_corpus(depth: usize, nvars: u32) -> Vec<Formula> {
    let mut by_depth: Vec<Vec<Formula>> = Vec::new();
    by_depth.push((0..nvars).map(|i| Formula::Var(VarP(i))).collect());
    for d in 1..=depth {
        let mut level = Vec::new();
        for phi in &by_depth[d - 1] {
            level.push(Formula::not(phi.clone()));
        }
        for phi in &by_depth[d - 1] {
            level.push(Formula::boxed(phi.clone()));
        }
        let shallower: Vec<&Formula> = by_depth.iter().take(d).flatten().collect();
        for (i, phi) in shallower.iter().enumerate() {
            for (j, psi) in shallower.iter().enumerate() {
                let di = depth_of_index(&by_depth, i);
                let dj = depth_of_index(&by_depth, j);
                if di.max(dj) == d - 1 {
                    level.push(Formula::implies((*phi).clone(), (*psi).clone()));
                }
            }
        }
        by_depth.push(level);
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for phi in by_depth.into_iter().flatten() {
        let canon = canonical_rename(&phi);
        if seen.insert(canon.clone()) {
            out.push(canon);
        }
    }
    out
}

fn depth_of_index(by_depth: &[Vec<Formula>], mut idx: usize) -> usize {
    for (d, level) in by_depth.iter().enumerate() {
        if idx < level.len() {
            return d;
        }
        idx -= level.len();
    }
    unreachable!("index within accumulated levels")
}

/// Rename variables to `x0, x1, ...` in order of first occurrence.
pub fn canonical_rename(phi: &Formula) -> Formula {
    let mut map: BTreeMap<VarP, VarP> = BTreeMap::new();
    rename_walk(phi, &mut map)
}

fn rename_walk(phi: &Formula, map: &mut BTreeMap<VarP, VarP>) -> Formula {
    match phi {
        Formula::Var(x) => {
            let next = VarP(map.len() as u32);
            let y = *map.entry(*x).or_insert(next);
            Formula::Var(y)
        }
        Formula::Not(a) => Formula::not(rename_walk(a, map)),
        Formula::Box(a) => Formula::boxed(rename_walk(a, map)),
        Formula::Implies(a, b) => {
            let a = rename_walk(a, map);
            let b = rename_walk(b, map);
            Formula::implies(a, b)
        }
        other => other.clone(),
    }
}

/// Exhaustively search preorder frames with up to `n_max` worlds (budget 5)
/// for a world falsifying `phi`. Frames are enumerated by world count, then
/// by the lexicographic adjacency bitmask of the non-diagonal edges, keeping
/// the reflexive-transitive ones; valuations and starting worlds likewise in
/// fixed order, so the reported witness is canonical.
pub fn search_countermodel(
    phi: &Formula,
    n_max: usize,
) -> Result<Option<(KripkeModel, usize)>, KripkeError> {
    if n_max > 5 {
        return Err(KripkeError::BudgetExceeded(n_max));
    }
    check_modal_fragment(phi)?;
    let vars: Vec<VarP> = phi.fvar_p().into_iter().collect();
    for n in 1..=n_max {
        let off_diag: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|(a, b)| a != b)
            .collect();
        let bits = off_diag.len();
        for mask in 0u64..(1u64 << bits) {
            let mut rel = vec![vec![false; n]; n];
            for w in 0..n {
                rel[w][w] = true;
            }
            for (bit, &(a, b)) in off_diag.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    rel[a][b] = true;
                }
            }
            if !transitive(&rel) {
                continue;
            }
            let val_bits = n * vars.len();
            for vmask in 0u64..(1u64 << val_bits) {
                let mut val = vec![BTreeMap::new(); n];
                for w in 0..n {
                    for (vi, x) in vars.iter().enumerate() {
                        let bit = w * vars.len() + vi;
                        if vmask & (1 << bit) != 0 {
                            val[w].insert(*x, true);
                        }
                    }
                }
                let k = KripkeModel {
                    worlds: (0..n).map(|i| format!("w{i}")).collect(),
                    rel: rel.clone(),
                    val,
                };
                for w in 0..n {
                    if !k.sat(w, phi)? {
                        // soundness: re-check the witness before returning
                        debug_assert!(!k.sat(w, phi)?);
                        return Ok(Some((k, w)));
                    }
                }
            }
        }
    }
    Ok(None)
}

fn check_modal_fragment(phi: &Formula) -> Result<(), KripkeError> {
    match phi {
        Formula::Var(_) => Ok(()),
        Formula::Not(a) | Formula::Box(a) => check_modal_fragment(a),
        Formula::Implies(a, b) => {
            check_modal_fragment(a)?;
            check_modal_fragment(b)
        }
        other => Err(KripkeError::OutsideModalFragment(render_formula(other))),
    }
}

fn transitive(rel: &[Vec<bool>]) -> bool {
    let n = rel.len();
    (0..n).all(|a| {
        (0..n).all(|b| !rel[a][b] || (0..n).all(|c| !rel[b][c] || rel[a][c]))
    })
}

/// Frame file (`.ejf`): `worlds: w0 w1`, `edges: w0 w1` (one pair per line,
/// closure applied on load), `val w0: x0=1 x1=0`.
pub fn parse_frame(input: &str) -> Result<KripkeModel, KripkeError> {
    let mut worlds: Vec<String> = Vec::new();
    let mut edge_lines: Vec<(usize, String, String)> = Vec::new();
    let mut val_lines: Vec<(usize, String, Vec<(String, String)>)> = Vec::new();
    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("worlds:") {
            worlds.extend(rest.split_whitespace().map(|s| s.to_string()));
        } else if let Some(rest) = line.strip_prefix("edges:") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(KripkeError::Parse {
                    line: line_no,
                    msg: "expected `edges: <from> <to>`".into(),
                });
            }
            edge_lines.push((line_no, parts[0].into(), parts[1].into()));
        } else if let Some(rest) = line.strip_prefix("val ") {
            let Some((world, assigns)) = rest.split_once(':') else {
                return Err(KripkeError::Parse {
                    line: line_no,
                    msg: "expected `val <world>: x0=1 ...`".into(),
                });
            };
            let mut pairs = Vec::new();
            for item in assigns.split_whitespace() {
                let Some((var, bit)) = item.split_once('=') else {
                    return Err(KripkeError::Parse {
                        line: line_no,
                        msg: format!("bad valuation item `{item}`"),
                    });
                };
                pairs.push((var.to_string(), bit.to_string()));
            }
            val_lines.push((line_no, world.trim().to_string(), pairs));
        } else {
            return Err(KripkeError::Parse {
                line: line_no,
                msg: format!("unrecognized line `{line}`"),
            });
        }
    }
    if worlds.is_empty() {
        return Err(KripkeError::Parse {
            line: 0,
            msg: "missing `worlds:`".into(),
        });
    }
    let index = |line: usize, name: &str| -> Result<usize, KripkeError> {
        worlds
            .iter()
            .position(|w| w == name)
            .ok_or(KripkeError::Parse {
                line,
                msg: format!("unknown world `{name}`"),
            })
    };
    let mut edges = Vec::new();
    for (line, a, b) in edge_lines {
        edges.push((index(line, &a)?, index(line, &b)?));
    }
    let mut val = vec![BTreeMap::new(); worlds.len()];
    for (line, world, pairs) in val_lines {
        let w = index(line, &world)?;
        for (var, bit) in pairs {
            let x = var
                .strip_prefix('x')
                .and_then(|s| s.parse().ok())
                .map(VarP)
                .ok_or(KripkeError::Parse {
                    line,
                    msg: format!("`{var}` is not a propositional variable"),
                })?;
            let b = match bit.as_str() {
                "1" => true,
                "0" => false,
                _ => {
                    return Err(KripkeError::Parse {
                        line,
                        msg: format!("valuation must be 0 or 1, found `{bit}`"),
                    })
                }
            };
            val[w].insert(x, b);
        }
    }
    Ok(KripkeModel::new(worlds, &edges, val))
}

pub fn render_frame(k: &KripkeModel) -> String {
    let mut out = String::new();
    out.push_str(&format!("worlds: {}\n", k.worlds.join(" ")));
    for a in 0..k.worlds.len() {
        for b in 0..k.worlds.len() {
            if a != b && k.rel[a][b] {
                out.push_str(&format!("edges: {} {}\n", k.worlds[a], k.worlds[b]));
            }
        }
    }
    for (w, map) in k.val.iter().enumerate() {
        if map.is_empty() {
            continue;
        }
        let items: Vec<String> = map
            .iter()
            .map(|(x, b)| format!("{x}={}", if *b { 1 } else { 0 }))
            .collect();
        out.push_str(&format!("val {}: {}\n", k.worlds[w], items.join(" ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Signature};

    fn f(src: &str) -> Formula {
        parse_formula(src, &Signature::new()).unwrap()
    }

    fn singleton(x0: bool, x1: bool) -> KripkeModel {
        KripkeModel::new(
            vec!["w0".into()],
            &[],
            vec![BTreeMap::from([(VarP(0), x0), (VarP(1), x1)])],
        )
    }

    #[test]
    fn sat_examples() {
        let k = singleton(true, false);
        assert!(k.sat(0, &f("box x0")).unwrap());

        // two-world chain w0 -> w1, x0 true only at w0
        let k = KripkeModel::new(
            vec!["w0".into(), "w1".into()],
            &[(0, 1)],
            vec![
                BTreeMap::from([(VarP(0), true)]),
                BTreeMap::from([(VarP(0), false)]),
            ],
        );
        assert!(!k.sat(0, &f("x0 -> box x0")).unwrap());
        assert!(k.sat(0, &f("box x0 -> box box x0")).unwrap());
        assert!(k.is_preorder());
    }

    #[test]
    fn translate_beta_cases() {
        let k = singleton(true, true);
        let (_, gamma) = k.translate(0, SystemId::Ax4AxNec);
        assert_eq!(gamma.prop[&VarP(0)], four_valued::NEC);

        // w0 sees a world refuting x0 while x0 holds at w0
        let k = KripkeModel::new(
            vec!["w0".into(), "w1".into()],
            &[(0, 1)],
            vec![
                BTreeMap::from([(VarP(0), true)]),
                BTreeMap::from([(VarP(0), false)]),
            ],
        );
        let (_, gamma) = k.translate(0, SystemId::Ax4AxNec);
        assert_eq!(gamma.prop[&VarP(0)], four_valued::T);

        let k = singleton(false, false);
        let (_, gamma) = k.translate(0, SystemId::Ax4AxNec);
        assert_eq!(gamma.prop[&VarP(0)], four_valued::IMP);
    }

    #[test]
    fn two_world_frame_disagrees_exactly_on_boxed_implication() {
        let k = KripkeModel::new(
            vec!["w0".into(), "w1".into()],
            &[(0, 1), (1, 0)],
            vec![
                BTreeMap::from([(VarP(0), true), (VarP(1), true)]),
                BTreeMap::from([(VarP(0), false), (VarP(1), false)]),
            ],
        );
        let corpus = modal_corpus(2, 2);
        let report = k.audit(0, SystemId::Ax4AxNec, &corpus).unwrap();
        let disagreements = report.disagreements();
        assert_eq!(disagreements.len(), 1, "{disagreements:?}");
        assert_eq!(disagreements[0].formula, f("box (x0 -> x1)"));
        assert!(disagreements[0].kripke_verdict);
        assert!(!disagreements[0].model_verdict);
    }

    #[test]
    fn search_examples() {
        let found = search_countermodel(&f("x0 -> box x0"), 2).unwrap();
        let (k, w) = found.expect("refutable within two worlds");
        assert!(!k.sat(w, &f("x0 -> box x0")).unwrap());

        assert!(search_countermodel(&f("box x0 -> x0"), 3).unwrap().is_none());
        assert!(search_countermodel(&f("box x0 -> box box x0"), 3)
            .unwrap()
            .is_none());

        let dist = f("box (x0 | x1) -> (box x0 | box x1)");
        let found = search_countermodel(&dist, 3).unwrap();
        let (k, w) = found.expect("refutable within three worlds");
        assert!(!k.sat(w, &dist).unwrap());

        assert!(matches!(
            search_countermodel(&f("x0"), 6),
            Err(KripkeError::BudgetExceeded(6))
        ));
    }

    #[test]
    fn corpus_is_canonical_and_deterministic() {
        let c1 = modal_corpus(2, 2);
        let c2 = modal_corpus(2, 2);
        assert_eq!(c1, c2);
        assert!(c1.contains(&f("box (x0 -> x1)")));
        // the renamed twin is canonicalized away
        assert!(!c1.contains(&f("box (x1 -> x0)")));
    }

    #[test]
    fn frame_file_round_trip() {
        let text = "worlds: w0 w1\nedges: w0 w1\nval w0: x0=1 x1=0\nval w1: x0=0\n";
        let k = parse_frame(text).unwrap();
        assert!(k.is_preorder());
        let k2 = parse_frame(&render_frame(&k)).unwrap();
        assert_eq!(k, k2);
    }
}
