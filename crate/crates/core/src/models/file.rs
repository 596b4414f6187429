//! Text format for finite models (`.ejm`).
//!
//! Line-oriented: `values:`, `true:`, `necessary:`, `just:` list names;
//! `reason l = { ... }` gives one reason set; `leq: a b` one order pair per
//! line; `plus` / `dot` / `impl` / `mem` take `a b -> c` rows, the unary
//! tables `neg` / `istrue` / `isfalse` / `box` take `a -> b`; `ref: total`
//! or `ref: pairs a b, c d`; `designated <which> <t> <f>`; `mode strict` or
//! `mode override <nec> <SYSTEM>`; `const name = value`; `default prop v`,
//! `default just l`. `#` starts a comment. Iteration order everywhere is
//! declaration order.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::axioms::SystemId;

use super::{FiniteModel, Mode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelFileError {
    #[error("model file line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ModelFileError> {
    Err(ModelFileError::Parse {
        line,
        msg: msg.into(),
    })
}

pub fn parse_model(input: &str) -> Result<FiniteModel, ModelFileError> {
    let mut values: Vec<String> = Vec::new();
    let mut true_names: Vec<String> = Vec::new();
    let mut nec_names: Vec<String> = Vec::new();
    let mut justs: Vec<String> = Vec::new();
    let mut reason_lines: Vec<(usize, String, Vec<String>)> = Vec::new();
    let mut leq_lines: Vec<(usize, String, String)> = Vec::new();
    let mut ref_total = false;
    let mut ref_pairs: Vec<(usize, String, String)> = Vec::new();
    let mut bin_rows: BTreeMap<&'static str, Vec<(usize, String, String, String)>> =
        BTreeMap::new();
    let mut un_rows: BTreeMap<&'static str, Vec<(usize, String, String)>> = BTreeMap::new();
    let mut designated: BTreeMap<String, (usize, String, String)> = BTreeMap::new();
    let mut mode: Option<Mode> = None;
    let mut mode_line: Option<(usize, String, String)> = None;
    let mut consts: Vec<(usize, String, String)> = Vec::new();
    let mut default_prop: Option<(usize, String)> = None;
    let mut default_just: Option<(usize, String)> = None;

    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "values:" => values.extend(words[1..].iter().map(|s| s.to_string())),
            "true:" => true_names.extend(words[1..].iter().map(|s| s.to_string())),
            "necessary:" => nec_names.extend(words[1..].iter().map(|s| s.to_string())),
            "just:" => justs.extend(words[1..].iter().map(|s| s.to_string())),
            "reason" => {
                // reason l = { a b ... }
                let rest = line.trim_start_matches("reason").trim();
                let Some((name, set_part)) = rest.split_once('=') else {
                    return err(line_no, "expected `reason <name> = { ... }`");
                };
                let set_part = set_part.trim();
                if !set_part.starts_with('{') || !set_part.ends_with('}') {
                    return err(line_no, "reason set must be written in braces");
                }
                let members: Vec<String> = set_part[1..set_part.len() - 1]
                    .split_whitespace()
                    .map(|s| s.to_string())
                    .collect();
                reason_lines.push((line_no, name.trim().to_string(), members));
            }
            "leq:" => {
                if words.len() != 3 {
                    return err(line_no, "expected `leq: <a> <b>`");
                }
                leq_lines.push((line_no, words[1].into(), words[2].into()));
            }
            "ref:" => {
                if words.get(1) == Some(&"total") {
                    ref_total = true;
                } else if words.get(1) == Some(&"pairs") {
                    let rest = line.splitn(2, "pairs").nth(1).unwrap_or("");
                    for chunk in rest.split(',') {
                        let pair: Vec<&str> = chunk.split_whitespace().collect();
                        if pair.is_empty() {
                            continue;
                        }
                        if pair.len() != 2 {
                            return err(line_no, "ref pairs must be `a b` separated by commas");
                        }
                        ref_pairs.push((line_no, pair[0].into(), pair[1].into()));
                    }
                } else {
                    return err(line_no, "expected `ref: total` or `ref: pairs ...`");
                }
            }
            key @ ("plus:" | "dot:" | "impl:" | "mem:") => {
                if words.len() != 5 || words[3] != "->" {
                    return err(line_no, format!("expected `{key} <a> <b> -> <c>`"));
                }
                let key = match key {
                    "plus:" => "plus",
                    "dot:" => "dot",
                    "impl:" => "impl",
                    _ => "mem",
                };
                bin_rows.entry(key).or_default().push((
                    line_no,
                    words[1].into(),
                    words[2].into(),
                    words[4].into(),
                ));
            }
            key @ ("neg:" | "istrue:" | "isfalse:" | "box:") => {
                if words.len() != 4 || words[2] != "->" {
                    return err(line_no, format!("expected `{key} <a> -> <b>`"));
                }
                let key = match key {
                    "neg:" => "neg",
                    "istrue:" => "istrue",
                    "isfalse:" => "isfalse",
                    _ => "box",
                };
                un_rows
                    .entry(key)
                    .or_default()
                    .push((line_no, words[1].into(), words[3].into()));
            }
            "designated" => {
                if words.len() != 4 {
                    return err(line_no, "expected `designated <which> <t> <f>`");
                }
                designated.insert(
                    words[1].to_string(),
                    (line_no, words[2].into(), words[3].into()),
                );
            }
            "mode" => match words.get(1) {
                Some(&"strict") => mode = Some(Mode::Strict),
                Some(&"override") => {
                    if words.len() != 4 {
                        return err(line_no, "expected `mode override <nec> <SYSTEM>`");
                    }
                    mode_line = Some((line_no, words[2].into(), words[3].into()));
                }
                _ => return err(line_no, "expected `mode strict` or `mode override ...`"),
            },
            "const" => {
                if words.len() != 4 || words[2] != "=" {
                    return err(line_no, "expected `const <name> = <value>`");
                }
                consts.push((line_no, words[1].into(), words[3].into()));
            }
            "default" => match (words.get(1), words.get(2)) {
                (Some(&"prop"), Some(v)) => default_prop = Some((line_no, v.to_string())),
                (Some(&"just"), Some(v)) => default_just = Some((line_no, v.to_string())),
                _ => return err(line_no, "expected `default prop <v>` or `default just <l>`"),
            },
            other => return err(line_no, format!("unknown directive `{other}`")),
        }
    }

    if values.is_empty() {
        return err(0, "missing `values:` section");
    }
    if justs.is_empty() {
        return err(0, "missing `just:` section");
    }
    for v in &values {
        if justs.contains(v) {
            return err(0, format!("name `{v}` used as both value and justification"));
        }
    }

    let val = |line: usize, name: &str| -> Result<usize, ModelFileError> {
        values
            .iter()
            .position(|v| v == name)
            .ok_or(ModelFileError::Parse {
                line,
                msg: format!("unknown value `{name}`"),
            })
    };
    let jst = |line: usize, name: &str| -> Result<usize, ModelFileError> {
        justs
            .iter()
            .position(|v| v == name)
            .ok_or(ModelFileError::Parse {
                line,
                msg: format!("unknown justification name `{name}`"),
            })
    };

    let n = values.len();
    let k = justs.len();

    let mut true_set = BTreeSet::new();
    for name in &true_names {
        true_set.insert(val(0, name)?);
    }
    let mut nec_set = BTreeSet::new();
    for name in &nec_names {
        nec_set.insert(val(0, name)?);
    }

    let mut reason = vec![BTreeSet::new(); k];
    for (line, name, members) in reason_lines {
        let l = jst(line, &name)?;
        for m in members {
            reason[l].insert(val(line, &m)?);
        }
    }

    let mut leq = BTreeSet::new();
    for (line, a, b) in leq_lines {
        leq.insert((jst(line, &a)?, jst(line, &b)?));
    }

    let mut ref_rel = BTreeSet::new();
    if ref_total {
        for a in 0..n {
            for b in 0..n {
                ref_rel.insert((a, b));
            }
        }
    }
    for (line, a, b) in ref_pairs {
        ref_rel.insert((val(line, &a)?, val(line, &b)?));
    }

    let fill_bin = |key: &str,
                    rows: Option<&Vec<(usize, String, String, String)>>,
                    left_j: bool,
                    right_j: bool|
     -> Result<Vec<Vec<usize>>, ModelFileError> {
        let rows = rows.ok_or(ModelFileError::Parse {
            line: 0,
            msg: format!("missing `{key}:` table"),
        })?;
        let rows_dim = if left_j { k } else { n };
        let cols_dim = if right_j { k } else { n };
        let out_j = left_j && right_j;
        let mut table = vec![vec![usize::MAX; cols_dim]; rows_dim];
        for (line, a, b, c) in rows {
            let ia = if left_j { jst(*line, a)? } else { val(*line, a)? };
            let ib = if right_j { jst(*line, b)? } else { val(*line, b)? };
            let ic = if out_j { jst(*line, c)? } else { val(*line, c)? };
            table[ia][ib] = ic;
        }
        for (a, row) in table.iter().enumerate() {
            for (b, c) in row.iter().enumerate() {
                if *c == usize::MAX {
                    return err(0, format!("table `{key}` is missing entry ({a},{b})"));
                }
            }
        }
        Ok(table)
    };

    let fill_un = |key: &str,
                   rows: Option<&Vec<(usize, String, String)>>|
     -> Result<Vec<usize>, ModelFileError> {
        let rows = rows.ok_or(ModelFileError::Parse {
            line: 0,
            msg: format!("missing `{key}:` table"),
        })?;
        let mut table = vec![usize::MAX; n];
        for (line, a, b) in rows {
            table[val(*line, a)?] = val(*line, b)?;
        }
        for (a, b) in table.iter().enumerate() {
            if *b == usize::MAX {
                return err(0, format!("table `{key}` is missing entry {a}"));
            }
        }
        Ok(table)
    };

    let plus = fill_bin("plus", bin_rows.get("plus"), true, true)?;
    let dot = fill_bin("dot", bin_rows.get("dot"), true, true)?;
    let f_impl = fill_bin("impl", bin_rows.get("impl"), false, false)?;
    let f_mem = fill_bin("mem", bin_rows.get("mem"), false, true)?;
    let f_neg = fill_un("neg", un_rows.get("neg"))?;
    let f_istrue = fill_un("istrue", un_rows.get("istrue"))?;
    let f_isfalse = fill_un("isfalse", un_rows.get("isfalse"))?;
    let f_box = fill_un("box", un_rows.get("box"))?;

    let pair_of = |which: &str| -> Result<(usize, usize), ModelFileError> {
        let (line, a, b) = designated.get(which).cloned().ok_or(ModelFileError::Parse {
            line: 0,
            msg: format!("missing `designated {which} ...`"),
        })?;
        Ok((val(line, &a)?, val(line, &b)?))
    };
    let eq_pair = pair_of("eq")?;
    let teq_pair = pair_of("teq")?;
    let le_pair = pair_of("le")?;
    let ref_pair = pair_of("ref")?;
    let q_pair = pair_of("quant")?;
    let jq_pair = pair_of("jquant")?;

    let mode = if let Some((line, nec_name, system)) = mode_line {
        let nec_val = val(line, &nec_name)?;
        let system = SystemId::parse(&system).ok_or(ModelFileError::Parse {
            line,
            msg: format!("unknown system `{system}`"),
        })?;
        Mode::Override { nec_val, system }
    } else {
        mode.unwrap_or(Mode::Strict)
    };

    let mut const_prop = BTreeMap::new();
    let mut const_just = BTreeMap::new();
    for (line, name, value) in consts {
        if let Some(v) = values.iter().position(|v| *v == value) {
            const_prop.insert(name, v);
        } else if let Some(l) = justs.iter().position(|v| *v == value) {
            const_just.insert(name, l);
        } else {
            return err(line, format!("constant value `{value}` is not declared"));
        }
    }

    let default_prop = match default_prop {
        Some((line, name)) => val(line, &name)?,
        None => 0,
    };
    let default_just = match default_just {
        Some((line, name)) => jst(line, &name)?,
        None => 0,
    };

    Ok(FiniteModel {
        values,
        true_set,
        nec_set,
        justs,
        leq,
        plus,
        dot,
        reason,
        ref_rel,
        f_impl,
        f_neg,
        f_istrue,
        f_isfalse,
        f_box,
        f_mem,
        eq_pair,
        teq_pair,
        le_pair,
        ref_pair,
        q_pair,
        jq_pair,
        const_prop,
        const_just,
        default_prop,
        default_just,
        mode,
    })
}

pub fn render_model(m: &FiniteModel) -> String {
    let mut out = String::new();
    let vn = |v: &usize| m.values[*v].clone();
    let jn = |l: &usize| m.justs[*l].clone();
    out.push_str(&format!("values: {}\n", m.values.join(" ")));
    out.push_str(&format!(
        "true: {}\n",
        m.true_set.iter().map(vn).collect::<Vec<_>>().join(" ")
    ));
    out.push_str(&format!(
        "necessary: {}\n",
        m.nec_set.iter().map(vn).collect::<Vec<_>>().join(" ")
    ));
    out.push_str(&format!("just: {}\n", m.justs.join(" ")));
    for (l, set) in m.reason.iter().enumerate() {
        out.push_str(&format!(
            "reason {} = {{ {} }}\n",
            m.justs[l],
            set.iter().map(vn).collect::<Vec<_>>().join(" ")
        ));
    }
    for (a, b) in &m.leq {
        out.push_str(&format!("leq: {} {}\n", jn(a), jn(b)));
    }
    let total = m.ref_rel.len() == m.values.len() * m.values.len();
    if total {
        out.push_str("ref: total\n");
    } else {
        let pairs: Vec<String> = m
            .ref_rel
            .iter()
            .map(|(a, b)| format!("{} {}", vn(a), vn(b)))
            .collect();
        out.push_str(&format!("ref: pairs {}\n", pairs.join(", ")));
    }
    for (a, row) in m.plus.iter().enumerate() {
        for (b, c) in row.iter().enumerate() {
            out.push_str(&format!("plus: {} {} -> {}\n", m.justs[a], m.justs[b], jn(c)));
        }
    }
    for (a, row) in m.dot.iter().enumerate() {
        for (b, c) in row.iter().enumerate() {
            out.push_str(&format!("dot: {} {} -> {}\n", m.justs[a], m.justs[b], jn(c)));
        }
    }
    for (a, row) in m.f_impl.iter().enumerate() {
        for (b, c) in row.iter().enumerate() {
            out.push_str(&format!(
                "impl: {} {} -> {}\n",
                m.values[a], m.values[b], vn(c)
            ));
        }
    }
    for (key, table) in [
        ("neg", &m.f_neg),
        ("istrue", &m.f_istrue),
        ("isfalse", &m.f_isfalse),
        ("box", &m.f_box),
    ] {
        for (a, b) in table.iter().enumerate() {
            out.push_str(&format!("{key}: {} -> {}\n", m.values[a], vn(b)));
        }
    }
    for (a, row) in m.f_mem.iter().enumerate() {
        for (l, c) in row.iter().enumerate() {
            out.push_str(&format!(
                "mem: {} {} -> {}\n",
                m.values[a], m.justs[l], vn(c)
            ));
        }
    }
    for (which, pair) in [
        ("eq", m.eq_pair),
        ("teq", m.teq_pair),
        ("le", m.le_pair),
        ("ref", m.ref_pair),
        ("quant", m.q_pair),
        ("jquant", m.jq_pair),
    ] {
        out.push_str(&format!(
            "designated {which} {} {}\n",
            m.values[pair.0], m.values[pair.1]
        ));
    }
    match &m.mode {
        Mode::Strict => out.push_str("mode strict\n"),
        Mode::Override { nec_val, system } => {
            out.push_str(&format!("mode override {} {}\n", m.values[*nec_val], system));
        }
    }
    for (name, v) in &m.const_prop {
        out.push_str(&format!("const {name} = {}\n", m.values[*v]));
    }
    for (name, l) in &m.const_just {
        out.push_str(&format!("const {name} = {}\n", m.justs[*l]));
    }
    out.push_str(&format!("default prop {}\n", m.values[m.default_prop]));
    out.push_str(&format!("default just {}\n", m.justs[m.default_just]));
    out
}

#[cfg(test)]
mod tests {
    use super::super::{preset_extensional, preset_s4_four_valued};
    use super::*;

    #[test]
    fn model_files_round_trip() {
        for m in [
            preset_extensional(),
            preset_s4_four_valued(SystemId::Ax4AxNec),
        ] {
            let text = render_model(&m);
            let back = parse_model(&text).unwrap();
            assert_eq!(back, m);
        }
    }

    #[test]
    fn missing_table_is_reported() {
        let m = preset_extensional();
        let text = render_model(&m);
        let broken: String = text
            .lines()
            .filter(|l| !l.starts_with("box:"))
            .collect::<Vec<_>>()
            .join("\n");
        assert!(parse_model(&broken).is_err());
    }
}
