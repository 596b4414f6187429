//! Text format for derivations (`.ejp`).
//!
//! ```text
//! system AX4_AXNEC
//! const prop d1
//! const just c1
//! hyp 0 d1
//! step 0 box x0 -> x0 ; ax vii phi="x0"
//! step 1 box (box x0 -> x0) ; axnec vii phi="x0"
//! ```
//!
//! Witness bindings are `name=value` pairs: formulas and terms quoted,
//! variables bare, substitutions in `[slot:="..."]` notation. `#` starts a
//! comment line.

use thiserror::Error;

use crate::axioms::{SchemaId, SystemId, Witnesses};
use crate::syntax::{
    parse_formula, parse_substitution, parse_term, render_formula, render_term, Signature,
    SyntaxError, VarJ, VarP,
};

use super::{Derivation, Justification, Step};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProofFileError {
    #[error("proof file line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("proof file line {line}: {err}")]
    Syntax { line: usize, err: SyntaxError },
}

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T, ProofFileError> {
    Err(ProofFileError::Parse {
        line,
        msg: msg.into(),
    })
}

pub fn parse_proof(input: &str) -> Result<(Derivation, Signature), ProofFileError> {
    let mut system: Option<SystemId> = None;
    let mut sig = Signature::new();
    let mut hypotheses: Vec<String> = Vec::new();
    let mut steps: Vec<Step> = Vec::new();
    let mut hyp_texts: Vec<(usize, String)> = Vec::new();
    let mut step_lines: Vec<(usize, String)> = Vec::new();

    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("system ") {
            let name = rest.trim();
            system = Some(
                SystemId::parse(name)
                    .ok_or(ProofFileError::Parse {
                        line: line_no,
                        msg: format!("unknown system `{name}`"),
                    })?,
            );
        } else if let Some(rest) = line.strip_prefix("const prop ") {
            sig.declare_prop(rest.trim())
                .map_err(|err| ProofFileError::Syntax { line: line_no, err })?;
        } else if let Some(rest) = line.strip_prefix("const just ") {
            sig.declare_just(rest.trim())
                .map_err(|err| ProofFileError::Syntax { line: line_no, err })?;
        } else if let Some(rest) = line.strip_prefix("hyp ") {
            hyp_texts.push((line_no, rest.trim().to_string()));
        } else if let Some(rest) = line.strip_prefix("step ") {
            step_lines.push((line_no, rest.trim().to_string()));
        } else {
            return perr(line_no, format!("unrecognized line `{line}`"));
        }
    }

    let Some(system) = system else {
        return perr(0, "missing `system` header");
    };

    for (line_no, text) in &hyp_texts {
        let Some((n, formula_text)) = text.split_once(char::is_whitespace) else {
            return perr(*line_no, "expected `hyp <n> <formula>`");
        };
        let expected: usize = n
            .parse()
            .map_err(|_| ProofFileError::Parse {
                line: *line_no,
                msg: "hypothesis index must be a number".into(),
            })?;
        if expected != hypotheses.len() {
            return perr(*line_no, format!("hypothesis index {expected} out of order"));
        }
        hypotheses.push(formula_text.trim().to_string());
    }

    let hypotheses = hypotheses
        .iter()
        .zip(hyp_texts.iter())
        .map(|(text, (line_no, _))| {
            parse_formula(text, &sig).map_err(|err| ProofFileError::Syntax {
                line: *line_no,
                err,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    for (line_no, text) in step_lines {
        let Some((n, rest)) = text.split_once(char::is_whitespace) else {
            return perr(line_no, "expected `step <n> <formula> ; <just>`");
        };
        let expected: usize = n.parse().map_err(|_| ProofFileError::Parse {
            line: line_no,
            msg: "step index must be a number".into(),
        })?;
        if expected != steps.len() {
            return perr(line_no, format!("step index {expected} out of order"));
        }
        let Some((formula_text, just_text)) = rest.rsplit_once(';') else {
            return perr(line_no, "missing `;` before the justification");
        };
        let formula = parse_formula(formula_text.trim(), &sig)
            .map_err(|err| ProofFileError::Syntax { line: line_no, err })?;
        let just = parse_justification(just_text.trim(), &sig, line_no)?;
        steps.push(Step { formula, just });
    }

    Ok((
        Derivation {
            system,
            hypotheses,
            steps,
        },
        sig,
    ))
}

fn parse_justification(
    text: &str,
    sig: &Signature,
    line: usize,
) -> Result<Justification, ProofFileError> {
    let mut words = text.splitn(2, char::is_whitespace);
    let head = words.next().unwrap_or("");
    let rest = words.next().unwrap_or("").trim();
    match head {
        "hyp" => Ok(Justification::Hyp),
        "mp" => {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 2 {
                return perr(line, "expected `mp <i> <j>`");
            }
            let i = parts[0].parse().map_err(|_| ProofFileError::Parse {
                line,
                msg: "bad step index".into(),
            })?;
            let j = parts[1].parse().map_err(|_| ProofFileError::Parse {
                line,
                msg: "bad step index".into(),
            })?;
            Ok(Justification::Mp(i, j))
        }
        "ax" | "axnec" => {
            let mut parts = rest.splitn(2, char::is_whitespace);
            let id_text = parts.next().unwrap_or("");
            let bindings = parts.next().unwrap_or("").trim();
            let id = SchemaId::parse(id_text).ok_or(ProofFileError::Parse {
                line,
                msg: format!("unknown schema `{id_text}`"),
            })?;
            let w = parse_witnesses(bindings, sig, line)?;
            if head == "ax" {
                Ok(Justification::Ax(id, w))
            } else {
                Ok(Justification::AxNec(id, w))
            }
        }
        other => perr(line, format!("unknown justification `{other}`")),
    }
}

pub(crate) fn parse_witnesses(
    text: &str,
    sig: &Signature,
    line: usize,
) -> Result<Witnesses, ProofFileError> {
    let mut w = Witnesses::default();
    for (key, value) in split_bindings(text, line)? {
        match key.as_str() {
            "phi" => w.phi = Some(quoted_formula(&value, sig, line)?),
            "psi" => w.psi = Some(quoted_formula(&value, sig, line)?),
            "chi" => w.chi = Some(quoted_formula(&value, sig, line)?),
            "s" => w.s = Some(quoted_term(&value, sig, line)?),
            "t" => w.t = Some(quoted_term(&value, sig, line)?),
            "x" => {
                let name = value.trim();
                let idx = name
                    .strip_prefix('x')
                    .and_then(|s| s.parse().ok())
                    .ok_or(ProofFileError::Parse {
                        line,
                        msg: format!("`{name}` is not a propositional variable"),
                    })?;
                w.x = Some(VarP(idx));
            }
            "u" => {
                let name = value.trim();
                let idx = name
                    .strip_prefix('v')
                    .and_then(|s| s.parse().ok())
                    .ok_or(ProofFileError::Parse {
                        line,
                        msg: format!("`{name}` is not a justification variable"),
                    })?;
                w.u = Some(VarJ(idx));
            }
            "sigma" => {
                w.sigma = Some(
                    parse_substitution(&value, sig)
                        .map_err(|err| ProofFileError::Syntax { line, err })?,
                )
            }
            "sigma'" => {
                w.sigma2 = Some(
                    parse_substitution(&value, sig)
                        .map_err(|err| ProofFileError::Syntax { line, err })?,
                )
            }
            other => return perr(line, format!("unknown witness name `{other}`")),
        }
    }
    Ok(w)
}

fn quoted_formula(
    value: &str,
    sig: &Signature,
    line: usize,
) -> Result<crate::syntax::Formula, ProofFileError> {
    let inner = unquote(value, line)?;
    parse_formula(&inner, sig).map_err(|err| ProofFileError::Syntax { line, err })
}

fn quoted_term(
    value: &str,
    sig: &Signature,
    line: usize,
) -> Result<crate::syntax::Term, ProofFileError> {
    let inner = unquote(value, line)?;
    parse_term(&inner, sig).map_err(|err| ProofFileError::Syntax { line, err })
}

fn unquote(value: &str, line: usize) -> Result<String, ProofFileError> {
    let v = value.trim();
    if v.len() >= 2 && v.starts_with('"') && v.ends_with('"') {
        Ok(v[1..v.len() - 1].to_string())
    } else {
        perr(line, format!("expected a quoted value, found `{v}`"))
    }
}

/// Split `key=value key=value ...` respecting quotes and brackets.
fn split_bindings(text: &str, line: usize) -> Result<Vec<(String, String)>, ProofFileError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if i >= bytes.len() {
            break;
        }
        let key_start = i;
        while i < bytes.len() && bytes[i] != b'=' {
            i += 1;
        }
        if i >= bytes.len() {
            return perr(line, "witness binding is missing `=`");
        }
        let key = text[key_start..i].trim().to_string();
        i += 1; // skip '='
        let val_start = i;
        let mut in_quote = false;
        let mut bracket = 0i32;
        while i < bytes.len() {
            let c = bytes[i];
            if in_quote {
                if c == b'"' {
                    in_quote = false;
                }
            } else {
                match c {
                    b'"' => in_quote = true,
                    b'[' => bracket += 1,
                    b']' => bracket -= 1,
                    c if c.is_ascii_whitespace() && bracket == 0 => break,
                    _ => {}
                }
            }
            i += 1;
        }
        out.push((key, text[val_start..i].trim().to_string()));
    }
    Ok(out)
}

pub fn render_proof(d: &Derivation, sig: &Signature) -> String {
    let mut out = String::new();
    out.push_str(&format!("system {}\n", d.system));
    for p in &sig.props {
        out.push_str(&format!("const prop {p}\n"));
    }
    for j in &sig.justs {
        out.push_str(&format!("const just {j}\n"));
    }
    for (i, h) in d.hypotheses.iter().enumerate() {
        out.push_str(&format!("hyp {i} {}\n", render_formula(h)));
    }
    for (i, step) in d.steps.iter().enumerate() {
        out.push_str(&format!(
            "step {i} {} ; {}\n",
            render_formula(&step.formula),
            render_justification(&step.just)
        ));
    }
    out
}

fn render_justification(j: &Justification) -> String {
    match j {
        Justification::Hyp => "hyp".into(),
        Justification::Mp(i, k) => format!("mp {i} {k}"),
        Justification::Ax(id, w) => format!("ax {id}{}", render_witnesses(w)),
        Justification::AxNec(id, w) => format!("axnec {id}{}", render_witnesses(w)),
    }
}

fn render_witnesses(w: &Witnesses) -> String {
    let mut out = String::new();
    if let Some(f) = &w.phi {
        out.push_str(&format!(" phi=\"{}\"", render_formula(f)));
    }
    if let Some(f) = &w.psi {
        out.push_str(&format!(" psi=\"{}\"", render_formula(f)));
    }
    if let Some(f) = &w.chi {
        out.push_str(&format!(" chi=\"{}\"", render_formula(f)));
    }
    if let Some(t) = &w.s {
        out.push_str(&format!(" s=\"{}\"", render_term(t)));
    }
    if let Some(t) = &w.t {
        out.push_str(&format!(" t=\"{}\"", render_term(t)));
    }
    if let Some(x) = &w.x {
        out.push_str(&format!(" x={x}"));
    }
    if let Some(u) = &w.u {
        out.push_str(&format!(" u={u}"));
    }
    if let Some(s) = &w.sigma {
        out.push_str(&format!(" sigma={}", render_substitution(s)));
    }
    if let Some(s) = &w.sigma2 {
        out.push_str(&format!(" sigma'={}", render_substitution(s)));
    }
    out
}

pub fn render_substitution(s: &crate::subst::Substitution) -> String {
    let (sp, sj) = s.support();
    let mut parts = Vec::new();
    for slot in sp {
        let (name, image) = match &slot {
            crate::subst::SlotP::Var(x) => (x.to_string(), s.var_p(*x)),
            crate::subst::SlotP::Const(d) => (d.clone(), s.const_d(d)),
        };
        parts.push(format!("{name}:=\"{}\"", render_formula(&image)));
    }
    for slot in sj {
        let (name, image) = match &slot {
            crate::subst::SlotJ::Var(u) => (u.to_string(), s.var_j(*u)),
            crate::subst::SlotJ::Const(c) => (c.clone(), s.const_c(c)),
        };
        parts.push(format!("{name}:=\"{}\"", render_term(&image)));
    }
    format!("[{}]", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::super::check;
    use super::*;

    #[test]
    fn proof_file_round_trip() {
        let text = r#"
system AX4_AXNEC
const prop d1
const prop d2
const just c1
step 0 box x0 -> x0 ; ax vii phi="x0"
step 1 box (box x0 -> x0) ; axnec vii phi="x0"
"#;
        let (d, sig) = parse_proof(text).unwrap();
        assert!(check(&d).accepted);
        let rendered = render_proof(&d, &sig);
        let (d2, _) = parse_proof(&rendered).unwrap();
        assert_eq!(d, d2);
    }

    #[test]
    fn sci_identity_example_checks() {
        let text = r#"
system AX
const prop d1
const prop d2
step 0 (d1 == d2) -> (~d1 == ~d2) ; ax xii chi="~x0" sigma=[x0:="d1"] sigma'=[x0:="d2"]
"#;
        let (d, _) = parse_proof(text).unwrap();
        let v = check(&d);
        assert!(v.accepted, "{:?}", v.first_failure);
    }

    #[test]
    fn bad_schema_name_is_a_parse_error() {
        let text = "system AX\nstep 0 x0 -> x0 ; ax xxv\n";
        assert!(parse_proof(text).is_err());
    }
}
