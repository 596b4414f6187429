//! Recursive-descent parser for the concrete syntax.
//!
//! Binding strength, loosest to tightest: `->` (right-associative), `<->`,
//! `|`, `&`, comparisons `==` `<` `<=`, postfix `: true` / `: false` /
//! `: term`, unary `~` `box` `dia`, atoms. Binders (`all x0.`, `ex x0.`,
//! `jall v0.`, `jex v0.`) extend maximally to the right. Defined connectives
//! are desugared while parsing, so the result is always a core tree.

use super::lex::{lex, Spanned, Tok};
use super::{
    is_variable_spelling, Formula, Signature, SyntaxError, Term, VarJ, VarP,
};
use crate::subst::Substitution;

pub fn parse_formula(input: &str, sig: &Signature) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(input, sig)?;
    let e = p.expr(1)?;
    p.expect_eof()?;
    want_formula(e, 0)
}

pub fn parse_term(input: &str, sig: &Signature) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(input, sig)?;
    let e = p.expr(1)?;
    p.expect_eof()?;
    want_term(e, 0)
}

/// Substitution text: `[x0:="box x1", v0:="c1 * v1"]`. Slot sort fixes the
/// payload sort; constants may appear as slots too.
pub fn parse_substitution(input: &str, sig: &Signature) -> Result<Substitution, SyntaxError> {
    let toks = lex(input)?;
    let mut i = 0;
    let next = |i: &mut usize| -> Option<&Spanned> {
        let t = toks.get(*i);
        *i += 1;
        t
    };
    let mut sigma = Substitution::identity();
    match next(&mut i) {
        Some(Spanned { tok: Tok::LBracket, .. }) => {}
        other => {
            return Err(SyntaxError::Syntax {
                pos: other.map_or(0, |s| s.pos),
                msg: "substitution must start with `[`".into(),
            })
        }
    }
    if matches!(toks.get(i), Some(Spanned { tok: Tok::RBracket, .. })) {
        i += 1;
    } else {
        loop {
            let slot = match next(&mut i) {
                Some(Spanned { tok: Tok::Ident(name), pos }) => (name.clone(), *pos),
                other => {
                    return Err(SyntaxError::Syntax {
                        pos: other.map_or(input.len(), |s| s.pos),
                        msg: "expected a variable or constant slot".into(),
                    })
                }
            };
            match next(&mut i) {
                Some(Spanned { tok: Tok::ColonEq, .. }) => {}
                other => {
                    return Err(SyntaxError::Syntax {
                        pos: other.map_or(input.len(), |s| s.pos),
                        msg: "expected `:=`".into(),
                    })
                }
            }
            let payload = match next(&mut i) {
                Some(Spanned { tok: Tok::Quote(text), .. }) => text.clone(),
                other => {
                    return Err(SyntaxError::Syntax {
                        pos: other.map_or(input.len(), |s| s.pos),
                        msg: "expected a quoted value".into(),
                    })
                }
            };
            let (name, pos) = slot;
            if let Some(v) = parse_var_p(&name) {
                sigma.set_var_p(v, parse_formula(&payload, sig)?);
            } else if let Some(v) = parse_var_j(&name) {
                sigma.set_var_j(v, parse_term(&payload, sig)?);
            } else if sig.props.contains(&name) {
                sigma.set_const_d(&name, parse_formula(&payload, sig)?);
            } else if sig.justs.contains(&name) {
                sigma.set_const_c(&name, parse_term(&payload, sig)?);
            } else {
                return Err(SyntaxError::Syntax {
                    pos,
                    msg: format!("unknown substitution slot `{name}`"),
                });
            }
            match next(&mut i) {
                Some(Spanned { tok: Tok::Comma, .. }) => continue,
                Some(Spanned { tok: Tok::RBracket, .. }) => break,
                other => {
                    return Err(SyntaxError::Syntax {
                        pos: other.map_or(input.len(), |s| s.pos),
                        msg: "expected `,` or `]`".into(),
                    })
                }
            }
        }
    }
    if i != toks.len() {
        return Err(SyntaxError::Syntax {
            pos: toks[i].pos,
            msg: "trailing input after substitution".into(),
        });
    }
    Ok(sigma)
}

fn want_formula(e: Expr, pos: usize) -> Result<Formula, SyntaxError> {
    match e {
        Expr::F(f) => Ok(f),
        Expr::T(_) => Err(SyntaxError::Sort {
            pos,
            msg: "expected a formula, found a term".into(),
        }),
    }
}

fn want_term(e: Expr, pos: usize) -> Result<Term, SyntaxError> {
    match e {
        Expr::T(t) => Ok(t),
        Expr::F(_) => Err(SyntaxError::Sort {
            pos,
            msg: "expected a term, found a formula".into(),
        }),
    }
}

fn parse_var_p(name: &str) -> Option<VarP> {
    if is_variable_spelling(name) && name.starts_with('x') {
        name[1..].parse().ok().map(VarP)
    } else {
        None
    }
}

fn parse_var_j(name: &str) -> Option<VarJ> {
    if is_variable_spelling(name) && name.starts_with('v') {
        name[1..].parse().ok().map(VarJ)
    } else {
        None
    }
}

enum Expr {
    F(Formula),
    T(Term),
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    sig: &'a Signature,
    end: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &str, sig: &'a Signature) -> Result<Self, SyntaxError> {
        Ok(Parser {
            toks: lex(input)?,
            pos: 0,
            sig,
            end: input.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |s| s.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_eof(&self) -> Result<(), SyntaxError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(SyntaxError::Syntax {
                pos: self.here(),
                msg: "trailing input".into(),
            })
        }
    }


    // Binding strength levels: 1 `->`, 2 `<->`, 3 `|`, 4 `&`, 5 comparisons,
    // 6 `+`, 7 `*`; postfix and unary are handled below this.
    fn expr(&mut self, min: u8) -> Result<Expr, SyntaxError> {
        let mut lhs = self.postfixed()?;
        loop {
            let (level, tok) = match self.peek() {
                Some(Tok::Arrow) => (1, Tok::Arrow),
                Some(Tok::DArrow) => (2, Tok::DArrow),
                Some(Tok::Pipe) => (3, Tok::Pipe),
                Some(Tok::Amp) => (4, Tok::Amp),
                Some(Tok::EqEq) => (5, Tok::EqEq),
                Some(Tok::Lt) => (5, Tok::Lt),
                Some(Tok::Le) => (5, Tok::Le),
                Some(Tok::Plus) => (6, Tok::Plus),
                Some(Tok::Star) => (7, Tok::Star),
                _ => break,
            };
            if level < min {
                break;
            }
            let op_pos = self.here();
            self.bump();
            lhs = match tok {
                Tok::Arrow => {
                    let a = want_formula(lhs, op_pos)?;
                    let b = want_formula(self.expr_at(1)?, op_pos)?;
                    Expr::F(Formula::implies(a, b))
                }
                Tok::DArrow => {
                    let a = want_formula(lhs, op_pos)?;
                    let b = want_formula(self.expr_at(3)?, op_pos)?;
                    if matches!(self.peek(), Some(Tok::DArrow)) {
                        return Err(SyntaxError::Syntax {
                            pos: self.here(),
                            msg: "`<->` is not associative, use parentheses".into(),
                        });
                    }
                    Expr::F(Formula::iff(a, b))
                }
                Tok::Pipe => {
                    let a = want_formula(lhs, op_pos)?;
                    let b = want_formula(self.expr_at(4)?, op_pos)?;
                    Expr::F(Formula::or(a, b))
                }
                Tok::Amp => {
                    let a = want_formula(lhs, op_pos)?;
                    let b = want_formula(self.expr_at(5)?, op_pos)?;
                    Expr::F(Formula::and(a, b))
                }
                Tok::EqEq => {
                    let rhs = self.expr_at(6)?;
                    let out = match (lhs, rhs) {
                        (Expr::F(a), Expr::F(b)) => Expr::F(Formula::ident(a, b)),
                        (Expr::T(a), Expr::T(b)) => Expr::F(Formula::TermIdent(a, b)),
                        _ => {
                            return Err(SyntaxError::Sort {
                                pos: op_pos,
                                msg: "`==` needs both sides of the same sort".into(),
                            })
                        }
                    };
                    self.no_cmp_chain()?;
                    out
                }
                Tok::Lt => {
                    let a = want_formula(lhs, op_pos)?;
                    let b = want_formula(self.expr_at(6)?, op_pos)?;
                    self.no_cmp_chain()?;
                    Expr::F(Formula::refers(a, b))
                }
                Tok::Le => {
                    let a = want_term(lhs, op_pos)?;
                    let b = want_term(self.expr_at(6)?, op_pos)?;
                    self.no_cmp_chain()?;
                    Expr::F(Formula::TermLe(a, b))
                }
                Tok::Plus => {
                    let a = want_term(lhs, op_pos)?;
                    let b = want_term(self.expr_at(7)?, op_pos)?;
                    Expr::T(Term::sum(a, b))
                }
                Tok::Star => {
                    let a = want_term(lhs, op_pos)?;
                    let b = want_term(self.expr_at(8)?, op_pos)?;
                    Expr::T(Term::prod(a, b))
                }
                _ => unreachable!(),
            };
        }
        Ok(lhs)
    }

    fn expr_at(&mut self, min: u8) -> Result<Expr, SyntaxError> {
        self.expr(min)
    }

    fn no_cmp_chain(&self) -> Result<(), SyntaxError> {
        if matches!(self.peek(), Some(Tok::EqEq) | Some(Tok::Lt) | Some(Tok::Le)) {
            return Err(SyntaxError::Syntax {
                pos: self.here(),
                msg: "comparisons are not associative, use parentheses".into(),
            });
        }
        Ok(())
    }

    fn postfixed(&mut self) -> Result<Expr, SyntaxError> {
        let mut e = self.unary()?;
        while matches!(self.peek(), Some(Tok::Colon)) {
            let op_pos = self.here();
            self.bump();
            let f = want_formula(e, op_pos)?;
            e = match self.peek() {
                Some(Tok::Ident(name)) if name == "true" => {
                    self.bump();
                    Expr::F(Formula::is_true(f))
                }
                Some(Tok::Ident(name)) if name == "false" => {
                    self.bump();
                    Expr::F(Formula::is_false(f))
                }
                _ => {
                    let pos = self.here();
                    let t = self.term_atom(pos)?;
                    Expr::F(Formula::member(f, t))
                }
            };
        }
        Ok(e)
    }

    /// The term argument of postfix `:` is an atom or parenthesized.
    fn term_atom(&mut self, pos: usize) -> Result<Term, SyntaxError> {
        match self.bump() {
            Some(Tok::LParen) => {
                let inner = self.expr(1)?;
                match self.bump() {
                    Some(Tok::RParen) => {}
                    _ => {
                        return Err(SyntaxError::Syntax {
                            pos: self.here(),
                            msg: "expected `)`".into(),
                        })
                    }
                }
                want_term(inner, pos)
            }
            Some(Tok::Ident(name)) => self.ident_term(&name, pos),
            _ => Err(SyntaxError::Syntax {
                pos,
                msg: "expected a justification term after `:`".into(),
            }),
        }
    }

    fn ident_term(&self, name: &str, pos: usize) -> Result<Term, SyntaxError> {
        if let Some(v) = parse_var_j(name) {
            Ok(Term::Var(v))
        } else if self.sig.justs.contains(name) {
            Ok(Term::Const(name.to_string()))
        } else if parse_var_p(name).is_some() || self.sig.props.contains(name) {
            Err(SyntaxError::Sort {
                pos,
                msg: format!("`{name}` is propositional, expected a justification term"),
            })
        } else {
            Err(SyntaxError::UnknownConstant(name.to_string()))
        }
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                let pos = self.here();
                self.bump();
                let a = want_formula(self.unary()?, pos)?;
                Ok(Expr::F(Formula::not(a)))
            }
            Some(Tok::Ident(name)) if name == "box" => {
                let pos = self.here();
                self.bump();
                let a = want_formula(self.unary()?, pos)?;
                Ok(Expr::F(Formula::boxed(a)))
            }
            Some(Tok::Ident(name)) if name == "dia" => {
                let pos = self.here();
                self.bump();
                let a = want_formula(self.unary()?, pos)?;
                Ok(Expr::F(Formula::dia(a)))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::LParen) => {
                let inner = self.expr(1)?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(SyntaxError::Syntax {
                        pos: self.here(),
                        msg: "expected `)`".into(),
                    }),
                }
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "all" | "ex" => {
                    let var_pos = self.here();
                    let var = match self.bump() {
                        Some(Tok::Ident(v)) => parse_var_p(&v).ok_or(SyntaxError::Syntax {
                            pos: var_pos,
                            msg: "expected a propositional variable".into(),
                        })?,
                        _ => {
                            return Err(SyntaxError::Syntax {
                                pos: var_pos,
                                msg: "expected a propositional variable".into(),
                            })
                        }
                    };
                    self.expect_dot()?;
                    let body = want_formula(self.expr(1)?, pos)?;
                    let f = if name == "all" {
                        Formula::forall(var, body)?
                    } else {
                        Formula::exists(var, body)?
                    };
                    Ok(Expr::F(f))
                }
                "jall" | "jex" => {
                    let var_pos = self.here();
                    let var = match self.bump() {
                        Some(Tok::Ident(v)) => parse_var_j(&v).ok_or(SyntaxError::Syntax {
                            pos: var_pos,
                            msg: "expected a justification variable".into(),
                        })?,
                        _ => {
                            return Err(SyntaxError::Syntax {
                                pos: var_pos,
                                msg: "expected a justification variable".into(),
                            })
                        }
                    };
                    self.expect_dot()?;
                    let body = want_formula(self.expr(1)?, pos)?;
                    let f = if name == "jall" {
                        Formula::jforall(var, body)?
                    } else {
                        Formula::jexists(var, body)?
                    };
                    Ok(Expr::F(f))
                }
                "true" | "false" | "box" | "dia" | "const" | "prop" | "just" => {
                    Err(SyntaxError::Syntax {
                        pos,
                        msg: format!("keyword `{name}` cannot start an expression here"),
                    })
                }
                _ => {
                    if let Some(v) = parse_var_p(&name) {
                        Ok(Expr::F(Formula::Var(v)))
                    } else if let Some(v) = parse_var_j(&name) {
                        Ok(Expr::T(Term::Var(v)))
                    } else if self.sig.props.contains(&name) {
                        Ok(Expr::F(Formula::Const(name)))
                    } else if self.sig.justs.contains(&name) {
                        Ok(Expr::T(Term::Const(name)))
                    } else {
                        Err(SyntaxError::UnknownConstant(name))
                    }
                }
            },
            other => Err(SyntaxError::Syntax {
                pos,
                msg: match other {
                    None => "unexpected end of input".into(),
                    Some(t) => format!("unexpected token {t:?}"),
                },
            }),
        }
    }

    fn expect_dot(&mut self) -> Result<(), SyntaxError> {
        match self.bump() {
            Some(Tok::Dot) => Ok(()),
            _ => Err(SyntaxError::Syntax {
                pos: self.here(),
                msg: "expected `.` after the bound variable".into(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::with(&["d1", "d2"], &["c1"])
    }

    #[test]
    fn parses_implication() {
        let f = parse_formula("x0 -> x1", &sig()).unwrap();
        assert_eq!(
            f,
            Formula::implies(Formula::Var(VarP(0)), Formula::Var(VarP(1)))
        );
    }

    #[test]
    fn arrow_is_right_associative() {
        let f = parse_formula("x0 -> x1 -> x2", &sig()).unwrap();
        assert_eq!(f, parse_formula("x0 -> (x1 -> x2)", &sig()).unwrap());
    }

    #[test]
    fn desugars_necessity_as_justified_truth_shape() {
        let f = parse_formula("box x0 <-> jex v0. (x0 : v0)", &sig()).unwrap();
        let a = Formula::boxed(Formula::Var(VarP(0)));
        let b = Formula::not(
            Formula::jforall(
                VarJ(0),
                Formula::not(Formula::member(Formula::Var(VarP(0)), Term::Var(VarJ(0)))),
            )
            .unwrap(),
        );
        assert_eq!(f, Formula::iff(a, b));
    }

    #[test]
    fn improper_quantifier_is_rejected() {
        let err = parse_formula("all x0. d1", &sig()).unwrap_err();
        assert!(matches!(err, SyntaxError::ImproperFormula { .. }));
    }

    #[test]
    fn sort_error_on_term_sum_of_formulas() {
        let err = parse_formula("x0 + x1", &sig()).unwrap_err();
        assert!(matches!(err, SyntaxError::Sort { .. }));
    }

    #[test]
    fn unknown_constant_is_reported() {
        let err = parse_formula("d9 -> x0", &sig()).unwrap_err();
        assert!(matches!(err, SyntaxError::UnknownConstant(name) if name == "d9"));
    }

    #[test]
    fn eqeq_resolves_sort_by_operands() {
        assert_eq!(
            parse_formula("x0 == d1", &sig()).unwrap(),
            Formula::ident(Formula::Var(VarP(0)), Formula::Const("d1".into()))
        );
        assert_eq!(
            parse_formula("v0 == c1", &sig()).unwrap(),
            Formula::TermIdent(Term::Var(VarJ(0)), Term::Const("c1".into()))
        );
        assert!(matches!(
            parse_formula("x0 == v0", &sig()),
            Err(SyntaxError::Sort { .. })
        ));
    }

    #[test]
    fn postfix_binds_tighter_than_binary() {
        let f = parse_formula("x0 : v0 -> x1", &sig()).unwrap();
        assert_eq!(
            f,
            Formula::implies(
                Formula::member(Formula::Var(VarP(0)), Term::Var(VarJ(0))),
                Formula::Var(VarP(1))
            )
        );
    }

    #[test]
    fn binder_extends_maximally_right() {
        let f = parse_formula("all x0. x0 -> x1", &sig()).unwrap();
        assert_eq!(
            f,
            Formula::forall(
                VarP(0),
                Formula::implies(Formula::Var(VarP(0)), Formula::Var(VarP(1)))
            )
            .unwrap()
        );
    }

    #[test]
    fn dia_desugars() {
        let f = parse_formula("dia x0", &sig()).unwrap();
        assert_eq!(f, parse_formula("~ box ~ x0", &sig()).unwrap());
    }

    #[test]
    fn jex_desugars() {
        let f = parse_formula("jex v0.(x0 : v0)", &sig()).unwrap();
        assert_eq!(f, parse_formula("~ jall v0. ~(x0 : v0)", &sig()).unwrap());
    }

    #[test]
    fn and_desugars() {
        let f = parse_formula("x0 & x1", &sig()).unwrap();
        assert_eq!(f, parse_formula("~(x0 -> ~x1)", &sig()).unwrap());
    }

    #[test]
    fn substitution_text_round_trip() {
        let s = parse_substitution(r#"[x0:="box x1", v0:="c1 * v1"]"#, &sig()).unwrap();
        assert_eq!(
            s.var_p(VarP(0)),
            Formula::boxed(Formula::Var(VarP(1)))
        );
        assert_eq!(
            s.var_j(VarJ(0)),
            Term::prod(Term::Const("c1".into()), Term::Var(VarJ(1)))
        );
        assert_eq!(s.var_p(VarP(7)), Formula::Var(VarP(7)));
    }
}
