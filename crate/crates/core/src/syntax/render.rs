//! Printer for the core language. `parse_formula(render_formula(f)) == f`
//! exactly; sugar is never reintroduced.

use super::{Formula, Term};

pub fn render_formula(f: &Formula) -> String {
    let mut out = String::new();
    fmt_formula(f, 0, &mut out);
    out
}

pub fn render_term(t: &Term) -> String {
    let mut out = String::new();
    fmt_term(t, 0, &mut out);
    out
}

// Binding strength: quantifiers 0, `->` 1, comparisons 5, postfix 6,
// unary 7, atoms 8. A child is parenthesized when its strength is below
// what its context requires.

fn strength(f: &Formula) -> u8 {
    match f {
        Formula::Forall(..) | Formula::Jforall(..) => 0,
        Formula::Implies(..) => 1,
        Formula::Ident(..) | Formula::Refers(..) | Formula::TermIdent(..) | Formula::TermLe(..) => {
            5
        }
        Formula::IsTrue(..) | Formula::IsFalse(..) | Formula::Member(..) => 6,
        Formula::Not(..) | Formula::Box(..) => 7,
        Formula::Var(..) | Formula::Const(..) => 8,
    }
}

fn term_strength(t: &Term) -> u8 {
    match t {
        Term::Sum(..) => 6,
        Term::Prod(..) => 7,
        Term::Var(..) | Term::Const(..) => 8,
    }
}

fn fmt_formula(f: &Formula, required: u8, out: &mut String) {
    let paren = strength(f) < required;
    if paren {
        out.push('(');
    }
    match f {
        Formula::Var(x) => out.push_str(&x.to_string()),
        Formula::Const(d) => out.push_str(d),
        Formula::Implies(a, b) => {
            fmt_formula(a, 2, out);
            out.push_str(" -> ");
            fmt_formula(b, 1, out);
        }
        Formula::Not(a) => {
            out.push('~');
            fmt_formula(a, 7, out);
        }
        Formula::Ident(a, b) => {
            fmt_formula(a, 6, out);
            out.push_str(" == ");
            fmt_formula(b, 6, out);
        }
        Formula::Refers(a, b) => {
            fmt_formula(a, 6, out);
            out.push_str(" < ");
            fmt_formula(b, 6, out);
        }
        Formula::TermIdent(s, t) => {
            fmt_term(s, 6, out);
            out.push_str(" == ");
            fmt_term(t, 6, out);
        }
        Formula::TermLe(s, t) => {
            fmt_term(s, 6, out);
            out.push_str(" <= ");
            fmt_term(t, 6, out);
        }
        Formula::IsTrue(a) => {
            fmt_formula(a, 6, out);
            out.push_str(" : true");
        }
        Formula::IsFalse(a) => {
            fmt_formula(a, 6, out);
            out.push_str(" : false");
        }
        Formula::Box(a) => {
            out.push_str("box ");
            fmt_formula(a, 7, out);
        }
        Formula::Member(a, t) => {
            fmt_formula(a, 6, out);
            out.push_str(" : ");
            // the postfix term argument is an atom or parenthesized
            if matches!(t, Term::Var(_) | Term::Const(_)) {
                fmt_term(t, 0, out);
            } else {
                out.push('(');
                fmt_term(t, 0, out);
                out.push(')');
            }
        }
        Formula::Forall(x, a) => {
            out.push_str(&format!("all {x}. "));
            fmt_formula(a, 0, out);
        }
        Formula::Jforall(u, a) => {
            out.push_str(&format!("jall {u}. "));
            fmt_formula(a, 0, out);
        }
    }
    if paren {
        out.push(')');
    }
}

fn fmt_term(t: &Term, required: u8, out: &mut String) {
    let paren = term_strength(t) < required;
    if paren {
        out.push('(');
    }
    match t {
        Term::Var(u) => out.push_str(&u.to_string()),
        Term::Const(c) => out.push_str(c),
        Term::Prod(a, b) => {
            fmt_term(a, 7, out);
            out.push_str(" * ");
            fmt_term(b, 8, out);
        }
        Term::Sum(a, b) => {
            fmt_term(a, 6, out);
            out.push_str(" + ");
            fmt_term(b, 7, out);
        }
    }
    if paren {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Signature, VarJ, VarP};

    #[test]
    fn render_matches_expected_text() {
        let sig = Signature::with(&["d1"], &["c1"]);
        let f = Formula::implies(Formula::Var(VarP(0)), Formula::Var(VarP(1)));
        assert_eq!(render_formula(&f), "x0 -> x1");
        let f = Formula::boxed(Formula::not(Formula::Var(VarP(0))));
        assert_eq!(render_formula(&f), "box ~x0");
        let f = Formula::member(
            Formula::Const("d1".into()),
            Term::prod(Term::Var(VarJ(0)), Term::Const("c1".into())),
        );
        assert_eq!(render_formula(&f), "d1 : (v0 * c1)");
        for (src, _) in [("x0 -> x1", ()), ("box ~x0", ()), ("d1 : (v0 * c1)", ())] {
            let f = parse_formula(src, &sig).unwrap();
            assert_eq!(render_formula(&f), src);
        }
    }

    #[test]
    fn quantifier_child_is_parenthesized() {
        let body = Formula::implies(Formula::Var(VarP(0)), Formula::Var(VarP(1)));
        let q = Formula::forall(VarP(0), body).unwrap();
        let f = Formula::implies(q, Formula::Var(VarP(2)));
        let text = render_formula(&f);
        assert_eq!(text, "(all x0. x0 -> x1) -> x2");
        let sig = Signature::new();
        assert_eq!(parse_formula(&text, &sig).unwrap(), f);
    }
}
