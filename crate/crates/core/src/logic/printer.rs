//! Pretty printer. Parenthesizes just enough that parsing the output
//! reproduces the input tree, sugar included.

use crate::logic::ast::Formula;

/// Binding strength; quantifiers are weakest because their body extends
/// maximally to the right.
fn prec(f: &Formula) -> u8 {
    match f {
        Formula::ExistsVertex(..)
        | Formula::ForallVertex(..)
        | Formula::ExistsSet(..)
        | Formula::ForallSet(..) => 0,
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        Formula::Not(..) => 5,
        _ => 6,
    }
}

fn write(f: &Formula, min: u8, out: &mut String) {
    if prec(f) < min {
        out.push('(');
        write(f, 0, out);
        out.push(')');
        return;
    }
    match f {
        Formula::ExistsVertex(v, b) => {
            out.push_str(&format!("exists {v}. "));
            write(b, 0, out);
        }
        Formula::ForallVertex(v, b) => {
            out.push_str(&format!("forall {v}. "));
            write(b, 0, out);
        }
        Formula::ExistsSet(v, b) => {
            out.push_str(&format!("exists {v}. "));
            write(b, 0, out);
        }
        Formula::ForallSet(v, b) => {
            out.push_str(&format!("forall {v}. "));
            write(b, 0, out);
        }
        Formula::Iff(l, r) => {
            write(l, 1, out);
            out.push_str(" <-> ");
            write(r, 2, out);
        }
        Formula::Implies(l, r) => {
            write(l, 3, out);
            out.push_str(" -> ");
            write(r, 2, out);
        }
        Formula::Or(l, r) => {
            write(l, 3, out);
            out.push_str(" | ");
            write(r, 4, out);
        }
        Formula::And(l, r) => {
            write(l, 4, out);
            out.push_str(" & ");
            write(r, 5, out);
        }
        Formula::Not(b) => {
            out.push('!');
            // A negated binary atom is wrapped even though the grammar
            // would bind it correctly; "!(x1 ~ x2)" reads as intended,
            // "!x1 ~ x2" does not.
            if matches!(
                b.as_ref(),
                Formula::Adjacent(..)
                    | Formula::Equal(..)
                    | Formula::NotEqual(..)
                    | Formula::Member(..)
            ) {
                out.push('(');
                write(b, 0, out);
                out.push(')');
            } else {
                write(b, 5, out);
            }
        }
        Formula::Adjacent(a, b) => out.push_str(&format!("{a} ~ {b}")),
        Formula::Equal(a, b) => out.push_str(&format!("{a} = {b}")),
        Formula::NotEqual(a, b) => out.push_str(&format!("{a} != {b}")),
        Formula::Member(v, s) => out.push_str(&format!("{v} in {s}")),
        Formula::Tagged(name, b) => {
            out.push('@');
            out.push_str(name);
            out.push('(');
            write(b, 0, out);
            out.push(')');
        }
    }
}

/// Renders a formula so that `parse_formula(print_formula(f)) == f`.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write(f, 0, &mut out);
    out
}
