//! The formula language: AST, concrete syntax, and the desugaring,
//! renaming, and prenex transformations, together with quantifier
//! accounting.
//!
//! Vertex variables are written `x<N>` and set variables `X<N>`; the two
//! namespaces are disjoint. After [`desugar`] only the seven core
//! connectives remain (set/vertex existentials, disjunction, negation,
//! adjacency, equality, membership); universal quantifiers, conjunction,
//! implication, biconditional, and disequality are sugar on top of those.
//! A subformula may carry a name tag, which is semantically inert and
//! marks it cacheable for the evaluator.

mod ast;
mod parser;
mod printer;
mod transform;

pub use ast::{free_vars, is_sentence, Formula, FreeVars, SetVar, VertexVar};
pub use parser::parse_formula;
pub use printer::print_formula;
pub use transform::{
    desugar, quantifier_profile, rename_apart, to_prenex, QuantifierProfile,
};

#[cfg(test)]
mod tests {
    use super::*;

    fn xv(i: u32) -> VertexVar {
        VertexVar(i)
    }

    #[test]
    fn parse_nested_existentials() {
        let f = parse_formula("exists x1. exists x2. x1 ~ x2").unwrap();
        let want = Formula::exists(
            1,
            Formula::exists(2, Formula::adjacent(xv(1), xv(2))),
        );
        assert_eq!(f, want);
        assert!(is_sentence(&f));
    }

    #[test]
    fn parse_universal_sentence() {
        let f = parse_formula("forall x1. x1 = x1").unwrap();
        assert_eq!(f, Formula::forall(1, Formula::equal(xv(1), xv(1))));
        assert!(is_sentence(&f));
    }

    #[test]
    fn parse_set_quantifier_over_vertex_quantifier() {
        let f = parse_formula("exists X1. forall x1. x1 in X1").unwrap();
        let want = Formula::exists_set(
            1,
            Formula::forall(1, Formula::member(xv(1), SetVar(1))),
        );
        assert_eq!(f, want);
        let p = quantifier_profile(&f);
        assert_eq!((p.q1, p.q2), (1, 1));
    }

    #[test]
    fn parse_reports_position() {
        let err = parse_formula("exists x1.\n  x1 ~ )").unwrap_err();
        match err {
            crate::Error::Parse { line, col, .. } => {
                assert_eq!(line, 2);
                assert!(col > 1);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn parse_allows_free_variables() {
        let f = parse_formula("x1 ~ x2").unwrap();
        assert!(!is_sentence(&f));
        let fv = free_vars(&f);
        assert_eq!(fv.vertex.into_iter().collect::<Vec<_>>(), vec![1, 2]);
        assert!(fv.set.is_empty());
    }

    #[test]
    fn comments_are_skipped() {
        let f = parse_formula("# header\nexists x1. x1 = x1 # trailing\n").unwrap();
        assert!(is_sentence(&f));
    }

    #[test]
    fn print_round_trips_basic_forms() {
        for text in [
            "exists x1. exists x2. x1 ~ x2",
            "forall x1. x1 = x1",
            "exists X1. forall x1. x1 in X1",
        ] {
            let f = parse_formula(text).unwrap();
            let printed = print_formula(&f);
            assert_eq!(parse_formula(&printed).unwrap(), f, "round trip of {text}");
        }
    }

    #[test]
    fn print_keeps_iff_sugar() {
        let f = parse_formula("x1 = x2 <-> x2 = x1").unwrap();
        let printed = print_formula(&f);
        assert!(printed.contains("<->"), "printed: {printed}");
        assert_eq!(parse_formula(&printed).unwrap(), f);
    }

    #[test]
    fn print_preserves_nested_negations() {
        let f = Formula::not(Formula::not(Formula::not(Formula::equal(xv(1), xv(1)))));
        let printed = print_formula(&f);
        assert_eq!(parse_formula(&printed).unwrap(), f);
    }

    #[test]
    fn print_parenthesizes_quantifier_operands() {
        let q = Formula::exists(1, Formula::equal(xv(1), xv(1)));
        let f = Formula::and(q.clone(), Formula::equal(xv(2), xv(2)));
        let printed = print_formula(&f);
        assert_eq!(parse_formula(&printed).unwrap(), f, "printed: {printed}");
        let g = Formula::or(q.clone(), q);
        let printed = print_formula(&g);
        assert_eq!(parse_formula(&printed).unwrap(), g, "printed: {printed}");
    }

    #[test]
    fn tags_survive_printing() {
        let f = Formula::tagged("hub", Formula::not(Formula::equal(xv(1), xv(1))));
        let printed = print_formula(&f);
        assert!(printed.starts_with("@hub("), "printed: {printed}");
        assert_eq!(parse_formula(&printed).unwrap(), f);
    }

    #[test]
    fn desugar_forall() {
        let f = parse_formula("forall x1. x1 = x1").unwrap();
        let want = parse_formula("!(exists x1. !(x1 = x1))").unwrap();
        assert_eq!(desugar(&f), want);
    }

    #[test]
    fn desugar_conjunction() {
        let f = parse_formula("x1 ~ x2 & x1 = x2").unwrap();
        let want = parse_formula("!((!(x1 ~ x2)) | (!(x1 = x2)))").unwrap();
        assert_eq!(desugar(&f), want);
    }

    #[test]
    fn desugar_of_core_formula_is_identity() {
        let f = parse_formula("exists x1. (!(x1 = x1)) | (exists X1. x1 in X1)").unwrap();
        assert_eq!(desugar(&f), f);
    }

    #[test]
    fn profile_counts_vertex_quantifiers() {
        let f = parse_formula("exists x1. exists x2. x1 ~ x2").unwrap();
        let p = quantifier_profile(&f);
        assert_eq!((p.q1, p.q2, p.q()), (2, 0, 2));
    }

    #[test]
    fn profile_counts_each_forall_once() {
        let f = parse_formula("forall x1. forall X1. exists x2. x1 in X1 | x1 ~ x2").unwrap();
        let p = quantifier_profile(&f);
        assert_eq!((p.q1, p.q2), (2, 1));
    }

    #[test]
    fn prenex_requires_sentence() {
        let f = parse_formula("x1 ~ x2").unwrap();
        assert!(to_prenex(&f).is_err());
    }

    #[test]
    fn prenex_of_prenex_only_renames() {
        let f = parse_formula("exists x1. forall x2. x1 ~ x2").unwrap();
        let g = to_prenex(&f).unwrap();
        match &g {
            Formula::ExistsVertex(_, body) => match body.as_ref() {
                Formula::ForallVertex(_, inner) => {
                    assert!(matches!(inner.as_ref(), Formula::Adjacent(_, _)))
                }
                other => panic!("expected forall, got {other:?}"),
            },
            other => panic!("expected exists, got {other:?}"),
        }
        let p = quantifier_profile(&f);
        let q = quantifier_profile(&g);
        assert_eq!((p.q1, p.q2), (q.q1, q.q2));
    }

    #[test]
    fn prenex_pulls_quantifiers_out_of_disjunction() {
        let f = parse_formula("(exists x1. x1 = x1) | (exists x1. x1 = x1)").unwrap();
        let g = to_prenex(&f).unwrap();
        let p = quantifier_profile(&g);
        assert_eq!((p.q1, p.q2), (2, 0));
        // Two distinct variables, both quantified up front.
        match &g {
            Formula::ExistsVertex(v1, body) => match body.as_ref() {
                Formula::ExistsVertex(v2, inner) => {
                    assert_ne!(v1.0, v2.0);
                    assert!(!has_quantifier(inner));
                }
                other => panic!("expected second exists, got {other:?}"),
            },
            other => panic!("expected prenex prefix, got {other:?}"),
        }
    }

    fn has_quantifier(f: &Formula) -> bool {
        match f {
            Formula::ExistsVertex(..)
            | Formula::ForallVertex(..)
            | Formula::ExistsSet(..)
            | Formula::ForallSet(..) => true,
            Formula::Not(b) | Formula::Tagged(_, b) => has_quantifier(b),
            Formula::Or(l, r)
            | Formula::And(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => has_quantifier(l) || has_quantifier(r),
            _ => false,
        }
    }

    #[test]
    fn prenex_flips_quantifiers_under_negation_and_implication() {
        let f = parse_formula("(exists x1. x1 = x1) -> (exists x2. x2 = x2)").unwrap();
        let g = to_prenex(&f).unwrap();
        match &g {
            Formula::ForallVertex(_, body) => {
                assert!(matches!(body.as_ref(), Formula::ExistsVertex(..)))
            }
            other => panic!("expected flipped prefix, got {other:?}"),
        }
    }

    #[test]
    fn rename_apart_removes_shadowing() {
        let f = parse_formula("exists x1. (exists x1. x1 = x1) | x1 = x1").unwrap();
        let g = rename_apart(&f);
        fn vars_on_path(f: &Formula, seen: &mut Vec<u32>) -> bool {
            match f {
                Formula::ExistsVertex(v, b) | Formula::ForallVertex(v, b) => {
                    if seen.contains(&v.0) {
                        return false;
                    }
                    seen.push(v.0);
                    let ok = vars_on_path(b, seen);
                    seen.pop();
                    ok
                }
                Formula::ExistsSet(_, b) | Formula::ForallSet(_, b) => vars_on_path(b, seen),
                Formula::Not(b) | Formula::Tagged(_, b) => vars_on_path(b, seen),
                Formula::Or(l, r)
                | Formula::And(l, r)
                | Formula::Implies(l, r)
                | Formula::Iff(l, r) => vars_on_path(l, seen) && vars_on_path(r, seen),
                _ => true,
            }
        }
        assert!(vars_on_path(&g, &mut Vec::new()));
        assert!(is_sentence(&g));
    }
}
