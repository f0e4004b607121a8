//! Desugaring, quantifier accounting, variable renaming, and prenex
//! conversion.

use crate::error::Error;
use crate::logic::ast::{free_vars, Formula, SetVar, VertexVar};

/// Quantifier counts of a formula, measured on its desugared form so a
/// universal quantifier counts as one quantifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantifierProfile {
    /// Vertex quantifiers.
    pub q1: usize,
    /// Set quantifiers.
    pub q2: usize,
}

impl QuantifierProfile {
    pub fn new(q1: usize, q2: usize) -> Self {
        QuantifierProfile { q1, q2 }
    }

    pub fn q(&self) -> usize {
        self.q1 + self.q2
    }

    pub fn is_first_order(&self) -> bool {
        self.q2 == 0
    }
}

/// Rewrites a formula into the core connectives: universals become negated
/// existentials, conjunction and implication unfold over disjunction and
/// negation, a biconditional becomes the conjunction of both implications,
/// and disequality becomes negated equality. Name tags are kept in place.
pub fn desugar(f: &Formula) -> Formula {
    match f {
        Formula::ExistsVertex(v, b) => Formula::ExistsVertex(*v, Box::new(desugar(b))),
        Formula::ExistsSet(v, b) => Formula::ExistsSet(*v, Box::new(desugar(b))),
        Formula::ForallVertex(v, b) => Formula::not(Formula::ExistsVertex(
            *v,
            Box::new(Formula::not(desugar(b))),
        )),
        Formula::ForallSet(v, b) => Formula::not(Formula::ExistsSet(
            *v,
            Box::new(Formula::not(desugar(b))),
        )),
        Formula::Or(l, r) => Formula::or(desugar(l), desugar(r)),
        Formula::And(l, r) => desugared_and(desugar(l), desugar(r)),
        Formula::Implies(l, r) => Formula::or(Formula::not(desugar(l)), desugar(r)),
        Formula::Iff(l, r) => {
            let (dl, dr) = (desugar(l), desugar(r));
            let fwd = Formula::or(Formula::not(dl.clone()), dr.clone());
            let back = Formula::or(Formula::not(dr), dl);
            desugared_and(fwd, back)
        }
        Formula::Not(b) => Formula::not(desugar(b)),
        Formula::NotEqual(a, b) => Formula::not(Formula::Equal(*a, *b)),
        Formula::Adjacent(..) | Formula::Equal(..) | Formula::Member(..) => f.clone(),
        Formula::Tagged(name, b) => Formula::Tagged(name.clone(), Box::new(desugar(b))),
    }
}

fn desugared_and(l: Formula, r: Formula) -> Formula {
    Formula::not(Formula::or(Formula::not(l), Formula::not(r)))
}

/// Counts vertex and set quantifiers over the desugared tree.
pub fn quantifier_profile(f: &Formula) -> QuantifierProfile {
    fn count(f: &Formula, p: &mut QuantifierProfile) {
        match f {
            Formula::ExistsVertex(_, b) => {
                p.q1 += 1;
                count(b, p);
            }
            Formula::ExistsSet(_, b) => {
                p.q2 += 1;
                count(b, p);
            }
            Formula::Or(l, r) => {
                count(l, p);
                count(r, p);
            }
            Formula::Not(b) | Formula::Tagged(_, b) => count(b, p),
            _ => {}
        }
    }
    let mut p = QuantifierProfile::new(0, 0);
    count(&desugar(f), &mut p);
    p
}

/// Gives every quantifier a fresh variable index so no variable is
/// quantified twice on any root-to-leaf path and nothing shadows a free
/// variable. Free occurrences keep their names.
pub fn rename_apart(f: &Formula) -> Formula {
    let mut next_v = max_vertex_var(f).map_or(1, |m| m + 1);
    let mut next_s = max_set_var(f).map_or(1, |m| m + 1);
    rename(f, &mut Vec::new(), &mut Vec::new(), &mut next_v, &mut next_s)
}

fn max_vertex_var(f: &Formula) -> Option<u32> {
    match f {
        Formula::ExistsVertex(v, b) | Formula::ForallVertex(v, b) => {
            Some(max_vertex_var(b).map_or(v.0, |m| m.max(v.0)))
        }
        Formula::ExistsSet(_, b) | Formula::ForallSet(_, b) => max_vertex_var(b),
        Formula::Or(l, r)
        | Formula::And(l, r)
        | Formula::Implies(l, r)
        | Formula::Iff(l, r) => match (max_vertex_var(l), max_vertex_var(r)) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        },
        Formula::Not(b) | Formula::Tagged(_, b) => max_vertex_var(b),
        Formula::Adjacent(a, b) | Formula::Equal(a, b) | Formula::NotEqual(a, b) => {
            Some(a.0.max(b.0))
        }
        Formula::Member(v, _) => Some(v.0),
    }
}

fn max_set_var(f: &Formula) -> Option<u32> {
    match f {
        Formula::ExistsSet(v, b) | Formula::ForallSet(v, b) => {
            Some(max_set_var(b).map_or(v.0, |m| m.max(v.0)))
        }
        Formula::ExistsVertex(_, b) | Formula::ForallVertex(_, b) => max_set_var(b),
        Formula::Or(l, r)
        | Formula::And(l, r)
        | Formula::Implies(l, r)
        | Formula::Iff(l, r) => match (max_set_var(l), max_set_var(r)) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        },
        Formula::Not(b) | Formula::Tagged(_, b) => max_set_var(b),
        Formula::Member(_, s) => Some(s.0),
        _ => None,
    }
}

fn rename(
    f: &Formula,
    env_v: &mut Vec<(u32, u32)>,
    env_s: &mut Vec<(u32, u32)>,
    next_v: &mut u32,
    next_s: &mut u32,
) -> Formula {
    let lookup_v = |env: &[(u32, u32)], i: u32| {
        env.iter().rev().find(|(old, _)| *old == i).map(|(_, new)| *new).unwrap_or(i)
    };
    match f {
        Formula::ExistsVertex(v, b) | Formula::ForallVertex(v, b) => {
            let fresh = *next_v;
            *next_v += 1;
            env_v.push((v.0, fresh));
            let body = rename(b, env_v, env_s, next_v, next_s);
            env_v.pop();
            let var = VertexVar(fresh);
            match f {
                Formula::ExistsVertex(..) => Formula::ExistsVertex(var, Box::new(body)),
                _ => Formula::ForallVertex(var, Box::new(body)),
            }
        }
        Formula::ExistsSet(v, b) | Formula::ForallSet(v, b) => {
            let fresh = *next_s;
            *next_s += 1;
            env_s.push((v.0, fresh));
            let body = rename(b, env_v, env_s, next_v, next_s);
            env_s.pop();
            let var = SetVar(fresh);
            match f {
                Formula::ExistsSet(..) => Formula::ExistsSet(var, Box::new(body)),
                _ => Formula::ForallSet(var, Box::new(body)),
            }
        }
        Formula::Or(l, r) => Formula::or(
            rename(l, env_v, env_s, next_v, next_s),
            rename(r, env_v, env_s, next_v, next_s),
        ),
        Formula::And(l, r) => Formula::and(
            rename(l, env_v, env_s, next_v, next_s),
            rename(r, env_v, env_s, next_v, next_s),
        ),
        Formula::Implies(l, r) => Formula::implies(
            rename(l, env_v, env_s, next_v, next_s),
            rename(r, env_v, env_s, next_v, next_s),
        ),
        Formula::Iff(l, r) => Formula::iff(
            rename(l, env_v, env_s, next_v, next_s),
            rename(r, env_v, env_s, next_v, next_s),
        ),
        Formula::Not(b) => Formula::not(rename(b, env_v, env_s, next_v, next_s)),
        Formula::Tagged(name, b) => {
            Formula::Tagged(name.clone(), Box::new(rename(b, env_v, env_s, next_v, next_s)))
        }
        Formula::Adjacent(a, b) => Formula::Adjacent(
            VertexVar(lookup_v(env_v, a.0)),
            VertexVar(lookup_v(env_v, b.0)),
        ),
        Formula::Equal(a, b) => Formula::Equal(
            VertexVar(lookup_v(env_v, a.0)),
            VertexVar(lookup_v(env_v, b.0)),
        ),
        Formula::NotEqual(a, b) => Formula::NotEqual(
            VertexVar(lookup_v(env_v, a.0)),
            VertexVar(lookup_v(env_v, b.0)),
        ),
        Formula::Member(v, s) => Formula::Member(
            VertexVar(lookup_v(env_v, v.0)),
            SetVar(lookup_v(env_s, s.0)),
        ),
    }
}

#[derive(Clone, Copy)]
enum Quant {
    ExistsV(VertexVar),
    ForallV(VertexVar),
    ExistsS(SetVar),
    ForallS(SetVar),
}

impl Quant {
    fn flip(self) -> Quant {
        match self {
            Quant::ExistsV(v) => Quant::ForallV(v),
            Quant::ForallV(v) => Quant::ExistsV(v),
            Quant::ExistsS(v) => Quant::ForallS(v),
            Quant::ForallS(v) => Quant::ExistsS(v),
        }
    }

    fn apply(self, body: Formula) -> Formula {
        match self {
            Quant::ExistsV(v) => Formula::ExistsVertex(v, Box::new(body)),
            Quant::ForallV(v) => Formula::ForallVertex(v, Box::new(body)),
            Quant::ExistsS(v) => Formula::ExistsSet(v, Box::new(body)),
            Quant::ForallS(v) => Formula::ForallSet(v, Box::new(body)),
        }
    }
}

/// Converts a sentence to prenex form: all quantifiers outermost over a
/// quantifier-free matrix, logically equivalent to the input, with the
/// quantifier profile unchanged. Biconditionals are expanded into both
/// implications first (the profile already counts them twice), then the
/// sentence is renamed apart and quantifiers are hoisted, flipping under
/// negation and on the left of implications.
///
/// Tags survive on quantifier-free subformulas; a tag wrapping a
/// quantifier is dropped, since hoisting would change what it names.
pub fn to_prenex(f: &Formula) -> Result<Formula, Error> {
    let fv = free_vars(f);
    if !fv.is_empty() {
        let vars: Vec<String> = fv
            .vertex
            .iter()
            .map(|i| format!("x{i}"))
            .chain(fv.set.iter().map(|i| format!("X{i}")))
            .collect();
        return Err(Error::NotASentence {
            vars: vars.join(", "),
        });
    }
    let expanded = expand_iff(f);
    let renamed = rename_apart(&expanded);
    let (prefix, matrix) = hoist(&renamed);
    Ok(prefix.into_iter().rev().fold(matrix, |acc, q| q.apply(acc)))
}

fn expand_iff(f: &Formula) -> Formula {
    match f {
        Formula::Iff(l, r) => {
            let (el, er) = (expand_iff(l), expand_iff(r));
            Formula::and(
                Formula::implies(el.clone(), er.clone()),
                Formula::implies(er, el),
            )
        }
        Formula::ExistsVertex(v, b) => Formula::ExistsVertex(*v, Box::new(expand_iff(b))),
        Formula::ForallVertex(v, b) => Formula::ForallVertex(*v, Box::new(expand_iff(b))),
        Formula::ExistsSet(v, b) => Formula::ExistsSet(*v, Box::new(expand_iff(b))),
        Formula::ForallSet(v, b) => Formula::ForallSet(*v, Box::new(expand_iff(b))),
        Formula::Or(l, r) => Formula::or(expand_iff(l), expand_iff(r)),
        Formula::And(l, r) => Formula::and(expand_iff(l), expand_iff(r)),
        Formula::Implies(l, r) => Formula::implies(expand_iff(l), expand_iff(r)),
        Formula::Not(b) => Formula::not(expand_iff(b)),
        Formula::Tagged(name, b) => Formula::Tagged(name.clone(), Box::new(expand_iff(b))),
        _ => f.clone(),
    }
}

fn contains_quantifier(f: &Formula) -> bool {
    match f {
        Formula::ExistsVertex(..)
        | Formula::ForallVertex(..)
        | Formula::ExistsSet(..)
        | Formula::ForallSet(..) => true,
        Formula::Or(l, r) | Formula::And(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
            contains_quantifier(l) || contains_quantifier(r)
        }
        Formula::Not(b) | Formula::Tagged(_, b) => contains_quantifier(b),
        _ => false,
    }
}

fn hoist(f: &Formula) -> (Vec<Quant>, Formula) {
    match f {
        Formula::ExistsVertex(v, b) => {
            let (mut p, m) = hoist(b);
            p.insert(0, Quant::ExistsV(*v));
            (p, m)
        }
        Formula::ForallVertex(v, b) => {
            let (mut p, m) = hoist(b);
            p.insert(0, Quant::ForallV(*v));
            (p, m)
        }
        Formula::ExistsSet(v, b) => {
            let (mut p, m) = hoist(b);
            p.insert(0, Quant::ExistsS(*v));
            (p, m)
        }
        Formula::ForallSet(v, b) => {
            let (mut p, m) = hoist(b);
            p.insert(0, Quant::ForallS(*v));
            (p, m)
        }
        Formula::Not(b) => {
            let (p, m) = hoist(b);
            let flipped = p.into_iter().map(Quant::flip).collect();
            (flipped, Formula::not(m))
        }
        Formula::Or(l, r) => {
            let (mut pl, ml) = hoist(l);
            let (pr, mr) = hoist(r);
            pl.extend(pr);
            (pl, Formula::or(ml, mr))
        }
        Formula::And(l, r) => {
            let (mut pl, ml) = hoist(l);
            let (pr, mr) = hoist(r);
            pl.extend(pr);
            (pl, Formula::and(ml, mr))
        }
        Formula::Implies(l, r) => {
            let (pl, ml) = hoist(l);
            let (pr, mr) = hoist(r);
            let mut p: Vec<Quant> = pl.into_iter().map(Quant::flip).collect();
            p.extend(pr);
            (p, Formula::implies(ml, mr))
        }
        Formula::Iff(..) => unreachable!("biconditionals are expanded before hoisting"),
        Formula::Tagged(name, b) => {
            if contains_quantifier(b) {
                hoist(b)
            } else {
                (Vec::new(), Formula::Tagged(name.clone(), b.clone()))
            }
        }
        atom => (Vec::new(), atom.clone()),
    }
}
