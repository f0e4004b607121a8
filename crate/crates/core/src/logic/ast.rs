use std::collections::BTreeSet;
use std::fmt;

/// A vertex variable `x<N>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexVar(pub u32);

/// A set variable `X<N>`. Lives in a namespace disjoint from vertex variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetVar(pub u32);

impl fmt::Display for VertexVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl fmt::Display for SetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}", self.0)
    }
}

/// Formula AST. The core connectives are the vertex and set existentials,
/// `Or`, `Not`, and the three atoms; the rest is sugar that `desugar`
/// eliminates. `Tagged` wraps a subformula with a cache name and is
/// transparent to the semantics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    ExistsVertex(VertexVar, Box<Formula>),
    ForallVertex(VertexVar, Box<Formula>),
    ExistsSet(SetVar, Box<Formula>),
    ForallSet(SetVar, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Adjacent(VertexVar, VertexVar),
    Equal(VertexVar, VertexVar),
    NotEqual(VertexVar, VertexVar),
    Member(VertexVar, SetVar),
    Tagged(String, Box<Formula>),
}

impl Formula {
    pub fn exists(var: u32, body: Formula) -> Formula {
        Formula::ExistsVertex(VertexVar(var), Box::new(body))
    }

    pub fn forall(var: u32, body: Formula) -> Formula {
        Formula::ForallVertex(VertexVar(var), Box::new(body))
    }

    pub fn exists_set(var: u32, body: Formula) -> Formula {
        Formula::ExistsSet(SetVar(var), Box::new(body))
    }

    pub fn forall_set(var: u32, body: Formula) -> Formula {
        Formula::ForallSet(SetVar(var), Box::new(body))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn adjacent(a: VertexVar, b: VertexVar) -> Formula {
        Formula::Adjacent(a, b)
    }

    pub fn equal(a: VertexVar, b: VertexVar) -> Formula {
        Formula::Equal(a, b)
    }

    pub fn not_equal(a: VertexVar, b: VertexVar) -> Formula {
        Formula::NotEqual(a, b)
    }

    pub fn member(v: VertexVar, s: SetVar) -> Formula {
        Formula::Member(v, s)
    }

    pub fn tagged(name: &str, f: Formula) -> Formula {
        Formula::Tagged(name.to_string(), Box::new(f))
    }

    /// Conjunction of a non-empty list, left-nested so it prints flat.
    pub fn and_all(parts: Vec<Formula>) -> Formula {
        let mut it = parts.into_iter();
        let first = it.next().expect("and_all needs at least one conjunct");
        it.fold(first, Formula::and)
    }

    /// Disjunction of a non-empty list, left-nested so it prints flat.
    pub fn or_all(parts: Vec<Formula>) -> Formula {
        let mut it = parts.into_iter();
        let first = it.next().expect("or_all needs at least one disjunct");
        it.fold(first, Formula::or)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print_formula(self))
    }
}

/// Free vertex and set variables of a formula.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FreeVars {
    pub vertex: BTreeSet<u32>,
    pub set: BTreeSet<u32>,
}

impl FreeVars {
    pub fn is_empty(&self) -> bool {
        self.vertex.is_empty() && self.set.is_empty()
    }
}

pub fn free_vars(f: &Formula) -> FreeVars {
    let mut out = FreeVars::default();
    collect_free(f, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

/// A sentence has no free variables.
pub fn is_sentence(f: &Formula) -> bool {
    free_vars(f).is_empty()
}

fn collect_free(
    f: &Formula,
    bound_v: &mut Vec<u32>,
    bound_s: &mut Vec<u32>,
    out: &mut FreeVars,
) {
    match f {
        Formula::ExistsVertex(v, b) | Formula::ForallVertex(v, b) => {
            bound_v.push(v.0);
            collect_free(b, bound_v, bound_s, out);
            bound_v.pop();
        }
        Formula::ExistsSet(v, b) | Formula::ForallSet(v, b) => {
            bound_s.push(v.0);
            collect_free(b, bound_v, bound_s, out);
            bound_s.pop();
        }
        Formula::Or(l, r)
        | Formula::And(l, r)
        | Formula::Implies(l, r)
        | Formula::Iff(l, r) => {
            collect_free(l, bound_v, bound_s, out);
            collect_free(r, bound_v, bound_s, out);
        }
        Formula::Not(b) | Formula::Tagged(_, b) => collect_free(b, bound_v, bound_s, out),
        Formula::Adjacent(a, b) | Formula::Equal(a, b) | Formula::NotEqual(a, b) => {
            for t in [a, b] {
                if !bound_v.contains(&t.0) {
                    out.vertex.insert(t.0);
                }
            }
        }
        Formula::Member(v, s) => {
            if !bound_v.contains(&v.0) {
                out.vertex.insert(v.0);
            }
            if !bound_s.contains(&s.0) {
                out.set.insert(s.0);
            }
        }
    }
}
