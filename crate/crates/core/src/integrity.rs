//! Exact vertex integrity: the minimum over vertex sets `S` of `|S|` plus
//! the size of the largest component left after removing `S`. Exhaustive
//! search, intended for small graphs; callers with bigger inputs should
//! bring their own separator and use [`verify_separator`].

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::Error;
use crate::graph::Graph;

/// Largest vertex count [`vertex_integrity_exact`] will search.
pub const DEFAULT_SEARCH_LIMIT: usize = 24;

/// A separator certifying an integrity bound: `|s| + max_component_size <= k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separator {
    pub vertices: BTreeSet<usize>,
    /// The certified integrity value.
    pub k: usize,
    /// Size of the largest component of `G \ S`; zero if nothing remains.
    pub max_component_size: usize,
}

/// True iff removing `s` leaves components of size at most `k - |s|`.
pub fn verify_separator(g: &Graph, s: &BTreeSet<usize>, k: usize) -> Result<bool, Error> {
    let max = g.max_component_size_after_removal(s)?;
    Ok(s.len() + max <= k)
}

/// Computes the vertex integrity of `g` exactly, together with the
/// lexicographically smallest optimal separator.
pub fn vertex_integrity_exact(g: &Graph) -> Result<Separator, Error> {
    vertex_integrity_exact_with_limit(g, DEFAULT_SEARCH_LIMIT)
}

pub fn vertex_integrity_exact_with_limit(g: &Graph, limit: usize) -> Result<Separator, Error> {
    let n = g.n();
    if n > limit {
        return Err(Error::SearchCapacity { n, limit });
    }
    if n == 0 {
        return Ok(Separator {
            vertices: BTreeSet::new(),
            k: 0,
            max_component_size: 0,
        });
    }

    // Budgets k = 1, 2, ...; for each, separators by increasing size. The
    // first budget that admits any separator is the integrity.
    let iota = smallest_budget(g)?;

    // Second pass in pure lexicographic order over vertex-id lists to pick
    // the smallest optimal witness ({0,2} beats {1}).
    let mut prefix = Vec::new();
    let witness = lex_first_witness(g, iota, &mut prefix)?
        .expect("the budget search certified this integrity value");
    let max = g.max_component_size_after_removal(&witness)?;
    Ok(Separator {
        vertices: witness,
        k: iota,
        max_component_size: max,
    })
}

fn smallest_budget(g: &Graph) -> Result<usize, Error> {
    let n = g.n();
    for k in 1..=n {
        for size in 0..=k.min(n) {
            for subset in (0..n).combinations(size) {
                let s: BTreeSet<usize> = subset.into_iter().collect();
                let max = g.max_component_size_after_removal(&s)?;
                if s.len() + max <= k {
                    return Ok(k);
                }
            }
        }
    }
    unreachable!("S = V(G) always certifies k = n");
}

fn lex_first_witness(
    g: &Graph,
    iota: usize,
    prefix: &mut Vec<usize>,
) -> Result<Option<BTreeSet<usize>>, Error> {
    let s: BTreeSet<usize> = prefix.iter().copied().collect();
    let max = g.max_component_size_after_removal(&s)?;
    if s.len() + max <= iota {
        return Ok(Some(s));
    }
    // Any extension has |S| + max >= |S| + 1, so stop once the prefix
    // alone fills the budget.
    if prefix.len() >= iota {
        return Ok(None);
    }
    let start = prefix.last().map_or(0, |&v| v + 1);
    for v in start..g.n() {
        prefix.push(v);
        if let Some(hit) = lex_first_witness(g, iota, prefix)? {
            prefix.pop();
            return Ok(Some(hit));
        }
        prefix.pop();
    }
    Ok(None)
}
