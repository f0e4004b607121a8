//! Component-type signatures and the kernelization that deletes surplus
//! components of a repeated type.
//!
//! Two components of `G \ S` have the same type when some bijection
//! between them preserves their internal edges and every vertex's exact
//! neighborhood in `S`. Each type only needs a bounded number of copies
//! for a sentence with a given quantifier profile: `q` copies for an FO
//! sentence with `q` quantifiers, and `2^(c*q2) * q1` copies when `q2` set
//! quantifiers are present and components have at most `c` vertices.
//! Everything beyond the limit is deleted; verdicts are unchanged.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::{Component, Graph};
use crate::logic::QuantifierProfile;

/// Largest component the signature canonicalization will chew through.
pub const DEFAULT_SIGNATURE_LIMIT: usize = 10;

/// Refuse keep limits beyond this; such kernels would be bigger than any
/// graph we could evaluate anyway.
pub const DEFAULT_KEEP_LIMIT_CAP: u64 = 1 << 48;

/// Canonical encoding of a component's internal edges and per-vertex
/// separator attachments. Equal signatures mean equal type, and conversely.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentSignature(Vec<u8>);

impl ComponentSignature {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// How to order a component's vertices when encoding its signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Canonicalization {
    /// Minimize the encoding over all vertex orderings. Exact: equal
    /// signatures iff the components have the same type.
    Exact,
    /// Encode under the ascending-id ordering only. Cheaper but merely
    /// sufficient: same-type components may still get distinct signatures,
    /// which keeps more copies than necessary. Retained for comparison.
    FirstOrdering,
}

pub fn component_signature(
    g: &Graph,
    s: &BTreeSet<usize>,
    c: &Component,
) -> Result<ComponentSignature, Error> {
    component_signature_with(g, s, c, Canonicalization::Exact, DEFAULT_SIGNATURE_LIMIT)
}

pub fn component_signature_with(
    g: &Graph,
    s: &BTreeSet<usize>,
    c: &Component,
    mode: Canonicalization,
    limit: usize,
) -> Result<ComponentSignature, Error> {
    let size = c.len();
    if size > limit {
        return Err(Error::SignatureCapacity { size, limit });
    }
    let hub_neighbors: Vec<Vec<usize>> = c
        .vertices()
        .iter()
        .map(|&v| g.neighbors(v).intersection(s).copied().collect())
        .collect();
    let encode = |order: &[usize]| -> Vec<u8> {
        let mut bytes = Vec::new();
        bytes.extend_from_slice(&(size as u32).to_be_bytes());
        // Upper-triangle adjacency bits in this ordering, packed MSB first.
        let mut acc = 0u8;
        let mut filled = 0;
        for i in 0..size {
            for j in i + 1..size {
                let vi = c.vertices()[order[i]];
                let vj = c.vertices()[order[j]];
                acc = acc << 1 | u8::from(g.has_edge(vi, vj));
                filled += 1;
                if filled == 8 {
                    bytes.push(acc);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            bytes.push(acc << (8 - filled));
        }
        for &idx in order {
            let nbrs = &hub_neighbors[idx];
            bytes.extend_from_slice(&(nbrs.len() as u32).to_be_bytes());
            for &v in nbrs {
                bytes.extend_from_slice(&(v as u32).to_be_bytes());
            }
        }
        bytes
    };
    let identity: Vec<usize> = (0..size).collect();
    let bytes = match mode {
        Canonicalization::FirstOrdering => encode(&identity),
        Canonicalization::Exact => identity
            .iter()
            .copied()
            .permutations(size)
            .map(|order| encode(&order))
            .min()
            .unwrap_or_else(|| encode(&identity)),
    };
    Ok(ComponentSignature(bytes))
}

/// Copies to keep per type for an FO sentence with `q` quantifiers. With
/// `q + 1` same-type components one is always removable, so `q` suffice;
/// clamped to one so a quantifier-free sentence never empties the graph.
pub fn fo_keep_limit(profile: QuantifierProfile) -> Result<u64, Error> {
    if profile.q2 != 0 {
        return Err(Error::WrongFragment);
    }
    Ok((profile.q1 as u64).max(1))
}

/// Copies to keep per type for an MSO sentence, with `c` the maximum
/// component size: `2^(c*q2) * q1`, clamped to one. A quantified set can
/// split a type into at most `2^c` subtypes per quantifier, hence the
/// factor.
pub fn mso_keep_limit(c: usize, profile: QuantifierProfile) -> Result<u64, Error> {
    mso_keep_limit_with_cap(c, profile, DEFAULT_KEEP_LIMIT_CAP)
}

pub fn mso_keep_limit_with_cap(
    c: usize,
    profile: QuantifierProfile,
    cap: u64,
) -> Result<u64, Error> {
    assert!(c >= 1, "component size bound must be positive");
    let overflow = || Error::KeepLimitOverflow {
        c,
        q1: profile.q1,
        q2: profile.q2,
        cap,
    };
    let exponent = (c as u64).checked_mul(profile.q2 as u64).ok_or_else(overflow)?;
    if exponent >= 64 {
        return Err(overflow());
    }
    let limit = (1u64 << exponent)
        .checked_mul(profile.q1 as u64)
        .ok_or_else(overflow)?;
    if limit > cap {
        return Err(overflow());
    }
    Ok(limit.max(1))
}

fn keep_limit_for(profile: QuantifierProfile, max_component: usize, cap: u64) -> Result<u64, Error> {
    if profile.is_first_order() {
        fo_keep_limit(profile)
    } else {
        mso_keep_limit_with_cap(max_component.max(1), profile, cap)
    }
}

/// What the kernelization did, serializable for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelReport {
    pub original_components: usize,
    pub type_count: usize,
    pub keep_limit: u64,
    pub removed_vertices: usize,
    /// Hex signature of each type mapped to how many copies were kept.
    pub kept_per_type: BTreeMap<String, usize>,
}

/// Kernelization result: the compacted graph, where the separator ended
/// up in it, the new-id to old-id map, and the report.
#[derive(Debug, Clone)]
pub struct Kernelized {
    pub graph: Graph,
    pub separator: BTreeSet<usize>,
    pub vertex_map: Vec<usize>,
    pub report: KernelReport,
}

pub fn kernelize(
    g: &Graph,
    s: &BTreeSet<usize>,
    profile: QuantifierProfile,
) -> Result<Kernelized, Error> {
    kernelize_with(
        g,
        s,
        profile,
        Canonicalization::Exact,
        DEFAULT_SIGNATURE_LIMIT,
        DEFAULT_KEEP_LIMIT_CAP,
    )
}

/// Groups the components of `g \ s` by signature and keeps, within each
/// group, the `keep_limit` components with the smallest minimum vertex id;
/// the rest are deleted and ids are compacted. The separator itself always
/// survives in full.
pub fn kernelize_with(
    g: &Graph,
    s: &BTreeSet<usize>,
    profile: QuantifierProfile,
    mode: Canonicalization,
    signature_limit: usize,
    keep_limit_cap: u64,
) -> Result<Kernelized, Error> {
    let components = g.components_after_removal(s)?;
    let max_component = components.iter().map(|c| c.len()).max().unwrap_or(0);
    let keep_limit = keep_limit_for(profile, max_component, keep_limit_cap)?;

    let mut groups: BTreeMap<ComponentSignature, Vec<&Component>> = BTreeMap::new();
    for c in &components {
        let sig = component_signature_with(g, s, c, mode, signature_limit)?;
        groups.entry(sig).or_default().push(c);
    }

    let mut doomed: BTreeSet<usize> = BTreeSet::new();
    let mut kept_per_type = BTreeMap::new();
    for (sig, group) in &groups {
        // Component order is already by minimum vertex id.
        for c in group.iter().skip(keep_limit as usize) {
            doomed.extend(c.vertices().iter().copied());
        }
        kept_per_type.insert(sig.to_hex(), group.len().min(keep_limit as usize));
    }

    let (graph, vertex_map) = g.delete_vertices(&doomed)?;
    let mut old_to_new = BTreeMap::new();
    for (new, &old) in vertex_map.iter().enumerate() {
        old_to_new.insert(old, new);
    }
    let separator: BTreeSet<usize> = s.iter().map(|v| old_to_new[v]).collect();

    let report = KernelReport {
        original_components: components.len(),
        type_count: groups.len(),
        keep_limit,
        removed_vertices: doomed.len(),
        kept_per_type,
    };
    Ok(Kernelized {
        graph,
        separator,
        vertex_map,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::type_isomorphic;

    fn set(ids: &[usize]) -> BTreeSet<usize> {
        ids.iter().copied().collect()
    }

    /// Apex vertex 0 attached to one endpoint of each of `count` disjoint
    /// edges.
    fn apex_with_edges(count: usize) -> Graph {
        let mut g = Graph::empty(1 + 2 * count);
        for i in 0..count {
            let a = 1 + 2 * i;
            g.add_edge(a, a + 1).unwrap();
            g.add_edge(0, a).unwrap();
        }
        g
    }

    #[test]
    fn singletons_on_same_hub_share_a_signature() {
        let g = Graph::from_edges(3, &[(0, 1), (0, 2)]).unwrap();
        let s = set(&[0]);
        let comps = g.components_after_removal(&s).unwrap();
        let sig1 = component_signature(&g, &s, &comps[0]).unwrap();
        let sig2 = component_signature(&g, &s, &comps[1]).unwrap();
        assert_eq!(sig1, sig2);
    }

    #[test]
    fn singletons_on_different_hubs_differ() {
        let g = Graph::from_edges(4, &[(0, 2), (1, 3)]).unwrap();
        let s = set(&[0, 1]);
        let comps = g.components_after_removal(&s).unwrap();
        let sig1 = component_signature(&g, &s, &comps[0]).unwrap();
        let sig2 = component_signature(&g, &s, &comps[1]).unwrap();
        assert_ne!(sig1, sig2);
    }

    #[test]
    fn rotated_triangles_share_a_signature() {
        // Two triangles; in each, exactly one vertex attaches to hub 0,
        // but at a different position in the id order.
        let g = Graph::from_edges(
            7,
            &[
                (1, 2),
                (2, 3),
                (1, 3),
                (4, 5),
                (5, 6),
                (4, 6),
                (0, 1),
                (0, 6),
            ],
        )
        .unwrap();
        let s = set(&[0]);
        let comps = g.components_after_removal(&s).unwrap();
        assert_eq!(comps.len(), 2);
        let sig1 = component_signature(&g, &s, &comps[0]).unwrap();
        let sig2 = component_signature(&g, &s, &comps[1]).unwrap();
        assert_eq!(sig1, sig2);
        assert!(type_isomorphic(&g, &s, &comps[0], &comps[1])
            .unwrap()
            .is_some());
    }

    #[test]
    fn signature_matches_type_isomorphism_on_all_pairs() {
        // Mixed component shapes behind a two-vertex hub.
        let g = Graph::from_edges(
            11,
            &[
                (0, 2),
                (2, 3),
                (0, 4),
                (4, 5),
                (1, 6),
                (6, 7),
                (0, 8),
                (1, 8),
                (9, 10),
            ],
        )
        .unwrap();
        let s = set(&[0, 1]);
        let comps = g.components_after_removal(&s).unwrap();
        for i in 0..comps.len() {
            for j in i + 1..comps.len() {
                let same_sig = component_signature(&g, &s, &comps[i]).unwrap()
                    == component_signature(&g, &s, &comps[j]).unwrap();
                let iso = type_isomorphic(&g, &s, &comps[i], &comps[j])
                    .unwrap()
                    .is_some();
                assert_eq!(same_sig, iso, "components {i} and {j} disagree");
            }
        }
    }

    #[test]
    fn signature_capacity_is_enforced() {
        let g = Graph::path(12);
        let comps = g.components_after_removal(&set(&[])).unwrap();
        let err = component_signature(&g, &set(&[]), &comps[0]).unwrap_err();
        assert!(matches!(err, Error::SignatureCapacity { size: 12, limit: 10 }));
    }

    #[test]
    fn fo_keep_limits() {
        assert_eq!(fo_keep_limit(QuantifierProfile::new(3, 0)).unwrap(), 3);
        assert_eq!(fo_keep_limit(QuantifierProfile::new(0, 0)).unwrap(), 1);
        assert_eq!(fo_keep_limit(QuantifierProfile::new(1, 0)).unwrap(), 1);
        assert!(matches!(
            fo_keep_limit(QuantifierProfile::new(1, 1)),
            Err(Error::WrongFragment)
        ));
    }

    #[test]
    fn mso_keep_limits() {
        assert_eq!(mso_keep_limit(2, QuantifierProfile::new(2, 1)).unwrap(), 8);
        assert_eq!(mso_keep_limit(3, QuantifierProfile::new(4, 0)).unwrap(), 4);
        assert_eq!(mso_keep_limit(3, QuantifierProfile::new(1, 2)).unwrap(), 64);
        let err = mso_keep_limit(8, QuantifierProfile::new(2, 8)).unwrap_err();
        assert!(matches!(err, Error::KeepLimitOverflow { .. }));
        assert!(err.is_capacity());
    }

    #[test]
    fn fo_kernel_keeps_two_edge_components() {
        let g = apex_with_edges(10);
        let s = set(&[0]);
        let k = kernelize(&g, &s, QuantifierProfile::new(2, 0)).unwrap();
        assert_eq!(k.graph.n(), 5);
        assert_eq!(k.report.removed_vertices, 16);
        assert_eq!(k.report.original_components, 10);
        assert_eq!(k.report.type_count, 1);
        assert_eq!(k.report.keep_limit, 2);
        assert_eq!(k.separator, set(&[0]));
        // Kept copies are the ones with the smallest minimum vertex ids.
        assert_eq!(k.vertex_map, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn mso_kernel_keeps_eight_edge_components() {
        let g = apex_with_edges(10);
        let s = set(&[0]);
        let k = kernelize(&g, &s, QuantifierProfile::new(2, 1)).unwrap();
        assert_eq!(k.report.keep_limit, 8);
        assert_eq!(k.graph.n(), 17);
    }

    #[test]
    fn distinct_types_are_untouched() {
        // Hub 0 with a pendant vertex, a pendant edge, and a pendant
        // triangle: three types, one copy each.
        let g = Graph::from_edges(
            7,
            &[
                (0, 1),
                (0, 2),
                (2, 3),
                (0, 4),
                (4, 5),
                (5, 6),
                (4, 6),
            ],
        )
        .unwrap();
        let s = set(&[0]);
        let k = kernelize(&g, &s, QuantifierProfile::new(1, 0)).unwrap();
        assert_eq!(k.graph, g);
        assert_eq!(k.report.removed_vertices, 0);
        assert_eq!(k.report.type_count, 3);
    }

    #[test]
    fn kernelize_is_idempotent() {
        let g = apex_with_edges(10);
        let s = set(&[0]);
        let profile = QuantifierProfile::new(2, 0);
        let once = kernelize(&g, &s, profile).unwrap();
        let twice = kernelize(&once.graph, &once.separator, profile).unwrap();
        assert_eq!(twice.graph, once.graph);
        assert_eq!(twice.report.removed_vertices, 0);
        assert_eq!(twice.separator, once.separator);
    }

    #[test]
    fn first_ordering_mode_is_coarser_but_safe() {
        let g = Graph::from_edges(
            7,
            &[
                (1, 2),
                (2, 3),
                (1, 3),
                (4, 5),
                (5, 6),
                (4, 6),
                (0, 1),
                (0, 6),
            ],
        )
        .unwrap();
        let s = set(&[0]);
        let exact = kernelize_with(
            &g,
            &s,
            QuantifierProfile::new(1, 0),
            Canonicalization::Exact,
            DEFAULT_SIGNATURE_LIMIT,
            DEFAULT_KEEP_LIMIT_CAP,
        )
        .unwrap();
        let first = kernelize_with(
            &g,
            &s,
            QuantifierProfile::new(1, 0),
            Canonicalization::FirstOrdering,
            DEFAULT_SIGNATURE_LIMIT,
            DEFAULT_KEEP_LIMIT_CAP,
        )
        .unwrap();
        assert_eq!(exact.report.type_count, 1);
        assert!(first.report.type_count >= exact.report.type_count);
        assert!(first.graph.n() >= exact.graph.n());
    }

    #[test]
    fn report_serializes_with_stable_keys() {
        let g = apex_with_edges(3);
        let k = kernelize(&g, &set(&[0]), QuantifierProfile::new(1, 0)).unwrap();
        let json = serde_json::to_value(&k.report).unwrap();
        for key in [
            "original_components",
            "type_count",
            "keep_limit",
            "removed_vertices",
            "kept_per_type",
        ] {
            assert!(json.get(key).is_some(), "missing key {key}");
        }
        let back: KernelReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, k.report);
    }
}
