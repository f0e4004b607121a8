//! Lower-bound instance generator: encodes an arbitrary source graph into
//! a bounded-integrity gadget graph plus companion formulas, so that
//! questions about the source (clique existence, 3-colorability) become
//! model-checking questions on the gadget graph.
//!
//! Layout of the gadget graph for a source on `n` vertices and `m` edges,
//! with `k` the smallest integer whose square reaches `ceil(log2 n)`:
//!
//! * a hub set of `2k` pairwise non-adjacent vertices;
//! * one *block* per source vertex: a `k`-clique, one leaf per vertex.
//!   Block slot `b` always attaches to hub `b`; attachments to hubs
//!   `k+1..2k` spell out the binary code of the source vertex (least
//!   significant bit first, `k` bits per slot);
//! * one *edge gadget* per source edge: two `k`-cliques (side one and side
//!   two) joined through a center vertex adjacent to all of them. Side
//!   slots copy the hub attachments of the two endpoint blocks. Side-one
//!   vertices carry two leaves each, side-two vertices three, the center
//!   four.
//!
//! Leaf counts make the layers recognizable by formulas, which is what the
//! role builders below exploit.

use std::collections::BTreeMap;

use serde_json::json;

use crate::error::Error;
use crate::eval::{evaluate_with_cache, Environment, PredicateCache};
use crate::graph::{Graph, Structure};
use crate::logic::{Formula, SetVar, VertexVar};

/// Which layer of the gadget graph a role formula recognizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Hub,
    Block,
    SideOne,
    SideTwo,
}

/// Role of a single gadget-graph vertex, from the builder's bookkeeping.
/// All indices are 1-based to match slot numbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexRole {
    Hub { index: usize },
    Block { block: usize, slot: usize },
    Side { gadget: usize, side: u8, slot: usize },
    Center { gadget: usize },
    Leaf { owner: usize },
}

/// Builder bookkeeping for one gadget graph.
#[derive(Debug, Clone)]
pub struct HMeta {
    pub k: usize,
    /// Hub ids in order; `hubs[b-1]` is hub `b`.
    pub hubs: Vec<usize>,
    /// `blocks[i-1][b-1]` is slot `b` of the block for source vertex `i`.
    pub blocks: Vec<Vec<usize>>,
    /// `sides[j-1][a-1][b-1]` is slot `b` of side `a` of gadget `j`.
    pub sides: Vec<[Vec<usize>; 2]>,
    /// `centers[j-1]` is the center of gadget `j`.
    pub centers: Vec<usize>,
    pub leaf_owner: BTreeMap<usize, usize>,
    /// `edge_blocks[j-1]` holds the 1-based source vertices of edge `j`,
    /// in lexicographic edge order.
    pub edge_blocks: Vec<(usize, usize)>,
    pub roles: Vec<VertexRole>,
}

/// A gadget graph together with its bookkeeping and the source it encodes.
#[derive(Debug, Clone)]
pub struct HardnessInstance {
    pub graph: Graph,
    pub meta: HMeta,
    pub source: Graph,
}

fn ceil_log2(n: usize) -> usize {
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

/// Expected gadget-graph order: hubs, blocks with one leaf per slot, and
/// per gadget two sides, a center, and their leaves.
pub fn expected_vertex_count(n: usize, m: usize, k: usize) -> usize {
    2 * k + n * 2 * k + m * (7 * k + 5)
}

/// Encodes `g` into its gadget graph. Needs at least two source vertices.
pub fn build_hardness_instance(g: &Graph) -> Result<HardnessInstance, Error> {
    let n = g.n();
    if n < 2 {
        return Err(Error::SourceTooSmall(n));
    }
    let bits = ceil_log2(n);
    let mut k = 1;
    while k * k < bits {
        k += 1;
    }

    let edges = g.edges();
    let m = edges.len();
    let total = expected_vertex_count(n, m, k);
    let mut h = Graph::empty(total);
    let mut roles = vec![VertexRole::Hub { index: 0 }; total];
    let mut next = 0;
    let mut alloc = |role: VertexRole| {
        let id = next;
        roles[id] = role;
        next += 1;
        id
    };

    let hubs: Vec<usize> = (1..=2 * k).map(|index| alloc(VertexRole::Hub { index })).collect();

    let mut leaf_owner = BTreeMap::new();
    let mut blocks = Vec::with_capacity(n);
    for i in 1..=n {
        let slots: Vec<usize> =
            (1..=k).map(|slot| alloc(VertexRole::Block { block: i, slot })).collect();
        for &owner in &slots {
            let leaf = alloc(VertexRole::Leaf { owner });
            leaf_owner.insert(leaf, owner);
        }
        blocks.push(slots);
    }

    let mut sides = Vec::with_capacity(m);
    let mut centers = Vec::with_capacity(m);
    let mut edge_blocks = Vec::with_capacity(m);
    for (j, &(u, v)) in edges.iter().enumerate() {
        let gadget = j + 1;
        let side1: Vec<usize> = (1..=k)
            .map(|slot| alloc(VertexRole::Side { gadget, side: 1, slot }))
            .collect();
        let side2: Vec<usize> = (1..=k)
            .map(|slot| alloc(VertexRole::Side { gadget, side: 2, slot }))
            .collect();
        let center = alloc(VertexRole::Center { gadget });
        for (side, leaves_each) in [(&side1, 2), (&side2, 3)] {
            for &owner in side.iter() {
                for _ in 0..leaves_each {
                    let leaf = alloc(VertexRole::Leaf { owner });
                    leaf_owner.insert(leaf, owner);
                }
            }
        }
        for _ in 0..4 {
            let leaf = alloc(VertexRole::Leaf { owner: center });
            leaf_owner.insert(leaf, center);
        }
        sides.push([side1, side2]);
        centers.push(center);
        edge_blocks.push((u + 1, v + 1));
    }
    debug_assert_eq!(next, total);

    // Cliques and leaf edges.
    for slots in &blocks {
        for a in 0..slots.len() {
            for b in a + 1..slots.len() {
                h.add_edge(slots[a], slots[b])?;
            }
        }
    }
    for j in 0..m {
        for side in &sides[j] {
            for a in 0..side.len() {
                for b in a + 1..side.len() {
                    h.add_edge(side[a], side[b])?;
                }
            }
            for &v in side {
                h.add_edge(centers[j], v)?;
            }
        }
    }
    for (&leaf, &owner) in &leaf_owner {
        h.add_edge(leaf, owner)?;
    }

    // Hub attachments: slot b pins to hub b; the code of the source vertex
    // (its index minus one, least significant bit first) selects hubs
    // k+1..2k, k bits per slot.
    let hub_targets = |source_index: usize, slot: usize| -> Vec<usize> {
        let code = source_index - 1;
        let mut targets = vec![hubs[slot - 1]];
        for offset in 1..=k {
            let bit = (slot - 1) * k + offset - 1;
            if code >> bit & 1 == 1 {
                targets.push(hubs[k + offset - 1]);
            }
        }
        targets
    };
    for (i, slots) in blocks.iter().enumerate() {
        for (s, &w) in slots.iter().enumerate() {
            for hub in hub_targets(i + 1, s + 1) {
                h.add_edge(w, hub)?;
            }
        }
    }
    for j in 0..m {
        let (i1, i2) = edge_blocks[j];
        for (side, block) in [(0usize, i1), (1, i2)] {
            for (s, &y) in sides[j][side].iter().enumerate() {
                for hub in hub_targets(block, s + 1) {
                    h.add_edge(y, hub)?;
                }
            }
        }
    }

    Ok(HardnessInstance {
        graph: h,
        meta: HMeta {
            k,
            hubs,
            blocks,
            sides,
            centers,
            leaf_owner,
            edge_blocks,
            roles,
        },
        source: g.clone(),
    })
}

impl HardnessInstance {
    pub fn role_of(&self, v: usize) -> &VertexRole {
        &self.meta.roles[v]
    }

    /// Roles, block dimensions, and edge numbering as JSON.
    pub fn metadata_json(&self) -> serde_json::Value {
        let roles: Vec<serde_json::Value> = self
            .meta
            .roles
            .iter()
            .enumerate()
            .map(|(id, role)| match role {
                VertexRole::Hub { index } => json!({"id": id, "role": "hub", "index": index}),
                VertexRole::Block { block, slot } => {
                    json!({"id": id, "role": "block", "block": block, "slot": slot})
                }
                VertexRole::Side { gadget, side, slot } => {
                    json!({"id": id, "role": "side", "gadget": gadget, "side": side, "slot": slot})
                }
                VertexRole::Center { gadget } => {
                    json!({"id": id, "role": "center", "gadget": gadget})
                }
                VertexRole::Leaf { owner } => json!({"id": id, "role": "leaf", "owner": owner}),
            })
            .collect();
        json!({
            "k": self.meta.k,
            "hub_count": self.meta.hubs.len(),
            "block_count": self.meta.blocks.len(),
            "gadget_count": self.meta.centers.len(),
            "vertex_count": self.graph.n(),
            "edge_numbering": self.meta.edge_blocks,
            "roles": roles,
        })
    }
}

struct VarGen {
    next: u32,
}

impl VarGen {
    fn new(start: u32) -> Self {
        VarGen { next: start }
    }

    fn fresh(&mut self) -> u32 {
        let v = self.next;
        self.next += 1;
        v
    }
}

fn xv(i: u32) -> VertexVar {
    VertexVar(i)
}

fn leaves_ge_at(c: usize, x: u32, vars: &mut VarGen) -> Formula {
    let witnesses: Vec<u32> = (0..c).map(|_| vars.fresh()).collect();
    let far = vars.fresh();
    let mut parts = Vec::new();
    for &w in &witnesses {
        parts.push(Formula::adjacent(xv(w), xv(x)));
    }
    for a in 0..c {
        for b in a + 1..c {
            parts.push(Formula::not_equal(xv(witnesses[a]), xv(witnesses[b])));
        }
    }
    let isolated = Formula::and_all(
        witnesses
            .iter()
            .map(|&w| Formula::not(Formula::adjacent(xv(far), xv(w))))
            .collect(),
    );
    parts.push(Formula::or(Formula::equal(xv(far), xv(x)), isolated));
    let mut f = Formula::forall(far, Formula::and_all(parts));
    for &w in witnesses.iter().rev() {
        f = Formula::exists(w, f);
    }
    Formula::Tagged(format!("leaves_ge{c}"), Box::new(f))
}

/// Formula with free `x1`, true of a vertex with at least `c` pendant
/// leaves attached (`1 <= c <= 4`).
pub fn leaves_at_least(c: usize) -> Result<Formula, Error> {
    if !(1..=4).contains(&c) {
        return Err(Error::LeafCountOutOfRange(c));
    }
    Ok(leaves_ge_at(c, 1, &mut VarGen::new(2)))
}

// "x has exactly one neighbor" - pendant vertices are the leaves plus any
// degenerate degree-one hub.
fn pendant_at(x: u32, vars: &mut VarGen) -> Formula {
    let nbr = vars.fresh();
    let other = vars.fresh();
    Formula::tagged(
        "pendant",
        Formula::exists(
            nbr,
            Formula::and(
                Formula::adjacent(xv(nbr), xv(x)),
                Formula::forall(
                    other,
                    Formula::implies(
                        Formula::adjacent(xv(other), xv(x)),
                        Formula::equal(xv(other), xv(nbr)),
                    ),
                ),
            ),
        ),
    )
}

fn role_at(role: Role, x: u32, vars: &mut VarGen) -> Formula {
    match role {
        Role::Hub => Formula::tagged("hub", Formula::not(leaves_ge_at(1, x, vars))),
        Role::Block => Formula::tagged(
            "block",
            Formula::and(
                leaves_ge_at(1, x, vars),
                Formula::not(leaves_ge_at(2, x, vars)),
            ),
        ),
        Role::SideOne => Formula::tagged(
            "side1",
            Formula::and(
                leaves_ge_at(2, x, vars),
                Formula::not(leaves_ge_at(3, x, vars)),
            ),
        ),
        Role::SideTwo => Formula::tagged(
            "side2",
            Formula::and(
                leaves_ge_at(3, x, vars),
                Formula::not(leaves_ge_at(4, x, vars)),
            ),
        ),
    }
}

/// Role recognizer with one free variable `x1`. Hubs have no leaves,
/// block vertices one, side-one vertices two, side-two vertices three.
/// Leaves themselves have no leaves attached either, so they also satisfy
/// the hub recognizer; the layered formulas below guard against that.
pub fn role_formula(role: Role) -> Formula {
    role_at(role, 1, &mut VarGen::new(2))
}

fn side_role(side: u8) -> Role {
    if side == 1 {
        Role::SideOne
    } else {
        Role::SideTwo
    }
}

fn side_match_branch(w: u32, y: u32, side: u8, vars: &mut VarGen) -> Formula {
    let peer = vars.fresh(); // scans w's block
    let partner = vars.fresh(); // sought in y's side
    let hub = vars.fresh();
    let hub_check = Formula::forall(
        hub,
        Formula::implies(
            Formula::and(
                role_at(Role::Hub, hub, vars),
                Formula::not(pendant_at(hub, vars)),
            ),
            Formula::iff(
                Formula::adjacent(xv(hub), xv(peer)),
                Formula::adjacent(xv(hub), xv(partner)),
            ),
        ),
    );
    let partner_exists = Formula::exists(
        partner,
        Formula::and_all(vec![
            role_at(side_role(side), partner, vars),
            Formula::or(
                Formula::adjacent(xv(partner), xv(y)),
                Formula::equal(xv(partner), xv(y)),
            ),
            hub_check,
        ]),
    );
    // Scan everything in w's clique that carries leaves. Each such peer
    // must be a genuine block vertex (a pendant hub on it would already
    // break the hub-neighborhood equality) with a matching partner.
    let scan = Formula::forall(
        peer,
        Formula::or_all(vec![
            Formula::not(leaves_ge_at(1, peer, vars)),
            Formula::and(
                Formula::not(Formula::adjacent(xv(peer), xv(w))),
                Formula::not(Formula::equal(xv(peer), xv(w))),
            ),
            Formula::and(role_at(Role::Block, peer, vars), partner_exists),
        ]),
    );
    Formula::and_all(vec![
        role_at(Role::Block, w, vars),
        role_at(side_role(side), y, vars),
        scan,
    ])
}

fn side_match_at(w: u32, y: u32, vars: &mut VarGen) -> Formula {
    Formula::tagged(
        "side_match",
        Formula::or(
            side_match_branch(w, y, 1, vars),
            side_match_branch(w, y, 2, vars),
        ),
    )
}

/// Two free variables `x1, x2`: true of a block vertex and an edge-gadget
/// side vertex whose layers attach to the hubs identically slot by slot,
/// i.e. the gadget side encodes the same source vertex as the block.
pub fn side_match_formula() -> Formula {
    side_match_at(1, 2, &mut VarGen::new(3))
}

fn adjacency_at(w1: u32, w2: u32, vars: &mut VarGen) -> Formula {
    let first = vars.fresh();
    let second = vars.fresh();
    let shared = vars.fresh();
    let combo = Formula::or(
        Formula::and(
            role_at(Role::SideOne, first, vars),
            role_at(Role::SideTwo, second, vars),
        ),
        Formula::and(
            role_at(Role::SideOne, second, vars),
            role_at(Role::SideTwo, first, vars),
        ),
    );
    // A common non-hub neighbor pins both sides to the same gadget: only
    // its center is adjacent to both cliques.
    let same_gadget = Formula::exists(
        shared,
        Formula::and_all(vec![
            Formula::not(role_at(Role::Hub, shared, vars)),
            Formula::adjacent(xv(first), xv(shared)),
            Formula::adjacent(xv(second), xv(shared)),
        ]),
    );
    Formula::tagged(
        "block_adj",
        Formula::and_all(vec![
            role_at(Role::Block, w1, vars),
            role_at(Role::Block, w2, vars),
            Formula::exists(
                first,
                Formula::exists(
                    second,
                    Formula::and_all(vec![
                        combo,
                        side_match_at(w1, first, vars),
                        side_match_at(w2, second, vars),
                        same_gadget,
                    ]),
                ),
            ),
        ]),
    )
}

/// Two free variables `x1, x2`: true of two block vertices whose source
/// vertices are adjacent in the source graph.
pub fn adjacency_formula() -> Formula {
    adjacency_at(1, 2, &mut VarGen::new(3))
}

/// Sentence that holds on the gadget graph iff the source graph contains
/// a clique on `q` vertices (`q >= 2`).
pub fn clique_formula(q: usize) -> Result<Formula, Error> {
    if q < 2 {
        return Err(Error::CliqueSizeTooSmall(q));
    }
    let chosen: Vec<u32> = (1..=q as u32).collect();
    let all_chosen_1 = q as u32 + 1;
    let all_chosen_2 = q as u32 + 2;
    let mut vars = VarGen::new(q as u32 + 3);

    let mut parts: Vec<Formula> = chosen
        .iter()
        .map(|&x| role_at(Role::Block, x, &mut vars))
        .collect();
    for a in 0..q {
        for b in a + 1..q {
            parts.push(Formula::not_equal(xv(chosen[a]), xv(chosen[b])));
        }
    }
    let misses = |probe: u32| {
        Formula::and_all(
            chosen
                .iter()
                .map(|&x| Formula::not(Formula::equal(xv(probe), xv(x))))
                .collect(),
        )
    };
    let pair_check = Formula::forall(
        all_chosen_1,
        Formula::forall(
            all_chosen_2,
            Formula::or_all(vec![
                misses(all_chosen_1),
                misses(all_chosen_2),
                Formula::equal(xv(all_chosen_1), xv(all_chosen_2)),
                adjacency_at(all_chosen_1, all_chosen_2, &mut vars),
            ]),
        ),
    );
    parts.push(pair_check);
    let mut f = Formula::and_all(parts);
    for &x in chosen.iter().rev() {
        f = Formula::exists(x, f);
    }
    Ok(f)
}

/// The quantifier-free-in-sets part of the 3-coloring sentence, with free
/// set variables `X1, X2, X3`.
pub fn three_coloring_matrix() -> Formula {
    let mut vars = VarGen::new(3);
    let v1 = 1u32;
    let v2 = 2u32;
    let covered = Formula::or_all(
        (1..=3)
            .map(|a| Formula::member(xv(v1), SetVar(a)))
            .collect(),
    );
    let mut parts = vec![covered];
    for a in 1..=3u32 {
        parts.push(Formula::implies(
            adjacency_at(v1, v2, &mut vars),
            Formula::implies(
                Formula::member(xv(v1), SetVar(a)),
                Formula::not(Formula::member(xv(v2), SetVar(a))),
            ),
        ));
    }
    Formula::forall(v1, Formula::forall(v2, Formula::and_all(parts)))
}

/// Sentence that holds on the gadget graph iff the source graph is
/// 3-colorable. Deciding it directly enumerates subsets of the whole
/// gadget graph, which is far beyond desk scale; use
/// [`check_coloring_witness`] for the witness direction.
pub fn three_coloring_formula() -> Formula {
    Formula::exists_set(
        1,
        Formula::exists_set(2, Formula::exists_set(3, three_coloring_matrix())),
    )
}

/// Binds the three color classes exactly as a coloring of the source
/// prescribes (class `a` holds the block cliques of the vertices colored
/// `a` for `a = 1, 2`; class 3 is everything else) and evaluates the
/// matrix of the 3-coloring sentence. True iff the coloring is proper.
pub fn check_coloring_witness(
    h: &HardnessInstance,
    coloring: &[u8],
) -> Result<bool, Error> {
    let mut cache = PredicateCache::new();
    check_coloring_witness_with_cache(h, coloring, &mut cache)
}

/// [`check_coloring_witness`] sharing one cache across calls, so repeated
/// checks on the same instance reuse the formula tables.
pub fn check_coloring_witness_with_cache(
    h: &HardnessInstance,
    coloring: &[u8],
    cache: &mut PredicateCache,
) -> Result<bool, Error> {
    if coloring.len() != h.source.n() || coloring.iter().any(|c| !(1..=3).contains(c)) {
        return Err(Error::BadColoring);
    }
    let mut class1 = std::collections::BTreeSet::new();
    let mut class2 = std::collections::BTreeSet::new();
    for (i, &color) in coloring.iter().enumerate() {
        let target = match color {
            1 => &mut class1,
            2 => &mut class2,
            _ => continue,
        };
        target.extend(h.meta.blocks[i].iter().copied());
    }
    let class3: std::collections::BTreeSet<usize> = (0..h.graph.n())
        .filter(|v| !class1.contains(v) && !class2.contains(v))
        .collect();
    let mut env = Environment::new();
    env.bind_set(1, class1).bind_set(2, class2).bind_set(3, class3);
    let s = Structure::new(h.graph.clone());
    evaluate_with_cache(&s, &three_coloring_matrix(), &env, cache)
}
