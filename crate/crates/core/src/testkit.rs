//! Brute-force oracles and seeded random generators. Everything here is
//! deliberately independent of the main pipeline so the property suites
//! have something honest to compare against.

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::graph::Graph;
use crate::integrity::Separator;
use crate::logic::{Formula, SetVar, VertexVar};

const ORACLE_LIMIT: usize = 20;
const VERTEX_COVER_LIMIT: usize = 14;

/// Deterministic, platform-independent random stream, splittable so
/// sub-generators can be handed out without correlating draws.
pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn from_seed(seed: u64) -> Self {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn split(&mut self) -> Rng {
        Rng(ChaCha8Rng::seed_from_u64(self.0.gen()))
    }

    /// Uniform in `0..bound` (`bound > 0`).
    pub fn below(&mut self, bound: usize) -> usize {
        self.0.gen_range(0..bound)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.0.gen_bool(p)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.gen()
    }
}

/// Bounds for the random-formula generator.
#[derive(Debug, Clone, Copy)]
pub struct FormulaProfile {
    pub q1_max: usize,
    pub q2_max: usize,
    pub depth: usize,
}

/// Knobs for the seeded generators.
#[derive(Debug, Clone, Copy)]
pub struct GeneratorParams {
    pub seed: u64,
    /// Target vertex count; generation stops at or below this.
    pub n: usize,
    pub separator_size: usize,
    pub max_component_size: usize,
    /// Number of distinct component templates to draw from.
    pub component_type_pool: usize,
    pub formula_profile: FormulaProfile,
}

/// True iff some `q`-subset of vertices is pairwise adjacent.
pub fn brute_clique(g: &Graph, q: usize) -> Result<bool, Error> {
    if g.n() > ORACLE_LIMIT {
        return Err(Error::SearchCapacity {
            n: g.n(),
            limit: ORACLE_LIMIT,
        });
    }
    if q > g.n() {
        return Ok(false);
    }
    Ok((0..g.n()).combinations(q).any(|subset| {
        subset
            .iter()
            .tuple_combinations()
            .all(|(&a, &b)| g.has_edge(a, b))
    }))
}

/// First proper 3-coloring in backtracking order, colors `1..=3`.
pub fn brute_three_color(g: &Graph) -> Result<Option<Vec<u8>>, Error> {
    if g.n() > ORACLE_LIMIT {
        return Err(Error::SearchCapacity {
            n: g.n(),
            limit: ORACLE_LIMIT,
        });
    }
    fn assign(g: &Graph, colors: &mut Vec<u8>, v: usize) -> bool {
        if v == g.n() {
            return true;
        }
        for color in 1..=3u8 {
            let ok = g
                .neighbors(v)
                .iter()
                .filter(|&&w| w < v)
                .all(|&w| colors[w] != color);
            if ok {
                colors[v] = color;
                if assign(g, colors, v + 1) {
                    return true;
                }
            }
        }
        colors[v] = 0;
        false
    }
    let mut colors = vec![0u8; g.n()];
    Ok(assign(g, &mut colors, 0).then_some(colors))
}

/// Minimum vertex cover size, exhaustive by increasing size.
pub fn brute_vertex_cover(g: &Graph) -> Result<usize, Error> {
    if g.n() > VERTEX_COVER_LIMIT {
        return Err(Error::SearchCapacity {
            n: g.n(),
            limit: VERTEX_COVER_LIMIT,
        });
    }
    let edges = g.edges();
    for size in 0..=g.n() {
        for subset in (0..g.n()).combinations(size) {
            let cover: BTreeSet<usize> = subset.into_iter().collect();
            if edges
                .iter()
                .all(|&(u, v)| cover.contains(&u) || cover.contains(&v))
            {
                return Ok(size);
            }
        }
    }
    unreachable!("all vertices always cover");
}

/// Plain random graph with independent edge probability `p`.
pub fn random_graph(n: usize, p: f64, rng: &mut Rng) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.chance(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// The FO sentence "there is a clique on `q` distinct vertices", for
/// checking source graphs directly.
pub fn clique_sentence(q: usize) -> Formula {
    let vars: Vec<u32> = (1..=q as u32).collect();
    let mut parts = Vec::new();
    for a in 0..q {
        for b in a + 1..q {
            parts.push(Formula::not_equal(VertexVar(vars[a]), VertexVar(vars[b])));
            parts.push(Formula::adjacent(VertexVar(vars[a]), VertexVar(vars[b])));
        }
    }
    if parts.is_empty() {
        // q <= 1: any vertex will do.
        return Formula::exists(1, Formula::equal(VertexVar(1), VertexVar(1)));
    }
    let mut f = Formula::and_all(parts);
    for &v in vars.iter().rev() {
        f = Formula::exists(v, f);
    }
    f
}

// One reusable component shape: a connected graph on `size` vertices
// (random spanning tree plus extras) and, per vertex, a hub-attachment set.
struct ComponentTemplate {
    size: usize,
    edges: Vec<(usize, usize)>,
    hub_links: Vec<Vec<usize>>,
}

fn random_template(
    rng: &mut Rng,
    max_component_size: usize,
    separator_size: usize,
) -> ComponentTemplate {
    let size = 1 + rng.below(max_component_size);
    let mut edges = Vec::new();
    for v in 1..size {
        edges.push((rng.below(v), v));
    }
    for u in 0..size {
        for v in u + 1..size {
            if !edges.contains(&(u, v)) && rng.chance(0.3) {
                edges.push((u, v));
            }
        }
    }
    let hub_links = (0..size)
        .map(|_| (0..separator_size).filter(|_| rng.chance(0.4)).collect())
        .collect();
    ComponentTemplate {
        size,
        edges,
        hub_links,
    }
}

/// Builds a graph with a planted separator: `separator_size` hub vertices
/// with random internal edges, plus components instantiated from a pool
/// of `component_type_pool` templates until the vertex budget `n` is
/// spent. Copies of one template always have the same type relative to
/// the hubs. Deterministic in the seed.
pub fn random_graph_with_separator(p: &GeneratorParams) -> Result<(Graph, Separator), Error> {
    if p.max_component_size == 0 || p.component_type_pool == 0 {
        return Err(Error::BadGeneratorParams(
            "component size and pool must be positive".into(),
        ));
    }
    if p.n < p.separator_size {
        return Err(Error::BadGeneratorParams(format!(
            "n = {} is smaller than the separator ({})",
            p.n, p.separator_size
        )));
    }
    let mut rng = Rng::from_seed(p.seed);
    let templates: Vec<ComponentTemplate> = (0..p.component_type_pool)
        .map(|_| random_template(&mut rng, p.max_component_size, p.separator_size))
        .collect();

    let mut edges: Vec<(usize, usize)> = Vec::new();
    for u in 0..p.separator_size {
        for v in u + 1..p.separator_size {
            if rng.chance(0.5) {
                edges.push((u, v));
            }
        }
    }
    let mut used = p.separator_size;
    let mut max_component = 0;
    loop {
        let t = &templates[rng.below(templates.len())];
        if used + t.size > p.n {
            break;
        }
        let base = used;
        for &(a, b) in &t.edges {
            edges.push((base + a, base + b));
        }
        for (v, links) in t.hub_links.iter().enumerate() {
            for &hub in links {
                edges.push((hub, base + v));
            }
        }
        used += t.size;
        max_component = max_component.max(t.size);
    }
    let g = Graph::from_edges(used, &edges)?;
    let hubs: BTreeSet<usize> = (0..p.separator_size).collect();
    let max = g.max_component_size_after_removal(&hubs)?;
    debug_assert_eq!(max, max_component);
    Ok((
        g,
        Separator {
            k: p.separator_size + max,
            max_component_size: max,
            vertices: hubs,
        },
    ))
}

/// Random sentence within the profile's quantifier and depth budget.
/// Mixes sugar connectives; every variable is bound by construction.
/// Quantifiers are never generated inside a biconditional so the profile
/// bounds hold after desugaring too. Deterministic in the seed.
pub fn random_formula(p: &GeneratorParams) -> Formula {
    let mut rng = Rng::from_seed(p.seed);
    let mut budget = Budget {
        q1: p.formula_profile.q1_max.max(1),
        q2: p.formula_profile.q2_max,
    };
    let scope = Scope {
        vertex: Vec::new(),
        set: Vec::new(),
        next_vertex: 1,
        next_set: 1,
    };
    gen_formula(
        &mut rng,
        &mut budget,
        &scope,
        p.formula_profile.depth.max(2),
        true,
    )
}

struct Budget {
    q1: usize,
    q2: usize,
}

struct Scope {
    vertex: Vec<u32>,
    set: Vec<u32>,
    next_vertex: u32,
    next_set: u32,
}

fn gen_atom(rng: &mut Rng, scope: &Scope) -> Formula {
    let pick = |rng: &mut Rng, pool: &[u32]| pool[rng.below(pool.len())];
    let kind = if scope.set.is_empty() {
        rng.below(3)
    } else {
        rng.below(4)
    };
    let a = VertexVar(pick(rng, &scope.vertex));
    match kind {
        0 => Formula::adjacent(a, VertexVar(pick(rng, &scope.vertex))),
        1 => Formula::equal(a, VertexVar(pick(rng, &scope.vertex))),
        2 => Formula::not_equal(a, VertexVar(pick(rng, &scope.vertex))),
        _ => Formula::member(a, SetVar(pick(rng, &scope.set))),
    }
}

fn gen_formula(
    rng: &mut Rng,
    budget: &mut Budget,
    scope: &Scope,
    depth: usize,
    quantifiers_allowed: bool,
) -> Formula {
    let must_quantify = scope.vertex.is_empty();
    if must_quantify {
        // A sentence needs at least one vertex in scope before any atom.
        return gen_vertex_quantifier(rng, budget, scope, depth);
    }
    if depth == 0 {
        return gen_atom(rng, scope);
    }
    let can_q1 = quantifiers_allowed && budget.q1 > 0;
    let can_q2 = quantifiers_allowed && budget.q2 > 0;
    match rng.below(10) {
        0 | 1 if can_q1 => gen_vertex_quantifier(rng, budget, scope, depth),
        2 if can_q2 => gen_set_quantifier(rng, budget, scope, depth),
        3 => Formula::not(gen_formula(rng, budget, scope, depth - 1, quantifiers_allowed)),
        4 | 5 => {
            let l = gen_formula(rng, budget, scope, depth - 1, quantifiers_allowed);
            let r = gen_formula(rng, budget, scope, depth - 1, quantifiers_allowed);
            if rng.chance(0.5) {
                Formula::or(l, r)
            } else {
                Formula::and(l, r)
            }
        }
        6 => {
            let l = gen_formula(rng, budget, scope, depth - 1, quantifiers_allowed);
            let r = gen_formula(rng, budget, scope, depth - 1, quantifiers_allowed);
            Formula::implies(l, r)
        }
        7 => {
            // No quantifiers below a biconditional: desugaring duplicates
            // the operands, which would double-count them in the profile.
            let l = gen_formula(rng, budget, scope, depth - 1, false);
            let r = gen_formula(rng, budget, scope, depth - 1, false);
            Formula::iff(l, r)
        }
        _ => gen_atom(rng, scope),
    }
}

fn gen_vertex_quantifier(
    rng: &mut Rng,
    budget: &mut Budget,
    scope: &Scope,
    depth: usize,
) -> Formula {
    budget.q1 -= 1;
    let var = scope.next_vertex;
    let mut inner = Scope {
        vertex: scope.vertex.clone(),
        set: scope.set.clone(),
        next_vertex: scope.next_vertex + 1,
        next_set: scope.next_set,
    };
    inner.vertex.push(var);
    let body = gen_formula(rng, budget, &inner, depth.saturating_sub(1), true);
    if rng.chance(0.5) {
        Formula::exists(var, body)
    } else {
        Formula::forall(var, body)
    }
}

fn gen_set_quantifier(
    rng: &mut Rng,
    budget: &mut Budget,
    scope: &Scope,
    depth: usize,
) -> Formula {
    budget.q2 -= 1;
    let var = scope.next_set;
    let mut inner = Scope {
        vertex: scope.vertex.clone(),
        set: scope.set.clone(),
        next_vertex: scope.next_vertex,
        next_set: scope.next_set + 1,
    };
    inner.set.push(var);
    let body = gen_formula(rng, budget, &inner, depth.saturating_sub(1), true);
    if rng.chance(0.5) {
        Formula::exists_set(var, body)
    } else {
        Formula::forall_set(var, body)
    }
}
