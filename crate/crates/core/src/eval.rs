//! Model-checking evaluator.
//!
//! Sentences are decided by direct enumeration: vertex existentials try
//! candidate vertices and stop at the first witness (universals, desugared
//! to negated existentials, stop at the first counterexample), and set
//! existentials enumerate all subsets of the vertex set by increasing size.
//! Subformulas carrying a name tag are memoized per tuple of their free
//! vertex-variable values in a [`PredicateCache`], which makes the layered
//! gadget formulas of [`crate::construct`] evaluable at desk scale.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::BuildHasherDefault;

use crate::error::Error;
use crate::graph::{Graph, Structure};
use crate::logic::{desugar, free_vars, Formula};

/// Largest vertex count a set quantifier will enumerate subsets over.
pub const DEFAULT_SET_QUANTIFIER_CAP: usize = 24;

/// Evaluation knobs.
#[derive(Debug, Clone, Copy)]
pub struct EvalOptions {
    /// Set quantification enumerates `2^n` subsets; refuse beyond this `n`.
    pub set_quantifier_cap: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            set_quantifier_cap: DEFAULT_SET_QUANTIFIER_CAP,
        }
    }
}

/// Variable bindings supplied from outside a formula: values for its free
/// vertex and set variables. Bindings extend whatever the structure's
/// labeling and coloring already define.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Environment {
    vertex: BTreeMap<u32, usize>,
    set: BTreeMap<u32, BTreeSet<usize>>,
}

impl Environment {
    pub fn new() -> Self {
        Environment::default()
    }

    pub fn bind_vertex(&mut self, var: u32, value: usize) -> &mut Self {
        self.vertex.insert(var, value);
        self
    }

    pub fn bind_set(&mut self, var: u32, value: BTreeSet<usize>) -> &mut Self {
        self.set.insert(var, value);
        self
    }

    pub fn vertex(&self, var: u32) -> Option<usize> {
        self.vertex.get(&var).copied()
    }

    pub fn set(&self, var: u32) -> Option<&BTreeSet<usize>> {
        self.set.get(&var)
    }
}

/// Memo table for name-tagged subformulas.
///
/// Entries are keyed by tag name and the values of the subformula's free
/// vertex variables; only subformulas with no free set variables are ever
/// cached, so entries cannot depend on set bindings. The evaluator still
/// discards all entries whenever a set quantifier rebinds a set inside an
/// evaluation. A cache is tied to the first structure it is used with and
/// resets itself when it sees a different one, so reusing one cache across
/// many evaluations of the same structure is safe and skips refilling the
/// tables.
#[derive(Debug, Default)]
pub struct PredicateCache {
    fingerprint: Option<(usize, usize, u64)>,
    names: HashMap<String, u32>,
    entries: HashMap<(u32, ArgsKey), bool, BuildHasherDefault<KeyHasher>>,
}

// Keys are a few small integers and cache probes happen millions of times
// per table fill; hash them with two multiply-xor rounds instead of the
// default hasher.
#[derive(Default)]
struct KeyHasher(u64);

impl std::hash::Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(b as u64);
        }
    }

    fn write_u32(&mut self, i: u32) {
        self.write_u64(i as u64);
    }

    fn write_u64(&mut self, i: u64) {
        let mut x = self.0 ^ i.wrapping_mul(0x9e3779b97f4a7c15);
        x ^= x >> 29;
        x = x.wrapping_mul(0xbf58476d1ce4e5b9);
        self.0 = x ^ (x >> 32);
    }

    fn write_usize(&mut self, i: usize) {
        self.write_u64(i as u64);
    }

    fn write_u8(&mut self, i: u8) {
        self.write_u64(i as u64);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum ArgsKey {
    Zero,
    One(u32),
    Two(u32, u32),
    Many(Box<[u32]>),
}

impl PredicateCache {
    pub fn new() -> Self {
        PredicateCache::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of cached entries under one tag name.
    pub fn entries_for(&self, name: &str) -> usize {
        match self.names.get(name) {
            Some(&id) => self.entries.keys().filter(|(n, _)| *n == id).count(),
            None => 0,
        }
    }

    fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.names.get(name) {
            return id;
        }
        let id = self.names.len() as u32;
        self.names.insert(name.to_string(), id);
        id
    }

    fn bind_structure(&mut self, s: &Structure) {
        let fp = structure_fingerprint(s);
        if self.fingerprint != Some(fp) {
            self.entries.clear();
            self.fingerprint = Some(fp);
        }
    }
}

fn structure_fingerprint(s: &Structure) -> (usize, usize, u64) {
    // FNV over the edge list; cheap and good enough to catch accidental reuse.
    let g = s.graph();
    let mut h: u64 = 0xcbf29ce484222325;
    let mut mix = |x: u64| {
        h ^= x;
        h = h.wrapping_mul(0x100000001b3);
    };
    for (u, v) in g.edges() {
        mix(u as u64);
        mix(v as u64);
    }
    for (&c, &v) in s.labeling() {
        mix(0x10000 + c as u64);
        mix(v as u64);
    }
    for (&c, set) in s.coloring() {
        mix(0x20000 + c as u64);
        for &v in set {
            mix(v as u64);
        }
    }
    (g.n(), g.edge_count(), h)
}

/// Decides whether the structure models the formula under the given
/// environment. Every free variable of the formula must be bound by the
/// environment or by the structure's labeling and coloring.
pub fn model_check(s: &Structure, f: &Formula, env: &Environment) -> Result<bool, Error> {
    evaluate(s, f, env, None, EvalOptions::default())
}

pub fn model_check_with_options(
    s: &Structure,
    f: &Formula,
    env: &Environment,
    opts: EvalOptions,
) -> Result<bool, Error> {
    evaluate(s, f, env, None, opts)
}

/// Same verdict as [`model_check`], reusing and filling `cache` for
/// name-tagged subformulas.
pub fn evaluate_with_cache(
    s: &Structure,
    f: &Formula,
    env: &Environment,
    cache: &mut PredicateCache,
) -> Result<bool, Error> {
    evaluate(s, f, env, Some(cache), EvalOptions::default())
}

pub fn evaluate_with_cache_and_options(
    s: &Structure,
    f: &Formula,
    env: &Environment,
    cache: &mut PredicateCache,
    opts: EvalOptions,
) -> Result<bool, Error> {
    evaluate(s, f, env, Some(cache), opts)
}

/// Decides `G ⊨ φ` for a sentence over a bare graph (no labels, no colors).
pub fn check_sentence(g: &Graph, f: &Formula) -> Result<bool, Error> {
    check_sentence_with_options(g, f, EvalOptions::default())
}

pub fn check_sentence_with_options(
    g: &Graph,
    f: &Formula,
    opts: EvalOptions,
) -> Result<bool, Error> {
    let fv = free_vars(f);
    if !fv.is_empty() {
        return Err(not_a_sentence(&fv));
    }
    let s = Structure::new(g.clone());
    evaluate(&s, f, &Environment::new(), None, opts)
}

fn not_a_sentence(fv: &crate::logic::FreeVars) -> Error {
    let vars: Vec<String> = fv
        .vertex
        .iter()
        .map(|i| format!("x{i}"))
        .chain(fv.set.iter().map(|i| format!("X{i}")))
        .collect();
    Error::NotASentence {
        vars: vars.join(", "),
    }
}

// Narrows quantifier scopes before evaluation: conjuncts and disjuncts
// that do not mention the quantified variable move outside it, so guard
// atoms reject candidates before deeper quantifiers are entered. The
// displayed gadget formulas keep their guards inside the innermost
// universal; without this pass, evaluating them enumerates every witness
// tuple. All rewrites are equivalences; the two that are not vacuously
// true over an empty vertex set are gated on `nonempty`. Nothing ever
// moves across a tag boundary.
fn miniscope(f: Formula, nonempty: bool) -> Formula {
    match f {
        Formula::ExistsVertex(v, b) => scope_quantifier(
            miniscope(*b, nonempty),
            &|part| mentions_vertex_var(part, v.0),
            &|body| Formula::ExistsVertex(v, Box::new(body)),
            true,
            nonempty,
        ),
        Formula::ForallVertex(v, b) => scope_quantifier(
            miniscope(*b, nonempty),
            &|part| mentions_vertex_var(part, v.0),
            &|body| Formula::ForallVertex(v, Box::new(body)),
            false,
            nonempty,
        ),
        Formula::ExistsSet(v, b) => scope_quantifier(
            miniscope(*b, nonempty),
            &|part| mentions_set_var(part, v.0),
            &|body| Formula::ExistsSet(v, Box::new(body)),
            true,
            nonempty,
        ),
        Formula::ForallSet(v, b) => scope_quantifier(
            miniscope(*b, nonempty),
            &|part| mentions_set_var(part, v.0),
            &|body| Formula::ForallSet(v, Box::new(body)),
            false,
            nonempty,
        ),
        Formula::Or(l, r) => Formula::or(miniscope(*l, nonempty), miniscope(*r, nonempty)),
        Formula::And(l, r) => Formula::and(miniscope(*l, nonempty), miniscope(*r, nonempty)),
        Formula::Implies(l, r) => {
            Formula::implies(miniscope(*l, nonempty), miniscope(*r, nonempty))
        }
        Formula::Iff(l, r) => Formula::iff(miniscope(*l, nonempty), miniscope(*r, nonempty)),
        Formula::Not(b) => Formula::not(miniscope(*b, nonempty)),
        Formula::Tagged(name, b) => Formula::Tagged(name, Box::new(miniscope(*b, nonempty))),
        atom => atom,
    }
}

fn scope_quantifier(
    body: Formula,
    mentions: &dyn Fn(&Formula) -> bool,
    quantify: &dyn Fn(Formula) -> Formula,
    existential: bool,
    nonempty: bool,
) -> Formula {
    // An existential distributes over disjunction and pulls conjuncts out
    // unconditionally only for conjunction; the universal is dual. The
    // other two pulls, and dropping a quantifier whose body ignores the
    // variable, assume at least one candidate value.
    let conjunctive = matches!(body, Formula::And(..));
    let disjunctive = matches!(body, Formula::Or(..));
    let unconditional = (existential && conjunctive) || (!existential && disjunctive);
    if !(conjunctive || disjunctive) || (!unconditional && !nonempty) {
        return quantify(body);
    }
    let mut parts = Vec::new();
    if conjunctive {
        flatten_and(body, &mut parts);
    } else {
        flatten_or(body, &mut parts);
    }
    let (dependent, free): (Vec<Formula>, Vec<Formula>) =
        parts.into_iter().partition(|p| mentions(p));
    let rebuild = if conjunctive {
        Formula::and_all
    } else {
        Formula::or_all
    };
    if free.is_empty() {
        return quantify(rebuild(dependent));
    }
    if dependent.is_empty() {
        // The body ignores the variable entirely; dropping the quantifier
        // needs a candidate value to exist.
        if nonempty {
            return rebuild(free);
        }
        return quantify(rebuild(free));
    }
    let mut out = free;
    out.push(quantify(rebuild(dependent)));
    rebuild(out)
}

fn flatten_and(f: Formula, out: &mut Vec<Formula>) {
    if let Formula::And(l, r) = f {
        flatten_and(*l, out);
        flatten_and(*r, out);
    } else {
        out.push(f);
    }
}

fn flatten_or(f: Formula, out: &mut Vec<Formula>) {
    if let Formula::Or(l, r) = f {
        flatten_or(*l, out);
        flatten_or(*r, out);
    } else {
        out.push(f);
    }
}

fn mentions_vertex_var(f: &Formula, target: u32) -> bool {
    match f {
        Formula::ExistsVertex(v, b) | Formula::ForallVertex(v, b) => {
            v.0 != target && mentions_vertex_var(b, target)
        }
        Formula::ExistsSet(_, b) | Formula::ForallSet(_, b) => mentions_vertex_var(b, target),
        Formula::Or(l, r)
        | Formula::And(l, r)
        | Formula::Implies(l, r)
        | Formula::Iff(l, r) => mentions_vertex_var(l, target) || mentions_vertex_var(r, target),
        Formula::Not(b) | Formula::Tagged(_, b) => mentions_vertex_var(b, target),
        Formula::Adjacent(a, b) | Formula::Equal(a, b) | Formula::NotEqual(a, b) => {
            a.0 == target || b.0 == target
        }
        Formula::Member(v, _) => v.0 == target,
    }
}

fn mentions_set_var(f: &Formula, target: u32) -> bool {
    match f {
        Formula::ExistsSet(v, b) | Formula::ForallSet(v, b) => {
            v.0 != target && mentions_set_var(b, target)
        }
        Formula::ExistsVertex(_, b) | Formula::ForallVertex(_, b) => mentions_set_var(b, target),
        Formula::Or(l, r)
        | Formula::And(l, r)
        | Formula::Implies(l, r)
        | Formula::Iff(l, r) => mentions_set_var(l, target) || mentions_set_var(r, target),
        Formula::Not(b) | Formula::Tagged(_, b) => mentions_set_var(b, target),
        Formula::Member(_, s) => s.0 == target,
        _ => false,
    }
}

// Compiled form of a desugared formula: only the core connectives, with
// tag nodes annotated by their cache key shape.
enum Node {
    ExistsVertex(u32, Box<Node>),
    ExistsSet(u32, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Not(Box<Node>),
    Adjacent(u32, u32),
    Equal(u32, u32),
    Member(u32, u32),
    Tagged {
        name: u32,
        args: Box<[u32]>,
        cacheable: bool,
        body: Box<Node>,
    },
}

struct Interner<'a> {
    cache: Option<&'a mut PredicateCache>,
    scratch: HashMap<String, u32>,
}

impl Interner<'_> {
    fn intern(&mut self, name: &str) -> u32 {
        match &mut self.cache {
            Some(c) => c.intern(name),
            None => {
                if let Some(&id) = self.scratch.get(name) {
                    return id;
                }
                let id = self.scratch.len() as u32;
                self.scratch.insert(name.to_string(), id);
                id
            }
        }
    }
}

// Returns the compiled node plus its free vertex and set variables.
fn compile(f: &Formula, names: &mut Interner) -> (Node, BTreeSet<u32>, BTreeSet<u32>) {
    match f {
        Formula::ExistsVertex(v, b) => {
            let (body, mut fv, fs) = compile(b, names);
            fv.remove(&v.0);
            (Node::ExistsVertex(v.0, Box::new(body)), fv, fs)
        }
        Formula::ExistsSet(v, b) => {
            let (body, fv, mut fs) = compile(b, names);
            fs.remove(&v.0);
            (Node::ExistsSet(v.0, Box::new(body)), fv, fs)
        }
        Formula::Or(l, r) => {
            let (nl, mut fvl, mut fsl) = compile(l, names);
            let (nr, fvr, fsr) = compile(r, names);
            fvl.extend(fvr);
            fsl.extend(fsr);
            (Node::Or(Box::new(nl), Box::new(nr)), fvl, fsl)
        }
        Formula::Not(b) => {
            let (body, fv, fs) = compile(b, names);
            (Node::Not(Box::new(body)), fv, fs)
        }
        Formula::Adjacent(a, b) => (
            Node::Adjacent(a.0, b.0),
            [a.0, b.0].into_iter().collect(),
            BTreeSet::new(),
        ),
        Formula::Equal(a, b) => (
            Node::Equal(a.0, b.0),
            [a.0, b.0].into_iter().collect(),
            BTreeSet::new(),
        ),
        Formula::Member(v, s) => (
            Node::Member(v.0, s.0),
            [v.0].into_iter().collect(),
            [s.0].into_iter().collect(),
        ),
        Formula::Tagged(name, b) => {
            let (body, fv, fs) = compile(b, names);
            let args: Box<[u32]> = fv.iter().copied().collect();
            let node = Node::Tagged {
                name: names.intern(name),
                args,
                cacheable: fs.is_empty(),
                body: Box::new(body),
            };
            (node, fv, fs)
        }
        sugar => unreachable!("formula must be desugared before compilation: {sugar:?}"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn new(n: usize) -> Self {
        BitSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    fn from_set(n: usize, set: &BTreeSet<usize>) -> Self {
        let mut b = BitSet::new(n);
        for &v in set {
            b.insert(v);
        }
        b
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn clear(&mut self) {
        self.words.fill(0);
    }
}

struct Evaluator<'a> {
    n: usize,
    row_words: usize,
    adj: Vec<u64>,
    neighbors: Vec<Vec<usize>>,
    vstack: Vec<(u32, usize)>,
    sstack: Vec<(u32, BitSet)>,
    cache: Option<&'a mut PredicateCache>,
    cap: usize,
    // Reusable candidate buffers, one per vertex-quantifier nesting level.
    // Candidates come in three phases that are only materialized when the
    // previous phase is exhausted; most quantifier entries stop within the
    // first few probes, so eager O(n) setup per entry would dominate.
    scratch: Vec<CandidateBuf>,
    depth: usize,
}

#[derive(Default)]
struct CandidateBuf {
    seen: Vec<u8>,
    order: Vec<usize>,
    extra: Vec<usize>,
}

impl Evaluator<'_> {
    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.row_words + v / 64] >> (v % 64) & 1 == 1
    }

    fn vertex_value(&self, var: u32) -> Result<usize, Error> {
        self.vstack
            .iter()
            .rev()
            .find(|(v, _)| *v == var)
            .map(|(_, val)| *val)
            .ok_or(Error::UnboundVertexVar(var))
    }

    fn set_value(&self, var: u32) -> Result<&BitSet, Error> {
        self.sstack
            .iter()
            .rev()
            .find(|(v, _)| *v == var)
            .map(|(_, bits)| bits)
            .ok_or(Error::UnboundSetVar(var))
    }

    /// Candidate order for a vertex quantifier: values already bound
    /// first, then neighbors of bound values, then the rest, each group
    /// ascending. Witnesses and counterexamples in layered formulas are
    /// overwhelmingly among the bound vertices and their neighborhoods.
    ///
    /// Phase 0 fills only the bound values; later phases extend the same
    /// buffer on demand.
    fn begin_candidates(&mut self) -> usize {
        let level = self.depth;
        if self.scratch.len() == level {
            self.scratch.push(CandidateBuf::default());
        }
        let mut extra = std::mem::take(&mut self.scratch[level].extra);
        extra.clear();
        extra.extend(self.vstack.iter().map(|&(_, v)| v));
        extra.sort_unstable();
        extra.dedup();
        let buf = &mut self.scratch[level];
        buf.order.clear();
        buf.order.extend_from_slice(&extra);
        buf.extra = extra;
        level
    }

    fn extend_neighbor_candidates(&mut self, level: usize) {
        let bound_len = self.scratch[level].order.len();
        let mut extra = std::mem::take(&mut self.scratch[level].extra);
        extra.clear();
        for &(_, v) in &self.vstack {
            extra.extend(self.neighbors[v].iter().copied());
        }
        extra.sort_unstable();
        extra.dedup();
        let buf = &mut self.scratch[level];
        for &w in &extra {
            if buf.order[..bound_len].binary_search(&w).is_err() {
                buf.order.push(w);
            }
        }
        buf.extra = extra;
    }

    fn extend_remaining_candidates(&mut self, level: usize) {
        let n = self.n;
        let buf = &mut self.scratch[level];
        buf.seen.clear();
        buf.seen.resize(n, 0);
        for &v in &buf.order {
            buf.seen[v] = 1;
        }
        for v in 0..n {
            if buf.seen[v] == 0 {
                buf.order.push(v);
            }
        }
    }

    fn exists_vertex(&mut self, var: u32, body: &Node) -> Result<bool, Error> {
        let level = self.begin_candidates();
        self.depth += 1;
        let result = self.exists_vertex_scan(level, var, body);
        self.depth -= 1;
        result
    }

    fn exists_vertex_scan(&mut self, level: usize, var: u32, body: &Node) -> Result<bool, Error> {
        let mut idx = 0;
        let mut phase = 0;
        loop {
            if idx == self.scratch[level].order.len() {
                match phase {
                    0 => self.extend_neighbor_candidates(level),
                    1 => self.extend_remaining_candidates(level),
                    _ => return Ok(false),
                }
                phase += 1;
                continue;
            }
            let v = self.scratch[level].order[idx];
            idx += 1;
            self.vstack.push((var, v));
            let hit = self.eval(body);
            self.vstack.pop();
            if hit? {
                return Ok(true);
            }
        }
    }

    fn clear_cache(&mut self) {
        if let Some(c) = &mut self.cache {
            c.entries.clear();
        }
    }

    fn eval(&mut self, node: &Node) -> Result<bool, Error> {
        match node {
            Node::ExistsVertex(var, body) => self.exists_vertex(*var, body),
            Node::ExistsSet(var, body) => {
                if self.n > self.cap {
                    return Err(Error::SetQuantifierCapacity {
                        n: self.n,
                        cap: self.cap,
                    });
                }
                self.sstack.push((*var, BitSet::new(self.n)));
                let mut found = false;
                // Subsets by increasing size, lexicographic within a size.
                'sizes: for size in 0..=self.n {
                    let mut picks: Vec<usize> = (0..size).collect();
                    loop {
                        {
                            let top = &mut self.sstack.last_mut().unwrap().1;
                            top.clear();
                            for &i in &picks {
                                top.insert(i);
                            }
                        }
                        self.clear_cache();
                        if self.eval(body)? {
                            found = true;
                            break 'sizes;
                        }
                        if !next_combination(&mut picks, self.n) {
                            break;
                        }
                    }
                }
                self.sstack.pop();
                self.clear_cache();
                Ok(found)
            }
            Node::Or(l, r) => {
                if self.eval(l)? {
                    Ok(true)
                } else {
                    self.eval(r)
                }
            }
            Node::Not(b) => Ok(!self.eval(b)?),
            Node::Adjacent(a, b) => {
                let (va, vb) = (self.vertex_value(*a)?, self.vertex_value(*b)?);
                Ok(self.adjacent(va, vb))
            }
            Node::Equal(a, b) => Ok(self.vertex_value(*a)? == self.vertex_value(*b)?),
            Node::Member(v, s) => {
                let val = self.vertex_value(*v)?;
                Ok(self.set_value(*s)?.contains(val))
            }
            Node::Tagged {
                name,
                args,
                cacheable,
                body,
            } => {
                if !*cacheable || self.cache.is_none() {
                    return self.eval(body);
                }
                let key = (*name, self.args_key(args)?);
                if let Some(&hit) = self.cache.as_ref().unwrap().entries.get(&key) {
                    return Ok(hit);
                }
                let value = self.eval(body)?;
                self.cache.as_mut().unwrap().entries.insert(key, value);
                Ok(value)
            }
        }
    }

    fn args_key(&self, args: &[u32]) -> Result<ArgsKey, Error> {
        Ok(match args {
            [] => ArgsKey::Zero,
            [a] => ArgsKey::One(self.vertex_value(*a)? as u32),
            [a, b] => ArgsKey::Two(
                self.vertex_value(*a)? as u32,
                self.vertex_value(*b)? as u32,
            ),
            many => {
                let vals: Result<Vec<u32>, Error> = many
                    .iter()
                    .map(|v| self.vertex_value(*v).map(|x| x as u32))
                    .collect();
                ArgsKey::Many(vals?.into_boxed_slice())
            }
        })
    }
}

// Advances `picks` to the next k-combination of `0..n` in lexicographic
// order; false once exhausted.
fn next_combination(picks: &mut [usize], n: usize) -> bool {
    let k = picks.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if picks[i] < n - k + i {
            picks[i] += 1;
            for j in i + 1..k {
                picks[j] = picks[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn evaluate(
    s: &Structure,
    f: &Formula,
    env: &Environment,
    cache: Option<&mut PredicateCache>,
    opts: EvalOptions,
) -> Result<bool, Error> {
    let g = s.graph();
    let n = g.n();

    // Every free variable must be resolvable before we start.
    let fv = free_vars(f);
    for &var in &fv.vertex {
        if env.vertex(var).or_else(|| s.label(var)).is_none() {
            return Err(Error::UnboundVertexVar(var));
        }
    }
    for &var in &fv.set {
        if env.set(var).is_none() && s.color(var).is_none() {
            return Err(Error::UnboundSetVar(var));
        }
    }
    for (&_, &v) in env.vertex.iter() {
        if v >= n {
            return Err(Error::InvalidVertex { vertex: v, n });
        }
    }
    for set in env.set.values() {
        for &v in set {
            if v >= n {
                return Err(Error::InvalidVertex { vertex: v, n });
            }
        }
    }

    let mut cache = cache;
    if let Some(c) = cache.as_deref_mut() {
        c.bind_structure(s);
    }

    let desugared = desugar(&miniscope(f.clone(), n > 0));
    let mut interner = Interner {
        cache: cache.as_deref_mut(),
        scratch: HashMap::new(),
    };
    let (node, _, _) = compile(&desugared, &mut interner);
    drop(interner);

    let row_words = n.div_ceil(64).max(1);
    let mut adj = vec![0u64; n * row_words];
    for (u, v) in g.edges() {
        adj[u * row_words + v / 64] |= 1 << (v % 64);
        adj[v * row_words + u / 64] |= 1 << (u % 64);
    }
    let neighbors: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();

    // Structure bindings first, environment bindings shadow them.
    let mut vstack: Vec<(u32, usize)> = s.labeling().iter().map(|(&c, &v)| (c, v)).collect();
    vstack.extend(env.vertex.iter().map(|(&c, &v)| (c, v)));
    let mut sstack: Vec<(u32, BitSet)> = s
        .coloring()
        .iter()
        .map(|(&c, set)| (c, BitSet::from_set(n, set)))
        .collect();
    sstack.extend(env.set.iter().map(|(&c, set)| (c, BitSet::from_set(n, set))));

    let mut ev = Evaluator {
        n,
        row_words,
        adj,
        neighbors,
        vstack,
        sstack,
        cache,
        cap: opts.set_quantifier_cap,
        scratch: Vec::new(),
        depth: 0,
    };
    ev.eval(&node)
}
