//! The separator-kernel-evaluate pipeline on generated instances, cross
//! checked module against module.

use std::collections::BTreeSet;

use vimc::eval::check_sentence;
use vimc::graph::type_isomorphic;
use vimc::integrity::{verify_separator, vertex_integrity_exact};
use vimc::kernel::{component_signature, kernelize};
use vimc::logic::quantifier_profile;
use vimc::testkit::{
    brute_vertex_cover, random_formula, random_graph, random_graph_with_separator,
    FormulaProfile, GeneratorParams, Rng,
};

fn instance_params(seed: u64, mso: bool) -> GeneratorParams {
    let mut rng = Rng::from_seed(seed ^ 0x5eed);
    GeneratorParams {
        seed,
        n: 10 + rng.below(7),
        separator_size: rng.below(4),
        max_component_size: 1 + rng.below(3),
        component_type_pool: 1 + rng.below(3),
        formula_profile: FormulaProfile {
            q1_max: 1 + rng.below(3),
            q2_max: if mso { 1 } else { 0 },
            depth: 4,
        },
    }
}

#[test]
fn fo_kernel_preserves_verdicts() {
    for seed in 0..80 {
        let p = instance_params(seed, false);
        let (g, sep) = random_graph_with_separator(&p).unwrap();
        let f = random_formula(&p);
        let profile = quantifier_profile(&f);
        let kernel = kernelize(&g, &sep.vertices, profile).unwrap();
        assert_eq!(
            check_sentence(&g, &f).unwrap(),
            check_sentence(&kernel.graph, &f).unwrap(),
            "seed {seed}"
        );
    }
}

#[test]
fn mso_kernel_preserves_verdicts() {
    for seed in 0..40 {
        let p = instance_params(seed, true);
        let (g, sep) = random_graph_with_separator(&p).unwrap();
        let f = random_formula(&p);
        let profile = quantifier_profile(&f);
        let kernel = kernelize(&g, &sep.vertices, profile).unwrap();
        assert_eq!(
            check_sentence(&g, &f).unwrap(),
            check_sentence(&kernel.graph, &f).unwrap(),
            "seed {seed}"
        );
    }
}

#[test]
fn kernelization_is_idempotent_on_generated_instances() {
    for seed in 0..30 {
        let p = instance_params(seed, false);
        let (g, sep) = random_graph_with_separator(&p).unwrap();
        let profile = quantifier_profile(&random_formula(&p));
        let once = kernelize(&g, &sep.vertices, profile).unwrap();
        let twice = kernelize(&once.graph, &once.separator, profile).unwrap();
        assert_eq!(once.graph, twice.graph, "seed {seed}");
        assert_eq!(twice.report.removed_vertices, 0, "seed {seed}");
    }
}

#[test]
fn signatures_agree_with_type_isomorphism_on_generated_instances() {
    for seed in 0..25 {
        let p = instance_params(seed, false);
        let (g, sep) = random_graph_with_separator(&p).unwrap();
        let comps = g.components_after_removal(&sep.vertices).unwrap();
        for i in 0..comps.len() {
            for j in i + 1..comps.len() {
                let same_sig = component_signature(&g, &sep.vertices, &comps[i]).unwrap()
                    == component_signature(&g, &sep.vertices, &comps[j]).unwrap();
                let iso = type_isomorphic(&g, &sep.vertices, &comps[i], &comps[j])
                    .unwrap()
                    .is_some();
                assert_eq!(same_sig, iso, "seed {seed}, components {i} and {j}");
            }
        }
    }
}

#[test]
fn integrity_is_at_most_vertex_cover_plus_one() {
    let mut rng = Rng::from_seed(4242);
    for round in 0..30 {
        let n = 2 + rng.below(11);
        let g = random_graph(n, 0.4, &mut rng);
        let iota = vertex_integrity_exact(&g).unwrap().k;
        let vc = brute_vertex_cover(&g).unwrap();
        assert!(iota <= vc + 1, "round {round}: iota {iota} vc {vc}");
    }
}

#[test]
fn integrity_is_monotone_under_vertex_deletion() {
    let mut rng = Rng::from_seed(777);
    for round in 0..20 {
        let n = 2 + rng.below(9);
        let g = random_graph(n, 0.4, &mut rng);
        let iota = vertex_integrity_exact(&g).unwrap().k;
        for v in 0..n {
            let single: BTreeSet<usize> = [v].into_iter().collect();
            let (smaller, _) = g.delete_vertices(&single).unwrap();
            let smaller_iota = vertex_integrity_exact(&smaller).unwrap().k;
            assert!(
                smaller_iota <= iota,
                "round {round}: deleting {v} raised integrity {iota} -> {smaller_iota}"
            );
        }
    }
}

#[test]
fn all_distinct_types_make_the_kernel_an_identity() {
    // A wide template pool tends to give every component its own type;
    // whenever it does, nothing may be removed regardless of the profile.
    let mut confirmed = 0;
    for seed in 0..20 {
        let p = GeneratorParams {
            seed,
            n: 14,
            separator_size: 2,
            max_component_size: 3,
            component_type_pool: 50,
            formula_profile: FormulaProfile {
                q1_max: 1,
                q2_max: 0,
                depth: 3,
            },
        };
        let (g, sep) = random_graph_with_separator(&p).unwrap();
        let comps = g.components_after_removal(&sep.vertices).unwrap();
        let signatures: BTreeSet<_> = comps
            .iter()
            .map(|c| component_signature(&g, &sep.vertices, c).unwrap())
            .collect();
        if signatures.len() != comps.len() {
            continue;
        }
        let kernel = kernelize(
            &g,
            &sep.vertices,
            quantifier_profile(&random_formula(&p)),
        )
        .unwrap();
        assert_eq!(kernel.graph, g, "seed {seed}");
        assert_eq!(kernel.report.removed_vertices, 0, "seed {seed}");
        confirmed += 1;
    }
    assert!(confirmed >= 5, "only {confirmed} all-distinct draws");
}

#[test]
fn planted_separators_verify_and_bound_components() {
    for seed in 200..230 {
        let p = instance_params(seed, false);
        let (g, sep) = random_graph_with_separator(&p).unwrap();
        assert!(verify_separator(&g, &sep.vertices, sep.k).unwrap());
        assert!(sep.max_component_size <= p.max_component_size);
    }
}
