//! Property tests over randomly generated gems: serialization round trips,
//! isomorphism invariance of every invariant, and move-calculus identities.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gemkit::graph::{parse_gem, serialize_gem, ColoredGraph};
use gemkit::invariants::{
    cyclic_permutations, euler_characteristic, genus_wrt, gurau_degree, gurau_degree_closed,
    regular_genus, CyclicPerm,
};
use gemkit::moves::{add_dipole, eliminate_dipole};

/// A uniformly random fixed-point-free involution on `0..n` (n even).
fn matching(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle().prop_map(|perm| {
        let mut m = vec![0; perm.len()];
        for pair in perm.chunks(2) {
            m[pair[0]] = pair[1];
            m[pair[1]] = pair[0];
        }
        m
    })
}

/// Random gems of dimension 2..=4 and order 4..=8.
fn gem() -> impl Strategy<Value = ColoredGraph> {
    (2usize..=4, 2usize..=4).prop_flat_map(|(d, p)| {
        prop::collection::vec(matching(2 * p), d + 1)
            .prop_map(move |ms| ColoredGraph::new(d, ms).expect("matchings are involutions"))
    })
}

proptest! {
    #[test]
    fn text_format_round_trips(g in gem()) {
        let again = parse_gem(&serialize_gem(&g)).unwrap();
        prop_assert_eq!(again.matchings(), g.matchings());
    }

    #[test]
    fn invariants_ignore_vertex_labels(g in gem(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..g.order()).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let h = g.relabel_vertices(&perm);
        prop_assert_eq!(h.is_bipartite(), g.is_bipartite());
        prop_assert_eq!(euler_characteristic(&h), euler_characteristic(&g));
        prop_assert_eq!(regular_genus(&h), regular_genus(&g));
        prop_assert_eq!(gurau_degree(&h), gurau_degree(&g));
        prop_assert_eq!(
            h.canonical_form(false).digest(),
            g.canonical_form(false).digest()
        );
    }

    #[test]
    fn genus_is_equivariant_under_color_permutations(g in gem(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = g.dimension();
        let mut sigma: Vec<usize> = (0..=d).collect();
        for i in (1..sigma.len()).rev() {
            sigma.swap(i, rng.gen_range(0..=i));
        }
        let h = g.permute_colors(&sigma);
        for eps in cyclic_permutations(d).unwrap() {
            let image = CyclicPerm::new(eps.colors().iter().map(|&c| sigma[c]).collect());
            prop_assert_eq!(genus_wrt(&h, &image), genus_wrt(&g, &eps));
        }
        prop_assert_eq!(gurau_degree(&h), gurau_degree(&g));
        prop_assert_eq!(
            h.canonical_form(true).digest(),
            g.canonical_form(true).digest()
        );
    }

    #[test]
    fn degree_closed_form_matches_permutation_sum(g in gem()) {
        // gurau_degree sums the per-permutation genus; the closed formula
        // counts bicolored cycles only; they must agree on connected gems
        prop_assume!(g.is_connected());
        prop_assert_eq!(gurau_degree(&g), gurau_degree_closed(&g));
    }

    #[test]
    fn dipole_insertion_is_exactly_reversible(g in gem(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = g.dimension();
        let r = rng.gen_range(1..=d);
        let mut colors: Vec<usize> = (0..=d).collect();
        for i in (1..colors.len()).rev() {
            colors.swap(i, rng.gen_range(0..=i));
        }
        colors.truncate(r);
        colors.sort_unstable();
        let anchors: Vec<(usize, usize)> = (0..=d)
            .filter(|c| !colors.contains(c))
            .map(|c| {
                let a = rng.gen_range(0..g.order());
                (a, g.neighbor(c, a))
            })
            .collect();
        let (h, dip) = add_dipole(&g, &colors, &anchors).unwrap();
        prop_assert_eq!(h.order(), g.order() + 2);
        let back = eliminate_dipole(&h, &dip).unwrap();
        prop_assert_eq!(back.matchings(), g.matchings());
    }
}
