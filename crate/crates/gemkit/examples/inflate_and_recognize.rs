//! Obscures the order-2 4-sphere gem under a pile of random proper dipole
//! insertions, then asks the recognizer to see through the disguise.
//!
//! Usage: inflate_and_recognize [ROUNDS] [SEED]    (defaults 10 and 0)

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gemkit::constructions::sphere_gem;
use gemkit::graph::ColoredGraph;
use gemkit::invariants::regular_genus;
use gemkit::moves::{
    add_dipole, is_proper, recognize_sphere_seeded, reduce_to_crystallization, Properness,
    Verdict, DEFAULT_MOVE_BUDGET,
};

fn main() {
    let mut args = std::env::args().skip(1);
    let rounds: usize = args.next().map_or(10, |s| s.parse().expect("ROUNDS"));
    let seed: u64 = args.next().map_or(0, |s| s.parse().expect("SEED"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut g = sphere_gem(4);
    println!("start: order {} gem, regular genus {}", g.order(), regular_genus(&g));
    for round in 1..=rounds {
        let (next, dip) = random_proper_insertion(&g, &mut rng);
        println!(
            "round {round:>2}: inserted a proper {}-dipole, order now {}",
            dip.r(),
            next.order()
        );
        g = next;
    }
    println!("inflated gem: regular genus {}", regular_genus(&g));

    let reduction = reduce_to_crystallization(&g);
    println!(
        "reduction eliminated {} dipoles down to order {} (complete: {})",
        reduction.moves.len(),
        reduction.graph.order(),
        reduction.complete
    );

    let res = recognize_sphere_seeded(&g, DEFAULT_MOVE_BUDGET, seed);
    match res.verdict {
        Verdict::Sphere => println!("recognizer verdict: sphere"),
        Verdict::NotSphere(reason) => println!("recognizer verdict: not a sphere ({reason})"),
        Verdict::Unknown => println!("recognizer verdict: unknown (budget exhausted)"),
    }
}

/// Draws random dipole insertions until one is both a genuine dipole (its
/// poles lie in different complementary residues) and proper, so the move
/// preserves the represented manifold.
fn random_proper_insertion(
    g: &ColoredGraph,
    rng: &mut ChaCha8Rng,
) -> (ColoredGraph, gemkit::moves::Dipole) {
    let d = g.dimension();
    loop {
        let r = rng.gen_range(1..=d.max(2) - 1);
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
        let (h, dip) = add_dipole(g, &colors, &anchors).expect("anchors are edges");
        if dip.is_dipole(&h) && is_proper(&h, &dip) == Properness::Proper {
            return (h, dip);
        }
    }
}
