//! Regenerates the frozen catalog under `data/catalog/`.
//!
//! Every entry is built from the library constructors (or pulled out of the
//! dimension-4 census), hard-checked against its expected invariants, and
//! written as a gem file plus a manifest block.  Run in release mode; the
//! bounded searches behind the bundle and handlebody gems are slow in debug.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use gemkit::algebra::{first_homology, AbelianInvariants};
use gemkit::census::{enumerate, CensusQuery};
use gemkit::constructions::{
    disk_bundle_gem, handlebody_gem, interior_sum, interval_product, lens_space_gem,
    sphere_bundle_gem_3, sphere_bundle_gem_4, sphere_gem,
};
use gemkit::graph::{parse_gem, serialize_gem, ColoredGraph};
use gemkit::invariants::{gurau_degree, regular_genus, HalfInt, InvariantReport};
use gemkit::moves::{manifold_check, ManifoldCheck};

struct Entry {
    name: &'static str,
    file: &'static str,
    provenance: &'static str,
    notes: &'static str,
    graph: ColoredGraph,
}

/// Shorthand for the free abelian group of the given rank.
fn free(rank: usize) -> AbelianInvariants {
    AbelianInvariants { free_rank: rank, torsion: Vec::new() }
}

fn singular_colors(g: &ColoredGraph) -> Vec<usize> {
    // the recursive check stops at dimension 4, but the order-two gem is the
    // closed d-sphere in any dimension
    if g.order() == 2 {
        return Vec::new();
    }
    match manifold_check(g) {
        ManifoldCheck::SingularManifold { singular_colors, .. } => singular_colors,
        other => panic!("catalog graphs must be singular manifolds, got {other:?}"),
    }
}

/// Expectations shared by most entries: order, regular genus, degree and
/// first homology, all integers (every catalog gem is of integer genus).
fn expect(g: &ColoredGraph, order: usize, genus: i64, degree: i64, h1: &AbelianInvariants) {
    assert_eq!(g.order(), order);
    assert_eq!(regular_genus(g), HalfInt::from_int(genus));
    assert_eq!(gurau_degree(g), HalfInt::from_int(degree));
    assert_eq!(&first_homology(g).expect("catalog gems have nonsingular color pairs"), h1);
}

/// The unique closed order-8 class of the 4-dimensional census with trivial
/// homology and Euler characteristic 3: the complex projective plane.
fn projective_plane_from_census() -> ColoredGraph {
    let mut query = CensusQuery::new(4, 8);
    query.manifold_filter = true;
    query.closed_only = true;
    let census = enumerate(&query).expect("default dimension-4 bound");
    assert!(census.quarantine.is_empty(), "census left unknown classes");
    let mut hits: Vec<ColoredGraph> = census
        .classes
        .iter()
        .filter(|class| {
            class.report.euler_characteristic == 3
                && class.h1.as_ref().is_some_and(AbelianInvariants::is_trivial)
        })
        .map(|class| class.graph.clone())
        .collect();
    assert_eq!(hits.len(), 1, "expected a unique chi = 3 simply connected class");
    hits.remove(0)
}

fn main() {
    let mut entries: Vec<Entry> = Vec::new();

    // spheres: the order-two gem in each dimension
    for (d, name, file) in
        [(2, "S2", "s2.gem"), (3, "S3", "s3.gem"), (4, "S4", "s4.gem"), (5, "S5", "s5.gem")]
    {
        let g = sphere_gem(d);
        assert_eq!(regular_genus(&g), HalfInt::ZERO);
        assert_eq!(gurau_degree(&g), HalfInt::ZERO);
        entries.push(Entry {
            name,
            file,
            provenance: "transcribed",
            notes: "order-two sphere gem",
            graph: g,
        });
    }

    // lens spaces: the standard order-4p crystallizations; their degree is
    // the gem complexity p - 1 (half-order minus one)
    for (p, name, file) in [
        (2usize, "L(2,1)", "l21.gem"),
        (3, "L(3,1)", "l31.gem"),
        (4, "L(4,1)", "l41.gem"),
        (5, "L(5,1)", "l51.gem"),
    ] {
        let g = lens_space_gem(p);
        expect(&g, 4 * p, 1, 2 * p as i64 - 1, &AbelianInvariants::cyclic(p as u64));
        entries.push(Entry {
            name,
            file,
            provenance: "transcribed",
            notes: "two-row circular grid with column shift two",
            graph: g,
        });
    }

    // sphere bundles over the circle, dimensions 3 and 4
    let s1xs2 = sphere_bundle_gem_3(true);
    expect(&s1xs2, 8, 1, 3, &AbelianInvariants::cyclic(0));
    let s1ts2 = sphere_bundle_gem_3(false);
    expect(&s1ts2, 8, 1, 3, &AbelianInvariants::cyclic(0));
    let s1xs3 = sphere_bundle_gem_4(true).expect("frozen orientable tables");
    expect(&s1xs3, 10, 1, 12, &AbelianInvariants::cyclic(0));
    let s1ts3 = sphere_bundle_gem_4(false).expect("frozen non-orientable tables");
    expect(&s1ts3, 10, 1, 12, &AbelianInvariants::cyclic(0));
    for (g, orientable, name, file) in [
        (&s1xs2, true, "S1xS2", "s1xs2.gem"),
        (&s1ts2, false, "S1~S2", "s1ts2.gem"),
        (&s1xs3, true, "S1xS3", "s1xs3.gem"),
        (&s1ts3, false, "S1~S3", "s1ts3.gem"),
    ] {
        assert_eq!(g.is_bipartite(), orientable);
        assert!(manifold_check(g).is_closed_manifold());
        entries.push(Entry {
            name,
            file,
            provenance: "derived-by-construction",
            notes: "bounded search certified by genus one, infinite cyclic homology and parity",
            graph: g.clone(),
        });
    }

    // twofold self-sums of the 4-dimensional bundles
    for (base, name, file) in [
        (&s1xs3, "#2(S1xS3)", "sum2s1xs3.gem"),
        (&s1ts3, "#2(S1~S3)", "sum2s1ts3.gem"),
    ] {
        let g = interior_sum(base, base).expect("closed summands have interior sites");
        expect(&g, 18, 2, 24, &free(2));
        assert!(manifold_check(&g).is_closed_manifold());
        entries.push(Entry {
            name,
            file,
            provenance: "derived-by-construction",
            notes: "interior connected sum of two circle-bundle gems",
            graph: g,
        });
    }

    // the complex projective plane, pulled out of the order-8 census
    let cp2 = projective_plane_from_census();
    expect(&cp2, 8, 2, 24, &AbelianInvariants::trivial());
    assert!(cp2.is_bipartite());
    entries.push(Entry {
        name: "CP2",
        file: "cp2.gem",
        provenance: "derived-by-census",
        notes: "unique closed order-8 class with trivial homology and Euler characteristic 3",
        graph: cp2,
    });

    // handlebodies of rank one and two, both parities
    let y41 = handlebody_gem(4, 1, true).expect("rank-one base");
    let ty41 = handlebody_gem(4, 1, false).expect("twisted rank-one base");
    let y42 = handlebody_gem(4, 2, true).expect("rank-two sum");
    let ty42 = handlebody_gem(4, 2, false).expect("twisted rank-two sum");
    expect(&y41, 8, 1, 12, &AbelianInvariants::cyclic(0));
    expect(&ty41, 8, 1, 12, &AbelianInvariants::cyclic(0));
    expect(&y42, 14, 2, 24, &free(2));
    expect(&ty42, 14, 2, 24, &free(2));
    for (g, orientable, name, file) in [
        (&y41, true, "Y4_1", "y41.gem"),
        (&ty41, false, "~Y4_1", "ty41.gem"),
        (&y42, true, "Y4_2", "y42.gem"),
        (&ty42, false, "~Y4_2", "ty42.gem"),
    ] {
        assert_eq!(g.is_bipartite(), orientable);
        assert_eq!(singular_colors(g), vec![4]);
        entries.push(Entry {
            name,
            file,
            provenance: "derived-by-construction",
            notes: "rank-one search base, boundary sums for rank two",
            graph: g.clone(),
        });
    }

    // sums in the rank-one handlebody family
    for (a, b, name, file) in [
        (&y41, &y41, "Y4_1#Y4_1", "y41y41.gem"),
        (&y41, &ty41, "Y4_1#~Y4_1", "y41ty41.gem"),
        (&ty41, &ty41, "~Y4_1#~Y4_1", "ty41ty41.gem"),
    ] {
        let g = interior_sum(a, b).expect("rank-one handlebodies fuse along color 4");
        expect(&g, 16, 2, 24, &free(2));
        assert_eq!(singular_colors(&g), vec![4]);
        entries.push(Entry {
            name,
            file,
            provenance: "derived-by-construction",
            notes: "interior sum fusing one edge of the singular color in each operand",
            graph: g,
        });
    }
    for (a, b, name, file) in [
        (&y41, &s1xs3, "Y4_1#S1xS3", "y41s1xs3.gem"),
        (&ty41, &s1xs3, "~Y4_1#S1xS3", "ty41s1xs3.gem"),
    ] {
        let g = interior_sum(a, b).expect("a top dipole frees an interior site");
        expect(&g, 18, 2, 24, &free(2));
        assert_eq!(singular_colors(&g), vec![4]);
        entries.push(Entry {
            name,
            file,
            provenance: "derived-by-construction",
            notes: "handlebody summed with a closed bundle after a top-dipole insertion",
            graph: g,
        });
    }

    // disk bundles over the 2-sphere
    for (c, order, degree, name, file) in [
        (0usize, 8, 24, "Lambda_0", "lambda0.gem"),
        (2, 8, 24, "Lambda_2", "lambda2.gem"),
        (3, 12, 36, "Lambda_3", "lambda3.gem"),
        (4, 16, 48, "Lambda_4", "lambda4.gem"),
    ] {
        let g = disk_bundle_gem(c).expect("fifth-matching search over the boundary gem");
        expect(&g, order, 2, degree, &AbelianInvariants::trivial());
        assert_eq!(singular_colors(&g), vec![4]);
        entries.push(Entry {
            name,
            file,
            provenance: "derived-by-construction",
            notes: "boundary gem extended by a fifth matching with the witness genus pair",
            graph: g,
        });
    }

    // interval products of closed 3-manifolds
    for (base, order, degree, h1, name, file) in [
        (&lens_space_gem(2), 8, 18, AbelianInvariants::cyclic(2), "L(2,1)xI", "l21xi.gem"),
        (&s1xs2, 8, 18, AbelianInvariants::cyclic(0), "S1xS2xI", "s1xs2xi.gem"),
        (&s1ts2, 8, 18, AbelianInvariants::cyclic(0), "S1~S2xI", "s1ts2xi.gem"),
        (&lens_space_gem(3), 12, 30, AbelianInvariants::cyclic(3), "L(3,1)xI", "l31xi.gem"),
    ] {
        let g = interval_product(base).expect("catalog products take closed gems");
        expect(&g, order, 1, degree, &h1);
        assert_eq!(singular_colors(&g).len(), 2, "a product carries two boundary copies");
        entries.push(Entry {
            name,
            file,
            provenance: "derived-by-construction",
            notes: "base matching duplicated as a sixth color; degree and genus re-derived",
            graph: g,
        });
    }

    // write everything out
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/catalog");
    fs::create_dir_all(&dir).expect("create catalog directory");
    let mut manifest = String::new();
    for entry in &entries {
        let text = serialize_gem(&entry.graph);
        assert_eq!(
            parse_gem(&text).expect("serialized gems parse").matchings(),
            entry.graph.matchings(),
            "round trip must be exact"
        );
        fs::write(dir.join(entry.file), &text).expect("write gem file");

        let rep = InvariantReport::compute(&entry.graph);
        let sing = singular_colors(&entry.graph);
        let h1 = first_homology(&entry.graph).expect("validated above").render();
        let block = &mut manifest;
        writeln!(block, "name: {}", entry.name).unwrap();
        writeln!(block, "file: {}", entry.file).unwrap();
        writeln!(block, "provenance: {}", entry.provenance).unwrap();
        writeln!(block, "dimension: {}", rep.dimension).unwrap();
        writeln!(block, "order: {}", rep.order).unwrap();
        writeln!(block, "bipartite: {}", rep.bipartite).unwrap();
        writeln!(block, "genus: {}", rep.regular_genus).unwrap();
        writeln!(block, "degree: {}", rep.gurau_degree).unwrap();
        writeln!(block, "euler: {}", rep.euler_characteristic).unwrap();
        writeln!(block, "h1: {h1}").unwrap();
        if sing.is_empty() {
            writeln!(block, "singular: none").unwrap();
        } else {
            let list: Vec<String> = sing.iter().map(|c| c.to_string()).collect();
            writeln!(block, "singular: {}", list.join(",")).unwrap();
        }
        writeln!(block, "notes: {}", entry.notes).unwrap();
        writeln!(block).unwrap();
    }
    fs::write(dir.join("manifest.txt"), manifest).expect("write manifest");
    println!("wrote {} entries to {}", entries.len(), dir.display());
}
