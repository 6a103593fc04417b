//! Builders for standard gem families: spheres, lens-type grid gems, sphere
//! bundles over the circle, 4-dimensional handlebodies, connected sums,
//! products with an interval, and capping-off of boundary graphs.

use std::sync::OnceLock;

use thiserror::Error;

use crate::algebra::{first_homology, AbelianInvariants};
use crate::census::{surface_is_spherical, union_type_representatives};
use crate::graph::{
    matching_components, perfect_matchings, permutations, ColoredGraph, GemError, ResidueTable,
};
use crate::invariants::{
    associated_permutation, cyclic_permutations, genus_of_subgraph, genus_wrt, gurau_degree,
    regular_genus, CyclicPerm, HalfInt,
};
use crate::moves::{add_dipole, manifold_check, residue_sphere_status, ManifoldCheck, SphereStatus};

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("dimension {0} is not supported by this constructor")]
    UnsupportedDimension(usize),
    #[error("operands have different dimensions")]
    DimensionMismatch,
    #[error("vertex {0} out of range")]
    BadVertex(usize),
    #[error("summing vertices lie in the same bipartition class; pick opposite classes")]
    ParityViolation,
    #[error("graph is not a closed manifold: {0}")]
    NotClosed(String),
    #[error("construction hypotheses could not be verified: {0}")]
    Unverifiable(String),
    #[error("bounded search found no graph with the required invariants")]
    SearchExhausted,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("invalid boundary graph: {0}")]
    BadBoundary(String),
    #[error(transparent)]
    Gem(#[from] GemError),
}

/// The order-two gem of the d-sphere: two vertices joined by d+1 parallel
/// edges (d >= 2).
pub fn sphere_gem(d: usize) -> ColoredGraph {
    ColoredGraph::new(d, vec![vec![1, 0]; d + 1]).expect("order-two gem is valid")
}

/// Two-row circular grid gem of dimension 3 and order 4p.  Colors 0 and 2 are
/// vertical matchings (color 2 displaced by `shift` columns), colors 1 and 3
/// run horizontally from even and odd columns respectively.  Odd shifts give
/// non-bipartite graphs; `shift = 2` gives the standard lens space
/// crystallizations (see [`lens_space_gem`]), `shift = 0` a 3-sphere.
pub fn grid_gem(p: usize, shift: usize) -> Result<ColoredGraph, ConstructError> {
    if p == 0 {
        return Err(ConstructError::BadParameter("grid gem needs p >= 1".into()));
    }
    let w = 2 * p;
    let idx = |row: usize, col: usize| row * w + col % w;
    let mut m = vec![vec![0usize; 2 * w]; 4];
    for c in 0..w {
        m[0][idx(0, c)] = idx(1, c);
        m[0][idx(1, c)] = idx(0, c);
        m[2][idx(1, c)] = idx(0, c + shift);
        m[2][idx(0, c + shift)] = idx(1, c);
        let horizontal = if c % 2 == 0 { 1 } else { 3 };
        for r in 0..2 {
            m[horizontal][idx(r, c)] = idx(r, c + 1);
            m[horizontal][idx(r, c + 1)] = idx(r, c);
        }
    }
    Ok(ColoredGraph::new(3, m)?)
}

/// The order-4p crystallization of the lens space L(p, 1), p >= 2, as a shift-2
/// grid gem.  The build cross-checks regular genus one and H1 = Z/p.
pub fn lens_space_gem(p: usize) -> ColoredGraph {
    assert!(p >= 2, "lens space gems need p >= 2");
    let g = grid_gem(p, 2).expect("grid parameters are valid");
    assert_eq!(regular_genus(&g), HalfInt::from_int(1));
    assert!(manifold_check(&g).is_closed_manifold());
    assert_eq!(
        first_homology(&g).expect("closed graph has admissible color pairs"),
        AbelianInvariants::cyclic(p as u64),
        "grid gem homology disagrees with L({p}, 1)"
    );
    g
}

/// One matching per conjugacy class (under relabelings fixing the standard
/// pairing (01)(23)(45)(67)) of a second matching on eight vertices, indexed
/// by the cycle type of the union: 2+2+2+2, 4+2+2, 4+4, 6+2, 8.
fn second_matching_class_reps() -> [Vec<usize>; 5] {
    [
        vec![1, 0, 3, 2, 5, 4, 7, 6],
        vec![2, 3, 0, 1, 5, 4, 7, 6],
        vec![2, 3, 0, 1, 6, 7, 4, 5],
        vec![5, 2, 1, 4, 3, 0, 7, 6],
        vec![7, 2, 1, 4, 3, 6, 5, 0],
    ]
}

/// Every connected order-8 gem of the orientable (or twisted) 2-sphere bundle
/// over the circle, one representative per isomorphism class: genus one,
/// closed, with infinite cyclic first homology.  Cached after the first
/// search; the first matching is fixed and the second ranges over class
/// representatives, which loses no isomorphism classes.
fn bundle_gems_order8(orientable: bool) -> &'static [ColoredGraph] {
    static ORIENTABLE: OnceLock<Vec<ColoredGraph>> = OnceLock::new();
    static TWISTED: OnceLock<Vec<ColoredGraph>> = OnceLock::new();
    let cell = if orientable { &ORIENTABLE } else { &TWISTED };
    cell.get_or_init(|| {
        let all = perfect_matchings(8);
        let m0: Vec<usize> = vec![1, 0, 3, 2, 5, 4, 7, 6];
        let mut found: Vec<ColoredGraph> = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for m1 in second_matching_class_reps() {
            let g01 = pair_residues(&m0, &m1);
            for m2 in &all {
                let g02 = pair_residues(&m0, m2);
                let g12 = pair_residues(&m1, m2);
                for m3 in &all {
                    if matching_components(&[&m0, &m1, m2, m3], 8) != 1 {
                        continue;
                    }
                    let g03 = pair_residues(&m0, m3);
                    let g13 = pair_residues(&m1, m3);
                    let g23 = pair_residues(m2, m3);
                    // doubled genus for each cyclic color order is 10 minus
                    // the sum over its consecutive pairs; genus one means all
                    // sums at most 8 with the maximum attained
                    let sums =
                        [g01 + g12 + g23 + g03, g01 + g13 + g23 + g02, g02 + g12 + g13 + g03];
                    if sums.iter().any(|&s| s > 8) || sums.iter().all(|&s| s < 8) {
                        continue;
                    }
                    let g = ColoredGraph::new(
                        3,
                        vec![m0.clone(), m1.clone(), m2.clone(), m3.clone()],
                    )
                    .expect("search tables are involutions");
                    if g.is_bipartite() != orientable
                        || !seen.insert(g.canonical_form(true).digest())
                        || !manifold_check(&g).is_closed_manifold()
                        || first_homology(&g).ok() != Some(AbelianInvariants::cyclic(0))
                    {
                        continue;
                    }
                    found.push(g);
                }
            }
        }
        assert!(!found.is_empty(), "no order-8 circle-bundle gem found");
        found
    })
}

/// Number of bicolored cycles spanned by two matchings.
fn pair_residues(a: &[usize], b: &[usize]) -> usize {
    matching_components(&[a, b], a.len())
}

/// Order-8 crystallization of the 2-sphere bundle over the circle: the
/// product bundle when `orientable`, the twisted one otherwise.  Found by
/// bounded search and certified by genus, homology and the closed-manifold
/// check; a genus-one closed 3-manifold with infinite cyclic homology is one
/// of the two bundles, separated by bipartiteness.
pub fn sphere_bundle_gem_3(orientable: bool) -> ColoredGraph {
    bundle_gems_order8(orientable)
        .iter()
        .find(|g| {
            let full = g.all_colors();
            (0..4).all(|c| g.residue_count(full & !(1 << c)) == 1)
        })
        .expect("an order-8 bundle crystallization exists")
        .clone()
}

/// Order-10 crystallization of the 3-sphere bundle over the circle: the
/// product bundle when `orientable`, the twisted one otherwise.  The tables
/// were found by the bounded search in [`bundle_gems_order10`] (a test checks
/// they still agree); the identifying certificate is re-verified here on
/// first use: a closed 4-manifold of regular genus one with infinite cyclic
/// homology is one of the two bundles, separated by bipartiteness.
pub fn sphere_bundle_gem_4(orientable: bool) -> Result<ColoredGraph, ConstructError> {
    static CELLS: [OnceLock<ColoredGraph>; 2] = [OnceLock::new(), OnceLock::new()];
    let slot = if orientable { 0 } else { 1 };
    Ok(CELLS[slot]
        .get_or_init(|| {
            let mut matchings = vec![
                vec![1, 0, 3, 2, 5, 4, 7, 6, 9, 8],
                vec![5, 2, 1, 4, 3, 0, 7, 6, 9, 8],
                vec![1, 0, 5, 4, 3, 2, 8, 9, 6, 7],
                vec![1, 0, 5, 6, 7, 2, 3, 4, 9, 8],
            ];
            matchings.push(if orientable {
                vec![8, 9, 5, 4, 3, 2, 7, 6, 0, 1]
            } else {
                vec![9, 8, 5, 4, 3, 2, 7, 6, 1, 0]
            });
            let g = ColoredGraph::new(4, matchings).expect("frozen tables are involutions");
            assert!(g.is_connected());
            assert_eq!(g.is_bipartite(), orientable);
            let full = g.all_colors();
            assert!((0..5).all(|c| g.residue_count(full & !(1 << c)) == 1));
            assert_eq!(regular_genus(&g), HalfInt::from_int(1));
            assert!(manifold_check(&g).is_closed_manifold());
            assert_eq!(first_homology(&g).ok(), Some(AbelianInvariants::cyclic(0)));
            g
        })
        .clone())
}

/// First order-10 genus-one closed crystallization with H1 = Z of either
/// parity, in a fixed search order.  The first matching is the standard
/// pairing and the second ranges over union-type representatives, which loses
/// no isomorphism classes.  The inner levels prune on genus-zero surface
/// residues (exact: a closed 4-manifold gem needs 2-sphere surfaces), on
/// genus-zero rank-4 residues (a restriction of the search space -- sphere
/// gems may carry positive witness genus -- which still retains witnesses of
/// both bundles) and on the pair-count form of the genus, so that only
/// genuine candidates pay for the full certificate.
#[allow(dead_code)] // derivation oracle for the frozen tables; exercised by a slow test
fn bundle_gems_order10() -> &'static [Option<ColoredGraph>; 2] {
    static CELL: OnceLock<[Option<ColoredGraph>; 2]> = OnceLock::new();
    CELL.get_or_init(|| {
        let all = perfect_matchings(10);
        let perms = cyclic_permutations(4).expect("dimension 4 has cyclic orders");
        let m0: Vec<usize> = (0..10).map(|v| v ^ 1).collect();
        let mut found: [Option<ColoredGraph>; 2] = [None, None];
        for m1 in union_type_representatives(10) {
            for m2 in &all {
                if !surface_is_spherical(&m0, &m1, m2, 10) {
                    continue;
                }
                for m3 in &all {
                    if !surface_is_spherical(&m0, &m1, m3, 10)
                        || !surface_is_spherical(&m0, m2, m3, 10)
                        || !surface_is_spherical(&m1, m2, m3, 10)
                        || !all_residues_are_spheres(3, &[&m0, &m1, m2, m3])
                    {
                        continue;
                    }
                    let lower: [&[usize]; 4] = [&m0, &m1, m2, m3];
                    let mut pair = [[0usize; 5]; 5];
                    for a in 0..4 {
                        for b in a + 1..4 {
                            pair[a][b] = pair_residues(lower[a], lower[b]);
                        }
                    }
                    'candidate: for m4 in &all {
                        for a in 0..4 {
                            pair[a][4] = pair_residues(lower[a], m4);
                        }
                        // with p = 5 and all residues connected, the doubled
                        // genus of a cyclic order is 17 minus the sum of its
                        // consecutive pair counts; regular genus one means the
                        // best order sums to exactly 15
                        let best = perms
                            .iter()
                            .map(|eps| {
                                (0..5)
                                    .map(|i| {
                                        let a = eps.at(i);
                                        let b = eps.at(i + 1);
                                        pair[a.min(b)][a.max(b)]
                                    })
                                    .sum::<usize>()
                            })
                            .max()
                            .expect("dimension 4 has cyclic orders");
                        if best != 15 {
                            continue;
                        }
                        for a in 0..4 {
                            for b in a + 1..4 {
                                if !surface_is_spherical(lower[a], lower[b], m4, 10) {
                                    continue 'candidate;
                                }
                            }
                        }
                        // crystallization of a closed manifold: dropping any
                        // color must leave a single 3-sphere residue
                        for drop in 0..5 {
                            let rest: Vec<&[usize]> = (0..5)
                                .filter(|&c| c != drop)
                                .map(|c| if c == 4 { m4.as_slice() } else { lower[c] })
                                .collect();
                            if matching_components(&rest, 10) != 1
                                || !all_residues_are_spheres(3, &rest)
                            {
                                continue 'candidate;
                            }
                        }
                        let mut matchings: Vec<Vec<usize>> =
                            lower.iter().map(|m| m.to_vec()).collect();
                        matchings.push(m4.clone());
                        let g = ColoredGraph::new(4, matchings)
                            .expect("search tables are involutions");
                        if first_homology(&g).ok() != Some(AbelianInvariants::cyclic(0)) {
                            continue;
                        }
                        assert!(manifold_check(&g).is_closed_manifold());
                        let slot = if g.is_bipartite() { 0 } else { 1 };
                        if found[slot].is_none() {
                            found[slot] = Some(g);
                            if found.iter().all(Option::is_some) {
                                return found;
                            }
                        }
                    }
                }
            }
        }
        found
    })
}

/// Every component of the gem spanned by the given matchings has genus zero.
fn all_residues_are_spheres(dimension: usize, matchings: &[&[usize]]) -> bool {
    let g = ColoredGraph::new(dimension, matchings.iter().map(|m| m.to_vec()).collect())
        .expect("search tables are involutions");
    let res = g.residues(g.all_colors());
    (0..res.count).all(|comp| {
        let (sub, _) = g.residue_graph(&res, comp);
        regular_genus(&sub) == HalfInt::ZERO
    })
}

/// Gem of the 2-disk bundle over the 2-sphere with Euler class `c`: the
/// product bundle for `c = 0`, the twisted bundles for `c >= 2` (class 1 is
/// rejected, as its boundary is a 3-sphere).  The order-4c lens gem (the
/// order-8 circle-bundle gem when `c = 0`) is extended by a fifth matching so
/// that the extension is a simply connected crystallization whose only
/// singular color carries the old graph as boundary, of regular genus two
/// with genus `2c - 2` (two when `c = 0`) on the associated cyclic order --
/// hence of degree `12c` (24 when `c = 0`).
pub fn disk_bundle_gem(c: usize) -> Result<ColoredGraph, ConstructError> {
    if c == 1 {
        return Err(ConstructError::BadParameter(
            "a disk bundle of Euler class 1 has spherical boundary; use 0 or c >= 2".into(),
        ));
    }
    static CACHE: OnceLock<std::sync::Mutex<std::collections::BTreeMap<usize, Option<ColoredGraph>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(&c) {
        return hit.clone().ok_or(ConstructError::SearchExhausted);
    }
    let result = disk_bundle_search(c);
    cache.lock().unwrap().insert(c, result.clone());
    result.ok_or(ConstructError::SearchExhausted)
}

fn disk_bundle_search(c: usize) -> Option<ColoredGraph> {
    let substrate = if c == 0 { sphere_bundle_gem_3(true) } else { lens_space_gem(c) };
    let n = substrate.order();
    let p = n / 2;
    let classes = substrate.bipartition().expect("lens and circle-bundle gems are bipartite");
    let evens: Vec<usize> = (0..n).filter(|&v| !classes[v]).collect();
    let odds: Vec<usize> = (0..n).filter(|&v| classes[v]).collect();
    let perms = cyclic_permutations(4).expect("dimension 4 has cyclic orders");
    // doubled genus of a cyclic order is 2 + 3p minus its pair-count sum
    let doubled_rho = |sum: usize| (2 + 3 * p) as i64 - sum as i64;
    let associated_rho = if c == 0 { 4 } else { 4 * c as i64 - 4 };
    let degree = if c == 0 { 24 } else { 12 * c as i64 };

    let mut pair = [[0usize; 5]; 5];
    for a in 0..4 {
        for b in a + 1..4 {
            pair[a][b] = pair_residues(&substrate.matchings()[a], &substrate.matchings()[b]);
        }
    }
    // the extension must stay bipartite, so the fifth matching can only pair
    // the two classes; enumerate it as a bijection of the even class
    'candidate: for perm in permutations(p) {
        let mut m4 = vec![0usize; n];
        for (i, &e) in evens.iter().enumerate() {
            let o = odds[perm[i]];
            m4[e] = o;
            m4[o] = e;
        }
        for a in 0..4 {
            pair[a][4] = pair_residues(&substrate.matchings()[a], &m4);
        }
        let rho_of = |eps: &CyclicPerm| {
            doubled_rho(
                (0..5)
                    .map(|i| {
                        let a = eps.at(i);
                        let b = eps.at(i + 1);
                        pair[a.min(b)][a.max(b)]
                    })
                    .sum::<usize>(),
            )
        };
        // regular genus two, attained by an order whose associate has genus
        // 2c - 2 (the degree then follows from the two witnesses)
        if perms.iter().map(&rho_of).min() != Some(4) {
            continue;
        }
        if !perms.iter().any(|eps| {
            rho_of(eps) == 4
                && associated_permutation(eps).is_ok_and(|assoc| rho_of(&assoc) == associated_rho)
        }) {
            continue;
        }
        // crystallization: dropping a color must leave a single residue
        // (whether the residues missing colors other than 4 are 3-spheres is
        // settled below by the manifold check; genus zero would be too strong,
        // since a sphere gem may carry positive witness genus)
        for drop in 0..4 {
            let rest: Vec<&[usize]> = (0..5)
                .filter(|&cc| cc != drop)
                .map(|cc| if cc == 4 { m4.as_slice() } else { substrate.matchings()[cc].as_slice() })
                .collect();
            if matching_components(&rest, n) != 1 {
                continue 'candidate;
            }
        }
        let mut matchings = substrate.matchings().to_vec();
        matchings.push(m4);
        let g = ColoredGraph::new(4, matchings).expect("search tables are involutions");
        if gurau_degree(&g) != HalfInt::from_int(degree)
            || first_homology(&g).ok() != Some(AbelianInvariants::trivial())
        {
            continue;
        }
        match manifold_check(&g) {
            ManifoldCheck::SingularManifold { singular_colors, .. }
                if singular_colors == vec![4] => {}
            _ => continue,
        }
        return Some(g);
    }
    None
}

/// Genus-one order-8 gem of the rank-one 4-dimensional handlebody (D3 bundle
/// over the circle): an order-8 circle-bundle gem extended by a fifth
/// matching so that every cyclic color order has genus one, colors 0..3 stay
/// non-singular and color 4 carries the bundle as its only residue.  A
/// compact 4-manifold whose generalized genus equals the genus of its
/// connected boundary is a handlebody of that rank, so the certificate is the
/// invariant set itself.
fn handlebody_base(orientable: bool) -> Result<&'static ColoredGraph, ConstructError> {
    static ORIENTABLE: OnceLock<Option<ColoredGraph>> = OnceLock::new();
    static TWISTED: OnceLock<Option<ColoredGraph>> = OnceLock::new();
    let cell = if orientable { &ORIENTABLE } else { &TWISTED };
    cell.get_or_init(|| {
        let perms = cyclic_permutations(4).expect("dimension 4 has cyclic orders");
        for substrate in bundle_gems_order8(orientable) {
            'candidate: for m4 in perfect_matchings(8) {
                let mut matchings = substrate.matchings().to_vec();
                matchings.push(m4);
                let cand = ColoredGraph::new(4, matchings).expect("extension keeps a valid gem");
                if !cand.is_connected() {
                    continue;
                }
                let table = ResidueTable::new(&cand);
                let full = cand.all_colors();
                for eps in &perms {
                    if genus_of_subgraph(&cand, &table, eps, full) != HalfInt::from_int(1) {
                        continue 'candidate;
                    }
                }
                for c in 0..4 {
                    let mask = full & !(1 << c);
                    let res = cand.residues(mask);
                    let mut seen = vec![false; res.count];
                    for v in 0..cand.order() {
                        if !std::mem::replace(&mut seen[res.component[v]], true)
                            && residue_sphere_status(&cand, mask, v) != SphereStatus::Sphere
                        {
                            continue 'candidate;
                        }
                    }
                }
                match manifold_check(&cand) {
                    ManifoldCheck::SingularManifold { singular_colors, .. }
                        if singular_colors == vec![4] => {}
                    _ => continue,
                }
                if first_homology(&cand).ok() != Some(AbelianInvariants::cyclic(0)) {
                    continue;
                }
                return Some(cand);
            }
        }
        None
    })
    .as_ref()
    .ok_or(ConstructError::SearchExhausted)
}

/// Gem of the orientable (or twisted) 4-dimensional handlebody of rank m:
/// boundary connected sums of the rank-one base, of order 6m + 2 and regular
/// genus m.  Only dimension 4 is implemented.
pub fn handlebody_gem(d: usize, m: usize, orientable: bool) -> Result<ColoredGraph, ConstructError> {
    if d != 4 {
        return Err(ConstructError::UnsupportedDimension(d));
    }
    if m == 0 {
        return Err(ConstructError::BadParameter("handlebody rank must be positive".into()));
    }
    let base = handlebody_base(orientable)?;
    let mut g = base.clone();
    for _ in 1..m {
        g = boundary_sum(&g, base)?;
    }
    assert_eq!(g.order(), 6 * m + 2);
    for eps in cyclic_permutations(4).expect("dimension 4 has cyclic orders") {
        assert_eq!(genus_wrt(&g, &eps), HalfInt::from_int(m as i64));
    }
    Ok(g)
}

/// Graph connected sum: drop `v1` and `v2` and weld the hanging edges of
/// equal colors.  The weld keeps bipartite operands bipartite for either
/// class choice; requiring the two vertices in opposite classes fixes the
/// orientation-coherent gluing, so same-class picks are rejected.
pub fn connected_sum(
    g1: &ColoredGraph,
    v1: usize,
    g2: &ColoredGraph,
    v2: usize,
) -> Result<ColoredGraph, ConstructError> {
    if g1.dimension() != g2.dimension() {
        return Err(ConstructError::DimensionMismatch);
    }
    if v1 >= g1.order() {
        return Err(ConstructError::BadVertex(v1));
    }
    if v2 >= g2.order() {
        return Err(ConstructError::BadVertex(v2));
    }
    if !parity_ok(g1, v1, g2, v2) {
        return Err(ConstructError::ParityViolation);
    }
    let (n1, n2, k) = (g1.order(), g2.order(), g1.num_colors());
    let map1 = |v: usize| if v < v1 { v } else { v - 1 };
    let map2 = |v: usize| n1 - 1 + if v < v2 { v } else { v - 1 };
    let mut matchings = vec![vec![0usize; n1 + n2 - 2]; k];
    for c in 0..k {
        for w in (0..n1).filter(|&w| w != v1) {
            let x = g1.neighbor(c, w);
            matchings[c][map1(w)] =
                if x == v1 { map2(g2.neighbor(c, v2)) } else { map1(x) };
        }
        for w in (0..n2).filter(|&w| w != v2) {
            let x = g2.neighbor(c, w);
            matchings[c][map2(w)] =
                if x == v2 { map1(g1.neighbor(c, v1)) } else { map2(x) };
        }
    }
    Ok(ColoredGraph::new(g1.dimension(), matchings)?)
}

fn parity_ok(g1: &ColoredGraph, v1: usize, g2: &ColoredGraph, v2: usize) -> bool {
    match (g1.bipartition(), g2.bipartition()) {
        (Some(b1), Some(b2)) => b1[v1] != b2[v2],
        _ => true,
    }
}

/// Where a summand can absorb a connected sum: at any vertex meeting no
/// singular residue, or -- if every vertex meets one but only a single color
/// is singular -- along an edge of that color.
enum SumSite {
    Ordinary(Vec<usize>),
    SingularColor(usize),
}

fn sum_site(g: &ColoredGraph) -> Result<SumSite, ConstructError> {
    match manifold_check(g) {
        ManifoldCheck::NotManifold { witness } => Err(ConstructError::Unverifiable(witness)),
        ManifoldCheck::Unknown { detail } => Err(ConstructError::Unverifiable(detail)),
        ManifoldCheck::SingularManifold { singular_colors, singular_residues } => {
            let mut meets = vec![false; g.order()];
            for &(c, comp) in &singular_residues {
                let res = g.residues(g.all_colors() & !(1 << c));
                for v in 0..g.order() {
                    if res.component[v] == comp {
                        meets[v] = true;
                    }
                }
            }
            let ordinary: Vec<usize> = (0..g.order()).filter(|&v| !meets[v]).collect();
            if !ordinary.is_empty() {
                Ok(SumSite::Ordinary(ordinary))
            } else if singular_colors.len() == 1 {
                Ok(SumSite::SingularColor(singular_colors[0]))
            } else {
                Err(ConstructError::Unverifiable(
                    "every vertex meets a singular residue and several colors are singular".into(),
                ))
            }
        }
    }
}

/// Interior connected sum.  Both summands need interior sum sites: a vertex
/// away from every singular residue, or failing that a single common
/// singular color.  In the latter case the sum fuses one edge of that color
/// from each operand, which equals inserting a top-dimensional dipole in each
/// summand, summing at the fresh vertices and cancelling the top dipole this
/// creates -- so no vertices are spent and the orders simply add.
pub fn interior_sum(
    g1: &ColoredGraph,
    g2: &ColoredGraph,
) -> Result<ColoredGraph, ConstructError> {
    if g1.dimension() != g2.dimension() {
        return Err(ConstructError::DimensionMismatch);
    }
    match (sum_site(g1)?, sum_site(g2)?) {
        (SumSite::Ordinary(o1), SumSite::Ordinary(o2)) => sum_at_first_pair(g1, &o1, g2, &o2),
        (SumSite::Ordinary(o1), SumSite::SingularColor(e)) => {
            let (h2, fresh) = ordinary_vertex_via_dipole(g2, e)?;
            sum_at_first_pair(g1, &o1, &h2, &fresh)
        }
        (SumSite::SingularColor(e), SumSite::Ordinary(o2)) => {
            let (h1, fresh) = ordinary_vertex_via_dipole(g1, e)?;
            sum_at_first_pair(&h1, &fresh, g2, &o2)
        }
        (SumSite::SingularColor(e1), SumSite::SingularColor(e2)) => {
            if e1 != e2 {
                return Err(ConstructError::Unverifiable(format!(
                    "singular colors {e1} and {e2} differ; permute one operand's colors first"
                )));
            }
            fuse_along_color(g1, g2, e1)
        }
    }
}

fn sum_at_first_pair(
    g1: &ColoredGraph,
    sites1: &[usize],
    g2: &ColoredGraph,
    sites2: &[usize],
) -> Result<ColoredGraph, ConstructError> {
    for &v1 in sites1 {
        for &v2 in sites2 {
            if parity_ok(g1, v1, g2, v2) {
                return connected_sum(g1, v1, g2, v2);
            }
        }
    }
    Err(ConstructError::ParityViolation)
}

/// Insert a top-dimensional dipole on all colors but `e`, anchored at the
/// first `e`-colored edge, and hand back the new vertices after checking that
/// they meet no singular residue.
fn ordinary_vertex_via_dipole(
    g: &ColoredGraph,
    e: usize,
) -> Result<(ColoredGraph, Vec<usize>), ConstructError> {
    let colors: Vec<usize> = (0..g.num_colors()).filter(|&c| c != e).collect();
    let anchor = (0, g.neighbor(e, 0));
    let (h, dip) = add_dipole(g, &colors, &[anchor])
        .map_err(|err| ConstructError::Unverifiable(err.to_string()))?;
    let full = h.all_colors();
    for v in [dip.u, dip.v] {
        for c in 0..h.num_colors() {
            if residue_sphere_status(&h, full & !(1 << c), v) != SphereStatus::Sphere {
                return Err(ConstructError::Unverifiable(format!(
                    "residue of the inserted vertex missing color {c} is not a certified sphere"
                )));
            }
        }
    }
    Ok((h, vec![dip.u, dip.v]))
}

/// Cut one `e`-colored edge in each operand and cross-join the four ends.
fn fuse_along_color(
    g1: &ColoredGraph,
    g2: &ColoredGraph,
    e: usize,
) -> Result<ColoredGraph, ConstructError> {
    let (n1, k) = (g1.order(), g1.num_colors());
    let (a1, b1) = (0, g1.neighbor(e, 0));
    let (mut a2, mut b2) = (0, g2.neighbor(e, 0));
    if let (Some(p1), Some(p2)) = (g1.bipartition(), g2.bipartition()) {
        if p1[a1] == p2[a2] {
            std::mem::swap(&mut a2, &mut b2);
        }
    }
    let mut matchings = vec![vec![0usize; n1 + g2.order()]; k];
    for c in 0..k {
        for v in 0..n1 {
            matchings[c][v] = g1.neighbor(c, v);
        }
        for v in 0..g2.order() {
            matchings[c][n1 + v] = n1 + g2.neighbor(c, v);
        }
    }
    matchings[e][a1] = n1 + a2;
    matchings[e][n1 + a2] = a1;
    matchings[e][b1] = n1 + b2;
    matchings[e][n1 + b2] = b1;
    Ok(ColoredGraph::new(g1.dimension(), matchings)?)
}

/// Boundary connected sum: a graph connected sum at vertices that each meet
/// exactly one singular residue.
pub fn boundary_sum(
    g1: &ColoredGraph,
    g2: &ColoredGraph,
) -> Result<ColoredGraph, ConstructError> {
    if g1.dimension() != g2.dimension() {
        return Err(ConstructError::DimensionMismatch);
    }
    let sites1 = boundary_sites(g1)?;
    let sites2 = boundary_sites(g2)?;
    sum_at_first_pair(g1, &sites1, g2, &sites2)
}

fn boundary_sites(g: &ColoredGraph) -> Result<Vec<usize>, ConstructError> {
    match manifold_check(g) {
        ManifoldCheck::NotManifold { witness } => Err(ConstructError::Unverifiable(witness)),
        ManifoldCheck::Unknown { detail } => Err(ConstructError::Unverifiable(detail)),
        ManifoldCheck::SingularManifold { singular_residues, .. } => {
            if singular_residues.is_empty() {
                return Err(ConstructError::Unverifiable(
                    "boundary sum needs operands with non-empty boundary".into(),
                ));
            }
            let mut meets = vec![0usize; g.order()];
            for &(c, comp) in &singular_residues {
                let res = g.residues(g.all_colors() & !(1 << c));
                for v in 0..g.order() {
                    if res.component[v] == comp {
                        meets[v] += 1;
                    }
                }
            }
            let sites: Vec<usize> = (0..g.order()).filter(|&v| meets[v] == 1).collect();
            if sites.is_empty() {
                Err(ConstructError::Unverifiable(
                    "no vertex meets exactly one singular residue".into(),
                ))
            } else {
                Ok(sites)
            }
        }
    }
}

/// Product of the closed manifold of `g` with an interval: the matching of
/// `base_color` is duplicated as a new color d+1.  Both the degree of the
/// result (in closed form from the pair residues at `base_color`) and the
/// genus carried over from `eps` are recomputed directly and must agree.
pub fn product_with_interval(
    g: &ColoredGraph,
    eps: &CyclicPerm,
    base_color: usize,
) -> Result<ColoredGraph, ConstructError> {
    let d = g.dimension();
    if eps.len() != d + 1 {
        return Err(ConstructError::BadParameter(format!(
            "cyclic order has {} colors, expected {}",
            eps.len(),
            d + 1
        )));
    }
    if base_color > d {
        return Err(ConstructError::BadParameter(format!("base color {base_color} out of range")));
    }
    match manifold_check(g) {
        ManifoldCheck::SingularManifold { singular_colors, .. } if singular_colors.is_empty() => {}
        ManifoldCheck::Unknown { detail } => return Err(ConstructError::Unverifiable(detail)),
        other => {
            return Err(ConstructError::NotClosed(format!("{other:?}")));
        }
    }
    let mut matchings = g.matchings().to_vec();
    matchings.push(g.matchings()[base_color].clone());
    let product = ColoredGraph::new(d + 1, matchings)?;

    // degree of the product from the pair residues at the duplicated color
    let p = g.half_order() as i64;
    let table = ResidueTable::new(g);
    let spread: i64 = (0..=d)
        .filter(|&c| c != base_color)
        .map(|c| p - table.count((1 << base_color) | (1 << c)) as i64)
        .sum();
    let d_factorial: i64 = (1..=d as i64).product();
    let expected_doubled = d_factorial * (spread - p + 1) + d as i64 * gurau_degree(g).doubled();
    assert_eq!(
        gurau_degree(&product).doubled(),
        expected_doubled,
        "product degree disagrees with its closed form"
    );

    // the cyclic order through the duplicated color keeps the genus of eps
    let start = eps.colors().iter().position(|&c| c == base_color).expect("eps covers all colors");
    let mut carried: Vec<usize> =
        (0..=d).map(|i| eps.at((start + i) as isize)).collect();
    carried.push(d + 1);
    assert_eq!(
        genus_wrt(&product, &CyclicPerm::new(carried)),
        genus_wrt(g, eps),
        "product genus disagrees with the base genus"
    );
    Ok(product)
}

/// Interval product with an automatic witness choice: the duplicated color
/// minimizes the degree contribution of its pair residues, and the carried
/// cyclic order is one attaining the regular genus of `g`.
pub fn interval_product(g: &ColoredGraph) -> Result<ColoredGraph, ConstructError> {
    let genus_min = regular_genus(g);
    let eps = cyclic_permutations(g.dimension())
        .map_err(|e| ConstructError::BadParameter(e.to_string()))?
        .into_iter()
        .find(|eps| genus_wrt(g, eps) == genus_min)
        .expect("some cyclic order attains the regular genus");
    let d = g.dimension();
    let p = g.half_order() as i64;
    let table = ResidueTable::new(g);
    let base = (0..=d)
        .min_by_key(|&b| {
            (0..=d)
                .filter(|&c| c != b)
                .map(|c| p - table.count((1 << b) | (1 << c)) as i64)
                .sum::<i64>()
        })
        .expect("dimension is positive");
    product_with_interval(g, &eps, base)
}

/// Sentinel for boundary vertices in a [`BoundaryGraph`] matching.
pub const UNMATCHED: usize = usize::MAX;

/// A gem with boundary: colors `0..d` are total matchings, the last color is
/// a partial matching and its unmatched vertices form the boundary.
#[derive(Debug, Clone)]
pub struct BoundaryGraph {
    dimension: usize,
    matchings: Vec<Vec<usize>>,
}

impl BoundaryGraph {
    pub fn new(dimension: usize, matchings: Vec<Vec<usize>>) -> Result<Self, ConstructError> {
        if dimension < 2 || matchings.len() != dimension + 1 {
            return Err(ConstructError::BadBoundary(format!(
                "expected {} matchings for dimension {dimension}",
                dimension + 1
            )));
        }
        let n = matchings[0].len();
        for (c, m) in matchings.iter().enumerate() {
            if m.len() != n {
                return Err(ConstructError::BadBoundary("ragged matching tables".into()));
            }
            for v in 0..n {
                let w = m[v];
                if w == UNMATCHED {
                    if c < dimension {
                        return Err(ConstructError::BadBoundary(format!(
                            "color {c} must be a total matching"
                        )));
                    }
                    continue;
                }
                if w >= n || w == v || matchings[c][w] != v {
                    return Err(ConstructError::BadBoundary(format!(
                        "color {c} is not an involution at vertex {v}"
                    )));
                }
            }
        }
        Ok(BoundaryGraph { dimension, matchings })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn order(&self) -> usize {
        self.matchings[0].len()
    }

    pub fn matchings(&self) -> &[Vec<usize>] {
        &self.matchings
    }

    /// Vertices missing the last color.
    pub fn boundary_vertices(&self) -> Vec<usize> {
        let d = self.dimension;
        (0..self.order()).filter(|&v| self.matchings[d][v] == UNMATCHED).collect()
    }
}

/// Close a boundary graph by joining the two boundary ends of every path
/// alternating `c` and the last color with a new last-color edge.  Each such
/// path has exactly two degree-one ends and both are boundary vertices, so
/// the completion is a total matching.
pub fn cap_off(bg: &BoundaryGraph, c: usize) -> Result<ColoredGraph, ConstructError> {
    let d = bg.dimension();
    if c >= d {
        return Err(ConstructError::BadParameter(format!(
            "capping color {c} must be one of the total colors 0..{d}"
        )));
    }
    let mut closed = bg.matchings()[d].clone();
    for w in 0..bg.order() {
        if closed[w] != UNMATCHED {
            continue;
        }
        let mut v = bg.matchings()[c][w];
        for _ in 0..bg.order() {
            if bg.matchings()[d][v] == UNMATCHED {
                break;
            }
            v = bg.matchings()[c][bg.matchings()[d][v]];
        }
        if v == w || bg.matchings()[d][v] != UNMATCHED {
            return Err(ConstructError::BadBoundary(format!(
                "path of colors {c} and {d} starting at vertex {w} does not reach a second boundary vertex"
            )));
        }
        closed[w] = v;
        closed[v] = w;
    }
    let mut matchings = bg.matchings()[..d].to_vec();
    matchings.push(closed);
    Ok(ColoredGraph::new(d, matchings)?)
}
