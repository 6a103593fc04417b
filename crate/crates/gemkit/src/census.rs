//! Bounded enumeration of connected gems up to isomorphism, with manifold
//! filtering and invariant tabulation.
//!
//! Color 0 is fixed to the standard pairing (0 1)(2 3)... and color 1 ranges
//! over one representative per cycle type of the {0,1}-union, which loses no
//! isomorphism classes; the remaining colors range over all matchings.
//! Exactness is guaranteed by final canonical-form deduplication, so the
//! orbit restriction is purely a speedup.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{first_homology, AbelianInvariants};
use crate::graph::{matching_components, perfect_matchings, serialize_gem, ColoredGraph};
use crate::invariants::InvariantReport;
use crate::moves::{manifold_check, ManifoldCheck};

/// Desk-scale default order bound per dimension (2, 3, 4).
pub fn default_max_order(dimension: usize) -> Option<usize> {
    match dimension {
        2 => Some(10),
        3 => Some(12),
        4 => Some(8),
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub struct CensusQuery {
    pub dimension: usize,
    pub max_order: usize,
    pub bipartite_only: bool,
    /// Keep only graphs passing the (possibly singular) manifold check;
    /// inconclusive classes go to the quarantine stream.
    pub manifold_filter: bool,
    /// Keep only graphs with one residue missing each color.
    pub crystallizations_only: bool,
    /// Keep only closed-manifold classes (implies the manifold filter).
    pub closed_only: bool,
    /// Identify classes up to color permutation as well as relabeling.
    pub mod_colors: bool,
    /// Allow orders beyond the desk-scale default.
    pub force: bool,
}

impl CensusQuery {
    pub fn new(dimension: usize, max_order: usize) -> Self {
        CensusQuery {
            dimension,
            max_order,
            bipartite_only: false,
            manifold_filter: false,
            crystallizations_only: false,
            closed_only: false,
            mod_colors: true,
            force: false,
        }
    }
}

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("census enumeration supports dimensions 2..=4, got {0}")]
    BadDimension(usize),
    #[error("max order must be a positive even number, got {0}")]
    BadOrder(usize),
    #[error("order {requested} exceeds the desk-scale bound {limit}; pass force to override")]
    BoundExceeded { requested: usize, limit: usize },
}

/// One isomorphism class: the canonical representative and its invariants.
#[derive(Debug, Clone)]
pub struct CensusClass {
    pub graph: ColoredGraph,
    pub digest: String,
    pub report: InvariantReport,
    pub h1: Option<AbelianInvariants>,
    pub manifold: Option<ManifoldCheck>,
}

#[derive(Debug, Clone, Default)]
pub struct Census {
    /// Sorted by (order, digest); exactly one entry per class.
    pub classes: Vec<CensusClass>,
    /// Classes whose manifold check was inconclusive (never silently dropped).
    pub quarantine: Vec<CensusClass>,
}

/// Enumerate connected gems of dimension `q.dimension` and order up to
/// `q.max_order`.  Output order is deterministic regardless of the worker
/// schedule: candidates are deduplicated by canonical form and sorted.
pub fn enumerate(q: &CensusQuery) -> Result<Census, CensusError> {
    if !(2..=4).contains(&q.dimension) {
        return Err(CensusError::BadDimension(q.dimension));
    }
    if q.max_order == 0 || q.max_order % 2 != 0 {
        return Err(CensusError::BadOrder(q.max_order));
    }
    let limit = default_max_order(q.dimension).expect("dimension checked above");
    if q.max_order > limit && !q.force {
        return Err(CensusError::BoundExceeded { requested: q.max_order, limit });
    }

    let mut reps: BTreeMap<String, ColoredGraph> = BTreeMap::new();
    for order in (2..=q.max_order).step_by(2) {
        for (digest, graph) in enumerate_order(q, order) {
            reps.entry(digest).or_insert(graph);
        }
    }

    let mut census = Census::default();
    for (digest, graph) in reps {
        let manifold =
            (q.manifold_filter || q.closed_only).then(|| manifold_check(&graph));
        let quarantined = match &manifold {
            Some(ManifoldCheck::NotManifold { .. }) => continue,
            Some(ManifoldCheck::Unknown { .. }) => true,
            Some(check) if q.closed_only && !check.is_closed_manifold() => continue,
            _ => false,
        };
        let mut report = InvariantReport::compute(&graph);
        if let Some(ManifoldCheck::SingularManifold { singular_colors, .. }) = &manifold {
            report = report.with_singular_colors(singular_colors.clone());
        }
        let h1 = first_homology(&graph).ok();
        let class = CensusClass { graph, digest, report, h1, manifold };
        if quarantined {
            census.quarantine.push(class);
        } else {
            census.classes.push(class);
        }
    }
    let by_order = |c: &CensusClass| (c.graph.order(), c.digest.clone());
    census.classes.sort_by_key(by_order);
    census.quarantine.sort_by_key(by_order);
    Ok(census)
}

/// All canonical representatives at one order, keyed by digest.
fn enumerate_order(q: &CensusQuery, order: usize) -> Vec<(String, ColoredGraph)> {
    let d = q.dimension;
    let all = perfect_matchings(order);
    let standard = &all[0]; // pairs (0 1)(2 3)...
    let seconds = union_type_representatives(order);
    // work items are the (second, third) color choices; the final dedup and
    // sort make the worker schedule invisible
    let items: Vec<(usize, usize)> = (0..seconds.len())
        .flat_map(|s| (0..all.len()).map(move |t| (s, t)))
        .collect();
    items
        .par_iter()
        .flat_map_iter(|&(s, t)| {
            let mut local = Vec::new();
            let mut chosen: Vec<&[usize]> = vec![standard, &seconds[s], &all[t]];
            if prefix_ok(q, order, &chosen) {
                extend_colors(q, order, &all, &mut chosen, d + 1, &mut local);
            }
            local
        })
        .collect()
}

/// Checks involving only the already chosen colors, used to prune the search
/// tree: bipartiteness is monotone, and for 4-manifold filtering every fully
/// chosen 3-color subset must already carry spheres.
fn prefix_ok(q: &CensusQuery, order: usize, chosen: &[&[usize]]) -> bool {
    if q.bipartite_only && !tables_bipartite(chosen, order) {
        return false;
    }
    if q.manifold_filter && q.dimension == 4 {
        let k = chosen.len() - 1;
        for a in 0..k {
            for b in a + 1..k {
                if !surface_is_spherical(chosen[a], chosen[b], chosen[k], order) {
                    return false;
                }
            }
        }
    }
    true
}

/// chi = 2 on every component of the surface spanned by three matchings.
pub(crate) fn surface_is_spherical(a: &[usize], b: &[usize], c: &[usize], order: usize) -> bool {
    let cycles = matching_components(&[a, b], order)
        + matching_components(&[a, c], order)
        + matching_components(&[b, c], order);
    let comps = matching_components(&[a, b, c], order);
    cycles == order / 2 + 2 * comps
}

fn extend_colors<'a>(
    q: &CensusQuery,
    order: usize,
    all: &'a [Vec<usize>],
    chosen: &mut Vec<&'a [usize]>,
    colors: usize,
    out: &mut Vec<(String, ColoredGraph)>,
) {
    if chosen.len() == colors {
        if let Some(entry) = finish_candidate(q, order, chosen) {
            out.push(entry);
        }
        return;
    }
    for m in all {
        chosen.push(m);
        if prefix_ok(q, order, chosen) {
            extend_colors(q, order, all, chosen, colors, out);
        }
        chosen.pop();
    }
}

/// Apply the cheap raw-table filters, then canonicalize.
fn finish_candidate(
    q: &CensusQuery,
    order: usize,
    chosen: &[&[usize]],
) -> Option<(String, ColoredGraph)> {
    if matching_components(chosen, order) != 1 {
        return None;
    }
    if q.crystallizations_only {
        for skip in 0..chosen.len() {
            let rest: Vec<&[usize]> = (0..chosen.len()).filter(|&c| c != skip).map(|c| chosen[c]).collect();
            if matching_components(&rest, order) != 1 {
                return None;
            }
        }
    }
    // bipartiteness and 3-subset sphericity were enforced on every prefix
    let matchings: Vec<Vec<usize>> = chosen.iter().map(|m| m.to_vec()).collect();
    let g = ColoredGraph::new(q.dimension, matchings).expect("search tables are involutions");
    let form = g.canonical_form(q.mod_colors);
    Some((form.digest(), form.to_graph()))
}

fn tables_bipartite(chosen: &[&[usize]], order: usize) -> bool {
    let mut class = vec![u8::MAX; order];
    let mut stack = Vec::new();
    for start in 0..order {
        if class[start] != u8::MAX {
            continue;
        }
        class[start] = 0;
        stack.push(start);
        while let Some(v) = stack.pop() {
            for m in chosen {
                let w = m[v];
                if class[w] == u8::MAX {
                    class[w] = 1 - class[v];
                    stack.push(w);
                } else if class[w] == class[v] {
                    return false;
                }
            }
        }
    }
    true
}

/// One second matching per cycle type of its union with the standard pairing:
/// for each partition of order/2, chain the blocks into cycles of twice the
/// part sizes.
pub(crate) fn union_type_representatives(order: usize) -> Vec<Vec<usize>> {
    let mut reps = Vec::new();
    for parts in partitions(order / 2) {
        let mut m = vec![usize::MAX; order];
        let mut base = 0;
        for k in parts {
            if k == 1 {
                m[base] = base + 1;
                m[base + 1] = base;
            } else {
                for i in 0..k - 1 {
                    m[base + 2 * i + 1] = base + 2 * i + 2;
                    m[base + 2 * i + 2] = base + 2 * i + 1;
                }
                m[base + 2 * k - 1] = base;
                m[base] = base + 2 * k - 1;
            }
            base += 2 * k;
        }
        reps.push(m);
    }
    reps
}

/// Partitions of n in weakly decreasing parts, lexicographically descending.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn extend(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            extend(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(n, n, &mut Vec::new(), &mut out);
    out
}

/// Gem-complexity witnessed by a census: p - 1 for the lowest-order class
/// matching the predicate.  The value is exact only if the census provably
/// covers every order below the witness; otherwise treat it as an upper
/// bound.
pub fn gem_complexity<F>(census: &Census, mut matches: F) -> Option<usize>
where
    F: FnMut(&CensusClass) -> bool,
{
    census
        .classes
        .iter()
        .filter(|c| matches(c))
        .map(|c| c.graph.half_order() - 1)
        .min()
}

/// Tab-separated index of a census: digest, order, dimension, bipartite,
/// genus spectrum, regular genus, degree, homology.
pub fn index_tsv(census: &Census) -> String {
    let mut out = String::from(
        "digest\torder\tdimension\tbipartite\tgenus_spectrum\tregular_genus\tgurau_degree\th1\n",
    );
    for class in census.classes.iter().chain(&census.quarantine) {
        let spectrum: Vec<String> =
            class.report.genus_per_perm.iter().map(|(_, g)| g.to_string()).collect();
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            class.digest,
            class.graph.order(),
            class.graph.dimension(),
            class.graph.is_bipartite(),
            spectrum.join(","),
            class.report.regular_genus,
            class.report.gurau_degree,
            class.h1.as_ref().map_or("-".to_string(), |h| h.render()),
        ));
    }
    out
}

/// Write one gem file per class plus `index.tsv` into `dir`.
pub fn write_census(census: &Census, dir: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for class in census.classes.iter().chain(&census.quarantine) {
        let path = dir.join(format!("{}.gem", class.digest));
        std::fs::write(path, serialize_gem(&class.graph))?;
    }
    let mut index = std::fs::File::create(dir.join("index.tsv"))?;
    index.write_all(index_tsv(census).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::HalfInt;

    #[test]
    fn order_two_is_the_sphere_alone() {
        let mut q = CensusQuery::new(3, 2);
        q.bipartite_only = true;
        let census = enumerate(&q).unwrap();
        assert_eq!(census.classes.len(), 1);
        assert_eq!(census.classes[0].report.regular_genus, HalfInt::ZERO);
    }

    #[test]
    fn surfaces_at_order_four() {
        let census = enumerate(&CensusQuery::new(2, 4)).unwrap();
        // order two: the sphere; order four: a sphere gem and the projective
        // plane, one class each
        let chis: Vec<(usize, i64, bool)> = census
            .classes
            .iter()
            .map(|c| (c.graph.order(), c.report.euler_characteristic, c.graph.is_bipartite()))
            .collect();
        assert!(chis.contains(&(2, 2, true)));
        assert!(chis.contains(&(4, 2, true)));
        assert!(chis.contains(&(4, 1, false)));
        for class in &census.classes {
            assert!(class.report.euler_characteristic <= 2);
        }
    }

    #[test]
    fn census_matches_naive_oracle_on_small_orders() {
        // oracle: enumerate *all* matching tuples at the top order (color 0
        // free too), group by canonical digest, and compare class counts
        for (d, order) in [(2usize, 4usize), (3, 4)] {
            let census = enumerate(&CensusQuery::new(d, order)).unwrap();
            let all = perfect_matchings(order);
            let mut digests = std::collections::BTreeSet::new();
            for i in 0..all.len().pow(d as u32 + 1) {
                let mut rest = i;
                let matchings: Vec<Vec<usize>> = (0..=d)
                    .map(|_| {
                        let m = all[rest % all.len()].clone();
                        rest /= all.len();
                        m
                    })
                    .collect();
                let g = ColoredGraph::new(d, matchings).unwrap();
                if g.is_connected() {
                    digests.insert(g.canonical_form(true).digest());
                }
            }
            let at_top =
                census.classes.iter().filter(|c| c.graph.order() == order).count();
            assert_eq!(at_top, digests.len(), "d = {d}, order {order}");
            // and every top-order census digest appears in the oracle set
            for class in census.classes.iter().filter(|c| c.graph.order() == order) {
                assert!(digests.contains(&class.digest));
            }
        }
    }

    #[test]
    fn bound_needs_force() {
        let q = CensusQuery::new(4, 10);
        assert!(matches!(enumerate(&q), Err(CensusError::BoundExceeded { .. })));
    }

    #[test]
    fn partitions_count() {
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(partitions(5).len(), 7);
        for m in union_type_representatives(8) {
            // valid involution without fixed points
            for v in 0..8 {
                assert_ne!(m[v], v);
                assert_eq!(m[m[v]], v);
            }
        }
    }
}

#[cfg(test)]
mod census_d3_tests {
    use super::*;
    use crate::invariants::HalfInt;

    #[test]
    fn lens_and_bundle_unique_at_order_eight() {
        let mut q = CensusQuery::new(3, 8);
        q.crystallizations_only = true;
        q.closed_only = true;
        let census = enumerate(&q).unwrap();
        assert!(census.quarantine.is_empty());
        let z2: Vec<_> = census
            .classes
            .iter()
            .filter(|c| c.h1 == Some(AbelianInvariants::cyclic(2)))
            .collect();
        assert_eq!(z2.len(), 1, "unique H1 = Z/2 class (the lens space)");
        let bundle: Vec<_> = census
            .classes
            .iter()
            .filter(|c| {
                c.h1 == Some(AbelianInvariants::cyclic(0))
                    && c.report.regular_genus == HalfInt::from_int(1)
            })
            .collect();
        assert_eq!(bundle.len(), 2, "product and twisted bundle classes");
        assert_eq!(bundle.iter().filter(|c| c.graph.is_bipartite()).count(), 1);
        // gem-complexity of the lens class is 3, and the minimal witnesses
        // satisfy degree = p - 1
        assert_eq!(gem_complexity(&census, |c| c.h1 == Some(AbelianInvariants::cyclic(2))), Some(3));
        for c in z2.iter().chain(&bundle) {
            assert_eq!(c.report.gurau_degree, HalfInt::from_int(c.graph.half_order() as i64 - 1));
        }
    }
}
