//! Edge-colored regular graphs ("gems") and their basic combinatorics.
//!
//! A `(d+1)`-colored graph is stored as one fixed-point-free involution per
//! color: `matchings[c][v]` is the vertex joined to `v` by the `c`-colored
//! edge.  Proper edge-coloring is automatic in this encoding, and adjacency
//! lookup is O(1).

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::OnceLock;

use thiserror::Error;

/// The set of colors is `0..=d`; a color subset is a bitmask over them.
pub type ColorMask = u32;

/// Bitmask of all colors of a graph of the given dimension.
pub fn full_mask(dimension: usize) -> ColorMask {
    (1u32 << (dimension + 1)) - 1
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GemError {
    #[error("line {line}: malformed header (expected `gem <d> <2p>`)")]
    MalformedHeader { line: usize },
    #[error("line {line}: dimension must be >= 1, got {dim}")]
    BadDimension { line: usize, dim: i64 },
    #[error("line {line}: order must be a positive even integer, got {order}")]
    BadOrder { line: usize, order: i64 },
    #[error("line {line}: matching row for color {color} has {got} entries, expected {expected}")]
    WrongRowLength { line: usize, color: usize, got: usize, expected: usize },
    #[error("line {line}: entry `{token}` is not a vertex index")]
    BadEntry { line: usize, token: String },
    #[error("line {line}: vertex {vertex} out of range (order {order})")]
    EntryOutOfRange { line: usize, vertex: usize, order: usize },
    #[error("color {color}: vertex {vertex} is matched to itself (loops are forbidden)")]
    FixedPointInMatching { color: usize, vertex: usize },
    #[error("color {color}: row is not an involution at vertex {vertex}")]
    NotAnInvolution { color: usize, vertex: usize },
    #[error("expected {expected} matching rows, found {got}")]
    MissingRows { expected: usize, got: usize },
    #[error("unexpected extra row at line {line}")]
    ExtraRow { line: usize },
}

/// A `(d+1)`-colored graph of even order `2p`, immutable after construction.
#[derive(Debug, Clone)]
pub struct ColoredGraph {
    dimension: usize,
    matchings: Vec<Vec<usize>>,
    bipartition: OnceLock<Option<Vec<bool>>>,
}

impl PartialEq for ColoredGraph {
    fn eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension && self.matchings == other.matchings
    }
}
impl Eq for ColoredGraph {}

impl ColoredGraph {
    /// Build and validate a graph from its involution table.
    pub fn new(dimension: usize, matchings: Vec<Vec<usize>>) -> Result<Self, GemError> {
        if matchings.len() != dimension + 1 {
            return Err(GemError::MissingRows { expected: dimension + 1, got: matchings.len() });
        }
        let order = matchings.first().map(Vec::len).unwrap_or(0);
        if order == 0 || order % 2 != 0 {
            return Err(GemError::BadOrder { line: 0, order: order as i64 });
        }
        for (c, row) in matchings.iter().enumerate() {
            if row.len() != order {
                return Err(GemError::WrongRowLength {
                    line: 0,
                    color: c,
                    got: row.len(),
                    expected: order,
                });
            }
            for (v, &w) in row.iter().enumerate() {
                if w >= order {
                    return Err(GemError::EntryOutOfRange { line: 0, vertex: w, order });
                }
                if w == v {
                    return Err(GemError::FixedPointInMatching { color: c, vertex: v });
                }
                if row[w] != v {
                    return Err(GemError::NotAnInvolution { color: c, vertex: v });
                }
            }
        }
        Ok(ColoredGraph { dimension, matchings, bipartition: OnceLock::new() })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of colors, `d + 1`.
    pub fn num_colors(&self) -> usize {
        self.dimension + 1
    }

    /// Number of vertices `2p`.
    pub fn order(&self) -> usize {
        self.matchings[0].len()
    }

    /// Half the order, `p`.
    pub fn half_order(&self) -> usize {
        self.order() / 2
    }

    /// The vertex `c`-adjacent to `v`.
    pub fn neighbor(&self, color: usize, v: usize) -> usize {
        self.matchings[color][v]
    }

    pub fn matchings(&self) -> &[Vec<usize>] {
        &self.matchings
    }

    pub fn all_colors(&self) -> ColorMask {
        full_mask(self.dimension)
    }

    /// Connected components of the spanning subgraph with edge colors in `mask`.
    ///
    /// Every vertex belongs to some component (isolated vertices count when
    /// `mask` selects none of their colors, matching `g_emptyset = 2p`).
    pub fn residues(&self, mask: ColorMask) -> Residues {
        let n = self.order();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            stack.push(start);
            while let Some(v) = stack.pop() {
                for c in 0..self.num_colors() {
                    if mask & (1 << c) != 0 {
                        let w = self.matchings[c][v];
                        if comp[w] == usize::MAX {
                            comp[w] = count;
                            stack.push(w);
                        }
                    }
                }
            }
            count += 1;
        }
        Residues { mask, count, component: comp }
    }

    /// `g_B`: the number of components of the subgraph colored by `mask`.
    pub fn residue_count(&self, mask: ColorMask) -> usize {
        self.residues(mask).count
    }

    pub fn is_connected(&self) -> bool {
        self.residue_count(self.all_colors()) == 1
    }

    /// Extract one `B`-residue as a standalone colored graph.
    ///
    /// Colors in `mask` are renumbered to `0..|B|` in increasing order.  The
    /// returned map sends new vertex indices back to vertices of `self`.
    /// Requires `|B| >= 2`.
    pub fn residue_graph(&self, residues: &Residues, comp: usize) -> (ColoredGraph, Vec<usize>) {
        let colors: Vec<usize> =
            (0..self.num_colors()).filter(|c| residues.mask & (1 << c) != 0).collect();
        assert!(colors.len() >= 2, "residue extraction needs at least two colors");
        let verts: Vec<usize> =
            (0..self.order()).filter(|&v| residues.component[v] == comp).collect();
        let mut index = HashMap::new();
        for (i, &v) in verts.iter().enumerate() {
            index.insert(v, i);
        }
        let matchings = colors
            .iter()
            .map(|&c| verts.iter().map(|&v| index[&self.matchings[c][v]]).collect())
            .collect();
        let g = ColoredGraph::new(colors.len() - 1, matchings)
            .expect("residue of a valid gem is a valid gem");
        (g, verts)
    }

    /// Vertex-induced subgraph on one component of the full graph.
    pub fn component_graph(&self, comp_of: &Residues, comp: usize) -> (ColoredGraph, Vec<usize>) {
        debug_assert_eq!(comp_of.mask, self.all_colors());
        self.residue_graph(comp_of, comp)
    }

    /// 2-coloring of the vertices if the multigraph is bipartite.
    pub fn bipartition(&self) -> Option<&[bool]> {
        self.bipartition
            .get_or_init(|| {
                let n = self.order();
                let mut side = vec![None; n];
                let mut stack = Vec::new();
                for start in 0..n {
                    if side[start].is_some() {
                        continue;
                    }
                    side[start] = Some(false);
                    stack.push(start);
                    while let Some(v) = stack.pop() {
                        let sv = side[v].unwrap();
                        for c in 0..self.num_colors() {
                            let w = self.matchings[c][v];
                            match side[w] {
                                None => {
                                    side[w] = Some(!sv);
                                    stack.push(w);
                                }
                                Some(sw) if sw == sv => return None,
                                _ => {}
                            }
                        }
                    }
                }
                Some(side.into_iter().map(|s| s.unwrap()).collect())
            })
            .as_deref()
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Relabel vertices: vertex `v` of `self` becomes `perm[v]`.
    pub fn relabel_vertices(&self, perm: &[usize]) -> ColoredGraph {
        let n = self.order();
        assert_eq!(perm.len(), n);
        let mut matchings = vec![vec![0; n]; self.num_colors()];
        for c in 0..self.num_colors() {
            for v in 0..n {
                matchings[c][perm[v]] = perm[self.matchings[c][v]];
            }
        }
        ColoredGraph::new(self.dimension, matchings).expect("relabeling preserves validity")
    }

    /// Recolor edges: color `c` of `self` becomes `perm[c]`.
    pub fn permute_colors(&self, perm: &[usize]) -> ColoredGraph {
        assert_eq!(perm.len(), self.num_colors());
        let mut matchings = vec![Vec::new(); self.num_colors()];
        for c in 0..self.num_colors() {
            matchings[perm[c]] = self.matchings[c].clone();
        }
        ColoredGraph::new(self.dimension, matchings).expect("recoloring preserves validity")
    }

    /// Deterministic vertex relabeling certificate.
    ///
    /// Each vertex has exactly one neighbor per color, so a root vertex
    /// determines a unique breadth-first labeling of its component; the
    /// certificate is the lexicographic minimum of the relabeled involution
    /// table over all roots (and, with `mod_colors`, over all color
    /// permutations).  Certificates are equal iff the graphs are isomorphic
    /// under the chosen equivalence.
    pub fn canonical_form(&self, mod_colors: bool) -> CanonicalForm {
        let comps = self.residues(self.all_colors());
        let code = if comps.count == 1 {
            canonical_code_connected(self, mod_colors)
        } else {
            let mut parts: Vec<Vec<u32>> = (0..comps.count)
                .map(|i| {
                    let (g, _) = self.component_graph(&comps, i);
                    canonical_code_connected(&g, mod_colors)
                })
                .collect();
            parts.sort();
            let mut code = Vec::new();
            for part in parts {
                code.push(part.len() as u32);
                code.extend(part);
            }
            code
        };
        CanonicalForm { dimension: self.dimension, mod_colors, code }
    }

    /// The canonically relabeled graph itself (connected graphs only).
    pub fn canonicalize(&self, mod_colors: bool) -> ColoredGraph {
        assert!(self.is_connected());
        self.canonical_form(mod_colors).to_graph()
    }
}

/// A computed residue partition for one color subset.
#[derive(Debug, Clone)]
pub struct Residues {
    pub mask: ColorMask,
    pub count: usize,
    /// Component id (0-based, in order of least vertex) per vertex.
    pub component: Vec<usize>,
}

impl Residues {
    pub fn vertices_of(&self, comp: usize) -> Vec<usize> {
        (0..self.component.len()).filter(|&v| self.component[v] == comp).collect()
    }
}

/// Cached residue counts `g_B` for every color subset of a graph.
#[derive(Debug, Clone)]
pub struct ResidueTable {
    counts: Vec<usize>,
}

impl ResidueTable {
    pub fn new(g: &ColoredGraph) -> Self {
        let masks = 1usize << g.num_colors();
        let counts = (0..masks).map(|m| g.residue_count(m as ColorMask)).collect();
        ResidueTable { counts }
    }

    pub fn count(&self, mask: ColorMask) -> usize {
        self.counts[mask as usize]
    }
}

/// Vertex-relabeling (optionally color-permuting) isomorphism certificate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub dimension: usize,
    pub mod_colors: bool,
    pub code: Vec<u32>,
}

impl CanonicalForm {
    /// Short hex digest for indexes and reports.
    pub fn digest(&self) -> String {
        // FNV-1a over the code words; collisions are irrelevant at desk scale
        // because equality checks always use the full code.
        let mut h: u64 = 0xcbf29ce484222325;
        for &w in &self.code {
            for b in w.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        }
        format!("{h:016x}")
    }

    /// Rebuild the representative graph from a connected-graph certificate.
    pub fn to_graph(&self) -> ColoredGraph {
        let k = self.dimension + 1;
        assert_eq!(self.code.len() % k, 0, "certificate must be a single component");
        let n = self.code.len() / k;
        let matchings = (0..k)
            .map(|c| (0..n).map(|v| self.code[c * n + v] as usize).collect())
            .collect();
        ColoredGraph::new(self.dimension, matchings).expect("certificate encodes a valid gem")
    }
}

fn rooted_code(g: &ColoredGraph, root: usize, color_order: &[usize], out: &mut Vec<u32>) {
    let n = g.order();
    let mut label = vec![u32::MAX; n];
    let mut order = Vec::with_capacity(n);
    label[root] = 0;
    order.push(root);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &c in color_order {
            let w = g.matchings[c][v];
            if label[w] == u32::MAX {
                label[w] = order.len() as u32;
                order.push(w);
            }
        }
    }
    debug_assert_eq!(order.len(), n, "rooted code requires a connected graph");
    out.clear();
    for &c in color_order {
        for &v in &order {
            out.push(label[g.matchings[c][v]]);
        }
    }
}

fn canonical_code_connected(g: &ColoredGraph, mod_colors: bool) -> Vec<u32> {
    let identity: Vec<usize> = (0..g.num_colors()).collect();
    let mut best: Option<Vec<u32>> = None;
    let mut scratch = Vec::new();
    let mut consider = |g: &ColoredGraph, color_order: &[usize], best: &mut Option<Vec<u32>>| {
        for root in 0..g.order() {
            rooted_code(g, root, color_order, &mut scratch);
            if best.as_ref().map_or(true, |b| scratch < *b) {
                *best = Some(scratch.clone());
            }
        }
    };
    if mod_colors {
        // restrict to color orders minimizing the permuted pair-residue-count
        // matrix; the certificate is then (that minimum, best rooted code),
        // with the first component equal across candidates and elided
        let k = g.num_colors();
        let mut pair_counts = vec![vec![0usize; k]; k];
        for a in 0..k {
            for b in a + 1..k {
                let counts = g.residue_count((1 << a) | (1 << b));
                pair_counts[a][b] = counts;
                pair_counts[b][a] = counts;
            }
        }
        let mut min_key: Option<Vec<usize>> = None;
        let mut contenders = Vec::new();
        for perm in permutations(k) {
            let mut key = Vec::with_capacity(k * (k - 1) / 2);
            for a in 0..k {
                for b in a + 1..k {
                    key.push(pair_counts[perm[a]][perm[b]]);
                }
            }
            match &min_key {
                Some(best_key) if key > *best_key => {}
                Some(best_key) if key == *best_key => contenders.push(perm),
                _ => {
                    min_key = Some(key);
                    contenders = vec![perm];
                }
            }
        }
        for perm in &contenders {
            consider(g, perm, &mut best);
        }
    } else {
        consider(g, &identity, &mut best);
    }
    best.expect("graph has at least one vertex")
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut result = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        result.push(current.clone());
        // next_permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    result
}

/// Disjoint-set forest over vertex indices, for cheap component counting on
/// raw matching tables.
pub(crate) struct Dsu(Vec<usize>);

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    /// Merge the classes of `a` and `b`; true when they were distinct.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
        ra != rb
    }
}

/// Components of the union of raw matchings on `n` vertices.
pub(crate) fn matching_components(matchings: &[&[usize]], n: usize) -> usize {
    let mut dsu = Dsu::new(n);
    let mut comps = n;
    for m in matchings {
        for v in 0..n {
            if dsu.union(v, m[v]) {
                comps -= 1;
            }
        }
    }
    comps
}

/// All perfect matchings of `0..n` as involution tables, generated by pairing
/// the least unmatched vertex with every larger partner in ascending order.
pub fn perfect_matchings(n: usize) -> Vec<Vec<usize>> {
    assert!(n % 2 == 0, "perfect matchings need an even vertex count");
    fn extend(table: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(i) = table.iter().position(|&x| x == usize::MAX) else {
            out.push(table.clone());
            return;
        };
        for j in i + 1..table.len() {
            if table[j] == usize::MAX {
                table[i] = j;
                table[j] = i;
                extend(table, out);
                table[i] = usize::MAX;
                table[j] = usize::MAX;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut vec![usize::MAX; n], &mut out);
    out
}

/// Parse the gem text format.
///
/// Line 1 is `gem <d> <2p>`; the following `d+1` lines hold the matchings in
/// color order, `2p` whitespace-separated 0-based indices each.  `#` starts a
/// comment, blank lines are ignored.
pub fn parse_gem(text: &str) -> Result<ColoredGraph, GemError> {
    let mut rows: Vec<(usize, Vec<&str>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        rows.push((idx + 1, line.split_whitespace().collect()));
    }
    let Some((hline, header)) = rows.first() else {
        return Err(GemError::MalformedHeader { line: 1 });
    };
    if header.len() != 3 || header[0] != "gem" {
        return Err(GemError::MalformedHeader { line: *hline });
    }
    let dim: i64 =
        header[1].parse().map_err(|_| GemError::MalformedHeader { line: *hline })?;
    let order: i64 =
        header[2].parse().map_err(|_| GemError::MalformedHeader { line: *hline })?;
    if dim < 1 {
        return Err(GemError::BadDimension { line: *hline, dim });
    }
    if order < 2 || order % 2 != 0 {
        return Err(GemError::BadOrder { line: *hline, order });
    }
    let (dim, order) = (dim as usize, order as usize);
    let body = &rows[1..];
    if body.len() < dim + 1 {
        return Err(GemError::MissingRows { expected: dim + 1, got: body.len() });
    }
    if body.len() > dim + 1 {
        return Err(GemError::ExtraRow { line: body[dim + 1].0 });
    }
    let mut matchings = Vec::with_capacity(dim + 1);
    for (c, (lineno, tokens)) in body.iter().enumerate() {
        if tokens.len() != order {
            return Err(GemError::WrongRowLength {
                line: *lineno,
                color: c,
                got: tokens.len(),
                expected: order,
            });
        }
        let mut row = Vec::with_capacity(order);
        for tok in tokens {
            let v: usize = tok
                .parse()
                .map_err(|_| GemError::BadEntry { line: *lineno, token: tok.to_string() })?;
            if v >= order {
                return Err(GemError::EntryOutOfRange { line: *lineno, vertex: v, order });
            }
            row.push(v);
        }
        // involution / fixed-point errors get the line number attached here
        for (v, &w) in row.iter().enumerate() {
            if w == v {
                return Err(GemError::FixedPointInMatching { color: c, vertex: v });
            }
            if row[w] != v {
                return Err(GemError::NotAnInvolution { color: c, vertex: v });
            }
        }
        matchings.push(row);
    }
    ColoredGraph::new(dim, matchings)
}

/// Canonical text rendering; `parse_gem` round-trips with it byte-for-byte.
pub fn serialize_gem(g: &ColoredGraph) -> String {
    let mut out = String::new();
    writeln!(out, "gem {} {}", g.dimension(), g.order()).unwrap();
    for row in g.matchings() {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sphere2(d: usize) -> ColoredGraph {
        ColoredGraph::new(d, vec![vec![1, 0]; d + 1]).unwrap()
    }

    #[test]
    fn order_two_gem_parses() {
        let g = parse_gem("gem 4 2\n1 0\n1 0\n1 0\n1 0\n1 0\n").unwrap();
        assert_eq!(g.dimension(), 4);
        assert_eq!(g.order(), 2);
        assert!(g.is_connected());
        assert!(g.is_bipartite());
    }

    #[test]
    fn fixed_point_rejected() {
        let err = parse_gem("gem 1 2\n1 0\n0 1\n").unwrap_err();
        assert!(matches!(err, GemError::FixedPointInMatching { color: 1, vertex: 0 }));
    }

    #[test]
    fn out_of_range_rejected() {
        let err = parse_gem("gem 1 2\n1 0\n2 0\n").unwrap_err();
        assert!(matches!(err, GemError::EntryOutOfRange { line: 3, vertex: 2, .. }));
    }

    #[test]
    fn non_involution_rejected() {
        let err = parse_gem("gem 1 4\n1 0 3 2\n1 2 3 0\n").unwrap_err();
        assert!(matches!(err, GemError::NotAnInvolution { color: 1, .. }));
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let g = parse_gem("# a gem\ngem 2 2 # trailing\n\n1 0\n1 0\n1 0\n").unwrap();
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn serialize_round_trip() {
        let text = "gem 4 2\n1 0\n1 0\n1 0\n1 0\n1 0\n";
        let g = parse_gem(text).unwrap();
        assert_eq!(serialize_gem(&g), text);
        assert_eq!(parse_gem(&serialize_gem(&g)).unwrap(), g);
    }

    #[test]
    fn residue_counts_on_order_two() {
        let g = sphere2(4);
        let table = ResidueTable::new(&g);
        assert_eq!(table.count(0), 2); // g_emptyset = 2p
        assert_eq!(table.count(0b1), 1); // one color: p components
        assert_eq!(table.count(0b11), 1);
        assert_eq!(table.count(full_mask(4)), 1);
    }

    #[test]
    fn certificate_invariant_under_relabeling() {
        let g = parse_gem("gem 2 4\n1 0 3 2\n3 2 1 0\n2 3 0 1\n").unwrap();
        let perm = vec![2, 0, 3, 1];
        let h = g.relabel_vertices(&perm);
        assert_eq!(g.canonical_form(false), h.canonical_form(false));
        assert_eq!(g.canonical_form(true), h.canonical_form(true));
    }

    #[test]
    fn color_swap_needs_mod_colors() {
        // g_{02} = 3 but g_{12} = 1, so swapping colors 0 and 1 cannot be
        // undone by a vertex relabeling
        let g = parse_gem("gem 2 6\n1 0 3 2 5 4\n3 4 5 0 1 2\n1 0 3 2 5 4\n").unwrap();
        let h = g.permute_colors(&[1, 0, 2]);
        assert_eq!(g.canonical_form(true), h.canonical_form(true));
        assert_ne!(g.canonical_form(false), h.canonical_form(false));
    }

    #[test]
    fn rp2_gem_is_non_bipartite() {
        // three pairwise-distinct perfect matchings on 4 vertices
        let g = parse_gem("gem 2 4\n1 0 3 2\n2 3 0 1\n3 2 1 0\n").unwrap();
        assert!(!g.is_bipartite());
        assert!(g.is_connected());
    }
}
