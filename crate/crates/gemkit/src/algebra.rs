//! Fundamental-group presentations read off a gem, their abelianizations,
//! and exact integer linear algebra (Smith normal form) to certify first
//! homology.
//!
//! Two classical recipes are implemented.  In the vertex-pair form the
//! generators correspond to the components of the subgraph missing two colors
//! `i, j`, and every `{i,j}`-colored cycle contributes a relator with
//! alternating signs; a maximal tree of the bipartite incidence structure
//! between the `hat-i` and `hat-j` residues kills one generator per tree
//! edge.  In the edge form the generators are the `i`-colored edges
//! themselves and every `{i,j}`-colored cycle (for every `j`) contributes a
//! relator; a minimal set of `i`-edges connecting the `hat-i` residues is
//! killed.  Which compact space the resulting group belongs to depends on
//! which colors are non-singular; both readings are recorded.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::graph::ColoredGraph;
use crate::moves::{color_sphere_status, SphereStatus};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("fundamental group needs a connected graph")]
    Disconnected,
    #[error("color {0} out of range for dimension {1}")]
    BadColor(usize, usize),
    #[error("hypothesis violated: color {0} is singular (or not recognizably spherical)")]
    SingularColor(usize),
    #[error("no admissible presentation: too many singular colors")]
    NoAdmissibleVariant,
    #[error("boundary is disconnected ({0} non-sphere residue components)")]
    DisconnectedBoundary(usize),
}

/// Which recipe produced a presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresentationVariant {
    /// Generators from components missing colors `i` and `j`.
    VertexPair { i: usize, j: usize },
    /// Generators from the `i`-colored edges.
    Edge { i: usize },
}

/// A finite group presentation with words stored as signed 1-based
/// generator indices (`+k` for generator `k-1`, `-k` for its inverse).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    pub num_generators: usize,
    pub relators: Vec<Vec<i64>>,
    /// Generators (0-based) killed by the maximal tree / connecting set;
    /// these also appear in `relators` as one-letter words.
    pub tree_generators: Vec<usize>,
    pub variant: PresentationVariant,
    /// The group is the fundamental group of the associated compact
    /// manifold (boundary capped off as singular vertices removed).
    pub valid_for_compact: bool,
    /// The group is the fundamental group of the singular manifold itself.
    pub valid_for_singular: bool,
}

impl GroupPresentation {
    /// Freely and cyclically reduce every relator, then drop empty ones.
    pub fn free_reduce(&mut self) {
        for w in &mut self.relators {
            let mut out: Vec<i64> = Vec::with_capacity(w.len());
            for &x in w.iter() {
                if out.last() == Some(&-x) {
                    out.pop();
                } else {
                    out.push(x);
                }
            }
            while out.len() >= 2 && *out.first().unwrap() == -*out.last().unwrap() {
                out.pop();
                out.remove(0);
            }
            *w = out;
        }
        self.relators.retain(|w| !w.is_empty());
    }

    /// Eliminate tree-killed generators and renumber the rest.
    pub fn tree_reduced(&self) -> GroupPresentation {
        let killed: Vec<bool> = {
            let mut k = vec![false; self.num_generators];
            for &t in &self.tree_generators {
                k[t] = true;
            }
            k
        };
        let mut remap = vec![0i64; self.num_generators];
        let mut next = 0i64;
        for g in 0..self.num_generators {
            if !killed[g] {
                next += 1;
                remap[g] = next;
            }
        }
        let relators = self
            .relators
            .iter()
            .map(|w| {
                w.iter()
                    .filter(|&&x| !killed[(x.unsigned_abs() as usize) - 1])
                    .map(|&x| x.signum() * remap[(x.unsigned_abs() as usize) - 1])
                    .collect::<Vec<i64>>()
            })
            .filter(|w: &Vec<i64>| !w.is_empty())
            .collect();
        GroupPresentation {
            num_generators: next as usize,
            relators,
            tree_generators: Vec::new(),
            variant: self.variant,
            valid_for_compact: self.valid_for_compact,
            valid_for_singular: self.valid_for_singular,
        }
    }

    /// Relator-exponent matrix of the abelianization (rows = relators).
    pub fn abelianized_matrix(&self) -> Vec<Vec<BigInt>> {
        self.relators
            .iter()
            .map(|w| {
                let mut row = vec![BigInt::zero(); self.num_generators];
                for &x in w {
                    let g = (x.unsigned_abs() as usize) - 1;
                    row[g] += BigInt::from(x.signum());
                }
                row
            })
            .collect()
    }

    /// `gens n` followed by one relator per line as signed indices.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "gens {}", self.num_generators);
        for w in &self.relators {
            let parts: Vec<String> = w.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "{}", parts.join(" "));
        }
        out
    }
}

/// Isomorphism invariants of a finitely generated abelian group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    /// Invariant factors > 1 in divisibility order `d1 | d2 | ...`.
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        AbelianInvariants { free_rank: 0, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn cyclic(n: u64) -> Self {
        assert!(n != 1);
        if n == 0 {
            AbelianInvariants { free_rank: 1, torsion: Vec::new() }
        } else {
            AbelianInvariants { free_rank: 0, torsion: vec![BigInt::from(n)] }
        }
    }

    /// Minimal number of generators.
    pub fn rank(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Compact rendering such as `Z + Z/2`, or `0` for the trivial group.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for _ in 0..self.free_rank {
            parts.push("Z".to_string());
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

fn check_colors(g: &ColoredGraph, cols: &[usize]) -> Result<(), AlgebraError> {
    for &c in cols {
        if c >= g.num_colors() {
            return Err(AlgebraError::BadColor(c, g.dimension()));
        }
    }
    Ok(())
}

/// True when every residue missing color `c` is a recognized sphere.
fn color_known_nonsingular(g: &ColoredGraph, c: usize) -> bool {
    matches!(color_sphere_status(g, c), SphereStatus::Sphere)
}

/// A presentation of the fundamental group from colors `i, j` (vertex-pair
/// variant) or from color `i` alone (edge variant, `j` ignored).
pub fn pi1_presentation(
    g: &ColoredGraph,
    i: usize,
    j: usize,
    variant: PresentationVariant,
) -> Result<GroupPresentation, AlgebraError> {
    if !g.is_connected() {
        return Err(AlgebraError::Disconnected);
    }
    match variant {
        PresentationVariant::VertexPair { .. } => {
            check_colors(g, &[i, j])?;
            assert_ne!(i, j, "vertex-pair presentation needs two distinct colors");
            vertex_pair_presentation(g, i, j)
        }
        PresentationVariant::Edge { .. } => {
            check_colors(g, &[i])?;
            edge_presentation(g, i)
        }
    }
}

fn vertex_pair_presentation(
    g: &ColoredGraph,
    i: usize,
    j: usize,
) -> Result<GroupPresentation, AlgebraError> {
    let full = g.all_colors();
    let valid_for_compact = color_known_nonsingular(g, i) && color_known_nonsingular(g, j);
    let valid_for_singular = (0..g.num_colors())
        .filter(|&c| c != i && c != j)
        .all(|c| color_known_nonsingular(g, c));
    if !valid_for_compact && !valid_for_singular {
        let bad = if !color_known_nonsingular(g, i) { i } else { j };
        return Err(AlgebraError::SingularColor(bad));
    }

    // generators: components missing colors i and j
    let gen_res = g.residues(full & !(1 << i) & !(1 << j));
    let num_generators = gen_res.count;
    // incidence of each generator with the hat-i and hat-j residues
    let res_i = g.residues(full & !(1 << i));
    let res_j = g.residues(full & !(1 << j));

    // maximal tree of the bipartite structure (hat-i comps) -- (hat-j comps),
    // edges indexed by generators; BFS over generator indices in order
    let mut rep = vec![usize::MAX; num_generators];
    for v in 0..g.order() {
        let c = gen_res.component[v];
        if rep[c] == usize::MAX {
            rep[c] = v;
        }
    }
    let mut seen_i = vec![false; res_i.count];
    let mut seen_j = vec![false; res_j.count];
    let mut tree_generators = Vec::new();
    // Kruskal-style forest: a generator edge joins its hat-i and hat-j nodes
    let mut parent: Vec<usize> = (0..res_i.count + res_j.count).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for gidx in 0..num_generators {
        let v = rep[gidx];
        let a = res_i.component[v];
        let b = res_i.count + res_j.component[v];
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            tree_generators.push(gidx);
            seen_i[res_i.component[v]] = true;
            seen_j[res_j.component[v]] = true;
        }
    }

    // relators: one per {i,j}-colored cycle, alternating signs along the walk
    let mut relators = Vec::new();
    let cycles = g.residues((1 << i) | (1 << j));
    let mut cycle_start = vec![usize::MAX; cycles.count];
    for v in 0..g.order() {
        let c = cycles.component[v];
        if cycle_start[c] == usize::MAX {
            cycle_start[c] = v;
        }
    }
    for &start in &cycle_start {
        let mut word = Vec::new();
        let mut v = start;
        let mut sign = 1i64;
        loop {
            word.push(sign * (gen_res.component[v] as i64 + 1));
            // alternate: leave on color i when sign is +, on color j when -
            let next = if sign > 0 { g.neighbor(i, v) } else { g.neighbor(j, v) };
            sign = -sign;
            v = next;
            if v == start && sign > 0 {
                break;
            }
        }
        relators.push(word);
    }
    for &t in &tree_generators {
        relators.push(vec![t as i64 + 1]);
    }
    Ok(GroupPresentation {
        num_generators,
        relators,
        tree_generators,
        variant: PresentationVariant::VertexPair { i, j },
        valid_for_compact,
        valid_for_singular,
    })
}

fn edge_presentation(g: &ColoredGraph, i: usize) -> Result<GroupPresentation, AlgebraError> {
    let full = g.all_colors();
    let valid_for_compact = color_known_nonsingular(g, i);
    let valid_for_singular = (0..g.num_colors())
        .filter(|&c| c != i)
        .all(|c| color_known_nonsingular(g, c));
    if !valid_for_compact && !valid_for_singular {
        return Err(AlgebraError::SingularColor(i));
    }

    // generators: i-colored edges, oriented from the lower-indexed endpoint;
    // indexed by their lower endpoint in increasing order
    let mut edge_index = HashMap::new();
    let mut num_generators = 0usize;
    for v in 0..g.order() {
        if v < g.neighbor(i, v) {
            edge_index.insert(v, num_generators);
            num_generators += 1;
        }
    }
    let gen_of = |v: usize| -> (usize, i64) {
        let w = g.neighbor(i, v);
        if v < w {
            (edge_index[&v], 1)
        } else {
            (edge_index[&w], -1)
        }
    };

    // minimal connecting set: spanning forest of the quotient by hat-i comps
    let res_i = g.residues(full & !(1 << i));
    let mut parent: Vec<usize> = (0..res_i.count).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut tree_generators = Vec::new();
    for v in 0..g.order() {
        let w = g.neighbor(i, v);
        if v < w {
            let (a, b) = (res_i.component[v], res_i.component[w]);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                tree_generators.push(edge_index[&v]);
            }
        }
    }

    // relators: {i,j}-cycles for every other color j, words in the i-edges
    let mut relators = Vec::new();
    for j in 0..g.num_colors() {
        if j == i {
            continue;
        }
        let cycles = g.residues((1 << i) | (1 << j));
        let mut cycle_start = vec![usize::MAX; cycles.count];
        for v in 0..g.order() {
            let c = cycles.component[v];
            if cycle_start[c] == usize::MAX {
                cycle_start[c] = v;
            }
        }
        for &start in &cycle_start {
            let mut word = Vec::new();
            let mut v = start;
            loop {
                let (gidx, sgn) = gen_of(v);
                word.push(sgn * (gidx as i64 + 1));
                let v2 = g.neighbor(i, v); // cross the i-edge
                v = g.neighbor(j, v2); // then the j-edge
                if v == start {
                    break;
                }
            }
            relators.push(word);
        }
    }
    for &t in &tree_generators {
        relators.push(vec![t as i64 + 1]);
    }
    Ok(GroupPresentation {
        num_generators,
        relators,
        tree_generators,
        variant: PresentationVariant::Edge { i },
        valid_for_compact,
        valid_for_singular,
    })
}

/// Result of a Smith normal form computation: `u * m * v = d` with `u`, `v`
/// unimodular and `d` diagonal with a divisibility chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub d: Vec<Vec<BigInt>>,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.len().min(self.d.first().map_or(0, |r| r.len()));
        (0..n).map(|t| self.d[t][t].clone()).collect()
    }

    /// Abelian invariants of the cokernel of the original matrix, given its
    /// number of columns (generators).
    pub fn cokernel(&self, num_generators: usize) -> AbelianInvariants {
        let diag = self.diagonal();
        let nonzero = diag.iter().filter(|x| !x.is_zero()).count();
        let torsion = diag.iter().filter(|x| x.abs() > BigInt::one()).map(|x| x.abs()).collect();
        AbelianInvariants { free_rank: num_generators - nonzero, torsion }
    }
}

/// Smith normal form over the integers with exact big-integer arithmetic.
pub fn smith_normal_form(m: &[Vec<BigInt>]) -> SmithDecomposition {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut d: Vec<Vec<BigInt>> = m.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| (0..rows).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut v: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();

    let swap_rows = |d: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, a: usize, b: usize| {
        d.swap(a, b);
        u.swap(a, b);
    };
    let swap_cols = |d: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, a: usize, b: usize| {
        for row in d.iter_mut() {
            row.swap(a, b);
        }
        for row in v.iter_mut() {
            row.swap(a, b);
        }
    };

    let n = rows.min(cols);
    for t in 0..n {
        'pivot: loop {
            // minimal nonzero entry of the trailing submatrix
            let mut best: Option<(usize, usize)> = None;
            for r in t..rows {
                for c in t..cols {
                    if !d[r][c].is_zero()
                        && best.map_or(true, |(br, bc)| d[r][c].abs() < d[br][bc].abs())
                    {
                        best = Some((r, c));
                    }
                }
            }
            let Some((pr, pc)) = best else { break 'pivot };
            if pr != t {
                swap_rows(&mut d, &mut u, t, pr);
            }
            if pc != t {
                swap_cols(&mut d, &mut v, t, pc);
            }

            let mut clean = true;
            for r in t + 1..rows {
                if !d[r][t].is_zero() {
                    let q = &d[r][t] / &d[t][t];
                    if !q.is_zero() {
                        for c in 0..cols {
                            let sub = &q * &d[t][c];
                            d[r][c] -= sub;
                        }
                        for c in 0..rows {
                            let sub = &q * &u[t][c];
                            u[r][c] -= sub;
                        }
                    }
                    if !d[r][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for c in t + 1..cols {
                if !d[t][c].is_zero() {
                    let q = &d[t][c] / &d[t][t];
                    if !q.is_zero() {
                        for r in 0..rows {
                            let sub = &q * &d[r][t];
                            d[r][c] -= sub;
                        }
                        for r in 0..cols {
                            let sub = &q * &v[r][t];
                            v[r][c] -= sub;
                        }
                    }
                    if !d[t][c].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold in a violating row and retry
            let mut violator = None;
            'search: for r in t + 1..rows {
                for c in t + 1..cols {
                    if !(&d[r][c] % &d[t][t]).is_zero() {
                        violator = Some(r);
                        break 'search;
                    }
                }
            }
            match violator {
                Some(r) => {
                    for c in 0..cols {
                        let add = d[r][c].clone();
                        d[t][c] += add;
                    }
                    for c in 0..rows {
                        let add = u[r][c].clone();
                        u[t][c] += add;
                    }
                }
                None => break 'pivot,
            }
        }
        if d[t][t].is_negative() {
            for c in 0..cols {
                d[t][c] = -d[t][c].clone();
            }
            for c in 0..rows {
                u[t][c] = -u[t][c].clone();
            }
        }
    }
    SmithDecomposition { d, u, v }
}

/// First homology of the compact manifold encoded by `g`, computed from the
/// first admissible presentation (vertex-pair variants over color pairs in
/// lexicographic order, then edge variants).
pub fn first_homology(g: &ColoredGraph) -> Result<AbelianInvariants, AlgebraError> {
    if !g.is_connected() {
        return Err(AlgebraError::Disconnected);
    }
    let k = g.num_colors();
    let status: Vec<bool> = (0..k).map(|c| color_known_nonsingular(g, c)).collect();
    let mut choice = None;
    'outer: for i in 0..k {
        for j in i + 1..k {
            if status[i] && status[j] {
                choice = Some((i, j));
                break 'outer;
            }
        }
    }
    let Some((i, j)) = choice else {
        return Err(AlgebraError::NoAdmissibleVariant);
    };
    let pres = pi1_presentation(g, i, j, PresentationVariant::VertexPair { i, j })?;
    Ok(abelianized(&pres))
}

/// Abelian invariants of a presentation's abelianization.
pub fn abelianized(pres: &GroupPresentation) -> AbelianInvariants {
    let m = pres.abelianized_matrix();
    if m.is_empty() {
        return AbelianInvariants { free_rank: pres.num_generators, torsion: Vec::new() };
    }
    smith_normal_form(&m).cokernel(pres.num_generators)
}

/// Minimal number of generators of first homology: a lower bound for the
/// rank of the fundamental group.  Requires empty or connected boundary.
pub fn rank_lower_bound(g: &ColoredGraph) -> Result<usize, AlgebraError> {
    let mut boundary_pieces = 0usize;
    for c in 0..g.num_colors() {
        match color_sphere_status(g, c) {
            SphereStatus::Sphere => {}
            _ => {
                let res = g.residues(g.all_colors() & !(1 << c));
                boundary_pieces += res.count;
            }
        }
    }
    if boundary_pieces > 1 {
        return Err(AlgebraError::DisconnectedBoundary(boundary_pieces));
    }
    Ok(first_homology(g)?.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_gem;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn snf_check(m: &[Vec<BigInt>]) -> SmithDecomposition {
        let s = smith_normal_form(m);
        // re-multiply: u * m * v must equal d
        let rows = m.len();
        let cols = m[0].len();
        let mut um = vec![vec![BigInt::zero(); cols]; rows];
        for i in 0..rows {
            for j in 0..cols {
                for k in 0..rows {
                    let t = &s.u[i][k] * &m[k][j];
                    um[i][j] += t;
                }
            }
        }
        let mut umv = vec![vec![BigInt::zero(); cols]; rows];
        for i in 0..rows {
            for j in 0..cols {
                for k in 0..cols {
                    let t = &um[i][k] * &s.v[k][j];
                    umv[i][j] += t;
                }
            }
        }
        assert_eq!(umv, s.d, "transforms do not re-multiply to the diagonal form");
        // diagonal with divisibility chain
        for (i, row) in s.d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i != j {
                    assert!(x.is_zero());
                }
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[0].is_zero() && !w[1].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "no divisibility chain: {diag:?}");
            }
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            }
        }
        s
    }

    /// Invariant factors via gcds of k-minors: an independent route.
    fn minor_gcd_factors(m: &[Vec<BigInt>]) -> Vec<BigInt> {
        let rows = m.len();
        let cols = m[0].len();
        let n = rows.min(cols);
        fn det(m: &[Vec<BigInt>], rs: &[usize], cs: &[usize]) -> BigInt {
            if rs.len() == 1 {
                return m[rs[0]][cs[0]].clone();
            }
            let mut acc = BigInt::zero();
            for (k, &c) in cs.iter().enumerate() {
                let sub_cs: Vec<usize> =
                    cs.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &x)| x).collect();
                let term = &m[rs[0]][c] * det(m, &rs[1..], &sub_cs);
                if k % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            let mut cur = Vec::new();
            fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                if cur.len() == k {
                    out.push(cur.clone());
                    return;
                }
                for i in start..n {
                    cur.push(i);
                    rec(i + 1, n, k, cur, out);
                    cur.pop();
                }
            }
            rec(0, n, k, &mut cur, &mut out);
            out
        }
        let mut dets = vec![BigInt::one()]; // d_0 = 1
        for k in 1..=n {
            let mut gk = BigInt::zero();
            for rs in subsets(rows, k) {
                for cs in subsets(cols, k) {
                    gk = num_integer::Integer::gcd(&gk, &det(m, &rs, &cs));
                }
            }
            dets.push(gk.clone());
            if gk.is_zero() {
                break;
            }
        }
        let mut factors = Vec::new();
        for k in 1..dets.len() {
            if dets[k].is_zero() {
                break;
            }
            factors.push(&dets[k] / &dets[k - 1]);
        }
        factors
    }

    #[test]
    fn snf_simple_cases() {
        let s = snf_check(&big(&[&[2, 0], &[0, 0]]));
        assert_eq!(s.cokernel(2), AbelianInvariants::cyclic(2).with_free(1));
        let id = big(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let s = snf_check(&id);
        assert!(s.cokernel(3).is_trivial());
    }

    impl AbelianInvariants {
        fn with_free(mut self, r: usize) -> Self {
            self.free_rank += r;
            self
        }
    }

    #[test]
    fn snf_matches_minor_gcd_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let m: Vec<Vec<BigInt>> = (0..6)
                .map(|_| (0..8).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect())
                .collect();
            let s = snf_check(&m);
            let nonzero: Vec<BigInt> =
                s.diagonal().into_iter().filter(|x| !x.is_zero()).collect();
            assert_eq!(nonzero, minor_gcd_factors(&m), "disagrees with minor-gcd oracle");
        }
    }

    #[test]
    fn order_two_gem_trivial_group() {
        let g = ColoredGraph::new(3, vec![vec![1, 0]; 4]).unwrap();
        for (i, j) in [(0usize, 1usize), (1, 3), (2, 3)] {
            let pres = pi1_presentation(&g, i, j, PresentationVariant::VertexPair { i, j }).unwrap();
            assert_eq!(pres.num_generators, 1);
            assert_eq!(pres.tree_generators.len(), 1);
            assert!(abelianized(&pres).is_trivial());
        }
        let pres = pi1_presentation(&g, 0, 0, PresentationVariant::Edge { i: 0 }).unwrap();
        assert!(abelianized(&pres).is_trivial());
        assert!(first_homology(&g).unwrap().is_trivial());
    }

    #[test]
    fn projective_plane_homology() {
        let g = parse_gem("gem 2 4\n1 0 3 2\n2 3 0 1\n3 2 1 0\n").unwrap();
        assert_eq!(first_homology(&g).unwrap(), AbelianInvariants::cyclic(2));
        // every admissible variant agrees at the homology level
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let pres =
                    pi1_presentation(&g, i, j, PresentationVariant::VertexPair { i, j }).unwrap();
                assert_eq!(abelianized(&pres), AbelianInvariants::cyclic(2), "pair ({i},{j})");
            }
            let pres = pi1_presentation(&g, i, 0, PresentationVariant::Edge { i }).unwrap();
            assert_eq!(abelianized(&pres), AbelianInvariants::cyclic(2), "edge {i}");
        }
    }

    #[test]
    fn torus_homology() {
        let g = parse_gem("gem 2 6\n1 0 3 2 5 4\n5 2 1 4 3 0\n3 4 5 0 1 2\n").unwrap();
        let h = first_homology(&g).unwrap();
        assert_eq!(h, AbelianInvariants { free_rank: 2, torsion: vec![] });
        for i in 0..3 {
            let pres = pi1_presentation(&g, i, 0, PresentationVariant::Edge { i }).unwrap();
            assert_eq!(abelianized(&pres).render(), "Z + Z", "edge {i}");
        }
        assert_eq!(rank_lower_bound(&g).unwrap(), 2);
    }

    #[test]
    fn presentation_serialization() {
        let g = ColoredGraph::new(2, vec![vec![1, 0]; 3]).unwrap();
        let pres = pi1_presentation(&g, 0, 1, PresentationVariant::VertexPair { i: 0, j: 1 }).unwrap();
        let text = pres.render();
        assert!(text.starts_with("gens 1\n"));
    }
}
