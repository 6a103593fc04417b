//! Frozen catalog of reference gems: spheres, lens spaces, sphere bundles
//! over the circle, handlebodies and their sums, disk bundles over the
//! 2-sphere, interval products and the complex projective plane.
//!
//! The catalog is a directory of gem files plus a line-oriented manifest of
//! `key: value` blocks separated by blank lines.  A copy is embedded in the
//! binary; the `GEMKIT_CATALOG` environment variable points lookups at an
//! external directory instead.  Every load recomputes the invariants of the
//! stored graph and fails hard on any disagreement with the manifest, so a
//! corrupted catalog cannot be read silently.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::first_homology;
use crate::graph::{parse_gem, ColoredGraph, GemError};
use crate::invariants::{HalfInt, InvariantReport};
use crate::moves::{manifold_check, ManifoldCheck};

/// How a catalog entry was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Written down directly from a standard construction.
    Transcribed,
    /// Produced by a library constructor (possibly a bounded search) and
    /// admitted after its expected invariants passed.
    DerivedByConstruction,
    /// Extracted from an exhaustive census by its invariant signature.
    DerivedByCensus,
}

impl Provenance {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "transcribed" => Some(Provenance::Transcribed),
            "derived-by-construction" => Some(Provenance::DerivedByConstruction),
            "derived-by-census" => Some(Provenance::DerivedByCensus),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Transcribed => "transcribed",
            Provenance::DerivedByConstruction => "derived-by-construction",
            Provenance::DerivedByCensus => "derived-by-census",
        }
    }
}

/// Invariants recorded in the manifest, re-verified on every load.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectedInvariants {
    pub dimension: usize,
    pub order: usize,
    pub bipartite: bool,
    pub regular_genus: HalfInt,
    pub gurau_degree: HalfInt,
    pub euler_characteristic: i64,
    /// Rendered first homology, e.g. `0`, `Z`, `Z/2`, `Z + Z`.
    pub h1: String,
    /// Singular colors; empty for closed manifolds.
    pub singular_colors: Vec<usize>,
}

/// One validated catalog entry.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub file: String,
    pub provenance: Provenance,
    pub notes: String,
    pub expected: ExpectedInvariants,
    pub graph: ColoredGraph,
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog directory {0}: {1}")]
    Io(String, std::io::Error),
    #[error("manifest block {block}: {detail}")]
    Manifest { block: usize, detail: String },
    #[error("no catalog entry named {0:?}")]
    Missing(String),
    #[error("entry {name}: stored {field} is {expected} but the graph has {actual}")]
    Mismatch { name: String, field: &'static str, expected: String, actual: String },
    #[error("entry {name}: {detail}")]
    Invalid { name: String, detail: String },
    #[error(transparent)]
    Gem(#[from] GemError),
}

/// Environment variable naming an external catalog directory.
pub const CATALOG_ENV: &str = "GEMKIT_CATALOG";

macro_rules! embedded {
    ($($file:literal),* $(,)?) => {
        &[$(($file, include_str!(concat!("../data/catalog/", $file)))),*]
    };
}

static EMBEDDED_MANIFEST: &str = include_str!("../data/catalog/manifest.txt");
static EMBEDDED_FILES: &[(&str, &str)] = embedded![
    "s2.gem",
    "s3.gem",
    "s4.gem",
    "s5.gem",
    "l21.gem",
    "l31.gem",
    "l41.gem",
    "l51.gem",
    "s1xs2.gem",
    "s1ts2.gem",
    "s1xs3.gem",
    "s1ts3.gem",
    "sum2s1xs3.gem",
    "sum2s1ts3.gem",
    "cp2.gem",
    "y41.gem",
    "ty41.gem",
    "y42.gem",
    "ty42.gem",
    "y41y41.gem",
    "y41ty41.gem",
    "ty41ty41.gem",
    "y41s1xs3.gem",
    "ty41s1xs3.gem",
    "lambda0.gem",
    "lambda2.gem",
    "lambda3.gem",
    "lambda4.gem",
    "l21xi.gem",
    "s1xs2xi.gem",
    "s1ts2xi.gem",
    "l31xi.gem",
];

/// Names of all catalog entries, in manifest order.
pub fn catalog_list() -> Result<Vec<String>, CatalogError> {
    Ok(parse_manifest(&read_manifest()?)?.into_iter().map(|b| b.name).collect())
}

/// Load one entry by name and re-verify its stored invariants.
pub fn catalog_load(name: &str) -> Result<CatalogEntry, CatalogError> {
    let blocks = parse_manifest(&read_manifest()?)?;
    let block = blocks
        .into_iter()
        .find(|b| b.name == name)
        .ok_or_else(|| CatalogError::Missing(name.to_string()))?;
    validate(block)
}

/// Load and validate the whole catalog, in manifest order.
pub fn catalog_entries() -> Result<Vec<CatalogEntry>, CatalogError> {
    parse_manifest(&read_manifest()?)?.into_iter().map(validate).collect()
}

struct RawBlock {
    name: String,
    file: String,
    provenance: Provenance,
    notes: String,
    expected: ExpectedInvariants,
}

fn external_dir() -> Option<std::path::PathBuf> {
    std::env::var_os(CATALOG_ENV).map(std::path::PathBuf::from)
}

fn read_manifest() -> Result<String, CatalogError> {
    match external_dir() {
        Some(dir) => std::fs::read_to_string(dir.join("manifest.txt"))
            .map_err(|e| CatalogError::Io(dir.display().to_string(), e)),
        None => Ok(EMBEDDED_MANIFEST.to_string()),
    }
}

fn read_gem_file(file: &str) -> Result<String, CatalogError> {
    match external_dir() {
        Some(dir) => std::fs::read_to_string(dir.join(file))
            .map_err(|e| CatalogError::Io(dir.display().to_string(), e)),
        None => EMBEDDED_FILES
            .iter()
            .find(|(name, _)| *name == file)
            .map(|(_, text)| text.to_string())
            .ok_or_else(|| CatalogError::Missing(file.to_string())),
    }
}

fn parse_half(s: &str) -> Option<HalfInt> {
    if let Some(doubled) = s.strip_suffix("/2") {
        doubled.parse().ok().map(HalfInt::from_doubled)
    } else {
        s.parse().ok().map(HalfInt::from_int)
    }
}

fn parse_manifest(text: &str) -> Result<Vec<RawBlock>, CatalogError> {
    let mut blocks = Vec::new();
    for (index, chunk) in text.split("\n\n").enumerate() {
        if chunk.trim().is_empty() {
            continue;
        }
        let fail = |detail: String| CatalogError::Manifest { block: index, detail };
        let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
        for line in chunk.lines() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| fail(format!("line {line:?} is not `key: value`")))?;
            if fields.insert(key.trim(), value.trim()).is_some() {
                return Err(fail(format!("duplicate key {key:?}")));
            }
        }
        let get = |key: &str| {
            fields.get(key).copied().ok_or_else(|| fail(format!("missing key {key:?}")))
        };
        let parse_num = |key: &str| {
            get(key)?.parse::<i64>().map_err(|_| fail(format!("bad integer for {key:?}")))
        };
        let singular = match get("singular")? {
            "none" => Vec::new(),
            list => list
                .split(',')
                .map(|c| c.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| fail("bad singular color list".to_string()))?,
        };
        blocks.push(RawBlock {
            name: get("name")?.to_string(),
            file: get("file")?.to_string(),
            provenance: Provenance::parse(get("provenance")?)
                .ok_or_else(|| fail("unknown provenance".to_string()))?,
            notes: get("notes")?.to_string(),
            expected: ExpectedInvariants {
                dimension: parse_num("dimension")? as usize,
                order: parse_num("order")? as usize,
                bipartite: get("bipartite")?
                    .parse()
                    .map_err(|_| fail("bad boolean for \"bipartite\"".to_string()))?,
                regular_genus: parse_half(get("genus")?)
                    .ok_or_else(|| fail("bad genus".to_string()))?,
                gurau_degree: parse_half(get("degree")?)
                    .ok_or_else(|| fail("bad degree".to_string()))?,
                euler_characteristic: parse_num("euler")?,
                h1: get("h1")?.to_string(),
                singular_colors: singular,
            },
        });
    }
    Ok(blocks)
}

fn validate(block: RawBlock) -> Result<CatalogEntry, CatalogError> {
    let graph = parse_gem(&read_gem_file(&block.file)?)?;
    let report = InvariantReport::compute(&graph);
    let expected = &block.expected;
    let mismatch = |field: &'static str, expected: String, actual: String| {
        Err(CatalogError::Mismatch { name: block.name.clone(), field, expected, actual })
    };
    if report.dimension != expected.dimension {
        return mismatch("dimension", expected.dimension.to_string(), report.dimension.to_string());
    }
    if report.order != expected.order {
        return mismatch("order", expected.order.to_string(), report.order.to_string());
    }
    if report.bipartite != expected.bipartite {
        return mismatch("parity", expected.bipartite.to_string(), report.bipartite.to_string());
    }
    if report.regular_genus != expected.regular_genus {
        return mismatch(
            "regular genus",
            expected.regular_genus.to_string(),
            report.regular_genus.to_string(),
        );
    }
    if report.gurau_degree != expected.gurau_degree {
        return mismatch(
            "degree",
            expected.gurau_degree.to_string(),
            report.gurau_degree.to_string(),
        );
    }
    if report.euler_characteristic != expected.euler_characteristic {
        return mismatch(
            "Euler characteristic",
            expected.euler_characteristic.to_string(),
            report.euler_characteristic.to_string(),
        );
    }
    let h1 = first_homology(&graph)
        .map_err(|e| CatalogError::Invalid { name: block.name.clone(), detail: e.to_string() })?
        .render();
    if h1 != expected.h1 {
        return mismatch("first homology", expected.h1.clone(), h1);
    }
    let singular = singular_colors_of(&graph)
        .map_err(|detail| CatalogError::Invalid { name: block.name.clone(), detail })?;
    if singular != expected.singular_colors {
        return mismatch(
            "singular colors",
            format!("{:?}", expected.singular_colors),
            format!("{singular:?}"),
        );
    }
    Ok(CatalogEntry {
        name: block.name,
        file: block.file,
        provenance: block.provenance,
        notes: block.notes,
        expected: block.expected,
        graph,
    })
}

fn singular_colors_of(graph: &ColoredGraph) -> Result<Vec<usize>, String> {
    // the recursive manifold check stops at dimension 4; the one catalog gem
    // beyond it is the order-two 5-sphere, closed by inspection
    if graph.order() == 2 {
        return Ok(Vec::new());
    }
    match manifold_check(graph) {
        ManifoldCheck::SingularManifold { singular_colors, .. } => Ok(singular_colors),
        other => Err(format!("not recognized as a singular manifold: {other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::HalfInt;

    // the directory override is a process-global environment variable, so
    // tests touching the catalog serialize on this lock
    static ENV_LOCK: std::sync::Mutex<()> = std::sync::Mutex::new(());

    #[test]
    fn every_embedded_entry_validates() {
        let _guard = ENV_LOCK.lock().unwrap();
        let entries = catalog_entries().expect("embedded catalog is consistent");
        assert_eq!(entries.len(), 32);
        let names = catalog_list().unwrap();
        assert_eq!(names.len(), entries.len());
        for (entry, name) in entries.iter().zip(&names) {
            assert_eq!(&entry.name, name);
        }
        // every embedded gem file is referenced exactly once
        let files: std::collections::BTreeSet<&str> =
            entries.iter().map(|e| e.file.as_str()).collect();
        assert_eq!(files.len(), EMBEDDED_FILES.len());
        for (file, _) in EMBEDDED_FILES {
            assert!(files.contains(file), "unreferenced embedded file {file}");
        }
    }

    #[test]
    fn named_loads_carry_the_published_invariants() {
        let _guard = ENV_LOCK.lock().unwrap();
        let lambda2 = catalog_load("Lambda_2").unwrap();
        assert_eq!(lambda2.expected.regular_genus, HalfInt::from_int(2));
        assert_eq!(lambda2.expected.gurau_degree, HalfInt::from_int(24));

        let lambda3 = catalog_load("Lambda_3").unwrap();
        assert_eq!(lambda3.expected.order, 12);
        assert_eq!(lambda3.expected.gurau_degree, HalfInt::from_int(36));

        let bundle = catalog_load("S1xS3").unwrap();
        assert_eq!(bundle.expected.order, 10);
        assert_eq!(bundle.expected.gurau_degree, HalfInt::from_int(12));
        assert_eq!(bundle.expected.h1, "Z");

        assert!(matches!(catalog_load("S1xS9"), Err(CatalogError::Missing(_))));
    }

    #[test]
    fn tampered_external_catalog_is_rejected() {
        // a corrupted copy of the catalog must fail validation, not load;
        // exercised through the directory override hook
        let _guard = ENV_LOCK.lock().unwrap();
        let dir = std::env::temp_dir().join("gemkit-tampered-catalog");
        std::fs::create_dir_all(&dir).unwrap();
        let manifest = EMBEDDED_MANIFEST.replacen("genus: 1", "genus: 0", 1);
        assert_ne!(manifest, EMBEDDED_MANIFEST);
        std::fs::write(dir.join("manifest.txt"), manifest).unwrap();
        for (file, text) in EMBEDDED_FILES {
            std::fs::write(dir.join(file), text).unwrap();
        }

        // the variable is process-global: restore it before asserting
        std::env::set_var(CATALOG_ENV, &dir);
        let result = catalog_entries();
        std::env::remove_var(CATALOG_ENV);
        let err = result.expect_err("tampered genus must be caught");
        assert!(matches!(err, CatalogError::Mismatch { field: "regular genus", .. }));
    }
}
