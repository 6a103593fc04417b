//! Command-line front end: batch access to parsing, invariants, moves,
//! constructions, census enumeration, classification and the catalog.
//!
//! Exit codes: 0 on success, 1 on a domain failure (bad input graph, failed
//! recognition, identity violation, IO), 2 on a usage error.  All output is
//! plain text, deterministic for a fixed `--seed` and independent of
//! `--jobs`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gemkit::algebra::first_homology;
use gemkit::catalog::{catalog_entries, catalog_load, CATALOG_ENV};
use gemkit::census::{enumerate, index_tsv, write_census, CensusQuery};
use gemkit::classify::{classify, degree_anomalies};
use gemkit::constructions::{
    disk_bundle_gem, handlebody_gem, interior_sum, interval_product, lens_space_gem,
    sphere_bundle_gem_3, sphere_bundle_gem_4, sphere_gem,
};
use gemkit::graph::{parse_gem, serialize_gem, ColoredGraph};
use gemkit::invariants::{
    verify_identities, IdentityAssumptions, IdentityStatus, InvariantReport,
};
use gemkit::moves::{
    manifold_check, recognize_sphere_seeded, reduce_to_crystallization, render_moves, Certificate,
    ManifoldCheck, Verdict, DEFAULT_MOVE_BUDGET,
};

#[derive(Parser)]
#[command(name = "gemkit", version, about = "edge-colored gems: invariants, moves, censuses")]
struct Cli {
    /// Seed for randomized searches; output is deterministic per seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Budget for bounded move searches (recognition).
    #[arg(long, global = true, default_value_t = DEFAULT_MOVE_BUDGET)]
    budget: usize,
    /// Worker threads; the output does not depend on this.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a gem file and check that it encodes a singular manifold.
    Validate { file: PathBuf },
    /// Print the invariant report (genus spectrum, degree, homology).
    Invariants { file: PathBuf },
    /// Eliminate proper 1-dipoles until every color has one residue.
    Reduce {
        file: PathBuf,
        /// Write the reduced gem here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Bounded sphere recognition; exits 1 when the budget is exhausted.
    Recognize { file: PathBuf },
    /// Build a gem from one of the library families.
    Construct(ConstructArgs),
    /// Enumerate small gems up to isomorphism and print a TSV index.
    Census(CensusArgs),
    /// Match a 5-colored gem against the dimension-4 classification.
    Classify { file: PathBuf },
    /// Instantiate every applicable combinatorial identity on a gem.
    VerifyIdentities {
        file: PathBuf,
        /// Additionally assume the gem represents a sphere.
        #[arg(long)]
        assume_sphere: bool,
    },
    /// List the built-in catalog, or show one entry.
    Catalog {
        /// Entry name, e.g. "Y4_1"; omit to list all entries.
        name: Option<String>,
        /// With a name: print the gem itself instead of the summary.
        #[arg(long)]
        gem: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Tsv,
}

#[derive(Args)]
struct ConstructArgs {
    family: Family,
    /// Dimension, for families defined in every dimension.
    #[arg(long)]
    d: Option<usize>,
    /// Lens-space order (L(p,1)).
    #[arg(long)]
    p: Option<usize>,
    /// Disk-bundle parameter.
    #[arg(long)]
    c: Option<usize>,
    /// Handlebody rank.
    #[arg(long)]
    m: Option<usize>,
    /// Build the non-orientable (twisted) family member.
    #[arg(long)]
    twisted: bool,
    /// Input gem(s) for the derived constructions.
    #[arg(long)]
    input: Vec<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// Order-two d-sphere gem (--d).
    Sphere,
    /// Order-4p lens space L(p,1) (--p).
    Lens,
    /// S^2-bundle over S^1, dimension 3 (--twisted for the twisted one).
    S2Bundle,
    /// S^3-bundle over S^1, dimension 4 (--twisted).
    S3Bundle,
    /// Dimension-4 handlebody of rank m (--m, --twisted).
    Handlebody,
    /// Disk bundle over the 2-sphere (--c).
    DiskBundle,
    /// Product of a closed gem with an interval (--input).
    ProductI,
    /// Interior connected sum of two gems (--input twice).
    InteriorSum,
}

/// Domain failure (exit 1) or post-parse usage error (exit 2).
enum CliError {
    Domain(String),
    Usage(String),
}

impl CliError {
    fn domain(e: impl std::fmt::Display) -> Self {
        CliError::Domain(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // deliberately ignore failure: the pool may already exist in tests
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(msg)) => {
            eprintln!("gemkit: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("gemkit: usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_gem(path: &Path) -> Result<ColoredGraph, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
    parse_gem(&text).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

fn emit(gem: &ColoredGraph, output: &Option<PathBuf>) -> Result<(), CliError> {
    let text = serialize_gem(gem);
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Domain(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Validate { file } => validate(file),
        Command::Invariants { file } => invariants(file),
        Command::Reduce { file, output } => reduce(file, output),
        Command::Recognize { file } => recognize(file, cli.budget, cli.seed),
        Command::Construct(args) => construct(args),
        Command::Census(args) => census(args),
        Command::Classify { file } => run_classify(file),
        Command::VerifyIdentities { file, assume_sphere } => identities(file, *assume_sphere),
        Command::Catalog { name, gem, format } => catalog(name.as_deref(), *gem, *format),
    }
}

fn validate(file: &Path) -> Result<(), CliError> {
    let g = read_gem(file)?;
    println!("dimension: {}", g.dimension());
    println!("order: {}", g.order());
    println!("connected: {}", g.is_connected());
    println!("bipartite: {}", g.is_bipartite());
    let crystallization = g.is_connected()
        && (0..g.num_colors()).all(|c| g.residue_count(g.all_colors() & !(1 << c)) == 1);
    println!("crystallization: {crystallization}");
    match manifold_check(&g) {
        ManifoldCheck::SingularManifold { singular_colors, singular_residues } => {
            if singular_colors.is_empty() {
                println!("manifold: closed");
            } else {
                let cs: Vec<String> = singular_colors.iter().map(|c| c.to_string()).collect();
                println!("manifold: singular at colors {}", cs.join(" "));
                println!("boundary-components: {}", singular_residues.len());
            }
            Ok(())
        }
        ManifoldCheck::NotManifold { witness } => {
            println!("manifold: no ({witness})");
            Err(CliError::Domain("not a singular manifold".into()))
        }
        ManifoldCheck::Unknown { detail } => {
            println!("manifold: unknown ({detail})");
            Err(CliError::Domain("manifold check inconclusive".into()))
        }
    }
}

fn invariants(file: &Path) -> Result<(), CliError> {
    let g = read_gem(file)?;
    let mut report = InvariantReport::compute(&g);
    if let ManifoldCheck::SingularManifold { singular_colors, .. } = manifold_check(&g) {
        report = report.with_singular_colors(singular_colors);
    }
    print!("{}", report.render());
    if let Ok(h1) = first_homology(&g) {
        println!("first-homology: {}", h1.render());
    }
    Ok(())
}

fn reduce(file: &Path, output: &Option<PathBuf>) -> Result<(), CliError> {
    let g = read_gem(file)?;
    let red = reduce_to_crystallization(&g);
    eprint!("{}", render_moves(&red.moves));
    eprintln!("moves: {}", red.moves.len());
    eprintln!("complete: {}", red.complete);
    emit(&red.graph, output)
}

fn recognize(file: &Path, budget: usize, seed: u64) -> Result<(), CliError> {
    let g = read_gem(file)?;
    let res = recognize_sphere_seeded(&g, budget, seed);
    match &res.verdict {
        Verdict::Sphere => println!("verdict: sphere"),
        Verdict::NotSphere(reason) => println!("verdict: not-sphere ({reason})"),
        Verdict::Unknown => println!("verdict: unknown"),
    }
    match &res.certificate {
        Certificate::GenusZero => println!("certificate: genus-zero"),
        Certificate::MoveSequence(moves) => println!("certificate: {} moves", moves.len()),
        Certificate::Obstruction(o) => println!("certificate: obstruction ({o})"),
        Certificate::None => println!("certificate: none"),
    }
    match res.verdict {
        Verdict::Unknown => Err(CliError::Domain("budget exhausted without a verdict".into())),
        _ => Ok(()),
    }
}

fn need<T: Copy>(opt: Option<T>, flag: &str) -> Result<T, CliError> {
    opt.ok_or_else(|| CliError::Usage(format!("this family requires {flag}")))
}

fn construct(args: &ConstructArgs) -> Result<(), CliError> {
    let orientable = !args.twisted;
    let gem = match args.family {
        Family::Sphere => sphere_gem(need(args.d, "--d")?),
        Family::Lens => lens_space_gem(need(args.p, "--p")?),
        Family::S2Bundle => sphere_bundle_gem_3(orientable),
        Family::S3Bundle => sphere_bundle_gem_4(orientable).map_err(CliError::domain)?,
        Family::Handlebody => {
            handlebody_gem(args.d.unwrap_or(4), need(args.m, "--m")?, orientable)
                .map_err(CliError::domain)?
        }
        Family::DiskBundle => disk_bundle_gem(need(args.c, "--c")?).map_err(CliError::domain)?,
        Family::ProductI => {
            let [input] = args.input.as_slice() else {
                return Err(CliError::Usage("product-i takes exactly one --input".into()));
            };
            interval_product(&read_gem(input)?).map_err(CliError::domain)?
        }
        Family::InteriorSum => {
            let [a, b] = args.input.as_slice() else {
                return Err(CliError::Usage("interior-sum takes exactly two --input".into()));
            };
            interior_sum(&read_gem(a)?, &read_gem(b)?).map_err(CliError::domain)?
        }
    };
    emit(&gem, &args.output)
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    max_order: usize,
    /// Keep only crystallizations.
    #[arg(long)]
    crystallizations: bool,
    /// Keep only classes passing the singular-manifold check.
    #[arg(long)]
    manifolds: bool,
    /// Keep only closed-manifold classes.
    #[arg(long)]
    closed: bool,
    /// Keep only bipartite gems.
    #[arg(long)]
    bipartite: bool,
    /// Distinguish classes that differ only by a color permutation.
    #[arg(long)]
    labeled_colors: bool,
    /// Allow orders beyond the desk-scale default.
    #[arg(long)]
    force: bool,
    /// Also write one gem file per class plus index.tsv into this directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn census(args: &CensusArgs) -> Result<(), CliError> {
    let mut q = CensusQuery::new(args.d, args.max_order);
    q.crystallizations_only = args.crystallizations;
    q.manifold_filter = args.manifolds || args.closed;
    q.closed_only = args.closed;
    q.bipartite_only = args.bipartite;
    q.mod_colors = !args.labeled_colors;
    q.force = args.force;
    let census = enumerate(&q).map_err(CliError::domain)?;
    print!("{}", index_tsv(&census));
    eprintln!("classes: {}", census.classes.len());
    eprintln!("quarantined: {}", census.quarantine.len());
    if let Some(dir) = &args.out {
        write_census(&census, dir).map_err(CliError::domain)?;
    }
    Ok(())
}

fn run_classify(file: &Path) -> Result<(), CliError> {
    let g = read_gem(file)?;
    let report = InvariantReport::compute(&g);
    let h1 = first_homology(&g).map_err(CliError::domain)?;
    let c = classify(&g, &report, &h1).map_err(CliError::domain)?;
    print!("{}", c.render());
    for a in degree_anomalies(&report) {
        eprintln!("degree anomaly: {a}");
    }
    Ok(())
}

fn identities(file: &Path, assume_sphere: bool) -> Result<(), CliError> {
    let g = read_gem(file)?;
    let mut assume = IdentityAssumptions { sphere: assume_sphere, ..Default::default() };
    if let ManifoldCheck::SingularManifold { singular_colors, .. } = manifold_check(&g) {
        assume.singular_manifold = true;
        assume.singular_colors = Some(singular_colors);
    }
    let report = verify_identities(&g, &assume);
    let mut pass = 0;
    let mut skipped = 0;
    for check in &report.checks {
        match &check.status {
            IdentityStatus::Pass => pass += 1,
            IdentityStatus::Skipped { .. } => skipped += 1,
            IdentityStatus::Fail { lhs, rhs } => {
                println!("fail: {} [{}] {lhs} != {rhs}", check.id, check.instance);
            }
        }
    }
    let failures = report.failures().len();
    println!("pass: {pass}");
    println!("fail: {failures}");
    println!("skipped: {skipped}");
    for a in &report.assumed {
        println!("assumed: {a}");
    }
    if failures > 0 {
        Err(CliError::Domain(format!("{failures} identity instantiations failed")))
    } else {
        Ok(())
    }
}

fn catalog(name: Option<&str>, gem: bool, format: Format) -> Result<(), CliError> {
    match name {
        Some(name) => {
            let entry = catalog_load(name).map_err(CliError::domain)?;
            if gem {
                print!("{}", serialize_gem(&entry.graph));
                return Ok(());
            }
            println!("name: {}", entry.name);
            println!("file: {}", entry.file);
            println!("provenance: {}", entry.provenance.as_str());
            println!("dimension: {}", entry.expected.dimension);
            println!("order: {}", entry.expected.order);
            println!("bipartite: {}", entry.expected.bipartite);
            println!("regular-genus: {}", entry.expected.regular_genus);
            println!("gurau-degree: {}", entry.expected.gurau_degree);
            println!("euler-characteristic: {}", entry.expected.euler_characteristic);
            println!("first-homology: {}", entry.expected.h1);
            let sing: Vec<String> =
                entry.expected.singular_colors.iter().map(|c| c.to_string()).collect();
            println!(
                "singular-colors: {}",
                if sing.is_empty() { "none".to_string() } else { sing.join(" ") }
            );
            println!("notes: {}", entry.notes);
            Ok(())
        }
        None => {
            let entries = catalog_entries().map_err(CliError::domain)?;
            if format == Format::Tsv {
                println!("name\tdimension\torder\tbipartite\tgenus\tdegree\th1\tsingular");
            }
            for e in &entries {
                let sing: Vec<String> =
                    e.expected.singular_colors.iter().map(|c| c.to_string()).collect();
                let sing = if sing.is_empty() { "none".to_string() } else { sing.join(",") };
                match format {
                    Format::Tsv => println!(
                        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                        e.name,
                        e.expected.dimension,
                        e.expected.order,
                        e.expected.bipartite,
                        e.expected.regular_genus,
                        e.expected.gurau_degree,
                        e.expected.h1,
                        sing
                    ),
                    Format::Text => println!(
                        "{} (d={}, order {}, genus {}, degree {}, H1 = {})",
                        e.name,
                        e.expected.dimension,
                        e.expected.order,
                        e.expected.regular_genus,
                        e.expected.gurau_degree,
                        e.expected.h1
                    ),
                }
            }
            let _ = CATALOG_ENV; // documented override; resolution happens in the library
            Ok(())
        }
    }
}
