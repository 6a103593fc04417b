//! Enumerates small 3-dimensional crystallizations and tabulates the
//! resulting isomorphism classes by order, regular genus and first homology.
//!
//! Usage: census_tour [MAX_ORDER]    (default 8, must be even)

use std::collections::BTreeMap;

use gemkit::census::{enumerate, CensusQuery};

fn main() {
    let max_order: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("MAX_ORDER must be a number"))
        .unwrap_or(8);

    let mut query = CensusQuery::new(3, max_order);
    query.manifold_filter = true;
    query.crystallizations_only = true;
    query.closed_only = true;
    let census = enumerate(&query).expect("desk-scale query");

    // (order, genus, homology) -> class count
    let mut table: BTreeMap<(usize, String, String), usize> = BTreeMap::new();
    for class in &census.classes {
        let h1 = class.h1.as_ref().map_or_else(|| "?".into(), |h| h.render());
        let key = (class.report.order, class.report.regular_genus.to_string(), h1);
        *table.entry(key).or_default() += 1;
    }

    println!("closed 3-dimensional crystallizations up to order {max_order}");
    println!("{:>5} {:>6} {:<10} {:>7}", "order", "genus", "H_1", "classes");
    for ((order, genus, h1), count) in &table {
        println!("{order:>5} {genus:>6} {h1:<10} {count:>7}");
    }
    println!(
        "\n{} classes total, {} inconclusive (quarantined)",
        census.classes.len(),
        census.quarantine.len()
    );
}
