//! Enumerate the six partition families and cross-check their counts
//! against the known closed forms.
//!
//!     cargo run --example enumerate_families

use partition_cumulants::families::{self, FamilyId, DEFAULT_ENUMERATION_CAP};

fn main() {
    let cap = DEFAULT_ENUMERATION_CAP;

    println!("members of each family on {{1..4}}:");
    for family in FamilyId::ALL_FAMILIES {
        let members = families::enumerate(family, 4, cap).unwrap();
        let shown: Vec<String> = members.iter().map(|p| p.to_string()).collect();
        println!("  {family:<22} ({:>2}): {}", members.len(), shown.join("  "));
    }

    println!("\ncounts for n = 1..10 (computed vs closed form):");
    for family in FamilyId::ALL_FAMILIES {
        print!("  {family:<22}");
        for n in 1..=10 {
            let count = families::cardinality(family, n, cap).unwrap();
            match family.closed_form_count(n) {
                Some(cf) => assert_eq!(count, cf, "{family} at n={n}"),
                None => {} // almost-cyclic-interval has no known closed form
            }
            print!(" {count}");
        }
        println!();
    }

    // the almost-interval family walks up the odd-indexed Fibonacci numbers
    let fibs: Vec<u64> = (1..=8)
        .map(|n| families::cardinality(FamilyId::AlmostInterval, n, cap).unwrap())
        .collect();
    println!("\nalmost-interval counts: {fibs:?}");
}
