mod common;

use common::oracle::{check_chains, check_modules};

#[test]
fn modules_every_pair_up_to_dimension_four() {
    let pairs = check_modules(41).unwrap();
    assert!(pairs > 100, "{pairs}");
}

#[test]
fn chains_up_to_total_dimension_eight() {
    let (pairs, nonzero) = check_chains(43, 15).unwrap();
    assert_eq!(pairs, 120);
    assert!(nonzero > 0, "every sampled stable Hom vanished");
}
