use frobmor::harness::{random_chain, random_chain_map, random_module, trial_rng};
use frobmor::io::{chain_from_json, chain_map_from_json, chain_map_to_json, chain_to_json};
use frobmor::stable::{are_stably_isomorphic, sigma, sigma_inv, stable_hom};
use frobmor::{LambdaModule, Matrix};
use proptest::prelude::*;

const PRIMES: [u32; 4] = [2, 3, 5, 7];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_nullity(rows in 1usize..6, cols in 1usize..6, pi in 0usize..4, seed in any::<u64>()) {
        let p = PRIMES[pi];
        let mut rng = trial_rng(seed, "matrix", 0);
        let m = Matrix::from_flat(rows, cols, p, (0..rows * cols).map(|_| rand::Rng::gen_range(&mut rng, 0..p)).collect());
        let k = m.kernel_basis();
        prop_assert_eq!(m.rank() + k.cols(), cols);
        prop_assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn loops_reverse_block_sizes(n in 2usize..6, seed in any::<u64>()) {
        let m = random_module(n, 5, 6, &mut trial_rng(seed, "module", 0));
        let mut want: Vec<usize> = m.jordan_type().into_iter().filter(|&a| a < n).map(|a| n - a).collect();
        want.sort_unstable_by(|a, b| b.cmp(a));
        let mut got = m.loop_module().stable_type();
        got.sort_unstable_by(|a, b| b.cmp(a));
        prop_assert_eq!(got, want);
        prop_assert_eq!(m.loop_module().loop_module().stable_type(), m.stable_type());
    }

    #[test]
    fn chains_survive_json(n in 2usize..4, l in 0usize..4, seed in any::<u64>()) {
        let mut rng = trial_rng(seed, "json", 0);
        let x = random_chain(n, l, 3, 5, &mut rng);
        let y = random_chain(n, l, 3, 5, &mut rng);
        let f = random_chain_map(&x, &y, &mut rng);
        prop_assert_eq!(chain_from_json(&chain_to_json(&x)).unwrap(), x);
        prop_assert_eq!(chain_map_from_json(&chain_map_to_json(&f)).unwrap(), f);
    }

    #[test]
    fn suspension_is_invertible_and_preserves_stable_hom(n in 2usize..4, l in 0usize..3, seed in any::<u64>()) {
        let mut rng = trial_rng(seed, "sigma", 0);
        let x = random_chain(n, l, 5, 5, &mut rng);
        let y = random_chain(n, l, 5, 5, &mut rng);
        prop_assert!(are_stably_isomorphic(&sigma_inv(&sigma(&x)), &x));
        prop_assert!(are_stably_isomorphic(&sigma(&sigma_inv(&x)), &x));
        prop_assert_eq!(stable_hom(&sigma(&x), &sigma(&y)).stable_dim(), stable_hom(&x, &y).stable_dim());
    }

    #[test]
    fn free_modules_are_stably_zero(n in 2usize..5, rank in 0usize..3) {
        let f = LambdaModule::free(n, rank, 5);
        prop_assert!(f.is_projective());
        prop_assert!(f.stable_type().is_empty());
    }
}
