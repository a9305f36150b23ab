use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use postsel_core::context::{abl_distribution, Context};
use postsel_core::kinematics::{born_distribution, evolve};
use postsel_core::linalg::{unitarity_defect, unitary_exponential, ComplexMatrix};
use postsel_core::pointer::{rebase_joint, spreading_sigma, JointState, SpreadingModel};
use postsel_core::random::{random_basis, random_decomposition, random_hermitian, random_state};
use postsel_core::scenario::format_number;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn born_sums_to_one(seed in any::<u64>(), dim in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_state(dim, &mut rng);
        let d = born_distribution(&s, &random_decomposition(dim, &mut rng)).unwrap();
        prop_assert!((d.probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evolution_is_unitary_and_composes(seed in any::<u64>(), dim in 1usize..5, t1 in -3.0f64..3.0, t2 in -3.0f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(dim, 1.0, &mut rng);
        let u1 = unitary_exponential(&h, t1).unwrap();
        prop_assert!(unitarity_defect(u1.matrix()) < 1e-10);
        let s = random_state(dim, &mut rng);
        let stepwise = evolve(&evolve(&s, &h, t1).unwrap(), &h, t2).unwrap();
        let direct = evolve(&s, &h, t1 + t2).unwrap();
        prop_assert!(stepwise.ray_distance(&direct) < 1e-10);
    }

    #[test]
    fn abl_is_a_distribution(seed in any::<u64>(), dim in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = Context::static_abc(
            random_state(dim, &mut rng),
            random_decomposition(dim, &mut rng),
            random_decomposition(dim, &mut rng),
            "c0",
        ).unwrap();
        let d = abl_distribution(&ctx).unwrap();
        prop_assert!(d.probabilities().iter().all(|&p| (0.0..=1.0).contains(&p)));
        prop_assert!((d.probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rebase_preserves_total_weight(seed in any::<u64>(), ds in 1usize..4, da in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chi = random_state(ds * da, &mut rng);
        let joint = JointState::from_amplitudes(ComplexMatrix::new(ds, da, chi.into_amplitudes()).unwrap()).unwrap();
        let r = rebase_joint(&joint, &random_basis(da, &mut rng)).unwrap();
        let total: f64 = r.coefficients.iter().map(|c| c * c).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        prop_assert!(r.reconstruct().max_abs_diff(&joint.amplitudes()) < 1e-10);
        prop_assert!((0.0..=1.0).contains(&r.orthogonality_score));
    }

    #[test]
    fn spreading_monotone(sigma0 in 0.01f64..10.0, m in 0.01f64..100.0, t in 0.0f64..1e4, dt in 0.0f64..1e3) {
        let model = SpreadingModel::new(sigma0, m).unwrap();
        let heavier = SpreadingModel::new(sigma0, 2.0 * m).unwrap();
        let s = spreading_sigma(&model, t).unwrap();
        prop_assert!(spreading_sigma(&model, t + dt).unwrap() >= s);
        prop_assert!(spreading_sigma(&heavier, t).unwrap() <= s);
        prop_assert!(s >= sigma0);
    }

    #[test]
    fn formatted_numbers_parse_back(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let back: f64 = format_number(x).parse().unwrap();
        if x == 0.0 {
            prop_assert_eq!(back, 0.0);
        } else {
            prop_assert!(((back - x) / x).abs() < 5e-12);
        }
    }
}
