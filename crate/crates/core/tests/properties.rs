use proptest::prelude::*;

use pinned_walkers::involution::{involution, marked_paths};
use pinned_walkers::motzkin::{phi_plus, phi_plus_inverse, MotzkinPath};
use pinned_walkers::path::{coupling_defect, degree, gamma_minus, gamma_plus, neighbors, twice_area, PathZ, StepShape};
use pinned_walkers::sim::{rng_from_seed, Walker};

fn path_strategy() -> impl Strategy<Value = PathZ> {
    (-50i64..50, prop::collection::vec(prop::bool::ANY, 1..=14)).prop_map(|(z1, ups)| {
        let steps = ups.into_iter().map(|u| if u { 1 } else { -1 }).collect();
        StepShape::new(steps).unwrap().to_path(z1).unwrap()
    })
}

proptest! {
    #[test]
    fn neighbours_keep_gap_and_split_by_direction(z in path_strategy()) {
        let all = neighbors(&z);
        prop_assert_eq!(all.len() as u128, degree(&z));
        prop_assert_eq!(all.len(), gamma_plus(&z).len() + gamma_minus(&z).len());
        for w in &all {
            prop_assert_eq!(w.gap(), z.gap());
            prop_assert!(w.heights().iter().zip(z.heights()).all(|(a, b)| (a - b).abs() == 1));
        }
    }

    #[test]
    fn area_generator_vanishes(z in path_strategy()) {
        let base = twice_area(&z).value();
        let sum: i128 = neighbors(&z).iter().map(|w| twice_area(w).value() - base).sum();
        prop_assert_eq!(sum, 0);
    }

    #[test]
    fn coupling_defect_is_translation_invariant(z in path_strategy(), t in -20i64..20) {
        prop_assert_eq!(coupling_defect(&z), coupling_defect(&z.translate(t).unwrap()));
    }

    #[test]
    fn phi_plus_round_trips(z in path_strategy()) {
        for zp in gamma_plus(&z) {
            let m: MotzkinPath = phi_plus(&z, &zp).unwrap();
            prop_assert_eq!(phi_plus_inverse(z.first(), &m).unwrap(), (z.clone(), zp));
        }
    }

    #[test]
    fn involution_is_sign_reversing(z in path_strategy()) {
        for m in marked_paths(&z) {
            let im = involution(&m).unwrap();
            prop_assert_eq!(im.sign(), -m.sign());
            prop_assert_eq!(involution(&im).unwrap(), m);
        }
    }

    #[test]
    fn walker_moves_to_neighbours(z in path_strategy(), seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let mut w = Walker::from_path(&z);
        for _ in 0..20 {
            let before = w.path();
            w.step(&mut rng);
            let after = w.path();
            prop_assert!(neighbors(&before).contains(&after));
            prop_assert_eq!(w.twice_area(), twice_area(&after).value());
        }
    }
}
