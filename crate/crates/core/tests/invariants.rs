use macpolar::channels::{combine_functionals, combine_minus, combine_plus, DiscreteBimc, DiscreteMac, GaussianMac};
use macpolar::construction::{select_frozen_sets, GenieEstimates, SlotEstimate};
use macpolar::mac_polar::{
    block_rates, enumerate_monotone_orders, exact_mac_bit_functionals, BlockOrder, Schedule, User,
};
use macpolar::polar::{exact_bit_channels, polar_transform_in_place, TransformOrder};
use macpolar::verification::JointEnumeration;
use proptest::prelude::*;

fn bimc() -> impl Strategy<Value = DiscreteBimc> {
    prop::collection::vec((0.01f64..1.0, 0.01f64..1.0), 1..5).prop_map(|pairs| {
        let (s0, s1): (f64, f64) = pairs.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
        DiscreteBimc::from_pairs(pairs.iter().map(|p| [p.0 / s0, p.1 / s1]).collect()).unwrap()
    })
}

fn mac(max_outputs: usize) -> impl Strategy<Value = DiscreteMac> {
    prop::collection::vec(prop::array::uniform4(0.01f64..1.0), 1..=max_outputs).prop_map(|rows| {
        let mut s = [0.0; 4];
        for r in &rows {
            for k in 0..4 {
                s[k] += r[k];
            }
        }
        DiscreteMac::from_outputs(rows.iter().map(|r| std::array::from_fn(|k| r[k] / s[k])).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encode_is_linear_involution(k in 0u32..7, seed in any::<u64>()) {
        let n = 1usize << k;
        let a: Vec<u8> = (0..n).map(|i| ((seed >> (i % 64)) & 1) as u8).collect();
        let b: Vec<u8> = (0..n).map(|i| ((seed.rotate_left(17) >> (i % 64)) & 1) as u8).collect();
        let enc = |v: &[u8]| { let mut x = v.to_vec(); polar_transform_in_place(&mut x); x };
        let sum: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let lin: Vec<u8> = enc(&a).iter().zip(enc(&b)).map(|(x, y)| x ^ y).collect();
        prop_assert_eq!(enc(&sum), lin);
        prop_assert_eq!(enc(&enc(&a)), a);
    }

    #[test]
    fn combine_conserves_information(w1 in bimc(), w2 in bimc()) {
        let m = combine_minus(&w1, &w2);
        let p = combine_plus(&w1, &w2);
        let total = w1.mutual_information() + w2.mutual_information();
        prop_assert!((m.mutual_information() + p.mutual_information() - total).abs() < 1e-10);
        prop_assert!((p.bhattacharyya() - w1.bhattacharyya() * w2.bhattacharyya()).abs() < 1e-10);
        prop_assert!(m.bhattacharyya() <= w1.bhattacharyya() + w2.bhattacharyya() + 1e-12);
        let [fm, fp] = combine_functionals(&w1, &w2);
        prop_assert!(fm.max_deviation(&m.functionals()) < 1e-10);
        prop_assert!(fp.max_deviation(&p.functionals()) < 1e-10);
    }

    #[test]
    fn bit_channels_conserve(w in bimc(), n in 0u32..4) {
        let chans = exact_bit_channels(&w, TransformOrder::new(n)).unwrap();
        let total: f64 = chans.iter().map(DiscreteBimc::mutual_information).sum();
        prop_assert!((total - (1u32 << n) as f64 * w.mutual_information()).abs() < 1e-9);
        let z = w.bhattacharyya();
        let zs: Vec<f64> = chans.iter().map(DiscreteBimc::bhattacharyya).collect();
        prop_assert!(zs.iter().cloned().fold(f64::INFINITY, f64::min) <= z + 1e-12);
        prop_assert!(zs.iter().cloned().fold(0.0, f64::max) >= z - 1e-12);
    }

    #[test]
    fn split_conservation_and_region_geometry(w in mac(5)) {
        let r = w.region_vertices();
        let s = w.sum_rate();
        prop_assert!((w.dot_channel().mutual_information() + w.ddot_channel().mutual_information() - s).abs() < 1e-9);
        for p in [r.a_point, r.b_point] {
            prop_assert!((p.sum() - s).abs() < 1e-9);
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&p.r1));
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&p.r2));
        }
    }

    #[test]
    fn block_chain_rule(w in mac(3), l in prop::sample::select(vec![1usize, 2]), pick in 0usize..3) {
        let i = 1 + pick % (l + 1);
        let prof = block_rates(&w, l, i).unwrap();
        prop_assert!((prof.terms.iter().sum::<f64>() - l as f64 * w.sum_rate()).abs() < 1e-9);
        prop_assert!((prof.r1 + prof.r2 - w.sum_rate()).abs() < 1e-9);
    }

    #[test]
    fn lifted_matches_definition(w in mac(2), pick in 0usize..6) {
        let order = enumerate_monotone_orders(2).unwrap().swap_remove(pick);
        let brute = JointEnumeration::new(&w, &order, 2).unwrap().functionals();
        let lifted = exact_mac_bit_functionals(&w, &order, 2).unwrap();
        for (a, b) in brute.iter().zip(&lifted) {
            prop_assert!(a.max_deviation(b) < 1e-10);
        }
    }

    #[test]
    fn llr_symmetries(y in -6.0f64..6.0, sigma in 0.3f64..3.0) {
        let g = GaussianMac::new(sigma).unwrap();
        prop_assert!((g.llr_dot(y) + g.llr_dot(-y)).abs() < 1e-9 * (1.0 + g.llr_dot(y).abs()));
        prop_assert!((g.llr_ddot(y, 1) - g.llr_ddot(y - 2.0, 0)).abs() < 1e-9);
    }

    #[test]
    fn selection_respects_budgets_and_grows(counts in prop::collection::vec(0u64..50, 16), b1 in 0.0f64..0.05, b2 in 0.0f64..0.05, grow in 1.0f64..3.0) {
        let sch = Schedule::new(8, BlockOrder::preset(2, 2).unwrap()).unwrap();
        let slots = counts.iter().enumerate()
            .map(|(slot, &errors)| SlotEstimate { slot, owner: sch.slot(slot).owner, errors, trials: 1000 })
            .collect();
        let est = GenieEstimates { schedule: sch, seed: 0, slots };
        let small = select_frozen_sets(&est, b1, b2).unwrap();
        prop_assert!(small.p1 <= b1 * (1.0 + 1e-9) && small.p2 <= b2 * (1.0 + 1e-9));
        let big = select_frozen_sets(&est, b1 * grow, b2 * grow).unwrap();
        let (r1, r2) = small.rates();
        let (s1, s2) = big.rates();
        prop_assert!(s1 >= r1 && s2 >= r2);
        for user in [User::One, User::Two] {
            prop_assert!(small.code.info_set(user).iter().all(|i| big.code.info_set(user).contains(i)));
        }
    }
}

