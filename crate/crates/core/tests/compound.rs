use macpolar::channels::{ChannelModel, DiscreteBimc, DiscreteMac, GaussianMac};
use macpolar::compound::{
    compound_bit_channels_exact, compound_bit_estimates, select_single, timeshare_pipeline, TimeshareCodes,
};
use macpolar::mac_polar::User;
use macpolar::polar::{exact_bit_channels, TransformOrder};

/// `y = u ^ v`: user 2 alone is pure noise, user 2 given user 1 is noiseless.
fn xor_mac() -> DiscreteMac {
    DiscreteMac::from_outputs(vec![[1.0, 0.0, 0.0, 1.0], [0.0, 1.0, 1.0, 0.0]]).unwrap()
}

#[test]
fn noiseless_and_useless_halves_give_rate_half() {
    let model = ChannelModel::discrete(xor_mac());
    let est = compound_bit_estimates(32, &model, 2000, 1).unwrap();
    let (code, p) = select_single(&est, 1e-2, 0).unwrap();
    assert_eq!(code.rate(), 0.5);
    assert_eq!(p, 0.0);
}

#[test]
fn estimates_match_exact_compound_channels() {
    let g = GaussianMac::new(1.0).unwrap();
    let trials = 100_000;
    for (n, w) in [(1u32, g.quantize_default(8).unwrap()), (2, g.quantize(-3.0, 3.0, 4).unwrap())] {
        let model = ChannelModel::discrete(w.clone());
        let exact = compound_bit_channels_exact(&w.ddot_channel(), &w.dot_channel(), n).unwrap();
        let est = compound_bit_estimates(1 << n, &model, trials, 7).unwrap();
        for (s, ch) in est.iter().zip(&exact) {
            let p = ch.ml_error_probability();
            let se = (p * (1.0 - p) / trials as f64).sqrt();
            assert!((s.first_error_prob() - p).abs() <= 3.0 * se + 1e-12, "n={n} slot {}: {} vs {p}", s.slot, s.first_error_prob());
        }
    }
}

#[test]
fn compound_transform_conserves_information() {
    let w = GaussianMac::new(1.0).unwrap().quantize(-3.0, 3.0, 4).unwrap();
    let (wd, wdd) = (w.dot_channel(), w.ddot_channel());
    for n in 0..=2u32 {
        let total: f64 = compound_bit_channels_exact(&wdd, &wd, n).unwrap().iter().map(DiscreteBimc::mutual_information).sum();
        let want = (1u32 << n) as f64 * (wd.mutual_information() + wdd.mutual_information());
        assert!((total - want).abs() < 1e-9, "n={n}: {total} vs {want}");
    }
}

#[test]
fn identical_constituents_reduce_to_plain_transform() {
    let w = DiscreteBimc::bsc(0.11).unwrap();
    let a = compound_bit_channels_exact(&w, &w, 3).unwrap();
    let b = exact_bit_channels(&w, TransformOrder::new(4)).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!(x.functionals().max_deviation(&y.functionals()) < 1e-12);
    }
}

#[test]
fn pipeline_fer_near_budget() {
    let model = ChannelModel::gaussian(1.0).unwrap();
    let codes = TimeshareCodes::construct(128, &model, 5e-3, 10_000, 2).unwrap();
    let frames = 4000;
    let rep = timeshare_pipeline(&codes, &model, frames, 3).unwrap();
    // user 1 fails through C1, C2 or a compound error feeding C2; user 2
    // through the compound code or a C1 error feeding it
    for (user, bound) in [(User::One, 1.5e-2), (User::Two, 1e-2)] {
        let se = (bound * (1.0 - bound) / frames as f64).sqrt();
        assert!(rep.fer(user) <= bound + 3.0 * se, "{user:?}: {} > {bound}", rep.fer(user));
    }
    assert_eq!(rep.rates, codes.rates());
}
