//! Exact bit-channels of the single-user polar transform for finite-output
//! channels, by repeated channel combining.

use super::TransformOrder;
use crate::channels::{combine_functionals, combine_minus, combine_plus, DiscreteBimc, Functionals};
use crate::error::{Error, Result};
use rayon::prelude::*;

/// Largest output alphabet (after merging) an exact computation may hold.
pub const MAX_ALPHABET: usize = 1_000_000;

/// Largest product alphabet materialized before merging.
pub const MAX_PRODUCT: usize = 50_000_000;

/// Largest transform order accepted by the exact routines.
pub const MAX_EXACT_ORDER: u32 = 10;

fn check_product(w: &DiscreteBimc) -> Result<()> {
    let m = w.output_size();
    match m.checked_mul(m).and_then(|p| p.checked_mul(2)) {
        Some(p) if p <= MAX_PRODUCT => Ok(()),
        _ => Err(Error::Infeasible(format!(
            "combining two channels with {m} outputs exceeds {MAX_PRODUCT} product symbols"
        ))),
    }
}

fn check_alphabet(w: &DiscreteBimc) -> Result<()> {
    if w.output_size() > MAX_ALPHABET {
        return Err(Error::Infeasible(format!(
            "merged alphabet {} exceeds {MAX_ALPHABET}",
            w.output_size()
        )));
    }
    Ok(())
}

/// One polarization level: channel `i` becomes `(c ⊞ c, c ⊛ c)` at positions
/// `2i, 2i + 1`.
fn split_level(channels: &[DiscreteBimc]) -> Result<Vec<DiscreteBimc>> {
    let pairs: Vec<[DiscreteBimc; 2]> = channels
        .par_iter()
        .map(|c| {
            check_product(c)?;
            let minus = combine_minus(c, c).merged();
            let plus = combine_plus(c, c).merged();
            check_alphabet(&minus)?;
            check_alphabet(&plus)?;
            Ok([minus, plus])
        })
        .collect::<Result<_>>()?;
    Ok(pairs.into_iter().flatten().collect())
}

/// All `N` bit-channels `W_N^(i)` of `W`, in natural index order.
pub fn exact_bit_channels(w: &DiscreteBimc, order: TransformOrder) -> Result<Vec<DiscreteBimc>> {
    if order.n() > MAX_EXACT_ORDER {
        return Err(Error::Infeasible(format!("transform order {} exceeds {MAX_EXACT_ORDER}", order.n())));
    }
    let mut channels = vec![w.merged()];
    for _ in 0..order.n() {
        channels = split_level(&channels)?;
    }
    Ok(channels)
}

/// Mutual information and Bhattacharyya parameter of every bit-channel.
/// The last level is evaluated without materializing the combined channels.
pub fn exact_bit_channel_functionals(w: &DiscreteBimc, order: TransformOrder) -> Result<Vec<Functionals>> {
    if order.n() == 0 {
        return Ok(vec![w.functionals()]);
    }
    let parents = exact_bit_channels(w, TransformOrder::new(order.n() - 1))?;
    parents.iter().try_for_each(check_product)?;
    let pairs: Vec<[Functionals; 2]> = parents.par_iter().map(|c| combine_functionals(c, c)).collect();
    Ok(pairs.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Erasure probabilities of the BEC polarization tree.
    fn bec_tree(eps: f64, n: u32) -> Vec<f64> {
        let mut z = vec![eps];
        for _ in 0..n {
            z = z.iter().flat_map(|&e| [2.0 * e - e * e, e * e]).collect();
        }
        z
    }

    #[test]
    fn order_zero_is_identity() {
        let w = DiscreteBimc::bsc(0.2).unwrap();
        let ch = exact_bit_channels(&w, TransformOrder::new(0)).unwrap();
        assert_eq!(ch.len(), 1);
        assert!((ch[0].mutual_information() - w.mutual_information()).abs() < 1e-15);
    }

    #[test]
    fn bec_single_level() {
        let ch = exact_bit_channels(&DiscreteBimc::bec(0.5).unwrap(), TransformOrder::new(1)).unwrap();
        assert!((ch[0].bhattacharyya() - 0.75).abs() < 1e-12);
        assert!((ch[1].bhattacharyya() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn bec_matches_closed_form_tree() {
        let ch = exact_bit_channels(&DiscreteBimc::bec(0.5).unwrap(), TransformOrder::new(3)).unwrap();
        for (c, z) in ch.iter().zip(bec_tree(0.5, 3)) {
            assert!((c.bhattacharyya() - z).abs() < 1e-12);
            assert!((c.mutual_information() - (1.0 - z)).abs() < 1e-12);
        }
    }

    #[test]
    fn information_is_conserved() {
        let w = DiscreteBimc::bsc(0.11).unwrap();
        for n in 0..5 {
            let f = exact_bit_channel_functionals(&w, TransformOrder::new(n)).unwrap();
            let total: f64 = f.iter().map(|x| x.information).sum();
            assert!((total - (1 << n) as f64 * w.mutual_information()).abs() < 1e-9);
            let zmin = f.iter().map(|x| x.bhattacharyya).fold(f64::INFINITY, f64::min);
            let zmax = f.iter().map(|x| x.bhattacharyya).fold(0.0, f64::max);
            assert!(zmin <= w.bhattacharyya() + 1e-12 && w.bhattacharyya() <= zmax + 1e-12);
        }
    }

    #[test]
    fn functionals_agree_with_materialized() {
        let w = DiscreteBimc::new(vec![0.6, 0.3, 0.1], vec![0.05, 0.35, 0.6]).unwrap();
        let ord = TransformOrder::new(3);
        let ch = exact_bit_channels(&w, ord).unwrap();
        let f = exact_bit_channel_functionals(&w, ord).unwrap();
        for (c, g) in ch.iter().zip(&f) {
            assert!(c.functionals().max_deviation(g) < 1e-12);
        }
    }
}
