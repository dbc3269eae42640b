//! Rate-region sweeps over decoding orders and budget splits.

use super::genie::{genie_error_estimates, GenieEstimates};
use super::select::select_frozen_sets;
use crate::channels::ChannelModel;
use crate::error::{Error, Result};
use crate::mac_polar::BlockOrder;
use crate::report::{csv_line, fmt_sig};
use serde::{Deserialize, Serialize};

/// Default number of budget splits.
pub const DEFAULT_SPLITS: usize = 21;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionRecord {
    pub order_id: usize,
    pub budget1: f64,
    pub budget2: f64,
    pub r1: f64,
    pub r2: f64,
    pub p1: f64,
    pub p2: f64,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionReport {
    /// `orders[order_id]` names the order behind each record.
    pub orders: Vec<BlockOrder>,
    pub records: Vec<RegionRecord>,
}

pub const REGION_CSV_HEADER: &str = "order_id,budget1,budget2,R1,R2,P1,P2,N,trials,seed";

impl RegionReport {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{REGION_CSV_HEADER}\n");
        for r in &self.records {
            out += &csv_line(&[
                r.order_id.to_string(),
                fmt_sig(r.budget1, 6),
                fmt_sig(r.budget2, 6),
                fmt_sig(r.r1, 6),
                fmt_sig(r.r2, 6),
                fmt_sig(r.p1, 6),
                fmt_sig(r.p2, 6),
                r.n.to_string(),
                r.trials.to_string(),
                r.seed.to_string(),
            ]);
        }
        out
    }

    pub fn records_for(&self, order_id: usize) -> impl Iterator<Item = &RegionRecord> {
        self.records.iter().filter(move |r| r.order_id == order_id)
    }

    pub fn max_sum_rate(&self) -> f64 {
        self.records.iter().map(|r| r.r1 + r.r2).fold(0.0, f64::max)
    }
}

/// How far `r` reaches beyond the region of `others`: the smallest, over
/// `s` in `others`, of the larger coordinate gain of `r` over `s`. A positive
/// value means no point of `others` dominates `r`.
pub fn excess_over<'a>(r: &RegionRecord, others: impl IntoIterator<Item = &'a RegionRecord>) -> f64 {
    others
        .into_iter()
        .map(|s| (r.r1 - s.r1).max(r.r2 - s.r2))
        .fold(f64::INFINITY, f64::min)
}

/// Budget splits `t = 0, 1/(splits-1), ..., 1` with `budget1 = t total`.
pub fn budget_splits(total: f64, splits: usize) -> Vec<(f64, f64)> {
    (0..splits)
        .map(|s| {
            let t = s as f64 / (splits - 1) as f64;
            (t * total, (1.0 - t) * total)
        })
        .collect()
}

/// Region records from already estimated orders.
pub fn region_from_estimates(estimates: &[GenieEstimates], total_budget: f64, splits: usize) -> Result<RegionReport> {
    if splits < 2 {
        return Err(Error::InvalidArgument("at least two budget splits are required".into()));
    }
    let mut records = Vec::with_capacity(estimates.len() * splits);
    for (order_id, est) in estimates.iter().enumerate() {
        for (b1, b2) in budget_splits(total_budget, splits) {
            let sel = select_frozen_sets(est, b1, b2)?;
            let (r1, r2) = sel.rates();
            records.push(RegionRecord {
                order_id,
                budget1: b1,
                budget2: b2,
                r1,
                r2,
                p1: sel.p1,
                p2: sel.p2,
                n: est.schedule.n_user(),
                trials: est.trials(),
                seed: est.seed,
            });
        }
    }
    Ok(RegionReport { orders: estimates.iter().map(|e| e.schedule.order().clone()).collect(), records })
}

/// Estimates every order once (same seed) and sweeps the budget split.
pub fn region_sweep(
    n_user: usize,
    channel: &ChannelModel,
    orders: &[BlockOrder],
    total_budget: f64,
    splits: usize,
    trials: u64,
    seed: u64,
) -> Result<RegionReport> {
    if splits < 2 {
        return Err(Error::InvalidArgument("at least two budget splits are required".into()));
    }
    let est = orders
        .iter()
        .map(|o| genie_error_estimates(n_user, o, channel, trials, seed))
        .collect::<Result<Vec<_>>>()?;
    region_from_estimates(&est, total_budget, splits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::DiscreteMac;
    use crate::mac_polar::enumerate_monotone_orders;

    #[test]
    fn splits_cover_total() {
        let s = budget_splits(1e-2, 3);
        assert_eq!(s, vec![(0.0, 1e-2), (5e-3, 5e-3), (1e-2, 0.0)]);
    }

    #[test]
    fn adder_region_respects_budget_and_capacity() {
        let ch = ChannelModel::discrete(DiscreteMac::adder());
        let orders = enumerate_monotone_orders(2).unwrap();
        let rep = region_sweep(16, &ch, &orders, 1e-2, 5, 2000, 3).unwrap();
        assert_eq!(rep.records.len(), 30);
        for r in &rep.records {
            assert!(r.p1 + r.p2 <= 1e-2 * (1.0 + 1e-9));
            assert!(r.r1 + r.r2 <= 1.5 + 0.2);
        }
        let csv = rep.to_csv();
        assert!(csv.starts_with(REGION_CSV_HEADER));
        assert_eq!(csv.lines().count(), 31);
    }

    #[test]
    fn excess_measure() {
        let mk = |r1, r2| RegionRecord { order_id: 0, budget1: 0.0, budget2: 0.0, r1, r2, p1: 0.0, p2: 0.0, n: 1, trials: 1, seed: 0 };
        let s = [mk(0.2, 0.6), mk(0.3, 0.5)];
        assert!(excess_over(&mk(0.15, 0.45), &s) < 0.0);
        assert!((excess_over(&mk(0.25, 0.55), &s) - 0.05).abs() < 1e-12);
        assert!((excess_over(&mk(0.4, 0.4), &s) - 0.1).abs() < 1e-12);
    }
}
