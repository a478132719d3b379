//! Friedman rank test with the Conover post-hoc comparison used for racing
//! elimination.

use statrs::distribution::{ChiSquared, ContinuousCDF, StudentsT};

/// Outcome of the Friedman test over a blocks-by-treatments cost matrix.
#[derive(Debug, Clone)]
pub struct FriedmanOutcome {
    pub statistic: f64,
    pub p_value: f64,
    /// Rank sum per treatment (lower is better).
    pub rank_sums: Vec<f64>,
    /// Critical rank-sum difference to the best at the given level.
    pub critical_difference: f64,
    /// All observations tied; no evidence either way.
    pub degenerate: bool,
}

/// Within-block ranks with average ranks for ties.
fn block_ranks(costs: &[f64]) -> Vec<f64> {
    let t = costs.len();
    let mut order: Vec<usize> = (0..t).collect();
    order.sort_by(|&a, &b| costs[a].total_cmp(&costs[b]));
    let mut ranks = vec![0.0; t];
    let mut i = 0;
    while i < t {
        let mut j = i;
        while j + 1 < t && costs[order[j + 1]] == costs[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Tie-adjusted Friedman test over `costs[block][treatment]`, plus the
/// Conover pairwise critical difference at level `alpha`.
pub fn friedman(costs: &[Vec<f64>], alpha: f64) -> FriedmanOutcome {
    let b = costs.len();
    let t = costs[0].len();
    debug_assert!(b >= 2 && t >= 2);

    let mut rank_sums = vec![0.0; t];
    let mut squared_rank_sum = 0.0;
    for block in costs {
        let ranks = block_ranks(block);
        for (sum, r) in rank_sums.iter_mut().zip(&ranks) {
            *sum += r;
            squared_rank_sum += r * r;
        }
    }

    let bf = b as f64;
    let tf = t as f64;
    let c1 = bf * tf * (tf + 1.0) * (tf + 1.0) / 4.0;
    let spread = squared_rank_sum - c1;
    if spread <= 1e-12 {
        // Every block is fully tied.
        return FriedmanOutcome {
            statistic: 0.0,
            p_value: 1.0,
            rank_sums,
            critical_difference: f64::INFINITY,
            degenerate: true,
        };
    }

    let mean_rank_sum = bf * (tf + 1.0) / 2.0;
    let deviation: f64 = rank_sums.iter().map(|r| (r - mean_rank_sum) * (r - mean_rank_sum)).sum();
    let statistic = (tf - 1.0) * deviation / spread;
    let chi = ChiSquared::new(tf - 1.0).expect("t >= 2");
    let p_value = 1.0 - chi.cdf(statistic);

    // Conover: |R_j - R_l| beyond this difference is significant.
    let df = (bf - 1.0) * (tf - 1.0);
    let consistency = (1.0 - statistic / (bf * (tf - 1.0))).max(0.0);
    let t_quantile = StudentsT::new(0.0, 1.0, df).expect("df >= 1").inverse_cdf(1.0 - alpha / 2.0);
    let critical_difference = t_quantile * (2.0 * bf * spread * consistency / df).sqrt();

    FriedmanOutcome { statistic, p_value, rank_sums, critical_difference, degenerate: false }
}
