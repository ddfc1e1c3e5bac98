//! Population metrics and the statistics used to compare instruction sets.

use rand::Rng;

/// Per-organism, per-task qualities of one population.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskSuccessRecord {
    pub tasks: usize,
    pub qualities: Vec<Vec<f64>>,
}

/// Sum of all task qualities divided by the number of organisms, and the
/// same divided by the task count.
pub fn task_success(record: &TaskSuccessRecord) -> (f64, f64) {
    let n = record.qualities.len();
    if n == 0 || record.tasks == 0 {
        return (0.0, 0.0);
    }
    let total: f64 = record.qualities.iter().flatten().sum();
    let t = total / n as f64;
    (t, (t / record.tasks as f64).clamp(0.0, 1.0))
}

/// Log2 of the arithmetic mean fitness.
pub fn mean_fitness(fitness: &[f64]) -> f64 {
    if fitness.is_empty() {
        return f64::NEG_INFINITY;
    }
    (fitness.iter().sum::<f64>() / fitness.len() as f64).log2()
}

/// Midranks of the pooled sample: the rank sum of `a` and the tie sizes.
fn rank_sum(a: &[f64], b: &[f64]) -> (f64, Vec<usize>) {
    let mut pooled: Vec<(f64, bool)> = a
        .iter()
        .map(|&x| (x, true))
        .chain(b.iter().map(|&x| (x, false)))
        .collect();
    pooled.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut w = 0.0;
    let mut ties = Vec::new();
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i;
        while j + 1 < pooled.len() && pooled[j + 1].0 == pooled[i].0 {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        w += rank * pooled[i..=j].iter().filter(|p| p.1).count() as f64;
        if j > i {
            ties.push(j - i + 1);
        }
        i = j + 1;
    }
    (w, ties)
}

/// Distribution of the rank sum of `n` items drawn from ranks `1..=total`:
/// `counts[s]` is the number of subsets with sum `s`.
fn rank_sum_counts(n: usize, total: usize) -> Vec<f64> {
    let max_sum = total * (total + 1) / 2;
    // dp[k][s]
    let mut dp = vec![vec![0f64; max_sum + 1]; n + 1];
    dp[0][0] = 1.0;
    for r in 1..=total {
        for k in (1..=n.min(r)).rev() {
            for s in (r..=max_sum).rev() {
                dp[k][s] += dp[k - 1][s - r];
            }
        }
    }
    dp.swap_remove(n)
}

/// Largest pooled size for which p-values are computed exactly.
pub const EXACT_LIMIT: usize = 12;

enum Tail {
    Two,
    Greater,
}

fn rank_sum_test(a: &[f64], b: &[f64], tail: Tail) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "samples must be nonempty");
    let (n, m) = (a.len(), b.len());
    let total = n + m;
    let (w, ties) = rank_sum(a, b);
    if total <= EXACT_LIMIT && ties.is_empty() {
        let counts = rank_sum_counts(n, total);
        let all: f64 = counts.iter().sum();
        let w = w.round() as usize;
        let lower: f64 = counts[..=w].iter().sum::<f64>() / all;
        let upper: f64 = counts[w..].iter().sum::<f64>() / all;
        return match tail {
            Tail::Two => (2.0 * lower.min(upper)).min(1.0),
            Tail::Greater => upper,
        };
    }
    let (nf, mf, tf) = (n as f64, m as f64, total as f64);
    let mean = nf * (tf + 1.0) / 2.0;
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / (tf * (tf - 1.0));
    let var = nf * mf / 12.0 * ((tf + 1.0) - tie_term);
    if var <= 0.0 {
        return 1.0;
    }
    let sd = var.sqrt();
    match tail {
        Tail::Two => {
            let z = ((w - mean).abs() - 0.5).max(0.0) / sd;
            libm::erfc(z / std::f64::consts::SQRT_2).min(1.0)
        }
        Tail::Greater => {
            let z = (w - mean - 0.5) / sd;
            0.5 * libm::erfc(z / std::f64::consts::SQRT_2)
        }
    }
}

/// Two-sided Wilcoxon rank-sum p-value.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64]) -> f64 {
    rank_sum_test(a, b, Tail::Two)
}

/// One-sided rank-sum p-value against the alternative that `a` tends to
/// exceed `b`.
pub fn wilcoxon_rank_sum_greater(a: &[f64], b: &[f64]) -> f64 {
    rank_sum_test(a, b, Tail::Greater)
}

/// Holm step-down rejections at family-wise level `alpha`.
pub fn sequential_bonferroni(pvals: &[f64], alpha: f64) -> Vec<bool> {
    let m = pvals.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| pvals[i].total_cmp(&pvals[j]).then(i.cmp(&j)));
    let mut reject = vec![false; m];
    for (k, &i) in order.iter().enumerate() {
        if pvals[i] <= alpha / (m - k) as f64 {
            reject[i] = true;
        } else {
            break;
        }
    }
    reject
}

/// Type-7 (linear interpolation) quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    quantile_sorted(&v, 0.5)
}

pub const BOOTSTRAP_ITERATIONS: usize = 10_000;

/// Percentile bootstrap interval for the median.
pub fn bootstrap_ci(
    sample: &[f64],
    iters: usize,
    quantiles: (f64, f64),
    rng: &mut impl Rng,
) -> (f64, f64) {
    assert!(!sample.is_empty(), "sample must be nonempty");
    let n = sample.len();
    let mut stats = Vec::with_capacity(iters);
    let mut buf = vec![0.0; n];
    for _ in 0..iters {
        for slot in buf.iter_mut() {
            *slot = sample[rng.gen_range(0..n)];
        }
        buf.sort_by(f64::total_cmp);
        stats.push(quantile_sorted(&buf, 0.5));
    }
    stats.sort_by(f64::total_cmp);
    (quantile_sorted(&stats, quantiles.0), quantile_sorted(&stats, quantiles.1))
}
