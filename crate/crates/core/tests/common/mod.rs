//! Independent reference computations for the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::HashSet;

/// All set partitions of `items`.
pub fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for p in set_partitions(rest) {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].push(first);
            out.push(q);
        }
        let mut q = p;
        q.push(vec![first]);
        out.push(q);
    }
    out
}

/// Largest number of buckets whose frequencies all reach `theta`.
pub fn pbmt_optimum(freqs: &[f64], theta: f64) -> usize {
    let items: Vec<usize> = (0..freqs.len()).collect();
    set_partitions(&items)
        .into_iter()
        .filter(|p| {
            p.iter()
                .all(|b| b.iter().map(|&l| freqs[l]).sum::<f64>() >= theta - 1e-12)
        })
        .map(|p| p.len())
        .max()
        .unwrap_or(1)
}

/// Character n-gram set; short strings are their own single gram.
pub fn gram_set(s: &str, n: usize) -> HashSet<String> {
    let c: Vec<char> = s.chars().collect();
    if c.len() <= n {
        return HashSet::from([s.to_string()]);
    }
    c.windows(n).map(|w| w.iter().collect()).collect()
}

pub fn jaccard(a: &HashSet<String>, b: &HashSet<String>) -> f64 {
    a.intersection(b).count() as f64 / a.union(b).count() as f64
}

/// Every weak order over `n` items as a vector of tier indices with
/// contiguous tiers starting at 0.
pub fn weak_orders(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    fn rec(i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            let tiers = cur.iter().map(|t| t + 1).max().unwrap_or(0);
            if (0..tiers).all(|t| cur.contains(&t)) {
                out.push(cur.clone());
            }
            return;
        }
        for t in 0..cur.len() {
            cur[i] = t;
            rec(i + 1, cur, out);
        }
    }
    rec(0, &mut cur, &mut out);
    out
}

/// Kemeny objective of the consensus `tiers` (lower tier = better) against
/// per-dataset rank vectors with missing entries, in floating point:
/// `Σ_j 1/(n_j(n_j-1)) Σ_{i≠h} o_j(i,h) · (2 c(i,h) - 1)` with `o = ±1`.
pub fn kemeny_objective(ranks: &[Vec<Option<f64>>], tiers: &[usize]) -> f64 {
    let n = tiers.len();
    let mut total = 0.0;
    for r in ranks {
        let nj = r.iter().filter(|x| x.is_some()).count() as f64;
        if nj < 2.0 {
            continue;
        }
        for i in 0..n {
            for h in 0..n {
                if i == h {
                    continue;
                }
                if let (Some(a), Some(b)) = (r[i], r[h]) {
                    let o = if a <= b { 1.0 } else { -1.0 };
                    let c = if tiers[i] <= tiers[h] { 1.0 } else { -1.0 };
                    total += o * c / (nj * (nj - 1.0));
                }
            }
        }
    }
    total
}

/// Best objective over all weak orders, with the set of optimal adjacency
/// matrices (`C[i][h] = tier_i <= tier_h`).
pub fn kemeny_optimum(ranks: &[Vec<Option<f64>>], n: usize) -> (f64, Vec<Vec<Vec<bool>>>) {
    let scored: Vec<(f64, Vec<usize>)> = weak_orders(n)
        .into_iter()
        .map(|t| (kemeny_objective(ranks, &t), t))
        .collect();
    let best = scored.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max);
    let optima = scored
        .into_iter()
        .filter(|s| (s.0 - best).abs() < 1e-9)
        .map(|(_, t)| {
            (0..n)
                .map(|i| (0..n).map(|h| t[i] <= t[h]).collect())
                .collect()
        })
        .collect();
    (best, optima)
}

/// One-sided sign-test p-value: P(X ≥ wins) for X ~ Binomial(n, 1/2).
pub fn sign_test_p(wins: usize, n: usize) -> f64 {
    let mut c = 1.0f64;
    let mut total = 0.0;
    for k in 0..=n {
        if k > 0 {
            c = c * (n - k + 1) as f64 / k as f64;
        }
        if k >= wins {
            total += c;
        }
    }
    total / 2f64.powi(n as i32)
}

/// Pearson correlation.
pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}
