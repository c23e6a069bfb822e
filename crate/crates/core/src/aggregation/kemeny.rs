use serde::{Deserialize, Serialize};

use super::consensus::{ConsensusResult, Strategy};
use super::ranking::{RankingMatrix, WeakOrder};
use super::{AggregationError, Result};

pub const DEFAULT_KEMENY_CAP: usize = 12;
const BRUTE_FORCE_CAP: usize = 6;

/// Integer cost matrix over the ranked encoders.
///
/// `S[i][h] = Σ_j ±1 / (n_j (n_j - 1))` with `+1` when dataset `j` places
/// `i` weakly above `h` and `-1` when strictly below; datasets missing either
/// encoder contribute nothing. Entries are scaled by `scale` (the lcm of the
/// `n_j (n_j - 1)`) so that objective comparisons are exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KemenyCost {
    pub encoders: Vec<usize>,
    pub s: Vec<Vec<i64>>,
    pub scale: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn kemeny_cost(rankings: &RankingMatrix) -> KemenyCost {
    let encoders: Vec<usize> = (0..rankings.n_encoders())
        .filter(|&i| rankings.orders.iter().any(|o| o.rank(i).is_some()))
        .collect();
    let n = encoders.len();
    let mut scale = 1i64;
    for o in &rankings.orders {
        let k = o.n_ranked() as i64;
        if k >= 2 {
            let d = k * (k - 1);
            scale = scale / gcd(scale, d) * d;
        }
    }
    let mut s = vec![vec![0i64; n]; n];
    for o in &rankings.orders {
        let k = o.n_ranked() as i64;
        if k < 2 {
            continue;
        }
        let w = scale / (k * (k - 1));
        for (a, &i) in encoders.iter().enumerate() {
            for (b, &h) in encoders.iter().enumerate() {
                if a != b {
                    if let Some(p) = o.weakly_prefers(i, h) {
                        s[a][b] += if p { w } else { -w };
                    }
                }
            }
        }
    }
    KemenyCost { encoders, s, scale }
}

impl KemenyCost {
    fn n(&self) -> usize {
        self.encoders.len()
    }

    /// `Σ_{i≠h} S_ih (2 C_ih - 1)`.
    pub fn objective(&self, adjacency: &[Vec<bool>]) -> i64 {
        let n = self.n();
        let mut total = 0;
        for i in 0..n {
            for h in 0..n {
                if i != h {
                    total += if adjacency[i][h] {
                        self.s[i][h]
                    } else {
                        -self.s[i][h]
                    };
                }
            }
        }
        total
    }

    /// Contribution of the unordered pair `{i, h}` for `(C_ih, C_hi)`.
    fn pair_value(&self, i: usize, h: usize, c_ih: bool, c_hi: bool) -> i64 {
        let sign = |c: bool| if c { 1 } else { -1 };
        sign(c_ih) * self.s[i][h] + sign(c_hi) * self.s[h][i]
    }
}

/// Exact optimum and the consensus adjacency over the ranked encoders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KemenySolution {
    /// Indices (into the ranking matrix) of the encoders in the adjacency.
    pub encoders: Vec<usize>,
    pub adjacency: Vec<Vec<bool>>,
    /// Objective in scaled integer units and as a real number.
    pub objective_scaled: i64,
    pub objective: f64,
}

/// Best objective over all weak orders by dynamic programming over the
/// set of encoders still to place: `f(U) = max_T tie(T) + cross(T, U∖T) + f(U∖T)`.
fn optimal_value(cost: &KemenyCost) -> i64 {
    let n = cost.n();
    let full = 1usize << n;
    let mut tie = vec![0i64; full];
    for t in 1..full {
        let low = t.trailing_zeros() as usize;
        let rest = t & (t - 1);
        let mut v = tie[rest];
        for h in 0..n {
            if rest >> h & 1 == 1 {
                v += cost.s[low][h] + cost.s[h][low];
            }
        }
        tie[t] = v;
    }
    // above[i][R] = Σ_{h∈R} (S_ih - S_hi): value of placing i above all of R.
    let mut above = vec![vec![0i64; full]; n];
    for (i, row) in above.iter_mut().enumerate() {
        for r in 1..full {
            let low = r.trailing_zeros() as usize;
            row[r] = row[r & (r - 1)]
                + if low == i {
                    0
                } else {
                    cost.s[i][low] - cost.s[low][i]
                };
        }
    }
    let mut f = vec![i64::MIN; full];
    f[0] = 0;
    for u in 1..full {
        let mut best = i64::MIN;
        let mut t = u;
        while t > 0 {
            let rest = u & !t;
            let mut v = tie[t] + f[rest];
            let mut bits = t;
            while bits > 0 {
                let i = bits.trailing_zeros() as usize;
                v += above[i][rest];
                bits &= bits - 1;
            }
            best = best.max(v);
            t = (t - 1) & u;
        }
        f[u] = best;
    }
    f[full - 1]
}

const UNKNOWN: i8 = -1;

struct Search<'a> {
    cost: &'a KemenyCost,
    target: i64,
    order: Vec<(usize, usize)>,
}

/// Sets `c[i][h] = v` and closes the partial relation under completeness and
/// transitivity. Returns false on contradiction.
fn assign(c: &mut [Vec<i8>], i: usize, h: usize, v: i8) -> bool {
    let n = c.len();
    let mut stack = Vec::new();
    let set =
        |c: &mut [Vec<i8>], stack: &mut Vec<(usize, usize)>, i: usize, h: usize, v: i8| -> bool {
            if c[i][h] == v {
                return true;
            }
            if c[i][h] != UNKNOWN {
                return false;
            }
            c[i][h] = v;
            stack.push((i, h));
            true
        };
    if !set(c, &mut stack, i, h, v) {
        return false;
    }
    while let Some((i, h)) = stack.pop() {
        if c[i][h] == 0 {
            // h strictly above i
            if !set(c, &mut stack, h, i, 1) {
                return false;
            }
            for k in 0..n {
                if k == i || k == h {
                    continue;
                }
                // i ≽ k ∧ k ≽ h would give i ≽ h
                if c[k][h] == 1 && !set(c, &mut stack, i, k, 0) {
                    return false;
                }
                if c[i][k] == 1 && !set(c, &mut stack, k, h, 0) {
                    return false;
                }
            }
        } else {
            for k in 0..n {
                if k == i || k == h {
                    continue;
                }
                if c[h][k] == 1 && !set(c, &mut stack, i, k, 1) {
                    return false;
                }
                if c[k][i] == 1 && !set(c, &mut stack, k, h, 1) {
                    return false;
                }
                if c[i][k] == 0 && !set(c, &mut stack, h, k, 0) {
                    return false;
                }
                if c[k][h] == 0 && !set(c, &mut stack, k, i, 0) {
                    return false;
                }
            }
        }
    }
    true
}

impl Search<'_> {
    /// Σ over unordered pairs of the best state still allowed.
    fn bound(&self, c: &[Vec<i8>]) -> i64 {
        let n = c.len();
        let mut total = 0;
        for i in 0..n {
            for h in i + 1..n {
                let mut best = i64::MIN;
                for (a, b) in [(true, false), (true, true), (false, true)] {
                    let ok = |x: i8, want: bool| x == UNKNOWN || (x == 1) == want;
                    if ok(c[i][h], a) && ok(c[h][i], b) {
                        best = best.max(self.cost.pair_value(i, h, a, b));
                    }
                }
                if best == i64::MIN {
                    return i64::MIN;
                }
                total += best;
            }
        }
        total
    }

    /// Depth-first search trying 0 before 1 in row-major order, so the first
    /// complete assignment reaching the target is the lexicographically smallest.
    fn dfs(&self, c: Vec<Vec<i8>>, pos: usize) -> Option<Vec<Vec<i8>>> {
        let mut pos = pos;
        while pos < self.order.len() && c[self.order[pos].0][self.order[pos].1] != UNKNOWN {
            pos += 1;
        }
        if pos == self.order.len() {
            return (self.bound(&c) == self.target).then_some(c);
        }
        let (i, h) = self.order[pos];
        for v in [0, 1] {
            let mut next = c.clone();
            if assign(&mut next, i, h, v) && self.bound(&next) >= self.target {
                if let Some(found) = self.dfs(next, pos + 1) {
                    return Some(found);
                }
            }
        }
        None
    }
}

fn solution(cost: &KemenyCost, adjacency: Vec<Vec<bool>>) -> KemenySolution {
    let objective_scaled = cost.objective(&adjacency);
    KemenySolution {
        encoders: cost.encoders.clone(),
        adjacency,
        objective_scaled,
        objective: objective_scaled as f64 / cost.scale as f64,
    }
}

/// Exact Kemeny-Young consensus. Among optimal weak orders the one with the
/// lexicographically smallest adjacency (row-major, encoder order of the
/// matrix) is returned.
pub fn kemeny_exact(rankings: &RankingMatrix, cap: usize) -> Result<KemenySolution> {
    let cost = kemeny_cost(rankings);
    let n = cost.n();
    if n > cap {
        return Err(AggregationError::TooManyAlternatives { n, cap });
    }
    if n == 0 {
        return Ok(solution(&cost, Vec::new()));
    }
    let target = optimal_value(&cost);
    let order = (0..n)
        .flat_map(|i| (0..n).filter(move |&h| h != i).map(move |h| (i, h)))
        .collect();
    let search = Search {
        cost: &cost,
        target,
        order,
    };
    let mut start = vec![vec![UNKNOWN; n]; n];
    for (i, row) in start.iter_mut().enumerate() {
        row[i] = 1;
    }
    let found = search
        .dfs(start, 0)
        .expect("the optimal value is attained by some weak order");
    let adjacency = found
        .iter()
        .map(|r| r.iter().map(|&v| v == 1).collect())
        .collect();
    let sol = solution(&cost, adjacency);
    debug_assert_eq!(sol.objective_scaled, target);
    Ok(sol)
}

/// Exhaustive enumeration of weak orders (test oracle, at most six encoders).
pub fn kemeny_brute_force(rankings: &RankingMatrix) -> Result<KemenySolution> {
    let cost = kemeny_cost(rankings);
    let n = cost.n();
    if n > BRUTE_FORCE_CAP {
        return Err(AggregationError::TooManyAlternatives {
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let mut best: Option<(i64, Vec<Vec<bool>>)> = None;
    // tier[i] in 0..n; every assignment is a weak order (tiers need not be contiguous).
    let total = n.pow(n as u32);
    for code in 0..total.max(1) {
        let mut tier = vec![0; n];
        let mut c = code;
        for t in tier.iter_mut() {
            *t = c % n.max(1);
            c /= n.max(1);
        }
        let adjacency: Vec<Vec<bool>> = (0..n)
            .map(|i| (0..n).map(|h| tier[i] <= tier[h]).collect())
            .collect();
        let value = cost.objective(&adjacency);
        let better = match &best {
            None => true,
            Some((v, adj)) => value > *v || (value == *v && adjacency < *adj),
        };
        if better {
            best = Some((value, adjacency));
        }
    }
    Ok(solution(&cost, best.map(|b| b.1).unwrap_or_default()))
}

fn to_consensus(rankings: &RankingMatrix, sol: &KemenySolution) -> ConsensusResult {
    let local = WeakOrder::from_adjacency(&sol.adjacency);
    let mut ranks = vec![None; rankings.n_encoders()];
    for (a, &i) in sol.encoders.iter().enumerate() {
        ranks[i] = local.rank(a);
    }
    let order = WeakOrder::from_ranks(&ranks);
    let scores = order.ranks().to_vec();
    let mut result =
        ConsensusResult::new(Strategy::Kemeny, rankings.encoders.clone(), order, scores);
    result
        .diagnostics
        .push(("objective".to_string(), sol.objective));
    result
}

pub fn kemeny_consensus(rankings: &RankingMatrix, cap: usize) -> Result<ConsensusResult> {
    Ok(to_consensus(rankings, &kemeny_exact(rankings, cap)?))
}
