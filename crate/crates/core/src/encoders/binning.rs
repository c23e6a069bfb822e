const EPS: f64 = 1e-12;

/// Partition of the levels into buckets, each with training frequency at least
/// `threshold` (unless the threshold exceeds the total mass, in which case a
/// single bucket holds every level).
#[derive(Debug, Clone, PartialEq)]
pub struct BinPartition {
    pub buckets: Vec<Vec<usize>>,
    pub threshold: f64,
}

impl BinPartition {
    pub fn count(&self) -> usize {
        self.buckets.len()
    }

    /// Bucket index of every level.
    pub fn bucket_of(&self, cardinality: usize) -> Vec<usize> {
        let mut out = vec![0; cardinality];
        for (b, bucket) in self.buckets.iter().enumerate() {
            for &l in bucket {
                out[l] = b;
            }
        }
        out
    }
}

/// Greedy bucket construction maximizing the bucket count.
///
/// Levels at or above the threshold become singletons. The rest, sorted by
/// descending frequency, are packed by opening a bucket with the largest
/// remaining level and filling it with the smallest ones until it reaches the
/// threshold. An undersized remainder joins the last closed bucket.
pub fn prebin_partition(freqs: &[f64], threshold: f64) -> BinPartition {
    let total: f64 = freqs.iter().sum();
    if freqs.is_empty() {
        return BinPartition {
            buckets: Vec::new(),
            threshold,
        };
    }
    if threshold > total + EPS {
        return BinPartition {
            buckets: vec![(0..freqs.len()).collect()],
            threshold,
        };
    }
    let mut buckets: Vec<Vec<usize>> = (0..freqs.len())
        .filter(|&l| freqs[l] >= threshold - EPS)
        .map(|l| vec![l])
        .collect();
    let mut rest: Vec<usize> = (0..freqs.len())
        .filter(|&l| freqs[l] < threshold - EPS)
        .collect();
    rest.sort_by(|&a, &b| freqs[b].total_cmp(&freqs[a]).then(a.cmp(&b)));

    let (mut lo, mut hi) = (0usize, rest.len());
    while lo < hi {
        let mut bucket = vec![rest[lo]];
        let mut mass = freqs[rest[lo]];
        lo += 1;
        while mass < threshold - EPS && lo < hi {
            hi -= 1;
            bucket.push(rest[hi]);
            mass += freqs[rest[hi]];
        }
        if mass >= threshold - EPS {
            buckets.push(bucket);
        } else if let Some(last) = buckets.last_mut() {
            last.extend(bucket);
        } else {
            buckets.push(bucket);
        }
    }
    BinPartition { buckets, threshold }
}
