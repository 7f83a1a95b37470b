//! Average-linkage agglomerative clustering under cosine distance, and the
//! two-factor core-detection clustering used for groups of people.

use crate::vectors::{cosine, VectorError, WordVector};

/// Symmetric matrix of cosine distances `1 - cos`, zero on the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_vectors(vectors: &[WordVector]) -> Result<Self, VectorError> {
        let n = vectors.len();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let dist = (1.0 - cosine(&vectors[i], &vectors[j])?).clamp(0.0, 2.0);
                d[i * n + j] = dist;
                d[j * n + i] = dist;
            }
        }
        Ok(DistanceMatrix { n, d })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }
}

/// Flat clustering plus the heights at which merges happened.
#[derive(Debug, Clone, PartialEq)]
pub struct HacOutcome {
    /// Cluster label per item, numbered by first occurrence.
    pub labels: Vec<usize>,
    /// Linkage distance of every merge, in merge order.
    pub merge_heights: Vec<f64>,
}

/// Clusters vectors with average linkage and stops once the closest pair of
/// clusters is farther apart than `threshold`.
pub fn hac_average_cosine(vectors: &[WordVector], threshold: f64) -> Result<Vec<usize>, VectorError> {
    Ok(average_linkage(&DistanceMatrix::from_vectors(vectors)?, threshold).labels)
}

/// Average linkage on a precomputed distance matrix.
///
/// Each step merges the pair of clusters with the smallest mean pairwise
/// distance; ties go to the pair whose smallest member indices are
/// lexicographically smallest. Pairwise distance sums between clusters are
/// carried exactly, and every cluster keeps a cached nearest neighbour.
pub fn average_linkage(dist: &DistanceMatrix, threshold: f64) -> HacOutcome {
    let n = dist.len();
    let mut sums = dist.d.clone();
    let mut size = vec![1usize; n];
    let mut active = vec![true; n];
    let mut slot_of: Vec<usize> = (0..n).collect();
    let mut merge_heights = Vec::new();

    // Slot `a` always holds the cluster whose smallest member is `a`.
    let avg = |sums: &[f64], size: &[usize], a: usize, b: usize| {
        sums[a * n + b] / (size[a] * size[b]) as f64
    };
    let nearest = |sums: &[f64], size: &[usize], active: &[bool], a: usize| {
        let mut best: Option<(f64, usize)> = None;
        for b in (0..n).filter(|&b| b != a && active[b]) {
            let d = avg(sums, size, a, b);
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, b));
            }
        }
        best
    };

    let mut nn: Vec<Option<(f64, usize)>> =
        (0..n).map(|a| nearest(&sums, &size, &active, a)).collect();

    loop {
        let best = (0..n)
            .filter(|&a| active[a])
            .filter_map(|a| nn[a].map(|(d, b)| (d, a.min(b), a.max(b))))
            .min_by(|x, y| x.0.total_cmp(&y.0).then((x.1, x.2).cmp(&(y.1, y.2))));
        let Some((height, i, j)) = best else { break };
        if height > threshold {
            break;
        }

        for k in (0..n).filter(|&k| active[k] && k != i && k != j) {
            let s = sums[i * n + k] + sums[j * n + k];
            sums[i * n + k] = s;
            sums[k * n + i] = s;
        }
        size[i] += size[j];
        active[j] = false;
        nn[j] = None;
        for slot in slot_of.iter_mut().filter(|s| **s == j) {
            *slot = i;
        }
        merge_heights.push(height);

        for k in (0..n).filter(|&k| active[k] && k != i) {
            match nn[k] {
                Some((_, b)) if b == i || b == j => nn[k] = nearest(&sums, &size, &active, k),
                Some((bd, b)) => {
                    let d = avg(&sums, &size, k, i);
                    if d < bd || (d == bd && i < b) {
                        nn[k] = Some((d, i));
                    }
                }
                None => nn[k] = nearest(&sums, &size, &active, k),
            }
        }
        nn[i] = nearest(&sums, &size, &active, i);
    }

    HacOutcome {
        labels: canonical_labels(&slot_of),
        merge_heights,
    }
}

/// Renumbers arbitrary cluster ids by order of first occurrence.
pub fn canonical_labels(ids: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    ids.iter()
        .map(|id| {
            let next = map.len();
            *map.entry(*id).or_insert(next)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoreParams {
    /// Minimum cosine for two items to be linked inside a core.
    pub s_core: f64,
    /// Minimum share of other items an item must be linked to to seed or
    /// join a core.
    pub d_min: f64,
    /// Minimum cosine to a core member for a leftover item to join it.
    pub s_assign: f64,
}

impl Default for CoreParams {
    fn default() -> Self {
        CoreParams {
            s_core: 0.6,
            d_min: 0.3,
            s_assign: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoreClustering {
    /// Item indices per cluster, each sorted; cores first in discovery order.
    pub clusters: Vec<Vec<usize>>,
    pub unassigned: Vec<usize>,
}

/// Core-detection clustering.
///
/// 1. Link items whose cosine is at least `s_core`.
/// 2. Items linked to at least `d_min` of the other items are core
///    candidates. Cores are grown greedily: the strongest unused candidate
///    seeds a core, then candidates linked to every current member join.
///    A core needs two members.
/// 3. Every other item joins the core holding its most similar member, if
///    that similarity reaches `s_assign`.
/// 4. The rest stay unassigned.
///
/// Candidate strength is (degree, summed similarity to linked items), with
/// the vector components as a last tie-break so results do not depend on
/// input order.
pub fn core_cluster(vectors: &[WordVector], params: &CoreParams) -> Result<CoreClustering, VectorError> {
    let n = vectors.len();
    let mut sim = vec![0.0; n * n];
    for i in 0..n {
        sim[i * n + i] = 1.0;
        for j in i + 1..n {
            let s = cosine(&vectors[i], &vectors[j])?;
            sim[i * n + j] = s;
            sim[j * n + i] = s;
        }
    }
    let linked = |i: usize, j: usize| i != j && sim[i * n + j] >= params.s_core;

    let degree: Vec<usize> = (0..n)
        .map(|i| (0..n).filter(|&j| linked(i, j)).count())
        .collect();
    let strength: Vec<f64> = (0..n)
        .map(|i| (0..n).filter(|&j| linked(i, j)).map(|j| sim[i * n + j]).sum())
        .collect();

    let mut candidates: Vec<usize> = if n > 1 {
        (0..n)
            .filter(|&i| degree[i] as f64 / (n - 1) as f64 >= params.d_min && degree[i] > 0)
            .collect()
    } else {
        Vec::new()
    };
    candidates.sort_by(|&a, &b| {
        degree[b]
            .cmp(&degree[a])
            .then(strength[b].total_cmp(&strength[a]))
            .then_with(|| lex_cmp(&vectors[a], &vectors[b]))
            .then(a.cmp(&b))
    });

    let mut used = vec![false; n];
    let mut cores: Vec<Vec<usize>> = Vec::new();
    for (pos, &seed) in candidates.iter().enumerate() {
        if used[seed] {
            continue;
        }
        let mut core = vec![seed];
        for &c in &candidates[pos + 1..] {
            if !used[c] && core.iter().all(|&m| linked(m, c)) {
                core.push(c);
            }
        }
        if core.len() >= 2 {
            for &m in &core {
                used[m] = true;
            }
            cores.push(core);
        }
    }

    let mut clusters = cores.clone();
    let mut unassigned = Vec::new();
    for item in (0..n).filter(|&i| !used[i]) {
        let best = cores
            .iter()
            .enumerate()
            .map(|(ci, core)| {
                let s = core
                    .iter()
                    .map(|&m| sim[item * n + m])
                    .fold(f64::NEG_INFINITY, f64::max);
                (ci, s)
            })
            .filter(|&(_, s)| s >= params.s_assign)
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)));
        match best {
            Some((ci, _)) => clusters[ci].push(item),
            None => unassigned.push(item),
        }
    }
    for c in &mut clusters {
        c.sort_unstable();
    }
    Ok(CoreClustering {
        clusters,
        unassigned,
    })
}

fn lex_cmp(a: &WordVector, b: &WordVector) -> std::cmp::Ordering {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}
