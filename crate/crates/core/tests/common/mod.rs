//! Independent reference implementations used by the integration suites.
//! Nothing here calls into the library's correlation or graph code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TABLE2: &str = "investor_id,timestamp,side,price,volume
1,09:00:30,Buy,3211,2
1,09:03:06,Sell,3216,2
1,09:03:12,Sell,3214,1
1,09:08:02,Sell,3206,2
1,09:08:26,Buy,3204,6
1,09:10:28,Sell,3205,3
2,09:00:40,Buy,3211,3
2,09:03:04,Sell,3216,4
2,09:03:10,Buy,3214,2
2,09:08:05,Sell,3206,3
2,09:08:30,Buy,3204,10
2,09:12:02,Buy,3201,2
";

/// Pearson coefficient written straight from the averaged form
/// `(<ab> - <a><b>) / sqrt((<a²> - <a>²)(<b²> - <b>²))` over the union of
/// window indices with zero fill. `None` for a constant side.
pub fn naive_correlation(a: &[(i64, i64)], b: &[(i64, i64)]) -> Option<f64> {
    let ma: BTreeMap<i64, i64> = a.iter().copied().collect();
    let mb: BTreeMap<i64, i64> = b.iter().copied().collect();
    let union: BTreeSet<i64> = ma.keys().chain(mb.keys()).copied().collect();
    let ua: Vec<f64> = union.iter().map(|k| *ma.get(k).unwrap_or(&0) as f64).collect();
    let ub: Vec<f64> = union.iter().map(|k| *mb.get(k).unwrap_or(&0) as f64).collect();
    let constant = |v: &[f64]| v.iter().all(|&x| x == v[0]);
    if ua.len() < 2 || constant(&ua) || constant(&ub) {
        return None;
    }
    let avg = |v: Vec<f64>| v.iter().sum::<f64>() / v.len() as f64;
    let ab = avg(ua.iter().zip(&ub).map(|(x, y)| x * y).collect());
    let a1 = avg(ua.clone());
    let b1 = avg(ub.clone());
    let a2 = avg(ua.iter().map(|x| x * x).collect());
    let b2 = avg(ub.iter().map(|x| x * x).collect());
    Some((ab - a1 * b1) / ((a2 - a1 * a1) * (b2 - b1 * b1)).sqrt())
}

/// Components (size ≥ 2) by transitive closure: square the reachability
/// matrix `I + A` until it stops changing.
pub fn closure_components(n: usize, edges: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in edges {
        reach[a][b] = true;
        reach[b][a] = true;
    }
    loop {
        let mut next = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = (0..n).any(|k| reach[i][k] && reach[k][j]);
            }
        }
        if next == reach {
            break;
        }
        reach = next;
    }
    let mut out: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for row in &reach {
        let comp: BTreeSet<usize> = (0..n).filter(|&j| row[j]).collect();
        if comp.len() >= 2 {
            out.insert(comp);
        }
    }
    out.into_iter().collect()
}

/// Random aggregated-style series: up to `max_windows` distinct windows with
/// non-zero values.
pub fn random_pairs(rng: &mut ChaCha8Rng, max_windows: i64) -> Vec<(i64, i64)> {
    let len = rng.random_range(1..=max_windows as usize);
    let mut windows: BTreeSet<i64> = BTreeSet::new();
    while windows.len() < len {
        windows.insert(rng.random_range(0..max_windows));
    }
    windows
        .into_iter()
        .map(|w| {
            let mag = rng.random_range(1..=25);
            (w, if rng.random_bool(0.5) { mag } else { -mag })
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
