//! Oracles shared by the integration tests, written without the library's
//! algorithms.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use laxmat::k0chain::IntMatrix;
use laxmat::profunctor::Profunctor;

// ---------- small integer oracles ----------

pub fn to_i128(m: &IntMatrix) -> Vec<Vec<i128>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(|x| x.to_i128().unwrap()).collect()).collect()
}

/// Leibniz expansion.
pub fn det(a: &[Vec<i128>]) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0;
    permute(&mut perm, 0, a, &mut total);
    total
}

fn permute(p: &mut Vec<usize>, k: usize, a: &[Vec<i128>], total: &mut i128) {
    if k == p.len() {
        let inversions = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        let prod: i128 = (0..p.len()).map(|i| a[i][p[i]]).product();
        *total += if inversions % 2 == 0 { prod } else { -prod };
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, a, total);
        p.swap(k, i);
    }
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

pub fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Invariant factors as ratios of determinantal divisors.
pub fn invariant_factors_oracle(a: &[Vec<i128>], rows: usize, cols: usize) -> Vec<i128> {
    let mut out = Vec::new();
    let mut prev = 1;
    for k in 1..=rows.min(cols) {
        let mut g = 0;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| a[r][c]).collect()).collect();
                g = gcd(g, det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

/// Rank over ℚ by fraction-free elimination.
pub fn rank_oracle(m: &IntMatrix) -> usize {
    let mut a = to_i128(m);
    let (rows, cols) = m.shape();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, p);
        for r in 0..rows {
            if r != rank && a[r][c] != 0 {
                let (x, y) = (a[rank][c], a[r][c]);
                for k in 0..cols {
                    a[r][k] = a[r][k] * x - a[rank][k] * y;
                }
                let g = a[r].iter().fold(0, |g, &v| gcd(g, v));
                if g > 1 {
                    a[r].iter_mut().for_each(|v| *v /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

// ---------- coend oracle ----------

pub fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// `|(N ∘ M)(e, c)|` by gluing `(n·g, m) ~ (n, g·m)` over all middle arrows.
pub fn coend_sizes(n: &Profunctor, m: &Profunctor) -> BTreeMap<(usize, usize), usize> {
    let mid = m.target();
    let mut out = BTreeMap::new();
    for e in 0..n.target().object_count() {
        for c in 0..m.source().object_count() {
            let mut index = BTreeMap::new();
            for d in 0..mid.object_count() {
                for i in 0..n.set_size(e, d) {
                    for j in 0..m.set_size(d, c) {
                        let k = index.len();
                        index.insert((d, i, j), k);
                    }
                }
            }
            let mut parent: Vec<usize> = (0..index.len()).collect();
            for g in 0..mid.morphism_count() {
                let (d0, d1) = (mid.src(g), mid.dst(g));
                for i in 0..n.set_size(e, d1) {
                    for j in 0..m.set_size(d0, c) {
                        let lhs = index[&(d0, n.right_act(g, e, i), j)];
                        let rhs = index[&(d1, i, m.left_act(g, c, j))];
                        let (a, b) = (find(&mut parent, lhs), find(&mut parent, rhs));
                        parent[a] = b;
                    }
                }
            }
            let classes = (0..parent.len()).filter(|&x| find(&mut parent, x) == x).count();
            out.insert((e, c), classes);
        }
    }
    out
}
