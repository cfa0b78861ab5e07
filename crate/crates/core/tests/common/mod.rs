//! Reference implementations used as oracles. Deliberately naive and
//! written without touching the library internals.

#![allow(dead_code)]

/// Watermark bits → self-inverting permutation, straight from the bit-string
/// construction, using strings throughout.
pub fn naive_sip(w: u64) -> Vec<usize> {
    let b = format!("{w:b}");
    let n = b.len();
    let b_prime = format!("{}{}1", "0".repeat(n), b);
    let b_star: String = b_prime
        .chars()
        .map(|c| if c == '0' { '1' } else { '0' })
        .collect();
    let x: Vec<usize> = b_star
        .char_indices()
        .filter(|&(_, c)| c == '0')
        .map(|(i, _)| i + 1)
        .collect();
    let y: Vec<usize> = b_star
        .char_indices()
        .filter(|&(_, c)| c == '1')
        .map(|(i, _)| i + 1)
        .collect();
    let bitonic: Vec<usize> = x.into_iter().chain(y.into_iter().rev()).collect();

    let len = bitonic.len();
    let mut sip: Vec<usize> = (1..=len).collect();
    for k in 0..len / 2 {
        let (a, c) = (bitonic[k], bitonic[len - 1 - k]);
        sip[a - 1] = c;
        sip[c - 1] = a;
    }
    sip
}

/// Does `i` dominate `j` in `p`: larger, and earlier.
fn dominates(pos: &[usize], i: usize, j: usize) -> bool {
    i > j && pos[i] < pos[j]
}

/// `pos[v]` = one-indexed position of value `v`.
fn positions(p: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; p.len() + 1];
    for (idx, &v) in p.iter().enumerate() {
        pos[v] = idx + 1;
    }
    pos
}

/// Every didomination pair `(i, j)`: `i` dominates `j` with no `k` in
/// between. Cubic on purpose.
pub fn naive_didominations(p: &[usize]) -> Vec<(usize, usize)> {
    let n = p.len();
    let pos = positions(p);
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if !dominates(&pos, i, j) {
                continue;
            }
            let direct = (1..=n).all(|k| !(dominates(&pos, i, k) && dominates(&pos, k, j)));
            if direct {
                out.push((i, j));
            }
        }
    }
    out.sort_unstable();
    out
}

/// `p(j)` for `j = 1..=n`: the largest didominator of `j`, or `n+1` when
/// there is none. Index 0 is unused.
pub fn naive_max_didominators(p: &[usize]) -> Vec<usize> {
    let n = p.len();
    let mut best = vec![n + 1; n + 1];
    let mut seen = vec![false; n + 1];
    for (i, j) in naive_didominations(p) {
        if !seen[j] || i > best[j] {
            best[j] = i;
            seen[j] = true;
        }
    }
    best[0] = 0;
    best
}

/// All permutations of `1..=n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (1..=n).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// A random self-inverting permutation of `1..=len`.
pub fn random_sip(rng: &mut impl rand::Rng, len: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut order: Vec<usize> = (1..=len).collect();
    order.shuffle(rng);
    let pairs = rng.gen_range(0..=len / 2);
    let mut sip: Vec<usize> = (1..=len).collect();
    for k in 0..pairs {
        let (a, b) = (order[2 * k], order[2 * k + 1]);
        sip[a - 1] = b;
        sip[b - 1] = a;
    }
    sip
}
