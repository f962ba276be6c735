//! Lexicographic enumeration of k-subsets and related counting helpers.
//!
//! Rows and columns of every compound-style matrix in this crate are indexed
//! by the k-subsets of `0..n` in lexicographic order, so `subsets(n, k)[r]`
//! is the subset labelling row `r`.

/// Binomial coefficient C(n, k); 0 when k > n.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// All k-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k));
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // rightmost position that can still be incremented
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Position of a sorted k-subset in the lexicographic order of `subsets(n, k)`.
pub fn rank(n: usize, subset: &[usize]) -> usize {
    let k = subset.len();
    let mut r = 0;
    let mut prev = 0;
    for (i, &s) in subset.iter().enumerate() {
        for v in prev..s {
            r += binomial(n - v - 1, k - i - 1);
        }
        prev = s + 1;
    }
    r
}

/// Inverse of [`rank`].
pub fn unrank(n: usize, k: usize, mut r: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut v = 0;
    for i in 0..k {
        loop {
            let c = binomial(n - v - 1, k - i - 1);
            if r < c {
                break;
            }
            r -= c;
            v += 1;
        }
        out.push(v);
        v += 1;
    }
    out
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// Size cap for compound matrices; `TROPSPEC_SIZE_CAP` overrides the default.
pub fn size_cap() -> usize {
    std::env::var("TROPSPEC_SIZE_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SIZE_CAP)
}

pub const DEFAULT_SIZE_CAP: usize = 3000;
