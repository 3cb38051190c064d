//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the code paths it is used to check.

#![allow(dead_code)]

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                extend(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Counts every Latin square of order `n` by stacking permutation rows with
/// no column clash, and separately those whose first column is `0..n`.
pub fn count_latin_squares(n: usize) -> (u64, u64) {
    let perms = permutations(n);
    let compatible: Vec<Vec<bool>> = perms
        .iter()
        .map(|a| {
            perms
                .iter()
                .map(|b| a.iter().zip(b).all(|(x, y)| x != y))
                .collect()
        })
        .collect();
    fn stack(
        perms: &[Vec<usize>],
        compatible: &[Vec<bool>],
        rows: &mut Vec<usize>,
        total: &mut u64,
        natural: &mut u64,
    ) {
        let n = perms[0].len();
        if rows.len() == n {
            *total += 1;
            if rows.iter().enumerate().all(|(t, &r)| perms[r][0] == t) {
                *natural += 1;
            }
            return;
        }
        for i in 0..perms.len() {
            if rows.iter().all(|&r| compatible[r][i]) {
                rows.push(i);
                stack(perms, compatible, rows, total, natural);
                rows.pop();
            }
        }
    }
    let (mut total, mut natural) = (0, 0);
    stack(
        &perms,
        &compatible,
        &mut Vec::new(),
        &mut total,
        &mut natural,
    );
    (total, natural)
}

/// Every `(start, period)` such that `w[start..start + 2p + 1]` is `c x c x c`,
/// checked by slicing out `c`, `x` and comparing the pieces.
pub fn all_overlaps<T: Eq>(w: &[T]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for p in 1..=w.len() / 2 {
        for start in 0..w.len() {
            if start + 2 * p + 1 > w.len() {
                break;
            }
            let c = &w[start];
            let x = &w[start + 1..start + p];
            let second = &w[start + p + 1..start + 2 * p];
            if w[start + p] == *c && w[start + 2 * p] == *c && x == second {
                out.push((start, p));
            }
        }
    }
    out
}

/// Every `(start, half)` such that `w[start..start + half] == w[start + half..start + 2·half]`.
pub fn all_squares<T: Eq>(w: &[T]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for h in 1..=w.len() / 2 {
        for start in 0..=w.len() - 2 * h {
            if w[start..start + h] == w[start + h..start + 2 * h] {
                out.push((start, h));
            }
        }
    }
    out
}

/// Smallest `e` such that `w[..e]` contains an overlap, by testing every
/// factor ending at `e` for increasing `e`.
pub fn first_overlap_end<T: Eq>(w: &[T]) -> Option<usize> {
    (3..=w.len()).find(|&e| {
        (1..=(e - 1) / 2).any(|p| {
            let s = e - 2 * p - 1;
            (s..s + p + 1).all(|k| w[k] == w[k + p])
        })
    })
}
