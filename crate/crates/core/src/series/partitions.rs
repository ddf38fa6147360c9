/// Number of ways to write `n = Σ_{i=0}^{k} p_i·2^i` with `k ≥ 0` and every
/// `p_i ≥ 1`. `partitions_pow2(0) = 1` by convention.
pub fn partitions_pow2(n: usize) -> u128 {
    partitions_pow2_table(n)[n]
}

/// [`partitions_pow2`] for every index in `0..=nmax`.
///
/// Fixing the top part `2^k` forces one copy of each `2^i`, `i ≤ k`, which
/// uses `2^{k+1} − 1`; the remainder is an unrestricted partition into
/// powers of two not exceeding `2^k`.
pub fn partitions_pow2_table(nmax: usize) -> Vec<u128> {
    let mut out = vec![0u128; nmax + 1];
    out[0] = 1;
    // Partitions into parts from {1, 2, …, 2^k}, extended one part size at a time.
    let mut bounded = vec![1u128; nmax + 1];
    let mut k = 0;
    while (1usize << (k + 1)) - 1 <= nmax {
        if k > 0 {
            let part = 1usize << k;
            for v in part..=nmax {
                bounded[v] = bounded[v]
                    .checked_add(bounded[v - part])
                    .expect("partition count overflows u128");
            }
        }
        let forced = (1usize << (k + 1)) - 1;
        for n in forced.max(1)..=nmax {
            out[n] = out[n]
                .checked_add(bounded[n - forced])
                .expect("partition count overflows u128");
        }
        k += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Counts tuples `(p_0, …, p_k)` directly.
    fn brute(n: usize) -> u128 {
        fn go(rest: usize, i: usize) -> u128 {
            // Either stop here (k = i − 1, needs rest = 0) or place p_i ≥ 1.
            let mut total = u128::from(rest == 0 && i > 0);
            let w = 1usize << i;
            let mut p = 1;
            while p * w <= rest {
                total += go(rest - p * w, i + 1);
                p += 1;
            }
            total
        }
        if n == 0 {
            1
        } else {
            go(n, 0)
        }
    }

    #[test]
    fn small_values() {
        assert_eq!(partitions_pow2(0), 1);
        assert_eq!(partitions_pow2(1), 1);
        assert_eq!(partitions_pow2(4), 2);
        assert_eq!(partitions_pow2(5), 3);
    }

    #[test]
    fn table_matches_brute_force() {
        let t = partitions_pow2_table(60);
        for n in 0..=60 {
            assert_eq!(t[n], brute(n), "n = {n}");
        }
    }

    #[test]
    fn recurrence() {
        let t = partitions_pow2_table(200);
        for n in 3..=200 {
            let s: u128 = t[..=(n - 1) / 2].iter().sum();
            assert_eq!(t[n], s, "n = {n}");
        }
    }
}
