//! Indexing of three-part partitions.
//!
//! A partition `mu1 >= mu2 >= mu3 >= 0` maps to the 3-subset
//! `{mu3 + 1, mu2 + 2, mu1 + 3}` of `{1, .., n + 3}`, which is then ranked in
//! revolving-door (minimal change) order. Subsets avoiding `n + 3` precede
//! those containing it, so the rank does not depend on `n`.

use crate::error::{Error, Result};

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

fn check(mu: [u32; 3]) -> Result<()> {
    if mu[0] >= mu[1] && mu[1] >= mu[2] {
        Ok(())
    } else {
        Err(Error::InvalidPartition(mu))
    }
}

/// 1-based revolving-door index of a sorted-descending partition.
pub fn index_partition(mu: [u32; 3]) -> Result<u64> {
    check(mu)?;
    let t = [
        u64::from(mu[2]) + 1,
        u64::from(mu[1]) + 2,
        u64::from(mu[0]) + 3,
    ];
    // rank = sum_{i=k..1} (-1)^{k-i} C(t_i, i) - (k mod 2), with k = 3.
    let rank = binomial(t[2], 3) + binomial(t[0], 1) - binomial(t[1], 2) - 1;
    Ok(rank + 1)
}

/// Inverse of [`index_partition`] over partitions with parts at most `n`.
pub fn unindex_partition(index: u64, n: u32) -> Result<[u32; 3]> {
    let max = binomial(u64::from(n) + 3, 3);
    if index == 0 || index > max {
        return Err(Error::IndexOutOfRange { index, max });
    }
    let mut r = index - 1;
    let mut x = u64::from(n) + 3;
    let mut t = [0u64; 3];
    for i in (1..=3u64).rev() {
        while binomial(x, i) > r {
            x -= 1;
        }
        t[i as usize - 1] = x + 1;
        r = binomial(x + 1, i) - r - 1;
    }
    Ok([(t[2] - 3) as u32, (t[1] - 2) as u32, (t[0] - 1) as u32])
}
