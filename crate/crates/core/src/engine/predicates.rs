//! Closed-form classification predicates for cyclic groups. No graph search.

use crate::cayley::Mode;
use crate::error::{Error, Result};
use crate::zn::{is_square_free, Factorization};

fn odd_prime_square_divisors(n: u64) -> Vec<u64> {
    Factorization::new(n)
        .map(|f| {
            f.parts()
                .iter()
                .filter(|part| part.p > 2 && part.t >= 2)
                .map(|part| part.p)
                .collect()
        })
        .unwrap_or_default()
}

/// `Z_n` is an m-DCI-group iff `8 ∤ n` and `p² ∤ n` for every odd prime `p < m`.
/// Stated for `m ≥ 3` only.
pub fn predicate_mdci(n: u64, m: usize) -> Result<bool> {
    if m < 3 {
        return Err(Error::PredicateRange { min: 3 });
    }
    Factorization::new(n)?;
    Ok(!n.is_multiple_of(8) && odd_prime_square_divisors(n).iter().all(|&p| p >= m as u64))
}

/// `Z_n` is an m-CI-group iff `n ∈ {8, 9, 18}`, or `8 ∤ n` and `p² ∤ n` for
/// every odd prime `p < (m − 1)/2`. Stated for `m ≥ 6` only.
pub fn predicate_mci(n: u64, m: usize) -> Result<bool> {
    if m < 6 {
        return Err(Error::PredicateRange { min: 6 });
    }
    Factorization::new(n)?;
    if matches!(n, 8 | 9 | 18) {
        return Ok(true);
    }
    // p < (m-1)/2  ⇔  2p < m-1
    Ok(!n.is_multiple_of(8)
        && odd_prime_square_divisors(n)
            .iter()
            .all(|&p| 2 * p >= m as u64 - 1))
}

/// `Z_n` is a DCI-group iff `n = k` or `n = 2k` with `k` square-free.
pub fn predicate_dci_group(n: u64) -> bool {
    is_square_free(n) || (n.is_multiple_of(2) && is_square_free(n / 2))
}

/// `Z_n` is a CI-group iff `n ∈ {8, 9, 18}` or it is a DCI-group.
pub fn predicate_ci_group(n: u64) -> bool {
    matches!(n, 8 | 9 | 18) || predicate_dci_group(n)
}

/// The m-group predicate for a mode, where one is stated.
pub fn predicate_for(n: u64, m: usize, mode: Mode) -> Option<bool> {
    match mode {
        Mode::Digraph => predicate_mdci(n, m).ok(),
        Mode::Graph => predicate_mci(n, m).ok(),
    }
}
