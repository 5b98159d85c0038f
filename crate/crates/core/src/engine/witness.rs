//! Explicit non-CI connection sets that certify the necessity direction of
//! the classification.

use serde::Serialize;

use super::{CiVerdict, Engine};
use crate::cayley::{ConnectionSet, Mode};
use crate::error::Result;
use crate::zn::{check_modulus, Factorization};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum WitnessFamily {
    /// `{1, 2, 5}` in `Z_8`, embedded in the subgroup of order 8.
    Z8Lift,
    /// `(⟨p⟩ + 1) ∪ {p}` in `Z_{p²}`, embedded in the subgroup of order `p²`.
    PrimeSquareDigraph { p: u64 },
    /// `{±1, ±2, n/2 ± 1}` for `8 | n`.
    EightDividesGraph,
    /// `{±1, ±3, n/3 ± 1, 2n/3 ± 1}` for `9 | n`.
    NineDividesGraph,
    /// `(⟨p⟩ + 1) ∪ (⟨p⟩ − 1) ∪ {±p}` in `Z_{p²}`, `p ≥ 5`, embedded.
    PrimeSquareGraph { p: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(flatten)]
    pub family: WitnessFamily,
    pub set: ConnectionSet,
    pub verdict: CiVerdict,
}

impl Witness {
    /// The engine agrees the set is not CI.
    pub fn confirmed(&self) -> bool {
        !self.verdict.is_ci
    }
}

/// Embeds a set of `Z_q` into `Z_n` via `x ↦ (n/q)·x`.
fn lift(n: u64, q: u64, members: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let step = n / q;
    members.into_iter().map(|x| (x % q) * step).collect()
}

/// The candidate sets of every family applicable to `(n, mode)`, unverified.
pub(crate) fn witness_sets(n: u64, mode: Mode) -> Result<Vec<(WitnessFamily, ConnectionSet)>> {
    check_modulus(n)?;
    let f = Factorization::new(n)?;
    let odd_square_primes: Vec<u64> = f
        .parts()
        .iter()
        .filter(|part| part.p > 2 && part.t >= 2)
        .map(|part| part.p)
        .collect();
    let mut out = Vec::new();
    match mode {
        Mode::Digraph => {
            if n.is_multiple_of(8) {
                out.push((WitnessFamily::Z8Lift, lift(n, 8, [1, 2, 5])));
            }
            for &p in &odd_square_primes {
                let q = p * p;
                let members = (0..p).map(|i| i * p + 1).chain([p]);
                out.push((WitnessFamily::PrimeSquareDigraph { p }, lift(n, q, members)));
            }
        }
        Mode::Graph => {
            if matches!(n, 8 | 9 | 18) {
                return Ok(Vec::new());
            }
            if n.is_multiple_of(8) {
                let h = n / 2;
                out.push((
                    WitnessFamily::EightDividesGraph,
                    vec![1, n - 1, 2, n - 2, h - 1, h + 1],
                ));
            }
            if n.is_multiple_of(9) {
                let (a, b) = (n / 3, 2 * n / 3);
                out.push((
                    WitnessFamily::NineDividesGraph,
                    vec![1, n - 1, 3, n - 3, a + 1, a - 1, b + 1, b - 1],
                ));
            }
            for &p in odd_square_primes.iter().filter(|&&p| p >= 5) {
                let q = p * p;
                let members = (0..p)
                    .flat_map(|i| [i * p + 1, (i * p + q - 1) % q])
                    .chain([p, q - p]);
                out.push((WitnessFamily::PrimeSquareGraph { p }, lift(n, q, members)));
            }
        }
    }
    out.into_iter()
        .map(|(family, members)| Ok((family, ConnectionSet::new(n, members, mode)?)))
        .collect()
}

impl Engine {
    /// Non-CI sets from every applicable family, each with the engine's verdict.
    pub fn witnesses(&self, n: u64, mode: Mode) -> Result<Vec<Witness>> {
        witness_sets(n, mode)?
            .into_iter()
            .map(|(family, set)| {
                let verdict = self.is_ci_reduced(&set)?;
                Ok(Witness { family, set, verdict })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn members(n: u64, mode: Mode) -> Vec<Vec<u64>> {
        witness_sets(n, mode)
            .unwrap()
            .into_iter()
            .map(|(_, s)| s.members().to_vec())
            .collect()
    }

    #[test]
    fn family_sets() {
        assert_eq!(members(16, Mode::Digraph), vec![vec![2, 4, 10]]);
        assert_eq!(members(16, Mode::Graph), vec![vec![1, 2, 7, 9, 14, 15]]);
        assert_eq!(
            members(25, Mode::Graph),
            vec![vec![1, 4, 5, 6, 9, 11, 14, 16, 19, 20, 21, 24]]
        );
        assert_eq!(members(9, Mode::Digraph), vec![vec![1, 3, 4, 7]]);
        assert!(members(30, Mode::Digraph).is_empty());
        assert!(members(18, Mode::Graph).is_empty());
        assert_eq!(members(27, Mode::Graph), vec![vec![1, 3, 8, 10, 17, 19, 24, 26]]);
        // 72 = 8·9: the Z_8 lift and the p = 3 family
        assert_eq!(
            members(72, Mode::Digraph),
            vec![vec![9, 18, 45], vec![8, 24, 32, 56]]
        );
    }

    #[test]
    fn verdicts() {
        let e = Engine::default();
        for (n, mode) in [
            (16, Mode::Digraph),
            (9, Mode::Digraph),
            (16, Mode::Graph),
            (25, Mode::Graph),
        ] {
            let ws = e.witnesses(n, mode).unwrap();
            assert!(!ws.is_empty());
            assert!(ws.iter().all(Witness::confirmed), "n = {n} {mode}");
        }
    }
}
