use serde::Serialize;

use crate::cayley::ConnectionSet;
use crate::zn::{generator_gcd, is_prime, subgroup_of_order};

/// Connection sets built from cosets of a small subgroup, each CI by a
/// structural argument rather than by search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum CosetCase {
    /// `S = H + s` for a subgroup `H` and `s ∉ H`.
    #[serde(rename = "coset-case-i")]
    SubgroupCoset { subgroup: Vec<u64>, shift: u64 },
    /// `S = (P + s) ∪ (P − s)`, `|P| = p` an odd prime, `P + s ≠ P − s`.
    #[serde(rename = "coset-case-ii")]
    SymmetricPair { subgroup: Vec<u64>, shift: u64 },
    /// `S = (P + s) ∪ (P − s) ∪ {n/2}` with `P` as in case ii.
    #[serde(rename = "coset-case-iii")]
    SymmetricPairWithHalf { subgroup: Vec<u64>, shift: u64 },
}

impl CosetCase {
    pub fn subgroup(&self) -> &[u64] {
        match self {
            CosetCase::SubgroupCoset { subgroup, .. }
            | CosetCase::SymmetricPair { subgroup, .. }
            | CosetCase::SymmetricPairWithHalf { subgroup, .. } => subgroup,
        }
    }

    pub fn shift(&self) -> u64 {
        match self {
            CosetCase::SubgroupCoset { shift, .. }
            | CosetCase::SymmetricPair { shift, .. }
            | CosetCase::SymmetricPairWithHalf { shift, .. } => *shift,
        }
    }

    /// Case iii is only known to be CI when `p² | n` and `⟨S⟩ = Z_n`.
    pub fn half_edge_hypotheses_hold(&self, set: &ConnectionSet) -> bool {
        let CosetCase::SymmetricPairWithHalf { subgroup, .. } = self else {
            return false;
        };
        let n = set.n();
        let p = subgroup.len() as u64;
        n.is_multiple_of(2) && p % 2 == 1 && n.is_multiple_of(p * p) && generator_gcd(n, set.members()) == 1
    }
}

fn translate(subgroup: &[u64], shift: u64, n: u64) -> Vec<u64> {
    subgroup.iter().map(|&h| (h + shift) % n).collect()
}

fn symmetric_pair(n: u64, members: &[u64]) -> Option<(Vec<u64>, u64)> {
    let size = members.len() as u64;
    if !size.is_multiple_of(2) {
        return None;
    }
    let p = size / 2;
    if p.is_multiple_of(2) || !is_prime(p) || !n.is_multiple_of(p) {
        return None;
    }
    let subgroup = subgroup_of_order(n, p).ok()?;
    let shift = members[0];
    let plus = translate(&subgroup, shift, n);
    let minus = translate(&subgroup, n - shift, n);
    let mut union: Vec<u64> = plus.iter().chain(&minus).copied().collect();
    union.sort_unstable();
    union.dedup();
    // equal sizes mean the two cosets are disjoint, i.e. P + s ≠ P − s
    (union == members).then_some((subgroup, shift))
}

pub fn recognize_coset_case(set: &ConnectionSet) -> Option<CosetCase> {
    let n = set.n();
    let members = set.members();
    let size = members.len() as u64;
    if size == 0 {
        return None;
    }
    if n.is_multiple_of(size) {
        let subgroup = subgroup_of_order(n, size).ok()?;
        let shift = members[0];
        let mut coset = translate(&subgroup, shift, n);
        coset.sort_unstable();
        if coset == members {
            return Some(CosetCase::SubgroupCoset { subgroup, shift });
        }
    }
    if let Some((subgroup, shift)) = symmetric_pair(n, members) {
        return Some(CosetCase::SymmetricPair { subgroup, shift });
    }
    if n.is_multiple_of(2) && set.contains(n / 2) {
        let rest: Vec<u64> = members.iter().copied().filter(|&x| x != n / 2).collect();
        if let Some((subgroup, shift)) = symmetric_pair(n, &rest) {
            return Some(CosetCase::SymmetricPairWithHalf { subgroup, shift });
        }
    }
    None
}
