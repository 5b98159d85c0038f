//! Isomorphism via keys and solving sets, CI tests, and classification sweeps.
//!
//! Two connection sets with different keys give non-isomorphic digraphs; with
//! equal keys `k` they are isomorphic exactly when some permutation of the
//! solving set `P(k)` maps one onto the other. A set is CI when every such
//! image is already a unit multiple of it.

mod coset;
mod predicates;
mod sweep;
mod witness;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::cayley::{aut_orbit, brute_force_isomorphic, build_cayley, ConnectionSet, DEFAULT_ORACLE_CUTOFF};
use crate::error::{Error, Result};
use crate::keyspace::{Key, KeyTable};
use crate::multiplier::{GenuineMultiplier, SolvingSet};
use crate::zn::{generator_gcd, Factorization};

pub use coset::{recognize_coset_case, CosetCase};
pub use predicates::{predicate_ci_group, predicate_dci_group, predicate_for, predicate_mci, predicate_mdci};
pub use sweep::{orbit_representatives, ClassificationReport, Counterexample};
pub use witness::{Witness, WitnessFamily};

pub const DEFAULT_SOLVING_SET_CACHE_LIMIT: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    /// Largest `n` the brute-force oracle accepts.
    pub oracle_cutoff: u64,
    /// Solving sets with at most this many multipliers are tabulated as
    /// whole permutations; larger ones are evaluated lazily.
    pub solving_set_cache_limit: usize,
    pub workers: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            oracle_cutoff: DEFAULT_ORACLE_CUTOFF,
            solving_set_cache_limit: DEFAULT_SOLVING_SET_CACHE_LIMIT,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsoReason {
    KeyMismatch,
    MultiplierFound,
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoVerdict {
    pub isomorphic: bool,
    pub reason: IsoReason,
    #[serde(rename = "multiplier")]
    pub witness_multiplier: Option<GenuineMultiplier>,
    pub key_s: Key,
    pub key_t: Key,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FastPath {
    None,
    ZeroKey,
    CosetCaseI,
    CosetCaseIi,
    CosetCaseIii,
    Reduction,
}

impl FastPath {
    pub fn as_str(&self) -> &'static str {
        match self {
            FastPath::None => "none",
            FastPath::ZeroKey => "zero-key",
            FastPath::CosetCaseI => "coset-case-i",
            FastPath::CosetCaseIi => "coset-case-ii",
            FastPath::CosetCaseIii => "coset-case-iii",
            FastPath::Reduction => "reduction",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CiVerdict {
    #[serde(rename = "ci")]
    pub is_ci: bool,
    /// A set isomorphic to `S` outside its unit orbit; present iff not CI.
    pub witness: Option<ConnectionSet>,
    pub fast_path: FastPath,
}

impl CiVerdict {
    fn ci(fast_path: FastPath) -> Self {
        CiVerdict {
            is_ci: true,
            witness: None,
            fast_path,
        }
    }
}

struct SolvingEntry {
    set: SolvingSet,
    table: Option<Vec<Vec<u64>>>,
}

impl SolvingEntry {
    fn image_of(&self, index: usize, members: &[u64]) -> Vec<u64> {
        let mut image: Vec<u64> = match &self.table {
            Some(table) => members.iter().map(|&x| table[index][x as usize]).collect(),
            None => members.iter().map(|&x| self.set.image(index, x)).collect(),
        };
        image.sort_unstable();
        image
    }
}

/// Cached per-modulus data: factorization, key table and solving sets.
struct ZnContext {
    keys: KeyTable,
    solving: Vec<OnceLock<SolvingEntry>>,
}

impl ZnContext {
    fn new(n: u64) -> Result<Self> {
        let f = Factorization::new(n)?;
        let keys = KeyTable::new(&f);
        let solving = (0..keys.keys().len()).map(|_| OnceLock::new()).collect();
        Ok(ZnContext { keys, solving })
    }

    fn solving(&self, key: &Key, cache_limit: usize) -> &SolvingEntry {
        let index = self.keys.index_of(key).expect("key belongs to its own key space");
        self.solving[index].get_or_init(|| {
            let set = SolvingSet::new(key);
            let table = set.function_table(cache_limit);
            SolvingEntry { set, table }
        })
    }
}

/// The decision engine. Cheap to construct; per-modulus tables are built on
/// first use and shared across threads.
pub struct Engine {
    config: EngineConfig,
    contexts: Mutex<HashMap<u64, Arc<ZnContext>>>,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new(EngineConfig::default())
    }
}

impl Engine {
    pub fn new(config: EngineConfig) -> Self {
        Engine {
            config,
            contexts: Mutex::new(HashMap::new()),
        }
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    fn context(&self, n: u64) -> Result<Arc<ZnContext>> {
        if let Some(ctx) = self.contexts.lock().expect("context cache poisoned").get(&n) {
            return Ok(Arc::clone(ctx));
        }
        let ctx = Arc::new(ZnContext::new(n)?);
        let mut cache = self.contexts.lock().expect("context cache poisoned");
        Ok(Arc::clone(cache.entry(n).or_insert(ctx)))
    }

    pub fn key_of_set(&self, set: &ConnectionSet) -> Result<Key> {
        self.context(set.n())?.keys.key_of_members(set.members())
    }

    pub fn solving_set(&self, key: &Key) -> Result<SolvingSet> {
        let ctx = self.context(key.n())?;
        Ok(ctx.solving(key, self.config.solving_set_cache_limit).set.clone())
    }

    fn check_pair(s: &ConnectionSet, t: &ConnectionSet) -> Result<()> {
        if s.n() != t.n() {
            return Err(Error::ModulusMismatch {
                expected: s.n(),
                found: t.n(),
            });
        }
        if s.mode() != t.mode() {
            return Err(Error::ModeMismatch);
        }
        if s.is_empty() || t.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(())
    }

    /// Decides `Cay(Z_n, S) ≅ Cay(Z_n, T)`. The witness is the first
    /// multiplier of `P(k)` in enumeration order with `S^f = T`.
    pub fn muzychuk_isomorphic(&self, s: &ConnectionSet, t: &ConnectionSet) -> Result<IsoVerdict> {
        Self::check_pair(s, t)?;
        let ctx = self.context(s.n())?;
        let key_s = ctx.keys.key_of_members(s.members())?;
        let key_t = ctx.keys.key_of_members(t.members())?;
        if key_s != key_t || s.len() != t.len() {
            // equal keys with different sizes cannot happen for bijections, but keep the check total
            let reason = if key_s != key_t {
                IsoReason::KeyMismatch
            } else {
                IsoReason::Exhausted
            };
            return Ok(IsoVerdict {
                isomorphic: false,
                reason,
                witness_multiplier: None,
                key_s,
                key_t,
            });
        }
        let entry = ctx.solving(&key_s, self.config.solving_set_cache_limit);
        let found = (0..entry.set.len()).find(|&i| entry.image_of(i, s.members()) == t.members());
        Ok(IsoVerdict {
            isomorphic: found.is_some(),
            reason: if found.is_some() {
                IsoReason::MultiplierFound
            } else {
                IsoReason::Exhausted
            },
            witness_multiplier: found.map(|i| entry.set.get(i)),
            key_s,
            key_t,
        })
    }

    /// Every `T` with `Cay(Z_n, T) ≅ Cay(Z_n, S)`, as `{S^f : f ∈ P(k(S))}`.
    pub fn isomorphism_class(&self, s: &ConnectionSet) -> Result<Vec<ConnectionSet>> {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        let ctx = self.context(s.n())?;
        let key = ctx.keys.key_of_members(s.members())?;
        let entry = ctx.solving(&key, self.config.solving_set_cache_limit);
        let mut class: Vec<ConnectionSet> = (0..entry.set.len())
            .map(|i| s.with_members(s.n(), entry.image_of(i, s.members())))
            .collect();
        class.sort();
        class.dedup();
        for member in &class {
            let k = ctx.keys.key_of_members(member.members())?;
            if k != key {
                return Err(Error::Internal(format!(
                    "image {member} of {s} has key {k}, expected {key}"
                )));
            }
        }
        Ok(class)
    }

    /// CI test by scanning the whole solving set of `k(S)` in `Z_n`.
    pub fn is_ci(&self, s: &ConnectionSet) -> Result<CiVerdict> {
        if s.is_empty() {
            return Ok(CiVerdict::ci(FastPath::None));
        }
        let ctx = self.context(s.n())?;
        let key = ctx.keys.key_of_members(s.members())?;
        let entry = ctx.solving(&key, self.config.solving_set_cache_limit);
        let orbit = aut_orbit(s);
        for i in 0..entry.set.len() {
            let image = s.with_members(s.n(), entry.image_of(i, s.members()));
            if !orbit.contains(&image) {
                let k = ctx.keys.key_of_members(image.members())?;
                if k != key {
                    return Err(Error::Internal(format!(
                        "witness {image} of {s} has key {k}, expected {key}"
                    )));
                }
                return Ok(CiVerdict {
                    is_ci: false,
                    witness: Some(image),
                    fast_path: FastPath::None,
                });
            }
        }
        Ok(CiVerdict::ci(FastPath::None))
    }

    /// CI test inside `⟨S⟩ ≅ Z_{n'}`; a witness is mapped back into `Z_n`.
    pub fn is_ci_reduced(&self, s: &ConnectionSet) -> Result<CiVerdict> {
        if s.is_empty() {
            return Ok(CiVerdict::ci(FastPath::None));
        }
        let g = generator_gcd(s.n(), s.members());
        if g == 1 {
            return self.is_ci(s);
        }
        let reduced_n = s.n() / g;
        let reduced = s.with_members(reduced_n, s.members().iter().map(|x| x / g).collect());
        let verdict = self.is_ci(&reduced)?;
        Ok(CiVerdict {
            is_ci: verdict.is_ci,
            witness: verdict
                .witness
                .map(|w| s.with_members(s.n(), w.members().iter().map(|x| x * g).collect())),
            fast_path: FastPath::Reduction,
        })
    }

    /// CI when `k(S)` is the zero key, or the almost zero key for `n ≡ 4 (mod 8)`.
    pub fn zero_key_fast_path(&self, s: &ConnectionSet) -> Result<Option<CiVerdict>> {
        let key = self.key_of_set(s)?;
        Ok((key.is_zero() || key.is_almost_zero()).then(|| CiVerdict::ci(FastPath::ZeroKey)))
    }

    /// Coset-shape fast paths. Case iii only fires under its extra hypotheses
    /// (`p² | n`, `⟨S⟩ = Z_n`).
    pub fn coset_fast_path(&self, s: &ConnectionSet) -> Option<CiVerdict> {
        match recognize_coset_case(s)? {
            CosetCase::SubgroupCoset { .. } => Some(CiVerdict::ci(FastPath::CosetCaseI)),
            CosetCase::SymmetricPair { .. } => Some(CiVerdict::ci(FastPath::CosetCaseIi)),
            case @ CosetCase::SymmetricPairWithHalf { .. } => case
                .half_edge_hypotheses_hold(s)
                .then(|| CiVerdict::ci(FastPath::CosetCaseIii)),
        }
    }

    /// Full pipeline: fast paths first, then the reduced exhaustive test.
    pub fn decide_ci(&self, s: &ConnectionSet) -> Result<CiVerdict> {
        if s.is_empty() {
            return Ok(CiVerdict::ci(FastPath::None));
        }
        if let Some(v) = self.zero_key_fast_path(s)? {
            return Ok(v);
        }
        if let Some(v) = self.coset_fast_path(s) {
            return Ok(v);
        }
        self.is_ci_reduced(s)
    }

    /// Brute-force oracle on the two Cayley digraphs, honouring the configured cutoff.
    pub fn oracle_isomorphic(&self, s: &ConnectionSet, t: &ConnectionSet) -> Result<Option<Vec<u64>>> {
        brute_force_isomorphic(&build_cayley(s), &build_cayley(t), self.config.oracle_cutoff)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::Mode;

    fn set(n: u64, m: &[u64]) -> ConnectionSet {
        ConnectionSet::new(n, m.to_vec(), Mode::Digraph).unwrap()
    }

    #[test]
    fn iso_examples() {
        let e = Engine::default();
        let v = e
            .muzychuk_isomorphic(&set(8, &[1, 2, 5]), &set(8, &[2, 3, 7]))
            .unwrap();
        assert!(v.isomorphic);
        assert_eq!(v.reason, IsoReason::MultiplierFound);
        assert_eq!(v.witness_multiplier.unwrap().rows(), &[vec![1, 1, 3]]);

        let v = e
            .muzychuk_isomorphic(&set(8, &[1, 2, 5]), &set(8, &[1, 2, 5]))
            .unwrap();
        assert_eq!(v.witness_multiplier.unwrap().rows(), &[vec![1, 1, 1]]);

        let v = e
            .muzychuk_isomorphic(&set(8, &[1, 2, 5]), &set(8, &[1, 2, 3]))
            .unwrap();
        assert!(!v.isomorphic);
        assert_eq!(v.reason, IsoReason::KeyMismatch);
        assert_eq!(v.key_s.rows(), &[vec![0, 0, 1]]);
        assert_eq!(v.key_t.rows(), &[vec![0, 0, 0]]);
    }

    #[test]
    fn iso_errors() {
        let e = Engine::default();
        assert_eq!(
            e.muzychuk_isomorphic(&set(8, &[]), &set(8, &[1])).unwrap_err(),
            Error::EmptySet
        );
        let g = ConnectionSet::new(8, vec![1, 7], Mode::Graph).unwrap();
        assert_eq!(
            e.muzychuk_isomorphic(&g, &set(8, &[1, 7])).unwrap_err(),
            Error::ModeMismatch
        );
        assert!(e.muzychuk_isomorphic(&set(8, &[1]), &set(9, &[1])).is_err());
    }

    #[test]
    fn isomorphism_classes() {
        let e = Engine::default();
        let class = e.isomorphism_class(&set(8, &[1, 2, 5])).unwrap();
        // the four images under P((0,0,1)), evaluated by hand: (1,1,1) id,
        // (1,1,3) → {2,3,7}, (1,3,1) → {1,5,6}, (1,3,3) → {3,6,7}
        let got: Vec<Vec<u64>> = class.iter().map(|c| c.members().to_vec()).collect();
        assert_eq!(
            got,
            vec![vec![1, 2, 5], vec![1, 5, 6], vec![2, 3, 7], vec![3, 6, 7]]
        );

        let s = set(12, &[1, 5]);
        assert_eq!(e.isomorphism_class(&s).unwrap(), aut_orbit(&s).members);
        let single = set(9, &[3]);
        assert_eq!(e.isomorphism_class(&single).unwrap(), aut_orbit(&single).members);
    }

    #[test]
    fn ci_examples() {
        let e = Engine::default();
        let v = e.is_ci(&set(8, &[1, 2, 5])).unwrap();
        assert!(!v.is_ci);
        assert_eq!(v.witness.unwrap().members(), &[2, 3, 7]);
        assert!(e.is_ci(&set(9, &[1, 4, 7])).unwrap().is_ci);
        assert!(!e.is_ci(&set(9, &[1, 3, 4, 7])).unwrap().is_ci);
        assert!(e.is_ci(&set(9, &[])).unwrap().is_ci);
    }

    #[test]
    fn reduced_examples() {
        let e = Engine::default();
        let v = e.is_ci_reduced(&set(16, &[2, 4, 10])).unwrap();
        assert!(!v.is_ci);
        assert_eq!(v.fast_path, FastPath::Reduction);
        let w = v.witness.unwrap();
        assert_eq!(w.n(), 16);
        assert_eq!(w.members(), &[4, 6, 14]);
        assert!(!aut_orbit(&set(16, &[2, 4, 10])).contains(&w));

        let s = set(8, &[1, 2, 5]);
        assert_eq!(e.is_ci_reduced(&s).unwrap(), e.is_ci(&s).unwrap());

        let v = e.is_ci_reduced(&set(12, &[4, 8])).unwrap();
        assert!(v.is_ci);
        assert_eq!(v.fast_path, FastPath::Reduction);
    }

    #[test]
    fn zero_key_examples() {
        let e = Engine::default();
        assert_eq!(
            e.zero_key_fast_path(&set(12, &[1, 5])).unwrap(),
            Some(CiVerdict::ci(FastPath::ZeroKey))
        );
        assert_eq!(e.zero_key_fast_path(&set(8, &[1, 2, 5])).unwrap(), None);
        let full = set(4, &[1, 2, 3]);
        assert!(e.key_of_set(&full).unwrap().is_almost_zero());
        assert!(e.zero_key_fast_path(&full).unwrap().is_some());
    }

    #[test]
    fn pipeline_tags() {
        let e = Engine::default();
        assert_eq!(
            e.decide_ci(&set(9, &[1, 4, 7])).unwrap().fast_path,
            FastPath::CosetCaseI
        );
        assert_eq!(
            e.decide_ci(&set(12, &[1, 5])).unwrap().fast_path,
            FastPath::ZeroKey
        );
        let v = e.decide_ci(&set(8, &[1, 2, 5])).unwrap();
        assert!(!v.is_ci);
        assert_eq!(v.witness.unwrap().members(), &[2, 3, 7]);
    }

    #[test]
    fn lazy_solving_sets_give_same_answers() {
        let eager = Engine::default();
        let lazy = Engine::new(EngineConfig {
            solving_set_cache_limit: 0,
            ..EngineConfig::default()
        });
        for members in [&[1u64, 2, 5][..], &[2, 4, 10], &[1, 3, 4, 7]] {
            let n = if members == [1, 3, 4, 7] { 9 } else { 16 };
            let s = set(n, members);
            assert_eq!(eager.is_ci_reduced(&s).unwrap(), lazy.is_ci_reduced(&s).unwrap());
        }
    }

    #[test]
    fn verdict_json() {
        let e = Engine::default();
        let v = e.decide_ci(&set(8, &[1, 2, 5])).unwrap();
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"ci":false,"witness":[2,3,7],"fast_path":"none"}"#
        );
        let v = e
            .muzychuk_isomorphic(&set(8, &[1, 2, 5]), &set(8, &[2, 3, 7]))
            .unwrap();
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"isomorphic":true,"reason":"multiplier-found","multiplier":[[1,1,3]],"key_s":[[0,0,1]],"key_t":[[0,0,1]]}"#
        );
    }
}
