//! The key lattice `K_n`, key partitions `Σ(k)` and keys of partitions and sets.
//!
//! A key is a ragged array with one row per prime power `p^t ∥ n`. Row entries
//! satisfy `0 ≤ k_j < j` and are non-decreasing. Larger keys give coarser key
//! partitions.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::cayley::ConnectionSet;
use crate::error::{Error, Result};
use crate::zn::Factorization;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Key {
    factorization: Factorization,
    rows: Vec<Vec<u32>>,
}

fn check_row(row: &[u32], t: u32) -> Result<()> {
    if row.len() != t as usize {
        return Err(Error::InvalidKey(format!(
            "row length {} does not match exponent {t}",
            row.len()
        )));
    }
    for (j, &k) in row.iter().enumerate() {
        // rows are indexed from 1: k_j < j
        if k as usize > j {
            return Err(Error::InvalidKey(format!(
                "entry {k} at position {} must be < {}",
                j + 1,
                j + 1
            )));
        }
        if j > 0 && row[j - 1] > k {
            return Err(Error::InvalidKey(format!("row {row:?} is not non-decreasing")));
        }
    }
    Ok(())
}

impl Key {
    pub fn new(factorization: Factorization, rows: Vec<Vec<u32>>) -> Result<Self> {
        if rows.len() != factorization.parts().len() {
            return Err(Error::InvalidKey(format!(
                "expected {} rows for n = {}, found {}",
                factorization.parts().len(),
                factorization.n(),
                rows.len()
            )));
        }
        for (row, part) in rows.iter().zip(factorization.parts()) {
            check_row(row, part.t)?;
        }
        Ok(Key { factorization, rows })
    }

    pub fn zero(factorization: &Factorization) -> Self {
        let rows = factorization
            .parts()
            .iter()
            .map(|part| vec![0; part.t as usize])
            .collect();
        Key {
            factorization: factorization.clone(),
            rows,
        }
    }

    /// Zero everywhere except a 1 in position 2 of the row for `2^2`.
    pub fn almost_zero(factorization: &Factorization) -> Result<Self> {
        if factorization.n() % 8 != 4 {
            return Err(Error::NoAlmostZeroKey);
        }
        let mut key = Key::zero(factorization);
        key.rows[0][1] = 1;
        Ok(key)
    }

    /// The top of the lattice: row `(0, 1, …, t-1)` for every prime.
    pub fn maximal(factorization: &Factorization) -> Self {
        let rows = factorization
            .parts()
            .iter()
            .map(|part| (0..part.t).collect())
            .collect();
        Key {
            factorization: factorization.clone(),
            rows,
        }
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    pub fn n(&self) -> u64 {
        self.factorization.n()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(|&k| k == 0)
    }

    pub fn is_almost_zero(&self) -> bool {
        Key::almost_zero(&self.factorization).is_ok_and(|z| &z == self)
    }

    fn check_compatible(&self, other: &Key) -> Result<()> {
        if self.factorization != other.factorization {
            return Err(Error::FactorizationMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(())
    }

    pub fn leq(&self, other: &Key) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self
            .rows
            .iter()
            .flatten()
            .zip(other.rows.iter().flatten())
            .all(|(a, b)| a <= b))
    }

    fn zip_with(&self, other: &Key, op: impl Fn(u32, u32) -> u32) -> Result<Key> {
        self.check_compatible(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| op(x, y)).collect())
            .collect();
        Ok(Key {
            factorization: self.factorization.clone(),
            rows,
        })
    }

    pub fn meet(&self, other: &Key) -> Result<Key> {
        self.zip_with(other, u32::min)
    }

    pub fn join(&self, other: &Key) -> Result<Key> {
        self.zip_with(other, u32::max)
    }

    /// For every element, a representative of its `Σ(k)` class.
    ///
    /// Per prime the representative of a nonzero `x` of order `p^a` is
    /// `x mod p^{t-k_a}`, the least element of the coset `P_{k_a} + x`. The
    /// CRT decode of these lies in the product class.
    pub fn class_representatives(&self) -> Vec<u64> {
        let f = &self.factorization;
        let per_prime: Vec<Vec<u64>> = f
            .parts()
            .iter()
            .zip(&self.rows)
            .map(|(part, row)| prime_class_representatives(row, part.p, part.t))
            .collect();
        let mut components = vec![0; f.parts().len()];
        (0..f.n())
            .map(|x| {
                for (i, part) in f.parts().iter().enumerate() {
                    components[i] = per_prime[i][(x % part.value()) as usize];
                }
                f.decode(&components)
            })
            .collect()
    }
}

fn prime_class_representatives(row: &[u32], p: u64, t: u32) -> Vec<u64> {
    let q = p.pow(t);
    (0..q)
        .map(|x| {
            if x == 0 {
                return 0;
            }
            let mut valuation = 0;
            let mut y = x;
            while y % p == 0 {
                y /= p;
                valuation += 1;
            }
            let alpha = t - valuation;
            let k = row[alpha as usize - 1];
            x % p.pow(t - k)
        })
        .collect()
}

impl Serialize for Key {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(&self.rows)
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (j, k) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{k}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

pub fn zero_key(f: &Factorization) -> Key {
    Key::zero(f)
}

pub fn almost_zero_key(f: &Factorization) -> Result<Key> {
    Key::almost_zero(f)
}

/// All rows of `K_{p^t}` in lexicographic order. The count is the Catalan number `C_t`.
pub fn enumerate_key_rows(t: u32) -> Vec<Vec<u32>> {
    fn extend(row: &mut Vec<u32>, t: u32, out: &mut Vec<Vec<u32>>) {
        let j = row.len() as u32;
        if j == t {
            out.push(row.clone());
            return;
        }
        let low = row.last().copied().unwrap_or(0);
        for k in low..=j {
            row.push(k);
            extend(row, t, out);
            row.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(t as usize), t, &mut out);
    out
}

/// `K_n` as the product of the per-prime row lists, first prime most significant.
pub fn enumerate_keys(f: &Factorization) -> Vec<Key> {
    let per_prime: Vec<Vec<Vec<u32>>> = f.parts().iter().map(|part| enumerate_key_rows(part.t)).collect();
    let mut keys = Vec::new();
    let mut index = vec![0usize; per_prime.len()];
    loop {
        let rows = index
            .iter()
            .zip(&per_prime)
            .map(|(&i, rows)| rows[i].clone())
            .collect();
        keys.push(Key {
            factorization: f.clone(),
            rows,
        });
        let mut pos = per_prime.len();
        loop {
            if pos == 0 {
                return keys;
            }
            pos -= 1;
            index[pos] += 1;
            if index[pos] < per_prime[pos].len() {
                break;
            }
            index[pos] = 0;
        }
    }
}

/// A partition of `Z_n` in canonical form: classes sorted internally and by
/// least element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ZnPartition {
    n: u64,
    classes: Vec<Vec<u64>>,
}

impl ZnPartition {
    pub fn from_classes(n: u64, mut classes: Vec<Vec<u64>>) -> Result<Self> {
        crate::zn::check_modulus(n)?;
        let mut seen = vec![false; n as usize];
        for class in &mut classes {
            if class.is_empty() {
                return Err(Error::InvalidConnectionSet("partition class is empty".into()));
            }
            class.sort_unstable();
            for &x in class.iter() {
                if x >= n || seen[x as usize] {
                    return Err(Error::InvalidConnectionSet(format!(
                        "element {x} is out of range or repeated in partition of Z_{n}"
                    )));
                }
                seen[x as usize] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidConnectionSet(format!("classes do not cover Z_{n}")));
        }
        classes.sort_unstable_by_key(|c| c[0]);
        Ok(ZnPartition { n, classes })
    }

    /// Builds the partition whose classes are the fibres of `labels`.
    pub fn from_labels(labels: &[u64]) -> Self {
        let mut slot: std::collections::HashMap<u64, usize> = std::collections::HashMap::new();
        let mut classes: Vec<Vec<u64>> = Vec::new();
        for (x, label) in labels.iter().enumerate() {
            let idx = *slot.entry(*label).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[idx].push(x as u64);
        }
        // scanning x upwards already yields sorted classes ordered by least element
        ZnPartition {
            n: labels.len() as u64,
            classes,
        }
    }

    pub fn singletons(n: u64) -> Self {
        ZnPartition {
            n,
            classes: (0..n).map(|x| vec![x]).collect(),
        }
    }

    /// `{S, Z_n ∖ S}`, dropping an empty side.
    pub fn split(n: u64, set: &[u64]) -> Self {
        let mut inside = vec![false; n as usize];
        for &s in set {
            inside[(s % n) as usize] = true;
        }
        ZnPartition::from_labels(&inside.iter().map(|&b| b as u64).collect::<Vec<_>>())
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn classes(&self) -> &[Vec<u64>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class index of every element.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n as usize];
        for (i, class) in self.classes.iter().enumerate() {
            for &x in class {
                labels[x as usize] = i;
            }
        }
        labels
    }
}

/// True iff every class of `coarse` is a union of classes of `fine`.
pub fn refines(fine: &ZnPartition, coarse: &ZnPartition) -> Result<bool> {
    if fine.n != coarse.n {
        return Err(Error::ModulusMismatch {
            expected: coarse.n,
            found: fine.n,
        });
    }
    let coarse_labels = coarse.labels();
    Ok(fine.classes.iter().all(|class| {
        let first = coarse_labels[class[0] as usize];
        class.iter().all(|&x| coarse_labels[x as usize] == first)
    }))
}

/// `Σ(row)` on `Z_{p^t}`.
pub fn key_partition_prime(row: &[u32], p: u64, t: u32) -> Result<ZnPartition> {
    check_row(row, t)?;
    Ok(ZnPartition::from_labels(&prime_class_representatives(row, p, t)))
}

pub fn key_partition(k: &Key) -> ZnPartition {
    ZnPartition::from_labels(&k.class_representatives())
}

/// All keys of `K_n` with their class representatives, for repeated key
/// computations in one group.
#[derive(Debug, Clone)]
pub struct KeyTable {
    factorization: Factorization,
    keys: Vec<Key>,
    representatives: Vec<Vec<u64>>,
}

impl KeyTable {
    pub fn new(factorization: &Factorization) -> Self {
        let keys = enumerate_keys(factorization);
        let representatives = keys.iter().map(Key::class_representatives).collect();
        KeyTable {
            factorization: factorization.clone(),
            keys,
            representatives,
        }
    }

    pub fn keys(&self) -> &[Key] {
        &self.keys
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    pub fn index_of(&self, key: &Key) -> Option<usize> {
        self.keys.iter().position(|k| k == key)
    }

    /// Join of every key whose partition refines the partition given by
    /// `labels` (one label per element), checked to refine it in turn.
    fn key_of_labels<L: PartialEq + Copy>(&self, labels: &[L]) -> Result<Key> {
        let refines_labels = |reps: &[u64]| {
            reps.iter()
                .enumerate()
                .all(|(x, &r)| labels[x] == labels[r as usize])
        };
        let mut join = Key::zero(&self.factorization);
        for (key, reps) in self.keys.iter().zip(&self.representatives) {
            if refines_labels(reps) {
                join = join.join(key)?;
            }
        }
        let reps = join.class_representatives();
        if !refines_labels(&reps) {
            return Err(Error::Internal(format!(
                "join key {join} of Z_{} does not refine the partition",
                self.factorization.n()
            )));
        }
        Ok(join)
    }

    pub fn key_of_partition(&self, partition: &ZnPartition) -> Result<Key> {
        if partition.n() != self.factorization.n() {
            return Err(Error::ModulusMismatch {
                expected: self.factorization.n(),
                found: partition.n(),
            });
        }
        self.key_of_labels(&partition.labels())
    }

    /// Key of `{S, Z_n ∖ S}` for a membership mask.
    pub fn key_of_mask(&self, mask: &[bool]) -> Result<Key> {
        if mask.len() as u64 != self.factorization.n() {
            return Err(Error::ModulusMismatch {
                expected: self.factorization.n(),
                found: mask.len() as u64,
            });
        }
        self.key_of_labels(mask)
    }

    pub fn key_of_members(&self, members: &[u64]) -> Result<Key> {
        if members.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut mask = vec![false; self.factorization.n() as usize];
        for &s in members {
            mask[s as usize] = true;
        }
        self.key_of_mask(&mask)
    }
}

/// The key of the coarsest key partition refining `partition`.
pub fn key_of_partition(partition: &ZnPartition) -> Result<Key> {
    let f = Factorization::new(partition.n())?;
    KeyTable::new(&f).key_of_partition(partition)
}

/// The key of the partition `{S, Z_n ∖ S}`.
pub fn key_of_set(set: &ConnectionSet) -> Result<Key> {
    let f = Factorization::new(set.n())?;
    KeyTable::new(&f).key_of_members(set.members())
}
