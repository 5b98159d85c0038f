//! Generalized multipliers, their permutations `f_m` of `Z_n`, and solving sets.
//!
//! Rows keep the 1-based index convention `m_1 … m_t`: digit `x_i` of the
//! p-adic expansion is multiplied by `m_{t-i}`.

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::keyspace::Key;
use crate::zn::{digits, Factorization, Residue};

/// `x ↦ Σ m_{t-i} x_i p^i (mod p^t)` on `Z_{p^t}`.
pub fn apply_multiplier_prime(row: &[u64], p: u64, t: u32, x: u64) -> u64 {
    debug_assert_eq!(row.len(), t as usize);
    let q = p.pow(t) as u128;
    let mut power = 1u128;
    let mut acc = 0u128;
    for (i, d) in digits(x, p, t).into_iter().enumerate() {
        let m = row[t as usize - 1 - i] as u128;
        acc = (acc + m * d as u128 * power) % q;
        power *= p as u128;
    }
    acc as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneralizedMultiplier {
    factorization: Factorization,
    rows: Vec<Vec<u64>>,
}

impl GeneralizedMultiplier {
    pub fn new(factorization: Factorization, rows: Vec<Vec<u64>>) -> Result<Self> {
        if rows.len() != factorization.parts().len() {
            return Err(Error::InvalidMultiplier(format!(
                "expected {} rows for n = {}, found {}",
                factorization.parts().len(),
                factorization.n(),
                rows.len()
            )));
        }
        for (row, part) in rows.iter().zip(factorization.parts()) {
            if row.len() != part.t as usize {
                return Err(Error::InvalidMultiplier(format!(
                    "row {row:?} must have length {}",
                    part.t
                )));
            }
            if let Some(m) = row.iter().find(|m| **m == 0 || m.gcd(&part.p) != 1) {
                return Err(Error::InvalidMultiplier(format!(
                    "entry {m} is not a positive integer coprime to {}",
                    part.p
                )));
            }
        }
        Ok(GeneralizedMultiplier { factorization, rows })
    }

    pub fn identity(factorization: &Factorization) -> Self {
        let rows = factorization
            .parts()
            .iter()
            .map(|part| vec![1; part.t as usize])
            .collect();
        GeneralizedMultiplier {
            factorization: factorization.clone(),
            rows,
        }
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    /// Image of a canonical residue `x < n`.
    pub fn apply(&self, x: u64) -> u64 {
        let f = &self.factorization;
        let components: Vec<u64> = f
            .parts()
            .iter()
            .zip(&self.rows)
            .map(|(part, row)| apply_multiplier_prime(row, part.p, part.t, x % part.value()))
            .collect();
        f.decode(&components)
    }

    /// Sorted image of a set of residues.
    pub fn apply_set(&self, set: &[u64]) -> Vec<u64> {
        let mut image: Vec<u64> = set.iter().map(|&x| self.apply(x)).collect();
        image.sort_unstable();
        image
    }
}

impl Serialize for GeneralizedMultiplier {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(&self.rows)
    }
}

pub fn apply_multiplier(m: &GeneralizedMultiplier, x: Residue) -> Result<Residue> {
    if x.modulus() != m.factorization.n() {
        return Err(Error::ModulusMismatch {
            expected: m.factorization.n(),
            found: x.modulus(),
        });
    }
    Residue::new(m.apply(x.value()), x.modulus())
}

/// A generalized multiplier in normal form for a key.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GenuineMultiplier {
    multiplier: GeneralizedMultiplier,
    key: Key,
}

fn is_genuine_row(row: &[u64], key_row: &[u32], p: u64) -> bool {
    let t = key_row.len();
    row.len() == t
        && (0..t).all(|j| {
            let m = row[j];
            let level = j as u32 + 1;
            m >= 1 && m < p.pow(level - key_row[j]) && m.gcd(&p) == 1
        })
        && (1..t).all(|j| {
            // m_{i+1} ≡ m_i (mod p^{i - k_{i+1}}) with i = j in 1-based terms
            let modulus = p.pow(j as u32 - key_row[j]);
            row[j] % modulus == row[j - 1] % modulus
        })
}

impl GenuineMultiplier {
    pub fn new(key: Key, rows: Vec<Vec<u64>>) -> Result<Self> {
        let multiplier = GeneralizedMultiplier::new(key.factorization().clone(), rows)?;
        for ((row, key_row), part) in multiplier
            .rows
            .iter()
            .zip(key.rows())
            .zip(key.factorization().parts())
        {
            if !is_genuine_row(row, key_row, part.p) {
                return Err(Error::InvalidMultiplier(format!(
                    "row {row:?} is not genuine for key row {key_row:?} (p = {})",
                    part.p
                )));
            }
        }
        Ok(GenuineMultiplier { multiplier, key })
    }

    pub fn key(&self) -> &Key {
        &self.key
    }

    pub fn multiplier(&self) -> &GeneralizedMultiplier {
        &self.multiplier
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.multiplier.rows
    }

    pub fn apply(&self, x: u64) -> u64 {
        self.multiplier.apply(x)
    }

    pub fn apply_set(&self, set: &[u64]) -> Vec<u64> {
        self.multiplier.apply_set(set)
    }
}

impl Serialize for GenuineMultiplier {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.multiplier.serialize(serializer)
    }
}

/// All genuine rows for `key_row ∈ K_{p^t}`, lexicographic.
pub fn genuine_multipliers_prime_power(key_row: &[u32], p: u64, t: u32) -> Vec<Vec<u64>> {
    assert_eq!(
        key_row.len(),
        t as usize,
        "key row length must equal the exponent"
    );
    let ranges: Vec<u64> = key_row
        .iter()
        .enumerate()
        .map(|(j, &k)| {
            let exponent = j as u32 + 1 - k;
            assert!(exponent >= 1, "genuine range [p^0 - 1] would be empty");
            p.pow(exponent) - 1
        })
        .collect();

    fn extend(row: &mut Vec<u64>, key_row: &[u32], ranges: &[u64], p: u64, out: &mut Vec<Vec<u64>>) {
        let j = row.len();
        if j == ranges.len() {
            out.push(row.clone());
            return;
        }
        for m in 1..=ranges[j] {
            if m % p == 0 {
                continue;
            }
            if j > 0 {
                let modulus = p.pow(j as u32 - key_row[j]);
                if m % modulus != row[j - 1] % modulus {
                    continue;
                }
            }
            row.push(m);
            extend(row, key_row, ranges, p, out);
            row.pop();
        }
    }

    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(t as usize), key_row, &ranges, p, &mut out);
    out
}

/// The solving set `P(k)`: per-prime genuine rows, iterated as their
/// Cartesian product (first prime most significant).
///
/// Per-prime image tables are built up front; whole permutations of `Z_n`
/// are only produced on request.
#[derive(Debug, Clone)]
pub struct SolvingSet {
    key: Key,
    per_prime: Vec<Vec<Vec<u64>>>,
    images: Vec<Vec<Vec<u64>>>,
}

impl SolvingSet {
    pub fn new(key: &Key) -> Self {
        let parts = key.factorization().parts();
        let per_prime: Vec<Vec<Vec<u64>>> = parts
            .iter()
            .zip(key.rows())
            .map(|(part, row)| genuine_multipliers_prime_power(row, part.p, part.t))
            .collect();
        let images = per_prime
            .iter()
            .zip(parts)
            .map(|(rows, part)| {
                rows.iter()
                    .map(|row| {
                        (0..part.value())
                            .map(|x| apply_multiplier_prime(row, part.p, part.t, x))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        SolvingSet {
            key: key.clone(),
            per_prime,
            images,
        }
    }

    pub fn key(&self) -> &Key {
        &self.key
    }

    pub fn len(&self) -> usize {
        self.per_prime.iter().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn digits_of(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.per_prime.len()];
        for (slot, rows) in out.iter_mut().zip(&self.per_prime).rev() {
            *slot = index % rows.len();
            index /= rows.len();
        }
        out
    }

    pub fn get(&self, index: usize) -> GenuineMultiplier {
        assert!(index < self.len(), "solving set index out of range");
        let rows = self
            .digits_of(index)
            .into_iter()
            .zip(&self.per_prime)
            .map(|(i, rows)| rows[i].clone())
            .collect();
        GenuineMultiplier {
            multiplier: GeneralizedMultiplier {
                factorization: self.key.factorization().clone(),
                rows,
            },
            key: self.key.clone(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = GenuineMultiplier> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// `x^{f}` for the multiplier at `index`, via the per-prime tables.
    pub fn image(&self, index: usize, x: u64) -> u64 {
        let f = self.key.factorization();
        let components: Vec<u64> = self
            .digits_of(index)
            .into_iter()
            .zip(f.parts())
            .zip(&self.images)
            .map(|((i, part), tables)| tables[i][(x % part.value()) as usize])
            .collect();
        f.decode(&components)
    }

    pub fn permutation(&self, index: usize) -> Vec<u64> {
        let f = self.key.factorization();
        let digits = self.digits_of(index);
        let tables: Vec<&Vec<u64>> = digits
            .iter()
            .zip(&self.images)
            .map(|(&i, tables)| &tables[i])
            .collect();
        let mut components = vec![0; tables.len()];
        (0..f.n())
            .map(|x| {
                for ((c, table), part) in components.iter_mut().zip(&tables).zip(f.parts()) {
                    *c = table[(x % part.value()) as usize];
                }
                f.decode(&components)
            })
            .collect()
    }

    /// Every permutation as a lookup table, or `None` when there are more
    /// than `limit` multipliers.
    pub fn function_table(&self, limit: usize) -> Option<Vec<Vec<u64>>> {
        (self.len() <= limit).then(|| (0..self.len()).map(|i| self.permutation(i)).collect())
    }
}

pub fn solving_set(key: &Key) -> SolvingSet {
    SolvingSet::new(key)
}
