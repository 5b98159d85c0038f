//! Arithmetic in the cyclic group `Z_n`.
//!
//! Elements are always stored as canonical residues `0..n`. The CRT tuple
//! and p-adic digit forms are views computed on demand.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) fn check_modulus(n: u64) -> Result<()> {
    if n < 2 {
        Err(Error::ModulusTooSmall)
    } else {
        Ok(())
    }
}

/// A prime power `p^t` dividing `n` exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    pub p: u64,
    pub t: u32,
}

impl PrimePower {
    pub fn value(&self) -> u64 {
        self.p.pow(self.t)
    }
}

/// The prime decomposition of `n`, primes ascending.
///
/// Also carries the CRT idempotents, so encode/decode are cheap.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    n: u64,
    parts: Vec<PrimePower>,
    idempotents: Vec<u64>,
}

impl Factorization {
    pub fn new(n: u64) -> Result<Self> {
        check_modulus(n)?;
        let mut parts = Vec::new();
        let mut rest = n;
        let mut p = 2;
        while p * p <= rest {
            if rest.is_multiple_of(p) {
                let mut t = 0;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    t += 1;
                }
                parts.push(PrimePower { p, t });
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if rest > 1 {
            parts.push(PrimePower { p: rest, t: 1 });
        }
        let idempotents = parts
            .iter()
            .map(|part| {
                let q = part.value();
                let cofactor = n / q;
                // cofactor * (cofactor^-1 mod q) is 1 mod q and 0 mod every other part
                let inv = mod_inverse(cofactor % q, q).expect("coprime cofactor");
                ((cofactor as u128 * inv as u128) % n as u128) as u64
            })
            .collect();
        Ok(Factorization {
            n,
            parts,
            idempotents,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn parts(&self) -> &[PrimePower] {
        &self.parts
    }

    pub fn is_prime_power(&self) -> bool {
        self.parts.len() == 1
    }

    /// Components `x mod p_i^{t_i}` in ascending-prime order.
    pub fn encode(&self, x: u64) -> Vec<u64> {
        self.parts.iter().map(|part| x % part.value()).collect()
    }

    /// Inverse of [`Factorization::encode`]. Components must be reduced.
    pub fn decode(&self, components: &[u64]) -> u64 {
        debug_assert_eq!(components.len(), self.parts.len());
        let n = self.n as u128;
        let sum = components
            .iter()
            .zip(&self.idempotents)
            .fold(0u128, |acc, (&c, &e)| (acc + c as u128 * e as u128) % n);
        sum as u64
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, part) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str("·")?;
            }
            if part.t == 1 {
                write!(f, "{}", part.p)?;
            } else {
                write!(f, "{}^{}", part.p, part.t)?;
            }
        }
        Ok(())
    }
}

pub fn factorize(n: u64) -> Result<Factorization> {
    Factorization::new(n)
}

/// An element of `Z_n` tagged with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: u64, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ModulusTooSmall);
        }
        Ok(Residue {
            value: value % modulus,
            modulus,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

pub fn crt_encode(x: Residue, f: &Factorization) -> Result<Vec<Residue>> {
    if x.modulus != f.n {
        return Err(Error::ModulusMismatch {
            expected: f.n,
            found: x.modulus,
        });
    }
    Ok(f.parts
        .iter()
        .map(|part| {
            let q = part.value();
            Residue {
                value: x.value % q,
                modulus: q,
            }
        })
        .collect())
}

pub fn crt_decode(components: &[Residue], f: &Factorization) -> Result<Residue> {
    if components.len() != f.parts.len() {
        return Err(Error::InvalidKey(format!(
            "expected {} CRT components for n = {}, found {}",
            f.parts.len(),
            f.n,
            components.len()
        )));
    }
    let mut raw = Vec::with_capacity(components.len());
    for (c, part) in components.iter().zip(&f.parts) {
        let q = part.value();
        if c.modulus != q {
            return Err(Error::ModulusMismatch {
                expected: q,
                found: c.modulus,
            });
        }
        raw.push(c.value);
    }
    Ok(Residue {
        value: f.decode(&raw),
        modulus: f.n,
    })
}

/// Base-`p` digits `(x_0, …, x_{t-1})` of a residue modulo `p^t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitVector {
    pub p: u64,
    pub t: u32,
    pub digits: Vec<u64>,
}

impl DigitVector {
    pub fn value(&self) -> u64 {
        self.digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }
}

pub fn p_adic_digits(x: Residue) -> Result<DigitVector> {
    let f = Factorization::new(x.modulus).map_err(|_| Error::NotPrimePower(x.modulus))?;
    if !f.is_prime_power() {
        return Err(Error::NotPrimePower(x.modulus));
    }
    let PrimePower { p, t } = f.parts[0];
    Ok(DigitVector {
        p,
        t,
        digits: digits(x.value, p, t),
    })
}

pub(crate) fn digits(mut x: u64, p: u64, t: u32) -> Vec<u64> {
    (0..t)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

/// Additive order `n / gcd(x, n)`.
pub fn element_order(x: Residue) -> u64 {
    x.modulus / x.value.gcd(&x.modulus)
}

/// `Aut(Z_n)` as the ascending list of units.
pub fn units(n: u64) -> Result<Vec<u64>> {
    check_modulus(n)?;
    Ok((1..n).filter(|u| u.gcd(&n) == 1).collect())
}

/// The unique subgroup of order `d`, as sorted residues.
pub fn subgroup_of_order(n: u64, d: u64) -> Result<Vec<u64>> {
    check_modulus(n)?;
    if d == 0 || !n.is_multiple_of(d) {
        return Err(Error::NotADivisor { n, d });
    }
    let step = n / d;
    Ok((0..d).map(|i| i * step).collect())
}

/// `gcd(S ∪ {n})`; `⟨S⟩` is the set of multiples of this value.
pub fn generator_gcd(n: u64, set: &[u64]) -> u64 {
    set.iter().fold(n, |g, &s| g.gcd(&(s % n)))
}

pub fn generated_subgroup(n: u64, set: &[u64]) -> Result<Vec<u64>> {
    check_modulus(n)?;
    let g = generator_gcd(n, set);
    subgroup_of_order(n, n / g)
}

pub(crate) fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub fn is_square_free(n: u64) -> bool {
    match Factorization::new(n) {
        Ok(f) => f.parts.iter().all(|part| part.t == 1),
        Err(_) => n == 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: u64, n: u64) -> Residue {
        Residue::new(v, n).unwrap()
    }

    #[test]
    fn factorize_examples() {
        let f = factorize(72).unwrap();
        assert_eq!(f.parts(), &[PrimePower { p: 2, t: 3 }, PrimePower { p: 3, t: 2 }]);
        assert_eq!(factorize(8).unwrap().parts(), &[PrimePower { p: 2, t: 3 }]);
        assert_eq!(
            factorize(45).unwrap().parts(),
            &[PrimePower { p: 3, t: 2 }, PrimePower { p: 5, t: 1 }]
        );
        assert_eq!(factorize(1), Err(Error::ModulusTooSmall));
        assert_eq!(factorize(0), Err(Error::ModulusTooSmall));
        assert_eq!(factorize(72).unwrap().to_string(), "2^3·3^2");
    }

    #[test]
    fn crt_examples() {
        let f = factorize(36).unwrap();
        assert_eq!(crt_encode(r(7, 36), &f).unwrap(), vec![r(3, 4), r(7, 9)]);
        assert_eq!(crt_encode(r(0, 36), &f).unwrap(), vec![r(0, 4), r(0, 9)]);
        let f8 = factorize(8).unwrap();
        assert_eq!(crt_encode(r(5, 8), &f8).unwrap(), vec![r(5, 8)]);
        assert_eq!(crt_decode(&[r(3, 4), r(7, 9)], &f).unwrap(), r(7, 36));
        assert_eq!(crt_decode(&[r(0, 4), r(0, 9)], &f).unwrap(), r(0, 36));
        // scan oracle: the only x in 0..36 with x ≡ 1 (4), x ≡ 0 (9)
        let scan: Vec<u64> = (0..36).filter(|x| x % 4 == 1 && x % 9 == 0).collect();
        assert_eq!(scan, vec![9]);
        assert_eq!(crt_decode(&[r(1, 4), r(0, 9)], &f).unwrap(), r(9, 36));
    }

    #[test]
    fn crt_errors() {
        let f = factorize(36).unwrap();
        assert!(matches!(
            crt_encode(r(1, 12), &f),
            Err(Error::ModulusMismatch { .. })
        ));
        assert!(crt_decode(&[r(1, 4)], &f).is_err());
        assert!(matches!(
            crt_decode(&[r(1, 9), r(1, 4)], &f),
            Err(Error::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn digit_examples() {
        assert_eq!(p_adic_digits(r(5, 8)).unwrap().digits, vec![1, 0, 1]);
        assert_eq!(p_adic_digits(r(0, 27)).unwrap().digits, vec![0, 0, 0]);
        assert_eq!(p_adic_digits(r(7, 9)).unwrap().digits, vec![1, 2]);
        assert_eq!(p_adic_digits(r(5, 12)), Err(Error::NotPrimePower(12)));
    }

    #[test]
    fn order_units_subgroups() {
        assert_eq!(element_order(r(6, 9)), 3);
        assert_eq!(element_order(r(0, 9)), 1);
        assert_eq!(element_order(r(4, 8)), 2);
        assert_eq!(units(8).unwrap(), vec![1, 3, 5, 7]);
        assert_eq!(units(9).unwrap(), vec![1, 2, 4, 5, 7, 8]);
        assert_eq!(units(2).unwrap(), vec![1]);
        assert_eq!(units(1), Err(Error::ModulusTooSmall));
        assert_eq!(subgroup_of_order(9, 3).unwrap(), vec![0, 3, 6]);
        assert_eq!(subgroup_of_order(9, 1).unwrap(), vec![0]);
        assert_eq!(subgroup_of_order(36, 6).unwrap(), vec![0, 6, 12, 18, 24, 30]);
        assert_eq!(subgroup_of_order(9, 2), Err(Error::NotADivisor { n: 9, d: 2 }));
        assert_eq!(
            generated_subgroup(12, &[2, 3]).unwrap(),
            (0..12).collect::<Vec<_>>()
        );
        assert_eq!(generated_subgroup(12, &[4, 6]).unwrap(), vec![0, 2, 4, 6, 8, 10]);
        assert_eq!(generated_subgroup(9, &[]).unwrap(), vec![0]);
    }

    #[test]
    fn predicates() {
        assert!(is_prime(2) && is_prime(13) && !is_prime(1) && !is_prime(9));
        assert!(is_square_free(30) && !is_square_free(12) && is_square_free(1));
    }
}
