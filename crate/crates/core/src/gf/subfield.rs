use std::sync::Arc;

use super::poly;
use crate::error::{config, Result};
use crate::field::{Field, PrimeField};

/// Element of GF(q), encoded as the little-endian base-p integer of its
/// coefficients over GF(p).
pub type Fq = u16;

/// Largest supported subfield; keeps the q×q tables a few megabytes at most.
pub const MAX_Q: u64 = 1024;

/// GF(q) = GF(p)[y]/(modulus), table driven. Cloning is cheap.
#[derive(Clone)]
pub struct Subfield {
    inner: Arc<Tables>,
}

struct Tables {
    prime: PrimeField,
    s: usize,
    q: u16,
    modulus: Vec<u16>,
    add: Vec<Fq>,
    mul: Vec<Fq>,
    neg: Vec<Fq>,
    inv: Vec<Fq>,
}

impl std::fmt::Debug for Subfield {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({}^{})", self.p(), self.s())
    }
}

impl PartialEq for Subfield {
    fn eq(&self, other: &Self) -> bool {
        self.p() == other.p() && self.inner.modulus == other.inner.modulus
    }
}

impl Eq for Subfield {}

impl Subfield {
    /// GF(p^s) with the smallest irreducible modulus of degree `s`.
    pub fn new(p: u16, s: usize) -> Result<Self> {
        let prime = PrimeField::new(p).ok_or_else(|| config(format!("q0 = {p} is not a prime")))?;
        check_size(p, s)?;
        let modulus = poly::smallest_irreducible(&prime, s);
        Ok(Self::build(prime, s, modulus))
    }

    /// GF(p^s) with an explicit monic modulus, lowest degree first.
    pub fn with_modulus(p: u16, modulus: &[u16]) -> Result<Self> {
        let prime = PrimeField::new(p).ok_or_else(|| config(format!("q0 = {p} is not a prime")))?;
        if modulus.len() < 2 || modulus.iter().any(|&c| c >= p) {
            return Err(config("modq must list s+1 coefficients in 0..q0"));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(config("modq must be monic"));
        }
        let s = modulus.len() - 1;
        check_size(p, s)?;
        if !poly::is_irreducible(&prime, modulus) {
            return Err(config(format!("modq {modulus:?} is reducible over GF({p})")));
        }
        Ok(Self::build(prime, s, modulus.to_vec()))
    }

    fn build(prime: PrimeField, s: usize, modulus: Vec<u16>) -> Self {
        let p = prime.p() as u64;
        let q = p.pow(s as u32) as usize;
        let digits = |mut x: usize| -> Vec<u16> {
            (0..s)
                .map(|_| {
                    let d = (x as u64 % p) as u16;
                    x /= p as usize;
                    d
                })
                .collect()
        };
        let undigits = |d: &[u16]| -> Fq { d.iter().rev().fold(0u64, |acc, &c| acc * p + c as u64) as Fq };

        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in a..q {
                let db = digits(b);
                let sum: Vec<u16> = da.iter().zip(&db).map(|(&x, &y)| prime.add(x, y)).collect();
                let mut prod = vec![0u16; 2 * s - 1];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = prime.add(prod[i + j], prime.mul(x, y));
                    }
                }
                let mut red = poly::rem_monic(&prime, &prod, &modulus);
                red.resize(s, 0);
                let (sv, pv) = (undigits(&sum), undigits(&red));
                add[a * q + b] = sv;
                add[b * q + a] = sv;
                mul[a * q + b] = pv;
                mul[b * q + a] = pv;
            }
        }
        let mut neg = vec![0; q];
        let mut inv = vec![0; q];
        for a in 0..q {
            for b in 0..q {
                if add[a * q + b] == 0 {
                    neg[a] = b as Fq;
                }
                if mul[a * q + b] == 1 {
                    inv[a] = b as Fq;
                }
            }
        }
        Self {
            inner: Arc::new(Tables { prime, s, q: q as u16, modulus, add, mul, neg, inv }),
        }
    }

    pub fn p(&self) -> u16 {
        self.inner.prime.p()
    }

    pub fn s(&self) -> usize {
        self.inner.s
    }

    pub fn q(&self) -> u16 {
        self.inner.q
    }

    pub fn modulus(&self) -> &[u16] {
        &self.inner.modulus
    }

    pub fn prime_field(&self) -> PrimeField {
        self.inner.prime
    }
}

fn check_size(p: u16, s: usize) -> Result<()> {
    if s == 0 {
        return Err(config("s must be at least 1"));
    }
    match (p as u64).checked_pow(s as u32) {
        Some(q) if q <= MAX_Q => Ok(()),
        _ => Err(config(format!("q = {p}^{s} exceeds the supported maximum {MAX_Q}"))),
    }
}

impl Field for Subfield {
    type Elem = Fq;

    #[inline]
    fn zero(&self) -> Fq {
        0
    }
    #[inline]
    fn one(&self) -> Fq {
        1
    }
    #[inline]
    fn add(&self, a: Fq, b: Fq) -> Fq {
        self.inner.add[a as usize * self.inner.q as usize + b as usize]
    }
    #[inline]
    fn neg(&self, a: Fq) -> Fq {
        self.inner.neg[a as usize]
    }
    #[inline]
    fn mul(&self, a: Fq, b: Fq) -> Fq {
        self.inner.mul[a as usize * self.inner.q as usize + b as usize]
    }
    fn inv(&self, a: Fq) -> Fq {
        assert!(a != 0, "inverse of zero in GF(q)");
        self.inner.inv[a as usize]
    }
    fn order(&self) -> u64 {
        self.inner.q as u64
    }
    fn elem(&self, index: u64) -> Fq {
        debug_assert!(index < self.inner.q as u64);
        index as Fq
    }
    fn index(&self, a: Fq) -> u64 {
        a as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_and_gf9_moduli() {
        assert_eq!(Subfield::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(Subfield::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, s) in [(2, 1), (2, 3), (3, 2), (5, 1), (2, 4)] {
            let f = Subfield::new(p, s).unwrap();
            let q = f.q();
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                for b in 0..q {
                    for c in 0..q {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Subfield::new(4, 1).is_err());
        assert!(Subfield::with_modulus(2, &[0, 1, 1]).is_err());
        assert!(Subfield::new(2, 11).is_err());
    }
}
