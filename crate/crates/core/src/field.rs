//! A minimal field interface shared by GF(p), GF(q) and GF(q^m), so that
//! linear algebra and polynomial helpers are written once.

use std::fmt::Debug;
use std::hash::Hash;

pub trait Field {
    type Elem: Copy + Eq + Hash + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    /// Panics on zero; callers that cannot rule it out should test first.
    fn inv(&self, a: Self::Elem) -> Self::Elem;
    /// Number of elements.
    fn order(&self) -> u64;
    /// Bijection `0..order()` → elements, with 0 ↦ zero and 1 ↦ one.
    fn elem(&self, index: u64) -> Self::Elem;
    fn index(&self, a: Self::Elem) -> u64;

    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.add(a, self.neg(b))
    }

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }

    fn div(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.mul(a, self.inv(b))
    }
}

/// Integers modulo a prime `p < 2^15`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u16,
}

impl PrimeField {
    pub fn new(p: u16) -> Option<Self> {
        ((2..(1 << 15)).contains(&p) && is_prime(p as u64)).then_some(Self { p })
    }

    pub fn p(&self) -> u16 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u16;

    fn zero(&self) -> u16 {
        0
    }
    fn one(&self) -> u16 {
        1
    }
    fn add(&self, a: u16, b: u16) -> u16 {
        ((a as u32 + b as u32) % self.p as u32) as u16
    }
    fn neg(&self, a: u16) -> u16 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: u16, b: u16) -> u16 {
        ((a as u32 * b as u32) % self.p as u32) as u16
    }
    fn inv(&self, a: u16) -> u16 {
        assert!(a != 0, "inverse of zero in GF({})", self.p);
        // a^(p-2)
        let (mut base, mut e, mut acc) = (a as u32, self.p as u32 - 2, 1u32);
        let p = self.p as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as u16
    }
    fn order(&self) -> u64 {
        self.p as u64
    }
    fn elem(&self, index: u64) -> u16 {
        debug_assert!(index < self.p as u64);
        index as u16
    }
    fn index(&self, a: u16) -> u64 {
        a as u64
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
