//! Dense univariate polynomials over a [`Field`], little-endian coefficient
//! vectors. Only what the modulus search needs.

use crate::field::Field;

pub(crate) fn trim<F: Field>(f: &F, p: &mut Vec<F::Elem>) {
    while p.last().is_some_and(|&c| f.is_zero(c)) {
        p.pop();
    }
}

/// Remainder of `a` modulo the monic polynomial `b`.
pub(crate) fn rem_monic<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    trim(f, &mut r);
    while r.len() > db {
        let top = r.len() - 1;
        let c = r[top];
        let shift = top - db;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, bi));
        }
        trim(f, &mut r);
    }
    r
}

/// Monic polynomial of degree `deg` whose lower coefficients are the
/// base-`|F|` digits of `index`, constant term least significant.
pub(crate) fn monic_from_index<F: Field>(f: &F, deg: usize, mut index: u64) -> Vec<F::Elem> {
    let q = f.order();
    let mut p = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        p.push(f.elem(index % q));
        index /= q;
    }
    p.push(f.one());
    p
}

/// Trial division by every monic polynomial of degree ≤ deg/2.
pub(crate) fn is_irreducible<F: Field>(f: &F, p: &[F::Elem]) -> bool {
    let deg = p.len() - 1;
    if deg == 0 || f.is_zero(p[deg]) {
        return false;
    }
    let q = f.order();
    for d in 1..=deg / 2 {
        let count = q.pow(d as u32);
        for idx in 0..count {
            let cand = monic_from_index(f, d, idx);
            if rem_monic(f, p, &cand).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `deg`,
/// comparing lower coefficients as a little-endian base-|F| integer.
pub(crate) fn smallest_irreducible<F: Field>(f: &F, deg: usize) -> Vec<F::Elem> {
    let q = f.order();
    let count = q.checked_pow(deg as u32).expect("modulus search space too large");
    (0..count)
        .map(|idx| monic_from_index(f, deg, idx))
        .find(|p| is_irreducible(f, p))
        .expect("an irreducible polynomial of every degree exists")
}
