use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::count;
use super::poly;
use super::subfield::{Fq, Subfield};
use crate::error::{config, Error, Result};
use crate::field::{prime_factors, Field};

/// Largest supported extension degree m.
pub const MAX_M: usize = 8;
/// Largest supported |GF(q^m)|; keeps the primitive-element search cheap.
const MAX_QM: u64 = 1 << 40;

/// Element of GF(q^m): coordinates over GF(q) in the polynomial basis
/// 1, z, …, z^{m−1}. The tag identifies the field it belongs to (it does
/// not depend on the Frobenius exponent r).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fqm {
    c: [Fq; MAX_M],
    tag: u32,
}

impl Fqm {
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }
}

impl fmt::Debug for Fqm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.c.iter().rposition(|&x| x != 0).map_or(1, |i| i + 1);
        write!(f, "{:?}", &self.c[..last])
    }
}

/// Construction parameters; any `None` modulus is replaced by the
/// lexicographically smallest irreducible one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerParams {
    pub q0: u16,
    pub s: usize,
    pub m: usize,
    pub r: usize,
    pub modq: Option<Vec<u16>>,
    pub modqm: Option<Vec<Fq>>,
}

impl TowerParams {
    pub fn new(q0: u16, s: usize, m: usize) -> Self {
        Self { q0, s, m, r: 1, modq: None, modqm: None }
    }

    pub fn r(mut self, r: usize) -> Self {
        self.r = r;
        self
    }

    pub fn build(&self) -> Result<FieldTower> {
        let sub = match &self.modq {
            Some(mq) => {
                if mq.len() != self.s + 1 {
                    return Err(config(format!("modq must have s+1 = {} coefficients", self.s + 1)));
                }
                Subfield::with_modulus(self.q0, mq)?
            }
            None => Subfield::new(self.q0, self.s)?,
        };
        FieldTower::over(sub, self.m, self.r, self.modqm.as_deref())
    }
}

/// GF(q^m) over GF(q) together with σ = (·)^{q^r}. Immutable and cheap to
/// clone; clones share the tables.
#[derive(Clone)]
pub struct FieldTower {
    data: Arc<TowerData>,
    r: usize,
}

struct TowerData {
    sub: Subfield,
    m: usize,
    modulus: Vec<Fq>,
    tag: u32,
    qm: u64,
    /// frob[e][j] = τ^e(z^j) with τ(a) = a^q.
    frob: Vec<[Fqm; MAX_M]>,
    gamma: Fqm,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldTower({self})")
    }
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.data.tag == other.data.tag && self.r == other.r && self.same_field(other)
    }
}

impl Eq for FieldTower {}

impl FieldTower {
    /// GF((q0^s)^m) with default moduli and r = 1.
    pub fn new(q0: u16, s: usize, m: usize) -> Result<Self> {
        TowerParams::new(q0, s, m).build()
    }

    pub fn over(sub: Subfield, m: usize, r: usize, modulus: Option<&[Fq]>) -> Result<Self> {
        if m == 0 || m > MAX_M {
            return Err(config(format!("m = {m} must lie in 1..={MAX_M}")));
        }
        let q = sub.q() as u64;
        let qm = q.checked_pow(m as u32).filter(|&v| v <= MAX_QM);
        let qm = qm.ok_or_else(|| config(format!("q^m = {q}^{m} is too large for desk-scale use")))?;
        check_r(m, r)?;
        let modulus = match modulus {
            Some(mq) => {
                if mq.len() != m + 1 || mq.iter().any(|&c| c as u64 >= q) {
                    return Err(config(format!("modqm must list m+1 = {} coefficients in GF({q})", m + 1)));
                }
                if mq[m] != 1 {
                    return Err(config("modqm must be monic"));
                }
                if !poly::is_irreducible(&sub, mq) {
                    return Err(config(format!("modqm {mq:?} is reducible over GF({q})")));
                }
                mq.to_vec()
            }
            None => poly::smallest_irreducible(&sub, m),
        };
        let tag = fingerprint(&sub, &modulus);
        let mut data = TowerData {
            sub,
            m,
            modulus,
            tag,
            qm,
            frob: Vec::new(),
            gamma: Fqm { c: [0; MAX_M], tag },
        };
        let raw = RawOps(&data);
        let z = raw.z();
        let mut frob = Vec::with_capacity(m);
        let mut ze = z;
        for _ in 0..m {
            let mut row = [raw.zero(); MAX_M];
            let mut acc = raw.one();
            for slot in row.iter_mut().take(m) {
                *slot = acc;
                acc = raw.mul(acc, ze);
            }
            frob.push(row);
            ze = raw.pow(ze, q);
        }
        let gamma = raw.find_primitive();
        data.frob = frob;
        data.gamma = gamma;
        Ok(Self { data: Arc::new(data), r })
    }

    /// Same field with another Frobenius exponent.
    pub fn with_r(&self, r: usize) -> Result<Self> {
        check_r(self.m(), r)?;
        Ok(Self { data: Arc::clone(&self.data), r })
    }

    pub fn params(&self) -> TowerParams {
        TowerParams {
            q0: self.data.sub.p(),
            s: self.data.sub.s(),
            m: self.m(),
            r: self.r,
            modq: Some(self.data.sub.modulus().to_vec()),
            modqm: Some(self.data.modulus.clone()),
        }
    }

    pub fn subfield(&self) -> &Subfield {
        &self.data.sub
    }

    pub fn q(&self) -> u64 {
        self.data.sub.q() as u64
    }

    pub fn m(&self) -> usize {
        self.data.m
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// |GF(q^m)|.
    pub fn size(&self) -> u64 {
        self.data.qm
    }

    pub fn modulus(&self) -> &[Fq] {
        &self.data.modulus
    }

    pub fn same_field(&self, other: &FieldTower) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
            || (self.data.tag == other.data.tag
                && self.data.modulus == other.data.modulus
                && self.data.sub == other.data.sub)
    }

    pub fn owns(&self, a: Fqm) -> bool {
        a.tag == self.data.tag
    }

    fn raw(&self) -> RawOps<'_> {
        RawOps(&self.data)
    }

    pub fn zero(&self) -> Fqm {
        self.raw().zero()
    }

    pub fn one(&self) -> Fqm {
        self.raw().one()
    }

    /// The class of z, i.e. the polynomial-basis generator.
    pub fn z(&self) -> Fqm {
        self.raw().z()
    }

    pub fn from_subfield(&self, c: Fq) -> Fqm {
        let mut a = self.zero();
        a.c[0] = c;
        a
    }

    /// `Some(c)` when a lies in GF(q).
    pub fn to_subfield(&self, a: Fqm) -> Option<Fq> {
        a.c[1..].iter().all(|&x| x == 0).then_some(a.c[0])
    }

    pub fn coords<'a>(&self, a: &'a Fqm) -> &'a [Fq] {
        &a.c[..self.m()]
    }

    pub fn from_coords(&self, coords: &[Fq]) -> Result<Fqm> {
        let q = self.q();
        if coords.len() != self.m() || coords.iter().any(|&c| c as u64 >= q) {
            return Err(config(format!("expected {} coordinates in GF({q})", self.m())));
        }
        let mut a = self.zero();
        a.c[..coords.len()].copy_from_slice(coords);
        Ok(a)
    }

    pub fn add(&self, a: Fqm, b: Fqm) -> Fqm {
        debug_assert!(self.owns(a) && self.owns(b), "element from another field");
        self.raw().add(a, b)
    }

    pub fn sub(&self, a: Fqm, b: Fqm) -> Fqm {
        debug_assert!(self.owns(a) && self.owns(b), "element from another field");
        self.raw().sub(a, b)
    }

    pub fn neg(&self, a: Fqm) -> Fqm {
        self.raw().neg(a)
    }

    #[inline]
    pub fn mul(&self, a: Fqm, b: Fqm) -> Fqm {
        debug_assert!(self.owns(a) && self.owns(b), "element from another field");
        count::tick_mul();
        self.raw().mul(a, b)
    }

    /// Product by a GF(q) scalar (not counted as a GF(q^m) product).
    pub fn scale(&self, c: Fq, a: Fqm) -> Fqm {
        self.raw().scale(c, a)
    }

    pub fn inv(&self, a: Fqm) -> Result<Fqm> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        count::tick_inv();
        Ok(self.raw().pow(a, self.size() - 2))
    }

    pub fn checked_add(&self, a: Fqm, b: Fqm) -> Result<Fqm> {
        self.check_owned(&[a, b])?;
        Ok(self.raw().add(a, b))
    }

    pub fn checked_mul(&self, a: Fqm, b: Fqm) -> Result<Fqm> {
        self.check_owned(&[a, b])?;
        Ok(self.mul(a, b))
    }

    pub fn checked_inv(&self, a: Fqm) -> Result<Fqm> {
        self.check_owned(&[a])?;
        self.inv(a)
    }

    fn check_owned(&self, xs: &[Fqm]) -> Result<()> {
        match xs.iter().all(|&x| self.owns(x)) {
            true => Ok(()),
            false => Err(config("operands belong to a different field tower")),
        }
    }

    pub fn is_zero(&self, a: Fqm) -> bool {
        a.is_zero()
    }

    /// a^e by square-and-multiply; not counted.
    pub fn pow(&self, a: Fqm, e: u64) -> Fqm {
        self.raw().pow(a, e)
    }

    /// σ^j(a); negative j applies the inverse automorphism.
    pub fn frobenius(&self, a: Fqm, j: i64) -> Fqm {
        let m = self.m() as i64;
        let e = (self.r as i64 * j).rem_euclid(m) as usize;
        self.raw().tau(a, e)
    }

    /// N_i(a) = σ^{i−1}(a) ⋯ σ(a) a, with N_0(a) = 1.
    pub fn norm(&self, a: Fqm, i: usize) -> Fqm {
        let mut acc = self.one();
        let mut cur = a;
        for step in 0..i {
            acc = self.mul(acc, cur);
            if step + 1 < i {
                cur = self.frobenius(cur, 1);
            }
        }
        acc
    }

    /// Primitive element found by smallest-index search.
    pub fn primitive_element(&self) -> Fqm {
        self.data.gamma
    }

    pub fn multiplicative_order(&self, a: Fqm) -> Option<u64> {
        if self.is_zero(a) {
            return None;
        }
        let n = self.size() - 1;
        let mut ord = n;
        for p in prime_factors(n) {
            while ord.is_multiple_of(p) && self.pow(a, ord / p) == self.one() {
                ord /= p;
            }
        }
        Some(ord)
    }

    /// Little-endian base-q integer of the coordinates.
    pub fn encode(&self, a: Fqm) -> u64 {
        let q = self.q();
        a.c[..self.m()].iter().rev().fold(0, |acc, &c| acc * q + c as u64)
    }

    pub fn decode(&self, mut v: u64) -> Result<Fqm> {
        if v >= self.size() {
            return Err(config(format!("element code {v} out of range for GF({})", self.size())));
        }
        let q = self.q();
        let mut a = self.zero();
        for slot in a.c.iter_mut().take(self.m()) {
            *slot = (v % q) as Fq;
            v /= q;
        }
        Ok(a)
    }
}

fn check_r(m: usize, r: usize) -> Result<()> {
    if r == 0 || r > m {
        return Err(config(format!("r = {r} must satisfy 1 ≤ r ≤ m = {m}")));
    }
    if gcd(r, m) != 1 {
        return Err(config(format!("gcd(r, m) = gcd({r}, {m}) must be 1 so that σ fixes exactly GF(q)")));
    }
    Ok(())
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn fingerprint(sub: &Subfield, modulus: &[Fq]) -> u32 {
    // FNV-1a over the defining data.
    let mut h: u32 = 0x811c_9dc5;
    let words = [sub.p() as u64, sub.s() as u64]
        .into_iter()
        .chain(sub.modulus().iter().map(|&c| c as u64))
        .chain(std::iter::once(u64::MAX))
        .chain(modulus.iter().map(|&c| c as u64));
    for w in words {
        for b in w.to_le_bytes() {
            h ^= b as u32;
            h = h.wrapping_mul(0x0100_0193);
        }
    }
    h
}

/// Uncounted arithmetic on the raw tables.
struct RawOps<'a>(&'a TowerData);

impl RawOps<'_> {
    fn zero(&self) -> Fqm {
        Fqm { c: [0; MAX_M], tag: self.0.tag }
    }

    fn one(&self) -> Fqm {
        let mut a = self.zero();
        a.c[0] = 1;
        a
    }

    fn z(&self) -> Fqm {
        let mut a = self.zero();
        if self.0.m == 1 {
            // GF(q)[z]/(z + c0): z ≡ −c0.
            a.c[0] = self.0.sub.neg(self.0.modulus[0]);
        } else {
            a.c[1] = 1;
        }
        a
    }

    #[inline]
    fn add(&self, mut a: Fqm, b: Fqm) -> Fqm {
        let f = &self.0.sub;
        for i in 0..self.0.m {
            a.c[i] = f.add(a.c[i], b.c[i]);
        }
        a
    }

    fn neg(&self, mut a: Fqm) -> Fqm {
        let f = &self.0.sub;
        for i in 0..self.0.m {
            a.c[i] = f.neg(a.c[i]);
        }
        a
    }

    fn sub(&self, a: Fqm, b: Fqm) -> Fqm {
        self.add(a, self.neg(b))
    }

    #[inline]
    fn scale(&self, c: Fq, mut a: Fqm) -> Fqm {
        let f = &self.0.sub;
        for i in 0..self.0.m {
            a.c[i] = f.mul(c, a.c[i]);
        }
        a
    }

    #[inline]
    fn mul(&self, a: Fqm, b: Fqm) -> Fqm {
        let f = &self.0.sub;
        let m = self.0.m;
        let mut prod = [0 as Fq; 2 * MAX_M];
        for i in 0..m {
            if a.c[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = f.add(prod[i + j], f.mul(a.c[i], b.c[j]));
            }
        }
        // z^m = −Σ f_i z^i
        for d in (m..2 * m - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..m {
                let t = f.mul(c, self.0.modulus[i]);
                prod[d - m + i] = f.sub(prod[d - m + i], t);
            }
        }
        let mut out = self.zero();
        out.c[..m].copy_from_slice(&prod[..m]);
        out
    }

    fn pow(&self, a: Fqm, mut e: u64) -> Fqm {
        let (mut base, mut acc) = (a, self.one());
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn tau(&self, a: Fqm, e: usize) -> Fqm {
        if e == 0 {
            return a;
        }
        let row = &self.0.frob[e];
        let mut out = self.zero();
        for j in 0..self.0.m {
            if a.c[j] != 0 {
                out = self.add(out, self.scale(a.c[j], row[j]));
            }
        }
        out
    }

    fn find_primitive(&self) -> Fqm {
        let n = self.0.qm - 1;
        let factors = prime_factors(n);
        let q = self.0.sub.q() as u64;
        (1..self.0.qm)
            .map(|mut v| {
                let mut a = self.zero();
                for slot in a.c.iter_mut().take(self.0.m) {
                    *slot = (v % q) as Fq;
                    v /= q;
                }
                a
            })
            .find(|&a| factors.iter().all(|&p| self.pow(a, n / p) != self.one()))
            .expect("the multiplicative group is cyclic")
    }
}

impl Field for FieldTower {
    type Elem = Fqm;

    fn zero(&self) -> Fqm {
        FieldTower::zero(self)
    }
    fn one(&self) -> Fqm {
        FieldTower::one(self)
    }
    fn add(&self, a: Fqm, b: Fqm) -> Fqm {
        FieldTower::add(self, a, b)
    }
    fn neg(&self, a: Fqm) -> Fqm {
        FieldTower::neg(self, a)
    }
    fn mul(&self, a: Fqm, b: Fqm) -> Fqm {
        FieldTower::mul(self, a, b)
    }
    fn inv(&self, a: Fqm) -> Fqm {
        FieldTower::inv(self, a).expect("inverse of zero in GF(q^m)")
    }
    fn order(&self) -> u64 {
        self.size()
    }
    fn elem(&self, index: u64) -> Fqm {
        self.decode(index).expect("index within field size")
    }
    fn index(&self, a: Fqm) -> u64 {
        self.encode(a)
    }
}

impl fmt::Display for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u16]| v.iter().map(u16::to_string).collect::<Vec<_>>().join(",");
        write!(
            f,
            "q0={} s={} m={} r={} modq={} modqm={}",
            self.data.sub.p(),
            self.data.sub.s(),
            self.m(),
            self.r,
            join(self.data.sub.modulus()),
            join(&self.data.modulus)
        )
    }
}

impl FromStr for TowerParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = TowerParams::new(0, 1, 0);
        let (mut have_q0, mut have_m) = (false, false);
        for tok in s.split_whitespace() {
            let (key, val) = tok
                .split_once('=')
                .ok_or_else(|| config(format!("expected key=value, found `{tok}`")))?;
            let int = |v: &str| -> Result<usize> {
                v.parse().map_err(|_| config(format!("`{key}` expects an integer, found `{v}`")))
            };
            let list = |v: &str| -> Result<Vec<u16>> {
                v.split(',')
                    .map(|c| c.trim().parse().map_err(|_| config(format!("bad coefficient `{c}` in `{key}`"))))
                    .collect()
            };
            match key {
                "q0" => {
                    p.q0 = u16::try_from(int(val)?).map_err(|_| config("q0 too large"))?;
                    have_q0 = true;
                }
                "s" => p.s = int(val)?,
                "m" => {
                    p.m = int(val)?;
                    have_m = true;
                }
                "r" => p.r = int(val)?,
                "modq" => p.modq = Some(list(val)?),
                "modqm" => p.modqm = Some(list(val)?),
                other => return Err(config(format!("unknown tower key `{other}`"))),
            }
        }
        if !have_q0 || !have_m {
            return Err(config("tower description needs at least q0 and m"));
        }
        Ok(p)
    }
}

impl FromStr for FieldTower {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse::<TowerParams>()?.build()
    }
}
