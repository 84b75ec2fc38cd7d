//! The skew polynomial ring GF(q^m)[x; σ] with x·a = σ(a)·x.
//!
//! Evaluation is remainder evaluation: F(a) is the remainder of the right
//! division of F by x − a, which equals Σ F_i N_i(a).

use std::collections::HashSet;

use crate::error::{config, domain, usage, Error, Result};
use crate::gf::{FieldTower, Fqm};

/// Coefficient vector, index i holding the coefficient of x^i. Trailing
/// zeros are never stored, so the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct SkewPoly {
    coeffs: Vec<Fqm>,
}

impl SkewPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(mut coeffs: Vec<Fqm>) -> Self {
        while coeffs.last().is_some_and(Fqm::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: Fqm) -> Self {
        Self::new(vec![c])
    }

    pub fn one(t: &FieldTower) -> Self {
        Self::constant(t.one())
    }

    pub fn x(t: &FieldTower) -> Self {
        Self::monomial(t, t.one(), 1)
    }

    /// c·x^d
    pub fn monomial(t: &FieldTower, c: Fqm, d: usize) -> Self {
        let mut v = vec![t.zero(); d + 1];
        v[d] = c;
        Self::new(v)
    }

    /// x − a
    pub fn linear(t: &FieldTower, a: Fqm) -> Self {
        Self::new(vec![t.neg(a), t.one()])
    }

    pub fn coeffs(&self) -> &[Fqm] {
        &self.coeffs
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, t: &FieldTower, i: usize) -> Fqm {
        self.coeffs.get(i).copied().unwrap_or_else(|| t.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<Fqm> {
        self.coeffs.last().copied()
    }

    pub fn add(&self, t: &FieldTower, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| t.add(self.coeff(t, i), other.coeff(t, i))).collect())
    }

    pub fn sub(&self, t: &FieldTower, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| t.sub(self.coeff(t, i), other.coeff(t, i))).collect())
    }

    /// c·F (scalar on the left).
    pub fn scale(&self, t: &FieldTower, c: Fqm) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|&f| t.mul(c, f)).collect())
    }

    /// x·F: shifts and applies σ to every coefficient.
    pub fn mul_x(&self, t: &FieldTower) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = Vec::with_capacity(self.coeffs.len() + 1);
        v.push(t.zero());
        v.extend(self.coeffs.iter().map(|&f| t.frobenius(f, 1)));
        Self::new(v)
    }

    /// Whitespace-separated element codes, lowest degree first.
    pub fn to_text(&self, t: &FieldTower) -> String {
        self.coeffs.iter().map(|&c| t.encode(c).to_string()).collect::<Vec<_>>().join(" ")
    }

    pub fn from_text(t: &FieldTower, s: &str) -> Result<Self> {
        let coeffs = s
            .split_whitespace()
            .map(|tok| {
                let v: u64 = tok.parse().map_err(|_| config(format!("bad element code `{tok}`")))?;
                t.decode(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }
}

pub fn skew_mul(t: &FieldTower, u: &SkewPoly, v: &SkewPoly) -> SkewPoly {
    if u.is_zero() || v.is_zero() {
        return SkewPoly::zero();
    }
    let mut out = vec![t.zero(); u.coeffs.len() + v.coeffs.len() - 1];
    for (i, &ui) in u.coeffs.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, &vj) in v.coeffs.iter().enumerate() {
            // u_i x^i · v_j x^j = u_i σ^i(v_j) x^{i+j}
            let term = t.mul(ui, t.frobenius(vj, i as i64));
            out[i + j] = t.add(out[i + j], term);
        }
    }
    SkewPoly::new(out)
}

/// A = Q·B + R with deg R < deg B (divisor on the right).
pub fn right_divide(t: &FieldTower, a: &SkewPoly, b: &SkewPoly) -> Result<(SkewPoly, SkewPoly)> {
    let db = b.deg().ok_or(Error::DivisionByZero)?;
    let inv_lead = t.inv(b.lead().unwrap())?;
    let mut r = a.coeffs.clone();
    let mut q = vec![t.zero(); r.len().saturating_sub(db)];
    while r.len() > db && !r.is_empty() {
        let d = r.len() - 1;
        let e = d - db;
        let lead = r[d];
        if !lead.is_zero() {
            // (c x^e)·B has leading coefficient c σ^e(b_lead)
            let c = t.mul(lead, t.frobenius(inv_lead, e as i64));
            q[e] = c;
            for (i, &bi) in b.coeffs.iter().enumerate() {
                let term = t.mul(c, t.frobenius(bi, e as i64));
                r[i + e] = t.sub(r[i + e], term);
            }
        }
        r.pop();
    }
    Ok((SkewPoly::new(q), SkewPoly::new(r)))
}

/// A = B·Q + R with deg R < deg B (divisor on the left).
pub fn left_divide(t: &FieldTower, a: &SkewPoly, b: &SkewPoly) -> Result<(SkewPoly, SkewPoly)> {
    let db = b.deg().ok_or(Error::DivisionByZero)?;
    let inv_lead = t.inv(b.lead().unwrap())?;
    let mut r = a.coeffs.clone();
    let mut q = vec![t.zero(); r.len().saturating_sub(db)];
    while r.len() > db && !r.is_empty() {
        let d = r.len() - 1;
        let e = d - db;
        let lead = r[d];
        if !lead.is_zero() {
            // B·(c x^e) has leading coefficient b_lead σ^{db}(c)
            let c = t.frobenius(t.mul(inv_lead, lead), -(db as i64));
            q[e] = c;
            for (i, &bi) in b.coeffs.iter().enumerate() {
                let term = t.mul(bi, t.frobenius(c, i as i64));
                r[i + e] = t.sub(r[i + e], term);
            }
        }
        r.pop();
    }
    Ok((SkewPoly::new(q), SkewPoly::new(r)))
}

/// F(a) = Σ F_i N_i(a), one GF(q^m) product per coefficient.
pub fn evaluate(t: &FieldTower, f: &SkewPoly, a: Fqm) -> Fqm {
    // Nested form F(a) = F_0 + σ(F_1' + σ(F_2' + …)·a)·a with F_i' = σ^{-i}(F_i),
    // then mapped back; Frobenius applications are free.
    let Some(d) = f.deg() else {
        return t.zero();
    };
    let mut r = t.frobenius(f.coeffs[d], -(d as i64));
    for i in (0..d).rev() {
        r = t.add(t.mul(t.frobenius(r, 1), a), t.frobenius(f.coeffs[i], -(i as i64)));
    }
    r
}

/// a^c = σ(c) c^{−1} a
pub fn conjugate(t: &FieldTower, a: Fqm, c: Fqm) -> Result<Fqm> {
    if c.is_zero() {
        return Err(domain("conjugation by zero"));
    }
    let ci = t.inv(c)?;
    Ok(t.mul(t.mul(t.frobenius(c, 1), ci), a))
}

/// (UV)(a) without forming UV.
pub fn product_rule_eval(t: &FieldTower, u: &SkewPoly, v: &SkewPoly, a: Fqm) -> Fqm {
    let c = evaluate(t, v, a);
    if c.is_zero() {
        return t.zero();
    }
    let ac = conjugate(t, a, c).expect("c is nonzero");
    t.mul(evaluate(t, u, ac), c)
}

/// F^{D_a}(β) = Σ F_i σ^i(β) N_i(a); total, and zero at β = 0.
pub fn operator_eval(t: &FieldTower, f: &SkewPoly, a: Fqm, beta: Fqm) -> Fqm {
    let Some(d) = f.deg() else {
        return t.zero();
    };
    if beta.is_zero() {
        return t.zero();
    }
    // Σ F_i D^i(β) with D(y) = σ(y)a, nested from the top.
    let mut r = t.mul(t.frobenius(f.coeffs[d], -(d as i64)), beta);
    for i in (0..d).rev() {
        let fi = t.frobenius(f.coeffs[i], -(i as i64));
        r = t.add(t.mul(t.frobenius(r, 1), a), t.mul(fi, beta));
    }
    r
}

/// (x − a)·F
fn mul_linear_left(t: &FieldTower, a: Fqm, f: &SkewPoly) -> SkewPoly {
    f.mul_x(t).sub(t, &f.scale(t, a))
}

/// Monic least-degree polynomial vanishing on every point. Points already
/// annihilated by the running product are skipped, so dependent inputs are
/// fine.
pub fn minimal_skew_poly(t: &FieldTower, points: &[Fqm]) -> SkewPoly {
    let mut f = SkewPoly::one(t);
    for &b in points {
        let v = evaluate(t, &f, b);
        if !v.is_zero() {
            let bv = conjugate(t, b, v).expect("v is nonzero");
            f = mul_linear_left(t, bv, &f);
        }
    }
    f
}

pub fn p_rank(t: &FieldTower, points: &[Fqm]) -> usize {
    minimal_skew_poly(t, points).deg().unwrap_or(0)
}

/// An ordered P-independent set of points.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PBasis {
    points: Vec<Fqm>,
}

impl PBasis {
    pub fn new(t: &FieldTower, points: Vec<Fqm>) -> Result<Self> {
        let distinct: HashSet<_> = points.iter().collect();
        if distinct.len() != points.len() {
            return Err(domain("P-basis points must be distinct"));
        }
        let rank = p_rank(t, &points);
        if rank != points.len() {
            return Err(domain(format!("points are P-dependent: rank {rank} < {}", points.len())));
        }
        Ok(Self { points })
    }

    /// Skips the independence check; for callers that construct points that
    /// are independent by theory and verify it in tests.
    pub(crate) fn trusted(points: Vec<Fqm>) -> Self {
        Self { points }
    }

    pub fn points(&self) -> &[Fqm] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The unique G with deg G < n and G(b_i) = values_i.
pub fn newton_interpolate(t: &FieldTower, basis: &PBasis, values: &[Fqm]) -> Result<SkewPoly> {
    if values.len() != basis.len() {
        return Err(usage(format!("{} values for {} interpolation points", values.len(), basis.len())));
    }
    Ok(newton_with_annihilator(t, basis.points(), values)?.0)
}

/// Newton interpolation that also returns the minimal polynomial of the
/// points, both built in one pass.
pub(crate) fn newton_with_annihilator(
    t: &FieldTower,
    points: &[Fqm],
    values: &[Fqm],
) -> Result<(SkewPoly, SkewPoly)> {
    let mut g = SkewPoly::zero();
    let mut f = SkewPoly::one(t);
    for (&b, &a) in points.iter().zip(values) {
        let v = evaluate(t, &f, b);
        if v.is_zero() {
            return Err(domain("interpolation points are P-dependent"));
        }
        let delta = t.sub(a, evaluate(t, &g, b));
        if !delta.is_zero() {
            let c = t.mul(delta, t.inv(v)?);
            g = g.add(t, &f.scale(t, c));
        }
        let bv = conjugate(t, b, v)?;
        f = mul_linear_left(t, bv, &f);
    }
    Ok((g, f))
}

/// Monic right greatest common divisor, i.e. the monic generator of
/// R·a + R·b.
pub fn right_gcd(t: &FieldTower, a: &SkewPoly, b: &SkewPoly) -> SkewPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let (_, r) = right_divide(t, &a, &b).expect("b is nonzero");
        a = b;
        b = r;
    }
    match a.lead() {
        None => SkewPoly::zero(),
        Some(l) => a.scale(t, t.inv(l).expect("nonzero lead")),
    }
}
