//! Reference decoders that share no code with the fast decoder beyond field
//! arithmetic and dense linear algebra.
#![allow(dead_code)]

use msrd::field::Field;
use msrd::gf::Subfield;
use msrd::linalg::{self, Matrix};
use msrd::lrs::CodeSpec;
use msrd::sumrank::{sum_rank_distance, BlockVector};
use msrd::{FieldTower, Fq, Fqm};
use rand::Rng;

pub fn random_message<R: Rng>(t: &FieldTower, rng: &mut R, k: usize) -> Vec<Fqm> {
    msrd::channel::random_vec(t, rng, k)
}

/// Σ_{a+b=j} l_a σ^a(f_b): the skew product, written out.
fn product_coeffs(t: &FieldTower, l: &[Fqm], f: &[Fqm]) -> Vec<Fqm> {
    let mut out = vec![t.zero(); l.len() + f.len()];
    for (a, &la) in l.iter().enumerate() {
        for (b, &fb) in f.iter().enumerate() {
            out[a + b] = t.add(out[a + b], t.mul(la, t.frobenius(fb, a as i64)));
        }
    }
    out
}

/// Solves l·f = n for f with deg f < k by expanding the GF(q)-linear map
/// f ↦ l·f into coordinates.
pub fn solve_product(t: &FieldTower, l: &[Fqm], n: &[Fqm], k: usize) -> Option<Vec<Fqm>> {
    let f = t.subfield();
    let m = t.m();
    let out_len = l.len() + k;
    if n.iter().skip(out_len).any(|c| !c.is_zero()) {
        return None;
    }
    // Row (b, u) of the matrix is the image of z^u at coefficient b.
    let mut rows = Vec::with_capacity(k * m);
    for b in 0..k {
        for u in 0..m {
            let mut unit = vec![t.zero(); k];
            unit[b] = t.pow(t.z(), u as u64);
            let img = product_coeffs(t, l, &unit);
            rows.push(img.iter().flat_map(|c| t.coords(c).to_vec()).collect::<Vec<Fq>>());
        }
    }
    let mat = Matrix::from_rows(rows, out_len * m);
    let target: Vec<Fq> = (0..out_len)
        .flat_map(|j| t.coords(&n.get(j).copied().unwrap_or(t.zero())).to_vec())
        .collect();
    let x = linalg::solve_left(f, &mat, &target)?;
    Some(
        (0..k)
            .map(|b| (0..m).fold(t.zero(), |acc, u| t.add(acc, t.scale(x[b * m + u], t.pow(t.z(), u as u64)))))
            .collect(),
    )
}

/// Σ_i c_i N_i(a), the skew evaluation from its definition.
fn eval(t: &FieldTower, c: &[Fqm], a: Fqm) -> Fqm {
    c.iter().enumerate().fold(t.zero(), |acc, (i, &ci)| t.add(acc, t.mul(ci, t.norm(a, i))))
}

/// Solves L(b_j^{r_j}) r_j = Q(b_j), deg L ≤ τ, deg Q < τ + k, by dense
/// elimination for a kernel vector, then divides.
pub fn naive_skew_wb(t: &FieldTower, points: &[Fqm], received: &[Fqm], k: usize) -> Option<Vec<Fqm>> {
    let n = points.len();
    let tau = (n - k) / 2;
    let unknowns = 2 * tau + k + 1;
    let mut cols = Vec::with_capacity(n);
    for (&b, &r) in points.iter().zip(received) {
        let mut row = Vec::with_capacity(unknowns);
        for i in 0..=tau {
            row.push(if r.is_zero() {
                t.zero()
            } else {
                let conj = t.mul(t.mul(t.frobenius(r, 1), b), t.inv(r).unwrap());
                t.mul(t.norm(conj, i), r)
            });
        }
        for i in 0..tau + k {
            row.push(t.neg(t.norm(b, i)));
        }
        cols.push(row);
    }
    let system = Matrix::from_rows(cols, unknowns);
    let sol = linalg::kernel(t, &system).into_iter().next()?;
    let (l, q) = sol.split_at(tau + 1);
    if l.iter().all(|c| c.is_zero()) {
        return None;
    }
    debug_assert!(points.iter().zip(received).all(|(&b, &r)| {
        let lhs = if r.is_zero() { t.zero() } else { t.mul(eval(t, l, t.mul(t.mul(t.frobenius(r, 1), b), t.inv(r).unwrap())), r) };
        lhs == eval(t, q, b)
    }));
    solve_product(t, l, q, k)
}

/// Classic linearized Welch-Berlekamp for Gabidulin codes c_j = Σ f_i σ^i(g_j):
/// V(y_j) = N(g_j) with q-degrees ≤ τ and < τ + k, then N = V∘f.
pub fn naive_gabidulin_wb(t: &FieldTower, g: &[Fqm], y: &[Fqm], k: usize) -> Option<Vec<Fqm>> {
    let n = g.len();
    let tau = (n - k) / 2;
    let rows: Vec<Vec<Fqm>> = g
        .iter()
        .zip(y)
        .map(|(&gj, &yj)| {
            (0..=tau)
                .map(|i| t.frobenius(yj, i as i64))
                .chain((0..tau + k).map(|i| t.neg(t.frobenius(gj, i as i64))))
                .collect()
        })
        .collect();
    let sol = linalg::kernel(t, &Matrix::from_rows(rows, 2 * tau + k + 1)).into_iter().next()?;
    let (v, nn) = sol.split_at(tau + 1);
    if v.iter().all(|c| c.is_zero()) {
        return None;
    }
    solve_product(t, v, nn, k)
}

/// Welch-Berlekamp for Reed-Solomon codes over GF(q): V(a_j) y_j = N(a_j),
/// then ordinary polynomial division.
pub fn naive_rs_wb(f: &Subfield, a: &[Fq], y: &[Fq], k: usize) -> Option<Vec<Fq>> {
    let n = a.len();
    let tau = (n - k) / 2;
    let pow = |x: Fq, e: usize| (0..e).fold(f.one(), |acc, _| f.mul(acc, x));
    let rows: Vec<Vec<Fq>> = a
        .iter()
        .zip(y)
        .map(|(&aj, &yj)| {
            (0..=tau)
                .map(|i| f.mul(pow(aj, i), yj))
                .chain((0..tau + k).map(|i| f.neg(pow(aj, i))))
                .collect()
        })
        .collect();
    let sol = linalg::kernel(f, &Matrix::from_rows(rows, 2 * tau + k + 1)).into_iter().next()?;
    let (v, nn) = sol.split_at(tau + 1);
    let mut v = v.to_vec();
    while v.last() == Some(&0) {
        v.pop();
    }
    if v.is_empty() {
        return None;
    }
    // long division nn / v
    let mut rem = nn.to_vec();
    let dv = v.len() - 1;
    let lead_inv = f.inv(v[dv]);
    let mut quot = vec![0; rem.len().saturating_sub(dv).max(k)];
    for d in (dv..rem.len()).rev() {
        let c = f.mul(rem[d], lead_inv);
        if c == 0 {
            continue;
        }
        quot[d - dv] = c;
        for (i, &vi) in v.iter().enumerate() {
            rem[d - dv + i] = f.sub(rem[d - dv + i], f.mul(c, vi));
        }
    }
    if rem.iter().any(|&c| c != 0) || quot.iter().skip(k).any(|&c| c != 0) {
        return None;
    }
    quot.truncate(k);
    Some(quot)
}

/// All codewords within the decoding radius, by enumeration.
pub fn bruteforce_decode(spec: &CodeSpec, y: &BlockVector) -> Vec<Vec<Fqm>> {
    let t = spec.tower();
    let total = t.size().pow(spec.k() as u32);
    (0..total)
        .map(|i| spec.message_from_index(i))
        .filter(|msg| sum_rank_distance(t, &spec.encode(msg).unwrap(), y).unwrap() <= spec.radius())
        .collect()
}
