//! The adversarial multishot matrix channel.
//!
//! Shot i carries n_i packets X_i ∈ GF(q)^{m×n_i} (a block of a codeword).
//! The sink sees Y_i = X_i A_iᵀ + E_i and a wiretapper sees W_i = X_i B_iᵀ.
//! Error, erasure and wiretap budgets t, ρ, μ are totals; how they split
//! across shots is chosen by the adversary and never shown to a decoder.
//!
//! Every trial draws from its own ChaCha8 stream seeded with
//! `base_seed + trial_index` (see [`trial_rng`]), so trials replay exactly
//! and can run in any order.

use std::collections::HashMap;

use num_rational::Ratio;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{config, domain, usage, Result};
use crate::field::Field;
use crate::gf::{FieldTower, Fq, Fqm, Subfield};
use crate::linalg::{self, Matrix};
use crate::lrs::{CodeSpec, NestedPair};
use crate::skewpoly::minimal_skew_poly;
use crate::sumrank::{check_cap, matrix_rep, BlockShape, BlockVector, FqMatrix};
use crate::wbdecoder::skew_points;

pub use crate::sumrank::{lift, lift_matrices};

pub type TrialRng = ChaCha8Rng;

/// The RNG stream of one trial.
pub fn trial_rng(base_seed: u64, trial: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(base_seed.wrapping_add(trial))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChannelParams {
    pub shape: BlockShape,
    /// Received packets per shot, N_i.
    pub out_shape: Vec<usize>,
    pub t: usize,
    pub rho: usize,
    pub mu: usize,
    pub seed: u64,
}

impl ChannelParams {
    /// Square transfer matrices (N_i = n_i).
    pub fn new(shape: BlockShape, t: usize, rho: usize, mu: usize, seed: u64) -> Self {
        let out_shape = shape.lengths().to_vec();
        Self { shape, out_shape, t, rho, mu, seed }
    }

    pub fn with_out_shape(mut self, out_shape: Vec<usize>) -> Result<Self> {
        if out_shape.len() != self.shape.ell() {
            return Err(usage("one output width per shot"));
        }
        self.out_shape = out_shape;
        Ok(self)
    }
}

pub fn random_elem<R: Rng + ?Sized>(t: &FieldTower, rng: &mut R) -> Fqm {
    t.decode(rng.gen_range(0..t.size())).unwrap()
}

pub fn random_vec<R: Rng + ?Sized>(t: &FieldTower, rng: &mut R, len: usize) -> Vec<Fqm> {
    (0..len).map(|_| random_elem(t, rng)).collect()
}

pub fn random_matrix<R: Rng + ?Sized>(f: &Subfield, rng: &mut R, rows: usize, cols: usize) -> FqMatrix {
    let q = f.q();
    let data = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(0..q)).collect()).collect();
    Matrix::from_rows(data, cols)
}

/// Full-rank matrix by rejection.
pub fn random_full_rank<R: Rng + ?Sized>(f: &Subfield, rng: &mut R, rows: usize, cols: usize) -> FqMatrix {
    loop {
        let m = random_matrix(f, rng, rows, cols);
        if linalg::rank(f, &m) == rows.min(cols) {
            return m;
        }
    }
}

/// rows × cols matrix of rank exactly `rank`, as a product of random
/// full-rank factors.
pub fn random_rank_matrix<R: Rng + ?Sized>(f: &Subfield, rng: &mut R, rows: usize, cols: usize, rank: usize) -> FqMatrix {
    assert!(rank <= rows.min(cols), "rank {rank} impossible for {rows}×{cols}");
    if rank == 0 {
        return linalg::zeros(f, rows, cols);
    }
    let left = random_full_rank(f, rng, rows, rank);
    let right = random_full_rank(f, rng, rank, cols);
    linalg::mat_mul(f, &left, &right)
}

/// Vector of GF(q)-rank exactly `rank` in GF(q^m)^len.
pub fn random_rank_vector<R: Rng + ?Sized>(t: &FieldTower, rng: &mut R, len: usize, rank: usize) -> Vec<Fqm> {
    let mat = random_rank_matrix(t.subfield(), rng, t.m(), len, rank);
    crate::sumrank::from_matrix(t, &mat).expect("m rows")
}

/// Splits `total` into per-shot amounts bounded by `caps`, one unit at a
/// time to a random shot with room left.
pub fn random_split<R: Rng + ?Sized>(rng: &mut R, total: usize, caps: &[usize]) -> Result<Vec<usize>> {
    if total > caps.iter().sum() {
        return Err(domain(format!("budget {total} exceeds the per-shot capacity {caps:?}")));
    }
    let mut out = vec![0; caps.len()];
    for _ in 0..total {
        let open: Vec<usize> = (0..caps.len()).filter(|&i| out[i] < caps[i]).collect();
        out[open[rng.gen_range(0..open.len())]] += 1;
    }
    Ok(out)
}

/// Everything that happened on one coherent use of the channel. Only `a`
/// and `y` form the receiver's view.
#[derive(Clone, Debug)]
pub struct ChannelOutcome {
    pub a: Vec<FqMatrix>,
    /// Error e^{(i)} ∈ GF(q^m)^{N_i} per shot (columns of E_i).
    pub e: BlockVector,
    pub y: BlockVector,
    pub t_split: Vec<usize>,
    pub rho_split: Vec<usize>,
    pub seed: u64,
}

/// Samples a random split of t and ρ, then transmits.
pub fn coherent_transmit<R: Rng + ?Sized>(
    t: &FieldTower,
    params: &ChannelParams,
    x: &BlockVector,
    rng: &mut R,
) -> Result<ChannelOutcome> {
    let t_caps: Vec<usize> = params.out_shape.iter().map(|&ni| ni.min(t.m())).collect();
    let rho_caps = params.shape.lengths().to_vec();
    let t_split = random_split(rng, params.t, &t_caps)?;
    let rho_split = random_split(rng, params.rho, &rho_caps)?;
    coherent_transmit_split(t, params, x, &t_split, &rho_split, rng)
}

/// Transmission with an adversary-chosen split: Rk(A_i) = n_i − ρ_i and
/// Rk(E_i) = t_i exactly.
pub fn coherent_transmit_split<R: Rng + ?Sized>(
    t: &FieldTower,
    params: &ChannelParams,
    x: &BlockVector,
    t_split: &[usize],
    rho_split: &[usize],
    rng: &mut R,
) -> Result<ChannelOutcome> {
    if x.shape() != &params.shape {
        return Err(usage("codeword does not match the channel shape"));
    }
    let ell = params.shape.ell();
    if t_split.len() != ell || rho_split.len() != ell {
        return Err(usage("one budget entry per shot"));
    }
    if t_split.iter().sum::<usize>() > params.t || rho_split.iter().sum::<usize>() > params.rho {
        return Err(usage("split exceeds the budget"));
    }
    let f = t.subfield();
    let mut a = Vec::with_capacity(ell);
    let mut errs = Vec::with_capacity(ell);
    let mut ys = Vec::with_capacity(ell);
    for i in 0..ell {
        let (ni, nout) = (params.shape.lengths()[i], params.out_shape[i]);
        if rho_split[i] > ni || ni - rho_split[i] > nout || t_split[i] > nout.min(t.m()) {
            return Err(domain(format!("infeasible budget split at shot {}", i + 1)));
        }
        let ai = random_rank_matrix(f, rng, nout, ni, ni - rho_split[i]);
        let ei = random_rank_vector(t, rng, nout, t_split[i]);
        let yi = apply_transfer(t, x.block(i), &ai)
            .into_iter()
            .zip(&ei)
            .map(|(v, &e)| t.add(v, e))
            .collect();
        a.push(ai);
        errs.push(ei);
        ys.push(yi);
    }
    Ok(ChannelOutcome {
        a,
        e: BlockVector::from_blocks(errs)?,
        y: BlockVector::from_blocks(ys)?,
        t_split: t_split.to_vec(),
        rho_split: rho_split.to_vec(),
        seed: params.seed,
    })
}

/// x Aᵀ for a packet vector x and a GF(q) matrix A.
pub fn apply_transfer(t: &FieldTower, x: &[Fqm], a: &FqMatrix) -> Vec<Fqm> {
    (0..a.rows())
        .map(|r| (0..a.cols()).fold(t.zero(), |acc, c| t.add(acc, t.scale(a[(r, c)], x[c]))))
        .collect()
}

#[derive(Clone, Debug)]
pub struct Wiretap {
    pub b: Vec<FqMatrix>,
    pub w: Vec<Vec<Fqm>>,
    pub mu_split: Vec<usize>,
}

/// Random B_i ∈ GF(q)^{μ_i × n_i} (any rank) and W_i = X_i B_iᵀ.
pub fn wiretap_observe<R: Rng + ?Sized>(t: &FieldTower, params: &ChannelParams, x: &BlockVector, rng: &mut R) -> Result<Wiretap> {
    let caps = params.shape.lengths().to_vec();
    let mu_split = random_split(rng, params.mu, &caps)?;
    let b: Vec<FqMatrix> = mu_split
        .iter()
        .zip(&caps)
        .map(|(&mi, &ni)| random_matrix(t.subfield(), rng, mi, ni))
        .collect();
    let w = observe(t, x, &b);
    Ok(Wiretap { b, w, mu_split })
}

pub fn observe(t: &FieldTower, x: &BlockVector, b: &[FqMatrix]) -> Vec<Vec<Fqm>> {
    b.iter().enumerate().map(|(i, bi)| apply_transfer(t, x.block(i), bi)).collect()
}

/// Every wiretap (B_1, …, B_ℓ) with Σ μ_i = μ and μ_i ≤ n_i.
pub fn enumerate_wiretaps(f: &Subfield, shape: &BlockShape, mu: usize, cap: u64) -> Result<Vec<Vec<FqMatrix>>> {
    let q = f.q() as u128;
    let mut splits = Vec::new();
    compositions(shape.lengths(), mu, &mut vec![0; shape.ell()], 0, &mut splits);
    let count: u128 = splits
        .iter()
        .map(|s| {
            let e: usize = s.iter().zip(shape.lengths()).map(|(mi, ni)| mi * ni).sum();
            q.checked_pow(e as u32).unwrap_or(u128::MAX)
        })
        .sum();
    check_cap(count, cap)?;
    let mut out = Vec::with_capacity(count as usize);
    for split in splits {
        let sizes: Vec<usize> = split.iter().zip(shape.lengths()).map(|(mi, ni)| mi * ni).collect();
        let total: usize = sizes.iter().sum();
        for mut idx in 0..(q.pow(total as u32) as u64) {
            let mats = split
                .iter()
                .zip(shape.lengths())
                .map(|(&mi, &ni)| {
                    let rows = (0..mi)
                        .map(|_| {
                            (0..ni)
                                .map(|_| {
                                    let v = (idx % q as u64) as Fq;
                                    idx /= q as u64;
                                    v
                                })
                                .collect()
                        })
                        .collect();
                    Matrix::from_rows(rows, ni)
                })
                .collect();
            out.push(mats);
        }
    }
    Ok(out)
}

fn compositions(caps: &[usize], remaining: usize, cur: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
    if i == caps.len() {
        if remaining == 0 {
            out.push(cur.clone());
        }
        return;
    }
    for v in 0..=caps[i].min(remaining) {
        cur[i] = v;
        compositions(caps, remaining - v, cur, i + 1, out);
    }
    cur[i] = 0;
}

/// One non-coherent use of the channel on a lifted codeword. The receiver
/// sees only `y`.
#[derive(Clone, Debug)]
pub struct NoncoherentOutcome {
    pub a: Vec<FqMatrix>,
    /// E_i ∈ GF(q)^{(m+n_i) × N_i}.
    pub e: Vec<FqMatrix>,
    pub y: Vec<FqMatrix>,
    pub t_split: Vec<usize>,
    pub rho_split: Vec<usize>,
    pub seed: u64,
}

/// Y_i = X_i A_iᵀ + E_i for the lifted X_i = [M(c^{(i)}); I].
pub fn noncoherent_transmit<R: Rng + ?Sized>(
    t: &FieldTower,
    params: &ChannelParams,
    c: &BlockVector,
    rng: &mut R,
) -> Result<NoncoherentOutcome> {
    let m = t.m();
    let t_caps: Vec<usize> = params.out_shape.iter().zip(params.shape.lengths()).map(|(&no, &ni)| no.min(m + ni)).collect();
    let t_split = random_split(rng, params.t, &t_caps)?;
    let rho_split = random_split(rng, params.rho, params.shape.lengths())?;
    noncoherent_transmit_split(t, params, c, &t_split, &rho_split, rng)
}

pub fn noncoherent_transmit_split<R: Rng + ?Sized>(
    t: &FieldTower,
    params: &ChannelParams,
    c: &BlockVector,
    t_split: &[usize],
    rho_split: &[usize],
    rng: &mut R,
) -> Result<NoncoherentOutcome> {
    if c.shape() != &params.shape {
        return Err(usage("codeword does not match the channel shape"));
    }
    let f = t.subfield();
    let lifted = lift_matrices(t, c);
    let (mut a, mut e, mut y) = (Vec::new(), Vec::new(), Vec::new());
    for (i, xi) in lifted.iter().enumerate() {
        let (ni, nout) = (params.shape.lengths()[i], params.out_shape[i]);
        if rho_split[i] > ni || ni - rho_split[i] > nout || t_split[i] > nout.min(xi.rows()) {
            return Err(domain(format!("infeasible budget split at shot {}", i + 1)));
        }
        let ai = random_rank_matrix(f, rng, nout, ni, ni - rho_split[i]);
        let ei = random_rank_matrix(f, rng, xi.rows(), nout, t_split[i]);
        let mut yi = linalg::mat_mul(f, xi, &ai.transpose());
        for r in 0..yi.rows() {
            for col in 0..yi.cols() {
                yi[(r, col)] = f.add(yi[(r, col)], ei[(r, col)]);
            }
        }
        a.push(ai);
        e.push(ei);
        y.push(yi);
    }
    Ok(NoncoherentOutcome { a, e, y, t_split: t_split.to_vec(), rho_split: rho_split.to_vec(), seed: params.seed })
}

/// Two codewords that no decoder can tell apart under t errors and ρ
/// erasures: c1 Aᵀ + e1 = c2 Aᵀ + e2 with wt_SR(e_j) ≤ t and
/// Σ (n_i − Rk A_i) ≤ ρ.
#[derive(Clone, Debug)]
pub struct ConfusablePair {
    pub c1: BlockVector,
    pub c2: BlockVector,
    pub a: Vec<FqMatrix>,
    pub e1: BlockVector,
    pub e2: BlockVector,
    pub rho_split: Vec<usize>,
}

/// The converse construction: a codeword c of minimum weight d = n − k + 1
/// (from the message polynomial vanishing on the first k − 1 points),
/// factored per shot as c^{(i)} = x_i B_i. Erasures remove the last ρ_i
/// rows of B_i (A_i spans the annihilator of those rows), and the remaining
/// rank-one terms of c Aᵀ are dealt out between −e1 and e2. Returns `None`
/// when 2t + ρ < d, where no such pair exists.
pub fn worst_case_confusable_pair(spec: &CodeSpec, t_budget: usize, rho: usize) -> Option<ConfusablePair> {
    let t = spec.tower();
    let f = t.subfield();
    let (n, k) = (spec.n(), spec.k());
    if k == 0 || 2 * t_budget + rho < n - k + 1 {
        return None;
    }
    let pts = skew_points(spec);
    let poly = minimal_skew_poly(t, &pts[..k - 1]);
    let msg: Vec<Fqm> = (0..k).map(|i| poly.coeff(t, i)).collect();
    let c = spec.encode(&msg).ok()?;

    let mut remaining_rho = rho;
    let mut a = Vec::new();
    let mut rho_split = Vec::new();
    let mut terms: Vec<(usize, Vec<Fqm>)> = Vec::new();
    let mut out_lengths = Vec::new();
    for (i, block) in c.blocks().enumerate() {
        let ni = block.len();
        let mat = matrix_rep(t, block);
        let mut rref = mat.clone();
        let pivots = linalg::rref(f, &mut rref);
        let wi = pivots.len();
        // x_i: columns of M at the pivot positions; B_i: nonzero RREF rows.
        let xi = crate::sumrank::from_matrix(t, &mat.select_cols(&pivots)).ok()?;
        let bi = rref.select_rows(&(0..wi).collect::<Vec<_>>());
        let ri = wi.min(remaining_rho);
        remaining_rho -= ri;
        let erased = bi.select_rows(&(wi - ri..wi).collect::<Vec<_>>());
        let ai = match ri {
            0 => linalg::identity(f, ni),
            _ => {
                let ker = linalg::kernel(f, &erased);
                Matrix::from_rows(ker, ni)
            }
        };
        // c^{(i)} A_iᵀ = Σ_l x_{i,l} (B_i A_iᵀ)_l
        let bat = linalg::mat_mul(f, &bi, &ai.transpose());
        for l in 0..wi - ri {
            let row: Vec<Fqm> = bat.row(l).iter().map(|&s| t.scale(s, xi[l])).collect();
            terms.push((i, row));
        }
        out_lengths.push(ai.rows());
        a.push(ai);
        rho_split.push(ri);
    }
    let mut e1: Vec<Vec<Fqm>> = out_lengths.iter().map(|&l| vec![t.zero(); l]).collect();
    let mut e2 = e1.clone();
    for (idx, (i, row)) in terms.into_iter().enumerate() {
        let (target, negate) = if idx < t_budget { (&mut e2[i], false) } else { (&mut e1[i], true) };
        for (slot, v) in target.iter_mut().zip(row) {
            *slot = t.add(*slot, if negate { t.neg(v) } else { v });
        }
    }
    Some(ConfusablePair {
        c2: BlockVector::zero(t, spec.shape()),
        c1: c,
        a,
        e1: BlockVector::from_blocks(e1).ok()?,
        e2: BlockVector::from_blocks(e2).ok()?,
        rho_split,
    })
}

/// Exact I(S; X Bᵀ) in units of log q^m for a uniform secret and uniform
/// keys, by enumerating all q^{m k1} inputs x = (keys, secret).
pub fn empirical_mutual_information(pair: &NestedPair, b: &[FqMatrix], cap: u64) -> Result<Ratio<u64>> {
    let outer = pair.outer();
    let t = outer.tower();
    let shape = outer.shape();
    if b.len() != shape.ell() || b.iter().zip(shape.lengths()).any(|(bi, &ni)| bi.cols() != ni) {
        return Err(usage("wiretap matrices must be μ_i × n_i per shot"));
    }
    let qm = t.size();
    let k1 = pair.k1() as u32;
    let total = (qm as u128).checked_pow(k1).unwrap_or(u128::MAX);
    check_cap(total, cap)?;
    // W = x K with K = G_1 Bᵀ (k1 × μ), Bᵀ block-diagonal.
    let bt = crate::lrs::block_diag_embed(t, shape, b).transpose();
    let kmat = linalg::mat_mul(t, outer.generator_matrix(), &bt);
    let mu = kmat.cols();
    if (qm as u128).checked_pow(mu as u32).is_none_or(|v| v > u64::MAX as u128) {
        return Err(config("observation space too large to index"));
    }
    let k2 = pair.k2();
    let keys = (qm as u128).pow(k2 as u32) as u64;
    let secrets = (total / keys as u128) as u64;
    // contribution[j][v] = v·K_j, so W(x) is a sum of table lookups.
    let contribution: Vec<Vec<Vec<Fqm>>> = (0..k1 as usize)
        .map(|j| {
            (0..qm)
                .map(|v| {
                    let v = t.decode(v).expect("in range");
                    kmat.row(j).iter().map(|&k| t.mul(v, k)).collect()
                })
                .collect()
        })
        .collect();
    let accumulate = |acc: &mut [Fqm], mut idx: u64, positions: std::ops::Range<usize>| {
        for j in positions {
            for (a, &c) in acc.iter_mut().zip(&contribution[j][(idx % qm) as usize]) {
                *a = t.add(*a, c);
            }
            idx /= qm;
        }
    };
    let mut marginal: HashMap<u64, u64> = HashMap::new();
    let mut cond_support = None;
    for s in 0..secrets {
        let mut secret_part = vec![t.zero(); mu];
        accumulate(&mut secret_part, s, k2..k1 as usize);
        let mut given_s: HashMap<u64, u64> = HashMap::new();
        for r in 0..keys {
            let mut w = secret_part.clone();
            accumulate(&mut w, r, 0..k2);
            let w = w.iter().rev().fold(0u64, |acc, &x| acc * qm + t.encode(x));
            *given_s.entry(w).or_default() += 1;
            *marginal.entry(w).or_default() += 1;
        }
        let h = uniform_log(&given_s, qm)?;
        match cond_support {
            None => cond_support = Some(h),
            Some(prev) if prev == h => {}
            Some(_) => return Err(domain("conditional observation entropy varies with the secret")),
        }
    }
    let h_w = uniform_log(&marginal, qm)?;
    let h_w_s = cond_support.unwrap_or(0);
    Ok(Ratio::from_integer(h_w - h_w_s))
}

/// log_{q^m} of the support size of a uniform distribution; errors when
/// the counts are not uniform on a support of size a power of q^m (never
/// the case for images of linear maps).
fn uniform_log(counts: &HashMap<u64, u64>, qm: u64) -> Result<u64> {
    let first = *counts.values().next().unwrap_or(&0);
    if counts.values().any(|&c| c != first) {
        return Err(domain("observation distribution is not uniform"));
    }
    let mut size = counts.len() as u64;
    let mut log = 0;
    while size > 1 {
        if !size.is_multiple_of(qm) {
            return Err(domain("support size is not a power of q^m"));
        }
        size /= qm;
        log += 1;
    }
    Ok(log)
}

/// One line of a trial transcript.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TrialRecord {
    pub seed: u64,
    pub t: usize,
    pub rho: usize,
    pub mu: usize,
    pub t_split: Vec<usize>,
    pub rho_split: Vec<usize>,
    pub transfer_ranks: Vec<usize>,
    pub error_ranks: Vec<usize>,
    pub outcome: String,
}

impl TrialRecord {
    pub fn from_outcome(t: &FieldTower, params: &ChannelParams, out: &ChannelOutcome, outcome: impl Into<String>) -> Self {
        Self {
            seed: out.seed,
            t: params.t,
            rho: params.rho,
            mu: params.mu,
            t_split: out.t_split.clone(),
            rho_split: out.rho_split.clone(),
            transfer_ranks: out.a.iter().map(|a| linalg::rank(t.subfield(), a)).collect(),
            error_ranks: out.e.blocks().map(|e| crate::sumrank::rank_weight(t, e)).collect(),
            outcome: outcome.into(),
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}
