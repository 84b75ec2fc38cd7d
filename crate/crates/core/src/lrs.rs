//! Linearized Reed-Solomon codes C^σ_{L,k}(𝓑, γ), their duals and nested
//! coset coding schemes built from them.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{config, usage, Result};
use crate::gf::{FieldTower, Fqm};
use crate::linalg::{self, Matrix};
use crate::skewpoly::SkewPoly;
use crate::sumrank::{check_cap, rank_weight, BlockShape, BlockVector, FqMatrix, SubspaceList};

/// One linearized Reed-Solomon code. Block i is evaluated with the operator
/// D_{γ^{i−1}} on the GF(q)-independent set 𝓑^{(i)}.
#[derive(Clone)]
pub struct CodeSpec {
    tower: FieldTower,
    shape: BlockShape,
    k: usize,
    gamma: Fqm,
    bases: Vec<Vec<Fqm>>,
    generator: Arc<OnceLock<Matrix<Fqm>>>,
}

impl fmt::Debug for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CodeSpec")
            .field("tower", &self.tower)
            .field("shape", &self.shape.lengths())
            .field("k", &self.k)
            .field("gamma", &self.gamma)
            .field("bases", &self.bases)
            .finish()
    }
}

impl PartialEq for CodeSpec {
    fn eq(&self, other: &Self) -> bool {
        self.tower == other.tower
            && self.shape == other.shape
            && self.k == other.k
            && self.gamma == other.gamma
            && self.bases == other.bases
    }
}

impl Eq for CodeSpec {}

impl CodeSpec {
    /// Default code: every 𝓑^{(i)} is {1, z, …, z^{n_i−1}} and γ is the
    /// tower's primitive element.
    pub fn new(tower: &FieldTower, shape: BlockShape, k: usize) -> Result<Self> {
        let bases = shape
            .lengths()
            .iter()
            .map(|&ni| (0..ni).map(|j| tower.pow(tower.z(), j as u64)).collect())
            .collect();
        Self::with_bases(tower, shape, k, tower.primitive_element(), bases)
    }

    pub fn with_bases(
        tower: &FieldTower,
        shape: BlockShape,
        k: usize,
        gamma: Fqm,
        bases: Vec<Vec<Fqm>>,
    ) -> Result<Self> {
        let (q, m) = (tower.q() as usize, tower.m());
        if shape.ell() > q - 1 {
            return Err(config(format!(
                "ℓ = {} shots exceed q − 1 = {} available conjugacy classes (need 1 ≤ ℓ ≤ q − 1)",
                shape.ell(),
                q - 1
            )));
        }
        if let Some(&ni) = shape.lengths().iter().find(|&&ni| ni == 0 || ni > m) {
            return Err(config(format!("block width n_i = {ni} must satisfy 1 ≤ n_i ≤ m = {m}")));
        }
        if tower.multiplicative_order(gamma) != Some(tower.size() - 1) {
            return Err(config("γ must be a primitive element of GF(q^m)"));
        }
        Self::build(tower, shape, k, gamma, bases)
    }

    /// Shared validation; zero-width blocks are allowed here (punctured
    /// codes after erasures).
    fn build(tower: &FieldTower, shape: BlockShape, k: usize, gamma: Fqm, bases: Vec<Vec<Fqm>>) -> Result<Self> {
        if k > shape.n() {
            return Err(config(format!("dimension k = {k} exceeds length n = {}", shape.n())));
        }
        if bases.len() != shape.ell() {
            return Err(config("one basis per block is required"));
        }
        for (i, (b, &ni)) in bases.iter().zip(shape.lengths()).enumerate() {
            if b.len() != ni {
                return Err(config(format!("basis {} has {} elements, block width is {ni}", i + 1, b.len())));
            }
            if b.iter().chain([&gamma]).any(|&x| !tower.owns(x)) {
                return Err(config("basis or γ from another field tower"));
            }
            if rank_weight(tower, b) != ni {
                return Err(config(format!("basis {} is not linearly independent over GF(q)", i + 1)));
            }
        }
        Ok(Self {
            tower: tower.clone(),
            shape,
            k,
            gamma,
            bases,
            generator: Arc::default(),
        })
    }

    /// Same code family with another dimension.
    pub fn with_k(&self, k: usize) -> Result<Self> {
        Self::build(&self.tower, self.shape.clone(), k, self.gamma, self.bases.clone())
    }

    /// The code on the same operators with new per-block bases; used after
    /// erasures, where blocks may shrink or vanish.
    pub fn punctured(&self, bases: Vec<Vec<Fqm>>) -> Result<Self> {
        let shape = BlockShape::with_erasures(bases.iter().map(Vec::len).collect())?;
        Self::build(&self.tower, shape, self.k, self.gamma, bases)
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn n(&self) -> usize {
        self.shape.n()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn gamma(&self) -> Fqm {
        self.gamma
    }

    pub fn bases(&self) -> &[Vec<Fqm>] {
        &self.bases
    }

    /// γ^{i} for the i-th block (0-based).
    pub fn block_point(&self, i: usize) -> Fqm {
        self.tower.pow(self.gamma, i as u64)
    }

    /// ⌊(n − k)/2⌋
    pub fn radius(&self) -> usize {
        (self.n() - self.k) / 2
    }

    /// k × n matrix with entry (j, t) of block i equal to
    /// σ^j(β_t^{(i)}) N_j(γ^{i−1}).
    pub fn generator_matrix(&self) -> &Matrix<Fqm> {
        self.generator.get_or_init(|| {
            let t = &self.tower;
            let n = self.n();
            let mut g = Matrix::filled(self.k, n, t.zero());
            let mut col = 0;
            for (i, basis) in self.bases.iter().enumerate() {
                let a = self.block_point(i);
                for &beta in basis {
                    let mut norm = t.one();
                    for j in 0..self.k {
                        g[(j, col)] = t.mul(t.frobenius(beta, j as i64), norm);
                        norm = t.mul(t.frobenius(norm, 1), a);
                    }
                    col += 1;
                }
            }
            g
        })
    }

    pub fn encode(&self, msg: &[Fqm]) -> Result<BlockVector> {
        if msg.len() != self.k {
            return Err(usage(format!("message has {} symbols, code dimension is {}", msg.len(), self.k)));
        }
        let data = linalg::vec_mul(&self.tower, msg, self.generator_matrix());
        BlockVector::new(self.shape.clone(), data)
    }

    /// Packets of shot i alone, so shot i can be sent before later shots
    /// are computed.
    pub fn encode_shot(&self, msg: &[Fqm], i: usize) -> Result<Vec<Fqm>> {
        if msg.len() != self.k {
            return Err(usage(format!("message has {} symbols, code dimension is {}", msg.len(), self.k)));
        }
        let f = self.message_poly(msg);
        let a = self.block_point(i);
        Ok(self.bases[i].iter().map(|&b| crate::skewpoly::operator_eval(&self.tower, &f, a, b)).collect())
    }

    /// F = Σ msg_j x^j.
    pub fn message_poly(&self, msg: &[Fqm]) -> SkewPoly {
        SkewPoly::new(msg.to_vec())
    }

    pub fn contains(&self, c: &BlockVector) -> bool {
        c.shape() == &self.shape && linalg::in_row_space(&self.tower, self.generator_matrix(), c.data())
    }

    /// All q^{mk} codewords, refusing above `cap`.
    pub fn codewords(&self, cap: u64) -> Result<Vec<BlockVector>> {
        let qm = self.tower.size() as u128;
        let count = qm.checked_pow(self.k as u32).unwrap_or(u128::MAX);
        check_cap(count, cap)?;
        Ok((0..count as u64).map(|idx| self.encode(&self.message_from_index(idx)).unwrap()).collect())
    }

    /// Message whose base-|GF(q^m)| digits are `idx`, first symbol least
    /// significant.
    pub fn message_from_index(&self, mut idx: u64) -> Vec<Fqm> {
        let qm = self.tower.size();
        (0..self.k)
            .map(|_| {
                let e = self.tower.decode(idx % qm).unwrap();
                idx /= qm;
                e
            })
            .collect()
    }

    /// The dual code, itself linearized Reed-Solomon for σ^{−1} with
    /// dimension n − k and primitive element σ^{−1}(γ). Its bases are the
    /// blocks of the vector spanning the dual of the [n, n−1] code.
    pub fn dual(&self) -> Result<Self> {
        let t = &self.tower;
        let n = self.n();
        let m = t.m();
        let r_dual = if m == self.tower.r() { m } else { m - self.tower.r() };
        let dual_tower = t.with_r(r_dual)?;
        let gamma = t.frobenius(self.gamma, -1);
        let big = self.with_k(n - 1)?;
        let ker = linalg::kernel(t, big.generator_matrix());
        if ker.len() != 1 {
            return Err(config("the [n, n−1] code is not of full rank"));
        }
        let alpha = &ker[0];
        let bases = (0..self.shape.ell()).map(|i| alpha[self.shape.range(i)].to_vec()).collect();
        Self::build(&dual_tower, self.shape.clone(), n - self.k, gamma, bases)
    }
}

/// C_2 ⊊ C_1 sharing everything but the dimension; the inner generator is
/// the top k2 rows of the outer one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestedPair {
    outer: CodeSpec,
    inner: CodeSpec,
}

impl NestedPair {
    pub fn new(outer: CodeSpec, k2: usize) -> Result<Self> {
        if k2 >= outer.k() {
            return Err(config(format!("inner dimension k2 = {k2} must be below k1 = {}", outer.k())));
        }
        let inner = outer.with_k(k2)?;
        Ok(Self { outer, inner })
    }

    /// The pair achieving n − 2t − ρ − μ secret symbols: k1 = n − 2t − ρ, k2 = μ.
    pub fn optimal(tower: &FieldTower, shape: BlockShape, t: usize, rho: usize, mu: usize) -> Result<Self> {
        let n = shape.n();
        if 2 * t + rho + mu >= n {
            return Err(config(format!("2t + ρ + μ = {} must be below n = {n}", 2 * t + rho + mu)));
        }
        Self::new(CodeSpec::new(tower, shape, n - 2 * t - rho)?, mu)
    }

    pub fn outer(&self) -> &CodeSpec {
        &self.outer
    }

    pub fn inner(&self) -> &CodeSpec {
        &self.inner
    }

    pub fn k1(&self) -> usize {
        self.outer.k()
    }

    pub fn k2(&self) -> usize {
        self.inner.k()
    }

    /// Number of secret symbols k1 − k2.
    pub fn secret_len(&self) -> usize {
        self.k1() - self.k2()
    }
}

/// Encodes x = (randomness, secret) with the outer generator; the secret
/// rides on the last k1 − k2 rows.
pub fn coset_encode(pair: &NestedPair, secret: &[Fqm], randomness: &[Fqm]) -> Result<BlockVector> {
    if secret.len() != pair.secret_len() || randomness.len() != pair.k2() {
        return Err(usage(format!(
            "expected {} secret and {} random symbols, got {} and {}",
            pair.secret_len(),
            pair.k2(),
            secret.len(),
            randomness.len()
        )));
    }
    let x: Vec<Fqm> = randomness.iter().chain(secret).copied().collect();
    pair.outer.encode(&x)
}

/// dim(C_2^⊥ ∩ 𝒱_𝓛) − dim(C_1^⊥ ∩ 𝒱_𝓛) over GF(q^m).
///
/// With Λ the block-diagonal matrix of bases of the 𝓛_i, 𝒱_𝓛 is the
/// row space of Λ and dim(C^⊥ ∩ 𝒱_𝓛) = rows(Λ) − rank(Λ Gᵀ), so the
/// difference is rank(Λ G_1ᵀ) − rank(Λ G_2ᵀ).
pub fn leakage_dims(pair: &NestedPair, l: &SubspaceList) -> Result<usize> {
    let shape = pair.outer.shape();
    if l.ambient() != shape.lengths() {
        return Err(usage("wiretap subspaces must live in GF(q)^{n_i} for every shot"));
    }
    let t = pair.outer.tower();
    let lam = block_diag_embed(t, shape, l.bases());
    let r1 = linalg::rank(t, &linalg::mat_mul(t, &lam, &pair.outer.generator_matrix().transpose()));
    let r2 = linalg::rank(t, &linalg::mat_mul(t, &lam, &pair.inner.generator_matrix().transpose()));
    Ok(r1 - r2)
}

/// Block-diagonal matrix over GF(q^m) from per-block GF(q) matrices.
pub(crate) fn block_diag_embed(t: &FieldTower, shape: &BlockShape, blocks: &[FqMatrix]) -> Matrix<Fqm> {
    let rows: usize = blocks.iter().map(Matrix::rows).sum();
    let mut out = Matrix::filled(rows, shape.n(), t.zero());
    let mut r0 = 0;
    for (i, b) in blocks.iter().enumerate() {
        let c0 = shape.range(i).start;
        for r in 0..b.rows() {
            for c in 0..b.cols() {
                out[(r0 + r, c0 + c)] = t.from_subfield(b[(r, c)]);
            }
        }
        r0 += b.rows();
    }
    out
}
