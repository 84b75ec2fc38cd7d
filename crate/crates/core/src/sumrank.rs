//! Sum-rank weight and the subspace distances of multishot network coding.

use std::ops::Range;

use crate::error::{usage, Error, Result};
use crate::gf::{FieldTower, Fq, Fqm, Subfield};
use crate::linalg::{self, Matrix};
use crate::skewpoly::{minimal_skew_poly, newton_interpolate, right_gcd, PBasis};

pub type FqMatrix = Matrix<Fq>;

/// Widths n_1..n_ℓ of the shots. Width 0 marks an erased shot and only
/// arises inside punctured codes.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BlockShape {
    lengths: Vec<usize>,
}

impl BlockShape {
    pub fn new(lengths: Vec<usize>) -> Result<Self> {
        if lengths.contains(&0) {
            return Err(usage("every block width must be positive"));
        }
        Self::with_erasures(lengths)
    }

    /// Like [`BlockShape::new`] but allows zero-width (erased) blocks.
    pub fn with_erasures(lengths: Vec<usize>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(usage("a shape needs at least one block"));
        }
        Ok(Self { lengths })
    }

    /// ℓ blocks of width n′.
    pub fn uniform(ell: usize, width: usize) -> Result<Self> {
        Self::new(vec![width; ell])
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn ell(&self) -> usize {
        self.lengths.len()
    }

    pub fn n(&self) -> usize {
        self.lengths.iter().sum()
    }

    /// Coordinate range of block i.
    pub fn range(&self, i: usize) -> Range<usize> {
        let start: usize = self.lengths[..i].iter().sum();
        start..start + self.lengths[i]
    }

    /// (block, index within block) for every coordinate, in order.
    pub fn positions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.lengths.iter().enumerate().flat_map(|(i, &n)| (0..n).map(move |j| (i, j)))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BlockVector {
    shape: BlockShape,
    data: Vec<Fqm>,
}

impl BlockVector {
    pub fn new(shape: BlockShape, data: Vec<Fqm>) -> Result<Self> {
        if data.len() != shape.n() {
            return Err(usage(format!("vector of length {} does not fit shape {:?}", data.len(), shape.lengths())));
        }
        Ok(Self { shape, data })
    }

    pub fn zero(t: &FieldTower, shape: &BlockShape) -> Self {
        Self { shape: shape.clone(), data: vec![t.zero(); shape.n()] }
    }

    pub fn from_blocks(blocks: Vec<Vec<Fqm>>) -> Result<Self> {
        let shape = BlockShape::with_erasures(blocks.iter().map(Vec::len).collect())?;
        Ok(Self { shape, data: blocks.into_iter().flatten().collect() })
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn data(&self) -> &[Fqm] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Fqm> {
        self.data
    }

    pub fn block(&self, i: usize) -> &[Fqm] {
        &self.data[self.shape.range(i)]
    }

    pub fn blocks(&self) -> impl Iterator<Item = &[Fqm]> + '_ {
        (0..self.shape.ell()).map(|i| self.block(i))
    }

    pub fn add(&self, t: &FieldTower, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| t.add(a, b)).collect();
        Ok(Self { shape: self.shape.clone(), data })
    }

    pub fn sub(&self, t: &FieldTower, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| t.sub(a, b)).collect();
        Ok(Self { shape: self.shape.clone(), data })
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        match self.shape == other.shape {
            true => Ok(()),
            false => Err(usage("block vectors have different shapes")),
        }
    }
}

/// m × len matrix whose column j holds the GF(q)-coordinates of v_j in the
/// polynomial basis.
pub fn matrix_rep(t: &FieldTower, v: &[Fqm]) -> FqMatrix {
    let mut out = Matrix::filled(t.m(), v.len(), 0);
    for (j, a) in v.iter().enumerate() {
        for (i, &c) in t.coords(a).iter().enumerate() {
            out[(i, j)] = c;
        }
    }
    out
}

/// Inverse of [`matrix_rep`].
pub fn from_matrix(t: &FieldTower, m: &FqMatrix) -> Result<Vec<Fqm>> {
    if m.rows() != t.m() {
        return Err(usage(format!("matrix has {} rows, expected m = {}", m.rows(), t.m())));
    }
    (0..m.cols()).map(|j| t.from_coords(&m.col(j))).collect()
}

/// GF(q)-rank of the coordinate matrix of v.
pub fn rank_weight(t: &FieldTower, v: &[Fqm]) -> usize {
    if v.is_empty() {
        return 0;
    }
    linalg::rank(t.subfield(), &matrix_rep(t, v))
}

pub fn sum_rank_weight(t: &FieldTower, c: &BlockVector) -> usize {
    c.blocks().map(|b| rank_weight(t, b)).sum()
}

pub fn sum_rank_distance(t: &FieldTower, a: &BlockVector, b: &BlockVector) -> Result<usize> {
    Ok(sum_rank_weight(t, &a.sub(t, b)?))
}

/// Skew weight n − Rk(Z(F) ∩ Ω̄) of the polynomial taking `f_values` on the
/// P-basis. The zeros of F inside the closure of the basis are exactly the
/// zeros of rgcd(F, F_Ω), whose degree is their rank.
pub fn skew_weight(t: &FieldTower, f_values: &[Fqm], basis: &PBasis) -> Result<usize> {
    let f = newton_interpolate(t, basis, f_values)?;
    let annihilator = minimal_skew_poly(t, basis.points());
    let g = right_gcd(t, &f, &annihilator);
    Ok(basis.len() - g.deg().unwrap_or(0))
}

/// Minimum sum-rank distance over all pairs of distinct codewords.
pub fn min_distance_bruteforce(t: &FieldTower, codewords: &[BlockVector], cap: u64) -> Result<usize> {
    check_cap(codewords.len() as u128, cap)?;
    let mut best = None;
    for (i, a) in codewords.iter().enumerate() {
        for b in &codewords[i + 1..] {
            let d = sum_rank_distance(t, a, b)?;
            if d > 0 {
                best = Some(best.map_or(d, |x: usize| x.min(d)));
            }
        }
    }
    best.ok_or_else(|| usage("need at least two distinct codewords"))
}

/// For linear codes: minimum weight of a nonzero codeword.
pub fn min_weight_bruteforce(t: &FieldTower, codewords: &[BlockVector], cap: u64) -> Result<usize> {
    check_cap(codewords.len() as u128, cap)?;
    codewords
        .iter()
        .map(|c| sum_rank_weight(t, c))
        .filter(|&w| w > 0)
        .min()
        .ok_or_else(|| usage("the code has no nonzero codeword"))
}

pub(crate) fn check_cap(size: u128, cap: u64) -> Result<()> {
    match size <= cap as u128 {
        true => Ok(()),
        false => Err(Error::EnumerationCap { size, cap }),
    }
}

/// A list of subspaces U_i ⊆ GF(q)^{M_i}, each stored as an RREF basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SubspaceList {
    spaces: Vec<FqMatrix>,
}

impl SubspaceList {
    /// Row spaces of the given generator matrices (columns = M_i).
    pub fn from_rows(f: &Subfield, generators: &[FqMatrix]) -> Self {
        Self { spaces: generators.iter().map(|g| linalg::row_basis(f, g)).collect() }
    }

    /// Column spaces of the given matrices (rows = M_i).
    pub fn from_columns(f: &Subfield, generators: &[FqMatrix]) -> Self {
        Self { spaces: generators.iter().map(|g| linalg::row_basis(f, &g.transpose())).collect() }
    }

    pub fn len(&self) -> usize {
        self.spaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spaces.is_empty()
    }

    pub fn bases(&self) -> &[FqMatrix] {
        &self.spaces
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Matrix::rows).collect()
    }

    pub fn ambient(&self) -> Vec<usize> {
        self.spaces.iter().map(Matrix::cols).collect()
    }

    /// Per block (dim U_i, dim V_i, dim(U_i + V_i)).
    fn dims_with(&self, f: &Subfield, other: &Self) -> Result<Vec<(usize, usize, usize)>> {
        if self.ambient() != other.ambient() {
            return Err(usage("subspace lists differ in length or ambient dimensions"));
        }
        Ok(self
            .spaces
            .iter()
            .zip(&other.spaces)
            .map(|(u, v)| (u.rows(), v.rows(), linalg::rank(f, &u.vstack(v))))
            .collect())
    }
}

/// Per shot the (m + n_i) × n_i matrix [M(c^{(i)}); I_{n_i}].
pub fn lift_matrices(t: &FieldTower, c: &BlockVector) -> Vec<FqMatrix> {
    c.blocks()
        .map(|b| {
            let ni = b.len();
            let id = linalg::identity(t.subfield(), ni);
            matrix_rep(t, b).vstack(&id)
        })
        .collect()
}

/// Column spaces of the lifted blocks.
pub fn lift(t: &FieldTower, c: &BlockVector) -> SubspaceList {
    SubspaceList::from_columns(t.subfield(), &lift_matrices(t, c))
}

/// Σ dim(U_i + V_i) − dim(U_i ∩ V_i)
pub fn sum_subspace_distance(f: &Subfield, u: &SubspaceList, v: &SubspaceList) -> Result<usize> {
    Ok(u.dims_with(f, v)?.into_iter().map(|(du, dv, ds)| 2 * ds - du - dv).sum())
}

/// Σ max(dim U_i, dim V_i) − dim(U_i ∩ V_i)
pub fn sum_injection_distance(f: &Subfield, u: &SubspaceList, v: &SubspaceList) -> Result<usize> {
    Ok(u.dims_with(f, v)?.into_iter().map(|(du, dv, ds)| du.max(dv) + ds - du - dv).sum())
}
