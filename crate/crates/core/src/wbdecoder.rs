//! Welch-Berlekamp decoding of linearized Reed-Solomon codes in O(n²)
//! GF(q^m) products.
//!
//! A received word is translated into a skew interpolation problem on the
//! P-basis b_j^{(i)} = σ(β_j^{(i)}) (β_j^{(i)})^{−1} γ^{i−1} with values
//! r_j^{(i)} = y_j^{(i)} (β_j^{(i)})^{−1}. The key equations
//! L(b_j^{r_j}) r_j = Q(b_j) are solved point by point with two sequences of
//! solution pairs, and the message polynomial is the exact left quotient of
//! Q by L.

use thiserror::Error;

use crate::error::{usage, Result};
use crate::field::Field;
use crate::gf::{FieldTower, Fq, Fqm};
use crate::lrs::{CodeSpec, NestedPair};
use crate::skewpoly::{conjugate, evaluate, left_divide, newton_with_annihilator, operator_eval, PBasis, SkewPoly};
use crate::sumrank::{lift, sum_injection_distance, sum_rank_distance, BlockVector, FqMatrix, SubspaceList};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewProblem {
    pub basis: PBasis,
    pub received: Vec<Fqm>,
    pub k: usize,
}

impl SkewProblem {
    pub fn new(basis: PBasis, received: Vec<Fqm>, k: usize) -> Result<Self> {
        if received.len() != basis.len() {
            return Err(usage(format!("{} received values for {} points", received.len(), basis.len())));
        }
        if k == 0 || k > basis.len() {
            return Err(usage(format!("need 1 ≤ k ≤ n = {}, got {k}", basis.len())));
        }
        Ok(Self { basis, received, k })
    }

    pub fn n(&self) -> usize {
        self.basis.len()
    }

    /// ⌊(n − k)/2⌋
    pub fn radius(&self) -> usize {
        (self.n() - self.k) / 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyPair {
    pub l: SkewPoly,
    pub q: SkewPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DecodeFailure {
    #[error("too many errors")]
    TooManyErrors,
    #[error("degenerate solver state")]
    Degenerate,
    #[error("insufficient observations")]
    InsufficientObservations,
    #[error("decoded codeword lies outside the decoding radius")]
    Miscorrection,
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// The message on success.
pub type DecodeResult = std::result::Result<Vec<Fqm>, DecodeFailure>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecoderOptions {
    /// Re-check both key-equation sequences after every step (O(n³)).
    pub check_invariants: bool,
    /// Re-encode and reject results farther than ⌊(n−k)/2⌋ from the input.
    pub verify: bool,
    /// Largest number of candidate corrections tried by the non-coherent
    /// decoder.
    pub max_candidates: u64,
}

impl Default for DecoderOptions {
    fn default() -> Self {
        Self { check_invariants: false, verify: false, max_candidates: 1 << 12 }
    }
}

/// b_j^{(i)} = σ(β_j)β_j^{−1}γ^{i−1}, in block order.
pub fn skew_points(spec: &CodeSpec) -> Vec<Fqm> {
    let t = spec.tower();
    let mut out = Vec::with_capacity(spec.n());
    for (i, basis) in spec.bases().iter().enumerate() {
        let a = spec.block_point(i);
        for &beta in basis {
            let bi = t.inv(beta).expect("basis elements are nonzero");
            out.push(t.mul(t.mul(t.frobenius(beta, 1), bi), a));
        }
    }
    out
}

pub fn to_skew_problem(spec: &CodeSpec, y: &BlockVector) -> Result<SkewProblem> {
    if y.shape() != spec.shape() {
        return Err(usage("received word does not match the code shape"));
    }
    let t = spec.tower();
    let mut points = Vec::with_capacity(spec.n());
    let mut received = Vec::with_capacity(spec.n());
    let mut pos = 0;
    for (i, basis) in spec.bases().iter().enumerate() {
        let a = spec.block_point(i);
        for &beta in basis {
            let bi = t.inv(beta)?;
            points.push(t.mul(t.mul(t.frobenius(beta, 1), bi), a));
            received.push(t.mul(y.data()[pos], bi));
            pos += 1;
        }
    }
    // The points form a P-basis whenever the code parameters are valid.
    SkewProblem::new(PBasis::trusted(points), received, spec.k())
}

/// One solution pair and its discrepancy bookkeeping.
#[derive(Clone, Debug)]
struct Pair {
    l: SkewPoly,
    q: SkewPoly,
}

impl Pair {
    /// max(deg L, deg Q − (k − 1)), with −∞ for zero polynomials.
    fn wdeg(&self, k: usize) -> Option<isize> {
        let dl = self.l.deg().map(|d| d as isize);
        let dq = self.q.deg().map(|d| d as isize - (k as isize - 1));
        dl.max(dq)
    }

    /// L(b^r) r − Q(b), with the first term read as 0 when r = 0.
    fn discrepancy(&self, t: &FieldTower, b: Fqm, r: Fqm) -> Fqm {
        t.sub(operator_eval(t, &self.l, b, r), evaluate(t, &self.q, b))
    }

    /// (x − c)·P
    fn mul_linear(&self, t: &FieldTower, c: Fqm) -> Self {
        let f = |p: &SkewPoly| p.mul_x(t).sub(t, &p.scale(t, c));
        Self { l: f(&self.l), q: f(&self.q) }
    }

    /// a·P − b·Q
    fn combine(t: &FieldTower, a: Fqm, p: &Self, b: Fqm, other: &Self) -> Self {
        Self {
            l: p.l.scale(t, a).sub(t, &other.l.scale(t, b)),
            q: p.q.scale(t, a).sub(t, &other.q.scale(t, b)),
        }
    }
}

/// Index of the first point where a pair violates its key equation.
fn first_violation(t: &FieldTower, p: &SkewProblem, pair: &Pair, upto: usize) -> Option<usize> {
    let pts = p.basis.points();
    (0..upto).find(|&i| !pair.discrepancy(t, pts[i], p.received[i]).is_zero())
}

/// The quadratic key-equation solver.
pub fn solve_key_equations(t: &FieldTower, p: &SkewProblem) -> KeyPair {
    solve_key_equations_with(t, p, false).expect("invariant checks are disabled")
}

/// As [`solve_key_equations`]; with `check` set, both sequences are
/// verified against every point seen so far after each step, and the first
/// violation is reported as an error.
///
/// Start: the first sequence is (0, F_k) with F_k the minimal polynomial of
/// b_1..b_k, the second is (1, G) with G the interpolant of r_1..r_k; both
/// satisfy the key equations at the first k points. Each further point is
/// absorbed by multiplying one pair by (x − b^{s}) and eliminating the other
/// pair's discrepancy with it. The multiplied pair is the one of lowest
/// weighted degree among those with a nonzero discrepancy (ties favour the
/// second sequence), which keeps both weighted degrees within one of each
/// other; with all discrepancies nonzero this is the plain alternating swap.
pub fn solve_key_equations_with(t: &FieldTower, p: &SkewProblem, check: bool) -> std::result::Result<KeyPair, String> {
    let (k, n) = (p.k, p.n());
    let pts = p.basis.points();
    let (g, fk) = newton_with_annihilator(t, &pts[..k], &p.received[..k]).map_err(|e| e.to_string())?;
    let mut first = Pair { l: SkewPoly::zero(), q: fk };
    let mut second = Pair { l: SkewPoly::one(t), q: g };
    let verify = |a: &Pair, b: &Pair, upto: usize| -> std::result::Result<(), String> {
        for (name, pair) in [("first", a), ("second", b)] {
            if let Some(i) = first_violation(t, p, pair, upto) {
                return Err(format!("{name} sequence violates the key equation at point {i} after {upto} points"));
            }
        }
        Ok(())
    };
    if check {
        verify(&first, &second, k)?;
    }
    for j in k..n {
        let (b, r) = (pts[j], p.received[j]);
        let s1 = first.discrepancy(t, b, r);
        let s2 = second.discrepancy(t, b, r);
        if !(s1.is_zero() && s2.is_zero()) {
            let use_second = !s2.is_zero() && (s1.is_zero() || second.wdeg(k) <= first.wdeg(k));
            let (pivot, sp, other, so) = match use_second {
                true => (second, s2, first, s1),
                false => (first, s1, second, s2),
            };
            let c = conjugate(t, b, sp).expect("pivot discrepancy is nonzero");
            let combined = match so.is_zero() {
                true => other,
                false => Pair::combine(t, sp, &other, so, &pivot),
            };
            first = pivot.mul_linear(t, c);
            second = combined;
        }
        if check {
            verify(&first, &second, j + 1)?;
        }
    }
    let take_first = !first.l.is_zero() && first.wdeg(k) < second.wdeg(k);
    let chosen = if take_first { first } else { second };
    Ok(KeyPair { l: chosen.l, q: chosen.q })
}

/// F with Q = L·F, deg F < k, or a failure.
pub fn recover_message(t: &FieldTower, p: &SkewProblem, kp: &KeyPair) -> DecodeResult {
    let Some(dl) = kp.l.deg() else {
        return Err(DecodeFailure::Degenerate);
    };
    let radius = p.radius();
    if dl > radius || kp.q.deg().is_some_and(|d| d > radius + p.k - 1) {
        return Err(DecodeFailure::TooManyErrors);
    }
    let (f, rem) = left_divide(t, &kp.q, &kp.l).map_err(|_| DecodeFailure::Degenerate)?;
    if !rem.is_zero() || f.deg().is_some_and(|d| d >= p.k) {
        return Err(DecodeFailure::TooManyErrors);
    }
    Ok((0..p.k).map(|i| f.coeff(t, i)).collect())
}

pub fn decode(spec: &CodeSpec, y: &BlockVector) -> DecodeResult {
    decode_with(spec, y, &DecoderOptions::default())
}

pub fn decode_with(spec: &CodeSpec, y: &BlockVector, opts: &DecoderOptions) -> DecodeResult {
    if y.shape() != spec.shape() {
        return Err(DecodeFailure::Invalid("received word does not match the code shape".into()));
    }
    if spec.k() == 0 {
        return Ok(Vec::new());
    }
    let t = spec.tower();
    let p = to_skew_problem(spec, y).map_err(|e| DecodeFailure::Invalid(e.to_string()))?;
    let kp = solve_key_equations_with(t, &p, opts.check_invariants).map_err(DecodeFailure::Invalid)?;
    let msg = recover_message(t, &p, &kp)?;
    if opts.verify {
        let c = spec.encode(&msg).expect("message length is k");
        if sum_rank_distance(t, &c, y).expect("same shape") > spec.radius() {
            return Err(DecodeFailure::Miscorrection);
        }
    }
    Ok(msg)
}

/// Row-reduces A_i and applies the same row operations to y^{(i)}; rows of
/// A_i that vanish carry no codeword information and are dropped.
fn reduce_block(t: &FieldTower, a: &FqMatrix, y: &[Fqm]) -> (FqMatrix, Vec<Fqm>) {
    let f = t.subfield();
    let mut a = a.clone();
    let mut y = y.to_vec();
    let mut row = 0;
    for col in 0..a.cols() {
        let Some(p) = (row..a.rows()).find(|&i| a[(i, col)] != 0) else {
            continue;
        };
        a.swap_rows(row, p);
        y.swap(row, p);
        let inv = f.inv(a[(row, col)]);
        for c in 0..a.cols() {
            a[(row, c)] = f.mul(inv, a[(row, c)]);
        }
        y[row] = t.scale(inv, y[row]);
        for i in 0..a.rows() {
            let factor = a[(i, col)];
            if i == row || factor == 0 {
                continue;
            }
            let neg = f.neg(factor);
            for c in 0..a.cols() {
                a[(i, c)] = f.add(a[(i, c)], f.mul(neg, a[(row, c)]));
            }
            y[i] = t.add(y[i], t.scale(neg, y[row]));
        }
        row += 1;
        if row == a.rows() {
            break;
        }
    }
    let keep: Vec<usize> = (0..row).collect();
    (a.select_rows(&keep), y[..row].to_vec())
}

/// Coherent decoding with known transfer matrices: y^{(i)} = c^{(i)} A_iᵀ + e^{(i)}
/// with A_i of size N_i × n_i. The code is punctured to the bases
/// 𝓑^{(i)} A_iᵀ, on which c Aᵀ is a codeword carrying the same message.
pub fn decode_with_erasures(spec: &CodeSpec, y: &BlockVector, a: &[FqMatrix]) -> DecodeResult {
    decode_with_erasures_opts(spec, y, a, &DecoderOptions::default())
}

pub fn decode_with_erasures_opts(spec: &CodeSpec, y: &BlockVector, a: &[FqMatrix], opts: &DecoderOptions) -> DecodeResult {
    let t = spec.tower();
    let ell = spec.shape().ell();
    if a.len() != ell || y.shape().ell() != ell {
        return Err(DecodeFailure::Invalid("one transfer matrix and one received block per shot".into()));
    }
    let mut bases = Vec::with_capacity(ell);
    let mut received = Vec::with_capacity(ell);
    for (i, ai) in a.iter().enumerate() {
        let ni = spec.shape().lengths()[i];
        if ai.cols() != ni || ai.rows() != y.block(i).len() {
            return Err(DecodeFailure::Invalid(format!("transfer matrix {} must be {} × {ni}", i + 1, y.block(i).len())));
        }
        let (ared, yred) = reduce_block(t, ai, y.block(i));
        let beta = &spec.bases()[i];
        let alpha: Vec<Fqm> = (0..ared.rows())
            .map(|r| (0..ni).fold(t.zero(), |acc, c| t.add(acc, t.scale(ared[(r, c)], beta[c]))))
            .collect();
        bases.push(alpha);
        received.push(yred);
    }
    let kept: usize = bases.iter().map(Vec::len).sum();
    if spec.k() > kept {
        return Err(DecodeFailure::InsufficientObservations);
    }
    let punctured = spec.punctured(bases).map_err(|e| DecodeFailure::Invalid(e.to_string()))?;
    let y = BlockVector::from_blocks(received).map_err(|e| DecodeFailure::Invalid(e.to_string()))?;
    decode_with(&punctured, &y, opts)
}

/// Recovers the secret, discarding the random keys.
pub fn coset_decode(pair: &NestedPair, y: &BlockVector, a: Option<&[FqMatrix]>) -> DecodeResult {
    let x = match a {
        Some(a) => decode_with_erasures(pair.outer(), y, a)?,
        None => decode(pair.outer(), y)?,
    };
    Ok(x[pair.k2()..].to_vec())
}

/// Received shot after column reduction: transfer rows with their payloads,
/// and payload directions that arrived with no transfer component.
struct ReducedShot {
    transfer: FqMatrix,
    payload: Vec<Fqm>,
    deviations: Vec<Fqm>,
}

fn reduce_lifted(t: &FieldTower, ni: usize, y: &FqMatrix) -> ReducedShot {
    let f = t.subfield();
    let m = t.m();
    // Columns of Y become rows, with the transfer coordinates first so that
    // the echelon form separates columns with and without them.
    let mut rows = crate::linalg::zeros(f, y.cols(), ni + m);
    for c in 0..y.cols() {
        for r in 0..ni {
            rows[(c, r)] = y[(m + r, c)];
        }
        for r in 0..m {
            rows[(c, ni + r)] = y[(r, c)];
        }
    }
    let basis = crate::linalg::row_basis(f, &rows);
    let mut transfer = Vec::new();
    let mut payload = Vec::new();
    let mut deviations = Vec::new();
    for r in 0..basis.rows() {
        let row = basis.row(r);
        let top = t.from_coords(&row[ni..]).expect("m coordinates");
        if row[..ni].iter().any(|&x| x != 0) {
            transfer.push(row[..ni].to_vec());
            payload.push(top);
        } else {
            deviations.push(top);
        }
    }
    let transfer = FqMatrix::from_rows(transfer, ni);
    ReducedShot { transfer, payload, deviations }
}

/// Decoding of lifted transmissions without knowledge of the transfer
/// matrices. Each Y_i has m + n_i rows: the payload on top and the
/// transfer Âᵢᵀ below.
///
/// After column reduction each shot yields a transfer part Â′_i, the matching
/// payload y′_i, and possibly columns with zero transfer part. Such columns
/// are pure error and give known directions d_l. The true payload error
/// inside y′_i is then partly a GF(q)-combination of the d_l. Every
/// combination λ (up to `max_candidates` of them) is tried with coherent
/// decoding on Â′. The result whose lifting is closest to the received
/// spaces in sum-injection distance is kept.
pub fn noncoherent_decode(spec: &CodeSpec, ys: &[FqMatrix]) -> DecodeResult {
    noncoherent_decode_with(spec, ys, &DecoderOptions::default())
}

pub fn noncoherent_decode_with(spec: &CodeSpec, ys: &[FqMatrix], opts: &DecoderOptions) -> DecodeResult {
    let t = spec.tower();
    let f = t.subfield();
    let (m, q) = (t.m(), t.q());
    let lengths = spec.shape().lengths();
    if ys.len() != lengths.len() {
        return Err(DecodeFailure::Invalid("one received matrix per shot".into()));
    }
    if let Some(i) = (0..ys.len()).find(|&i| ys[i].rows() != m + lengths[i]) {
        return Err(DecodeFailure::Invalid(format!("received matrix {} must have m + n_i = {} rows", i + 1, m + lengths[i])));
    }
    let shots: Vec<ReducedShot> = ys.iter().zip(lengths).map(|(y, &ni)| reduce_lifted(t, ni, y)).collect();
    let received = SubspaceList::from_columns(f, ys);

    // λ for shot i is a payload-count × deviation-count matrix over GF(q).
    let slots: Vec<(usize, usize, usize)> = shots
        .iter()
        .enumerate()
        .flat_map(|(i, s)| (0..s.payload.len()).flat_map(move |j| (0..s.deviations.len()).map(move |l| (i, j, l))))
        .collect();
    let total = (q as u128).checked_pow(slots.len() as u32).unwrap_or(u128::MAX);
    let candidates = if total <= opts.max_candidates as u128 { total as u64 } else { 1 };

    let transfers: Vec<FqMatrix> = shots.iter().map(|s| s.transfer.clone()).collect();
    let mut best: Option<(usize, Vec<Fqm>)> = None;
    let mut last_err = DecodeFailure::TooManyErrors;
    for idx in 0..candidates {
        let mut payloads: Vec<Vec<Fqm>> = shots.iter().map(|s| s.payload.clone()).collect();
        let mut rest = idx;
        for &(i, j, l) in &slots {
            let lam = (rest % q) as Fq;
            rest /= q;
            if lam != 0 {
                payloads[i][j] = t.add(payloads[i][j], t.scale(lam, shots[i].deviations[l]));
            }
        }
        let y = BlockVector::from_blocks(payloads).expect("at least one shot");
        match decode_with_erasures_opts(spec, &y, &transfers, &DecoderOptions { verify: false, ..*opts }) {
            Ok(msg) => {
                let c = spec.encode(&msg).expect("message length is k");
                let d = sum_injection_distance(f, &lift(t, &c), &received).expect("matching ambient spaces");
                if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                    best = Some((d, msg));
                }
            }
            Err(e) => last_err = e,
        }
    }
    best.map(|(_, msg)| msg).ok_or(last_err)
}
