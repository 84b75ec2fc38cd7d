//! Capacity and Singleton-type bounds, in exact arithmetic.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive};

use crate::error::{domain, Result};

/// n − 2t − ρ − μ, the largest secret (in GF(q^m) symbols) any scheme can
/// carry reliably and securely.
pub fn coherent_secret_capacity(n: usize, t: usize, rho: usize, mu: usize) -> Result<usize> {
    if 2 * t + rho + mu >= n {
        return Err(domain(format!("need 2t + ρ + μ < n, got {} ≥ {n}", 2 * t + rho + mu)));
    }
    Ok(n - 2 * t - rho - mu)
}

/// Gaussian binomial [a over b]_q = Π_{j<b} (q^a − q^j)/(q^b − q^j).
pub fn gaussian_binomial(q: u64, a: usize, b: usize) -> BigUint {
    if b > a {
        return BigUint::default();
    }
    let q = BigUint::from(q);
    let pow = |e: usize| q.pow(e as u32);
    let (mut num, mut den) = (BigUint::one(), BigUint::one());
    for j in 0..b {
        num *= pow(a) - pow(j);
        den *= pow(b) - pow(j);
    }
    num / den
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingletonBound {
    /// The bound on |C| itself.
    pub size: BigUint,
    /// A minimizing split δ_1 + … + δ_ℓ = d − 1.
    pub delta: Vec<usize>,
}

impl SingletonBound {
    pub fn log_q(&self, q: u64) -> f64 {
        log_big(&self.size) / (q as f64).ln()
    }
}

fn log_big(x: &BigUint) -> f64 {
    // ln x from the top 64 bits and the bit length.
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// min over δ of Π_i [M_i − δ_i over M_i − n_i]_q, for sum-constant-dimension
/// codes of type [M, n, ·, d].
pub fn subspace_singleton_bound(q: u64, ambient: &[usize], dims: &[usize], d: usize) -> Result<SingletonBound> {
    if ambient.len() != dims.len() || ambient.iter().zip(dims).any(|(&mi, &ni)| ni > mi) {
        return Err(domain("need one ambient dimension M_i ≥ n_i per shot"));
    }
    let total: usize = dims.iter().sum();
    if d == 0 || d - 1 > total {
        return Err(domain(format!("need 1 ≤ d ≤ Σ n_i + 1 = {}, got {d}", total + 1)));
    }
    let mut best: Option<SingletonBound> = None;
    let mut delta = vec![0; dims.len()];
    splits(dims, d - 1, 0, &mut delta, &mut |delta| {
        let size = ambient
            .iter()
            .zip(dims)
            .zip(delta)
            .map(|((&mi, &ni), &di)| gaussian_binomial(q, mi - di, mi - ni))
            .product::<BigUint>();
        if best.as_ref().is_none_or(|b| size < b.size) {
            best = Some(SingletonBound { size, delta: delta.to_vec() });
        }
    });
    Ok(best.expect("at least one split exists"))
}

fn splits(caps: &[usize], remaining: usize, i: usize, cur: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if i == caps.len() {
        if remaining == 0 {
            visit(cur);
        }
        return;
    }
    let rest: usize = caps[i + 1..].iter().sum();
    let lo = remaining.saturating_sub(rest);
    for di in lo..=caps[i].min(remaining) {
        cur[i] = di;
        splits(caps, remaining - di, i + 1, cur, visit);
    }
    cur[i] = 0;
}

/// R_1 = mk / (ℓ (m + n′) n′), the rate of a lifted code with ℓ shots of
/// width n′.
pub fn lifted_rate(ell: usize, nprime: usize, k: usize, m: usize) -> Ratio<u64> {
    Ratio::new((m * k) as u64, (ell * (m + nprime) * nprime) as u64)
}

/// The relative rate gap bound (ℓ/k)·2/(m log₂ q), kept as the exact
/// coefficient 2ℓ/(km) over log₂ q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapBound {
    pub coeff: Ratio<u64>,
    pub q: u64,
}

impl GapBound {
    pub fn value(&self) -> f64 {
        self.coeff.to_f64().unwrap() / (self.q as f64).log2()
    }

    /// Exact value when log₂ q is an integer.
    pub fn as_ratio(&self) -> Option<Ratio<u64>> {
        self.q.is_power_of_two().then(|| self.coeff / self.q.trailing_zeros() as u64)
    }
}

pub fn near_optimality_gap_bound(ell: usize, k: usize, m: usize, q: u64) -> Result<GapBound> {
    if k == 0 || m == 0 || q < 2 {
        return Err(domain("need k ≥ 1, m ≥ 1 and q ≥ 2"));
    }
    Ok(GapBound { coeff: Ratio::new(2 * ell as u64, (k * m) as u64), q })
}

/// Integer certificate that the lifted code is within the gap bound of the
/// best sum-constant-dimension code of the same distance.
#[derive(Debug, Clone, PartialEq)]
pub struct GapCertificate {
    /// Singleton bound G on the size of any code with M_i = n′ + m and
    /// d = n − k + 1.
    pub bound: BigUint,
    /// Size of the lifted code, q^{mk}.
    pub lifted_size: BigUint,
    /// q^{mk} ≤ G < 4^ℓ q^{mk}.
    pub holds: bool,
    /// 1 − log_q(q^{mk}) / log_q G, an upper estimate of (R_2 − R_1)/R_2.
    pub gap: f64,
    pub bound_value: f64,
}

/// With L = log_q G, the relative gap is at most (L − mk)/L; the integer
/// inequalities q^{mk} ≤ G < 4^ℓ q^{mk} give L − mk < ℓ log_q 4 and L ≥ mk,
/// hence (L − mk)/L < ℓ log_q 4 / (mk) = (ℓ/k)·2/(m log₂ q).
pub fn gap_certificate(ell: usize, nprime: usize, k: usize, m: usize, q: u64) -> Result<GapCertificate> {
    let n = ell * nprime;
    if k == 0 || k > n {
        return Err(domain(format!("need 1 ≤ k ≤ n = {n}")));
    }
    let sb = subspace_singleton_bound(q, &vec![nprime + m; ell], &vec![nprime; ell], n - k + 1)?;
    let lifted = BigUint::from(q).pow((m * k) as u32);
    let upper = BigUint::from(4u32).pow(ell as u32) * &lifted;
    let holds = lifted <= sb.size && sb.size < upper;
    let l = sb.log_q(q);
    let gap = 1.0 - (m * k) as f64 / l;
    let bound_value = near_optimality_gap_bound(ell, k, m, q)?.value();
    Ok(GapCertificate { bound: sb.size, lifted_size: lifted, holds, gap, bound_value })
}
