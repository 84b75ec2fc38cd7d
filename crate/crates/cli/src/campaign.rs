//! The four experiment campaigns. Trials run on a rayon pool; each trial
//! draws from `trial_rng(seed, index)` and results are collected in index
//! order, so reports do not depend on scheduling.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use msrd::bounds::{coherent_secret_capacity, gap_certificate, near_optimality_gap_bound, subspace_singleton_bound};
use msrd::channel::{
    coherent_transmit, empirical_mutual_information, enumerate_wiretaps, noncoherent_transmit, random_matrix, random_rank_vector,
    random_split, random_vec, trial_rng, ChannelParams, TrialRecord,
};
use msrd::gf::count::measure;
use msrd::lrs::{leakage_dims, CodeSpec, NestedPair};
use msrd::skewpoly::{newton_interpolate, PBasis};
use msrd::sumrank::{BlockShape, BlockVector, SubspaceList};
use msrd::wbdecoder::{decode, decode_with_erasures, noncoherent_decode, to_skew_problem};
use msrd::FieldTower;
use rayon::prelude::*;

use crate::config::{CampaignKind, ExperimentConfig, Mode};
use crate::report::{Cell, Report};

/// Accepted range of the fitted multiplication-count exponent.
pub const SLOPE_RANGE: (f64, f64) = (1.7, 2.3);
pub const DEFAULT_ENUM_CAP: u64 = 6561;

pub struct RunOptions<'a> {
    pub enum_cap: u64,
    pub transcript: Option<&'a Path>,
}

pub fn run(cfg: &ExperimentConfig, opts: &RunOptions) -> std::io::Result<Report> {
    Ok(match cfg.kind {
        CampaignKind::Reliability => run_reliability(cfg, opts.transcript)?,
        CampaignKind::Secrecy => run_secrecy(cfg, opts.enum_cap),
        CampaignKind::Complexity => run_complexity(&cfg.tower, cfg.code.shape().lengths()[0], rate(&cfg.code), cfg.max_n, cfg.trials, cfg.seed),
        CampaignKind::Bounds => run_bounds(cfg),
    })
}

fn rate(code: &CodeSpec) -> f64 {
    code.k() as f64 / code.n() as f64
}

struct TrialResult {
    ok: bool,
    muls: u64,
    record: TrialRecord,
}

fn reliability_trial(cfg: &ExperimentConfig, params: &ChannelParams, index: u64) -> TrialResult {
    let t = &cfg.tower;
    let spec = &cfg.code;
    let mut rng = trial_rng(params.seed, index);
    let msg = random_vec(t, &mut rng, spec.k());
    let x = spec.encode(&msg).expect("message length is k");
    match cfg.mode {
        Mode::Coherent => {
            let out = coherent_transmit(t, params, &x, &mut rng).expect("feasible budgets");
            let (got, ops) = measure(|| decode_with_erasures(spec, &out.y, &out.a));
            let ok = got.as_ref() == Ok(&msg);
            let outcome = match &got {
                Ok(_) if ok => "decoded".to_string(),
                Ok(_) => "miscorrected".to_string(),
                Err(e) => e.to_string(),
            };
            let mut record = TrialRecord::from_outcome(t, params, &out, outcome);
            record.seed = params.seed.wrapping_add(index);
            TrialResult { ok, muls: ops.muls, record }
        }
        Mode::Noncoherent => {
            let out = noncoherent_transmit(t, params, &x, &mut rng).expect("feasible budgets");
            let (got, ops) = measure(|| noncoherent_decode(spec, &out.y));
            let ok = got.as_ref() == Ok(&msg);
            let record = TrialRecord {
                seed: params.seed.wrapping_add(index),
                t: params.t,
                rho: params.rho,
                mu: 0,
                t_split: out.t_split.clone(),
                rho_split: out.rho_split.clone(),
                transfer_ranks: out.a.iter().map(|a| msrd::linalg::rank(t.subfield(), a)).collect(),
                error_ranks: out.e.iter().map(|e| msrd::linalg::rank(t.subfield(), e)).collect(),
                outcome: match &got {
                    Ok(_) if ok => "decoded".into(),
                    Ok(_) => "miscorrected".into(),
                    Err(e) => e.to_string(),
                },
            };
            TrialResult { ok, muls: ops.muls, record }
        }
    }
}

/// Success rates over the (t, ρ) grid. Cells with 2t + ρ ≤ n − k must
/// decode every trial.
pub fn run_reliability(cfg: &ExperimentConfig, transcript: Option<&Path>) -> std::io::Result<Report> {
    let spec = &cfg.code;
    let (n, k, m) = (spec.n(), spec.k(), cfg.tower.m());
    let lengths = spec.shape().lengths().to_vec();
    let out_shape = cfg.out_shape.clone().unwrap_or_else(|| lengths.clone());
    let error_caps: Vec<usize> = match cfg.mode {
        Mode::Coherent => out_shape.iter().map(|&o| o.min(m)).collect(),
        Mode::Noncoherent => out_shape.iter().zip(&lengths).map(|(&o, &ni)| o.min(m + ni)).collect(),
    };
    let (t_max, rho_max) = if cfg.t == 0 && cfg.rho == 0 { ((n - k) / 2 + 1, (n - k + 1).min(n)) } else { (cfg.t, cfg.rho) };
    let mut report = Report::new(vec!["t", "rho", "inside_radius", "trials", "successes", "success_rate", "mean_muls", "min_muls"]);
    let mut sink = match transcript {
        Some(p) => Some(BufWriter::new(File::create(p)?)),
        None => None,
    };
    let mut cell = 0u64;
    for tt in 0..=t_max {
        for rho in 0..=rho_max {
            if tt > error_caps.iter().sum() {
                continue;
            }
            // A split must leave n_i − ρ_i ≤ N_i on every shot.
            let min_rho: usize = lengths.iter().zip(&out_shape).map(|(&ni, &o)| ni.saturating_sub(o)).sum();
            if rho < min_rho {
                continue;
            }
            let params = ChannelParams::new(spec.shape().clone(), tt, rho, 0, cfg.seed)
                .with_out_shape(out_shape.clone())
                .expect("validated widths");
            let base = cell * cfg.trials;
            let results: Vec<TrialResult> = (0..cfg.trials).into_par_iter().map(|i| reliability_trial(cfg, &params, base + i)).collect();
            cell += 1;
            let successes = results.iter().filter(|r| r.ok).count() as u64;
            let inside = 2 * tt + rho <= n - k;
            let mean = results.iter().map(|r| r.muls as f64).sum::<f64>() / results.len().max(1) as f64;
            let min = results.iter().map(|r| r.muls).min();
            if inside && successes < cfg.trials {
                report.breaches.push(format!("t = {tt}, ρ = {rho}: {} of {} trials failed inside the decoding region", cfg.trials - successes, cfg.trials));
            }
            report.push(vec![
                tt.into(),
                rho.into(),
                inside.into(),
                cfg.trials.into(),
                successes.into(),
                Cell::Float(successes as f64 / cfg.trials.max(1) as f64),
                mean.into(),
                min.into(),
            ]);
            if let Some(w) = sink.as_mut() {
                for r in &results {
                    writeln!(w, "{}", r.record.to_line())?;
                }
            }
        }
    }
    if let Some(mut w) = sink {
        w.flush()?;
    }
    Ok(report)
}

/// Number of wiretaps with Σ μ_i = μ, μ_i ≤ n_i.
fn wiretap_count(q: u64, lengths: &[usize], mu: usize) -> u128 {
    fn go(q: u128, lengths: &[usize], mu: usize) -> u128 {
        match lengths.split_first() {
            None => u128::from(mu == 0),
            Some((&ni, rest)) => (0..=ni.min(mu))
                .map(|mi| q.saturating_pow((mi * ni) as u32).saturating_mul(go(q, rest, mu - mi)))
                .fold(0u128, u128::saturating_add),
        }
    }
    go(q as u128, lengths, mu)
}

/// Leakage per wiretap budget μ: the dimension formula for every wiretap
/// (or a sample when there are more than the cap), and the enumerated
/// mutual information when q^{m k1} is within the cap.
pub fn run_secrecy(cfg: &ExperimentConfig, cap: u64) -> Report {
    let mut report = Report::new(vec!["mu", "wiretaps", "sampled", "max_leakage_formula", "max_leakage_empirical", "leaking_wiretaps", "secure"]);
    let pair = match cfg.pair() {
        Ok(p) => p,
        Err(e) => {
            report.breaches.push(e.to_string());
            return report;
        }
    };
    let t = &cfg.tower;
    let f = t.subfield();
    let shape = cfg.code.shape().clone();
    let n = shape.n();
    let mu_max = cfg.mu.max(pair.k2() + 1).min(n);
    let inputs = (t.size() as u128).saturating_pow(pair.k1() as u32);
    let empirical_ok = inputs <= cap as u128;
    for mu in 0..=mu_max {
        let count = wiretap_count(t.q(), shape.lengths(), mu);
        let (taps, sampled) = if count <= cap as u128 {
            (enumerate_wiretaps(f, &shape, mu, cap).expect("count within cap"), false)
        } else {
            let taps = (0..cfg.trials)
                .map(|i| {
                    let mut rng = trial_rng(cfg.seed, (mu as u64) << 40 | i);
                    let split = random_split(&mut rng, mu, shape.lengths()).expect("μ ≤ n");
                    split.iter().zip(shape.lengths()).map(|(&mi, &ni)| random_matrix(f, &mut rng, mi, ni)).collect()
                })
                .collect();
            (taps, true)
        };
        let per_tap: Vec<(usize, Option<u64>)> = taps
            .par_iter()
            .map(|b| {
                let l = leakage_dims(&pair, &SubspaceList::from_rows(f, b)).expect("shapes match");
                let mi = empirical_ok.then(|| *empirical_mutual_information(&pair, b, cap).expect("within cap").numer());
                (l, mi)
            })
            .collect();
        let max_formula = per_tap.iter().map(|p| p.0).max().unwrap_or(0);
        let max_emp = empirical_ok.then(|| per_tap.iter().filter_map(|p| p.1).max().unwrap_or(0));
        let leaking = per_tap.iter().filter(|p| p.0 > 0).count();
        let mismatches = per_tap.iter().filter(|p| p.1.is_some_and(|e| e != p.0 as u64)).count();
        if mu <= pair.k2() && max_formula > 0 {
            report.breaches.push(format!("μ = {mu} ≤ k2 = {} observations leak {max_formula} symbols", pair.k2()));
        }
        if mismatches > 0 {
            report.breaches.push(format!("μ = {mu}: {mismatches} wiretaps where mutual information differs from the leakage formula"));
        }
        report.push(vec![
            mu.into(),
            (taps.len() as u64).into(),
            sampled.into(),
            max_formula.into(),
            max_emp.into(),
            leaking.into(),
            (max_formula == 0).into(),
        ]);
    }
    report
}

fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let len = points.len() as f64;
    let (mx, my) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x.ln() / len, b + y.ln() / len));
    let (num, den) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + (x.ln() - mx) * (y.ln() - my), b + (x.ln() - mx).powi(2)));
    num / den
}

/// Multiplication counts of decoding (at the full error radius) and of
/// Newton interpolation for ℓ = 1, 2, 4, … shots of a fixed width.
pub fn run_complexity(t: &FieldTower, width: usize, rate: f64, max_n: usize, trials: u64, seed: u64) -> Report {
    let mut report = Report::new(vec!["n", "k", "decode_muls", "newton_muls", "wall_time_s"]);
    let reps = trials.clamp(1, 16);
    let mut dec = Vec::new();
    let mut newton = Vec::new();
    let mut ell = 1;
    while ell < t.q() as usize && ell * width <= max_n {
        let shape = BlockShape::uniform(ell, width).expect("positive width");
        let n = shape.n();
        let k = ((n as f64 * rate).round() as usize).clamp(1, n);
        let spec = CodeSpec::new(t, shape.clone(), k).expect("validated parameters");
        let (mut dm, mut nm, mut secs) = (0u64, 0u64, 0.0);
        for rep in 0..reps {
            let mut rng = trial_rng(seed, (n as u64) << 32 | rep);
            let msg = random_vec(t, &mut rng, k);
            let caps: Vec<usize> = shape.lengths().iter().map(|&ni| ni.min(t.m())).collect();
            let split = random_split(&mut rng, spec.radius(), &caps).expect("radius fits");
            let err = BlockVector::from_blocks(split.iter().zip(shape.lengths()).map(|(&w, &ni)| random_rank_vector(t, &mut rng, ni, w)).collect())
                .expect("blocks");
            let y = spec.encode(&msg).expect("length k").add(t, &err).expect("same shape");
            let start = Instant::now();
            let (got, ops) = measure(|| decode(&spec, &y));
            secs += start.elapsed().as_secs_f64();
            if got.as_ref() != Ok(&msg) {
                report.breaches.push(format!("decoding failed inside the radius at n = {n}"));
            }
            dm += ops.muls;
            let p = to_skew_problem(&spec, &y).expect("shape matches");
            let basis = PBasis::new(t, p.basis.points().to_vec()).expect("code points form a P-basis");
            let (_, ops) = measure(|| newton_interpolate(t, &basis, &p.received).expect("lengths match"));
            nm += ops.muls;
        }
        let (dm, nm) = (dm as f64 / reps as f64, nm as f64 / reps as f64);
        dec.push((n as f64, dm));
        newton.push((n as f64, nm));
        report.push(vec![n.into(), k.into(), dm.into(), nm.into(), (secs / reps as f64).into()]);
        ell *= 2;
    }
    if dec.len() >= 3 && dec.iter().all(|p| p.1 > 0.0) {
        let (sd, sn) = (log_log_slope(&dec), log_log_slope(&newton));
        for (what, s) in [("decode", sd), ("Newton interpolation", sn)] {
            if !(SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(&s) {
                report.breaches.push(format!("{what} multiplication slope {s:.3} outside {SLOPE_RANGE:?}"));
            }
        }
        report.push(vec!["slope".into(), Cell::Missing, sd.into(), sn.into(), Cell::Missing]);
    }
    report
}

/// Capacity against the optimal nested pair for every budget triple, with
/// the subspace Singleton bound and the lifted-code rate gap.
pub fn run_bounds(cfg: &ExperimentConfig) -> Report {
    let mut report = Report::new(vec![
        "t",
        "rho",
        "mu",
        "capacity",
        "achieved",
        "k1",
        "singleton_log_q",
        "lifted_log_q",
        "lifted_rate",
        "gap",
        "gap_bound",
        "gap_certified",
    ]);
    let t = &cfg.tower;
    let (q, m) = (t.q(), t.m());
    let shape = cfg.code.shape();
    let lengths = shape.lengths();
    let n = shape.n();
    let ell = shape.ell();
    let ambient: Vec<usize> = lengths.iter().map(|&ni| ni + m).collect();
    let uniform = lengths.iter().all(|&ni| ni == lengths[0]);
    let packets: usize = lengths.iter().map(|&ni| ni * (ni + m)).sum();
    for tt in 0..n {
        for rho in 0..n {
            for mu in 0..n {
                let Ok(cap) = coherent_secret_capacity(n, tt, rho, mu) else { continue };
                let pair = NestedPair::optimal(t, shape.clone(), tt, rho, mu);
                let achieved = pair.as_ref().map(NestedPair::secret_len).ok();
                if achieved != Some(cap) {
                    report.breaches.push(format!("t = {tt}, ρ = {rho}, μ = {mu}: secret of {achieved:?} symbols, capacity {cap}"));
                }
                let k1 = n - 2 * tt - rho;
                let sb = subspace_singleton_bound(q, &ambient, lengths, n - k1 + 1).ok();
                let cert = uniform.then(|| gap_certificate(ell, lengths[0], k1, m, q).ok()).flatten();
                if uniform && !cert.as_ref().is_some_and(|c| c.holds) {
                    report.breaches.push(format!("k1 = {k1}: lifted code not within the gap bound"));
                }
                report.push(vec![
                    tt.into(),
                    rho.into(),
                    mu.into(),
                    cap.into(),
                    achieved.into(),
                    k1.into(),
                    sb.map(|b| b.log_q(q)).into(),
                    (m * k1).into(),
                    Cell::Float((m * k1) as f64 / packets as f64),
                    cert.as_ref().map(|c| c.gap).into(),
                    near_optimality_gap_bound(ell, k1, m, q).ok().map(|g| g.value()).into(),
                    cert.map(|c| c.holds).into(),
                ]);
            }
        }
    }
    report
}
