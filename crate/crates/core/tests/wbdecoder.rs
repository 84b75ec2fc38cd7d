mod common;

use common::*;
use msrd::channel::{random_full_rank, random_rank_matrix, random_rank_vector, random_split, trial_rng};
use msrd::lrs::{coset_encode, CodeSpec, NestedPair};
use msrd::sumrank::{sum_rank_weight, BlockShape, BlockVector};
use msrd::wbdecoder::*;
use msrd::{FieldTower, Fqm};
use proptest::prelude::*;
use rand::Rng;

fn gf4m2() -> FieldTower {
    FieldTower::new(2, 2, 2).unwrap()
}

/// Random error with sum-rank weight exactly `w`, split at random.
fn random_error<R: Rng>(t: &FieldTower, shape: &BlockShape, w: usize, rng: &mut R) -> BlockVector {
    let caps: Vec<usize> = shape.lengths().iter().map(|&n| n.min(t.m())).collect();
    let split = random_split(rng, w, &caps).unwrap();
    let blocks = shape.lengths().iter().zip(&split).map(|(&n, &wi)| random_rank_vector(t, rng, n, wi)).collect();
    BlockVector::from_blocks(blocks).unwrap()
}

fn configs() -> Vec<(FieldTower, Vec<usize>)> {
    vec![
        (gf4m2(), vec![2, 2]),
        (gf4m2(), vec![2, 1, 2]),
        (FieldTower::new(3, 1, 3).unwrap(), vec![3, 3]),
        (FieldTower::new(2, 1, 4).unwrap(), vec![4]),
        ("q0=5 m=3 r=2".parse().unwrap(), vec![3, 2, 3, 1]),
        (FieldTower::new(3, 2, 2).unwrap(), vec![2; 8]),
    ]
}

#[test]
fn roundtrip_without_errors() {
    let mut rng = trial_rng(1, 0);
    for (t, lengths) in configs() {
        let shape = BlockShape::new(lengths).unwrap();
        for k in 1..=shape.n() {
            let spec = CodeSpec::new(&t, shape.clone(), k).unwrap();
            let msg = random_message(&t, &mut rng, k);
            assert_eq!(decode(&spec, &spec.encode(&msg).unwrap()), Ok(msg));
        }
    }
}

/// Every error of sum-rank weight ≤ 1 on a [4, 2] code over GF(4^2), and
/// every weight for k = 1 against the enumerating decoder.
#[test]
fn exhaustive_small_code() {
    let t = gf4m2();
    let shape = BlockShape::new(vec![2, 2]).unwrap();
    for k in [1, 2] {
        let spec = CodeSpec::new(&t, shape.clone(), k).unwrap();
        let msg: Vec<Fqm> = (0..k).map(|i| t.decode(3 + 5 * i as u64).unwrap()).collect();
        let c = spec.encode(&msg).unwrap();
        for e in 0..t.size().pow(4) {
            let err: Vec<Fqm> = (0..4).map(|j| t.decode(e / t.size().pow(j) % t.size()).unwrap()).collect();
            let err = BlockVector::new(shape.clone(), err).unwrap();
            let y = c.add(&t, &err).unwrap();
            let got = decode(&spec, &y);
            if sum_rank_weight(&t, &err) <= spec.radius() {
                assert_eq!(got.as_ref(), Ok(&msg), "error {err:?}");
            } else if let Ok(found) = got {
                // Anything returned must be the unique codeword within the radius.
                assert_eq!(bruteforce_decode(&spec, &y), vec![found]);
            }
        }
    }
}

#[test]
fn agrees_with_dense_key_equation_solver() {
    let mut rng = trial_rng(2, 0);
    for (t, lengths) in configs() {
        let shape = BlockShape::new(lengths).unwrap();
        for k in 1..shape.n() {
            let spec = CodeSpec::new(&t, shape.clone(), k).unwrap();
            for w in 0..=spec.radius() + 1 {
                let msg = random_message(&t, &mut rng, k);
                let y = spec.encode(&msg).unwrap().add(&t, &random_error(&t, &shape, w, &mut rng)).unwrap();
                let p = to_skew_problem(&spec, &y).unwrap();
                let naive = naive_skew_wb(&t, p.basis.points(), &p.received, k);
                let fast = decode(&spec, &y).ok();
                if w <= spec.radius() {
                    assert_eq!(fast.as_ref(), Some(&msg));
                    assert_eq!(naive, Some(msg));
                } else if let Some(f) = &fast {
                    assert_eq!(naive.as_ref(), Some(f));
                }
            }
        }
    }
}

#[test]
fn single_shot_matches_gabidulin_decoder() {
    let mut rng = trial_rng(3, 0);
    for t in [FieldTower::new(2, 1, 5).unwrap(), FieldTower::new(3, 1, 4).unwrap(), FieldTower::new(2, 1, 6).unwrap().with_r(5).unwrap()] {
        let m = t.m();
        let shape = BlockShape::new(vec![m]).unwrap();
        for k in 1..m {
            let spec = CodeSpec::new(&t, shape.clone(), k).unwrap();
            let g = spec.bases()[0].clone();
            for w in 0..=spec.radius() {
                let msg = random_message(&t, &mut rng, k);
                // c_j = Σ f_i σ^i(g_j) is the code's own encoding for one shot.
                let c: Vec<Fqm> = g
                    .iter()
                    .map(|&gj| msg.iter().enumerate().fold(t.zero(), |a, (i, &f)| t.add(a, t.mul(f, t.frobenius(gj, i as i64)))))
                    .collect();
                assert_eq!(spec.encode(&msg).unwrap().data(), &c[..]);
                let y = BlockVector::new(shape.clone(), c).unwrap().add(&t, &random_error(&t, &shape, w, &mut rng)).unwrap();
                assert_eq!(naive_gabidulin_wb(&t, &g, y.data(), k), Some(msg.clone()));
                assert_eq!(decode(&spec, &y), Ok(msg));
            }
        }
    }
}

#[test]
fn width_one_shots_match_reed_solomon_decoder() {
    let mut rng = trial_rng(4, 0);
    for (q0, s) in [(7, 1), (2, 3), (3, 2), (13, 1)] {
        let t = FieldTower::new(q0, s, 1).unwrap();
        let f = t.subfield().clone();
        let ell = t.q() as usize - 1;
        let shape = BlockShape::uniform(ell, 1).unwrap();
        for k in 1..ell {
            let spec = CodeSpec::new(&t, shape.clone(), k).unwrap();
            let pts: Vec<u16> = (0..ell).map(|i| t.to_subfield(spec.block_point(i)).unwrap()).collect();
            for w in [0, spec.radius()] {
                let msg = random_message(&t, &mut rng, k);
                let y = spec.encode(&msg).unwrap().add(&t, &random_error(&t, &shape, w, &mut rng)).unwrap();
                let yq: Vec<u16> = y.data().iter().map(|&v| t.to_subfield(v).unwrap()).collect();
                let want: Vec<u16> = msg.iter().map(|&v| t.to_subfield(v).unwrap()).collect();
                assert_eq!(naive_rs_wb(&f, &pts, &yq, k), Some(want));
                assert_eq!(decode(&spec, &y), Ok(msg));
            }
        }
    }
}

#[test]
fn invariant_checking_mode_and_degree_bounds() {
    let mut rng = trial_rng(5, 0);
    let opts = DecoderOptions { check_invariants: true, ..Default::default() };
    for (t, lengths) in configs() {
        let shape = BlockShape::new(lengths).unwrap();
        for k in 1..=shape.n() {
            let spec = CodeSpec::new(&t, shape.clone(), k).unwrap();
            for w in 0..=(spec.n() - k).min(spec.radius() + 2) {
                let y = spec.encode(&random_message(&t, &mut rng, k)).unwrap().add(&t, &random_error(&t, &shape, w.min(spec.n()), &mut rng)).unwrap();
                let p = to_skew_problem(&spec, &y).unwrap();
                let kp = solve_key_equations_with(&t, &p, true).unwrap();
                assert!(!kp.l.is_zero());
                if w <= spec.radius() {
                    assert!(kp.l.deg().unwrap() <= p.radius());
                    assert!(kp.q.deg().is_none_or(|d| d < p.radius() + k));
                    assert!(kp.l.deg().unwrap() <= w);
                }
                let _ = decode_with(&spec, &y, &opts);
            }
        }
    }
}

#[test]
fn verify_flags_miscorrections_only() {
    let t = gf4m2();
    let shape = BlockShape::new(vec![2, 2]).unwrap();
    let spec = CodeSpec::new(&t, shape.clone(), 1).unwrap();
    let opts = DecoderOptions { verify: true, ..Default::default() };
    let mut rng = trial_rng(6, 0);
    for _ in 0..300 {
        let y = BlockVector::new(shape.clone(), random_message(&t, &mut rng, 4)).unwrap();
        match decode_with(&spec, &y, &opts) {
            Ok(msg) => assert_eq!(bruteforce_decode(&spec, &y), vec![msg]),
            Err(_) => assert!(bruteforce_decode(&spec, &y).is_empty()),
        }
    }
}

#[test]
fn shape_mismatch_is_invalid() {
    let t = gf4m2();
    let spec = CodeSpec::new(&t, BlockShape::new(vec![2, 2]).unwrap(), 2).unwrap();
    let y = BlockVector::zero(&t, &BlockShape::new(vec![1, 2]).unwrap());
    assert!(matches!(decode(&spec, &y), Err(DecodeFailure::Invalid(_))));
}

#[test]
fn erasures_exhaustive_transfer_matrices() {
    // q = 2, m = 3, one shot of width 3: every 2 × 3 and 3 × 3 transfer
    // matrix of the required rank, with and without a rank-one error.
    let t = FieldTower::new(2, 1, 3).unwrap();
    let f = t.subfield().clone();
    let shape = BlockShape::new(vec![3]).unwrap();
    let spec = CodeSpec::new(&t, shape, 1).unwrap();
    let msg = vec![t.decode(5).unwrap()];
    let c = spec.encode(&msg).unwrap();
    let mut rng = trial_rng(7, 0);
    for rows in [1usize, 2, 3] {
        for idx in 0..(1u32 << (3 * rows)) {
            let data: Vec<Vec<u16>> = (0..rows).map(|r| (0..3).map(|col| ((idx >> (3 * r + col)) & 1) as u16).collect()).collect();
            let a = msrd::linalg::Matrix::from_rows(data, 3);
            let rank = msrd::linalg::rank(&f, &a);
            let rho = 3 - rank;
            let clean = msrd::channel::apply_transfer(&t, c.data(), &a);
            let got = decode_with_erasures(&spec, &BlockVector::from_blocks(vec![clean.clone()]).unwrap(), std::slice::from_ref(&a));
            if rank >= 1 {
                assert_eq!(got.as_ref(), Ok(&msg), "A = {a:?}");
            } else {
                assert_eq!(got, Err(DecodeFailure::InsufficientObservations));
            }
            // 2t + ρ ≤ n − k = 2
            if rho == 0 {
                let e = random_rank_vector(&t, &mut rng, rows, 1);
                let y: Vec<Fqm> = clean.iter().zip(&e).map(|(&a, &b)| t.add(a, b)).collect();
                assert_eq!(decode_with_erasures(&spec, &BlockVector::from_blocks(vec![y]).unwrap(), &[a]), Ok(msg.clone()));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn corrects_errors_and_erasures(cfg in 0..6usize, k_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let (t, lengths) = configs()[cfg].clone();
        let shape = BlockShape::new(lengths.clone()).unwrap();
        let n = shape.n();
        let k = 1 + ((n - 1) as f64 * k_frac) as usize;
        let spec = CodeSpec::new(&t, shape.clone(), k).unwrap();
        let mut rng = trial_rng(seed, 0);
        let rho = rng.gen_range(0..=n - k);
        let tt = (n - k - rho) / 2;
        let rho_split = random_split(&mut rng, rho, &lengths).unwrap();
        let msg = random_message(&t, &mut rng, k);
        let c = spec.encode(&msg).unwrap();
        let mut a = Vec::new();
        let mut ys = Vec::new();
        let out_lengths: Vec<usize> = lengths.iter().zip(&rho_split).map(|(&ni, &ri)| ni - ri + rng.gen_range(0..2)).collect();
        let caps: Vec<usize> = out_lengths.iter().map(|&l| l.min(t.m())).collect();
        let t_split = random_split(&mut rng, tt.min(caps.iter().sum()), &caps).unwrap();
        for i in 0..lengths.len() {
            let ai = random_rank_matrix(t.subfield(), &mut rng, out_lengths[i], lengths[i], lengths[i] - rho_split[i]);
            let e = random_rank_vector(&t, &mut rng, out_lengths[i], t_split[i]);
            let clean = msrd::channel::apply_transfer(&t, c.block(i), &ai);
            ys.push(clean.iter().zip(&e).map(|(&x, &y)| t.add(x, y)).collect::<Vec<_>>());
            a.push(ai);
        }
        let y = BlockVector::from_blocks(ys).unwrap();
        prop_assert_eq!(decode_with_erasures(&spec, &y, &a), Ok(msg));
    }

    #[test]
    fn coset_decoding_recovers_secret(cfg in 0..6usize, seed in any::<u64>()) {
        let (t, lengths) = configs()[cfg].clone();
        let shape = BlockShape::new(lengths).unwrap();
        let n = shape.n();
        let mut rng = trial_rng(seed, 0);
        let tt = rng.gen_range(0..=(n - 1) / 2);
        let mu = rng.gen_range(0..n - 2 * tt);
        let pair = NestedPair::optimal(&t, shape.clone(), tt, 0, mu).unwrap();
        let secret = random_message(&t, &mut rng, pair.secret_len());
        let keys = random_message(&t, &mut rng, pair.k2());
        let x = coset_encode(&pair, &secret, &keys).unwrap();
        let y = x.add(&t, &random_error(&t, &shape, tt, &mut rng)).unwrap();
        prop_assert_eq!(coset_decode(&pair, &y, None), Ok(secret.clone()));
        let ident: Vec<_> = shape.lengths().iter().map(|&ni| random_full_rank(t.subfield(), &mut rng, ni, ni)).collect();
        let y2 = BlockVector::from_blocks(
            (0..shape.ell()).map(|i| msrd::channel::apply_transfer(&t, x.block(i), &ident[i])).collect()
        ).unwrap();
        prop_assert_eq!(coset_decode(&pair, &y2, Some(&ident)), Ok(secret));
    }
}
