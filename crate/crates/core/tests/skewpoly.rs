use msrd::skewpoly::*;
use msrd::{FieldTower, Fqm};
use proptest::prelude::*;

fn gf9() -> FieldTower {
    FieldTower::new(3, 1, 2).unwrap()
}

fn towers() -> Vec<FieldTower> {
    vec![
        gf9(),
        FieldTower::new(2, 2, 2).unwrap(),
        FieldTower::new(2, 1, 3).unwrap(),
        "q0=5 m=3 r=2".parse().unwrap(),
    ]
}

/// Points σ(β)β^{-1}γ^i for the polynomial basis β = z^j, i < blocks.
fn code_points(t: &FieldTower, blocks: usize) -> Vec<Fqm> {
    let g = t.primitive_element();
    let mut pts = Vec::new();
    for i in 0..blocks {
        let gi = t.pow(g, i as u64);
        for j in 0..t.m() {
            let beta = t.pow(t.z(), j as u64);
            pts.push(t.mul(t.mul(t.frobenius(beta, 1), t.inv(beta).unwrap()), gi));
        }
    }
    pts
}

fn blocks(t: &FieldTower) -> usize {
    (t.q() as usize - 1).min(2)
}

/// Σ F_i N_i(a), straight from the definition.
fn eval_by_norms(t: &FieldTower, f: &SkewPoly, a: Fqm) -> Fqm {
    f.coeffs().iter().enumerate().fold(t.zero(), |acc, (i, &c)| t.add(acc, t.mul(c, t.norm(a, i))))
}

fn poly_strategy(t: FieldTower, max_len: usize) -> impl Strategy<Value = SkewPoly> {
    let size = t.size();
    proptest::collection::vec(0..size, 0..=max_len)
        .prop_map(move |v| SkewPoly::new(v.into_iter().map(|c| t.decode(c).unwrap()).collect()))
}

fn elem_strategy(t: FieldTower) -> impl Strategy<Value = Fqm> {
    (0..t.size()).prop_map(move |v| t.decode(v).unwrap())
}

fn tower_idx() -> impl Strategy<Value = FieldTower> {
    (0..towers().len()).prop_map(|i| towers()[i].clone())
}

#[test]
fn evaluation_fixtures() {
    let t = gf9();
    let c = t.decode(5).unwrap();
    for v in 0..9 {
        let a = t.decode(v).unwrap();
        assert_eq!(evaluate(&t, &SkewPoly::constant(c), a), c);
        assert_eq!(evaluate(&t, &SkewPoly::linear(&t, a), a), t.zero());
        assert_eq!(operator_eval(&t, &SkewPoly::x(&t), t.one(), a), t.frobenius(a, 1));
        assert_eq!(operator_eval(&t, &SkewPoly::x(&t), a, t.zero()), t.zero());
        assert_eq!(conjugate(&t, a, t.one()).unwrap(), a);
        if v != 0 {
            assert_eq!(conjugate(&t, t.zero(), a).unwrap(), t.zero());
        }
    }
    assert!(conjugate(&t, c, t.zero()).is_err());
}

#[test]
fn division_edge_cases() {
    let t = gf9();
    let b = SkewPoly::new(vec![t.decode(3).unwrap(), t.decode(7).unwrap(), t.one()]);
    assert_eq!(right_divide(&t, &b, &b).unwrap(), (SkewPoly::one(&t), SkewPoly::zero()));
    assert_eq!(left_divide(&t, &b, &b).unwrap(), (SkewPoly::one(&t), SkewPoly::zero()));
    let small = SkewPoly::x(&t);
    assert_eq!(right_divide(&t, &small, &b).unwrap(), (SkewPoly::zero(), small.clone()));
    assert!(right_divide(&t, &b, &SkewPoly::zero()).is_err());
    assert!(left_divide(&t, &b, &SkewPoly::zero()).is_err());
}

#[test]
fn minimal_polynomial_fixtures() {
    let t = gf9();
    assert_eq!(minimal_skew_poly(&t, &[]), SkewPoly::one(&t));
    let a = t.decode(4).unwrap();
    assert_eq!(minimal_skew_poly(&t, &[a]), SkewPoly::linear(&t, a));
    assert_eq!(p_rank(&t, &[a]), 1);
    // duplicates are skipped
    assert_eq!(p_rank(&t, &[a, a, a]), 1);
}

#[test]
fn minimal_polynomial_is_minimal_by_brute_force() {
    // GF(9): the full code support of two conjugacy classes has rank 4, and
    // no monic polynomial of degree 3 vanishes on all of it.
    let t = gf9();
    let pts = code_points(&t, 2);
    let f = minimal_skew_poly(&t, &pts);
    assert_eq!(f.deg(), Some(4));
    assert_eq!(f.lead(), Some(t.one()));
    for &p in &pts {
        assert!(evaluate(&t, &f, p).is_zero());
    }
    for idx in 0..9u64.pow(3) {
        let mut c: Vec<Fqm> = (0..3).map(|i| t.decode(idx / 9u64.pow(i) % 9).unwrap()).collect();
        c.push(t.one());
        let g = SkewPoly::new(c);
        assert!(pts.iter().any(|&p| !evaluate(&t, &g, p).is_zero()));
    }
    assert!(PBasis::new(&t, pts.clone()).is_ok());
    // A fifth point of the same classes is P-dependent.
    let mut more = pts.clone();
    more.push(t.mul(t.frobenius(t.add(t.z(), t.one()), 1), t.inv(t.add(t.z(), t.one())).unwrap()));
    assert_eq!(p_rank(&t, &more), 4);
    assert!(PBasis::new(&t, more).is_err());
}

#[test]
fn interpolation_is_a_bijection_exhaustive_gf9() {
    // n = 2 (one conjugacy class): all 81 polynomials of degree < 2.
    let t = gf9();
    let basis = PBasis::new(&t, code_points(&t, 1)).unwrap();
    for idx in 0..81 {
        let f = SkewPoly::new(vec![t.decode(idx % 9).unwrap(), t.decode(idx / 9).unwrap()]);
        let vals: Vec<Fqm> = basis.points().iter().map(|&b| evaluate(&t, &f, b)).collect();
        assert_eq!(newton_interpolate(&t, &basis, &vals).unwrap(), f);
    }
    assert!(newton_interpolate(&t, &basis, &[t.one()]).is_err());
    assert_eq!(newton_interpolate(&t, &basis, &[t.zero(), t.zero()]).unwrap(), SkewPoly::zero());
    let single = PBasis::new(&t, vec![basis.points()[0]]).unwrap();
    let c = t.decode(7).unwrap();
    assert_eq!(newton_interpolate(&t, &single, &[c]).unwrap(), SkewPoly::constant(c));
}

#[test]
fn text_round_trip() {
    let t = gf9();
    let f = SkewPoly::new(vec![t.decode(0).unwrap(), t.decode(8).unwrap(), t.decode(3).unwrap()]);
    assert_eq!(f.to_text(&t), "0 8 3");
    assert_eq!(SkewPoly::from_text(&t, "0 8 3 0").unwrap(), f);
    assert_eq!(SkewPoly::from_text(&t, "").unwrap(), SkewPoly::zero());
    assert!(SkewPoly::from_text(&t, "9").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms((t, u, v, w) in tower_idx().prop_flat_map(|t| (Just(t.clone()), poly_strategy(t.clone(), 5), poly_strategy(t.clone(), 5), poly_strategy(t, 5)))) {
        let uv = skew_mul(&t, &u, &v);
        prop_assert_eq!(skew_mul(&t, &uv, &w), skew_mul(&t, &u, &skew_mul(&t, &v, &w)));
        prop_assert_eq!(skew_mul(&t, &u, &v.add(&t, &w)), skew_mul(&t, &u, &v).add(&t, &skew_mul(&t, &u, &w)));
        prop_assert_eq!(skew_mul(&t, &u.add(&t, &v), &w), skew_mul(&t, &u, &w).add(&t, &skew_mul(&t, &v, &w)));
        prop_assert_eq!(skew_mul(&t, &u, &SkewPoly::one(&t)), u.clone());
        if let (Some(du), Some(dv)) = (u.deg(), v.deg()) {
            prop_assert_eq!(uv.deg(), Some(du + dv));
        }
    }

    #[test]
    fn division_reconstructs((t, a, b) in tower_idx().prop_flat_map(|t| (Just(t.clone()), poly_strategy(t.clone(), 8), poly_strategy(t, 4)))) {
        prop_assume!(!b.is_zero());
        let (q, r) = right_divide(&t, &a, &b).unwrap();
        prop_assert_eq!(skew_mul(&t, &q, &b).add(&t, &r), a.clone());
        prop_assert!(r.deg() < b.deg());
        let (q, r) = left_divide(&t, &a, &b).unwrap();
        prop_assert_eq!(skew_mul(&t, &b, &q).add(&t, &r), a.clone());
        prop_assert!(r.deg() < b.deg());
    }

    #[test]
    fn evaluation_is_remainder((t, f, a) in tower_idx().prop_flat_map(|t| (Just(t.clone()), poly_strategy(t.clone(), 7), elem_strategy(t)))) {
        let (_, r) = right_divide(&t, &f, &SkewPoly::linear(&t, a)).unwrap();
        let v = evaluate(&t, &f, a);
        prop_assert_eq!(SkewPoly::constant(v), r);
        prop_assert_eq!(v, eval_by_norms(&t, &f, a));
    }

    #[test]
    fn product_rule((t, u, v, a) in tower_idx().prop_flat_map(|t| (Just(t.clone()), poly_strategy(t.clone(), 4), poly_strategy(t.clone(), 4), elem_strategy(t)))) {
        prop_assert_eq!(product_rule_eval(&t, &u, &v, a), evaluate(&t, &skew_mul(&t, &u, &v), a));
    }

    #[test]
    fn operator_identity((t, f, a, beta) in tower_idx().prop_flat_map(|t| (Just(t.clone()), poly_strategy(t.clone(), 6), elem_strategy(t.clone()), elem_strategy(t)))) {
        prop_assume!(!beta.is_zero());
        // F^{D_a}(β) = F(D_a(β)β^{-1})·β with D_a(β) = σ(β)a
        let point = t.mul(t.mul(t.frobenius(beta, 1), a), t.inv(beta).unwrap());
        prop_assert_eq!(operator_eval(&t, &f, a, beta), t.mul(evaluate(&t, &f, point), beta));
        let direct = f.coeffs().iter().enumerate().fold(t.zero(), |acc, (i, &c)| {
            t.add(acc, t.mul(c, t.mul(t.frobenius(beta, i as i64), t.norm(a, i))))
        });
        prop_assert_eq!(operator_eval(&t, &f, a, beta), direct);
    }

    #[test]
    fn minimal_polynomial_annihilates((t, pts) in tower_idx().prop_flat_map(|t| (Just(t.clone()), proptest::collection::vec(elem_strategy(t), 0..6)))) {
        let f = minimal_skew_poly(&t, &pts);
        prop_assert!(f.deg().unwrap() <= pts.len());
        for &p in &pts {
            prop_assert!(evaluate(&t, &f, p).is_zero());
        }
    }

    #[test]
    fn interpolation_round_trip((t, vals) in tower_idx().prop_flat_map(|t| {
        let n = code_points(&t, blocks(&t)).len();
        (Just(t.clone()), proptest::collection::vec(elem_strategy(t), n))
    })) {
        let basis = PBasis::new(&t, code_points(&t, blocks(&t))).unwrap();
        let g = newton_interpolate(&t, &basis, &vals).unwrap();
        prop_assert!(g.deg().is_none_or(|d| d < basis.len()));
        for (&b, &v) in basis.points().iter().zip(&vals) {
            prop_assert_eq!(evaluate(&t, &g, b), v);
        }
    }

    #[test]
    fn right_gcd_divides_both((t, a, b, c) in tower_idx().prop_flat_map(|t| (Just(t.clone()), poly_strategy(t.clone(), 4), poly_strategy(t.clone(), 4), poly_strategy(t, 3)))) {
        prop_assume!(!c.is_zero());
        let (a, b) = (skew_mul(&t, &a, &c), skew_mul(&t, &b, &c));
        let g = right_gcd(&t, &a, &b);
        if a.is_zero() && b.is_zero() {
            prop_assert!(g.is_zero());
        } else {
            prop_assert!(g.deg() >= c.deg());
            prop_assert!(right_divide(&t, &a, &g).unwrap().1.is_zero());
            prop_assert!(right_divide(&t, &b, &g).unwrap().1.is_zero());
        }
    }
}
