use std::cmp::Ordering;

use knotlocal::alexander::{lspace_phi, staircase_params, torus_delta, LaurentPoly};
use knotlocal::algebra::{dual, reduce, tensor, validate, Bigrading, Complex, Monomial};
use knotlocal::cli::{parse_complex_file, parse_knot_expr, serialize_complex};
use knotlocal::f2::rank;
use knotlocal::homology::{simplify, torsion_bounds, Side};
use knotlocal::localequiv::{compare, compare_direct, standard_rep};
use knotlocal::localmaps::{brute_force_local_map, exists_local_map, verify_local_map, LocalMapError};
use knotlocal::standard::{
    bang_cmp, build_standard, is_symmetric, lex_cmp, p_of, phi, phi_add, shift, tau_of, Phi, ShiftMode,
    StandardParams,
};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn entry() -> impl Strategy<Value = i64> {
    prop_oneof![1i64..=3, -3i64..=-1]
}

/// Even-length nonzero sequences with entries in {±1,±2,±3}.
fn params(max_pairs: usize) -> impl Strategy<Value = StandardParams> {
    (0..=max_pairs)
        .prop_flat_map(|k| prop::collection::vec(entry(), 2 * k))
        .prop_map(|xs| StandardParams::new(xs).unwrap())
}

fn symmetric_params() -> impl Strategy<Value = StandardParams> {
    prop::collection::vec(entry(), 0..=3).prop_map(|half| {
        let mut xs = half.clone();
        xs.extend(half.iter().rev().map(|a| -a));
        StandardParams::new(xs).unwrap()
    })
}

/// Knot-like complexes: a product of one or two standard complexes,
/// possibly dualized, plus an optional acyclic pair joined by a unit arrow.
fn knot_like() -> impl Strategy<Value = Complex> {
    (params(2), prop::option::of(params(1)), any::<bool>(), prop::option::of((-3i64..=3, -3i64..=3)))
        .prop_map(|(a, b, flip, pair)| {
            let mut c = build_standard(&a);
            if let Some(b) = b {
                c = tensor(&c, &build_standard(&b));
            }
            if flip {
                c = dual(&c);
            }
            match pair {
                Some((u, v)) => with_acyclic_pair(&c, Bigrading::new(u, v)),
                None => c,
            }
        })
}

fn with_acyclic_pair(c: &Complex, at: Bigrading) -> Complex {
    let mut raw = c.to_raw();
    let k = raw.generators.len();
    let (p, q) = (format!("acyclic_p{k}"), format!("acyclic_q{k}"));
    raw.generators.push((p.clone(), at));
    raw.generators.push((q.clone(), at + Bigrading::new(1, 1)));
    raw.differential.push((q, vec![(Monomial::Unit, p)]));
    validate(&raw).unwrap()
}

fn gradings(c: &Complex) -> Vec<Bigrading> {
    c.generators().iter().map(|g| g.gr).collect()
}

fn neg_phi(f: &Phi) -> Phi {
    f.iter().map(|(&j, &v)| (j, -v)).collect()
}

fn sorted(mut xs: Vec<u32>) -> Vec<u32> {
    xs.sort_unstable();
    xs
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn operations_preserve_validity(c in knot_like(), d in knot_like()) {
        for x in [reduce(&c), tensor(&c, &d), dual(&c)] {
            prop_assert_eq!(validate(&x.to_raw()).unwrap(), x);
        }
    }

    #[test]
    fn reduce_is_idempotent_and_drops_acyclic_pairs(c in knot_like(), u in -3i64..=3, v in -3i64..=3) {
        let r = reduce(&c);
        prop_assert!(r.is_reduced());
        prop_assert_eq!(reduce(&r).len(), r.len());
        prop_assert_eq!(reduce(&with_acyclic_pair(&c, Bigrading::new(u, v))).len(), r.len());
    }

    #[test]
    fn tensor_counts_and_gradings(a in params(2), b in params(2)) {
        let (ca, cb) = (build_standard(&a), build_standard(&b));
        let t = tensor(&ca, &cb);
        prop_assert_eq!(t.len(), ca.len() * cb.len());
        for i in 0..ca.len() {
            for j in 0..cb.len() {
                prop_assert_eq!(t.gr(i * cb.len() + j), ca.gr(i) + cb.gr(j));
            }
        }
    }

    #[test]
    fn dual_is_an_involution(c in knot_like()) {
        let dd = dual(&dual(&c));
        prop_assert_eq!(&dd, &c);
        prop_assert_eq!(dual(&c).arrow_count(), c.arrow_count());
        let neg: Vec<Bigrading> = gradings(&c).into_iter().map(|g| -g).collect();
        prop_assert_eq!(gradings(&dual(&c)), neg);
    }

    #[test]
    fn simplify_uses_an_invertible_basis_change(c in knot_like()) {
        let r = reduce(&c);
        for side in [Side::ModU, Side::ModV] {
            let report = simplify(&r, side).unwrap();
            prop_assert_eq!(rank(report.basis_change.clone()), r.len());
            prop_assert_eq!(2 * report.torsion_pairs.len() + 1, r.len());
        }
    }

    #[test]
    fn standard_complexes_simplify_to_their_arrows(p in params(3)) {
        let c = build_standard(&p);
        let xs = p.as_slice();
        let odd: Vec<u32> = xs.iter().step_by(2).map(|a| a.unsigned_abs() as u32).collect();
        let even: Vec<u32> = xs.iter().skip(1).step_by(2).map(|a| a.unsigned_abs() as u32).collect();
        let mod_v = simplify(&c, Side::ModV).unwrap();
        let mod_u = simplify(&c, Side::ModU).unwrap();
        prop_assert_eq!(sorted(mod_v.torsion_pairs.iter().map(|t| t.eta).collect()), sorted(odd.clone()));
        prop_assert_eq!(sorted(mod_u.torsion_pairs.iter().map(|t| t.eta).collect()), sorted(even.clone()));
        prop_assert_eq!(mod_v.tower_top.gr_u, p_of(&p));
        prop_assert_eq!(
            torsion_bounds(&c).unwrap(),
            (odd.into_iter().max().unwrap_or(0), even.into_iter().max().unwrap_or(0))
        );
    }

    #[test]
    fn bang_order_is_total(a in -5i64..=5, b in -5i64..=5, c in -5i64..=5) {
        prop_assert_eq!(bang_cmp(a, b), bang_cmp(b, a).reverse());
        prop_assert_eq!(bang_cmp(a, b) == Ordering::Equal, a == b);
        if bang_cmp(a, b) != Ordering::Greater && bang_cmp(b, c) != Ordering::Greater {
            prop_assert_ne!(bang_cmp(a, c), Ordering::Greater);
        }
    }

    #[test]
    fn bang_order_is_reciprocal_order(a in -6i64..=6, b in -6i64..=6) {
        // Compare 1/a and 1/b exactly, with 1/0 read as 0.
        let key = |x: i64| if x == 0 { (0i64, 1i64) } else { (x.signum(), x.abs()) };
        let (na, da) = key(a);
        let (nb, db) = key(b);
        prop_assert_eq!(bang_cmp(a, b), (na * db).cmp(&(nb * da)));
    }

    #[test]
    fn lex_order_is_total(p in params(2), q in params(2), r in params(2)) {
        let (p, q, r) = (p.as_slice(), q.as_slice(), r.as_slice());
        prop_assert_eq!(lex_cmp(p, q), lex_cmp(q, p).reverse());
        prop_assert_eq!(lex_cmp(p, q) == Ordering::Equal, p == q);
        if lex_cmp(p, q) != Ordering::Greater && lex_cmp(q, r) != Ordering::Greater {
            prop_assert_ne!(lex_cmp(p, r), Ordering::Greater);
        }
    }

    #[test]
    fn shift_moves_phi_and_p(p in params(3), m in 1u32..=4) {
        let f = phi(p.as_slice());
        let g = phi(shift(&p, m, ShiftMode::Both).as_slice());
        for j in 1..=8u32 {
            let want = match j.cmp(&m) {
                Ordering::Less => f.get(&j).copied(),
                Ordering::Equal => None,
                Ordering::Greater => f.get(&(j - 1)).copied(),
            };
            prop_assert_eq!(g.get(&j).copied(), want, "j = {}", j);
        }
        let tail: i64 = f.range(m..).map(|(_, &v)| v).sum();
        prop_assert_eq!(p_of(&shift(&p, m, ShiftMode::Both)) - p_of(&p), -2 * tail);
    }

    #[test]
    fn negation_negates_p_and_phi(p in params(3)) {
        prop_assert_eq!(p_of(&p) + p_of(&p.negated()), 0);
        prop_assert_eq!(phi(p.negated().as_slice()), neg_phi(&phi(p.as_slice())));
    }

    #[test]
    fn symmetric_sequences(p in symmetric_params()) {
        let xs = p.as_slice();
        prop_assert!(is_symmetric(xs));
        prop_assert_eq!(xs.iter().map(|a| a.signum()).sum::<i64>(), 0);
        let weighted: i64 = phi(xs).iter().map(|(&j, &v)| i64::from(j) * v).sum();
        prop_assert_eq!(tau_of(&p), weighted);
    }

    #[test]
    fn params_round_trip(p in params(3)) {
        prop_assert_eq!(p.to_string().parse::<StandardParams>().unwrap(), p);
    }

    #[test]
    fn local_maps_respect_duality_and_verify(a in knot_like(), b in knot_like()) {
        let (ra, rb) = (reduce(&a), reduce(&b));
        let forward = exists_local_map(&ra, &rb).unwrap();
        let backward = exists_local_map(&dual(&rb), &dual(&ra)).unwrap();
        prop_assert_eq!(forward.is_some(), backward.is_some());
        if let Some(w) = forward {
            prop_assert!(verify_local_map(&ra, &rb, &w).unwrap());
        }
    }

    #[test]
    fn local_maps_between_standard_complexes_follow_lex(p in params(2), q in params(2)) {
        let found = exists_local_map(&build_standard(&p), &build_standard(&q)).unwrap().is_some();
        prop_assert_eq!(found, lex_cmp(p.as_slice(), q.as_slice()) != Ordering::Greater);
    }

    #[test]
    fn local_maps_compose(a in knot_like(), b in knot_like(), c in knot_like()) {
        let (a, b, c) = (reduce(&a), reduce(&b), reduce(&c));
        let ab = exists_local_map(&a, &b).unwrap().is_some();
        let bc = exists_local_map(&b, &c).unwrap().is_some();
        if ab && bc {
            prop_assert!(exists_local_map(&a, &c).unwrap().is_some());
        }
    }

    #[test]
    fn solver_matches_oracle(p in params(2), q in params(2)) {
        let (s, c) = (build_standard(&p), build_standard(&q));
        match brute_force_local_map(&s, &c, 22) {
            Err(LocalMapError::BudgetExceeded { .. }) => {}
            Err(e) => prop_assert!(false, "oracle error {}", e),
            Ok(brute) => {
                let fast = exists_local_map(&s, &c).unwrap();
                prop_assert_eq!(fast.is_some(), brute.is_some());
            }
        }
    }

    #[test]
    fn representatives_are_stable(c in knot_like()) {
        let r = standard_rep(&c).unwrap().params;
        prop_assert_eq!(standard_rep(&build_standard(&r)).unwrap().params, r.clone());
        prop_assert_eq!(standard_rep(&dual(&c)).unwrap().params, r.negated());
        prop_assert!(standard_rep(&tensor(&c, &dual(&c))).unwrap().params.is_empty());
    }

    #[test]
    fn representatives_are_additive(a in params(2), b in params(2), m in 1u32..=3) {
        let (ca, cb) = (build_standard(&a), build_standard(&b));
        let r = standard_rep(&tensor(&ca, &cb)).unwrap().params;
        prop_assert_eq!(phi(r.as_slice()), phi_add(&phi(a.as_slice()), &phi(b.as_slice())));
        prop_assert_eq!(p_of(&r), p_of(&a) + p_of(&b));
        let shifted = tensor(
            &build_standard(&shift(&a, m, ShiftMode::Both)),
            &build_standard(&shift(&b, m, ShiftMode::Both)),
        );
        prop_assert_eq!(standard_rep(&shifted).unwrap().params, shift(&r, m, ShiftMode::Both));
    }

    #[test]
    fn compare_agrees_with_direct_maps(a in knot_like(), b in knot_like()) {
        let by_rep = compare(&a, &b).unwrap();
        prop_assert_eq!(compare_direct(&a, &b).unwrap(), Some(by_rep));
    }

    #[test]
    fn complex_files_round_trip(c in knot_like()) {
        let text = serialize_complex(&c);
        let back = parse_complex_file(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(serialize_complex(&back), text);
    }
}

fn coprime_pair() -> impl Strategy<Value = (i64, i64)> {
    (2i64..=7, 2i64..=9).prop_filter("coprime", |&(p, q)| gcd(p, q) == 1)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn torus_polynomials((p, q) in coprime_pair()) {
        let d = torus_delta(p, q).unwrap();
        prop_assert_eq!(&d, &torus_delta(q, p).unwrap());
        prop_assert_eq!(d.degree(), Some((p - 1) * (q - 1)));
        prop_assert_eq!(d.eval_one(), 1);
        let s = staircase_params(&d).unwrap();
        prop_assert!(is_symmetric(s.as_slice()));
        prop_assert_eq!(tau_of(&s), (p - 1) * (q - 1) / 2);
        prop_assert!(lspace_phi(&d).unwrap().values().all(|&v| v >= 0));
    }

    #[test]
    fn staircase_pipeline_is_additive(a in coprime_pair(), b in coprime_pair()) {
        let da = torus_delta(a.0, a.1).unwrap();
        let db = torus_delta(b.0, b.1).unwrap();
        let c = tensor(&build_standard(&staircase_params(&da).unwrap()), &build_standard(&staircase_params(&db).unwrap()));
        let r = standard_rep(&c).unwrap().params;
        prop_assert_eq!(phi(r.as_slice()), phi_add(&lspace_phi(&da).unwrap(), &lspace_phi(&db).unwrap()));
    }

    #[test]
    fn polynomial_text_round_trips(terms in prop::collection::btree_map(0i64..12, -4i64..=4, 0..6)) {
        let p = LaurentPoly::from_terms(terms);
        prop_assert_eq!(p.to_string().parse::<LaurentPoly>().unwrap(), p);
    }

    #[test]
    fn exact_division_inverts_multiplication(
        a in prop::collection::btree_map(0i64..8, -3i64..=3, 1..5),
        b in prop::collection::btree_map(0i64..6, -3i64..=3, 0..4),
    ) {
        let a = LaurentPoly::from_terms(a);
        let divisor = LaurentPoly::from_terms(b) * LaurentPoly::monomial(7, 1) + LaurentPoly::monomial(13, 1);
        prop_assume!(!a.is_zero());
        prop_assert_eq!((a.clone() * divisor.clone()).div_exact(&divisor), Some(a));
    }

    #[test]
    fn knot_expressions_round_trip(t in -4i64..=4, p in 2i64..=5, k in 1u32..=3, neg in any::<bool>()) {
        let text = format!("{}{}*Thin({t}) + Cable(T({p},{});2,3) - D", if neg { "-" } else { "" }, k, p + 1);
        let e = parse_knot_expr(&text).unwrap();
        prop_assert_eq!(parse_knot_expr(&e.to_string()).unwrap(), e);
    }
}
