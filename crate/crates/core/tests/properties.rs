use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pinchlab::descent::{random_schedule, run_descent, termination_time};
use pinchlab::family::{classify, normalize_t, section_t, RegionKind, RegionProfile};
use pinchlab::gf2::{Gf2Matrix, Gf2Subspace, Gf2Vector};
use pinchlab::homology::betti_numbers;
use pinchlab::linkhom::{f_map, HandleDiagram, Side};
use pinchlab::oracle::{naive_betti, random_complex};
use pinchlab::symprod::{from_simplex_coords, to_simplex_coords, FacePattern};
use pinchlab::trigpoly::{conjugate_pair_check, n_odd, retract, root_sum_check, roots, TrigPoly, DEFAULT_TOL};

fn vectors(n: usize, k: usize) -> impl Strategy<Value = Vec<Gf2Vector>> {
    prop::collection::vec(0u64..(1 << n), 0..=k).prop_map(move |m| m.into_iter().map(|x| Gf2Vector::from_mask(n, x)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dimension_formula(a in vectors(5, 5), b in vectors(5, 5)) {
        let a = Gf2Subspace::span(5, &a).unwrap();
        let b = Gf2Subspace::span(5, &b).unwrap();
        let i = a.intersect(&b).unwrap();
        let j = a.join(&b).unwrap();
        prop_assert_eq!(a.dim() + b.dim(), i.dim() + j.dim());
        prop_assert!(i.is_subspace_of(&a) && i.is_subspace_of(&b));
        prop_assert!(a.is_subspace_of(&j) && b.is_subspace_of(&j));
        prop_assert_eq!(a.annihilator().dim(), 5 - a.dim());
        prop_assert_eq!(a.annihilator().annihilator(), a);
    }

    #[test]
    fn rank_is_transpose_invariant(rows in vectors(6, 6)) {
        let m = Gf2Matrix::from_rows(6, rows).unwrap();
        prop_assert_eq!(m.rank(), m.transpose().rank());
        let (r, pivots) = m.rref();
        prop_assert_eq!(pivots.len(), m.rank());
        prop_assert_eq!(r.rref().0, r);
    }

    #[test]
    fn betti_agrees_with_dense_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_complex(&mut rng, 300).unwrap();
        let b = betti_numbers(&k).unwrap();
        prop_assert_eq!(&b, &naive_betti(&k));
        let chi: i64 = b.iter().enumerate().map(|(d, &x)| if d % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
        prop_assert_eq!(chi, k.euler_characteristic());
    }

    #[test]
    fn monic_roots_pair_and_sum(s in prop::collection::vec(-2.0f64..2.0, 1..=4)) {
        let n = s.len();
        let mut c: Vec<f64> = s.iter().flat_map(|&x| [x, x * 0.37 - 0.1]).collect();
        c.truncate(2 * n - 1);
        let f = TrigPoly::monic_cosine(&c).unwrap();
        let cfg = roots(&f, 1e-8).unwrap();
        prop_assert_eq!(cfg.total_multiplicity(), 2 * n);
        prop_assert!(conjugate_pair_check(&cfg, 1e-8));
        prop_assert!(root_sum_check(&cfg, 1e-8));
    }

    #[test]
    fn retraction_keeps_n_odd(c in prop::collection::vec(-1.0f64..1.0, 3..=9), t in 0.0f64..=1.0) {
        let len = if c.len() % 2 == 0 { c.len() - 1 } else { c.len() };
        let f = TrigPoly::from_coeffs(&c[..len]).unwrap();
        if let Ok(cfg) = roots(&f, DEFAULT_TOL) {
            let r = retract(&cfg, t).unwrap();
            prop_assert_eq!(n_odd(&r, DEFAULT_TOL), n_odd(&cfg, DEFAULT_TOL));
            prop_assert_eq!(r.total_multiplicity(), cfg.total_multiplicity());
        }
    }

    #[test]
    fn simplex_coords_round_trip(w in prop::collection::vec(0.01f64..1.0, 2..=8)) {
        let total: f64 = w.iter().sum();
        let gaps: Vec<f64> = w.iter().map(|x| x / total * std::f64::consts::TAU).collect();
        let p = FacePattern::new(gaps.clone()).unwrap();
        let back = to_simplex_coords(&from_simplex_coords(&p).unwrap()).unwrap();
        for (x, y) in gaps.iter().zip(&back.gaps) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn section_is_right_inverse(s in prop::collection::vec(-5.0f64..5.0, 5)) {
        let prof = RegionProfile::default();
        let p = section_t(&s, 2, &prof).unwrap();
        prop_assert_eq!(classify(&p, &prof).kind, RegionKind::A1);
        let back = normalize_t(&p, &prof).unwrap();
        for (x, y) in s.iter().zip(&back) {
            prop_assert!((x - y).abs() < 1e-9 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn descent_invariants(seed in any::<u64>(), g in 1usize..=3, len in 0usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d0 = HandleDiagram::top(g).unwrap();
        let s = random_schedule(&d0, len, &mut rng);
        let tr = run_descent(&d0, &s).unwrap();
        prop_assert!(tr.invariant_violations().is_empty());
        // once a class dies it stays dead
        for v in f_map(&d0).a_in.elements() {
            if let Some(t) = termination_time(&tr, &v, Side::Inner) {
                prop_assert!(tr.b_in[t..].iter().all(|b| !b.contains(&v)));
            }
        }
    }
}
