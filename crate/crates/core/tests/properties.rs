use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stratrep::game::{solve_mdp_almost_sure, verify_strategy_from, ActionValue};
use stratrep::numeric::{find_separator, least_squares, WeightVector};
use stratrep::roc::auc;
use stratrep::split::predicate_universe;
use stratrep::tree::{learn, path_bound};
use stratrep::{Algorithm, Dataset, DecisionTree, Game, Objective, Player, VariableSchema};

fn dataset(arity: usize, rows: Vec<(Vec<u64>, bool)>) -> Dataset {
    let mut seen = std::collections::BTreeMap::new();
    for (x, g) in rows {
        seen.entry(x[..arity].to_vec()).or_insert(g);
    }
    Dataset::from_rows(VariableSchema::anonymous(arity), seen).unwrap()
}

prop_compose! {
    fn arb_dataset(max_arity: usize, max_rows: usize)
        (arity in 1..=max_arity)
        (rows in prop::collection::vec((prop::collection::vec(0u64..6, arity), any::<bool>()), 1..max_rows), arity in Just(arity))
        -> Dataset
    {
        dataset(arity, rows)
    }
}

fn pair_statistic(w: &[f64], d: &Dataset) -> f64 {
    let s = |x: &[u64]| w.iter().zip(x).map(|(a, &b)| a * b as f64).sum::<f64>();
    let mut total = 0.0;
    for g in d.good() {
        for b in d.bad() {
            total += match s(g).partial_cmp(&s(b)).unwrap() {
                std::cmp::Ordering::Greater => 1.0,
                std::cmp::Ordering::Equal => 0.5,
                std::cmp::Ordering::Less => 0.0,
            };
        }
    }
    total / (d.n_good() * d.n_bad()) as f64
}

fn sum_sq(x: &[Vec<f64>], y: &[f64], w: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(row, yi)| {
            let r = row.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() - yi;
            r * r
        })
        .sum()
}

prop_compose! {
    fn arb_system()(d in 1usize..6)(extra in 0usize..10, d in Just(d), seed in any::<u64>()) -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = d + extra;
        let x = (0..n).map(|_| (0..d).map(|_| rng.gen_range(-5.0..5.0)).collect()).collect();
        let y = (0..n).map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
        (x, y)
    }
}

fn random_mdp(seed: u64) -> (Game, Objective) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=12);
    let mut b = Game::builder(&["s"], &["a"]);
    for i in 0..n {
        b.state(format!("s{i}"), Player::One, vec![i as u64]);
    }
    for k in 0..2 {
        b.action(format!("a{k}"), vec![ActionValue::Nat(k)]);
    }
    for s in 0..n {
        for a in 0..rng.gen_range(1..=2) {
            let mut succ: Vec<usize> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..n)).collect();
            succ.sort_unstable();
            succ.dedup();
            let k = succ.len() as u64;
            let t: Vec<(usize, u64, u64)> = succ.into_iter().map(|t| (t, 1, k)).collect();
            b.transition(s, a, &t);
        }
    }
    let target: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
    let obj = if rng.gen_bool(0.5) { Objective::reachability(target) } else { Objective::safety(target) };
    (b.build().unwrap(), obj)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn auc_equals_pair_statistic(d in arb_dataset(4, 40), w in prop::collection::vec(-3i32..=3, 4)) {
        prop_assume!(d.n_good() > 0 && d.n_bad() > 0);
        let w: Vec<f64> = w[..d.arity()].iter().map(|&v| v as f64).collect();
        let a = auc(&WeightVector(w.clone()), &d);
        prop_assert!((a - pair_statistic(&w, &d)).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn auc_ignores_positive_scaling(d in arb_dataset(3, 30), w in prop::collection::vec(-4i32..=4, 3), k in 1u32..8) {
        let w: Vec<f64> = w[..d.arity()].iter().map(|&v| v as f64).collect();
        let scaled: Vec<f64> = w.iter().map(|v| v * k as f64).collect();
        prop_assert_eq!(auc(&WeightVector(w), &d), auc(&WeightVector(scaled), &d));
    }

    #[test]
    fn one_dimensional_separability(rows in prop::collection::vec((0u64..10, any::<bool>()), 1..15)) {
        let d = dataset(1, rows.into_iter().map(|(v, g)| (vec![v], g)).collect());
        let good: Vec<u64> = d.good().map(|x| x[0]).collect();
        let bad: Vec<u64> = d.bad().map(|x| x[0]).collect();
        let oracle = good.is_empty() || bad.is_empty()
            || bad.iter().max() < good.iter().min()
            || good.iter().max() < bad.iter().min();
        let found = find_separator(&d);
        prop_assert_eq!(found.is_some(), oracle);
        if let Some(c) = found {
            prop_assert!(c.separates(&d));
        }
    }

    #[test]
    fn separators_separate(d in arb_dataset(3, 25)) {
        if let Some(c) = find_separator(&d) {
            prop_assert!(c.separates(&d));
        }
    }

    #[test]
    fn least_squares_residual_is_orthogonal((x, y) in arb_system()) {
        let sol = least_squares(&x, &y);
        let d = x[0].len();
        let r: Vec<f64> = x.iter().zip(&y).map(|(row, yi)| row.iter().zip(&sol.w).map(|(a, b)| a * b).sum::<f64>() - yi).collect();
        for j in 0..d {
            let g: f64 = x.iter().zip(&r).map(|(row, ri)| row[j] * ri).sum();
            prop_assert!(g.abs() < 1e-8, "column {j}: {g}");
        }
    }

    #[test]
    fn least_squares_matches_svd_oracle((x, y) in arb_system()) {
        let (n, d) = (x.len(), x[0].len());
        let m = DMatrix::from_fn(n, d, |i, j| x[i][j]);
        let svd = m.svd(true, true);
        prop_assume!(svd.singular_values.min() > 1e-6);
        let oracle = svd.solve(&DVector::from_vec(y.clone()), 1e-12).unwrap();
        let sol = least_squares(&x, &y);
        for j in 0..d {
            prop_assert!((sol.w[j] - oracle[j]).abs() < 1e-8 * oracle[j].abs().max(1.0));
        }
    }

    #[test]
    fn least_squares_is_a_local_minimum((x, y) in arb_system(), dir in prop::collection::vec(-1.0f64..1.0, 6)) {
        let sol = least_squares(&x, &y);
        let base = sum_sq(&x, &y, &sol.w);
        for eps in [1e-3, -1e-3] {
            let w2: Vec<f64> = sol.w.iter().zip(&dir).map(|(w, d)| w + eps * d).collect();
            prop_assert!(sum_sq(&x, &y, &w2) >= base - 1e-9);
        }
    }

    #[test]
    fn partition_is_a_disjoint_cover(d in arb_dataset(3, 30)) {
        for p in predicate_universe(&d) {
            let (sat, unsat) = d.partition(&p);
            prop_assert!(!sat.is_empty() && !unsat.is_empty());
            prop_assert_eq!(sat.len() + unsat.len(), d.len());
            prop_assert_eq!(sat.n_good() + unsat.n_good(), d.n_good());
            for (x, g) in sat.iter() {
                prop_assert!(p.holds(x));
                prop_assert_eq!(d.label_of(x), Some(g));
            }
            for (x, g) in unsat.iter() {
                prop_assert!(!p.holds(x));
                prop_assert_eq!(d.label_of(x), Some(g));
            }
        }
    }

    #[test]
    fn csv_round_trip(d in arb_dataset(4, 30)) {
        let text = d.to_csv();
        let back = Dataset::parse_csv(&text).unwrap();
        prop_assert_eq!(back.to_csv(), text);
        prop_assert_eq!(back.len(), d.len());
        prop_assert_eq!(back.n_good(), d.n_good());
    }

    #[test]
    fn learners_are_exact_bounded_and_deterministic(d in arb_dataset(4, 40), penalize in any::<bool>()) {
        for a in Algorithm::ALL {
            let (t, r) = learn(&d, a, penalize).unwrap();
            prop_assert!(t.verify_exact(&d));
            prop_assert!(t.check_structure(path_bound(&d)).is_ok());
            prop_assert_eq!(r.nonpure_nodes, t.counts().inner + t.counts().classifier_leaves);
            let (again, _) = learn(&d, a, penalize).unwrap();
            prop_assert_eq!(t.to_json(), again.to_json());
            let back = DecisionTree::from_json(&t.to_json()).unwrap();
            prop_assert_eq!(&back, &t);
        }
    }

    #[test]
    fn classifier_leaves_only_shrink_the_basic_tree(d in arb_dataset(4, 40)) {
        let (star, _) = learn(&d, Algorithm::Basic, false).unwrap();
        let (dagger, _) = learn(&d, Algorithm::LcEntropy, false).unwrap();
        prop_assert!(dagger.is_contraction_of(&star));
        prop_assert!(dagger.size_nonpure() <= star.size_nonpure());
    }

    #[test]
    fn almost_sure_results_depend_only_on_supports(seed in any::<u64>(), reseed in any::<u64>()) {
        let (g, obj) = random_mdp(seed);
        let base = solve_mdp_almost_sure(&g, &obj).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(reseed);
        let g2 = g.with_weights(|_, _, _| rng.gen_range(1..50)).unwrap();
        let other = solve_mdp_almost_sure(&g2, &obj).unwrap();
        prop_assert_eq!(&base, &other);
        let winning: Vec<usize> = base.winning.iter().copied().collect();
        prop_assert!(verify_strategy_from(&g, &obj, &base.strategy, &winning));
    }
}
