use std::f64::consts::PI;

use fiberatlas_core::fiber::{build_fiber, check_exactness, check_exactness_refined, GeometricSample};
use fiberatlas_core::grid::Grid;
use fiberatlas_core::word::{glue, Letter, QuadraticWord};
use fiberatlas_core::{Complex64, Error};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A word `x_1 ... x_n x_1^-1 ... x_n^-1` (letters permuted, signs random)
/// with side vectors turning monotonically, so the chain is convex.
fn convex_chain(rng: &mut ChaCha8Rng, n: usize) -> (QuadraticWord, Vec<Complex64>) {
    let mut idx: Vec<usize> = (1..=n).collect();
    idx.shuffle(rng);
    let signs: Vec<i8> = (0..n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    let mut letters: Vec<Letter> = idx.iter().zip(&signs).map(|(&k, &s)| Letter { index: k, sign: s }).collect();
    letters.extend(idx.iter().zip(&signs).map(|(&k, &s)| Letter { index: k, sign: -s }));
    let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..PI - 0.01)).collect();
    angles.sort_by(f64::total_cmp);
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        z[idx[i] - 1] = Complex64::from_polar(rng.gen_range(0.3..2.0), angles[i]) * signs[i] as f64;
    }
    (QuadraticWord::from_letters(letters).unwrap(), z)
}

/// A random word with random side vectors, retried until the chain is embedded.
fn embedded_chain(seed: u64) -> (QuadraticWord, Vec<Complex64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=4);
    if seed.is_multiple_of(2) {
        return convex_chain(&mut rng, n.max(2));
    }
    for _ in 0..500 {
        let mut letters: Vec<Letter> =
            (1..=n).flat_map(|k| [Letter { index: k, sign: 1 }, Letter { index: k, sign: -1 }]).collect();
        letters.shuffle(&mut rng);
        let word = QuadraticWord::from_letters(letters).unwrap();
        let z: Vec<Complex64> =
            (0..n).map(|_| Complex64::from_polar(rng.gen_range(0.3..2.0), rng.gen_range(-PI..PI))).collect();
        if build_fiber(&word, &z, Complex64::new(0.0, 0.0)).is_ok() {
            return (word, z);
        }
    }
    convex_chain(&mut rng, n.max(2))
}

#[test]
fn named_fibers() {
    let sq = QuadraticWord::parse("abAB").unwrap();
    let f = build_fiber(&sq, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)], Complex64::new(0.0, 0.0)).unwrap();
    assert_eq!(f.cone_angles.len(), 1);
    assert!((f.cone_angles[0] - 2.0 * PI).abs() < 1e-9);
    let oct = QuadraticWord::parse("abcdABCD").unwrap();
    let z: Vec<_> = (0..4).map(|k| Complex64::from_polar(1.0, PI * k as f64 / 4.0)).collect();
    let f = build_fiber(&oct, &z, Complex64::new(0.0, 0.0)).unwrap();
    assert_eq!(f.cone_angles.len(), 1);
    assert!((f.cone_angles[0] - 6.0 * PI).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn cone_angles_follow_gauss_bonnet(seed in any::<u64>()) {
        let (word, z) = embedded_chain(seed);
        let fiber = build_fiber(&word, &z, Complex64::new(0.25, -1.0)).unwrap();
        let n = word.n() as f64;
        let surf = glue(&word);
        prop_assert!(fiber.chain.closure(&word) == Complex64::new(0.0, 0.0));
        prop_assert!((fiber.total_angle() - 2.0 * PI * (n - 1.0)).abs() < 1e-9);
        let euler = (surf.s + 2 * surf.g) as f64 - 2.0;
        prop_assert!((fiber.total_angle() - 2.0 * PI * euler).abs() < 1e-9);
        let (orders, dev) = fiber.cone_orders();
        prop_assert!(dev < 1e-9);
        prop_assert!(orders.iter().all(|&o| o >= 1));
        prop_assert_eq!(orders.len(), surf.s);
        // per class: the sum of the interior angles at its corners
        for (c, members) in surf.classes().iter().enumerate() {
            let sum: f64 = members.iter().map(|&l| fiber.chain.corner_angle(l)).sum();
            prop_assert!((sum - fiber.cone_angles[c]).abs() < 1e-9);
        }
    }

    #[test]
    fn quadratic_maps_are_exact(cs in prop::collection::vec(-2.0f64..2.0, 12)) {
        // J_k(xi) = a + b xi + c xi^2 with complex coefficients: central
        // differences are exact on quadratics
        let word = QuadraticWord::parse("abAB").unwrap();
        let c = |i: usize| Complex64::new(cs[2 * i], cs[2 * i + 1]);
        let grid = Grid::new(-0.5, 0.5, -0.5, 0.5, 7, 7).unwrap();
        let sample = GeometricSample::from_fn(
            grid,
            |x| vec![c(0) + c(1) * x + c(2) * x * x, c(3) + c(4) * x + c(5) * x * x],
            |_| Complex64::new(0.0, 0.0),
        ).unwrap();
        let r = check_exactness(&word, &sample, 1e-9).unwrap();
        prop_assert!(r.passes, "{:?}", r);
        prop_assert!(r.path_residuals.iter().all(|&p| p < 1e-9));
    }
}

#[test]
fn holomorphic_sample_is_second_order() {
    let word = QuadraticWord::parse("abAB").unwrap();
    let grid = Grid::new(0.5, 0.52, 0.0, 0.02, 21, 21).unwrap();
    let j = |x: Complex64| vec![x, x.exp()];
    let coarse = GeometricSample::from_fn(grid, j, |_| Complex64::new(0.0, 0.0)).unwrap();
    let fine = GeometricSample::from_fn(grid.refined(), j, |_| Complex64::new(0.0, 0.0)).unwrap();
    let r = check_exactness_refined(&word, &coarse, &fine, 1e-6).unwrap();
    assert!(r.passes, "{r:?}");
    assert!(r.order.unwrap() > 1.9, "{r:?}");
}

#[test]
fn conjugate_sample_fails() {
    let word = QuadraticWord::parse("abAB").unwrap();
    let grid = Grid::new(1.0, 1.1, 1.0, 1.1, 11, 11).unwrap();
    let sample =
        GeometricSample::from_fn(grid, |x| vec![x, Complex64::i() * x.conj()], |_| Complex64::new(0.0, 0.0)).unwrap();
    let r = check_exactness(&word, &sample, 1e-6).unwrap();
    assert!(!r.passes);
    assert!(r.max_residual() >= 1.9, "{r:?}");
}

#[test]
fn words_must_be_normalized() {
    // n = 3, g = 1, s = 2: a_3 must be a tree edge joining the two classes
    let word = QuadraticWord::parse("abcCAB").unwrap();
    let grid = Grid::new(1.0, 2.0, 1.0, 2.0, 3, 3).unwrap();
    let sample = GeometricSample::from_fn(grid, |x| vec![x; 3], |_| Complex64::new(0.0, 0.0)).unwrap();
    if !glue(&word).tree_ok {
        assert!(matches!(check_exactness(&word, &sample, 1e-6), Err(Error::NotNormalized)));
    }
}
