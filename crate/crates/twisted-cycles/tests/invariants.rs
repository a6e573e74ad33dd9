//! Randomized cross-cutting invariants: the guarantees that must hold at
//! *every* admissible configuration, exercised over seeded random draws on
//! two period lattices. Complements the `acceptance` target, which pins the
//! same guarantees at named configurations.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twisted_cycles::chains::CycleIndex;
use twisted_cycles::elliptic::{make_lattice, Lattice};
use twisted_cycles::local_system::{
    abelian_integral_i, continue_log_g, AlphaParam, Configuration,
};
use twisted_cycles::matrix::MatQc;
use twisted_cycles::paths::find_connector;
use twisted_cycles::picard_lefschetz::{compose, PathLabel, PathPair};
use twisted_cycles::quadrature::{build_cycle, integrate, monodromy_ratio};
use twisted_cycles::ratfunc::RationalFunctionC as R;

const QUAD_ABS_TOL: f64 = 1e-10;
const EPSILON_INDEPENDENCE_REL: f64 = 1e-8;
const RELATION_RESIDUAL_REL: f64 = 1e-6;
const PERIOD_RESIDUAL_TOL: f64 = 1e-10;
const MONODROMY_REL: f64 = 1e-8;
const TRANSPORT_ROUNDTRIP_TOL: f64 = 1e-12;

fn lattices() -> [Lattice; 2] {
    [
        make_lattice(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)).unwrap(),
        make_lattice(Complex64::new(1.0, 0.0), Complex64::new(0.3, 1.1)).unwrap(),
    ]
}

/// True when every chord between consecutive punctures stays comfortably
/// away from the remaining two, so segment cycles at ε up to 0.05·|ω₁| are
/// cheap to integrate. (The library itself only requires the hard clearance;
/// this keeps the randomized suite fast.)
fn chords_are_clear(q: &Configuration, margin: f64) -> bool {
    let ps = q.punctures();
    let chords = [(1usize, 2usize), (2, 3), (3, 1)]; // punctures() = [0, x0, x1, x2]
    chords.iter().all(|&(i, j)| {
        let others: Vec<Complex64> = (0..4).filter(|k| *k != i && *k != j).map(|k| ps[k]).collect();
        (0..=32).all(|k| {
            let t = ps[i] + (k as f64 / 32.0) * (ps[j] - ps[i]);
            others
                .iter()
                .all(|&p| q.lattice.distance_to_lattice(t - p) >= margin)
        })
    })
}

fn random_configuration(rng: &mut ChaCha8Rng, lat: Lattice) -> Configuration {
    let scale = lat.omega1.norm();
    loop {
        let draw = |rng: &mut ChaCha8Rng| {
            rng.gen_range(-0.4..0.4) * lat.omega1 + rng.gen_range(-0.4..0.4) * lat.omega2
        };
        let (x0, x1) = (draw(rng), draw(rng));
        let Ok(q) = Configuration::new(x0, x1, lat) else {
            continue;
        };
        let ps = q.punctures();
        let mut gap = f64::INFINITY;
        for i in 0..4 {
            for j in (i + 1)..4 {
                gap = gap.min(lat.distance_to_lattice(ps[i] - ps[j]));
            }
        }
        if gap >= 0.16 * scale && chords_are_clear(&q, 0.10 * scale) {
            return q;
        }
    }
}

fn random_configurations(seed: u64) -> Vec<Configuration> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let [sq, skew] = lattices();
    let mut qs: Vec<Configuration> = (0..3).map(|_| random_configuration(&mut rng, sq)).collect();
    qs.extend((0..2).map(|_| random_configuration(&mut rng, skew)));
    qs
}

#[test]
fn epsilon_independence_and_relation_hold_at_random_configurations() {
    let alphas = [
        Complex64::new(0.3, 0.0),
        Complex64::new(0.3, 0.1),
        Complex64::new(-0.7, 0.0),
    ];
    let segments = [CycleIndex::Seg01, CycleIndex::Seg12, CycleIndex::Seg20];
    for (n, q) in random_configurations(88_001).iter().enumerate() {
        let scale = q.lattice.omega1.norm();
        for alpha in alphas {
            let a = AlphaParam::new(alpha).unwrap();
            let mut base_values = Vec::with_capacity(3);
            for &mu in &segments {
                let f_at = |eps: f64| {
                    let cycle = build_cycle(mu, q, &a, eps).unwrap();
                    integrate(&cycle, &a, QUAD_ABS_TOL).unwrap().value
                };
                let small = f_at(0.02 * scale);
                let large = f_at(0.04 * scale);
                let rel = (small - large).norm() / small.norm().max(1.0);
                assert!(
                    rel < EPSILON_INDEPENDENCE_REL,
                    "config {n}, alpha {alpha}, segment {mu}: epsilon spread {rel:.3e}"
                );
                base_values.push(small);
            }
            let total: Complex64 = base_values.iter().sum();
            let max_f = base_values.iter().map(|v| v.norm()).fold(0.0, f64::max);
            assert!(
                total.norm() < RELATION_RESIDUAL_REL * max_f,
                "config {n}, alpha {alpha}: relation residual {:.3e} vs max |F| {max_f:.3e}",
                total.norm()
            );
        }
    }
}

#[test]
fn period_residuals_and_monodromy_hold_at_random_configurations() {
    let a = AlphaParam::new(Complex64::new(0.3, 0.1)).unwrap();
    let c = a.c();
    for (n, q) in random_configurations(88_002).iter().enumerate() {
        for direction in [1u8, 2u8] {
            let residual = abelian_integral_i(direction, q).unwrap().norm();
            assert!(
                residual < PERIOD_RESIDUAL_TOL,
                "config {n}: period residual I_{direction} = {residual:.3e}"
            );
        }
        for (center, expected) in [
            (q.x0, c),
            (q.x1, c),
            (q.x2, c),
            (Complex64::new(0.0, 0.0), c.powi(-3)),
        ] {
            let ratio = monodromy_ratio(center, q, &a).unwrap();
            let rel = (ratio - expected).norm() / expected.norm();
            assert!(
                rel < MONODROMY_REL,
                "config {n}: monodromy around {center}: rel {rel:.3e}"
            );
        }
    }
}

#[test]
fn branch_transport_round_trips_on_random_connectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(88_003);
    for (n, q) in random_configurations(88_004).iter().enumerate() {
        let obs = q.obstacles();
        let start = q.canonical_branch().unwrap();
        let mut done = 0;
        while done < 4 {
            let target = rng.gen_range(0.0..1.0) * q.lattice.omega1
                + rng.gen_range(0.0..1.0) * q.lattice.omega2;
            if q
                .punctures()
                .iter()
                .any(|&p| q.lattice.distance_to_lattice(target - p) < 0.08)
            {
                continue;
            }
            let Ok(path) = find_connector(q.basepoint(), target, &obs) else {
                continue;
            };
            done += 1;
            let forward = continue_log_g(&path, q, &start).unwrap();
            let back = continue_log_g(&path.reversed(), q, &forward).unwrap();
            let drift = (back.log_g_at_basepoint - start.log_g_at_basepoint).norm();
            assert!(
                drift < TRANSPORT_ROUNDTRIP_TOL,
                "config {n}: round-trip drift {drift:.3e} via {target}"
            );
        }
    }
}

#[test]
fn random_label_words_compose_consistently() {
    // Words in the four elementary labels with exponents ±1: the composite
    // of a word and its reverse-inverse is the identity, and the determinant
    // is (−c)^{sum of exponents}, both exactly.
    let named: Vec<PathLabel> = [
        (PathPair::P02, 1, 0),
        (PathPair::P02, -1, 0),
        (PathPair::P01, 0, 1),
        (PathPair::P01, 0, -1),
    ]
    .into_iter()
    .map(|(pair, m1, m2)| PathLabel::new(pair, m1, m2).unwrap())
    .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(88_005);
    for _ in 0..12 {
        let len = rng.gen_range(1..=4);
        let word: Vec<(PathLabel, i32)> = (0..len)
            .map(|_| {
                let label = named[rng.gen_range(0..named.len())];
                let power = if rng.gen_bool(0.5) { 1 } else { -1 };
                (label, power)
            })
            .collect();
        let inverse_word: Vec<(PathLabel, i32)> =
            word.iter().rev().map(|&(l, p)| (l, -p)).collect();

        let m = compose(&word).unwrap();
        let m_inv = compose(&inverse_word).unwrap();
        assert_eq!(m.mat.mul(&m_inv.mat), MatQc::identity(4), "word {word:?}");
        assert_eq!(m_inv.mat.mul(&m.mat), MatQc::identity(4), "word {word:?}");

        let total: i32 = word.iter().map(|&(_, p)| p).sum();
        let det_expected = (-&R::c()).powi(total);
        assert_eq!(m.mat.det(), det_expected, "word {word:?}");
    }
}
