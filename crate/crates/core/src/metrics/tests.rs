use super::*;
use crate::channels::{
    complete_noise, depolarizing, faulty_single_step, faulty_trotter, ideal_map, NoiseModel, TrotterPlan,
};
use crate::linalg::{hermitian_exp, kron, C64};
use crate::sdp::{self, SdpStatus};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

type NoRng = crate::exec::Rng;
const TOL: f64 = 1e-8;

fn sx() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

fn sz() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
}

fn ising2() -> Vec<ComplexMatrix> {
    let id = ComplexMatrix::identity(2);
    vec![kron(&sz(), &id) + kron(&id, &sz()), kron(&sx(), &sx())]
}

fn random_hermitian(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).hermitian_part()
}

fn random_unitary(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    hermitian_exp(&random_hermitian(rng, d), 3.0).unwrap()
}

/// Random CPTP map from three Kraus operators, normalized by `(Σ A†A)^{-1/2}`.
fn random_channel(rng: &mut impl Rng, d: usize) -> SuperOperator {
    let ks: Vec<ComplexMatrix> = (0..3)
        .map(|_| ComplexMatrix::from_fn(d, d, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
        .collect();
    let mut s = ComplexMatrix::zeros(d, d);
    for k in &ks {
        s = s + &(&k.adjoint() * k);
    }
    let inv_sqrt = HermitianEigen::new(&s.hermitian_part()).unwrap().map_spectrum(|x| c64(1.0 / x.sqrt(), 0.0));
    let mut out = SuperOperator::zero(d);
    for k in &ks {
        let kn = k * &inv_sqrt;
        out = out.add(&SuperOperator::sandwich(&kn, &kn.adjoint()).unwrap());
    }
    out
}

fn pure(v: &[C64]) -> ComplexMatrix {
    let col = ComplexMatrix::from_fn(v.len(), 1, |r, _| v[r]);
    &col * &col.adjoint()
}

#[test]
fn trace_distance_cases() {
    let zero = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
    let one = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
    assert!((trace_distance(&zero, &one).unwrap() - 2.0).abs() < 1e-14);
    assert!(trace_distance(&zero, &zero).unwrap().abs() < 1e-14);
    let mixed = ComplexMatrix::identity(2).scale_real(0.5);
    assert!((trace_distance(&zero, &mixed).unwrap() - 1.0).abs() < 1e-14);
    assert!(trace_distance(&zero, &ComplexMatrix::identity(3)).is_err());
}

#[test]
fn j_distance_cases() {
    let id = SuperOperator::identity(2);
    let flip = SuperOperator::unitary(&sx()).unwrap();
    assert!(j_distance(&flip, &flip).unwrap().abs() < 1e-14);
    assert!((j_distance(&id, &flip).unwrap() - 2.0).abs() < 1e-12);
    let noise = complete_noise(2).unwrap();
    assert!((j_distance(&flip, &noise).unwrap() - 1.5).abs() < 1e-12);
    assert!(j_distance(&id, &SuperOperator::identity(3)).is_err());
}

#[test]
fn unitary_diamond_cases() {
    let id = ComplexMatrix::identity(2);
    assert!(diamond_distance_unitary(&sx(), &sx()).unwrap().abs() < 1e-12);
    assert!((diamond_distance_unitary(&id, &sx()).unwrap() - 2.0).abs() < 1e-12);
    assert!(diamond_distance_unitary(&id, &ComplexMatrix::from_real_diagonal(&[1.0, 2.0])).is_err());
}

#[test]
fn unitary_diamond_matches_ancilla_brute_force() {
    let id = ComplexMatrix::identity(2);
    for theta in [PI / 4.0, PI / 2.0, PI] {
        let u = ComplexMatrix::from_diagonal(&[c64(1.0, 0.0), C64::from_polar(1.0, theta)]);
        let big = kron(&u, &id);
        let mut best = 0.0f64;
        for i in 0..=400 {
            let alpha = 0.5 * PI * i as f64 / 400.0;
            for k in 0..4 {
                let phase = C64::from_polar(alpha.sin(), 0.5 * PI * k as f64);
                let psi = pure(&[c64(alpha.cos(), 0.0), c64(0.0, 0.0), c64(0.0, 0.0), phase]);
                let out = &(&big * &psi) * &big.adjoint();
                best = best.max(trace_distance(&out, &psi).unwrap());
            }
        }
        let closed = diamond_distance_unitary(&id, &u).unwrap();
        assert!((closed - 2.0 * (theta / 2.0).sin()).abs() < 1e-12);
        assert!((closed - best).abs() < 1e-4, "theta {theta}: {closed} vs {best}");
    }
}

#[test]
fn sdp_diamond_cases() {
    let id = SuperOperator::identity(2);
    let flip = SuperOperator::unitary(&sx()).unwrap();
    assert!(diamond_distance(&flip, &flip, TOL).unwrap() <= TOL);
    assert!((diamond_distance(&id, &flip, TOL).unwrap() - 2.0).abs() <= 10.0 * TOL);
    let noise = complete_noise(2).unwrap();
    assert!((diamond_distance(&flip, &noise, TOL).unwrap() - 1.5).abs() <= TOL);
    for p in [0.1, 0.5] {
        let dep = depolarizing(p, 2).unwrap();
        let lower = j_distance(&id, &dep).unwrap();
        let upper = 2.0 * p * (1.0 - 0.25);
        assert!((lower - upper).abs() < 1e-12);
        assert!((diamond_distance(&id, &dep, TOL).unwrap() - 1.5 * p).abs() <= TOL);
    }
}

#[test]
fn sdp_iterates_satisfy_weak_duality() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    for _ in 0..4 {
        let map = random_channel(&mut rng, 2).sub(&random_channel(&mut rng, 2));
        let sol = sdp::solve(&diamond_problem(&map), TOL, sdp::DEFAULT_MAX_ITER).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!(sol.gap <= TOL);
        for rec in &sol.history {
            assert!(rec.primal >= rec.dual - 1e-12, "{} < {}", rec.primal, rec.dual);
        }
    }
}

#[test]
fn general_and_hermitian_formulations_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..3 {
        let map = random_channel(&mut rng, 2).sub(&random_channel(&mut rng, 2));
        let j = map.choi_unnormalized();
        let a = sdp::solve(&diamond::hermitian_problem(&j, 2), TOL, 200).unwrap();
        let b = sdp::solve(&diamond::general_problem(&j, 2), TOL, 200).unwrap();
        assert!(a.is_optimal() && b.is_optimal());
        assert!((a.primal - b.primal).abs() <= 10.0 * TOL, "{} vs {}", a.primal, b.primal);
    }
}

#[test]
fn non_hermitian_preserving_map() {
    // ρ ↦ |0⟩⟨1| ρ has diamond norm ‖|0⟩⟨1|‖∞ · ‖I‖∞ = 1.
    let lower = ComplexMatrix::from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    let map = SuperOperator::sandwich(&lower, &ComplexMatrix::identity(2)).unwrap();
    assert!((diamond_norm(&map, TOL).unwrap() - 1.0).abs() <= 10.0 * TOL);
}

#[test]
fn sdp_agrees_with_enclosing_circle() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for d in [2, 4] {
        for _ in 0..3 {
            let u = random_unitary(&mut rng, d);
            let v = random_unitary(&mut rng, d);
            let sdp_value = diamond_distance(
                &SuperOperator::unitary(&u).unwrap(),
                &SuperOperator::unitary(&v).unwrap(),
                TOL,
            )
            .unwrap();
            let closed = diamond_distance_unitary(&u, &v).unwrap();
            assert!((sdp_value - closed).abs() <= 1e-5, "d={d}: {sdp_value} vs {closed}");
        }
    }
}

#[test]
fn induced_heuristic_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let u = SuperOperator::unitary(&random_unitary(&mut rng, 2)).unwrap();
    let cfg = Metric::induced(1);
    assert!(induced_trace_distance_heuristic(&u, &u, &cfg).unwrap().abs() < 1e-12);
    let noise = complete_noise(2).unwrap();
    assert!((induced_trace_distance_heuristic(&u, &noise, &cfg).unwrap() - 1.0).abs() < 1e-10);
    assert!(induced_trace_distance_heuristic(&u, &noise, &Metric::InducedTraceHeuristic { restarts: 0, seed: 0 }).is_err());
}

#[test]
fn induced_heuristic_below_diamond() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for i in 0..20 {
        let a = random_channel(&mut rng, 2);
        let b = random_channel(&mut rng, 2);
        let induced = induced_trace_distance_heuristic(&a, &b, &Metric::induced(i)).unwrap();
        let diamond = diamond_distance(&a, &b, TOL).unwrap();
        assert!(induced <= diamond + TOL, "{induced} > {diamond}");
        // Diagonal-free check: a single random pure state never beats the heuristic.
        let start = random_pure_state(2, &mut rng);
        let single = trace_distance(&a.apply(&start).unwrap(), &b.apply(&start).unwrap()).unwrap();
        assert!(single <= induced + 1e-12);
    }
}

#[test]
fn induced_heuristic_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    let a = random_channel(&mut rng, 2);
    let b = random_channel(&mut rng, 2);
    let map = a.sub(&b);
    let seq = induced_trace_norm_heuristic(&map, 16, 7, Execution::Sequential).unwrap();
    let par = induced_trace_norm_heuristic(&map, 16, 7, Execution::Parallel).unwrap();
    assert_eq!(seq.to_bits(), par.to_bits());
}

#[test]
fn benchmark_values() {
    assert_eq!(noise_benchmarks(2), (1.0, 1.5));
    assert_eq!(noise_benchmarks(4), (1.5, 1.875));
    let mut prev = noise_benchmarks(2);
    for d in 3..64 {
        let b = noise_benchmarks(d);
        assert!(b.0 > prev.0 && b.1 > prev.1 && b.0 < 2.0 && b.1 < 2.0);
        prev = b;
    }
}

#[test]
fn metric_axioms_on_random_channels() {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    for _ in 0..5 {
        let (a, b, c) = (random_channel(&mut rng, 2), random_channel(&mut rng, 2), random_channel(&mut rng, 2));
        for metric in [Metric::Diamond, Metric::JDist] {
            let ab = distance(&metric, &a, &b, TOL).unwrap();
            let ba = distance(&metric, &b, &a, TOL).unwrap();
            let bc = distance(&metric, &b, &c, TOL).unwrap();
            let ac = distance(&metric, &a, &c, TOL).unwrap();
            assert!((ab - ba).abs() <= 1e-9 + 2.0 * TOL);
            assert!(ac <= ab + bc + 1e-9 + 3.0 * TOL);
            assert!(distance(&metric, &a, &a, TOL).unwrap() <= 1e-9);
            assert!(ab > 1e-3);
        }
    }
}

#[test]
fn distances_invariant_under_common_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let a = random_channel(&mut rng, 2);
    let b = random_channel(&mut rng, 2);
    let w = SuperOperator::unitary(&random_unitary(&mut rng, 2)).unwrap();
    for metric in [Metric::Diamond, Metric::JDist] {
        let before = distance(&metric, &a, &b, TOL).unwrap();
        let after = distance(&metric, &w.then(&a), &w.then(&b), TOL).unwrap();
        assert!((before - after).abs() <= 1e-8, "{metric}: {before} vs {after}");
    }
}

#[test]
fn chaining_bounds_full_distance() {
    let plan = TrotterPlan::new(ising2(), 0.4, 6).unwrap();
    for noise in [NoiseModel::AvgMtc { sigma: 0.05 }, NoiseModel::Depol { p: 0.01 }] {
        let full = faulty_trotter::<NoRng>(&plan, &noise, None).unwrap();
        let ideal = ideal_map(&plan).unwrap();
        let single = faulty_single_step::<NoRng>(&plan, &noise, None).unwrap();
        let ideal_single = ideal_map(&plan.with_t(plan.step()).unwrap().with_n(1).unwrap()).unwrap();
        for metric in [Metric::Diamond, Metric::JDist] {
            let d_full = distance(&metric, &full, &ideal, TOL).unwrap();
            let d_step = distance(&metric, &single, &ideal_single, TOL).unwrap();
            assert!(d_full <= 6.0 * d_step + 1e-9, "{metric}: {d_full} vs 6 x {d_step}");
        }
    }
}

#[test]
fn averaged_map_beats_average_distance() {
    let plan = TrotterPlan::new(vec![sx(), ComplexMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(0.0, -1.0), c64(0.0, 1.0), c64(0.0, 0.0)])], 2.0, 4)
        .unwrap();
    let ideal = ideal_map(&plan).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(38);
    let runs = 40;
    let samples: Vec<SuperOperator> = (0..runs)
        .map(|_| faulty_trotter(&plan, &NoiseModel::Mtc { sigma: 0.1, seed: 0 }, Some(&mut rng)).unwrap())
        .collect();
    let mut mean_map = SuperOperator::zero(2);
    for s in &samples {
        mean_map = mean_map.add(&s.scale(1.0 / runs as f64));
    }
    for metric in [Metric::Diamond, Metric::JDist] {
        let mean_dist: f64 =
            samples.iter().map(|s| distance(&metric, s, &ideal, TOL).unwrap()).sum::<f64>() / runs as f64;
        let avg_dist = distance(&metric, &mean_map, &ideal, TOL).unwrap();
        assert!(avg_dist <= mean_dist + TOL);
    }
}

#[test]
fn metric_names_roundtrip() {
    for m in [Metric::Diamond, Metric::JDist, Metric::induced(0)] {
        assert_eq!(m.name().parse::<Metric>().unwrap(), m);
    }
    assert!("trace".parse::<Metric>().is_err());
    assert_eq!(Metric::induced(0).benchmark(2), 1.0);
    assert_eq!(Metric::JDist.benchmark(2), 1.5);
}
