use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reflex_core::dynamics::{
    cournot_play, cournot_play_finite, fictitious_play, finite_indicator_play, indicator_play, real_points,
    reflexive_trajectory, reinforcement_play, Action, StepSchedule, TieBreak, Trajectory,
};
use reflex_core::game::{matching_pennies, ContinuousGame};
use reflex_core::strategic::ReflexivePartition;
use reflex_core::{Game, MixedStrategy};

/// Cournot reaction of one firm to the others' total, clipped to `[0, theta]`.
fn reaction(theta: f64, c: f64, others: f64) -> f64 {
    ((theta - c - others) / 2.0).clamp(0.0, theta)
}

fn reals(t: &Trajectory) -> Vec<Vec<f64>> {
    t.reals().unwrap()
}

#[test]
fn unit_steps_follow_hand_iterated_reactions() {
    let game = ContinuousGame::cournot(2, 10.0, 1.0).unwrap();
    let traj = cournot_play(&game, &[0.0, 0.0], 10).unwrap();
    let mut x = [0.0f64, 0.0];
    for (t, got) in reals(&traj).into_iter().enumerate() {
        for i in 0..2 {
            assert!((got[i] - x[i]).abs() < 1e-12, "stage {t}");
        }
        x = [reaction(10.0, 1.0, x[1]), reaction(10.0, 1.0, x[0])];
    }
    let first: Vec<f64> = reals(&traj).iter().skip(1).take(3).map(|s| s[0]).collect();
    assert_eq!(first, vec![4.5, 2.25, 3.375]);
}

#[test]
fn half_steps_reach_cournot_nash() {
    let game = ContinuousGame::cournot(2, 10.0, 1.0).unwrap();
    let traj = indicator_play(&game, &real_points(&[0.0, 0.0]), &StepSchedule::Constant { gamma: 0.5 }, 200).unwrap();
    let nash = game.cournot_nash().unwrap();
    assert_eq!(nash, vec![3.0, 3.0]);
    let hit = reals(&traj).iter().position(|x| x.iter().zip(&nash).all(|(a, b)| (a - b).abs() < 1e-6));
    assert!(hit.is_some_and(|t| t <= 200), "first stage within 1e-6: {hit:?}");
}

#[test]
fn indicator_paths_stay_inside_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let n = rng.gen_range(2..=4);
        let theta = rng.gen_range(2.0..20.0);
        let game = ContinuousGame::cournot(n, theta, rng.gen_range(0.0..1.0)).unwrap();
        let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..theta)).collect();
        let sched = StepSchedule::Constant { gamma: rng.gen_range(0.0..=1.0) };
        for x in reals(&indicator_play(&game, &real_points(&x0), &sched, 50).unwrap()) {
            assert!(x.iter().all(|&v| (0.0..=theta).contains(&v)));
        }
        let sched = StepSchedule::Harmonic { c: 1.0 };
        for x in reals(&indicator_play(&game, &real_points(&x0), &sched, 50).unwrap()) {
            assert!(x.iter().all(|&v| (0.0..=theta).contains(&v)));
        }
    }
}

fn actions_close(a: &Trajectory, b: &Trajectory) -> bool {
    a.stages.len() == b.stages.len()
        && a.stages.iter().zip(&b.stages).all(|(s, r)| {
            s.actions.iter().zip(&r.actions).all(|(x, y)| match (x, y) {
                (Action::Real(p), Action::Real(q)) => (p - q).abs() <= 1e-12,
                (Action::Mixed(p), Action::Mixed(q)) => p.iter().zip(q).all(|(u, v)| (u - v).abs() <= 1e-12),
                _ => false,
            })
        })
}

#[test]
fn all_rank_zero_reflexive_is_plain_indicator() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..20 {
        let n = rng.gen_range(2..=4);
        let sched = StepSchedule::Constant { gamma: rng.gen_range(0.05..=1.0) };
        let all0 = ReflexivePartition::all_rank0(n);
        if case % 2 == 0 {
            let theta = rng.gen_range(5.0..15.0);
            let game = ContinuousGame::cournot(n, theta, 1.0).unwrap();
            let x0 = real_points(&(0..n).map(|_| rng.gen_range(0.0..theta)).collect::<Vec<_>>());
            let plain = indicator_play(&game, &x0, &sched, 30).unwrap();
            let refl = reflexive_trajectory(&game, &all0, &x0, &sched, 30).unwrap();
            assert!(actions_close(&plain, &refl), "case {case}");
        } else {
            let counts: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=3)).collect();
            let game = Game::random(&counts, &mut rng);
            let s0: Vec<MixedStrategy> = counts.iter().map(|&k| MixedStrategy::uniform(k)).collect();
            let plain = finite_indicator_play(&game, &s0, &sched, 30).unwrap();
            let x0: Vec<Vec<f64>> = s0.iter().map(|s| s.probs().to_vec()).collect();
            let refl = reflexive_trajectory(&game, &all0, &x0, &sched, 30).unwrap();
            assert!(actions_close(&plain, &refl), "case {case}");
        }
    }
}

#[test]
fn two_agent_unroll() {
    // agent 2 at rank 0, agent 1 at rank 1, unit steps
    let game = ContinuousGame::cournot(2, 10.0, 1.0).unwrap();
    let part = ReflexivePartition::new(vec![vec![1], vec![0]], 2).unwrap();
    let traj = reflexive_trajectory(&game, &part, &real_points(&[1.0, 7.0]), &StepSchedule::Constant { gamma: 1.0 }, 5).unwrap();
    let br = |y: f64| reaction(10.0, 1.0, y);
    let mut x = [1.0, 7.0];
    for stage in traj.stages.iter().skip(1) {
        let expected_2 = br(x[0]);
        let expected_1 = br(expected_2);
        x = [expected_1, expected_2];
        let got: Vec<f64> = stage.actions.iter().map(|a| a.as_real().unwrap()).collect();
        assert!((got[0] - x[0]).abs() < 1e-12 && (got[1] - x[1]).abs() < 1e-12, "stage {}", stage.t);
        let f = stage.forecasts.as_ref().unwrap();
        assert!((f[0][1].as_real().unwrap() - expected_2).abs() < 1e-12);
    }
}

#[test]
fn three_agent_unroll() {
    // agents 3, 2, 1 at ranks 0, 1, 2
    let (theta, c, gamma) = (12.0, 0.5, 0.6);
    let game = ContinuousGame::cournot(3, theta, c).unwrap();
    let part = ReflexivePartition::new(vec![vec![2], vec![1], vec![0]], 3).unwrap();
    let start = [2.0, 5.0, 1.0];
    let traj = reflexive_trajectory(&game, &part, &real_points(&start), &StepSchedule::Constant { gamma }, 5).unwrap();
    let step = |from: f64, to: f64| from + gamma * (to - from);
    let mut x = start;
    for stage in traj.stages.iter().skip(1) {
        let r0 = |l: usize| step(x[l], reaction(theta, c, x.iter().enumerate().filter(|&(m, _)| m != l).map(|(_, v)| v).sum()));
        let (r0_a, r0_c) = (r0(0), r0(2));
        let prev = x;
        // agent 2 at rank 1 expects agents 1 and 3 at rank 0
        let r1_b = step(x[1], reaction(theta, c, r0_a + r0_c));
        // agent 1 at rank 2 keeps agent 3 at rank 0 and agent 2 at rank 1
        let r2_a = step(x[0], reaction(theta, c, r1_b + r0_c));
        x = [r2_a, r1_b, r0_c];
        let got: Vec<f64> = stage.actions.iter().map(|a| a.as_real().unwrap()).collect();
        for i in 0..3 {
            assert!((got[i] - x[i]).abs() < 1e-12, "stage {} agent {}", stage.t, i + 1);
        }
        let f = stage.forecasts.as_ref().unwrap();
        let view = |j: usize| f[j].iter().map(|a| a.as_real().unwrap()).collect::<Vec<_>>();
        let close = |a: Vec<f64>, b: [f64; 3]| a.iter().zip(b).all(|(p, q)| (p - q).abs() < 1e-12);
        assert!(close(view(0), [r2_a, r1_b, r0_c]));
        assert!(close(view(1), [r0_a, r1_b, r0_c]));
        // rank 0 sees last stage's profile
        assert!(close(view(2), [prev[0], prev[1], r0_c]));
    }
}

#[test]
fn fictitious_play_on_matching_pennies() {
    let game = matching_pennies();
    for tie in [TieBreak::LowestIndex, TieBreak::UniformRandom { seed: 11 }] {
        let start = Instant::now();
        let fp = fictitious_play(&game, &[0, 0], 20_000, tie).unwrap();
        let elapsed = start.elapsed().as_secs_f64();
        for f in &fp.frequencies {
            assert!(f.probs().iter().all(|p| (p - 0.5).abs() <= 0.05), "{tie:?}: {:?}", f.probs());
        }
        assert!(fp.counts.iter().all(|c| c.iter().sum::<u64>() == 20_001));
        println!("fp {tie:?}: {elapsed:.3}s");
    }
}

#[test]
fn finite_cournot_is_absorbed_at_a_strict_equilibrium() {
    // row has dominant action 0, column matches the row
    let game = Game::new(Game::default_labels(&[2, 2]), vec![3.0, 3.0, 1.0, 0.0, 0.0, 1.0, 0.5, 2.0]).unwrap();
    for start in [[0, 0], [0, 1], [1, 0], [1, 1]] {
        let t = cournot_play_finite(&game, &start, 10).unwrap();
        let pures = t.pures().unwrap();
        let when = pures.iter().position(|p| p == &vec![0, 0]).unwrap();
        assert!(when <= 4, "start {start:?}");
        assert!(pures[when..].iter().all(|p| p == &vec![0, 0]), "start {start:?}");
    }
}

#[test]
fn reinforcement_locks_onto_dominant_action() {
    // action 1 beats action 0 by 2 for both agents whatever the other does
    let game = Game::from_fn(Game::default_labels(&[2, 2]), |p| {
        vec![1.0 + 2.0 * p[0] as f64 + p[1] as f64, 1.0 + 2.0 * p[1] as f64 + p[0] as f64]
    })
    .unwrap();
    for seed in 0..5 {
        let r = reinforcement_play(&game, 5000, 1.0, seed).unwrap();
        let pures = r.trajectory.pures().unwrap();
        let tail = &pures[pures.len() - 1000..];
        for i in 0..2 {
            let share = tail.iter().filter(|p| p[i] == 1).count() as f64 / 1000.0;
            assert!(share >= 0.9, "seed {seed} agent {}: {share}", i + 1);
        }
    }
}

#[test]
fn reinforcement_shift_zeroes_the_minimum() {
    let game = reflex_core::game::prisoners_dilemma().affine_transform(1, 1.0, -4.0);
    let r = reinforcement_play(&game, 10, 1.0, 0).unwrap();
    assert_eq!(r.shifts, vec![0.0, 4.0]);
}

#[test]
fn reinforcement_with_constant_payoffs_stays_uniform() {
    let game = Game::new(Game::default_labels(&[3, 3]), vec![2.5; 18]).unwrap();
    let r = reinforcement_play(&game, 3000, 1.0, 99).unwrap();
    // shifted payoffs are zero so propensities never move
    assert!(r.propensities.iter().all(|q| q.iter().all(|&v| v == 1.0)));
    let pures = r.trajectory.pures().unwrap();
    for a in 0..3 {
        let share = pures.iter().filter(|p| p[0] == a).count() as f64 / pures.len() as f64;
        assert!((share - 1.0 / 3.0).abs() < 0.05);
    }
}

#[test]
fn reruns_are_identical() {
    let game = matching_pennies();
    let a = reinforcement_play(&game, 500, 1.0, 5).unwrap();
    let b = reinforcement_play(&game, 500, 1.0, 5).unwrap();
    assert_eq!(a, b);
    let c = fictitious_play(&game, &[1, 0], 500, TieBreak::UniformRandom { seed: 3 }).unwrap();
    let d = fictitious_play(&game, &[1, 0], 500, TieBreak::UniformRandom { seed: 3 }).unwrap();
    assert_eq!(c, d);
}
