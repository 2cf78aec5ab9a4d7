use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reflex_core::game::{action_utilities, expected_utility, p_beauty, prisoners_dilemma, qbr};
use reflex_core::strategic::{
    fit_grid, hierarchy_rank, hierarchy_strategies, level_distribution, log_likelihood, rank_game,
    reflexive_partition_equilibrium, subjective_belief, BeliefKind, BeliefModel, ModelFamily, ParamGrid,
    PartitionAwareness, Rank0Model, RankDistribution, RankSpec, ReflexivePartition,
};
use reflex_core::{Error, Game, MixedStrategy, Profile, ResponseModel};

fn uniform_rule() -> std::sync::Arc<dyn reflex_core::strategic::Rank0Rule> {
    Rank0Model::Uniform.rule()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

/// Expected payoff of a pure action against independent opponent mixtures,
/// summed over every opponent profile.
fn eu_oracle(game: &Game, i: usize, a: usize, opp: &[Vec<f64>]) -> f64 {
    let counts = game.action_counts();
    let mut total = 0.0;
    let mut profile = vec![0usize; counts.len()];
    loop {
        if profile[i] == a {
            let w: f64 = (0..counts.len()).filter(|&j| j != i).map(|j| opp[j][profile[j]]).product();
            total += w * game.payoff(&profile, i);
        }
        let mut k = counts.len();
        loop {
            if k == 0 {
                return total;
            }
            k -= 1;
            profile[k] += 1;
            if profile[k] < counts[k] {
                break;
            }
            profile[k] = 0;
        }
    }
}

fn br_oracle(game: &Game, i: usize, opp: &[Vec<f64>]) -> Vec<f64> {
    let u: Vec<f64> = (0..game.n_actions(i)).map(|a| eu_oracle(game, i, a, opp)).collect();
    let top = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let set: Vec<usize> = (0..u.len()).filter(|&a| u[a] >= top - 1e-9).collect();
    (0..u.len()).map(|a| if set.contains(&a) { 1.0 / set.len() as f64 } else { 0.0 }).collect()
}

// Rank-k strategy of the 3-player p-beauty game against opponents that each
// play `opp` over guesses 0..=100. Distances compare exactly as |9g - 2S|.
fn beauty_rank_oracle(opp: &[f64]) -> Vec<f64> {
    let support: Vec<(usize, f64)> = opp.iter().copied().enumerate().filter(|&(_, p)| p > 0.0).collect();
    let mut u = vec![0.0; 101];
    for (g, slot) in u.iter_mut().enumerate() {
        for &(h, ph) in &support {
            for &(k, pk) in &support {
                let s = (g + h + k) as i64;
                let d = |x: usize| (9 * x as i64 - 2 * s).abs();
                let best = d(g).min(d(h)).min(d(k));
                if d(g) == best {
                    let winners = [g, h, k].iter().filter(|&&x| d(x) == best).count();
                    *slot += ph * pk / winners as f64;
                }
            }
        }
    }
    let top = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let set: Vec<usize> = (0..101).filter(|&a| u[a] >= top - 1e-9).collect();
    (0..101).map(|a| if set.contains(&a) { 1.0 / set.len() as f64 } else { 0.0 }).collect()
}

#[test]
fn p_beauty_level_k_matches_brute_force() {
    let game = p_beauty(3, 0, 100, 2.0 / 3.0).unwrap();
    let sol = hierarchy_strategies(&game, 2, &BeliefModel::LevelK, uniform_rule().as_ref(), ResponseModel::Best).unwrap();
    let rank1 = beauty_rank_oracle(&[1.0 / 101.0; 101]);
    let rank2 = beauty_rank_oracle(&rank1);
    for j in 0..3 {
        assert!(close(sol.strategy(j, 1).probs(), &rank1, 1e-12));
        assert!(close(sol.strategy(j, 2).probs(), &rank2, 1e-12));
    }
    // with the own guess in the mean the guesses sit below 100 * (2/3)^k
    let first = |s: &[f64]| s.iter().position(|&p| p > 0.0).unwrap();
    println!("p-beauty rank 1 plays {}, rank 2 plays {}", first(&rank1), first(&rank2));
    assert!(first(&rank2) < first(&rank1) && first(&rank1) < 50);
}

#[test]
fn level_one_qbr_is_qbr_against_uniform() {
    for seed in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let game = Game::random(&[2, 2], &mut rng);
        let lambda = rng.gen_range(0.1..5.0);
        let sol = hierarchy_strategies(&game, 1, &BeliefModel::LevelK, uniform_rule().as_ref(), ResponseModel::Qbr { lambda }).unwrap();
        let uni = Profile::mixed(vec![MixedStrategy::uniform(2); 2]);
        for j in 0..2 {
            assert_eq!(sol.strategy(j, 1), &qbr(&game, &uni, j, lambda).unwrap());
        }
    }
}

#[test]
fn rpm_three_agent_hand_oracle() {
    for seed in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(500 + seed);
        let game = Game::random(&[3, 2, 3], &mut rng);
        // agents 3, 2, 1 at ranks 0, 1, 2
        let partition = ReflexivePartition::new(vec![vec![2], vec![1], vec![0]], 3).unwrap();
        let eq = reflexive_partition_equilibrium(&game, &partition, PartitionAwareness::RpmStyle, uniform_rule().as_ref(), ResponseModel::Best)
            .unwrap();
        let u: Vec<Vec<f64>> = (0..3).map(|i| vec![1.0 / game.n_actions(i) as f64; game.n_actions(i)]).collect();
        // agent 3: rank 0
        let s3 = u[2].clone();
        // agent 2 at rank 1 takes both others for rank 0
        let s2 = br_oracle(&game, 1, &[u[0].clone(), vec![], u[2].clone()]);
        // agent 1 builds N0 = {3}, N1 = {2}; agent 2 in that view is the same rank-1 reasoner
        let s1 = br_oracle(&game, 0, &[vec![], s2.clone(), s3.clone()]);
        assert!(close(eq[0].probs(), &s1, 1e-12), "seed {seed}");
        assert!(close(eq[1].probs(), &s2, 1e-12));
        assert!(close(eq[2].probs(), &s3, 1e-12));
    }
}

#[test]
fn two_rank_one_agents_answer_rank_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let game = Game::random(&[3, 3], &mut rng);
    let partition = ReflexivePartition::new(vec![vec![], vec![0, 1]], 2).unwrap();
    for style in [PartitionAwareness::RpmStyle, PartitionAwareness::LevelKStyle] {
        let eq = reflexive_partition_equilibrium(&game, &partition, style, uniform_rule().as_ref(), ResponseModel::Best).unwrap();
        let u = vec![1.0 / 3.0; 3];
        assert!(close(eq[0].probs(), &br_oracle(&game, 0, &[vec![], u.clone()]), 1e-12));
        assert!(close(eq[1].probs(), &br_oracle(&game, 1, &[u.clone(), vec![]]), 1e-12));
    }
}

#[test]
fn rank_game_nine_entries() {
    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(900 + seed);
        let game = Game::random(&[2, 2], &mut rng);
        let dist = level_distribution(RankSpec::Poisson { tau: 1.2 }, 2).unwrap();
        for belief in [BeliefModel::LevelK, BeliefModel::Ch { dist, alpha: 1.0 }] {
            let response = ResponseModel::Qbr { lambda: 1.5 };
            let rg = rank_game(&game, 2, &belief, uniform_rule().as_ref(), response).unwrap();
            let sol = hierarchy_strategies(&game, 2, &belief, uniform_rule().as_ref(), response).unwrap();
            assert_eq!(rg.action_counts(), vec![3, 3]);
            for r1 in 0..3 {
                for r2 in 0..3 {
                    let (p, q) = (sol.strategy(0, r1).probs(), sol.strategy(1, r2).probs());
                    for i in 0..2 {
                        let mut v = 0.0;
                        for a in 0..2 {
                            for b in 0..2 {
                                v += p[a] * q[b] * game.payoff(&[a, b], i);
                            }
                        }
                        assert!((rg.payoff(&[r1, r2], i) - v).abs() < 1e-12);
                    }
                }
            }
        }
    }
}

#[test]
fn rank_game_needs_two_players() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let game = Game::random(&[2, 2, 2], &mut rng);
    let err = rank_game(&game, 1, &BeliefModel::LevelK, uniform_rule().as_ref(), ResponseModel::Best).unwrap_err();
    assert!(matches!(err, Error::Domain(_)));
}

fn poisson_pmf(tau: f64, k: usize) -> f64 {
    let mut fact = 1.0;
    for j in 1..=k {
        fact *= j as f64;
    }
    (-tau).exp() * tau.powi(k as i32) / fact
}

#[test]
fn gch_alpha_one_is_ch_on_50_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..50 {
        let tau = rng.gen_range(0.1..4.0);
        let m = rng.gen_range(1..=10);
        let k = rng.gen_range(1..=m);
        let dist = level_distribution(RankSpec::Poisson { tau }, m).unwrap();
        let raw: Vec<f64> = (0..=m).map(|j| poisson_pmf(tau, j)).collect();
        let z: f64 = raw.iter().sum();
        let f: Vec<f64> = raw.iter().map(|x| x / z).collect();
        assert!(close(dist.weights(), &f, 1e-12));
        let lower: f64 = f[..k].iter().sum();
        let ch: Vec<f64> = f[..k].iter().map(|x| x / lower).collect();
        let gch = subjective_belief(&dist, k, 1.0).unwrap();
        assert!(close(gch.weights(), &ch, 1e-12), "tau {tau} m {m} k {k}");
    }
}

#[test]
fn poisson_truncations() {
    let d = level_distribution(RankSpec::Poisson { tau: 1.5 }, 1).unwrap();
    assert!(close(d.weights(), &[0.4, 0.6], 1e-12));
    let wide = level_distribution(RankSpec::Poisson { tau: 1.5 }, 6).unwrap();
    assert!(close(subjective_belief(&wide, 2, 1.0).unwrap().weights(), &[0.4, 0.6], 1e-12));
    let tiny = level_distribution(RankSpec::Poisson { tau: 1e-9 }, 5).unwrap();
    assert!(tiny.weights()[0] > 1.0 - 1e-8);
    let spike0 = level_distribution(RankSpec::SpikePoisson { tau: 2.0, epsilon: 0.0 }, 4).unwrap();
    assert_eq!(spike0.weights(), level_distribution(RankSpec::Poisson { tau: 2.0 }, 4).unwrap().weights());
    let tilted = subjective_belief(&RankDistribution::explicit(vec![0.4, 0.6, 0.0]).unwrap(), 2, 400.0).unwrap();
    assert!(tilted.weights()[1] > 1.0 - 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn subjective_beliefs_live_below_k(tau in 0.05f64..5.0, m in 1usize..12, pick in 0usize..100, alpha in 1.0f64..6.0) {
        let k = 1 + pick % m;
        let dist = level_distribution(RankSpec::Poisson { tau }, m).unwrap();
        let b = subjective_belief(&dist, k, alpha).unwrap();
        prop_assert_eq!(b.weights().len(), k);
        prop_assert!((b.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_k_ignores_higher_ranks(seed in any::<u64>(), k in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let game = Game::random(&[3, 2], &mut rng);
        let dist = level_distribution(RankSpec::Poisson { tau: 1.3 }, 4).unwrap();
        for belief in [BeliefModel::LevelK, BeliefModel::Ch { dist: dist.clone(), alpha: 1.5 }] {
            let response = ResponseModel::Qbr { lambda: 2.0 };
            let sol = hierarchy_strategies(&game, 4, &belief, uniform_rule().as_ref(), response).unwrap();
            let mut perturbed = sol.by_rank.clone();
            for rank in perturbed.iter_mut().skip(k) {
                for (j, s) in rank.iter_mut().enumerate() {
                    *s = MixedStrategy::pure(game.n_actions(j), rng.gen_range(0..game.n_actions(j)));
                }
            }
            let again = hierarchy_rank(&game, &perturbed, k, &belief, response).unwrap();
            prop_assert_eq!(&again, &sol.by_rank[k]);
        }
    }

    #[test]
    fn hierarchy_argmax_invariant_under_affine_maps(seed in any::<u64>(), scale in 0.2f64..5.0, shift in -10.0f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let game = Game::random(&[3, 3], &mut rng);
        let moved = game.affine_transform(0, scale, shift).affine_transform(1, scale * 1.7, -shift);
        let dist = level_distribution(RankSpec::Poisson { tau: 1.5 }, 3).unwrap();
        for model in Rank0Model::ALL {
            for belief in [BeliefModel::LevelK, BeliefModel::Ch { dist: dist.clone(), alpha: 1.0 }] {
                let a = hierarchy_strategies(&game, 3, &belief, model.rule().as_ref(), ResponseModel::Best).unwrap();
                let b = hierarchy_strategies(&moved, 3, &belief, model.rule().as_ref(), ResponseModel::Best).unwrap();
                prop_assert_eq!(a.by_rank, b.by_rank);
            }
        }
    }

    #[test]
    fn partition_equilibrium_always_exists(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=4);
        let counts: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=3)).collect();
        let game = Game::random(&counts, &mut rng);
        let m = rng.gen_range(0..=3);
        let mut classes = vec![Vec::new(); m + 1];
        for j in 0..n {
            classes[rng.gen_range(0..=m)].push(j);
        }
        let partition = ReflexivePartition::new(classes, n).unwrap();
        for style in [PartitionAwareness::RpmStyle, PartitionAwareness::LevelKStyle] {
            let eq = reflexive_partition_equilibrium(&game, &partition, style, uniform_rule().as_ref(), ResponseModel::Qbr { lambda: 1.0 }).unwrap();
            prop_assert_eq!(eq.len(), n);
        }
    }
}

#[test]
fn level_k_and_ch_agree_at_rank_one() {
    for seed in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let game = Game::random(&[3, 4], &mut rng);
        let dist = level_distribution(RankSpec::Poisson { tau: 2.0 }, 1).unwrap();
        let lk = hierarchy_strategies(&game, 1, &BeliefModel::LevelK, uniform_rule().as_ref(), ResponseModel::Best).unwrap();
        let ch = hierarchy_strategies(&game, 1, &BeliefModel::Ch { dist, alpha: 3.0 }, uniform_rule().as_ref(), ResponseModel::Best).unwrap();
        assert_eq!(lk.by_rank, ch.by_rank);
    }
}

#[test]
fn dominance_propagates_through_every_solver() {
    let pd = prisoners_dilemma();
    let dist = level_distribution(RankSpec::Poisson { tau: 1.5 }, 5).unwrap();
    for response in [ResponseModel::Best, ResponseModel::Qbr { lambda: 5.0 }] {
        for belief in [BeliefModel::LevelK, BeliefModel::Ch { dist: dist.clone(), alpha: 1.0 }] {
            let sol = hierarchy_strategies(&pd, 5, &belief, uniform_rule().as_ref(), response).unwrap();
            for k in 1..=5 {
                for j in 0..2 {
                    assert!(sol.strategy(j, k).prob(1) >= 0.99);
                }
            }
        }
    }
}

#[test]
fn log_likelihood_direct_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let model: Vec<MixedStrategy> = (0..3)
        .map(|_| {
            let w: Vec<f64> = (0..4).map(|_| rng.gen_range(0.0..1.0)).collect();
            let z: f64 = w.iter().sum();
            MixedStrategy::new(w.iter().map(|x| x / z).collect()).unwrap()
        })
        .collect();
    let counts: Vec<Vec<u64>> = (0..3).map(|_| (0..4).map(|_| rng.gen_range(0..50)).collect()).collect();
    let mut direct = 0.0;
    for j in 0..3 {
        for a in 0..4 {
            direct += counts[j][a] as f64 * model[j].prob(a).max(1e-10).ln();
        }
    }
    assert!((log_likelihood(&model, &counts).unwrap() - direct).abs() < 1e-9);
    let uni = vec![MixedStrategy::uniform(2)];
    assert!((log_likelihood(&uni, &[vec![3, 1]]).unwrap() - 4.0 * 0.5f64.ln()).abs() < 1e-15);
    assert_eq!(log_likelihood(&[MixedStrategy::pure(2, 0)], &[vec![9, 0]]).unwrap(), 0.0);
}

#[test]
fn fit_grid_recovers_generating_parameters() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let game = Game::random(&[3, 3], &mut rng);
    let family = ModelFamily { belief: BeliefKind::Ch, quantal: true, spike: false, max_rank: 4, rank0: Rank0Model::Uniform };
    let truth = reflex_core::strategic::FitParams { tau: 1.5, lambda: Some(2.0), alpha: 1.0, epsilon: 0.0 };
    let predicted = family.predict(&game, &truth).unwrap();
    let counts: Vec<Vec<u64>> = predicted.iter().map(|s| s.probs().iter().map(|p| (p * 1e5).round() as u64).collect()).collect();
    let grid = ParamGrid {
        tau: vec![0.5, 1.0, 1.5, 2.0, 2.5],
        lambda: vec![0.5, 1.0, 2.0, 4.0],
        alpha: vec![1.0],
        epsilon: vec![],
    };
    let fit = fit_grid(&game, &counts, &family, &grid).unwrap();
    assert_eq!((fit.params.tau, fit.params.lambda), (1.5, Some(2.0)));
    assert_eq!(fit.evaluated, 20);

    let single = ParamGrid { tau: vec![0.7], lambda: vec![3.0], alpha: vec![1.0], epsilon: vec![] };
    let fit = fit_grid(&game, &counts, &family, &single).unwrap();
    assert_eq!((fit.params.tau, fit.params.lambda), (0.7, Some(3.0)));

    let zeros = vec![vec![0u64; 3]; 2];
    assert!(matches!(fit_grid(&game, &zeros, &family, &grid), Err(Error::EmptyData(_))));
}

#[test]
fn action_utilities_agree_with_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let game = Game::random(&[2, 3, 2], &mut rng);
    let opp = vec![vec![0.3, 0.7], vec![0.2, 0.5, 0.3], vec![0.9, 0.1]];
    let profile = Profile::mixed(opp.iter().map(|p| MixedStrategy::new(p.clone()).unwrap()).collect());
    for i in 0..3 {
        let u = action_utilities(&game, &profile, i).unwrap();
        for a in 0..game.n_actions(i) {
            assert!((u[a] - eu_oracle(&game, i, a, &opp)).abs() < 1e-12);
        }
        let eu = expected_utility(&game, &profile, i).unwrap();
        let direct: f64 = (0..game.n_actions(i)).map(|a| opp[i][a] * eu_oracle(&game, i, a, &opp)).sum();
        assert!((eu - direct).abs() < 1e-12);
    }
}
