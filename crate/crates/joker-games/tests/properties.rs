//! Randomized invariants over generated games: structural soundness of the
//! generator, layer discipline of the solvers, witness correctness, and the
//! agreements between independent computations of the same quantity.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use joker_games::attractor::{attractor, can_reach, joker_attractor};
use joker_games::cost::Cost;
use joker_games::format;
use joker_games::game::{ConcurrentGame, StateId};
use joker_games::generate::{random_game, GenParams};
use joker_games::joker::JokerAction;
use joker_games::oracle;
use joker_games::prob::{p_attr, p_joker_attractor};
use joker_games::sim::{simulate_run, P1Policy, P2Script, P3Script};
use joker_games::strategy::{distances, joker_attractor_strategy, short_joker_strategy};

fn gen_game() -> impl Strategy<Value = (ConcurrentGame, u64)> {
    (
        1usize..=8,
        1usize..=3,
        1usize..=3,
        1usize..=2,
        0.0f64..=1.0,
        0.0f64..=1.0,
        any::<u64>(),
    )
        .prop_map(
            |(states, act1, act2, branching, enable_prob, extra_target_prob, seed)| {
                let params = GenParams {
                    states,
                    act1,
                    act2,
                    branching,
                    goals: 1 + seed as usize % states,
                    enable_prob,
                    extra_target_prob,
                };
                (random_game(&params, seed), seed)
            },
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn generated_games_validate_and_round_trip((game, _) in gen_game()) {
        prop_assert!(game.validate().is_empty());
        let raw = format::to_raw(&game);
        let reparsed: format::RawGame =
            serde_json::from_str(&serde_json::to_string(&raw).unwrap()).unwrap();
        prop_assert_eq!(&raw, &reparsed);
        prop_assert!(reparsed.compile().is_ok());
    }

    #[test]
    fn layers_grow_and_ranks_point_at_their_first_layer((game, _) in gen_game()) {
        let ja = joker_attractor(&game, game.goals());
        for window in ja.layers.windows(2) {
            prop_assert!(window[0].is_subset(&window[1]));
        }
        for q in game.state_ids() {
            match ja.j_rank(q) {
                Cost::Fin(k) => {
                    let k = k as usize;
                    prop_assert!(ja.layers[k].contains(&q));
                    prop_assert!(k == 0 || !ja.layers[k - 1].contains(&q));
                }
                Cost::Inf => prop_assert!(!ja.members().contains(&q)),
            }
        }
    }

    #[test]
    fn the_three_membership_notions_coincide((game, _) in gen_game()) {
        // Backward reachability, the layered Joker solution, and its
        // almost-sure refinement agree on who can win at all.
        let reach = can_reach(&game, game.goals());
        let ja = joker_attractor(&game, game.goals());
        let pja = p_joker_attractor(&game, game.goals());
        prop_assert_eq!(ja.members(), &reach);
        prop_assert_eq!(pja.members(), &reach);

        // Mixing only ever helps: almost-sure layers engulf the sure ones.
        for (k, layer) in ja.layers.iter().enumerate() {
            prop_assert!(layer.is_subset(&pja.layers[k.min(pja.layers.len() - 1)]));
        }
        for q in game.state_ids() {
            prop_assert!(pja.pj_rank(q) <= ja.j_rank(q));
        }
    }

    #[test]
    fn randomization_cannot_shrink_the_plain_attractor((game, _) in gen_game()) {
        let sure = attractor(&game, game.goals());
        let almost = p_attr(&game, game.goals());
        prop_assert!(sure.members().is_subset(&almost.members));
    }

    #[test]
    fn value_iteration_reproduces_the_layered_ranks((game, _) in gen_game()) {
        let ja = joker_attractor(&game, game.goals());
        let vt = oracle::value_iterate(&game);
        for q in game.state_ids() {
            prop_assert_eq!(vt.v(q), ja.j_rank(q), "at {}", game.state_name(q));
        }
    }

    #[test]
    fn budgeted_search_agrees_with_the_distance_table((game, _) in gen_game()) {
        let ja = joker_attractor(&game, game.goals());
        let dt = distances(&game, &ja);
        for &q in ja.members() {
            let Cost::Fin(budget) = ja.j_rank(q) else { unreachable!() };
            prop_assert_eq!(
                oracle::cooperative_shortest(&game, &ja, q, budget),
                dt.d[q.0],
                "at {}",
                game.state_name(q)
            );
        }
    }

    #[test]
    fn witnesses_are_sound((game, _) in gen_game()) {
        let ja = joker_attractor(&game, game.goals());
        // A Joker witness at rank k lands in layer k-1 in one move.
        for (&q, triples) in &ja.joker_witness {
            let Cost::Fin(k) = ja.j_rank(q) else { unreachable!() };
            prop_assert!(k >= 1);
            prop_assert!(!triples.is_empty());
            for &(a, x, to) in triples {
                prop_assert!(game.moves(q, a, x).contains(&to));
                prop_assert!(ja.layers[k as usize - 1].contains(&to));
            }
        }
        // A base-attractor witness forces all resolutions below the state's
        // own layer.
        for (&q, actions) in &ja.base.witness {
            let Cost::Fin(r) = ja.base.rank[q.0] else { unreachable!() };
            for &a in actions {
                for &x in game.enabled2(q) {
                    let targets = game.moves(q, a, x);
                    prop_assert!(!targets.is_empty());
                    for &t in targets {
                        prop_assert!(ja.base.layers[r as usize - 1].contains(&t));
                    }
                }
            }
        }
    }

    #[test]
    fn strategies_cover_exactly_the_winnable_non_goals((game, _) in gen_game()) {
        let ja = joker_attractor(&game, game.goals());
        for strat in [
            joker_attractor_strategy(&ja),
            short_joker_strategy(&game, &ja),
        ] {
            for q in game.state_ids() {
                let expected = ja.members().contains(&q) && !game.is_goal(q);
                prop_assert_eq!(
                    strat.choice.contains_key(&q),
                    expected,
                    "{} at {}",
                    &strat.label,
                    game.state_name(q)
                );
            }
        }
    }

    #[test]
    fn flattening_jokers_is_idempotent((game, _) in gen_game()) {
        let ja = joker_attractor(&game, game.goals());
        let inspired = joker_attractor_strategy(&ja).inspired();
        for action in inspired.choice.values() {
            prop_assert!(matches!(action, JokerAction::Regular(_)));
        }
        let twice = inspired.inspired();
        prop_assert_eq!(&inspired.choice, &twice.choice);
    }

    #[test]
    fn simulated_steps_obey_the_move_relation((game, seed) in gen_game()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rec = simulate_run(
            &game,
            P1Policy::Uniform,
            &P2Script::Uniform,
            &P3Script::Uniform,
            game.initial(),
            4 * game.n_states() + 4,
            &mut rng,
        );
        let play = &rec.play;
        for (i, (action, x)) in play.actions.iter().enumerate() {
            let q = play.states[i];
            let next = play.states[i + 1];
            match *action {
                JokerAction::Regular(a) => {
                    prop_assert!(game.enabled1(q).contains(&a));
                    prop_assert!(game.enabled2(q).contains(x));
                    prop_assert!(game.moves(q, a, *x).contains(&next));
                }
                JokerAction::Joker { a, x: jx, to } => {
                    prop_assert_eq!(*x, jx);
                    prop_assert!(game.moves(q, a, jx).contains(&to));
                    prop_assert_eq!(next, to);
                }
            }
        }
    }

    #[test]
    fn worst_case_spend_of_the_attractor_strategy_is_the_rank((game, _) in gen_game()) {
        use joker_games::joker::strategy_cost;
        let ja = joker_attractor(&game, game.goals());
        let strat = joker_attractor_strategy(&ja);
        for &q in ja.members() {
            prop_assert_eq!(strategy_cost(&game, &strat, q), ja.j_rank(q));
        }
        // And from outside, no strategy helps: there is not even a path.
        let reach = can_reach(&game, game.goals());
        for q in game.state_ids() {
            if !reach.contains(&q) {
                let post: BTreeSet<StateId> = game.post(q);
                prop_assert!(post.is_disjoint(&reach));
            }
        }
    }
}
