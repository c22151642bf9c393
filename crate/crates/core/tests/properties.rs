mod common;

use std::collections::BTreeSet;

use common::{random_partition, random_zero_sum, rng, small_structure};
use dgms::digraph::{condense, scc_decompose, Digraph, VertexId};
use dgms::format::{parse_game, render_game};
use dgms::game::{Player, PositionalStructure, StrategyProfile, UtilityFunction, Value, WinLosePartition};
use dgms::oracle::Oracle;
use dgms::winlose::{attractor, solve_winlose};
use dgms::zerosum::solve_zerosum;
use proptest::prelude::*;

fn arbitrary_digraph() -> impl Strategy<Value = Digraph> {
    (1usize..=9).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..=3 * n).prop_map(move |pairs| {
            let mut g = Digraph::new();
            for v in 0..n {
                g.add_vertex(&format!("x{v}")).unwrap();
            }
            for (a, b) in pairs {
                // a second loop is rejected; skip it
                let _ = g.add_edge(a, b);
            }
            g
        })
    })
}

fn closure(g: &Digraph) -> Vec<Vec<bool>> {
    let n = g.vertex_count();
    let mut reach = vec![vec![false; n]; n];
    for (v, row) in reach.iter_mut().enumerate() {
        row[v] = true;
        for w in g.successors(v) {
            row[w] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    reach
}

/// The attractor by repeated sweeps until nothing changes.
fn naive_attractor(s: &PositionalStructure, region: &[VertexId], targets: &BTreeSet<VertexId>, p: Player) -> BTreeSet<VertexId> {
    let g = s.digraph();
    let mut set = targets.clone();
    loop {
        let mut grew = false;
        for &v in region {
            if set.contains(&v) {
                continue;
            }
            let mut succ = g.successors(v);
            let add = if s.owner(v) == Some(p) { succ.any(|w| set.contains(&w)) } else { succ.all(|w| set.contains(&w)) };
            if add {
                set.insert(v);
                grew = true;
            }
        }
        if !grew {
            return set;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn scc_is_mutual_reachability(g in arbitrary_digraph()) {
        let g = g.normalized();
        let scc = scc_decompose(&g);
        let reach = closure(&g);
        for u in g.vertices() {
            for v in g.vertices() {
                let same = scc.component_of(u) == scc.component_of(v);
                prop_assert_eq!(same, reach[u][v] && reach[v][u]);
            }
        }
        // sinks first: every edge runs to an equal or smaller component id
        for e in g.edges() {
            prop_assert!(scc.component_of(e.target) <= scc.component_of(e.source));
        }
        let c = condense(&g, &scc);
        prop_assert!(c.quotient.topological_order().is_some());
        for (k, e) in c.quotient.edges().iter().enumerate() {
            let orig = g.edge(c.lift[k]);
            prop_assert_eq!(scc.component_of(orig.source), e.source);
            prop_assert_eq!(scc.component_of(orig.target), e.target);
        }
    }

    #[test]
    fn normalization_is_idempotent(g in arbitrary_digraph()) {
        let once = g.normalized();
        prop_assert!(once.is_normalized());
        prop_assert_eq!(once.normalized(), once.clone());
        for v in once.vertices() {
            prop_assert!(once.successors(v).next().is_some());
        }
    }

    #[test]
    fn attractor_is_least_fixpoint(s in small_structure(8), seed in any::<u64>()) {
        use rand::Rng;
        let mut r = rng(seed);
        let g = s.digraph();
        let region: Vec<VertexId> = g.vertices().collect();
        let targets: BTreeSet<VertexId> = g.vertices().filter(|_| r.random_bool(0.3)).collect();
        let targets_vec: Vec<VertexId> = targets.iter().copied().collect();
        for p in [Player::ONE, Player::TWO] {
            let a = attractor(&s, &region, &targets_vec, p);
            prop_assert_eq!(&a.region, &naive_attractor(&s, &region, &targets, p));
            // every strategy move descends a layer
            for (&v, &e) in &a.strategy {
                let w = g.edge(e).target;
                prop_assert!(a.layer[&w] < a.layer[&v]);
            }
        }
    }

    #[test]
    fn trace_cycle_lies_in_one_component(s in small_structure(8), seed in any::<u64>()) {
        use rand::Rng;
        let mut r = rng(seed);
        let g = s.digraph();
        let mut profile = StrategyProfile::empty(s.vertex_count());
        for v in g.vertices().filter(|&v| !s.is_terminal(v)) {
            let out = g.out_edges(v);
            profile.set_move(v, Some(out[r.random_range(0..out.len())]));
        }
        let all = s.profile_outcomes(&profile);
        for v in g.vertices() {
            let lasso = s.trace_play(&profile, v);
            let j = s.scc().component_of(lasso.cycle[0]);
            prop_assert!(lasso.cycle.iter().all(|&w| s.scc().component_of(w) == j));
            prop_assert_eq!(lasso.outcome, s.play_outcome(&profile, v));
            prop_assert_eq!(lasso.outcome, all[v]);
            let visited: BTreeSet<VertexId> = lasso.stem.iter().chain(&lasso.cycle).copied().collect();
            prop_assert_eq!(visited.len(), lasso.stem.len() + lasso.cycle.len());
        }
    }

    #[test]
    fn profile_count_is_product_of_degrees(s in small_structure(8)) {
        let oracle = Oracle::new(&s);
        let profiles = oracle.profiles().unwrap();
        prop_assert_eq!(profiles.len() as u64, s.profile_count());
        let distinct: BTreeSet<Vec<Option<usize>>> = profiles.iter().map(|p| p.moves().to_vec()).collect();
        prop_assert_eq!(distinct.len(), profiles.len());
    }

    #[test]
    fn reachable_outcomes_match_enumeration(s in small_structure(7)) {
        let g = s.digraph();
        for p in [Player::ONE, Player::TWO] {
            for x in s.strategy_space(p).iter().take(8) {
                for v in g.vertices() {
                    let mut profile = StrategyProfile::empty(s.vertex_count());
                    profile.apply(&x);
                    let forced: BTreeSet<usize> = s
                        .strategy_space(p.opponent())
                        .iter()
                        .map(|y| {
                            profile.apply(&y);
                            s.play_outcome(&profile, v)
                        })
                        .collect();
                    prop_assert_eq!(s.reachable_outcomes(&x, v).unwrap(), forced);
                }
            }
        }
    }

    #[test]
    fn winlose_matches_brute_force(s in small_structure(7), seed in any::<u64>()) {
        let mut r = rng(seed);
        let partition = random_partition(&mut r, s.outcome_count());
        let sol = solve_winlose(&s, &partition).unwrap();
        let oracle = Oracle::new(&s);
        for v in s.digraph().vertices() {
            prop_assert_eq!(sol.winner[v], oracle.brute_force_winner(v, &partition).unwrap());
            let x = sol.profile.strategy_of(&s, sol.winner[v]);
            prop_assert!(oracle.strategy_wins_from(v, &partition, &x).unwrap());
        }
    }

    #[test]
    fn enlarging_a1_only_helps_player_one(s in small_structure(8), seed in any::<u64>()) {
        use rand::Rng;
        let mut r = rng(seed);
        let small = random_partition(&mut r, s.outcome_count());
        let extra: Vec<usize> = (0..s.outcome_count()).filter(|_| r.random_bool(0.5)).collect();
        let large = WinLosePartition::from_a1(s.outcome_count(), small.a1().into_iter().chain(extra));
        let before = solve_winlose(&s, &small).unwrap();
        let after = solve_winlose(&s, &large).unwrap();
        for v in s.digraph().vertices() {
            if before.winner[v] == Player::ONE {
                prop_assert_eq!(after.winner[v], Player::ONE);
            }
        }
    }

    #[test]
    fn zerosum_matches_brute_force(s in small_structure(7), seed in any::<u64>()) {
        let mut r = rng(seed);
        let u = random_zero_sum(&mut r, s.outcome_count());
        let sol = solve_zerosum(&s, &u).unwrap();
        let oracle = Oracle::new(&s);
        for v in s.digraph().vertices() {
            prop_assert_eq!(sol.value[v], oracle.brute_force_value(v, &u).unwrap());
            prop_assert_eq!(u.get(Player::ONE, sol.outcome_at[v]), sol.value[v]);
        }
        prop_assert!(oracle.is_subgame_perfect(&u, &sol.profile).unwrap());
    }

    #[test]
    fn zerosum_value_is_monotone_and_order_equivariant(s in small_structure(8), seed in any::<u64>()) {
        use rand::Rng;
        let mut r = rng(seed);
        let u = random_zero_sum(&mut r, s.outcome_count());
        let base = solve_zerosum(&s, &u).unwrap();

        let raised: Vec<Value> = u.of(Player::ONE).iter().map(|&x| x + Value::from_integer(r.random_range(0..3))).collect();
        let up = solve_zerosum(&s, &UtilityFunction::zero_sum(raised)).unwrap();
        // a strictly increasing map of the payoffs maps the values alike
        let f = |x: Value| x * x * x + Value::new(1, 3) * x;
        let mapped = solve_zerosum(&s, &UtilityFunction::zero_sum(u.of(Player::ONE).iter().map(|&x| f(x)).collect())).unwrap();
        for v in s.digraph().vertices() {
            prop_assert!(up.value[v] >= base.value[v]);
            prop_assert_eq!(mapped.value[v], f(base.value[v]));
        }
    }

    #[test]
    fn game_text_round_trips(s in small_structure(9)) {
        let text = render_game(&s);
        let t = parse_game(&text).unwrap();
        prop_assert_eq!(render_game(&t), text);
        prop_assert_eq!(t.outcome_names(), s.outcome_names());
        prop_assert_eq!(t.digraph(), s.digraph());
    }
}

#[test]
fn scc_runtime_is_roughly_linear() {
    // a long cycle with chords; doubling the size should not quadruple time
    fn time(n: usize) -> f64 {
        let mut g = Digraph::new();
        for v in 0..n {
            g.add_vertex(&v.to_string()).unwrap();
        }
        for v in 0..n {
            g.add_edge(v, (v + 1) % n).unwrap();
            g.add_edge(v, (v * 7 + 3) % n).unwrap();
        }
        let t = std::time::Instant::now();
        let scc = scc_decompose(&g);
        let secs = t.elapsed().as_secs_f64();
        assert_eq!(scc.len(), 1);
        secs
    }
    let small = (0..3).map(|_| time(200_000)).fold(f64::INFINITY, f64::min);
    let large = (0..3).map(|_| time(800_000)).fold(f64::INFINITY, f64::min);
    assert!(large / small < 12.0, "4x input took {:.1}x time", large / small);
}
