//! Nash equilibria of arbitrary two-person games from a sequence of win/lose
//! solves.
//!
//! The outcomes are split into `W ∪ W₁ ∪ W₂`. Outcomes in `W₁` are ones
//! player 2 cannot force on player 1, outcomes in `W₂` ones player 1 cannot
//! force on player 2. `W` shrinks until both punishments succeed for the
//! worst remaining outcome of player 1; the two punishing strategies then
//! form an equilibrium.

use std::collections::BTreeSet;

use crate::digraph::VertexId;
use crate::error::Result;
use crate::game::{OutcomeId, Player, PositionalStructure, StrategyProfile, UtilityFunction, WinLosePartition};
use crate::winlose::solve_winlose;

/// State of the outcome split at the start of one iteration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionStep {
    pub w: BTreeSet<OutcomeId>,
    pub w1: BTreeSet<OutcomeId>,
    pub w2: BTreeSet<OutcomeId>,
}

#[derive(Clone, Debug)]
pub struct NashCertificate {
    pub profile: StrategyProfile,
    pub equilibrium_outcome: OutcomeId,
    pub partition_trace: Vec<PartitionStep>,
    pub solve_count: usize,
    pub simple: bool,
}

pub fn build_nash(s: &PositionalStructure, u: &UtilityFunction, start: VertexId) -> Result<NashCertificate> {
    s.require_two_person()?;
    u.check_shape(s)?;
    let outcomes = s.outcome_count();
    let u1 = u.of(Player::ONE);
    let u2 = u.of(Player::TWO);

    let mut w: BTreeSet<OutcomeId> = (0..outcomes).collect();
    let mut w1: BTreeSet<OutcomeId> = BTreeSet::new();
    let mut w2: BTreeSet<OutcomeId> = BTreeSet::new();
    let mut trace = Vec::new();
    let mut solve_count = 0;

    loop {
        trace.push(PartitionStep { w: w.clone(), w1: w1.clone(), w2: w2.clone() });
        // Outcome ids follow name order, so the first minimum is the
        // lexicographically smallest among ties.
        let worst = *w
            .iter()
            .min_by(|&&a, &&b| u1[a].cmp(&u1[b]).then(a.cmp(&b)))
            .expect("W never runs empty on a win/lose-solvable form");

        let punish_1 = WinLosePartition::from_a2(outcomes, w1.iter().copied().chain([worst]));
        let sol2 = solve_winlose(s, &punish_1)?;
        solve_count += 1;
        if sol2.winner[start] != Player::TWO {
            w.remove(&worst);
            w1.insert(worst);
            continue;
        }
        let x2 = sol2.profile.strategy_of(s, Player::TWO);

        let not_better_for_2: Vec<OutcomeId> = w.iter().copied().filter(|&a| u2[a] <= u2[worst]).collect();
        let punish_2 = WinLosePartition::from_a1(outcomes, w2.iter().copied().chain(not_better_for_2.iter().copied()));
        let sol1 = solve_winlose(s, &punish_2)?;
        solve_count += 1;
        if sol1.winner[start] != Player::ONE {
            for a in not_better_for_2 {
                w.remove(&a);
                w2.insert(a);
            }
            continue;
        }
        let x1 = sol1.profile.strategy_of(s, Player::ONE);

        let profile = StrategyProfile::combine(s.vertex_count(), &[&x1, &x2]);
        let mut cert = NashCertificate {
            profile,
            equilibrium_outcome: worst,
            partition_trace: trace,
            solve_count,
            simple: false,
        };
        cert.simple = check_simple(s, &cert, start)?;
        return Ok(cert);
    }
}

/// Whether the outcomes reachable under each half of the profile intersect
/// exactly in the equilibrium outcome.
pub fn check_simple(s: &PositionalStructure, cert: &NashCertificate, start: VertexId) -> Result<bool> {
    let x1 = cert.profile.strategy_of(s, Player::ONE);
    let x2 = cert.profile.strategy_of(s, Player::TWO);
    let g1 = s.reachable_outcomes(&x1, start)?;
    let g2 = s.reachable_outcomes(&x2, start)?;
    let common: Vec<OutcomeId> = g1.intersection(&g2).copied().collect();
    Ok(common == [cert.equilibrium_outcome])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::Digraph;
    use crate::game::tests::{o, v};
    use crate::game::Value;
    use crate::generate::gen_household;

    fn household_utility(s: &PositionalStructure) -> UtilityFunction {
        let int = Value::from_integer;
        let mut u1 = vec![int(0); 3];
        let mut u2 = vec![int(0); 3];
        u1[o(s, "t1")] = int(-1);
        u1[o(s, "t2")] = int(2);
        u2[o(s, "t1")] = int(2);
        u2[o(s, "t2")] = int(-1);
        UtilityFunction::new(vec![u1, u2])
    }

    #[test]
    fn household_equilibrium() {
        let s = gen_household(2).unwrap();
        let u = household_utility(&s);
        let cert = build_nash(&s, &u, v(&s, "v1")).unwrap();
        assert_eq!(cert.equilibrium_outcome, o(&s, "c:v1"));
        assert_eq!(cert.solve_count, 3);
        let pairs: Vec<(VertexId, VertexId)> = cert.profile.targets(&s).collect();
        assert_eq!(pairs, [(v(&s, "v1"), v(&s, "v2")), (v(&s, "v2"), v(&s, "v1"))]);
        assert_eq!(cert.partition_trace.len(), 2);
        assert_eq!(cert.partition_trace[1].w1, [o(&s, "t1")].into());
        assert!(cert.partition_trace[1].w.contains(&o(&s, "c:v1")));
        assert!(cert.simple);
    }

    #[test]
    fn corrupted_profile_is_not_simple() {
        let s = gen_household(2).unwrap();
        let u = household_utility(&s);
        let mut cert = build_nash(&s, &u, v(&s, "v1")).unwrap();
        // player 1 now exits immediately; g(x₁) = {t1} misses c:v1
        let exit = StrategyProfile::from_targets(&s, &[("v1", "t1")]).unwrap();
        cert.profile = cert.profile.with(&exit.strategy_of(&s, Player::ONE));
        assert!(!check_simple(&s, &cert, v(&s, "v1")).unwrap());
    }

    #[test]
    fn single_outcome() {
        let g = Digraph::build(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap();
        let s = PositionalStructure::with_owners(&g, 2, &[("a", 1), ("b", 2)]).unwrap();
        assert_eq!(s.outcome_count(), 1);
        let u = UtilityFunction::new(vec![vec![Value::from_integer(3)], vec![Value::from_integer(-2)]]);
        let cert = build_nash(&s, &u, 0).unwrap();
        assert_eq!(cert.equilibrium_outcome, 0);
        assert!(cert.solve_count <= 2);
        assert!(cert.simple);
        s.check_profile(&cert.profile).unwrap();
    }
}
