//! Two-person zero-sum games: values and a subgame-perfect saddle point.
//!
//! Backward induction as in [`crate::winlose`], but each component is solved
//! as a game with terminal payoffs by sweeping thresholds from the highest
//! reachable value down: a vertex gets the first threshold at which player 1
//! wins the win/lose game "payoff at least t".

use crate::digraph::{ComponentId, EdgeId, VertexId};
use crate::error::{Error, Result};
use crate::game::{OutcomeId, Player, PositionalStructure, StrategyProfile, UtilityFunction, Value};
use crate::winlose::{solve_component, AttractorScratch, WorkingGame};

#[derive(Clone, Debug)]
pub struct ZeroSumSolution {
    /// Payoff player 1 can guarantee from each vertex.
    pub value: Vec<Value>,
    pub profile: StrategyProfile,
    pub outcome_at: Vec<OutcomeId>,
}

/// Values and moves of one component, as returned by [`solve_dg_component`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentValues {
    pub values: Vec<(VertexId, Value)>,
    pub moves: Vec<(VertexId, EdgeId)>,
}

/// Position of a payoff in the sorted list of distinct payoffs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Rank(usize);

/// Per-vertex buffers shared by all component solves of one run.
struct Sweep {
    scratch: AttractorScratch,
    winner: Vec<Option<Player>>,
    moves: Vec<Option<EdgeId>>,
    layer: Vec<Option<usize>>,
    thresholds: Vec<Rank>,
}

impl Sweep {
    fn new(n: usize) -> Self {
        Sweep {
            scratch: AttractorScratch::new(n),
            winner: vec![None; n],
            moves: vec![None; n],
            layer: vec![None; n],
            thresholds: Vec::new(),
        }
    }

    /// Solves component `j` with ordered payoffs: `cycle` is the value of
    /// staying forever (if the component has a dicycle) and `exit_value`
    /// gives the value of every vertex outside the component reached by an
    /// edge. Writes into `value` and `moves` for the component's vertices.
    fn solve(
        &mut self,
        s: &PositionalStructure,
        j: ComponentId,
        cycle: Option<Rank>,
        exit_value: &dyn Fn(VertexId) -> Rank,
        value: &mut [Option<Rank>],
        moves: &mut [Option<EdgeId>],
    ) {
        let g = s.digraph();
        let region = s.scc().component(j);
        self.thresholds.clear();
        self.thresholds.extend(cycle);
        for &v in region {
            for w in g.successors(v) {
                if s.scc().component_of(w) != j {
                    self.thresholds.push(exit_value(w));
                }
            }
        }
        self.thresholds.sort_unstable_by(|a, b| b.cmp(a));
        self.thresholds.dedup();

        for &v in region {
            value[v] = None;
        }
        let thresholds = std::mem::take(&mut self.thresholds);
        for (k, &t) in thresholds.iter().enumerate() {
            let favored = match cycle {
                Some(c) if c < t => Player::TWO,
                _ => Player::ONE,
            };
            let exit_winner = |w: VertexId| if exit_value(w) >= t { Player::ONE } else { Player::TWO };
            solve_component(
                s,
                &mut self.scratch,
                j,
                favored,
                &exit_winner,
                &mut self.winner,
                &mut self.moves,
                &mut self.layer,
            );
            for &v in region {
                if value[v].is_some() {
                    continue;
                }
                let owner = s.owner(v);
                if self.winner[v] == Some(Player::ONE) {
                    value[v] = Some(t);
                    if owner == Some(Player::ONE) || k == 0 {
                        moves[v] = self.moves[v];
                    }
                } else if owner == Some(Player::TWO) {
                    // player 2 keeps the payoff below t from here
                    moves[v] = self.moves[v];
                }
            }
        }
        self.thresholds = thresholds;
        debug_assert!(region.iter().all(|&v| value[v].is_some()));
    }
}

/// Solves a single component whose exits all lead to valued vertices.
/// `cycle_value` is the payoff of staying in the component forever and must
/// be given exactly when the component has a dicycle.
pub fn solve_dg_component(
    s: &PositionalStructure,
    j: ComponentId,
    cycle_value: Option<Value>,
    exit_value: &dyn Fn(VertexId) -> Option<Value>,
) -> Result<ComponentValues> {
    s.require_two_person()?;
    let g = s.digraph();
    let region = s.scc().component(j);
    let mut ladder: Vec<Value> = cycle_value.into_iter().collect();
    for &v in region {
        for w in g.successors(v) {
            if s.scc().component_of(w) != j {
                ladder.push(exit_value(w).ok_or_else(|| Error::UnvaluedExit(g.name(w).to_string()))?);
            }
        }
    }
    ladder.sort();
    ladder.dedup();
    let rank = |x: Value| Rank(ladder.binary_search(&x).expect("value is on the ladder"));
    let cycle = if s.scc().has_dicycle(j) { cycle_value.map(rank) } else { None };

    let n = s.vertex_count();
    let mut sweep = Sweep::new(n);
    let mut value = vec![None; n];
    let mut moves = vec![None; n];
    let exit = |w: VertexId| rank(exit_value(w).expect("checked above"));
    sweep.solve(s, j, cycle, &exit, &mut value, &mut moves);
    Ok(ComponentValues {
        values: region.iter().map(|&v| (v, ladder[value[v].expect("solved").0])).collect(),
        moves: region.iter().filter_map(|&v| moves[v].map(|e| (v, e))).collect(),
    })
}

/// Solves the zero-sum game whose payoff to player 1 is `u.of(Player::ONE)`.
/// Any utility with `u₁ + u₂` constant over the outcomes is accepted.
pub fn solve_zerosum(s: &PositionalStructure, u: &UtilityFunction) -> Result<ZeroSumSolution> {
    s.require_two_person()?;
    u.check_shape(s)?;
    if let Some((a, b)) = u.zero_sum_violation() {
        return Err(Error::NotZeroSum(s.outcome(a).name.clone(), s.outcome(b).name.clone()));
    }
    // one global sort; components work on ranks
    let mut ladder: Vec<Value> = u.of(Player::ONE).to_vec();
    ladder.sort();
    ladder.dedup();
    let outcome_rank: Vec<Rank> = u
        .of(Player::ONE)
        .iter()
        .map(|x| Rank(ladder.binary_search(x).expect("value is on the ladder")))
        .collect();

    let n = s.vertex_count();
    let scc = s.scc();
    let mut work: WorkingGame<Rank> = WorkingGame::new(s);
    let mut value: Vec<Option<Rank>> = vec![None; n];
    let mut moves: Vec<Option<EdgeId>> = vec![None; n];
    let mut sweep = Sweep::new(n);

    for j in 0..scc.len() {
        let cycle = s.outcome_of_component(j).map(|a| outcome_rank[a]);
        if scc.is_terminal(j) {
            let t = scc.component(j)[0];
            let r = cycle.expect("terminal loops are outcomes");
            value[t] = Some(r);
            work.label_terminal(j, r);
            continue;
        }
        let exit = |w: VertexId| work.label(w).expect("exit leads to a valued vertex");
        sweep.solve(s, j, cycle, &exit, &mut value, &mut moves);
        work.eliminate_component(j, |v| value[v].expect("component vertices are valued"));
    }

    let profile = StrategyProfile::from_moves(moves);
    let outcome_at = s.profile_outcomes(&profile);
    Ok(ZeroSumSolution {
        value: value.into_iter().map(|r| ladder[r.expect("every vertex is valued").0]).collect(),
        profile,
        outcome_at,
    })
}
