//! Brute-force ground truth over pure positional strategies.
//!
//! Everything here enumerates profiles explicitly and is meant for small
//! instances; the enumeration cap guards against accidental blow-up.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraph::VertexId;
use crate::error::{Error, Result};
use crate::game::{
    OutcomeId, Player, PositionalStructure, Strategy, StrategyProfile, UtilityFunction, Value, WinLosePartition,
};

pub const DEFAULT_PROFILE_CAP: u64 = 100_000;

/// An explicit two-person game form `X₁ × X₂ → A`, rows for player 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormTable {
    rows: usize,
    cols: usize,
    outcome_names: Vec<String>,
    cells: Vec<OutcomeId>,
}

impl NormalFormTable {
    pub fn new(rows: usize, cols: usize, outcome_names: Vec<String>, cells: Vec<OutcomeId>) -> Result<Self> {
        if cells.len() != rows * cols {
            return Err(Error::InvalidParameter(format!(
                "table of {rows}x{cols} needs {} cells, got {}",
                rows * cols,
                cells.len()
            )));
        }
        if let Some(&a) = cells.iter().find(|&&a| a >= outcome_names.len()) {
            return Err(Error::InvalidParameter(format!("cell refers to outcome #{a}")));
        }
        Ok(NormalFormTable { rows, cols, outcome_names, cells })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn outcome_count(&self) -> usize {
        self.outcome_names.len()
    }

    pub fn outcome_names(&self) -> &[String] {
        &self.outcome_names
    }

    pub fn cell(&self, row: usize, col: usize) -> OutcomeId {
        self.cells[row * self.cols + col]
    }

    /// The player who can force a win in the ±1 game, if either can. A saddle
    /// point of a ±1 game exists exactly when one of them can.
    pub fn winlose_winner(&self, partition: &WinLosePartition) -> Option<Player> {
        let wins = |p: Player, a: OutcomeId| partition.winner_of(a) == p;
        if (0..self.rows).any(|r| (0..self.cols).all(|c| wins(Player::ONE, self.cell(r, c)))) {
            return Some(Player::ONE);
        }
        if (0..self.cols).any(|c| (0..self.rows).all(|r| wins(Player::TWO, self.cell(r, c)))) {
            return Some(Player::TWO);
        }
        None
    }

    /// `max_r min_c u₁` and `min_c max_r u₁`.
    pub fn maxmin_minmax<T: Ord + Copy>(&self, u1: &[T]) -> (T, T) {
        let maxmin = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| u1[self.cell(r, c)]).min().expect("table has columns"))
            .max()
            .expect("table has rows");
        let minmax = (0..self.cols)
            .map(|c| (0..self.rows).map(|r| u1[self.cell(r, c)]).max().expect("table has rows"))
            .min()
            .expect("table has columns");
        (maxmin, minmax)
    }

    /// Whether some cell is a pure Nash equilibrium of `(u1, u2)`.
    pub fn has_nash<T: Ord + Copy>(&self, u1: &[T], u2: &[T]) -> bool {
        let col_best: Vec<T> = (0..self.cols)
            .map(|c| (0..self.rows).map(|r| u1[self.cell(r, c)]).max().expect("table has rows"))
            .collect();
        (0..self.rows).any(|r| {
            let row_best = (0..self.cols).map(|c| u2[self.cell(r, c)]).max().expect("table has columns");
            (0..self.cols).any(|c| {
                let a = self.cell(r, c);
                u1[a] == col_best[c] && u2[a] == row_best
            })
        })
    }
}

/// Settings for [`check_solvability`].
#[derive(Clone, Debug)]
pub struct SolvabilityConfig {
    /// Largest `|A|` for which all `2^|A|` partitions are enumerated.
    pub max_outcomes: usize,
    /// Random utilities drawn when exhaustive orderings are too many.
    pub random_samples: usize,
    pub seed: u64,
}

impl Default for SolvabilityConfig {
    fn default() -> Self {
        SolvabilityConfig { max_outcomes: 16, random_samples: 256, seed: 0x5eed }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvabilityReport {
    /// Decided exactly over all partitions of the outcomes.
    pub winlose_solvable: bool,
    /// `A₁` of a win/lose game without a saddle point, when one exists.
    pub saddle_free_partition: Option<Vec<OutcomeId>>,
    /// Sample-based: saddle found for every sampled zero-sum utility.
    pub zerosum_solvable_sampled: bool,
    /// Sample-based: equilibrium found for every sampled utility pair.
    pub nash_solvable_sampled: bool,
    pub zerosum_samples: usize,
    pub nash_samples: usize,
    /// True when the samples were all strict orderings, not random draws.
    pub zerosum_exhaustive: bool,
    pub nash_exhaustive: bool,
}

impl SolvabilityReport {
    /// The three bits coincide, as they must for two-person forms. The Nash
    /// and zero-sum bits come from samples, so agreement on a form that is
    /// not solvable can only fail by a sample missing every bad utility.
    pub fn agrees(&self) -> bool {
        self.winlose_solvable == self.zerosum_solvable_sampled && self.winlose_solvable == self.nash_solvable_sampled
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).fold(1usize, |acc, k| acc.saturating_mul(k))
}

const EXHAUSTIVE_ORDERINGS: usize = 5040;

/// Every strict ordering of `outcomes` items, as rank vectors.
fn all_orderings(outcomes: usize) -> Vec<Vec<usize>> {
    (0..outcomes)
        .permutations(outcomes)
        .map(|perm| {
            let mut rank = vec![0; outcomes];
            for (pos, &a) in perm.iter().enumerate() {
                rank[a] = pos;
            }
            rank
        })
        .collect()
}

fn random_values(rng: &mut ChaCha8Rng, outcomes: usize) -> Vec<usize> {
    (0..outcomes).map(|_| rng.random_range(0..outcomes.max(1))).collect()
}

/// Win/lose solvability decided over all partitions; zero-sum and Nash
/// solvability checked on utility samples.
pub fn check_solvability(table: &NormalFormTable, config: &SolvabilityConfig) -> Result<SolvabilityReport> {
    let outcomes = table.outcome_count();
    if outcomes > config.max_outcomes || outcomes >= 63 {
        return Err(Error::TooManyOutcomes(outcomes));
    }
    let mut saddle_free_partition = None;
    for mask in 0u64..(1u64 << outcomes) {
        let partition = WinLosePartition::from_a1(outcomes, (0..outcomes).filter(|&a| mask >> a & 1 == 1));
        if table.winlose_winner(&partition).is_none() {
            saddle_free_partition = Some(partition.a1().into_iter().collect());
            break;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let zerosum_exhaustive = factorial(outcomes) <= EXHAUSTIVE_ORDERINGS;
    let zerosum_utilities: Vec<Vec<usize>> = if zerosum_exhaustive {
        all_orderings(outcomes)
    } else {
        (0..config.random_samples).map(|_| random_values(&mut rng, outcomes)).collect()
    };
    let zerosum_solvable_sampled = zerosum_utilities.iter().all(|u1| {
        let (lo, hi) = table.maxmin_minmax(u1);
        lo == hi
    });

    let nash_exhaustive = factorial(outcomes).saturating_mul(factorial(outcomes)) <= EXHAUSTIVE_ORDERINGS;
    let nash_utilities: Vec<(Vec<usize>, Vec<usize>)> = if nash_exhaustive {
        let orders = all_orderings(outcomes);
        orders.iter().cartesian_product(orders.iter()).map(|(a, b)| (a.clone(), b.clone())).collect()
    } else {
        let mut base: Vec<usize> = (0..outcomes).collect();
        (0..config.random_samples)
            .map(|k| {
                // alternate random strict orderings with random values (ties)
                if k % 2 == 0 {
                    base.shuffle(&mut rng);
                    let u1 = base.clone();
                    base.shuffle(&mut rng);
                    (u1, base.clone())
                } else {
                    (random_values(&mut rng, outcomes), random_values(&mut rng, outcomes))
                }
            })
            .collect()
    };
    let nash_solvable_sampled = nash_utilities.iter().all(|(u1, u2)| table.has_nash(u1, u2));

    Ok(SolvabilityReport {
        winlose_solvable: saddle_free_partition.is_none(),
        saddle_free_partition,
        zerosum_solvable_sampled,
        nash_solvable_sampled,
        zerosum_samples: zerosum_utilities.len(),
        nash_samples: nash_utilities.len(),
        zerosum_exhaustive,
        nash_exhaustive,
    })
}

/// Exhaustive checks on one positional structure.
#[derive(Clone, Debug)]
pub struct Oracle<'a> {
    structure: &'a PositionalStructure,
    cap: u64,
}

impl<'a> Oracle<'a> {
    pub fn new(structure: &'a PositionalStructure) -> Self {
        Oracle { structure, cap: DEFAULT_PROFILE_CAP }
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    fn check_cap(&self) -> Result<()> {
        let needed = self.structure.profile_count();
        if needed > self.cap {
            return Err(Error::CapExceeded { needed, cap: self.cap });
        }
        Ok(())
    }

    fn payoff(&self, u: &UtilityFunction, player: Player, profile: &StrategyProfile, start: VertexId) -> Value {
        u.get(player, self.structure.play_outcome(profile, start))
    }

    /// No player gains by switching to any other positional strategy while
    /// the others keep theirs.
    pub fn is_nash(&self, start: VertexId, u: &UtilityFunction, profile: &StrategyProfile) -> Result<bool> {
        self.check_cap()?;
        self.structure.check_profile(profile)?;
        u.check_shape(self.structure)?;
        Ok(self.nash_at(start, u, profile))
    }

    fn nash_at(&self, start: VertexId, u: &UtilityFunction, profile: &StrategyProfile) -> bool {
        let s = self.structure;
        let base = s.play_outcome(profile, start);
        (1..=s.players()).filter_map(Player::new).all(|p| {
            let current = u.get(p, base);
            let mut deviated = profile.clone();
            s.strategy_space(p).iter().all(|x| {
                deviated.apply(&x);
                self.payoff(u, p, &deviated, start) <= current
            })
        })
    }

    /// Nash at every initial position simultaneously.
    pub fn is_subgame_perfect(&self, u: &UtilityFunction, profile: &StrategyProfile) -> Result<bool> {
        self.check_cap()?;
        self.structure.check_profile(profile)?;
        u.check_shape(self.structure)?;
        Ok(self.structure.digraph().vertices().all(|v| self.nash_at(v, u, profile)))
    }

    /// Every profile, in mixed-radix order over non-terminal vertices.
    pub fn profiles(&self) -> Result<Vec<StrategyProfile>> {
        self.check_cap()?;
        let s = self.structure;
        let g = s.digraph();
        let positions: Vec<VertexId> = g.vertices().filter(|&v| !s.is_terminal(v)).collect();
        let total = s.profile_count();
        Ok((0..total)
            .map(|mut index| {
                let mut p = StrategyProfile::empty(s.vertex_count());
                for &v in &positions {
                    let out = g.out_edges(v);
                    p.set_move(v, Some(out[(index % out.len() as u64) as usize]));
                    index /= out.len() as u64;
                }
                p
            })
            .collect())
    }

    /// First Nash equilibrium at `start` in enumeration order, any number of
    /// players.
    pub fn find_nash(&self, start: VertexId, u: &UtilityFunction) -> Result<Option<StrategyProfile>> {
        u.check_shape(self.structure)?;
        Ok(self.profiles()?.into_iter().find(|p| self.nash_at(start, u, p)))
    }

    /// All subgame-perfect equilibria.
    pub fn subgame_perfect_equilibria(&self, u: &UtilityFunction) -> Result<Vec<StrategyProfile>> {
        u.check_shape(self.structure)?;
        let vertices = self.structure.digraph().vertices();
        Ok(self
            .profiles()?
            .into_iter()
            .filter(|p| vertices.clone().all(|v| self.nash_at(v, u, p)))
            .collect())
    }

    /// `max_{x₁} min_{x₂} u₁` from `start`; fails if it differs from
    /// `min_{x₂} max_{x₁} u₁`.
    pub fn brute_force_value(&self, start: VertexId, u: &UtilityFunction) -> Result<Value> {
        let s = self.structure;
        s.require_two_person()?;
        u.check_shape(s)?;
        if let Some((a, b)) = u.zero_sum_violation() {
            return Err(Error::NotZeroSum(s.outcome(a).name.clone(), s.outcome(b).name.clone()));
        }
        let form = self.structure.expand_game_form(start, self.cap)?;
        let (maxmin, minmax) = form.table.maxmin_minmax(u.of(Player::ONE));
        if maxmin != minmax {
            return Err(Error::ContractViolation(format!(
                "no pure saddle point from `{}`: max-min {maxmin} < min-max {minmax}",
                self.structure.digraph().name(start)
            )));
        }
        Ok(maxmin)
    }

    /// The player who can force a win from `start`.
    pub fn brute_force_winner(&self, start: VertexId, partition: &WinLosePartition) -> Result<Player> {
        let form = self.structure.expand_game_form(start, self.cap)?;
        form.table.winlose_winner(partition).ok_or_else(|| {
            Error::ContractViolation(format!(
                "win/lose game from `{}` is not determined",
                self.structure.digraph().name(start)
            ))
        })
    }

    /// Whether `strategy` wins from `start` against every opponent strategy.
    pub fn strategy_wins_from(&self, start: VertexId, partition: &WinLosePartition, strategy: &Strategy) -> Result<bool> {
        self.structure.require_two_person()?;
        self.check_cap()?;
        let s = self.structure;
        let me = strategy.player;
        let mut profile = StrategyProfile::empty(s.vertex_count());
        profile.apply(strategy);
        Ok(s.strategy_space(me.opponent()).iter().all(|y| {
            profile.apply(&y);
            partition.winner_of(s.play_outcome(&profile, start)) == me
        }))
    }
}
