//! Positional structures: who moves where, which components are outcomes,
//! and what a profile of positional strategies produces.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;

use crate::digraph::{self, scc_decompose, ComponentId, Digraph, EdgeId, SccDecomposition, VertexId};
use crate::error::{Error, Result};
use crate::oracle::NormalFormTable;

/// Exact payoff.
pub type Value = Ratio<i64>;

pub type OutcomeId = usize;

/// A player, numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Player(usize);

impl Player {
    pub const ONE: Player = Player(1);
    pub const TWO: Player = Player(2);

    pub fn new(number: usize) -> Option<Player> {
        (number >= 1).then_some(Player(number))
    }

    pub fn number(self) -> usize {
        self.0
    }

    /// Zero-based index.
    pub fn index(self) -> usize {
        self.0 - 1
    }

    /// The other player of a two-person game.
    pub fn opponent(self) -> Player {
        match self.0 {
            1 => Player::TWO,
            2 => Player::ONE,
            n => panic!("player {n} has no unique opponent"),
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub name: String,
    /// Components whose dicycles realize this outcome. A single component
    /// unless outcomes have been merged by [`PositionalStructure::dg_project`].
    pub components: Vec<ComponentId>,
    pub is_terminal: bool,
}

impl Outcome {
    pub fn component(&self) -> ComponentId {
        self.components[0]
    }
}

#[derive(Clone, Debug)]
pub struct PositionalStructure {
    digraph: Digraph,
    players: usize,
    owner: Vec<Option<Player>>,
    scc: SccDecomposition,
    outcomes: Vec<Outcome>,
    outcome_of_component: Vec<Option<OutcomeId>>,
}

/// Outcome name of a component: the terminal vertex id, or `c:` followed by
/// the smallest vertex id of a cyclic component.
fn component_outcome_name(g: &Digraph, scc: &SccDecomposition, j: ComponentId) -> String {
    if scc.is_terminal(j) {
        g.name(scc.component(j)[0]).to_string()
    } else {
        let min = scc.component(j).iter().map(|&v| g.name(v)).min().expect("component is nonempty");
        format!("c:{min}")
    }
}

impl PositionalStructure {
    /// Normalizes `digraph`, validates the ownership map (indexed by vertex)
    /// and computes components and outcomes. Outcome ids follow the
    /// lexicographic order of outcome names.
    pub fn new(digraph: &Digraph, players: usize, owner: Vec<Option<Player>>) -> Result<Self> {
        if players == 0 {
            return Err(Error::NoPlayers);
        }
        let digraph = digraph.normalized();
        if owner.len() != digraph.vertex_count() {
            return Err(Error::OwnerMapSize { expected: digraph.vertex_count(), got: owner.len() });
        }
        for v in digraph.vertices() {
            match owner[v] {
                Some(p) if p.number() > players => {
                    return Err(Error::PlayerOutOfRange { player: p.number(), players })
                }
                Some(_) if digraph.is_terminal(v) => {
                    return Err(Error::OwnerOnTerminal(digraph.name(v).to_string()))
                }
                None if !digraph.is_terminal(v) => {
                    return Err(Error::MissingOwner(digraph.name(v).to_string()))
                }
                _ => {}
            }
        }
        let scc = scc_decompose(&digraph);
        let mut outcomes: Vec<Outcome> = (0..scc.len())
            .filter(|&j| scc.has_dicycle(j))
            .map(|j| Outcome {
                name: component_outcome_name(&digraph, &scc, j),
                components: vec![j],
                is_terminal: scc.is_terminal(j),
            })
            .collect();
        outcomes.sort_by(|a, b| a.name.cmp(&b.name));
        for pair in outcomes.windows(2) {
            if pair[0].name == pair[1].name {
                return Err(Error::DuplicateOutcome(pair[0].name.clone()));
            }
        }
        let mut outcome_of_component = vec![None; scc.len()];
        for (a, o) in outcomes.iter().enumerate() {
            outcome_of_component[o.component()] = Some(a);
        }
        Ok(PositionalStructure { digraph, players, owner, scc, outcomes, outcome_of_component })
    }

    /// Same as [`PositionalStructure::new`] with owners given by vertex name.
    pub fn with_owners<S: AsRef<str>>(digraph: &Digraph, players: usize, owners: &[(S, usize)]) -> Result<Self> {
        let mut owner = vec![None; digraph.vertex_count()];
        for (name, p) in owners {
            let v = digraph.vertex(name.as_ref()).ok_or_else(|| Error::UnknownVertex(name.as_ref().to_string()))?;
            let player = Player::new(*p).ok_or(Error::PlayerOutOfRange { player: *p, players })?;
            owner[v] = Some(player);
        }
        Self::new(digraph, players, owner)
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn scc(&self) -> &SccDecomposition {
        &self.scc
    }

    pub fn owner(&self, v: VertexId) -> Option<Player> {
        self.owner[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.digraph.vertex_count()
    }

    pub fn is_terminal(&self, v: VertexId) -> bool {
        self.digraph.is_terminal(v)
    }

    /// Non-terminal vertices owned by `player`, ascending.
    pub fn positions_of(&self, player: Player) -> Vec<VertexId> {
        self.digraph.vertices().filter(|&v| self.owner[v] == Some(player)).collect()
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn outcome_count(&self) -> usize {
        self.outcomes.len()
    }

    pub fn outcome(&self, a: OutcomeId) -> &Outcome {
        &self.outcomes[a]
    }

    pub fn outcome_by_name(&self, name: &str) -> Option<OutcomeId> {
        self.outcomes.binary_search_by(|o| o.name.as_str().cmp(name)).ok()
    }

    /// Outcome realized by a dicycle of component `j`; `None` for J₀.
    pub fn outcome_of_component(&self, j: ComponentId) -> Option<OutcomeId> {
        self.outcome_of_component[j]
    }

    pub fn outcome_names(&self) -> Vec<String> {
        self.outcomes.iter().map(|o| o.name.clone()).collect()
    }

    pub(crate) fn require_two_person(&self) -> Result<()> {
        if self.players == 2 {
            Ok(())
        } else {
            Err(Error::NotTwoPerson(self.players))
        }
    }

    /// Checks that `profile` picks an outgoing edge at every non-terminal
    /// vertex and nothing at terminals.
    pub fn check_profile(&self, profile: &StrategyProfile) -> Result<()> {
        if profile.moves.len() != self.vertex_count() {
            return Err(Error::InvalidStrategy(format!(
                "profile covers {} vertices, structure has {}",
                profile.moves.len(),
                self.vertex_count()
            )));
        }
        for v in self.digraph.vertices() {
            match profile.moves[v] {
                None if !self.is_terminal(v) => {
                    return Err(Error::InvalidStrategy(format!("no move at `{}`", self.digraph.name(v))))
                }
                Some(e) if e >= self.digraph.edge_count() || self.digraph.edge(e).source != v => {
                    return Err(Error::InvalidStrategy(format!(
                        "edge #{e} does not leave `{}`",
                        self.digraph.name(v)
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Next position under `profile`; terminals follow their loop.
    pub fn step(&self, profile: &StrategyProfile, v: VertexId) -> VertexId {
        match profile.moves[v] {
            Some(e) => self.digraph.edge(e).target,
            None => v,
        }
    }

    /// The lasso produced by `profile` from `start`.
    pub fn trace_play(&self, profile: &StrategyProfile, start: VertexId) -> Lasso {
        let mut position = vec![usize::MAX; self.vertex_count()];
        let mut walk = Vec::new();
        let mut v = start;
        while position[v] == usize::MAX {
            position[v] = walk.len();
            walk.push(v);
            v = self.step(profile, v);
        }
        let cycle = walk.split_off(position[v]);
        let outcome = self
            .outcome_of_component(self.scc.component_of(v))
            .expect("a dicycle lies in a component with an outcome");
        Lasso { stem: walk, cycle, outcome }
    }

    /// Outcome of the play from `start`, without materializing the lasso.
    pub fn play_outcome(&self, profile: &StrategyProfile, start: VertexId) -> OutcomeId {
        // after |V| steps the walk is on its cycle
        let mut v = start;
        for _ in 0..self.vertex_count() {
            v = self.step(profile, v);
        }
        self.outcome_of_component(self.scc.component_of(v))
            .expect("a dicycle lies in a component with an outcome")
    }

    /// Outcome of the play from every vertex, in linear time.
    pub fn profile_outcomes(&self, profile: &StrategyProfile) -> Vec<OutcomeId> {
        const UNKNOWN: usize = usize::MAX;
        const ON_PATH: usize = usize::MAX - 1;
        let n = self.vertex_count();
        let mut result = vec![UNKNOWN; n];
        let mut path = Vec::new();
        for start in 0..n {
            let mut v = start;
            while result[v] == UNKNOWN {
                result[v] = ON_PATH;
                path.push(v);
                v = self.step(profile, v);
            }
            let outcome = if result[v] == ON_PATH {
                self.outcome_of_component(self.scc.component_of(v))
                    .expect("a dicycle lies in a component with an outcome")
            } else {
                result[v]
            };
            for u in path.drain(..) {
                result[u] = outcome;
            }
        }
        result
    }

    /// Identifies all outcomes of non-terminal components into a single
    /// outcome `c`. Returns the projected structure and, for each original
    /// outcome, its outcome in the projection.
    pub fn dg_project(&self) -> (PositionalStructure, Vec<OutcomeId>) {
        let cyclic: Vec<ComponentId> =
            self.outcomes.iter().filter(|o| !o.is_terminal).flat_map(|o| o.components.iter().copied()).collect();
        if cyclic.is_empty() {
            return (self.clone(), (0..self.outcome_count()).collect());
        }
        let mut outcomes: Vec<Outcome> = self.outcomes.iter().filter(|o| o.is_terminal).cloned().collect();
        let mut merged_components = cyclic;
        merged_components.sort_unstable();
        outcomes.push(Outcome { name: "c".to_string(), components: merged_components, is_terminal: false });
        outcomes.sort_by(|a, b| a.name.cmp(&b.name));
        let mut outcome_of_component = vec![None; self.scc.len()];
        for (a, o) in outcomes.iter().enumerate() {
            for &j in &o.components {
                outcome_of_component[j] = Some(a);
            }
        }
        let merge = self
            .outcomes
            .iter()
            .map(|o| outcome_of_component[o.component()].expect("every component with a dicycle keeps an outcome"))
            .collect();
        let projected = PositionalStructure {
            digraph: self.digraph.clone(),
            players: self.players,
            owner: self.owner.clone(),
            scc: self.scc.clone(),
            outcomes,
            outcome_of_component,
        };
        (projected, merge)
    }

    /// All outcomes the opponents can produce from `start` while `strategy`
    /// is fixed for its player.
    pub fn reachable_outcomes(&self, strategy: &Strategy, start: VertexId) -> Result<BTreeSet<OutcomeId>> {
        self.require_two_person()?;
        let g = &self.digraph;
        let successors = |v: VertexId| -> Vec<VertexId> {
            if self.owner[v] == Some(strategy.player) {
                vec![g.edge(strategy.moves[v].expect("strategy is total on its player's positions")).target]
            } else {
                g.successors(v).collect()
            }
        };
        // restrict to what is reachable from `start`
        let mut local = vec![usize::MAX; self.vertex_count()];
        let mut order = vec![start];
        local[start] = 0;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for w in successors(v) {
                if local[w] == usize::MAX {
                    local[w] = order.len();
                    order.push(w);
                }
            }
        }
        let adj: Vec<Vec<usize>> = order.iter().map(|&v| successors(v).into_iter().map(|w| local[w]).collect()).collect();
        let (comps, _) = digraph::tarjan(&adj);
        let mut result = BTreeSet::new();
        for comp in comps {
            let v = order[comp[0]];
            let cyclic = comp.len() > 1 || adj[comp[0]].contains(&comp[0]);
            if cyclic {
                let a = self
                    .outcome_of_component(self.scc.component_of(v))
                    .expect("a dicycle lies in a component with an outcome");
                result.insert(a);
            }
        }
        Ok(result)
    }

    /// The positional strategies of `player`, in mixed-radix order over the
    /// player's positions (the first position varies fastest).
    pub fn strategy_space(&self, player: Player) -> StrategySpace {
        let positions = self.positions_of(player);
        let choices = positions.iter().map(|&v| self.digraph.out_edges(v).to_vec()).collect();
        StrategySpace { player, vertex_count: self.vertex_count(), positions, choices }
    }

    /// Number of positional strategy profiles, saturating.
    pub fn profile_count(&self) -> u64 {
        self.digraph
            .vertices()
            .filter(|&v| !self.is_terminal(v))
            .fold(1u64, |acc, v| acc.saturating_mul(self.digraph.out_degree(v) as u64))
    }

    /// The normal form `X₁ × X₂ → A` seen from `start`.
    pub fn expand_game_form(&self, start: VertexId, cap: u64) -> Result<GameForm> {
        self.require_two_person()?;
        let needed = self.profile_count();
        if needed > cap {
            return Err(Error::CapExceeded { needed, cap });
        }
        let rows: Vec<Strategy> = self.strategy_space(Player::ONE).iter().collect();
        let cols: Vec<Strategy> = self.strategy_space(Player::TWO).iter().collect();
        let mut cells = Vec::with_capacity(rows.len() * cols.len());
        let mut profile = StrategyProfile::empty(self.vertex_count());
        for x1 in &rows {
            profile.apply(x1);
            for x2 in &cols {
                profile.apply(x2);
                cells.push(self.play_outcome(&profile, start));
            }
        }
        let table = NormalFormTable::new(rows.len(), cols.len(), self.outcome_names(), cells)?;
        Ok(GameForm { strategies: [rows, cols], table })
    }
}

/// A play: a simple stem followed by a dicycle repeated forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub stem: Vec<VertexId>,
    pub cycle: Vec<VertexId>,
    pub outcome: OutcomeId,
}

/// One move per non-terminal vertex; terminals hold `None`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StrategyProfile {
    moves: Vec<Option<EdgeId>>,
}

impl StrategyProfile {
    pub fn empty(vertex_count: usize) -> Self {
        StrategyProfile { moves: vec![None; vertex_count] }
    }

    pub fn from_moves(moves: Vec<Option<EdgeId>>) -> Self {
        StrategyProfile { moves }
    }

    /// Picks, at each listed vertex, the first edge to the listed target.
    pub fn from_targets<S: AsRef<str>>(s: &PositionalStructure, pairs: &[(S, S)]) -> Result<Self> {
        let g = s.digraph();
        let mut profile = StrategyProfile::empty(s.vertex_count());
        for (from, to) in pairs {
            let (from, to) = (from.as_ref(), to.as_ref());
            let v = g.vertex(from).ok_or_else(|| Error::UnknownVertex(from.to_string()))?;
            let w = g.vertex(to).ok_or_else(|| Error::UnknownVertex(to.to_string()))?;
            let e = g
                .out_edges(v)
                .iter()
                .copied()
                .find(|&e| g.edge(e).target == w)
                .ok_or_else(|| Error::InvalidStrategy(format!("no edge `{from}` -> `{to}`")))?;
            if s.is_terminal(v) {
                return Err(Error::InvalidStrategy(format!("`{from}` is terminal")));
            }
            profile.moves[v] = Some(e);
        }
        Ok(profile)
    }

    pub fn moves(&self) -> &[Option<EdgeId>] {
        &self.moves
    }

    pub fn move_at(&self, v: VertexId) -> Option<EdgeId> {
        self.moves[v]
    }

    pub fn set_move(&mut self, v: VertexId, e: Option<EdgeId>) {
        self.moves[v] = e;
    }

    /// Overwrites the moves of `strategy`'s player.
    pub fn apply(&mut self, strategy: &Strategy) {
        for &v in &strategy.positions {
            self.moves[v] = strategy.moves[v];
        }
    }

    pub fn with(&self, strategy: &Strategy) -> StrategyProfile {
        let mut p = self.clone();
        p.apply(strategy);
        p
    }

    /// The half of this profile belonging to `player`.
    pub fn strategy_of(&self, s: &PositionalStructure, player: Player) -> Strategy {
        let positions = s.positions_of(player);
        let mut moves = vec![None; self.moves.len()];
        for &v in &positions {
            moves[v] = self.moves[v];
        }
        Strategy { player, positions, moves }
    }

    /// Combines per-player strategies into one profile.
    pub fn combine(vertex_count: usize, strategies: &[&Strategy]) -> Self {
        let mut p = StrategyProfile::empty(vertex_count);
        for s in strategies {
            p.apply(s);
        }
        p
    }

    /// `(vertex, target)` pairs for every vertex with a move.
    pub fn targets<'a>(&'a self, s: &'a PositionalStructure) -> impl Iterator<Item = (VertexId, VertexId)> + 'a {
        self.moves.iter().enumerate().filter_map(move |(v, e)| e.map(|e| (v, s.digraph().edge(e).target)))
    }
}

/// A positional strategy of one player.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Strategy {
    pub player: Player,
    positions: Vec<VertexId>,
    moves: Vec<Option<EdgeId>>,
}

impl Strategy {
    pub fn positions(&self) -> &[VertexId] {
        &self.positions
    }

    pub fn move_at(&self, v: VertexId) -> Option<EdgeId> {
        self.moves[v]
    }
}

#[derive(Clone, Debug)]
pub struct StrategySpace {
    player: Player,
    vertex_count: usize,
    positions: Vec<VertexId>,
    choices: Vec<Vec<EdgeId>>,
}

impl StrategySpace {
    pub fn len(&self) -> u64 {
        self.choices.iter().fold(1u64, |acc, c| acc.saturating_mul(c.len() as u64))
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn strategy(&self, mut index: u64) -> Strategy {
        let mut moves = vec![None; self.vertex_count];
        for (&v, choice) in self.positions.iter().zip(&self.choices) {
            let k = choice.len() as u64;
            moves[v] = Some(choice[(index % k) as usize]);
            index /= k;
        }
        Strategy { player: self.player, positions: self.positions.clone(), moves }
    }

    pub fn iter(&self) -> impl Iterator<Item = Strategy> + '_ {
        (0..self.len()).map(move |i| self.strategy(i))
    }
}

/// A normal-form table together with the strategies labelling its rows and
/// columns.
#[derive(Clone, Debug)]
pub struct GameForm {
    pub strategies: [Vec<Strategy>; 2],
    pub table: NormalFormTable,
}

/// `u(i, a)` for every player and outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UtilityFunction {
    values: Vec<Vec<Value>>,
}

impl UtilityFunction {
    /// `values[i][a]` is the payoff of player `i + 1` for outcome `a`.
    pub fn new(values: Vec<Vec<Value>>) -> Self {
        UtilityFunction { values }
    }

    pub fn from_fn(players: usize, outcomes: usize, mut f: impl FnMut(Player, OutcomeId) -> Value) -> Self {
        let values = (1..=players)
            .map(|i| (0..outcomes).map(|a| f(Player(i), a)).collect())
            .collect();
        UtilityFunction { values }
    }

    /// Zero-sum utility with `u₂ = 1 − u₁`.
    pub fn zero_sum(u1: Vec<Value>) -> Self {
        let u2 = u1.iter().map(|&v| Value::from_integer(1) - v).collect();
        UtilityFunction { values: vec![u1, u2] }
    }

    /// ±1 payoffs of a win/lose game.
    pub fn win_lose(partition: &WinLosePartition) -> Self {
        let one = Value::from_integer(1);
        let u1 = (0..partition.len())
            .map(|a| if partition.winner_of(a) == Player::ONE { one } else { -one })
            .collect::<Vec<_>>();
        let u2 = u1.iter().map(|&v| -v).collect();
        UtilityFunction { values: vec![u1, u2] }
    }

    pub fn players(&self) -> usize {
        self.values.len()
    }

    pub fn outcomes(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn get(&self, player: Player, outcome: OutcomeId) -> Value {
        self.values[player.index()][outcome]
    }

    pub fn of(&self, player: Player) -> &[Value] {
        &self.values[player.index()]
    }

    pub fn check_shape(&self, s: &PositionalStructure) -> Result<()> {
        if self.players() != s.players() || self.values.iter().any(|row| row.len() != s.outcome_count()) {
            return Err(Error::UtilityShape(format!(
                "expected {} players x {} outcomes",
                s.players(),
                s.outcome_count()
            )));
        }
        Ok(())
    }

    /// First pair of outcomes where `u₁ + u₂` differs, if any.
    pub fn zero_sum_violation(&self) -> Option<(OutcomeId, OutcomeId)> {
        if self.players() != 2 {
            return None;
        }
        let sum = |a: OutcomeId| self.values[0][a] + self.values[1][a];
        (1..self.outcomes()).find(|&a| sum(a) != sum(0)).map(|a| (0, a))
    }

    pub fn is_zero_sum(&self) -> bool {
        self.players() == 2 && self.zero_sum_violation().is_none()
    }

    pub fn is_win_lose(&self) -> bool {
        let one = Value::from_integer(1);
        self.players() == 2
            && (0..self.outcomes()).all(|a| {
                let (x, y) = (self.values[0][a], self.values[1][a]);
                (x == one || x == -one) && y == -x
            })
    }
}

/// A split `A = A₁ ∪ A₂` of the outcomes into the winning sets of the two
/// players.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WinLosePartition {
    winner: Vec<Player>,
}

impl WinLosePartition {
    pub fn from_a1(outcomes: usize, a1: impl IntoIterator<Item = OutcomeId>) -> Self {
        let mut winner = vec![Player::TWO; outcomes];
        for a in a1 {
            winner[a] = Player::ONE;
        }
        WinLosePartition { winner }
    }

    pub fn from_a2(outcomes: usize, a2: impl IntoIterator<Item = OutcomeId>) -> Self {
        let mut winner = vec![Player::ONE; outcomes];
        for a in a2 {
            winner[a] = Player::TWO;
        }
        WinLosePartition { winner }
    }

    pub fn from_winners(winner: Vec<Player>) -> Self {
        WinLosePartition { winner }
    }

    /// Resolves outcome names; unknown names are an error.
    pub fn from_names<S: AsRef<str>>(s: &PositionalStructure, a1: &[S]) -> Result<Self> {
        let ids = a1
            .iter()
            .map(|n| s.outcome_by_name(n.as_ref()).ok_or_else(|| Error::UnknownOutcome(n.as_ref().to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_a1(s.outcome_count(), ids))
    }

    pub fn len(&self) -> usize {
        self.winner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.winner.is_empty()
    }

    pub fn winner_of(&self, a: OutcomeId) -> Player {
        self.winner[a]
    }

    pub fn a1(&self) -> BTreeSet<OutcomeId> {
        (0..self.len()).filter(|&a| self.winner[a] == Player::ONE).collect()
    }

    pub fn a2(&self) -> BTreeSet<OutcomeId> {
        (0..self.len()).filter(|&a| self.winner[a] == Player::TWO).collect()
    }

    /// The partition of the original outcomes induced through `merge`.
    pub fn pull_back(&self, merge: &[OutcomeId]) -> WinLosePartition {
        WinLosePartition { winner: merge.iter().map(|&a| self.winner[a]).collect() }
    }
}
