//! Win/lose games solved by backward induction over the condensation.
//!
//! Components are visited sinks-first. Each one is solved by a single
//! attractor for the player who dislikes its cyclic outcome; the player who
//! likes it only has to avoid that attractor. The component is then replaced
//! by terminal loops labelled with their winners.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::digraph::{ComponentId, ComponentKind, EdgeId, VertexId};
use crate::error::Result;
use crate::game::{Player, PositionalStructure, StrategyProfile, WinLosePartition};

#[derive(Clone, Debug)]
pub struct WinLoseSolution {
    pub winner: Vec<Player>,
    pub profile: StrategyProfile,
    /// Attractor layer of each vertex that was attracted; terminals sit at 0.
    pub layer: Vec<Option<usize>>,
    /// Components with a dicycle that were resolved, terminal loops included.
    pub steps: usize,
}

/// Attractor of one player within a region, as returned by [`attractor`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attractor {
    /// All attracted vertices, targets included.
    pub region: BTreeSet<VertexId>,
    /// Move of the attracting player at each attracted vertex it owns.
    pub strategy: BTreeMap<VertexId, EdgeId>,
    pub layer: BTreeMap<VertexId, usize>,
}

/// Reusable buffers for attractor runs. Stamps avoid clearing per run.
#[derive(Clone, Debug)]
pub(crate) struct AttractorScratch {
    stamp: u32,
    in_region: Vec<u32>,
    attracted: Vec<u32>,
    counter: Vec<usize>,
    pub(crate) layer: Vec<usize>,
    pub(crate) choice: Vec<Option<EdgeId>>,
    queue: VecDeque<VertexId>,
}

impl AttractorScratch {
    pub(crate) fn new(n: usize) -> Self {
        AttractorScratch {
            stamp: 0,
            in_region: vec![0; n],
            attracted: vec![0; n],
            counter: vec![0; n],
            layer: vec![0; n],
            choice: vec![None; n],
            queue: VecDeque::new(),
        }
    }

    pub(crate) fn in_region(&self, v: VertexId) -> bool {
        self.in_region[v] == self.stamp
    }

    pub(crate) fn is_attracted(&self, v: VertexId) -> bool {
        self.attracted[v] == self.stamp
    }

    fn attract(&mut self, v: VertexId, layer: usize, choice: Option<EdgeId>) {
        self.attracted[v] = self.stamp;
        self.layer[v] = layer;
        self.choice[v] = choice;
        self.queue.push_back(v);
    }

    fn hit(&mut self, s: &PositionalStructure, v: VertexId, e: EdgeId, layer: usize, player: Player) {
        if self.is_attracted(v) {
            return;
        }
        if s.owner(v) == Some(player) {
            self.attract(v, layer, Some(e));
        } else {
            self.counter[v] -= 1;
            if self.counter[v] == 0 {
                self.attract(v, layer, None);
            }
        }
    }

    /// Computes the attractor of `player` inside `region` towards the
    /// vertices outside the region for which `is_target` holds (and region
    /// vertices for which it holds, at layer 0). Afterwards
    /// [`Self::is_attracted`], `layer` and `choice` describe the result for
    /// region vertices.
    pub(crate) fn run(
        &mut self,
        s: &PositionalStructure,
        region: &[VertexId],
        is_target: &dyn Fn(VertexId) -> bool,
        player: Player,
    ) {
        let g = s.digraph();
        self.stamp += 1;
        self.queue.clear();
        for &v in region {
            self.in_region[v] = self.stamp;
            self.counter[v] = g.out_degree(v);
        }
        for &v in region {
            if is_target(v) {
                self.attract(v, 0, None);
            }
        }
        for &v in region {
            for &e in g.out_edges(v) {
                let w = g.edge(e).target;
                if !self.in_region(w) && is_target(w) {
                    self.hit(s, v, e, 1, player);
                }
            }
        }
        while let Some(u) = self.queue.pop_front() {
            let next = self.layer[u] + 1;
            for &e in g.in_edges(u) {
                let w = g.edge(e).source;
                if self.in_region(w) {
                    self.hit(s, w, e, next, player);
                }
            }
        }
    }
}

/// Attractor of `player` to `targets` within `region`: the least set closed
/// under adding a vertex of `player` with some move into the set, and a
/// vertex of anyone else all of whose moves enter the set.
pub fn attractor(s: &PositionalStructure, region: &[VertexId], targets: &[VertexId], player: Player) -> Attractor {
    let mut scratch = AttractorScratch::new(s.vertex_count());
    let target_set: BTreeSet<VertexId> = targets.iter().copied().collect();
    scratch.run(s, region, &|v| target_set.contains(&v), player);
    let mut result = Attractor { region: BTreeSet::new(), strategy: BTreeMap::new(), layer: BTreeMap::new() };
    for &t in &target_set {
        result.region.insert(t);
        result.layer.insert(t, 0);
    }
    for &v in region {
        if scratch.is_attracted(v) {
            result.region.insert(v);
            result.layer.insert(v, scratch.layer[v]);
            if let Some(e) = scratch.choice[v] {
                result.strategy.insert(v, e);
            }
        }
    }
    result
}

/// Solves one component whose exits all lead to already labelled vertices.
///
/// `favored` is the player who wins if play stays in the component forever
/// (for a component without a dicycle any player may be passed). Writes the
/// winner, the move and the attractor layer of every component vertex.
#[allow(clippy::too_many_arguments)]
pub(crate) fn solve_component(
    s: &PositionalStructure,
    scratch: &mut AttractorScratch,
    j: ComponentId,
    favored: Player,
    exit_winner: &dyn Fn(VertexId) -> Player,
    winner: &mut [Option<Player>],
    moves: &mut [Option<EdgeId>],
    layer: &mut [Option<usize>],
) {
    let g = s.digraph();
    let opponent = favored.opponent();
    let region = s.scc().component(j);
    scratch.run(s, region, &|w| s.scc().component_of(w) != j && exit_winner(w) == opponent, opponent);
    for &v in region {
        let out = g.out_edges(v);
        if scratch.is_attracted(v) {
            winner[v] = Some(opponent);
            layer[v] = Some(scratch.layer[v]);
            moves[v] = match scratch.choice[v] {
                Some(e) => Some(e),
                None => out.first().copied(),
            };
        } else {
            winner[v] = Some(favored);
            layer[v] = None;
            moves[v] = if s.owner(v) == Some(favored) {
                let stays = |e: &&EdgeId| {
                    let w = g.edge(**e).target;
                    scratch.in_region(w) && !scratch.is_attracted(w)
                };
                let avoids = |e: &&EdgeId| {
                    let w = g.edge(**e).target;
                    if scratch.in_region(w) {
                        !scratch.is_attracted(w)
                    } else {
                        exit_winner(w) == favored
                    }
                };
                let e = out.iter().find(stays).or_else(|| out.iter().find(avoids));
                Some(*e.expect("an unattracted vertex of the favored player has a safe move"))
            } else {
                out.first().copied()
            };
        }
    }
}

/// The game as it shrinks during backward induction: components already
/// solved have been replaced by terminal loops carrying a label.
#[derive(Clone, Debug)]
pub struct WorkingGame<'a, L> {
    structure: &'a PositionalStructure,
    label: Vec<Option<L>>,
    eliminated: Vec<bool>,
    live: usize,
}

impl<'a, L: Copy> WorkingGame<'a, L> {
    pub fn new(structure: &'a PositionalStructure) -> Self {
        let scc = structure.scc();
        let live = (0..scc.len()).filter(|&j| !scc.is_terminal(j)).count();
        WorkingGame {
            structure,
            label: vec![None; structure.vertex_count()],
            eliminated: vec![false; scc.len()],
            live,
        }
    }

    pub fn structure(&self) -> &'a PositionalStructure {
        self.structure
    }

    /// Label of a vertex that has become a terminal loop.
    pub fn label(&self, v: VertexId) -> Option<L> {
        self.label[v]
    }

    pub fn is_eliminated(&self, j: ComponentId) -> bool {
        self.eliminated[j]
    }

    /// Components that are not (yet) terminal loops.
    pub fn live_components(&self) -> usize {
        self.live
    }

    /// True when every edge leaving component `j` reaches a labelled vertex.
    pub fn exits_resolved(&self, j: ComponentId) -> bool {
        let s = self.structure;
        let g = s.digraph();
        s.scc().component(j).iter().all(|&v| {
            g.successors(v).all(|w| s.scc().component_of(w) == j || self.label[w].is_some())
        })
    }

    /// Drops the edges of component `j` and turns each of its vertices into a
    /// terminal loop carrying `labels(v)`.
    pub fn eliminate_component(&mut self, j: ComponentId, labels: impl Fn(VertexId) -> L) {
        assert!(!self.eliminated[j], "component {j} eliminated twice");
        for &v in self.structure.scc().component(j) {
            self.label[v] = Some(labels(v));
        }
        self.eliminated[j] = true;
        if !self.structure.scc().is_terminal(j) {
            self.live -= 1;
        }
    }

    /// Labels an original terminal loop.
    pub(crate) fn label_terminal(&mut self, j: ComponentId, label: L) {
        let v = self.structure.scc().component(j)[0];
        self.label[v] = Some(label);
        self.eliminated[j] = true;
    }
}

/// Solves the win/lose game given by `partition` from every position at once.
pub fn solve_winlose(s: &PositionalStructure, partition: &WinLosePartition) -> Result<WinLoseSolution> {
    s.require_two_person()?;
    let n = s.vertex_count();
    let scc = s.scc();
    let mut work: WorkingGame<Player> = WorkingGame::new(s);
    let mut winner: Vec<Option<Player>> = vec![None; n];
    let mut moves: Vec<Option<EdgeId>> = vec![None; n];
    let mut layer: Vec<Option<usize>> = vec![None; n];
    let mut scratch = AttractorScratch::new(n);
    let mut steps = 0;

    let favored_of = |j: ComponentId| match s.outcome_of_component(j) {
        Some(a) => partition.winner_of(a),
        None => Player::ONE,
    };

    for j in 0..scc.len() {
        if scc.is_terminal(j) {
            let p = favored_of(j);
            let t = scc.component(j)[0];
            winner[t] = Some(p);
            layer[t] = Some(0);
            work.label_terminal(j, p);
            steps += 1;
        }
    }

    // Sink components other than terminal loops: the owner of their cyclic
    // outcome wins everywhere in them just by staying inside.
    for j in 0..scc.len() {
        if scc.kind(j) == ComponentKind::Cyclic && !has_exit(s, j) {
            let p = favored_of(j);
            solve_component(s, &mut scratch, j, p, &|_| p, &mut winner, &mut moves, &mut layer);
            work.eliminate_component(j, |_| p);
            steps += 1;
        }
    }

    // Component ids are sinks-first, so exits of `j` are labelled by now.
    for j in 0..scc.len() {
        if work.is_eliminated(j) {
            continue;
        }
        debug_assert!(work.exits_resolved(j));
        let p = favored_of(j);
        let label = |w: VertexId| work.label(w).expect("exit leads to a labelled vertex");
        solve_component(s, &mut scratch, j, p, &label, &mut winner, &mut moves, &mut layer);
        work.eliminate_component(j, |v| winner[v].expect("component vertices are solved"));
        if scc.has_dicycle(j) {
            steps += 1;
        }
    }
    debug_assert_eq!(work.live_components(), 0);

    Ok(WinLoseSolution {
        winner: winner.into_iter().map(|w| w.expect("every vertex is solved")).collect(),
        profile: StrategyProfile::from_moves(moves),
        layer,
        steps,
    })
}

fn has_exit(s: &PositionalStructure, j: ComponentId) -> bool {
    let scc = s.scc();
    scc.component(j).iter().any(|&v| s.digraph().successors(v).any(|w| scc.component_of(w) != j))
}
