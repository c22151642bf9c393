//! Instance generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::game::{OutcomeId, Player, PositionalStructure, WinLosePartition};

/// The household game: `v1 → v2 → … → vn → v1`, each `vi` owned by player
/// `i` with an exit to its own terminal `ti`.
pub fn gen_household(n: usize) -> Result<PositionalStructure> {
    if n < 1 {
        return Err(Error::InvalidParameter("household needs n >= 1".into()));
    }
    let mut g = Digraph::new();
    for i in 1..=n {
        g.add_vertex(&format!("v{i}"))?;
    }
    for i in 1..=n {
        g.add_vertex(&format!("t{i}"))?;
    }
    for i in 0..n {
        g.add_edge(i, (i + 1) % n)?;
    }
    for i in 0..n {
        g.add_edge(i, n + i)?;
    }
    let owner = (0..2 * n).map(|v| if v < n { Player::new(v + 1) } else { None }).collect();
    PositionalStructure::new(&g, n, owner)
}

/// Parameters of [`gen_random`].
#[derive(Clone, Debug, PartialEq)]
pub struct RandomParams {
    pub vertices: usize,
    pub players: usize,
    /// Probability of each possible edge out of a non-terminal vertex.
    pub density: f64,
    pub terminal_fraction: f64,
    pub seed: u64,
}

const SCALE: u64 = 1 << 20;

fn to_fixed(p: f64) -> u64 {
    (p * SCALE as f64).round() as u64
}

/// A random structure. Probabilities are converted to fixed point once, so
/// the output depends only on the parameters and the seed.
///
/// Non-terminals are `v0, v1, …` and terminals `t0, t1, …`. Each non-terminal
/// gets every possible edge (loop included) with probability `density`, plus
/// one random edge to another vertex if that produced none.
pub fn gen_random(params: &RandomParams) -> Result<PositionalStructure> {
    let RandomParams { vertices, players, density, terminal_fraction, seed } = *params;
    if vertices < 2 {
        return Err(Error::InvalidParameter("a non-terminal position needs a second vertex to move to".into()));
    }
    if players == 0 {
        return Err(Error::InvalidParameter("at least one player is required".into()));
    }
    if !(0.0..=1.0).contains(&density) || !(0.0..=1.0).contains(&terminal_fraction) {
        return Err(Error::InvalidParameter("density and terminal fraction must lie in [0, 1]".into()));
    }
    let terminals = ((vertices as u64 * to_fixed(terminal_fraction) + SCALE / 2) / SCALE) as usize;
    if terminals >= vertices {
        return Err(Error::InvalidParameter(format!(
            "terminal fraction {terminal_fraction} leaves no non-terminal among {vertices} vertices"
        )));
    }
    let inner = vertices - terminals;
    let threshold = to_fixed(density);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut g = Digraph::new();
    for i in 0..inner {
        g.add_vertex(&format!("v{i}"))?;
    }
    for i in 0..terminals {
        g.add_vertex(&format!("t{i}"))?;
    }
    let mut owner = vec![None; vertices];
    for (v, slot) in owner.iter_mut().enumerate().take(inner) {
        *slot = Player::new(rng.random_range(1..=players as u64) as usize);
        let mut exits = false;
        for w in 0..vertices {
            if rng.random_range(0..SCALE) < threshold {
                g.add_edge(v, w)?;
                exits |= w != v;
            }
        }
        if !exits {
            let k = rng.random_range(0..vertices as u64 - 1) as usize;
            g.add_edge(v, if k >= v { k + 1 } else { k })?;
        }
    }
    PositionalStructure::new(&g, players, owner)
}

/// A chain of 2-cycles `a_k ⇄ b_k`, with `a_k → a_{k+1}` and
/// `b_k → b_{k+1}`; the last pair exits to two terminals. About `vertices`
/// vertices, two players.
pub fn gen_chain(vertices: usize) -> Result<PositionalStructure> {
    let pairs = (vertices.saturating_sub(2) / 2).max(1);
    let mut g = Digraph::new();
    for k in 0..pairs {
        g.add_vertex(&format!("a{k}"))?;
        g.add_vertex(&format!("b{k}"))?;
    }
    let t1 = g.add_vertex("t1")?;
    let t2 = g.add_vertex("t2")?;
    for k in 0..pairs {
        let (a, b) = (2 * k, 2 * k + 1);
        g.add_edge(a, b)?;
        g.add_edge(b, a)?;
        if k + 1 < pairs {
            g.add_edge(a, a + 2)?;
            g.add_edge(b, b + 2)?;
        } else {
            g.add_edge(a, t1)?;
            g.add_edge(b, t2)?;
        }
    }
    let owner = (0..g.vertex_count())
        .map(|v| if v >= 2 * pairs { None } else if v % 2 == 0 { Some(Player::ONE) } else { Some(Player::TWO) })
        .collect();
    PositionalStructure::new(&g, 2, owner)
}

/// Player 1 wins `t1` and the cycles of even-numbered pairs in a chain.
pub fn chain_partition(s: &PositionalStructure) -> WinLosePartition {
    let a1: Vec<OutcomeId> = s
        .outcomes()
        .iter()
        .enumerate()
        .filter(|(_, o)| match o.name.strip_prefix("c:a") {
            Some(k) => k.parse::<usize>().is_ok_and(|k| k % 2 == 0),
            None => o.name == "t1",
        })
        .map(|(a, _)| a)
        .collect();
    WinLosePartition::from_a1(s.outcome_count(), a1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::condense;

    #[test]
    fn household_shapes() {
        let s = gen_household(3).unwrap();
        assert_eq!(s.vertex_count(), 6);
        assert_eq!(s.scc().len(), 4);
        assert_eq!(s.outcome_count(), 4);

        let one = gen_household(1).unwrap();
        let v1 = one.digraph().vertex("v1").unwrap();
        assert!(one.digraph().loop_edge(v1).is_some());
        assert!(!one.is_terminal(v1));
        assert_eq!(one.outcome_names(), ["c:v1", "t1"]);

        let two = gen_household(2).unwrap();
        let c = condense(two.digraph(), two.scc());
        assert_eq!(c.quotient.edge_count(), 2);

        assert!(gen_household(0).is_err());
    }

    #[test]
    fn random_is_deterministic() {
        let p = RandomParams { vertices: 6, players: 2, density: 0.3, terminal_fraction: 0.3, seed: 42 };
        let a = gen_random(&p).unwrap();
        let b = gen_random(&p).unwrap();
        assert_eq!(a.digraph(), b.digraph());
        assert_eq!(a.outcome_names(), b.outcome_names());
        for v in a.digraph().vertices() {
            assert_eq!(a.owner(v), b.owner(v));
        }
    }

    #[test]
    fn random_rejects_all_terminals() {
        let p = RandomParams { vertices: 5, players: 2, density: 0.3, terminal_fraction: 1.0, seed: 1 };
        assert!(matches!(gen_random(&p), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn random_fuzz_builds() {
        for seed in 0..1000 {
            let p = RandomParams { vertices: 8, players: 2, density: 0.25, terminal_fraction: 0.25, seed };
            let s = gen_random(&p).unwrap();
            assert_eq!(s.vertex_count(), 8);
        }
    }

    #[test]
    fn chain_components() {
        let s = gen_chain(1000).unwrap();
        assert_eq!(s.vertex_count(), 1000);
        assert_eq!(s.scc().len(), 499 + 2);
        let p = chain_partition(&s);
        assert!(!p.a1().is_empty() && !p.a2().is_empty());
    }
}
