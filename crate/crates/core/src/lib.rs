//! Backward induction for deterministic graphical multistage games whose
//! digraphs may contain cycles.
//!
//! A game is played on a finite digraph. Each non-terminal vertex is owned by
//! a player who picks an outgoing edge; every infinite play ends either in a
//! terminal loop or in a cycle of one strongly connected component, and that
//! terminal or component is its outcome.

pub mod cli;
pub mod digraph;
pub mod error;
pub mod format;
pub mod game;
pub mod generate;
pub mod nash;
pub mod oracle;
pub mod winlose;
pub mod zerosum;

pub use digraph::{condense, scc_decompose, ComponentId, ComponentKind, Condensation, Digraph, EdgeId, SccDecomposition, VertexId};
pub use error::{Error, Result};
pub use game::{
    Lasso, Outcome, OutcomeId, Player, PositionalStructure, Strategy, StrategyProfile, UtilityFunction, Value,
    WinLosePartition,
};
pub use nash::{build_nash, check_simple, NashCertificate};
pub use oracle::{check_solvability, NormalFormTable, Oracle, SolvabilityConfig, SolvabilityReport};
pub use winlose::{attractor, solve_winlose, WinLoseSolution};
pub use zerosum::{solve_dg_component, solve_zerosum, ZeroSumSolution};
