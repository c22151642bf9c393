//! Finite digraphs, strongly connected components and the condensation.
//!
//! Vertices and edges are dense indices. Edge ids are insertion positions and
//! stay valid through [`Digraph::normalized`], which only appends loops.

use std::collections::HashMap;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;
pub type ComponentId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub source: VertexId,
    pub target: VertexId,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Digraph {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: Vec<Edge>,
    out: Vec<Vec<EdgeId>>,
    inc: Vec<Vec<EdgeId>>,
    loop_edge: Vec<Option<EdgeId>>,
    terminal: Vec<bool>,
    normalized: bool,
}

impl Digraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a digraph from vertex ids and `(source, target)` pairs. Edge ids
    /// follow the order of `edges`.
    pub fn build<V, E>(vertices: &[V], edges: &[(E, E)]) -> Result<Self>
    where
        V: AsRef<str>,
        E: AsRef<str>,
    {
        let mut g = Digraph::new();
        for v in vertices {
            g.add_vertex(v.as_ref())?;
        }
        for (s, t) in edges {
            g.add_edge_by_name(s.as_ref(), t.as_ref())?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<VertexId> {
        if self.index.contains_key(name) {
            return Err(Error::DuplicateVertex(name.to_string()));
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        self.out.push(Vec::new());
        self.inc.push(Vec::new());
        self.loop_edge.push(None);
        self.terminal.push(false);
        self.normalized = false;
        Ok(id)
    }

    pub fn add_edge(&mut self, source: VertexId, target: VertexId) -> Result<EdgeId> {
        let n = self.names.len();
        if source >= n {
            return Err(Error::UnknownVertex(format!("#{source}")));
        }
        if target >= n {
            return Err(Error::UnknownVertex(format!("#{target}")));
        }
        if source == target && self.loop_edge[source].is_some() {
            return Err(Error::SecondLoop(self.names[source].clone()));
        }
        let id = self.edges.len();
        self.edges.push(Edge { source, target });
        self.out[source].push(id);
        self.inc[target].push(id);
        if source == target {
            self.loop_edge[source] = Some(id);
        }
        self.normalized = false;
        Ok(id)
    }

    pub fn add_edge_by_name(&mut self, source: &str, target: &str) -> Result<EdgeId> {
        let s = self.vertex(source).ok_or_else(|| Error::UnknownVertex(source.to_string()))?;
        let t = self.vertex(target).ok_or_else(|| Error::UnknownVertex(target.to_string()))?;
        self.add_edge(s, t)
    }

    /// Adds a loop to every vertex without a non-loop exit and flags those
    /// loops as terminal. Idempotent.
    pub fn normalized(&self) -> Digraph {
        let mut g = self.clone();
        for v in 0..g.names.len() {
            let has_exit = g.out[v].iter().any(|&e| !g.edges[e].is_loop());
            if !has_exit && g.loop_edge[v].is_none() {
                g.add_edge(v, v).expect("vertex has no loop yet");
            }
            g.terminal[v] = !has_exit;
        }
        g.normalized = true;
        g
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.names.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Edge {
        self.edges[e]
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out[v]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.inc[v]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out[v].len()
    }

    pub fn loop_edge(&self, v: VertexId) -> Option<EdgeId> {
        self.loop_edge[v]
    }

    /// True for vertices whose only move is their loop. Always false before
    /// normalization.
    pub fn is_terminal(&self, v: VertexId) -> bool {
        self.terminal[v]
    }

    /// The loop of a terminal vertex, if the vertex is terminal.
    pub fn terminal_loop(&self, v: VertexId) -> Option<EdgeId> {
        if self.terminal[v] {
            self.loop_edge[v]
        } else {
            None
        }
    }

    pub fn successors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.out[v].iter().map(move |&e| self.edges[e].target)
    }

    /// Kahn's algorithm; `None` when the digraph has a dicycle (loops included).
    pub fn topological_order(&self) -> Option<Vec<VertexId>> {
        let n = self.names.len();
        let mut indeg: Vec<usize> = (0..n).map(|v| self.inc[v].len()).collect();
        let mut order: Vec<VertexId> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for w in self.successors(v) {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    order.push(w);
                }
            }
        }
        (order.len() == n).then_some(order)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComponentKind {
    /// Single vertex without a loop (the class J₀).
    Transient,
    /// Single vertex whose only move is its loop (the class J_T).
    TerminalLoop,
    /// Any other component; it contains a dicycle.
    Cyclic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccDecomposition {
    components: Vec<Vec<VertexId>>,
    component_of: Vec<ComponentId>,
    kinds: Vec<ComponentKind>,
}

impl SccDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Vertices of component `j`, ascending.
    pub fn component(&self, j: ComponentId) -> &[VertexId] {
        &self.components[j]
    }

    pub fn components(&self) -> &[Vec<VertexId>] {
        &self.components
    }

    pub fn component_of(&self, v: VertexId) -> ComponentId {
        self.component_of[v]
    }

    pub fn kind(&self, j: ComponentId) -> ComponentKind {
        self.kinds[j]
    }

    pub fn has_dicycle(&self, j: ComponentId) -> bool {
        self.kinds[j] != ComponentKind::Transient
    }

    pub fn is_zero(&self, j: ComponentId) -> bool {
        self.kinds[j] == ComponentKind::Transient
    }

    pub fn is_terminal(&self, j: ComponentId) -> bool {
        self.kinds[j] == ComponentKind::TerminalLoop
    }

    pub fn j_zero(&self) -> impl Iterator<Item = ComponentId> + '_ {
        (0..self.len()).filter(|&j| self.is_zero(j))
    }

    pub fn j_terminal(&self) -> impl Iterator<Item = ComponentId> + '_ {
        (0..self.len()).filter(|&j| self.is_terminal(j))
    }
}

/// Tarjan's algorithm over plain adjacency lists, without recursion.
///
/// Components come out in reverse topological order of the condensation:
/// every edge between distinct components goes from a higher index to a
/// lower one.
pub(crate) fn tarjan(adj: &[Vec<VertexId>]) -> (Vec<Vec<VertexId>>, Vec<ComponentId>) {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<VertexId> = Vec::new();
    let mut comp_of = vec![UNSEEN; n];
    let mut comps: Vec<Vec<VertexId>> = Vec::new();
    let mut next_index = 0;
    // (vertex, position of the next successor to look at)
    let mut call: Vec<(VertexId, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = adj[v].get(*pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let j = comps.len();
                let mut members = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp_of[w] = j;
                    members.push(w);
                    if w == v {
                        break;
                    }
                }
                members.sort_unstable();
                comps.push(members);
            }
        }
    }
    (comps, comp_of)
}

/// Decomposes `g` into strongly connected components. Component ids are
/// sinks-first (reverse topological order of the condensation).
pub fn scc_decompose(g: &Digraph) -> SccDecomposition {
    let adj: Vec<Vec<VertexId>> = g.vertices().map(|v| g.successors(v).collect()).collect();
    let (components, component_of) = tarjan(&adj);
    let kinds = components
        .iter()
        .map(|members| {
            if members.len() > 1 {
                return ComponentKind::Cyclic;
            }
            let v = members[0];
            match g.loop_edge(v) {
                None => ComponentKind::Transient,
                Some(_) if g.out_degree(v) == 1 => ComponentKind::TerminalLoop,
                Some(_) => ComponentKind::Cyclic,
            }
        })
        .collect();
    SccDecomposition { components, component_of, kinds }
}

#[derive(Clone, Debug)]
pub struct Condensation {
    /// Vertex `j` of the quotient is component `j`, named by its index.
    pub quotient: Digraph,
    /// For each quotient edge, one original edge witnessing it.
    pub lift: Vec<EdgeId>,
}

pub fn condense(g: &Digraph, scc: &SccDecomposition) -> Condensation {
    let mut quotient = Digraph::new();
    for j in 0..scc.len() {
        quotient.add_vertex(&j.to_string()).expect("component ids are distinct");
    }
    let mut lift = Vec::new();
    let mut seen_from = vec![usize::MAX; scc.len()];
    for j in 0..scc.len() {
        for &v in scc.component(j) {
            for &e in g.out_edges(v) {
                let k = scc.component_of(g.edge(e).target);
                if k != j && seen_from[k] != j {
                    seen_from[k] = j;
                    quotient.add_edge(j, k).expect("quotient endpoints exist");
                    lift.push(e);
                }
            }
        }
    }
    Condensation { quotient, lift }
}
