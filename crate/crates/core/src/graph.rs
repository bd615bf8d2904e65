//! Port graphs underlying strand diagrams and closed diagrams.
//!
//! Every vertex has a fixed list of ports determined by its kind (this is
//! the rotation system): a split has in-port `0` and out-ports `1..=n`, a
//! merge has in-ports `1..=n` and out-port `0`, a σ-vertex has in-port `0`
//! and out-port `1`, a main source has out-port `0`, a main sink in-port `0`.
//! Each edge records the port it uses at both ends and an integer winding
//! weight (always zero in open diagrams).

use crate::error::{Error, Result};
use crate::perm::Permutation;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    MainSource,
    MainSink,
    Split,
    Merge,
    Sigma(Permutation),
}

impl VertexKind {
    pub fn port_count(&self, n: usize) -> usize {
        match self {
            VertexKind::Split | VertexKind::Merge => n + 1,
            VertexKind::Sigma(_) => 2,
            VertexKind::MainSource | VertexKind::MainSink => 1,
        }
    }

    pub fn is_out_port(&self, port: usize) -> bool {
        match self {
            VertexKind::Split => port >= 1,
            VertexKind::Merge => port == 0,
            VertexKind::Sigma(_) => port == 1,
            VertexKind::MainSource => true,
            VertexKind::MainSink => false,
        }
    }

    pub fn label(&self) -> Option<&Permutation> {
        match self {
            VertexKind::Sigma(p) => Some(p),
            _ => None,
        }
    }

    pub(crate) fn token(&self) -> String {
        match self {
            VertexKind::MainSource => "src".into(),
            VertexKind::MainSink => "snk".into(),
            VertexKind::Split => "split".into(),
            VertexKind::Merge => "merge".into(),
            VertexKind::Sigma(p) => format!("sigma{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub tail: VertexId,
    pub tail_port: usize,
    pub head: VertexId,
    pub head_port: usize,
    pub weight: i64,
}

/// A directed loop with neither splits nor merges, kept as a record because
/// it has no vertex to anchor an edge to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeLoop {
    pub winding: i64,
    pub label: Permutation,
}

#[derive(Clone, Debug)]
struct Vertex {
    kind: VertexKind,
    ports: Vec<Option<EdgeId>>,
}

#[derive(Clone, Debug)]
pub struct Graph {
    arity: usize,
    vertices: Vec<Option<Vertex>>,
    edges: Vec<Option<Edge>>,
    free_loops: Vec<FreeLoop>,
}

impl Graph {
    pub fn new(arity: usize) -> Self {
        Graph { arity, vertices: Vec::new(), edges: Vec::new(), free_loops: Vec::new() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn add_vertex(&mut self, kind: VertexKind) -> VertexId {
        let ports = vec![None; kind.port_count(self.arity)];
        self.vertices.push(Some(Vertex { kind, ports }));
        self.vertices.len() - 1
    }

    fn vertex(&self, v: VertexId) -> &Vertex {
        self.vertices[v].as_ref().expect("live vertex")
    }

    fn vertex_mut(&mut self, v: VertexId) -> &mut Vertex {
        self.vertices[v].as_mut().expect("live vertex")
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.get(v).is_some_and(Option::is_some)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.get(e).is_some_and(Option::is_some)
    }

    pub fn kind(&self, v: VertexId) -> &VertexKind {
        &self.vertex(v).kind
    }

    pub(crate) fn set_kind(&mut self, v: VertexId, kind: VertexKind) {
        let count = kind.port_count(self.arity);
        let vx = self.vertex_mut(v);
        vx.ports.resize(count, None);
        vx.kind = kind;
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        self.edges[e].as_ref().expect("live edge")
    }

    pub(crate) fn edge_mut(&mut self, e: EdgeId) -> &mut Edge {
        self.edges[e].as_mut().expect("live edge")
    }

    /// The edge attached at `port` of `v`.
    pub fn port(&self, v: VertexId, port: usize) -> Option<EdgeId> {
        self.vertex(v).ports[port]
    }

    pub fn port_edges(&self, v: VertexId) -> &[Option<EdgeId>] {
        &self.vertex(v).ports
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().enumerate().filter_map(|(i, v)| v.as_ref().map(|_| i))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().enumerate().filter_map(|(i, e)| e.as_ref().map(|_| i))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.is_some()).count()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_some()).count()
    }

    pub fn free_loops(&self) -> &[FreeLoop] {
        &self.free_loops
    }

    pub(crate) fn free_loops_mut(&mut self) -> &mut Vec<FreeLoop> {
        &mut self.free_loops
    }

    pub fn count_kind(&self, pred: impl Fn(&VertexKind) -> bool) -> usize {
        self.vertex_ids().filter(|&v| pred(self.kind(v))).count()
    }

    pub fn splits(&self) -> usize {
        self.count_kind(|k| matches!(k, VertexKind::Split))
    }

    pub fn merges(&self) -> usize {
        self.count_kind(|k| matches!(k, VertexKind::Merge))
    }

    pub fn sigmas(&self) -> usize {
        self.count_kind(|k| matches!(k, VertexKind::Sigma(_)))
    }

    pub fn connect(
        &mut self,
        tail: VertexId,
        tail_port: usize,
        head: VertexId,
        head_port: usize,
        weight: i64,
    ) -> Result<EdgeId> {
        for (v, p, out) in [(tail, tail_port, true), (head, head_port, false)] {
            if !self.contains_vertex(v) {
                return Err(Error::PatternMismatch(format!("no vertex {v}")));
            }
            let vx = self.vertex(v);
            if p >= vx.ports.len() || vx.kind.is_out_port(p) != out {
                return Err(Error::PatternMismatch(format!(
                    "port {p} of {} vertex {v} is not an {} port",
                    vx.kind.token(),
                    if out { "out" } else { "in" }
                )));
            }
            if vx.ports[p].is_some() {
                return Err(Error::PatternMismatch(format!("port {p} of vertex {v} is already used")));
            }
        }
        self.edges.push(Some(Edge { tail, tail_port, head, head_port, weight }));
        let e = self.edges.len() - 1;
        self.vertex_mut(tail).ports[tail_port] = Some(e);
        self.vertex_mut(head).ports[head_port] = Some(e);
        Ok(e)
    }

    pub(crate) fn remove_edge(&mut self, e: EdgeId) -> Edge {
        let edge = self.edges[e].take().expect("live edge");
        for (v, p) in [(edge.tail, edge.tail_port), (edge.head, edge.head_port)] {
            if let Some(vx) = self.vertices[v].as_mut() {
                if vx.ports[p] == Some(e) {
                    vx.ports[p] = None;
                }
            }
        }
        edge
    }

    /// Removes a vertex together with its incident edges.
    pub(crate) fn remove_vertex(&mut self, v: VertexId) {
        let ports = self.vertex(v).ports.clone();
        for e in ports.into_iter().flatten() {
            if self.contains_edge(e) {
                self.remove_edge(e);
            }
        }
        self.vertices[v] = None;
    }

    pub(crate) fn set_head(&mut self, e: EdgeId, v: VertexId, port: usize) {
        let old = self.edge(e).clone();
        if self.contains_vertex(old.head) && self.vertex(old.head).ports[old.head_port] == Some(e) {
            self.vertex_mut(old.head).ports[old.head_port] = None;
        }
        debug_assert!(self.vertex(v).ports[port].is_none());
        self.vertex_mut(v).ports[port] = Some(e);
        let edge = self.edge_mut(e);
        edge.head = v;
        edge.head_port = port;
    }

    pub(crate) fn set_tail(&mut self, e: EdgeId, v: VertexId, port: usize) {
        let old = self.edge(e).clone();
        if self.contains_vertex(old.tail) && self.vertex(old.tail).ports[old.tail_port] == Some(e) {
            self.vertex_mut(old.tail).ports[old.tail_port] = None;
        }
        debug_assert!(self.vertex(v).ports[port].is_none());
        self.vertex_mut(v).ports[port] = Some(e);
        let edge = self.edge_mut(e);
        edge.tail = v;
        edge.tail_port = port;
    }

    /// Splits edge `e` by a new σ-vertex; the original edge keeps its weight
    /// and now ends at the σ-vertex.
    pub(crate) fn insert_sigma(&mut self, e: EdgeId, sigma: Permutation) -> VertexId {
        let t = self.add_vertex(VertexKind::Sigma(sigma));
        let Edge { head, head_port, .. } = self.edge(e).clone();
        self.set_head(e, t, 0);
        self.vertex_mut(head).ports[head_port] = None;
        self.connect(t, 1, head, head_port, 0).expect("ports were just freed");
        t
    }

    /// Removes a σ-vertex, joining its two edges. A σ-vertex on a loop of its
    /// own becomes a free loop. Non-identity labels are only allowed in the
    /// loop case.
    pub(crate) fn contract_sigma(&mut self, v: VertexId) {
        let VertexKind::Sigma(label) = self.kind(v).clone() else { panic!("contract on a non-σ vertex") };
        let a = self.port(v, 0).expect("σ in-edge");
        let b = self.port(v, 1).expect("σ out-edge");
        if a == b {
            let w = self.edge(a).weight;
            self.remove_vertex(v);
            self.free_loops.push(FreeLoop { winding: w, label });
            return;
        }
        debug_assert!(label.is_identity());
        let eb = self.remove_edge(b);
        self.edge_mut(a).weight += eb.weight;
        self.vertex_mut(v).ports[0] = None;
        self.set_head(a, eb.head, eb.head_port);
        self.vertices[v] = None;
    }

    /// Contracts identity σ-vertices and turns σ self-loops into free loops.
    pub(crate) fn normalize(&mut self) {
        loop {
            let target = self.vertex_ids().find(|&v| match self.kind(v) {
                VertexKind::Sigma(p) => p.is_identity() || self.port(v, 0) == self.port(v, 1),
                _ => false,
            });
            match target {
                Some(v) => self.contract_sigma(v),
                None => break,
            }
        }
    }

    /// Every port of every vertex carries exactly one edge end.
    pub fn ports_complete(&self) -> bool {
        self.vertex_ids().all(|v| self.vertex(v).ports.iter().all(Option::is_some))
            && self.edge_ids().all(|e| {
                let ed = self.edge(e);
                self.vertex(ed.tail).ports[ed.tail_port] == Some(e) && self.vertex(ed.head).ports[ed.head_port] == Some(e)
            })
    }

    /// Kahn's algorithm; free loops are ignored.
    pub fn is_acyclic(&self) -> bool {
        let mut indeg = vec![0usize; self.vertices.len()];
        for e in self.edge_ids() {
            indeg[self.edge(e).head] += 1;
        }
        let mut stack: Vec<VertexId> = self.vertex_ids().filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for (p, e) in self.vertex(v).ports.iter().enumerate() {
                if let (Some(e), true) = (e, self.kind(v).is_out_port(p)) {
                    let h = self.edge(*e).head;
                    indeg[h] -= 1;
                    if indeg[h] == 0 {
                        stack.push(h);
                    }
                }
            }
        }
        seen == self.vertex_count()
    }

    /// Out-neighbour following the edge at out-port `port`.
    pub fn next(&self, v: VertexId, port: usize) -> Option<(VertexId, usize, EdgeId)> {
        let e = self.port(v, port)?;
        let ed = self.edge(e);
        Some((ed.head, ed.head_port, e))
    }

    /// In-neighbour along the edge at in-port `port`.
    pub fn prev(&self, v: VertexId, port: usize) -> Option<(VertexId, usize, EdgeId)> {
        let e = self.port(v, port)?;
        let ed = self.edge(e);
        Some((ed.tail, ed.tail_port, e))
    }

    /// Copies `other` into `self`, returning the vertex id translation.
    pub(crate) fn absorb(&mut self, other: &Graph) -> Vec<Option<VertexId>> {
        let mut map = vec![None; other.vertices.len()];
        for v in other.vertex_ids() {
            map[v] = Some(self.add_vertex(other.kind(v).clone()));
        }
        for e in other.edge_ids() {
            let ed = other.edge(e);
            self.connect(map[ed.tail].unwrap(), ed.tail_port, map[ed.head].unwrap(), ed.head_port, ed.weight)
                .expect("copy of a valid graph");
        }
        self.free_loops.extend(other.free_loops.iter().cloned());
        map
    }

    /// Undirected connected components over live vertices, each sorted.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut comp = vec![usize::MAX; self.vertices.len()];
        let mut out = Vec::new();
        for s in self.vertex_ids() {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut members = vec![s];
            comp[s] = out.len();
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for e in self.vertex(v).ports.iter().flatten() {
                    let ed = self.edge(*e);
                    for w in [ed.tail, ed.head] {
                        if comp[w] == usize::MAX {
                            comp[w] = out.len();
                            members.push(w);
                        }
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }
}
