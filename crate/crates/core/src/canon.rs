//! Canonical strings for port graphs, used for isomorphism tests.
//!
//! A graph is first turned into a [`View`]: nodes with ordered ports and arcs
//! carrying a permutation label and a winding weight. In the raw view every
//! σ-vertex is a node and all arc labels are the identity. In the labelled
//! view chains of σ-vertices are folded into the arc they sit on.
//!
//! Serialization is a breadth-first walk from chosen start nodes. Along the
//! way each split and merge may be assigned a gauge `γ ∈ H` (when a gauge
//! group is supplied) and every node a potential `φ ∈ ℤ`; both are chosen so
//! that the arc through which a node is discovered becomes trivial. Two
//! graphs related by a gauge transformation and a coboundary therefore give
//! the same string once the start is fixed; minimizing over starts removes
//! the remaining choice.

use crate::graph::{Graph, VertexId, VertexKind};
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum NodeKind {
    Source(usize),
    Sink(usize),
    Split,
    Merge,
    Sigma(Permutation),
}

impl NodeKind {
    fn token(&self) -> String {
        match self {
            NodeKind::Source(i) => format!("S{i}"),
            NodeKind::Sink(i) => format!("T{i}"),
            NodeKind::Split => "s".into(),
            NodeKind::Merge => "m".into(),
            NodeKind::Sigma(p) => format!("x{p}"),
        }
    }

    fn is_out_port(&self, port: usize) -> bool {
        match self {
            NodeKind::Split => port >= 1,
            NodeKind::Merge => port == 0,
            NodeKind::Sigma(_) => port == 1,
            NodeKind::Source(_) => true,
            NodeKind::Sink(_) => false,
        }
    }

    fn gauged(&self) -> bool {
        matches!(self, NodeKind::Split | NodeKind::Merge)
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Arc {
    pub tail: usize,
    pub tail_port: usize,
    pub head: usize,
    pub head_port: usize,
    pub label: Permutation,
    pub weight: i64,
}

#[derive(Clone, Debug)]
pub(crate) struct View {
    pub arity: usize,
    pub kinds: Vec<NodeKind>,
    pub ports: Vec<Vec<usize>>,
    pub arcs: Vec<Arc>,
}

fn node_kind(kind: &VertexKind, index: &dyn Fn() -> usize) -> NodeKind {
    match kind {
        VertexKind::MainSource => NodeKind::Source(index()),
        VertexKind::MainSink => NodeKind::Sink(index()),
        VertexKind::Split => NodeKind::Split,
        VertexKind::Merge => NodeKind::Merge,
        VertexKind::Sigma(p) => NodeKind::Sigma(p.clone()),
    }
}

impl View {
    /// `boundary` gives the position of main sources and sinks; vertices of
    /// other kinds are looked up by id only.
    pub fn build(graph: &Graph, boundary: &dyn Fn(VertexId) -> usize, fold_sigmas: bool) -> View {
        let n = graph.arity();
        let keep = |v: VertexId| !fold_sigmas || !matches!(graph.kind(v), VertexKind::Sigma(_));
        let mut index = vec![usize::MAX; graph.vertex_ids().max().map_or(0, |m| m + 1)];
        let mut kinds = Vec::new();
        let mut ports = Vec::new();
        for v in graph.vertex_ids().filter(|&v| keep(v)) {
            index[v] = kinds.len();
            let kind = graph.kind(v);
            kinds.push(node_kind(kind, &|| boundary(v)));
            ports.push(vec![usize::MAX; kind.port_count(n)]);
        }
        let mut arcs = Vec::new();
        for e in graph.edge_ids() {
            let start = graph.edge(e);
            if !keep(start.tail) {
                continue;
            }
            let mut label = Permutation::identity(n);
            let mut weight = start.weight;
            let mut cur = start.clone();
            while !keep(cur.head) {
                if let VertexKind::Sigma(s) = graph.kind(cur.head) {
                    label = s.compose(&label);
                }
                let next = graph.port(cur.head, 1).expect("complete ports");
                cur = graph.edge(next).clone();
                weight += cur.weight;
            }
            let arc = arcs.len();
            let (t, h) = (index[start.tail], index[cur.head]);
            ports[t][start.tail_port] = arc;
            ports[h][cur.head_port] = arc;
            arcs.push(Arc { tail: t, tail_port: start.tail_port, head: h, head_port: cur.head_port, label, weight });
        }
        View { arity: n, kinds, ports, arcs }
    }

    pub fn node_count(&self) -> usize {
        self.kinds.len()
    }

    /// Undirected components, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.node_count()];
        let mut out = Vec::new();
        for s in 0..self.node_count() {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = out.len();
            let mut members = vec![s];
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for &a in &self.ports[v] {
                    let arc = &self.arcs[a];
                    for w in [arc.tail, arc.head] {
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

    /// Port of `v` as seen after applying gauge `g`.
    fn gauge_port(&self, v: usize, g: &Permutation, port: usize) -> usize {
        match self.kinds[v] {
            NodeKind::Split if port >= 1 => g.inverse().apply(port),
            NodeKind::Merge if port >= 1 => g.apply(port),
            _ => port,
        }
    }

    fn ungauge_port(&self, v: usize, g: &Permutation, port: usize) -> usize {
        match self.kinds[v] {
            NodeKind::Split if port >= 1 => g.apply(port),
            NodeKind::Merge if port >= 1 => g.inverse().apply(port),
            _ => port,
        }
    }

    /// Left factor contributed by the head of an arc.
    fn left(&self, v: usize, g: &Permutation) -> Permutation {
        match self.kinds[v] {
            NodeKind::Merge => g.clone(),
            NodeKind::Split => g.inverse(),
            _ => Permutation::identity(self.arity),
        }
    }

    /// Right factor contributed by the tail of an arc.
    fn right(&self, v: usize, g: &Permutation) -> Permutation {
        match self.kinds[v] {
            NodeKind::Merge => g.inverse(),
            NodeKind::Split => g.clone(),
            _ => Permutation::identity(self.arity),
        }
    }

    /// Serializes the part of the view reachable from `starts`.
    pub fn serialize(&self, starts: &[(usize, Permutation)]) -> String {
        let id = Permutation::identity(self.arity);
        let count = self.node_count();
        let mut order = vec![usize::MAX; count];
        let mut gauge: Vec<Permutation> = vec![id.clone(); count];
        let mut phi = vec![0i64; count];
        let mut queue = Vec::new();
        for (v, g) in starts {
            if order[*v] == usize::MAX {
                order[*v] = queue.len();
                gauge[*v] = g.clone();
                queue.push(*v);
            }
        }
        let mut out = String::new();
        let mut i = 0;
        while i < queue.len() {
            let v = queue[i];
            i += 1;
            out.push_str(&self.kinds[v].token());
            out.push('|');
            let gv = gauge[v].clone();
            for pp in 0..self.ports[v].len() {
                let p = self.ungauge_port(v, &gv, pp);
                let arc = &self.arcs[self.ports[v][p]];
                let out_port = self.kinds[v].is_out_port(p);
                let (x, xport) = if out_port { (arc.head, arc.head_port) } else { (arc.tail, arc.tail_port) };
                if order[x] == usize::MAX {
                    order[x] = queue.len();
                    queue.push(x);
                    if out_port {
                        // x is the head: make L_x ∘ λ ∘ R_v trivial
                        let rest = arc.label.compose(&self.right(v, &gv));
                        gauge[x] = match self.kinds[x] {
                            NodeKind::Merge => rest.inverse(),
                            NodeKind::Split => rest,
                            _ => id.clone(),
                        };
                        phi[x] = phi[v] + arc.weight;
                    } else {
                        let rest = self.left(v, &gv).compose(&arc.label);
                        gauge[x] = match self.kinds[x] {
                            NodeKind::Merge => rest,
                            NodeKind::Split => rest.inverse(),
                            _ => id.clone(),
                        };
                        phi[x] = phi[v] - arc.weight;
                    }
                }
                let (t, h) = (arc.tail, arc.head);
                let label = self.left(h, &gauge[h]).compose(&arc.label).compose(&self.right(t, &gauge[t]));
                let weight = arc.weight + phi[t] - phi[h];
                let xp = self.gauge_port(x, &gauge[x], xport);
                out.push_str(&format!("{pp}>{}.{xp}", order[x]));
                if !label.is_identity() {
                    out.push_str(&format!("{label}"));
                }
                if weight != 0 {
                    out.push_str(&format!("w{weight}"));
                }
                out.push(';');
            }
            out.push('\n');
        }
        out
    }

    /// Canonical string of one component: minimum over admissible starts.
    pub fn component_canon(&self, members: &[usize], gauges: &[Permutation]) -> String {
        let trivial = [Permutation::identity(self.arity)];
        let best_token = members.iter().map(|&v| self.kinds[v].token()).min().expect("nonempty component");
        let mut best: Option<String> = None;
        for &v in members.iter().filter(|&&v| self.kinds[v].token() == best_token) {
            let choices: &[Permutation] = if self.kinds[v].gauged() { gauges } else { &trivial };
            for g in choices {
                let s = self.serialize(&[(v, g.clone())]);
                if best.as_ref().is_none_or(|b| s < *b) {
                    best = Some(s);
                }
            }
        }
        best.unwrap()
    }

    /// Sorted component strings; `gauges` is the gauge group (just the
    /// identity for strict isomorphism).
    pub fn canon_components(&self, gauges: &[Permutation]) -> Vec<String> {
        let mut parts: Vec<String> = self.components().iter().map(|c| self.component_canon(c, gauges)).collect();
        parts.sort();
        parts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // split and merge joined by n parallel strands and one return edge
    fn ring(n: usize, back: i64, strands: i64, first: i64) -> Graph {
        let mut g = Graph::new(n);
        let s = g.add_vertex(VertexKind::Split);
        let m = g.add_vertex(VertexKind::Merge);
        for i in 1..=n {
            g.connect(s, i, m, i, if i == 1 { first } else { strands }).unwrap();
        }
        g.connect(m, 0, s, 0, back).unwrap();
        g
    }

    #[test]
    fn potentials_absorb_coboundaries() {
        let id = [Permutation::identity(2)];
        let canon = |back, strands, first| View::build(&ring(2, back, strands, first), &|_| 0, true).canon_components(&id);
        // shifting the potential of the merge by 1
        assert_eq!(canon(0, 0, 0), canon(1, -1, -1));
        assert_ne!(canon(0, 0, 0), canon(1, -1, 0));
        assert_ne!(canon(0, 0, 0), canon(0, 0, 1));
    }

    #[test]
    fn gauge_removes_a_sigma_into_a_split() {
        let n = 2;
        let swap = Permutation::transposition(2, 1, 2);
        let mut g = Graph::new(n);
        let s = g.add_vertex(VertexKind::Split);
        let m = g.add_vertex(VertexKind::Merge);
        g.connect(s, 1, m, 1, 0).unwrap();
        g.connect(s, 2, m, 2, 0).unwrap();
        let back = g.connect(m, 0, s, 0, 0).unwrap();
        let plain = View::build(&g, &|_| 0, true);
        g.insert_sigma(back, swap.clone());
        let twisted = View::build(&g, &|_| 0, true);
        let trivial = [Permutation::identity(2)];
        let full = [Permutation::identity(2), swap];
        assert_ne!(plain.canon_components(&trivial), twisted.canon_components(&trivial));
        assert_ne!(plain.canon_components(&full), twisted.canon_components(&full));
    }
}
