//! Strand diagrams: acyclic port graphs with ordered main sources and sinks.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::canon::View;
use crate::element::{BranchMap, TreePairElement};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, VertexKind};
use crate::perm::{Permutation, SubgroupH};
use crate::tree::{Tree, Word};

#[derive(Clone, Debug)]
pub struct StrandDiagram {
    subgroup: Arc<SubgroupH>,
    graph: Graph,
    sources: Vec<VertexId>,
    sinks: Vec<VertexId>,
}

impl StrandDiagram {
    /// `p` parallel strands.
    pub fn identity(subgroup: Arc<SubgroupH>, p: usize) -> Self {
        let mut graph = Graph::new(subgroup.arity());
        let mut sources = Vec::new();
        let mut sinks = Vec::new();
        for _ in 0..p {
            let s = graph.add_vertex(VertexKind::MainSource);
            let t = graph.add_vertex(VertexKind::MainSink);
            graph.connect(s, 0, t, 0, 0).expect("fresh ports");
            sources.push(s);
            sinks.push(t);
        }
        StrandDiagram { subgroup, graph, sources, sinks }
    }

    pub fn subgroup(&self) -> &Arc<SubgroupH> {
        &self.subgroup
    }

    pub fn arity(&self) -> usize {
        self.graph.arity()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub(crate) fn graph_mut(&mut self) -> &mut Graph {
        &mut self.graph
    }

    pub fn sources(&self) -> &[VertexId] {
        &self.sources
    }

    pub fn sinks(&self) -> &[VertexId] {
        &self.sinks
    }

    /// `(#sources, #sinks)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.sources.len(), self.sinks.len())
    }

    /// `(#splits, #merges, #σ-vertices)`.
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.graph.splits(), self.graph.merges(), self.graph.sigmas())
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Port completeness, acyclicity, labels in `H` and the strand count
    /// `q − p = (n − 1)(#splits − #merges)`.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::PatternMismatch(m.to_string()));
        if !self.graph.ports_complete() {
            return fail("a port is missing its edge");
        }
        if !self.graph.is_acyclic() {
            return fail("diagram has a directed cycle");
        }
        for v in self.graph.vertex_ids() {
            if let VertexKind::Sigma(p) = self.graph.kind(v) {
                if !self.subgroup.contains(p) {
                    return fail("sigma label outside H");
                }
            }
        }
        let (p, q) = self.shape();
        let (s, m, _) = self.counts();
        let n = self.arity() as i64;
        if q as i64 - p as i64 != (n - 1) * (s as i64 - m as i64) {
            return fail("strand count does not match splits and merges");
        }
        let boundary = self.graph.count_kind(|k| matches!(k, VertexKind::MainSource | VertexKind::MainSink));
        if boundary != p + q {
            return fail("stray main source or sink");
        }
        Ok(())
    }

    /// The diagram of a tree pair: splits for the domain carets, merges for
    /// the range carets, and a σ-vertex on every strand with a nontrivial
    /// label.
    pub fn build(g: &TreePairElement) -> StrandDiagram {
        let subgroup = g.subgroup().clone();
        let n = g.arity();
        let mut graph = Graph::new(n);
        let source = graph.add_vertex(VertexKind::MainSource);
        let sink = graph.add_vertex(VertexKind::MainSink);
        let starts = attach_tree(&mut graph, g.domain(), source, true);
        let ends = attach_tree(&mut graph, g.range(), sink, false);
        for (i, &t) in g.tau().iter().enumerate() {
            let (tv, tp) = starts[i];
            let (hv, hp) = ends[t - 1];
            let e = graph.connect(tv, tp, hv, hp, 0).expect("fresh leaf ports");
            let label = &g.labels()[t - 1];
            if !label.is_identity() {
                graph.insert_sigma(e, label.clone());
            }
        }
        StrandDiagram { subgroup, graph, sources: vec![source], sinks: vec![sink] }
    }

    /// Reads a reduced (1,1)-diagram back as a tree pair.
    pub fn cut(&self) -> Result<TreePairElement> {
        let (p, q) = self.shape();
        if (p, q) != (1, 1) {
            return Err(Error::NotOneOne(p, q));
        }
        if !crate::rewrite::find_redexes(self).is_empty() {
            return Err(Error::NotReduced);
        }
        let g = &self.graph;
        let n = self.arity();
        let mut branches = Vec::new();
        let mut stack = vec![(g.next(self.sources[0], 0).ok_or(Error::NotReduced)?, Word::empty())];
        while let Some(((v, vport, _), addr)) = stack.pop() {
            if matches!(g.kind(v), VertexKind::Split) {
                for j in (1..=n).rev() {
                    stack.push((g.next(v, j).ok_or(Error::NotReduced)?, addr.child(j)));
                }
                continue;
            }
            let (cur, port, label) = match g.kind(v) {
                VertexKind::Sigma(s) => {
                    let (h, hp, _) = g.next(v, 1).ok_or(Error::NotReduced)?;
                    (h, hp, s.clone())
                }
                _ => (v, vport, Permutation::identity(n)),
            };
            let range = climb(g, cur, port)?;
            branches.push(BranchMap { domain: addr, range, label });
        }
        TreePairElement::from_branches(self.subgroup.clone(), branches)
    }

    /// Glues the sinks of `self` onto the sources of `other`, so the result
    /// represents `other ∘ self`.
    pub fn concatenate(&self, other: &StrandDiagram) -> Result<StrandDiagram> {
        if self.arity() != other.arity() {
            return Err(Error::ArityMismatch(self.arity(), other.arity()));
        }
        if self.subgroup != other.subgroup {
            return Err(Error::SubgroupMismatch);
        }
        if self.sinks.len() != other.sources.len() {
            return Err(Error::CountMismatch(self.sinks.len(), other.sources.len()));
        }
        let mut graph = self.graph.clone();
        let map = graph.absorb(&other.graph);
        let id = Permutation::identity(self.arity());
        for (&t, &s) in self.sinks.iter().zip(&other.sources) {
            let s = map[s].unwrap();
            let out = graph.port(s, 0).expect("source edge");
            graph.set_kind(t, VertexKind::Sigma(id.clone()));
            graph.set_tail(out, t, 1);
            graph.remove_vertex(s);
        }
        graph.normalize();
        let sinks = other.sinks.iter().map(|&t| map[t].unwrap()).collect();
        Ok(StrandDiagram { subgroup: self.subgroup.clone(), graph, sources: self.sources.clone(), sinks })
    }

    /// Canonical string: equal exactly for isomorphic diagrams preserving
    /// the order of sources and sinks.
    pub fn canonical_form(&self) -> String {
        let view = View::build(&self.graph, &|v| self.boundary_index(v), false);
        let id = Permutation::identity(self.arity());
        let starts: Vec<(usize, Permutation)> =
            (0..self.sources.len()).map(|i| (self.view_index(i), id.clone())).collect();
        let mut s = view.serialize(&starts);
        // vertices not reachable from any source (only possible for malformed input)
        if s.lines().count() < view.node_count() {
            for part in view.canon_components(&[id]) {
                s.push_str(&part);
            }
        }
        s
    }

    fn boundary_index(&self, v: VertexId) -> usize {
        self.sources.iter().position(|&s| s == v).or_else(|| self.sinks.iter().position(|&s| s == v)).unwrap_or(0)
    }

    /// Index in the raw view of the `i`-th source.
    fn view_index(&self, i: usize) -> usize {
        self.graph.vertex_ids().position(|v| v == self.sources[i]).expect("live source")
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph strand {\n  rankdir=TB;\n");
        for v in self.graph.vertex_ids() {
            let (label, shape) = match self.graph.kind(v) {
                VertexKind::MainSource => (format!("in{}", self.boundary_index(v) + 1), "box"),
                VertexKind::MainSink => (format!("out{}", self.boundary_index(v) + 1), "box"),
                VertexKind::Split => ("split".to_string(), "triangle"),
                VertexKind::Merge => ("merge".to_string(), "invtriangle"),
                VertexKind::Sigma(p) => (p.to_string(), "circle"),
            };
            let _ = writeln!(out, "  v{v} [label=\"{label}\", shape={shape}];");
        }
        for e in self.graph.edge_ids() {
            let ed = self.graph.edge(e);
            let _ = writeln!(
                out,
                "  v{} -> v{} [taillabel=\"{}\", headlabel=\"{}\"];",
                ed.tail, ed.head, ed.tail_port, ed.head_port
            );
        }
        out.push_str("}\n");
        out
    }
}

pub fn build_diagram(g: &TreePairElement) -> StrandDiagram {
    StrandDiagram::build(g)
}

pub fn cut_diagram(d: &StrandDiagram) -> Result<TreePairElement> {
    d.cut()
}

pub fn diagram_equal(a: &StrandDiagram, b: &StrandDiagram) -> bool {
    a.arity() == b.arity() && a.shape() == b.shape() && a.canonical_form() == b.canonical_form()
}

/// Hangs the carets of `tree` below (`top`) or above (`!top`) the vertex
/// `anchor`; returns, per leaf, the free port where a strand attaches.
fn attach_tree(graph: &mut Graph, tree: &Tree, anchor: VertexId, top: bool) -> Vec<(VertexId, usize)> {
    let leaves = tree.leaf_addresses();
    let mut internal: Vec<Word> = Vec::new();
    for leaf in &leaves {
        let letters: Vec<usize> = leaf.letters().collect();
        for k in 0..letters.len() {
            let w = Word::new(&letters[..k]);
            if !internal.contains(&w) {
                internal.push(w);
            }
        }
    }
    internal.sort();
    let kind = if top { VertexKind::Split } else { VertexKind::Merge };
    let ids: Vec<VertexId> = internal.iter().map(|_| graph.add_vertex(kind.clone())).collect();
    let find = |w: &Word| internal.binary_search(w).ok().map(|i| ids[i]);
    // the free port at address w, viewed from its parent
    let slot = |w: &Word| -> (VertexId, usize) {
        let letters: Vec<usize> = w.letters().collect();
        match letters.split_last() {
            None => (anchor, 0),
            Some((&last, init)) => (find(&Word::new(init)).expect("parent caret"), last),
        }
    };
    for (w, &v) in internal.iter().zip(&ids) {
        let (pv, pp) = slot(w);
        if top {
            graph.connect(pv, pp, v, 0, 0).expect("fresh ports");
        } else {
            graph.connect(v, 0, pv, pp, 0).expect("fresh ports");
        }
    }
    leaves.iter().map(slot).collect()
}

/// Range address of the strand entering `v` at `port`: the in-ports met on
/// the way down through merges to the sink, in reverse.
fn climb(g: &Graph, mut v: VertexId, mut port: usize) -> Result<Word> {
    let mut letters = Vec::new();
    loop {
        match g.kind(v) {
            VertexKind::MainSink => break,
            VertexKind::Merge => {
                letters.push(port);
                let (h, hp, _) = g.next(v, 0).ok_or(Error::NotReduced)?;
                v = h;
                port = hp;
            }
            _ => return Err(Error::NotReduced),
        }
    }
    letters.reverse();
    Ok(Word::new(&letters))
}
