//! Closed diagrams: strand diagrams with sinks glued back onto sources,
//! carrying an integer winding weight on every edge.
//!
//! Free loops obey the relation obtained by inserting a split/merge pair on
//! the loop and cancelling it the other way round:
//!
//! ```text
//! {k, σ}  =  Σ over cycles c of σ  {k·|c|, σ^|c|}
//! ```
//!
//! so a multiset of loops is an element of the commutative monoid presented
//! by these relations (a graph monoid on pairs `(k, [σ])`). Every vertex of
//! that graph with a fixed point has a loop with an exit, which makes all
//! elements properly infinite; two elements are then equal exactly when
//! they generate the same order ideal and agree in its Grothendieck group.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::canon::View;
use crate::diagram::StrandDiagram;
use crate::element::TreePairElement;
use crate::error::{Error, Result};
use crate::graph::{FreeLoop, Graph, VertexId, VertexKind};
use crate::perm::{Permutation, SubgroupH};
use crate::rewrite::{self, Reduction, Rewritable};

#[derive(Clone, Debug)]
pub struct ClosedDiagram {
    subgroup: Arc<SubgroupH>,
    graph: Graph,
}

/// How free loops are compared by [`conjugating_equivalent_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LoopComparison {
    /// Equality in the free-loop monoid, labels up to `H`-conjugacy.
    #[default]
    Monoid,
    /// Multisets matched loop by loop: equal winding, `H`-conjugate labels.
    Matching,
}

impl Rewritable for ClosedDiagram {
    fn graph(&self) -> &Graph {
        &self.graph
    }
    fn graph_mut(&mut self) -> &mut Graph {
        &mut self.graph
    }
    fn is_closed(&self) -> bool {
        true
    }
    fn fingerprint(&self) -> String {
        self.strict_form()
    }
}

impl ClosedDiagram {
    /// Wraps a graph without main sources or sinks.
    pub fn from_graph(subgroup: Arc<SubgroupH>, mut graph: Graph) -> Result<Self> {
        if graph.count_kind(|k| matches!(k, VertexKind::MainSource | VertexKind::MainSink)) > 0 {
            return Err(Error::PatternMismatch("closed diagrams have no main sources or sinks".into()));
        }
        if !graph.ports_complete() {
            return Err(Error::PatternMismatch("a port is missing its edge".into()));
        }
        graph.normalize();
        Ok(ClosedDiagram { subgroup, graph })
    }

    /// Identifies the `i`-th sink with the `i`-th source; each glued edge gets
    /// weight 1.
    pub fn close(d: &StrandDiagram) -> Result<ClosedDiagram> {
        let (p, q) = d.shape();
        if p != q {
            return Err(Error::UnbalancedClosure(p, q));
        }
        let mut graph = d.graph().clone();
        let id = Permutation::identity(d.arity());
        for (&t, &s) in d.sinks().iter().zip(d.sources()) {
            let out = graph.port(s, 0).expect("source edge");
            graph.set_kind(t, VertexKind::Sigma(id.clone()));
            graph.set_tail(out, t, 1);
            graph.edge_mut(out).weight += 1;
            graph.remove_vertex(s);
        }
        graph.normalize();
        Ok(ClosedDiagram { subgroup: d.subgroup().clone(), graph })
    }

    pub fn subgroup(&self) -> &Arc<SubgroupH> {
        &self.subgroup
    }

    pub fn arity(&self) -> usize {
        self.graph.arity()
    }

    pub fn free_loops(&self) -> &[FreeLoop] {
        self.graph.free_loops()
    }

    /// `(#splits, #merges, #σ-vertices)`.
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.graph.splits(), self.graph.merges(), self.graph.sigmas())
    }

    /// Only free loops remain.
    pub fn is_free(&self) -> bool {
        self.graph.vertex_count() == 0
    }

    /// No σ-vertex and every free loop labelled by the identity.
    pub fn is_sigma_free(&self) -> bool {
        self.graph.sigmas() == 0 && self.free_loops().iter().all(|l| l.label.is_identity())
    }

    /// Adds the coboundary of `phi`: every edge gains `phi(head) − phi(tail)`.
    pub fn add_coboundary(&mut self, phi: &dyn Fn(VertexId) -> i64) {
        let edges: Vec<_> = self.graph.edge_ids().collect();
        for e in edges {
            let (t, h) = (self.graph.edge(e).tail, self.graph.edge(e).head);
            self.graph.edge_mut(e).weight += phi(h) - phi(t);
        }
    }

    /// Every directed cycle (free loops included) has positive winding.
    pub fn winding_positive(&self) -> bool {
        if self.free_loops().iter().any(|l| l.winding <= 0) {
            return false;
        }
        // a cycle of weight ≤ 0 is a negative cycle for w·(V+1) − 1
        let g = &self.graph;
        let ids: Vec<VertexId> = g.vertex_ids().collect();
        let index: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let scale = ids.len() as i64 + 1;
        let edges: Vec<(usize, usize, i64)> = g
            .edge_ids()
            .map(|e| {
                let ed = g.edge(e);
                (index[&ed.tail], index[&ed.head], ed.weight * scale - 1)
            })
            .collect();
        let mut dist = vec![0i64; ids.len()];
        for _ in 0..ids.len() {
            let mut changed = false;
            for &(t, h, w) in &edges {
                if dist[t] + w < dist[h] {
                    dist[h] = dist[t] + w;
                    changed = true;
                }
            }
            if !changed {
                return true;
            }
        }
        !edges.iter().any(|&(t, h, w)| dist[t] + w < dist[h])
    }

    pub fn validate(&self) -> Result<()> {
        if !self.graph.ports_complete() {
            return Err(Error::PatternMismatch("a port is missing its edge".into()));
        }
        if !self.winding_positive() {
            return Err(Error::WeightMismatch("a directed loop has non-positive winding".into()));
        }
        Ok(())
    }

    /// Strict canonical form: raw σ-vertices, exact free-loop multiset.
    fn strict_form(&self) -> String {
        let view = View::build(&self.graph, &|_| 0, false);
        let parts = view.canon_components(&[Permutation::identity(self.arity())]);
        let mut loops: Vec<&FreeLoop> = self.free_loops().iter().collect();
        loops.sort();
        let mut s = parts.join("/");
        for l in loops {
            let _ = write!(s, "|loop{}:{}", l.winding, l.label);
        }
        s
    }

    /// Components up to gauge by `H` and coboundary, σ-vertices folded into
    /// edge labels.
    fn gauge_components(&self, h: &SubgroupH) -> Vec<String> {
        let view = View::build(&self.graph, &|_| 0, true);
        let gauges: Vec<Permutation> = h.elements().cloned().collect();
        view.canon_components(&gauges)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph closed {\n");
        for v in self.graph.vertex_ids() {
            let (label, shape) = match self.graph.kind(v) {
                VertexKind::Split => ("split".to_string(), "triangle"),
                VertexKind::Merge => ("merge".to_string(), "invtriangle"),
                VertexKind::Sigma(p) => (p.to_string(), "circle"),
                _ => ("?".to_string(), "box"),
            };
            let _ = writeln!(out, "  v{v} [label=\"{label}\", shape={shape}];");
        }
        for e in self.graph.edge_ids() {
            let ed = self.graph.edge(e);
            let _ = writeln!(
                out,
                "  v{} -> v{} [label=\"w={}\", taillabel=\"{}\", headlabel=\"{}\"];",
                ed.tail, ed.head, ed.weight, ed.tail_port, ed.head_port
            );
        }
        for (i, l) in self.free_loops().iter().enumerate() {
            let _ = writeln!(out, "  loop{i} [label=\"winding={}, label={}\", shape=circle];", l.winding, l.label);
            let _ = writeln!(out, "  loop{i} -> loop{i};");
        }
        out.push_str("}\n");
        out
    }
}

pub fn close(d: &StrandDiagram) -> Result<ClosedDiagram> {
    ClosedDiagram::close(d)
}

pub fn reduce_closed_traced(cd: &ClosedDiagram) -> Result<Reduction<ClosedDiagram>> {
    rewrite::reduce_traced(cd)
}

pub fn reduce_closed(cd: &ClosedDiagram) -> ClosedDiagram {
    rewrite::reduce(cd)
}

/// Kind-, label- and port-preserving isomorphism with equal winding up to
/// coboundary; free loops compared as exact multisets.
pub fn closed_equal(a: &ClosedDiagram, b: &ClosedDiagram) -> bool {
    a.arity() == b.arity() && a.strict_form() == b.strict_form()
}

pub fn conjugating_equivalent(a: &ClosedDiagram, b: &ClosedDiagram, h: &SubgroupH) -> bool {
    conjugating_equivalent_with(a, b, h, LoopComparison::Monoid)
}

pub fn conjugating_equivalent_with(a: &ClosedDiagram, b: &ClosedDiagram, h: &SubgroupH, mode: LoopComparison) -> bool {
    if a.arity() != b.arity() || a.gauge_components(h) != b.gauge_components(h) {
        return false;
    }
    match mode {
        LoopComparison::Monoid => loops_equivalent(a.free_loops(), b.free_loops(), h),
        LoopComparison::Matching => {
            let key = |ls: &[FreeLoop]| {
                let mut v: Vec<(i64, Permutation)> =
                    ls.iter().map(|l| (l.winding, h.class_representative(&l.label))).collect();
                v.sort();
                v
            };
            key(a.free_loops()) == key(b.free_loops())
        }
    }
}

/// The reduced closed diagram of an element.
pub fn closure_of(g: &TreePairElement) -> ClosedDiagram {
    let d = StrandDiagram::build(&g.reduced());
    reduce_closed(&close(&d).expect("(1,1) diagrams close"))
}

pub fn are_conjugate(f: &TreePairElement, g: &TreePairElement) -> Result<bool> {
    if f.arity() != g.arity() {
        return Err(Error::ArityMismatch(f.arity(), g.arity()));
    }
    if f.subgroup() != g.subgroup() {
        return Err(Error::SubgroupMismatch);
    }
    Ok(conjugating_equivalent(&closure_of(f), &closure_of(g), f.subgroup()))
}

pub fn is_torsion(g: &TreePairElement) -> bool {
    closure_of(g).is_free()
}

type LoopKey = (i64, Permutation);

fn loop_children(key: &LoopKey, h: &SubgroupH) -> Vec<LoopKey> {
    let (k, sigma) = key;
    let n = sigma.degree();
    let mut out = Vec::new();
    let mut seen = vec![false; n + 1];
    for start in 1..=n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = sigma.apply(x);
            len += 1;
        }
        out.push((k * len as i64, h.class_representative(&sigma.pow(len))));
    }
    out
}

/// Equality of two loop multisets in the free-loop monoid.
pub fn loops_equivalent(a: &[FreeLoop], b: &[FreeLoop], h: &SubgroupH) -> bool {
    let key = |l: &FreeLoop| (l.winding, h.class_representative(&l.label));
    let ka: Vec<LoopKey> = a.iter().map(key).collect();
    let kb: Vec<LoopKey> = b.iter().map(key).collect();
    if ka.is_empty() || kb.is_empty() {
        return ka.is_empty() && kb.is_empty();
    }
    // the finite graph reachable from both supports
    let mut children: BTreeMap<LoopKey, Vec<LoopKey>> = BTreeMap::new();
    let mut stack: Vec<LoopKey> = ka.iter().chain(&kb).cloned().collect();
    while let Some(x) = stack.pop() {
        if children.contains_key(&x) {
            continue;
        }
        let cs = loop_children(&x, h);
        stack.extend(cs.iter().cloned());
        children.insert(x, cs);
    }
    let ideal = |support: &[LoopKey]| -> BTreeSet<LoopKey> {
        let mut set: BTreeSet<LoopKey> = BTreeSet::new();
        let mut stack: Vec<LoopKey> = support.to_vec();
        while let Some(x) = stack.pop() {
            if set.insert(x.clone()) {
                stack.extend(children[&x].iter().cloned());
            }
        }
        loop {
            let extra: Vec<LoopKey> = children
                .iter()
                .filter(|(v, cs)| !set.contains(*v) && cs.iter().all(|c| set.contains(c)))
                .map(|(v, _)| v.clone())
                .collect();
            if extra.is_empty() {
                return set;
            }
            set.extend(extra);
        }
    };
    let ia = ideal(&ka);
    if ia != ideal(&kb) {
        return false;
    }
    let cols: Vec<&LoopKey> = ia.iter().collect();
    let col = |k: &LoopKey| cols.binary_search(&k).expect("ideal is hereditary");
    let mut rows: Vec<Vec<i128>> = cols
        .iter()
        .map(|v| {
            let mut r = vec![0i128; cols.len()];
            r[col(v)] += 1;
            for c in &children[*v] {
                r[col(c)] -= 1;
            }
            r
        })
        .collect();
    let mut target = vec![0i128; cols.len()];
    for k in &ka {
        target[col(k)] += 1;
    }
    for k in &kb {
        target[col(k)] -= 1;
    }
    in_row_lattice(&mut rows, target)
}

/// Whether `target` is an integer combination of `rows`.
fn in_row_lattice(rows: &mut [Vec<i128>], mut target: Vec<i128>) -> bool {
    let width = target.len();
    let mut pivot_row = 0;
    for c in 0..width {
        // Euclid on column c among rows pivot_row..
        loop {
            let live: Vec<usize> = (pivot_row..rows.len()).filter(|&r| rows[r][c] != 0).collect();
            if live.len() <= 1 {
                break;
            }
            let best = *live.iter().min_by_key(|&&r| rows[r][c].abs()).unwrap();
            for &r in &live {
                if r != best {
                    let q = rows[r][c] / rows[best][c];
                    let pivot = rows[best].clone();
                    for (x, p) in rows[r].iter_mut().zip(&pivot) {
                        *x -= q * p;
                    }
                }
            }
        }
        if let Some(r) = (pivot_row..rows.len()).find(|&r| rows[r][c] != 0) {
            rows.swap(pivot_row, r);
            let p = rows[pivot_row][c];
            if target[c] % p != 0 {
                return false;
            }
            let q = target[c] / p;
            for (x, y) in target.iter_mut().zip(&rows[pivot_row]) {
                *x -= q * y;
            }
            pivot_row += 1;
        } else if target[c] != 0 {
            return false;
        }
    }
    target.iter().all(|&x| x == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::element_from_json;

    fn fl(w: i64, p: &[usize]) -> FreeLoop {
        FreeLoop { winding: w, label: Permutation::from_images(p).unwrap() }
    }

    #[test]
    fn closing_identity_diagrams_gives_free_loops() {
        let h = Arc::new(SubgroupH::trivial(3).unwrap());
        let cd = close(&StrandDiagram::identity(h, 2)).unwrap();
        assert!(cd.is_free());
        assert_eq!(cd.free_loops(), &[fl(1, &[1, 2, 3]), fl(1, &[1, 2, 3])]);
    }

    #[test]
    fn unbalanced_closure_is_an_error() {
        let h = Arc::new(SubgroupH::trivial(2).unwrap());
        let mut d = StrandDiagram::identity(h.clone(), 1);
        let e = d.graph().port(d.sources()[0], 0).unwrap();
        let (grown, _) = rewrite::apply_inverse_i(&d, &rewrite::Site::Edge(e)).unwrap();
        d = grown;
        // a (1,1) diagram stays closable
        assert!(close(&d).is_ok());
        let wide = StrandDiagram::identity(h, 2);
        let both = wide.concatenate(&wide).unwrap();
        assert!(close(&both).is_ok());
    }

    #[test]
    fn winding_matters_for_equality() {
        let h = SubgroupH::symmetric(2).unwrap();
        let ha = Arc::new(h.clone());
        let g1 = Graph::new(2);
        let mut a = ClosedDiagram::from_graph(ha.clone(), g1.clone()).unwrap();
        let mut b = ClosedDiagram::from_graph(ha, g1).unwrap();
        a.graph.free_loops_mut().push(fl(1, &[2, 1]));
        b.graph.free_loops_mut().push(fl(2, &[2, 1]));
        assert!(!closed_equal(&a, &b));
        assert!(closed_equal(&a, &a.clone()));
    }

    #[test]
    fn loop_monoid_relations() {
        let h2 = SubgroupH::symmetric(2).unwrap();
        // {1, Id} = n·{1, Id}
        assert!(loops_equivalent(&[fl(1, &[1, 2])], &[fl(1, &[1, 2]), fl(1, &[1, 2])], &h2));
        // the swap has one 2-cycle: {1, swap} = {2, Id}
        assert!(loops_equivalent(&[fl(1, &[2, 1])], &[fl(2, &[1, 2])], &h2));
        assert!(!loops_equivalent(&[fl(1, &[2, 1])], &[fl(1, &[1, 2])], &h2));
        let h3 = SubgroupH::trivial(3).unwrap();
        let id = fl(1, &[1, 2, 3]);
        // for n = 3 the count of identity loops matters mod 2
        assert!(loops_equivalent(std::slice::from_ref(&id), &[id.clone(), id.clone(), id.clone()], &h3));
        assert!(!loops_equivalent(std::slice::from_ref(&id), &[id.clone(), id.clone()], &h3));
        assert!(!loops_equivalent(std::slice::from_ref(&id), &[], &h3));
    }

    #[test]
    fn three_cycles_are_loop_equivalent_even_when_not_h_conjugate() {
        let c3 = SubgroupH::cyclic(3).unwrap();
        let a = fl(1, &[2, 3, 1]);
        let b = fl(1, &[3, 1, 2]);
        assert!(!c3.are_conjugate(&a.label, &b.label));
        assert!(loops_equivalent(std::slice::from_ref(&a), std::slice::from_ref(&b), &c3));
        assert!(loops_equivalent(std::slice::from_ref(&a), &[fl(3, &[1, 2, 3])], &c3));
        let ga = ClosedDiagram::from_graph(Arc::new(c3.clone()), Graph::new(3)).unwrap();
        let mut x = ga.clone();
        let mut y = ga;
        x.graph.free_loops_mut().push(a);
        y.graph.free_loops_mut().push(b);
        assert!(!conjugating_equivalent_with(&x, &y, &c3, LoopComparison::Matching));
        assert!(conjugating_equivalent(&x, &y, &c3));
    }

    #[test]
    fn lattice_membership() {
        let mut rows = vec![vec![2, 0], vec![0, 3]];
        assert!(in_row_lattice(&mut rows.clone(), vec![4, -3]));
        assert!(!in_row_lattice(&mut rows, vec![1, 0]));
        let mut rows = vec![vec![4, 6], vec![6, 9]];
        assert!(in_row_lattice(&mut rows.clone(), vec![2, 3]));
        assert!(!in_row_lattice(&mut rows, vec![2, 2]));
    }

    #[test]
    fn coboundaries_do_not_change_equality() {
        let g = element_from_json(
            r#"{"n":2,"H":[],"domain":"((* *) *)","range":"(* (* *))","tau":[1,2,3],"labels":[[1,2],[1,2],[1,2]]}"#,
            None,
        )
        .unwrap();
        let cd = closure_of(&g);
        assert!(!cd.is_free());
        cd.validate().unwrap();
        let mut shifted = cd.clone();
        shifted.add_coboundary(&|v| (v as i64 * 7) % 5 - 2);
        assert!(closed_equal(&cd, &shifted));
        assert!(conjugating_equivalent(&cd, &shifted, cd.subgroup()));
    }

    #[test]
    fn conjugates_are_recognized() {
        let g = element_from_json(
            r#"{"n":2,"H":[],"domain":"((* *) *)","range":"(* (* *))","tau":[1,2,3],"labels":[[1,2],[1,2],[1,2]]}"#,
            None,
        )
        .unwrap();
        let h = element_from_json(
            r#"{"n":2,"H":[],"domain":"(* *)","range":"(* *)","tau":[2,1],"labels":[[1,2],[1,2]]}"#,
            None,
        )
        .unwrap();
        let conj = g.conjugate_by(&h).unwrap();
        assert!(are_conjugate(&g, &conj).unwrap());
        assert!(!are_conjugate(&g, &h).unwrap());
        assert!(is_torsion(&h));
        assert!(!is_torsion(&g));
    }
}
