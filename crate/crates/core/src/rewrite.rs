//! Type I–IV reductions, the inverses of types I and II, and reduction to
//! normal form.
//!
//! Patterns, with `S` a split and `M` a merge:
//!
//! * I: every out-port `j` of `S` reaches in-port `ς(j)` of one merge `M`,
//!   directly or through one σ-vertex, and every strand carries exactly `ς`.
//!   Replaced by a single `ς`-vertex (an edge when `ς = Id`).
//! * II: the out-edge of `M` reaches the in-port of `S`, directly or through
//!   one `ς`-vertex. In-edge `i` of `M` is rewired to out-edge `ς(i)` of `S`
//!   through a new `ς`-vertex.
//! * III: two consecutive σ-vertices fuse into their composite.
//! * IV: a σ-vertex directly above a split, or directly below a merge, is
//!   pushed through it as `n` copies with ports permuted by `σ`.
//!
//! Closed diagrams do not use type IV: on a directed cycle it need not
//! terminate, and its effect is quotiented out by the gauge-aware canonical
//! form instead.

use std::collections::HashSet;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId, VertexKind};
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    I,
    IIdentity,
    II,
    IIIdentity,
    III,
    IIIIdentity,
    IV,
}

impl Rule {
    pub fn family(self) -> u8 {
        match self {
            Rule::I | Rule::IIdentity => 1,
            Rule::II | Rule::IIIdentity => 2,
            Rule::III | Rule::IIIIdentity => 3,
            Rule::IV => 4,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::I => "I",
            Rule::IIdentity => "I-identity",
            Rule::II => "II",
            Rule::IIIdentity => "II-identity",
            Rule::III => "III",
            Rule::IIIIdentity => "III-identity",
            Rule::IV => "IV",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Redex {
    pub rule: Rule,
    pub anchors: Vec<VertexId>,
    pub param: Option<Permutation>,
}

impl fmt::Display for Redex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rule)?;
        for a in &self.anchors {
            write!(f, " {a}")?;
        }
        if let Some(p) = &self.param {
            write!(f, " {p}")?;
        }
        Ok(())
    }
}

/// Where an inverse reduction is inserted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Site {
    Edge(EdgeId),
    Sigma(VertexId),
    FreeLoop(usize),
}

/// Diagrams the engine can rewrite.
pub trait Rewritable: Clone {
    fn graph(&self) -> &Graph;
    fn graph_mut(&mut self) -> &mut Graph;
    fn is_closed(&self) -> bool;
    fn fingerprint(&self) -> String;
}

impl Rewritable for crate::diagram::StrandDiagram {
    fn graph(&self) -> &Graph {
        crate::diagram::StrandDiagram::graph(self)
    }
    fn graph_mut(&mut self) -> &mut Graph {
        crate::diagram::StrandDiagram::graph_mut(self)
    }
    fn is_closed(&self) -> bool {
        false
    }
    fn fingerprint(&self) -> String {
        self.canonical_form()
    }
}

fn sigma_label(g: &Graph, v: VertexId) -> Option<&Permutation> {
    g.kind(v).label()
}

/// One strand leaving `s` at out-port `j`: optional σ, then the vertex and
/// port it enters, and the summed weight.
fn strand(g: &Graph, s: VertexId, j: usize) -> Option<(Option<VertexId>, VertexId, usize, i64)> {
    let (v, p, e) = g.next(s, j)?;
    let w = g.edge(e).weight;
    if sigma_label(g, v).is_some() {
        let (h, hp, e2) = g.next(v, 1)?;
        Some((Some(v), h, hp, w + g.edge(e2).weight))
    } else {
        Some((None, v, p, w))
    }
}

fn match_type_i(g: &Graph, s: VertexId) -> Option<Redex> {
    if !matches!(g.kind(s), VertexKind::Split) {
        return None;
    }
    let n = g.arity();
    let mut merge = None;
    let mut images = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    let mut weight = None;
    for j in 1..=n {
        let (mid, m, port, w) = strand(g, s, j)?;
        if !matches!(g.kind(m), VertexKind::Merge) || merge.is_some_and(|x| x != m) {
            return None;
        }
        if weight.is_some_and(|x| x != w) {
            return None;
        }
        merge = Some(m);
        weight = Some(w);
        images.push(port);
        labels.push(mid.map(|v| sigma_label(g, v).unwrap().clone()));
    }
    let sigma = Permutation::from_images(&images).ok()?;
    let id = Permutation::identity(n);
    if !labels.iter().all(|l| l.as_ref().unwrap_or(&id) == &sigma) {
        return None;
    }
    let rule = if sigma.is_identity() { Rule::IIdentity } else { Rule::I };
    let param = (!sigma.is_identity()).then_some(sigma);
    Some(Redex { rule, anchors: vec![s, merge.unwrap()], param })
}

fn match_type_ii(g: &Graph, m: VertexId) -> Option<Redex> {
    if !matches!(g.kind(m), VertexKind::Merge) {
        return None;
    }
    let (v, _, _) = g.next(m, 0)?;
    let (s, label) = match g.kind(v) {
        VertexKind::Split => (v, None),
        VertexKind::Sigma(l) => match g.next(v, 1)? {
            (s, 0, _) if matches!(g.kind(s), VertexKind::Split) => (s, Some(l.clone())),
            _ => return None,
        },
        _ => return None,
    };
    let rule = if label.is_some() { Rule::II } else { Rule::IIIdentity };
    Some(Redex { rule, anchors: vec![m, s], param: label })
}

fn match_type_iii(g: &Graph, v: VertexId) -> Option<Redex> {
    let a = sigma_label(g, v)?;
    let (u, _, _) = g.next(v, 1)?;
    if u == v {
        return None;
    }
    let b = sigma_label(g, u)?;
    let c = b.compose(a);
    let rule = if c.is_identity() { Rule::IIIIdentity } else { Rule::III };
    Some(Redex { rule, anchors: vec![v, u], param: Some(c) })
}

fn match_type_iv(g: &Graph, v: VertexId) -> Vec<Redex> {
    let mut out = Vec::new();
    let Some(label) = sigma_label(g, v) else { return out };
    if let Some((m, 0, _)) = g.prev(v, 0) {
        if matches!(g.kind(m), VertexKind::Merge) {
            out.push(Redex { rule: Rule::IV, anchors: vec![m, v], param: Some(label.clone()) });
        }
    }
    if let Some((s, 0, _)) = g.next(v, 1) {
        if matches!(g.kind(s), VertexKind::Split) {
            out.push(Redex { rule: Rule::IV, anchors: vec![v, s], param: Some(label.clone()) });
        }
    }
    out
}

fn redexes_at(g: &Graph, v: VertexId, with_iv: bool) -> Vec<Redex> {
    let mut out = Vec::new();
    out.extend(match_type_i(g, v));
    out.extend(match_type_ii(g, v));
    out.extend(match_type_iii(g, v));
    if with_iv {
        out.extend(match_type_iv(g, v));
    }
    out
}

/// All redexes, ordered by anchor vertex id and then by rule.
pub fn find_redexes<D: Rewritable>(d: &D) -> Vec<Redex> {
    let g = d.graph();
    let with_iv = !d.is_closed();
    let mut out: Vec<Redex> = g.vertex_ids().flat_map(|v| redexes_at(g, v, with_iv)).collect();
    out.sort_by(|a, b| (a.rule.family(), &a.anchors).cmp(&(b.rule.family(), &b.anchors)));
    out
}

pub fn is_reduced<D: Rewritable>(d: &D) -> bool {
    find_redexes(d).is_empty()
}

pub fn apply_reduction<D: Rewritable>(d: &D, r: &Redex) -> Result<D> {
    let g = d.graph();
    let with_iv = !d.is_closed();
    let present = r.anchors.iter().all(|&a| g.contains_vertex(a))
        && r.anchors.iter().any(|&a| redexes_at(g, a, with_iv).contains(r));
    if !present {
        return Err(Error::StaleRedex(r.to_string()));
    }
    let mut out = d.clone();
    let g = out.graph_mut();
    match r.rule.family() {
        1 => reduce_i(g, r),
        2 => reduce_ii(g, r),
        3 => reduce_iii(g, r),
        _ => reduce_iv(g, r),
    }
    g.normalize();
    Ok(out)
}

fn reduce_i(g: &mut Graph, r: &Redex) {
    let (s, m) = (r.anchors[0], r.anchors[1]);
    let n = g.arity();
    let sigma = r.param.clone().unwrap_or_else(|| Permutation::identity(n));
    let (_, _, _, w) = strand(g, s, 1).expect("matched");
    let interior: Vec<VertexId> = (1..=n).filter_map(|j| strand(g, s, j).and_then(|x| x.0)).collect();
    let a = g.port(s, 0).expect("split in-edge");
    let b = g.port(m, 0).expect("merge out-edge");
    let t = g.add_vertex(VertexKind::Sigma(sigma));
    g.set_head(a, t, 0);
    g.set_tail(b, t, 1);
    g.edge_mut(a).weight += w;
    for v in interior.into_iter().chain([s, m]) {
        g.remove_vertex(v);
    }
}

fn reduce_ii(g: &mut Graph, r: &Redex) {
    let (m, s) = (r.anchors[0], r.anchors[1]);
    let n = g.arity();
    let sigma = r.param.clone().unwrap_or_else(|| Permutation::identity(n));
    let (mid, _, first) = g.next(m, 0).expect("merge out-edge");
    let mut through = g.edge(first).weight;
    let mid = if mid == s {
        None
    } else {
        through += g.edge(g.port(mid, 1).expect("σ out-edge")).weight;
        Some(mid)
    };
    let ins: Vec<EdgeId> = (1..=n).map(|i| g.port(m, i).expect("merge in-edge")).collect();
    let outs: Vec<EdgeId> = (1..=n).map(|j| g.port(s, j).expect("split out-edge")).collect();
    let ts: Vec<VertexId> = (0..n).map(|_| g.add_vertex(VertexKind::Sigma(sigma.clone()))).collect();
    for i in 0..n {
        g.set_head(ins[i], ts[i], 0);
        g.edge_mut(ins[i]).weight += through;
    }
    for i in 0..n {
        g.set_tail(outs[sigma.apply(i + 1) - 1], ts[i], 1);
    }
    for v in mid.into_iter().chain([m, s]) {
        g.remove_vertex(v);
    }
}

fn reduce_iii(g: &mut Graph, r: &Redex) {
    let (v, u) = (r.anchors[0], r.anchors[1]);
    let e = g.port(v, 1).expect("σ out-edge");
    let f = g.port(u, 1).expect("σ out-edge");
    let w = g.remove_edge(e).weight;
    g.set_tail(f, v, 1);
    g.edge_mut(f).weight += w;
    g.remove_vertex(u);
    g.set_kind(v, VertexKind::Sigma(r.param.clone().expect("composite label")));
}

fn reduce_iv(g: &mut Graph, r: &Redex) {
    let n = g.arity();
    let sigma = r.param.clone().expect("σ label");
    let (x, y) = (r.anchors[0], r.anchors[1]);
    if matches!(g.kind(y), VertexKind::Split) {
        let (v, s) = (x, y);
        let a = g.port(v, 0).expect("σ in-edge");
        let e = g.port(v, 1).expect("σ out-edge");
        let outs: Vec<EdgeId> = (1..=n).map(|j| g.port(s, j).expect("split out-edge")).collect();
        let ts: Vec<VertexId> = (0..n).map(|_| g.add_vertex(VertexKind::Sigma(sigma.clone()))).collect();
        for a in 1..=n {
            g.set_tail(outs[sigma.apply(a) - 1], ts[a - 1], 1);
        }
        for a in 1..=n {
            g.connect(s, a, ts[a - 1], 0, 0).expect("freed port");
        }
        let w = g.remove_edge(e).weight;
        g.set_head(a, s, 0);
        g.edge_mut(a).weight += w;
        g.remove_vertex(v);
    } else {
        let (m, v) = (x, y);
        let e = g.port(m, 0).expect("merge out-edge");
        let f = g.port(v, 1).expect("σ out-edge");
        let ins: Vec<EdgeId> = (1..=n).map(|i| g.port(m, i).expect("merge in-edge")).collect();
        let ts: Vec<VertexId> = (0..n).map(|_| g.add_vertex(VertexKind::Sigma(sigma.clone()))).collect();
        for i in 0..n {
            g.set_head(ins[i], ts[i], 0);
        }
        for i in 1..=n {
            g.connect(ts[i - 1], 1, m, sigma.apply(i), 0).expect("freed port");
        }
        let w = g.remove_edge(e).weight;
        g.set_tail(f, m, 0);
        g.edge_mut(f).weight += w;
        g.remove_vertex(v);
    }
}

/// Inserts a split/merge pair at `site`: type I backwards. Returns the new
/// diagram and the redex that undoes the insertion.
pub fn apply_inverse_i<D: Rewritable>(d: &D, site: &Site) -> Result<(D, Redex)> {
    let mut out = d.clone();
    let g = out.graph_mut();
    let n = g.arity();
    let id = Permutation::identity(n);
    let s = g.add_vertex(VertexKind::Split);
    let m = g.add_vertex(VertexKind::Merge);
    let sigma = match site {
        Site::Edge(e) => {
            if !g.contains_edge(*e) {
                return Err(Error::PatternMismatch(format!("no edge {e}")));
            }
            let ed = g.edge(*e).clone();
            g.set_head(*e, s, 0);
            g.connect(m, 0, ed.head, ed.head_port, 0).expect("freed port");
            id.clone()
        }
        Site::Sigma(v) => {
            let Some(label) = (g.contains_vertex(*v)).then(|| sigma_label(g, *v).cloned()).flatten() else {
                return Err(Error::PatternMismatch(format!("vertex {v} is not a sigma vertex")));
            };
            let a = g.port(*v, 0).expect("σ in-edge");
            let b = g.port(*v, 1).expect("σ out-edge");
            g.set_head(a, s, 0);
            g.set_tail(b, m, 0);
            g.remove_vertex(*v);
            label
        }
        Site::FreeLoop(i) => {
            let Some(fl) = g.free_loops().get(*i).cloned() else {
                return Err(Error::PatternMismatch(format!("no free loop {i}")));
            };
            g.free_loops_mut().remove(*i);
            g.connect(m, 0, s, 0, fl.winding).expect("fresh ports");
            fl.label
        }
    };
    for j in 1..=n {
        let e = g.connect(s, j, m, sigma.apply(j), 0).expect("fresh ports");
        if !sigma.is_identity() {
            g.insert_sigma(e, sigma.clone());
        }
    }
    let rule = if sigma.is_identity() { Rule::IIdentity } else { Rule::I };
    let param = (!sigma.is_identity()).then_some(sigma);
    Ok((out, Redex { rule, anchors: vec![s, m], param }))
}

/// Type II backwards on `n` sites: either `n` edges (identity case) or `n`
/// σ-vertices carrying one common label `ς`.
pub fn apply_inverse_ii<D: Rewritable>(d: &D, sites: &[Site]) -> Result<(D, Redex)> {
    let g0 = d.graph();
    let n = g0.arity();
    if sites.len() != n {
        return Err(Error::PatternMismatch(format!("type II needs {n} sites, got {}", sites.len())));
    }
    let distinct: HashSet<String> = sites.iter().map(|s| format!("{s:?}")).collect();
    if distinct.len() != n {
        return Err(Error::PatternMismatch("sites must be distinct".into()));
    }
    let sigma = match &sites[0] {
        Site::Edge(_) => Permutation::identity(n),
        Site::Sigma(v) if g0.contains_vertex(*v) => match sigma_label(g0, *v) {
            Some(l) => l.clone(),
            None => return Err(Error::PatternMismatch(format!("vertex {v} is not a sigma vertex"))),
        },
        other => return Err(Error::PatternMismatch(format!("unusable site {other:?}"))),
    };
    for site in sites {
        let ok = match site {
            Site::Edge(e) => sigma.is_identity() && g0.contains_edge(*e),
            Site::Sigma(v) => g0.contains_vertex(*v) && sigma_label(g0, *v) == Some(&sigma),
            Site::FreeLoop(_) => false,
        };
        if !ok {
            return Err(Error::PatternMismatch(format!("site {site:?} does not carry label {sigma}")));
        }
    }
    let mut out = d.clone();
    let g = out.graph_mut();
    let m = g.add_vertex(VertexKind::Merge);
    let s = g.add_vertex(VertexKind::Split);
    for (i, site) in sites.iter().enumerate() {
        let i = i + 1;
        match site {
            Site::Edge(e) => {
                let ed = g.edge(*e).clone();
                g.set_head(*e, m, i);
                g.connect(s, i, ed.head, ed.head_port, 0).expect("freed port");
            }
            Site::Sigma(v) => {
                let a = g.port(*v, 0).expect("σ in-edge");
                let b = g.port(*v, 1).expect("σ out-edge");
                g.set_head(a, m, i);
                g.set_tail(b, s, sigma.apply(i));
                g.remove_vertex(*v);
            }
            Site::FreeLoop(_) => unreachable!(),
        }
    }
    let e = g.connect(m, 0, s, 0, 0).expect("fresh ports");
    if !sigma.is_identity() {
        g.insert_sigma(e, sigma.clone());
    }
    if !out.is_closed() && !out.graph().is_acyclic() {
        return Err(Error::PatternMismatch("inverse type II would create a directed cycle".into()));
    }
    let rule = if sigma.is_identity() { Rule::IIIdentity } else { Rule::II };
    let param = (!sigma.is_identity()).then_some(sigma);
    Ok((out, Redex { rule, anchors: vec![m, s], param }))
}

/// Reduction result with the applied steps, one per line.
#[derive(Clone, Debug)]
pub struct Reduction<D> {
    pub diagram: D,
    pub trace: Vec<String>,
}

/// Reduces with a caller-chosen schedule: `choose` picks an index into the
/// current redex list. A fingerprint seen twice aborts with the trace.
pub fn reduce_with<D: Rewritable>(d: &D, choose: &mut dyn FnMut(&[Redex]) -> usize) -> Result<Reduction<D>> {
    let mut cur = d.clone();
    cur.graph_mut().normalize();
    let mut trace = Vec::new();
    let mut seen = HashSet::new();
    loop {
        let redexes = find_redexes(&cur);
        if redexes.is_empty() {
            return Ok(Reduction { diagram: cur, trace });
        }
        let r = &redexes[choose(&redexes).min(redexes.len() - 1)];
        cur = apply_reduction(&cur, r)?;
        trace.push(r.to_string());
        if r.rule == Rule::IV && !seen.insert(cur.fingerprint()) {
            return Err(Error::Cycling(trace.join("\n")));
        }
    }
}

/// Default strategy: types I–III first, type IV only when nothing else is
/// left.
pub fn reduce_traced<D: Rewritable>(d: &D) -> Result<Reduction<D>> {
    reduce_with(d, &mut |rs| rs.iter().position(|r| r.rule != Rule::IV).unwrap_or(0))
}

pub fn reduce<D: Rewritable>(d: &D) -> D {
    reduce_traced(d).expect("reduction terminates").diagram
}

/// Uniformly random choice at every step.
pub fn reduce_random<D: Rewritable, R: Rng>(d: &D, rng: &mut R) -> Result<Reduction<D>> {
    reduce_with(d, &mut |rs| rng.gen_range(0..rs.len()))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::diagram::{diagram_equal, StrandDiagram};
    use crate::element::TreePairElement;
    use crate::perm::SubgroupH;
    use crate::tree::Tree;

    fn sym(n: usize) -> Arc<SubgroupH> {
        Arc::new(SubgroupH::symmetric(n).unwrap())
    }

    fn caret_pair(h: Arc<SubgroupH>, tau: Vec<usize>, labels: Vec<Permutation>) -> TreePairElement {
        let n = h.arity();
        TreePairElement::new(h, Tree::caret(n), Tree::caret(n), tau, labels).unwrap()
    }

    #[test]
    fn identity_diagram_has_no_redexes() {
        let d = StrandDiagram::identity(sym(3), 2);
        assert!(find_redexes(&d).is_empty());
    }

    #[test]
    fn caret_pair_is_an_identity_type_i_redex() {
        let h = sym(2);
        let id = Permutation::identity(2);
        let d = StrandDiagram::build(&caret_pair(h.clone(), vec![1, 2], vec![id.clone(), id]));
        let rs = find_redexes(&d);
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].rule, Rule::IIdentity);
        let r = apply_reduction(&d, &rs[0]).unwrap();
        assert!(diagram_equal(&r, &StrandDiagram::identity(h, 1)));
    }

    #[test]
    fn twisted_caret_pair_reduces_to_one_sigma() {
        // strand j goes to range leaf ς(j) labelled ς: the root label ς
        let h = sym(3);
        let c = Permutation::cycle(3);
        let g = caret_pair(h.clone(), c.images(), vec![c.clone(); 3]);
        let d = StrandDiagram::build(&g);
        let rs = find_redexes(&d);
        assert_eq!(rs[0].rule, Rule::I);
        let r = reduce(&d);
        assert_eq!(r.counts(), (0, 0, 1));
        let expected = StrandDiagram::build(&TreePairElement::root_label(h, c).unwrap());
        assert!(diagram_equal(&r, &expected));
    }

    #[test]
    fn sigma_then_inverse_fuses_to_an_edge() {
        let h = sym(3);
        let c = Permutation::cycle(3);
        let mut d = StrandDiagram::identity(h.clone(), 1);
        let e = d.graph().port(d.sources()[0], 0).unwrap();
        let v = d.graph_mut().insert_sigma(e, c.clone());
        let e2 = d.graph().port(v, 1).unwrap();
        d.graph_mut().insert_sigma(e2, c.inverse());
        let rs = find_redexes(&d);
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].rule, Rule::IIIIdentity);
        assert!(diagram_equal(&reduce(&d), &StrandDiagram::identity(h, 1)));
    }

    #[test]
    fn inverse_i_round_trips() {
        let h = sym(3);
        let c = Permutation::cycle(3);
        let d = StrandDiagram::build(&TreePairElement::root_label(h, c).unwrap());
        let v = d.graph().vertex_ids().find(|&v| sigma_label(d.graph(), v).is_some()).unwrap();
        let (bigger, undo) = apply_inverse_i(&d, &Site::Sigma(v)).unwrap();
        assert_eq!(bigger.counts(), (1, 1, 3));
        assert!(diagram_equal(&apply_reduction(&bigger, &undo).unwrap(), &d));
    }

    #[test]
    fn inverse_ii_round_trips_and_rejects_cycles() {
        let h = sym(2);
        let d = StrandDiagram::identity(h, 2);
        let edges: Vec<Site> = d.graph().edge_ids().map(Site::Edge).collect();
        let (bigger, undo) = apply_inverse_ii(&d, &edges).unwrap();
        assert_eq!(bigger.counts(), (1, 1, 0));
        assert!(diagram_equal(&apply_reduction(&bigger, &undo).unwrap(), &d));
        // two sites on one strand would close a directed cycle
        let (grown, _) = apply_inverse_i(&d, &edges[0]).unwrap();
        let strand_edges: Vec<Site> = {
            let g = grown.graph();
            let s = grown.sources()[0];
            let first = g.port(s, 0).unwrap();
            let (split, _, _) = g.next(s, 0).unwrap();
            let (merge, _, _) = g.next(split, 1).unwrap();
            vec![Site::Edge(first), Site::Edge(g.port(merge, 0).unwrap())]
        };
        assert!(apply_inverse_ii(&grown, &strand_edges).is_err());
    }

    #[test]
    fn type_iv_pushes_a_sigma_into_a_split() {
        let h = sym(2);
        let swap = Permutation::transposition(2, 1, 2);
        let id = Permutation::identity(2);
        // σ above a caret pair that is not itself a type I redex
        let base = TreePairElement::new(
            h.clone(),
            Tree::parse(2, "((* *) *)").unwrap(),
            Tree::parse(2, "(* (* *))").unwrap(),
            vec![1, 2, 3],
            vec![id.clone(), id.clone(), id],
        )
        .unwrap();
        let top = StrandDiagram::build(&TreePairElement::root_label(h, swap).unwrap());
        let d = top.concatenate(&StrandDiagram::build(&base)).unwrap();
        let rs = find_redexes(&d);
        assert!(rs.iter().any(|r| r.rule == Rule::IV));
        let stale = Redex { rule: Rule::III, anchors: vec![0, 1], param: None };
        assert!(matches!(apply_reduction(&d, &stale), Err(Error::StaleRedex(_))));
        let red = reduce(&d);
        assert!(is_reduced(&red));
        red.check_invariants().unwrap();
    }

    #[test]
    fn stale_redex_is_rejected_after_use() {
        let h = sym(2);
        let id = Permutation::identity(2);
        let d = StrandDiagram::build(&caret_pair(h, vec![1, 2], vec![id.clone(), id]));
        let r = find_redexes(&d).remove(0);
        let once = apply_reduction(&d, &r).unwrap();
        assert!(apply_reduction(&once, &r).is_err());
    }
}
