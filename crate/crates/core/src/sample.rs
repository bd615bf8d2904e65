//! Random and exhaustive generation of trees and elements.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::diagram::StrandDiagram;
use crate::element::TreePairElement;
use crate::perm::{Permutation, SubgroupH};
use crate::tree::{Tree, Word};

/// A tree with `carets` carets, each added at a uniformly chosen leaf.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize, carets: usize) -> Tree {
    let mut t = Tree::leaf(n);
    for _ in 0..carets {
        let i = rng.gen_range(1..=t.leaf_count());
        t = t.expand_leaf(i).expect("index in range");
    }
    t
}

pub fn random_label<R: Rng>(rng: &mut R, h: &SubgroupH) -> Permutation {
    let k = rng.gen_range(0..h.order());
    h.elements().nth(k).expect("index below order").clone()
}

/// Random tree pair with `carets` carets on each side; not necessarily
/// reduced.
pub fn random_element<R: Rng>(rng: &mut R, h: &Arc<SubgroupH>, carets: usize) -> TreePairElement {
    let n = h.arity();
    let domain = random_tree(rng, n, carets);
    let range = random_tree(rng, n, carets);
    let k = domain.leaf_count();
    let mut tau: Vec<usize> = (1..=k).collect();
    tau.shuffle(rng);
    let labels = (0..k).map(|_| random_label(rng, h)).collect();
    TreePairElement::new(h.clone(), domain, range, tau, labels).expect("well-formed by construction")
}

/// Expands `g` at `times` random domain leaves.
pub fn random_expansion<R: Rng>(rng: &mut R, g: &TreePairElement, times: usize) -> TreePairElement {
    let mut g = g.clone();
    for _ in 0..times {
        let i = rng.gen_range(1..=g.leaf_count());
        g = g.expand_domain_leaf(i).expect("index in range");
    }
    g
}

/// A (1,1)-diagram that is usually far from reduced: a random product of
/// randomly expanded random elements, glued as diagrams.
pub fn random_diagram<R: Rng>(rng: &mut R, h: &Arc<SubgroupH>, max_carets: usize, factors: usize) -> StrandDiagram {
    let mut d = StrandDiagram::identity(h.clone(), 1);
    for _ in 0..factors.max(1) {
        let c = rng.gen_range(0..=max_carets);
        let g = random_element(rng, h, c);
        let e = rng.gen_range(0..=2);
        let g = random_expansion(rng, &g, e);
        d = d.concatenate(&StrandDiagram::build(&g)).expect("same shape");
    }
    d
}

/// All trees with exactly `leaves` leaves, in ascending address order.
pub fn trees_with_leaves(n: usize, leaves: usize) -> Vec<Tree> {
    if leaves == 0 || !(leaves - 1).is_multiple_of(n - 1) {
        return Vec::new();
    }
    let carets = (leaves - 1) / (n - 1);
    let mut level: BTreeSet<Vec<Word>> = BTreeSet::from([Tree::leaf(n).leaf_addresses()]);
    for _ in 0..carets {
        let mut next = BTreeSet::new();
        for addrs in &level {
            let t = Tree::from_addresses(n, addrs).expect("valid addresses");
            for i in 1..=t.leaf_count() {
                next.insert(t.expand_leaf(i).expect("index in range").leaf_addresses());
            }
        }
        level = next;
    }
    level.into_iter().map(|a| Tree::from_addresses(n, &a).expect("valid addresses")).collect()
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=k).collect();
    fn rec(i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for j in i..cur.len() {
            cur.swap(i, j);
            rec(i + 1, cur, out);
            cur.swap(i, j);
        }
    }
    rec(0, &mut cur, &mut out);
    out.sort();
    out
}

/// Every reduced element with at most `max_leaves` leaves, each exactly
/// once, in a deterministic order.
pub fn reduced_elements(h: &Arc<SubgroupH>, max_leaves: usize) -> Vec<TreePairElement> {
    let n = h.arity();
    let labels: Vec<Permutation> = h.elements().cloned().collect();
    let mut out = Vec::new();
    for k in 1..=max_leaves {
        let trees = trees_with_leaves(n, k);
        if trees.is_empty() {
            continue;
        }
        let perms = permutations(k);
        let tuples = label_tuples(&labels, k);
        for d in &trees {
            for r in &trees {
                for tau in &perms {
                    for ls in &tuples {
                        let g = TreePairElement::new(h.clone(), d.clone(), r.clone(), tau.clone(), ls.clone())
                            .expect("well-formed by construction");
                        if g.is_reduced() {
                            out.push(g);
                        }
                    }
                }
            }
        }
    }
    out
}

fn label_tuples(labels: &[Permutation], k: usize) -> Vec<Vec<Permutation>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                labels.iter().map(move |l| {
                    let mut t = t.clone();
                    t.push(l.clone());
                    t
                })
            })
            .collect();
    }
    out
}
