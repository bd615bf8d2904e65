//! Elements of `V_n(H)` as tree-pair quadruples `(domain, range, τ, σ)`.
//!
//! The `i`-th domain leaf `uᵢ` is sent to the `τ(i)`-th range leaf `u'_{τ(i)}`
//! and words below it are acted on letter-wise by the label attached to that
//! range leaf: `g(uᵢ w) = u'_{τ(i)} σ_{τ(i)}(w)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::perm::{Permutation, SubgroupH};
use crate::tree::{Tree, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreePairElement {
    subgroup: Arc<SubgroupH>,
    domain: Tree,
    range: Tree,
    tau: Vec<usize>,
    labels: Vec<Permutation>,
}

impl std::hash::Hash for TreePairElement {
    fn hash<S: std::hash::Hasher>(&self, state: &mut S) {
        self.domain.hash(state);
        self.range.hash(state);
        self.tau.hash(state);
        self.labels.hash(state);
    }
}

/// One branch of a representative: `domain·w ↦ range·label(w)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BranchMap {
    pub domain: Word,
    pub range: Word,
    pub label: Permutation,
}

impl TreePairElement {
    pub fn new(
        subgroup: Arc<SubgroupH>,
        domain: Tree,
        range: Tree,
        tau: Vec<usize>,
        labels: Vec<Permutation>,
    ) -> Result<Self> {
        let n = subgroup.arity();
        if domain.arity() != n || range.arity() != n {
            return Err(Error::ArityMismatch(n, if domain.arity() != n { domain.arity() } else { range.arity() }));
        }
        let k = domain.leaf_count();
        if range.leaf_count() != k {
            return Err(Error::InvalidElement(format!(
                "domain has {k} leaves but range has {}",
                range.leaf_count()
            )));
        }
        if tau.len() != k {
            return Err(Error::InvalidElement(format!("tau has length {}, expected {k}", tau.len())));
        }
        let mut seen = vec![false; k];
        for &t in &tau {
            if t == 0 || t > k || seen[t - 1] {
                return Err(Error::InvalidElement(format!("tau {tau:?} is not a bijection on 1..={k}")));
            }
            seen[t - 1] = true;
        }
        if labels.len() != k {
            return Err(Error::InvalidElement(format!("{} labels for {k} leaves", labels.len())));
        }
        if let Some(l) = labels.iter().find(|l| !subgroup.contains(l)) {
            return Err(Error::InvalidElement(format!("label {l} is not in H")));
        }
        Ok(TreePairElement { subgroup, domain, range, tau, labels })
    }

    pub fn identity(subgroup: Arc<SubgroupH>) -> Self {
        let n = subgroup.arity();
        TreePairElement {
            subgroup,
            domain: Tree::leaf(n),
            range: Tree::leaf(n),
            tau: vec![1],
            labels: vec![Permutation::identity(n)],
        }
    }

    /// The element acting by `sigma` letter-wise on every word.
    pub fn root_label(subgroup: Arc<SubgroupH>, sigma: Permutation) -> Result<Self> {
        let n = subgroup.arity();
        Self::new(subgroup, Tree::leaf(n), Tree::leaf(n), vec![1], vec![sigma])
    }

    /// Builds a representative from its branch maps; the domain words and the
    /// range words must each form a complete independent set.
    pub fn from_branches(subgroup: Arc<SubgroupH>, mut branches: Vec<BranchMap>) -> Result<Self> {
        let n = subgroup.arity();
        branches.sort_by(|a, b| a.domain.cmp(&b.domain));
        let domain_words: Vec<Word> = branches.iter().map(|b| b.domain.clone()).collect();
        let mut range_words: Vec<Word> = branches.iter().map(|b| b.range.clone()).collect();
        let domain = Tree::from_addresses(n, &domain_words)?;
        range_words.sort();
        let range = Tree::from_addresses(n, &range_words)?;
        let mut labels = vec![Permutation::identity(n); branches.len()];
        let mut tau = Vec::with_capacity(branches.len());
        for b in &branches {
            let j = range_words.binary_search(&b.range).expect("range word present");
            tau.push(j + 1);
            labels[j] = b.label.clone();
        }
        Self::new(subgroup, domain, range, tau, labels)
    }

    pub fn arity(&self) -> usize {
        self.subgroup.arity()
    }

    pub fn subgroup(&self) -> &Arc<SubgroupH> {
        &self.subgroup
    }

    pub fn domain(&self) -> &Tree {
        &self.domain
    }

    pub fn range(&self) -> &Tree {
        &self.range
    }

    /// 1-based images of domain leaves.
    pub fn tau(&self) -> &[usize] {
        &self.tau
    }

    /// `labels()[j]` is attached to the `j`-th range leaf.
    pub fn labels(&self) -> &[Permutation] {
        &self.labels
    }

    pub fn leaf_count(&self) -> usize {
        self.tau.len()
    }

    /// Branch maps in domain-leaf order.
    pub fn branches(&self) -> Vec<BranchMap> {
        let dom = self.domain.leaf_addresses();
        let ran = self.range.leaf_addresses();
        dom.into_iter()
            .zip(&self.tau)
            .map(|(d, &t)| BranchMap { domain: d, range: ran[t - 1].clone(), label: self.labels[t - 1].clone() })
            .collect()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.arity() != other.arity() {
            return Err(Error::ArityMismatch(self.arity(), other.arity()));
        }
        if self.subgroup != other.subgroup {
            return Err(Error::SubgroupMismatch);
        }
        Ok(())
    }

    /// Image of the prefix `u` and the residual tail action below it.
    pub fn eval_prefix(&self, u: &Word) -> Result<(Word, Permutation)> {
        let i = self.domain.leaf_containing(u).ok_or_else(|| Error::WordTooShallow(u.to_string()))?;
        let dom = &self.domain.leaf_addresses()[i - 1];
        let tail = dom.strip_from(u).expect("leaf address is a prefix");
        let j = self.tau[i - 1];
        let label = &self.labels[j - 1];
        let image = self.range.leaf_addresses()[j - 1].concat(&tail.permuted(label));
        Ok((image, label.clone()))
    }

    /// `self ∘ f`: apply `f` first.
    pub fn compose(&self, f: &TreePairElement) -> Result<TreePairElement> {
        self.check_compatible(f)?;
        let common = f.range.common_expansion(&self.domain)?;
        let f_ran = f.range.leaf_addresses();
        let f_dom = f.domain.leaf_addresses();
        let mut f_pre = vec![0; f.leaf_count()];
        for (i, &t) in f.tau.iter().enumerate() {
            f_pre[t - 1] = i;
        }
        let g_dom = self.domain.leaf_addresses();
        let g_ran = self.range.leaf_addresses();
        let mut branches = Vec::with_capacity(common.tree.leaf_count());
        for ((e, &j), &i) in common.tree.leaf_addresses().iter().zip(&common.to_first).zip(&common.to_second) {
            // f: f_dom[f_pre[j]]·σ⁻¹(x) ↦ f_ran[j]·x = e
            let sigma = &f.labels[j - 1];
            let x = f_ran[j - 1].strip_from(e).expect("expansion");
            let source = f_dom[f_pre[j - 1]].concat(&x.permuted(&sigma.inverse()));
            // g: g_dom[i]·y ↦ g_ran[τ(i)]·σ'(y)
            let y = g_dom[i - 1].strip_from(e).expect("expansion");
            let t = self.tau[i - 1];
            let sigma2 = &self.labels[t - 1];
            let target = g_ran[t - 1].concat(&y.permuted(sigma2));
            branches.push(BranchMap { domain: source, range: target, label: sigma2.compose(sigma) });
        }
        TreePairElement::from_branches(self.subgroup.clone(), branches)
    }

    pub fn inverse(&self) -> TreePairElement {
        let branches = self
            .branches()
            .into_iter()
            .map(|b| BranchMap { domain: b.range, range: b.domain, label: b.label.inverse() })
            .collect();
        TreePairElement::from_branches(self.subgroup.clone(), branches).expect("inverse of a valid element")
    }

    /// Splits domain leaf `i` (1-based) into its `n` children; the represented
    /// map is unchanged.
    pub fn expand_domain_leaf(&self, i: usize) -> Result<TreePairElement> {
        let k = self.leaf_count();
        if i == 0 || i > k {
            return Err(Error::LeafIndexOutOfRange { index: i, leaves: k });
        }
        let mut branches = self.branches();
        let b = branches.remove(i - 1);
        for letter in 1..=self.arity() {
            branches.push(BranchMap {
                domain: b.domain.child(letter),
                range: b.range.child(b.label.apply(letter)),
                label: b.label.clone(),
            });
        }
        TreePairElement::from_branches(self.subgroup.clone(), branches)
    }

    /// Collapses carets until none is collapsible.
    ///
    /// Domain siblings `u1, …, un` collapse onto `u` when they are sent to the
    /// children `v ς(1), …, v ς(n)` of one range caret and all carry the label `ς`.
    pub fn reduced(&self) -> TreePairElement {
        let n = self.arity();
        let mut map: BTreeMap<Word, (Word, Permutation)> =
            self.branches().into_iter().map(|b| (b.domain, (b.range, b.label))).collect();
        loop {
            let mut collapse = None;
            for (d, (r, label)) in &map {
                if d.is_empty() || d.letters().last() != Some(1) || r.is_empty() {
                    continue;
                }
                let parent = Word::new(&d.letters().take(d.len() - 1).collect::<Vec<_>>());
                let rparent = Word::new(&r.letters().take(r.len() - 1).collect::<Vec<_>>());
                let ok = (1..=n).all(|j| match map.get(&parent.child(j)) {
                    Some((rj, lj)) => lj == label && *rj == rparent.child(label.apply(j)),
                    None => false,
                });
                if ok {
                    collapse = Some((parent, rparent, label.clone()));
                    break;
                }
            }
            match collapse {
                Some((parent, rparent, label)) => {
                    for j in 1..=n {
                        map.remove(&parent.child(j));
                    }
                    map.insert(parent, (rparent, label));
                }
                None => break,
            }
        }
        let branches = map.into_iter().map(|(domain, (range, label))| BranchMap { domain, range, label }).collect();
        TreePairElement::from_branches(self.subgroup.clone(), branches).expect("reduction preserves validity")
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced().leaf_count() == self.leaf_count()
    }

    pub fn is_identity(&self) -> bool {
        let r = self.reduced();
        r.leaf_count() == 1 && r.labels[0].is_identity()
    }

    /// Same bijection of the Cantor set.
    pub fn equals(&self, other: &TreePairElement) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.reduced() == other.reduced())
    }

    /// Smallest `m ≤ cap` with `self^m = 1`.
    pub fn order(&self, cap: usize) -> Option<usize> {
        let mut acc = self.reduced();
        for m in 1..=cap {
            if acc.is_identity() {
                return Some(m);
            }
            acc = self.compose(&acc).expect("same group").reduced();
        }
        None
    }

    /// `h⁻¹ ∘ self ∘ h`.
    pub fn conjugate_by(&self, h: &TreePairElement) -> Result<TreePairElement> {
        Ok(h.inverse().compose(&self.compose(h)?)?.reduced())
    }
}

impl fmt::Display for TreePairElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::io::element_to_json(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v2() -> Arc<SubgroupH> {
        Arc::new(SubgroupH::trivial(2).unwrap())
    }

    fn caret_swap(h: Arc<SubgroupH>) -> TreePairElement {
        let id = Permutation::identity(h.arity());
        TreePairElement::new(h, Tree::caret(2), Tree::caret(2), vec![2, 1], vec![id.clone(), id]).unwrap()
    }

    #[test]
    fn identity_evaluates_to_itself() {
        let id = TreePairElement::identity(v2());
        let u = Word::new(&[2, 1, 1]);
        assert_eq!(id.eval_prefix(&u).unwrap(), (u, Permutation::identity(2)));
    }

    #[test]
    fn caret_swap_exchanges_prefixes() {
        let g = caret_swap(v2());
        let (img, tail) = g.eval_prefix(&Word::new(&[1, 2])).unwrap();
        assert_eq!(img, Word::new(&[2, 2]));
        assert!(tail.is_identity());
        assert!(matches!(g.eval_prefix(&Word::empty()), Err(Error::WordTooShallow(_))));
    }

    #[test]
    fn validation() {
        let h = v2();
        let id = Permutation::identity(2);
        assert!(TreePairElement::new(h.clone(), Tree::caret(2), Tree::leaf(2), vec![1], vec![id.clone()]).is_err());
        assert!(TreePairElement::new(h.clone(), Tree::caret(2), Tree::caret(2), vec![1, 1], vec![id.clone(); 2])
            .is_err());
        let swap = Permutation::transposition(2, 1, 2);
        assert!(TreePairElement::root_label(h, swap).is_err());
    }

    #[test]
    fn expand_then_reduce_round_trips() {
        let h = Arc::new(SubgroupH::symmetric(3).unwrap());
        let s = Permutation::from_images(&[2, 3, 1]).unwrap();
        let g = TreePairElement::root_label(h, s).unwrap();
        let e = g.expand_domain_leaf(1).unwrap();
        assert_eq!(e.leaf_count(), 3);
        assert_eq!(e.reduced(), g);
        assert!(e.equals(&g).unwrap());
    }

    #[test]
    fn identity_on_large_pair_reduces_to_trivial() {
        let t = Tree::parse(2, "((* *) ((* *) *))").unwrap();
        let id = Permutation::identity(2);
        let g = TreePairElement::new(v2(), t.clone(), t, vec![1, 2, 3, 4, 5], vec![id; 5]).unwrap();
        assert_eq!(g.reduced(), TreePairElement::identity(v2()));
    }

    #[test]
    fn swap_is_an_involution() {
        let g = caret_swap(v2());
        assert_eq!(g.order(10), Some(2));
        assert_eq!(TreePairElement::identity(v2()).order(10), Some(1));
        assert!(!g.equals(&TreePairElement::identity(v2())).unwrap());
        assert!(g.compose(&g.inverse()).unwrap().is_identity());
    }

    #[test]
    fn subgroup_mismatch_is_reported() {
        let a = TreePairElement::identity(v2());
        let b = TreePairElement::identity(Arc::new(SubgroupH::symmetric(2).unwrap()));
        assert_eq!(a.compose(&b), Err(Error::SubgroupMismatch));
    }
}
