//! Permutations of `{1, ..., n}` and explicitly enumerated subgroups of `Sym(n)`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `{1, ..., n}` in one-line notation.
///
/// Stored 0-based internally; every public constructor and accessor is 1-based.
/// Composition follows function notation: `a.compose(&b)` applies `b` first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n as u8).collect() }
    }

    /// Builds a permutation from 1-based images, `images[i - 1] = σ(i)`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n == 0 || n > u8::MAX as usize {
            return Err(Error::InvalidPermutation(format!("unsupported degree {n}")));
        }
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &x in images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection on 1..={n}")));
            }
            seen[x - 1] = true;
            out.push((x - 1) as u8);
        }
        Ok(Permutation { images: out })
    }

    /// The cyclic shift `i ↦ i + 1 mod n`.
    pub fn cycle(n: usize) -> Self {
        Permutation { images: (0..n).map(|i| ((i + 1) % n) as u8).collect() }
    }

    /// The transposition of the 1-based points `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(a - 1, b - 1);
        p
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// `σ(i)` for a 1-based point.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] as usize + 1
    }

    /// 1-based images.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation { images: other.images.iter().map(|&x| self.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, k: usize) -> Permutation {
        let mut acc = Self::identity(self.degree());
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    /// `a ∘ self ∘ a⁻¹`.
    pub fn conjugate_by(&self, a: &Permutation) -> Permutation {
        a.compose(self).compose(&a.inverse())
    }

    pub fn order(&self) -> usize {
        self.cycles().iter().fold(1, |acc, c| lcm(acc, c.len()))
    }

    /// Disjoint cycles (fixed points included) as 1-based point lists, each
    /// starting at its least element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i + 1);
                i = self.images[i] as usize;
            }
            out.push(cycle);
        }
        out
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, &x)| *i == x as usize).count()
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// One-line notation, e.g. `[2,3,1]`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", *x as usize + 1)?;
        }
        write!(f, "]")
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// A subgroup `H ≤ Sym(n)` given by generators, with its elements enumerated.
#[derive(Clone, Debug)]
pub struct SubgroupH {
    arity: usize,
    generators: Vec<Permutation>,
    elements: BTreeSet<Permutation>,
}

impl PartialEq for SubgroupH {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.elements == other.elements
    }
}

impl Eq for SubgroupH {}

impl SubgroupH {
    /// Closes the generators under composition. Enumeration is capped at
    /// `n! ≤ 8!` so degree is limited to 8.
    pub fn generated_by(arity: usize, generators: Vec<Permutation>) -> Result<Self> {
        if !(2..=8).contains(&arity) {
            return Err(Error::InvalidSubgroup(format!("arity {arity} outside 2..=8")));
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != arity) {
            return Err(Error::InvalidSubgroup(format!("generator {g} does not have degree {arity}")));
        }
        let id = Permutation::identity(arity);
        let mut elements = BTreeSet::new();
        elements.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = g.compose(&x);
                if elements.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        Ok(SubgroupH { arity, generators, elements })
    }

    pub fn trivial(arity: usize) -> Result<Self> {
        Self::generated_by(arity, Vec::new())
    }

    pub fn symmetric(arity: usize) -> Result<Self> {
        let mut gens = vec![Permutation::cycle(arity)];
        if arity > 2 {
            gens.push(Permutation::transposition(arity, 1, 2));
        }
        Self::generated_by(arity, gens)
    }

    /// The cyclic group generated by `i ↦ i + 1 mod n`.
    pub fn cyclic(arity: usize) -> Result<Self> {
        Self::generated_by(arity, vec![Permutation::cycle(arity)])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Elements in ascending one-line order; the identity comes first.
    pub fn elements(&self) -> impl Iterator<Item = &Permutation> {
        self.elements.iter()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.contains(p)
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// Some `a ∈ H` with `a ∘ x ∘ a⁻¹ = y`.
    pub fn conjugator(&self, x: &Permutation, y: &Permutation) -> Option<Permutation> {
        self.elements.iter().find(|a| &x.conjugate_by(a) == y).cloned()
    }

    pub fn are_conjugate(&self, x: &Permutation, y: &Permutation) -> bool {
        self.conjugator(x, y).is_some()
    }

    /// Least member (in one-line order) of the `H`-conjugacy class of `x`.
    pub fn class_representative(&self, x: &Permutation) -> Permutation {
        self.elements
            .iter()
            .map(|a| x.conjugate_by(a))
            .min()
            .expect("a subgroup always contains the identity")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_images(v).unwrap()
    }

    #[test]
    fn composition_applies_right_factor_first() {
        let a = p(&[2, 1, 3]);
        let b = p(&[1, 3, 2]);
        // (a ∘ b)(2) = a(b(2)) = a(3) = 3
        assert_eq!(a.compose(&b).apply(2), 3);
        assert_eq!(a.compose(&b), p(&[2, 3, 1]));
        assert_eq!(a.compose(&a.inverse()), Permutation::identity(3));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(&[1, 1, 2]).is_err());
        assert!(Permutation::from_images(&[0, 1]).is_err());
        assert!(Permutation::from_images(&[]).is_err());
    }

    #[test]
    fn subgroup_orders() {
        assert_eq!(SubgroupH::symmetric(3).unwrap().order(), 6);
        assert_eq!(SubgroupH::symmetric(4).unwrap().order(), 24);
        assert_eq!(SubgroupH::cyclic(5).unwrap().order(), 5);
        assert_eq!(SubgroupH::trivial(2).unwrap().order(), 1);
        let h = SubgroupH::symmetric(3).unwrap();
        for x in h.elements() {
            assert!(h.contains(&x.inverse()));
            for y in h.elements() {
                assert!(h.contains(&x.compose(y)));
            }
        }
    }

    #[test]
    fn conjugacy_depends_on_the_subgroup() {
        let c3 = SubgroupH::cyclic(3).unwrap();
        let s3 = SubgroupH::symmetric(3).unwrap();
        let r = Permutation::cycle(3);
        let r2 = r.inverse();
        assert!(s3.are_conjugate(&r, &r2));
        assert!(!c3.are_conjugate(&r, &r2));
        assert_eq!(s3.class_representative(&r), s3.class_representative(&r2));
    }

    #[test]
    fn cycles_and_order() {
        let x = p(&[2, 3, 1, 5, 4, 6]);
        assert_eq!(x.cycles(), vec![vec![1, 2, 3], vec![4, 5], vec![6]]);
        assert_eq!(x.order(), 6);
        assert_eq!(x.fixed_points(), 1);
        assert!(x.pow(6).is_identity());
    }
}
