//! Finite words over `{1, ..., n}` and finite rooted `n`-ary trees.
//!
//! A tree is the same data as a complete set of pairwise independent
//! branches: its leaves, read left to right, are the branch prefixes in
//! lexicographic order. Trees are stored structurally; address lists are
//! derived on demand.

use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A finite word over `{1, ..., n}`; letters are 1-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: &[usize]) -> Self {
        Word(letters.iter().map(|&l| l as u8).collect())
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&l| l as usize)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// The rest of `other` after this prefix, if it is one.
    pub fn strip_from(&self, other: &Word) -> Option<Word> {
        other.0.strip_prefix(self.0.as_slice()).map(|s| Word(s.to_vec()))
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn child(&self, letter: usize) -> Word {
        let mut v = self.0.clone();
        v.push(letter as u8);
        Word(v)
    }

    /// Letter-wise action `σ(w₁w₂…) = σ(w₁)σ(w₂)…`.
    pub fn permuted(&self, sigma: &Permutation) -> Word {
        Word(self.0.iter().map(|&l| sigma.apply(l as usize) as u8).collect())
    }

    /// Every letter lies in `1..=n`.
    pub fn is_valid(&self, n: usize) -> bool {
        self.0.iter().all(|&l| l >= 1 && l as usize <= n)
    }

    /// All `n^d` words of length `d` in lexicographic order.
    pub fn all_of_length(n: usize, d: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..d {
            out = out.iter().flat_map(|w| (1..=n).map(move |l| w.child(l))).collect();
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "<empty>");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Leaf,
    Caret(Vec<Node>),
}

impl Node {
    fn leaves(&self) -> usize {
        match self {
            Node::Leaf => 1,
            Node::Caret(c) => c.iter().map(Node::leaves).sum(),
        }
    }

    fn depth(&self) -> usize {
        match self {
            Node::Leaf => 0,
            Node::Caret(c) => 1 + c.iter().map(Node::depth).max().unwrap_or(0),
        }
    }

    fn carets(&self) -> usize {
        match self {
            Node::Leaf => 0,
            Node::Caret(c) => 1 + c.iter().map(Node::carets).sum::<usize>(),
        }
    }

    fn collect(&self, prefix: &mut Vec<u8>, out: &mut Vec<Word>) {
        match self {
            Node::Leaf => out.push(Word(prefix.clone())),
            Node::Caret(children) => {
                for (i, c) in children.iter().enumerate() {
                    prefix.push(i as u8 + 1);
                    c.collect(prefix, out);
                    prefix.pop();
                }
            }
        }
    }

    /// Expands the `k`-th leaf (0-based) of this subtree; `k` is consumed.
    fn expand(&mut self, k: &mut usize, n: usize) -> bool {
        match self {
            Node::Leaf => {
                if *k == 0 {
                    *self = Node::Caret(vec![Node::Leaf; n]);
                    true
                } else {
                    *k -= 1;
                    false
                }
            }
            Node::Caret(children) => children.iter_mut().any(|c| c.expand(k, n)),
        }
    }

    fn union(&self, other: &Node) -> Node {
        match (self, other) {
            (Node::Leaf, x) | (x, Node::Leaf) => x.clone(),
            (Node::Caret(a), Node::Caret(b)) => {
                Node::Caret(a.iter().zip(b).map(|(x, y)| x.union(y)).collect())
            }
        }
    }

    fn insert(&mut self, word: &[u8], n: usize) {
        if word.is_empty() {
            return;
        }
        if let Node::Leaf = self {
            *self = Node::Caret(vec![Node::Leaf; n]);
        }
        if let Node::Caret(children) = self {
            children[word[0] as usize - 1].insert(&word[1..], n);
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Leaf => write!(f, "*"),
            Node::Caret(children) => {
                write!(f, "(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    c.write(f)?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A finite rooted tree in which every internal node has exactly `arity` children.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tree {
    arity: usize,
    root: Node,
}

/// A common expansion of two trees together with, for each of its leaves,
/// the 1-based index of the leaf of each input whose address is a prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonExpansion {
    pub tree: Tree,
    pub to_first: Vec<usize>,
    pub to_second: Vec<usize>,
}

impl Tree {
    pub fn leaf(arity: usize) -> Self {
        Tree { arity, root: Node::Leaf }
    }

    /// A single caret: the root with its `arity` children.
    pub fn caret(arity: usize) -> Self {
        Tree { arity, root: Node::Caret(vec![Node::Leaf; arity]) }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn leaf_count(&self) -> usize {
        self.root.leaves()
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn caret_count(&self) -> usize {
        self.root.carets()
    }

    /// Leaf addresses, left to right; they are strictly increasing in
    /// lexicographic order.
    pub fn leaf_addresses(&self) -> Vec<Word> {
        let mut out = Vec::with_capacity(self.leaf_count());
        self.root.collect(&mut Vec::new(), &mut out);
        out
    }

    /// Replaces leaf `leaf_index` (1-based) with a caret.
    pub fn expand_leaf(&self, leaf_index: usize) -> Result<Tree> {
        let leaves = self.leaf_count();
        if leaf_index == 0 || leaf_index > leaves {
            return Err(Error::LeafIndexOutOfRange { index: leaf_index, leaves });
        }
        let mut t = self.clone();
        let mut k = leaf_index - 1;
        t.root.expand(&mut k, self.arity);
        Ok(t)
    }

    /// The tree whose leaves are exactly `addresses`. Fails unless the set is
    /// complete and pairwise independent.
    pub fn from_addresses(arity: usize, addresses: &[Word]) -> Result<Tree> {
        if addresses.is_empty() {
            return Err(Error::InvalidTree("empty address set".into()));
        }
        let mut root = Node::Leaf;
        for w in addresses {
            if !w.is_valid(arity) {
                return Err(Error::InvalidTree(format!("address {w} has a letter outside 1..={arity}")));
            }
            root.insert(&w.0, arity);
        }
        let t = Tree { arity, root };
        let mut sorted = addresses.to_vec();
        sorted.sort();
        if t.leaf_addresses() != sorted {
            return Err(Error::InvalidTree("addresses are not a complete independent set".into()));
        }
        Ok(t)
    }

    /// 1-based index of the leaf whose address is a prefix of `w`.
    pub fn leaf_containing(&self, w: &Word) -> Option<usize> {
        let mut node = &self.root;
        let mut offset = 0;
        let mut letters = w.0.iter();
        loop {
            match node {
                Node::Leaf => return Some(offset + 1),
                Node::Caret(children) => {
                    let l = *letters.next()? as usize;
                    offset += children[..l - 1].iter().map(Node::leaves).sum::<usize>();
                    node = &children[l - 1];
                }
            }
        }
    }

    /// The minimal common expansion: its carets are the union of both inputs' carets.
    pub fn common_expansion(&self, other: &Tree) -> Result<CommonExpansion> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch(self.arity, other.arity));
        }
        let tree = Tree { arity: self.arity, root: self.root.union(&other.root) };
        let addrs = tree.leaf_addresses();
        let to_first = addrs.iter().map(|w| self.leaf_containing(w).expect("expansion")).collect();
        let to_second = addrs.iter().map(|w| other.leaf_containing(w).expect("expansion")).collect();
        Ok(CommonExpansion { tree, to_first, to_second })
    }

    /// Parses the parenthesised text form, e.g. `(* * (* * *))` for `n = 3`.
    pub fn parse(arity: usize, text: &str) -> Result<Tree> {
        fn node(chars: &[char], pos: &mut usize, arity: usize) -> Result<Node> {
            match chars.get(*pos) {
                Some('*') => {
                    *pos += 1;
                    Ok(Node::Leaf)
                }
                Some('(') => {
                    *pos += 1;
                    let mut children = Vec::new();
                    while chars.get(*pos) != Some(&')') {
                        if *pos >= chars.len() {
                            return Err(Error::InvalidTree("unbalanced parentheses".into()));
                        }
                        children.push(node(chars, pos, arity)?);
                    }
                    *pos += 1;
                    if children.len() != arity {
                        return Err(Error::InvalidTree(format!(
                            "caret with {} children, expected {arity}",
                            children.len()
                        )));
                    }
                    Ok(Node::Caret(children))
                }
                Some(c) => Err(Error::InvalidTree(format!("unexpected character {c:?}"))),
                None => Err(Error::InvalidTree("unexpected end of input".into())),
            }
        }
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let root = node(&chars, &mut pos, arity)?;
        if pos != chars.len() {
            return Err(Error::InvalidTree("trailing characters".into()));
        }
        Ok(Tree { arity, root })
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.write(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &[usize]) -> Word {
        Word::new(s)
    }

    #[test]
    fn single_leaf_has_the_empty_address() {
        assert_eq!(Tree::leaf(2).leaf_addresses(), vec![Word::empty()]);
    }

    #[test]
    fn one_caret_addresses() {
        assert_eq!(Tree::caret(3).leaf_addresses(), vec![w(&[1]), w(&[2]), w(&[3])]);
    }

    #[test]
    fn expanding_twice_gives_a_left_comb() {
        let t = Tree::leaf(2).expand_leaf(1).unwrap();
        assert_eq!(t, Tree::caret(2));
        let comb = t.expand_leaf(1).unwrap();
        assert_eq!(comb.to_string(), "((* *) *)");
        assert_eq!(comb.leaf_count(), 3);
    }

    #[test]
    fn expand_out_of_range() {
        assert_eq!(
            Tree::caret(2).expand_leaf(3),
            Err(Error::LeafIndexOutOfRange { index: 3, leaves: 2 })
        );
        assert!(Tree::caret(2).expand_leaf(0).is_err());
    }

    #[test]
    fn parse_and_print() {
        let t = Tree::parse(3, " (* *\n(* * *))").unwrap();
        assert_eq!(t.to_string(), "(* * (* * *))");
        assert_eq!(t.leaf_count(), 5);
        assert!(Tree::parse(3, "(* *)").is_err());
        assert!(Tree::parse(2, "(* *").is_err());
        assert!(Tree::parse(2, "(* *) *").is_err());
        assert_eq!(Tree::parse(2, "*").unwrap(), Tree::leaf(2));
    }

    #[test]
    fn from_addresses_validates() {
        let t = Tree::from_addresses(2, &[w(&[2]), w(&[1, 1]), w(&[1, 2])]).unwrap();
        assert_eq!(t.to_string(), "((* *) *)");
        assert!(Tree::from_addresses(2, &[w(&[1]), w(&[1, 2])]).is_err());
        assert!(Tree::from_addresses(2, &[w(&[1])]).is_err());
    }

    #[test]
    fn common_expansion_trivial_cases() {
        let t = Tree::parse(2, "((* *) *)").unwrap();
        let ce = t.common_expansion(&t).unwrap();
        assert_eq!(ce.tree, t);
        assert_eq!(ce.to_first, vec![1, 2, 3]);
        assert_eq!(ce.to_second, vec![1, 2, 3]);
        let ce = Tree::leaf(2).common_expansion(&Tree::caret(2)).unwrap();
        assert_eq!(ce.tree, Tree::caret(2));
        assert_eq!(ce.to_first, vec![1, 1]);
        assert_eq!(ce.to_second, vec![1, 2]);
        assert!(Tree::leaf(2).common_expansion(&Tree::leaf(3)).is_err());
    }

    #[test]
    fn leaf_containing_finds_prefix_leaf() {
        let t = Tree::parse(3, "(* * (* * *))").unwrap();
        assert_eq!(t.leaf_containing(&w(&[3, 2, 1, 1])), Some(4));
        assert_eq!(t.leaf_containing(&w(&[1])), Some(1));
        assert_eq!(t.leaf_containing(&w(&[3])), None);
    }
}
