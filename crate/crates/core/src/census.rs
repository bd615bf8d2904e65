//! Counting conjugacy classes of elements of prime order, and a bounded
//! search for explicit conjugators.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::closed::{closure_of, conjugating_equivalent, ClosedDiagram};
use crate::element::TreePairElement;
use crate::error::{Error, Result};
use crate::io::element_to_json;
use crate::perm::SubgroupH;
use crate::sample::reduced_elements;

/// `Σ n_i |S_i| ≡* 1 (mod n − 1)` in the unknowns `n_i ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceInstance {
    pub n: u64,
    pub sizes: Vec<u64>,
    /// Require `Σ n_i |S_i| = 0` exactly when the right-hand side is zero.
    pub star: bool,
}

impl CongruenceInstance {
    pub fn new(n: u64, sizes: Vec<u64>, star: bool) -> Result<Self> {
        if n < 2 || sizes.contains(&0) {
            return Err(Error::Precondition("need n >= 2 and positive sizes".into()));
        }
        Ok(CongruenceInstance { n, sizes, star })
    }

    /// The instance for `Z_p`: transitive `Z_p`-sets have size 1 or `p`.
    pub fn cyclic_prime(n: u64, p: u64) -> Self {
        CongruenceInstance { n, sizes: vec![1, p], star: true }
    }

    fn satisfied(&self, xs: &[u64]) -> bool {
        let total: u64 = xs.iter().zip(&self.sizes).map(|(x, s)| x * s).sum();
        let m = self.n - 1;
        total % m == 1 % m && (!self.star || total != 0)
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Number of solution classes, a class being the residue mod `n − 1`
/// together with the zero flag of every unknown. Unknowns range over
/// `0..=bound`.
pub fn count_congruence_solutions(inst: &CongruenceInstance, bound: u64) -> usize {
    let m = inst.n - 1;
    let t = inst.sizes.len();
    let mut classes = BTreeSet::new();
    let mut xs = vec![0u64; t];
    loop {
        if inst.satisfied(&xs) {
            let class: Vec<(u64, bool)> = xs.iter().map(|&x| (x % m, x == 0)).collect();
            classes.insert(class);
        }
        // odometer over 0..=bound
        let mut i = 0;
        while i < t && xs[i] == bound {
            xs[i] = 0;
            i += 1;
        }
        if i == t {
            break;
        }
        xs[i] += 1;
    }
    classes.len()
}

fn default_bound(n: u64, p: u64) -> u64 {
    2 * (n - 1).max(1) * p
}

/// Conjugacy classes of elements of order `p` in `V_n(P)` with
/// `|P| = ord_p`: the congruence solutions for `Z_p`, less the trivial
/// action.
pub fn count_order_p_classes(n: u64, p: u64, ord_p: u64) -> Result<usize> {
    if n < 2 {
        return Err(Error::Precondition(format!("n = {n} < 2")));
    }
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    if (n - 1).is_multiple_of(p) {
        return Err(Error::Precondition(format!("{p} divides n - 1 = {}", n - 1)));
    }
    if ord_p.is_multiple_of(p) {
        return Err(Error::Precondition(format!("{p} divides ord(P) = {ord_p}")));
    }
    let inst = CongruenceInstance::cyclic_prime(n, p);
    Ok(count_congruence_solutions(&inst, default_bound(n, p)) - 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub p: u64,
    pub classes_n: usize,
    pub classes_m: usize,
}

/// The least prime dividing none of `ord_p`, `ord_q`, `n − 1`, `m − 1`,
/// with the class counts it separates.
pub fn nonisomorphism_witness(n: u64, m: u64, ord_p: u64, ord_q: u64) -> Result<Witness> {
    if n == m || n < 2 || m < 2 {
        return Err(Error::Precondition("need distinct n, m >= 2".into()));
    }
    let p = (2..)
        .filter(|&p| is_prime(p))
        .find(|p| [ord_p, ord_q, n - 1, m - 1].iter().all(|x| x % p != 0))
        .expect("primes are unbounded");
    Ok(Witness { p, classes_n: count_order_p_classes(n, p, ord_p)?, classes_m: count_order_p_classes(m, p, ord_q)? })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleAnswer {
    /// `h` with `h⁻¹ f h = g`.
    Yes(TreePairElement),
    Inconclusive,
}

/// Breadth-first search through conjugates `s⁻¹ x s` by a fixed set of
/// small elements, never leaving the elements with at most `bound`
/// leaves. Every positive answer carries a verified conjugator.
pub struct ConjugacyOracle {
    subgroup: Arc<SubgroupH>,
    steps: Vec<(TreePairElement, TreePairElement)>,
    bound: usize,
    max_states: usize,
}

impl ConjugacyOracle {
    /// Conjugates by every reduced element with at most `step_leaves` leaves.
    pub fn new(subgroup: Arc<SubgroupH>, step_leaves: usize, bound: usize) -> Self {
        let steps = reduced_elements(&subgroup, step_leaves)
            .into_iter()
            .filter(|s| !s.is_identity())
            .map(|s| {
                let inv = s.inverse().reduced();
                (s, inv)
            })
            .collect();
        ConjugacyOracle { subgroup, steps, bound, max_states: 200_000 }
    }

    pub fn with_max_states(mut self, max_states: usize) -> Self {
        self.max_states = max_states;
        self
    }

    fn neighbours(&self, x: &TreePairElement) -> impl Iterator<Item = (usize, TreePairElement)> + '_ {
        let x = x.clone();
        self.steps.iter().enumerate().filter_map(move |(i, (s, inv))| {
            let y = inv.compose(&x).ok()?.compose(s).ok()?.reduced();
            (y.leaf_count() <= self.bound).then_some((i, y))
        })
    }

    /// Every conjugate reachable from `f`, with a conjugator for each.
    pub fn orbit(&self, f: &TreePairElement) -> HashMap<TreePairElement, TreePairElement> {
        let f = f.reduced();
        let mut found = HashMap::from([(f.clone(), TreePairElement::identity(self.subgroup.clone()))]);
        let mut queue = VecDeque::from([f]);
        while let Some(x) = queue.pop_front() {
            if found.len() >= self.max_states {
                break;
            }
            let hx = found[&x].clone();
            for (i, y) in self.neighbours(&x) {
                if !found.contains_key(&y) {
                    let h = hx.compose(&self.steps[i].0).expect("same group").reduced();
                    found.insert(y.clone(), h);
                    queue.push_back(y);
                }
            }
        }
        found
    }

    pub fn search(&self, f: &TreePairElement, g: &TreePairElement) -> OracleAnswer {
        let target = g.reduced();
        match self.orbit(f).remove(&target) {
            Some(h) if verify(f, g, &h) => OracleAnswer::Yes(h),
            _ => OracleAnswer::Inconclusive,
        }
    }
}

/// `h⁻¹ f h = g`.
pub fn verify(f: &TreePairElement, g: &TreePairElement, h: &TreePairElement) -> bool {
    f.conjugate_by(h).is_ok_and(|c| c.equals(g).unwrap_or(false))
}

/// Oracle with conjugation steps of at most 3 leaves.
pub fn oracle_conjugate(f: &TreePairElement, g: &TreePairElement, max_leaves: usize) -> Result<OracleAnswer> {
    if f.arity() != g.arity() {
        return Err(Error::ArityMismatch(f.arity(), g.arity()));
    }
    if f.subgroup() != g.subgroup() {
        return Err(Error::SubgroupMismatch);
    }
    Ok(ConjugacyOracle::new(f.subgroup().clone(), 3, max_leaves).search(f, g))
}

#[derive(Clone, Debug)]
pub struct CensusReport {
    pub expected: usize,
    pub representatives: Vec<TreePairElement>,
    /// Elements of order `p` whose reduced closure still has σ-vertices.
    pub sigma_violations: Vec<TreePairElement>,
    pub elements_seen: usize,
}

impl CensusReport {
    pub fn classes(&self) -> usize {
        self.representatives.len()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, r) in self.representatives.iter().enumerate() {
            let _ = writeln!(out, "class {}: representative = {}", k + 1, element_to_json(r));
        }
        let _ = writeln!(out, "classes={} expected={}", self.classes(), self.expected);
        out
    }
}

/// Elements of order exactly `p` with at most `max_leaves` leaves,
/// partitioned into conjugacy classes.
pub fn class_census_experiment(h: &Arc<SubgroupH>, p: u64, max_leaves: usize) -> Result<CensusReport> {
    let n = h.arity() as u64;
    let expected = count_order_p_classes(n, p, h.order() as u64)?;
    let mut classes: Vec<(TreePairElement, ClosedDiagram)> = Vec::new();
    let mut violations = Vec::new();
    let mut seen = 0;
    for g in reduced_elements(h, max_leaves) {
        if g.order(p as usize) != Some(p as usize) {
            continue;
        }
        seen += 1;
        let cd = closure_of(&g);
        if !cd.is_sigma_free() {
            violations.push(g.clone());
        }
        if !classes.iter().any(|(_, c)| conjugating_equivalent(c, &cd, h)) {
            classes.push((g, cd));
        }
    }
    Ok(CensusReport {
        expected,
        representatives: classes.into_iter().map(|(g, _)| g).collect(),
        sigma_violations: violations,
        elements_seen: seen,
    })
}
