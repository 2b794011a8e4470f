//! Permutations as gates, group closure, two-generator group search and the
//! commuting structure inside a group.
//!
//! Permutations act on letters 0..d internally; text input and output use
//! the 1-based letters of the literature. Composition `a.compose(b)` applies
//! `b` first, so the gate of a product is the product of the gates.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::Cyclotomic;
use crate::graph::Graph;
use crate::matrix::Matrix;

pub const MAX_DEGREE: usize = 9;
pub const DEFAULT_ORDER_CAP: usize = 5000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GateError {
    #[error("group order exceeds cap {cap} (reached {partial} elements)")]
    OrderCapExceeded { cap: usize, partial: usize },
    #[error("generators have different degrees {0} and {1}")]
    DegreeMismatch(usize, usize),
    #[error("at least one generator is required")]
    NoGenerators,
    #[error("invalid permutation: {0}")]
    Parse(String),
    #[error("degree {0} is outside 1..={MAX_DEGREE}")]
    UnsupportedDegree(usize),
}

/// How permutation strings are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Notation {
    /// Images of 1, 2, …, d in order; parentheses and commas are only grouping.
    OneLine,
    /// Disjoint cycles such as `(1,2,3)(4,5)`; the degree must be given.
    Cycle,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(d: usize) -> Self {
        Permutation {
            images: (0..d as u8).collect(),
        }
    }

    /// From 0-based images.
    pub fn from_images(images: Vec<u8>) -> Result<Self, GateError> {
        let d = images.len();
        if d == 0 || d > MAX_DEGREE {
            return Err(GateError::UnsupportedDegree(d));
        }
        let mut seen = vec![false; d];
        for &i in &images {
            if i as usize >= d || std::mem::replace(&mut seen[i as usize], true) {
                return Err(GateError::Parse(format!("{images:?} is not a bijection on 0..{d}")));
            }
        }
        Ok(Permutation { images })
    }

    /// From 1-based images, the usual one-line notation.
    pub fn from_one_line(images: &[usize]) -> Result<Self, GateError> {
        if images.iter().any(|&i| i == 0 || i > MAX_DEGREE) {
            return Err(GateError::Parse(format!("{images:?} uses letters outside 1..={MAX_DEGREE}")));
        }
        Self::from_images(images.iter().map(|&i| (i - 1) as u8).collect())
    }

    /// Product of 1-based disjoint cycles on `d` letters.
    pub fn from_cycles(d: usize, cycles: &[Vec<usize>]) -> Result<Self, GateError> {
        if d == 0 || d > MAX_DEGREE {
            return Err(GateError::UnsupportedDegree(d));
        }
        let mut images: Vec<u8> = (0..d as u8).collect();
        let mut used = vec![false; d];
        for cyc in cycles {
            for &x in cyc {
                if x == 0 || x > d || std::mem::replace(&mut used[x - 1], true) {
                    return Err(GateError::Parse(format!("letter {x} is repeated or outside 1..={d}")));
                }
            }
            for (k, &x) in cyc.iter().enumerate() {
                images[x - 1] = (cyc[(k + 1) % cyc.len()] - 1) as u8;
            }
        }
        Ok(Permutation { images })
    }

    /// Parses either notation; `degree` is required for cycle notation and
    /// checked for one-line notation when given.
    pub fn parse(s: &str, notation: Notation, degree: Option<usize>) -> Result<Self, GateError> {
        match notation {
            Notation::OneLine => {
                let nums = numbers(s)?;
                if let Some(d) = degree {
                    if d != nums.len() {
                        return Err(GateError::Parse(format!("{s:?} has {} images, expected {d}", nums.len())));
                    }
                }
                Self::from_one_line(&nums)
            }
            Notation::Cycle => {
                let d = degree.ok_or_else(|| GateError::Parse("cycle notation needs a degree".into()))?;
                let mut cycles = Vec::new();
                let mut rest = s.trim();
                while !rest.is_empty() {
                    let body = rest
                        .strip_prefix('(')
                        .ok_or_else(|| GateError::Parse(format!("expected '(' in {s:?}")))?;
                    let end = body.find(')').ok_or_else(|| GateError::Parse(format!("unclosed cycle in {s:?}")))?;
                    cycles.push(numbers(&body[..end])?);
                    rest = body[end + 1..].trim_start();
                }
                Self::from_cycles(d, &cycles)
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 0-based images.
    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn apply(&self, letter: usize) -> usize {
        self.images[letter] as usize
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i as usize + 1).collect()
    }

    /// self ∘ other: apply `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u8; self.degree()];
        for (j, &i) in self.images.iter().enumerate() {
            images[i as usize] = j as u8;
        }
        Permutation { images }
    }

    pub fn conjugate_by(&self, c: &Permutation) -> Permutation {
        c.compose(self).compose(&c.inverse())
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(j, &i)| j == i as usize)
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(j, &i)| *j == i as usize).count()
    }

    /// Exactly one fixed point, i.e. exactly one 1 on the gate's diagonal.
    pub fn is_magic(&self) -> bool {
        self.fixed_points() == 1
    }

    pub fn order(&self) -> u32 {
        self.cycle_type().into_iter().fold(1, |acc, l| num_integer::lcm(acc, l as u32))
    }

    /// Cycle lengths, longest first, including fixed points.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// Disjoint cycles (0-based), each starting at its smallest letter.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let d = self.degree();
        let mut seen = vec![false; d];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x);
                x = self.apply(x);
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_string(&self) -> String {
        let parts: Vec<String> = self
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                let s: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
                format!("({})", s.join(","))
            })
            .collect();
        if parts.is_empty() {
            "()".into()
        } else {
            parts.concat()
        }
    }

    /// Gate matrix: entry (perm(j), j) is 1, so e_j ↦ e_{perm(j)}.
    pub fn matrix(&self) -> Matrix {
        Matrix::from_fn(self.degree(), self.degree(), |i, j| {
            if self.apply(j) == i {
                Cyclotomic::one()
            } else {
                Cyclotomic::zero()
            }
        })
    }

    fn key(&self) -> u64 {
        self.images.iter().fold(0u64, |acc, &i| acc << 4 | i as u64)
    }

    fn from_key(key: u64, d: usize) -> Permutation {
        let images = (0..d).rev().map(|k| ((key >> (4 * k)) & 0xf) as u8).collect();
        Permutation { images }
    }
}

fn numbers(s: &str) -> Result<Vec<usize>, GateError> {
    s.split(|c: char| !c.is_ascii_digit())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| GateError::Parse(format!("bad number {t:?}"))))
        .collect()
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.one_line().iter().map(ToString::to_string).collect();
        write!(f, "[{}]", s.join(","))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}

/// A permutation viewed as a d×d gate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PermutationGate {
    pub perm: Permutation,
}

impl PermutationGate {
    pub fn new(perm: Permutation) -> Self {
        PermutationGate { perm }
    }

    pub fn matrix(&self) -> Matrix {
        self.perm.matrix()
    }

    pub fn is_magic(&self) -> bool {
        self.perm.is_magic()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateGroup {
    generators: Vec<Permutation>,
    /// sorted; elements[0] is the identity
    elements: Vec<Permutation>,
}

impl GateGroup {
    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.elements[0].degree()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .enumerate()
            .all(|(i, a)| self.generators[i + 1..].iter().all(|b| a.compose(b) == b.compose(a)))
    }

    /// Whether the group moves letter 0 to every letter.
    pub fn is_transitive(&self) -> bool {
        let mut hit = vec![false; self.degree()];
        for g in &self.elements {
            hit[g.apply(0)] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn signature(&self) -> Signature {
        group_signature(self)
    }
}

/// Breadth-first closure of the generators.
pub fn close_group(generators: &[Permutation], order_cap: usize) -> Result<GateGroup, GateError> {
    let first = generators.first().ok_or(GateError::NoGenerators)?;
    let d = first.degree();
    if let Some(g) = generators.iter().find(|g| g.degree() != d) {
        return Err(GateError::DegreeMismatch(d, g.degree()));
    }
    let keys = closure_keys(generators, order_cap)?;
    let mut elements: Vec<Permutation> = keys.into_iter().map(|k| Permutation::from_key(k, d)).collect();
    elements.sort();
    Ok(GateGroup {
        generators: generators.to_vec(),
        elements,
    })
}

fn closure_keys(generators: &[Permutation], order_cap: usize) -> Result<Vec<u64>, GateError> {
    let d = generators[0].degree();
    let id = Permutation::identity(d);
    let mut seen: HashSet<u64> = HashSet::from([id.key()]);
    let mut all = vec![id.key()];
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for g in generators {
                let y = g.compose(x);
                if seen.insert(y.key()) {
                    all.push(y.key());
                    if all.len() > order_cap {
                        return Err(GateError::OrderCapExceeded {
                            cap: order_cap,
                            partial: all.len(),
                        });
                    }
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    Ok(all)
}

/// Order, element-order multiset and commutativity of a group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub order: usize,
    pub element_orders: BTreeMap<u32, usize>,
    pub abelian: bool,
}

impl Signature {
    /// Conventional name when the signature is one of the tabulated ones.
    ///
    /// The element-order multiset is a heuristic, not an isomorphism test; it
    /// separates all groups met for d ≤ 9.
    pub fn name(&self) -> Option<String> {
        let orders: Vec<(u32, usize)> = self.element_orders.iter().map(|(&k, &v)| (k, v)).collect();
        if self.abelian {
            let max = orders.last().map_or(1, |o| o.0) as usize;
            return Some(if max == self.order {
                if self.order == 1 {
                    "1".into()
                } else {
                    format!("Z{}", self.order)
                }
            } else {
                format!("abelian({})", self.order)
            });
        }
        let name = match (self.order, orders.as_slice()) {
            (6, [(1, 1), (2, 3), (3, 2)]) => "S3",
            (8, [(1, 1), (2, 5), (4, 2)]) => "D8",
            (10, [(1, 1), (2, 5), (5, 4)]) => "D10",
            (12, [(1, 1), (2, 3), (3, 8)]) => "A4",
            (14, [(1, 1), (2, 7), (7, 6)]) => "D14",
            (20, [(1, 1), (2, 5), (4, 10), (5, 4)]) => "Z5⋊Z4",
            (21, [(1, 1), (3, 14), (7, 6)]) => "Z7⋊Z3",
            (24, [(1, 1), (2, 9), (3, 8), (4, 6)]) => "S4",
            (36, [(1, 1), (2, 9), (3, 8), (4, 18)]) => "Z3²⋊Z4",
            (42, [(1, 1), (2, 7), (3, 14), (6, 14), (7, 6)]) => "Z7⋊Z6",
            (56, [(1, 1), (2, 7), (7, 48)]) => "Z2³⋊Z7",
            (60, [(1, 1), (2, 15), (3, 20), (5, 24)]) => "A5",
            (72, [(1, 1), (2, 9), (3, 8), (4, 18), (8, 36)]) => "Z3²⋊Z8",
            (120, [(1, 1), (2, 25), (3, 20), (4, 30), (5, 24), (6, 20)]) => "S5",
            (144, [(1, 1), (2, 21), (3, 8), (4, 54), (6, 24), (8, 36)]) => "G144",
            (168, [(1, 1), (2, 21), (3, 56), (4, 42), (7, 48)]) => "PSL(2,7)",
            (360, [(1, 1), (2, 45), (3, 80), (4, 90), (5, 144)]) => "A6",
            _ => return None,
        };
        Some(name.to_string())
    }
}

pub fn group_signature(g: &GateGroup) -> Signature {
    let mut element_orders = BTreeMap::new();
    for e in &g.elements {
        *element_orders.entry(e.order()).or_insert(0) += 1;
    }
    Signature {
        order: g.order(),
        element_orders,
        abelian: g.is_abelian(),
    }
}

/// All maximal sets of mutually commuting non-identity elements with at
/// least `min_size` members; each clique is sorted and the list is in
/// lexicographic order of element indices.
pub fn commuting_cliques(g: &GateGroup, min_size: usize) -> Vec<Vec<Permutation>> {
    commuting_clique_indices(g, min_size)
        .into_iter()
        .map(|c| c.into_iter().map(|i| g.elements[i].clone()).collect())
        .collect()
}

/// Same as [`commuting_cliques`] but with indices into `g.elements()`.
pub fn commuting_clique_indices(g: &GateGroup, min_size: usize) -> Vec<Vec<usize>> {
    let nonid: Vec<usize> = (1..g.order()).collect();
    let graph = Graph::from_fn(nonid.len(), |a, b| {
        let (x, y) = (&g.elements[nonid[a]], &g.elements[nonid[b]]);
        x.compose(y) == y.compose(x)
    });
    graph
        .maximal_cliques(min_size.max(1))
        .into_iter()
        .map(|c| c.into_iter().map(|v| nonid[v]).collect())
        .collect()
}

/// Every permutation of 0..d, in lexicographic order.
pub fn all_permutations(d: usize) -> Vec<Permutation> {
    let mut cur: Vec<u8> = (0..d as u8).collect();
    let mut out = vec![Permutation { images: cur.clone() }];
    loop {
        let Some(i) = (0..d.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..d).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(Permutation { images: cur.clone() });
    }
}

/// One permutation per cycle type, built from consecutive letters.
fn cycle_type_representative(d: usize, lengths: &[usize]) -> Permutation {
    let mut cycles = Vec::new();
    let mut next = 1;
    for &l in lengths {
        cycles.push((next..next + l).collect::<Vec<_>>());
        next += l;
    }
    Permutation::from_cycles(d, &cycles).expect("lengths sum to d")
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Options for [`enumerate_generator_pairs`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairSearch {
    pub order_cap: usize,
    /// restrict both generators to one-fixed-point permutations
    pub magic_only: bool,
    /// keep pairs where one generator is a power of the other
    pub include_cyclic: bool,
}

impl PairSearch {
    pub fn magic(order_cap: usize) -> Self {
        PairSearch {
            order_cap,
            magic_only: true,
            include_cyclic: false,
        }
    }
}

/// One S_d-conjugacy class of ordered generating pairs.
#[derive(Debug, Clone)]
pub struct PairClass {
    pub first: Permutation,
    pub second: Permutation,
    pub group: GateGroup,
    pub signature: Signature,
    pub name: Option<String>,
    pub transitive: bool,
}

#[derive(Debug, Clone)]
pub struct SkippedPair {
    pub first: Permutation,
    pub second: Permutation,
    pub partial: usize,
}

#[derive(Debug, Clone)]
pub struct PairSearchResult {
    pub degree: usize,
    pub options: PairSearch,
    /// classes in order of (first cycle type, second generator)
    pub classes: Vec<PairClass>,
    /// pairs whose closure exceeded the order cap
    pub skipped: Vec<SkippedPair>,
    /// pairs dropped because they generate a cyclic group
    pub cyclic_excluded: usize,
}

/// Groups with identical element sets, and how many pair classes produced them.
#[derive(Debug, Clone)]
pub struct DistinctGroup {
    pub group: GateGroup,
    pub signature: Signature,
    pub name: Option<String>,
    pub transitive: bool,
    pub pair_classes: usize,
}

impl PairSearchResult {
    /// Pair classes merged by identical element set, in first-seen order.
    pub fn distinct_groups(&self) -> Vec<DistinctGroup> {
        let mut index: HashMap<&[Permutation], usize> = HashMap::new();
        let mut out: Vec<DistinctGroup> = Vec::new();
        for c in &self.classes {
            match index.get(c.group.elements()) {
                Some(&i) => out[i].pair_classes += 1,
                None => {
                    index.insert(c.group.elements(), out.len());
                    out.push(DistinctGroup {
                        group: c.group.clone(),
                        signature: c.signature.clone(),
                        name: c.name.clone(),
                        transitive: c.transitive,
                        pair_classes: 1,
                    });
                }
            }
        }
        out
    }

    /// Number of pair classes per group name (unnamed groups keyed by order).
    pub fn copies_by_name(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for c in &self.classes {
            let key = c.name.clone().unwrap_or_else(|| format!("order {}", c.signature.order));
            *out.entry(key).or_insert(0) += 1;
        }
        out
    }
}

/// Two-magic-generator groups in degree d, one entry per conjugacy class of
/// ordered pairs; cyclic groups are excluded.
pub fn enumerate_magic_pairs(d: usize, order_cap: usize) -> Result<PairSearchResult, GateError> {
    enumerate_generator_pairs(d, PairSearch::magic(order_cap))
}

/// Enumerates S_d-conjugacy classes of ordered pairs (a, b) of distinct
/// non-identity permutations. The first generator runs over cycle-type
/// representatives; the second over orbit representatives of the
/// centralizer of the first.
pub fn enumerate_generator_pairs(d: usize, opts: PairSearch) -> Result<PairSearchResult, GateError> {
    if !(2..=MAX_DEGREE).contains(&d) {
        return Err(GateError::UnsupportedDegree(d));
    }
    let all = all_permutations(d);
    let allowed = |p: &Permutation| !p.is_identity() && (!opts.magic_only || p.is_magic());
    let candidates: Vec<&Permutation> = all.iter().filter(|p| allowed(p)).collect();
    let firsts: Vec<Permutation> = partitions(d, d)
        .into_iter()
        .map(|lengths| cycle_type_representative(d, &lengths))
        .filter(|p| allowed(p))
        .collect();

    struct Outcome {
        classes: Vec<PairClass>,
        skipped: Vec<SkippedPair>,
        cyclic: usize,
    }

    let outcomes: Vec<Outcome> = firsts
        .par_iter()
        .map(|a| {
            let centralizer: Vec<&Permutation> = all.iter().filter(|c| c.compose(a) == a.compose(c)).collect();
            let powers = cyclic_powers(a);
            let mut visited: HashSet<u64> = HashSet::new();
            let mut reps = Vec::new();
            for b in &candidates {
                if *b == a || visited.contains(&b.key()) {
                    continue;
                }
                let mut best = (*b).clone();
                for c in &centralizer {
                    let conj = b.conjugate_by(c);
                    if conj < best {
                        best = conj.clone();
                    }
                    visited.insert(conj.key());
                }
                reps.push(best);
            }
            reps.sort();
            let results: Vec<Result<Option<PairClass>, SkippedPair>> = reps
                .par_iter()
                .map(|b| {
                    let cyclic = powers.contains(&b.key()) || cyclic_powers(b).contains(&a.key());
                    if cyclic && !opts.include_cyclic {
                        return Ok(None);
                    }
                    match close_group(&[a.clone(), b.clone()], opts.order_cap) {
                        Ok(group) => {
                            let signature = group_signature(&group);
                            Ok(Some(PairClass {
                                first: a.clone(),
                                second: b.clone(),
                                name: signature.name(),
                                transitive: group.is_transitive(),
                                signature,
                                group,
                            }))
                        }
                        Err(GateError::OrderCapExceeded { partial, .. }) => Err(SkippedPair {
                            first: a.clone(),
                            second: b.clone(),
                            partial,
                        }),
                        Err(e) => unreachable!("closure of valid generators failed: {e}"),
                    }
                })
                .collect();
            let mut out = Outcome {
                classes: Vec::new(),
                skipped: Vec::new(),
                cyclic: 0,
            };
            for r in results {
                match r {
                    Ok(Some(c)) => out.classes.push(c),
                    Ok(None) => out.cyclic += 1,
                    Err(s) => out.skipped.push(s),
                }
            }
            out
        })
        .collect();

    let mut result = PairSearchResult {
        degree: d,
        options: opts,
        classes: Vec::new(),
        skipped: Vec::new(),
        cyclic_excluded: 0,
    };
    for o in outcomes {
        result.classes.extend(o.classes);
        result.skipped.extend(o.skipped);
        result.cyclic_excluded += o.cyclic;
    }
    Ok(result)
}

fn cyclic_powers(a: &Permutation) -> HashSet<u64> {
    let mut out = HashSet::new();
    let mut x = a.clone();
    while out.insert(x.key()) {
        x = a.compose(&x);
    }
    out
}

/// JSON view of a group.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupJson {
    pub degree: usize,
    /// 1-based one-line images
    pub generators: Vec<Vec<usize>>,
    pub order: usize,
    pub signature: Signature,
    pub name: Option<String>,
}

impl From<&GateGroup> for GroupJson {
    fn from(g: &GateGroup) -> Self {
        let signature = group_signature(g);
        GroupJson {
            degree: g.degree(),
            generators: g.generators.iter().map(Permutation::one_line).collect(),
            order: g.order(),
            name: signature.name(),
            signature,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        Permutation::parse(s, Notation::OneLine, None).unwrap()
    }

    #[test]
    fn notations_agree() {
        let a = Permutation::parse("(1,2,3)(4,5)", Notation::Cycle, Some(5)).unwrap();
        assert_eq!(a, p("2,3,1,5,4"));
        assert_eq!(a.cycle_string(), "(1,2,3)(4,5)");
        // grouped one-line reading of a CNOT-like string
        assert_eq!(p("(1,2)(4,3)"), p("1 2 4 3"));
        assert!(Permutation::parse("(1,2)", Notation::Cycle, None).is_err());
        assert!(p("1,2,4,3").fixed_points() == 2);
        assert!(Permutation::parse("1,1,2", Notation::OneLine, None).is_err());
        assert!(Permutation::parse("(1,4)", Notation::Cycle, Some(3)).is_err());
    }

    #[test]
    fn matrix_convention() {
        for d in 1..=MAX_DEGREE {
            let perm = cycle_type_representative(d, &[d]);
            let m = perm.matrix();
            for j in 0..d {
                let mut e = vec![Cyclotomic::zero(); d];
                e[j] = Cyclotomic::one();
                let img = m.mul_vec(&e);
                assert!(img[perm.apply(j)].is_one());
                assert_eq!(img.iter().filter(|x| !x.is_zero()).count(), 1);
            }
        }
        let a = p("2,3,1,4");
        let b = p("1,3,4,2");
        assert_eq!(a.compose(&b).matrix(), a.matrix().mul(&b.matrix()));
    }

    #[test]
    fn group_axioms() {
        let a = p("3,1,5,2,4");
        assert!(a.compose(&a.inverse()).is_identity());
        assert_eq!(a.order(), 5);
        let id = Permutation::identity(5);
        assert_eq!(a.compose(&id), a);
    }

    #[test]
    fn closure_and_cap() {
        let g = close_group(&[Permutation::identity(4)], 10).unwrap();
        assert_eq!(g.order(), 1);
        let x = p("2,3,1");
        let z3 = close_group(&[x.clone()], 10).unwrap();
        assert_eq!(z3.order(), 3);
        assert!(z3.contains(&x.compose(&x)));
        let s5 = [p("2,1,3,4,5"), p("2,3,4,5,1")];
        assert_eq!(
            close_group(&s5, 50),
            Err(GateError::OrderCapExceeded { cap: 50, partial: 51 })
        );
        assert_eq!(close_group(&s5, 200).unwrap().order(), 120);
        assert_eq!(close_group(&[p("2,1"), p("1,2,3")], 10), Err(GateError::DegreeMismatch(2, 3)));
        assert_eq!(close_group(&[], 5), Err(GateError::NoGenerators));
    }

    #[test]
    fn closure_is_idempotent() {
        let g = close_group(&[p("1,3,4,2"), p("3,1,2,4")], 100).unwrap();
        let again = close_group(g.elements(), 100).unwrap();
        assert_eq!(again.elements(), g.elements());
    }

    #[test]
    fn signatures_and_names() {
        let a4 = close_group(&[p("1,3,4,2"), p("3,1,2,4")], 100).unwrap();
        let sig = a4.signature();
        assert_eq!(sig.order, 12);
        assert_eq!(sig.element_orders, BTreeMap::from([(1, 1), (2, 3), (3, 8)]));
        assert_eq!(sig.name().as_deref(), Some("A4"));
        let triv = close_group(&[Permutation::identity(3)], 1).unwrap();
        assert_eq!(triv.signature().element_orders, BTreeMap::from([(1, 1)]));
        assert_eq!(triv.signature().name().as_deref(), Some("1"));
    }

    #[test]
    fn cliques_of_abelian_group() {
        let z5 = close_group(&[p("2,3,4,5,1")], 10).unwrap();
        let cl = commuting_cliques(&z5, 2);
        assert_eq!(cl.len(), 1);
        assert_eq!(cl[0].len(), 4);
    }

    #[test]
    fn permutation_listing() {
        assert_eq!(all_permutations(4).len(), 24);
        assert_eq!(partitions(5, 5).len(), 7);
        let magic5 = all_permutations(5).into_iter().filter(Permutation::is_magic).count();
        assert_eq!(magic5, 45);
    }

    #[test]
    fn degree_four_search() {
        let r = enumerate_magic_pairs(4, DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(r.classes.len(), 2);
        assert!(r.classes.iter().all(|c| c.name.as_deref() == Some("A4")));
        assert_eq!(r.distinct_groups().len(), 1);
        assert!(r.skipped.is_empty());
    }

    #[test]
    fn degree_three_pairs() {
        let any = PairSearch {
            order_cap: 100,
            magic_only: false,
            include_cyclic: true,
        };
        let r = enumerate_generator_pairs(3, any).unwrap();
        let copies = r.copies_by_name();
        assert_eq!(copies.get("S3"), Some(&3));
        assert_eq!(copies.get("Z3"), Some(&1));
        let magic = enumerate_magic_pairs(3, 100).unwrap();
        assert_eq!(magic.classes.len(), 1);
        assert_eq!(magic.classes[0].name.as_deref(), Some("S3"));
    }
}
