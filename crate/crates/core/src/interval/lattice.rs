//! Join and meet checks on an enumerated interval.
//!
//! An element is a node together with a shift; invariant nodes ignore the
//! shift. Up- and down-sets of invariant elements are unions of whole period
//! families, so they are stored as bitsets over nodes. Non-invariant elements
//! get lifted sets with finitely many explicit shifts per node.

use std::collections::{BTreeMap, BTreeSet};

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::IntervalPoset;

/// Hasse diagram with voltages. Node ids must increase along edges.
#[derive(Clone, Debug, Default)]
pub struct HasseGraph {
    pub invariant: Vec<bool>,
    pub edges: Vec<GraphEdge>,
    pub out_edges: Vec<Vec<usize>>,
    pub in_edges: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub voltage: i64,
}

impl HasseGraph {
    pub fn new(invariant: Vec<bool>, edges: Vec<GraphEdge>) -> Self {
        let n = invariant.len();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            assert!(e.from < e.to, "edges must go up in id order");
            out_edges[e.from].push(i);
            in_edges[e.to].push(i);
        }
        HasseGraph { invariant, edges, out_edges, in_edges }
    }

    /// A finite poset given by its cover relation.
    pub fn finite(n: usize, covers: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let edges = covers.into_iter().map(|(from, to)| GraphEdge { from, to, voltage: 0 }).collect();
        HasseGraph::new(vec![true; n], edges)
    }

    pub fn len(&self) -> usize {
        self.invariant.len()
    }

    pub fn is_empty(&self) -> bool {
        self.invariant.is_empty()
    }
}

impl IntervalPoset {
    pub fn hasse(&self) -> HasseGraph {
        HasseGraph::new(
            self.nodes.iter().map(|n| n.invariant).collect(),
            self.edges.iter().map(|e| GraphEdge { from: e.from, to: e.to, voltage: e.voltage }).collect(),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WitnessElem {
    pub node: usize,
    pub shift: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Bound {
    Join,
    Meet,
}

/// Four elements with `lower[i] < upper[j]` for all `i, j`, neither pair
/// comparable, and no element between the two pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Which bound of the original pair failed to exist.
    pub failed: Bound,
    pub lower: [WitnessElem; 2],
    pub upper: [WitnessElem; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Lattice,
    Bowtie(Witness),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub verdict: Verdict,
    /// Pairs involving at most one non-invariant element, checked exhaustively.
    pub exact_pairs: usize,
    /// Pairs of two non-invariant elements, sampled.
    pub sampled_pairs: usize,
}

impl LatticeReport {
    pub fn is_lattice(&self) -> bool {
        self.verdict == Verdict::Lattice
    }
}

#[derive(Clone, Debug)]
pub struct LatticeOptions {
    pub samples: usize,
    /// Relative shifts drawn from `[-shift_range, shift_range]`.
    pub shift_range: i64,
    pub seed: u64,
    pub check_meets: bool,
}

impl Default for LatticeOptions {
    fn default() -> Self {
        LatticeOptions { samples: 10_000, shift_range: 2, seed: 1, check_meets: true }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Dir {
    Up,
    Down,
}

#[derive(Clone, Debug)]
struct Lifted {
    all: FixedBitSet,
    some: BTreeMap<usize, BTreeSet<i64>>,
}

impl Lifted {
    fn contains(&self, e: WitnessElem) -> bool {
        self.all.contains(e.node) || self.some.get(&e.node).is_some_and(|s| s.contains(&e.shift))
    }

    fn intersect(&self, other: &Lifted) -> Lifted {
        let mut all = self.all.clone();
        all.intersect_with(&other.all);
        let mut some: BTreeMap<usize, BTreeSet<i64>> = BTreeMap::new();
        for (n, s) in &self.some {
            let keep: BTreeSet<i64> = if other.all.contains(*n) {
                s.clone()
            } else {
                match other.some.get(n) {
                    Some(t) => s.intersection(t).copied().collect(),
                    None => continue,
                }
            };
            if !keep.is_empty() {
                some.entry(*n).or_default().extend(keep);
            }
        }
        for (n, s) in &other.some {
            if self.all.contains(*n) && !s.is_empty() {
                some.entry(*n).or_default().extend(s.iter().copied());
            }
        }
        some.retain(|n, _| !all.contains(*n));
        Lifted { all, some }
    }

    fn first_node(&self, dir: Dir) -> Option<usize> {
        let a = match dir {
            Dir::Up => self.all.ones().next(),
            Dir::Down => self.all.ones().next_back(),
        };
        let b = match dir {
            Dir::Up => self.some.keys().next().copied(),
            Dir::Down => self.some.keys().next_back().copied(),
        };
        match (a, b, dir) {
            (Some(x), Some(y), Dir::Up) => Some(x.min(y)),
            (Some(x), Some(y), Dir::Down) => Some(x.max(y)),
            (x, y, _) => x.or(y),
        }
    }

    /// Elements of `self` missing from `other`, nodes in scan order.
    fn first_missing(&self, other: &Lifted, dir: Dir, p: &HasseGraph) -> Option<WitnessElem> {
        let mut nodes: BTreeSet<usize> = self.all.ones().collect();
        nodes.extend(self.some.keys().copied());
        let scan: Vec<usize> = match dir {
            Dir::Up => nodes.into_iter().collect(),
            Dir::Down => nodes.into_iter().rev().collect(),
        };
        for n in scan {
            if other.all.contains(n) {
                continue;
            }
            let have = other.some.get(&n);
            if self.all.contains(n) {
                if p.invariant[n] {
                    return Some(WitnessElem { node: n, shift: 0 });
                }
                let shift = have.and_then(|h| h.iter().next_back()).map_or(0, |m| m + 1);
                return Some(WitnessElem { node: n, shift });
            }
            for &s in &self.some[&n] {
                if !have.is_some_and(|h| h.contains(&s)) {
                    return Some(WitnessElem { node: n, shift: s });
                }
            }
        }
        None
    }
}

struct Checker<'a> {
    p: &'a HasseGraph,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
}

impl<'a> Checker<'a> {
    fn new(p: &'a HasseGraph) -> Self {
        let n = p.len();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for x in (0..n).rev() {
            let mut s = FixedBitSet::with_capacity(n);
            s.insert(x);
            for &ei in &p.out_edges[x] {
                s.union_with(&up[p.edges[ei].to]);
            }
            up[x] = s;
        }
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for x in 0..n {
            let mut s = FixedBitSet::with_capacity(n);
            s.insert(x);
            for &ei in &p.in_edges[x] {
                s.union_with(&down[p.edges[ei].from]);
            }
            down[x] = s;
        }
        Checker { p, up, down }
    }

    fn norm(&self, e: WitnessElem) -> WitnessElem {
        if self.p.invariant[e.node] {
            WitnessElem { node: e.node, shift: 0 }
        } else {
            e
        }
    }

    fn lifted(&self, e: WitnessElem, dir: Dir) -> Lifted {
        let n = self.p.len();
        let reach = match dir {
            Dir::Up => &self.up,
            Dir::Down => &self.down,
        };
        if self.p.invariant[e.node] {
            return Lifted { all: reach[e.node].clone(), some: BTreeMap::new() };
        }
        let mut all = FixedBitSet::with_capacity(n);
        let mut some: BTreeMap<usize, BTreeSet<i64>> = BTreeMap::new();
        some.entry(e.node).or_default().insert(e.shift);
        let mut stack = vec![e];
        while let Some(x) = stack.pop() {
            let edges = match dir {
                Dir::Up => &self.p.out_edges[x.node],
                Dir::Down => &self.p.in_edges[x.node],
            };
            for &ei in edges {
                let ed = &self.p.edges[ei];
                let (other, shift) = match dir {
                    Dir::Up => (ed.to, x.shift + ed.voltage),
                    Dir::Down => (ed.from, x.shift - ed.voltage),
                };
                if self.p.invariant[other] {
                    all.union_with(&reach[other]);
                } else if some.entry(other).or_default().insert(shift) {
                    stack.push(WitnessElem { node: other, shift });
                }
            }
        }
        some.retain(|k, _| !all.contains(*k));
        Lifted { all, some }
    }

    fn leq(&self, a: WitnessElem, b: WitnessElem) -> bool {
        self.lifted(a, Dir::Up).contains(self.norm(b))
    }

    /// Covers of `e` in direction `dir` lying in `within`.
    fn step_inside(&self, e: WitnessElem, dir: Dir, within: &Lifted) -> Option<WitnessElem> {
        let edges = match dir {
            Dir::Up => &self.p.out_edges[e.node],
            Dir::Down => &self.p.in_edges[e.node],
        };
        let from_invariant = self.p.invariant[e.node];
        for &ei in edges {
            let ed = &self.p.edges[ei];
            let other = match dir {
                Dir::Up => ed.to,
                Dir::Down => ed.from,
            };
            if self.p.invariant[other] {
                let c = WitnessElem { node: other, shift: 0 };
                if within.contains(c) {
                    return Some(c);
                }
            } else if from_invariant {
                // any shift of the other node is adjacent
                if within.all.contains(other) {
                    return Some(WitnessElem { node: other, shift: 0 });
                }
                if let Some(&s) = within.some.get(&other).and_then(|s| s.iter().next()) {
                    return Some(WitnessElem { node: other, shift: s });
                }
            } else {
                let shift = match dir {
                    Dir::Up => e.shift + ed.voltage,
                    Dir::Down => e.shift - ed.voltage,
                };
                let c = WitnessElem { node: other, shift };
                if within.contains(c) {
                    return Some(c);
                }
            }
        }
        None
    }

    /// Checks that `a ∨ b` (for `Dir::Up`) or `a ∧ b` exists.
    fn bound(&self, a: WitnessElem, b: WitnessElem, dir: Dir) -> Option<Witness> {
        let (a, b) = (self.norm(a), self.norm(b));
        let m = self.lifted(a, dir).intersect(&self.lifted(b, dir));
        let n0 = m.first_node(dir).expect("the interval is bounded");
        let extreme: [WitnessElem; 2] = if m.all.contains(n0) {
            if self.p.invariant[n0] {
                let c = WitnessElem { node: n0, shift: 0 };
                let mc = self.lifted(c, dir);
                {
                    let d = m.first_missing(&mc, dir, self.p)?;
                    [c, d]
                }
            } else {
                [WitnessElem { node: n0, shift: 0 }, WitnessElem { node: n0, shift: 1 }]
            }
        } else {
            let shifts = &m.some[&n0];
            let mut it = shifts.iter();
            let s0 = *it.next().expect("nonempty");
            if let Some(&s1) = it.next() {
                [WitnessElem { node: n0, shift: s0 }, WitnessElem { node: n0, shift: s1 }]
            } else {
                let c = WitnessElem { node: n0, shift: s0 };
                {
                    let d = m.first_missing(&self.lifted(c, dir), dir, self.p)?;
                    [c, d]
                }
            }
        };
        // push the original pair towards the extremes as far as possible
        let back = match dir {
            Dir::Up => Dir::Down,
            Dir::Down => Dir::Up,
        };
        let common = self.lifted(extreme[0], back).intersect(&self.lifted(extreme[1], back));
        let climb = |mut x: WitnessElem| {
            while let Some(y) = self.step_inside(x, dir, &common) {
                x = y;
            }
            x
        };
        let pair = [climb(a), climb(b)];
        Some(match dir {
            Dir::Up => Witness { failed: Bound::Join, lower: pair, upper: extreme },
            Dir::Down => Witness { failed: Bound::Meet, lower: extreme, upper: pair },
        })
    }

    fn pair(&self, a: WitnessElem, b: WitnessElem, meets: bool) -> Option<Witness> {
        self.bound(a, b, Dir::Up).or_else(|| if meets { self.bound(a, b, Dir::Down) } else { None })
    }

    /// `lower[i] < upper[j]`, both pairs incomparable, nothing strictly between.
    fn verify(&self, w: &Witness) -> bool {
        let [a, b] = w.lower;
        let [c, d] = w.upper;
        let below = [a, b].iter().all(|&x| self.leq(x, c) && self.leq(x, d));
        let inc = |x: WitnessElem, y: WitnessElem| !self.leq(x, y) && !self.leq(y, x);
        let between = self
            .lifted(a, Dir::Up)
            .intersect(&self.lifted(b, Dir::Up))
            .intersect(&self.lifted(c, Dir::Down).intersect(&self.lifted(d, Dir::Down)));
        below && inc(a, b) && inc(c, d) && between.all.is_clear() && between.some.is_empty()
    }
}

/// Checks joins (and optionally meets) for every pair containing an invariant
/// element, and for sampled pairs of non-invariant ones.
pub fn is_lattice(p: &IntervalPoset, opts: &LatticeOptions) -> LatticeReport {
    is_lattice_graph(&p.hasse(), opts)
}

pub fn is_lattice_graph(p: &HasseGraph, opts: &LatticeOptions) -> LatticeReport {
    let ck = Checker::new(p);
    let invariant: Vec<usize> = (0..p.len()).filter(|&i| p.invariant[i]).collect();
    let families: Vec<usize> = (0..p.len()).filter(|&i| !p.invariant[i]).collect();
    let el = |node: usize, shift: i64| WitnessElem { node, shift };

    let mut exact: Vec<(WitnessElem, WitnessElem)> = Vec::new();
    for (i, &a) in invariant.iter().enumerate() {
        for &b in &invariant[i + 1..] {
            exact.push((el(a, 0), el(b, 0)));
        }
        for &f in &families {
            exact.push((el(a, 0), el(f, 0)));
        }
    }
    let mut sampled: Vec<(WitnessElem, WitnessElem)> = Vec::new();
    // with one family and no shifts there is no nontrivial pair to draw
    if families.len() > 1 || (!families.is_empty() && opts.shift_range > 0) {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        while sampled.len() < opts.samples {
            let f = families[rng.gen_range(0..families.len())];
            let g = families[rng.gen_range(0..families.len())];
            let s = rng.gen_range(-opts.shift_range..=opts.shift_range);
            if f == g && s == 0 {
                continue;
            }
            sampled.push((el(f, 0), el(g, s)));
        }
    }
    let failure = exact
        .par_iter()
        .chain(sampled.par_iter())
        .find_map_first(|&(a, b)| ck.pair(a, b, opts.check_meets));
    if let Some(w) = &failure {
        debug_assert!(ck.verify(w), "witness does not form a bowtie: {w:?}");
    }
    LatticeReport {
        verdict: failure.map_or(Verdict::Lattice, Verdict::Bowtie),
        exact_pairs: exact.len(),
        sampled_pairs: sampled.len(),
    }
}

/// Independent check that a witness is a bowtie in `p`.
pub fn verify_witness(p: &IntervalPoset, w: &Witness) -> bool {
    Checker::new(&p.hasse()).verify(w)
}

/// `a ≤ b` for elements of `p`.
pub fn element_leq(p: &IntervalPoset, a: WitnessElem, b: WitnessElem) -> bool {
    Checker::new(&p.hasse()).leq(a, b)
}
