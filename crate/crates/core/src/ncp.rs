//! Noncrossing partitions of types A and B, the absolute-order interval below
//! an `n`-cycle, and a graded isomorphism test for finite posets.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::interval::{is_lattice_graph, HasseGraph, IntervalPoset, LatticeOptions, Presentation};

/// Largest poset `iso_check` accepts.
pub const ISO_LIMIT: usize = 100_000;

/// A finite graded poset given by its cover relation. Elements are numbered
/// by rank, so covers go from lower to higher ids.
#[derive(Clone, Debug)]
pub struct FinitePoset {
    pub labels: Vec<String>,
    pub rank: Vec<usize>,
    pub up: Vec<Vec<usize>>,
    pub down: Vec<Vec<usize>>,
}

impl FinitePoset {
    /// Builds the poset from elements and an order relation; `rank` gives the
    /// grading used to sort elements.
    pub fn from_order<T>(
        elems: Vec<T>,
        label: impl Fn(&T) -> String,
        rank: impl Fn(&T) -> usize,
        leq: impl Fn(&T, &T) -> bool,
    ) -> Self {
        let mut elems = elems;
        elems.sort_by_key(|e| rank(e));
        let n = elems.len();
        let ranks: Vec<usize> = elems.iter().map(&rank).collect();
        let mut less = vec![FixedBitSet::with_capacity(n); n];
        for i in 0..n {
            for j in 0..n {
                if i != j && leq(&elems[i], &elems[j]) {
                    less[i].insert(j);
                }
            }
        }
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for i in 0..n {
            for j in less[i].ones() {
                // j covers i unless some k sits strictly between
                if !less[i].ones().any(|k| k != j && less[k].contains(j)) {
                    up[i].push(j);
                    down[j].push(i);
                }
            }
        }
        FinitePoset { labels: elems.iter().map(label).collect(), rank: ranks, up, down }
    }

    /// Builds the poset from covers. Ranks are lengths of chains from the
    /// bottom element `0`.
    pub fn from_covers(labels: Vec<String>, covers: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(a, b) in covers {
            up[a].push(b);
            down[b].push(a);
        }
        let mut rank = vec![usize::MAX; n];
        if n > 0 {
            rank[0] = 0;
        }
        let mut queue: VecDeque<usize> = (0..n.min(1)).collect();
        while let Some(x) = queue.pop_front() {
            for &y in &up[x] {
                if rank[y] == usize::MAX {
                    rank[y] = rank[x] + 1;
                    queue.push_back(y);
                } else if rank[y] != rank[x] + 1 {
                    return Err(Error::Internal("poset is not graded".into()));
                }
            }
        }
        if rank.contains(&usize::MAX) {
            return Err(Error::Internal("poset has no bottom element".into()));
        }
        Ok(FinitePoset { labels, rank, up, down }.sorted())
    }

    fn sorted(self) -> Self {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (self.rank[i], i));
        let mut pos = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let remap = |v: &Vec<usize>| {
            let mut r: Vec<usize> = v.iter().map(|&x| pos[x]).collect();
            r.sort();
            r
        };
        FinitePoset {
            labels: order.iter().map(|&i| self.labels[i].clone()).collect(),
            rank: order.iter().map(|&i| self.rank[i]).collect(),
            up: order.iter().map(|&i| remap(&self.up[i])).collect(),
            down: order.iter().map(|&i| remap(&self.down[i])).collect(),
        }
    }

    /// The cover graph of a finite interval, graded by chain length.
    pub fn from_interval(p: &IntervalPoset) -> Result<Self> {
        if p.element_count().is_none() {
            return Err(Error::Internal("interval has infinite families".into()));
        }
        let labels = (0..p.len()).map(|i| format!("{:?}", p.nodes[i].rep)).collect();
        let covers: BTreeSet<(usize, usize)> = p.edges.iter().map(|e| (e.from, e.to)).collect();
        FinitePoset::from_covers(labels, &covers.into_iter().collect::<Vec<_>>())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn hasse(&self) -> HasseGraph {
        HasseGraph::finite(self.len(), (0..self.len()).flat_map(|a| self.up[a].iter().map(move |&b| (a, b))))
    }

    pub fn is_lattice(&self) -> bool {
        is_lattice_graph(&self.hasse(), &LatticeOptions::default()).is_lattice()
    }

    pub fn rank_sizes(&self) -> Vec<usize> {
        let top = self.rank.iter().copied().max().unwrap_or(0);
        let mut out = vec![0; top + 1];
        for &r in &self.rank {
            out[r] += 1;
        }
        out
    }

    fn reach(&self, dir_up: bool) -> Vec<FixedBitSet> {
        let n = self.len();
        let mut out = vec![FixedBitSet::with_capacity(n); n];
        let order: Vec<usize> = if dir_up { (0..n).rev().collect() } else { (0..n).collect() };
        for x in order {
            let mut s = FixedBitSet::with_capacity(n);
            s.insert(x);
            let next = if dir_up { &self.up[x] } else { &self.down[x] };
            for &y in next {
                s.union_with(&out[y]);
            }
            out[x] = s;
        }
        out
    }

    /// `leq[a][b]` as bitsets: `up_sets()[a].contains(b)` iff `a ≤ b`.
    pub fn up_sets(&self) -> Vec<FixedBitSet> {
        self.reach(true)
    }

    /// Componentwise product, ranks added.
    pub fn product(&self, other: &FinitePoset) -> FinitePoset {
        let m = other.len();
        let id = |a: usize, b: usize| a * m + b;
        let mut labels = Vec::new();
        let mut covers = Vec::new();
        for a in 0..self.len() {
            for b in 0..m {
                labels.push(format!("({},{})", self.labels[a], other.labels[b]));
                for &a2 in &self.up[a] {
                    covers.push((id(a, b), id(a2, b)));
                }
                for &b2 in &other.up[b] {
                    covers.push((id(a, b), id(a, b2)));
                }
            }
        }
        FinitePoset::from_covers(labels, &covers).expect("products of graded posets are graded")
    }
}

/// Noncrossing partitions of `{1, …, n}` as sorted blocks.
pub type Partition = Vec<Vec<usize>>;

fn set_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut growth = vec![0usize; n];
    fn rec(i: usize, max: usize, growth: &mut Vec<usize>, out: &mut Vec<Partition>) {
        let n = growth.len();
        if i == n {
            let blocks = growth.iter().copied().max().map_or(0, |m| m + 1);
            let mut p: Partition = vec![Vec::new(); blocks];
            for (x, &b) in growth.iter().enumerate() {
                p[b].push(x);
            }
            out.push(p);
            return;
        }
        for b in 0..=max {
            growth[i] = b;
            rec(i + 1, if b == max { max + 1 } else { max }, growth, out);
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    growth[0] = 0;
    rec(1, 1, &mut growth, &mut out);
    out
}

/// No `a < b < c < d` with `a, c` in one block and `b, d` in another, for
/// points listed in circular order.
fn is_noncrossing(p: &Partition, positions: usize) -> bool {
    let mut block = vec![usize::MAX; positions];
    for (i, b) in p.iter().enumerate() {
        for &x in b {
            block[x] = i;
        }
    }
    for a in 0..positions {
        for b in a + 1..positions {
            if block[a] == block[b] {
                continue;
            }
            for c in b + 1..positions {
                if block[c] != block[a] {
                    continue;
                }
                for d in c + 1..positions {
                    if block[d] == block[b] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn refines(a: &Partition, b: &Partition) -> bool {
    a.iter().all(|blk| b.iter().any(|big| blk.iter().all(|x| big.contains(x))))
}

fn render_partition(p: &Partition, name: impl Fn(usize) -> String) -> String {
    let blocks: Vec<String> =
        p.iter().map(|b| format!("{{{}}}", b.iter().map(|&x| name(x)).collect::<Vec<_>>().join(","))).collect();
    blocks.join("")
}

/// Noncrossing partitions of `[n]`, points numbered from 0.
pub fn noncrossing_partitions(n: usize) -> Vec<Partition> {
    set_partitions(n).into_iter().filter(|p| is_noncrossing(p, n)).collect()
}

/// `NC_n` ordered by refinement.
pub fn nc_a(n: usize) -> FinitePoset {
    FinitePoset::from_order(
        noncrossing_partitions(n),
        |p| render_partition(p, |x| (x + 1).to_string()),
        |p| n - p.len(),
        refines,
    )
}

/// Centrally symmetric noncrossing partitions of `±1, …, ±n`, with points
/// `1, …, n, -1, …, -n` in circular order.
pub fn noncrossing_partitions_b(n: usize) -> Vec<Partition> {
    let neg = |x: usize| (x + n) % (2 * n);
    set_partitions(2 * n)
        .into_iter()
        .filter(|p| {
            p.iter().all(|b| {
                let mut nb: Vec<usize> = b.iter().map(|&x| neg(x)).collect();
                nb.sort();
                p.contains(&nb)
            })
        })
        .filter(|p| is_noncrossing(p, 2 * n))
        .collect()
}

/// `NC_B(n)` ordered by refinement; rank is `n` minus the number of
/// symmetric pairs of blocks.
pub fn nc_b(n: usize) -> FinitePoset {
    let name = move |x: usize| if x < n { (x + 1).to_string() } else { format!("-{}", x - n + 1) };
    FinitePoset::from_order(
        noncrossing_partitions_b(n),
        move |p| render_partition(p, name),
        // n - (number of non-zero block pairs)
        move |p| {
            let zero = p.iter().any(|b| b.iter().any(|&x| b.contains(&((x + n) % (2 * n)))));
            let pairs = (p.len() - usize::from(zero)) / 2;
            n - pairs
        },
        refines,
    )
}

/// Permutation of `{0, …, n-1}` as images.
pub type Perm = Vec<usize>;

fn cycles(p: &Perm) -> usize {
    let mut seen = vec![false; p.len()];
    let mut c = 0;
    for s in 0..p.len() {
        if !seen[s] {
            c += 1;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = p[x];
            }
        }
    }
    c
}

/// Absolute length: the number of transpositions needed.
pub fn transposition_length(p: &Perm) -> usize {
    p.len() - cycles(p)
}

/// `(a ∘ b)(x) = a(b(x))`.
pub fn compose(a: &Perm, b: &Perm) -> Perm {
    b.iter().map(|&x| a[x]).collect()
}

pub fn inverse(p: &Perm) -> Perm {
    let mut out = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        out[x] = i;
    }
    out
}

pub fn cycle_notation(p: &Perm) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for s in 0..p.len() {
        if seen[s] || p[s] == s {
            seen[s] = true;
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            cyc.push((x + 1).to_string());
            x = p[x];
        }
        out.push_str(&format!("({})", cyc.join(" ")));
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

/// The cycle `1 → 2 → ⋯ → n → 1`.
pub fn long_cycle(n: usize) -> Perm {
    (0..n).map(|i| (i + 1) % n).collect()
}

/// The permutation with one increasing cycle per block.
pub fn partition_to_perm(p: &Partition, n: usize) -> Perm {
    let mut out: Perm = (0..n).collect();
    for b in p {
        for (i, &x) in b.iter().enumerate() {
            out[x] = b[(i + 1) % b.len()];
        }
    }
    out
}

/// Elements of `[1, c]` in the absolute order of `Sym_n`, found by
/// extending by transpositions from the identity.
pub fn sym_interval_elements(n: usize) -> Vec<Perm> {
    let c = long_cycle(n);
    let top = transposition_length(&c);
    let id: Perm = (0..n).collect();
    let mut seen: HashMap<Perm, ()> = HashMap::new();
    seen.insert(id.clone(), ());
    let mut frontier = vec![id];
    let mut out = frontier.clone();
    for len in 1..=top {
        let mut next = Vec::new();
        for u in &frontier {
            for i in 0..n {
                for j in i + 1..n {
                    let mut t: Perm = (0..n).collect();
                    t.swap(i, j);
                    let v = compose(u, &t);
                    if seen.contains_key(&v) || transposition_length(&v) != len {
                        continue;
                    }
                    if len + transposition_length(&compose(&inverse(&v), &c)) == top {
                        seen.insert(v.clone(), ());
                        next.push(v);
                    }
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// `u ≤ v` in the absolute order.
pub fn absolute_leq(u: &Perm, v: &Perm) -> bool {
    transposition_length(u) + transposition_length(&compose(&inverse(u), v)) == transposition_length(v)
}

pub fn sym_interval(n: usize) -> FinitePoset {
    FinitePoset::from_order(sym_interval_elements(n), cycle_notation, transposition_length, absolute_leq)
}

/// Transpositions `(i j)` ordered by `(j - i, i)`, so the rotations of a
/// 3-cycle come out as consecutive letters.
fn transpositions(n: usize) -> Vec<Perm> {
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    pairs.sort_by_key(|&(i, j)| (j - i, i));
    pairs
        .into_iter()
        .map(|(i, j)| {
            let mut t: Perm = (0..n).collect();
            t.swap(i, j);
            t
        })
        .collect()
}

/// Generators are the transpositions below the `n`-cycle, named `a, b, …`;
/// relations equate the words of length at most two with the same product.
pub fn sym_presentation(n: usize) -> Presentation {
    let c = long_cycle(n);
    let gens: Vec<Perm> = transpositions(n).into_iter().filter(|t| absolute_leq(t, &c)).collect();
    let name = |i: usize| -> String {
        if gens.len() <= 26 {
            char::from(b'a' + i as u8).to_string()
        } else {
            format!("t{}", i + 1)
        }
    };
    let mut words: BTreeMap<Perm, Vec<Vec<String>>> = BTreeMap::new();
    for (i, t) in gens.iter().enumerate() {
        words.entry(t.clone()).or_default().push(vec![name(i)]);
        for (j, u) in gens.iter().enumerate() {
            let v = compose(t, u);
            if transposition_length(&v) == 2 && absolute_leq(&v, &c) {
                words.entry(v).or_default().push(vec![name(i), name(j)]);
            }
        }
    }
    let mut relations: Vec<Vec<Vec<String>>> = words.into_values().filter(|ws| ws.len() > 1).collect();
    for r in &mut relations {
        r.sort();
    }
    relations.sort();
    Presentation { generators: (0..gens.len()).map(name).collect(), relations, periodic: false }
}

/// Invariant used to prune the isomorphism search.
fn signatures(p: &FinitePoset) -> Vec<(usize, usize, usize, usize, usize)> {
    let up = p.reach(true);
    let down = p.reach(false);
    (0..p.len())
        .map(|i| (p.rank[i], p.up[i].len(), p.down[i].len(), up[i].count_ones(..), down[i].count_ones(..)))
        .collect()
}

/// Whether a rank-preserving poset isomorphism exists, by backtracking
/// over elements in an order where each has an already placed neighbour.
pub fn iso_check(p: &FinitePoset, q: &FinitePoset) -> Result<bool> {
    let n = p.len();
    if n > ISO_LIMIT || q.len() > ISO_LIMIT {
        return Err(Error::TooLarge(n.max(q.len())));
    }
    if n != q.len() || p.rank_sizes() != q.rank_sizes() {
        return Ok(false);
    }
    if n == 0 {
        return Ok(true);
    }
    let Some((cp, cq)) = refine(p, q) else {
        return Ok(false);
    };
    // placement order: breadth-first over the undirected cover graph
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for s in 0..n {
        if placed[s] {
            continue;
        }
        let mut queue = VecDeque::from([s]);
        placed[s] = true;
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &y in p.up[x].iter().chain(&p.down[x]) {
                if !placed[y] {
                    placed[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    let search = Search { p, q, cp: &cp, cq: &cq, order: &order };
    let mut map = vec![usize::MAX; n];
    let mut inverse = vec![usize::MAX; n];
    Ok(search.run(0, &mut map, &mut inverse))
}

/// Joint colour refinement of both Hasse diagrams, so that colours are
/// comparable across them. `None` when the colour multisets differ.
fn refine(p: &FinitePoset, q: &FinitePoset) -> Option<(Vec<usize>, Vec<usize>)> {
    let relabel = |keys: Vec<Vec<usize>>| -> (Vec<usize>, usize) {
        let ids: BTreeMap<&Vec<usize>, usize> =
            keys.iter().collect::<BTreeSet<_>>().into_iter().enumerate().map(|(i, k)| (k, i)).collect();
        (keys.iter().map(|k| ids[k]).collect(), ids.len())
    };
    let n = p.len();
    let initial = |x: &FinitePoset| {
        let sig = signatures(x);
        sig.into_iter().map(|(a, b, c, d, e)| vec![a, b, c, d, e]).collect::<Vec<_>>()
    };
    let (mut colours, mut classes) = relabel(initial(p).into_iter().chain(initial(q)).collect());
    loop {
        let key = |x: &FinitePoset, offset: usize, i: usize| {
            let mut ups: Vec<usize> = x.up[i].iter().map(|&j| colours[offset + j]).collect();
            let mut downs: Vec<usize> = x.down[i].iter().map(|&j| colours[offset + j]).collect();
            ups.sort_unstable();
            downs.sort_unstable();
            let mut k = vec![colours[offset + i], ups.len()];
            k.extend(ups);
            k.extend(downs);
            k
        };
        let keys = (0..n).map(|i| key(p, 0, i)).chain((0..n).map(|i| key(q, n, i))).collect();
        let (next, count) = relabel(keys);
        colours = next;
        if count == classes {
            break;
        }
        classes = count;
    }
    let (cp, cq) = (colours[..n].to_vec(), colours[n..].to_vec());
    let (mut a, mut b) = (cp.clone(), cq.clone());
    a.sort_unstable();
    b.sort_unstable();
    (a == b).then_some((cp, cq))
}

struct Search<'a> {
    p: &'a FinitePoset,
    q: &'a FinitePoset,
    cp: &'a [usize],
    cq: &'a [usize],
    order: &'a [usize],
}

impl Search<'_> {
    /// Covers between `x` and placed elements must match covers of `c` in
    /// the same direction, with none extra.
    fn consistent(&self, x: usize, c: usize, map: &[usize], inverse: &[usize]) -> bool {
        let (p, q) = (self.p, self.q);
        let side = |px: &[usize], qc: &[usize]| {
            let mut mapped = 0;
            for &y in px {
                if map[y] != usize::MAX {
                    if !qc.contains(&map[y]) {
                        return false;
                    }
                    mapped += 1;
                }
            }
            mapped == qc.iter().filter(|&&z| inverse[z] != usize::MAX).count()
        };
        side(&p.up[x], &q.up[c]) && side(&p.down[x], &q.down[c])
    }

    fn run(&self, k: usize, map: &mut Vec<usize>, inverse: &mut Vec<usize>) -> bool {
        let Some(&x) = self.order.get(k) else {
            return true;
        };
        let (p, q) = (self.p, self.q);
        let pool: Vec<usize> = if let Some(&y) = p.up[x].iter().find(|&&y| map[y] != usize::MAX) {
            q.down[map[y]].clone()
        } else if let Some(&y) = p.down[x].iter().find(|&&y| map[y] != usize::MAX) {
            q.up[map[y]].clone()
        } else {
            (0..q.len()).collect()
        };
        for c in pool {
            if self.cq[c] != self.cp[x] || inverse[c] != usize::MAX || !self.consistent(x, c, map, inverse) {
                continue;
            }
            map[x] = c;
            inverse[c] = x;
            if self.run(k + 1, map, inverse) {
                return true;
            }
            map[x] = usize::MAX;
            inverse[c] = usize::MAX;
        }
        false
    }
}

pub fn catalan(n: usize) -> u64 {
    binomial(2 * n, n) / (n as u64 + 1)
}

pub fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

/// Boolean lattice on `k` atoms.
pub fn boolean_lattice(k: usize) -> FinitePoset {
    FinitePoset::from_order(
        (0..1usize << k).collect(),
        |m| format!("{m:b}"),
        |m| m.count_ones() as usize,
        |a, b| a & b == *a,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(nc_a(1).len(), 1);
        assert_eq!(nc_a(3).len(), 5);
        assert_eq!(nc_a(4).len(), 14);
        assert_eq!(sym_interval(3).len(), 5);
        assert_eq!(sym_interval(4).len(), 14);
        assert_eq!(transposition_length(&long_cycle(6)), 5);
        let crossing: Partition = vec![vec![0, 2], vec![1, 3]];
        assert!(!noncrossing_partitions(4).contains(&crossing));
        let sizes: Vec<usize> = (1..=4).map(|n| nc_b(n).len()).collect();
        assert_eq!(sizes, vec![2, 6, 20, 70]);
    }

    #[test]
    fn isomorphisms() {
        assert!(iso_check(&nc_a(3), &sym_interval(3)).unwrap());
        assert!(!iso_check(&nc_a(4), &boolean_lattice(4)).unwrap());
        let b = nc_b(3);
        assert!(iso_check(&b, &b).unwrap());
        assert!(!iso_check(&nc_a(4), &nc_b(2).product(&boolean_lattice(1))).unwrap());
        assert!(iso_check(&boolean_lattice(2), &boolean_lattice(1).product(&boolean_lattice(1))).unwrap());
    }

    #[test]
    fn permutation_realization_is_elementwise() {
        for n in 1..=5 {
            let perms: BTreeSet<Perm> =
                noncrossing_partitions(n).iter().map(|p| partition_to_perm(p, n)).collect();
            let interval: BTreeSet<Perm> = sym_interval_elements(n).into_iter().collect();
            assert_eq!(perms, interval);
            let parts = noncrossing_partitions(n);
            for a in &parts {
                for b in &parts {
                    let (pa, pb) = (partition_to_perm(a, n), partition_to_perm(b, n));
                    assert_eq!(refines(a, b), absolute_leq(&pa, &pb));
                }
            }
        }
    }

    #[test]
    fn lattices() {
        assert!(nc_a(4).is_lattice());
        assert!(sym_interval(4).is_lattice());
        assert!(nc_b(3).is_lattice());
        // two incomparable maximal elements below a top
        let bowtie = FinitePoset::from_covers(
            (0..6).map(|i| i.to_string()).collect(),
            &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)],
        )
        .unwrap();
        assert!(!bowtie.is_lattice());
    }

    #[test]
    fn rank_three_presentation() {
        assert_eq!(sym_presentation(3).to_string(), "⟨a, b, c | ab = bc = ca⟩");
        assert_eq!(sym_presentation(4).generators.len(), 6);
    }

    #[test]
    fn size_guard() {
        let big = FinitePoset { labels: vec![String::new(); ISO_LIMIT + 1], rank: vec![], up: vec![], down: vec![] };
        assert!(matches!(iso_check(&big, &big), Err(Error::TooLarge(_))));
    }
}
