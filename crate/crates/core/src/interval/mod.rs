//! Weighted intervals `[1, w]` in groups generated by isometries.
//!
//! Elements are enumerated by a breadth-first search over tight extensions
//! `u ↦ u·s`. When `w` commutes with a translation `τ` along its axis, the
//! search runs on orbits of conjugation by `τ`: each node is a canonical
//! representative and each edge carries a voltage, the power of `τ` relating
//! the product to the representative of its target.

mod export;
mod lattice;
mod present;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::{BuildHasher, RandomState};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use export::{from_json_lines, to_dot, to_json_lines, ExportedInterval};
pub use lattice::{
    element_leq, is_lattice, is_lattice_graph, verify_witness, Bound, GraphEdge, HasseGraph, LatticeOptions, LatticeReport, Verdict, Witness, WitnessElem,
};
pub use present::{interval_presentation, Presentation};

use crate::coxeter::AffineRoot;
use crate::error::{Error, Result};
use crate::isometry::Isometry;
use crate::linalg::{nullspace, solve, GramForm, Matrix, Scalar, Vector};

/// Edge label: a reflection of the Coxeter group, or an entry of the finite
/// generator list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Refl(AffineRoot),
    Gen(usize),
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub elem: Isometry,
    pub inverse: Isometry,
    pub weight: Scalar,
    pub name: String,
}

impl Generator {
    pub fn new(elem: Isometry, weight: Scalar, name: impl Into<String>) -> Self {
        let inverse = elem.invert();
        Generator { elem, inverse, weight, name: name.into() }
    }
}

/// Reflections of a Coxeter group used as generators: an explicit finite set
/// of horizontal ones and, optionally, every vertical one.
#[derive(Clone, Debug)]
pub struct ReflectionSource {
    pub roots: Vec<Vector>,
    /// `g(P, α)` for each root.
    pub shifts: Vec<i64>,
    pub horizontal: Vec<AffineRoot>,
    /// One representative per period family; empty when vertical reflections
    /// are not generators.
    pub vertical_reps: Vec<AffineRoot>,
    pub is_horizontal: Vec<bool>,
}

impl ReflectionSource {
    fn allowed(&self, ar: &AffineRoot) -> bool {
        if self.is_horizontal[ar.root] {
            self.horizontal.binary_search(ar).is_ok()
        } else {
            !self.vertical_reps.is_empty()
        }
    }

    pub fn shifted(&self, ar: AffineRoot, j: i64) -> AffineRoot {
        AffineRoot { root: ar.root, k: ar.k + j * self.shifts[ar.root] }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Potential {
    /// Scherk reflection length in the full isometry group.
    ReflectionLength,
    /// `rank(A - I) + 2|ν|` with `ν = g(μ, d) / scale`: counts vertical motion
    /// in units of the motion of `w`.
    Vertical { dir: Vector, scale: Scalar },
}

/// Everything needed to enumerate one interval.
#[derive(Clone, Debug)]
pub struct Setting {
    pub name: String,
    pub gram: Arc<GramForm>,
    pub w: Isometry,
    pub gens: Vec<Generator>,
    pub reflections: Option<ReflectionSource>,
    pub period: Option<Vector>,
    pub potential: Potential,
    /// Discard steps that leave the bottom and top rows of the reflection
    /// interval: one side elliptic, the other hyperbolic, reflection lengths
    /// adding up. Sound for generating sets whose interval lies in those rows.
    pub outer_rows_only: bool,
}

impl Setting {
    pub fn potential(&self, x: &Isometry) -> Scalar {
        match &self.potential {
            Potential::ReflectionLength => Scalar::int(x.reflection_length() as i64),
            Potential::Vertical { dir, scale } => {
                let (rho, elliptic) = x.motion_ranks();
                let mut phi = Scalar::int(rho as i64);
                if !elliptic {
                    let fixes_dir = &x.apply_linear(dir) == dir;
                    let vert = if fixes_dir {
                        self.gram.inner(x.trans(), dir)
                    } else {
                        self.gram.inner(&x.invariants().mu, dir)
                    };
                    let nu = (vert / scale).abs();
                    phi += &(Scalar::int(2) * &nu);
                }
                phi
            }
        }
    }

    fn reflection(&self, ar: AffineRoot) -> Isometry {
        let rs = self.reflections.as_ref().expect("reflection source");
        crate::isometry::make_reflection(&rs.roots[ar.root], &Scalar::int(ar.k), &self.gram)
            .expect("roots are nonzero")
    }

    fn label_elem(&self, label: Label) -> (Isometry, Isometry, Scalar) {
        match label {
            Label::Refl(ar) => {
                let r = self.reflection(ar);
                (r.clone(), r, Scalar::ONE)
            }
            Label::Gen(i) => {
                let g = &self.gens[i];
                (g.elem.clone(), g.inverse.clone(), g.weight.clone())
            }
        }
    }

    /// The label conjugated by `τ^j`.
    pub fn shift_label(&self, label: Label, j: i64) -> Label {
        match (label, &self.reflections) {
            (Label::Refl(ar), Some(rs)) => Label::Refl(rs.shifted(ar, j)),
            _ => label,
        }
    }

    pub fn label_name(&self, label: Label) -> String {
        match label {
            Label::Refl(ar) => format!("r{}_{}", ar.root, ar.k),
            Label::Gen(i) => self.gens[i].name.clone(),
        }
    }

    /// `(representative, voltage, fixed by τ)` with `x = τ^voltage · rep · τ^-voltage`.
    pub fn canonicalize(&self, x: &Isometry) -> (Isometry, i64, bool) {
        let Some(p) = &self.period else {
            return (x.clone(), 0, true);
        };
        let c = p - &x.apply_linear(p);
        if c.is_zero() {
            return (x.clone(), 0, true);
        }
        let s = self.gram.inner(x.trans(), &c) / &self.gram.norm2(&c);
        let m = s.floor_i64();
        (shift_by(x, p, -m), m, false)
    }

    /// `τ^j x τ^-j`.
    pub fn shift(&self, x: &Isometry, j: i64) -> Isometry {
        match &self.period {
            Some(p) if j != 0 => shift_by(x, p, j),
            _ => x.clone(),
        }
    }
}

fn shift_by(x: &Isometry, p: &Vector, j: i64) -> Isometry {
    x.conjugate_by_translation(&p.scale(&Scalar::int(j)))
}

/// Position of an element in the coarse grid, from the types of `u` and of
/// its complement `u⁻¹w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Row {
    /// `u` elliptic, complement hyperbolic.
    Bottom,
    /// Both elliptic.
    Middle,
    /// `u` hyperbolic, complement elliptic.
    Top,
    /// Both hyperbolic; only in groups with factored translations.
    Mixed,
}

impl Row {
    pub fn from_kinds(u_elliptic: bool, v_elliptic: bool) -> Row {
        match (u_elliptic, v_elliptic) {
            (true, false) => Row::Bottom,
            (true, true) => Row::Middle,
            (false, true) => Row::Top,
            (false, false) => Row::Mixed,
        }
    }

    pub fn offset(self) -> i64 {
        match self {
            Row::Bottom | Row::Mixed => 0,
            Row::Middle => 1,
            Row::Top => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Row::Bottom => "bottom",
            Row::Middle => "middle",
            Row::Top => "top",
            Row::Mixed => "mixed",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Node {
    pub rep: Isometry,
    /// Fixed by conjugation with the period: a single element rather than an
    /// infinite family.
    pub invariant: bool,
    pub phi: Scalar,
    pub row: Row,
}

/// `rep(from) · label = τ^voltage · rep(to) · τ^-voltage`.
///
/// From an invariant node to a non-invariant one the edge stands for all
/// shifts of the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: Label,
    pub voltage: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub explored: usize,
    pub pruned: usize,
    /// Expansions of vertical families over a bounded shift window.
    pub windowed: usize,
    /// Successful steps found at the edge of the window.
    pub window_edge_hits: usize,
}

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub max_nodes: usize,
    /// Shift window for vertical reflections from non-invariant elements with
    /// hyperbolic complement.
    pub window: i64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { max_nodes: 2_000_000, window: 2 }
    }
}

#[derive(Clone, Debug)]
pub struct IntervalPoset {
    pub setting: Arc<Setting>,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    pub out_edges: Vec<Vec<usize>>,
    pub in_edges: Vec<Vec<usize>>,
    pub top: usize,
    pub stats: BuildStats,
}

struct Step {
    rep: Isometry,
    invariant: bool,
    voltage: i64,
    label: Label,
    phi: Scalar,
}

/// Discovered node. The complement `rep⁻¹w` is recomputed on expansion
/// rather than stored, since the period shift commutes with `w`.
struct Pending {
    rep: Isometry,
    invariant: bool,
    phi: Scalar,
}

fn through_fix(setting: &Setting, rs: &ReflectionSource, v: &Isometry) -> Vec<AffineRoot> {
    let n = v.rank();
    let b = v.mat().sub(&Matrix::identity(n));
    let kernel: Vec<Vector> = nullspace(&b).iter().map(|k| setting.gram.apply(k)).collect();
    let (base, _) = solve(&b, &(-v.trans())).expect("elliptic element has a fixed point");
    let gb = setting.gram.apply(&base);
    let mut out = Vec::new();
    for (i, alpha) in rs.roots.iter().enumerate() {
        if kernel.iter().all(|k| k.dot(alpha).is_zero()) {
            if let Some(k) = gb.dot(alpha).as_i64() {
                let ar = AffineRoot { root: i, k };
                if rs.allowed(&ar) {
                    out.push(ar);
                }
            } else if gb.dot(alpha).is_integer() {
                panic!("hyperplane level overflows i64");
            }
        }
    }
    out
}

impl Setting {
    fn try_step(
        &self,
        u: &Isometry,
        v: &Isometry,
        phi_u: &Scalar,
        phi_v: &Scalar,
        label: Label,
    ) -> Option<Step> {
        let (g, ginv, wt) = self.label_elem(label);
        let v2 = ginv.compose(v);
        let target_v = phi_v - &wt;
        if target_v.is_negative() || self.potential(&v2) != target_v {
            return None;
        }
        let u2 = u.compose(&g);
        if self.outer_rows_only
            && (u2.is_elliptic() == v2.is_elliptic()
                || u2.reflection_length() + v2.reflection_length() != self.w.reflection_length())
        {
            return None;
        }
        let target_u = phi_u + &wt;
        if self.potential != Potential::ReflectionLength && self.potential(&u2) != target_u {
            return None;
        }
        let (rep, voltage, invariant) = self.canonicalize(&u2);
        Some(Step { rep: rep.stripped(), invariant, voltage, label, phi: target_u })
    }

    fn expand(&self, u: &Isometry, v: &Isometry, invariant: bool, phi_u: &Scalar, opts: &BuildOptions) -> (Vec<Step>, usize, usize) {
        let phi_v = self.potential(v);
        let mut out = Vec::new();
        let mut windowed = 0;
        let mut edge_hits = 0;
        for i in 0..self.gens.len() {
            out.extend(self.try_step(u, v, phi_u, &phi_v, Label::Gen(i)));
        }
        if let Some(rs) = &self.reflections {
            if v.motion_ranks().1 {
                for ar in through_fix(self, rs, v) {
                    out.extend(self.try_step(u, v, phi_u, &phi_v, Label::Refl(ar)));
                }
            } else {
                for &ar in &rs.horizontal {
                    out.extend(self.try_step(u, v, phi_u, &phi_v, Label::Refl(ar)));
                }
                for &ar in &rs.vertical_reps {
                    if invariant {
                        out.extend(self.try_step(u, v, phi_u, &phi_v, Label::Refl(ar)));
                    } else {
                        windowed += 1;
                        for j in -opts.window..=opts.window {
                            let s = self.try_step(u, v, phi_u, &phi_v, Label::Refl(rs.shifted(ar, j)));
                            if s.is_some() && j.abs() == opts.window {
                                edge_hits += 1;
                            }
                            out.extend(s);
                        }
                    }
                }
            }
        }
        (out, windowed, edge_hits)
    }
}

pub fn build_interval(setting: Setting, opts: &BuildOptions) -> Result<IntervalPoset> {
    let setting = Arc::new(setting);
    let identity = Isometry::identity(setting.gram.clone());
    let mut nodes: Vec<Pending> = vec![Pending { rep: identity, invariant: true, phi: Scalar::ZERO }];
    // hash buckets into `nodes`, so each rep is stored once
    let hasher = RandomState::new();
    let mut index: HashMap<u64, Vec<usize>> = HashMap::new();
    index.insert(hasher.hash_one(&nodes[0].rep), vec![0]);
    let find = |index: &HashMap<u64, Vec<usize>>, nodes: &[Pending], h: u64, x: &Isometry| {
        index.get(&h).and_then(|b| b.iter().copied().find(|&i| nodes[i].rep == *x))
    };
    let mut edges: Vec<Edge> = Vec::new();
    let mut levels: BTreeMap<Scalar, Vec<usize>> = BTreeMap::new();
    levels.insert(Scalar::ZERO, vec![0]);
    let mut stats = BuildStats::default();
    let top_phi = setting.potential(&setting.w);

    while let Some((level, ids)) = levels.pop_first() {
        log::info!("{}: potential {level} of {top_phi}, {} nodes, {} discovered", setting.name, ids.len(), nodes.len());
        let work: Vec<(usize, Isometry, bool, Scalar)> = ids
            .iter()
            .map(|&id| {
                let nd = &nodes[id];
                (id, nd.rep.clone(), nd.invariant, nd.phi.clone())
            })
            .collect();
        let results: Vec<(Vec<Step>, usize, usize)> = work
            .par_iter()
            .map(|(_, u, inv, phi)| setting.expand(u, &u.invert().compose(&setting.w), *inv, phi, opts))
            .collect();
        for ((id, ..), (steps, windowed, hits)) in work.iter().zip(results) {
            stats.windowed += windowed;
            stats.window_edge_hits += hits;
            for st in steps {
                let h = hasher.hash_one(&st.rep);
                let to = match find(&index, &nodes, h, &st.rep) {
                    Some(t) => t,
                    None => {
                        let t = nodes.len();
                        if t >= opts.max_nodes {
                            return Err(Error::TooLarge(t));
                        }
                        index.entry(h).or_default().push(t);
                        levels.entry(st.phi.clone()).or_default().push(t);
                        nodes.push(Pending { rep: st.rep, invariant: st.invariant, phi: st.phi });
                        t
                    }
                };
                edges.push(Edge { from: *id, to, label: st.label, voltage: st.voltage });
            }
        }
    }
    stats.explored = nodes.len();

    let (w_rep, _, _) = setting.canonicalize(&setting.w);
    let top = find(&index, &nodes, hasher.hash_one(&w_rep), &w_rep).ok_or(Error::NotGenerated)?;
    debug_assert_eq!(nodes[top].phi, top_phi);

    // keep only nodes from which the top is reachable
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for (i, e) in edges.iter().enumerate() {
        incoming[e.to].push(i);
    }
    let mut alive = vec![false; nodes.len()];
    alive[top] = true;
    let mut stack = vec![top];
    while let Some(x) = stack.pop() {
        for &ei in &incoming[x] {
            let f = edges[ei].from;
            if !alive[f] {
                alive[f] = true;
                stack.push(f);
            }
        }
    }
    let mut order: Vec<usize> = (0..nodes.len()).filter(|&i| alive[i]).collect();
    order.sort_by(|&a, &b| nodes[a].phi.cmp(&nodes[b].phi).then(a.cmp(&b)));
    let mut remap = vec![usize::MAX; nodes.len()];
    for (new, &old) in order.iter().enumerate() {
        remap[old] = new;
    }
    stats.pruned = nodes.len() - order.len();

    let final_nodes: Vec<Node> = order
        .par_iter()
        .map(|&old| {
            let nd = &nodes[old];
            let comp = nd.rep.invert().compose(&setting.w);
            let row = Row::from_kinds(nd.rep.motion_ranks().1, comp.motion_ranks().1);
            Node { rep: nd.rep.clone(), invariant: nd.invariant, phi: nd.phi.clone(), row }
        })
        .collect();
    let mut final_edges: Vec<Edge> = edges
        .into_iter()
        .filter(|e| alive[e.from] && alive[e.to])
        .map(|e| Edge { from: remap[e.from], to: remap[e.to], ..e })
        .collect();
    final_edges.sort_by_key(|a| (a.from, a.to, a.label, a.voltage));
    Ok(IntervalPoset::assemble(setting, final_nodes, final_edges, remap[top], stats))
}

impl IntervalPoset {
    pub(crate) fn assemble(
        setting: Arc<Setting>,
        nodes: Vec<Node>,
        edges: Vec<Edge>,
        top: usize,
        stats: BuildStats,
    ) -> Self {
        let mut out_edges = vec![Vec::new(); nodes.len()];
        let mut in_edges = vec![Vec::new(); nodes.len()];
        for (i, e) in edges.iter().enumerate() {
            out_edges[e.from].push(i);
            in_edges[e.to].push(i);
        }
        IntervalPoset { setting, nodes, edges, out_edges, in_edges, top, stats }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    /// Column in the coarse grid: steps from the lower-left box.
    pub fn column(&self, i: usize) -> Scalar {
        let nd = &self.nodes[i];
        &nd.phi - &Scalar::int(nd.row.offset())
    }

    pub fn coarse_grid(&self) -> CoarseGrid {
        coarse_grid(self)
    }

    /// Number of distinct elements when the interval is finite.
    pub fn element_count(&self) -> Option<usize> {
        self.nodes.iter().all(|n| n.invariant).then_some(self.nodes.len())
    }

    /// Distinct edge labels, with reflection labels of families taken from
    /// edges leaving invariant nodes up to shift.
    pub fn labels(&self) -> BTreeSet<Label> {
        self.edges.iter().map(|e| e.label).collect()
    }
}

/// Box counts: rows bottom, middle, top, each indexed by column, plus the
/// mixed row by potential level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoarseGrid {
    pub bottom: Vec<u64>,
    pub middle: Vec<u64>,
    pub top: Vec<u64>,
    pub mixed: Vec<(Scalar, u64)>,
}

impl CoarseGrid {
    pub fn rows(&self) -> [&Vec<u64>; 3] {
        [&self.bottom, &self.middle, &self.top]
    }

    /// `[[bottom],[middle],[top]]`.
    pub fn render(&self) -> String {
        let row = |r: &Vec<u64>| {
            format!("[{}]", r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
        };
        format!("[{},{},{}]", row(&self.bottom), row(&self.middle), row(&self.top))
    }

    pub fn render_outer(&self) -> String {
        let row = |r: &Vec<u64>| {
            format!("[{}]", r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
        };
        format!("[{},{}]", row(&self.bottom), row(&self.top))
    }

    /// Bottom row reversed equals the top row and the middle row is a
    /// palindrome.
    pub fn is_symmetric(&self) -> bool {
        let mut rev = self.bottom.clone();
        rev.reverse();
        let mut mid = self.middle.clone();
        mid.reverse();
        rev == self.top && mid == self.middle
    }
}

pub fn coarse_grid(p: &IntervalPoset) -> CoarseGrid {
    grid_from_cells((0..p.len()).map(|i| (p.nodes[i].row, p.column(i))), p.setting.w.rank())
}

pub(crate) fn grid_from_cells(cells: impl Iterator<Item = (Row, Scalar)>, width: usize) -> CoarseGrid {
    let mut cols: BTreeMap<(Row, Scalar), u64> = BTreeMap::new();
    for cell in cells {
        *cols.entry(cell).or_default() += 1;
    }
    let mut rows = [vec![0u64; width], vec![0u64; width], vec![0u64; width]];
    let mut mixed = Vec::new();
    for ((row, col), count) in cols {
        let idx = match row {
            Row::Bottom => 0,
            Row::Middle => 1,
            Row::Top => 2,
            Row::Mixed => {
                mixed.push((col, count));
                continue;
            }
        };
        match col.as_i64() {
            Some(c) if (0..width as i64).contains(&c) => rows[idx][c as usize] += count,
            _ => mixed.push((col, count)),
        }
    }
    let [bottom, middle, top] = rows;
    CoarseGrid { bottom, middle, top, mixed }
}
