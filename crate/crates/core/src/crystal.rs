//! The groups H, D, W, F and C built from the special boxes of the Coxeter
//! interval, their weighted intervals, and middle groups.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coxeter::{axial_data, interval_reflections, CoxeterContext, IntervalReflections};
use crate::error::{Error, Result};
use crate::horizontal::{horizontal_roots_direct, RootSystem};
use crate::interval::{
    build_interval, interval_presentation, BuildOptions, CoarseGrid, Generator, IntervalPoset, Potential,
    ReflectionSource, Setting,
};
use crate::isometry::{make_reflection, Isometry};
use crate::linalg::{project_onto_span, GramForm, Matrix, Scalar, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupKind {
    /// Horizontal reflections.
    H,
    /// Horizontal reflections and translations.
    D,
    /// The Coxeter group.
    W,
    /// Horizontal reflections and factored translations.
    F,
    /// Everything: horizontal and vertical reflections, factored translations.
    C,
}

impl GroupKind {
    pub const ALL: [GroupKind; 5] = [GroupKind::H, GroupKind::D, GroupKind::W, GroupKind::F, GroupKind::C];
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupKind::H => "H",
            GroupKind::D => "D",
            GroupKind::W => "W",
            GroupKind::F => "F",
            GroupKind::C => "C",
        };
        f.write_str(s)
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "H" => Ok(GroupKind::H),
            "D" => Ok(GroupKind::D),
            "W" => Ok(GroupKind::W),
            "F" => Ok(GroupKind::F),
            "C" => Ok(GroupKind::C),
            _ => Err(Error::Parse(format!("unknown group {s:?}, expected one of H, D, W, F, C"))),
        }
    }
}

/// A translation below `w` cut down to one horizontal component plus a
/// `1/k` share of its motion along the axis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredTranslation {
    /// Index into the translations below `w`.
    pub base: usize,
    pub component: usize,
    pub vector: Vector,
}

/// Special boxes of the Coxeter interval together with the horizontal root
/// system, computed once per context.
#[derive(Clone, Debug)]
pub struct Special {
    pub reflections: IntervalReflections,
    pub horizontal: RootSystem,
}

impl Special {
    pub fn new(ctx: &CoxeterContext) -> Result<Self> {
        let axial = axial_data(ctx)?;
        Ok(Special { reflections: interval_reflections(ctx, &axial), horizontal: horizontal_roots_direct(ctx)? })
    }

    pub fn components(&self) -> usize {
        self.horizontal.components.len()
    }
}

/// Splits every translation below `w` along the horizontal components.
pub fn factored_translations(ctx: &CoxeterContext, sp: &Special) -> Vec<FactoredTranslation> {
    let g = &ctx.gram;
    let d = &ctx.axis_dir;
    let k = sp.components();
    let mut out = Vec::new();
    for (base, lambda) in sp.reflections.translations.iter().enumerate() {
        let along = project_onto_span(lambda, std::slice::from_ref(d), g);
        if k == 0 {
            out.push(FactoredTranslation { base, component: 0, vector: lambda.clone() });
            continue;
        }
        let share = along.scale(&Scalar::ratio(1, k as i64));
        for (component, c) in sp.horizontal.components.iter().enumerate() {
            let piece = project_onto_span(lambda, &c.simple, g);
            out.push(FactoredTranslation { base, component, vector: &piece + &share });
        }
    }
    out
}

fn distinct_vectors(vs: impl Iterator<Item = Vector>) -> Vec<Vector> {
    vs.collect::<BTreeSet<_>>().into_iter().collect()
}

fn reflection_source(ctx: &CoxeterContext, sp: &Special, vertical: bool) -> ReflectionSource {
    let n_roots = ctx.positive_roots.len();
    ReflectionSource {
        roots: ctx.positive_roots.clone(),
        shifts: (0..n_roots).map(|i| ctx.period_shift(i)).collect(),
        horizontal: sp.reflections.horizontal.clone(),
        vertical_reps: if vertical { sp.reflections.vertical.clone() } else { Vec::new() },
        is_horizontal: (0..n_roots).map(|i| ctx.is_horizontal(ctx.root(i))).collect(),
    }
}

fn vertical_potential(ctx: &CoxeterContext) -> Potential {
    let scale = ctx.gram.inner(ctx.mu(), &ctx.axis_dir);
    Potential::Vertical { dir: ctx.axis_dir.clone(), scale }
}

fn translation_gens(ctx: &CoxeterContext, vs: &[Vector], weight: Scalar, prefix: &str) -> Vec<Generator> {
    vs.iter()
        .enumerate()
        .map(|(i, v)| Generator::new(Isometry::translation(v.clone(), ctx.gram.clone()), weight.clone(), format!("{prefix}{i}")))
        .collect()
}

/// Generating data for the interval of `w` in one of the groups. `H` does
/// not contain `w` and has no interval.
pub fn group_setting(ctx: &CoxeterContext, sp: &Special, kind: GroupKind) -> Result<Setting> {
    let k = sp.components().max(1) as i64;
    let factored = distinct_vectors(factored_translations(ctx, sp).into_iter().map(|f| f.vector));
    let (gens, vertical, potential) = match kind {
        GroupKind::H => return Err(Error::NotGenerated),
        GroupKind::W => (Vec::new(), true, Potential::ReflectionLength),
        GroupKind::D => {
            let ts = distinct_vectors(sp.reflections.translations.iter().cloned());
            (translation_gens(ctx, &ts, Scalar::int(2), "t"), false, vertical_potential(ctx))
        }
        GroupKind::F => (translation_gens(ctx, &factored, Scalar::ratio(2, k), "f"), false, vertical_potential(ctx)),
        GroupKind::C => (translation_gens(ctx, &factored, Scalar::ratio(2, k), "f"), true, vertical_potential(ctx)),
    };
    Ok(Setting {
        name: format!("{} {kind}", ctx.name()),
        gram: ctx.gram.clone(),
        w: ctx.coxeter_element.clone(),
        gens,
        reflections: Some(reflection_source(ctx, sp, vertical)),
        period: Some(ctx.period.clone()),
        potential,
        outer_rows_only: kind == GroupKind::D,
    })
}

/// The part of `w` acting on one horizontal component: `w`'s linear part on
/// the component's span and the identity elsewhere, translating by the
/// component's share of `w`'s translation plus `1/k` of its axis part.
/// The parts commute and multiply to `w`.
pub fn component_part(ctx: &CoxeterContext, sp: &Special, component: usize) -> Result<Isometry> {
    let g = &ctx.gram;
    let n = ctx.rank();
    let k = sp.components();
    let simple = &sp.horizontal.components.get(component).ok_or(Error::InvalidRemoval(component))?.simple;
    let w = &ctx.coxeter_element;
    let mut mat = Matrix::zeros(n, n);
    for j in 0..n {
        let mut e = Vector::zero(n);
        e[j] = Scalar::ONE;
        let on = project_onto_span(&e, simple, g);
        let col = &project_onto_span(&w.apply_linear(&on), simple, g) + &(&e - &on);
        for i in 0..n {
            mat[(i, j)] = col[i].clone();
        }
    }
    let t = w.trans();
    let along = project_onto_span(t, std::slice::from_ref(&ctx.axis_dir), g);
    let trans = &project_onto_span(t, simple, g) + &along.scale(&Scalar::ratio(1, k as i64));
    Isometry::new(mat, trans, g.clone())
}

/// Interval of `component_part` in the group generated by the component's
/// horizontal reflections and its factored translation pieces.
pub fn component_setting(ctx: &CoxeterContext, sp: &Special, component: usize) -> Result<Setting> {
    let k = sp.components() as i64;
    let w = component_part(ctx, sp, component)?;
    let pieces = distinct_vectors(
        factored_translations(ctx, sp).into_iter().filter(|f| f.component == component).map(|f| f.vector),
    );
    let mut reflections = reflection_source(ctx, sp, false);
    reflections.horizontal.retain(|ar| sp.horizontal.component_of(ar.root) == Some(component));
    Ok(Setting {
        name: format!("{} F[{component}]", ctx.name()),
        gram: ctx.gram.clone(),
        w,
        gens: translation_gens(ctx, &pieces, Scalar::ratio(2, k), "f"),
        reflections: Some(reflections),
        period: Some(ctx.period.clone()),
        potential: vertical_potential(ctx),
        outer_rows_only: false,
    })
}

/// One interval per horizontal component; their product is the factorable
/// interval.
pub fn component_intervals(ctx: &CoxeterContext, opts: &BuildOptions) -> Result<Vec<IntervalPoset>> {
    let sp = Special::new(ctx)?;
    (0..sp.components()).map(|i| build_interval(component_setting(ctx, &sp, i)?, opts)).collect()
}

pub fn group_interval(ctx: &CoxeterContext, kind: GroupKind, opts: &BuildOptions) -> Result<IntervalPoset> {
    let sp = Special::new(ctx)?;
    build_interval(group_setting(ctx, &sp, kind)?, opts)
}

pub fn coxeter_interval(ctx: &CoxeterContext, opts: &BuildOptions) -> Result<IntervalPoset> {
    group_interval(ctx, GroupKind::W, opts)
}

pub fn diagonal_interval(ctx: &CoxeterContext, opts: &BuildOptions) -> Result<IntervalPoset> {
    group_interval(ctx, GroupKind::D, opts)
}

pub fn factorable_interval(ctx: &CoxeterContext, opts: &BuildOptions) -> Result<IntervalPoset> {
    group_interval(ctx, GroupKind::F, opts)
}

pub fn crystallographic_interval(ctx: &CoxeterContext, opts: &BuildOptions) -> Result<IntervalPoset> {
    group_interval(ctx, GroupKind::C, opts)
}

/// `Z^n ⋊ Sym_n` acting on `Q^n`, with `w = t_1 r_12 r_23 ⋯ r_{n-1,n}`.
///
/// Generators are the unit translations `t_i^{±1}` and the reflections across
/// `x_i - x_j = m` for `|m| ≤ bound`.
pub fn middle_setting(n: usize, bound: i64) -> Result<Setting> {
    if n == 0 {
        return Err(Error::InvalidType("Mid(B0)".into()));
    }
    let gram = Arc::new(GramForm::standard(n));
    let mut gens = Vec::new();
    let refl = |i: usize, j: usize, m: i64| -> Result<Isometry> {
        let mut a = Vector::zero(n);
        a[i] = Scalar::ONE;
        a[j] = Scalar::int(-1);
        make_reflection(&a, &Scalar::int(m), &gram)
    };
    for i in 0..n {
        for j in i + 1..n {
            for m in -bound..=bound {
                gens.push(Generator::new(refl(i, j, m)?, Scalar::ONE, format!("r{}{}_{m}", i + 1, j + 1)));
            }
        }
    }
    for i in 0..n {
        for sign in [1, -1] {
            let t = Isometry::translation(Vector::unit(n, i).scale(&Scalar::int(sign)), gram.clone());
            let name = if sign == 1 { format!("t{}", i + 1) } else { format!("t{}'", i + 1) };
            gens.push(Generator::new(t, Scalar::int(2), name));
        }
    }
    let mut w = Isometry::translation(Vector::unit(n, 0), gram.clone());
    for i in 1..n {
        w = w.compose(&refl(i - 1, i, 0)?);
    }
    let dir = Vector::from_ints(&vec![1; n]);
    let scale = gram.inner(&w.invariants().mu, &dir);
    Ok(Setting {
        name: format!("Mid(B{n})"),
        gram,
        w,
        gens,
        reflections: None,
        period: None,
        potential: Potential::Vertical { dir, scale },
        outer_rows_only: false,
    })
}

pub fn middle_interval(n: usize) -> Result<IntervalPoset> {
    build_interval(middle_setting(n, 2)?, &BuildOptions::default())
}

/// `(letter, rank)` of the type-B noncrossing lattice for each horizontal
/// component: rank one more than the component.
pub fn factor_ranks(sp: &Special) -> Vec<usize> {
    sp.horizontal.components.iter().map(|c| c.kind.rank + 1).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub kind: GroupKind,
    /// Generator classes with counts, e.g. `("R_H", 28)`.
    pub generators: Vec<(String, usize)>,
    pub weights: Vec<(String, Scalar)>,
    pub grid: Option<CoarseGrid>,
    pub nodes: Option<usize>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentedSummary {
    pub name: String,
    pub generators: Option<usize>,
    pub relations: Option<usize>,
    pub structure: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MapClass {
    Inclusion,
    Projection,
    Extension,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapEntry {
    pub from: String,
    pub to: String,
    pub class: MapClass,
    /// Whether the map can be evaluated on generators here.
    pub evaluable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TenGroupsReport {
    pub name: String,
    pub horizontal: String,
    pub components: usize,
    pub factorable_product: String,
    pub horizontal_product: String,
    pub groups: Vec<GroupSummary>,
    pub presented: Vec<PresentedSummary>,
    pub maps: Vec<MapEntry>,
}

fn arrows() -> Vec<MapEntry> {
    let m = |from: &str, to: &str, class, evaluable| MapEntry { from: from.into(), to: to.into(), class, evaluable };
    use MapClass::*;
    vec![
        m("H", "D", Inclusion, true),
        m("D", "W", Inclusion, true),
        m("D", "F", Inclusion, true),
        m("W", "C", Inclusion, true),
        m("F", "C", Inclusion, true),
        m("H_w", "H", Projection, true),
        m("D_w", "D", Projection, true),
        m("A", "W", Projection, true),
        m("F_w", "F", Projection, true),
        m("G", "C", Projection, true),
        m("H_w", "D_w", Extension, false),
        m("D_w", "A", Extension, false),
        m("D_w", "F_w", Extension, false),
        m("A", "G", Extension, false),
        m("F_w", "G", Extension, false),
    ]
}

#[derive(Clone, Debug)]
pub struct ReportOptions {
    /// Groups whose intervals are enumerated; the others get generator data only.
    pub enumerate: Vec<GroupKind>,
    pub build: BuildOptions,
}

impl ReportOptions {
    /// Enumerate everything for small ranks, only D and F beyond rank 5.
    pub fn for_rank(rank: usize) -> Self {
        let enumerate = if rank <= 5 {
            vec![GroupKind::D, GroupKind::W, GroupKind::F, GroupKind::C]
        } else {
            vec![GroupKind::D, GroupKind::F]
        };
        ReportOptions { enumerate, build: BuildOptions::default() }
    }
}

pub fn ten_groups_report(ctx: &CoxeterContext, opts: &ReportOptions) -> Result<TenGroupsReport> {
    let sp = Special::new(ctx)?;
    let k = sp.components();
    let types = sp.horizontal.types();
    let factored = distinct_vectors(factored_translations(ctx, &sp).into_iter().map(|f| f.vector));
    let r_h = sp.reflections.horizontal.len();
    let r_v = sp.reflections.vertical.len();
    let t = sp.reflections.translations.len();
    let wt_f = Scalar::ratio(2, k.max(1) as i64);
    let factorable_product = factor_ranks(&sp)
        .iter()
        .map(|r| format!("NC_{{B{}}}", sub(*r)))
        .collect::<Vec<_>>()
        .join("×");
    let horizontal_product = types
        .0
        .iter()
        .map(|c| format!("Cox(Ã{})", sub(c.rank)))
        .collect::<Vec<_>>()
        .join("×");

    let mut groups = Vec::new();
    let mut presented = Vec::new();
    type Named<T> = Vec<(String, T)>;
    for kind in GroupKind::ALL {
        let (generators, weights): (Named<usize>, Named<Scalar>) = match kind {
            GroupKind::H => (vec![("R_H".into(), r_h)], vec![("R_H".into(), Scalar::ONE)]),
            GroupKind::D => (
                vec![("R_H".into(), r_h), ("T".into(), t)],
                vec![("R_H".into(), Scalar::ONE), ("T".into(), Scalar::int(2))],
            ),
            GroupKind::W => (
                vec![("R_H".into(), r_h), ("R_V families".into(), r_v)],
                vec![("R_H".into(), Scalar::ONE), ("R_V".into(), Scalar::ONE)],
            ),
            GroupKind::F => (
                vec![("R_H".into(), r_h), ("T_F".into(), factored.len())],
                vec![("R_H".into(), Scalar::ONE), ("T_F".into(), wt_f.clone())],
            ),
            GroupKind::C => (
                vec![("R_H".into(), r_h), ("R_V families".into(), r_v), ("T_F".into(), factored.len())],
                vec![("R_H".into(), Scalar::ONE), ("R_V".into(), Scalar::ONE), ("T_F".into(), wt_f.clone())],
            ),
        };
        let mut summary = GroupSummary { kind, generators, weights, grid: None, nodes: None, note: None };
        let pres_name = match kind {
            GroupKind::H => "H_w",
            GroupKind::D => "D_w",
            GroupKind::W => "A",
            GroupKind::F => "F_w",
            GroupKind::C => "G",
        };
        let mut pres = PresentedSummary {
            name: pres_name.into(),
            generators: None,
            relations: None,
            structure: match kind {
                GroupKind::H => types.0.iter().map(|c| format!("Art(Ã{})", sub(c.rank))).collect::<Vec<_>>().join("×"),
                GroupKind::F => factor_ranks(&sp).iter().map(|r| format!("Art(B{})", sub(*r))).collect::<Vec<_>>().join("×"),
                _ => String::new(),
            },
        };
        if kind == GroupKind::H {
            summary.note = Some("w is not in H; no interval".into());
        } else if opts.enumerate.contains(&kind) {
            let p = build_interval(group_setting(ctx, &sp, kind)?, &opts.build)?;
            summary.grid = Some(p.coarse_grid());
            summary.nodes = Some(p.len());
            let pr = interval_presentation(&p, 1);
            pres.generators = Some(pr.generators.len());
            pres.relations = Some(pr.relations.len());
            if kind == GroupKind::D {
                // H_w keeps the horizontal relations seen in the interval
                let horizontal_only: Vec<_> = pr
                    .relations
                    .iter()
                    .filter(|r| r.iter().flatten().all(|g| g.starts_with('r')))
                    .collect();
                presented.push(PresentedSummary {
                    name: "H_w".into(),
                    generators: Some(r_h),
                    relations: Some(horizontal_only.len()),
                    structure: types.0.iter().map(|c| format!("Art(Ã{})", sub(c.rank))).collect::<Vec<_>>().join("×"),
                });
            }
        } else {
            summary.note = Some("interval not enumerated at this rank".into());
        }
        if kind != GroupKind::H {
            presented.push(pres);
        }
        groups.push(summary);
    }
    if !presented.iter().any(|p| p.name == "H_w") {
        presented.insert(
            0,
            PresentedSummary {
                name: "H_w".into(),
                generators: Some(r_h),
                relations: None,
                structure: types.0.iter().map(|c| format!("Art(Ã{})", sub(c.rank))).collect::<Vec<_>>().join("×"),
            },
        );
    }
    Ok(TenGroupsReport {
        name: ctx.name().to_string(),
        horizontal: types.pretty(),
        components: k,
        factorable_product,
        horizontal_product,
        groups,
        presented,
        maps: arrows(),
    })
}

fn sub(n: usize) -> String {
    const D: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    n.to_string().chars().map(|c| D[c.to_digit(10).unwrap() as usize]).collect()
}

/// Elements of `p`, as isometries, when every node is invariant.
pub fn element_set(p: &IntervalPoset) -> Option<BTreeSet<Isometry>> {
    p.nodes.iter().all(|n| n.invariant).then(|| p.nodes.iter().map(|n| n.rep.clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn middle_counts() {
        let sizes: Vec<usize> = (1..=4).map(|n| middle_interval(n).unwrap().len()).collect();
        assert_eq!(sizes, vec![2, 6, 20, 70]);
    }

    #[test]
    fn middle_counts_do_not_depend_on_the_generator_bound() {
        for n in 2..=4 {
            let small = build_interval(middle_setting(n, 2).unwrap(), &BuildOptions::default()).unwrap();
            let big = build_interval(middle_setting(n, 4).unwrap(), &BuildOptions::default()).unwrap();
            assert_eq!(small.len(), big.len());
        }
    }

    #[test]
    fn g2_grids() {
        let c = CoxeterContext::from_name("G~2", None).unwrap();
        let w = coxeter_interval(&c, &BuildOptions::default()).unwrap();
        assert_eq!(w.coarse_grid().render(), "[[1,2],[6,6],[2,1]]");
        let d = diagonal_interval(&c, &BuildOptions::default()).unwrap();
        assert_eq!(d.coarse_grid().render(), "[[1,2],[0,0],[2,1]]");
    }

    #[test]
    fn factored_pieces_multiply_back() {
        let c = CoxeterContext::from_name("E~8", None).unwrap();
        let sp = Special::new(&c).unwrap();
        let f = factored_translations(&c, &sp);
        assert_eq!(f.len(), 90);
        for (i, t) in sp.reflections.translations.iter().enumerate() {
            let mut sum = Vector::zero(8);
            for piece in f.iter().filter(|p| p.base == i) {
                sum = &sum + &piece.vector;
            }
            assert_eq!(&sum, t);
        }
    }

    #[test]
    fn the_period_commutes_with_w() {
        let c = CoxeterContext::from_name("B~3", None).unwrap();
        let tau = c.period_translation();
        assert_eq!(tau.compose(&c.coxeter_element), c.coxeter_element.compose(&tau));
    }
}
