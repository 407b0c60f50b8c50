use std::collections::BTreeSet;

use super::{AffineRoot, CoxeterContext};
use crate::error::{Error, Result};
use crate::isometry::Isometry;
use crate::linalg::{Scalar, Vector};

/// Alcoves whose interiors meet the axis, one per period orbit, and their
/// vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxialData {
    pub vertices: Vec<Vector>,
    /// Vertex lists (sorted) of the axial alcoves.
    pub simplices: Vec<Vec<Vector>>,
}

/// The three special boxes of the interval of the Coxeter element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalReflections {
    /// Horizontal reflections through an axial vertex.
    pub horizontal: Vec<AffineRoot>,
    /// One vertical reflection per period family, `0 ≤ k < |g(P, α)|`.
    pub vertical: Vec<AffineRoot>,
    /// Translation vectors `λ` of the pure translations below `w`.
    pub translations: Vec<Vector>,
}

impl CoxeterContext {
    /// Position along the axis in units of the period.
    pub fn height(&self, x: &Vector) -> Scalar {
        self.gram.inner(x, &self.period) / &self.gram.norm2(&self.period)
    }

    /// Shifts `x` by a multiple of the period so its height is in `[0, 1)`.
    pub fn reduce_mod_period(&self, x: &Vector) -> Vector {
        let m = self.height(x).floor_i64();
        x.add_scaled(&Scalar::int(-m), &self.period)
    }

    /// `u ∈ W` with `u⁻¹(x)` in the fundamental alcove.
    pub fn alcove_of(&self, x: &Vector) -> Isometry {
        let n = self.rank();
        let mut y = x.clone();
        let mut u = Isometry::identity(self.gram.clone());
        loop {
            let gy = self.gram.apply(&y);
            let wall = match (0..n).find(|&i| gy[i].is_negative()) {
                Some(i) => i + 1,
                None if gy.dot(&self.highest_root) > Scalar::ONE => 0,
                None => break,
            };
            let s = &self.simple_reflections[wall];
            y = s.apply(&y);
            u = u.compose(s);
        }
        u
    }

    /// Vertices of the fundamental alcove: the origin and `G⁻¹eᵢ / mᵢ`.
    pub fn fundamental_vertices(&self) -> Vec<Vector> {
        let n = self.rank();
        let ginv = self.gram.inverse_matrix();
        let mut out = vec![Vector::zero(n)];
        for i in 0..n {
            out.push(ginv.column(i).scale(&Scalar::ratio(1, self.marks[i])));
        }
        out
    }
}

pub fn axial_data(ctx: &CoxeterContext) -> Result<AxialData> {
    let g = &ctx.gram;
    let p = ctx.axis.base().expect("axis is nonempty").clone();
    let period = &ctx.period;
    for &h in &ctx.horizontal_roots() {
        if g.inner(&p, ctx.root(h)).is_integer() {
            return Err(Error::Internal("axis lies in a horizontal wall".into()));
        }
    }
    let mut cuts: BTreeSet<Scalar> = BTreeSet::new();
    cuts.insert(Scalar::ZERO);
    for &v in &ctx.vertical_roots() {
        let a = g.inner(&p, ctx.root(v));
        let b = g.inner(period, ctx.root(v));
        let (lo, hi) = if b.is_positive() { (a.clone(), &a + &b) } else { (&a + &b, a.clone()) };
        let mut m = lo.floor_i64();
        while Scalar::int(m) <= hi {
            let s = (Scalar::int(m) - &a) / &b;
            if !s.is_negative() && s < Scalar::ONE {
                cuts.insert(s);
            }
            m += 1;
        }
    }
    let cuts: Vec<Scalar> = cuts.into_iter().collect();
    let base = ctx.fundamental_vertices();
    let mut simplices: BTreeSet<Vec<Vector>> = BTreeSet::new();
    let mut vertices: BTreeSet<Vector> = BTreeSet::new();
    for (i, s) in cuts.iter().enumerate() {
        let next = cuts.get(i + 1).cloned().unwrap_or(Scalar::ONE);
        let mid = (s + &next) * Scalar::ratio(1, 2);
        let x = p.add_scaled(&mid, period);
        let u = ctx.alcove_of(&x);
        let verts: Vec<Vector> = base.iter().map(|v| u.apply(v)).collect();
        let mut bary = Vector::zero(ctx.rank());
        for v in &verts {
            bary = &bary + v;
        }
        let shift = (ctx.height(&bary) * Scalar::ratio(1, verts.len() as i64)).floor_i64();
        let mut canon: Vec<Vector> =
            verts.iter().map(|v| v.add_scaled(&Scalar::int(-shift), period)).collect();
        canon.sort();
        simplices.insert(canon);
        for v in &verts {
            vertices.insert(ctx.reduce_mod_period(v));
        }
    }
    Ok(AxialData { vertices: vertices.into_iter().collect(), simplices: simplices.into_iter().collect() })
}

pub fn interval_reflections(ctx: &CoxeterContext, axial: &AxialData) -> IntervalReflections {
    let g = &ctx.gram;
    let mut horizontal = BTreeSet::new();
    for &h in &ctx.horizontal_roots() {
        for x in &axial.vertices {
            if let Some(k) = g.inner(x, ctx.root(h)).as_i64() {
                horizontal.insert(AffineRoot { root: h, k });
            }
        }
    }
    let mut vertical = Vec::new();
    let mut translations = Vec::new();
    let mu_d = g.inner(ctx.mu(), &ctx.axis_dir);
    for &v in &ctx.vertical_roots() {
        let shift = ctx.period_shift(v).abs();
        vertical.extend((0..shift).map(|k| AffineRoot { root: v, k }));
        let co = ctx.coroot(ctx.root(v));
        let m = &mu_d / &g.inner(&co, &ctx.axis_dir);
        if let Some(m) = m.as_i64() {
            translations.push(co.scale(&Scalar::int(m)));
        }
    }
    IntervalReflections { horizontal: horizontal.into_iter().collect(), vertical, translations }
}
