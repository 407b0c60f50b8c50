//! Euclidean isometries `x ↦ A x + t` and their basic invariants.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{project_onto_span, solve, AffSub, Ambient, GramForm, Matrix, Scalar, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    Elliptic,
    Hyperbolic,
}

/// Move-set, its standard form `U + μ`, min-set, type and reflection length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicInvariants {
    pub mov: AffSub,
    pub u_part: AffSub,
    pub mu: Vector,
    pub min: AffSub,
    pub kind: Kind,
    pub refl_len: usize,
}

impl BasicInvariants {
    pub fn is_elliptic(&self) -> bool {
        self.kind == Kind::Elliptic
    }
}

/// An isometry of euclidean space relative to a fixed Gram form.
///
/// Equality and hashing only look at the linear part and the translation.
#[derive(Clone)]
pub struct Isometry {
    mat: Matrix,
    trans: Vector,
    gram: Arc<GramForm>,
    inv: OnceLock<Arc<BasicInvariants>>,
}

impl PartialEq for Isometry {
    fn eq(&self, other: &Self) -> bool {
        self.trans == other.trans && self.mat == other.mat
    }
}

impl Eq for Isometry {}

impl Hash for Isometry {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.mat.hash(state);
        self.trans.hash(state);
    }
}

impl PartialOrd for Isometry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on (translation, matrix entries); used to make outputs
/// deterministic.
impl Ord for Isometry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.trans
            .0
            .cmp(&other.trans.0)
            .then_with(|| {
                let n = self.rank();
                for i in 0..n {
                    for j in 0..n {
                        let c = self.mat[(i, j)].cmp(&other.mat[(i, j)]);
                        if c.is_ne() {
                            return c;
                        }
                    }
                }
                std::cmp::Ordering::Equal
            })
    }
}

impl Isometry {
    /// Builds `x ↦ mat·x + trans`. Checks form-orthogonality.
    pub fn new(mat: Matrix, trans: Vector, gram: Arc<GramForm>) -> Result<Self> {
        let n = gram.rank();
        if mat.rows() != n || mat.cols() != n || trans.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: trans.len() });
        }
        let lhs = mat.transpose().mul(gram.matrix()).mul(&mat);
        if &lhs != gram.matrix() {
            return Err(Error::Internal("linear part does not preserve the form".into()));
        }
        Ok(Self::raw(mat, trans, gram))
    }

    /// A copy without the cached invariants, for long-lived storage.
    pub fn stripped(&self) -> Isometry {
        Isometry::raw(self.mat.clone(), self.trans.clone(), self.gram.clone())
    }

    pub(crate) fn raw(mat: Matrix, trans: Vector, gram: Arc<GramForm>) -> Self {
        Isometry { mat, trans, gram, inv: OnceLock::new() }
    }

    pub fn identity(gram: Arc<GramForm>) -> Self {
        let n = gram.rank();
        Self::raw(Matrix::identity(n), Vector::zero(n), gram)
    }

    pub fn translation(lambda: Vector, gram: Arc<GramForm>) -> Self {
        let n = gram.rank();
        Self::raw(Matrix::identity(n), lambda, gram)
    }

    pub fn rank(&self) -> usize {
        self.trans.len()
    }

    pub fn mat(&self) -> &Matrix {
        &self.mat
    }

    pub fn trans(&self) -> &Vector {
        &self.trans
    }

    pub fn gram(&self) -> &Arc<GramForm> {
        &self.gram
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        &self.mat.mul_vec(x) + &self.trans
    }

    pub fn apply_linear(&self, v: &Vector) -> Vector {
        self.mat.mul_vec(v)
    }

    pub fn is_identity(&self) -> bool {
        self.trans.is_zero() && self.mat.is_identity()
    }

    pub fn is_translation(&self) -> bool {
        self.mat.is_identity()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let mat = self.mat.mul(&other.mat);
        let trans = &self.mat.mul_vec(&other.trans) + &self.trans;
        Self::raw(mat, trans, self.gram.clone())
    }

    pub fn try_compose(&self, other: &Isometry) -> Result<Isometry> {
        if self.rank() != other.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), got: other.rank() });
        }
        Ok(self.compose(other))
    }

    pub fn invert(&self) -> Isometry {
        // A⁻¹ = G⁻¹ Aᵀ G for form-orthogonal A.
        let g = self.gram.matrix();
        let ainv = self.gram.inverse_matrix().mul(&self.mat.transpose()).mul(g);
        let trans = -&ainv.mul_vec(&self.trans);
        Self::raw(ainv, trans, self.gram.clone())
    }

    /// `τ self τ⁻¹` for the translation `τ = t_p`.
    pub fn conjugate_by_translation(&self, p: &Vector) -> Isometry {
        // t_p ∘ (A x + t) ∘ t_{-p} = A x + t + (I - A) p
        let shift = &p.clone() - &self.mat.mul_vec(p);
        Self::raw(self.mat.clone(), &self.trans + &shift, self.gram.clone())
    }

    fn minus_identity(&self) -> Matrix {
        self.mat.sub(&Matrix::identity(self.rank()))
    }

    /// `(rank(A - I), elliptic)` from one elimination, without building the
    /// full invariants.
    pub fn motion_ranks(&self) -> (usize, bool) {
        if let Some(inv) = self.inv.get() {
            return (inv.u_part.dim().unwrap_or(0), inv.is_elliptic());
        }
        let n = self.rank();
        let mut aug = Matrix::zeros(n, n + 1);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self.mat[(i, j)].clone();
            }
            aug[(i, i)] -= &Scalar::ONE;
            aug[(i, n)] = self.trans[i].clone();
        }
        let (_, pivots) = crate::linalg::rref(aug);
        if pivots.last() == Some(&n) {
            (pivots.len() - 1, false)
        } else {
            (pivots.len(), true)
        }
    }

    /// Reflection length from Scherk's formula.
    pub fn reflection_length(&self) -> usize {
        match self.motion_ranks() {
            (k, true) => k,
            (k, false) => k + 2,
        }
    }

    pub fn kind(&self) -> Kind {
        self.invariants().kind
    }

    pub fn is_elliptic(&self) -> bool {
        self.kind() == Kind::Elliptic
    }

    pub fn invariants(&self) -> &BasicInvariants {
        self.inv.get_or_init(|| Arc::new(self.compute_invariants()))
    }

    fn compute_invariants(&self) -> BasicInvariants {
        let n = self.rank();
        let b = self.minus_identity();
        let cols: Vec<Vector> = (0..n).map(|j| b.column(j)).collect();
        let u_part = AffSub::linear(n, &cols);
        let mu = &self.trans - &project_onto_span(&self.trans, u_part.dirs(), &self.gram);
        let mov = u_part.translate(&self.trans);
        let rhs = &mu - &self.trans;
        let (x, null) = solve(&b, &rhs).expect("min-set of an isometry is nonempty");
        let min = AffSub::new(Ambient::E, x, &null);
        let kind = if mu.is_zero() { Kind::Elliptic } else { Kind::Hyperbolic };
        let k = u_part.dim().unwrap_or(0);
        let refl_len = match kind {
            Kind::Elliptic => k,
            Kind::Hyperbolic => k + 2,
        };
        BasicInvariants { mov: mov.with_ambient(Ambient::V), u_part, mu, min, kind, refl_len }
    }

    /// For a reflection, a root (the direction of its move-set).
    pub fn reflection_root(&self) -> Option<Vector> {
        let inv = self.invariants();
        (inv.kind == Kind::Elliptic && inv.refl_len == 1).then(|| inv.u_part.dirs()[0].clone())
    }

    /// Fixed set; empty for hyperbolic elements.
    pub fn fix_set(&self) -> AffSub {
        let inv = self.invariants();
        match inv.kind {
            Kind::Elliptic => inv.min.clone(),
            Kind::Hyperbolic => AffSub::empty(Ambient::E, self.rank()),
        }
    }
}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Isom({:?} | {:?})", self.mat, self.trans)
    }
}

/// Serializable form of an isometry (without its Gram form).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsometryRecord {
    pub mat: Vec<Vec<Scalar>>,
    pub trans: Vec<Scalar>,
}

impl From<&Isometry> for IsometryRecord {
    fn from(w: &Isometry) -> Self {
        let n = w.rank();
        IsometryRecord {
            mat: (0..n).map(|i| w.mat.row(i).to_vec()).collect(),
            trans: w.trans.0.clone(),
        }
    }
}

impl IsometryRecord {
    pub fn to_isometry(&self, gram: Arc<GramForm>) -> Result<Isometry> {
        Isometry::new(Matrix::from_rows(self.mat.clone()), Vector(self.trans.clone()), gram)
    }
}

pub fn move_set(w: &Isometry) -> AffSub {
    w.invariants().mov.clone()
}

pub fn standard_form(w: &Isometry) -> (AffSub, Vector) {
    let inv = w.invariants();
    (inv.u_part.clone(), inv.mu.clone())
}

pub fn min_set(w: &Isometry) -> AffSub {
    w.invariants().min.clone()
}

pub fn reflection_length(w: &Isometry) -> usize {
    w.reflection_length()
}

pub fn compose(a: &Isometry, b: &Isometry) -> Result<Isometry> {
    a.try_compose(b)
}

pub fn invert(a: &Isometry) -> Isometry {
    a.invert()
}

/// The reflection fixing the hyperplane `{x : g(root, x) = offset}`.
pub fn make_reflection(root: &Vector, offset: &Scalar, gram: &Arc<GramForm>) -> Result<Isometry> {
    if root.is_zero() {
        return Err(Error::ZeroRoot);
    }
    let n = gram.rank();
    if root.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: root.len() });
    }
    let norm = gram.norm2(root);
    let coef = Scalar::int(2) / &norm;
    let cov = gram.apply(root);
    let mut mat = Matrix::identity(n);
    for i in 0..n {
        if root[i].is_zero() {
            continue;
        }
        let ri = &coef * &root[i];
        for j in 0..n {
            if !cov[j].is_zero() {
                let t = &ri * &cov[j];
                mat[(i, j)] -= &t;
            }
        }
    }
    let trans = root.scale(&(&coef * offset));
    Ok(Isometry::raw(mat, trans, gram.clone()))
}

/// The three cases for multiplying a hyperbolic isometry by a reflection on
/// the left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProductCase {
    /// `rw` hyperbolic of length `k - 1`.
    HypDown,
    /// `rw` elliptic of length `k - 1`.
    EllDown,
    /// `rw` hyperbolic of length `k + 1`.
    HypUp,
}

impl ProductCase {
    pub fn expected(self, k: usize) -> (Kind, usize) {
        match self {
            ProductCase::HypDown => (Kind::Hyperbolic, k - 1),
            ProductCase::EllDown => (Kind::Elliptic, k - 1),
            ProductCase::HypUp => (Kind::Hyperbolic, k + 1),
        }
    }
}

pub fn predict_product(w: &Isometry, r: &Isometry) -> Result<ProductCase> {
    let inv = w.invariants();
    if inv.kind != Kind::Hyperbolic {
        return Err(Error::NotHyperbolic);
    }
    let alpha = r.reflection_root().ok_or_else(|| Error::Internal("not a reflection".into()))?;
    if inv.u_part.dir_contains(&alpha) {
        return Ok(ProductCase::HypDown);
    }
    let mut dirs = inv.u_part.dirs().to_vec();
    dirs.push(alpha);
    let u_alpha = AffSub::linear(w.rank(), &dirs);
    Ok(if u_alpha.dir_contains(&inv.mu) { ProductCase::EllDown } else { ProductCase::HypUp })
}

/// A reflection `r` with `ℓ(r w) = ℓ(w) - 1`, or `None` for the identity.
///
/// Hyperbolic `w` uses the trichotomy (a root in `U`, or `μ` itself when
/// `U = 0`); elliptic `w` uses a root of its move-set through its fix-set.
pub fn length_reducing_reflection(w: &Isometry) -> Option<Isometry> {
    let inv = w.invariants();
    let gram = w.gram();
    match inv.kind {
        Kind::Elliptic => {
            let alpha = inv.u_part.dirs().first()?.clone();
            let b = inv.min.base().expect("elliptic fix-set is nonempty");
            let offset = gram.inner(&alpha, b);
            make_reflection(&alpha, &offset, gram).ok()
        }
        Kind::Hyperbolic => {
            let alpha = inv.u_part.dirs().first().cloned().unwrap_or_else(|| inv.mu.clone());
            make_reflection(&alpha, &Scalar::ZERO, gram).ok()
        }
    }
}

/// Writes `w = r₁ r₂ ⋯ r_k` by repeatedly peeling off a length-reducing
/// reflection.
pub fn greedy_factorization(w: &Isometry) -> Vec<Isometry> {
    let mut out = Vec::new();
    let mut cur = w.clone();
    let bound = w.rank() + 2;
    while let Some(r) = length_reducing_reflection(&cur) {
        let next = r.compose(&cur);
        debug_assert_eq!(next.reflection_length() + 1, cur.reflection_length());
        out.push(r);
        cur = next;
        assert!(out.len() <= bound, "greedy factorization failed to terminate");
    }
    debug_assert!(cur.is_identity());
    out
}

/// A product of up to `max_refl` reflections with integer roots and offsets
/// drawn from `draw(lo, hi)` (inclusive range).
pub fn random_isometry(
    gram: &Arc<GramForm>,
    max_refl: usize,
    draw: &mut impl FnMut(i64, i64) -> i64,
) -> Isometry {
    let count = draw(0, max_refl as i64) as usize;
    let mut w = Isometry::identity(gram.clone());
    for _ in 0..count {
        w = random_reflection(gram, draw).compose(&w);
    }
    w
}

pub fn random_reflection(gram: &Arc<GramForm>, draw: &mut impl FnMut(i64, i64) -> i64) -> Isometry {
    let n = gram.rank();
    loop {
        let root = Vector((0..n).map(|_| Scalar::int(draw(-2, 2))).collect());
        if root.is_zero() {
            continue;
        }
        let offset = Scalar::ratio(draw(-3, 3), draw(1, 2));
        return make_reflection(&root, &offset, gram).expect("nonzero root");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn std(n: usize) -> Arc<GramForm> {
        Arc::new(GramForm::standard(n))
    }

    fn v(xs: &[i64]) -> Vector {
        Vector::from_ints(xs)
    }

    fn glide() -> Isometry {
        let g = std(2);
        let r = make_reflection(&v(&[0, 1]), &Scalar::ZERO, &g).unwrap();
        Isometry::translation(v(&[1, 0]), g).compose(&r)
    }

    fn rotation90() -> Isometry {
        let g = std(2);
        Isometry::new(Matrix::from_int_rows(&[&[0, -1], &[1, 0]]), v(&[0, 0]), g).unwrap()
    }

    #[test]
    fn move_sets() {
        let g = std(2);
        assert_eq!(move_set(&Isometry::identity(g.clone())), AffSub::linear(2, &[]));
        let t = Isometry::translation(v(&[2, 3]), g.clone());
        assert_eq!(move_set(&t), AffSub::point(Ambient::V, v(&[2, 3])));
        let r = make_reflection(&v(&[1, 1]), &Scalar::int(5), &g).unwrap();
        assert_eq!(move_set(&r), AffSub::linear(2, &[v(&[1, 1])]));
    }

    #[test]
    fn glide_invariants() {
        let w = glide();
        let (u, mu) = standard_form(&w);
        assert_eq!(u, AffSub::linear(2, &[v(&[0, 1])]));
        assert_eq!(mu, v(&[1, 0]));
        assert_eq!(min_set(&w), AffSub::new(Ambient::E, v(&[0, 0]), &[v(&[1, 0])]));
        assert_eq!(reflection_length(&w), 3);
        assert_eq!(w.kind(), Kind::Hyperbolic);
        let (u, mu) = standard_form(&Isometry::identity(std(3)));
        assert_eq!(u.dim(), Some(0));
        assert!(mu.is_zero());
    }

    #[test]
    fn rotation_invariants() {
        let g = std(2);
        let p = v(&[1, 2]);
        let rot = Isometry::translation(p.clone(), g.clone())
            .compose(&rotation90())
            .compose(&Isometry::translation(-&p, g));
        assert_eq!(min_set(&rot), AffSub::point(Ambient::E, p));
        assert_eq!(reflection_length(&rot), 2);
        assert_eq!(min_set(&Isometry::identity(std(2))), AffSub::full(Ambient::E, 2));
    }

    #[test]
    fn reflections() {
        let g = std(2);
        let r = make_reflection(&v(&[0, 1]), &Scalar::ZERO, &g).unwrap();
        assert_eq!(r.apply(&v(&[3, 4])), v(&[3, -4]));
        let r1 = make_reflection(&v(&[1, 0]), &Scalar::ONE, &g).unwrap();
        assert_eq!(r1.apply(&v(&[0, 0])), v(&[2, 0]));
        assert!(r1.compose(&r1).is_identity());
        assert_eq!(r1.reflection_length(), 1);
        assert_eq!(make_reflection(&v(&[0, 0]), &Scalar::ONE, &g).unwrap_err(), Error::ZeroRoot);
    }

    #[test]
    fn compose_and_invert() {
        let g = std(2);
        let a = Isometry::translation(v(&[1, 2]), g.clone());
        let b = Isometry::translation(v(&[3, -1]), g.clone());
        assert_eq!(a.compose(&b), Isometry::translation(v(&[4, 1]), g.clone()));
        let w = glide();
        let wi = w.invert();
        assert!(w.compose(&wi).is_identity());
        assert_eq!(standard_form(&wi).1, v(&[-1, 0]));
        assert_eq!(min_set(&wi), min_set(&w));
        let other = Isometry::identity(std(3));
        assert!(compose(&w, &other).is_err());
    }

    #[test]
    fn trichotomy_examples() {
        let g = std(2);
        let t = Isometry::translation(v(&[2, 0]), g.clone());
        let par = make_reflection(&v(&[1, 0]), &Scalar::int(3), &g).unwrap();
        assert_eq!(predict_product(&t, &par).unwrap(), ProductCase::EllDown);
        assert_eq!(par.compose(&t).reflection_length(), 1);
        let skew = make_reflection(&v(&[1, 1]), &Scalar::ZERO, &g).unwrap();
        assert_eq!(predict_product(&t, &skew).unwrap(), ProductCase::HypUp);
        let rw = skew.compose(&t);
        assert_eq!((rw.kind(), rw.reflection_length()), (Kind::Hyperbolic, 3));

        // corkscrew in rank 3: rotation about the z-axis then lift
        let g3 = std(3);
        let rot = Isometry::new(
            Matrix::from_int_rows(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 1]]),
            v(&[0, 0, 1]),
            g3.clone(),
        )
        .unwrap();
        assert_eq!(rot.reflection_length(), 4);
        let horiz = make_reflection(&v(&[1, 0, 0]), &Scalar::ONE, &g3).unwrap();
        assert_eq!(predict_product(&rot, &horiz).unwrap(), ProductCase::HypDown);
        let p = horiz.compose(&rot);
        assert_eq!((p.kind(), p.reflection_length()), (Kind::Hyperbolic, 3));
        assert_eq!(predict_product(&horiz, &horiz), Err(Error::NotHyperbolic));
    }

    #[test]
    fn greedy_matches_scherk_on_glide() {
        let w = glide();
        let f = greedy_factorization(&w);
        assert_eq!(f.len(), 3);
        let prod = f.iter().fold(Isometry::identity(w.gram().clone()), |acc, r| acc.compose(r));
        assert_eq!(prod, w);
    }

    #[test]
    fn non_orthogonal_matrix_rejected() {
        let g = std(2);
        assert!(Isometry::new(Matrix::from_int_rows(&[&[1, 1], &[0, 1]]), v(&[0, 0]), g).is_err());
    }
}
