use std::fmt;

use serde::{Deserialize, Serialize};

use super::matrix::{nullspace, rows_matrix, rref, solve, Matrix};
use super::{GramForm, Vector};
use crate::error::{Error, Result};

/// Which space a subspace lives in: the vector space `V` of motions or the
/// affine space `E` of points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ambient {
    V,
    E,
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
struct Flat {
    base: Vector,
    dirs: Vec<Vector>,
}

/// An affine subspace of `V` or `E`, stored canonically.
///
/// Directions are kept in reduced row-echelon form and the basepoint is
/// reduced against them, so two values are equal exactly when they describe
/// the same point set.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffSub {
    ambient: Ambient,
    rank: usize,
    flat: Option<Flat>,
}

fn canonical_dirs(dirs: &[Vector], n: usize) -> (Vec<Vector>, Vec<usize>) {
    if dirs.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let (red, pivots) = rref(rows_matrix(dirs, n));
    let rows = (0..pivots.len()).map(|i| Vector(red.row(i).to_vec())).collect();
    (rows, pivots)
}

fn reduce_against(p: &Vector, dirs: &[Vector], pivots: &[usize]) -> Vector {
    let mut b = p.clone();
    for (row, &c) in dirs.iter().zip(pivots) {
        if !b[c].is_zero() {
            let f = -&b[c];
            b = b.add_scaled(&f, row);
        }
    }
    b
}

impl AffSub {
    fn build(ambient: Ambient, base: Vector, dirs: &[Vector]) -> Self {
        let n = base.len();
        let (dirs, pivots) = canonical_dirs(dirs, n);
        let base = reduce_against(&base, &dirs, &pivots);
        AffSub { ambient, rank: n, flat: Some(Flat { base, dirs }) }
    }

    pub fn new(ambient: Ambient, base: Vector, dirs: &[Vector]) -> Self {
        Self::build(ambient, base, dirs)
    }

    pub fn empty(ambient: Ambient, rank: usize) -> Self {
        AffSub { ambient, rank, flat: None }
    }

    pub fn point(ambient: Ambient, p: Vector) -> Self {
        Self::build(ambient, p, &[])
    }

    pub fn full(ambient: Ambient, rank: usize) -> Self {
        let dirs: Vec<Vector> = (0..rank).map(|i| Vector::unit(rank, i)).collect();
        Self::build(ambient, Vector::zero(rank), &dirs)
    }

    /// The linear subspace of `V` spanned by `dirs`.
    pub fn linear(rank: usize, dirs: &[Vector]) -> Self {
        Self::build(Ambient::V, Vector::zero(rank), dirs)
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_none()
    }

    /// Dimension, or `None` for the empty subspace.
    pub fn dim(&self) -> Option<usize> {
        self.flat.as_ref().map(|f| f.dirs.len())
    }

    pub fn base(&self) -> Option<&Vector> {
        self.flat.as_ref().map(|f| &f.base)
    }

    pub fn dirs(&self) -> &[Vector] {
        self.flat.as_ref().map_or(&[], |f| &f.dirs)
    }

    fn pivots(&self) -> Vec<usize> {
        self.dirs()
            .iter()
            .map(|r| r.iter().position(|x| !x.is_zero()).expect("zero direction row"))
            .collect()
    }

    /// Contains the origin (only meaningful in `V`).
    pub fn is_linear(&self) -> bool {
        self.flat.as_ref().is_some_and(|f| f.base.is_zero())
    }

    pub fn contains_point(&self, p: &Vector) -> bool {
        match &self.flat {
            None => false,
            Some(f) => reduce_against(p, &f.dirs, &self.pivots()) == f.base,
        }
    }

    /// Whether `v` lies in the direction space.
    pub fn dir_contains(&self, v: &Vector) -> bool {
        match &self.flat {
            None => v.is_zero(),
            Some(f) => reduce_against(v, &f.dirs, &self.pivots()).is_zero(),
        }
    }

    /// Point-set inclusion `self ⊆ other`.
    pub fn is_subset_of(&self, other: &AffSub) -> bool {
        match &self.flat {
            None => true,
            Some(f) => other.contains_point(&f.base) && f.dirs.iter().all(|d| other.dir_contains(d)),
        }
    }

    /// The linear subspace `Dir(B)` of directions.
    pub fn direction_space(&self) -> AffSub {
        AffSub::build(Ambient::V, Vector::zero(self.rank), self.dirs())
    }

    pub fn translate(&self, v: &Vector) -> AffSub {
        match &self.flat {
            None => self.clone(),
            Some(f) => AffSub::build(self.ambient, &f.base + v, &f.dirs),
        }
    }

    pub fn with_ambient(&self, ambient: Ambient) -> AffSub {
        AffSub { ambient, ..self.clone() }
    }

    pub fn negate(&self) -> AffSub {
        match &self.flat {
            None => self.clone(),
            Some(f) => AffSub::build(self.ambient, -&f.base, &f.dirs),
        }
    }

    /// Equations `N x = c` cutting out the subspace (standard dot product).
    fn equations(&self) -> Option<(Matrix, Vector)> {
        let f = self.flat.as_ref()?;
        let normals = if f.dirs.is_empty() {
            (0..self.rank).map(|i| Vector::unit(self.rank, i)).collect()
        } else {
            nullspace(&rows_matrix(&f.dirs, self.rank))
        };
        let c = Vector(normals.iter().map(|nv| nv.dot(&f.base)).collect());
        Some((rows_matrix(&normals, self.rank), c))
    }

    pub fn codim_equations(&self) -> Option<(Matrix, Vector)> {
        self.equations()
    }
}

impl fmt::Debug for AffSub {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.flat {
            None => write!(f, "{:?}:∅", self.ambient),
            Some(fl) => {
                write!(f, "{:?}:{:?}+<", self.ambient, fl.base)?;
                for (i, d) in fl.dirs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{d:?}")?;
                }
                write!(f, ">")
            }
        }
    }
}

/// Smallest affine subspace containing all points.
pub fn span_affine(ambient: Ambient, points: &[Vector]) -> Result<AffSub> {
    let first = points.first().ok_or(Error::EmptyHull)?;
    for p in points {
        if p.len() != first.len() {
            return Err(Error::DimensionMismatch { expected: first.len(), got: p.len() });
        }
    }
    let dirs: Vec<Vector> = points[1..].iter().map(|p| p - first).collect();
    Ok(AffSub::build(ambient, first.clone(), &dirs))
}

pub fn intersect_affine(a: &AffSub, b: &AffSub) -> Result<AffSub> {
    if a.ambient != b.ambient || a.rank != b.rank {
        return Err(Error::AmbientMismatch(format!("{:?}/{} vs {:?}/{}", a.ambient, a.rank, b.ambient, b.rank)));
    }
    let (Some((na, ca)), Some((nb, cb))) = (a.equations(), b.equations()) else {
        return Ok(AffSub::empty(a.ambient, a.rank));
    };
    let n = a.rank;
    let total = na.rows() + nb.rows();
    let mut m = Matrix::zeros(total, n);
    let mut c = Vector::zero(total);
    for i in 0..na.rows() {
        for j in 0..n {
            m[(i, j)] = na[(i, j)].clone();
        }
        c[i] = ca[i].clone();
    }
    for i in 0..nb.rows() {
        for j in 0..n {
            m[(na.rows() + i, j)] = nb[(i, j)].clone();
        }
        c[na.rows() + i] = cb[i].clone();
    }
    Ok(match solve(&m, &c) {
        None => AffSub::empty(a.ambient, n),
        Some((x, null)) => AffSub::build(a.ambient, x, &null),
    })
}

/// The `g`-orthogonal complement of a linear subspace.
pub fn b_orth_complement(u: &AffSub, g: &GramForm) -> Result<AffSub> {
    if !u.is_linear() {
        return Err(Error::NotLinear);
    }
    let n = u.rank;
    if u.dirs().is_empty() {
        return Ok(AffSub::full(Ambient::V, n));
    }
    let rows: Vec<Vector> = u.dirs().iter().map(|d| g.apply(d)).collect();
    Ok(AffSub::linear(n, &nullspace(&rows_matrix(&rows, n))))
}

/// The `g`-orthogonal projection of `v` onto the linear subspace `u`.
pub fn b_project(v: &Vector, u: &AffSub, g: &GramForm) -> Result<Vector> {
    if !u.is_linear() {
        return Err(Error::NotLinear);
    }
    if v.len() != u.rank {
        return Err(Error::DimensionMismatch { expected: u.rank, got: v.len() });
    }
    Ok(project_onto_span(v, u.dirs(), g))
}

/// Projection onto the span of linearly independent `basis`.
pub fn project_onto_span(v: &Vector, basis: &[Vector], g: &GramForm) -> Vector {
    let k = basis.len();
    if k == 0 {
        return Vector::zero(v.len());
    }
    let mut gram = Matrix::zeros(k, k);
    let mut rhs = Vector::zero(k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = g.inner(&basis[i], &basis[j]);
        }
        rhs[i] = g.inner(&basis[i], v);
    }
    let (c, _) = solve(&gram, &rhs).expect("gram matrix of a basis is invertible");
    let mut out = Vector::zero(v.len());
    for (ci, bi) in c.iter().zip(basis) {
        out = out.add_scaled(ci, bi);
    }
    out
}
