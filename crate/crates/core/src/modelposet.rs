//! The global poset of affine subspaces and the invariant map into it.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::isometry::{make_reflection, Isometry, Kind};
use crate::linalg::{b_orth_complement, AffSub, GramForm, Matrix, Scalar, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    /// A nonlinear affine subspace of motions.
    H,
    /// An affine subspace of points.
    E,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GlobalPosetElement {
    pub tag: Tag,
    pub subspace: AffSub,
}

impl GlobalPosetElement {
    pub fn h(m: AffSub) -> Self {
        debug_assert!(!m.is_linear(), "h-elements need a nonlinear subspace");
        GlobalPosetElement { tag: Tag::H, subspace: m }
    }

    pub fn e(b: AffSub) -> Self {
        GlobalPosetElement { tag: Tag::E, subspace: b }
    }
}

pub fn inv(u: &Isometry) -> GlobalPosetElement {
    let b = u.invariants();
    match b.kind {
        Kind::Hyperbolic => GlobalPosetElement::h(b.mov.clone()),
        Kind::Elliptic => GlobalPosetElement::e(b.min.clone()),
    }
}

fn linear_span(m: &AffSub) -> AffSub {
    let mut dirs = m.dirs().to_vec();
    dirs.extend(m.base().cloned());
    AffSub::linear(m.rank(), &dirs)
}

/// `a ≤ b` in the global poset.
pub fn global_leq(a: &GlobalPosetElement, b: &GlobalPosetElement, gram: &GramForm) -> bool {
    match (a.tag, b.tag) {
        (Tag::H, Tag::H) => a.subspace.is_subset_of(&b.subspace),
        (Tag::E, Tag::E) => b.subspace.is_subset_of(&a.subspace),
        (Tag::H, Tag::E) => false,
        (Tag::E, Tag::H) => {
            // M⊥ is the complement of the linear span of the affine M
            let perp = b_orth_complement(&linear_span(&b.subspace), gram).expect("spans are linear");
            perp.dirs().iter().all(|d| a.subspace.dir_contains(d))
        }
    }
}

/// `u ≤ v` in the reflection-length order: `ℓ(u) + ℓ(u⁻¹v) = ℓ(v)`.
pub fn interval_leq(u: &Isometry, v: &Isometry) -> bool {
    u.reflection_length() + u.invert().compose(v).reflection_length() == v.reflection_length()
}

/// Four elements below a rank-3 corkscrew forming a bowtie.
#[derive(Clone, Debug)]
pub struct Bowtie {
    pub w: Isometry,
    pub elliptics: [Isometry; 2],
    pub hyperbolics: [Isometry; 2],
}

impl Bowtie {
    /// The six comparability claims: each elliptic below each hyperbolic,
    /// and the two elements of each pair incomparable.
    pub fn claims(&self) -> [bool; 6] {
        let g = self.w.gram();
        let e: Vec<_> = self.elliptics.iter().map(inv).collect();
        let h: Vec<_> = self.hyperbolics.iter().map(inv).collect();
        let incomparable =
            |a: &GlobalPosetElement, b: &GlobalPosetElement| !global_leq(a, b, g) && !global_leq(b, a, g);
        [
            global_leq(&e[0], &h[0], g),
            global_leq(&e[0], &h[1], g),
            global_leq(&e[1], &h[0], g),
            global_leq(&e[1], &h[1], g),
            incomparable(&h[0], &h[1]),
            incomparable(&e[0], &e[1]),
        ]
    }
}

/// Corkscrew `w(x, y, z) = (-y, x, z + 1)`, reflections across `x = 0` and
/// `x = 1`, and the glides below `w` whose move-sets are `(s, b, 1)` for
/// `b = 0, 1`.
pub fn bowtie_witness() -> Bowtie {
    let g = Arc::new(GramForm::standard(3));
    let w = Isometry::new(
        Matrix::from_int_rows(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 1]]),
        Vector::from_ints(&[0, 0, 1]),
        g.clone(),
    )
    .expect("rotation is orthogonal");
    let e1 = Vector::from_ints(&[1, 0, 0]);
    let refl = |c: i64| make_reflection(&e1, &Scalar::int(c), &g).expect("nonzero root");
    // glide across x = b/2 by (0, b, 1); then u⁻¹w is a reflection
    let glide = |b: i64| {
        let r = make_reflection(&e1, &Scalar::ratio(b, 2), &g).expect("nonzero root");
        Isometry::translation(Vector::from_ints(&[0, b, 1]), g.clone()).compose(&r)
    };
    Bowtie { elliptics: [refl(0), refl(1)], hyperbolics: [glide(0), glide(1)], w }
}
