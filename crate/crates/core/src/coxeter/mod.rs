//! Root data, Coxeter elements and axis geometry for the irreducible
//! euclidean Coxeter groups.

mod axial;
pub(crate) mod diagram;

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use axial::{axial_data, interval_reflections, AxialData, IntervalReflections};
pub use diagram::{DynkinDiagram, TypeLetter, TypeName};

use crate::error::{Error, Result};
use crate::isometry::{make_reflection, Isometry};
use crate::linalg::{nullspace, AffSub, GramForm, Scalar, Vector};

/// A reflection `s_{α,k}` of `W`, fixing `{x : g(x, α) = k}` for a positive
/// root `α` (by index) and an integer `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineRoot {
    pub root: usize,
    pub k: i64,
}

#[derive(Clone, Debug)]
pub struct CoxeterContext {
    pub diagram: DynkinDiagram,
    pub gram: Arc<GramForm>,
    pub simple_roots: Vec<Vector>,
    pub highest_root: Vector,
    /// Coefficients of the highest root.
    pub marks: Vec<i64>,
    /// Positive roots ordered by height, then lexicographically.
    pub positive_roots: Vec<Vector>,
    root_index: HashMap<Vector, usize>,
    /// `s_0` (affine) followed by `s_1, …, s_n`.
    pub simple_reflections: Vec<Isometry>,
    /// Generator indices in product order: `w = s_{o[0]} s_{o[1]} ⋯`.
    pub order: Vec<usize>,
    pub coxeter_element: Isometry,
    pub axis: AffSub,
    /// Primitive integer direction of the axis with `g(axis_dir, μ) > 0`.
    pub axis_dir: Vector,
    /// Shortest coroot-lattice vector along the axis, oriented like `μ`.
    pub period: Vector,
    pub choice: Option<(usize, usize)>,
}

fn generator_order(name: TypeName, choice: Option<(usize, usize)>) -> Vec<usize> {
    let n = name.rank;
    match (name.letter, choice) {
        (TypeLetter::A, Some((p, _))) if n >= 2 => {
            let mut o = vec![0];
            o.extend((p + 1..=n).rev());
            o.extend(1..=p);
            o
        }
        _ => (0..=n).collect(),
    }
}

/// Checks and fills in the type-A bipartition; other types take none.
fn resolve_choice(name: TypeName, choice: Option<(usize, usize)>) -> Result<Option<(usize, usize)>> {
    let n = name.rank;
    match (name.letter, choice) {
        (TypeLetter::A, None) => Ok(Some((1, n))),
        (TypeLetter::A, Some((p, q))) => {
            if p >= 1 && q >= 1 && p + q == n + 1 {
                Ok(Some((p, q)))
            } else {
                Err(Error::InvalidChoice(format!("({p},{q}) for {name}: need p,q ≥ 1 and p+q = {}", n + 1)))
            }
        }
        (_, Some(_)) => Err(Error::ChoiceNotAllowed),
        (_, None) => Ok(None),
    }
}

fn enumerate_roots(gram: &GramForm) -> Vec<Vec<i64>> {
    let n = gram.rank();
    let g = gram.matrix();
    let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        seen.insert(e.clone(), ());
        queue.push_back(e);
    }
    while let Some(b) = queue.pop_front() {
        for i in 0..n {
            // ⟨β, α_i∨⟩ = 2 g(β, α_i) / g(α_i, α_i)
            let mut s = Scalar::ZERO;
            for (j, &bj) in b.iter().enumerate() {
                if bj != 0 {
                    s += &(&g[(i, j)] * &Scalar::int(bj));
                }
            }
            let pairing = (Scalar::int(2) * &s / &g[(i, i)])
                .as_i64()
                .expect("crystallographic pairing is an integer");
            if pairing == 0 {
                continue;
            }
            let mut nb = b.clone();
            nb[i] -= pairing;
            if !seen.contains_key(&nb) {
                seen.insert(nb.clone(), ());
                queue.push_back(nb);
            }
        }
    }
    let mut pos: Vec<Vec<i64>> = seen.into_keys().filter(|r| r.iter().all(|&c| c >= 0)).collect();
    pos.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    pos
}

impl CoxeterContext {
    pub fn new(name: TypeName, choice: Option<(usize, usize)>) -> Result<Self> {
        let choice = resolve_choice(name, choice)?;
        let n = name.rank;
        let gram = Arc::new(GramForm::new(diagram::finite_gram(name))?);
        let simple_roots: Vec<Vector> = (0..n).map(|i| Vector::unit(n, i)).collect();
        let roots = enumerate_roots(&gram);
        let marks = roots.last().expect("nonempty root system").clone();
        let highest_root = Vector::from_ints(&marks);
        let positive_roots: Vec<Vector> = roots.iter().map(|r| Vector::from_ints(r)).collect();
        let root_index = positive_roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();

        let mut simple_reflections = vec![make_reflection(&highest_root, &Scalar::ONE, &gram)?];
        for a in &simple_roots {
            simple_reflections.push(make_reflection(a, &Scalar::ZERO, &gram)?);
        }

        // extended diagram from the angles between α_1..α_n and -θ
        let mut ext = vec![-&highest_root];
        ext.extend(simple_roots.iter().cloned());
        let m: Vec<Vec<u32>> = (0..=n)
            .map(|i| {
                (0..=n)
                    .map(|j| {
                        if i == j {
                            return 1;
                        }
                        let gij = gram.inner(&ext[i], &ext[j]);
                        let c = &(&gij * &gij) / &(gram.norm2(&ext[i]) * gram.norm2(&ext[j]));
                        diagram::exponent_from_cos2(&c)
                    })
                    .collect()
            })
            .collect();
        let diagram = DynkinDiagram {
            name,
            m,
            marked_white: 0,
            marked_shaded: diagram::shaded_node(name, choice),
        };

        let order = generator_order(name, choice);
        let coxeter_element = product(&simple_reflections, &order, &gram);
        let inv = coxeter_element.invariants();
        if inv.is_elliptic() || inv.refl_len != n + 1 || inv.min.dim() != Some(1) {
            return Err(Error::Internal(format!("{name}: Coxeter element is not a maximal hyperbolic")));
        }
        let axis = inv.min.clone();
        let mu = inv.mu.clone();

        let kernel = nullspace(&coxeter_element.mat().sub(&crate::linalg::Matrix::identity(n)));
        if kernel.len() != 1 {
            return Err(Error::Internal("axis direction is not one-dimensional".into()));
        }
        let mut axis_dir = kernel[0].primitive();
        if gram.inner(&axis_dir, &mu).is_negative() {
            axis_dir = -&axis_dir;
        }
        // period: Σ c_i α_i∨ ∥ d with c integral, i.e. c ∝ d_i g_ii / 2
        let coeffs = Vector(
            (0..n).map(|i| &axis_dir[i] * &gram.matrix()[(i, i)] * &Scalar::ratio(1, 2)).collect(),
        )
        .primitive();
        let period = Vector(
            (0..n).map(|i| &coeffs[i] * &Scalar::int(2) / &gram.matrix()[(i, i)]).collect(),
        );
        debug_assert!(gram.inner(&period, &mu).is_positive());

        Ok(CoxeterContext {
            diagram,
            gram,
            simple_roots,
            highest_root,
            marks,
            positive_roots,
            root_index,
            simple_reflections,
            order,
            coxeter_element,
            axis,
            axis_dir,
            period,
            choice,
        })
    }

    pub fn from_name(name: &str, choice: Option<(usize, usize)>) -> Result<Self> {
        Self::new(name.parse()?, choice)
    }

    pub fn name(&self) -> TypeName {
        self.diagram.name
    }

    pub fn rank(&self) -> usize {
        self.diagram.rank()
    }

    pub fn coroot(&self, alpha: &Vector) -> Vector {
        alpha.scale(&(Scalar::int(2) / &self.gram.norm2(alpha)))
    }

    pub fn root(&self, i: usize) -> &Vector {
        &self.positive_roots[i]
    }

    /// Index of the positive root `±v`, if `v` is a root.
    pub fn root_index(&self, v: &Vector) -> Option<(usize, bool)> {
        if let Some(&i) = self.root_index.get(v) {
            return Some((i, true));
        }
        self.root_index.get(&-v).map(|&i| (i, false))
    }

    pub fn reflection(&self, ar: AffineRoot) -> Isometry {
        make_reflection(&self.positive_roots[ar.root], &Scalar::int(ar.k), &self.gram)
            .expect("roots are nonzero")
    }

    /// Identifies a reflection of `L` as an element of `W`, if it is one.
    pub fn as_affine_root(&self, r: &Isometry) -> Option<AffineRoot> {
        let dir = r.reflection_root()?.primitive();
        let (root, _) = self.root_index(&dir)?;
        let alpha = &self.positive_roots[root];
        let fix = r.fix_set();
        let k = self.gram.inner(fix.base()?, alpha);
        let ar = AffineRoot { root, k: k.as_i64()? };
        (self.reflection(ar) == *r).then_some(ar)
    }

    pub fn is_horizontal(&self, alpha: &Vector) -> bool {
        self.gram.inner(alpha, &self.axis_dir).is_zero()
    }

    pub fn horizontal_roots(&self) -> Vec<usize> {
        (0..self.positive_roots.len()).filter(|&i| self.is_horizontal(&self.positive_roots[i])).collect()
    }

    pub fn vertical_roots(&self) -> Vec<usize> {
        (0..self.positive_roots.len()).filter(|&i| !self.is_horizontal(&self.positive_roots[i])).collect()
    }

    /// The translation `t_P` along the axis by one period.
    pub fn period_translation(&self) -> Isometry {
        Isometry::translation(self.period.clone(), self.gram.clone())
    }

    /// `g(P, α)`: how far `t_P` shifts the level `k` of hyperplanes of `α`.
    pub fn period_shift(&self, root: usize) -> i64 {
        self.gram
            .inner(&self.period, &self.positive_roots[root])
            .as_i64()
            .expect("period lies in the coroot lattice")
    }

    pub fn coxeter_element_with(&self, order: &[usize]) -> Isometry {
        product(&self.simple_reflections, order, &self.gram)
    }

    pub fn mu(&self) -> &Vector {
        &self.coxeter_element.invariants().mu
    }

    /// `(s_i s_j)^{m_ij} = 1` for all finite exponents of the extended diagram.
    pub fn check_coxeter_relations(&self) -> bool {
        let s = &self.simple_reflections;
        let k = s.len();
        for i in 0..k {
            if !s[i].compose(&s[i]).is_identity() {
                return false;
            }
            for j in i + 1..k {
                let m = self.diagram.m[i][j];
                let st = s[i].compose(&s[j]);
                let mut p = st.clone();
                let limit = if m == 0 { 12 } else { m };
                for e in 1..=limit {
                    if e > 1 {
                        p = p.compose(&st);
                    }
                    let ident = p.is_identity();
                    if ident != (m != 0 && e == m) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

pub fn build_context(name: TypeName, choice: Option<(usize, usize)>) -> Result<CoxeterContext> {
    CoxeterContext::new(name, choice)
}

fn product(gens: &[Isometry], order: &[usize], gram: &Arc<GramForm>) -> Isometry {
    order.iter().fold(Isometry::identity(gram.clone()), |acc, &i| acc.compose(&gens[i]))
}

/// The types covered by the horizontal-root table, in a fixed order.
pub fn table_types() -> Vec<(TypeName, Option<(usize, usize)>)> {
    let mut out = Vec::new();
    for n in 1..=4 {
        for p in 1..=n {
            out.push((TypeName { letter: TypeLetter::A, rank: n }, Some((p, n + 1 - p))));
        }
    }
    for s in ["B~3", "B~4", "C~2", "C~3", "C~4", "D~4", "F~4", "G~2", "E~6", "E~7", "E~8"] {
        out.push((s.parse().expect("valid name"), None));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(s: &str) -> CoxeterContext {
        CoxeterContext::from_name(s, None).unwrap()
    }

    #[test]
    fn root_counts() {
        for (s, count) in [
            ("A~3", 6),
            ("B~3", 9),
            ("C~3", 9),
            ("D~4", 12),
            ("E~6", 36),
            ("E~7", 63),
            ("E~8", 120),
            ("F~4", 24),
            ("G~2", 6),
        ] {
            assert_eq!(ctx(s).positive_roots.len(), count, "{s}");
        }
    }

    #[test]
    fn g2_angles() {
        let c = ctx("G~2");
        let mut ms: Vec<u32> = c.diagram.edges().iter().map(|e| e.2).collect();
        ms.sort();
        assert_eq!(ms, vec![3, 6]);
        // the third pair is orthogonal
        assert_eq!(c.diagram.m[0][1], 2);
        assert_eq!(c.marks, vec![3, 2]);
    }

    #[test]
    fn extended_diagrams() {
        let b3 = ctx("B~3");
        let mut e = b3.diagram.edges();
        e.sort();
        assert_eq!(e, vec![(0, 2, 3), (1, 2, 3), (2, 3, 4)]);
        let e8 = ctx("E~8");
        assert_eq!(e8.diagram.neighbours(0), vec![8]);
        assert_eq!(ctx("E~7").diagram.neighbours(0), vec![1]);
        assert_eq!(ctx("E~6").diagram.neighbours(0), vec![2]);
        assert_eq!(ctx("A~1").diagram.m[0][1], 0);
        assert_eq!(ctx("A~3").diagram.neighbours(0), vec![1, 3]);
    }

    #[test]
    fn coxeter_relations_hold() {
        for (t, ch) in table_types() {
            let c = CoxeterContext::new(t, ch).unwrap();
            assert!(c.check_coxeter_relations(), "{t}");
        }
    }

    #[test]
    fn coxeter_elements_are_maximal_hyperbolic() {
        for (t, ch) in table_types() {
            let c = CoxeterContext::new(t, ch).unwrap();
            let inv = c.coxeter_element.invariants();
            assert!(!inv.is_elliptic());
            assert_eq!(inv.refl_len, t.rank + 1);
            assert_eq!(inv.mov.dim(), Some(t.rank - 1));
            assert!(c.gram.inner(&c.period, c.mu()).is_positive());
            // period commutes with w
            let tp = c.period_translation();
            assert_eq!(tp.compose(&c.coxeter_element), c.coxeter_element.compose(&tp));
        }
    }

    #[test]
    fn a1_is_a_translation() {
        let c = ctx("A~1");
        assert!(c.coxeter_element.is_translation());
        assert_eq!(c.coxeter_element.reflection_length(), 2);
    }

    #[test]
    fn choices() {
        let name: TypeName = "B~3".parse().unwrap();
        assert_eq!(CoxeterContext::new(name, Some((1, 3))).unwrap_err(), Error::ChoiceNotAllowed);
        let a3: TypeName = "A~3".parse().unwrap();
        assert!(CoxeterContext::new(a3, Some((2, 3))).is_err());
        let c = CoxeterContext::new(a3, Some((2, 2))).unwrap();
        assert_eq!(c.order, vec![0, 3, 1, 2]);
    }

    #[test]
    fn affine_roots_roundtrip() {
        let c = ctx("C~3");
        for root in 0..c.positive_roots.len() {
            for k in -2..=2 {
                let ar = AffineRoot { root, k };
                assert_eq!(c.as_affine_root(&c.reflection(ar)), Some(ar));
            }
        }
        assert_eq!(c.as_affine_root(&c.coxeter_element), None);
    }
}
