//! Horizontal root systems: roots orthogonal to the Coxeter axis.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coxeter::diagram::exponent_from_cos2;
use crate::coxeter::{CoxeterContext, DynkinDiagram, TypeLetter};
use crate::error::{Error, Result};
use crate::linalg::{GramForm, Vector};

/// Type of an irreducible spherical component, e.g. `A2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ComponentType {
    pub letter: TypeLetter,
    pub rank: usize,
}

const SUBSCRIPTS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];

fn subscript(n: usize) -> String {
    n.to_string().chars().map(|c| SUBSCRIPTS[c.to_digit(10).unwrap() as usize]).collect()
}

impl ComponentType {
    /// `A₂` rather than `A2`.
    pub fn pretty(&self) -> String {
        format!("{}{}", self.letter.as_char(), subscript(self.rank))
    }
}

impl fmt::Display for ComponentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter.as_char(), self.rank)
    }
}

/// Sorted multiset of component types.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TypeMultiset(pub Vec<ComponentType>);

impl TypeMultiset {
    fn new(mut v: Vec<ComponentType>) -> Self {
        v.sort_by_key(|c| (c.rank, c.letter));
        TypeMultiset(v)
    }

    pub fn pretty(&self) -> String {
        if self.0.is_empty() {
            return "∅".into();
        }
        self.0.iter().map(|c| c.pretty()).collect::<Vec<_>>().join(" ∪ ")
    }
}

impl fmt::Display for TypeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "empty");
        }
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    /// Indices into `RootSystem::roots`.
    pub roots: Vec<usize>,
    pub simple: Vec<Vector>,
    pub kind: ComponentType,
}

/// Positive horizontal roots split into irreducible components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystem {
    pub roots: Vec<Vector>,
    /// Index of each root in the positive roots of the context.
    pub root_ids: Vec<usize>,
    pub components: Vec<Component>,
}

impl RootSystem {
    pub fn types(&self) -> TypeMultiset {
        TypeMultiset::new(self.components.iter().map(|c| c.kind).collect())
    }

    /// Component containing the context root with index `id`.
    pub fn component_of(&self, id: usize) -> Option<usize> {
        let i = self.root_ids.iter().position(|&r| r == id)?;
        self.components.iter().position(|c| c.roots.contains(&i))
    }
}

/// Names a connected Coxeter diagram given by its exponent matrix
/// (0 encodes ∞; not expected here).
pub fn classify(m: &[Vec<u32>]) -> Result<ComponentType> {
    let n = m.len();
    let bad = || Error::Internal(format!("unrecognized diagram {m:?}"));
    let nbrs: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| j != i && m[i][j] != 2).collect()).collect();
    let edges: Vec<u32> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| m[i][j]).filter(|&x| x != 2).collect();
    if n == 0 || edges.len() != n - 1 {
        return Err(bad());
    }
    let letter = |l, rank| Ok(ComponentType { letter: l, rank });
    if n == 1 {
        return letter(TypeLetter::A, 1);
    }
    if edges.contains(&6) {
        return if n == 2 { letter(TypeLetter::G, 2) } else { Err(bad()) };
    }
    let max_deg = nbrs.iter().map(|v| v.len()).max().unwrap_or(0);
    let fours = edges.iter().filter(|&&x| x == 4).count();
    if edges.iter().any(|&x| x != 3 && x != 4) || fours > 1 {
        return Err(bad());
    }
    if fours == 1 {
        if max_deg > 2 {
            return Err(bad());
        }
        // the double bond sits at an end of the path unless the type is F4
        let at_end = (0..n).any(|i| nbrs[i].len() == 1 && m[i][nbrs[i][0]] == 4);
        return if at_end {
            letter(TypeLetter::B, n)
        } else if n == 4 {
            letter(TypeLetter::F, 4)
        } else {
            Err(bad())
        };
    }
    if max_deg <= 2 {
        return letter(TypeLetter::A, n);
    }
    let branches: Vec<usize> = (0..n).filter(|&i| nbrs[i].len() == 3).collect();
    if branches.len() != 1 || max_deg > 3 {
        return Err(bad());
    }
    let b = branches[0];
    let mut arms: Vec<usize> = nbrs[b]
        .iter()
        .map(|&start| {
            let (mut prev, mut cur, mut len) = (b, start, 1);
            loop {
                let next: Vec<usize> = nbrs[cur].iter().copied().filter(|&x| x != prev).collect();
                if next.is_empty() {
                    return len;
                }
                prev = cur;
                cur = next[0];
                len += 1;
            }
        })
        .collect();
    arms.sort();
    match arms.as_slice() {
        [1, 1, _] => letter(TypeLetter::D, n),
        [1, 2, 2] | [1, 2, 3] | [1, 2, 4] => letter(TypeLetter::E, n),
        _ => Err(bad()),
    }
}

fn exponents(simple: &[Vector], g: &GramForm) -> Vec<Vec<u32>> {
    let k = simple.len();
    let mut m = vec![vec![1u32; k]; k];
    for i in 0..k {
        for j in 0..k {
            if i != j {
                let ip = g.inner(&simple[i], &simple[j]);
                let c2 = &ip * &ip / (g.norm2(&simple[i]) * g.norm2(&simple[j]));
                m[i][j] = exponent_from_cos2(&c2);
            }
        }
    }
    m
}

fn connected_components(k: usize, adjacent: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut comp = vec![usize::MAX; k];
    let mut out = Vec::new();
    for s in 0..k {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for (y, c) in comp.iter_mut().enumerate() {
                if *c == usize::MAX && adjacent(x, y) {
                    *c = id;
                    members.push(y);
                }
            }
            i += 1;
        }
        members.sort();
        out.push(members);
    }
    out
}

/// Roots `α` with `g(α, axis direction) = 0`, grouped into components.
pub fn horizontal_roots_direct(ctx: &CoxeterContext) -> Result<RootSystem> {
    let g = &ctx.gram;
    let root_ids = ctx.horizontal_roots();
    let roots: Vec<Vector> = root_ids.iter().map(|&i| ctx.root(i).clone()).collect();
    let parts = connected_components(roots.len(), |a, b| !g.inner(&roots[a], &roots[b]).is_zero());
    let mut components = Vec::new();
    for part in parts {
        let members: Vec<&Vector> = part.iter().map(|&i| &roots[i]).collect();
        // with the induced positive system, simple roots are the indecomposable ones
        let simple: Vec<Vector> = members
            .iter()
            .filter(|a| !members.iter().any(|b| members.iter().any(|c| &(*b + *c) == **a)))
            .map(|a| (*a).clone())
            .collect();
        let kind = classify(&exponents(&simple, g))?;
        components.push(Component { roots: part, simple, kind });
    }
    components.sort_by_key(|c| (c.kind.rank, c.roots.clone()));
    Ok(RootSystem { roots, root_ids, components })
}

/// Component types left after deleting the extending node and the shaded
/// node from the extended diagram.
pub fn horizontal_roots_surgery(d: &DynkinDiagram) -> Result<TypeMultiset> {
    remove_nodes(d, &[d.marked_white, d.marked_shaded])
}

pub fn remove_nodes(d: &DynkinDiagram, removed: &[usize]) -> Result<TypeMultiset> {
    for &r in removed {
        if r >= d.nodes() {
            return Err(Error::InvalidRemoval(r));
        }
    }
    let keep: Vec<usize> = (0..d.nodes()).filter(|i| !removed.contains(i)).collect();
    let parts = connected_components(keep.len(), |a, b| a != b && d.m[keep[a]][keep[b]] != 2);
    let mut out = Vec::new();
    for part in parts {
        let m: Vec<Vec<u32>> =
            part.iter().map(|&a| part.iter().map(|&b| if a == b { 1 } else { d.m[keep[a]][keep[b]] }).collect()).collect();
        out.push(classify(&m)?);
    }
    Ok(TypeMultiset::new(out))
}

/// The Coxeter interval is predicted to be a lattice iff the horizontal root
/// system has at most one component.
pub fn predict_lattice(ctx: &CoxeterContext) -> Result<bool> {
    Ok(horizontal_roots_direct(ctx)?.components.len() <= 1)
}

/// Counts of each component type, e.g. `{A1: 2, A2: 1}`.
pub fn type_counts(t: &TypeMultiset) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for c in &t.0 {
        *out.entry(c.to_string()).or_default() += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::table_types;

    fn direct(s: &str, choice: Option<(usize, usize)>) -> String {
        let c = CoxeterContext::from_name(s, choice).unwrap();
        horizontal_roots_direct(&c).unwrap().types().to_string()
    }

    #[test]
    fn table_rows() {
        assert_eq!(direct("E~8", None), "A1 + A2 + A4");
        assert_eq!(direct("E~7", None), "A1 + A2 + A3");
        assert_eq!(direct("E~6", None), "A1 + A2 + A2");
        assert_eq!(direct("F~4", None), "A1 + A2");
        assert_eq!(direct("G~2", None), "A1");
        assert_eq!(direct("C~3", None), "A2");
        assert_eq!(direct("C~4", None), "A3");
        assert_eq!(direct("B~4", None), "A1 + A2");
        assert_eq!(direct("D~4", None), "A1 + A1 + A1");
        assert_eq!(direct("D~5", None), "A1 + A1 + A2");
        assert_eq!(direct("A~3", Some((2, 2))), "A1 + A1");
        assert_eq!(direct("A~3", Some((1, 3))), "A2");
        assert_eq!(direct("A~1", Some((1, 1))), "empty");
    }

    #[test]
    fn surgery_matches_direct() {
        for (t, ch) in table_types() {
            let c = CoxeterContext::new(t, ch).unwrap();
            let d = horizontal_roots_direct(&c).unwrap().types();
            let s = horizontal_roots_surgery(&c.diagram).unwrap();
            assert_eq!(d, s, "{t} {ch:?}");
        }
    }

    #[test]
    fn predictions() {
        let p = |s: &str, ch| predict_lattice(&CoxeterContext::from_name(s, ch).unwrap()).unwrap();
        assert!(p("C~3", None));
        assert!(p("G~2", None));
        assert!(p("A~3", Some((1, 3))));
        assert!(!p("A~3", Some((2, 2))));
        for s in ["B~3", "D~4", "F~4", "E~6", "E~7", "E~8"] {
            assert!(!p(s, None), "{s}");
        }
    }

    #[test]
    fn classify_shapes() {
        let matrix = |n: usize, entry: &dyn Fn(usize, usize) -> u32| -> Vec<Vec<u32>> {
            (0..n).map(|i| (0..n).map(|j| if i == j { 1 } else { entry(i.min(j), i.max(j)) }).collect()).collect()
        };
        let path = |n: usize, last: u32| {
            matrix(n, &|i, j| match j - i {
                1 if j == n - 1 => last,
                1 => 3,
                _ => 2,
            })
        };
        assert_eq!(classify(&path(3, 3)).unwrap().to_string(), "A3");
        assert_eq!(classify(&path(3, 4)).unwrap().to_string(), "B3");
        assert_eq!(classify(&path(2, 6)).unwrap().to_string(), "G2");
        let d4 = matrix(4, &|i, _| if i == 0 { 3 } else { 2 });
        assert_eq!(classify(&d4).unwrap().to_string(), "D4");
        assert_eq!(TypeMultiset::new(vec![classify(&d4).unwrap()]).pretty(), "D₄");
    }

    #[test]
    fn invalid_removal() {
        let c = CoxeterContext::from_name("G~2", None).unwrap();
        assert!(matches!(remove_nodes(&c.diagram, &[7]), Err(Error::InvalidRemoval(7))));
    }
}
