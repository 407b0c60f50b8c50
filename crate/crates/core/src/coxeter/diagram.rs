use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeLetter {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl TypeLetter {
    pub fn from_char(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => TypeLetter::A,
            'B' => TypeLetter::B,
            'C' => TypeLetter::C,
            'D' => TypeLetter::D,
            'E' => TypeLetter::E,
            'F' => TypeLetter::F,
            'G' => TypeLetter::G,
            _ => return None,
        })
    }

    pub fn as_char(self) -> char {
        match self {
            TypeLetter::A => 'A',
            TypeLetter::B => 'B',
            TypeLetter::C => 'C',
            TypeLetter::D => 'D',
            TypeLetter::E => 'E',
            TypeLetter::F => 'F',
            TypeLetter::G => 'G',
        }
    }
}

/// An irreducible euclidean type such as `E~8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeName {
    pub letter: TypeLetter,
    pub rank: usize,
}

impl TypeName {
    pub fn new(letter: TypeLetter, rank: usize) -> Result<Self> {
        let ok = match letter {
            TypeLetter::A => rank >= 1,
            TypeLetter::B => rank >= 3,
            TypeLetter::C => rank >= 2,
            TypeLetter::D => rank >= 4,
            TypeLetter::E => (6..=8).contains(&rank),
            TypeLetter::F => rank == 4,
            TypeLetter::G => rank == 2,
        };
        if ok {
            Ok(TypeName { letter, rank })
        } else {
            Err(Error::InvalidType(format!("{}~{}", letter.as_char(), rank)))
        }
    }
}

impl fmt::Display for TypeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}~{}", self.letter.as_char(), self.rank)
    }
}

impl FromStr for TypeName {
    type Err = Error;

    /// Accepts `X~n`, and also `Xn` for convenience.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidType(s.to_string());
        let mut chars = s.chars();
        let letter = chars.next().and_then(TypeLetter::from_char).ok_or_else(bad)?;
        let rest = chars.as_str();
        let digits = rest.strip_prefix('~').unwrap_or(rest);
        let rank: usize = digits.parse().map_err(|_| bad())?;
        TypeName::new(letter, rank)
    }
}

/// Extended Dynkin diagram with nodes `0..=n`; node 0 is the extending node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynkinDiagram {
    pub name: TypeName,
    /// Coxeter exponents `m_ij` for the extended diagram; 0 encodes ∞.
    pub m: Vec<Vec<u32>>,
    pub marked_white: usize,
    pub marked_shaded: usize,
}

impl DynkinDiagram {
    pub fn rank(&self) -> usize {
        self.name.rank
    }

    pub fn nodes(&self) -> usize {
        self.m.len()
    }

    /// Pairs `i < j` joined by an edge, with the bond multiplicity `m_ij`.
    pub fn edges(&self) -> Vec<(usize, usize, u32)> {
        let k = self.nodes();
        let mut out = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                if self.m[i][j] != 2 {
                    out.push((i, j, self.m[i][j]));
                }
            }
        }
        out
    }

    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        (0..self.nodes()).filter(|&j| j != i && self.m[i][j] != 2).collect()
    }
}

/// Gram form of the finite root system in the simple-root basis
/// (Bourbaki numbering), long roots of squared length 2.
pub(crate) fn finite_gram(name: TypeName) -> Matrix {
    let n = name.rank;
    let half = Scalar::ratio(1, 2);
    let long = Scalar::int(2);
    let short = Scalar::ONE;
    let mut lengths = vec![long.clone(); n];
    let mut bonds: Vec<(usize, usize)> = Vec::new();
    match name.letter {
        TypeLetter::A => bonds.extend((1..n).map(|i| (i - 1, i))),
        TypeLetter::B => {
            bonds.extend((1..n).map(|i| (i - 1, i)));
            lengths[n - 1] = short.clone();
        }
        TypeLetter::C => {
            bonds.extend((1..n).map(|i| (i - 1, i)));
            for l in lengths.iter_mut().take(n - 1) {
                *l = short.clone();
            }
        }
        TypeLetter::D => {
            bonds.extend((1..n - 1).map(|i| (i - 1, i)));
            bonds.push((n - 3, n - 1));
        }
        TypeLetter::E => {
            bonds.push((0, 2));
            bonds.push((1, 3));
            bonds.extend((3..n).map(|i| (i - 1, i)));
        }
        TypeLetter::F => {
            bonds.extend([(0, 1), (1, 2), (2, 3)]);
            lengths[2] = short.clone();
            lengths[3] = short.clone();
        }
        TypeLetter::G => {
            bonds.push((0, 1));
            lengths[0] = Scalar::ratio(2, 3);
        }
    }
    let mut g = Matrix::zeros(n, n);
    for (i, l) in lengths.iter().enumerate() {
        g[(i, i)] = l.clone();
    }
    for (i, j) in bonds {
        let big = std::cmp::max(&lengths[i], &lengths[j]);
        let v = -&(big * &half);
        g[(i, j)] = v.clone();
        g[(j, i)] = v;
    }
    g
}

/// Node of the finite diagram (1-based) removed to get the horizontal system,
/// for fixed types; type A depends on the Coxeter element.
pub(crate) fn shaded_node(name: TypeName, choice: Option<(usize, usize)>) -> usize {
    let n = name.rank;
    match name.letter {
        TypeLetter::A => choice.map(|(p, _)| p).unwrap_or(1),
        TypeLetter::B => n - 1,
        TypeLetter::C => n,
        TypeLetter::D => n - 2,
        TypeLetter::E => 4,
        TypeLetter::F => 2,
        TypeLetter::G => 2,
    }
}

/// Coxeter exponent from `cos² = g(a,b)² / (g(a,a) g(b,b))`; 0 encodes ∞.
pub(crate) fn exponent_from_cos2(c: &Scalar) -> u32 {
    let table = [
        (Scalar::ZERO, 2),
        (Scalar::ratio(1, 4), 3),
        (Scalar::ratio(1, 2), 4),
        (Scalar::ratio(3, 4), 6),
        (Scalar::ONE, 0),
    ];
    table
        .iter()
        .find(|(v, _)| v == c)
        .map(|&(_, m)| m)
        .unwrap_or_else(|| panic!("non-crystallographic angle, cos² = {c}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names() {
        let t: TypeName = "G~2".parse().unwrap();
        assert_eq!(t, TypeName { letter: TypeLetter::G, rank: 2 });
        assert_eq!(t.to_string(), "G~2");
        assert_eq!("E~8".parse::<TypeName>().unwrap().rank, 8);
        assert_eq!("b3".parse::<TypeName>().unwrap().to_string(), "B~3");
        for bad in ["E~9", "G~3", "B~2", "D~3", "X~2", "A~0", "A~", ""] {
            assert!(bad.parse::<TypeName>().is_err(), "{bad}");
        }
    }

    #[test]
    fn grams_are_positive_definite() {
        for s in ["A~1", "A~4", "B~3", "B~5", "C~2", "C~4", "D~4", "D~6", "E~6", "E~7", "E~8", "F~4", "G~2"] {
            let t: TypeName = s.parse().unwrap();
            assert!(crate::linalg::GramForm::new(finite_gram(t)).is_ok(), "{s}");
        }
    }
}
