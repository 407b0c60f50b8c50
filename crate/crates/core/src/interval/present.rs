//! Presentations read off an interval: one generator per edge label, and the
//! relations equating label words of length at most two with the same product.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{IntervalPoset, Label};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    /// Each relation is a list of words with the same value.
    pub relations: Vec<Vec<Vec<String>>>,
    /// The listed generators and relations are representatives; the full set
    /// is their orbit under the period shift.
    pub periodic: bool,
}

fn render_word(w: &[String], sep: &str) -> String {
    w.join(sep)
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.generators.iter().all(|g| g.chars().count() == 1) { "" } else { " " };
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|r| r.iter().map(|w| render_word(w, sep)).collect::<Vec<_>>().join(" = "))
            .collect();
        write!(f, "⟨{} | {}⟩", self.generators.join(", "), rels.join(", "))?;
        if self.periodic {
            write!(f, " (closed under the period shift)")?;
        }
        Ok(())
    }
}

/// Element reached from the bottom: a node and, for families, a shift.
type Elem = (usize, i64);

/// Builds the presentation. For periodic intervals, edges leaving the bottom
/// are taken at shifts in `[-window, window]`.
pub fn interval_presentation(p: &IntervalPoset, window: i64) -> Presentation {
    let s = &p.setting;
    let periodic = p.nodes.iter().any(|n| !n.invariant);
    let elem = |node: usize, shift: i64| -> Elem {
        if p.nodes[node].invariant {
            (node, 0)
        } else {
            (node, shift)
        }
    };
    let mut first: Vec<(Label, Elem)> = Vec::new();
    for &ei in &p.out_edges[p.bottom()] {
        let e = &p.edges[ei];
        if p.nodes[e.to].invariant {
            first.push((e.label, (e.to, 0)));
        } else {
            for j in -window..=window {
                first.push((s.shift_label(e.label, j), (e.to, e.voltage + j)));
            }
        }
    }
    let mut words: BTreeMap<Elem, BTreeSet<Vec<Label>>> = BTreeMap::new();
    let mut gens: BTreeSet<Label> = BTreeSet::new();
    for &(l1, y) in &first {
        gens.insert(l1);
        words.entry(y).or_default().insert(vec![l1]);
        let from_invariant = p.nodes[y.0].invariant;
        for &ei in &p.out_edges[y.0] {
            let e = &p.edges[ei];
            if from_invariant && !p.nodes[e.to].invariant {
                for j in -window..=window {
                    let l2 = s.shift_label(e.label, j);
                    words.entry((e.to, e.voltage + j)).or_default().insert(vec![l1, l2]);
                }
            } else {
                let l2 = s.shift_label(e.label, y.1);
                words.entry(elem(e.to, y.1 + e.voltage)).or_default().insert(vec![l1, l2]);
            }
        }
    }
    let names: BTreeMap<Label, String> = gens.iter().map(|&l| (l, s.label_name(l))).collect();
    let name = |l: &Label| names.get(l).cloned().unwrap_or_else(|| s.label_name(*l));
    let mut relations: Vec<Vec<Vec<String>>> = words
        .values()
        .filter(|ws| ws.len() > 1)
        .map(|ws| {
            let mut r: Vec<Vec<String>> = ws.iter().map(|w| w.iter().map(name).collect()).collect();
            r.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
            r
        })
        .collect();
    relations.sort();
    Presentation { generators: names.into_values().collect(), relations, periodic }
}
