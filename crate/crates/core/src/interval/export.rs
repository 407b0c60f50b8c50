//! JSON-lines and DOT output.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{grid_from_cells, CoarseGrid, IntervalPoset, Label, Row};
use crate::error::{Error, Result};
use crate::isometry::IsometryRecord;
use crate::linalg::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Record {
    Header { name: String, rank: usize, nodes: usize, edges: usize, periodic: bool },
    Node { id: usize, rep: IsometryRecord, invariant: bool, phi: Scalar, row: Row, column: Scalar },
    Edge { from: usize, to: usize, label: Label, name: String, voltage: i64, all_shifts: bool },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExportedNode {
    pub id: usize,
    pub rep: IsometryRecord,
    pub invariant: bool,
    pub phi: Scalar,
    pub row: Row,
    pub column: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExportedEdge {
    pub from: usize,
    pub to: usize,
    pub label: Label,
    pub name: String,
    pub voltage: i64,
    pub all_shifts: bool,
}

/// An interval read back from JSON lines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExportedInterval {
    pub name: String,
    pub rank: usize,
    pub periodic: bool,
    pub nodes: Vec<ExportedNode>,
    pub edges: Vec<ExportedEdge>,
}

impl ExportedInterval {
    pub fn coarse_grid(&self) -> CoarseGrid {
        grid_from_cells(self.nodes.iter().map(|n| (n.row, n.column.clone())), self.rank)
    }
}

fn all_shifts(p: &IntervalPoset, from: usize, to: usize) -> bool {
    p.nodes[from].invariant && !p.nodes[to].invariant
}

pub fn to_json_lines(p: &IntervalPoset) -> String {
    let mut out = String::new();
    let periodic = p.nodes.iter().any(|n| !n.invariant);
    let mut push = |r: &Record| {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    };
    push(&Record::Header {
        name: p.setting.name.clone(),
        rank: p.setting.w.rank(),
        nodes: p.len(),
        edges: p.edges.len(),
        periodic,
    });
    for (id, n) in p.nodes.iter().enumerate() {
        push(&Record::Node {
            id,
            rep: IsometryRecord::from(&n.rep),
            invariant: n.invariant,
            phi: n.phi.clone(),
            row: n.row,
            column: p.column(id),
        });
    }
    for e in &p.edges {
        push(&Record::Edge {
            from: e.from,
            to: e.to,
            label: e.label,
            name: p.setting.label_name(e.label),
            voltage: e.voltage,
            all_shifts: all_shifts(p, e.from, e.to),
        });
    }
    out
}

pub fn from_json_lines(text: &str) -> Result<ExportedInterval> {
    let mut header = None;
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: Record =
            serde_json::from_str(line).map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
        match rec {
            Record::Header { name, rank, nodes, edges, periodic } => header = Some((name, rank, nodes, edges, periodic)),
            Record::Node { id, rep, invariant, phi, row, column } => {
                nodes.push(ExportedNode { id, rep, invariant, phi, row, column })
            }
            Record::Edge { from, to, label, name, voltage, all_shifts } => {
                edges.push(ExportedEdge { from, to, label, name, voltage, all_shifts })
            }
        }
    }
    let (name, rank, n_nodes, n_edges, periodic) =
        header.ok_or_else(|| Error::Parse("missing header record".into()))?;
    if nodes.len() != n_nodes || edges.len() != n_edges {
        return Err(Error::Parse(format!(
            "header announces {n_nodes} nodes and {n_edges} edges, found {} and {}",
            nodes.len(),
            edges.len()
        )));
    }
    Ok(ExportedInterval { name, rank, periodic, nodes, edges })
}

pub fn to_dot(p: &IntervalPoset) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", p.setting.name);
    let _ = writeln!(out, "  rankdir=BT;");
    for (id, n) in p.nodes.iter().enumerate() {
        let shape = if n.invariant { "ellipse" } else { "box" };
        let _ = writeln!(
            out,
            "  n{id} [label=\"{id}\\n{} {}\", shape={shape}];",
            n.row.name(),
            p.column(id)
        );
    }
    for e in &p.edges {
        let mut label = p.setting.label_name(e.label);
        if e.voltage != 0 {
            let _ = write!(label, " @{}", e.voltage);
        }
        let style = if all_shifts(p, e.from, e.to) { ", style=dashed" } else { "" };
        let _ = writeln!(out, "  n{} -> n{} [label=\"{label}\"{style}];", e.from, e.to);
    }
    out.push_str("}\n");
    out
}
