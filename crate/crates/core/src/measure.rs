//! Discretized measure spaces.
//!
//! An [`AtomSpace`] is a finite list of atoms with strictly positive weights.
//! It stands in for a measure space `(Ω, μ)`: counting measures, partitions
//! into cells of known measure, and quadrature rules on an interval all reduce
//! to this one representation. Infinite σ-finite spaces are handled by the
//! caller truncating to finitely many atoms.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opaque identifier attached to an atom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Index(usize),
    /// Node coordinate of a quadrature rule.
    Node(f64),
    /// Lexicographic position `(left, right)` in a product space.
    Product(usize, usize),
}

impl Label {
    fn key(&self) -> (u8, u64, u64) {
        match *self {
            Label::Index(i) => (0, i as u64, 0),
            Label::Node(x) => (1, x.to_bits(), 0),
            Label::Product(i, j) => (2, i as u64, j as u64),
        }
    }

    /// Node coordinate, if this atom came from a quadrature rule.
    pub fn node(&self) -> Option<f64> {
        match *self {
            Label::Node(x) => Some(x),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Index(i) => write!(f, "{i}"),
            Label::Node(x) => write!(f, "x={x}"),
            Label::Product(i, j) => write!(f, "({i},{j})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub label: Label,
    pub weight: f64,
}

/// Finite measure space: ordered atoms with positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomSpace {
    atoms: Vec<Atom>,
    total_weight: f64,
    truncation: Option<String>,
}

impl AtomSpace {
    /// Builds a space from explicit atoms, checking positivity and label uniqueness.
    pub fn from_atoms(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::invalid("an atom space needs at least one atom"));
        }
        let mut seen = HashSet::with_capacity(atoms.len());
        for (k, atom) in atoms.iter().enumerate() {
            if !(atom.weight > 0.0) || !atom.weight.is_finite() {
                return Err(Error::invalid(format!(
                    "atom {k} has weight {}; weights must be finite and > 0",
                    atom.weight
                )));
            }
            if !seen.insert(atom.label.key()) {
                return Err(Error::invalid(format!("duplicate atom label {}", atom.label)));
            }
        }
        let total_weight = atoms.iter().map(|a| a.weight).sum();
        Ok(AtomSpace {
            atoms,
            total_weight,
            truncation: None,
        })
    }

    /// Counting measure on `n` points labelled `0..n`.
    pub fn counting(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("counting space needs n >= 1"));
        }
        Self::from_atoms(
            (0..n)
                .map(|i| Atom {
                    label: Label::Index(i),
                    weight: 1.0,
                })
                .collect(),
        )
    }

    /// One atom per partition cell, weighted by the cell's measure.
    pub fn partition(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("partition needs at least one cell"));
        }
        Self::from_atoms(
            weights
                .iter()
                .enumerate()
                .map(|(i, &weight)| Atom {
                    label: Label::Index(i),
                    weight,
                })
                .collect(),
        )
    }

    /// Attaches a note recording how an infinite space was cut down.
    pub fn with_truncation_note(mut self, note: impl Into<String>) -> Self {
        self.truncation = Some(note.into());
        self
    }

    pub fn truncation_note(&self) -> Option<&str> {
        self.truncation.as_deref()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn weights(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.atoms.iter().map(|a| a.weight)
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Integrates a per-atom sample: `Σ wₖ·values[k]`.
    pub fn integrate(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.len() {
            return Err(Error::shape(format!(
                "{} samples for {} atoms",
                values.len(),
                self.len()
            )));
        }
        Ok(self.weights().zip(values).map(|(w, v)| w * v).sum())
    }

    /// Integrates a function of the node coordinate. Atoms without a node
    /// label are evaluated at their index.
    pub fn integrate_fn(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.atoms
            .iter()
            .map(|a| {
                let x = match a.label {
                    Label::Node(x) => x,
                    Label::Index(i) => i as f64,
                    Label::Product(i, _) => i as f64,
                };
                a.weight * f(x)
            })
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureKind {
    MidpointComposite,
    GaussLegendre,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    pub node_count: usize,
    pub lo: f64,
    pub hi: f64,
}

impl QuadratureRule {
    pub fn new(kind: QuadratureKind, node_count: usize, lo: f64, hi: f64) -> Self {
        QuadratureRule {
            kind,
            node_count,
            lo,
            hi,
        }
    }

    pub fn gauss_legendre(node_count: usize, lo: f64, hi: f64) -> Self {
        Self::new(QuadratureKind::GaussLegendre, node_count, lo, hi)
    }

    pub fn midpoint(node_count: usize, lo: f64, hi: f64) -> Self {
        Self::new(QuadratureKind::MidpointComposite, node_count, lo, hi)
    }

    /// Generates the atom space, labelling each atom with its node coordinate.
    pub fn build(&self) -> Result<AtomSpace> {
        if self.node_count == 0 {
            return Err(Error::invalid("quadrature needs at least one node"));
        }
        if !(self.lo < self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::invalid(format!(
                "interval [{}, {}] must be finite with lo < hi",
                self.lo, self.hi
            )));
        }
        let (nodes, weights) = match self.kind {
            QuadratureKind::MidpointComposite => midpoint_nodes(self.node_count, self.lo, self.hi),
            QuadratureKind::GaussLegendre => {
                let (x, w) = gauss_legendre_reference(self.node_count);
                let half = 0.5 * (self.hi - self.lo);
                let mid = 0.5 * (self.hi + self.lo);
                (
                    x.iter().map(|&t| mid + half * t).collect(),
                    w.iter().map(|&v| half * v).collect(),
                )
            }
        };
        AtomSpace::from_atoms(
            nodes
                .into_iter()
                .zip(weights)
                .map(|(x, weight)| Atom {
                    label: Label::Node(x),
                    weight,
                })
                .collect(),
        )
    }
}

fn midpoint_nodes(n: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    let h = (hi - lo) / n as f64;
    let nodes = (0..n).map(|i| lo + (i as f64 + 0.5) * h).collect();
    (nodes, vec![h; n])
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1], ascending.
///
/// Newton iteration on the three-term recurrence, started from the
/// Tricomi approximation of each root.
fn gauss_legendre_reference(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
