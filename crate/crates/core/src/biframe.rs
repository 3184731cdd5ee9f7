//! Biframe pairs `(F, G)` over a discretized measure space.
//!
//! The biframe operator is `S f = Σₖ wₖ ⟨f, F(k)⟩ G(k)`, i.e.
//! `S = Σₖ wₖ · G(k) F(k)*`. Its optimal bounds are the extremal eigenvalues
//! of the Hermitian part `(S + S*)/2`, which carries the real part of the
//! quadratic form `Σₖ wₖ ⟨f, F(k)⟩ ⟨G(k), f⟩`. Self-adjointness of `S` is not
//! assumed; it is measured and reported as `hermitian_residual`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::AtomSpace;
use crate::operators::{
    self, eigen_of_hermitian_part, hermitian_residual, invert, op_norm, raw_inner, HermitianEigen,
    Operator, Scalar, Space, Vector,
};

/// Discretization of a mapping `Ω → H`: one vector per atom.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFamily {
    space: Space,
    atoms: Arc<AtomSpace>,
    vectors: Vec<Vector>,
}

impl VectorFamily {
    pub fn new(space: Space, atoms: Arc<AtomSpace>, vectors: Vec<Vector>) -> Result<Self> {
        if vectors.len() != atoms.len() {
            return Err(Error::shape(format!(
                "{} vectors for {} atoms",
                vectors.len(),
                atoms.len()
            )));
        }
        if let Some((k, v)) = vectors.iter().enumerate().find(|(_, v)| v.space() != space) {
            return Err(Error::shape(format!(
                "vector {k} lives in a space of dimension {}, expected {}",
                v.dim(),
                space.dim()
            )));
        }
        Ok(VectorFamily {
            space,
            atoms,
            vectors,
        })
    }

    /// Family over a counting space built from real coordinate rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let first = rows
            .first()
            .ok_or_else(|| Error::invalid("family needs at least one vector"))?;
        let space = Space::new(first.len(), operators::Field::Real)?;
        let atoms = Arc::new(AtomSpace::counting(rows.len())?);
        let vectors = rows
            .iter()
            .map(|r| Vector::new(space, r.iter().map(|&x| Scalar::new(x, 0.0)).collect()))
            .collect::<Result<_>>()?;
        Self::new(space, atoms, vectors)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn atom_space(&self) -> &Arc<AtomSpace> {
        &self.atoms
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Applies `t` to every vector of the family.
    pub fn map(&self, t: &Operator) -> Result<VectorFamily> {
        if t.domain() != self.space {
            return Err(Error::shape("operator domain does not match the family's space"));
        }
        let vectors = self.vectors.iter().map(|v| t.apply(v)).collect::<Result<_>>()?;
        Ok(VectorFamily {
            space: t.codomain(),
            atoms: Arc::clone(&self.atoms),
            vectors,
        })
    }

    /// Analysis operator: `f ↦ (⟨f, F(k)⟩)ₖ`.
    pub fn analysis(&self, f: &Vector) -> Result<Vec<Scalar>> {
        self.check_vector(f)?;
        Ok(self.vectors.iter().map(|v| raw_inner(f.data(), v.data())).collect())
    }

    /// Synthesis operator: `c ↦ Σₖ wₖ cₖ F(k)`, the adjoint of [`analysis`]
    /// with respect to the weighted `L²(μ)` inner product.
    ///
    /// [`analysis`]: VectorFamily::analysis
    pub fn synthesis(&self, coeffs: &[Scalar]) -> Result<Vector> {
        if coeffs.len() != self.len() {
            return Err(Error::shape(format!(
                "{} coefficients for {} atoms",
                coeffs.len(),
                self.len()
            )));
        }
        let mut acc = DVector::zeros(self.space.dim());
        for ((v, w), c) in self.vectors.iter().zip(self.atoms.weights()).zip(coeffs) {
            acc += v.data() * (c * w);
        }
        Ok(Vector::from_data(self.space, acc))
    }

    fn check_vector(&self, f: &Vector) -> Result<()> {
        if f.space() != self.space {
            return Err(Error::shape(format!(
                "vector of dimension {} does not live in the family's space of dimension {}",
                f.dim(),
                self.space.dim()
            )));
        }
        Ok(())
    }
}

/// `Σₖ wₖ cₖ · left(k) right(k)*`, the common shape of biframe operators and
/// multipliers.
pub(crate) fn weighted_outer_sum(
    left: &VectorFamily,
    right: &VectorFamily,
    coeffs: impl Iterator<Item = Scalar>,
) -> DMatrix<Scalar> {
    let n = left.space.dim();
    let mut mat = DMatrix::zeros(n, n);
    for (((l, r), w), c) in left
        .vectors
        .iter()
        .zip(&right.vectors)
        .zip(left.atoms.weights())
        .zip(coeffs)
    {
        mat += l.data() * r.data().adjoint() * (c * w);
    }
    mat
}

pub(crate) fn same_atoms(a: &Arc<AtomSpace>, b: &Arc<AtomSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// The pair `(F, G)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiframePair {
    f: VectorFamily,
    g: VectorFamily,
}

impl BiframePair {
    pub fn new(f: VectorFamily, g: VectorFamily) -> Result<Self> {
        if f.space != g.space {
            return Err(Error::shape("F and G live in different spaces"));
        }
        if !same_atoms(&f.atoms, &g.atoms) {
            return Err(Error::shape("F and G are defined over different atom spaces"));
        }
        Ok(BiframePair { f, g })
    }

    pub fn f(&self) -> &VectorFamily {
        &self.f
    }

    pub fn g(&self) -> &VectorFamily {
        &self.g
    }

    pub fn space(&self) -> Space {
        self.f.space
    }

    pub fn atom_space(&self) -> &Arc<AtomSpace> {
        &self.f.atoms
    }

    pub fn into_parts(self) -> (VectorFamily, VectorFamily) {
        (self.f, self.g)
    }
}

/// `S_{F,G}` together with its spectral data.
#[derive(Debug, Clone)]
pub struct BiframeOperator {
    pub op: Operator,
    /// `‖S − S*‖/‖S‖`, 0 for the zero operator.
    pub hermitian_residual: f64,
    /// Smallest eigenvalue of `(S + S*)/2`.
    pub lower: f64,
    /// Largest eigenvalue of `(S + S*)/2`.
    pub upper: f64,
    pub eigen: HermitianEigen,
}

pub fn assemble(pair: &BiframePair) -> BiframeOperator {
    let mat = weighted_outer_sum(&pair.g, &pair.f, std::iter::repeat(Scalar::new(1.0, 0.0)));
    BiframeOperator::from_op(Operator::on(pair.space(), mat))
}

impl BiframeOperator {
    pub(crate) fn from_op(op: Operator) -> Self {
        let eigen = eigen_of_hermitian_part(&op);
        BiframeOperator {
            hermitian_residual: hermitian_residual(&op),
            lower: eigen.min(),
            upper: eigen.max(),
            eigen,
            op,
        }
    }

    /// Relative positivity threshold: `rel_tol · |upper|`.
    pub fn threshold(&self, rel_tol: f64) -> f64 {
        rel_tol * self.upper.abs()
    }

    /// Largest `|Im⟨Sf, f⟩|` over unit `f`; zero on real spaces.
    pub fn imaginary_form_max(&self) -> f64 {
        if self.op.domain().field() == operators::Field::Real {
            return 0.0;
        }
        let skew = eigen_of_hermitian_part(&self.op.skew_part());
        skew.min().abs().max(skew.max().abs())
    }
}

/// `Σₖ wₖ ⟨f, F(k)⟩ ⟨G(k), f⟩`.
pub fn quadratic_form(pair: &BiframePair, f: &Vector) -> Result<Scalar> {
    pair.f.check_vector(f)?;
    Ok(pair
        .f
        .vectors
        .iter()
        .zip(&pair.g.vectors)
        .zip(pair.f.atoms.weights())
        .map(|((fk, gk), w)| raw_inner(f.data(), fk.data()) * raw_inner(gk.data(), f.data()) * w)
        .sum())
}

/// Verdict on a pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiframeReport {
    pub is_bessel: bool,
    pub is_biframe: bool,
    pub lower: f64,
    pub upper: f64,
    pub hermitian_residual: f64,
    pub tightness_gap: f64,
    /// Absolute positivity threshold used for `is_biframe`.
    pub threshold: f64,
    pub relative_tolerance: f64,
    /// Largest `|Im⟨Sf, f⟩|` over unit `f`; diagnostic only.
    pub imaginary_form_max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation_note: Option<String>,
}

impl BiframeReport {
    pub fn is_tight(&self, tol: f64) -> bool {
        self.is_biframe && self.tightness_gap <= tol * self.upper.abs().max(1.0)
    }
}

/// Classifies a pair. `is_biframe` holds when the lower bound exceeds
/// `rel_tol · |upper|`.
pub fn classify(pair: &BiframePair, rel_tol: f64) -> BiframeReport {
    report_for(&assemble(pair), rel_tol, pair.atom_space().truncation_note())
}

pub(crate) fn report_for(s: &BiframeOperator, rel_tol: f64, note: Option<&str>) -> BiframeReport {
    let threshold = s.threshold(rel_tol);
    BiframeReport {
        is_bessel: s.upper.is_finite(),
        is_biframe: s.lower > threshold,
        lower: s.lower,
        upper: s.upper,
        hermitian_residual: s.hermitian_residual,
        tightness_gap: s.upper - s.lower,
        threshold,
        relative_tolerance: rel_tol,
        imaginary_form_max: s.imaginary_form_max(),
        truncation_note: note.map(str::to_owned),
    }
}

/// Optimal frame bounds of a single family, i.e. the bounds of `(F, F)`.
pub fn single_frame_bounds(family: &VectorFamily) -> (f64, f64) {
    let pair = BiframePair {
        f: family.clone(),
        g: family.clone(),
    };
    let s = assemble(&pair);
    (s.lower, s.upper)
}

/// Both reconstruction formulas evaluated at `f`.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    /// `Σₖ wₖ ⟨f, (S⁻¹)* F(k)⟩ G(k)`.
    pub left: Vector,
    /// `Σₖ wₖ ⟨f, F(k)⟩ S⁻¹ G(k)`.
    pub right: Vector,
}

impl Reconstruction {
    pub fn residuals(&self, f: &Vector) -> (f64, f64) {
        (
            self.left.sub(f).map(|d| d.norm()).unwrap_or(f64::INFINITY),
            self.right.sub(f).map(|d| d.norm()).unwrap_or(f64::INFINITY),
        )
    }
}

pub fn reconstruct(pair: &BiframePair, f: &Vector, tol: f64) -> Result<Reconstruction> {
    pair.f.check_vector(f)?;
    let s = assemble(pair);
    let s_inv = invert(&s.op, tol)?;
    let s_inv_adj = s_inv.adjoint();
    let left_f = pair.f.map(&s_inv_adj)?;
    let left = pair.g.synthesis(&left_f.analysis(f)?)?;
    let right_g = pair.g.map(&s_inv)?;
    let right = right_g.synthesis(&pair.f.analysis(f)?)?;
    Ok(Reconstruction { left, right })
}

/// `(F, G) ↦ (G, F)`.
pub fn swap(pair: &BiframePair) -> BiframePair {
    BiframePair {
        f: pair.g.clone(),
        g: pair.f.clone(),
    }
}

/// `(F, G) ↦ (TF, TG)` for an invertible `T`.
pub fn transport(t: &Operator, pair: &BiframePair, tol: f64) -> Result<BiframePair> {
    if !t.is_square() || t.domain() != pair.space() {
        return Err(Error::shape("transport operator must act on the pair's space"));
    }
    invert(t, tol)?;
    BiframePair::new(pair.f.map(t)?, pair.g.map(t)?)
}

/// Outcome of comparing transported bounds against `A‖T⁻¹‖⁻²` and `B‖T‖²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportCheck {
    pub original: (f64, f64),
    pub transported: (f64, f64),
    pub implied_lower: f64,
    pub implied_upper: f64,
    /// Both operators Hermitian within tolerance and the original lower bound nonnegative.
    pub applicable: bool,
    pub holds: bool,
}

pub fn transport_check(t: &Operator, pair: &BiframePair, tol: f64) -> Result<TransportCheck> {
    let moved = transport(t, pair, tol)?;
    let s = assemble(pair);
    let s_t = assemble(&moved);
    let t_norm = op_norm(t);
    let t_inv_norm = op_norm(&invert(t, tol)?);
    let implied_lower = s.lower / (t_inv_norm * t_inv_norm);
    let implied_upper = s.upper * t_norm * t_norm;
    let applicable = s.hermitian_residual <= tol && s_t.hermitian_residual <= tol && s.lower >= 0.0;
    let slack = 1e-9 * implied_upper.abs().max(1.0);
    let holds = implied_lower <= s_t.lower + slack && s_t.upper <= implied_upper + slack;
    Ok(TransportCheck {
        original: (s.lower, s.upper),
        transported: (s_t.lower, s_t.upper),
        implied_lower,
        implied_upper,
        applicable,
        holds,
    })
}

/// `‖S − I‖`; a pair is dual exactly when this vanishes.
pub fn duality_residual(pair: &BiframePair) -> f64 {
    let s = assemble(pair);
    let id = Operator::identity(pair.space());
    op_norm(&s.op.sub(&id).expect("same space"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Canonical dual: `((S⁻¹)* F, G)` on the left, `(F, S⁻¹ G)` on the right.
pub fn canonical_dual(pair: &BiframePair, side: Side, tol: f64) -> Result<BiframePair> {
    let s = assemble(pair);
    let s_inv = invert(&s.op, tol)?;
    match side {
        Side::Left => BiframePair::new(pair.f.map(&s_inv.adjoint())?, pair.g.clone()),
        Side::Right => BiframePair::new(pair.f.clone(), pair.g.map(&s_inv)?),
    }
}
