//! Biframes on `H₁ ⊗ H₂` over product measure spaces.
//!
//! Product atoms are ordered lexicographically, left-major: atom `(k₁, k₂)`
//! sits at index `k₁·n₂ + k₂`, matching the row layout of [`kron`].

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::biframe::{assemble, classify, report_for, BiframeOperator, BiframePair, BiframeReport, VectorFamily};
use crate::error::{Error, Result};
use crate::measure::{Atom, AtomSpace, Label};
use crate::multiplier::{build_multiplier, MultiplierOperator, SymbolFunction};
use crate::operators::{invert, kron, kron_vec, op_norm, sigma_min, Operator};

/// `(X₁ × X₂, μ₁ ⊗ μ₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductAtomSpace {
    pub left: Arc<AtomSpace>,
    pub right: Arc<AtomSpace>,
    pub product: Arc<AtomSpace>,
}

impl ProductAtomSpace {
    pub fn new(left: Arc<AtomSpace>, right: Arc<AtomSpace>) -> Self {
        let mut atoms = Vec::with_capacity(left.len() * right.len());
        for (i, a) in left.atoms().iter().enumerate() {
            for (j, b) in right.atoms().iter().enumerate() {
                atoms.push(Atom {
                    label: Label::Product(i, j),
                    weight: a.weight * b.weight,
                });
            }
        }
        let mut product = AtomSpace::from_atoms(atoms).expect("products of positive weights are positive");
        let note = match (left.truncation_note(), right.truncation_note()) {
            (Some(a), Some(b)) => Some(format!("{a} ⊗ {b}")),
            (Some(a), None) | (None, Some(a)) => Some(a.to_owned()),
            (None, None) => None,
        };
        if let Some(note) = note {
            product = product.with_truncation_note(note);
        }
        ProductAtomSpace {
            left,
            right,
            product: Arc::new(product),
        }
    }
}

/// `(F₁ ⊗ F₂)(k₁, k₂) = F₁(k₁) ⊗ F₂(k₂)`.
pub fn tensor_family(f1: &VectorFamily, f2: &VectorFamily, atoms: &ProductAtomSpace) -> Result<VectorFamily> {
    let vectors = f1
        .vectors()
        .iter()
        .flat_map(|a| f2.vectors().iter().map(move |b| kron_vec(a, b)))
        .collect();
    VectorFamily::new(f1.space().tensor(&f2.space()), Arc::clone(&atoms.product), vectors)
}

#[derive(Debug, Clone)]
pub struct TensorBiframePair {
    pub pair: BiframePair,
    pub atoms: ProductAtomSpace,
    pub factors: Option<(BiframePair, BiframePair)>,
}

impl TensorBiframePair {
    /// Largest entrywise distance between each product vector and the
    /// Kronecker product of its factor vectors; `None` without factors.
    pub fn factor_residual(&self) -> Option<f64> {
        let (p1, p2) = self.factors.as_ref()?;
        let n2 = p2.atom_space().len();
        let mut worst: f64 = 0.0;
        for (idx, (fv, gv)) in self.pair.f().vectors().iter().zip(self.pair.g().vectors()).enumerate() {
            let (k1, k2) = (idx / n2, idx % n2);
            let f = kron_vec(&p1.f().vectors()[k1], &p2.f().vectors()[k2]);
            let g = kron_vec(&p1.g().vectors()[k1], &p2.g().vectors()[k2]);
            worst = worst.max(fv.max_abs_diff(&f)).max(gv.max_abs_diff(&g));
        }
        Some(worst)
    }
}

pub fn tensor_pair(p1: &BiframePair, p2: &BiframePair) -> TensorBiframePair {
    let atoms = ProductAtomSpace::new(Arc::clone(p1.atom_space()), Arc::clone(p2.atom_space()));
    let f = tensor_family(p1.f(), p2.f(), &atoms).expect("factor families are consistent");
    let g = tensor_family(p1.g(), p2.g(), &atoms).expect("factor families are consistent");
    TensorBiframePair {
        pair: BiframePair::new(f, g).expect("product families share space and atoms"),
        atoms,
        factors: Some((p1.clone(), p2.clone())),
    }
}

/// Product bounds `(A·C, B·D)` next to the optimal bounds of the product pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorBounds {
    pub left: (f64, f64),
    pub right: (f64, f64),
    pub product_lower: f64,
    pub product_upper: f64,
    pub report: BiframeReport,
    pub factors_hermitian: bool,
    /// Agreement of the product bounds with the optimal ones (within 1e-10,
    /// relative to the upper bound); only decided for Hermitian factors.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agrees: Option<bool>,
}

pub fn tensor_bounds(p1: &BiframePair, p2: &BiframePair, rel_tol: f64) -> TensorBounds {
    let s1 = assemble(p1);
    let s2 = assemble(p2);
    let t = tensor_pair(p1, p2);
    let report = classify(&t.pair, rel_tol);
    let factors_hermitian = s1.hermitian_residual <= rel_tol && s2.hermitian_residual <= rel_tol;
    let (product_lower, product_upper) = (s1.lower * s2.lower, s1.upper * s2.upper);
    let scale = product_upper.abs().max(1.0);
    let agrees = factors_hermitian.then(|| {
        (report.lower - product_lower).abs() <= 1e-10 * scale
            && (report.upper - product_upper).abs() <= 1e-10 * scale
    });
    TensorBounds {
        left: (s1.lower, s1.upper),
        right: (s2.lower, s2.upper),
        product_lower,
        product_upper,
        report,
        factors_hermitian,
        agrees,
    }
}

/// `‖S_{F⊗G} − S₁ ⊗ S₂‖ / ‖S₁ ⊗ S₂‖` (0 when both sides vanish).
pub fn tensor_operator_check(p1: &BiframePair, p2: &BiframePair) -> f64 {
    let t = tensor_pair(p1, p2);
    let direct = assemble(&t.pair).op;
    let factored = kron(&assemble(p1).op, &assemble(p2).op);
    let denom = op_norm(&factored);
    let diff = op_norm(&direct.sub(&factored).expect("same product space"));
    if denom == 0.0 {
        diff
    } else {
        diff / denom
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SandwichVerdict {
    /// A factor operator is not Hermitian within tolerance or not positive.
    HypothesisNotMet {
        left_residual: f64,
        right_residual: f64,
        left_lower: f64,
        right_lower: f64,
    },
    Checked {
        lambda_min: f64,
        lambda_max: f64,
        lower_bound: f64,
        upper_bound: f64,
        holds: bool,
    },
}

impl SandwichVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, SandwichVerdict::Checked { holds: true, .. })
    }
}

/// Checks `A·C·I ≤ S_{F⊗G} ≤ B·D·I`.
pub fn tensor_sandwich_check(p1: &BiframePair, p2: &BiframePair, tol: f64) -> SandwichVerdict {
    let s1 = assemble(p1);
    let s2 = assemble(p2);
    if s1.hermitian_residual > tol
        || s2.hermitian_residual > tol
        || s1.lower <= s1.threshold(tol)
        || s2.lower <= s2.threshold(tol)
    {
        return SandwichVerdict::HypothesisNotMet {
            left_residual: s1.hermitian_residual,
            right_residual: s2.hermitian_residual,
            left_lower: s1.lower,
            right_lower: s2.lower,
        };
    }
    let product = assemble(&tensor_pair(p1, p2).pair);
    let (lower_bound, upper_bound) = (s1.lower * s2.lower, s1.upper * s2.upper);
    SandwichVerdict::Checked {
        lambda_min: product.lower,
        lambda_max: product.upper,
        lower_bound,
        upper_bound,
        holds: lower_bound - 1e-9 <= product.lower && product.upper <= upper_bound + 1e-9,
    }
}

#[derive(Debug, Clone)]
pub struct TensorTransport {
    pub pair: TensorBiframePair,
    pub report: BiframeReport,
    /// Both `T₁` and `T₂` pass the inversion condition check.
    pub factors_invertible: bool,
    /// `A·C·‖(T₁⊗T₂)⁻¹‖⁻²`, written as `A·C·σ_min(T₁⊗T₂)²`.
    pub implied_lower: f64,
    /// `B·D·‖T₁⊗T₂‖²`.
    pub implied_upper: f64,
    /// Whether the implied bounds enclose the optimal ones; only decided when
    /// both factor operators are Hermitian and positive semidefinite.
    pub within_implied: Option<bool>,
}

/// `((T₁⊗T₂)(F₁⊗F₂), (T₁⊗T₂)(G₁⊗G₂))`.
pub fn tensor_transport(
    t1: &Operator,
    t2: &Operator,
    p1: &BiframePair,
    p2: &BiframePair,
    tol: f64,
) -> Result<TensorTransport> {
    if t1.domain() != p1.space() || !t1.is_square() || t2.domain() != p2.space() || !t2.is_square() {
        return Err(Error::shape("transport operators must act on the factor spaces"));
    }
    let base = tensor_pair(p1, p2);
    let t = kron(t1, t2);
    let pair = BiframePair::new(base.pair.f().map(&t)?, base.pair.g().map(&t)?)?;
    let report = classify(&pair, tol);
    let factors_invertible = invert(t1, tol).is_ok() && invert(t2, tol).is_ok();
    let s1 = assemble(p1);
    let s2 = assemble(p2);
    let smin = sigma_min(&t);
    let smax = op_norm(&t);
    let implied_lower = s1.lower * s2.lower * smin * smin;
    let implied_upper = s1.upper * s2.upper * smax * smax;
    let hermitian_psd = |s: &BiframeOperator| s.hermitian_residual <= tol && s.lower >= 0.0;
    let within_implied = (hermitian_psd(&s1) && hermitian_psd(&s2)).then(|| {
        let slack = 1e-9 * implied_upper.abs().max(1.0);
        implied_lower <= report.lower + slack && report.upper <= implied_upper + slack
    });
    Ok(TensorTransport {
        pair: TensorBiframePair {
            pair,
            atoms: base.atoms,
            factors: base.factors,
        },
        report,
        factors_invertible,
        implied_lower,
        implied_upper,
        within_implied,
    })
}

/// `m(k₁, k₂) = m₁(k₁)·m₂(k₂)` on the product space.
pub fn tensor_symbol(m1: &SymbolFunction, m2: &SymbolFunction, atoms: &ProductAtomSpace) -> Result<SymbolFunction> {
    let values = m1
        .values()
        .iter()
        .flat_map(|a| m2.values().iter().map(move |b| a * b))
        .collect();
    SymbolFunction::new(Arc::clone(&atoms.product), values)
}

#[derive(Debug, Clone)]
pub struct TensorMultiplier {
    pub multiplier: MultiplierOperator,
    /// Entrywise distance from `kron(M₁, M₂)`.
    pub factorization_residual: f64,
}

/// Product-space multiplier, built directly from the product symbol and
/// product families and compared against `M₁ ⊗ M₂`.
pub fn tensor_multiplier(
    m1: &SymbolFunction,
    m2: &SymbolFunction,
    (f1, g1): (&VectorFamily, &VectorFamily),
    (f2, g2): (&VectorFamily, &VectorFamily),
) -> Result<TensorMultiplier> {
    let left = build_multiplier(m1, f1, g1)?;
    let right = build_multiplier(m2, f2, g2)?;
    let atoms = ProductAtomSpace::new(Arc::clone(f1.atom_space()), Arc::clone(f2.atom_space()));
    let m = tensor_symbol(m1, m2, &atoms)?;
    let f = tensor_family(f1, f2, &atoms)?;
    let g = tensor_family(g1, g2, &atoms)?;
    let multiplier = build_multiplier(&m, &f, &g)?;
    let factorization_residual = multiplier.op.max_abs_diff(&kron(&left.op, &right.op));
    Ok(TensorMultiplier {
        multiplier,
        factorization_residual,
    })
}

/// Report for the product pair using the product operator directly.
pub fn tensor_report(t: &TensorBiframePair, rel_tol: f64) -> BiframeReport {
    report_for(&assemble(&t.pair), rel_tol, t.atoms.product.truncation_note())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::operators::{Scalar, Space, DEFAULT_TOL};

    #[test]
    fn product_weights_multiply() {
        let l = Arc::new(AtomSpace::partition(&[2.0, 1.5, 1.2]).unwrap());
        let r = Arc::new(AtomSpace::partition(&[0.5, 3.0]).unwrap());
        let p = ProductAtomSpace::new(Arc::clone(&l), Arc::clone(&r));
        assert_eq!(p.product.len(), 6);
        assert!((p.product.total_weight() - l.total_weight() * r.total_weight()).abs() < 1e-12 * 20.0);
        assert_eq!(p.product.atoms()[3].label, Label::Product(1, 1));
        assert_eq!(p.product.atoms()[3].weight, 4.5);
    }

    #[test]
    fn tensor_fixture_bounds() {
        let (p1, p2) = corpus::tensor_factors(8);
        let b = tensor_bounds(&p1, &p2, DEFAULT_TOL);
        assert!((b.report.lower - 2.0).abs() < 1e-10);
        assert!((b.report.upper - 6.0).abs() < 1e-10);
        assert_eq!(b.agrees, Some(true));
        assert!(tensor_operator_check(&p1, &p2) <= 1e-12);
        let t = tensor_pair(&p1, &p2);
        assert_eq!(t.factor_residual(), Some(0.0));
    }

    #[test]
    fn parseval_factors() {
        let p = corpus::orthonormal_pair(2);
        let q = corpus::orthonormal_pair(3);
        let b = tensor_bounds(&p, &q, DEFAULT_TOL);
        assert!((b.report.lower - 1.0).abs() < 1e-14 && (b.report.upper - 1.0).abs() < 1e-14);
        assert_eq!(tensor_operator_check(&p, &q), 0.0);
        match tensor_sandwich_check(&p, &q, DEFAULT_TOL) {
            SandwichVerdict::Checked { lambda_min, lambda_max, holds, .. } => {
                assert!(holds);
                assert!((lambda_min - 1.0).abs() < 1e-14 && (lambda_max - 1.0).abs() < 1e-14);
            }
            other => panic!("unexpected verdict {other:?}"),
        }
    }

    #[test]
    fn non_hermitian_factor_still_factorizes() {
        let r = tensor_operator_check(&corpus::mixed_pair(), &corpus::partition_pair());
        assert!(r <= 1e-13, "{r}");
        let v = tensor_sandwich_check(&corpus::mixed_pair(), &corpus::partition_pair(), DEFAULT_TOL);
        assert!(matches!(v, SandwichVerdict::HypothesisNotMet { .. }));
        let b = tensor_bounds(&corpus::mixed_pair(), &corpus::partition_pair(), DEFAULT_TOL);
        assert_eq!(b.agrees, None);
    }

    #[test]
    fn diagonal_sandwich() {
        let p = corpus::diagonal_pair(&[1.0, 2.0]);
        let q = corpus::diagonal_pair(&[3.0, 4.0]);
        match tensor_sandwich_check(&p, &q, DEFAULT_TOL) {
            SandwichVerdict::Checked { lambda_min, lambda_max, holds, .. } => {
                assert!(holds);
                assert!((lambda_min - 3.0).abs() < 1e-13 && (lambda_max - 8.0).abs() < 1e-13);
            }
            other => panic!("unexpected verdict {other:?}"),
        }
    }

    #[test]
    fn transport_examples() {
        let p = corpus::orthonormal_pair(2);
        let q = corpus::orthonormal_pair(3);
        let i2 = Operator::identity(Space::real(2));
        let i3 = Operator::identity(Space::real(3));
        let t = tensor_transport(&i2, &i3, &p, &q, DEFAULT_TOL).unwrap();
        assert!(t.factors_invertible && t.report.is_biframe);
        assert!((t.report.lower - 1.0).abs() < 1e-14);

        let two = i2.scale(Scalar::new(2.0, 0.0));
        let t = tensor_transport(&two, &i3, &p, &q, DEFAULT_TOL).unwrap();
        assert!((t.report.lower - 4.0).abs() < 1e-13 && (t.report.upper - 4.0).abs() < 1e-13);
        assert_eq!(t.within_implied, Some(true));

        let singular = Operator::real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let t = tensor_transport(&singular, &i3, &p, &q, DEFAULT_TOL).unwrap();
        assert!(!t.factors_invertible && !t.report.is_biframe);
        assert!(t.report.lower.abs() < 1e-14);
    }

    #[test]
    fn diagonal_multiplier_factorization() {
        let f1 = corpus::orthonormal_pair(2).f().clone();
        let f2 = corpus::orthonormal_pair(2).f().clone();
        let m1 = SymbolFunction::real(Arc::clone(f1.atom_space()), &[2.0, 3.0]).unwrap();
        let m2 = SymbolFunction::real(Arc::clone(f2.atom_space()), &[1.0, 4.0]).unwrap();
        let t = tensor_multiplier(&m1, &m2, (&f1, &f1), (&f2, &f2)).unwrap();
        assert_eq!(t.multiplier.op, Operator::diag_real(&[2.0, 8.0, 3.0, 12.0]));
        assert_eq!(t.factorization_residual, 0.0);
    }

    #[test]
    fn unit_symbol_multiplier_is_kron_of_operators() {
        let p1 = corpus::mixed_pair();
        let p2 = corpus::partition_pair();
        let m1 = SymbolFunction::unit(Arc::clone(p1.atom_space()));
        let m2 = SymbolFunction::unit(Arc::clone(p2.atom_space()));
        let t = tensor_multiplier(&m1, &m2, (p1.f(), p1.g()), (p2.f(), p2.g())).unwrap();
        let expected = kron(&assemble(&p1).op, &assemble(&p2).op);
        assert!(t.multiplier.op.max_abs_diff(&expected) < 1e-13);
    }
}
