//! Bessel multipliers `M_{m,F,G} f = Σₖ wₖ m(k) ⟨f, F(k)⟩ G(k)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::biframe::{
    same_atoms, single_frame_bounds, weighted_outer_sum, BiframePair, VectorFamily,
};
use crate::error::{Error, Result};
use crate::measure::AtomSpace;
use crate::operators::{invert, op_norm, sigma_min, Field, Operator, Scalar, Vector};

/// Discretized symbol `m : Ω → ℂ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolFunction {
    atoms: Arc<AtomSpace>,
    values: Vec<Scalar>,
    sup_norm: f64,
}

impl SymbolFunction {
    pub fn new(atoms: Arc<AtomSpace>, values: Vec<Scalar>) -> Result<Self> {
        if values.len() != atoms.len() {
            return Err(Error::shape(format!(
                "symbol has {} values for {} atoms",
                values.len(),
                atoms.len()
            )));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("symbol values must be finite"));
        }
        let sup_norm = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Ok(SymbolFunction {
            atoms,
            values,
            sup_norm,
        })
    }

    pub fn real(atoms: Arc<AtomSpace>, values: &[f64]) -> Result<Self> {
        Self::new(atoms, values.iter().map(|&x| Scalar::new(x, 0.0)).collect())
    }

    /// `m ≡ c`.
    pub fn constant(atoms: Arc<AtomSpace>, c: Scalar) -> Self {
        let n = atoms.len();
        Self::new(atoms, vec![c; n]).expect("constant symbol is well formed")
    }

    pub fn unit(atoms: Arc<AtomSpace>) -> Self {
        Self::constant(atoms, Scalar::new(1.0, 0.0))
    }

    pub fn atom_space(&self) -> &Arc<AtomSpace> {
        &self.atoms
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    pub fn conj(&self) -> SymbolFunction {
        SymbolFunction {
            atoms: Arc::clone(&self.atoms),
            values: self.values.iter().map(|z| z.conj()).collect(),
            sup_norm: self.sup_norm,
        }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: Scalar, other: &SymbolFunction, b: Scalar) -> Result<SymbolFunction> {
        if !same_atoms(&self.atoms, &other.atoms) {
            return Err(Error::shape("symbols live on different atom spaces"));
        }
        Self::new(
            Arc::clone(&self.atoms),
            self.values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
    }
}

#[derive(Debug, Clone)]
pub struct MultiplierOperator {
    pub op: Operator,
    pub symbol: SymbolFunction,
    /// Bessel bound of `(F, F)`.
    pub bessel_f: f64,
    /// Bessel bound of `(G, G)`.
    pub bessel_g: f64,
    /// `‖m‖_∞ · √(B₁B₂)`.
    pub norm_bound: f64,
    pub actual_norm: f64,
}

impl MultiplierOperator {
    /// `actual_norm ≤ norm_bound` up to a relative slack of 1e-9.
    pub fn within_norm_bound(&self) -> bool {
        self.actual_norm <= self.norm_bound + 1e-9 * self.norm_bound.max(f64::MIN_POSITIVE)
    }
}

fn check_aligned(m: &SymbolFunction, f: &VectorFamily, g: &VectorFamily) -> Result<()> {
    if f.space() != g.space() {
        return Err(Error::shape("F and G live in different spaces"));
    }
    if !same_atoms(f.atom_space(), g.atom_space()) || !same_atoms(m.atom_space(), f.atom_space()) {
        return Err(Error::shape("symbol and families are defined over different atom spaces"));
    }
    if f.space().field() == Field::Real && m.values.iter().any(|z| z.im != 0.0) {
        return Err(Error::invalid("complex symbol over a real space; use a complex space"));
    }
    Ok(())
}

/// Builds `M_{m,F,G}` with the optimal Bessel bounds of `F` and `G`.
pub fn build_multiplier(m: &SymbolFunction, f: &VectorFamily, g: &VectorFamily) -> Result<MultiplierOperator> {
    build_multiplier_with_bounds(m, f, g, None)
}

/// As [`build_multiplier`], optionally overriding the Bessel bounds `(B₁, B₂)`
/// with caller-supplied (possibly looser) values.
pub fn build_multiplier_with_bounds(
    m: &SymbolFunction,
    f: &VectorFamily,
    g: &VectorFamily,
    bessel_override: Option<(f64, f64)>,
) -> Result<MultiplierOperator> {
    check_aligned(m, f, g)?;
    let mat = weighted_outer_sum(g, f, m.values.iter().copied());
    let op = Operator::new(f.space(), f.space(), mat)?;
    let (bessel_f, bessel_g) = match bessel_override {
        Some(bounds) => bounds,
        None => (single_frame_bounds(f).1, single_frame_bounds(g).1),
    };
    // eigenvalue rounding can leave a PSD bound at −ε
    let norm_bound = m.sup_norm * (bessel_f.max(0.0) * bessel_g.max(0.0)).sqrt();
    Ok(MultiplierOperator {
        actual_norm: op_norm(&op),
        op,
        symbol: m.clone(),
        bessel_f,
        bessel_g,
        norm_bound,
    })
}

/// The adjoint `M*` with the two consistency measurements taken on it.
#[derive(Debug, Clone)]
pub struct AdjointCheck {
    pub adjoint: Operator,
    /// `max |⟨M eᵢ, eⱼ⟩ − ⟨eᵢ, M* eⱼ⟩|` over basis pairs.
    pub basis_residual: f64,
    /// Entrywise distance from `M_{conj(m), G, F}`.
    pub swapped_residual: f64,
    /// Entrywise distance from `M_{conj(m), F, G}` (families unchanged).
    pub unswapped_residual: f64,
}

pub fn multiplier_adjoint(m: &MultiplierOperator, f: &VectorFamily, g: &VectorFamily) -> Result<AdjointCheck> {
    let adjoint = m.op.adjoint();
    let space = m.op.domain();
    let basis: Vec<Vector> = (0..space.dim()).map(|i| Vector::basis(space, i)).collect();
    let mut basis_residual: f64 = 0.0;
    for ei in &basis {
        let m_ei = m.op.apply(ei)?;
        for ej in &basis {
            let lhs = crate::operators::inner(&m_ei, ej)?;
            let rhs = crate::operators::inner(ei, &adjoint.apply(ej)?)?;
            basis_residual = basis_residual.max((lhs - rhs).norm());
        }
    }
    let conj = m.symbol.conj();
    let swapped = build_multiplier(&conj, g, f)?;
    let unswapped = build_multiplier(&conj, f, g)?;
    Ok(AdjointCheck {
        swapped_residual: adjoint.max_abs_diff(&swapped.op),
        unswapped_residual: adjoint.max_abs_diff(&unswapped.op),
        basis_residual,
        adjoint,
    })
}

/// `‖Mf‖ ≥ D‖f‖ ⇒ (F, F)` has lower bound `D²/(‖m‖²_∞ B₂)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundCertificate {
    /// `σ_min(M)`.
    pub d: f64,
    pub implied_lower: f64,
    /// Optimal lower bound of `(F, F)`.
    pub actual_lower: f64,
    pub holds: bool,
}

pub fn lower_bound_certificate(
    m: &MultiplierOperator,
    f: &VectorFamily,
    _g: &VectorFamily,
) -> LowerBoundCertificate {
    let d = sigma_min(&m.op);
    let denom = m.symbol.sup_norm.powi(2) * m.bessel_g;
    let implied_lower = if denom > 0.0 { d * d / denom } else { 0.0 };
    let actual_lower = single_frame_bounds(f).0;
    LowerBoundCertificate {
        d,
        implied_lower,
        actual_lower,
        holds: actual_lower >= implied_lower - 1e-9,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundComparison {
    pub implied_lower: f64,
    pub actual_lower: f64,
    pub holds: bool,
}

impl BoundComparison {
    fn new(implied_lower: f64, actual_lower: f64) -> Self {
        BoundComparison {
            implied_lower,
            actual_lower,
            holds: actual_lower >= implied_lower - 1e-9,
        }
    }
}

/// Certificate from the perturbation hypothesis
/// `‖f − Mf‖ ≤ λ₁‖f‖ + λ₂‖Mf‖` for all `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationCertificate {
    pub lambda1: f64,
    pub lambda2: f64,
    /// `‖I − M‖`.
    pub hypothesis_lhs: f64,
    /// `λ₁ + λ₂·σ_min(M)` for `λ₂ ≥ 0`, `λ₁ + λ₂·‖M‖` for `λ₂ < 0`.
    pub hypothesis_rhs: f64,
    /// The sufficient operator-norm condition passed. When false, no bound is claimed.
    pub accepted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ff: Option<BoundComparison>,
    /// Only for `λ₂ = 0`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gg: Option<BoundComparison>,
}

pub fn perturbation_certificate(
    m: &MultiplierOperator,
    f: &VectorFamily,
    g: &VectorFamily,
    lambda1: f64,
    lambda2: f64,
) -> Result<PerturbationCertificate> {
    if !(lambda1 < 1.0) || !(lambda2 > -1.0) || !lambda1.is_finite() || !lambda2.is_finite() {
        return Err(Error::invalid(format!(
            "need λ₁ < 1 and λ₂ > −1, got λ₁ = {lambda1}, λ₂ = {lambda2}"
        )));
    }
    let space = m.op.domain();
    let residual = Operator::identity(space).sub(&m.op)?;
    let hypothesis_lhs = op_norm(&residual);
    // ‖Mf‖ ∈ [σ_min‖f‖, ‖M‖‖f‖]; pick the end that makes the bound hold for every f
    let hypothesis_rhs = if lambda2 >= 0.0 {
        lambda1 + lambda2 * sigma_min(&m.op)
    } else {
        lambda1 + lambda2 * m.actual_norm
    };
    let accepted = hypothesis_lhs <= hypothesis_rhs + 4.0 * f64::EPSILON * hypothesis_rhs.abs().max(1.0);
    if !accepted {
        return Ok(PerturbationCertificate {
            lambda1,
            lambda2,
            hypothesis_lhs,
            hypothesis_rhs,
            accepted,
            ff: None,
            gg: None,
        });
    }
    let m2 = m.symbol.sup_norm.powi(2);
    let ff_implied = if m2 * m.bessel_g > 0.0 {
        (1.0 - lambda1).powi(2) / (m2 * m.bessel_g * (1.0 + lambda2).powi(2))
    } else {
        0.0
    };
    let ff = BoundComparison::new(ff_implied, single_frame_bounds(f).0);
    let gg = (lambda2 == 0.0 && lambda1 >= 0.0).then(|| {
        let implied = if m2 * m.bessel_f > 0.0 {
            (1.0 - lambda1).powi(2) / (m2 * m.bessel_f)
        } else {
            0.0
        };
        BoundComparison::new(implied, single_frame_bounds(g).0)
    });
    Ok(PerturbationCertificate {
        lambda1,
        lambda2,
        hypothesis_lhs,
        hypothesis_rhs,
        accepted,
        ff: Some(ff),
        gg,
    })
}

/// Dual pair `(F′, G)` with `F′(k) = (M⁻¹)* conj(m(k)) F(k)`.
pub fn multiplier_dual(
    m: &MultiplierOperator,
    symbol: &SymbolFunction,
    f: &VectorFamily,
    g: &VectorFamily,
    tol: f64,
) -> Result<BiframePair> {
    check_aligned(symbol, f, g)?;
    let inv_adj = invert(&m.op, tol)?.adjoint();
    let vectors = f
        .vectors()
        .iter()
        .zip(symbol.values())
        .map(|(v, mk)| inv_adj.apply(&v.scale(mk.conj())))
        .collect::<Result<Vec<_>>>()?;
    let f_dual = VectorFamily::new(f.space(), Arc::clone(f.atom_space()), vectors)?;
    BiframePair::new(f_dual, g.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biframe::{assemble, duality_residual};
    use crate::corpus;
    use crate::operators::{Space, DEFAULT_TOL};

    fn basis_family(n: usize) -> VectorFamily {
        corpus::orthonormal_pair(n).f().clone()
    }

    #[test]
    fn unit_symbol_on_orthonormal_basis() {
        let f = basis_family(3);
        let m = SymbolFunction::unit(Arc::clone(f.atom_space()));
        let mult = build_multiplier(&m, &f, &f).unwrap();
        assert_eq!(mult.op, Operator::identity(Space::real(3)));
        assert!((mult.actual_norm - 1.0).abs() < 1e-14);
        assert!((mult.norm_bound - 1.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_symbol_reaches_norm_bound() {
        let f = basis_family(3);
        let m = SymbolFunction::real(Arc::clone(f.atom_space()), &[2.0, 3.0, 4.0]).unwrap();
        let mult = build_multiplier(&m, &f, &f).unwrap();
        assert_eq!(mult.op, Operator::diag_real(&[2.0, 3.0, 4.0]));
        assert!((mult.actual_norm - 4.0).abs() < 1e-13);
        assert!((mult.norm_bound - 4.0).abs() < 1e-13);
        assert!(mult.within_norm_bound());
    }

    #[test]
    fn unit_symbol_reduces_to_biframe_operator() {
        let pair = corpus::mixed_pair();
        let m = SymbolFunction::unit(Arc::clone(pair.atom_space()));
        let mult = build_multiplier(&m, pair.f(), pair.g()).unwrap();
        assert_eq!(mult.op, assemble(&pair).op);
        assert!(mult.within_norm_bound());
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let pair = corpus::mixed_pair();
        let other = Arc::new(AtomSpace::counting(4).unwrap());
        let m = SymbolFunction::unit(other);
        assert!(matches!(build_multiplier(&m, pair.f(), pair.g()), Err(Error::Shape(_))));
        assert!(SymbolFunction::real(Arc::clone(pair.atom_space()), &[1.0]).is_err());
    }

    #[test]
    fn adjoint_of_real_multiplier() {
        let pair = corpus::mixed_pair();
        let m = SymbolFunction::unit(Arc::clone(pair.atom_space()));
        let mult = build_multiplier(&m, pair.f(), pair.g()).unwrap();
        let check = multiplier_adjoint(&mult, pair.f(), pair.g()).unwrap();
        assert_eq!(check.adjoint, corpus::mixed_matrix().adjoint());
        assert!(check.swapped_residual < 1e-13);
        // families unchanged gives S itself, not its transpose
        assert!(check.unswapped_residual > 1.0);
        assert_eq!(check.basis_residual, 0.0);

        let f = basis_family(3);
        let m = SymbolFunction::real(Arc::clone(f.atom_space()), &[1.0, -2.0, 0.5]).unwrap();
        let mult = build_multiplier(&m, &f, &f).unwrap();
        assert_eq!(multiplier_adjoint(&mult, &f, &f).unwrap().adjoint, mult.op);
    }

    #[test]
    fn lower_bound_certificates() {
        let f = basis_family(3);
        let m = SymbolFunction::unit(Arc::clone(f.atom_space()));
        let cert = lower_bound_certificate(&build_multiplier(&m, &f, &f).unwrap(), &f, &f);
        assert!((cert.d - 1.0).abs() < 1e-14);
        assert!((cert.implied_lower - 1.0).abs() < 1e-13);
        assert!((cert.actual_lower - 1.0).abs() < 1e-14);
        assert!(cert.holds);

        let zero = SymbolFunction::constant(Arc::clone(f.atom_space()), Scalar::new(0.0, 0.0));
        let cert = lower_bound_certificate(&build_multiplier(&zero, &f, &f).unwrap(), &f, &f);
        assert_eq!((cert.d, cert.implied_lower), (0.0, 0.0));
        assert!(cert.holds);

        let pair = corpus::mixed_pair();
        let m = SymbolFunction::unit(Arc::clone(pair.atom_space()));
        let mult = build_multiplier(&m, pair.f(), pair.g()).unwrap();
        let cert = lower_bound_certificate(&mult, pair.f(), pair.g());
        assert!(cert.holds);
        assert!(cert.d > 0.0 && cert.implied_lower <= cert.actual_lower);
    }

    #[test]
    fn perturbation_certificates() {
        let f = basis_family(3);
        let m = SymbolFunction::unit(Arc::clone(f.atom_space()));
        let mult = build_multiplier(&m, &f, &f).unwrap();
        let cert = perturbation_certificate(&mult, &f, &f, 0.0, 0.0).unwrap();
        assert!(cert.accepted);
        let ff = cert.ff.unwrap();
        assert!((ff.implied_lower - 1.0).abs() < 1e-13 && (ff.actual_lower - 1.0).abs() < 1e-14);

        let m = SymbolFunction::real(Arc::clone(f.atom_space()), &[0.9, 1.0, 1.1]).unwrap();
        let mult = build_multiplier(&m, &f, &f).unwrap();
        let cert = perturbation_certificate(&mult, &f, &f, 0.1, 0.0).unwrap();
        assert!(cert.accepted);
        let ff = cert.ff.unwrap();
        assert!((ff.implied_lower - 0.81 / 1.21).abs() < 1e-12);
        assert!(ff.holds);
        assert!(cert.gg.unwrap().holds);

        // λ₁ = 0.05 is too small for ‖I − M‖ = 0.1
        let cert = perturbation_certificate(&mult, &f, &f, 0.05, 0.0).unwrap();
        assert!(!cert.accepted && cert.ff.is_none());

        assert!(matches!(
            perturbation_certificate(&mult, &f, &f, 1.5, 0.0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(perturbation_certificate(&mult, &f, &f, 0.0, -1.0).is_err());
    }

    #[test]
    fn multiplier_duals() {
        let f = basis_family(3);
        let m = SymbolFunction::unit(Arc::clone(f.atom_space()));
        let mult = build_multiplier(&m, &f, &f).unwrap();
        let dual = multiplier_dual(&mult, &m, &f, &f, DEFAULT_TOL).unwrap();
        assert_eq!(dual.f(), &f);
        assert_eq!(duality_residual(&dual), 0.0);

        let pair = corpus::mixed_pair();
        let m = SymbolFunction::unit(Arc::clone(pair.atom_space()));
        let mult = build_multiplier(&m, pair.f(), pair.g()).unwrap();
        let dual = multiplier_dual(&mult, &m, pair.f(), pair.g(), DEFAULT_TOL).unwrap();
        assert!(duality_residual(&dual) <= 1e-12);
    }

    #[test]
    fn singular_multiplier_has_no_dual() {
        let f = basis_family(2);
        let m = SymbolFunction::real(Arc::clone(f.atom_space()), &[1.0, 0.0]).unwrap();
        let mult = build_multiplier(&m, &f, &f).unwrap();
        assert!(matches!(
            multiplier_dual(&mult, &m, &f, &f, DEFAULT_TOL),
            Err(Error::SingularOperator { .. })
        ));
    }
}
