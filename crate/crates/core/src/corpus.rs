//! Embedded worked examples.
//!
//! Each fixture realizes a small, fully specified biframe whose operator and
//! bounds are known in closed form.

use std::sync::Arc;

use crate::biframe::{BiframePair, VectorFamily};
use crate::measure::{AtomSpace, QuadratureRule};
use crate::operators::{Operator, Scalar, Space, Vector};

/// Cell measures used for the three-cell partition fixture (all > 1, decreasing).
pub const PARTITION_CELLS: [f64; 3] = [2.0, 1.5, 1.2];

fn family(space: Space, atoms: &Arc<AtomSpace>, vectors: Vec<Vector>) -> VectorFamily {
    VectorFamily::new(space, Arc::clone(atoms), vectors).expect("fixture is well formed")
}

fn e(space: Space, i: usize) -> Vector {
    Vector::basis(space, i)
}

/// Scales each vector by `1/√μ(cell)`, the per-cell normalization that makes
/// the integral over a cell collapse to the unweighted summand.
fn normalized(vectors: Vec<Vector>, atoms: &AtomSpace) -> Vec<Vector> {
    vectors
        .into_iter()
        .zip(atoms.weights())
        .map(|(v, w)| v.scale_real(1.0 / w.sqrt()))
        .collect()
}

/// Partition of a ball into three cells; `S = diag(2, 1, 1)`, bounds (1, 2).
pub fn partition_pair() -> BiframePair {
    let space = Space::real(3);
    let atoms = Arc::new(AtomSpace::partition(&PARTITION_CELLS).expect("positive cells"));
    let f = vec![e(space, 0), e(space, 1), e(space, 2).scale_real(2.0)];
    let g = vec![e(space, 0).scale_real(2.0), e(space, 1), e(space, 2).scale_real(0.5)];
    BiframePair::new(
        family(space, &atoms, normalized(f, &atoms)),
        family(space, &atoms, normalized(g, &atoms)),
    )
    .expect("fixture is well formed")
}

/// σ-finite example truncated to `ℝᵈ`: families `{e₁, e₁, e₁, e₂, …, e_d}`
/// and `{0, e₁, e₁, e₂, …, e_d}` over `d + 2` cells. Bounds (1, 2);
/// the first family alone has bounds (1, 3).
///
/// # Panics
/// If `d == 0`.
pub fn truncated_pair(d: usize) -> BiframePair {
    assert!(d >= 1, "dimension must be positive");
    let space = Space::real(d);
    let n = d + 2;
    // cells Ω_i of finite, unequal measure
    let cells: Vec<f64> = (0..n).map(|i| 1.0 + 0.25 * i as f64).collect();
    let atoms = Arc::new(
        AtomSpace::partition(&cells)
            .expect("positive cells")
            .with_truncation_note(format!("first {n} cells of a σ-finite decomposition, dimension {d}")),
    );
    let mut f = vec![e(space, 0), e(space, 0), e(space, 0)];
    let mut g = vec![Vector::zeros(space), e(space, 0), e(space, 0)];
    for i in 1..d {
        f.push(e(space, i));
        g.push(e(space, i));
    }
    BiframePair::new(
        family(space, &atoms, normalized(f, &atoms)),
        family(space, &atoms, normalized(g, &atoms)),
    )
    .expect("fixture is well formed")
}

/// Scalar identity behind the diagonal-matrix example:
/// `∫₀¹ 6w(1 − w²) dw = 3/2`, evaluated by Gauss-Legendre with `nodes` points.
pub fn quadrature_bound(nodes: usize) -> f64 {
    QuadratureRule::gauss_legendre(nodes, 0.0, 1.0)
        .build()
        .expect("valid rule")
        .integrate_fn(|w| 6.0 * w * (1.0 - w * w))
}

/// `F = {(2,1,1), (−1,3,−1), (−1,1,4)}`, `G` = standard basis, unit weights.
/// The operator is not Hermitian; bounds (2, 4).
pub fn mixed_pair() -> BiframePair {
    let f = VectorFamily::from_real_rows(&[&[2.0, 1.0, 1.0], &[-1.0, 3.0, -1.0], &[-1.0, 1.0, 4.0]])
        .expect("fixture is well formed");
    let space = f.space();
    let atoms = Arc::clone(f.atom_space());
    let g = family(space, &atoms, (0..3).map(|i| e(space, i)).collect());
    BiframePair::new(f, g).expect("fixture is well formed")
}

pub fn mixed_matrix() -> Operator {
    Operator::real_rows(&[&[2.0, 1.0, 1.0], &[-1.0, 3.0, -1.0], &[-1.0, 1.0, 4.0]])
}

/// `(1/33)·[[13, −3, −4], [5, 9, 1], [2, −3, 7]]`.
pub fn mixed_inverse() -> Operator {
    let rows = [[13.0, -3.0, -4.0], [5.0, 9.0, 1.0], [2.0, -3.0, 7.0]];
    let scaled: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|x| x / 33.0).collect()).collect();
    let refs: Vec<&[f64]> = scaled.iter().map(|r| r.as_slice()).collect();
    Operator::real_rows(&refs)
}

/// Pair realizing the form `|⟨f, e₁⟩|² + 2‖f‖²` on `ℝᵈ`: atoms `(e₁, e₁)`
/// followed by `(eᵢ, 2eᵢ)` for every `i`. Bounds (2, 3).
pub fn tensor_second_factor(d: usize) -> BiframePair {
    assert!(d >= 1, "dimension must be positive");
    let space = Space::real(d);
    let atoms = Arc::new(
        AtomSpace::counting(d + 1)
            .expect("positive count")
            .with_truncation_note(format!("first {} cells, dimension {d}", d + 1)),
    );
    let mut f = vec![e(space, 0)];
    let mut g = vec![e(space, 0)];
    for i in 0..d {
        f.push(e(space, i));
        g.push(e(space, i).scale_real(2.0));
    }
    BiframePair::new(family(space, &atoms, f), family(space, &atoms, g)).expect("fixture is well formed")
}

/// Factors of the tensor example; the product pair has bounds (2, 6).
pub fn tensor_factors(d: usize) -> (BiframePair, BiframePair) {
    (truncated_pair(d), tensor_second_factor(d))
}

/// `F = G` = standard basis of `ℝⁿ` with unit weights, so `S = I`.
pub fn orthonormal_pair(n: usize) -> BiframePair {
    let space = Space::real(n);
    let atoms = Arc::new(AtomSpace::counting(n).expect("n >= 1"));
    let basis: Vec<Vector> = (0..n).map(|i| e(space, i)).collect();
    BiframePair::new(family(space, &atoms, basis.clone()), family(space, &atoms, basis))
        .expect("fixture is well formed")
}

/// `F` = standard basis, `G(k) = dₖ eₖ`, so `S = diag(d)`.
pub fn diagonal_pair(diag: &[f64]) -> BiframePair {
    let n = diag.len();
    let space = Space::real(n);
    let atoms = Arc::new(AtomSpace::counting(n).expect("n >= 1"));
    let f = (0..n).map(|i| e(space, i)).collect();
    let g = diag
        .iter()
        .enumerate()
        .map(|(i, &d)| e(space, i).scale(Scalar::new(d, 0.0)))
        .collect();
    BiframePair::new(family(space, &atoms, f), family(space, &atoms, g)).expect("fixture is well formed")
}
