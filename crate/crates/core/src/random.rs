//! Seeded generators for randomized property checks.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;

use crate::biframe::{BiframePair, VectorFamily};
use crate::measure::AtomSpace;
use crate::multiplier::SymbolFunction;
use crate::operators::{Field, Operator, Scalar, Space, Vector};

pub fn scalar<R: Rng + ?Sized>(rng: &mut R, field: Field) -> Scalar {
    let re = rng.gen_range(-1.0..1.0);
    match field {
        Field::Real => Scalar::new(re, 0.0),
        Field::Complex => Scalar::new(re, rng.gen_range(-1.0..1.0)),
    }
}

pub fn vector<R: Rng + ?Sized>(rng: &mut R, space: Space) -> Vector {
    let entries = (0..space.dim()).map(|_| scalar(rng, space.field())).collect();
    Vector::new(space, entries).expect("entries match the space")
}

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, space: Space) -> Vector {
    loop {
        let v = vector(rng, space);
        let n = v.norm();
        if n > 1e-3 {
            return v.scale_real(1.0 / n);
        }
    }
}

pub fn operator<R: Rng + ?Sized>(rng: &mut R, space: Space) -> Operator {
    let n = space.dim();
    let mat = DMatrix::from_fn(n, n, |_, _| scalar(rng, space.field()));
    Operator::new(space, space, mat).expect("entries match the space")
}

/// Random operator with condition number at most `1 + 2·n·max_entry/shift`;
/// diagonally shifted so it stays well conditioned.
pub fn well_conditioned_operator<R: Rng + ?Sized>(rng: &mut R, space: Space) -> Operator {
    let shift = 2.0 * space.dim() as f64;
    let id = Operator::identity(space).scale(Scalar::new(shift, 0.0));
    operator(rng, space).add(&id).expect("same space")
}

/// Partition space with weights in `[0.5, 2)`.
pub fn atom_space<R: Rng + ?Sized>(rng: &mut R, atoms: usize) -> Arc<AtomSpace> {
    let weights: Vec<f64> = (0..atoms).map(|_| rng.gen_range(0.5..2.0)).collect();
    Arc::new(AtomSpace::partition(&weights).expect("positive weights"))
}

pub fn family<R: Rng + ?Sized>(rng: &mut R, space: Space, atoms: &Arc<AtomSpace>) -> VectorFamily {
    let vectors = (0..atoms.len()).map(|_| vector(rng, space)).collect();
    VectorFamily::new(space, Arc::clone(atoms), vectors).expect("consistent family")
}

/// Independent random `F` and `G`.
pub fn pair<R: Rng + ?Sized>(rng: &mut R, space: Space, atoms: usize) -> BiframePair {
    let atoms = atom_space(rng, atoms);
    BiframePair::new(family(rng, space, &atoms), family(rng, space, &atoms)).expect("consistent pair")
}

/// `F = G`, so the operator is Hermitian positive semidefinite.
pub fn frame_pair<R: Rng + ?Sized>(rng: &mut R, space: Space, atoms: usize) -> BiframePair {
    let atoms = atom_space(rng, atoms);
    let f = family(rng, space, &atoms);
    BiframePair::new(f.clone(), f).expect("consistent pair")
}

/// `G = F + δ·(random)`; for small `δ` the operator stays close to a
/// positive definite frame operator and is invertible.
pub fn perturbed_pair<R: Rng + ?Sized>(rng: &mut R, space: Space, atoms: usize, delta: f64) -> BiframePair {
    let atoms_sp = atom_space(rng, atoms);
    let f = family(rng, space, &atoms_sp);
    let g_vectors = f
        .vectors()
        .iter()
        .map(|v| v.add(&vector(rng, space).scale_real(delta)).expect("same space"))
        .collect();
    let g = VectorFamily::new(space, Arc::clone(&atoms_sp), g_vectors).expect("consistent family");
    BiframePair::new(f, g).expect("consistent pair")
}

pub fn symbol<R: Rng + ?Sized>(rng: &mut R, atoms: &Arc<AtomSpace>, field: Field) -> SymbolFunction {
    let values = (0..atoms.len()).map(|_| scalar(rng, field)).collect();
    SymbolFunction::new(Arc::clone(atoms), values).expect("consistent symbol")
}

/// Symbol with modulus in `[0.5, 1.5)` and random phase (complex field).
pub fn symbol_away_from_zero<R: Rng + ?Sized>(rng: &mut R, atoms: &Arc<AtomSpace>, field: Field) -> SymbolFunction {
    let values = (0..atoms.len())
        .map(|_| {
            let r = rng.gen_range(0.5..1.5);
            match field {
                Field::Real => Scalar::new(if rng.gen_bool(0.5) { r } else { -r }, 0.0),
                Field::Complex => Scalar::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU)),
            }
        })
        .collect();
    SymbolFunction::new(Arc::clone(atoms), values).expect("consistent symbol")
}
