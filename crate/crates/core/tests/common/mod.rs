//! Test-side oracles: small dense complex linear algebra written with plain
//! loops, independent of the library's solver stack.
#![allow(dead_code)]

use biframe::{BiframePair, Operator, Scalar, SymbolFunction, VectorFamily};
use num_complex::Complex64;

pub type Mat = Vec<Vec<Complex64>>;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn from_op(t: &Operator) -> Mat {
    let (r, cols) = t.matrix().shape();
    (0..r).map(|i| (0..cols).map(|j| t.get(i, j)).collect()).collect()
}

pub fn from_real(rows: &[&[f64]]) -> Mat {
    rows.iter().map(|r| r.iter().map(|&x| c(x)).collect()).collect()
}

pub fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| c(if i == j { 1.0 } else { 0.0 })).collect()).collect()
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![c(0.0); m]; n];
    for i in 0..n {
        for j in 0..m {
            for l in 0..k {
                out[i][j] += a[i][l] * b[l][j];
            }
        }
    }
    out
}

pub fn adjoint(a: &Mat) -> Mat {
    let (n, m) = (a.len(), a[0].len());
    (0..m).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

pub fn sub(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect()).collect()
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).norm()))
        .fold(0.0, f64::max)
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (n, m) = (b.len(), b[0].len());
    let mut out = vec![vec![c(0.0); a[0].len() * m]; a.len() * n];
    for (i, ar) in a.iter().enumerate() {
        for (j, x) in ar.iter().enumerate() {
            for (k, br) in b.iter().enumerate() {
                for (l, y) in br.iter().enumerate() {
                    out[i * n + k][j * m + l] = x * y;
                }
            }
        }
    }
    out
}

/// `Σₖ wₖ mₖ G(k) F(k)ᴴ` by explicit loops.
pub fn naive_weighted_sum(f: &VectorFamily, g: &VectorFamily, m: Option<&SymbolFunction>) -> Mat {
    let n = f.space().dim();
    let weights: Vec<f64> = f.atom_space().weights().collect();
    let mut s = vec![vec![c(0.0); n]; n];
    for (k, w) in weights.iter().enumerate() {
        let mk = m.map_or(c(1.0), |m| m.values()[k]);
        let (fk, gk) = (f.vectors()[k].entries(), g.vectors()[k].entries());
        for i in 0..n {
            for j in 0..n {
                s[i][j] += gk[i] * fk[j].conj() * mk * *w;
            }
        }
    }
    s
}

pub fn naive_s(pair: &BiframePair) -> Mat {
    naive_weighted_sum(pair.f(), pair.g(), None)
}

pub fn frame_operator(f: &VectorFamily) -> Mat {
    naive_weighted_sum(f, f, None)
}

/// Eigenvalues (ascending) of a Hermitian matrix. `H = A + iB` maps to the
/// real symmetric `[[A, −B], [B, A]]`, whose spectrum is that of `H` with each
/// eigenvalue doubled; cyclic Jacobi sweeps then diagonalize it.
pub fn hermitian_eigs(h: &Mat) -> Vec<f64> {
    let n = h.len();
    let mut a = vec![vec![0.0f64; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            // symmetrize so round-off asymmetry cannot leak in
            let z = (h[i][j] + h[j][i].conj()) * 0.5;
            a[i][j] = z.re;
            a[i + n][j + n] = z.re;
            a[i][j + n] = -z.im;
            a[i + n][j] = z.im;
        }
    }
    let mut eigs = jacobi(a);
    eigs.sort_by(f64::total_cmp);
    eigs.iter().step_by(2).copied().collect()
}

fn jacobi(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>().max(f64::MIN_POSITIVE);
        if off <= 1e-32 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

pub fn hermitian_part(a: &Mat) -> Mat {
    let ah = adjoint(a);
    a.iter().zip(&ah).map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p + q) * 0.5).collect()).collect()
}

/// Extremal eigenvalues of the Hermitian part.
pub fn bounds(s: &Mat) -> (f64, f64) {
    let e = hermitian_eigs(&hermitian_part(s));
    (e[0], e[e.len() - 1])
}

pub fn singular_values(a: &Mat) -> Vec<f64> {
    hermitian_eigs(&matmul(&adjoint(a), a)).into_iter().map(|x| x.max(0.0).sqrt()).collect()
}

pub fn norm(a: &Mat) -> f64 {
    *singular_values(a).last().unwrap()
}

pub fn sigma_min(a: &Mat) -> f64 {
    singular_values(a)[0]
}

/// `‖A‖` by power iteration on `AᴴA`, started from a fixed dense vector.
pub fn power_norm(a: &Mat, iterations: usize) -> f64 {
    let ata = matmul(&adjoint(a), a);
    let n = ata.len();
    let mut v: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0 + i as f64 * 0.37, 0.11 * i as f64)).collect();
    let mut lambda = 0.0;
    for _ in 0..iterations {
        let w: Vec<Complex64> = (0..n).map(|i| (0..n).map(|j| ata[i][j] * v[j]).sum()).collect();
        let nw = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nw == 0.0 {
            return 0.0;
        }
        let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        lambda = w.iter().zip(&v).map(|(x, y)| (x * y.conj()).re).sum::<f64>() / nv;
        v = w.iter().map(|z| z / nw).collect();
    }
    lambda.sqrt()
}

/// Gauss–Jordan with partial pivoting.
pub fn inverse(a: &Mat) -> Option<Mat> {
    let n = a.len();
    let mut m: Vec<Vec<Complex64>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| r.iter().copied().chain((0..n).map(|j| c(if i == j { 1.0 } else { 0.0 }))).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x][col].norm().total_cmp(&m[y][col].norm()))?;
        if m[piv][col].norm() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        let p = m[col][col];
        for x in m[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col {
                let factor = m[r][col];
                if factor != c(0.0) {
                    for k in 0..2 * n {
                        let v = m[col][k];
                        m[r][k] -= factor * v;
                    }
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn scalars_close(a: Scalar, b: Scalar, tol: f64) -> bool {
    (a - b).norm() <= tol
}
