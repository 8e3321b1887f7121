//! Floating-point helpers: 2×2 unitaries, dense conjugation at the file-I/O
//! boundary, and rational snapping.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::bits::BitString;
use crate::operator::Operator;
use crate::scalar::{Rational, Scalar};
use crate::Error;

/// Column-major-free tiny 2×2 complex matrix; `e[r][c]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub e: [[Complex64; 2]; 2],
}

impl Mat2 {
    pub fn new(e: [[Complex64; 2]; 2]) -> Self {
        Mat2 { e }
    }

    pub fn identity() -> Self {
        Mat2::new([
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ])
    }

    pub fn diag(a: Complex64, b: Complex64) -> Self {
        Mat2::new([[a, Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), b]])
    }

    pub fn pauli_z() -> Self {
        Mat2::diag(Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0))
    }

    pub fn pauli_x() -> Self {
        Mat2::new([
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        ])
    }

    pub fn pauli_y() -> Self {
        Mat2::new([
            [Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
            [Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
        ])
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = self.e[r][0] * o.e[0][c] + self.e[r][1] * o.e[1][c];
            }
        }
        Mat2::new(out)
    }

    pub fn dagger(&self) -> Mat2 {
        Mat2::new([
            [self.e[0][0].conj(), self.e[1][0].conj()],
            [self.e[0][1].conj(), self.e[1][1].conj()],
        ])
    }

    pub fn scale(&self, s: Complex64) -> Mat2 {
        let mut out = self.e;
        for row in &mut out {
            for v in row {
                *v *= s;
            }
        }
        Mat2::new(out)
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        let mut out = self.e;
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] -= o.e[r][c];
            }
        }
        Mat2::new(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.e
            .iter()
            .flatten()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    pub fn deviation_from_unitary(&self) -> f64 {
        self.dagger().mul(self).sub(&Mat2::identity()).max_abs()
    }

    pub fn commutes_with(&self, o: &Mat2, tol: f64) -> bool {
        self.mul(o).sub(&o.mul(self)).max_abs() <= tol
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.e[0][1].norm() <= tol && self.e[1][0].norm() <= tol
    }

    pub fn is_scalar(&self, tol: f64) -> bool {
        self.is_diagonal(tol) && (self.e[0][0] - self.e[1][1]).norm() <= tol
    }

    /// Eigendecomposition of a 2×2 unitary: returns (eigenvalues, unitary P
    /// with rows = eigenvectors†), so that P·u·P† = diag(λ₁, λ₂).
    /// Eigenvalues are sorted by principal argument in [0, 2π).
    pub fn eigendecompose(&self) -> (Complex64, Complex64, Mat2) {
        let tr = self.e[0][0] + self.e[1][1];
        let det = self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0];
        let disc = (tr * tr - det.scale(4.0)).sqrt();
        let l1 = (tr + disc).scale(0.5);
        let l2 = (tr - disc).scale(0.5);
        let (l1, l2) = order_by_principal_arg(l1, l2);
        let v1 = self.eigenvector(l1);
        // second eigenvector: orthogonal complement keeps P exactly unitary
        let v2 = [-v1[1].conj(), v1[0].conj()];
        let p = Mat2::new([
            [v1[0].conj(), v1[1].conj()],
            [v2[0].conj(), v2[1].conj()],
        ]);
        (l1, l2, p)
    }

    fn eigenvector(&self, lambda: Complex64) -> [Complex64; 2] {
        // rows of (u − λI) are both orthogonal to the eigenvector
        let r1 = [self.e[0][0] - lambda, self.e[0][1]];
        let r2 = [self.e[1][0], self.e[1][1] - lambda];
        let row = if r1[0].norm() + r1[1].norm() >= r2[0].norm() + r2[1].norm() {
            r1
        } else {
            r2
        };
        let v = if row[0].norm() + row[1].norm() < 1e-12 {
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
        } else {
            [row[1], -row[0]]
        };
        let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        [v[0] / n, v[1] / n]
    }
}

fn principal_arg(z: Complex64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

fn order_by_principal_arg(a: Complex64, b: Complex64) -> (Complex64, Complex64) {
    if principal_arg(b) < principal_arg(a) {
        (b, a)
    } else {
        (a, b)
    }
}

/// Best rational p/q with q ≤ `max_den` approximating `x`; `None` when no
/// convergent lands within `tol`.
pub fn rational_approx(x: f64, max_den: u64, tol: f64) -> Option<(i64, u64)> {
    if !x.is_finite() {
        return None;
    }
    let neg = x < 0.0;
    let mut x_abs = x.abs();
    let mut p0: i64 = 1;
    let mut q0: u64 = 0;
    let mut p1: i64 = x_abs.floor() as i64;
    let mut q1: u64 = 1;
    let mut frac = x_abs - x_abs.floor();
    for _ in 0..64 {
        let approx = p1 as f64 / q1 as f64;
        if (approx - x_abs).abs() <= tol {
            let p = if neg { -p1 } else { p1 };
            return Some((p, q1));
        }
        if frac.abs() < 1e-15 {
            break;
        }
        x_abs = 1.0 / frac;
        let a = x_abs.floor();
        frac = x_abs - a;
        let p2 = (a as i64)
            .checked_mul(p1)
            .and_then(|v| v.checked_add(p0))?;
        let q2 = (a as u64)
            .checked_mul(q1)
            .and_then(|v| v.checked_add(q0))?;
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    let approx = p1 as f64 / q1 as f64;
    if q1 > 0 && (approx - x.abs()).abs() <= tol {
        let p = if neg { -p1 } else { p1 };
        Some((p, q1))
    } else {
        None
    }
}

const SNAP_MAX_DEN: u64 = 1 << 20;

fn snap_f64(x: f64, tol: f64) -> Result<Rational, Error> {
    let (p, q) = rational_approx(x, SNAP_MAX_DEN, tol).ok_or(Error::SnapFailed(x))?;
    Ok(Rational::new(BigInt::from(p), BigInt::from(q)))
}

/// Dense 2^m × 2^m complex matrix from a sparse operator.
pub fn to_dense_f64(op: &Operator) -> Vec<Vec<Complex64>> {
    let n = 1usize << op.m();
    let mut d = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (&(bra, ket), c) in op.terms().map(|(k, v)| (k, v)) {
        let (re, im) = c.to_f64s();
        d[bra.bits() as usize][ket.bits() as usize] = Complex64::new(re, im);
    }
    d
}

/// Conjugates `op` by P^{⊗m} (floating), then snaps entries back to exact
/// rationals at tolerance `tol`.
pub fn conjugate_by_local_unitary(op: &Operator, p: &Mat2, tol: f64) -> Result<Operator, Error> {
    let m = op.m();
    let n = 1usize << m;
    let a = to_dense_f64(op);
    // rows of P^{⊗m}: entry (r, c) = ∏_j P[r_j][c_j]
    let pm = |r: usize, c: usize| -> Complex64 {
        let mut v = Complex64::new(1.0, 0.0);
        for j in 0..m {
            let rb = (r >> (m - 1 - j)) & 1;
            let cb = (c >> (m - 1 - j)) & 1;
            v *= p.e[rb][cb];
        }
        v
    };
    // B = P^{⊗m} · A · (P^{⊗m})†
    let mut tmp = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for r in 0..n {
        for c in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += pm(r, k) * a[k][c];
            }
            tmp[r][c] = acc;
        }
    }
    let mut out = Operator::zero(m);
    for r in 0..n {
        for c in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += tmp[r][k] * pm(c, k).conj();
            }
            if acc.norm() <= tol {
                continue;
            }
            let sc = Scalar::new(snap_f64(acc.re, tol)?, snap_f64(acc.im, tol)?);
            out.add_term(
                BitString::new(r as u16, m).expect("index in range"),
                BitString::new(c as u16, m).expect("index in range"),
                sc,
            );
        }
    }
    Ok(out)
}

/// Converts a `BigRational` to `f64` (for floating cross-checks only).
pub fn ratio_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
