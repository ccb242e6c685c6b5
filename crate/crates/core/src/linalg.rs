//! Dense complex matrices and the handful of operations the rest of the
//! crate needs: arithmetic, Kronecker products, partial transposes and a
//! cyclic Jacobi eigensolver for small Hermitian matrices.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest dimension accepted by [`hermitian_eigen`].
pub const MAX_EIGEN_DIM: usize = 16;

/// Tolerance used when the eigensolver checks its input for Hermiticity.
pub const HERMITIAN_INPUT_TOL: f64 = 1e-10;

const JACOBI_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = cr(1.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be a
    /// perfect square.
    pub fn from_vec(entries: Vec<C64>) -> Result<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim * dim != entries.len() || dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self { dim, data: entries })
    }

    pub fn from_rows<const N: usize>(rows: [[C64; N]; N]) -> Self {
        Self::from_fn(N, |i, j| rows[i][j])
    }

    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        Self::from_fn(N, |i, j| cr(rows[i][j]))
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = cr(v);
        }
        m
    }

    /// Rank-one projector-like matrix `v v†`.
    pub fn outer(v: &[C64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// Entrywise (Schur) product.
    pub fn hadamard(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "hadamard: dimension mismatch");
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul: dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn mat_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.dim, v.len(), "mat_vec: dimension mismatch");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff: dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |m_ij - conj(m_ji)|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev = 0.0_f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "add: dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "sub: dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product: `(a⊗b)[(i·nb+k),(j·nb+l)] = a[i][j]·b[k][l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let nb = b.dim;
    ComplexMatrix::from_fn(a.dim * nb, |r, s| a[(r / nb, s / nb)] * b[(r % nb, s % nb)])
}

/// Transposes the first (slow-index) subsystem:
/// `(m^{T_A})_{(a,b),(a',b')} = m_{(a',b),(a,b')}`.
pub fn partial_transpose_a(m: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<ComplexMatrix> {
    if m.dim != dim_a * dim_b {
        return Err(Error::DimensionMismatch {
            expected: dim_a * dim_b,
            found: m.dim,
        });
    }
    Ok(ComplexMatrix::from_fn(m.dim, |r, s| {
        let (a, b) = (r / dim_b, r % dim_b);
        let (ap, bp) = (s / dim_b, s % dim_b);
        m[(ap * dim_b + b, a * dim_b + bp)]
    }))
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, matching `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    pub fn min_value(&self) -> f64 {
        *self.values.last().expect("empty spectrum")
    }

    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let lambda = ComplexMatrix::diag(&self.values);
        self.vectors.matmul(&lambda).matmul(&self.vectors.adjoint())
    }
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices of dimension at
/// most [`MAX_EIGEN_DIM`].
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary, then applies the classical real Jacobi rotation. Sweeps stop once
/// the off-diagonal Frobenius norm falls below `1e-14·max(1, ‖m‖_F)`.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = m.dim;
    if n > MAX_EIGEN_DIM {
        return Err(Error::DimensionTooLarge(n));
    }
    let deviation = m.hermiticity_deviation();
    if deviation > HERMITIAN_INPUT_TOL {
        return Err(Error::NotHermitian { deviation });
    }

    // Symmetrize so rounding in the input cannot accumulate.
    let mut a = ComplexMatrix::from_fn(n, |i, j| {
        if i == j {
            cr(m[(i, i)].re)
        } else {
            (m[(i, j)] + m[(j, i)].conj()) * 0.5
        }
    });
    let mut v = ComplexMatrix::identity(n);
    let tol = JACOBI_TOL * a.frobenius_norm().max(1.0);

    let off_norm = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off_norm(&a) <= tol;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off_norm(&a),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        converged = off_norm(&a) <= tol;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, k| v[(r, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag < f64::MIN_POSITIVE.sqrt() {
        return;
    }
    let n = a.dim;
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;

    // U = diag(1, e^{-iφ}) · [[c, s], [-s, c]] restricted to (p, q).
    let upp = cr(cs);
    let upq = cr(sn);
    let uqp = -phase.conj() * sn;
    let uqq = phase.conj() * cs;

    // A <- A U
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * upp + akq * uqp;
        a[(k, q)] = akp * upq + akq * uqq;
    }
    // A <- U† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
        a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
    }
    a[(p, q)] = cr(0.0);
    a[(q, p)] = cr(0.0);
    a[(p, p)] = cr(app - t * mag);
    a[(q, q)] = cr(aqq + t * mag);

    // V <- V U
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * upp + vkq * uqp;
        v[(k, q)] = vkp * upq + vkq * uqq;
    }
}

/// Pauli operators in the ordered path basis (L, R).
pub mod pauli {
    use super::{c, cr, ComplexMatrix};

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    /// `|L⟩⟨R| + |R⟩⟨L|`
    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_rows([[cr(0.0), cr(1.0)], [cr(1.0), cr(0.0)]])
    }

    /// `-i(|L⟩⟨R| - |R⟩⟨L|)`
    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_rows([[cr(0.0), c(0.0, -1.0)], [c(0.0, 1.0), cr(0.0)]])
    }

    /// `|L⟩⟨L| - |R⟩⟨R|`
    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_rows([[cr(1.0), cr(0.0)], [cr(0.0), cr(-1.0)]])
    }
}

/// `Σ_i conj(u_i) v_i`
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn check_decomposition(m: &ComplexMatrix) -> HermitianEigen {
        let eig = hermitian_eigen(m).unwrap();
        assert!(eig.reconstruct().max_abs_diff(m) <= 1e-10);
        let vv = eig.vectors.adjoint().matmul(&eig.vectors);
        assert!(vv.max_abs_diff(&ComplexMatrix::identity(m.dim())) <= 1e-10);
        for w in eig.values.windows(2) {
            assert!(w[0] >= w[1]);
        }
        assert_close(eig.values.iter().sum::<f64>(), m.trace().re, 1e-10);
        eig
    }

    #[test]
    fn eigen_of_identity() {
        let eig = check_decomposition(&ComplexMatrix::identity(4));
        for v in eig.values {
            assert_close(v, 1.0, 1e-14);
        }
    }

    #[test]
    fn eigen_of_diagonal_is_sorted_descending() {
        let eig = check_decomposition(&ComplexMatrix::diag(&[-1.0, 3.0]));
        assert_eq!(eig.values, vec![3.0, -1.0]);
    }

    #[test]
    fn eigen_of_all_ones_is_rank_one() {
        // all-ones = v v† with v = (1,1,1,1); eigenvalue ‖v‖² = 4, rest 0
        let ones = ComplexMatrix::from_fn(4, |_, _| cr(1.0));
        let v = [cr(1.0); 4];
        assert_eq!(ComplexMatrix::outer(&v), ones);
        let eig = check_decomposition(&ones);
        assert_close(eig.values[0], 4.0, 1e-12);
        for &x in &eig.values[1..] {
            assert_close(x, 0.0, 1e-12);
        }
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows([[1.0, 2.0], [0.0, 1.0]]);
        assert!(matches!(
            hermitian_eigen(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn eigen_rejects_large_dimension() {
        let m = ComplexMatrix::identity(17);
        assert_eq!(
            hermitian_eigen(&m).unwrap_err(),
            Error::DimensionTooLarge(17)
        );
    }

    #[test]
    fn eigen_handles_dim_sixteen_complex() {
        let m = ComplexMatrix::from_fn(16, |i, j| {
            if i == j {
                cr(i as f64 * 0.3 - 1.0)
            } else {
                let (lo, hi) = (i.min(j) as f64, i.max(j) as f64);
                let z = c((lo + 2.0 * hi).sin(), (lo * hi).cos());
                if i < j {
                    z
                } else {
                    z.conj()
                }
            }
        });
        check_decomposition(&m);
    }

    #[test]
    fn kron_of_identities_and_diagonal_paulis() {
        let i4 = kron(&pauli::identity(), &pauli::identity());
        assert_eq!(i4, ComplexMatrix::identity(4));
        let zz = kron(&pauli::z(), &pauli::z());
        assert_eq!(zz, ComplexMatrix::diag(&[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn kron_xx_expectation_by_hand() {
        // Tr[X⊗X ρ] = Σ_ij (XX)_ij ρ_ji; X⊗X is the anti-diagonal of ones,
        // so it picks ρ_{RR,LL} + ρ_{RL,LR} + ρ_{LR,RL} + ρ_{LL,RR}.
        let rho = ComplexMatrix::from_fn(4, |i, j| {
            if i == j {
                cr(0.25)
            } else {
                let (lo, hi) = (i.min(j), i.max(j));
                let z = c(0.01 * (lo + 3 * hi) as f64, 0.02 * (hi - lo) as f64);
                if i < j {
                    z
                } else {
                    z.conj()
                }
            }
        });
        let xx = kron(&pauli::x(), &pauli::x());
        let lhs = xx.matmul(&rho).trace();
        let rhs = 2.0 * rho[(0, 3)].re + 2.0 * rho[(1, 2)].re;
        assert_close(lhs.re, rhs, 1e-15);
        assert_close(lhs.im, 0.0, 1e-15);
    }

    #[test]
    fn partial_transpose_fixes_diagonal_matrices() {
        let d = ComplexMatrix::diag(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(partial_transpose_a(&d, 2, 2).unwrap(), d);
    }

    #[test]
    fn partial_transpose_of_bell_projector() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let phi_plus = [cr(h), cr(0.0), cr(0.0), cr(h)];
        let pt = partial_transpose_a(&ComplexMatrix::outer(&phi_plus), 2, 2).unwrap();
        let swap_half = ComplexMatrix::from_real_rows([
            [0.5, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.5, 0.0],
            [0.0, 0.5, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.5],
        ]);
        assert!(pt.max_abs_diff(&swap_half) < 1e-15);
        let eig = hermitian_eigen(&pt).unwrap();
        assert_close(eig.min_value(), -0.5, 1e-12);
    }

    #[test]
    fn partial_transpose_rejects_wrong_dimension() {
        let m = ComplexMatrix::identity(3);
        assert!(matches!(
            partial_transpose_a(&m, 2, 2),
            Err(Error::DimensionMismatch {
                expected: 4,
                found: 3
            })
        ));
    }

    fn complex_entry() -> impl Strategy<Value = C64> {
        (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| c(re, im))
    }

    fn square(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec(complex_entry(), dim * dim)
            .prop_map(|v| ComplexMatrix::from_vec(v).unwrap())
    }

    // integer entries keep every product exact
    fn integer_square(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec((-9i32..10, -9i32..10), dim * dim).prop_map(|v| {
            ComplexMatrix::from_vec(
                v.into_iter()
                    .map(|(re, im)| c(re as f64, im as f64))
                    .collect(),
            )
            .unwrap()
        })
    }

    fn hermitian(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
        square(dim).prop_map(|m| {
            let sum = &m + &m.adjoint();
            sum.scale(cr(0.5))
        })
    }

    proptest! {
        #[test]
        fn partial_transpose_is_involution_and_trace_preserving(m in square(4)) {
            let once = partial_transpose_a(&m, 2, 2).unwrap();
            let twice = partial_transpose_a(&once, 2, 2).unwrap();
            prop_assert_eq!(&twice, &m);
            prop_assert_eq!(once.trace(), m.trace());
        }

        #[test]
        fn kron_is_associative(a in integer_square(2), b in integer_square(2), cm in integer_square(2)) {
            let left = kron(&kron(&a, &b), &cm);
            let right = kron(&a, &kron(&b, &cm));
            prop_assert_eq!(left.max_abs_diff(&right), 0.0);
        }

        #[test]
        fn eigen_reconstructs_random_hermitian(m in hermitian(4)) {
            let eig = hermitian_eigen(&m).unwrap();
            prop_assert!(eig.reconstruct().max_abs_diff(&m) <= 1e-10);
            let vv = eig.vectors.adjoint().matmul(&eig.vectors);
            prop_assert!(vv.max_abs_diff(&ComplexMatrix::identity(4)) <= 1e-10);
            let sum: f64 = eig.values.iter().sum();
            prop_assert!((sum - m.trace().re).abs() <= 1e-10);
        }

        #[test]
        fn eigen_reconstructs_random_hermitian_dim8(m in hermitian(8)) {
            let eig = hermitian_eigen(&m).unwrap();
            prop_assert!(eig.reconstruct().max_abs_diff(&m) <= 1e-10);
        }
    }
}
