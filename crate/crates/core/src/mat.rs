//! Dense 3x3 complex linear algebra.
//!
//! The system dimension is fixed at three, so matrices and kets are plain
//! stack arrays: no allocation in the integrator's inner loop, and the
//! compiler unrolls everything. Operations are value-oriented; both types
//! are `Copy`.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;

use crate::scalar::Scalar;

/// Complex number over the working scalar.
pub type C<T> = Complex<T>;

/// A three-component complex column vector (a ket).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CVec3<T> {
    pub a: [C<T>; 3],
}

/// A dense 3x3 complex matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMat3<T> {
    pub m: [[C<T>; 3]; 3],
}

impl<T: Scalar> CVec3<T> {
    pub fn new(a0: C<T>, a1: C<T>, a2: C<T>) -> Self {
        Self { a: [a0, a1, a2] }
    }

    /// Vector with the given real components.
    pub fn from_real(a0: T, a1: T, a2: T) -> Self {
        Self::new(C::new(a0, T::zero()), C::new(a1, T::zero()), C::new(a2, T::zero()))
    }

    pub fn zero() -> Self {
        Self { a: [C::new(T::zero(), T::zero()); 3] }
    }

    /// Standard basis ket `|k>` for zero-based `k`.
    pub fn basis(k: usize) -> Self {
        let mut v = Self::zero();
        v.a[k] = C::new(T::one(), T::zero());
        v
    }

    /// Inner product `<self|other>`, conjugating `self`.
    pub fn dot(&self, other: &Self) -> C<T> {
        let mut s = C::new(T::zero(), T::zero());
        for i in 0..3 {
            s = s + self.a[i].conj() * other.a[i];
        }
        s
    }

    pub fn norm_sqr(&self) -> T {
        self.a.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Largest component magnitude.
    pub fn max_abs(&self) -> T {
        self.a
            .iter()
            .fold(T::zero(), |acc, z| acc.max(z.re.abs().max(z.im.abs())))
    }
}

/// Outer product `|u><v|`.
pub fn outer<T: Scalar>(u: &CVec3<T>, v: &CVec3<T>) -> CMat3<T> {
    let mut m = CMat3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            m.m[i][j] = u.a[i] * v.a[j].conj();
        }
    }
    m
}

impl<T: Scalar> CMat3<T> {
    pub fn zeros() -> Self {
        Self { m: [[C::new(T::zero(), T::zero()); 3]; 3] }
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..3 {
            m.m[i][i] = C::new(T::one(), T::zero());
        }
        m
    }

    /// Matrix with the given real entries.
    pub fn from_real(rows: [[T; 3]; 3]) -> Self {
        let mut m = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m.m[i][j] = C::new(rows[i][j], T::zero());
            }
        }
        m
    }

    /// Diagonal matrix with the given real entries.
    pub fn diag_real(d0: T, d1: T, d2: T) -> Self {
        let mut m = Self::zeros();
        m.m[0][0] = C::new(d0, T::zero());
        m.m[1][1] = C::new(d1, T::zero());
        m.m[2][2] = C::new(d2, T::zero());
        m
    }

    /// Matrix unit `E_{rc}` with a single 1 at (row, col).
    pub fn unit(row: usize, col: usize) -> Self {
        let mut m = Self::zeros();
        m.m[row][col] = C::new(T::one(), T::zero());
        m
    }

    pub fn trace(&self) -> C<T> {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                t.m[i][j] = self.m[j][i];
            }
        }
        t
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut t = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                t.m[i][j] = self.m[j][i].conj();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &CVec3<T>) -> CVec3<T> {
        let mut out = CVec3::zero();
        for i in 0..3 {
            let mut s = C::new(T::zero(), T::zero());
            for j in 0..3 {
                s = s + self.m[i][j] * v.a[j];
            }
            out.a[i] = s;
        }
        out
    }

    pub fn scale(&self, c: C<T>) -> Self {
        let mut out = *self;
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = out.m[i][j] * c;
            }
        }
        out
    }

    pub fn scale_re(&self, c: T) -> Self {
        self.scale(C::new(c, T::zero()))
    }

    /// Largest entry magnitude (max of |re|, |im| over entries).
    pub fn max_abs(&self) -> T {
        let mut m = T::zero();
        for row in &self.m {
            for z in row {
                m = m.max(z.re.abs()).max(z.im.abs());
            }
        }
        m
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        (*self - *other).max_abs()
    }

    /// Largest deviation from Hermitian symmetry, `max |m_ij - conj(m_ji)|`.
    pub fn herm_defect(&self) -> T {
        let mut d = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                let z = self.m[i][j] - self.m[j][i].conj();
                d = d.max(z.re.abs()).max(z.im.abs());
            }
        }
        d
    }

    /// Hermitian part `(m + m^dag) / 2`.
    pub fn hermitized(&self) -> Self {
        let half = crate::scalar::real::<T>(0.5);
        (*self + self.adjoint()).scale_re(half)
    }

    pub fn is_finite(&self) -> bool {
        self.m
            .iter()
            .all(|row| row.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }
}

impl<T: Scalar> Add for CMat3<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = out.m[i][j] + rhs.m[i][j];
            }
        }
        out
    }
}

impl<T: Scalar> Sub for CMat3<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = out.m[i][j] - rhs.m[i][j];
            }
        }
        out
    }
}

impl<T: Scalar> Neg for CMat3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        let mut out = self;
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = -out.m[i][j];
            }
        }
        out
    }
}

impl<T: Scalar> Mul for CMat3<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..3 {
            for k in 0..3 {
                let a = self.m[i][k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..3 {
                    out.m[i][j] = out.m[i][j] + a * rhs.m[k][j];
                }
            }
        }
        out
    }
}

impl<T: Scalar> Index<(usize, usize)> for CMat3<T> {
    type Output = C<T>;
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.m[i][j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for CMat3<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.m[i][j]
    }
}

/// Commutator `[a, b] = ab - ba`.
pub fn commutator<T: Scalar>(a: &CMat3<T>, b: &CMat3<T>) -> CMat3<T> {
    *a * *b - *b * *a
}

/// Anticommutator `{a, b} = ab + ba`.
pub fn anticommutator<T: Scalar>(a: &CMat3<T>, b: &CMat3<T>) -> CMat3<T> {
    *a * *b + *b * *a
}

/// Eigenvalues of a Hermitian 3x3 matrix, ascending.
///
/// Cyclic Jacobi iteration with complex rotations. Unlike the trigonometric
/// closed form it does not lose half the digits on nearly degenerate pairs;
/// the result is accurate to a few ulp of the matrix scale. The input is
/// taken as Hermitian; callers that need a guard should check `herm_defect`
/// first.
pub fn hermitian_eigenvalues<T: Scalar>(m: &CMat3<T>) -> [T; 3] {
    let mut a = m.hermitized();
    let scale = a.max_abs();
    if scale == T::zero() {
        return [T::zero(); 3];
    }
    let tol = T::epsilon() * scale;
    for _sweep in 0..32 {
        let off = a.m[0][1]
            .norm_sqr()
            .max(a.m[0][2].norm_sqr())
            .max(a.m[1][2].norm_sqr());
        if off.sqrt() <= tol {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let b = a.m[p][q];
            let beta = b.norm_sqr().sqrt();
            if beta <= tol {
                continue;
            }
            // phase removal turns the 2x2 block real; then a standard
            // symmetric Jacobi rotation annihilates the pivot
            let phase = b.scale(T::one() / beta);
            let tau = (a.m[q][q].re - a.m[p][p].re) / (crate::scalar::real::<T>(2.0) * beta);
            let t = if tau >= T::zero() {
                T::one() / (tau + (T::one() + tau * tau).sqrt())
            } else {
                -T::one() / (-tau + (T::one() + tau * tau).sqrt())
            };
            let c = T::one() / (T::one() + t * t).sqrt();
            let s = t * c;
            let mut j = CMat3::identity();
            j.m[p][p] = C::new(c, T::zero());
            j.m[p][q] = C::new(s, T::zero());
            j.m[q][p] = phase.conj().scale(-s);
            j.m[q][q] = phase.conj().scale(c);
            a = (j.adjoint() * a * j).hermitized();
        }
    }
    let mut e = [a.m[0][0].re, a.m[1][1].re, a.m[2][2].re];
    e.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = CMat3<f64>;

    #[test]
    fn matmul_identity() {
        let h = M::from_real([[0.0, 3.0, 0.0], [3.0, 1.0, 4.0], [0.0, 4.0, 0.0]]);
        assert_eq!(h * M::identity(), h);
        assert_eq!(M::identity() * h, h);
    }

    #[test]
    fn adjoint_of_product() {
        let a = M::from_real([[1.0, 2.0, 0.5], [0.0, 1.0, -1.0], [0.25, 3.0, 2.0]]);
        let mut b = a;
        b.m[0][1] = C::new(0.0, 1.5);
        let lhs = (a * b).adjoint();
        let rhs = b.adjoint() * a.adjoint();
        assert!(lhs.max_abs_diff(&rhs) < 1e-15);
    }

    #[test]
    fn commutator_antisymmetry() {
        let a = M::from_real([[0.0, 3.0, 0.0], [3.0, 1.0, 4.0], [0.0, 4.0, 0.0]]);
        let b = M::diag_real(0.3, -0.2, 0.9);
        let c = commutator(&a, &b) + commutator(&b, &a);
        assert!(c.max_abs() < 1e-15);
    }

    #[test]
    fn eigenvalues_diagonal() {
        let m = M::diag_real(0.5, 0.3, 0.2);
        let e = hermitian_eigenvalues(&m);
        assert!((e[0] - 0.2).abs() < 1e-14);
        assert!((e[1] - 0.3).abs() < 1e-14);
        assert!((e[2] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_degenerate_projector() {
        let m = M::diag_real(1.0, 0.0, 0.0);
        let e = hermitian_eigenvalues(&m);
        assert!(e[0].abs() < 1e-14);
        assert!(e[1].abs() < 1e-14);
        assert!((e[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_complex_hermitian() {
        // [[2, i, 0], [-i, 2, 0], [0, 0, 5]] has spectrum {1, 3, 5}
        let mut m = M::diag_real(2.0, 2.0, 5.0);
        m.m[0][1] = C::new(0.0, 1.0);
        m.m[1][0] = C::new(0.0, -1.0);
        let e = hermitian_eigenvalues(&m);
        assert!((e[0] - 1.0).abs() < 1e-14);
        assert!((e[1] - 3.0).abs() < 1e-14);
        assert!((e[2] - 5.0).abs() < 1e-14);
    }

    #[test]
    fn outer_product_is_rank_one() {
        let u = CVec3::<f64>::from_real(0.6, 0.0, 0.8);
        let p = outer(&u, &u);
        // projector: p^2 = p
        assert!((p * p).max_abs_diff(&p) < 1e-15);
        assert!((p.trace().re - 1.0).abs() < 1e-15);
    }
}
