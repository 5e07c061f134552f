//! The spinor module Σ = Λ•L′ of a (2n+1)-dimensional Euclidean space and
//! the Clifford action of an orthonormal frame on it.
//!
//! With `y_p = (e_{2p} + i e_{2p+1})/√2` spanning L′, a basis of Σ is given by
//! wedges `y_{s₁} ∧ … ∧ y_{s_k}` with `s₁ < … < s_k`, stored as the bitmask
//! with bit `p-1` set for each `s = p`. Frame vectors act by
//!
//! ```text
//! e₁ · η      = i (η_even − η_odd)
//! e_{2p} · η   = i (x_p ⌟ η + y_p ∧ η)
//! e_{2p+1} · η = y_p ∧ η − x_p ⌟ η
//! ```
//!
//! where the wedge and the contraction (`x_p ⌟ y_q = δ_pq`) both pick up the
//! Koszul sign `(−1)^{#{s ∈ S : s < p}}`. With this action `e_i² = −1`.
//!
//! In code frame indices are 0-based: index 0 is `e₁`, index `2p−1` is
//! `e_{2p}` and index `2p` is `e_{2p+1}`.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::Mat;
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Largest `n` for which operators are materialized as dense `2ⁿ×2ⁿ` matrices.
pub const MAX_DENSE_N: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct Spinor {
    n: usize,
    coeffs: Vec<Complex64>,
}

impl Spinor {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            coeffs: vec![ZERO; 1 << n],
        }
    }

    /// The basis wedge indexed by `mask`; `basis(n, 0)` is the spinor `1`.
    pub fn basis(n: usize, mask: usize) -> Self {
        let mut s = Self::zero(n);
        s.coeffs[mask] = ONE;
        s
    }

    pub fn one(n: usize) -> Self {
        Self::basis(n, 0)
    }

    /// `y_p` for `p` in `1..=n`.
    pub fn y(n: usize, p: usize) -> Self {
        Self::basis(n, 1 << (p - 1))
    }

    pub fn from_coeffs(n: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 1 << n {
            return Err(Error::Structure(format!(
                "spinor for n = {n} needs {} coefficients, got {}",
                1usize << n,
                coeffs.len()
            )));
        }
        Ok(Self { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    /// Hermitian inner product, conjugate-linear in `self`.
    pub fn dot(&self, other: &Spinor) -> Complex64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn max_abs_diff(&self, other: &Spinor) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub(crate) fn axpy(&mut self, a: Complex64, x: &Spinor) {
        for (s, v) in self.coeffs.iter_mut().zip(&x.coeffs) {
            *s += a * v;
        }
    }
}

impl Add for &Spinor {
    type Output = Spinor;
    fn add(self, rhs: &Spinor) -> Spinor {
        let mut out = self.clone();
        out.axpy(ONE, rhs);
        out
    }
}

impl Sub for &Spinor {
    type Output = Spinor;
    fn sub(self, rhs: &Spinor) -> Spinor {
        let mut out = self.clone();
        out.axpy(-ONE, rhs);
        out
    }
}

impl Mul<&Spinor> for Complex64 {
    type Output = Spinor;
    fn mul(self, rhs: &Spinor) -> Spinor {
        Spinor {
            n: rhs.n,
            coeffs: rhs.coeffs.iter().map(|c| self * c).collect(),
        }
    }
}

/// An element of the complex Clifford algebra acting on Σ, as a dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperator {
    n: usize,
    matrix: DMatrix<Complex64>,
}

impl SpinOperator {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            matrix: DMatrix::zeros(1 << n, 1 << n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            matrix: DMatrix::identity(1 << n, 1 << n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn apply(&self, psi: &Spinor) -> Spinor {
        let v = &self.matrix * nalgebra::DVector::from_column_slice(psi.coeffs());
        Spinor {
            n: self.n,
            coeffs: v.iter().copied().collect(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SpinOperator) -> SpinOperator {
        SpinOperator {
            n: self.n,
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn commutator(&self, other: &SpinOperator) -> SpinOperator {
        SpinOperator {
            n: self.n,
            matrix: &self.matrix * &other.matrix - &other.matrix * &self.matrix,
        }
    }

    pub fn scale(&self, s: Complex64) -> SpinOperator {
        SpinOperator {
            n: self.n,
            matrix: &self.matrix * s,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().fold(0.0, |m, c| m.max(c.norm()))
    }
}

impl Add for &SpinOperator {
    type Output = SpinOperator;
    fn add(self, rhs: &SpinOperator) -> SpinOperator {
        SpinOperator {
            n: self.n,
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Sub for &SpinOperator {
    type Output = SpinOperator;
    fn sub(self, rhs: &SpinOperator) -> SpinOperator {
        SpinOperator {
            n: self.n,
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CliffordCheck {
    pub holds: bool,
    pub max_violation: f64,
}

/// Clifford action of the orthonormal frame `e₁, …, e_{2n+1}` on Σ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Clifford {
    n: usize,
    contraction_sign: f64,
}

impl Clifford {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > 24 {
            return Err(Error::InvalidParameter(format!(
                "spinor module needs 1 <= n <= 24, got {n}"
            )));
        }
        Ok(Self {
            n,
            contraction_sign: 1.0,
        })
    }

    /// For frame dimension `d = 2n+1`.
    pub fn for_dim(d: usize) -> Result<Self> {
        if d < 3 || d.is_multiple_of(2) {
            return Err(Error::UnsupportedDimension(d));
        }
        Self::new((d - 1) / 2)
    }

    /// Negative-control module with the sign of every contraction flipped.
    /// It is not a Clifford representation.
    #[doc(hidden)]
    pub fn with_flipped_contraction(n: usize) -> Result<Self> {
        Ok(Self {
            contraction_sign: -1.0,
            ..Self::new(n)?
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `2n + 1`.
    pub fn frame_dim(&self) -> usize {
        2 * self.n + 1
    }

    pub fn spinor_dim(&self) -> usize {
        1 << self.n
    }

    /// `e_k · (basis wedge S)` as `coefficient · (basis wedge S')`.
    #[inline]
    fn act_basis(&self, k: usize, mask: usize) -> (Complex64, usize) {
        if k == 0 {
            let even = mask.count_ones().is_multiple_of(2);
            return (if even { I } else { -I }, mask);
        }
        let p = (k - 1) / 2;
        let bit = 1usize << p;
        let koszul = if (mask & (bit - 1)).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        let present = mask & bit != 0;
        // wedge when y_p is absent, contraction when present
        let (sign, target) = if present {
            (koszul * self.contraction_sign, mask & !bit)
        } else {
            (koszul, mask | bit)
        };
        let coeff = match (k % 2 == 1, present) {
            // e_{2p}: i (x⌟ + y∧)
            (true, _) => I * sign,
            // e_{2p+1}: y∧ − x⌟
            (false, false) => ONE * sign,
            (false, true) => -ONE * sign,
        };
        (coeff, target)
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k >= self.frame_dim() {
            return Err(Error::IndexOutOfRange {
                index: k + 1,
                dim: self.frame_dim(),
            });
        }
        Ok(())
    }

    fn check_spinor(&self, psi: &Spinor) -> Result<()> {
        if psi.n != self.n {
            return Err(Error::Structure(format!(
                "spinor has n = {}, module has n = {}",
                psi.n, self.n
            )));
        }
        Ok(())
    }

    /// `e_k · ψ` for the 0-based frame index `k`.
    pub fn cliff_vector(&self, k: usize, psi: &Spinor) -> Result<Spinor> {
        self.check_index(k)?;
        self.check_spinor(psi)?;
        let mut out = Spinor::zero(self.n);
        for (mask, &c) in psi.coeffs.iter().enumerate() {
            if c != ZERO {
                let (s, t) = self.act_basis(k, mask);
                out.coeffs[t] += s * c;
            }
        }
        Ok(out)
    }

    /// `v · ψ` for a real vector `v` in frame coordinates.
    pub fn apply_vector(&self, v: &[f64], psi: &Spinor) -> Result<Spinor> {
        if v.len() != self.frame_dim() {
            return Err(Error::Structure(format!(
                "vector has {} components, frame has {}",
                v.len(),
                self.frame_dim()
            )));
        }
        self.check_spinor(psi)?;
        let mut out = Spinor::zero(self.n);
        for (mask, &c) in psi.coeffs.iter().enumerate() {
            if c == ZERO {
                continue;
            }
            for (k, &vk) in v.iter().enumerate() {
                if vk != 0.0 {
                    let (s, t) = self.act_basis(k, mask);
                    out.coeffs[t] += s * c * vk;
                }
            }
        }
        Ok(out)
    }

    fn check_dense(&self) -> Result<()> {
        if self.n > MAX_DENSE_N {
            return Err(Error::TooLarge {
                n: self.n,
                max: MAX_DENSE_N,
            });
        }
        Ok(())
    }

    /// Dense operator of `e_k ·`.
    pub fn vector_operator(&self, k: usize) -> Result<SpinOperator> {
        self.check_index(k)?;
        self.check_dense()?;
        let mut op = SpinOperator::zero(self.n);
        for mask in 0..self.spinor_dim() {
            let (s, t) = self.act_basis(k, mask);
            op.matrix[(t, mask)] += s;
        }
        Ok(op)
    }

    fn check_skew(&self, omega: &Mat) -> Result<()> {
        let d = self.frame_dim();
        if omega.nrows() != d || omega.ncols() != d {
            return Err(Error::InvalidOperator(format!(
                "expected a {d}x{d} skew matrix, got {}x{}",
                omega.nrows(),
                omega.ncols()
            )));
        }
        let defect = (omega + omega.transpose()).amax();
        if defect > 1e-12 * omega.amax().max(1.0) {
            return Err(Error::InvalidOperator(format!(
                "matrix is not skew-symmetric (defect {defect:.3e})"
            )));
        }
        Ok(())
    }

    /// Spin lift of a skew endomorphism `ω` of the frame, where `ω[(j, i)]` is
    /// the `e_j` component of `ω(e_i)`.
    ///
    /// Writing `ω = Σ_{i<j} ω_ji e_i∧e_j` with `(e_i∧e_j)(e_i) = e_j`, the lift is
    /// `Σ_{i<j} ω_ji · ½ e_i·e_j`. This is the orientation of `e_i∧e_j` for which
    /// `[lift(ω), v·] = (ω v)·`.
    pub fn spin_lift(&self, omega: &Mat) -> Result<SpinOperator> {
        self.check_skew(omega)?;
        self.check_dense()?;
        let mut op = SpinOperator::zero(self.n);
        for mask in 0..self.spinor_dim() {
            self.accumulate_lift(omega, mask, ONE, |t, v| op.matrix[(t, mask)] += v);
        }
        Ok(op)
    }

    /// Matrix-free `spin_lift(ω) · ψ`, usable for any `n`.
    pub fn spin_lift_apply(&self, omega: &Mat, psi: &Spinor) -> Result<Spinor> {
        self.check_skew(omega)?;
        self.check_spinor(psi)?;
        let mut out = Spinor::zero(self.n);
        for (mask, &c) in psi.coeffs.iter().enumerate() {
            if c != ZERO {
                self.accumulate_lift(omega, mask, c, |t, v| out.coeffs[t] += v);
            }
        }
        Ok(out)
    }

    fn accumulate_lift(
        &self,
        omega: &Mat,
        mask: usize,
        weight: Complex64,
        mut sink: impl FnMut(usize, Complex64),
    ) {
        let d = self.frame_dim();
        for j in 0..d {
            let (sj, tj) = self.act_basis(j, mask);
            for i in 0..j {
                let w = omega[(j, i)];
                if w != 0.0 {
                    let (si, ti) = self.act_basis(i, tj);
                    sink(ti, weight * si * sj * (0.5 * w));
                }
            }
        }
    }

    /// Checks `e_i e_j + e_j e_i = −2 δ_ij` on every basis spinor.
    pub fn relations_check(&self, tol: f64) -> CliffordCheck {
        let d = self.frame_dim();
        let mut worst: f64 = 0.0;
        for mask in 0..self.spinor_dim() {
            for i in 0..d {
                for j in i..d {
                    let (a1, t1) = self.act_basis(j, mask);
                    let (a2, t2) = self.act_basis(i, t1);
                    let (b1, u1) = self.act_basis(i, mask);
                    let (b2, u2) = self.act_basis(j, u1);
                    let diag = if i == j { 2.0 * ONE } else { ZERO };
                    let terms = [(t2, a1 * a2), (u2, b1 * b2), (mask, diag)];
                    // sum the coefficients landing on each target wedge
                    for (k, &(t, _)) in terms.iter().enumerate() {
                        if terms[..k].iter().any(|&(s, _)| s == t) {
                            continue;
                        }
                        let total: Complex64 =
                            terms.iter().filter(|&&(s, _)| s == t).map(|&(_, v)| v).sum();
                        worst = worst.max(total.norm());
                    }
                }
            }
        }
        CliffordCheck {
            holds: worst <= tol,
            max_violation: worst,
        }
    }

    /// Real `2^{n+1} × (2n+1)` matrix of `v ↦ v·ψ`: column `k` stacks the real
    /// and imaginary parts of `e_k · ψ`.
    pub fn real_action_matrix(&self, psi: &Spinor) -> Result<Mat> {
        self.check_spinor(psi)?;
        let (d, s) = (self.frame_dim(), self.spinor_dim());
        let mut m = Mat::zeros(2 * s, d);
        for k in 0..d {
            let ek = self.cliff_vector(k, psi)?;
            for (r, c) in ek.coeffs.iter().enumerate() {
                m[(r, k)] = c.re;
                m[(s + r, k)] = c.im;
            }
        }
        Ok(m)
    }
}

/// Checks the Clifford relations of the standard module for `n`.
pub fn cliff_relations_check(n: usize, tol: f64) -> Result<CliffordCheck> {
    Ok(Clifford::new(n)?.relations_check(tol))
}

/// Stacks a spinor into a real vector `(Re ψ, Im ψ)`.
pub fn spinor_to_real(psi: &Spinor) -> nalgebra::DVector<f64> {
    let s = psi.dim();
    nalgebra::DVector::from_fn(2 * s, |r, _| {
        if r < s {
            psi.coeffs[r].re
        } else {
            psi.coeffs[r - s].im
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn action_on_one_for_n1() {
        let cl = Clifford::new(1).unwrap();
        let one = Spinor::one(1);
        let y1 = Spinor::y(1, 1);
        assert_eq!(cl.cliff_vector(0, &one).unwrap(), I * &one);
        assert_eq!(cl.cliff_vector(1, &one).unwrap(), I * &y1);
        assert_eq!(cl.cliff_vector(2, &one).unwrap(), y1);
        assert_eq!(cl.cliff_vector(2, &y1).unwrap(), -ONE * &one);
        assert!(matches!(
            cl.cliff_vector(3, &one),
            Err(Error::IndexOutOfRange { index: 4, dim: 3 })
        ));
    }

    #[test]
    fn koszul_signs() {
        // e_{2·2} · y₁ = i y₂∧y₁ = −i y₁∧y₂
        let cl = Clifford::new(2).unwrap();
        let out = cl.cliff_vector(3, &Spinor::y(2, 1)).unwrap();
        assert_eq!(out, -I * &Spinor::basis(2, 0b11));
        // contraction of y₂ out of y₁∧y₂ passes y₁: e_5 · (y₁∧y₂) = −x₂⌟(y₁∧y₂) = y₁
        let out = cl.cliff_vector(4, &Spinor::basis(2, 0b11)).unwrap();
        assert_eq!(out, Spinor::y(2, 1));
    }

    #[test]
    fn clifford_relations() {
        for n in 1..=6 {
            let check = cliff_relations_check(n, 1e-12).unwrap();
            assert!(check.holds, "n = {n}");
            assert_eq!(check.max_violation, 0.0);
        }
        let broken = Clifford::with_flipped_contraction(2).unwrap().relations_check(1e-12);
        assert!(!broken.holds);
    }

    #[test]
    fn dense_relations_n3() {
        let cl = Clifford::new(3).unwrap();
        let ops: Vec<_> = (0..7).map(|k| cl.vector_operator(k).unwrap()).collect();
        for i in 0..7 {
            for j in 0..7 {
                let anti = &ops[i].compose(&ops[j]) + &ops[j].compose(&ops[i]);
                let expected = if i == j {
                    SpinOperator::identity(3).scale(c(-2.0, 0.0))
                } else {
                    SpinOperator::zero(3)
                };
                assert!((&anti - &expected).max_abs() < 1e-12);
            }
        }
        // e₁ is i times the parity operator
        let sq = ops[0].compose(&ops[0]);
        assert_eq!(sq, SpinOperator::identity(3).scale(c(-1.0, 0.0)));
    }

    #[test]
    fn spin_lift_basics() {
        let cl = Clifford::new(1).unwrap();
        assert_eq!(cl.spin_lift(&Mat::zeros(3, 3)).unwrap(), SpinOperator::zero(1));

        // −½ E∧F in the frame (Z, E, F)
        let mut omega = Mat::zeros(3, 3);
        omega[(2, 1)] = -0.5;
        omega[(1, 2)] = 0.5;
        let out = cl.spin_lift(&omega).unwrap().apply(&Spinor::one(1));
        assert!(out.max_abs_diff(&(c(0.0, -0.25) * &Spinor::one(1))) < 1e-15);
        assert_eq!(out, cl.spin_lift_apply(&omega, &Spinor::one(1)).unwrap());

        let bad = Mat::identity(3, 3);
        assert!(matches!(cl.spin_lift(&bad), Err(Error::InvalidOperator(_))));
    }

    #[test]
    fn equivariance_spot_value() {
        // [lift(e₁∧e₂), e₁·] 1 = (e₁∧e₂)(e₁) · 1 = e₂ · 1 = i y₁
        let cl = Clifford::new(1).unwrap();
        let mut omega = Mat::zeros(3, 3);
        omega[(1, 0)] = 1.0;
        omega[(0, 1)] = -1.0;
        let lift = cl.spin_lift(&omega).unwrap();
        let e1 = cl.vector_operator(0).unwrap();
        let out = lift.commutator(&e1).apply(&Spinor::one(1));
        assert!(out.max_abs_diff(&(I * &Spinor::y(1, 1))) < 1e-15);
    }

    #[test]
    fn dense_limit() {
        let cl = Clifford::new(9).unwrap();
        assert!(matches!(cl.vector_operator(0), Err(Error::TooLarge { .. })));
        // matrix-free application still works
        let psi = Spinor::one(9);
        let mut omega = Mat::zeros(19, 19);
        omega[(2, 1)] = 1.0;
        omega[(1, 2)] = -1.0;
        assert!(cl.spin_lift_apply(&omega, &psi).is_ok());
    }

    fn skew_and_vector(n: usize) -> impl Strategy<Value = (Mat, Vec<f64>)> {
        let d = 2 * n + 1;
        (
            proptest::collection::vec(-1.0f64..1.0, d * (d - 1) / 2),
            proptest::collection::vec(-1.0f64..1.0, d),
        )
            .prop_map(move |(upper, v)| {
                let mut m = Mat::zeros(d, d);
                let mut it = upper.into_iter();
                for i in 0..d {
                    for j in i + 1..d {
                        let x = it.next().unwrap();
                        m[(i, j)] = x;
                        m[(j, i)] = -x;
                    }
                }
                (m, v)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn lift_is_equivariant((n, (omega, v)) in (1usize..=4).prop_flat_map(|n| (Just(n), skew_and_vector(n)))) {
            let cl = Clifford::new(n).unwrap();
            let lift = cl.spin_lift(&omega).unwrap();
            let d = cl.frame_dim();
            let mut vop = SpinOperator::zero(n);
            for k in 0..d {
                vop = &vop + &cl.vector_operator(k).unwrap().scale(c(v[k], 0.0));
            }
            let wv: Vec<f64> = (&omega * nalgebra::DVector::from_vec(v.clone())).iter().copied().collect();
            let mut wop = SpinOperator::zero(n);
            for k in 0..d {
                wop = &wop + &cl.vector_operator(k).unwrap().scale(c(wv[k], 0.0));
            }
            prop_assert!((&lift.commutator(&vop) - &wop).max_abs() < 1e-12);
        }

        #[test]
        fn vector_action_squares_to_minus_norm(n in 1usize..=4, seed in proptest::collection::vec(-1.0f64..1.0, 9 + 32)) {
            let cl = Clifford::new(n).unwrap();
            let d = cl.frame_dim();
            let v = &seed[..d];
            let psi = Spinor::from_coeffs(n, (0..1 << n).map(|k| c(seed[9 + k], seed[9 + 16 + k % 16])).collect()).unwrap();
            let vv = cl.apply_vector(v, &cl.apply_vector(v, &psi).unwrap()).unwrap();
            let norm2: f64 = v.iter().map(|x| x * x).sum();
            prop_assert!(vv.max_abs_diff(&(c(-norm2, 0.0) * &psi)) < 1e-12);
        }
    }
}
