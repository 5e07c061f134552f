//! Levi-Civita connection of a left-invariant metric, written in an
//! orthonormal frame.
//!
//! The Nomizu map `Λ(X)Y = ½[X,Y] + U(X,Y)`, with
//! `B(U(X,Y), W) = ½(B([W,X],Y) + B(X,[W,Y]))`, has matrix entries
//!
//! ```text
//! (Λ_i)_kj = B(Λ(e_i) e_j, e_k) = ½ (c_ij^k − c_jk^i + c_ki^j)
//! ```
//!
//! Curvature on left-invariant fields is `R(e_i,e_j) = [Λ_i, Λ_j] − Λ([e_i,e_j])`
//! and `Ric(X) = Σ_j R(X, e_j) e_j`.

use num_complex::Complex64;

use crate::algebra::{LieAlgebra, Mat, MetricLieAlgebra};
use crate::clifford::{Clifford, SpinOperator, Spinor};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct NomizuMap {
    ops: Vec<Mat>,
}

impl NomizuMap {
    pub fn dim(&self) -> usize {
        self.ops.len()
    }

    /// `Λ(e_i)` as a skew matrix; column `j` is `Λ(e_i) e_j`.
    pub fn op(&self, i: usize) -> &Mat {
        &self.ops[i]
    }

    pub fn ops(&self) -> &[Mat] {
        &self.ops
    }

    /// `max |(Λ_i)_kj − (Λ_j)_ki − c_ij^k|`.
    pub fn torsion_defect(&self, ortho: &LieAlgebra) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let t = self.ops[i][(k, j)] - self.ops[j][(k, i)] - ortho.c(i, j, k);
                    worst = worst.max(t.abs());
                }
            }
        }
        worst
    }

    /// `max |Λ_i + Λ_iᵀ|`.
    pub fn metricity_defect(&self) -> f64 {
        self.ops
            .iter()
            .map(|m| (m + m.transpose()).amax())
            .fold(0.0, f64::max)
    }

    /// `Λ̃(e_i) · ψ` without materializing the operator.
    pub fn spin_apply(&self, cl: &Clifford, i: usize, psi: &Spinor) -> Result<Spinor> {
        cl.spin_lift_apply(&self.ops[i], psi)
    }
}

/// Nomizu map of the Levi-Civita connection.
pub fn nomizu(mla: &MetricLieAlgebra) -> NomizuMap {
    nomizu_from_ortho(mla.ortho())
}

/// Nomizu map from structure constants already expressed in an orthonormal frame.
pub fn nomizu_from_ortho(c: &LieAlgebra) -> NomizuMap {
    let d = c.dim();
    let ops = (0..d)
        .map(|i| {
            let mut m = Mat::zeros(d, d);
            for k in 0..d {
                for j in k + 1..d {
                    let v = 0.5 * (c.c(i, j, k) - c.c(j, k, i) + c.c(k, i, j));
                    m[(k, j)] = v;
                    m[(j, k)] = -v;
                }
            }
            m
        })
        .collect();
    NomizuMap { ops }
}

/// Spin lifts `Λ̃_i` of every `Λ_i` as dense operators.
pub fn spin_nomizu(nm: &NomizuMap) -> Result<Vec<SpinOperator>> {
    let cl = Clifford::for_dim(nm.dim())?;
    nm.ops.iter().map(|op| cl.spin_lift(op)).collect()
}

#[derive(Debug, Clone)]
pub struct CurvatureData {
    dim: usize,
    ricci: Mat,
    operators: Vec<Mat>,
}

impl CurvatureData {
    pub fn ricci(&self) -> &Mat {
        &self.ricci
    }

    /// `R(e_i, e_j)` as a skew matrix.
    pub fn operator(&self, i: usize, j: usize) -> &Mat {
        &self.operators[i * self.dim + j]
    }

    pub fn ricci_asymmetry(&self) -> f64 {
        (&self.ricci - self.ricci.transpose()).amax()
    }
}

pub fn curvature(nm: &NomizuMap, mla: &MetricLieAlgebra) -> CurvatureData {
    curvature_from_ortho(nm, mla.ortho())
}

pub fn curvature_from_ortho(nm: &NomizuMap, c: &LieAlgebra) -> CurvatureData {
    let d = nm.dim();
    let mut operators = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut r = nm.op(i) * nm.op(j) - nm.op(j) * nm.op(i);
            for (k, &cijk) in c.bracket_of_basis(i, j).iter().enumerate() {
                if cijk != 0.0 {
                    r -= nm.op(k) * cijk;
                }
            }
            operators.push(r);
        }
    }
    let mut ricci = Mat::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let col = operators[i * d + j].column(j).clone_owned();
            let mut target = ricci.column_mut(i);
            target += col;
        }
    }
    CurvatureData {
        dim: d,
        ricci,
        operators,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorialRicciCheck {
    pub holds: bool,
    /// `max_i |Σ_j e_j · R̃(e_i,e_j) ψ + ½ Ric(e_i) · ψ|`.
    pub max_residual: f64,
}

/// Checks `Σ_j e_j · R̃(X, e_j) · ψ = −½ Ric(X) · ψ` for every frame vector `X`,
/// where `R̃(e_i,e_j) = [Λ̃_i, Λ̃_j] − Σ_k c_ij^k Λ̃_k` is built from the spin lifts.
///
/// Accepted when the residual is at most `tol · max(1, |Ric|) · |ψ|`.
pub fn ricci_spinorial_check(
    nm: &NomizuMap,
    mla: &MetricLieAlgebra,
    psi: &Spinor,
    tol: f64,
) -> Result<SpinorialRicciCheck> {
    let c = mla.ortho();
    let d = nm.dim();
    let cl = Clifford::for_dim(d)?;
    if psi.n() != cl.n() {
        return Err(Error::Structure(format!(
            "spinor has n = {}, algebra needs n = {}",
            psi.n(),
            cl.n()
        )));
    }
    let ricci = curvature(nm, mla).ricci;
    let lifted: Vec<Spinor> = (0..d)
        .map(|k| nm.spin_apply(&cl, k, psi))
        .collect::<Result<_>>()?;
    // twice[i][j] = Λ̃_i Λ̃_j ψ
    let twice: Vec<Vec<Spinor>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| nm.spin_apply(&cl, i, &lifted[j]))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut worst: f64 = 0.0;
    for i in 0..d {
        let mut lhs = Spinor::zero(cl.n());
        for j in 0..d {
            let mut r = &twice[i][j] - &twice[j][i];
            for (k, &cijk) in c.bracket_of_basis(i, j).iter().enumerate() {
                if cijk != 0.0 {
                    r.axpy(Complex64::new(-cijk, 0.0), &lifted[k]);
                }
            }
            lhs = &lhs + &cl.cliff_vector(j, &r)?;
        }
        let ric_i: Vec<f64> = ricci.column(i).iter().copied().collect();
        let rhs = Complex64::new(-0.5, 0.0) * &cl.apply_vector(&ric_i, psi)?;
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    let scale = ricci.amax().max(1.0) * psi.coeffs().iter().fold(0.0f64, |m, z| m.max(z.norm()));
    Ok(SpinorialRicciCheck {
        holds: worst <= tol * scale,
        max_residual: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{metric_from_frame_change, orthonormalize, FrameChange, FrameEntries};
    use crate::catalog::{heisenberg_metric, make_bianchi, BianchiFamily, HeisenbergParams};
    use nalgebra::DVector;

    fn wedge(d: usize, i: usize, j: usize) -> Mat {
        // (e_i∧e_j)(e_i) = e_j
        let mut m = Mat::zeros(d, d);
        m[(j, i)] = 1.0;
        m[(i, j)] = -1.0;
        m
    }

    fn unit_h3() -> MetricLieAlgebra {
        heisenberg_metric(&HeisenbergParams::new(vec![1.0], vec![1.0], 1.0).unwrap()).unwrap()
    }

    #[test]
    fn unit_h3_nomizu() {
        let nm = nomizu(&unit_h3());
        // frame (Z, E, F) = (0, 1, 2)
        assert_eq!(nm.op(0), &(wedge(3, 1, 2) * -0.5));
        assert_eq!(nm.op(1), &(wedge(3, 2, 0) * 0.5));
        assert_eq!(nm.op(2), &(wedge(3, 1, 0) * -0.5));
    }

    #[test]
    fn h5_nomizu_on_centre() {
        let p = HeisenbergParams::new(vec![1.0, 4.0], vec![1.0, 1.0], 1.0).unwrap();
        let nm = nomizu(&heisenberg_metric(&p).unwrap());
        let expected = wedge(5, 1, 2) * -0.5 + wedge(5, 3, 4) * -0.25;
        assert!((nm.op(0) - expected).amax() < 1e-15);
    }

    #[test]
    fn flat_case() {
        let alg = LieAlgebra::abelian(3);
        let m = orthonormalize(&alg, &Mat::identity(3, 3)).unwrap();
        let nm = nomizu(&m);
        assert!(nm.ops().iter().all(|op| op.amax() == 0.0));
        assert!(spin_nomizu(&nm).unwrap().iter().all(|op| op.max_abs() == 0.0));
        assert_eq!(curvature(&nm, &m).ricci(), &Mat::zeros(3, 3));
        let check = ricci_spinorial_check(&nm, &m, &Spinor::y(1, 1), 1e-12).unwrap();
        assert_eq!(check.max_residual, 0.0);
    }

    #[test]
    fn unit_h3_spin_lift_on_one() {
        let nm = nomizu(&unit_h3());
        let lifts = spin_nomizu(&nm).unwrap();
        let one = Spinor::one(1);
        let z = lifts[0].apply(&one);
        assert!(z.max_abs_diff(&(Complex64::new(0.0, -0.25) * &one)) < 1e-15);
        let e = lifts[1].apply(&one);
        assert!(e.max_abs_diff(&(Complex64::new(0.0, 0.25) * &Spinor::y(1, 1))) < 1e-15);
        let f = lifts[2].apply(&one);
        assert!(f.max_abs_diff(&(Complex64::new(0.25, 0.0) * &Spinor::y(1, 1))) < 1e-15);
    }

    #[test]
    fn ricci_values() {
        let m = unit_h3();
        let nm = nomizu(&m);
        let ric = curvature(&nm, &m).ricci().clone();
        assert_eq!(ric, Mat::from_diagonal(&DVector::from_vec(vec![0.5, -0.5, -0.5])));

        let su2 = metric_from_frame_change(&make_bianchi(BianchiFamily::L3Six).unwrap(), &FrameChange::identity(3)).unwrap();
        let nm = nomizu(&su2);
        assert!((curvature(&nm, &su2).ricci() - Mat::identity(3, 3) * 0.5).amax() < 1e-15);
    }

    #[test]
    fn structural_invariants_on_sl2() {
        let p = FrameChange::from_entries(FrameEntries {
            alpha: 0.7,
            beta: -0.3,
            gamma: 0.8,
            epsilon: 1.9,
            zeta: -0.6,
            iota: 1.2,
        })
        .unwrap();
        let m = metric_from_frame_change(&make_bianchi(BianchiFamily::L3Five).unwrap(), &p).unwrap();
        let nm = nomizu(&m);
        assert_eq!(nm.metricity_defect(), 0.0);
        assert!(nm.torsion_defect(m.ortho()) < 1e-12);
        let curv = curvature(&nm, &m);
        assert!(curv.ricci_asymmetry() < 1e-10);
        for i in 0..3 {
            for j in 0..3 {
                let r = curv.operator(i, j);
                assert!((r + r.transpose()).amax() < 1e-12);
            }
        }
        let check = ricci_spinorial_check(&nm, &m, &Spinor::y(1, 1), 1e-10).unwrap();
        assert!(check.holds, "{check:?}");
    }

    #[test]
    fn spinorial_identity_on_unit_h3() {
        let m = unit_h3();
        let check = ricci_spinorial_check(&nomizu(&m), &m, &Spinor::one(1), 1e-12).unwrap();
        assert!(check.holds);
        assert!(check.max_residual < 1e-15);
    }
}
