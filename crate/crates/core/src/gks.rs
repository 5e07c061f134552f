//! Invariant generalised Killing spinors.
//!
//! An invariant spinor `ψ` is generalised Killing when `Λ̃(X)·ψ = A(X)·ψ` for
//! a symmetric endomorphism `A`. For a fixed `ψ ≠ 0` the map `v ↦ v·ψ` is
//! injective, so each column of `A` is the unique solution of a real linear
//! least-squares problem and the question reduces to whether that problem is
//! consistent and its solution symmetric.
//!
//! In dimension 3 the candidate obtained from `ψ = 1` works for every spinor
//! simultaneously, so the invariant GK space is either all of Σ or zero.
//! Higher dimensions only report on the spinor that was tested.

use std::collections::BTreeMap;

use nalgebra::{DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::algebra::{metric_from_frame_change, LieAlgebra, Mat, MetricLieAlgebra, DEFAULT_TOL};
use crate::catalog::{make_bianchi, BianchiFamily};
use crate::clifford::{spinor_to_real, Clifford, Spinor};
use crate::connection::{curvature, nomizu, NomizuMap};
use crate::error::{Error, Result};
use crate::sampling::sample_frames;

/// Default relative gap below which eigenvalues are counted as equal.
pub const DEFAULT_GAP_TOL: f64 = 1e-7;

#[derive(Debug, Clone)]
pub struct EndomorphismSolve {
    /// Column `i` is `A(e_i)` in frame coordinates.
    pub a: Mat,
    /// `max_i |M a_i − r_i| / |r_i|`.
    pub residual: f64,
    /// Whether `v ↦ v·ψ` has full column rank.
    pub full_rank: bool,
}

/// Solves `v·ψ = Λ̃(e_i)·ψ` for every frame vector `e_i`.
pub fn solve_endomorphism(mla: &MetricLieAlgebra, psi: &Spinor) -> Result<EndomorphismSolve> {
    let nm = nomizu(mla);
    solve_with(&nm, psi)
}

pub(crate) fn solve_with(nm: &NomizuMap, psi: &Spinor) -> Result<EndomorphismSolve> {
    let d = nm.dim();
    let cl = Clifford::for_dim(d)?;
    if psi.n() != cl.n() {
        return Err(Error::Structure(format!(
            "spinor has n = {}, algebra needs n = {}",
            psi.n(),
            cl.n()
        )));
    }
    if psi.is_zero() {
        return Err(Error::ZeroSpinor);
    }
    let m = cl.real_action_matrix(psi)?;
    let mut rhs = Mat::zeros(m.nrows(), d);
    for i in 0..d {
        rhs.set_column(i, &spinor_to_real(&nm.spin_apply(&cl, i, psi)?));
    }
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let full_rank = smin > 1e-12 * smax;
    let a = svd
        .solve(&rhs, 1e-12 * smax)
        .map_err(|e| Error::Structure(e.to_string()))?;
    let fitted = &m * &a;
    let psi_norm = psi.norm();
    let residual = (0..d)
        .map(|i| {
            let err = (fitted.column(i) - rhs.column(i)).norm();
            let scale = rhs.column(i).norm();
            if scale > 0.0 {
                err / scale
            } else {
                err / psi_norm
            }
        })
        .fold(0.0, f64::max);
    Ok(EndomorphismSolve {
        a,
        residual,
        full_rank,
    })
}

/// Best symmetric fit `A = Aᵀ` to all `d` equations at once; returns the
/// residual relative to the stacked right-hand side.
pub fn symmetric_fit_residual(mla: &MetricLieAlgebra, psi: &Spinor) -> Result<f64> {
    let nm = nomizu(mla);
    let d = nm.dim();
    let cl = Clifford::for_dim(d)?;
    if psi.is_zero() {
        return Err(Error::ZeroSpinor);
    }
    let m = cl.real_action_matrix(psi)?;
    let rows = m.nrows();
    let unknowns: Vec<(usize, usize)> = (0..d).flat_map(|k| (k..d).map(move |l| (k, l))).collect();
    let mut big = Mat::zeros(d * rows, unknowns.len());
    let mut rhs = DVector::zeros(d * rows);
    for i in 0..d {
        let r = spinor_to_real(&nm.spin_apply(&cl, i, psi)?);
        rhs.rows_mut(i * rows, rows).copy_from(&r);
    }
    for (u, &(k, l)) in unknowns.iter().enumerate() {
        // A_kl = A_lk: the e_k component of A(e_l) and the e_l component of A(e_k)
        let mut col = big.column_mut(u);
        let mut block = col.rows_mut(l * rows, rows);
        block += m.column(k);
        if k != l {
            let mut block = col.rows_mut(k * rows, rows);
            block += m.column(l);
        }
    }
    let svd = big.clone().svd(true, true);
    let eps = 1e-12 * svd.singular_values.max();
    let x = svd.solve(&rhs, eps).map_err(|e| Error::Structure(e.to_string()))?;
    let scale = rhs.norm();
    let err = (&big * x - &rhs).norm();
    Ok(if scale > 0.0 { err / scale } else { err })
}

/// `max_i |Λ̃(e_i)·ψ − (A e_i)·ψ|`.
pub fn gk_equation_residual(nm: &NomizuMap, a: &Mat, psi: &Spinor) -> Result<f64> {
    let d = nm.dim();
    let cl = Clifford::for_dim(d)?;
    let mut worst: f64 = 0.0;
    for i in 0..d {
        let lhs = nm.spin_apply(&cl, i, psi)?;
        let col: Vec<f64> = a.column(i).iter().copied().collect();
        let rhs = cl.apply_vector(&col, psi)?;
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    Ok(worst)
}

/// The closed-form endomorphism for `ψ = 1` in dimension 3, read off the
/// orthonormal structure constants.
pub fn explicit_a_3d(ortho: &LieAlgebra) -> Result<Mat> {
    if ortho.dim() != 3 {
        return Err(Error::UnsupportedDimension(ortho.dim()));
    }
    let c = |i: usize, j: usize, k: usize| ortho.c(i - 1, j - 1, k - 1);
    let (c123, c132, c231) = (c(1, 2, 3), c(1, 3, 2), c(2, 3, 1));
    Ok(Mat::from_row_slice(
        3,
        3,
        &[
            0.25 * (c123 - c132 - c231),
            -0.5 * c(2, 3, 2),
            -0.5 * c(2, 3, 3),
            0.5 * c(1, 3, 1),
            0.25 * (c123 + c132 + c231),
            0.5 * c(1, 3, 3),
            -0.5 * c(1, 2, 1),
            -0.5 * c(1, 2, 2),
            0.25 * (-c123 - c132 + c231),
        ],
    ))
}

/// `¼(c₁₂³ − c₁₃² + c₂₃¹)`, the Dirac eigenvalue in dimension 3.
pub fn dirac_eigenvalue_3d(ortho: &LieAlgebra) -> Result<f64> {
    if ortho.dim() != 3 {
        return Err(Error::UnsupportedDimension(ortho.dim()));
    }
    Ok(0.25 * (ortho.c(0, 1, 2) - ortho.c(0, 2, 1) + ortho.c(1, 2, 0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryConditions {
    pub holds: bool,
    /// `c₁₃¹ + c₂₃²`, `c₁₂¹ − c₂₃³`, `c₁₂² + c₁₃³`.
    pub residuals: [f64; 3],
}

/// The three linear conditions on the structure constants equivalent to the
/// symmetry of [`explicit_a_3d`]. Tolerance is relative to `max(1, max|c|)`.
pub fn symmetry_conditions_3d(ortho: &LieAlgebra, tol: f64) -> Result<SymmetryConditions> {
    if ortho.dim() != 3 {
        return Err(Error::UnsupportedDimension(ortho.dim()));
    }
    let c = |i: usize, j: usize, k: usize| ortho.c(i - 1, j - 1, k - 1);
    let residuals = [
        c(1, 3, 1) + c(2, 3, 2),
        c(1, 2, 1) - c(2, 3, 3),
        c(1, 2, 2) + c(1, 3, 3),
    ];
    let bound = tol * ortho.max_abs().max(1.0);
    Ok(SymmetryConditions {
        holds: residuals.iter().all(|r| r.abs() <= bound),
        residuals,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenAnalysis {
    /// Ascending.
    pub values: Vec<f64>,
    pub distinct_count: usize,
}

/// Eigenvalues of a symmetric matrix and the number of distinct values, where
/// neighbours closer than `gap_tol · max(1, spectral radius)` are merged.
pub fn eigen_analysis(a: &Mat, gap_tol: f64) -> Result<EigenAnalysis> {
    if !a.is_square() {
        return Err(Error::Structure("eigen analysis needs a square matrix".into()));
    }
    let asym = (a - a.transpose()).amax();
    if asym > DEFAULT_TOL * a.amax().max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    let sym = (a + a.transpose()) * 0.5;
    let mut values: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    let radius = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let threshold = gap_tol * radius.max(1.0);
    let distinct_count = if values.is_empty() {
        0
    } else {
        1 + values.windows(2).filter(|w| w[1] - w[0] > threshold).count()
    };
    Ok(EigenAnalysis {
        values,
        distinct_count,
    })
}

/// Outcome for the space of invariant GK spinors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GkSpace {
    /// Dimension 3: the complex dimension of the invariant GK space (0 or 2).
    Dimension(usize),
    /// Higher dimensions: only `ψ = 1` was tested.
    TestedSpinor { is_gk: bool },
}

#[derive(Debug, Clone)]
pub struct GkReport {
    pub dim: usize,
    pub a: Mat,
    pub solve_residual: f64,
    pub full_rank: bool,
    pub symmetric: bool,
    /// `A − Aᵀ`.
    pub asymmetry: Mat,
    pub asymmetry_norm: f64,
    pub eigenvalues: Option<Vec<f64>>,
    pub distinct_count: Option<usize>,
    /// `tr A`.
    pub dirac_eigenvalue: f64,
    pub ricci: Mat,
    /// `max |[A, Ric]|`.
    pub commutator_norm: f64,
    pub gk_space: GkSpace,
    /// In dimension 3 with symmetric `A`: the GK equation residual over the
    /// basis spinors `1` and `y₁`.
    pub basis_residual: Option<f64>,
}

impl GkReport {
    pub fn gks_space_dim(&self) -> Option<usize> {
        match self.gk_space {
            GkSpace::Dimension(d) => Some(d),
            GkSpace::TestedSpinor { .. } => None,
        }
    }

    /// Whether the tested spinor `ψ = 1` is generalised Killing.
    pub fn spinor_is_gk(&self) -> bool {
        match self.gk_space {
            GkSpace::Dimension(d) => d > 0,
            GkSpace::TestedSpinor { is_gk } => is_gk,
        }
    }

    /// A short description of the outcome.
    pub fn verdict(&self) -> &'static str {
        let compatible = self.solve_residual <= DEFAULT_TOL.max(1e-6);
        match (self.spinor_is_gk(), compatible, self.symmetric) {
            (true, _, _) => "generalised Killing",
            (false, true, false) => "compatible endomorphism is not symmetric",
            (false, false, _) => "no compatible endomorphism",
            (false, true, true) => "not generalised Killing",
        }
    }
}

/// Runs the solver on `ψ = 1`, decides symmetry, analyses the spectrum and
/// compares with the Ricci endomorphism.
pub fn full_report(mla: &MetricLieAlgebra, tol: f64, gap_tol: f64) -> Result<GkReport> {
    let d = mla.dim();
    let cl = Clifford::for_dim(d)?;
    let nm = nomizu(mla);
    let one = Spinor::one(cl.n());
    let solve = solve_with(&nm, &one)?;
    let a = solve.a;
    let asymmetry = &a - a.transpose();
    let asymmetry_norm = asymmetry.amax();
    let symmetric = asymmetry_norm <= tol * a.amax().max(1.0);
    let consistent = solve.residual <= tol;

    let (eigenvalues, distinct_count) = if symmetric {
        let e = eigen_analysis(&((&a + a.transpose()) * 0.5), gap_tol)?;
        (Some(e.values), Some(e.distinct_count))
    } else {
        (None, None)
    };
    let ricci = curvature(&nm, mla).ricci().clone();
    let commutator_norm = (&a * &ricci - &ricci * &a).amax();

    let is_gk = consistent && symmetric;
    let (gk_space, basis_residual) = if d == 3 {
        if is_gk {
            let r = [Spinor::one(1), Spinor::y(1, 1)]
                .iter()
                .map(|psi| gk_equation_residual(&nm, &a, psi))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            (GkSpace::Dimension(cl.spinor_dim()), Some(r))
        } else {
            (GkSpace::Dimension(0), None)
        }
    } else {
        (GkSpace::TestedSpinor { is_gk }, None)
    };

    Ok(GkReport {
        dim: d,
        dirac_eigenvalue: a.trace(),
        a,
        solve_residual: solve.residual,
        full_rank: solve.full_rank,
        symmetric,
        asymmetry,
        asymmetry_norm,
        eigenvalues,
        distinct_count,
        ricci,
        commutator_norm,
        gk_space,
        basis_residual,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepStats {
    pub family: BianchiFamily,
    pub samples: usize,
    pub seed: u64,
    /// Number of samples per invariant GK space dimension.
    pub gk_dims: BTreeMap<usize, usize>,
    /// Histogram of distinct eigenvalue counts over samples with GK spinors.
    pub r_histogram: BTreeMap<usize, usize>,
    /// Most frequent `r` (ties go to the larger value).
    pub modal_r: Option<usize>,
    pub below_three: usize,
    pub below_modal: usize,
    pub max_commutator: f64,
}

impl SweepStats {
    pub fn fraction_below_three(&self) -> f64 {
        self.below_three as f64 / self.samples.max(1) as f64
    }

    pub fn fraction_below_modal(&self) -> f64 {
        self.below_modal as f64 / self.samples.max(1) as f64
    }

    /// The GK space dimension if every sample agreed on it.
    pub fn uniform_gk_dim(&self) -> Option<usize> {
        match self.gk_dims.len() {
            1 => self.gk_dims.keys().next().copied(),
            _ => None,
        }
    }
}

/// Full reports over `samples` random frames of one family.
///
/// Samples are evaluated in parallel; the frames come from one seeded stream
/// and results are kept in sample order, so output depends only on the seed.
pub fn sweep_reports(
    family: BianchiFamily,
    samples: usize,
    seed: u64,
    tol: f64,
    gap_tol: f64,
) -> Result<Vec<(crate::algebra::FrameChange, GkReport)>> {
    let alg = make_bianchi(family)?;
    sample_frames(3, samples, seed)
        .into_par_iter()
        .map(|p| {
            let mla = metric_from_frame_change(&alg, &p)?;
            let report = full_report(&mla, tol, gap_tol)?;
            Ok((p, report))
        })
        .collect()
}

pub fn genericity_sweep(
    family: BianchiFamily,
    samples: usize,
    seed: u64,
    tol: f64,
    gap_tol: f64,
) -> Result<SweepStats> {
    let reports = sweep_reports(family, samples, seed, tol, gap_tol)?;
    let mut gk_dims = BTreeMap::new();
    let mut r_histogram = BTreeMap::new();
    let mut max_commutator: f64 = 0.0;
    for (_, r) in &reports {
        *gk_dims.entry(r.gks_space_dim().unwrap_or(0)).or_insert(0) += 1;
        if r.spinor_is_gk() {
            if let Some(k) = r.distinct_count {
                *r_histogram.entry(k).or_insert(0) += 1;
            }
            max_commutator = max_commutator.max(r.commutator_norm);
        }
    }
    let modal_r = r_histogram
        .iter()
        .max_by_key(|&(&r, &count)| (count, r))
        .map(|(&r, _)| r);
    let below = |limit: usize| r_histogram.iter().filter(|(&r, _)| r < limit).map(|(_, &c)| c).sum();
    Ok(SweepStats {
        family,
        samples,
        seed,
        below_three: below(3),
        below_modal: modal_r.map_or(0, below),
        gk_dims,
        r_histogram,
        modal_r,
        max_commutator,
    })
}
