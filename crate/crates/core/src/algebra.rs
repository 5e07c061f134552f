//! Lie algebras given by structure constants, inner products on them and the
//! orthonormal frames obtained by Gram–Schmidt.
//!
//! Indices are 0-based in code. Reports and JSON files use 1-based indices.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat = DMatrix<f64>;

/// Default relative tolerance for algebraic identity checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Structure constants `c[i][j][k]`, the coefficient of `f_k` in `[f_i, f_j]`.
///
/// Antisymmetry in `(i, j)` holds by construction: only the `i < j` half is
/// ever written and the other half is mirrored.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    c: Vec<f64>,
}

impl LieAlgebra {
    pub fn abelian(dim: usize) -> Self {
        Self {
            dim,
            c: vec![0.0; dim * dim * dim],
        }
    }

    /// Builds an algebra from the brackets `[f_i, f_j]` with `i < j`, 0-based.
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, Vec<f64>)]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Structure("dimension must be positive".into()));
        }
        let mut alg = Self::abelian(dim);
        let mut seen = vec![false; dim * dim];
        for (i, j, coeffs) in brackets {
            let (i, j) = (*i, *j);
            if i >= j || j >= dim {
                return Err(Error::Structure(format!(
                    "bracket indices ({}, {}) must satisfy 1 <= i < j <= {dim}",
                    i + 1,
                    j + 1
                )));
            }
            if coeffs.len() != dim {
                return Err(Error::Structure(format!(
                    "bracket [f{}, f{}] has {} coefficients, expected {dim}",
                    i + 1,
                    j + 1,
                    coeffs.len()
                )));
            }
            if std::mem::replace(&mut seen[i * dim + j], true) {
                return Err(Error::Structure(format!(
                    "bracket [f{}, f{}] listed twice",
                    i + 1,
                    j + 1
                )));
            }
            if coeffs.iter().any(|v| !v.is_finite()) {
                return Err(Error::Structure("non-finite structure constant".into()));
            }
            alg.set_bracket(i, j, coeffs);
        }
        Ok(alg)
    }

    /// Builds an algebra from a full `dim^3` tensor laid out as `c[(i*dim + j)*dim + k]`.
    /// The tensor must already be antisymmetric in its first two indices.
    pub fn from_tensor(dim: usize, c: Vec<f64>) -> Result<Self> {
        if dim == 0 || c.len() != dim * dim * dim {
            return Err(Error::Structure(format!(
                "tensor of length {} does not have shape {dim}x{dim}x{dim}",
                c.len()
            )));
        }
        let alg = Self { dim, c };
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    if alg.c(i, j, k) != -alg.c(j, i, k) {
                        return Err(Error::Structure(format!(
                            "c[{}][{}][{}] is not antisymmetric in its lower indices",
                            i + 1,
                            j + 1,
                            k + 1
                        )));
                    }
                }
            }
        }
        Ok(alg)
    }

    pub(crate) fn set_bracket(&mut self, i: usize, j: usize, coeffs: &[f64]) {
        let d = self.dim;
        for (k, &v) in coeffs.iter().enumerate() {
            self.c[(i * d + j) * d + k] = v;
            self.c[(j * d + i) * d + k] = -v;
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.dim + j) * self.dim + k]
    }

    /// Coefficients of `[f_i, f_j]`.
    pub fn bracket_of_basis(&self, i: usize, j: usize) -> &[f64] {
        let start = (i * self.dim + j) * self.dim;
        &self.c[start..start + self.dim]
    }

    /// Bracket of two vectors given in basis coordinates.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut out = vec![0.0; d];
        for i in 0..d {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..d {
                let w = x[i] * y[j];
                if w == 0.0 {
                    continue;
                }
                for (o, &cij) in out.iter_mut().zip(self.bracket_of_basis(i, j)) {
                    *o += w * cij;
                }
            }
        }
        out
    }

    /// Relabels the basis: new basis vector `i` is old basis vector `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let d = self.dim;
        let mut seen = vec![false; d];
        if perm.len() != d || perm.iter().any(|&p| p >= d || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Structure("not a permutation of the basis".into()));
        }
        let mut out = Self::abelian(d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    out.c[(i * d + j) * d + k] = self.c(perm[i], perm[j], perm[k]);
                }
            }
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |c − c'|` over all entries; infinite for different dimensions.
    pub fn c_distance(&self, other: &LieAlgebra) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.c
            .iter()
            .zip(&other.c)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Nonzero brackets with `i < j`, 0-based.
    pub fn brackets(&self) -> Vec<(usize, usize, Vec<f64>)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let coeffs = self.bracket_of_basis(i, j);
                if coeffs.iter().any(|&v| v != 0.0) {
                    out.push((i, j, coeffs.to_vec()));
                }
            }
        }
        out
    }

    pub fn to_spec(&self) -> AlgebraSpec {
        AlgebraSpec {
            dim: self.dim,
            brackets: self
                .brackets()
                .into_iter()
                .map(|(i, j, coeffs)| BracketSpec {
                    i: i + 1,
                    j: j + 1,
                    coeffs,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiCheck {
    pub holds: bool,
    pub max_violation: f64,
}

/// Evaluates `[[f_i, f_j], f_k] + cyclic` for every `i, j, k`.
///
/// The identity is accepted when the largest absolute violation is at most
/// `tol * max(1, max|c|^2)`, since the Jacobi sum is quadratic in `c`.
pub fn check_jacobi(alg: &LieAlgebra, tol: f64) -> JacobiCheck {
    let d = alg.dim();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let mut s = 0.0;
                    for m in 0..d {
                        s += alg.c(i, j, m) * alg.c(m, k, l)
                            + alg.c(j, k, m) * alg.c(m, i, l)
                            + alg.c(k, i, m) * alg.c(m, j, l);
                    }
                    worst = worst.max(s.abs());
                }
            }
        }
    }
    let scale = alg.max_abs().powi(2).max(1.0);
    JacobiCheck {
        holds: worst <= tol * scale,
        max_violation: worst,
    }
}

/// The six entries of a 3×3 upper-triangular frame change
/// `P = (α, β, γ; 0, ε, ζ; 0, 0, ι)`, so that
/// `e₁ = α f₁`, `e₂ = β f₁ + ε f₂`, `e₃ = γ f₁ + ζ f₂ + ι f₃`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameEntries {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub epsilon: f64,
    pub zeta: f64,
    pub iota: f64,
}

impl FrameEntries {
    pub const IDENTITY: FrameEntries = FrameEntries {
        alpha: 1.0,
        beta: 0.0,
        gamma: 0.0,
        epsilon: 1.0,
        zeta: 0.0,
        iota: 1.0,
    };

    pub fn det(&self) -> f64 {
        self.alpha * self.epsilon * self.iota
    }
}

/// Upper-triangular change of basis with positive diagonal. Column `i` holds
/// the coordinates of the orthonormal vector `e_i` in the original basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameChange {
    matrix: Mat,
}

impl FrameChange {
    pub fn new(matrix: Mat) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::InvalidFrame(format!(
                "frame matrix must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let d = matrix.nrows();
        for i in 0..d {
            for j in 0..d {
                let v = matrix[(i, j)];
                if !v.is_finite() {
                    return Err(Error::InvalidFrame("non-finite entry".into()));
                }
                if i > j && v != 0.0 {
                    return Err(Error::InvalidFrame(format!(
                        "entry ({}, {}) below the diagonal must be zero",
                        i + 1,
                        j + 1
                    )));
                }
            }
            if matrix[(i, i)] <= 0.0 {
                return Err(Error::InvalidFrame(format!(
                    "diagonal entry {} must be strictly positive, got {}",
                    i + 1,
                    matrix[(i, i)]
                )));
            }
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: Mat::identity(dim, dim),
        }
    }

    pub fn from_entries(e: FrameEntries) -> Result<Self> {
        Self::new(Mat::from_row_slice(
            3,
            3,
            &[
                e.alpha, e.beta, e.gamma, //
                0.0, e.epsilon, e.zeta, //
                0.0, 0.0, e.iota,
            ],
        ))
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn det(&self) -> f64 {
        self.matrix.diagonal().iter().product()
    }

    /// The named entries of a 3×3 frame change.
    pub fn entries(&self) -> Result<FrameEntries> {
        if self.dim() != 3 {
            return Err(Error::Structure(format!(
                "named frame entries need a 3x3 frame, got {}x{}",
                self.dim(),
                self.dim()
            )));
        }
        let m = &self.matrix;
        Ok(FrameEntries {
            alpha: m[(0, 0)],
            beta: m[(0, 1)],
            gamma: m[(0, 2)],
            epsilon: m[(1, 1)],
            zeta: m[(1, 2)],
            iota: m[(2, 2)],
        })
    }

    /// The inner product `(P Pᵀ)⁻¹` that makes the columns of `P` orthonormal.
    pub fn gram(&self) -> Mat {
        let inv = upper_inverse(&self.matrix);
        let g = inv.transpose() * &inv;
        symmetrize(&g)
    }
}

/// A Lie algebra together with an inner product and its Gram–Schmidt frame.
#[derive(Debug, Clone)]
pub struct MetricLieAlgebra {
    algebra: LieAlgebra,
    gram: Mat,
    frame: Mat,
    ortho: LieAlgebra,
}

impl MetricLieAlgebra {
    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    /// Inner product in the original basis.
    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    /// Columns are the orthonormal frame vectors in original coordinates.
    pub fn frame(&self) -> &Mat {
        &self.frame
    }

    /// Structure constants in the orthonormal frame.
    pub fn ortho(&self) -> &LieAlgebra {
        &self.ortho
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `max |frameᵀ · gram · frame − Id|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let m = self.frame.transpose() * &self.gram * &self.frame;
        (m - Mat::identity(self.dim(), self.dim())).amax()
    }
}

/// Gram–Schmidt of the ordered basis with respect to `gram`.
pub fn orthonormalize(alg: &LieAlgebra, gram: &Mat) -> Result<MetricLieAlgebra> {
    let d = alg.dim();
    if gram.nrows() != d || gram.ncols() != d {
        return Err(Error::InvalidMetric(format!(
            "gram matrix is {}x{}, algebra has dimension {d}",
            gram.nrows(),
            gram.ncols()
        )));
    }
    if gram.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidMetric("non-finite gram entry".into()));
    }
    let scale = gram.amax();
    let asym = (gram - gram.transpose()).amax();
    if asym > 1e-12 * scale.max(1.0) {
        return Err(Error::InvalidMetric(format!(
            "gram matrix is not symmetric (defect {asym:.3e})"
        )));
    }
    let gram = symmetrize(gram);
    let inner = |x: &[f64], y: &[f64]| -> f64 {
        let mut s = 0.0;
        for a in 0..d {
            for b in 0..d {
                s += x[a] * gram[(a, b)] * y[b];
            }
        }
        s
    };

    let mut frame = Mat::zeros(d, d);
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(d);
    for k in 0..d {
        let mut v = vec![0.0; d];
        v[k] = 1.0;
        let own = gram[(k, k)];
        // modified Gram–Schmidt, two passes for stability
        for _ in 0..2 {
            for e in &cols {
                let proj = inner(&v, e);
                for (vi, ei) in v.iter_mut().zip(e) {
                    *vi -= proj * ei;
                }
            }
        }
        let norm2 = inner(&v, &v);
        if !(norm2 > 1e-14 * own.abs().max(f64::MIN_POSITIVE)) || own <= 0.0 {
            return Err(Error::InvalidMetric(
                "gram matrix is not positive-definite".into(),
            ));
        }
        let norm = norm2.sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        // e_k only involves f_1..f_k, so the frame is upper-triangular
        debug_assert!(v[k + 1..].iter().all(|&x| x == 0.0));
        for (i, &x) in v.iter().enumerate() {
            frame[(i, k)] = x;
        }
        cols.push(v);
    }
    let ortho = structure_in_frame(alg, &frame);
    Ok(MetricLieAlgebra {
        algebra: alg.clone(),
        gram,
        frame,
        ortho,
    })
}

/// The metric making `e_i = Σ_k P_ki f_k` orthonormal.
pub fn metric_from_frame_change(alg: &LieAlgebra, p: &FrameChange) -> Result<MetricLieAlgebra> {
    if p.dim() != alg.dim() {
        return Err(Error::InvalidFrame(format!(
            "frame is {}x{}, algebra has dimension {}",
            p.dim(),
            p.dim(),
            alg.dim()
        )));
    }
    let frame = p.matrix().clone();
    Ok(MetricLieAlgebra {
        algebra: alg.clone(),
        gram: p.gram(),
        ortho: structure_in_frame(alg, &frame),
        frame,
    })
}

/// Re-expresses the structure constants in the basis given by the columns of
/// an invertible upper-triangular `frame`.
fn structure_in_frame(alg: &LieAlgebra, frame: &Mat) -> LieAlgebra {
    let d = alg.dim();
    let cols: Vec<Vec<f64>> = (0..d)
        .map(|i| frame.column(i).iter().copied().collect())
        .collect();
    let mut out = LieAlgebra::abelian(d);
    for i in 0..d {
        for j in i + 1..d {
            let br = nalgebra::DVector::from_vec(alg.bracket(&cols[i], &cols[j]));
            let coeffs = frame
                .solve_upper_triangular(&br)
                .expect("frame has a positive diagonal");
            out.set_bracket(i, j, coeffs.as_slice());
        }
    }
    out
}

pub(crate) fn upper_inverse(m: &Mat) -> Mat {
    let d = m.nrows();
    m.solve_upper_triangular(&Mat::identity(d, d))
        .expect("upper-triangular matrix with positive diagonal")
}

pub(crate) fn symmetrize(m: &Mat) -> Mat {
    (m + m.transpose()) * 0.5
}

// ---------------------------------------------------------------------------
// JSON formats

/// `{ "dim": d, "brackets": [ {"i": i, "j": j, "coeffs": [...]}, ... ] }`,
/// 1-based, `i < j` only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub dim: usize,
    pub brackets: Vec<BracketSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketSpec {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<f64>,
}

impl AlgebraSpec {
    pub fn build(&self) -> Result<LieAlgebra> {
        let mut brackets = Vec::with_capacity(self.brackets.len());
        for b in &self.brackets {
            if b.i == 0 || b.j == 0 {
                return Err(Error::Structure(
                    "bracket indices are 1-based; 0 is not a valid index".into(),
                ));
            }
            brackets.push((b.i - 1, b.j - 1, b.coeffs.clone()));
        }
        LieAlgebra::from_brackets(self.dim, &brackets)
    }
}

/// `{ "gram": [[...]] }` or `{ "frame_P": {"alpha": ..., ...} }`. A full
/// upper-triangular matrix is also accepted for `frame_P`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetricSpec {
    Gram {
        gram: Vec<Vec<f64>>,
    },
    Frame {
        #[serde(rename = "frame_P")]
        frame_p: FrameSpec,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FrameSpec {
    Entries(FrameEntries),
    Matrix(Vec<Vec<f64>>),
}

impl MetricSpec {
    pub fn build(&self, alg: &LieAlgebra) -> Result<MetricLieAlgebra> {
        match self {
            MetricSpec::Gram { gram } => orthonormalize(alg, &rows_to_matrix(gram)?),
            MetricSpec::Frame { frame_p } => {
                let p = match frame_p {
                    FrameSpec::Entries(e) => FrameChange::from_entries(*e)?,
                    FrameSpec::Matrix(rows) => FrameChange::new(rows_to_matrix(rows)?)?,
                };
                metric_from_frame_change(alg, &p)
            }
        }
    }
}

pub fn rows_to_matrix(rows: &[Vec<f64>]) -> Result<Mat> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Structure("matrix rows must be non-empty and of equal length".into()));
    }
    Ok(Mat::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

pub fn matrix_to_rows(m: &Mat) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heisenberg3() -> LieAlgebra {
        LieAlgebra::from_brackets(3, &[(1, 2, vec![1.0, 0.0, 0.0])]).unwrap()
    }

    #[test]
    fn jacobi_holds_for_h3() {
        let check = check_jacobi(&heisenberg3(), DEFAULT_TOL);
        assert!(check.holds);
        assert_eq!(check.max_violation, 0.0);
    }

    #[test]
    fn jacobi_detects_broken_bracket() {
        // [f1,f2] = f3, [f2,f3] = f2: the cyclic sum on (1,2,3) is f3
        let alg = LieAlgebra::from_brackets(
            3,
            &[(0, 1, vec![0.0, 0.0, 1.0]), (1, 2, vec![0.0, 1.0, 0.0])],
        )
        .unwrap();
        let check = check_jacobi(&alg, DEFAULT_TOL);
        assert!(!check.holds);
        assert_eq!(check.max_violation, 1.0);
    }

    #[test]
    fn symmetric_ad_tensor_is_still_a_lie_algebra() {
        // [f1,f2] = f3, [f1,f3] = f2 only: ad(f1) is symmetric, but the single
        // independent cyclic sum vanishes, so Jacobi holds.
        let alg = LieAlgebra::from_brackets(
            3,
            &[(0, 1, vec![0.0, 0.0, 1.0]), (0, 2, vec![0.0, 1.0, 0.0])],
        )
        .unwrap();
        assert!(check_jacobi(&alg, DEFAULT_TOL).holds);
    }

    #[test]
    fn bracket_validation() {
        assert!(matches!(
            LieAlgebra::from_brackets(3, &[(1, 1, vec![0.0; 3])]),
            Err(Error::Structure(_))
        ));
        assert!(matches!(
            LieAlgebra::from_brackets(3, &[(0, 1, vec![0.0; 2])]),
            Err(Error::Structure(_))
        ));
        assert!(matches!(
            LieAlgebra::from_tensor(2, vec![0.0; 7]),
            Err(Error::Structure(_))
        ));
        let mut t = vec![0.0; 8];
        t[2] = 1.0;
        assert!(matches!(LieAlgebra::from_tensor(2, t), Err(Error::Structure(_))));
    }

    #[test]
    fn identity_gram_keeps_structure_constants() {
        let alg = heisenberg3();
        let m = orthonormalize(&alg, &Mat::identity(3, 3)).unwrap();
        assert_eq!(m.frame(), &Mat::identity(3, 3));
        assert_eq!(m.ortho(), &alg);
    }

    #[test]
    fn h3_diagonal_gram() {
        let (a, b, c): (f64, f64, f64) = (2.0, 3.0, 5.0);
        let gram = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0 / c, 1.0 / a, 1.0 / b]));
        let m = orthonormalize(&heisenberg3(), &gram).unwrap();
        let expected = [c.sqrt(), a.sqrt(), b.sqrt()];
        for i in 0..3 {
            assert!((m.frame()[(i, i)] - expected[i]).abs() < 1e-14);
        }
        // e2 = √a Ê, e3 = √b F̂, e1 = √c Ẑ, so [e2, e3] = √(ab/c) e1
        assert!((m.ortho().c(1, 2, 0) - (a * b / c).sqrt()).abs() < 1e-14);
        assert!(m.orthonormality_defect() < 1e-14);
    }

    #[test]
    fn rejects_indefinite_and_asymmetric_gram() {
        let alg = heisenberg3();
        let indefinite = Mat::from_row_slice(3, 3, &[1.0, 2.0, 0.0, 2.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        assert!(matches!(orthonormalize(&alg, &indefinite), Err(Error::InvalidMetric(_))));
        let asym = Mat::from_row_slice(3, 3, &[1.0, 0.5, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        assert!(matches!(orthonormalize(&alg, &asym), Err(Error::InvalidMetric(_))));
        assert!(matches!(
            orthonormalize(&alg, &Mat::identity(2, 2)),
            Err(Error::InvalidMetric(_))
        ));
    }

    #[test]
    fn frame_change_validation() {
        let mut e = FrameEntries::IDENTITY;
        e.epsilon = 0.0;
        assert!(matches!(FrameChange::from_entries(e), Err(Error::InvalidFrame(_))));
        let lower = Mat::from_row_slice(2, 2, &[1.0, 0.0, 1.0, 1.0]);
        assert!(matches!(FrameChange::new(lower), Err(Error::InvalidFrame(_))));
    }

    #[test]
    fn identity_frame_gives_identity_gram() {
        let m = metric_from_frame_change(&heisenberg3(), &FrameChange::identity(3)).unwrap();
        assert_eq!(m.gram(), &Mat::identity(3, 3));
    }

    #[test]
    fn frame_change_matches_gram_schmidt() {
        let alg = heisenberg3();
        let p = FrameChange::from_entries(FrameEntries {
            alpha: 2.0,
            beta: 3.0,
            gamma: -0.5,
            epsilon: 1.5,
            zeta: 0.25,
            iota: 0.7,
        })
        .unwrap();
        let a = metric_from_frame_change(&alg, &p).unwrap();
        let b = orthonormalize(&alg, &p.gram()).unwrap();
        assert!((a.frame() - b.frame()).amax() < 1e-12);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert!((a.ortho().c(i, j, k) - b.ortho().c(i, j, k)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn json_formats() {
        let spec: AlgebraSpec =
            serde_json::from_str(r#"{"dim":3,"brackets":[{"i":2,"j":3,"coeffs":[1,0,0]}]}"#)
                .unwrap();
        assert_eq!(spec.build().unwrap(), heisenberg3());
        assert_eq!(heisenberg3().to_spec(), spec);

        let metric: MetricSpec = serde_json::from_str(
            r#"{"frame_P":{"alpha":1,"beta":0,"gamma":0,"epsilon":1,"zeta":0,"iota":1}}"#,
        )
        .unwrap();
        assert!(matches!(metric, MetricSpec::Frame { frame_p: FrameSpec::Entries(_) }));
        let metric: MetricSpec = serde_json::from_str(r#"{"gram":[[1,0,0],[0,1,0],[0,0,1]]}"#).unwrap();
        let m = metric.build(&heisenberg3()).unwrap();
        assert_eq!(m.frame(), &Mat::identity(3, 3));

        let zero_index: AlgebraSpec =
            serde_json::from_str(r#"{"dim":3,"brackets":[{"i":0,"j":3,"coeffs":[1,0,0]}]}"#).unwrap();
        assert!(zero_index.build().is_err());
    }
}
