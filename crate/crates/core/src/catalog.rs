//! Named algebras: the non-abelian 3-dimensional families L(3,·) and the
//! Heisenberg algebras h_{2n+1}.
//!
//! The closed-form matrices in this module are reference values. They are
//! written down independently of the connection/solver pipeline and the tests
//! compare the two, never derive one from the other.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;

use crate::algebra::{orthonormalize, FrameChange, LieAlgebra, Mat, MetricLieAlgebra};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BianchiFamily {
    /// `[f1,f2] = f1`
    L3Minus1,
    /// Heisenberg, `[f2,f3] = f1`
    L3One,
    /// `[f1,f3] = f1`, `[f2,f3] = x f2`, `0 < |x| <= 1`
    L3Two(f64),
    /// `[f1,f3] = f1`, `[f2,f3] = f1 + f2`
    L3Three,
    /// `[f1,f3] = x f1 - f2`, `[f2,f3] = f1 + x f2`, `x >= 0`
    L3Four(f64),
    /// sl(2,R)
    L3Five,
    /// su(2)
    L3Six,
}

impl BianchiFamily {
    pub const PARAMETER_FREE: [BianchiFamily; 5] = [
        BianchiFamily::L3Minus1,
        BianchiFamily::L3One,
        BianchiFamily::L3Three,
        BianchiFamily::L3Five,
        BianchiFamily::L3Six,
    ];

    pub fn validate(&self) -> Result<()> {
        match *self {
            BianchiFamily::L3Two(x) if !(x != 0.0 && x.abs() <= 1.0) => Err(
                Error::InvalidParameter(format!("L3(2,x) needs 0 < |x| <= 1, got x = {x}")),
            ),
            BianchiFamily::L3Four(x) if !(x >= 0.0 && x.is_finite()) => Err(
                Error::InvalidParameter(format!("L3(4,x) needs x >= 0, got x = {x}")),
            ),
            _ => Ok(()),
        }
    }

    /// Whether the GK endomorphism is symmetric for every metric: always for
    /// L(3,1), L(3,5), L(3,6); only at `x = -1` for L(3,2,x) and `x = 0` for
    /// L(3,4,x); never otherwise.
    pub fn has_symmetric_endomorphism(&self) -> bool {
        match *self {
            BianchiFamily::L3One | BianchiFamily::L3Five | BianchiFamily::L3Six => true,
            BianchiFamily::L3Two(x) => x == -1.0,
            BianchiFamily::L3Four(x) => x == 0.0,
            BianchiFamily::L3Minus1 | BianchiFamily::L3Three => false,
        }
    }

    /// Expected `(dim of the invariant GK space, generic number of distinct
    /// eigenvalues)`; `None` when there are no GK spinors.
    pub fn expected_gk_profile(&self) -> (usize, Option<usize>) {
        match *self {
            BianchiFamily::L3One => (2, Some(2)),
            f if f.has_symmetric_endomorphism() => (2, Some(3)),
            _ => (0, None),
        }
    }
}

impl fmt::Display for BianchiFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BianchiFamily::L3Minus1 => write!(f, "L3(-1)"),
            BianchiFamily::L3One => write!(f, "L3(1)"),
            BianchiFamily::L3Two(x) => write!(f, "L3(2,{x})"),
            BianchiFamily::L3Three => write!(f, "L3(3)"),
            BianchiFamily::L3Four(x) => write!(f, "L3(4,{x})"),
            BianchiFamily::L3Five => write!(f, "L3(5)"),
            BianchiFamily::L3Six => write!(f, "L3(6)"),
        }
    }
}

/// A catalog name as accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CatalogName {
    Bianchi(BianchiFamily),
    /// `H(2n+1)`, holding `n`.
    Heisenberg(usize),
}

impl FromStr for CatalogName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("unknown algebra name '{s}'"));
        if let Some(inner) = compact.strip_prefix("H(").and_then(|r| r.strip_suffix(')')) {
            let d: usize = inner.parse().map_err(|_| bad())?;
            if d < 3 || d.is_multiple_of(2) {
                return Err(Error::InvalidParameter(format!(
                    "Heisenberg algebras have odd dimension 2n+1 >= 3, got {d}"
                )));
            }
            return Ok(CatalogName::Heisenberg((d - 1) / 2));
        }
        let inner = compact
            .strip_prefix("L3(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let mut parts = inner.split(',');
        let tag = parts.next().ok_or_else(bad)?;
        let param = parts.next();
        if parts.next().is_some() {
            return Err(bad());
        }
        let x = || -> Result<f64> {
            param
                .ok_or_else(bad)?
                .parse::<f64>()
                .map_err(|_| bad())
        };
        let family = match (tag, param.is_some()) {
            ("-1", false) => BianchiFamily::L3Minus1,
            ("1", false) => BianchiFamily::L3One,
            ("2", true) => BianchiFamily::L3Two(x()?),
            ("3", false) => BianchiFamily::L3Three,
            ("4", true) => BianchiFamily::L3Four(x()?),
            ("5", false) => BianchiFamily::L3Five,
            ("6", false) => BianchiFamily::L3Six,
            _ => return Err(bad()),
        };
        family.validate()?;
        Ok(CatalogName::Bianchi(family))
    }
}

pub fn make_bianchi(family: BianchiFamily) -> Result<LieAlgebra> {
    family.validate()?;
    let brackets: Vec<(usize, usize, Vec<f64>)> = match family {
        BianchiFamily::L3Minus1 => vec![(0, 1, vec![1.0, 0.0, 0.0])],
        BianchiFamily::L3One => vec![(1, 2, vec![1.0, 0.0, 0.0])],
        BianchiFamily::L3Two(x) => vec![(0, 2, vec![1.0, 0.0, 0.0]), (1, 2, vec![0.0, x, 0.0])],
        BianchiFamily::L3Three => {
            vec![(0, 2, vec![1.0, 0.0, 0.0]), (1, 2, vec![1.0, 1.0, 0.0])]
        }
        BianchiFamily::L3Four(x) => vec![(0, 2, vec![x, -1.0, 0.0]), (1, 2, vec![1.0, x, 0.0])],
        BianchiFamily::L3Five => vec![
            (0, 1, vec![1.0, 0.0, 0.0]),
            (0, 2, vec![0.0, -2.0, 0.0]),
            (1, 2, vec![0.0, 0.0, 1.0]),
        ],
        BianchiFamily::L3Six => vec![
            (0, 1, vec![0.0, 0.0, 1.0]),
            (0, 2, vec![0.0, -1.0, 0.0]),
            (1, 2, vec![1.0, 0.0, 0.0]),
        ],
    };
    LieAlgebra::from_brackets(3, &brackets)
}

/// h_{2n+1} in the ordered basis `(Ẑ, Ê₁, F̂₁, …, Êₙ, F̂ₙ)` with
/// `[Ê_p, F̂_p] = Ẑ` the only nonzero brackets.
pub fn make_heisenberg(n: usize) -> Result<LieAlgebra> {
    if n < 1 {
        return Err(Error::InvalidParameter("Heisenberg algebra needs n >= 1".into()));
    }
    let d = 2 * n + 1;
    let mut z = vec![0.0; d];
    z[0] = 1.0;
    let brackets: Vec<_> = (0..n).map(|p| (2 * p + 1, 2 * p + 2, z.clone())).collect();
    LieAlgebra::from_brackets(d, &brackets)
}

/// Basis relabelling taking h₃ in `(Ẑ, Ê, F̂)` order onto L(3,1) in
/// `(f₁, f₂, f₃)` order. Both put the centre first, so it is the identity.
pub const H3_TO_L31: [usize; 3] = [0, 1, 2];

#[derive(Debug, Clone, PartialEq)]
pub struct HeisenbergParams {
    a: Vec<f64>,
    b: Vec<f64>,
    c: f64,
}

impl HeisenbergParams {
    pub fn new(a: Vec<f64>, b: Vec<f64>, c: f64) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::InvalidParameter(format!(
                "a and b must both have n >= 1 entries (got {} and {})",
                a.len(),
                b.len()
            )));
        }
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !a.iter().chain(&b).all(|&v| positive(v)) || !positive(c) {
            return Err(Error::InvalidParameter(
                "Heisenberg metric parameters must be strictly positive".into(),
            ));
        }
        Ok(Self { a, b, c })
    }

    /// `a_p = p²`, `b_p = 1`, `c = 1`: the choice with `n + 1` distinct eigenvalues.
    pub fn defaults(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|p| (p * p) as f64).collect(), vec![1.0; n], 1.0)
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `√(c / (a_p b_p))`, the bracket `[E_p, F_p]` in units of `Z` (0-based `p`).
    pub fn coupling(&self, p: usize) -> f64 {
        (self.c / (self.a[p] * self.b[p])).sqrt()
    }

    /// The GK eigenvalues `λ_p = ¼√(c/(a_p b_p))`.
    pub fn lambdas(&self) -> Vec<f64> {
        (0..self.n()).map(|p| 0.25 * self.coupling(p)).collect()
    }

    /// `μ = −Σ λ_q`, the eigenvalue on `Z`.
    pub fn mu(&self) -> f64 {
        -self.lambdas().iter().sum::<f64>()
    }

    /// Diagonal of the endomorphism in the frame `(Z, E₁, F₁, …)`.
    pub fn expected_diagonal(&self) -> Vec<f64> {
        let mut out = vec![self.mu()];
        for l in self.lambdas() {
            out.push(l);
            out.push(l);
        }
        out
    }

    /// Gram matrix in the basis `(Ẑ, Ê₁, F̂₁, …)`: `diag(c, a₁, b₁, …)`,
    /// so that `Z = Ẑ/√c`, `E_p = Ê_p/√a_p`, `F_p = F̂_p/√b_p` are orthonormal.
    pub fn gram(&self) -> Mat {
        let mut diag = vec![self.c];
        for p in 0..self.n() {
            diag.push(self.a[p]);
            diag.push(self.b[p]);
        }
        Mat::from_diagonal(&DVector::from_vec(diag))
    }

    /// The frame change `diag(1/√c, 1/√a₁, 1/√b₁, …)`.
    pub fn frame_change(&self) -> FrameChange {
        let diag = self.gram().diagonal().map(|v| 1.0 / v.sqrt());
        FrameChange::new(Mat::from_diagonal(&diag)).expect("positive diagonal")
    }
}

pub fn heisenberg_metric(params: &HeisenbergParams) -> Result<MetricLieAlgebra> {
    orthonormalize(&make_heisenberg(params.n())?, &params.gram())
}

/// Closed-form endomorphism `A` in the frame `(e₁, e₂, e₃)` for a frame change `P`.
pub fn reference_a(family: BianchiFamily, p: &FrameChange) -> Result<Mat> {
    family.validate()?;
    let e = p.entries()?;
    let (al, be, ga, ep, ze, io) = (e.alpha, e.beta, e.gamma, e.epsilon, e.zeta, e.iota);
    let det = e.det();
    let m = |scale: f64, v: [f64; 9]| Mat::from_row_slice(3, 3, &v) * scale;
    Ok(match family {
        BianchiFamily::L3Minus1 => {
            let s = ga * ep - be * ze;
            m(
                1.0 / (4.0 * al),
                [s, 0.0, 0.0, 2.0 * al * ze, -s, 0.0, -2.0 * al * ep, 0.0, -s],
            )
        }
        BianchiFamily::L3One => m(
            det / (4.0 * al * al),
            [-1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
        ),
        BianchiFamily::L3Two(x) => {
            let t = (x - 1.0) * be * io / (4.0 * al);
            m(1.0, [t, -io * x / 2.0, 0.0, io / 2.0, -t, 0.0, 0.0, 0.0, -t])
        }
        BianchiFamily::L3Three => m(
            1.0 / (4.0 * al),
            [
                -io * ep,
                -2.0 * al * io,
                0.0,
                2.0 * al * io,
                io * ep,
                0.0,
                0.0,
                0.0,
                io * ep,
            ],
        ),
        BianchiFamily::L3Four(x) => {
            let i2 = io * io;
            let (a2, b2, e2) = (al * al, be * be, ep * ep);
            m(
                1.0 / (4.0 * det),
                [
                    i2 * (a2 - b2 - e2),
                    2.0 * al * i2 * (be - ep * x),
                    0.0,
                    2.0 * al * i2 * (be + ep * x),
                    i2 * (-a2 + b2 + e2),
                    0.0,
                    0.0,
                    0.0,
                    i2 * (a2 + b2 + e2),
                ],
            )
        }
        BianchiFamily::L3Five => {
            let a11 = io * (al * al * io - be * (be * io + ep * ze) + ga * ep * ep);
            let a12 = al * io * (2.0 * be * io + ep * ze);
            let a13 = -al * io * ep * ep;
            let a22 = io * (-al * al * io + be * be * io + be * ep * ze - ga * ep * ep);
            let a33 = io * (io * (al * al + be * be) + be * ep * ze - ga * ep * ep);
            m(
                1.0 / (2.0 * det),
                [a11, a12, a13, a12, a22, 0.0, a13, 0.0, a33],
            )
        }
        BianchiFamily::L3Six => {
            let q = ga * ep - be * ze;
            let (a2, b2, e2, i2, z2) = (al * al, be * be, ep * ep, io * io, ze * ze);
            let a11 = a2 * (i2 + e2 + z2) - i2 * (b2 + e2) - q * q;
            let a12 = 2.0 * al * (be * (i2 + z2) - ga * ep * ze);
            let a13 = 2.0 * al * ep * q;
            let a22 = -a2 * (i2 - e2 + z2) + i2 * (b2 + e2) + q * q;
            let a23 = 2.0 * a2 * ep * ze;
            let a33 = a2 * (i2 - e2 + z2) + i2 * (b2 + e2) + q * q;
            m(
                1.0 / (4.0 * det),
                [a11, a12, a13, a12, a22, a23, a13, a23, a33],
            )
        }
    })
}

/// Closed form of `A − Aᵀ`. It depends only on `ε, ζ` for L(3,−1) and only
/// on `ι` (and `x`) for the solvable families with a non-symmetric `A`.
pub fn reference_asymmetry(family: BianchiFamily, p: &FrameChange) -> Result<Mat> {
    family.validate()?;
    let e = p.entries()?;
    let rot = |s: f64| Mat::from_row_slice(3, 3, &[0.0, -s, 0.0, s, 0.0, 0.0, 0.0, 0.0, 0.0]);
    Ok(match family {
        BianchiFamily::L3Minus1 => {
            Mat::from_row_slice(
                3,
                3,
                &[0.0, -e.zeta, e.epsilon, e.zeta, 0.0, 0.0, -e.epsilon, 0.0, 0.0],
            ) * 0.5
        }
        BianchiFamily::L3Two(x) => rot(e.iota) * ((x + 1.0) / 2.0),
        BianchiFamily::L3Three => rot(e.iota),
        BianchiFamily::L3Four(x) => rot(e.iota) * x,
        BianchiFamily::L3One | BianchiFamily::L3Five | BianchiFamily::L3Six => Mat::zeros(3, 3),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClosedFormEigenvalues {
    /// Sorted ascending.
    Values(Vec<f64>),
    NumericOnly,
}

/// Closed-form eigenvalues for L(3,1), L(3,2,−1) and L(3,4,0).
pub fn reference_eigenvalues(family: BianchiFamily, p: &FrameChange) -> Result<ClosedFormEigenvalues> {
    family.validate()?;
    let e = p.entries()?;
    let mut values = match family {
        BianchiFamily::L3One => {
            let k = e.det() / (4.0 * e.alpha * e.alpha);
            vec![-k, k, k]
        }
        BianchiFamily::L3Two(x) if x == -1.0 => {
            let r = (e.alpha.powi(2) * e.iota.powi(2) + e.beta.powi(2) * e.iota.powi(2)).sqrt()
                / (2.0 * e.alpha);
            vec![e.beta * e.iota / (2.0 * e.alpha), r, -r]
        }
        BianchiFamily::L3Four(x) if x == 0.0 => {
            let lambda = e.iota.powi(2) * (e.alpha.powi(2) + e.beta.powi(2) + e.epsilon.powi(2))
                / (4.0 * e.det());
            // λ ≥ ι/2 by AM–GM, clamp rounding below zero
            let r = (lambda * lambda - 0.25 * e.iota * e.iota).max(0.0).sqrt();
            vec![lambda, r, -r]
        }
        _ => return Ok(ClosedFormEigenvalues::NumericOnly),
    };
    values.sort_by(f64::total_cmp);
    Ok(ClosedFormEigenvalues::Values(values))
}

/// Ricci endomorphism of a 3-dimensional metric Lie algebra with symmetric
/// `A`, written in the orthonormal structure constants.
///
/// Only valid after imposing `c₁₃¹ = −c₂₃²`, `c₁₂¹ = c₂₃³`, `c₁₂² = −c₁₃³`;
/// it reads only the remaining six constants. The (1,1) entry contains the
/// cross term `−c₁₂³c₁₃²` (it is `½(−(c₁₂³ + c₁₃²)² − 4(c₁₃³)² + (c₂₃¹)²)`).
pub fn reference_ricci_3d(ortho: &LieAlgebra) -> Result<Mat> {
    if ortho.dim() != 3 {
        return Err(Error::UnsupportedDimension(ortho.dim()));
    }
    let c = |i: usize, j: usize, k: usize| ortho.c(i - 1, j - 1, k - 1);
    let (a, b, g) = (c(1, 2, 3), c(1, 3, 2), c(2, 3, 1));
    let (c133, c232, c233) = (c(1, 3, 3), c(2, 3, 2), c(2, 3, 3));
    let r11 = 0.5 * (-(a + b).powi(2) - 4.0 * c133 * c133 + g * g);
    let r12 = -(a + b - g) * c232 - 2.0 * c133 * c233;
    let r13 = (a + b + g) * c233 - 2.0 * c133 * c232;
    let r22 = 0.5 * (b * b - (a - g).powi(2) - 4.0 * c233 * c233);
    let r23 = c133 * (-a + b + g) + 2.0 * c232 * c233;
    let r33 = 0.5 * (a * a - (b + g).powi(2) - 4.0 * c232 * c232);
    Ok(Mat::from_row_slice(
        3,
        3,
        &[r11, r12, r13, r12, r22, r23, r13, r23, r33],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{check_jacobi, metric_from_frame_change, FrameEntries};

    fn frame(e: FrameEntries) -> FrameChange {
        FrameChange::from_entries(e).unwrap()
    }

    fn all_families() -> Vec<BianchiFamily> {
        let mut v = BianchiFamily::PARAMETER_FREE.to_vec();
        v.extend([-1.0, -0.5, 0.5, 1.0].map(BianchiFamily::L3Two));
        v.extend([0.0, 0.5, 1.0, 2.0].map(BianchiFamily::L3Four));
        v
    }

    #[test]
    fn bracket_tables() {
        let l31 = make_bianchi(BianchiFamily::L3One).unwrap();
        assert_eq!(l31.brackets(), vec![(1, 2, vec![1.0, 0.0, 0.0])]);
        let l35 = make_bianchi(BianchiFamily::L3Five).unwrap();
        assert_eq!(
            l35.brackets(),
            vec![
                (0, 1, vec![1.0, 0.0, 0.0]),
                (0, 2, vec![0.0, -2.0, 0.0]),
                (1, 2, vec![0.0, 0.0, 1.0])
            ]
        );
        let l32 = make_bianchi(BianchiFamily::L3Two(0.5)).unwrap();
        assert_eq!(
            l32.brackets(),
            vec![(0, 2, vec![1.0, 0.0, 0.0]), (1, 2, vec![0.0, 0.5, 0.0])]
        );
    }

    #[test]
    fn catalog_algebras_satisfy_jacobi_exactly() {
        for f in all_families() {
            let check = check_jacobi(&make_bianchi(f).unwrap(), 0.0);
            assert!(check.holds, "{f}");
            assert_eq!(check.max_violation, 0.0);
        }
        for n in 1..=4 {
            assert_eq!(check_jacobi(&make_heisenberg(n).unwrap(), 0.0).max_violation, 0.0);
        }
    }

    #[test]
    fn parameter_ranges() {
        for bad in [
            BianchiFamily::L3Two(0.0),
            BianchiFamily::L3Two(1.5),
            BianchiFamily::L3Four(-0.1),
        ] {
            assert!(matches!(make_bianchi(bad), Err(Error::InvalidParameter(_))));
        }
        assert!(make_heisenberg(0).is_err());
        assert!(HeisenbergParams::new(vec![1.0], vec![0.0], 1.0).is_err());
        assert!(HeisenbergParams::new(vec![1.0], vec![1.0, 2.0], 1.0).is_err());
        assert!(HeisenbergParams::new(vec![1.0], vec![1.0], -1.0).is_err());
    }

    #[test]
    fn names_round_trip() {
        for f in all_families() {
            assert_eq!(f.to_string().parse::<CatalogName>().unwrap(), CatalogName::Bianchi(f));
        }
        assert_eq!("H(7)".parse::<CatalogName>().unwrap(), CatalogName::Heisenberg(3));
        assert!("H(4)".parse::<CatalogName>().is_err());
        assert!("L3(2)".parse::<CatalogName>().is_err());
        assert!("L3(2,3)".parse::<CatalogName>().is_err());
        assert!("sl2".parse::<CatalogName>().is_err());
    }

    #[test]
    fn heisenberg_structure() {
        let h1 = make_heisenberg(1).unwrap();
        assert_eq!(
            h1.permuted(&H3_TO_L31).unwrap(),
            make_bianchi(BianchiFamily::L3One).unwrap()
        );
        let h2 = make_heisenberg(2).unwrap();
        assert_eq!(h2.dim(), 5);
        assert_eq!(h2.brackets().len(), 2);
        // the centre is spanned by f1
        for i in 0..5 {
            assert!(h2.bracket_of_basis(0, i).iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn heisenberg_metric_scaling() {
        let unit = heisenberg_metric(&HeisenbergParams::new(vec![1.0], vec![1.0], 1.0).unwrap()).unwrap();
        assert_eq!(unit.ortho().c(1, 2, 0), 1.0);

        let p = HeisenbergParams::new(vec![1.0, 4.0], vec![1.0, 1.0], 1.0).unwrap();
        let m = heisenberg_metric(&p).unwrap();
        assert!((m.ortho().c(3, 4, 0) - 0.5).abs() < 1e-15);
        assert!((m.ortho().c(1, 2, 0) - 1.0).abs() < 1e-15);

        let p = HeisenbergParams::new(vec![0.3, 2.0, 5.0], vec![1.7, 0.4, 3.0], 2.5).unwrap();
        let m = heisenberg_metric(&p).unwrap();
        let via_frame = metric_from_frame_change(&make_heisenberg(3).unwrap(), &p.frame_change()).unwrap();
        assert!((m.frame() - via_frame.frame()).amax() < 1e-14);
        for q in 0..3 {
            assert!((m.ortho().c(2 * q + 1, 2 * q + 2, 0) - p.coupling(q)).abs() < 1e-14);
            assert!((via_frame.ortho().c(2 * q + 1, 2 * q + 2, 0) - p.coupling(q)).abs() < 1e-14);
        }
        assert!((m.frame()[(0, 0)] - 1.0 / 2.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn reference_a_spot_values() {
        let id = FrameChange::identity(3);
        let a = reference_a(BianchiFamily::L3Minus1, &id).unwrap();
        assert_eq!(a, Mat::from_row_slice(3, 3, &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -0.5, 0.0, 0.0]));
        let a = reference_a(BianchiFamily::L3Four(0.0), &id).unwrap();
        assert_eq!(a, Mat::from_diagonal(&DVector::from_vec(vec![0.0, 0.0, 0.5])));

        let p = frame(FrameEntries { alpha: 2.0, beta: 3.0, gamma: 0.0, epsilon: 1.0, zeta: 0.0, iota: 1.0 });
        let a = reference_a(BianchiFamily::L3One, &p).unwrap();
        assert_eq!(a, Mat::from_diagonal(&DVector::from_vec(vec![-0.125, 0.125, 0.125])));
    }

    #[test]
    fn reference_asymmetry_spot_values() {
        let p = frame(FrameEntries { iota: 2.0, ..FrameEntries::IDENTITY });
        assert_eq!(
            reference_asymmetry(BianchiFamily::L3Three, &p).unwrap(),
            Mat::from_row_slice(3, 3, &[0.0, -2.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0])
        );
        assert_eq!(reference_asymmetry(BianchiFamily::L3One, &p).unwrap(), Mat::zeros(3, 3));
        assert_eq!(reference_asymmetry(BianchiFamily::L3Two(-1.0), &p).unwrap(), Mat::zeros(3, 3));
    }

    #[test]
    fn reference_asymmetry_matches_reference_a() {
        let p = frame(FrameEntries { alpha: 1.3, beta: -0.4, gamma: 0.9, epsilon: 0.6, zeta: 0.2, iota: 2.1 });
        for f in all_families() {
            let a = reference_a(f, &p).unwrap();
            let d = reference_asymmetry(f, &p).unwrap();
            assert!((&a - a.transpose() - d).amax() < 1e-14, "{f}");
        }
    }

    #[test]
    fn closed_form_eigenvalues() {
        let p = FrameChange::identity(3);
        assert_eq!(
            reference_eigenvalues(BianchiFamily::L3Two(-1.0), &p).unwrap(),
            ClosedFormEigenvalues::Values(vec![-0.5, 0.0, 0.5])
        );
        assert_eq!(
            reference_eigenvalues(BianchiFamily::L3One, &p).unwrap(),
            ClosedFormEigenvalues::Values(vec![-0.25, 0.25, 0.25])
        );
        assert_eq!(
            reference_eigenvalues(BianchiFamily::L3Four(0.0), &p).unwrap(),
            ClosedFormEigenvalues::Values(vec![0.0, 0.0, 0.5])
        );
        assert_eq!(
            reference_eigenvalues(BianchiFamily::L3Six, &p).unwrap(),
            ClosedFormEigenvalues::NumericOnly
        );
        assert_eq!(
            reference_eigenvalues(BianchiFamily::L3Two(0.5), &p).unwrap(),
            ClosedFormEigenvalues::NumericOnly
        );
    }

    #[test]
    fn ricci_oracle_spot_values() {
        let h3 = make_bianchi(BianchiFamily::L3One).unwrap();
        let r = reference_ricci_3d(&h3).unwrap();
        assert_eq!(r, Mat::from_diagonal(&DVector::from_vec(vec![0.5, -0.5, -0.5])));
        let su2 = make_bianchi(BianchiFamily::L3Six).unwrap();
        let r = reference_ricci_3d(&su2).unwrap();
        assert_eq!(r, Mat::identity(3, 3) * 0.5);
    }

    #[test]
    fn expected_profiles() {
        assert_eq!(BianchiFamily::L3Minus1.expected_gk_profile(), (0, None));
        assert_eq!(BianchiFamily::L3One.expected_gk_profile(), (2, Some(2)));
        assert_eq!(BianchiFamily::L3Two(-1.0).expected_gk_profile(), (2, Some(3)));
        assert_eq!(BianchiFamily::L3Two(0.5).expected_gk_profile(), (0, None));
        assert_eq!(BianchiFamily::L3Four(0.0).expected_gk_profile(), (2, Some(3)));
        assert_eq!(BianchiFamily::L3Four(1.0).expected_gk_profile(), (0, None));
        assert_eq!(BianchiFamily::L3Five.expected_gk_profile(), (2, Some(3)));
    }
}
