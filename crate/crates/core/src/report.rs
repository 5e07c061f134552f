//! Commands behind the CLI and their serialisable results.
//!
//! Every command returns a value that renders either as JSON (fixed key
//! order, 17 significant digits, `null` for non-finite numbers) or as a
//! plain-text table (6 significant digits). Results that carry a pass/fail
//! verdict expose it through [`Render::passed`].

use std::fmt::Write as _;
use std::io;
use std::str::FromStr;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::algebra::{
    check_jacobi, matrix_to_rows, metric_from_frame_change, orthonormalize, AlgebraSpec,
    FrameChange, LieAlgebra, Mat, MetricLieAlgebra, MetricSpec, DEFAULT_TOL,
};
use crate::catalog::{
    heisenberg_metric, make_bianchi, make_heisenberg, reference_a, reference_asymmetry,
    reference_eigenvalues, reference_ricci_3d, BianchiFamily, CatalogName, ClosedFormEigenvalues,
    HeisenbergParams,
};
use crate::clifford::{Clifford, Spinor};
use crate::connection::{curvature, nomizu, ricci_spinorial_check};
use crate::error::{Error, Result};
use crate::gks::{
    eigen_analysis, full_report, genericity_sweep, gk_equation_residual, sweep_reports, GkReport,
    SweepStats, DEFAULT_GAP_TOL,
};
use crate::sampling::{random_skew, random_vector, rng, sample_frames};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Table,
}

/// Settings shared by all commands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Explicit tolerance; when absent each check uses its own default.
    pub tol: Option<f64>,
    pub gap_tol: f64,
    pub samples: usize,
    pub seed: u64,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tol: None,
            gap_tol: DEFAULT_GAP_TOL,
            samples: 100,
            seed: 1,
            format: Format::Json,
        }
    }
}

impl RunConfig {
    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOL)
    }
}

pub trait Render: Serialize {
    fn table(&self) -> String;

    fn passed(&self) -> bool {
        true
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self),
            Format::Table => self.table(),
        }
    }
}

// ---------------------------------------------------------------------------
// number formatting

struct FixedDigits<'a>(PrettyFormatter<'a>);

impl Formatter for FixedDigits<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        // normalise −0 so that sign noise does not leak into the output
        let v = if v == 0.0 { 0.0 } else { v };
        write!(w, "{v:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty JSON with every float written to 17 significant digits.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedDigits(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("serialising to memory cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

/// Roughly `%.6g`.
pub fn sig6(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".into();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let s = format!("{:.*}", (5 - exp).max(0) as usize, v);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{v:.5e}")
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".into(), |x| x.to_string())
}

fn matrix_table(out: &mut String, name: &str, m: &Mat) {
    let _ = writeln!(out, "{name}:");
    for i in 0..m.nrows() {
        let row: Vec<String> = m.row(i).iter().map(|&x| format!("{:>13}", sig6(x))).collect();
        let _ = writeln!(out, "  {}", row.join(" "));
    }
}

fn list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|&x| sig6(x)).collect();
    format!("[{}]", items.join(", "))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

// ---------------------------------------------------------------------------
// inputs

/// Parses an algebra given as a catalog name, inline JSON or a JSON file, and
/// rejects tensors that violate Jacobi.
pub fn load_algebra(arg: &str, tol: f64) -> Result<LieAlgebra> {
    let alg = if arg.trim_start().starts_with('{') {
        serde_json::from_str::<AlgebraSpec>(arg)?.build()?
    } else {
        match CatalogName::from_str(arg) {
            Ok(CatalogName::Bianchi(f)) => make_bianchi(f)?,
            Ok(CatalogName::Heisenberg(n)) => make_heisenberg(n)?,
            Err(Error::Parse(_)) => {
                let text = std::fs::read_to_string(arg)?;
                serde_json::from_str::<AlgebraSpec>(&text)?.build()?
            }
            Err(e) => return Err(e),
        }
    };
    let jacobi = check_jacobi(&alg, tol);
    if !jacobi.holds {
        return Err(Error::NotLieAlgebra(jacobi.max_violation));
    }
    Ok(alg)
}

/// `identity`, inline JSON or a JSON file in the metric format.
pub fn load_metric(arg: &str, alg: &LieAlgebra) -> Result<MetricLieAlgebra> {
    if arg == "identity" {
        return metric_from_frame_change(alg, &FrameChange::identity(alg.dim()));
    }
    let spec: MetricSpec = if arg.trim_start().starts_with('{') {
        serde_json::from_str(arg)?
    } else {
        serde_json::from_str(&std::fs::read_to_string(arg)?)?
    };
    spec.build(alg)
}

fn bianchi(arg: &str) -> Result<BianchiFamily> {
    match CatalogName::from_str(arg)? {
        CatalogName::Bianchi(f) => Ok(f),
        CatalogName::Heisenberg(_) => Err(Error::InvalidParameter(
            "sweeps run over the 3-dimensional families L3(...)".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// analyze

#[derive(Debug, Clone, Serialize)]
pub struct GkReportOut {
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    pub solve_residual: f64,
    pub symmetric: bool,
    pub asymmetry: Vec<Vec<f64>>,
    pub eigenvalues: Option<Vec<f64>>,
    pub distinct_count: Option<usize>,
    pub dirac_eigenvalue: f64,
    pub ricci: Vec<Vec<f64>>,
    pub commutator_norm: f64,
    pub gks_space_dim: Option<usize>,
    pub dim: usize,
    pub verdict: &'static str,
    pub tested_spinor_is_gk: bool,
    pub basis_residual: Option<f64>,
    pub full_rank: bool,
    pub asymmetry_norm: f64,
    /// `λ` when `A = λ·Id`, i.e. the spinor is Killing.
    pub killing_constant: Option<f64>,
}

impl GkReportOut {
    pub fn new(r: &GkReport, tol: f64) -> Self {
        let lambda = r.a[(0, 0)];
        let killing = (&r.a - Mat::identity(r.dim, r.dim) * lambda).amax() <= tol * r.a.amax().max(1.0);
        GkReportOut {
            a: matrix_to_rows(&r.a),
            solve_residual: r.solve_residual,
            symmetric: r.symmetric,
            asymmetry: matrix_to_rows(&r.asymmetry),
            eigenvalues: r.eigenvalues.clone(),
            distinct_count: r.distinct_count,
            dirac_eigenvalue: r.dirac_eigenvalue,
            ricci: matrix_to_rows(&r.ricci),
            commutator_norm: r.commutator_norm,
            gks_space_dim: r.gks_space_dim(),
            dim: r.dim,
            verdict: r.verdict(),
            tested_spinor_is_gk: r.spinor_is_gk(),
            basis_residual: r.basis_residual,
            full_rank: r.full_rank,
            asymmetry_norm: r.asymmetry_norm,
            killing_constant: (killing && r.spinor_is_gk()).then_some(lambda),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeOut {
    pub algebra: String,
    pub report: GkReportOut,
}

impl Render for AnalyzeOut {
    fn table(&self) -> String {
        let r = &self.report;
        let m = |rows: &Vec<Vec<f64>>| Mat::from_fn(rows.len(), rows.len(), |i, j| rows[i][j]);
        let mut out = String::new();
        let _ = writeln!(out, "algebra            {} (dim {})", self.algebra, r.dim);
        let _ = writeln!(out, "verdict            {}", r.verdict);
        let _ = writeln!(out, "GK space dim       {}", opt(r.gks_space_dim));
        let _ = writeln!(out, "solve residual     {}", sig6(r.solve_residual));
        let _ = writeln!(out, "symmetric          {} (|A - A^T| = {})", r.symmetric, sig6(r.asymmetry_norm));
        let _ = writeln!(out, "eigenvalues        {}", r.eigenvalues.as_deref().map_or("-".into(), list));
        let _ = writeln!(out, "distinct count     {}", opt(r.distinct_count));
        let _ = writeln!(out, "Dirac eigenvalue   {}", sig6(r.dirac_eigenvalue));
        let _ = writeln!(out, "|[A, Ric]|         {}", sig6(r.commutator_norm));
        matrix_table(&mut out, "A", &m(&r.a));
        matrix_table(&mut out, "Ric", &m(&r.ricci));
        out
    }
}

pub fn cmd_analyze(cfg: &RunConfig, algebra: &str, metric: &str) -> Result<AnalyzeOut> {
    let alg = load_algebra(algebra, cfg.tol())?;
    let mla = load_metric(metric, &alg)?;
    let report = full_report(&mla, cfg.tol(), cfg.gap_tol)?;
    Ok(AnalyzeOut {
        algebra: algebra.to_string(),
        report: GkReportOut::new(&report, cfg.tol()),
    })
}

// ---------------------------------------------------------------------------
// heisenberg

#[derive(Debug, Clone, Serialize)]
pub struct HeisenbergOut {
    pub n: usize,
    pub dim: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: f64,
    /// `λ_p = ½·√(c/(a_p b_p))`.
    pub lambdas: Vec<f64>,
    pub mu: f64,
    pub expected_eigenvalues: Vec<f64>,
    pub eigenvalues: Option<Vec<f64>>,
    pub distinct_count: Option<usize>,
    pub expected_distinct_count: usize,
    /// `max |A − diag(expected)|`, relative to `max(1, max|λ|)`.
    pub a_deviation: f64,
    pub solve_residual: f64,
    pub gk_residual: f64,
    pub symmetric: bool,
    pub pass: bool,
}

impl Render for HeisenbergOut {
    fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "H({})  n = {}  c = {}", self.dim, self.n, sig6(self.c));
        let _ = writeln!(out, "a                  {}", list(&self.a));
        let _ = writeln!(out, "b                  {}", list(&self.b));
        let _ = writeln!(out, "lambda_p           {}", list(&self.lambdas));
        let _ = writeln!(out, "mu                 {}", sig6(self.mu));
        let _ = writeln!(out, "eigenvalues        {}", self.eigenvalues.as_deref().map_or("-".into(), list));
        let _ = writeln!(out, "distinct count     {} (expected {})", opt(self.distinct_count), self.expected_distinct_count);
        let _ = writeln!(out, "|A - expected|     {}", sig6(self.a_deviation));
        let _ = writeln!(out, "solve residual     {}", sig6(self.solve_residual));
        let _ = writeln!(out, "GK residual        {}", sig6(self.gk_residual));
        let _ = writeln!(out, "result             {}", verdict(self.pass));
        out
    }

    fn passed(&self) -> bool {
        self.pass
    }
}

pub fn cmd_heisenberg(
    cfg: &RunConfig,
    n: usize,
    a: Option<Vec<f64>>,
    b: Option<Vec<f64>>,
    c: Option<f64>,
) -> Result<HeisenbergOut> {
    let defaults = HeisenbergParams::defaults(n)?;
    let params = HeisenbergParams::new(
        a.unwrap_or_else(|| defaults.a().to_vec()),
        b.unwrap_or_else(|| defaults.b().to_vec()),
        c.unwrap_or(defaults.c()),
    )?;
    let tol = cfg.tol();
    let mla = heisenberg_metric(&params)?;
    let report = full_report(&mla, tol, cfg.gap_tol)?;
    let expected = params.expected_diagonal();
    let scale = expected.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let expected_a = Mat::from_diagonal(&nalgebra::DVector::from_column_slice(&expected));
    let a_deviation = (&report.a - &expected_a).amax() / scale;
    let gk_residual = gk_equation_residual(&nomizu(&mla), &report.a, &Spinor::one(params.n()))? / scale;
    let expected_distinct_count = eigen_analysis(&expected_a, cfg.gap_tol)?.distinct_count;
    let mut expected_eigenvalues = expected;
    expected_eigenvalues.sort_by(f64::total_cmp);
    let pass = report.symmetric
        && a_deviation <= tol
        && report.solve_residual <= tol
        && gk_residual <= tol
        && report.distinct_count == Some(expected_distinct_count);
    Ok(HeisenbergOut {
        n: params.n(),
        dim: mla.dim(),
        a: params.a().to_vec(),
        b: params.b().to_vec(),
        c: params.c(),
        lambdas: params.lambdas(),
        mu: params.mu(),
        expected_eigenvalues,
        eigenvalues: report.eigenvalues,
        distinct_count: report.distinct_count,
        expected_distinct_count,
        a_deviation,
        solve_residual: report.solve_residual,
        gk_residual,
        symmetric: report.symmetric,
        pass,
    })
}

// ---------------------------------------------------------------------------
// verify-appendix

/// Every family with the parameter grid used for the closed-form checks.
pub fn family_grid() -> Vec<BianchiFamily> {
    use BianchiFamily::*;
    let mut cases = vec![L3Minus1, L3One];
    cases.extend([-1.0, -0.5, 0.5, 1.0].map(L3Two));
    cases.push(L3Three);
    cases.extend([0.0, 0.5, 1.0, 2.0].map(L3Four));
    cases.extend([L3Five, L3Six]);
    cases
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyCase {
    pub algebra: String,
    pub samples: usize,
    pub symmetric_expected: bool,
    pub symmetric_mismatches: usize,
    /// Relative to `max(1, max|A|)`.
    pub max_a_deviation: f64,
    pub max_asymmetry_deviation: f64,
    pub max_eigenvalue_deviation: Option<f64>,
    pub max_ricci_deviation: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyOut {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub cases: Vec<VerifyCase>,
    pub pass: bool,
}

impl Render for VerifyOut {
    fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} samples per family, seed {}, tol {}", self.samples, self.seed, sig6(self.tol));
        let _ = writeln!(
            out,
            "{:<12} {:>9} {:>11} {:>11} {:>11} {:>11} {:>11}  result",
            "algebra", "symmetric", "mismatches", "dA", "d(A-A^T)", "d(eig)", "d(Ric)"
        );
        for c in &self.cases {
            let _ = writeln!(
                out,
                "{:<12} {:>9} {:>11} {:>11} {:>11} {:>11} {:>11}  {}",
                c.algebra,
                c.symmetric_expected,
                c.symmetric_mismatches,
                sig6(c.max_a_deviation),
                sig6(c.max_asymmetry_deviation),
                c.max_eigenvalue_deviation.map_or("-".into(), sig6),
                c.max_ricci_deviation.map_or("-".into(), sig6),
                verdict(c.pass)
            );
        }
        let _ = writeln!(out, "overall: {}", verdict(self.pass));
        out
    }

    fn passed(&self) -> bool {
        self.pass
    }
}

fn verify_case(family: BianchiFamily, samples: usize, seed: u64, tol: f64, gap_tol: f64) -> Result<VerifyCase> {
    let reports = sweep_reports(family, samples, seed, tol, gap_tol)?;
    let expected_symmetric = family.has_symmetric_endomorphism();
    let mut case = VerifyCase {
        algebra: family.to_string(),
        samples,
        symmetric_expected: expected_symmetric,
        symmetric_mismatches: 0,
        max_a_deviation: 0.0,
        max_asymmetry_deviation: 0.0,
        max_eigenvalue_deviation: None,
        max_ricci_deviation: None,
        pass: false,
    };
    let alg = make_bianchi(family)?;
    for (p, r) in &reports {
        let scale = r.a.amax().max(1.0);
        case.max_a_deviation = case.max_a_deviation.max((&r.a - reference_a(family, p)?).amax() / scale);
        case.max_asymmetry_deviation = case
            .max_asymmetry_deviation
            .max((&r.asymmetry - reference_asymmetry(family, p)?).amax() / scale);
        if r.symmetric != expected_symmetric {
            case.symmetric_mismatches += 1;
        }
        if let (ClosedFormEigenvalues::Values(exact), Some(values)) = (reference_eigenvalues(family, p)?, &r.eigenvalues) {
            let dev = exact.iter().zip(values).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale;
            case.max_eigenvalue_deviation = Some(case.max_eigenvalue_deviation.unwrap_or(0.0).max(dev));
        }
        if expected_symmetric {
            let mla = metric_from_frame_change(&alg, p)?;
            let exact = reference_ricci_3d(mla.ortho())?;
            let dev = (&r.ricci - &exact).amax() / exact.amax().max(1.0);
            case.max_ricci_deviation = Some(case.max_ricci_deviation.unwrap_or(0.0).max(dev));
        }
    }
    case.pass = case.symmetric_mismatches == 0
        && case.max_a_deviation <= tol
        && case.max_asymmetry_deviation <= tol
        && case.max_eigenvalue_deviation.is_none_or(|d| d <= tol)
        && case.max_ricci_deviation.is_none_or(|d| d <= tol);
    Ok(case)
}

pub fn cmd_verify_appendix(cfg: &RunConfig) -> Result<VerifyOut> {
    if cfg.samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    let cases = family_grid()
        .into_iter()
        .map(|f| verify_case(f, cfg.samples, cfg.seed, cfg.tol(), cfg.gap_tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyOut {
        samples: cfg.samples,
        seed: cfg.seed,
        tol: cfg.tol(),
        pass: cases.iter().all(|c| c.pass),
        cases,
    })
}

// ---------------------------------------------------------------------------
// sweep

#[derive(Debug, Clone, Serialize)]
pub struct CountOut {
    pub value: usize,
    pub count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepOut {
    pub algebra: String,
    pub samples: usize,
    pub seed: u64,
    pub gks_space_dims: Vec<CountOut>,
    pub r_histogram: Vec<CountOut>,
    pub modal_r: Option<usize>,
    pub max_r: Option<usize>,
    /// Fraction of samples with fewer than three distinct eigenvalues.
    pub fraction_below_three: f64,
    /// Fraction of samples with fewer distinct eigenvalues than the modal value.
    pub degenerate_fraction: f64,
    pub max_commutator_norm: f64,
}

impl SweepOut {
    fn new(s: &SweepStats) -> Self {
        let counts = |m: &std::collections::BTreeMap<usize, usize>| {
            m.iter().map(|(&value, &count)| CountOut { value, count }).collect()
        };
        SweepOut {
            algebra: s.family.to_string(),
            samples: s.samples,
            seed: s.seed,
            gks_space_dims: counts(&s.gk_dims),
            r_histogram: counts(&s.r_histogram),
            modal_r: s.modal_r,
            max_r: s.r_histogram.keys().next_back().copied(),
            fraction_below_three: s.fraction_below_three(),
            degenerate_fraction: s.fraction_below_modal(),
            max_commutator_norm: s.max_commutator,
        }
    }
}

impl Render for SweepOut {
    fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}  samples {}  seed {}", self.algebra, self.samples, self.seed);
        for c in &self.gks_space_dims {
            let _ = writeln!(out, "GK space dim {:<3}  {} samples", c.value, c.count);
        }
        for c in &self.r_histogram {
            let _ = writeln!(out, "r = {:<11}  {} samples", c.value, c.count);
        }
        let _ = writeln!(out, "modal r            {}", opt(self.modal_r));
        let _ = writeln!(out, "fraction r < 3     {}", sig6(self.fraction_below_three));
        let _ = writeln!(out, "degenerate frac.   {}", sig6(self.degenerate_fraction));
        let _ = writeln!(out, "max |[A, Ric]|     {}", sig6(self.max_commutator_norm));
        out
    }
}

pub fn cmd_sweep(cfg: &RunConfig, algebra: &str) -> Result<SweepOut> {
    let family = bianchi(algebra)?;
    let stats = genericity_sweep(family, cfg.samples, cfg.seed, cfg.tol(), cfg.gap_tol)?;
    Ok(SweepOut::new(&stats))
}

// ---------------------------------------------------------------------------
// table1

#[derive(Debug, Clone, Serialize)]
pub struct Table1Row {
    pub algebra: String,
    pub samples: usize,
    /// `None` when the samples disagree.
    pub gks_space_dim: Option<usize>,
    pub generic_r: Option<usize>,
    pub max_r: Option<usize>,
    pub degenerate_fraction: f64,
    pub expected_gks_space_dim: usize,
    pub expected_r: Option<usize>,
    pub matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table1Out {
    pub samples: usize,
    pub seed: u64,
    pub rows: Vec<Table1Row>,
    pub pass: bool,
}

impl Render for Table1Out {
    fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} samples per parameter value, seed {}", self.samples, self.seed);
        let _ = writeln!(out, "{:<28} {:>8} {:>3} {:>12}  expected", "algebra", "dim GK", "r", "degenerate");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<28} {:>8} {:>3} {:>12}  {} {}  {}",
                r.algebra,
                opt(r.gks_space_dim),
                opt(r.generic_r),
                sig6(r.degenerate_fraction),
                r.expected_gks_space_dim,
                opt(r.expected_r),
                if r.matches { "ok" } else { "MISMATCH" }
            );
        }
        let _ = writeln!(out, "overall: {}", verdict(self.pass));
        out
    }

    fn passed(&self) -> bool {
        self.pass
    }
}

fn merge(stats: &[SweepStats]) -> SweepStats {
    let mut total = stats[0].clone();
    for s in &stats[1..] {
        total.samples += s.samples;
        for (&k, &v) in &s.gk_dims {
            *total.gk_dims.entry(k).or_insert(0) += v;
        }
        for (&k, &v) in &s.r_histogram {
            *total.r_histogram.entry(k).or_insert(0) += v;
        }
        total.max_commutator = total.max_commutator.max(s.max_commutator);
    }
    total.modal_r = total
        .r_histogram
        .iter()
        .max_by_key(|&(&r, &count)| (count, r))
        .map(|(&r, _)| r);
    let below = |limit: usize| total.r_histogram.iter().filter(|(&r, _)| r < limit).map(|(_, &c)| c).sum();
    total.below_three = below(3);
    total.below_modal = total.modal_r.map_or(0, below);
    total
}

pub fn cmd_table1(cfg: &RunConfig) -> Result<Table1Out> {
    use BianchiFamily::*;
    if cfg.samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    let rows: Vec<(&str, Vec<BianchiFamily>)> = vec![
        ("L(3,-1)", vec![L3Minus1]),
        ("L(3,1)", vec![L3One]),
        ("L(3,2,x), x = -1", vec![L3Two(-1.0)]),
        ("L(3,2,x), x in {-1/2,1/2,1}", vec![L3Two(-0.5), L3Two(0.5), L3Two(1.0)]),
        ("L(3,3)", vec![L3Three]),
        ("L(3,4,x), x = 0", vec![L3Four(0.0)]),
        ("L(3,4,x), x in {1/2,1,2}", vec![L3Four(0.5), L3Four(1.0), L3Four(2.0)]),
        ("L(3,5)", vec![L3Five]),
        ("L(3,6)", vec![L3Six]),
    ];
    let mut out = Vec::new();
    for (label, families) in rows {
        let stats = families
            .iter()
            .map(|&f| genericity_sweep(f, cfg.samples, cfg.seed, cfg.tol(), cfg.gap_tol))
            .collect::<Result<Vec<_>>>()?;
        let s = merge(&stats);
        let (expected_dim, expected_r) = families[0].expected_gk_profile();
        let gks_space_dim = s.uniform_gk_dim();
        let matches = gks_space_dim == Some(expected_dim) && s.modal_r == expected_r;
        out.push(Table1Row {
            algebra: label.to_string(),
            samples: s.samples,
            gks_space_dim,
            generic_r: s.modal_r,
            max_r: s.r_histogram.keys().next_back().copied(),
            degenerate_fraction: s.fraction_below_modal(),
            expected_gks_space_dim: expected_dim,
            expected_r,
            matches,
        });
    }
    Ok(Table1Out {
        samples: cfg.samples,
        seed: cfg.seed,
        pass: out.iter().all(|r| r.matches),
        rows: out,
    })
}

// ---------------------------------------------------------------------------
// selftest

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub deviation: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestOut {
    pub checks: Vec<Check>,
    pub failed: usize,
    pub pass: bool,
}

impl Render for SelftestOut {
    fn table(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{}  {:<48} {:>12} <= {:<10}",
                verdict(c.pass),
                c.name,
                sig6(c.deviation),
                sig6(c.threshold)
            );
        }
        let _ = writeln!(out, "{} checks, {} failed: {}", self.checks.len(), self.failed, verdict(self.pass));
        out
    }

    fn passed(&self) -> bool {
        self.pass
    }
}

struct Checks {
    tol: Option<f64>,
    list: Vec<Check>,
}

impl Checks {
    fn add(&mut self, name: impl Into<String>, deviation: f64, default: f64) {
        let threshold = self.tol.unwrap_or(default);
        self.list.push(Check {
            name: name.into(),
            deviation,
            threshold,
            pass: deviation <= threshold,
        });
    }
}

/// Runs the invariant suite. `broken_clifford` swaps in a Clifford action
/// with the wrong contraction sign, which the relation checks must catch.
pub fn cmd_selftest(cfg: &RunConfig, broken_clifford: bool) -> Result<SelftestOut> {
    let mut checks = Checks {
        tol: cfg.tol,
        list: Vec::new(),
    };

    for n in 1..=6 {
        let cl = if broken_clifford {
            Clifford::with_flipped_contraction(n)?
        } else {
            Clifford::new(n)?
        };
        let r = cl.relations_check(0.0);
        checks.add(format!("clifford relations n={n}"), r.max_violation, 1e-12);
    }

    let mut r = rng(cfg.seed);
    for n in 1..=3 {
        let cl = Clifford::new(n)?;
        let d = cl.frame_dim();
        let omega = random_skew(&mut r, d);
        let v = random_vector(&mut r, d);
        let lift = cl.spin_lift(&omega)?;
        let mut worst: f64 = 0.0;
        for mask in 0..cl.spinor_dim() {
            let psi = Spinor::basis(n, mask);
            let lhs = &lift.apply(&cl.apply_vector(&v, &psi)?) - &cl.apply_vector(&v, &lift.apply(&psi))?;
            let wv: Vec<f64> = (&omega * nalgebra::DVector::from_column_slice(&v)).iter().copied().collect();
            worst = worst.max(lhs.max_abs_diff(&cl.apply_vector(&wv, &psi)?));
        }
        checks.add(format!("spin lift equivariance n={n}"), worst, 1e-12);
    }

    let samples = cfg.samples.clamp(1, 20);
    for family in family_grid() {
        let alg = make_bianchi(family)?;
        let mut frames = vec![FrameChange::identity(3)];
        frames.extend(sample_frames(3, samples, cfg.seed));
        let mut worst = [0.0f64; 8];
        let mut mismatches = 0;
        for p in &frames {
            let mla = metric_from_frame_change(&alg, p)?;
            let via_gram = orthonormalize(&alg, &p.gram())?;
            let scale = mla.ortho().max_abs().max(1.0);
            let nm = nomizu(&mla);
            let curv = curvature(&nm, &mla);
            let ric_scale = curv.ricci().amax().max(1.0);
            let report = full_report(&mla, cfg.tol(), cfg.gap_tol)?;
            let a_scale = report.a.amax().max(1.0);
            let spinorial = [Spinor::one(1), Spinor::y(1, 1)]
                .iter()
                .map(|psi| ricci_spinorial_check(&nm, &mla, psi, f64::INFINITY).map(|c| c.max_residual))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            let devs = [
                mla.orthonormality_defect(),
                via_gram.ortho().c_distance(mla.ortho()) / scale,
                check_jacobi(mla.ortho(), 0.0).max_violation / (scale * scale),
                nm.torsion_defect(mla.ortho()) / scale,
                nm.metricity_defect() / scale,
                spinorial / ric_scale,
                (&report.a - reference_a(family, p)?).amax() / a_scale,
                if report.symmetric {
                    report.commutator_norm / (report.a.amax() * curv.ricci().amax() + 1.0)
                } else {
                    0.0
                },
            ];
            for (w, d) in worst.iter_mut().zip(devs) {
                *w = w.max(d);
            }
            if report.symmetric != family.has_symmetric_endomorphism() {
                mismatches += 1;
            }
        }
        let names = [
            "orthonormal frame",
            "frame/gram agreement",
            "jacobi",
            "torsion",
            "metricity",
            "spinorial ricci",
            "A vs closed form",
            "[A, Ric]",
        ];
        for (name, w) in names.iter().zip(worst) {
            checks.add(format!("{name} {family}"), w, 1e-10);
        }
        checks.list.push(Check {
            name: format!("symmetry verdict {family}"),
            deviation: mismatches as f64,
            threshold: 0.0,
            pass: mismatches == 0,
        });
    }

    for n in 1..=5 {
        let cfg_n = RunConfig {
            tol: Some(f64::INFINITY),
            ..cfg.clone()
        };
        let h = cmd_heisenberg(&cfg_n, n, None, None, None)?;
        let deviation = h.a_deviation.max(h.solve_residual).max(h.gk_residual);
        checks.add(format!("heisenberg n={n}"), deviation, 1e-10);
        checks.list.push(Check {
            name: format!("heisenberg distinct count n={n}"),
            deviation: h.distinct_count.map_or(f64::INFINITY, |r| (r as f64 - (n + 1) as f64).abs()),
            threshold: 0.0,
            pass: h.distinct_count == Some(n + 1),
        });
    }

    let failed = checks.list.iter().filter(|c| !c.pass).count();
    Ok(SelftestOut {
        checks: checks.list,
        failed,
        pass: failed == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_numbers_have_seventeen_digits() {
        let s = to_json(&vec![0.25, -0.0, f64::NAN, 1.0 / 3.0]);
        assert!(s.contains("2.5000000000000000e-1"));
        assert!(s.contains("0.0000000000000000e0"));
        assert!(!s.contains("-0.0"));
        assert!(s.contains("null"));
        let back: Vec<Option<f64>> = serde_json::from_str(&s).unwrap();
        assert_eq!(back[3], Some(1.0 / 3.0));
    }

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.25), "0.25");
        assert_eq!(sig6(1.0 / 3.0), "0.333333");
        assert_eq!(sig6(123456.7), "123457");
        assert_eq!(sig6(1234567.0), "1.23457e6");
        assert_eq!(sig6(-11.0 / 24.0), "-0.458333");
        assert_eq!(sig6(1e-12), "1.00000e-12");
        assert_eq!(sig6(0.0), "0");
    }

    #[test]
    fn analyze_keys_are_ordered() {
        let out = cmd_analyze(&RunConfig::default(), "L3(1)", "identity").unwrap();
        let s = to_json(&out);
        let keys = [
            "\"A\"", "solve_residual", "symmetric", "asymmetry", "eigenvalues", "distinct_count",
            "dirac_eigenvalue", "ricci", "commutator_norm", "gks_space_dim",
        ];
        let pos: Vec<usize> = keys.iter().map(|k| s.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(out.report.distinct_count, Some(2));
    }

    #[test]
    fn analyze_inline_metric() {
        let out = cmd_analyze(
            &RunConfig::default(),
            "L3(2,-1)",
            r#"{"frame_P":{"alpha":1,"beta":0,"gamma":0,"epsilon":1,"zeta":0,"iota":1}}"#,
        )
        .unwrap();
        let e = out.report.eigenvalues.unwrap();
        for (v, x) in e.iter().zip([-0.5, 0.0, 0.5]) {
            assert!((v - x).abs() < 1e-14);
        }
    }

    #[test]
    fn analyze_abelian_from_json() {
        let out = cmd_analyze(&RunConfig::default(), r#"{"dim":3,"brackets":[]}"#, r#"{"gram":[[2,0,0],[0,1,0],[0,0,3]]}"#).unwrap();
        assert!(out.report.a.iter().flatten().all(|&x| x == 0.0));
        assert_eq!(out.report.killing_constant, Some(0.0));
    }

    #[test]
    fn input_errors_map_to_exit_codes() {
        let cfg = RunConfig::default();
        let broken = r#"{"dim":3,"brackets":[{"i":1,"j":2,"coeffs":[0,0,1]},{"i":2,"j":3,"coeffs":[0,1,0]}]}"#;
        let e = cmd_analyze(&cfg, broken, "identity").unwrap_err();
        assert!(matches!(e, Error::NotLieAlgebra(_)));
        assert_eq!(e.exit_code(), 2);
        assert_eq!(cmd_analyze(&cfg, "{not json", "identity").unwrap_err().exit_code(), 3);
        assert_eq!(cmd_analyze(&cfg, "/nonexistent/alg.json", "identity").unwrap_err().exit_code(), 3);
        assert_eq!(cmd_analyze(&cfg, "L3(2,3)", "identity").unwrap_err().exit_code(), 2);
        assert_eq!(cmd_analyze(&cfg, "L3(1)", r#"{"gram":[[1,0,0],[0,-1,0],[0,0,1]]}"#).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn heisenberg_defaults_n3() {
        let h = cmd_heisenberg(&RunConfig::default(), 3, None, None, None).unwrap();
        let expect = [0.25, 0.125, 1.0 / 12.0];
        for (l, e) in h.lambdas.iter().zip(expect) {
            assert!((l - e).abs() < 1e-15);
        }
        assert!((h.mu + 11.0 / 24.0).abs() < 1e-15);
        assert_eq!(h.distinct_count, Some(4));
        assert!(h.pass);
    }

    #[test]
    fn table1_small_run_matches() {
        let cfg = RunConfig { samples: 20, ..RunConfig::default() };
        let t = cmd_table1(&cfg).unwrap();
        assert!(t.pass, "{}", t.table());
        assert_eq!(t.rows.len(), 9);
    }

    #[test]
    fn selftest_negative_controls() {
        let cfg = RunConfig { samples: 20, ..RunConfig::default() };
        assert!(cmd_selftest(&cfg, false).unwrap().pass);
        let broken = cmd_selftest(&cfg, true).unwrap();
        assert!(!broken.pass);
        assert!(broken.checks.iter().any(|c| c.name.starts_with("clifford relations") && !c.pass));
        let strict = cmd_selftest(&RunConfig { tol: Some(1e-15), ..cfg }, false).unwrap();
        assert!(strict.failed > 0);
    }
}
