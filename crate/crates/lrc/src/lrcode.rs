//! Locally recoverable evaluation codes.
//!
//! A code is built from an evaluation plan: fibers of r+1 points each and a
//! function basis of monomials x^a y^b t^j with per-slot degree caps. The
//! generator matrix is the deterministic reduced row-echelon basis of the
//! basis-function value matrix, so k is always the measured rank. Every
//! coordinate carries a precomputed recovery set (the other r points of its
//! fiber) and interpolation weights; the recovery identity is checked on all
//! generator rows at build time.

use serde::{Deserialize, Serialize};

use crate::curves::Fiber;
use crate::error::{Error, Result};
use crate::gfq::{Enc, Field};
use crate::polyalg::Matrix;

/// x^(x_exp) * y^(y_exp) * t^(t_exp).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub x_exp: u32,
    pub y_exp: u32,
    pub t_exp: u32,
}

impl Monomial {
    pub fn eval(&self, f: &Field, x: Enc, y: Option<Enc>, t: Enc) -> Enc {
        let mut v = f.pow(x, u64::from(self.x_exp));
        if self.y_exp > 0 {
            let y = y.expect("monomial references y but the point has none");
            v = f.mul(v, f.pow(y, u64::from(self.y_exp)));
        }
        f.mul(v, f.pow(t, u64::from(self.t_exp)))
    }
}

/// One basis slot: a fiber-coordinate monomial x^a y^b whose t-coefficient
/// polynomial is capped at degree `cap`. A negative cap empties the slot.
/// `epsilon` records the degree cut applied to this slot relative to the
/// base cap, so every correction used is visible in reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisSlot {
    pub x_exp: u32,
    pub y_exp: u32,
    pub cap: i64,
    pub epsilon: u32,
}

/// Ordered basis slots. The flattened monomial list is slot-major with
/// t-degree ascending inside each slot, which fixes generator determinism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionBasis {
    pub slots: Vec<BasisSlot>,
}

impl FunctionBasis {
    pub fn monomials(&self) -> Vec<Monomial> {
        let mut out = Vec::new();
        for s in &self.slots {
            if s.cap < 0 {
                continue;
            }
            for j in 0..=s.cap as u32 {
                out.push(Monomial {
                    x_exp: s.x_exp,
                    y_exp: s.y_exp,
                    t_exp: j,
                });
            }
        }
        out
    }

    pub fn size(&self) -> usize {
        self.slots.iter().map(|s| (s.cap + 1).max(0) as usize).sum()
    }
}

/// Everything needed to evaluate a function basis on fibered points.
#[derive(Clone, Debug)]
pub struct EvaluationPlan {
    pub field: Field,
    pub r: usize,
    pub fibers: Vec<Fiber>,
    pub basis: FunctionBasis,
    /// r monomials (t_exp = 0) used as the local interpolation basis for
    /// recovery inside a fiber.
    pub local_basis: Vec<Monomial>,
}

impl EvaluationPlan {
    pub fn n(&self) -> usize {
        self.fibers.iter().map(|f| f.points.len()).sum()
    }
}

/// Predicted distance window stored alongside a constructed code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictedBounds {
    pub d_lower: i64,
    pub d_upper: i64,
    pub d_opt: i64,
}

/// A locally recoverable code with locality r: every coordinate is a fixed
/// linear combination of the other r coordinates of its fiber.
#[derive(Clone, Debug)]
pub struct LinearCode {
    field: Field,
    n: usize,
    k: usize,
    r: usize,
    generator: Matrix,
    recovery_sets: Vec<Vec<usize>>,
    recovery_weights: Vec<Vec<Enc>>,
    family: String,
    params: serde_json::Value,
    predicted: PredictedBounds,
}

/// Singleton-type upper bound with locality: n - k - ceil(k/r) + 2.
pub fn d_opt(n: usize, k: usize, r: usize) -> i64 {
    assert!(k >= 1 && r >= 1);
    n as i64 - k as i64 - (k as i64 + r as i64 - 1).div_euclid(r as i64) + 2
}

/// Basis-function values of one fiber's points in the local interpolation
/// basis: one length-r vector per point.
#[derive(Clone, Debug)]
pub struct LocalFiber {
    pub t: Enc,
    pub local_values: Vec<Vec<Enc>>,
}

/// A fully evaluated construction: the global value matrix (one row per
/// basis function, one column per point, fiber-major) plus each fiber's
/// local interpolation data.
#[derive(Clone, Debug)]
pub struct RawEvaluation {
    pub field: Field,
    pub r: usize,
    pub rows: Vec<Vec<Enc>>,
    pub fibers: Vec<LocalFiber>,
}

/// Builds the code for a plan. The generator is the deterministic reduced
/// row-echelon basis of the basis-value matrix; recovery weights come from
/// inverting each coordinate's local interpolation system.
pub fn build_code(
    plan: &EvaluationPlan,
    family: &str,
    params: serde_json::Value,
    predicted: PredictedBounds,
) -> Result<LinearCode> {
    let monomials = plan.basis.monomials();
    let f = &plan.field;
    assert_eq!(
        plan.local_basis.len(),
        plan.r,
        "local basis has r functions"
    );

    let mut points = Vec::new();
    let mut fibers = Vec::new();
    for fiber in &plan.fibers {
        debug_assert_eq!(
            fiber.points.len(),
            plan.r + 1,
            "fibers carry exactly r+1 points"
        );
        let local_values = fiber
            .points
            .iter()
            .map(|p| {
                plan.local_basis
                    .iter()
                    .map(|mono| mono.eval(f, p.x, p.y, fiber.t))
                    .collect()
            })
            .collect();
        fibers.push(LocalFiber {
            t: fiber.t,
            local_values,
        });
        for p in &fiber.points {
            points.push((p.x, p.y, fiber.t));
        }
    }
    let rows = monomials
        .iter()
        .map(|mono| {
            points
                .iter()
                .map(|&(x, y, t)| mono.eval(f, x, y, t))
                .collect()
        })
        .collect();
    let raw = RawEvaluation {
        field: f.clone(),
        r: plan.r,
        rows,
        fibers,
    };
    build_code_raw(&raw, family, params, predicted)
}

/// Core constructor shared by the plan-driven families and constructions
/// whose points are not captured by (x, y) coordinates.
pub fn build_code_raw(
    raw: &RawEvaluation,
    family: &str,
    params: serde_json::Value,
    predicted: PredictedBounds,
) -> Result<LinearCode> {
    if raw.fibers.is_empty() {
        return Err(Error::NoFibers);
    }
    if raw.rows.is_empty() {
        return Err(Error::EmptyBasis);
    }
    let f = &raw.field;
    let r = raw.r;
    let n = raw
        .fibers
        .iter()
        .map(|fb| fb.local_values.len())
        .sum::<usize>();
    for row in &raw.rows {
        assert_eq!(row.len(), n, "value rows span all points");
    }

    let generator = Matrix::from_rows(f, &raw.rows).row_basis();
    let k = generator.rows();
    if k == 0 {
        return Err(Error::EmptyBasis);
    }
    // The stored Singleton-type benchmark always refers to the measured rank.
    let predicted = PredictedBounds {
        d_opt: d_opt(n, k, r),
        ..predicted
    };

    // Per-coordinate recovery weights.
    let mut recovery_sets = Vec::with_capacity(n);
    let mut recovery_weights = Vec::with_capacity(n);
    let mut base = 0;
    for fiber in &raw.fibers {
        let vals = &fiber.local_values;
        debug_assert!(
            vals.iter().all(|v| v.len() == r),
            "local basis has r functions"
        );
        for j in 0..vals.len() {
            let others: Vec<usize> = (0..vals.len()).filter(|&u| u != j).collect();
            // Interpolation system: rows are local-basis values at the other
            // points. lambda solves M^T lambda = (values at the lost point).
            let m = Matrix::from_rows(
                f,
                &others.iter().map(|&u| vals[u].clone()).collect::<Vec<_>>(),
            );
            let lambda = m.transpose().solve(&vals[j]).map_err(|e| match e {
                Error::SingularMatrix => Error::SingularLocalMatrix { t: fiber.t },
                other => other,
            })?;
            recovery_sets.push(others.iter().map(|&u| base + u).collect());
            recovery_weights.push(lambda);
        }
        base += vals.len();
    }

    let code = LinearCode {
        field: f.clone(),
        n,
        k,
        r,
        generator,
        recovery_sets,
        recovery_weights,
        family: family.to_string(),
        params,
        predicted,
    };

    // The recovery identity on the generator rows certifies it for the whole
    // code by linearity.
    for row in 0..k {
        let word = code.generator.row(row);
        for i in 0..n {
            if code.recover_coordinate(word, i) != word[i] {
                return Err(Error::Internal(format!(
                    "recovery identity fails at generator row {row}, coordinate {i}"
                )));
            }
        }
    }
    Ok(code)
}

impl LinearCode {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn params(&self) -> &serde_json::Value {
        &self.params
    }

    pub fn predicted(&self) -> PredictedBounds {
        self.predicted
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn recovery_set(&self, i: usize) -> &[usize] {
        &self.recovery_sets[i]
    }

    pub fn recovery_weights(&self, i: usize) -> &[Enc] {
        &self.recovery_weights[i]
    }

    /// d_opt for the measured dimension.
    pub fn d_opt(&self) -> i64 {
        d_opt(self.n, self.k, self.r)
    }

    /// Encodes a length-k message as message x generator.
    pub fn encode(&self, message: &[Enc]) -> Vec<Enc> {
        assert_eq!(message.len(), self.k, "message length must be k");
        let f = &self.field;
        let mut word = vec![0; self.n];
        for (m, row) in message.iter().zip(0..self.k) {
            if *m == 0 {
                continue;
            }
            for (w, &g) in word.iter_mut().zip(self.generator.row(row)) {
                *w = f.add(*w, f.mul(*m, g));
            }
        }
        word
    }

    /// Value of coordinate i from the other coordinates of its fiber.
    pub fn recover_coordinate(&self, word: &[Enc], i: usize) -> Enc {
        let f = &self.field;
        self.recovery_sets[i]
            .iter()
            .zip(&self.recovery_weights[i])
            .fold(0, |acc, (&j, &w)| f.add(acc, f.mul(w, word[j])))
    }

    /// Fills the single erased coordinate of a word; returns (index, value).
    pub fn recover(&self, word: &[Option<Enc>]) -> Result<(usize, Enc)> {
        if word.len() != self.n {
            return Err(Error::PreconditionViolation(format!(
                "word has {} entries, code length is {}",
                word.len(),
                self.n
            )));
        }
        let erased: Vec<usize> = (0..self.n).filter(|&i| word[i].is_none()).collect();
        let [i] = erased[..] else {
            return Err(Error::PreconditionViolation(format!(
                "exactly one erasure expected, found {}",
                erased.len()
            )));
        };
        for v in word.iter().flatten() {
            if *v >= self.field.q() {
                return Err(Error::EncOutOfRange {
                    enc: *v,
                    q: self.field.q(),
                });
            }
        }
        let f = &self.field;
        let value = self.recovery_sets[i]
            .iter()
            .zip(&self.recovery_weights[i])
            .fold(0, |acc, (&j, &w)| {
                f.add(acc, f.mul(w, word[j].expect("only coordinate i is erased")))
            });
        Ok((i, value))
    }

    /// Coordinate groups ({i} plus its recovery set, sorted); these partition
    /// the coordinates into fibers.
    pub fn fiber_groups(&self) -> Vec<Vec<usize>> {
        let mut groups = Vec::new();
        let mut seen = vec![false; self.n];
        for i in 0..self.n {
            if seen[i] {
                continue;
            }
            let mut g: Vec<usize> = std::iter::once(i)
                .chain(self.recovery_sets[i].iter().copied())
                .collect();
            g.sort_unstable();
            for &j in &g {
                seen[j] = true;
            }
            groups.push(g);
        }
        groups
    }

    pub fn to_json(&self) -> String {
        let file = CodeFile {
            field: FieldSection {
                p: self.field.p(),
                m: self.field.m(),
                modulus: self.field.modulus().to_vec(),
            },
            n: self.n,
            k: self.k,
            r: self.r,
            family: self.family.clone(),
            params: self.params.clone(),
            generator: (0..self.k)
                .map(|i| self.generator.row(i).to_vec())
                .collect(),
            recovery_sets: self.recovery_sets.clone(),
            recovery_weights: self.recovery_weights.clone(),
            predicted: self.predicted,
        };
        let mut s = serde_json::to_string_pretty(&file).expect("code files always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<LinearCode> {
        let file: CodeFile = serde_json::from_str(text)?;
        let parse = |msg: String| Error::Parse(msg);

        let modulus = (!file.field.modulus.is_empty()).then_some(&file.field.modulus[..]);
        let field = Field::new(file.field.p, file.field.m, modulus)
            .map_err(|e| parse(format!("field: {e}")))?;
        let q = field.q();

        if file.n == 0 || file.k == 0 || file.r == 0 {
            return Err(parse("n, k and r must be positive".into()));
        }
        if file.k > file.n {
            return Err(parse(format!("k = {} exceeds n = {}", file.k, file.n)));
        }
        if file.generator.len() != file.k {
            return Err(parse(format!(
                "generator has {} rows, k = {}",
                file.generator.len(),
                file.k
            )));
        }
        for (i, row) in file.generator.iter().enumerate() {
            if row.len() != file.n {
                return Err(parse(format!(
                    "generator row {i} has {} entries, n = {}",
                    row.len(),
                    file.n
                )));
            }
            if let Some(&bad) = row.iter().find(|&&e| e >= q) {
                return Err(parse(format!(
                    "generator row {i}: element {bad} not in GF({q})"
                )));
            }
        }
        if file.recovery_sets.len() != file.n || file.recovery_weights.len() != file.n {
            return Err(parse(format!(
                "recovery data must have n = {} entries, got {} sets and {} weight vectors",
                file.n,
                file.recovery_sets.len(),
                file.recovery_weights.len()
            )));
        }
        for (i, (set, weights)) in file
            .recovery_sets
            .iter()
            .zip(&file.recovery_weights)
            .enumerate()
        {
            if set.len() != file.r || weights.len() != file.r {
                return Err(parse(format!(
                    "recovery data at coordinate {i} must have r = {} entries",
                    file.r
                )));
            }
            if set.iter().any(|&j| j >= file.n || j == i) {
                return Err(parse(format!(
                    "recovery set at coordinate {i} references invalid coordinates"
                )));
            }
            if let Some(&bad) = weights.iter().find(|&&w| w >= q) {
                return Err(parse(format!(
                    "recovery weight {bad} at coordinate {i} not in GF({q})"
                )));
            }
        }
        // The groups {i} + J_i must partition the coordinates into fibers of
        // size r + 1.
        let group_of = |i: usize| -> Vec<usize> {
            let mut g: Vec<usize> = std::iter::once(i)
                .chain(file.recovery_sets[i].iter().copied())
                .collect();
            g.sort_unstable();
            g.dedup();
            g
        };
        for i in 0..file.n {
            let g = group_of(i);
            if g.len() != file.r + 1 {
                return Err(parse(format!("coordinate {i}: recovery set has repeats")));
            }
            for &j in &g {
                if group_of(j) != g {
                    return Err(parse(format!(
                        "coordinates {i} and {j} disagree on their fiber group"
                    )));
                }
            }
        }

        Ok(LinearCode {
            field: field.clone(),
            n: file.n,
            k: file.k,
            r: file.r,
            generator: Matrix::from_rows(&field, &file.generator),
            recovery_sets: file.recovery_sets,
            recovery_weights: file.recovery_weights,
            family: file.family,
            params: file.params,
            predicted: file.predicted,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct FieldSection {
    p: u64,
    m: u32,
    modulus: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct CodeFile {
    field: FieldSection,
    n: usize,
    k: usize,
    r: usize,
    family: String,
    params: serde_json::Value,
    generator: Vec<Vec<Enc>>,
    recovery_sets: Vec<Vec<usize>>,
    recovery_weights: Vec<Vec<Enc>>,
    predicted: PredictedBounds,
}

/// How a reported distance value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceMode {
    None,
    Exact,
    SampledUpperBound,
    WitnessUpperBound,
}

impl std::fmt::Display for DistanceMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            DistanceMode::None => "none",
            DistanceMode::Exact => "exact",
            DistanceMode::SampledUpperBound => "sampled upper bound",
            DistanceMode::WitnessUpperBound => "witness upper bound",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "OPTIMAL")]
    Optimal,
    #[serde(rename = "OPTIMAL-BY-BOUNDS")]
    OptimalByBounds,
    #[serde(rename = "NOT-OPTIMAL")]
    NotOptimal,
    #[serde(rename = "UNDETERMINED")]
    Undetermined,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Optimal => "OPTIMAL",
            Verdict::OptimalByBounds => "OPTIMAL-BY-BOUNDS",
            Verdict::NotOptimal => "NOT-OPTIMAL",
            Verdict::Undetermined => "UNDETERMINED",
        };
        write!(f, "{s}")
    }
}

/// Predicted-versus-measured summary for one code.
#[derive(Clone, Debug, Serialize)]
pub struct ParamReport {
    pub family: String,
    pub n: usize,
    pub r: usize,
    pub k_predicted: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_predicted_alt: Option<i64>,
    pub k_measured: usize,
    pub d_lower_predicted: i64,
    pub d_upper_predicted: i64,
    pub d_opt: i64,
    pub d_measured: Option<usize>,
    pub distance_mode: DistanceMode,
    pub optimal: Option<bool>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl ParamReport {
    /// Assembles the report; the verdict is exact when d was measured and
    /// bounds-based when the predicted window already pinches d_opt.
    pub fn new(
        code: &LinearCode,
        k_predicted: i64,
        k_predicted_alt: Option<i64>,
        basis_size: usize,
        d_measured: Option<usize>,
        distance_mode: DistanceMode,
    ) -> ParamReport {
        let d_opt = code.d_opt();
        let predicted = code.predicted();
        let mut notes = Vec::new();
        if code.k() as i64 != k_predicted {
            notes.push(format!(
                "measured rank {} differs from predicted k = {}",
                code.k(),
                k_predicted
            ));
        }
        if let Some(alt) = k_predicted_alt {
            notes.push(format!(
                "second k prediction (basis-count summation): {alt}"
            ));
        }
        if basis_size != code.k() {
            notes.push(format!(
                "evaluation is not injective: {} basis functions, rank {}",
                basis_size,
                code.k()
            ));
        }
        let optimal = match (d_measured, distance_mode) {
            (Some(d), DistanceMode::Exact) => Some(d as i64 == d_opt),
            _ => None,
        };
        let verdict = match optimal {
            Some(true) => Verdict::Optimal,
            Some(false) => Verdict::NotOptimal,
            None => {
                if predicted.d_lower == d_opt && predicted.d_upper == d_opt {
                    Verdict::OptimalByBounds
                } else {
                    Verdict::Undetermined
                }
            }
        };
        ParamReport {
            family: code.family().to_string(),
            n: code.n(),
            r: code.r(),
            k_predicted,
            k_predicted_alt,
            k_measured: code.k(),
            d_lower_predicted: predicted.d_lower,
            d_upper_predicted: predicted.d_upper,
            d_opt,
            d_measured,
            distance_mode,
            optimal,
            verdict,
            notes,
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            out.push_str(&format!("{k:<22}{v}\n"));
        };
        line("family", self.family.clone());
        line("n / r", format!("{} / {}", self.n, self.r));
        match self.k_predicted_alt {
            Some(alt) => line("k predicted", format!("{} (alt {})", self.k_predicted, alt)),
            None => line("k predicted", self.k_predicted.to_string()),
        }
        line("k measured", self.k_measured.to_string());
        line(
            "d predicted",
            format!("[{}, {}]", self.d_lower_predicted, self.d_upper_predicted),
        );
        line("d_opt (measured k)", self.d_opt.to_string());
        match self.d_measured {
            Some(d) => line("d measured", format!("{d} ({})", self.distance_mode)),
            None => line("d measured", "-".to_string()),
        }
        line("verdict", self.verdict.to_string());
        for n in &self.notes {
            line("note", n.clone());
        }
        out
    }
}
