//! The code families: parameter handling, predicted invariants and
//! construction.
//!
//! Every family turns its parameters into an evaluation plan (fibers plus a
//! capped function basis) and predicts dimension and a distance window
//! [d_lower, d_upper]. Predictions are recomputed from the stored parameters
//! during verification, so they are pure functions of (family, params, n).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::curves::{ladder_exponents, CurveKind, FiberedCurve};
use crate::error::{Error, Result};
use crate::gfq::{Enc, Field};
use crate::lrcode::{
    build_code, build_code_raw, BasisSlot, EvaluationPlan, FunctionBasis, LinearCode, LocalFiber,
    Monomial, PredictedBounds, RawEvaluation,
};
use crate::polyalg::{Matrix, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Product of a line and a rational normal curve; independent caps M
    /// (constants slot) and N (coordinate slots).
    Baseline,
    /// Fibers of a degree-(r+1) polynomial map g; all slots capped at N.
    TamoBarg,
    /// Cyclic cover x^(r+1) = t^alpha + c with refined per-slot caps.
    Cyclic,
    /// Curve of bidegree (alpha, r+1) on P1xP1, uniform caps.
    P1xP1,
    /// Same curve with per-slot cap corrections.
    P1xP1Refined,
    /// Curve on the Hirzebruch surface F(mh), uniform growing caps.
    Hirzebruch,
    /// Same with per-slot cap corrections.
    HirzebruchRefined,
    /// Quartic multisection of the Legendre elliptic surface; r = 3.
    EllipticLegendre,
    /// x = y^2 multisection of y^2 = x^3 + x - t^2 - 1; r = 5.
    EllipticR5,
    /// Multisection of y^2 = x(x+1)(x+t^2+1) over GF(pu^2); r = pu.
    Ulmer,
}

pub const ALL_FAMILIES: [Family; 10] = [
    Family::Baseline,
    Family::TamoBarg,
    Family::Cyclic,
    Family::P1xP1,
    Family::P1xP1Refined,
    Family::Hirzebruch,
    Family::HirzebruchRefined,
    Family::EllipticLegendre,
    Family::EllipticR5,
    Family::Ulmer,
];

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::Baseline => "baseline",
            Family::TamoBarg => "tamo-barg",
            Family::Cyclic => "cyclic",
            Family::P1xP1 => "p1xp1",
            Family::P1xP1Refined => "p1xp1-refined",
            Family::Hirzebruch => "hirzebruch",
            Family::HirzebruchRefined => "hirzebruch-refined",
            Family::EllipticLegendre => "elliptic-legendre",
            Family::EllipticR5 => "elliptic-r5",
            Family::Ulmer => "ulmer",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Family> {
        ALL_FAMILIES
            .into_iter()
            .find(|f| f.tag() == tag)
            .ok_or_else(|| Error::Parse(format!("unknown family tag {tag:?}")))
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.tag())
    }
}

/// Family parameters, both as construction input and as the normalized
/// `params` block of a code file. Only the fields a family uses are stored.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    /// Number of fibers.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,
    /// Constants-slot degree cap (baseline).
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub cap_m: Option<i64>,
    /// Coordinate-slot degree cap (baseline, tamo-barg).
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub cap_n: Option<i64>,
    /// Base-direction degree of the covering curve.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u32>,
    /// Hirzebruch surface twist.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mh: Option<u32>,
    /// Designed distance of the ruled-surface and r = 5 elliptic families.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dd: Option<i64>,
    /// Designed distance of the Legendre and square-order elliptic families.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<i64>,
    /// Constant term of t^alpha + c.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<Enc>,
    /// Coefficients of the covering map g, lowest-first (tamo-barg).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Enc>>,
}

/// Predicted invariants; d_opt for the realized code comes from the measured
/// rank and is not part of the prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub k: i64,
    /// Second prediction where the source formulas disagree (basis-count
    /// summation for the square-order elliptic family).
    pub k_alt: Option<i64>,
    pub d_lower: i64,
    pub d_upper: i64,
}

/// A constructed code together with its prediction, the number of basis
/// functions evaluated, and any structured low-weight codewords the
/// construction knows about.
#[derive(Clone, Debug)]
pub struct Construction {
    pub code: LinearCode,
    pub prediction: Prediction,
    pub basis_size: usize,
    pub witnesses: Vec<Vec<Enc>>,
}

fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    (a + b - 1).div_euclid(b)
}

fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::PreconditionViolation(format!("parameter {name} is required")))
}

fn pre(msg: impl Into<String>) -> Error {
    Error::PreconditionViolation(msg.into())
}

/// Designed-distance helper: checks (r+1) | (n - d) and 1 <= d < n, returns
/// (n - d) / (r + 1).
fn designed_quotient(n: usize, d: i64, r_plus_1: i64, label: &str) -> Result<i64> {
    let n = n as i64;
    if d < 1 || d >= n {
        return Err(pre(format!(
            "{label} must satisfy 1 <= {label} < n = {n}, got {d}"
        )));
    }
    if (n - d) % r_plus_1 != 0 {
        return Err(Error::DivisibilityViolation(format!(
            "{r_plus_1} must divide n - {label} = {} (n = {n}, {label} = {d})",
            n - d
        )));
    }
    Ok((n - d) / r_plus_1)
}

fn check_b_consistent(params: &FamilyParams, r: usize, n: usize) -> Result<usize> {
    let b = need(params.b, "b")?;
    if b * (r + 1) != n {
        return Err(pre(format!("n = {n} must equal b(r+1) = {}", b * (r + 1))));
    }
    Ok(b)
}

/// Slot layout of a family's function basis for a code of length n.
pub fn slots_for(
    family: Family,
    field: &Field,
    params: &FamilyParams,
    n: usize,
) -> Result<FunctionBasis> {
    let ruled = |caps: Vec<(i64, u32)>| FunctionBasis {
        slots: caps
            .into_iter()
            .enumerate()
            .map(|(i, (cap, epsilon))| BasisSlot {
                x_exp: i as u32,
                y_exp: 0,
                cap,
                epsilon,
            })
            .collect(),
    };
    match family {
        Family::Baseline => {
            let r = need(params.r, "r")? as i64;
            let m = need(params.cap_m, "M")?;
            let nn = need(params.cap_n, "N")?;
            let delta = (m - nn).max(0) as u32;
            let mut caps = vec![(m, 0)];
            caps.extend(std::iter::repeat_n((nn, delta), (r - 1).max(0) as usize));
            Ok(ruled(caps))
        }
        Family::TamoBarg => {
            let r = need(params.r, "r")?;
            let nn = need(params.cap_n, "N")?;
            Ok(ruled(vec![(nn, 0); r]))
        }
        Family::Cyclic => {
            let r = need(params.r, "r")? as i64;
            let s = designed_quotient(n, need(params.dd, "dd")?, r + 1, "dd")?;
            Ok(ruled(
                (0..r)
                    .map(|j| {
                        let e = ceil_div(2 * j, r + 1) as u32;
                        (s - i64::from(e), e)
                    })
                    .collect(),
            ))
        }
        Family::P1xP1 => {
            let r = need(params.r, "r")? as i64;
            let nn = designed_quotient(n, need(params.dd, "dd")?, r + 1, "dd")?;
            Ok(ruled(vec![(nn, 0); r as usize]))
        }
        Family::P1xP1Refined | Family::HirzebruchRefined => {
            // The refined caps are independent of the Hirzebruch twist: the
            // twist enlarges the uniform caps and the correction terms by the
            // same amount.
            let r = need(params.r, "r")? as i64;
            let alpha = i64::from(need(params.alpha, "alpha")?);
            let mh = if family == Family::HirzebruchRefined {
                i64::from(need(params.mh, "mh")?)
            } else {
                0
            };
            let nn = designed_quotient(n, need(params.dd, "dd")?, r + 1, "dd")?;
            Ok(ruled(
                (0..r)
                    .map(|i| {
                        let cut = ceil_div(alpha * i, r + 1);
                        (nn - cut, (cut + i * mh) as u32)
                    })
                    .collect(),
            ))
        }
        Family::Hirzebruch => {
            let r = need(params.r, "r")? as i64;
            let mh = i64::from(need(params.mh, "mh")?);
            let nn = designed_quotient(n, need(params.dd, "dd")?, r + 1, "dd")?;
            Ok(ruled((0..r).map(|i| (nn + i * mh, 0)).collect()))
        }
        Family::EllipticLegendre => {
            let s = designed_quotient(n, need(params.d, "d")?, 4, "d")?;
            Ok(FunctionBasis {
                slots: elliptic_slots(3, &[s, s - 1, s - 1], &[0, 1, 1]),
            })
        }
        Family::EllipticR5 => {
            let s = designed_quotient(n, need(params.dd, "dd")?, 6, "dd")?;
            Ok(FunctionBasis {
                slots: elliptic_slots(5, &[s, s - 1, s - 1, s - 2, s - 1], &[0, 1, 1, 2, 1]),
            })
        }
        Family::Ulmer => {
            let pu = need(params.r, "r")? as i64;
            require_square_order(field, pu as usize)?;
            let n0 = designed_quotient(n, need(params.d, "d")?, pu + 1, "d")?;
            let exps = ladder_exponents(pu as usize);
            Ok(FunctionBasis {
                slots: exps
                    .into_iter()
                    .map(|(a, b)| {
                        let e: u32 = if b == 1 {
                            2
                        } else if a >= 1 {
                            1
                        } else {
                            0
                        };
                        BasisSlot {
                            x_exp: a,
                            y_exp: b,
                            cap: n0 - i64::from(e),
                            epsilon: e,
                        }
                    })
                    .collect(),
            })
        }
    }
}

fn elliptic_slots(r: usize, caps: &[i64], eps: &[u32]) -> Vec<BasisSlot> {
    ladder_exponents(r)
        .into_iter()
        .zip(caps.iter().zip(eps))
        .map(|((a, b), (&cap, &epsilon))| BasisSlot {
            x_exp: a,
            y_exp: b,
            cap,
            epsilon,
        })
        .collect()
}

fn require_square_order(field: &Field, pu: usize) -> Result<()> {
    if (pu as u64).checked_mul(pu as u64) != Some(field.q()) {
        return Err(pre(format!(
            "locality {pu} requires a field of order {pu}^2, got q = {}",
            field.q()
        )));
    }
    Ok(())
}

/// Baseline prediction as pure arithmetic in (r, b, M, N); callers check
/// the parameter ranges.
pub fn baseline_prediction(r: i64, b: i64, m: i64, nn: i64) -> Prediction {
    let delta = m - nn;
    Prediction {
        k: (m + 1) + (r - 1) * (nn + 1),
        k_alt: None,
        d_lower: ((b - m) * (r + 1)).min(2 * (b - nn)),
        d_upper: (r + 1) * (b - nn - 1) - delta - ceil_div(delta, r) + 2,
    }
}

/// Predicted invariants of a family for a code of length n.
pub fn predict(
    family: Family,
    field: &Field,
    params: &FamilyParams,
    n: usize,
) -> Result<Prediction> {
    match family {
        Family::Baseline => {
            let r = need(params.r, "r")? as i64;
            let b = check_b_consistent(params, r as usize, n)? as i64;
            let m = need(params.cap_m, "M")?;
            let nn = need(params.cap_n, "N")?;
            if r < 2 {
                return Err(pre("locality r >= 2"));
            }
            if !(0 <= nn && nn <= m && m < b) {
                return Err(pre(format!(
                    "caps must satisfy 0 <= N <= M <= b-1, got M = {m}, N = {nn}, b = {b}"
                )));
            }
            Ok(baseline_prediction(r, b, m, nn))
        }
        Family::TamoBarg => {
            let r = need(params.r, "r")? as i64;
            let b = check_b_consistent(params, r as usize, n)? as i64;
            let nn = need(params.cap_n, "N")?;
            if !(0 <= nn && nn < b) {
                return Err(pre(format!(
                    "cap must satisfy 0 <= N <= b-1, got N = {nn}, b = {b}"
                )));
            }
            let d = n as i64 - (nn * (r + 1) + r - 1);
            Ok(Prediction {
                k: r * (nn + 1),
                k_alt: None,
                d_lower: d,
                d_upper: d,
            })
        }
        Family::Cyclic => {
            let r = need(params.r, "r")? as i64;
            check_b_consistent(params, r as usize, n)?;
            let dd = need(params.dd, "dd")?;
            let s = designed_quotient(n, dd, r + 1, "dd")?;
            let k = if r % 2 == 1 {
                r * s + (5 - r) / 2
            } else {
                // No closed form for even locality: count the surviving
                // basis functions directly.
                slots_for(family, field, params, n)?.size() as i64
            };
            let d_upper = match r {
                2 | 3 => dd,
                r if r % 2 == 1 => dd + (r - 5) / 2 + 2,
                r => dd + r / 2,
            };
            Ok(Prediction {
                k,
                k_alt: None,
                d_lower: dd,
                d_upper,
            })
        }
        Family::P1xP1 => {
            let r = need(params.r, "r")? as i64;
            check_b_consistent(params, r as usize, n)?;
            let alpha = i64::from(need(params.alpha, "alpha")?);
            let dd = need(params.dd, "dd")?;
            let nn = designed_quotient(n, dd, r + 1, "dd")?;
            let d_upper = dd - r + 1;
            if d_upper < 1 {
                return Err(pre(format!(
                    "designed distance too small: dd = {dd} gives upper bound {d_upper}"
                )));
            }
            Ok(Prediction {
                k: r * (nn + 1),
                k_alt: None,
                d_lower: dd - alpha * (r - 1),
                d_upper,
            })
        }
        Family::P1xP1Refined | Family::HirzebruchRefined => {
            let r = need(params.r, "r")? as i64;
            check_b_consistent(params, r as usize, n)?;
            let alpha = i64::from(need(params.alpha, "alpha")?);
            let dd = need(params.dd, "dd")?;
            if (r + 1) % alpha != 0 {
                return Err(Error::DivisibilityViolation(format!(
                    "the refined caps need alpha | r + 1, got alpha = {alpha}, r = {r}"
                )));
            }
            let nn = designed_quotient(n, dd, r + 1, "dd")?;
            if nn < ceil_div(alpha * (r - 1), r + 1) {
                return Err(pre(format!(
                    "cap too small for the refinement: need (n - dd)/(r+1) >= ceil(alpha(r-1)/(r+1)) = {}, got {nn}",
                    ceil_div(alpha * (r - 1), r + 1)
                )));
            }
            let mh = if family == Family::HirzebruchRefined {
                let mh = i64::from(need(params.mh, "mh")?);
                if (mh * (r * r - 1)) % 2 != 0 {
                    return Err(pre(format!(
                        "refined bounds need mh(r^2 - 1) even, got mh = {mh}, r = {r}"
                    )));
                }
                mh
            } else {
                0
            };
            let k0 = if alpha == r + 1 {
                r * (nn + 1) - r * (r - 1) / 2
            } else {
                r * (nn + 1) + 2 * alpha - (alpha + 1) * (r + 1) / 2
            };
            let d_upper0 =
                dd + (alpha - 1) * (r - 3) / 2 - ceil_div(4 * alpha - (alpha + 1) * (r + 1), 2 * r);
            Ok(Prediction {
                k: k0 - mh * r * (r - 1) / 2,
                k_alt: None,
                d_lower: dd,
                d_upper: d_upper0 + mh * (r * r - 1) / 2,
            })
        }
        Family::Hirzebruch => {
            let r = need(params.r, "r")? as i64;
            check_b_consistent(params, r as usize, n)?;
            let alpha = i64::from(need(params.alpha, "alpha")?);
            let mh = i64::from(need(params.mh, "mh")?);
            let dd = need(params.dd, "dd")?;
            let nn = designed_quotient(n, dd, r + 1, "dd")?;
            let d_upper = dd - (r - 1) - mh * r * (r - 1) / 2 - ceil_div(mh * (r - 1), 2);
            if d_upper < 1 {
                return Err(pre(format!(
                    "designed distance too small: dd = {dd} gives upper bound {d_upper}"
                )));
            }
            Ok(Prediction {
                k: r * (nn + 1) + mh * r * (r - 1) / 2,
                k_alt: None,
                d_lower: dd - (r - 1) * (alpha + mh * (r + 1)),
                d_upper,
            })
        }
        Family::EllipticLegendre => {
            check_b_consistent(params, 3, n)?;
            let d = need(params.d, "d")?;
            let s = designed_quotient(n, d, 4, "d")?;
            Ok(Prediction {
                k: 3 * s + 1,
                k_alt: None,
                d_lower: d,
                d_upper: d,
            })
        }
        Family::EllipticR5 => {
            check_b_consistent(params, 5, n)?;
            let dd = need(params.dd, "dd")?;
            let s = designed_quotient(n, dd, 6, "dd")?;
            Ok(Prediction {
                k: 5 * s,
                k_alt: None,
                d_lower: dd,
                d_upper: dd + 2,
            })
        }
        Family::Ulmer => {
            let pu = need(params.r, "r")? as i64;
            check_b_consistent(params, pu as usize, n)?;
            require_square_order(field, pu as usize)?;
            let d = need(params.d, "d")?;
            let n0 = designed_quotient(n, d, pu + 1, "d")?;
            let k_sum = slots_for(family, field, params, n)?.size() as i64;
            Ok(Prediction {
                k: pu * n0 - (pu - 1) / 2,
                k_alt: Some(k_sum),
                d_lower: d,
                d_upper: d + (pu + 3) / 2,
            })
        }
    }
}

/// Recomputes prediction and basis size from a code's stored parameters.
pub fn prediction_for(code: &LinearCode) -> Result<(Prediction, usize)> {
    let family = Family::from_tag(code.family())?;
    let params: FamilyParams = serde_json::from_value(code.params().clone())?;
    let prediction = predict(family, code.field(), &params, code.n())?;
    let basis = slots_for(family, code.field(), &params, code.n())?;
    Ok((prediction, basis.size()))
}

/// Fills defaults and keeps only the fields the family uses.
fn normalize(family: Family, field: &Field, input: &FamilyParams) -> Result<FamilyParams> {
    let mut out = FamilyParams {
        b: input.b,
        ..FamilyParams::default()
    };
    let fixed_r = |want: usize| -> Result<Option<usize>> {
        match input.r {
            Some(r) if r != want => Err(pre(format!(
                "family {family} has locality {want}, got r = {r}"
            ))),
            _ => Ok(Some(want)),
        }
    };
    match family {
        Family::Baseline => {
            out.r = Some(need(input.r, "r")?);
            out.cap_m = Some(need(input.cap_m, "M")?);
            out.cap_n = Some(need(input.cap_n, "N")?);
        }
        Family::TamoBarg => {
            let r = need(input.r, "r")?;
            out.r = Some(r);
            out.cap_n = Some(need(input.cap_n, "N")?);
            let g = match &input.g {
                Some(coeffs) => {
                    if let Some(&bad) = coeffs.iter().find(|&&c| c >= field.q()) {
                        return Err(Error::EncOutOfRange {
                            enc: bad,
                            q: field.q(),
                        });
                    }
                    Poly::new(field, coeffs)
                }
                None => Poly::monomial(field, r + 1),
            };
            if g.degree() != Some(r + 1) {
                return Err(pre(format!("deg g must be r + 1 = {}", r + 1)));
            }
            out.g = Some(g.coeffs().to_vec());
        }
        Family::Cyclic | Family::P1xP1 | Family::P1xP1Refined => {
            out.r = Some(need(input.r, "r")?);
            out.alpha = Some(input.alpha.unwrap_or(2));
            out.c = Some(input.c.unwrap_or(1));
            out.dd = Some(need(input.dd, "dd")?);
        }
        Family::Hirzebruch | Family::HirzebruchRefined => {
            out.r = Some(need(input.r, "r")?);
            out.alpha = Some(input.alpha.unwrap_or(2));
            out.mh = Some(input.mh.unwrap_or(1));
            out.c = Some(input.c.unwrap_or(1));
            out.dd = Some(need(input.dd, "dd")?);
        }
        Family::EllipticLegendre => {
            out.r = fixed_r(3)?;
            out.d = Some(need(input.d, "d")?);
        }
        Family::EllipticR5 => {
            out.r = fixed_r(5)?;
            out.dd = Some(need(input.dd, "dd")?);
        }
        Family::Ulmer => {
            let pu = (field.q() as f64).sqrt().round() as usize;
            require_square_order(field, pu)?;
            out.r = fixed_r(pu)?;
            out.d = Some(need(input.d, "d")?);
        }
    }
    if let Some(c) = out.c {
        if c >= field.q() {
            return Err(Error::EncOutOfRange {
                enc: c,
                q: field.q(),
            });
        }
    }
    Ok(out)
}

fn curve_kind(family: Family, field: &Field, params: &FamilyParams) -> Result<CurveKind> {
    Ok(match family {
        Family::Baseline => unreachable!("the baseline family does not use a covering curve"),
        Family::TamoBarg => CurveKind::GraphOfG {
            g: Poly::new(field, params.g.as_ref().expect("normalized")),
        },
        Family::Cyclic => CurveKind::CyclicCover {
            alpha: params.alpha.expect("normalized"),
            c: params.c.expect("normalized"),
        },
        Family::P1xP1 | Family::P1xP1Refined => CurveKind::P1xP1 {
            alpha: params.alpha.expect("normalized"),
            c: params.c.expect("normalized"),
        },
        Family::Hirzebruch | Family::HirzebruchRefined => CurveKind::Hirzebruch {
            alpha: params.alpha.expect("normalized"),
            mh: params.mh.expect("normalized"),
            c: params.c.expect("normalized"),
        },
        Family::EllipticLegendre => CurveKind::EllipticLegendre,
        Family::EllipticR5 => CurveKind::EllipticXEqY2,
        Family::Ulmer => CurveKind::EllipticUlmer {
            pu: params.r.expect("normalized") as u64,
        },
    })
}

fn local_basis(family: Family, r: usize) -> Vec<Monomial> {
    match family {
        Family::EllipticLegendre | Family::EllipticR5 | Family::Ulmer => ladder_exponents(r)
            .into_iter()
            .map(|(a, b)| Monomial {
                x_exp: a,
                y_exp: b,
                t_exp: 0,
            })
            .collect(),
        _ => (0..r as u32)
            .map(|i| Monomial {
                x_exp: i,
                y_exp: 0,
                t_exp: 0,
            })
            .collect(),
    }
}

/// Constructs a code of the given family. `seed` only matters for the
/// baseline fallback point sampler on very small fields.
pub fn construct(
    field: &Field,
    family: Family,
    input: &FamilyParams,
    seed: u64,
) -> Result<Construction> {
    let mut params = normalize(family, field, input)?;
    if family == Family::Baseline {
        return construct_baseline(field, &params, seed);
    }

    let r = params.r.expect("normalized");
    let curve = FiberedCurve::new(field, r, curve_kind(family, field, &params)?)?;
    let available = curve.split_fibers(None)?;
    let fibers = match params.b {
        Some(b) => {
            if available.len() < b {
                return Err(Error::NotEnoughFibers {
                    requested: b,
                    available: available.len(),
                });
            }
            available[..b].to_vec()
        }
        None => available,
    };
    if fibers.is_empty() {
        return Err(Error::NoFibers);
    }
    params.b = Some(fibers.len());
    let n = fibers.len() * (r + 1);

    let prediction = predict(family, field, &params, n)?;
    let basis = slots_for(family, field, &params, n)?;
    let basis_size = basis.size();
    let plan = EvaluationPlan {
        field: field.clone(),
        r,
        fibers,
        basis,
        local_basis: local_basis(family, r),
    };
    let code = build_code(
        &plan,
        family.tag(),
        serde_json::to_value(&params).expect("params always serialize"),
        PredictedBounds {
            d_lower: prediction.d_lower,
            d_upper: prediction.d_upper,
            d_opt: 0,
        },
    )?;
    Ok(Construction {
        code,
        prediction,
        basis_size,
        witnesses: Vec::new(),
    })
}

fn construct_baseline(field: &Field, params: &FamilyParams, seed: u64) -> Result<Construction> {
    let r = params.r.expect("normalized");
    let b = need(params.b, "b")?;
    if r < 2 {
        return Err(pre("locality r >= 2"));
    }
    if b as u64 > field.q() {
        return Err(Error::NotEnoughFibers {
            requested: b,
            available: field.q() as usize,
        });
    }
    let ts: Vec<Enc> = field.elements().take(b).collect();
    let coords = if field.q() >= (r + 1) as u64 {
        // Points of the rational normal curve u -> (u, u^2, ..., u^(r-1));
        // any r of them are affinely independent.
        field
            .elements()
            .take(r + 1)
            .map(|u| (1..r as u64).map(|i| field.pow(u, i)).collect())
            .collect()
    } else {
        sample_general_position(field, r, seed)?
    };
    baseline_from_parts(field, params, &ts, &coords)
}

/// Baseline construction from explicit fiber positions `ts` and a shared
/// point set: r+1 points of A^(r-1) in general position, used in every fiber.
pub fn baseline_with_points(
    field: &Field,
    r: usize,
    ts: &[Enc],
    coords: &[Vec<Enc>],
    cap_m: i64,
    cap_n: i64,
) -> Result<Construction> {
    let mut sorted = ts.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != ts.len() {
        return Err(pre("fiber positions must be distinct"));
    }
    for &t in ts {
        if t >= field.q() {
            return Err(Error::EncOutOfRange {
                enc: t,
                q: field.q(),
            });
        }
    }
    if coords.len() != r + 1 {
        return Err(pre(format!(
            "expected r + 1 = {} points, got {}",
            r + 1,
            coords.len()
        )));
    }
    for p in coords {
        if p.len() + 1 != r {
            return Err(pre(format!(
                "points live in A^(r-1), expected {} coordinates",
                r - 1
            )));
        }
        if let Some(&bad) = p.iter().find(|&&c| c >= field.q()) {
            return Err(Error::EncOutOfRange {
                enc: bad,
                q: field.q(),
            });
        }
    }
    let params = FamilyParams {
        r: Some(r),
        b: Some(ts.len()),
        cap_m: Some(cap_m),
        cap_n: Some(cap_n),
        ..FamilyParams::default()
    };
    baseline_from_parts(field, &params, ts, coords)
}

/// Affine general position: no r of the r+1 points lie on a common
/// hyperplane, i.e. every delete-one subset has invertible [1 | coords].
fn in_general_position(field: &Field, coords: &[Vec<Enc>]) -> bool {
    let r = coords.len() - 1;
    (0..coords.len()).all(|skip| {
        let rows: Vec<Vec<Enc>> = coords
            .iter()
            .enumerate()
            .filter(|&(s, _)| s != skip)
            .map(|(_, p)| std::iter::once(1).chain(p.iter().copied()).collect())
            .collect();
        Matrix::from_rows(field, &rows).rank() == r
    })
}

fn sample_general_position(field: &Field, r: usize, seed: u64) -> Result<Vec<Vec<Enc>>> {
    let q = field.q();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    for _ in 0..512 {
        let mut pts: Vec<Vec<Enc>> = Vec::new();
        let mut tries = 0;
        while pts.len() < r + 1 && tries < 10_000 {
            tries += 1;
            let cand: Vec<Enc> = (0..r - 1).map(|_| rng.random_range(0..q)).collect();
            if !pts.contains(&cand) {
                pts.push(cand);
            }
        }
        if pts.len() < r + 1 {
            break;
        }
        if in_general_position(field, &pts) {
            return Ok(pts);
        }
    }
    Err(Error::GeneralPositionFailure(format!(
        "no set of {} points of A^{} over GF({q}) in general position found",
        r + 1,
        r - 1
    )))
}

fn baseline_from_parts(
    field: &Field,
    params: &FamilyParams,
    ts: &[Enc],
    coords: &[Vec<Enc>],
) -> Result<Construction> {
    let r = params.r.expect("normalized");
    let n = ts.len() * (r + 1);
    let prediction = predict(Family::Baseline, field, params, n)?;
    let m = params.cap_m.expect("normalized");
    let nn = params.cap_n.expect("normalized");

    if !in_general_position(field, coords) {
        return Err(Error::GeneralPositionFailure(
            "some r of the r+1 points lie on a common hyperplane".into(),
        ));
    }

    // Value rows, slot-major: constants slot t^0..t^M, then each coordinate
    // slot x_i * t^0..t^N.
    let mut rows: Vec<Vec<Enc>> = Vec::new();
    let point_value = |i: usize, s: usize, j: u64, coord: Option<usize>| {
        let tv = field.pow(ts[i], j);
        match coord {
            None => tv,
            Some(c) => field.mul(tv, coords[s][c]),
        }
    };
    for j in 0..=m as u64 {
        rows.push(
            (0..ts.len())
                .flat_map(|i| (0..r + 1).map(move |s| point_value(i, s, j, None)))
                .collect(),
        );
    }
    for c in 0..r - 1 {
        for j in 0..=nn as u64 {
            rows.push(
                (0..ts.len())
                    .flat_map(|i| (0..r + 1).map(move |s| point_value(i, s, j, Some(c))))
                    .collect(),
            );
        }
    }

    let fibers = ts
        .iter()
        .map(|&t| LocalFiber {
            t,
            local_values: coords
                .iter()
                .map(|p| std::iter::once(1).chain(p.iter().copied()).collect())
                .collect(),
        })
        .collect();
    let raw = RawEvaluation {
        field: field.clone(),
        r,
        rows,
        fibers,
    };
    let code = build_code_raw(
        &raw,
        Family::Baseline.tag(),
        serde_json::to_value(params).expect("params always serialize"),
        PredictedBounds {
            d_lower: prediction.d_lower,
            d_upper: prediction.d_upper,
            d_opt: 0,
        },
    )?;

    let basis_size = slots_for(Family::Baseline, field, params, n)?.size();
    let witnesses = baseline_witnesses(field, ts, coords, m, nn);
    Ok(Construction {
        code,
        prediction,
        basis_size,
        witnesses,
    })
}

/// Structured low-weight codewords of the baseline family:
/// - vanish on the first M fibers: weight (b - M)(r + 1);
/// - vanish on the first N fibers and on the hyperplane through r - 1 of the
///   shared points: weight 2(b - N).
fn baseline_witnesses(
    field: &Field,
    ts: &[Enc],
    coords: &[Vec<Enc>],
    m: i64,
    nn: i64,
) -> Vec<Vec<Enc>> {
    let mut out = Vec::new();
    let a0 = Poly::from_roots(field, &ts[..m as usize]);
    out.push(
        ts.iter()
            .flat_map(|&t| std::iter::repeat_n(a0.eval(t), coords.len()))
            .collect(),
    );

    let h = Poly::from_roots(field, &ts[..nn as usize]);
    let hyperplane_rows: Vec<Vec<Enc>> = coords[..coords.len() - 2]
        .iter()
        .map(|p| std::iter::once(1).chain(p.iter().copied()).collect())
        .collect();
    let kernel = Matrix::from_rows(field, &hyperplane_rows).null_space();
    if let [ell] = &kernel[..] {
        let at = |p: &[Enc]| {
            p.iter()
                .zip(&ell[1..])
                .fold(ell[0], |acc, (&c, &w)| field.add(acc, field.mul(w, c)))
        };
        out.push(
            ts.iter()
                .flat_map(|&t| {
                    let ht = h.eval(t);
                    coords.iter().map(move |p| field.mul(ht, at(p)))
                })
                .collect(),
        );
    }
    out
}
