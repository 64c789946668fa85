//! The set `D_Ω = {B : Ω(B) > 0, c₁(B) ≥ 2, B·B ≥ 0}` and its infimal ratio
//! `d_Ω = inf Ω(B)/c₁(B)`, with `inf ∅ = ∞`.
//!
//! For the built-in families the infimum is known in closed form:
//!
//! * `CP²` with `[Ω] = s·l`: every `B = kL` in `D_Ω` has ratio `s·k / 3k = s/3`.
//! * `S²×S²` and `Σ_g×S²`: membership forces both coefficients to be
//!   non-negative and the `S²`-fibre coefficient positive, so the ratio is at
//!   least half the smaller sphere area, attained on that sphere class.
//!
//! For anything else the infimum is over an infinite set; [`d_omega`] then
//! searches a coordinate box and reports the result as an upper bound only.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::{b_plus, class_square, cup_product, Builtin, H2Class, ManifoldModel};
use crate::rational::Rational;

/// Truncation of the infinite search for `d_Ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest `c₁(B)` considered.
    pub c1_max: i64,
    /// Coordinates range over `[-coeff_max, coeff_max]`.
    pub coeff_max: i64,
}

impl SearchBudget {
    pub fn new(c1_max: i64, coeff_max: i64) -> Result<Self> {
        if c1_max < 2 {
            return Err(Error::InvalidArgument(format!("c1_max must be >= 2, got {c1_max}")));
        }
        if coeff_max < 1 {
            return Err(Error::InvalidArgument(format!("coeff_max must be >= 1, got {coeff_max}")));
        }
        Ok(SearchBudget { c1_max, coeff_max })
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { c1_max: 20, coeff_max: 10 }
    }
}

/// A rational or `+∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DValue {
    Finite(Rational),
    Infinite,
}

impl DValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            DValue::Finite(r) => Some(r),
            DValue::Infinite => None,
        }
    }
}

impl fmt::Display for DValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DValue::Finite(r) => write!(f, "{r}"),
            DValue::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for DValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DStatus {
    /// The value is `d_Ω` exactly.
    CertifiedExact,
    /// The value is a proven lower bound on `d_Ω`; the witness gives an upper bound.
    CertifiedLowerBoundWithWitness,
    /// The value is the best ratio inside the searched box, an upper bound on `d_Ω`.
    SearchUpperBoundOnly,
    /// `D_Ω` is empty, so `d_Ω = ∞`.
    CertifiedEmpty,
}

impl DStatus {
    /// Whether the value may be used where a lower bound on `d_Ω` is required.
    pub fn is_certified(self) -> bool {
        !matches!(self, DStatus::SearchUpperBoundOnly)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DOmegaResult {
    pub value: DValue,
    pub witness: Option<H2Class>,
    pub status: DStatus,
}

/// `Ω(B) > 0`, `c₁(B) ≥ 2` and `B·B ≥ 0`.
pub fn in_d(model: &ManifoldModel, b: &H2Class) -> Result<bool> {
    let omega = model.omega.evaluate(b)?;
    let c1 = model.c1.evaluate(b)?;
    let sq = model.lattice.pair(b, b)?;
    Ok(omega.is_positive() && c1 >= Rational::from_int(2) && !sq.is_negative())
}

fn closed_form(tag: &Builtin) -> Option<(Rational, H2Class)> {
    let half = Rational::frac(1, 2);
    match tag {
        Builtin::Cp2 { scale } => Some((scale / Rational::from_int(3), H2Class(vec![1]))),
        Builtin::S2xs2 { alpha, beta } => Some(if alpha <= beta {
            (alpha * &half, H2Class(vec![1, 0]))
        } else {
            (beta * &half, H2Class(vec![0, 1]))
        }),
        Builtin::Ruled { alpha, .. } => Some((alpha * &half, H2Class(vec![0, 1]))),
        Builtin::BlowupOf { .. } => None,
    }
}

fn emptiness_hypotheses_asserted(model: &ManifoldModel) -> bool {
    let f = &model.flags;
    f.in_class_c && f.minimal && !f.rational_or_ruled
}

pub fn d_omega(model: &ManifoldModel, budget: SearchBudget) -> Result<DOmegaResult> {
    d_omega_with(model, budget, Exec::default())
}

pub fn d_omega_with(model: &ManifoldModel, budget: SearchBudget, exec: Exec) -> Result<DOmegaResult> {
    model.ensure_valid()?;
    if let Some((value, witness)) = model.builtin.as_ref().and_then(closed_form) {
        return Ok(DOmegaResult {
            value: DValue::Finite(value),
            witness: Some(witness),
            status: DStatus::CertifiedExact,
        });
    }
    if emptiness_hypotheses_asserted(model) && certify_d_empty(model)?.certified {
        return Ok(DOmegaResult { value: DValue::Infinite, witness: None, status: DStatus::CertifiedEmpty });
    }
    search_d_omega(model, budget, exec)
}

/// Best candidate of a box search: ratio `num / den` with `den > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Best {
    num: i128,
    den: i128,
    coords: Vec<i64>,
}

impl Best {
    /// Smaller ratio wins; equal ratios fall back to lexicographic order of coordinates.
    fn better_than(&self, other: &Best) -> bool {
        match (self.num * other.den).cmp(&(other.num * self.den)) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => self.coords < other.coords,
        }
    }
}

fn merge(a: Option<Best>, b: Option<Best>) -> Option<Best> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b.better_than(&a) { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Integer data for the inner loop: `Ω = omega_int / scale`.
struct SearchData<'a> {
    pairing: &'a [Vec<i64>],
    c1: Vec<i64>,
    omega_int: Vec<i128>,
    scale: i128,
    budget: SearchBudget,
}

impl SearchData<'_> {
    fn consider(&self, coords: &[i64], best: &mut Option<Best>) {
        let c1: i128 = self.c1.iter().zip(coords).map(|(&c, &x)| c as i128 * x as i128).sum();
        if c1 < 2 || c1 > self.budget.c1_max as i128 {
            return;
        }
        let om: i128 = self.omega_int.iter().zip(coords).map(|(&w, &x)| w * x as i128).sum();
        if om <= 0 {
            return;
        }
        let mut sq: i128 = 0;
        for (i, row) in self.pairing.iter().enumerate() {
            if coords[i] == 0 {
                continue;
            }
            let r: i128 = row.iter().zip(coords).map(|(&q, &x)| q as i128 * x as i128).sum();
            sq += r * coords[i] as i128;
        }
        if sq < 0 {
            return;
        }
        let cand = Best { num: om, den: c1 * self.scale, coords: coords.to_vec() };
        if best.as_ref().is_none_or(|b| cand.better_than(b)) {
            *best = Some(cand);
        }
    }

    /// Lexicographic sweep of the box with the given fixed prefix.
    fn sweep(&self, prefix: &[i64]) -> Option<Best> {
        let n = self.pairing.len();
        let k = self.budget.coeff_max;
        let mut coords = prefix.to_vec();
        coords.resize(n, -k);
        let mut best = None;
        loop {
            self.consider(&coords, &mut best);
            let mut i = n;
            loop {
                if i == prefix.len() {
                    return best;
                }
                i -= 1;
                if coords[i] < k {
                    coords[i] += 1;
                    break;
                }
                coords[i] = -k;
            }
        }
    }
}

/// Exhaustive search of `D_Ω` over the coordinate box, ignoring any closed form.
///
/// Returns the minimal ratio found (ties broken by the lexicographically
/// smallest coordinates) with status [`DStatus::SearchUpperBoundOnly`].
pub fn search_d_omega(model: &ManifoldModel, budget: SearchBudget, exec: Exec) -> Result<DOmegaResult> {
    let n = model.rank();
    let c1 = model
        .c1_ints()
        .ok_or_else(|| Error::InvalidModel("c1 must be integral".into()))?;
    let scale = model
        .omega
        .values()
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let too_large = || Error::InvalidArgument("omega coefficients too large for box search".into());
    let omega_int = model
        .omega
        .values()
        .iter()
        .map(|v| (v.numer() * (&scale / v.denom())).to_i128().ok_or_else(too_large))
        .collect::<Result<Vec<_>>>()?;
    let scale = scale.to_i128().ok_or_else(too_large)?;

    let side = 2 * budget.coeff_max + 1;
    if (side as f64).powi(n as i32) > 1e12 {
        return Err(Error::InvalidArgument(format!(
            "search box of side {side} in rank {n} is too large"
        )));
    }
    let data = SearchData { pairing: model.lattice.pairing(), c1, omega_int, scale, budget };

    // Shard on the leading one or two coordinates; each shard is a contiguous
    // lexicographic block, so merging in order keeps the reduction deterministic.
    let k = budget.coeff_max;
    let prefixes: Vec<Vec<i64>> = if n >= 2 {
        (-k..=k).flat_map(|a| (-k..=k).map(move |b| vec![a, b])).collect()
    } else {
        (-k..=k).map(|a| vec![a]).collect()
    };
    let best = exec
        .map(prefixes, |p| data.sweep(&p))
        .into_iter()
        .fold(None, merge);

    Ok(match best {
        Some(b) => {
            let witness = H2Class(b.coords);
            let value = model.omega.evaluate(&witness)? / model.c1.evaluate(&witness)?;
            DOmegaResult {
                value: DValue::Finite(value),
                witness: Some(witness),
                status: DStatus::SearchUpperBoundOnly,
            }
        }
        None => DOmegaResult { value: DValue::Infinite, witness: None, status: DStatus::SearchUpperBoundOnly },
    })
}

/// Numeric checks behind the emptiness criterion for minimal, non-rational,
/// non-ruled manifolds with `b⁺ = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmptinessCertificate {
    pub certified: bool,
    pub b_plus: usize,
    /// `K²` with `K = -c₁`.
    pub k_square: Rational,
    /// `K·[Ω]`.
    pub k_omega: Rational,
}

/// Certifies `D_Ω = ∅` when `b⁺ = 1`, `K² ≥ 0` and `K·[Ω] ≥ 0`.
///
/// Then `K` lies in the closed positive cone together with every member of
/// `D_Ω`, so the light cone lemma would force `K·B ≥ 0`, contradicting
/// `c₁(B) ≥ 2`.
pub fn certify_d_empty(model: &ManifoldModel) -> Result<EmptinessCertificate> {
    let f = &model.flags;
    let mut missing = Vec::new();
    if !f.in_class_c {
        missing.push("in_class_C");
    }
    if !f.minimal {
        missing.push("minimal");
    }
    if f.rational_or_ruled {
        missing.push("not rational_or_ruled");
    }
    if !missing.is_empty() {
        return Err(Error::HypothesesNotAsserted(missing.join(", ")));
    }
    model.ensure_valid()?;
    let k = model.canonical();
    let bp = b_plus(&model.lattice)?;
    let k_square = class_square(model, &k)?;
    let k_omega = cup_product(&model.lattice, &k, &model.omega)?;
    let certified = bp == 1 && !k_square.is_negative() && !k_omega.is_negative();
    Ok(EmptinessCertificate { certified, b_plus: bp, k_square, k_omega })
}
