//! Packing fractions, full-packing thresholds and packing numbers.
//!
//! Lower bounds come from `d_Ω`: balls with `λ_q² < d_Ω` and
//! `Σ λ_q⁴ < 2 Vol` always embed, which gives
//! `v_N ≥ min{1, N d_Ω² / 2Vol}`. Exact values are available where the
//! exceptional classes are known: blow-ups of `CP²` at `N ≤ 8` points (and
//! through the correspondence, `S²×S²` with `N ≤ 7` balls), and blown-up
//! irrational ruled surfaces.
//!
//! Squared radii are used throughout, so a volume constraint `N λ⁴ < 2 Vol`
//! stays rational. Concrete feasibility tests are strict; packing fractions
//! are suprema, so `v_N = 1` at the boundary.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::blowup::{correspond_s2xs2_to_cp2, RadiiList};
use crate::error::{Error, Result};
use crate::exceptional::{cp2_exceptional_classes, CP2BlowupClass, MAX_FINITE_POINTS};
use crate::invariants::{d_omega, DOmegaResult, DValue, SearchBudget};
use crate::model::{make_cp2, volume, Builtin, ManifoldModel};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PackingReport {
    #[serde(rename = "N")]
    pub n: u64,
    /// `min{1, N d² / 2Vol}`.
    pub v_lower: Rational,
    /// Whether `v_lower` rests on a certified value of `d_Ω`.
    pub v_lower_certified: bool,
    pub v_exact: Option<Rational>,
    /// Exceptional class giving the binding constraint when `v_exact < 1`.
    pub obstructor: Option<String>,
    pub full: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PackingNumberBracket {
    pub lower: u64,
    pub upper: u64,
    pub exact: Option<u64>,
}

impl PackingNumberBracket {
    fn exact(p: u64) -> Self {
        PackingNumberBracket { lower: p, upper: p, exact: Some(p) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub value: Rational,
    pub certified: bool,
}

fn two() -> Rational {
    Rational::from_int(2)
}

fn to_u64(x: BigInt) -> Result<u64> {
    x.to_u64()
        .ok_or_else(|| Error::InvalidArgument(format!("{x} does not fit a packing count")))
}

fn require_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("number of balls must be positive".into()))
    } else {
        Ok(())
    }
}

/// `min{1, N d² / 2Vol}` for a known `d`.
fn lower_from_d(d: &DValue, n: u64, vol: &Rational) -> Rational {
    match d {
        DValue::Infinite => Rational::one(),
        DValue::Finite(d) => {
            let v = Rational::from_int(n as i64) * d.square() / (two() * vol);
            v.min(Rational::one())
        }
    }
}

/// `d_Ω` with a usable certificate, or an error explaining why not.
fn certified_d(model: &ManifoldModel, budget: SearchBudget) -> Result<DOmegaResult> {
    let d = d_omega(model, budget)?;
    if !d.status.is_certified() {
        return Err(Error::Uncertified(format!(
            "only a search upper bound {} is available",
            d.value
        )));
    }
    if d.value == DValue::Finite(Rational::zero()) {
        return Err(Error::Uncertified("d_omega = 0".into()));
    }
    Ok(d)
}

/// Packing-fraction lower bound `min{1, N d_Ω² / 2Vol}`.
///
/// When `d_Ω` is only a search upper bound the value is reported with
/// `certified = false`.
pub fn vn_lower_bound(model: &ManifoldModel, n: u64, budget: SearchBudget) -> Result<LowerBound> {
    require_n(n)?;
    let d = d_omega(model, budget)?;
    if d.value == DValue::Finite(Rational::zero()) {
        return Err(Error::Uncertified("d_omega = 0; the bound needs d_omega > 0".into()));
    }
    let vol = volume(model)?;
    Ok(LowerBound { value: lower_from_d(&d.value, n, &vol), certified: d.status.is_certified() })
}

/// Smallest `N` with `N ≥ 2Vol / d_Ω²`; every `N` from there on packs fully.
///
/// With `D_Ω` certified empty this is `1`.
pub fn n_threshold(model: &ManifoldModel, budget: SearchBudget) -> Result<u64> {
    let d = certified_d(model, budget)?;
    match d.value {
        DValue::Infinite => Ok(1),
        DValue::Finite(d) => {
            let bound = two() * volume(model)? / d.square();
            to_u64(bound.ceil().max(BigInt::from(1)))
        }
    }
}

/// Sufficient embedding criterion: all `λ_q² < d_Ω` and `Σ λ_q⁴ < 2Vol`.
pub fn thm_radii_feasible(model: &ManifoldModel, radii: &RadiiList, budget: SearchBudget) -> Result<bool> {
    if !model.flags.in_class_c {
        return Err(Error::HypothesesNotAsserted("in_class_C".into()));
    }
    let d = certified_d(model, budget)?;
    let below_d = match &d.value {
        DValue::Infinite => true,
        DValue::Finite(d) => radii.weights().iter().all(|w| w < d),
    };
    Ok(below_d && radii.sum_fourth_powers() < two() * volume(model)?)
}

/// Largest equal-ball weight allowed by the exceptional classes of `CP² # N`
/// at unit scale: `min d / Σ m_q` over classes with `Σ m_q ≥ 1`.
fn cp2_obstruction(n: usize) -> Result<Option<(Rational, &'static CP2BlowupClass)>> {
    let mut best: Option<(Rational, &CP2BlowupClass)> = None;
    for e in cp2_exceptional_classes(n)? {
        let s: i64 = e.m.iter().sum();
        if s < 1 {
            continue;
        }
        let ratio = Rational::frac(e.d, s);
        if best.as_ref().is_none_or(|(b, _)| &ratio < b) {
            best = Some((ratio, e));
        }
    }
    Ok(best)
}

/// Exact `v_N` of `(CP², scale·σ)`.
pub fn vn_exact_cp2(scale: &Rational, n: u64) -> Result<PackingReport> {
    require_n(n)?;
    let model = make_cp2(scale.clone())?;
    let v_lower = lower_from_d(&DValue::Finite(scale / Rational::from_int(3)), n, &volume(&model)?);
    let full = |v_lower| PackingReport {
        n,
        v_lower,
        v_lower_certified: true,
        v_exact: Some(Rational::one()),
        obstructor: None,
        full: Some(true),
    };
    if n as usize > MAX_FINITE_POINTS {
        return Ok(full(v_lower));
    }
    // At unit scale: weight w allowed iff w < ratio (every obstruction) and N w² < 1.
    let Some((ratio, class)) = cp2_obstruction(n as usize)? else {
        return Ok(full(v_lower));
    };
    let nn = Rational::from_int(n as i64);
    let v = &nn * ratio.square();
    if v >= Rational::one() {
        return Ok(full(v_lower));
    }
    Ok(PackingReport {
        n,
        v_lower,
        v_lower_certified: true,
        v_exact: Some(v),
        obstructor: Some(class.sorted_desc().to_string()),
        full: Some(false),
    })
}

/// Exact criterion for `(CP², scale·σ)` with `N ≤ 8` balls of arbitrary
/// squared radii: positivity on every exceptional class and `Σ λ⁴ < scale²`.
pub fn cp2_radii_feasible(scale: &Rational, radii: &RadiiList) -> Result<bool> {
    let w = radii.weights();
    if w.len() > MAX_FINITE_POINTS {
        return Err(Error::InfiniteExceptionalSet);
    }
    if radii.sum_fourth_powers() >= scale.square() {
        return Ok(false);
    }
    for e in cp2_exceptional_classes(w.len())? {
        let mut value = scale * Rational::from_int(e.d);
        for (m, wq) in e.m.iter().zip(w) {
            value -= &(Rational::from_int(*m) * wq);
        }
        if !value.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Supremal equal-ball weight for `S²×S²` with `N ≤ 7` balls, via the
/// correspondence to `CP²` with `N + 1` balls.
fn s2xs2_sup_weight(alpha: &Rational, beta: &Rational, n: usize) -> Result<Rational> {
    // Weight w on every ball maps to CP² scale α+β-w and weights
    // (α-w, β-w, w, …, w). Positivity on E = (d; m) reads A - w·B > 0 with
    // A = (α+β)d - m₁α - m₂β and B = d - m₁ - m₂ + Σ_{q≥3} m_q.
    let mut sup: Option<Rational> = None;
    let mut inf = Rational::zero();
    for e in cp2_exceptional_classes(n + 1)? {
        let d = Rational::from_int(e.d);
        let (m1, m2) = (Rational::from_int(e.m[0]), Rational::from_int(e.m[1]));
        let rest: i64 = e.m[2..].iter().sum();
        let a = (alpha + beta) * &d - &m1 * alpha - &m2 * beta;
        let b = e.d - e.m[0] - e.m[1] + rest;
        match b.cmp(&0) {
            std::cmp::Ordering::Greater => {
                let bound = a / Rational::from_int(b);
                sup = Some(match sup {
                    Some(s) => s.min(bound),
                    None => bound,
                });
            }
            std::cmp::Ordering::Less => inf = inf.max(a / Rational::from_int(b)),
            std::cmp::Ordering::Equal if !a.is_positive() => return Ok(Rational::zero()),
            std::cmp::Ordering::Equal => {}
        }
    }
    // E_1 always contributes w < α, so an upper bound exists.
    let sup = sup.expect("E_1 bounds the weight");
    Ok(if inf < sup { sup } else { Rational::zero() })
}

/// Exact `v_N` of `S²×S²` for `N ≤ 7`, and `1` once `N ≥ 8β/α`.
pub fn vn_exact_s2xs2(alpha: &Rational, beta: &Rational, n: u64) -> Result<Option<Rational>> {
    require_n(n)?;
    let two_vol = two() * alpha * beta;
    let (small, large) = if alpha <= beta { (alpha, beta) } else { (beta, alpha) };
    if Rational::from_int(n as i64) >= Rational::from_int(8) * large / small {
        return Ok(Some(Rational::one()));
    }
    if n as usize + 1 > MAX_FINITE_POINTS {
        return Ok(None);
    }
    let w = s2xs2_sup_weight(alpha, beta, n as usize)?;
    let v = Rational::from_int(n as i64) * w.square() / two_vol;
    Ok(Some(v.min(Rational::one())))
}

/// Exact criterion for `S²×S²` balls through the correspondence (`N ≤ 7`).
pub fn s2xs2_radii_feasible(alpha: &Rational, beta: &Rational, radii: &RadiiList) -> Result<bool> {
    if radii.is_empty() {
        return Ok(true);
    }
    if radii.len() + 1 > MAX_FINITE_POINTS {
        return Err(Error::InfiniteExceptionalSet);
    }
    // any ball can be split off; use the largest
    let mut w = radii.weights().to_vec();
    w.sort_by(|a, b| b.cmp(a));
    let sorted = RadiiList::new(w)?;
    match correspond_s2xs2_to_cp2(alpha, beta, &sorted) {
        Ok(c) => cp2_radii_feasible(&c.cp2_scale, &c.radii),
        Err(_) => Ok(false),
    }
}

/// `λ_q² < α` for all `q` and `Σ λ_q⁴ < 2αβ`: exact for `Σ_g × S²`, `g ≥ 1`.
pub fn ruled_packing_feasible(g: u32, alpha: &Rational, beta: &Rational, radii: &RadiiList) -> Result<bool> {
    check_ruled(g, alpha, beta)?;
    Ok(radii.weights().iter().all(|w| w < alpha)
        && radii.sum_fourth_powers() < two() * alpha * beta)
}

fn check_ruled(g: u32, alpha: &Rational, beta: &Rational) -> Result<()> {
    if g == 0 {
        return Err(Error::InvalidArgument("ruled criterion needs g >= 1".into()));
    }
    if !alpha.is_positive() || !beta.is_positive() {
        return Err(Error::InvalidArgument("areas must be positive".into()));
    }
    Ok(())
}

/// `v_N = min{1, Nα / 2β}` for `Σ_g × S²`.
pub fn vn_exact_ruled(g: u32, alpha: &Rational, beta: &Rational, n: u64) -> Result<PackingReport> {
    check_ruled(g, alpha, beta)?;
    require_n(n)?;
    let nn = Rational::from_int(n as i64);
    let ratio = &nn * alpha / (two() * beta);
    let full = ratio >= Rational::one();
    // d = α/2 and 2Vol = 2αβ
    let v_lower = (&nn * alpha / (Rational::from_int(8) * beta)).min(Rational::one());
    Ok(PackingReport {
        n,
        v_lower,
        v_lower_certified: true,
        v_exact: Some(ratio.min(Rational::one())),
        obstructor: None,
        full: Some(full),
    })
}

fn ceil_u64(x: &Rational) -> Result<u64> {
    to_u64(x.ceil())
}

/// Packing number `P = 1 + max{N : no full packing by N equal balls}`.
pub fn packing_number(model: &ManifoldModel) -> Result<PackingNumberBracket> {
    packing_number_with(model, SearchBudget::default())
}

pub fn packing_number_with(model: &ManifoldModel, budget: SearchBudget) -> Result<PackingNumberBracket> {
    model.ensure_valid()?;
    match &model.builtin {
        Some(Builtin::Cp2 { scale }) => {
            let mut last_obstructed = 0;
            for n in 1..=MAX_FINITE_POINTS as u64 {
                if vn_exact_cp2(scale, n)?.full == Some(false) {
                    last_obstructed = n;
                }
            }
            Ok(PackingNumberBracket::exact(last_obstructed + 1))
        }
        Some(Builtin::S2xs2 { alpha, beta }) => {
            let (small, large) = if alpha <= beta { (alpha, beta) } else { (beta, alpha) };
            let lower = ceil_u64(&(two() * large / small))?;
            let upper = ceil_u64(&(Rational::from_int(8) * large / small))?;
            let exact = if alpha == beta {
                let mut last_obstructed = 0;
                for n in 1..=(MAX_FINITE_POINTS as u64 - 1) {
                    if vn_exact_s2xs2(alpha, beta, n)? != Some(Rational::one()) {
                        last_obstructed = n;
                    }
                }
                // n ≥ 8 = upper packs fully
                Some(last_obstructed + 1)
            } else {
                None
            };
            Ok(PackingNumberBracket { lower, upper, exact })
        }
        Some(Builtin::Ruled { beta, alpha, .. }) => {
            Ok(PackingNumberBracket::exact(ceil_u64(&(two() * beta / alpha))?))
        }
        _ => {
            let d = d_omega(model, budget)?;
            if d.value == DValue::Infinite && d.status.is_certified() {
                Ok(PackingNumberBracket::exact(1))
            } else {
                Err(Error::Unsupported(
                    "only the full-packing threshold upper bound is available; use n_threshold".into(),
                ))
            }
        }
    }
}

/// `v_N` report for any model: the lower bound always, the exact value where known.
pub fn vn_report(model: &ManifoldModel, n: u64, budget: SearchBudget, exact: bool) -> Result<PackingReport> {
    require_n(n)?;
    model.ensure_valid()?;
    if exact {
        match &model.builtin {
            Some(Builtin::Cp2 { scale }) => return vn_exact_cp2(scale, n),
            Some(Builtin::Ruled { g, beta, alpha }) => return vn_exact_ruled(*g, alpha, beta, n),
            _ => {}
        }
    }
    let lower = vn_lower_bound(model, n, budget)?;
    let v_exact = match (&model.builtin, exact) {
        (Some(Builtin::S2xs2 { alpha, beta }), true) => vn_exact_s2xs2(alpha, beta, n)?,
        _ => None,
    };
    let full = v_exact.as_ref().map(|v| v == &Rational::one());
    Ok(PackingReport {
        n,
        v_lower: lower.value,
        v_lower_certified: lower.certified,
        v_exact,
        obstructor: None,
        full,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    /// `true` when the criterion is an equivalence, `false` when only sufficient.
    pub exact: bool,
    pub method: String,
    pub reason: String,
}

/// Decides (or bounds) whether balls of the given squared radii embed.
pub fn feasibility(model: &ManifoldModel, radii: &RadiiList, budget: SearchBudget) -> Result<FeasibilityReport> {
    model.ensure_valid()?;
    let report = |feasible: bool, exact: bool, method: &str, yes: &str, no: &str| FeasibilityReport {
        feasible,
        exact,
        method: method.to_string(),
        reason: if feasible { yes.to_string() } else { no.to_string() },
    };
    match &model.builtin {
        Some(Builtin::Ruled { g, beta, alpha }) => {
            let ok = ruled_packing_feasible(*g, alpha, beta, radii)?;
            return Ok(report(
                ok,
                true,
                "ruled_exceptional_set",
                "every squared radius is below alpha and the volume fits",
                "a squared radius reaches alpha or sum of fourth powers reaches 2*alpha*beta",
            ));
        }
        Some(Builtin::Cp2 { scale }) if radii.len() <= MAX_FINITE_POINTS => {
            let ok = cp2_radii_feasible(scale, radii)?;
            return Ok(report(
                ok,
                true,
                "cp2_exceptional_classes",
                "positive on every exceptional class and the volume fits",
                "some exceptional class or the volume constraint obstructs",
            ));
        }
        Some(Builtin::S2xs2 { alpha, beta }) if radii.len() < MAX_FINITE_POINTS => {
            let ok = s2xs2_radii_feasible(alpha, beta, radii)?;
            return Ok(report(
                ok,
                true,
                "s2xs2_to_cp2_correspondence",
                "the corresponding CP2 configuration is unobstructed",
                "the corresponding CP2 configuration is obstructed",
            ));
        }
        _ => {}
    }
    let ok = thm_radii_feasible(model, radii, budget)?;
    Ok(report(
        ok,
        false,
        "d_omega_criterion",
        "every squared radius is below d_omega and the volume fits",
        "sufficient criterion not met; embedding undecided",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_ruled, make_s2xs2};

    fn r(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    fn budget() -> SearchBudget {
        SearchBudget::default()
    }

    #[test]
    fn lower_bound_examples() {
        let cp2 = make_cp2(1.into()).unwrap();
        assert_eq!(vn_lower_bound(&cp2, 5, budget()).unwrap().value, r(5, 9));
        assert_eq!(vn_lower_bound(&cp2, 9, budget()).unwrap().value, 1.into());
        let s = make_s2xs2(1.into(), 1.into()).unwrap();
        assert_eq!(vn_lower_bound(&s, 4, budget()).unwrap().value, r(1, 2));
        assert!(vn_lower_bound(&s, 0, budget()).is_err());
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(n_threshold(&make_cp2(1.into()).unwrap(), budget()).unwrap(), 9);
        assert_eq!(n_threshold(&make_s2xs2(1.into(), 1.into()).unwrap(), budget()).unwrap(), 8);
        assert_eq!(n_threshold(&make_ruled(1, 3.into(), 2.into()).unwrap(), budget()).unwrap(), 12);
    }

    #[test]
    fn thm_feasibility_examples() {
        let cp2 = make_cp2(1.into()).unwrap();
        let nine = RadiiList::equal(9, r(33, 100)).unwrap();
        assert!(thm_radii_feasible(&cp2, &nine, budget()).unwrap());
        let edge = RadiiList::equal(1, r(1, 3)).unwrap();
        assert!(!thm_radii_feasible(&cp2, &edge, budget()).unwrap());
        assert!(thm_radii_feasible(&cp2, &RadiiList::new(vec![]).unwrap(), budget()).unwrap());
    }

    #[test]
    fn cp2_exact_examples() {
        let rep = vn_exact_cp2(&1.into(), 2).unwrap();
        assert_eq!(rep.v_exact, Some(r(1, 2)));
        assert_eq!(rep.obstructor.as_deref(), Some("1;1,1"));

        let rep = vn_exact_cp2(&1.into(), 8).unwrap();
        assert_eq!(rep.v_exact, Some(r(288, 289)));
        assert_eq!(rep.obstructor.as_deref(), Some("6;3,2,2,2,2,2,2,2"));
        assert_eq!(rep.full, Some(false));

        let rep = vn_exact_cp2(&1.into(), 4).unwrap();
        assert_eq!(rep.v_exact, Some(1.into()));
        assert_eq!(rep.full, Some(true));
        assert_eq!(rep.obstructor, None);

        let rep = vn_exact_cp2(&r(7, 3), 8).unwrap();
        assert_eq!(rep.v_exact, Some(r(288, 289)));
    }

    #[test]
    fn packing_numbers() {
        assert_eq!(packing_number(&make_cp2(r(5, 2)).unwrap()).unwrap().exact, Some(9));
        let p = packing_number(&make_s2xs2(1.into(), 1.into()).unwrap()).unwrap();
        assert_eq!(p, PackingNumberBracket { lower: 2, upper: 8, exact: Some(8) });
        let p = packing_number(&make_s2xs2(1.into(), 3.into()).unwrap()).unwrap();
        assert_eq!(p, PackingNumberBracket { lower: 6, upper: 24, exact: None });
        assert_eq!(packing_number(&make_ruled(1, 3.into(), 2.into()).unwrap()).unwrap().exact, Some(3));
    }

    #[test]
    fn ruled_examples() {
        let three = RadiiList::equal(3, r(4, 5)).unwrap();
        assert!(ruled_packing_feasible(1, &1.into(), &1.into(), &three).unwrap());
        let one = RadiiList::equal(1, 1.into()).unwrap();
        assert!(!ruled_packing_feasible(1, &1.into(), &5.into(), &one).unwrap());
        let one = RadiiList::equal(1, r(3, 5)).unwrap();
        assert!(!ruled_packing_feasible(2, &1.into(), &r(1, 10), &one).unwrap());

        let rep = vn_exact_ruled(1, &2.into(), &3.into(), 3).unwrap();
        assert_eq!(rep.v_exact, Some(1.into()));
        assert_eq!(rep.full, Some(true));
        let rep = vn_exact_ruled(1, &2.into(), &3.into(), 2).unwrap();
        assert_eq!(rep.v_exact, Some(r(2, 3)));
        assert_eq!(rep.full, Some(false));
    }

    #[test]
    fn s2xs2_single_ball_is_half() {
        assert_eq!(vn_exact_s2xs2(&1.into(), &1.into(), 1).unwrap(), Some(r(1, 2)));
        assert_eq!(vn_exact_s2xs2(&1.into(), &1.into(), 2).unwrap(), Some(1.into()));
    }

    #[test]
    fn feasibility_dispatch() {
        let cp2 = make_cp2(1.into()).unwrap();
        let two_big = RadiiList::equal(2, r(1, 2)).unwrap();
        let rep = feasibility(&cp2, &two_big, budget()).unwrap();
        assert!(!rep.feasible && rep.exact);
        let two_ok = RadiiList::equal(2, r(49, 100)).unwrap();
        assert!(feasibility(&cp2, &two_ok, budget()).unwrap().feasible);
    }
}
