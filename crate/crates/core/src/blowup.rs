//! Blow-ups at the lattice level and the packing correspondence between
//! `S² × S²` and `CP²`.
//!
//! Blowing up `N` points adds `N` orthogonal classes `E_q` with `E_q² = -1`.
//! Since `c̄₁ = c₁ - Σ e_q` and `e_q(E_q) = -1`, the new `c₁` takes the value
//! `+1` on each `E_q`. A packing by balls of squared radii `λ_q²` corresponds
//! to the class `[Θ*Ω] - Σ λ_q² e_q`, whose value on `E_q` is `+λ_q²`.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::model::{Builtin, CohomologyFunctional, ManifoldModel, ModelFlags};
use crate::rational::Rational;

/// Squared radii `λ_q²` of a ball configuration; all strictly positive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct RadiiList(Vec<Rational>);

impl RadiiList {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::InvalidArgument(format!("squared radius {w} is not positive")));
        }
        Ok(RadiiList(weights))
    }

    /// `n` equal balls of squared radius `weight`.
    pub fn equal(n: usize, weight: Rational) -> Result<Self> {
        Self::new(vec![weight; n])
    }

    pub fn weights(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Σ λ_q⁴`.
    pub fn sum_fourth_powers(&self) -> Rational {
        self.0.iter().map(Rational::square).sum()
    }

    pub fn max_weight(&self) -> Option<&Rational> {
        self.0.iter().max()
    }
}

impl TryFrom<Vec<Rational>> for RadiiList {
    type Error = Error;
    fn try_from(v: Vec<Rational>) -> Result<Self> {
        RadiiList::new(v)
    }
}

impl From<RadiiList> for Vec<Rational> {
    fn from(r: RadiiList) -> Self {
        r.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupModel {
    pub base: ManifoldModel,
    pub n_points: usize,
    pub model: ManifoldModel,
}

/// Number of exceptional classes already present in a model built by [`blow_up`].
fn existing_points(model: &ManifoldModel) -> usize {
    match &model.builtin {
        Some(Builtin::BlowupOf { points, .. }) => *points,
        _ => model.lattice.labels().iter().filter(|l| l.starts_with('E')).count(),
    }
}

pub fn blow_up(base: &ManifoldModel, n_points: usize) -> Result<BlowupModel> {
    if n_points == 0 {
        return Err(Error::InvalidArgument("number of blow-up points must be positive".into()));
    }
    base.ensure_valid()?;
    let already = existing_points(base);
    let lattice = base.lattice.with_exceptional(n_points, already + 1);

    let mut c1 = base.c1.values().to_vec();
    c1.extend(std::iter::repeat_n(Rational::one(), n_points));
    let mut omega = base.omega.values().to_vec();
    omega.extend(std::iter::repeat_n(Rational::zero(), n_points));

    let flags = ModelFlags { minimal: false, ..base.flags.clone() };
    let mut model = ManifoldModel::new_unchecked(
        format!("{}#{}", base_name(base), already + n_points),
        lattice,
        CohomologyFunctional(c1),
        CohomologyFunctional(omega),
        flags,
    )?;
    model.builtin = match &base.builtin {
        Some(Builtin::BlowupOf { base, points }) => {
            Some(Builtin::BlowupOf { base: base.clone(), points: points + n_points })
        }
        Some(tag) => Some(Builtin::BlowupOf { base: Box::new(tag.clone()), points: n_points }),
        None => None,
    };
    Ok(BlowupModel { base: base.clone(), n_points, model })
}

fn base_name(model: &ManifoldModel) -> &str {
    model.name.split('#').next().unwrap_or(&model.name)
}

/// `[Θ*Ω] - Σ λ_q² e_q` on a blow-up: base values, then `λ_q²` on each `E_q`.
pub fn blowup_form_class(bm: &BlowupModel, radii: &RadiiList) -> Result<CohomologyFunctional> {
    check_len(bm.n_points, radii.len())?;
    Ok(extend_form(&bm.base.omega, radii))
}

/// The same construction from a bare base class; empty `radii` returns `omega`.
pub fn extend_form(omega: &CohomologyFunctional, radii: &RadiiList) -> CohomologyFunctional {
    let mut values = omega.values().to_vec();
    values.extend(radii.weights().iter().cloned());
    CohomologyFunctional(values)
}

/// CP² data corresponding to a ball configuration in `S² × S²`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Correspondence {
    pub cp2_scale: Rational,
    pub radii: RadiiList,
}

/// Packing `(S²×S², πΩ)` by `N` balls ↔ packing `(CP², π(α+β-λ₁²)σ)` by `N+1`
/// balls with squared radii `α-λ₁², β-λ₁², λ₂², …, λ_N²`.
pub fn correspond_s2xs2_to_cp2(
    alpha: &Rational,
    beta: &Rational,
    radii: &RadiiList,
) -> Result<Correspondence> {
    let (first, rest) = radii
        .weights()
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("correspondence needs at least one ball".into()))?;
    let smaller = alpha.clone().min(beta.clone());
    if first >= &smaller {
        return Err(Error::InvalidArgument(format!(
            "first squared radius {first} must be below min(alpha, beta) = {smaller}"
        )));
    }
    let mut out = vec![alpha - first, beta - first];
    out.extend(rest.iter().cloned());
    Ok(Correspondence { cp2_scale: alpha + beta - first, radii: RadiiList::new(out)? })
}

/// Inverse of [`correspond_s2xs2_to_cp2`]: returns `(α, β, radii)`.
pub fn correspond_cp2_to_s2xs2(
    scale: &Rational,
    radii: &RadiiList,
) -> Result<(Rational, Rational, RadiiList)> {
    let w = radii.weights();
    if w.len() < 2 {
        return Err(Error::InvalidArgument("inverse correspondence needs at least two balls".into()));
    }
    let first = scale - &w[0] - &w[1];
    if !first.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "incompatible first two radii: scale - w1 - w2 = {first} is not positive"
        )));
    }
    let alpha = scale - &w[1];
    let beta = scale - &w[0];
    let mut out = vec![first];
    out.extend(w[2..].iter().cloned());
    Ok((alpha, beta, RadiiList::new(out)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{class_square, make_cp2, make_s2xs2, volume, H2Class};

    fn r(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    fn radii(ws: &[(i64, i64)]) -> RadiiList {
        RadiiList::new(ws.iter().map(|&(n, d)| r(n, d)).collect()).unwrap()
    }

    #[test]
    fn blow_up_cp2_once() {
        let bm = blow_up(&make_cp2(1.into()).unwrap(), 1).unwrap();
        assert_eq!(bm.model.lattice.pairing(), &[vec![1, 0], vec![0, -1]]);
        assert_eq!(bm.model.c1, CohomologyFunctional::from_ints(&[3, 1]));
        assert_eq!(bm.model.omega, CohomologyFunctional::from_ints(&[1, 0]));
        assert_eq!(bm.model.lattice.labels(), &["L", "E1"]);
    }

    #[test]
    fn blow_up_cp2_twice_has_b_plus_one() {
        let bm = blow_up(&make_cp2(1.into()).unwrap(), 2).unwrap();
        assert_eq!(bm.model.lattice.b_plus().unwrap(), 1);
    }

    #[test]
    fn blow_up_s2xs2() {
        let bm = blow_up(&make_s2xs2(1.into(), 1.into()).unwrap(), 1).unwrap();
        assert_eq!(bm.model.c1, CohomologyFunctional::from_ints(&[2, 2, 1]));
    }

    #[test]
    fn blow_up_rejects_zero_points() {
        assert!(blow_up(&make_cp2(1.into()).unwrap(), 0).is_err());
    }

    #[test]
    fn exceptional_divisors_have_expected_numbers() {
        let bm = blow_up(&make_s2xs2(1.into(), 3.into()).unwrap(), 4).unwrap();
        let n = bm.model.rank();
        for q in 2..n {
            let e = H2Class::basis(n, q);
            assert_eq!(bm.model.lattice.pair(&e, &e).unwrap(), (-1).into());
            assert_eq!(bm.model.c1.evaluate(&e).unwrap(), 1.into());
        }
    }

    #[test]
    fn blow_up_composes() {
        let base = make_cp2(r(3, 2)).unwrap();
        let twice = blow_up(&blow_up(&base, 2).unwrap().model, 3).unwrap().model;
        let once = blow_up(&base, 5).unwrap().model;
        assert_eq!(twice, once);
        assert_eq!(once.builtin.as_ref().unwrap().build().unwrap(), once);
    }

    #[test]
    fn form_class_examples() {
        let bm = blow_up(&make_cp2(1.into()).unwrap(), 1).unwrap();
        let f = blowup_form_class(&bm, &radii(&[(1, 3)])).unwrap();
        assert_eq!(f, CohomologyFunctional(vec![1.into(), r(1, 3)]));
        assert!(blowup_form_class(&bm, &radii(&[(1, 3), (1, 4)])).is_err());

        let base = make_cp2(1.into()).unwrap();
        let empty = RadiiList::new(vec![]).unwrap();
        assert_eq!(extend_form(&base.omega, &empty), base.omega);
    }

    #[test]
    fn form_class_square_subtracts_fourth_powers() {
        let base = make_s2xs2(r(3, 2), 2.into()).unwrap();
        let rl = radii(&[(1, 2), (1, 3), (2, 7)]);
        let bm = blow_up(&base, 3).unwrap();
        let f = blowup_form_class(&bm, &rl).unwrap();
        let expected = volume(&base).unwrap() * Rational::from_int(2) - rl.sum_fourth_powers();
        assert_eq!(class_square(&bm.model, &f).unwrap(), expected);
    }

    #[test]
    fn radii_must_be_positive() {
        assert!(RadiiList::new(vec![r(1, 2), 0.into()]).is_err());
        assert!(serde_json::from_str::<RadiiList>(r#"["1/2","-1"]"#).is_err());
    }

    #[test]
    fn correspondence_examples() {
        let c = correspond_s2xs2_to_cp2(&1.into(), &1.into(), &radii(&[(1, 2)])).unwrap();
        assert_eq!(c.cp2_scale, r(3, 2));
        assert_eq!(c.radii, radii(&[(1, 2), (1, 2)]));

        let c = correspond_s2xs2_to_cp2(&1.into(), &2.into(), &radii(&[(1, 2), (1, 4)])).unwrap();
        assert_eq!(c.cp2_scale, r(5, 2));
        assert_eq!(c.radii, radii(&[(1, 2), (3, 2), (1, 4)]));

        assert!(correspond_s2xs2_to_cp2(&1.into(), &2.into(), &radii(&[(1, 1)])).is_err());
        assert!(correspond_s2xs2_to_cp2(&1.into(), &2.into(), &radii(&[])).is_err());
    }

    #[test]
    fn inverse_correspondence_round_trips() {
        let (a, b) = (r(2, 3), r(7, 5));
        let rl = radii(&[(1, 3), (1, 5), (1, 7)]);
        let c = correspond_s2xs2_to_cp2(&a, &b, &rl).unwrap();
        let (a2, b2, rl2) = correspond_cp2_to_s2xs2(&c.cp2_scale, &c.radii).unwrap();
        assert_eq!((a2, b2, rl2), (a, b, rl));
        assert!(correspond_cp2_to_s2xs2(&1.into(), &radii(&[(1, 2), (1, 2)])).is_err());
    }
}
