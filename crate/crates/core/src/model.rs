//! Lattice models of closed symplectic 4-manifolds.
//!
//! A model is the free part of `H₂(M;ℤ)` with its intersection pairing,
//! together with two cohomology classes given by their values on the basis:
//! the first Chern class `c₁` and the symplectic class `[Ω]`. Poincaré
//! duality is multiplication by the pairing matrix, so `Ω(B)` and `c₁(B)` are
//! plain dot products and `[Ω]²` is `ωᵀ Q⁻¹ ω`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::linalg::{self, Inertia};
use crate::rational::Rational;

/// Free abelian group with a symmetric integral pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionLattice {
    pairing: Vec<Vec<i64>>,
    labels: Vec<String>,
}

impl IntersectionLattice {
    /// Checks shape only; symmetry and nondegeneracy are reported by [`validate`].
    pub fn new(pairing: Vec<Vec<i64>>, labels: Vec<String>) -> Result<Self> {
        let n = pairing.len();
        if n == 0 {
            return Err(Error::InvalidModel("pairing: rank must be positive".into()));
        }
        for (i, row) in pairing.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidModel(format!(
                    "pairing[{i}]: row has length {}, expected {n}",
                    row.len()
                )));
            }
        }
        check_len(n, labels.len())?;
        Ok(IntersectionLattice { pairing, labels })
    }

    /// Lattice with labels `e1..en`.
    pub fn unlabeled(pairing: Vec<Vec<i64>>) -> Result<Self> {
        let labels = (1..=pairing.len()).map(|i| format!("e{i}")).collect();
        Self::new(pairing, labels)
    }

    pub fn rank(&self) -> usize {
        self.pairing.len()
    }

    pub fn pairing(&self) -> &[Vec<i64>] {
        &self.pairing
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `aᵀ Q b`.
    pub fn pair(&self, a: &H2Class, b: &H2Class) -> Result<Rational> {
        check_len(self.rank(), a.len())?;
        check_len(self.rank(), b.len())?;
        Ok(Rational::from_bigint(self.pair_int(&a.0, &b.0)))
    }

    pub(crate) fn pair_int(&self, a: &[i64], b: &[i64]) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, row) in self.pairing.iter().enumerate() {
            if a[i] == 0 {
                continue;
            }
            let s: i128 = row.iter().zip(b).map(|(&q, &x)| q as i128 * x as i128).sum();
            acc += BigInt::from(s) * a[i];
        }
        acc
    }

    pub fn is_symmetric(&self) -> bool {
        linalg::is_symmetric(&self.pairing)
    }

    pub fn determinant(&self) -> BigInt {
        linalg::determinant(&self.pairing)
    }

    pub fn inertia(&self) -> Inertia {
        linalg::inertia(&self.pairing)
    }

    /// Number of positive eigenvalues, computed exactly.
    pub fn b_plus(&self) -> Result<usize> {
        let inertia = self.inertia();
        if inertia.zero > 0 {
            return Err(Error::DegeneratePairing);
        }
        Ok(inertia.positive)
    }

    pub fn inverse(&self) -> Result<Vec<Vec<Rational>>> {
        linalg::inverse(&self.pairing)
    }

    /// The functional `Q·B`, i.e. the Poincaré dual of `B` as evaluation values.
    pub fn poincare_dual(&self, b: &H2Class) -> Result<CohomologyFunctional> {
        check_len(self.rank(), b.len())?;
        let values = self
            .pairing
            .iter()
            .map(|row| {
                let s: i128 = row.iter().zip(&b.0).map(|(&q, &x)| q as i128 * x as i128).sum();
                Rational::from_bigint(BigInt::from(s))
            })
            .collect();
        Ok(CohomologyFunctional(values))
    }

    /// Orthogonal sum with `count` copies of `⟨-1⟩`.
    pub(crate) fn with_exceptional(&self, count: usize, first_label: usize) -> Self {
        let n = self.rank();
        let mut pairing: Vec<Vec<i64>> = self
            .pairing
            .iter()
            .map(|row| {
                let mut r = row.clone();
                r.resize(n + count, 0);
                r
            })
            .collect();
        for q in 0..count {
            let mut row = vec![0; n + count];
            row[n + q] = -1;
            pairing.push(row);
        }
        let mut labels = self.labels.clone();
        labels.extend((0..count).map(|q| format!("E{}", first_label + q)));
        IntersectionLattice { pairing, labels }
    }
}

/// An integral homology class, as coordinates in the lattice basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct H2Class(pub Vec<i64>);

impl H2Class {
    pub fn zero(rank: usize) -> Self {
        H2Class(vec![0; rank])
    }

    /// The `i`-th basis vector.
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        H2Class(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for H2Class {
    fn from(v: Vec<i64>) -> Self {
        H2Class(v)
    }
}

impl fmt::Display for H2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A cohomology class, stored as its values on the H₂ basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CohomologyFunctional(pub Vec<Rational>);

impl CohomologyFunctional {
    pub fn from_ints(values: &[i64]) -> Self {
        CohomologyFunctional(values.iter().map(|&v| Rational::from_int(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    /// `f(B)`.
    pub fn evaluate(&self, b: &H2Class) -> Result<Rational> {
        check_len(self.len(), b.len())?;
        Ok(self
            .0
            .iter()
            .zip(&b.0)
            .filter(|(_, &x)| x != 0)
            .map(|(v, &x)| v * Rational::from_int(x))
            .sum())
    }

    pub fn neg(&self) -> Self {
        CohomologyFunctional(self.0.iter().map(|v| -v).collect())
    }
}

/// Geometric hypotheses that cannot be read off the lattice; asserted by the caller.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFlags {
    #[serde(rename = "in_class_C", default)]
    pub in_class_c: bool,
    #[serde(default)]
    pub minimal: bool,
    #[serde(default)]
    pub rational_or_ruled: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_genus: Option<u32>,
}

/// Families whose invariants are known in closed form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Builtin {
    /// `CP²` with `[Ω] = scale · l`.
    Cp2 { scale: Rational },
    /// `S² × S²` with `Ω = α σ ⊕ β σ`.
    S2xs2 { alpha: Rational, beta: Rational },
    /// `Σ_g × S²` with `Ω = β σ_R ⊕ α σ_{S²}`.
    Ruled { g: u32, beta: Rational, alpha: Rational },
    /// Blow-up of a built-in family at `points` points (exceptional weights zero).
    BlowupOf { base: Box<Builtin>, points: usize },
}

impl Builtin {
    /// Rebuilds the model this tag describes.
    pub fn build(&self) -> Result<ManifoldModel> {
        match self {
            Builtin::Cp2 { scale } => make_cp2(scale.clone()),
            Builtin::S2xs2 { alpha, beta } => make_s2xs2(alpha.clone(), beta.clone()),
            Builtin::Ruled { g, beta, alpha } => make_ruled(*g, beta.clone(), alpha.clone()),
            Builtin::BlowupOf { base, points } => {
                Ok(crate::blowup::blow_up(&base.build()?, *points)?.model)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifoldModel {
    pub name: String,
    pub lattice: IntersectionLattice,
    pub c1: CohomologyFunctional,
    pub omega: CohomologyFunctional,
    pub flags: ModelFlags,
    pub builtin: Option<Builtin>,
}

impl ManifoldModel {
    /// Assembles a model and rejects it unless [`validate`] passes.
    pub fn new(
        name: impl Into<String>,
        lattice: IntersectionLattice,
        c1: CohomologyFunctional,
        omega: CohomologyFunctional,
        flags: ModelFlags,
    ) -> Result<Self> {
        let model = Self::new_unchecked(name, lattice, c1, omega, flags)?;
        model.ensure_valid()?;
        Ok(model)
    }

    /// Checks dimensions only.
    pub fn new_unchecked(
        name: impl Into<String>,
        lattice: IntersectionLattice,
        c1: CohomologyFunctional,
        omega: CohomologyFunctional,
        flags: ModelFlags,
    ) -> Result<Self> {
        check_len(lattice.rank(), c1.len())?;
        check_len(lattice.rank(), omega.len())?;
        Ok(ManifoldModel { name: name.into(), lattice, c1, omega, flags, builtin: None })
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = validate(self);
        if report.valid {
            Ok(())
        } else {
            Err(Error::InvalidModel(report.errors.join("; ")))
        }
    }

    /// Canonical class `K = -c₁`.
    pub fn canonical(&self) -> CohomologyFunctional {
        self.c1.neg()
    }

    /// `c₁` as integers; `None` if some basis value is fractional.
    pub(crate) fn c1_ints(&self) -> Option<Vec<i64>> {
        self.c1
            .values()
            .iter()
            .map(|v| if v.is_integer() { i64::try_from(v.numer()).ok() } else { None })
            .collect()
    }
}

/// `aᵀ Q b`.
pub fn pair(lattice: &IntersectionLattice, a: &H2Class, b: &H2Class) -> Result<Rational> {
    lattice.pair(a, b)
}

/// `f(B)`.
pub fn evaluate(f: &CohomologyFunctional, b: &H2Class) -> Result<Rational> {
    f.evaluate(b)
}

/// Cup square `fᵀ Q⁻¹ f`.
pub fn class_square(model: &ManifoldModel, f: &CohomologyFunctional) -> Result<Rational> {
    check_len(model.rank(), f.len())?;
    cup_product(&model.lattice, f, f)
}

/// Cup product `fᵀ Q⁻¹ g`.
pub fn cup_product(
    lattice: &IntersectionLattice,
    f: &CohomologyFunctional,
    g: &CohomologyFunctional,
) -> Result<Rational> {
    check_len(lattice.rank(), f.len())?;
    check_len(lattice.rank(), g.len())?;
    let inv = lattice.inverse()?;
    let mut acc = Rational::zero();
    for (i, row) in inv.iter().enumerate() {
        if f.0[i].is_zero() {
            continue;
        }
        let s: Rational = row.iter().zip(&g.0).map(|(a, b)| a * b).sum();
        acc += &f.0[i] * s;
    }
    Ok(acc)
}

/// `Vol(M, Ω) = ½ [Ω]²`.
pub fn volume(model: &ManifoldModel) -> Result<Rational> {
    let sq = class_square(model, &model.omega)?;
    if !sq.is_positive() {
        return Err(Error::InvalidModel(format!("[omega]^2 = {sq} is not positive")));
    }
    Ok(sq / Rational::from_int(2))
}

pub fn b_plus(lattice: &IntersectionLattice) -> Result<usize> {
    lattice.b_plus()
}

fn in_class_c_flags(rational_or_ruled: bool, base_genus: Option<u32>) -> ModelFlags {
    ModelFlags { in_class_c: true, minimal: true, rational_or_ruled, base_genus }
}

fn require_positive(what: &str, x: &Rational) -> Result<()> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{what} must be positive, got {x}")))
    }
}

/// `CP²` with `[Ω] = scale · l`; basis `L`, `c₁ = 3l`.
pub fn make_cp2(scale: Rational) -> Result<ManifoldModel> {
    require_positive("scale", &scale)?;
    let lattice = IntersectionLattice::new(vec![vec![1]], vec!["L".into()])?;
    let mut m = ManifoldModel::new(
        "CP2",
        lattice,
        CohomologyFunctional::from_ints(&[3]),
        CohomologyFunctional(vec![scale.clone()]),
        in_class_c_flags(true, Some(0)),
    )?;
    m.builtin = Some(Builtin::Cp2 { scale });
    Ok(m)
}

/// `S² × S²` with basis `A1 = [S²×pt]`, `A2 = [pt×S²]`, `Ω(A1) = α`, `Ω(A2) = β`.
pub fn make_s2xs2(alpha: Rational, beta: Rational) -> Result<ManifoldModel> {
    require_positive("alpha", &alpha)?;
    require_positive("beta", &beta)?;
    let lattice =
        IntersectionLattice::new(vec![vec![0, 1], vec![1, 0]], vec!["A1".into(), "A2".into()])?;
    let mut m = ManifoldModel::new(
        "S2xS2",
        lattice,
        CohomologyFunctional::from_ints(&[2, 2]),
        CohomologyFunctional(vec![alpha.clone(), beta.clone()]),
        in_class_c_flags(true, Some(0)),
    )?;
    m.builtin = Some(Builtin::S2xs2 { alpha, beta });
    Ok(m)
}

/// `Σ_g × S²` with basis `R = [Σ_g×pt]`, `S = [pt×S²]`, `Ω(R) = β`, `Ω(S) = α`.
///
/// `c₁(R) = χ(Σ_g) = 2 - 2g` and `c₁(S) = 2`.
pub fn make_ruled(g: u32, beta: Rational, alpha: Rational) -> Result<ManifoldModel> {
    if g == 0 {
        return Err(Error::InvalidArgument("ruled model needs genus g >= 1".into()));
    }
    require_positive("beta", &beta)?;
    require_positive("alpha", &alpha)?;
    let lattice =
        IntersectionLattice::new(vec![vec![0, 1], vec![1, 0]], vec!["R".into(), "S".into()])?;
    let mut m = ManifoldModel::new(
        format!("Sigma{g}xS2"),
        lattice,
        CohomologyFunctional::from_ints(&[2 - 2 * g as i64, 2]),
        CohomologyFunctional(vec![beta.clone(), alpha.clone()]),
        in_class_c_flags(true, Some(g)),
    )?;
    m.builtin = Some(Builtin::Ruled { g, beta, alpha });
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub rank: usize,
    pub b_plus: Option<usize>,
    pub b_minus: Option<usize>,
    pub determinant: String,
    pub omega_square: Option<Rational>,
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

pub fn validate(model: &ManifoldModel) -> ValidationReport {
    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    let lattice = &model.lattice;

    let symmetric = lattice.is_symmetric();
    if !symmetric {
        errors.push("pairing is not symmetric".to_string());
    }
    let det = lattice.determinant();
    let nondegenerate = !det.is_zero();
    if !nondegenerate {
        errors.push("pairing is degenerate (determinant 0)".to_string());
    }

    let (mut b_plus, mut b_minus, mut omega_square) = (None, None, None);
    if symmetric && nondegenerate {
        let inertia = lattice.inertia();
        b_plus = Some(inertia.positive);
        b_minus = Some(inertia.negative);
        if inertia.positive != 1 {
            warnings.push(format!("b+ = {} (results target b+ = 1)", inertia.positive));
        }
        match class_square(model, &model.omega) {
            Ok(sq) => {
                if !sq.is_positive() {
                    errors.push(format!("[omega]^2 = {sq} must be positive"));
                }
                omega_square = Some(sq);
            }
            Err(e) => errors.push(e.to_string()),
        }
    }

    for (i, v) in model.c1.values().iter().enumerate() {
        if !v.is_integer() {
            errors.push(format!("c1[{i}] = {v} is not an integer"));
        }
    }
    if !model.flags.in_class_c {
        warnings.push("in_class_C not asserted; packing bounds require it".to_string());
    }

    ValidationReport {
        valid: errors.is_empty(),
        rank: lattice.rank(),
        b_plus,
        b_minus,
        determinant: det.to_string(),
        omega_square,
        errors,
        warnings,
    }
}
