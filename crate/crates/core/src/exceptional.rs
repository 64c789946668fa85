//! Exceptional classes: numeric tests, Cremona reduction on blow-ups of `CP²`,
//! and the exceptional sets of blown-up irrational ruled surfaces.
//!
//! A class on `CP² # N` is written `dL - Σ m_q E_q` and encoded as `d;m1,...,mN`,
//! so the exceptional divisor `E_q` itself has `m_q = -1`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{check_len, Error, Result};
use crate::exec::Exec;
use crate::model::{CohomologyFunctional, H2Class, ManifoldModel};

/// `dL - Σ m_q E_q` on the `N`-point blow-up of `CP²`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CP2BlowupClass {
    pub d: i64,
    pub m: Vec<i64>,
}

impl CP2BlowupClass {
    pub fn new(d: i64, m: Vec<i64>) -> Self {
        CP2BlowupClass { d, m }
    }

    /// The exceptional divisor `E_q` (0-based `q`) among `n` points.
    pub fn exceptional_divisor(n: usize, q: usize) -> Self {
        let mut m = vec![0; n];
        m[q] = -1;
        CP2BlowupClass { d: 0, m }
    }

    pub fn points(&self) -> usize {
        self.m.len()
    }

    /// `d² - Σ m_q²`.
    pub fn square(&self) -> i64 {
        self.d * self.d - self.m.iter().map(|x| x * x).sum::<i64>()
    }

    /// `c₁ = 3d - Σ m_q`.
    pub fn c1(&self) -> i64 {
        3 * self.d - self.m.iter().sum::<i64>()
    }

    /// Intersection with another class on the same blow-up.
    pub fn dot(&self, other: &Self) -> i64 {
        self.d * other.d - self.m.iter().zip(&other.m).map(|(a, b)| a * b).sum::<i64>()
    }

    pub fn is_numerically_exceptional(&self) -> bool {
        self.square() == -1 && self.c1() == 1
    }

    /// Coordinates in the basis `(L, E_1, …, E_N)`.
    pub fn to_h2(&self) -> H2Class {
        let mut v = Vec::with_capacity(self.m.len() + 1);
        v.push(self.d);
        v.extend(self.m.iter().map(|x| -x));
        H2Class(v)
    }

    pub fn from_h2(class: &H2Class) -> Result<Self> {
        let (d, rest) = class
            .coords()
            .split_first()
            .ok_or_else(|| Error::ParseClass(class.to_string()))?;
        Ok(CP2BlowupClass { d: *d, m: rest.iter().map(|x| -x).collect() })
    }

    /// Same class with multiplicities sorted in descending order.
    pub fn sorted_desc(&self) -> Self {
        let mut m = self.m.clone();
        m.sort_unstable_by(|a, b| b.cmp(a));
        CP2BlowupClass { d: self.d, m }
    }

    /// Pads with zero multiplicities up to `n` points.
    pub fn padded(&self, n: usize) -> Self {
        let mut m = self.m.clone();
        if m.len() < n {
            m.resize(n, 0);
        }
        CP2BlowupClass { d: self.d, m }
    }

    fn is_standard(&self) -> bool {
        self.d == 0
            && self.m.iter().filter(|&&x| x == -1).count() == 1
            && self.m.iter().all(|&x| x == 0 || x == -1)
    }
}

impl fmt::Display for CP2BlowupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.d)?;
        for (i, x) in self.m.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for CP2BlowupClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseClass(s.to_string());
        let t = s.trim();
        let (d, m) = match t.split_once(';') {
            Some((d, m)) => (d, m.trim()),
            None => (t, ""),
        };
        let d = d.trim().parse::<i64>().map_err(|_| bad())?;
        let m = if m.is_empty() {
            Vec::new()
        } else {
            m.split(',').map(|x| x.trim().parse::<i64>().map_err(|_| bad())).collect::<Result<_>>()?
        };
        Ok(CP2BlowupClass { d, m })
    }
}

impl Serialize for CP2BlowupClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `E·E = -1` and `c₁(E) = 1` on an arbitrary model.
pub fn is_numerically_exceptional(model: &ManifoldModel, e: &H2Class) -> Result<bool> {
    let sq = model.lattice.pair(e, e)?;
    let c1 = model.c1.evaluate(e)?;
    Ok(sq == (-1).into() && c1 == 1.into())
}

/// Cremona move on three distinct 0-based positions:
/// `(d; m) ↦ (2d - m_i - m_j - m_k; m_i ↦ d - m_j - m_k, …)`.
pub fn cremona_move(c: &CP2BlowupClass, indices: [usize; 3]) -> Result<CP2BlowupClass> {
    let [i, j, k] = indices;
    let n = c.points();
    if i == j || j == k || i == k {
        return Err(Error::InvalidArgument(format!("Cremona indices {indices:?} are not distinct")));
    }
    if let Some(bad) = indices.iter().find(|&&x| x >= n) {
        return Err(Error::InvalidArgument(format!(
            "Cremona index {bad} out of range for {n} points"
        )));
    }
    let (d, mi, mj, mk) = (c.d, c.m[i], c.m[j], c.m[k]);
    let mut m = c.m.clone();
    m[i] = d - mj - mk;
    m[j] = d - mi - mk;
    m[k] = d - mi - mj;
    Ok(CP2BlowupClass { d: 2 * d - mi - mj - mk, m })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CremonaStep {
    /// 1-based positions the move acted on.
    pub indices: [usize; 3],
    pub result: CP2BlowupClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionOutcome {
    /// Reached a permutation of `(0; -1, 0, …, 0)`.
    Standard,
    /// Some move produced a negative degree.
    NegativeDegree,
    /// No move decreases the degree, but the class is not standard.
    Stuck,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub reduced: CP2BlowupClass,
    pub trace: Vec<CremonaStep>,
    pub outcome: ReductionOutcome,
}

/// Positions of the three largest multiplicities, ties broken by lower index.
fn three_largest(m: &[i64]) -> [usize; 3] {
    let mut idx: Vec<usize> = (0..m.len()).collect();
    idx.sort_by(|&a, &b| m[b].cmp(&m[a]).then(a.cmp(&b)));
    [idx[0], idx[1], idx[2]]
}

/// Greedy Cremona reduction of a numerically exceptional class.
///
/// Classes with fewer than three points are padded with zero multiplicities,
/// which leaves the square and `c₁` unchanged; the reduced class is reported
/// at the padded length.
pub fn cremona_reduce(c: &CP2BlowupClass) -> Result<Reduction> {
    if !c.is_numerically_exceptional() {
        return Err(Error::NotExceptional(c.to_string()));
    }
    let mut cur = c.padded(3);
    let mut trace = Vec::new();
    let outcome = loop {
        if cur.d < 0 {
            break ReductionOutcome::NegativeDegree;
        }
        let idx = three_largest(&cur.m);
        let top: i64 = idx.iter().map(|&i| cur.m[i]).sum();
        if top <= cur.d {
            break if cur.is_standard() { ReductionOutcome::Standard } else { ReductionOutcome::Stuck };
        }
        cur = cremona_move(&cur, idx)?;
        trace.push(CremonaStep { indices: idx.map(|i| i + 1), result: cur.clone() });
    };
    Ok(Reduction { reduced: cur, trace, outcome })
}

/// Membership in the exceptional set of `CP² # N`, decided by Cremona reduction.
pub fn is_exceptional_cp2(c: &CP2BlowupClass) -> bool {
    match cremona_reduce(c) {
        Ok(r) => r.outcome == ReductionOutcome::Standard,
        Err(_) => false,
    }
}

/// A set of exceptional classes and whether it is known to be all of them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExceptionalSet {
    pub classes: Vec<H2Class>,
    pub complete: bool,
}

impl ExceptionalSet {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Largest degree of an exceptional class on `CP² # N` for `N ≤ 8`.
pub const MAX_EXCEPTIONAL_DEGREE: i64 = 6;

/// Largest `N` for which `CP² # N` has finitely many exceptional classes.
pub const MAX_FINITE_POINTS: usize = 8;

/// Non-increasing sequences of length `len` with entries in `[lo, hi]`,
/// prescribed sum and sum of squares.
fn descending_solutions(len: usize, lo: i64, hi: i64, sum: i64, sum_sq: i64) -> Vec<Vec<i64>> {
    fn go(
        out: &mut Vec<Vec<i64>>,
        cur: &mut Vec<i64>,
        left: usize,
        lo: i64,
        hi: i64,
        sum: i64,
        sum_sq: i64,
    ) {
        if left == 0 {
            if sum == 0 && sum_sq == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let l = left as i64;
        for x in (lo..=hi).rev() {
            // remaining entries lie in [lo, x]
            if x * l < sum || lo * l > sum || x * x > sum_sq {
                continue;
            }
            cur.push(x);
            go(out, cur, left - 1, lo, x, sum - x, sum_sq - x * x);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut out, &mut Vec::with_capacity(len), len, lo, hi, sum, sum_sq);
    out
}

/// All distinct permutations of `v`.
fn distinct_permutations(v: &[i64]) -> Vec<Vec<i64>> {
    let mut cur = v.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    // next lexicographic permutation
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
    out
}

/// Every exceptional class on `CP² # N`, sorted lexicographically by `(d, m)`.
pub fn enumerate_exceptional_cp2_classes(n: usize, exec: Exec) -> Result<Vec<CP2BlowupClass>> {
    if n > MAX_FINITE_POINTS {
        return Err(Error::InfiniteExceptionalSet);
    }
    let strata: Vec<i64> = (0..=MAX_EXCEPTIONAL_DEGREE).collect();
    let per_degree = exec.map(strata, |d| {
        let mut found = Vec::new();
        // E·E = -1 and c₁(E) = 1 fix Σm² and Σm.
        for m in descending_solutions(n, -1, d, 3 * d - 1, d * d + 1) {
            let rep = CP2BlowupClass::new(d, m);
            if is_exceptional_cp2(&rep) {
                found.extend(distinct_permutations(&rep.m).into_iter().map(|m| CP2BlowupClass::new(d, m)));
            }
        }
        found
    });
    let mut all: Vec<CP2BlowupClass> = per_degree.into_iter().flatten().collect();
    all.sort();
    Ok(all)
}

pub fn enumerate_exceptional_cp2(n: usize) -> Result<ExceptionalSet> {
    let classes = enumerate_exceptional_cp2_classes(n, Exec::default())?;
    Ok(ExceptionalSet { classes: classes.iter().map(CP2BlowupClass::to_h2).collect(), complete: true })
}

/// Shared, lazily computed exceptional classes of `CP² # N` for `N ≤ 8`.
pub fn cp2_exceptional_classes(n: usize) -> Result<&'static [CP2BlowupClass]> {
    static CACHE: [OnceLock<Vec<CP2BlowupClass>>; MAX_FINITE_POINTS + 1] =
        [const { OnceLock::new() }; MAX_FINITE_POINTS + 1];
    if n > MAX_FINITE_POINTS {
        return Err(Error::InfiniteExceptionalSet);
    }
    Ok(CACHE[n].get_or_init(|| {
        enumerate_exceptional_cp2_classes(n, Exec::default()).expect("n within finite range")
    }))
}

/// Exceptional set of `Σ_g × S²` blown up at `n` points (basis `R, S, E_1..E_n`):
/// `{E_1, …, E_n, S - E_1, …, S - E_n}`.
pub fn exceptional_set_ruled(g: u32, n: usize) -> Result<ExceptionalSet> {
    if g == 0 {
        return Err(Error::InvalidArgument(
            "genus 0 is rational; use the CP2 / S2xS2 machinery".into(),
        ));
    }
    let rank = n + 2;
    let mut classes: Vec<H2Class> = (0..n).map(|q| H2Class::basis(rank, 2 + q)).collect();
    classes.extend((0..n).map(|q| {
        let mut v = vec![0; rank];
        v[1] = 1;
        v[2 + q] = -1;
        H2Class(v)
    }));
    Ok(ExceptionalSet { classes, complete: true })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Positivity {
    pub ok: bool,
    pub violator: Option<H2Class>,
}

/// Whether `form` is strictly positive on every class of `set`.
pub fn positivity_against(form: &CohomologyFunctional, set: &ExceptionalSet) -> Result<Positivity> {
    for e in &set.classes {
        check_len(form.len(), e.len())?;
        if !form.evaluate(e)?.is_positive() {
            return Ok(Positivity { ok: false, violator: Some(e.clone()) });
        }
    }
    Ok(Positivity { ok: true, violator: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::blow_up;
    use crate::model::{make_cp2, make_ruled};
    use crate::rational::Rational;

    fn cls(s: &str) -> CP2BlowupClass {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        let c = cls("3;2,1,1,1,1,1,1");
        assert_eq!(c.d, 3);
        assert_eq!(c.m, vec![2, 1, 1, 1, 1, 1, 1]);
        assert_eq!(c.to_string(), "3;2,1,1,1,1,1,1");
        assert_eq!(cls("0").m, Vec::<i64>::new());
        assert!("x;1".parse::<CP2BlowupClass>().is_err());
        assert!("1;1,,2".parse::<CP2BlowupClass>().is_err());
    }

    #[test]
    fn numeric_exceptionality_on_models() {
        let bm = blow_up(&make_cp2(1.into()).unwrap(), 2).unwrap().model;
        let e1 = CP2BlowupClass::exceptional_divisor(2, 0);
        assert_eq!(e1.to_h2(), H2Class(vec![0, 1, 0]));
        assert!(is_numerically_exceptional(&bm, &e1.to_h2()).unwrap());
        assert!(is_numerically_exceptional(&bm, &cls("1;1,1").to_h2()).unwrap());
        assert!(!is_numerically_exceptional(&bm, &cls("2;1,1").to_h2()).unwrap());
        assert!(is_numerically_exceptional(&bm, &H2Class(vec![1])).is_err());
    }

    #[test]
    fn cremona_move_examples() {
        assert_eq!(cremona_move(&cls("2;1,1,1,1,1"), [0, 1, 2]).unwrap(), cls("1;0,0,0,1,1"));
        assert_eq!(cremona_move(&cls("1;1,1,0"), [0, 1, 2]).unwrap(), cls("0;0,0,-1"));
        assert!(cremona_move(&cls("1;1,1,0"), [0, 0, 2]).is_err());
        assert!(cremona_move(&cls("1;1,1,0"), [0, 1, 3]).is_err());
    }

    #[test]
    fn reduce_examples() {
        let r = cremona_reduce(&cls("2;1,1,1,1,1")).unwrap();
        assert_eq!(r.trace.len(), 2);
        assert_eq!(r.outcome, ReductionOutcome::Standard);
        assert_eq!(r.reduced.d, 0);
        assert_eq!(r.reduced.sorted_desc(), cls("0;0,0,0,0,-1"));

        let r = cremona_reduce(&cls("0;-1,0,0")).unwrap();
        assert!(r.trace.is_empty());
        assert_eq!(r.reduced, cls("0;-1,0,0"));

        let r = cremona_reduce(&cls("3;2,1,1,1,1,1,1")).unwrap();
        assert_eq!(r.outcome, ReductionOutcome::Standard);

        assert!(matches!(cremona_reduce(&cls("1;1,1,1")), Err(Error::NotExceptional(_))));
    }

    #[test]
    fn small_point_counts_are_padded() {
        assert!(is_exceptional_cp2(&cls("0;-1")));
        assert!(is_exceptional_cp2(&cls("1;1,1")));
        let r = cremona_reduce(&cls("1;1,1")).unwrap();
        assert_eq!(r.reduced, cls("0;0,0,-1"));
    }

    #[test]
    fn membership_examples() {
        for n in 2..=10 {
            assert!(is_exceptional_cp2(&cls("1;1,1").padded(n)));
        }
        assert!(is_exceptional_cp2(&cls("3;2,1,1,1,1,1,1")));
        assert!(!is_exceptional_cp2(&cls("1;1,1,1")));
        assert!(is_exceptional_cp2(&cls("6;3,2,2,2,2,2,2,2")));
    }

    #[test]
    fn negative_degree_is_rejected() {
        // numerically exceptional on CP² # 10 with negative degree
        let c = cls("-3;-1,-1,-1,-1,-1,-1,-1,-1,-1,-1");
        assert!(c.is_numerically_exceptional());
        assert!(!is_exceptional_cp2(&c));
        assert_eq!(cremona_reduce(&c).unwrap().outcome, ReductionOutcome::NegativeDegree);
    }

    #[test]
    fn enumeration_counts() {
        let expected = [0, 1, 3, 6, 10, 16, 27, 56, 240];
        for (n, &count) in expected.iter().enumerate() {
            let set = enumerate_exceptional_cp2(n).unwrap();
            assert_eq!(set.len(), count, "N = {n}");
            assert!(set.complete);
        }
        assert_eq!(enumerate_exceptional_cp2(9), Err(Error::InfiniteExceptionalSet));
    }

    #[test]
    fn enumeration_two_points() {
        let classes = enumerate_exceptional_cp2_classes(2, Exec::Sequential).unwrap();
        assert_eq!(classes, vec![cls("0;-1,0"), cls("0;0,-1"), cls("1;1,1")]);
    }

    #[test]
    fn ruled_sets() {
        let s = exceptional_set_ruled(1, 1).unwrap();
        assert_eq!(s.classes, vec![H2Class(vec![0, 0, 1]), H2Class(vec![0, 1, -1])]);
        assert!(exceptional_set_ruled(2, 0).unwrap().is_empty());
        assert!(exceptional_set_ruled(0, 2).is_err());

        let s = exceptional_set_ruled(1, 3).unwrap();
        assert_eq!(s.len(), 6);
        let bm = blow_up(&make_ruled(1, 1.into(), 1.into()).unwrap(), 3).unwrap().model;
        for e in &s.classes {
            assert!(is_numerically_exceptional(&bm, e).unwrap());
        }
    }

    #[test]
    fn positivity_examples() {
        let set = ExceptionalSet { classes: vec![cls("1;1,1").to_h2()], complete: false };
        let f = CohomologyFunctional(vec![1.into(), Rational::frac(2, 5), Rational::frac(2, 5)]);
        assert!(positivity_against(&f, &set).unwrap().ok);
        let f = CohomologyFunctional(vec![1.into(), Rational::frac(3, 5), Rational::frac(3, 5)]);
        let p = positivity_against(&f, &set).unwrap();
        assert!(!p.ok);
        assert_eq!(p.violator, Some(cls("1;1,1").to_h2()));
        let empty = ExceptionalSet { classes: vec![], complete: true };
        assert!(positivity_against(&f, &empty).unwrap().ok);
    }

    #[test]
    fn distinct_permutations_counts() {
        assert_eq!(distinct_permutations(&[1, 1, 0]).len(), 3);
        assert_eq!(distinct_permutations(&[3, 2, 2, 2, 2, 2, 2, 2]).len(), 8);
        assert_eq!(distinct_permutations(&[]).len(), 1);
    }
}
