//! Cross-checks the Cremona-based enumeration against a brute-force search.

use packlab_core::exceptional::{
    cremona_reduce, enumerate_exceptional_cp2, enumerate_exceptional_cp2_classes, is_exceptional_cp2,
    CP2BlowupClass, ReductionOutcome,
};
use packlab_core::Exec;

/// Exhaustive loops over `d ∈ [0, 6]` and `m_q ∈ [-1, 6]`, keeping classes with
/// `E·E = -1`, `c₁(E) = 1` that pair non-negatively with every class accepted
/// before them. Partial sums of squares prune branches that already exceed
/// `d² + 1`.
fn brute_force(n: usize) -> Vec<CP2BlowupClass> {
    fn rec(d: i64, n: usize, m: &mut Vec<i64>, sq: i64, out: &mut Vec<CP2BlowupClass>) {
        if sq > d * d + 1 {
            return;
        }
        if m.len() == n {
            let sum: i64 = m.iter().sum();
            if d * d - sq == -1 && 3 * d - sum == 1 {
                let c = CP2BlowupClass { d, m: m.clone() };
                let dot = |a: &CP2BlowupClass, b: &CP2BlowupClass| {
                    a.d * b.d - a.m.iter().zip(&b.m).map(|(x, y)| x * y).sum::<i64>()
                };
                if out.iter().all(|prev| dot(prev, &c) >= 0) {
                    out.push(c);
                }
            }
            return;
        }
        for x in -1..=6 {
            m.push(x);
            rec(d, n, m, sq + x * x, out);
            m.pop();
        }
    }
    let mut out = Vec::new();
    for d in 0..=6 {
        rec(d, n, &mut Vec::new(), 0, &mut out);
    }
    out.sort();
    out
}

#[test]
fn enumeration_matches_brute_force() {
    for n in 0..=8 {
        let oracle = brute_force(n);
        let seq = enumerate_exceptional_cp2_classes(n, Exec::Sequential).unwrap();
        let par = enumerate_exceptional_cp2_classes(n, Exec::Parallel).unwrap();
        assert_eq!(seq, oracle, "N = {n}");
        assert_eq!(par, oracle, "N = {n}");
    }
}

#[test]
fn cardinality_table() {
    let counts: Vec<usize> = (0..=8).map(|n| enumerate_exceptional_cp2(n).unwrap().len()).collect();
    assert_eq!(counts, vec![0, 1, 3, 6, 10, 16, 27, 56, 240]);
}

#[test]
fn enumerated_classes_pair_nonnegatively() {
    for n in 0..=8 {
        let classes = enumerate_exceptional_cp2_classes(n, Exec::Parallel).unwrap();
        for (i, a) in classes.iter().enumerate() {
            assert_eq!(a.square(), -1);
            assert_eq!(a.c1(), 1);
            for b in &classes[i + 1..] {
                assert!(a.dot(b) >= 0, "{a} . {b} < 0");
            }
        }
    }
}

#[test]
fn no_negative_degree_solutions_in_range() {
    // d < 0 would need |3d - 1| <= d² + 1 and (3d-1)² <= N(d²+1); impossible for N <= 8
    for n in 1..=8usize {
        for d in -6i64..0 {
            let s = (3 * d - 1).abs();
            let q = d * d + 1;
            assert!(s > q || (s * s) > n as i64 * q, "d = {d}, N = {n}");
        }
    }
}

#[test]
fn reduction_of_seven_point_cubic() {
    let c: CP2BlowupClass = "3;2,1,1,1,1,1,1".parse().unwrap();
    let r = cremona_reduce(&c).unwrap();
    assert_eq!(r.outcome, ReductionOutcome::Standard);
    assert!(!r.trace.is_empty());
    for step in &r.trace {
        assert!(step.result.d >= 0);
        assert_eq!(step.result.square(), -1);
        assert_eq!(step.result.c1(), 1);
    }
    assert!(is_exceptional_cp2(&c));
}

#[test]
fn membership_beyond_eight_points() {
    // infinite sets: per-class checks still work
    let c: CP2BlowupClass = "6;3,2,2,2,2,2,2,2,0,0".parse().unwrap();
    assert!(is_exceptional_cp2(&c));
    let big: CP2BlowupClass = "-3;-1,-1,-1,-1,-1,-1,-1,-1,-1,-1".parse().unwrap();
    assert!(big.is_numerically_exceptional());
    assert!(!is_exceptional_cp2(&big));
}
