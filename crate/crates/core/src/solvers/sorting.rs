//! Rearrangement-inequality matchings.
//!
//! `max_φ Σ_i a[φ(i)] b[i]` over bijections `φ` is attained by pairing equal
//! ranks of `a` and `b`, so two sorts solve it.

/// Positions of `v` in ascending order; equal values keep index order.
pub(crate) fn argsort(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
    idx
}

/// Map `φ` maximizing `Σ_i a[φ(i)] b[i]`: the entry of `b` with rank `r` is
/// matched to the entry of `a` with rank `r`.
pub fn sorted_matching(a: &[f64], b: &[f64]) -> Vec<usize> {
    assert_eq!(a.len(), b.len(), "matching needs equal lengths");
    let ra = argsort(a);
    let rb = argsort(b);
    let mut map = vec![0; a.len()];
    for (&ia, &ib) in ra.iter().zip(&rb) {
        map[ib] = ia;
    }
    map
}
