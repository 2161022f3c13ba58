/// Euclidean projection onto the probability simplex `{u : u_i ≥ 0, Σu_i = 1}`.
///
/// Sort-and-threshold algorithm: find the largest `ρ` with
/// `v_(ρ) - (Σ_{i≤ρ} v_(i) - 1)/ρ > 0` over the descending order, then shift and clip.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    if v.is_empty() {
        return Vec::new();
    }
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite input"));
    let mut cumsum = 0.0;
    let mut shift = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        cumsum += x;
        let candidate = (cumsum - 1.0) / (i + 1) as f64;
        if x - candidate > 0.0 {
            shift = candidate;
        }
    }
    let mut out: Vec<f64> = v.iter().map(|&x| (x - shift).max(0.0)).collect();
    // Renormalise to absorb the rounding left by the threshold.
    let total: f64 = out.iter().sum();
    if total > 0.0 {
        out.iter_mut().for_each(|x| *x /= total);
    }
    out
}
