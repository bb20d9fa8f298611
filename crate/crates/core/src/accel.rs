//! Series acceleration.

/// Wynn's ε-algorithm applied to a sequence of partial sums.
///
/// Returns the estimate from the deepest even column together with the
/// difference to the previous estimate of that column (a crude error bound).
pub fn wynn_epsilon(partial: &[f64]) -> Option<(f64, f64)> {
    let n = partial.len();
    if n < 3 {
        return None;
    }
    // e_prev = ε_{k-1}, e_cur = ε_k columns, indexed by sequence position
    let mut e_prev = vec![0.0; n + 1];
    let mut e_cur: Vec<f64> = partial.to_vec();
    let mut best: Option<(f64, f64)> = None;
    let mut k = 0;
    while e_cur.len() >= 2 {
        let mut next = Vec::with_capacity(e_cur.len() - 1);
        for i in 0..e_cur.len() - 1 {
            let d = e_cur[i + 1] - e_cur[i];
            let prev = e_prev[i + 1];
            if d == 0.0 || !d.is_finite() {
                // the column has converged exactly; stop here
                let v = e_cur[i + 1];
                return Some(best.map_or((v, 0.0), |(b, _)| (v, (v - b).abs())));
            }
            next.push(prev + 1.0 / d);
        }
        k += 1;
        e_prev = e_cur;
        e_cur = next;
        if k % 2 == 0 && e_cur.len() >= 2 {
            let last = e_cur[e_cur.len() - 1];
            let before = e_cur[e_cur.len() - 2];
            if last.is_finite() && before.is_finite() {
                best = Some((last, (last - before).abs()));
            }
        }
    }
    best.or_else(|| Some((partial[n - 1], (partial[n - 1] - partial[n - 2]).abs())))
}

/// Weights `w_k` with `Σ_{l≥0} (-1)^l a_l ≈ Σ_{k<n} w_k a_k`, by the
/// Cohen-Rodriguez Villegas-Zagier algorithm. Exact for `a_l` that are
/// moments of a positive measure, with error about `5.8^{-n}` relative.
pub fn alternating_weights(n: usize) -> Vec<f64> {
    let d = (3.0 + 8f64.sqrt()).powi(n as i32);
    let d = 0.5 * (d + 1.0 / d);
    let mut b = -1.0;
    let mut c = -d;
    let mut w = Vec::with_capacity(n);
    for k in 0..n {
        c = b - c;
        w.push(c / d);
        let kf = k as f64;
        let nf = n as f64;
        b *= (kf + nf) * (kf - nf) / ((kf + 0.5) * (kf + 1.0));
    }
    w
}

/// `Σ_{l≥0} (-1)^l a_l` with `n` terms; see [`alternating_weights`].
pub fn alternating_sum(a: impl Fn(usize) -> f64, n: usize) -> f64 {
    alternating_weights(n).iter().enumerate().map(|(k, w)| w * a(k)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wynn_accelerates_log2() {
        // Σ (-1)^{k} / (k+1) = ln 2
        let mut s = 0.0;
        let partial: Vec<f64> = (0..20)
            .map(|k| {
                s += if k % 2 == 0 { 1.0 } else { -1.0 } / (k as f64 + 1.0);
                s
            })
            .collect();
        let (v, _) = wynn_epsilon(&partial).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-12, "{v}");
    }

    #[test]
    fn wynn_sums_geometric_on_the_unit_circle() {
        // Abel sum of Σ (-1)^k = 1/2
        let partial: Vec<f64> = (0..10).map(|k| if k % 2 == 0 { 1.0 } else { 0.0 }).collect();
        let (v, _) = wynn_epsilon(&partial).unwrap();
        assert!((v - 0.5).abs() < 1e-14);
    }

    #[test]
    fn alternating_zeta() {
        // η(2) = π²/12
        let v = alternating_sum(|l| 1.0 / ((l + 1) as f64).powi(2), 20);
        assert!((v - std::f64::consts::PI.powi(2) / 12.0).abs() < 1e-14);
    }
}
