/// Relative pivot threshold below which a covariance is treated as singular.
pub(crate) const PIVOT_TOL: f64 = 1e-12;

/// Log-determinant of a symmetric positive definite `g × g` matrix (row-major)
/// via an LDLᵀ factorisation. Returns `None` if the smallest pivot falls
/// below `PIVOT_TOL` times the largest.
pub(crate) fn log_det_spd(a: &[f64], g: usize) -> Option<f64> {
    debug_assert_eq!(a.len(), g * g);
    if g == 0 {
        return Some(0.0);
    }
    let mut l = vec![0.0; g * g];
    let mut d = vec![0.0; g];
    for j in 0..g {
        let mut dj = a[j * g + j];
        for k in 0..j {
            dj -= l[j * g + k] * l[j * g + k] * d[k];
        }
        if !(dj > 0.0) {
            return None;
        }
        d[j] = dj;
        l[j * g + j] = 1.0;
        for i in j + 1..g {
            let mut s = a[i * g + j];
            for k in 0..j {
                s -= l[i * g + k] * l[j * g + k] * d[k];
            }
            l[i * g + j] = s / dj;
        }
    }
    let max = d.iter().cloned().fold(0.0, f64::max);
    let min = d.iter().cloned().fold(f64::INFINITY, f64::min);
    (min >= PIVOT_TOL * max).then(|| d.iter().map(|x| x.ln()).sum())
}
