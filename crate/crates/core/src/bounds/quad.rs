//! Adaptive Gauss–Kronrod quadrature for integrands given as logarithms.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const SCAN_POINTS: usize = 257;
const INITIAL_PANELS: usize = 16;
const MAX_PANELS: usize = 20_000;

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Returns `ln ∫_a^b exp(g(x)) dx`.
///
/// `g` may return `-inf`. The integrand is rescaled by its sampled maximum before
/// integration, so results far below `f64::MIN_POSITIVE` are still representable.
pub fn log_integrate(g: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    if b <= a {
        return f64::NEG_INFINITY;
    }
    let mut peak = f64::NEG_INFINITY;
    for i in 0..SCAN_POINTS {
        let x = a + (b - a) * (i as f64 + 0.5) / SCAN_POINTS as f64;
        let v = g(x);
        if v > peak {
            peak = v;
        }
    }
    if peak == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let f = |x: f64| {
        let v = g(x) - peak;
        if v.is_nan() {
            0.0
        } else {
            v.exp()
        }
    };

    let width = (b - a) / INITIAL_PANELS as f64;
    let mut panels: Vec<(f64, f64, f64, f64)> = (0..INITIAL_PANELS)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == INITIAL_PANELS { b } else { lo + width };
            let (v, e) = gk15(&f, lo, hi);
            (lo, hi, v, e)
        })
        .collect();

    loop {
        let total: f64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if err <= rel_tol * total.abs() || panels.len() >= MAX_PANELS {
            return total.ln() + peak;
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty panel list");
        let (lo, hi, _, _) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        panels.push((lo, mid, v1, e1));
        panels.push((mid, hi, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_integral() {
        let got = log_integrate(|x| -x * x / 2.0, -40.0, 40.0, 1e-12);
        let want = (2.0 * std::f64::consts::PI).sqrt().ln();
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn tiny_magnitudes() {
        let got = log_integrate(|x| -2000.0 + x.ln(), 0.0, 1.0, 1e-12);
        assert!((got - (-2000.0 + 0.5f64.ln())).abs() < 1e-10);
    }

    #[test]
    fn sharp_peak() {
        let got = log_integrate(|x| -1e4 * (x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-12);
        let want = (std::f64::consts::PI / 1e4).sqrt().ln();
        assert!((got - want).abs() < 1e-9);
    }
}
