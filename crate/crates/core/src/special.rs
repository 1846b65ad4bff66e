//! Gamma-function helpers in the log domain.

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln n!`.
pub fn ln_factorial(n: u64) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// `ln Q(s, x)` where `Q(s, x) = Γ(s, x) / Γ(s)` is the regularized upper
/// incomplete gamma function.
///
/// Series for `P` below `x < s + 1`, Lentz continued fraction above; the
/// latter keeps relative accuracy for tails far below machine epsilon.
pub fn ln_gamma_q(s: f64, x: f64) -> f64 {
    debug_assert!(s > 0.0);
    if x <= 0.0 {
        return 0.0;
    }
    let ln_prefactor = -x + s * x.ln() - ln_gamma(s);
    if x < s + 1.0 {
        let mut term = 1.0 / s;
        let mut sum = term;
        let mut a = s;
        for _ in 0..100_000 {
            a += 1.0;
            term *= x / a;
            sum += term;
            if term.abs() < sum.abs() * 1e-17 {
                break;
            }
        }
        let p = (ln_prefactor + sum.ln()).exp();
        (-p).ln_1p()
    } else {
        const TINY: f64 = 1e-300;
        let mut b = x + 1.0 - s;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..100_000 {
            let an = -(i as f64) * (i as f64 - s);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        ln_prefactor + h.ln()
    }
}
