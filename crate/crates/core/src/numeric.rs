//! Log-space helpers shared by the thermodynamic routines.

use libm::{exp, expm1, lgamma, log, log1p};

/// `ln(e^a + e^b)` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    if a > b {
        a + log1p(exp(b - a))
    } else {
        b + log1p(exp(a - b))
    }
}

/// `ln(1 + e^x)`.
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + log1p(exp(-x))
    } else {
        log1p(exp(x))
    }
}

/// Logistic function `1 / (1 + e^{-x})`, branching on the sign of `x`.
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + exp(-x))
    } else {
        let e = exp(x);
        e / (1.0 + e)
    }
}

/// `ln(1 - e^{-y})` for `y > 0`.
pub fn ln_one_minus_exp_neg(y: f64) -> f64 {
    // Switch point from Mächler (2012): expm1 is accurate below ln 2,
    // log1p above it.
    if y <= core::f64::consts::LN_2 {
        log(-expm1(-y))
    } else {
        log1p(-exp(-y))
    }
}

/// Mean Bose occupation `1 / (e^s - 1)`; vanishes smoothly for large `s`.
pub fn bose_occupation(s: f64) -> f64 {
    1.0 / expm1(s)
}

/// `ln C(n, k)` via log-gamma. Returns `None` when `k > n`.
pub fn ln_binomial(n: u64, k: u64) -> Option<f64> {
    if k > n {
        return None;
    }
    if k == 0 || k == n {
        return Some(0.0);
    }
    let n = n as f64;
    let k = k as f64;
    Some(lgamma(n + 1.0) - lgamma(k + 1.0) - lgamma(n - k + 1.0))
}
