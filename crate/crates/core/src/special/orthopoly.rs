/// Gegenbauer polynomial `C^1_m(x)`, i.e. the Chebyshev polynomial of the
/// second kind `U_m`. At `x = cos t` it equals `sin((m+1) t) / sin t`, with the
/// limits `m+1` at `x = 1` and `(-1)^m (m+1)` at `x = -1`.
pub fn gegenbauer_c1(m: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if m == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for _ in 2..=m {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Jacobi polynomial `P_N^(alpha, beta)(x)` by the three-term recurrence.
pub fn jacobi_poly(degree: u32, alpha: f64, beta: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if degree == 0 {
        return prev;
    }
    let ab = alpha + beta;
    let mut cur = (alpha + 1.0) + (ab + 2.0) * (x - 1.0) / 2.0;
    for k in 2..=degree {
        let k = k as f64;
        let two_k_ab = 2.0 * k + ab;
        let a1 = 2.0 * k * (k + ab) * (two_k_ab - 2.0);
        let a2 = (two_k_ab - 1.0) * (two_k_ab * (two_k_ab - 2.0) * x + alpha * alpha - beta * beta);
        let a3 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * two_k_ab;
        let next = (a2 * cur - a3 * prev) / a1;
        prev = cur;
        cur = next;
    }
    cur
}

/// Terminating real series `2F1(-N, b; c; x) = sum_{k<=N} (-N)_k (b)_k / ((c)_k k!) x^k`.
pub fn terminating_2f1_real(degree: u32, b: f64, c: f64, x: f64) -> f64 {
    let n = degree as f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..degree {
        let k = k as f64;
        term *= (k - n) * (b + k) / ((c + k) * (k + 1.0)) * x;
        sum += term;
    }
    sum
}
