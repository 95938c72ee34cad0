//! Legendre polynomials and spherical Bessel functions.

use num_complex::Complex64;

/// `P_k(x)` by the upward three-term recursion.
pub fn legendre(k: usize, x: f64) -> f64 {
    let mut p0 = 1.0;
    if k == 0 {
        return p0;
    }
    let mut p1 = x;
    for j in 1..k {
        let jf = j as f64;
        let p2 = ((2.0 * jf + 1.0) * x * p1 - jf * p0) / (jf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `P_0(x), ..., P_kmax(x)`.
pub fn legendre_all(kmax: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(1.0);
    if kmax >= 1 {
        out.push(x);
    }
    for j in 1..kmax {
        let jf = j as f64;
        let v = ((2.0 * jf + 1.0) * x * out[j] - jf * out[j - 1]) / (jf + 1.0);
        out.push(v);
    }
    out
}

/// `sqrt((2k+1)/(2c)) P_k(x/c)`, orthonormal on `[-c, c]`.
pub fn legendre_normalized(k: usize, x: f64, c: f64) -> f64 {
    ((2 * k + 1) as f64 / (2.0 * c)).sqrt() * legendre(k, x / c)
}

/// Spherical Bessel function `j_k(x)`.
pub fn spherical_bessel(k: usize, x: f64) -> f64 {
    let sign = if x < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
    sign * spherical_bessel_nonneg(k, x.abs())
}

fn spherical_bessel_nonneg(k: usize, x: f64) -> f64 {
    if x == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let kf = k as f64;
    if x * x <= (kf + 1.5).max(1.0) {
        return bessel_series(k, x);
    }
    let j0 = x.sin() / x;
    if k == 0 {
        return j0;
    }
    let j1 = x.sin() / (x * x) - x.cos() / x;
    if x >= kf {
        // upward recursion is stable once x exceeds the order
        let (mut a, mut b) = (j0, j1);
        for n in 1..k {
            let c = (2 * n + 1) as f64 / x * b - a;
            a = b;
            b = c;
        }
        return b;
    }
    // Miller's downward recursion, normalised against j_0 or j_1
    let start = k + 30 + x as usize;
    let (mut next, mut cur) = (0.0f64, 1.0f64);
    let mut jk = 0.0;
    for n in (1..=start).rev() {
        let prev = (2 * n + 1) as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if n - 1 == k {
            jk = cur;
        }
        if cur.abs() > 1e200 {
            cur *= 1e-200;
            next *= 1e-200;
            jk *= 1e-200;
        }
    }
    // cur ~ j_0, next ~ j_1 up to a common factor
    if j0.abs() >= j1.abs() {
        jk * (j0 / cur)
    } else {
        jk * (j1 / next)
    }
}

/// Power series `x^k/(2k+1)!! sum_l (-x^2/2)^l / (l! (2k+3)...(2k+2l+1))`.
fn bessel_series(k: usize, x: f64) -> f64 {
    let mut lead = 1.0;
    for j in 1..=k {
        lead *= x / (2 * j + 1) as f64;
    }
    let y = -0.5 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for l in 1..200 {
        term *= y / (l as f64 * (2 * k + 2 * l + 1) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

/// `int_{-1}^1 e^{ixy} P_k(y) dy = 2 i^k j_k(x)`, split into the real factor
/// `2 j_k(x)` and the power of `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteFourierLegendre {
    pub real_part: f64,
    /// Exponent of `i`, reduced mod 4.
    pub i_power: u8,
}

impl FiniteFourierLegendre {
    pub fn to_complex(self) -> Complex64 {
        let phase = match self.i_power {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        phase * self.real_part
    }
}

pub fn finite_fourier_legendre(k: usize, x: f64) -> FiniteFourierLegendre {
    FiniteFourierLegendre {
        real_part: 2.0 * spherical_bessel(k, x),
        i_power: (k % 4) as u8,
    }
}

/// Right-hand side of the bound `|j_k(x)| <= e^{k+3/2} |x|^k / (sqrt 2 (2k+3)^{k+1})`.
pub fn spherical_bessel_bound(k: usize, x: f64) -> f64 {
    let kf = k as f64;
    let ln = (kf + 1.5) - 0.5 * std::f64::consts::LN_2 - (kf + 1.0) * (2.0 * kf + 3.0).ln()
        + if k == 0 { 0.0 } else { kf * x.abs().ln() };
    ln.exp()
}
