//! Integer-order Bessel functions of the first kind and the spherical j₁.

/// Below this |x| the ascending series is used instead of Miller's recurrence.
const SERIES_CUTOFF: f64 = 0.5;
const RESCALE_ABOVE: f64 = 1e250;

/// Starting order for Miller's backward recurrence. Beyond `max(n, x)` the
/// Bessel functions fall off on a scale of x^{1/3}; twelve such widths bring
/// J_M below double precision relative to the orders we keep.
fn miller_start(n_max: usize, ax: f64) -> usize {
    let base = (n_max as f64).max(ax);
    let m = (base + 12.0 * ax.cbrt() + 24.0).ceil() as usize;
    m + (m & 1)
}

fn series_all(n_max: usize, ax: f64) -> Vec<f64> {
    let h = 0.5 * ax;
    let h2 = h * h;
    let mut out = Vec::with_capacity(n_max + 1);
    // leading term (x/2)^n / n!
    let mut lead = 1.0;
    for n in 0..=n_max {
        if n > 0 {
            lead *= h / n as f64;
        }
        if lead == 0.0 {
            out.resize(n_max + 1, 0.0);
            break;
        }
        let mut term = lead;
        let mut sum = lead;
        let mut k = 1.0;
        while term.abs() > 1e-18 * sum.abs() {
            term *= -h2 / (k * (n as f64 + k));
            sum += term;
            k += 1.0;
        }
        out.push(sum);
    }
    out
}

fn miller_all(n_max: usize, ax: f64) -> Vec<f64> {
    let m = miller_start(n_max, ax);
    let mut j = vec![0.0; m + 2];
    j[m] = 1.0;
    let two_over_x = 2.0 / ax;
    for k in (1..=m).rev() {
        let next = k as f64 * two_over_x * j[k] - j[k + 1];
        j[k - 1] = next;
        if next.abs() > RESCALE_ABOVE {
            for v in &mut j[k - 1..] {
                *v /= RESCALE_ABOVE;
            }
        }
    }
    // J₀ + 2 Σ J_{2k} = 1
    let mut norm = j[0];
    for v in j.iter().skip(2).step_by(2) {
        norm += 2.0 * v;
    }
    j.truncate(n_max + 1);
    for v in &mut j {
        *v /= norm;
    }
    j
}

/// J₀(x), …, J_{n_max}(x) for any real x.
pub fn bessel_jn_all(n_max: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut out = vec![0.0; n_max + 1];
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    let mut out = if ax < SERIES_CUTOFF {
        series_all(n_max, ax)
    } else {
        miller_all(n_max, ax)
    };
    if x < 0.0 {
        for v in out.iter_mut().skip(1).step_by(2) {
            *v = -*v;
        }
    }
    out
}

/// J_n(x) for n ≥ 0.
pub fn bessel_jn(n: u32, x: f64) -> f64 {
    bessel_jn_all(n as usize, x)[n as usize]
}

/// J_n(x) for any integer order, using J_{-n} = (-1)^n J_n.
pub fn bessel_jn_signed(n: i64, x: f64) -> f64 {
    let v = bessel_jn(n.unsigned_abs() as u32, x);
    if n < 0 && n % 2 != 0 {
        -v
    } else {
        v
    }
}

/// Spherical Bessel function j₁(x) = sin x / x² − cos x / x.
pub fn spherical_j1(x: f64) -> f64 {
    if x.abs() < 0.5 {
        // Σ (-1)^k x^{2k+1} / (2^k k! (2k+3)!!)
        let x2 = x * x;
        let mut term = x / 3.0;
        let mut sum = term;
        for k in 1..8 {
            let kf = k as f64;
            term *= -x2 / (2.0 * kf * (2.0 * kf + 3.0));
            sum += term;
        }
        sum
    } else {
        let (s, c) = x.sin_cos();
        s / (x * x) - c / x
    }
}
