//! Globally adaptive Gauss–Kronrod quadrature on finite intervals and on the
//! radial half-line (0, ∞).

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], ..., XGK[9].
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// How the part of a radial integral beyond `k_max` is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TailTreatment {
    /// Integrate [k_max, ∞) under the substitution k = k_max/u.
    #[default]
    Mapped,
    /// Drop [k_max, ∞) and add a C/k³ tail bound to the reported error.
    /// Use this for integrands whose cost grows with k (Bessel functions of
    /// argument ∝ k).
    Truncated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Radial truncation / mapping point (a.u.).
    pub k_max: f64,
    pub max_subdivisions: usize,
    #[serde(default)]
    pub tail: TailTreatment,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-8,
            abs_tol: 1e-14,
            k_max: 200.0,
            max_subdivisions: 4000,
            tail: TailTreatment::Mapped,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.rel_tol) || !ok(self.abs_tol) {
            return Err(Error::validation("quadrature tolerances must be > 0"));
        }
        if !ok(self.k_max) {
            return Err(Error::validation("k_max must be > 0"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::validation("max_subdivisions must be ≥ 1"));
        }
        Ok(())
    }

    pub fn with_tail(mut self, tail: TailTreatment) -> Self {
        self.tail = tail;
        self
    }

    pub fn with_k_max(mut self, k_max: f64) -> Self {
        self.k_max = k_max;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Estimated absolute error, including any truncation bound.
    pub error: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
}

#[derive(Clone, Copy, Debug)]
enum Map {
    Identity,
    /// x = scale / u, dx = scale / u² du
    Inverted(f64),
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    map_id: u8,
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// Part of `error` that is pure rounding and cannot be refined away.
    floor: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.map_id.cmp(&self.map_id))
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn eval_mapped<F: Fn(f64) -> f64>(f: &F, map: Map, u: f64) -> f64 {
    match map {
        Map::Identity => f(u),
        Map::Inverted(s) => {
            if u <= 0.0 {
                0.0
            } else {
                f(s / u) * s / (u * u)
            }
        }
    }
}

/// One 21-point Gauss–Kronrod panel: (Kronrod value, error estimate,
/// rounding floor of the estimate).
fn gk21<F: Fn(f64) -> f64>(f: &F, map: Map, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = eval_mapped(f, map, center);
    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = eval_mapped(f, map, center - x);
        let f2 = eval_mapped(f, map, center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let res_k = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = (res_k - res_g * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let eps = 50.0 * f64::EPSILON;
    let floor = eps * res_abs;
    if res_abs > f64::MIN_POSITIVE / eps {
        err = err.max(floor);
    }
    (res_k, err, floor.min(err))
}

struct Adaptive {
    maps: Vec<Map>,
    heap: BinaryHeap<Panel>,
    evaluations: usize,
    subdivisions: usize,
}

impl Adaptive {
    fn new() -> Self {
        Adaptive {
            maps: Vec::new(),
            heap: BinaryHeap::new(),
            evaluations: 0,
            subdivisions: 0,
        }
    }

    fn add_segment<F: Fn(f64) -> f64>(&mut self, f: &F, map: Map, a: f64, b: f64) {
        let map_id = self.maps.len() as u8;
        self.maps.push(map);
        self.push(f, map_id, a, b);
    }

    fn push<F: Fn(f64) -> f64>(&mut self, f: &F, map_id: u8, a: f64, b: f64) {
        let (value, error, floor) = gk21(f, self.maps[map_id as usize], a, b);
        self.evaluations += 21;
        self.heap.push(Panel {
            map_id,
            a,
            b,
            value,
            error,
            floor,
        });
    }

    /// Sum in a fixed (position) order so the result does not depend on the
    /// refinement history.
    fn totals(&self) -> (f64, f64, f64) {
        let mut panels: Vec<&Panel> = self.heap.iter().collect();
        panels.sort_by(|p, q| p.map_id.cmp(&q.map_id).then(p.a.total_cmp(&q.a)));
        panels.iter().fold((0.0, 0.0, 0.0), |(v, e, r), p| {
            (v + p.value, e + p.error, r + p.floor)
        })
    }

    fn run<F: Fn(f64) -> f64>(
        &mut self,
        f: &F,
        rel_tol: f64,
        abs_tol: f64,
        max_subdivisions: usize,
    ) -> Result<(f64, f64)> {
        loop {
            let (value, error, floor) = self.totals();
            // an estimate made only of rounding floors cannot improve
            if error - floor <= abs_tol.max(rel_tol * value.abs()) {
                return Ok((value, error));
            }
            if self.subdivisions >= max_subdivisions {
                return Err(Error::Convergence {
                    estimate: value,
                    error,
                    subdivisions: self.subdivisions,
                });
            }
            // bisect a batch of the worst panels before re-summing
            let batch = (self.heap.len() / 8).max(1);
            for _ in 0..batch {
                let worst = match self.heap.pop() {
                    Some(p) => p,
                    None => break,
                };
                let mid = 0.5 * (worst.a + worst.b);
                if mid <= worst.a || mid >= worst.b {
                    // panel width at machine resolution
                    self.heap.push(worst);
                    let (estimate, error, _) = self.totals();
                    return Err(Error::Convergence {
                        estimate,
                        error,
                        subdivisions: self.subdivisions,
                    });
                }
                self.push(f, worst.map_id, worst.a, mid);
                self.push(f, worst.map_id, mid, worst.b);
                self.subdivisions += 1;
            }
        }
    }
}

/// Adaptive integral of `f` over the finite interval [a, b].
pub fn integrate_interval<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
            subdivisions: 0,
        });
    }
    let mut ad = Adaptive::new();
    ad.add_segment(&f, Map::Identity, a, b);
    let (value, error) = ad.run(&f, rel_tol, abs_tol, max_subdivisions)?;
    Ok(QuadResult {
        value,
        error,
        evaluations: ad.evaluations,
        subdivisions: ad.subdivisions,
    })
}

/// Adaptive integral of a radial function over (0, ∞).
///
/// [0, k_max] is split geometrically (0, ½, 1, 2, 4, …, k_max) and refined
/// adaptively. The remainder is either mapped onto u ∈ (0, 1] and refined
/// together with the finite part, or dropped with a C/k³ tail bound added to
/// the error estimate; `f` must decay at least that fast.
pub fn integrate_radial<F: Fn(f64) -> f64>(f: F, spec: &QuadratureSpec) -> Result<QuadResult> {
    spec.validate()?;
    let k_max = spec.k_max;
    let mut ad = Adaptive::new();
    let mut edges = vec![0.0];
    let mut e = 0.5_f64.min(0.5 * k_max);
    while e < k_max {
        edges.push(e);
        e *= 2.0;
    }
    edges.push(k_max);
    // the identity-mapped pieces share one map entry
    ad.maps.push(Map::Identity);
    for w in edges.windows(2) {
        ad.push(&f, 0, w[0], w[1]);
    }
    if spec.tail == TailTreatment::Mapped {
        ad.add_segment(&f, Map::Inverted(k_max), 0.0, 1.0);
    }
    let run = ad.run(&f, spec.rel_tol, spec.abs_tol, spec.max_subdivisions);
    let tail_bound = match spec.tail {
        TailTreatment::Mapped => 0.0,
        TailTreatment::Truncated => {
            // |f| ≤ C/k³ beyond k_max ⇒ tail ≤ C / (2 k_max²); C is read off
            // [k_max/2, k_max] and doubled since k³|f| may still be rising
            let c = (0..16)
                .map(|i| {
                    let k = k_max * (0.5 + 0.5 * (i as f64 + 0.5) / 16.0);
                    f(k).abs() * k * k * k
                })
                .fold(0.0, f64::max);
            ad.evaluations += 16;
            c / (k_max * k_max)
        }
    };
    match run {
        Ok((value, error)) => Ok(QuadResult {
            value,
            error: error + tail_bound,
            evaluations: ad.evaluations,
            subdivisions: ad.subdivisions,
        }),
        Err(Error::Convergence {
            estimate,
            error,
            subdivisions,
        }) => Err(Error::Convergence {
            estimate,
            error: error + tail_bound,
            subdivisions,
        }),
        Err(e) => Err(e),
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn exponential_integral() {
        let r = integrate_radial(|k: f64| (-k).exp(), &spec()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "{r:?}");
        assert!((r.value - 1.0).abs() <= r.error);
    }

    #[test]
    fn rational_integral_with_slow_tail() {
        // antiderivative -1/(2(4+k²)) ⇒ ∫₀^∞ = 1/8
        let r = integrate_radial(|k: f64| k / (4.0 + k * k).powi(2), &spec()).unwrap();
        assert!((r.value - 0.125).abs() < 1e-10, "{r:?}");
        assert!((r.value - 0.125).abs() <= r.error);
    }

    #[test]
    fn truncated_tail_reports_bound() {
        let s = spec().with_tail(TailTreatment::Truncated);
        let r = integrate_radial(|k: f64| k / (4.0 + k * k).powi(2), &s).unwrap();
        let missing = 1.0 / (2.0 * (4.0 + 200.0f64 * 200.0));
        assert!((r.value - (0.125 - missing)).abs() < 1e-10);
        assert!((r.value - 0.125).abs() <= r.error);
    }

    #[test]
    fn oscillatory_finite_interval() {
        let r =
            integrate_interval(|x: f64| (50.0 * x).cos(), 0.0, 3.0, 1e-12, 1e-14, 1000).unwrap();
        assert!((r.value - (150.0f64).sin() / 50.0).abs() < 1e-12);
    }

    #[test]
    fn convergence_failure_carries_estimate() {
        let s = QuadratureSpec {
            max_subdivisions: 2,
            ..spec()
        };
        let err =
            integrate_radial(|k: f64| (k * 40.0).sin().abs() / (1.0 + k * k), &s).unwrap_err();
        match err {
            Error::Convergence {
                estimate, error, ..
            } => {
                assert!(estimate.is_finite() && error > 0.0)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_spec_rejected() {
        let s = QuadratureSpec {
            k_max: -1.0,
            ..spec()
        };
        assert!(integrate_radial(|k: f64| k, &s).is_err());
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let (x, w) = gauss_legendre(16);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((s - 2.0 / 31.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }
}
