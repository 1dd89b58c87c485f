//! Globally adaptive Gauss-Kronrod (10/21) quadrature for vector integrands.
//!
//! Every component carries its own tolerance, so a small entry of a tensor is
//! resolved to the same relative accuracy as a large one.

use crate::error::{Error, Result};

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

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Components smaller than this fraction of the largest one only need
/// absolute accuracy at that level.
const NOISE_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of bisections of any initial segment.
    pub max_depth: u32,
    pub max_intervals: usize,
}

impl QuadratureConfig {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 0.0,
            max_depth: 30,
            max_intervals: 5000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<const N: usize> {
    pub value: [f64; N],
    /// Absolute error estimate per component.
    pub error: [f64; N],
    pub evaluations: usize,
    pub intervals: usize,
}

#[derive(Debug, Clone)]
struct Interval<const N: usize> {
    a: f64,
    b: f64,
    depth: u32,
    value: [f64; N],
    error: [f64; N],
}

fn kronrod<const N: usize, F>(f: &mut F, a: f64, b: f64, depth: u32) -> Result<Interval<N>>
where
    F: FnMut(f64) -> Result<[f64; N]>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut k = [0.0; N];
    let mut g = [0.0; N];
    let mid = f(center)?;
    for c in 0..N {
        k[c] = WGK[10] * mid[c];
    }
    for j in 0..10 {
        let dx = half * XGK[j];
        let lo = f(center - dx)?;
        let hi = f(center + dx)?;
        for c in 0..N {
            let s = lo[c] + hi[c];
            k[c] += WGK[j] * s;
            if j % 2 == 1 {
                g[c] += WG[j / 2] * s;
            }
        }
    }
    let mut value = [0.0; N];
    let mut error = [0.0; N];
    for c in 0..N {
        value[c] = k[c] * half;
        error[c] = ((k[c] - g[c]) * half).abs();
        if !value[c].is_finite() {
            return Err(Error::NonConvergence {
                lower: a,
                upper: b,
                error: f64::INFINITY,
                intervals: 0,
            });
        }
    }
    Ok(Interval {
        a,
        b,
        depth,
        value,
        error,
    })
}

const EVALS_PER_RULE: usize = 21;

/// Integrates `f` over `[a, b]`.
pub fn integrate<const N: usize, F>(f: F, a: f64, b: f64, config: &QuadratureConfig) -> Result<Estimate<N>>
where
    F: FnMut(f64) -> Result<[f64; N]>,
{
    integrate_segments(f, &[a, b], config)
}

/// Integrates `f` over consecutive segments `[p0, p1], [p1, p2], ...`; the
/// interior points are never evaluated, so integrable endpoint singularities
/// and kinks belong there. All segments share one global error budget.
pub fn integrate_segments<const N: usize, F>(mut f: F, points: &[f64], config: &QuadratureConfig) -> Result<Estimate<N>>
where
    F: FnMut(f64) -> Result<[f64; N]>,
{
    assert!(points.len() >= 2, "need at least one segment");
    let mut intervals: Vec<Interval<N>> = Vec::new();
    for w in points.windows(2) {
        assert!(w[0] <= w[1], "segment endpoints must be increasing");
        if w[0] < w[1] {
            intervals.push(kronrod(&mut f, w[0], w[1], 0)?);
        }
    }
    let mut evaluations = intervals.len() * EVALS_PER_RULE;

    loop {
        let mut total = [0.0; N];
        let mut err = [0.0; N];
        for iv in &intervals {
            for c in 0..N {
                total[c] += iv.value[c];
                err[c] += iv.error[c];
            }
        }
        let scale = total.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut tol = [0.0; N];
        for c in 0..N {
            tol[c] = (config.rel_tol * total[c].abs())
                .max(config.abs_tol)
                .max(NOISE_FLOOR * scale)
                .max(f64::MIN_POSITIVE);
        }
        if (0..N).all(|c| err[c] <= tol[c]) {
            return Ok(Estimate {
                value: total,
                error: err,
                evaluations,
                intervals: intervals.len(),
            });
        }

        // Split the interval contributing most to the worst components.
        let mut worst = None;
        let mut worst_score = 0.0;
        for (i, iv) in intervals.iter().enumerate() {
            let score = (0..N)
                .filter(|&c| err[c] > tol[c])
                .map(|c| iv.error[c] / tol[c])
                .fold(0.0, f64::max);
            let splittable = iv.depth < config.max_depth && 0.5 * (iv.a + iv.b) > iv.a && 0.5 * (iv.a + iv.b) < iv.b;
            if splittable && score > worst_score {
                worst_score = score;
                worst = Some(i);
            }
        }
        let failed = |intervals: &Vec<Interval<N>>| {
            let (lower, upper) = (points[0], points[points.len() - 1]);
            let error = (0..N).map(|c| err[c]).fold(0.0, f64::max);
            Error::NonConvergence {
                lower,
                upper,
                error,
                intervals: intervals.len(),
            }
        };
        let Some(i) = worst else {
            return Err(failed(&intervals));
        };
        if intervals.len() >= config.max_intervals {
            return Err(failed(&intervals));
        }
        let iv = intervals.swap_remove(i);
        let mid = 0.5 * (iv.a + iv.b);
        intervals.push(kronrod(&mut f, iv.a, mid, iv.depth + 1)?);
        intervals.push(kronrod(&mut f, mid, iv.b, iv.depth + 1)?);
        evaluations += 2 * EVALS_PER_RULE;
    }
}
