//! Sample-level AF rate.
//!
//! Each sample draws the self-interference replica `ỹ ~ CN(0, I_N)`, the
//! relay noise `n_R ~ CN(0, σ² I_N)` and the destination noise
//! `n_D ~ CN(0, σ²)`, pushes them through MRC/MRT and averages
//! `log2(1 + p_r p_s |a b|² / (ρ p_r² |a|² |vᴴỹ|² + p_r |a|² |vᴴn_R|² + |n_D|²))`
//! with `a = h_rdᴴ w` and `b = vᴴ h_sr`.
//!
//! Draws come from ChaCha8 seeded with `seed`. Samples are split into fixed
//! chunks of [`CHUNK`]; chunk `c` uses stream `c` of that seed and partial
//! sums are merged in chunk order, so the estimate is bit-identical for any
//! execution mode or thread count.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::channel::{self, ChannelVector};
use crate::error::{ensure_finite, Error, Result};
use crate::par::{self, Execution};
use crate::rate::log2_1p;
use crate::system::{Geometry, SystemParams};

pub const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseModel {
    /// Independent circularly-symmetric Gaussian draws.
    #[default]
    Gaussian,
    /// Every `|·|²` noise term replaced by its mean. Deterministic; the
    /// estimate then equals the closed-form AF rate.
    MeanPower,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    pub noise: NoiseModel,
    pub exec: Execution,
}

impl McConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            noise: NoiseModel::Gaussian,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    /// bits/s/Hz.
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if o.n == 0.0 {
            return self;
        }
        if self.n == 0.0 {
            return o;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * o.n / n,
            m2: self.m2 + o.m2 + d * d * self.n * o.n / n,
        }
    }
}

fn cn(rng: &mut ChaCha8Rng, std: f64) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * (std * std::f64::consts::FRAC_1_SQRT_2)
}

/// Monte-Carlo AF rate for explicit channel vectors.
pub fn mc_rate_af(
    params: &SystemParams,
    h_sr: &ChannelVector,
    h_rd: &ChannelVector,
    p_s: f64,
    p_r: f64,
    cfg: &McConfig,
) -> Result<McEstimate> {
    if cfg.samples == 0 {
        return Err(Error::OutOfRange {
            what: "samples",
            value: 0.0,
            allowed: ">= 1",
        });
    }
    if h_sr.len() != h_rd.len() {
        return Err(Error::Invariant(format!(
            "hop vectors differ in length ({} vs {})",
            h_sr.len(),
            h_rd.len()
        )));
    }
    for (what, v) in [("p_s", p_s), ("p_r", p_r)] {
        ensure_finite(what, v)?;
        if v < 0.0 {
            return Err(Error::OutOfRange { what, value: v, allowed: ">= 0" });
        }
    }

    let bf = channel::mrt_mrc(h_sr, h_rd)?;
    let a2 = channel::inner(&h_rd.entries, &bf.w).norm_sqr();
    let b2 = channel::inner(&bf.v, &h_sr.entries).norm_sqr();
    let signal = p_r * p_s * a2 * b2;
    let si = params.rho * p_r * p_r * a2;
    let fwd = p_r * a2;
    let sigma2 = params.sigma2;
    let sigma = sigma2.sqrt();
    let n = h_sr.len();

    let sample = |rng: &mut ChaCha8Rng, y: &mut [Complex64], nr: &mut [Complex64]| -> f64 {
        let (yi, ni, nd) = match cfg.noise {
            NoiseModel::MeanPower => (1.0, sigma2, sigma2),
            NoiseModel::Gaussian => {
                for z in y.iter_mut() {
                    *z = cn(rng, 1.0);
                }
                for z in nr.iter_mut() {
                    *z = cn(rng, sigma);
                }
                let nd = cn(rng, sigma).norm_sqr();
                (
                    channel::inner(&bf.v, y).norm_sqr(),
                    channel::inner(&bf.v, nr).norm_sqr(),
                    nd,
                )
            }
        };
        log2_1p(signal / (si * yi + fwd * ni + nd))
    };

    let chunks = cfg.samples.div_ceil(CHUNK);
    let partials = par::map_range(cfg.exec, chunks, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(c as u64);
        let mut y = vec![Complex64::default(); n];
        let mut nr = vec![Complex64::default(); n];
        let len = CHUNK.min(cfg.samples - c * CHUNK);
        let mut m = Moments::default();
        for _ in 0..len {
            m.push(sample(&mut rng, &mut y, &mut nr));
        }
        m
    });
    let m = partials.into_iter().fold(Moments::default(), Moments::merge);

    let std_error = if cfg.samples > 1 {
        (m.m2 / (m.n - 1.0)).max(0.0).sqrt() / m.n.sqrt()
    } else {
        0.0
    };
    Ok(McEstimate {
        mean: m.mean,
        std_error,
        samples: cfg.samples,
    })
}

/// [`mc_rate_af`] with channel vectors built from the UAV position.
pub fn mc_rate_af_at(params: &SystemParams, geom: &Geometry, p_s: f64, p_r: f64, cfg: &McConfig) -> Result<McEstimate> {
    let (h_sr, h_rd) = channel::hop_vectors(params, geom)?;
    mc_rate_af(params, &h_sr, &h_rd, p_s, p_r, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rate::{self, HopGains};

    fn setup(n: u32) -> (SystemParams, Geometry) {
        (SystemParams::default().with_elements(n), Geometry::new(200.0, 100.0, 100.0).at(60.0, 0.0, 100.0))
    }

    #[test]
    fn mean_power_reproduces_closed_form() {
        for n in [1, 4, 16, 64] {
            let (p, geom) = setup(n);
            for rho in [0.0, 1e-11] {
                let p = p.with_rho(rho);
                let cfg = McConfig { noise: NoiseModel::MeanPower, ..McConfig::new(1000, 1) };
                let est = mc_rate_af_at(&p, &geom, 0.5, 0.02, &cfg).unwrap();
                let g = HopGains::from_geometry(&p, &geom).unwrap();
                let cf = rate::rate_af(&p, g, 0.5, 0.02);
                assert!((est.mean - cf).abs() <= 1e-9 * cf, "N={n}: {} vs {cf}", est.mean);
                assert!(est.std_error < 1e-9);
            }
        }
    }

    #[test]
    fn seeded_runs_are_bit_identical() {
        let (p, geom) = setup(8);
        let mut cfg = McConfig::new(3 * CHUNK + 17, 99);
        cfg.exec = Execution::Sequential;
        let a = mc_rate_af_at(&p, &geom, 1.0, 0.1, &cfg).unwrap();
        cfg.exec = Execution::Parallel;
        let b = mc_rate_af_at(&p, &geom, 1.0, 0.1, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, mc_rate_af_at(&p, &geom, 1.0, 0.1, &cfg).unwrap());
        cfg.seed = 100;
        assert_ne!(a.mean, mc_rate_af_at(&p, &geom, 1.0, 0.1, &cfg).unwrap().mean);
    }

    #[test]
    fn estimate_is_not_below_closed_form() {
        // log2(1 + S/T) is convex in T, so averaging over the noise can only
        // raise the rate above the value at the mean noise power.
        let (p, geom) = setup(16);
        let g = HopGains::from_geometry(&p, &geom).unwrap();
        for (p_s, p_r) in [(0.1, 0.1), (10.0, 100.0), (1e-3, 1e-4)] {
            let est = mc_rate_af_at(&p, &geom, p_s, p_r, &McConfig::new(20_000, 5)).unwrap();
            let cf = rate::rate_af(&p, g, p_s, p_r);
            assert!(est.mean >= cf - 3.0 * est.std_error, "{} < {cf}", est.mean);
        }
    }

    #[test]
    fn single_antenna_gap_is_small() {
        let (p, geom) = setup(1);
        let g = HopGains::from_geometry(&p, &geom).unwrap();
        let est = mc_rate_af_at(&p, &geom, 0.1, 0.1, &McConfig::new(100_000, 3)).unwrap();
        let gap = (est.mean - rate::rate_af(&p, g, 0.1, 0.1)).abs();
        assert!(gap < 0.2, "gap {gap}");
    }

    #[test]
    fn moments_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let merged = xs.chunks(77).fold(Moments::default(), |acc, c| {
            let mut m = Moments::default();
            c.iter().for_each(|&x| m.push(x));
            acc.merge(m)
        });
        assert!((whole.mean - merged.mean).abs() < 1e-12);
        assert!((whole.m2 - merged.m2).abs() < 1e-9 * whole.m2);
    }

    #[test]
    fn bad_inputs_rejected() {
        let (p, geom) = setup(2);
        assert!(mc_rate_af_at(&p, &geom, 1.0, 1.0, &McConfig::new(0, 1)).is_err());
        assert!(mc_rate_af_at(&p, &geom, -1.0, 1.0, &McConfig::new(10, 1)).is_err());
        let (h_sr, _) = channel::hop_vectors(&p, &geom).unwrap();
        let (_, h_rd) = channel::hop_vectors(&SystemParams::default(), &geom).unwrap();
        assert!(mc_rate_af(&p, &h_sr, &h_rd, 1.0, 1.0, &McConfig::new(10, 1)).is_err());
    }
}
