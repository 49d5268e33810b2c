//! Deterministic line-of-sight air-to-ground channel.
//!
//! Arrays are uniform planar arrays of `n_x × n_y` elements. Element
//! `(ix, iy)` (zero based) sits at flat index `iy * n_x + ix`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::system::{Geometry, SystemParams};

/// Elevation `theta` and azimuth `phi` of a path, in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angles {
    pub theta: f64,
    pub phi: f64,
}

impl Angles {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }
}

/// `sqrt(gain)` times a unit-modulus steering vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelVector {
    pub entries: Vec<Complex64>,
    pub gain: f64,
}

impl ChannelVector {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Diagonal of the IRS reflection matrix, as phases in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseProfile {
    pub psi: Vec<f64>,
}

/// Unit-norm combiner `v` (first hop) and precoder `w` (second hop).
#[derive(Debug, Clone, PartialEq)]
pub struct Beamformers {
    pub v: Vec<Complex64>,
    pub w: Vec<Complex64>,
}

/// Inverse-square path gain `beta0 / d^2`.
pub fn path_gain(params: &SystemParams, distance_m: f64) -> Result<f64> {
    ensure_positive("distance", distance_m)?;
    Ok(params.beta0 / (distance_m * distance_m))
}

/// Phase progression (without the minus sign) of every element for a path.
fn element_phases(params: &SystemParams, ang: Angles) -> impl Iterator<Item = f64> + '_ {
    let k = 2.0 * PI * params.d_over_lambda * ang.theta.sin();
    let (sin_phi, cos_phi) = ang.phi.sin_cos();
    (0..params.n_y).flat_map(move |iy| {
        (0..params.n_x).map(move |ix| k * (f64::from(ix) * cos_phi + f64::from(iy) * sin_phi))
    })
}

pub fn steering_vector(params: &SystemParams, ang: Angles) -> Vec<Complex64> {
    element_phases(params, ang)
        .map(|phase| Complex64::from_polar(1.0, -phase))
        .collect()
}

pub fn channel_vector(params: &SystemParams, distance_m: f64, ang: Angles) -> Result<ChannelVector> {
    let gain = path_gain(params, distance_m)?;
    let amp = gain.sqrt();
    let entries = steering_vector(params, ang).into_iter().map(|a| a * amp).collect();
    Ok(ChannelVector { entries, gain })
}

/// Phases that co-phase every reflected path, so that
/// `|h_rd^H Ψ h_sr| = N sqrt(g_sr g_rd)`.
pub fn coherent_phase_profile(params: &SystemParams, ang_sr: Angles, ang_rd: Angles) -> PhaseProfile {
    let psi = element_phases(params, ang_sr)
        .zip(element_phases(params, ang_rd))
        .map(|(a, b)| a - b)
        .collect();
    PhaseProfile { psi }
}

/// `a^H b`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Composite reflected gain `h_rd^H Ψ h_sr`.
pub fn reflected_gain(h_rd: &ChannelVector, profile: &PhaseProfile, h_sr: &ChannelVector) -> Complex64 {
    h_rd.entries
        .iter()
        .zip(&profile.psi)
        .zip(&h_sr.entries)
        .map(|((r, &psi), s)| r.conj() * Complex64::from_polar(1.0, psi) * s)
        .sum()
}

/// Maximum-ratio combining on the first hop and transmission on the second.
pub fn mrt_mrc(h_sr: &ChannelVector, h_rd: &ChannelVector) -> Result<Beamformers> {
    Ok(Beamformers {
        v: normalized(&h_sr.entries)?,
        w: normalized(&h_rd.entries)?,
    })
}

fn normalized(h: &[Complex64]) -> Result<Vec<Complex64>> {
    let norm = h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::ZeroChannel);
    }
    Ok(h.iter().map(|z| z / norm).collect())
}

/// Angles of the two hops as seen from a horizontally mounted array on the
/// UAV.
///
/// `theta` is measured from the nadir (so a terminal directly below has
/// `theta = 0`) and `phi` is the ground-plane azimuth from the +x axis of the
/// direction pointing from the UAV towards the terminal.
pub fn angles_from_geometry(geom: &Geometry) -> Result<(Angles, Angles)> {
    for v in [geom.x_u, geom.y_u, geom.h_u, geom.l] {
        ensure_finite("coordinate", v)?;
    }
    let towards = |dx: f64, dy: f64| {
        let ground = dx.hypot(dy);
        Angles::new(ground.atan2(geom.h_u), dy.atan2(dx))
    };
    Ok((towards(-geom.x_u, -geom.y_u), towards(geom.l - geom.x_u, -geom.y_u)))
}

/// Channel vectors of both hops for the UAV position in `geom`.
pub fn hop_vectors(params: &SystemParams, geom: &Geometry) -> Result<(ChannelVector, ChannelVector)> {
    let (ang_sr, ang_rd) = angles_from_geometry(geom)?;
    Ok((
        channel_vector(params, geom.d_sr(), ang_sr)?,
        channel_vector(params, geom.d_rd(), ang_rd)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(n_x: u32, n_y: u32) -> SystemParams {
        SystemParams::default().with_array(n_x, n_y)
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn path_gain_examples() {
        let p = SystemParams::default();
        assert!(rel(path_gain(&p, 1.0).unwrap(), 1e-6) < 1e-15);
        assert!(rel(path_gain(&p, 100.0).unwrap(), 1e-10) < 1e-15);
        assert!(rel(path_gain(&p, 2e4f64.sqrt()).unwrap(), 5e-11) < 1e-14);
    }

    #[test]
    fn path_gain_rejects_collocated_uav() {
        let p = SystemParams::default();
        assert!(path_gain(&p, 0.0).is_err());
        assert!(path_gain(&p, -3.0).is_err());
        assert!(path_gain(&p, f64::NAN).is_err());
    }

    #[test]
    fn single_element_steering_is_one() {
        let a = steering_vector(&params(1, 1), Angles::new(0.7, 2.1));
        assert_eq!(a, vec![Complex64::new(1.0, 0.0)]);
    }

    #[test]
    fn broadside_steering_is_all_ones() {
        let a = steering_vector(&params(4, 3), Angles::new(0.0, 1.3));
        assert_eq!(a.len(), 12);
        assert!(a.iter().all(|z| *z == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn half_wavelength_endfire_pair() {
        let a = steering_vector(&params(2, 1), Angles::new(PI / 2.0, 0.0));
        assert_eq!(a[0], Complex64::new(1.0, 0.0));
        assert!((a[1] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn flattening_is_row_major_over_y() {
        // phi = pi/2 only advances along y, so entries n_x apart differ.
        let a = steering_vector(&params(3, 2), Angles::new(PI / 2.0, PI / 2.0));
        for ix in 0..3 {
            assert!((a[ix] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            assert!((a[3 + ix] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn channel_vector_examples() {
        let p = SystemParams { beta0: 1.0, ..params(2, 2) };
        let h = channel_vector(&p, 1.0, Angles::new(0.0, 0.0)).unwrap();
        assert!(h.entries.iter().all(|z| (*z - Complex64::new(1.0, 0.0)).norm() < 1e-15));

        let h = channel_vector(&params(2, 2), 100.0, Angles::new(0.0, 0.4)).unwrap();
        assert_eq!(h.len(), 4);
        for z in &h.entries {
            assert!(rel(z.re, 1e-5) < 1e-12 && z.im == 0.0);
        }
        assert!(rel(h.norm_sqr(), 4.0 * 1e-10) < 1e-12);
    }

    #[test]
    fn identical_hops_need_no_phase_shift() {
        let ang = Angles::new(0.9, -0.3);
        let prof = coherent_phase_profile(&params(5, 4), ang, ang);
        assert!(prof.psi.iter().all(|&p| p == 0.0));
    }

    #[test]
    fn single_element_composite_gain() {
        let p = params(1, 1);
        let (a, b) = (Angles::new(0.3, 0.2), Angles::new(1.2, -2.0));
        let h_sr = channel_vector(&p, 120.0, a).unwrap();
        let h_rd = channel_vector(&p, 80.0, b).unwrap();
        let prof = coherent_phase_profile(&p, a, b);
        assert_eq!(prof.psi.len(), 1);
        let got = reflected_gain(&h_rd, &prof, &h_sr).norm();
        assert!(rel(got, (h_sr.gain * h_rd.gain).sqrt()) < 1e-12);
    }

    #[test]
    fn mrt_mrc_matched_filter_gain() {
        let p = SystemParams { beta0: 1.0, ..params(2, 2) };
        let h_sr = channel_vector(&p, 1.0, Angles::new(0.5, 0.1)).unwrap();
        let h_rd = channel_vector(&p, 1.0, Angles::new(1.0, 2.0)).unwrap();
        let bf = mrt_mrc(&h_sr, &h_rd).unwrap();
        assert!(rel(inner(&bf.v, &h_sr.entries).norm_sqr(), 4.0) < 1e-12);
    }

    #[test]
    fn mrt_mrc_single_element_is_unit_phasor() {
        let p = params(1, 1);
        let h = channel_vector(&p, 10.0, Angles::new(0.0, 0.0)).unwrap();
        let bf = mrt_mrc(&h, &h).unwrap();
        assert!((bf.v[0].norm() - 1.0).abs() < 1e-15);
        assert!((bf.w[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mrt_mrc_sixteen_elements() {
        // 16 * 5e-11 evaluated through the inner product directly.
        let p = params(4, 4);
        let d = 2e4f64.sqrt();
        let h_sr = channel_vector(&p, d, Angles::new(0.83, -1.9)).unwrap();
        let h_rd = channel_vector(&p, d, Angles::new(2.2, 0.45)).unwrap();
        let bf = mrt_mrc(&h_sr, &h_rd).unwrap();
        assert!(rel(inner(&h_rd.entries, &bf.w).norm_sqr(), 8e-10) < 1e-10);
        assert!(rel(inner(&bf.v, &h_sr.entries).norm_sqr(), 8e-10) < 1e-10);
    }

    #[test]
    fn mrt_mrc_rejects_zero_channel() {
        let zero = ChannelVector {
            entries: vec![Complex64::new(0.0, 0.0); 3],
            gain: 0.0,
        };
        let p = params(3, 1);
        let ok = channel_vector(&p, 5.0, Angles::new(0.1, 0.1)).unwrap();
        assert_eq!(mrt_mrc(&zero, &ok), Err(Error::ZeroChannel));
        assert_eq!(mrt_mrc(&ok, &zero), Err(Error::ZeroChannel));
    }

    #[test]
    fn geometric_angles() {
        let g = Geometry::new(200.0, 100.0, 200.0).at(0.0, 0.0, 100.0);
        let (sr, rd) = angles_from_geometry(&g).unwrap();
        assert_eq!(sr.theta, 0.0);
        assert!((rd.theta - (2.0f64).atan()).abs() < 1e-15);
        assert_eq!(rd.phi, 0.0);
        let (vsr, vrd) = hop_vectors(&SystemParams::default().with_elements(9), &g).unwrap();
        assert!(rel(vsr.gain, 1e-10) < 1e-14);
        assert!(rel(vrd.gain, 1e-6 / 5e4) < 1e-14);
    }

    proptest! {
        #[test]
        fn steering_entries_have_unit_modulus(
            n_x in 1u32..16, n_y in 1u32..16,
            theta in -10.0f64..10.0, phi in -10.0f64..10.0,
        ) {
            let a = steering_vector(&params(n_x, n_y), Angles::new(theta, phi));
            prop_assert_eq!(a.len() as u32, n_x * n_y);
            prop_assert_eq!(a[0], Complex64::new(1.0, 0.0));
            for z in a {
                prop_assert!((z.norm() - 1.0).abs() < 1e-14);
            }
        }

        #[test]
        fn channel_norm_is_n_times_gain(
            n_x in 1u32..16, n_y in 1u32..16, d in 1.0f64..1e3,
            theta in -3.2f64..3.2, phi in -3.2f64..3.2,
        ) {
            let p = params(n_x, n_y);
            let h = channel_vector(&p, d, Angles::new(theta, phi)).unwrap();
            let amp = h.gain.sqrt();
            for z in &h.entries {
                prop_assert!(rel(z.norm(), amp) < 1e-12);
            }
            prop_assert!(rel(h.norm_sqr(), p.n_f64() * h.gain) < 1e-12);
        }

        #[test]
        fn coherent_profile_co_phases_all_paths(
            n_x in 1u32..17, n_y in 1u32..17,
            t1 in -3.2f64..3.2, p1 in -3.2f64..3.2,
            t2 in -3.2f64..3.2, p2 in -3.2f64..3.2,
            d1 in 1.0f64..500.0, d2 in 1.0f64..500.0,
        ) {
            let p = params(n_x, n_y);
            let (a, b) = (Angles::new(t1, p1), Angles::new(t2, p2));
            let h_sr = channel_vector(&p, d1, a).unwrap();
            let h_rd = channel_vector(&p, d2, b).unwrap();
            let prof = coherent_phase_profile(&p, a, b);
            prop_assert!(prof.psi.iter().all(|x| x.is_finite()));
            let want = p.n_f64() * (h_sr.gain * h_rd.gain).sqrt();
            prop_assert!(rel(reflected_gain(&h_rd, &prof, &h_sr).norm(), want) < 1e-10);
        }

        #[test]
        fn path_gain_strictly_decreasing(d in 1e-3f64..1e5, step in 1e-3f64..1e3) {
            let p = SystemParams::default();
            prop_assert!(path_gain(&p, d + step).unwrap() < path_gain(&p, d).unwrap());
        }

        #[test]
        fn beamformers_are_unit_norm(
            n in 1u32..64, t1 in -3.2f64..3.2, t2 in -3.2f64..3.2, d in 1.0f64..1e3,
        ) {
            let p = SystemParams::default().with_elements(n);
            let h_sr = channel_vector(&p, d, Angles::new(t1, 0.3)).unwrap();
            let h_rd = channel_vector(&p, d * 1.7, Angles::new(t2, -1.1)).unwrap();
            let bf = mrt_mrc(&h_sr, &h_rd).unwrap();
            let nv: f64 = bf.v.iter().map(|z| z.norm_sqr()).sum();
            let nw: f64 = bf.w.iter().map(|z| z.norm_sqr()).sum();
            prop_assert!((nv - 1.0).abs() < 1e-12 && (nw - 1.0).abs() < 1e-12);
            prop_assert!(rel(inner(&bf.v, &h_sr.entries).norm_sqr(), p.n_f64() * h_sr.gain) < 1e-10);
            prop_assert!(rel(inner(&h_rd.entries, &bf.w).norm_sqr(), p.n_f64() * h_rd.gain) < 1e-10);
        }
    }
}
