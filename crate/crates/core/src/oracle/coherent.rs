use crate::channel::{self, Angles};
use crate::system::SystemParams;

/// Relative error of `|h_rd^H Ψ h_sr|` against `N √(g_sr g_rd)` for the
/// coherent phase profile, built from raw unit-gain steering vectors.
pub fn verify_coherent(params: &SystemParams, ang_sr: Angles, ang_rd: Angles) -> f64 {
    let h_sr = channel::ChannelVector {
        entries: channel::steering_vector(params, ang_sr),
        gain: 1.0,
    };
    let h_rd = channel::ChannelVector {
        entries: channel::steering_vector(params, ang_rd),
        gain: 1.0,
    };
    let profile = channel::coherent_phase_profile(params, ang_sr, ang_rd);
    let got = channel::reflected_gain(&h_rd, &profile, &h_sr).norm();
    let want = params.n_f64();
    (got - want).abs() / want
}
