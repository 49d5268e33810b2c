//! Decibel helpers. Only configuration front-ends should need these; every
//! model in this crate takes linear quantities.

use crate::error::{ensure_finite, ensure_positive, Result};

/// `10^(x/10)`.
pub fn db_to_linear(x_db: f64) -> Result<f64> {
    ensure_finite("dB value", x_db)?;
    Ok(10f64.powf(x_db / 10.0))
}

pub fn linear_to_db(x: f64) -> Result<f64> {
    ensure_positive("linear ratio", x)?;
    Ok(10.0 * x.log10())
}

/// `10^((x-30)/10)` watts.
pub fn dbm_to_watts(x_dbm: f64) -> Result<f64> {
    ensure_finite("dBm value", x_dbm)?;
    Ok(10f64.powf((x_dbm - 30.0) / 10.0))
}

pub fn watts_to_dbm(watts: f64) -> Result<f64> {
    ensure_positive("power in watts", watts)?;
    Ok(10.0 * watts.log10() + 30.0)
}
