use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Guard on `|sin(omega t)|` below which a time counts as a caustic.
pub const CAUSTIC_GUARD: f64 = 1e-9;

/// `S = sin(omega t)/omega` and `C = cos(omega t)`, with `S = t`, `C = 1` at `omega = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeFactors {
    pub s: f64,
    pub c: f64,
}

impl TimeFactors {
    /// Valid for `0 < |omega t| < pi`; the trap-free case needs only `t != 0`.
    pub fn new(t: f64, omega: f64) -> Result<Self> {
        if !t.is_finite() || !omega.is_finite() || omega < 0.0 {
            return Err(Error::Domain(format!("invalid time t={t} or omega={omega}")));
        }
        if t == 0.0 {
            return Err(Error::Domain("t = 0: the propagator is a delta function".into()));
        }
        if omega == 0.0 {
            return Ok(Self { s: t, c: 1.0 });
        }
        let phase = omega * t;
        let sin = phase.sin();
        if sin.abs() < CAUSTIC_GUARD {
            return Err(Error::Caustic { t });
        }
        if phase.abs() >= PI {
            return Err(Error::OutsideWindow { t, omega });
        }
        Ok(Self { s: sin / omega, c: phase.cos() })
    }
}
