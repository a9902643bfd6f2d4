//! Log-normal shadowing: `P_r = P_f + X` with `P_f = P_J + K - 10 eta log10(d)`
//! and `X ~ Normal(0, sigma^2)` in dB.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distances below this are rejected; the model is singular at the transmitter.
pub const MIN_DISTANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadioParams {
    /// Jammer transmit power, dBm.
    pub jammer_power: f64,
    /// Antenna / attenuation constant, dB.
    pub antenna_constant: f64,
    pub path_loss_exponent: f64,
    /// Standard deviation of the shadowing term, dB.
    pub shadowing_sigma: f64,
    /// Sensor communication range, m. Sets the width of the boundary band.
    pub node_comm_range: f64,
}

impl Default for RadioParams {
    fn default() -> Self {
        Self {
            jammer_power: 0.0,
            antenna_constant: 0.0,
            path_loss_exponent: 2.0,
            shadowing_sigma: 0.0,
            node_comm_range: 10.0,
        }
    }
}

impl RadioParams {
    pub fn validate(&self) -> Result<()> {
        if !self.jammer_power.is_finite() || !self.antenna_constant.is_finite() {
            return Err(Error::config("jammer_power and antenna_constant must be finite"));
        }
        if !(self.path_loss_exponent > 0.0) || !self.path_loss_exponent.is_finite() {
            return Err(Error::config(format!(
                "path_loss_exponent must be > 0, got {}",
                self.path_loss_exponent
            )));
        }
        if !(self.shadowing_sigma >= 0.0) || !self.shadowing_sigma.is_finite() {
            return Err(Error::config(format!(
                "shadowing_sigma must be >= 0, got {}",
                self.shadowing_sigma
            )));
        }
        if !(self.node_comm_range > 0.0) || !self.node_comm_range.is_finite() {
            return Err(Error::config(format!(
                "node_comm_range must be > 0, got {}",
                self.node_comm_range
            )));
        }
        Ok(())
    }
}

/// One received-power draw. `received == deterministic + shadowing` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSample {
    pub deterministic: f64,
    pub shadowing: f64,
    pub received: f64,
}

fn check_distance(d: f64) -> Result<()> {
    if !(d > 0.0) {
        return Err(Error::NonPositiveDistance { distance: d });
    }
    if d < MIN_DISTANCE {
        return Err(Error::BelowMinimumDistance {
            distance: d,
            minimum: MIN_DISTANCE,
        });
    }
    Ok(())
}

/// Deterministic path-loss power at distance `d`, dBm.
pub fn path_loss_power(params: &RadioParams, d: f64) -> Result<f64> {
    check_distance(d)?;
    Ok(params.jammer_power + params.antenna_constant
        - 10.0 * params.path_loss_exponent * d.log10())
}

/// Path-loss power plus a shadowing draw from `rng`.
///
/// One standard-normal variate is consumed per call regardless of sigma, so
/// streams stay aligned across sigma settings. With sigma = 0 the shadowing
/// term is exactly zero.
pub fn received_power<R: Rng + ?Sized>(params: &RadioParams, d: f64, rng: &mut R) -> Result<PowerSample> {
    let deterministic = path_loss_power(params, d)?;
    let z: f64 = rng.sample(StandardNormal);
    let shadowing = if params.shadowing_sigma == 0.0 {
        0.0
    } else {
        params.shadowing_sigma * z
    };
    Ok(PowerSample {
        deterministic,
        shadowing,
        received: deterministic + shadowing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn free_space() -> RadioParams {
        RadioParams::default()
    }

    #[test]
    fn unit_distance_is_power_plus_constant() {
        let params = RadioParams {
            jammer_power: 17.0,
            antenna_constant: -3.5,
            ..free_space()
        };
        assert_eq!(path_loss_power(&params, 1.0).unwrap(), 13.5);
    }

    #[test]
    fn decade_slope_is_twenty_db() {
        let params = free_space();
        for d0 in [0.5, 1.0, 3.0, 7.25] {
            let near = path_loss_power(&params, d0).unwrap();
            let far = path_loss_power(&params, 10.0 * d0).unwrap();
            assert!((near - far - 20.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hand_value_at_hundred_meters() {
        assert_eq!(path_loss_power(&free_space(), 100.0).unwrap(), -40.0);
    }

    #[test]
    fn rejects_bad_distances() {
        let params = free_space();
        assert!(matches!(
            path_loss_power(&params, 0.0),
            Err(Error::NonPositiveDistance { .. })
        ));
        assert!(matches!(
            path_loss_power(&params, -1.0),
            Err(Error::NonPositiveDistance { .. })
        ));
        assert!(matches!(
            path_loss_power(&params, f64::NAN),
            Err(Error::NonPositiveDistance { .. })
        ));
        assert!(matches!(
            path_loss_power(&params, 0.005),
            Err(Error::BelowMinimumDistance { .. })
        ));
    }

    #[test]
    fn zero_sigma_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in [0.5, 12.0, 30.0, 99.0] {
            let s = received_power(&free_space(), d, &mut rng).unwrap();
            assert_eq!(s.shadowing, 0.0);
            assert_eq!(s.received, path_loss_power(&free_space(), d).unwrap());
        }
    }

    #[test]
    fn shadowing_moments() {
        let params = RadioParams {
            shadowing_sigma: 3.0,
            ..free_space()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 100_000;
        let draws: Vec<f64> = (0..n)
            .map(|_| received_power(&params, 25.0, &mut rng).unwrap().shadowing)
            .collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 0.05, "mean {mean}");
        assert!((var.sqrt() - 3.0).abs() < 0.1, "std {}", var.sqrt());
    }

    #[test]
    fn same_seed_same_sample() {
        let params = RadioParams {
            shadowing_sigma: 4.0,
            ..free_space()
        };
        let a = received_power(&params, 21.0, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b = received_power(&params, 21.0, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.received, a.deterministic + a.shadowing);
    }

    #[test]
    fn validate_rejects_bad_params() {
        assert!(free_space().validate().is_ok());
        for bad in [
            RadioParams { path_loss_exponent: 0.0, ..free_space() },
            RadioParams { shadowing_sigma: -1.0, ..free_space() },
            RadioParams { node_comm_range: 0.0, ..free_space() },
            RadioParams { jammer_power: f64::INFINITY, ..free_space() },
        ] {
            assert!(bad.validate().is_err());
        }
    }

    proptest! {
        #[test]
        fn strictly_decreasing(eta in 0.1..6.0f64, d in 0.01..500.0f64, step in 1e-6..100.0f64) {
            let params = RadioParams { path_loss_exponent: eta, ..free_space() };
            prop_assert!(path_loss_power(&params, d).unwrap() > path_loss_power(&params, d + step).unwrap());
        }

        #[test]
        fn power_shift_passes_through(c in -100.0..100.0f64, d in 0.01..500.0f64) {
            let base = free_space();
            let shifted = RadioParams { jammer_power: base.jammer_power + c, ..base };
            let diff = path_loss_power(&shifted, d).unwrap() - path_loss_power(&base, d).unwrap();
            prop_assert!((diff - c).abs() < 1e-12);
        }
    }
}
