use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::geometry::NodePosition;
use crate::error::{Error, Result};

/// Thermal noise density at room temperature, dBm/Hz.
const THERMAL_NOISE_DBM_HZ: f64 = -174.0;

/// Radio parameters shared by both BSSs. Powers in dBm, gains and losses in dB.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkBudgetConfig {
    pub carrier_frequency_ghz: f64,
    pub channel_width_mhz: f64,
    pub ap_tx_power_dbm: f64,
    pub sta_tx_power_dbm: f64,
    pub noise_figure_db: f64,
    /// A pair is PSR-favorable only if the expected SINR is strictly above this.
    pub sinr_threshold_db: f64,
    pub psr_safety_margin_db: f64,
    pub wall_loss_db: f64,
    /// SINR an uplink of the given MCS needs to be decoded.
    pub required_sinr_db: BTreeMap<u8, f64>,
}

impl Default for LinkBudgetConfig {
    fn default() -> Self {
        Self {
            carrier_frequency_ghz: 5.0,
            channel_width_mhz: 20.0,
            ap_tx_power_dbm: 20.0,
            sta_tx_power_dbm: 15.0,
            noise_figure_db: 7.0,
            sinr_threshold_db: 3.0,
            psr_safety_margin_db: 1.0,
            wall_loss_db: 5.0,
            required_sinr_db: BTreeMap::from([(0, 3.0), (8, 29.0)]),
        }
    }
}

impl LinkBudgetConfig {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.carrier_frequency_ghz,
            self.channel_width_mhz,
            self.ap_tx_power_dbm,
            self.sta_tx_power_dbm,
            self.noise_figure_db,
            self.sinr_threshold_db,
            self.psr_safety_margin_db,
            self.wall_loss_db,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::config("radio parameters must be finite"));
        }
        if self.channel_width_mhz <= 0.0 {
            return Err(Error::config("channel_width_mhz must be positive"));
        }
        if self.carrier_frequency_ghz <= 0.0 {
            return Err(Error::config("carrier_frequency_ghz must be positive"));
        }
        if self.psr_safety_margin_db < 0.0 {
            return Err(Error::config("psr_safety_margin_db must not be negative"));
        }
        if self.wall_loss_db < 0.0 {
            return Err(Error::config("wall_loss_db must not be negative"));
        }
        if let Some((mcs, _)) = self.required_sinr_db.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::config(format!("required SINR of MCS {mcs} is not finite")));
        }
        Ok(())
    }

    pub fn required_sinr(&self, mcs: u8) -> Result<f64> {
        self.required_sinr_db
            .get(&mcs)
            .copied()
            .ok_or_else(|| Error::config(format!("no required SINR configured for MCS {mcs}")))
    }
}

/// Residential indoor pathloss with a 5 m breakpoint, single floor:
///
/// `40.05 + 20 log10(f/2.4) + 20 log10(min(d, 5)) + [d > 5] 35 log10(d/5) + walls * wall_loss`
pub fn pathloss_db(a: &NodePosition, b: &NodePosition, walls: u32, cfg: &LinkBudgetConfig) -> Result<f64> {
    let d = a.distance_to(b);
    if !d.is_finite() || d <= 0.0 {
        return Err(Error::invalid(format!(
            "pathloss between {a:?} and {b:?}: distance must be positive"
        )));
    }
    let mut pl = 40.05 + 20.0 * (cfg.carrier_frequency_ghz / 2.4).log10() + 20.0 * d.min(5.0).log10();
    if d > 5.0 {
        pl += 35.0 * (d / 5.0).log10();
    }
    Ok(pl + f64::from(walls) * cfg.wall_loss_db)
}

/// Largest transmit power a PSR transmission may use.
///
/// The trigger frame advertises the AP's transmit power plus the interference
/// its uplink tolerates; the station subtracts the RSSI it measured for that
/// frame and the safety margin, and never exceeds its own maximum power.
pub fn psr_max_tx_power(tf_rssi_dbm: f64, ap_tx_dbm: f64, accept_interference_dbm: f64, cfg: &LinkBudgetConfig) -> f64 {
    let restricted = ap_tx_dbm + accept_interference_dbm - tf_rssi_dbm - cfg.psr_safety_margin_db;
    restricted.min(cfg.sta_tx_power_dbm)
}

/// Interference a trigger-based uplink received at `uplink_rx_dbm` with the
/// given MCS tolerates.
pub fn accept_interference_dbm(uplink_rx_dbm: f64, mcs: u8, cfg: &LinkBudgetConfig) -> Result<f64> {
    Ok(uplink_rx_dbm - cfg.required_sinr(mcs)? - cfg.psr_safety_margin_db)
}

pub fn noise_floor_dbm(cfg: &LinkBudgetConfig) -> f64 {
    THERMAL_NOISE_DBM_HZ + 10.0 * (cfg.channel_width_mhz * 1e6).log10() + cfg.noise_figure_db
}

/// Sum of two powers given in dBm.
pub fn power_sum_dbm(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    let lo = a.min(b);
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + 10.0 * (1.0 + 10f64.powf((lo - hi) / 10.0)).log10()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn at(x: f64) -> NodePosition {
        NodePosition::new(x, 0.0)
    }

    #[test]
    fn pathloss_examples() {
        let cfg = LinkBudgetConfig::default();
        let pl = pathloss_db(&at(0.0), &at(5.0), 0, &cfg).unwrap();
        let expected = 40.05 + 20.0 * (5.0f64 / 2.4).log10() + 20.0 * 5f64.log10();
        assert_abs_diff_eq!(pl, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(pl, 60.40, epsilon = 0.005);

        let cfg24 = LinkBudgetConfig {
            carrier_frequency_ghz: 2.4,
            ..LinkBudgetConfig::default()
        };
        assert_abs_diff_eq!(
            pathloss_db(&at(0.0), &at(1.0), 0, &cfg24).unwrap(),
            40.05,
            epsilon = 1e-12
        );

        let pl = pathloss_db(&at(0.0), &at(10.0), 2, &cfg).unwrap();
        assert_abs_diff_eq!(pl, expected + 35.0 * 2f64.log10() + 10.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pl, 80.94, epsilon = 0.005);

        assert!(matches!(
            pathloss_db(&at(1.0), &at(1.0), 0, &cfg),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn psr_power_examples() {
        let cfg = LinkBudgetConfig::default();
        assert_abs_diff_eq!(psr_max_tx_power(-60.0, 20.0, -82.0, &cfg), -3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(psr_max_tx_power(-100.0, 20.0, -60.0, &cfg), 15.0);
        let cfg0 = LinkBudgetConfig {
            psr_safety_margin_db: 0.0,
            ..LinkBudgetConfig::default()
        };
        assert_abs_diff_eq!(psr_max_tx_power(-62.0, 20.0, -82.0, &cfg0), 0.0);
    }

    #[test]
    fn accept_interference_examples() {
        let cfg = LinkBudgetConfig::default();
        assert_abs_diff_eq!(accept_interference_dbm(-55.0, 8, &cfg).unwrap(), -85.0);
        let cfg0 = LinkBudgetConfig {
            psr_safety_margin_db: 0.0,
            required_sinr_db: BTreeMap::from([(3, 0.0)]),
            ..LinkBudgetConfig::default()
        };
        assert_abs_diff_eq!(accept_interference_dbm(-61.5, 3, &cfg0).unwrap(), -61.5);
        assert!(accept_interference_dbm(-60.0, 5, &cfg).is_err());
        assert!(accept_interference_dbm(-70.0, 8, &cfg).unwrap() < accept_interference_dbm(-69.0, 8, &cfg).unwrap());
    }

    #[test]
    fn noise_floor_example() {
        let cfg = LinkBudgetConfig::default();
        assert_abs_diff_eq!(
            noise_floor_dbm(&cfg),
            -174.0 + 10.0 * 2e7f64.log10() + 7.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(noise_floor_dbm(&cfg), -93.99, epsilon = 0.005);
    }

    #[test]
    fn power_sum() {
        assert_abs_diff_eq!(
            power_sum_dbm(-90.0, -90.0),
            -90.0 + 10.0 * 2f64.log10(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(power_sum_dbm(-90.0, f64::NEG_INFINITY), -90.0);
        assert_abs_diff_eq!(power_sum_dbm(-90.0, -130.0), -90.0, epsilon = 0.001);
    }

    #[test]
    fn validation() {
        assert!(LinkBudgetConfig::default().validate().is_ok());
        let bad = LinkBudgetConfig {
            channel_width_mhz: 0.0,
            ..LinkBudgetConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = LinkBudgetConfig {
            psr_safety_margin_db: -1.0,
            ..LinkBudgetConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = LinkBudgetConfig {
            sinr_threshold_db: f64::NAN,
            ..LinkBudgetConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
