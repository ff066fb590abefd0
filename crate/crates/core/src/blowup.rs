//! Blow-up reports shared by the PDE solver and the singular-solution integrator.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlowupTrigger {
    DtUnderflow,
    DensityCap,
    GradientCap,
    /// `|alpha|` of the singular solution crossed its threshold.
    AlphaThreshold,
    /// The pressure slope `s` of the singular solution crossed its threshold.
    PressureSlopeThreshold,
}

/// Outcome of blow-up monitoring. Serialises to
/// `{detected, trigger, t_detect, t_lo, t_hi}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlowupReport {
    pub detected: bool,
    pub trigger: Option<BlowupTrigger>,
    pub t_detect: Option<f64>,
    pub t_lo: Option<f64>,
    pub t_hi: Option<f64>,
}

impl BlowupReport {
    pub fn none() -> Self {
        BlowupReport::default()
    }

    pub fn detected(trigger: BlowupTrigger, t_detect: f64, t_lo: f64, t_hi: f64) -> Self {
        debug_assert!(t_lo <= t_hi && t_detect <= t_hi);
        BlowupReport {
            detected: true,
            trigger: Some(trigger),
            t_detect: Some(t_detect),
            t_lo: Some(t_lo),
            t_hi: Some(t_hi),
        }
    }

    pub fn interval(&self) -> Option<(f64, f64)> {
        Some((self.t_lo?, self.t_hi?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let r = BlowupReport::detected(BlowupTrigger::GradientCap, 1.5, 1.4, 1.5);
        let v: serde_json::Value = serde_json::to_value(r).unwrap();
        assert_eq!(v["trigger"], "gradient_cap");
        assert_eq!(v["detected"], true);
        assert_eq!(v["t_lo"], 1.4);
        let back: BlowupReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
        let none = serde_json::to_value(BlowupReport::none()).unwrap();
        assert_eq!(none["detected"], false);
        assert!(none["trigger"].is_null());
    }
}
