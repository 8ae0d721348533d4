use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Interpolation curve `s(tau)` on `[0, 1]` with `s(0) = 0`, `s(1) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SCurve {
    Linear,
    /// `3 tau^2 - 2 tau^3`, slow at both ends.
    Smoothstep,
    /// `sin^2(pi tau / 2)`.
    SineSquared,
}

impl SCurve {
    pub fn eval(self, tau: f64) -> f64 {
        let tau = tau.clamp(0.0, 1.0);
        match self {
            SCurve::Linear => tau,
            SCurve::Smoothstep => tau * tau * (3.0 - 2.0 * tau),
            SCurve::SineSquared => (std::f64::consts::FRAC_PI_2 * tau).sin().powi(2),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ScheduleFamily {
    /// `A = B = 1` throughout: quantum-walk search.
    QwConstant,
    /// `A = 1 - t/t_f`, `B = t/t_f`.
    AdiabaticLinear,
    /// `A = 1 - s(t/t_f)`, `B = s(t/t_f)`.
    AdiabaticGeneral { curve: SCurve },
    /// Linear `s` plus a bump `mix * 4 s (1 - s)` added to both weights,
    /// clipped to `[0, 1]`. `mix = 0` is the linear adiabatic schedule.
    HybridParametric { mix: f64 },
}

/// Weight functions `(A(t), B(t))` on `[0, t_f]` for `A H_walk + B H_problem`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    t_final: f64,
    family: ScheduleFamily,
}

impl Schedule {
    pub fn new(t_final: f64, family: ScheduleFamily) -> Result<Self> {
        if !(t_final > 0.0 && t_final.is_finite()) {
            return Err(invalid(format!(
                "schedule duration must be positive, got {t_final}"
            )));
        }
        if let ScheduleFamily::HybridParametric { mix } = family {
            if !(0.0..=1.0).contains(&mix) {
                return Err(invalid(format!("hybrid mix must lie in [0, 1], got {mix}")));
            }
        }
        let sched = Schedule { t_final, family };
        sched.validate()?;
        Ok(sched)
    }

    pub fn qw_constant(t_final: f64) -> Result<Self> {
        Self::new(t_final, ScheduleFamily::QwConstant)
    }

    pub fn adiabatic_linear(t_final: f64) -> Result<Self> {
        Self::new(t_final, ScheduleFamily::AdiabaticLinear)
    }

    pub fn adiabatic(t_final: f64, curve: SCurve) -> Result<Self> {
        Self::new(t_final, ScheduleFamily::AdiabaticGeneral { curve })
    }

    pub fn hybrid(t_final: f64, mix: f64) -> Result<Self> {
        Self::new(t_final, ScheduleFamily::HybridParametric { mix })
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn family(&self) -> ScheduleFamily {
        self.family
    }

    pub fn tag(&self) -> &'static str {
        match self.family {
            ScheduleFamily::QwConstant => "qw_constant",
            ScheduleFamily::AdiabaticLinear => "adiabatic_linear",
            ScheduleFamily::AdiabaticGeneral { .. } => "adiabatic_general_s",
            ScheduleFamily::HybridParametric { .. } => "hybrid_parametric",
        }
    }

    /// Whether the family must satisfy `A(t_f) = B(0) = 0`, `A(0) = B(t_f) = 1`.
    pub fn has_endpoint_constraints(&self) -> bool {
        !matches!(self.family, ScheduleFamily::QwConstant)
    }

    /// `(A(t), B(t))`; `t` is clamped to `[0, t_f]`.
    pub fn weights(&self, t: f64) -> (f64, f64) {
        let tau = (t / self.t_final).clamp(0.0, 1.0);
        match self.family {
            ScheduleFamily::QwConstant => (1.0, 1.0),
            ScheduleFamily::AdiabaticLinear => (1.0 - tau, tau),
            ScheduleFamily::AdiabaticGeneral { curve } => {
                let s = curve.eval(tau);
                (1.0 - s, s)
            }
            ScheduleFamily::HybridParametric { mix } => {
                let bump = mix * 4.0 * tau * (1.0 - tau);
                (
                    (1.0 - tau + bump).clamp(0.0, 1.0),
                    (tau + bump).clamp(0.0, 1.0),
                )
            }
        }
    }

    /// Largest `A` and `B` over a fine sampling of the schedule.
    pub fn max_weights(&self) -> (f64, f64) {
        const SAMPLES: usize = 1024;
        (0..=SAMPLES)
            .map(|k| self.weights(self.t_final * k as f64 / SAMPLES as f64))
            .fold((0.0f64, 0.0f64), |(a, b), (x, y)| (a.max(x), b.max(y)))
    }

    fn validate(&self) -> Result<()> {
        const SAMPLES: usize = 1024;
        for k in 0..=SAMPLES {
            let (a, b) = self.weights(self.t_final * k as f64 / SAMPLES as f64);
            if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
                return Err(invalid(format!("schedule weights ({a}, {b}) leave [0, 1]")));
            }
        }
        if self.has_endpoint_constraints() {
            let (a0, b0) = self.weights(0.0);
            let (a1, b1) = self.weights(self.t_final);
            if a0 != 1.0 || b0 != 0.0 || a1 != 0.0 || b1 != 1.0 {
                return Err(invalid("schedule violates endpoint constraints"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_exact() {
        let scheds = [
            Schedule::adiabatic_linear(3.0).unwrap(),
            Schedule::adiabatic(3.0, SCurve::Smoothstep).unwrap(),
            Schedule::adiabatic(3.0, SCurve::SineSquared).unwrap(),
            Schedule::hybrid(3.0, 0.0).unwrap(),
            Schedule::hybrid(3.0, 0.7).unwrap(),
            Schedule::hybrid(3.0, 1.0).unwrap(),
        ];
        for s in scheds {
            assert_eq!(s.weights(0.0), (1.0, 0.0), "{}", s.tag());
            assert_eq!(s.weights(3.0), (0.0, 1.0), "{}", s.tag());
        }
    }

    #[test]
    fn constant_family_is_flat() {
        let s = Schedule::qw_constant(2.0).unwrap();
        for k in 0..=10 {
            assert_eq!(s.weights(0.2 * k as f64), (1.0, 1.0));
        }
        assert!(!s.has_endpoint_constraints());
    }

    #[test]
    fn hybrid_zero_mix_is_linear() {
        let h = Schedule::hybrid(5.0, 0.0).unwrap();
        let l = Schedule::adiabatic_linear(5.0).unwrap();
        for k in 0..=50 {
            let t = 0.1 * k as f64;
            assert_eq!(h.weights(t), l.weights(t));
        }
    }

    #[test]
    fn hybrid_weights_clipped() {
        let h = Schedule::hybrid(1.0, 1.0).unwrap();
        let (a, b) = h.weights(0.5);
        assert_eq!((a, b), (1.0, 1.0));
        assert_eq!(h.max_weights(), (1.0, 1.0));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Schedule::adiabatic_linear(0.0).is_err());
        assert!(Schedule::adiabatic_linear(f64::NAN).is_err());
        assert!(Schedule::hybrid(1.0, 1.5).is_err());
        assert!(Schedule::hybrid(1.0, -0.1).is_err());
    }
}
