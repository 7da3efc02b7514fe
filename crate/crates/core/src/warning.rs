use std::fmt;

/// Regime-of-validity flags attached to results. They never abort a
/// computation, so sweeps can cross validity boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Warning {
    /// Effective linewidth is not small compared with kappa.
    LinewidthNotSmallVsKappa,
    /// Effective linewidth is not small compared with the effective frequency.
    LinewidthNotSmallVsFrequency,
    /// More than one optical-spring fixed point exists.
    MultipleSpringFixedPoints,
    /// Lower normal mode is not well above the cavity linewidth.
    LowerNormalModeUnresolved,
    /// Normal modes are not well separated compared with their linewidths.
    NormalModesOverlap,
    /// kappa, G_o or G_m is not small compared with the mechanical frequency.
    RwaRegimeViolated,
    /// Optomechanical cooperativity is not large.
    LowCooperativity,
    /// G_o^2 is not large compared with G_m^2 gamma_tot / kappa.
    WeakDarkCoupling,
}

impl Warning {
    pub fn code(&self) -> &'static str {
        match self {
            Warning::LinewidthNotSmallVsKappa => "linewidth_vs_kappa",
            Warning::LinewidthNotSmallVsFrequency => "linewidth_vs_frequency",
            Warning::MultipleSpringFixedPoints => "multiple_spring_fixed_points",
            Warning::LowerNormalModeUnresolved => "lower_mode_unresolved",
            Warning::NormalModesOverlap => "normal_modes_overlap",
            Warning::RwaRegimeViolated => "rwa_regime",
            Warning::LowCooperativity => "low_cooperativity",
            Warning::WeakDarkCoupling => "weak_dark_coupling",
        }
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Ratio above which a nominally "much smaller" quantity triggers a warning.
pub(crate) const MUCH_SMALLER: f64 = 0.1;
