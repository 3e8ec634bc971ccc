//! Scenario configs and the built-in example states.

use std::path::Path;

use cvrealign_core::criteria::CriterionId;
use cvrealign_core::filtration::{FilterKind, FilterTemplate, Subsystem};
use cvrealign_core::gaussian::{
    additive_noise, apply_symplectic, validate_with, BipartiteSplit, CovarianceMatrix, NormalForm,
    SymplecticTransform,
};
use cvrealign_core::io::CovarianceJson;
use cvrealign_core::tolerances;
use serde::Deserialize;

use crate::error::CliError;

/// Parameters of a built-in state. Unset values take the built-in defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub r: Option<f64>,
    #[serde(rename = "V")]
    pub v: Option<f64>,
    pub tau: Option<f64>,
    pub theta: Option<f64>,
}

impl Params {
    /// `self` with the values set in `over` replacing its own.
    pub fn overridden_by(self, over: Params) -> Params {
        Params {
            r: over.r.or(self.r),
            v: over.v.or(self.v),
            tau: over.tau.or(self.tau),
            theta: over.theta.or(self.theta),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Builtin {
        name: String,
        #[serde(default)]
        params: Params,
    },
    Covariance(CovarianceJson),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationConfig {
    pub kind: FilterKind,
    pub target: Subsystem,
    #[serde(default)]
    pub grid: Option<usize>,
    /// Phase shift (radians) applied to the first mode of A before filtering.
    #[serde(default)]
    pub pre_phase: Option<f64>,
    /// Also run the phase/attenuate/squeeze pipeline (two modes only).
    #[serde(default)]
    pub pipeline: bool,
}

impl FiltrationConfig {
    pub fn template(&self) -> FilterTemplate {
        FilterTemplate::new(self.kind, self.target)
    }
}

/// One scenario of a config file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub id: String,
    pub state: StateSpec,
    #[serde(default)]
    pub split: Option<BipartiteSplit>,
    #[serde(default)]
    pub criteria: Option<Vec<CriterionId>>,
    #[serde(default)]
    pub filtration: Option<FiltrationConfig>,
    #[serde(default)]
    pub physicality_tolerance: Option<f64>,
}

/// A resolved scenario, ready to run.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub gamma: CovarianceMatrix,
    pub split: BipartiteSplit,
    pub criteria: Vec<CriterionId>,
    pub filtration: Option<FiltrationConfig>,
    pub physicality_tolerance: f64,
    /// Built-in name and parameters, when the state came from a builder.
    pub builtin: Option<(Builtin, Params)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    /// TMSV with additive noise on the first mode.
    EprNoise,
    /// TMSV with additive noise on the second mode.
    EprNoiseB,
    Gamma1,
    Gamma2,
    /// Two noisy TMSV pairs with Bob's modes rotated by `R(θ, τ)`.
    Epr4,
    Vacuum,
    Tmsv,
    Thermal,
}

impl Builtin {
    pub const ALL: [Builtin; 8] = [
        Builtin::EprNoise,
        Builtin::EprNoiseB,
        Builtin::Gamma1,
        Builtin::Gamma2,
        Builtin::Epr4,
        Builtin::Vacuum,
        Builtin::Tmsv,
        Builtin::Thermal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::EprNoise => "eprnoise",
            Builtin::EprNoiseB => "eprnoise-b",
            Builtin::Gamma1 => "gamma1",
            Builtin::Gamma2 => "gamma2",
            Builtin::Epr4 => "epr4",
            Builtin::Vacuum => "vacuum",
            Builtin::Tmsv => "tmsv",
            Builtin::Thermal => "thermal",
        }
    }

    pub fn parse(name: &str) -> Result<Self, CliError> {
        Self::ALL
            .into_iter()
            .find(|b| b.name() == name)
            .ok_or_else(|| {
                let known: Vec<_> = Self::ALL.iter().map(|b| b.name()).collect();
                CliError::Invalid(format!(
                    "unknown builtin `{name}` (known: {})",
                    known.join(", ")
                ))
            })
    }

    pub fn defaults(self) -> Params {
        let p = |r, v, tau, theta| Params { r, v, tau, theta };
        match self {
            Builtin::EprNoise | Builtin::EprNoiseB => p(Some(0.2), Some(0.4), None, None),
            Builtin::Epr4 => p(Some(1.0), Some(0.8), Some(0.9), Some(0.0)),
            Builtin::Tmsv | Builtin::Thermal => p(None, None, Some(0.5), None),
            Builtin::Gamma1 | Builtin::Gamma2 | Builtin::Vacuum => Params::default(),
        }
    }

    fn physicality_tolerance(self) -> f64 {
        match self {
            // the published matrix has a symplectic eigenvalue of 0.49963
            Builtin::Gamma1 => 5e-3,
            _ => tolerances::PHYSICALITY,
        }
    }

    fn filtration(self) -> Option<FiltrationConfig> {
        let f = |kind, target| FiltrationConfig {
            kind,
            target,
            grid: None,
            pre_phase: None,
            pipeline: false,
        };
        match self {
            Builtin::EprNoise | Builtin::Gamma1 | Builtin::Gamma2 | Builtin::Epr4 => {
                Some(f(FilterKind::Attenuate, Subsystem::A))
            }
            Builtin::EprNoiseB => Some(f(FilterKind::Amplify, Subsystem::A)),
            Builtin::Vacuum | Builtin::Tmsv | Builtin::Thermal => None,
        }
    }

    fn split(self) -> BipartiteSplit {
        match self {
            Builtin::Epr4 => BipartiteSplit::balanced(2),
            _ => BipartiteSplit::balanced(1),
        }
    }

    /// Covariance matrix for the given (already defaulted) parameters.
    pub fn covariance(self, p: Params) -> Result<CovarianceMatrix, CliError> {
        let need = |x: Option<f64>, name: &str| {
            x.ok_or_else(|| {
                CliError::Invalid(format!(
                    "builtin `{}` needs parameter `{name}`",
                    self.name()
                ))
            })
        };
        let check_tau = |tau: f64| {
            if (0.0..1.0).contains(&tau) {
                Ok(tau)
            } else {
                Err(CliError::Invalid(format!(
                    "`tau` = {tau} must lie in [0, 1)"
                )))
            }
        };
        let gamma = match self {
            Builtin::EprNoise | Builtin::EprNoiseB => {
                let mode = if self == Builtin::EprNoise { 0 } else { 1 };
                additive_noise(
                    &CovarianceMatrix::tmsv(need(p.r, "r")?),
                    &[mode],
                    need(p.v, "V")?,
                )?
            }
            Builtin::Gamma1 => NormalForm::new(1.46, 0.80, 0.83, -0.23)?.to_covariance(),
            Builtin::Gamma2 => NormalForm::new(1.29, 0.83, -0.76, 0.44)?.to_covariance(),
            Builtin::Epr4 => epr4(
                need(p.r, "r")?,
                need(p.v, "V")?,
                need(p.theta, "theta")?,
                need(p.tau, "tau")?,
            )?,
            Builtin::Vacuum => CovarianceMatrix::vacuum(2),
            Builtin::Tmsv => CovarianceMatrix::tmsv(check_tau(need(p.tau, "tau")?)?.atanh()),
            Builtin::Thermal => CovarianceMatrix::thermal(2, check_tau(need(p.tau, "tau")?)?)?,
        };
        Ok(gamma)
    }
}

/// Alice holds modes 0 and 1, Bob modes 2 and 3; mode pairs (0, 2) and (1, 3)
/// are TMSVs, Alice's modes carry noise `v` and Bob's modes are mixed by
/// `R(θ, τ)`.
pub fn epr4(r: f64, v: f64, theta: f64, tau: f64) -> Result<CovarianceMatrix, CliError> {
    let pair = CovarianceMatrix::tmsv(r);
    let two = pair.direct_sum(&pair).select_modes(&[0, 2, 1, 3])?;
    let noisy = additive_noise(&two, &[0, 1], v)?;
    Ok(apply_symplectic(
        &noisy,
        &SymplecticTransform::bob_rotation(theta, tau)?,
    )?)
}

fn default_criteria(split: &BipartiteSplit) -> Vec<CriterionId> {
    if split.n_modes() == 2 {
        CriterionId::ALL.to_vec()
    } else {
        vec![CriterionId::WeakRealignment, CriterionId::Ppt]
    }
}

impl Scenario {
    pub fn builtin(b: Builtin, over: Params) -> Result<Self, CliError> {
        let params = b.defaults().overridden_by(over);
        let split = b.split();
        Ok(Scenario {
            id: b.name().to_string(),
            gamma: b.covariance(params)?,
            criteria: default_criteria(&split),
            split,
            filtration: b.filtration(),
            physicality_tolerance: b.physicality_tolerance(),
            builtin: Some((b, params)),
        })
    }

    fn from_config(c: ScenarioConfig) -> Result<Self, CliError> {
        let ctx = |e: CliError| CliError::Invalid(format!("scenario `{}`: {e}", c.id));
        let (base, builtin) = match &c.state {
            StateSpec::Builtin { name, params } => {
                let b = Builtin::parse(name).map_err(ctx)?;
                (Scenario::builtin(b, *params).map_err(ctx)?, true)
            }
            StateSpec::Covariance(json) => {
                let gamma = json.to_covariance().map_err(|e| {
                    CliError::Invalid(format!(
                        "scenario `{}`: field `state.covariance`: {e}",
                        c.id
                    ))
                })?;
                let split = BipartiteSplit::balanced(gamma.n_modes() / 2);
                let s = Scenario {
                    id: c.id.clone(),
                    criteria: default_criteria(&split),
                    split,
                    gamma,
                    filtration: None,
                    physicality_tolerance: tolerances::PHYSICALITY,
                    builtin: None,
                };
                (s, false)
            }
        };
        if !builtin && base.gamma.n_modes() % 2 == 1 && c.split.is_none() {
            return Err(CliError::Invalid(format!(
                "scenario `{}`: field `split` is required for an odd number of modes",
                c.id
            )));
        }
        let split = c.split.unwrap_or(base.split);
        if split.n_modes() != base.gamma.n_modes() {
            return Err(CliError::Invalid(format!(
                "scenario `{}`: field `split` covers {} modes, the state has {}",
                c.id,
                split.n_modes(),
                base.gamma.n_modes()
            )));
        }
        let tol = c
            .physicality_tolerance
            .unwrap_or(base.physicality_tolerance);
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(CliError::Invalid(format!(
                "scenario `{}`: field `physicality_tolerance` must be a non-negative number",
                c.id
            )));
        }
        Ok(Scenario {
            id: c.id,
            criteria: c.criteria.unwrap_or_else(|| default_criteria(&split)),
            split,
            gamma: base.gamma,
            filtration: c.filtration.or(base.filtration),
            physicality_tolerance: tol,
            builtin: base.builtin,
        })
    }

    /// Rejects states that are not physical within the scenario's tolerance.
    pub fn check_physical(&self) -> Result<(), CliError> {
        let report = validate_with(&self.gamma, self.physicality_tolerance);
        let failures = report.failures();
        if failures.is_empty() {
            Ok(())
        } else {
            Err(CliError::Unphysical(format!(
                "scenario `{}`: {}",
                self.id,
                failures.join("; ")
            )))
        }
    }
}

/// A config file holds one scenario or a list of them.
pub fn parse_config(text: &str) -> Result<Vec<Scenario>, CliError> {
    let malformed = |e: serde_json::Error| CliError::Invalid(format!("malformed config: {e}"));
    let configs = if text.trim_start().starts_with('[') {
        serde_json::from_str::<Vec<ScenarioConfig>>(text).map_err(malformed)?
    } else {
        vec![serde_json::from_str::<ScenarioConfig>(text).map_err(malformed)?]
    };
    if configs.is_empty() {
        return Err(CliError::Invalid("config holds no scenarios".into()));
    }
    configs.into_iter().map(Scenario::from_config).collect()
}

pub fn load_config(path: &Path) -> Result<Vec<Scenario>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_names_round_trip() {
        for b in Builtin::ALL {
            assert_eq!(Builtin::parse(b.name()).unwrap(), b);
        }
        assert!(Builtin::parse("nope").is_err());
    }

    #[test]
    fn missing_field_is_named() {
        let err = parse_config(r#"{"state": {"builtin": {"name": "gamma1"}}}"#).unwrap_err();
        assert!(err.to_string().contains("`id`"), "{err}");
        let err =
            parse_config(r#"{"id": "x", "state": {"builtin": {"name": "gamma1"}}, "bogus": 1}"#)
                .unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    #[test]
    fn params_override_defaults() {
        let s = Scenario::builtin(
            Builtin::EprNoise,
            Params {
                v: Some(0.1),
                ..Params::default()
            },
        )
        .unwrap();
        let (_, p) = s.builtin.unwrap();
        assert_eq!((p.r, p.v), (Some(0.2), Some(0.1)));
    }

    #[test]
    fn explicit_covariance_scenario() {
        let cfg = r#"[{"id": "vac", "state": {"covariance": {"n_modes": 2,
            "entries": [0.5,0,0,0, 0,0.5,0,0, 0,0,0.5,0, 0,0,0,0.5]}},
            "criteria": ["ppt"]}]"#;
        let s = parse_config(cfg).unwrap();
        assert_eq!(s[0].criteria, vec![CriterionId::Ppt]);
        assert!(s[0].check_physical().is_ok());
    }

    #[test]
    fn gamma1_needs_its_tolerance() {
        let mut s = Scenario::builtin(Builtin::Gamma1, Params::default()).unwrap();
        assert!(s.check_physical().is_ok());
        s.physicality_tolerance = 1e-9;
        assert!(matches!(s.check_physical(), Err(CliError::Unphysical(_))));
    }
}
