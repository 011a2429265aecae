//! JSON formats for action files and reports.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::actions::{Backend, CircleAction};
use crate::circle::{Amount, LiftHomeo, LiftMobius, LiftPl};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, Rational1};

pub const SCHEMA: &str = "rotkit/1";

/// A translation amount: "p/q" for exact values, a JSON number otherwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AmountSpec {
    Exact(String),
    Float(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum LiftSpec {
    Rot { t: AmountSpec },
    Pl { breakpoints: Vec<(String, String)> },
    Mobius { mat: [f64; 4], sheet: i64 },
    Cover { base: Box<LiftSpec>, degree: i64, offset: i64 },
    Composite { factors: Vec<LiftSpec>, shift: i64 },
}

impl From<&LiftHomeo> for LiftSpec {
    fn from(f: &LiftHomeo) -> Self {
        match f {
            LiftHomeo::Rotation(Amount::Exact(t)) => LiftSpec::Rot { t: AmountSpec::Exact(fmt_q(t)) },
            LiftHomeo::Rotation(Amount::Float(t)) => LiftSpec::Rot { t: AmountSpec::Float(*t) },
            LiftHomeo::Pl(p) => {
                LiftSpec::Pl { breakpoints: p.breakpoints().map(|(x, y)| (fmt_q(x), fmt_q(y))).collect() }
            }
            LiftHomeo::Mobius(m) => LiftSpec::Mobius { mat: m.matrix(), sheet: m.sheet() },
            LiftHomeo::Cover { base, degree, offset } => {
                LiftSpec::Cover { base: Box::new(base.as_ref().into()), degree: *degree, offset: *offset }
            }
            LiftHomeo::Composite { factors, shift } => {
                LiftSpec::Composite { factors: factors.iter().map(Into::into).collect(), shift: *shift }
            }
        }
    }
}

impl TryFrom<&LiftSpec> for LiftHomeo {
    type Error = Error;

    fn try_from(s: &LiftSpec) -> Result<Self> {
        Ok(match s {
            LiftSpec::Rot { t: AmountSpec::Exact(t) } => LiftHomeo::rotation(parse_q(t)?),
            LiftSpec::Rot { t: AmountSpec::Float(t) } => {
                if !t.is_finite() {
                    return Err(Error::InvalidLift(format!("rotation amount {t}")));
                }
                LiftHomeo::Rotation(Amount::Float(*t))
            }
            LiftSpec::Pl { breakpoints } => {
                if breakpoints.is_empty() {
                    return Err(Error::InvalidLift("pl lift without breakpoints".into()));
                }
                let pts = breakpoints.iter().map(|(x, y)| Ok((parse_q(x)?, parse_q(y)?))).collect::<Result<_>>()?;
                LiftHomeo::Pl(LiftPl::from_any_points(pts)?)
            }
            LiftSpec::Mobius { mat, sheet } => LiftHomeo::Mobius(LiftMobius::new(*mat, *sheet)?),
            LiftSpec::Cover { base, degree, offset } => {
                if *degree < 1 {
                    return Err(Error::InvalidLift(format!("cover degree {degree}")));
                }
                LiftHomeo::Cover { base: Box::new(base.as_ref().try_into()?), degree: *degree, offset: *offset }
            }
            LiftSpec::Composite { factors, shift } => LiftHomeo::Composite {
                factors: factors.iter().map(TryInto::try_into).collect::<Result<_>>()?,
                shift: *shift,
            },
        })
    }
}

/// On-disk form of a [`CircleAction`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionFile {
    #[serde(default = "schema")]
    pub schema: String,
    pub lift_a: LiftSpec,
    pub lift_b: LiftSpec,
    pub rot_a: Rational1,
    pub rot_b: Rational1,
    pub backend: Backend,
}

fn schema() -> String {
    SCHEMA.into()
}

impl From<&CircleAction> for ActionFile {
    fn from(phi: &CircleAction) -> Self {
        ActionFile {
            schema: schema(),
            lift_a: phi.lift_a().into(),
            lift_b: phi.lift_b().into(),
            rot_a: phi.rot_a().clone(),
            rot_b: phi.rot_b().clone(),
            backend: phi.backend(),
        }
    }
}

impl TryFrom<&ActionFile> for CircleAction {
    type Error = Error;

    fn try_from(f: &ActionFile) -> Result<Self> {
        if f.schema != SCHEMA {
            return Err(Error::Parse(format!("unknown schema {:?}, expected {SCHEMA:?}", f.schema)));
        }
        CircleAction::new((&f.lift_a).try_into()?, (&f.lift_b).try_into()?, f.rot_a.clone(), f.rot_b.clone(), f.backend)
    }
}

pub fn action_to_json(phi: &CircleAction) -> String {
    serde_json::to_string_pretty(&ActionFile::from(phi)).expect("serializable")
}

pub fn action_from_json(s: &str) -> Result<CircleAction> {
    let f: ActionFile = serde_json::from_str(s)?;
    (&f).try_into()
}

pub fn read_action(path: &Path) -> Result<CircleAction> {
    let s = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    action_from_json(&s)
}

pub fn write_action(phi: &CircleAction, path: &Path) -> Result<()> {
    std::fs::write(path, action_to_json(phi) + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Envelope written by every subcommand.
#[derive(Clone, Debug, Serialize)]
pub struct Report<C: Serialize, R: Serialize> {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: C,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub result: Option<R>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl<C: Serialize, R: Serialize> Report<C, R> {
    pub fn new(command: &'static str, config: C) -> Self {
        Report {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            command,
            config,
            passed: false,
            error: None,
            result: None,
            wall_time_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{fuchsian_o23, fuchsian_o23_pl, k_fold_lift};

    #[test]
    fn round_trips() {
        for phi in [
            fuchsian_o23_pl(),
            k_fold_lift(&fuchsian_o23_pl(), 5).unwrap(),
            fuchsian_o23(),
            k_fold_lift(&fuchsian_o23(), 7).unwrap(),
        ] {
            let back = action_from_json(&action_to_json(&phi)).unwrap();
            assert_eq!(back.backend(), phi.backend());
            assert_eq!(back.rot_a(), phi.rot_a());
            for x in [0.0, 0.1, 0.37, 0.9] {
                assert!((back.lift_a().eval_f64(x) - phi.lift_a().eval_f64(x)).abs() < 1e-14);
                assert!((back.lift_b().eval_f64(x) - phi.lift_b().eval_f64(x)).abs() < 1e-14);
            }
            if phi.is_exact() {
                assert_eq!(back, phi);
            }
        }
    }

    #[test]
    fn hand_written_file() {
        let s = r#"{
            "lift_a": {"type": "rot", "t": "1/2"},
            "lift_b": {"type": "pl", "breakpoints": [["0", "1/4"], ["1/4", "1/2"], ["1/2", "1"]]},
            "rot_a": "1/2", "rot_b": "1/3", "backend": "pl"
        }"#;
        assert_eq!(action_from_json(s).unwrap(), fuchsian_o23_pl());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(action_from_json("{"), Err(Error::Parse(_))));
        let wrong_relation = r#"{"lift_a": {"type": "rot", "t": "1/3"}, "lift_b": {"type": "rot", "t": "1/3"},
            "rot_a": "1/2", "rot_b": "1/3", "backend": "pl"}"#;
        assert!(action_from_json(wrong_relation).is_err());
        let singular = r#"{"lift_a": {"type": "mobius", "mat": [1, 1, 1, 1], "sheet": 0},
            "lift_b": {"type": "rot", "t": "1/3"}, "rot_a": "1/2", "rot_b": "1/3", "backend": "mobius"}"#;
        assert!(matches!(action_from_json(singular), Err(Error::InvalidLift(_))));
    }
}
