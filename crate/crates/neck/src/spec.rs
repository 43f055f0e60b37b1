//! Textual specs for profiles and initial loops, as accepted on the command
//! line: `base:delta=0.5`, `swing:delta=0.5,t=0.02`, `graph:amp=2,phase=0`.

use std::fmt;
use std::str::FromStr;

use neck_core::profiles::NeckProfile;
use neck_core::shorten::LoopInit;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid spec `{spec}`: {reason} (at `{token}`)")]
pub struct SpecError {
    pub spec: String,
    pub token: String,
    pub reason: &'static str,
}

fn err(spec: &str, token: &str, reason: &'static str) -> SpecError {
    SpecError {
        spec: spec.to_string(),
        token: token.to_string(),
        reason,
    }
}

/// Splits `kind:key=value,key=value` into the kind and its parameters.
type Fields<'a> = Vec<(&'a str, &'a str)>;

fn split(spec: &str) -> Result<(&str, Fields<'_>), SpecError> {
    let (kind, rest) = match spec.split_once(':') {
        Some((k, r)) => (k.trim(), r.trim()),
        None => (spec.trim(), ""),
    };
    let mut params = Vec::new();
    for part in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| err(spec, part, "expected key=value"))?;
        params.push((k.trim(), v.trim()));
    }
    Ok((kind, params))
}

fn number(spec: &str, key: &str, value: &str) -> Result<f64, SpecError> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| err(spec, &format!("{key}={value}"), "not a finite number"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileSpec {
    Base { delta: f64 },
    Swing { delta: f64, t: f64 },
}

impl ProfileSpec {
    pub const DEFAULT_DELTA: f64 = 0.5;

    pub fn delta(&self) -> f64 {
        match *self {
            ProfileSpec::Base { delta } | ProfileSpec::Swing { delta, .. } => delta,
        }
    }

    pub fn build(&self) -> neck_core::Result<NeckProfile> {
        match *self {
            ProfileSpec::Base { delta } => NeckProfile::base(delta),
            ProfileSpec::Swing { delta, t } => NeckProfile::base(delta)?.with_swing(t),
        }
    }
}

impl FromStr for ProfileSpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, params) = split(s)?;
        let mut delta = Self::DEFAULT_DELTA;
        let mut t = None;
        for (k, v) in params {
            match k {
                "delta" => delta = number(s, k, v)?,
                "t" if kind == "swing" => t = Some(number(s, k, v)?),
                _ => return Err(err(s, k, "unknown profile parameter")),
            }
        }
        match kind {
            "base" => Ok(ProfileSpec::Base { delta }),
            "swing" => Ok(ProfileSpec::Swing {
                delta,
                t: t.ok_or_else(|| err(s, kind, "swing needs t=<value>"))?,
            }),
            _ => Err(err(
                s,
                kind,
                "unknown profile kind (expected base or swing)",
            )),
        }
    }
}

impl fmt::Display for ProfileSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileSpec::Base { delta } => write!(f, "base:delta={delta}"),
            ProfileSpec::Swing { delta, t } => write!(f, "swing:delta={delta},t={t}"),
        }
    }
}

impl serde::Serialize for ProfileSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Initial loop shape; `perturbed` takes its seed from the spec or, failing
/// that, from the global `--seed`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitSpec {
    pub init: LoopInit,
    pub explicit_seed: bool,
}

impl InitSpec {
    pub fn with_default_seed(mut self, seed: u64) -> LoopInit {
        if let LoopInit::Perturbed {
            seed: ref mut s, ..
        } = self.init
        {
            if !self.explicit_seed {
                *s = seed;
            }
        }
        self.init
    }
}

impl FromStr for InitSpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, params) = split(s)?;
        let mut x0 = 0.0;
        let (mut amp, mut phase) = (2.0, 0.0);
        let mut noise = 0.1;
        let mut seed = None;
        for (k, v) in params {
            match (kind, k) {
                ("circle" | "perturbed", "x0") => x0 = number(s, k, v)?,
                ("graph", "amp") => amp = number(s, k, v)?,
                ("graph", "phase") => phase = number(s, k, v)?,
                ("perturbed", "noise") => noise = number(s, k, v)?,
                ("perturbed", "seed") => {
                    seed = Some(
                        v.parse::<u64>()
                            .map_err(|_| err(s, v, "seed must be a non-negative integer"))?,
                    )
                }
                _ => return Err(err(s, k, "unknown loop parameter")),
            }
        }
        let init = match kind {
            "circle" => LoopInit::Circle { x0 },
            "graph" => LoopInit::Graph {
                amplitude: amp,
                phase,
            },
            "perturbed" => LoopInit::Perturbed {
                x0,
                noise,
                seed: seed.unwrap_or(0),
            },
            _ => {
                return Err(err(
                    s,
                    kind,
                    "unknown loop kind (expected circle, graph or perturbed)",
                ))
            }
        };
        Ok(InitSpec {
            init,
            explicit_seed: seed.is_some(),
        })
    }
}

impl fmt::Display for InitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.init {
            LoopInit::Circle { x0 } => write!(f, "circle:x0={x0}"),
            LoopInit::Graph { amplitude, phase } => {
                write!(f, "graph:amp={amplitude},phase={phase}")
            }
            LoopInit::Perturbed { x0, noise, seed } if self.explicit_seed => {
                write!(f, "perturbed:x0={x0},noise={noise},seed={seed}")
            }
            LoopInit::Perturbed { x0, noise, .. } => write!(f, "perturbed:x0={x0},noise={noise}"),
        }
    }
}

impl serde::Serialize for InitSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
