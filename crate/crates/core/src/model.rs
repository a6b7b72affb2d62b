//! Tagged model specifications: `{"model": "<tag>", ...parameters}`.

use serde::{Deserialize, Serialize};

use crate::arw::{self, ArwParams, LinkProbs};
use crate::baselines::{self, KaParams, SanParams, default_attractiveness};
use crate::error::{Error, Result};
use crate::graph::TemporalDigraph;
use crate::growth::Generated;
use crate::schedule::GrowthSchedule;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelSpec {
    Arw(ArwParams),
    Uniform,
    Dms {
        attractiveness: f64,
    },
    Hk {
        p_triangle: f64,
        #[serde(default = "default_attractiveness")]
        attractiveness: f64,
    },
    San(SanParams),
    Ka(KaParams),
    RwMu {
        mu: f64,
    },
    ForestFire {
        p_forward: f64,
        p_backward: f64,
    },
}

impl ModelSpec {
    pub fn tag(&self) -> &'static str {
        match self {
            ModelSpec::Arw(_) => "arw",
            ModelSpec::Uniform => "uniform",
            ModelSpec::Dms { .. } => "dms",
            ModelSpec::Hk { .. } => "hk",
            ModelSpec::San(_) => "san",
            ModelSpec::Ka(_) => "ka",
            ModelSpec::RwMu { .. } => "rw_mu",
            ModelSpec::ForestFire { .. } => "forest_fire",
        }
    }

    /// Parses a parameter object, taking the tag from `model` when the
    /// object has no `model` key of its own.
    pub fn from_json_with_tag(value: serde_json::Value, model: Option<&str>) -> Result<Self> {
        let mut value = value;
        if let (Some(tag), Some(obj)) = (model, value.as_object_mut()) {
            obj.entry("model").or_insert_with(|| tag.into());
        }
        let spec: ModelSpec = serde_json::from_value(value)?;
        if let Some(tag) = model {
            if spec.tag() != tag {
                return Err(Error::param(
                    "model",
                    format!("parameters are for `{}` but `{tag}` was requested", spec.tag()),
                ));
            }
        }
        spec.validate()?;
        Ok(spec)
    }

    /// Names of the tunable parameters, in the order used for grid cells.
    pub fn param_names(&self) -> Vec<&'static str> {
        match self {
            ModelSpec::Arw(p) => match p.link {
                LinkProbs::Attributed { .. } => vec!["p_same", "p_diff", "p_jump", "p_out"],
                LinkProbs::Unattributed { .. } => vec!["p_link", "p_jump", "p_out"],
            },
            ModelSpec::Uniform => vec![],
            ModelSpec::Dms { .. } => vec!["attractiveness"],
            ModelSpec::Hk { .. } => vec!["p_triangle", "attractiveness"],
            ModelSpec::San(_) => vec!["p_triangle", "sigma", "attractiveness"],
            ModelSpec::Ka(_) => vec!["sigma", "attractiveness"],
            ModelSpec::RwMu { .. } => vec!["mu"],
            ModelSpec::ForestFire { .. } => vec!["p_forward", "p_backward"],
        }
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        let v = match (self, name) {
            (ModelSpec::Arw(p), "p_jump") => p.p_jump,
            (ModelSpec::Arw(p), "p_out") => p.p_out,
            (ModelSpec::Arw(p), _) => match (p.link, name) {
                (LinkProbs::Attributed { p_same, .. }, "p_same") => p_same,
                (LinkProbs::Attributed { p_diff, .. }, "p_diff") => p_diff,
                (LinkProbs::Unattributed { p_link }, "p_link") => p_link,
                _ => return None,
            },
            (ModelSpec::Dms { attractiveness }, "attractiveness") => *attractiveness,
            (ModelSpec::Hk { p_triangle, .. }, "p_triangle") => *p_triangle,
            (ModelSpec::Hk { attractiveness, .. }, "attractiveness") => *attractiveness,
            (ModelSpec::San(p), "p_triangle") => p.p_triangle,
            (ModelSpec::San(p), "sigma") => p.sigma,
            (ModelSpec::San(p), "attractiveness") => p.attractiveness,
            (ModelSpec::Ka(p), "sigma") => p.sigma,
            (ModelSpec::Ka(p), "attractiveness") => p.attractiveness,
            (ModelSpec::RwMu { mu }, "mu") => *mu,
            (ModelSpec::ForestFire { p_forward, .. }, "p_forward") => *p_forward,
            (ModelSpec::ForestFire { p_backward, .. }, "p_backward") => *p_backward,
            _ => return None,
        };
        Some(v)
    }

    /// Copy with parameter `name` set to `value`.
    pub fn with_param(&self, name: &str, value: f64) -> Result<Self> {
        let mut spec = *self;
        let slot: &mut f64 = match (&mut spec, name) {
            (ModelSpec::Arw(p), "p_jump") => &mut p.p_jump,
            (ModelSpec::Arw(p), "p_out") => &mut p.p_out,
            (ModelSpec::Arw(p), _) => match (&mut p.link, name) {
                (LinkProbs::Attributed { p_same, .. }, "p_same") => p_same,
                (LinkProbs::Attributed { p_diff, .. }, "p_diff") => p_diff,
                (LinkProbs::Unattributed { p_link }, "p_link") => p_link,
                _ => return Err(unknown_param(self, name)),
            },
            (ModelSpec::Dms { attractiveness }, "attractiveness") => attractiveness,
            (ModelSpec::Hk { p_triangle, .. }, "p_triangle") => p_triangle,
            (ModelSpec::Hk { attractiveness, .. }, "attractiveness") => attractiveness,
            (ModelSpec::San(p), "p_triangle") => &mut p.p_triangle,
            (ModelSpec::San(p), "sigma") => &mut p.sigma,
            (ModelSpec::San(p), "attractiveness") => &mut p.attractiveness,
            (ModelSpec::Ka(p), "sigma") => &mut p.sigma,
            (ModelSpec::Ka(p), "attractiveness") => &mut p.attractiveness,
            (ModelSpec::RwMu { mu }, "mu") => mu,
            (ModelSpec::ForestFire { p_forward, .. }, "p_forward") => p_forward,
            (ModelSpec::ForestFire { p_backward, .. }, "p_backward") => p_backward,
            _ => return Err(unknown_param(self, name)),
        };
        *slot = value;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        use crate::error::check_probability as prob;
        let attract = |a: f64| {
            if a.is_finite() && a >= 0.0 {
                Ok(())
            } else {
                Err(Error::param("attractiveness", format!("{a} is negative or not finite")))
            }
        };
        match *self {
            ModelSpec::Arw(p) => p.validate(),
            ModelSpec::Uniform => Ok(()),
            ModelSpec::Dms { attractiveness } => attract(attractiveness),
            ModelSpec::Hk {
                p_triangle,
                attractiveness,
            } => prob("p_triangle", p_triangle).and(attract(attractiveness)),
            ModelSpec::San(p) => prob("p_triangle", p.p_triangle)
                .and(prob("sigma", p.sigma))
                .and(attract(p.attractiveness)),
            ModelSpec::Ka(p) => prob("sigma", p.sigma).and(attract(p.attractiveness)),
            ModelSpec::RwMu { mu } => {
                prob("mu", mu)?;
                if mu <= 0.0 {
                    Err(Error::param("mu", "must be positive"))
                } else {
                    Ok(())
                }
            }
            ModelSpec::ForestFire {
                p_forward,
                p_backward,
            } => prob("p_forward", p_forward).and(prob("p_backward", p_backward)),
        }
    }

    pub fn grow(&self, initial: &TemporalDigraph, schedule: &GrowthSchedule, rng_seed: u64) -> Result<Generated> {
        match self {
            ModelSpec::Arw(p) => arw::grow(initial, schedule, p, rng_seed),
            ModelSpec::Uniform => baselines::grow_uniform(initial, schedule, rng_seed),
            ModelSpec::Dms { attractiveness } => baselines::grow_dms(initial, schedule, *attractiveness, rng_seed),
            ModelSpec::Hk {
                p_triangle,
                attractiveness,
            } => baselines::grow_hk(initial, schedule, *p_triangle, *attractiveness, rng_seed),
            ModelSpec::San(p) => baselines::grow_san(initial, schedule, p, rng_seed),
            ModelSpec::Ka(p) => baselines::grow_ka(initial, schedule, p, rng_seed),
            ModelSpec::RwMu { mu } => baselines::grow_rw_mu(initial, schedule, *mu, rng_seed),
            ModelSpec::ForestFire {
                p_forward,
                p_backward,
            } => baselines::grow_forest_fire(initial, schedule, *p_forward, *p_backward, rng_seed),
        }
    }
}

fn unknown_param(spec: &ModelSpec, name: &str) -> Error {
    Error::param("grid", format!("model `{}` has no parameter `{name}`", spec.tag()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tagged_json() {
        let arw: ModelSpec =
            serde_json::from_str(r#"{"model":"arw","p_link":0.4,"p_jump":0.1,"p_out":0.9}"#).unwrap();
        assert_eq!(arw, ModelSpec::Arw(ArwParams::unattributed(0.4, 0.1, 0.9)));
        let text = serde_json::to_string(&arw).unwrap();
        assert_eq!(serde_json::from_str::<ModelSpec>(&text).unwrap(), arw);

        let ka: ModelSpec = serde_json::from_str(r#"{"model":"ka","sigma":0.3}"#).unwrap();
        assert_eq!(
            ka,
            ModelSpec::Ka(KaParams {
                sigma: 0.3,
                attractiveness: 1.0
            })
        );
        let u: ModelSpec = serde_json::from_str(r#"{"model":"uniform"}"#).unwrap();
        assert_eq!(u, ModelSpec::Uniform);
    }

    #[test]
    fn tag_from_flag() {
        let params = serde_json::json!({"p_same": 0.9, "p_diff": 0.1, "p_jump": 0.2, "p_out": 0.5});
        let spec = ModelSpec::from_json_with_tag(params.clone(), Some("arw")).unwrap();
        assert_eq!(spec.param_names(), vec!["p_same", "p_diff", "p_jump", "p_out"]);
        assert!(ModelSpec::from_json_with_tag(params, Some("dms")).is_err());
        let bad = serde_json::json!({"mu": 0.0});
        assert!(ModelSpec::from_json_with_tag(bad, Some("rw_mu")).is_err());
    }

    #[test]
    fn param_access() {
        let spec = ModelSpec::Arw(ArwParams::attributed(0.5, 0.5, 0.1, 0.2));
        let s2 = spec.with_param("p_diff", 0.25).unwrap();
        assert_eq!(s2.param("p_diff"), Some(0.25));
        assert_eq!(s2.param("p_same"), Some(0.5));
        assert!(spec.with_param("p_link", 0.3).is_err());
        assert!(ModelSpec::Uniform.with_param("mu", 0.1).is_err());
    }
}
