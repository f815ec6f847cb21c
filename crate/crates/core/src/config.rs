//! Caps and thresholds read from a TOML file.
//!
//! ```toml
//! [enumerate]
//! max_half_edges = 12
//!
//! [metric]
//! theta = "1/8"
//! t = "1/64"
//!
//! [polytope]
//! depth_scale = "1"
//! ```

use serde::Deserialize;

use crate::metric::Rational;

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub enumerate: EnumerateConfig,
    pub metric: MetricConfig,
    pub polytope: PolytopeConfig,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnumerateConfig {
    pub max_half_edges: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricConfig {
    pub theta: Option<String>,
    pub t: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolytopeConfig {
    pub depth_scale: Option<String>,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}

/// Parses `p/q` or `p`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let (p, q) = text.trim().split_once('/').unwrap_or((text.trim(), "1"));
    let p = p.parse().ok()?;
    let q: num_bigint::BigInt = q.parse().ok()?;
    (q != 0.into()).then(|| Rational::new(p, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::rational;

    #[test]
    fn reads_sections() {
        let c = Config::from_toml("[metric]\ntheta = \"1/8\"\n[enumerate]\nmax_half_edges = 10\n").unwrap();
        assert_eq!(c.enumerate.max_half_edges, Some(10));
        assert_eq!(parse_rational(c.metric.theta.as_deref().unwrap()), Some(rational(1, 8)));
        assert!(Config::from_toml("[metric]\nbogus = 1\n").is_err());
        assert_eq!(parse_rational("3/0"), None);
    }
}
