use serde::{Deserialize, Serialize};

use super::polytope::{vertices_2d, PenaltyMode, RatePolytope, VertexSet};
use super::terms::RegionConfig;
use super::TheoremSelector;
use crate::entropic::{Smoothing, ToleranceParams};
use crate::error::Result;
use crate::secrecy::SecrecySection;

/// Shortest decimal form that round-trips, `inf`/`-inf` for infinities.
pub fn format_number(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v:?}")
    }
}

/// `R1,R2` rows, one per vertex.
pub fn vertices_csv(vertices: &VertexSet) -> String {
    let mut out = String::from("R1,R2\n");
    for v in &vertices.vertices {
        out.push_str(&format!("{},{}\n", format_number(v[0]), format_number(v[1])));
    }
    out
}

/// Everything `region` prints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionReport {
    pub theorem: TheoremSelector,
    pub channel: String,
    pub params: ToleranceParams,
    pub penalty_mode: PenaltyMode,
    pub smoothing: Smoothing,
    pub region: RatePolytope,
    pub vertices: VertexSet,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secrecy: Option<SecrecySection>,
}

impl RegionReport {
    pub fn new(
        theorem: TheoremSelector,
        channel: impl Into<String>,
        config: &RegionConfig,
        region: RatePolytope,
    ) -> Result<Self> {
        let vertices = vertices_2d(&region)?;
        let warnings = region
            .rows
            .iter()
            .filter_map(|r| r.warning.as_ref().map(|w| format!("{}: {w}", r.provenance)))
            .collect();
        Ok(Self {
            theorem,
            channel: channel.into(),
            params: config.params,
            penalty_mode: config.penalties,
            smoothing: config.smoothing,
            region,
            vertices,
            warnings,
            secrecy: None,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(format_number(f64::INFINITY), "inf");
        assert_eq!(format_number(0.415037499278844), "0.415037499278844");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(format_number(2.0), "2.0");
    }
}
