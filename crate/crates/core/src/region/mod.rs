//! Rate regions as systems of linear inequalities, their projection, and sweeps
//! over input distributions.

mod builders;
mod fm;
mod polytope;
mod report;
mod sweep;
mod terms;

use serde::{Deserialize, Serialize};

pub use builders::{
    conjecture_region, conjecture_region_for_state, hk_nosecrecy_region, hk_nosecrecy_region_for_state,
    hk_split_system, qmac_inner_bound, submac_secrecy_region, theorem1_region, theorem2_region,
    theorem2_region_for_state, SenderGroup,
};
pub use fm::fourier_motzkin;
pub use polytope::{
    support_2d, vertices_2d, InfoTerm, PenaltyMode, PenaltyTerm, RatePolytope, Row, TermKind, VertexSet,
};
pub use report::{format_number, vertices_csv, RegionReport};
pub use sweep::{
    radial_extent, simplex_grid, sweep_distributions, sweep_union, Frontier, FrontierPoint, SweepSpec,
    THREADS_ENV,
};
pub use terms::{parse_registers, Evaluator, PenaltySpec, RegionConfig};

use crate::channel::{control_state_t1, ChannelSpec, InputDistribution, RECEIVER_ONE};
use crate::error::Result;

/// Which region a command evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremSelector {
    /// Secrecy region with the minimum over both receivers.
    T1,
    /// Rate-split secrecy region, rows (6)–(14).
    Conjecture,
    /// Rate-split secrecy region, rows (15)–(28).
    T2,
    /// Rate-split region without secrecy.
    HkNosecrecy,
    /// Two-sender multiple-access region at receiver one.
    Qmac,
}

impl TheoremSelector {
    pub const ALL: [TheoremSelector; 5] = [
        TheoremSelector::T1,
        TheoremSelector::Conjecture,
        TheoremSelector::T2,
        TheoremSelector::HkNosecrecy,
        TheoremSelector::Qmac,
    ];

    /// Whether the region is built on the split input parts.
    pub fn uses_split(self) -> bool {
        matches!(
            self,
            TheoremSelector::Conjecture | TheoremSelector::T2 | TheoremSelector::HkNosecrecy
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            TheoremSelector::T1 => "t1",
            TheoremSelector::Conjecture => "conjecture",
            TheoremSelector::T2 => "t2",
            TheoremSelector::HkNosecrecy => "hk-nosecrecy",
            TheoremSelector::Qmac => "qmac",
        }
    }
}

/// Region of `selector` for one channel and input distribution.
pub fn region_for(
    channel: &ChannelSpec,
    dist: &InputDistribution,
    selector: TheoremSelector,
    config: &RegionConfig,
) -> Result<RatePolytope> {
    match selector {
        TheoremSelector::T1 => theorem1_region(channel, dist, config),
        TheoremSelector::Conjecture => conjecture_region(channel, dist, config),
        TheoremSelector::T2 => theorem2_region(channel, dist, config),
        TheoremSelector::HkNosecrecy => hk_nosecrecy_region(channel, dist, config),
        TheoremSelector::Qmac => {
            config.params.validate()?;
            let state = control_state_t1(channel, dist)?;
            qmac_inner_bound(
                &state,
                &[SenderGroup::new("R1", "X1"), SenderGroup::new("R2", "X2")],
                RECEIVER_ONE,
                config,
            )
        }
    }
}
