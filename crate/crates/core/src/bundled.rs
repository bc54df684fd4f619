//! Small channels shipped with the crate, each also stored as a JSON document
//! under `data/`.

use crate::channel::{ChannelSpec, OutputDims, Split};
use crate::error::Result;
use crate::operator::{tensor, DensityOperator};

pub const DIAG_DETERMINISTIC_JSON: &str = include_str!("../data/diag-deterministic.json");
pub const DIAG_SPLIT_JSON: &str = include_str!("../data/diag-split.json");
pub const SHARED_SPLIT_JSON: &str = include_str!("../data/shared-split.json");
pub const UNIFORM_T1_JSON: &str = include_str!("../data/uniform-t1.json");
pub const UNIFORM_HK_JSON: &str = include_str!("../data/uniform-hk.json");
pub const UNIFORM_HK_DEGENERATE_JSON: &str = include_str!("../data/uniform-hk-degenerate.json");

/// Names of the bundled channels, as accepted by [`by_name`].
pub const NAMES: [&str; 3] = ["diag-deterministic", "diag-split", "shared-split"];

fn symbols(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// `|y1⟩⟨y1| ⊗ |y2⟩⟨y2| ⊗ z`.
pub fn basis_output(dims: OutputDims, y1: usize, y2: usize, z: &DensityOperator) -> DensityOperator {
    tensor(
        &tensor(&DensityOperator::basis(dims.y1, y1), &DensityOperator::basis(dims.y2, y2)),
        z,
    )
}

/// Builds a channel from a per-pair output rule.
pub fn from_fn(
    name: &str,
    n1: usize,
    n2: usize,
    dims: OutputDims,
    mut output: impl FnMut(usize, usize) -> DensityOperator,
) -> Result<ChannelSpec> {
    let states = (0..n1).map(|i| (0..n2).map(|j| output(i, j)).collect()).collect();
    ChannelSpec::new(name, symbols(n1), symbols(n2), dims, states)
}

/// Binary inputs, `Y1 = |x1⟩`, `Y2 = |x2⟩`, `Z = I/2`.
pub fn diag_deterministic() -> ChannelSpec {
    let dims = OutputDims { y1: 2, y2: 2, z: 2 };
    let noise = DensityOperator::maximally_mixed(2);
    from_fn("diag-deterministic", 2, 2, dims, |i, j| basis_output(dims, i, j, &noise))
        .expect("valid by construction")
}

/// The diag-deterministic channel with one-letter common parts, so each input is
/// entirely personal.
pub fn diag_split() -> ChannelSpec {
    let mut ch = diag_deterministic();
    ch.name = String::from("diag-split");
    ch.with_splits(
        Split::product(symbols(1), symbols(2)),
        Split::product(symbols(1), symbols(2)),
    )
    .expect("valid by construction")
}

/// Inputs `x1 = 2·c1 + p1`, `x2 = 2·c2 + p2` with bits `c, p`; both receivers see the
/// same two bits `|c1 ⊕ p2, c2 ⊕ p1⟩`, the eavesdropper sees `I/2`.
pub fn shared_split() -> ChannelSpec {
    let dims = OutputDims { y1: 4, y2: 4, z: 2 };
    let noise = DensityOperator::maximally_mixed(2);
    let ch = from_fn("shared-split", 4, 4, dims, |x1, x2| {
        let (c1, p1) = (x1 / 2, x1 % 2);
        let (c2, p2) = (x2 / 2, x2 % 2);
        let y = 2 * (c1 ^ p2) + (c2 ^ p1);
        basis_output(dims, y, y, &noise)
    })
    .expect("valid by construction");
    ch.with_splits(
        Split::product(symbols(2), symbols(2)),
        Split::product(symbols(2), symbols(2)),
    )
    .expect("valid by construction")
}

pub fn by_name(name: &str) -> Option<ChannelSpec> {
    match name {
        "diag-deterministic" => Some(diag_deterministic()),
        "diag-split" => Some(diag_split()),
        "shared-split" => Some(shared_split()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{
        control_state_hk, control_state_t1, load_channel, save_channel, InputDistribution,
    };

    #[test]
    fn data_files_match_constructors() {
        assert_eq!(save_channel(&diag_deterministic()), DIAG_DETERMINISTIC_JSON);
        assert_eq!(save_channel(&diag_split()), DIAG_SPLIT_JSON);
        assert_eq!(save_channel(&shared_split()), SHARED_SPLIT_JSON);
    }

    #[test]
    fn data_files_load() {
        let ch = load_channel(DIAG_DETERMINISTIC_JSON).unwrap();
        assert_eq!(ch.state_count(), 4);
        assert_eq!((ch.dims.y1, ch.dims.y2, ch.dims.z), (2, 2, 2));
        assert!(load_channel(DIAG_SPLIT_JSON).unwrap().is_split());
        assert!(load_channel(SHARED_SPLIT_JSON).unwrap().is_split());
    }

    #[test]
    fn distribution_files_parse() {
        let t1 = InputDistribution::parse(UNIFORM_T1_JSON).unwrap();
        assert_eq!(t1, InputDistribution::uniform_time_sharing(2, 2));
        let hk = InputDistribution::parse(UNIFORM_HK_JSON).unwrap();
        assert_eq!(hk, InputDistribution::uniform_split(&shared_split()).unwrap());
        let deg = InputDistribution::parse(UNIFORM_HK_DEGENERATE_JSON).unwrap();
        assert_eq!(deg, InputDistribution::uniform_split(&diag_split()).unwrap());
        assert_eq!(t1.to_json(), UNIFORM_T1_JSON);
        assert_eq!(hk.to_json(), UNIFORM_HK_JSON);
        assert_eq!(deg.to_json(), UNIFORM_HK_DEGENERATE_JSON);
    }

    #[test]
    fn hk_state_is_uniform_over_sixteen_atoms() {
        let ch = shared_split();
        let s = control_state_hk(&ch, &InputDistribution::uniform_split(&ch).unwrap()).unwrap();
        assert_eq!(s.atoms().len(), 16);
        assert!(s.atoms().iter().all(|a| (a.prob - 1.0 / 16.0).abs() < 1e-15));
    }

    #[test]
    fn degenerate_split_matches_t1_after_relabeling() {
        let ch = diag_split();
        let hk = control_state_hk(&ch, &InputDistribution::uniform_split(&ch).unwrap()).unwrap();
        let t1 = control_state_t1(&ch, &InputDistribution::uniform_time_sharing(2, 2)).unwrap();
        assert_eq!(hk.atoms().len(), t1.atoms().len());
        for a in t1.atoms() {
            let (x1, x2) = (a.values[1], a.values[2]);
            let b = hk
                .atoms()
                .iter()
                .find(|b| b.values == [0, x1, 0, x2])
                .expect("matching atom");
            assert!((a.prob - b.prob).abs() < 1e-15);
            assert!((a.state.matrix() - b.state.matrix()).norm() < 1e-15);
        }
    }
}
