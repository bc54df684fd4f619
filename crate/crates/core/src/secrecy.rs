//! Randomizer block sizes, the trace-norm leakage bound and the eavesdropper
//! information checks.

use serde::{Deserialize, Serialize};

use crate::entropic::{CqState, Smoothing, ToleranceParams};
use crate::error::{Error, Result};
use crate::region::{Evaluator, InfoTerm, PenaltyMode, RegionConfig, TermKind};

/// Largest trace distance between two states.
pub const MAX_TRACE_DISTANCE: f64 = 2.0;

/// The bound `60·δ'^{1/8}` is below [`MAX_TRACE_DISTANCE`] exactly for δ' below this value.
pub fn vacuity_threshold() -> f64 {
    (1.0f64 / 30.0).powi(8)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeakageBound {
    pub delta_prime: f64,
    pub value: f64,
    pub nonvacuous: bool,
}

/// `60·δ'^{1/8}`, flagged nonvacuous when it is below the largest trace distance.
///
/// The flag compares δ' with the analytic threshold, so it does not depend on the
/// rounding of the eighth root.
pub fn leakage_bound(delta_prime: f64) -> Result<LeakageBound> {
    if !(delta_prime > 0.0 && delta_prime.is_finite()) {
        return Err(Error::OutOfRange {
            name: "delta_prime",
            value: delta_prime,
        });
    }
    let value = 60.0 * delta_prime.powf(0.125);
    Ok(LeakageBound {
        delta_prime,
        value,
        nonvacuous: delta_prime < vacuity_threshold(),
    })
}

/// Junk-set sizes for the four message parts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomizerPlan {
    pub log_k10: f64,
    pub log_k20: f64,
    pub log_k11: f64,
    pub log_k22: f64,
    pub leakage: LeakageBound,
    pub params: ToleranceParams,
    pub smoothing: Smoothing,
    /// Decoding order the conditioning of each term follows.
    pub decoding_order: Vec<String>,
    /// The max-information terms, in the order `K10, K20, K11, K22`.
    pub terms: Vec<InfoTerm>,
}

impl RandomizerPlan {
    pub fn log_sizes(&self) -> [f64; 4] {
        [self.log_k10, self.log_k20, self.log_k11, self.log_k22]
    }
}

/// `log|K| = I_max^η(term) + log(3/ε'³) − ¼·log δ' (+ O(1))`, clamped at zero.
pub fn randomizer_plan(state: &CqState, params: &ToleranceParams, smoothing: Smoothing) -> Result<RandomizerPlan> {
    params.validate()?;
    let config = RegionConfig {
        params: *params,
        penalties: PenaltyMode::Off,
        smoothing,
    };
    let ev = Evaluator::new(state, config);
    let base = params.log_three_over_eps_prime_cubed() - 0.25 * params.delta_prime.log2();
    let specs = [
        ("X10", "Z", false),
        ("X20", "ZX10", true),
        ("X11", "ZX10X20", true),
        ("X22", "ZX10X11X20", true),
    ];
    let mut terms = Vec::new();
    let mut sizes = [0.0; 4];
    for (k, (a, b, big_o)) in specs.iter().enumerate() {
        let t = ev.term(TermKind::SmoothMax, 1.0, a, b, None)?;
        let extra = if *big_o { params.big_o_constant } else { 0.0 };
        sizes[k] = (t.value + base + extra).max(0.0);
        terms.push(t);
    }
    Ok(RandomizerPlan {
        log_k10: sizes[0],
        log_k20: sizes[1],
        log_k11: sizes[2],
        log_k22: sizes[3],
        leakage: leakage_bound(params.delta_prime)?,
        params: *params,
        smoothing,
        decoding_order: ["m10", "m20", "m11", "m22"].iter().map(|s| s.to_string()).collect(),
        terms,
    })
}

/// Thresholds of the three-grouping condition and of the full-grouping criterion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecrecyThresholds {
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
    pub theta: f64,
}

impl SecrecyThresholds {
    /// Every threshold equal to ϑ.
    pub fn uniform(theta: f64) -> Self {
        Self {
            eps1: theta,
            eps2: theta,
            eps3: theta,
            theta,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupingCheck {
    pub label: String,
    pub registers: Vec<String>,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecrecyReport {
    pub checks: Vec<GroupingCheck>,
    pub thresholds: SecrecyThresholds,
    pub smoothing_radius: f64,
}

impl SecrecyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// `I_max^η(parts : Z)` for the three groupings and for all four parts, with the
/// part registers standing in for the messages.
pub fn secrecy_check(
    state: &CqState,
    params: &ToleranceParams,
    smoothing: Smoothing,
    thresholds: SecrecyThresholds,
) -> Result<SecrecyReport> {
    params.validate()?;
    let config = RegionConfig {
        params: *params,
        penalties: PenaltyMode::Off,
        smoothing,
    };
    let ev = Evaluator::new(state, config);
    let groups = [
        ("condition ε1", "X10X11X20", thresholds.eps1),
        ("condition ε2", "X10X20X22", thresholds.eps2),
        ("condition ε3", "X10X11X20X22", thresholds.eps3),
        ("criterion ϑ", "X10X11X20X22", thresholds.theta),
    ];
    let mut checks = Vec::new();
    for (label, parts, threshold) in groups {
        let t = ev.term(TermKind::SmoothMax, 1.0, parts, "Z", None)?;
        checks.push(GroupingCheck {
            label: label.to_string(),
            registers: t.part_a.clone(),
            value: t.value,
            threshold,
            pass: t.value <= threshold + 1e-9,
        });
    }
    Ok(SecrecyReport {
        checks,
        thresholds,
        smoothing_radius: params.eta(),
    })
}

/// Randomizer sizes and eavesdropper checks, as embedded in a region report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecrecySection {
    pub randomizers: RandomizerPlan,
    pub checks: SecrecyReport,
}

pub fn secrecy_section(
    state: &CqState,
    params: &ToleranceParams,
    smoothing: Smoothing,
    thresholds: SecrecyThresholds,
) -> Result<SecrecySection> {
    Ok(SecrecySection {
        randomizers: randomizer_plan(state, params, smoothing)?,
        checks: secrecy_check(state, params, smoothing, thresholds)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled::{basis_output, from_fn, shared_split};
    use crate::channel::{control_state_hk, InputDistribution, OutputDims, Split};
    use crate::entropic::SmoothingStrategy;
    use crate::operator::DensityOperator;

    fn unsmoothed() -> Smoothing {
        Smoothing::default()
    }

    #[test]
    fn trivial_eavesdropper_plan() {
        let ch = shared_split();
        let s = control_state_hk(&ch, &InputDistribution::uniform_split(&ch).unwrap()).unwrap();
        let p = ToleranceParams::default();
        let plan = randomizer_plan(&s, &p, unsmoothed()).unwrap();
        let expected = 3000f64.log2() - 0.25 * 0.2f64.log2();
        for v in plan.log_sizes() {
            assert!((v - expected).abs() < 1e-9);
        }
        assert!((expected - 12.1312).abs() < 1e-4);
        assert!(!plan.leakage.nonvacuous);
    }

    /// Binary split inputs with `Z` holding a copy of the common part of sender one.
    fn common_copy_state() -> CqState {
        let dims = OutputDims { y1: 1, y2: 1, z: 2 };
        let ch = from_fn("copy", 4, 4, dims, |x1, _| basis_output(dims, 0, 0, &DensityOperator::basis(2, x1 / 2)))
            .unwrap();
        let sym = |n: usize| (0..n).map(|i| i.to_string()).collect::<Vec<_>>();
        let ch = ch
            .with_splits(Split::product(sym(2), sym(2)), Split::product(sym(2), sym(2)))
            .unwrap();
        control_state_hk(&ch, &InputDistribution::uniform_split(&ch).unwrap()).unwrap()
    }

    #[test]
    fn copied_common_part_costs_one_bit() {
        let p = ToleranceParams::default();
        let plan = randomizer_plan(&common_copy_state(), &p, unsmoothed()).unwrap();
        let base = 3000f64.log2() - 0.25 * 0.2f64.log2();
        assert!((plan.log_k10 - base - 1.0).abs() < 1e-9);
        assert!((plan.log_k20 - base).abs() < 1e-9);
    }

    #[test]
    fn smoothing_never_increases_sizes() {
        let p = ToleranceParams::default();
        let s = common_copy_state();
        let plain = randomizer_plan(&s, &p, unsmoothed()).unwrap();
        let smooth = randomizer_plan(
            &s,
            &p,
            Smoothing::new(SmoothingStrategy::DiagonalScan, Default::default()),
        )
        .unwrap();
        for (a, b) in smooth.log_sizes().iter().zip(plain.log_sizes()) {
            assert!(*a <= b + 1e-9);
        }
    }

    #[test]
    fn full_copy_leaks_four_bits() {
        let dims = OutputDims { y1: 1, y2: 1, z: 16 };
        let ch = from_fn("full", 4, 4, dims, |x1, x2| basis_output(dims, 0, 0, &DensityOperator::basis(16, 4 * x1 + x2)))
            .unwrap();
        let sym = |n: usize| (0..n).map(|i| i.to_string()).collect::<Vec<_>>();
        let ch = ch
            .with_splits(Split::product(sym(2), sym(2)), Split::product(sym(2), sym(2)))
            .unwrap();
        let s = control_state_hk(&ch, &InputDistribution::uniform_split(&ch).unwrap()).unwrap();
        let p = ToleranceParams::default();
        let r = secrecy_check(&s, &p, unsmoothed(), SecrecyThresholds::uniform(3.9)).unwrap();
        let full = r.checks[3].value;
        assert!((full - 4.0).abs() < 1e-9);
        assert!(!r.checks[3].pass);
        for c in &r.checks[..3] {
            assert!(c.value <= full + 1e-9);
        }
        let plan = randomizer_plan(&s, &p, unsmoothed()).unwrap();
        let base = p.log_three_over_eps_prime_cubed() - 0.25 * p.delta_prime.log2();
        assert!(plan.log_sizes().iter().all(|v| *v >= base - 1e-9));
    }

    #[test]
    fn leakage_is_monotone_with_analytic_threshold() {
        let t = vacuity_threshold();
        assert!(!leakage_bound(t).unwrap().nonvacuous);
        assert!(leakage_bound(t * 0.999).unwrap().nonvacuous);
        assert!(!leakage_bound(t * 1.001).unwrap().nonvacuous);
        let mut last = 0.0;
        for k in 1..20 {
            let v = leakage_bound(10f64.powi(-k) * 3.0).unwrap().value;
            assert!(k == 1 || v < last);
            last = v;
        }
    }

    #[test]
    fn leakage_examples() {
        let b = leakage_bound(0.2).unwrap();
        assert!((b.value - 49.07).abs() < 0.01);
        assert!(!b.nonvacuous);
        let b = leakage_bound(1e-16).unwrap();
        assert!((b.value - 0.6).abs() < 1e-12);
        assert!(b.nonvacuous);
        assert!(leakage_bound(0.0).is_err());
    }

    #[test]
    fn secrecy_checks() {
        let ch = shared_split();
        let s = control_state_hk(&ch, &InputDistribution::uniform_split(&ch).unwrap()).unwrap();
        let p = ToleranceParams::default();
        let r = secrecy_check(&s, &p, unsmoothed(), SecrecyThresholds::uniform(1e-6)).unwrap();
        assert!(r.all_pass());
        let r = secrecy_check(&common_copy_state(), &p, unsmoothed(), SecrecyThresholds::uniform(0.5)).unwrap();
        assert!(!r.all_pass());
        let r = secrecy_check(
            &common_copy_state(),
            &p,
            unsmoothed(),
            SecrecyThresholds::uniform(f64::INFINITY),
        )
        .unwrap();
        assert!(r.all_pass());
    }
}
