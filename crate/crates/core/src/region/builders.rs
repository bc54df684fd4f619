use super::polytope::{InfoTerm, RatePolytope, Row, TermKind};
use super::terms::{parse_registers, Evaluator, PenaltySpec, RegionConfig};
use crate::channel::{
    control_state_hk, control_state_t1, submac_view, ChannelSpec, InputDistribution, Receiver,
    COMMON_ONE, COMMON_TWO, PERSONAL_ONE, PERSONAL_TWO, SENDER_ONE, SENDER_TWO, TIME_SHARING,
};
use crate::entropic::{CqState, DeltaChoice};
use crate::error::{Error, Result};

const SPLIT_RATES: [&str; 2] = ["R1", "R2"];

fn rate_pair() -> Vec<String> {
    SPLIT_RATES.iter().map(|s| s.to_string()).collect()
}

/// One sender of a multiple-access channel: its rate name and registers, written
/// as a concatenated list such as `X20X22`.
#[derive(Clone, Debug)]
pub struct SenderGroup {
    pub rate: String,
    pub registers: String,
}

impl SenderGroup {
    pub fn new(rate: impl Into<String>, registers: impl Into<String>) -> Self {
        Self {
            rate: rate.into(),
            registers: registers.into(),
        }
    }
}

/// One row per nonempty sender subset `S`:
/// `Σ_{i∈S} R_i ≤ I_H^ε(S : receiver S^c) + log ε − 2`.
pub fn qmac_inner_bound(
    state: &CqState,
    senders: &[SenderGroup],
    receiver: &str,
    config: &RegionConfig,
) -> Result<RatePolytope> {
    if !(2..=3).contains(&senders.len()) {
        return Err(Error::UnsupportedSenderCount(senders.len()));
    }
    let ev = Evaluator::new(state, *config);
    let n = senders.len();
    let mut subsets: Vec<u32> = (1..(1u32 << n)).collect();
    subsets.sort_by_key(|s| (s.count_ones(), *s));
    let mut rows = Vec::new();
    for s in subsets {
        let inside: Vec<&SenderGroup> = (0..n).filter(|i| s & (1 << i) != 0).map(|i| &senders[i]).collect();
        let outside: String = (0..n)
            .filter(|i| s & (1 << i) == 0)
            .map(|i| senders[i].registers.as_str())
            .collect();
        let part_a: String = inside.iter().map(|g| g.registers.as_str()).collect();
        let part_b = format!("{receiver}{outside}");
        let coefficients = (0..n).map(|i| if s & (1 << i) != 0 { 1.0 } else { 0.0 }).collect();
        let tag = inside.iter().map(|g| g.rate.as_str()).collect::<Vec<_>>().join("+");
        rows.push(Row::assembled(
            format!("MAC:{tag}"),
            coefficients,
            Vec::new(),
            vec![ev.ht(&part_a, &part_b)?],
            PenaltySpec::decoding(1.0).terms(&config.params, config.params.eps, "ε"),
            config.penalties,
        ));
    }
    RatePolytope::new(
        senders.iter().map(|g| g.rate.clone()).collect(),
        rows,
        config.penalties,
    )
}

/// Printed form of one row, before evaluation.
#[derive(Clone, Debug)]
struct RowSpec {
    tag: String,
    coefficients: [f64; 2],
    /// Alternatives of a minimum, each a sum of `(a, b)` hypothesis-testing terms.
    alternatives: Vec<Vec<(String, String)>>,
    /// Hypothesis-testing terms subtracted outside the minimum.
    minus_ht: Vec<(String, String)>,
    /// Subtracted max-information terms with multiplicity.
    minus_max: Vec<(f64, String, String)>,
    penalties: PenaltySpec,
    warning: Option<String>,
}

fn pairs(items: &[(&str, &str)]) -> Vec<(String, String)> {
    items.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn maxes(items: &[(f64, &str, &str)]) -> Vec<(f64, String, String)> {
    items.iter().map(|(k, a, b)| (*k, a.to_string(), b.to_string())).collect()
}

impl RowSpec {
    fn new(tag: &str, coefficients: [f64; 2], alternatives: &[&[(&str, &str)]]) -> Self {
        Self {
            tag: tag.to_string(),
            coefficients,
            alternatives: alternatives.iter().map(|a| pairs(a)).collect(),
            minus_ht: Vec::new(),
            minus_max: Vec::new(),
            penalties: PenaltySpec::default(),
            warning: None,
        }
    }

    fn minus_max(mut self, items: &[(f64, &str, &str)]) -> Self {
        self.minus_max = maxes(items);
        self
    }

    fn penalties(mut self, p: PenaltySpec) -> Self {
        self.penalties = p;
        self
    }

    fn warn(mut self, w: &str) -> Self {
        self.warning = Some(w.to_string());
        self
    }

    /// Swaps the roles of the two users and the two receivers.
    fn mirrored(&self, tag: String) -> Result<Self> {
        let swap = |s: &str| -> Result<String> {
            Ok(parse_registers(s)?
                .into_iter()
                .map(|r| match r {
                    "X10" => "X20",
                    "X11" => "X22",
                    "X20" => "X10",
                    "X22" => "X11",
                    "X1" => "X2",
                    "X2" => "X1",
                    "Y1" => "Y2",
                    "Y2" => "Y1",
                    other => other,
                })
                .collect())
        };
        let swap_pairs = |v: &[(String, String)]| -> Result<Vec<(String, String)>> {
            v.iter().map(|(a, b)| Ok((swap(a)?, swap(b)?))).collect()
        };
        Ok(Self {
            tag,
            coefficients: [self.coefficients[1], self.coefficients[0]],
            alternatives: self
                .alternatives
                .iter()
                .map(|a| swap_pairs(a))
                .collect::<Result<_>>()?,
            minus_ht: swap_pairs(&self.minus_ht)?,
            minus_max: self
                .minus_max
                .iter()
                .map(|(k, a, b)| Ok((*k, swap(a)?, swap(b)?)))
                .collect::<Result<_>>()?,
            penalties: self.penalties,
            warning: self.warning.clone(),
        })
    }

    /// Evaluates terms; with `split_alternatives` every alternative becomes its own row.
    fn build(
        &self,
        ev: &Evaluator,
        cond: Option<&str>,
        delta: (f64, &str),
        split_alternatives: bool,
    ) -> Result<Vec<Row>> {
        let config = ev.config();
        let ht = |a: &str, b: &str, k: f64| ev.term(TermKind::HypothesisTesting, k, a, b, cond);
        let eval_alt = |alt: &[(String, String)]| -> Result<Vec<InfoTerm>> {
            alt.iter().map(|(a, b)| ht(a, b, 1.0)).collect()
        };
        let mut common = Vec::new();
        for (a, b) in &self.minus_ht {
            common.push(ht(a, b, -1.0)?);
        }
        for (k, a, b) in &self.minus_max {
            common.push(ev.term(TermKind::SmoothMax, -k, a, b, cond)?);
        }
        let penalties = self.penalties.terms(&config.params, delta.0, delta.1);
        let finish = |tag: String, alts: Vec<Vec<InfoTerm>>| {
            let row = Row::assembled(
                tag,
                self.coefficients.to_vec(),
                alts,
                common.clone(),
                penalties.clone(),
                config.penalties,
            );
            match &self.warning {
                Some(w) => row.with_warning(w.clone()),
                None => row,
            }
        };
        if split_alternatives && self.alternatives.len() > 1 {
            self.alternatives
                .iter()
                .enumerate()
                .map(|(i, alt)| Ok(finish(format!("{}#{}", self.tag, i + 1), vec![eval_alt(alt)?])))
                .collect()
        } else {
            let alts = self
                .alternatives
                .iter()
                .map(|a| eval_alt(a))
                .collect::<Result<Vec<_>>>()?;
            Ok(vec![finish(self.tag.clone(), alts)])
        }
    }
}

fn covering(log_eps: f64, constant: f64, covering: f64, log_delta: f64, big_o: bool) -> PenaltySpec {
    PenaltySpec {
        log_eps,
        constant,
        covering,
        log_delta,
        big_o,
    }
}

fn theorem_one_delta(config: &RegionConfig) -> (f64, &'static str) {
    let p = &config.params;
    match p.delta_choice {
        DeltaChoice::Delta => (p.delta, "δ"),
        DeltaChoice::DeltaPrime => (p.delta_prime, "δ'"),
    }
}

fn delta_prime(config: &RegionConfig) -> (f64, &'static str) {
    (config.params.delta_prime, "δ'")
}

fn assemble(specs: &[RowSpec], ev: &Evaluator, cond: Option<&str>, delta: (f64, &str), split: bool) -> Result<RatePolytope> {
    let mut rows = Vec::new();
    for s in specs {
        rows.extend(s.build(ev, cond, delta, split)?);
    }
    RatePolytope::new(rate_pair(), rows, ev.config().penalties)
}

fn require_registers(state: &CqState, names: &[&str], form: &str) -> Result<()> {
    for n in names {
        if !state.classical().contains(n) {
            return Err(Error::InvalidPolytope(format!(
                "{form} needs classical register {n}"
            )));
        }
    }
    Ok(())
}

const T1_REGISTERS: [&str; 3] = [TIME_SHARING, SENDER_ONE, SENDER_TWO];
const HK_REGISTERS: [&str; 4] = [COMMON_ONE, PERSONAL_ONE, COMMON_TWO, PERSONAL_TWO];

/// Secrecy rows of the sub-channel seen by `receiver` and the eavesdropper.
///
/// A state with registers `Q, X1, X2` gives the three-row system; a state with the
/// four split registers gives the nine split rows, mirrored for receiver `Y2`.
pub fn submac_secrecy_region(state: &CqState, receiver: Receiver, config: &RegionConfig) -> Result<RatePolytope> {
    config.params.validate()?;
    let view = submac_view(state, receiver)?;
    let ev = Evaluator::new(&view, *config);
    if T1_REGISTERS.iter().all(|r| state.classical().contains(r)) {
        let y = receiver.register();
        let rows = [
            RowSpec::new("SUB:R1", [1.0, 0.0], &[&[("X1", &format!("X2{y}"))]])
                .minus_max(&[(1.0, "X1", "Z")])
                .penalties(covering(1.0, -1.0, 1.0, 0.25, false)),
            RowSpec::new("SUB:R2", [0.0, 1.0], &[&[("X2", &format!("X1{y}"))]])
                .minus_max(&[(1.0, "X1", "ZX2")])
                .penalties(covering(1.0, -1.0, 1.0, 0.25, false))
                .warn("max-information term I_max(X1:ZX2|Q) kept as printed for the second rate"),
            RowSpec::new("SUB:R1+R2", [1.0, 1.0], &[&[("X1X2", y)]])
                .minus_max(&[(1.0, "X1", "Z"), (1.0, "X1", "ZX2")])
                .penalties(covering(1.0, -1.0, 2.0, 0.5, true))
                .warn("max-information term I_max(X1:ZX2|Q) kept as printed for the sum rate"),
        ];
        return assemble(&rows, &ev, Some(TIME_SHARING), theorem_one_delta(config), false);
    }
    require_registers(state, &HK_REGISTERS, "split sub-channel region")?;
    let specs = split_submac_specs();
    let specs: Vec<RowSpec> = match receiver {
        Receiver::Y1 => specs,
        Receiver::Y2 => specs
            .iter()
            .map(|s| s.mirrored(s.tag.replacen("S1", "S2", 1)))
            .collect::<Result<_>>()?,
    };
    assemble(&specs, &ev, None, delta_prime(config), false)
}

const R1_MAX: [(f64, &str, &str); 2] = [(1.0, "X10", "Z"), (1.0, "X11", "ZX10X2")];
const R2_MAX: [(f64, &str, &str); 2] = [(1.0, "X20", "ZX10"), (1.0, "X22", "ZX10X11X20")];

fn split_submac_specs() -> Vec<RowSpec> {
    let all_max = [R1_MAX[0], R1_MAX[1], R2_MAX[0], R2_MAX[1]];
    let single = covering(1.0, -2.0, 2.0, 0.5, true);
    vec![
        RowSpec::new("S1(30)", [1.0, 0.0], &[&[("X10X11", "Y1X2")]]).minus_max(&R1_MAX).penalties(single),
        RowSpec::new("S1(31)", [1.0, 0.0], &[&[("X11", "Y1X10X2"), ("X10", "Y1X11X2")]])
            .minus_max(&R1_MAX)
            .penalties(covering(2.0, -4.0, 2.0, 0.5, true)),
        RowSpec::new("S1(32)", [0.0, 1.0], &[&[("X2", "Y1X10X11")]]).minus_max(&R2_MAX).penalties(single),
        RowSpec::new("S1(33)", [0.0, 1.0], &[&[("X2X10", "Y1X11")]]).minus_max(&R2_MAX).penalties(single),
        RowSpec::new("S1(34)", [0.0, 1.0], &[&[("X2X11", "Y1X10")]]).minus_max(&R2_MAX).penalties(single),
        RowSpec::new("S1(35)", [1.0, 1.0], &[&[("X11", "Y1X10X2"), ("X10X20", "Y1X11")]])
            .minus_max(&all_max)
            .penalties(covering(2.0, -4.0, 4.0, 1.0, true)),
        RowSpec::new("S1(36)", [1.0, 1.0], &[&[("X11X2", "Y1X10"), ("X10", "X11X2Y1")]])
            .minus_max(&all_max)
            .penalties(covering(2.0, -4.0, 4.0, 1.0, true)),
        RowSpec::new("S1(37)", [1.0, 1.0], &[&[("X11X10X2", "Y1")]])
            .minus_max(&all_max)
            .penalties(covering(1.0, -2.0, 4.0, 1.0, true)),
        RowSpec::new("S1(38)", [1.0, 2.0], &[&[("X10X2", "Y1X11"), ("X2X11", "Y1X10")]])
            .minus_max(&[R1_MAX[0], R1_MAX[1], (2.0, "X20", "ZX10"), (2.0, "X22", "ZX10X11X20")])
            .penalties(covering(2.0, -4.0, 6.0, 1.5, true)),
    ]
}

fn t1_state_views(channel: &ChannelSpec, dist: &InputDistribution) -> Result<(CqState, CqState)> {
    let state = control_state_t1(channel, dist)?;
    Ok((submac_view(&state, Receiver::Y1)?, submac_view(&state, Receiver::Y2)?))
}

/// Three rows over `(R1, R2)`, each the minimum over both receivers minus the
/// max-information terms, conditioned on the time-sharing register.
pub fn theorem1_region(channel: &ChannelSpec, dist: &InputDistribution, config: &RegionConfig) -> Result<RatePolytope> {
    config.params.validate()?;
    let (view1, view2) = t1_state_views(channel, dist)?;
    let ev1 = Evaluator::new(&view1, *config);
    let ev2 = Evaluator::new(&view2, *config);
    let q = Some(TIME_SHARING);
    let ht = TermKind::HypothesisTesting;
    let mx = TermKind::SmoothMax;
    let delta = theorem_one_delta(config);
    let specs: [(&str, [f64; 2], &str, &str, Vec<(&str, &str)>, PenaltySpec); 3] = [
        ("T1:R1", [1.0, 0.0], "X1", "X2", vec![("X1", "Z")], covering(1.0, -1.0, 1.0, 0.25, false)),
        ("T1:R2", [0.0, 1.0], "X2", "X1", vec![("X2", "ZX1")], covering(1.0, -1.0, 1.0, 0.25, false)),
        (
            "T1:R1+R2",
            [1.0, 1.0],
            "X1X2",
            "",
            vec![("X1", "Z"), ("X2", "ZX1")],
            covering(1.0, -1.0, 2.0, 0.5, true),
        ),
    ];
    let mut rows = Vec::new();
    for (tag, coefficients, a, side, maxes, pen) in specs {
        let alternatives = vec![
            vec![ev1.term(ht, 1.0, a, &format!("{side}Y1"), q)?],
            vec![ev2.term(ht, 1.0, a, &format!("{side}Y2"), q)?],
        ];
        let terms = maxes
            .iter()
            .map(|(x, y)| ev1.term(mx, -1.0, x, y, q))
            .collect::<Result<Vec<_>>>()?;
        rows.push(Row::assembled(
            tag,
            coefficients.to_vec(),
            alternatives,
            terms,
            pen.terms(&config.params, delta.0, delta.1),
            config.penalties,
        ));
    }
    RatePolytope::new(rate_pair(), rows, config.penalties)
}

fn hk_state(channel: &ChannelSpec, dist: &InputDistribution) -> Result<CqState> {
    control_state_hk(channel, dist)
}

fn conjecture_specs() -> Vec<RowSpec> {
    let r1 = [(1.0, "X10", "Z"), (1.0, "X11", "ZX10X20")];
    let r2 = R2_MAX;
    let all = [r1[0], r1[1], r2[0], r2[1]];
    let one = covering(1.0, -2.0, 2.0, 0.5, true);
    let two = covering(2.0, -4.0, 2.0, 0.5, true);
    let sum = covering(2.0, -4.0, 4.0, 1.0, true);
    let triple = covering(3.0, -6.0, 6.0, 1.5, true);
    vec![
        RowSpec::new("C(6)", [1.0, 0.0], &[&[("X10X11", "Y1X20")]]).minus_max(&r1).penalties(one),
        RowSpec::new("C(7)", [1.0, 0.0], &[&[("X11", "Y1X10X20"), ("X10", "Y2X20X22")]]).minus_max(&r1).penalties(two),
        RowSpec::new("C(8)", [0.0, 1.0], &[&[("X20X22", "Y2X10")]]).minus_max(&r2).penalties(one),
        RowSpec::new("C(9)", [0.0, 1.0], &[&[("X20", "Y1X10X11"), ("X22", "Y2X10X20")]]).minus_max(&r2).penalties(two),
        RowSpec::new("C(10)", [1.0, 1.0], &[&[("X11", "Y2X10X20"), ("X10X11X20", "Y2")]])
            .minus_max(&all)
            .penalties(sum)
            .warn("personal part X11 evaluated against receiver Y2 as printed"),
        RowSpec::new("C(11)", [1.0, 1.0], &[&[("X11", "Y1X20X10"), ("X22X20X10", "Y2")]]).minus_max(&all).penalties(sum),
        RowSpec::new("C(12)", [1.0, 1.0], &[&[("X11X20", "Y1X10"), ("X22X10", "Y2X20")]]).minus_max(&all).penalties(sum),
        RowSpec::new("C(13)", [2.0, 1.0], &[&[("X11", "Y1X10X20"), ("X10X22", "Y2X20"), ("X11X10X20", "Y2")]])
            .minus_max(&[(2.0, "X10", "Z"), (2.0, "X11", "ZX10X20"), r2[0], r2[1]])
            .penalties(triple)
            .warn("personal part X11 evaluated against receiver Y2 as printed"),
        RowSpec::new("C(14)", [1.0, 2.0], &[&[("X11X20", "Y1X10"), ("X22", "Y2X10X20"), ("X22X20X10", "Y1")]])
            .minus_max(&[r1[0], r1[1], (2.0, "X20", "ZX10"), (2.0, "X22", "ZX10X11X20")])
            .penalties(triple)
            .warn("personal part X22 evaluated against receiver Y1 as printed"),
    ]
}

/// Nine rows over `(R1, R2)` on the split control state, each term as printed.
pub fn conjecture_region(channel: &ChannelSpec, dist: &InputDistribution, config: &RegionConfig) -> Result<RatePolytope> {
    config.params.validate()?;
    let state = hk_state(channel, dist)?;
    conjecture_region_for_state(&state, config)
}

pub fn conjecture_region_for_state(state: &CqState, config: &RegionConfig) -> Result<RatePolytope> {
    require_registers(state, &HK_REGISTERS, "conjecture region")?;
    let ev = Evaluator::new(state, *config);
    assemble(&conjecture_specs(), &ev, None, delta_prime(config), false)
}

fn theorem2_specs() -> Vec<RowSpec> {
    let r1 = [(1.0, "X10", "Z"), (1.0, "X11", "ZX10X20")];
    let r2 = R2_MAX;
    let one = covering(1.0, -2.0, 2.0, 0.5, true);
    let two = covering(2.0, -4.0, 2.0, 0.5, true);
    let sum = covering(2.0, -4.0, 4.0, 1.0, true);
    let heavy = covering(2.0, -4.0, 6.0, 1.5, true);
    let mut eighteen = RowSpec::new("T2(18)", [0.0, 1.0], &[&[("X20X22", "Y2X1")], &[("X2", "Y1X10X11")]])
        .minus_max(&r2)
        .penalties(one)
        .warn("hypothesis-testing term I_H(X20X22:Y2X10) subtracted as printed");
    eighteen.minus_ht = pairs(&[("X20X22", "Y2X10")]);
    vec![
        RowSpec::new("T2(15)", [1.0, 0.0], &[&[("X10X11", "Y1X2")], &[("X1", "Y2X20X22")]]).minus_max(&r1).penalties(one),
        RowSpec::new(
            "T2(16-17)",
            [1.0, 0.0],
            &[&[("X11", "Y1X10X2"), ("X10", "Y1X11X2")], &[("X1X20", "Y2X22")], &[("X1X22", "Y2X20")]],
        )
        .minus_max(&r1)
        .penalties(one),
        eighteen,
        RowSpec::new(
            "T2(19-21)",
            [0.0, 1.0],
            &[&[("X22", "Y2X20X1"), ("X20", "Y2X22X1")], &[("X2X10", "Y1X11")], &[("X2X11", "Y1X10")]],
        )
        .minus_max(&r2)
        .penalties(two),
        RowSpec::new("T2(22)", [1.0, 1.0], &[&[("X11X10X2", "Y1")], &[("X22X20X1", "Y2")]])
            .minus_max(&[(1.0, "X10", "Z"), (1.0, "X11", "ZX10X2"), (1.0, "X20", "ZX10"), (1.0, "X22", "ZX10X20")])
            .penalties(sum),
        RowSpec::new(
            "T2(23-26)",
            [1.0, 1.0],
            &[
                &[("X11", "Y1X10X2"), ("X10X20", "Y1X11")],
                &[("X22", "Y2X20X1"), ("X20X10", "Y1X11")],
                &[("X22X1", "Y2X20"), ("X20", "X22X1Y2")],
                &[("X11X2", "Y1X10"), ("X10", "X11X2Y1")],
            ],
        )
        .minus_max(&[(1.0, "X10", "Z"), (1.0, "X11", "ZX20X10"), r2[0], r2[1]])
        .penalties(sum),
        RowSpec::new("T2(27)", [2.0, 1.0], &[&[("X20X1", "Y2X22"), ("X1X22", "Y2X20")]])
            .minus_max(&[(2.0, "X10", "Z"), (2.0, "X11", "ZX10X20"), r2[0], r2[1]])
            .penalties(heavy),
        RowSpec::new("T2(28)", [1.0, 2.0], &[&[("X10X2", "Y1X11"), ("X2X11", "Y1X10")]])
            .minus_max(&[(1.0, "X10", "Z"), (1.0, "X11", "ZX10X2"), (2.0, "X20", "ZX10"), (2.0, "X22", "ZX10X11X20")])
            .penalties(heavy),
    ]
}

/// Combined split-message secrecy rows over `(R1, R2)`; every alternative of a
/// printed minimum becomes its own row, tagged `label#k`.
pub fn theorem2_region(channel: &ChannelSpec, dist: &InputDistribution, config: &RegionConfig) -> Result<RatePolytope> {
    config.params.validate()?;
    let state = hk_state(channel, dist)?;
    theorem2_region_for_state(&state, config)
}

pub fn theorem2_region_for_state(state: &CqState, config: &RegionConfig) -> Result<RatePolytope> {
    require_registers(state, &HK_REGISTERS, "split-message secrecy region")?;
    let ev = Evaluator::new(state, *config);
    assemble(&theorem2_specs(), &ev, None, delta_prime(config), true)
}

fn hk_specs() -> Vec<RowSpec> {
    let d = PenaltySpec::decoding;
    vec![
        RowSpec::new("HK1", [1.0, 0.0], &[&[("X10X11", "Y1X20")]]).penalties(d(1.0)),
        RowSpec::new("HK2", [1.0, 0.0], &[&[("X11", "Y1X10X20"), ("X10", "Y2X20X22")]]).penalties(d(2.0)),
        RowSpec::new("HK3", [0.0, 1.0], &[&[("X20X22", "Y2X10")]]).penalties(d(1.0)),
        RowSpec::new("HK4", [0.0, 1.0], &[&[("X20", "Y1X10X11"), ("X22", "Y2X10X20")]]).penalties(d(2.0)),
        RowSpec::new("HK5", [1.0, 1.0], &[&[("X11", "Y2X10X20"), ("X10X11X20", "Y2")]])
            .penalties(d(2.0))
            .warn("personal part X11 evaluated against receiver Y2 as printed"),
        RowSpec::new("HK6", [1.0, 1.0], &[&[("X11X20", "Y1X10"), ("X22X10", "Y2X20")]]).penalties(d(2.0)),
        RowSpec::new("HK7", [1.0, 1.0], &[&[("X11", "Y1X20X10"), ("X22X20X10", "Y2")]]).penalties(d(2.0)),
        RowSpec::new("HK8", [2.0, 1.0], &[&[("X11", "Y1X10X20"), ("X10X22", "Y2X20"), ("X11X10X20", "Y2")]])
            .penalties(d(3.0))
            .warn("personal part X11 evaluated against receiver Y2 as printed"),
        RowSpec::new("HK9", [1.0, 2.0], &[&[("X11X20", "Y1X10"), ("X22", "Y2X10X20"), ("X22X20X10", "Y1")]])
            .penalties(d(3.0))
            .warn("personal part X22 evaluated against receiver Y1 as printed"),
    ]
}

/// Split-message region without secrecy: nine rows over `(R1, R2)` with
/// constants `k·(log ε − 2)` for rows summing `k` terms.
pub fn hk_nosecrecy_region(channel: &ChannelSpec, dist: &InputDistribution, config: &RegionConfig) -> Result<RatePolytope> {
    let state = hk_state(channel, dist)?;
    hk_nosecrecy_region_for_state(&state, config)
}

pub fn hk_nosecrecy_region_for_state(state: &CqState, config: &RegionConfig) -> Result<RatePolytope> {
    config.params.validate()?;
    require_registers(state, &HK_REGISTERS, "split-message region")?;
    let ev = Evaluator::new(state, *config);
    assemble(&hk_specs(), &ev, None, (config.params.eps, "ε"), false)
}

/// The two three-sender systems of the split-message decoders, lifted to
/// `(R1, R2, R10, R11, R20, R22)` with `R1 = R10 + R11` and `R2 = R20 + R22`.
pub fn hk_split_system(state: &CqState, config: &RegionConfig) -> Result<RatePolytope> {
    require_registers(state, &HK_REGISTERS, "split-message system")?;
    let vars = ["R1", "R2", "R10", "R11", "R20", "R22"];
    let lift = |p: &RatePolytope, tag: &str| -> Vec<Row> {
        p.rows
            .iter()
            .map(|r| {
                let mut row = r.clone();
                row.provenance = format!("{tag}{}", r.provenance);
                row.coefficients = vars
                    .iter()
                    .map(|v| p.variable_index(v).map_or(0.0, |k| r.coefficients[k]))
                    .collect();
                row
            })
            .collect()
    };
    let first = qmac_inner_bound(
        state,
        &[
            SenderGroup::new("R10", "X10"),
            SenderGroup::new("R11", "X11"),
            SenderGroup::new("R20", "X20"),
        ],
        "Y1",
        config,
    )?;
    let second = qmac_inner_bound(
        state,
        &[
            SenderGroup::new("R20", "X20"),
            SenderGroup::new("R22", "X22"),
            SenderGroup::new("R10", "X10"),
        ],
        "Y2",
        config,
    )?;
    let mut rows = lift(&first, "Y1/");
    rows.extend(lift(&second, "Y2/"));
    for (total, parts, name) in [(0usize, [2usize, 3usize], "R1"), (1, [4, 5], "R2")] {
        let mut a = vec![0.0; 6];
        a[total] = 1.0;
        a[parts[0]] = -1.0;
        a[parts[1]] = -1.0;
        let b: Vec<f64> = a.iter().map(|x| -x).collect();
        rows.push(Row::plain(format!("{name} split ≤"), a, 0.0));
        rows.push(Row::plain(format!("{name} split ≥"), b, 0.0));
    }
    RatePolytope::new(vars.iter().map(|s| s.to_string()).collect(), rows, config.penalties)
}
