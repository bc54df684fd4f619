//! Two-sender channels with two legitimate receivers and an eavesdropper, their
//! JSON document form, input distributions and the control states built from them.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::entropic::{Atom, CqState, TOL_PROB};
use crate::error::{Error, Result};
use crate::operator::{validate_density, ComplexMatrix, DensityOperator, RegisterLayout, C64};

pub const SENDER_ONE: &str = "X1";
pub const SENDER_TWO: &str = "X2";
pub const RECEIVER_ONE: &str = "Y1";
pub const RECEIVER_TWO: &str = "Y2";
pub const EAVESDROPPER: &str = "Z";
pub const TIME_SHARING: &str = "Q";
pub const COMMON_ONE: &str = "X10";
pub const PERSONAL_ONE: &str = "X11";
pub const COMMON_TWO: &str = "X20";
pub const PERSONAL_TWO: &str = "X22";

/// Output dimensions, in the fixed tensor order `Y1, Y2, Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutputDims {
    pub y1: usize,
    pub y2: usize,
    pub z: usize,
}

impl OutputDims {
    pub fn total(&self) -> usize {
        self.y1 * self.y2 * self.z
    }

    pub fn layout(&self) -> RegisterLayout {
        RegisterLayout::new([(RECEIVER_ONE, self.y1), (RECEIVER_TWO, self.y2), (EAVESDROPPER, self.z)])
            .expect("fixed distinct names")
    }
}

/// Split of one input alphabet into common and personal parts.
#[derive(Clone, Debug, PartialEq)]
pub struct Split {
    pub common: Vec<String>,
    pub personal: Vec<String>,
    /// `table[c][p]` is the index of the physical input letter.
    pub table: Vec<Vec<usize>>,
    /// Whether the table is written out in the document.
    pub explicit: bool,
}

impl Split {
    /// Cartesian-product split: letter index `c * |personal| + p`.
    pub fn product(common: Vec<String>, personal: Vec<String>) -> Self {
        let np = personal.len();
        let table = (0..common.len())
            .map(|c| (0..np).map(|p| c * np + p).collect())
            .collect();
        Self {
            common,
            personal,
            table,
            explicit: false,
        }
    }

    pub fn with_table(common: Vec<String>, personal: Vec<String>, table: Vec<Vec<usize>>) -> Self {
        Self {
            common,
            personal,
            table,
            explicit: true,
        }
    }

    fn validate(&self, input: &str, alphabet: usize) -> Result<()> {
        if self.common.is_empty() || self.personal.is_empty() {
            return Err(Error::InvalidChannel(format!("split of {input} has an empty part")));
        }
        if self.table.len() != self.common.len()
            || self.table.iter().any(|row| row.len() != self.personal.len())
        {
            return Err(Error::InvalidChannel(format!(
                "split table of {input} is not total"
            )));
        }
        let mut hit = vec![false; alphabet];
        for &x in self.table.iter().flatten() {
            if x >= alphabet {
                return Err(Error::InvalidChannel(format!(
                    "split table of {input} maps outside the alphabet"
                )));
            }
            hit[x] = true;
        }
        if hit.iter().any(|h| !h) {
            return Err(Error::InvalidChannel(format!(
                "split table of {input} is not onto the alphabet"
            )));
        }
        Ok(())
    }
}

/// Channel `(x1, x2) ↦ ρ_{x1 x2}` on `Y1 ⊗ Y2 ⊗ Z`.
#[derive(Clone, Debug)]
pub struct ChannelSpec {
    pub name: String,
    pub x1: Vec<String>,
    pub x2: Vec<String>,
    pub dims: OutputDims,
    /// `states[i][j]` is the output for the `i`-th letter of `x1` and `j`-th of `x2`.
    states: Vec<Vec<DensityOperator>>,
    splits: [Option<Split>; 2],
}

fn pair_label(a: &str, b: &str) -> String {
    format!("{a},{b}")
}

impl ChannelSpec {
    pub fn new(
        name: impl Into<String>,
        x1: Vec<String>,
        x2: Vec<String>,
        dims: OutputDims,
        states: Vec<Vec<DensityOperator>>,
    ) -> Result<Self> {
        if x1.is_empty() || x2.is_empty() {
            return Err(Error::InvalidChannel(String::from("empty input alphabet")));
        }
        for (input, alphabet) in [(SENDER_ONE, &x1), (SENDER_TWO, &x2)] {
            for (i, s) in alphabet.iter().enumerate() {
                if alphabet[..i].contains(s) {
                    return Err(Error::InvalidChannel(format!("repeated symbol {s} in {input}")));
                }
            }
        }
        if dims.y1 == 0 || dims.y2 == 0 || dims.z == 0 {
            return Err(Error::InvalidChannel(String::from("zero output dimension")));
        }
        if states.len() != x1.len() || states.iter().any(|row| row.len() != x2.len()) {
            return Err(Error::InvalidChannel(String::from(
                "state table does not cover every input pair",
            )));
        }
        for (i, row) in states.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                let wrap = |source: Error| Error::InvalidChannelState {
                    pair: pair_label(&x1[i], &x2[j]),
                    source: Box::new(source),
                };
                if s.dim() != dims.total() {
                    return Err(wrap(Error::DimensionMismatch {
                        expected: dims.total(),
                        got: s.dim(),
                    }));
                }
                validate_density(s.matrix()).map_err(wrap)?;
            }
        }
        Ok(Self {
            name: name.into(),
            x1,
            x2,
            dims,
            states,
            splits: [None, None],
        })
    }

    pub fn with_splits(mut self, first: Split, second: Split) -> Result<Self> {
        first.validate(SENDER_ONE, self.x1.len())?;
        second.validate(SENDER_TWO, self.x2.len())?;
        self.splits = [Some(first), Some(second)];
        Ok(self)
    }

    pub fn state(&self, x1: usize, x2: usize) -> &DensityOperator {
        &self.states[x1][x2]
    }

    pub fn split(&self, sender: usize) -> Option<&Split> {
        self.splits.get(sender).and_then(|s| s.as_ref())
    }

    pub fn is_split(&self) -> bool {
        self.splits.iter().all(|s| s.is_some())
    }

    pub fn state_count(&self) -> usize {
        self.x1.len() * self.x2.len()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateDocument {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SplitDocument {
    common: Vec<String>,
    personal: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    map: Option<BTreeMap<String, String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelDocument {
    name: String,
    inputs: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    splits: Option<BTreeMap<String, SplitDocument>>,
    outputs: BTreeMap<String, usize>,
    states: BTreeMap<String, StateDocument>,
}

fn matrix_from_document(doc: &StateDocument, dim: usize) -> Result<ComplexMatrix> {
    let rows_ok = |rows: &Vec<Vec<f64>>| rows.len() == dim && rows.iter().all(|r| r.len() == dim);
    if !rows_ok(&doc.re) || !rows_ok(&doc.im) {
        let got = if doc.re.len() != dim { doc.re.len() } else { doc.im.len() };
        return Err(Error::DimensionMismatch { expected: dim, got });
    }
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| {
        C64::new(doc.re[i][j], doc.im[i][j])
    }))
}

fn required<'a, T>(map: &'a BTreeMap<String, T>, key: &str, what: &str) -> Result<&'a T> {
    map.get(key)
        .ok_or_else(|| Error::InvalidChannel(format!("missing {what} `{key}`")))
}

fn split_from_document(input: &str, doc: &SplitDocument, alphabet: &[String]) -> Result<Split> {
    match &doc.map {
        None => {
            if doc.common.len() * doc.personal.len() != alphabet.len() {
                return Err(Error::InvalidChannel(format!(
                    "split of {input} without a map needs |common|·|personal| = |{input}|"
                )));
            }
            Ok(Split::product(doc.common.clone(), doc.personal.clone()))
        }
        Some(map) => {
            let mut table = vec![vec![usize::MAX; doc.personal.len()]; doc.common.len()];
            for (key, letter) in map {
                let (c, p) = key.split_once(',').ok_or_else(|| {
                    Error::InvalidChannel(format!("split map key `{key}` of {input} is not `c,p`"))
                })?;
                let ci = doc.common.iter().position(|s| s == c);
                let pi = doc.personal.iter().position(|s| s == p);
                let xi = alphabet.iter().position(|s| s == letter);
                match (ci, pi, xi) {
                    (Some(ci), Some(pi), Some(xi)) => table[ci][pi] = xi,
                    _ => {
                        return Err(Error::InvalidChannel(format!(
                            "split map entry `{key}` -> `{letter}` of {input} uses unknown symbols"
                        )))
                    }
                }
            }
            if table.iter().flatten().any(|&x| x == usize::MAX) {
                return Err(Error::InvalidChannel(format!("split map of {input} is not total")));
            }
            Ok(Split::with_table(doc.common.clone(), doc.personal.clone(), table))
        }
    }
}

/// Parses and validates a channel document.
pub fn load_channel(document: &str) -> Result<ChannelSpec> {
    let doc: ChannelDocument = serde_json::from_str(document)?;
    for key in doc.inputs.keys() {
        if key != SENDER_ONE && key != SENDER_TWO {
            return Err(Error::InvalidChannel(format!("unknown input `{key}`")));
        }
    }
    for key in doc.outputs.keys() {
        if ![RECEIVER_ONE, RECEIVER_TWO, EAVESDROPPER].contains(&key.as_str()) {
            return Err(Error::InvalidChannel(format!("unknown output `{key}`")));
        }
    }
    let x1 = required(&doc.inputs, SENDER_ONE, "input")?.clone();
    let x2 = required(&doc.inputs, SENDER_TWO, "input")?.clone();
    let dims = OutputDims {
        y1: *required(&doc.outputs, RECEIVER_ONE, "output")?,
        y2: *required(&doc.outputs, RECEIVER_TWO, "output")?,
        z: *required(&doc.outputs, EAVESDROPPER, "output")?,
    };
    let mut remaining: BTreeMap<&str, &StateDocument> =
        doc.states.iter().map(|(k, v)| (k.as_str(), v)).collect();
    let mut states = Vec::with_capacity(x1.len());
    for a in &x1 {
        let mut row = Vec::with_capacity(x2.len());
        for b in &x2 {
            let label = pair_label(a, b);
            let state_doc = remaining.remove(label.as_str()).ok_or_else(|| {
                Error::InvalidChannel(format!("missing state for input pair ({label})"))
            })?;
            let wrap = |source: Error| Error::InvalidChannelState {
                pair: label.clone(),
                source: Box::new(source),
            };
            let m = matrix_from_document(state_doc, dims.total()).map_err(wrap)?;
            validate_density(&m).map_err(wrap)?;
            row.push(DensityOperator::from_matrix_unchecked(m));
        }
        states.push(row);
    }
    if let Some(extra) = remaining.keys().next() {
        return Err(Error::InvalidChannel(format!(
            "state for unknown input pair ({extra})"
        )));
    }
    let spec = ChannelSpec::new(doc.name.clone(), x1, x2, dims, states)?;
    match &doc.splits {
        None => Ok(spec),
        Some(splits) => {
            if let Some(key) = splits.keys().find(|k| *k != SENDER_ONE && *k != SENDER_TWO) {
                return Err(Error::InvalidChannel(format!("split for unknown input `{key}`")));
            }
            let first = split_from_document(SENDER_ONE, required(splits, SENDER_ONE, "split")?, &spec.x1)?;
            let second = split_from_document(SENDER_TWO, required(splits, SENDER_TWO, "split")?, &spec.x2)?;
            spec.with_splits(first, second)
        }
    }
}

pub fn load_channel_file(path: impl AsRef<Path>) -> Result<ChannelSpec> {
    load_channel(&std::fs::read_to_string(path)?)
}

fn split_to_document(split: &Split, alphabet: &[String]) -> SplitDocument {
    let map = split.explicit.then(|| {
        let mut m = BTreeMap::new();
        for (c, row) in split.table.iter().enumerate() {
            for (p, &x) in row.iter().enumerate() {
                m.insert(
                    pair_label(&split.common[c], &split.personal[p]),
                    alphabet[x].clone(),
                );
            }
        }
        m
    });
    SplitDocument {
        common: split.common.clone(),
        personal: split.personal.clone(),
        map,
    }
}

/// Canonical pretty-printed document; `load_channel` followed by `save_channel`
/// reproduces a canonical document byte for byte.
pub fn save_channel(spec: &ChannelSpec) -> String {
    let mut states = BTreeMap::new();
    for (i, a) in spec.x1.iter().enumerate() {
        for (j, b) in spec.x2.iter().enumerate() {
            let m = spec.states[i][j].matrix();
            let n = m.nrows();
            let part = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
                (0..n).map(|r| (0..n).map(|c| f(&m[(r, c)])).collect()).collect()
            };
            states.insert(
                pair_label(a, b),
                StateDocument {
                    re: part(|z| z.re),
                    im: part(|z| z.im),
                },
            );
        }
    }
    let splits = match (&spec.splits[0], &spec.splits[1]) {
        (Some(s1), Some(s2)) => {
            let mut m = BTreeMap::new();
            m.insert(SENDER_ONE.to_string(), split_to_document(s1, &spec.x1));
            m.insert(SENDER_TWO.to_string(), split_to_document(s2, &spec.x2));
            Some(m)
        }
        _ => None,
    };
    let doc = ChannelDocument {
        name: spec.name.clone(),
        inputs: BTreeMap::from([
            (SENDER_ONE.to_string(), spec.x1.clone()),
            (SENDER_TWO.to_string(), spec.x2.clone()),
        ]),
        splits,
        outputs: BTreeMap::from([
            (RECEIVER_ONE.to_string(), spec.dims.y1),
            (RECEIVER_TWO.to_string(), spec.dims.y2),
            (EAVESDROPPER.to_string(), spec.dims.z),
        ]),
        states,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("channel documents serialize");
    text.push('\n');
    text
}

/// Input distribution in one of the two supported shapes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InputDistribution {
    /// `p_Q(q) p_{X1|Q}(x1|q) p_{X2|Q}(x2|q)`.
    TimeSharing {
        q: Vec<f64>,
        x1_given_q: Vec<Vec<f64>>,
        x2_given_q: Vec<Vec<f64>>,
    },
    /// Independent common and personal parts.
    Split {
        x10: Vec<f64>,
        x11: Vec<f64>,
        x20: Vec<f64>,
        x22: Vec<f64>,
    },
}

fn check_probability_vector(p: &[f64], what: &str, len: usize) -> Result<()> {
    if p.len() != len {
        return Err(Error::InvalidDistribution(format!(
            "{what} has {} entries, alphabet has {len}",
            p.len()
        )));
    }
    if p.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
        return Err(Error::InvalidDistribution(format!("{what} has a negative entry")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > TOL_PROB {
        return Err(Error::InvalidDistribution(format!("{what} sums to {total}")));
    }
    Ok(())
}

impl InputDistribution {
    pub fn uniform_time_sharing(n1: usize, n2: usize) -> Self {
        InputDistribution::TimeSharing {
            q: vec![1.0],
            x1_given_q: vec![vec![1.0 / n1 as f64; n1]],
            x2_given_q: vec![vec![1.0 / n2 as f64; n2]],
        }
    }

    pub fn uniform_split(channel: &ChannelSpec) -> Result<Self> {
        let (s1, s2) = split_pair(channel)?;
        let u = |n: usize| vec![1.0 / n as f64; n];
        Ok(InputDistribution::Split {
            x10: u(s1.common.len()),
            x11: u(s1.personal.len()),
            x20: u(s2.common.len()),
            x22: u(s2.personal.len()),
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("distributions serialize");
        s.push('\n');
        s
    }
}

fn split_pair(channel: &ChannelSpec) -> Result<(&Split, &Split)> {
    match (channel.split(0), channel.split(1)) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::InvalidChannel(format!(
            "channel `{}` declares no input splits",
            channel.name
        ))),
    }
}

/// `Σ p(q) p(x1|q) p(x2|q) |q x1 x2⟩⟨q x1 x2| ⊗ ρ_{x1 x2}` over registers `Q, X1, X2`.
pub fn control_state_t1(channel: &ChannelSpec, dist: &InputDistribution) -> Result<CqState> {
    let InputDistribution::TimeSharing {
        q,
        x1_given_q,
        x2_given_q,
    } = dist
    else {
        return Err(Error::InvalidDistribution(String::from(
            "time-sharing form (q, x1_given_q, x2_given_q) required",
        )));
    };
    if q.is_empty() {
        return Err(Error::InvalidDistribution(String::from("q is empty")));
    }
    check_probability_vector(q, "q", q.len())?;
    if x1_given_q.len() != q.len() || x2_given_q.len() != q.len() {
        return Err(Error::InvalidDistribution(String::from(
            "one conditional per time-sharing value required",
        )));
    }
    for (k, (a, b)) in x1_given_q.iter().zip(x2_given_q).enumerate() {
        check_probability_vector(a, &format!("x1_given_q[{k}]"), channel.x1.len())?;
        check_probability_vector(b, &format!("x2_given_q[{k}]"), channel.x2.len())?;
    }
    let mut atoms = Vec::new();
    for (k, &pq) in q.iter().enumerate() {
        for (i, &p1) in x1_given_q[k].iter().enumerate() {
            for (j, &p2) in x2_given_q[k].iter().enumerate() {
                atoms.push(Atom {
                    values: vec![k, i, j],
                    prob: pq * p1 * p2,
                    state: channel.states[i][j].clone(),
                });
            }
        }
    }
    CqState::new(
        RegisterLayout::new([
            (TIME_SHARING, q.len()),
            (SENDER_ONE, channel.x1.len()),
            (SENDER_TWO, channel.x2.len()),
        ])?,
        channel.dims.layout(),
        atoms,
    )
}

/// Product distribution over `X10, X11, X20, X22` tagged with the output for the
/// combined letters.
pub fn control_state_hk(channel: &ChannelSpec, dist: &InputDistribution) -> Result<CqState> {
    let InputDistribution::Split { x10, x11, x20, x22 } = dist else {
        return Err(Error::InvalidDistribution(String::from(
            "split form (x10, x11, x20, x22) required",
        )));
    };
    let (s1, s2) = split_pair(channel)?;
    check_probability_vector(x10, "x10", s1.common.len())?;
    check_probability_vector(x11, "x11", s1.personal.len())?;
    check_probability_vector(x20, "x20", s2.common.len())?;
    check_probability_vector(x22, "x22", s2.personal.len())?;
    let mut atoms = Vec::new();
    for (a, &pa) in x10.iter().enumerate() {
        for (b, &pb) in x11.iter().enumerate() {
            for (c, &pc) in x20.iter().enumerate() {
                for (d, &pd) in x22.iter().enumerate() {
                    atoms.push(Atom {
                        values: vec![a, b, c, d],
                        prob: pa * pb * pc * pd,
                        state: channel.states[s1.table[a][b]][s2.table[c][d]].clone(),
                    });
                }
            }
        }
    }
    CqState::new(
        RegisterLayout::new([
            (COMMON_ONE, s1.common.len()),
            (PERSONAL_ONE, s1.personal.len()),
            (COMMON_TWO, s2.common.len()),
            (PERSONAL_TWO, s2.personal.len()),
        ])?,
        channel.dims.layout(),
        atoms,
    )
}

/// Which legitimate receiver a sub-channel keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Receiver {
    Y1,
    Y2,
}

impl Receiver {
    pub fn register(self) -> &'static str {
        match self {
            Receiver::Y1 => RECEIVER_ONE,
            Receiver::Y2 => RECEIVER_TWO,
        }
    }

    pub fn other(self) -> Receiver {
        match self {
            Receiver::Y1 => Receiver::Y2,
            Receiver::Y2 => Receiver::Y1,
        }
    }
}

/// Sub-channel seen by one receiver and the eavesdropper: the other receiver is traced out.
pub fn submac_view(state: &CqState, receiver: Receiver) -> Result<CqState> {
    for r in [RECEIVER_ONE, RECEIVER_TWO, EAVESDROPPER] {
        if !state.quantum().contains(r) {
            return Err(Error::UnknownRegister(r.to_string()));
        }
    }
    let mut keep: Vec<&str> = state.classical().names().collect();
    keep.push(receiver.register());
    keep.push(EAVESDROPPER);
    state.marginal(&keep)
}

/// Message and junk rates of a code, in bits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MessageSetSpec {
    pub rates: [f64; 2],
    pub junk_rates: [f64; 2],
}

impl MessageSetSpec {
    pub fn new(rates: [f64; 2], junk_rates: [f64; 2]) -> Result<Self> {
        for (name, v) in [
            ("R1", rates[0]),
            ("R2", rates[1]),
            ("junk_R1", junk_rates[0]),
            ("junk_R2", junk_rates[1]),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::OutOfRange { name, value: v });
            }
        }
        Ok(Self { rates, junk_rates })
    }

    /// `|M_i| = 2^{R_i}`.
    pub fn message_set_sizes(&self) -> [f64; 2] {
        [self.rates[0].exp2(), self.rates[1].exp2()]
    }

    /// `|K_i| = 2^{R̃_i}`.
    pub fn junk_set_sizes(&self) -> [f64; 2] {
        [self.junk_rates[0].exp2(), self.junk_rates[1].exp2()]
    }
}
