use std::cell::RefCell;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::polytope::{InfoTerm, PenaltyMode, PenaltyTerm, TermKind};
use crate::channel::{COMMON_ONE, COMMON_TWO, PERSONAL_ONE, PERSONAL_TWO, SENDER_ONE, SENDER_TWO};
use crate::entropic::{
    cond_smooth_ht_mi, cond_smooth_max_mi, ht_mutual_info, smooth_max_mutual_info, CqState,
    Smoothing, ToleranceParams,
};
use crate::error::{Error, Result};

/// Everything a region builder needs besides the state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RegionConfig {
    pub params: ToleranceParams,
    pub penalties: PenaltyMode,
    pub smoothing: Smoothing,
}

impl RegionConfig {
    pub fn new(params: ToleranceParams, penalties: PenaltyMode, smoothing: Smoothing) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            penalties,
            smoothing,
        })
    }
}

const TOKENS: [&str; 10] = ["X10", "X11", "X20", "X22", "X1", "X2", "Y1", "Y2", "Z", "Q"];

/// Splits a concatenated register list such as `X10X2Y1` into register names.
pub fn parse_registers(spec: &str) -> Result<Vec<&'static str>> {
    let mut rest = spec;
    let mut out = Vec::new();
    while !rest.is_empty() {
        let token = TOKENS
            .iter()
            .find(|t| rest.starts_with(*t))
            .ok_or_else(|| Error::UnknownRegister(rest.to_string()))?;
        out.push(*token);
        rest = &rest[token.len()..];
    }
    Ok(out)
}

/// Evaluates and caches information terms on one state.
pub struct Evaluator<'a> {
    state: &'a CqState,
    config: RegionConfig,
    cache: RefCell<HashMap<(TermKind, Vec<String>, Vec<String>, Option<String>), f64>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(state: &'a CqState, config: RegionConfig) -> Self {
        Self {
            state,
            config,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn state(&self) -> &CqState {
        self.state
    }

    pub fn config(&self) -> &RegionConfig {
        &self.config
    }

    /// Sender names stand for their split parts when the state only carries those.
    fn expand(&self, spec: &str) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for r in parse_registers(spec)? {
            let parts: &[&str] = match r {
                SENDER_ONE if !self.state.has_register(SENDER_ONE) => &[COMMON_ONE, PERSONAL_ONE],
                SENDER_TWO if !self.state.has_register(SENDER_TWO) => &[COMMON_TWO, PERSONAL_TWO],
                _ => std::slice::from_ref(&r),
            };
            for p in parts {
                if !out.iter().any(|o: &String| o == p) {
                    out.push(p.to_string());
                }
            }
        }
        Ok(out)
    }

    fn evaluate(
        &self,
        kind: TermKind,
        a: &[String],
        b: &[String],
        cond: Option<&str>,
    ) -> Result<f64> {
        let mut ka = a.to_vec();
        let mut kb = b.to_vec();
        ka.sort();
        kb.sort();
        let key = (kind, ka, kb, cond.map(str::to_string));
        if let Some(v) = self.cache.borrow().get(&key) {
            return Ok(*v);
        }
        let ra: Vec<&str> = a.iter().map(String::as_str).collect();
        let rb: Vec<&str> = b.iter().map(String::as_str).collect();
        let p = &self.config.params;
        let value = match (kind, cond) {
            (TermKind::HypothesisTesting, None) => ht_mutual_info(self.state, &ra, &rb, p.eps)?,
            (TermKind::HypothesisTesting, Some(c)) => {
                cond_smooth_ht_mi(self.state, &ra, &rb, c, p.eps, self.config.smoothing.convention)?
            }
            (TermKind::SmoothMax, None) => {
                smooth_max_mutual_info(self.state, &ra, &rb, p.eta(), self.config.smoothing)?
            }
            (TermKind::SmoothMax, Some(c)) => {
                cond_smooth_max_mi(self.state, &ra, &rb, c, p.eta(), self.config.smoothing)?
            }
        };
        self.cache.borrow_mut().insert(key, value);
        Ok(value)
    }

    /// Term `coefficient · kind(a : b | cond)` with register lists written as printed.
    pub fn term(
        &self,
        kind: TermKind,
        coefficient: f64,
        a: &str,
        b: &str,
        cond: Option<&str>,
    ) -> Result<InfoTerm> {
        let part_a = self.expand(a)?;
        let part_b = self.expand(b)?;
        let value = self.evaluate(kind, &part_a, &part_b, cond)?;
        let symbol = match kind {
            TermKind::HypothesisTesting => "I_H",
            TermKind::SmoothMax => "I_max",
        };
        let label = match cond {
            Some(c) => format!("{symbol}({a}:{b}|{c})"),
            None => format!("{symbol}({a}:{b})"),
        };
        let smoothing = match kind {
            TermKind::HypothesisTesting => self.config.params.eps,
            TermKind::SmoothMax => self.config.params.eta(),
        };
        Ok(InfoTerm {
            kind,
            label,
            part_a,
            part_b,
            condition: cond.map(str::to_string),
            smoothing,
            coefficient,
            value,
        })
    }

    pub fn ht(&self, a: &str, b: &str) -> Result<InfoTerm> {
        self.term(TermKind::HypothesisTesting, 1.0, a, b, None)
    }

    pub fn max(&self, coefficient: f64, a: &str, b: &str) -> Result<InfoTerm> {
        self.term(TermKind::SmoothMax, -coefficient, a, b, None)
    }

    /// Terms from `(a, b)` pairs, each with coefficient one.
    pub fn ht_sum(&self, pairs: &[(&str, &str)]) -> Result<Vec<InfoTerm>> {
        pairs.iter().map(|(a, b)| self.ht(a, b)).collect()
    }

    /// Subtracted max-information terms from `(multiplicity, a, b)`.
    pub fn max_terms(&self, items: &[(f64, &str, &str)]) -> Result<Vec<InfoTerm>> {
        items.iter().map(|(k, a, b)| self.max(*k, a, b)).collect()
    }
}

/// Multiplicities of the additive constants of one row.
#[derive(Clone, Copy, Debug, Default)]
pub struct PenaltySpec {
    /// Multiple of log₂ ε.
    pub log_eps: f64,
    /// Plain integer constant.
    pub constant: f64,
    /// Multiple of −log₂(3/ε'³).
    pub covering: f64,
    /// Multiple of log₂ of the δ-type parameter.
    pub log_delta: f64,
    pub big_o: bool,
}

impl PenaltySpec {
    /// `k·(log ε − 2)`.
    pub fn decoding(k: f64) -> Self {
        Self {
            log_eps: k,
            constant: -2.0 * k,
            ..Default::default()
        }
    }

    pub fn terms(&self, params: &ToleranceParams, delta: f64, delta_name: &str) -> Vec<PenaltyTerm> {
        let mut out = Vec::new();
        let fmt = |k: f64| {
            if k == 1.0 {
                String::new()
            } else if k == 0.5 {
                String::from("½·")
            } else if k == 0.25 {
                String::from("¼·")
            } else if k == 1.5 {
                String::from("3/2·")
            } else {
                format!("{k}·")
            }
        };
        if self.log_eps != 0.0 {
            out.push(PenaltyTerm {
                label: format!("{}log ε", fmt(self.log_eps)),
                value: self.log_eps * params.eps.log2(),
            });
        }
        if self.constant != 0.0 {
            out.push(PenaltyTerm {
                label: format!("{}", self.constant),
                value: self.constant,
            });
        }
        if self.covering != 0.0 {
            out.push(PenaltyTerm {
                label: format!("−{}log(3/ε'³)", fmt(self.covering)),
                value: -self.covering * params.log_three_over_eps_prime_cubed(),
            });
        }
        if self.log_delta != 0.0 {
            out.push(PenaltyTerm {
                label: format!("{}log {delta_name}", fmt(self.log_delta)),
                value: self.log_delta * delta.log2(),
            });
        }
        if self.big_o {
            out.push(PenaltyTerm {
                label: String::from("O(1)"),
                value: params.big_o_constant,
            });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn register_lists_split() {
        assert_eq!(parse_registers("X10X2Y1").unwrap(), vec!["X10", "X2", "Y1"]);
        assert_eq!(parse_registers("ZX10X11X20").unwrap(), vec!["Z", "X10", "X11", "X20"]);
        assert!(parse_registers("W").is_err());
    }

    #[test]
    fn penalty_sums() {
        let p = ToleranceParams::default();
        let t = PenaltySpec {
            log_eps: 1.0,
            constant: -1.0,
            covering: 1.0,
            log_delta: 0.25,
            big_o: false,
        }
        .terms(&p, p.delta, "δ");
        let total: f64 = t.iter().map(|x| x.value).sum();
        let expected = -2.0 - 1.0 - 3000f64.log2() + 0.25 * 0.01f64.log2();
        assert!((total - expected).abs() < 1e-12);
        assert!((total + 16.21).abs() < 0.01);
    }
}
