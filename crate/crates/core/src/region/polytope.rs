use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Serializes non-finite values as the strings `inf`, `-inf` so reports stay valid JSON.
pub(crate) mod extended_float {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else if *v < 0.0 {
            s.serialize_str("-inf")
        } else {
            s.serialize_str("nan")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                other => Err(serde::de::Error::custom(format!("not a number: {other}"))),
            },
        }
    }
}

/// Whether additive constants enter the row bounds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PenaltyMode {
    #[default]
    Printed,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TermKind {
    #[serde(rename = "I_H")]
    HypothesisTesting,
    #[serde(rename = "I_max")]
    SmoothMax,
}

/// One evaluated mutual-information term, with its signed multiplicity in the row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfoTerm {
    pub kind: TermKind,
    pub label: String,
    pub part_a: Vec<String>,
    pub part_b: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<String>,
    /// ε for `I_H`, η for `I_max`.
    pub smoothing: f64,
    pub coefficient: f64,
    #[serde(with = "extended_float")]
    pub value: f64,
}

impl InfoTerm {
    pub fn contribution(&self) -> f64 {
        if self.coefficient == 0.0 {
            0.0
        } else {
            self.coefficient * self.value
        }
    }
}

/// One additive constant of a row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PenaltyTerm {
    pub label: String,
    pub value: f64,
}

/// `Σ coefficients · rates ≤ bound`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub provenance: String,
    pub coefficients: Vec<f64>,
    #[serde(with = "extended_float")]
    pub bound: f64,
    /// Alternatives under a minimum; the row uses the smallest sum.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alternatives: Vec<Vec<InfoTerm>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<InfoTerm>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub penalties: Vec<PenaltyTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

fn sum(terms: &[InfoTerm]) -> f64 {
    terms.iter().map(InfoTerm::contribution).sum()
}

impl Row {
    /// Row with a plain numeric bound and no term breakdown.
    pub fn plain(provenance: impl Into<String>, coefficients: Vec<f64>, bound: f64) -> Self {
        Self {
            provenance: provenance.into(),
            coefficients,
            bound,
            alternatives: Vec::new(),
            terms: Vec::new(),
            penalties: Vec::new(),
            warning: None,
        }
    }

    /// Row assembled from evaluated terms; the bound follows `mode`.
    pub fn assembled(
        provenance: impl Into<String>,
        coefficients: Vec<f64>,
        alternatives: Vec<Vec<InfoTerm>>,
        terms: Vec<InfoTerm>,
        penalties: Vec<PenaltyTerm>,
        mode: PenaltyMode,
    ) -> Self {
        let mut row = Self {
            provenance: provenance.into(),
            coefficients,
            bound: 0.0,
            alternatives,
            terms,
            penalties,
            warning: None,
        };
        row.bound = match mode {
            PenaltyMode::Printed => row.info_part() + row.penalty_part(),
            PenaltyMode::Off => row.info_part(),
        };
        row
    }

    pub fn with_warning(mut self, warning: impl Into<String>) -> Self {
        self.warning = Some(warning.into());
        self
    }

    /// Mutual-information part of the bound.
    pub fn info_part(&self) -> f64 {
        let alt = self
            .alternatives
            .iter()
            .map(|a| sum(a))
            .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.min(v))))
            .unwrap_or(0.0);
        alt + sum(&self.terms)
    }

    /// Sum of the printed additive constants.
    pub fn penalty_part(&self) -> f64 {
        self.penalties.iter().map(|p| p.value).sum()
    }

    /// Every term of the row, alternatives first.
    pub fn all_terms(&self) -> impl Iterator<Item = &InfoTerm> {
        self.alternatives.iter().flatten().chain(&self.terms)
    }
}

/// Inequality system over named rates; every variable is implicitly nonnegative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatePolytope {
    pub variables: Vec<String>,
    pub rows: Vec<Row>,
    #[serde(default)]
    pub penalty_mode: PenaltyMode,
}

impl RatePolytope {
    pub fn new(variables: Vec<String>, rows: Vec<Row>, penalty_mode: PenaltyMode) -> Result<Self> {
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].contains(v) {
                return Err(Error::InvalidPolytope(format!("repeated variable {v}")));
            }
        }
        for row in &rows {
            if row.coefficients.len() != variables.len() {
                return Err(Error::InvalidPolytope(format!(
                    "row `{}` has {} coefficients for {} variables",
                    row.provenance,
                    row.coefficients.len(),
                    variables.len()
                )));
            }
            if row.coefficients.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidPolytope(format!(
                    "row `{}` has a non-finite coefficient",
                    row.provenance
                )));
            }
            if row.bound.is_nan() {
                return Err(Error::InvalidPolytope(format!("row `{}` has a NaN bound", row.provenance)));
            }
        }
        Ok(Self {
            variables,
            rows,
            penalty_mode,
        })
    }

    /// Parses the JSON form written by `to_json`.
    pub fn from_json(text: &str) -> Result<Self> {
        let p: RatePolytope = serde_json::from_str(text)?;
        Self::new(p.variables, p.rows, p.penalty_mode)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("polytopes serialize");
        s.push('\n');
        s
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// Whether `point` satisfies every row and nonnegativity within `tol`
    /// (relative to the row scale).
    pub fn contains(&self, point: &[f64], tol: f64) -> bool {
        if point.iter().any(|x| *x < -tol) {
            return false;
        }
        self.rows.iter().all(|r| {
            let lhs: f64 = r.coefficients.iter().zip(point).map(|(a, x)| a * x).sum();
            let scale = 1.0 + r.bound.abs().min(1e300) + lhs.abs();
            lhs <= r.bound + tol * scale
        })
    }

    /// Intersection with another system over the same variables.
    pub fn intersect(&self, other: &RatePolytope) -> Result<RatePolytope> {
        if self.variables != other.variables {
            return Err(Error::InvalidPolytope(String::from(
                "intersection needs identical variable lists",
            )));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        RatePolytope::new(self.variables.clone(), rows, self.penalty_mode)
    }
}

/// Vertices of a two-variable region after clamping to the nonnegative quadrant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexSet {
    /// Counterclockwise, starting from the vertex nearest the origin.
    pub vertices: Vec<[f64; 2]>,
    /// The region is `{(0,0)}`, either genuinely or because the system has no
    /// nonnegative solution and the origin is reported by convention.
    pub degenerate: bool,
    /// The system has no nonnegative solution.
    pub infeasible: bool,
    /// The region extends to infinity; only finite vertices are listed.
    pub unbounded: bool,
}

const VERTEX_TOL: f64 = 1e-9;

fn feasible_2d(rows: &[([f64; 2], f64)], p: [f64; 2]) -> bool {
    p[0] >= -VERTEX_TOL
        && p[1] >= -VERTEX_TOL
        && rows.iter().all(|(a, b)| {
            let lhs = a[0] * p[0] + a[1] * p[1];
            lhs <= b + VERTEX_TOL * (1.0 + b.abs() + lhs.abs())
        })
}

/// Vertex enumeration for systems over exactly two variables.
pub fn vertices_2d(poly: &RatePolytope) -> Result<VertexSet> {
    if poly.variables.len() != 2 {
        return Err(Error::InvalidPolytope(format!(
            "vertex enumeration needs 2 variables, got {}",
            poly.variables.len()
        )));
    }
    let mut rows: Vec<([f64; 2], f64)> = Vec::new();
    let mut infeasible = false;
    for r in &poly.rows {
        let a = [r.coefficients[0], r.coefficients[1]];
        if r.bound == f64::INFINITY {
            continue;
        }
        if r.bound == f64::NEG_INFINITY {
            infeasible = true;
            continue;
        }
        rows.push((a, r.bound));
    }
    let mut lines = rows.clone();
    lines.push(([-1.0, 0.0], 0.0));
    lines.push(([0.0, -1.0], 0.0));
    let mut points: Vec<[f64; 2]> = Vec::new();
    if !infeasible {
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let ([a, b], e) = lines[i];
                let ([c, d], f) = lines[j];
                let det = a * d - b * c;
                let scale = (a.abs() + b.abs()) * (c.abs() + d.abs());
                if det.abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
                    continue;
                }
                let p = [(e * d - b * f) / det, (a * f - e * c) / det];
                if !(p[0].is_finite() && p[1].is_finite()) || !feasible_2d(&rows, p) {
                    continue;
                }
                let p = [p[0].max(0.0), p[1].max(0.0)];
                let dup = points.iter().any(|q| {
                    (q[0] - p[0]).abs() <= VERTEX_TOL * (1.0 + p[0].abs())
                        && (q[1] - p[1]).abs() <= VERTEX_TOL * (1.0 + p[1].abs())
                });
                if !dup {
                    points.push(p);
                }
            }
        }
    }
    if points.is_empty() {
        // no nonnegative solution: report the origin by convention
        return Ok(VertexSet {
            vertices: vec![[0.0, 0.0]],
            degenerate: true,
            infeasible: true,
            unbounded: false,
        });
    }
    let unbounded = recession_directions(&rows).next().is_some();
    let n = points.len() as f64;
    let cx = points.iter().map(|p| p[0]).sum::<f64>() / n;
    let cy = points.iter().map(|p| p[1]).sum::<f64>() / n;
    points.sort_by(|p, q| {
        let ap = (p[1] - cy).atan2(p[0] - cx);
        let aq = (q[1] - cy).atan2(q[0] - cx);
        ap.total_cmp(&aq)
    });
    let start = (0..points.len())
        .min_by(|&i, &j| {
            let (p, q) = (points[i], points[j]);
            (p[0] + p[1]).total_cmp(&(q[0] + q[1])).then(p[1].total_cmp(&q[1]))
        })
        .unwrap_or(0);
    points.rotate_left(start);
    let degenerate = !unbounded && points.len() == 1 && points[0] == [0.0, 0.0];
    Ok(VertexSet {
        vertices: points,
        degenerate,
        infeasible: false,
        unbounded,
    })
}

/// Nonnegative directions `d` with `a·d ≤ 0` for every row.
fn recession_directions(rows: &[([f64; 2], f64)]) -> impl Iterator<Item = [f64; 2]> + '_ {
    let mut candidates = vec![[1.0, 0.0], [0.0, 1.0]];
    for (a, _) in rows {
        for d in [[a[1], -a[0]], [-a[1], a[0]]] {
            if d[0] >= 0.0 && d[1] >= 0.0 && (d[0] > 0.0 || d[1] > 0.0) {
                candidates.push(d);
            }
        }
    }
    candidates.into_iter().filter(move |d| {
        rows.iter().all(|(a, _)| {
            let s = a[0] * d[0] + a[1] * d[1];
            s <= 1e-12 * (a[0].abs() + a[1].abs()) * (d[0].abs() + d[1].abs())
        })
    })
}

/// Largest value of `direction · x` over the region, `None` when unbounded or infeasible.
pub fn support_2d(poly: &RatePolytope, direction: [f64; 2]) -> Result<Option<f64>> {
    let v = vertices_2d(poly)?;
    if v.infeasible {
        return Ok(None);
    }
    if v.unbounded {
        let rows: Vec<([f64; 2], f64)> = poly
            .rows
            .iter()
            .filter(|r| r.bound.is_finite())
            .map(|r| ([r.coefficients[0], r.coefficients[1]], r.bound))
            .collect();
        if recession_directions(&rows).any(|d| d[0] * direction[0] + d[1] * direction[1] > 0.0) {
            return Ok(None);
        }
    }
    Ok(v
        .vertices
        .iter()
        .map(|p| p[0] * direction[0] + p[1] * direction[1])
        .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x)))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(rows: &[([f64; 2], f64)]) -> RatePolytope {
        RatePolytope::new(
            vec!["R1".into(), "R2".into()],
            rows.iter()
                .enumerate()
                .map(|(i, (a, b))| Row::plain(format!("r{i}"), a.to_vec(), *b))
                .collect(),
            PenaltyMode::Off,
        )
        .unwrap()
    }

    #[test]
    fn pentagon() {
        let p = poly(&[([1.0, 0.0], 1.0), ([0.0, 1.0], 1.0), ([1.0, 1.0], 1.5)]);
        let v = vertices_2d(&p).unwrap();
        let expected = [[0.0, 0.0], [1.0, 0.0], [1.0, 0.5], [0.5, 1.0], [0.0, 1.0]];
        assert_eq!(v.vertices.len(), 5);
        for (a, b) in v.vertices.iter().zip(expected) {
            assert!((a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12, "{a:?} vs {b:?}");
        }
        assert!(!v.degenerate && !v.unbounded && !v.infeasible);
    }

    #[test]
    fn negative_bound_clamps_to_origin() {
        let v = vertices_2d(&poly(&[([1.0, 0.0], -1.0)])).unwrap();
        assert_eq!(v.vertices, vec![[0.0, 0.0]]);
        assert!(v.degenerate && v.infeasible);
    }

    #[test]
    fn origin_only_region() {
        let v = vertices_2d(&poly(&[([1.0, 0.0], 0.0), ([0.0, 1.0], 0.0)])).unwrap();
        assert_eq!(v.vertices, vec![[0.0, 0.0]]);
        assert!(v.degenerate && !v.infeasible);
    }

    #[test]
    fn unbounded_direction_flagged() {
        let p = poly(&[([1.0, 0.0], 2.0)]);
        let v = vertices_2d(&p).unwrap();
        assert!(v.unbounded);
        assert_eq!(support_2d(&p, [1.0, 0.0]).unwrap(), Some(2.0));
        assert_eq!(support_2d(&p, [0.0, 1.0]).unwrap(), None);
    }

    #[test]
    fn info_and_penalty_parts() {
        let t = |v: f64, c: f64| InfoTerm {
            kind: TermKind::HypothesisTesting,
            label: String::new(),
            part_a: vec![],
            part_b: vec![],
            condition: None,
            smoothing: 0.1,
            coefficient: c,
            value: v,
        };
        let pen = vec![PenaltyTerm {
            label: "c".into(),
            value: -3.0,
        }];
        let r = Row::assembled(
            "x",
            vec![1.0, 0.0],
            vec![vec![t(2.0, 1.0)], vec![t(1.5, 1.0)]],
            vec![t(0.5, -1.0)],
            pen.clone(),
            PenaltyMode::Printed,
        );
        assert_eq!(r.info_part(), 1.0);
        assert_eq!(r.bound, -2.0);
        let off = Row::assembled("x", vec![1.0, 0.0], r.alternatives.clone(), r.terms.clone(), pen, PenaltyMode::Off);
        assert_eq!(off.bound - r.bound, 3.0);
    }

    #[test]
    fn json_round_trip() {
        let p = poly(&[([1.0, 2.0], 3.0), ([1.0, 0.0], f64::INFINITY)]);
        assert_eq!(RatePolytope::from_json(&p.to_json()).unwrap(), p);
    }
}
