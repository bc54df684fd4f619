use super::polytope::{support_2d, vertices_2d, RatePolytope, Row};
use crate::error::{Error, Result};

const COEF_TOL: f64 = 1e-12;
const BOUND_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
struct Ineq {
    a: Vec<f64>,
    b: f64,
    tag: String,
}

impl Ineq {
    fn normalized(mut self) -> Self {
        let m = self.a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if m > 0.0 && self.b.is_finite() {
            self.a.iter_mut().for_each(|x| {
                *x /= m;
                if x.abs() < COEF_TOL {
                    *x = 0.0;
                }
            });
            self.b /= m;
        } else if m > 0.0 {
            self.a.iter_mut().for_each(|x| *x /= m);
        }
        self
    }

    /// `a ≤ 0` componentwise with `b ≥ 0`: implied by nonnegativity alone.
    fn is_trivial(&self) -> bool {
        self.a.iter().all(|x| *x <= COEF_TOL) && self.b >= -BOUND_TOL
    }

    fn is_contradiction(&self) -> bool {
        self.a.iter().all(|x| x.abs() <= COEF_TOL) && self.b < -BOUND_TOL
    }
}

/// Whether `s` together with `x ≥ 0` implies `r`: some `λ ≥ 0` has `λ·a_s ≥ a_r`
/// and `λ·b_s ≤ b_r`.
fn implies(s: &Ineq, r: &Ineq) -> bool {
    let mut lo = 0.0f64;
    let mut hi = f64::INFINITY;
    for (&si, &ri) in s.a.iter().zip(&r.a) {
        if si > COEF_TOL {
            lo = lo.max(ri / si);
        } else if si < -COEF_TOL {
            hi = hi.min(ri / si);
        } else if ri > COEF_TOL {
            return false;
        }
    }
    if lo > hi * (1.0 + 1e-12) + 1e-12 {
        return false;
    }
    let lambda = if s.b >= 0.0 { lo } else { hi };
    if !lambda.is_finite() {
        return false;
    }
    let lhs = if lambda == 0.0 { 0.0 } else { lambda * s.b };
    lhs <= r.b + BOUND_TOL * (1.0 + r.b.abs())
}

fn prune(rows: Vec<Ineq>) -> Vec<Ineq> {
    let mut kept: Vec<Ineq> = Vec::new();
    for r in rows {
        if r.is_trivial() {
            continue;
        }
        if kept.iter().any(|s| implies(s, &r)) {
            continue;
        }
        kept.retain(|s| !implies(&r, s));
        kept.push(r);
    }
    kept
}

/// Eliminates variable `k`, with its nonnegativity `−x_k ≤ 0` always among the lower bounds.
fn eliminate_column(rows: Vec<Ineq>, k: usize, name: &str) -> Vec<Ineq> {
    let n = rows.first().map_or(0, |r| r.a.len());
    let mut lower = vec![0.0; n];
    if n > 0 {
        lower[k] = -1.0;
    }
    let (mut pos, mut neg, mut out) = (
        Vec::new(),
        vec![Ineq {
            a: lower,
            b: 0.0,
            tag: format!("{name} ≥ 0"),
        }],
        Vec::new(),
    );
    for r in rows {
        if r.a[k] > COEF_TOL {
            pos.push(r);
        } else if r.a[k] < -COEF_TOL {
            neg.push(r);
        } else {
            let mut r = r;
            r.a[k] = 0.0;
            out.push(r);
        }
    }
    for p in &pos {
        for n in &neg {
            let (wp, wn) = (-n.a[k], p.a[k]);
            let mut a: Vec<f64> = p.a.iter().zip(&n.a).map(|(x, y)| wp * x + wn * y).collect();
            a[k] = 0.0;
            let b = wp * p.b + wn * n.b;
            out.push(
                Ineq {
                    a,
                    b,
                    tag: format!("{} & {}", p.tag, n.tag),
                }
                .normalized(),
            );
        }
    }
    prune(out)
}

/// Exact projection onto the variables not listed in `eliminate`.
///
/// Redundant rows are removed by a pairwise implication check after every step and,
/// for two-variable results, by testing whether dropping a row enlarges the region.
pub fn fourier_motzkin(poly: &RatePolytope, eliminate: &[&str]) -> Result<RatePolytope> {
    if eliminate.is_empty() {
        return Ok(poly.clone());
    }
    let n = poly.variables.len();
    let mut targets = Vec::new();
    for name in eliminate {
        let k = poly
            .variable_index(name)
            .ok_or_else(|| Error::InvalidPolytope(format!("unknown variable {name}")))?;
        if !targets.contains(&k) {
            targets.push(k);
        }
    }
    let mut rows: Vec<Ineq> = poly
        .rows
        .iter()
        .filter(|r| r.bound != f64::INFINITY)
        .map(|r| Ineq {
            a: r.coefficients.clone(),
            b: r.bound,
            tag: r.provenance.clone(),
        })
        .collect();
    let keep: Vec<usize> = (0..n).filter(|k| !targets.contains(k)).collect();
    let variables: Vec<String> = keep.iter().map(|&k| poly.variables[k].clone()).collect();
    let contradiction = |rows: &[Ineq]| {
        rows.iter()
            .any(|r| r.b == f64::NEG_INFINITY || r.is_contradiction())
    };
    let infeasible = || {
        RatePolytope::new(
            variables.clone(),
            vec![Row::plain("infeasible", vec![0.0; keep.len()], f64::NEG_INFINITY)],
            poly.penalty_mode,
        )
    };
    if contradiction(&rows) {
        return infeasible();
    }
    rows = prune(rows.into_iter().map(Ineq::normalized).collect());
    for &k in &targets {
        rows = eliminate_column(rows, k, &poly.variables[k]);
        if contradiction(&rows) {
            return infeasible();
        }
    }
    let projected: Vec<Row> = rows
        .into_iter()
        .map(|r| Row::plain(r.tag, keep.iter().map(|&k| r.a[k]).collect(), r.b))
        .collect();
    let mut result = RatePolytope::new(variables, projected, poly.penalty_mode)?;
    if result.variables.len() == 2 {
        drop_non_facets_2d(&mut result)?;
    }
    Ok(result)
}

/// Removes every row whose omission leaves the two-variable region unchanged.
fn drop_non_facets_2d(poly: &mut RatePolytope) -> Result<()> {
    if vertices_2d(poly)?.infeasible {
        return Ok(());
    }
    let mut i = 0;
    while i < poly.rows.len() {
        let mut without = poly.clone();
        let row = without.rows.remove(i);
        let direction = [row.coefficients[0], row.coefficients[1]];
        let implied = match support_2d(&without, direction)? {
            Some(m) => m <= row.bound + BOUND_TOL * (1.0 + row.bound.abs() + m.abs()),
            None => false,
        };
        if implied {
            *poly = without;
        } else {
            i += 1;
        }
    }
    Ok(())
}
