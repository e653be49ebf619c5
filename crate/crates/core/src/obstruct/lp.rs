//! Exact feasibility for systems of linear equations and `>=` inequalities
//! over the rationals. Variables are free.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::Rational;
use crate::registry::LpSolver;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

/// `coeffs . x  (= | >=)  rhs`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rel: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, rel: Relation, rhs: Rational) -> Self {
        Constraint { coeffs, rel, rhs }
    }

    pub fn holds_at(&self, x: &[Rational]) -> bool {
        let lhs: Rational = self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
        match self.rel {
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

fn check_dims(n_vars: usize, constraints: &[Constraint]) -> Result<()> {
    for (i, c) in constraints.iter().enumerate() {
        if c.coeffs.len() != n_vars {
            return Err(Error::DimensionMismatch(format!(
                "constraint {i} has {} coefficients, expected {n_vars}",
                c.coeffs.len()
            )));
        }
    }
    Ok(())
}

/// Feasibility with the default kernel (simplex).
pub fn lp_feasible(constraints: &[Constraint]) -> Result<Option<Vec<Rational>>> {
    let n = constraints.first().map_or(0, |c| c.coeffs.len());
    Simplex.solve(n, constraints)
}

/// Phase-one simplex on a dense rational tableau with Bland's rule.
///
/// Free variables are split as `x = x+ - x-`, each `>=` row gets a surplus,
/// rows are sign-normalized to a nonnegative right-hand side and every row
/// starts with its own artificial variable.
pub struct Simplex;

impl LpSolver for Simplex {
    fn name(&self) -> &'static str {
        "simplex"
    }

    fn solve(&self, n_vars: usize, constraints: &[Constraint]) -> Result<Option<Vec<Rational>>> {
        check_dims(n_vars, constraints)?;
        let m = constraints.len();
        if m == 0 {
            return Ok(Some(vec![Rational::zero(); n_vars]));
        }
        let n_surplus = constraints.iter().filter(|c| c.rel == Relation::Ge).count();
        let n_struct = 2 * n_vars + n_surplus;
        let width = n_struct + m;
        // columns: x+ (n), x- (n), surplus, artificial; rhs kept separately
        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
        let mut rhs: Vec<Rational> = Vec::with_capacity(m);
        let mut surplus = 2 * n_vars;
        for (i, c) in constraints.iter().enumerate() {
            let mut row = vec![Rational::zero(); width];
            for (j, a) in c.coeffs.iter().enumerate() {
                row[j] = a.clone();
                row[n_vars + j] = -a;
            }
            if c.rel == Relation::Ge {
                row[surplus] = Rational::from_int(-1);
                surplus += 1;
            }
            let mut b = c.rhs.clone();
            if b.is_negative() {
                for v in row.iter_mut().take(n_struct) {
                    *v = -&*v;
                }
                b = -b;
            }
            row[n_struct + i] = Rational::one();
            rows.push(row);
            rhs.push(b);
        }
        let mut basis: Vec<usize> = (n_struct..width).collect();

        // reduced costs of the phase-one objective (minimize the artificial sum)
        let mut cost = vec![Rational::zero(); width];
        let mut value = Rational::zero();
        for (row, b) in rows.iter().zip(&rhs) {
            for j in 0..n_struct {
                cost[j] -= &row[j];
            }
            value -= b;
        }

        while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..m {
                if !rows[i][enter].is_positive() {
                    continue;
                }
                let ratio = &rhs[i] / &rows[i][enter];
                let better = match &leave {
                    None => true,
                    Some((k, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*k]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            // phase one is bounded below by zero, so some row always qualifies
            let Some((r, _)) = leave else {
                break;
            };
            let piv = rows[r][enter].clone();
            for v in rows[r].iter_mut() {
                *v = &*v / &piv;
            }
            rhs[r] = &rhs[r] / &piv;
            let pivot_row = rows[r].clone();
            let pivot_rhs = rhs[r].clone();
            for i in 0..m {
                if i == r || rows[i][enter].is_zero() {
                    continue;
                }
                let k = rows[i][enter].clone();
                for (v, p) in rows[i].iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *v -= &k * p;
                    }
                }
                rhs[i] -= &k * &pivot_rhs;
            }
            let k = cost[enter].clone();
            for (v, p) in cost.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &k * p;
                }
            }
            value -= &k * &pivot_rhs;
            basis[r] = enter;
        }

        if !value.is_zero() {
            return Ok(None);
        }
        let mut full = vec![Rational::zero(); width];
        for (i, &j) in basis.iter().enumerate() {
            full[j] = rhs[i].clone();
        }
        let x: Vec<Rational> = (0..n_vars).map(|j| &full[j] - &full[n_vars + j]).collect();
        Ok(Some(x))
    }
}

/// `coeffs . x >= rhs`, scaled so the first nonzero coefficient has absolute value one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Ineq {
    coeffs: Vec<Rational>,
    rhs: Rational,
}

impl Ineq {
    fn normalized(coeffs: Vec<Rational>, rhs: Rational) -> Ineq {
        match coeffs.iter().find(|c| !c.is_zero()).map(Rational::abs) {
            Some(s) => Ineq {
                coeffs: coeffs.iter().map(|c| c / &s).collect(),
                rhs: &rhs / &s,
            },
            None => Ineq { coeffs, rhs },
        }
    }

    fn slack_without(&self, k: usize, x: &[Option<Rational>]) -> Rational {
        let mut s = self.rhs.clone();
        for (j, c) in self.coeffs.iter().enumerate() {
            if j != k && !c.is_zero() {
                s -= c * x[j].as_ref().expect("later variables are fixed first");
            }
        }
        s
    }
}

/// Fourier–Motzkin elimination. Equalities are first used to substitute
/// variables away; remaining variables are eliminated in index order and a
/// solution is rebuilt by back-substitution, choosing the admissible value
/// closest to zero.
#[derive(Debug, Clone)]
pub struct FourierMotzkin {
    /// Refuse systems with more variables than this.
    pub max_vars: usize,
}

impl Default for FourierMotzkin {
    fn default() -> Self {
        FourierMotzkin { max_vars: 6 }
    }
}

struct Substitution {
    var: usize,
    // x_var = constant + sum coeffs[j] x_j
    constant: Rational,
    coeffs: Vec<Rational>,
}

impl LpSolver for FourierMotzkin {
    fn name(&self) -> &'static str {
        "fourier-motzkin"
    }

    fn solve(&self, n_vars: usize, constraints: &[Constraint]) -> Result<Option<Vec<Rational>>> {
        check_dims(n_vars, constraints)?;
        if n_vars > self.max_vars {
            return Err(Error::Unsupported(format!(
                "Fourier-Motzkin kernel limited to {} variables, got {n_vars}",
                self.max_vars
            )));
        }
        let mut eqs: Vec<(Vec<Rational>, Rational)> = Vec::new();
        let mut ineqs: Vec<(Vec<Rational>, Rational)> = Vec::new();
        for c in constraints {
            let row = (c.coeffs.clone(), c.rhs.clone());
            match c.rel {
                Relation::Eq => eqs.push(row),
                Relation::Ge => ineqs.push(row),
            }
        }

        let mut subs: Vec<Substitution> = Vec::new();
        while let Some((a, b)) = eqs.pop() {
            let Some(k) = a.iter().position(|c| !c.is_zero()) else {
                if !b.is_zero() {
                    return Ok(None);
                }
                continue;
            };
            let ak = a[k].clone();
            let mut coeffs: Vec<Rational> = a.iter().map(|c| -(c / &ak)).collect();
            coeffs[k] = Rational::zero();
            let constant = &b / &ak;
            let apply = |row: &mut (Vec<Rational>, Rational)| {
                let ck = row.0[k].clone();
                if ck.is_zero() {
                    return;
                }
                row.0[k] = Rational::zero();
                for (v, s) in row.0.iter_mut().zip(&coeffs) {
                    *v += &ck * s;
                }
                row.1 -= &ck * &constant;
            };
            eqs.iter_mut().for_each(apply);
            ineqs.iter_mut().for_each(apply);
            subs.push(Substitution {
                var: k,
                constant,
                coeffs,
            });
        }

        let substituted: BTreeSet<usize> = subs.iter().map(|s| s.var).collect();
        let mut stage: BTreeSet<Ineq> = ineqs
            .into_iter()
            .map(|(a, b)| Ineq::normalized(a, b))
            .collect();
        let mut stages: Vec<(usize, Vec<Ineq>)> = Vec::new();
        for k in (0..n_vars).filter(|k| !substituted.contains(k)) {
            let (with_k, rest): (Vec<Ineq>, Vec<Ineq>) =
                stage.into_iter().partition(|q| !q.coeffs[k].is_zero());
            let mut next: BTreeSet<Ineq> = rest.into_iter().collect();
            let (pos, neg): (Vec<&Ineq>, Vec<&Ineq>) =
                with_k.iter().partition(|q| q.coeffs[k].is_positive());
            for p in &pos {
                for q in &neg {
                    // both are scaled to |coefficient| one on the first nonzero;
                    // rescale on x_k explicitly to cancel it
                    let wp = -&q.coeffs[k];
                    let wq = p.coeffs[k].clone();
                    let coeffs: Vec<Rational> = p
                        .coeffs
                        .iter()
                        .zip(&q.coeffs)
                        .map(|(a, b)| &wp * a + &wq * b)
                        .collect();
                    let rhs = &wp * &p.rhs + &wq * &q.rhs;
                    next.insert(Ineq::normalized(coeffs, rhs));
                }
            }
            stages.push((k, with_k));
            stage = next;
        }
        if stage.iter().any(|q| q.rhs.is_positive()) {
            return Ok(None);
        }

        let mut x: Vec<Option<Rational>> = vec![None; n_vars];
        for (k, rows) in stages.iter().rev() {
            let mut lo: Option<Rational> = None;
            let mut hi: Option<Rational> = None;
            for q in rows {
                let bound = &q.slack_without(*k, &x) / &q.coeffs[*k];
                if q.coeffs[*k].is_positive() {
                    lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
                } else {
                    hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
                }
            }
            let zero = Rational::zero();
            let v = match (lo, hi) {
                (Some(l), _) if l > zero => l,
                (_, Some(h)) if h < zero => h,
                _ => zero,
            };
            x[*k] = Some(v);
        }
        for s in subs.iter().rev() {
            let mut v = s.constant.clone();
            for (j, c) in s.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    v += c * x[j].as_ref().expect("substituted variables resolve in order");
                }
            }
            x[s.var] = Some(v);
        }
        let x: Vec<Rational> = x.into_iter().map(|v| v.unwrap_or_default()).collect();
        debug_assert!(constraints.iter().all(|c| c.holds_at(&x)));
        Ok(Some(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    fn ge(c: &[i64], b: i64) -> Constraint {
        Constraint::new(c.iter().map(|&v| rat(v, 1)).collect(), Relation::Ge, rat(b, 1))
    }

    fn eq(c: &[i64], b: i64) -> Constraint {
        Constraint::new(c.iter().map(|&v| rat(v, 1)).collect(), Relation::Eq, rat(b, 1))
    }

    fn kernels() -> Vec<Box<dyn LpSolver>> {
        vec![Box::new(Simplex), Box::new(FourierMotzkin::default())]
    }

    #[test]
    fn interval() {
        let sys = [ge(&[1], 1), ge(&[-1], -2)];
        for k in kernels() {
            let x = k.solve(1, &sys).unwrap().unwrap();
            assert!(x[0] >= rat(1, 1) && x[0] <= rat(2, 1), "{}", k.name());
        }
        // Bland's rule lands on the vertex x = 2 here
        assert_eq!(lp_feasible(&sys).unwrap().unwrap(), vec![rat(2, 1)]);
    }

    #[test]
    fn contradictory() {
        let sys = [ge(&[1], 1), ge(&[-1], 0)];
        for k in kernels() {
            assert_eq!(k.solve(1, &sys).unwrap(), None, "{}", k.name());
        }
    }

    #[test]
    fn simplex_on_segment() {
        let sys = [eq(&[1, 1], 1), ge(&[1, 0], 0), ge(&[0, 1], 0)];
        let x = lp_feasible(&sys).unwrap().unwrap();
        assert!(sys.iter().all(|c| c.holds_at(&x)));
        assert!(x == vec![rat(1, 1), rat(0, 1)] || x == vec![rat(0, 1), rat(1, 1)]);
        assert_eq!(lp_feasible(&sys).unwrap().unwrap(), x);
        let fm = FourierMotzkin::default().solve(2, &sys).unwrap().unwrap();
        assert!(sys.iter().all(|c| c.holds_at(&fm)));
    }

    #[test]
    fn inconsistent_equalities() {
        let sys = [eq(&[1, 1], 1), eq(&[2, 2], 3)];
        for k in kernels() {
            assert_eq!(k.solve(2, &sys).unwrap(), None);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let sys = [ge(&[1, 0], 0), ge(&[1], 0)];
        assert!(matches!(lp_feasible(&sys), Err(Error::DimensionMismatch(_))));
        assert!(FourierMotzkin::default().solve(2, &sys).is_err());
    }

    #[test]
    fn fm_variable_limit() {
        let sys = [ge(&[1; 7], 0)];
        assert!(matches!(
            FourierMotzkin::default().solve(7, &sys),
            Err(Error::Unsupported(_))
        ));
    }
}
