//! Combinatorial lower-bound evidence for the semidefinite extension degree.
//!
//! For a finite sample `S` of `K = conv(hull_generators)` and `d >= 1`, the
//! condition checked is: every `d`-subset `T` of `S` is the exact zero set,
//! within `S`, of some affine functional nonnegative on `K`. Strict
//! positivity off `T` is normalized to `>= 1`, so each subset is one exact LP.

mod lp;

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use lp::{lp_feasible, Constraint, FourierMotzkin, Relation, Simplex};

use crate::error::{Error, Result};
use crate::exactpoly::Rational;
use crate::registry::LpSolver;

pub const FINITE_EVIDENCE_CAVEAT: &str = "a verdict on one finite sample is evidence, not proof: \
the lower bound needs the condition on samples of arbitrarily large size, and it is checked \
only relative to the convex hull of hull_generators";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSet {
    pub dim: usize,
    pub points: Vec<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hull_generators: Option<Vec<Vec<Rational>>>,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        let s = PointSet {
            dim,
            points,
            hull_generators: None,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_hull(mut self, generators: Vec<Vec<Rational>>) -> Result<Self> {
        self.hull_generators = Some(generators);
        self.validate()?;
        Ok(self)
    }

    pub fn generators(&self) -> &[Vec<Rational>] {
        self.hull_generators.as_deref().unwrap_or(&self.points)
    }

    pub fn validate(&self) -> Result<()> {
        let all = self.points.iter().chain(self.hull_generators.iter().flatten());
        for p in all {
            if p.len() != self.dim {
                return Err(Error::DimensionMismatch(format!(
                    "point of length {} in a set of dimension {}",
                    p.len(),
                    self.dim
                )));
            }
        }
        let distinct: BTreeSet<&Vec<Rational>> = self.points.iter().collect();
        if distinct.len() != self.points.len() {
            return Err(Error::InvalidArgument("points are not pairwise distinct".into()));
        }
        Ok(())
    }

    /// Every point multiplied by `lambda`.
    pub fn scaled(&self, lambda: &Rational) -> PointSet {
        let sc = |ps: &Vec<Vec<Rational>>| -> Vec<Vec<Rational>> {
            ps.iter()
                .map(|p| p.iter().map(|c| c * lambda).collect())
                .collect()
        };
        PointSet {
            dim: self.dim,
            points: sc(&self.points),
            hull_generators: self.hull_generators.as_ref().map(sc),
        }
    }
}

/// Affine functional `w_1 x_1 + ... + w_n x_n + w_0`, stored as `[w_1, ..., w_n, w_0]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarWitness {
    pub subset: Vec<usize>,
    pub f_coeffs: Vec<Rational>,
}

fn affine_eval(w: &[Rational], x: &[Rational]) -> Rational {
    let (lin, c) = w.split_at(w.len() - 1);
    lin.iter().zip(x).map(|(a, b)| a * b).sum::<Rational>() + &c[0]
}

impl StarWitness {
    /// Exact re-substitution: zero on `T`, at least one on `S \ T`,
    /// nonnegative on the hull generators.
    pub fn verify(&self, s: &PointSet) -> bool {
        if self.f_coeffs.len() != s.dim + 1 {
            return false;
        }
        let t: BTreeSet<usize> = self.subset.iter().copied().collect();
        if t.iter().any(|&i| i >= s.points.len()) {
            return false;
        }
        let one = Rational::one();
        let on_sample = s.points.iter().enumerate().all(|(i, p)| {
            let v = affine_eval(&self.f_coeffs, p);
            if t.contains(&i) {
                v.is_zero()
            } else {
                v >= one
            }
        });
        on_sample
            && s.generators()
                .iter()
                .all(|z| !affine_eval(&self.f_coeffs, z).is_negative())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub holds: bool,
    pub d: usize,
    pub witnesses: Vec<StarWitness>,
    pub failing_subset: Option<Vec<usize>>,
    pub caveat: String,
}

/// All `d`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if d > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..d).rev().find(|&i| idx[i] != i + n - d) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..d {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// The LP for one subset `T`: variables `[w_1..w_n, w_0]`.
pub fn star_constraints(s: &PointSet, t: &[usize]) -> Vec<Constraint> {
    let homog = |x: &[Rational]| -> Vec<Rational> {
        let mut v = x.to_vec();
        v.push(Rational::one());
        v
    };
    let in_t: BTreeSet<usize> = t.iter().copied().collect();
    let mut out = Vec::new();
    for (i, p) in s.points.iter().enumerate() {
        if in_t.contains(&i) {
            out.push(Constraint::new(homog(p), Relation::Eq, Rational::zero()));
        } else {
            out.push(Constraint::new(homog(p), Relation::Ge, Rational::one()));
        }
    }
    for z in s.generators() {
        out.push(Constraint::new(homog(z), Relation::Ge, Rational::zero()));
    }
    out
}

pub fn condition_star(s: &PointSet, d: usize) -> Result<ObstructionReport> {
    condition_star_with(s, d, &Simplex, 1)
}

/// Runs every subset LP with `solver`; `jobs > 1` solves them on a rayon pool.
/// The report is the same for any `jobs`.
pub fn condition_star_with(
    s: &PointSet,
    d: usize,
    solver: &dyn LpSolver,
    jobs: usize,
) -> Result<ObstructionReport> {
    s.validate()?;
    if d < 1 || d >= s.points.len() {
        return Err(Error::InvalidArgument(format!(
            "d = {d} outside 1..{} for a sample of {} points",
            s.points.len(),
            s.points.len()
        )));
    }
    let n = s.dim + 1;
    let solve = |t: &Vec<usize>| -> Result<Option<StarWitness>> {
        Ok(solver
            .solve(n, &star_constraints(s, t))?
            .map(|w| StarWitness {
                subset: t.clone(),
                f_coeffs: w,
            }))
    };
    let all = subsets(s.points.len(), d);
    let results: Vec<Result<Option<StarWitness>>> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        pool.install(|| all.par_iter().map(solve).collect())
    } else {
        all.iter().map(solve).collect()
    };

    let mut witnesses = Vec::with_capacity(all.len());
    for (t, r) in all.iter().zip(results) {
        match r? {
            Some(w) => witnesses.push(w),
            None => {
                return Ok(ObstructionReport {
                    holds: false,
                    d,
                    witnesses: Vec::new(),
                    failing_subset: Some(t.clone()),
                    caveat: FINITE_EVIDENCE_CAVEAT.to_string(),
                })
            }
        }
    }
    Ok(ObstructionReport {
        holds: true,
        d,
        witnesses,
        failing_subset: None,
        caveat: FINITE_EVIDENCE_CAVEAT.to_string(),
    })
}

/// `{(t, t^2, ..., t^n) : t = 1..count}`
pub fn moment_curve_points(n: usize, count: usize) -> Result<PointSet> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "moment curve dimension must be even and at least 2, got {n}"
        )));
    }
    if count < 1 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let points = (1..=count as i64)
        .map(|t| {
            let t = Rational::from_int(t);
            (1..=n as u32).map(|k| t.pow(k)).collect()
        })
        .collect();
    PointSet::new(n, points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    #[test]
    fn subset_order() {
        assert_eq!(
            subsets(4, 2),
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(subsets(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(subsets(60, 2).len(), 1770);
    }

    #[test]
    fn moment_curve_examples() {
        let p = moment_curve_points(2, 3).unwrap();
        assert_eq!(
            p.points,
            vec![
                vec![rat(1, 1), rat(1, 1)],
                vec![rat(2, 1), rat(4, 1)],
                vec![rat(3, 1), rat(9, 1)]
            ]
        );
        let p = moment_curve_points(4, 2).unwrap();
        assert_eq!(p.points[1], [2, 4, 8, 16].map(|v| rat(v, 1)).to_vec());
        assert!(moment_curve_points(3, 1).is_err());
        assert!(moment_curve_points(0, 1).is_err());
    }

    #[test]
    fn square_center() {
        let pts: Vec<Vec<Rational>> = [(0, 0), (1, 0), (1, 1), (0, 1)]
            .iter()
            .map(|&(a, b)| vec![rat(a, 1), rat(b, 1)])
            .collect();
        let mut sample = pts.clone();
        sample.push(vec![rat(1, 2), rat(1, 2)]);
        let s = PointSet::new(2, sample).unwrap().with_hull(pts).unwrap();
        let rep = condition_star(&s, 1).unwrap();
        assert!(!rep.holds);
        assert_eq!(rep.failing_subset, Some(vec![4]));
    }

    #[test]
    fn d_range() {
        let s = moment_curve_points(2, 3).unwrap();
        assert!(condition_star(&s, 0).is_err());
        assert!(condition_star(&s, 3).is_err());
    }

    #[test]
    fn rejects_bad_sets() {
        assert!(PointSet::new(2, vec![vec![rat(1, 1)]]).is_err());
        assert!(PointSet::new(1, vec![vec![rat(1, 1)], vec![rat(1, 1)]]).is_err());
        let json = r#"{"dim":1,"points":[["1","2"]],"extra":1}"#;
        assert!(serde_json::from_str::<PointSet>(json).is_err());
    }
}
