//! Named strategy registries: decomposition strategies for the tensor step and
//! exact LP kernels for the obstruction check. Both are selected at runtime by
//! name (CLI `--method` and `--lp`).

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactpoly::{Rational, UniPoly};
use crate::obstruct::{Constraint, FourierMotzkin, Simplex};
use crate::tensorcalc::{
    affine_part, flat_decompose, second_derivative_at_zero, strict_decompose, TensorDecomposition,
};

pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: BTreeMap<String, Arc<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry {
            kind,
            entries: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &str, item: Arc<T>) {
        self.entries.insert(name.to_string(), item);
    }

    pub fn get(&self, name: &str) -> Result<Arc<T>> {
        self.entries
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }
}

pub trait DecompositionStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    /// Decomposes the Taylor remainder of `f`.
    fn decompose(&self, f: &UniPoly) -> Result<TensorDecomposition>;
}

pub struct StrictStrategy;
pub struct FlatStrategy;
pub struct AutoStrategy;

impl DecompositionStrategy for StrictStrategy {
    fn name(&self) -> &'static str {
        "strict"
    }
    fn description(&self) -> &'static str {
        "positive-residue decomposition, requires f''(0) > 0"
    }
    fn decompose(&self, f: &UniPoly) -> Result<TensorDecomposition> {
        strict_decompose(f)
    }
}

impl DecompositionStrategy for FlatStrategy {
    fn name(&self) -> &'static str {
        "flat"
    }
    fn description(&self) -> &'static str {
        "monomial-prefixed decomposition at a point of higher contact"
    }
    fn decompose(&self, f: &UniPoly) -> Result<TensorDecomposition> {
        // the remainder only sees f minus its tangent line at 0
        flat_decompose(&(f - &affine_part(f)))
    }
}

impl DecompositionStrategy for AutoStrategy {
    fn name(&self) -> &'static str {
        "auto"
    }
    fn description(&self) -> &'static str {
        "strict when f''(0) > 0, flat otherwise"
    }
    fn decompose(&self, f: &UniPoly) -> Result<TensorDecomposition> {
        if second_derivative_at_zero(f).is_positive() {
            StrictStrategy.decompose(f)
        } else {
            FlatStrategy.decompose(f)
        }
    }
}

pub fn decomposers() -> Registry<dyn DecompositionStrategy> {
    let mut r: Registry<dyn DecompositionStrategy> = Registry::new("decomposition strategy");
    r.register("strict", Arc::new(StrictStrategy));
    r.register("flat", Arc::new(FlatStrategy));
    r.register("auto", Arc::new(AutoStrategy));
    r
}

pub trait LpSolver: Send + Sync {
    fn name(&self) -> &'static str;
    /// A feasible point of the system, or `None` when it is infeasible.
    fn solve(&self, n_vars: usize, constraints: &[Constraint]) -> Result<Option<Vec<Rational>>>;
}

pub fn lp_solvers() -> Registry<dyn LpSolver> {
    let mut r: Registry<dyn LpSolver> = Registry::new("LP solver");
    r.register("simplex", Arc::new(Simplex));
    r.register("fourier-motzkin", Arc::new(FourierMotzkin::default()));
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup() {
        let d = decomposers();
        assert_eq!(d.names(), vec!["auto", "flat", "strict"]);
        assert_eq!(d.get("flat").unwrap().name(), "flat");
        let err = d.get("nope").err().unwrap().to_string();
        assert!(err.contains("nope") && err.contains("strict"), "{err}");
        assert!(lp_solvers().get("simplex").is_ok());
    }

    #[test]
    fn auto_picks_path() {
        let strict = UniPoly::from_ints(&[0, 0, 1, 0, 1]);
        assert_eq!(AutoStrategy.decompose(&strict).unwrap().flat_order, 0);
        let flat = UniPoly::from_ints(&[1, 2, 0, 0, 1]);
        let d = AutoStrategy.decompose(&flat).unwrap();
        assert_eq!(d.flat_order, 2);
        assert!(StrictStrategy.decompose(&flat).is_err());
    }
}
