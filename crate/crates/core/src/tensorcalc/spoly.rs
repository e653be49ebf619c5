use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{BiPoly, Rational};

/// The binary form `(m (u^n - v^n) - n v^(n-m) (u^m - v^m)) / (u - v)^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SPoly {
    pub m: u32,
    pub n: u32,
    pub value: BiPoly,
}

impl SPoly {
    /// `m (u^n - v^n) - n v^(n-m) (u^m - v^m)`, the numerator of the defining quotient.
    pub fn numerator(m: u32, n: u32) -> BiPoly {
        let one = Rational::one();
        let mr = Rational::from_int(m as i64);
        let nr = Rational::from_int(n as i64);
        let un_vn = &BiPoly::monomial(one.clone(), n, 0) - &BiPoly::monomial(one.clone(), 0, n);
        let um_vm = &BiPoly::monomial(one.clone(), m, 0) - &BiPoly::monomial(one, 0, m);
        &un_vn.scale(&mr) - &um_vm.shift(0, n - m).scale(&nr)
    }
}

/// Closed form
/// `(n-m) sum_{i=0}^{m-2} (i+1) u^i v^(n-i-2) + m (n-m) u^(m-1) v^(n-m-1)
///  + m sum_{j=0}^{n-m-2} (j+1) u^(n-2-j) v^j`.
pub fn s_polynomial(m: u32, n: u32) -> Result<SPoly> {
    if m < 1 || n <= m {
        return Err(Error::InvalidArgument(format!(
            "S-polynomial needs 1 <= m < n, got m = {m}, n = {n}"
        )));
    }
    let r = |x: u32| Rational::from_int(x as i64);
    let mut value = BiPoly::zero();
    for i in 0..m.saturating_sub(1) {
        value.add_term(i, n - i - 2, r(n - m) * r(i + 1));
    }
    value.add_term(m - 1, n - m - 1, r(m) * r(n - m));
    for j in 0..(n - m).saturating_sub(1) {
        value.add_term(n - 2 - j, j, r(m) * r(j + 1));
    }
    Ok(SPoly { m, n, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;
    use crate::tensorcalc::delta;

    #[test]
    fn small_cases() {
        assert_eq!(s_polynomial(1, 2).unwrap().value, BiPoly::constant(rat(1, 1)));
        let s13 = BiPoly::from_terms([((1, 0), rat(1, 1)), ((0, 1), rat(2, 1))]);
        assert_eq!(s_polynomial(1, 3).unwrap().value, s13);
        let s23 = BiPoly::from_terms([((1, 0), rat(2, 1)), ((0, 1), rat(1, 1))]);
        assert_eq!(s_polynomial(2, 3).unwrap().value, s23);
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(s_polynomial(0, 3).is_err());
        assert!(s_polynomial(3, 3).is_err());
        assert!(s_polynomial(4, 2).is_err());
    }

    #[test]
    fn identity_for_a_mid_case() {
        let s = s_polynomial(3, 7).unwrap();
        assert_eq!(&delta().pow(2) * &s.value, SPoly::numerator(3, 7));
    }
}
