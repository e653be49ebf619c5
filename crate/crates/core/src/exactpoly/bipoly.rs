use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::Deserializer;
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use super::{Rational, UniPoly};

/// Sparse polynomial in two variables `u`, `v`, keyed by `(deg_u, deg_v)`.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        BiPoly::monomial(c, 0, 0)
    }

    /// `c * u^du * v^dv`
    pub fn monomial(c: Rational, du: u32, dv: u32) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(du, dv, c);
        p
    }

    pub fn u() -> Self {
        BiPoly::monomial(Rational::one(), 1, 0)
    }

    pub fn v() -> Self {
        BiPoly::monomial(Rational::one(), 0, 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), Rational)>) -> Self {
        let mut p = BiPoly::zero();
        for ((du, dv), c) in terms {
            p.add_term(du, dv, c);
        }
        p
    }

    /// Embeds a univariate polynomial as a polynomial in `u`.
    pub fn from_u(p: &UniPoly) -> Self {
        BiPoly::from_terms(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| ((k as u32, 0), c.clone())),
        )
    }

    /// Embeds a univariate polynomial as a polynomial in `v`.
    pub fn from_v(p: &UniPoly) -> Self {
        BiPoly::from_terms(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| ((0, k as u32), c.clone())),
        )
    }

    /// `p(u) * q(v)`
    pub fn tensor(p: &UniPoly, q: &UniPoly) -> Self {
        let mut out = BiPoly::zero();
        for (i, a) in p.coeffs().iter().enumerate() {
            for (j, b) in q.coeffs().iter().enumerate() {
                out.add_term(i as u32, j as u32, a * b);
            }
        }
        out
    }

    pub fn add_term(&mut self, du: u32, dv: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((du, dv)).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(du, dv));
        }
    }

    pub fn coeff(&self, du: u32, dv: u32) -> Rational {
        self.terms.get(&(du, dv)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).max()
    }

    /// True if every term has total degree `d`.
    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|(a, b)| a + b == d)
    }

    pub fn eval(&self, u: &Rational, v: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|((a, b), c)| c * u.pow(*a) * v.pow(*b))
            .sum()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(k, x)| (*k, x * c)).collect(),
        }
    }

    /// Multiply by `u^du v^dv`.
    pub fn shift(&self, du: u32, dv: u32) -> Self {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|((a, b), c)| ((a + du, b + dv), c.clone()))
                .collect(),
        }
    }

    /// Exchange the roles of `u` and `v`.
    pub fn swap(&self) -> Self {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|((a, b), c)| ((*b, *a), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(BiPoly::constant(Rational::one()), |acc, _| &acc * self)
    }

    /// Writes `self = sum_j u^j * g_j(v)`, one pair per occurring u-degree,
    /// in increasing order of `j`.
    pub fn group_by_u(&self) -> Vec<(u32, UniPoly)> {
        let mut grouped: BTreeMap<u32, Vec<Rational>> = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            let row = grouped.entry(*a).or_default();
            let b = *b as usize;
            if row.len() <= b {
                row.resize(b + 1, Rational::zero());
            }
            row[b] = c.clone();
        }
        grouped
            .into_iter()
            .map(|(j, coeffs)| (j, UniPoly::new(coeffs)))
            .collect()
    }

    /// Restrict to the diagonal `u = v = t`.
    pub fn diagonal(&self) -> UniPoly {
        let mut coeffs = Vec::new();
        for ((a, b), c) in &self.terms {
            let k = (a + b) as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rational::zero());
            }
            coeffs[k] += c;
        }
        UniPoly::new(coeffs)
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for ((a, b), c) in &rhs.terms {
            out.add_term(*a, *b, c.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for ((a, b), c) in &rhs.terms {
            out.add_term(*a, *b, -c);
        }
        out
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &rhs.terms {
                out.add_term(a1 + a2, b1 + b2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for BiPoly {
            type Output = BiPoly;
            fn $method(self, rhs: BiPoly) -> BiPoly {
                $tr::$method(&self, &rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        // graded order, highest first
        let mut keys: Vec<_> = self.terms.iter().collect();
        keys.sort_by(|((a1, b1), _), ((a2, b2), _)| (a2 + b2, a2).cmp(&(a1 + b1, a1)));
        for ((a, b), c) in keys {
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mut mono = Vec::new();
            match a {
                0 => {}
                1 => mono.push("u".to_string()),
                _ => mono.push(format!("u^{a}")),
            }
            match b {
                0 => {}
                1 => mono.push("v".to_string()),
                _ => mono.push(format!("v^{b}")),
            }
            let mag = c.abs();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({self})")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    du: u32,
    dv: u32,
    c: Rational,
}

impl Serialize for BiPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|((du, dv), c)| TermJson {
                du: *du,
                dv: *dv,
                c: c.clone(),
            })
            .collect();
        let mut st = serializer.serialize_struct("BiPoly", 2)?;
        st.serialize_field("vars", &["u", "v"])?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BiPolyJson {
    #[serde(default)]
    vars: Option<Vec<String>>,
    terms: Vec<TermJson>,
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = BiPolyJson::deserialize(deserializer)?;
        if let Some(vars) = &raw.vars {
            if vars.len() != 2 {
                return Err(serde::de::Error::custom("BiPoly needs exactly two variables"));
            }
        }
        Ok(BiPoly::from_terms(
            raw.terms.into_iter().map(|t| ((t.du, t.dv), t.c)),
        ))
    }
}
