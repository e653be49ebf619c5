use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::Deserializer;
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use super::Rational;

/// Dense univariate polynomial over the rationals; `coeffs[k]` multiplies `t^k`.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is the
/// empty vector and structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| Rational::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        UniPoly::new(vec![c])
    }

    /// `c * t^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        UniPoly::new(coeffs)
    }

    /// The identity polynomial `t`.
    pub fn var() -> Self {
        UniPoly::monomial(Rational::one(), 1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn lowest_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Horner evaluation.
    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs }
    }

    pub fn derivative(&self) -> Self {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_int(k as i64))
                .collect(),
        )
    }

    /// k-th formal derivative; `k = 0` returns a copy.
    pub fn differentiate(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(UniPoly::one(), |acc, _| &acc * self)
    }

    /// Substitute `t -> -t`.
    pub fn reflect(&self) -> Self {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Euclidean division; panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.leading().recip();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (UniPoly::zero(), UniPoly::zero());
        };
        if nd < dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    /// Divide by the leading coefficient. The zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return UniPoly::zero();
        }
        self.scale(&self.leading().recip())
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UniPoly) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's square-free factorization: returns `(lc, [a_1, a_2, ...])` with
    /// `self = lc * prod a_i^i` and each `a_i` monic, square-free and pairwise
    /// coprime. Panics on the zero polynomial.
    pub fn squarefree_factorization(&self) -> (Rational, Vec<UniPoly>) {
        assert!(!self.is_zero(), "square-free factorization of zero");
        let lc = self.leading();
        let f = self.monic();
        if f.degree() == Some(0) {
            return (lc, Vec::new());
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let c = df.div_rem(&a0).0;
        let mut d = &c - &b.derivative();
        let mut factors = Vec::new();
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            let next_b = b.div_rem(&a).0;
            let next_c = d.div_rem(&a).0;
            d = &next_c - &next_b.derivative();
            b = next_b;
            factors.push(a);
        }
        (lc, factors)
    }

    /// `self / gcd(self, self')`, made monic. Zero for the zero polynomial.
    pub fn squarefree_part(&self) -> Self {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Product of the square-free factors of odd multiplicity: its roots are
    /// exactly the points where `self` changes sign.
    pub fn odd_multiplicity_part(&self) -> Self {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let (_, factors) = self.squarefree_factorization();
        factors
            .iter()
            .enumerate()
            .filter(|(i, _)| i % 2 == 0)
            .fold(UniPoly::one(), |acc, (_, a)| &acc * a)
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for UniPoly {
            type Output = UniPoly;
            fn $method(self, rhs: UniPoly) -> UniPoly {
                $tr::$method(&self, &rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        -&self
    }
}

/// Writes the polynomial in the variable `var`, highest degree first.
pub fn format_poly(p: &UniPoly, var: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, c) in p.coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        if mono.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag}*{mono}"));
        }
    }
    out
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self, "t"))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

/// JSON form `{"var": <name>, "coeffs": [rat, ...]}` with an explicit variable name.
pub struct NamedPoly<'a> {
    pub var: &'a str,
    pub poly: &'a UniPoly,
}

impl Serialize for NamedPoly<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("UniPoly", 2)?;
        st.serialize_field("var", self.var)?;
        st.serialize_field("coeffs", &self.poly.coeffs)?;
        st.end()
    }
}

impl Serialize for UniPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        NamedPoly {
            var: "t",
            poly: self,
        }
        .serialize(serializer)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct UniPolyJson {
    #[serde(default)]
    var: Option<String>,
    coeffs: Vec<Rational>,
}

impl<'de> Deserialize<'de> for UniPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = UniPolyJson::deserialize(deserializer)?;
        if let Some(var) = &raw.var {
            if var.is_empty() {
                return Err(serde::de::Error::custom("empty variable name"));
            }
        }
        Ok(UniPoly::new(raw.coeffs))
    }
}

pub(crate) mod serde_u {
    use super::*;
    pub fn serialize<S: Serializer>(p: &UniPoly, s: S) -> Result<S::Ok, S::Error> {
        NamedPoly { var: "u", poly: p }.serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<UniPoly, D::Error> {
        UniPoly::deserialize(d)
    }
}

pub(crate) mod serde_v {
    use super::*;
    pub fn serialize<S: Serializer>(p: &UniPoly, s: S) -> Result<S::Ok, S::Error> {
        NamedPoly { var: "v", poly: p }.serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<UniPoly, D::Error> {
        UniPoly::deserialize(d)
    }
}
