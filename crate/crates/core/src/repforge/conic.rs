//! Lifted representations `{ x : exists y, every block B_k(x, y) is PSD }`
//! where each block is a symmetric 1x1 or 2x2 matrix of affine forms.

use serde::de::Deserializer;
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::Rational;

/// `constant + <x_coeffs, x> + <y_coeffs, y>`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineForm {
    #[serde(rename = "const")]
    pub constant: Rational,
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
}

impl AffineForm {
    pub fn zero(n_vars: usize, n_lifts: usize) -> Self {
        AffineForm {
            constant: Rational::zero(),
            x: vec![Rational::zero(); n_vars],
            y: vec![Rational::zero(); n_lifts],
        }
    }

    pub fn constant(c: Rational, n_vars: usize, n_lifts: usize) -> Self {
        AffineForm {
            constant: c,
            ..AffineForm::zero(n_vars, n_lifts)
        }
    }

    /// The coordinate `x_i`.
    pub fn x_var(i: usize, n_vars: usize, n_lifts: usize) -> Self {
        let mut f = AffineForm::zero(n_vars, n_lifts);
        f.x[i] = Rational::one();
        f
    }

    /// The lift variable `y_j`.
    pub fn y_var(j: usize, n_vars: usize, n_lifts: usize) -> Self {
        let mut f = AffineForm::zero(n_vars, n_lifts);
        f.y[j] = Rational::one();
        f
    }

    pub fn eval(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let lin_x: Rational = self.x.iter().zip(x).map(|(a, b)| a * b).sum();
        let lin_y: Rational = self.y.iter().zip(y).map(|(a, b)| a * b).sum();
        &self.constant + lin_x + lin_y
    }

    pub fn add(&self, other: &AffineForm) -> AffineForm {
        AffineForm {
            constant: &self.constant + &other.constant,
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect(),
            y: self.y.iter().zip(&other.y).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> AffineForm {
        AffineForm {
            constant: &self.constant * c,
            x: self.x.iter().map(|a| a * c).collect(),
            y: self.y.iter().map(|a| a * c).collect(),
        }
    }

    pub fn neg(&self) -> AffineForm {
        self.scale(&Rational::from_int(-1))
    }

    /// Re-expresses the form over new variables: every `x_i` becomes
    /// `x_map[i]`, every `y_j` becomes the new lift `y_(lift_offset + j)`.
    pub fn substitute(
        &self,
        x_map: &[AffineForm],
        lift_offset: usize,
        n_vars: usize,
        n_lifts: usize,
    ) -> AffineForm {
        let mut out = AffineForm::constant(self.constant.clone(), n_vars, n_lifts);
        for (coef, image) in self.x.iter().zip(x_map) {
            if !coef.is_zero() {
                out = out.add(&image.scale(coef));
            }
        }
        for (j, coef) in self.y.iter().enumerate() {
            out.y[lift_offset + j] += coef;
        }
        out
    }

    fn dims(&self) -> (usize, usize) {
        (self.x.len(), self.y.len())
    }
}

/// Symmetric rational 2x2 matrix `[[a, b], [b, c]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl Mat2 {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Self {
        Mat2 { a, b, c }
    }

    pub fn zero() -> Self {
        Mat2::new(Rational::zero(), Rational::zero(), Rational::zero())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Mat2::new(&self.a * k, &self.b * k, &self.c * k)
    }

    pub fn det(&self) -> Rational {
        &self.a * &self.c - &self.b * &self.b
    }

    /// Exact: both diagonal entries and the determinant nonnegative.
    pub fn is_psd(&self) -> bool {
        is_psd2(&self.a, &self.b, &self.c)
    }
}

impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [[&self.a, &self.b], [&self.b, &self.c]].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [[a, b], [b2, c]] = <[[Rational; 2]; 2]>::deserialize(d)?;
        if b != b2 {
            return Err(serde::de::Error::custom("matrix is not symmetric"));
        }
        Ok(Mat2 { a, b, c })
    }
}

pub fn is_psd2(a: &Rational, b: &Rational, c: &Rational) -> bool {
    !a.is_negative() && !c.is_negative() && !(a * c - b * b).is_negative()
}

/// A 1x1 or symmetric 2x2 block of affine forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    Scalar(AffineForm),
    /// `[[a, b], [b, c]]`
    Sym2 {
        a: AffineForm,
        b: AffineForm,
        c: AffineForm,
    },
}

impl Block {
    pub fn size(&self) -> usize {
        match self {
            Block::Scalar(_) => 1,
            Block::Sym2 { .. } => 2,
        }
    }

    pub fn forms(&self) -> Vec<&AffineForm> {
        match self {
            Block::Scalar(f) => vec![f],
            Block::Sym2 { a, b, c } => vec![a, b, c],
        }
    }

    pub fn map_forms(&self, mut g: impl FnMut(&AffineForm) -> AffineForm) -> Block {
        match self {
            Block::Scalar(f) => Block::Scalar(g(f)),
            Block::Sym2 { a, b, c } => Block::Sym2 {
                a: g(a),
                b: g(b),
                c: g(c),
            },
        }
    }

    pub fn is_psd_at(&self, x: &[Rational], y: &[Rational]) -> bool {
        match self {
            Block::Scalar(f) => !f.eval(x, y).is_negative(),
            Block::Sym2 { a, b, c } => is_psd2(&a.eval(x, y), &b.eval(x, y), &c.eval(x, y)),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockJson {
    size: usize,
    entries: Vec<Vec<AffineForm>>,
}

impl Serialize for Block {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let entries = match self {
            Block::Scalar(f) => vec![vec![f.clone()]],
            Block::Sym2 { a, b, c } => vec![vec![a.clone(), b.clone()], vec![b.clone(), c.clone()]],
        };
        BlockJson {
            size: self.size(),
            entries,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Block {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = BlockJson::deserialize(d)?;
        let shape_ok = raw.entries.len() == raw.size && raw.entries.iter().all(|r| r.len() == raw.size);
        if !shape_ok {
            return Err(D::Error::custom("block entries do not match the declared size"));
        }
        let mut rows = raw.entries.into_iter();
        match raw.size {
            1 => {
                let f = rows.next().and_then(|r| r.into_iter().next()).unwrap();
                Ok(Block::Scalar(f))
            }
            2 => {
                let mut r0 = rows.next().unwrap().into_iter();
                let mut r1 = rows.next().unwrap().into_iter();
                let (a, b) = (r0.next().unwrap(), r0.next().unwrap());
                let (b2, c) = (r1.next().unwrap(), r1.next().unwrap());
                if b != b2 {
                    return Err(D::Error::custom("2x2 block is not symmetric"));
                }
                Ok(Block::Sym2 { a, b, c })
            }
            n => Err(D::Error::custom(format!("block size must be 1 or 2, got {n}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepKind {
    Set,
    Cone,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConicRep {
    pub kind: RepKind,
    pub n_vars: usize,
    pub n_lifts: usize,
    pub blocks: Vec<Block>,
    pub labels: Vec<String>,
}

impl ConicRep {
    pub fn new(kind: RepKind, n_vars: usize, n_lifts: usize) -> Self {
        ConicRep {
            kind,
            n_vars,
            n_lifts,
            blocks: Vec::new(),
            labels: Vec::new(),
        }
    }

    pub fn push(&mut self, block: Block, label: impl Into<String>) {
        self.blocks.push(block);
        self.labels.push(label.into());
    }

    /// `form >= 0`
    pub fn push_nonneg(&mut self, form: AffineForm, label: impl Into<String>) {
        self.push(Block::Scalar(form), label);
    }

    /// `form = 0`, as the pair `form >= 0`, `-form >= 0`.
    pub fn push_zero(&mut self, form: AffineForm, label: &str) {
        let neg = form.neg();
        self.push(Block::Scalar(form), format!("{label} (>=)"));
        self.push(Block::Scalar(neg), format!("{label} (<=)"));
    }

    pub fn zero_form(&self) -> AffineForm {
        AffineForm::zero(self.n_vars, self.n_lifts)
    }

    pub fn x_var(&self, i: usize) -> AffineForm {
        AffineForm::x_var(i, self.n_vars, self.n_lifts)
    }

    pub fn y_var(&self, j: usize) -> AffineForm {
        AffineForm::y_var(j, self.n_vars, self.n_lifts)
    }

    pub fn constant(&self, c: Rational) -> AffineForm {
        AffineForm::constant(c, self.n_vars, self.n_lifts)
    }

    /// Largest block size; at most 2 by construction.
    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(Block::size).max().unwrap_or(0)
    }

    /// Checks that every form has the declared dimensions and labels run parallel to blocks.
    pub fn validate(&self) -> Result<()> {
        if self.labels.len() != self.blocks.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} blocks",
                self.labels.len(),
                self.blocks.len()
            )));
        }
        for (k, block) in self.blocks.iter().enumerate() {
            for f in block.forms() {
                if f.dims() != (self.n_vars, self.n_lifts) {
                    return Err(Error::DimensionMismatch(format!(
                        "block {k} has a form over {:?} variables, expected ({}, {})",
                        f.dims(),
                        self.n_vars,
                        self.n_lifts
                    )));
                }
            }
        }
        Ok(())
    }

    /// Indices of the blocks that are not PSD at `(x, y)`.
    pub fn violated_blocks(&self, x: &[Rational], y: &[Rational]) -> Result<Vec<usize>> {
        if x.len() != self.n_vars || y.len() != self.n_lifts {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates and {} lifts, representation expects {} and {}",
                x.len(),
                y.len(),
                self.n_vars,
                self.n_lifts
            )));
        }
        Ok(self
            .blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| !b.is_psd_at(x, y))
            .map(|(k, _)| k)
            .collect())
    }
}

/// True iff every block of `r` is PSD at `(x, y)`.
pub fn check_point(r: &ConicRep, x: &[Rational], y: &[Rational]) -> Result<bool> {
    Ok(r.violated_blocks(x, y)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    pub(crate) fn disk() -> ConicRep {
        let mut r = ConicRep::new(RepKind::Set, 2, 0);
        let one = r.constant(rat(1, 1));
        r.push(
            Block::Sym2 {
                a: one.add(&r.x_var(0)),
                b: r.x_var(1),
                c: one.add(&r.x_var(0).neg()),
            },
            "unit disk",
        );
        r
    }

    #[test]
    fn disk_membership() {
        let r = disk();
        assert!(check_point(&r, &[rat(0, 1), rat(0, 1)], &[]).unwrap());
        assert!(!check_point(&r, &[rat(1, 1), rat(1, 2)], &[]).unwrap());
        assert!(check_point(&r, &[rat(3, 5), rat(4, 5)], &[]).unwrap());
        assert!(check_point(&r, &[rat(1, 1)], &[]).is_err());
    }

    #[test]
    fn psd2_edge_cases() {
        assert!(is_psd2(&rat(0, 1), &rat(0, 1), &rat(0, 1)));
        assert!(!is_psd2(&rat(0, 1), &rat(1, 1), &rat(5, 1)));
        assert!(!is_psd2(&rat(-1, 1), &rat(0, 1), &rat(-1, 1)));
        assert!(is_psd2(&rat(2, 1), &rat(2, 1), &rat(2, 1)));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let r = disk();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["kind"], "set");
        assert_eq!(v["blocks"][0]["size"], 2);
        assert!(v["blocks"][0]["entries"][0][0]["const"].is_array());
        let back: ConicRep = serde_json::from_value(v.clone()).unwrap();
        assert_eq!(back, r);
        back.validate().unwrap();

        let mut asym = v;
        asym["blocks"][0]["entries"][1][0]["const"] = serde_json::json!(["7", "1"]);
        assert!(serde_json::from_value::<ConicRep>(asym).is_err());
    }
}
