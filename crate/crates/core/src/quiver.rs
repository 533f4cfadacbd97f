//! Quivers, the skew-symmetric form on dimension vectors, and the
//! contraction map into the dual lattice.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuiverError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("negative arrow count at ({0}, {1})")]
    NegativeArrows(usize, usize),
    #[error("form is not skew-symmetric at ({0}, {1})")]
    NotSkew(usize, usize),
    #[error("quiver file must give exactly one of \"arrows\" or \"skew_form\"")]
    FormSpecification,
    #[error("vertex labels do not match the matrix size")]
    LabelCount,
    #[error("invalid quiver JSON: {0}")]
    Json(String),
}

/// Arrow counts `a[i][j]` = number of arrows from vertex `i` to vertex `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    labels: Vec<String>,
    arrows: Vec<Vec<i64>>,
}

impl Quiver {
    pub fn new(labels: Vec<String>, arrows: Vec<Vec<i64>>) -> Result<Self, QuiverError> {
        let d = arrows.len();
        if labels.len() != d {
            return Err(QuiverError::LabelCount);
        }
        for (i, row) in arrows.iter().enumerate() {
            if row.len() != d {
                return Err(QuiverError::NotSquare);
            }
            if let Some(j) = row.iter().position(|&a| a < 0) {
                return Err(QuiverError::NegativeArrows(i, j));
            }
        }
        Ok(Quiver { labels, arrows })
    }

    /// The m-Kronecker quiver: two vertices, `m` arrows from the first to the second.
    pub fn kronecker(m: i64) -> Self {
        Quiver {
            labels: vec!["1".into(), "2".into()],
            arrows: vec![vec![0, m], vec![0, 0]],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn arrows(&self) -> &[Vec<i64>] {
        &self.arrows
    }
}

/// An integer skew-symmetric form `ω` on `N = Z^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SkewForm {
    entries: Vec<Vec<i64>>,
}

impl SkewForm {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self, QuiverError> {
        let d = entries.len();
        for row in &entries {
            if row.len() != d {
                return Err(QuiverError::NotSquare);
            }
        }
        for i in 0..d {
            for j in 0..d {
                if entries[i][j] != -entries[j][i] {
                    return Err(QuiverError::NotSkew(i, j));
                }
            }
        }
        Ok(SkewForm { entries })
    }

    /// The form `[[0, m], [-m, 0]]` of the m-Kronecker quiver.
    pub fn kronecker(m: i64) -> Self {
        SkewForm {
            entries: vec![vec![0, m], vec![-m, 0]],
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    /// `ω(a, b) = Σ_ij ω_ij a_i b_j`.
    pub fn eval(&self, a: &DimVec, b: &DimVec) -> i64 {
        self.check(a);
        self.check(b);
        let mut s = 0i64;
        for (i, &ai) in a.0.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.0.iter().enumerate() {
                s += self.entries[i][j] * ai * bj;
            }
        }
        s
    }

    /// Rescales every entry; used for the `γ ↦ tγ, ω ↦ ω/t` consistency check.
    pub fn scaled_down(&self, t: i64) -> Option<SkewForm> {
        let mut out = self.entries.clone();
        for row in out.iter_mut() {
            for x in row.iter_mut() {
                if *x % t != 0 {
                    return None;
                }
                *x /= t;
            }
        }
        Some(SkewForm { entries: out })
    }

    fn check(&self, v: &DimVec) {
        assert_eq!(v.len(), self.dim(), "dimension vector of wrong length");
    }
}

pub fn skew_form_from_quiver(q: &Quiver) -> SkewForm {
    let d = q.vertex_count();
    let entries = (0..d)
        .map(|i| (0..d).map(|j| q.arrows[i][j] - q.arrows[j][i]).collect())
        .collect();
    SkewForm { entries }
}

/// A dimension vector `γ ∈ N = Z^d`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimVec(pub Vec<i64>);

impl DimVec {
    pub fn new(v: Vec<i64>) -> Self {
        DimVec(v)
    }

    pub fn zero(d: usize) -> Self {
        DimVec(vec![0; d])
    }

    pub fn basis(d: usize, i: usize) -> Self {
        let mut v = vec![0; d];
        v[i] = 1;
        DimVec(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn to_big(&self) -> Vec<BigInt> {
        self.0.iter().map(|&x| BigInt::from(x)).collect()
    }

    pub fn scaled(&self, t: i64) -> DimVec {
        DimVec(self.0.iter().map(|&x| x * t).collect())
    }

    /// Divisibility `|γ|`: gcd of the entries (0 for the zero vector).
    pub fn divisibility(&self) -> i64 {
        crate::exactlin::divisibility_i64(&self.0).unwrap_or(0)
    }

    /// `true` when both vectors are nonzero and rationally proportional.
    pub fn is_parallel(&self, other: &DimVec) -> bool {
        if self.is_zero() || other.is_zero() {
            return false;
        }
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| self.0[i] * other.0[j] == self.0[j] * other.0[i]))
    }
}

impl std::ops::Add for &DimVec {
    type Output = DimVec;

    fn add(self, rhs: &DimVec) -> DimVec {
        assert_eq!(self.len(), rhs.len());
        DimVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl std::ops::Sub for &DimVec {
    type Output = DimVec;

    fn sub(self, rhs: &DimVec) -> DimVec {
        assert_eq!(self.len(), rhs.len());
        DimVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl<'a> std::iter::Sum<&'a DimVec> for Option<DimVec> {
    fn sum<I: Iterator<Item = &'a DimVec>>(iter: I) -> Self {
        iter.fold(None, |acc, v| match acc {
            None => Some(v.clone()),
            Some(a) => Some(&a + v),
        })
    }
}

impl fmt::Debug for DimVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for DimVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A rational point of `M_Q = Hom(N, Q)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Covector(pub Vec<BigRational>);

impl Covector {
    pub fn zero(d: usize) -> Self {
        Covector(vec![BigRational::zero(); d])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Covector(
            v.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.0
    }

    /// `self + t · v` for an integer direction `v`.
    pub fn shifted(&self, t: &BigRational, v: &[i64]) -> Covector {
        assert_eq!(self.len(), v.len());
        Covector(
            self.0
                .iter()
                .zip(v)
                .map(|(x, &vi)| {
                    if vi == 0 {
                        x.clone()
                    } else {
                        x + t * BigRational::from_integer(BigInt::from(vi))
                    }
                })
                .collect(),
        )
    }

    /// Canonical text form `(a,b,...)` with each coordinate in `p/q` form.
    pub fn encode(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(crate::json::format_rational).collect();
        format!("({})", parts.join(","))
    }
}

impl fmt::Debug for Covector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}

impl fmt::Display for Covector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}

/// `ι_γ ω = ω(γ, ·)`: entry `j` is `Σ_i ω_ij γ_i`.
pub fn contract(omega: &SkewForm, gamma: &DimVec) -> Vec<i64> {
    omega.check(gamma);
    let d = omega.dim();
    (0..d)
        .map(|j| (0..d).map(|i| omega.entries[i][j] * gamma.0[i]).sum())
        .collect()
}

/// The standard pairing `<θ, γ>`.
pub fn pair(theta: &Covector, gamma: &DimVec) -> Result<BigRational, QuiverError> {
    if theta.len() != gamma.len() {
        return Err(QuiverError::DimensionMismatch {
            expected: theta.len(),
            got: gamma.len(),
        });
    }
    Ok(theta
        .0
        .iter()
        .zip(&gamma.0)
        .filter(|(_, &g)| g != 0)
        .map(|(t, &g)| t * BigRational::from_integer(BigInt::from(g)))
        .fold(BigRational::zero(), |a, b| a + b))
}

/// Pairing of an integer covector with a dimension vector.
pub fn pair_int(m: &[i64], gamma: &DimVec) -> i64 {
    assert_eq!(m.len(), gamma.len());
    m.iter().zip(&gamma.0).map(|(a, b)| a * b).sum()
}

/// On-disk quiver description: vertex labels plus either arrow counts or a
/// skew-symmetric form.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverFile {
    pub vertices: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrows: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skew_form: Option<Vec<Vec<i64>>>,
}

impl QuiverFile {
    pub fn parse(text: &str) -> Result<Self, QuiverError> {
        serde_json::from_str(text).map_err(|e| QuiverError::Json(e.to_string()))
    }

    pub fn skew_form(&self) -> Result<SkewForm, QuiverError> {
        let form = match (&self.arrows, &self.skew_form) {
            (Some(a), None) => {
                skew_form_from_quiver(&Quiver::new(self.vertices.clone(), a.clone())?)
            }
            (None, Some(w)) => SkewForm::new(w.clone())?,
            _ => return Err(QuiverError::FormSpecification),
        };
        if form.dim() != self.vertices.len() {
            return Err(QuiverError::LabelCount);
        }
        Ok(form)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn kronecker_form() {
        let w = skew_form_from_quiver(&Quiver::kronecker(2));
        assert_eq!(w.entries(), &[vec![0, 2], vec![-2, 0]]);
    }

    #[test]
    fn symmetric_quiver_has_zero_form() {
        let q = Quiver::new(
            vec!["a".into(), "b".into()],
            vec![vec![1, 3], vec![3, 0]],
        )
        .unwrap();
        assert!(skew_form_from_quiver(&q)
            .entries()
            .iter()
            .flatten()
            .all(|&x| x == 0));
    }

    #[test]
    fn three_cycle() {
        let q = Quiver::new(
            vec!["1".into(), "2".into(), "3".into()],
            vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]],
        )
        .unwrap();
        assert_eq!(
            skew_form_from_quiver(&q).entries(),
            &[vec![0, 1, -1], vec![-1, 0, 1], vec![1, -1, 0]]
        );
    }

    #[test]
    fn contraction_examples() {
        let w = SkewForm::kronecker(2);
        assert_eq!(contract(&w, &DimVec::new(vec![1, 1])), vec![-2, 2]);
        assert_eq!(contract(&w, &DimVec::new(vec![1, 0])), vec![0, 2]);
        assert_eq!(contract(&w, &DimVec::new(vec![0, 1])), vec![-2, 0]);
    }

    #[test]
    fn pairing_examples() {
        let g = DimVec::new(vec![1, 2]);
        assert_eq!(pair(&Covector::from_ints(&[2, -1]), &g).unwrap(), q(0, 1));
        let g = DimVec::new(vec![1, 1]);
        assert_eq!(pair(&Covector::from_ints(&[1, -1]), &g).unwrap(), q(0, 1));
        assert_eq!(pair(&Covector::zero(2), &g).unwrap(), q(0, 1));
        assert!(pair(&Covector::zero(3), &g).is_err());
    }

    #[test]
    fn quiver_file_variants() {
        let f = QuiverFile::parse(r#"{"vertices":["a","b"],"arrows":[[0,3],[0,0]]}"#).unwrap();
        assert_eq!(f.skew_form().unwrap(), SkewForm::kronecker(3));
        let f = QuiverFile::parse(r#"{"vertices":["a","b"],"skew_form":[[0,2],[-2,0]]}"#)
            .unwrap();
        assert_eq!(f.skew_form().unwrap(), SkewForm::kronecker(2));
        let f = QuiverFile::parse(
            r#"{"vertices":["a","b"],"arrows":[[0,1],[0,0]],"skew_form":[[0,1],[-1,0]]}"#,
        )
        .unwrap();
        assert_eq!(f.skew_form(), Err(QuiverError::FormSpecification));
        let f = QuiverFile::parse(r#"{"vertices":["a","b"],"skew_form":[[0,2],[2,0]]}"#).unwrap();
        assert!(matches!(f.skew_form(), Err(QuiverError::NotSkew(..))));
    }

    fn arb_form(d: usize) -> impl Strategy<Value = SkewForm> {
        proptest::collection::vec(-4i64..=4, d * (d - 1) / 2).prop_map(move |upper| {
            let mut e = vec![vec![0; d]; d];
            let mut k = 0;
            for i in 0..d {
                for j in i + 1..d {
                    e[i][j] = upper[k];
                    e[j][i] = -upper[k];
                    k += 1;
                }
            }
            SkewForm::new(e).unwrap()
        })
    }

    proptest! {
        #[test]
        fn skew_identities(
            w in arb_form(4),
            a in proptest::collection::vec(-5i64..=5, 4),
            b in proptest::collection::vec(-5i64..=5, 4),
        ) {
            let a = DimVec::new(a);
            let b = DimVec::new(b);
            prop_assert_eq!(w.eval(&a, &b), -w.eval(&b, &a));
            prop_assert_eq!(pair_int(&contract(&w, &a), &a), 0);
            prop_assert_eq!(pair_int(&contract(&w, &a), &b), w.eval(&a, &b));
            prop_assert_eq!(pair_int(&contract(&w, &a), &b), -pair_int(&contract(&w, &b), &a));
        }
    }
}
