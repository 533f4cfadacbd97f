//! From attractor invariants to DT invariants: the universal coefficients
//! `F_r^θ`, their split over attractor trees, and the reconstruction sum.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::flowtree::{
    enumerate_attractor_trees, validate_inputs, AttractorGroup, AttractorMap, FlowError,
    PerturbationSpec,
};
use crate::json::{serialize_bigint, serialize_rational, serialize_rational_vec};
use crate::quiver::{contract, pair, Covector, DimVec, SkewForm};
use crate::tropical::{divisibility_ratio, log_gw, FaceType, TropicalError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DtError {
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Tropical(#[from] TropicalError),
    #[error("integer DT invariant at {0} is not an integer")]
    NonIntegerResult(DimVec),
    #[error("dimension vector must be nonzero")]
    ZeroGamma,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("stability parameter does not vanish on the dimension vector")]
    ThetaNotOrthogonal,
    #[error("invalid attractor data: {0}")]
    Attractor(String),
}

/// Attractor invariants `Ω*_γ`, zero outside the support.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AttractorData {
    values: BTreeMap<DimVec, BigInt>,
}

impl AttractorData {
    pub fn new(entries: impl IntoIterator<Item = (DimVec, BigInt)>) -> Result<Self, DtError> {
        let mut values = BTreeMap::new();
        for (g, v) in entries {
            if g.is_zero() || g.entries().iter().any(|&x| x < 0) {
                return Err(DtError::Attractor(format!(
                    "{g} is not a nonzero dimension vector"
                )));
            }
            if values.insert(g.clone(), v).is_some() {
                return Err(DtError::Attractor(format!("{g} listed twice")));
            }
        }
        Ok(AttractorData { values })
    }

    /// `Ω*_{e_i} = 1` for every simple, zero elsewhere.
    pub fn simples(d: usize) -> Self {
        AttractorData {
            values: (0..d).map(|i| (DimVec::basis(d, i), BigInt::one())).collect(),
        }
    }

    pub fn get(&self, g: &DimVec) -> BigInt {
        self.values.get(g).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = (&DimVec, &BigInt)> {
        self.values.iter()
    }

    pub fn dim(&self) -> Option<usize> {
        self.values.keys().next().map(DimVec::len)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttractorEntry {
    pub gamma: Vec<i64>,
    pub omega_star: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttractorFile {
    pub invariants: Vec<AttractorEntry>,
}

impl AttractorFile {
    pub fn parse(text: &str) -> Result<Self, DtError> {
        serde_json::from_str(text).map_err(|e| DtError::Attractor(e.to_string()))
    }

    pub fn data(&self) -> Result<AttractorData, DtError> {
        let d = self.invariants.first().map(|e| e.gamma.len());
        if let Some(e) = self.invariants.iter().find(|e| Some(e.gamma.len()) != d) {
            return Err(DtError::Attractor(format!("entry {:?} has the wrong length", e.gamma)));
        }
        AttractorData::new(
            self.invariants
                .iter()
                .map(|e| (DimVec::new(e.gamma.clone()), BigInt::from(e.omega_star))),
        )
    }
}

/// `(-1)^{k-1} / k²`.
fn divisor_weight(k: i64) -> BigRational {
    let sign = if k % 2 == 1 { 1 } else { -1 };
    BigRational::new(BigInt::from(sign), BigInt::from(k * k))
}

fn divisors(n: i64) -> impl Iterator<Item = i64> {
    (1..=n).filter(move |k| n % k == 0)
}

/// `Ω̄_γ = Σ_{γ = kγ'} ((-1)^{k-1}/k²) Ω_{γ'}`.
pub fn rational_from_integer(omega: &dyn Fn(&DimVec) -> BigInt, gamma: &DimVec) -> BigRational {
    assert!(!gamma.is_zero(), "rational DT invariant of the zero class");
    let c = gamma.divisibility();
    divisors(c)
        .map(|k| {
            let g = DimVec::new(gamma.entries().iter().map(|x| x / k).collect());
            divisor_weight(k) * BigRational::from_integer(omega(&g))
        })
        .fold(BigRational::zero(), |a, b| a + b)
}

/// Inverts [`rational_from_integer`]: `Ω_γ = Ω̄_γ - Σ_{k>1} ((-1)^{k-1}/k²) Ω_{γ/k}`
/// with the `Ω_{γ/k}` obtained recursively from `Ω̄`.
pub fn integer_from_rational(
    omega_bar: &dyn Fn(&DimVec) -> BigRational,
    gamma: &DimVec,
) -> Result<BigInt, DtError> {
    let c = gamma.divisibility();
    let mut acc = omega_bar(gamma);
    for k in divisors(c).filter(|&k| k > 1) {
        let g = DimVec::new(gamma.entries().iter().map(|x| x / k).collect());
        let sub = integer_from_rational(omega_bar, &g)?;
        acc -= divisor_weight(k) * BigRational::from_integer(sub);
    }
    if !acc.is_integer() {
        return Err(DtError::NonIntegerResult(gamma.clone()));
    }
    Ok(acc.to_integer())
}

/// `F_r^θ(γ_1, ..., γ_r)`: `1` for a single part, otherwise the total weight
/// of the valid perturbed binary flow trees.
pub fn f_total(
    omega: &SkewForm,
    parts: &[DimVec],
    theta: &Covector,
    spec: &PerturbationSpec,
) -> Result<BigInt, DtError> {
    validate_inputs(omega, theta, parts)?;
    if parts.len() == 1 {
        return Ok(BigInt::one());
    }
    Ok(enumerate_attractor_trees(omega, theta, parts, spec)?.total_weight())
}

/// `F_{r,h}^θ` for every attractor tree `h`, keyed by its encoding.
pub fn f_per_tree(
    omega: &SkewForm,
    parts: &[DimVec],
    theta: &Covector,
    spec: &PerturbationSpec,
) -> Result<AttractorMap, DtError> {
    Ok(enumerate_attractor_trees(omega, theta, parts, spec)?)
}

/// One attractor tree with its flow-side and lattice-side numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeCoefficient {
    pub id: String,
    #[serde(rename = "F", serialize_with = "serialize_bigint")]
    pub f: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub k_rho: BigInt,
    #[serde(rename = "N_toric", serialize_with = "serialize_rational")]
    pub n_toric: BigRational,
}

impl TreeCoefficient {
    /// `(∏|γ_i| / |γ|) k_ρ N^toric`, which should equal `F`.
    pub fn lattice_side(&self, parts: &[DimVec]) -> BigRational {
        divisibility_ratio(parts) * BigRational::from_integer(self.k_rho.clone()) * &self.n_toric
    }
}

/// `k_ρ` and `N^toric` for one group: the contracted shape gives `ρ`, the
/// binary topologies of the fiber give the faces `σ`.
pub fn tree_coefficient(
    omega: &SkewForm,
    parts: &[DimVec],
    id: &str,
    group: &AttractorGroup,
) -> Result<TreeCoefficient, DtError> {
    let rho = FaceType::new(&group.tree.shape(), parts, omega)?;
    let fibers = group
        .members
        .iter()
        .map(|m| FaceType::new(&m.topology, parts, omega))
        .collect::<Result<Vec<_>, _>>()?;
    let (n_toric, k_rho) = log_gw(&rho, &fibers)?;
    Ok(TreeCoefficient {
        id: id.to_string(),
        f: group.weight(),
        k_rho,
        n_toric,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coefficients {
    #[serde(rename = "F_total", serialize_with = "serialize_bigint")]
    pub f_total: BigInt,
    pub trees: Vec<TreeCoefficient>,
}

/// `F_total` together with the per-tree split and the correspondence data.
pub fn coefficients(
    omega: &SkewForm,
    parts: &[DimVec],
    theta: &Covector,
    spec: &PerturbationSpec,
) -> Result<Coefficients, DtError> {
    validate_inputs(omega, theta, parts)?;
    if parts.len() == 1 {
        return Ok(Coefficients {
            f_total: BigInt::one(),
            trees: Vec::new(),
        });
    }
    let map = enumerate_attractor_trees(omega, theta, parts, spec)?;
    let trees = map
        .groups
        .iter()
        .map(|(id, g)| tree_coefficient(omega, parts, id, g))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Coefficients {
        f_total: map.total_weight(),
        trees,
    })
}

/// One multiset term of the reconstruction sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub parts: Vec<DimVec>,
    #[serde(rename = "F", serialize_with = "serialize_bigint")]
    pub f: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub aut: BigInt,
    #[serde(serialize_with = "serialize_rational")]
    pub attractor_product: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub contribution: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorValue {
    pub gamma: DimVec,
    #[serde(serialize_with = "serialize_rational")]
    pub omega_bar: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DtResult {
    pub gamma: DimVec,
    #[serde(serialize_with = "serialize_rational_vec")]
    pub theta: Vec<BigRational>,
    #[serde(serialize_with = "serialize_rational")]
    pub omega_bar: BigRational,
    #[serde(serialize_with = "serialize_bigint")]
    pub omega: BigInt,
    pub decompositions: Vec<Decomposition>,
    /// `Ω̄^θ` at the proper divisors `γ/k`, needed for the integer inversion.
    pub divisors: Vec<DivisorValue>,
}

/// Multisets of `candidates` (sorted, nonnegative, nonzero) summing to
/// `target`, each as a nondecreasing list, in lexicographic order.
fn multisets(candidates: &[DimVec], target: &DimVec) -> Vec<Vec<DimVec>> {
    fn go(
        cands: &[DimVec],
        start: usize,
        rest: &DimVec,
        cur: &mut Vec<DimVec>,
        out: &mut Vec<Vec<DimVec>>,
    ) {
        if rest.is_zero() {
            out.push(cur.clone());
            return;
        }
        for (i, c) in cands.iter().enumerate().skip(start) {
            let next = rest - c;
            if next.entries().iter().any(|&x| x < 0) {
                continue;
            }
            cur.push(c.clone());
            go(cands, i, &next, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(candidates, 0, target, &mut Vec::new(), &mut out);
    out
}

fn automorphisms(parts: &[DimVec]) -> BigInt {
    let mut counts: BTreeMap<&DimVec, u64> = BTreeMap::new();
    for p in parts {
        *counts.entry(p).or_default() += 1;
    }
    counts
        .values()
        .map(|&m| (1..=m).map(BigInt::from).product::<BigInt>())
        .product()
}

/// `Ω̄^θ_γ` with its decomposition ledger.
fn rational_dt(
    omega: &SkewForm,
    gamma: &DimVec,
    theta: &Covector,
    att: &AttractorData,
    spec: &PerturbationSpec,
) -> Result<(BigRational, Vec<Decomposition>), DtError> {
    let star = |g: &DimVec| rational_from_integer(&|h| att.get(h), g);
    if contract(omega, gamma).iter().all(|&x| x == 0) {
        let v = star(gamma);
        let ledger = vec![Decomposition {
            parts: vec![gamma.clone()],
            f: BigInt::one(),
            aut: BigInt::one(),
            attractor_product: v.clone(),
            contribution: v.clone(),
        }];
        return Ok((v, ledger));
    }

    // Every nonzero vector of the box 0 ≤ v ≤ γ with Ω̄* ≠ 0, in lexicographic order.
    let mut candidates = Vec::new();
    let mut v = vec![0i64; gamma.len()];
    loop {
        let mut i = v.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if v[i] < gamma.entries()[i] {
                v[i] += 1;
                for x in v.iter_mut().skip(i + 1) {
                    *x = 0;
                }
                break;
            }
            if i == 0 {
                i = usize::MAX;
                break;
            }
        }
        if i == usize::MAX {
            break;
        }
        let dv = DimVec::new(v.clone());
        if !star(&dv).is_zero() {
            candidates.push(dv);
        }
    }

    let mut total = BigRational::zero();
    let mut ledger = Vec::new();
    for parts in multisets(&candidates, gamma) {
        let prod = parts
            .iter()
            .map(star)
            .fold(BigRational::one(), |a, b| a * b);
        let f = if parts.len() == 1 {
            BigInt::one()
        } else if parts
            .iter()
            .any(|p| contract(omega, p).iter().all(|&x| x == 0))
        {
            BigInt::zero()
        } else {
            f_total(omega, &parts, theta, spec)?
        };
        let aut = automorphisms(&parts);
        let contribution = BigRational::new(f.clone(), aut.clone()) * &prod;
        total += &contribution;
        ledger.push(Decomposition {
            parts,
            f,
            aut,
            attractor_product: prod,
            contribution,
        });
    }
    Ok((total, ledger))
}

/// Reconstructs `Ω̄^θ_γ` and `Ω^θ_γ` from attractor invariants. Entries of
/// `att` outside the box `0 ≤ v ≤ γ` cannot contribute and are ignored.
pub fn reconstruct_dt(
    omega: &SkewForm,
    gamma: &DimVec,
    theta: &Covector,
    att: &AttractorData,
    spec: &PerturbationSpec,
) -> Result<DtResult, DtError> {
    let d = omega.dim();
    for n in [gamma.len(), theta.len()].into_iter().chain(att.dim()) {
        if n != d {
            return Err(DtError::DimensionMismatch { expected: d, got: n });
        }
    }
    if gamma.is_zero() {
        return Err(DtError::ZeroGamma);
    }
    if gamma.entries().iter().any(|&x| x < 0) {
        return Err(DtError::Attractor(format!("{gamma} has a negative entry")));
    }
    if !pair(theta, gamma).expect("dimensions checked").is_zero() {
        return Err(DtError::ThetaNotOrthogonal);
    }
    let (omega_bar, decompositions) = rational_dt(omega, gamma, theta, att, spec)?;

    let c = gamma.divisibility();
    let mut bars: BTreeMap<DimVec, BigRational> = BTreeMap::new();
    bars.insert(gamma.clone(), omega_bar.clone());
    let mut divisor_values = Vec::new();
    for k in divisors(c).filter(|&k| k > 1) {
        let g = DimVec::new(gamma.entries().iter().map(|x| x / k).collect());
        let (v, _) = rational_dt(omega, &g, theta, att, spec)?;
        divisor_values.push(DivisorValue {
            gamma: g.clone(),
            omega_bar: v.clone(),
        });
        bars.insert(g, v);
    }
    let omega_int = integer_from_rational(&|g| bars[g].clone(), gamma)?;
    Ok(DtResult {
        gamma: gamma.clone(),
        theta: theta.entries().to_vec(),
        omega_bar,
        omega: omega_int,
        decompositions,
        divisors: divisor_values,
    })
}

/// `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn dv(v: &[i64]) -> DimVec {
        DimVec::new(v.to_vec())
    }

    #[test]
    fn rational_integer_roundtrip() {
        let om = |g: &DimVec| if *g == dv(&[0, 1]) { BigInt::one() } else { BigInt::zero() };
        assert_eq!(rational_from_integer(&om, &dv(&[0, 2])), q(-1, 4));
        assert_eq!(rational_from_integer(&om, &dv(&[0, 1])), q(1, 1));
        assert_eq!(rational_from_integer(&|_| BigInt::zero(), &dv(&[3, 6])), q(0, 1));
        let bar = |g: &DimVec| rational_from_integer(&om, g);
        assert_eq!(integer_from_rational(&bar, &dv(&[0, 2])).unwrap(), BigInt::zero());
        assert_eq!(integer_from_rational(&bar, &dv(&[0, 1])).unwrap(), BigInt::one());
        let bad = |g: &DimVec| if *g == dv(&[0, 2]) { q(1, 3) } else { bar(g) };
        assert!(matches!(
            integer_from_rational(&bad, &dv(&[0, 2])),
            Err(DtError::NonIntegerResult(_))
        ));
    }

    #[test]
    fn f_values() {
        let w = SkewForm::kronecker(2);
        let s = PerturbationSpec::with_seed(3);
        let two = [dv(&[1, 0]), dv(&[0, 1])];
        assert_eq!(f_total(&w, &two, &Covector::from_ints(&[1, -1]), &s).unwrap(), 2.into());
        assert_eq!(f_total(&w, &two, &Covector::from_ints(&[-1, 1]), &s).unwrap(), 0.into());
        let th = Covector::from_ints(&[2, -1]);
        let three = [dv(&[1, 0]), dv(&[0, 1]), dv(&[0, 1])];
        assert_eq!(f_total(&w, &three, &th, &s).unwrap(), 4.into());
        let imprimitive = [dv(&[1, 0]), dv(&[0, 2])];
        assert_eq!(f_total(&w, &imprimitive, &th, &s).unwrap(), 4.into());
        assert_eq!(f_total(&w, &[dv(&[1, 2])], &th, &s).unwrap(), 1.into());
    }

    #[test]
    fn worked_reconstruction() {
        let w = SkewForm::kronecker(2);
        let s = PerturbationSpec::with_seed(7);
        let att = AttractorData::simples(2);
        let r = reconstruct_dt(&w, &dv(&[1, 1]), &Covector::from_ints(&[1, -1]), &att, &s).unwrap();
        assert_eq!((r.omega_bar.clone(), r.omega.clone()), (q(2, 1), BigInt::from(2)));

        let r = reconstruct_dt(&w, &dv(&[1, 2]), &Covector::from_ints(&[2, -1]), &att, &s).unwrap();
        assert_eq!(r.omega_bar, q(1, 1));
        assert_eq!(r.omega, BigInt::from(1));
        let ledger: Vec<(Vec<DimVec>, BigRational)> = r
            .decompositions
            .iter()
            .map(|d| (d.parts.clone(), d.contribution.clone()))
            .collect();
        assert_eq!(
            ledger,
            vec![
                (vec![dv(&[0, 1]), dv(&[0, 1]), dv(&[1, 0])], q(2, 1)),
                (vec![dv(&[0, 2]), dv(&[1, 0])], q(-1, 1)),
            ]
        );
        let sum: BigRational = r.decompositions.iter().map(|d| d.contribution.clone()).sum();
        assert_eq!(sum, r.omega_bar);

        let r = reconstruct_dt(&w, &dv(&[1, 2]), &Covector::from_ints(&[-2, 1]), &att, &s).unwrap();
        assert_eq!(r.omega, BigInt::zero());
    }

    #[test]
    fn three_kronecker_hand_value() {
        // {e₂,e₂,e₁} contributes F/2 = 9/2, {2e₂,e₁} contributes -6/4.
        let w = SkewForm::kronecker(3);
        let r = reconstruct_dt(
            &w,
            &dv(&[1, 2]),
            &Covector::from_ints(&[2, -1]),
            &AttractorData::simples(2),
            &PerturbationSpec::with_seed(1),
        )
        .unwrap();
        let contributions: Vec<BigRational> =
            r.decompositions.iter().map(|d| d.contribution.clone()).collect();
        assert_eq!(contributions, vec![q(9, 2), q(-3, 2)]);
        assert_eq!(r.omega, BigInt::from(3));
    }

    #[test]
    fn non_primitive_gamma_uses_divisors() {
        // Ω_{(2,2)} for m = 2 in the nonempty chamber: compute at the same θ
        // and invert through Ω̄_{(1,1)}.
        let w = SkewForm::kronecker(2);
        let th = Covector::from_ints(&[1, -1]);
        let r = reconstruct_dt(&w, &dv(&[2, 2]), &th, &AttractorData::simples(2), &PerturbationSpec::with_seed(2))
            .unwrap();
        assert_eq!(r.divisors.len(), 1);
        assert_eq!(r.divisors[0].omega_bar, q(2, 1));
        let expected = &r.omega_bar - q(-1, 4) * q(2, 1);
        assert_eq!(BigRational::from_integer(r.omega.clone()), expected);
    }

    #[test]
    fn zero_contraction_short_circuits() {
        let w = SkewForm::kronecker(0);
        let att = AttractorData::new([(dv(&[1, 1]), BigInt::from(5))]).unwrap();
        let r = reconstruct_dt(&w, &dv(&[1, 1]), &Covector::from_ints(&[1, -1]), &att, &PerturbationSpec::default())
            .unwrap();
        assert_eq!(r.omega, BigInt::from(5));
        assert_eq!(r.decompositions.len(), 1);
    }

    #[test]
    fn attractor_file_schema() {
        let f = AttractorFile::parse(
            r#"{"invariants":[{"gamma":[1,0],"omega_star":1},{"gamma":[0,1],"omega_star":1}]}"#,
        )
        .unwrap();
        assert_eq!(f.data().unwrap(), AttractorData::simples(2));
        let dup = AttractorFile::parse(
            r#"{"invariants":[{"gamma":[1,0],"omega_star":1},{"gamma":[1,0],"omega_star":2}]}"#,
        )
        .unwrap();
        assert!(dup.data().is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(4, 0), BigInt::from(1));
        assert_eq!(binomial(3, 4), BigInt::from(0));
    }
}
