//! Randomized cross-checks between independent code paths.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use quiver_dt::dt::{coefficients, f_per_tree, reconstruct_dt, AttractorData, DtError};
use quiver_dt::exactlin::{cokernel_order, Order};
use quiver_dt::flowtree::{FlowError, PerturbationSpec, SplitMix64};
use quiver_dt::oracle::{brute_cokernel, kronecker_known};
use quiver_dt::quiver::{Covector, DimVec, SkewForm};
use quiver_dt::tropical::{
    gluing_cokernel, gluing_matrix, k_coefficient, k_from_children, n_trop_from_children,
    product_formula, psi_cokernel, psi_rhs, random_flow_instance, random_valid_face, FaceType,
};

#[derive(Debug, Default, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub cases: usize,
    pub skipped: usize,
    pub failures: usize,
    /// First few failing instances, for diagnosis.
    pub examples: Vec<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check {
            name,
            ..Default::default()
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < 3 {
                self.examples.push(what());
            }
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
    pub ok: bool,
}

fn describe(face: &FaceType) -> String {
    serde_json::to_string(&face.to_file()).expect("serializable")
}

fn face_checks(face: &FaceType, checks: &mut [Check; 4]) {
    let g = match gluing_cokernel(face) {
        Ok(g) => g,
        Err(e) => {
            checks[0].record(false, || format!("{}: {e}", describe(face)));
            return;
        }
    };
    let k = k_coefficient(face, &g.tangent);
    let lhs = k.as_ref().map(|k| BigRational::from_integer(k * &g.n_trop));
    let rhs = product_formula(face);
    checks[0].record(matches!((&lhs, &rhs), (Ok(a), Ok(b)) if a == b), || describe(face));

    let children_ok = n_trop_from_children(face).ok() == Some(g.n_trop.clone())
        && k_from_children(face).ok() == k.as_ref().ok().cloned();
    checks[1].record(children_ok, || describe(face));

    let psi = psi_cokernel(face);
    let rhs = psi_rhs(face);
    checks[2].record(matches!((&psi, &rhs), (Ok(Order::Finite(a)), Ok(b)) if a == b), || describe(face));

    let m = gluing_matrix(face);
    let rows: Option<Vec<Vec<i64>>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| i64::try_from(&m[(i, j)]).ok()).collect())
        .collect();
    match rows.map(|r| brute_cokernel(&r, &[])) {
        Some(Ok(order)) => checks[3].record(order == cokernel_order(&m), || describe(face)),
        _ => checks[3].skipped += 1,
    }
}

fn nongeneric(e: &DtError) -> bool {
    matches!(
        e,
        DtError::Flow(FlowError::NonGenericTheta) | DtError::Flow(FlowError::RetriesExhausted { .. })
    )
}

fn flow_checks(
    omega: &SkewForm,
    parts: &[DimVec],
    theta: &Covector,
    seed: u64,
    checks: &mut [Check; 4],
) {
    let what = || format!("omega={:?} parts={parts:?} theta={}", omega.entries(), theta.encode());
    let spec = PerturbationSpec::with_seed(seed);
    let c = match coefficients(omega, parts, theta, &spec) {
        Ok(c) => c,
        Err(e) if nongeneric(&e) => {
            checks.iter_mut().for_each(|c| c.skipped += 1);
            return;
        }
        Err(e) => {
            checks[0].record(false, || format!("{}: {e}", what()));
            return;
        }
    };
    let sum: BigInt = c.trees.iter().map(|t| t.f.clone()).sum();
    checks[0].record(sum == c.f_total, what);
    checks[1].record(
        c.trees.iter().all(|t| t.lattice_side(parts) == BigRational::from_integer(t.f.clone())),
        what,
    );

    let weights = |m: &quiver_dt::flowtree::AttractorMap| -> Vec<(String, BigInt)> {
        m.groups.iter().map(|(k, g)| (k.clone(), g.weight())).collect()
    };
    let base: Vec<(String, BigInt)> = c.trees.iter().map(|t| (t.id.clone(), t.f.clone())).collect();
    let other = PerturbationSpec::new(seed.wrapping_add(1), spec.scale.clone() / BigInt::from(8))
        .expect("positive scale");
    match f_per_tree(omega, parts, theta, &other) {
        Ok(m) => checks[2].record(weights(&m) == base, what),
        Err(e) if nongeneric(&e) => checks[2].skipped += 1,
        Err(e) => checks[2].record(false, || format!("{}: {e}", what())),
    }

    let reversed: Vec<DimVec> = parts.iter().rev().cloned().collect();
    match quiver_dt::dt::f_total(omega, &reversed, theta, &spec) {
        Ok(f) => checks[3].record(f == c.f_total, what),
        Err(e) if nongeneric(&e) => checks[3].skipped += 1,
        Err(e) => checks[3].record(false, || format!("{}: {e}", what())),
    }
}

pub fn run(max_r: usize, max_d: usize, cases: usize, seed: u64) -> Report {
    let mut rng = SplitMix64::new(seed);
    let mut face = [
        Check::new("product_formula"),
        Check::new("child_lattices"),
        Check::new("psi_cokernel"),
        Check::new("brute_cokernel"),
    ];
    for _ in 0..cases {
        let f = random_valid_face(&mut rng, max_d, max_r);
        face_checks(&f, &mut face);
    }

    let mut flow = [
        Check::new("partition_identity"),
        Check::new("correspondence"),
        Check::new("seed_scale_invariance"),
        Check::new("permutation_invariance"),
    ];
    for _ in 0..cases {
        let (omega, parts, theta) = random_flow_instance(&mut rng, max_d, max_r);
        flow_checks(&omega, &parts, &theta, rng.next_u64(), &mut flow);
    }

    let mut kron = Check::new("kronecker");
    let att = AttractorData::simples(2);
    let spec = PerturbationSpec::with_seed(seed);
    for m in 1..=4i64 {
        let w = SkewForm::kronecker(m);
        for k in 1..=m.min(max_r as i64 - 1) {
            let gamma = DimVec::new(vec![1, k]);
            let got = reconstruct_dt(&w, &gamma, &Covector::from_ints(&[k, -1]), &att, &spec);
            let want = kronecker_known(m as u32, k as u32).expect("in range");
            kron.record(got.map(|r| r.omega).ok() == Some(want), || format!("m={m} k={k}"));
        }
    }

    let checks: Vec<Check> = face.into_iter().chain(flow).chain([kron]).collect();
    let ok = checks.iter().all(|c| c.failures == 0);
    Report { checks, ok }
}
