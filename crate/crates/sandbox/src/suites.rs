//! Seeded verification runs whose reports the command line prints.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rotalg_core::circle_sets::{CirclePoint, CircleSet};
use rotalg_core::diophantine::{Angle, AngleDescriptor};
use rotalg_core::ideal_calculus::IdealFunction;
use serde::{Deserialize, Serialize};

use crate::finite_group_sandbox::{
    augmentation_ideal, build_bi, check_no_intermediate_m2, check_not_from_subgroup, FiniteAction, IntermediateAlgebraReport,
    MatrixElement, MatrixModelReport, NotFromSubgroupReport,
};
use crate::rotation_sandbox::{
    build_averaging, center_check, derivative_extract, norm, random_exact, random_float, AveragingTerm, CenterReport, ConstantFunction,
    FloatElement, PiecewiseLinear, TrigPoly,
};
use crate::SandboxError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FejerRow {
    pub n: u64,
    pub error: f64,
    pub projected_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FejerReport {
    pub degree: i64,
    pub seed: u64,
    pub rows: Vec<FejerRow>,
    pub monotone: bool,
    /// Last error over first error.
    pub ratio: f64,
}

/// Fejér errors `‖σ_n(a) − a‖` and `‖Q₂σ_n(a) − Q₂a‖` for a random `a` of
/// x-degree `degree` with `Σ_j sup|⟨a⟩(j)| <= 1`, so `‖a‖ <= 1`.
pub fn fejer(degree: i64, n_max: u64, seed: u64) -> FejerReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = Arc::new(Angle::golden());
    let a = random_float(&mut rng, g, &(-degree..=degree).collect::<Vec<_>>(), 3);
    let a = a.scale(&Complex64::new(1.0 / (2 * degree + 1) as f64, 0.0));
    let q2 = a.project_qn(2);
    let rows: Vec<FejerRow> = (degree as u64..=n_max)
        .map(|n| {
            let s = a.fejer_bracket(n);
            FejerRow {
                n,
                error: norm(&s.minus(&a).expect("same angle")),
                projected_error: norm(&s.project_qn(2).minus(&q2).expect("same angle")),
            }
        })
        .collect();
    let monotone = rows.windows(2).all(|w| w[1].error <= w[0].error + 1e-12);
    let ratio = match (rows.first(), rows.last()) {
        (Some(f), Some(l)) if f.error > 0.0 => l.error / f.error,
        _ => 0.0,
    };
    FejerReport { degree, seed, rows, monotone, ratio }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingLawReport {
    pub triples: usize,
    pub seed: u64,
    pub associativity_failures: usize,
    pub distributivity_failures: usize,
    pub adjoint_failures: usize,
    pub expectation_failures: usize,
}

impl RingLawReport {
    pub fn pass(&self) -> bool {
        self.associativity_failures + self.distributivity_failures + self.adjoint_failures + self.expectation_failures == 0
    }
}

/// Exact ring laws and `𝔼(ad) = Σ_n (φ_n∘τ^{-n}) ψ_{-n}` on random triples.
pub fn ring_laws(triples: usize, seed: u64) -> RingLawReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = Arc::new(Angle::golden());
    let mut report = RingLawReport {
        triples,
        seed,
        associativity_failures: 0,
        distributivity_failures: 0,
        adjoint_failures: 0,
        expectation_failures: 0,
    };
    for _ in 0..triples {
        let a = random_exact(&mut rng, g.clone(), &[-1, 0, 2], 2, 0.5);
        let b = random_exact(&mut rng, g.clone(), &[-2, 1], 2, 0.5);
        let c = random_exact(&mut rng, g.clone(), &[0, 1, 3], 1, 0.6);
        let ab = a.multiply(&b).expect("same angle");
        if ab.multiply(&c).expect("same angle") != a.multiply(&b.multiply(&c).expect("same angle")).expect("same angle") {
            report.associativity_failures += 1;
        }
        let lhs = a.multiply(&b.plus(&c).expect("same angle")).expect("same angle");
        if lhs != ab.plus(&a.multiply(&c).expect("same angle")).expect("same angle") {
            report.distributivity_failures += 1;
        }
        if ab.adjoint() != b.adjoint().multiply(&a.adjoint()).expect("same angle") {
            report.adjoint_failures += 1;
        }
        let mut rhs = TrigPoly::zero();
        for n in a.x_support() {
            rhs = rhs.plus(&a.coefficient(n).rotate(&g, -n).times(&b.coefficient(-n)));
        }
        if ab.expectation_mu() != rhs {
            report.expectation_failures += 1;
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AveragingReport {
    pub q: i64,
    pub rs: Vec<i64>,
    pub eps: f64,
    pub bound: u64,
    pub terms: Vec<AveragingTerm>,
    /// `‖L(e^{iqx}) − e^{iqx}‖`.
    pub keep_error: f64,
    /// `‖L(e^{irx})‖` for each `r`.
    pub kill_norms: Vec<(i64, f64)>,
    pub samples: usize,
    /// Largest `‖L(a)‖ − ‖a‖` over the samples.
    pub contraction_excess: f64,
}

pub fn averaging(q: i64, rs: &[i64], eps: f64, bound: u64, samples: usize, seed: u64) -> Result<AveragingReport, SandboxError> {
    let g = Arc::new(Angle::golden());
    let op = build_averaging(q, rs, eps, &g, bound)?;
    let e = |n| FloatElement::exponential(g.clone(), n);
    let keep_error = norm(&op.apply(&e(q)).minus(&e(q))?);
    let kill_norms = rs.iter().map(|r| (*r, norm(&op.apply(&e(*r))))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let contraction_excess = (0..samples)
        .map(|_| {
            let a = random_float(&mut rng, g.clone(), &[-3, -2, -1, 0, 1, 2, 3, 4], 3);
            norm(&op.apply(&a)) - norm(&a)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(AveragingReport { q, rs: rs.to_vec(), eps, bound, terms: op.terms, keep_error, kill_norms, samples, contraction_excess })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeRow {
    pub n: i64,
    pub signed_frac: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeSuiteReport {
    pub seed: u64,
    pub rows: Vec<DerivativeRow>,
}

/// Splits `e^{ix}η + e^{-ix}η'` with random `η, η'` of t-degree 4.
pub fn derivative(seed: u64, j_count: usize) -> Result<DerivativeSuiteReport, SandboxError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = Arc::new(Angle::golden());
    let a = random_float(&mut rng, g, &[-1, 1], 4);
    let rep = derivative_extract(&a, j_count)?;
    let rows = rep.steps.iter().map(|s| DerivativeRow { n: s.n, signed_frac: s.signed_frac, residual: s.residual }).collect();
    Ok(DerivativeSuiteReport { seed, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenterSuiteReport {
    pub angle: f64,
    pub plateau: CenterReport,
    pub constant: CenterReport,
    pub rotation_eigenfunction: CenterReport,
}

/// `ρ = (√2−1)/5` and `P` the complement of `(−1/20, 1/20)`.
pub fn center_configuration() -> (Arc<Angle>, IdealFunction) {
    let angle = Arc::new(Angle::new(AngleDescriptor::Surd { a: -1, b: 1, c: 2, den: 5 }).expect("valid surd"));
    let p = CircleSet::arc(CirclePoint::rational(1, 20), CirclePoint::rational(19, 20));
    let c = IdealFunction::basic(angle.clone(), 1, p).expect("step one");
    (angle, c)
}

/// Equal to one on `J ∪ τJ`, zero a tenth away.
pub fn plateau_function(rho: f64) -> PiecewiseLinear {
    PiecewiseLinear::new([(-0.15, 0.0), (-0.05, 1.0), (0.05 + rho, 1.0), (0.15 + rho, 0.0)])
}

pub fn center(grid: usize, tolerance: f64) -> Result<CenterSuiteReport, SandboxError> {
    let (angle, c) = center_configuration();
    let rho = angle.approx();
    let lambda = TrigPoly::monomial(1, Complex64::new(1.0, 0.0));
    Ok(CenterSuiteReport {
        angle: rho,
        plateau: center_check(&c, &plateau_function(rho), grid, tolerance)?,
        constant: center_check(&c, &ConstantFunction(Complex64::new(1.0, 0.0)), grid, tolerance)?,
        rotation_eigenfunction: center_check(&c, &lambda.function(&angle), grid, tolerance)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSuiteReport {
    pub intermediate: IntermediateAlgebraReport,
    /// `𝔼(u δ₁ u)` at the first and third points, `u = λ_e − λ_s`.
    pub expectation_at_first: f64,
    pub expectation_at_fixed: f64,
    pub matrix_model: MatrixModelReport,
    pub not_from_subgroup: NotFromSubgroupReport,
}

impl GroupSuiteReport {
    pub fn pass(&self) -> bool {
        self.intermediate.intersection_with_functions == 1
            && self.intermediate.expectation_image > 1
            && self.expectation_at_first >= 1.0
            && self.expectation_at_fixed == 0.0
            && self.matrix_model.pass()
            && self.not_from_subgroup.pass
    }
}

pub fn group(samples: usize, seed: u64) -> Result<GroupSuiteReport, SandboxError> {
    let action = FiniteAction::swap_two_of_three();
    let aug = augmentation_ideal(action.group())?;
    let (_, intermediate) = build_bi(&action, &aug)?;
    let u = MatrixElement::from_group_algebra(&action, &aug.basis()[0]);
    let e = u.multiply(&MatrixElement::delta(&action, 0), &action).multiply(&u, &action).expectation();
    let value = |i: usize| e[i].re.to_f64().unwrap_or(f64::NAN);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(GroupSuiteReport {
        intermediate,
        expectation_at_first: value(0),
        expectation_at_fixed: value(2),
        matrix_model: check_no_intermediate_m2(&mut rng, samples),
        not_from_subgroup: check_not_from_subgroup(&action, &BTreeSet::from([2]))?,
    })
}
