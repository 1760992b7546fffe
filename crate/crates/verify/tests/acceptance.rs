use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::{BigRational, Rational64};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rotalg_core::circle_sets::{CirclePoint, CircleSet};
use rotalg_core::diophantine::Angle;
use rotalg_core::ideal_calculus::*;
use rotalg_sandbox::rotation_sandbox::{membership_test, ExactElement, Gauss, PhasePoly, TrigPoly};
use rotalg_sandbox::suites;
use rotalg_verify::{criterion, report, Line};

const SEED: u64 = 2718;
const CLOSED_WINDOW: i64 = 12;
const BASIC_BUDGET_S: f64 = 10.0;
const RESIDUAL_WINDOW: i64 = 10;
const RESIDUAL_COUNT: usize = 10;
const RING_TRIPLES: usize = 500;
const FEJER_DEGREE: i64 = 8;
const FEJER_N_MAX: u64 = 64;
const FEJER_RATIO: f64 = 0.15;
const FEJER_PROJECTED: f64 = 1e-2;
const FEJER_BUDGET_S: f64 = 30.0;
const AVERAGING_TOL: f64 = 0.05;
const AVERAGING_SLACK: f64 = 1e-9;
const AVERAGING_SAMPLES: usize = 50;
const DERIVATIVE_TOL: f64 = 1e-2;
const DERIVATIVE_STEPS: usize = 8;
const CENTER_TOL: f64 = 1e-8;
const CENTER_GRID: usize = 4000;
const GROUP_SAMPLES: usize = 1000;
const GROUP_BUDGET_S: f64 = 5.0;
const MEMBERSHIP_TOL: f64 = 1e-9;
const MEMBERSHIP_PAIRS: usize = 20;
const LAW_PAIRS: usize = 24;

fn golden() -> Arc<Angle> {
    Arc::new(Angle::golden())
}

fn base() -> CirclePoint {
    CirclePoint::new(Rational64::new(1, 7), 0)
}

fn orbit_set(exps: &BTreeSet<i64>, angle: &Angle) -> CircleSet {
    CircleSet::points(exps.iter().map(|e| base().rotate(*e)), angle)
}

fn arc(a: (i64, i64), b: (i64, i64)) -> CircleSet {
    CircleSet::arc(CirclePoint::rational(a.0, a.1), CirclePoint::rational(b.0, b.1))
}

fn random_point(rng: &mut impl Rng) -> CirclePoint {
    CirclePoint::new(Rational64::new(rng.gen_range(0..12), rng.gen_range(1..=12)), rng.gen_range(-5..=5))
}

fn basic_closure() -> Line {
    criterion("1", "basic-function closure", || {
        let g = golden();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let start = Instant::now();
        let mut failures = Vec::new();
        for i in 0..25 {
            let q = rng.gen_range(1..=3);
            let set = if i < 20 {
                let count = rng.gen_range(1..=3);
                CircleSet::points((0..count).map(|_| random_point(&mut rng)), &g)
            } else {
                CircleSet::arc(random_point(&mut rng), random_point(&mut rng))
            };
            let b = IdealFunction::basic(g.clone(), q, set).expect("nonnegative step");
            let rep = check_closed(&b, CLOSED_WINDOW);
            if !rep.holds || !rep.certificate.is_exact() {
                failures.push(i);
            }
        }
        let secs = start.elapsed().as_secs_f64();
        (
            failures.is_empty() && secs < BASIC_BUDGET_S,
            format!("25 instances (20 point, 5 arc), window {CLOSED_WINDOW}, failures {failures:?}, {secs:.2}s < {BASIC_BUDGET_S}s"),
        )
    })
}

/// Exponents `e` with `τ^e p` in the displayed naive-join value at `n`.
fn naive_join_oracle(n: i64) -> BTreeSet<i64> {
    if n.abs() <= 1 {
        BTreeSet::new()
    } else if n >= 2 {
        (-(n - 2)..=0).collect()
    } else {
        (2..=-n).collect()
    }
}

fn shifted_points_join() -> Line {
    criterion("2", "naive vs closed join", || {
        let g = golden();
        let c1 = IdealFunction::basic(g.clone(), 1, CircleSet::point(base())).expect("basic");
        let c2 = IdealFunction::basic(g.clone(), 1, CircleSet::point(base().rotate(1))).expect("basic");
        let naive = naive_join(&c1, &c2).expect("same angle");
        let values_ok = (-6..=6).all(|n| naive.value(n).map(|v| v.set == orbit_set(&naive_join_oracle(n), &g)).unwrap_or(false));
        let first = check_closed(&naive, 6).first_violation();
        let witness_ok = first == Some(Violation::Product { m: 1, n: 1 });
        let join = closed_join(&c1, &c2, JoinPolicy { depth: 4, window: 6 }).expect("same angle");
        let join_ok = (-6..=6).all(|n| {
            join.value(n).is_ok_and(|v| v.set.is_empty() && v.certificate.is_exact() && v.certificate.depth_used.is_some_and(|d| d <= 4))
        });
        (
            values_ok && witness_ok && join_ok,
            format!("naive values |n|<=6 match: {values_ok}; first violation {first:?}; closed join all-empty, exact, depth<=4: {join_ok}"),
        )
    })
}

fn small_join_blow_up() -> Line {
    criterion("3", "small-join blow-up", || {
        let g = golden();
        let a = IdealFunction::basic(g.clone(), 1, arc((0, 1), (1, 5))).expect("basic");
        let b = IdealFunction::basic(g.clone(), 1, arc((2, 5), (3, 5))).expect("basic");
        let v = closed_join(&a, &b, JoinPolicy::default()).and_then(|j| j.value(1));
        match v {
            Ok(v) => (v.set.is_empty() && v.certificate.is_exact(), format!("value at 1 = {:?}, {:?}", v.set, v.certificate.status)),
            Err(e) => (false, format!("error: {e}")),
        }
    })
}

fn decomposition() -> Vec<Line> {
    let g = golden();
    let b2 = IdealFunction::basic(g.clone(), 2, CircleSet::point(base())).expect("basic");
    let b3 = IdealFunction::basic(g.clone(), 3, CircleSet::point(base())).expect("basic");
    let start = Instant::now();
    let d = meet(&b2, &b3).and_then(|c| canonical_decomposition(&c, 12, 6));
    let elapsed = start.elapsed();
    let (crit, rest) = match &d {
        Ok(d) => {
            let inside = d.critical.iter().all(|k| [2, 3].contains(k));
            (
                (inside, format!("Crit = {:?}, required within {{2, 3}}; Supp(c) = 6ℤ forces Crit = {{6}}", d.critical)),
                (d.reproduces && d.certificate.is_exact(), format!("re-join reproduces: {}, {:?}", d.reproduces, d.certificate.status)),
            )
        }
        Err(e) => ((false, format!("error: {e}")), (false, format!("error: {e}"))),
    };
    vec![
        Line { id: "4a", title: "decomposition: critical set", pass: crit.0, elapsed, detail: crit.1 },
        Line { id: "4b", title: "decomposition: re-join", pass: rest.0, elapsed, detail: rest.1 },
    ]
}

fn simplicity() -> Line {
    criterion("5", "simplicity", || {
        let g = golden();
        let b = IdealFunction::basic(g, 1, CircleSet::point(base())).expect("basic");
        let simple = simplicity_report(&b, 8).map(|r| r.verdict == SimplicityVerdict::Simple).unwrap_or(false);
        let s = Arc::new(Angle::sqrt2_minus_one());
        let b = IdealFunction::basic(s, 1, arc((0, 1), (1, 2))).expect("basic");
        let q = q_intersection(&b, 10).set;
        let q_ok = q == CircleSet::arc(CirclePoint::orbit(1), CirclePoint::rational(1, 2));
        let (not_simple, witness_ok) = match simplicity_report(&b, 10) {
            Ok(r) => (
                r.verdict == SimplicityVerdict::NotSimple,
                r.witness.is_some_and(|w| check_relative_closed(&w, 10).holds && w.triviality() == Ok(Triviality::Proper)),
            ),
            Err(_) => (false, false),
        };
        (
            simple && q_ok && not_simple && witness_ok,
            format!("b_1,{{p}} simple: {simple}; Q = [ρ, 1/2]: {q_ok}; not simple: {not_simple}; witness closed on 10: {witness_ok}"),
        )
    })
}

/// A join of one or two basic functions on short orbit segments of one point.
fn residual_candidate(rng: &mut impl Rng, g: &Arc<Angle>) -> (IdealFunction, CirclePoint) {
    let p = CirclePoint::new(Rational64::new(*[1, 2, 3].choose(rng).expect("nonempty"), *[7, 5, 11].choose(rng).expect("nonempty")), 0);
    let gens = (0..rng.gen_range(1..=2))
        .map(|_| {
            let q = rng.gen_range(1..=2);
            let a = rng.gen_range(-1..=1);
            let len = rng.gen_range(1..=2);
            (q, CircleSet::points((0..=len).map(|i| p.rotate(a + i * q)), g))
        })
        .collect();
    let c = IdealFunction::join_of_basics(g.clone(), gens, JoinPolicy { depth: 6, window: RESIDUAL_WINDOW }).expect("same angle");
    (c, p)
}

fn supported(value: &Result<CircleSet, IdealError>) -> bool {
    value.as_ref().is_ok_and(|v| !v.is_full())
}

fn residual_structure() -> Line {
    criterion("6", "residual structure", || {
        let g = golden();
        let w = RESIDUAL_WINDOW;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
        let (mut accepted, mut rejected, mut failures) = (0, 0, Vec::new());
        while accepted < RESIDUAL_COUNT && accepted + rejected < 80 {
            let (c, p) = residual_candidate(&mut rng, &g);
            let exact = (-2 * w..=2 * w).all(|n| c.value(n).is_ok_and(|v| v.certificate.is_exact()));
            let q = q_intersection(&c, w).set;
            if !exact || !classify_algebra(&c, w).residual || q.is_empty() || q.is_full() {
                rejected += 1;
                continue;
            }
            let mut zero: Vec<CirclePoint> = q.components().iter().map(|x| x.start()).filter(|_| rng.gen_bool(0.7)).collect();
            zero.push(p.rotate(rng.gen_range(-3..=3)));
            let Ok((j, cert)) = generated_ideal(&c, CircleSet::points(zero, &g), w, 8) else {
                rejected += 1;
                continue;
            };
            if !cert.is_exact() || j.triviality() != Ok(Triviality::Proper) {
                rejected += 1;
                continue;
            }
            accepted += 1;
            let supp_c: Vec<i64> = (-w..=w).filter(|n| supported(&c.value(*n).map(|v| v.set))).collect();
            let supp_c_group =
                supp_c.iter().all(|a| supp_c.contains(&-a) && supp_c.iter().all(|b| (a + b).abs() > w || supp_c.contains(&(a + b))));
            let same_support = (-w..=w).all(|n| supported(&j.value(n)) == supp_c.contains(&n));
            let (om, _) = omega(&c, 2 * w);
            let inside_omega = (-w..=w).filter(|n| supported(&j.value(*n))).all(|k| j.value(k).is_ok_and(|v| v.is_subset(&om, &g)));
            let checks = [
                supp_c_group,
                support_is_subgroup(&j, w),
                same_support,
                zero_value_is_minimal(&j, w),
                inside_omega,
                check_relative_closed(&j, w).holds,
            ];
            if checks.iter().any(|ok| !ok) {
                failures.push((accepted, checks));
            }
        }
        (
            accepted == RESIDUAL_COUNT && failures.is_empty(),
            format!(
                "{accepted} exact residual joins with proper generated ideals ({rejected} candidates rejected), window {w}, Ω over 2W; failures {failures:?}"
            ),
        )
    })
}

fn ring_laws() -> Line {
    criterion("7", "sandbox ring laws", || {
        let r = suites::ring_laws(RING_TRIPLES, SEED);
        (
            r.pass(),
            format!(
                "{} exact triples; failures assoc {} distrib {} adjoint {} expectation {}",
                r.triples, r.associativity_failures, r.distributivity_failures, r.adjoint_failures, r.expectation_failures
            ),
        )
    })
}

fn fejer() -> Line {
    criterion("8", "Fejér means", || {
        let start = Instant::now();
        let r = suites::fejer(FEJER_DEGREE, FEJER_N_MAX, SEED);
        let secs = start.elapsed().as_secs_f64();
        let last = r.rows.last().map_or(f64::INFINITY, |row| row.projected_error);
        (
            r.monotone && r.ratio < FEJER_RATIO && last < FEJER_PROJECTED && secs < FEJER_BUDGET_S,
            format!(
                "n = {FEJER_DEGREE}..{FEJER_N_MAX}: nonincreasing {}, ratio {:.4} < {FEJER_RATIO}, projected error {last:.2e} < {FEJER_PROJECTED:e}, {secs:.2}s < {FEJER_BUDGET_S}s",
                r.monotone, r.ratio
            ),
        )
    })
}

fn averaging() -> Line {
    criterion("9", "averaging operator", || match suites::averaging(1, &[2, 3], 0.05, 200, AVERAGING_SAMPLES, SEED) {
        Ok(r) => {
            let kills = r.kill_norms.iter().all(|(_, v)| *v < AVERAGING_TOL);
            let shown: Vec<String> = r.kill_norms.iter().map(|(k, v)| format!("{k}: {v:.2e}")).collect();
            (
                r.keep_error < AVERAGING_TOL && kills && r.contraction_excess <= AVERAGING_SLACK,
                format!(
                    "keep {:.2e}, kill [{}] < {AVERAGING_TOL}; contraction excess {:.2e} <= {AVERAGING_SLACK:e} over {} samples",
                    r.keep_error,
                    shown.join(", "),
                    r.contraction_excess,
                    r.samples
                ),
            )
        }
        Err(e) => (false, format!("error: {e}")),
    })
}

fn derivative() -> Line {
    criterion("10", "derivative extraction", || match suites::derivative(SEED, DERIVATIVE_STEPS) {
        Ok(r) => {
            let at = |n: i64| r.rows.iter().find(|row| row.n == n).map_or(f64::INFINITY, |row| row.residual);
            let (r5, r13, r34) = (at(5), at(13), at(34));
            (
                r34 < DERIVATIVE_TOL && r5 > r13 && r13 > r34,
                format!("residual at 5: {r5:.2e}, 13: {r13:.2e}, 34: {r34:.2e} < {DERIVATIVE_TOL:e}"),
            )
        }
        Err(e) => (false, format!("error: {e}")),
    })
}

fn center() -> Line {
    criterion("11", "center example", || match suites::center(CENTER_GRID, CENTER_TOL) {
        Ok(r) => (
            r.plateau.pass && r.constant.pass && !r.rotation_eigenfunction.pass,
            format!(
                "plateau {:.2e}, constant {:.2e} < {CENTER_TOL:e}; λ₁ {:.2e} fails: {}",
                r.plateau.max_commutator,
                r.constant.max_commutator,
                r.rotation_eigenfunction.max_commutator,
                !r.rotation_eigenfunction.pass
            ),
        ),
        Err(e) => (false, format!("error: {e}")),
    })
}

fn group() -> Line {
    criterion("12", "finite-group suite", || {
        let start = Instant::now();
        let r = suites::group(GROUP_SAMPLES, SEED);
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(r) => (
                r.pass() && secs < GROUP_BUDGET_S,
                format!(
                    "B ∩ C(X) rank {}, E(B) rank {}, E at x1 {} and x3 {}, M2 samples {} pass {}, subgroup check {}, {secs:.2}s < {GROUP_BUDGET_S}s",
                    r.intermediate.intersection_with_functions,
                    r.intermediate.expectation_image,
                    r.expectation_at_first,
                    r.expectation_at_fixed,
                    GROUP_SAMPLES,
                    r.matrix_model.pass(),
                    r.not_from_subgroup.pass
                ),
            ),
            Err(e) => (false, format!("error: {e}")),
        }
    })
}

fn small_basic(rng: &mut impl Rng, g: &Arc<Angle>) -> IdealFunction {
    let exps: BTreeSet<i64> = (0..rng.gen_range(0..3)).map(|_| rng.gen_range(-3..4)).collect();
    let mut set = orbit_set(&exps, g);
    if rng.gen_bool(0.5) {
        set = set.union(&arc((0, 1), (1, 4)), g);
    }
    IdealFunction::basic(g.clone(), rng.gen_range(1..=3), set).expect("basic")
}

fn closure_laws() -> Line {
    criterion("P1", "closure operator laws", || {
        let g = golden();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 101);
        let policy = JoinPolicy { depth: 6, window: 4 };
        let (mut checked, mut skipped, mut failures) = (0, 0, 0);
        for _ in 0..LAW_PAIRS {
            let (a, b) = (small_basic(&mut rng, &g), small_basic(&mut rng, &g));
            let naive = naive_join(&a, &b).expect("same angle");
            let closed = close(&naive, policy);
            let twice = close(&closed, policy);
            let closed_a = close(&a, policy);
            let vals: Vec<_> = (-4..=4).map(|n| closed.value(n).expect("window")).collect();
            if vals.iter().any(|v| !v.certificate.is_exact()) {
                skipped += 1;
                continue;
            }
            checked += 1;
            let ok = (-4..=4).zip(&vals).all(|(n, v)| {
                let naive_v = naive.value(n).expect("basic").set;
                v.set.is_subset(&naive_v, &g)
                    && twice.value(n).expect("window").set == v.set
                    && v.set.is_subset(&closed_a.value(n).expect("window").set, &g)
                    && closed_a.value(n).expect("window").set == a.value(n).expect("basic").set
            }) && check_closed(&closed, 4).holds;
            if !ok {
                failures += 1;
            }
        }
        (
            failures == 0 && checked > 0,
            format!("extensive, idempotent, monotone on {checked} exact pairs ({skipped} inexact skipped), failures {failures}"),
        )
    })
}

fn meet_exactness() -> Line {
    criterion("P2", "meet keeps closedness", || {
        let g = golden();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 102);
        let failures = (0..LAW_PAIRS)
            .filter(|_| {
                let (a, b) = (small_basic(&mut rng, &g), small_basic(&mut rng, &g));
                !(check_closed(&a, 5).holds && check_closed(&b, 5).holds && check_closed(&meet(&a, &b).expect("same angle"), 5).holds)
            })
            .count();
        (failures == 0, format!("{LAW_PAIRS} pairs of closed basics, window 5, failures {failures}"))
    })
}

fn gauss(re: i64, im: i64) -> Gauss {
    Complex::new(BigRational::from_integer(BigInt::from(re)), BigRational::from_integer(BigInt::from(im)))
}

fn random_factor(rng: &mut impl Rng) -> TrigPoly<PhasePoly> {
    TrigPoly::from_coeffs((0..rng.gen_range(1..=2)).map(|_| {
        let c = gauss(rng.gen_range(-3..=3), rng.gen_range(1..=3));
        (rng.gen_range(-2..=2), PhasePoly::from_terms([(rng.gen_range(-2..=2), c)]))
    }))
}

/// `η` vanishing on the finite point set `zeros`, or `None` if a point's
/// rational part is not a multiple of 1/4.
fn vanishing_on(zeros: &CircleSet, factor: TrigPoly<PhasePoly>) -> Option<TrigPoly<PhasePoly>> {
    zeros.components().iter().try_fold(factor, |acc, c| Some(acc.times(&TrigPoly::vanishing_at(&c.start())?)))
}

fn membership_consistency() -> Line {
    criterion("P3", "membership consistency", || {
        let g = golden();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 103);
        let mut failures = Vec::new();
        for i in 0..MEMBERSHIP_PAIRS {
            let points: Vec<CirclePoint> = (0..rng.gen_range(1..=2))
                .map(|_| CirclePoint::new(Rational64::new(rng.gen_range(0..4), 4), rng.gen_range(-2..=2)))
                .collect();
            let q = rng.gen_range(1..=2);
            let c = IdealFunction::basic(g.clone(), q, CircleSet::points(points, &g)).expect("basic");
            let mut terms = Vec::new();
            for n in -3..=3 {
                let zeros = c.value(n).expect("basic").set;
                if zeros.is_full() || rng.gen_bool(0.3) {
                    continue;
                }
                terms.push((n, vanishing_on(&zeros, random_factor(&mut rng)).expect("quarter points")));
            }
            let a = ExactElement::from_terms(g.clone(), terms);
            let good = membership_test(&c, &a, MEMBERSHIP_TOL).is_ok_and(|r| r.pass);
            let bad = a.plus(&ExactElement::exponential(g.clone(), q)).expect("same angle");
            let rejected = membership_test(&c, &bad, MEMBERSHIP_TOL).is_ok_and(|r| !r.pass);
            if !good || !rejected {
                failures.push(i);
            }
        }
        (
            failures.is_empty(),
            format!("{MEMBERSHIP_PAIRS} (c, a) pairs: members pass and a + e^{{iqx}} fails at tolerance {MEMBERSHIP_TOL:e}; failures {failures:?}"),
        )
    })
}

fn main() {
    let mut lines = vec![basic_closure(), shifted_points_join(), small_join_blow_up()];
    lines.extend(decomposition());
    lines.extend([
        simplicity(),
        residual_structure(),
        ring_laws(),
        fejer(),
        averaging(),
        derivative(),
        center(),
        group(),
        closure_laws(),
        meet_exactness(),
        membership_consistency(),
    ]);
    if !report(&lines) {
        std::process::exit(1);
    }
}
