//! Jobs: one verb with its inputs and options, validated and then run.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rotalg_core::circle_sets::CircleSet;
use rotalg_core::diophantine::Angle;
use rotalg_core::ideal_calculus::{
    canonical_decomposition, check_closed, check_relative_closed, classify_algebra, omega, q_intersection, simplicity_report, support,
    Certificate, IdealFunction, JoinPolicy,
};
use rotalg_sandbox::finite_group_sandbox::{augmentation_ideal, build_bi, check_no_intermediate_m2, ActionDoc, FiniteAction};
use rotalg_sandbox::rotation_sandbox::Mode;
use rotalg_sandbox::suites;

use crate::input::{load_ideal, load_plot_input, load_text, parse_json, resolve_angle, IdealDoc, InputError, PlotInput};
use crate::plot::{ideal_svg, set_svg};
use crate::report::{
    report_schema, ActionBody, Body, Check, ClassificationBody, Comparison, Report, ReportOptions, SimplicityBody, SuiteBody, SuiteData,
    ValueRow, ValuesBody, ValuesSummary, WitnessBody,
};

pub const DEFAULT_WINDOW: i64 = 12;
pub const DEFAULT_DEPTH: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Fejer,
    RingLaws,
    Averaging,
    Derivative,
    Center,
}

impl Suite {
    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "fejer" => Suite::Fejer,
            "ring-laws" => Suite::RingLaws,
            "averaging" => Suite::Averaging,
            "derivative" => Suite::Derivative,
            "center" => Suite::Center,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fejer => "fejer",
            Suite::RingLaws => "ring-laws",
            Suite::Averaging => "averaging",
            Suite::Derivative => "derivative",
            Suite::Center => "center",
        }
    }

    pub fn mode(self) -> Mode {
        match self {
            Suite::RingLaws => Mode::Exact,
            _ => Mode::Float,
        }
    }

    /// Bound applied to the suite's main numeric claim.
    pub fn default_tolerance(self) -> f64 {
        match self {
            Suite::Fejer => 1e-2,
            Suite::RingLaws => 0.0,
            Suite::Averaging => 0.05,
            Suite::Derivative => 1e-2,
            Suite::Center => 1e-8,
        }
    }
}

/// Suite parameters; `None` takes the suite default.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteParams {
    pub seed: Option<u64>,
    pub n: Option<u64>,
    pub degree: Option<i64>,
    pub triples: Option<usize>,
    pub samples: Option<usize>,
    pub q: Option<i64>,
    pub rs: Option<Vec<i64>>,
    pub eps: Option<f64>,
    pub bound: Option<u64>,
    pub steps: Option<usize>,
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verb {
    Eval { input: String, at: Vec<i64> },
    CheckClosed { input: String },
    Meet { inputs: Vec<String> },
    Join { inputs: Vec<String> },
    Close { input: String },
    Decompose { input: String },
    Classify { input: String },
    Simplicity { input: String },
    SandboxVerify { suite: Suite, params: SuiteParams },
    GroupVerify { action: Option<String>, samples: Option<usize>, seed: Option<u64> },
    Plot { input: String, size: u32 },
    Schema,
}

impl Verb {
    pub fn name(&self) -> &'static str {
        match self {
            Verb::Eval { .. } => "eval",
            Verb::CheckClosed { .. } => "check-closed",
            Verb::Meet { .. } => "meet",
            Verb::Join { .. } => "join",
            Verb::Close { .. } => "close",
            Verb::Decompose { .. } => "decompose",
            Verb::Classify { .. } => "classify",
            Verb::Simplicity { .. } => "simplicity",
            Verb::SandboxVerify { .. } => "sandbox-verify",
            Verb::GroupVerify { .. } => "group-verify",
            Verb::Plot { .. } => "plot",
            Verb::Schema => "schema",
        }
    }

    fn works_on_ideals(&self) -> bool {
        !matches!(self, Verb::SandboxVerify { .. } | Verb::GroupVerify { .. } | Verb::Schema)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct JobOptions {
    pub angle: Option<String>,
    /// Used when neither `--angle` nor the documents name an angle.
    pub default_angle: Option<String>,
    pub window: Option<i64>,
    pub depth: Option<usize>,
    pub tolerance: Option<f64>,
    pub mode: Option<Mode>,
    pub require_exact: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Job {
    pub verb: Verb,
    pub options: JobOptions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    CheckFailed = 2,
    NotExact = 3,
    InputError = 4,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Report(Box<Report>),
    Svg(String),
    Schema(serde_json::Value),
}

impl Output {
    pub fn render(&self) -> String {
        match self {
            Output::Report(r) => r.to_json(),
            Output::Svg(s) => s.clone(),
            Output::Schema(v) => {
                let mut text = serde_json::to_string_pretty(v).expect("schema serializes");
                text.push('\n');
                text
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: Output,
    pub exit: ExitStatus,
}

fn reject(verb: &Verb, flag: &str) -> InputError {
    InputError::Options(format!("{flag} does not apply to `{}`", verb.name()))
}

impl Job {
    /// Option compatibility, checked before any input is read.
    pub fn validate(&self) -> Result<(), InputError> {
        let o = &self.options;
        let v = &self.verb;
        if !v.works_on_ideals() {
            if o.angle.is_some() {
                return Err(reject(v, "--angle"));
            }
            if o.window.is_some() {
                return Err(reject(v, "--window"));
            }
            if o.depth.is_some() {
                return Err(reject(v, "--depth"));
            }
        }
        if let Some(w) = o.window {
            if w < 1 {
                return Err(InputError::Options("--window must be at least 1".into()));
            }
        }
        if o.depth == Some(0) {
            return Err(InputError::Options("--depth must be at least 1".into()));
        }
        if let Some(t) = o.tolerance {
            if !(t.is_finite() && t > 0.0) {
                return Err(InputError::Options("--tolerance must be a positive number".into()));
            }
        }
        match v {
            Verb::SandboxVerify { suite, .. } => {
                if let Some(m) = o.mode {
                    if m != suite.mode() {
                        return Err(InputError::Options(format!("suite `{}` runs in {} mode", suite.name(), mode_name(suite.mode()))));
                    }
                }
                if o.require_exact && suite.mode() == Mode::Float {
                    return Err(InputError::Options(format!("--require-exact does not apply to the float suite `{}`", suite.name())));
                }
                if *suite == Suite::RingLaws && o.tolerance.is_some() {
                    return Err(InputError::Options("ring laws are checked with zero error; --tolerance does not apply".into()));
                }
            }
            Verb::GroupVerify { .. } => {
                if o.tolerance.is_some() {
                    return Err(reject(v, "--tolerance"));
                }
                if o.mode == Some(Mode::Float) {
                    return Err(InputError::Options("`group-verify` runs in exact mode".into()));
                }
            }
            _ => {
                if o.tolerance.is_some() {
                    return Err(reject(v, "--tolerance"));
                }
                if o.mode.is_some() {
                    return Err(reject(v, "--mode"));
                }
            }
        }
        match v {
            Verb::Meet { inputs } | Verb::Join { inputs } if inputs.len() < 2 => {
                Err(InputError::Options(format!("`{}` needs at least two inputs", v.name())))
            }
            Verb::Plot { size, .. } if *size < 32 => Err(InputError::Options("--size must be at least 32".into())),
            Verb::Schema if o.require_exact => Err(reject(v, "--require-exact")),
            _ => Ok(()),
        }
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Exact => "exact",
        Mode::Float => "float",
    }
}

pub fn run(job: &Job) -> Result<Outcome, InputError> {
    job.validate()?;
    let o = &job.options;
    match &job.verb {
        Verb::Schema => Ok(Outcome { output: Output::Schema(report_schema()), exit: ExitStatus::Success }),
        Verb::Plot { input, size } => plot(input, *size, o),
        Verb::SandboxVerify { suite, params } => finish(job, None, sandbox_body(*suite, params, o.tolerance)?),
        Verb::GroupVerify { action, samples, seed } => finish(job, None, group_body(action.as_deref(), *samples, *seed)?),
        verb => {
            let paths: Vec<&String> = match verb {
                Verb::Meet { inputs } | Verb::Join { inputs } => inputs.iter().collect(),
                Verb::Eval { input, .. }
                | Verb::CheckClosed { input }
                | Verb::Close { input }
                | Verb::Decompose { input }
                | Verb::Classify { input }
                | Verb::Simplicity { input } => vec![input],
                _ => unreachable!("handled above"),
            };
            let docs = paths.iter().map(|p| load_ideal(p)).collect::<Result<Vec<_>, _>>()?;
            let angle = resolve_angle(o.angle.as_deref(), docs.iter().map(|d| d.angle.as_ref()), o.default_angle.as_deref())?;
            let (window, depth) = effective_policy(o, &docs);
            let policy = JoinPolicy { depth, window };
            let fs = docs.iter().map(|d| d.build(&angle, policy)).collect::<Result<Vec<_>, _>>()?;
            let body = ideal_body(verb, &fs, policy)?;
            let options = ReportOptions { window: Some(window), depth: Some(depth), ..report_options(o) };
            let report = Report::new(verb.name(), Some(angle.descriptor().clone()), options, body);
            Ok(outcome(report))
        }
    }
}

/// Flags first, then a single join document's own policy, then defaults.
fn effective_policy(o: &JobOptions, docs: &[IdealDoc]) -> (i64, usize) {
    let hint = match docs {
        [d] => d.policy_hint(),
        _ => (None, None),
    };
    (o.window.or(hint.1).unwrap_or(DEFAULT_WINDOW), o.depth.or(hint.0).unwrap_or(DEFAULT_DEPTH))
}

fn report_options(o: &JobOptions) -> ReportOptions {
    ReportOptions { window: o.window, depth: o.depth, tolerance: o.tolerance, mode: o.mode, require_exact: o.require_exact }
}

fn outcome(report: Report) -> Outcome {
    let exit = match report.status {
        crate::report::Status::Ok => ExitStatus::Success,
        crate::report::Status::CheckFailed => ExitStatus::CheckFailed,
        crate::report::Status::NotExact => ExitStatus::NotExact,
    };
    Outcome { output: Output::Report(Box::new(report)), exit }
}

fn finish(job: &Job, angle: Option<&Angle>, body: Body) -> Result<Outcome, InputError> {
    let report = Report::new(job.verb.name(), angle.map(|a| a.descriptor().clone()), report_options(&job.options), body);
    Ok(outcome(report))
}

pub fn values_body(f: &IdealFunction, window: i64, at: &[i64]) -> Result<ValuesBody, InputError> {
    let indices: Vec<i64> = if at.is_empty() { (-window..=window).collect() } else { at.to_vec() };
    let mut certificate = Certificate::exact();
    let mut values = Vec::with_capacity(indices.len());
    for n in indices {
        let v = f.value(n)?;
        certificate = certificate.combine(&v.certificate);
        values.push(ValueRow { n, set: v.set, certificate: v.certificate });
    }
    let result = if values.iter().all(|r| r.set.is_empty()) {
        ValuesSummary::AllEmpty
    } else if values.iter().all(|r| r.n == 0 || r.set.is_full()) {
        ValuesSummary::Trivial
    } else {
        ValuesSummary::Mixed
    };
    Ok(ValuesBody { result, certificate, window, values })
}

fn ideal_body(verb: &Verb, fs: &[IdealFunction], policy: JoinPolicy) -> Result<Body, InputError> {
    let window = policy.window;
    let first = &fs[0];
    Ok(match verb {
        Verb::Eval { at, .. } => Body::Values(values_body(first, window, at)?),
        Verb::Meet { .. } => {
            let mut acc = first.clone();
            for f in &fs[1..] {
                acc = IdealFunction::meet(&acc, f)?;
            }
            Body::Values(values_body(&acc, window, &[])?)
        }
        Verb::Join { .. } => {
            let mut acc = first.clone();
            for f in &fs[1..] {
                acc = IdealFunction::naive_join(&acc, f)?;
            }
            Body::Values(values_body(&IdealFunction::close(&acc, policy), window, &[])?)
        }
        Verb::Close { .. } => Body::Values(values_body(&IdealFunction::close(first, policy), window, &[])?),
        Verb::CheckClosed { .. } => Body::Closed(check_closed(first, window)),
        Verb::Decompose { .. } => Body::Decomposition(canonical_decomposition(first, window, policy.depth)?),
        Verb::Classify { .. } => {
            let (omega_set, omega_truncated) = omega(first, window);
            Body::Classification(ClassificationBody {
                classification: classify_algebra(first, window),
                support: support(first, window),
                q_intersection: q_intersection(first, window),
                omega: omega_set,
                omega_truncated,
            })
        }
        Verb::Simplicity { .. } => {
            let rep = simplicity_report(first, window)?;
            let witness = match &rep.witness {
                Some(j) => {
                    Some(WitnessBody { zero_value: j.value(0)?, triviality: j.triviality()?, closed: check_relative_closed(j, window) })
                }
                None => None,
            };
            Body::Simplicity(SimplicityBody { verdict: rep.verdict, intersection: rep.intersection, witness, notes: rep.notes })
        }
        _ => unreachable!("not an ideal verb"),
    })
}

pub fn sandbox_body(suite: Suite, p: &SuiteParams, tolerance: Option<f64>) -> Result<Body, InputError> {
    let tol = tolerance.unwrap_or(suite.default_tolerance());
    let seed = p.seed.unwrap_or(1);
    let (checks, data) = match suite {
        Suite::Fejer => {
            let degree = p.degree.unwrap_or(8);
            let n_max = p.n.unwrap_or(64);
            if degree < 1 || n_max < degree as u64 {
                return Err(InputError::Options("fejer needs 1 <= --degree <= --n".into()));
            }
            let rep = suites::fejer(degree, n_max, seed);
            let last = rep.rows.last().map(|r| r.projected_error).unwrap_or(0.0);
            let checks = vec![
                Check::flag("error nonincreasing", rep.monotone),
                Check::new("final error / initial error", rep.ratio, Comparison::Below, 0.15),
                Check::new("final projected error", last, Comparison::Below, tol),
            ];
            (checks, SuiteData::Fejer(rep))
        }
        Suite::RingLaws => {
            let rep = suites::ring_laws(p.triples.unwrap_or(500), seed);
            let failures = rep.associativity_failures + rep.distributivity_failures + rep.adjoint_failures + rep.expectation_failures;
            (vec![Check::new("identity failures", failures as f64, Comparison::Equal, 0.0)], SuiteData::RingLaws(rep))
        }
        Suite::Averaging => {
            let rs = p.rs.clone().unwrap_or_else(|| vec![2, 3]);
            let rep =
                suites::averaging(p.q.unwrap_or(1), &rs, p.eps.unwrap_or(0.05), p.bound.unwrap_or(200), p.samples.unwrap_or(50), seed)?;
            let mut checks = vec![Check::new("keep error", rep.keep_error, Comparison::Below, tol)];
            for (r, value) in &rep.kill_norms {
                checks.push(Check::new(format!("norm of averaged frequency {r}"), *value, Comparison::Below, tol));
            }
            checks.push(Check::new("contraction excess", rep.contraction_excess, Comparison::AtMost, 1e-9));
            (checks, SuiteData::Averaging(rep))
        }
        Suite::Derivative => {
            let rep = suites::derivative(seed, p.steps.unwrap_or(8))?;
            let last = rep.rows.last().map(|r| r.residual).unwrap_or(f64::INFINITY);
            let decreasing = rep.rows.windows(2).filter(|w| w[0].n >= 5).all(|w| w[1].residual < w[0].residual);
            let checks =
                vec![Check::new("final residual", last, Comparison::Below, tol), Check::flag("residual decreasing from n = 5", decreasing)];
            (checks, SuiteData::Derivative(rep))
        }
        Suite::Center => {
            let rep = suites::center(p.grid.unwrap_or(4000), tol)?;
            let checks = vec![
                Check::new("plateau commutator", rep.plateau.max_commutator, Comparison::Below, tol),
                Check::new("constant commutator", rep.constant.max_commutator, Comparison::Below, tol),
                Check::new("rotation eigenfunction commutator", rep.rotation_eigenfunction.max_commutator, Comparison::AtLeast, tol),
            ];
            (checks, SuiteData::Center(rep))
        }
    };
    Ok(Body::Suite(SuiteBody { mode: suite.mode(), seed: Some(seed), checks, data }))
}

pub fn group_body(action: Option<&str>, samples: Option<usize>, seed: Option<u64>) -> Result<Body, InputError> {
    let seed = seed.unwrap_or(1);
    let samples = samples.unwrap_or(1000);
    let (checks, data) = match action {
        None => {
            let rep = suites::group(samples, seed)?;
            let checks = vec![
                Check::new("dim(B ∩ C(X))", rep.intermediate.intersection_with_functions as f64, Comparison::Equal, 1.0),
                Check::new("dim E(B)", rep.intermediate.expectation_image as f64, Comparison::AtLeast, 2.0),
                Check::new("E(u δ u) at the first point", rep.expectation_at_first, Comparison::AtLeast, 1.0),
                Check::new("E(u δ u) at the fixed point", rep.expectation_at_fixed, Comparison::Equal, 0.0),
                Check::flag("no intermediate algebra in the 2x2 model", rep.matrix_model.pass()),
                Check::flag("B differs from both subgroup crossed products", rep.not_from_subgroup.pass),
            ];
            (checks, SuiteData::Group(rep))
        }
        Some(arg) => {
            let (origin, text) = load_text(arg)?;
            let doc: ActionDoc = parse_json(&origin, &text)?;
            let fa = FiniteAction::from_doc(&doc)?;
            let aug = augmentation_ideal(fa.group())?;
            let (_, intermediate) = build_bi(&fa, &aug)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let matrix_model = check_no_intermediate_m2(&mut rng, samples);
            let checks = vec![
                Check::flag("B is a closed algebra", intermediate.closed),
                Check::flag("no intermediate algebra in the 2x2 model", matrix_model.pass()),
            ];
            (checks, SuiteData::Action(ActionBody { action: fa.to_doc(), intermediate, matrix_model }))
        }
    };
    Ok(Body::Suite(SuiteBody { mode: Mode::Exact, seed: Some(seed), checks, data }))
}

fn plot(input: &str, size: u32, o: &JobOptions) -> Result<Outcome, InputError> {
    let doc = load_plot_input(input)?;
    let angle: Arc<Angle> = resolve_angle(o.angle.as_deref(), [doc.angle()], o.default_angle.as_deref())?;
    let (svg, exact) = match &doc {
        PlotInput::Set(s) => (set_svg(&s.set.clone().normalize(&angle), &angle, size), true),
        PlotInput::Ideal(d) => {
            let (window, depth) = effective_policy(o, std::slice::from_ref(d));
            let f = d.build(&angle, JoinPolicy { depth, window })?;
            let values: BTreeMap<i64, (CircleSet, Certificate)> =
                (-window..=window).map(|n| f.value(n).map(|v| (n, (v.set, v.certificate)))).collect::<Result<_, _>>()?;
            let exact = values.values().all(|(_, c)| c.is_exact());
            (ideal_svg(&values, &angle, size), exact)
        }
    };
    let exit = if o.require_exact && !exact { ExitStatus::NotExact } else { ExitStatus::Success };
    Ok(Outcome { output: Output::Svg(svg), exit })
}
