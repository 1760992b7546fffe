//! Generalized trigonometric polynomials `a = Σ_n e^{inx} η_n` in the rotation
//! crossed product, with `η_n = Σ_k c_{n,k} λ_k`.
//!
//! Exact coefficients live in `ℚ(i)[ζ, ζ⁻¹]` with `ζ = e^{2πiρ}`. Since `ζ` is
//! transcendental, two exact elements are equal iff their data agree.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt::Debug;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rotalg_core::circle_sets::{CirclePoint, CircleSet, Component};
use rotalg_core::diophantine::{circle_distance, Angle};
use rotalg_core::ideal_calculus::{support, IdealFunction, ReprView, SupportKind};
use serde::{Deserialize, Serialize};

use crate::SandboxError;

pub type Gauss = Complex<BigRational>;

/// Radius of the truncated representation used for norm estimates.
pub const DEFAULT_RADIUS: i64 = 32;
/// Sample points per unit of arc length in membership tests.
pub const DEFAULT_DENSITY: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

pub trait Coefficient: Clone + PartialEq + Debug + Send + Sync {
    const MODE: Mode;
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn conj(&self) -> Self;
    fn gauss(z: &Gauss) -> Self;
    /// `ζ^power`.
    fn phase(angle: &Angle, power: i64) -> Self;
    fn to_complex(&self, angle: &Angle) -> Complex64;
    fn to_docs(&self, k: i64) -> Vec<CoeffDoc>;
    /// Reads `re + i·im`; the caller applies `ζ^phase`.
    fn from_doc(doc: &CoeffDoc) -> Result<Self, SandboxError>;

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negate())
    }
    fn rational(r: &BigRational) -> Self {
        Self::gauss(&Complex::new(r.clone(), BigRational::zero()))
    }
}

fn zeta(angle: &Angle, power: i64) -> Complex64 {
    if power == 0 {
        return Complex64::new(1.0, 0.0);
    }
    Complex64::from_polar(1.0, TAU * angle.frac_multiple(power))
}

fn gauss_to_f64(z: &Gauss) -> Complex64 {
    Complex64::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

/// Laurent polynomial in `ζ` with Gaussian rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PhasePoly(BTreeMap<i64, Gauss>);

impl PhasePoly {
    pub fn constant(z: Gauss) -> Self {
        let mut m = BTreeMap::new();
        add_into(&mut m, 0, z);
        PhasePoly(m)
    }

    pub fn terms(&self) -> &BTreeMap<i64, Gauss> {
        &self.0
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Gauss)>) -> Self {
        let mut m = BTreeMap::new();
        for (p, c) in terms {
            add_into(&mut m, p, c);
        }
        PhasePoly(m)
    }
}

trait Additive: Clone {
    fn is_nil(&self) -> bool;
    fn sum(&self, other: &Self) -> Self;
}

impl Additive for Gauss {
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sum(&self, other: &Self) -> Self {
        self + other
    }
}

impl<C: Coefficient> Additive for C {
    fn is_nil(&self) -> bool {
        self.is_zero()
    }
    fn sum(&self, other: &Self) -> Self {
        self.plus(other)
    }
}

fn add_into<V: Additive>(map: &mut BTreeMap<i64, V>, key: i64, value: V) {
    if value.is_nil() {
        return;
    }
    match map.get(&key) {
        Some(old) => {
            let s = old.sum(&value);
            if s.is_nil() {
                map.remove(&key);
            } else {
                map.insert(key, s);
            }
        }
        None => {
            map.insert(key, value);
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational, SandboxError> {
    let bad = || SandboxError::BadCoefficient(s.to_string());
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        if s.contains('/') || frac.chars().any(|c| !c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let num: BigInt = digits.parse().map_err(|_| bad())?;
        let r = BigRational::new(num, BigInt::from(10).pow(frac.len() as u32));
        return Ok(if negative { -r } else { r });
    }
    s.parse::<BigRational>().map_err(|_| bad())
}

impl Coefficient for PhasePoly {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        PhasePoly::default()
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let mut m = self.0.clone();
        for (p, c) in &other.0 {
            add_into(&mut m, *p, c.clone());
        }
        PhasePoly(m)
    }
    fn times(&self, other: &Self) -> Self {
        let mut m = BTreeMap::new();
        for (p, c) in &self.0 {
            for (p2, c2) in &other.0 {
                add_into(&mut m, p + p2, c * c2);
            }
        }
        PhasePoly(m)
    }
    fn negate(&self) -> Self {
        PhasePoly(self.0.iter().map(|(p, c)| (*p, -c.clone())).collect())
    }
    fn conj(&self) -> Self {
        PhasePoly(self.0.iter().map(|(p, c)| (-p, c.conj())).collect())
    }
    fn gauss(z: &Gauss) -> Self {
        PhasePoly::constant(z.clone())
    }
    fn phase(_angle: &Angle, power: i64) -> Self {
        PhasePoly::from_terms([(power, Gauss::one())])
    }
    fn to_complex(&self, angle: &Angle) -> Complex64 {
        self.0.iter().map(|(p, c)| gauss_to_f64(c) * zeta(angle, *p)).sum()
    }
    fn to_docs(&self, k: i64) -> Vec<CoeffDoc> {
        self.0.iter().map(|(p, c)| CoeffDoc { k, re: c.re.to_string(), im: c.im.to_string(), phase: *p }).collect()
    }
    fn from_doc(doc: &CoeffDoc) -> Result<Self, SandboxError> {
        let z = Complex::new(parse_rational(&doc.re)?, parse_rational(&doc.im)?);
        Ok(PhasePoly::constant(z))
    }
}

impl Coefficient for Complex64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn gauss(z: &Gauss) -> Self {
        gauss_to_f64(z)
    }
    fn phase(angle: &Angle, power: i64) -> Self {
        zeta(angle, power)
    }
    fn to_complex(&self, _angle: &Angle) -> Complex64 {
        *self
    }
    fn to_docs(&self, k: i64) -> Vec<CoeffDoc> {
        vec![CoeffDoc { k, re: self.re.to_string(), im: self.im.to_string(), phase: 0 }]
    }
    fn from_doc(doc: &CoeffDoc) -> Result<Self, SandboxError> {
        let f = |s: &str| -> Result<f64, SandboxError> {
            match s.trim().parse::<f64>() {
                Ok(x) => Ok(x),
                Err(_) => parse_rational(s)?.to_f64().ok_or_else(|| SandboxError::BadCoefficient(s.to_string())),
            }
        };
        Ok(Complex64::new(f(&doc.re)?, f(&doc.im)?))
    }
}

/// `φ = Σ φ̂(k) λ_k`, i.e. the function `t ↦ Σ φ̂(k) e^{2πikt}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly<C> {
    coeffs: BTreeMap<i64, C>,
}

impl<C: Coefficient> Default for TrigPoly<C> {
    fn default() -> Self {
        TrigPoly { coeffs: BTreeMap::new() }
    }
}

impl<C: Coefficient> TrigPoly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(k: i64, c: C) -> Self {
        Self::from_coeffs([(k, c)])
    }

    pub fn from_coeffs(coeffs: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut m = BTreeMap::new();
        for (k, c) in coeffs {
            add_into(&mut m, k, c);
        }
        TrigPoly { coeffs: m }
    }

    pub fn coeff(&self, k: i64) -> C {
        self.coeffs.get(&k).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, C> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.keys().map(|k| k.abs()).max().unwrap_or(0)
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut m = self.coeffs.clone();
        for (k, c) in &other.coeffs {
            add_into(&mut m, *k, c.clone());
        }
        TrigPoly { coeffs: m }
    }

    pub fn negate(&self) -> Self {
        TrigPoly { coeffs: self.coeffs.iter().map(|(k, c)| (*k, c.negate())).collect() }
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negate())
    }

    pub fn scale(&self, s: &C) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|(k, c)| (*k, c.times(s))))
    }

    pub fn times(&self, other: &Self) -> Self {
        let mut m = BTreeMap::new();
        for (k, c) in &self.coeffs {
            for (k2, c2) in &other.coeffs {
                add_into(&mut m, k + k2, c.times(c2));
            }
        }
        TrigPoly { coeffs: m }
    }

    /// `φ∘τ^m`, whose `k`-th coefficient is `φ̂(k) ζ^{km}`.
    pub fn rotate(&self, angle: &Angle, m: i64) -> Self {
        if m == 0 {
            return self.clone();
        }
        Self::from_coeffs(self.coeffs.iter().map(|(k, c)| (*k, c.times(&C::phase(angle, k * m)))))
    }

    /// The pointwise conjugate `φ̄`.
    pub fn conj(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|(k, c)| (-k, c.conj())))
    }

    pub fn eval(&self, angle: &Angle, t: f64) -> Complex64 {
        self.coeffs.iter().map(|(k, c)| c.to_complex(angle) * Complex64::from_polar(1.0, TAU * (*k as f64) * t)).sum()
    }

    pub fn to_float(&self, angle: &Angle) -> TrigPoly<Complex64> {
        TrigPoly::from_coeffs(self.coeffs.iter().map(|(k, c)| (*k, c.to_complex(angle))))
    }

    pub fn function<'a>(&'a self, angle: &'a Angle) -> TrigFunction<'a, C> {
        TrigFunction { poly: self, angle }
    }
}

impl TrigPoly<PhasePoly> {
    /// `e^{2πit} − e^{2πip}`; exact only when the rational part of `p` is a
    /// multiple of 1/4.
    pub fn vanishing_at(p: &CirclePoint) -> Option<Self> {
        let quarters = p.q() * Rational64::from_integer(4);
        if !quarters.is_integer() {
            return None;
        }
        let (re, im) = match quarters.to_integer().rem_euclid(4) {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        };
        let unit = |x: i64| BigRational::from_integer(BigInt::from(x));
        let root = PhasePoly::from_terms([(p.n(), Gauss::new(unit(-re), unit(-im)))]);
        Some(TrigPoly::from_coeffs([(1, PhasePoly::constant(Gauss::one())), (0, root)]))
    }
}

/// A continuous function on the unit-normalized circle.
pub trait CircleFunction: Sync {
    fn eval(&self, t: f64) -> Complex64;
}

pub struct TrigFunction<'a, C> {
    poly: &'a TrigPoly<C>,
    angle: &'a Angle,
}

impl<C: Coefficient> CircleFunction for TrigFunction<'_, C> {
    fn eval(&self, t: f64) -> Complex64 {
        self.poly.eval(self.angle, t)
    }
}

pub struct ConstantFunction(pub Complex64);

impl CircleFunction for ConstantFunction {
    fn eval(&self, _t: f64) -> Complex64 {
        self.0
    }
}

/// Periodic piecewise-linear interpolation through `(t, value)` knots.
#[derive(Debug, Clone)]
pub struct PiecewiseLinear {
    knots: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(knots: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut knots: Vec<(f64, f64)> = knots.into_iter().map(|(t, v)| (t.rem_euclid(1.0), v)).collect();
        knots.sort_by(|a, b| a.0.total_cmp(&b.0));
        assert!(!knots.is_empty(), "need at least one knot");
        PiecewiseLinear { knots }
    }
}

impl CircleFunction for PiecewiseLinear {
    fn eval(&self, t: f64) -> Complex64 {
        let t = t.rem_euclid(1.0);
        let n = self.knots.len();
        let i = self.knots.partition_point(|k| k.0 <= t);
        let (t0, v0) = if i == 0 { (self.knots[n - 1].0 - 1.0, self.knots[n - 1].1) } else { self.knots[i - 1] };
        let (t1, v1) = if i == n { (self.knots[0].0 + 1.0, self.knots[0].1) } else { self.knots[i] };
        let w = if t1 > t0 { (t - t0) / (t1 - t0) } else { 0.0 };
        Complex64::new(v0 + w * (v1 - v0), 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffDoc {
    pub k: i64,
    pub re: String,
    pub im: String,
    #[serde(default, skip_serializing_if = "is_zero_i64")]
    pub phase: i64,
}

fn is_zero_i64(x: &i64) -> bool {
    *x == 0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub n: i64,
    pub coeffs: Vec<CoeffDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementDoc {
    pub terms: Vec<TermDoc>,
    pub mode: Mode,
}

/// `a = Σ_n e^{inx} η_n`; `⟨a⟩(n) = η_n`.
#[derive(Debug, Clone)]
pub struct CrossedElement<C> {
    angle: Arc<Angle>,
    terms: BTreeMap<i64, TrigPoly<C>>,
}

impl<C: Coefficient> PartialEq for CrossedElement<C> {
    fn eq(&self, other: &Self) -> bool {
        self.angle.descriptor() == other.angle.descriptor() && self.terms == other.terms
    }
}

pub type ExactElement = CrossedElement<PhasePoly>;
pub type FloatElement = CrossedElement<Complex64>;

impl<C: Coefficient> CrossedElement<C> {
    pub fn zero(angle: Arc<Angle>) -> Self {
        CrossedElement { angle, terms: BTreeMap::new() }
    }

    /// `e^{inx} η`.
    pub fn term(angle: Arc<Angle>, n: i64, eta: TrigPoly<C>) -> Self {
        Self::from_terms(angle, [(n, eta)])
    }

    /// `e^{inx}` alone.
    pub fn exponential(angle: Arc<Angle>, n: i64) -> Self {
        Self::term(angle, n, TrigPoly::monomial(0, C::rational(&BigRational::one())))
    }

    /// `λ_k` alone.
    pub fn unitary(angle: Arc<Angle>, k: i64) -> Self {
        Self::term(angle, 0, TrigPoly::monomial(k, C::rational(&BigRational::one())))
    }

    pub fn from_terms(angle: Arc<Angle>, terms: impl IntoIterator<Item = (i64, TrigPoly<C>)>) -> Self {
        let mut a = Self::zero(angle);
        for (n, eta) in terms {
            a.add_term(n, eta);
        }
        a
    }

    fn add_term(&mut self, n: i64, eta: TrigPoly<C>) {
        if eta.is_zero() {
            return;
        }
        let sum = match self.terms.get(&n) {
            Some(old) => old.plus(&eta),
            None => eta,
        };
        if sum.is_zero() {
            self.terms.remove(&n);
        } else {
            self.terms.insert(n, sum);
        }
    }

    pub fn angle(&self) -> &Arc<Angle> {
        &self.angle
    }

    pub fn terms(&self) -> &BTreeMap<i64, TrigPoly<C>> {
        &self.terms
    }

    /// `⟨a⟩(n)`.
    pub fn coefficient(&self, n: i64) -> TrigPoly<C> {
        self.terms.get(&n).cloned().unwrap_or_default()
    }

    pub fn x_support(&self) -> Vec<i64> {
        self.terms.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_angle(&self, other: &Self) -> Result<(), SandboxError> {
        if self.angle.descriptor() == other.angle.descriptor() {
            Ok(())
        } else {
            Err(SandboxError::AngleMismatch)
        }
    }

    pub fn plus(&self, other: &Self) -> Result<Self, SandboxError> {
        self.check_angle(other)?;
        let mut out = self.clone();
        for (n, eta) in &other.terms {
            out.add_term(*n, eta.clone());
        }
        Ok(out)
    }

    pub fn minus(&self, other: &Self) -> Result<Self, SandboxError> {
        self.plus(&other.negate())
    }

    pub fn negate(&self) -> Self {
        self.map_terms(|_, eta| eta.negate())
    }

    pub fn scale(&self, s: &C) -> Self {
        self.map_terms(|_, eta| eta.scale(s))
    }

    fn map_terms(&self, f: impl Fn(i64, &TrigPoly<C>) -> TrigPoly<C>) -> Self {
        Self::from_terms(self.angle.clone(), self.terms.iter().map(|(n, eta)| (*n, f(*n, eta))))
    }

    /// `e^{inx}φ · e^{imx}ψ = e^{i(n+m)x} (φ∘τ^m)ψ`, extended bilinearly.
    pub fn multiply(&self, other: &Self) -> Result<Self, SandboxError> {
        self.check_angle(other)?;
        let mut out = Self::zero(self.angle.clone());
        for (n, eta) in &self.terms {
            for (m, psi) in &other.terms {
                out.add_term(n + m, eta.rotate(&self.angle, *m).times(psi));
            }
        }
        Ok(out)
    }

    /// `(e^{inx}φ)* = e^{-inx} (φ̄∘τ^{-n})`.
    pub fn adjoint(&self) -> Self {
        Self::from_terms(self.angle.clone(), self.terms.iter().map(|(n, eta)| (-n, eta.conj().rotate(&self.angle, -n))))
    }

    /// The trace-preserving expectation onto the `λ`-algebra: `η_0`.
    pub fn expectation_mu(&self) -> TrigPoly<C> {
        self.coefficient(0)
    }

    /// Coefficient `f_k = 𝔼(a λ_k*)` as a map from x-frequency to coefficient.
    pub fn expectation_canonical(&self, k: i64) -> BTreeMap<i64, C> {
        self.terms.iter().filter_map(|(n, eta)| eta.coeffs.get(&k).map(|c| (*n, c.clone()))).collect()
    }

    /// All canonical coefficients: `k ↦ (n ↦ c_{n,k})`.
    pub fn canonical_form(&self) -> BTreeMap<i64, BTreeMap<i64, C>> {
        let mut out: BTreeMap<i64, BTreeMap<i64, C>> = BTreeMap::new();
        for (n, eta) in &self.terms {
            for (k, c) in &eta.coeffs {
                out.entry(*k).or_default().insert(*n, c.clone());
            }
        }
        out
    }

    pub fn from_canonical(angle: Arc<Angle>, form: &BTreeMap<i64, BTreeMap<i64, C>>) -> Self {
        let mut a = Self::zero(angle);
        for (k, f) in form {
            for (n, c) in f {
                a.add_term(*n, TrigPoly::monomial(*k, c.clone()));
            }
        }
        a
    }

    /// Keep x-frequencies with `|m| <= n`.
    pub fn project_qn(&self, n: u64) -> Self {
        Self::from_terms(self.angle.clone(), self.terms.iter().filter(|(m, _)| m.unsigned_abs() <= n).map(|(m, e)| (*m, e.clone())))
    }

    /// Smallest nonzero `|m|` with `⟨a⟩(m) ≠ 0`; `None` stands for infinity.
    pub fn q_of(&self) -> Option<u64> {
        self.terms.keys().filter(|m| **m != 0).map(|m| m.unsigned_abs()).min()
    }

    /// `Σ_{|j| <= n} (1 - |j|/(n+1)) e^{ijx} ⟨a⟩(j)`.
    pub fn fejer_bracket(&self, n: u64) -> Self {
        let terms = self.terms.iter().filter(|(j, _)| j.unsigned_abs() <= n).map(|(j, eta)| {
            let w = BigRational::new(BigInt::from(n + 1 - j.unsigned_abs()), BigInt::from(n + 1));
            (*j, eta.scale(&C::rational(&w)))
        });
        Self::from_terms(self.angle.clone(), terms)
    }

    /// `λ_k a λ_k*`: the x-frequency `m` part picks up `ζ^{mk}`.
    pub fn conjugate_by(&self, k: i64) -> Self {
        self.map_terms(|m, eta| eta.scale(&C::phase(&self.angle, m * k)))
    }

    pub fn to_float(&self) -> FloatElement {
        CrossedElement::from_terms(self.angle.clone(), self.terms.iter().map(|(n, eta)| (*n, eta.to_float(&self.angle))))
    }

    pub fn to_doc(&self) -> ElementDoc {
        ElementDoc {
            mode: C::MODE,
            terms: self
                .terms
                .iter()
                .map(|(n, eta)| TermDoc { n: *n, coeffs: eta.coeffs.iter().flat_map(|(k, c)| c.to_docs(*k)).collect() })
                .collect(),
        }
    }

    pub fn from_doc(doc: &ElementDoc, angle: Arc<Angle>) -> Result<Self, SandboxError> {
        if doc.mode != C::MODE {
            return Err(SandboxError::WrongMode { expected: mode_name(C::MODE) });
        }
        let mut a = Self::zero(angle.clone());
        for term in &doc.terms {
            for c in &term.coeffs {
                let value = C::from_doc(c)?.times(&C::phase(&angle, c.phase));
                a.add_term(term.n, TrigPoly::monomial(c.k, value));
            }
        }
        Ok(a)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("element documents serialize")
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Exact => "exact",
        Mode::Float => "float",
    }
}

/// An element read from JSON in either mode.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyElement {
    Exact(ExactElement),
    Float(FloatElement),
}

impl AnyElement {
    pub fn parse(text: &str, angle: Arc<Angle>) -> Result<Self, SandboxError> {
        let doc: ElementDoc = serde_json::from_str(text)?;
        match doc.mode {
            Mode::Exact => Ok(AnyElement::Exact(ExactElement::from_doc(&doc, angle)?)),
            Mode::Float => Ok(AnyElement::Float(FloatElement::from_doc(&doc, angle)?)),
        }
    }

    pub fn to_float(&self) -> FloatElement {
        match self {
            AnyElement::Exact(a) => a.to_float(),
            AnyElement::Float(a) => a.clone(),
        }
    }
}

/// Compression of `a` to `span{e_j : |j| <= radius}` in the representation on
/// `L²` of the circle, where `e^{inx}` shifts `e_j ↦ e_{j+n}` and `λ_k` acts
/// diagonally by `ζ^{jk}`.
pub fn truncated_matrix<C: Coefficient>(a: &CrossedElement<C>, radius: i64) -> DMatrix<Complex64> {
    let size = (2 * radius + 1) as usize;
    let mut m = DMatrix::from_element(size, size, Complex64::new(0.0, 0.0));
    for (n, eta) in &a.terms {
        for (k, c) in &eta.coeffs {
            let c = c.to_complex(&a.angle);
            let theta = TAU * a.angle.frac_multiple(*k);
            for j in -radius..=radius {
                let row = j + n;
                if row.abs() <= radius {
                    m[((row + radius) as usize, (j + radius) as usize)] += c * Complex64::from_polar(1.0, j as f64 * theta);
                }
            }
        }
    }
    m
}

/// Lower estimate of the C*-norm, nondecreasing in `radius`.
pub fn truncated_norm<C: Coefficient>(a: &CrossedElement<C>, radius: i64) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    truncated_matrix(a, radius).singular_values().max()
}

pub fn norm<C: Coefficient>(a: &CrossedElement<C>) -> f64 {
    truncated_norm(a, DEFAULT_RADIUS)
}

mod ratio_text {
    use num_rational::Rational64;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

/// `β λ_k · λ_k*` with `β = modulus · e^{2πi·turn}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AveragingTerm {
    #[serde(with = "ratio_text")]
    pub modulus: Rational64,
    #[serde(with = "ratio_text")]
    pub turn: Rational64,
    pub k: i64,
}

impl AveragingTerm {
    pub fn weight(&self) -> Complex64 {
        let m = *self.modulus.numer() as f64 / *self.modulus.denom() as f64;
        let t = *self.turn.numer() as f64 / *self.turn.denom() as f64;
        Complex64::from_polar(m, TAU * t)
    }
}

/// `L(a) = Σ β_j λ_{k_j} a λ_{k_j}*`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AveragingOperator {
    pub terms: Vec<AveragingTerm>,
}

fn reduce_turn(t: Rational64) -> Rational64 {
    t - Rational64::from_integer(t.floor().to_integer())
}

impl AveragingOperator {
    pub fn identity() -> Self {
        AveragingOperator { terms: vec![AveragingTerm { modulus: Rational64::one(), turn: Rational64::zero(), k: 0 }] }
    }

    /// `Σ|β_j|`, exact.
    pub fn total_weight(&self) -> Rational64 {
        self.terms.iter().map(|t| t.modulus).sum()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AveragingOperator) -> AveragingOperator {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(AveragingTerm { modulus: a.modulus * b.modulus, turn: reduce_turn(a.turn + b.turn), k: a.k + b.k });
            }
        }
        AveragingOperator { terms }
    }

    /// The scalar by which `L` multiplies x-frequency `m`.
    pub fn multiplier(&self, angle: &Angle, m: i64) -> Complex64 {
        self.terms.iter().map(|t| t.weight() * zeta(angle, m * t.k)).sum()
    }

    pub fn apply(&self, a: &FloatElement) -> FloatElement {
        a.map_terms(|m, eta| eta.scale(&self.multiplier(&a.angle, m)))
    }
}

/// Composition over `rs` of stages that keep x-frequency `q` and kill `r`.
///
/// Stage `r` averages over all `r`-th roots `u` with weight `ū^q / r`, using
/// `λ_k` with `ζ^k ≈ u`.
pub fn build_averaging(q: i64, rs: &[i64], eps: f64, angle: &Angle, bound: u64) -> Result<AveragingOperator, SandboxError> {
    let mut op = AveragingOperator::identity();
    if rs.is_empty() {
        return Ok(op);
    }
    let stage_tol = eps / rs.len() as f64;
    for &r in rs {
        if r <= q {
            return Err(SandboxError::BadStage { q, r });
        }
        let match_tol = stage_tol / (TAU * r.max(q) as f64);
        let mut terms = Vec::new();
        for j in 0..r {
            let k = if j == 0 {
                0
            } else {
                let target = j as f64 / r as f64;
                angle.match_phase(target, match_tol, bound).ok_or(SandboxError::PhaseSearchFailed { target, bound })?.k
            };
            terms.push(AveragingTerm { modulus: Rational64::new(1, r), turn: reduce_turn(Rational64::new(-q * j, r)), k });
        }
        op = AveragingOperator { terms }.compose(&op);
    }
    Ok(op)
}

#[derive(Debug, Clone)]
pub struct DerivativeStep {
    pub n: i64,
    pub signed_frac: f64,
    /// Estimate of `e^{iqx}⟨a⟩(q)`.
    pub plus: FloatElement,
    /// Estimate of `e^{-iqx}⟨a⟩(-q)`.
    pub minus: FloatElement,
    /// Truncated-norm distance of the two estimates to the true components.
    pub residual: f64,
    /// Truncated-norm change from the previous step.
    pub change: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct DerivativeReport {
    pub q: i64,
    pub steps: Vec<DerivativeStep>,
}

/// Split `a = e^{iqx}η + e^{-iqx}η'` using only conjugations by `λ_n`.
///
/// `D_u = (λ_n a λ_n* − λ_n* a λ_n)/(2iu)` with `u = 2π·signed_frac(nρ)`
/// scales frequency `±q` by `sin(±qu)/u`; `(4D_u − D_{2u})/3` equals the
/// derivative `-i a'` up to `O(u⁴)`, and `a/2 ± D/(2q)` gives the parts.
pub fn derivative_extract(a: &FloatElement, j_count: usize) -> Result<DerivativeReport, SandboxError> {
    let support = a.x_support();
    let q = support.iter().map(|m| m.abs()).max().unwrap_or(0);
    if q == 0 || support.iter().any(|m| m.abs() != q) {
        return Err(SandboxError::NotTwoFrequency { support });
    }
    let angle = a.angle.clone();
    let true_plus = CrossedElement::term(angle.clone(), q, a.coefficient(q));
    let true_minus = CrossedElement::term(angle.clone(), -q, a.coefficient(-q));
    let one_sided = support.len() == 1;

    let mut dens: Vec<i64> = angle.best_denominators(j_count).iter().filter_map(|d| d.to_i64()).collect();
    dens.dedup();
    let mut steps: Vec<DerivativeStep> = Vec::new();
    for n in dens {
        let frac = angle.signed_frac_multiple(n);
        if frac.abs() <= 1e-15 {
            continue;
        }
        let (plus, minus) = if one_sided {
            (true_plus.clone(), true_minus.clone())
        } else {
            let u = TAU * frac;
            let diff = |n: i64, u: f64| -> FloatElement {
                let d = a.conjugate_by(n).minus(&a.conjugate_by(-n)).expect("same angle");
                d.scale(&Complex64::new(0.0, -1.0 / (2.0 * u)))
            };
            let d =
                diff(n, u).scale(&Complex64::new(4.0 / 3.0, 0.0)).minus(&diff(2 * n, 2.0 * u).scale(&Complex64::new(1.0 / 3.0, 0.0)))?;
            let d = d.scale(&Complex64::new(0.5 / q as f64, 0.0));
            let half = a.scale(&Complex64::new(0.5, 0.0));
            (half.plus(&d)?, half.minus(&d)?)
        };
        let residual = norm(&plus.minus(&true_plus)?) + norm(&minus.minus(&true_minus)?);
        let change = match steps.last() {
            Some(prev) => Some(norm(&plus.minus(&prev.plus)?) + norm(&minus.minus(&prev.minus)?)),
            None => None,
        };
        steps.push(DerivativeStep { n, signed_frac: frac, plus, minus, residual, change });
    }
    Ok(DerivativeReport { q, steps })
}

fn circle_set_distance(set: &CircleSet, angle: &Angle, t: f64) -> f64 {
    match set {
        CircleSet::Full => 0.0,
        CircleSet::Components(cs) => cs
            .iter()
            .map(|c| match c {
                Component::Point(p) => circle_distance(t, p.position(angle)),
                Component::Arc { start, end } => {
                    let s = start.position(angle);
                    if (t - s).rem_euclid(1.0) <= c.length(angle) {
                        0.0
                    } else {
                        circle_distance(t, s).min(circle_distance(t, end.position(angle)))
                    }
                }
            })
            .fold(f64::INFINITY, f64::min),
    }
}

fn sample_points(set: &CircleSet, angle: &Angle, density: usize) -> Vec<f64> {
    match set {
        CircleSet::Full => (0..density).map(|i| i as f64 / density as f64).collect(),
        CircleSet::Components(cs) => {
            let mut out = Vec::new();
            for c in cs {
                match c {
                    Component::Point(p) => out.push(p.position(angle)),
                    Component::Arc { start, .. } => {
                        let s = start.position(angle);
                        let len = c.length(angle);
                        let steps = ((len * density as f64).ceil() as usize).max(1);
                        out.extend((0..=steps).map(|i| s + len * i as f64 / steps as f64));
                    }
                }
            }
            out
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyCheck {
    pub n: i64,
    pub samples: usize,
    pub max_abs: f64,
    pub exact_value: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub tolerance: f64,
    pub density: usize,
    pub checks: Vec<FrequencyCheck>,
    pub pass: bool,
}

/// Checks that each `⟨a⟩(n)` vanishes on the zero set `c(n)`.
pub fn membership_test<C: Coefficient>(c: &IdealFunction, a: &CrossedElement<C>, tolerance: f64) -> Result<MembershipReport, SandboxError> {
    membership_test_with_density(c, a, tolerance, DEFAULT_DENSITY)
}

pub fn membership_test_with_density<C: Coefficient>(
    c: &IdealFunction,
    a: &CrossedElement<C>,
    tolerance: f64,
    density: usize,
) -> Result<MembershipReport, SandboxError> {
    if c.angle().descriptor() != a.angle.descriptor() {
        return Err(SandboxError::AngleMismatch);
    }
    let angle = &*a.angle;
    let mut checks = Vec::new();
    for (n, eta) in &a.terms {
        let value = c.value(*n)?;
        let pts = sample_points(&value.set, angle, density);
        let max_abs = pts.iter().map(|t| eta.eval(angle, *t).norm()).fold(0.0, f64::max);
        checks.push(FrequencyCheck {
            n: *n,
            samples: pts.len(),
            max_abs,
            exact_value: value.certificate.is_exact(),
            pass: max_abs <= tolerance,
        });
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(MembershipReport { tolerance, density, checks, pass })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorCheck {
    pub n: i64,
    /// `sup_t |h_n(t)(φ(t + nρ) − φ(t))|` with `h_n` the distance to `c(n)`.
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenterReport {
    /// Whether `J, τ⁻¹J, τJ, τ²J` are pairwise disjoint for `J` the complement of `P`.
    pub translates_disjoint: bool,
    /// `sup |φ(t+ρ) − φ(t)|` over grid points of `J`.
    pub forward_equation: f64,
    /// `sup |φ(t−ρ) − φ(t)|` over grid points of `τJ`.
    pub backward_equation: f64,
    pub commutators: Vec<CommutatorCheck>,
    pub max_commutator: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Tests whether `φ` commutes with every `e^{inx}h` with `h` vanishing on
/// `c(n)`, for `c` a step-one basic function with an arc.
///
/// `[φ, e^{inx}h] = e^{inx} h (φ∘τ^n − φ)`, whose norm is a supremum, so
/// the check samples it on a grid for each supported `n`.
pub fn center_check(c: &IdealFunction, phi: &dyn CircleFunction, grid: usize, tolerance: f64) -> Result<CenterReport, SandboxError> {
    let angle = &**c.angle();
    let p = match c.view() {
        ReprView::Basic { q: 1, p } if p.components().iter().any(|c| matches!(c, Component::Arc { .. })) => p.clone(),
        _ => return Err(SandboxError::NotBasicArc),
    };
    let shifts = [-1i64, 0, 1, 2];
    let mut translates_disjoint = true;
    for (i, a) in shifts.iter().enumerate() {
        for b in &shifts[i + 1..] {
            if !p.rotate(*a, angle).union(&p.rotate(*b, angle), angle).is_full() {
                translates_disjoint = false;
            }
        }
    }
    let members = match support(c, 0).support {
        SupportKind::Finite { members } => members,
        _ => return Err(SandboxError::NotBasicArc),
    };
    let rho = angle.approx();
    let grid_points: Vec<f64> = (0..grid).map(|i| (i as f64 + 0.5) / grid as f64).collect();
    let tau_p = p.rotate(1, angle);
    let sup = |set: &CircleSet, step: f64| {
        grid_points
            .iter()
            .filter(|t| circle_set_distance(set, angle, **t) > 0.0)
            .map(|t| (phi.eval(t + step) - phi.eval(*t)).norm())
            .fold(0.0, f64::max)
    };
    let forward_equation = sup(&p, rho);
    let backward_equation = sup(&tau_p, -rho);
    let mut commutators = Vec::new();
    for n in members.into_iter().filter(|n| *n != 0) {
        let zeros = c.value(n)?.set;
        let step = angle.frac_multiple(n);
        let norm = grid_points
            .iter()
            .map(|t| circle_set_distance(&zeros, angle, *t) * (phi.eval(t + step) - phi.eval(*t)).norm())
            .fold(0.0, f64::max);
        commutators.push(CommutatorCheck { n, norm });
    }
    let max_commutator = commutators.iter().map(|c| c.norm).fold(0.0, f64::max);
    Ok(CenterReport {
        translates_disjoint,
        forward_equation,
        backward_equation,
        commutators,
        max_commutator,
        tolerance,
        pass: max_commutator < tolerance,
    })
}

/// Random exact element with x-frequencies in `xs`, t-degree at most
/// `degree`, small Gaussian rational coefficients and phases `ζ^{-2..2}`.
pub fn random_exact(rng: &mut impl rand::Rng, angle: Arc<Angle>, xs: &[i64], degree: i64, density: f64) -> ExactElement {
    let mut a = ExactElement::zero(angle);
    for &n in xs {
        for k in -degree..=degree {
            if rng.gen::<f64>() >= density {
                continue;
            }
            let terms: Vec<(i64, Gauss)> = (0..rng.gen_range(1..=2))
                .map(|_| {
                    let re = BigRational::new(rng.gen_range(-4i64..=4).into(), rng.gen_range(1i64..=3).into());
                    let im = BigRational::new(rng.gen_range(-4i64..=4).into(), rng.gen_range(1i64..=3).into());
                    (rng.gen_range(-2i64..=2), Complex::new(re, im))
                })
                .collect();
            a.add_term(n, TrigPoly::monomial(k, PhasePoly::from_terms(terms)));
        }
    }
    a
}

/// Random float element with x-frequencies in `xs`, t-degree at most `degree`
/// and every `η_n` of sup norm at most one.
pub fn random_float(rng: &mut impl rand::Rng, angle: Arc<Angle>, xs: &[i64], degree: i64) -> FloatElement {
    let count = (2 * degree + 1) as f64;
    let mut a = FloatElement::zero(angle);
    for &n in xs {
        let eta = TrigPoly::from_coeffs(
            (-degree..=degree).map(|k| (k, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) / (count * 2f64.sqrt()))),
        );
        a.add_term(n, eta);
    }
    a
}
