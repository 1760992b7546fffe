//! Irrational rotation numbers given as quadratic surds or continued-fraction
//! streams, with exact sign tests for `q + n·ρ` and a shared convergent cache.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AngleError {
    #[error("radicand {0} is a perfect square or not greater than 1")]
    RationalSurd(i64),
    #[error("surd has zero irrational coefficient or zero denominator")]
    DegenerateSurd,
    #[error("angle value must lie strictly between 0 and 1")]
    OutOfRange,
    #[error("continued fraction stream is malformed: {0}")]
    BadStream(String),
    #[error("precision must be positive")]
    BadPrecision,
    #[error("unknown angle shorthand `{0}`")]
    UnknownName(String),
    #[error("angle descriptor is not valid JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StreamRule {
    #[serde(rename = "repeat-last")]
    RepeatLast,
}

/// Serialized form of an angle: `(a + b√c)/den` or `[0; a1, a2, ...]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum AngleDescriptor {
    #[serde(rename = "surd")]
    Surd { a: i64, b: i64, c: i64, den: i64 },
    #[serde(rename = "cf")]
    ContinuedFraction { prefix: Vec<u64>, rule: StreamRule },
}

impl AngleDescriptor {
    pub fn golden() -> Self {
        AngleDescriptor::Surd { a: -1, b: 1, c: 5, den: 2 }
    }

    pub fn sqrt2_minus_one() -> Self {
        AngleDescriptor::Surd { a: -1, b: 1, c: 2, den: 1 }
    }

    /// Accepts a JSON descriptor or one of the shorthands `golden`, `sqrt2`.
    pub fn parse(text: &str) -> Result<Self, AngleError> {
        match text.trim() {
            "golden" => Ok(Self::golden()),
            "sqrt2" | "sqrt2-1" => Ok(Self::sqrt2_minus_one()),
            t if t.starts_with('{') => serde_json::from_str(t).map_err(|e| AngleError::Json(e.to_string())),
            other => Err(AngleError::UnknownName(other.to_string())),
        }
    }
}

/// `(a + b√c)/den` with `den > 0`.
#[derive(Debug, Clone, Copy)]
struct Surd {
    a: i64,
    b: i64,
    c: i64,
    den: i64,
}

/// Sign of `x + y·√d` for integers, `d` a positive non-square.
fn sign_surd_i128(x: i128, y: i128, d: i128) -> Option<Ordering> {
    match (x.cmp(&0), y.cmp(&0)) {
        (Ordering::Equal, s) => Some(s),
        (s, Ordering::Equal) => Some(s),
        (Ordering::Greater, Ordering::Greater) => Some(Ordering::Greater),
        (Ordering::Less, Ordering::Less) => Some(Ordering::Less),
        (sx, _) => {
            let xx = x.checked_mul(x)?;
            let yy = y.checked_mul(y)?.checked_mul(d)?;
            // irrationality of √d rules out equality
            Some(if xx > yy { sx } else { sx.reverse() })
        }
    }
}

fn sign_surd_big(x: &BigInt, y: &BigInt, d: &BigInt) -> Ordering {
    let zero = BigInt::zero();
    match (x.cmp(&zero), y.cmp(&zero)) {
        (Ordering::Equal, s) => s,
        (s, Ordering::Equal) => s,
        (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
        (Ordering::Less, Ordering::Less) => Ordering::Less,
        (sx, _) => {
            if x * x > y * y * d {
                sx
            } else {
                sx.reverse()
            }
        }
    }
}

fn sign_surd(x: i128, y: i128, d: i128) -> Ordering {
    sign_surd_i128(x, y, d).unwrap_or_else(|| sign_surd_big(&BigInt::from(x), &BigInt::from(y), &BigInt::from(d)))
}

fn is_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as f64).sqrt() as i64;
    (r.saturating_sub(2)..=r + 2).any(|s| s >= 0 && s.checked_mul(s) == Some(n))
}

#[derive(Debug)]
enum CoefficientSource {
    /// Complete quotient `(p + √d)/q`, with `q | d - p²`.
    Surd {
        p: i128,
        q: i128,
        d: i128,
    },
    Stream {
        prefix: Vec<u64>,
        rule: StreamRule,
    },
}

impl CoefficientSource {
    fn next(&mut self, index: usize) -> u64 {
        match self {
            CoefficientSource::Surd { p, q, d } => {
                let (pv, qv, d) = (*p, *q, *d);
                let estimate = ((pv as f64 + (d as f64).sqrt()) / qv as f64).floor() as i128;
                let mut k = estimate;
                // (p + √d)/q - k has the sign of (p - kq + √d)·sign(q)
                let above = |k: i128| sign_surd(pv - k * qv, 1, d) == qv.cmp(&0);
                while !above(k) {
                    k -= 1;
                }
                while above(k + 1) {
                    k += 1;
                }
                let new_p = k * qv - pv;
                let new_q = (d - new_p * new_p) / qv;
                *p = new_p;
                *q = new_q;
                k as u64
            }
            CoefficientSource::Stream { prefix, rule } => match rule {
                StreamRule::RepeatLast => *prefix.get(index).unwrap_or(prefix.last().expect("prefix")),
            },
        }
    }
}

#[derive(Debug)]
struct ConvergentCache {
    source: CoefficientSource,
    coeffs: Vec<u64>,
    p: Vec<BigInt>,
    q: Vec<BigInt>,
}

impl ConvergentCache {
    fn extend_to(&mut self, k: usize) {
        while self.coeffs.len() <= k {
            let i = self.coeffs.len();
            let a = self.source.next(i);
            self.coeffs.push(a);
            let a = BigInt::from(a);
            let (p, q) = match i {
                0 => (a.clone(), BigInt::one()),
                1 => (&a * &self.p[0] + BigInt::one(), a.clone()),
                _ => (&a * &self.p[i - 1] + &self.p[i - 2], &a * &self.q[i - 1] + &self.q[i - 2]),
            };
            self.p.push(p);
            self.q.push(q);
        }
    }
}

/// An irrational rotation number `ρ ∈ (0,1)`.
pub struct Angle {
    descriptor: AngleDescriptor,
    surd: Option<Surd>,
    approx: f64,
    cache: RwLock<ConvergentCache>,
    phases: Mutex<HashMap<i64, f64>>,
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Angle").field("descriptor", &self.descriptor).field("approx", &self.approx).finish()
    }
}

impl PartialEq for Angle {
    fn eq(&self, other: &Self) -> bool {
        self.descriptor == other.descriptor
    }
}

/// Rational enclosure `lo < ρ < hi` from consecutive convergents.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    pub index: usize,
}

impl RationalInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMatch {
    pub k: i64,
    pub frac: f64,
    pub distance: f64,
}

pub fn circle_distance(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(1.0);
    d.min(1.0 - d)
}

impl Angle {
    pub fn new(descriptor: AngleDescriptor) -> Result<Self, AngleError> {
        let (surd, source) = match &descriptor {
            AngleDescriptor::Surd { a, b, c, den } => {
                if *c <= 1 || is_square(*c) {
                    return Err(AngleError::RationalSurd(*c));
                }
                if *b == 0 || *den == 0 {
                    return Err(AngleError::DegenerateSurd);
                }
                let s = if *den < 0 { Surd { a: -a, b: -b, c: *c, den: -den } } else { Surd { a: *a, b: *b, c: *c, den: *den } };
                let (a, b, c, den) = (s.a as i128, s.b as i128, s.c as i128, s.den as i128);
                if sign_surd(a, b, c) != Ordering::Greater || sign_surd(a - den, b, c) != Ordering::Less {
                    return Err(AngleError::OutOfRange);
                }
                let (mut p, mut q) = if b > 0 { (a, den) } else { (-a, -den) };
                let mut d = b * b * c;
                if (d - p * p) % q != 0 {
                    let aq = q.abs();
                    p *= aq;
                    d *= q * q;
                    q *= aq;
                }
                (Some(s), CoefficientSource::Surd { p, q, d })
            }
            AngleDescriptor::ContinuedFraction { prefix, rule } => {
                if prefix.len() < 2 {
                    return Err(AngleError::BadStream("prefix needs at least two terms".into()));
                }
                if prefix[0] != 0 {
                    return Err(AngleError::BadStream("leading term must be 0".into()));
                }
                if prefix[1..].contains(&0) {
                    return Err(AngleError::BadStream("partial quotients must be positive".into()));
                }
                (None, CoefficientSource::Stream { prefix: prefix.clone(), rule: *rule })
            }
        };
        let mut angle = Angle {
            descriptor,
            surd,
            approx: 0.0,
            cache: RwLock::new(ConvergentCache { source, coeffs: Vec::new(), p: Vec::new(), q: Vec::new() }),
            phases: Mutex::new(HashMap::new()),
        };
        let (p, q) = angle.convergent(48);
        angle.approx = BigRational::new(p, q).to_f64().unwrap_or(f64::NAN);
        Ok(angle)
    }

    pub fn golden() -> Self {
        Self::new(AngleDescriptor::golden()).expect("golden conjugate is a valid angle")
    }

    pub fn sqrt2_minus_one() -> Self {
        Self::new(AngleDescriptor::sqrt2_minus_one()).expect("sqrt(2)-1 is a valid angle")
    }

    pub fn descriptor(&self) -> &AngleDescriptor {
        &self.descriptor
    }

    pub fn approx(&self) -> f64 {
        self.approx
    }

    /// Partial quotient `a_k` of `ρ = [0; a_1, a_2, ...]`.
    pub fn coefficient(&self, k: usize) -> u64 {
        self.ensure(k);
        self.cache.read().expect("convergent cache poisoned").coeffs[k]
    }

    /// Convergent `p_k / q_k`.
    pub fn convergent(&self, k: usize) -> (BigInt, BigInt) {
        self.ensure(k);
        let cache = self.cache.read().expect("convergent cache poisoned");
        (cache.p[k].clone(), cache.q[k].clone())
    }

    fn ensure(&self, k: usize) {
        {
            let cache = self.cache.read().expect("convergent cache poisoned");
            if cache.coeffs.len() > k {
                return;
            }
        }
        self.cache.write().expect("convergent cache poisoned").extend_to(k);
    }

    /// Enclosure from the first pair of consecutive convergents (index ≥ 1)
    /// whose gap is at most `precision`.
    pub fn refine(&self, precision: &BigRational) -> Result<RationalInterval, AngleError> {
        if !precision.is_positive() {
            return Err(AngleError::BadPrecision);
        }
        let mut k = 1;
        loop {
            let (p0, q0) = self.convergent(k);
            let (p1, q1) = self.convergent(k + 1);
            let gap = BigRational::new(BigInt::one(), &q0 * &q1);
            if &gap <= precision {
                let a = BigRational::new(p0, q0);
                let b = BigRational::new(p1, q1);
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                return Ok(RationalInterval { lo, hi, index: k });
            }
            k += 1;
        }
    }

    /// Exact sign of `r + n·ρ`.
    pub fn compare_linear(&self, r: &Rational64, n: i64) -> Ordering {
        if n == 0 {
            return r.numer().signum().cmp(&0);
        }
        match self.surd {
            Some(s) => {
                // (r + nρ)·v·den = (u·den + n·a·v) + n·b·v·√c
                let (u, v) = (*r.numer() as i128, *r.denom() as i128);
                let parts = u
                    .checked_mul(s.den as i128)
                    .and_then(|x| (n as i128).checked_mul(s.a as i128)?.checked_mul(v)?.checked_add(x))
                    .and_then(|x| Some((x, (n as i128).checked_mul(s.b as i128)?.checked_mul(v)?)));
                match parts.and_then(|(x, y)| sign_surd_i128(x, y, s.c as i128)) {
                    Some(o) => o,
                    None => {
                        let (u, v) = (BigInt::from(u), BigInt::from(v));
                        let nb = BigInt::from(n);
                        let x = &u * s.den + &nb * s.a * &v;
                        let y = &nb * s.b * &v;
                        sign_surd_big(&x, &y, &BigInt::from(s.c))
                    }
                }
            }
            None => self.compare_linear_by_convergents(r, n),
        }
    }

    fn compare_linear_by_convergents(&self, r: &Rational64, n: i64) -> Ordering {
        // sign(r + nρ) = sign(n)·sign(ρ - t) with t = -r/n
        let t = BigRational::new(BigInt::from(-*r.numer()), BigInt::from(*r.denom()) * n);
        let mut k = 1;
        let side = loop {
            let (p0, q0) = self.convergent(k);
            let (p1, q1) = self.convergent(k + 1);
            let a = BigRational::new(p0, q0);
            let b = BigRational::new(p1, q1);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            if t < lo {
                break Ordering::Greater;
            }
            if t > hi {
                break Ordering::Less;
            }
            k += 1;
        };
        if n > 0 {
            side
        } else {
            side.reverse()
        }
    }

    /// `⌊r + n·ρ⌋`, exactly.
    pub fn floor_linear(&self, r: &Rational64, n: i64) -> i64 {
        let estimate = (*r.numer() as f64 / *r.denom() as f64 + n as f64 * self.approx).floor() as i64;
        let mut k = estimate;
        let shifted = |k: i64| r - Rational64::from_integer(k);
        while self.compare_linear(&shifted(k), n) == Ordering::Less {
            k -= 1;
        }
        while self.compare_linear(&shifted(k + 1), n) != Ordering::Less {
            k += 1;
        }
        k
    }

    /// First `count` convergent denominators starting at `q_1`; the
    /// distances `‖q_k·ρ‖` strictly decrease along the list.
    pub fn best_denominators(&self, count: usize) -> Vec<BigInt> {
        (1..=count).map(|k| self.convergent(k).1).collect()
    }

    /// `frac(k·ρ)` as a float, accurate to about one ulp; cached per `k`.
    pub fn frac_multiple(&self, k: i64) -> f64 {
        if k == 0 {
            return 0.0;
        }
        if let Some(v) = self.phases.lock().expect("phase cache poisoned").get(&k) {
            return *v;
        }
        let target = BigInt::from(k.unsigned_abs()) << 64u32;
        let mut j = 1;
        loop {
            let q0 = self.convergent(j).1;
            let q1 = self.convergent(j + 1).1;
            if &q0 * &q1 > target {
                break;
            }
            j += 1;
        }
        let (p, q) = self.convergent(j + 1);
        let num = (BigInt::from(k) * &p).mod_floor(&q);
        let value = BigRational::new(num, q).to_f64().unwrap_or(0.0);
        let value = if value >= 1.0 { 0.0 } else { value };
        self.phases.lock().expect("phase cache poisoned").insert(k, value);
        value
    }

    /// `k·ρ` reduced into `(-1/2, 1/2]`.
    pub fn signed_frac_multiple(&self, k: i64) -> f64 {
        let f = self.frac_multiple(k);
        if f > 0.5 {
            f - 1.0
        } else {
            f
        }
    }

    /// Smallest `|k|` in `1..=bound` (positive `k` first) with
    /// `frac(k·ρ)` within `tolerance` of `target` on the circle.
    pub fn match_phase(&self, target: f64, tolerance: f64, bound: u64) -> Option<PhaseMatch> {
        for m in 1..=bound as i64 {
            for k in [m, -m] {
                let frac = self.frac_multiple(k);
                let distance = circle_distance(frac, target);
                if distance < tolerance {
                    return Some(PhaseMatch { k, frac, distance });
                }
            }
        }
        None
    }
}
