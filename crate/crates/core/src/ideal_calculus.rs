//! Ideal functions `ℤ → closed subsets of S¹`: representations, the closure
//! operator, canonical decomposition and the structural classifications.
//!
//! Sets are ordered by inclusion; an ideal function with smaller values
//! describes a larger algebra. `meet` is the pointwise union, `naive_join`
//! the pointwise intersection, and `closed_join` the largest closed function
//! below the naive join.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circle_sets::{CirclePoint, CircleSet, Component};
use crate::diophantine::Angle;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IdealError {
    #[error("value at {0} lies outside a window whose default is unknown")]
    OutsideWindow(i64),
    #[error("basic function needs a nonnegative step, got {0}")]
    NegativeStep(i64),
    #[error("ideal functions are defined over different angles")]
    AngleMismatch,
    #[error("value at 0 must be empty")]
    NonEmptyAtZero,
    #[error("value at {0} does not contain the parent value")]
    NotDominating(i64),
    #[error("the requested zero value is not inside the intersection set")]
    NotInIntersection,
    #[error("positive-side data violates {law} at ({m}, {n})")]
    PositiveSide { law: &'static str, m: i64, n: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertStatus {
    Exact,
    UpperBound,
}

/// How a value was obtained. `UpperBound` sets contain the true value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub status: CertStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth_used: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<i64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn exact() -> Self {
        Certificate { status: CertStatus::Exact, depth_used: None, window: None, notes: Vec::new() }
    }

    pub fn upper_bound(note: impl Into<String>) -> Self {
        Certificate { status: CertStatus::UpperBound, depth_used: None, window: None, notes: vec![note.into()] }
    }

    pub fn is_exact(&self) -> bool {
        self.status == CertStatus::Exact
    }

    pub fn combine(&self, other: &Certificate) -> Certificate {
        let status = if self.is_exact() && other.is_exact() { CertStatus::Exact } else { CertStatus::UpperBound };
        let mut notes = self.notes.clone();
        for n in &other.notes {
            if !notes.contains(n) {
                notes.push(n.clone());
            }
        }
        Certificate {
            status,
            depth_used: match (self.depth_used, other.depth_used) {
                (Some(a), Some(b)) => Some(a.max(b)),
                (a, b) => a.or(b),
            },
            window: self.window.or(other.window),
            notes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Valued {
    pub set: CircleSet,
    pub certificate: Certificate,
}

impl Valued {
    fn exact(set: CircleSet) -> Self {
        Valued { set, certificate: Certificate::exact() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowDefault {
    Full,
    Unknown,
}

/// Enumeration budget for the closure operator: `depth` bounds the number of
/// refinement levels, `window` the index range reported as certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinPolicy {
    pub depth: usize,
    pub window: i64,
}

impl Default for JoinPolicy {
    fn default() -> Self {
        JoinPolicy { depth: 6, window: 12 }
    }
}

/// Values of a closure on `[-window, window]`.
#[derive(Debug)]
struct ClosureTable {
    window: i64,
    values: Vec<CircleSet>,
    certificate: Certificate,
}

enum Repr {
    Basic {
        q: i64,
        p: CircleSet,
        memo: Mutex<BTreeMap<i64, CircleSet>>,
    },
    Window {
        values: BTreeMap<i64, CircleSet>,
        default: WindowDefault,
    },
    Meet(IdealFunction, IdealFunction),
    NaiveJoin(IdealFunction, IdealFunction),
    Closure {
        source: IdealFunction,
        policy: JoinPolicy,
        generators: Option<Vec<(i64, CircleSet)>>,
        memo: Mutex<BTreeMap<i64, Arc<ClosureTable>>>,
    },
}

/// A function `ℤ → closed subsets of S¹` together with its angle.
#[derive(Clone)]
pub struct IdealFunction {
    angle: Arc<Angle>,
    repr: Arc<Repr>,
}

impl fmt::Debug for IdealFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.repr {
            Repr::Basic { q, p, .. } => write!(f, "basic(q={q}, P={p:?})"),
            Repr::Window { values, default } => write!(f, "window({} values, default {default:?})", values.len()),
            Repr::Meet(a, b) => write!(f, "meet({a:?}, {b:?})"),
            Repr::NaiveJoin(a, b) => write!(f, "naive_join({a:?}, {b:?})"),
            Repr::Closure { source, policy, .. } => write!(f, "closure({source:?}, {policy:?})"),
        }
    }
}

/// Structural description used by the serializers.
#[derive(Debug, Clone)]
pub enum ReprView<'a> {
    Basic { q: i64, p: &'a CircleSet },
    Window { values: &'a BTreeMap<i64, CircleSet>, default: WindowDefault },
    Meet(&'a IdealFunction, &'a IdealFunction),
    NaiveJoin(&'a IdealFunction, &'a IdealFunction),
    Join { generators: &'a [(i64, CircleSet)], policy: JoinPolicy },
    Closure { source: &'a IdealFunction, policy: JoinPolicy },
}

impl IdealFunction {
    fn from_repr(angle: Arc<Angle>, repr: Repr) -> Self {
        IdealFunction { angle, repr: Arc::new(repr) }
    }

    /// `𝔟_{q,P}`: the ideal function generated by one frequency `q`.
    pub fn basic(angle: Arc<Angle>, q: i64, p: CircleSet) -> Result<Self, IdealError> {
        if q < 0 {
            return Err(IdealError::NegativeStep(q));
        }
        Ok(Self::from_repr(angle, Repr::Basic { q, p, memo: Mutex::new(BTreeMap::new()) }))
    }

    /// The function that is empty everywhere (the whole crossed product).
    pub fn all_empty(angle: Arc<Angle>) -> Self {
        Self::basic(angle, 1, CircleSet::empty()).expect("step 1")
    }

    /// Empty at 0 and full elsewhere (the rotation subalgebra alone).
    pub fn trivial(angle: Arc<Angle>) -> Self {
        Self::basic(angle, 0, CircleSet::empty()).expect("step 0")
    }

    pub fn window(angle: Arc<Angle>, values: BTreeMap<i64, CircleSet>, default: WindowDefault) -> Result<Self, IdealError> {
        if let Some(v) = values.get(&0) {
            if !v.is_empty() {
                return Err(IdealError::NonEmptyAtZero);
            }
        }
        Ok(Self::from_repr(angle, Repr::Window { values, default }))
    }

    pub fn meet(a: &IdealFunction, b: &IdealFunction) -> Result<Self, IdealError> {
        a.same_angle(b)?;
        Ok(Self::from_repr(a.angle.clone(), Repr::Meet(a.clone(), b.clone())))
    }

    pub fn naive_join(a: &IdealFunction, b: &IdealFunction) -> Result<Self, IdealError> {
        a.same_angle(b)?;
        Ok(Self::from_repr(a.angle.clone(), Repr::NaiveJoin(a.clone(), b.clone())))
    }

    /// The closure of `c`: the largest closed function below it.
    pub fn close(c: &IdealFunction, policy: JoinPolicy) -> Self {
        Self::from_repr(c.angle.clone(), Repr::Closure { source: c.clone(), policy, generators: None, memo: Mutex::new(BTreeMap::new()) })
    }

    pub fn closed_join(a: &IdealFunction, b: &IdealFunction, policy: JoinPolicy) -> Result<Self, IdealError> {
        Ok(Self::close(&Self::naive_join(a, b)?, policy))
    }

    /// Closed join of basic functions `𝔟_{q_i, P_i}`; no generators gives the
    /// trivial function.
    pub fn join_of_basics(angle: Arc<Angle>, generators: Vec<(i64, CircleSet)>, policy: JoinPolicy) -> Result<Self, IdealError> {
        let mut source = Self::trivial(angle.clone());
        for (q, p) in &generators {
            let b = Self::basic(angle.clone(), *q, p.clone())?;
            source = Self::naive_join(&source, &b)?;
        }
        Ok(Self::from_repr(angle, Repr::Closure { source, policy, generators: Some(generators), memo: Mutex::new(BTreeMap::new()) }))
    }

    pub fn angle(&self) -> &Arc<Angle> {
        &self.angle
    }

    pub fn view(&self) -> ReprView<'_> {
        match &*self.repr {
            Repr::Basic { q, p, .. } => ReprView::Basic { q: *q, p },
            Repr::Window { values, default } => ReprView::Window { values, default: *default },
            Repr::Meet(a, b) => ReprView::Meet(a, b),
            Repr::NaiveJoin(a, b) => ReprView::NaiveJoin(a, b),
            Repr::Closure { source, policy, generators, .. } => match generators {
                Some(g) => ReprView::Join { generators: g, policy: *policy },
                None => ReprView::Closure { source, policy: *policy },
            },
        }
    }

    fn same_angle(&self, other: &IdealFunction) -> Result<(), IdealError> {
        if Arc::ptr_eq(&self.angle, &other.angle) || *self.angle == *other.angle {
            Ok(())
        } else {
            Err(IdealError::AngleMismatch)
        }
    }

    /// Whether every value is computed exactly (no closure involved).
    pub fn is_explicit(&self) -> bool {
        match &*self.repr {
            Repr::Basic { .. } | Repr::Window { .. } => true,
            Repr::Meet(a, b) | Repr::NaiveJoin(a, b) => a.is_explicit() && b.is_explicit(),
            Repr::Closure { .. } => false,
        }
    }

    pub fn value(&self, n: i64) -> Result<Valued, IdealError> {
        let angle = &*self.angle;
        match &*self.repr {
            Repr::Basic { q, p, memo } => Ok(Valued::exact(basic_value(*q, p, memo, n, angle))),
            Repr::Window { values, default } => match values.get(&n) {
                Some(v) => Ok(Valued::exact(v.clone())),
                None if n == 0 => Ok(Valued::exact(CircleSet::empty())),
                None => match default {
                    WindowDefault::Full => Ok(Valued::exact(CircleSet::Full)),
                    WindowDefault::Unknown => Err(IdealError::OutsideWindow(n)),
                },
            },
            Repr::Meet(a, b) => {
                let (x, y) = (a.value(n)?, b.value(n)?);
                Ok(Valued { set: x.set.union(&y.set, angle), certificate: x.certificate.combine(&y.certificate) })
            }
            Repr::NaiveJoin(a, b) => {
                let (x, y) = (a.value(n)?, b.value(n)?);
                Ok(Valued { set: x.set.intersect(&y.set, angle), certificate: x.certificate.combine(&y.certificate) })
            }
            Repr::Closure { source, policy, memo, .. } => {
                let w =
                    if n.abs() <= policy.window { policy.window } else { (n.abs() + policy.window - 1) / policy.window * policy.window };
                let table = {
                    let cached = memo.lock().expect("closure memo poisoned").get(&w).cloned();
                    match cached {
                        Some(t) => t,
                        None => {
                            let t = Arc::new(closure_table(source, w, policy.depth, angle));
                            memo.lock().expect("closure memo poisoned").insert(w, t.clone());
                            t
                        }
                    }
                };
                Ok(Valued { set: table.values[(n + table.window) as usize].clone(), certificate: table.certificate.clone() })
            }
        }
    }

    /// Value or `None` when it lies outside an unknown window.
    pub fn value_opt(&self, n: i64) -> Option<Valued> {
        self.value(n).ok()
    }

    /// Whether `self` and `other` agree on `[-window, window]`.
    pub fn agrees_with(&self, other: &IdealFunction, window: i64) -> Result<Vec<i64>, IdealError> {
        let mut mismatches = Vec::new();
        for n in -window..=window {
            if self.value(n)?.set != other.value(n)?.set {
                mismatches.push(n);
            }
        }
        Ok(mismatches)
    }
}

fn basic_value(q: i64, p: &CircleSet, memo: &Mutex<BTreeMap<i64, CircleSet>>, n: i64, angle: &Angle) -> CircleSet {
    if n == 0 {
        return CircleSet::empty();
    }
    if q == 0 || n % q != 0 {
        return CircleSet::Full;
    }
    let k = (n / q).abs();
    let positive = {
        let mut memo = memo.lock().expect("basic memo poisoned");
        if let Some(v) = memo.get(&k) {
            v.clone()
        } else {
            let (mut i, mut acc) = memo.range(..k).next_back().map(|(i, v)| (*i, v.clone())).unwrap_or((1, p.clone()));
            while i < k && !acc.is_full() {
                acc = acc.union(&p.rotate(-q * i, angle), angle);
                i += 1;
            }
            memo.insert(k, acc.clone());
            acc
        }
    };
    if n > 0 {
        positive
    } else {
        positive.rotate(k * q, angle)
    }
}

/// Greatest-fixpoint refinement: starting from the source values, impose
/// `U(m+n) ⊆ τ^{-m}U(n) ∪ U(m)` and `U(n) = τ^{-n}U(-n)` until nothing
/// changes. Every step keeps the true closure inside `U`, so a fixpoint that
/// is stable under window enlargement is the closure itself.
fn refine_on_window(source: &IdealFunction, w: i64, depth: usize, angle: &Angle) -> (Vec<CircleSet>, Option<usize>, bool) {
    let idx = |n: i64| (n + w) as usize;
    let mut poisoned = false;
    let mut u: Vec<CircleSet> = (-w..=w)
        .map(|n| match source.value(n) {
            Ok(v) => {
                if !v.certificate.is_exact() {
                    poisoned = true;
                }
                v.set
            }
            Err(_) => {
                poisoned = true;
                CircleSet::Full
            }
        })
        .collect();
    u[idx(0)] = CircleSet::empty();
    if u.iter().all(is_point_set) {
        let (values, stable) = refine_points(u, w, depth, angle);
        return (values, stable, poisoned);
    }
    let order: Vec<i64> = (1..=w).flat_map(|t| [t, -t]).collect();
    let mut level = 1;
    loop {
        let mut changed = false;
        for &t in &order {
            if u[idx(t)].is_empty() {
                continue;
            }
            let mut next = u[idx(t)].intersect(&u[idx(-t)].rotate(-t, angle), angle);
            for m in -w..=w {
                if next.is_empty() {
                    break;
                }
                let n = t - m;
                if m == 0 || n == 0 || n.abs() > w {
                    continue;
                }
                let (um, un) = (&u[idx(m)], &u[idx(n)]);
                if um.is_full() || un.is_full() {
                    continue;
                }
                let bound = un.rotate(-m, angle).union(um, angle);
                if !bound.is_full() {
                    next = next.intersect(&bound, angle);
                }
            }
            if next != u[idx(t)] {
                u[idx(t)] = next;
                changed = true;
            }
        }
        if !changed {
            return (u, Some(level), poisoned);
        }
        level += 1;
        if level > depth {
            return (u, None, poisoned);
        }
    }
}

fn is_point_set(s: &CircleSet) -> bool {
    s.is_full() || s.components().iter().all(|c| matches!(c, Component::Point(_)))
}

type Points = Option<BTreeSet<CirclePoint>>;

fn as_points(s: &CircleSet) -> Points {
    (!s.is_full()).then(|| s.components().iter().map(|c| c.start()).collect())
}

fn holds(s: &Points, x: &CirclePoint) -> bool {
    s.as_ref().is_none_or(|p| p.contains(x))
}

fn from_points(values: Vec<Points>, angle: &Angle) -> Vec<CircleSet> {
    values.into_iter().map(|p| p.map_or(CircleSet::Full, |pts| CircleSet::points(pts, angle))).collect()
}

/// [`refine_on_window`] for finite point sets, by membership: distinct
/// `(q, n)` pairs are distinct points because `ρ` is irrational.
fn refine_points(init: Vec<CircleSet>, w: i64, depth: usize, angle: &Angle) -> (Vec<CircleSet>, Option<usize>) {
    let idx = |n: i64| (n + w) as usize;
    let mut u: Vec<Points> = init.iter().map(as_points).collect();
    let order: Vec<i64> = (1..=w).flat_map(|t| [t, -t]).collect();
    let mut level = 1;
    let stable = loop {
        let mut changed = false;
        for &t in &order {
            let mut next = symmetric(&u[idx(t)], &u[idx(-t)], t);
            for m in -w..=w {
                let n = t - m;
                if m == 0 || n == 0 || n.abs() > w {
                    continue;
                }
                let (Some(um), Some(un)) = (&u[idx(m)], &u[idx(n)]) else { continue };
                let inside = |x: &CirclePoint| un.contains(&x.rotate(m)) || um.contains(x);
                next = Some(match next {
                    Some(cur) => cur.into_iter().filter(|x| inside(x)).collect(),
                    None => un.iter().map(|x| x.rotate(-m)).chain(um.iter().copied()).collect(),
                });
                if next.as_ref().is_some_and(|p| p.is_empty()) {
                    break;
                }
            }
            if next != u[idx(t)] {
                u[idx(t)] = next;
                changed = true;
            }
        }
        if !changed {
            break Some(level);
        }
        level += 1;
        if level > depth {
            break None;
        }
    };
    (from_points(u, angle), stable)
}

/// `U(t) ∩ τ^{-t}U(-t)` on point sets.
fn symmetric(mine: &Points, other: &Points, t: i64) -> Points {
    match (mine, other) {
        (None, None) => None,
        (None, Some(o)) => Some(o.iter().map(|x| x.rotate(-t)).collect()),
        (Some(m), o) => Some(m.iter().copied().filter(|x| holds(o, &x.rotate(t))).collect()),
    }
}

fn closure_table(source: &IdealFunction, window: i64, depth: usize, angle: &Angle) -> ClosureTable {
    let w = window.max(1);
    let inner = 2 * w;
    let (values, stable, poisoned) = refine_on_window(source, inner, depth, angle);
    let mut notes = Vec::new();
    let mut exact = true;
    if poisoned {
        exact = false;
        notes.push("source values outside a known window were treated as full".to_string());
    }
    if stable.is_none() {
        exact = false;
        notes.push(format!("depth-exhausted: no fixpoint within {depth} levels"));
    }
    if exact {
        let (wider, wider_stable, _) = refine_on_window(source, inner + w, depth, angle);
        let off = w as usize;
        let same = (0..values.len()).filter(|i| (*i as i64 - inner).abs() <= w).all(|i| values[i] == wider[i + off]);
        if wider_stable.is_none() || !same {
            exact = false;
            notes.push("values changed when the enumeration window was enlarged".to_string());
        }
    }
    if exact {
        let lookup = |n: i64| values.get((n + inner) as usize).cloned();
        let report = check_closed_with(&lookup, w, angle);
        if !report.violations.is_empty() {
            exact = false;
            notes.push("closure failed the closedness check on its window".to_string());
        }
    }
    let certificate =
        Certificate { status: if exact { CertStatus::Exact } else { CertStatus::UpperBound }, depth_used: stable, window: Some(w), notes };
    ClosureTable { window: inner, values, certificate }
}

/// One term of the tuple formula for the closed join:
/// `τ^{-(j_2+…+j_s)}c_ε(j_1) ∪ τ^{-(j_3+…+j_s)}c_{ε+1}(j_2) ∪ … ∪ c_{ε+s-1}(j_s)`,
/// where `c_h` is `c1` for odd `h` and `c2` for even `h`.
pub fn tuple_term(c1: &IdealFunction, c2: &IdealFunction, first: usize, tuple: &[i64]) -> Result<CircleSet, IdealError> {
    let angle = &*c1.angle;
    let mut acc = CircleSet::empty();
    let mut tail: i64 = tuple.iter().sum();
    for (k, &j) in tuple.iter().enumerate() {
        tail -= j;
        let f = if (first + k) % 2 == 1 { c1 } else { c2 };
        let v = f.value(j)?.set;
        if v.is_full() {
            return Ok(CircleSet::Full);
        }
        acc = acc.union(&v.rotate(-tail, angle), angle);
        if acc.is_full() {
            break;
        }
    }
    Ok(acc)
}

/// Brute-force closed-join value: intersection of all tuple terms with
/// `2 ≤ s ≤ max_len`, `|j_k| ≤ max_abs`, `Σ j_k = n`, `ε ∈ {1, 2}`.
pub fn enumerated_join_value(
    c1: &IdealFunction,
    c2: &IdealFunction,
    n: i64,
    max_len: usize,
    max_abs: i64,
) -> Result<CircleSet, IdealError> {
    c1.same_angle(c2)?;
    let angle = &*c1.angle;
    let mut acc = CircleSet::Full;
    let mut tuple = Vec::new();
    for s in 2..=max_len {
        for first in 1..=2 {
            enumerate_tuples(s, n, max_abs, &mut tuple, &mut |t| {
                if acc.is_empty() {
                    return Ok(());
                }
                let term = tuple_term(c1, c2, first, t)?;
                if !term.is_full() {
                    acc = acc.intersect(&term, angle);
                }
                Ok(())
            })?;
        }
    }
    Ok(acc)
}

fn enumerate_tuples(
    len: usize,
    remaining: i64,
    max_abs: i64,
    prefix: &mut Vec<i64>,
    visit: &mut dyn FnMut(&[i64]) -> Result<(), IdealError>,
) -> Result<(), IdealError> {
    if len == 1 {
        if remaining.abs() <= max_abs {
            prefix.push(remaining);
            visit(prefix)?;
            prefix.pop();
        }
        return Ok(());
    }
    for j in -max_abs..=max_abs {
        prefix.push(j);
        enumerate_tuples(len - 1, remaining - j, max_abs, prefix, visit)?;
        prefix.pop();
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum Violation {
    NonEmptyAtZero,
    Symmetry { n: i64 },
    Product { m: i64, n: i64 },
    Domination { n: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedReport {
    pub holds: bool,
    pub window: i64,
    pub violations: Vec<Violation>,
    pub certificate: Certificate,
}

impl ClosedReport {
    pub fn first_violation(&self) -> Option<Violation> {
        self.violations.first().copied()
    }
}

/// Indices `1, -1, 2, -2, …, w, -w`.
fn signed_order(w: i64) -> impl Iterator<Item = i64> {
    (1..=w).flat_map(|t| [t, -t])
}

fn check_closed_with(lookup: &dyn Fn(i64) -> Option<CircleSet>, w: i64, angle: &Angle) -> ClosedReport {
    let mut violations = Vec::new();
    if let Some(z) = lookup(0) {
        if !z.is_empty() {
            violations.push(Violation::NonEmptyAtZero);
        }
    }
    for n in 1..=w {
        if let (Some(a), Some(b)) = (lookup(n), lookup(-n)) {
            if b != a.rotate(n, angle) {
                violations.push(Violation::Symmetry { n });
            }
        }
    }
    for m in signed_order(w) {
        for n in signed_order(w) {
            let (Some(cm), Some(cn), Some(cs)) = (lookup(m), lookup(n), lookup(m + n)) else { continue };
            if cm.is_full() || cn.is_full() {
                continue;
            }
            let bound = cn.rotate(-m, angle).union(&cm, angle);
            if !cs.is_subset(&bound, angle) {
                violations.push(Violation::Product { m, n });
            }
        }
    }
    ClosedReport { holds: violations.is_empty(), window: w, violations, certificate: Certificate::exact() }
}

/// Values on `[-w, w]`, `None` where unknown, with the combined certificate.
fn fetch(c: &IdealFunction, w: i64) -> (BTreeMap<i64, CircleSet>, Certificate) {
    let mut cert = Certificate::exact();
    let mut map = BTreeMap::new();
    for n in -w..=w {
        match c.value(n) {
            Ok(v) => {
                cert = cert.combine(&v.certificate);
                map.insert(n, v.set);
            }
            Err(_) => {
                cert = cert.combine(&Certificate::upper_bound(format!("value at {n} unknown; skipped")));
            }
        }
    }
    (map, cert)
}

/// Symmetry and product laws on `[-window, window]` (products reach `2·window`).
pub fn check_closed(c: &IdealFunction, window: i64) -> ClosedReport {
    let (map, cert) = fetch(c, 2 * window);
    let mut report = check_closed_with(&|n| map.get(&n).cloned(), window, &c.angle);
    report.certificate = cert;
    report
}

pub fn meet(a: &IdealFunction, b: &IdealFunction) -> Result<IdealFunction, IdealError> {
    IdealFunction::meet(a, b)
}

pub fn naive_join(a: &IdealFunction, b: &IdealFunction) -> Result<IdealFunction, IdealError> {
    IdealFunction::naive_join(a, b)
}

pub fn closed_join(a: &IdealFunction, b: &IdealFunction, policy: JoinPolicy) -> Result<IdealFunction, IdealError> {
    IdealFunction::closed_join(a, b, policy)
}

pub fn close(c: &IdealFunction, policy: JoinPolicy) -> IdealFunction {
    IdealFunction::close(c, policy)
}

/// Builds a function from its values on `1..=N` using the positive-side
/// laws, extending by `c(0) = ∅` and `c(-n) = τ^n c(n)`.
pub fn extend_from_positive(
    angle: Arc<Angle>,
    positive: &BTreeMap<i64, CircleSet>,
    outside: WindowDefault,
) -> Result<IdealFunction, IdealError> {
    let a = &*angle;
    let top = positive.keys().copied().max().unwrap_or(0);
    let get = |n: i64| -> Option<CircleSet> {
        match positive.get(&n) {
            Some(v) => Some(v.clone()),
            None if n > top && outside == WindowDefault::Full => Some(CircleSet::Full),
            None if n >= 1 && n <= top => Some(CircleSet::Full),
            None => None,
        }
    };
    for m in 1..=top {
        for n in 1..=top {
            let (cm, cn) = (get(m).expect("in range"), get(n).expect("in range"));
            if cm.is_full() || cn.is_full() {
                continue;
            }
            if let Some(cs) = get(m + n) {
                if !cs.is_subset(&cn.rotate(-m, a).union(&cm, a), a) {
                    return Err(IdealError::PositiveSide { law: "sum", m, n });
                }
            }
            if n < m {
                let cd = get(m - n).expect("in range");
                if !cd.is_subset(&cn.rotate(n - m, a).union(&cm, a), a) {
                    return Err(IdealError::PositiveSide { law: "difference", m, n });
                }
                if !cd.is_subset(&cn.union(&cm, a).rotate(n, a), a) {
                    return Err(IdealError::PositiveSide { law: "reflected-difference", m, n });
                }
            }
        }
    }
    let mut values = BTreeMap::new();
    for n in 1..=top {
        let v = get(n).expect("in range");
        values.insert(-n, v.rotate(n, a));
        values.insert(n, v);
    }
    values.insert(0, CircleSet::empty());
    IdealFunction::window(angle, values, outside)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SupportKind {
    /// All multiples of `modulus`.
    Subgroup { modulus: i64 },
    /// Exactly these indices.
    Finite { members: Vec<i64> },
    /// Members seen in `[-window, window]`; nothing is claimed beyond.
    Window { window: i64, members: Vec<i64> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportReport {
    pub support: SupportKind,
    pub certificate: Certificate,
}

impl SupportReport {
    pub fn contains(&self, n: i64) -> Option<bool> {
        match &self.support {
            SupportKind::Subgroup { modulus } => Some(if *modulus == 0 { n == 0 } else { n % modulus == 0 }),
            SupportKind::Finite { members } => Some(members.contains(&n)),
            SupportKind::Window { window, members } => (n.abs() <= *window).then(|| members.contains(&n)),
        }
    }
}

/// `Supp(c) = {n : c(n) ≠ S¹}`.
pub fn support(c: &IdealFunction, window: i64) -> SupportReport {
    let angle = &*c.angle;
    if let Repr::Basic { q, p, .. } = &*c.repr {
        let support = if *q == 0 || p.is_full() {
            SupportKind::Finite { members: vec![0] }
        } else {
            match p.covering_index(*q, angle) {
                Some(cover) => {
                    let k = cover as i64 - 1;
                    SupportKind::Finite { members: (-k..=k).map(|i| i * q).collect() }
                }
                None => SupportKind::Subgroup { modulus: *q },
            }
        };
        return SupportReport { support, certificate: Certificate::exact() };
    }
    let (map, cert) = fetch(c, window);
    let members: Vec<i64> = map.iter().filter(|(_, v)| !v.is_full()).map(|(n, _)| *n).collect();
    let finite_window = matches!(&*c.repr, Repr::Window { default: WindowDefault::Full, .. });
    if finite_window && cert.is_exact() {
        if let Repr::Window { values, .. } = &*c.repr {
            let all: Vec<i64> = std::iter::once(0)
                .chain(values.iter().filter(|(n, v)| **n != 0 && !v.is_full()).map(|(n, _)| *n))
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            return SupportReport { support: SupportKind::Finite { members: all }, certificate: cert };
        }
    }
    let mut cert = cert;
    cert.window = Some(window);
    SupportReport { support: SupportKind::Window { window, members }, certificate: cert }
}

/// `Ω = ⋃_{m,n ∈ Supp} τ^{-m}c(n)` over `|m|, |n| ≤ window`; `truncated` is
/// false only when the support is known to lie inside the window.
pub fn omega(c: &IdealFunction, window: i64) -> (CircleSet, bool) {
    let angle = &*c.angle;
    let (map, _) = fetch(c, window);
    let supported: Vec<(i64, &CircleSet)> = map.iter().filter(|(_, v)| !v.is_full()).map(|(n, v)| (*n, v)).collect();
    let mut acc = CircleSet::empty();
    for &(m, _) in &supported {
        for &(_, v) in &supported {
            acc = acc.union(&v.rotate(-m, angle), angle);
        }
    }
    let truncated = match support(c, window).support {
        SupportKind::Finite { members } => members.iter().any(|n| n.abs() > window),
        _ => true,
    };
    (acc, truncated)
}

/// `Q(c) = ⋂_{|n| ≥ 1} c(n)`. Exact for basic functions (`P ∩ τ^q P`) and
/// for known finite supports; otherwise the window intersection, which can
/// only shrink as the window grows.
pub fn q_intersection(c: &IdealFunction, window: i64) -> Valued {
    let angle = &*c.angle;
    if let Repr::Basic { q, p, .. } = &*c.repr {
        let set = if *q == 0 { CircleSet::Full } else { p.intersect(&p.rotate(*q, angle), angle) };
        return Valued::exact(set);
    }
    let report = support(c, window);
    let (map, mut cert) = fetch(c, window);
    let mut acc = CircleSet::Full;
    for (n, v) in &map {
        if *n != 0 {
            acc = acc.intersect(v, angle);
        }
    }
    if !matches!(report.support, SupportKind::Finite { .. }) {
        cert = cert.combine(&Certificate::upper_bound(format!("intersection over |n| <= {window} only")));
    }
    Valued { set: acc, certificate: cert }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgebraClass {
    Residual,
    Small,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub class: AlgebraClass,
    pub residual: bool,
    pub small: bool,
    pub certificate: Certificate,
}

/// Residual: every supported value is nowhere dense and the support is not
/// `{0}`. Small: the support is finite.
pub fn classify_algebra(c: &IdealFunction, window: i64) -> Classification {
    let rep = support(c, window);
    let (map, mut cert) = fetch(c, window);
    let (small, members) = match &rep.support {
        SupportKind::Subgroup { modulus } => (*modulus == 0, None),
        SupportKind::Finite { members } => (true, Some(members.clone())),
        SupportKind::Window { window: w, members } => {
            let reach = members.iter().map(|n| n.abs()).max().unwrap_or(0);
            let small = reach <= w / 2;
            cert = cert.combine(&Certificate::upper_bound("support finiteness judged from the window"));
            (small, Some(members.clone()))
        }
    };
    let nontrivial = match &rep.support {
        SupportKind::Subgroup { modulus } => *modulus != 0,
        _ => members.as_ref().map(|m| m.iter().any(|n| *n != 0)).unwrap_or(false),
    };
    let residual = nontrivial && !small && map.values().filter(|v| !v.is_full()).all(|v| v.is_nowhere_dense());
    let class = if residual {
        AlgebraClass::Residual
    } else if small {
        AlgebraClass::Small
    } else {
        AlgebraClass::Neither
    };
    Classification { class, residual, small, certificate: cert }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub critical: Vec<i64>,
    pub basics: Vec<(i64, CircleSet)>,
    pub reproduces: bool,
    pub mismatches: Vec<i64>,
    pub window: i64,
    pub certificate: Certificate,
}

/// Critical indices: `m ≥ 1` in the support where the closed join of the
/// earlier basic pieces `𝔟_{k, c(k)}` (`k < m`) still differs from `c(m)`.
/// The basics at critical indices re-join to `c` when `c` is closed.
pub fn canonical_decomposition(c: &IdealFunction, window: i64, depth: usize) -> Result<Decomposition, IdealError> {
    let policy = JoinPolicy { depth, window };
    let mut basics: Vec<(i64, CircleSet)> = Vec::new();
    let mut critical = Vec::new();
    let mut cert = Certificate::exact();
    let mut joined = IdealFunction::trivial(c.angle.clone());
    for m in 1..=window {
        let cm = c.value(m)?;
        cert = cert.combine(&cm.certificate);
        if cm.set.is_full() {
            continue;
        }
        let current = joined.value(m)?;
        cert = cert.combine(&current.certificate);
        if current.set != cm.set {
            critical.push(m);
            basics.push((m, cm.set.clone()));
            joined = IdealFunction::join_of_basics(c.angle.clone(), basics.clone(), policy)?;
        }
    }
    let mut mismatches = Vec::new();
    for n in -window..=window {
        let (a, b) = (joined.value(n)?, c.value(n)?);
        cert = cert.combine(&a.certificate);
        if a.set != b.set {
            mismatches.push(n);
        }
    }
    Ok(Decomposition { critical, basics, reproduces: mismatches.is_empty(), mismatches, window, certificate: cert })
}

/// An ideal function `𝔧` relative to a closed `𝔠`, stored as `𝔠` with
/// overridden values.
#[derive(Clone, Debug)]
pub struct RelativeIdeal {
    parent: IdealFunction,
    overrides: BTreeMap<i64, CircleSet>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Triviality {
    Zero,
    Whole,
    Proper,
}

impl RelativeIdeal {
    /// Rejects overrides that do not contain the parent's value.
    pub fn new(parent: IdealFunction, overrides: BTreeMap<i64, CircleSet>) -> Result<Self, IdealError> {
        let angle = parent.angle.clone();
        for (n, v) in &overrides {
            let pv = parent.value(*n)?.set;
            if !pv.is_subset(v, &angle) {
                return Err(IdealError::NotDominating(*n));
            }
        }
        Ok(RelativeIdeal { parent, overrides })
    }

    pub fn parent(&self) -> &IdealFunction {
        &self.parent
    }

    pub fn value(&self, n: i64) -> Result<CircleSet, IdealError> {
        match self.overrides.get(&n) {
            Some(v) => Ok(v.clone()),
            None => Ok(self.parent.value(n)?.set),
        }
    }

    pub fn triviality(&self) -> Result<Triviality, IdealError> {
        let z = self.value(0)?;
        Ok(if z.is_full() {
            Triviality::Zero
        } else if z.is_empty() {
            Triviality::Whole
        } else {
            Triviality::Proper
        })
    }
}

/// `𝔧(0) = Q1`, `𝔧(n) = 𝔠(n)` otherwise; requires `Q1 ⊆ Q(𝔠)`.
pub fn make_ideal_from_intersection(c: &IdealFunction, q1: CircleSet, window: i64) -> Result<RelativeIdeal, IdealError> {
    let q = q_intersection(c, window);
    if !q1.is_subset(&q.set, &c.angle) {
        return Err(IdealError::NotInIntersection);
    }
    let mut overrides = BTreeMap::new();
    overrides.insert(0, q1);
    RelativeIdeal::new(c.clone(), overrides)
}

/// Relative refinement on `[-w, w]`: start from `𝔧(0) = zero`, full
/// elsewhere, and impose symmetry and both product orders until stable.
fn refine_relative(
    cmap: &BTreeMap<i64, CircleSet>,
    zero: &CircleSet,
    w: i64,
    depth: usize,
    angle: &Angle,
) -> (Vec<CircleSet>, Option<usize>) {
    if is_point_set(zero) && !zero.is_full() && (-w..=w).all(|n| cmap.get(&n).is_none_or(is_point_set)) {
        return refine_relative_points(cmap, zero, w, depth, angle);
    }
    let idx = |n: i64| (n + w) as usize;
    let parent = |n: i64| cmap.get(&n).cloned().unwrap_or(CircleSet::Full);
    let mut u: Vec<CircleSet> = (-w..=w).map(|n| if n == 0 { zero.clone() } else { CircleSet::Full }).collect();
    let order: Vec<i64> = std::iter::once(0).chain(signed_order(w)).collect();
    let mut level = 1;
    loop {
        let mut changed = false;
        for &t in &order {
            if u[idx(t)].is_empty() {
                continue;
            }
            let mut next = if t == 0 { u[idx(0)].clone() } else { u[idx(t)].intersect(&u[idx(-t)].rotate(-t, angle), angle) };
            for m in -w..=w {
                if next.is_empty() {
                    break;
                }
                let n = t - m;
                if m == 0 || n.abs() > w {
                    continue;
                }
                let cm = parent(m);
                let un = &u[idx(n)];
                if cm.is_full() || un.is_full() {
                    continue;
                }
                let left = un.rotate(-m, angle).union(&cm, angle);
                let right = cm.rotate(-n, angle).union(un, angle);
                next = next.intersect(&left.intersect(&right, angle), angle);
            }
            if next != u[idx(t)] {
                u[idx(t)] = next;
                changed = true;
            }
        }
        if !changed {
            return (u, Some(level));
        }
        level += 1;
        if level > depth {
            return (u, None);
        }
    }
}

/// [`refine_relative`] for finite point sets, by membership.
fn refine_relative_points(
    cmap: &BTreeMap<i64, CircleSet>,
    zero: &CircleSet,
    w: i64,
    depth: usize,
    angle: &Angle,
) -> (Vec<CircleSet>, Option<usize>) {
    let idx = |n: i64| (n + w) as usize;
    let cvals: Vec<Points> = (-w..=w).map(|n| cmap.get(&n).and_then(as_points)).collect();
    let mut u: Vec<Points> = (-w..=w).map(|n| if n == 0 { as_points(zero) } else { None }).collect();
    let order: Vec<i64> = std::iter::once(0).chain(signed_order(w)).collect();
    let mut level = 1;
    let stable = loop {
        let mut changed = false;
        for &t in &order {
            let mut next = if t == 0 { u[idx(0)].clone() } else { symmetric(&u[idx(t)], &u[idx(-t)], t) };
            for m in -w..=w {
                let n = t - m;
                if m == 0 || n.abs() > w {
                    continue;
                }
                let (Some(cm), Some(un)) = (&cvals[idx(m)], &u[idx(n)]) else { continue };
                let inside =
                    |x: &CirclePoint| (un.contains(&x.rotate(m)) || cm.contains(x)) && (cm.contains(&x.rotate(n)) || un.contains(x));
                next = Some(match next {
                    Some(cur) => cur.into_iter().filter(|x| inside(x)).collect(),
                    None => un.iter().map(|x| x.rotate(-m)).chain(cm.iter().copied()).filter(|x| inside(x)).collect(),
                });
                if next.as_ref().is_some_and(|p| p.is_empty()) {
                    break;
                }
            }
            if next != u[idx(t)] {
                u[idx(t)] = next;
                changed = true;
            }
        }
        if !changed {
            break Some(level);
        }
        level += 1;
        if level > depth {
            break None;
        }
    };
    (from_points(u, angle), stable)
}

/// The ideal generated by the functions vanishing on `zero`: the largest
/// `𝔠`-closed `𝔧` with `𝔧(0) ⊆ zero`. Values are refined on `[-3W, 3W]`
/// and certified by agreement with `[-4W, 4W]` on `[-2W, 2W]`; beyond `2W`
/// the ideal falls back to the values of `𝔠`.
pub fn generated_ideal(c: &IdealFunction, zero: CircleSet, window: i64, depth: usize) -> Result<(RelativeIdeal, Certificate), IdealError> {
    let angle = &*c.angle;
    let w = window.max(1);
    let (cmap, mut cert) = fetch(c, 4 * w);
    let zero = zero.intersect(&CircleSet::Full, angle);
    let (values, stable) = refine_relative(&cmap, &zero, 3 * w, depth, angle);
    let mut exact = cert.is_exact();
    let mut notes = Vec::new();
    if stable.is_none() {
        exact = false;
        notes.push(format!("depth-exhausted: no fixpoint within {depth} levels"));
    }
    if exact {
        let (wider, wider_stable) = refine_relative(&cmap, &zero, 4 * w, depth, angle);
        let same = (-2 * w..=2 * w).all(|n| values[(n + 3 * w) as usize] == wider[(n + 4 * w) as usize]);
        if wider_stable.is_none() || !same {
            exact = false;
            notes.push("values changed when the refinement window was enlarged".to_string());
        }
    }
    let overrides: BTreeMap<i64, CircleSet> = (-2 * w..=2 * w).map(|n| (n, values[(n + 3 * w) as usize].clone())).collect();
    let ideal = RelativeIdeal::new(c.clone(), overrides)?;
    if exact && !check_relative_closed(&ideal, w).holds {
        exact = false;
        notes.push("generated ideal failed the relative closedness check".to_string());
    }
    cert = cert.combine(&Certificate {
        status: if exact { CertStatus::Exact } else { CertStatus::UpperBound },
        depth_used: stable,
        window: Some(w),
        notes,
    });
    Ok((ideal, cert))
}

/// Domination, symmetry, and both product orders
/// `𝔧(m+n) ⊆ (τ^{-m}𝔧(n) ∪ 𝔠(m)) ∩ (τ^{-n}𝔠(m) ∪ 𝔧(n))` for `m ∈ Supp(𝔠)`,
/// `n ∈ Supp(𝔧)`, `|m|, |n| ≤ window`.
pub fn check_relative_closed(j: &RelativeIdeal, window: i64) -> ClosedReport {
    let angle = &*j.parent.angle;
    let w2 = 2 * window;
    let (cmap, cert) = fetch(&j.parent, w2);
    let jmap: BTreeMap<i64, CircleSet> = (-w2..=w2).filter_map(|n| j.value(n).ok().map(|v| (n, v))).collect();
    let mut violations = Vec::new();
    for n in -window..=window {
        if let (Some(cv), Some(jv)) = (cmap.get(&n), jmap.get(&n)) {
            if !cv.is_subset(jv, angle) {
                violations.push(Violation::Domination { n });
            }
        }
    }
    for n in 1..=window {
        if let (Some(a), Some(b)) = (jmap.get(&n), jmap.get(&-n)) {
            if *b != a.rotate(n, angle) {
                violations.push(Violation::Symmetry { n });
            }
        }
    }
    let mut ms: Vec<i64> = vec![0];
    ms.extend(signed_order(window));
    for &m in &ms {
        for &n in &ms {
            let (Some(cm), Some(jn), Some(js)) = (cmap.get(&m), jmap.get(&n), jmap.get(&(m + n))) else { continue };
            if cm.is_full() || jn.is_full() {
                continue;
            }
            let left = jn.rotate(-m, angle).union(cm, angle);
            let right = cm.rotate(-n, angle).union(jn, angle);
            if !js.is_subset(&left.intersect(&right, angle), angle) {
                violations.push(Violation::Product { m, n });
            }
        }
    }
    ClosedReport { holds: violations.is_empty(), window, violations, certificate: cert }
}

/// Positive-side form of the relative laws (for `m, n ≥ 0`), which together
/// with symmetry is equivalent to [`check_relative_closed`].
pub fn check_relative_closed_positive(j: &RelativeIdeal, window: i64) -> ClosedReport {
    let angle = &*j.parent.angle;
    let w2 = 2 * window;
    let (cmap, cert) = fetch(&j.parent, w2);
    let jmap: BTreeMap<i64, CircleSet> = (-w2..=w2).filter_map(|n| j.value(n).ok().map(|v| (n, v))).collect();
    let mut violations = Vec::new();
    for m in 0..=window {
        for n in 0..=window {
            let (Some(cm), Some(jn)) = (cmap.get(&m), jmap.get(&n)) else { continue };
            if cm.is_full() || jn.is_full() {
                continue;
            }
            let sum_ok = jmap.get(&(m + n)).is_none_or(|js| {
                let left = jn.rotate(-m, angle).union(cm, angle);
                let right = cm.rotate(-n, angle).union(jn, angle);
                js.is_subset(&left.intersect(&right, angle), angle)
            });
            let diff_ok = if n <= m {
                jmap.get(&(m - n)).is_none_or(|jd| {
                    let left = jn.rotate(n - m, angle).union(cm, angle);
                    let right = cm.union(jn, angle).rotate(n, angle);
                    jd.is_subset(&left.intersect(&right, angle), angle)
                })
            } else {
                jmap.get(&(n - m)).is_none_or(|jd| {
                    let left = cm.rotate(m - n, angle).union(jn, angle);
                    let right = cm.union(jn, angle).rotate(m, angle);
                    jd.is_subset(&left.intersect(&right, angle), angle)
                })
            };
            if !sum_ok || !diff_ok {
                violations.push(Violation::Product { m, n });
            }
        }
    }
    for n in 1..=window {
        if let (Some(a), Some(b)) = (jmap.get(&n), jmap.get(&-n)) {
            if *b != a.rotate(n, angle) {
                violations.push(Violation::Symmetry { n });
            }
        }
    }
    ClosedReport { holds: violations.is_empty(), window, violations, certificate: cert }
}

/// Supports of relative ideals are subgroups; checked inside the window.
pub fn support_is_subgroup(j: &RelativeIdeal, window: i64) -> bool {
    let supp: Vec<i64> = (-window..=window).filter(|n| j.value(*n).map(|v| !v.is_full()).unwrap_or(false)).collect();
    let contains = |n: i64| supp.contains(&n);
    supp.iter().all(|&a| contains(-a) && supp.iter().all(|&b| (a + b).abs() > window || contains(a + b)))
}

/// `𝔧(0) ⊆ 𝔧(n)` for all `|n| ≤ window`.
pub fn zero_value_is_minimal(j: &RelativeIdeal, window: i64) -> bool {
    let angle = &*j.parent.angle;
    let Ok(z) = j.value(0) else { return false };
    (-window..=window).all(|n| j.value(n).map(|v| z.is_subset(&v, angle)).unwrap_or(false))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimplicityVerdict {
    Simple,
    NotSimple,
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct SimplicityReport {
    pub verdict: SimplicityVerdict,
    pub intersection: Valued,
    pub witness: Option<RelativeIdeal>,
    pub notes: Vec<String>,
}

/// Nonempty `Q(𝔠)` yields the proper ideal with `𝔧(0) = Q(𝔠)`; a residual
/// algebra with a one-point value is simple.
pub fn simplicity_report(c: &IdealFunction, window: i64) -> Result<SimplicityReport, IdealError> {
    let q = q_intersection(c, window);
    let mut notes = Vec::new();
    if !q.set.is_empty() {
        if q.certificate.is_exact() {
            let witness = make_ideal_from_intersection(c, q.set.clone(), window)?;
            return Ok(SimplicityReport { verdict: SimplicityVerdict::NotSimple, intersection: q, witness: Some(witness), notes });
        }
        notes.push("intersection set is nonempty on the window but not certified".into());
    }
    let class = classify_algebra(c, window);
    if class.residual {
        let singleton = (1..=window).any(|n| c.value(n).map(|v| v.set.is_single_point()).unwrap_or(false));
        if singleton {
            return Ok(SimplicityReport { verdict: SimplicityVerdict::Simple, intersection: q, witness: None, notes });
        }
        notes.push("residual, but no supported value in the window is a single point".into());
    }
    if q.set.is_empty() {
        notes.push("intersection set is empty: no proper ideal arises from it".into());
    }
    Ok(SimplicityReport { verdict: SimplicityVerdict::Inconclusive, intersection: q, witness: None, notes })
}
