//! Closed subsets of the unit circle whose endpoints lie on finitely many
//! rotation orbits. A point is `q + n·ρ mod 1` with `q` rational, so all
//! comparisons reduce to exact signs of linear forms in `ρ`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::diophantine::Angle;

/// `q + n·ρ mod 1`, stored with `q ∈ [0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CirclePoint {
    q: Rational64,
    n: i64,
}

impl CirclePoint {
    pub fn new(q: Rational64, n: i64) -> Self {
        let shifted = q - Rational64::from_integer(q.floor().to_integer());
        CirclePoint { q: shifted, n }
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Self::new(Rational64::new(num, den), 0)
    }

    /// The orbit point `τ^n(0) = n·ρ`.
    pub fn orbit(n: i64) -> Self {
        CirclePoint { q: Rational64::zero(), n }
    }

    pub fn zero() -> Self {
        Self::orbit(0)
    }

    pub fn q(&self) -> Rational64 {
        self.q
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// `τ^k`: adds `k·ρ`.
    pub fn rotate(&self, k: i64) -> Self {
        CirclePoint { q: self.q, n: self.n + k }
    }

    pub fn position(&self, angle: &Angle) -> f64 {
        (self.q.to_f64().unwrap_or(0.0) + angle.frac_multiple(self.n)).rem_euclid(1.0)
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.q.is_zero(), self.n) {
            (true, 0) => write!(f, "0"),
            (true, n) => write!(f, "{n}ρ"),
            (false, 0) => write!(f, "{}", self.q),
            (false, n) => write!(f, "{}{:+}ρ", self.q, n),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    q: String,
    n: i64,
}

impl Serialize for CirclePoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PointRepr { q: self.q.to_string(), n: self.n }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CirclePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = PointRepr::deserialize(d)?;
        let q = Rational64::from_str(repr.q.trim()).map_err(|_| D::Error::custom(format!("bad rational `{}`", repr.q)))?;
        Ok(CirclePoint::new(q, repr.n))
    }
}

/// One connected component: a point or a closed counter-clockwise arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Component {
    Point(CirclePoint),
    Arc { start: CirclePoint, end: CirclePoint },
}

impl Component {
    /// Arc from `start` to `end`; equal endpoints collapse to a point.
    pub fn arc(start: CirclePoint, end: CirclePoint) -> Self {
        if start == end {
            Component::Point(start)
        } else {
            Component::Arc { start, end }
        }
    }

    pub fn start(&self) -> CirclePoint {
        match self {
            Component::Point(p) => *p,
            Component::Arc { start, .. } => *start,
        }
    }

    fn rotate(&self, k: i64) -> Self {
        match self {
            Component::Point(p) => Component::Point(p.rotate(k)),
            Component::Arc { start, end } => Component::Arc { start: start.rotate(k), end: end.rotate(k) },
        }
    }

    /// Counter-clockwise length as a float (0 for points).
    pub fn length(&self, angle: &Angle) -> f64 {
        match self {
            Component::Point(_) => 0.0,
            Component::Arc { start, end } => {
                let l = (end.position(angle) - start.position(angle)).rem_euclid(1.0);
                if l == 0.0 {
                    1.0
                } else {
                    l
                }
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
enum ComponentRepr {
    #[serde(rename = "pt")]
    Pt(CirclePoint),
    #[serde(rename = "arc")]
    Arc { start: CirclePoint, end: CirclePoint },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetClass {
    Empty,
    FinitePoints,
    HasInterior,
    Full,
}

/// A closed subset of the circle in canonical form: components are pairwise
/// disjoint, never touching, and sorted by the position of their start.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CircleSet {
    Full,
    Components(Vec<Component>),
}

/// Position `lift + n·ρ ∈ [0, 1)` of a point, with its lift cached.
#[derive(Clone, Copy, Debug)]
struct Pos {
    lift: Rational64,
    point: CirclePoint,
}

impl Pos {
    fn of(point: CirclePoint, angle: &Angle) -> Self {
        let f = angle.floor_linear(&point.q, point.n);
        Pos { lift: point.q - Rational64::from_integer(f), point }
    }

    fn is_zero(&self) -> bool {
        self.point == CirclePoint::zero()
    }
}

fn cmp_pos(a: &Pos, b: &Pos, angle: &Angle) -> Ordering {
    if a.point == b.point {
        return Ordering::Equal;
    }
    angle.compare_linear(&(a.lift - b.lift), a.point.n - b.point.n)
}

/// A position on the cut circle `[0, 1]`; `One` is the far copy of 0.
#[derive(Clone, Copy, Debug)]
enum Mark {
    At(Pos),
    One,
}

fn cmp_mark(a: &Mark, b: &Mark, angle: &Angle) -> Ordering {
    match (a, b) {
        (Mark::One, Mark::One) => Ordering::Equal,
        (Mark::One, _) => Ordering::Greater,
        (_, Mark::One) => Ordering::Less,
        (Mark::At(x), Mark::At(y)) => cmp_pos(x, y, angle),
    }
}

#[derive(Clone, Copy, Debug)]
struct Seg {
    lo: Mark,
    hi: Mark,
}

/// Closed intervals of `[0, 1]`, sorted, disjoint and non-touching; 0 is
/// covered exactly when 1 is.
struct Segments(Vec<Seg>);

impl Segments {
    fn of(set: &CircleSet, angle: &Angle) -> Self {
        let zero = Pos::of(CirclePoint::zero(), angle);
        let mut segs = Vec::new();
        match set {
            CircleSet::Full => segs.push(Seg { lo: Mark::At(zero), hi: Mark::One }),
            CircleSet::Components(cs) => {
                for c in cs {
                    match c {
                        Component::Point(p) => {
                            let pos = Pos::of(*p, angle);
                            segs.push(Seg { lo: Mark::At(pos), hi: Mark::At(pos) });
                            if pos.is_zero() {
                                segs.push(Seg { lo: Mark::One, hi: Mark::One });
                            }
                        }
                        Component::Arc { start, end } => {
                            let s = Pos::of(*start, angle);
                            let e = Pos::of(*end, angle);
                            if cmp_pos(&s, &e, angle) == Ordering::Less {
                                segs.push(Seg { lo: Mark::At(s), hi: Mark::At(e) });
                                if s.is_zero() {
                                    segs.push(Seg { lo: Mark::One, hi: Mark::One });
                                }
                            } else {
                                segs.push(Seg { lo: Mark::At(s), hi: Mark::One });
                                segs.push(Seg { lo: Mark::At(zero), hi: Mark::At(e) });
                            }
                        }
                    }
                }
            }
        }
        Segments::merge(segs, angle)
    }

    fn merge(mut segs: Vec<Seg>, angle: &Angle) -> Self {
        segs.sort_by(|a, b| cmp_mark(&a.lo, &b.lo, angle));
        let mut out: Vec<Seg> = Vec::with_capacity(segs.len());
        for s in segs {
            match out.last_mut() {
                Some(last) if cmp_mark(&s.lo, &last.hi, angle) != Ordering::Greater => {
                    if cmp_mark(&s.hi, &last.hi, angle) == Ordering::Greater {
                        last.hi = s.hi;
                    }
                }
                _ => out.push(s),
            }
        }
        Segments(out)
    }

    fn union(a: Segments, b: Segments, angle: &Angle) -> Self {
        let mut all = a.0;
        all.extend(b.0);
        Segments::merge(all, angle)
    }

    fn intersect(a: &Segments, b: &Segments, angle: &Angle) -> Self {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.0.len() && j < b.0.len() {
            let (x, y) = (&a.0[i], &b.0[j]);
            let lo = if cmp_mark(&x.lo, &y.lo, angle) == Ordering::Greater { x.lo } else { y.lo };
            let (hi, advance_a) = match cmp_mark(&x.hi, &y.hi, angle) {
                Ordering::Less => (x.hi, true),
                _ => (y.hi, false),
            };
            if cmp_mark(&lo, &hi, angle) != Ordering::Greater {
                out.push(Seg { lo, hi });
            }
            if advance_a {
                i += 1;
            } else {
                j += 1;
            }
        }
        Segments(out)
    }

    fn into_set(self, angle: &Angle) -> CircleSet {
        let mut segs = self.0;
        if segs.is_empty() {
            return CircleSet::empty();
        }
        let mark_point = |m: &Mark| match m {
            Mark::At(p) => p.point,
            Mark::One => CirclePoint::zero(),
        };
        let starts_at_zero = matches!(segs[0].lo, Mark::At(p) if p.is_zero());
        let ends_at_one = matches!(segs.last().map(|s| s.hi), Some(Mark::One));
        let mut wrap: Option<Component> = None;
        if starts_at_zero && ends_at_one {
            if segs.len() == 1 {
                return CircleSet::Full;
            }
            let last = segs.pop().expect("nonempty");
            let first = segs.remove(0);
            wrap = Some(match last.lo {
                // only the far copy of 0: the first segment already says it all
                Mark::One => Component::arc(mark_point(&first.lo), mark_point(&first.hi)),
                Mark::At(p) => Component::arc(p.point, mark_point(&first.hi)),
            });
        }
        let mut comps: Vec<Component> = segs.iter().map(|s| Component::arc(mark_point(&s.lo), mark_point(&s.hi))).collect();
        if let Some(w) = wrap {
            comps.push(w);
        }
        CircleSet::Components(comps).canonical_order(angle)
    }
}

impl CircleSet {
    pub fn empty() -> Self {
        CircleSet::Components(Vec::new())
    }

    pub fn point(p: CirclePoint) -> Self {
        CircleSet::Components(vec![Component::Point(p)])
    }

    pub fn arc(start: CirclePoint, end: CirclePoint) -> Self {
        CircleSet::Components(vec![Component::arc(start, end)])
    }

    /// Normalizes an arbitrary list of (possibly overlapping) components.
    pub fn from_components(components: Vec<Component>, angle: &Angle) -> Self {
        components.into_iter().fold(CircleSet::empty(), |acc, c| acc.union(&CircleSet::Components(vec![c]), angle))
    }

    pub fn points(points: impl IntoIterator<Item = CirclePoint>, angle: &Angle) -> Self {
        let distinct: std::collections::BTreeSet<CirclePoint> = points.into_iter().collect();
        CircleSet::Components(distinct.into_iter().map(Component::Point).collect()).canonical_order(angle)
    }

    pub fn components(&self) -> &[Component] {
        match self {
            CircleSet::Full => &[],
            CircleSet::Components(cs) => cs,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, CircleSet::Components(cs) if cs.is_empty())
    }

    pub fn is_full(&self) -> bool {
        matches!(self, CircleSet::Full)
    }

    fn canonical_order(self, angle: &Angle) -> Self {
        match self {
            CircleSet::Full => CircleSet::Full,
            CircleSet::Components(cs) => {
                let mut keyed: Vec<(Pos, Component)> = cs.into_iter().map(|c| (Pos::of(c.start(), angle), c)).collect();
                keyed.sort_by(|a, b| cmp_pos(&a.0, &b.0, angle));
                CircleSet::Components(keyed.into_iter().map(|(_, c)| c).collect())
            }
        }
    }

    pub fn union(&self, other: &CircleSet, angle: &Angle) -> CircleSet {
        if self.is_full() || other.is_full() {
            return CircleSet::Full;
        }
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        Segments::union(Segments::of(self, angle), Segments::of(other, angle), angle).into_set(angle)
    }

    pub fn intersect(&self, other: &CircleSet, angle: &Angle) -> CircleSet {
        if self.is_full() {
            return other.clone();
        }
        if other.is_full() || self == other {
            return self.clone();
        }
        if self.is_empty() || other.is_empty() {
            return CircleSet::empty();
        }
        Segments::intersect(&Segments::of(self, angle), &Segments::of(other, angle), angle).into_set(angle)
    }

    /// `τ^k(self)`.
    pub fn rotate(&self, k: i64, angle: &Angle) -> CircleSet {
        match self {
            CircleSet::Full => CircleSet::Full,
            CircleSet::Components(cs) if k == 0 || cs.is_empty() => self.clone(),
            CircleSet::Components(cs) => CircleSet::Components(cs.iter().map(|c| c.rotate(k)).collect()).canonical_order(angle),
        }
    }

    pub fn is_subset(&self, other: &CircleSet, angle: &Angle) -> bool {
        other.is_full() || self.is_empty() || &self.intersect(other, angle) == self
    }

    pub fn contains_point(&self, p: CirclePoint, angle: &Angle) -> bool {
        CircleSet::point(p).is_subset(self, angle)
    }

    pub fn classify(&self) -> SetClass {
        match self {
            CircleSet::Full => SetClass::Full,
            CircleSet::Components(cs) if cs.is_empty() => SetClass::Empty,
            CircleSet::Components(cs) => {
                if cs.iter().any(|c| matches!(c, Component::Arc { .. })) {
                    SetClass::HasInterior
                } else {
                    SetClass::FinitePoints
                }
            }
        }
    }

    /// Whether the set has no interior (empty or finitely many points).
    pub fn is_nowhere_dense(&self) -> bool {
        matches!(self.classify(), SetClass::Empty | SetClass::FinitePoints)
    }

    pub fn is_single_point(&self) -> bool {
        matches!(self, CircleSet::Components(cs) if cs.len() == 1 && matches!(cs[0], Component::Point(_)))
    }

    /// Total arc length as a float.
    pub fn measure(&self, angle: &Angle) -> f64 {
        match self {
            CircleSet::Full => 1.0,
            CircleSet::Components(cs) => cs.iter().map(|c| c.length(angle)).sum(),
        }
    }

    /// Smallest `N ≥ 1` with `P ∪ τ^{-q}P ∪ … ∪ τ^{-q(N-1)}P` the whole circle,
    /// or `None` when no finite union covers it.
    pub fn covering_index(&self, q: i64, angle: &Angle) -> Option<usize> {
        match self.classify() {
            SetClass::Full => return Some(1),
            SetClass::Empty | SetClass::FinitePoints => return None,
            SetClass::HasInterior => {}
        }
        if q == 0 {
            return None;
        }
        let bound = self.covering_bound(q, angle);
        let mut acc = self.clone();
        for n in 1..=bound {
            if acc.is_full() {
                return Some(n);
            }
            acc = acc.union(&self.rotate(-q * n as i64, angle), angle);
        }
        None
    }

    /// An upper bound for the covering index: once some multiple `j` of the
    /// step moves by less than the longest arc, `j·(⌈1/‖jqρ‖⌉ + 1)` copies
    /// suffice.
    fn covering_bound(&self, q: i64, angle: &Angle) -> usize {
        let longest = self.components().iter().map(|c| c.length(angle)).fold(0.0, f64::max) * 0.999;
        let mut j: i64 = 1;
        loop {
            let step = angle.signed_frac_multiple(j * q).abs();
            if step > 0.0 && step < longest {
                return (j as f64 * ((1.0 / step).ceil() + 2.0)) as usize + 2;
            }
            j += 1;
        }
    }

    pub fn to_svg(&self, angle: &Angle, size: u32) -> String {
        let c = size as f64 / 2.0;
        let r = c * 0.8;
        let at = |t: f64| {
            let th = std::f64::consts::TAU * t;
            (c + r * th.cos(), c - r * th.sin())
        };
        let mut body = format!("<circle cx=\"{c}\" cy=\"{c}\" r=\"{r}\" fill=\"none\" stroke=\"#bbb\" stroke-width=\"1\"/>\n");
        match self {
            CircleSet::Full => {
                body.push_str(&format!("<circle cx=\"{c}\" cy=\"{c}\" r=\"{r}\" fill=\"none\" stroke=\"#c03\" stroke-width=\"4\"/>\n"));
            }
            CircleSet::Components(cs) => {
                for comp in cs {
                    match comp {
                        Component::Point(p) => {
                            let (x, y) = at(p.position(angle));
                            body.push_str(&format!("<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"3\" fill=\"#c03\"/>\n"));
                        }
                        Component::Arc { start, .. } => {
                            let s = start.position(angle);
                            let len = comp.length(angle);
                            let (x0, y0) = at(s);
                            let (x1, y1) = at(s + len);
                            let large = if len > 0.5 { 1 } else { 0 };
                            body.push_str(&format!(
                                "<path d=\"M {x0:.3} {y0:.3} A {r} {r} 0 {large} 0 {x1:.3} {y1:.3}\" fill=\"none\" stroke=\"#c03\" stroke-width=\"4\"/>\n"
                            ));
                        }
                    }
                }
            }
        }
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n{body}</svg>\n"
        )
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SetRepr {
    Full { full: bool },
    Components { components: Vec<ComponentRepr> },
}

impl Serialize for CircleSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CircleSet::Full => SetRepr::Full { full: true }.serialize(s),
            CircleSet::Components(cs) => SetRepr::Components {
                components: cs
                    .iter()
                    .map(|c| match c {
                        Component::Point(p) => ComponentRepr::Pt(*p),
                        Component::Arc { start, end } => ComponentRepr::Arc { start: *start, end: *end },
                    })
                    .collect(),
            }
            .serialize(s),
        }
    }
}

/// Deserialized components are not yet canonical; pass them through
/// [`CircleSet::normalize`] with an angle before use.
impl<'de> Deserialize<'de> for CircleSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match SetRepr::deserialize(d)? {
            SetRepr::Full { full: true } => Ok(CircleSet::Full),
            SetRepr::Full { full: false } => Ok(CircleSet::empty()),
            SetRepr::Components { components } => Ok(CircleSet::Components(
                components
                    .into_iter()
                    .map(|c| match c {
                        ComponentRepr::Pt(p) => Component::Point(p),
                        ComponentRepr::Arc { start, end } => Component::arc(start, end),
                    })
                    .collect(),
            )),
        }
    }
}

impl CircleSet {
    pub fn normalize(self, angle: &Angle) -> CircleSet {
        match self {
            CircleSet::Full => CircleSet::Full,
            CircleSet::Components(cs) => CircleSet::from_components(cs, angle),
        }
    }
}
