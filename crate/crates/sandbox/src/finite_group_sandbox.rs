//! The crossed product `C(X) ⋊ Γ` for a finite abelian group acting on a
//! finite set, with exact Gaussian rational arithmetic.
//!
//! An element is `Σ_g f_g λ_g` stored as `coeffs[g][x] = f_g(x)`, with
//! `(f λ_g)(f' λ_h) = f (g.f') λ_{gh}` and `(g.f)(x) = f(g⁻¹x)`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rotation_sandbox::Gauss;
use crate::SandboxError;

fn gz() -> Gauss {
    Gauss::zero()
}

fn gi(n: i64) -> Gauss {
    Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
}

/// A product of cyclic groups; element `i` has mixed-radix digits with the
/// first factor most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    orders: Vec<u32>,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    pub fn product(orders: &[u32]) -> Result<Self, SandboxError> {
        if orders.contains(&0) {
            return Err(SandboxError::BadGroup("cyclic factors need positive order".into()));
        }
        let orders: Vec<u32> = orders.iter().copied().filter(|o| *o > 1).collect();
        let size: usize = orders.iter().map(|o| *o as usize).product();
        let digits = |mut i: usize| -> Vec<u32> {
            let mut d = vec![0; orders.len()];
            for (slot, o) in d.iter_mut().zip(&orders).rev() {
                *slot = (i % *o as usize) as u32;
                i /= *o as usize;
            }
            d
        };
        let index = |d: &[u32]| d.iter().zip(&orders).fold(0usize, |acc, (x, o)| acc * *o as usize + *x as usize);
        let table: Vec<Vec<usize>> = (0..size)
            .map(|i| {
                let a = digits(i);
                (0..size)
                    .map(|j| {
                        let b = digits(j);
                        let s: Vec<u32> = a.iter().zip(&b).zip(&orders).map(|((x, y), o)| (x + y) % o).collect();
                        index(&s)
                    })
                    .collect()
            })
            .collect();
        let inverses = (0..size).map(|i| table[i].iter().position(|k| *k == 0).expect("group")).collect();
        Ok(FiniteGroup { orders, table, inverses })
    }

    pub fn cyclic(n: u32) -> Result<Self, SandboxError> {
        Self::product(&[n])
    }

    /// Reads `Z/2`, `Z/2xZ/3`, `Z/4×Z/2` or `trivial`.
    pub fn parse(text: &str) -> Result<Self, SandboxError> {
        let text = text.trim();
        if text == "trivial" || text == "1" {
            return Self::product(&[]);
        }
        let orders = text
            .split(['x', '×'])
            .map(|part| {
                part.trim()
                    .strip_prefix("Z/")
                    .and_then(|n| n.trim().parse::<u32>().ok())
                    .ok_or_else(|| SandboxError::BadGroup(text.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::product(&orders)
    }

    pub fn name(&self) -> String {
        if self.orders.is_empty() {
            return "trivial".into();
        }
        self.orders.iter().map(|o| format!("Z/{o}")).collect::<Vec<_>>().join("x")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn cayley_table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Every subgroup, as sorted element lists.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = vec![vec![0usize]];
        while let Some(h) = queue.pop() {
            if !found.insert(h.clone()) {
                continue;
            }
            for g in 0..self.order() {
                if !h.contains(&g) {
                    queue.push(self.generate(h.iter().copied().chain([g])));
                }
            }
        }
        found.into_iter().collect()
    }

    pub fn generate(&self, gens: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::from([0]);
        let gens: Vec<usize> = gens.into_iter().collect();
        loop {
            let next: BTreeSet<usize> = set.iter().flat_map(|a| gens.iter().map(move |g| (*a, *g))).map(|(a, g)| self.mul(a, g)).collect();
            let before = set.len();
            set.extend(next);
            if set.len() == before {
                return set.into_iter().collect();
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionDoc {
    pub group: String,
    pub points: usize,
    /// `action[g][x] = g·x`, zero-based, one row per group element.
    pub action: Vec<Vec<usize>>,
    #[serde(default)]
    pub weights: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteAction {
    group: FiniteGroup,
    action: Vec<Vec<usize>>,
    weights: Vec<BigRational>,
}

impl FiniteAction {
    pub fn new(group: FiniteGroup, action: Vec<Vec<usize>>, weights: Option<Vec<BigRational>>) -> Result<Self, SandboxError> {
        let n = group.order();
        if action.len() != n {
            return Err(SandboxError::BadAction(format!("need {n} rows, got {}", action.len())));
        }
        let points = action.first().map(|r| r.len()).unwrap_or(0);
        if points == 0 {
            return Err(SandboxError::BadAction("no points".into()));
        }
        for row in &action {
            let mut seen = row.clone();
            seen.sort_unstable();
            if seen != (0..points).collect::<Vec<_>>() {
                return Err(SandboxError::BadAction(format!("row {row:?} is not a permutation")));
            }
        }
        if action[0] != (0..points).collect::<Vec<_>>() {
            return Err(SandboxError::BadAction("identity must act trivially".into()));
        }
        for g in 0..n {
            for h in 0..n {
                let gh = group.mul(g, h);
                if (0..points).any(|x| action[gh][x] != action[g][action[h][x]]) {
                    return Err(SandboxError::BadAction(format!("rows {g}, {h} break compatibility")));
                }
            }
        }
        let weights = weights.unwrap_or_else(|| vec![BigRational::new(BigInt::one(), BigInt::from(points)); points]);
        if weights.len() != points {
            return Err(SandboxError::BadWeights(format!("need {points} weights")));
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(SandboxError::BadWeights("weights must be positive".into()));
        }
        if weights.iter().sum::<BigRational>() != BigRational::one() {
            return Err(SandboxError::BadWeights("weights must sum to 1".into()));
        }
        if action.iter().any(|row| (0..points).any(|x| weights[row[x]] != weights[x])) {
            return Err(SandboxError::BadWeights("weights must be invariant".into()));
        }
        Ok(FiniteAction { group, action, weights })
    }

    pub fn from_doc(doc: &ActionDoc) -> Result<Self, SandboxError> {
        let group = FiniteGroup::parse(&doc.group)?;
        if doc.action.iter().any(|r| r.len() != doc.points) {
            return Err(SandboxError::BadAction(format!("rows must list {} images", doc.points)));
        }
        let weights = match &doc.weights {
            Some(ws) => Some(
                ws.iter()
                    .map(|w| w.parse::<BigRational>().map_err(|_| SandboxError::BadWeights(w.clone())))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            None => None,
        };
        Self::new(group, doc.action.clone(), weights)
    }

    pub fn to_doc(&self) -> ActionDoc {
        ActionDoc {
            group: self.group.name(),
            points: self.points(),
            action: self.action.clone(),
            weights: Some(self.weights.iter().map(|w| w.to_string()).collect()),
        }
    }

    /// `ℤ/2` on three points, swapping the first two.
    pub fn swap_two_of_three() -> Self {
        Self::new(FiniteGroup::cyclic(2).expect("Z/2"), vec![vec![0, 1, 2], vec![1, 0, 2]], None).expect("valid action")
    }

    /// `ℤ/2` swapping two points.
    pub fn swap_two() -> Self {
        Self::new(FiniteGroup::cyclic(2).expect("Z/2"), vec![vec![0, 1], vec![1, 0]], None).expect("valid action")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn points(&self) -> usize {
        self.action[0].len()
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g][x]
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    /// `(g.f)(x) = f(g⁻¹x)`.
    pub fn translate(&self, g: usize, f: &[Gauss]) -> Vec<Gauss> {
        let ginv = self.group.inv(g);
        (0..self.points()).map(|x| f[self.act(ginv, x)].clone()).collect()
    }

    pub fn dimension(&self) -> usize {
        self.group.order() * self.points()
    }

    pub fn is_invariant_subset(&self, set: &BTreeSet<usize>) -> bool {
        self.action.iter().all(|row| set.iter().all(|x| set.contains(&row[*x])))
    }
}

/// `Σ_g f_g λ_g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixElement {
    coeffs: Vec<Vec<Gauss>>,
}

impl MatrixElement {
    pub fn zero(action: &FiniteAction) -> Self {
        MatrixElement { coeffs: vec![vec![gz(); action.points()]; action.group.order()] }
    }

    pub fn one(action: &FiniteAction) -> Self {
        Self::group_element(action, 0)
    }

    pub fn group_element(action: &FiniteAction, g: usize) -> Self {
        let mut m = Self::zero(action);
        m.coeffs[g] = vec![gi(1); action.points()];
        m
    }

    pub fn function(action: &FiniteAction, f: Vec<Gauss>) -> Self {
        let mut m = Self::zero(action);
        m.coeffs[0] = f;
        m
    }

    pub fn delta(action: &FiniteAction, x: usize) -> Self {
        Self::function(action, (0..action.points()).map(|y| gi((x == y) as i64)).collect())
    }

    /// From `Σ_g c_g λ_g` in the group algebra.
    pub fn from_group_algebra(action: &FiniteAction, c: &[Gauss]) -> Self {
        MatrixElement { coeffs: c.iter().map(|cg| vec![cg.clone(); action.points()]).collect() }
    }

    pub fn from_vector(action: &FiniteAction, v: &[Gauss]) -> Self {
        MatrixElement { coeffs: v.chunks(action.points()).map(|c| c.to_vec()).collect() }
    }

    pub fn to_vector(&self) -> Vec<Gauss> {
        self.coeffs.iter().flatten().cloned().collect()
    }

    /// `f_g`.
    pub fn coefficient(&self, g: usize) -> &[Gauss] {
        &self.coeffs[g]
    }

    pub fn plus(&self, other: &Self) -> Self {
        MatrixElement {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect(),
        }
    }

    pub fn scale(&self, s: &Gauss) -> Self {
        MatrixElement { coeffs: self.coeffs.iter().map(|a| a.iter().map(|x| x * s).collect()).collect() }
    }

    pub fn multiply(&self, other: &Self, action: &FiniteAction) -> Self {
        let mut out = Self::zero(action);
        let grp = &action.group;
        for g in 0..grp.order() {
            if self.coeffs[g].iter().all(|c| c.is_zero()) {
                continue;
            }
            for h in 0..grp.order() {
                if other.coeffs[h].iter().all(|c| c.is_zero()) {
                    continue;
                }
                let moved = action.translate(g, &other.coeffs[h]);
                let slot = &mut out.coeffs[grp.mul(g, h)];
                for x in 0..action.points() {
                    slot[x] = &slot[x] + &self.coeffs[g][x] * &moved[x];
                }
            }
        }
        out
    }

    /// `(f λ_g)* = (g⁻¹.f̄) λ_{g⁻¹}`.
    pub fn adjoint(&self, action: &FiniteAction) -> Self {
        let mut out = Self::zero(action);
        for g in 0..action.group.order() {
            let gi = action.group.inv(g);
            let fbar: Vec<Gauss> = self.coeffs[g].iter().map(|c| c.conj()).collect();
            out.coeffs[gi] = action.translate(gi, &fbar);
        }
        out
    }

    /// `λ_g a λ_g*`.
    pub fn conjugate(&self, g: usize, action: &FiniteAction) -> Self {
        let lg = Self::group_element(action, g);
        lg.multiply(self, action).multiply(&lg.adjoint(action), action)
    }

    /// Matrix on `ℓ²(Γ × X)`: `(π(f)ξ)(h) = (h⁻¹.f)ξ(h)` and `(λ_g ξ)(h) = ξ(g⁻¹h)`.
    /// Rows and columns are indexed by `h·|X| + x`.
    pub fn regular_matrix(&self, action: &FiniteAction) -> Vec<Vec<Gauss>> {
        let grp = &action.group;
        let (n, p) = (grp.order(), action.points());
        let mut m = vec![vec![gz(); n * p]; n * p];
        // a = Σ_g f_g λ_g sends δ_{(k, x)} to Σ_g (gk)⁻¹.f_g (x) δ_{(gk, x)}
        for g in 0..n {
            for k in 0..n {
                let h = grp.mul(g, k);
                let moved = action.translate(grp.inv(h), &self.coeffs[g]);
                for x in 0..p {
                    m[h * p + x][k * p + x] = &m[h * p + x][k * p + x] + &moved[x];
                }
            }
        }
        m
    }

    /// `𝔼(a) = f_e`.
    pub fn expectation(&self) -> Vec<Gauss> {
        self.coeffs[0].clone()
    }

    /// `𝔼_ν(Σ f_g λ_g) = Σ ν(f_g) λ_g`, as group algebra coefficients.
    pub fn weight_expectation(&self, action: &FiniteAction) -> Vec<Gauss> {
        self.coeffs
            .iter()
            .map(|f| f.iter().zip(action.weights()).map(|(c, w)| c * Complex::new(w.clone(), BigRational::zero())).sum())
            .collect()
    }
}

pub fn matmul(a: &[Vec<Gauss>], b: &[Vec<Gauss>]) -> Vec<Vec<Gauss>> {
    let n = a.len();
    let m = b.first().map(|r| r.len()).unwrap_or(0);
    let mut out = vec![vec![gz(); m]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] = &out[i][j] + &a[i][k] * &bk[j];
            }
        }
    }
    out
}

pub fn conjugate_transpose(a: &[Vec<Gauss>]) -> Vec<Vec<Gauss>> {
    let m = a.first().map(|r| r.len()).unwrap_or(0);
    (0..m).map(|j| a.iter().map(|row| row[j].conj()).collect()).collect()
}

/// A subspace of `ℚ(i)^n` kept in reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<Gauss>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn spanned_by(ambient: usize, vectors: impl IntoIterator<Item = Vec<Gauss>>) -> Self {
        let mut s = Self::new(ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Gauss>] {
        &self.rows
    }

    fn reduce(&self, mut v: Vec<Gauss>) -> Vec<Gauss> {
        for (row, p) in self.rows.iter().zip(&self.pivots) {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x = &*x - &c * r;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Gauss]) -> bool {
        self.reduce(v.to_vec()).iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: Vec<Gauss>) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length");
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = gi(1) / &v[p];
        for x in v.iter_mut() {
            *x = &*x * &inv;
        }
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for (r, x) in row.iter_mut().zip(&v) {
                    *r = &*r - &c * x;
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r.clone());
        }
        s
    }

    pub fn intersection_dim(&self, other: &Subspace) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }
}

/// Subspace of the crossed product spanned by `elements`.
fn element_span(action: &FiniteAction, elements: impl IntoIterator<Item = MatrixElement>) -> Subspace {
    Subspace::spanned_by(action.dimension(), elements.into_iter().map(|e| e.to_vector()))
}

/// Smallest subspace containing `start` closed under products and adjoints.
pub fn generated_algebra(action: &FiniteAction, start: Subspace) -> Subspace {
    let mut space = Subspace::new(action.dimension());
    let mut queue: Vec<Vec<Gauss>> = start.basis().to_vec();
    while let Some(v) = queue.pop() {
        if !space.insert(v) {
            continue;
        }
        let new = MatrixElement::from_vector(action, space.basis().last().expect("just inserted"));
        queue.push(new.adjoint(action).to_vector());
        for b in space.basis().to_vec() {
            let b = MatrixElement::from_vector(action, &b);
            queue.push(new.multiply(&b, action).to_vector());
            queue.push(b.multiply(&new, action).to_vector());
        }
    }
    space
}

pub fn is_closed_algebra(action: &FiniteAction, space: &Subspace) -> bool {
    let basis: Vec<MatrixElement> = space.basis().iter().map(|v| MatrixElement::from_vector(action, v)).collect();
    basis.iter().all(|a| space.contains(&a.adjoint(action).to_vector()))
        && basis.iter().all(|a| basis.iter().all(|b| space.contains(&a.multiply(b, action).to_vector())))
}

fn group_algebra_mul(group: &FiniteGroup, a: &[Gauss], b: &[Gauss]) -> Vec<Gauss> {
    let mut out = vec![gz(); group.order()];
    for (g, ag) in a.iter().enumerate() {
        if ag.is_zero() {
            continue;
        }
        for (h, bh) in b.iter().enumerate() {
            out[group.mul(g, h)] = &out[group.mul(g, h)] + ag * bh;
        }
    }
    out
}

fn unit(group: &FiniteGroup, g: usize) -> Vec<Gauss> {
    (0..group.order()).map(|h| gi((g == h) as i64)).collect()
}

/// Whether `ideal` is a two-sided ideal of the group algebra.
pub fn is_group_ideal(group: &FiniteGroup, ideal: &Subspace) -> bool {
    (0..group.order()).all(|g| {
        let u = unit(group, g);
        ideal.basis().iter().all(|b| ideal.contains(&group_algebra_mul(group, &u, b)) && ideal.contains(&group_algebra_mul(group, b, &u)))
    })
}

/// `span{λ_g − λ_e}`.
pub fn augmentation_ideal(group: &FiniteGroup) -> Result<Subspace, SandboxError> {
    if group.order() == 1 {
        return Err(SandboxError::TrivialGroup);
    }
    let e = unit(group, 0);
    let ideal =
        Subspace::spanned_by(group.order(), (1..group.order()).map(|g| unit(group, g).iter().zip(&e).map(|(a, b)| a - b).collect()));
    debug_assert!(is_group_ideal(group, &ideal));
    Ok(ideal)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntermediateAlgebraReport {
    pub dimension: usize,
    pub crossed_product_dimension: usize,
    pub group_algebra_dimension: usize,
    /// `dim(𝓑 ∩ C(X))`; `1` means only scalars.
    pub intersection_with_functions: usize,
    /// `dim 𝔼(𝓑)`.
    pub expectation_image: usize,
    pub closed_without_completion: bool,
    pub closed: bool,
}

/// `𝓑 = ℂΓ + span{η f η' : η, η' ∈ I, f ∈ C(X)}`, closed up to an algebra.
pub fn build_bi(action: &FiniteAction, ideal: &Subspace) -> Result<(Subspace, IntermediateAlgebraReport), SandboxError> {
    let group = action.group();
    if ideal.ambient() != group.order() {
        return Err(SandboxError::BadGroup("ideal lives in a different group algebra".into()));
    }
    if !is_group_ideal(group, ideal) {
        return Err(SandboxError::NotAnIdeal);
    }
    let etas: Vec<MatrixElement> = ideal.basis().iter().map(|b| MatrixElement::from_group_algebra(action, b)).collect();
    let mut gens: Vec<MatrixElement> = (0..group.order()).map(|g| MatrixElement::group_element(action, g)).collect();
    for x in 0..action.points() {
        let f = MatrixElement::delta(action, x);
        for a in &etas {
            for b in &etas {
                gens.push(a.multiply(&f, action).multiply(b, action));
            }
        }
    }
    let span = element_span(action, gens);
    let closed_without_completion = is_closed_algebra(action, &span);
    let algebra = if closed_without_completion { span } else { generated_algebra(action, span) };
    let report = intermediate_report(action, &algebra, closed_without_completion);
    Ok((algebra, report))
}

fn functions_subspace(action: &FiniteAction) -> Subspace {
    element_span(action, (0..action.points()).map(|x| MatrixElement::delta(action, x)))
}

fn intermediate_report(action: &FiniteAction, algebra: &Subspace, closed_without_completion: bool) -> IntermediateAlgebraReport {
    let expectations =
        Subspace::spanned_by(action.points(), algebra.basis().iter().map(|v| MatrixElement::from_vector(action, v).expectation()));
    IntermediateAlgebraReport {
        dimension: algebra.dim(),
        crossed_product_dimension: action.dimension(),
        group_algebra_dimension: action.group().order(),
        intersection_with_functions: algebra.intersection_dim(&functions_subspace(action)),
        expectation_image: expectations.dim(),
        closed_without_completion,
        closed: is_closed_algebra(action, algebra),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixModelReport {
    pub representation_matches: bool,
    pub group_image_symmetric: bool,
    pub functions_diagonal: bool,
    pub bijective: bool,
    pub samples: usize,
    pub structured: usize,
    pub skipped_members: usize,
    pub all_generate_full: bool,
    pub failures: Vec<String>,
}

impl MatrixModelReport {
    pub fn pass(&self) -> bool {
        self.representation_matches
            && self.group_image_symmetric
            && self.functions_diagonal
            && self.bijective
            && self.all_generate_full
            && self.failures.is_empty()
    }
}

/// `ℤ/2` swapping two points: `C(X) ⋊ ℤ/2 ≅ M₂`, and the copy of the group
/// algebra `{[[z, w], [w, z]]}` has no proper intermediate `*`-subalgebra.
pub fn check_no_intermediate_m2(rng: &mut impl Rng, samples: usize) -> MatrixModelReport {
    let action = FiniteAction::swap_two();
    // π(f) = diag f, π(λ_s) = swap
    let image = |a: &MatrixElement| -> Vec<Vec<Gauss>> {
        let (f0, f1) = (a.coefficient(0), a.coefficient(1));
        vec![vec![f0[0].clone(), f1[0].clone()], vec![f1[1].clone(), f0[1].clone()]]
    };
    let basis: Vec<MatrixElement> =
        (0..4).map(|i| MatrixElement::from_vector(&action, &(0..4).map(|j| gi((i == j) as i64)).collect::<Vec<_>>())).collect();
    let mut representation_matches = true;
    for a in &basis {
        for b in &basis {
            representation_matches &= image(&a.multiply(b, &action)) == matmul(&image(a), &image(b));
        }
        representation_matches &= image(&a.adjoint(&action)) == conjugate_transpose(&image(a));
    }
    let s = MatrixElement::group_element(&action, 1);
    let group_image_symmetric = image(&MatrixElement::one(&action)) == vec![vec![gi(1), gz()], vec![gz(), gi(1)]]
        && image(&s) == vec![vec![gz(), gi(1)], vec![gi(1), gz()]];
    let functions_diagonal = (0..2).all(|x| {
        let m = image(&MatrixElement::delta(&action, x));
        (0..2).all(|i| (0..2).all(|j| m[i][j] == gi((i == j && i == x) as i64)))
    });
    let bijective = Subspace::spanned_by(4, basis.iter().map(|b| image(b).concat())).dim() == 4;

    let copy = element_span(&action, [MatrixElement::one(&action), s.clone()]);
    let mut failures = Vec::new();
    let mut skipped_members = 0;
    let mut test = |m: MatrixElement, label: String| {
        if copy.contains(&m.to_vector()) {
            skipped_members += 1;
            return;
        }
        let mut start = copy.clone();
        start.insert(m.to_vector());
        let algebra = generated_algebra(&action, start);
        if algebra.dim() != 4 {
            failures.push(format!("{label} generates dimension {}", algebra.dim()));
        }
    };
    let structured: Vec<MatrixElement> = vec![
        MatrixElement::delta(&action, 0),
        MatrixElement::delta(&action, 1),
        MatrixElement::function(&action, vec![gi(1), gi(-1)]),
        MatrixElement::delta(&action, 0).multiply(&s, &action),
        MatrixElement::function(&action, vec![Complex::new(BigRational::zero(), BigRational::one()), gz()]).multiply(&s, &action),
    ];
    let structured_count = structured.len();
    for (i, m) in structured.into_iter().enumerate() {
        test(m, format!("structured #{i}"));
    }
    for i in 0..samples {
        let v: Vec<Gauss> = (0..4)
            .map(|_| {
                Complex::new(
                    BigRational::from_integer(rng.gen_range(-3i64..=3).into()),
                    BigRational::from_integer(rng.gen_range(-3i64..=3).into()),
                )
            })
            .collect();
        test(MatrixElement::from_vector(&action, &v), format!("sample #{i}"));
    }
    MatrixModelReport {
        representation_matches,
        group_image_symmetric,
        functions_diagonal,
        bijective,
        samples,
        structured: structured_count,
        skipped_members,
        all_generate_full: failures.is_empty(),
        failures,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgroupComparison {
    pub subgroup: Vec<usize>,
    /// `dim` of the `λ_g`-coefficient space of `C(X) ⋊ Λ`, for `g ≠ e`.
    pub coefficient_dims: Vec<usize>,
    pub distinct: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NotFromSubgroupReport {
    pub dimension: usize,
    /// `dim` of the `λ_g`-coefficient space of `𝓑`, for `g ≠ e`.
    pub coefficient_dims: Vec<usize>,
    pub closed: bool,
    pub comparisons: Vec<SubgroupComparison>,
    pub pass: bool,
}

/// For `I` the functions vanishing on the invariant set `zero_set`, builds
/// `𝓑 = C(X) + I ⋊ Γ` and compares it with `C(X) ⋊ Λ` for every `Λ ≤ Γ`.
pub fn check_not_from_subgroup(action: &FiniteAction, zero_set: &BTreeSet<usize>) -> Result<NotFromSubgroupReport, SandboxError> {
    let points = action.points();
    if zero_set.is_empty() {
        return Err(SandboxError::ImproperIdeal("vanishing on nothing gives all functions".into()));
    }
    if zero_set.len() >= points || zero_set.iter().any(|x| *x >= points) {
        return Err(SandboxError::ImproperIdeal("vanishing everywhere gives zero".into()));
    }
    if !action.is_invariant_subset(zero_set) {
        return Err(SandboxError::NotInvariant);
    }
    let group = action.group();
    let mut gens: Vec<MatrixElement> = (0..points).map(|x| MatrixElement::delta(action, x)).collect();
    for g in 1..group.order() {
        for x in (0..points).filter(|x| !zero_set.contains(x)) {
            gens.push(MatrixElement::delta(action, x).multiply(&MatrixElement::group_element(action, g), action));
        }
    }
    let b = element_span(action, gens);
    let coefficient_space = |space: &Subspace, g: usize| -> usize {
        Subspace::spanned_by(points, space.basis().iter().map(|v| MatrixElement::from_vector(action, v).coefficient(g).to_vec())).dim()
    };
    let coefficient_dims: Vec<usize> = (1..group.order()).map(|g| coefficient_space(&b, g)).collect();
    let comparisons: Vec<SubgroupComparison> = group
        .subgroups()
        .into_iter()
        .map(|lam| {
            let mut gens = Vec::new();
            for g in &lam {
                for x in 0..points {
                    gens.push(MatrixElement::delta(action, x).multiply(&MatrixElement::group_element(action, *g), action));
                }
            }
            let other = element_span(action, gens);
            let dims: Vec<usize> = (1..group.order()).map(|g| coefficient_space(&other, g)).collect();
            SubgroupComparison { distinct: other != b, coefficient_dims: dims, subgroup: lam }
        })
        .collect();
    let closed = is_closed_algebra(action, &b);
    let pass = closed && comparisons.iter().all(|c| c.distinct);
    Ok(NotFromSubgroupReport { dimension: b.dim(), coefficient_dims, closed, comparisons, pass })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub dimension: usize,
    pub is_ideal: bool,
    pub proper: bool,
    /// `𝔼_N(I) ⊆ J`, the reason a proper `J` extends to a proper ideal.
    pub expectation_lands_in_j: bool,
}

/// `I_J = span{η λ_g : η ∈ J, g ∈ Γ}` for `J` an ideal of `ℂN`, `N ≤ Γ`;
/// vectors of `J` are indexed by elements of `Γ` and supported on `N`.
pub fn extend_ideal(group: &FiniteGroup, subgroup: &[usize], j: &Subspace) -> Result<(Subspace, ExtensionReport), SandboxError> {
    let n: BTreeSet<usize> = subgroup.iter().copied().collect();
    if group.generate(subgroup.iter().copied()).into_iter().collect::<BTreeSet<_>>() != n {
        return Err(SandboxError::BadGroup("not a subgroup".into()));
    }
    if j.ambient() != group.order() {
        return Err(SandboxError::BadGroup("ideal lives in a different group algebra".into()));
    }
    if j.basis().iter().any(|v| v.iter().enumerate().any(|(g, c)| !c.is_zero() && !n.contains(&g))) {
        return Err(SandboxError::BadGroup("ideal is not supported on the subgroup".into()));
    }
    let j_is_ideal = n.iter().all(|g| {
        let u = unit(group, *g);
        j.basis().iter().all(|b| j.contains(&group_algebra_mul(group, &u, b)) && j.contains(&group_algebra_mul(group, b, &u)))
    });
    if !j_is_ideal {
        return Err(SandboxError::NotAnIdeal);
    }
    // conjugation is trivial in an abelian group, so every J is invariant
    let ideal = Subspace::spanned_by(
        group.order(),
        j.basis().iter().flat_map(|b| (0..group.order()).map(move |g| group_algebra_mul(group, b, &unit(group, g)))),
    );
    let restrict =
        |v: &[Gauss]| -> Vec<Gauss> { v.iter().enumerate().map(|(g, c)| if n.contains(&g) { c.clone() } else { gz() }).collect() };
    let expectation_lands_in_j = ideal.basis().iter().all(|v| j.contains(&restrict(v)));
    let report = ExtensionReport {
        dimension: ideal.dim(),
        is_ideal: is_group_ideal(group, &ideal),
        proper: !ideal.contains(&unit(group, 0)),
        expectation_lands_in_j,
    };
    Ok((ideal, report))
}
