//! Torus-equivariant coherent sheaves presented by chart bases with
//! character weights and monomial transition matrices, and their Čech
//! cohomology computed character by character over exact rationals.
//!
//! Every sheaf in scope is equivariant for the dense torus, so its Čech
//! complex splits into finite complexes indexed by characters m ∈ ℤⁿ: a
//! chart-tuple basis element contributes to the degree-m piece exactly when
//! the required monomial is regular on the tuple's overlap. Each graded
//! piece is handled by exact dense linear algebra; dimensions are summed
//! over a character box whose stability is confirmed by doubling.
//!
//! Conventions, pinned once and exercised by the coboundary tests:
//! tuples are strictly increasing; values of a cochain live in the frame of
//! the tuple's first chart; evaluation on unsorted tuples goes through the
//! permutation sign; gradings live in the global lattice ℤⁿ.

use crate::linalg::{rank_kernel_image, solve, Rat, RatMatrix};
use crate::toric::{Fan, FanError, ToricDivisor, ToricMorphism};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SheafError {
    #[error("character box too small")]
    BoxTooSmall,
    #[error("transition cocycle condition fails on charts ({0}, {1}, {2})")]
    CocycleCondition(usize, usize, usize),
    #[error("transition entry ({0},{1})->({2},{3}) is not homogeneous")]
    NotHomogeneous(usize, usize, usize, usize),
    #[error("transition ({0},{1}) is not invertible on the overlap")]
    NotInvertible(usize, usize),
    #[error("not a cocycle: coboundary is nonzero on tuple {0:?}")]
    NotACocycle(Vec<usize>),
    #[error("cochain value on tuple {0:?} is not regular on the overlap")]
    NotRegular(Vec<usize>),
    #[error("sheaf map does not commute with transitions on pair ({0}, {1})")]
    NonCommuting(usize, usize),
    #[error("wedge degree {0} out of range 0..={1}")]
    WedgeOutOfRange(usize, usize),
    #[error("pullback source does not match the morphism target")]
    PullbackMismatch,
    #[error("cohomology in degree {0} beyond the variety dimension")]
    UnexpectedCohomology(usize),
    #[error(transparent)]
    Fan(#[from] FanError),
}

// ---------------------------------------------------------------------------
// Laurent polynomials
// ---------------------------------------------------------------------------

/// A Laurent polynomial in the torus characters: a finite map from exponent
/// vectors in ℤⁿ to nonzero rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, Rat>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], Rat::one())
    }

    pub fn monomial(exp: Vec<i64>, coeff: Rat) -> Self {
        let nvars = exp.len();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        LaurentPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rat)> {
        self.terms.iter()
    }

    /// The unique term of a monomial, if this is one.
    pub fn single_term(&self) -> Option<(&Vec<i64>, &Rat)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn coeff(&self, exp: &[i64]) -> Rat {
        self.terms.get(exp).cloned().unwrap_or_else(Rat::zero)
    }

    fn insert(&mut self, exp: Vec<i64>, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exp: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(exp, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let exp = e
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                format!("{c}*x^({exp})")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

type LMatrix = Vec<Vec<LaurentPoly>>;

fn lmat_identity(rank: usize, nvars: usize) -> LMatrix {
    (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| {
                    if i == j {
                        LaurentPoly::one(nvars)
                    } else {
                        LaurentPoly::zero(nvars)
                    }
                })
                .collect()
        })
        .collect()
}

fn lmat_mul(a: &LMatrix, b: &LMatrix) -> LMatrix {
    let rows = a.len();
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    let nvars = a
        .first()
        .and_then(|r| r.first())
        .map_or(0, |p| p.nvars());
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    let mut acc = LaurentPoly::zero(nvars);
                    for k in 0..inner {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            acc = acc.add(&a[i][k].mul(&b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn lmat_vec(a: &LMatrix, v: &[LaurentPoly]) -> Vec<LaurentPoly> {
    let nvars = v.first().map_or(0, |p| p.nvars());
    a.iter()
        .map(|row| {
            let mut acc = LaurentPoly::zero(nvars.max(row.first().map_or(0, |p| p.nvars())));
            for (entry, x) in row.iter().zip(v) {
                if !entry.is_zero() && !x.is_zero() {
                    acc = acc.add(&entry.mul(x));
                }
            }
            acc
        })
        .collect()
}

/// Determinant by permutation expansion; ranks stay ≤ 3 here. The variable
/// count is passed in so the 0×0 case keeps the right exponent length.
fn lmat_det(a: &LMatrix, nvars: usize) -> LaurentPoly {
    let n = a.len();
    match n {
        0 => LaurentPoly::one(nvars),
        1 => a[0][0].clone(),
        2 => a[0][0].mul(&a[1][1]).sub(&a[0][1].mul(&a[1][0])),
        3 => {
            let mut acc = LaurentPoly::zero(nvars);
            let perms: [([usize; 3], i64); 6] = [
                ([0, 1, 2], 1),
                ([1, 2, 0], 1),
                ([2, 0, 1], 1),
                ([0, 2, 1], -1),
                ([2, 1, 0], -1),
                ([1, 0, 2], -1),
            ];
            for (p, sgn) in perms {
                let t = a[0][p[0]].mul(&a[1][p[1]]).mul(&a[2][p[2]]);
                acc = if sgn == 1 { acc.add(&t) } else { acc.sub(&t) };
            }
            acc
        }
        _ => unreachable!("rank capped at 3"),
    }
}

/// Increasing k-subsets of 0..n in lexicographic order; this fixes the basis
/// order of wedge powers everywhere.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Sign of the shuffle merging two disjoint increasing subsets, with `None`
/// when they intersect. Used by the wedge product.
pub fn shuffle_sign(a: &[usize], b: &[usize]) -> Option<(i64, Vec<usize>)> {
    let mut merged: Vec<usize> = a.iter().chain(b).copied().collect();
    // count inversions between the two blocks
    let mut inversions = 0;
    for &x in a {
        for &y in b {
            if x == y {
                return None;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    merged.sort_unstable();
    Some((if inversions % 2 == 0 { 1 } else { -1 }, merged))
}

// ---------------------------------------------------------------------------
// Equivariant sheaves
// ---------------------------------------------------------------------------

/// A torus-equivariant locally free sheaf presented by chart-local frames:
/// per maximal cone a list of basis labels with character weights, and for
/// every ordered pair of charts a homogeneous monomial transition matrix.
/// `transition(to, from)[β][α]` is the coefficient of the `to`-frame element
/// β in the expansion of the `from`-frame element α; homogeneity means every
/// exponent in it equals `weight(from, α) − weight(to, β)`.
#[derive(Clone)]
pub struct EquivariantSheaf {
    pub fan: Fan,
    pub rank: usize,
    pub labels: Vec<Vec<String>>,
    pub weights: Vec<Vec<Vec<i64>>>,
    trans: BTreeMap<(usize, usize), LMatrix>,
}

impl fmt::Debug for EquivariantSheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "EquivariantSheaf(rank {}, {} charts)",
            self.rank,
            self.weights.len()
        )
    }
}

impl EquivariantSheaf {
    fn n_charts(&self) -> usize {
        self.fan.max_cones().len()
    }

    pub fn transition_matrix(&self, to: usize, from: usize) -> LMatrix {
        if to == from {
            lmat_identity(self.rank, self.fan.dim())
        } else {
            self.trans[&(to, from)].clone()
        }
    }

    /// Re-expresses a coefficient vector from one chart frame in another.
    pub fn apply_transition(&self, to: usize, from: usize, v: &[LaurentPoly]) -> Vec<LaurentPoly> {
        if to == from {
            v.to_vec()
        } else {
            lmat_vec(&self.trans[&(to, from)], v)
        }
    }

    /// Checks the cocycle condition on all chart triples, homogeneity of all
    /// transition entries, and invertibility over the overlap (monomial
    /// determinant). Constructors call this; it is cheap at these sizes.
    pub fn verify(&self) -> Result<(), SheafError> {
        let nc = self.n_charts();
        for ((to, from), m) in &self.trans {
            for (beta, row) in m.iter().enumerate() {
                for (alpha, entry) in row.iter().enumerate() {
                    let expect: Vec<i64> = self.weights[*from][alpha]
                        .iter()
                        .zip(&self.weights[*to][beta])
                        .map(|(a, b)| a - b)
                        .collect();
                    for (e, _) in entry.terms() {
                        if e != &expect {
                            return Err(SheafError::NotHomogeneous(*from, alpha, *to, beta));
                        }
                    }
                }
            }
            if lmat_det(m, self.fan.dim()).single_term().is_none() {
                return Err(SheafError::NotInvertible(*to, *from));
            }
        }
        for a in 0..nc {
            for b in 0..nc {
                for c in 0..nc {
                    if a == b || b == c || a == c {
                        continue;
                    }
                    // T_{c←a} = T_{c←b}·T_{b←a}
                    let lhs = self.transition_matrix(c, a);
                    let rhs = lmat_mul(&self.transition_matrix(c, b), &self.transition_matrix(b, a));
                    if lhs != rhs {
                        return Err(SheafError::CocycleCondition(a, b, c));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The structure sheaf: rank 1, zero weights, identity transitions.
pub fn structure_sheaf(fan: &Fan) -> EquivariantSheaf {
    let n = fan.dim();
    let nc = fan.max_cones().len();
    let mut trans = BTreeMap::new();
    for to in 0..nc {
        for from in 0..nc {
            if to != from {
                trans.insert((to, from), vec![vec![LaurentPoly::one(n)]]);
            }
        }
    }
    let s = EquivariantSheaf {
        fan: fan.clone(),
        rank: 1,
        labels: vec![vec!["1".to_string()]; nc],
        weights: vec![vec![vec![0; n]]; nc],
        trans,
    };
    debug_assert!(s.verify().is_ok());
    s
}

/// The line bundle of a torus-invariant divisor D = Σ aᵨDᵨ. On the chart of
/// a cone σ the frame is x^{u_σ} with ⟨u_σ, vᵨ⟩ = −aᵨ for each ray of σ,
/// and the transitions are the monomials x^{u_from − u_to}.
pub fn line_bundle(fan: &Fan, d: &ToricDivisor) -> EquivariantSheaf {
    let n = fan.dim();
    let cones = fan.max_cones();
    let nc = cones.len();
    let mut weights: Vec<Vec<Vec<i64>>> = Vec::with_capacity(nc);
    for cone in cones {
        let basis = fan.chart_basis(cone);
        let mut u = vec![0i64; n];
        for (k, &ray) in cone.iter().enumerate() {
            for (t, x) in basis[k].iter().enumerate() {
                u[t] += -d.0[ray] * x;
            }
        }
        weights.push(vec![u]);
    }
    let mut trans = BTreeMap::new();
    for to in 0..nc {
        for from in 0..nc {
            if to == from {
                continue;
            }
            let exp: Vec<i64> = weights[from][0]
                .iter()
                .zip(&weights[to][0])
                .map(|(a, b)| a - b)
                .collect();
            trans.insert((to, from), vec![vec![LaurentPoly::monomial(exp, Rat::one())]]);
        }
    }
    let s = EquivariantSheaf {
        fan: fan.clone(),
        rank: 1,
        labels: vec![vec!["s".to_string()]; nc],
        weights,
        trans,
    };
    debug_assert!(s.verify().is_ok());
    s
}

/// The cotangent sheaf. Per chart the frame is dx₁…dx_n for the chart
/// coordinates xᵢ = x^{mᵢ(σ)}, the weight of dxᵢ is mᵢ(σ), and transitions
/// are the Jacobians of the monomial chart changes:
/// d(x^c) = Σⱼ ⟨c, vⱼ(τ)⟩ · x^{c − mⱼ(τ)} · dxⱼ(τ).
pub fn cotangent(fan: &Fan) -> EquivariantSheaf {
    let n = fan.dim();
    let cones = fan.max_cones();
    let nc = cones.len();
    let charts: Vec<Vec<Vec<i64>>> = cones.iter().map(|c| fan.chart_basis(c)).collect();
    let labels: Vec<Vec<String>> = (0..nc)
        .map(|_| (1..=n).map(|i| format!("dx{i}")).collect())
        .collect();
    let mut trans = BTreeMap::new();
    for to in 0..nc {
        for from in 0..nc {
            if to == from {
                continue;
            }
            let mut m: LMatrix = vec![vec![LaurentPoly::zero(n); n]; n];
            for alpha in 0..n {
                let c = &charts[from][alpha];
                for (j, row) in m.iter_mut().enumerate() {
                    let vj = &fan.rays()[cones[to][j]];
                    let coeff: i64 = c.iter().zip(vj).map(|(a, b)| a * b).sum();
                    if coeff != 0 {
                        let exp: Vec<i64> =
                            c.iter().zip(&charts[to][j]).map(|(a, b)| a - b).collect();
                        row[alpha] =
                            LaurentPoly::monomial(exp, Rat::from_integer(coeff.into()));
                    }
                }
            }
            trans.insert((to, from), m);
        }
    }
    let s = EquivariantSheaf {
        fan: fan.clone(),
        rank: n,
        labels,
        weights: charts,
        trans,
    };
    debug_assert!(s.verify().is_ok());
    s
}

/// The j-th wedge power: basis indexed by increasing j-subsets, weights are
/// subset sums, transitions are the j×j minors.
pub fn wedge_power(s: &EquivariantSheaf, j: usize) -> Result<EquivariantSheaf, SheafError> {
    if j > s.rank {
        return Err(SheafError::WedgeOutOfRange(j, s.rank));
    }
    let n = s.fan.dim();
    let nc = s.n_charts();
    let subs = subsets(s.rank, j);
    let weights: Vec<Vec<Vec<i64>>> = (0..nc)
        .map(|chart| {
            subs.iter()
                .map(|sub| {
                    let mut w = vec![0i64; n];
                    for &i in sub {
                        for (t, x) in s.weights[chart][i].iter().enumerate() {
                            w[t] += x;
                        }
                    }
                    w
                })
                .collect()
        })
        .collect();
    let labels: Vec<Vec<String>> = (0..nc)
        .map(|chart| {
            subs.iter()
                .map(|sub| {
                    if sub.is_empty() {
                        "1".to_string()
                    } else {
                        sub.iter()
                            .map(|&i| s.labels[chart][i].clone())
                            .collect::<Vec<_>>()
                            .join("∧")
                    }
                })
                .collect()
        })
        .collect();
    let mut trans = BTreeMap::new();
    for (&(to, from), m) in &s.trans {
        let mut w: LMatrix = vec![vec![LaurentPoly::zero(n); subs.len()]; subs.len()];
        for (bi, brow) in subs.iter().enumerate() {
            for (ai, acol) in subs.iter().enumerate() {
                let minor: LMatrix = brow
                    .iter()
                    .map(|&r| acol.iter().map(|&c| m[r][c].clone()).collect())
                    .collect();
                w[bi][ai] = lmat_det(&minor, n);
            }
        }
        trans.insert((to, from), w);
    }
    let out = EquivariantSheaf {
        fan: s.fan.clone(),
        rank: subs.len(),
        labels,
        weights,
        trans,
    };
    out.verify()?;
    Ok(out)
}

/// Pullback along a fan refinement with identity lattice map. Each source
/// chart copies the frame of the target chart containing it; since all
/// functions live in the global character lattice, the transition
/// expressions carry over verbatim (restricted to smaller overlaps), and
/// charts inside a common target chart glue by the identity.
pub fn pullback(
    m: &ToricMorphism,
    s: &EquivariantSheaf,
) -> Result<EquivariantSheaf, SheafError> {
    if s.fan != m.target {
        return Err(SheafError::PullbackMismatch);
    }
    let n = m.source.dim();
    let nc = m.source.max_cones().len();
    let weights: Vec<Vec<Vec<i64>>> = (0..nc)
        .map(|i| s.weights[m.cone_map[i]].clone())
        .collect();
    let labels: Vec<Vec<String>> = (0..nc)
        .map(|i| s.labels[m.cone_map[i]].clone())
        .collect();
    let mut trans = BTreeMap::new();
    for to in 0..nc {
        for from in 0..nc {
            if to == from {
                continue;
            }
            let (tt, tf) = (m.cone_map[to], m.cone_map[from]);
            let mat = if tt == tf {
                lmat_identity(s.rank, n)
            } else {
                s.trans[&(tt, tf)].clone()
            };
            trans.insert((to, from), mat);
        }
    }
    let out = EquivariantSheaf {
        fan: m.source.clone(),
        rank: s.rank,
        labels,
        weights,
        trans,
    };
    out.verify()?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// Čech cochains
// ---------------------------------------------------------------------------

/// A Čech cochain of fixed degree p: for each strictly increasing
/// (p+1)-tuple of charts, a coefficient vector of Laurent polynomials in the
/// frame of the tuple's first chart. Missing tuples are zero.
#[derive(Clone, Debug)]
pub struct CechCochain {
    pub degree: usize,
    values: BTreeMap<Vec<usize>, Vec<LaurentPoly>>,
}

impl CechCochain {
    pub fn new(degree: usize) -> Self {
        CechCochain {
            degree,
            values: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values
            .values()
            .all(|v| v.iter().all(|p| p.is_zero()))
    }

    pub fn get(&self, tuple: &[usize]) -> Option<&Vec<LaurentPoly>> {
        self.values.get(tuple)
    }

    pub fn tuples(&self) -> impl Iterator<Item = (&Vec<usize>, &Vec<LaurentPoly>)> {
        self.values.iter()
    }

    /// Adds a value on an already-increasing tuple, in the frame of its
    /// first chart, without sign or frame adjustment.
    pub fn add_value(&mut self, tuple: Vec<usize>, value: Vec<LaurentPoly>, rank: usize, nvars: usize) {
        let slot = self
            .values
            .entry(tuple)
            .or_insert_with(|| vec![LaurentPoly::zero(nvars); rank]);
        for (s, v) in slot.iter_mut().zip(value) {
            *s = s.add(&v);
        }
    }

    /// Sets the value on a tuple given in arbitrary order, `value` expressed
    /// in the frame of the first *listed* chart. The entry is stored on the
    /// sorted tuple after applying the permutation sign and reframing.
    pub fn set(
        &mut self,
        sheaf: &EquivariantSheaf,
        tuple: &[usize],
        value: Vec<LaurentPoly>,
    ) -> Result<(), SheafError> {
        assert_eq!(tuple.len(), self.degree + 1, "tuple length vs degree");
        assert_eq!(value.len(), sheaf.rank);
        let mut sorted: Vec<usize> = tuple.to_vec();
        sorted.sort_unstable();
        debug_assert!(sorted.windows(2).all(|w| w[0] != w[1]), "repeated chart");
        // permutation sign of the sort
        let mut sign = 1i64;
        let mut perm: Vec<usize> = tuple.to_vec();
        for i in 0..perm.len() {
            for j in (i + 1)..perm.len() {
                if perm[i] > perm[j] {
                    perm.swap(i, j);
                    sign = -sign;
                }
            }
        }
        let reframed = sheaf.apply_transition(sorted[0], tuple[0], &value);
        let signed: Vec<LaurentPoly> = reframed
            .iter()
            .map(|p| {
                if sign == 1 {
                    p.clone()
                } else {
                    p.neg()
                }
            })
            .collect();
        self.add_value(sorted, signed, sheaf.rank, sheaf.fan.dim());
        Ok(())
    }

    pub fn scale(&self, k: &Rat) -> CechCochain {
        CechCochain {
            degree: self.degree,
            values: self
                .values
                .iter()
                .map(|(t, v)| (t.clone(), v.iter().map(|p| p.scale(k)).collect()))
                .collect(),
        }
    }

    pub fn add(&self, other: &CechCochain) -> CechCochain {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (t, v) in &other.values {
            if let Some(slot) = out.values.get_mut(t) {
                for (s, x) in slot.iter_mut().zip(v) {
                    *s = s.add(x);
                }
            } else {
                out.values.insert(t.clone(), v.clone());
            }
        }
        out
    }
}

/// The Čech differential: (dc)(σ₀…σ_{p+1}) = Σ_k (−1)^k c(…σ̂_k…), the k = 0
/// term reframed from σ₁ into σ₀ through the transition matrix.
pub fn differential(sheaf: &EquivariantSheaf, c: &CechCochain) -> CechCochain {
    let nc = sheaf.n_charts();
    let n = sheaf.fan.dim();
    let mut out = CechCochain::new(c.degree + 1);
    for (tuple, value) in &c.values {
        if value.iter().all(|p| p.is_zero()) {
            continue;
        }
        for extra in 0..nc {
            if tuple.contains(&extra) {
                continue;
            }
            let mut big: Vec<usize> = tuple.clone();
            big.push(extra);
            big.sort_unstable();
            let k = big.iter().position(|&x| x == extra).unwrap();
            let signed: Vec<LaurentPoly> = if k == 0 {
                // face misses the new first chart: reframe σ₁ → σ₀
                sheaf.apply_transition(extra, tuple[0], value)
            } else if k % 2 == 0 {
                value.clone()
            } else {
                value.iter().map(|p| p.neg()).collect()
            };
            out.add_value(big, signed, sheaf.rank, n);
        }
    }
    // drop zero entries for cleanliness
    out.values.retain(|_, v| v.iter().any(|p| !p.is_zero()));
    out
}

// ---------------------------------------------------------------------------
// Character-graded complexes
// ---------------------------------------------------------------------------

/// The chart tuples of the cover, by degree, with the rays of each tuple's
/// common face (the intersection of the cones' ray sets).
pub struct Cover {
    /// tuples[p] lists the strictly increasing (p+1)-tuples.
    pub tuples: Vec<Vec<Vec<usize>>>,
    /// common_rays[p][t] are the ray indices of the common face.
    pub common_rays: Vec<Vec<Vec<usize>>>,
}

impl Cover {
    pub fn new(fan: &Fan) -> Cover {
        let nc = fan.max_cones().len();
        let mut tuples = Vec::new();
        let mut common_rays = Vec::new();
        for p in 0..nc {
            let ts = subsets(nc, p + 1);
            let crs: Vec<Vec<usize>> = ts
                .iter()
                .map(|t| {
                    let mut rays: Vec<usize> = fan.max_cones()[t[0]].clone();
                    for &chart in &t[1..] {
                        rays.retain(|r| fan.max_cones()[chart].contains(r));
                    }
                    rays
                })
                .collect();
            tuples.push(ts);
            common_rays.push(crs);
        }
        Cover {
            tuples,
            common_rays,
        }
    }

    fn tuple_index(&self, p: usize, tuple: &[usize]) -> Option<usize> {
        self.tuples[p].iter().position(|t| t == tuple)
    }
}

fn monomial_regular(fan: &Fan, rays: &[usize], exp: &[i64]) -> bool {
    rays.iter().all(|&r| {
        let pairing: i64 = exp.iter().zip(&fan.rays()[r]).map(|(a, b)| a * b).sum();
        pairing >= 0
    })
}

/// The finite complex of the degree-m graded piece: a basis element is a
/// pair (tuple, frame index α) whose section x^{m − w(σ₀,α)} is regular on
/// the tuple's overlap.
pub struct CharComplex {
    pub basis: Vec<Vec<(usize, usize)>>,
    pub mats: Vec<RatMatrix>,
}

impl CharComplex {
    pub fn build(sheaf: &EquivariantSheaf, cover: &Cover, m: &[i64]) -> CharComplex {
        let nc = sheaf.n_charts();
        let fan = &sheaf.fan;
        let mut basis: Vec<Vec<(usize, usize)>> = Vec::with_capacity(nc);
        for p in 0..nc {
            let mut list = Vec::new();
            for (ti, tuple) in cover.tuples[p].iter().enumerate() {
                let rays = &cover.common_rays[p][ti];
                for alpha in 0..sheaf.rank {
                    let w = &sheaf.weights[tuple[0]][alpha];
                    let exp: Vec<i64> = m.iter().zip(w).map(|(a, b)| a - b).collect();
                    if monomial_regular(fan, rays, &exp) {
                        list.push((ti, alpha));
                    }
                }
            }
            basis.push(list);
        }
        let mut mats = Vec::with_capacity(nc);
        for p in 0..nc {
            let rows = if p + 1 < nc { basis[p + 1].len() } else { 0 };
            let cols = basis[p].len();
            let mut mat = RatMatrix::zeros(rows, cols);
            if rows == 0 || cols == 0 {
                mats.push(mat);
                continue;
            }
            let index_of: BTreeMap<(usize, usize), usize> = basis[p + 1]
                .iter()
                .enumerate()
                .map(|(i, &k)| (k, i))
                .collect();
            for (col, &(ti, alpha)) in basis[p].iter().enumerate() {
                let tuple = &cover.tuples[p][ti];
                for extra in 0..nc {
                    if tuple.contains(&extra) {
                        continue;
                    }
                    let mut big = tuple.clone();
                    big.push(extra);
                    big.sort_unstable();
                    let k = big.iter().position(|&x| x == extra).unwrap();
                    let bi = cover
                        .tuple_index(p + 1, &big)
                        .expect("tuple enumeration is complete");
                    if k == 0 {
                        // reframe σ₁ = tuple[0] into the new first chart
                        let t = sheaf.transition_matrix(extra, tuple[0]);
                        for (beta, trow) in t.iter().enumerate() {
                            if let Some((_, q)) = trow[alpha].single_term() {
                                if let Some(&row) = index_of.get(&(bi, beta)) {
                                    mat[(row, col)] += q.clone();
                                } else {
                                    debug_assert!(
                                        q.is_zero(),
                                        "image of a regular section must be regular"
                                    );
                                }
                            }
                        }
                    } else {
                        let sign = if k % 2 == 0 { 1i64 } else { -1 };
                        let row = index_of[&(bi, alpha)];
                        mat[(row, col)] += Rat::from_integer(sign.into());
                    }
                }
            }
            mats.push(mat);
        }
        CharComplex { basis, mats }
    }

    /// Cohomology at each degree: dimension plus chosen cocycle
    /// representative vectors (kernel columns independent modulo the image).
    pub fn cohomology(&self) -> Vec<(usize, Vec<Vec<Rat>>)> {
        let nc = self.basis.len();
        let mut out = Vec::with_capacity(nc);
        for p in 0..nc {
            let rki = rank_kernel_image(&self.mats[p]);
            let (reps, dim) = if p == 0 {
                let reps: Vec<Vec<Rat>> = (0..rki.kernel.cols())
                    .map(|j| rki.kernel.column(j))
                    .collect();
                let d = reps.len();
                (reps, d)
            } else {
                let im = rank_kernel_image(&self.mats[p - 1]).image;
                let chosen = crate::linalg::extend_independent(&im, &rki.kernel);
                let reps: Vec<Vec<Rat>> =
                    chosen.iter().map(|&j| rki.kernel.column(j)).collect();
                let d = reps.len();
                (reps, d)
            };
            out.push((dim, reps));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Cohomology driver
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct CechOpts {
    /// Character box radius; `None` picks the documented default.
    pub box_radius: Option<i64>,
    pub threads: usize,
}

impl Default for CechOpts {
    fn default() -> Self {
        CechOpts {
            box_radius: None,
            threads: 1,
        }
    }
}

/// A cohomology basis class: a character together with an explicit cocycle.
#[derive(Clone, Debug)]
pub struct HClass {
    pub character: Vec<i64>,
    pub cochain: CechCochain,
}

/// Čech cohomology of an equivariant sheaf: dimensions per degree 0..=dim,
/// explicit bases of cocycles per contributing character, and the box used.
#[derive(Clone, Debug)]
pub struct CohomologyResult {
    pub dims: Vec<usize>,
    pub box_radius: i64,
    /// Dimensions were re-checked on the doubled box.
    pub stable: bool,
    pub classes: Vec<Vec<HClass>>,
}

/// Default box radius: max sup-norm of the chart weights, plus dim + 1 per
/// axis. Overridable through [`CechOpts`].
pub fn default_character_box(s: &EquivariantSheaf) -> i64 {
    let mut w = 0i64;
    for chart in &s.weights {
        for weight in chart {
            for &x in weight {
                w = w.max(x.abs());
            }
        }
    }
    w + s.fan.dim() as i64 + 1
}

fn box_characters(dim: usize, radius: i64) -> Vec<Vec<i64>> {
    match dim {
        0 => vec![vec![]],
        1 => (-radius..=radius).map(|x| vec![x]).collect(),
        2 => {
            let mut v = Vec::new();
            for x in -radius..=radius {
                for y in -radius..=radius {
                    v.push(vec![x, y]);
                }
            }
            v
        }
        3 => {
            let mut v = Vec::new();
            for x in -radius..=radius {
                for y in -radius..=radius {
                    for z in -radius..=radius {
                        v.push(vec![x, y, z]);
                    }
                }
            }
            v
        }
        _ => unreachable!(),
    }
}

/// Runs `f` over the characters, optionally on several threads; results come
/// back in input order, so the outcome is deterministic regardless of the
/// schedule.
fn map_characters<T: Send>(
    chars: &[Vec<i64>],
    threads: usize,
    f: impl Fn(&[i64]) -> T + Sync,
) -> Vec<T> {
    if threads <= 1 || chars.len() < 2 {
        return chars.iter().map(|m| f(m)).collect();
    }
    let chunk = chars.len().div_ceil(threads);
    let mut out: Vec<Option<T>> = Vec::new();
    out.resize_with(chars.len(), || None);
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (ci, slice) in chars.chunks(chunk).enumerate() {
            let f = &f;
            handles.push((
                ci,
                scope.spawn(move || slice.iter().map(|m| f(m)).collect::<Vec<T>>()),
            ));
        }
        for (ci, h) in handles {
            let res = h.join().expect("character worker panicked");
            for (k, r) in res.into_iter().enumerate() {
                out[ci * chunk + k] = Some(r);
            }
        }
    });
    out.into_iter().map(|x| x.expect("filled")).collect()
}

fn dims_over_box(
    sheaf: &EquivariantSheaf,
    cover: &Cover,
    radius: i64,
    threads: usize,
) -> Vec<usize> {
    let chars = box_characters(sheaf.fan.dim(), radius);
    let nc = sheaf.n_charts();
    let per_char = map_characters(&chars, threads, |m| {
        let cc = CharComplex::build(sheaf, cover, m);
        cc.cohomology().iter().map(|(d, _)| *d).collect::<Vec<_>>()
    });
    let mut dims = vec![0usize; nc];
    for d in per_char {
        for (i, x) in d.into_iter().enumerate() {
            dims[i] += x;
        }
    }
    dims
}

/// Character-by-character Čech cohomology with explicit cocycle bases.
/// Dimensions are recomputed on the doubled box; disagreement is an error
/// ("character box too small"), agreement is recorded in `stable`.
pub fn cech_cohomology(
    sheaf: &EquivariantSheaf,
    opts: &CechOpts,
) -> Result<CohomologyResult, SheafError> {
    let cover = Cover::new(&sheaf.fan);
    let radius = opts.box_radius.unwrap_or_else(|| default_character_box(sheaf));
    let n = sheaf.fan.dim();
    let nc = sheaf.n_charts();

    let chars = box_characters(n, radius);
    let per_char = map_characters(&chars, opts.threads, |m| {
        let cc = CharComplex::build(sheaf, &cover, m);
        let coh = cc.cohomology();
        (cc, coh)
    });

    let mut dims = vec![0usize; nc];
    let mut classes: Vec<Vec<HClass>> = vec![Vec::new(); nc];
    for (m, (cc, coh)) in chars.iter().zip(per_char.iter()) {
        for (p, (d, reps)) in coh.iter().enumerate() {
            dims[p] += d;
            for rep in reps {
                let mut cochain = CechCochain::new(p);
                for (coord, &(ti, alpha)) in rep.iter().zip(&cc.basis[p]) {
                    if coord.is_zero() {
                        continue;
                    }
                    let tuple = cover.tuples[p][ti].clone();
                    let w = &sheaf.weights[tuple[0]][alpha];
                    let exp: Vec<i64> = m.iter().zip(w).map(|(a, b)| a - b).collect();
                    let mut value = vec![LaurentPoly::zero(n); sheaf.rank];
                    value[alpha] = LaurentPoly::monomial(exp, coord.clone());
                    cochain.add_value(tuple, value, sheaf.rank, n);
                }
                classes[p].push(HClass {
                    character: m.clone(),
                    cochain,
                });
            }
        }
    }

    let doubled = dims_over_box(sheaf, &cover, radius * 2, opts.threads);
    if doubled != dims {
        return Err(SheafError::BoxTooSmall);
    }
    for (p, &d) in dims.iter().enumerate() {
        if p > n && d != 0 {
            return Err(SheafError::UnexpectedCohomology(p));
        }
    }
    dims.truncate(n + 1);
    classes.truncate(n + 1);
    Ok(CohomologyResult {
        dims,
        box_radius: radius,
        stable: true,
        classes,
    })
}

/// The character of each graded component of a cochain: exponent plus frame
/// weight. Errors if a single tuple value mixes nothing — mixing characters
/// is fine, they are split.
fn cochain_characters(sheaf: &EquivariantSheaf, c: &CechCochain) -> Vec<Vec<i64>> {
    let mut set: BTreeMap<Vec<i64>, ()> = BTreeMap::new();
    for (tuple, value) in c.tuples() {
        for (alpha, poly) in value.iter().enumerate() {
            let w = &sheaf.weights[tuple[0]][alpha];
            for (e, _) in poly.terms() {
                let m: Vec<i64> = e.iter().zip(w).map(|(a, b)| a + b).collect();
                set.insert(m, ());
            }
        }
    }
    set.into_keys().collect()
}

/// Coordinates of a cocycle's class in the basis of a [`CohomologyResult`].
/// The cochain is checked to be a cocycle symbolically first; the error
/// names the nonzero coboundary component.
pub fn cocycle_class(
    sheaf: &EquivariantSheaf,
    c: &CechCochain,
    result: &CohomologyResult,
) -> Result<Vec<Rat>, SheafError> {
    let d = differential(sheaf, c);
    if !d.is_zero() {
        let tuple = d
            .tuples()
            .find(|(_, v)| v.iter().any(|p| !p.is_zero()))
            .map(|(t, _)| t.clone())
            .unwrap_or_default();
        return Err(SheafError::NotACocycle(tuple));
    }
    let p = c.degree;
    let cover = Cover::new(&sheaf.fan);
    let n_classes = result.classes.get(p).map_or(0, |v| v.len());
    let mut coords = vec![Rat::zero(); n_classes];

    for m in cochain_characters(sheaf, c) {
        let cc = CharComplex::build(sheaf, &cover, &m);
        // coordinate vector of the degree-m part of c
        let mut v = vec![Rat::zero(); cc.basis[p].len()];
        for (tuple, value) in c.tuples() {
            let ti = cover.tuple_index(p, tuple).expect("valid tuple");
            for (alpha, poly) in value.iter().enumerate() {
                let w = &sheaf.weights[tuple[0]][alpha];
                let exp: Vec<i64> = m.iter().zip(w).map(|(a, b)| a - b).collect();
                let coeff = poly.coeff(&exp);
                if coeff.is_zero() {
                    continue;
                }
                match cc.basis[p].iter().position(|&k| k == (ti, alpha)) {
                    Some(idx) => v[idx] = coeff,
                    None => return Err(SheafError::NotRegular(tuple.clone())),
                }
            }
        }
        // representatives chosen exactly as in cech_cohomology
        let coh = cc.cohomology();
        let reps = &coh[p].1;
        let hdim = reps.len();
        let rows = cc.basis[p].len();
        let prev_cols = if p == 0 { 0 } else { cc.mats[p - 1].cols() };
        let mut a = RatMatrix::zeros(rows, hdim + prev_cols);
        for (j, rep) in reps.iter().enumerate() {
            for i in 0..rows {
                a[(i, j)] = rep[i].clone();
            }
        }
        if p > 0 {
            for j in 0..prev_cols {
                for i in 0..rows {
                    a[(i, hdim + j)] = cc.mats[p - 1][(i, j)].clone();
                }
            }
        }
        let z = solve(&a, &v).expect("a cocycle lies in kernel = classes ⊕ image");
        // place the class coordinates at this character's positions
        let positions: Vec<usize> = result.classes[p]
            .iter()
            .enumerate()
            .filter(|(_, h)| h.character == m)
            .map(|(i, _)| i)
            .collect();
        debug_assert_eq!(positions.len(), hdim, "basis mismatch at character {m:?}");
        for (k, &pos) in positions.iter().enumerate() {
            coords[pos] = z[k].clone();
        }
    }
    Ok(coords)
}

// ---------------------------------------------------------------------------
// Sheaf maps and two-term hypercohomology
// ---------------------------------------------------------------------------

/// A map of equivariant sheaves given by per-chart matrices (target rank ×
/// source rank) of homogeneous monomial entries.
pub struct SheafMap {
    pub source: EquivariantSheaf,
    pub target: EquivariantSheaf,
    pub mats: Vec<LMatrix>,
}

impl SheafMap {
    /// Verifies commutation with the transitions on every ordered chart
    /// pair: T^t·φ = φ·T^s.
    pub fn verify(&self) -> Result<(), SheafError> {
        let nc = self.source.fan.max_cones().len();
        for to in 0..nc {
            for from in 0..nc {
                if to == from {
                    continue;
                }
                let lhs = lmat_mul(&self.target.transition_matrix(to, from), &self.mats[from]);
                let rhs = lmat_mul(&self.mats[to], &self.source.transition_matrix(to, from));
                if lhs != rhs {
                    return Err(SheafError::NonCommuting(to, from));
                }
            }
        }
        Ok(())
    }

    /// The zero map into a sheaf.
    pub fn zero_into(target: &EquivariantSheaf) -> SheafMap {
        let nc = target.fan.max_cones().len();
        let zero_sheaf = {
            // rank-0 source sheaf on the same fan
            let mut trans = BTreeMap::new();
            for to in 0..nc {
                for from in 0..nc {
                    if to != from {
                        trans.insert((to, from), Vec::new());
                    }
                }
            }
            EquivariantSheaf {
                fan: target.fan.clone(),
                rank: 0,
                labels: vec![Vec::new(); nc],
                weights: vec![Vec::new(); nc],
                trans,
            }
        };
        SheafMap {
            source: zero_sheaf,
            target: target.clone(),
            mats: (0..nc)
                .map(|_| (0..target.rank).map(|_| Vec::new()).collect())
                .collect(),
        }
    }

    fn char_matrix(
        &self,
        cover: &Cover,
        p: usize,
        src: &CharComplex,
        tgt: &CharComplex,
        _m: &[i64],
    ) -> RatMatrix {
        let rows = tgt.basis[p].len();
        let cols = src.basis[p].len();
        let mut out = RatMatrix::zeros(rows, cols);
        if rows == 0 || cols == 0 {
            return out;
        }
        let index_of: BTreeMap<(usize, usize), usize> = tgt.basis[p]
            .iter()
            .enumerate()
            .map(|(i, &k)| (k, i))
            .collect();
        for (col, &(ti, alpha)) in src.basis[p].iter().enumerate() {
            let tuple = &cover.tuples[p][ti];
            let chart = tuple[0];
            for beta in 0..self.target.rank {
                let entry = &self.mats[chart][beta][alpha];
                if let Some((_, q)) = entry.single_term() {
                    if let Some(&row) = index_of.get(&(ti, beta)) {
                        out[(row, col)] += q.clone();
                    } else {
                        debug_assert!(q.is_zero(), "map image must stay regular");
                    }
                }
            }
        }
        out
    }
}

/// The canonical map f*Ω¹_target → Ω¹_source of a fan refinement: on each
/// source chart, the Jacobian expressing the differentials of the containing
/// target chart's coordinates in the source chart's coordinates.
pub fn cotangent_pullback_map(m: &ToricMorphism) -> Result<SheafMap, SheafError> {
    let omega_target = cotangent(&m.target);
    let source_sheaf = pullback(m, &omega_target)?;
    let target_sheaf = cotangent(&m.source);
    let n = m.source.dim();
    let cones = m.source.max_cones();
    let mut mats = Vec::with_capacity(cones.len());
    for (ci, cone) in cones.iter().enumerate() {
        let tchart = &m.target.max_cones()[m.cone_map[ci]];
        let tbasis = m.target.chart_basis(tchart);
        let sbasis = m.source.chart_basis(cone);
        // d(x^c) = Σ_j ⟨c, v_j⟩ x^{c − m_j} dx_j in the source chart
        let mut mat: LMatrix = vec![vec![LaurentPoly::zero(n); n]; n];
        for (alpha, c) in tbasis.iter().enumerate() {
            for (j, row) in mat.iter_mut().enumerate() {
                let vj = &m.source.rays()[cone[j]];
                let coeff: i64 = c.iter().zip(vj).map(|(a, b)| a * b).sum();
                if coeff != 0 {
                    let exp: Vec<i64> = c.iter().zip(&sbasis[j]).map(|(a, b)| a - b).collect();
                    row[alpha] = LaurentPoly::monomial(exp, Rat::from_integer(coeff.into()));
                }
            }
        }
        mats.push(mat);
    }
    let map = SheafMap {
        source: source_sheaf,
        target: target_sheaf,
        mats,
    };
    map.verify()?;
    Ok(map)
}

/// Hypercohomology dimensions of the two-term complex [source → target]
/// with target in degree 0. When the map is injective these are the
/// cohomology dimensions of its cokernel; no quotient sheaf is ever formed.
pub fn cone_cohomology(map: &SheafMap, opts: &CechOpts) -> Result<Vec<usize>, SheafError> {
    map.verify()?;
    let fan = &map.target.fan;
    let n = fan.dim();
    let cover = Cover::new(fan);
    let radius = opts.box_radius.unwrap_or_else(|| {
        default_character_box(&map.source).max(default_character_box(&map.target))
    });

    let run = |radius: i64| -> Vec<usize> {
        let chars = box_characters(n, radius);
        let nc = fan.max_cones().len();
        let per_char = map_characters(&chars, opts.threads, |m| {
            let src = CharComplex::build(&map.source, &cover, m);
            let tgt = CharComplex::build(&map.target, &cover, m);
            // Tot^q = C^{q+1}(source) ⊕ C^q(target), q from −1; the block
            // differential is (a, b) ↦ (−d_s a, φa + d_t b).
            let tot_dim = |q: i64| -> usize {
                let s = if q + 1 >= 0 && ((q + 1) as usize) < nc {
                    src.basis[(q + 1) as usize].len()
                } else {
                    0
                };
                let t = if q >= 0 && (q as usize) < nc {
                    tgt.basis[q as usize].len()
                } else {
                    0
                };
                s + t
            };
            let d_tot = |q: i64| -> RatMatrix {
                let rows = tot_dim(q + 1);
                let cols = tot_dim(q);
                let mut mat = RatMatrix::zeros(rows, cols);
                let s_cols = if q + 1 >= 0 && ((q + 1) as usize) < nc {
                    src.basis[(q + 1) as usize].len()
                } else {
                    0
                };
                let s_rows = if q + 2 >= 0 && ((q + 2) as usize) < nc {
                    src.basis[(q + 2) as usize].len()
                } else {
                    0
                };
                // top-left: −d_s
                if s_rows > 0 && s_cols > 0 {
                    let ds = &src.mats[(q + 1) as usize];
                    for i in 0..s_rows {
                        for j in 0..s_cols {
                            mat[(i, j)] = -ds[(i, j)].clone();
                        }
                    }
                }
                // bottom-left: φ in degree q+1
                if q + 1 >= 0 && ((q + 1) as usize) < nc && s_cols > 0 {
                    let phi = map.char_matrix(&cover, (q + 1) as usize, &src, &tgt, m);
                    for i in 0..phi.rows() {
                        for j in 0..s_cols {
                            mat[(s_rows + i, j)] = phi[(i, j)].clone();
                        }
                    }
                }
                // bottom-right: d_t in degree q
                if q >= 0 && (q as usize) < nc {
                    let dt = &tgt.mats[q as usize];
                    for i in 0..dt.rows() {
                        for j in 0..dt.cols() {
                            mat[(s_rows + i, s_cols + j)] = dt[(i, j)].clone();
                        }
                    }
                }
                mat
            };
            let mut dims = Vec::with_capacity(nc);
            let mut prev_rank = {
                let d_minus = d_tot(-1);
                rank_kernel_image(&d_minus).rank
            };
            for q in 0..nc {
                let dq = d_tot(q as i64);
                let rki = rank_kernel_image(&dq);
                dims.push(rki.kernel.cols() - prev_rank);
                prev_rank = rki.rank;
            }
            dims
        });
        let mut dims = vec![0usize; nc];
        for d in per_char {
            for (i, x) in d.into_iter().enumerate() {
                dims[i] += x;
            }
        }
        dims
    };

    let mut dims = run(radius);
    let doubled = run(radius * 2);
    if dims != doubled {
        return Err(SheafError::BoxTooSmall);
    }
    for (q, &d) in dims.iter().enumerate() {
        if q > n && d != 0 {
            return Err(SheafError::UnexpectedCohomology(q));
        }
    }
    dims.truncate(n + 1);
    Ok(dims)
}
