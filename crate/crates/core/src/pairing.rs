//! The Hodge complex of a smooth complete toric variety, the cup-product /
//! trace bilinear form on it, the Gram matrices, and the resulting class in
//! GW(ℚ) — the form-level Euler characteristic.
//!
//! The trace on H^n(X, Ω^n) is not normalized by an a-priori generator
//! formula: it is pinned by toric intersection numbers. On a surface the
//! single scalar λ must satisfy Tr(c₁(Dᵢ) ⌣ c₁(Dⱼ)) = Dᵢ·Dⱼ for all ray
//! pairs at once, an overdetermined system solved exactly; on the line the
//! constraint is the degree of a point, and in dimension 3 the pairing is
//! gated to projective space where the hyperplane cube pins it. Any sign
//! slip in the cup or Čech conventions makes the system inconsistent, which
//! is reported as an error rather than silently absorbed.

use crate::gw::{form_from_gram, GWClass, GwError};
use crate::linalg::{Rat, RatMatrix};
use crate::sheaf::{
    cech_cohomology, cocycle_class, cotangent, structure_sheaf, subsets, wedge_power, CechCochain,
    CechOpts, CohomologyResult, EquivariantSheaf, LaurentPoly, SheafError,
};
use crate::toric::{Fan, FanError, ToricDivisor};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PairingError {
    #[error("top cohomology is {0}-dimensional, expected 1")]
    TopNotLine(usize),
    #[error("trace constraints are inconsistent ({0})")]
    InconsistentTrace(String),
    #[error("degenerate pairing in total degree {0}")]
    Degenerate(i64),
    #[error("pairing in dimension 3 is only supported for projective space")]
    Dim3OnlyProjective,
    #[error("cup degrees {0}+{1} exceed the variety dimension")]
    CupOutOfRange(usize, usize),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
    #[error(transparent)]
    Gw(#[from] GwError),
    #[error(transparent)]
    Fan(#[from] FanError),
}

/// The sheaves Ω⁰…Ωⁿ on a fan together with their computed cohomology;
/// everything downstream (cup, trace, Gram, χ) reads from this.
pub struct HodgeCtx {
    pub fan: Fan,
    pub omega: Vec<EquivariantSheaf>,
    pub coh: Vec<CohomologyResult>,
}

impl HodgeCtx {
    pub fn new(fan: &Fan, opts: &CechOpts) -> Result<HodgeCtx, PairingError> {
        let n = fan.dim();
        let mut omega = Vec::with_capacity(n + 1);
        let mut coh = Vec::with_capacity(n + 1);
        if n == 0 {
            let o = structure_sheaf(fan);
            coh.push(cech_cohomology(&o, opts)?);
            omega.push(o);
        } else {
            let cot = cotangent(fan);
            for j in 0..=n {
                let w = wedge_power(&cot, j)?;
                coh.push(cech_cohomology(&w, opts)?);
                omega.push(w);
            }
        }
        Ok(HodgeCtx { fan: fan.clone(), omega, coh })
    }

    pub fn dim(&self) -> usize {
        self.fan.dim()
    }

    /// h^{i,j} = dim H^i(X, Ω^j), indexed [i][j].
    pub fn hodge_table(&self) -> Vec<Vec<usize>> {
        let n = self.dim();
        let mut h = vec![vec![0usize; n + 1]; n + 1];
        for j in 0..=n {
            for i in 0..=n {
                h[i][j] = self.coh[j].dims[i];
            }
        }
        h
    }

    /// dim HH_t for t ∈ [−n, n], returned with the offset index t + n.
    /// Hochschild dimensions are the antidiagonal sums of the Hodge table.
    pub fn hochschild_dims(&self) -> Vec<usize> {
        let n = self.dim() as i64;
        let h = self.hodge_table();
        let mut out = vec![0usize; (2 * n + 1) as usize];
        for i in 0..=n {
            for j in 0..=n {
                let t = j - i;
                out[(t + n) as usize] += h[i as usize][j as usize];
            }
        }
        out
    }
}

/// Hodge numbers of a fan (table indexed [i][j]).
pub fn hodge_table(fan: &Fan, opts: &CechOpts) -> Result<Vec<Vec<usize>>, PairingError> {
    Ok(HodgeCtx::new(fan, opts)?.hodge_table())
}

/// Cup product at cochain level with the front-face/back-face convention:
/// (a⌣b)(σ₀…σ_{p+q}) = a(σ₀…σ_p) ∧ T_{σ₀←σ_p} b(σ_p…σ_{p+q}),
/// the wedge taken with shuffle signs in the frame of σ₀.
pub fn cup(
    ctx: &HodgeCtx,
    a: &CechCochain,
    ja: usize,
    b: &CechCochain,
    jb: usize,
) -> Result<CechCochain, PairingError> {
    let n = ctx.dim();
    if ja + jb > n {
        return Err(PairingError::CupOutOfRange(ja, jb));
    }
    let sa = subsets(n, ja);
    let sb = subsets(n, jb);
    let sc = subsets(n, ja + jb);
    let index_of: BTreeMap<Vec<usize>, usize> = sc
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    let target = &ctx.omega[ja + jb];
    let mut out = CechCochain::new(a.degree + b.degree);
    for (ta, va) in a.tuples() {
        for (tb, vb) in b.tuples() {
            if ta.last() != tb.first() {
                continue;
            }
            let mut merged = ta.clone();
            merged.extend_from_slice(&tb[1..]);
            // both tuples are increasing and share the hinge chart, so the
            // concatenation is automatically increasing
            let vb0 = ctx.omega[jb].apply_transition(ta[0], tb[0], vb);
            let mut value = vec![LaurentPoly::zero(n); target.rank];
            for (ai, aset) in sa.iter().enumerate() {
                if va[ai].is_zero() {
                    continue;
                }
                for (bi, bset) in sb.iter().enumerate() {
                    if vb0[bi].is_zero() {
                        continue;
                    }
                    let Some((sign, union)) = crate::sheaf::shuffle_sign(aset, bset) else {
                        continue;
                    };
                    let prod = va[ai].mul(&vb0[bi]);
                    let signed = if sign == 1 { prod } else { prod.neg() };
                    let idx = index_of[&union];
                    value[idx] = value[idx].add(&signed);
                }
            }
            if value.iter().any(|p| !p.is_zero()) {
                out.add_value(merged, value, target.rank, n);
            }
        }
    }
    Ok(out)
}

/// The dlog Čech 1-cocycle of a torus-invariant divisor: on (σ₀, σ₁) the
/// value is dlog of the ratio of the local equations, expanded in σ₀'s
/// coordinates as Σⱼ ⟨u₀−u₁, vⱼ⟩ · x^{−mⱼ} dxⱼ. This represents the first
/// Chern class of O(D) in H¹(X, Ω¹).
pub fn c1_cocycle(ctx: &HodgeCtx, d: &ToricDivisor) -> CechCochain {
    let fan = &ctx.fan;
    let n = fan.dim();
    let cones = fan.max_cones();
    // chart weights of O(D): ⟨u_σ, v_ρ⟩ = −a_ρ on the rays of σ
    let u: Vec<Vec<i64>> = cones
        .iter()
        .map(|cone| {
            let basis = fan.chart_basis(cone);
            let mut w = vec![0i64; n];
            for (k, &ray) in cone.iter().enumerate() {
                for (t, x) in basis[k].iter().enumerate() {
                    w[t] += -d.0[ray] * x;
                }
            }
            w
        })
        .collect();
    let mut out = CechCochain::new(1);
    for s0 in 0..cones.len() {
        for s1 in (s0 + 1)..cones.len() {
            // orientation pinned so that the degree of a point class on the
            // line comes out +1 under the normalized trace
            let c: Vec<i64> = u[s1].iter().zip(&u[s0]).map(|(a, b)| a - b).collect();
            let basis = fan.chart_basis(&cones[s0]);
            let mut value = vec![LaurentPoly::zero(n); n];
            for (j, value_j) in value.iter_mut().enumerate() {
                let vj = &fan.rays()[cones[s0][j]];
                let coeff: i64 = c.iter().zip(vj).map(|(a, b)| a * b).sum();
                if coeff != 0 {
                    let exp: Vec<i64> = basis[j].iter().map(|&x| -x).collect();
                    *value_j = LaurentPoly::monomial(exp, Rat::from_integer(coeff.into()));
                }
            }
            if value.iter().any(|p| !p.is_zero()) {
                out.add_value(vec![s0, s1], value, n, n);
            }
        }
    }
    out
}

/// The chosen generator of H^n(X, Ω^n) and the scalar λ normalizing the
/// trace against it.
#[derive(Debug, Clone)]
pub struct TraceNormalization {
    pub lambda: Rat,
}

/// The trace functional λ·(coordinate in the top cohomology basis) applied
/// to a top-degree cocycle.
pub fn trace_value(
    ctx: &HodgeCtx,
    tr: &TraceNormalization,
    top: &CechCochain,
) -> Result<Rat, PairingError> {
    let n = ctx.dim();
    let coords = cocycle_class(&ctx.omega[n], top, &ctx.coh[n])?;
    debug_assert_eq!(coords.len(), 1);
    Ok(&tr.lambda * &coords[0])
}

/// Pins the trace scalar by intersection numbers: on surfaces all ray-pair
/// constraints Tr(c₁(Dᵢ)⌣c₁(Dⱼ)) = Dᵢ·Dⱼ at once, on the line the degree
/// of each point class, at a point the unit itself; in dimension 3 only
/// projective space is supported, normalized by the hyperplane cube. An
/// inconsistent system signals a sign-convention bug and is an error.
pub fn trace_normalize(ctx: &HodgeCtx) -> Result<TraceNormalization, PairingError> {
    let n = ctx.dim();
    if ctx.coh[n].dims[n] != 1 {
        return Err(PairingError::TopNotLine(ctx.coh[n].dims[n]));
    }
    // (class coordinate, target value) pairs
    let mut constraints: Vec<(Rat, Rat)> = Vec::new();
    match n {
        0 => {
            let mut unit = CechCochain::new(0);
            unit.add_value(vec![0], vec![LaurentPoly::one(0)], 1, 0);
            let coords = cocycle_class(&ctx.omega[0], &unit, &ctx.coh[0])?;
            constraints.push((coords[0].clone(), Rat::one()));
        }
        1 => {
            for i in 0..ctx.fan.rays().len() {
                let c1 = c1_cocycle(ctx, &ToricDivisor::ray(&ctx.fan, i));
                let coords = cocycle_class(&ctx.omega[1], &c1, &ctx.coh[1])?;
                constraints.push((coords[0].clone(), Rat::one()));
            }
        }
        2 => {
            let m = ctx.fan.surface_intersection_matrix()?;
            let c1s: Vec<CechCochain> = (0..ctx.fan.rays().len())
                .map(|i| c1_cocycle(ctx, &ToricDivisor::ray(&ctx.fan, i)))
                .collect();
            for i in 0..c1s.len() {
                for j in i..c1s.len() {
                    let prod = cup(ctx, &c1s[i], 1, &c1s[j], 1)?;
                    let coords = cocycle_class(&ctx.omega[2], &prod, &ctx.coh[2])?;
                    constraints.push((
                        coords[0].clone(),
                        Rat::from_integer(m[i][j].into()),
                    ));
                }
            }
        }
        3 => {
            if ctx.fan != Fan::builtin("P3")? {
                return Err(PairingError::Dim3OnlyProjective);
            }
            let c1s: Vec<CechCochain> = (0..ctx.fan.rays().len())
                .map(|i| c1_cocycle(ctx, &ToricDivisor::ray(&ctx.fan, i)))
                .collect();
            // every triple product of hyperplane classes has degree 1
            for i in 0..c1s.len() {
                for j in i..c1s.len() {
                    for k in j..c1s.len() {
                        let ij = cup(ctx, &c1s[i], 1, &c1s[j], 1)?;
                        let ijk = cup(ctx, &ij, 2, &c1s[k], 1)?;
                        let coords = cocycle_class(&ctx.omega[3], &ijk, &ctx.coh[3])?;
                        constraints.push((coords[0].clone(), Rat::one()));
                    }
                }
            }
        }
        d => unreachable!("dimension {d}"),
    }

    let mut lambda: Option<Rat> = None;
    for (gamma, target) in &constraints {
        if gamma.is_zero() {
            if !target.is_zero() {
                return Err(PairingError::InconsistentTrace(format!(
                    "class is zero but intersection number is {target}"
                )));
            }
            continue;
        }
        let cand = target / gamma;
        match &lambda {
            None => lambda = Some(cand),
            Some(l) if *l == cand => {}
            Some(l) => {
                return Err(PairingError::InconsistentTrace(format!(
                    "lambda candidates {l} and {cand} disagree"
                )))
            }
        }
    }
    let lambda = lambda.ok_or_else(|| {
        PairingError::InconsistentTrace("no constraint determines the scale".into())
    })?;
    Ok(TraceNormalization { lambda })
}

/// The Gram matrices of the cup/trace pairing, one block per total degree
/// t ≥ 0 pairing the degree-t piece with the degree-(−t) piece.
#[derive(Debug, Clone)]
pub struct GradedGram {
    pub blocks: Vec<GramBlock>,
}

#[derive(Debug, Clone)]
pub struct GramBlock {
    pub degree: i64,
    /// Basis summands (i, j, class index) of the row space V^t, one entry
    /// per basis vector, in (i ascending, class index) order; `cols`
    /// likewise for V^{−t}.
    pub rows: Vec<(usize, usize, usize)>,
    pub cols: Vec<(usize, usize, usize)>,
    pub matrix: RatMatrix,
}

fn degree_piece(ctx: &HodgeCtx, t: i64) -> Vec<(usize, usize, usize)> {
    // (i, j, class index) with j − i = t
    let n = ctx.dim() as i64;
    let mut out = Vec::new();
    for i in 0..=n {
        let j = i + t;
        if !(0..=n).contains(&j) {
            continue;
        }
        let (i, j) = (i as usize, j as usize);
        for k in 0..ctx.coh[j].classes[i].len() {
            out.push((i, j, k));
        }
    }
    out
}

/// Assembles the Gram blocks for a given trace normalization. Every block
/// must be square and nondegenerate; a degenerate block is an error.
pub fn gram_matrix_with(
    ctx: &HodgeCtx,
    tr: &TraceNormalization,
) -> Result<GradedGram, PairingError> {
    let n = ctx.dim();
    let mut blocks = Vec::new();
    for t in 0..=(n as i64) {
        let rows = degree_piece(ctx, t);
        let cols = degree_piece(ctx, -t);
        if rows.is_empty() && cols.is_empty() {
            continue;
        }
        if rows.len() != cols.len() {
            return Err(PairingError::Degenerate(t));
        }
        let mut matrix = RatMatrix::zeros(rows.len(), cols.len());
        for (r, &(i, j, k)) in rows.iter().enumerate() {
            let a = &ctx.coh[j].classes[i][k].cochain;
            for (c, &(i2, j2, k2)) in cols.iter().enumerate() {
                if i + i2 != n || j + j2 != n {
                    continue; // cup lands off the top corner, trace kills it
                }
                let b = &ctx.coh[j2].classes[i2][k2].cochain;
                let prod = cup(ctx, a, j, b, j2)?;
                matrix[(r, c)] = trace_value(ctx, tr, &prod)?;
            }
        }
        if matrix.det().is_zero() {
            return Err(PairingError::Degenerate(t));
        }
        blocks.push(GramBlock {
            degree: t,
            rows,
            cols,
            matrix,
        });
    }
    Ok(GradedGram { blocks })
}

/// The Gram matrices of a fan under the intersection-normalized trace.
pub fn gram_matrix(fan: &Fan, opts: &CechOpts) -> Result<GradedGram, PairingError> {
    let ctx = HodgeCtx::new(fan, opts)?;
    let tr = trace_normalize(&ctx)?;
    gram_matrix_with(&ctx, &tr)
}

/// The class in GW(ℚ) of a graded bilinear form: the degree-0 block
/// contributes its own class; the pairing between degrees ±t is metabolic
/// and contributes (−1)^t·dim·H.
pub fn class_of_graded_form(g: &GradedGram) -> Result<GWClass, PairingError> {
    let mut out = GWClass::zero();
    for block in &g.blocks {
        if block.degree == 0 {
            out = out.add(&form_from_gram(&block.matrix)?);
        } else {
            let h = GWClass::hyperbolic_times(block.rows.len());
            let signed = if block.degree % 2 == 0 { h } else { h.neg() };
            out = out.add(&signed);
        }
    }
    Ok(out)
}

/// χ^{A¹} through the full Čech/cup/trace pipeline.
pub fn chi_a1(fan: &Fan, opts: &CechOpts) -> Result<GWClass, PairingError> {
    class_of_graded_form(&gram_matrix(fan, opts)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gw::gw_equal;
    use crate::linalg::rat_int;

    fn ctx(name: &str) -> HodgeCtx {
        HodgeCtx::new(&Fan::builtin(name).unwrap(), &CechOpts::default()).unwrap()
    }

    #[test]
    fn hodge_tables_are_diagonal() {
        let cases = [
            ("P1", vec![1, 1]),
            ("P2", vec![1, 1, 1]),
            ("hirzebruch:1", vec![1, 2, 1]),
            ("P3", vec![1, 1, 1, 1]),
        ];
        for (name, diag) in cases {
            let c = ctx(name);
            let h = c.hodge_table();
            for (i, row) in h.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    let expect = if i == j { diag[i] } else { 0 };
                    assert_eq!(v, expect, "{name} h^{i},{j}");
                }
            }
        }
    }

    #[test]
    fn hochschild_dims_concentrate_in_degree_zero() {
        let cases = [("P1", 2usize), ("P2", 3), ("hirzebruch:1", 4)];
        for (name, hh0) in cases {
            let c = ctx(name);
            let n = c.dim();
            let hh = c.hochschild_dims();
            for (idx, &v) in hh.iter().enumerate() {
                let expect = if idx == n { hh0 } else { 0 };
                assert_eq!(v, expect, "{name} HH at offset {idx}");
            }
        }
    }

    #[test]
    fn cup_with_unit_is_identity() {
        let c = ctx("P2");
        let n = c.dim();
        let mut unit = CechCochain::new(0);
        for chart in 0..3 {
            unit.add_value(vec![chart], vec![LaurentPoly::one(n)], 1, n);
        }
        let e = &c.coh[1].classes[1][0].cochain;
        let left = cup(&c, &unit, 0, e, 1).unwrap();
        let right = cup(&c, e, 1, &unit, 0).unwrap();
        let coords = cocycle_class(&c.omega[1], e, &c.coh[1]).unwrap();
        let lc = cocycle_class(&c.omega[1], &left, &c.coh[1]).unwrap();
        let rc = cocycle_class(&c.omega[1], &right, &c.coh[1]).unwrap();
        assert_eq!(coords, lc);
        assert_eq!(coords, rc);
    }

    #[test]
    fn trivial_divisor_has_zero_c1() {
        let c = ctx("P2");
        let d = ToricDivisor(vec![0, 0, 0]);
        assert!(c1_cocycle(&c, &d).is_zero());
    }

    #[test]
    fn c1_is_a_cocycle() {
        for name in ["P1", "P2", "P1xP1", "hirzebruch:1"] {
            let c = ctx(name);
            let n = c.dim();
            for i in 0..c.fan.rays().len() {
                let c1 = c1_cocycle(&c, &ToricDivisor::ray(&c.fan, i));
                let d = crate::sheaf::differential(&c.omega[1], &c1);
                assert!(d.is_zero(), "{name} ray {i}");
                let _ = n;
            }
        }
    }

    #[test]
    fn trace_normalizes_consistently() {
        for name in ["pt", "P1", "P2", "P1xP1", "hirzebruch:1", "hirzebruch:2"] {
            let c = ctx(name);
            let tr = trace_normalize(&c).unwrap();
            assert!(!tr.lambda.is_zero(), "{name}");
        }
    }

    #[test]
    fn point_classes_on_the_line_have_degree_one() {
        let c = ctx("P1");
        let tr = trace_normalize(&c).unwrap();
        for i in 0..2 {
            let c1 = c1_cocycle(&c, &ToricDivisor::ray(&c.fan, i));
            assert_eq!(trace_value(&c, &tr, &c1).unwrap(), rat_int(1), "ray {i}");
        }
    }

    #[test]
    fn hyperplane_classes_agree_with_the_dlog_generator_up_to_sign() {
        let c = ctx("P2");
        let delta = crate::acceptance::p2_dlog_generator(&c);
        let d_coord = cocycle_class(&c.omega[1], &delta, &c.coh[1]).unwrap();
        for i in 0..3 {
            let c1 = c1_cocycle(&c, &ToricDivisor::ray(&c.fan, i));
            let coord = cocycle_class(&c.omega[1], &c1, &c.coh[1]).unwrap();
            assert!(
                coord[0] == d_coord[0] || coord[0] == -d_coord[0].clone(),
                "ray {i}: {:?} vs {:?}",
                coord,
                d_coord
            );
        }
    }

    #[test]
    fn fiber_and_exceptional_pairing_pattern() {
        // the traces of c₁ cups reproduce the intersection matrix: the
        // exceptional curve squares to −1, a fiber to 0, and they meet once
        let c = ctx("hirzebruch:1");
        let tr = trace_normalize(&c).unwrap();
        let m = c.fan.surface_intersection_matrix().unwrap();
        let exceptional = (0..4).find(|&i| m[i][i] == -1).unwrap();
        let fiber = (0..4)
            .find(|&i| m[i][i] == 0 && m[i][exceptional] == 1)
            .unwrap();
        let ce = c1_cocycle(&c, &ToricDivisor::ray(&c.fan, exceptional));
        let cf = c1_cocycle(&c, &ToricDivisor::ray(&c.fan, fiber));
        let tr_of = |a: &CechCochain, b: &CechCochain| {
            let prod = cup(&c, a, 1, b, 1).unwrap();
            trace_value(&c, &tr, &prod).unwrap()
        };
        assert_eq!(tr_of(&ce, &ce), rat_int(-1));
        assert_eq!(tr_of(&cf, &cf), rat_int(0));
        assert_eq!(tr_of(&cf, &ce), rat_int(1));
    }

    #[test]
    fn gram_of_the_line_is_hyperbolic() {
        let g = gram_matrix(&Fan::builtin("P1").unwrap(), &CechOpts::default()).unwrap();
        assert_eq!(g.blocks.len(), 1);
        let m = &g.blocks[0].matrix;
        assert_eq!(*m, RatMatrix::from_int_rows(&[&[0, 1], &[1, 0]]));
        let cls = form_from_gram(m).unwrap();
        assert!(gw_equal(&cls, &GWClass::hyperbolic()));
    }

    #[test]
    fn p2_middle_entry_is_exactly_one() {
        let c = ctx("P2");
        let tr = trace_normalize(&c).unwrap();
        let e = &c.coh[1].classes[1][0].cochain;
        let sq = cup(&c, e, 1, e, 1).unwrap();
        let v = trace_value(&c, &tr, &sq).unwrap();
        // the middle 1×1 block is ⟨v⟩ with v a square times 1
        let sc = crate::linalg::square_class(&v).unwrap();
        assert!(sc.is_one(), "middle block gives ⟨{v}⟩");
    }

    #[test]
    fn hirzebruch_middle_block_is_hyperbolic() {
        let g = gram_matrix(&Fan::builtin("hirzebruch:1").unwrap(), &CechOpts::default()).unwrap();
        let block = &g.blocks[0];
        // pick out the middle 2×2 sub-block on H¹(Ω¹)
        let idx: Vec<usize> = block
            .rows
            .iter()
            .enumerate()
            .filter(|&(_, &(i, j, _))| i == 1 && j == 1)
            .map(|(r, _)| r)
            .collect();
        assert_eq!(idx.len(), 2);
        let mut sub = RatMatrix::zeros(2, 2);
        for (a, &r) in idx.iter().enumerate() {
            for (b, &cc) in idx.iter().enumerate() {
                sub[(a, b)] = block.matrix[(r, cc)].clone();
            }
        }
        let cls = form_from_gram(&sub).unwrap();
        assert!(gw_equal(&cls, &GWClass::hyperbolic()), "{sub:?}");
    }

    #[test]
    fn synthetic_off_diagonal_block_gives_minus_h() {
        let g = GradedGram {
            blocks: vec![GramBlock {
                degree: 1,
                rows: vec![(0, 1, 0)],
                cols: vec![(1, 0, 0)],
                matrix: RatMatrix::from_int_rows(&[&[1]]),
            }],
        };
        let cls = class_of_graded_form(&g).unwrap();
        assert!(gw_equal(&cls, &GWClass::hyperbolic().neg()));
    }

    #[test]
    fn chi_examples() {
        let opts = CechOpts::default();
        let pt = chi_a1(&Fan::builtin("pt").unwrap(), &opts).unwrap();
        assert!(gw_equal(&pt, &GWClass::one()));
        let p1 = chi_a1(&Fan::builtin("P1").unwrap(), &opts).unwrap();
        assert!(gw_equal(&p1, &GWClass::hyperbolic()));
        let p2 = chi_a1(&Fan::builtin("P2").unwrap(), &opts).unwrap();
        assert!(gw_equal(&p2, &GWClass::hyperbolic().add(&GWClass::one())));
        let f1 = chi_a1(&Fan::builtin("hirzebruch:1").unwrap(), &opts).unwrap();
        assert!(gw_equal(&f1, &GWClass::hyperbolic_times(2)));
        let p3 = chi_a1(&Fan::builtin("P3").unwrap(), &opts).unwrap();
        assert!(gw_equal(&p3, &GWClass::hyperbolic_times(2)));
    }

    #[test]
    fn trace_scaling_by_squares_is_invisible() {
        let c = ctx("P2");
        let tr = trace_normalize(&c).unwrap();
        let scaled = TraceNormalization {
            lambda: &tr.lambda * &rat_int(4),
        };
        let a = class_of_graded_form(&gram_matrix_with(&c, &tr).unwrap()).unwrap();
        let b = class_of_graded_form(&gram_matrix_with(&c, &scaled).unwrap()).unwrap();
        assert!(gw_equal(&a, &b));
    }

    #[test]
    fn rank_and_signature_laws_on_surfaces() {
        for name in ["P2", "P1xP1", "hirzebruch:1", "hirzebruch:2", "hirzebruch:3"] {
            let fan = Fan::builtin(name).unwrap();
            let chi = chi_a1(&fan, &CechOpts::default()).unwrap();
            assert_eq!(chi.rank(), fan.max_cones().len() as i64, "{name}");
            let rho = fan.rays().len() as i64 - 2;
            assert_eq!(chi.signature(), 2 - rho, "{name}");
        }
    }

    #[test]
    fn graded_commutativity_of_cup() {
        // [a⌣b] = (−1)^{pq+jj'} [b⌣a] on all basis class pairs
        for name in ["P1", "P2", "hirzebruch:1"] {
            let c = ctx(name);
            let n = c.dim();
            let mut all: Vec<(usize, usize, &CechCochain)> = Vec::new();
            for j in 0..=n {
                for i in 0..=n {
                    for h in &c.coh[j].classes[i] {
                        all.push((i, j, &h.cochain));
                    }
                }
            }
            for &(p, j1, a) in &all {
                for &(q, j2, b) in &all {
                    if j1 + j2 > n {
                        continue;
                    }
                    let ab = cup(&c, a, j1, b, j2).unwrap();
                    let ba = cup(&c, b, j2, a, j1).unwrap();
                    let target = &c.omega[j1 + j2];
                    let result = &c.coh[j1 + j2];
                    let ab_c = cocycle_class(target, &ab, result).unwrap();
                    let ba_c = cocycle_class(target, &ba, result).unwrap();
                    let sign = if (p * q + j1 * j2) % 2 == 0 { 1 } else { -1 };
                    for (x, y) in ab_c.iter().zip(&ba_c) {
                        let expect = if sign == 1 { y.clone() } else { -y };
                        assert_eq!(*x, expect, "{name} ({p},{j1})x({q},{j2})");
                    }
                }
            }
        }
    }
}
