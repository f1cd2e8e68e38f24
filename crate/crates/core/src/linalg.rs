//! Exact rational arithmetic and the dense linear algebra every other module
//! consumes: ranks, kernels, images, solving, and congruence diagonalization
//! of symmetric matrices.
//!
//! Matrices are dense and all arithmetic is exact. Sizes stay at desk scale
//! (a few hundred at most), so exact dense Gaussian elimination is the right
//! trade; there is no sparse path and no floating point anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Index, IndexMut};
use thiserror::Error;

/// Exact rational scalar. Always stored reduced with positive denominator;
/// `Display` prints `p/q`, or just `p` when the denominator is 1, which is
/// the form used on every file and report boundary.
pub type Rat = BigRational;

/// Largest trial divisor used when factoring integers. Factorization gives up
/// (with an error, never silently) once the unfactored cofactor exceeds
/// `FACTOR_BOUND`² and so can no longer be certified prime.
pub const FACTOR_BOUND: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("not symmetric")]
    NotSymmetric,
    #[error("zero has no square class")]
    ZeroSquareClass,
    #[error("factorization bound exceeded at cofactor {0}")]
    FactorBoundExceeded(BigInt),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Dense row-major matrix over ℚ. Supports 0×n and n×0 shapes, which show up
/// as empty cohomology groups.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Convenience for integer-entry literals in tests and fan combinatorics.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat_int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| &self[(i, j)] * &v[j])
                    .fold(Rat::zero(), |a, b| a + b)
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Appends the columns of `rhs` on the right.
    pub fn hstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows);
        let mut out = Self::zeros(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..rhs.cols {
                out[(i, self.cols + j)] = rhs[(i, j)].clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            det *= m[(c, c)].clone();
            let pivot = m[(c, c)].clone();
            for i in (c + 1)..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &pivot;
                for j in c..n {
                    let sub = &f * &m[(c, j)];
                    m[(i, j)] -= sub;
                }
            }
        }
        det
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Size proxy used for pivot selection: bits of numerator plus denominator.
fn height(x: &Rat) -> u64 {
    x.numer().bits() + x.denom().bits()
}

/// Reduced row echelon form in place; returns pivot column indices.
/// Pivots are chosen per column by minimal height to keep entry growth down.
fn rref_in_place(m: &mut RatMatrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let mut best: Option<(usize, u64)> = None;
        for i in r..m.rows {
            if !m[(i, c)].is_zero() {
                let h = height(&m[(i, c)]);
                if best.is_none_or(|(_, bh)| h < bh) {
                    best = Some((i, h));
                }
            }
        }
        let Some((p, _)) = best else { continue };
        m.swap_rows(r, p);
        let pivot = m[(r, c)].clone();
        for j in c..m.cols {
            let v = &m[(r, j)] / &pivot;
            m[(r, j)] = v;
        }
        for i in 0..m.rows {
            if i != r && !m[(i, c)].is_zero() {
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let sub = &f * &m[(r, j)];
                    m[(i, j)] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub struct RankKernelImage {
    pub rank: usize,
    /// Columns form a basis of the kernel; shape cols(m) × (cols(m) − rank).
    pub kernel: RatMatrix,
    /// Columns are the pivot columns of the input; shape rows(m) × rank.
    pub image: RatMatrix,
}

/// Rank, kernel basis, and image basis of `m`, all exact.
pub fn rank_kernel_image(m: &RatMatrix) -> RankKernelImage {
    let mut r = m.clone();
    let pivots = rref_in_place(&mut r);
    let rank = pivots.len();
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();

    let mut kernel = RatMatrix::zeros(m.cols, free.len());
    for (k, &fc) in free.iter().enumerate() {
        kernel[(fc, k)] = Rat::one();
        for (prow, &pc) in pivots.iter().enumerate() {
            kernel[(pc, k)] = -r[(prow, fc)].clone();
        }
    }

    let mut image = RatMatrix::zeros(m.rows(), rank);
    for (k, &pc) in pivots.iter().enumerate() {
        for i in 0..m.rows() {
            image[(i, k)] = m[(i, pc)].clone();
        }
    }

    RankKernelImage {
        rank,
        kernel,
        image,
    }
}

pub fn rank(m: &RatMatrix) -> usize {
    let mut r = m.clone();
    rref_in_place(&mut r).len()
}

/// One particular solution of `a x = b`, or `None` when inconsistent.
pub fn solve(a: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(a.rows(), b.len(), "rhs length mismatch");
    let mut aug = RatMatrix::zeros(a.rows(), a.cols() + 1);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, a.cols())] = b[i].clone();
    }
    let pivots = rref_in_place(&mut aug);
    if pivots.contains(&a.cols()) {
        return None;
    }
    let mut x = vec![Rat::zero(); a.cols()];
    for (prow, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[(prow, a.cols())].clone();
    }
    Some(x)
}

/// Indices of `candidates` columns that extend the span of `base` to the
/// span of both, scanned left to right. Used to pick cocycle representatives
/// of cohomology inside a kernel modulo an image.
pub fn extend_independent(base: &RatMatrix, candidates: &RatMatrix) -> Vec<usize> {
    assert_eq!(base.rows(), candidates.rows());
    let mut cur = base.clone();
    let mut cur_rank = rank(&cur);
    let mut chosen = Vec::new();
    for j in 0..candidates.cols() {
        let mut col = RatMatrix::zeros(candidates.rows(), 1);
        for i in 0..candidates.rows() {
            col[(i, 0)] = candidates[(i, j)].clone();
        }
        let trial = cur.hstack(&col);
        let r = rank(&trial);
        if r > cur_rank {
            cur = trial;
            cur_rank = r;
            chosen.push(j);
        }
    }
    chosen
}

/// Congruence diagonalization of a symmetric matrix: returns `(d, basis)`
/// with `basisᵀ · s · basis` diagonal with entries `d`. A zero diagonal in
/// the presence of a nonzero off-diagonal entry is handled by the hyperbolic
/// pair move (valid because 2 is invertible), so `[[0,1],[1,0]]` comes out
/// as `(2, −2)` on the basis `(e₁+e₂, e₁−e₂)`.
pub fn congruence_diagonalize(s: &RatMatrix) -> Result<(Vec<Rat>, RatMatrix), LinalgError> {
    if !s.is_symmetric() {
        return Err(LinalgError::NotSymmetric);
    }
    let n = s.rows();
    let mut m = s.clone();
    let mut basis = RatMatrix::identity(n);

    // Column operation mirrored on rows keeps m congruent to s.
    let add_col = |m: &mut RatMatrix, basis: &mut RatMatrix, dst: usize, src: usize, f: &Rat| {
        for i in 0..n {
            let v = &m[(i, src)] * f;
            m[(i, dst)] += v;
        }
        for j in 0..n {
            let v = &m[(src, j)] * f;
            m[(dst, j)] += v;
        }
        for i in 0..n {
            let v = &basis[(i, src)] * f;
            basis[(i, dst)] += v;
        }
    };
    let swap = |m: &mut RatMatrix, basis: &mut RatMatrix, a: usize, b: usize| {
        if a == b {
            return;
        }
        for i in 0..n {
            let (x, y) = (m[(i, a)].clone(), m[(i, b)].clone());
            m[(i, a)] = y;
            m[(i, b)] = x;
        }
        m.swap_rows(a, b);
        for i in 0..n {
            let (x, y) = (basis[(i, a)].clone(), basis[(i, b)].clone());
            basis[(i, a)] = y;
            basis[(i, b)] = x;
        }
    };

    for i in 0..n {
        if m[(i, i)].is_zero() {
            if let Some(j) = ((i + 1)..n).find(|&j| !m[(j, j)].is_zero()) {
                swap(&mut m, &mut basis, i, j);
            } else if let Some(j) = ((i + 1)..n).find(|&j| !m[(i, j)].is_zero()) {
                // Hyperbolic pair move: (eᵢ, eⱼ) ↦ (eᵢ+eⱼ, eᵢ−eⱼ).
                add_col(&mut m, &mut basis, i, j, &Rat::one());
                add_col(&mut m, &mut basis, j, i, &Rat::new(BigInt::from(-1), BigInt::from(2)));
                // now bⱼ = −(eᵢ−eⱼ)/2; rescale to land exactly on eᵢ−eⱼ
                for r in 0..n {
                    let v = &m[(r, j)] * &rat_int(-2);
                    m[(r, j)] = v;
                }
                for c in 0..n {
                    let v = &m[(j, c)] * &rat_int(-2);
                    m[(j, c)] = v;
                }
                for r in 0..n {
                    let v = &basis[(r, j)] * &rat_int(-2);
                    basis[(r, j)] = v;
                }
            } else {
                continue; // fully zero row/column
            }
        }
        let pivot = m[(i, i)].clone();
        for j in (i + 1)..n {
            if m[(i, j)].is_zero() {
                continue;
            }
            let f = -(&m[(i, j)] / &pivot);
            add_col(&mut m, &mut basis, j, i, &f);
        }
    }

    let d = (0..n).map(|i| m[(i, i)].clone()).collect();
    Ok((d, basis))
}

// ---------------------------------------------------------------------------
// Integer factorization and square classes
// ---------------------------------------------------------------------------

/// Prime factorization of `n > 0` by trial division. Errors when the
/// remaining cofactor exceeds `FACTOR_BOUND`² after exhausting trial
/// divisors up to `FACTOR_BOUND` (it can then no longer be certified prime).
pub fn factor_integer(n: &BigInt) -> Result<Vec<(BigInt, u32)>, LinalgError> {
    assert!(n.is_positive(), "factor_integer needs n > 0");
    let mut n = n.clone();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let push = |p: BigInt, e: u32, out: &mut Vec<(BigInt, u32)>| {
        if e > 0 {
            out.push((p, e));
        }
    };
    let mut d = BigInt::from(2);
    let bound = BigInt::from(FACTOR_BOUND);
    while &d * &d <= n {
        if d > bound {
            return Err(LinalgError::FactorBoundExceeded(n));
        }
        let mut e = 0u32;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        push(d.clone(), e, &mut out);
        d += if d == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    Ok(out)
}

/// A square class in ℚ*/(ℚ*)², canonically represented by a square-free
/// integer with the sign of the original value.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SquareClass {
    rep: BigInt,
}

impl SquareClass {
    pub fn one() -> Self {
        SquareClass { rep: BigInt::one() }
    }

    pub fn minus_one() -> Self {
        SquareClass {
            rep: -BigInt::one(),
        }
    }

    pub fn representative(&self) -> &BigInt {
        &self.rep
    }

    pub fn is_one(&self) -> bool {
        self.rep.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.rep.is_positive()
    }

    pub fn new_int(n: i64) -> Result<Self, LinalgError> {
        square_class(&rat_int(n))
    }

    /// Product in ℚ*/(ℚ*)², reduced again to a square-free representative.
    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        square_class(&Rat::from_integer(&self.rep * &other.rep)).expect("nonzero")
    }

    pub fn neg(&self) -> SquareClass {
        SquareClass {
            rep: -self.rep.clone(),
        }
    }

    pub fn primes(&self) -> Vec<BigInt> {
        factor_integer(&self.rep.abs())
            .expect("square-free representative factors within bound")
            .into_iter()
            .map(|(p, _)| p)
            .collect()
    }

    /// Odd part as i64 when small; used only in diagnostics.
    pub fn to_i64(&self) -> Option<i64> {
        self.rep.to_i64()
    }
}

impl fmt::Debug for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SquareClass({})", self.rep)
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

/// The square class of a nonzero rational: all square factors of
/// numerator·denominator removed, sign preserved.
pub fn square_class(q: &Rat) -> Result<SquareClass, LinalgError> {
    if q.is_zero() {
        return Err(LinalgError::ZeroSquareClass);
    }
    // p/q and p·q differ by the square q².
    let n = q.numer() * q.denom();
    let fac = factor_integer(&n.abs())?;
    let mut rep = BigInt::one();
    for (p, e) in fac {
        if e % 2 == 1 {
            rep *= p;
        }
    }
    if n.is_negative() {
        rep = -rep;
    }
    Ok(SquareClass { rep })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
        rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))
    }

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> RatMatrix {
        let mut m = RatMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = random_rat(rng);
            }
        }
        m
    }

    #[test]
    fn rank_of_identity() {
        let m = RatMatrix::identity(2);
        let rki = rank_kernel_image(&m);
        assert_eq!(rki.rank, 2);
        assert_eq!(rki.kernel.cols(), 0);
        assert_eq!(rki.image.cols(), 2);
    }

    #[test]
    fn kernel_of_rank_one_matrix() {
        let m = RatMatrix::from_int_rows(&[&[1, 1], &[1, 1]]);
        let rki = rank_kernel_image(&m);
        assert_eq!(rki.rank, 1);
        assert_eq!(rki.kernel.cols(), 1);
        // kernel spanned by (1, −1) up to scale
        let k = rki.kernel.column(0);
        assert_eq!(&k[0] + &k[1], Rat::zero());
        assert!(!k[0].is_zero());
    }

    // Čech差 d⁰ for the structure sheaf on the two-chart cover of the line,
    // built per character by direct enumeration of the contributing monomial
    // basis: (f, g) ↦ g − f restricted to the overlap. Every contributing
    // character gives a rank-1 differential.
    #[test]
    fn two_chart_cech_differential_has_rank_one_per_character() {
        for m in -3i64..=3 {
            let chart0 = m >= 0; // t^m regular at 0
            let chart1 = m <= 0; // t^m regular at infinity
            let mut cols = Vec::new();
            if chart0 {
                cols.push(vec![rat_int(-1)]);
            }
            if chart1 {
                cols.push(vec![rat_int(1)]);
            }
            let d0 = RatMatrix::from_rows(vec![cols.into_iter().flatten().collect()]);
            let rki = rank_kernel_image(&d0);
            assert_eq!(rki.rank, 1, "character {m}");
        }
    }

    #[test]
    fn congruence_of_hyperbolic_gram() {
        let s = RatMatrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let (d, basis) = congruence_diagonalize(&s).unwrap();
        assert_eq!(d, vec![rat_int(2), rat_int(-2)]);
        // basis is (e₁+e₂, e₁−e₂)
        assert_eq!(basis, RatMatrix::from_int_rows(&[&[1, 1], &[1, -1]]));
        let check = basis.transpose().mul(&s).mul(&basis);
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { d[i].clone() } else { Rat::zero() };
                assert_eq!(check[(i, j)], expect);
            }
        }
    }

    #[test]
    fn congruence_fixes_diagonal_input() {
        let s = RatMatrix::from_int_rows(&[&[3, 0], &[0, -5]]);
        let (d, basis) = congruence_diagonalize(&s).unwrap();
        assert_eq!(d, vec![rat_int(3), rat_int(-5)]);
        assert_eq!(basis, RatMatrix::identity(2));
    }

    #[test]
    fn congruence_completes_the_square() {
        let s = RatMatrix::from_int_rows(&[&[1, 2], &[2, 1]]);
        let (d, _) = congruence_diagonalize(&s).unwrap();
        assert_eq!(d, vec![rat_int(1), rat_int(-3)]);
    }

    #[test]
    fn congruence_rejects_asymmetric_input() {
        let s = RatMatrix::from_int_rows(&[&[0, 1], &[2, 0]]);
        assert_eq!(congruence_diagonalize(&s), Err(LinalgError::NotSymmetric));
    }

    #[test]
    fn congruence_random_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=6);
            let mut s = RatMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..=i {
                    let v = random_rat(&mut rng);
                    s[(i, j)] = v.clone();
                    s[(j, i)] = v;
                }
            }
            let (d, basis) = congruence_diagonalize(&s).unwrap();
            assert!(!basis.det().is_zero(), "basis must be invertible");
            let check = basis.transpose().mul(&s).mul(&basis);
            for i in 0..n {
                for j in 0..n {
                    let expect = if i == j { d[i].clone() } else { Rat::zero() };
                    assert_eq!(check[(i, j)], expect);
                }
            }
            let nonzero = d.iter().filter(|x| !x.is_zero()).count();
            assert_eq!(nonzero, rank(&s));
        }
    }

    #[test]
    fn rank_kernel_random_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..400 {
            let rows = rng.gen_range(0..=6);
            let cols = rng.gen_range(0..=6);
            let m = random_matrix(&mut rng, rows, cols);
            let rki = rank_kernel_image(&m);
            assert_eq!(rki.rank, rank(&m.transpose()), "rank(m) = rank(mᵀ)");
            assert_eq!(rki.rank + rki.kernel.cols(), cols);
            assert_eq!(rki.image.cols(), rki.rank);
            for k in 0..rki.kernel.cols() {
                let v = rki.kernel.column(k);
                assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
            }
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = RatMatrix::from_int_rows(&[&[1, 1], &[1, 1]]);
        let x = solve(&a, &[rat_int(2), rat_int(2)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![rat_int(2), rat_int(2)]);
        assert!(solve(&a, &[rat_int(1), rat_int(2)]).is_none());
    }

    #[test]
    fn square_class_examples() {
        assert_eq!(square_class(&rat_int(4)).unwrap(), SquareClass::one());
        assert_eq!(
            square_class(&rat(-8, 9)).unwrap().representative(),
            &BigInt::from(-2)
        );
        assert_eq!(
            square_class(&rat_int(12)).unwrap().representative(),
            &BigInt::from(3)
        );
        assert_eq!(
            square_class(&rat_int(0)),
            Err(LinalgError::ZeroSquareClass)
        );
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(1000))]
        #[test]
        fn square_class_multiplicative(
            ap in -200i64..=200, aq in 1i64..=40,
            bp in -200i64..=200, bq in 1i64..=40,
        ) {
            proptest::prop_assume!(ap != 0 && bp != 0);
            let a = rat(ap, aq);
            let b = rat(bp, bq);
            let lhs = square_class(&(&a * &b)).unwrap();
            let rhs = square_class(&a).unwrap().mul(&square_class(&b).unwrap());
            proptest::prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn rational_serialization_shape() {
        assert_eq!(rat(3, 1).to_string(), "3");
        assert_eq!(rat(-3, 6).to_string(), "-1/2");
    }

    #[test]
    fn empty_shapes_are_supported() {
        let m = RatMatrix::zeros(0, 3);
        let rki = rank_kernel_image(&m);
        assert_eq!(rki.rank, 0);
        assert_eq!(rki.kernel.cols(), 3);
        let m = RatMatrix::zeros(3, 0);
        let rki = rank_kernel_image(&m);
        assert_eq!(rki.rank, 0);
        assert_eq!(rki.kernel.cols(), 0);
    }

    #[test]
    fn factor_bound_is_enforced() {
        // 1000003 and 1000033 are primes above the trial-division bound.
        let n = BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64);
        assert!(matches!(
            factor_integer(&n),
            Err(LinalgError::FactorBoundExceeded(_))
        ));
    }
}
