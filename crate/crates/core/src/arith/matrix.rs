//! Dense matrices over Z and Q with exact arithmetic: Smith and Hermite
//! normal forms with unimodular transforms, characteristic polynomials,
//! kernels, saturation, and row-lattice operations.
//!
//! Conventions: matrices act on column vectors; a "row lattice" is the set
//! of integer combinations of the rows of a basis matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = Ratio<BigInt>;

pub fn int(x: i64) -> Int {
    BigInt::from(x)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Matrix with arbitrary-precision integer entries, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Int::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = IntMatrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, int(*x));
            }
        }
        m
    }

    pub fn from_big_rows(rows: Vec<Vec<Int>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = IntMatrix::zero(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, x) in row.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Int> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows * self.cols {
            out.data[i] = &out.data[i] + &other.data[i];
        }
        out
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows * self.cols {
            out.data[i] = &out.data[i] - &other.data[i];
        }
        out
    }

    pub fn scale(&self, c: &Int) -> IntMatrix {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x = &*x * c;
        }
        out
    }

    pub fn trace(&self) -> Int {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == IntMatrix::identity(self.rows)
    }

    /// Gcd of all entries (nonnegative; 0 for the zero matrix).
    pub fn content(&self) -> Int {
        let mut g = Int::zero();
        for x in &self.data {
            g = g.gcd(x);
        }
        g
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn submatrix_rows(&self, rows: &[usize]) -> IntMatrix {
        let mut m = IntMatrix::zero(rows.len(), self.cols);
        for (a, &i) in rows.iter().enumerate() {
            for j in 0..self.cols {
                m.set(a, j, self.get(i, j).clone());
            }
        }
        m
    }
}

/// Result of a Smith normal form computation: u * m * v = d with u, v
/// unimodular, d diagonal with d_1 | d_2 | ... and nonnegative entries.
#[derive(Debug, Clone)]
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub uinv: IntMatrix,
    pub v: IntMatrix,
    pub vinv: IntMatrix,
}

impl Snf {
    pub fn rank(&self) -> usize {
        let n = self.d.rows.min(self.d.cols);
        (0..n).take_while(|&i| !self.d.get(i, i).is_zero()).count()
    }

    /// Nonzero diagonal entries d_1 | d_2 | ...
    pub fn invariant_factors(&self) -> Vec<Int> {
        let n = self.d.rows.min(self.d.cols);
        (0..n)
            .map(|i| self.d.get(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

struct SnfCalc {
    d: IntMatrix,
    u: IntMatrix,
    uinv: IntMatrix,
    v: IntMatrix,
    vinv: IntMatrix,
}

impl SnfCalc {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.d.cols {
            let x = self.d.get(a, j).clone();
            self.d.set(a, j, self.d.get(b, j).clone());
            self.d.set(b, j, x);
        }
        for j in 0..self.u.cols {
            let x = self.u.get(a, j).clone();
            self.u.set(a, j, self.u.get(b, j).clone());
            self.u.set(b, j, x);
        }
        for i in 0..self.uinv.rows {
            let x = self.uinv.get(i, a).clone();
            self.uinv.set(i, a, self.uinv.get(i, b).clone());
            self.uinv.set(i, b, x);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.d.rows {
            let x = self.d.get(i, a).clone();
            self.d.set(i, a, self.d.get(i, b).clone());
            self.d.set(i, b, x);
        }
        for i in 0..self.v.rows {
            let x = self.v.get(i, a).clone();
            self.v.set(i, a, self.v.get(i, b).clone());
            self.v.set(i, b, x);
        }
        for j in 0..self.vinv.cols {
            let x = self.vinv.get(a, j).clone();
            self.vinv.set(a, j, self.vinv.get(b, j).clone());
            self.vinv.set(b, j, x);
        }
    }

    /// row_a -= q * row_b on d; keeps u*m*v = d.
    fn row_sub(&mut self, a: usize, b: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.d.cols {
            let x = self.d.get(a, j) - q * self.d.get(b, j);
            self.d.set(a, j, x);
        }
        for j in 0..self.u.cols {
            let x = self.u.get(a, j) - q * self.u.get(b, j);
            self.u.set(a, j, x);
        }
        // uinv <- uinv * (I + q E_{ab}): col b += q * col a
        for i in 0..self.uinv.rows {
            let x = self.uinv.get(i, b) + q * self.uinv.get(i, a);
            self.uinv.set(i, b, x);
        }
    }

    /// col_a -= q * col_b on d.
    fn col_sub(&mut self, a: usize, b: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.d.rows {
            let x = self.d.get(i, a) - q * self.d.get(i, b);
            self.d.set(i, a, x);
        }
        for i in 0..self.v.rows {
            let x = self.v.get(i, a) - q * self.v.get(i, b);
            self.v.set(i, a, x);
        }
        // vinv <- (I + q E_{ba}) * vinv: row b += q * row a
        for j in 0..self.vinv.cols {
            let x = self.vinv.get(b, j) + q * self.vinv.get(a, j);
            self.vinv.set(b, j, x);
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.d.cols {
            let x = -self.d.get(a, j).clone();
            self.d.set(a, j, x);
        }
        for j in 0..self.u.cols {
            let x = -self.u.get(a, j).clone();
            self.u.set(a, j, x);
        }
        for i in 0..self.uinv.rows {
            let x = -self.uinv.get(i, a).clone();
            self.uinv.set(i, a, x);
        }
    }
}

/// Smith normal form with all four transforms. Pivot selection: smallest
/// absolute value among nonzero entries of the working submatrix, ties
/// broken in row-major order.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (r, c) = (m.rows, m.cols);
    let mut calc = SnfCalc {
        d: m.clone(),
        u: IntMatrix::identity(r),
        uinv: IntMatrix::identity(r),
        v: IntMatrix::identity(c),
        vinv: IntMatrix::identity(c),
    };
    let n = r.min(c);
    for t in 0..n {
        'pivot: loop {
            // smallest |nonzero| in d[t.., t..], row-major tie-break
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = calc.d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    match &best {
                        None => best = Some((i, j)),
                        Some((bi, bj)) => {
                            if x.abs() < calc.d.get(*bi, *bj).abs() {
                                best = Some((i, j));
                            }
                        }
                    }
                }
            }
            let (pi, pj) = match best {
                None => break 'pivot, // submatrix is zero
                Some(p) => p,
            };
            calc.swap_rows(t, pi);
            calc.swap_cols(t, pj);
            let mut dirty = false;
            for i in t + 1..r {
                let q = calc.d.get(i, t).div_floor(calc.d.get(t, t));
                calc.row_sub(i, t, &q);
                if !calc.d.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..c {
                let q = calc.d.get(t, j).div_floor(calc.d.get(t, t));
                calc.col_sub(j, t, &q);
                if !calc.d.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // pivot must divide the remaining submatrix for the chain
            let p = calc.d.get(t, t).clone();
            for i in t + 1..r {
                for j in t + 1..c {
                    if !calc.d.get(i, j).mod_floor(&p).is_zero() {
                        let one = Int::one();
                        let minus = -one.clone();
                        calc.row_sub(t, i, &minus); // row_t += row_i
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
        if calc.d.get(t, t).is_negative() {
            calc.negate_row(t);
        }
    }
    debug_assert!(calc.u.mul(m).mul(&calc.v) == calc.d);
    Snf { d: calc.d, u: calc.u, uinv: calc.uinv, v: calc.v, vinv: calc.vinv }
}

/// Monic characteristic polynomial of a square integer matrix, exact.
/// Coefficients returned low degree first; result has length n+1 and
/// leading coefficient 1. Uses the Faddeev-LeVerrier recursion; every
/// division is exact and asserted.
pub fn char_poly(m: &IntMatrix) -> Vec<Int> {
    assert_eq!(m.rows, m.cols, "char_poly needs a square matrix");
    let n = m.rows;
    let mut coeffs = vec![Int::zero(); n + 1];
    coeffs[n] = Int::one();
    let mut nk = IntMatrix::identity(n); // N_0 adjusted below
    let mut ck = Int::one();
    for k in 1..=n {
        // N_k = A * (N_{k-1} + c_{k-1} I), with N_0 + c_0 I := I
        let mut adj = nk.clone();
        if k > 1 {
            for i in 0..n {
                let x = adj.get(i, i) + &ck;
                adj.set(i, i, x);
            }
        }
        nk = m.mul(&adj);
        let t = nk.trace();
        let kk = int(k as i64);
        let (q, r) = (-t).div_rem(&kk);
        assert!(r.is_zero(), "Faddeev-LeVerrier division must be exact");
        ck = q;
        coeffs[n - k] = ck.clone();
    }
    coeffs
}

/// Evaluate a polynomial (low degree first) at an integer matrix.
pub fn eval_poly_at_matrix(coeffs: &[Int], m: &IntMatrix) -> IntMatrix {
    let n = m.rows;
    let mut acc = IntMatrix::zero(n, n);
    for c in coeffs.iter().rev() {
        acc = acc.mul(m);
        for i in 0..n {
            let x = acc.get(i, i) + c;
            acc.set(i, i, x);
        }
    }
    acc
}

/// Row Hermite normal form: returns the canonical basis of the row lattice
/// of `m` (zero rows dropped, pivots positive, entries above a pivot
/// reduced into [0, pivot)).
pub fn hnf_rows(m: &IntMatrix) -> IntMatrix {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if a.get(i, c).is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(i),
                    Some(b) => {
                        if a.get(i, c).abs() < a.get(b, c).abs() {
                            best = Some(i);
                        }
                    }
                }
            }
            let b = match best {
                None => break,
                Some(b) => b,
            };
            // swap into place
            if b != r {
                for j in 0..cols {
                    let x = a.get(r, j).clone();
                    a.set(r, j, a.get(b, j).clone());
                    a.set(b, j, x);
                }
            }
            let mut clean = true;
            for i in r + 1..rows {
                let q = a.get(i, c).div_floor(a.get(r, c));
                if !q.is_zero() {
                    for j in 0..cols {
                        let x = a.get(i, j) - &q * a.get(r, j);
                        a.set(i, j, x);
                    }
                }
                if !a.get(i, c).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if a.get(r, c).is_zero() {
            continue;
        }
        if a.get(r, c).is_negative() {
            for j in 0..cols {
                let x = -a.get(r, j).clone();
                a.set(r, j, x);
            }
        }
        for i in 0..r {
            let q = a.get(i, c).div_floor(a.get(r, c));
            if !q.is_zero() {
                for j in 0..cols {
                    let x = a.get(i, j) - &q * a.get(r, j);
                    a.set(i, j, x);
                }
            }
        }
        r += 1;
    }
    a.submatrix_rows(&(0..r).collect::<Vec<_>>())
}

/// Basis of the left kernel {x : x * m = 0} as rows; the basis is
/// saturated (the kernel lattice is a direct summand). Computed by row
/// reduction of the augmented matrix [m | I]: rows whose m-part vanishes
/// carry a kernel basis in the identity part.
pub fn left_kernel(m: &IntMatrix) -> IntMatrix {
    let aug = {
        let mut a = IntMatrix::zero(m.rows, m.cols + m.rows);
        for i in 0..m.rows {
            for j in 0..m.cols {
                a.set(i, j, m.get(i, j).clone());
            }
            a.set(i, m.cols + i, Int::one());
        }
        a
    };
    let h = hnf_rows(&aug);
    let mut rows = Vec::new();
    for i in 0..h.rows {
        if (0..m.cols).all(|j| h.get(i, j).is_zero()) {
            rows.push((m.cols..m.cols + m.rows).map(|j| h.get(i, j).clone()).collect());
        }
    }
    if rows.is_empty() {
        return IntMatrix::zero(0, m.rows);
    }
    hnf_rows(&IntMatrix::from_big_rows(rows))
}

/// Basis of the right kernel {v : m v = 0} as rows of the result.
pub fn right_kernel(m: &IntMatrix) -> IntMatrix {
    left_kernel(&m.transpose())
}

/// Saturation of the row lattice: a basis of (Q-span of rows) intersected
/// with Z^n. Rows of `m` need not be independent.
pub fn saturate_rows(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    // u m v = d  =>  m = uinv d vinv; Q-row-span of m = span of first
    // `rank` rows of vinv, which are a saturated basis.
    hnf_rows(&snf.vinv.submatrix_rows(&(0..rank).collect::<Vec<_>>()))
}

/// Intersection of two row lattices inside Z^n.
pub fn lattice_intersect(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.cols, b.cols);
    let stacked = a.vstack(b);
    let ker = left_kernel(&stacked);
    // each kernel row (x | y) gives x*A = -y*B in the intersection
    let mut rows = Vec::new();
    for i in 0..ker.rows {
        let x = IntMatrix::from_big_rows(vec![(0..a.rows).map(|j| ker.get(i, j).clone()).collect()]);
        rows.push(x.mul(a).row(0));
    }
    if rows.is_empty() {
        return IntMatrix::zero(0, a.cols);
    }
    hnf_rows(&IntMatrix::from_big_rows(rows))
}

/// Sum of two row lattices.
pub fn lattice_sum(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    hnf_rows(&a.vstack(b))
}

/// Whether v lies in the row lattice spanned by the rows of `basis`
/// (rows need not be a basis).
pub fn lattice_contains(basis: &IntMatrix, v: &[Int]) -> bool {
    let h = hnf_rows(basis);
    let mut v = v.to_vec();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    'outer: for i in 0..h.rows {
        for j in 0..h.cols {
            if !h.get(i, j).is_zero() {
                pivots.push((i, j));
                continue 'outer;
            }
        }
    }
    for (i, j) in pivots {
        let (q, r) = v[j].div_rem(h.get(i, j));
        if !r.is_zero() {
            return false;
        }
        for t in 0..h.cols {
            v[t] = &v[t] - &q * h.get(i, t);
        }
    }
    v.iter().all(|x| x.is_zero())
}

/// Invariant factors of sup/sub for a sublattice `sub` of the row lattice
/// `sup` of the same rank; both given by bases (rows).
pub fn quotient_invariant_factors(sup: &IntMatrix, sub: &IntMatrix) -> Vec<Int> {
    assert_eq!(sup.cols, sub.cols);
    assert_eq!(sup.rows, sub.rows, "quotient needs equal ranks");
    // solve sub = C * sup over Q, entries must be integral
    let sup_t = RatMatrix::from_int(sup.transpose());
    let mut c_rows = Vec::new();
    for i in 0..sub.rows {
        let b: Vec<Rat> = sub.row(i).into_iter().map(Rat::from).collect();
        let x = sup_t
            .solve(&b)
            .expect("sub must lie in the span of sup");
        let mut row = Vec::new();
        for e in x {
            assert!(e.is_integer(), "sub must be a sublattice of sup");
            row.push(e.to_integer());
        }
        c_rows.push(row);
    }
    let c = IntMatrix::from_big_rows(c_rows);
    let snf = smith_normal_form(&c);
    assert_eq!(snf.rank(), sub.rows, "sublattice of full rank expected");
    snf.invariant_factors()
}

/// Matrix over Q stored as an integer matrix with a positive common
/// denominator, kept in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    pub num: IntMatrix,
    pub den: Int,
}

impl RatMatrix {
    pub fn from_int(num: IntMatrix) -> Self {
        RatMatrix { num, den: Int::one() }
    }

    pub fn identity(n: usize) -> Self {
        RatMatrix::from_int(IntMatrix::identity(n))
    }

    pub fn zero(r: usize, c: usize) -> Self {
        RatMatrix::from_int(IntMatrix::zero(r, c))
    }

    pub fn new(num: IntMatrix, den: Int) -> Self {
        assert!(!den.is_zero(), "denominator must be nonzero");
        let mut m = RatMatrix { num, den };
        m.normalize();
        m
    }

    pub fn from_rat_rows(rows: Vec<Vec<Rat>>) -> Self {
        let mut den = Int::one();
        for row in &rows {
            for x in row {
                den = den.lcm(x.denom());
            }
        }
        let irows: Vec<Vec<Int>> = rows
            .iter()
            .map(|row| row.iter().map(|x| x.numer() * (&den / x.denom())).collect())
            .collect();
        RatMatrix::new(IntMatrix::from_big_rows(irows), den)
    }

    pub fn rows(&self) -> usize {
        self.num.rows
    }

    pub fn cols(&self) -> usize {
        self.num.cols
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -self.den.clone();
            self.num = self.num.scale(&int(-1));
        }
        let mut g = self.num.content();
        if g.is_zero() {
            self.den = Int::one();
            return;
        }
        g = g.gcd(&self.den);
        if !g.is_one() {
            for x in self.num.data.iter_mut() {
                *x = &*x / &g;
            }
            self.den = &self.den / &g;
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Rat {
        Rat::new(self.num.get(i, j).clone(), self.den.clone())
    }

    pub fn row_rat(&self, i: usize) -> Vec<Rat> {
        (0..self.cols()).map(|j| self.entry(i, j)).collect()
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        RatMatrix::new(self.num.mul(&other.num), &self.den * &other.den)
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        let l = self.den.lcm(&other.den);
        let a = self.num.scale(&(&l / &self.den));
        let b = other.num.scale(&(&l / &other.den));
        RatMatrix::new(a.add(&b), l)
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        let l = self.den.lcm(&other.den);
        let a = self.num.scale(&(&l / &self.den));
        let b = other.num.scale(&(&l / &other.den));
        RatMatrix::new(a.sub(&b), l)
    }

    pub fn scale(&self, c: &Rat) -> RatMatrix {
        RatMatrix::new(self.num.scale(c.numer()), &self.den * c.denom())
    }

    pub fn transpose(&self) -> RatMatrix {
        RatMatrix { num: self.num.transpose(), den: self.den.clone() }
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols(), v.len());
        (0..self.rows())
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.cols() {
                    acc += self.entry(i, j) * &v[j];
                }
                acc
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.num == self.num.transpose()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// Gaussian elimination; returns (row echelon form dense, rank).
    fn echelon(mut rows: Vec<Vec<Rat>>) -> (Vec<Vec<Rat>>, usize) {
        let nrows = rows.len();
        let ncols = if nrows == 0 { 0 } else { rows[0].len() };
        let mut r = 0;
        for c in 0..ncols {
            if r == nrows {
                break;
            }
            let piv = (r..nrows).find(|&i| !rows[i][c].is_zero());
            let piv = match piv {
                None => continue,
                Some(p) => p,
            };
            rows.swap(r, piv);
            let inv = rows[r][c].recip();
            for x in rows[r].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..nrows {
                if i != r && !rows[i][c].is_zero() {
                    let f = rows[i][c].clone();
                    for j in 0..ncols {
                        let sub = &rows[r][j] * &f;
                        rows[i][j] = &rows[i][j] - &sub;
                    }
                }
            }
            r += 1;
        }
        (rows, r)
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<Rat>> = (0..self.rows()).map(|i| self.row_rat(i)).collect();
        Self::echelon(rows).1
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.rows(), self.cols());
        let n = self.rows();
        let mut rows: Vec<Vec<Rat>> = (0..n).map(|i| self.row_rat(i)).collect();
        let mut det = Rat::one();
        for c in 0..n {
            let piv = (c..n).find(|&i| !rows[i][c].is_zero());
            let piv = match piv {
                None => return Rat::zero(),
                Some(p) => p,
            };
            if piv != c {
                rows.swap(c, piv);
                det = -det;
            }
            det *= &rows[c][c];
            let inv = rows[c][c].recip();
            for i in c + 1..n {
                if !rows[i][c].is_zero() {
                    let f = &rows[i][c] * &inv;
                    for j in c..n {
                        let sub = &rows[c][j] * &f;
                        rows[i][j] = &rows[i][j] - &sub;
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows(), self.cols());
        let n = self.rows();
        let mut rows: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut r = self.row_rat(i);
                for j in 0..n {
                    r.push(if i == j { Rat::one() } else { Rat::zero() });
                }
                r
            })
            .collect();
        let (ech, rank) = Self::echelon(rows.drain(..).collect());
        if rank < n {
            return None;
        }
        let inv_rows: Vec<Vec<Rat>> = ech.iter().map(|r| r[n..].to_vec()).collect();
        Some(RatMatrix::from_rat_rows(inv_rows))
    }

    /// Solve self * x = b; None if inconsistent. If the solution is not
    /// unique, returns the one with free variables set to zero.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(self.rows(), b.len());
        let n = self.cols();
        let rows: Vec<Vec<Rat>> = (0..self.rows())
            .map(|i| {
                let mut r = self.row_rat(i);
                r.push(b[i].clone());
                r
            })
            .collect();
        let (ech, _) = Self::echelon(rows);
        let mut x = vec![Rat::zero(); n];
        for row in ech.iter() {
            let lead = (0..n).find(|&j| !row[j].is_zero());
            match lead {
                Some(j) => {
                    // row is reduced: row[j] = 1 and j is the only pivot here
                    let mut val = row[n].clone();
                    for t in j + 1..n {
                        if !row[t].is_zero() {
                            let sub = &row[t] * &x[t];
                            val = &val - &sub;
                        }
                    }
                    x[j] = val;
                }
                None => {
                    if !row[n].is_zero() {
                        return None;
                    }
                }
            }
        }
        // back-substitution above is only valid after full reduction; the
        // echelon form is fully reduced, so pivots have zeros elsewhere and
        // free variables are zero. Verify exactly.
        let check = self.mul_vec(&x);
        if check.iter().zip(b.iter()).all(|(u, v)| u == v) {
            Some(x)
        } else {
            None
        }
    }

    /// Basis (rows) of the right null space over Q.
    pub fn right_nullspace(&self) -> Vec<Vec<Rat>> {
        let n = self.cols();
        let rows: Vec<Vec<Rat>> = (0..self.rows()).map(|i| self.row_rat(i)).collect();
        let (ech, _) = Self::echelon(rows);
        let mut pivots = vec![None; ech.len()];
        let mut is_pivot_col = vec![false; n];
        for (i, row) in ech.iter().enumerate() {
            if let Some(j) = (0..n).find(|&j| !row[j].is_zero()) {
                pivots[i] = Some(j);
                is_pivot_col[j] = true;
            }
        }
        let mut basis = Vec::new();
        for f in 0..n {
            if is_pivot_col[f] {
                continue;
            }
            let mut v = vec![Rat::zero(); n];
            v[f] = Rat::one();
            for (i, row) in ech.iter().enumerate() {
                if let Some(j) = pivots[i] {
                    v[j] = -row[f].clone();
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Content of a rational vector: the positive rational m such that
/// v = m * (primitive integer vector). None for the zero vector.
pub fn rat_vec_content(v: &[Rat]) -> Option<Rat> {
    if v.iter().all(|x| x.is_zero()) {
        return None;
    }
    let mut den = Int::one();
    for x in v {
        den = den.lcm(x.denom());
    }
    let mut g = Int::zero();
    for x in v {
        g = g.gcd(&(x.numer() * (&den / x.denom())));
    }
    Some(Rat::new(g, den))
}

/// Divide a rational vector by its content, producing a primitive integer
/// vector. None for the zero vector.
pub fn primitive_part(v: &[Rat]) -> Option<Vec<Int>> {
    let c = rat_vec_content(v)?;
    Some(v.iter().map(|x| (x / &c).to_integer()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_identity() {
        let m = IntMatrix::identity(2);
        let s = smith_normal_form(&m);
        assert_eq!(s.invariant_factors(), vec![int(1), int(1)]);
    }

    #[test]
    fn snf_diag_with_divisibility() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 4]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.invariant_factors(), vec![int(2), int(4)]);
    }

    #[test]
    fn snf_diag_2_3() {
        // brute-force oracle over row/column operations forces (1, 6)
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.invariant_factors(), vec![int(1), int(6)]);
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
        assert!(s.u.mul(&s.uinv).is_identity());
        assert!(s.v.mul(&s.vinv).is_identity());
    }

    #[test]
    fn snf_rectangular() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 6], vec![4, 8, 12]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.rank(), 1);
        assert_eq!(s.invariant_factors(), vec![int(2)]);
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
    }

    #[test]
    fn char_poly_examples() {
        let m = IntMatrix::from_rows(&[vec![3, 0], vec![0, -2]]);
        // (x-3)(x+2) = x^2 - x - 6
        assert_eq!(char_poly(&m), vec![int(-6), int(-1), int(1)]);
        let z = IntMatrix::zero(3, 3);
        assert_eq!(char_poly(&z), vec![int(0), int(0), int(0), int(1)]);
    }

    #[test]
    fn cayley_hamilton_small() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 0], vec![-1, 3, 5], vec![2, 2, -4]]);
        let cp = char_poly(&m);
        assert!(eval_poly_at_matrix(&cp, &m).is_zero());
    }

    #[test]
    fn saturation_examples() {
        let m = IntMatrix::from_rows(&[vec![2, 0]]);
        assert_eq!(saturate_rows(&m), IntMatrix::from_rows(&[vec![1, 0]]));
        let m = IntMatrix::from_rows(&[vec![1, 1]]);
        assert_eq!(saturate_rows(&m), IntMatrix::from_rows(&[vec![1, 1]]));
        // span{(2,4,0),(0,6,0)} in Z^3: saturation is Z^2 x 0 and the
        // quotient presentation has all invariant factors 1
        let m = IntMatrix::from_rows(&[vec![2, 4, 0], vec![0, 6, 0]]);
        let s = saturate_rows(&m);
        assert_eq!(s.rows, 2);
        let snf = smith_normal_form(&s);
        assert!(snf.invariant_factors().iter().all(|x| x.is_one()));
        // idempotent
        assert_eq!(saturate_rows(&s), s);
    }

    #[test]
    fn kernel_and_intersection() {
        let m = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        let k = left_kernel(&m);
        assert_eq!(k.rows, 1);
        let prod = k.mul(&m);
        assert!(prod.is_zero());

        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]);
        let b = IntMatrix::from_rows(&[vec![1, 0], vec![0, 3]]);
        let i = lattice_intersect(&a, &b);
        assert_eq!(i, IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
    }

    #[test]
    fn quotient_factors() {
        let sup = IntMatrix::identity(2);
        let sub = IntMatrix::from_rows(&[vec![2, 0], vec![0, 6]]);
        assert_eq!(quotient_invariant_factors(&sup, &sub), vec![int(2), int(6)]);
    }

    #[test]
    fn rat_solve_and_inverse() {
        let a = RatMatrix::from_rat_rows(vec![
            vec![rat(1, 2), rat(0, 1)],
            vec![rat(1, 3), rat(1, 1)],
        ]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), RatMatrix::identity(2));
        let b = vec![rat(1, 1), rat(0, 1)];
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
    }

    #[test]
    fn content_examples() {
        let v = vec![rat(4, 6), rat(2, 3), rat(-2, 1)];
        // common denominator 3: (2, 2, -6)/3, gcd 2 -> content 2/3
        assert_eq!(rat_vec_content(&v).unwrap(), rat(2, 3));
        assert_eq!(primitive_part(&v).unwrap(), vec![int(1), int(1), int(-3)]);
    }
}
