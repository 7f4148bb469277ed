//! Arithmetic in F_{l^k} for a prime l, with a deterministic modulus: the
//! lexicographically least monic irreducible polynomial of degree k over
//! F_l. Includes polynomial arithmetic over F_l (gcd, modular
//! exponentiation, distinct-degree factorization), linear algebra over
//! F_{l^k} (kernel, characteristic polynomial via the Berkowitz
//! division-free algorithm), and root scans.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

/// Element of F_{l^k}: coordinates with respect to the powers of the class
/// of x modulo the field's modulus polynomial, low degree first, length k.
pub type FfElem = Vec<u64>;


// ---------- polynomials over F_l (prime field), coefficients low first ----------

fn poly_trim(p: &mut Vec<u64>) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
}

fn poly_deg(p: &[u64]) -> usize {
    let mut d = p.len();
    while d > 1 && p[d - 1] == 0 {
        d -= 1;
    }
    d - 1
}

fn poly_is_zero(p: &[u64]) -> bool {
    p.iter().all(|&c| c == 0)
}

fn poly_add(ell: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0);
        out[i] = x % ell;
    }
    poly_trim(&mut out);
    out
}

fn poly_scale(ell: u64, a: &[u64], c: u64) -> Vec<u64> {
    let mut out: Vec<u64> = a.iter().map(|&x| (x as u128 * c as u128 % ell as u128) as u64).collect();
    poly_trim(&mut out);
    out
}

fn poly_sub(ell: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    poly_add(ell, a, &poly_scale(ell, b, ell - 1))
}

fn poly_mul(ell: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    if poly_is_zero(a) || poly_is_zero(b) {
        return vec![0];
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u128 * y as u128) % ell as u128;
        }
    }
    let mut out: Vec<u64> = out.into_iter().map(|x| x as u64).collect();
    poly_trim(&mut out);
    out
}

fn inv_mod(ell: u64, a: u64) -> u64 {
    // extended Euclid; ell prime, a != 0 mod ell
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (ell as i128, (a % ell) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "not invertible");
    t.rem_euclid(ell as i128) as u64
}

/// Remainder of a modulo b (b nonzero).
fn poly_rem(ell: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let db = poly_deg(b);
    let binv = inv_mod(ell, b[db]);
    let mut r = a.to_vec();
    poly_trim(&mut r);
    while !poly_is_zero(&r) && poly_deg(&r) >= db {
        let dr = poly_deg(&r);
        let c = (r[dr] as u128 * binv as u128 % ell as u128) as u64;
        // r -= c * x^{dr-db} * b
        for i in 0..=db {
            let sub = c as u128 * b[i] as u128 % ell as u128;
            let idx = dr - db + i;
            r[idx] = ((r[idx] as u128 + ell as u128 - sub) % ell as u128) as u64;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_divexact(ell: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    // long division, asserting zero remainder
    let db = poly_deg(b);
    let binv = inv_mod(ell, b[db]);
    let mut r = a.to_vec();
    poly_trim(&mut r);
    if poly_is_zero(&r) {
        return vec![0];
    }
    let mut q = vec![0u64; poly_deg(&r).saturating_sub(db) + 1];
    while !poly_is_zero(&r) && poly_deg(&r) >= db {
        let dr = poly_deg(&r);
        let c = (r[dr] as u128 * binv as u128 % ell as u128) as u64;
        q[dr - db] = c;
        for i in 0..=db {
            let sub = c as u128 * b[i] as u128 % ell as u128;
            let idx = dr - db + i;
            r[idx] = ((r[idx] as u128 + ell as u128 - sub) % ell as u128) as u64;
        }
        poly_trim(&mut r);
    }
    assert!(poly_is_zero(&r), "division must be exact");
    poly_trim(&mut q);
    q
}

fn poly_monic(ell: u64, a: &[u64]) -> Vec<u64> {
    if poly_is_zero(a) {
        return vec![0];
    }
    let d = poly_deg(a);
    poly_scale(ell, a, inv_mod(ell, a[d]))
}

fn poly_gcd(ell: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !poly_is_zero(&b) {
        let r = poly_rem(ell, &a, &b);
        a = b;
        b = r;
    }
    poly_monic(ell, &a)
}

fn poly_derivative(ell: u64, a: &[u64]) -> Vec<u64> {
    if a.len() <= 1 {
        return vec![0];
    }
    let mut out: Vec<u64> = (1..a.len())
        .map(|i| (a[i] as u128 * (i as u128 % ell as u128) % ell as u128) as u64)
        .collect();
    poly_trim(&mut out);
    out
}

/// x^(ell^e) mod f, by repeated squaring of x^ell.
fn poly_frobenius_power(ell: u64, f: &[u64], e: u32) -> Vec<u64> {
    let mut x = vec![0, 1];
    x = poly_rem(ell, &x, f);
    for _ in 0..e {
        // raise to the ell-th power
        let mut acc = vec![1u64];
        let mut base = x.clone();
        let mut n = ell;
        while n > 0 {
            if n & 1 == 1 {
                acc = poly_rem(ell, &poly_mul(ell, &acc, &base), f);
            }
            base = poly_rem(ell, &poly_mul(ell, &base, &base), f);
            n >>= 1;
        }
        x = acc;
    }
    x
}

/// Monic irreducibility test over F_l.
pub fn poly_is_irreducible(ell: u64, f: &[u64]) -> bool {
    let n = poly_deg(f);
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    // x^(l^n) == x mod f
    let xn = poly_frobenius_power(ell, f, n as u32);
    if poly_sub(ell, &xn, &[0, 1]) != vec![0] {
        return false;
    }
    // gcd(x^(l^(n/p)) - x, f) == 1 for every prime p | n
    let mut m = n;
    let mut primes = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            primes.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    for p in primes {
        let e = (n / p) as u32;
        let xe = poly_frobenius_power(ell, f, e);
        let g = poly_gcd(ell, &poly_sub(ell, &xe, &[0, 1]), f);
        if poly_deg(&g) != 0 {
            return false;
        }
    }
    true
}

/// The lexicographically least monic irreducible polynomial of degree k
/// over F_l: coefficients (a_{k-1}, ..., a_1, a_0) enumerated in
/// lexicographic order, each in 0..l.
pub fn canonical_irreducible(ell: u64, k: usize) -> Vec<u64> {
    assert!(k >= 1);
    let mut coeffs = vec![0u64; k]; // a_{k-1} ... a_0 counters
    loop {
        let mut f = vec![0u64; k + 1];
        f[k] = 1;
        for (i, &c) in coeffs.iter().enumerate() {
            // coeffs[0] is a_{k-1}
            f[k - 1 - i] = c;
        }
        if poly_is_irreducible(ell, &f) {
            return f;
        }
        // increment the tuple lexicographically (last coordinate fastest)
        let mut i = k;
        loop {
            assert!(i > 0, "no irreducible of degree {k} over F_{ell} found");
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < ell {
                break;
            }
            coeffs[i] = 0;
        }
    }
}

/// Degrees of the irreducible factors of f over F_l, with multiplicity,
/// via squarefree decomposition and distinct-degree splitting.
pub fn factor_degrees(ell: u64, f: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut stack = vec![poly_monic(ell, f)];
    while let Some(g) = stack.pop() {
        if poly_deg(&g) == 0 {
            continue;
        }
        let dg = poly_derivative(ell, &g);
        if poly_is_zero(&dg) {
            // g = h(x^ell); over the prime field h has the same coefficients
            let d = poly_deg(&g);
            let mut h = vec![0u64; d / ell as usize + 1];
            for (i, item) in h.iter_mut().enumerate() {
                *item = g[i * ell as usize];
            }
            // g = h^ell as a product of factors
            for _ in 0..ell {
                stack.push(h.clone());
            }
            continue;
        }
        let s = poly_gcd(ell, &g, &dg);
        if poly_deg(&s) > 0 {
            stack.push(s.clone());
            stack.push(poly_divexact(ell, &g, &s));
            continue;
        }
        // g squarefree: distinct-degree
        let mut g = g;
        let mut d = 1usize;
        while poly_deg(&g) >= 2 * d {
            let xe = poly_frobenius_power(ell, &g, d as u32);
            let gd = poly_gcd(ell, &poly_sub(ell, &xe, &[0, 1]), &g);
            let e = poly_deg(&gd);
            if e > 0 {
                for _ in 0..e / d {
                    out.push(d);
                }
                g = poly_divexact(ell, &g, &gd);
            }
            d += 1;
        }
        if poly_deg(&g) > 0 {
            out.push(poly_deg(&g));
        }
    }
    out.sort_unstable();
    out
}

/// The field F_{l^k}, characteristic l prime, with the canonical modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fq {
    pub ell: u64,
    pub k: usize,
    pub modulus: Vec<u64>,
}

impl Fq {
    pub fn new(ell: u64, k: usize) -> Fq {
        assert!(k >= 1);
        assert!(is_prime_u64(ell), "characteristic must be prime");
        Fq { ell, k, modulus: canonical_irreducible(ell, k) }
    }

    pub fn order(&self) -> u64 {
        let mut n = 1u64;
        for _ in 0..self.k {
            n = n.checked_mul(self.ell).expect("field too large");
        }
        n
    }

    pub fn zero(&self) -> FfElem {
        vec![0; self.k]
    }

    pub fn one(&self) -> FfElem {
        let mut e = self.zero();
        e[0] = 1;
        e
    }

    pub fn from_u64(&self, x: u64) -> FfElem {
        let mut e = self.zero();
        e[0] = x % self.ell;
        e
    }

    pub fn from_int(&self, x: &BigInt) -> FfElem {
        let m = BigInt::from(self.ell);
        let r = x.mod_floor(&m);
        self.from_u64(r.to_u64().unwrap())
    }

    pub fn is_zero(&self, a: &FfElem) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FfElem, b: &FfElem) -> FfElem {
        (0..self.k).map(|i| (a[i] + b[i]) % self.ell).collect()
    }

    pub fn sub(&self, a: &FfElem, b: &FfElem) -> FfElem {
        (0..self.k).map(|i| (a[i] + self.ell - b[i]) % self.ell).collect()
    }

    pub fn neg(&self, a: &FfElem) -> FfElem {
        (0..self.k).map(|i| (self.ell - a[i]) % self.ell).collect()
    }

    fn reduce(&self, p: &[u64]) -> FfElem {
        let r = poly_rem(self.ell, p, &self.modulus);
        let mut e = self.zero();
        for (i, &c) in r.iter().enumerate() {
            if i < self.k {
                e[i] = c;
            }
        }
        e
    }

    pub fn mul(&self, a: &FfElem, b: &FfElem) -> FfElem {
        self.reduce(&poly_mul(self.ell, a, b))
    }

    pub fn pow(&self, a: &FfElem, mut n: u64) -> FfElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FfElem) -> FfElem {
        assert!(!self.is_zero(a), "division by zero");
        self.pow(a, self.order() - 2)
    }

    /// All field elements in lexicographic coordinate order (coordinate 0
    /// fastest). Deterministic.
    pub fn all_elements(&self) -> Vec<FfElem> {
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut cur = self.zero();
        loop {
            out.push(cur.clone());
            let mut i = 0;
            loop {
                if i == self.k {
                    return out;
                }
                cur[i] += 1;
                if cur[i] < self.ell {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    /// Degree of the minimal polynomial of a over F_l (the size of its
    /// Frobenius orbit).
    pub fn minpoly_degree(&self, a: &FfElem) -> usize {
        let mut x = self.pow(a, self.ell);
        let mut d = 1;
        while &x != a {
            x = self.pow(&x, self.ell);
            d += 1;
        }
        d
    }

    /// Evaluate a polynomial with F_l coefficients (low first) at a.
    pub fn eval_prime_poly(&self, f: &[u64], a: &FfElem) -> FfElem {
        let mut acc = self.zero();
        for &c in f.iter().rev() {
            acc = self.mul(&acc, a);
            acc = self.add(&acc, &self.from_u64(c));
        }
        acc
    }

    /// Roots in this field of a polynomial with F_l coefficients, by scan.
    pub fn roots_of_prime_poly(&self, f: &[u64]) -> Vec<FfElem> {
        self.all_elements()
            .into_iter()
            .filter(|a| self.is_zero(&self.eval_prime_poly(f, a)))
            .collect()
    }

    /// Minimal polynomial of a over F_l (coefficients low first): the
    /// product of x - sigma(a) over the Frobenius orbit.
    pub fn minpoly(&self, a: &FfElem) -> Vec<u64> {
        let mut orbit = vec![a.clone()];
        let mut x = self.pow(a, self.ell);
        while &x != a {
            orbit.push(x.clone());
            x = self.pow(&x, self.ell);
        }
        let mut coeffs: Vec<FfElem> = vec![self.one()];
        for root in &orbit {
            let mut next = vec![self.zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = self.add(&next[i + 1], c);
                let t = self.mul(root, c);
                next[i] = self.sub(&next[i], &t);
            }
            coeffs = next;
        }
        coeffs
            .iter()
            .map(|c| {
                assert!(c[1..].iter().all(|&e| e == 0), "minpoly has prime-field coefficients");
                c[0]
            })
            .collect()
    }

    /// The canonical subfield F_{l^d} (d | k) with the image in this field
    /// of its generator: the lexicographically least root of the canonical
    /// degree-d modulus.
    pub fn subfield(&self, d: usize) -> (Fq, FfElem) {
        assert!(self.k % d == 0, "subfield degree must divide");
        let sub = Fq::new(self.ell, d);
        let rho = self
            .roots_of_prime_poly(&sub.modulus)
            .into_iter()
            .next()
            .expect("canonical modulus splits in the overfield");
        (sub, rho)
    }

    /// Express a as an element of the canonical F_{l^d} through the
    /// embedding sending the subfield generator to `rho`. Panics if a is
    /// not in the image.
    pub fn project_to_subfield(&self, d: usize, rho: &FfElem, a: &FfElem) -> FfElem {
        let fl = Fq::new(self.ell, 1);
        // columns: coordinates of rho^i (i < d) in this field
        let mut m = FqMatrix::zero(&fl, self.k, d);
        let mut pow = self.one();
        for i in 0..d {
            for r in 0..self.k {
                m.set(r, i, fl.from_u64(pow[r]));
            }
            pow = self.mul(&pow, rho);
        }
        let b: Vec<FfElem> = (0..self.k).map(|r| fl.from_u64(a[r])).collect();
        let x = m.solve(&fl, &b).expect("element lies in the subfield");
        x.into_iter().map(|e| e[0]).collect()
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense matrix over F_{l^k}; entries row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<FfElem>,
}

impl FqMatrix {
    pub fn zero(f: &Fq, rows: usize, cols: usize) -> Self {
        FqMatrix { rows, cols, data: vec![f.zero(); rows * cols] }
    }

    pub fn identity(f: &Fq, n: usize) -> Self {
        let mut m = FqMatrix::zero(f, n, n);
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }

    /// Reduce an integer matrix into the prime subfield of f.
    pub fn from_int_matrix(f: &Fq, m: &super::matrix::IntMatrix) -> Self {
        let mut out = FqMatrix::zero(f, m.rows, m.cols);
        for i in 0..m.rows {
            for j in 0..m.cols {
                out.set(i, j, f.from_int(m.get(i, j)));
            }
        }
        out
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &FfElem {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FfElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, f: &Fq, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = FqMatrix::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), &f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn sub(&self, f: &Fq, other: &FqMatrix) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows * self.cols {
            out.data[i] = f.sub(&out.data[i], &other.data[i]);
        }
        out
    }

    pub fn add(&self, f: &Fq, other: &FqMatrix) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows * self.cols {
            out.data[i] = f.add(&out.data[i], &other.data[i]);
        }
        out
    }

    pub fn scale(&self, f: &Fq, c: &FfElem) -> FqMatrix {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x = f.mul(x, c);
        }
        out
    }

    pub fn mul_vec(&self, f: &Fq, v: &[FfElem]) -> Vec<FfElem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for j in 0..self.cols {
                    acc = f.add(&acc, &f.mul(self.get(i, j), &v[j]));
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self, f: &Fq) -> bool {
        self.data.iter().all(|x| f.is_zero(x))
    }

    /// Row echelon reduction in place; returns the rank.
    fn echelon(&mut self, f: &Fq) -> usize {
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let piv = (r..self.rows).find(|&i| !f.is_zero(self.get(i, c)));
            let piv = match piv {
                None => continue,
                Some(p) => p,
            };
            for j in 0..self.cols {
                let x = self.get(r, j).clone();
                self.set(r, j, self.get(piv, j).clone());
                self.set(piv, j, x);
            }
            let inv = f.inv(self.get(r, c));
            for j in 0..self.cols {
                let x = f.mul(self.get(r, j), &inv);
                self.set(r, j, x);
            }
            for i in 0..self.rows {
                if i != r && !f.is_zero(self.get(i, c)) {
                    let factor = self.get(i, c).clone();
                    for j in 0..self.cols {
                        let x = f.sub(self.get(i, j), &f.mul(self.get(r, j), &factor));
                        self.set(i, j, x);
                    }
                }
            }
            r += 1;
        }
        r
    }

    pub fn rank(&self, f: &Fq) -> usize {
        self.clone().echelon(f)
    }

    /// Nonzero rows of the reduced row echelon form: a canonical basis of
    /// the row space.
    pub fn row_echelon_basis(&self, f: &Fq) -> Vec<Vec<FfElem>> {
        let mut m = self.clone();
        let r = m.echelon(f);
        (0..r)
            .map(|i| (0..m.cols).map(|j| m.get(i, j).clone()).collect())
            .collect()
    }

    /// Basis of the null space {v : m v = 0}, returned as rows.
    /// Dimension equals cols - rank.
    pub fn kernel(&self, f: &Fq) -> Vec<Vec<FfElem>> {
        let mut m = self.clone();
        let _ = m.echelon(f);
        let n = self.cols;
        let mut pivots: Vec<Option<usize>> = vec![None; m.rows];
        let mut is_pivot = vec![false; n];
        for i in 0..m.rows {
            if let Some(j) = (0..n).find(|&j| !f.is_zero(m.get(i, j))) {
                pivots[i] = Some(j);
                is_pivot[j] = true;
            }
        }
        let mut basis = Vec::new();
        for free in 0..n {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![f.zero(); n];
            v[free] = f.one();
            for i in 0..m.rows {
                if let Some(j) = pivots[i] {
                    v[j] = f.neg(m.get(i, free));
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Solve self * x = b; None if inconsistent (free variables zero).
    pub fn solve(&self, f: &Fq, b: &[FfElem]) -> Option<Vec<FfElem>> {
        assert_eq!(self.rows, b.len());
        let n = self.cols;
        let mut aug = FqMatrix::zero(f, self.rows, n + 1);
        for i in 0..self.rows {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n, b[i].clone());
        }
        let _ = aug.echelon(f);
        let mut x = vec![f.zero(); n];
        for i in 0..self.rows {
            match (0..n).find(|&j| !f.is_zero(aug.get(i, j))) {
                Some(j) => x[j] = aug.get(i, n).clone(),
                None => {
                    if !f.is_zero(aug.get(i, n)) {
                        return None;
                    }
                }
            }
        }
        let check = self.mul_vec(f, &x);
        if check == b.to_vec() {
            Some(x)
        } else {
            None
        }
    }

    /// Characteristic polynomial (monic, low-degree-first coefficients)
    /// via the Berkowitz division-free algorithm. Valid over any field,
    /// including small characteristic.
    pub fn char_poly(&self, f: &Fq) -> Vec<FfElem> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return vec![f.one()];
        }
        // Berkowitz: iteratively build the coefficient vector.
        // c holds the char poly of the leading principal r x r minor,
        // highest degree first, length r+1.
        let mut c: Vec<FfElem> = vec![f.one(), f.neg(self.get(0, 0))];
        for r in 1..n {
            // partition the (r+1)x(r+1) leading minor:
            // M = [A  S; Rv  a] with A the r x r minor
            let a = self.get(r, r).clone();
            // Toeplitz column entries: t_0 = 1 (deg r+1 term handled via
            // the Toeplitz structure), we need powers Rv * A^i * S
            let mut powers = Vec::with_capacity(r + 1);
            // s vector
            let s: Vec<FfElem> = (0..r).map(|i| self.get(i, r).clone()).collect();
            let rv: Vec<FfElem> = (0..r).map(|j| self.get(r, j).clone()).collect();
            let mut cur = s.clone();
            // dot(rv, A^i s) for i = 0..r-1
            for _ in 0..r {
                let mut dot = f.zero();
                for j in 0..r {
                    dot = f.add(&dot, &f.mul(&rv[j], &cur[j]));
                }
                powers.push(dot);
                // cur = A * cur
                let mut next = vec![f.zero(); r];
                for i in 0..r {
                    for j in 0..r {
                        next[i] = f.add(&next[i], &f.mul(self.get(i, j), &cur[j]));
                    }
                }
                cur = next;
            }
            // Toeplitz vector: [1, -a, -powers[0], -powers[1], ...]
            let mut t = Vec::with_capacity(r + 2);
            t.push(f.one());
            t.push(f.neg(&a));
            for p in &powers {
                t.push(f.neg(p));
            }
            // new c[i] = sum_j t[i - j] * c_old[j]
            let mut newc = vec![f.zero(); c.len() + 1];
            for (i, item) in newc.iter_mut().enumerate() {
                for (j, cj) in c.iter().enumerate() {
                    if i >= j && i - j < t.len() {
                        *item = f.add(item, &f.mul(&t[i - j], cj));
                    }
                }
            }
            c = newc;
        }
        c.reverse(); // low degree first
        c
    }

    /// Evaluate a polynomial with coefficients in the field (low first) at
    /// this matrix.
    pub fn eval_poly(&self, f: &Fq, coeffs: &[FfElem]) -> FqMatrix {
        let n = self.rows;
        let mut acc = FqMatrix::zero(f, n, n);
        for c in coeffs.iter().rev() {
            acc = acc.mul(f, self);
            for i in 0..n {
                let x = f.add(acc.get(i, i), c);
                acc.set(i, i, x);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::matrix::IntMatrix;

    #[test]
    fn canonical_moduli() {
        // F_2, degree 1: x is the lexicographically least monic of degree 1
        assert_eq!(canonical_irreducible(2, 1), vec![0, 1]);
        // F_2, degree 2: x^2 + x + 1 is the only irreducible quadratic
        assert_eq!(canonical_irreducible(2, 2), vec![1, 1, 1]);
        // F_3, degree 2: x^2 + 1 (a = (0, 1) comes before (0, 2) etc.;
        // x^2, x^2+x, x^2+2x, x^2+... first irreducible in lex order on
        // (a1, a0): (0,0) x^2 reducible, (0,1) x^2+1 irreducible)
        assert_eq!(canonical_irreducible(3, 2), vec![1, 0, 1]);
    }

    #[test]
    fn field_arithmetic() {
        let f = Fq::new(2, 3);
        assert_eq!(f.order(), 8);
        let els = f.all_elements();
        assert_eq!(els.len(), 8);
        for a in &els {
            if f.is_zero(a) {
                continue;
            }
            let inv = f.inv(a);
            assert_eq!(f.mul(a, &inv), f.one());
            // Fermat
            assert_eq!(f.pow(a, 7), f.one());
        }
    }

    #[test]
    fn minpoly_degrees() {
        let f = Fq::new(2, 4);
        let mut counts = [0usize; 5];
        for a in f.all_elements() {
            counts[f.minpoly_degree(&a)] += 1;
        }
        // 2 elements of F_2, 2 of degree 2, 12 of degree 4
        assert_eq!(counts[1], 2);
        assert_eq!(counts[2], 2);
        assert_eq!(counts[4], 12);
    }

    #[test]
    fn kernel_examples() {
        // zero 3x3 over F_2: 3-dimensional kernel
        let f = Fq::new(2, 1);
        let m = FqMatrix::zero(&f, 3, 3);
        assert_eq!(m.kernel(&f).len(), 3);
        // identity over F_5: 0-dimensional kernel
        let f5 = Fq::new(5, 1);
        let id = FqMatrix::identity(&f5, 4);
        assert_eq!(id.kernel(&f5).len(), 0);
        // [[1,1],[1,1]] over F_2: kernel spanned by (1,1)
        let m = FqMatrix::from_int_matrix(&f, &IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]));
        let k = m.kernel(&f);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![f.one(), f.one()]);
        // enumerate all 4 vectors as the oracle
        let mut null_count = 0;
        for x in 0..2u64 {
            for y in 0..2u64 {
                let v = vec![f.from_u64(x), f.from_u64(y)];
                if m.mul_vec(&f, &v).iter().all(|e| f.is_zero(e)) {
                    null_count += 1;
                }
            }
        }
        assert_eq!(null_count, 2); // zero vector and (1,1)
    }

    #[test]
    fn berkowitz_matches_integer_charpoly() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 0], vec![-1, 3, 5], vec![2, 2, -4]]);
        let cp = crate::arith::matrix::char_poly(&m);
        for &(ell, k) in &[(5u64, 1usize), (7, 2), (2, 3)] {
            let f = Fq::new(ell, k);
            let fm = FqMatrix::from_int_matrix(&f, &m);
            let fcp = fm.char_poly(&f);
            let expect: Vec<FfElem> = cp.iter().map(|c| f.from_int(c)).collect();
            assert_eq!(fcp, expect, "ell={ell} k={k}");
            // Cayley-Hamilton over the field
            assert!(fm.eval_poly(&f, &fcp).is_zero(&f));
        }
    }

    #[test]
    fn factor_degrees_examples() {
        // x^2 + 1 over F_5 = (x-2)(x-3): degrees [1, 1]
        assert_eq!(factor_degrees(5, &[1, 0, 1]), vec![1, 1]);
        // x^2 + 1 over F_3 irreducible: [2]
        assert_eq!(factor_degrees(3, &[1, 0, 1]), vec![2]);
        // x^4 + x^2 over F_3 = x^2 (x^2+1): [1, 1, 2]
        assert_eq!(factor_degrees(3, &[0, 0, 1, 0, 1]), vec![1, 1, 2]);
        // inseparable-shape input: x^9 - x? derivative handling:
        // x^3 over F_3: [1,1,1]
        assert_eq!(factor_degrees(3, &[0, 0, 0, 1]), vec![1, 1, 1]);
    }

    #[test]
    fn roots_scan() {
        let f = Fq::new(7, 1);
        // x^2 - 2 over F_7: roots 3, 4
        let roots = f.roots_of_prime_poly(&[5, 0, 1]);
        assert_eq!(roots.len(), 2);
    }
}
