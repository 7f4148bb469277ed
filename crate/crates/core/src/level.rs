//! Level structures at an auxiliary prime q: the finite double-coset
//! spaces at the two maximal levels and at their intersection, the
//! degeneracy map and its adjoint, the combinatorial integrality
//! decomposition, the two-level averaging operator with the raising
//! criterion, the Eisenstein-type abelian test, and the end-to-end
//! congruence search in the new space at raised level.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::ff::{factor_degrees, is_prime_u64, FfElem, Fq, FqMatrix};
use crate::arith::matrix::{primitive_part, Int, IntMatrix, Rat, RatMatrix};
use crate::arith::valuation::{val_rat, Valuation};
use crate::brandt::{
    brandt_matrices_upto, classify_sublattices, ideal_classes, iso_witness, IdealClassSet,
    ModQSplitting,
};
use crate::congruence::{
    old_new_split, restrict_to_lattice, CongruenceError, DegeneracySetup, HeckeFamily, Label,
    PairedLattice,
};
use crate::quat::lattice::QuatLattice;
use crate::quat::{build_algebra, legendre, QuatError};

#[derive(Debug, Clone)]
pub enum LevelError {
    Quat(QuatError),
    Congruence(CongruenceError),
    HypothesisViolated(String),
    NotEigenform,
    NotInImage,
    Falsification(String),
    FieldTooLarge(u64, usize),
}

impl std::fmt::Display for LevelError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LevelError::Quat(e) => write!(f, "{e}"),
            LevelError::Congruence(e) => write!(f, "{e}"),
            LevelError::HypothesisViolated(s) => write!(f, "hypothesis violated: {s}"),
            LevelError::NotEigenform => write!(f, "vector is not a joint eigenform"),
            LevelError::NotInImage => {
                write!(f, "function is not in the image of the degeneracy map")
            }
            LevelError::Falsification(s) => write!(f, "falsification event: {s}"),
            LevelError::FieldTooLarge(ell, k) => {
                write!(f, "splitting field F_{{{ell}^{k}}} too large to scan")
            }
        }
    }
}

impl std::error::Error for LevelError {}

impl From<QuatError> for LevelError {
    fn from(e: QuatError) -> Self {
        LevelError::Quat(e)
    }
}

impl From<CongruenceError> for LevelError {
    fn from(e: CongruenceError) -> Self {
        LevelError::Congruence(e)
    }
}

/// One element of the raised-level double-coset space: an orbit of lines
/// over a base class under the unit group of the right order.
#[derive(Debug, Clone)]
pub struct EdgeOrbit {
    pub base_class: usize,
    pub neighbor_class: usize,
    pub lines: Vec<usize>,
    pub stab_order: u64,
    pub rep_line: usize,
}

/// The raised-level double-coset space with its two projections. The
/// second maximal-level set is a weight-preserving copy of the ideal
/// classes (the two maximal compacts are conjugate here), so only the
/// projections need to be stored.
#[derive(Debug, Clone)]
pub struct DoubleCosetSpace {
    pub q: u64,
    pub edges: Vec<EdgeOrbit>,
    /// per class: the q+1 neighbor lattices in deterministic line order
    pub neighbor_lattices: Vec<Vec<QuatLattice>>,
    /// per class: line index -> global edge index
    pub line_to_edge: Vec<Vec<usize>>,
}

impl DoubleCosetSpace {
    pub fn weights_j(&self) -> Vec<u64> {
        self.edges.iter().map(|e| e.stab_order).collect()
    }
}

/// Build the raised-level space at the prime q: unit-group orbits on the
/// q+1 lines over each class, with stabilizer orders, the base-class
/// projection and the neighbor-class projection.
pub fn build_level_structure(
    classes: &IdealClassSet,
    q: u64,
) -> Result<DoubleCosetSpace, LevelError> {
    let alg = &classes.alg;
    if q == alg.p {
        return Err(LevelError::HypothesisViolated(format!(
            "auxiliary prime {q} equals the ramified prime"
        )));
    }
    let split = ModQSplitting::new(alg, &classes.order, q)?;
    let mut edges = Vec::new();
    let mut neighbor_lattices = Vec::new();
    let mut line_to_edge = Vec::new();
    for (i, class) in classes.classes.iter().enumerate() {
        let nbrs = crate::brandt::neighbor_ideals(alg, &classes.order, &split, &class.ideal);
        let nlines = nbrs.len();
        assert_eq!(nlines as u64, q + 1);
        // permutation action of each unit on the lines
        let mut perms: Vec<Vec<usize>> = Vec::with_capacity(class.units.len());
        for u in &class.units {
            let mut perm = Vec::with_capacity(nlines);
            for nb in &nbrs {
                let moved = QuatLattice::from_quats(
                    nb.basis_quats().iter().map(|b| b.mul(u, alg)).collect(),
                );
                let pos = nbrs
                    .iter()
                    .position(|x| *x == moved)
                    .expect("unit action permutes the neighbor lattices");
                perm.push(pos);
            }
            perms.push(perm);
        }
        let mut line_edge = vec![usize::MAX; nlines];
        for start in 0..nlines {
            if line_edge[start] != usize::MAX {
                continue;
            }
            let mut orbit = vec![start];
            let mut stack = vec![start];
            let mut seen = vec![false; nlines];
            seen[start] = true;
            while let Some(l) = stack.pop() {
                for perm in &perms {
                    let t = perm[l];
                    if !seen[t] {
                        seen[t] = true;
                        orbit.push(t);
                        stack.push(t);
                    }
                }
            }
            orbit.sort_unstable();
            let stab = perms.iter().filter(|perm| perm[start] == start).count() as u64;
            assert_eq!(stab * orbit.len() as u64, class.weight, "orbit-stabilizer");
            let mut ncls = None;
            for (j, cand) in classes.classes.iter().enumerate() {
                if iso_witness(alg, &cand.ideal, &nbrs[start]).is_some() {
                    ncls = Some(j);
                    break;
                }
            }
            let neighbor_class = ncls.expect("neighbor lies in some class");
            let e_idx = edges.len();
            for &l in &orbit {
                line_edge[l] = e_idx;
            }
            edges.push(EdgeOrbit {
                base_class: i,
                neighbor_class,
                lines: orbit,
                stab_order: stab,
                rep_line: start,
            });
        }
        neighbor_lattices.push(nbrs);
        line_to_edge.push(line_edge);
    }
    let space = DoubleCosetSpace { q, edges, neighbor_lattices, line_to_edge };
    // each vertex carries q+1 lines counted with multiplicity
    for (i, class) in classes.classes.iter().enumerate() {
        let mut sum = Rat::zero();
        for e in space.edges.iter().filter(|e| e.base_class == i) {
            sum += Rat::new(Int::from(class.weight), Int::from(e.stab_order));
        }
        assert_eq!(sum, Rat::from(Int::from(q + 1)), "weighted fiber count");
    }
    Ok(space)
}

/// Data at the two maximal levels: Brandt operators, projections, weighted
/// averaging operators, the averaged two-level operator, and the parahoric
/// indices computed as weighted fiber sums.
#[derive(Debug, Clone)]
pub struct TwoLevelData {
    pub p: u64,
    pub q: u64,
    pub rbound: u64,
    pub classes: IdealClassSet,
    pub space: DoubleCosetSpace,
    /// primes r <= rbound with r != p (q included when q <= rbound)
    pub labels_k: Vec<u64>,
    pub b_k: Vec<IntMatrix>,
    pub k_index: u64,
    pub kp_index: u64,
    pub kp_index_k: u64,
    pub pull_k: IntMatrix,
    pub pull_kp: IntMatrix,
    pub avg_k: RatMatrix,
    pub avg_kp: RatMatrix,
    /// matrix of the averaged two-level operator on the lower level
    pub e_kk: RatMatrix,
}

pub fn primes_upto(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime_u64(n)).collect()
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

pub fn two_level_data(p: u64, q: u64, rbound: u64) -> Result<TwoLevelData, LevelError> {
    if !is_prime_u64(p) || !is_prime_u64(q) {
        return Err(LevelError::HypothesisViolated(format!(
            "p = {p} and q = {q} must be prime"
        )));
    }
    let alg = build_algebra(p)?;
    let classes = ideal_classes(&alg)?;
    let space = build_level_structure(&classes, q)?;
    let labels_k: Vec<u64> = primes_upto(rbound).into_iter().filter(|&r| r != p).collect();
    let all = brandt_matrices_upto(&classes, rbound);
    let b_k: Vec<IntMatrix> = labels_k
        .iter()
        .map(|&r| {
            all.iter()
                .find(|(n, _)| *n == r)
                .map(|(_, m)| m.clone())
                .expect("computed")
        })
        .collect();
    let h = classes.h();
    let ne = space.edges.len();
    let mut pull_k = IntMatrix::zero(ne, h);
    let mut pull_kp = IntMatrix::zero(ne, h);
    for (e, edge) in space.edges.iter().enumerate() {
        pull_k.set(e, edge.base_class, Int::one());
        pull_kp.set(e, edge.neighbor_class, Int::one());
    }
    let weights = classes.weights();
    // [K : J] = W_i * (sum over the fiber of 1/W_e), independent of i;
    // same for [K' : J] through the neighbor projection
    let fiber_sum = |use_base: bool, cls: usize| -> Rat {
        let mut sum = Rat::zero();
        for edge in space.edges.iter() {
            let c = if use_base { edge.base_class } else { edge.neighbor_class };
            if c == cls {
                sum += Rat::new(Int::from(weights[cls]), Int::from(edge.stab_order));
            }
        }
        sum
    };
    let expect = Rat::from(Int::from(q + 1));
    for i in 0..h {
        assert_eq!(fiber_sum(true, i), expect, "[K:J] weighted fiber count");
        assert_eq!(fiber_sum(false, i), expect, "[K':J] weighted fiber count");
    }
    let k_index = q + 1;
    let kp_index = q + 1;
    let kp_index_k = kp_index / gcd_u64(kp_index, k_index);
    let mut avg_k_rows = Vec::with_capacity(h);
    let mut avg_kp_rows = Vec::with_capacity(h);
    for i in 0..h {
        let mut row_k = vec![Rat::zero(); ne];
        let mut row_kp = vec![Rat::zero(); ne];
        for (e, edge) in space.edges.iter().enumerate() {
            if edge.base_class == i {
                row_k[e] = Rat::new(Int::from(weights[i]), Int::from(k_index * edge.stab_order));
            }
            if edge.neighbor_class == i {
                row_kp[e] =
                    Rat::new(Int::from(weights[i]), Int::from(kp_index * edge.stab_order));
            }
        }
        avg_k_rows.push(row_k);
        avg_kp_rows.push(row_kp);
    }
    let avg_k = RatMatrix::from_rat_rows(avg_k_rows);
    let avg_kp = RatMatrix::from_rat_rows(avg_kp_rows);
    // idempotency of the two averaging projectors on level-J functions
    let e_k_j = RatMatrix::from_int(pull_k.clone()).mul(&avg_k);
    assert_eq!(e_k_j.mul(&e_k_j), e_k_j, "averaging projector is idempotent");
    let e_kp_j = RatMatrix::from_int(pull_kp.clone()).mul(&avg_kp);
    assert_eq!(e_kp_j.mul(&e_kp_j), e_kp_j, "averaging projector is idempotent");
    let scalar = Rat::from(Int::from(k_index * kp_index_k));
    let e_kk = avg_k
        .mul(&RatMatrix::from_int(pull_kp.clone()))
        .mul(&avg_kp)
        .mul(&RatMatrix::from_int(pull_k.clone()))
        .scale(&scalar);
    // the all-ones vector is an eigenvector with eigenvalue [K:J][K':J]_K
    let ones = vec![Rat::one(); h];
    for v in e_kk.mul_vec(&ones) {
        assert_eq!(v, scalar, "all-ones eigenvalue of the averaged operator");
    }
    Ok(TwoLevelData {
        p,
        q,
        rbound,
        classes,
        space,
        labels_k,
        b_k,
        k_index,
        kp_index,
        kp_index_k,
        pull_k,
        pull_kp,
        avg_k,
        avg_kp,
        e_kk,
    })
}

/// A rational joint eigenform of the lower-level Hecke family.
#[derive(Debug, Clone)]
pub struct RationalEigenform {
    /// primitive integral eigenvector
    pub vector: Vec<Int>,
    /// (prime, eigenvalue) pairs over the label set
    pub values: Vec<(u64, Int)>,
    pub eisenstein: bool,
    pub multiplicity: usize,
}

fn rat_char_poly(m: &RatMatrix) -> Vec<Rat> {
    let n = m.rows();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut nk = RatMatrix::identity(n);
    let mut ck = Rat::one();
    for k in 1..=n {
        let mut adj = nk.clone();
        if k > 1 {
            let ck_m = RatMatrix::identity(n).scale(&ck);
            adj = adj.add(&ck_m);
        }
        nk = m.mul(&adj);
        let mut tr = Rat::zero();
        for i in 0..n {
            tr += nk.entry(i, i);
        }
        ck = -tr / Rat::from(Int::from(k as i64));
        coeffs[n - k] = ck.clone();
    }
    coeffs
}

fn integer_roots(cp: &[Rat]) -> Vec<Int> {
    for c in cp {
        assert!(c.is_integer(), "characteristic polynomial must be integral");
    }
    let mut low = 0;
    while low < cp.len() && cp[low].is_zero() {
        low += 1;
    }
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(Int::zero());
    }
    if low >= cp.len() {
        return roots;
    }
    let c0 = cp[low].to_integer().abs();
    let eval = |t: &Int| -> bool {
        let mut acc = Rat::zero();
        for c in cp.iter().rev() {
            acc = acc * Rat::from(t.clone()) + c;
        }
        acc.is_zero()
    };
    let mut d = Int::one();
    while &d * &d <= c0 {
        if c0.mod_floor(&d).is_zero() {
            for cand in [d.clone(), -d.clone(), &c0 / &d, -(&c0 / &d)] {
                if eval(&cand) && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
        d += 1;
    }
    roots.sort();
    roots
}

/// All rational joint eigensystems of a commuting integral family, by
/// iterated splitting into rational eigenspaces. The Eisenstein system is
/// sorted first.
pub fn rational_eigenforms(labels: &[u64], ops: &[IntMatrix]) -> Vec<RationalEigenform> {
    assert_eq!(labels.len(), ops.len());
    let n = ops.first().map(|m| m.rows).unwrap_or(0);
    let mut pieces: Vec<(RatMatrix, Vec<(u64, Int)>)> =
        vec![(RatMatrix::identity(n), Vec::new())];
    for (t, op) in ops.iter().enumerate() {
        let opr = RatMatrix::from_int(op.clone());
        let mut next = Vec::new();
        for (basis, values) in pieces {
            let bt = basis.transpose();
            let mut rows = Vec::new();
            for i in 0..basis.rows() {
                let img = opr.mul_vec(&basis.row_rat(i));
                let x = bt.solve(&img).expect("invariant subspace");
                rows.push(x);
            }
            let r = RatMatrix::from_rat_rows(rows).transpose();
            let cp = rat_char_poly(&r);
            for t_val in integer_roots(&cp) {
                let shifted =
                    r.sub(&RatMatrix::identity(r.rows()).scale(&Rat::from(t_val.clone())));
                let ker = shifted.right_nullspace();
                if ker.is_empty() {
                    continue;
                }
                let mut amb_rows = Vec::new();
                for kv in &ker {
                    let mut acc = vec![Rat::zero(); n];
                    for (i, c) in kv.iter().enumerate() {
                        for (j, a) in basis.row_rat(i).iter().enumerate() {
                            acc[j] += c * a;
                        }
                    }
                    amb_rows.push(acc);
                }
                let sub = RatMatrix::from_rat_rows(amb_rows);
                let mut vals = values.clone();
                vals.push((labels[t], t_val.clone()));
                next.push((sub, vals));
            }
        }
        pieces = next;
    }
    let mut out = Vec::new();
    for (basis, values) in pieces {
        let vec0 = primitive_part(&basis.row_rat(0)).expect("nonzero eigenvector");
        let eisenstein = values.iter().all(|(r, a)| *a == Int::from(1 + *r));
        out.push(RationalEigenform { vector: vec0, values, eisenstein, multiplicity: basis.rows() });
    }
    out.sort_by_key(|f| {
        (!f.eisenstein, f.values.iter().map(|(_, a)| a.clone()).collect::<Vec<_>>())
    });
    out
}

/// Report of the raising criterion on one eigenform.
#[derive(Debug, Clone, Serialize)]
pub struct StarReport {
    pub holds: bool,
    /// exact value eta_f(e) - eta_1(e) as a fraction string
    pub m: String,
    /// the bound v_l(m) - v_l([K':J]_K); None when m = 0
    pub n0: Option<i64>,
    #[serde(skip)]
    pub m_rat: Rat,
}

/// The raising criterion: whether the averaged two-level operator takes
/// congruent values mod l on f and on the all-ones system, together with
/// the exact difference m and the valuation bound.
pub fn star_criterion(data: &TwoLevelData, f: &[Int], ell: u64) -> Result<StarReport, LevelError> {
    if !is_prime_u64(ell) {
        return Err(LevelError::HypothesisViolated(format!("{ell} is not prime")));
    }
    if (data.q * data.kp_index_k) % ell == 0 {
        return Err(LevelError::HypothesisViolated(format!(
            "ell = {ell} divides q [K':J]_K = {}",
            data.q * data.kp_index_k
        )));
    }
    let fr: Vec<Rat> = f.iter().cloned().map(Rat::from).collect();
    let img = data.e_kk.mul_vec(&fr);
    let pivot = fr.iter().position(|x| !x.is_zero()).ok_or(LevelError::NotEigenform)?;
    let eta_f = &img[pivot] / &fr[pivot];
    for i in 0..fr.len() {
        if img[i] != &eta_f * &fr[i] {
            return Err(LevelError::NotEigenform);
        }
    }
    let eta_one = Rat::from(Int::from(data.k_index * data.kp_index_k));
    let m = &eta_f - &eta_one;
    let (holds, n0) = match val_rat(ell, &m) {
        Valuation::Infinite => (true, None),
        Valuation::Finite(v) => {
            let v_kpk = val_rat(ell, &Rat::from(Int::from(data.kp_index_k)))
                .finite()
                .unwrap();
            (v >= 1, Some(v - v_kpk))
        }
    };
    Ok(StarReport { holds, m: format!("{}/{}", m.numer(), m.denom()), n0, m_rat: m })
}

/// Eisenstein-type test: is the eigensystem congruent mod l to a character
/// system chi(r)(1+r), chi trivial or the quadratic character mod p?
pub fn abelian_test(values: &[(u64, Int)], p: u64, ell: u64) -> bool {
    let ellb = BigInt::from(ell);
    let n_chars = if p == 2 { 1 } else { 2 };
    'chi: for c in 0..n_chars {
        for (r, a) in values {
            if *r == p {
                continue;
            }
            let chi: i64 = if c == 0 { 1 } else { legendre(&BigInt::from(*r), p) as i64 };
            let expect = BigInt::from(chi) * BigInt::from(1 + *r);
            if !(a - expect).mod_floor(&ellb).is_zero() {
                continue 'chi;
            }
        }
        return true;
    }
    false
}

/// Auxiliary primes r distinct from p and q whose maximal-compact local
/// factors have order prime to l: l does not divide r(r-1)(r+1). The
/// raising theorem requires at least two.
pub fn two_places_witnesses(p: u64, q: u64, ell: u64, max_count: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for r in primes_upto(200) {
        if r == p || r == q {
            continue;
        }
        let n = (r % ell) * ((r + 1) % ell) % ell * ((r + ell - 1) % ell) % ell;
        if n % ell != 0 {
            out.push(r);
            if out.len() >= max_count {
                break;
            }
        }
    }
    out
}

/// Hecke operator at the raised level for a prime r coprime to p and q:
/// sum over the r+1 colength-r sublattices, each intersected with the edge
/// lattice and transported back to a stored orbit representative.
pub fn brandt_matrix_level_j(data: &TwoLevelData, r: u64) -> Result<IntMatrix, LevelError> {
    let alg = &data.classes.alg;
    if r == data.p || r == data.q {
        return Err(LevelError::HypothesisViolated(format!(
            "level operator prime {r} must avoid p and q"
        )));
    }
    let split = ModQSplitting::new(alg, &data.classes.order, r)?;
    let h = data.classes.h();
    let mut subs_per_class = Vec::with_capacity(h);
    for i in 0..h {
        let subs = classify_sublattices(&data.classes, &split, i);
        let with_inv: Vec<_> = subs
            .into_iter()
            .map(|(line, j, x, sub)| {
                let xinv = x.inv(alg);
                (line, j, xinv, sub)
            })
            .collect();
        subs_per_class.push(with_inv);
    }
    let ne = data.space.edges.len();
    let mut m = IntMatrix::zero(ne, ne);
    for (e_idx, edge) in data.space.edges.iter().enumerate() {
        let i = edge.base_class;
        let j_e = &data.space.neighbor_lattices[i][edge.rep_line];
        for (_, j, xinv, sub) in &subs_per_class[i] {
            let jp = sub.intersect(j_e);
            let transported = QuatLattice::from_quats(
                jp.basis_quats().iter().map(|b| b.mul(xinv, alg)).collect(),
            );
            let line = data.space.neighbor_lattices[*j]
                .iter()
                .position(|l| *l == transported)
                .expect("transported edge is a stored neighbor");
            let e2 = data.space.line_to_edge[*j][line];
            let v = m.get(e_idx, e2) + Int::one();
            m.set(e_idx, e2, v);
        }
    }
    for e in 0..ne {
        let s: Int = (0..ne).map(|e2| m.get(e, e2).clone()).sum();
        assert_eq!(s, Int::from(r + 1), "level operator row sums");
    }
    Ok(m)
}

/// The degeneracy setup at raised level. The combinatorial integrality
/// constant of the setup is asserted to be 1.
pub struct RaisedLevel {
    /// primes r <= rbound coprime to p q
    pub labels_j: Vec<u64>,
    pub b_j: Vec<IntMatrix>,
    pub setup: DegeneracySetup,
}

pub fn raised_level(data: &TwoLevelData) -> Result<RaisedLevel, LevelError> {
    raised_level_with_bound(data, data.rbound)
}

/// As `raised_level`, with the operator labels restricted to primes up to
/// `j_rbound`; the purely structural parts (degeneracy map, pairings,
/// integrality constant) do not depend on the label set.
pub fn raised_level_with_bound(data: &TwoLevelData, j_rbound: u64) -> Result<RaisedLevel, LevelError> {
    let labels_j: Vec<u64> = data
        .labels_k
        .iter()
        .copied()
        .filter(|&r| r != data.q && r <= j_rbound)
        .collect();
    let b_j: Vec<IntMatrix> = labels_j
        .iter()
        .map(|&r| brandt_matrix_level_j(data, r))
        .collect::<Result<_, _>>()?;
    let h = data.classes.h();
    let weights = data.classes.weights();
    let mut w_u = weights.clone();
    w_u.extend_from_slice(&weights);
    let pairing_u = PairedLattice::diagonal_weights(&w_u);
    let pairing_v = PairedLattice::diagonal_weights(&data.space.weights_j());
    let labels: Vec<Label> = labels_j.iter().map(|&r| Label::Prime(r)).collect();
    let mut ops_u = Vec::new();
    for &r in &labels_j {
        let b = data
            .labels_k
            .iter()
            .position(|&x| x == r)
            .map(|idx| data.b_k[idx].clone())
            .expect("label present");
        let mut blk = IntMatrix::zero(2 * h, 2 * h);
        for i in 0..h {
            for j in 0..h {
                blk.set(i, j, b.get(i, j).clone());
                blk.set(h + i, h + j, b.get(i, j).clone());
            }
        }
        ops_u.push(blk);
    }
    let family_u = HeckeFamily::self_adjoint(labels.clone(), ops_u, &pairing_u)?;
    let family_v = HeckeFamily::self_adjoint(labels, b_j.clone(), &pairing_v)?;
    let ne = data.space.edges.len();
    let mut delta = IntMatrix::zero(ne, 2 * h);
    for (e, edge) in data.space.edges.iter().enumerate() {
        delta.set(e, edge.base_class, Int::one());
        delta.set(e, h + edge.neighbor_class, Int::one());
    }
    let setup = DegeneracySetup::new(
        pairing_u,
        family_u,
        pairing_v,
        family_v,
        RatMatrix::from_int(delta),
    )?;
    assert!(setup.b_v.is_one(), "level pairing dual contains the lattice");
    assert!(setup.c.is_one(), "combinatorial integrality: image lattice saturated");
    Ok(RaisedLevel { labels_j, b_j, setup })
}

/// Connected components of the chain relation on the raised-level set
/// (two elements are chained when their base classes or their neighbor
/// classes agree); each component sorted, ordered by least element.
pub fn chain_components(space: &DoubleCosetSpace) -> Vec<Vec<usize>> {
    let ne = space.edges.len();
    let mut seen = vec![false; ne];
    let mut comps = Vec::new();
    for start in 0..ne {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(e) = stack.pop() {
            let (b, nb) = (space.edges[e].base_class, space.edges[e].neighbor_class);
            for (e2, other) in space.edges.iter().enumerate() {
                if !seen[e2] && (other.base_class == b || other.neighbor_class == nb) {
                    seen[e2] = true;
                    comp.push(e2);
                    stack.push(e2);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Decompose an integral function lying rationally in the image of the
/// degeneracy map into an integral preimage pair: solve over Q, then
/// subtract the locally-constant kernel part so the first component
/// vanishes at the component representatives. Output integrality is the
/// combinatorial integrality statement and is verified, not assumed.
pub fn ihara_decompose(
    data: &TwoLevelData,
    raised: &RaisedLevel,
    g: &[Int],
) -> Result<(Vec<Int>, Vec<Int>), LevelError> {
    let h = data.classes.h();
    let ne = data.space.edges.len();
    assert_eq!(g.len(), ne);
    let gr: Vec<Rat> = g.iter().cloned().map(Rat::from).collect();
    let sol = raised.setup.delta.solve(&gr).ok_or(LevelError::NotInImage)?;
    let mut f0: Vec<Rat> = sol[..h].to_vec();
    let mut f1: Vec<Rat> = sol[h..].to_vec();
    for comp in &chain_components(&data.space) {
        let rep = comp[0];
        let v = f0[data.space.edges[rep].base_class].clone();
        if v.is_zero() {
            continue;
        }
        let mut base_classes: Vec<usize> =
            comp.iter().map(|&e| data.space.edges[e].base_class).collect();
        base_classes.sort_unstable();
        base_classes.dedup();
        let mut nbr_classes: Vec<usize> =
            comp.iter().map(|&e| data.space.edges[e].neighbor_class).collect();
        nbr_classes.sort_unstable();
        nbr_classes.dedup();
        for &c in &base_classes {
            f0[c] = &f0[c] - &v;
        }
        for &c in &nbr_classes {
            f1[c] = &f1[c] + &v;
        }
    }
    let mut joined: Vec<Rat> = f0.clone();
    joined.extend(f1.clone());
    if raised.setup.delta.mul_vec(&joined) != gr {
        return Err(LevelError::Falsification(
            "normalized preimage no longer maps to g".into(),
        ));
    }
    let to_int = |v: Vec<Rat>| -> Result<Vec<Int>, LevelError> {
        v.into_iter()
            .map(|x| {
                if x.is_integer() {
                    Ok(x.to_integer())
                } else {
                    Err(LevelError::Falsification(
                        "integral function in the image has no integral preimage".into(),
                    ))
                }
            })
            .collect()
    };
    Ok((to_int(f0)?, to_int(f1)?))
}

/// A joint eigensystem of a mod-l family, with values in the canonical
/// field of its minimal degree.
#[derive(Debug, Clone, Serialize)]
pub struct ModEigenSystem {
    pub ell: u64,
    pub degree: usize,
    pub labels: Vec<u64>,
    /// coordinate vectors with respect to the canonical modulus of
    /// F_{l^degree}, low power first
    pub values: Vec<Vec<u64>>,
    pub multiplicity: usize,
}

/// All joint eigensystems of a commuting integral family reduced mod l,
/// over the splitting field, with multiplicities. Every system is
/// re-verified on an explicit common eigenvector.
pub fn joint_eigensystems_mod_ell(
    labels: &[u64],
    ops: &[IntMatrix],
    ell: u64,
) -> Result<Vec<ModEigenSystem>, LevelError> {
    let n = ops.first().map(|m| m.rows).unwrap_or(0);
    if n == 0 {
        return Ok(Vec::new());
    }
    let fl = Fq::new(ell, 1);
    let mut kstar = 1usize;
    for op in ops {
        let m = FqMatrix::from_int_matrix(&fl, op);
        let cp = m.char_poly(&fl);
        let cpu: Vec<u64> = cp.iter().map(|c| c[0]).collect();
        for d in factor_degrees(ell, &cpu) {
            kstar = num_integer::lcm(kstar, d);
        }
    }
    let mut order = 1u64;
    for _ in 0..kstar {
        order = order.saturating_mul(ell);
        if order > 200_000 {
            return Err(LevelError::FieldTooLarge(ell, kstar));
        }
    }
    let f = Fq::new(ell, kstar);
    // pieces refined by generalized eigenspaces so dimensions add up
    let mut pieces: Vec<(FqMatrix, Vec<FfElem>)> = vec![(FqMatrix::identity(&f, n), Vec::new())];
    for op in ops {
        let opf = FqMatrix::from_int_matrix(&f, op);
        let mut next = Vec::new();
        for (basis, values) in pieces {
            let d = basis.rows;
            let r = restrict_fq(&f, &opf, &basis);
            let cp = r.char_poly(&f);
            let mut found_dim = 0;
            for lam in f.all_elements() {
                let mut acc = f.zero();
                for c in cp.iter().rev() {
                    acc = f.mul(&acc, &lam);
                    acc = f.add(&acc, c);
                }
                if !f.is_zero(&acc) {
                    continue;
                }
                let mut shifted = r.clone();
                for i in 0..d {
                    let x = f.sub(shifted.get(i, i), &lam);
                    shifted.set(i, i, x);
                }
                let mut power = FqMatrix::identity(&f, d);
                for _ in 0..d {
                    power = power.mul(&f, &shifted);
                }
                let ker = power.kernel(&f);
                if ker.is_empty() {
                    continue;
                }
                found_dim += ker.len();
                let mut amb = FqMatrix::zero(&f, ker.len(), n);
                for (t, kv) in ker.iter().enumerate() {
                    for j in 0..n {
                        let mut acc = f.zero();
                        for (i, c) in kv.iter().enumerate() {
                            acc = f.add(&acc, &f.mul(c, basis.get(i, j)));
                        }
                        amb.set(t, j, acc);
                    }
                }
                let mut vals = values.clone();
                vals.push(lam);
                next.push((amb, vals));
            }
            assert_eq!(found_dim, d, "characteristic polynomial splits over the splitting field");
        }
        pieces = next;
    }
    let mut out = Vec::new();
    for (basis, values) in pieces {
        // find a common eigenvector by intersecting plain eigenspaces
        let mut cur = basis.clone();
        for (op, lam) in ops.iter().zip(values.iter()) {
            let opf = FqMatrix::from_int_matrix(&f, op);
            let r = restrict_fq(&f, &opf, &cur);
            let mut shifted = r.clone();
            for i in 0..cur.rows {
                let x = f.sub(shifted.get(i, i), lam);
                shifted.set(i, i, x);
            }
            let ker = shifted.kernel(&f);
            assert!(!ker.is_empty(), "commuting family shares an eigenvector");
            let mut amb = FqMatrix::zero(&f, ker.len(), basis.cols);
            for (t, kv) in ker.iter().enumerate() {
                for j in 0..basis.cols {
                    let mut acc = f.zero();
                    for (i, c) in kv.iter().enumerate() {
                        acc = f.add(&acc, &f.mul(c, cur.get(i, j)));
                    }
                    amb.set(t, j, acc);
                }
            }
            cur = amb;
        }
        let v: Vec<FfElem> = (0..basis.cols).map(|j| cur.get(0, j).clone()).collect();
        for (op, lam) in ops.iter().zip(values.iter()) {
            let opf = FqMatrix::from_int_matrix(&f, op);
            let img = opf.mul_vec(&f, &v);
            let expect: Vec<FfElem> = v.iter().map(|x| f.mul(x, lam)).collect();
            assert_eq!(img, expect, "eigensystem re-verification");
        }
        let mut kmin = 1usize;
        for lam in &values {
            kmin = num_integer::lcm(kmin, f.minpoly_degree(lam));
        }
        let values_out: Vec<Vec<u64>> = if kmin == kstar {
            values.clone()
        } else {
            let (_, rho) = f.subfield(kmin);
            values.iter().map(|lam| f.project_to_subfield(kmin, &rho, lam)).collect()
        };
        out.push(ModEigenSystem {
            ell,
            degree: kmin,
            labels: labels.to_vec(),
            values: values_out,
            multiplicity: basis.rows,
        });
    }
    out.sort_by_key(|s| (s.degree, s.values.clone()));
    Ok(out)
}

fn restrict_fq(f: &Fq, op: &FqMatrix, basis: &FqMatrix) -> FqMatrix {
    let d = basis.rows;
    let n = basis.cols;
    let mut bt = FqMatrix::zero(f, n, d);
    for i in 0..d {
        for j in 0..n {
            bt.set(j, i, basis.get(i, j).clone());
        }
    }
    let mut r = FqMatrix::zero(f, d, d);
    for i in 0..d {
        let row: Vec<FfElem> = (0..n).map(|j| basis.get(i, j).clone()).collect();
        let img = op.mul_vec(f, &row);
        let x = bt.solve(f, &img).expect("subspace must be invariant");
        for j in 0..d {
            r.set(j, i, x[j].clone());
        }
    }
    r
}

/// Semisimplicity of the commutative matrix algebra generated mod l by the
/// reduced operators: the nilradical is the kernel of iterated Frobenius,
/// an F_l-linear map on a commutative algebra. Returns the flag and the
/// nilradical dimension.
pub fn semisimple_mod_ell(ops: &[IntMatrix], ell: u64) -> (bool, usize) {
    let n = ops.first().map(|m| m.rows).unwrap_or(0);
    let fl = Fq::new(ell, 1);
    fn add_to_span(
        fl: &Fq,
        n: usize,
        m: &FqMatrix,
        basis: &mut Vec<FqMatrix>,
        span: &mut FqMatrix,
    ) -> bool {
        let mut cand = FqMatrix::zero(fl, span.rows + 1, n * n);
        for i in 0..span.rows {
            for j in 0..n * n {
                cand.set(i, j, span.get(i, j).clone());
            }
        }
        for (j, e) in m.data.iter().enumerate() {
            cand.set(span.rows, j, e.clone());
        }
        if cand.rank(fl) > span.rows {
            basis.push(m.clone());
            *span = cand;
            true
        } else {
            false
        }
    }
    let mut basis: Vec<FqMatrix> = Vec::new();
    let mut span = FqMatrix::zero(&fl, 0, n * n);
    add_to_span(&fl, n, &FqMatrix::identity(&fl, n), &mut basis, &mut span);
    let gens: Vec<FqMatrix> = ops.iter().map(|m| FqMatrix::from_int_matrix(&fl, m)).collect();
    for g in &gens {
        add_to_span(&fl, n, g, &mut basis, &mut span);
    }
    loop {
        let mut grew = false;
        let snapshot = basis.clone();
        for b in &snapshot {
            for g in &gens {
                let prod = b.mul(&fl, g);
                if add_to_span(&fl, n, &prod, &mut basis, &mut span) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let dim = basis.len();
    let mut s = 0u32;
    let mut pw = 1u64;
    while (pw as usize) < n.max(1) {
        pw = pw.saturating_mul(ell);
        s += 1;
    }
    let mut frob = FqMatrix::zero(&fl, dim, dim);
    let mut bt = FqMatrix::zero(&fl, n * n, dim);
    for i in 0..dim {
        for j in 0..n * n {
            bt.set(j, i, span.get(i, j).clone());
        }
    }
    for (i, b) in basis.iter().enumerate() {
        let mut acc = b.clone();
        for _ in 0..s {
            let mut powm = FqMatrix::identity(&fl, n);
            for _ in 0..ell {
                powm = powm.mul(&fl, &acc);
            }
            acc = powm;
        }
        let x = bt.solve(&fl, &acc.data).expect("algebra closed under powers");
        for j in 0..dim {
            frob.set(j, i, x[j].clone());
        }
    }
    let nil = frob.kernel(&fl);
    for kv in &nil {
        let mut acc = FqMatrix::zero(&fl, n, n);
        for (i, c) in kv.iter().enumerate() {
            acc = acc.add(&fl, &basis[i].scale(&fl, c));
        }
        let mut powm = FqMatrix::identity(&fl, n);
        for _ in 0..n {
            powm = powm.mul(&fl, &acc);
        }
        assert!(powm.is_zero(&fl), "nilradical elements are nilpotent");
    }
    (nil.is_empty(), nil.len())
}

/// Raised-level congruence search: under the raising hypotheses, compute
/// the new space, reduce the commuting family mod l on its saturated
/// lattice, extract all joint eigensystems, and return those congruent to
/// the given lower-level eigenform at every label. An empty answer under
/// valid hypotheses is a falsification event, never ignored.
pub fn raise_level(
    data: &TwoLevelData,
    raised: &RaisedLevel,
    form: &RationalEigenform,
    ell: u64,
) -> Result<Vec<ModEigenSystem>, LevelError> {
    let star = star_criterion(data, &form.vector, ell)?;
    if !star.holds {
        return Err(LevelError::HypothesisViolated(format!(
            "raising criterion fails mod {ell}: m = {}",
            star.m
        )));
    }
    if abelian_test(&form.values, data.p, ell) {
        return Err(LevelError::HypothesisViolated(format!(
            "abelian mod {ell}: Eisenstein congruence detected"
        )));
    }
    let witnesses = two_places_witnesses(data.p, data.q, ell, 2);
    if witnesses.len() < 2 {
        return Err(LevelError::HypothesisViolated(format!(
            "fewer than two auxiliary places with unit groups of order prime to {ell}"
        )));
    }
    let split = old_new_split(&raised.setup);
    if split.new_lattice.rows == 0 {
        return Err(LevelError::Falsification(
            "new space is zero under valid raising hypotheses".into(),
        ));
    }
    let ops_new: Vec<IntMatrix> = raised
        .b_j
        .iter()
        .map(|b| restrict_to_lattice(b, &split.new_lattice))
        .collect();
    let systems = joint_eigensystems_mod_ell(&raised.labels_j, &ops_new, ell)?;
    let f = Fq::new(ell, 1);
    let congruent: Vec<ModEigenSystem> = systems
        .into_iter()
        .filter(|sys| {
            sys.degree == 1
                && sys.labels.iter().zip(sys.values.iter()).all(|(r, v)| {
                    let a = form
                        .values
                        .iter()
                        .find(|(rr, _)| rr == r)
                        .map(|(_, a)| a.clone())
                        .expect("label present at lower level");
                    v[0] == f.from_int(&a)[0]
                })
        })
        .collect();
    if congruent.is_empty() {
        return Err(LevelError::Falsification(format!(
            "no new eigensystem congruent to the eigenform mod {ell}"
        )));
    }
    Ok(congruent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::matrix::int;
    use num_traits::ToPrimitive;

    #[test]
    fn level_structure_p11_q2() {
        let alg = build_algebra(11).unwrap();
        let classes = ideal_classes(&alg).unwrap();
        let space = build_level_structure(&classes, 2).unwrap();
        assert_eq!(space.edges.len(), 3);
        // weighted edge mass: (q+1)(p-1)/24 = 3 * 10/24 = 5/4
        let mut mass = Rat::zero();
        for e in &space.edges {
            mass += Rat::new(Int::one(), Int::from(e.stab_order));
        }
        assert_eq!(mass, Rat::new(int(5), int(4)));
        let mut w = space.weights_j();
        w.sort_unstable();
        assert_eq!(w, vec![2, 2, 4]);
    }

    #[test]
    fn two_level_p11_q2_star() {
        let data = two_level_data(11, 2, 13).unwrap();
        assert_eq!(data.k_index, 3);
        assert_eq!(data.kp_index_k, 1);
        // cusp eigenvector of B(2) with a_2 = -2 is (2, -3)
        let f = vec![int(2), int(-3)];
        // eta_f(e) = a_q^2/(q+1) = 4/3, m = 4/3 - 3 = -5/3, v_5(m) = 1
        let report = star_criterion(&data, &f, 5).unwrap();
        assert!(report.holds);
        assert_eq!(report.m, "-5/3");
        assert_eq!(report.n0, Some(1));
        let report = star_criterion(&data, &f, 7).unwrap();
        assert!(!report.holds);
        assert!(matches!(
            star_criterion(&data, &f, 2),
            Err(LevelError::HypothesisViolated(_))
        ));
    }

    #[test]
    fn rational_eigenforms_p11() {
        let data = two_level_data(11, 2, 50).unwrap();
        let forms = rational_eigenforms(&data.labels_k, &data.b_k);
        assert_eq!(forms.len(), 2);
        assert!(forms[0].eisenstein);
        let cusp = &forms[1];
        let get = |r: u64| -> i64 {
            cusp.values
                .iter()
                .find(|(rr, _)| *rr == r)
                .map(|(_, a)| a.to_i64().unwrap())
                .unwrap()
        };
        // eigenvalues of the weight-2 level-11 cusp form
        assert_eq!(get(2), -2);
        assert_eq!(get(3), -1);
        assert_eq!(get(5), 1);
        assert_eq!(get(7), -2);
        assert_eq!(get(13), 4);
    }

    #[test]
    fn abelian_test_p11() {
        let data = two_level_data(11, 2, 50).unwrap();
        let forms = rational_eigenforms(&data.labels_k, &data.b_k);
        let cusp = &forms[1];
        // classical Eisenstein congruence at 11: abelian mod 5
        assert!(abelian_test(&cusp.values, 11, 5));
        // a_2 = -2 = 1 mod 3 but 1 + 2 = 0 mod 3
        assert!(!abelian_test(&cusp.values, 11, 3));
        assert!(!abelian_test(&cusp.values, 11, 7));
        assert!(abelian_test(&forms[0].values, 11, 7));
    }

    #[test]
    fn semisimple_small_example() {
        // a repeated non-diagonalizable reduction mod 2
        let t = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]);
        let (ss, nil) = semisimple_mod_ell(&[t], 2);
        assert!(!ss);
        assert_eq!(nil, 1);
        let t = IntMatrix::from_rows(&[vec![1, 0], vec![0, 2]]);
        let (ss, nil) = semisimple_mod_ell(&[t], 7);
        assert!(ss);
        assert_eq!(nil, 0);
    }

    #[test]
    fn joint_eigensystems_with_extension_values() {
        // companion matrix of x^2 + 1 over F_3: eigenvalues in F_9
        let t = IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]);
        let systems = joint_eigensystems_mod_ell(&[2], &[t], 3).unwrap();
        assert_eq!(systems.len(), 2);
        for s in &systems {
            assert_eq!(s.degree, 2);
            assert_eq!(s.multiplicity, 1);
        }
    }

    #[test]
    fn two_places_witness_logic() {
        assert!(two_places_witnesses(11, 2, 3, 2).is_empty());
        assert!(two_places_witnesses(11, 2, 2, 2).is_empty());
        let w = two_places_witnesses(11, 5, 7, 2);
        assert_eq!(w, vec![2, 3]);
    }
}
