//! Left ideal classes of a maximal order in a definite quaternion algebra
//! over Q, unit-group weights, and Brandt matrices: the Hecke operators on
//! the space of weight-2 algebraic modular forms, with entries counted by
//! exact lattice-point enumeration of the reduced norm form.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::ff::{is_prime_u64, Fq, FqMatrix};
use crate::arith::matrix::{hnf_rows, Int, IntMatrix, Rat, RatMatrix};
use crate::congruence::PairedLattice;
use crate::quat::lattice::QuatLattice;
use crate::quat::{maximal_order, Quat, QuatError, QuaternionAlgebra, QuaternionOrder};

/// One ideal class: a primitive representative, its right order, and the
/// unit group of the right order.
#[derive(Debug, Clone)]
pub struct ClassRep {
    pub ideal: QuatLattice,
    pub right_order: QuatLattice,
    pub units: Vec<Quat>,
    pub weight: u64,
}

/// The finite set of left ideal classes with unit weights.
#[derive(Debug, Clone)]
pub struct IdealClassSet {
    pub alg: QuaternionAlgebra,
    pub order: QuaternionOrder,
    pub order_lattice: QuatLattice,
    pub classes: Vec<ClassRep>,
    /// auxiliary prime used for the neighbor exploration
    pub neighbor_prime: u64,
}

impl IdealClassSet {
    pub fn h(&self) -> usize {
        self.classes.len()
    }

    pub fn weights(&self) -> Vec<u64> {
        self.classes.iter().map(|c| c.weight).collect()
    }

    /// Sum of 1/W_i; equals (p-1)/24 for p > 3.
    pub fn mass(&self) -> Rat {
        let mut m = Rat::zero();
        for c in &self.classes {
            m += Rat::new(Int::one(), Int::from(c.weight));
        }
        m
    }
}

/// A splitting O/qO = M_2(F_q) at an unramified prime q, found from a
/// deterministic idempotent search.
#[derive(Debug, Clone)]
pub struct ModQSplitting {
    pub q: u64,
    pub fq: Fq,
    /// structure constants: basis_mul[i][j] = integer coordinates of
    /// b_i b_j in the order basis
    basis_mul: Vec<Vec<Vec<Int>>>,
    /// phi[i] = 2x2 image of the order basis element b_i
    pub phi: Vec<FqMatrix>,
}

fn order_coords(order: &QuaternionOrder, x: &Quat) -> Option<Vec<Rat>> {
    order.basis.transpose().solve(&x.coords())
}

fn int_coords(order: &QuaternionOrder, x: &Quat) -> Vec<Int> {
    let c = order_coords(order, x).expect("element in the algebra");
    c.into_iter()
        .map(|e| {
            assert!(e.is_integer(), "element not in the order");
            e.to_integer()
        })
        .collect()
}

impl ModQSplitting {
    pub fn new(alg: &QuaternionAlgebra, order: &QuaternionOrder, q: u64) -> Result<Self, QuatError> {
        assert!(is_prime_u64(q));
        if q == alg.p {
            return Err(QuatError::NotCoprime { n: q, p: alg.p });
        }
        let fq = Fq::new(q, 1);
        let b = order.basis_quats();
        let mut basis_mul = Vec::with_capacity(4);
        for bi in &b {
            let mut row = Vec::with_capacity(4);
            for bj in &b {
                row.push(int_coords(order, &bi.mul(bj, alg)));
            }
            basis_mul.push(row);
        }
        let one_coords = int_coords(order, &Quat::one());
        let qq = BigInt::from(q);
        let redc = |x: &Int| -> u64 { x.mod_floor(&qq).to_u64().unwrap() };
        let mul_modq = |x: &[u64], y: &[u64]| -> Vec<u64> {
            let mut out = vec![0u64; 4];
            for i in 0..4 {
                if x[i] == 0 {
                    continue;
                }
                for j in 0..4 {
                    if y[j] == 0 {
                        continue;
                    }
                    let c = (x[i] as u128 * y[j] as u128 % q as u128) as u64;
                    for k in 0..4 {
                        let add = c as u128 * redc(&basis_mul[i][j][k]) as u128 % q as u128;
                        out[k] = ((out[k] as u128 + add) % q as u128) as u64;
                    }
                }
            }
            out
        };
        let one_modq: Vec<u64> = one_coords.iter().map(redc).collect();
        // find x with reduced characteristic polynomial split with two
        // distinct roots: lexicographic scan over coordinate tuples
        let mut idem: Option<Vec<u64>> = None;
        'scan: for c0 in 0..q {
            for c1 in 0..q {
                for c2 in 0..q {
                    for c3 in 0..q {
                        let coords = [c0, c1, c2, c3];
                        let x = {
                            let mut acc = Quat::zero();
                            for (r, &c) in coords.iter().enumerate() {
                                acc = acc.add(&b[r].scale(&Rat::from(Int::from(c))));
                            }
                            acc
                        };
                        let t = x.trd();
                        let n = x.nrd(alg);
                        assert!(t.is_integer() && n.is_integer());
                        let tq = redc(&t.to_integer());
                        let nq = redc(&n.to_integer());
                        // roots of X^2 - t X + n over F_q
                        let mut roots = Vec::new();
                        for r in 0..q {
                            let val = (r as u128 * r as u128 + q as u128 * q as u128
                                - (tq as u128 * r as u128) % (q as u128 * q as u128))
                                % q as u128;
                            let val = (val + nq as u128) % q as u128;
                            if val == 0 {
                                roots.push(r);
                            }
                        }
                        if roots.len() == 2 {
                            let (alpha, beta) = (roots[0], roots[1]);
                            // e = (x - beta) / (alpha - beta)
                            let inv = mod_inv(q, (alpha + q - beta) % q);
                            let mut e = vec![0u64; 4];
                            for k in 0..4 {
                                let xb = (coords[k] as u128 + q as u128
                                    - (beta as u128 * one_modq[k] as u128) % q as u128)
                                    % q as u128;
                                e[k] = (xb * inv as u128 % q as u128) as u64;
                            }
                            // verify idempotent and nontriviality
                            let ee = mul_modq(&e, &e);
                            if ee == e && e != vec![0; 4] && e != one_modq {
                                idem = Some(e);
                                break 'scan;
                            }
                        }
                    }
                }
            }
        }
        let e = idem.expect("split algebra must contain an idempotent");
        // left ideal (O/q) e: row space of the vectors b_i * e, reduced to
        // an echelon basis; a rank-1 idempotent gives dimension 2
        let mut span = FqMatrix::zero(&fq, 4, 4);
        for i in 0..4 {
            let mut ei = vec![0u64; 4];
            ei[i] = 1;
            let v = mul_modq(&ei, &e);
            for k in 0..4 {
                span.set(i, k, fq.from_u64(v[k]));
            }
        }
        let basis_rows = span.row_echelon_basis(&fq);
        assert_eq!(basis_rows.len(), 2, "rank-1 idempotent expected");
        let v1: Vec<u64> = basis_rows[0].iter().map(|e| e[0]).collect();
        let v2: Vec<u64> = basis_rows[1].iter().map(|e| e[0]).collect();
        // phi(b_i): columns = coefficients of b_i v_s in (v1, v2)
        let solve2 = |w: &[u64]| -> (u64, u64) {
            // solve a*v1 + b*v2 = w over F_q
            for a in 0..q {
                for bb in 0..q {
                    let mut ok = true;
                    for k in 0..4 {
                        let lhs = (a as u128 * v1[k] as u128 + bb as u128 * v2[k] as u128)
                            % q as u128;
                        if lhs != w[k] as u128 {
                            ok = false;
                            break;
                        }
                    }
                    if ok {
                        return (a, bb);
                    }
                }
            }
            panic!("vector not in the left ideal")
        };
        let mut phi = Vec::with_capacity(4);
        for i in 0..4 {
            let mut ei = vec![0u64; 4];
            ei[i] = 1;
            let w1 = mul_modq(&ei, &v1);
            let w2 = mul_modq(&ei, &v2);
            let (a1, b1) = solve2(&w1);
            let (a2, b2) = solve2(&w2);
            let mut m = FqMatrix::zero(&fq, 2, 2);
            m.set(0, 0, fq.from_u64(a1));
            m.set(1, 0, fq.from_u64(b1));
            m.set(0, 1, fq.from_u64(a2));
            m.set(1, 1, fq.from_u64(b2));
            phi.push(m);
        }
        let split = ModQSplitting { q, fq, basis_mul, phi };
        split.verify(order);
        Ok(split)
    }

    fn verify(&self, order: &QuaternionOrder) {
        // phi is an algebra homomorphism on the basis and phi(1) = I
        let fq = &self.fq;
        let one = int_coords(order, &Quat::one());
        let mut phi_one = FqMatrix::zero(fq, 2, 2);
        for i in 0..4 {
            let c = fq.from_int(&one[i]);
            phi_one = phi_one.add(fq, &self.phi[i].scale(fq, &c));
        }
        assert_eq!(phi_one, FqMatrix::identity(fq, 2), "phi(1) != 1");
        for i in 0..4 {
            for j in 0..4 {
                let prod = self.phi[i].mul(fq, &self.phi[j]);
                let mut expect = FqMatrix::zero(fq, 2, 2);
                for k in 0..4 {
                    let c = fq.from_int(&self.basis_mul[i][j][k]);
                    expect = expect.add(fq, &self.phi[k].scale(fq, &c));
                }
                assert_eq!(prod, expect, "phi not multiplicative");
            }
        }
    }

    /// Image under phi of an order element given by integer coordinates.
    pub fn phi_of(&self, coords: &[Int]) -> FqMatrix {
        let fq = &self.fq;
        let mut m = FqMatrix::zero(fq, 2, 2);
        for i in 0..4 {
            let c = fq.from_int(&coords[i]);
            m = m.add(fq, &self.phi[i].scale(fq, &c));
        }
        m
    }
}

fn mod_inv(q: u64, a: u64) -> u64 {
    assert!(a % q != 0);
    let mut result = 1u64;
    let mut base = a % q;
    let mut e = q - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = (result as u128 * base as u128 % q as u128) as u64;
        }
        base = (base as u128 * base as u128 % q as u128) as u64;
        e >>= 1;
    }
    result
}

/// The q+1 neighbor ideals of a left O-ideal I: the left O-sublattices
/// J of I with I/J of order q^2 and Nrd(J) = q Nrd(I), pulled back from
/// the lines of P^1(F_q) through the splitting. Returned in the
/// deterministic line order (1:0), (1:1), ..., (1:q-1), (0:1).
pub fn neighbor_ideals(
    alg: &QuaternionAlgebra,
    order: &QuaternionOrder,
    split: &ModQSplitting,
    ideal: &QuatLattice,
) -> Vec<QuatLattice> {
    let q = split.q;
    let fq = &split.fq;
    let b_o = order.basis_quats();
    let a_i = ideal.basis_quats();
    let ideal_t = ideal.basis.transpose();
    // coords in the I-basis of b_i * a_r (all integral)
    let mut prod_coords = vec![vec![Vec::new(); 4]; 4];
    for (i, bo) in b_o.iter().enumerate() {
        for (r, ar) in a_i.iter().enumerate() {
            let w = bo.mul(ar, alg);
            let c = ideal_t.solve(&w.coords()).expect("O I = I");
            let ic: Vec<Int> = c
                .into_iter()
                .map(|e| {
                    assert!(e.is_integer(), "ideal is not a left O-module");
                    e.to_integer()
                })
                .collect();
            prod_coords[i][r] = ic;
        }
    }
    let qq = BigInt::from(q);
    let redc = |x: &Int| -> u64 { x.mod_floor(&qq).to_u64().unwrap() };
    // find a generator g = sum c_r a_r of I/qI over O/qO
    let mut gen: Option<([u64; 4], FqMatrix)> = None;
    'scan: for c0 in 0..q {
        for c1 in 0..q {
            for c2 in 0..q {
                for c3 in 0..q {
                    let coords = [c0, c1, c2, c3];
                    if coords == [0, 0, 0, 0] {
                        continue;
                    }
                    // M_g: columns = coords of b_i g in I-basis mod q
                    let mut m = FqMatrix::zero(fq, 4, 4);
                    for i in 0..4 {
                        for k in 0..4 {
                            let mut acc = 0u128;
                            for (r, &cr) in coords.iter().enumerate() {
                                acc = (acc
                                    + cr as u128 * redc(&prod_coords[i][r][k]) as u128)
                                    % q as u128;
                            }
                            m.set(k, i, fq.from_u64(acc as u64));
                        }
                    }
                    if m.rank(fq) == 4 {
                        gen = Some((coords, m));
                        break 'scan;
                    }
                }
            }
        }
    }
    let (_, m_g) = gen.expect("I/qI is free of rank one");
    // Phi: 4x4 matrix over F_q sending order-coords to vec(phi): solve for
    // preimages of the standard left-ideal generators
    let mut phi_mat = FqMatrix::zero(fq, 4, 4);
    for i in 0..4 {
        let p = &split.phi[i];
        // vec(m) = (m00, m01, m10, m11)
        phi_mat.set(0, i, p.get(0, 0).clone());
        phi_mat.set(1, i, p.get(0, 1).clone());
        phi_mat.set(2, i, p.get(1, 0).clone());
        phi_mat.set(3, i, p.get(1, 1).clone());
    }
    // lines of P^1
    let mut lines: Vec<(u64, u64)> = (0..q).map(|c| (1, c)).collect();
    lines.push((0, 1));
    let mut out = Vec::with_capacity(lines.len());
    for (u, v) in lines {
        // left ideal L = {m : rowspace(m) in span(u, v)}: basis
        // E1 = [[u, v], [0, 0]], E2 = [[0, 0], [u, v]]
        let targets = [
            vec![u, v, 0, 0], // vec(E1)
            vec![0, 0, u, v], // vec(E2)
        ];
        let mut gens_in_i: Vec<Vec<Int>> = Vec::new();
        for t in &targets {
            // solve phi_mat * w = t
            let w = solve_fq(fq, &phi_mat, t);
            // element w * g in I-coords: M_g * w
            let wv: Vec<crate::arith::ff::FfElem> = w.iter().map(|&x| fq.from_u64(x)).collect();
            let img = m_g.mul_vec(fq, &wv);
            gens_in_i.push(img.iter().map(|e| Int::from(e[0])).collect());
        }
        // J = q I + Z-span of the two generators, in I-coordinates
        let mut rows: Vec<Vec<Int>> = Vec::new();
        for r in 0..4 {
            let mut row = vec![Int::zero(); 4];
            row[r] = Int::from(q);
            rows.push(row);
        }
        rows.extend(gens_in_i);
        let t = hnf_rows(&IntMatrix::from_big_rows(rows));
        assert_eq!(t.rows, 4);
        // convert to ambient coordinates: rows T * B_I
        let amb = RatMatrix::from_int(t).mul(&ideal.basis);
        let j = QuatLattice::from_spanning((0..4).map(|i| amb.row_rat(i)).collect());
        assert_eq!(ideal.index_of(&j), Int::from(q) * Int::from(q), "neighbor index");
        out.push(j);
    }
    out
}

fn solve_fq(fq: &Fq, m: &FqMatrix, target: &[u64]) -> Vec<u64> {
    // solve m x = target over the prime field by elimination on an
    // augmented copy
    let n = m.cols;
    let mut aug = FqMatrix::zero(fq, m.rows, n + 1);
    for i in 0..m.rows {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n, fq.from_u64(target[i]));
    }
    // eliminate
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..n {
        if r == m.rows {
            break;
        }
        let piv = (r..m.rows).find(|&i| !fq.is_zero(aug.get(i, c)));
        let piv = match piv {
            None => continue,
            Some(p) => p,
        };
        for j in 0..=n {
            let x = aug.get(r, j).clone();
            aug.set(r, j, aug.get(piv, j).clone());
            aug.set(piv, j, x);
        }
        let inv = fq.inv(aug.get(r, c));
        for j in 0..=n {
            let x = fq.mul(aug.get(r, j), &inv);
            aug.set(r, j, x);
        }
        for i in 0..m.rows {
            if i != r && !fq.is_zero(aug.get(i, c)) {
                let f = aug.get(i, c).clone();
                for j in 0..=n {
                    let x = fq.sub(aug.get(i, j), &fq.mul(aug.get(r, j), &f));
                    aug.set(i, j, x);
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    let mut x = vec![0u64; n];
    for (i, c) in pivots {
        x[c] = aug.get(i, n)[0];
    }
    // consistency check
    let xv: Vec<crate::arith::ff::FfElem> = x.iter().map(|&e| fq.from_u64(e)).collect();
    let img = m.mul_vec(fq, &xv);
    for (k, e) in img.iter().enumerate() {
        assert_eq!(e[0], target[k] % fq.ell, "inconsistent system");
    }
    x
}

/// Witness for I isomorphic-to J as left O-modules: returns x with
/// J = I x, found as y / Nrd(I) for y in conj(I) J of reduced norm
/// Nrd(I) Nrd(J). None if the classes differ.
pub fn iso_witness(
    alg: &QuaternionAlgebra,
    i_lat: &QuatLattice,
    j_lat: &QuatLattice,
) -> Option<Quat> {
    let prod = i_lat.conj().mul(j_lat, alg);
    let target = i_lat.nrd(alg) * j_lat.nrd(alg);
    let hits = prod.elements_of_norm_limited(alg, &target, 1);
    let y = hits.into_iter().next()?;
    let x = y.scale(&i_lat.nrd(alg).recip());
    // verify exactly: I x = J
    let ix = QuatLattice::from_quats(
        i_lat
            .basis_quats()
            .iter()
            .map(|b| b.mul(&x, alg))
            .collect(),
    );
    assert_eq!(ix, *j_lat, "iso witness must carry I onto J");
    Some(x)
}

/// Enumerate the left ideal classes of the maximal order by breadth-first
/// neighbor exploration at the least prime q distinct from p. Classes are
/// sorted by (weight, lexicographic normalized Gram of the representative).
pub fn ideal_classes(alg: &QuaternionAlgebra) -> Result<IdealClassSet, QuatError> {
    let order = maximal_order(alg)?;
    let order_lattice = QuatLattice::from_spanning((0..4).map(|i| order.basis.row_rat(i)).collect());
    let mut q = 2u64;
    while q == alg.p || !is_prime_u64(q) {
        q += 1;
    }
    let split = ModQSplitting::new(alg, &order, q)?;
    let mut reps: Vec<QuatLattice> = vec![order_lattice.clone()];
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    while let Some(idx) = queue.pop_front() {
        let cur = reps[idx].clone();
        for nb in neighbor_ideals(alg, &order, &split, &cur) {
            let cand = nb.primitive_scaling();
            let known = reps.iter().any(|r| iso_witness(alg, r, &cand).is_some());
            if !known {
                reps.push(cand);
                queue.push_back(reps.len() - 1);
            }
        }
    }
    let mut classes: Vec<ClassRep> = reps
        .into_iter()
        .map(|ideal| {
            let right_order = ideal.right_order(alg);
            let units = right_order.units(alg);
            let weight = units.len() as u64;
            ClassRep { ideal, right_order, units, weight }
        })
        .collect();
    classes.sort_by(|a, b| {
        let ka = (a.weight, gram_key(alg, &a.ideal));
        let kb = (b.weight, gram_key(alg, &b.ideal));
        ka.cmp(&kb)
    });
    let set = IdealClassSet { alg: alg.clone(), order, order_lattice, classes, neighbor_prime: q };
    // Eichler mass identity as a correctness oracle (p > 3)
    if alg.p > 3 {
        let expect = Rat::new(Int::from(alg.p - 1), Int::from(24));
        assert_eq!(set.mass(), expect, "mass formula violated");
    }
    Ok(set)
}

fn gram_key(alg: &QuaternionAlgebra, ideal: &QuatLattice) -> Vec<(Int, Int)> {
    // normalized Gram: Trd-Gram of the primitive representative divided by
    // its reduced norm, flattened row-major as exact rationals
    let g = ideal.gram(alg);
    let n = ideal.nrd(alg);
    let mut key = Vec::with_capacity(16);
    for i in 0..4 {
        for j in 0..4 {
            let e = g.entry(i, j) / &n;
            key.push((e.numer().clone(), e.denom().clone()));
        }
    }
    key
}

/// Brandt matrix B(n): B(n)_{ij} = e_{ij}(n) / W_j where e_{ij}(n) counts
/// the elements of conj(I_j) I_i of reduced norm n times the norm of that
/// lattice. Requires gcd(n, p) = 1.
pub fn brandt_matrix(classes: &IdealClassSet, n: u64) -> Result<IntMatrix, QuatError> {
    assert!(n >= 1);
    if n % classes.alg.p == 0 {
        return Err(QuatError::NotCoprime { n, p: classes.alg.p });
    }
    let h = classes.h();
    let mut b = IntMatrix::zero(h, h);
    for i in 0..h {
        for j in 0..h {
            let lat = classes.classes[j].ideal.conj().mul(&classes.classes[i].ideal, &classes.alg);
            let target = lat.nrd(&classes.alg) * Rat::from(Int::from(n));
            let count = lat.count_of_norm(&classes.alg, &target);
            let w = classes.classes[j].weight as usize;
            assert_eq!(count % w, 0, "unit orbit count must divide");
            b.set(i, j, Int::from((count / w) as u64));
        }
    }
    Ok(b)
}

/// All Brandt matrices B(n) for 1 <= n <= nmax with gcd(n, p) = 1, from a
/// single lattice-point enumeration per class pair.
pub fn brandt_matrices_upto(classes: &IdealClassSet, nmax: u64) -> Vec<(u64, IntMatrix)> {
    let h = classes.h();
    let ns: Vec<u64> = (1..=nmax).filter(|n| n % classes.alg.p != 0).collect();
    let mut mats: Vec<IntMatrix> = ns.iter().map(|_| IntMatrix::zero(h, h)).collect();
    for i in 0..h {
        for j in 0..h {
            let lat = classes.classes[j].ideal.conj().mul(&classes.classes[i].ideal, &classes.alg);
            let nrd = lat.nrd(&classes.alg);
            let gram = lat.gram(&classes.alg);
            // Trd(x conj x) = 2 Nrd(x): bound = 2 * nmax * nrd
            let bound = &nrd * Rat::from(Int::from(2 * nmax));
            let values = crate::quat::values_upto(&gram, &bound);
            let mut counts: std::collections::HashMap<u64, usize> = std::collections::HashMap::new();
            let two_nrd = &nrd + &nrd;
            for v in values {
                let ratio = &v / &two_nrd;
                assert!(ratio.is_integer(), "norm values lie in Nrd(L) Z");
                let n = ratio.to_integer().to_u64().unwrap();
                *counts.entry(n).or_insert(0) += 1;
            }
            let w = classes.classes[j].weight as usize;
            for (t, &n) in ns.iter().enumerate() {
                let count = counts.get(&n).copied().unwrap_or(0);
                assert_eq!(count % w, 0, "unit orbit count must divide");
                mats[t].set(i, j, Int::from((count / w) as u64));
            }
        }
    }
    ns.into_iter().zip(mats).collect()
}

/// The weighted pairing diag(1/W_1, ..., 1/W_h) on Z^h.
pub fn weighted_pairing(classes: &IdealClassSet) -> PairedLattice {
    PairedLattice::diagonal_weights(&classes.weights())
}

/// The Eisenstein eigensystem r -> 1 + r on the all-ones vector, verified
/// against the actual Brandt matrices.
pub fn eisenstein_system(classes: &IdealClassSet, labels: &[u64]) -> Result<Vec<(u64, Int)>, QuatError> {
    let h = classes.h();
    let ones = vec![Int::one(); h];
    let mut out = Vec::new();
    for &r in labels {
        if r % classes.alg.p == 0 {
            return Err(QuatError::NotCoprime { n: r, p: classes.alg.p });
        }
        let b = brandt_matrix(classes, r)?;
        let img = b.mul_vec(&ones);
        let ev = Int::from(1 + r);
        let expect: Vec<Int> = ones.iter().map(|x| x * &ev).collect();
        if img != expect {
            return Err(QuatError::OrderInvariantFailed(
                "all-ones vector is not an eigenvector: normalization bug",
            ));
        }
        out.push((r, ev));
    }
    Ok(out)
}

/// Classify the r+1 colength-r sublattices of class representative i:
/// returns (line index, class index j, witness x with sub = I_j x, sub).
pub fn classify_sublattices(
    classes: &IdealClassSet,
    split: &ModQSplitting,
    i: usize,
) -> Vec<(usize, usize, Quat, QuatLattice)> {
    let alg = &classes.alg;
    let nbrs = neighbor_ideals(alg, &classes.order, split, &classes.classes[i].ideal);
    let mut out = Vec::new();
    for (line, sub) in nbrs.into_iter().enumerate() {
        let mut found = None;
        for (j, c) in classes.classes.iter().enumerate() {
            if let Some(x) = iso_witness(alg, &c.ideal, &sub) {
                found = Some((j, x));
                break;
            }
        }
        let (j, x) = found.expect("sublattice must land in some class");
        out.push((line, j, x, sub));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::matrix::{int, rat};
    use crate::quat::build_algebra;

    #[test]
    fn classes_p11() {
        let alg = build_algebra(11).unwrap();
        let set = ideal_classes(&alg).unwrap();
        assert_eq!(set.h(), 2);
        assert_eq!(set.weights(), vec![4, 6]);
        assert_eq!(set.mass(), rat(5, 12));
    }

    #[test]
    fn classes_p2() {
        let alg = build_algebra(2).unwrap();
        let set = ideal_classes(&alg).unwrap();
        assert_eq!(set.h(), 1);
        assert_eq!(set.weights(), vec![24]);
        assert_eq!(set.mass(), rat(1, 24));
    }

    #[test]
    fn brandt_p11_basics() {
        let alg = build_algebra(11).unwrap();
        let set = ideal_classes(&alg).unwrap();
        let b1 = brandt_matrix(&set, 1).unwrap();
        assert!(b1.is_identity());
        let b2 = brandt_matrix(&set, 2).unwrap();
        // row sums 1 + 2 = 3
        for i in 0..2 {
            let s: Int = (0..2).map(|j| b2.get(i, j).clone()).sum();
            assert_eq!(s, int(3));
        }
        // char poly (x - 3)(x + 2) = x^2 - x - 6
        let cp = crate::arith::matrix::char_poly(&b2);
        assert_eq!(cp, vec![int(-6), int(-1), int(1)]);
        // self-adjointness W_j B_ij = W_i B_ji
        let w = set.weights();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(
                    Int::from(w[j]) * b2.get(i, j),
                    Int::from(w[i]) * b2.get(j, i)
                );
            }
        }
        // ramified prime rejected
        assert!(brandt_matrix(&set, 11).is_err());
        assert!(brandt_matrix(&set, 22).is_err());
    }

    #[test]
    fn brandt_p11_hecke_relations() {
        let alg = build_algebra(11).unwrap();
        let set = ideal_classes(&alg).unwrap();
        let b2 = brandt_matrix(&set, 2).unwrap();
        let b3 = brandt_matrix(&set, 3).unwrap();
        let b4 = brandt_matrix(&set, 4).unwrap();
        let b6 = brandt_matrix(&set, 6).unwrap();
        assert_eq!(b2.mul(&b3), b6);
        assert_eq!(b3.mul(&b2), b6);
        // recursion B(4) = B(2)^2 - 2 B(1)
        let expect = b2.mul(&b2).sub(&IntMatrix::identity(2).scale(&int(2)));
        assert_eq!(b4, expect);
    }

    #[test]
    fn eisenstein_p11() {
        let alg = build_algebra(11).unwrap();
        let set = ideal_classes(&alg).unwrap();
        let labels: Vec<u64> = vec![2, 3, 5, 7, 13];
        let sys = eisenstein_system(&set, &labels).unwrap();
        assert_eq!(sys[0], (2, int(3)));
        assert_eq!(sys[1], (3, int(4)));
    }

    #[test]
    fn mass_formula_several_primes() {
        for p in [13u64, 17, 19, 23, 29, 31] {
            let alg = build_algebra(p).unwrap();
            let set = ideal_classes(&alg).unwrap();
            assert_eq!(set.mass(), Rat::new(Int::from(p - 1), Int::from(24)), "p = {p}");
        }
    }

    #[test]
    fn splitting_rejects_ramified() {
        let alg = build_algebra(11).unwrap();
        let order = maximal_order(&alg).unwrap();
        assert!(ModQSplitting::new(&alg, &order, 11).is_err());
    }

    #[test]
    fn neighbors_have_norm_q() {
        let alg = build_algebra(11).unwrap();
        let order = maximal_order(&alg).unwrap();
        let lat = QuatLattice::from_spanning((0..4).map(|i| order.basis.row_rat(i)).collect());
        let split = ModQSplitting::new(&alg, &order, 2).unwrap();
        let nbrs = neighbor_ideals(&alg, &order, &split, &lat);
        assert_eq!(nbrs.len(), 3);
        for nb in &nbrs {
            assert_eq!(nb.nrd(&alg), rat(2, 1));
            // still a left O-module: O * J = J
            let oj = lat.mul(nb, &alg);
            assert_eq!(&oj, nb);
        }
    }
}
