//! Explicit finite matrix groups GL(3, F_q) and GSp(4, F_q) for small q,
//! their parahoric reduction shapes, double-coset counting by orbit
//! sweeping with canonical-element hashing, and parabolically induced
//! fixed-space dimensions.

use std::collections::{HashMap, HashSet};

use crate::arith::ff::Fq;

use super::GroupKind;

/// Table-based arithmetic for F_q, q <= 8, elements indexed 0..q with
/// 0 -> 0 and 1 -> 1. Built from the canonical field tower.
#[derive(Debug, Clone)]
pub struct SmallField {
    pub q: usize,
    add: Vec<Vec<u8>>,
    mul: Vec<Vec<u8>>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl SmallField {
    pub fn new(q: u64) -> SmallField {
        // factor q as l^k
        let mut ell = 2u64;
        while q % ell != 0 {
            ell += 1;
        }
        let mut k = 0usize;
        let mut m = q;
        while m > 1 {
            assert_eq!(m % ell, 0, "q must be a prime power");
            m /= ell;
            k += 1;
        }
        let f = Fq::new(ell, k);
        let mut els = f.all_elements();
        // reorder so index 0 is zero and index 1 is one
        els.sort_by_key(|e| {
            let mut key = e.clone();
            key.reverse();
            key
        });
        assert!(f.is_zero(&els[0]));
        assert_eq!(els[1], f.one());
        let n = els.len();
        let idx = |e: &Vec<u64>| -> u8 { els.iter().position(|x| x == e).unwrap() as u8 };
        let mut add = vec![vec![0u8; n]; n];
        let mut mul = vec![vec![0u8; n]; n];
        let mut neg = vec![0u8; n];
        let mut inv = vec![0u8; n];
        for i in 0..n {
            neg[i] = idx(&f.neg(&els[i]));
            if i > 0 {
                inv[i] = idx(&f.inv(&els[i]));
            }
            for j in 0..n {
                add[i][j] = idx(&f.add(&els[i], &els[j]));
                mul[i][j] = idx(&f.mul(&els[i], &els[j]));
            }
        }
        SmallField { q: n, add, mul, neg, inv }
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize][b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize][b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        assert!(a != 0);
        self.inv[a as usize]
    }

    /// A generator of the cyclic group F_q^*: the least index of
    /// multiplicative order q - 1.
    pub fn unit_generator(&self) -> u8 {
        'outer: for g in 1..self.q as u8 {
            let mut x = g;
            for _ in 1..self.q - 1 {
                if x == 1 {
                    continue 'outer;
                }
                x = self.mul(x, g);
            }
            if x == 1 {
                return g;
            }
        }
        panic!("no generator found")
    }
}

/// Small dense matrix over a SmallField, n in {3, 4}; hash-encodable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GMat {
    pub n: u8,
    pub e: [u8; 16],
}

impl GMat {
    pub fn identity(n: usize) -> GMat {
        let mut m = GMat { n: n as u8, e: [0; 16] };
        for i in 0..n {
            m.e[i * n + i] = 1;
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.e[i * self.n as usize + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        self.e[i * self.n as usize + j] = v;
    }

    pub fn mul(&self, f: &SmallField, other: &GMat) -> GMat {
        let n = self.n as usize;
        let mut out = GMat { n: self.n, e: [0; 16] };
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b == 0 {
                        continue;
                    }
                    let v = f.add(out.get(i, j), f.mul(a, b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn encode(&self) -> u64 {
        let mut code = 0u64;
        for i in 0..16 {
            code |= (self.e[i] as u64) << (3 * i);
        }
        code
    }
}

/// A finite matrix group with its element list and structural generators:
/// torus and positive-root generators for the Borel, plus the simple
/// reflections.
#[derive(Debug, Clone)]
pub struct FiniteMatrixGroup {
    pub kind: GroupKind,
    pub field: SmallField,
    pub elements: Vec<GMat>,
    pub element_set: HashSet<u64>,
    pub borel_gens: Vec<GMat>,
    pub reflections: Vec<GMat>,
}

pub fn group_order_formula(kind: GroupKind, q: u64) -> u64 {
    match kind {
        GroupKind::Gl3 => q.pow(3) * (q - 1) * (q * q - 1) * (q.pow(3) - 1),
        GroupKind::Gsp4 => q.pow(4) * (q - 1) * (q * q - 1) * (q.pow(4) - 1),
        GroupKind::U3Inert => panic!("no finite matrix model for the inert case"),
    }
}

/// Similitude factor of a GSp4 candidate with respect to the skew-diagonal
/// form, or None if not symplectic-similitude.
fn gsp4_similitude(f: &SmallField, g: &GMat) -> Option<u8> {
    // J has (0,3) = (1,2) = 1, (2,1) = (3,0) = -1; require g^T J g = nu J
    let pair = |x: usize, y: usize| -> u8 {
        // <col_x, col_y> = sum_i sum_j g[i][x] J[i][j] g[j][y]
        let mut acc = 0u8;
        for (i, j, sgn) in [(0usize, 3usize, false), (1, 2, false), (2, 1, true), (3, 0, true)] {
            let mut t = f.mul(g.get(i, x), g.get(j, y));
            if sgn {
                t = f.neg(t);
            }
            acc = f.add(acc, t);
        }
        acc
    };
    let nu = pair(0, 3);
    if nu == 0 {
        return None;
    }
    let checks = [
        (0usize, 1usize, 0u8),
        (0, 2, 0),
        (1, 3, 0),
        (2, 3, 0),
        (0, 3, nu),
        (1, 2, nu),
    ];
    for (x, y, want) in checks {
        if pair(x, y) != want {
            return None;
        }
    }
    Some(nu)
}

fn closure(f: &SmallField, gens: &[GMat], n: usize) -> Vec<GMat> {
    let id = GMat::identity(n);
    let mut set = HashSet::new();
    set.insert(id.encode());
    let mut list = vec![id];
    let mut frontier = vec![0usize];
    while let Some(idx) = frontier.pop() {
        let cur = list[idx];
        for g in gens {
            let prod = cur.mul(f, g);
            if set.insert(prod.encode()) {
                list.push(prod);
                frontier.push(list.len() - 1);
            }
        }
    }
    list
}

/// Build GL(3, F_q) (q <= 4) or GSp(4, F_q) (q <= 3) by closure from
/// torus/root generators and the simple reflections. The group order is
/// verified against the classical formula.
pub fn build_group(kind: GroupKind, q: u64) -> FiniteMatrixGroup {
    let f = SmallField::new(q);
    let g0 = f.unit_generator();
    let (n, borel_gens, reflections): (usize, Vec<GMat>, Vec<GMat>) = match kind {
        GroupKind::Gl3 => {
            let n = 3;
            let mut gens = Vec::new();
            for d in 0..3 {
                let mut t = GMat::identity(n);
                t.set(d, d, g0);
                gens.push(t);
            }
            for (i, j) in [(0usize, 1usize), (1, 2), (0, 2)] {
                let mut u = GMat::identity(n);
                u.set(i, j, 1);
                gens.push(u);
            }
            let mut s1 = GMat::identity(n);
            s1.set(0, 0, 0);
            s1.set(1, 1, 0);
            s1.set(0, 1, 1);
            s1.set(1, 0, 1);
            let mut s2 = GMat::identity(n);
            s2.set(1, 1, 0);
            s2.set(2, 2, 0);
            s2.set(1, 2, 1);
            s2.set(2, 1, 1);
            (n, gens, vec![s1, s2])
        }
        GroupKind::Gsp4 => {
            let n = 4;
            let mut gens = Vec::new();
            // torus diag(x, y, z/y, z/x)
            let t = |x: u8, y: u8, z: u8, f: &SmallField| -> GMat {
                let mut m = GMat::identity(n);
                m.set(0, 0, x);
                m.set(1, 1, y);
                m.set(2, 2, f.mul(z, f.inv(y)));
                m.set(3, 3, f.mul(z, f.inv(x)));
                m
            };
            gens.push(t(g0, 1, 1, &f));
            gens.push(t(1, g0, 1, &f));
            gens.push(t(1, 1, g0, &f));
            // positive root generators
            let mut u1 = GMat::identity(n); // E12 - E34
            u1.set(0, 1, 1);
            u1.set(2, 3, f.neg(1));
            let mut u2 = GMat::identity(n); // E23
            u2.set(1, 2, 1);
            let mut u3 = GMat::identity(n); // E13 + E24
            u3.set(0, 2, 1);
            u3.set(1, 3, 1);
            let mut u4 = GMat::identity(n); // E14
            u4.set(0, 3, 1);
            gens.extend([u1, u2, u3, u4]);
            // simple reflections: swap(e1,e2)(e3,e4) and the long-root
            // reflection in the (2,3)-block with a sign
            let mut s1 = GMat::identity(n);
            s1.set(0, 0, 0);
            s1.set(1, 1, 0);
            s1.set(0, 1, 1);
            s1.set(1, 0, 1);
            s1.set(2, 2, 0);
            s1.set(3, 3, 0);
            s1.set(2, 3, 1);
            s1.set(3, 2, 1);
            let mut s2 = GMat::identity(n);
            s2.set(1, 1, 0);
            s2.set(2, 2, 0);
            s2.set(1, 2, 1);
            s2.set(2, 1, f.neg(1));
            (n, gens, vec![s1, s2])
        }
        GroupKind::U3Inert => panic!("no finite matrix model for the inert case"),
    };
    // every generator must belong to the group
    if kind == GroupKind::Gsp4 {
        for g in borel_gens.iter().chain(reflections.iter()) {
            assert!(gsp4_similitude(&f, g).is_some(), "generator not symplectic");
        }
    }
    let mut all_gens = borel_gens.clone();
    all_gens.extend(reflections.iter().copied());
    let elements = closure(&f, &all_gens, n);
    assert_eq!(
        elements.len() as u64,
        group_order_formula(kind, q),
        "group order must match the classical formula"
    );
    let element_set = elements.iter().map(|m| m.encode()).collect();
    FiniteMatrixGroup { kind, field: f, elements, element_set, borel_gens, reflections }
}

/// Parahoric reduction shapes; K is the whole group, I the Borel shape,
/// J and J' the two block shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    K,
    I,
    /// GL3: rows (2,0),(2,1) zero. GSp4: the Heisenberg shape (first
    /// column zero below the corner).
    J,
    /// GSp4 only: the Siegel shape (lower-left 2x2 block zero).
    JPrime,
}

pub fn shape_contains(kind: GroupKind, shape: Shape, g: &GMat) -> bool {
    let n = g.n as usize;
    match shape {
        Shape::K => true,
        Shape::I => {
            for i in 0..n {
                for j in 0..i {
                    if g.get(i, j) != 0 {
                        return false;
                    }
                }
            }
            true
        }
        Shape::J => match kind {
            GroupKind::Gl3 => g.get(2, 0) == 0 && g.get(2, 1) == 0,
            GroupKind::Gsp4 => g.get(1, 0) == 0 && g.get(2, 0) == 0 && g.get(3, 0) == 0,
            GroupKind::U3Inert => unreachable!(),
        },
        Shape::JPrime => match kind {
            GroupKind::Gsp4 => {
                g.get(2, 0) == 0 && g.get(2, 1) == 0 && g.get(3, 0) == 0 && g.get(3, 1) == 0
            }
            _ => panic!("Siegel shape only exists for GSp4"),
        },
    }
}

/// Element list of a shape subgroup, with a closure check (full pairwise
/// product check when affordable, sampled otherwise).
pub fn shape_elements(group: &FiniteMatrixGroup, shape: Shape) -> Vec<GMat> {
    let list: Vec<GMat> = group
        .elements
        .iter()
        .copied()
        .filter(|g| shape_contains(group.kind, shape, g))
        .collect();
    let set: HashSet<u64> = list.iter().map(|m| m.encode()).collect();
    let full = list.len() * list.len() <= 20_000_000;
    let outer: Box<dyn Iterator<Item = &GMat>> = if full {
        Box::new(list.iter())
    } else {
        Box::new(list.iter().take(100))
    };
    for a in outer {
        for b in &list {
            let p = a.mul(&group.field, b);
            assert!(set.contains(&p.encode()), "shape is not closed under product");
        }
    }
    list
}

/// Structural generators of a shape subgroup: the Borel generators plus
/// the simple reflections the shape contains. Valid because every shape
/// here is a standard-parabolic reduction pattern containing the Borel.
pub fn shape_generators(group: &FiniteMatrixGroup, shape: Shape) -> Vec<GMat> {
    let mut gens = group.borel_gens.clone();
    for s in &group.reflections {
        if shape_contains(group.kind, shape, s) {
            gens.push(*s);
        }
    }
    if matches!(shape, Shape::K) {
        gens.extend(group.reflections.iter().copied());
    }
    gens
}

/// Exact count of double cosets H1 \ G / H2 by orbit sweeping with
/// canonical-element hashing; also returns the first-visited
/// representative of each orbit (deterministic).
pub fn double_cosets(
    group: &FiniteMatrixGroup,
    h1: Shape,
    h2: Shape,
) -> (usize, Vec<GMat>) {
    let g1 = shape_generators(group, h1);
    let g2 = shape_generators(group, h2);
    let mut visited: HashSet<u64> = HashSet::new();
    let mut reps = Vec::new();
    for g in &group.elements {
        if visited.contains(&g.encode()) {
            continue;
        }
        reps.push(*g);
        let mut stack = vec![*g];
        visited.insert(g.encode());
        while let Some(cur) = stack.pop() {
            for a in &g1 {
                let x = a.mul(&group.field, &cur);
                if visited.insert(x.encode()) {
                    stack.push(x);
                }
            }
            for b in &g2 {
                let x = cur.mul(&group.field, b);
                if visited.insert(x.encode()) {
                    stack.push(x);
                }
            }
        }
    }
    assert_eq!(visited.len(), group.elements.len());
    (reps.len(), reps)
}

pub fn double_coset_count(group: &FiniteMatrixGroup, h1: Shape, h2: Shape) -> usize {
    double_cosets(group, h1, h2).0
}

fn gmat_inverse(f: &SmallField, g: &GMat) -> GMat {
    // Gauss-Jordan on the augmented matrix over the small field
    let n = g.n as usize;
    let mut a = *g;
    let mut inv = GMat::identity(n);
    for c in 0..n {
        let piv = (c..n).find(|&i| a.get(i, c) != 0).expect("invertible");
        if piv != c {
            for j in 0..n {
                let t = a.get(c, j);
                a.set(c, j, a.get(piv, j));
                a.set(piv, j, t);
                let t = inv.get(c, j);
                inv.set(c, j, inv.get(piv, j));
                inv.set(piv, j, t);
            }
        }
        let d = f.inv(a.get(c, c));
        for j in 0..n {
            a.set(c, j, f.mul(a.get(c, j), d));
            inv.set(c, j, f.mul(inv.get(c, j), d));
        }
        for i in 0..n {
            if i != c && a.get(i, c) != 0 {
                let t = a.get(i, c);
                for j in 0..n {
                    let sub = f.mul(t, a.get(c, j));
                    a.set(i, j, f.add(a.get(i, j), f.neg(sub)));
                    let sub = f.mul(t, inv.get(c, j));
                    inv.set(i, j, f.add(inv.get(i, j), f.neg(sub)));
                }
            }
        }
    }
    inv
}

/// Levi representation data for induced fixed spaces: the trivial
/// character or the Steinberg module of the GL(2) Levi factor (functions
/// on the projective line modulo constants, dimension q).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeviRep {
    Trivial,
    SteinbergGl2,
}

/// dim Ind_P^G(tau)^J = sum over P\G/J double cosets of the dimension of
/// the tau-fixed vectors under the Levi image of P cap g J g^{-1}.
pub fn induced_fixed_dim(
    group: &FiniteMatrixGroup,
    p_shape: Shape,
    tau: LeviRep,
    j_shape: Shape,
) -> usize {
    assert_eq!(group.kind, GroupKind::Gl3, "finite Levi models implemented for GL3");
    assert_eq!(p_shape, Shape::J, "tau lives on the (2,1) Levi");
    let (_, reps) = double_cosets(group, p_shape, j_shape);
    let j_list = shape_elements(group, j_shape);
    let f = &group.field;
    let q = f.q;
    let mut total = 0usize;
    for g in &reps {
        let ginv = gmat_inverse(f, g);
        // S = P cap g J g^{-1}
        let mut levi_images: Vec<(u8, u8, u8, u8)> = Vec::new();
        for h in &j_list {
            let x = g.mul(f, h).mul(f, &ginv);
            if shape_contains(group.kind, p_shape, &x) {
                levi_images.push((x.get(0, 0), x.get(0, 1), x.get(1, 0), x.get(1, 1)));
            }
        }
        match tau {
            LeviRep::Trivial => total += 1,
            LeviRep::SteinbergGl2 => {
                // orbits of the projected subgroup on P^1(F_q), minus one
                let lines: Vec<(u8, u8)> = (0..q as u8)
                    .map(|c| (1u8, c))
                    .chain(std::iter::once((0u8, 1u8)))
                    .collect();
                let normalize = |u: u8, v: u8| -> (u8, u8) {
                    if u != 0 {
                        (1, f.mul(v, f.inv(u)))
                    } else {
                        (0, 1)
                    }
                };
                let mut orbit_of: HashMap<(u8, u8), usize> = HashMap::new();
                let mut orbits = 0usize;
                for &(u, v) in &lines {
                    if orbit_of.contains_key(&(u, v)) {
                        continue;
                    }
                    orbits += 1;
                    let mut stack = vec![(u, v)];
                    orbit_of.insert((u, v), orbits);
                    while let Some((a, b)) = stack.pop() {
                        for &(m00, m01, m10, m11) in &levi_images {
                            // column action: (a, b) -> (m00 a + m01 b, m10 a + m11 b)
                            let na = f.add(f.mul(m00, a), f.mul(m01, b));
                            let nb = f.add(f.mul(m10, a), f.mul(m11, b));
                            let key = normalize(na, nb);
                            if !orbit_of.contains_key(&key) {
                                orbit_of.insert(key, orbits);
                                stack.push(key);
                            }
                        }
                    }
                }
                total += orbits - 1;
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fields() {
        for q in [2u64, 3, 4, 5] {
            let f = SmallField::new(q);
            assert_eq!(f.q as u64, q);
            // field axioms spot checks
            for a in 1..f.q as u8 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
                assert_eq!(f.add(a, f.neg(a)), 0);
            }
        }
    }

    #[test]
    fn group_orders() {
        for q in [2u64, 3, 4] {
            let g = build_group(GroupKind::Gl3, q);
            assert_eq!(g.elements.len() as u64, group_order_formula(GroupKind::Gl3, q));
        }
        for q in [2u64, 3] {
            let g = build_group(GroupKind::Gsp4, q);
            assert_eq!(g.elements.len() as u64, group_order_formula(GroupKind::Gsp4, q));
        }
    }

    #[test]
    fn weyl_group_sizes() {
        for q in [2u64, 3] {
            let g = build_group(GroupKind::Gl3, q);
            assert_eq!(double_coset_count(&g, Shape::I, Shape::I), 6, "GL3 q={q}");
            let g = build_group(GroupKind::Gsp4, q);
            assert_eq!(double_coset_count(&g, Shape::I, Shape::I), 8, "GSp4 q={q}");
        }
    }

    #[test]
    fn gl3_row_one_counts() {
        for q in [2u64, 3] {
            let g = build_group(GroupKind::Gl3, q);
            assert_eq!(double_coset_count(&g, Shape::I, Shape::K), 1);
            assert_eq!(double_coset_count(&g, Shape::I, Shape::J), 3);
        }
    }

    #[test]
    fn gsp4_row_one_counts() {
        for q in [2u64, 3] {
            let g = build_group(GroupKind::Gsp4, q);
            assert_eq!(double_coset_count(&g, Shape::I, Shape::K), 1);
            assert_eq!(double_coset_count(&g, Shape::I, Shape::J), 4);
            assert_eq!(double_coset_count(&g, Shape::I, Shape::JPrime), 4);
        }
    }

    #[test]
    fn gl3_shape_indices() {
        for q in [2u64, 3, 4] {
            let g = build_group(GroupKind::Gl3, q);
            let j = shape_elements(&g, Shape::J);
            assert_eq!(
                g.elements.len() / j.len(),
                (1 + q + q * q) as usize,
                "[K:J] for q = {q}"
            );
        }
        for q in [2u64, 3] {
            let g = build_group(GroupKind::Gsp4, q);
            let j = shape_elements(&g, Shape::J);
            assert_eq!(
                g.elements.len() / j.len(),
                ((q.pow(4) - 1) / (q - 1)) as usize,
                "[K:J] for q = {q}"
            );
        }
    }

    #[test]
    fn induced_dims_gl3() {
        for q in [2u64, 3] {
            let g = build_group(GroupKind::Gl3, q);
            // trivial tau: dims (1, 2, 3) over (K, J, I)
            assert_eq!(induced_fixed_dim(&g, Shape::J, LeviRep::Trivial, Shape::K), 1);
            assert_eq!(induced_fixed_dim(&g, Shape::J, LeviRep::Trivial, Shape::J), 2);
            assert_eq!(induced_fixed_dim(&g, Shape::J, LeviRep::Trivial, Shape::I), 3);
            // Steinberg tau: dims (0, 1, 3)
            assert_eq!(induced_fixed_dim(&g, Shape::J, LeviRep::SteinbergGl2, Shape::K), 0);
            assert_eq!(induced_fixed_dim(&g, Shape::J, LeviRep::SteinbergGl2, Shape::J), 1);
            assert_eq!(induced_fixed_dim(&g, Shape::J, LeviRep::SteinbergGl2, Shape::I), 3);
        }
    }
}
