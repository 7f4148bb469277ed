//! Full-rank lattices in a quaternion algebra, with products, conjugates,
//! reduced norms, and canonical Hermite-form bases. Used for left ideals
//! of a maximal order and their right orders.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::matrix::{hnf_rows, Int, IntMatrix, Rat, RatMatrix};

use super::{gram_of_basis, Quat, QuaternionAlgebra};

/// Rank-4 lattice given by a canonical basis: rows of `basis` are the
/// coordinates of the basis vectors in (1, i, j, k). The numerator is in
/// row Hermite normal form, so equal lattices have equal representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuatLattice {
    pub basis: RatMatrix,
}

impl QuatLattice {
    /// Canonicalize a spanning set (rows may be redundant): HNF of the
    /// scaled integer matrix, divided back by the common denominator.
    pub fn from_spanning(rows: Vec<Vec<Rat>>) -> QuatLattice {
        let m = RatMatrix::from_rat_rows(rows);
        let h = hnf_rows(&m.num);
        assert_eq!(h.rows, 4, "lattice must have full rank 4");
        QuatLattice { basis: RatMatrix::new(h, m.den) }
    }

    pub fn from_quats(qs: Vec<Quat>) -> QuatLattice {
        QuatLattice::from_spanning(qs.into_iter().map(|q| q.coords()).collect())
    }

    pub fn basis_quats(&self) -> Vec<Quat> {
        (0..4).map(|i| Quat::from_rats(&self.basis.row_rat(i))).collect()
    }

    pub fn contains(&self, x: &Quat) -> bool {
        let bt = self.basis.transpose();
        match bt.solve(&x.coords()) {
            None => false,
            Some(c) => c.iter().all(|e| e.is_integer()),
        }
    }

    /// Scale the lattice by a nonzero rational.
    pub fn scale(&self, c: &Rat) -> QuatLattice {
        assert!(!c.is_zero());
        QuatLattice::from_spanning(
            (0..4)
                .map(|i| self.basis.row_rat(i).iter().map(|e| e * c).collect())
                .collect(),
        )
    }

    /// Canonical representative of the homothety ray: scale so the basis
    /// matrix is integral and primitive (content 1).
    pub fn primitive_scaling(&self) -> QuatLattice {
        let content = Rat::new(self.basis.num.content(), self.basis.den.clone());
        self.scale(&content.recip())
    }

    /// Product lattice: the span of all pairwise products xy.
    pub fn mul(&self, other: &QuatLattice, alg: &QuaternionAlgebra) -> QuatLattice {
        let a = self.basis_quats();
        let b = other.basis_quats();
        let mut rows = Vec::with_capacity(16);
        for x in &a {
            for y in &b {
                rows.push(x.mul(y, alg).coords());
            }
        }
        QuatLattice::from_spanning(rows)
    }

    pub fn conj(&self) -> QuatLattice {
        QuatLattice::from_spanning(
            (0..4)
                .map(|i| Quat::from_rats(&self.basis.row_rat(i)).conj().coords())
                .collect(),
        )
    }

    /// Intersection of two full-rank lattices.
    pub fn intersect(&self, other: &QuatLattice) -> QuatLattice {
        let l = self.basis.den.lcm(&other.basis.den);
        let a = self.basis.num.scale(&(&l / &self.basis.den));
        let b = other.basis.num.scale(&(&l / &other.basis.den));
        let m = crate::arith::matrix::lattice_intersect(&a, &b);
        assert_eq!(m.rows, 4);
        QuatLattice { basis: RatMatrix::new(m, l) }
    }

    /// Gram matrix Trd(b_i conj(b_j)) of the basis; positive definite for
    /// a definite algebra. Note Trd(x conj(x)) = 2 Nrd(x).
    pub fn gram(&self, alg: &QuaternionAlgebra) -> RatMatrix {
        gram_of_basis(alg, &self.basis)
    }

    /// The reduced norm of the lattice: the positive generator of the
    /// fractional ideal generated by Nrd(x), x in the lattice. Computed
    /// from the values Nrd(b_i) and Nrd(b_i + b_j).
    pub fn nrd(&self, alg: &QuaternionAlgebra) -> Rat {
        let b = self.basis_quats();
        let mut vals: Vec<Rat> = Vec::new();
        for i in 0..4 {
            vals.push(b[i].nrd(alg));
            for j in i + 1..4 {
                vals.push(b[i].add(&b[j]).nrd(alg));
            }
        }
        let mut den = Int::one();
        for v in &vals {
            den = den.lcm(v.denom());
        }
        let mut g = Int::zero();
        for v in &vals {
            g = g.gcd(&(v.numer() * (&den / v.denom())));
        }
        assert!(!g.is_zero());
        Rat::new(g, den)
    }

    /// Index [self : sub] for a full-rank sublattice, as a positive
    /// integer (the absolute determinant ratio).
    pub fn index_of(&self, sub: &QuatLattice) -> Int {
        let bt = self.basis.transpose();
        let binv = bt.inverse().expect("full rank");
        let c = binv.mul(&sub.basis.transpose());
        let d = c.det();
        let idx = d.numer().abs() / d.denom().abs();
        assert!(
            (Rat::from(idx.clone()) - d.clone()).is_zero() || (Rat::from(idx.clone()) + d).is_zero(),
            "index must be integral"
        );
        idx
    }

    /// All lattice vectors of reduced norm exactly `target`.
    pub fn elements_of_norm(&self, alg: &QuaternionAlgebra, target: &Rat) -> Vec<Quat> {
        self.elements_of_norm_limited(alg, target, usize::MAX)
    }

    /// Lattice vectors of reduced norm `target`, at most `limit` of them.
    pub fn elements_of_norm_limited(
        &self,
        alg: &QuaternionAlgebra,
        target: &Rat,
        limit: usize,
    ) -> Vec<Quat> {
        let gram = self.gram(alg);
        let two_target = target + target;
        let coords = super::vectors_of_value_limited(&gram, &two_target, limit);
        let b = self.basis_quats();
        coords
            .into_iter()
            .map(|c| {
                let mut acc = Quat::zero();
                for (i, ci) in c.iter().enumerate() {
                    acc = acc.add(&b[i].scale(&Rat::from(ci.clone())));
                }
                acc
            })
            .collect()
    }

    /// Count of lattice vectors of reduced norm exactly `target`.
    pub fn count_of_norm(&self, alg: &QuaternionAlgebra, target: &Rat) -> usize {
        let gram = self.gram(alg);
        let two_target = target + target;
        super::count_of_value(&gram, &two_target)
    }

    /// Right order {x : L x subset L}.
    pub fn right_order(&self, alg: &QuaternionAlgebra) -> QuatLattice {
        // x (column coords xi) satisfies b_i * x in L for all i;
        // coords(b_i * x) = M_i xi with columns M_i[:, r] = coords(b_i e_r)
        let b = self.basis_quats();
        let units = [
            Quat::from_rats(&[Rat::one(), Rat::zero(), Rat::zero(), Rat::zero()]),
            Quat::from_rats(&[Rat::zero(), Rat::one(), Rat::zero(), Rat::zero()]),
            Quat::from_rats(&[Rat::zero(), Rat::zero(), Rat::one(), Rat::zero()]),
            Quat::from_rats(&[Rat::zero(), Rat::zero(), Rat::zero(), Rat::one()]),
        ];
        // condition: exists integer y with xi = (M_i^{-1} B^T) y for the
        // lattice basis B; i.e. x in row-lattice of B (M_i^T)^{-1}
        let mut current: Option<(IntMatrix, Int)> = None; // (rows, denominator)
        for bi in &b {
            let mut m_cols = Vec::new();
            for e in &units {
                m_cols.push(bi.mul(e, alg).coords());
            }
            // m has columns coords(b_i e_r): build as transpose of rows
            let m = RatMatrix::from_rat_rows(m_cols).transpose();
            let minv_t = m.inverse().expect("nonzero basis element").transpose();
            let rows = self.basis.mul(&minv_t);
            // row lattice with denominator
            let (num, den) = (rows.num.clone(), rows.den.clone());
            current = Some(match current {
                None => (hnf_rows(&num), den),
                Some((cn, cd)) => {
                    // intersect (1/cd) cn with (1/den) num:
                    // common denominator l = lcm(cd, den)
                    let l = cd.lcm(&den);
                    let a = cn.scale(&(&l / &cd));
                    let bm = num.scale(&(&l / &den));
                    (crate::arith::matrix::lattice_intersect(&a, &bm), l)
                }
            });
        }
        let (num, den) = current.unwrap();
        assert_eq!(num.rows, 4, "right order must have rank 4");
        QuatLattice { basis: RatMatrix::new(num, den) }
    }

    /// Unit group of an order: elements of reduced norm 1. The count is
    /// even (it contains -1).
    pub fn units(&self, alg: &QuaternionAlgebra) -> Vec<Quat> {
        let u = self.elements_of_norm(alg, &Rat::one());
        assert!(u.len() % 2 == 0 && !u.is_empty());
        u
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::matrix::rat;
    use crate::quat::{build_algebra, maximal_order};

    fn order_lattice(p: u64) -> (QuaternionAlgebra, QuatLattice) {
        let alg = build_algebra(p).unwrap();
        let o = maximal_order(&alg).unwrap();
        let rows = (0..4).map(|i| o.basis.row_rat(i)).collect();
        (alg, QuatLattice::from_spanning(rows))
    }

    #[test]
    fn order_is_its_own_right_order() {
        for p in [2u64, 11, 13, 17] {
            let (alg, l) = order_lattice(p);
            let r = l.right_order(&alg);
            assert_eq!(r, l, "p = {p}");
        }
    }

    #[test]
    fn order_norm_is_one() {
        let (alg, l) = order_lattice(11);
        assert_eq!(l.nrd(&alg), rat(1, 1));
        assert!(l.contains(&Quat::one()));
    }

    #[test]
    fn unit_counts() {
        let (alg, l) = order_lattice(2);
        assert_eq!(l.units(&alg).len(), 24);
        let (alg, l) = order_lattice(11);
        assert_eq!(l.units(&alg).len(), 4);
        // for p = 13 the only units are +-1 (mass (13-1)/24 = 1/2)
        let (alg, l) = order_lattice(13);
        assert_eq!(l.units(&alg).len(), 2);
        let (alg, l) = order_lattice(3);
        assert_eq!(l.units(&alg).len(), 12);
    }

    #[test]
    fn conjugate_product_is_norm_times_order() {
        // L * conj(L) = Nrd(L) * O_l(L) for a maximal order lattice
        let (alg, l) = order_lattice(11);
        let prod = l.mul(&l.conj(), &alg);
        assert_eq!(prod, l);
    }
}
