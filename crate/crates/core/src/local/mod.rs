//! Finite brute-force verification of the local computations: parahoric
//! indices, double-coset counts, parahoric fixed-space dimension tables
//! for GL(3) and GSp(4), the rank-one Iwahori-Hecke algebra, and the
//! Satake congruence case analyses.

pub mod group;
pub mod satake;
pub mod tables;

/// The two group kinds with finite matrix models, plus the inert unitary
/// rank-one case (closed forms only).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Gl3,
    Gsp4,
    U3Inert,
}

/// Labeled parahoric indices for a kind at residual cardinality q:
/// ([K : J], [K' : J], [K' : J]_K), where J is the relevant parahoric
/// (the Iwahori subgroup in the rank-one case).
pub fn parahoric_indices(kind: GroupKind, q: u64) -> (u64, u64, u64) {
    match kind {
        GroupKind::U3Inert => {
            let k = q * q * q + 1;
            let kp = q + 1;
            // q + 1 divides q^3 + 1, so the reduced index is 1
            assert_eq!(k % kp, 0);
            (k, kp, kp / gcd(kp, k))
        }
        GroupKind::Gl3 => {
            let k = 1 + q + q * q;
            (k, k, k / gcd(k, k))
        }
        GroupKind::Gsp4 => {
            let k = (q * q * q * q - 1) / (q - 1);
            let kp = q;
            (k, kp, kp / gcd(kp, k))
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_examples() {
        // GSp4 at q = 2: [K:J] = 15, [K':J] = 2, [K':J]_K = 2
        assert_eq!(parahoric_indices(GroupKind::Gsp4, 2), (15, 2, 2));
        // GL3 at q = 3: [K:J] = 13
        assert_eq!(parahoric_indices(GroupKind::Gl3, 3), (13, 13, 1));
        // inert rank one at q = 2: (9, 3, 1)
        assert_eq!(parahoric_indices(GroupKind::U3Inert, 2), (9, 3, 1));
    }

    #[test]
    fn closed_forms_across_q() {
        for q in [2u64, 3, 4, 5] {
            let (k, kp, kpk) = parahoric_indices(GroupKind::U3Inert, q);
            assert_eq!(k, q.pow(3) + 1);
            assert_eq!(kp, q + 1);
            assert_eq!(kpk, 1);
            let (k, _, kpk) = parahoric_indices(GroupKind::Gl3, q);
            assert_eq!(k, 1 + q + q * q);
            assert_eq!(kpk, 1);
            let (k, kp, kpk) = parahoric_indices(GroupKind::Gsp4, q);
            assert_eq!(k, 1 + q + q * q + q * q * q);
            assert_eq!(kp, q);
            assert_eq!(kpk, q, "q and 1+q+q^2+q^3 are coprime");
        }
    }
}
