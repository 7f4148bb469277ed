//! l-adic valuations on Q. The coefficient ring used throughout the crate
//! is Z localized at a rational prime l, so this is the ordinary valuation.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::matrix::Rat;

/// Value of v_l: a nonnegative integer on nonzero integers, possibly
/// negative on rationals, and +infinity on 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

/// v_l of a nonzero integer; `Infinite` for 0.
pub fn val_int(ell: u64, x: &BigInt) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let ell = BigInt::from(ell);
    let mut x = x.abs();
    let mut v = 0i64;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&x, &ell);
        if !r.is_zero() {
            break;
        }
        x = q;
        v += 1;
    }
    Valuation::Finite(v)
}

/// v_l of a rational number.
pub fn val_rat(ell: u64, x: &Rat) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let vn = val_int(ell, x.numer()).finite().unwrap();
    let vd = val_int(ell, x.denom()).finite().unwrap();
    Valuation::Finite(vn - vd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn valuation_basics() {
        assert_eq!(val_int(3, &BigInt::from(18)), Valuation::Finite(2));
        assert_eq!(val_int(3, &BigInt::from(-5)), Valuation::Finite(0));
        assert_eq!(val_int(3, &BigInt::from(0)), Valuation::Infinite);
        let x = Rat::new(BigInt::from(4), BigInt::from(9));
        assert_eq!(val_rat(3, &x), Valuation::Finite(-2));
        assert_eq!(val_rat(2, &x), Valuation::Finite(2));
    }
}
