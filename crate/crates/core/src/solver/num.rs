//! Exact rationals that stay on machine words while they fit and fall back
//! to big integers otherwise.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub(crate) enum Q {
    /// Numerator and positive denominator, in lowest terms.
    Small(i64, i64),
    Big(BigRational),
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Q {
    pub fn zero() -> Self {
        Q::Small(0, 1)
    }

    pub fn one() -> Self {
        Q::Small(1, 1)
    }

    pub fn int(n: i64) -> Self {
        Q::Small(n, 1)
    }

    /// `n / d` with `d != 0`; both fit in 127 bits.
    fn ratio(n: i128, d: i128) -> Self {
        let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
        if n == 0 {
            return Q::zero();
        }
        let g = gcd(n.unsigned_abs(), d as u128) as i128;
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Q::Small(n, d),
            _ => Q::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn demote(b: BigRational) -> Self {
        match (b.numer().to_i64(), b.denom().to_i64()) {
            (Some(n), Some(d)) => Q::Small(n, d),
            _ => Q::Big(b),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Q::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Q::Big(b) => b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Q::Small(n, _) => *n == 0,
            Q::Big(b) => b.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Q::Small(1, 1))
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Q::Small(n, _) => *n > 0,
            Q::Big(b) => b.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Q::Small(n, _) => *n < 0,
            Q::Big(b) => b.is_negative(),
        }
    }

    pub fn add(&self, o: &Q) -> Q {
        match (self, o) {
            (Q::Small(a, b), Q::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Q::ratio(a * d + c * b, b * d)
            }
            _ => Q::demote(self.to_big() + o.to_big()),
        }
    }

    pub fn sub(&self, o: &Q) -> Q {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Q {
        match self {
            Q::Small(n, d) if *n != i64::MIN => Q::Small(-n, *d),
            _ => Q::demote(-self.to_big()),
        }
    }

    pub fn mul(&self, o: &Q) -> Q {
        match (self, o) {
            (Q::Small(a, b), Q::Small(c, d)) => Q::ratio(*a as i128 * *c as i128, *b as i128 * *d as i128),
            _ => Q::demote(self.to_big() * o.to_big()),
        }
    }

    /// Panics on division by zero.
    pub fn div(&self, o: &Q) -> Q {
        assert!(!o.is_zero(), "division by zero");
        match (self, o) {
            (Q::Small(a, b), Q::Small(c, d)) => Q::ratio(*a as i128 * *d as i128, *b as i128 * *c as i128),
            _ => Q::demote(self.to_big() / o.to_big()),
        }
    }

    pub fn recip(&self) -> Q {
        Q::one().div(self)
    }

    pub fn cmp(&self, o: &Q) -> Ordering {
        match (self, o) {
            (Q::Small(a, b), Q::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&o.to_big()),
        }
    }
}

impl PartialEq for Q {
    fn eq(&self, o: &Q) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn agrees_with_big_rationals() {
        let vals = [(0, 1), (1, 1), (-3, 4), (7, 5), (i64::MAX, 3), (i64::MIN + 1, 7), (5, i64::MAX)];
        for &(a, b) in &vals {
            for &(c, d) in &vals {
                let (x, y) = (Q::demote(r(a, b)), Q::demote(r(c, d)));
                let (bx, by) = (r(a, b), r(c, d));
                assert_eq!(x.add(&y).to_big(), &bx + &by);
                assert_eq!(x.sub(&y).to_big(), &bx - &by);
                assert_eq!(x.mul(&y).to_big(), &bx * &by);
                if !by.is_zero() {
                    assert_eq!(x.div(&y).to_big(), &bx / &by);
                }
                assert_eq!(x.cmp(&y), bx.cmp(&by));
            }
        }
    }

    #[test]
    fn overflow_moves_to_big_and_back() {
        let big = Q::int(i64::MAX).mul(&Q::int(4));
        assert!(matches!(big, Q::Big(_)));
        let back = big.div(&Q::int(4));
        assert!(matches!(back, Q::Small(n, 1) if n == i64::MAX));
    }
}
