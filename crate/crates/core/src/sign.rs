use core::fmt;
use core::ops::{Mul, MulAssign, Neg};

/// An element of {+1, −1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(−1)^n`.
    pub fn parity(n: i64) -> Sign {
        if n.rem_euclid(2) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        *self = *self * rhs;
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl core::iter::Product for Sign {
    fn product<I: Iterator<Item = Sign>>(iter: I) -> Sign {
        iter.fold(Sign::Plus, Mul::mul)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn arithmetic() {
        assert_eq!(Sign::parity(-1), Sign::Minus);
        assert_eq!(Sign::parity(-4), Sign::Plus);
        assert_eq!(Sign::Minus * Sign::Minus, Sign::Plus);
        assert_eq!(-Sign::Plus, Sign::Minus);
        assert_eq!(
            [Sign::Minus, Sign::Minus, Sign::Minus]
                .into_iter()
                .product::<Sign>(),
            Sign::Minus
        );
        assert_eq!(Sign::from_i64(0), None);
        assert_eq!(Sign::Minus.to_string(), "-1");
    }
}
