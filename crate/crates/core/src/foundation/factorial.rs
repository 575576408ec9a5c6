use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};

pub fn factorial(n: u32) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `a! / b!` as an exact rational.
pub fn factorial_ratio(a: i64, b: i64) -> Result<BigRational> {
    if a < 0 || b < 0 {
        return Err(Error::Domain(format!("factorial of a negative integer in {a}!/{b}!")));
    }
    Ok(factorial_ratio_u(a as u32, b as u32))
}

pub fn factorial_ratio_u(a: u32, b: u32) -> BigRational {
    // only the non-cancelling range of factors is multiplied out
    let (lo, hi) = if a >= b { (b, a) } else { (a, b) };
    let partial: BigUint = (lo + 1..=hi).fold(BigUint::one(), |acc, k| acc * k);
    let partial = BigInt::from(partial);
    if a >= b {
        BigRational::from_integer(partial)
    } else {
        BigRational::new(BigInt::one(), partial)
    }
}
