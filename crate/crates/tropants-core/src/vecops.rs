//! Small helpers on integer and rational vectors.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::rat::{rat, Rat};
use crate::{IVec, QVec};

pub fn dot_i(a: &[i64], b: &[i64]) -> i64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_q(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_qi(a: &[Rat], b: &[i64]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Rat::zero(), |acc, (x, y)| acc + x * rat(*y))
}

pub fn add_i(a: &[i64], b: &[i64]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_i(a: &[i64], b: &[i64]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg_i(a: &[i64]) -> IVec {
    a.iter().map(|x| -x).collect()
}

pub fn scale_i(c: i64, a: &[i64]) -> IVec {
    a.iter().map(|x| c * x).collect()
}

pub fn add_q(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_q(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_q(c: &Rat, a: &[Rat]) -> QVec {
    a.iter().map(|x| c * x).collect()
}

pub fn to_q(a: &[i64]) -> QVec {
    a.iter().map(|x| rat(*x)).collect()
}

/// Symmetric-matrix application `g * v` over the integers.
pub fn mat_apply_i(g: &[IVec], v: &[i64]) -> IVec {
    g.iter().map(|row| dot_i(row, v)).collect()
}

/// `g * v` with a rational vector.
pub fn mat_apply_qi(g: &[IVec], v: &[Rat]) -> QVec {
    g.iter().map(|row| dot_qi(v, row)).collect()
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Divides out the gcd of the entries; the zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> IVec {
    let g = v.iter().fold(0i64, |acc, x| gcd(acc, *x));
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

/// Primitive integer vector proportional to a rational direction.
pub fn primitive_of_q(v: &[Rat]) -> IVec {
    let mut lcm = BigInt::from(1);
    for x in v {
        let d = x.denom();
        let g = num_bigint::BigInt::from(gcd_big(&lcm, d));
        lcm = &lcm / &g * d;
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = BigInt::from(gcd_big(&g, x));
    }
    if g.is_zero() {
        return vec![0; v.len()];
    }
    ints.iter()
        .map(|x| {
            let q = x / &g;
            i64::try_from(&q).expect("primitive direction exceeds i64")
        })
        .collect()
}

fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    use num_bigint::Sign;
    let mut a = a.clone();
    let mut b = b.clone();
    if a.sign() == Sign::Minus {
        a = -a;
    }
    if b.sign() == Sign::Minus {
        b = -b;
    }
    while !b.is_zero() {
        let t = &a % &b;
        a = b;
        b = t;
    }
    a
}
