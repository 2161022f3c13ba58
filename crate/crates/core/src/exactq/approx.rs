use crate::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Best rational approximation of `x` with denominator at most `max_den`.
///
/// The float is first converted to the rational it represents exactly, then
/// the continued-fraction expansion is walked until the next convergent's
/// denominator would exceed `max_den`. The answer is the closer of the last
/// convergent and the largest admissible semiconvergent (the convergent wins ties).
pub fn rational_approx(x: f64, max_den: u64) -> Rational {
    assert!(x.is_finite(), "rational_approx needs a finite input");
    assert!(max_den >= 1, "max_den must be positive");
    let exact = Rational::from_float(x).expect("finite float");
    limit_denominator(&exact, &BigInt::from(max_den))
}

pub(crate) fn limit_denominator(x: &Rational, max_den: &BigInt) -> Rational {
    if x.denom() <= max_den {
        return x.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::from(1), BigInt::from(1), BigInt::zero());
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    loop {
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if &q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let r = &n - &a * &d;
        n = std::mem::replace(&mut d, r);
    }
    let k = (max_den - &q0).div_floor(&q1);
    let semi = Rational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let conv = Rational::new(p1, q1);
    if (&conv - x).abs() <= (&semi - x).abs() {
        conv
    } else {
        semi
    }
}
