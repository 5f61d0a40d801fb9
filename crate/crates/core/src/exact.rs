//! Exact sign of small expressions with square roots, and rational scales.
//!
//! Droplet and corner membership compare integer dot products against
//! `a·‖v‖` and `(a − r)·‖v‖`, where `‖v‖` and `r` are square roots of
//! integers and `a` is rational. Those comparisons reduce to the sign of
//! `α + β√s + γ√w` with integer coefficients, decided here by repeated
//! squaring. An `i128` path handles the common case; anything that would
//! overflow is redone with big integers.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

/// Rational droplet scale.
pub type Scale = Ratio<i64>;

/// Sign of `a + b·√s + c·√w` for integers `a, b, c` and `s, w ≥ 0`.
pub fn sign_sum_sqrt(a: i128, b: i128, s: u64, c: i128, w: u64) -> Ordering {
    match sign3_i128(a, b, s as i128, c, w as i128) {
        Some(o) => o,
        None => sign3_big(
            BigInt::from(a),
            BigInt::from(b),
            BigInt::from(s),
            BigInt::from(c),
            BigInt::from(w),
        ),
    }
}

fn sgn(x: i128) -> Ordering {
    x.cmp(&0)
}

// sign(c + d√k)
fn sign2_i128(c: i128, d: i128, k: i128) -> Option<Ordering> {
    let sd = if k == 0 { Ordering::Equal } else { sgn(d) };
    let sc = sgn(c);
    if sd == Ordering::Equal {
        return Some(sc);
    }
    if sc == Ordering::Equal || sc == sd {
        return Some(sd);
    }
    // opposite signs: compare c² with d²k
    let c2 = c.checked_mul(c)?;
    let d2k = d.checked_mul(d)?.checked_mul(k)?;
    Some(match c2.cmp(&d2k) {
        Ordering::Greater => sc,
        Ordering::Less => sd,
        Ordering::Equal => Ordering::Equal,
    })
}

fn sign3_i128(a: i128, b: i128, s: i128, c: i128, w: i128) -> Option<Ordering> {
    // sign of the radical part u + v with u = b√s, v = c√w
    let su = if s == 0 { Ordering::Equal } else { sgn(b) };
    let sv = if w == 0 { Ordering::Equal } else { sgn(c) };
    let srad = if su == Ordering::Equal {
        sv
    } else if sv == Ordering::Equal || su == sv {
        su
    } else {
        let u2 = b.checked_mul(b)?.checked_mul(s)?;
        let v2 = c.checked_mul(c)?.checked_mul(w)?;
        match u2.cmp(&v2) {
            Ordering::Greater => su,
            Ordering::Less => sv,
            Ordering::Equal => Ordering::Equal,
        }
    };
    let sa = sgn(a);
    if srad == Ordering::Equal {
        return Some(sa);
    }
    if sa == Ordering::Equal || sa == srad {
        return Some(srad);
    }
    // a² − (u + v)² = a² − b²s − c²w − 2bc√(sw)
    let a2 = a.checked_mul(a)?;
    let b2s = b.checked_mul(b)?.checked_mul(s)?;
    let c2w = c.checked_mul(c)?.checked_mul(w)?;
    let rest = a2.checked_sub(b2s)?.checked_sub(c2w)?;
    let cross = b.checked_mul(c)?.checked_mul(-2)?;
    let sw = s.checked_mul(w)?;
    let diff = sign2_i128(rest, cross, sw)?;
    Some(match diff {
        Ordering::Greater => sa,
        Ordering::Less => srad,
        Ordering::Equal => Ordering::Equal,
    })
}

fn bsgn(x: &BigInt) -> Ordering {
    if x.is_zero() {
        Ordering::Equal
    } else if x.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

fn sign2_big(c: BigInt, d: BigInt, k: BigInt) -> Ordering {
    let sd = if k.is_zero() { Ordering::Equal } else { bsgn(&d) };
    let sc = bsgn(&c);
    if sd == Ordering::Equal {
        return sc;
    }
    if sc == Ordering::Equal || sc == sd {
        return sd;
    }
    match (&c * &c).cmp(&(&d * &d * &k)) {
        Ordering::Greater => sc,
        Ordering::Less => sd,
        Ordering::Equal => Ordering::Equal,
    }
}

fn sign3_big(a: BigInt, b: BigInt, s: BigInt, c: BigInt, w: BigInt) -> Ordering {
    let su = if s.is_zero() { Ordering::Equal } else { bsgn(&b) };
    let sv = if w.is_zero() { Ordering::Equal } else { bsgn(&c) };
    let srad = if su == Ordering::Equal {
        sv
    } else if sv == Ordering::Equal || su == sv {
        su
    } else {
        match (&b * &b * &s).cmp(&(&c * &c * &w)) {
            Ordering::Greater => su,
            Ordering::Less => sv,
            Ordering::Equal => Ordering::Equal,
        }
    };
    let sa = bsgn(&a);
    if srad == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == srad {
        return srad;
    }
    let rest = &a * &a - &b * &b * &s - &c * &c * &w;
    let cross = &b * &c * BigInt::from(-2);
    match sign2_big(rest, cross, &s * &w) {
        Ordering::Greater => sa,
        Ordering::Less => srad,
        Ordering::Equal => Ordering::Equal,
    }
}

/// Smallest rational with denominator `denom` that is at least `value`.
pub fn rational_ceil(value: f64, denom: i64) -> Scale {
    let num = (value * denom as f64).ceil() as i64;
    Scale::new(num, denom)
}

/// Smallest integer `n` with `n ≥ √k`.
pub fn isqrt_ceil(k: i64) -> i64 {
    let mut r = (k as f64).sqrt().floor() as i64;
    while r * r < k {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= k {
        r -= 1;
    }
    r
}

pub fn scale_to_f64(a: Scale) -> f64 {
    *a.numer() as f64 / *a.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn float_sign(a: i128, b: i128, s: u64, c: i128, w: u64) -> f64 {
        a as f64 + b as f64 * (s as f64).sqrt() + c as f64 * (w as f64).sqrt()
    }

    #[test]
    fn exact_ties() {
        // 2 − √4 = 0
        assert_eq!(sign_sum_sqrt(2, -1, 4, 0, 0), Ordering::Equal);
        // √2 + √8 − √18 = 0
        assert_eq!(sign_sum_sqrt(0, 1, 2, 1, 8), Ordering::Greater);
        assert_eq!(sign_sum_sqrt(0, 3, 2, -1, 18), Ordering::Equal);
        assert_eq!(sign_sum_sqrt(-3, 1, 2, 1, 2), Ordering::Less);
        assert_eq!(sign_sum_sqrt(-4, 1, 8, 0, 0), Ordering::Less);
    }

    #[test]
    fn big_integer_fallback() {
        let big = 1i128 << 80;
        assert_eq!(sign_sum_sqrt(big, -(1 << 60), 1 << 40, 0, 0), Ordering::Equal);
        assert_eq!(sign_sum_sqrt(big + 1, -(1 << 60), 1 << 40, 0, 0), Ordering::Greater);
        assert_eq!(sign_sum_sqrt(big, -(1 << 60), 1 << 40, -1, 3), Ordering::Less);
    }

    proptest! {
        #[test]
        fn agrees_with_floats_away_from_zero(
            a in -1000i128..1000, b in -50i128..50, s in 0u64..40, c in -50i128..50, w in 0u64..40
        ) {
            let v = float_sign(a, b, s, c, w);
            prop_assume!(v.abs() > 1e-6);
            let expected = if v > 0.0 { Ordering::Greater } else { Ordering::Less };
            prop_assert_eq!(sign_sum_sqrt(a, b, s, c, w), expected);
        }
    }

    #[test]
    fn ceilings() {
        assert_eq!(isqrt_ceil(2), 2);
        assert_eq!(isqrt_ceil(4), 2);
        assert_eq!(isqrt_ceil(5), 3);
        assert_eq!(isqrt_ceil(0), 0);
        assert_eq!(rational_ceil(2.5, 4), Scale::new(5, 2));
    }
}
