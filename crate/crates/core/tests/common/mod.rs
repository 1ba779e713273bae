//! Test-only series oracles, independent of the Miller/Lagrange path.
#![allow(dead_code)]

use dashu::rational::RBig;

/// Truncated Cauchy product.
pub fn mul(a: &[RBig], b: &[RBig], order: usize) -> Vec<RBig> {
    let mut out = vec![RBig::ZERO; order + 1];
    for (i, ai) in a.iter().enumerate().take(order + 1) {
        if *ai == RBig::ZERO {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] = out[i + j].clone() + ai.clone() * bj.clone();
        }
    }
    out
}

pub fn pow(a: &[RBig], m: u32, order: usize) -> Vec<RBig> {
    let mut out = vec![RBig::ZERO; order + 1];
    out[0] = RBig::ONE;
    for _ in 0..m {
        out = mul(&out, a, order);
    }
    out
}

/// `outer(inner(y))` truncated at `order`; `inner` must have no constant term.
pub fn compose(outer: &[RBig], inner: &[RBig], order: usize) -> Vec<RBig> {
    assert!(inner.first().map_or(true, |c| *c == RBig::ZERO));
    let mut out = vec![RBig::ZERO; order + 1];
    for c in outer.iter().rev() {
        out = mul(&out, inner, order);
        out[0] = out[0].clone() + c.clone();
    }
    out
}

/// Inverse of `y - a0 = sum_{n>=1} a_n x^n` by fixed-point substitution
/// `x <- (y - sum_{n>=2} a_n x^n) / a1`; each pass fixes one more order.
pub fn substitution_inverse(a: &[RBig], order: usize) -> Vec<RBig> {
    let a1 = a[1].clone();
    let mut higher = a.to_vec();
    higher[0] = RBig::ZERO;
    higher[1] = RBig::ZERO;
    let mut x = vec![RBig::ZERO; order + 1];
    for _ in 0..order {
        let tail = compose(&higher, &x, order);
        let mut next: Vec<RBig> = tail.into_iter().map(|c| -c / a1.clone()).collect();
        next[1] = next[1].clone() + RBig::ONE / a1.clone();
        x = next;
    }
    x
}

pub fn rat(n: i64, d: u64) -> RBig {
    RBig::from_parts(n.into(), d.into())
}

/// The 31-digit constants (as quoted, rounded in the last place).
pub const GAMMA: &str = "-1.3187998049666623818339568382086";
pub const C: &str = "1.6161254468046037170271174250288";
pub const KAPPA: &str = "-0.4437483133688610511198328438501";

/// Significant digits in a decimal literal.
pub fn significant_digits(s: &str) -> usize {
    s.chars()
        .filter(char::is_ascii_digit)
        .collect::<String>()
        .trim_start_matches('0')
        .len()
}
