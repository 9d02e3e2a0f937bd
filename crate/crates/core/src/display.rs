//! Canonical text rendering of linear combinations.

use crate::lincomb::LinComb;

/// Render `Σ c·k` in key order. `key` returns the empty string for the unit.
/// Single-term coefficients contribute their sign to the joining operator;
/// multi-term coefficients are parenthesised.
pub fn render_lincomb<K: Ord + Clone>(x: &LinComb<K>, key: impl Fn(&K) -> String) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let sole = x.len() == 1;
    let mut out = String::new();
    for (i, (k, c)) in x.iter().enumerate() {
        let body = key(k);
        let (neg, coef) = if c.is_compound() {
            let text = if body.is_empty() && sole {
                c.to_string()
            } else {
                format!("({c})")
            };
            (false, text)
        } else {
            let neg = c.is_negative_leading();
            let mag = if neg { -c } else { c.clone() };
            (neg, mag.to_string())
        };
        let term = if body.is_empty() {
            coef
        } else if coef == "1" {
            body
        } else {
            format!("{coef} {body}")
        };
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&term);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{CycScalar, Rational};

    #[test]
    fn signs_and_parentheses() {
        let p = 3;
        let x: LinComb<u8> = [
            (0, CycScalar::from_int(p, 2)),
            (1, CycScalar::from_int(p, -1)),
            (2, CycScalar::from_coeffs(p, vec![Rational::from_integer(1.into()), Rational::from_integer(1.into())])),
        ]
        .into_iter()
        .map(|(k, c): (u8, CycScalar)| (k, c))
        .collect();
        let r = render_lincomb(&x, |k| if *k == 0 { String::new() } else { format!("x{k}") });
        assert_eq!(r, "2 - x1 + (1 + q) x2");
    }

    #[test]
    fn zero_and_compound_scalar() {
        let x: LinComb<u8> = LinComb::zero();
        assert_eq!(render_lincomb(&x, |_| String::new()), "0");
        let y = LinComb::single(0u8, CycScalar::from_coeffs(3, vec![Rational::from_integer(1.into()), Rational::from_integer((-2).into())]));
        assert_eq!(render_lincomb(&y, |_| String::new()), "1 - 2q");
    }
}
