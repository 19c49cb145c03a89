//! Gauss–Legendre quadrature rules on [-1, 1], orders 1 through 5.

use crate::error::Error;

/// Largest supported node count.
pub const MAX_POINTS: usize = 5;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1],
/// `1 <= n <= 5`. The rule integrates polynomials of degree `2n-1` exactly.
pub fn gauss_rule(n: usize) -> Result<Vec<(f64, f64)>, Error> {
    let rule = match n {
        1 => vec![(0.0, 2.0)],
        2 => {
            let x = 1.0 / 3.0f64.sqrt();
            vec![(-x, 1.0), (x, 1.0)]
        }
        3 => {
            let x = (3.0f64 / 5.0).sqrt();
            vec![(-x, 5.0 / 9.0), (0.0, 8.0 / 9.0), (x, 5.0 / 9.0)]
        }
        4 => {
            let a = (3.0 - 2.0 * (6.0f64 / 5.0).sqrt()) / 7.0;
            let b = (3.0 + 2.0 * (6.0f64 / 5.0).sqrt()) / 7.0;
            let wa = (18.0 + 30.0f64.sqrt()) / 36.0;
            let wb = (18.0 - 30.0f64.sqrt()) / 36.0;
            vec![
                (-b.sqrt(), wb),
                (-a.sqrt(), wa),
                (a.sqrt(), wa),
                (b.sqrt(), wb),
            ]
        }
        5 => {
            let a = (5.0 - 2.0 * (10.0f64 / 7.0).sqrt()) / 9.0;
            let b = (5.0 + 2.0 * (10.0f64 / 7.0).sqrt()) / 9.0;
            let wa = (322.0 + 13.0 * 70.0f64.sqrt()) / 900.0;
            let wb = (322.0 - 13.0 * 70.0f64.sqrt()) / 900.0;
            vec![
                (-b.sqrt(), wb),
                (-a.sqrt(), wa),
                (0.0, 128.0 / 225.0),
                (a.sqrt(), wa),
                (b.sqrt(), wb),
            ]
        }
        _ => {
            return Err(Error::config(format!(
                "Gauss rule with {n} points is unsupported (1..={MAX_POINTS})"
            )))
        }
    };
    Ok(rule)
}

/// Applies the rule to `f` over `[a, b]` (affine map from [-1, 1]),
/// accumulating node contributions left to right.
pub fn integrate<F: Fn(f64) -> f64>(rule: &[(f64, f64)], a: f64, b: f64, f: F) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    for &(node, weight) in rule {
        sum += weight * f(mid + half * node);
    }
    sum * half
}
