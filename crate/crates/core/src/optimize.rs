//! Derivative-free one-dimensional maximisation.

/// `(3 − √5)/2`, the golden-section interior fraction.
const GOLDEN: f64 = 0.381_966_011_250_105_1;

/// Result of a scalar search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `xtol`. The returned point is the
/// best evaluated one, endpoints included, so a maximum sitting on a bound is
/// reported exactly.
pub fn golden_section_max<F>(f: F, lo: f64, hi: f64, xtol: f64) -> Maximum
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut best = [a, b]
        .into_iter()
        .map(|x| Maximum { x, value: f(x) })
        .fold(Maximum { x: a, value: f64::NEG_INFINITY }, keep_better);
    if b - a <= xtol {
        return best;
    }

    let mut x1 = a + GOLDEN * (b - a);
    let mut x2 = b - GOLDEN * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    // The bracket shrinks by 0.618 per step; 200 steps cover any f64 range.
    for _ in 0..200 {
        if b - a <= xtol {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + GOLDEN * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - GOLDEN * (b - a);
            f2 = f(x2);
        }
        best = keep_better(best, Maximum { x: x1, value: f1 });
        best = keep_better(best, Maximum { x: x2, value: f2 });
    }
    best
}

fn keep_better(best: Maximum, candidate: Maximum) -> Maximum {
    if candidate.value > best.value {
        candidate
    } else {
        best
    }
}

/// Index of the first maximum of `values` (NaNs never win).
pub fn first_argmax(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        match best {
            Some(j) if values[j] >= v || v.is_nan() => {}
            _ if v.is_nan() => {}
            _ => best = Some(i),
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_maximum() {
        let m = golden_section_max(|x| -(x - 1.234).powi(2), -3.0, 5.0, 1e-10);
        assert!((m.x - 1.234).abs() < 1e-7);
        assert!(m.value <= 0.0 && m.value > -1e-14);
    }

    #[test]
    fn reports_boundary_maximum_exactly() {
        let m = golden_section_max(|x| x, 0.0, 4.0, 1e-10);
        assert_eq!(m.x, 4.0);
        let m = golden_section_max(|x| -x, 0.0, 4.0, 1e-10);
        assert_eq!(m.x, 0.0);
    }

    #[test]
    fn degenerate_bracket_returns_point() {
        let m = golden_section_max(|x| x * x, 2.0, 2.0, 1e-10);
        assert_eq!(m, Maximum { x: 2.0, value: 4.0 });
    }

    #[test]
    fn first_argmax_breaks_ties_to_first() {
        assert_eq!(first_argmax(&[1.0, 3.0, 3.0, 2.0]), Some(1));
        assert_eq!(first_argmax(&[f64::NAN, 0.5]), Some(1));
        assert_eq!(first_argmax(&[]), None);
    }
}
