use serde::Serialize;

use super::IntSequence;

/// Search limits for [`order_compare`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrderBounds {
    pub c1_max: i128,
    pub c2_max: usize,
    pub n0_max: usize,
    /// Fewest comparison points a witness must cover.
    pub min_points: usize,
}

impl Default for OrderBounds {
    fn default() -> Self {
        Self {
            c1_max: 16,
            c2_max: 4,
            n0_max: 8,
            min_points: 3,
        }
    }
}

/// Constants with `lhs(n) ≤ c1·rhs(c2·n)` for every `n ≥ n0` where both
/// sides are known, checked on `points` values of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrderWitness {
    pub c1: i128,
    pub c2: usize,
    pub n0: usize,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderRelation {
    /// `s1 ≼ s2` only.
    NoGreater,
    /// `s1 ≽ s2` only.
    NoLess,
    Equivalent,
    IncomparableWithinBounds,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderVerdict {
    pub relation: OrderRelation,
    pub below: Option<OrderWitness>,
    pub above: Option<OrderWitness>,
    pub bounds: OrderBounds,
}

/// First witness, in order of `c2`, then `n0`, then `c1`, that `lhs` is
/// dominated by `rhs` on the sampled range.
fn dominated(lhs: &IntSequence, rhs: &IntSequence, b: &OrderBounds) -> Option<OrderWitness> {
    for c2 in 1..=b.c2_max {
        for n0 in lhs.start().max(1)..=b.n0_max {
            let pairs: Vec<(i128, i128)> = lhs
                .indexed()
                .filter(|&(n, _)| n >= n0)
                .filter_map(|(n, v)| rhs.get(c2 * n).map(|w| (v, w)))
                .collect();
            if pairs.len() < b.min_points {
                continue;
            }
            if let Some(c1) = (1..=b.c1_max).find(|&c1| pairs.iter().all(|&(v, w)| v <= c1 * w)) {
                return Some(OrderWitness {
                    c1,
                    c2,
                    n0,
                    points: pairs.len(),
                });
            }
        }
    }
    None
}

/// Bounded comparison of growth orders on the available samples. The
/// answer is a diagnostic about the given range only.
pub fn order_compare(s1: &IntSequence, s2: &IntSequence, bounds: OrderBounds) -> OrderVerdict {
    let below = dominated(s1, s2, &bounds);
    let above = dominated(s2, s1, &bounds);
    let relation = match (below.is_some(), above.is_some()) {
        (true, true) => OrderRelation::Equivalent,
        (true, false) => OrderRelation::NoGreater,
        (false, true) => OrderRelation::NoLess,
        (false, false) => OrderRelation::IncomparableWithinBounds,
    };
    OrderVerdict {
        relation,
        below,
        above,
        bounds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_orders() {
        let sq = IntSequence::tabulate(1, 400, |n| (n * n) as i128);
        let cube = IntSequence::tabulate(1, 400, |n| (n * n * n) as i128);
        let v = order_compare(
            &sq,
            &cube,
            OrderBounds {
                c1_max: 4,
                ..OrderBounds::default()
            },
        );
        assert_eq!(v.relation, OrderRelation::NoGreater);
        assert!(v.above.is_none());
    }

    #[test]
    fn bounded_constant_is_equivalent_to_constant() {
        let a2 = IntSequence::new(1, vec![2, 4, 7, 8, 9, 8, 9, 8, 9, 8, 9, 8, 9, 8, 9, 8]);
        let nine = IntSequence::new(1, vec![9; 16]);
        assert_eq!(
            order_compare(&a2, &nine, OrderBounds::default()).relation,
            OrderRelation::Equivalent
        );
    }

    #[test]
    fn exponent_scaling_needs_c2() {
        // 2^n against 2^{n/2}: domination from below needs c2 = 2.
        let full = IntSequence::tabulate(1, 40, |n| 1i128 << n);
        let half = IntSequence::tabulate(1, 40, |n| 1i128 << (n / 2));
        let v = order_compare(&full, &half, OrderBounds::default());
        assert_eq!(v.relation, OrderRelation::Equivalent);
        assert_eq!(v.below.unwrap().c2, 2);
        assert_eq!(v.above.unwrap().c2, 1);
    }
}
