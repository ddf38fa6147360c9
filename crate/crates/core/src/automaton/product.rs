use std::collections::HashMap;

use super::{AutomatonError, MealyAutomaton, DEFAULT_STATE_CAP};

/// Product automaton `a × b`. State `(qa, qb)` sits at index `qa * b.n + qb`
/// and realizes `f_qa ∘ f_qb`: the right factor reads the raw input first.
pub fn product(a: &MealyAutomaton, b: &MealyAutomaton) -> Result<MealyAutomaton, AutomatonError> {
    product_with_cap(a, b, DEFAULT_STATE_CAP)
}

pub fn product_with_cap(
    a: &MealyAutomaton,
    b: &MealyAutomaton,
    cap: usize,
) -> Result<MealyAutomaton, AutomatonError> {
    let m = a.alphabet_size();
    if m != b.alphabet_size() {
        return Err(AutomatonError::AlphabetMismatch {
            left: m,
            right: b.alphabet_size(),
        });
    }
    let (na, nb) = (a.state_count(), b.state_count());
    let requested = na as u128 * nb as u128;
    if requested > cap as u128 {
        return Err(AutomatonError::CapExceeded { requested, cap });
    }
    let n = na * nb;
    let mut pi = Vec::with_capacity(n * m);
    let mut lambda = Vec::with_capacity(n * m);
    for qa in 0..na {
        for qb in 0..nb {
            for x in 0..m {
                let y = b.output(qb, x);
                pi.push((a.next(qa, y) * nb + b.next(qb, x)) as u32);
                lambda.push(a.output(qa, y) as u32);
            }
        }
    }
    let name = match (a.name(), b.name()) {
        (Some(l), Some(r)) => Some(format!("{l}*{r}")),
        _ => None,
    };
    Ok(MealyAutomaton::from_raw(name, m, n, pi, lambda))
}

/// `k`-th power, folded from the left: the state for the generator word
/// `s1 s2 … sk` has index `s1·n^(k-1) + … + sk` and realizes
/// `f_s1 ∘ … ∘ f_sk`.
pub fn power(a: &MealyAutomaton, k: usize) -> Result<MealyAutomaton, AutomatonError> {
    power_with_cap(a, k, DEFAULT_STATE_CAP)
}

pub fn power_with_cap(
    a: &MealyAutomaton,
    k: usize,
    cap: usize,
) -> Result<MealyAutomaton, AutomatonError> {
    assert!(k >= 1, "power exponent must be at least 1");
    let requested = (a.state_count() as u128)
        .checked_pow(k as u32)
        .unwrap_or(u128::MAX);
    if requested > cap as u128 {
        return Err(AutomatonError::CapExceeded { requested, cap });
    }
    let mut acc = a.clone();
    for _ in 1..k {
        acc = product_with_cap(&acc, a, cap)?;
    }
    Ok(acc)
}

/// Disjoint union: the states of `b` follow those of `a`.
pub fn disjoint_union(
    a: &MealyAutomaton,
    b: &MealyAutomaton,
) -> Result<MealyAutomaton, AutomatonError> {
    let m = a.alphabet_size();
    if m != b.alphabet_size() {
        return Err(AutomatonError::AlphabetMismatch {
            left: m,
            right: b.alphabet_size(),
        });
    }
    let offset = a.state_count() as u32;
    let mut pi = a.pi_flat().to_vec();
    pi.extend(b.pi_flat().iter().map(|&q| q + offset));
    let mut lambda = a.lambda_flat().to_vec();
    lambda.extend_from_slice(b.lambda_flat());
    Ok(MealyAutomaton::from_raw(
        None,
        m,
        a.state_count() + b.state_count(),
        pi,
        lambda,
    ))
}

/// The part of `a × b` reachable from `(qa, qb)`, with that pair as state 0.
/// States are numbered in breadth-first discovery order.
pub fn reachable_product(
    a: &MealyAutomaton,
    qa: usize,
    b: &MealyAutomaton,
    qb: usize,
    cap: usize,
) -> Result<MealyAutomaton, AutomatonError> {
    let m = a.alphabet_size();
    if m != b.alphabet_size() {
        return Err(AutomatonError::AlphabetMismatch {
            left: m,
            right: b.alphabet_size(),
        });
    }
    let mut index: HashMap<(usize, usize), u32> = HashMap::new();
    let mut order = vec![(qa, qb)];
    index.insert((qa, qb), 0);
    let mut pi = Vec::new();
    let mut lambda = Vec::new();
    let mut head = 0;
    while head < order.len() {
        let (sa, sb) = order[head];
        head += 1;
        for x in 0..m {
            let y = b.output(sb, x);
            let target = (a.next(sa, y), b.next(sb, x));
            let next_id = match index.get(&target) {
                Some(&id) => id,
                None => {
                    if order.len() >= cap {
                        return Err(AutomatonError::CapExceeded {
                            requested: order.len() as u128 + 1,
                            cap,
                        });
                    }
                    let id = order.len() as u32;
                    index.insert(target, id);
                    order.push(target);
                    id
                }
            };
            pi.push(next_id);
            lambda.push(a.output(sa, y) as u32);
        }
    }
    Ok(MealyAutomaton::from_raw(None, m, order.len(), pi, lambda))
}
