//! Failure risk of every maintenance plan in `Θ(3^N)`.
//!
//! For a plan `A` let `q_A(r)` be the probability that the components
//! outside `A` are in state `r` (`r ⊆ Aᶜ`). Perfect repairs set every bit of
//! `A`, so `risk(A) = Σ_r q_A(r)·[φ(r ∪ A) = 0]`. Adding a component `a` to
//! the plan marginalizes it out:
//!
//! ```text
//! q_{A∪a}(r) = q_A(r) + q_A(r ∪ a)        for r ⊆ (A ∪ a)ᶜ
//! ```
//!
//! Plans are visited depth-first, always adding a bit above the highest bit
//! already present, so each plan is built exactly once from its parent and the
//! total work is `Σ_A 2^{N−|A|} = 3^N`.

/// Probability of system failure after applying each of the `2^n` plans.
/// `works[m]` is `φ` on state mask `m`, `pmf[m]` its probability.
pub(crate) fn plan_risks(works: &[bool], pmf: &[f64], n: usize) -> Vec<f64> {
    let size = 1usize << n;
    debug_assert_eq!(works.len(), size);
    debug_assert_eq!(pmf.len(), size);
    let mut risks = vec![0.0; size];
    risks[0] = crate::model::failure_prob(works, pmf);
    if n == 0 {
        return risks;
    }
    let mut buffers: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    buffers.push(pmf.to_vec());
    buffers.extend((0..n).map(|_| vec![0.0; size]));
    let full = size - 1;
    descend(0, 0, 0, n, full, works, &mut buffers, &mut risks);
    risks
}

#[allow(clippy::too_many_arguments)]
fn descend(
    plan: usize,
    depth: usize,
    first_bit: usize,
    n: usize,
    full: usize,
    works: &[bool],
    buffers: &mut [Vec<f64>],
    risks: &mut [f64],
) {
    for bit in first_bit..n {
        let child = plan | 1 << bit;
        let rest = full & !child;
        let (lower, upper) = buffers.split_at_mut(depth + 1);
        let parent = &lower[depth];
        let next = &mut upper[0];
        let mut risk = 0.0;
        let mut r = rest;
        loop {
            let q = parent[r] + parent[r | 1 << bit];
            next[r] = q;
            if !works[r | child] {
                risk += q;
            }
            if r == 0 {
                break;
            }
            r = (r - 1) & rest;
        }
        risks[child] = risk;
        if bit + 1 < n {
            descend(child, depth + 1, bit + 1, n, full, works, buffers, risks);
        }
    }
}

/// Direct evaluation of one plan's risk, `Θ(2^N)`.
pub(crate) fn plan_risk(works: &[bool], pmf: &[f64], plan: usize) -> f64 {
    pmf.iter()
        .enumerate()
        .filter(|&(m, _)| !works[m | plan])
        .map(|(_, p)| p)
        .sum()
}
