//! Exhaustive enumeration of difference sets in a small group.
//!
//! Candidates are built in lexicographic order by depth-first search. Each
//! step adds the quotients `xy⁻¹` and `yx⁻¹` contributed by the new element
//! and abandons the branch as soon as any quotient is seen more than `λ`
//! times; counts only grow along a branch, so no solution is lost. The
//! first branching level is split across rayon workers and reassembled in
//! order, so the output does not depend on the worker count.

use std::sync::Arc;

use rayon::prelude::*;

use crate::diffset::{DiffSetError, DifferenceSet, DsParams, VerifyOptions};
use crate::group::FiniteGroup;

pub const DEFAULT_CANDIDATE_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Only sets containing the identity.
    pub normalize: bool,
    /// Maximum number of candidate subsets the search may face.
    pub cap: u128,
    pub allow_trivial: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            normalize: true,
            cap: DEFAULT_CANDIDATE_CAP,
            allow_trivial: false,
        }
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(x) => x / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Number of subsets the search would enumerate without pruning.
pub fn candidate_count(v: usize, k: usize, normalize: bool) -> u128 {
    if normalize {
        binomial(v.saturating_sub(1), k.saturating_sub(1))
    } else {
        binomial(v, k)
    }
}

/// All `(v,k,λ)` difference sets of `group`, lexicographic on member indices.
pub fn search_difference_sets(
    group: &Arc<FiniteGroup>,
    k: usize,
    lambda: usize,
    opts: SearchOptions,
) -> Result<Vec<DifferenceSet>, DiffSetError> {
    let v = group.order();
    let params = DsParams::new(v, k, lambda);
    if k == 0 || k >= v {
        return Err(DiffSetError::NotProper { k, v });
    }
    if !params.satisfies_counting_identity() {
        return Err(DiffSetError::ParameterIdentity(params));
    }
    if !opts.allow_trivial && (lambda == 0 || params.n() <= 1) {
        return Err(DiffSetError::Trivial {
            params,
            n: params.n(),
        });
    }
    let candidates = candidate_count(v, k, opts.normalize);
    if candidates > opts.cap {
        return Err(DiffSetError::BudgetExceeded {
            candidates,
            cap: opts.cap,
        });
    }

    let e = group.identity();
    let (base, pool): (Vec<usize>, Vec<usize>) = if opts.normalize {
        (vec![e], (0..v).filter(|&x| x != e).collect())
    } else {
        (Vec::new(), (0..v).collect())
    };
    let need = k - base.len();

    let found: Vec<Vec<usize>> = if need == 0 {
        vec![base.clone()]
    } else {
        (0..pool.len())
            .into_par_iter()
            .map(|first| {
                let mut dfs = Dfs::new(group, lambda, &pool);
                for &b in &base {
                    dfs.push(b);
                }
                let mut out = Vec::new();
                if dfs.push(pool[first]) {
                    dfs.extend(first + 1, need - 1, &mut out);
                }
                out
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    };

    let verify = VerifyOptions {
        allow_trivial: opts.allow_trivial,
    };
    found
        .into_iter()
        .map(|members| DifferenceSet::verify_with_params(group, &members, params, verify))
        .collect()
}

struct Dfs<'a> {
    group: &'a FiniteGroup,
    lambda: usize,
    pool: &'a [usize],
    counts: Vec<usize>,
    chosen: Vec<usize>,
}

impl<'a> Dfs<'a> {
    fn new(group: &'a FiniteGroup, lambda: usize, pool: &'a [usize]) -> Self {
        Self {
            group,
            lambda,
            pool,
            counts: vec![0; group.order()],
            chosen: Vec::new(),
        }
    }

    /// Adds `x` if no quotient count exceeds λ; leaves state untouched otherwise.
    fn push(&mut self, x: usize) -> bool {
        let g = self.group;
        let mut ok = true;
        for &y in &self.chosen {
            let q1 = g.mul(x, g.inv(y));
            let q2 = g.mul(y, g.inv(x));
            self.counts[q1] += 1;
            self.counts[q2] += 1;
            if self.counts[q1] > self.lambda || self.counts[q2] > self.lambda {
                ok = false;
            }
        }
        if ok {
            self.chosen.push(x);
        } else {
            self.undo(x);
        }
        ok
    }

    fn undo(&mut self, x: usize) {
        let g = self.group;
        for &y in &self.chosen {
            self.counts[g.mul(x, g.inv(y))] -= 1;
            self.counts[g.mul(y, g.inv(x))] -= 1;
        }
    }

    fn pop(&mut self) {
        let x = self.chosen.pop().expect("nonempty");
        self.undo(x);
    }

    fn extend(&mut self, from: usize, need: usize, out: &mut Vec<Vec<usize>>) {
        if need == 0 {
            let mut set = self.chosen.clone();
            set.sort_unstable();
            out.push(set);
            return;
        }
        if self.pool.len() - from < need {
            return;
        }
        for i in from..=self.pool.len() - need {
            if self.push(self.pool[i]) {
                self.extend(i + 1, need - 1, out);
                self.pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain enumeration of k-subsets of Z_v with differences tabulated mod v.
    fn brute_force_cyclic(v: usize, k: usize, lambda: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << v) {
            if mask.count_ones() as usize != k || mask & 1 == 0 {
                continue;
            }
            let set: Vec<usize> = (0..v).filter(|&i| mask >> i & 1 == 1).collect();
            let mut counts = vec![0; v];
            for &x in &set {
                for &y in &set {
                    if x != y {
                        counts[(x + v - y) % v] += 1;
                    }
                }
            }
            if counts[1..].iter().all(|&c| c == lambda) {
                out.push(set);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(15, 5), 3003);
        assert_eq!(binomial(6, 2), 15);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(candidate_count(36, 15, true), binomial(35, 14));
    }

    #[test]
    fn fano_search_matches_brute_force() {
        let g = Arc::new(FiniteGroup::cyclic(7).unwrap());
        let found = search_difference_sets(&g, 3, 1, SearchOptions::default()).unwrap();
        let members: Vec<Vec<usize>> = found.iter().map(|d| d.members().to_vec()).collect();
        let oracle = brute_force_cyclic(7, 3, 1);
        assert_eq!(members, oracle);
        assert_eq!(members.len(), 6);
        assert!(members.contains(&vec![0, 1, 3]));
        // the translate {1,2,4} - 1 = {0,1,3}; the negation image -{1,2,4} = {3,5,6}, minus 3
        assert!(members.contains(&vec![0, 2, 3]));
    }

    #[test]
    fn unnormalized_search_finds_every_translate() {
        let g = Arc::new(FiniteGroup::cyclic(7).unwrap());
        let opts = SearchOptions {
            normalize: false,
            ..Default::default()
        };
        let found = search_difference_sets(&g, 3, 1, opts).unwrap();
        assert_eq!(found.len(), 14);
        assert!(found.iter().any(|d| d.members() == [1, 2, 4]));
    }

    #[test]
    fn cyclic_sixteen_has_no_sets() {
        let g = Arc::new(FiniteGroup::cyclic(16).unwrap());
        let found = search_difference_sets(&g, 6, 2, SearchOptions::default()).unwrap();
        let oracle: Vec<Vec<usize>> = brute_force_cyclic(16, 6, 2);
        assert_eq!(found.len(), oracle.len());
        assert!(found.is_empty());
    }

    #[test]
    fn thirteen_four_one_matches_brute_force() {
        let g = Arc::new(FiniteGroup::cyclic(13).unwrap());
        let found = search_difference_sets(&g, 4, 1, SearchOptions::default()).unwrap();
        let members: Vec<Vec<usize>> = found.iter().map(|d| d.members().to_vec()).collect();
        assert_eq!(members, brute_force_cyclic(13, 4, 1));
    }

    #[test]
    fn parameter_and_budget_errors() {
        let g = Arc::new(FiniteGroup::cyclic(16).unwrap());
        assert!(matches!(
            search_difference_sets(&g, 5, 2, SearchOptions::default()),
            Err(DiffSetError::ParameterIdentity(_))
        ));
        let tight = SearchOptions {
            cap: 100,
            ..Default::default()
        };
        assert_eq!(
            search_difference_sets(&g, 6, 2, tight).unwrap_err(),
            DiffSetError::BudgetExceeded {
                candidates: 3003,
                cap: 100
            }
        );
        let g36 = Arc::new(FiniteGroup::cyclic(36).unwrap());
        assert!(matches!(
            search_difference_sets(&g36, 15, 6, SearchOptions::default()),
            Err(DiffSetError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let g = Arc::new(FiniteGroup::abelian(&[(4, "a"), (4, "b")]).unwrap());
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| search_difference_sets(&g, 6, 2, SearchOptions::default()).unwrap())
        };
        let one: Vec<Vec<usize>> = run(1).iter().map(|d| d.members().to_vec()).collect();
        let four: Vec<Vec<usize>> = run(4).iter().map(|d| d.members().to_vec()).collect();
        assert_eq!(one, four);
        assert!(!one.is_empty());
    }
}
