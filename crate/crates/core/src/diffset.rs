//! Difference sets: verification, related sets, and multiplier statistics.
//!
//! A k-subset `D` of a group `G` of order `v` is a `(v,k,λ)` difference set
//! when every non-identity element has exactly `λ` representations `xy⁻¹`
//! with `x, y ∈ D`. Members are kept as sorted element indices.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{FiniteGroup, GroupError};
use crate::ring::GroupRingElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DsParams {
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
}

impl DsParams {
    pub fn new(v: usize, k: usize, lambda: usize) -> Self {
        Self { v, k, lambda }
    }

    /// The order `n = k - λ`.
    pub fn n(&self) -> usize {
        self.k - self.lambda
    }

    pub fn satisfies_counting_identity(&self) -> bool {
        self.v >= 1 && self.k * self.k.saturating_sub(1) == self.lambda * (self.v - 1)
    }
}

impl fmt::Display for DsParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.v, self.k, self.lambda)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    /// Admit sets with `λ = 0` or order `n <= 1`.
    pub allow_trivial: bool,
}

impl VerifyOptions {
    pub fn trivial_ok() -> Self {
        Self {
            allow_trivial: true,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiffSetError {
    #[error("members must form a nonempty proper subset (got {k} of {v} elements)")]
    NotProper { k: usize, v: usize },
    #[error("member index {index} is out of range or repeated")]
    InvalidMember { index: usize },
    #[error(
        "difference condition violated: `{element}` occurs {count} times as a quotient, expected {expected}"
    )]
    NotConstant {
        element: String,
        index: usize,
        count: usize,
        expected: usize,
    },
    #[error("trivial difference set {params} (order n = {n}); allow_trivial is off")]
    Trivial { params: DsParams, n: usize },
    #[error("parameters {0} violate k(k-1) = λ(v-1)")]
    ParameterIdentity(DsParams),
    #[error("expected parameters {expected}, verification found {found}")]
    ParameterMismatch { expected: DsParams, found: DsParams },
    #[error("operation requires an abelian group")]
    NotAbelian,
    #[error("search budget exceeded: {candidates} candidates exceed the cap of {cap}")]
    BudgetExceeded { candidates: u128, cap: u128 },
    #[error("difference set has no reversible translate")]
    NoReversibleTranslate,
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Counts of the quotients `x y⁻¹` (right) or `x⁻¹ y` (left) over ordered
/// pairs of distinct members, indexed by element.
pub fn quotient_counts(group: &FiniteGroup, members: &[usize], side: Side) -> Vec<usize> {
    let mut counts = vec![0usize; group.order()];
    for &x in members {
        for &y in members {
            if x != y {
                let q = match side {
                    Side::Right => group.mul(x, group.inv(y)),
                    Side::Left => group.mul(group.inv(x), y),
                };
                counts[q] += 1;
            }
        }
    }
    counts
}

/// Sorted image of `set` under right (`Xg`) or left (`gX`) translation.
pub fn translate_set(group: &FiniteGroup, set: &[usize], g: usize, side: Side) -> Vec<usize> {
    let mut out: Vec<usize> = set
        .iter()
        .map(|&x| match side {
            Side::Right => group.mul(x, g),
            Side::Left => group.mul(g, x),
        })
        .collect();
    out.sort_unstable();
    out
}

/// Sorted `X⁽⁻¹⁾`.
pub fn inverse_set(group: &FiniteGroup, set: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = set.iter().map(|&x| group.inv(x)).collect();
    out.sort_unstable();
    out
}

fn sorted_members(group: &FiniteGroup, members: &[usize]) -> Result<Vec<usize>, DiffSetError> {
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(DiffSetError::InvalidMember { index: w[0] });
        }
    }
    if let Some(&last) = sorted.last() {
        if last >= group.order() {
            return Err(DiffSetError::InvalidMember { index: last });
        }
    }
    Ok(sorted)
}

#[derive(Debug, Clone)]
pub struct DifferenceSet {
    group: Arc<FiniteGroup>,
    members: Vec<usize>,
    params: DsParams,
}

impl PartialEq for DifferenceSet {
    fn eq(&self, other: &Self) -> bool {
        *self.group == *other.group && self.members == other.members
    }
}

impl Eq for DifferenceSet {}

impl DifferenceSet {
    /// Checks the difference condition by tabulating every quotient `xy⁻¹`.
    pub fn verify(
        group: &Arc<FiniteGroup>,
        members: &[usize],
        opts: VerifyOptions,
    ) -> Result<Self, DiffSetError> {
        let v = group.order();
        let members = sorted_members(group, members)?;
        let k = members.len();
        if k == 0 || k >= v {
            return Err(DiffSetError::NotProper { k, v });
        }
        let counts = quotient_counts(group, &members, Side::Right);
        let mut lambda = None;
        for (x, &c) in counts.iter().enumerate() {
            if x == group.identity() {
                continue;
            }
            match lambda {
                None => lambda = Some(c),
                Some(l) if l != c => {
                    return Err(DiffSetError::NotConstant {
                        element: group.name(x).to_string(),
                        index: x,
                        count: c,
                        expected: l,
                    })
                }
                Some(_) => {}
            }
        }
        // v >= 2 here, so some non-identity element exists
        let params = DsParams::new(v, k, lambda.unwrap_or(0));
        debug_assert!(params.satisfies_counting_identity());
        if !opts.allow_trivial && (params.lambda == 0 || params.n() <= 1) {
            return Err(DiffSetError::Trivial {
                params,
                n: params.n(),
            });
        }
        Ok(Self {
            group: Arc::clone(group),
            members,
            params,
        })
    }

    /// Verifies and additionally requires the given parameters.
    pub fn verify_with_params(
        group: &Arc<FiniteGroup>,
        members: &[usize],
        expected: DsParams,
        opts: VerifyOptions,
    ) -> Result<Self, DiffSetError> {
        let d = Self::verify(group, members, opts)?;
        if d.params != expected {
            return Err(DiffSetError::ParameterMismatch {
                expected,
                found: d.params,
            });
        }
        Ok(d)
    }

    fn trusted(group: &Arc<FiniteGroup>, members: Vec<usize>, params: DsParams) -> Self {
        let d = Self {
            group: Arc::clone(group),
            members,
            params,
        };
        debug_assert!(d.group_ring_identity_holds());
        d
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn params(&self) -> DsParams {
        self.params
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn member_names(&self) -> Vec<String> {
        self.members
            .iter()
            .map(|&x| self.group.name(x).to_string())
            .collect()
    }

    /// `D D⁽⁻¹⁾ = n·1_G + λ·G`, checked coefficient by coefficient.
    pub fn group_ring_identity_holds(&self) -> bool {
        let d = GroupRingElement::from_subset(&self.group, &self.members);
        let lhs = d.mul(&d.power_map(-1)).expect("same group");
        let one = GroupRingElement::one(&self.group).scale(self.params.n() as i64);
        let all = GroupRingElement::group_sum(&self.group).scale(self.params.lambda as i64);
        lhs == one.add(&all).expect("same group")
    }

    /// `G \ D`, re-verified from scratch.
    pub fn complement(&self, opts: VerifyOptions) -> Result<Self, DiffSetError> {
        let rest: Vec<usize> = (0..self.group.order())
            .filter(|&x| !self.contains(x))
            .collect();
        Self::verify(&self.group, &rest, opts)
    }

    pub fn translate(&self, g: usize, side: Side) -> Self {
        let members = translate_set(&self.group, &self.members, g, side);
        Self::trusted(&self.group, members, self.params)
    }

    /// `Xg` for every `g`, in element order.
    pub fn right_translates(&self) -> Vec<Vec<usize>> {
        (0..self.group.order())
            .map(|g| translate_set(&self.group, &self.members, g, Side::Right))
            .collect()
    }

    pub fn left_translates(&self) -> Vec<Vec<usize>> {
        (0..self.group.order())
            .map(|g| translate_set(&self.group, &self.members, g, Side::Left))
            .collect()
    }

    pub fn inverse_members(&self) -> Vec<usize> {
        inverse_set(&self.group, &self.members)
    }

    pub fn is_reversible(&self) -> bool {
        self.inverse_members() == self.members
    }

    /// First `g` (in element order) with `Dg` reversible.
    pub fn reversible_translate(&self) -> Option<usize> {
        (0..self.group.order()).find(|&g| {
            let t = translate_set(&self.group, &self.members, g, Side::Right);
            inverse_set(&self.group, &t) == t
        })
    }

    /// `|Dg ∩ (Dg)⁽⁻¹⁾|` for each `g`.
    pub fn self_inverse_overlaps(&self) -> Vec<usize> {
        (0..self.group.order())
            .map(|g| {
                let t = translate_set(&self.group, &self.members, g, Side::Right);
                let inv: HashSet<usize> = t.iter().map(|&x| self.group.inv(x)).collect();
                t.iter().filter(|x| inv.contains(x)).count()
            })
            .collect()
    }

    /// Counts of reversible right translates, translates with weak
    /// multiplier -1, and the size of the left-equals-right subgroup.
    pub fn multiplier_report(&self) -> MultiplierReport {
        let g = &self.group;
        let right = self.right_translates();
        let dev: HashSet<&Vec<usize>> = right.iter().collect();
        let mut reversible = 0;
        let mut weak = 0;
        let mut fixed = None;
        for (x, t) in right.iter().enumerate() {
            let inv = inverse_set(g, t);
            if inv == *t {
                reversible += 1;
                fixed.get_or_insert(x);
            }
            if dev.contains(&inv) {
                weak += 1;
            }
        }
        let s = self.s_subgroup_with(&dev).len();
        MultiplierReport {
            reversible_translate_count: reversible,
            weak_minus_one_count: weak,
            left_equals_right_count_s: s,
            has_minus_one_multiplier: g.is_abelian().then_some(reversible > 0),
            a_fixed_reversible_translate: fixed.map(|x| g.name(x).to_string()),
        }
    }

    /// `S = {x : xD = Dy for some y}`.
    pub fn s_subgroup(&self) -> Vec<usize> {
        let right = self.right_translates();
        let dev: HashSet<&Vec<usize>> = right.iter().collect();
        let s = self.s_subgroup_with(&dev);
        debug_assert!(self.group.is_subgroup(&s));
        s
    }

    fn s_subgroup_with(&self, dev: &HashSet<&Vec<usize>>) -> Vec<usize> {
        (0..self.group.order())
            .filter(|&x| dev.contains(&translate_set(&self.group, &self.members, x, Side::Left)))
            .collect()
    }

    /// Sorted image `D⁽ᵗ⁾` as a set (duplicates collapse when `x ↦ xᵗ` is not injective).
    pub fn power_image(&self, t: i64) -> Vec<usize> {
        let mut out: Vec<usize> = self.members.iter().map(|&x| self.group.pow(x, t)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Whether `t` is a numerical multiplier: `D⁽ᵗ⁾ = Dg` for some `g`.
    pub fn numerical_multiplier(&self, t: i64) -> Result<bool, DiffSetError> {
        if !self.group.is_abelian() {
            return Err(DiffSetError::NotAbelian);
        }
        let image = self.power_image(t);
        if image.len() != self.members.len() {
            return Ok(false);
        }
        Ok((0..self.group.order())
            .any(|g| translate_set(&self.group, &self.members, g, Side::Right) == image))
    }

    /// Re-checks the necessary conditions satisfied by every abelian
    /// difference set with a reversible translate: `v` and `λ` even, `n` a
    /// perfect square, and `v`, `n` sharing their odd prime divisors.
    pub fn reversibility_sanity(&self) -> Result<ReversibilityFacts, DiffSetError> {
        if !self.group.is_abelian() {
            return Err(DiffSetError::NotAbelian);
        }
        if self.reversible_translate().is_none() {
            return Err(DiffSetError::NoReversibleTranslate);
        }
        let p = self.params;
        let n = p.n();
        let root = integer_sqrt(n);
        let facts = ReversibilityFacts {
            params: p,
            n,
            sqrt_n: (root * root == n).then_some(root),
            odd_primes_v: odd_prime_divisors(p.v),
            odd_primes_n: odd_prime_divisors(n),
        };
        if !p.v.is_multiple_of(2) {
            return Err(DiffSetError::TheoremViolation(format!(
                "v = {} is odd",
                p.v
            )));
        }
        if !p.lambda.is_multiple_of(2) {
            return Err(DiffSetError::TheoremViolation(format!(
                "λ = {} is odd",
                p.lambda
            )));
        }
        if facts.sqrt_n.is_none() {
            return Err(DiffSetError::TheoremViolation(format!(
                "n = {n} is not a square"
            )));
        }
        if facts.odd_primes_v != facts.odd_primes_n {
            return Err(DiffSetError::TheoremViolation(format!(
                "odd prime divisors differ: v has {:?}, n has {:?}",
                facts.odd_primes_v, facts.odd_primes_n
            )));
        }
        Ok(facts)
    }
}

impl fmt::Display for DifferenceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}} {}", self.member_names().join(","), self.params)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplierReport {
    pub reversible_translate_count: usize,
    pub weak_minus_one_count: usize,
    pub left_equals_right_count_s: usize,
    /// Present for abelian groups only.
    pub has_minus_one_multiplier: Option<bool>,
    pub a_fixed_reversible_translate: Option<String>,
}

impl MultiplierReport {
    pub fn triple(&self) -> (usize, usize, usize) {
        (
            self.reversible_translate_count,
            self.weak_minus_one_count,
            self.left_equals_right_count_s,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReversibilityFacts {
    pub params: DsParams,
    pub n: usize,
    pub sqrt_n: Option<usize>,
    pub odd_primes_v: Vec<usize>,
    pub odd_primes_n: Vec<usize>,
}

pub(crate) fn integer_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub(crate) fn odd_prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    while n > 0 && n.is_multiple_of(2) {
        n /= 2;
    }
    let mut p = 3;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 2;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z7() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(7).unwrap())
    }

    fn words(g: &FiniteGroup, ws: &[&str]) -> Vec<usize> {
        ws.iter().map(|w| g.parse_element(w).unwrap()).collect()
    }

    /// Independent tabulation of all ordered differences x - y mod 7.
    fn fano_difference_table() -> Vec<usize> {
        let d = [1usize, 2, 4];
        let mut counts = vec![0; 7];
        for x in d {
            for y in d {
                if x != y {
                    counts[(x + 7 - y) % 7] += 1;
                }
            }
        }
        counts
    }

    #[test]
    fn fano_verifies() {
        assert_eq!(fano_difference_table(), vec![0, 1, 1, 1, 1, 1, 1]);
        let d = DifferenceSet::verify(&z7(), &[1, 2, 4], VerifyOptions::default()).unwrap();
        assert_eq!(d.params(), DsParams::new(7, 3, 1));
        assert!(d.group_ring_identity_holds());
    }

    #[test]
    fn improper_subsets_rejected() {
        let g = z7();
        let all: Vec<usize> = (0..7).collect();
        assert_eq!(
            DifferenceSet::verify(&g, &all, VerifyOptions::default()),
            Err(DiffSetError::NotProper { k: 7, v: 7 })
        );
        assert_eq!(
            DifferenceSet::verify(&g, &[], VerifyOptions::default()),
            Err(DiffSetError::NotProper { k: 0, v: 7 })
        );
        assert!(matches!(
            DifferenceSet::verify(&g, &[1, 1, 2], VerifyOptions::default()),
            Err(DiffSetError::InvalidMember { index: 1 })
        ));
    }

    #[test]
    fn non_constant_counts_carry_a_witness() {
        let err = DifferenceSet::verify(&z7(), &[0, 1, 2], VerifyOptions::default()).unwrap_err();
        match err {
            DiffSetError::NotConstant {
                index,
                count,
                expected,
                ..
            } => {
                // differences: ±1 twice, ±2 once, 3 and 4 never
                assert_eq!((index, count, expected), (2, 1, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn trivial_sets_need_the_flag() {
        let v4 = Arc::new(FiniteGroup::abelian(&[(2, "a"), (2, "b")]).unwrap());
        let e = v4.identity();
        assert!(matches!(
            DifferenceSet::verify(&v4, &[e], VerifyOptions::default()),
            Err(DiffSetError::Trivial { .. })
        ));
        let d = DifferenceSet::verify(&v4, &[e], VerifyOptions::trivial_ok()).unwrap();
        assert_eq!(d.params(), DsParams::new(4, 1, 0));
    }

    #[test]
    fn complements() {
        let d = DifferenceSet::verify(&z7(), &[1, 2, 4], VerifyOptions::default()).unwrap();
        let c = d.complement(VerifyOptions::default()).unwrap();
        assert_eq!(c.params(), DsParams::new(7, 4, 2));
        assert_eq!(c.complement(VerifyOptions::default()).unwrap(), d);

        let b = Arc::new(FiniteGroup::abelian(&[(4, "a"), (4, "b")]).unwrap());
        let m = words(&b, &["1", "a", "a^2", "b", "ab^2", "a^2b^3"]);
        let d = DifferenceSet::verify(&b, &m, VerifyOptions::default()).unwrap();
        let c = d.complement(VerifyOptions::default()).unwrap();
        // k = 10, v = 16 forces λ = 10*9/15 = 6
        assert_eq!(c.params(), DsParams::new(16, 10, 6));
    }

    #[test]
    fn translates() {
        let g = z7();
        let d = DifferenceSet::verify(&g, &[1, 2, 4], VerifyOptions::default()).unwrap();
        assert_eq!(d.translate(0, Side::Right), d);
        for x in 0..7 {
            assert_eq!(d.translate(x, Side::Left), d.translate(x, Side::Right));
        }
        let dev = d.right_translates();
        assert_eq!(dev.len(), 7);
        assert_eq!(dev[0], d.members());
    }

    #[test]
    fn fano_multipliers() {
        let d = DifferenceSet::verify(&z7(), &[1, 2, 4], VerifyOptions::default()).unwrap();
        let r = d.multiplier_report();
        assert_eq!(r.reversible_translate_count, 0);
        assert_eq!(r.has_minus_one_multiplier, Some(false));
        assert_eq!(r.left_equals_right_count_s, 7);
        assert!(d.numerical_multiplier(1).unwrap());
        assert!(!d.numerical_multiplier(-1).unwrap());
        // 2 is a multiplier of the quadratic residues mod 7
        assert!(d.numerical_multiplier(2).unwrap());
        assert_eq!(d.s_subgroup().len(), 7);
    }

    #[test]
    fn elementary_abelian_set_is_reversible() {
        let g = Arc::new(FiniteGroup::abelian(&[(2, "a"), (2, "b"), (2, "c"), (2, "d")]).unwrap());
        let m = words(&g, &["1", "a", "b", "c", "d", "abcd"]);
        let d = DifferenceSet::verify(&g, &m, VerifyOptions::default()).unwrap();
        assert!(d.is_reversible());
        let r = d.multiplier_report();
        assert_eq!(r.has_minus_one_multiplier, Some(true));
        assert_eq!(r.reversible_translate_count, 16);
        assert_eq!(r.a_fixed_reversible_translate.as_deref(), Some("1"));
        let facts = d.reversibility_sanity().unwrap();
        assert_eq!(facts.sqrt_n, Some(2));
    }

    #[test]
    fn numerical_multiplier_needs_abelian() {
        let a: Vec<usize> = (0..8).map(|x| (x + 1) % 8).collect();
        let b: Vec<usize> = (0..8).map(|x| (5 * x) % 8).collect();
        let names = ["a".to_string(), "b".to_string()];
        let j = Arc::new(FiniteGroup::from_permutations(8, &[a, b], Some(&names), 1024).unwrap());
        let m = words(&j, &["1", "a", "a^2", "a^5", "a^4b", "a^2b"]);
        let d = DifferenceSet::verify(&j, &m, VerifyOptions::default()).unwrap();
        assert_eq!(d.numerical_multiplier(-1), Err(DiffSetError::NotAbelian));
        assert_eq!(d.reversibility_sanity(), Err(DiffSetError::NotAbelian));
    }

    #[test]
    fn sanity_rejects_sets_without_reversible_translate() {
        let d = DifferenceSet::verify(&z7(), &[1, 2, 4], VerifyOptions::default()).unwrap();
        assert_eq!(
            d.reversibility_sanity(),
            Err(DiffSetError::NoReversibleTranslate)
        );
    }

    #[test]
    fn number_theory_helpers() {
        assert_eq!(integer_sqrt(0), 0);
        assert_eq!(integer_sqrt(15), 3);
        assert_eq!(integer_sqrt(16), 4);
        assert_eq!(odd_prime_divisors(36), vec![3]);
        assert_eq!(odd_prime_divisors(16), Vec::<usize>::new());
        assert_eq!(odd_prime_divisors(4000), vec![5]);
        assert_eq!(odd_prime_divisors(1), Vec::<usize>::new());
    }
}
