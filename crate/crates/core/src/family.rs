//! Reversible Hadamard difference sets built by Menon composition, and the
//! triple arrays they give.
//!
//! Three seeds are used, all with parameters `(4u², 2u²-u, u²-u)`:
//!
//! * `u = 1`: `{1}` in `Z2 x Z2`, the trivial `(4,1,0)` set;
//! * `u = 2`: `{1,a,b,c,d,abcd}` in `Z2^4`;
//! * `u = 3`: a reversible translate of catalog set `AII.17` in `Z3^2 x Z2^2`.
//!
//! Two sets with parameters for `u1` and `u2` compose to
//! `D = (D1 x (G2 \ D2)) ∪ ((G1 \ D1) x D2)`, a set for `u = 2·u1·u2`.
//! Inversion acts componentwise and complements of reversible sets are
//! reversible, so composites of reversible seeds stay reversible.
//!
//! Every leaf contributes at most one factor 3 and every composition exactly
//! one factor 2, so `u = 2^a 3^b` is reachable iff `u ∈ {1, 3}` or
//! `a ≥ 1` and `b ≤ a + 1`. That excludes `u = 9` and `u = 54`, for example,
//! even though sets with those parameters exist.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::array::{
    derive_parameters, direct_construct, ArrayError, ArrayVerdict, RowColumnArray, TaParams,
};
use crate::catalog::{self, CatalogError};
use crate::designs::build_youden;
use crate::diffset::{integer_sqrt, DiffSetError, DifferenceSet, DsParams, Side, VerifyOptions};
use crate::group::{FiniteGroup, GroupError};

/// Largest `u` generated unless the caller raises it (group order 576).
pub const DEFAULT_MAX_U: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("u must be a positive integer")]
    Zero,
    #[error("u = {u} is unsupported: its square-free part {part} does not divide 6, so a Hadamard difference set with -1 as multiplier cannot exist (u may only have the prime factors 2 and 3)")]
    SquareFree { u: usize, part: usize },
    #[error("u = {u} is unsupported: it cannot be written as an iterated product 2·u1·u2 over the seeds 1, 2, 3")]
    Unreachable { u: usize },
    #[error("u = {u} is unsupported: it exceeds the limit u <= {max} (group order {order})")]
    TooLarge { u: usize, max: usize, order: usize },
    #[error("u = 1 gives a 1x3 array, for which the pairwise conditions are vacuous")]
    Degenerate,
    #[error("{params} is not a Hadamard parameter set (4u², 2u²-u, u²-u)")]
    NotHadamard { params: DsParams },
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error(transparent)]
    DiffSet(#[from] DiffSetError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Array(#[from] ArrayError),
}

/// `(4u², 2u²-u, u²-u)`.
pub fn hadamard_params(u: usize) -> DsParams {
    DsParams::new(4 * u * u, 2 * u * u - u, u * u - u)
}

/// The `u` of a minus-sign Hadamard parameter set.
pub fn hadamard_u(p: DsParams) -> Option<usize> {
    let u = integer_sqrt(p.v / 4);
    (u > 0 && hadamard_params(u) == p).then_some(u)
}

/// The product of the primes dividing `u` to an odd power.
pub fn square_free_part(mut u: usize) -> usize {
    let mut part = 1;
    let mut p = 2;
    while p * p <= u {
        let mut e = 0;
        while u.is_multiple_of(p) {
            u /= p;
            e += 1;
        }
        if e % 2 == 1 {
            part *= p;
        }
        p += 1;
    }
    part * u
}

/// `D = (D1 x (G2 \ D2)) ∪ ((G1 \ D1) x D2)` in `G1 x G2`, re-verified.
pub fn menon_complement_product(
    d1: &DifferenceSet,
    d2: &DifferenceSet,
) -> Result<DifferenceSet, FamilyError> {
    let u1 = hadamard_u(d1.params()).ok_or(FamilyError::NotHadamard {
        params: d1.params(),
    })?;
    let u2 = hadamard_u(d2.params()).ok_or(FamilyError::NotHadamard {
        params: d2.params(),
    })?;
    let (g1, g2) = (d1.group(), d2.group());
    let group = Arc::new(FiniteGroup::direct_product(g1, g2)?);
    let n2 = g2.order();
    let members: Vec<usize> = (0..g1.order())
        .flat_map(|x| (0..n2).map(move |y| (x, y)))
        .filter(|&(x, y)| d1.contains(x) != d2.contains(y))
        .map(|(x, y)| x * n2 + y)
        .collect();
    let u = 2 * u1 * u2;
    DifferenceSet::verify_with_params(
        &group,
        &members,
        hadamard_params(u),
        VerifyOptions::default(),
    )
    .map_err(|e| FamilyError::TheoremViolation(format!("composite for u = {u} failed: {e}")))
}

/// How a family member was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub u: usize,
    pub params: DsParams,
    pub group_order: usize,
    pub step: Step,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    Seed {
        description: String,
    },
    Composition {
        left: Box<Provenance>,
        right: Box<Provenance>,
    },
}

impl Provenance {
    /// Indented one-line-per-node rendering.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        match &self.step {
            Step::Seed { description } => {
                out.push_str(&format!(
                    "{pad}u={} {} seed: {description}\n",
                    self.u, self.params
                ));
            }
            Step::Composition { left, right } => {
                out.push_str(&format!(
                    "{pad}u={} {} = 2·{}·{} in a group of order {}\n",
                    self.u, self.params, left.u, right.u, self.group_order
                ));
                left.render_into(depth + 1, out);
                right.render_into(depth + 1, out);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Plan {
    Seed(usize),
    Compose(usize, Box<Plan>, Box<Plan>),
}

struct Planner {
    memo: HashMap<usize, bool>,
}

impl Planner {
    fn reachable(&mut self, u: usize) -> bool {
        if matches!(u, 1..=3) {
            return true;
        }
        if u == 0 || u % 2 == 1 {
            return false;
        }
        if let Some(&r) = self.memo.get(&u) {
            return r;
        }
        let m = u / 2;
        let r = (1..=m).any(|d| m.is_multiple_of(d) && self.reachable(d) && self.reachable(m / d));
        self.memo.insert(u, r);
        r
    }

    /// Peels off a seed as the right factor when possible, preferring 3,
    /// then 2, then 1; otherwise the smallest reachable divisor pair.
    fn plan(&mut self, u: usize) -> Option<Plan> {
        if matches!(u, 1..=3) {
            return Some(Plan::Seed(u));
        }
        if !self.reachable(u) {
            return None;
        }
        let m = u / 2;
        let split = [3, 2, 1]
            .into_iter()
            .find(|&s| m.is_multiple_of(s) && self.reachable(m / s))
            .map(|s| (m / s, s))
            .or_else(|| {
                (1..=m)
                    .find(|&d| m.is_multiple_of(d) && self.reachable(d) && self.reachable(m / d))
                    .map(|d| (m / d, d))
            })?;
        let left = self.plan(split.0)?;
        let right = self.plan(split.1)?;
        Some(Plan::Compose(u, Box::new(left), Box::new(right)))
    }
}

/// Whether composition from the seeds reaches `u`.
pub fn is_reachable(u: usize) -> bool {
    Planner {
        memo: HashMap::new(),
    }
    .reachable(u)
}

#[derive(Debug, Clone, Copy)]
pub struct FamilyOptions {
    pub max_u: usize,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        Self {
            max_u: DEFAULT_MAX_U,
        }
    }
}

/// Checks `u` against the existence obstruction, reachability and the size limit.
pub fn check_u(u: usize, opts: FamilyOptions) -> Result<(), FamilyError> {
    if u == 0 {
        return Err(FamilyError::Zero);
    }
    let part = square_free_part(u);
    if 6 % part != 0 {
        return Err(FamilyError::SquareFree { u, part });
    }
    if !is_reachable(u) {
        return Err(FamilyError::Unreachable { u });
    }
    if u > opts.max_u {
        return Err(FamilyError::TooLarge {
            u,
            max: opts.max_u,
            order: 4 * u * u,
        });
    }
    Ok(())
}

fn seed(u: usize) -> Result<(DifferenceSet, String), FamilyError> {
    match u {
        1 => {
            let g = Arc::new(FiniteGroup::abelian(&[(2, "a"), (2, "b")])?);
            let d = DifferenceSet::verify(&g, &[g.identity()], VerifyOptions::trivial_ok())?;
            Ok((d, "{1} in Z2 x Z2".into()))
        }
        2 => Ok((catalog::load_entry("D.8")?, "catalog D.8 in Z2^4".into())),
        3 => {
            let d = catalog::load_entry("AII.17")?;
            let g = d.reversible_translate().ok_or_else(|| {
                FamilyError::TheoremViolation("AII.17 has no reversible translate".into())
            })?;
            let name = d.group().name(g).to_string();
            Ok((
                d.translate(g, Side::Right),
                format!("catalog AII.17 translated by {name} in Z3^2 x Z2^2"),
            ))
        }
        _ => unreachable!("seeds are 1, 2, 3"),
    }
}

fn realize(plan: &Plan) -> Result<(DifferenceSet, Provenance), FamilyError> {
    match plan {
        Plan::Seed(u) => {
            let (d, description) = seed(*u)?;
            let prov = Provenance {
                u: *u,
                params: d.params(),
                group_order: d.group().order(),
                step: Step::Seed { description },
            };
            Ok((d, prov))
        }
        Plan::Compose(u, left, right) => {
            let (d1, p1) = realize(left)?;
            let (d2, p2) = realize(right)?;
            let d = menon_complement_product(&d1, &d2)?;
            let prov = Provenance {
                u: *u,
                params: d.params(),
                group_order: d.group().order(),
                step: Step::Composition {
                    left: Box::new(p1),
                    right: Box::new(p2),
                },
            };
            Ok((d, prov))
        }
    }
}

/// A reversible `(4u², 2u²-u, u²-u)` difference set with its composition tree.
pub fn generate_family_member(
    u: usize,
    opts: FamilyOptions,
) -> Result<(DifferenceSet, Provenance), FamilyError> {
    check_u(u, opts)?;
    let plan = Planner {
        memo: HashMap::new(),
    }
    .plan(u)
    .ok_or(FamilyError::Unreachable { u })?;
    let (d, prov) = realize(&plan)?;
    if !d.is_reversible() {
        return Err(FamilyError::TheoremViolation(format!(
            "family member for u = {u} is not reversible"
        )));
    }
    if u > 1 {
        d.reversibility_sanity()?;
    }
    Ok((d, prov))
}

/// `TA(4u²-1, u², u²+u, u²-u, u² : (2u²-u) x (2u²+u))`.
pub fn family_ta_params(u: usize) -> TaParams {
    let s = u * u;
    TaParams {
        v: 4 * s - 1,
        k: s,
        lambda_rr: s + u,
        lambda_cc: s - u,
        lambda_rc: s,
        rows: 2 * s - u,
        cols: 2 * s + u,
    }
}

#[derive(Debug, Clone)]
pub struct FamilyArray {
    pub set: DifferenceSet,
    pub provenance: Provenance,
    pub array: RowColumnArray,
    pub verdict: ArrayVerdict,
    pub params: TaParams,
}

/// Builds `A(G,D)` for the family member, verifies it by counting, checks it
/// against the Youden-square route (column at the identity deleted), and
/// checks the counted parameters against the closed formula.
pub fn family_triple_array(u: usize, opts: FamilyOptions) -> Result<FamilyArray, FamilyError> {
    check_u(u, opts)?;
    if u == 1 {
        return Err(FamilyError::Degenerate);
    }
    let (set, provenance) = generate_family_member(u, opts)?;
    let array = direct_construct(&set, None);
    let verdict = array.verify()?;

    let youden =
        build_youden(&set, None).map_err(|e| FamilyError::TheoremViolation(e.to_string()))?;
    let rl = youden
        .delete_column(set.group().identity())
        .map_err(|e| FamilyError::TheoremViolation(e.to_string()))?;
    let rl_verdict = rl.verify()?;
    if rl_verdict.counts() != verdict.counts() {
        return Err(FamilyError::TheoremViolation(format!(
            "u = {u}: Youden route gives {}, direct route gives {}",
            rl_verdict.summary(),
            verdict.summary()
        )));
    }

    let expected = family_ta_params(u);
    let counted = verdict
        .ta_params()
        .ok_or_else(|| FamilyError::TheoremViolation(format!("u = {u}: {}", verdict.summary())))?;
    let derived = derive_parameters(counted.rows, counted.cols, counted.k)?;
    if counted != expected || derived != expected {
        return Err(FamilyError::TheoremViolation(format!(
            "u = {u}: counted {counted}, expected {expected}"
        )));
    }
    Ok(FamilyArray {
        set,
        provenance,
        array,
        verdict,
        params: counted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Reachability by forward closure from the seeds, independent of the planner.
    fn closure(limit: usize) -> Vec<usize> {
        let mut reach = vec![false; limit + 1];
        reach[1..=3].fill(true);
        loop {
            let mut changed = false;
            for a in 1..=limit {
                for b in 1..=limit {
                    let u = 2 * a * b;
                    if u <= limit && reach[a] && reach[b] && !reach[u] {
                        reach[u] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        (1..=limit).filter(|&u| reach[u]).collect()
    }

    #[test]
    fn reachability() {
        let expected = closure(200);
        let got: Vec<usize> = (1..=200).filter(|&u| is_reachable(u)).collect();
        assert_eq!(got, expected);
        assert!(!is_reachable(9));
        assert!(!is_reachable(54));
        assert!(is_reachable(18));
        for u in 1..=200 {
            let (mut a, mut b, mut x) = (0, 0, u);
            while x % 2 == 0 {
                x /= 2;
                a += 1;
            }
            while x % 3 == 0 {
                x /= 3;
                b += 1;
            }
            let rule = u == 1 || u == 3 || (x == 1 && a >= 1 && b <= a + 1);
            assert_eq!(is_reachable(u), rule, "u = {u}");
        }
    }

    #[test]
    fn square_free_parts() {
        assert_eq!(square_free_part(12), 3);
        assert_eq!(square_free_part(5), 5);
        assert_eq!(square_free_part(9), 1);
        assert_eq!(square_free_part(18), 2);
        assert_eq!(square_free_part(1), 1);
    }

    #[test]
    fn unsupported_u() {
        let opts = FamilyOptions::default();
        assert_eq!(
            generate_family_member(5, opts).unwrap_err(),
            FamilyError::SquareFree { u: 5, part: 5 }
        );
        assert!(generate_family_member(5, opts)
            .unwrap_err()
            .to_string()
            .contains("square-free"));
        assert_eq!(
            generate_family_member(9, opts).unwrap_err(),
            FamilyError::Unreachable { u: 9 }
        );
        assert!(matches!(
            generate_family_member(16, opts),
            Err(FamilyError::TooLarge { u: 16, .. })
        ));
        assert_eq!(
            generate_family_member(0, opts).unwrap_err(),
            FamilyError::Zero
        );
        assert_eq!(
            family_triple_array(1, opts).unwrap_err(),
            FamilyError::Degenerate
        );
    }

    #[test]
    fn small_compositions() {
        let (one, _) = seed(1).unwrap();
        let d = menon_complement_product(&one, &one).unwrap();
        assert_eq!(d.params(), DsParams::new(16, 6, 2));
        assert!(d.is_reversible());

        let (three, _) = seed(3).unwrap();
        assert!(three.is_reversible());
        let d = menon_complement_product(&one, &three).unwrap();
        assert_eq!(d.params(), DsParams::new(144, 66, 30));
        assert!(d.is_reversible());

        let fano = catalog::load_entry("Fano").unwrap();
        assert!(matches!(
            menon_complement_product(&fano, &one),
            Err(FamilyError::NotHadamard { .. })
        ));
    }

    #[test]
    fn members_and_provenance() {
        let opts = FamilyOptions::default();
        for u in [2, 3, 4, 6] {
            let (d, prov) = generate_family_member(u, opts).unwrap();
            assert_eq!(d.params(), hadamard_params(u));
            assert!(d.is_reversible());
            assert_eq!(prov.u, u);
            assert!(d.group_ring_identity_holds());
        }
        let (_, prov) = generate_family_member(6, opts).unwrap();
        match prov.step {
            Step::Composition { left, right } => {
                assert_eq!((left.u, right.u), (1, 3));
            }
            Step::Seed { .. } => panic!("u = 6 is composite"),
        }
    }

    #[test]
    fn formula_instances() {
        assert_eq!(family_ta_params(2).to_string(), "TA(15,4,6,2,4 : 6x10)");
        assert_eq!(family_ta_params(3).to_string(), "TA(35,9,12,6,9 : 15x21)");
        assert_eq!(
            family_ta_params(6).to_string(),
            "TA(143,36,42,30,36 : 66x78)"
        );
    }

    #[test]
    fn youden_route_matches_direct_construction() {
        for u in [2, 3] {
            let (d, _) = generate_family_member(u, FamilyOptions::default()).unwrap();
            let y = build_youden(&d, None).unwrap();
            let rl = y.delete_column(d.group().identity()).unwrap();
            assert_eq!(rl.rl_to_standard().unwrap(), direct_construct(&d, None));
        }
        for e in catalog::list_entries() {
            let d = e.load().unwrap();
            let y = build_youden(&d, None).unwrap();
            let rl = y.delete_column(d.group().identity()).unwrap();
            assert_eq!(
                rl.rl_to_standard().unwrap(),
                direct_construct(&d, None),
                "{}",
                e.id
            );
        }
    }

    #[test]
    fn family_arrays() {
        for u in [2, 3] {
            let fa = family_triple_array(u, FamilyOptions::default()).unwrap();
            assert_eq!(fa.params, family_ta_params(u));
            assert!(fa.params.lambda_rc_identity_holds());
            assert_eq!((fa.params.rows + fa.params.cols) % 2, 0);
        }
    }
}
