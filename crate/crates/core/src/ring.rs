//! The integral group ring ZG over a [`FiniteGroup`].

use std::sync::Arc;

use thiserror::Error;

use crate::group::FiniteGroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupRingError {
    #[error("group ring operands belong to different groups")]
    MismatchedGroup,
    #[error("coefficient vector has length {got}, group order is {order}")]
    WrongLength { got: usize, order: usize },
}

/// A formal sum `Σ a_g g` with integer coefficients, one per group element.
#[derive(Debug, Clone)]
pub struct GroupRingElement {
    group: Arc<FiniteGroup>,
    coeffs: Vec<i64>,
}

impl PartialEq for GroupRingElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.group, &other.group) || self.group == other.group)
            && self.coeffs == other.coeffs
    }
}

impl Eq for GroupRingElement {}

impl GroupRingElement {
    pub fn zero(group: &Arc<FiniteGroup>) -> Self {
        Self {
            group: Arc::clone(group),
            coeffs: vec![0; group.order()],
        }
    }

    /// The ring identity `1_G`.
    pub fn one(group: &Arc<FiniteGroup>) -> Self {
        let mut e = Self::zero(group);
        e.coeffs[group.identity()] = 1;
        e
    }

    /// The element `G = Σ_g g`.
    pub fn group_sum(group: &Arc<FiniteGroup>) -> Self {
        Self {
            group: Arc::clone(group),
            coeffs: vec![1; group.order()],
        }
    }

    /// Embeds a subset as the sum of its elements. Repeated indices accumulate.
    pub fn from_subset(group: &Arc<FiniteGroup>, subset: &[usize]) -> Self {
        let mut e = Self::zero(group);
        for &x in subset {
            e.coeffs[x] += 1;
        }
        e
    }

    pub fn from_coeffs(group: &Arc<FiniteGroup>, coeffs: Vec<i64>) -> Result<Self, GroupRingError> {
        if coeffs.len() != group.order() {
            return Err(GroupRingError::WrongLength {
                got: coeffs.len(),
                order: group.order(),
            });
        }
        Ok(Self {
            group: Arc::clone(group),
            coeffs,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, x: usize) -> i64 {
        self.coeffs[x]
    }

    fn same_group(&self, other: &Self) -> Result<(), GroupRingError> {
        if Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group {
            Ok(())
        } else {
            Err(GroupRingError::MismatchedGroup)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, GroupRingError> {
        self.same_group(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            group: Arc::clone(&self.group),
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GroupRingError> {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, s: i64) -> Self {
        Self {
            group: Arc::clone(&self.group),
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }

    /// Convolution `Σ_h (Σ_{fg=h} a_f b_g) h`. Order of operands matters.
    pub fn mul(&self, other: &Self) -> Result<Self, GroupRingError> {
        self.same_group(other)?;
        let g = &self.group;
        let mut coeffs = vec![0i64; g.order()];
        let rhs: Vec<(usize, i64)> = other.support_with_coeffs().collect();
        for (f, a) in self.support_with_coeffs() {
            for &(h, b) in &rhs {
                coeffs[g.mul(f, h)] += a * b;
            }
        }
        Ok(Self {
            group: Arc::clone(g),
            coeffs,
        })
    }

    /// `A^(t) = Σ a_g g^t`; `t = -1` gives the inverse image.
    pub fn power_map(&self, t: i64) -> Self {
        let g = &self.group;
        let mut coeffs = vec![0i64; g.order()];
        for (x, a) in self.support_with_coeffs() {
            coeffs[g.pow(x, t)] += a;
        }
        Self {
            group: Arc::clone(g),
            coeffs,
        }
    }

    /// `|A| = Σ a_g`.
    pub fn cardinality(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn support(&self) -> Vec<usize> {
        self.support_with_coeffs().map(|(x, _)| x).collect()
    }

    fn support_with_coeffs(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(x, &a)| (x, a))
    }
}
