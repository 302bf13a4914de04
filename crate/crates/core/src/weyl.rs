//! The finite Weyl group as integer matrices on root coordinates.

use std::collections::HashMap;

use num_traits::Zero;
use thiserror::Error;

use crate::exact::{rat, Rat, RatVec};
use crate::root_system::{classical_group_order, RootSystem};

pub const DEFAULT_GROUP_CAP: usize = 50_000;
const TABLE_LIMIT: usize = 1_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("Weyl group has order {order}, above the cap {cap}")]
    GroupTooLarge { order: u128, cap: usize },
}

/// A group element: its integer matrix (column `j` is the image of `a_j`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub id: usize,
    pub matrix: Vec<i64>,
}

/// Membership set of a subgroup, with its sorted element ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl Subgroup {
    fn from_members(mut members: Vec<usize>, order_of_w: usize) -> Self {
        members.sort_unstable();
        members.dedup();
        let mut mask = vec![false; order_of_w];
        for &m in &members {
            mask[m] = true;
        }
        Subgroup { members, mask }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, g: usize) -> bool {
        self.mask[g]
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    n: usize,
    elements: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    generators: Vec<usize>,
    inverse: Vec<usize>,
    table: Option<Vec<u32>>,
}

fn mat_mul(n: usize, a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut c = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    c
}

impl WeylGroup {
    /// Enumerates W by breadth-first closure over the simple reflections.
    pub fn enumerate(rs: &RootSystem, cap: usize) -> Result<Self, WeylError> {
        let predicted: u128 = rs.components().iter().map(|c| classical_group_order(c.kind, c.rank)).product();
        if predicted > cap as u128 {
            return Err(WeylError::GroupTooLarge { order: predicted, cap });
        }
        let n = rs.rank();
        let identity: Vec<i64> = (0..n * n).map(|k| i64::from(k / n == k % n)).collect();
        let gens: Vec<Vec<i64>> = (0..n).map(|i| rs.reflection_matrix(&unit(n, i))).collect();
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::new();
        index.insert(identity, 0usize);
        let mut k = 0;
        while k < elements.len() {
            for g in &gens {
                let prod = mat_mul(n, g, &elements[k]);
                if !index.contains_key(&prod) {
                    index.insert(prod.clone(), elements.len());
                    elements.push(prod);
                }
            }
            k += 1;
        }
        debug_assert_eq!(elements.len() as u128, predicted);
        let generators = gens.iter().map(|g| index[g]).collect();
        let mut w = WeylGroup { n, elements, index, generators, inverse: Vec::new(), table: None };
        w.inverse = (0..w.order())
            .map(|a| {
                // M^T G M = G gives M^{-1} = G^{-1} M^T G; search instead via the
                // index since the group is explicit.
                let m = &w.elements[a];
                (0..w.order())
                    .find(|&b| mat_mul(n, m, &w.elements[b]) == w.elements[0])
                    .expect("group closed under inverses")
            })
            .collect::<Vec<_>>();
        if w.order() <= TABLE_LIMIT {
            let ord = w.order();
            let mut table = vec![0u32; ord * ord];
            for a in 0..ord {
                for b in 0..ord {
                    table[a * ord + b] = w.lookup_product(a, b) as u32;
                }
            }
            w.table = Some(table);
        }
        w.check_invariants(rs);
        Ok(w)
    }

    fn check_invariants(&self, rs: &RootSystem) {
        let n = self.n;
        for m in &self.elements {
            for i in 0..n {
                for j in 0..n {
                    let col_i: Vec<i64> = (0..n).map(|r| m[r * n + i]).collect();
                    let col_j: Vec<i64> = (0..n).map(|r| m[r * n + j]).collect();
                    assert_eq!(rs.inner_int(&col_i, &col_j), rs.gram()[i][j], "element does not preserve Gram");
                }
            }
        }
    }

    fn lookup_product(&self, a: usize, b: usize) -> usize {
        self.index[&mat_mul(self.n, &self.elements[a], &self.elements[b])]
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn matrix(&self, g: usize) -> &[i64] {
        &self.elements[g]
    }

    pub fn element(&self, g: usize) -> GroupElement {
        GroupElement { id: g, matrix: self.elements[g].clone() }
    }

    pub fn id_of(&self, matrix: &[i64]) -> Option<usize> {
        self.index.get(matrix).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.lookup_product(a, b),
        }
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn act_int(&self, g: usize, x: &[i64]) -> Vec<i64> {
        let n = self.n;
        let m = &self.elements[g];
        (0..n).map(|r| (0..n).map(|c| m[r * n + c] * x[c]).sum()).collect()
    }

    pub fn act(&self, g: usize, x: &RatVec) -> RatVec {
        let n = self.n;
        let m = &self.elements[g];
        RatVec::new(
            (0..n)
                .map(|r| {
                    (0..n).fold(Rat::zero(), |acc, c| {
                        let e = m[r * n + c];
                        if e == 0 {
                            acc
                        } else {
                            acc + &x[c] * rat(e)
                        }
                    })
                })
                .collect(),
        )
    }

    /// Image of positive root `i`, as a positive-root index and a sign.
    pub fn act_root(&self, rs: &RootSystem, g: usize, i: usize) -> (usize, bool) {
        rs.signed_root_index(&self.act_int(g, rs.root(i))).expect("W permutes the roots")
    }

    /// Closure of a generating set into a subgroup.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut seen = vec![false; self.order()];
        let mut members = vec![0usize];
        seen[0] = true;
        let mut k = 0;
        while k < members.len() {
            for &g in gens {
                let p = self.mul(g, members[k]);
                if !seen[p] {
                    seen[p] = true;
                    members.push(p);
                }
            }
            k += 1;
        }
        Subgroup::from_members(members, self.order())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_members(vec![0], self.order())
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_members((0..self.order()).collect(), self.order())
    }

    /// Subgroup generated by the reflections in the given positive roots.
    pub fn reflection_subgroup(&self, rs: &RootSystem, roots: impl IntoIterator<Item = usize>) -> Subgroup {
        let gens: Vec<usize> = roots
            .into_iter()
            .map(|i| self.id_of(&rs.reflection_matrix(rs.root(i))).expect("reflection in W"))
            .collect();
        self.generate(&gens)
    }

    /// Elementwise product `H1 H2 ... Hk` of commuting subgroups.
    pub fn product(&self, parts: &[&Subgroup]) -> Subgroup {
        let mut members = vec![0usize];
        for h in parts {
            let mut next = Vec::with_capacity(members.len() * h.order());
            for &a in &members {
                for &b in h.members() {
                    next.push(self.mul(a, b));
                }
            }
            next.sort_unstable();
            next.dedup();
            members = next;
        }
        Subgroup::from_members(members, self.order())
    }

    pub fn coset_index(&self, h: &Subgroup) -> usize {
        self.order() / h.order()
    }

    /// Minimal element of the left coset `g H` in lexicographic matrix order.
    pub fn canonical_coset_rep(&self, g: usize, h: &Subgroup) -> usize {
        h.members()
            .iter()
            .map(|&x| self.mul(g, x))
            .min_by(|&a, &b| self.elements[a].cmp(&self.elements[b]))
            .expect("subgroup contains the identity")
    }

    /// Canonical representatives of all left cosets `g H`, sorted by id.
    pub fn coset_reps(&self, h: &Subgroup) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        let mut reps = Vec::with_capacity(self.coset_index(h));
        for g in 0..self.order() {
            if seen[g] {
                continue;
            }
            let mut best = g;
            for &x in h.members() {
                let p = self.mul(g, x);
                seen[p] = true;
                if self.elements[p] < self.elements[best] {
                    best = p;
                }
            }
            reps.push(best);
        }
        reps.sort_unstable();
        reps
    }

    /// True when `g H` is contained in `k K`.
    pub fn coset_contained(&self, g: usize, h: &Subgroup, k: usize, big: &Subgroup) -> bool {
        h.is_subgroup_of(big) && big.contains(self.mul(self.inverse(k), g))
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    (0..n).map(|k| i64::from(k == i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RatVec;

    fn group(s: &str) -> (RootSystem, WeylGroup) {
        let rs = RootSystem::from_spec_str(s).unwrap();
        let w = WeylGroup::enumerate(&rs, DEFAULT_GROUP_CAP).unwrap();
        (rs, w)
    }

    #[test]
    fn orders() {
        assert_eq!(group("A2").1.order(), 6);
        assert_eq!(group("A3").1.order(), 24);
        assert_eq!(group("B3").1.order(), 48);
        assert_eq!(group("D4").1.order(), 192);
        assert_eq!(group("A1^3").1.order(), 8);
        assert_eq!(group("C3").1.order(), 48);
    }

    #[test]
    fn cap_is_enforced() {
        let rs = RootSystem::from_spec_str("A5").unwrap();
        assert_eq!(
            WeylGroup::enumerate(&rs, 100).unwrap_err(),
            WeylError::GroupTooLarge { order: 720, cap: 100 }
        );
    }

    #[test]
    fn parabolic_orders_in_a3() {
        let (rs, w) = group("A3");
        let h1 = w.reflection_subgroup(&rs, [0]);
        let h12 = w.reflection_subgroup(&rs, [0, 1, 3]);
        let h13 = w.reflection_subgroup(&rs, [0, 2]);
        assert_eq!(h1.order(), 2);
        assert_eq!(h12.order(), 6);
        assert_eq!(h13.order(), 4);
        assert_eq!(w.coset_index(&h1), 12);
        assert_eq!(w.coset_index(&h12), 4);
        assert_eq!(w.coset_index(&w.trivial_subgroup()), 24);
        let p = w.product(&[&w.reflection_subgroup(&rs, [0]), &w.reflection_subgroup(&rs, [2])]);
        assert_eq!(p, h13);
    }

    #[test]
    fn group_axioms() {
        let (_, w) = group("B3");
        for a in 0..w.order() {
            assert_eq!(w.mul(a, w.inverse(a)), 0);
            assert_eq!(w.mul(0, a), a);
        }
        for a in (0..w.order()).step_by(5) {
            for b in (0..w.order()).step_by(7) {
                for c in (0..w.order()).step_by(11) {
                    assert_eq!(w.mul(w.mul(a, b), c), w.mul(a, w.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn reflections_act_as_expected() {
        let (rs, w) = group("A2");
        let s1 = w.generators()[0];
        assert_eq!(w.act(s1, &RatVec::from_ints(&[1, 0])), RatVec::from_ints(&[-1, 0]));
        let omega2 = rs.fundamental_weights()[1].clone();
        assert_eq!(w.act(s1, &omega2), omega2);
        assert_eq!(w.act(0, &omega2), omega2);
    }

    #[test]
    fn canonical_reps_constant_on_cosets() {
        let (rs, w) = group("A3");
        let h = w.reflection_subgroup(&rs, [0, 2]);
        for g in 0..w.order() {
            let r = w.canonical_coset_rep(g, &h);
            assert_eq!(w.canonical_coset_rep(r, &h), r);
            for &x in h.members() {
                assert_eq!(w.canonical_coset_rep(w.mul(g, x), &h), r);
            }
        }
        for &x in h.members() {
            assert_eq!(w.canonical_coset_rep(x, &h), w.canonical_coset_rep(0, &h));
        }
        let t = w.trivial_subgroup();
        assert!((0..w.order()).all(|g| w.canonical_coset_rep(g, &t) == g));
        assert_eq!(w.coset_reps(&h).len(), 6);
    }
}
