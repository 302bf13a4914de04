//! Nested sets of the simple-root part of a building set.

use thiserror::Error;

use crate::flats::{mask_bits, BuildingSet, Flat, IndexMask};

pub const DEFAULT_NESTED_CAP: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NestedError {
    #[error("more than {cap} nested sets")]
    TooMany { cap: usize },
}

/// A family of subsets of a finite index set, stored as bitmasks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CombinatorialBuildingSet {
    ground: IndexMask,
    members: Vec<IndexMask>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("singleton {0} missing")]
    MissingSingleton(usize),
    #[error("union of overlapping members {0:#b} and {1:#b} missing")]
    NotUnionClosed(IndexMask, IndexMask),
    #[error("member {0:#b} leaves the ground set")]
    OutsideGround(IndexMask),
}

impl CombinatorialBuildingSet {
    pub fn new(ground: IndexMask, mut members: Vec<IndexMask>) -> Self {
        members.retain(|&m| m != 0);
        members.sort_unstable_by_key(|&m| (m.count_ones(), m));
        members.dedup();
        CombinatorialBuildingSet { ground, members }
    }

    pub fn ground(&self) -> IndexMask {
        self.ground
    }

    /// Members sorted by (size, mask).
    pub fn members(&self) -> &[IndexMask] {
        &self.members
    }

    pub fn contains(&self, m: IndexMask) -> bool {
        self.members.binary_search_by_key(&(m.count_ones(), m), |&x| (x.count_ones(), x)).is_ok()
    }

    pub fn index_of(&self, m: IndexMask) -> Option<usize> {
        self.members.binary_search_by_key(&(m.count_ones(), m), |&x| (x.count_ones(), x)).ok()
    }

    pub fn check_axioms(&self) -> Result<(), AxiomError> {
        for &m in &self.members {
            if m & !self.ground != 0 {
                return Err(AxiomError::OutsideGround(m));
            }
        }
        for i in mask_bits(self.ground) {
            if !self.contains(1 << i) {
                return Err(AxiomError::MissingSingleton(i));
            }
        }
        for (k, &a) in self.members.iter().enumerate() {
            for &b in &self.members[k + 1..] {
                if a & b != 0 && !self.contains(a | b) {
                    return Err(AxiomError::NotUnionClosed(a, b));
                }
            }
        }
        Ok(())
    }

    /// Members not contained in any other member.
    pub fn maximal_members(&self) -> Vec<IndexMask> {
        self.members
            .iter()
            .copied()
            .filter(|&a| !self.members.iter().any(|&b| b != a && a & !b == 0))
            .collect()
    }

    /// Image after removing the indices in `d`; empty sets are dropped.
    pub fn quotient(&self, d: IndexMask) -> CombinatorialBuildingSet {
        CombinatorialBuildingSet::new(self.ground & !d, self.members.iter().map(|&m| m & !d).collect())
    }

    /// Nestedness in the set-family sense: laminar, antichain unions outside, maximal members present.
    pub fn is_nested(&self, s: &[IndexMask]) -> bool {
        if !s.iter().all(|&m| self.contains(m)) {
            return false;
        }
        for (k, &a) in s.iter().enumerate() {
            for &b in &s[k + 1..] {
                let comparable = a & !b == 0 || b & !a == 0;
                if !comparable && a & b != 0 {
                    return false;
                }
            }
        }
        if !antichain_unions_avoid(s, |u| self.contains(u)) {
            return false;
        }
        self.maximal_members().iter().all(|m| s.contains(m))
    }

    /// All nested sets, each sorted by member order.
    pub fn nested_sets(&self, cap: usize) -> Result<Vec<Vec<IndexMask>>, NestedError> {
        let maximal = self.maximal_members();
        let candidates: Vec<IndexMask> = self.members.iter().copied().filter(|m| !maximal.contains(m)).collect();
        let mut out = Vec::new();
        let mut current = maximal.clone();
        if !antichain_unions_avoid(&current, |u| self.contains(u)) {
            return Ok(out);
        }
        dfs(&candidates, 0, &mut current, &mut out, cap, &|s: &[IndexMask], x: IndexMask| {
            s.iter().all(|&a| a & !x == 0 || x & !a == 0 || a & x == 0) && new_antichains_avoid(s, x, |u| self.contains(u))
        })?;
        for s in &mut out {
            s.sort_unstable_by_key(|&m| (m.count_ones(), m));
        }
        out.sort();
        Ok(out)
    }
}

fn incomparable(a: IndexMask, b: IndexMask) -> bool {
    a & !b != 0 && b & !a != 0
}

fn antichain_unions_avoid(s: &[IndexMask], inside: impl Fn(IndexMask) -> bool) -> bool {
    (0..s.len()).all(|k| new_antichains_avoid(&s[..k], s[k], &inside))
}

/// Checks antichains of size at least two that contain `x` and otherwise draw from `s`.
fn new_antichains_avoid(s: &[IndexMask], x: IndexMask, inside: impl Fn(IndexMask) -> bool) -> bool {
    let pool: Vec<IndexMask> = s.iter().copied().filter(|&a| incomparable(a, x)).collect();
    fn rec(pool: &[IndexMask], start: usize, chosen: &mut Vec<IndexMask>, union: IndexMask, inside: &dyn Fn(IndexMask) -> bool) -> bool {
        for k in start..pool.len() {
            let a = pool[k];
            if chosen.iter().any(|&c| !incomparable(c, a)) {
                continue;
            }
            let u = union | a;
            if inside(u) {
                return false;
            }
            chosen.push(a);
            let ok = rec(pool, k + 1, chosen, u, inside);
            chosen.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    rec(&pool, 0, &mut vec![x], x, &inside)
}

fn dfs(
    candidates: &[IndexMask],
    start: usize,
    current: &mut Vec<IndexMask>,
    out: &mut Vec<Vec<IndexMask>>,
    cap: usize,
    accepts: &dyn Fn(&[IndexMask], IndexMask) -> bool,
) -> Result<(), NestedError> {
    out.push(current.clone());
    if out.len() > cap {
        return Err(NestedError::TooMany { cap });
    }
    for k in start..candidates.len() {
        let x = candidates[k];
        if accepts(current, x) {
            current.push(x);
            dfs(candidates, k + 1, current, out, cap, accepts)?;
            current.pop();
        }
    }
    Ok(())
}

/// A nested set of fund flats, as sorted fund indices; always contains V.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NestedSet {
    members: Vec<usize>,
}

impl NestedSet {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        NestedSet { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn is_subset(&self, other: &NestedSet) -> bool {
        self.members.iter().all(|&i| other.contains(i))
    }

    pub fn flats(&self, g: &BuildingSet) -> Vec<Flat> {
        self.members.iter().map(|&i| g.fund()[i]).collect()
    }

    pub fn masks(&self, g: &BuildingSet) -> Vec<IndexMask> {
        self.members.iter().map(|&i| g.fund_masks()[i]).collect()
    }

    /// Members not containing another member.
    pub fn minimal_members(&self, g: &BuildingSet) -> Vec<usize> {
        let m = g.fund_masks();
        self.members
            .iter()
            .copied()
            .filter(|&a| !self.members.iter().any(|&b| b != a && m[b] & !m[a] == 0))
            .collect()
    }
}

fn v_index(g: &BuildingSet) -> usize {
    g.fund().len() - 1
}

/// Nestedness of fund flats: every antichain of two or more sums outside the building set.
pub fn is_nested(g: &BuildingSet, s: &[usize]) -> bool {
    let masks: Vec<IndexMask> = s.iter().map(|&i| g.fund_masks()[i]).collect();
    antichain_unions_avoid(&masks, |u| g.fund_index_of_mask(u).is_some())
}

/// Every nested set of fund flats that contains V, in depth-first order over sorted flats.
pub fn enumerate_nested_sets(g: &BuildingSet, cap: usize) -> Result<Vec<NestedSet>, NestedError> {
    let v = v_index(g);
    let masks = g.fund_masks();
    let mut out = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    enumerate_rec(g, masks, v, 0, &mut current, &mut out, cap)?;
    Ok(out)
}

fn enumerate_rec(
    g: &BuildingSet,
    masks: &[IndexMask],
    v: usize,
    start: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<NestedSet>,
    cap: usize,
) -> Result<(), NestedError> {
    let mut with_v = current.clone();
    with_v.push(v);
    out.push(NestedSet::new(with_v));
    if out.len() > cap {
        return Err(NestedError::TooMany { cap });
    }
    let chosen: Vec<IndexMask> = current.iter().map(|&i| masks[i]).collect();
    for k in start..v {
        if new_antichains_avoid(&chosen, masks[k], |u| g.fund_index_of_mask(u).is_some()) {
            current.push(k);
            enumerate_rec(g, masks, v, k + 1, current, out, cap)?;
            current.pop();
        }
    }
    Ok(())
}

/// Nested sets that admit no proper nested extension.
pub fn enumerate_maximal_nested_sets(g: &BuildingSet, cap: usize) -> Result<Vec<NestedSet>, NestedError> {
    let all = enumerate_nested_sets(g, cap)?;
    Ok(maximal_of(g, all))
}

pub fn maximal_of(g: &BuildingSet, all: Vec<NestedSet>) -> Vec<NestedSet> {
    let v = v_index(g);
    all.into_iter()
        .filter(|s| {
            (0..v).all(|k| {
                if s.contains(k) {
                    return true;
                }
                let mut t = s.members().to_vec();
                t.push(k);
                !is_nested(g, &t)
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flats::DEFAULT_FLAT_CAP;
    use crate::root_system::RootSystem;

    fn build(s: &str, maximal: bool) -> BuildingSet {
        let rs = RootSystem::from_spec_str(s).unwrap();
        if maximal {
            BuildingSet::maximal(&rs, DEFAULT_FLAT_CAP).unwrap()
        } else {
            BuildingSet::minimal(&rs, DEFAULT_FLAT_CAP).unwrap()
        }
    }

    fn idx(g: &BuildingSet, mask: IndexMask) -> usize {
        g.fund_index_of_mask(mask).unwrap()
    }

    #[test]
    fn nestedness_examples() {
        let min = build("A3", false);
        let max = build("A3", true);
        let s = [idx(&min, 0b111), idx(&min, 0b001), idx(&min, 0b100)];
        assert!(is_nested(&min, &s));
        let t = [idx(&max, 0b111), idx(&max, 0b001), idx(&max, 0b100)];
        assert!(!is_nested(&max, &t));
        let chain = [idx(&max, 0b111), idx(&max, 0b011), idx(&max, 0b001)];
        assert!(is_nested(&max, &chain));
    }

    #[test]
    fn small_counts() {
        let a2 = build("A2", false);
        assert_eq!(enumerate_nested_sets(&a2, DEFAULT_NESTED_CAP).unwrap().len(), 3);
        assert_eq!(enumerate_maximal_nested_sets(&a2, DEFAULT_NESTED_CAP).unwrap().len(), 2);
        let min = build("A3", false);
        let all = enumerate_nested_sets(&min, DEFAULT_NESTED_CAP).unwrap();
        assert_eq!(all.iter().filter(|s| s.len() == 2).count(), 5);
        assert_eq!(enumerate_maximal_nested_sets(&min, DEFAULT_NESTED_CAP).unwrap().len(), 5);
        let max = build("A3", true);
        assert_eq!(enumerate_maximal_nested_sets(&max, DEFAULT_NESTED_CAP).unwrap().len(), 6);
    }

    #[test]
    fn catalan_for_type_a() {
        let catalan = [1usize, 1, 2, 5, 14, 42];
        for n in 2..=5 {
            let g = build(&format!("A{n}"), false);
            assert_eq!(enumerate_maximal_nested_sets(&g, DEFAULT_NESTED_CAP).unwrap().len(), catalan[n]);
        }
    }

    #[test]
    fn maximal_sets_have_rank_size() {
        for (s, m) in [("A3", true), ("B3", false), ("B3", true), ("D4", false), ("A2xA1", false), ("A1^3", false)] {
            let g = build(s, m);
            for t in enumerate_maximal_nested_sets(&g, DEFAULT_NESTED_CAP).unwrap() {
                assert_eq!(t.len(), g.rank(), "{s}");
                assert!(t.contains(g.fund().len() - 1));
            }
        }
    }

    #[test]
    fn maximal_building_gives_chains() {
        let g = build("B3", true);
        for s in enumerate_nested_sets(&g, DEFAULT_NESTED_CAP).unwrap() {
            let m = s.masks(&g);
            for a in &m {
                for b in &m {
                    assert!(a & !b == 0 || b & !a == 0);
                }
            }
        }
    }

    #[test]
    fn interval_nested_sets_match_associahedron() {
        let rs = RootSystem::from_spec_str("A1^3").unwrap();
        let g = BuildingSet::interval(&rs).unwrap();
        let all = enumerate_nested_sets(&g, DEFAULT_NESTED_CAP).unwrap();
        // the pentagon: 5 vertices, 5 edges, one 2-face
        assert_eq!(all.iter().filter(|s| s.len() == 3).count(), 5);
        assert_eq!(all.iter().filter(|s| s.len() == 2).count(), 5);
        assert_eq!(all.iter().filter(|s| s.len() == 1).count(), 1);
    }

    #[test]
    fn combinatorial_forms() {
        let min = build("A3", false);
        let c = min.to_combinatorial();
        assert_eq!(c.members(), &[0b001, 0b010, 0b100, 0b011, 0b110, 0b111]);
        c.check_axioms().unwrap();
        let max = build("A3", true);
        assert_eq!(max.to_combinatorial().members().len(), 7);
        let bad = CombinatorialBuildingSet::new(0b111, vec![0b001, 0b010, 0b100, 0b011, 0b110]);
        assert_eq!(bad.check_axioms(), Err(AxiomError::NotUnionClosed(0b011, 0b110)));
        let gap = CombinatorialBuildingSet::new(0b11, vec![0b01]);
        assert_eq!(gap.check_axioms(), Err(AxiomError::MissingSingleton(1)));
    }

    #[test]
    fn geometric_and_combinatorial_nested_agree() {
        for (s, m) in [("A3", false), ("A3", true), ("B3", false), ("D4", false), ("A2xA1", false)] {
            let g = build(s, m);
            let c = g.to_combinatorial();
            let geo: Vec<Vec<IndexMask>> = enumerate_nested_sets(&g, DEFAULT_NESTED_CAP)
                .unwrap()
                .into_iter()
                .map(|t| {
                    let mut m = t.masks(&g);
                    m.sort_unstable_by_key(|&x| (x.count_ones(), x));
                    m
                })
                .collect();
            for t in &geo {
                assert!(c.is_nested(t));
            }
            let mut geo_sorted = geo.clone();
            geo_sorted.sort();
            assert_eq!(c.nested_sets(DEFAULT_NESTED_CAP).unwrap(), geo_sorted, "{s}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = build("A3", false);
        assert_eq!(enumerate_nested_sets(&g, 3).unwrap_err(), NestedError::TooMany { cap: 3 });
    }
}
