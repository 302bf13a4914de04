//! Flats of the root arrangement and building sets of flats.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::exact::Span;
use crate::nested::CombinatorialBuildingSet;
use crate::root_system::{DiagramAutomorphism, RootSystem, RootType};
use crate::weyl::WeylGroup;

pub const DEFAULT_FLAT_CAP: usize = 1 << 20;

/// Bitset over positive-root indices.
pub type RootSet = u128;

/// Bitset over simple-root indices.
pub type IndexMask = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlatsError {
    #[error("the arrangement has more than {cap} flats")]
    TooManyFlats { cap: usize },
    #[error("building set does not contain the whole space")]
    MissingV,
    #[error("flat {flat:?} maps to {image:?}, which is not in the family")]
    NotWInvariant { flat: Vec<usize>, image: Vec<usize> },
    #[error("flat {witness:?} is not the direct sum of the maximal family members inside it")]
    NotBuilding { witness: Vec<usize> },
    #[error("root set {0:?} is not closed under linear span")]
    NotAFlat(Vec<usize>),
    #[error("root index {0} out of range")]
    InvalidRootIndex(usize),
    #[error("interval building sets need a root system of type A1^n")]
    NotIntervalType,
    #[error("flat {0:?} is not in the building set")]
    NotMember(Vec<usize>),
}

/// A flat, stored as the set of positive roots it contains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flat {
    pub dim: usize,
    pub roots: RootSet,
}

impl Flat {
    pub const ZERO: Flat = Flat { dim: 0, roots: 0 };

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn contains(&self, other: &Flat) -> bool {
        other.roots & !self.roots == 0
    }

    pub fn contains_root(&self, i: usize) -> bool {
        self.roots >> i & 1 == 1
    }

    pub fn num_roots(&self) -> usize {
        self.roots.count_ones() as usize
    }

    pub fn root_indices(&self) -> Vec<usize> {
        bits(self.roots)
    }

    /// Simple-root indices contained in the flat.
    pub fn simple_mask(&self, rank: usize) -> IndexMask {
        let low = if rank >= 128 { u128::MAX } else { (1u128 << rank) - 1 };
        (self.roots & low) as IndexMask
    }

    /// True when the flat is spanned by the simple roots it contains.
    pub fn is_fund(&self, rank: usize) -> bool {
        self.simple_mask(rank).count_ones() as usize == self.dim
    }
}

pub(crate) fn bits(mut x: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(x.count_ones() as usize);
    while x != 0 {
        let i = x.trailing_zeros() as usize;
        out.push(i);
        x &= x - 1;
    }
    out
}

pub(crate) fn mask_bits(mut x: IndexMask) -> Vec<usize> {
    let mut out = Vec::with_capacity(x.count_ones() as usize);
    while x != 0 {
        out.push(x.trailing_zeros() as usize);
        x &= x - 1;
    }
    out
}

/// The flat spanned by the given positive roots.
pub fn flat_closure(rs: &RootSystem, roots: impl IntoIterator<Item = usize>) -> Flat {
    let mut span = Span::new();
    for i in roots {
        span.insert(&rs.root_vec(i));
    }
    let mut set: RootSet = 0;
    for i in 0..rs.num_positive_roots() {
        if span.contains(&rs.root_vec(i)) {
            set |= 1 << i;
        }
    }
    Flat { dim: span.dim(), roots: set }
}

pub fn flat_closure_mask(rs: &RootSystem, roots: RootSet) -> Flat {
    flat_closure(rs, bits(roots))
}

pub fn flat_sum(rs: &RootSystem, a: &Flat, b: &Flat) -> Flat {
    if a.contains(b) {
        return *a;
    }
    if b.contains(a) {
        return *b;
    }
    flat_closure_mask(rs, a.roots | b.roots)
}

pub fn whole_space(rs: &RootSystem) -> Flat {
    let m = rs.num_positive_roots();
    let roots = if m == 128 { u128::MAX } else { (1u128 << m) - 1 };
    Flat { dim: rs.rank(), roots }
}

pub fn span_of_simple(rs: &RootSystem, mask: IndexMask) -> Flat {
    flat_closure(rs, mask_bits(mask))
}

pub fn line(i: usize) -> Flat {
    Flat { dim: 1, roots: 1 << i }
}

/// Components of the flat's root subsystem, split by orthogonality.
pub fn irreducible_components(rs: &RootSystem, a: &Flat) -> Vec<Flat> {
    let roots = a.root_indices();
    let mut comp = vec![usize::MAX; roots.len()];
    let mut out = Vec::new();
    for start in 0..roots.len() {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[start] = id;
        let mut queue = VecDeque::from([start]);
        let mut set: RootSet = 0;
        while let Some(k) = queue.pop_front() {
            set |= 1 << roots[k];
            for j in 0..roots.len() {
                if comp[j] == usize::MAX && rs.inner_int(rs.root(roots[k]), rs.root(roots[j])) != 0 {
                    comp[j] = id;
                    queue.push_back(j);
                }
            }
        }
        out.push(flat_closure_mask(rs, set));
    }
    out.sort();
    out
}

pub fn is_irreducible(rs: &RootSystem, a: &Flat) -> bool {
    !a.is_zero() && irreducible_components(rs, a).len() == 1
}

/// Every nonzero flat of the arrangement, sorted by (dim, roots).
pub fn all_flats(rs: &RootSystem, cap: usize) -> Result<Vec<Flat>, FlatsError> {
    let m = rs.num_positive_roots();
    let mut seen: HashSet<RootSet> = HashSet::new();
    let mut layer: Vec<Flat> = (0..m).map(line).collect();
    let mut out = Vec::new();
    for f in &layer {
        seen.insert(f.roots);
    }
    while !layer.is_empty() {
        out.extend(layer.iter().copied());
        if out.len() > cap {
            return Err(FlatsError::TooManyFlats { cap });
        }
        let mut next = Vec::new();
        for f in &layer {
            for r in 0..m {
                if f.contains_root(r) {
                    continue;
                }
                let mut probe = f.roots | 1 << r;
                if seen.contains(&probe) {
                    continue;
                }
                let g = flat_closure_mask(rs, probe);
                probe = g.roots;
                if seen.insert(probe) {
                    next.push(g);
                }
            }
        }
        layer = next;
    }
    out.sort();
    Ok(out)
}

/// Permutation of positive-root indices induced by each simple reflection.
fn simple_root_permutations(rs: &RootSystem) -> Vec<Vec<usize>> {
    (0..rs.rank())
        .map(|i| {
            (0..rs.num_positive_roots())
                .map(|r| rs.signed_root_index(&rs.reflect_simple(i, rs.root(r))).expect("root image").0)
                .collect()
        })
        .collect()
}

fn permute_set(perm: &[usize], set: RootSet) -> RootSet {
    bits(set).into_iter().fold(0, |acc, r| acc | 1 << perm[r])
}

/// Image of a flat under a group element.
pub fn act_flat(rs: &RootSystem, w: &WeylGroup, g: usize, a: &Flat) -> Flat {
    let roots = a.root_indices().into_iter().fold(0u128, |acc, r| acc | 1 << w.act_root(rs, g, r).0);
    Flat { dim: a.dim, roots }
}

/// Image of a flat under a diagram automorphism.
pub fn automorphism_flat(rs: &RootSystem, gamma: &DiagramAutomorphism, a: &Flat) -> Flat {
    let roots = a.root_indices().into_iter().fold(0u128, |acc, r| {
        let img = rs.root_index(&gamma.apply_int(rs.root(r))).expect("automorphism permutes positive roots");
        acc | 1 << img
    });
    Flat { dim: a.dim, roots }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BuildingKind {
    Minimal,
    Maximal,
    Interval,
    Custom,
}

/// A validated W-invariant building set containing the whole space.
#[derive(Clone, Debug)]
pub struct BuildingSet {
    rank: usize,
    kind: BuildingKind,
    flats: Vec<Flat>,
    members: HashSet<RootSet>,
    fund: Vec<Flat>,
    fund_masks: Vec<IndexMask>,
    fund_by_mask: HashMap<IndexMask, usize>,
    decompositions: HashMap<RootSet, Vec<Flat>>,
}

impl BuildingSet {
    /// Checks the building axioms against the full list of arrangement flats.
    pub fn validate(
        rs: &RootSystem,
        lattice: &[Flat],
        family: &[Flat],
        kind: BuildingKind,
    ) -> Result<Self, FlatsError> {
        let v = whole_space(rs);
        let mut flats: Vec<Flat> = family.to_vec();
        flats.sort();
        flats.dedup();
        for f in &flats {
            if flat_closure_mask(rs, f.roots) != *f {
                return Err(FlatsError::NotAFlat(f.root_indices()));
            }
        }
        let members: HashSet<RootSet> = flats.iter().map(|f| f.roots).collect();
        if !members.contains(&v.roots) {
            return Err(FlatsError::MissingV);
        }
        for i in 0..rs.num_positive_roots() {
            if !members.contains(&line(i).roots) {
                return Err(FlatsError::NotBuilding { witness: vec![i] });
            }
        }
        let perms = simple_root_permutations(rs);
        for f in &flats {
            for p in &perms {
                let img = permute_set(p, f.roots);
                if !members.contains(&img) {
                    return Err(FlatsError::NotWInvariant { flat: f.root_indices(), image: bits(img) });
                }
            }
        }
        let mut decompositions = HashMap::with_capacity(lattice.len());
        for c in lattice {
            let parts = maximal_inside(&flats, c);
            let dim: usize = parts.iter().map(|p| p.dim).sum();
            let union = parts.iter().fold(0u128, |acc, p| acc | p.roots);
            if dim != c.dim || flat_closure_mask(rs, union).dim != c.dim {
                return Err(FlatsError::NotBuilding { witness: c.root_indices() });
            }
            decompositions.insert(c.roots, parts);
        }
        let n = rs.rank();
        let fund: Vec<Flat> = flats.iter().copied().filter(|f| f.is_fund(n)).collect();
        let fund_masks: Vec<IndexMask> = fund.iter().map(|f| f.simple_mask(n)).collect();
        let fund_by_mask = fund_masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        Ok(BuildingSet { rank: n, kind, flats, members, fund, fund_masks, fund_by_mask, decompositions })
    }

    pub fn maximal(rs: &RootSystem, cap: usize) -> Result<Self, FlatsError> {
        let lattice = all_flats(rs, cap)?;
        Self::validate(rs, &lattice, &lattice, BuildingKind::Maximal)
    }

    pub fn minimal(rs: &RootSystem, cap: usize) -> Result<Self, FlatsError> {
        let lattice = all_flats(rs, cap)?;
        let v = whole_space(rs);
        let mut family: Vec<Flat> = lattice.iter().copied().filter(|f| is_irreducible(rs, f)).collect();
        family.push(v);
        Self::validate(rs, &lattice, &family, BuildingKind::Minimal)
    }

    /// Flats spanned by consecutive simple roots, for `A1^n`.
    pub fn interval(rs: &RootSystem) -> Result<Self, FlatsError> {
        let n = rs.rank();
        if rs.num_positive_roots() != n || rs.components().iter().any(|c| c.kind != RootType::A || c.rank != 1) {
            return Err(FlatsError::NotIntervalType);
        }
        let lattice = all_flats(rs, DEFAULT_FLAT_CAP)?;
        let mut family = Vec::new();
        for i in 0..n {
            for j in i..n {
                let mask: IndexMask = ((1u64 << (j + 1)) - 1) & !((1u64 << i) - 1);
                family.push(span_of_simple(rs, mask));
            }
        }
        Self::validate(rs, &lattice, &family, BuildingKind::Interval)
    }

    /// Family given by lists of positive-root indices.
    pub fn from_root_lists(rs: &RootSystem, lists: &[Vec<usize>], cap: usize) -> Result<Self, FlatsError> {
        let m = rs.num_positive_roots();
        let mut family = Vec::with_capacity(lists.len());
        for l in lists {
            let mut set: RootSet = 0;
            for &i in l {
                if i >= m {
                    return Err(FlatsError::InvalidRootIndex(i));
                }
                set |= 1 << i;
            }
            let f = flat_closure_mask(rs, set);
            if f.roots != set {
                return Err(FlatsError::NotAFlat(l.clone()));
            }
            family.push(f);
        }
        let lattice = all_flats(rs, cap)?;
        Self::validate(rs, &lattice, &family, BuildingKind::Custom)
    }

    pub fn kind(&self) -> BuildingKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn contains(&self, f: &Flat) -> bool {
        self.members.contains(&f.roots)
    }

    pub fn whole(&self) -> Flat {
        *self.flats.last().expect("V is a member")
    }

    /// Members spanned by simple roots, sorted by (dim, roots).
    pub fn fund(&self) -> &[Flat] {
        &self.fund
    }

    pub fn fund_masks(&self) -> &[IndexMask] {
        &self.fund_masks
    }

    pub fn fund_index_of_mask(&self, mask: IndexMask) -> Option<usize> {
        self.fund_by_mask.get(&mask).copied()
    }

    pub fn fund_index(&self, f: &Flat) -> Option<usize> {
        self.fund_index_of_mask(f.simple_mask(self.rank)).filter(|&i| self.fund[i] == *f)
    }

    /// Maximal members contained in `c`, sorted.
    pub fn decomposition(&self, c: &Flat) -> Vec<Flat> {
        match self.decompositions.get(&c.roots) {
            Some(d) => d.clone(),
            None => maximal_inside(&self.flats, c),
        }
    }

    /// Fund-index decomposition of the span of the given simple roots.
    pub fn fund_decomposition(&self, mask: IndexMask) -> Vec<usize> {
        let mut parts: Vec<usize> = (0..self.fund.len())
            .filter(|&i| self.fund_masks[i] & !mask == 0)
            .collect();
        let all = parts.clone();
        parts.retain(|&i| {
            !all.iter().any(|&j| j != i && self.fund_masks[i] & !self.fund_masks[j] == 0)
        });
        parts
    }

    pub fn to_combinatorial(&self) -> CombinatorialBuildingSet {
        let ground = if self.rank == 64 { u64::MAX } else { (1u64 << self.rank) - 1 };
        CombinatorialBuildingSet::new(ground, self.fund_masks.clone())
    }

    /// Diagram automorphisms mapping the family onto itself.
    pub fn preserving_automorphisms(&self, rs: &RootSystem) -> Vec<DiagramAutomorphism> {
        rs.diagram_automorphisms()
            .into_iter()
            .filter(|g| self.flats.iter().all(|f| self.contains(&automorphism_flat(rs, g, f))))
            .collect()
    }

    /// Members inside a member `a`, as a building set over the subsystem on `a`.
    pub fn restrict(&self, rs: &RootSystem, a: &Flat) -> Result<Restriction, FlatsError> {
        if !self.contains(a) {
            return Err(FlatsError::NotMember(a.root_indices()));
        }
        let inside: Vec<usize> = a.root_indices();
        let simple: Vec<usize> = inside
            .iter()
            .copied()
            .filter(|&r| {
                !inside.iter().any(|&p| {
                    let diff: Vec<i64> = rs.root(r).iter().zip(rs.root(p)).map(|(x, y)| x - y).collect();
                    p != r && rs.root_index(&diff).is_some_and(|q| a.contains_root(q))
                })
            })
            .collect();
        let gram: Vec<Vec<i64>> = simple
            .iter()
            .map(|&i| simple.iter().map(|&j| rs.inner_int(rs.root(i), rs.root(j))).collect())
            .collect();
        let sub = RootSystem::from_gram(gram).expect("subsystem of a classical system");
        let n = rs.rank();
        let root_map: Vec<usize> = sub
            .positive_roots()
            .iter()
            .map(|c| {
                let mut v = vec![0i64; n];
                for (k, &coef) in c.iter().enumerate() {
                    for (t, x) in rs.root(simple[k]).iter().enumerate() {
                        v[t] += coef * x;
                    }
                }
                rs.root_index(&v).expect("subsystem root is a root")
            })
            .collect();
        let to_sub = |f: &Flat| -> Flat {
            let roots = root_map
                .iter()
                .enumerate()
                .fold(0u128, |acc, (k, &r)| if f.contains_root(r) { acc | 1 << k } else { acc });
            Flat { dim: f.dim, roots }
        };
        let family: Vec<Flat> = self.flats.iter().filter(|f| a.contains(f)).map(to_sub).collect();
        let lattice = all_flats(&sub, DEFAULT_FLAT_CAP)?;
        let kind = match self.kind {
            BuildingKind::Minimal | BuildingKind::Maximal => self.kind,
            _ => BuildingKind::Custom,
        };
        let building = BuildingSet::validate(&sub, &lattice, &family, kind)?;
        Ok(Restriction { root_system: sub, building, root_map, simple_roots: simple })
    }

    /// Image of the fund members in the quotient by the span of `d`.
    pub fn quotient(&self, d: IndexMask) -> CombinatorialBuildingSet {
        self.to_combinatorial().quotient(d)
    }
}

fn maximal_inside(flats: &[Flat], c: &Flat) -> Vec<Flat> {
    let inside: Vec<Flat> = flats.iter().copied().filter(|f| c.contains(f)).collect();
    let mut out: Vec<Flat> = inside
        .iter()
        .copied()
        .filter(|f| !inside.iter().any(|g| g != f && g.contains(f)))
        .collect();
    out.sort();
    out
}

/// A building set restricted to a member flat, with its own root system.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub root_system: RootSystem,
    pub building: BuildingSet,
    /// Ambient positive-root index of each subsystem positive root.
    pub root_map: Vec<usize>,
    /// Ambient positive-root index of each subsystem simple root.
    pub simple_roots: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        RootSystem::from_spec_str(s).unwrap()
    }

    fn fund_masks(g: &BuildingSet) -> Vec<IndexMask> {
        let mut m = g.fund_masks().to_vec();
        m.sort_unstable();
        m
    }

    #[test]
    fn closure_examples() {
        let a2 = rs("A2");
        assert_eq!(flat_closure(&a2, [0]), Flat { dim: 1, roots: 0b1 });
        assert_eq!(flat_closure(&a2, [0, 1]), Flat { dim: 2, roots: 0b111 });
        assert_eq!(flat_closure(&a2, []), Flat::ZERO);
        let a3 = rs("A3");
        let s = flat_sum(&a3, &line(0), &line(1));
        assert_eq!(s.dim, 2);
        assert_eq!(s.num_roots(), 3);
        let t = flat_sum(&a3, &line(0), &line(2));
        assert_eq!(t, Flat { dim: 2, roots: 0b101 });
        assert_eq!(flat_sum(&a3, &s, &Flat::ZERO), s);
    }

    #[test]
    fn components() {
        let a3 = rs("A3");
        let t = flat_closure(&a3, [0, 2]);
        assert_eq!(irreducible_components(&a3, &t), vec![line(0), line(2)]);
        assert_eq!(irreducible_components(&rs("A2"), &whole_space(&rs("A2"))).len(), 1);
        let a13 = rs("A1^3");
        assert_eq!(irreducible_components(&a13, &whole_space(&a13)).len(), 3);
    }

    #[test]
    fn lattice_sizes() {
        // Bell numbers count set partitions of n+1 points
        assert_eq!(all_flats(&rs("A2"), DEFAULT_FLAT_CAP).unwrap().len(), 4);
        assert_eq!(all_flats(&rs("A3"), DEFAULT_FLAT_CAP).unwrap().len(), 14);
        assert_eq!(all_flats(&rs("A4"), DEFAULT_FLAT_CAP).unwrap().len(), 51);
        assert_eq!(all_flats(&rs("A3"), 5).unwrap_err(), FlatsError::TooManyFlats { cap: 5 });
    }

    #[test]
    fn a2_building_sets_coincide() {
        let a2 = rs("A2");
        let max = BuildingSet::maximal(&a2, DEFAULT_FLAT_CAP).unwrap();
        let min = BuildingSet::minimal(&a2, DEFAULT_FLAT_CAP).unwrap();
        assert_eq!(max.flats(), min.flats());
        assert_eq!(max.flats().len(), 4);
        assert_eq!(fund_masks(&max), vec![0b01, 0b10, 0b11]);
    }

    #[test]
    fn a3_fund_parts() {
        let a3 = rs("A3");
        let min = BuildingSet::minimal(&a3, DEFAULT_FLAT_CAP).unwrap();
        assert_eq!(fund_masks(&min), vec![0b001, 0b010, 0b011, 0b100, 0b110, 0b111]);
        let max = BuildingSet::maximal(&a3, DEFAULT_FLAT_CAP).unwrap();
        assert_eq!(max.fund().len(), 7);
        let t = flat_closure(&a3, [0, 2]);
        assert_eq!(min.decomposition(&t), vec![line(0), line(2)]);
        assert_eq!(max.decomposition(&t), vec![t]);
    }

    #[test]
    fn lines_and_v_are_not_building() {
        let a3 = rs("A3");
        let lattice = all_flats(&a3, DEFAULT_FLAT_CAP).unwrap();
        let mut family: Vec<Flat> = (0..6).map(line).collect();
        family.push(whole_space(&a3));
        match BuildingSet::validate(&a3, &lattice, &family, BuildingKind::Custom) {
            Err(FlatsError::NotBuilding { witness }) => assert_eq!(witness.len(), 3),
            other => panic!("unexpected {other:?}"),
        }
        let no_v: Vec<Flat> = (0..6).map(line).collect();
        assert_eq!(
            BuildingSet::validate(&a3, &lattice, &no_v, BuildingKind::Custom).unwrap_err(),
            FlatsError::MissingV
        );
    }

    #[test]
    fn orbit_of_fund_is_minimal() {
        let a3 = rs("A3");
        let w = WeylGroup::enumerate(&a3, 1000).unwrap();
        let min = BuildingSet::minimal(&a3, DEFAULT_FLAT_CAP).unwrap();
        let mut orbit: Vec<Flat> = Vec::new();
        for f in min.fund() {
            for g in 0..w.order() {
                orbit.push(act_flat(&a3, &w, g, f));
            }
        }
        orbit.sort();
        orbit.dedup();
        assert_eq!(orbit, min.flats());
    }

    #[test]
    fn not_w_invariant_detected() {
        let a2 = rs("A2");
        let lattice = all_flats(&a2, DEFAULT_FLAT_CAP).unwrap();
        let family = vec![line(0), line(1), line(2), whole_space(&a2)];
        assert!(BuildingSet::validate(&a2, &lattice, &family, BuildingKind::Custom).is_ok());
        let a3 = rs("A3");
        let lattice = all_flats(&a3, DEFAULT_FLAT_CAP).unwrap();
        let mut family: Vec<Flat> = (0..6).map(line).collect();
        family.push(whole_space(&a3));
        family.push(flat_closure(&a3, [0, 1]));
        assert!(matches!(
            BuildingSet::validate(&a3, &lattice, &family, BuildingKind::Custom),
            Err(FlatsError::NotWInvariant { .. })
        ));
    }

    #[test]
    fn interval_sets() {
        let g = BuildingSet::interval(&rs("A1^3")).unwrap();
        assert_eq!(fund_masks(&g), vec![0b001, 0b010, 0b011, 0b100, 0b110, 0b111]);
        let g2 = BuildingSet::interval(&rs("A1^2")).unwrap();
        assert_eq!(g2.flats().len(), all_flats(&rs("A1^2"), DEFAULT_FLAT_CAP).unwrap().len());
        assert_eq!(BuildingSet::interval(&rs("A2")).unwrap_err(), FlatsError::NotIntervalType);
    }

    #[test]
    fn restriction_to_a2_flat() {
        let a3 = rs("A3");
        let min = BuildingSet::minimal(&a3, DEFAULT_FLAT_CAP).unwrap();
        let a = flat_closure(&a3, [0, 1]);
        let r = min.restrict(&a3, &a).unwrap();
        assert_eq!(r.root_system.label(), "A2");
        assert_eq!(r.building.flats().len(), 4);
        assert_eq!(r.simple_roots, vec![0, 1]);
        let v = min.restrict(&a3, &whole_space(&a3)).unwrap();
        assert_eq!(v.building.flats().len(), min.flats().len());
        let l = min.restrict(&a3, &line(2)).unwrap();
        assert_eq!(l.building.flats().len(), 1);
    }

    #[test]
    fn quotients() {
        let a3 = rs("A3");
        let min = BuildingSet::minimal(&a3, DEFAULT_FLAT_CAP).unwrap();
        let q = min.quotient(0b101);
        assert_eq!(q.ground(), 0b010);
        assert_eq!(q.members(), &[0b010]);
        let q1 = min.quotient(0b001);
        assert_eq!(q1.ground(), 0b110);
        assert_eq!(q1.members(), &[0b010, 0b100, 0b110]);
        assert_eq!(min.quotient(0).members().len(), 6);
    }

    #[test]
    fn decomposition_dims_add_up() {
        for s in ["A3", "B3", "C3", "D4", "A2xA1"] {
            let r = rs(s);
            let lattice = all_flats(&r, DEFAULT_FLAT_CAP).unwrap();
            for g in [BuildingSet::minimal(&r, DEFAULT_FLAT_CAP).unwrap(), BuildingSet::maximal(&r, DEFAULT_FLAT_CAP).unwrap()] {
                for c in &lattice {
                    let d = g.decomposition(c);
                    assert_eq!(d.iter().map(|p| p.dim).sum::<usize>(), c.dim);
                    for (i, p) in d.iter().enumerate() {
                        for q in &d[i + 1..] {
                            assert_eq!(p.roots & q.roots, 0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn fund_decompositions_are_orthogonal() {
        let b3 = rs("B3");
        let min = BuildingSet::minimal(&b3, DEFAULT_FLAT_CAP).unwrap();
        for mask in 1u64..8 {
            let parts = min.fund_decomposition(mask);
            let union = parts.iter().fold(0, |acc, &i| acc | min.fund_masks()[i]);
            assert_eq!(union, mask);
            for &i in &parts {
                for &j in &parts {
                    if i != j {
                        for a in mask_bits(min.fund_masks()[i]) {
                            for b in mask_bits(min.fund_masks()[j]) {
                                assert_eq!(b3.gram()[a][b], 0);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn min_inside_max() {
        let d4 = rs("D4");
        let min = BuildingSet::minimal(&d4, DEFAULT_FLAT_CAP).unwrap();
        let max = BuildingSet::maximal(&d4, DEFAULT_FLAT_CAP).unwrap();
        assert!(min.flats().iter().all(|f| max.contains(f)));
        assert_eq!(min.preserving_automorphisms(&d4).len(), 6);
    }
}
