//! Faces as pairs of a coset and a labelled nested set, with their order and structure.

use std::collections::{HashMap, HashSet, VecDeque};

use num_integer::Integer;
use thiserror::Error;

use crate::flats::{automorphism_flat, mask_bits, FlatsError, IndexMask, Restriction};
use crate::nested::{enumerate_maximal_nested_sets, CombinatorialBuildingSet, NestedError, NestedSet, DEFAULT_NESTED_CAP};
use crate::polytope::{BuildOptions, Permutonestohedron, PolytopeError};
use crate::root_system::DiagramAutomorphism;
use crate::weyl::Subgroup;

pub const DEFAULT_FACE_CAP: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FaceError {
    #[error("more than {cap} faces")]
    TooMany { cap: usize },
    #[error("label on fund member {0}, which is not minimal in the nested set")]
    LabelNotMinimal(usize),
    #[error("the face is not a facet crossing the chambers")]
    NotCrossingFacet,
    #[error("the building set is not invariant under the diagram automorphism")]
    BuildingNotInvariant,
    #[error("half-space {0} has no image among the half-spaces")]
    HalfspacesNotInvariant(usize),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Flats(#[from] FlatsError),
    #[error(transparent)]
    Nested(#[from] NestedError),
}

/// A nested set whose listed minimal members carry the nontrivial label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelledNestedSet {
    pub nested: NestedSet,
    pub labels: Vec<usize>,
}

impl LabelledNestedSet {
    pub fn new(p: &Permutonestohedron, nested: NestedSet, mut labels: Vec<usize>) -> Result<Self, FaceError> {
        labels.sort_unstable();
        labels.dedup();
        let mins = nested.minimal_members(&p.g);
        if let Some(&bad) = labels.iter().find(|l| !mins.contains(l)) {
            return Err(FaceError::LabelNotMinimal(bad));
        }
        Ok(LabelledNestedSet { nested, labels })
    }

    pub fn dimension(&self, rank: usize) -> usize {
        rank + self.labels.len() - self.nested.len()
    }

    pub fn is_labelled(&self, i: usize) -> bool {
        self.labels.binary_search(&i).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FacePair {
    /// Canonical representative of the coset.
    pub coset: usize,
    pub labelled: LabelledNestedSet,
}

/// Product of the parabolic subgroups of the labelled members.
pub fn label_group(p: &Permutonestohedron, labels: &[usize]) -> Subgroup {
    let v = p.g.fund().len() - 1;
    if labels.contains(&v) {
        return p.w.whole();
    }
    let parts: Vec<Subgroup> =
        labels.iter().map(|&l| p.w.reflection_subgroup(&p.rs, p.g.fund()[l].root_indices())).collect();
    let refs: Vec<&Subgroup> = parts.iter().collect();
    p.w.product(&refs)
}

/// Face counts by dimension from the index formula, without listing cosets.
pub fn f_vector_by_index(p: &Permutonestohedron) -> Vec<u128> {
    let n = p.rank();
    let order = p.w.order() as u128;
    let sizes: Vec<u128> = p
        .g
        .fund()
        .iter()
        .map(|f| p.w.reflection_subgroup(&p.rs, f.root_indices()).order() as u128)
        .collect();
    let mut f = vec![0u128; n + 1];
    for s in &p.nested {
        let mins = s.minimal_members(&p.g);
        for bits in 0u32..(1 << mins.len()) {
            let h: u128 = mins.iter().enumerate().filter(|(k, _)| bits >> k & 1 == 1).map(|(_, &m)| sizes[m]).product();
            let dim = n + bits.count_ones() as usize - s.len();
            f[dim] += order / h;
        }
    }
    f
}

/// All faces of one instance, with their order relation.
pub struct FacePoset<'a> {
    p: &'a Permutonestohedron,
    faces: Vec<FacePair>,
    dims: Vec<usize>,
    index: HashMap<FacePair, usize>,
    groups: HashMap<Vec<usize>, Subgroup>,
}

impl<'a> FacePoset<'a> {
    pub fn enumerate(p: &'a Permutonestohedron, cap: usize) -> Result<Self, FaceError> {
        let n = p.rank();
        let mut groups: HashMap<Vec<usize>, Subgroup> = HashMap::new();
        let mut faces = Vec::new();
        for s in &p.nested {
            let mins = s.minimal_members(&p.g);
            for bits in 0u32..(1 << mins.len()) {
                let labels: Vec<usize> =
                    mins.iter().enumerate().filter(|(k, _)| bits >> k & 1 == 1).map(|(_, &m)| m).collect();
                let h = groups.entry(labels.clone()).or_insert_with(|| label_group(p, &labels));
                let labelled = LabelledNestedSet { nested: s.clone(), labels };
                for rep in p.w.coset_reps(h) {
                    faces.push(FacePair { coset: rep, labelled: labelled.clone() });
                    if faces.len() > cap {
                        return Err(FaceError::TooMany { cap });
                    }
                }
            }
        }
        faces.sort_by(|a, b| {
            (a.labelled.dimension(n), &a.labelled, a.coset).cmp(&(b.labelled.dimension(n), &b.labelled, b.coset))
        });
        let dims = faces.iter().map(|f| f.labelled.dimension(n)).collect();
        let index = faces.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        Ok(FacePoset { p, faces, dims, index, groups })
    }

    pub fn polytope(&self) -> &Permutonestohedron {
        self.p
    }

    pub fn faces(&self) -> &[FacePair] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn dimension(&self, i: usize) -> usize {
        self.dims[i]
    }

    pub fn index_of(&self, f: &FacePair) -> Option<usize> {
        self.index.get(f).copied()
    }

    /// Face with the canonical coset representative of `sigma`.
    pub fn face(&self, sigma: usize, labelled: LabelledNestedSet) -> FacePair {
        let h = self.group(&labelled.labels);
        FacePair { coset: self.p.w.canonical_coset_rep(sigma, &h), labelled }
    }

    pub fn group(&self, labels: &[usize]) -> std::borrow::Cow<'_, Subgroup> {
        match self.groups.get(labels) {
            Some(h) => std::borrow::Cow::Borrowed(h),
            None => std::borrow::Cow::Owned(label_group(self.p, labels)),
        }
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.p.rank() + 1];
        for &d in &self.dims {
            f[d] += 1;
        }
        f
    }

    /// Vertices `sigma h v_T` for `h` in the label group and maximal `T` containing the nested set.
    pub fn face_vertices(&self, f: &FacePair) -> Vec<usize> {
        let p = self.p;
        let h = self.group(&f.labelled.labels);
        let tops: Vec<usize> = (0..p.maximal.len()).filter(|&t| f.labelled.nested.is_subset(&p.maximal[t])).collect();
        let mut out: Vec<usize> = h
            .members()
            .iter()
            .flat_map(|&x| {
                let g = p.w.mul(f.coset, x);
                tops.iter().map(move |&t| p.vertex_id(g, t))
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Half-spaces whose boundaries cut out the face; `None` for the whole polytope.
    pub fn supporting_halfspaces(&self, f: &FacePair) -> Option<Vec<usize>> {
        let p = self.p;
        let n = p.rank();
        let masks = p.g.fund_masks();
        let v = p.g.fund().len() - 1;
        let labels = &f.labelled.labels;
        if labels.contains(&v) {
            return None;
        }
        let full: IndexMask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let d = labels.iter().fold(0, |acc, &l| acc | masks[l]);
        let mut wanted = vec![if labels.is_empty() { full } else { d }];
        for &b in f.labelled.nested.members() {
            if b != v && !f.labelled.is_labelled(b) {
                wanted.push(masks[b] | d);
            }
        }
        Some(wanted.into_iter().map(|m| p.halfspace_for(m, f.coset).expect("supporting half-space exists")).collect())
    }

    /// Vertices on every supporting hyperplane, given per-half-space boundary sets.
    pub fn incidence_vertices(&self, f: &FacePair, boundary: &[Vec<usize>]) -> Vec<usize> {
        match self.supporting_halfspaces(f) {
            None => (0..self.p.vertices.len()).collect(),
            Some(hs) => {
                let mut acc: Vec<usize> = boundary[hs[0]].clone();
                for &h in &hs[1..] {
                    let set: HashSet<usize> = boundary[h].iter().copied().collect();
                    acc.retain(|v| set.contains(v));
                }
                acc
            }
        }
    }

    /// `a <= b` by coset containment and the label/insertion moves.
    pub fn is_face_leq(&self, a: &FacePair, b: &FacePair) -> bool {
        if a == b {
            return true;
        }
        let ha = self.group(&a.labelled.labels);
        let hb = self.group(&b.labelled.labels);
        if !self.p.w.coset_contained(a.coset, &ha, b.coset, &hb) {
            return false;
        }
        moves_reach(self.p.g.fund_masks(), &b.labelled, &a.labelled)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.is_face_leq(&self.faces[i], &self.faces[j])
    }

    /// Pairs `(i, j)` with face `i` a facet of face `j`.
    pub fn covering_edges(&self) -> Vec<(usize, usize)> {
        let n = self.p.rank();
        let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        for (i, &d) in self.dims.iter().enumerate() {
            by_dim[d].push(i);
        }
        let mut edges = Vec::new();
        for d in 0..n {
            for &i in &by_dim[d] {
                for &j in &by_dim[d + 1] {
                    if self.leq(i, j) {
                        edges.push((i, j));
                    }
                }
            }
        }
        edges
    }

    /// Structure of a facet that crosses the chambers.
    pub fn facet_factors(&self, f: &FacePair) -> Result<FacetFactors, FaceError> {
        let p = self.p;
        let v = p.g.fund().len() - 1;
        let members: Vec<usize> = f.labelled.nested.members().iter().copied().filter(|&m| m != v).collect();
        if members.is_empty() || f.labelled.labels != members {
            return Err(FaceError::NotCrossingFacet);
        }
        let masks = p.g.fund_masks();
        let d = members.iter().fold(0, |acc, &l| acc | masks[l]);
        let quotient = p.g.quotient(d);
        let quotient_sets = quotient.nested_sets(DEFAULT_NESTED_CAP)?;
        let quotient_vertices = maximal_by_inclusion(&quotient_sets).len();
        let mut restricted = Vec::new();
        let mut restricted_vertices = Vec::new();
        for &m in &members {
            let r = p.g.restrict(&p.rs, &p.g.fund()[m])?;
            let wa = p.w.reflection_subgroup(&p.rs, p.g.fund()[m].root_indices()).order();
            restricted_vertices.push(wa * enumerate_maximal_nested_sets(&r.building, DEFAULT_NESTED_CAP)?.len());
            restricted.push(r);
        }
        let facet_vertices = self.face_vertices(f).len();
        let mut out = FacetFactors {
            quotient,
            restricted,
            quotient_vertices,
            restricted_vertices,
            facet_vertices,
            isomorphism_checked: false,
            isomorphism_holds: false,
        };
        if p.rank() <= 3 {
            out.isomorphism_holds = self.check_product_isomorphism(f, &members, d, &out, &quotient_sets)?;
            out.isomorphism_checked = true;
        }
        Ok(out)
    }

    fn check_product_isomorphism(
        &self,
        f: &FacePair,
        members: &[usize],
        d: IndexMask,
        factors: &FacetFactors,
        quotient_sets: &[Vec<IndexMask>],
    ) -> Result<bool, FaceError> {
        let p = self.p;
        let masks = p.g.fund_masks();
        let n = p.rank();
        let subs: Vec<Permutonestohedron> = factors
            .restricted
            .iter()
            .map(|r| Permutonestohedron::build(r.root_system.clone(), r.building.clone(), &BuildOptions::default()))
            .collect::<Result<_, _>>()?;
        let posets: Vec<FacePoset> = subs.iter().map(|s| FacePoset::enumerate(s, DEFAULT_FACE_CAP)).collect::<Result<_, _>>()?;
        let qindex: HashMap<&Vec<IndexMask>, usize> = quotient_sets.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let interval: Vec<usize> = (0..self.len()).filter(|&i| self.is_face_leq(&self.faces[i], f)).collect();
        let inv = p.w.inverse(f.coset);
        let mut images: Vec<Vec<usize>> = Vec::with_capacity(interval.len());
        for &i in &interval {
            let q = &self.faces[i];
            let mut bar: Vec<IndexMask> =
                q.labelled.nested.members().iter().map(|&k| masks[k] & !d).filter(|&m| m != 0).collect();
            bar.sort_unstable_by_key(|&m| (m.count_ones(), m));
            bar.dedup();
            let Some(&qi) = qindex.get(&bar) else { return Ok(false) };
            let mut image = vec![qi];
            let rho = p.w.mul(inv, q.coset);
            let mat = p.w.matrix(rho);
            for (k, &a) in members.iter().enumerate() {
                let idx = mask_bits(masks[a]);
                let sub = &subs[k];
                let mut block = Vec::with_capacity(idx.len() * idx.len());
                for &r in &idx {
                    for &c in &idx {
                        block.push(mat[r * n + c]);
                    }
                }
                let Some(sid) = sub.w.id_of(&block) else { return Ok(false) };
                let compress = |m: IndexMask| -> IndexMask {
                    idx.iter().enumerate().fold(0, |acc, (t, &b)| if m >> b & 1 == 1 { acc | 1 << t } else { acc })
                };
                let inside: Vec<usize> = q.labelled.nested.members().iter().copied().filter(|&x| masks[x] & !masks[a] == 0).collect();
                let to_sub = |x: usize| sub.g.fund_index_of_mask(compress(masks[x]));
                let Some(sub_members) = inside.iter().map(|&x| to_sub(x)).collect::<Option<Vec<usize>>>() else {
                    return Ok(false);
                };
                let Some(sub_labels) =
                    inside.iter().filter(|&&x| q.labelled.is_labelled(x)).map(|&x| to_sub(x)).collect::<Option<Vec<usize>>>()
                else {
                    return Ok(false);
                };
                let Ok(labelled) = LabelledNestedSet::new(sub, NestedSet::new(sub_members), sub_labels) else {
                    return Ok(false);
                };
                let face = posets[k].face(sid, labelled);
                let Some(fi) = posets[k].index_of(&face) else { return Ok(false) };
                image.push(fi);
            }
            images.push(image);
        }
        let distinct: HashSet<&Vec<usize>> = images.iter().collect();
        let product: usize = quotient_sets.len() * posets.iter().map(|q| q.len()).product::<usize>();
        if distinct.len() != images.len() || images.len() != product {
            return Ok(false);
        }
        for (x, ix) in interval.iter().zip(&images) {
            for (y, iy) in interval.iter().zip(&images) {
                let qa = &quotient_sets[ix[0]];
                let qb = &quotient_sets[iy[0]];
                let mut product_leq = qb.iter().all(|m| qa.contains(m));
                for k in 0..posets.len() {
                    product_leq = product_leq && posets[k].leq(ix[k + 1], iy[k + 1]);
                }
                if product_leq != self.leq(*x, *y) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn maximal_by_inclusion(sets: &[Vec<IndexMask>]) -> Vec<&Vec<IndexMask>> {
    sets.iter()
        .filter(|s| !sets.iter().any(|t| t.len() > s.len() && s.iter().all(|m| t.contains(m))))
        .collect()
}

/// Breadth-first search over the moves turning the labelled set `from` into `to`.
fn moves_reach(masks: &[IndexMask], from: &LabelledNestedSet, to: &LabelledNestedSet) -> bool {
    let target: Vec<usize> = to.nested.members().to_vec();
    let pos = |x: usize| target.binary_search(&x).ok();
    let mut start_members = 0u64;
    for &x in from.nested.members() {
        match pos(x) {
            Some(k) => start_members |= 1 << k,
            None => return false,
        }
    }
    let mut start_labels = 0u64;
    for &x in &from.labels {
        start_labels |= 1 << pos(x).expect("labels are members");
    }
    let m: Vec<IndexMask> = target.iter().map(|&x| masks[x]).collect();
    let k = target.len();
    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let goal_labels = to.labels.iter().fold(0u64, |acc, &x| acc | 1 << pos(x).expect("labels are members"));
    let inside = |a: usize, b: usize| m[a] & !m[b] == 0;
    let mut seen: HashSet<(u64, u64)> = HashSet::new();
    let mut queue = VecDeque::from([(start_members, start_labels)]);
    seen.insert((start_members, start_labels));
    while let Some((t, l)) = queue.pop_front() {
        if t == full && l == goal_labels {
            return true;
        }
        let mut next = Vec::new();
        for x in 0..k {
            if t >> x & 1 == 1 {
                continue;
            }
            let contains_some = (0..k).any(|y| t >> y & 1 == 1 && inside(y, x));
            if contains_some || !(0..k).any(|b| l >> b & 1 == 1 && inside(x, b)) {
                next.push((t | 1 << x, l));
            }
        }
        for b in 0..k {
            if l >> b & 1 == 0 {
                continue;
            }
            next.push((t, l & !(1 << b)));
            let cands: Vec<usize> = (0..k).filter(|&x| t >> x & 1 == 0 && x != b && inside(x, b)).collect();
            for sub in 1u64..(1 << cands.len()) {
                let chosen: Vec<usize> = (0..cands.len()).filter(|&c| sub >> c & 1 == 1).map(|c| cands[c]).collect();
                let antichain = chosen.iter().all(|&x| chosen.iter().all(|&y| x == y || (!inside(x, y) && !inside(y, x))));
                if !antichain {
                    continue;
                }
                let add = chosen.iter().fold(0u64, |acc, &x| acc | 1 << x);
                next.push((t | add, (l & !(1 << b)) | add));
            }
        }
        for s in next {
            if seen.insert(s) {
                queue.push_back(s);
            }
        }
    }
    false
}

#[derive(Clone, Debug)]
pub struct FacetFactors {
    pub quotient: CombinatorialBuildingSet,
    pub restricted: Vec<Restriction>,
    pub quotient_vertices: usize,
    pub restricted_vertices: Vec<usize>,
    pub facet_vertices: usize,
    pub isomorphism_checked: bool,
    pub isomorphism_holds: bool,
}

impl FacetFactors {
    pub fn vertex_product(&self) -> usize {
        self.quotient_vertices * self.restricted_vertices.iter().product::<usize>()
    }

    pub fn consistent(&self) -> bool {
        self.vertex_product() == self.facet_vertices && (!self.isomorphism_checked || self.isomorphism_holds)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicityReport {
    /// Facets through each chamber vertex, by maximal nested set.
    pub facets_per_vertex: Vec<usize>,
    /// Whether each maximal nested set is a chain.
    pub chains: Vec<bool>,
    pub simple: bool,
}

pub fn simplicity(p: &Permutonestohedron) -> SimplicityReport {
    let n = p.rank();
    let facets_per_vertex: Vec<usize> = (0..p.maximal.len())
        .map(|k| {
            let v = p.vertex_id(p.w.identity(), k);
            (0..p.halfspaces.len()).filter(|&h| p.slack_sign(v, h).is_eq()).count()
        })
        .collect();
    let chains = p.maximal.iter().map(|s| s.minimal_members(&p.g).len() == 1).collect();
    let simple = facets_per_vertex.iter().all(|&c| c == n);
    SimplicityReport { facets_per_vertex, chains, simple }
}

/// Permutation of the half-spaces induced by `x -> sigma(gamma(x))`.
pub fn aut_action(p: &Permutonestohedron, sigma: usize, gamma: &DiagramAutomorphism) -> Result<Vec<usize>, FaceError> {
    if !p.g.flats().iter().all(|f| p.g.contains(&automorphism_flat(&p.rs, gamma, f))) {
        return Err(FaceError::BuildingNotInvariant);
    }
    let mut perm = Vec::with_capacity(p.halfspaces.len());
    for (i, h) in p.halfspaces.iter().enumerate() {
        let normal = p.w.act(sigma, &gamma.apply(&h.normal));
        perm.push(p.find_halfspace(normal, h.offset.clone()).ok_or(FaceError::HalfspacesNotInvariant(i))?);
    }
    let distinct: HashSet<usize> = perm.iter().copied().collect();
    if distinct.len() != perm.len() {
        return Err(FaceError::HalfspacesNotInvariant(0));
    }
    Ok(perm)
}

pub fn permutation_order(perm: &[usize]) -> u64 {
    let mut seen = vec![false; perm.len()];
    let mut order = 1u64;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        order = order.lcm(&len);
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flats::{BuildingSet, DEFAULT_FLAT_CAP};
    use crate::root_system::RootSystem;

    fn instance(s: &str, maximal: bool) -> Permutonestohedron {
        let rs = RootSystem::from_spec_str(s).unwrap();
        let g = if maximal {
            BuildingSet::maximal(&rs, DEFAULT_FLAT_CAP).unwrap()
        } else {
            BuildingSet::minimal(&rs, DEFAULT_FLAT_CAP).unwrap()
        };
        Permutonestohedron::build(rs, g, &BuildOptions::default()).unwrap()
    }

    fn labelled(p: &Permutonestohedron, masks: &[IndexMask], labels: &[IndexMask]) -> LabelledNestedSet {
        let idx = |m: &IndexMask| p.g.fund_index_of_mask(*m).unwrap();
        LabelledNestedSet::new(p, NestedSet::new(masks.iter().map(idx).collect()), labels.iter().map(idx).collect()).unwrap()
    }

    #[test]
    fn f_vectors() {
        let a2 = instance("A2", false);
        let poset = FacePoset::enumerate(&a2, DEFAULT_FACE_CAP).unwrap();
        assert_eq!(poset.f_vector(), vec![12, 12, 1]);
        assert_eq!(f_vector_by_index(&a2), vec![12, 12, 1]);
        let a3 = instance("A3", false);
        assert_eq!(FacePoset::enumerate(&a3, DEFAULT_FACE_CAP).unwrap().f_vector(), vec![120, 192, 74, 1]);
        let a3m = instance("A3", true);
        assert_eq!(f_vector_by_index(&a3m), vec![144, 216, 74, 1]);
    }

    #[test]
    fn a2_edges_by_shape() {
        let p = instance("A2", false);
        let poset = FacePoset::enumerate(&p, DEFAULT_FACE_CAP).unwrap();
        let edges: Vec<&FacePair> = poset.faces().iter().filter(|f| f.labelled.dimension(2) == 1).collect();
        assert_eq!(edges.iter().filter(|f| f.labelled.labels.is_empty()).count(), 6);
        assert_eq!(edges.iter().filter(|f| f.labelled.labels == vec![0]).count(), 3);
        assert_eq!(edges.iter().filter(|f| f.labelled.labels == vec![1]).count(), 3);
    }

    #[test]
    fn dimensions() {
        let p = instance("A3", false);
        assert_eq!(labelled(&p, &[0b111], &[]).dimension(3), 2);
        assert_eq!(labelled(&p, &[0b111, 0b011], &[0b011]).dimension(3), 2);
        assert_eq!(labelled(&p, &[0b111, 0b001, 0b100], &[0b001, 0b100]).dimension(3), 2);
        assert_eq!(labelled(&p, &[0b111], &[0b111]).dimension(3), 3);
        assert!(LabelledNestedSet::new(&p, NestedSet::new(vec![0, 3, 5]), vec![3]).is_err());
    }

    #[test]
    fn face_vertex_examples() {
        let p = instance("A3", false);
        let poset = FacePoset::enumerate(&p, DEFAULT_FACE_CAP).unwrap();
        let square = poset.face(0, labelled(&p, &[0b111, 0b001, 0b100], &[0b001, 0b100]));
        assert_eq!(poset.face_vertices(&square).len(), 4);
        let dodecagon = poset.face(0, labelled(&p, &[0b111, 0b011], &[0b011]));
        assert_eq!(poset.face_vertices(&dodecagon).len(), 12);
        let vertex = poset.face(0, labelled(&p, &[0b111, 0b001, 0b100], &[]));
        assert_eq!(poset.face_vertices(&vertex).len(), 1);
        let a2 = instance("A2", false);
        let poset2 = FacePoset::enumerate(&a2, DEFAULT_FACE_CAP).unwrap();
        let edge = poset2.face(0, labelled(&a2, &[0b11, 0b01], &[0b01]));
        assert_eq!(poset2.face_vertices(&edge).len(), 2);
    }

    #[test]
    fn combinatorial_and_geometric_vertices_agree() {
        for (s, m) in [("A2", false), ("A3", false), ("A3", true), ("B2", false), ("A1^3", false), ("A2xA1", false)] {
            let p = instance(s, m);
            let boundary = p.facet_vertex_sets().unwrap();
            let poset = FacePoset::enumerate(&p, DEFAULT_FACE_CAP).unwrap();
            for f in poset.faces() {
                assert_eq!(poset.face_vertices(f), poset.incidence_vertices(f, &boundary), "{s} {f:?}");
            }
        }
    }

    #[test]
    fn order_matches_vertex_containment() {
        for (s, m) in [("A2", false), ("A3", false), ("A3", true), ("A1^3", false), ("B2", false)] {
            let p = instance(s, m);
            let poset = FacePoset::enumerate(&p, DEFAULT_FACE_CAP).unwrap();
            let sets: Vec<HashSet<usize>> = poset.faces().iter().map(|f| poset.face_vertices(f).into_iter().collect()).collect();
            for i in 0..poset.len() {
                for j in 0..poset.len() {
                    assert_eq!(poset.leq(i, j), sets[i].is_subset(&sets[j]), "{s}: {:?} vs {:?}", poset.faces()[i], poset.faces()[j]);
                }
            }
        }
    }

    #[test]
    fn order_examples() {
        let a2 = instance("A2", false);
        let poset = FacePoset::enumerate(&a2, DEFAULT_FACE_CAP).unwrap();
        let v = poset.face(0, labelled(&a2, &[0b11, 0b01], &[]));
        let e = poset.face(0, labelled(&a2, &[0b11], &[]));
        assert!(poset.is_face_leq(&v, &e));
        assert!(!poset.is_face_leq(&e, &v));
        assert!(poset.is_face_leq(&e, &e));
        let a3 = instance("A3", false);
        let poset = FacePoset::enumerate(&a3, DEFAULT_FACE_CAP).unwrap();
        let edge = poset.face(0, labelled(&a3, &[0b111, 0b001], &[]));
        let facet = poset.face(0, labelled(&a3, &[0b111, 0b001], &[0b001]));
        assert!(poset.is_face_leq(&edge, &facet));
    }

    #[test]
    fn simple_iff_maximal() {
        assert!(simplicity(&instance("A3", true)).simple);
        assert!(!simplicity(&instance("A3", false)).simple);
        assert!(simplicity(&instance("A2", false)).simple);
        let r = simplicity(&instance("B3", false));
        for (c, chain) in r.facets_per_vertex.iter().zip(&r.chains) {
            assert_eq!(*c == 3, *chain);
        }
    }

    #[test]
    fn crossing_facets_factor() {
        for (s, m) in [("A3", false), ("A3", true), ("B3", false), ("A2xA1", false), ("A1^3", false)] {
            let p = instance(s, m);
            let poset = FacePoset::enumerate(&p, DEFAULT_FACE_CAP).unwrap();
            let v = p.g.fund().len() - 1;
            for f in poset.faces() {
                let crossing = f.labelled.dimension(3) == 2 && !f.labelled.labels.is_empty() && !f.labelled.labels.contains(&v);
                if !crossing || f.coset != 0 {
                    continue;
                }
                let ff = poset.facet_factors(f).unwrap();
                assert!(ff.isomorphism_checked);
                assert!(ff.consistent(), "{s} {f:?} {} vs {}", ff.vertex_product(), ff.facet_vertices);
            }
        }
        let p = instance("A3", false);
        let poset = FacePoset::enumerate(&p, DEFAULT_FACE_CAP).unwrap();
        let chamber = poset.face(0, labelled(&p, &[0b111], &[]));
        assert_eq!(poset.facet_factors(&chamber).unwrap_err(), FaceError::NotCrossingFacet);
        let dodecagon = poset.face(0, labelled(&p, &[0b111, 0b011], &[0b011]));
        let ff = poset.facet_factors(&dodecagon).unwrap();
        assert_eq!(ff.quotient_vertices, 1);
        assert_eq!(ff.restricted_vertices, vec![12]);
        let square = poset.face(0, labelled(&p, &[0b111, 0b001, 0b100], &[0b001, 0b100]));
        let ff = poset.facet_factors(&square).unwrap();
        assert_eq!((ff.quotient_vertices, ff.restricted_vertices.clone(), ff.facet_vertices), (1, vec![2, 2], 4));
    }

    #[test]
    fn automorphisms_permute_halfspaces() {
        let a2 = instance("A2", false);
        let gammas = a2.rs.diagram_automorphisms();
        let swap = gammas.iter().find(|g| !g.is_identity()).unwrap();
        let perm = aut_action(&a2, 0, swap).unwrap();
        let hv = a2.halfspaces.iter().position(|h| h.sigma == 0 && h.origin == 0).unwrap();
        assert_eq!(perm[hv], hv);
        let d4 = instance("D4", false);
        let orders: Vec<u64> = d4
            .rs
            .diagram_automorphisms()
            .iter()
            .map(|g| permutation_order(&aut_action(&d4, 0, g).unwrap()))
            .collect();
        assert!(orders.contains(&3));
        for sigma in [1, 5, 17] {
            assert!(aut_action(&d4, sigma, &d4.rs.diagram_automorphisms()[0]).is_ok());
        }
    }

    #[test]
    fn whole_polytope_is_unique_top_face() {
        let p = instance("B2", false);
        let poset = FacePoset::enumerate(&p, DEFAULT_FACE_CAP).unwrap();
        let top: Vec<&FacePair> = poset.faces().iter().filter(|f| f.labelled.dimension(2) == 2).collect();
        assert_eq!(top.len(), 1);
        assert_eq!(poset.face_vertices(top[0]).len(), p.vertices.len());
    }
}
