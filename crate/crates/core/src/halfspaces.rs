//! Projections of the Weyl vector, suitable lists and the defining half-spaces.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{format_rat, is_positive, rat, ratio, Rat, RatVec};
use crate::flats::{mask_bits, span_of_simple, BuildingSet, Flat, IndexMask};
use crate::root_system::RootSystem;
use crate::weyl::{Subgroup, WeylGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HalfspaceError {
    #[error("expected {expected} epsilon values, got {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("epsilon values must be positive")]
    NonPositive,
    #[error("last epsilon {last} must equal a = {a}")]
    LastNotA { last: String, a: String },
    #[error("epsilon_{index} = {value} is not above 2*R*epsilon_{prev} = {bound}", prev = index - 1)]
    NotSuitable { index: usize, value: String, bound: String },
    #[error("half-space offset {0} is not positive")]
    OriginNotInterior(String),
}

/// Semisum of the positive roots of a flat and the complementary part of the Weyl vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatData {
    pub flat: Flat,
    pub pi: RatVec,
    pub delta_perp: RatVec,
}

/// Half the sum of the positive roots in `a`, in root coordinates.
pub fn semisum(rs: &RootSystem, a: &Flat) -> RatVec {
    let n = rs.rank();
    let mut sum = vec![0i64; n];
    for r in a.root_indices() {
        for (s, x) in sum.iter_mut().zip(rs.root(r)) {
            *s += x;
        }
    }
    RatVec::new(sum.into_iter().map(|s| ratio(s, 2)).collect())
}

pub fn flat_data(rs: &RootSystem, a: &Flat) -> FlatData {
    if a.dim == rs.rank() {
        let d = rs.delta().clone();
        return FlatData { flat: *a, pi: d.clone(), delta_perp: d };
    }
    let pi = semisum(rs, a);
    let delta_perp = rs.delta() - &pi;
    FlatData { flat: *a, pi, delta_perp }
}

fn max_coefficient(v: &RatVec) -> Rat {
    v.coords().iter().cloned().max().expect("nonempty")
}

fn min_nonzero_coefficient(v: &RatVec) -> Rat {
    v.coords().iter().filter(|c| !c.is_zero()).cloned().min().expect("nonzero vector")
}

/// Ratios between coefficient extremes of nested fund flats.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioTable {
    pairs: BTreeMap<(usize, usize), Rat>,
    by_dims: BTreeMap<(usize, usize), Rat>,
}

impl RatioTable {
    pub fn new(rs: &RootSystem, g: &BuildingSet) -> Self {
        let data: Vec<FlatData> = g.fund().iter().map(|f| flat_data(rs, f)).collect();
        let masks = g.fund_masks();
        let mut pairs = BTreeMap::new();
        let mut by_dims: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
        for (ai, a) in data.iter().enumerate() {
            for (bi, b) in data.iter().enumerate() {
                if ai == bi || masks[bi] & !masks[ai] != 0 {
                    continue;
                }
                let r = max_coefficient(&a.pi) / min_nonzero_coefficient(&b.pi);
                let key = (a.flat.dim, b.flat.dim);
                by_dims
                    .entry(key)
                    .and_modify(|m| {
                        if r > *m {
                            *m = r.clone();
                        }
                    })
                    .or_insert_with(|| r.clone());
                pairs.insert((ai, bi), r);
            }
        }
        RatioTable { pairs, by_dims }
    }

    /// Ratio for fund indices `big ⊋ small`.
    pub fn pair(&self, big: usize, small: usize) -> Option<&Rat> {
        self.pairs.get(&(big, small))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&(usize, usize), &Rat)> {
        self.pairs.iter()
    }

    /// Maximum ratio over pairs of the given dimensions, or 1 when there is none.
    pub fn by_dims(&self, i: usize, j: usize) -> Rat {
        self.by_dims.get(&(i, j)).cloned().unwrap_or_else(Rat::one)
    }

    pub fn has_dims(&self, i: usize, j: usize) -> bool {
        self.by_dims.contains_key(&(i, j))
    }
}

/// Values indexed by dimension, increasing fast enough to separate the layers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuitableList {
    eps: Vec<Rat>,
}

impl SuitableList {
    pub fn generate(ratios: &RatioTable, n: usize, a: &Rat) -> Self {
        let mut t = vec![Rat::one()];
        for i in 2..=n {
            let factor = rat(2) * ratios.by_dims(i, i - 1) + Rat::one();
            let next = &t[i - 2] * factor;
            t.push(next);
        }
        let top = t[n - 1].clone();
        let eps = t.into_iter().map(|x| a * x / &top).collect();
        let list = SuitableList { eps };
        debug_assert!(list.check(ratios).is_ok());
        list
    }

    pub fn from_values(ratios: &RatioTable, eps: Vec<Rat>, n: usize) -> Result<Self, HalfspaceError> {
        if eps.len() != n {
            return Err(HalfspaceError::WrongLength { expected: n, found: eps.len() });
        }
        let list = SuitableList { eps };
        list.check(ratios)?;
        Ok(list)
    }

    /// A list taken as given; `check` reports whether it is suitable.
    pub fn unchecked(eps: Vec<Rat>) -> Self {
        SuitableList { eps }
    }

    pub fn check(&self, ratios: &RatioTable) -> Result<(), HalfspaceError> {
        if !self.eps.iter().all(is_positive) {
            return Err(HalfspaceError::NonPositive);
        }
        for i in 2..=self.eps.len() {
            let bound = rat(2) * ratios.by_dims(i, i - 1) * &self.eps[i - 2];
            if self.eps[i - 1] <= bound {
                return Err(HalfspaceError::NotSuitable {
                    index: i,
                    value: format_rat(&self.eps[i - 1]),
                    bound: format_rat(&bound),
                });
            }
        }
        Ok(())
    }

    /// Value for a flat of dimension `dim` (1-based).
    pub fn eps(&self, dim: usize) -> &Rat {
        &self.eps[dim - 1]
    }

    pub fn a(&self) -> &Rat {
        self.eps.last().expect("rank at least 1")
    }

    pub fn values(&self) -> &[Rat] {
        &self.eps
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaWitness {
    pub flat: usize,
    pub parts: Vec<usize>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub checked: usize,
    pub violations: Vec<LemmaWitness>,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every non-redundant cover of each fund flat by smaller fund flats.
pub fn verify_epsilon_lemma(g: &BuildingSet, ratios: &RatioTable, eps: &SuitableList) -> LemmaReport {
    let masks = g.fund_masks();
    let fund = g.fund();
    let mut report = LemmaReport::default();
    for (bi, &mb) in masks.iter().enumerate() {
        let candidates: Vec<usize> = (0..masks.len()).filter(|&c| c != bi && masks[c] & !mb == 0).collect();
        let db = fund[bi].dim;
        let mut chosen = Vec::new();
        covers(masks, &candidates, 0, mb, 0, &mut chosen, &mut |parts| {
            report.checked += 1;
            let rhs = parts
                .iter()
                .fold(Rat::zero(), |acc, &p| acc + ratios.by_dims(db, fund[p].dim) * eps.eps(fund[p].dim));
            let lhs = eps.eps(db);
            if *lhs <= rhs {
                report.violations.push(LemmaWitness {
                    flat: bi,
                    parts: parts.to_vec(),
                    lhs: format_rat(lhs),
                    rhs: format_rat(&rhs),
                });
            }
        });
    }
    report
}

fn covers(
    masks: &[IndexMask],
    candidates: &[usize],
    start: usize,
    target: IndexMask,
    union: IndexMask,
    chosen: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if union == target {
        if chosen.len() > 1 {
            visit(chosen);
        }
        return;
    }
    for k in start..candidates.len() {
        let c = candidates[k];
        if masks[c] & !union == 0 {
            continue;
        }
        chosen.push(c);
        let all_private = chosen.iter().enumerate().all(|(i, &x)| {
            let others = chosen.iter().enumerate().filter(|&(j, _)| j != i).fold(0, |acc, (_, &y)| acc | masks[y]);
            masks[x] & !others != 0
        });
        if all_private {
            covers(masks, candidates, k + 1, target, union | masks[c], chosen, visit);
        }
        chosen.pop();
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum HalfSpaceKind {
    /// The level set of the Weyl vector.
    Whole,
    /// A proper member of the fund part, by fund index.
    Member { fund: usize },
    /// A simple-root span outside the building set, by simple-root mask.
    Composite { mask: IndexMask, parts: Vec<usize> },
}

/// The half-space `(x, normal) <= offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpace {
    pub normal: RatVec,
    pub covector: RatVec,
    pub offset: Rat,
    pub kind: HalfSpaceKind,
    pub flat: Flat,
    pub sigma: usize,
    /// Index of the fundamental half-space this one is a translate of.
    pub origin: usize,
}

impl HalfSpace {
    /// `offset - (x, normal)`: zero on the boundary, positive inside.
    pub fn slack(&self, x: &RatVec) -> Rat {
        &self.offset - x.dot(&self.covector)
    }

    /// Normal and offset scaled so the first nonzero normal coordinate is ±1.
    pub fn key(&self) -> (RatVec, Rat) {
        let lead = self.normal.coords().iter().find(|c| !c.is_zero()).expect("nonzero normal").abs();
        (self.normal.scale(&(Rat::one() / &lead)), &self.offset / lead)
    }
}

/// The half-spaces bounding the polytope inside the closed fundamental chamber.
pub fn fundamental_halfspaces(
    rs: &RootSystem,
    g: &BuildingSet,
    eps: &SuitableList,
) -> Result<Vec<HalfSpace>, HalfspaceError> {
    let n = rs.rank();
    let a = eps.a().clone();
    let mut out = Vec::new();
    let push = |normal: RatVec, offset: Rat, kind: HalfSpaceKind, flat: Flat, out: &mut Vec<HalfSpace>| {
        if !is_positive(&offset) {
            return Err(HalfspaceError::OriginNotInterior(format_rat(&offset)));
        }
        let covector = rs.covector(&normal);
        let origin = out.len();
        out.push(HalfSpace { normal, covector, offset, kind, flat, sigma: 0, origin });
        Ok(())
    };
    let v = g.whole();
    push(rs.delta().clone(), a.clone(), HalfSpaceKind::Whole, v, &mut out)?;
    for (i, f) in g.fund().iter().enumerate() {
        if f.dim == n {
            continue;
        }
        let d = flat_data(rs, f);
        push(d.delta_perp, &a - eps.eps(f.dim), HalfSpaceKind::Member { fund: i }, *f, &mut out)?;
    }
    let full: IndexMask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    for mask in 1..full {
        if g.fund_index_of_mask(mask).is_some() {
            continue;
        }
        let parts = g.fund_decomposition(mask);
        let mut normal = rs.delta().clone();
        let mut offset = a.clone();
        for &p in &parts {
            normal = &normal - &semisum(rs, &g.fund()[p]);
            offset -= eps.eps(g.fund()[p].dim);
        }
        push(normal, offset, HalfSpaceKind::Composite { mask, parts }, span_of_simple(rs, mask), &mut out)?;
    }
    Ok(out)
}

/// Parabolic subgroup fixing the normal of a fundamental half-space.
pub fn stabilizer(rs: &RootSystem, w: &WeylGroup, g: &BuildingSet, kind: &HalfSpaceKind) -> Subgroup {
    match kind {
        HalfSpaceKind::Whole => w.trivial_subgroup(),
        HalfSpaceKind::Member { fund } => w.reflection_subgroup(rs, g.fund()[*fund].root_indices()),
        HalfSpaceKind::Composite { mask, .. } => w.reflection_subgroup(rs, mask_bits(*mask)),
    }
}

/// The orbit of the fundamental half-spaces, deduplicated and in deterministic order.
pub fn all_halfspaces(
    rs: &RootSystem,
    w: &WeylGroup,
    g: &BuildingSet,
    fundamental: &[HalfSpace],
) -> Vec<HalfSpace> {
    let mut seen: HashMap<(RatVec, Rat), usize> = HashMap::new();
    let mut out = Vec::new();
    for h in fundamental {
        let stab = stabilizer(rs, w, g, &h.kind);
        for sigma in w.coset_reps(&stab) {
            let normal = w.act(sigma, &h.normal);
            let covector = rs.covector(&normal);
            let image = HalfSpace {
                normal,
                covector,
                offset: h.offset.clone(),
                kind: h.kind.clone(),
                flat: crate::flats::act_flat(rs, w, sigma, &h.flat),
                sigma,
                origin: h.origin,
            };
            let key = image.key();
            if seen.insert(key, out.len()).is_none() {
                out.push(image);
            }
        }
    }
    out
}
