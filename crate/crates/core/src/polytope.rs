//! Vertices of the permutonestohedron and exact checks against its half-spaces.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_traits::{ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{format_rat, is_positive, solve_linear_system, ExactError, Rat, RatMat, RatVec};
use crate::flats::{BuildingSet, FlatsError, IndexMask};
use crate::halfspaces::{
    all_halfspaces, flat_data, fundamental_halfspaces, stabilizer, verify_epsilon_lemma, HalfSpace, HalfSpaceKind,
    HalfspaceError, LemmaReport, RatioTable, SuitableList,
};
use crate::nested::{enumerate_nested_sets, is_nested, maximal_of, NestedError, NestedSet, DEFAULT_NESTED_CAP};
use crate::root_system::RootSystem;
use crate::weyl::{Subgroup, WeylError, WeylGroup, DEFAULT_GROUP_CAP};

/// Vertex/half-space pair budget for exhaustive checks.
pub const EXHAUSTIVE_PAIR_LIMIT: u64 = 10_000_000;
const SAMPLED_PAIRS: usize = 200_000;
const SUBSET_LIMIT: u64 = 200_000;
const SAMPLED_SUBSETS: usize = 20_000;
const MAX_WITNESSES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Nested(#[from] NestedError),
    #[error(transparent)]
    Halfspace(#[from] HalfspaceError),
    #[error(transparent)]
    Flats(#[from] FlatsError),
    #[error("the linear system for nested set {0:?} is singular")]
    SingularSystem(Vec<usize>),
    #[error("vertex for nested set {0:?} is outside the open fundamental chamber")]
    NotInChamber(Vec<usize>),
    #[error("half-space {0} contains no vertex on its boundary")]
    EmptyFacet(usize),
}

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub a: Rat,
    pub eps: Option<Vec<Rat>>,
    pub group_cap: usize,
    pub nested_cap: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { a: Rat::from_integer(1.into()), eps: None, group_cap: DEFAULT_GROUP_CAP, nested_cap: DEFAULT_NESTED_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub point: RatVec,
    pub sigma: usize,
    pub nested: usize,
}

/// Solves `(x, pi_A) = eps_{dim A}` over the members of `s`.
pub fn solve_vertex(rs: &RootSystem, g: &BuildingSet, s: &NestedSet, eps: &SuitableList) -> Result<RatVec, ExactError> {
    let n = rs.rank();
    let mut rows = Vec::with_capacity(s.len());
    let mut rhs = Vec::with_capacity(s.len());
    for f in s.flats(g) {
        rows.push(rs.covector(&flat_data(rs, &f).pi).into_coords());
        rhs.push(eps.eps(f.dim).clone());
    }
    if rows.len() != n {
        return Err(ExactError::DimensionMismatch { expected: n, found: rows.len() });
    }
    solve_linear_system(&RatMat::from_rows(rows), &RatVec::new(rhs))
}

pub fn in_open_chamber(rs: &RootSystem, x: &RatVec) -> bool {
    rs.covector(x).coords().iter().all(is_positive)
}

/// The vertex of the chamber nestohedron for a maximal nested set.
pub fn vertex(rs: &RootSystem, g: &BuildingSet, s: &NestedSet, eps: &SuitableList) -> Result<RatVec, PolytopeError> {
    let x = solve_vertex(rs, g, s, eps).map_err(|_| PolytopeError::SingularSystem(s.members().to_vec()))?;
    if !in_open_chamber(rs, &x) {
        return Err(PolytopeError::NotInChamber(s.members().to_vec()));
    }
    Ok(x)
}

/// A fully constructed instance: group, building set, half-spaces and vertices.
#[derive(Clone, Debug)]
pub struct Permutonestohedron {
    pub rs: RootSystem,
    pub w: WeylGroup,
    pub g: BuildingSet,
    pub ratios: RatioTable,
    pub eps: SuitableList,
    pub eps_generated: bool,
    pub suitability: Result<(), HalfspaceError>,
    pub lemma: LemmaReport,
    pub nested: Vec<NestedSet>,
    pub maximal: Vec<NestedSet>,
    pub chamber_vertices: Vec<RatVec>,
    pub fundamental: Vec<HalfSpace>,
    pub halfspaces: Vec<HalfSpace>,
    pub vertices: Vec<Vertex>,
    /// Pairs of vertex ids with the same point.
    pub coincidences: Vec<(usize, usize)>,
    stabilizers: Vec<Subgroup>,
    origin_by_mask: HashMap<IndexMask, usize>,
    by_origin: HashMap<(usize, usize), usize>,
    by_key: HashMap<(RatVec, Rat), usize>,
}

impl Permutonestohedron {
    pub fn build(rs: RootSystem, g: BuildingSet, opts: &BuildOptions) -> Result<Self, PolytopeError> {
        let w = WeylGroup::enumerate(&rs, opts.group_cap)?;
        let n = rs.rank();
        let ratios = RatioTable::new(&rs, &g);
        let (eps, eps_generated) = match &opts.eps {
            Some(values) => {
                if values.len() != n {
                    return Err(HalfspaceError::WrongLength { expected: n, found: values.len() }.into());
                }
                if !values.iter().all(is_positive) {
                    return Err(HalfspaceError::NonPositive.into());
                }
                (SuitableList::unchecked(values.clone()), false)
            }
            None => (SuitableList::generate(&ratios, n, &opts.a), true),
        };
        let suitability = eps.check(&ratios);
        let lemma = verify_epsilon_lemma(&g, &ratios, &eps);
        let nested = enumerate_nested_sets(&g, opts.nested_cap)?;
        let maximal = maximal_of(&g, nested.clone());
        let mut chamber_vertices = Vec::with_capacity(maximal.len());
        for s in &maximal {
            let x = solve_vertex(&rs, &g, s, &eps).map_err(|_| PolytopeError::SingularSystem(s.members().to_vec()))?;
            if suitability.is_ok() && !in_open_chamber(&rs, &x) {
                return Err(PolytopeError::NotInChamber(s.members().to_vec()));
            }
            chamber_vertices.push(x);
        }
        let fundamental = fundamental_halfspaces(&rs, &g, &eps)?;
        let halfspaces = all_halfspaces(&rs, &w, &g, &fundamental);
        let stabilizers = fundamental.iter().map(|h| stabilizer(&rs, &w, &g, &h.kind)).collect();
        let full: IndexMask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let origin_by_mask = fundamental
            .iter()
            .enumerate()
            .map(|(i, h)| {
                let mask = match &h.kind {
                    HalfSpaceKind::Whole => full,
                    HalfSpaceKind::Member { fund } => g.fund_masks()[*fund],
                    HalfSpaceKind::Composite { mask, .. } => *mask,
                };
                (mask, i)
            })
            .collect();
        let by_origin = halfspaces.iter().enumerate().map(|(i, h)| ((h.origin, h.sigma), i)).collect();
        let by_key = halfspaces.iter().enumerate().map(|(i, h)| (h.key(), i)).collect();
        let mut vertices = Vec::with_capacity(w.order() * maximal.len());
        for sigma in 0..w.order() {
            for (k, v) in chamber_vertices.iter().enumerate() {
                vertices.push(Vertex { point: w.act(sigma, v), sigma, nested: k });
            }
        }
        let mut first: HashMap<&RatVec, usize> = HashMap::with_capacity(vertices.len());
        let mut coincidences = Vec::new();
        for (i, v) in vertices.iter().enumerate() {
            if let Some(&j) = first.get(&v.point) {
                coincidences.push((j, i));
            } else {
                first.insert(&v.point, i);
            }
        }
        Ok(Permutonestohedron {
            rs,
            w,
            g,
            ratios,
            eps,
            eps_generated,
            suitability,
            lemma,
            nested,
            maximal,
            chamber_vertices,
            fundamental,
            halfspaces,
            vertices,
            coincidences,
            stabilizers,
            origin_by_mask,
            by_origin,
            by_key,
        })
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn vertex_id(&self, sigma: usize, nested: usize) -> usize {
        sigma * self.maximal.len() + nested
    }

    /// Whether the combinatorial description places vertex `v` on the boundary of half-space `h`.
    pub fn predicted_on(&self, v: usize, h: usize) -> bool {
        let vert = &self.vertices[v];
        let half = &self.halfspaces[h];
        let s = &self.maximal[vert.nested];
        let members_present = match &half.kind {
            HalfSpaceKind::Whole => true,
            HalfSpaceKind::Member { fund } => s.contains(*fund),
            HalfSpaceKind::Composite { parts, .. } => parts.iter().all(|&p| s.contains(p)),
        };
        members_present && self.stabilizers[half.origin].contains(self.w.mul(self.w.inverse(half.sigma), vert.sigma))
    }

    /// Index of the translate `sigma H` of the fundamental half-space for a simple-root span.
    pub fn halfspace_for(&self, mask: IndexMask, sigma: usize) -> Option<usize> {
        let origin = *self.origin_by_mask.get(&mask)?;
        let rep = self.w.canonical_coset_rep(sigma, &self.stabilizers[origin]);
        self.by_origin.get(&(origin, rep)).copied()
    }

    /// Index of the half-space with the given normal and offset, up to positive scaling.
    pub fn find_halfspace(&self, normal: RatVec, offset: Rat) -> Option<usize> {
        let probe = HalfSpace {
            covector: normal.clone(),
            normal,
            offset,
            kind: HalfSpaceKind::Whole,
            flat: self.g.whole(),
            sigma: 0,
            origin: 0,
        };
        self.by_key.get(&probe.key()).copied()
    }

    pub fn stabilizer_of(&self, h: usize) -> &Subgroup {
        &self.stabilizers[self.halfspaces[h].origin]
    }

    fn evaluator(&self) -> Evaluator {
        Evaluator::new(&self.vertices, &self.halfspaces)
    }

    /// Sign of the slack of vertex `v` in half-space `h`.
    pub fn slack_sign(&self, v: usize, h: usize) -> Ordering {
        self.halfspaces[h].slack(&self.vertices[v].point).cmp(&Rat::zero())
    }

    pub fn verify_hrep_vrep(&self, seed: u64, force_exhaustive: bool) -> HrepReport {
        let nv = self.vertices.len();
        let nh = self.halfspaces.len();
        let total = nv as u64 * nh as u64;
        let exhaustive = force_exhaustive || total <= EXHAUSTIVE_PAIR_LIMIT;
        let ev = self.evaluator();
        let check = |v: usize, h: usize| -> Option<IncidenceViolation> {
            let sign = ev.sign(v, h).unwrap_or_else(|| self.slack_sign(v, h));
            let predicted = self.predicted_on(v, h);
            let issue = match (sign, predicted) {
                (Ordering::Less, _) => Issue::Outside,
                (Ordering::Equal, false) => Issue::UnexpectedlyTight,
                (Ordering::Greater, true) => Issue::ExpectedTight,
                _ => return None,
            };
            Some(IncidenceViolation {
                vertex: v,
                halfspace: h,
                issue,
                slack: format_rat(&self.halfspaces[h].slack(&self.vertices[v].point)),
            })
        };
        let (violations, checked): (Vec<IncidenceViolation>, u64) = if exhaustive {
            let v: Vec<IncidenceViolation> =
                (0..nv).into_par_iter().flat_map_iter(|v| (0..nh).filter_map(move |h| check(v, h))).collect();
            (v, total)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut pairs: Vec<(usize, usize)> = (0..self.maximal.len()).flat_map(|k| (0..nh).map(move |h| (k, h))).collect();
            pairs.extend((0..SAMPLED_PAIRS).map(|_| (rng.gen_range(0..nv), rng.gen_range(0..nh))));
            let v: Vec<IncidenceViolation> = pairs.par_iter().filter_map(|&(v, h)| check(v, h)).collect();
            (v, pairs.len() as u64)
        };
        let delta_cov = self.rs.covector(self.rs.delta());
        let top: Vec<Rat> = self.chamber_vertices.iter().map(|x| x.dot(&delta_cov)).collect();
        let monotonicity_failures = self
            .vertices
            .par_iter()
            .filter(|v| v.sigma != self.w.identity() && v.point.dot(&delta_cov) >= top[v.nested])
            .count();
        HrepReport {
            vertices: nv,
            halfspaces: nh,
            pairs_checked: checked,
            exhaustive,
            seed: (!exhaustive).then_some(seed),
            violation_count: violations.len(),
            violations: violations.into_iter().take(MAX_WITNESSES).collect(),
            monotonicity_failures,
            coincidences: self.coincidences.len(),
        }
    }

    /// Vertex ids on the boundary of each half-space.
    pub fn facet_vertex_sets(&self) -> Result<Vec<Vec<usize>>, PolytopeError> {
        let ev = self.evaluator();
        let nv = self.vertices.len();
        let sets: Vec<Vec<usize>> = (0..self.halfspaces.len())
            .into_par_iter()
            .map(|h| {
                (0..nv)
                    .filter(|&v| ev.sign(v, h).unwrap_or_else(|| self.slack_sign(v, h)) == Ordering::Equal)
                    .collect()
            })
            .collect();
        if let Some(h) = sets.iter().position(|s| s.is_empty()) {
            return Err(PolytopeError::EmptyFacet(h));
        }
        Ok(sets)
    }

    /// Checks the chamber nestohedron: vertex positions, exclusion of non-nested candidates, strict interiority.
    pub fn nestohedron_check(&self, seed: u64) -> NestohedronReport {
        let rs = &self.rs;
        let g = &self.g;
        let n = rs.rank();
        let a = self.eps.a();
        let fund = g.fund();
        let v_idx = fund.len() - 1;
        let member_bounds: Vec<(usize, RatVec, Rat)> = (0..v_idx)
            .map(|i| {
                let d = flat_data(rs, &fund[i]);
                (i, rs.covector(&d.delta_perp), a - self.eps.eps(fund[i].dim))
            })
            .collect();
        let mut failures = Vec::new();
        let mut chamber_failures = 0;
        for (k, x) in self.chamber_vertices.iter().enumerate() {
            if !in_open_chamber(rs, x) {
                chamber_failures += 1;
                failures.push(format!("vertex of nested set {:?} is outside the open chamber", self.maximal[k].members()));
            }
        }
        let mut strict_checked = 0;
        let mut strict_failures = 0;
        for (k, x) in self.chamber_vertices.iter().enumerate() {
            for (i, cov, bound) in &member_bounds {
                if self.maximal[k].contains(*i) {
                    continue;
                }
                strict_checked += 1;
                if x.dot(cov) >= *bound {
                    strict_failures += 1;
                    if failures.len() < MAX_WITNESSES {
                        failures.push(format!(
                            "vertex of nested set {:?} is not strictly inside the half-space of member {}",
                            self.maximal[k].members(),
                            i
                        ));
                    }
                }
            }
        }
        let total = binomial(v_idx as u64, (n - 1) as u64);
        let exhaustive = total <= SUBSET_LIMIT;
        let subsets: Vec<Vec<usize>> = if exhaustive {
            combinations(v_idx, n - 1)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..SAMPLED_SUBSETS)
                .map(|_| {
                    let mut s = sample(&mut rng, v_idx, n - 1).into_vec();
                    s.sort_unstable();
                    s
                })
                .collect()
        };
        let outcomes: Vec<Option<Option<String>>> = subsets
            .par_iter()
            .map(|sub| {
                let mut t = sub.clone();
                t.push(v_idx);
                if is_nested(g, &t) {
                    return None;
                }
                let s = NestedSet::new(t);
                let x = solve_vertex(rs, g, &s, &self.eps).ok()?;
                let excluded = member_bounds.iter().any(|(_, cov, bound)| x.dot(cov) > *bound);
                Some((!excluded).then(|| format!("non-nested set {:?} yields a point of the chamber nestohedron", s.members())))
            })
            .collect();
        let non_nested_checked = outcomes.iter().filter(|o| o.is_some()).count();
        let mut exclusion_failures = 0;
        for msg in outcomes.into_iter().flatten().flatten() {
            exclusion_failures += 1;
            if failures.len() < MAX_WITNESSES {
                failures.push(msg);
            }
        }
        NestohedronReport {
            chamber_vertices: self.chamber_vertices.len(),
            chamber_failures,
            strict_checked,
            strict_failures,
            non_nested_checked,
            exclusion_failures,
            exhaustive,
            seed: (!exhaustive).then_some(seed),
            failures,
        }
    }
}

/// Slack signs with cleared denominators in `i128`, falling back to exact rationals on overflow.
struct Evaluator {
    points: Vec<Option<(Vec<i128>, i128)>>,
    covectors: Vec<Option<(Vec<i128>, i128)>>,
    offsets: Vec<Option<(i128, i128)>>,
}

fn scaled(v: &RatVec) -> Option<(Vec<i128>, i128)> {
    let mut den: i128 = 1;
    for c in v.coords() {
        let d = c.denom().to_i128()?;
        den = lcm(den, d)?;
    }
    let num = v
        .coords()
        .iter()
        .map(|c| {
            let n = c.numer().to_i128()?;
            let d = c.denom().to_i128()?;
            n.checked_mul(den / d)
        })
        .collect::<Option<Vec<i128>>>()?;
    Some((num, den))
}

fn lcm(a: i128, b: i128) -> Option<i128> {
    let mut x = a;
    let mut y = b;
    while y != 0 {
        let t = x % y;
        x = y;
        y = t;
    }
    (a / x).checked_mul(b)
}

impl Evaluator {
    fn new(vertices: &[Vertex], halfspaces: &[HalfSpace]) -> Self {
        Evaluator {
            points: vertices.par_iter().map(|v| scaled(&v.point)).collect(),
            covectors: halfspaces.par_iter().map(|h| scaled(&h.covector)).collect(),
            offsets: halfspaces
                .iter()
                .map(|h| Some((h.offset.numer().to_i128()?, h.offset.denom().to_i128()?)))
                .collect(),
        }
    }

    /// Sign of `offset - (x, normal)`, or `None` on overflow.
    fn sign(&self, v: usize, h: usize) -> Option<Ordering> {
        let (p, d) = self.points[v].as_ref()?;
        let (q, e) = self.covectors[h].as_ref()?;
        let (u, f) = self.offsets[h]?;
        let mut dot: i128 = 0;
        for (x, y) in p.iter().zip(q) {
            dot = dot.checked_add(x.checked_mul(*y)?)?;
        }
        let lhs = u.checked_mul(*d)?.checked_mul(*e)?;
        let rhs = f.checked_mul(dot)?;
        Some(lhs.cmp(&rhs))
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
        if r > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    r as u64
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// `sum (-1)^i f_i` over proper faces equals `1 - (-1)^d` for a `d`-polytope.
pub fn euler_check(f: &[usize], dim: usize) -> bool {
    let alt: i128 = f.iter().take(dim).enumerate().map(|(i, &x)| if i % 2 == 0 { x as i128 } else { -(x as i128) }).sum();
    alt == 1 - if dim.is_multiple_of(2) { 1 } else { -1 }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Issue {
    Outside,
    UnexpectedlyTight,
    ExpectedTight,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncidenceViolation {
    pub vertex: usize,
    pub halfspace: usize,
    pub issue: Issue,
    pub slack: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HrepReport {
    pub vertices: usize,
    pub halfspaces: usize,
    pub pairs_checked: u64,
    pub exhaustive: bool,
    pub seed: Option<u64>,
    pub violation_count: usize,
    pub violations: Vec<IncidenceViolation>,
    pub monotonicity_failures: usize,
    pub coincidences: usize,
}

impl HrepReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0 && self.monotonicity_failures == 0 && self.coincidences == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NestohedronReport {
    pub chamber_vertices: usize,
    pub chamber_failures: usize,
    pub strict_checked: usize,
    pub strict_failures: usize,
    pub non_nested_checked: usize,
    pub exclusion_failures: usize,
    pub exhaustive: bool,
    pub seed: Option<u64>,
    pub failures: Vec<String>,
}

impl NestohedronReport {
    pub fn passed(&self) -> bool {
        self.chamber_failures == 0 && self.strict_failures == 0 && self.exclusion_failures == 0
    }
}
