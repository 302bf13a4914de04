//! Classical root systems in simple-root coordinates.
//!
//! Cartan convention: `A[i][j] = 2 (a_i, a_j) / (a_i, a_i)`, so the simple
//! reflection acts by `s_i(a_j) = a_j - A[i][j] a_i`. Within each irreducible
//! component short roots have squared length 2; long roots of B/C have 4.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{rat, solve_linear_system, Rat, RatMat, RatVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RootType {
    A,
    B,
    C,
    D,
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RootType::A => "A",
            RootType::B => "B",
            RootType::C => "C",
            RootType::D => "D",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootSystemError {
    #[error("unsupported root system type {0:?}")]
    UnsupportedType(String),
    #[error("type {kind} needs rank at least {min}, got {rank}")]
    RankTooSmall { kind: RootType, rank: usize, min: usize },
    #[error("cannot parse root system spec {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("invalid Gram matrix: {0}")]
    InvalidGram(String),
    #[error("root system has {0} positive roots; at most 128 are supported")]
    TooManyRoots(usize),
}

/// One irreducible component: its type, rank and the simple-root indices it owns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub kind: RootType,
    pub rank: usize,
    pub simple: Vec<usize>,
}

/// A simple-root permutation preserving the Cartan matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramAutomorphism {
    pub perm: Vec<usize>,
}

impl DiagramAutomorphism {
    /// Integer matrix on root coordinates; column `i` is `e_{perm(i)}`.
    pub fn matrix(&self) -> Vec<Vec<i64>> {
        let n = self.perm.len();
        let mut m = vec![vec![0; n]; n];
        for (i, &p) in self.perm.iter().enumerate() {
            m[p][i] = 1;
        }
        m
    }

    pub fn apply(&self, x: &RatVec) -> RatVec {
        let mut out = vec![Rat::zero(); x.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            out[p] = x[i].clone();
        }
        RatVec::new(out)
    }

    pub fn apply_int(&self, x: &[i64]) -> Vec<i64> {
        let mut out = vec![0; x.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            out[p] = x[i];
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    rank: usize,
    components: Vec<Component>,
    gram: Vec<Vec<i64>>,
    cartan: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    lookup: HashMap<Vec<i64>, usize>,
    weights: Vec<RatVec>,
    delta: RatVec,
}

/// Parses strings such as `A3`, `B4`, `A1^5`, `A2xA1` into component lists.
pub fn parse_root_spec(input: &str) -> Result<Vec<(RootType, usize)>, RootSystemError> {
    let perr = |reason: &str| RootSystemError::Parse { input: input.to_string(), reason: reason.to_string() };
    let s = input.trim();
    if s.is_empty() {
        return Err(perr("empty"));
    }
    let mut out = Vec::new();
    for part in s.split(['x', 'X', '*']) {
        let part = part.trim();
        let mut chars = part.chars();
        let letter = chars.next().ok_or_else(|| perr("empty component"))?;
        let kind = match letter.to_ascii_uppercase() {
            'A' => RootType::A,
            'B' => RootType::B,
            'C' => RootType::C,
            'D' => RootType::D,
            'E' | 'F' | 'G' | 'H' | 'I' => return Err(RootSystemError::UnsupportedType(part.to_string())),
            _ => return Err(perr("component must start with A, B, C or D")),
        };
        let rest = chars.as_str();
        let (r, pow) = match rest.split_once('^') {
            Some((r, p)) => (r, Some(p)),
            None => (rest, None),
        };
        let digits = |t: &str| !t.is_empty() && t.len() <= 4 && t.bytes().all(|b| b.is_ascii_digit());
        if !digits(r) {
            return Err(perr("missing or malformed rank"));
        }
        let rank: usize = r.parse().map_err(|_| perr("bad rank"))?;
        let copies: usize = match pow {
            Some(p) if digits(p) => p.parse().map_err(|_| perr("bad exponent"))?,
            Some(_) => return Err(perr("malformed exponent")),
            None => 1,
        };
        if copies == 0 {
            return Err(perr("exponent must be positive"));
        }
        if out.len() + copies > 64 {
            return Err(perr("too many components"));
        }
        out.extend(std::iter::repeat_n((kind, rank), copies));
    }
    Ok(out)
}

fn min_rank(kind: RootType) -> usize {
    match kind {
        RootType::A => 1,
        RootType::B | RootType::C => 2,
        RootType::D => 3,
    }
}

/// Gram matrix of one irreducible component in the standard labelling.
fn component_gram(kind: RootType, m: usize) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; m]; m];
    let (len, edge): (Box<dyn Fn(usize) -> i64>, Box<dyn Fn(usize) -> i64>) = match kind {
        RootType::A | RootType::D => (Box::new(|_| 2), Box::new(|_| -1)),
        RootType::B => (Box::new(move |i| if i + 1 == m { 2 } else { 4 }), Box::new(|_| -2)),
        RootType::C => (
            Box::new(move |i| if i + 1 == m { 4 } else { 2 }),
            Box::new(move |i| if i + 2 == m { -2 } else { -1 }),
        ),
    };
    for i in 0..m {
        g[i][i] = len(i);
    }
    let path_end = if kind == RootType::D { m - 1 } else { m };
    for i in 0..path_end.saturating_sub(1) {
        g[i][i + 1] = edge(i);
        g[i + 1][i] = edge(i);
    }
    if kind == RootType::D {
        g[m - 3][m - 1] = -1;
        g[m - 1][m - 3] = -1;
    }
    g
}

impl RootSystem {
    /// Builds the direct product of the listed classical components.
    pub fn build(spec: &[(RootType, usize)]) -> Result<Self, RootSystemError> {
        if spec.is_empty() {
            return Err(RootSystemError::InvalidGram("no components".into()));
        }
        for &(kind, rank) in spec {
            if rank < min_rank(kind) {
                return Err(RootSystemError::RankTooSmall { kind, rank, min: min_rank(kind) });
            }
        }
        let n: usize = spec.iter().map(|&(_, r)| r).sum();
        let mut gram = vec![vec![0i64; n]; n];
        let mut off = 0;
        for &(kind, m) in spec {
            let g = component_gram(kind, m);
            for i in 0..m {
                for j in 0..m {
                    gram[off + i][off + j] = g[i][j];
                }
            }
            off += m;
        }
        let mut rs = Self::from_gram(gram)?;
        // Keep the user's type labels (B2 and C2 have the same diagram shape).
        let mut off = 0;
        for (comp, &(kind, m)) in rs.components.iter_mut().zip(spec) {
            comp.kind = kind;
            comp.rank = m;
            debug_assert_eq!(comp.simple, (off..off + m).collect::<Vec<_>>());
            off += m;
        }
        Ok(rs)
    }

    pub fn from_spec_str(s: &str) -> Result<Self, RootSystemError> {
        Self::build(&parse_root_spec(s)?)
    }

    /// Builds a root system from the Gram matrix of its simple roots. Each
    /// component is rescaled so its short roots have squared length 2.
    pub fn from_gram(mut gram: Vec<Vec<i64>>) -> Result<Self, RootSystemError> {
        let n = gram.len();
        if n == 0 || gram.iter().any(|r| r.len() != n) {
            return Err(RootSystemError::InvalidGram("not square".into()));
        }
        for i in 0..n {
            if gram[i][i] <= 0 {
                return Err(RootSystemError::InvalidGram("non-positive length".into()));
            }
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(RootSystemError::InvalidGram("not symmetric".into()));
                }
            }
        }
        let comps = connected_components(&gram);
        for comp in &comps {
            let min_len = comp.iter().map(|&i| gram[i][i]).min().unwrap_or(2);
            if min_len % 2 != 0 {
                return Err(RootSystemError::InvalidGram("odd squared length".into()));
            }
            let f = min_len / 2;
            for &i in comp {
                for &j in comp {
                    if gram[i][j] % f != 0 {
                        return Err(RootSystemError::InvalidGram("cannot normalize".into()));
                    }
                }
            }
            for &i in comp {
                for &j in comp {
                    gram[i][j] /= f;
                }
            }
        }
        let mut cartan = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let num = 2 * gram[i][j];
                if num % gram[i][i] != 0 {
                    return Err(RootSystemError::InvalidGram("non-crystallographic".into()));
                }
                cartan[i][j] = num / gram[i][i];
            }
        }
        let components = comps
            .into_iter()
            .map(|c| classify(&gram, &cartan, c))
            .collect::<Result<Vec<_>, _>>()?;
        let positive_roots = positive_roots(&cartan);
        if positive_roots.len() > 128 {
            return Err(RootSystemError::TooManyRoots(positive_roots.len()));
        }
        let lookup = positive_roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        let gram_rat = RatMat::from_int_rows(&gram);
        let weights = (0..n)
            .map(|i| {
                let mut rhs = RatVec::zeros(n).into_coords();
                rhs[i] = crate::exact::ratio(gram[i][i], 2);
                solve_linear_system(&gram_rat, &RatVec::new(rhs))
                    .map_err(|_| RootSystemError::InvalidGram("singular".into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut sum = vec![0i64; n];
        for r in &positive_roots {
            for (s, x) in sum.iter_mut().zip(r) {
                *s += x;
            }
        }
        let delta = RatVec::new(sum.iter().map(|&s| crate::exact::ratio(s, 2)).collect());
        let rs = RootSystem { rank: n, components, gram, cartan, positive_roots, lookup, weights, delta };
        rs.self_check()?;
        Ok(rs)
    }

    fn self_check(&self) -> Result<(), RootSystemError> {
        let n = self.rank;
        for i in 0..n {
            for j in 0..n {
                let lhs = self.inner(&RatVec::unit(n, j), &self.weights[i]) * rat(2) / rat(self.gram[j][j]);
                let want = if i == j { rat(1) } else { rat(0) };
                if lhs != want {
                    return Err(RootSystemError::InvalidGram("weights do not dualize".into()));
                }
            }
        }
        let wsum = self.weights.iter().fold(RatVec::zeros(n), |acc, w| &acc + w);
        if wsum != self.delta {
            return Err(RootSystemError::InvalidGram("delta differs from the weight sum".into()));
        }
        let expected: usize = self.components.iter().map(|c| classical_root_count(c.kind, c.rank)).sum();
        if expected != self.positive_roots.len() {
            return Err(RootSystemError::InvalidGram("unexpected number of positive roots".into()));
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_irreducible(&self) -> bool {
        self.components.len() == 1
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn gram_matrix(&self) -> RatMat {
        RatMat::from_int_rows(&self.gram)
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn root(&self, i: usize) -> &[i64] {
        &self.positive_roots[i]
    }

    pub fn root_vec(&self, i: usize) -> RatVec {
        RatVec::from_ints(&self.positive_roots[i])
    }

    /// Index of a positive root given by its coordinates.
    pub fn root_index(&self, coords: &[i64]) -> Option<usize> {
        self.lookup.get(coords).copied()
    }

    /// Index of the positive root `±coords`, with the sign that was needed.
    pub fn signed_root_index(&self, coords: &[i64]) -> Option<(usize, bool)> {
        if let Some(i) = self.root_index(coords) {
            return Some((i, true));
        }
        let neg: Vec<i64> = coords.iter().map(|x| -x).collect();
        self.root_index(&neg).map(|i| (i, false))
    }

    pub fn fundamental_weights(&self) -> &[RatVec] {
        &self.weights
    }

    pub fn delta(&self) -> &RatVec {
        &self.delta
    }

    /// `G x`: pairing with the result is the inner product with `x`.
    pub fn covector(&self, x: &RatVec) -> RatVec {
        RatVec::new(
            self.gram
                .iter()
                .map(|row| row.iter().zip(x.coords()).fold(Rat::zero(), |acc, (&g, c)| acc + c * rat(g)))
                .collect(),
        )
    }

    pub fn inner(&self, x: &RatVec, y: &RatVec) -> Rat {
        self.covector(x).dot(y)
    }

    pub fn inner_int(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                s += x[i] * self.gram[i][j] * y[j];
            }
        }
        s
    }

    /// Coefficients of `x` in the basis of fundamental weights.
    pub fn weight_coordinates(&self, x: &RatVec) -> Vec<Rat> {
        (0..self.rank)
            .map(|i| self.inner(x, &RatVec::unit(self.rank, i)) * rat(2) / rat(self.gram[i][i]))
            .collect()
    }

    /// Image of `x` under the simple reflection `s_i`.
    pub fn reflect_simple(&self, i: usize, x: &[i64]) -> Vec<i64> {
        let coeff: i64 = (0..self.rank).map(|j| self.cartan[i][j] * x[j]).sum();
        let mut out = x.to_vec();
        out[i] -= coeff;
        out
    }

    /// Matrix (columns are images of simple roots) of the reflection in root `beta`.
    pub fn reflection_matrix(&self, beta: &[i64]) -> Vec<i64> {
        let n = self.rank;
        let bb = self.inner_int(beta, beta);
        let mut m = vec![0i64; n * n];
        for j in 0..n {
            let e: Vec<i64> = (0..n).map(|k| i64::from(k == j)).collect();
            let c = 2 * self.inner_int(&e, beta) / bb;
            for r in 0..n {
                m[r * n + j] = e[r] - c * beta[r];
            }
        }
        m
    }

    /// Every simple-root permutation preserving the Cartan and Gram matrices.
    pub fn diagram_automorphisms(&self) -> Vec<DiagramAutomorphism> {
        let n = self.rank;
        let mut out = Vec::new();
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.extend_automorphism(0, &mut perm, &mut used, &mut out);
        out.sort_by(|a, b| a.perm.cmp(&b.perm));
        out
    }

    fn extend_automorphism(
        &self,
        i: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<DiagramAutomorphism>,
    ) {
        let n = self.rank;
        if i == n {
            out.push(DiagramAutomorphism { perm: perm.clone() });
            return;
        }
        for t in 0..n {
            if used[t] || self.gram[t][t] != self.gram[i][i] {
                continue;
            }
            let ok = (0..i).all(|j| {
                self.cartan[i][j] == self.cartan[t][perm[j]]
                    && self.cartan[j][i] == self.cartan[perm[j]][t]
                    && self.gram[i][j] == self.gram[t][perm[j]]
            });
            if ok {
                perm[i] = t;
                used[t] = true;
                self.extend_automorphism(i + 1, perm, used, out);
                used[t] = false;
                perm[i] = usize::MAX;
            }
        }
    }

    /// Short label such as `A3` or `A2xA1`.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.components.iter().map(|c| format!("{}{}", c.kind, c.rank)).collect();
        parts.join("x")
    }
}

pub fn classical_root_count(kind: RootType, m: usize) -> usize {
    match kind {
        RootType::A => m * (m + 1) / 2,
        RootType::B | RootType::C => m * m,
        RootType::D => m * (m - 1),
    }
}

pub fn classical_group_order(kind: RootType, m: usize) -> u128 {
    let fact = |k: usize| (1..=k as u128).product::<u128>();
    match kind {
        RootType::A => fact(m + 1),
        RootType::B | RootType::C => (1u128 << m) * fact(m),
        RootType::D => (1u128 << (m - 1)) * fact(m),
    }
}

fn connected_components(gram: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = gram.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            for j in 0..n {
                if !seen[j] && gram[i][j] != 0 {
                    seen[j] = true;
                    comp.push(j);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn classify(gram: &[Vec<i64>], cartan: &[Vec<i64>], simple: Vec<usize>) -> Result<Component, RootSystemError> {
    let m = simple.len();
    let unsupported = || RootSystemError::UnsupportedType(format!("component on simple roots {simple:?}"));
    let degree = |i: usize| simple.iter().filter(|&&j| j != i && gram[i][j] != 0).count();
    let edges: usize = simple.iter().map(|&i| degree(i)).sum::<usize>() / 2;
    if edges + 1 != m || simple.iter().any(|&i| simple.iter().any(|&j| cartan[i][j] < -2)) {
        return Err(unsupported());
    }
    let lengths: Vec<i64> = simple.iter().map(|&i| gram[i][i]).collect();
    let min_len = *lengths.iter().min().unwrap();
    let short = lengths.iter().filter(|&&l| l == min_len).count();
    let kind = if m == 1 {
        RootType::A
    } else if short == m {
        let branch: Vec<usize> = simple.iter().copied().filter(|&i| degree(i) >= 3).collect();
        match branch.as_slice() {
            [] => RootType::A,
            [b] if degree(*b) == 3 => {
                let leaves = simple.iter().filter(|&&j| gram[*b][j] != 0 && j != *b && degree(j) == 1).count();
                if leaves >= 2 {
                    RootType::D
                } else {
                    return Err(unsupported());
                }
            }
            _ => return Err(unsupported()),
        }
    } else if simple.iter().any(|&i| degree(i) > 2) {
        return Err(unsupported());
    } else if short == 1 {
        RootType::B
    } else if m - short == 1 {
        RootType::C
    } else {
        return Err(unsupported());
    };
    Ok(Component { kind, rank: m, simple })
}

/// Positive roots by increasing height, using root strings through simple roots.
fn positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let mut all: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|k| i64::from(k == i)).collect()).collect();
    let mut set: std::collections::HashSet<Vec<i64>> = all.iter().cloned().collect();
    let mut layer = all.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..n {
                let is_simple_i = beta.iter().enumerate().all(|(k, &x)| x == i64::from(k == i));
                if is_simple_i {
                    continue;
                }
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if set.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pairing: i64 = (0..n).map(|j| cartan[i][j] * beta[j]).sum();
                let q = p - pairing;
                if q > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if set.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    all
}
