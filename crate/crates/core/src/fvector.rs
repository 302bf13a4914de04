//! Closed-form face counts for the minimal and maximal permutonestohedra of type A.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("index out of range: {what}")]
    OutOfRange { what: String },
    #[error("division by {divisor} is not exact")]
    NotIntegral { divisor: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    /// Weakly decreasing.
    pub parts: Vec<usize>,
    /// `multiplicities[i]` is how often `i` occurs; index 0 is unused.
    pub multiplicities: Vec<usize>,
    /// Number of distinct orderings of the parts.
    pub weight: BigUint,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Self {
        let n: usize = parts.iter().sum();
        let mut multiplicities = vec![0; n + 1];
        for &p in &parts {
            multiplicities[p] += 1;
        }
        let denom = multiplicities.iter().fold(BigUint::one(), |acc, &m| acc * factorial(m));
        let weight = factorial(parts.len()) / denom;
        Partition { parts, multiplicities, weight }
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `n! / prod(parts!)`, the index of the matching Young subgroup.
    pub fn multinomial(&self) -> BigUint {
        let n: usize = self.parts.iter().sum();
        factorial(n) / self.parts.iter().fold(BigUint::one(), |acc, &p| acc * factorial(p))
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Partitions of `n` in reverse lexicographic order.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    if n > 0 {
        rec(n, n, &mut Vec::new(), &mut raw);
    }
    raw.into_iter().map(Partition::new).collect()
}

/// Parenthesizations of a list of `l` items using `k` pairs.
pub fn cayley_count(l: usize, k: usize) -> Result<BigUint, FormulaError> {
    if l < 2 || k > l - 2 {
        return Err(FormulaError::OutOfRange { what: format!("cayley_count(l={l}, k={k}) needs 0 <= k <= l-2") });
    }
    let num = binomial(l - 2, k) * binomial(l + k, k);
    let (q, r) = num.div_rem(&BigUint::from(k as u64 + 1));
    if !r.is_zero() {
        return Err(FormulaError::NotIntegral { divisor: k as u64 + 1 });
    }
    Ok(q)
}

/// Chains `1 < j_1 < ... < j_k < l`, each weighted by the product of `C(j_{t+1}-1, j_t-1)` with `j_{k+1} = l`.
pub fn refinement_chains(l: usize, k: usize) -> BigUint {
    if k == 0 {
        return BigUint::one();
    }
    if l < 3 {
        return BigUint::zero();
    }
    let mut g: Vec<BigUint> = (0..l).map(|j| if j >= 2 { BigUint::one() } else { BigUint::zero() }).collect();
    for _ in 1..k {
        let mut next = vec![BigUint::zero(); l];
        for (j2, slot) in next.iter_mut().enumerate().skip(2) {
            for (j, gj) in g.iter().enumerate().take(j2).skip(2) {
                if !gj.is_zero() {
                    *slot += gj * binomial(j2 - 1, j - 1);
                }
            }
        }
        g = next;
    }
    g.iter().enumerate().skip(2).map(|(j, gj)| gj * binomial(l - 1, j - 1)).sum()
}

fn check_range(n: usize, k: usize) -> Result<(), FormulaError> {
    if n < 2 || k > n - 2 {
        return Err(FormulaError::OutOfRange { what: format!("face count (n={n}, k={k}) needs n >= 2 and 0 <= k <= n-2") });
    }
    Ok(())
}

fn face_count(n: usize, k: usize, bracket: impl Fn(usize) -> Result<BigUint, FormulaError>) -> Result<BigUint, FormulaError> {
    check_range(n, k)?;
    let mut total = BigUint::zero();
    for lambda in partitions(n) {
        if lambda.len() >= 2 + k {
            total += &lambda.weight * lambda.multinomial() * bracket(lambda.len())?;
        }
    }
    Ok(total)
}

/// Faces of codimension `k + 1` of the minimal permutonestohedron of type `A_{n-1}`.
pub fn minimal_face_count(n: usize, k: usize) -> Result<BigUint, FormulaError> {
    face_count(n, k, |l| cayley_count(l, k))
}

/// Faces of codimension `k + 1` of the maximal permutonestohedron of type `A_{n-1}`.
pub fn maximal_face_count(n: usize, k: usize) -> Result<BigUint, FormulaError> {
    face_count(n, k, |l| Ok(refinement_chains(l, k)))
}

/// Full f-vector indexed by dimension, with the polytope itself at dimension `n - 1`.
pub fn formula_f_vector(n: usize, maximal: bool) -> Result<Vec<BigUint>, FormulaError> {
    check_range(n, 0)?;
    let mut f = vec![BigUint::zero(); n];
    for k in 0..=n - 2 {
        f[n - 2 - k] = if maximal { maximal_face_count(n, k)? } else { minimal_face_count(n, k)? };
    }
    f[n - 1] = BigUint::one();
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn partition_examples() {
        let p4 = partitions(4);
        assert_eq!(p4.len(), 5);
        let w = |parts: &[usize]| p4.iter().find(|p| p.parts == parts).unwrap().weight.clone();
        assert_eq!(w(&[2, 1, 1]), big(3));
        assert_eq!(w(&[2, 2]), big(1));
        let p1 = partitions(1);
        assert_eq!(p1.len(), 1);
        assert_eq!(p1[0].weight, big(1));
        let counts: Vec<usize> = (1..=10).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn cayley_examples() {
        assert_eq!(cayley_count(4, 1).unwrap(), big(5));
        assert_eq!(cayley_count(4, 2).unwrap(), big(5));
        assert_eq!(cayley_count(7, 0).unwrap(), big(1));
        assert!(matches!(cayley_count(4, 3), Err(FormulaError::OutOfRange { .. })));
        assert!(cayley_count(1, 0).is_err());
    }

    #[test]
    fn cayley_top_is_catalan() {
        for l in 2..15 {
            let catalan = binomial(2 * (l - 1), l - 1) / big(l as u64);
            assert_eq!(cayley_count(l, l - 2).unwrap(), catalan);
        }
    }

    #[test]
    fn a3_counts() {
        assert_eq!(minimal_face_count(4, 2).unwrap(), big(120));
        assert_eq!(minimal_face_count(4, 0).unwrap(), big(74));
        assert_eq!(minimal_face_count(4, 1).unwrap(), big(192));
        assert_eq!(maximal_face_count(4, 2).unwrap(), big(144));
        assert_eq!(maximal_face_count(4, 0).unwrap(), big(74));
        assert_eq!(maximal_face_count(4, 1).unwrap(), big(216));
        assert!(minimal_face_count(4, 3).is_err());
    }

    #[test]
    fn small_n() {
        assert_eq!(formula_f_vector(2, false).unwrap(), vec![big(2), big(1)]);
        assert_eq!(formula_f_vector(3, false).unwrap(), vec![big(12), big(12), big(1)]);
        assert_eq!(formula_f_vector(3, true).unwrap(), vec![big(12), big(12), big(1)]);
    }

    #[test]
    fn vertices_factor() {
        for n in 2..9 {
            let nf = factorial(n);
            let catalan = binomial(2 * (n - 1), n - 1) / big(n as u64);
            assert_eq!(minimal_face_count(n, n - 2).unwrap(), &catalan * &nf);
            assert_eq!(maximal_face_count(n, n - 2).unwrap(), factorial(n - 1) * &nf);
        }
    }
}
