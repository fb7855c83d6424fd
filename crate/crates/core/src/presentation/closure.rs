//! Quotient of the free Lie algebra by the ideal of a presentation,
//! truncated at a degree bound.
//!
//! The ideal is spanned by `ad(x_{g1}) ⋯ ad(x_{gk}) r` over relations `r`.
//! Relations need not be homogeneous, so the engine works in the filtered
//! space of Lyndon polynomials of degree ≤ bound: a consequence is kept only
//! if its top degree stays within the bound, and every discarded ("truncated")
//! consequence is recorded so stabilization can be certified.
//!
//! Pivots are always the largest monomial in (degree, lex) order. The
//! monomials that never become pivots are therefore the smallest available
//! ones, and they serve as the quotient's representatives.

use std::collections::{BTreeMap, VecDeque};

use num_traits::Zero;

use super::engine::EngineError;
use super::Presentation;
use crate::free_lie::{lyndon_words, FreeLieAlgebra, LiePoly, LyndonMonomial};
use crate::linalg::{Rational, SparseEchelon};

/// Summary of consequences that exceeded the degree bound.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TruncationRecord {
    pub count: usize,
    /// Lowest degree occurring in any truncated consequence.
    pub lowest_degree: Option<usize>,
}

#[derive(Debug)]
struct Closure {
    echelon: SparseEchelon<LyndonMonomial>,
    truncated: TruncationRecord,
}

fn close(pres: &Presentation, bound: usize, alg: &FreeLieAlgebra) -> Result<Closure, EngineError> {
    let gens = pres.generators().len();
    let mut echelon = SparseEchelon::new();
    let mut truncated = TruncationRecord::default();
    let mut queue: VecDeque<LiePoly> = pres
        .relations()
        .iter()
        .filter(|r| !r.is_zero())
        .cloned()
        .collect();
    while let Some(v) = queue.pop_front() {
        if v.degree() > bound {
            truncated.count += 1;
            let low = v.min_degree();
            truncated.lowest_degree = Some(truncated.lowest_degree.map_or(low, |d| d.min(low)));
            continue;
        }
        let reduced = echelon.reduce_top(v.into_map());
        if reduced.is_empty() {
            continue;
        }
        let row = LiePoly::from_map(reduced.clone());
        echelon.insert(reduced);
        // The ideal is closed under ad of generators applied to the span, and
        // the inserted rows span the same space as the consequences seen so far.
        for g in 0..gens {
            queue.push_back(alg.ad_generator(g as u8, &row)?);
        }
    }
    Ok(Closure { echelon, truncated })
}

/// Free Lie algebra modulo the closed ideal, up to a degree bound.
#[derive(Clone, Debug)]
pub struct QuotientBasis {
    generator_names: Vec<String>,
    degree_bound: usize,
    representatives: Vec<LyndonMonomial>,
    index: BTreeMap<LyndonMonomial, usize>,
    echelon: SparseEchelon<LyndonMonomial>,
    free_dims: Vec<usize>,
    truncated: TruncationRecord,
    previous_dim: Option<usize>,
    stabilized: bool,
}

impl QuotientBasis {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn is_stabilized(&self) -> bool {
        self.stabilized
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    /// Representative monomials, in increasing (degree, lex) order.
    pub fn representative_monomials(&self) -> &[LyndonMonomial] {
        &self.representatives
    }

    pub fn representatives(&self) -> Vec<LiePoly> {
        self.representatives
            .iter()
            .cloned()
            .map(LiePoly::monomial)
            .collect()
    }

    pub fn representative_names(&self) -> Vec<String> {
        self.representatives
            .iter()
            .map(|m| m.fmt_with(&self.generator_names))
            .collect()
    }

    /// Number of representatives of each degree (index 0 = degree 1).
    pub fn dims_by_degree(&self) -> Vec<usize> {
        let mut out = vec![0; self.degree_bound];
        for m in &self.representatives {
            out[m.degree() - 1] += 1;
        }
        out
    }

    /// Lyndon basis size of the free algebra per degree.
    pub fn free_dims_by_degree(&self) -> &[usize] {
        &self.free_dims
    }

    /// Dimension of the same closure at `degree_bound − 1`, when computed.
    pub fn previous_dim(&self) -> Option<usize> {
        self.previous_dim
    }

    pub fn truncation(&self) -> &TruncationRecord {
        &self.truncated
    }

    /// Dimension of the consequence span inside the truncated free algebra.
    pub fn ideal_dim(&self) -> usize {
        self.echelon.len()
    }

    /// Normal form of `p`, a combination of representatives congruent to it.
    pub fn normal_form(&self, p: &LiePoly) -> Result<LiePoly, EngineError> {
        if p.degree() > self.degree_bound {
            return Err(EngineError::DegreeAboveBound {
                degree: p.degree(),
                bound: self.degree_bound,
            });
        }
        Ok(LiePoly::from_map(
            self.echelon.normal_form(p.as_map().clone()),
        ))
    }

    /// Coordinates of `p` over the representatives.
    pub fn reduce(&self, p: &LiePoly) -> Result<Vec<Rational>, EngineError> {
        let nf = self.normal_form(p)?;
        let mut out = vec![Rational::zero(); self.dim()];
        for (m, c) in nf.terms() {
            out[self.index[m]] = c.clone();
        }
        Ok(out)
    }

    /// For a monomial eliminated by the ideal, the consequence `m − nf(m)`
    /// that kills it; `None` if `m` is a representative.
    pub fn elimination(&self, m: &LyndonMonomial) -> Option<LiePoly> {
        if !self.echelon.is_pivot(m) || m.degree() > self.degree_bound {
            return None;
        }
        let m = LiePoly::monomial(m.clone());
        let nf = LiePoly::from_map(self.echelon.normal_form(m.as_map().clone()));
        Some(&m - &nf)
    }

    /// Every Lyndon monomial of the given degree with its killing consequence.
    pub fn eliminations_in_degree(&self, degree: usize) -> Vec<(LyndonMonomial, LiePoly)> {
        let alphabet = self.generator_names.len();
        if degree == 0 || degree > self.degree_bound {
            return Vec::new();
        }
        lyndon_words(alphabet, degree)
            .swap_remove(degree - 1)
            .into_iter()
            .filter_map(|m| self.elimination(&m).map(|e| (m, e)))
            .collect()
    }
}

fn build(pres: &Presentation, bound: usize, closure: Closure) -> QuotientBasis {
    let words = lyndon_words(pres.generators().len(), bound);
    let free_dims = words.iter().map(Vec::len).collect();
    let representatives: Vec<LyndonMonomial> = words
        .into_iter()
        .flatten()
        .filter(|m| !closure.echelon.is_pivot(m))
        .collect();
    let index = representatives
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    QuotientBasis {
        generator_names: pres.generator_names(),
        degree_bound: bound,
        representatives,
        index,
        echelon: closure.echelon,
        free_dims,
        truncated: closure.truncated,
        previous_dim: None,
        stabilized: false,
    }
}

/// Closes the relations of `pres` under brackets with generators up to
/// `degree_bound` and returns the quotient.
///
/// `stabilized` is set when the dimension at `degree_bound − 1` is the same
/// and no truncated consequence reaches down to degree
/// `degree_bound − max relation degree`.
pub fn quotient_closure(
    pres: &Presentation,
    degree_bound: usize,
) -> Result<QuotientBasis, EngineError> {
    let needed = pres.max_relation_degree().max(1);
    if degree_bound < needed {
        return Err(EngineError::DegreeBoundTooSmall {
            bound: degree_bound,
            needed,
        });
    }
    let alg = FreeLieAlgebra::with_degree_cap(degree_bound + 1);
    let mut q = build(pres, degree_bound, close(pres, degree_bound, &alg)?);
    if degree_bound > needed {
        let below = degree_bound - 1;
        let prev = build(pres, below, close(pres, below, &alg)?);
        q.previous_dim = Some(prev.dim());
    }
    let low_ok = match q.truncated.lowest_degree {
        None => true,
        Some(low) => low + needed > degree_bound,
    };
    q.stabilized = q.previous_dim == Some(q.dim()) && low_ok;
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    #[test]
    fn sl2_closes_in_degree_one() {
        let p = parse_presentation(
            "generators: e f h\nrelation: [h,e] = 2*e\nrelation: [h,f] = -2*f\nrelation: [e,f] = h",
        )
        .unwrap();
        let q = quotient_closure(&p, 4).unwrap();
        assert_eq!(q.dim(), 3);
        assert!(q.is_stabilized());
        assert_eq!(q.representative_names(), vec!["e", "f", "h"]);
    }

    #[test]
    fn heisenberg() {
        let p =
            parse_presentation("generators: p q\nrelation: [p,[p,q]] = 0\nrelation: [q,[p,q]] = 0")
                .unwrap();
        let q = quotient_closure(&p, 5).unwrap();
        assert_eq!(q.dim(), 3);
        assert!(q.is_stabilized());
        assert_eq!(q.representative_names(), vec!["p", "q", "[p,q]"]);
    }

    #[test]
    fn no_relations_gives_the_free_algebra() {
        let p = Presentation::with_numbered_generators("x", 3, vec![]).unwrap();
        let q = quotient_closure(&p, 3).unwrap();
        assert_eq!(q.dim(), 14);
        assert_eq!(q.dims_by_degree(), vec![3, 3, 8]);
        assert!(!q.is_stabilized());
    }

    #[test]
    fn reduce_is_coordinate_projection_on_representatives() {
        let p =
            parse_presentation("generators: p q\nrelation: [p,[p,q]] = 0\nrelation: [q,[p,q]] = 0")
                .unwrap();
        let q = quotient_closure(&p, 4).unwrap();
        for (k, r) in q.representatives().iter().enumerate() {
            let coords = q.reduce(r).unwrap();
            for (i, c) in coords.iter().enumerate() {
                assert_eq!(c.is_zero(), i != k);
            }
        }
        let too_high = LiePoly::monomial(LyndonMonomial::new(vec![0, 0, 0, 0, 1]).unwrap());
        assert!(matches!(
            q.reduce(&too_high),
            Err(EngineError::DegreeAboveBound {
                degree: 5,
                bound: 4
            })
        ));
    }

    #[test]
    fn bound_below_relation_degree_is_rejected() {
        let p = parse_presentation("generators: a b\nrelation: [a,[a,b]] = 0").unwrap();
        assert!(matches!(
            quotient_closure(&p, 2),
            Err(EngineError::DegreeBoundTooSmall {
                bound: 2,
                needed: 3
            })
        ));
    }
}
