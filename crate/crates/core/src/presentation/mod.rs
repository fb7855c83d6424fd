//! Finitely presented Lie algebras.
//!
//! A [`Presentation`] is a list of generators plus relation polynomials in the
//! free Lie algebra (each relation is `lhs − rhs`). Two independent engines
//! turn a presentation into a structure table:
//!
//! * [`closure`] builds the filtered ideal spanned by iterated brackets of the
//!   relations with generators and reads the quotient off an echelon basis;
//! * [`rewriter`] is specific to the 𝔤₂ presentation and reduces any bracket
//!   to degree ≤ 3 by Jacobi expansion plus the three quadruple rules.
//!
//! [`engine`] runs either path against a named basis and compares them.

pub mod closure;
pub mod engine;
pub mod parser;
pub mod rewriter;

use std::fmt;

use thiserror::Error;

use crate::free_lie::{format_term, FreeLieAlgebra, Generator, LiePoly, Tower};
use crate::linalg::int;

pub use closure::{quotient_closure, QuotientBasis};
pub use engine::{
    closure_structure_table, cross_validate, cross_validate_quotient, g2_named_basis,
    rewriter_applicability, rewriter_structure_table, structure_table, CrossValidation,
    EngineError, NamedBasisMap, PairMismatch, DEFAULT_DEGREE_BOUND,
};
pub use parser::{parse_presentation, ParseError, ParseErrorKind};
pub use rewriter::{reduce_bracket, reduce_quadruple, QuadrupleCase, TowerElem};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("relation {relation} uses generator index {letter}, but only {count} generators are declared")]
    UndeclaredGenerator {
        relation: usize,
        letter: usize,
        count: usize,
    },
    #[error("generator {index} is named '{name}', which is not a valid identifier")]
    BadName { index: usize, name: String },
    #[error("generator indices must be 0..n in order")]
    NonContiguous,
}

/// Generators plus relations `r = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<Generator>,
    relations: Vec<LiePoly>,
}

impl Presentation {
    pub fn new(
        generators: Vec<Generator>,
        relations: Vec<LiePoly>,
    ) -> Result<Self, PresentationError> {
        if generators.iter().enumerate().any(|(i, g)| g.index != i) {
            return Err(PresentationError::NonContiguous);
        }
        for g in &generators {
            let mut chars = g.name.chars();
            let ok = chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
                && chars.all(|c| c.is_alphanumeric() || c == '_')
                && g.name != "generators"
                && g.name != "relation";
            if !ok {
                return Err(PresentationError::BadName {
                    index: g.index,
                    name: g.name.clone(),
                });
            }
        }
        for (i, r) in relations.iter().enumerate() {
            if let Some(l) = r.max_letter() {
                if l as usize >= generators.len() {
                    return Err(PresentationError::UndeclaredGenerator {
                        relation: i,
                        letter: l as usize,
                        count: generators.len(),
                    });
                }
            }
        }
        Ok(Presentation {
            generators,
            relations,
        })
    }

    /// Generators named `prefix1, prefix2, …`.
    pub fn with_numbered_generators(
        prefix: &str,
        count: usize,
        relations: Vec<LiePoly>,
    ) -> Result<Self, PresentationError> {
        let generators = (0..count)
            .map(|i| Generator {
                index: i,
                name: format!("{prefix}{}", i + 1),
            })
            .collect();
        Self::new(generators, relations)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn relations(&self) -> &[LiePoly] {
        &self.relations
    }

    /// Highest degree among the relations (0 if there are none).
    pub fn max_relation_degree(&self) -> usize {
        self.relations
            .iter()
            .map(LiePoly::degree)
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.generator_names();
        writeln!(f, "generators: {}", names.join(" "))?;
        for r in &self.relations {
            let mut terms = r.terms().rev();
            match terms.next() {
                None => writeln!(f, "relation: 0 = 0")?,
                Some((m, c)) => {
                    let lhs = format_term(true, c, &m.fmt_with(&names));
                    let rest: Vec<String> = terms
                        .enumerate()
                        .map(|(i, (m, c))| format_term(i == 0, &-c.clone(), &m.fmt_with(&names)))
                        .collect();
                    let rhs = if rest.is_empty() {
                        "0".to_string()
                    } else {
                        rest.concat()
                    };
                    writeln!(f, "relation: {lhs} = {rhs}")?;
                }
            }
        }
        Ok(())
    }
}

/// Levi-Civita symbol on 1-based indices in {1, 2, 3}.
pub fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    assert!(
        [i, j, k].iter().all(|v| (1..=3).contains(v)),
        "Levi-Civita indices must lie in 1..=3"
    );
    match (i, j, k) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1,
        (3, 2, 1) | (1, 3, 2) | (2, 1, 3) => -1,
        _ => 0,
    }
}

/// The three quadruple-relation families of the 𝔤₂ presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelationFamily {
    /// `[x_i,[x_j,[x_i,x_k]]] = 2 ε_ijk x_i`
    First,
    /// `[x_i,[x_i,[x_j,x_k]]] = 4 ε_ijk x_i`
    Second,
    /// `[x_i,[x_j,[x_j,x_k]]] = 6 ε_ijk x_j`
    Third,
}

impl RelationFamily {
    pub const ALL: [RelationFamily; 3] = [Self::First, Self::Second, Self::Third];

    pub fn coefficient(self) -> i64 {
        match self {
            Self::First => 2,
            Self::Second => 4,
            Self::Third => 6,
        }
    }

    /// Left-hand tower and right-hand generator (1-based) at `(i, j, k)`.
    pub fn shape(self, i: usize, j: usize, k: usize) -> ([usize; 4], usize) {
        match self {
            Self::First => ([i, j, i, k], i),
            Self::Second => ([i, i, j, k], i),
            Self::Third => ([i, j, j, k], j),
        }
    }
}

/// One instantiated quadruple relation `tower = coefficient · x_rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadrupleRelation {
    pub family: RelationFamily,
    /// `(i, j, k)`, 1-based.
    pub indices: [usize; 3],
    pub tower: Tower,
    pub coefficient: i64,
    /// 1-based generator on the right-hand side.
    pub rhs_generator: usize,
    /// `tower − coefficient · x_rhs` in the Lyndon basis.
    pub poly: LiePoly,
}

/// All 3 × 27 instances, with the given family coefficients in place of
/// (2, 4, 6). Identically zero relations are kept here.
pub fn quadruple_relation_instances(coefficients: [i64; 3]) -> Vec<QuadrupleRelation> {
    let alg = FreeLieAlgebra::new();
    let mut out = Vec::with_capacity(81);
    for (f, family) in RelationFamily::ALL.into_iter().enumerate() {
        for i in 1..=3 {
            for j in 1..=3 {
                for k in 1..=3 {
                    let (tower, rhs) = family.shape(i, j, k);
                    let tower = Tower::one_based(&tower);
                    let coefficient = coefficients[f] * levi_civita(i, j, k);
                    let lhs = alg
                        .tower_to_poly(&tower)
                        .expect("degree 4 is below the cap");
                    let poly =
                        &lhs - &LiePoly::generator((rhs - 1) as u8).scaled(&int(coefficient));
                    out.push(QuadrupleRelation {
                        family,
                        indices: [i, j, k],
                        tower,
                        coefficient,
                        rhs_generator: rhs,
                        poly,
                    });
                }
            }
        }
    }
    out
}

/// The 𝔤₂ relations with identically zero instances dropped. Instances with
/// ε = 0 and a nonzero tower remain as homogeneous relations.
pub fn g2_relations() -> Vec<LiePoly> {
    quadruple_relation_instances([2, 4, 6])
        .into_iter()
        .filter(|r| !r.poly.is_zero())
        .map(|r| r.poly)
        .collect()
}

pub fn g2_presentation() -> Presentation {
    Presentation::with_numbered_generators("x", 3, g2_relations())
        .expect("g2 relations only use x1, x2, x3")
}

/// Presentation text for the quadruple families with the given
/// coefficients, written as towers so the file reads like the relations.
pub fn quadruple_presentation_text(coefficients: [i64; 3]) -> String {
    let names: Vec<String> = (1..=3).map(|i| format!("x{i}")).collect();
    let mut out = String::from("generators: x1 x2 x3\n");
    let mut family = None;
    for r in quadruple_relation_instances(coefficients) {
        if r.poly.is_zero() {
            continue;
        }
        if family != Some(r.family) {
            let (tower, rhs) = r.family.shape(1, 2, 3);
            let f = RelationFamily::ALL
                .iter()
                .position(|&x| x == r.family)
                .unwrap();
            out.push_str(&format!(
                "# family {}: {} = {}*eps(i,j,k)*x{}, (i,j,k) = (1,2,3) shown\n",
                f + 1,
                Tower::one_based(&tower).fmt_with(&names),
                coefficients[f],
                rhs
            ));
            family = Some(r.family);
        }
        let rhs = match r.coefficient {
            0 => "0".to_string(),
            1 => format!("x{}", r.rhs_generator),
            -1 => format!("-x{}", r.rhs_generator),
            c => format!("{c}*x{}", r.rhs_generator),
        };
        out.push_str(&format!(
            "relation: {} = {}\n",
            r.tower.fmt_with(&names),
            rhs
        ));
    }
    out
}

/// The shipped 𝔤₂ presentation file.
pub fn g2_presentation_text() -> String {
    quadruple_presentation_text([2, 4, 6])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_lie::tower_to_poly;

    fn t(xs: &[usize]) -> LiePoly {
        tower_to_poly(&Tower::one_based(xs)).unwrap()
    }

    fn x(i: usize, c: i64) -> LiePoly {
        LiePoly::generator((i - 1) as u8).scaled(&int(c))
    }

    #[test]
    fn levi_civita_values() {
        assert_eq!(levi_civita(1, 2, 3), 1);
        assert_eq!(levi_civita(2, 1, 3), -1);
        assert_eq!(levi_civita(1, 1, 3), 0);
        let perms = [(1, 2, 3), (2, 3, 1), (3, 1, 2)];
        for (i, j, k) in perms {
            assert_eq!(levi_civita(i, j, k), -levi_civita(j, i, k));
            assert_eq!(levi_civita(i, j, k), -levi_civita(i, k, j));
        }
    }

    #[test]
    fn family_instances() {
        let all = quadruple_relation_instances([2, 4, 6]);
        assert_eq!(all.len(), 81);
        let find = |f: RelationFamily, idx: [usize; 3]| {
            all.iter()
                .find(|r| r.family == f && r.indices == idx)
                .unwrap()
                .poly
                .clone()
        };
        assert_eq!(
            find(RelationFamily::First, [1, 2, 3]),
            &t(&[1, 2, 1, 3]) - &x(1, 2)
        );
        assert_eq!(
            find(RelationFamily::Second, [3, 1, 2]),
            &t(&[3, 3, 1, 2]) - &x(3, 4)
        );
        let homogeneous = find(RelationFamily::First, [1, 2, 2]);
        assert_eq!(homogeneous, t(&[1, 2, 1, 2]));
        assert!(!homogeneous.is_zero());
    }

    #[test]
    fn zero_instances_are_dropped() {
        let rels = g2_relations();
        assert!(rels.iter().all(|r| !r.is_zero()));
        let zero = quadruple_relation_instances([2, 4, 6])
            .iter()
            .filter(|r| r.poly.is_zero())
            .count();
        assert_eq!(rels.len() + zero, 81);
        // [x_i,[x_j,[x_j,x_j]]] and friends vanish in the free algebra.
        assert!(zero > 0);
    }

    #[test]
    fn shipped_text_parses_back_to_the_relations() {
        let p = parse_presentation(&g2_presentation_text()).unwrap();
        assert_eq!(p, g2_presentation());
    }

    #[test]
    fn display_round_trips() {
        let p = g2_presentation();
        let again = parse_presentation(&p.to_string()).unwrap();
        assert_eq!(again, p);
        let sl2 = parse_presentation(
            "generators: e f h\nrelation: [h,e] = 2*e\nrelation: [h,f] = -2*f\nrelation: [e,f] = h\nrelation: 0 = 0",
        )
        .unwrap();
        assert_eq!(parse_presentation(&sl2.to_string()).unwrap(), sl2);
    }

    #[test]
    fn rejects_undeclared_generators() {
        let err = Presentation::with_numbered_generators("x", 2, vec![LiePoly::generator(2)])
            .unwrap_err();
        assert!(matches!(
            err,
            PresentationError::UndeclaredGenerator { letter: 2, .. }
        ));
    }
}
