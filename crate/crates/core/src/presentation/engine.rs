//! Structure tables from a presentation, via either engine, and their
//! comparison.

use std::collections::BTreeSet;

use rayon::prelude::*;
use thiserror::Error;

use super::closure::{quotient_closure, QuotientBasis};
use super::rewriter::{self, TowerElem};
use super::{g2_relations, Presentation};
use crate::free_lie::{FreeLieAlgebra, FreeLieError, LiePoly};
use crate::linalg::{rat, solve_in_span, RatMatrix, Rational};
use crate::table::StructureTable;

pub const DEFAULT_DEGREE_BOUND: usize = 8;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("degree bound {bound} is below the maximal relation degree {needed}")]
    DegreeBoundTooSmall { bound: usize, needed: usize },
    #[error("element of degree {degree} exceeds the degree bound {bound}")]
    DegreeAboveBound { degree: usize, bound: usize },
    #[error("quotient did not stabilize at degree bound {0}")]
    NotStabilized(usize),
    #[error("names do not form a basis: {0}")]
    NamesNotBasis(String),
    #[error("rewriter not applicable: {0}")]
    RewriterNotApplicable(String),
    #[error(transparent)]
    FreeLie(#[from] FreeLieError),
}

/// Named elements of the free Lie algebra used as the table's basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedBasisMap {
    entries: Vec<(String, LiePoly)>,
}

impl NamedBasisMap {
    pub fn new(entries: Vec<(String, LiePoly)>) -> Self {
        NamedBasisMap { entries }
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn entries(&self) -> &[(String, LiePoly)] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&LiePoly> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The representatives themselves, named by their standard bracketing.
    pub fn from_quotient(q: &QuotientBasis) -> Self {
        NamedBasisMap {
            entries: q
                .representative_names()
                .into_iter()
                .zip(q.representatives())
                .collect(),
        }
    }
}

/// The 14 named elements of 𝔤₂ in the order
/// h1, h2, a12, a13, a23, a21, a31, a32, x1, x2, x3, y1, y2, y3:
///
/// * `y1 = ½[x2,x3]`, `y2 = ½[x3,x1]`, `y3 = ½[x1,x2]`;
/// * `a12 = ⅓[x2,y1]`, `a23 = ⅓[x3,y2]`, `a13 = ⅓[x3,y1]`,
///   `a21 = ⅓[x1,y2]`, `a32 = ⅓[x2,y3]`, `a31 = ⅓[x1,y3]`;
/// * `h1 = ⅓([x1,y1] − [x2,y2])`, `h2 = ⅓([x2,y2] − [x3,y3])`.
pub fn g2_named_basis() -> NamedBasisMap {
    let alg = FreeLieAlgebra::new();
    let br = |a: &LiePoly, b: &LiePoly| alg.bracket(a, b).expect("degree <= 3");
    let x: Vec<LiePoly> = (0..3).map(LiePoly::generator).collect();
    let half = rat(1, 2);
    let third = rat(1, 3);
    let y = [
        br(&x[1], &x[2]).scaled(&half),
        br(&x[2], &x[0]).scaled(&half),
        br(&x[0], &x[1]).scaled(&half),
    ];
    let a = |xi: usize, yj: usize| br(&x[xi], &y[yj]).scaled(&third);
    let h1 = (&br(&x[0], &y[0]) - &br(&x[1], &y[1])).scaled(&third);
    let h2 = (&br(&x[1], &y[1]) - &br(&x[2], &y[2])).scaled(&third);
    let entries = vec![
        ("h1", h1),
        ("h2", h2),
        ("a12", a(1, 0)),
        ("a13", a(2, 0)),
        ("a23", a(2, 1)),
        ("a21", a(0, 1)),
        ("a31", a(0, 2)),
        ("a32", a(1, 2)),
        ("x1", x[0].clone()),
        ("x2", x[1].clone()),
        ("x3", x[2].clone()),
        ("y1", y[0].clone()),
        ("y2", y[1].clone()),
        ("y3", y[2].clone()),
    ];
    NamedBasisMap::new(
        entries
            .into_iter()
            .map(|(n, p)| (n.to_string(), p))
            .collect(),
    )
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    if jobs <= 1 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Expresses `target` over the named coordinate rows.
fn named_coordinates(
    rows: &[Vec<Rational>],
    target: &[Rational],
) -> Result<Vec<Rational>, EngineError> {
    solve_in_span(rows, target).ok_or_else(|| {
        EngineError::NamesNotBasis("a bracket leaves the span of the named elements".into())
    })
}

fn check_basis(
    names: &NamedBasisMap,
    rows: &[Vec<Rational>],
    dim: usize,
) -> Result<(), EngineError> {
    if names.len() != dim {
        return Err(EngineError::NamesNotBasis(format!(
            "{} names for a quotient of dimension {dim}",
            names.len()
        )));
    }
    if dim > 0 && RatMatrix::from_rows(dim, rows).rank() < dim {
        return Err(EngineError::NamesNotBasis(
            "named elements are linearly dependent in the quotient".into(),
        ));
    }
    Ok(())
}

/// Structure table over `names` from a computed quotient. With `jobs > 1`
/// pairs are bracketed in parallel; the result is identical either way.
pub fn closure_structure_table(
    q: &QuotientBasis,
    names: &NamedBasisMap,
    jobs: usize,
) -> Result<StructureTable, EngineError> {
    let rows: Vec<Vec<Rational>> = names
        .entries()
        .iter()
        .map(|(_, p)| q.reduce(p))
        .collect::<Result<_, _>>()?;
    check_basis(names, &rows, q.dim())?;
    let polys: Vec<&LiePoly> = names.entries().iter().map(|(_, p)| p).collect();
    let cap = q.degree_bound() + 1;
    let all = pairs(names.len());
    let coords: Vec<Vec<Rational>> = with_jobs(jobs, || {
        all.par_iter()
            .map_init(
                || FreeLieAlgebra::with_degree_cap(cap),
                |alg, &(i, j)| {
                    let b = alg.bracket(polys[i], polys[j])?;
                    named_coordinates(&rows, &q.reduce(&b)?)
                },
            )
            .collect::<Result<_, EngineError>>()
    })?;
    let mut t = StructureTable::new(names.names());
    for ((i, j), c) in all.into_iter().zip(coords) {
        t.set_bracket(i, j, &c);
    }
    Ok(t)
}

/// Runs the closure at `degree_bound` and builds the table; the default
/// names are the quotient representatives.
pub fn structure_table(
    pres: &Presentation,
    names: Option<&NamedBasisMap>,
    degree_bound: usize,
    jobs: usize,
) -> Result<StructureTable, EngineError> {
    let q = quotient_closure(pres, degree_bound)?;
    if !q.is_stabilized() {
        return Err(EngineError::NotStabilized(degree_bound));
    }
    match names {
        Some(n) => closure_structure_table(&q, n, jobs),
        None => closure_structure_table(&q, &NamedBasisMap::from_quotient(&q), jobs),
    }
}

/// Structure table computed with the quadruple rewriter alone.
pub fn rewriter_structure_table(
    names: &NamedBasisMap,
    jobs: usize,
) -> Result<StructureTable, EngineError> {
    let elems: Vec<TowerElem> = names
        .entries()
        .iter()
        .map(|(_, p)| {
            if p.degree() > 3 || p.max_letter().is_some_and(|l| l > 2) {
                Err(EngineError::RewriterNotApplicable(
                    "named elements must have degree <= 3 in x1, x2, x3".into(),
                ))
            } else {
                Ok(rewriter::from_lie_poly(p))
            }
        })
        .collect::<Result<_, _>>()?;
    let rows: Vec<Vec<Rational>> = elems.iter().map(TowerElem::coordinates).collect();
    check_basis(names, &rows, 14)?;
    let all = pairs(names.len());
    let coords: Vec<Vec<Rational>> = with_jobs(jobs, || {
        all.par_iter()
            .map(|&(i, j)| {
                let b = rewriter::reduce_bracket(&elems[i], &elems[j]);
                named_coordinates(&rows, &b.coordinates())
            })
            .collect::<Result<_, EngineError>>()
    })?;
    let mut t = StructureTable::new(names.names());
    for ((i, j), c) in all.into_iter().zip(coords) {
        t.set_bracket(i, j, &c);
    }
    Ok(t)
}

/// Whether the quadruple rewriter models `pres`: three generators and
/// relations whose degree-4 parts are exactly those of the 𝔤₂ families, with
/// nothing outside degrees 1 and 4. Right-hand sides may differ, which is
/// what lets mutated presentations be compared against the rewriter.
pub fn rewriter_applicability(pres: &Presentation) -> Result<(), String> {
    if pres.generators().len() != 3 {
        return Err(format!(
            "the rewriter needs 3 generators, presentation has {}",
            pres.generators().len()
        ));
    }
    let mut tops = BTreeSet::new();
    for r in pres.relations() {
        if r.terms().any(|(m, _)| m.degree() != 4 && m.degree() != 1) {
            return Err("relations must be quadruple towers equal to degree-1 elements".into());
        }
        tops.insert(format!("{}", r.homogeneous_component(4)));
    }
    let expected: BTreeSet<String> = g2_relations()
        .iter()
        .map(|r| format!("{}", r.homogeneous_component(4)))
        .collect();
    if tops != expected {
        return Err("degree-4 parts differ from the quadruple relation families".into());
    }
    Ok(())
}

/// Disagreement between the two engines on `[b_i, b_j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairMismatch {
    pub i: usize,
    pub j: usize,
    pub rewriter: String,
    pub closure: String,
}

/// Outcome of running both engines on a presentation.
#[derive(Clone, Debug)]
pub struct CrossValidation {
    pub rewriter_applicable: bool,
    pub closure_dim: usize,
    pub stabilized: bool,
    pub mismatches: Vec<PairMismatch>,
    pub notes: Vec<String>,
    pub rewriter_table: Option<StructureTable>,
    pub closure_table: Option<StructureTable>,
}

impl CrossValidation {
    /// Both engines ran and produced the same 14-dimensional table.
    pub fn agrees(&self) -> bool {
        self.rewriter_applicable
            && self.stabilized
            && self.closure_dim == 14
            && self.mismatches.is_empty()
            && self.rewriter_table.is_some()
            && self.closure_table.is_some()
    }
}

/// Compares the rewriter against the ideal closure on all 91 pairs of the
/// named 𝔤₂ basis. Any failure on the closure side is recorded in `notes`.
pub fn cross_validate(
    pres: &Presentation,
    degree_bound: usize,
    jobs: usize,
) -> Result<CrossValidation, EngineError> {
    let q = quotient_closure(pres, degree_bound)?;
    cross_validate_quotient(pres, &q, jobs)
}

/// [`cross_validate`] against a quotient that is already computed.
pub fn cross_validate_quotient(
    pres: &Presentation,
    q: &QuotientBasis,
    jobs: usize,
) -> Result<CrossValidation, EngineError> {
    let degree_bound = q.degree_bound();
    let mut report = CrossValidation {
        rewriter_applicable: false,
        closure_dim: q.dim(),
        stabilized: q.is_stabilized(),
        mismatches: Vec::new(),
        notes: Vec::new(),
        rewriter_table: None,
        closure_table: None,
    };
    if let Err(why) = rewriter_applicability(pres) {
        report.notes.push(format!("rewriter not applicable: {why}"));
        return Ok(report);
    }
    report.rewriter_applicable = true;
    let names = g2_named_basis();
    let rw = rewriter_structure_table(&names, jobs)?;
    if !report.stabilized {
        report.notes.push(format!(
            "closure did not stabilize at degree bound {degree_bound}"
        ));
    }
    if q.dim() != 14 {
        report.notes.push(format!(
            "closure dimension {} differs from rewriter dimension 14",
            q.dim()
        ));
        report.rewriter_table = Some(rw);
        return Ok(report);
    }
    match closure_structure_table(q, &names, jobs) {
        Ok(cl) => {
            for i in 0..14 {
                for j in i + 1..14 {
                    let a = rw.basis_bracket(i, j);
                    let b = cl.basis_bracket(i, j);
                    if a != b {
                        report.mismatches.push(PairMismatch {
                            i,
                            j,
                            rewriter: rw.format_vector(&a),
                            closure: cl.format_vector(&b),
                        });
                    }
                }
            }
            report.closure_table = Some(cl);
        }
        Err(e) => report.notes.push(format!("closure table failed: {e}")),
    }
    report.rewriter_table = Some(rw);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;
    use num_traits::Signed;

    #[test]
    fn named_basis_scalings() {
        let n = g2_named_basis();
        assert_eq!(n.len(), 14);
        let y3 = n.get("y3").unwrap();
        assert_eq!(y3.terms().next().unwrap().1, &rat(1, 2));
        // a12 = ⅓[x2, ½[x2,x3]] is a single Lyndon monomial [x2,[x2,x3]]
        let a12 = n.get("a12").unwrap();
        assert_eq!(a12.len(), 1);
        let (_, c) = a12.terms().next().unwrap();
        assert_eq!(c.abs(), rat(1, 6));
    }

    #[test]
    fn rewriter_table_anchor_entries() {
        let t = rewriter_structure_table(&g2_named_basis(), 1).unwrap();
        let idx = |s: &str| t.index_of(s).unwrap();
        assert_eq!(
            t.format_vector(&t.basis_bracket(idx("x1"), idx("x2"))),
            "2*y3"
        );
        assert_eq!(
            t.format_vector(&t.basis_bracket(idx("x1"), idx("y1"))),
            "2*h1 + h2"
        );
        assert_eq!(
            t.format_vector(&t.basis_bracket(idx("a13"), idx("a31"))),
            "h1 + h2"
        );
        assert_eq!(
            t.format_vector(&t.basis_bracket(idx("y1"), idx("a23"))),
            "0"
        );
        assert_eq!(
            t.format_vector(&t.basis_bracket(idx("a12"), idx("a23"))),
            "a13"
        );
    }

    #[test]
    fn applicability_guard() {
        let sl2 = parse_presentation("generators: e f h\nrelation: [h,e] = 2*e").unwrap();
        assert!(rewriter_applicability(&sl2).is_err());
        assert!(rewriter_applicability(&crate::presentation::g2_presentation()).is_ok());
        let report = cross_validate(&sl2, 3, 1).unwrap();
        assert!(!report.rewriter_applicable);
        assert!(report.notes[0].starts_with("rewriter not applicable"));
        assert!(!report.agrees());
    }

    #[test]
    fn dependent_names_are_rejected() {
        let mut entries = g2_named_basis().entries().to_vec();
        entries[1].1 = entries[0].1.clone();
        let err = rewriter_structure_table(&NamedBasisMap::new(entries), 1).unwrap_err();
        assert!(matches!(err, EngineError::NamesNotBasis(_)));
    }
}
