//! Graded involutions on `UT_n`: elementary cyclic gradings together with the
//! reflexive or symplectic involution.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::Echelon;
use crate::matrix::{tri_dim, tri_index, tri_positions, Coeff, TriMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InvolutionKind {
    Reflexive,
    Symplectic,
}

impl fmt::Display for InvolutionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvolutionKind::Reflexive => "reflexive",
            InvolutionKind::Symplectic => "symplectic",
        })
    }
}

impl FromStr for InvolutionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reflexive" | "r" => Ok(InvolutionKind::Reflexive),
            "symplectic" | "s" => Ok(InvolutionKind::Symplectic),
            other => Err(Error::InvalidStructure {
                clause: "involution".into(),
                detail: format!("unknown involution '{other}'"),
            }),
        }
    }
}

/// An elementary grading by `Z` (modulus 0), the trivial group (modulus 1) or
/// `Z_q`, written additively. Degrees are stored in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradeSpec {
    modulus: u64,
    degrees: Vec<i64>,
}

impl GradeSpec {
    pub fn new(modulus: u64, degrees: Vec<i64>) -> Self {
        let mut g = GradeSpec {
            modulus,
            degrees: Vec::new(),
        };
        g.degrees = degrees.into_iter().map(|d| g.normalize(d)).collect();
        g
    }

    pub fn trivial(n: usize) -> Self {
        GradeSpec::new(1, vec![0; n])
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn normalize(&self, g: i64) -> i64 {
        match self.modulus {
            0 => g,
            1 => 0,
            q => g.rem_euclid(q as i64),
        }
    }

    pub fn add(&self, a: i64, b: i64) -> i64 {
        self.normalize(a + b)
    }

    /// `deg(e_ij) = g_j - g_i`.
    pub fn unit_degree(&self, i: usize, j: usize) -> i64 {
        self.normalize(self.degrees[j - 1] - self.degrees[i - 1])
    }

    /// Degrees of all matrix units, i.e. the support of the grading on `UT_n`.
    pub fn support(&self) -> BTreeSet<i64> {
        let n = self.degrees.len();
        tri_positions(n)
            .into_iter()
            .map(|(i, j)| self.unit_degree(i, j))
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.support().iter().all(|&g| g == 0)
    }

    fn generates_group(&self) -> bool {
        if self.modulus == 1 {
            return true;
        }
        let g = self
            .support()
            .into_iter()
            .fold(self.modulus as i64, |acc, s| acc.gcd(&s));
        g == 1
    }
}

impl fmt::Display for GradeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modulus == 1 {
            return f.write_str("trivial");
        }
        let ds: Vec<String> = self.degrees.iter().map(|d| d.to_string()).collect();
        match self.modulus {
            0 => write!(f, "z degrees ({})", ds.join(",")),
            q => write!(f, "z{q} degrees ({})", ds.join(",")),
        }
    }
}

/// One validation clause of [`StructureSpec::check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseResult {
    pub clause: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub clauses: Vec<ClauseResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&ClauseResult> {
        self.clauses.iter().find(|c| !c.passed)
    }
}

/// Recognized canonical structures on `UT_2` and `UT_3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Ut2Trivial,
    /// `UT_2` with `e_12` in a nonzero degree.
    Gamma22,
    Ut3Trivial,
    /// `UT_3` with `deg(e_12) = deg(e_23) = g`, `g != 0`, `2g = 0`.
    Gamma23,
    /// `UT_3` with `deg(e_12) = deg(e_23) = g`, `2g != 0`.
    Gamma33,
    Other,
}

/// Homogeneous component of one degree and its symmetric/skew parts, each as
/// an echelonized list of matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentBasis {
    pub degree: i64,
    pub a: Vec<TriMatrix<Scalar>>,
    pub s: Vec<TriMatrix<Scalar>>,
    pub k: Vec<TriMatrix<Scalar>>,
}

/// Which half of a homogeneous component a variable ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symmetry {
    Sym,
    Skew,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StructureSpec {
    n: usize,
    grade: GradeSpec,
    inv: InvolutionKind,
    field: FieldSpec,
}

impl StructureSpec {
    /// Builds a structure, rejecting it if any validation clause fails.
    pub fn new(n: usize, grade: GradeSpec, inv: InvolutionKind, field: FieldSpec) -> Result<Self> {
        let s = StructureSpec::unchecked(n, grade, inv, field);
        let report = s.check();
        match report.first_failure() {
            None => Ok(s),
            Some(c) => Err(Error::InvalidStructure {
                clause: c.clause.to_string(),
                detail: c.detail.clone(),
            }),
        }
    }

    /// Builds a structure without validation; see [`StructureSpec::check`].
    pub fn unchecked(n: usize, grade: GradeSpec, inv: InvolutionKind, field: FieldSpec) -> Self {
        StructureSpec {
            n,
            grade,
            inv,
            field,
        }
    }

    pub fn trivial(n: usize, inv: InvolutionKind, field: FieldSpec) -> Result<Self> {
        StructureSpec::new(n, GradeSpec::trivial(n), inv, field)
    }

    /// `UT_2` graded by `Z_2` with `e_12` odd.
    pub fn gamma22(inv: InvolutionKind, field: FieldSpec) -> Result<Self> {
        StructureSpec::new(2, GradeSpec::new(2, vec![0, 1]), inv, field)
    }

    /// `UT_3` graded by `Z_2` via degrees `(0,1,0)`.
    pub fn gamma23(field: FieldSpec) -> Result<Self> {
        StructureSpec::new(3, GradeSpec::new(2, vec![0, 1, 0]), InvolutionKind::Reflexive, field)
    }

    /// `UT_3` graded by `Z_3` via degrees `(0,1,2)`.
    pub fn gamma33(field: FieldSpec) -> Result<Self> {
        StructureSpec::new(3, GradeSpec::new(3, vec![0, 1, 2]), InvolutionKind::Reflexive, field)
    }

    /// `UT_n` with the canonical `Z_n` grading `(0,1,...,n-1)`.
    pub fn canonical_zn(n: usize, inv: InvolutionKind, field: FieldSpec) -> Result<Self> {
        StructureSpec::new(n, GradeSpec::new(n as u64, (0..n as i64).collect()), inv, field)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grade(&self) -> &GradeSpec {
        &self.grade
    }

    pub fn involution(&self) -> InvolutionKind {
        self.inv
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// The same structure over another field.
    pub fn with_field(&self, field: FieldSpec) -> Self {
        StructureSpec {
            field,
            ..self.clone()
        }
    }

    pub fn family(&self) -> Family {
        match self.n {
            2 if self.grade.is_trivial() => Family::Ut2Trivial,
            2 => Family::Gamma22,
            3 if self.grade.is_trivial() => Family::Ut3Trivial,
            3 => {
                let g = self.grade.unit_degree(1, 2);
                if g == 0 || self.grade.unit_degree(2, 3) != g {
                    Family::Other
                } else if self.grade.add(g, g) == 0 {
                    Family::Gamma23
                } else {
                    Family::Gamma33
                }
            }
            _ => Family::Other,
        }
    }

    /// Runs every validation clause and reports each outcome.
    pub fn check(&self) -> ValidationReport {
        let mut clauses = Vec::new();
        let n = self.n;
        clauses.push(ClauseResult {
            clause: "characteristic",
            passed: self.field.characteristic() != 2,
            detail: format!("field {} has characteristic {}", self.field, self.field.characteristic()),
        });
        let shape_ok = n >= 1 && self.grade.degrees.len() == n;
        clauses.push(ClauseResult {
            clause: "shape",
            passed: shape_ok,
            detail: format!("n = {n}, {} degrees given", self.grade.degrees.len()),
        });
        if !shape_ok {
            return ValidationReport { clauses };
        }

        let sums: Vec<i64> = (1..=n)
            .map(|i| self.grade.add(self.grade.degrees[i - 1], self.grade.degrees[n - i]))
            .collect();
        let compatible = sums.iter().all(|&s| s == sums[0]);
        clauses.push(ClauseResult {
            clause: "compatibility",
            passed: compatible,
            detail: if compatible {
                format!("g_i + g_(n+1-i) = {} for every i", sums[0])
            } else {
                let i = sums.iter().position(|&s| s != sums[0]).unwrap() + 1;
                format!(
                    "g_1 + g_{n} = {} but g_{i} + g_{} = {}",
                    sums[0],
                    n + 1 - i,
                    sums[i - 1]
                )
            },
        });

        let generates = self.grade.generates_group();
        clauses.push(ClauseResult {
            clause: "support-generates",
            passed: generates,
            detail: format!(
                "support {:?} in {}",
                self.grade.support(),
                match self.grade.modulus {
                    0 => "Z".to_string(),
                    1 => "the trivial group".to_string(),
                    q => format!("Z_{q}"),
                }
            ),
        });

        let parity = self.inv == InvolutionKind::Reflexive || n.is_multiple_of(2);
        clauses.push(ClauseResult {
            clause: "symplectic-parity",
            passed: parity,
            detail: format!("{} involution with n = {n}", self.inv),
        });

        let mut bad = None;
        'outer: for i in 1..=n {
            for j in i..=n {
                for k in j..=n {
                    let lhs = self.grade.add(self.grade.unit_degree(i, j), self.grade.unit_degree(j, k));
                    if lhs != self.grade.unit_degree(i, k) {
                        bad = Some((i, j, k));
                        break 'outer;
                    }
                }
            }
        }
        clauses.push(ClauseResult {
            clause: "multiplicativity",
            passed: bad.is_none(),
            detail: match bad {
                None => "deg(e_ij e_jk) = deg(e_ij) + deg(e_jk) for all units".into(),
                Some((i, j, k)) => format!("fails for e_{i}{j} e_{j}{k}"),
            },
        });
        ValidationReport { clauses }
    }

    /// Sign picked up by entry `(i, j)` under the involution.
    fn sign(&self, i: usize, j: usize) -> bool {
        let m = self.n / 2;
        self.inv == InvolutionKind::Symplectic && i <= m && m < j
    }

    /// `A*`: entry `(i, j)` moves to `(n+1-j, n+1-i)`, with a sign change for
    /// the symplectic involution when `i <= n/2 < j`.
    pub fn apply_involution<R: Coeff>(&self, a: &TriMatrix<R>) -> Result<TriMatrix<R>> {
        let n = self.n;
        if a.n() != n {
            return Err(Error::DimensionMismatch { left: n, right: a.n() });
        }
        if self.inv == InvolutionKind::Symplectic && n % 2 == 1 {
            return Err(Error::InvalidStructure {
                clause: "symplectic-parity".into(),
                detail: format!("symplectic involution needs even n, got {n}"),
            });
        }
        let mut out = TriMatrix::zero(n, a.field());
        for (i, j) in tri_positions(n) {
            let v = a.entry(i, j).expect("upper entry");
            let v = if self.sign(i, j) { v.ring_neg() } else { v.clone() };
            out.set(n + 1 - j, n + 1 - i, v);
        }
        Ok(out)
    }

    fn unit_vector(&self, i: usize, j: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); tri_dim(self.n)];
        v[tri_index(self.n, i, j)] = self.field.one();
        v
    }

    /// `A_g` as an echelon form over the entry coordinates.
    pub fn component(&self, g: i64) -> Echelon {
        let g = self.grade.normalize(g);
        let mut e = Echelon::new(self.field, tri_dim(self.n));
        for (i, j) in tri_positions(self.n) {
            if self.grade.unit_degree(i, j) == g {
                e.insert(&self.unit_vector(i, j));
            }
        }
        e
    }

    /// `S_g` or `K_g`: the span of `u + u*` (resp. `u - u*`) over units of degree `g`.
    pub fn space(&self, sym: Symmetry, g: i64) -> Echelon {
        let g = self.grade.normalize(g);
        let n = self.n;
        let mut e = Echelon::new(self.field, tri_dim(n));
        for (i, j) in tri_positions(n) {
            if self.grade.unit_degree(i, j) != g {
                continue;
            }
            let (i2, j2) = (n + 1 - j, n + 1 - i);
            let mut v = self.unit_vector(i, j);
            let star = if self.sign(i, j) { -self.field.one() } else { self.field.one() };
            let star = match sym {
                Symmetry::Sym => star,
                Symmetry::Skew => -star,
            };
            let k = tri_index(n, i2, j2);
            v[k] = &v[k] + &star;
            e.insert(&v);
        }
        e
    }

    /// The whole symmetric or skew part, summed over all degrees.
    pub fn total_space(&self, sym: Symmetry) -> Echelon {
        self.grade
            .support()
            .into_iter()
            .fold(Echelon::new(self.field, tri_dim(self.n)), |acc, g| {
                acc.sum(&self.space(sym, g))
            })
    }

    pub fn component_bases(&self) -> Vec<ComponentBasis> {
        self.grade
            .support()
            .into_iter()
            .map(|g| ComponentBasis {
                degree: g,
                a: self.matrices(&self.component(g)),
                s: self.matrices(&self.space(Symmetry::Sym, g)),
                k: self.matrices(&self.space(Symmetry::Skew, g)),
            })
            .collect()
    }

    /// Rows of an echelon form over entry coordinates, as matrices.
    pub fn matrices(&self, e: &Echelon) -> Vec<TriMatrix<Scalar>> {
        e.rows()
            .iter()
            .map(|r| TriMatrix::from_vec(self.n, self.field, r.clone()).expect("row length"))
            .collect()
    }

    /// The projection of `a` onto `A_g`.
    pub fn homogeneous_part(&self, a: &TriMatrix<Scalar>, g: i64) -> TriMatrix<Scalar> {
        let g = self.grade.normalize(g);
        let mut out = TriMatrix::zero(self.n, a.field());
        for (i, j) in tri_positions(self.n) {
            if self.grade.unit_degree(i, j) == g {
                out.set(i, j, a.get(i, j));
            }
        }
        out
    }

    /// `(a + a*) / 2` or `(a - a*) / 2`.
    pub fn part(&self, a: &TriMatrix<Scalar>, sym: Symmetry) -> Result<TriMatrix<Scalar>> {
        let star = self.apply_involution(a)?;
        let half = self.field.int(2).inv()?;
        let sum = match sym {
            Symmetry::Sym => a.try_add(&star)?,
            Symmetry::Skew => a.try_sub(&star)?,
        };
        sum.scale(&half)
    }

    /// Degree of a homogeneous nonzero matrix, `None` for zero or mixed ones.
    pub fn degree_of(&self, a: &TriMatrix<Scalar>) -> Option<i64> {
        let degs: BTreeSet<i64> = a
            .nonzero_entries()
            .map(|((i, j), _)| self.grade.unit_degree(i, j))
            .collect();
        (degs.len() == 1).then(|| *degs.iter().next().unwrap())
    }

    pub fn is_homogeneous(&self, e: &Echelon) -> bool {
        let parts = self
            .grade
            .support()
            .into_iter()
            .fold(Echelon::new(self.field, tri_dim(self.n)), |acc, g| {
                let comp = self.component(g);
                let piece = e.restrict_to(|k| comp.pivots().contains(&k));
                acc.sum(&piece)
            });
        parts == *e
    }
}

impl fmt::Display for StructureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UT_{} ({}, {}, over {})", self.n, self.grade, self.inv, self.field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::e;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn span(f: FieldSpec, ms: &[TriMatrix<Scalar>]) -> Echelon {
        let dim = tri_dim(ms[0].n());
        Echelon::from_vectors(f, dim, ms.iter().map(|m| m.as_slice()))
    }

    #[test]
    fn reflexive_moves_entries_across_antidiagonal() {
        let s = StructureSpec::trivial(3, InvolutionKind::Reflexive, q()).unwrap();
        assert_eq!(s.apply_involution(&e(3, 1, 1, q())).unwrap(), e(3, 3, 3, q()));
        assert_eq!(s.apply_involution(&e(3, 1, 2, q())).unwrap(), e(3, 2, 3, q()));
        assert_eq!(s.apply_involution(&e(3, 1, 3, q())).unwrap(), e(3, 1, 3, q()));
    }

    #[test]
    fn symplectic_flips_corner_block() {
        let s = StructureSpec::trivial(2, InvolutionKind::Symplectic, q()).unwrap();
        assert_eq!(s.apply_involution(&e(2, 1, 2, q())).unwrap(), e(2, 1, 2, q()).neg());
        assert!(StructureSpec::trivial(3, InvolutionKind::Symplectic, q()).is_err());
    }

    #[test]
    fn ut2_parts() {
        let f = q();
        let r = StructureSpec::trivial(2, InvolutionKind::Reflexive, f).unwrap();
        let sym = r.space(Symmetry::Sym, 0);
        let want = span(f, &[e(2, 1, 1, f).try_add(&e(2, 2, 2, f)).unwrap(), e(2, 1, 2, f)]);
        assert_eq!(sym, want);
        let s = StructureSpec::trivial(2, InvolutionKind::Symplectic, f).unwrap();
        let skew = s.space(Symmetry::Skew, 0);
        let want = span(f, &[e(2, 1, 1, f).try_sub(&e(2, 2, 2, f)).unwrap(), e(2, 1, 2, f)]);
        assert_eq!(skew, want);
    }

    #[test]
    fn gamma33_corner_component() {
        let f = q();
        let s = StructureSpec::gamma33(f).unwrap();
        assert_eq!(s.space(Symmetry::Sym, 2), span(f, &[e(3, 1, 3, f)]));
        assert!(s.space(Symmetry::Skew, 2).is_zero());
    }

    #[test]
    fn gamma23_odd_skew_part_is_difference() {
        let f = q();
        let s = StructureSpec::gamma23(f).unwrap();
        let want = span(f, &[e(3, 1, 2, f).try_sub(&e(3, 2, 3, f)).unwrap()]);
        assert_eq!(s.space(Symmetry::Skew, 1), want);
    }

    #[test]
    fn incompatible_sequence_names_clause() {
        let s = StructureSpec::unchecked(3, GradeSpec::new(3, vec![0, 1, 1]), InvolutionKind::Reflexive, q());
        let report = s.check();
        assert_eq!(report.first_failure().unwrap().clause, "compatibility");
    }

    #[test]
    fn support_must_generate() {
        let s = StructureSpec::unchecked(3, GradeSpec::new(4, vec![0, 2, 4]), InvolutionKind::Reflexive, q());
        assert_eq!(s.check().first_failure().unwrap().clause, "support-generates");
        let z = StructureSpec::unchecked(2, GradeSpec::new(0, vec![0, 0]), InvolutionKind::Reflexive, q());
        assert!(!z.check().passed());
    }

    #[test]
    fn families_detected() {
        let f = q();
        assert_eq!(StructureSpec::gamma23(f).unwrap().family(), Family::Gamma23);
        assert_eq!(StructureSpec::gamma33(f).unwrap().family(), Family::Gamma33);
        assert_eq!(
            StructureSpec::gamma22(InvolutionKind::Symplectic, f).unwrap().family(),
            Family::Gamma22
        );
        let z = StructureSpec::new(3, GradeSpec::new(0, vec![0, 1, 2]), InvolutionKind::Reflexive, f).unwrap();
        assert_eq!(z.family(), Family::Gamma33);
    }
}
