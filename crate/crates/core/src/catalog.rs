//! Named subspaces of `UT_n` that occur as polynomial images, and matching of
//! computed spans against them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{FieldKind, Scalar};
use crate::linalg::Echelon;
use crate::matrix::{tri_dim, tri_index, tri_positions, TriMatrix};
use crate::structure::{Family, InvolutionKind, StructureSpec, Symmetry};

/// A subspace named relative to a structure. Names built from `D` and `J`
/// refer to the neutral component: `S∩D` is `S_0 ∩ D` and `K+J` is
/// `K_0 + (J ∩ A_0)`, which for the trivial grading are the plain `S∩D`, `K+J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubspaceName {
    Zero,
    /// Scalar matrices `F·I`.
    Scalars,
    /// `J^k`: entries `(i, j)` with `j - i >= k`.
    Jpow(usize),
    S,
    K,
    KplusJ,
    SplusJ,
    KcapD,
    ScapD,
    ScapDplusJ,
    Sg(i64),
    Kg(i64),
    Ag(i64),
    /// `(K_0)^2`, products of two neutral skew elements.
    K1sq,
    /// `span{α e_12 + β e_23}` in `UT_3`.
    Line(Scalar, Scalar),
    Other(Vec<TriMatrix<Scalar>>),
}

impl fmt::Display for SubspaceName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubspaceName::Zero => f.write_str("Zero"),
            SubspaceName::Scalars => f.write_str("F"),
            SubspaceName::Jpow(1) => f.write_str("J"),
            SubspaceName::Jpow(k) => write!(f, "J^{k}"),
            SubspaceName::S => f.write_str("S"),
            SubspaceName::K => f.write_str("K"),
            SubspaceName::KplusJ => f.write_str("K+J"),
            SubspaceName::SplusJ => f.write_str("S+J"),
            SubspaceName::KcapD => f.write_str("K∩D"),
            SubspaceName::ScapD => f.write_str("S∩D"),
            SubspaceName::ScapDplusJ => f.write_str("(S∩D)+J"),
            SubspaceName::Sg(g) => write!(f, "S_{g}"),
            SubspaceName::Kg(g) => write!(f, "K_{g}"),
            SubspaceName::Ag(g) => write!(f, "A_{g}"),
            SubspaceName::K1sq => f.write_str("(K_0)^2"),
            SubspaceName::Line(a, b) => write!(f, "Line({a},{b})"),
            SubspaceName::Other(_) => f.write_str("Other"),
        }
    }
}

impl Serialize for SubspaceName {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

fn unit_vec(s: &StructureSpec, i: usize, j: usize) -> Vec<Scalar> {
    let mut v = vec![s.field().zero(); tri_dim(s.n())];
    v[tri_index(s.n(), i, j)] = s.field().one();
    v
}

fn span_of_units(s: &StructureSpec, keep: impl Fn(usize, usize) -> bool) -> Echelon {
    let mut e = Echelon::new(s.field(), tri_dim(s.n()));
    for (i, j) in tri_positions(s.n()) {
        if keep(i, j) {
            e.insert(&unit_vec(s, i, j));
        }
    }
    e
}

/// Coordinates spanning `D`: the diagonal, except on `UT_3` graded by
/// `(0,1,0)` where `D = span{e_11, e_33}`.
fn diagonal_positions(s: &StructureSpec) -> Vec<bool> {
    let skip_middle = s.family() == Family::Gamma23;
    tri_positions(s.n())
        .into_iter()
        .map(|(i, j)| i == j && !(skip_middle && i == 2))
        .collect()
}

/// `J ∩ A_0`, the radical of the neutral component.
fn neutral_radical(s: &StructureSpec) -> Echelon {
    let g = s.grade();
    span_of_units(s, |i, j| i < j && g.unit_degree(i, j) == 0)
}

fn cap_diagonal(s: &StructureSpec, e: &Echelon) -> Echelon {
    let diag = diagonal_positions(s);
    e.restrict_to(|k| diag[k])
}

impl SubspaceName {
    /// The subspace this name denotes for `s`, over `s.field()`.
    pub fn resolve(&self, s: &StructureSpec) -> Result<Echelon> {
        let field = s.field();
        let dim = tri_dim(s.n());
        let n = s.n();
        Ok(match self {
            SubspaceName::Zero => Echelon::new(field, dim),
            SubspaceName::Scalars => {
                let one: TriMatrix<Scalar> = TriMatrix::identity(n, field);
                Echelon::from_vectors(field, dim, [one.as_slice()])
            }
            SubspaceName::Jpow(k) => span_of_units(s, |i, j| j >= i + k),
            SubspaceName::S => s.total_space(Symmetry::Sym),
            SubspaceName::K => s.total_space(Symmetry::Skew),
            SubspaceName::KplusJ => s.space(Symmetry::Skew, 0).sum(&neutral_radical(s)),
            SubspaceName::SplusJ => s.space(Symmetry::Sym, 0).sum(&neutral_radical(s)),
            SubspaceName::KcapD => cap_diagonal(s, &s.space(Symmetry::Skew, 0)),
            SubspaceName::ScapD => cap_diagonal(s, &s.space(Symmetry::Sym, 0)),
            SubspaceName::ScapDplusJ => {
                cap_diagonal(s, &s.space(Symmetry::Sym, 0)).sum(&neutral_radical(s))
            }
            SubspaceName::Sg(g) => s.space(Symmetry::Sym, *g),
            SubspaceName::Kg(g) => s.space(Symmetry::Skew, *g),
            SubspaceName::Ag(g) => s.component(*g),
            SubspaceName::K1sq => {
                let k0 = s.matrices(&s.space(Symmetry::Skew, 0));
                let mut e = Echelon::new(field, dim);
                for a in &k0 {
                    for b in &k0 {
                        e.insert(a.try_mul(b)?.as_slice());
                    }
                }
                e
            }
            SubspaceName::Line(a, b) => {
                if n != 3 {
                    return Err(Error::Unsupported(format!("Line(α,β) is defined on UT_3, not UT_{n}")));
                }
                let (a, b) = (a.reduce_to(field)?, b.reduce_to(field)?);
                let v = TriMatrix::from_entries(3, field, [((1, 2), a), ((2, 3), b)])?;
                Echelon::from_vectors(field, dim, [v.as_slice()])
            }
            SubspaceName::Other(basis) => {
                let mut e = Echelon::new(field, dim);
                for m in basis {
                    e.insert(m.reduce_to(field)?.as_slice());
                }
                e
            }
        })
    }
}

/// The ordered list of names tried by [`match_catalog`]; the first name whose
/// resolved space matches wins.
pub fn catalog(s: &StructureSpec) -> Vec<SubspaceName> {
    use SubspaceName::*;
    let support: Vec<i64> = s.grade().support().into_iter().collect();
    let nonzero: Vec<i64> = support.iter().copied().filter(|&g| g != 0).collect();
    match (s.family(), s.involution()) {
        (Family::Ut2Trivial, InvolutionKind::Reflexive) => vec![Zero, Jpow(1), Scalars, K, S, KplusJ],
        (Family::Ut2Trivial, InvolutionKind::Symplectic) => vec![Zero, Jpow(1), S, K, KcapD, SplusJ],
        (Family::Gamma22, _) => {
            let g = nonzero[0];
            vec![Zero, Sg(0), Kg(0), Sg(g), Kg(g), Ag(0), Ag(g)]
        }
        (Family::Gamma23, _) => {
            let g = nonzero[0];
            vec![Zero, Jpow(2), ScapD, ScapDplusJ, Sg(0), Kg(0), KplusJ, Ag(g), Ag(0)]
        }
        (Family::Gamma33, _) => {
            let g = s.grade().unit_degree(1, 2);
            let h = s.grade().unit_degree(1, 3);
            vec![Zero, Sg(0), Kg(0), K1sq, Ag(g), Ag(h)]
        }
        _ => {
            let mut names = vec![Zero, Scalars];
            names.extend((1..s.n()).map(Jpow));
            names.extend([S, K]);
            for &g in &support {
                names.extend([Sg(g), Kg(g), Ag(g)]);
            }
            names
        }
    }
}

/// Canonical `(α, β)` for the line spanned by `v`: coprime integers with a
/// positive leading entry over `Q`, leading entry one over `F_p`.
fn canonical_line(a: &Scalar, b: &Scalar) -> (Scalar, Scalar) {
    let field = a.field();
    match field.kind() {
        FieldKind::Prime(_) => {
            let lead = if a.is_zero() { b.clone() } else { a.clone() };
            let inv = lead.inv().expect("line direction is nonzero");
            (a * &inv, b * &inv)
        }
        FieldKind::Rationals => {
            let (ra, rb) = (a.to_rational(), b.to_rational());
            let den = ra.denom().lcm(rb.denom());
            let na = ra.numer() * (&den / ra.denom());
            let nb = rb.numer() * (&den / rb.denom());
            let mut g = na.gcd(&nb);
            if g.is_zero() {
                g = BigInt::one();
            }
            let lead_negative = if na.is_zero() { nb.is_negative() } else { na.is_negative() };
            if lead_negative {
                g = -g;
            }
            (
                Scalar::from_bigint(&(na / &g), field),
                Scalar::from_bigint(&(nb / &g), field),
            )
        }
    }
}

/// Names `span` for the structure `s`, falling back to `Line` and `Other`.
pub fn match_catalog(span: &Echelon, s: &StructureSpec) -> SubspaceName {
    for name in catalog(s) {
        if let Ok(e) = name.resolve(s) {
            if e == *span {
                return name;
            }
        }
    }
    if s.n() == 3 && span.rank() == 1 {
        let off = |i, j| tri_index(3, i, j);
        let row = &span.rows()[0];
        let inside = tri_positions(3)
            .into_iter()
            .all(|(i, j)| matches!((i, j), (1, 2) | (2, 3)) || row[off(i, j)].is_zero());
        if inside {
            let (a, b) = canonical_line(&row[off(1, 2)], &row[off(2, 3)]);
            return SubspaceName::Line(a, b);
        }
    }
    SubspaceName::Other(s.matrices(span))
}

/// Whether two names denote the same subspace of `s`.
pub fn same_subspace(a: &SubspaceName, b: &SubspaceName, s: &StructureSpec) -> Result<bool> {
    Ok(a.resolve(s)? == b.resolve(s)?)
}
