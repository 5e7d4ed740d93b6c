//! Generic symbolic evaluations: every variable becomes a matrix whose
//! coordinates in a basis of its space are independent commuting variables
//! `w_k^(i)`. Also the entry lemmas these evaluations rest on.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::Echelon;
use crate::matrix::{e, tri_dim, tri_positions, TriMatrix};
use crate::mpoly::{MPoly, Monomial, Var};
use crate::star_poly::{StarPoly, VarSpec};
use crate::structure::{Family, InvolutionKind, StructureSpec, Symmetry};

/// How variables are turned into symbolic matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Scheme {
    /// `UT_2`, reflexive: `y = w1(e11+e22) + w2 e12`, `z = w1(e11-e22)`.
    Ut2Reflexive,
    /// `UT_2`, symplectic: `y = w1(e11+e22)`, `z = w1(e11-e22) + w2 e12`.
    Ut2Symplectic,
    /// Neutral component of `UT_3` graded by `(0,1,0)`:
    /// `y = w1(e11+e33) + w2 e22 + w3 e13`, `z = w1(e11-e33)`.
    Ut3NeutralZ2,
    /// Echelonized basis of each variable's space, in coordinate order.
    Basis,
}

/// `w_slot^(instance)` as a polynomial.
pub fn w(instance: usize, slot: usize, field: FieldSpec) -> MPoly {
    MPoly::var(Var::new(instance as u32, slot as u32), field)
}

fn sum(field: FieldSpec, ms: &[TriMatrix<Scalar>]) -> TriMatrix<Scalar> {
    ms.iter()
        .fold(TriMatrix::zero(ms[0].n(), field), |acc, m| acc.try_add(m).expect("same shape"))
}

/// The scheme used for `f` on `s`.
pub fn scheme_for(f: &StarPoly, s: &StructureSpec) -> Scheme {
    match (s.family(), s.involution()) {
        (Family::Ut2Trivial, InvolutionKind::Reflexive) => Scheme::Ut2Reflexive,
        (Family::Ut2Trivial, InvolutionKind::Symplectic) => Scheme::Ut2Symplectic,
        (Family::Gamma23, _) if f.vars().iter().all(|v| s.grade().normalize(v.degree) == 0) => {
            Scheme::Ut3NeutralZ2
        }
        _ => Scheme::Basis,
    }
}

/// Basis matrices substituted for a variable, slot by slot.
pub fn slot_basis(s: &StructureSpec, scheme: Scheme, var: &VarSpec) -> Vec<TriMatrix<Scalar>> {
    let field = s.field();
    let n = s.n();
    match (scheme, var.symmetry) {
        (Scheme::Ut3NeutralZ2, Symmetry::Sym) => vec![
            sum(field, &[e(3, 1, 1, field), e(3, 3, 3, field)]),
            e(3, 2, 2, field),
            e(3, 1, 3, field),
        ],
        (Scheme::Ut3NeutralZ2, Symmetry::Skew) => {
            vec![e(3, 1, 1, field).try_sub(&e(3, 3, 3, field)).expect("same shape")]
        }
        _ => {
            debug_assert!(n >= 1);
            s.matrices(&s.space(var.symmetry, var.degree))
        }
    }
}

/// Symbolic matrices for each variable and the resulting value of `f`.
#[derive(Clone, Debug)]
pub struct GenericEvaluation {
    pub scheme: Scheme,
    pub bases: Vec<Vec<TriMatrix<Scalar>>>,
    pub args: Vec<TriMatrix<MPoly>>,
    pub value: TriMatrix<MPoly>,
}

impl GenericEvaluation {
    /// Concrete arguments obtained by substituting `assignment`.
    pub fn concrete_args(&self, assignment: &BTreeMap<Var, Scalar>) -> Result<Vec<TriMatrix<Scalar>>> {
        self.args.iter().map(|a| a.eval(assignment)).collect()
    }

    /// Span of the coefficient matrices of all monomials in the value; this is
    /// the linear span of the image.
    pub fn span(&self) -> Echelon {
        let n = self.value.n();
        let field = self.value.field();
        let mut vectors: BTreeMap<Monomial, Vec<Scalar>> = BTreeMap::new();
        for (k, p) in self.value.as_slice().iter().enumerate() {
            for (m, c) in p.terms() {
                vectors
                    .entry(m.clone())
                    .or_insert_with(|| vec![field.zero(); tri_dim(n)])[k] = c.clone();
            }
        }
        Echelon::from_vectors(field, tri_dim(n), vectors.values().map(|v| v.as_slice()))
    }

    /// Monomials with their coefficient matrices, in monomial order.
    pub fn monomial_values(&self) -> Vec<(Monomial, TriMatrix<Scalar>)> {
        let n = self.value.n();
        let field = self.value.field();
        let mut out: BTreeMap<Monomial, TriMatrix<Scalar>> = BTreeMap::new();
        for ((i, j), p) in tri_positions(n).into_iter().zip(self.value.as_slice()) {
            for (m, c) in p.terms() {
                out.entry(m.clone())
                    .or_insert_with(|| TriMatrix::zero(n, field))
                    .set(i, j, c.clone());
            }
        }
        out.into_iter().collect()
    }
}

/// Evaluates `f` at generic (skew-)symmetric homogeneous matrices of `s`.
pub fn generic_eval(f: &StarPoly, s: &StructureSpec) -> Result<GenericEvaluation> {
    generic_eval_with(f, s, scheme_for(f, s))
}

pub fn generic_eval_with(f: &StarPoly, s: &StructureSpec, scheme: Scheme) -> Result<GenericEvaluation> {
    if f.field() != s.field() {
        return Err(Error::FieldMismatch {
            left: s.field(),
            right: f.field(),
        });
    }
    if f.m() == 0 {
        return Err(Error::Unsupported("polynomial has no variables (m = 0)".into()));
    }
    let field = s.field();
    let n = s.n();
    let mut bases = Vec::with_capacity(f.m());
    let mut args = Vec::with_capacity(f.m());
    for v in f.vars() {
        let basis = slot_basis(s, scheme, v);
        let mut a: TriMatrix<MPoly> = TriMatrix::zero(n, field);
        for (k, b) in basis.iter().enumerate() {
            let wk = w(v.index, k + 1, field);
            for ((i, j), c) in b.nonzero_entries() {
                let cur = a.get(i, j);
                a.set(i, j, cur.try_add(&wk.scale(c)?)?);
            }
        }
        bases.push(basis);
        args.push(a);
    }
    let value = f.evaluate_unchecked(&args)?;
    Ok(GenericEvaluation {
        scheme,
        bases,
        args,
        value,
    })
}

/// True iff `f` vanishes on all admissible arguments of `s`.
pub fn verify_identity(f: &StarPoly, s: &StructureSpec) -> Result<bool> {
    Ok(generic_eval_with(f, s, Scheme::Basis)?.value.is_zero())
}

/// A polynomial expected (or expected not) to be an identity of a structure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub structure: String,
    pub label: &'static str,
    pub poly: String,
    pub expected: bool,
    pub holds: bool,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.expected == self.holds
    }
}

/// Identities of the neutral component of `Γ_{2,3}` and of `UT_2` used by the
/// classification, plus non-identities as controls. All variables neutral.
pub fn identity_suite() -> Result<Vec<IdentityCheck>> {
    let q = FieldSpec::rationals();
    let ut2r = StructureSpec::trivial(2, InvolutionKind::Reflexive, q)?;
    let ut2s = StructureSpec::trivial(2, InvolutionKind::Symplectic, q)?;
    let g22 = StructureSpec::gamma22(InvolutionKind::Reflexive, q)?;
    let g23 = StructureSpec::gamma23(q)?;
    let g33 = StructureSpec::gamma33(q)?;
    let cases: [(&StructureSpec, &'static str, &str, bool); 15] = [
        (&g23, "(i)", "y1 y2 - y2 y1", true),
        (&g23, "(ii)", "z1 z2 - z2 z1", true),
        (&g23, "(iii)", "y1 z3 y2 z4 - y1 z3 z4 y2 - z3 y1 y2 z4 + z3 y1 z4 y2", true),
        (&g23, "(iv)", "z2 y1 z3 - z3 y1 z2", true),
        (&g23, "control", "y1 z2 - z2 y1", false),
        (&ut2r, "(i)", "y1 y2 - y2 y1", true),
        (&ut2r, "(ii)", "z1 z2 - z2 z1", true),
        (&ut2r, "(iii)", "y1 z3 y2 z4 - y1 z3 z4 y2 - z3 y1 y2 z4 + z3 y1 z4 y2", true),
        (&ut2r, "(iv)", "z2 y1 z3 - z3 y1 z2", true),
        (&ut2s, "[y,z]", "y1 z2 - z2 y1", true),
        (&ut2s, "control", "z1 z2 - z2 z1", false),
        (&g22, "[z,z]", "z1 z2 - z2 z1", true),
        (&g22, "[y,z]", "y1 z2 - z2 y1", true),
        (&g33, "[y,y]", "y1 y2 - y2 y1", true),
        (&g33, "[y,z]", "y1 z2 - z2 y1", true),
    ];
    cases
        .into_iter()
        .map(|(s, label, text, expected)| {
            let f = StarPoly::parse(text, q)?;
            Ok(IdentityCheck {
                structure: s.to_string(),
                label,
                poly: f.to_string(),
                expected,
                holds: verify_identity(&f, s)?,
            })
        })
        .collect()
}

/// Outcome of an entry-lemma check at one size.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaCheck {
    pub lemma: &'static str,
    pub size: usize,
    pub holds: bool,
    /// The product computed by multiplying symbolic matrices.
    pub computed: String,
    /// The closed formula.
    pub formula: String,
}

fn prod_w1_except(m: usize, skip: Option<usize>, field: FieldSpec) -> MPoly {
    (1..=m)
        .filter(|&k| Some(k) != skip)
        .fold(MPoly::constant(field.one()), |acc, k| acc.try_mul(&w(k, 1, field)).unwrap())
}

fn product(ms: Vec<TriMatrix<MPoly>>) -> TriMatrix<MPoly> {
    let mut it = ms.into_iter();
    let first = it.next().expect("at least one factor");
    it.fold(first, |acc, m| acc.try_mul(&m).expect("same shape"))
}

fn ut2_y(i: usize, field: FieldSpec) -> TriMatrix<MPoly> {
    TriMatrix::from_entries(
        2,
        field,
        [((1, 1), w(i, 1, field)), ((1, 2), w(i, 2, field)), ((2, 2), w(i, 1, field))],
    )
    .expect("valid entries")
}

fn ut2_z_symplectic(i: usize, field: FieldSpec) -> TriMatrix<MPoly> {
    TriMatrix::from_entries(
        2,
        field,
        [((1, 1), w(i, 1, field)), ((1, 2), w(i, 2, field)), ((2, 2), w(i, 1, field).neg())],
    )
    .expect("valid entries")
}

fn ut3_y(i: usize, field: FieldSpec) -> TriMatrix<MPoly> {
    TriMatrix::from_entries(
        3,
        field,
        [
            ((1, 1), w(i, 1, field)),
            ((2, 2), w(i, 2, field)),
            ((1, 3), w(i, 3, field)),
            ((3, 3), w(i, 1, field)),
        ],
    )
    .expect("valid entries")
}

/// Entry `(1,2)` of `y_1 ⋯ y_l` with `y_i = w1 (e11+e22) + w2 e12`.
pub fn verify_row_lemma(l: usize) -> LemmaCheck {
    let field = FieldSpec::rationals();
    let computed = product((1..=l).map(|i| ut2_y(i, field)).collect()).get(1, 2);
    let formula = (1..=l).fold(MPoly::zero(field), |acc, i| {
        acc.try_add(&prod_w1_except(l, Some(i), field).try_mul(&w(i, 2, field)).unwrap())
            .unwrap()
    });
    LemmaCheck {
        lemma: "row",
        size: l,
        holds: computed == formula,
        computed: computed.to_string(),
        formula: formula.to_string(),
    }
}

/// The full matrix `z_1 ⋯ z_m` with `z_i = w1 (e11 - e22) + w2 e12`.
pub fn verify_zproduct_lemma(m: usize) -> LemmaCheck {
    let field = FieldSpec::rationals();
    let computed = product((1..=m).map(|i| ut2_z_symplectic(i, field)).collect());
    let all = prod_w1_except(m, None, field);
    let sign = |k: usize| if k.is_multiple_of(2) { field.one() } else { -field.one() };
    let corner = (1..=m).fold(MPoly::zero(field), |acc, i| {
        let t = prod_w1_except(m, Some(i), field)
            .try_mul(&w(i, 2, field))
            .unwrap()
            .scale(&sign(i + m))
            .unwrap();
        acc.try_add(&t).unwrap()
    });
    let formula = TriMatrix::from_entries(
        2,
        field,
        [
            ((1, 1), all.clone()),
            ((2, 2), all.scale(&sign(m)).unwrap()),
            ((1, 2), corner),
        ],
    )
    .expect("valid entries");
    LemmaCheck {
        lemma: "z-product",
        size: m,
        holds: computed == formula,
        computed: format!("{computed:?}"),
        formula: format!("{formula:?}"),
    }
}

/// Entry `(1,3)` of `y_1 ⋯ y_m` with `y_i = w1(e11+e33) + w2 e22 + w3 e13`.
pub fn verify_corner_lemma(m: usize) -> LemmaCheck {
    let field = FieldSpec::rationals();
    let computed = product((1..=m).map(|i| ut3_y(i, field)).collect()).get(1, 3);
    let formula = (1..=m).fold(MPoly::zero(field), |acc, i| {
        acc.try_add(&prod_w1_except(m, Some(i), field).try_mul(&w(i, 3, field)).unwrap())
            .unwrap()
    });
    LemmaCheck {
        lemma: "corner",
        size: m,
        holds: computed == formula,
        computed: computed.to_string(),
        formula: formula.to_string(),
    }
}

/// Coefficients that determine the value of the generic evaluation for the
/// schemes [`Scheme::Ut2Reflexive`], [`Scheme::Ut2Symplectic`] and
/// [`Scheme::Ut3NeutralZ2`].
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedCoefficients {
    pub scheme: Scheme,
    pub m: usize,
    /// Number of skew variables.
    pub eta: usize,
    /// Coefficient of `w_1^(1) ⋯ w_1^(m)` in entry `(1,1)`.
    pub alpha: Scalar,
    /// For each variable `i` carrying the nilpotent slot (symmetric variables
    /// for the reflexive schemes, skew ones for the symplectic scheme), the
    /// coefficient of `w_1^(1) ⋯ (w_1^(i) omitted) ⋯ w_1^(m) w_s^(i)` in the
    /// corner entry.
    pub lambda: BTreeMap<usize, Scalar>,
    /// `UT_3` only: coefficient of `w_2^(1) ⋯ w_2^(m)` in entry `(2,2)`.
    pub center: Option<Scalar>,
}

impl ReducedCoefficients {
    /// Entry and slot that carry the `lambda` coefficients.
    fn corner(scheme: Scheme) -> ((usize, usize), usize) {
        match scheme {
            Scheme::Ut3NeutralZ2 => ((1, 3), 3),
            _ => ((1, 2), 2),
        }
    }

    pub fn all_lambda_zero(&self) -> bool {
        self.lambda.values().all(Scalar::is_zero)
    }

    /// Rebuilds the generic value from the coefficients alone.
    pub fn reconstruct(&self, field: FieldSpec) -> TriMatrix<MPoly> {
        let n = if self.scheme == Scheme::Ut3NeutralZ2 { 3 } else { 2 };
        let all = prod_w1_except(self.m, None, field);
        let sign = if self.eta.is_multiple_of(2) { field.one() } else { -field.one() };
        let mut out: TriMatrix<MPoly> = TriMatrix::zero(n, field);
        out.set(1, 1, all.scale(&self.alpha).unwrap());
        out.set(n, n, all.scale(&(&self.alpha * &sign)).unwrap());
        let ((ci, cj), slot) = Self::corner(self.scheme);
        let corner = self.lambda.iter().fold(MPoly::zero(field), |acc, (&i, c)| {
            let t = prod_w1_except(self.m, Some(i), field)
                .try_mul(&w(i, slot, field))
                .unwrap()
                .scale(c)
                .unwrap();
            acc.try_add(&t).unwrap()
        });
        out.set(ci, cj, corner);
        if let Some(c) = &self.center {
            let all2 = (1..=self.m).fold(MPoly::constant(field.one()), |acc, k| {
                acc.try_mul(&w(k, 2, field)).unwrap()
            });
            out.set(2, 2, all2.scale(c).unwrap());
        }
        out
    }
}

/// Reads the reduced coefficients off the generic evaluation.
pub fn extract_coefficients(f: &StarPoly, s: &StructureSpec) -> Result<ReducedCoefficients> {
    let g = generic_eval(f, s)?;
    coefficients_of(f, &g)
}

pub fn coefficients_of(f: &StarPoly, g: &GenericEvaluation) -> Result<ReducedCoefficients> {
    let scheme = g.scheme;
    if scheme == Scheme::Basis {
        return Err(Error::Unsupported(
            "reduced coefficients exist only for the UT_2 trivial-grading and UT_3 neutral schemes".into(),
        ));
    }
    let m = f.m();
    let all = Monomial::product((1..=m).map(|k| Var::new(k as u32, 1)));
    let alpha = g.value.get(1, 1).coeff_of(&all);
    let carrier = match scheme {
        Scheme::Ut2Symplectic => crate::structure::Symmetry::Skew,
        _ => crate::structure::Symmetry::Sym,
    };
    let ((ci, cj), slot) = ReducedCoefficients::corner(scheme);
    let corner = g.value.get(ci, cj);
    let lambda = f
        .vars()
        .iter()
        .filter(|v| v.symmetry == carrier)
        .map(|v| {
            let mono = Monomial::product(
                (1..=m)
                    .filter(|&k| k != v.index)
                    .map(|k| Var::new(k as u32, 1))
                    .chain([Var::new(v.index as u32, slot as u32)]),
            );
            (v.index, corner.coeff_of(&mono))
        })
        .collect();
    let center = (scheme == Scheme::Ut3NeutralZ2).then(|| {
        let all2 = Monomial::product((1..=m).map(|k| Var::new(k as u32, 2)));
        g.value.get(2, 2).coeff_of(&all2)
    });
    Ok(ReducedCoefficients {
        scheme,
        m,
        eta: f.eta(),
        alpha,
        lambda,
        center,
    })
}
