//! Symbolic classification of images on `UT_2` and `UT_3`, and the
//! cross-check against exhaustive images over small prime fields.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::catalog::{match_catalog, SubspaceName};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::generic::{coefficients_of, generic_eval, GenericEvaluation, ReducedCoefficients, Scheme};
use crate::image::{enumerate_image, Closure};
use crate::linalg::Echelon;
use crate::matrix::{tri_dim, TriMatrix};
use crate::mpoly::{Monomial, Var};
use crate::star_poly::StarPoly;
use crate::structure::{Family, StructureSpec};

/// Message attached to structures with no classification theorem.
pub const NO_THEOREM: &str = "no classification theorem; use counterexample/enumerate";

/// Which argument produced the name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Some variable ranges over the zero space.
    EmptySpace,
    /// Read off `alpha`, `lambda` and the number of skew variables.
    ReducedCoefficients,
    /// Neutral variables on `Γ_{3,3}`: the value is a multiple of one word.
    NeutralWord,
    /// The span has dimension at most two, so it is the image.
    SpanRank,
}

/// Name of the image of a polynomial together with the data behind it.
#[derive(Clone, Debug)]
pub struct Classification {
    pub structure: StructureSpec,
    pub name: SubspaceName,
    pub method: Method,
    pub coefficients: Option<ReducedCoefficients>,
    /// Linear span of the image, from the generic evaluation.
    pub span: Echelon,
    /// Homogeneous degree of the image.
    pub degree: i64,
    /// Monomials whose coefficient matrices form a basis of `span`.
    pub certificate: Vec<(Monomial, TriMatrix<Scalar>)>,
}

impl Classification {
    pub fn to_json(&self) -> Value {
        let s = &self.structure;
        let mut out = Map::new();
        out.insert("method".into(), json!("symbolic"));
        out.insert("branch".into(), serde_json::to_value(self.method).unwrap());
        out.insert("catalog".into(), json!(self.name.to_string()));
        out.insert("field".into(), json!(s.field().to_string()));
        out.insert("degree".into(), json!(self.degree));
        out.insert("is_vector_space".into(), json!(true));
        out.insert(
            "span_basis".into(),
            Value::Array(s.matrices(&self.span).iter().map(TriMatrix::to_json).collect()),
        );
        if let Some(c) = &self.coefficients {
            out.insert("coefficients".into(), coefficients_json(c));
        }
        out.insert(
            "certificate".into(),
            Value::Array(
                self.certificate
                    .iter()
                    .map(|(m, v)| json!({"monomial": m.to_string(), "value": v.to_json()}))
                    .collect(),
            ),
        );
        Value::Object(out)
    }
}

fn coefficients_json(c: &ReducedCoefficients) -> Value {
    let lambda: Map<String, Value> = c
        .lambda
        .iter()
        .map(|(i, v)| (i.to_string(), json!(v.to_string())))
        .collect();
    let mut out = json!({
        "scheme": c.scheme,
        "m": c.m,
        "eta": c.eta,
        "alpha": c.alpha.to_string(),
        "lambda": lambda,
    });
    if let Some(center) = &c.center {
        out["center"] = json!(center.to_string());
    }
    out
}

fn ut2_reflexive(c: &ReducedCoefficients, value_zero: bool) -> SubspaceName {
    use SubspaceName::*;
    let even = c.eta.is_multiple_of(2);
    if value_zero {
        Zero
    } else if c.alpha.is_zero() {
        Jpow(1)
    } else if c.all_lambda_zero() {
        if even {
            Scalars
        } else {
            K
        }
    } else if even {
        S
    } else {
        KplusJ
    }
}

fn ut2_symplectic(c: &ReducedCoefficients, value_zero: bool) -> SubspaceName {
    use SubspaceName::*;
    let even = c.eta.is_multiple_of(2);
    if value_zero {
        Zero
    } else if c.alpha.is_zero() {
        Jpow(1)
    } else if c.all_lambda_zero() {
        if even {
            S
        } else {
            KcapD
        }
    } else if even {
        SplusJ
    } else {
        K
    }
}

fn ut3_neutral_z2(c: &ReducedCoefficients, value_zero: bool) -> SubspaceName {
    use SubspaceName::*;
    let even = c.eta.is_multiple_of(2);
    if value_zero {
        Zero
    } else if c.alpha.is_zero() {
        Jpow(2)
    } else if c.eta == 0 {
        Sg(0)
    } else if c.all_lambda_zero() {
        if even {
            ScapD
        } else {
            Kg(0)
        }
    } else if even {
        ScapDplusJ
    } else {
        KplusJ
    }
}

/// `alpha` (and the `(2,2)` coefficient) of the neutral word on `Γ_{3,3}`.
fn neutral_word_coefficients(f: &StarPoly, g: &GenericEvaluation) -> ReducedCoefficients {
    let m = f.m();
    let all = |slot: u32| Monomial::product((1..=m).map(|k| Var::new(k as u32, slot)));
    ReducedCoefficients {
        scheme: g.scheme,
        m,
        eta: f.eta(),
        alpha: g.value.get(1, 1).coeff_of(&all(1)),
        lambda: BTreeMap::new(),
        center: Some(g.value.get(2, 2).coeff_of(&all(2))),
    }
}

fn gamma33_neutral(c: &ReducedCoefficients) -> SubspaceName {
    use SubspaceName::*;
    if c.alpha.is_zero() {
        Zero
    } else if c.eta == 0 {
        Sg(0)
    } else if c.eta % 2 == 1 {
        Kg(0)
    } else {
        K1sq
    }
}

fn independent_monomials(g: &GenericEvaluation) -> Vec<(Monomial, TriMatrix<Scalar>)> {
    let n = g.value.n();
    let mut e = Echelon::new(g.value.field(), tri_dim(n));
    g.monomial_values()
        .into_iter()
        .filter(|(_, v)| e.insert(v.as_slice()))
        .collect()
}

/// Whether some theorem covers `s`.
pub fn is_classifiable(s: &StructureSpec) -> bool {
    matches!(
        s.family(),
        Family::Ut2Trivial | Family::Gamma22 | Family::Gamma23 | Family::Gamma33
    )
}

/// Names the image of `f` on `s` from the generic evaluation, without
/// enumerating. Supports `UT_2` (trivial grading and `Γ_{2,2}`) and `UT_3`
/// graded by `Γ_{2,3}` or `Γ_{3,3}`.
pub fn classify(f: &StarPoly, s: &StructureSpec) -> Result<Classification> {
    if f.m() == 0 {
        return Err(Error::Unsupported("the polynomial has no variables".into()));
    }
    if f.field() != s.field() {
        return Err(Error::FieldMismatch {
            left: s.field(),
            right: f.field(),
        });
    }
    if !is_classifiable(s) {
        return Err(Error::Unsupported(format!("{s}: {NO_THEOREM}")));
    }
    let degree = f.homogeneity(s.grade());
    let dim = tri_dim(s.n());
    let empty = f
        .vars()
        .iter()
        .any(|v| s.space(v.symmetry, v.degree).is_zero());
    if empty {
        return Ok(Classification {
            structure: s.clone(),
            name: SubspaceName::Zero,
            method: Method::EmptySpace,
            coefficients: None,
            span: Echelon::new(s.field(), dim),
            degree,
            certificate: Vec::new(),
        });
    }
    let g = generic_eval(f, s)?;
    let span = g.span();
    let value_zero = g.value.is_zero();
    let neutral = f.vars().iter().all(|v| s.grade().normalize(v.degree) == 0);
    let (name, method, coefficients) = match g.scheme {
        Scheme::Ut2Reflexive | Scheme::Ut2Symplectic | Scheme::Ut3NeutralZ2 => {
            let c = coefficients_of(f, &g)?;
            let name = match g.scheme {
                Scheme::Ut2Reflexive => ut2_reflexive(&c, value_zero),
                Scheme::Ut2Symplectic => ut2_symplectic(&c, value_zero),
                _ => ut3_neutral_z2(&c, value_zero),
            };
            (name, Method::ReducedCoefficients, Some(c))
        }
        Scheme::Basis if s.family() == Family::Gamma33 && neutral => {
            let c = neutral_word_coefficients(f, &g);
            (gamma33_neutral(&c), Method::NeutralWord, Some(c))
        }
        Scheme::Basis => {
            if span.rank() > 2 {
                return Err(Error::Inconsistent(format!(
                    "span of rank {} where at most 2 was expected",
                    span.rank()
                )));
            }
            (match_catalog(&span, s), Method::SpanRank, None)
        }
    };
    if name.resolve(s)? != span {
        return Err(Error::Inconsistent(format!(
            "branch gave {name} but the symbolic span differs"
        )));
    }
    Ok(Classification {
        structure: s.clone(),
        name,
        method,
        coefficients,
        span,
        degree,
        certificate: independent_monomials(&g),
    })
}

/// Outcome of checking one prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeStatus {
    /// Symbolic and exhaustive results agree, and so does the name over the
    /// original field.
    Agree,
    /// Symbolic and exhaustive results agree over `F_p`, but reduction
    /// modulo `p` kills part of the generic value, so the name may change.
    BadReduction,
    /// A coefficient has `p` in its denominator, the field is a different
    /// prime field, or the enumeration is over budget.
    Skipped,
    Disagree,
}

/// One prime of a cross-check.
#[derive(Clone, Debug)]
pub struct PrimeCheck {
    pub p: u64,
    pub status: PrimeStatus,
    /// Classification over `F_p`.
    pub symbolic: Option<SubspaceName>,
    /// Catalog name of the exhaustive image over `F_p`.
    pub oracle: Option<SubspaceName>,
    pub closed: Option<bool>,
    pub detail: String,
}

impl PrimeCheck {
    fn skipped(p: u64, detail: impl Into<String>) -> PrimeCheck {
        PrimeCheck {
            p,
            status: PrimeStatus::Skipped,
            symbolic: None,
            oracle: None,
            closed: None,
            detail: detail.into(),
        }
    }

    pub fn to_json(&self) -> Value {
        let name = |n: &Option<SubspaceName>| n.as_ref().map(|n| n.to_string());
        json!({
            "p": self.p,
            "status": self.status,
            "symbolic": name(&self.symbolic),
            "oracle": name(&self.oracle),
            "closed": self.closed,
            "detail": self.detail,
        })
    }
}

/// A classification with its per-prime confirmations.
#[derive(Clone, Debug)]
pub struct CrossCheck {
    pub classification: Classification,
    pub checks: Vec<PrimeCheck>,
}

impl CrossCheck {
    /// No prime disagrees.
    pub fn consistent(&self) -> bool {
        self.checks.iter().all(|c| c.status != PrimeStatus::Disagree)
    }

    pub fn bad_reductions(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status == PrimeStatus::BadReduction)
            .count()
    }

    pub fn to_json(&self) -> Value {
        let mut out = self.classification.to_json();
        out["consistent"] = json!(self.consistent());
        out["bad_reductions"] = json!(self.bad_reductions());
        out["checks"] = Value::Array(self.checks.iter().map(PrimeCheck::to_json).collect());
        out
    }
}

fn term_counts(g: &GenericEvaluation) -> Vec<usize> {
    g.value.as_slice().iter().map(|p| p.len()).collect()
}

fn check_prime(
    f: &StarPoly,
    s: &StructureSpec,
    c: &Classification,
    p: u64,
    budget: u64,
) -> Result<PrimeCheck> {
    let field = FieldSpec::prime(p)?;
    if s.field().is_finite() && s.field() != field {
        return Ok(PrimeCheck::skipped(p, format!("structure is over {}", s.field())));
    }
    let Ok(fp) = f.reduce_to(field) else {
        return Ok(PrimeCheck::skipped(p, "a coefficient has p in its denominator"));
    };
    let sp = s.with_field(field);
    let img = match enumerate_image(&fp, &sp, budget) {
        Ok(img) => img,
        Err(Error::BudgetExceeded { required, budget }) => {
            return Ok(PrimeCheck::skipped(
                p,
                format!("enumeration needs {required} steps, budget is {budget}"),
            ))
        }
        Err(e) => return Err(e),
    };
    let cp = classify(&fp, &sp)?;
    let oracle_span = img.span();
    let closed = img.closure() == Closure::Closed;
    let mut check = PrimeCheck {
        p,
        status: PrimeStatus::Agree,
        symbolic: Some(cp.name.clone()),
        oracle: Some(match_catalog(&oracle_span, &sp)),
        closed: Some(closed),
        detail: String::new(),
    };
    if !closed || cp.name.resolve(&sp)? != oracle_span {
        check.status = PrimeStatus::Disagree;
        check.detail = "symbolic name and exhaustive image differ".into();
        return Ok(check);
    }
    if s.field() == field {
        return Ok(check);
    }
    let good = if c.method == Method::EmptySpace || cp.method == Method::EmptySpace {
        c.method == cp.method
    } else {
        let g = generic_eval(f, s)?;
        let gp = generic_eval(&fp, &sp)?;
        term_counts(&g) == term_counts(&gp) && g.span().rank() == gp.span().rank()
    };
    let transferred = c.name.resolve(&sp).ok();
    if transferred.as_ref() == Some(&oracle_span) {
        return Ok(check);
    }
    if good {
        check.status = PrimeStatus::Disagree;
        check.detail = format!("{} over {} does not reduce to the image over F_{p}", c.name, s.field());
    } else {
        check.status = PrimeStatus::BadReduction;
        check.detail = "reduction modulo p changes the generic value".into();
    }
    Ok(check)
}

/// Classifies over the field of `s`, then for each prime classifies the
/// reduction and compares with the exhaustive image.
pub fn classify_checked(
    f: &StarPoly,
    s: &StructureSpec,
    primes: &[u64],
    budget: u64,
) -> Result<CrossCheck> {
    let classification = classify(f, s)?;
    let checks = primes
        .iter()
        .map(|&p| check_prime(f, s, &classification, p, budget))
        .collect::<Result<Vec<_>>>()?;
    Ok(CrossCheck {
        classification,
        checks,
    })
}
