//! The two polynomials whose images are not vector spaces: `z1 z2` on `UT_n`
//! with the trivial grading and reflexive involution (`n >= 3`), and
//! `y1 y2` with `y1` of degree 0 and `y2` of degree 1 on `UT_n` with the
//! canonical `Z_n`-grading (`n >= 4`).

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::image::find_preimage;
use crate::matrix::{e, tri_positions, TriMatrix};
use crate::mpoly::{MPoly, Var};
use crate::star_poly::{StarPoly, VarSpec};
use crate::structure::{InvolutionKind, StructureSpec, Symmetry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSource {
    /// Taken from the published argument.
    Published,
    /// Chosen here and accepted because it re-evaluates correctly.
    ArtifactChosen,
}

/// Arguments claimed to produce `value`.
#[derive(Clone, Debug)]
pub struct Witness {
    pub label: String,
    pub value: TriMatrix<Scalar>,
    pub args: Vec<TriMatrix<Scalar>>,
    pub source: WitnessSource,
    /// `f(args) == value`, with the arguments checked to lie in their spaces.
    pub verified: bool,
}

impl Witness {
    fn new(
        f: &StarPoly,
        s: &StructureSpec,
        label: &str,
        value: TriMatrix<Scalar>,
        args: Vec<TriMatrix<Scalar>>,
        source: WitnessSource,
    ) -> Witness {
        let verified = f.evaluate(s, &args).map(|v| v == value).unwrap_or(false);
        Witness {
            label: label.to_string(),
            value,
            args,
            source,
            verified,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "label": self.label,
            "value": self.value.to_json(),
            "preimage": self.args.iter().map(TriMatrix::to_json).collect::<Vec<_>>(),
            "source": self.source,
            "verified": self.verified,
        })
    }
}

/// Outcome of scanning every argument tuple for the sum of the witnesses.
#[derive(Clone, Debug)]
pub struct ExhaustiveRefutation {
    pub p: u64,
    pub target: TriMatrix<Scalar>,
    pub refuted: bool,
    pub slices: u128,
    pub tuples_covered: u128,
    /// Set only when the target turned out to be attained.
    pub preimage: Option<Vec<TriMatrix<Scalar>>>,
}

impl ExhaustiveRefutation {
    fn run(f: &StarPoly, s: &StructureSpec, target: TriMatrix<Scalar>, budget: u64) -> Result<Self> {
        let scan = find_preimage(f, s, &target, budget)?;
        Ok(ExhaustiveRefutation {
            p: s.field().characteristic(),
            target,
            refuted: scan.preimage.is_none(),
            slices: scan.slices,
            tuples_covered: scan.tuples_covered,
            preimage: scan.preimage,
        })
    }

    pub fn to_json(&self) -> Value {
        let mut out = json!({
            "mode": "exhaustive",
            "p": self.p,
            "target": self.target.to_json(),
            "refuted": self.refuted,
            "slices": self.slices.to_string(),
            "tuples": self.tuples_covered.to_string(),
        });
        if let Some(pre) = &self.preimage {
            out["preimage"] = Value::Array(pre.iter().map(TriMatrix::to_json).collect());
        }
        out
    }
}

/// Symbolic proof that `AB = e_11 + e_nn + e_1n` has no skew solution for odd
/// `n`: the listed deductions force `(AB)_1n = 0`.
#[derive(Clone, Debug)]
pub struct ConstraintCertificate {
    pub n: usize,
    pub n0: usize,
    pub deductions: Vec<String>,
    /// `(AB)_1n` after the forced zeros.
    pub corner: String,
    pub holds: bool,
}

impl ConstraintCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "mode": "symbolic-constraint",
            "n": self.n,
            "n0": self.n0,
            "deductions": self.deductions,
            "corner": self.corner,
            "holds": self.holds,
        })
    }
}

/// An entry of a generic product compared against a closed form.
#[derive(Clone, Debug)]
pub struct EntryIdentity {
    pub entry: (usize, usize),
    pub formula: String,
    pub holds: bool,
}

impl EntryIdentity {
    pub fn to_json(&self) -> Value {
        json!({
            "entry": format!("{},{}", self.entry.0, self.entry.1),
            "formula": self.formula,
            "holds": self.holds,
        })
    }
}

/// Everything checked for one counterexample at one size and prime.
#[derive(Clone, Debug)]
pub struct CounterexampleReport {
    pub case: &'static str,
    pub structure: StructureSpec,
    pub poly: StarPoly,
    pub witnesses: Vec<Witness>,
    pub refutation: ExhaustiveRefutation,
    pub certificate: Option<ConstraintCertificate>,
    pub identities: Vec<EntryIdentity>,
    pub notes: Vec<String>,
    pub elapsed: Duration,
}

impl CounterexampleReport {
    /// Witnesses verified, their sum refuted, and every symbolic check passed.
    pub fn confirmed(&self) -> bool {
        self.witnesses.iter().all(|w| w.verified)
            && self.refutation.refuted
            && self.certificate.as_ref().is_none_or(|c| c.holds)
            && self.identities.iter().all(|i| i.holds)
    }

    /// JSON without timing, so repeated runs compare equal.
    pub fn to_json(&self) -> Value {
        let mut out = json!({
            "case": self.case,
            "n": self.structure.n(),
            "structure": self.structure.to_string(),
            "polynomial": self.poly.to_string(),
            "field": self.structure.field().to_string(),
            "witnesses": self.witnesses.iter().map(Witness::to_json).collect::<Vec<_>>(),
            "refutation": self.refutation.to_json(),
            "confirmed": self.confirmed(),
        });
        if let Some(c) = &self.certificate {
            out["certificate"] = c.to_json();
        }
        if !self.identities.is_empty() {
            out["identities"] = Value::Array(self.identities.iter().map(EntryIdentity::to_json).collect());
        }
        if !self.notes.is_empty() {
            out["notes"] = json!(self.notes);
        }
        out
    }
}

fn check_prime(p: u64) -> Result<FieldSpec> {
    if p == 2 {
        return Err(Error::InvalidField("the counterexamples need an odd prime".into()));
    }
    FieldSpec::prime(p)
}

fn add(a: &TriMatrix<Scalar>, b: &TriMatrix<Scalar>) -> TriMatrix<Scalar> {
    a.try_add(b).expect("same shape")
}

fn sub(a: &TriMatrix<Scalar>, b: &TriMatrix<Scalar>) -> TriMatrix<Scalar> {
    a.try_sub(b).expect("same shape")
}

/// `Σ_k w_k^(instance) basis_k`.
fn generic_element(basis: &[TriMatrix<Scalar>], n: usize, instance: u32, field: FieldSpec) -> TriMatrix<MPoly> {
    let mut out: TriMatrix<MPoly> = TriMatrix::zero(n, field);
    for (k, b) in basis.iter().enumerate() {
        let w = MPoly::var(Var::new(instance, k as u32 + 1), field);
        for ((i, j), c) in b.nonzero_entries() {
            let entry = out.get(i, j).try_add(&w.scale(c).unwrap()).unwrap();
            out.set(i, j, entry);
        }
    }
    out
}

/// Names each variable after the first entry of `m` equal to it.
fn name_entries(m: &TriMatrix<MPoly>, letter: char, names: &mut BTreeMap<Var, String>) {
    for (i, j) in tri_positions(m.n()) {
        if let Some(v) = single_var(&m.get(i, j)) {
            names.entry(v).or_insert_with(|| format!("{letter}{i}{j}"));
        }
    }
}

/// The variable `v` if `p == v`.
fn single_var(p: &MPoly) -> Option<Var> {
    let (m, c) = p.as_term()?;
    match m.powers() {
        [(v, 1)] if c.is_one() => Some(*v),
        _ => None,
    }
}

fn render(p: &MPoly, names: &BTreeMap<Var, String>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().enumerate() {
        let negative = c.is_negative();
        let abs = if negative { -c.clone() } else { c.clone() };
        match (k, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let vars: Vec<String> = m
            .powers()
            .iter()
            .map(|(v, e)| {
                let name = names.get(v).cloned().unwrap_or_else(|| v.to_string());
                if *e > 1 {
                    format!("{name}^{e}")
                } else {
                    name
                }
            })
            .collect();
        if !abs.is_one() || vars.is_empty() {
            out.push_str(&abs.to_string());
            if !vars.is_empty() {
                out.push('*');
            }
        }
        out.push_str(&vars.join("*"));
    }
    out
}

/// Solves `eqs = 0` for `unknowns`, knowing the variables in `nonzero` do not
/// vanish: repeatedly picks an equation reduced to `c·u·x` with `u` nonzero
/// and concludes `x = 0`. Returns the steps, or `None` if it gets stuck.
fn propagate(
    mut eqs: Vec<MPoly>,
    unknowns: &BTreeSet<Var>,
    nonzero: &BTreeSet<Var>,
    names: &BTreeMap<Var, String>,
) -> Option<Vec<String>> {
    let mut open = unknowns.clone();
    let mut steps = Vec::new();
    while !open.is_empty() {
        let found = eqs.iter().find_map(|eq| {
            let (m, _) = eq.as_term()?;
            let vars: Vec<Var> = m.powers().iter().filter(|(_, e)| *e == 1).map(|(v, _)| *v).collect();
            if vars.len() != 2 || m.powers().len() != 2 {
                return None;
            }
            let (u, x) = if nonzero.contains(&vars[0]) { (vars[0], vars[1]) } else { (vars[1], vars[0]) };
            (nonzero.contains(&u) && open.contains(&x)).then(|| (render(eq, names), x))
        })?;
        let (eq, x) = found;
        steps.push(format!("{eq} = 0 gives {} = 0", names[&x]));
        open.remove(&x);
        let gone = BTreeSet::from([x]);
        eqs = eqs.iter().map(|q| q.vanish(&gone)).collect();
    }
    Some(steps)
}

/// Runs the forced-zero argument for `AB = e_11 + e_nn + e_1n` with `A`, `B`
/// generic skew matrices of `UT_n` (reflexive involution), `n` odd: entries
/// `(1,j)` and `(n+1-j,n)` of the product vanish for `2 <= j <= (n+1)/2`, and
/// with `a11·b11 ≠ 0` and `ajj·bjj = 0` this forces `a1j = b1j = 0`, which
/// makes `(AB)_1n` vanish identically.
pub fn ut3_constraint_check(n: usize) -> Result<ConstraintCertificate> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::Unsupported(format!(
            "the symbolic certificate needs odd n >= 3, got {n}"
        )));
    }
    let field = FieldSpec::rationals();
    let s = StructureSpec::trivial(n, InvolutionKind::Reflexive, field)?;
    let basis = s.matrices(&s.space(Symmetry::Skew, 0));
    let a = generic_element(&basis, n, 1, field);
    let b = generic_element(&basis, n, 2, field);
    let ab = a.try_mul(&b)?;
    let mut names = BTreeMap::new();
    name_entries(&a, 'a', &mut names);
    name_entries(&b, 'b', &mut names);
    let n0 = n.div_ceil(2);
    let mut deductions = Vec::new();
    let fail = |deductions: Vec<String>| ConstraintCertificate {
        n,
        n0,
        deductions,
        corner: String::new(),
        holds: false,
    };

    let (Some(a11), Some(b11)) = (single_var(&a.get(1, 1)), single_var(&b.get(1, 1))) else {
        return Ok(fail(deductions));
    };
    deductions.push(format!(
        "(AB)_11 = {} = 1, so a11 and b11 are nonzero",
        render(&ab.get(1, 1), &names)
    ));
    deductions.push(format!(
        "a{n0}{n0} = b{n0}{n0} = 0 since A, B are skew and char != 2"
    ));
    let nonzero = BTreeSet::from([a11, b11]);
    let mut killed: BTreeSet<Var> = BTreeSet::new();
    for j in 2..=n0 {
        let (Some(a1j), Some(b1j)) = (single_var(&a.get(1, j)), single_var(&b.get(1, j))) else {
            return Ok(fail(deductions));
        };
        let row = ab.get(1, j).vanish(&killed);
        let col = ab.get(n + 1 - j, n).vanish(&killed);
        deductions.push(format!("(AB)_1{j} = {} = 0", render(&row, &names)));
        deductions.push(format!("(AB)_{}{n} = {} = 0", n + 1 - j, render(&col, &names)));
        let cases: Vec<Option<Var>> = if j == n0 {
            vec![None]
        } else {
            let (Some(ajj), Some(bjj)) = (single_var(&a.get(j, j)), single_var(&b.get(j, j))) else {
                return Ok(fail(deductions));
            };
            deductions.push(format!(
                "(AB)_{j}{j} = {} = 0, so a{j}{j} = 0 or b{j}{j} = 0",
                render(&ab.get(j, j), &names)
            ));
            vec![Some(ajj), Some(bjj)]
        };
        let unknowns = BTreeSet::from([a1j, b1j]);
        for case in cases {
            let gone: BTreeSet<Var> = case.into_iter().collect();
            let eqs = vec![row.vanish(&gone), col.vanish(&gone)];
            let Some(steps) = propagate(eqs, &unknowns, &nonzero, &names) else {
                return Ok(fail(deductions));
            };
            let prefix = case.map(|v| format!("if {} = 0: ", names[&v])).unwrap_or_default();
            deductions.push(format!("{prefix}{}", steps.join("; ")));
        }
        deductions.push(format!("a1{j} = b1{j} = 0"));
        killed.extend([a1j, b1j]);
    }
    let corner = ab.get(1, n).vanish(&killed);
    let rendered = render(&corner, &names);
    deductions.push(format!("(AB)_1{n} = {rendered}, but the target needs 1"));
    Ok(ConstraintCertificate {
        n,
        n0,
        deductions,
        corner: rendered,
        holds: corner.is_zero(),
    })
}

/// `z1 z2` on `UT_n` with the trivial grading and reflexive involution over
/// `F_p`: `e_11 + e_nn` and `e_1n` are values, their sum is not.
pub fn ut3_trivial_case(n: usize, p: u64, budget: u64) -> Result<CounterexampleReport> {
    if n < 3 {
        return Err(Error::Unsupported(format!("the z1 z2 counterexample needs n >= 3, got {n}")));
    }
    let start = Instant::now();
    let field = check_prime(p)?;
    let s = StructureSpec::trivial(n, InvolutionKind::Reflexive, field)?;
    let f = StarPoly::parse_with_vars("z1 z2", field, vec![VarSpec::skew(1, 0), VarSpec::skew(2, 0)])?;
    let u = |i, j| e(n, i, j, field);
    let diag = sub(&u(1, 1), &u(n, n));
    let mut witnesses = vec![Witness::new(
        &f,
        &s,
        &format!("e11+e{n}{n}"),
        add(&u(1, 1), &u(n, n)),
        vec![diag.clone(), diag],
        WitnessSource::Published,
    )];
    let mut notes = Vec::new();
    let corner = if n % 2 == 1 {
        let n0 = n.div_ceil(2);
        let x = sub(&u(1, n0), &u(n0, n));
        (vec![x.clone(), x.neg()], WitnessSource::Published)
    } else {
        let n0 = n / 2;
        notes.push(
            "even n: the e1n witness is chosen here, and the refutation is a finite-field \
             computation; the general even case is not proved"
                .to_string(),
        );
        (
            vec![sub(&u(1, n0), &u(n0 + 1, n)), sub(&u(n0, n), &u(1, n0 + 1))],
            WitnessSource::ArtifactChosen,
        )
    };
    witnesses.push(Witness::new(&f, &s, &format!("e1{n}"), u(1, n), corner.0, corner.1));
    let target = add(&add(&u(1, 1), &u(n, n)), &u(1, n));
    let refutation = ExhaustiveRefutation::run(&f, &s, target, budget)?;
    let certificate = if n % 2 == 1 { Some(ut3_constraint_check(n)?) } else { None };
    Ok(CounterexampleReport {
        case: "z1z2-trivial-grading",
        structure: s,
        poly: f,
        witnesses,
        refutation,
        certificate,
        identities: Vec::new(),
        notes,
        elapsed: start.elapsed(),
    })
}

/// Checks `(AB)_12 = a11 b12`, `(AB)_23 = a22 b23` and
/// `(AB)_{n-1,n} = a22 b12` for generic `A ∈ S_0`, `B ∈ S_1` of the canonical
/// `Z_n`-grading.
pub fn zn_entry_identities(n: usize) -> Result<Vec<EntryIdentity>> {
    let field = FieldSpec::rationals();
    let s = StructureSpec::canonical_zn(n, InvolutionKind::Reflexive, field)?;
    let a = generic_element(&s.matrices(&s.space(Symmetry::Sym, 0)), n, 1, field);
    let b = generic_element(&s.matrices(&s.space(Symmetry::Sym, 1)), n, 2, field);
    let ab = a.try_mul(&b)?;
    let check = |(i, j): (usize, usize), (ai, bi, bj): (usize, usize, usize)| -> Result<EntryIdentity> {
        let rhs = a.get(ai, ai).try_mul(&b.get(bi, bj))?;
        Ok(EntryIdentity {
            entry: (i, j),
            formula: format!("(AB)_{i},{j} = a{ai}{ai}*b{bi}{bj}"),
            holds: ab.get(i, j) == rhs && !rhs.is_zero(),
        })
    };
    Ok(vec![
        check((1, 2), (1, 1, 2))?,
        check((2, 3), (2, 2, 3))?,
        check((n - 1, n), (2, 1, 2))?,
    ])
}

/// `y1 y2` with `y1 ∈ S_0`, `y2 ∈ S_1` on `UT_n` with the canonical
/// `Z_n`-grading and reflexive involution over `F_p`: `e_12` and `e_23` are
/// values, `e_12 + e_23` is not.
pub fn utn_zn_case(n: usize, p: u64, budget: u64) -> Result<CounterexampleReport> {
    if n < 4 {
        return Err(Error::Unsupported(format!("the Z_n counterexample needs n >= 4, got {n}")));
    }
    let start = Instant::now();
    let field = check_prime(p)?;
    let s = StructureSpec::canonical_zn(n, InvolutionKind::Reflexive, field)?;
    let f = StarPoly::parse_with_vars("y1 y2", field, vec![VarSpec::sym(1, 0), VarSpec::sym(2, 1)])?;
    let u = |i, j| e(n, i, j, field);
    let first = Witness::new(
        &f,
        &s,
        "e12",
        u(1, 2),
        vec![add(&u(1, 1), &u(n, n)), add(&u(1, 2), &u(n - 1, n))],
        WitnessSource::Published,
    );
    let second_args = if n == 4 {
        vec![add(&u(2, 2), &u(3, 3)), u(2, 3)]
    } else {
        vec![add(&u(2, 2), &u(n - 1, n - 1)), add(&u(2, 3), &u(n - 2, n - 1))]
    };
    let (source, notes) = if n.is_multiple_of(2) {
        (WitnessSource::Published, Vec::new())
    } else {
        (
            WitnessSource::ArtifactChosen,
            vec!["odd n: the even-n witnesses are reused unchanged and accepted by re-evaluation".to_string()],
        )
    };
    let first = Witness { source, ..first };
    let second = Witness::new(&f, &s, "e23", u(2, 3), second_args, source);
    let refutation = ExhaustiveRefutation::run(&f, &s, add(&u(1, 2), &u(2, 3)), budget)?;
    Ok(CounterexampleReport {
        case: "zn-grading",
        structure: s,
        poly: f,
        witnesses: vec![first, second],
        refutation,
        certificate: None,
        identities: zn_entry_identities(n)?,
        notes,
        elapsed: start.elapsed(),
    })
}
