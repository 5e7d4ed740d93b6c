//! JSON and text renderings of results, and the lemma suite runner.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::classify::{CrossCheck, PrimeStatus};
use crate::counterexample::CounterexampleReport;
use crate::error::Result;
use crate::field::Scalar;
use crate::generic::{
    identity_suite, verify_corner_lemma, verify_row_lemma, verify_zproduct_lemma, IdentityCheck, LemmaCheck,
};
use crate::image::{Closure, ImageReport};
use crate::matrix::TriMatrix;
use crate::structure::StructureSpec;

/// Structure with the bases of every homogeneous component.
pub fn structure_json(s: &StructureSpec) -> Value {
    let list = |ms: &[TriMatrix<Scalar>]| Value::Array(ms.iter().map(TriMatrix::to_json).collect());
    let components: Vec<Value> = s
        .component_bases()
        .iter()
        .map(|c| {
            json!({
                "degree": c.degree,
                "A": list(&c.a),
                "S": list(&c.s),
                "K": list(&c.k),
            })
        })
        .collect();
    json!({
        "n": s.n(),
        "grading": s.grade().to_string(),
        "involution": s.involution().to_string(),
        "field": s.field().to_string(),
        "components": components,
    })
}

fn indent(text: &str, by: usize) -> String {
    let pad = " ".repeat(by);
    text.lines().map(|l| format!("{pad}{l}\n")).collect()
}

fn matrices_text(out: &mut String, title: &str, ms: &[TriMatrix<Scalar>]) {
    if ms.is_empty() {
        let _ = writeln!(out, "{title}: none");
        return;
    }
    let _ = writeln!(out, "{title}:");
    for m in ms {
        out.push_str(&indent(&m.to_string(), 2));
        out.push('\n');
    }
}

pub fn cross_check_text(c: &CrossCheck) -> String {
    let cl = &c.classification;
    let mut out = String::new();
    let _ = writeln!(out, "structure: {}", cl.structure);
    let _ = writeln!(out, "image: {} (degree {}, {:?})", cl.name, cl.degree, cl.method);
    if let Some(k) = &cl.coefficients {
        let lambda: Vec<String> = k.lambda.iter().map(|(i, v)| format!("{i}:{v}")).collect();
        let _ = write!(out, "alpha = {}, eta = {}, lambda = {{{}}}", k.alpha, k.eta, lambda.join(", "));
        if let Some(center) = &k.center {
            let _ = write!(out, ", center = {center}");
        }
        out.push('\n');
    }
    matrices_text(&mut out, "span basis", &cl.structure.matrices(&cl.span));
    for p in &c.checks {
        let status = match p.status {
            PrimeStatus::Agree => "agree",
            PrimeStatus::BadReduction => "bad reduction",
            PrimeStatus::Skipped => "skipped",
            PrimeStatus::Disagree => "DISAGREE",
        };
        let _ = write!(out, "F_{}: {status}", p.p);
        if let Some(o) = &p.oracle {
            let _ = write!(out, ", oracle {o}");
        }
        if !p.detail.is_empty() {
            let _ = write!(out, " ({})", p.detail);
        }
        out.push('\n');
    }
    out
}

pub fn image_text(r: &ImageReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "structure: {}", r.structure);
    let _ = writeln!(out, "mode: {}, tuples: {}, distinct values: {}", r.mode.label(), r.tuples, r.size);
    let verdict = match r.is_vector_space() {
        Some(true) => "yes".to_string(),
        Some(false) => "no".to_string(),
        None => "undetermined".to_string(),
    };
    let _ = writeln!(out, "vector space: {verdict}");
    let _ = writeln!(out, "span: {} (rank {})", r.catalog, r.span.rank());
    matrices_text(&mut out, "span basis", &r.structure.matrices(&r.span));
    if let Closure::NotClosed { u, v } = &r.closure {
        matrices_text(&mut out, "attained u, v with u+v not attained", &[u.clone(), v.clone()]);
    }
    out
}

pub fn counterexample_text(r: &CounterexampleReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "case: {} on {}", r.poly, r.structure);
    for w in &r.witnesses {
        let _ = writeln!(
            out,
            "  {} = f(...): {} ({:?})",
            w.label,
            if w.verified { "verified" } else { "FAILED" },
            w.source
        );
    }
    let ref_ = &r.refutation;
    let _ = writeln!(
        out,
        "  target refuted over F_{}: {} ({} tuples, {} slices)",
        ref_.p, ref_.refuted, ref_.tuples_covered, ref_.slices
    );
    if let Some(c) = &r.certificate {
        let _ = writeln!(out, "  forced-zero certificate (n0 = {}): {}", c.n0, c.holds);
        for d in &c.deductions {
            let _ = writeln!(out, "    {d}");
        }
    }
    for i in &r.identities {
        let _ = writeln!(out, "  {}: {}", i.formula, i.holds);
    }
    for n in &r.notes {
        let _ = writeln!(out, "  note: {n}");
    }
    let _ = writeln!(out, "  confirmed: {} ({:.2?})", r.confirmed(), r.elapsed);
    out
}

/// Entry lemmas for sizes `1..=max_size` and the identity checks.
#[derive(Clone, Debug)]
pub struct LemmaSuite {
    pub lemmas: Vec<LemmaCheck>,
    pub identities: Vec<IdentityCheck>,
}

impl LemmaSuite {
    pub fn passed(&self) -> bool {
        self.lemmas.iter().all(|l| l.holds) && self.identities.iter().all(IdentityCheck::passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lemmas": self.lemmas,
            "identities": self.identities,
            "passed": self.passed(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in &self.lemmas {
            let _ = writeln!(
                out,
                "{} size {}: {}",
                l.lemma,
                l.size,
                if l.holds { "ok" } else { "FAILED" }
            );
        }
        for i in &self.identities {
            let kind = if i.expected { "identity" } else { "non-identity" };
            let _ = writeln!(
                out,
                "{} {} on {}: {} {}",
                i.label,
                i.poly,
                i.structure,
                kind,
                if i.passed() { "ok" } else { "FAILED" }
            );
        }
        out
    }
}

pub fn run_lemmas(max_size: usize) -> Result<LemmaSuite> {
    let mut lemmas = Vec::new();
    for k in 1..=max_size {
        lemmas.push(verify_row_lemma(k));
        lemmas.push(verify_zproduct_lemma(k));
        lemmas.push(verify_corner_lemma(k));
    }
    Ok(LemmaSuite {
        lemmas,
        identities: identity_suite()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma_suite_passes() {
        let s = run_lemmas(4).unwrap();
        assert!(s.passed(), "{}", s.to_text());
        assert_eq!(s.lemmas.len(), 12);
    }
}
