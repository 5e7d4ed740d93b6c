//! Sparse commutative polynomials in the doubly indexed variables `w_j^(i)`.
//!
//! The instance index `i` names the argument a variable belongs to and the
//! slot `j` its coordinate inside that argument. Terms are kept in a
//! `BTreeMap` under degree-lexicographic order; zero coefficients are never
//! stored, so two polynomials are equal exactly when their maps are.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// The commuting variable `w_slot^(instance)`, printed as `w<slot>_<instance>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub instance: u32,
    pub slot: u32,
}

impl Var {
    pub fn new(instance: u32, slot: u32) -> Self {
        Var { instance, slot }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{}_{}", self.slot, self.instance)
    }
}

impl FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse(1, 1, format!("invalid variable '{s}'"));
        let rest = s.trim().strip_prefix('w').ok_or_else(bad)?;
        let (slot, instance) = rest.split_once('_').ok_or_else(bad)?;
        Ok(Var::new(
            instance.parse().map_err(|_| bad())?,
            slot.parse().map_err(|_| bad())?,
        ))
    }
}

/// A product of variables with positive exponents, sorted by variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in powers {
            if e > 0 {
                *map.entry(v).or_default() += e;
            }
        }
        Monomial(map.into_iter().collect())
    }

    /// Product of the given variables, each to the first power (repeats add up).
    pub fn product(vars: impl IntoIterator<Item = Var>) -> Self {
        Self::from_powers(vars.into_iter().map(|v| (v, 1)))
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0, self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|&(v, e)| other.exponent(v) >= e)
    }

    /// `other / self`, assuming `self` divides `other`.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(
            other
                .0
                .iter()
                .filter_map(|&(v, e)| {
                    let r = e - self.exponent(v);
                    (r > 0).then_some((v, r))
                })
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{v}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Monomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Monomial::one());
        }
        let mut powers = Vec::new();
        for factor in s.split('*') {
            let (v, e) = match factor.split_once('^') {
                Some((v, e)) => (
                    v,
                    e.parse::<u32>()
                        .map_err(|_| Error::parse(1, 1, format!("bad exponent in '{factor}'")))?,
                ),
                None => (factor, 1),
            };
            powers.push((v.parse::<Var>()?, e));
        }
        Ok(Monomial::from_powers(powers))
    }
}

/// A polynomial of `F[W]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    field: FieldSpec,
    terms: BTreeMap<Monomial, Scalar>,
}

impl MPoly {
    pub fn zero(field: FieldSpec) -> Self {
        MPoly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(v: Var, field: FieldSpec) -> Self {
        Self::term(Monomial::var(v), field.one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut p = MPoly::zero(c.field());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from raw terms, merging repeats and dropping zeros.
    pub fn from_terms(
        field: FieldSpec,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Result<Self> {
        let mut p = MPoly::zero(field);
        for (m, c) in terms {
            p.add_term(m, c)?;
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) -> Result<()> {
        if c.field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: c.field(),
            });
        }
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
        Ok(())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    /// Coefficient of `m`, zero when absent.
    pub fn coeff_of(&self, m: &Monomial) -> Scalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.powers().iter().map(|(v, _)| *v))
            .collect()
    }

    fn check(&self, other: &MPoly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field,
                right: other.field,
            })
        }
    }

    pub fn try_add(&self, other: &MPoly) -> Result<MPoly> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MPoly) -> Result<MPoly> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &MPoly) -> Result<MPoly> {
        self.check(other)?;
        let mut out = MPoly::zero(self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> Result<MPoly> {
        if s.field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: s.field(),
            });
        }
        if s.is_zero() {
            return Ok(MPoly::zero(self.field));
        }
        Ok(MPoly {
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        })
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::constant(self.field.one());
        for _ in 0..e {
            acc = acc.try_mul(self).expect("same field");
        }
        acc
    }

    /// Substitutes scalars for every variable.
    pub fn eval(&self, assignment: &BTreeMap<Var, Scalar>) -> Result<Scalar> {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.powers() {
                let x = assignment.get(&v).ok_or(Error::MissingAssignment(v))?;
                t = t.try_mul(&x.pow(e))?;
            }
            acc = acc.try_add(&t)?;
        }
        Ok(acc)
    }

    /// Drops every term containing one of `vars` (substituting zero for them).
    pub fn vanish(&self, vars: &BTreeSet<Var>) -> MPoly {
        MPoly {
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.powers().iter().all(|(v, _)| !vars.contains(v)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Rewrites with the relation `pattern = value`: every term divisible by
    /// `pattern` has it replaced by `value`, repeatedly.
    pub fn rewrite(&self, pattern: &Monomial, value: &Scalar) -> Result<MPoly> {
        let mut out = MPoly::zero(self.field);
        for (m, c) in &self.terms {
            let mut m = m.clone();
            let mut c = c.clone();
            while !pattern.is_one() && pattern.divides(&m) {
                m = pattern.quotient_of(&m);
                c = c.try_mul(value)?;
            }
            out.add_term(m, c)?;
        }
        Ok(out)
    }

    /// Maps coefficients into another field.
    pub fn reduce_to(&self, target: FieldSpec) -> Result<MPoly> {
        MPoly::from_terms(
            target,
            self.terms
                .iter()
                .map(|(m, c)| Ok((m.clone(), c.reduce_to(target)?)))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    /// If this is `c * m` for a single monomial, returns it.
    pub fn as_term(&self) -> Option<(&Monomial, &Scalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(self.field.zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.is_one())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = if c.is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(slot: u32, instance: u32) -> MPoly {
        MPoly::var(Var::new(instance, slot), FieldSpec::rationals())
    }

    #[test]
    fn product_of_distinct_variables() {
        let p = w(1, 1).try_mul(&w(1, 2)).unwrap();
        assert_eq!(p.to_string(), "w1_1*w1_2");
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn cancellation_leaves_empty_map() {
        let q = FieldSpec::rationals();
        let f = w(1, 1).try_add(&w(2, 3)).unwrap();
        let g = f.try_add(&f.scale(&q.int(-1)).unwrap()).unwrap();
        assert!(g.is_zero());
        assert_eq!(g, MPoly::zero(q));
    }

    #[test]
    fn difference_of_squares() {
        let a = w(1, 1);
        let b = w(2, 1);
        let p = a.try_add(&b).unwrap().try_mul(&a.try_sub(&b).unwrap()).unwrap();
        let expected = a.pow(2).try_sub(&b.pow(2)).unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn coefficients_are_read_back() {
        let q = FieldSpec::rationals();
        let m: Monomial = "w1_1*w2_2".parse().unwrap();
        let f = MPoly::term(m.clone(), q.int(3));
        assert_eq!(f.coeff_of(&m), q.int(3));
        assert_eq!(MPoly::zero(q).coeff_of(&m), q.zero());
        let sq = w(1, 1).try_add(&w(2, 1)).unwrap().pow(2);
        assert_eq!(sq.coeff_of(&"w1_1*w2_1".parse().unwrap()), q.int(2));
    }

    #[test]
    fn evaluation_and_missing_variables() {
        let q = FieldSpec::rationals();
        let f = w(1, 1).try_mul(&w(2, 1)).unwrap();
        let mut a = BTreeMap::new();
        a.insert(Var::new(1, 1), q.int(2));
        assert_eq!(
            f.eval(&a),
            Err(Error::MissingAssignment(Var::new(1, 2)))
        );
        a.insert(Var::new(1, 2), q.int(3));
        assert_eq!(f.eval(&a).unwrap(), q.int(6));
    }

    #[test]
    fn monomial_text_round_trip() {
        let m: Monomial = "w1_1*w2_3^2".parse().unwrap();
        assert_eq!(m.exponent(Var::new(3, 2)), 2);
        assert_eq!(m.to_string(), "w1_1*w2_3^2");
        assert_eq!(m.degree(), 3);
    }

    #[test]
    fn rewriting_with_a_monomial_relation() {
        let q = FieldSpec::rationals();
        let ab = w(1, 1).try_mul(&w(1, 2)).unwrap();
        let f = ab.try_mul(&w(2, 1)).unwrap().try_add(&w(3, 3)).unwrap();
        let pattern: Monomial = "w1_1*w1_2".parse().unwrap();
        let g = f.rewrite(&pattern, &q.int(2)).unwrap();
        assert_eq!(g, w(2, 1).scale(&q.int(2)).unwrap().try_add(&w(3, 3)).unwrap());
        let h = f.rewrite(&pattern, &q.zero()).unwrap();
        assert_eq!(h, w(3, 3));
    }
}
