//! Upper triangular matrices over an exact coefficient ring.

use std::fmt;

use serde::ser::{Serialize, SerializeMap, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::mpoly::MPoly;

/// Coefficient rings for [`TriMatrix`]: field elements and polynomials over a
/// field. Operations assume both operands share a field.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero_in(field: FieldSpec) -> Self;
    fn from_scalar(s: Scalar) -> Self;
    fn field_of(&self) -> FieldSpec;
    fn is_zero(&self) -> bool;
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
    fn ring_neg(&self) -> Self;
    fn ring_scale(&self, s: &Scalar) -> Self;
}

impl Coeff for Scalar {
    fn zero_in(field: FieldSpec) -> Self {
        field.zero()
    }
    fn from_scalar(s: Scalar) -> Self {
        s
    }
    fn field_of(&self) -> FieldSpec {
        self.field()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn ring_neg(&self) -> Self {
        -self
    }
    fn ring_scale(&self, s: &Scalar) -> Self {
        self * s
    }
}

impl Coeff for MPoly {
    fn zero_in(field: FieldSpec) -> Self {
        MPoly::zero(field)
    }
    fn from_scalar(s: Scalar) -> Self {
        MPoly::constant(s)
    }
    fn field_of(&self) -> FieldSpec {
        self.field()
    }
    fn is_zero(&self) -> bool {
        MPoly::is_zero(self)
    }
    fn ring_add(&self, other: &Self) -> Self {
        self.try_add(other).expect("polynomials over different fields")
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("polynomials over different fields")
    }
    fn ring_neg(&self) -> Self {
        self.neg()
    }
    fn ring_scale(&self, s: &Scalar) -> Self {
        self.scale(s).expect("polynomial and scalar over different fields")
    }
}

/// Number of stored entries of an `n x n` upper triangular matrix.
pub fn tri_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Row-major index of entry `(i, j)` (1-based, `i <= j`).
pub fn tri_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i <= j && j <= n);
    (i - 1) * (2 * n + 2 - i) / 2 + (j - i)
}

/// All positions `(i, j)` with `i <= j`, in storage order.
pub fn tri_positions(n: usize) -> Vec<(usize, usize)> {
    (1..=n)
        .flat_map(|i| (i..=n).map(move |j| (i, j)))
        .collect()
}

/// An element of `UT_n` with entries in `R`. Entries below the diagonal are
/// not stored and read as zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TriMatrix<R> {
    n: usize,
    field: FieldSpec,
    entries: Vec<R>,
}

impl<R: Coeff> TriMatrix<R> {
    pub fn zero(n: usize, field: FieldSpec) -> Self {
        TriMatrix {
            n,
            field,
            entries: vec![R::zero_in(field); tri_dim(n)],
        }
    }

    pub fn identity(n: usize, field: FieldSpec) -> Self {
        let mut m = Self::zero(n, field);
        for i in 1..=n {
            m.set(i, i, R::from_scalar(field.one()));
        }
        m
    }

    /// The matrix unit `e_ij`.
    pub fn unit(n: usize, i: usize, j: usize, field: FieldSpec) -> Self {
        let mut m = Self::zero(n, field);
        m.set(i, j, R::from_scalar(field.one()));
        m
    }

    pub fn from_entries(
        n: usize,
        field: FieldSpec,
        entries: impl IntoIterator<Item = ((usize, usize), R)>,
    ) -> Result<Self> {
        let mut m = Self::zero(n, field);
        for ((i, j), v) in entries {
            if i == 0 || j > n || i > j {
                return Err(Error::Unsupported(format!(
                    "entry ({i},{j}) is not in the upper triangle of a {n}x{n} matrix"
                )));
            }
            if v.field_of() != field {
                return Err(Error::FieldMismatch {
                    left: field,
                    right: v.field_of(),
                });
            }
            m.set(i, j, v);
        }
        Ok(m)
    }

    /// Builds a matrix from its entries in storage order.
    pub fn from_vec(n: usize, field: FieldSpec, entries: Vec<R>) -> Result<Self> {
        if entries.len() != tri_dim(n) {
            return Err(Error::DimensionMismatch {
                left: tri_dim(n),
                right: entries.len(),
            });
        }
        Ok(TriMatrix { n, field, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Entry `(i, j)`; zero below the diagonal.
    pub fn get(&self, i: usize, j: usize) -> R {
        if i > j {
            R::zero_in(self.field)
        } else {
            self.entries[tri_index(self.n, i, j)].clone()
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<&R> {
        (i <= j).then(|| &self.entries[tri_index(self.n, i, j)])
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        assert!(i <= j, "cannot set ({i},{j}) below the diagonal");
        let k = tri_index(self.n, i, j);
        self.entries[k] = v;
    }

    pub fn as_slice(&self) -> &[R] {
        &self.entries
    }

    pub fn into_vec(self) -> Vec<R> {
        self.entries
    }

    /// Nonzero entries with their positions.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = ((usize, usize), &R)> {
        tri_positions(self.n)
            .into_iter()
            .zip(self.entries.iter())
            .filter(|(_, v)| !v.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Coeff::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        self.nonzero_entries().all(|((i, j), _)| i == j)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: other.field,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(TriMatrix {
            n: self.n,
            field: self.field,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.ring_add(b))
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.n;
        let mut out = Self::zero(n, self.field);
        for i in 1..=n {
            for k in i..=n {
                let mut acc = R::zero_in(self.field);
                for j in i..=k {
                    let a = &self.entries[tri_index(n, i, j)];
                    if a.is_zero() {
                        continue;
                    }
                    let b = &other.entries[tri_index(n, j, k)];
                    if b.is_zero() {
                        continue;
                    }
                    acc = acc.ring_add(&a.ring_mul(b));
                }
                out.entries[tri_index(n, i, k)] = acc;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> Result<Self> {
        if s.field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: s.field(),
            });
        }
        Ok(TriMatrix {
            n: self.n,
            field: self.field,
            entries: self.entries.iter().map(|a| a.ring_scale(s)).collect(),
        })
    }

    pub fn neg(&self) -> Self {
        TriMatrix {
            n: self.n,
            field: self.field,
            entries: self.entries.iter().map(Coeff::ring_neg).collect(),
        }
    }

    /// Applies `f` entrywise, possibly changing the coefficient ring.
    pub fn try_map<S: Coeff>(
        &self,
        field: FieldSpec,
        f: impl Fn(&R) -> Result<S>,
    ) -> Result<TriMatrix<S>> {
        Ok(TriMatrix {
            n: self.n,
            field,
            entries: self.entries.iter().map(f).collect::<Result<_>>()?,
        })
    }
}

impl TriMatrix<Scalar> {
    /// Lifts a scalar matrix to constant polynomial entries.
    pub fn to_poly(&self) -> TriMatrix<MPoly> {
        TriMatrix {
            n: self.n,
            field: self.field,
            entries: self.entries.iter().cloned().map(MPoly::constant).collect(),
        }
    }

    pub fn reduce_to(&self, target: FieldSpec) -> Result<Self> {
        self.try_map(target, |c| c.reduce_to(target))
    }

    /// Parses the JSON shape `{"n": 3, "entries": {"1,2": "1"}}`.
    pub fn from_json(value: &serde_json::Value, field: FieldSpec) -> Result<Self> {
        let bad = |m: &str| Error::parse(1, 1, format!("matrix JSON: {m}"));
        let n = value
            .get("n")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| bad("missing 'n'"))? as usize;
        let entries = value
            .get("entries")
            .and_then(|v| v.as_object())
            .ok_or_else(|| bad("missing 'entries'"))?;
        let mut parsed = Vec::new();
        for (key, v) in entries {
            let (i, j) = key.split_once(',').ok_or_else(|| bad("bad position key"))?;
            let i: usize = i.trim().parse().map_err(|_| bad("bad row"))?;
            let j: usize = j.trim().parse().map_err(|_| bad("bad column"))?;
            let text = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(x) => x.to_string(),
                _ => return Err(bad("entry must be a string")),
            };
            parsed.push(((i, j), Scalar::parse(&text, field)?));
        }
        TriMatrix::from_entries(n, field, parsed)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("matrix serializes")
    }
}

impl TriMatrix<MPoly> {
    /// Substitutes scalars for the polynomial variables entrywise.
    pub fn eval(
        &self,
        assignment: &std::collections::BTreeMap<crate::mpoly::Var, Scalar>,
    ) -> Result<TriMatrix<Scalar>> {
        self.try_map(self.field, |p| p.eval(assignment))
    }
}

impl<R: Coeff> Serialize for TriMatrix<R> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Entries<'a, R>(&'a TriMatrix<R>);
        impl<R: Coeff> Serialize for Entries<'_, R> {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                let nz: Vec<_> = self.0.nonzero_entries().collect();
                let mut map = serializer.serialize_map(Some(nz.len()))?;
                for ((i, j), v) in nz {
                    map.serialize_entry(&format!("{i},{j}"), &v.to_string())?;
                }
                map.end()
            }
        }
        let mut st = serializer.serialize_struct("TriMatrix", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("entries", &Entries(self))?;
        st.end()
    }
}

impl<R: Coeff> fmt::Display for TriMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(|v| v.to_string()).collect();
        let width = cells.iter().map(|c| c.chars().count()).max().unwrap_or(1);
        for i in 1..=self.n {
            write!(f, "[")?;
            for j in 1..=self.n {
                if j < i {
                    write!(f, " {:>width$}", "")?;
                } else {
                    write!(f, " {:>width$}", cells[tri_index(self.n, i, j)])?;
                }
            }
            write!(f, " ]")?;
            if i < self.n {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

impl<R: Coeff> fmt::Debug for TriMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TriMatrix(n={}, {{", self.n)?;
        for (k, ((i, j), v)) in self.nonzero_entries().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({i},{j}): {v}")?;
        }
        write!(f, "}})")
    }
}

/// Shorthand for the scalar matrix unit `e_ij` in `UT_n`.
pub fn e(n: usize, i: usize, j: usize, field: FieldSpec) -> TriMatrix<Scalar> {
    TriMatrix::unit(n, i, j, field)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    #[test]
    fn indexing_matches_positions() {
        for n in 1..6 {
            for (k, (i, j)) in tri_positions(n).into_iter().enumerate() {
                assert_eq!(tri_index(n, i, j), k);
            }
        }
    }

    #[test]
    fn matrix_unit_products() {
        let f = q();
        assert_eq!(e(3, 1, 2, f).try_mul(&e(3, 2, 3, f)).unwrap(), e(3, 1, 3, f));
        assert!(e(3, 2, 3, f).try_mul(&e(3, 1, 2, f)).unwrap().is_zero());
        let a = e(3, 1, 1, f).try_sub(&e(3, 3, 3, f)).unwrap();
        let b = e(3, 1, 2, f).try_sub(&e(3, 2, 3, f)).unwrap();
        assert_eq!(a.try_mul(&b).unwrap(), e(3, 1, 2, f));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let f = q();
        assert_eq!(
            e(2, 1, 1, f).try_mul(&e(3, 1, 1, f)),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn below_diagonal_reads_zero() {
        let m = TriMatrix::<Scalar>::identity(3, q());
        assert!(m.get(3, 1).is_zero());
        assert!(m.entry(2, 1).is_none());
    }

    #[test]
    fn json_shape_round_trips() {
        let f = q();
        let m = TriMatrix::from_entries(
            3,
            f,
            [((1, 2), f.one()), ((1, 3), Scalar::parse("-2/3", f).unwrap())],
        )
        .unwrap();
        let v = m.to_json();
        assert_eq!(
            v.to_string(),
            r#"{"n":3,"entries":{"1,2":"1","1,3":"-2/3"}}"#
        );
        assert_eq!(TriMatrix::from_json(&v, f).unwrap(), m);
    }
}
