//! Row echelon forms: exact over any [`FieldSpec`], plus a word-sized
//! variant for prime fields used by the enumeration kernels.

use crate::field::{pow_mod, FieldSpec, Scalar};

/// A subspace of `F^dim` kept in reduced row echelon form. Two `Echelon`s
/// over the same field and dimension are equal iff they span the same space.
#[derive(Clone, Debug, PartialEq)]
pub struct Echelon {
    field: FieldSpec,
    dim: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: FieldSpec, dim: usize) -> Self {
        Echelon {
            field,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_vectors<'a>(
        field: FieldSpec,
        dim: usize,
        vectors: impl IntoIterator<Item = &'a [Scalar]>,
    ) -> Self {
        let mut e = Echelon::new(field, dim);
        for v in vectors {
            e.insert(v);
        }
        e
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of `v` after eliminating against the stored rows.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.dim, "vector length does not match");
        let mut r = v.to_vec();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            if r[piv].is_zero() {
                continue;
            }
            let c = r[piv].clone();
            for (x, y) in r.iter_mut().zip(row).skip(piv) {
                if !y.is_zero() {
                    *x = &*x - &(&c * y);
                }
            }
        }
        r
    }

    /// Adds `v` to the span. Returns whether the rank grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut r = self.reduce(v);
        let Some(piv) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[piv].inv().expect("pivot is nonzero");
        for x in r.iter_mut().skip(piv) {
            *x = &*x * &inv;
        }
        for row in &mut self.rows {
            if row[piv].is_zero() {
                continue;
            }
            let c = row[piv].clone();
            for (x, y) in row.iter_mut().zip(&r).skip(piv) {
                if !y.is_zero() {
                    *x = &*x - &(&c * y);
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < piv);
        self.pivots.insert(at, piv);
        self.rows.insert(at, r);
        true
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Coefficients of `v` in terms of the stored rows, if `v` is in the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn is_subspace_of(&self, other: &Echelon) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Echelon) -> Echelon {
        let mut e = self.clone();
        for r in &other.rows {
            e.insert(r);
        }
        e
    }

    /// Vectors of the span whose coordinates outside `keep` vanish.
    pub fn restrict_to(&self, keep: impl Fn(usize) -> bool) -> Echelon {
        let dropped: Vec<usize> = (0..self.dim).filter(|&k| !keep(k)).collect();
        let projected: Vec<Vec<Scalar>> = self
            .rows
            .iter()
            .map(|r| dropped.iter().map(|&k| r[k].clone()).collect())
            .collect();
        let mut out = Echelon::new(self.field, self.dim);
        for c in left_kernel(self.field, dropped.len(), &projected) {
            out.insert(&combine(self.field, self.dim, &c, &self.rows));
        }
        out
    }
}

/// `sum_k coeffs[k] * rows[k]`.
pub fn combine(field: FieldSpec, dim: usize, coeffs: &[Scalar], rows: &[Vec<Scalar>]) -> Vec<Scalar> {
    let mut out = vec![field.zero(); dim];
    for (c, row) in coeffs.iter().zip(rows) {
        if c.is_zero() {
            continue;
        }
        for (x, y) in out.iter_mut().zip(row) {
            *x = &*x + &(c * y);
        }
    }
    out
}

/// A basis of `{c : sum_k c_k rows[k] = 0}`, where each row has length `width`.
pub fn left_kernel(field: FieldSpec, width: usize, rows: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let k = rows.len();
    // Augment each row with the identity and echelonize; rows whose left part
    // reduces to zero carry kernel vectors in their right part.
    let mut e = Echelon::new(field, width + k);
    for (idx, r) in rows.iter().enumerate() {
        let mut v = r.clone();
        v.extend((0..k).map(|j| if j == idx { field.one() } else { field.zero() }));
        e.insert(&v);
    }
    e.rows
        .iter()
        .zip(&e.pivots)
        .filter(|(_, &p)| p >= width)
        .map(|(r, _)| r[width..].to_vec())
        .collect()
}

/// Reduced row echelon form over `F_p` with residues stored as `u32`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpEchelon {
    p: u64,
    dim: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl FpEchelon {
    pub fn new(p: u64, dim: usize) -> Self {
        FpEchelon {
            p,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p;
        let mut r = v.to_vec();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = r[piv] as u64;
            if c == 0 {
                continue;
            }
            let neg = p - c;
            for (x, &y) in r.iter_mut().zip(row).skip(piv) {
                if y != 0 {
                    *x = ((*x as u64 + neg * y as u64) % p) as u32;
                }
            }
        }
        r
    }

    pub fn insert(&mut self, v: &[u32]) -> bool {
        let p = self.p;
        let mut r = self.reduce(v);
        let Some(piv) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = pow_mod(r[piv] as u64, p - 2, p);
        for x in r.iter_mut().skip(piv) {
            *x = ((*x as u64 * inv) % p) as u32;
        }
        for row in &mut self.rows {
            let c = row[piv] as u64;
            if c == 0 {
                continue;
            }
            let neg = p - c;
            for (x, &y) in row.iter_mut().zip(&r).skip(piv) {
                if y != 0 {
                    *x = ((*x as u64 + neg * y as u64) % p) as u32;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < piv);
        self.pivots.insert(at, piv);
        self.rows.insert(at, r);
        true
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coefficients of `v` against the rows, if `v` lies in the span.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        self.contains(v)
            .then(|| self.pivots.iter().map(|&q| v[q]).collect())
    }

    /// Every vector of the span, in lexicographic order of coordinates.
    pub fn elements(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        let r = self.rank() as u32;
        let total = self.p.pow(r);
        (0..total).map(move |mut code| {
            let mut v = vec![0u32; self.dim];
            for row in self.rows.iter().rev() {
                let c = code % self.p;
                code /= self.p;
                if c == 0 {
                    continue;
                }
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = ((*x as u64 + c * y as u64) % self.p) as u32;
                }
            }
            v
        })
    }

    pub fn to_scalar_rows(&self) -> Vec<Vec<Scalar>> {
        let field = FieldSpec::prime(self.p).expect("modulus is a valid prime");
        self.rows
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::residue(x as u64, field)).collect())
            .collect()
    }
}

/// Residues of a prime-field scalar vector.
pub fn to_residues(v: &[Scalar]) -> Vec<u32> {
    v.iter()
        .map(|x| x.as_residue().expect("prime-field scalar") as u32)
        .collect()
}
