//! Brute-force images: exhaustive enumeration over prime fields, seeded
//! sampling over `Q`, closure verdicts and preimage search.
//!
//! Enumeration works on the structure tensor `T[b] = f(b_1, …, b_m)` over the
//! basis tuples of the argument spaces. Fixing every argument but one (the
//! "free" one) makes `f` linear in the remaining argument, so each choice of
//! the fixed arguments contributes a whole subspace of values. Scaling a fixed
//! argument only rescales that subspace, so fixed arguments range over
//! projective representatives (first nonzero coordinate equal to one).

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{match_catalog, SubspaceName};
use crate::error::{Error, Result};
use crate::field::{FieldKind, FieldSpec, Scalar};
use crate::linalg::{to_residues, Echelon, FpEchelon};
use crate::matrix::{tri_dim, TriMatrix};
use crate::star_poly::StarPoly;
use crate::structure::StructureSpec;

/// Default cap on `tuples × m` for one enumeration.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "POLYIMAGE_BUDGET";

/// The budget from `POLYIMAGE_BUDGET`, else the default.
pub fn default_budget() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u64>().ok())
        .filter(|&b| b > 0)
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ImageMode {
    Exhaustive { p: u64 },
    Sampled { count: usize, seed: u64 },
}

impl ImageMode {
    pub fn label(&self) -> &'static str {
        match self {
            ImageMode::Exhaustive { .. } => "exhaustive",
            ImageMode::Sampled { .. } => "sampled",
        }
    }
}

fn prime_of(s: &StructureSpec) -> Result<u64> {
    match s.field().kind() {
        FieldKind::Prime(p) => Ok(p),
        FieldKind::Rationals => Err(Error::Unsupported(
            "exhaustive enumeration needs a prime field".into(),
        )),
    }
}

fn pow_u128(p: u64, e: usize) -> u128 {
    (0..e).fold(1u128, |acc, _| acc.saturating_mul(p as u128))
}

/// All vectors of `F_p^d` whose first nonzero coordinate is one.
pub fn projective_reps(p: u64, d: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for lead in 0..d {
        let tail = d - lead - 1;
        for code in 0..pow_u128(p, tail) as u64 {
            let mut v = vec![0u32; d];
            v[lead] = 1;
            let mut c = code;
            for k in (lead + 1..d).rev() {
                v[k] = (c % p) as u32;
                c /= p;
            }
            out.push(v);
        }
    }
    out
}

/// Values of `f` on all basis tuples, as residue vectors over entry
/// coordinates.
#[derive(Clone, Debug)]
pub struct Tensor {
    p: u64,
    n: usize,
    field: FieldSpec,
    bases: Vec<Vec<TriMatrix<Scalar>>>,
    dims: Vec<usize>,
    values: Vec<Vec<u32>>,
}

impl Tensor {
    pub fn new(f: &StarPoly, s: &StructureSpec) -> Result<Tensor> {
        let p = prime_of(s)?;
        if f.field() != s.field() {
            return Err(Error::FieldMismatch {
                left: s.field(),
                right: f.field(),
            });
        }
        if f.m() == 0 {
            return Err(Error::Unsupported("polynomial has no variables (m = 0)".into()));
        }
        let bases: Vec<Vec<TriMatrix<Scalar>>> = f
            .vars()
            .iter()
            .map(|v| s.matrices(&s.space(v.symmetry, v.degree)))
            .collect();
        let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
        let total: usize = dims.iter().product();
        let mut values = Vec::with_capacity(total);
        let mut idx = vec![0usize; dims.len()];
        for _ in 0..total {
            let args: Vec<TriMatrix<Scalar>> =
                idx.iter().zip(&bases).map(|(&k, b)| b[k].clone()).collect();
            values.push(to_residues(f.evaluate_unchecked(&args)?.as_slice()));
            for k in (0..dims.len()).rev() {
                idx[k] += 1;
                if idx[k] < dims[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        Ok(Tensor {
            p,
            n: s.n(),
            field: s.field(),
            bases,
            dims,
            values,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `p^(sum of argument dimensions)`.
    pub fn tuple_count(&self) -> u128 {
        pow_u128(self.p, self.dims.iter().sum())
    }

    /// Span of all values.
    pub fn span(&self) -> FpEchelon {
        let mut e = FpEchelon::new(self.p, tri_dim(self.n));
        for v in &self.values {
            e.insert(v);
        }
        e
    }

    /// The argument to keep linear: the largest space, last among ties.
    pub fn free_arg(&self) -> usize {
        let mut best = 0;
        for (k, &d) in self.dims.iter().enumerate() {
            if d >= self.dims[best] {
                best = k;
            }
        }
        best
    }

    /// Rows `f(c_1, …, b_k, …, c_m)` for each basis vector `b_k` of the free
    /// argument, with the other arguments fixed to `fixed` (one coefficient
    /// vector per argument; the free entry is ignored).
    pub fn slice_rows(&self, free: usize, fixed: &[Vec<u32>]) -> Vec<Vec<u32>> {
        let p = self.p;
        let dim = tri_dim(self.n);
        let mut rows = vec![vec![0u64; dim]; self.dims[free]];
        let mut idx = vec![0usize; self.dims.len()];
        for value in &self.values {
            let mut weight = 1u64;
            for (k, &b) in idx.iter().enumerate() {
                if k != free {
                    weight = weight * fixed[k][b] as u64 % p;
                    if weight == 0 {
                        break;
                    }
                }
            }
            if weight != 0 {
                let row = &mut rows[idx[free]];
                for (x, &y) in row.iter_mut().zip(value) {
                    if y != 0 {
                        *x = (*x + weight * y as u64) % p;
                    }
                }
            }
            for k in (0..self.dims.len()).rev() {
                idx[k] += 1;
                if idx[k] < self.dims[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        rows.into_iter()
            .map(|r| r.into_iter().map(|x| x as u32).collect())
            .collect()
    }

    /// Value of `f` at the arguments with the given coordinates.
    pub fn eval(&self, coords: &[Vec<u32>]) -> Vec<u32> {
        let free = self.free_arg();
        let rows = self.slice_rows(free, coords);
        let mut out = vec![0u64; tri_dim(self.n)];
        for (row, &c) in rows.iter().zip(&coords[free]) {
            for (x, &y) in out.iter_mut().zip(row) {
                *x = (*x + c as u64 * y as u64) % self.p;
            }
        }
        out.into_iter().map(|x| x as u32).collect()
    }

    /// The matrix with coordinates `coords` in the basis of argument `k`.
    pub fn arg_matrix(&self, k: usize, coords: &[u32]) -> TriMatrix<Scalar> {
        self.bases[k].iter().zip(coords).fold(
            TriMatrix::zero(self.n, self.field),
            |acc, (b, &c)| {
                acc.try_add(&b.scale(&Scalar::residue(c as u64, self.field)).unwrap())
                    .unwrap()
            },
        )
    }

    pub fn matrix(&self, v: &[u32]) -> TriMatrix<Scalar> {
        let entries = v
            .iter()
            .map(|&x| Scalar::residue(x as u64, self.field))
            .collect();
        TriMatrix::from_vec(self.n, self.field, entries).expect("coordinate length")
    }

    /// Cartesian product of projective representatives for every argument but
    /// `free`; the free slot holds an empty vector.
    fn fixed_tuples(&self, free: usize) -> Vec<Vec<Vec<u32>>> {
        let reps: Vec<Vec<Vec<u32>>> = self
            .dims
            .iter()
            .enumerate()
            .map(|(k, &d)| {
                if k == free {
                    vec![Vec::new()]
                } else {
                    projective_reps(self.p, d)
                }
            })
            .collect();
        let mut out = vec![Vec::new()];
        for r in &reps {
            let mut next = Vec::with_capacity(out.len() * r.len());
            for prefix in &out {
                for v in r {
                    let mut t: Vec<Vec<u32>> = prefix.clone();
                    t.push(v.clone());
                    next.push(t);
                }
            }
            out = next;
        }
        out
    }

    /// Number of slices (choices of the fixed arguments) a scan visits.
    pub fn slice_count(&self) -> u128 {
        let free = self.free_arg();
        self.dims
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != free)
            .map(|(_, &d)| (pow_u128(self.p, d) - 1) / (self.p as u128 - 1))
            .product()
    }
}

fn pack(p: u64, v: &[u32]) -> u128 {
    v.iter().fold(0u128, |acc, &x| acc * p as u128 + x as u128)
}

fn unpack(p: u64, dim: usize, mut key: u128) -> Vec<u32> {
    let mut v = vec![0u32; dim];
    for k in (0..dim).rev() {
        v[k] = (key % p as u128) as u32;
        key /= p as u128;
    }
    v
}

#[derive(Clone, Debug)]
enum Store {
    /// Sorted packed coordinate vectors over `F_p`.
    Packed { p: u64, keys: Vec<u128> },
    Listed(Vec<TriMatrix<Scalar>>),
}

/// The set of values of a polynomial, either all of them over a prime field
/// or a deduplicated sample over `Q`.
#[derive(Clone, Debug)]
pub struct ImageSet {
    structure: StructureSpec,
    mode: ImageMode,
    store: Store,
    tuples: u128,
}

/// Vector-space verdict for an image.
#[derive(Clone, Debug, PartialEq)]
pub enum Closure {
    Closed,
    /// `u` and `v` are attained, `u + v` is not.
    NotClosed { u: TriMatrix<Scalar>, v: TriMatrix<Scalar> },
    /// Sampled images never decide closure.
    Undetermined,
}

impl ImageSet {
    pub fn structure(&self) -> &StructureSpec {
        &self.structure
    }

    pub fn mode(&self) -> ImageMode {
        self.mode
    }

    /// Tuples covered: `p^(Σ dim)` when exhaustive, the sample count otherwise.
    pub fn tuples(&self) -> u128 {
        self.tuples
    }

    pub fn len(&self) -> usize {
        match &self.store {
            Store::Packed { keys, .. } => keys.len(),
            Store::Listed(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, v: &TriMatrix<Scalar>) -> bool {
        match &self.store {
            Store::Packed { p, keys } => {
                let Ok(v) = v.reduce_to(self.structure.field()) else {
                    return false;
                };
                v.n() == self.structure.n()
                    && keys.binary_search(&pack(*p, &to_residues(v.as_slice()))).is_ok()
            }
            Store::Listed(vals) => vals.contains(v),
        }
    }

    pub fn matrices(&self) -> Vec<TriMatrix<Scalar>> {
        match &self.store {
            Store::Packed { p, keys } => {
                let (n, field) = (self.structure.n(), self.structure.field());
                keys.iter()
                    .map(|&k| {
                        let v = unpack(*p, tri_dim(n), k);
                        TriMatrix::from_vec(
                            n,
                            field,
                            v.into_iter().map(|x| Scalar::residue(x as u64, field)).collect(),
                        )
                        .unwrap()
                    })
                    .collect()
            }
            Store::Listed(v) => v.clone(),
        }
    }

    /// Echelonized basis of the linear hull.
    pub fn span(&self) -> Echelon {
        let dim = tri_dim(self.structure.n());
        match &self.store {
            Store::Packed { p, keys } => {
                let mut e = FpEchelon::new(*p, dim);
                for &k in keys {
                    e.insert(&unpack(*p, dim, k));
                }
                Echelon::from_vectors(
                    self.structure.field(),
                    dim,
                    e.to_scalar_rows().iter().map(|r| r.as_slice()),
                )
            }
            Store::Listed(vals) => {
                Echelon::from_vectors(self.structure.field(), dim, vals.iter().map(|m| m.as_slice()))
            }
        }
    }

    /// Whether the image equals its span; on failure a pair `u, v` with
    /// `u + v` outside the image, preferring sparse vectors.
    pub fn closure(&self) -> Closure {
        let Store::Packed { p, keys } = &self.store else {
            return Closure::Undetermined;
        };
        let p = *p;
        let dim = tri_dim(self.structure.n());
        if keys.len() as u128 == pow_u128(p, self.span().rank()) {
            return Closure::Closed;
        }
        let mut vecs: Vec<(usize, u128, Vec<u32>)> = keys
            .iter()
            .map(|&k| {
                let v = unpack(p, dim, k);
                (v.iter().filter(|&&x| x != 0).count(), k, v)
            })
            .collect();
        vecs.sort();
        for (a, (_, _, u)) in vecs.iter().enumerate() {
            for (_, _, v) in &vecs[a..] {
                let sum: Vec<u32> = u
                    .iter()
                    .zip(v)
                    .map(|(&x, &y)| ((x as u64 + y as u64) % p) as u32)
                    .collect();
                if keys.binary_search(&pack(p, &sum)).is_err() {
                    let field = self.structure.field();
                    let to_m = |w: &[u32]| {
                        TriMatrix::from_vec(
                            self.structure.n(),
                            field,
                            w.iter().map(|&x| Scalar::residue(x as u64, field)).collect(),
                        )
                        .unwrap()
                    };
                    return Closure::NotClosed {
                        u: to_m(u),
                        v: to_m(v),
                    };
                }
            }
        }
        unreachable!("an image smaller than its span has a non-closed pair")
    }
}

/// All values of `f` on `s`, which must be over a prime field. Fails when
/// `p^(Σ dim) × m` exceeds `budget`.
pub fn enumerate_image(f: &StarPoly, s: &StructureSpec, budget: u64) -> Result<ImageSet> {
    let t = Tensor::new(f, s)?;
    let p = t.modulus();
    let required = t.tuple_count().saturating_mul(f.m() as u128);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let dim = tri_dim(s.n());
    if pow_u128(p, dim) == u128::MAX {
        return Err(Error::Unsupported(format!(
            "F_{p}^{dim} is too large to index"
        )));
    }
    let mut keys: HashSet<u128> = HashSet::new();
    keys.insert(0);
    if t.dims().iter().all(|&d| d > 0) {
        let free = t.free_arg();
        let mut spaces: HashSet<FpEchelon> = HashSet::new();
        for fixed in t.fixed_tuples(free) {
            let mut e = FpEchelon::new(p, dim);
            for r in t.slice_rows(free, &fixed) {
                e.insert(&r);
            }
            if e.rank() > 0 {
                spaces.insert(e);
            }
        }
        for e in &spaces {
            keys.extend(e.elements().map(|v| pack(p, &v)));
        }
    }
    let mut keys: Vec<u128> = keys.into_iter().collect();
    keys.sort_unstable();
    Ok(ImageSet {
        structure: s.clone(),
        mode: ImageMode::Exhaustive { p },
        store: Store::Packed { p, keys },
        tuples: t.tuple_count(),
    })
}

/// Reduces `f` and `s` modulo `p` and enumerates.
pub fn enumerate_image_mod(f: &StarPoly, s: &StructureSpec, p: u64, budget: u64) -> Result<ImageSet> {
    let field = FieldSpec::prime(p)?;
    enumerate_image(&f.reduce_to(field)?, &s.with_field(field), budget)
}

/// `count` values at arguments with integer coordinates in `-5..=5`, drawn
/// from a ChaCha stream seeded by `seed`. Requires `s` over `Q`.
pub fn sample_image(f: &StarPoly, s: &StructureSpec, count: usize, seed: u64) -> Result<ImageSet> {
    if s.field().is_finite() {
        return Err(Error::Unsupported("sampling is for the rationals; enumerate over F_p instead".into()));
    }
    if f.field() != s.field() {
        return Err(Error::FieldMismatch {
            left: s.field(),
            right: f.field(),
        });
    }
    let field = s.field();
    let bases: Vec<Vec<TriMatrix<Scalar>>> = f
        .vars()
        .iter()
        .map(|v| s.matrices(&s.space(v.symmetry, v.degree)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut values = Vec::new();
    for _ in 0..count {
        let args: Vec<TriMatrix<Scalar>> = bases
            .iter()
            .map(|b| {
                b.iter().fold(TriMatrix::zero(s.n(), field), |acc, m| {
                    let c = field.int(rng.gen_range(-5..=5));
                    acc.try_add(&m.scale(&c).unwrap()).unwrap()
                })
            })
            .collect();
        let v = f.evaluate_unchecked(&args)?;
        if seen.insert(v.clone()) {
            values.push(v);
        }
    }
    Ok(ImageSet {
        structure: s.clone(),
        mode: ImageMode::Sampled { count, seed },
        store: Store::Listed(values),
        tuples: count as u128,
    })
}

/// One argument tuple.
pub type Args = Vec<TriMatrix<Scalar>>;

/// Result of scanning every slice for a target value.
#[derive(Clone, Debug)]
pub struct PreimageScan {
    /// Arguments attaining the target, re-checked with `evaluate`.
    pub preimage: Option<Vec<TriMatrix<Scalar>>>,
    pub slices: u128,
    /// Tuples accounted for by the scan, `p^(Σ dim)`.
    pub tuples_covered: u128,
}

/// Searches all argument tuples for one with value `target` (prime fields
/// only). Each slice is a linear solve; the cost `slices × m` is checked
/// against `budget`.
pub fn find_preimage(
    f: &StarPoly,
    s: &StructureSpec,
    target: &TriMatrix<Scalar>,
    budget: u64,
) -> Result<PreimageScan> {
    let t = Tensor::new(f, s)?;
    let p = t.modulus();
    let required = t.slice_count().saturating_mul(f.m() as u128);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let dim = tri_dim(s.n());
    let target = target.reduce_to(s.field())?;
    let goal = to_residues(target.as_slice());
    let zero_args = || -> Vec<TriMatrix<Scalar>> {
        (0..f.m()).map(|_| TriMatrix::zero(s.n(), s.field())).collect()
    };
    let done = |preimage| PreimageScan {
        preimage,
        slices: t.slice_count(),
        tuples_covered: t.tuple_count(),
    };
    if goal.iter().all(|&x| x == 0) {
        return Ok(done(Some(zero_args())));
    }
    if t.dims().contains(&0) {
        return Ok(done(None));
    }
    let free = t.free_arg();
    let d = t.dims()[free];
    let mut seen: HashSet<Vec<Vec<u32>>> = HashSet::new();
    for fixed in t.fixed_tuples(free) {
        let rows = t.slice_rows(free, &fixed);
        if !seen.insert(rows.clone()) {
            continue;
        }
        let mut e = FpEchelon::new(p, dim + d);
        for (k, r) in rows.iter().enumerate() {
            let mut aug = r.clone();
            aug.extend((0..d).map(|j| u32::from(j == k)));
            e.insert(&aug);
        }
        let mut probe = goal.clone();
        probe.extend(std::iter::repeat_n(0, d));
        let r = e.reduce(&probe);
        if r[..dim].iter().any(|&x| x != 0) {
            continue;
        }
        let x: Vec<u32> = r[dim..]
            .iter()
            .map(|&c| ((p - c as u64) % p) as u32)
            .collect();
        let mut coords = fixed.clone();
        coords[free] = x;
        let args: Vec<TriMatrix<Scalar>> =
            (0..f.m()).map(|k| t.arg_matrix(k, &coords[k])).collect();
        let value = f.evaluate(s, &args)?;
        debug_assert_eq!(value, target);
        if value == target {
            return Ok(done(Some(args)));
        }
    }
    Ok(done(None))
}

/// Span, closure verdict and catalog name of an image.
#[derive(Clone, Debug)]
pub struct ImageReport {
    pub structure: StructureSpec,
    pub mode: ImageMode,
    pub span: Echelon,
    pub size: usize,
    pub tuples: u128,
    pub closure: Closure,
    pub catalog: SubspaceName,
    /// Preimages of the closure-failure pair `u`, `v`.
    pub witness_preimages: Option<(Args, Args)>,
}

impl ImageReport {
    pub fn new(f: &StarPoly, img: &ImageSet, budget: u64) -> Result<ImageReport> {
        let s = img.structure().clone();
        let span = img.span();
        let closure = img.closure();
        let witness_preimages = match &closure {
            Closure::NotClosed { u, v } => {
                let pu = find_preimage(f, &s, u, budget)?.preimage;
                let pv = find_preimage(f, &s, v, budget)?.preimage;
                pu.zip(pv)
            }
            _ => None,
        };
        Ok(ImageReport {
            catalog: match_catalog(&span, &s),
            structure: s,
            mode: img.mode(),
            size: img.len(),
            tuples: img.tuples(),
            span,
            closure,
            witness_preimages,
        })
    }

    pub fn is_vector_space(&self) -> Option<bool> {
        match self.closure {
            Closure::Closed => Some(true),
            Closure::NotClosed { .. } => Some(false),
            Closure::Undetermined => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let basis: Vec<Value> = self
            .structure
            .matrices(&self.span)
            .iter()
            .map(TriMatrix::to_json)
            .collect();
        let verdict = match self.is_vector_space() {
            Some(b) => json!(b),
            None => json!("undetermined"),
        };
        let witnesses = match (&self.closure, &self.witness_preimages) {
            (Closure::NotClosed { u, v }, pre) => {
                let sum = u.try_add(v).unwrap();
                let mut w = json!({"u": u.to_json(), "v": v.to_json(), "u_plus_v": sum.to_json()});
                if let Some((pu, pv)) = pre {
                    w["u_preimage"] = Value::Array(pu.iter().map(TriMatrix::to_json).collect());
                    w["v_preimage"] = Value::Array(pv.iter().map(TriMatrix::to_json).collect());
                }
                w
            }
            _ => json!({}),
        };
        json!({
            "span_basis": basis,
            "is_vector_space": verdict,
            "catalog": self.catalog.to_string(),
            "field": self.structure.field().to_string(),
            "mode": self.mode.label(),
            "size": self.size,
            "tuples": self.tuples.to_string(),
            "witnesses": witnesses,
        })
    }
}
