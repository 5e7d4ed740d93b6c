//! Worked examples checked against independent brute-force computations.

mod common;

use std::collections::BTreeSet;

use polyimage_core::catalog::{match_catalog, SubspaceName};
use polyimage_core::classify::classify;
use polyimage_core::image::{enumerate_image, find_preimage, Closure, DEFAULT_BUDGET};
use polyimage_core::linalg::Echelon;
use polyimage_core::matrix::e;
use polyimage_core::star_poly::{PolyFile, StarPoly, VarSpec};
use polyimage_core::{FieldSpec, GradeSpec, InvolutionKind, Scalar, StructureSpec, TriMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fp(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

fn add(a: &TriMatrix<Scalar>, b: &TriMatrix<Scalar>) -> TriMatrix<Scalar> {
    a.try_add(b).unwrap()
}

fn sub(a: &TriMatrix<Scalar>, b: &TriMatrix<Scalar>) -> TriMatrix<Scalar> {
    a.try_sub(b).unwrap()
}

/// Every element of a subspace, listed by running over all coefficient vectors.
fn elements(basis: &[TriMatrix<Scalar>], n: usize, field: FieldSpec) -> Vec<TriMatrix<Scalar>> {
    let mut out = vec![TriMatrix::zero(n, field)];
    for b in basis {
        let mut next = Vec::new();
        for x in &out {
            for c in field.elements().unwrap() {
                next.push(add(x, &b.scale(&c).unwrap()));
            }
        }
        out = next;
    }
    out
}

/// Image by plain matrix arithmetic over every tuple.
fn naive_image(f: &StarPoly, s: &StructureSpec) -> BTreeSet<Vec<u64>> {
    let spaces: Vec<Vec<TriMatrix<Scalar>>> = f
        .vars()
        .iter()
        .map(|v| elements(&s.matrices(&s.space(v.symmetry, v.degree)), s.n(), s.field()))
        .collect();
    let mut out = BTreeSet::new();
    let mut idx = vec![0usize; spaces.len()];
    loop {
        let args: Vec<_> = idx.iter().zip(&spaces).map(|(&k, sp)| sp[k].clone()).collect();
        out.insert(key(&f.evaluate(s, &args).unwrap()));
        let mut k = 0;
        loop {
            if k == idx.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < spaces[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn key(m: &TriMatrix<Scalar>) -> Vec<u64> {
    m.as_slice().iter().map(|x| x.as_residue().unwrap()).collect()
}

fn span_of(ms: &[TriMatrix<Scalar>], n: usize, field: FieldSpec) -> Echelon {
    let dim = n * (n + 1) / 2;
    let mut e = Echelon::new(field, dim);
    for m in ms {
        e.insert(m.as_slice());
    }
    e
}

#[test]
fn field_arithmetic() {
    let f5 = fp(5);
    assert_eq!(f5.int(3).try_mul(&f5.int(4)).unwrap(), f5.int(2));
    assert_eq!(f5.int(2).inv().unwrap(), f5.int(3));
    let q = FieldSpec::rationals();
    let half = Scalar::parse("1/2", q).unwrap();
    let third = Scalar::parse("1/3", q).unwrap();
    assert_eq!(half.try_add(&third).unwrap(), Scalar::parse("5/6", q).unwrap());
}

#[test]
fn matrix_unit_products() {
    let q = FieldSpec::rationals();
    let e12 = e(3, 1, 2, q);
    let e23 = e(3, 2, 3, q);
    assert_eq!(e12.try_mul(&e23).unwrap(), e(3, 1, 3, q));
    assert!(e23.try_mul(&e12).unwrap().is_zero());
    let d = sub(&e(3, 1, 1, q), &e(3, 3, 3, q));
    assert_eq!(d.try_mul(&sub(&e12, &e23)).unwrap(), e12);
}

#[test]
fn involutions_on_units() {
    let q = FieldSpec::rationals();
    let s3 = StructureSpec::trivial(3, InvolutionKind::Reflexive, q).unwrap();
    assert_eq!(s3.apply_involution(&e(3, 1, 1, q)).unwrap(), e(3, 3, 3, q));
    assert_eq!(s3.apply_involution(&e(3, 1, 2, q)).unwrap(), e(3, 2, 3, q));
    assert_eq!(s3.apply_involution(&e(3, 1, 3, q)).unwrap(), e(3, 1, 3, q));
    let s2 = StructureSpec::trivial(2, InvolutionKind::Reflexive, q).unwrap();
    let a = TriMatrix::from_vec(2, q, vec![q.int(1), q.int(2), q.int(3)]).unwrap();
    let want = TriMatrix::from_vec(2, q, vec![q.int(3), q.int(2), q.int(1)]).unwrap();
    assert_eq!(s2.apply_involution(&a).unwrap(), want);
    let sp = StructureSpec::trivial(2, InvolutionKind::Symplectic, q).unwrap();
    assert_eq!(sp.apply_involution(&e(2, 1, 2, q)).unwrap(), e(2, 1, 2, q).neg());
}

#[test]
fn compatibility_arithmetic() {
    let q = FieldSpec::rationals();
    let ok = StructureSpec::unchecked(2, GradeSpec::new(3, vec![0, 1]), InvolutionKind::Reflexive, q);
    assert!(ok.check().passed());
    let bad = StructureSpec::unchecked(3, GradeSpec::new(3, vec![0, 1, 1]), InvolutionKind::Reflexive, q);
    assert_eq!(bad.check().first_failure().unwrap().clause, "compatibility");
}

#[test]
fn polynomial_parsing() {
    let q = FieldSpec::rationals();
    let f = StarPoly::parse("1*z1 z2", q).unwrap();
    assert_eq!((f.m(), f.l()), (2, 0));
    assert_eq!(f.coeff(&[1, 2]), q.one());
    let g = StarPoly::parse("1*y1 z2 + 1*z2 y1", q).unwrap();
    assert_eq!(g.terms().count(), 2);
    assert!(StarPoly::parse("1*y1 z2 - 1*y1 z2", q).unwrap().is_zero());
}

#[test]
fn published_evaluations() {
    let q = FieldSpec::rationals();
    let s = StructureSpec::trivial(3, InvolutionKind::Reflexive, q).unwrap();
    let f = StarPoly::parse("z1 z2", q).unwrap();
    let d = sub(&e(3, 1, 1, q), &e(3, 3, 3, q));
    assert_eq!(f.evaluate(&s, &[d.clone(), d]).unwrap(), add(&e(3, 1, 1, q), &e(3, 3, 3, q)));
    let x = sub(&e(3, 1, 2, q), &e(3, 2, 3, q));
    assert_eq!(f.evaluate(&s, &[x.clone(), x.neg()]).unwrap(), e(3, 1, 3, q));

    let z4 = StructureSpec::canonical_zn(4, InvolutionKind::Reflexive, q).unwrap();
    let g = StarPoly::parse_with_vars("y1 y2", q, vec![VarSpec::sym(1, 0), VarSpec::sym(2, 1)]).unwrap();
    let a = add(&e(4, 1, 1, q), &e(4, 4, 4, q));
    let b = add(&e(4, 1, 2, q), &e(4, 3, 4, q));
    assert_eq!(g.evaluate(&z4, &[a, b]).unwrap(), e(4, 1, 2, q));
    assert_eq!(g.homogeneity(z4.grade()), 1);
}

#[test]
fn image_of_y1z2_matches_brute_force() {
    let s = StructureSpec::trivial(2, InvolutionKind::Reflexive, fp(5)).unwrap();
    let f = StarPoly::parse("y1 z2", fp(5)).unwrap();
    let img = enumerate_image(&f, &s, DEFAULT_BUDGET).unwrap();
    let naive = naive_image(&f, &s);
    let fast: BTreeSet<Vec<u64>> = img.matrices().iter().map(key).collect();
    assert_eq!(fast, naive);
    let want = span_of(&[sub(&e(2, 1, 1, fp(5)), &e(2, 2, 2, fp(5))), e(2, 1, 2, fp(5))], 2, fp(5));
    assert_eq!(img.span(), want);
    assert_eq!(img.closure(), Closure::Closed);
}

#[test]
fn z1z2_on_ut2_is_the_scalars() {
    let s = StructureSpec::trivial(2, InvolutionKind::Reflexive, fp(5)).unwrap();
    let f = StarPoly::parse("z1 z2", fp(5)).unwrap();
    let img = enumerate_image(&f, &s, DEFAULT_BUDGET).unwrap();
    assert_eq!(img.closure(), Closure::Closed);
    assert_eq!(match_catalog(&img.span(), &s), SubspaceName::Scalars);
}

#[test]
fn z1z2_on_ut3_is_not_closed() {
    let f3 = fp(3);
    let s = StructureSpec::trivial(3, InvolutionKind::Reflexive, f3).unwrap();
    let f = StarPoly::parse("z1 z2", f3).unwrap();
    let img = enumerate_image(&f, &s, DEFAULT_BUDGET).unwrap();
    let u = add(&e(3, 1, 1, f3), &e(3, 3, 3, f3));
    let v = e(3, 1, 3, f3);
    assert!(img.contains(&u) && img.contains(&v));
    assert!(!img.contains(&add(&u, &v)));
    assert!(matches!(img.closure(), Closure::NotClosed { .. }));
    // Same answer from the slice-wise preimage search.
    let scan = find_preimage(&f, &s, &add(&u, &v), DEFAULT_BUDGET).unwrap();
    assert!(scan.preimage.is_none());
    assert!(find_preimage(&f, &s, &v, DEFAULT_BUDGET).unwrap().preimage.is_some());
}

#[test]
fn zn_counterexample_images() {
    for p in [3, 5] {
        let s = StructureSpec::canonical_zn(4, InvolutionKind::Reflexive, fp(p)).unwrap();
        let f = StarPoly::parse_with_vars("y1 y2", fp(p), vec![VarSpec::sym(1, 0), VarSpec::sym(2, 1)]).unwrap();
        let img = enumerate_image(&f, &s, DEFAULT_BUDGET).unwrap();
        assert!(matches!(img.closure(), Closure::NotClosed { .. }), "p={p}");
        let target = add(&e(4, 1, 2, fp(p)), &e(4, 2, 3, fp(p)));
        if p == 3 {
            assert!(!img.contains(&target));
        }
    }
}

#[test]
fn published_catalog_bases() {
    let q = FieldSpec::rationals();
    let s2 = StructureSpec::trivial(2, InvolutionKind::Reflexive, q).unwrap();
    let k = span_of(&[sub(&e(2, 1, 1, q), &e(2, 2, 2, q))], 2, q);
    assert_eq!(match_catalog(&k, &s2), SubspaceName::K);

    let g23 = StructureSpec::gamma23(q).unwrap();
    let s0 = span_of(&[add(&e(3, 1, 1, q), &e(3, 3, 3, q)), e(3, 2, 2, q), e(3, 1, 3, q)], 3, q);
    assert_eq!(SubspaceName::Sg(0).resolve(&g23).unwrap(), s0);

    let g33 = StructureSpec::gamma33(q).unwrap();
    let line = span_of(&[add(&e(3, 1, 2, q).scale(&q.int(2)).unwrap(), &e(3, 2, 3, q).scale(&q.int(3)).unwrap())], 3, q);
    assert_eq!(match_catalog(&line, &g33), SubspaceName::Line(q.int(2), q.int(3)));
}

#[test]
fn classifier_examples() {
    let q = FieldSpec::rationals();
    let s2 = StructureSpec::trivial(2, InvolutionKind::Reflexive, q).unwrap();
    let sp = StructureSpec::trivial(2, InvolutionKind::Symplectic, q).unwrap();
    for (s, text, want) in [
        (&s2, "y1 z2", "K+J"),
        (&s2, "y1 z2 + z2 y1", "K"),
        (&sp, "z1 z2 + z2 z1", "S"),
    ] {
        let f = StarPoly::parse(text, q).unwrap();
        assert_eq!(classify(&f, s).unwrap().name.to_string(), want, "{text}");
    }
    let file = PolyFile::parse(
        "algebra ut3\ngrading z3 degrees (0,1,2)\nvars y1:0 y2:1\npoly y1 y2\n",
    )
    .unwrap();
    assert_eq!(classify(&file.poly, &file.structure).unwrap().name, SubspaceName::Ag(1));
}

#[test]
fn fast_enumeration_matches_brute_force_on_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let q = FieldSpec::rationals();
    let structures = [
        StructureSpec::trivial(2, InvolutionKind::Reflexive, q).unwrap(),
        StructureSpec::trivial(2, InvolutionKind::Symplectic, q).unwrap(),
        StructureSpec::gamma23(q).unwrap(),
        StructureSpec::gamma33(q).unwrap(),
        StructureSpec::trivial(3, InvolutionKind::Reflexive, q).unwrap(),
    ];
    for s in &structures {
        for _ in 0..12 {
            let s3 = s.with_field(fp(3));
            let vars = common::random_vars(&mut rng, &s3, 3, 3, 20_000);
            let f = common::random_poly(&mut rng, fp(3), vars);
            let img = enumerate_image(&f, &s3, DEFAULT_BUDGET).unwrap();
            let fast: BTreeSet<Vec<u64>> = img.matrices().iter().map(key).collect();
            assert_eq!(fast, naive_image(&f, &s3), "{f} on {s3}");
        }
    }
}

#[test]
fn trivial_grading_refutation_in_even_sizes() {
    use polyimage_core::counterexample::ut3_trivial_case;
    for n in [4, 6] {
        let r = ut3_trivial_case(n, 3, DEFAULT_BUDGET).unwrap();
        assert!(r.confirmed(), "n={n}");
        assert!(r.refutation.refuted);
    }
}
