#![allow(dead_code)]

use polyimage_core::star_poly::{StarPoly, VarSpec};
use polyimage_core::{FieldSpec, StructureSpec, Symmetry};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, left: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..left.len() {
            let v = left.remove(k);
            prefix.push(v);
            go(prefix, left, out);
            prefix.pop();
            left.insert(k, v);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (1..=m).collect(), &mut out);
    out
}

/// Number of argument tuples over `F_p`.
pub fn tuple_count(s: &StructureSpec, vars: &[VarSpec], p: u64) -> u128 {
    vars.iter()
        .map(|v| (p as u128).pow(s.space(v.symmetry, v.degree).rank() as u32))
        .product()
}

/// Random `m <= max_m`, `l`, and degrees from the support, such that the
/// exhaustive image over `F_p` stays within `budget`.
pub fn random_vars(rng: &mut ChaCha8Rng, s: &StructureSpec, max_m: usize, p: u64, budget: u64) -> Vec<VarSpec> {
    let support: Vec<i64> = s.grade().support().into_iter().collect();
    loop {
        let m = rng.gen_range(1..=max_m);
        let l = rng.gen_range(0..=m);
        let vars: Vec<VarSpec> = (1..=m)
            .map(|i| {
                let g = *support.choose(rng).unwrap();
                if i <= l {
                    VarSpec::sym(i, g)
                } else {
                    VarSpec::skew(i, g)
                }
            })
            .collect();
        let empty = vars.iter().any(|v| s.space(v.symmetry, v.degree).is_zero());
        if empty && rng.gen_range(0..4) != 0 {
            continue;
        }
        if tuple_count(s, &vars, p) * m as u128 <= budget as u128 {
            return vars;
        }
    }
}

/// A random multilinear polynomial with integer coefficients in `[-2, 2]`:
/// dense, a few words, or a difference of two words.
pub fn random_poly(rng: &mut ChaCha8Rng, field: FieldSpec, vars: Vec<VarSpec>) -> StarPoly {
    let perms = permutations(vars.len());
    let coeff = |rng: &mut ChaCha8Rng| field.int(rng.gen_range(-2..=2));
    let terms: Vec<(Vec<usize>, _)> = match rng.gen_range(0..3) {
        0 => perms.iter().map(|w| (w.clone(), coeff(rng))).collect(),
        1 => {
            let t = rng.gen_range(1..=3.min(perms.len()));
            perms.choose_multiple(rng, t).map(|w| (w.clone(), coeff(rng))).collect()
        }
        _ => {
            let c = field.int(rng.gen_range(1..=2));
            let a = perms.choose(rng).unwrap().clone();
            let b = perms.choose(rng).unwrap().clone();
            vec![(a, c.clone()), (b, -c)]
        }
    };
    StarPoly::new(field, vars, terms).unwrap()
}

pub fn is_sym(v: &VarSpec) -> bool {
    v.symmetry == Symmetry::Sym
}
