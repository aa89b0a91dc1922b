#![allow(dead_code)]

use std::collections::HashMap;

use nilorbit::linalg::{unit_vec, zero_vec};
use nilorbit::scalar::{frac, int};
use nilorbit::superalgebra::{build_glmn_plus, build_super_heisenberg};
use nilorbit::weyl::Poly;
use nilorbit::{build_n_m, Functional, LieAlgebra, Matrix, Scalar, Subspace, Vector};
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

pub fn n3() -> LieAlgebra {
    build_n_m(3).unwrap()
}

pub fn z_star() -> Functional {
    Functional::dual_basis(3, 2)
}

/// Every shipped family at the sizes the tests use.
pub fn shipped() -> Vec<LieAlgebra> {
    vec![
        build_n_m(3).unwrap(),
        build_n_m(4).unwrap(),
        build_n_m(5).unwrap(),
        build_glmn_plus(2, 1).unwrap(),
        build_glmn_plus(3, 2).unwrap(),
        build_super_heisenberg(),
    ]
}

pub fn ungraded() -> Vec<LieAlgebra> {
    (3..=6).map(|m| build_n_m(m).unwrap()).collect()
}

pub fn rational() -> impl Strategy<Value = Scalar> {
    (-9i64..=9, 1i64..=9).prop_map(|(p, q)| frac(p, q))
}

pub fn vector(dim: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(rational(), dim)
}

pub fn random_vec<R: Rng>(rng: &mut R, dim: usize) -> Vector {
    (0..dim).map(|_| nilorbit::scalar::random_small(rng, 9)).collect()
}

/// Random vector supported on the even coordinates.
pub fn random_even<R: Rng>(rng: &mut R, alg: &LieAlgebra) -> Vector {
    let mut v = random_vec(rng, alg.dim());
    for i in alg.odd_indices() {
        v[i] = Scalar::zero();
    }
    v
}

/// Matrix unit `E_ij` (1-based) of the given size.
pub fn unit_matrix(size: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(size, size);
    m[(i - 1, j - 1)] = int(1);
    m
}

/// Reads `(i, j)` back from a basis name `Eij`.
pub fn unit_of_name(name: &str) -> (usize, usize) {
    let digits = name.strip_prefix('E').unwrap();
    if let Some((a, b)) = digits.split_once('_') {
        return (a.parse().unwrap(), b.parse().unwrap());
    }
    let (a, b) = digits.split_at(1);
    (a.parse().unwrap(), b.parse().unwrap())
}

/// Coordinates of a matrix in a basis of matrix units; panics if it leaves
/// their span.
pub fn decompose(units: &[(usize, usize)], m: &Matrix) -> Vector {
    let mut v = zero_vec(units.len());
    let mut covered = 0;
    for (p, &(i, j)) in units.iter().enumerate() {
        v[p] = m[(i - 1, j - 1)].clone();
        if !v[p].is_zero() {
            covered += 1;
        }
    }
    let nonzero = (0..m.rows()).flat_map(|i| (0..m.cols()).map(move |j| (i, j))).filter(|&(i, j)| !m[(i, j)].is_zero()).count();
    assert_eq!(covered, nonzero, "matrix leaves the span of the basis units");
    v
}

/// `[X, Y] = XY - (-1)^{|X||Y|} YX` for matrix units in `gl(m | n)`, where a
/// unit is odd when it crosses the block boundary after row/column `m`.
pub fn super_commutator_oracle(m_even: usize, size: usize, a: (usize, usize), b: (usize, usize)) -> Matrix {
    let odd = |(i, j): (usize, usize)| (i <= m_even) != (j <= m_even);
    let x = unit_matrix(size, a.0, a.1);
    let y = unit_matrix(size, b.0, b.1);
    let xy = x.mul(&y);
    let yx = y.mul(&x);
    if odd(a) && odd(b) {
        xy.add(&yx)
    } else {
        xy.sub(&yx)
    }
}

/// Applies `e_j` to `t^a` in the induced module by naive word rewriting.
///
/// Works in the basis `complement ++ basis(p)`: a word is rewritten by
/// swapping the leftmost adjacent pair out of order (`ab = ba + [a, b]`) and
/// by letting a trailing element of `p` act on `v` through `f`.
pub fn pbw_oracle(alg: &LieAlgebra, f: &Functional, p: &Subspace, complement: &[Vector], j: usize, a: &[u32]) -> Poly {
    let d = alg.dim();
    let r = complement.len();
    let mut basis: Vec<Vector> = complement.to_vec();
    basis.extend(p.basis().iter().cloned());
    let change = Matrix::from_cols(&basis, d);
    let coords = |v: &[Scalar]| change.solve(v).expect("basis spans g");
    let mut bracket_cache: HashMap<(usize, usize), Vector> = HashMap::new();

    let mut word: Vec<usize> = Vec::new();
    for (k, &e) in a.iter().enumerate() {
        word.extend(std::iter::repeat_n(k, e as usize));
    }
    let mut pending: HashMap<Vec<usize>, Scalar> = HashMap::new();
    for (i, c) in coords(&unit_vec(d, j)).into_iter().enumerate() {
        if !c.is_zero() {
            let mut w = vec![i];
            w.extend(word.iter().copied());
            *pending.entry(w).or_insert_with(Scalar::zero) += c;
        }
    }
    let mut out = Poly::zero(r);
    while !pending.is_empty() {
        let mut next: HashMap<Vec<usize>, Scalar> = HashMap::new();
        for (w, c) in pending {
            if c.is_zero() {
                continue;
            }
            if let Some(&last) = w.last() {
                if last >= r {
                    let val = f.eval(&basis[last]);
                    if !val.is_zero() {
                        *next.entry(w[..w.len() - 1].to_vec()).or_insert_with(Scalar::zero) += c * val;
                    }
                    continue;
                }
            }
            match (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]) {
                None => {
                    let mut m = vec![0u32; r];
                    for &x in &w {
                        m[x] += 1;
                    }
                    out.add_term(m, c);
                }
                Some(i) => {
                    let mut swapped = w.clone();
                    swapped.swap(i, i + 1);
                    *next.entry(swapped).or_insert_with(Scalar::zero) += c.clone();
                    let br = bracket_cache
                        .entry((w[i], w[i + 1]))
                        .or_insert_with(|| coords(&alg.bracket(&basis[w[i]], &basis[w[i + 1]]).unwrap()))
                        .clone();
                    for (k, b) in br.into_iter().enumerate() {
                        if !b.is_zero() {
                            let mut nw = w[..i].to_vec();
                            nw.push(k);
                            nw.extend_from_slice(&w[i + 2..]);
                            *next.entry(nw).or_insert_with(Scalar::zero) += &c * b;
                        }
                    }
                }
            }
        }
        pending = next;
    }
    out
}
