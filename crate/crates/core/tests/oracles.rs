mod common;

use common::*;
use nilorbit::algebra::build_abelian;
use nilorbit::coadjoint::{darboux_basis, exp_ad, gram_matrix};
use nilorbit::enveloping::{apply, induce};
use nilorbit::linalg::{dot, unit_vec};
use nilorbit::polarisation::vergne_polarisation;
use nilorbit::scalar::{frac, int};
use nilorbit::superalgebra::build_glmn_plus;
use nilorbit::weyl::{monomials_up_to, Poly, WeylElement};
use nilorbit::{build_n_m, Functional, LieAlgebraBuilder, Matrix, Scalar, Subspace};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn n_m_matches_matrix_commutators() {
    for m in 2..=6 {
        let g = build_n_m(m).unwrap();
        let units: Vec<(usize, usize)> = g.basis_names().iter().map(|n| unit_of_name(n)).collect();
        for (a, &ua) in units.iter().enumerate() {
            for (b, &ub) in units.iter().enumerate() {
                let x = unit_matrix(m, ua.0, ua.1);
                let y = unit_matrix(m, ub.0, ub.1);
                let expected = decompose(&units, &x.mul(&y).sub(&y.mul(&x)));
                assert_eq!(g.bracket(&unit_vec(g.dim(), a), &unit_vec(g.dim(), b)).unwrap(), expected);
            }
        }
    }
}

#[test]
fn glmn_matches_super_commutators() {
    for (m, n) in [(2, 1), (1, 2), (3, 2), (2, 3), (4, 3)] {
        let g = build_glmn_plus(m, n).unwrap();
        let units: Vec<(usize, usize)> = g.basis_names().iter().map(|s| unit_of_name(s)).collect();
        for (a, &ua) in units.iter().enumerate() {
            let odd = (ua.0 <= m) != (ua.1 <= m);
            assert_eq!(g.parity()[a].bit() == 1, odd);
            for (b, &ub) in units.iter().enumerate() {
                let expected = decompose(&units, &super_commutator_oracle(m, m + n, ua, ub));
                assert_eq!(g.bracket(&unit_vec(g.dim(), a), &unit_vec(g.dim(), b)).unwrap(), expected, "({m},{n}) {a} {b}");
            }
        }
    }
}

#[test]
fn jacobi_check_agrees_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    // A valid algebra and one with [x, z] = x added.
    let mut broken = LieAlgebraBuilder::new("broken", ["x", "y", "z"].map(String::from).to_vec());
    broken.add(0, 1, 2, int(1)).unwrap();
    broken.add(0, 2, 0, int(1)).unwrap();
    let broken = broken.build().unwrap();
    for g in [build_n_m(4).unwrap(), broken] {
        let valid = g.validate().violations.iter().all(|v| !matches!(v, nilorbit::Violation::Jacobi { .. }));
        let mut any_failure = false;
        for _ in 0..200 {
            let a = random_vec(&mut rng, g.dim());
            let b = random_vec(&mut rng, g.dim());
            let c = random_vec(&mut rng, g.dim());
            let br = |u: &Vec<Scalar>, v: &Vec<Scalar>| g.bracket(u, v).unwrap();
            let s1 = br(&br(&a, &b), &c);
            let s2 = br(&br(&b, &c), &a);
            let s3 = br(&br(&c, &a), &b);
            let sum: Vec<Scalar> = (0..g.dim()).map(|i| &s1[i] + &s2[i] + &s3[i]).collect();
            any_failure |= sum.iter().any(|x| !x.is_zero());
        }
        assert_eq!(valid, !any_failure, "{}", g.name());
    }
}

#[test]
fn broken_jacobi_names_the_triple() {
    let mut b = LieAlgebraBuilder::new("broken", ["x", "y", "z"].map(String::from).to_vec());
    b.add(0, 1, 2, int(1)).unwrap();
    b.add(0, 2, 0, int(1)).unwrap();
    let g = b.build().unwrap();
    let report = g.validate();
    assert!(report.violations.contains(&nilorbit::Violation::Jacobi { i: 0, j: 1, k: 2 }));
    assert_eq!(nilorbit::Violation::Jacobi { i: 0, j: 1, k: 2 }.describe(&g), "jacobi: (x, y, z)");
}

#[test]
fn exp_ad_matches_series_on_n4() {
    // Independent oracle: the series is finite, sum (ad x)^k / k! via repeated brackets.
    let g = build_n_m(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let x = random_vec(&mut rng, 6);
        let e = exp_ad(&g, &x).unwrap();
        for j in 0..6 {
            let mut term = unit_vec(6, j);
            let mut acc = term.clone();
            for k in 1..6 {
                term = g.bracket(&x, &term).unwrap().into_iter().map(|c| c / int(k)).collect();
                acc = acc.iter().zip(&term).map(|(a, b)| a + b).collect();
            }
            assert_eq!(e.col(j), acc);
        }
    }
}

#[test]
fn gram_matrix_matches_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for g in shipped() {
        let f = Functional::from_coords(random_vec(&mut rng, g.dim()));
        let gram = gram_matrix(&g, &f).unwrap();
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                let br = g.bracket(&unit_vec(g.dim(), i), &unit_vec(g.dim(), j)).unwrap();
                assert_eq!(gram.matrix[(i, j)], dot(f.coords(), &br));
            }
        }
    }
}

fn reps() -> Vec<nilorbit::enveloping::DiffOpRep> {
    let mut out = Vec::new();
    let g3 = n3();
    out.push(induce(&g3, &z_star(), &Subspace::coordinate(3, &[1, 2])).unwrap());
    let f = Functional::from_coords(vec![int(0), int(0), frac(3, 2)]);
    out.push(induce(&g3, &f, &vergne_polarisation(&g3, &f, None).unwrap()).unwrap());
    let g4 = build_n_m(4).unwrap();
    let fs = [
        Functional::dual_basis(6, 5),
        Functional::from_coords(vec![int(1), int(2), int(-1), frac(1, 2), int(3), int(1)]),
        Functional::from_coords(vec![int(0), int(1), int(0), int(2), int(-3), int(0)]),
    ];
    for f in fs {
        let p = vergne_polarisation(&g4, &f, None).unwrap();
        out.push(induce(&g4, &f, &p).unwrap());
    }
    out
}

#[test]
fn straightening_matches_word_rewriting() {
    for rep in reps() {
        let g = &rep.algebra;
        for j in 0..g.dim() {
            for a in monomials_up_to(rep.vars(), 4) {
                let oracle = pbw_oracle(g, &rep.functional, &rep.polarisation, &rep.complement, j, &a);
                let got = apply(&rep, &unit_vec(g.dim(), j), &Poly::monomial(rep.vars(), a.clone(), int(1))).unwrap();
                assert_eq!(got, oracle, "{} acting on {a:?}", g.basis_name(j));
            }
        }
    }
}

/// Images of the degree <= `cap` monomials under an operator: the columns of
/// its truncated matrix.
fn truncated(op: &WeylElement, cap: u32) -> Vec<(Vec<u32>, Poly)> {
    monomials_up_to(op.vars(), cap)
        .into_iter()
        .map(|a| {
            let q = Poly::monomial(op.vars(), a.clone(), int(1));
            (a, op.apply(&q).unwrap())
        })
        .collect()
}

/// Applies a truncated matrix to a polynomial column by column.
fn apply_columns(op: &WeylElement, q: &Poly) -> Poly {
    let mut out = Poly::zero(op.vars());
    for (a, c) in q.terms() {
        out.add_scaled(c, &op.apply(&Poly::monomial(op.vars(), a.clone(), int(1))).unwrap());
    }
    out
}

#[test]
fn operator_products_match_truncated_matrices() {
    for rep in reps() {
        let g = &rep.algebra;
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                let (a, b) = (&rep.rho[i], &rep.rho[j]);
                let product = a.mul(b);
                let br = rep.rho_of(&g.bracket(&unit_vec(g.dim(), i), &unit_vec(g.dim(), j)).unwrap()).unwrap();
                for (m, col) in truncated(b, 6) {
                    let composed = apply_columns(a, &col);
                    let q = Poly::monomial(rep.vars(), m, int(1));
                    assert_eq!(product.apply(&q).unwrap(), composed);
                    let comm = composed.sub(&apply_columns(b, &a.apply(&q).unwrap()));
                    assert_eq!(br.apply(&q).unwrap(), comm);
                }
            }
        }
    }
}

#[test]
fn weyl_product_matches_composition_on_random_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    use rand::Rng;
    for _ in 0..30 {
        let r = rng.gen_range(1..=3);
        let mut ops = Vec::new();
        for _ in 0..2 {
            let mut w = WeylElement::zero(r);
            for _ in 0..3 {
                let a: Vec<u32> = (0..r).map(|_| rng.gen_range(0..3)).collect();
                let b: Vec<u32> = (0..r).map(|_| rng.gen_range(0..3)).collect();
                w.add_term(a, b, nilorbit::scalar::random_nonzero(&mut rng, 5));
            }
            ops.push(w);
        }
        let product = ops[0].mul(&ops[1]);
        for (m, col) in truncated(&ops[1], 6) {
            let q = Poly::monomial(r, m, int(1));
            assert_eq!(product.apply(&q).unwrap(), apply_columns(&ops[0], &col));
        }
    }
}

#[test]
fn darboux_matches_gram_schmidt_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for g in ungraded() {
        for _ in 0..5 {
            let f = Functional::from_coords(random_vec(&mut rng, g.dim()));
            let db = darboux_basis(&g, &f).unwrap();
            let p = db.change_of_basis(g.dim());
            let b = gram_matrix(&g, &f).unwrap().matrix;
            let got = p.transpose().mul(&b).mul(&p);
            let n = db.weight();
            let mut expected = Matrix::zeros(g.dim(), g.dim());
            for i in 0..n {
                expected[(i, n + i)] = int(1);
                expected[(n + i, i)] = int(-1);
            }
            assert_eq!(got, expected);
        }
    }
}

#[test]
fn abelian_reps_are_trivially_homomorphisms() {
    let a = build_abelian(3).unwrap();
    let f = Functional::from_coords(vec![int(1), int(-2), frac(1, 3)]);
    let rep = induce(&a, &f, &Subspace::full(3)).unwrap();
    assert!(nilorbit::enveloping::check_rep(&rep).0);
    assert_eq!(rep.rho[1], WeylElement::constant(0, int(-2)));
}
