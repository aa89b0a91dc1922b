//! The induced module `U(g) ⊗_{U(p)} C_f` realised as polynomial
//! differential operators.
//!
//! The complement `v_1, ..., v_r` of `p` comes from a chain
//! `p = p_0 ⊂ p_1 ⊂ ... ⊂ p_r = g`, each term an ideal of codimension one in
//! the next, with `v_1` spanning the last step. The PBW monomial
//! `v_1^{a_1} ... v_r^{a_r} ⊗ v` is identified with `t^a`. The action of each
//! basis element on monomials is computed by straightening, and the operator
//! is read off from that action. The chain makes every operator of finite
//! order; an arbitrary ordering of a complement need not.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::algebra::LieAlgebra;
use crate::coadjoint::{check_functional, DarbouxBasis, Functional};
use crate::error::{Error, Result};
use crate::linalg::{is_zero_vec, unit_vec, Matrix, Subspace, Vector};
use crate::polarisation::{is_polarisation, is_subordinate};
use crate::scalar::{self, Scalar};
use crate::weyl::{monomials_up_to, total_degree, MultiIndex, Poly, WeylElement};

const MAX_DEPTH: usize = 2_000;

#[derive(Clone, Debug)]
pub struct DiffOpRep {
    pub algebra: LieAlgebra,
    pub polarisation: Subspace,
    pub functional: Functional,
    /// Complement vectors `v_1..v_r`, outermost first.
    pub complement: Vec<Vector>,
    /// `ρ(e_i)` for each basis index.
    pub rho: Vec<WeylElement>,
}

impl DiffOpRep {
    pub fn vars(&self) -> usize {
        self.complement.len()
    }

    /// `ρ(u)` for a coordinate vector.
    pub fn rho_of(&self, u: &[Scalar]) -> Result<WeylElement> {
        self.algebra.check_len(u)?;
        let mut out = WeylElement::zero(self.vars());
        for (ui, r) in u.iter().zip(&self.rho) {
            out.add_scaled(ui, r);
        }
        Ok(out)
    }
}

struct Straightener<'a> {
    alg: &'a LieAlgebra,
    complement: Vec<Vector>,
    /// For each basis element: coefficients on the complement and the value
    /// of `f` on its component in `p`.
    split: Vec<(Vector, Scalar)>,
    memo: HashMap<(usize, MultiIndex), Poly>,
    depth: usize,
}

impl<'a> Straightener<'a> {
    fn new(alg: &'a LieAlgebra, f: &Functional, p: &Subspace, complement: Vec<Vector>) -> Self {
        let d = alg.dim();
        // Columns: complement vectors, then the basis of p.
        let mut cols: Vec<Vector> = complement.clone();
        cols.extend(p.basis().iter().cloned());
        let m = Matrix::from_cols(&cols, d);
        let r = complement.len();
        let split = (0..d)
            .map(|j| {
                let x = m.solve(&unit_vec(d, j)).expect("complement and p span g");
                let mut pi = vec![Scalar::zero(); d];
                for (xi, row) in x[r..].iter().zip(p.basis()) {
                    crate::linalg::axpy(&mut pi, xi, row);
                }
                (x[..r].to_vec(), f.eval(&pi))
            })
            .collect();
        Straightener { alg, complement, split, memo: HashMap::new(), depth: 0 }
    }

    fn vars(&self) -> usize {
        self.complement.len()
    }

    /// `u · (e^a ⊗ v)` for a coordinate vector `u`.
    fn act(&mut self, u: &[Scalar], a: &MultiIndex) -> Result<Poly> {
        let mut out = Poly::zero(self.vars());
        for (j, uj) in u.iter().enumerate() {
            if !uj.is_zero() {
                let p = self.act_basis(j, a)?;
                out.add_scaled(uj, &p);
            }
        }
        Ok(out)
    }

    /// `e_j · (e^a ⊗ v)`.
    fn act_basis(&mut self, j: usize, a: &MultiIndex) -> Result<Poly> {
        if let Some(p) = self.memo.get(&(j, a.clone())) {
            return Ok(p.clone());
        }
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(Error::Internal("PBW straightening did not terminate".into()));
        }
        let r = self.vars();
        let result = match a.iter().position(|&x| x > 0) {
            None => {
                let (gamma, fval) = &self.split[j];
                let mut p = Poly::constant(r, fval.clone());
                for (i, g) in gamma.iter().enumerate() {
                    p.add_scaled(g, &Poly::var(r, i));
                }
                p
            }
            Some(k) => {
                // e_j v_k v^{a'} = v_k e_j v^{a'} + [e_j, v_k] v^{a'}
                let mut rest = a.clone();
                rest[k] -= 1;
                let inner = self.act_basis(j, &rest)?;
                let mut out = self.left_mult(k, &inner)?;
                let br = self.alg.bracket_with_basis(j, &self.complement[k]);
                if !is_zero_vec(&br) {
                    let extra = self.act(&br, &rest)?;
                    out.add_scaled(&Scalar::one(), &extra);
                }
                out
            }
        };
        self.depth -= 1;
        self.memo.insert((j, a.clone()), result.clone());
        Ok(result)
    }

    /// `v_k · q` for `q` in the module.
    fn left_mult(&mut self, k: usize, q: &Poly) -> Result<Poly> {
        let r = self.vars();
        let mut out = Poly::zero(r);
        for (b, c) in q.terms() {
            let in_order = b.iter().position(|&x| x > 0).is_none_or(|first| k <= first);
            if in_order {
                let mut nb = b.clone();
                nb[k] += 1;
                out.add_term(nb, c.clone());
            } else {
                let v = self.complement[k].clone();
                let p = self.act(&v, b)?;
                out.add_scaled(c, &p);
            }
        }
        Ok(out)
    }
}

fn factorial_multi(b: &[u32]) -> Scalar {
    b.iter().map(|&x| scalar::factorial(x)).fold(Scalar::one(), |acc, x| acc * x)
}

fn falling_multi(a: &[u32], b: &[u32]) -> Scalar {
    a.iter().zip(b).map(|(&x, &y)| scalar::falling(x, y)).fold(Scalar::one(), |acc, x| acc * x)
}

fn leq(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Multi-indices with every entry at most `max`, by total degree.
fn box_indices(r: usize, max: u32) -> Vec<MultiIndex> {
    let mut out: Vec<MultiIndex> = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|m| {
                (0..=max).map(move |e| {
                    let mut n = m.clone();
                    n.push(e);
                    n
                })
            })
            .collect();
    }
    out.sort_by_key(|b| total_degree(b));
    out
}

/// Reads off `Σ_b p_b(t) ∂^b` from the images of the monomials `t^b`. Along
/// the adapted chain each variable enters with `∂`-degree below the
/// nilpotency class, so `b` ranges over that box.
fn fit_operator(st: &mut Straightener<'_>, j: usize, per_var: u32) -> Result<WeylElement> {
    let r = st.vars();
    let mut coeffs: Vec<(MultiIndex, Poly)> = Vec::new();
    for b in box_indices(r, per_var) {
        let mut acc = st.act_basis(j, &b)?;
        for (b2, p2) in &coeffs {
            if leq(b2, &b) {
                let shift: MultiIndex = b.iter().zip(b2).map(|(x, y)| x - y).collect();
                let m = Poly::monomial(r, shift, falling_multi(&b, b2));
                acc = acc.sub(&p2.mul(&m));
            }
        }
        let pb = acc.scale(&factorial_multi(&b).recip());
        if !pb.is_zero() {
            coeffs.push((b, pb));
        }
    }
    let mut w = WeylElement::zero(r);
    for (b, p) in coeffs {
        for (a, c) in p.terms() {
            w.add_term(a.clone(), b.clone(), c.clone());
        }
    }
    Ok(w)
}

/// `{v : [v, s] ⊆ s}`.
pub fn normaliser(alg: &LieAlgebra, s: &Subspace) -> Subspace {
    let d = alg.dim();
    let ann = s.annihilator();
    let mut rows = Vec::new();
    for b in s.basis() {
        let cols: Vec<Vector> = (0..d).map(|j| alg.bracket_with_basis(j, b)).collect();
        for l in ann.basis() {
            rows.push(cols.iter().map(|c| crate::linalg::dot(l, c)).collect());
        }
    }
    if rows.is_empty() {
        return Subspace::full(d);
    }
    Subspace::span(d, Matrix::from_rows(&rows, d).kernel())
}

/// Grows `p` one normalising direction at a time, preferring the
/// lowest-index coordinate axis, and returns the added vectors outermost
/// first.
pub fn adapted_complement(alg: &LieAlgebra, p: &Subspace) -> Vec<Vector> {
    let d = alg.dim();
    let mut cur = p.clone();
    let mut chain = Vec::new();
    while !cur.is_full() {
        let n = normaliser(alg, &cur);
        let v = (0..d)
            .map(|i| unit_vec(d, i))
            .find(|e| !cur.contains(e) && n.contains(e))
            .or_else(|| n.basis().iter().find(|b| !cur.contains(b)).cloned())
            .expect("a proper subalgebra of a nilpotent algebra is smaller than its normaliser");
        cur = cur.sum(&Subspace::span(d, [v.clone()]));
        chain.push(v);
    }
    chain.reverse();
    chain
}

/// Builds the induced module for a polarisation `p` of `f`.
pub fn induce(alg: &LieAlgebra, f: &Functional, p: &Subspace) -> Result<DiffOpRep> {
    if alg.is_graded() {
        return Err(Error::Precondition("induced modules are built for ungraded algebras only".into()));
    }
    alg.require_nilpotent()?;
    check_functional(alg, f)?;
    if !is_polarisation(alg, p, f)? {
        return Err(Error::Precondition("subspace is not a polarisation of f".into()));
    }
    let complement = adapted_complement(alg, p);
    let r = complement.len();
    let class = alg.nilpotency_class().unwrap_or(1) as u32;
    let per_var = class.saturating_sub(1);
    let check_set = monomials_up_to(r, class + 1);
    let mut st = Straightener::new(alg, f, p, complement.clone());
    let mut rho = Vec::with_capacity(alg.dim());
    for j in 0..alg.dim() {
        let w = fit_operator(&mut st, j, per_var)?;
        for b in &check_set {
            let direct = st.act_basis(j, b)?;
            if w.apply(&Poly::monomial(r, b.clone(), Scalar::one()))? != direct {
                return Err(Error::Internal(format!("fitted operator for {} disagrees with straightening", alg.basis_name(j))));
            }
        }
        rho.push(w);
    }
    let rep = DiffOpRep { algebra: alg.clone(), polarisation: p.clone(), functional: f.clone(), complement, rho };
    if let (false, Some((i, j))) = check_rep(&rep) {
        return Err(Error::Internal(format!(
            "induced operators fail the bracket relation on ({}, {})",
            alg.basis_name(i),
            alg.basis_name(j)
        )));
    }
    for z in alg.center().basis() {
        if rep.rho_of(z)? != WeylElement::constant(r, f.eval(z)) {
            return Err(Error::Internal("a central element does not act by its character".into()));
        }
    }
    Ok(rep)
}

/// `u · q` in the induced module.
pub fn apply(rep: &DiffOpRep, u: &[Scalar], q: &Poly) -> Result<Poly> {
    rep.rho_of(u)?.apply(q)
}

/// Checks `ρ([e_i, e_j]) = [ρ(e_i), ρ(e_j)]` on all basis pairs and returns
/// the first failing pair.
pub fn check_rep(rep: &DiffOpRep) -> (bool, Option<(usize, usize)>) {
    let alg = &rep.algebra;
    let d = alg.dim();
    for i in 0..d {
        for j in i + 1..d {
            let br = alg.bracket_with_basis(i, &unit_vec(d, j));
            let lhs = rep.rho_of(&br).expect("bracket has algebra length");
            if lhs != rep.rho[i].commutator(&rep.rho[j]) {
                return (false, Some((i, j)));
            }
        }
    }
    (true, None)
}

/// Images of a Darboux basis, checked against the Weyl relations
/// `[X_i, Y_j] = δ_ij`, `[X_i, X_j] = [Y_i, Y_j] = 0`.
pub fn weyl_generators(rep: &DiffOpRep, db: &DarbouxBasis) -> Result<Vec<(WeylElement, WeylElement)>> {
    let r = rep.vars();
    let images: Vec<(WeylElement, WeylElement)> = db
        .pairs
        .iter()
        .map(|(x, y)| Ok((rep.rho_of(x)?, rep.rho_of(y)?)))
        .collect::<Result<_>>()?;
    let one = WeylElement::identity(r);
    let zero = WeylElement::zero(r);
    for (i, (xi, yi)) in images.iter().enumerate() {
        for (j, (xj, yj)) in images.iter().enumerate() {
            let expected = if i == j { &one } else { &zero };
            if &xi.commutator(yj) != expected {
                return Err(Error::Internal(format!("[X_{}, Y_{}] is not {}", i + 1, j + 1, if i == j { 1 } else { 0 })));
            }
            if j > i && (!xi.commutator(xj).is_zero() || !yi.commutator(yj).is_zero()) {
                return Err(Error::Internal(format!("generators {} and {} do not commute", i + 1, j + 1)));
            }
        }
    }
    Ok(images)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eigenspace {
    pub degree_cap: u32,
    pub dim: usize,
    pub basis: Vec<Poly>,
}

pub const DEFAULT_DEGREE_CAP: u32 = 8;

/// `{q : deg q <= cap, (ρ(x) - f(x)) q = 0 for x ∈ k}`, solved exactly: every
/// coefficient of the image must vanish, including those above the cap.
pub fn eigenspace(rep: &DiffOpRep, k: &Subspace, f: &Functional, degree_cap: u32) -> Result<Eigenspace> {
    if !is_subordinate(&rep.algebra, k, f)? {
        return Err(Error::Precondition("f does not vanish on [k, k]".into()));
    }
    let r = rep.vars();
    let inputs = monomials_up_to(r, degree_cap);
    // One block of rows per generator of k, one row per image monomial.
    let mut row_index: HashMap<(usize, MultiIndex), usize> = HashMap::new();
    let mut entries: Vec<(usize, usize, Scalar)> = Vec::new();
    for (g, x) in k.basis().iter().enumerate() {
        let op = rep.rho_of(x)?.sub(&WeylElement::constant(r, f.eval(x)));
        for (col, a) in inputs.iter().enumerate() {
            let image = op.apply(&Poly::monomial(r, a.clone(), Scalar::one()))?;
            for (m, c) in image.terms() {
                let next = row_index.len();
                let row = *row_index.entry((g, m.clone())).or_insert(next);
                entries.push((row, col, c.clone()));
            }
        }
    }
    let mut m = Matrix::zeros(row_index.len(), inputs.len());
    for (row, col, c) in entries {
        m[(row, col)] += c;
    }
    let basis: Vec<Poly> = m
        .kernel()
        .into_iter()
        .map(|v| {
            let mut p = Poly::zero(r);
            for (a, c) in inputs.iter().zip(v) {
                p.add_term(a.clone(), c);
            }
            p
        })
        .collect();
    Ok(Eigenspace { degree_cap, dim: basis.len(), basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_abelian, build_n_m};
    use crate::coadjoint::darboux_basis;
    use crate::polarisation::vergne_polarisation;
    use crate::scalar::int;

    fn n3_rep() -> DiffOpRep {
        let g = build_n_m(3).unwrap();
        let f = Functional::dual_basis(3, 2);
        induce(&g, &f, &Subspace::coordinate(3, &[1, 2])).unwrap()
    }

    #[test]
    fn n3_operators() {
        let rep = n3_rep();
        assert_eq!(rep.complement, vec![unit_vec(3, 0)]);
        assert_eq!(rep.rho[0], WeylElement::t(1, 0));
        assert_eq!(rep.rho[1], WeylElement::d(1, 0).scale(&int(-1)));
        assert_eq!(rep.rho[2], WeylElement::identity(1));
        let q = Poly::monomial(1, vec![2], int(1));
        assert_eq!(apply(&rep, &unit_vec(3, 1), &q).unwrap(), Poly::monomial(1, vec![1], int(-2)));
        assert_eq!(apply(&rep, &unit_vec(3, 2), &q).unwrap(), q);
        assert!(apply(&rep, &vec![Scalar::zero(); 3], &q).unwrap().is_zero());
    }

    #[test]
    fn corrupted_rep_is_caught() {
        let mut rep = n3_rep();
        rep.rho[1] = WeylElement::d(1, 0);
        assert_eq!(check_rep(&rep), (false, Some((0, 1))));
    }

    #[test]
    fn trivial_polarisation() {
        let g = build_n_m(3).unwrap();
        let f = Functional::from_coords(vec![int(2), int(-1), int(0)]);
        let rep = induce(&g, &f, &Subspace::full(3)).unwrap();
        assert_eq!(rep.vars(), 0);
        assert_eq!(rep.rho[0], WeylElement::constant(0, int(2)));
        assert_eq!(rep.rho[1], WeylElement::constant(0, int(-1)));
        let a = build_abelian(3).unwrap();
        let rep = induce(&a, &Functional::dual_basis(3, 0), &Subspace::full(3)).unwrap();
        assert!(check_rep(&rep).0);
    }

    #[test]
    fn rejects_non_polarisation() {
        let g = build_n_m(3).unwrap();
        let f = Functional::dual_basis(3, 2);
        assert!(matches!(induce(&g, &f, &Subspace::coordinate(3, &[2])), Err(Error::Precondition(_))));
    }

    #[test]
    fn n4_vergne_module() {
        let g = build_n_m(4).unwrap();
        let f = Functional::dual_basis(6, 5);
        let p = vergne_polarisation(&g, &f, None).unwrap();
        let rep = induce(&g, &f, &p).unwrap();
        assert_eq!(rep.vars(), 2);
        assert!(check_rep(&rep).0);
        let db = darboux_basis(&g, &f).unwrap();
        assert_eq!(weyl_generators(&rep, &db).unwrap().len(), 2);
    }

    #[test]
    fn eigenspaces_n3() {
        let rep = n3_rep();
        let f = Functional::dual_basis(3, 2);
        for cap in [0, 3, 5, 8] {
            let e = eigenspace(&rep, &Subspace::coordinate(3, &[1, 2]), &f, cap).unwrap();
            assert_eq!(e.dim, 1);
            assert_eq!(e.basis[0].degree(), Some(0));
        }
        let e = eigenspace(&rep, &Subspace::zero(3), &f, 5).unwrap();
        assert_eq!(e.dim, 6);
        let e = eigenspace(&rep, &Subspace::coordinate(3, &[0]), &f, 5).unwrap();
        assert_eq!(e.dim, 0);
        assert!(eigenspace(&rep, &Subspace::full(3), &f, 2).is_err());
    }

    #[test]
    fn weyl_generators_n3_and_zero() {
        let g = build_n_m(3).unwrap();
        let f = Functional::dual_basis(3, 2);
        let rep = n3_rep();
        let db = darboux_basis(&g, &f).unwrap();
        let gens = weyl_generators(&rep, &db).unwrap();
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].0.commutator(&gens[0].1), WeylElement::identity(1));

        let z = Functional::zero(3);
        let rep0 = induce(&g, &z, &Subspace::full(3)).unwrap();
        assert!(weyl_generators(&rep0, &darboux_basis(&g, &z).unwrap()).unwrap().is_empty());
    }
}
