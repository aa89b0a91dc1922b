//! The form `B_f(x, y) = f([x, y])`, its radical, orbit dimensions, the
//! coadjoint action of nilpotent exponentials, and Darboux bases.

use num_traits::{One, Zero};
use rand::Rng;

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{dot, is_zero_vec, scale_vec, sub_vec, unit_vec, zero_vec, Matrix, Subspace, Vector};
use crate::scalar::{self, Scalar};

/// A linear functional on `g`, given by its coordinates in the dual basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Functional {
    coords: Vector,
}

impl Functional {
    pub fn new(alg: &LieAlgebra, coords: Vector) -> Result<Self> {
        alg.check_len(&coords)?;
        Ok(Functional { coords })
    }

    pub fn from_coords(coords: Vector) -> Self {
        Functional { coords }
    }

    pub fn zero(dim: usize) -> Self {
        Functional { coords: zero_vec(dim) }
    }

    /// The dual basis vector `e_i*`.
    pub fn dual_basis(dim: usize, i: usize) -> Self {
        Functional { coords: unit_vec(dim, i) }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vector {
        self.coords
    }

    pub fn eval(&self, v: &[Scalar]) -> Scalar {
        dot(&self.coords, v)
    }

    pub fn scale(&self, c: &Scalar) -> Functional {
        Functional { coords: scale_vec(c, &self.coords) }
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coords)
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, dim: usize, bound: i64) -> Self {
        Functional { coords: (0..dim).map(|_| scalar::random_small(rng, bound)).collect() }
    }
}

pub(crate) fn check_functional(alg: &LieAlgebra, f: &Functional) -> Result<()> {
    alg.check_len(f.coords())
}

/// `M[i][j] = f([e_i, e_j])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    pub matrix: Matrix,
    pub functional: Functional,
}

impl GramMatrix {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.matrix.add(&self.matrix.transpose()).is_zero()
    }

    /// `B_f(u, v)`.
    pub fn form(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        dot(u, &self.matrix.mul_vec(v))
    }
}

pub fn gram_matrix(alg: &LieAlgebra, f: &Functional) -> Result<GramMatrix> {
    alg.require_nilpotent()?;
    check_functional(alg, f)?;
    Ok(gram_unchecked(alg, f))
}

pub(crate) fn gram_unchecked(alg: &LieAlgebra, f: &Functional) -> GramMatrix {
    let d = alg.dim();
    let mut m = Matrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let v: Scalar = alg
                .bracket_basis(i, j)
                .iter()
                .fold(Scalar::zero(), |acc, (k, c)| acc + c * &f.coords()[*k]);
            m[(i, j)] = v;
        }
    }
    GramMatrix { matrix: m, functional: f.clone() }
}

/// `g^f = {x : f([x, y]) = 0 for all y}`.
pub fn radical(alg: &LieAlgebra, f: &Functional) -> Result<Subspace> {
    let gram = gram_matrix(alg, f)?;
    let rad = Subspace::span(alg.dim(), gram.matrix.left_kernel());
    debug_assert!(alg.is_subalgebra(&rad));
    Ok(rad)
}

/// `dim Ω_f = rank B_f`.
pub fn orbit_dim(alg: &LieAlgebra, f: &Functional) -> Result<usize> {
    Ok(gram_matrix(alg, f)?.rank())
}

/// Weight of the primitive ideal attached to `f`: half the orbit dimension.
pub fn weight(alg: &LieAlgebra, f: &Functional) -> Result<usize> {
    Ok(orbit_dim(alg, f)? / 2)
}

/// `exp(ad x) = Σ (ad x)^j / j!`, which terminates because `ad x` is nilpotent.
pub fn exp_ad(alg: &LieAlgebra, x: &[Scalar]) -> Result<Matrix> {
    let d = alg.dim();
    let ad = alg.ad_matrix(x)?;
    let mut sum = Matrix::identity(d);
    let mut power = Matrix::identity(d);
    for j in 1..=d {
        power = ad.mul(&power);
        if power.is_zero() {
            return Ok(sum);
        }
        sum = sum.add(&power.scale(&scalar::factorial(j as u32).recip()));
    }
    if ad.mul(&power).is_zero() {
        Ok(sum)
    } else {
        Err(Error::NonNilpotentAd(alg.format_vector(x)))
    }
}

/// `exp(x)·f = f ∘ exp(-ad x)`.
pub fn coadjoint_act(alg: &LieAlgebra, x: &[Scalar], f: &Functional) -> Result<Functional> {
    check_functional(alg, f)?;
    let neg: Vector = x.iter().map(|c| -c).collect();
    let e = exp_ad(alg, &neg)?;
    let out = Functional { coords: e.vec_mul(f.coords()) };
    debug_assert!(
        !alg.is_nilpotent() || gram_unchecked(alg, &out).rank() == gram_unchecked(alg, f).rank(),
        "coadjoint action changed the orbit dimension"
    );
    Ok(out)
}

/// `(exp(t_1 e_{i_1}) ··· exp(t_k e_{i_k}))·f`; the last parameter acts first.
pub fn orbit_sample(alg: &LieAlgebra, f: &Functional, params: &[(usize, Scalar)]) -> Result<Functional> {
    check_functional(alg, f)?;
    let d = alg.dim();
    let mut h = f.clone();
    for (i, t) in params.iter().rev() {
        if *i >= d {
            return Err(Error::IndexOutOfRange { index: *i, dim: d });
        }
        h = coadjoint_act(alg, &scale_vec(t, &unit_vec(d, *i)), &h)?;
    }
    Ok(h)
}

/// Symplectic pairs `(x_i, y_i)` with `B_f(x_i, y_j) = δ_ij`, plus a basis of
/// the radical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DarbouxBasis {
    pub pairs: Vec<(Vector, Vector)>,
    pub kernel: Vec<Vector>,
}

impl DarbouxBasis {
    /// Columns `x_1..x_n, y_1..y_n, k_1..k_m`, so that `P^T B P` is
    /// `[[0, I], [-I, 0]] ⊕ 0`.
    pub fn change_of_basis(&self, dim: usize) -> Matrix {
        let mut cols: Vec<Vector> = self.pairs.iter().map(|(x, _)| x.clone()).collect();
        cols.extend(self.pairs.iter().map(|(_, y)| y.clone()));
        cols.extend(self.kernel.iter().cloned());
        Matrix::from_cols(&cols, dim)
    }

    pub fn weight(&self) -> usize {
        self.pairs.len()
    }
}

/// Candidate order for Darboux pivots: deepest terms of the lower central
/// series first, then by index.
pub(crate) fn depth_order(alg: &LieAlgebra) -> Vec<usize> {
    let d = alg.dim();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(alg.lcs_depth(&unit_vec(d, i))), i));
    order
}

/// Symplectic Gram–Schmidt on the basis vectors, taken in [`depth_order`].
/// Each step pairs the first candidate that has a partner with its first
/// partner, then projects the remaining candidates off the new pair.
pub fn darboux_basis(alg: &LieAlgebra, f: &Functional) -> Result<DarbouxBasis> {
    if alg.is_graded() {
        return Err(Error::Precondition("Darboux bases require an ungraded algebra".into()));
    }
    let gram = gram_matrix(alg, f)?;
    let d = alg.dim();
    let mut pool: Vec<Vector> = depth_order(alg).into_iter().map(|i| unit_vec(d, i)).collect();
    let mut pairs = Vec::new();
    loop {
        let found = (0..pool.len()).find_map(|a| {
            (a + 1..pool.len()).find(|&b| !gram.form(&pool[a], &pool[b]).is_zero()).map(|b| (a, b))
        });
        let Some((a, b)) = found else { break };
        let x = pool[a].clone();
        let scale = gram.form(&x, &pool[b]).recip();
        let y = scale_vec(&scale, &pool[b]);
        pool.remove(b);
        pool.remove(a);
        for w in pool.iter_mut() {
            let wy = gram.form(w, &y);
            let wx = gram.form(w, &x);
            let mut next = sub_vec(w, &scale_vec(&wy, &x));
            crate::linalg::axpy(&mut next, &wx, &y);
            *w = next;
        }
        pairs.push((x, y));
    }
    let kernel = Subspace::span(d, pool).basis().to_vec();
    let db = DarbouxBasis { pairs, kernel };
    debug_assert_eq!(db.pairs.len() * 2, gram.rank());
    Ok(db)
}

/// How two functionals relate under the coadjoint action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitRelation {
    /// Same orbit. `witness`, when present, satisfies
    /// `orbit_sample(from, witness) == to`.
    Same { witness: Option<Vec<(usize, Scalar)>> },
    Different { reason: String },
    Unknown,
}

/// Decides orbit equality where an exact argument is available:
/// orbit-dimension and central-character invariants refute, a triangular
/// solve for group parameters confirms, and orbits filling the whole
/// central-character fibre confirm by dimension. Otherwise `Unknown`.
pub fn orbit_relation(alg: &LieAlgebra, from: &Functional, to: &Functional) -> Result<OrbitRelation> {
    alg.require_nilpotent()?;
    check_functional(alg, from)?;
    check_functional(alg, to)?;
    if from == to {
        return Ok(OrbitRelation::Same { witness: Some(Vec::new()) });
    }
    let df = orbit_dim(alg, from)?;
    let dt = orbit_dim(alg, to)?;
    if df != dt {
        return Ok(OrbitRelation::Different { reason: format!("orbit dimensions differ ({df} vs {dt})") });
    }
    let center = alg.center();
    if let Some(z) = center.basis().iter().find(|z| from.eval(z) != to.eval(z)) {
        return Ok(OrbitRelation::Different {
            reason: format!("values on central element {} differ", alg.format_vector(z)),
        });
    }
    if df == 0 {
        return Ok(OrbitRelation::Different { reason: "distinct fixed points".into() });
    }
    if let Some(w) = solve_triangular(alg, from, to)? {
        return Ok(OrbitRelation::Same { witness: Some(w) });
    }
    if let Some(w) = solve_triangular(alg, to, from)? {
        let inverse = w.into_iter().rev().map(|(i, t)| (i, -t)).collect();
        return Ok(OrbitRelation::Same { witness: Some(inverse) });
    }
    if df == alg.dim() - center.dim() {
        // The orbit is closed, irreducible and as large as the affine fibre
        // {h : h|z = f|z}, so it is that fibre.
        return Ok(OrbitRelation::Same { witness: None });
    }
    Ok(OrbitRelation::Unknown)
}

/// True when the orbit through `f` is the affine fibre `{h : h|z = f|z}`
/// over the center `z`.
pub fn orbit_is_central_fibre(alg: &LieAlgebra, f: &Functional) -> Result<bool> {
    Ok(orbit_dim(alg, f)? == alg.dim() - alg.center().dim())
}

/// Coefficients of `t ↦ (exp(t e_i)·h)(e_j)` as a polynomial in `t`.
fn coordinate_polynomial(alg: &LieAlgebra, h: &Functional, i: usize, j: usize) -> Vec<Scalar> {
    let d = alg.dim();
    let mut w = unit_vec(d, j);
    let mut coeffs = Vec::new();
    let mut n = 0u32;
    while !is_zero_vec(&w) && (n as usize) <= d {
        let sign = if n.is_multiple_of(2) { Scalar::one() } else { -Scalar::one() };
        coeffs.push(sign * h.eval(&w) / scalar::factorial(n));
        w = alg.bracket_with_basis(i, &w);
        n += 1;
    }
    coeffs
}

/// Moves `from` onto `to` one coordinate at a time (deepest coordinates
/// first), using basis directions whose action is affine on the target
/// coordinate and leaves the coordinates already matched untouched.
fn solve_triangular(alg: &LieAlgebra, from: &Functional, to: &Functional) -> Result<Option<Vec<(usize, Scalar)>>> {
    let d = alg.dim();
    let mut h = from.clone();
    let mut matched: Vec<usize> = Vec::new();
    let mut steps: Vec<(usize, Scalar)> = Vec::new();
    for j in depth_order(alg) {
        if h.coords()[j] == to.coords()[j] {
            matched.push(j);
            continue;
        }
        let direction = (0..d).find_map(|i| {
            let target = coordinate_polynomial(alg, &h, i, j);
            let affine = target.len() >= 2 && !target[1].is_zero() && target[2..].iter().all(Zero::is_zero);
            if !affine {
                return None;
            }
            let keeps = matched
                .iter()
                .all(|&m| coordinate_polynomial(alg, &h, i, m).iter().skip(1).all(Zero::is_zero));
            keeps.then(|| (i, target[1].clone()))
        });
        let Some((i, slope)) = direction else {
            return Ok(None);
        };
        let t = (&to.coords()[j] - &h.coords()[j]) / slope;
        h = coadjoint_act(alg, &scale_vec(&t, &unit_vec(d, i)), &h)?;
        steps.push((i, t));
        matched.push(j);
    }
    if &h != to {
        return Ok(None);
    }
    steps.reverse();
    debug_assert_eq!(&orbit_sample(alg, from, &steps)?, to);
    Ok(Some(steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_abelian, build_n_m};
    use crate::scalar::{frac, int};

    fn z_star() -> Functional {
        Functional::dual_basis(3, 2)
    }

    #[test]
    fn n3_gram_matrix() {
        let g = build_n_m(3).unwrap();
        let gram = gram_matrix(&g, &z_star()).unwrap();
        let expected = Matrix::from_rows(
            &[vec![int(0), int(1), int(0)], vec![int(-1), int(0), int(0)], vec![int(0), int(0), int(0)]],
            3,
        );
        assert_eq!(gram.matrix, expected);
        assert!(gram.is_antisymmetric());
    }

    #[test]
    fn zero_functional_gives_zero_gram_and_full_radical() {
        let g = build_n_m(4).unwrap();
        let f = Functional::zero(6);
        assert!(gram_matrix(&g, &f).unwrap().matrix.is_zero());
        assert!(radical(&g, &f).unwrap().is_full());
        assert_eq!(weight(&g, &f).unwrap(), 0);
    }

    #[test]
    fn n4_e14_star() {
        let g = build_n_m(4).unwrap();
        let f = Functional::dual_basis(6, 5);
        let gram = gram_matrix(&g, &f).unwrap();
        // E12 (0) pairs with E24 (4), E13 (3) with E34 (2): two hyperbolic
        // pairs, so the rank is 4.
        assert_eq!(gram.rank(), 4);
        assert_eq!(gram.matrix[(0, 4)], int(1));
        assert_eq!(gram.matrix[(3, 2)], int(1));
        let rad = radical(&g, &f).unwrap();
        assert_eq!(rad, Subspace::coordinate(6, &[1, 5]));
    }

    #[test]
    fn n3_orbit_dims_and_weight() {
        let g = build_n_m(3).unwrap();
        assert_eq!(orbit_dim(&g, &z_star()).unwrap(), 2);
        assert_eq!(weight(&g, &z_star()).unwrap(), 1);
        let f = Functional::from_coords(vec![int(3), frac(-1, 2), int(0)]);
        assert_eq!(orbit_dim(&g, &f).unwrap(), 0);
        assert_eq!(radical(&g, &z_star()).unwrap(), Subspace::coordinate(3, &[2]));
    }

    #[test]
    fn non_nilpotent_refused() {
        let mut b = crate::LieAlgebraBuilder::new("aff", vec!["h".into(), "e".into()]);
        b.add(0, 1, 1, int(1)).unwrap();
        let g = b.build().unwrap();
        assert_eq!(gram_matrix(&g, &Functional::zero(2)).unwrap_err(), Error::NotNilpotent);
        assert!(matches!(exp_ad(&g, &unit_vec(2, 0)), Err(Error::NonNilpotentAd(_))));
    }

    #[test]
    fn exp_ad_cases() {
        let g = build_n_m(3).unwrap();
        assert_eq!(exp_ad(&g, &zero_vec(3)).unwrap(), Matrix::identity(3));
        let x = unit_vec(3, 0);
        let expected = Matrix::identity(3).add(&g.ad_matrix(&x).unwrap());
        assert_eq!(exp_ad(&g, &x).unwrap(), expected);

        let g4 = build_n_m(4).unwrap();
        let x = crate::linalg::add_vec(&unit_vec(6, 0), &unit_vec(6, 1));
        let ad = g4.ad_matrix(&x).unwrap();
        let ad2 = ad.mul(&ad);
        let expected = Matrix::identity(6).add(&ad).add(&ad2.scale(&frac(1, 2)));
        assert_eq!(exp_ad(&g4, &x).unwrap(), expected);
        assert!(ad2.mul(&ad).is_zero());
    }

    #[test]
    fn n3_coadjoint_action() {
        let g = build_n_m(3).unwrap();
        let s = frac(5, 3);
        let h = coadjoint_act(&g, &scale_vec(&s, &unit_vec(3, 0)), &z_star()).unwrap();
        assert_eq!(h.coords(), &[int(0), -s.clone(), int(1)]);
        let fx = Functional::dual_basis(3, 0);
        let x = vec![int(2), int(-7), frac(1, 3)];
        assert_eq!(coadjoint_act(&g, &x, &fx).unwrap(), fx);
        assert_eq!(coadjoint_act(&g, &zero_vec(3), &z_star()).unwrap(), z_star());
    }

    #[test]
    fn n3_orbit_sample_composition() {
        let g = build_n_m(3).unwrap();
        let (s, t) = (frac(2, 7), int(-3));
        // exp(s E12) exp(t E23) · z* = t x* - s y* + z*
        let h = orbit_sample(&g, &z_star(), &[(0, s.clone()), (1, t.clone())]).unwrap();
        assert_eq!(h.coords(), &[t, -s, int(1)]);
        assert_eq!(orbit_sample(&g, &z_star(), &[]).unwrap(), z_star());
        assert!(orbit_sample(&g, &z_star(), &[(7, int(1))]).is_err());
    }

    #[test]
    fn darboux_n3() {
        let g = build_n_m(3).unwrap();
        let db = darboux_basis(&g, &z_star()).unwrap();
        assert_eq!(db.pairs, vec![(unit_vec(3, 0), unit_vec(3, 1))]);
        assert_eq!(db.kernel, vec![unit_vec(3, 2)]);
        let db0 = darboux_basis(&g, &Functional::zero(3)).unwrap();
        assert!(db0.pairs.is_empty());
        assert_eq!(db0.kernel.len(), 3);
    }

    #[test]
    fn darboux_n4_generic_normal_form() {
        let g = build_n_m(4).unwrap();
        let f = Functional::from_coords(vec![int(1), int(-2), frac(1, 2), int(3), int(5), int(2)]);
        let db = darboux_basis(&g, &f).unwrap();
        assert_eq!(db.pairs.len(), 2);
        assert_eq!(db.kernel.len(), 2);
        let p = db.change_of_basis(6);
        let gram = gram_matrix(&g, &f).unwrap();
        let t = p.transpose().mul(&gram.matrix).mul(&p);
        let mut expected = Matrix::zeros(6, 6);
        for i in 0..2 {
            expected[(i, 2 + i)] = int(1);
            expected[(2 + i, i)] = int(-1);
        }
        assert_eq!(t, expected);
        assert_eq!(p.rank(), 6);
    }

    #[test]
    fn orbit_relation_n3() {
        let g = build_n_m(3).unwrap();
        let target = Functional::from_coords(vec![frac(3, 4), int(-2), int(1)]);
        match orbit_relation(&g, &z_star(), &target).unwrap() {
            OrbitRelation::Same { witness: Some(w) } => {
                assert_eq!(orbit_sample(&g, &z_star(), &w).unwrap(), target);
            }
            other => panic!("unexpected {other:?}"),
        }
        let other = z_star().scale(&int(2));
        assert!(matches!(orbit_relation(&g, &z_star(), &other).unwrap(), OrbitRelation::Different { .. }));
        let a = Functional::dual_basis(3, 0);
        let b = Functional::dual_basis(3, 1);
        assert!(matches!(orbit_relation(&g, &a, &b).unwrap(), OrbitRelation::Different { .. }));
    }

    #[test]
    fn orbit_relation_n4_triangular() {
        let g = build_n_m(4).unwrap();
        let f = Functional::from_coords(vec![int(1), int(0), int(2), int(-1), int(1), int(3)]);
        let params = [(0, frac(1, 2)), (1, int(2)), (2, int(-1)), (4, frac(2, 3))];
        let h = orbit_sample(&g, &f, &params).unwrap();
        match orbit_relation(&g, &f, &h).unwrap() {
            OrbitRelation::Same { witness: Some(w) } => assert_eq!(orbit_sample(&g, &f, &w).unwrap(), h),
            OrbitRelation::Same { witness: None } => {}
            other => panic!("expected Same, got {other:?}"),
        }
    }

    #[test]
    fn abelian_orbits_are_points() {
        let g = build_abelian(3).unwrap();
        let f = Functional::dual_basis(3, 0);
        assert_eq!(orbit_dim(&g, &f).unwrap(), 0);
        let h = Functional::dual_basis(3, 1);
        assert!(matches!(orbit_relation(&g, &f, &h).unwrap(), OrbitRelation::Different { .. }));
    }
}
