//! Nilpotent Lie superalgebras: the functionals vanishing on the odd part,
//! graded polarisations, and the shape `M_s(A_n)` of the quotient by the
//! graded-primitive ideal attached to such a functional.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{build_n_m, n_m_units, LieAlgebra, LieAlgebraBuilder, Parity};
use crate::coadjoint::{check_functional, gram_matrix, radical, weight, Functional};
use crate::error::{Error, Result};
use crate::linalg::{unit_vec, zero_vec, Matrix, Subspace, Vector};
use crate::polarisation::{refine_chain, vergne_polarisation};
use crate::scalar::{self, Scalar};

/// A functional together with its membership in
/// `Λ = {λ : λ(g_1) = 0}` and `Λ' = {λ ∈ Λ : λ([g_1, g_1]) = 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperFunctional {
    pub functional: Functional,
    pub in_lambda: bool,
    pub in_lambda_prime: bool,
}

pub fn classify_lambda(alg: &LieAlgebra, lambda: &Functional) -> Result<SuperFunctional> {
    check_functional(alg, lambda)?;
    let odd = alg.odd_indices();
    let in_lambda = odd.iter().all(|&i| lambda.coords()[i].is_zero());
    let in_lambda_prime = in_lambda
        && odd.iter().enumerate().all(|(p, &a)| {
            odd[p..]
                .iter()
                .all(|&b| alg.bracket_basis(a, b).iter().all(|(k, c)| (c * &lambda.coords()[*k]).is_zero()))
        });
    Ok(SuperFunctional { functional: lambda.clone(), in_lambda, in_lambda_prime })
}

/// `span [g_1, g_1]` as a subspace of `g`.
fn odd_square(alg: &LieAlgebra) -> Subspace {
    let d = alg.dim();
    let odd = alg.odd_indices();
    let vecs = odd.iter().enumerate().flat_map(|(p, &a)| {
        odd[p..].iter().map(move |&b| {
            let mut v = zero_vec(d);
            for (k, c) in alg.bracket_basis(a, b) {
                v[k] = c;
            }
            v
        })
    });
    Subspace::span(d, vecs.collect::<Vec<_>>())
}

fn to_even(v: &[Scalar], even: &[usize]) -> Vector {
    even.iter().map(|&i| v[i].clone()).collect()
}

fn from_even(v: &[Scalar], even: &[usize], d: usize) -> Vector {
    let mut out = zero_vec(d);
    for (x, &i) in v.iter().zip(even) {
        out[i] = x.clone();
    }
    out
}

/// `p = p_0 ⊕ g_1` with `p_0` a Vergne polarisation of `λ|g_0` taken along a
/// flag through `h = span [g_1, g_1]`, so that `[g_1, g_1] ⊆ p_0`.
pub fn graded_polarisation(alg: &LieAlgebra, lambda: &SuperFunctional) -> Result<Subspace> {
    check_functional(alg, &lambda.functional)?;
    if !lambda.in_lambda_prime {
        return Err(Error::Precondition("functional does not vanish on g_1 + [g_1, g_1]".into()));
    }
    alg.require_nilpotent()?;
    let d = alg.dim();
    let even = alg.even_indices();
    let g0 = alg.restrict_to_basis(&even, format!("{}_0", alg.name()))?;
    let d0 = g0.dim();
    let l0 = Functional::from_coords(to_even(lambda.functional.coords(), &even));
    let h = Subspace::span(d0, odd_square(alg).basis().iter().map(|v| to_even(v, &even)).collect::<Vec<_>>());

    // 0 ⊂ h ∩ C_k ⊂ ... ⊂ h ⊂ h + C_k ⊂ ... ⊂ g_0, from the lower central series C_i of g_0.
    let lcs: Vec<Subspace> = g0.lower_central_series().iter().rev().cloned().collect();
    let mut chain: Vec<Subspace> = lcs.iter().map(|c| c.intersection(&h)).collect();
    chain.extend(lcs.iter().map(|c| c.sum(&h)));
    let flag = refine_chain(&g0, &chain);
    let p0 = vergne_polarisation(&g0, &l0, Some(&flag))?;

    let mut rows: Vec<Vector> = p0.basis().iter().map(|v| from_even(v, &even, d)).collect();
    rows.extend(alg.odd_indices().into_iter().map(|i| unit_vec(d, i)));
    let p = Subspace::span(d, rows);
    if !is_graded_polarisation(alg, &p, lambda)? {
        return Err(Error::Internal("graded polarisation failed certification".into()));
    }
    Ok(p)
}

/// Subalgebra, `λ([p, p]) = 0`, contains `g^λ`, and
/// `dim p_0 = (dim g_0 + dim (g^λ)_0) / 2`.
pub fn is_graded_polarisation(alg: &LieAlgebra, p: &Subspace, lambda: &SuperFunctional) -> Result<bool> {
    let f = &lambda.functional;
    let rad = radical(alg, f)?;
    let even = alg.even_indices();
    let d = alg.dim();
    let even_space = Subspace::coordinate(d, &even);
    let p0 = p.intersection(&even_space).dim();
    let rad0 = rad.intersection(&even_space).dim();
    let rows = p.basis();
    let subordinate = rows
        .iter()
        .enumerate()
        .all(|(a, u)| rows[a..].iter().all(|v| f.eval(&alg.bracket(u, v).unwrap()).is_zero()));
    Ok(alg.is_subalgebra(p) && subordinate && p.contains_subspace(&rad) && 2 * p0 == even.len() + rad0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// `λ ∈ Λ'`: the quotient is a Weyl algebra.
    Proven,
    /// `λ ∈ Λ \ Λ'`: shape read off the odd form as for a Clifford factor.
    BellMussonHeuristic,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Proven => "proven",
            Provenance::BellMussonHeuristic => "bell_musson_heuristic",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `U/P ≅ M_s(A_n)`, or `M_s(A_n) × M_s(A_n)` when `two_block`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuotientShape {
    pub s: u64,
    pub n: usize,
    pub two_block: bool,
    pub provenance: Provenance,
}

impl fmt::Display for QuotientShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let block = if self.s == 1 { format!("A_{}", self.n) } else { format!("M_{}(A_{})", self.s, self.n) };
        if self.two_block {
            write!(f, "{block} × {block}")?;
        } else {
            f.write_str(&block)?;
        }
        write!(f, ", provenance: {}", self.provenance)
    }
}

/// Rank of the symmetric form `λ([a, b])` on the odd part.
pub fn odd_form_rank(alg: &LieAlgebra, lambda: &Functional) -> usize {
    let odd = alg.odd_indices();
    let mut m = Matrix::zeros(odd.len(), odd.len());
    for (p, &a) in odd.iter().enumerate() {
        for (q, &b) in odd.iter().enumerate() {
            m[(p, q)] = alg.bracket_basis(a, b).iter().fold(Scalar::zero(), |acc, (k, c)| acc + c * &lambda.coords()[*k]);
        }
    }
    m.rank()
}

pub fn classify_quotient(alg: &LieAlgebra, lambda: &SuperFunctional) -> Result<QuotientShape> {
    check_functional(alg, &lambda.functional)?;
    if !lambda.in_lambda {
        return Err(Error::Precondition("functional does not vanish on g_1".into()));
    }
    let even = alg.even_indices();
    let g0 = alg.restrict_to_basis(&even, format!("{}_0", alg.name()))?;
    let l0 = Functional::from_coords(to_even(lambda.functional.coords(), &even));
    let n = gram_matrix(&g0, &l0)?.rank() / 2;
    if lambda.in_lambda_prime {
        return Ok(QuotientShape { s: 1, n, two_block: false, provenance: Provenance::Proven });
    }
    let d = odd_form_rank(alg, &lambda.functional);
    Ok(QuotientShape { s: 1u64 << (d / 2), n, two_block: d % 2 == 1, provenance: Provenance::BellMussonHeuristic })
}

fn unit_name(size: usize, i: usize, j: usize) -> String {
    if size <= 9 {
        format!("E{i}{j}")
    } else {
        format!("E{i}_{j}")
    }
}

/// Strictly upper triangular supermatrices `[[A, B], [0, D]]` in
/// `gl(m, n)`: `A` and `D` even, `B` odd. Basis: units of `A` (as in `n_m`),
/// then of `D`, then the `B` units row by row.
pub fn build_glmn_plus(m: usize, n: usize) -> Result<LieAlgebra> {
    if m < 1 || n < 1 {
        return Err(Error::Precondition(format!("gl(m,n)+ requires m, n >= 1, got ({m}, {n})")));
    }
    if m == n {
        return Err(Error::Precondition(format!("gl(m,n)+ requires m != n, got m = n = {m}")));
    }
    let size = m + n;
    let mut units: Vec<(usize, usize)> = if m >= 2 { n_m_units(m) } else { Vec::new() };
    if n >= 2 {
        units.extend(n_m_units(n).into_iter().map(|(i, j)| (i + m, j + m)));
    }
    let even_count = units.len();
    for i in 1..=m {
        for j in 1..=n {
            units.push((i, m + j));
        }
    }
    let parity: Vec<Parity> = (0..units.len()).map(|p| if p < even_count { Parity::Even } else { Parity::Odd }).collect();
    let index: BTreeMap<(usize, usize), usize> = units.iter().enumerate().map(|(p, &u)| (u, p)).collect();
    let names = units.iter().map(|&(i, j)| unit_name(size, i, j)).collect();
    let mut b = LieAlgebraBuilder::new(format!("gl({m},{n})+"), names).parity(parity.clone());
    for (a, &(i, j)) in units.iter().enumerate() {
        for (c, &(k, l)) in units.iter().enumerate().skip(a) {
            // [X, Y] = XY - (-1)^{|X||Y|} YX on matrix units.
            let sign = if parity[a] == Parity::Odd && parity[c] == Parity::Odd { 1 } else { -1 };
            if j == k {
                b.add(a, c, index[&(i, l)], scalar::int(1))?;
            }
            if l == i {
                b.add(a, c, index[&(k, j)], scalar::int(sign))?;
            }
        }
    }
    b.build()
}

/// Basis `x, y, z, a, b` with `[x, y] = z` and `[a, b] = [b, a] = z`.
pub fn build_super_heisenberg() -> LieAlgebra {
    let names = ["x", "y", "z", "a", "b"].map(String::from).to_vec();
    let parity = vec![Parity::Even, Parity::Even, Parity::Even, Parity::Odd, Parity::Odd];
    let mut b = LieAlgebraBuilder::new("super_heisenberg", names).parity(parity);
    b.add(0, 1, 2, scalar::int(1)).expect("valid indices");
    b.add(3, 4, 2, scalar::int(1)).expect("valid indices");
    b.build().expect("valid structure")
}

/// `s_i = (i-2)i/4` for even `i` and `(i-1)^2/4` for odd `i`: the largest
/// weight of a primitive ideal of `U(n_i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SBound {
    pub i: u64,
    pub value: u64,
}

pub fn s_bound(i: u64) -> Result<SBound> {
    if i < 1 {
        return Err(Error::Precondition("s_i requires i >= 1".into()));
    }
    let num = if i.is_multiple_of(2) { (i - 2) * i } else { (i - 1) * (i - 1) };
    if num % 4 != 0 {
        return Err(Error::Internal(format!("s_{i} is not integral")));
    }
    Ok(SBound { i, value: num / 4 })
}

/// The shipped algebra families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    NM(usize),
    GlmnPlus(usize, usize),
    SuperHeisenberg,
}

impl Family {
    pub fn build(self) -> Result<LieAlgebra> {
        match self {
            Family::NM(m) => build_n_m(m),
            Family::GlmnPlus(m, n) => build_glmn_plus(m, n),
            Family::SuperHeisenberg => Ok(build_super_heisenberg()),
        }
    }

    /// Largest weight a quotient can have.
    pub fn weight_bound(self) -> Result<u64> {
        Ok(match self {
            Family::NM(m) => s_bound(m as u64)?.value,
            Family::GlmnPlus(m, n) => s_bound(m as u64)?.value + s_bound(n as u64)?.value,
            Family::SuperHeisenberg => 1,
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::NM(m) => write!(f, "n_m:{m}"),
            Family::GlmnPlus(m, n) => write!(f, "glmn:{m},{n}"),
            Family::SuperHeisenberg => f.write_str("super_heisenberg"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// `n_m:<m>`, `glmn:<m>,<n>` or `super_heisenberg`.
    fn from_str(s: &str) -> Result<Family> {
        let bad = || Error::Parse(format!("unknown builtin algebra {s:?}"));
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        if s == "super_heisenberg" {
            return Ok(Family::SuperHeisenberg);
        }
        if let Some(m) = s.strip_prefix("n_m:") {
            return Ok(Family::NM(num(m)?));
        }
        if let Some(rest) = s.strip_prefix("glmn:") {
            let (m, n) = rest.split_once(',').ok_or_else(bad)?;
            return Ok(Family::GlmnPlus(num(m)?, num(n)?));
        }
        Err(bad())
    }
}

/// A random functional with coordinates `p/q`, `|p| <= 9`, `1 <= q <= 9`,
/// zero on the odd part.
pub fn random_lambda(alg: &LieAlgebra, rng: &mut ChaCha8Rng) -> Functional {
    let coords = alg
        .parity()
        .iter()
        .map(|p| match p {
            Parity::Even => scalar::random_small(rng, 9),
            Parity::Odd => Scalar::zero(),
        })
        .collect();
    Functional::from_coords(coords)
}

/// Per-trial generator: stream `trial` of the seeded ChaCha8 generator.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub family: Family,
    pub seed: u64,
    pub trials: usize,
    pub histogram: BTreeMap<usize, usize>,
    pub bound: u64,
}

impl AuditReport {
    pub fn max_observed(&self) -> Option<usize> {
        self.histogram.keys().next_back().copied()
    }

    pub fn attained(&self) -> Vec<usize> {
        self.histogram.keys().copied().collect()
    }

    pub fn passed(&self) -> bool {
        self.max_observed().is_none_or(|m| m as u64 <= self.bound)
    }

    pub fn render(&self) -> String {
        let mut out = format!("audit {}\nseed {}\ntrials {}\nweight count\n", self.family, self.seed, self.trials);
        for (w, c) in &self.histogram {
            out.push_str(&format!("{w} {c}\n"));
        }
        let attained: Vec<String> = self.attained().iter().map(|w| w.to_string()).collect();
        out.push_str(&format!("bound {}\n", self.bound));
        out.push_str(&format!("attained {}\n", attained.join(",")));
        out.push_str(&format!("verdict {}\n", if self.passed() { "PASS" } else { "FAIL" }));
        out
    }
}

/// Samples random `λ ∈ Λ` and records the weight `n` of each quotient.
pub fn weight_range_audit(family: Family, trials: usize, seed: u64) -> Result<AuditReport> {
    let alg = family.build()?;
    let bound = family.weight_bound()?;
    let mut histogram = BTreeMap::new();
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let lambda = random_lambda(&alg, &mut rng);
        let w = if alg.is_graded() {
            classify_quotient(&alg, &classify_lambda(&alg, &lambda)?)?.n
        } else {
            weight(&alg, &lambda)?
        };
        *histogram.entry(w).or_insert(0) += 1;
    }
    Ok(AuditReport { family, seed, trials, histogram, bound })
}
