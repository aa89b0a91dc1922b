//! Finite-dimensional (super) Lie algebras given by structure constants.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{axpy, is_zero_vec, unit_vec, zero_vec, Matrix, Subspace, Vector};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u8) -> Result<Parity> {
        match bit {
            0 => Ok(Parity::Even),
            1 => Ok(Parity::Odd),
            b => Err(Error::InvalidAlgebra(format!("parity must be 0 or 1, got {b}"))),
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn plus(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Sparse coordinate vector: `(index, coefficient)` pairs sorted by index,
/// coefficients nonzero.
pub type SparseVec = Vec<(usize, Scalar)>;

fn sparse_from_map(map: BTreeMap<usize, Scalar>) -> SparseVec {
    map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// A Lie superalgebra over `Q` with a fixed homogeneous basis.
///
/// Only brackets `[e_i, e_j]` with `i <= j` are stored; the rest follow from
/// graded antisymmetry `[e_j, e_i] = -(-1)^{p(i)p(j)} [e_i, e_j]`. With all
/// parities even this is an ordinary Lie algebra.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    name: String,
    basis_names: Vec<String>,
    parity: Vec<Parity>,
    table: Vec<SparseVec>,
    lcs: Vec<Subspace>,
    lcs_stalls: bool,
}

/// Collects brackets before the algebra is frozen.
#[derive(Clone, Debug)]
pub struct LieAlgebraBuilder {
    name: String,
    basis_names: Vec<String>,
    parity: Vec<Parity>,
    table: BTreeMap<(usize, usize), BTreeMap<usize, Scalar>>,
}

impl LieAlgebraBuilder {
    pub fn new(name: impl Into<String>, basis_names: Vec<String>) -> Self {
        let parity = vec![Parity::Even; basis_names.len()];
        LieAlgebraBuilder { name: name.into(), basis_names, parity, table: BTreeMap::new() }
    }

    pub fn parity(mut self, parity: Vec<Parity>) -> Self {
        self.parity = parity;
        self
    }

    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    /// Adds `coeff * e_k` to `[e_i, e_j]`. When `i > j` the contribution is
    /// moved to the stored slot `(j, i)` with the graded sign.
    pub fn add(&mut self, i: usize, j: usize, k: usize, coeff: Scalar) -> Result<&mut Self> {
        let dim = self.dim();
        for idx in [i, j, k] {
            if idx >= dim {
                return Err(Error::IndexOutOfRange { index: idx, dim });
            }
        }
        if coeff.is_zero() {
            return Ok(self);
        }
        let (a, b, c) = if i <= j {
            (i, j, coeff)
        } else {
            let both_odd = self.parity.get(i) == Some(&Parity::Odd) && self.parity.get(j) == Some(&Parity::Odd);
            (j, i, if both_odd { coeff } else { -coeff })
        };
        *self.table.entry((a, b)).or_default().entry(k).or_insert_with(Scalar::zero) += c;
        Ok(self)
    }

    pub fn build(self) -> Result<LieAlgebra> {
        let dim = self.basis_names.len();
        if dim == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        if self.parity.len() != dim {
            return Err(Error::InvalidAlgebra(format!(
                "parity vector has length {}, expected {dim}",
                self.parity.len()
            )));
        }
        let mut table = vec![SparseVec::new(); dim * dim];
        for ((i, j), coeffs) in self.table {
            table[i * dim + j] = sparse_from_map(coeffs);
        }
        let mut alg = LieAlgebra {
            name: self.name,
            basis_names: self.basis_names,
            parity: self.parity,
            table,
            lcs: Vec::new(),
            lcs_stalls: false,
        };
        let (lcs, stalls) = alg.compute_lcs();
        alg.lcs = lcs;
        alg.lcs_stalls = stalls;
        Ok(alg)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    /// `[e_i, e_j]` has a component along `e_k` of the wrong parity.
    Grading { i: usize, j: usize, k: usize },
    /// `[e_i, e_i] != 0` for an even basis vector.
    Antisymmetry { i: usize },
    /// The graded Jacobi identity fails on `(e_i, e_j, e_k)`.
    Jacobi { i: usize, j: usize, k: usize },
}

impl Violation {
    /// Names the offending basis elements.
    pub fn describe(&self, alg: &LieAlgebra) -> String {
        let n = |i: &usize| alg.basis_name(*i);
        match self {
            Violation::Grading { i, j, k } => format!("grading: [{}, {}] has a component on {}", n(i), n(j), n(k)),
            Violation::Antisymmetry { i } => format!("antisymmetry: [{0}, {0}] != 0", n(i)),
            Violation::Jacobi { i, j, k } => format!("jacobi: ({}, {}, {})", n(i), n(j), n(k)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub lcs_dims: Vec<usize>,
    /// Smallest `m` with `g^m = 0`, or `None` when the series stalls.
    pub nilpotency_class: Option<usize>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_valid_nilpotent(&self) -> bool {
        self.is_valid() && self.nilpotency_class.is_some()
    }
}

impl LieAlgebra {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn basis_name(&self, i: usize) -> &str {
        &self.basis_names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis_names.iter().position(|n| n == name)
    }

    pub fn parity(&self) -> &[Parity] {
        &self.parity
    }

    pub fn is_graded(&self) -> bool {
        self.parity.contains(&Parity::Odd)
    }

    pub fn even_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.parity[i] == Parity::Even).collect()
    }

    pub fn odd_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.parity[i] == Parity::Odd).collect()
    }

    fn sign_swapped(&self, i: usize, j: usize) -> bool {
        // true when [e_j, e_i] = +[e_i, e_j]
        self.parity[i] == Parity::Odd && self.parity[j] == Parity::Odd
    }

    /// Stored structure constants for `i <= j`.
    pub fn stored_bracket(&self, i: usize, j: usize) -> &SparseVec {
        assert!(i <= j);
        &self.table[i * self.dim() + j]
    }

    /// `[e_i, e_j]` as a sparse vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> SparseVec {
        if i <= j {
            self.stored_bracket(i, j).clone()
        } else if self.sign_swapped(i, j) {
            self.stored_bracket(j, i).clone()
        } else {
            self.stored_bracket(j, i).iter().map(|(k, c)| (*k, -c)).collect()
        }
    }

    /// Adds `coeff * [e_i, e_j]` into `out`.
    fn accumulate_bracket(&self, out: &mut [Scalar], coeff: &Scalar, i: usize, j: usize) {
        let (entries, negate) = if i <= j {
            (self.stored_bracket(i, j), false)
        } else {
            (self.stored_bracket(j, i), !self.sign_swapped(i, j))
        };
        for (k, c) in entries {
            if negate {
                out[*k] -= coeff * c;
            } else {
                out[*k] += coeff * c;
            }
        }
    }

    pub fn check_len(&self, v: &[Scalar]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        Ok(())
    }

    /// Bilinear extension of the structure table.
    pub fn bracket(&self, u: &[Scalar], v: &[Scalar]) -> Result<Vector> {
        self.check_len(u)?;
        self.check_len(v)?;
        Ok(self.bracket_unchecked(u, v))
    }

    pub(crate) fn bracket_unchecked(&self, u: &[Scalar], v: &[Scalar]) -> Vector {
        let mut out = zero_vec(self.dim());
        for (i, ui) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, vj) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                self.accumulate_bracket(&mut out, &(ui * vj), i, j);
            }
        }
        out
    }

    /// `[e_i, v]`.
    pub fn bracket_with_basis(&self, i: usize, v: &[Scalar]) -> Vector {
        let mut out = zero_vec(self.dim());
        for (j, vj) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            self.accumulate_bracket(&mut out, vj, i, j);
        }
        out
    }

    /// Matrix of `ad x`: column `i` holds `[x, e_i]`.
    pub fn ad_matrix(&self, x: &[Scalar]) -> Result<Matrix> {
        self.check_len(x)?;
        let d = self.dim();
        let mut m = Matrix::zeros(d, d);
        for i in 0..d {
            let col = self.bracket_unchecked(x, &unit_vec(d, i));
            for (k, c) in col.into_iter().enumerate() {
                m[(k, i)] = c;
            }
        }
        Ok(m)
    }

    fn compute_lcs(&self) -> (Vec<Subspace>, bool) {
        let d = self.dim();
        let mut series = vec![Subspace::full(d)];
        loop {
            let last = series.last().unwrap();
            if last.is_zero() {
                return (series, false);
            }
            let next = Subspace::span(
                d,
                (0..d).flat_map(|a| last.basis().iter().map(move |r| (a, r))).map(|(a, r)| self.bracket_with_basis(a, r)),
            );
            if &next == last {
                return (series, true);
            }
            series.push(next);
        }
    }

    /// `g = g^0 ⊇ g^1 = [g, g] ⊇ ... `, ending at `0` for nilpotent algebras or
    /// at the first repeated term otherwise.
    pub fn lower_central_series(&self) -> &[Subspace] {
        &self.lcs
    }

    pub fn nilpotency_class(&self) -> Option<usize> {
        if self.lcs_stalls {
            None
        } else {
            Some(self.lcs.len() - 1)
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        !self.lcs_stalls
    }

    pub fn require_nilpotent(&self) -> Result<()> {
        if self.is_nilpotent() {
            Ok(())
        } else {
            Err(Error::NotNilpotent)
        }
    }

    /// Position of `v` in the lower central series: the largest `i` with
    /// `v ∈ g^i`.
    pub fn lcs_depth(&self, v: &[Scalar]) -> usize {
        self.lcs.iter().rposition(|s| s.contains(v)).unwrap_or(0)
    }

    /// `{x : [x, g] = 0}`.
    pub fn center(&self) -> Subspace {
        let d = self.dim();
        // Rows indexed by (j, k), columns by i: coefficient of e_k in [e_i, e_j].
        let mut m = Matrix::zeros(d * d, d);
        for i in 0..d {
            for j in 0..d {
                for (k, c) in self.bracket_basis(i, j) {
                    m[(j * d + k, i)] = c;
                }
            }
        }
        Subspace::span(d, m.kernel())
    }

    pub fn is_subalgebra(&self, s: &Subspace) -> bool {
        assert_eq!(s.ambient_dim(), self.dim());
        let rows = s.basis();
        for (a, u) in rows.iter().enumerate() {
            for v in &rows[a..] {
                if !s.contains(&self.bracket_unchecked(u, v)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_ideal(&self, s: &Subspace) -> bool {
        assert_eq!(s.ambient_dim(), self.dim());
        (0..self.dim()).all(|a| s.basis().iter().all(|r| s.contains(&self.bracket_with_basis(a, r))))
    }

    /// Span of all brackets between the two subspaces.
    pub fn bracket_span(&self, a: &Subspace, b: &Subspace) -> Subspace {
        Subspace::span(
            self.dim(),
            a.basis().iter().flat_map(|u| b.basis().iter().map(move |v| (u, v))).map(|(u, v)| self.bracket_unchecked(u, v)),
        )
    }

    /// Checks the axioms and reports nilpotency. Violations are report content,
    /// never errors.
    pub fn validate(&self) -> ValidationReport {
        let d = self.dim();
        let mut violations = Vec::new();
        for i in 0..d {
            for j in i..d {
                let expected = self.parity[i].plus(self.parity[j]);
                for (k, _) in self.stored_bracket(i, j) {
                    if self.parity[*k] != expected {
                        violations.push(Violation::Grading { i, j, k: *k });
                    }
                }
            }
            if self.parity[i] == Parity::Even && !self.stored_bracket(i, i).is_empty() {
                violations.push(Violation::Antisymmetry { i });
            }
        }
        let mut jacobi = BTreeSet::new();
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    if !self.jacobiator_basis(a, b, c).iter().all(Zero::is_zero) {
                        let mut t = [a, b, c];
                        t.sort_unstable();
                        jacobi.insert(t);
                    }
                }
            }
        }
        violations.extend(jacobi.into_iter().map(|[i, j, k]| Violation::Jacobi { i, j, k }));
        ValidationReport {
            violations,
            lcs_dims: self.lcs.iter().map(Subspace::dim).collect(),
            nilpotency_class: self.nilpotency_class(),
        }
    }

    /// `[a,[b,c]] - [[a,b],c] - (-1)^{|a||b|} [b,[a,c]]` on basis vectors.
    pub fn jacobiator_basis(&self, a: usize, b: usize, c: usize) -> Vector {
        let d = self.dim();
        let bc = self.bracket_basis_dense(b, c);
        let ab = self.bracket_basis_dense(a, b);
        let ac = self.bracket_basis_dense(a, c);
        let mut out = self.bracket_with_basis(a, &bc);
        let ab_c = self.bracket_unchecked(&ab, &unit_vec(d, c));
        let b_ac = self.bracket_with_basis(b, &ac);
        let sign = if self.parity[a] == Parity::Odd && self.parity[b] == Parity::Odd {
            Scalar::from_integer(1.into())
        } else {
            Scalar::from_integer((-1).into())
        };
        for k in 0..d {
            out[k] -= &ab_c[k];
        }
        axpy(&mut out, &sign, &b_ac);
        out
    }

    fn bracket_basis_dense(&self, i: usize, j: usize) -> Vector {
        let mut v = zero_vec(self.dim());
        for (k, c) in self.bracket_basis(i, j) {
            v[k] = c;
        }
        v
    }

    /// The subalgebra spanned by the listed basis vectors, as an algebra in
    /// its own right. Fails when the span is not closed under the bracket.
    pub fn restrict_to_basis(&self, indices: &[usize], name: impl Into<String>) -> Result<LieAlgebra> {
        let pos: BTreeMap<usize, usize> = indices.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let names = indices.iter().map(|&i| self.basis_names[i].clone()).collect();
        let mut b = LieAlgebraBuilder::new(name, names).parity(indices.iter().map(|&i| self.parity[i]).collect());
        for (pa, &a) in indices.iter().enumerate() {
            for (pb, &bb) in indices.iter().enumerate().skip(pa) {
                for (k, c) in self.stored_bracket(a.min(bb), a.max(bb)) {
                    let Some(&pk) = pos.get(k) else {
                        return Err(Error::Precondition(format!(
                            "basis span is not closed: [{}, {}] leaves it",
                            self.basis_names[a], self.basis_names[bb]
                        )));
                    };
                    b.add(pa, pb, pk, c.clone())?;
                }
            }
        }
        b.build()
    }

    /// Renders a vector as `c·name + ...`.
    pub fn format_vector(&self, v: &[Scalar]) -> String {
        if is_zero_vec(v) {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let neg = c.is_negative();
            match (out.is_empty(), neg) {
                (true, true) => out.push('−'),
                (true, false) => {}
                (false, true) => out.push_str(" − "),
                (false, false) => out.push_str(" + "),
            }
            out.push_str(&format!("{}·{}", crate::scalar::render(&c.abs()), self.basis_names[i]));
        }
        out
    }
}

impl fmt::Display for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (dim {})", self.name, self.dim())?;
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let br = self.stored_bracket(i, j);
                if br.is_empty() {
                    continue;
                }
                let mut v = zero_vec(self.dim());
                for (k, c) in br {
                    v[*k] = c.clone();
                }
                writeln!(f, "  [{}, {}] = {}", self.basis_names[i], self.basis_names[j], self.format_vector(&v))?;
            }
        }
        Ok(())
    }
}

fn matrix_unit_name(m: usize, i: usize, j: usize) -> String {
    if m <= 9 {
        format!("E{i}{j}")
    } else {
        format!("E{i}_{j}")
    }
}

/// Basis of `n_m` as matrix units `E_ij` (1-based, `i < j`), ordered by
/// superdiagonal and then by row: `E12, E23, ..., E13, E24, ..., E1m`.
pub fn n_m_units(m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for gap in 1..m {
        for i in 1..=(m - gap) {
            out.push((i, i + gap));
        }
    }
    out
}

/// Strictly upper triangular `m × m` matrices under the commutator.
pub fn build_n_m(m: usize) -> Result<LieAlgebra> {
    if m < 2 {
        return Err(Error::Precondition(format!("n_m requires m >= 2, got {m}")));
    }
    let units = n_m_units(m);
    let index: BTreeMap<(usize, usize), usize> = units.iter().enumerate().map(|(p, &u)| (u, p)).collect();
    let names = units.iter().map(|&(i, j)| matrix_unit_name(m, i, j)).collect();
    let mut b = LieAlgebraBuilder::new(format!("n_{m}"), names);
    for (a, &(i, j)) in units.iter().enumerate() {
        for (c, &(k, l)) in units.iter().enumerate().skip(a) {
            // [E_ij, E_kl] = δ_jk E_il - δ_li E_kj
            if j == k {
                b.add(a, c, index[&(i, l)], Scalar::from_integer(1.into()))?;
            }
            if l == i {
                b.add(a, c, index[&(k, j)], Scalar::from_integer((-1).into()))?;
            }
        }
    }
    b.build()
}

/// The abelian algebra of the given dimension.
pub fn build_abelian(dim: usize) -> Result<LieAlgebra> {
    LieAlgebraBuilder::new(format!("abelian_{dim}"), (1..=dim).map(|i| format!("a{i}")).collect()).build()
}
