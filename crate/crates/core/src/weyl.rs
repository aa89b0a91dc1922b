//! Polynomials in `t_1..t_r` and normal-ordered differential operators
//! `Σ c · t^a ∂^b` (the Weyl algebra `A_r` with `[∂_i, t_i] = 1`).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

pub type MultiIndex = Vec<u32>;

pub fn total_degree(a: &[u32]) -> u32 {
    a.iter().sum()
}

/// All multi-indices in `r` variables with total degree at most `max`,
/// ordered by total degree and then lexicographically.
pub fn monomials_up_to(r: usize, max: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for deg in 0..=max {
        let mut cur = vec![0u32; r];
        fill(&mut cur, 0, deg, &mut out);
    }
    out
}

fn fill(cur: &mut MultiIndex, pos: usize, left: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 >= cur.len() {
        if let Some(last) = cur.last_mut() {
            *last = left;
            out.push(cur.clone());
        } else if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for k in (0..=left).rev() {
        cur[pos] = k;
        fill(cur, pos + 1, left - k, out);
    }
    cur[pos] = 0;
}

fn sort_key(a: &[u32]) -> (u32, Vec<std::cmp::Reverse<u32>>) {
    (total_degree(a), a.iter().map(|&x| std::cmp::Reverse(x)).collect())
}

fn render_monomial(letter: &str, a: &[u32], out: &mut String) {
    for (i, &e) in a.iter().enumerate() {
        match e {
            0 => {}
            1 => out.push_str(&format!("{letter}{}", i + 1)),
            _ => out.push_str(&format!("{letter}{}^{e}", i + 1)),
        }
    }
}

fn render_terms<'a, I>(terms: I, zero_text: &str) -> String
where
    I: Iterator<Item = (String, &'a Scalar)>,
{
    let mut out = String::new();
    for (mono, c) in terms {
        let neg = c.is_negative();
        if out.is_empty() {
            if neg {
                out.push('−');
            }
        } else {
            out.push_str(if neg { " − " } else { " + " });
        }
        out.push_str(&scalar::render(&c.abs()));
        if !mono.is_empty() {
            out.push('·');
            out.push_str(&mono);
        }
    }
    if out.is_empty() {
        zero_text.to_string()
    } else {
        out
    }
}

fn add_into<K: Ord>(map: &mut BTreeMap<K, Scalar>, key: K, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// A polynomial in `r` commuting variables; `t^a` stands for the PBW
/// monomial `e^a ⊗ v` of an induced module.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    vars: usize,
    terms: BTreeMap<MultiIndex, Scalar>,
}

impl Poly {
    pub fn zero(vars: usize) -> Self {
        Poly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: usize, c: Scalar) -> Self {
        Self::monomial(vars, vec![0; vars], c)
    }

    pub fn monomial(vars: usize, a: MultiIndex, c: Scalar) -> Self {
        assert_eq!(a.len(), vars);
        let mut p = Self::zero(vars);
        add_into(&mut p.terms, a, c);
        p
    }

    /// The variable `t_i` (0-based).
    pub fn var(vars: usize, i: usize) -> Self {
        let mut a = vec![0; vars];
        a[i] = 1;
        Self::monomial(vars, a, Scalar::one())
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, a: &[u32]) -> Scalar {
        self.terms.get(a).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|a| total_degree(a)).max()
    }

    pub fn add_term(&mut self, a: MultiIndex, c: Scalar) {
        debug_assert_eq!(a.len(), self.vars);
        add_into(&mut self.terms, a, c);
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &Poly) {
        assert_eq!(self.vars, other.vars);
        if c.is_zero() {
            return;
        }
        for (a, x) in &other.terms {
            add_into(&mut self.terms, a.clone(), c * x);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(&Scalar::one(), other);
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(&-Scalar::one(), other);
        out
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        let mut out = Poly::zero(self.vars);
        out.add_scaled(c, self);
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.vars, other.vars);
        let mut out = Poly::zero(self.vars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let ab = a.iter().zip(b).map(|(p, q)| p + q).collect();
                add_into(&mut out.terms, ab, x * y);
            }
        }
        out
    }

    /// `∂/∂t_i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.vars);
        for (a, x) in &self.terms {
            if a[i] > 0 {
                let mut b = a.clone();
                b[i] -= 1;
                add_into(&mut out.terms, b, x * scalar::int(a[i] as i64));
            }
        }
        out
    }

    /// `t^a ∂^b` applied to `self`.
    fn apply_term(&self, a: &[u32], b: &[u32], c: &Scalar, out: &mut Poly) {
        for (m, x) in &self.terms {
            if m.iter().zip(b).any(|(mi, bi)| mi < bi) {
                continue;
            }
            let mut coeff = c * x;
            let mut res = Vec::with_capacity(m.len());
            for i in 0..m.len() {
                coeff *= scalar::falling(m[i], b[i]);
                res.push(m[i] - b[i] + a[i]);
            }
            add_into(&mut out.terms, res, coeff);
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<&MultiIndex> = self.terms.keys().collect();
        keys.sort_by_key(|a| sort_key(a));
        let terms = keys.into_iter().map(|a| {
            let mut mono = String::new();
            render_monomial("t", a, &mut mono);
            (mono, &self.terms[a])
        });
        f.write_str(&render_terms(terms, "0"))
    }
}

/// A normal-ordered element `Σ c · t^a ∂^b` of the Weyl algebra on `r`
/// variables. The map key is `(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    vars: usize,
    terms: BTreeMap<(MultiIndex, MultiIndex), Scalar>,
}

impl WeylElement {
    pub fn zero(vars: usize) -> Self {
        WeylElement { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: usize, c: Scalar) -> Self {
        Self::term(vars, vec![0; vars], vec![0; vars], c)
    }

    pub fn identity(vars: usize) -> Self {
        Self::constant(vars, Scalar::one())
    }

    pub fn term(vars: usize, a: MultiIndex, b: MultiIndex, c: Scalar) -> Self {
        assert_eq!(a.len(), vars);
        assert_eq!(b.len(), vars);
        let mut w = Self::zero(vars);
        add_into(&mut w.terms, (a, b), c);
        w
    }

    /// Multiplication by `t_i`.
    pub fn t(vars: usize, i: usize) -> Self {
        let mut a = vec![0; vars];
        a[i] = 1;
        Self::term(vars, a, vec![0; vars], Scalar::one())
    }

    /// `∂/∂t_i`.
    pub fn d(vars: usize, i: usize) -> Self {
        let mut b = vec![0; vars];
        b[i] = 1;
        Self::term(vars, vec![0; vars], b, Scalar::one())
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> &BTreeMap<(MultiIndex, MultiIndex), Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the element is `c · 1`.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let ((a, b), c) = self.terms.iter().next().unwrap();
                (total_degree(a) == 0 && total_degree(b) == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Largest total degree in `∂`.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|(_, b)| total_degree(b)).max()
    }

    pub fn add_term(&mut self, a: MultiIndex, b: MultiIndex, c: Scalar) {
        debug_assert_eq!(a.len(), self.vars);
        debug_assert_eq!(b.len(), self.vars);
        add_into(&mut self.terms, (a, b), c);
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &WeylElement) {
        assert_eq!(self.vars, other.vars);
        if c.is_zero() {
            return;
        }
        for (k, x) in &other.terms {
            add_into(&mut self.terms, k.clone(), c * x);
        }
    }

    pub fn add(&self, other: &WeylElement) -> WeylElement {
        let mut out = self.clone();
        out.add_scaled(&Scalar::one(), other);
        out
    }

    pub fn sub(&self, other: &WeylElement) -> WeylElement {
        let mut out = self.clone();
        out.add_scaled(&-Scalar::one(), other);
        out
    }

    pub fn scale(&self, c: &Scalar) -> WeylElement {
        let mut out = WeylElement::zero(self.vars);
        out.add_scaled(c, self);
        out
    }

    /// Product in normal order, using `∂^b t^c = Σ_k C(b,k) c!/(c-k)! t^(c-k) ∂^(b-k)`
    /// in each variable.
    pub fn mul(&self, other: &WeylElement) -> WeylElement {
        assert_eq!(self.vars, other.vars);
        let r = self.vars;
        let mut out = WeylElement::zero(r);
        for ((a1, b1), x) in &self.terms {
            for ((a2, b2), y) in &other.terms {
                // Per variable: list of (k, coefficient).
                let per_var: Vec<Vec<(u32, Scalar)>> = (0..r)
                    .map(|i| {
                        (0..=b1[i].min(a2[i]))
                            .map(|k| (k, scalar::binomial(b1[i], k) * scalar::falling(a2[i], k)))
                            .collect()
                    })
                    .collect();
                let mut ks = vec![0usize; r];
                loop {
                    let mut coeff = x * y;
                    let mut a = Vec::with_capacity(r);
                    let mut b = Vec::with_capacity(r);
                    for i in 0..r {
                        let (k, c) = &per_var[i][ks[i]];
                        coeff *= c;
                        a.push(a1[i] + a2[i] - k);
                        b.push(b1[i] - k + b2[i]);
                    }
                    add_into(&mut out.terms, (a, b), coeff);
                    // Odometer over the k's.
                    let mut i = 0;
                    while i < r {
                        ks[i] += 1;
                        if ks[i] < per_var[i].len() {
                            break;
                        }
                        ks[i] = 0;
                        i += 1;
                    }
                    if i == r {
                        break;
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &WeylElement) -> WeylElement {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn apply(&self, q: &Poly) -> Result<Poly> {
        if q.vars() != self.vars {
            return Err(Error::DimensionMismatch { expected: self.vars, got: q.vars() });
        }
        let mut out = Poly::zero(self.vars);
        for ((a, b), c) in &self.terms {
            q.apply_term(a, b, c, &mut out);
        }
        Ok(out)
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<&(MultiIndex, MultiIndex)> = self.terms.keys().collect();
        keys.sort_by_key(|(a, b)| {
            let ab: Vec<u32> = a.iter().chain(b.iter()).copied().collect();
            (total_degree(&ab), sort_key(a), sort_key(b))
        });
        let terms = keys.into_iter().map(|k| {
            let mut mono = String::new();
            render_monomial("t", &k.0, &mut mono);
            render_monomial("∂", &k.1, &mut mono);
            (mono, &self.terms[k])
        });
        f.write_str(&render_terms(terms, "0"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    #[test]
    fn canonical_relation() {
        for r in 1..=3 {
            for i in 0..r {
                for j in 0..r {
                    let c = WeylElement::d(r, i).commutator(&WeylElement::t(r, j));
                    let expected = if i == j { WeylElement::identity(r) } else { WeylElement::zero(r) };
                    assert_eq!(c, expected);
                }
            }
        }
    }

    #[test]
    fn product_d2_t2() {
        // ∂² t² = t² ∂² + 4 t ∂ + 2
        let d2 = WeylElement::term(1, vec![0], vec![2], int(1));
        let t2 = WeylElement::term(1, vec![2], vec![0], int(1));
        let mut expected = WeylElement::term(1, vec![2], vec![2], int(1));
        expected.add_term(vec![1], vec![1], int(4));
        expected.add_term(vec![0], vec![0], int(2));
        assert_eq!(d2.mul(&t2), expected);
    }

    #[test]
    fn apply_matches_product() {
        let op = WeylElement::term(2, vec![1, 0], vec![0, 2], frac(3, 2));
        let q = Poly::monomial(2, vec![2, 3], int(1));
        let out = op.apply(&q).unwrap();
        assert_eq!(out, Poly::monomial(2, vec![3, 1], int(9)));
        assert!(op.apply(&Poly::zero(1)).is_err());
    }

    #[test]
    fn monomial_enumeration() {
        let m = monomials_up_to(2, 2);
        assert_eq!(m, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomials_up_to(0, 3), vec![Vec::<u32>::new()]);
        assert_eq!(monomials_up_to(3, 4).len(), 35);
    }

    #[test]
    fn rendering() {
        let mut w = WeylElement::t(2, 0);
        w.add_term(vec![2, 0], vec![0, 1], frac(-2, 3));
        assert_eq!(w.to_string(), "1·t1 − 2/3·t1^2∂2");
        assert_eq!(WeylElement::d(1, 0).scale(&int(-1)).to_string(), "−1·∂1");
        assert_eq!(WeylElement::constant(1, int(1)).to_string(), "1");
        assert_eq!(WeylElement::zero(1).to_string(), "0");
        let mut p = Poly::monomial(2, vec![0, 1], int(1));
        p.add_term(vec![0, 0], int(-5));
        p.add_term(vec![1, 0], int(2));
        assert_eq!(p.to_string(), "−5 + 2·t1 + 1·t2");
    }

    #[test]
    fn derivative_and_scalar() {
        let p = Poly::monomial(1, vec![3], int(2));
        assert_eq!(p.derivative(0), Poly::monomial(1, vec![2], int(6)));
        assert_eq!(WeylElement::constant(2, int(4)).as_scalar(), Some(int(4)));
        assert_eq!(WeylElement::t(2, 1).as_scalar(), None);
    }
}
