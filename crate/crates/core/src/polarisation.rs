//! Subordinate subalgebras, Vergne polarisations, and the affine slices
//! `f + k^⊤` with their intersection against a coadjoint orbit.

use std::fmt;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::LieAlgebra;
use crate::coadjoint::{
    check_functional, gram_matrix, orbit_dim, orbit_is_central_fibre, orbit_relation, radical, Functional,
    OrbitRelation,
};
use crate::error::{Error, Result};
use crate::linalg::{add_vec, axpy, zero_vec, Matrix, Subspace};
use crate::scalar;

fn check_subspace(alg: &LieAlgebra, s: &Subspace) -> Result<()> {
    if s.ambient_dim() != alg.dim() {
        return Err(Error::DimensionMismatch { expected: alg.dim(), got: s.ambient_dim() });
    }
    Ok(())
}

/// Whether `f` vanishes on `[k, k]`. The subspace must be a subalgebra.
pub fn is_subordinate(alg: &LieAlgebra, k: &Subspace, f: &Functional) -> Result<bool> {
    check_subspace(alg, k)?;
    check_functional(alg, f)?;
    if !alg.is_subalgebra(k) {
        return Err(Error::Precondition("subspace is not a subalgebra".into()));
    }
    Ok(vanishes_on_brackets(alg, k, f))
}

fn vanishes_on_brackets(alg: &LieAlgebra, k: &Subspace, f: &Functional) -> bool {
    let rows = k.basis();
    rows.iter()
        .enumerate()
        .all(|(a, u)| rows[a + 1..].iter().all(|v| f.eval(&alg.bracket_unchecked(u, v)).is_zero()))
}

/// Refines an increasing chain of ideals `0 ⊂ I_1 ⊂ ... ⊂ g` into a full
/// flag `g_1 ⊂ ... ⊂ g_dim`, adding the echelon rows of each larger term in
/// pivot order.
pub fn refine_chain(alg: &LieAlgebra, chain: &[Subspace]) -> Vec<Subspace> {
    let d = alg.dim();
    let mut current = Subspace::zero(d);
    let mut flag = Vec::with_capacity(d);
    for term in chain.iter().chain(std::iter::once(&Subspace::full(d))) {
        for row in term.basis() {
            if !current.contains(row) {
                current = current.sum(&Subspace::span(d, [row.clone()]));
                flag.push(current.clone());
            }
        }
    }
    flag
}

/// The lower central series read bottom-up and refined to a full flag of
/// ideals.
pub fn default_flag(alg: &LieAlgebra) -> Result<Vec<Subspace>> {
    alg.require_nilpotent()?;
    let chain: Vec<Subspace> = alg.lower_central_series().iter().rev().cloned().collect();
    Ok(refine_chain(alg, &chain))
}

/// Checks that `flag` is `g_1 ⊂ ... ⊂ g_dim` (a leading zero term is allowed)
/// with every member an ideal.
pub fn validate_flag(alg: &LieAlgebra, flag: &[Subspace]) -> Result<()> {
    let d = alg.dim();
    let members: Vec<&Subspace> = flag.iter().filter(|s| !s.is_zero()).collect();
    if members.len() != d {
        return Err(Error::InvalidFlag(format!("expected {d} nonzero members, got {}", members.len())));
    }
    let mut prev = Subspace::zero(d);
    for (i, s) in members.iter().enumerate() {
        check_subspace(alg, s)?;
        if s.dim() != i + 1 {
            return Err(Error::InvalidFlag(format!("member {} has dimension {}, expected {}", i + 1, s.dim(), i + 1)));
        }
        if !s.contains_subspace(&prev) {
            return Err(Error::InvalidFlag(format!("member {} does not contain its predecessor", i + 1)));
        }
        if !alg.is_ideal(s) {
            return Err(Error::InvalidFlag(format!("member {} is not an ideal", i + 1)));
        }
        prev = (*s).clone();
    }
    Ok(())
}

/// `{x ∈ h : f([x, h]) = 0}` for a subspace `h`.
pub(crate) fn restricted_radical(gram: &Matrix, h: &Subspace) -> Vec<crate::linalg::Vector> {
    let b = h.matrix();
    let restricted = b.mul(gram).mul(&b.transpose());
    restricted
        .left_kernel()
        .into_iter()
        .map(|c| {
            let mut v = zero_vec(h.ambient_dim());
            for (ci, row) in c.iter().zip(h.basis()) {
                axpy(&mut v, ci, row);
            }
            v
        })
        .collect()
}

/// Vergne's construction: `p = Σ_i rad(f|g_i)` along a flag of ideals. The
/// result is certified with [`is_polarisation`] before it is returned.
pub fn vergne_polarisation(alg: &LieAlgebra, f: &Functional, flag: Option<&[Subspace]>) -> Result<Subspace> {
    let gram = gram_matrix(alg, f)?;
    let owned;
    let flag = match flag {
        Some(fl) => {
            validate_flag(alg, fl)?;
            fl
        }
        None => {
            owned = default_flag(alg)?;
            &owned[..]
        }
    };
    let d = alg.dim();
    let p = Subspace::span(d, flag.iter().flat_map(|g_i| restricted_radical(&gram.matrix, g_i)));
    if !is_polarisation(alg, &p, f)? {
        return Err(Error::Internal("Vergne construction did not produce a polarisation".into()));
    }
    Ok(p)
}

/// Subalgebra, subordinate to `f`, of dimension `(dim g + dim g^f) / 2`, and
/// containing `g^f`.
pub fn is_polarisation(alg: &LieAlgebra, p: &Subspace, f: &Functional) -> Result<bool> {
    check_subspace(alg, p)?;
    let rad = radical(alg, f)?;
    let total = alg.dim() + rad.dim();
    Ok(total.is_multiple_of(2)
        && p.dim() == total / 2
        && alg.is_subalgebra(p)
        && vanishes_on_brackets(alg, p, f)
        && p.contains_subspace(&rad))
}

/// The affine subspace `f + k^⊤ = {λ : λ|k = f|k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSlice {
    pub base: Functional,
    pub annihilated: Subspace,
    pub dim: usize,
    /// Always true: an affine space has one irreducible component.
    pub irreducible: bool,
}

impl AffineSlice {
    pub fn contains(&self, h: &Functional) -> bool {
        self.annihilated.basis().iter().all(|v| h.eval(v) == self.base.eval(v))
    }
}

pub fn affine_slice(alg: &LieAlgebra, f: &Functional, k: &Subspace) -> Result<AffineSlice> {
    check_functional(alg, f)?;
    check_subspace(alg, k)?;
    Ok(AffineSlice { base: f.clone(), annihilated: k.clone(), dim: k.codim(), irreducible: true })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SliceStatus {
    LagrangianUniqueModule,
    Empty,
    NotLagrangian,
    Inconclusive,
}

impl SliceStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SliceStatus::LagrangianUniqueModule => "lagrangian_unique_module",
            SliceStatus::Empty => "empty",
            SliceStatus::NotLagrangian => "not_lagrangian",
            SliceStatus::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for SliceStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Verdict on `Z = Ω ∩ (f + k^⊤)` where `Ω` is the orbit through `orbit_of`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceVerdict {
    pub status: SliceStatus,
    pub detail: String,
    /// `Some(1)` exactly for [`SliceStatus::LagrangianUniqueModule`].
    pub module_count: Option<usize>,
    pub slice_dim: usize,
    pub orbit_dim: usize,
    /// `dim Z` when it was computed exactly.
    pub intersection_dim: Option<usize>,
}

/// Decides the cases with an exact argument and answers `Inconclusive`
/// otherwise.
///
/// * If `Ω` is a point or the whole central-character fibre
///   `{h : h|z = g|z}`, then `Z` is an intersection of affine spaces; it is
///   computed outright, and being lagrangian is equivalent to
///   `dim Z = dim Ω / 2`.
/// * If `k` is a polarisation of `f`, then `f + k^⊤ ⊆ Ω_f`, so `Z` is the
///   whole slice when `Ω = Ω_f` and empty when the orbits differ.
/// * A central element of `k` on which `f` and `orbit_of` disagree empties
///   `Z`; `k = 0` gives `Z = Ω`.
pub fn slice_verdict(alg: &LieAlgebra, f: &Functional, k: &Subspace, orbit_of: &Functional) -> Result<SliceVerdict> {
    alg.require_nilpotent()?;
    check_functional(alg, orbit_of)?;
    if !is_subordinate(alg, k, f)? {
        return Err(Error::Precondition("f does not vanish on [k, k]".into()));
    }
    let slice = affine_slice(alg, f, k)?;
    let omega = orbit_dim(alg, orbit_of)?;
    let half = omega / 2;
    let verdict = |status: SliceStatus, detail: String, intersection_dim: Option<usize>| SliceVerdict {
        status,
        module_count: (status == SliceStatus::LagrangianUniqueModule).then_some(1),
        detail,
        slice_dim: slice.dim,
        orbit_dim: omega,
        intersection_dim,
    };
    let exact = |zdim: Option<usize>, what: &str| match zdim {
        None => verdict(SliceStatus::Empty, format!("{what}: the slice misses the orbit"), None),
        Some(z) if z == half => verdict(
            SliceStatus::LagrangianUniqueModule,
            format!("{what}: Z is affine of dimension {z} = dim Ω / 2"),
            Some(z),
        ),
        Some(z) => verdict(
            SliceStatus::NotLagrangian,
            format!("{what}: Z is affine of dimension {z}, dim Ω / 2 = {half}"),
            Some(z),
        ),
    };

    let center = alg.center();
    if omega == 0 {
        let z = slice.contains(orbit_of).then_some(0);
        return Ok(exact(z, "point orbit"));
    }
    if orbit_is_central_fibre(alg, orbit_of)? {
        let consistent = center
            .intersection(k)
            .basis()
            .iter()
            .all(|v| f.eval(v) == orbit_of.eval(v));
        let z = consistent.then(|| alg.dim() - center.sum(k).dim());
        return Ok(exact(z, "orbit is the central-character fibre"));
    }

    if is_polarisation(alg, k, f)? {
        return Ok(match orbit_relation(alg, f, orbit_of)? {
            OrbitRelation::Same { .. } => verdict(
                SliceStatus::LagrangianUniqueModule,
                format!("k is a polarisation of f and Ω = Ω_f: Z = f + k^⊤ of dimension {}", slice.dim),
                Some(slice.dim),
            ),
            OrbitRelation::Different { reason } => verdict(
                SliceStatus::Empty,
                format!("k is a polarisation of f, so f + k^⊤ lies in Ω_f, which differs from Ω ({reason})"),
                None,
            ),
            OrbitRelation::Unknown => verdict(
                SliceStatus::Inconclusive,
                "k is a polarisation of f but orbit equality could not be decided".into(),
                None,
            ),
        });
    }
    if let Some(v) = center.intersection(k).basis().iter().find(|v| f.eval(v) != orbit_of.eval(v)) {
        return Ok(verdict(
            SliceStatus::Empty,
            format!("central element {} takes different values on f and Ω", alg.format_vector(v)),
            None,
        ));
    }
    if k.is_zero() {
        return Ok(verdict(SliceStatus::NotLagrangian, "k = 0, so Z = Ω".into(), Some(omega)));
    }
    Ok(verdict(
        SliceStatus::Inconclusive,
        format!("slice dimension {}, dim Ω / 2 = {half}; Z not computed", slice.dim),
        None,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InclusionVerdict {
    Confirmed,
    Refuted { witness: Functional },
    Inconclusive,
}

/// Checks `f + p^⊤ ⊆ Ω_f`. Exact when `Ω_f` is the central-character fibre;
/// otherwise tests `samples` seeded random points of the slice with
/// [`orbit_relation`].
pub fn slice_in_orbit(alg: &LieAlgebra, f: &Functional, p: &Subspace, samples: usize, seed: u64) -> Result<InclusionVerdict> {
    let slice = affine_slice(alg, f, p)?;
    if orbit_is_central_fibre(alg, f)? {
        let center = alg.center();
        return Ok(if p.contains_subspace(&center) {
            InclusionVerdict::Confirmed
        } else {
            let z = center.basis().iter().find(|z| !p.contains(z)).unwrap().clone();
            // Shift f along a direction of p^⊤ that does not vanish on z.
            let ann = p.annihilator();
            let dir = ann.basis().iter().find(|l| !crate::linalg::dot(l, &z).is_zero()).unwrap();
            InclusionVerdict::Refuted { witness: Functional::from_coords(add_vec(f.coords(), dir)) }
        });
    }
    let ann = slice.annihilated.annihilator();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all_same = true;
    for _ in 0..samples {
        let mut h = f.coords().to_vec();
        for row in ann.basis() {
            axpy(&mut h, &scalar::random_small(&mut rng, 9), row);
        }
        let h = Functional::from_coords(h);
        match orbit_relation(alg, f, &h)? {
            OrbitRelation::Same { .. } => {}
            OrbitRelation::Different { .. } => return Ok(InclusionVerdict::Refuted { witness: h }),
            OrbitRelation::Unknown => all_same = false,
        }
    }
    Ok(if all_same { InclusionVerdict::Confirmed } else { InclusionVerdict::Inconclusive })
}
