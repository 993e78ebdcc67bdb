//! Restricted roots of the ℤ/2-grading attached to the pinned involution, and
//! the torus-character bookkeeping built on them.

mod exponent;
mod zeta;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, SpanError};
use crate::rootsystem::{height, permute, pinned_automorphism, Family, Root, RootSystem};
use crate::Q;

pub use exponent::{BasisMismatch, ExponentVector};
pub use zeta::{zeta, zeta_product};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VinbergError {
    #[error("{what}: {source}")]
    Span { what: &'static str, source: SpanError },
    #[error("basis vector {name} has length {len}, rank is {rank}")]
    BasisLength { name: String, len: usize, rank: usize },
    #[error("basis element {0} is not a root")]
    NotARoot(String),
    #[error("zeta argument r[{index}] + 1 = {value} is outside the half-plane of convergence")]
    ZetaDomain { index: usize, value: Q },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CaseTag {
    GOnly,
    VOnly,
    Split,
}

/// A ϑ-orbit of roots together with its image in the restricted character
/// lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictedRoot {
    /// One or two roots, sorted.
    pub orbit: Vec<Root>,
    /// The ϑ-average of the orbit, in simple-root coordinates.
    pub image: Vec<Q>,
    pub case_tag: CaseTag,
    pub height: i64,
    /// `(-1)^height`.
    pub sign: i8,
    /// Scalar by which the pinned automorphism acts on a fixed root vector;
    /// `+1` for two-element orbits.
    pub pinning_sign: i8,
}

impl RestrictedRoot {
    pub fn dim_v(&self) -> usize {
        usize::from(self.case_tag != CaseTag::GOnly)
    }

    pub fn dim_g(&self) -> usize {
        usize::from(self.case_tag != CaseTag::VOnly)
    }

    /// Smallest simple-root index appearing in any orbit member.
    fn min_support(&self) -> usize {
        self.orbit.iter().filter_map(|r| r.0.iter().position(|&c| c != 0)).min().unwrap_or(0)
    }
}

/// Subscripts displayed for the family's equation next to the Weyl degrees,
/// with a note when they disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeCheck {
    pub displayed: Vec<u32>,
    pub weyl: Vec<u32>,
    pub consistent: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedData {
    pub rs: RootSystem,
    pub theta: Vec<usize>,
    pub restricted: Vec<RestrictedRoot>,
    pub dim_v: usize,
    pub dim_g: usize,
    pub dim_v0: usize,
    pub simple_orbits: usize,
    pub degrees: Vec<u32>,
    pub height_one_count: usize,
    pub marked_points: u32,
    pub degree_check: DegreeCheck,
}

impl GradedData {
    /// The height-one restricted roots `S_V`, ordered by smallest simple index.
    pub fn height_one(&self) -> Vec<&RestrictedRoot> {
        let mut v: Vec<_> = self.restricted.iter().filter(|a| a.height == 1).collect();
        v.sort_by_key(|a| a.min_support());
        v
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    /// Ambient image of an arbitrary root under ϑ-averaging.
    pub fn average(&self, coords: &[i32]) -> Vec<Q> {
        let a = Root(coords.to_vec());
        let b = permute(&self.theta, &a);
        a.0.iter().zip(&b.0).map(|(x, y)| Q::new((x + y) as i64, 2)).collect()
    }
}

/// Weyl degrees of the invariant polynomials.
pub fn weyl_degrees(fam: Family, rank: usize) -> Vec<u32> {
    let r = rank as u32;
    let mut d: Vec<u32> = match (fam, rank) {
        (Family::A, _) => (2..=r + 1).collect(),
        (Family::D, _) => {
            let mut d: Vec<u32> = (1..r).map(|i| 2 * i).collect();
            d.push(r);
            d
        }
        (Family::E, 6) => vec![2, 5, 6, 8, 9, 12],
        (Family::E, 7) => vec![2, 6, 8, 10, 12, 14, 18],
        _ => vec![2, 8, 12, 14, 18, 20, 24, 30],
    };
    d.sort_unstable();
    d
}

/// Coefficient subscripts as printed in the table of curve families.
pub fn displayed_subscripts(fam: Family, rank: usize) -> Vec<u32> {
    let r = rank as u32;
    let mut d: Vec<u32> = match (fam, rank % 2) {
        (Family::A, 0) => (2..=r + 1).collect(),
        // The odd-rank row ends at p_{2n+1} = p_rank.
        (Family::A, _) => (2..=r).collect(),
        (Family::D, 0) => {
            let n = r / 2;
            let mut d: Vec<u32> = (1..2 * n).map(|i| 2 * i).collect();
            d.push(2 * n);
            d
        }
        (Family::D, _) => {
            let n = (r - 1) / 2;
            let mut d: Vec<u32> = (1..=2 * n).map(|i| 2 * i).collect();
            d.push(2 * n + 1);
            d
        }
        (Family::E, _) => weyl_degrees(fam, rank),
    };
    d.sort_unstable();
    d
}

pub fn marked_points(fam: Family, rank: usize) -> u32 {
    match (fam, rank) {
        (Family::A, r) if r % 2 == 0 => 1,
        (Family::A, _) => 2,
        (Family::D, r) if r % 2 == 0 => 3,
        (Family::D, _) => 2,
        (Family::E, 7) => 2,
        (Family::E, _) => 1,
    }
}

/// dim V from the explicit description of each representation.
pub fn closed_form_dim_v(fam: Family, rank: usize) -> usize {
    match (fam, rank) {
        (Family::A, r) if r % 2 == 0 => {
            let n = r / 2;
            2 * n * n + 3 * n
        }
        (Family::A, r) => {
            let n = (r - 1) / 2;
            (2 * n + 2) * (2 * n + 3) / 2 - 1
        }
        (Family::D, m) => m * m,
        (Family::E, 6) => 42,
        (Family::E, 7) => 70,
        _ => 128,
    }
}

fn degree_check(fam: Family, rank: usize) -> DegreeCheck {
    let displayed = displayed_subscripts(fam, rank);
    let weyl = weyl_degrees(fam, rank);
    let consistent = displayed == weyl;
    let note = (!consistent).then(|| {
        alloc::format!(
            "displayed subscripts {:?} differ from Weyl degrees {:?}; using Weyl degrees",
            displayed, weyl
        )
    });
    DegreeCheck { displayed, weyl, consistent, note }
}

fn eps_bit(cartan: &[Vec<i32>], i: usize, j: usize) -> bool {
    i == j || (i < j && cartan[i][j] == -1)
}

/// Bimultiplicative cocycle `ε(a, b) ∈ {±1}` on the root lattice.
fn cocycle(cartan: &[Vec<i32>], a: &[i32], b: &[i32]) -> i8 {
    let mut odd = false;
    for (i, x) in a.iter().enumerate() {
        if x % 2 == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y % 2 != 0 && eps_bit(cartan, i, j) {
                odd = !odd;
            }
        }
    }
    if odd {
        -1
    } else {
        1
    }
}

/// Signs `c_α` with `ϑ(E_α) = c_α E_{ϑα}` for the cocycle Chevalley basis,
/// keyed by positive root. Negative roots carry the sign of their negation.
pub fn pinning_signs(rs: &RootSystem, theta: &[usize]) -> BTreeMap<Root, i8> {
    let r = rs.rank();
    let mut pos: Vec<Root> = rs.positive_roots().cloned().collect();
    pos.sort_by_key(height);
    let mut c: BTreeMap<Root, i8> = BTreeMap::new();
    for a in pos {
        if height(&a) == 1 {
            c.insert(a, 1);
            continue;
        }
        let (i, g) = (0..r)
            .find_map(|i| {
                let mut g = a.clone();
                g.0[i] -= 1;
                c.get(&g).map(|_| (i, g))
            })
            .expect("every positive root of height > 1 is a sum of a shorter root and a simple root");
        let ai = Root::simple(r, i);
        let s = c[&g]
            * cocycle(&rs.cartan, &permute(theta, &ai).0, &permute(theta, &g).0)
            * cocycle(&rs.cartan, &ai.0, &g.0);
        c.insert(a, s);
    }
    c
}

/// Grade the root system by the involution `ϑ ∘ Ad(ρ̌(-1))`.
pub fn grade(rs: &RootSystem) -> GradedData {
    let r = rs.rank();
    let theta = pinned_automorphism(rs);
    let csign = pinning_signs(rs, &theta);
    let mut seen = vec![false; rs.roots.len()];
    let mut restricted = Vec::new();
    for (idx, a) in rs.roots.iter().enumerate() {
        if seen[idx] {
            continue;
        }
        let b = permute(&theta, a);
        let bidx = rs.index_of(&b).expect("ϑ permutes roots");
        seen[idx] = true;
        seen[bidx] = true;
        let h = height(a);
        let sign: i8 = if h % 2 == 0 { 1 } else { -1 };
        let image: Vec<Q> = a.0.iter().zip(&b.0).map(|(x, y)| Q::new((x + y) as i64, 2)).collect();
        let (orbit, pinning_sign, case_tag) = if bidx == idx {
            let key = if a.is_positive() { a.clone() } else { a.neg() };
            let c = csign[&key];
            let tag = if sign * c == 1 { CaseTag::GOnly } else { CaseTag::VOnly };
            (vec![a.clone()], c, tag)
        } else {
            let mut o = vec![a.clone(), b];
            o.sort();
            (o, 1, CaseTag::Split)
        };
        restricted.push(RestrictedRoot { orbit, image, case_tag, height: h, sign, pinning_sign });
    }
    let simple_orbits = (0..r).filter(|&i| theta[i] >= i).count();
    let dim_v0 = r - simple_orbits;
    let dim_v = dim_v0 + restricted.iter().map(RestrictedRoot::dim_v).sum::<usize>();
    let dim_g = simple_orbits + restricted.iter().map(RestrictedRoot::dim_g).sum::<usize>();
    let height_one_count = restricted.iter().filter(|a| a.height == 1).count();
    let fam = rs.dtype.family();
    GradedData {
        rs: rs.clone(),
        theta,
        restricted,
        dim_v,
        dim_g,
        dim_v0,
        simple_orbits,
        degrees: weyl_degrees(fam, r),
        height_one_count,
        marked_points: marked_points(fam, r),
        degree_check: degree_check(fam, r),
    }
}

/// A torus weight occurring in `W₀`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Weight {
    pub character: Vec<Q>,
    /// Restricted height; zero weights of `V₀` have height 0.
    pub height: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct W0Weights {
    pub weights: Vec<Weight>,
    pub height_one_count: usize,
}

impl W0Weights {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn sum(&self, rank: usize) -> Vec<Q> {
        let mut s = vec![Q::zero(); rank];
        for w in &self.weights {
            add_into(&mut s, &w.character);
        }
        s
    }
}

fn add_into(acc: &mut [Q], v: &[Q]) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += *x;
    }
}

/// Weights of `W₀ = V₀ ⊕ ⨁_{ht(a) ≤ 1} V_a`, with multiplicity.
pub fn w0_weights(gd: &GradedData) -> W0Weights {
    let r = gd.rank();
    let mut weights: Vec<Weight> =
        (0..gd.dim_v0).map(|_| Weight { character: vec![Q::zero(); r], height: 0 }).collect();
    for a in &gd.restricted {
        if a.dim_v() == 1 && a.height <= 1 {
            weights.push(Weight { character: a.image.clone(), height: a.height });
        }
    }
    let height_one_count = weights.iter().filter(|w| w.height == 1).count();
    W0Weights { weights, height_one_count }
}

/// Sum of the restricted roots of `G` with sign `sgn` of the height.
fn g_root_sum(gd: &GradedData, positive: bool) -> Vec<Q> {
    let mut s = vec![Q::zero(); gd.rank()];
    for a in &gd.restricted {
        if a.dim_g() == 1 && (a.height > 0) == positive {
            add_into(&mut s, &a.image);
        }
    }
    s
}

/// A named basis of the restricted character lattice, given by roots whose
/// ϑ-averages are the basis characters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterBasis {
    pub names: Vec<String>,
    pub roots: Vec<Vec<i32>>,
}

impl CharacterBasis {
    pub fn new(names: Vec<String>, roots: Vec<Vec<i32>>) -> Self {
        CharacterBasis { names, roots }
    }

    fn images(&self, gd: &GradedData) -> Result<Vec<Vec<Q>>, VinbergError> {
        let r = gd.rank();
        self.names
            .iter()
            .zip(&self.roots)
            .map(|(name, v)| {
                if v.len() != r {
                    return Err(VinbergError::BasisLength { name: name.clone(), len: v.len(), rank: r });
                }
                if !gd.rs.contains(&Root(v.clone())) {
                    return Err(VinbergError::NotARoot(name.clone()));
                }
                Ok(gd.average(v))
            })
            .collect()
    }

    /// Coordinates of an ambient character in this basis.
    pub fn express(&self, gd: &GradedData, ch: &[Q]) -> Result<Vec<Q>, VinbergError> {
        let imgs = self.images(gd)?;
        if imgs.len() != gd.simple_orbits {
            let source = if imgs.len() > gd.simple_orbits { SpanError::Dependent } else { SpanError::OutsideSpan };
            return Err(VinbergError::Span { what: "basis size differs from the restricted rank", source });
        }
        linalg::express(&imgs, ch).map_err(|source| VinbergError::Span { what: "character basis", source })
    }

    fn vector(&self, gd: &GradedData, ch: &[Q], x_prefactor: Q) -> Result<ExponentVector, VinbergError> {
        Ok(ExponentVector::new(self.names.clone(), self.express(gd, ch)?, x_prefactor))
    }
}

/// `δ_G⁻¹` as the sum of the positive restricted roots of `G`.
pub fn modular_function(gd: &GradedData, basis: &CharacterBasis) -> Result<ExponentVector, VinbergError> {
    basis.vector(gd, &g_root_sum(gd, true), Q::zero())
}

/// `δ_G` from the negative restricted roots; the negation of [`modular_function`].
pub fn modular_character(gd: &GradedData, basis: &CharacterBasis) -> Result<ExponentVector, VinbergError> {
    basis.vector(gd, &g_root_sum(gd, false), Q::zero())
}

/// `∏_{ω ∈ W₀} (X ω(t))`.
pub fn volume_exponents(gd: &GradedData, basis: &CharacterBasis) -> Result<ExponentVector, VinbergError> {
    let w = w0_weights(gd);
    basis.vector(gd, &w.sum(gd.rank()), Q::from_integer(w.dim() as i64))
}

/// `X^k ∏_{α ∈ S_V} α(t)`.
pub fn q_condition(gd: &GradedData, basis: &CharacterBasis) -> Result<ExponentVector, VinbergError> {
    let mut s = vec![Q::zero(); gd.rank()];
    for a in gd.height_one() {
        add_into(&mut s, &a.image);
    }
    basis.vector(gd, &s, Q::from_integer(gd.height_one_count as i64))
}

/// Coordinates of each basis character in the `S_V` basis.
pub fn basis_in_height_one(gd: &GradedData, basis: &CharacterBasis) -> Result<Vec<Vec<Q>>, VinbergError> {
    let sv = height_one_images(gd);
    basis
        .images(gd)?
        .iter()
        .map(|b| linalg::express(&sv, b).map_err(|source| VinbergError::Span { what: "height-one roots", source }))
        .collect()
}

pub fn height_one_images(gd: &GradedData) -> Vec<Vec<Q>> {
    gd.height_one().iter().map(|a| a.image.clone()).collect()
}

/// `∏_{ω ∈ W₀} ω⁻¹ ∏_{β ∈ Φ_G⁻} β` as an ambient character.
pub fn lambda_target(gd: &GradedData) -> Vec<Q> {
    let w = w0_weights(gd).sum(gd.rank());
    let neg = g_root_sum(gd, false);
    w.iter().zip(&neg).map(|(a, b)| *b - *a).collect()
}

/// Exponents `r_i` with `α_1^{r_1} ⋯ α_k^{r_k} = ∏ω⁻¹ ∏β`, in `S_V` order.
pub fn lambda_exponents(gd: &GradedData) -> Result<Vec<Q>, VinbergError> {
    linalg::express(&height_one_images(gd), &lambda_target(gd))
        .map_err(|source| VinbergError::Span { what: "height-one roots", source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::{build_root_system, DynkinType};

    fn gd(s: &str) -> GradedData {
        grade(&build_root_system(s.parse::<DynkinType>().unwrap()))
    }

    #[test]
    fn pinning_signs_are_path_independent() {
        for t in ["A3", "A5", "D5", "D6", "E6", "E7", "E8"] {
            let rs = build_root_system(t.parse::<DynkinType>().unwrap());
            let theta = crate::rootsystem::pinned_automorphism(&rs);
            let c = pinning_signs(&rs, &theta);
            let r = rs.rank();
            for a in rs.positive_roots().filter(|a| height(a) > 1) {
                for i in 0..r {
                    let mut g = a.clone();
                    g.0[i] -= 1;
                    let Some(cg) = c.get(&g) else { continue };
                    let ai = Root::simple(r, i);
                    let s = cg
                        * cocycle(&rs.cartan, &permute(&theta, &ai).0, &permute(&theta, &g).0)
                        * cocycle(&rs.cartan, &ai.0, &g.0);
                    assert_eq!(s, c[a], "{t}: {:?} via {i}", a.0);
                }
                assert_eq!(c[a] * c[&permute(&theta, a)], 1, "{t}");
            }
        }
    }

    #[test]
    fn a2_grading() {
        let g = gd("A2");
        assert_eq!(g.dim_v, 5);
        assert_eq!(g.degrees, vec![2, 3]);
        assert_eq!(g.dim_v + g.dim_g, 2 + 6);
        // α1+α2 has even height, but ϑ negates its root vector.
        let fixed = g.restricted.iter().find(|a| a.orbit == vec![Root(vec![1, 1])]).unwrap();
        assert_eq!(fixed.case_tag, CaseTag::VOnly);
        assert_eq!(fixed.pinning_sign, -1);
    }

    #[test]
    fn exceptional_dimensions() {
        for (t, d, k) in [("E6", 42, 4), ("E7", 70, 7), ("E8", 128, 8), ("D5", 25, 4)] {
            let g = gd(t);
            assert_eq!(g.dim_v, d, "{t}");
            assert_eq!(g.height_one_count, k, "{t}");
            assert_eq!(w0_weights(&g).height_one_count, k);
        }
        assert_eq!(gd("E6").degrees, vec![2, 5, 6, 8, 9, 12]);
    }

    #[test]
    fn odd_a_degree_note() {
        let g = gd("A5");
        assert!(!g.degree_check.consistent);
        assert!(g.degree_check.note.is_some());
        assert!(gd("A4").degree_check.consistent);
        assert!(gd("D6").degree_check.consistent);
    }

    #[test]
    fn a1_lambda_is_zero() {
        let g = gd("A1");
        assert_eq!(lambda_exponents(&g).unwrap(), vec![Q::zero()]);
    }
}
