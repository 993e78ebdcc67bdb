//! Simply laced root systems in simple-root coordinates.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootSystemError {
    #[error("type {family:?} does not exist in rank {rank}")]
    InvalidRank { family: Family, rank: usize },
    #[error("cannot parse Dynkin type {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct DynkinType {
    family: Family,
    rank: usize,
}

impl DynkinType {
    pub fn new(family: Family, rank: usize) -> Result<Self, RootSystemError> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
        };
        if ok {
            Ok(DynkinType { family, rank })
        } else {
            Err(RootSystemError::InvalidRank { family, rank })
        }
    }

    pub fn a(rank: usize) -> Result<Self, RootSystemError> {
        Self::new(Family::A, rank)
    }

    pub fn d(rank: usize) -> Result<Self, RootSystemError> {
        Self::new(Family::D, rank)
    }

    pub fn e(rank: usize) -> Result<Self, RootSystemError> {
        Self::new(Family::E, rank)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of roots from the classical closed forms.
    pub fn root_count(&self) -> usize {
        let n = self.rank;
        match (self.family, n) {
            (Family::A, _) => n * (n + 1),
            (Family::D, _) => 2 * n * (n - 1),
            (Family::E, 6) => 72,
            (Family::E, 7) => 126,
            _ => 240,
        }
    }

    /// Edges of the Dynkin diagram, 0-indexed. E-series numbering puts the
    /// branch node at index 1, attached to index 3.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let r = self.rank;
        match self.family {
            Family::A => (0..r - 1).map(|i| (i, i + 1)).collect(),
            Family::D => {
                let mut e: Vec<_> = (0..r - 2).map(|i| (i, i + 1)).collect();
                e.push((r - 3, r - 1));
                e
            }
            Family::E => {
                let mut e = vec![(0, 2), (2, 3), (1, 3)];
                e.extend((3..r - 1).map(|i| (i, i + 1)));
                e
            }
        }
    }

    pub fn cartan(&self) -> Vec<Vec<i32>> {
        let r = self.rank;
        let mut c = vec![vec![0; r]; r];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        for (i, j) in self.edges() {
            c[i][j] = -1;
            c[j][i] = -1;
        }
        c
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for DynkinType {
    type Err = RootSystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || RootSystemError::Parse(String::from(s));
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('D') => Family::D,
            Some('E') => Family::E,
            _ => return Err(bad()),
        };
        let rest = chars.as_str().trim_start_matches('_');
        let rank: usize = rest.parse().map_err(|_| bad())?;
        DynkinType::new(family, rank)
    }
}

impl TryFrom<String> for DynkinType {
    type Error = RootSystemError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<DynkinType> for String {
    fn from(t: DynkinType) -> String {
        format!("{t}")
    }
}

/// A root as its coefficient vector in the simple roots.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Root(pub Vec<i32>);

impl Root {
    pub fn simple(rank: usize, i: usize) -> Root {
        let mut v = vec![0; rank];
        v[i] = 1;
        Root(v)
    }

    pub fn coords(&self) -> &[i32] {
        &self.0
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().any(|&c| c > 0)
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Height of a root: the sum of its simple-root coordinates.
pub fn height(r: &Root) -> i64 {
    r.0.iter().map(|&c| c as i64).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystem {
    pub dtype: DynkinType,
    /// All roots, sorted lexicographically by coordinates.
    pub roots: Vec<Root>,
    pub cartan: Vec<Vec<i32>>,
}

impl RootSystem {
    pub fn rank(&self) -> usize {
        self.dtype.rank
    }

    /// `⟨a, α_i^∨⟩`.
    pub fn pairing(&self, a: &Root, i: usize) -> i32 {
        a.0.iter().zip(&self.cartan).map(|(x, row)| x * row[i]).sum()
    }

    /// Symmetric form `aᵀ C b`.
    pub fn inner(&self, a: &Root, b: &Root) -> i32 {
        let mut s = 0;
        for (i, x) in a.0.iter().enumerate() {
            if *x != 0 {
                s += x * self.pairing(b, i);
            }
        }
        s
    }

    pub fn reflect(&self, a: &Root, i: usize) -> Root {
        let k = self.pairing(a, i);
        let mut v = a.0.clone();
        v[i] -= k;
        Root(v)
    }

    pub fn contains(&self, a: &Root) -> bool {
        self.roots.binary_search(a).is_ok()
    }

    pub fn index_of(&self, a: &Root) -> Option<usize> {
        self.roots.binary_search(a).ok()
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.is_positive())
    }

    pub fn highest_root(&self) -> &Root {
        self.roots.iter().max_by_key(|r| height(r)).expect("nonempty root system")
    }

    /// One root per line, coordinates comma-separated, in the stored order.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for r in &self.roots {
            s.push_str(&format!("{r}\n"));
        }
        s
    }

    /// Reduced word of the longest Weyl group element, built by appending the
    /// smallest-index simple reflection that lengthens the current element.
    pub fn longest_element(&self) -> Vec<usize> {
        let r = self.rank();
        let mut images: Vec<Root> = (0..r).map(|i| Root::simple(r, i)).collect();
        let mut word = Vec::new();
        while let Some(i) = (0..r).find(|&i| images[i].is_positive()) {
            // (w s_i)(α_j) = w(α_j) - C[i][j] w(α_i)
            let wi = images[i].clone();
            for (j, img) in images.iter_mut().enumerate() {
                let c = self.cartan[i][j];
                if c != 0 {
                    for (x, y) in img.0.iter_mut().zip(&wi.0) {
                        *x -= c * y;
                    }
                }
            }
            word.push(i);
        }
        word
    }

    /// Applies the Weyl element given by a word (rightmost letter first).
    pub fn apply_word(&self, word: &[usize], a: &Root) -> Root {
        word.iter().rev().fold(a.clone(), |acc, &i| self.reflect(&acc, i))
    }
}

/// Full root system by reflection closure of the simple roots.
pub fn build_root_system(dtype: DynkinType) -> RootSystem {
    let r = dtype.rank;
    let cartan = dtype.cartan();
    let proto = RootSystem { dtype, roots: Vec::new(), cartan };
    let mut seen: BTreeSet<Root> = BTreeSet::new();
    let mut frontier: Vec<Root> = (0..r).map(|i| Root::simple(r, i)).collect();
    seen.extend(frontier.iter().cloned());
    while let Some(a) = frontier.pop() {
        for i in 0..r {
            let b = proto.reflect(&a, i);
            if seen.insert(b.clone()) {
                frontier.push(b);
            }
        }
    }
    RootSystem { roots: seen.into_iter().collect(), ..proto }
}

/// The diagram involution `ϑ = -w₀` as a permutation of simple-root indices.
pub fn pinned_automorphism(rs: &RootSystem) -> Vec<usize> {
    let r = rs.rank();
    let w0 = rs.longest_element();
    (0..r)
        .map(|i| {
            let img = rs.apply_word(&w0, &Root::simple(r, i)).neg();
            img.0.iter().position(|&c| c == 1).filter(|_| height(&img) == 1).expect("-w0 permutes simple roots")
        })
        .collect()
}

/// Image of a root under a simple-root permutation.
pub fn permute(theta: &[usize], a: &Root) -> Root {
    let mut v = vec![0; a.0.len()];
    for (i, &c) in a.0.iter().enumerate() {
        v[theta[i]] = c;
    }
    Root(v)
}
