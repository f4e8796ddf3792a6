//! ADE types and their canonical textual form.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::LatticeError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E,
}

impl Family {
    /// Tie-break order within equal rank: E before D before A.
    fn order(self) -> u8 {
        match self {
            Family::E => 0,
            Family::D => 1,
            Family::A => 2,
        }
    }

    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::D => 'D',
            Family::E => 'E',
        }
    }
}

/// A connected simply-laced Dynkin type `A_n`, `D_n` (n >= 4) or `E_6,7,8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SimpleType {
    family: Family,
    rank: u32,
}

impl SimpleType {
    pub const E8: SimpleType = SimpleType { family: Family::E, rank: 8 };
    pub const A1: SimpleType = SimpleType { family: Family::A, rank: 1 };

    /// Builds a canonical simple type. `D3` is normalized to `A3`; `D2` and
    /// `D1` are rejected here because they are not connected (see
    /// [`SimpleType::normalized`]).
    pub fn new(family: Family, rank: u32) -> Result<Self, LatticeError> {
        match Self::normalized(family, rank)?.as_slice() {
            [single] => Ok(*single),
            _ => Err(LatticeError::InvalidType(format!(
                "{}{} is not a connected type",
                family.letter(),
                rank
            ))),
        }
    }

    /// Normalizes low-rank aliases: `D3 -> A3`, `D2 -> A1 + A1`.
    pub fn normalized(family: Family, rank: u32) -> Result<Vec<Self>, LatticeError> {
        let bad = || LatticeError::InvalidType(format!("{}{}", family.letter(), rank));
        match family {
            Family::A if rank >= 1 => Ok(vec![SimpleType { family, rank }]),
            Family::D if rank >= 4 => Ok(vec![SimpleType { family, rank }]),
            Family::D if rank == 3 => Ok(vec![SimpleType { family: Family::A, rank: 3 }]),
            Family::D if rank == 2 => Ok(vec![Self::A1, Self::A1]),
            Family::E if (6..=8).contains(&rank) => Ok(vec![SimpleType { family, rank }]),
            _ => Err(bad()),
        }
    }

    pub fn family(self) -> Family {
        self.family
    }

    pub fn rank(self) -> u32 {
        self.rank
    }

    pub fn a(rank: u32) -> Self {
        Self::new(Family::A, rank).expect("A_n with n >= 1")
    }

    pub fn d(rank: u32) -> Self {
        Self::new(Family::D, rank).expect("D_n with n >= 3")
    }

    pub fn e(rank: u32) -> Self {
        Self::new(Family::E, rank).expect("E_6, E_7 or E_8")
    }

    /// Number of positive roots.
    pub fn positive_roots(self) -> u32 {
        let n = self.rank;
        match (self.family, n) {
            (Family::A, _) => n * (n + 1) / 2,
            (Family::D, _) => n * (n - 1),
            (Family::E, 6) => 36,
            (Family::E, 7) => 63,
            (Family::E, _) => 120,
        }
    }
}

impl Ord for SimpleType {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .rank
            .cmp(&self.rank)
            .then(self.family.order().cmp(&other.family.order()))
    }
}

impl PartialOrd for SimpleType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for SimpleType {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (family, rank) = parse_letter_rank(s.trim())?;
        SimpleType::new(family, rank)
    }
}

fn parse_letter_rank(s: &str) -> Result<(Family, u32), LatticeError> {
    let mut chars = s.chars();
    let family = match chars.next() {
        Some('A') | Some('a') => Family::A,
        Some('D') | Some('d') => Family::D,
        Some('E') | Some('e') => Family::E,
        _ => return Err(LatticeError::Parse(s.to_string())),
    };
    let rank = chars
        .as_str()
        .parse::<u32>()
        .map_err(|_| LatticeError::Parse(s.to_string()))?;
    Ok((family, rank))
}

/// A formal direct sum of simple types, kept sorted in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RootSystemType {
    components: Vec<SimpleType>,
}

impl RootSystemType {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_components<I: IntoIterator<Item = SimpleType>>(parts: I) -> Self {
        let mut components: Vec<SimpleType> = parts.into_iter().collect();
        components.sort();
        RootSystemType { components }
    }

    pub fn simple(t: SimpleType) -> Self {
        RootSystemType { components: vec![t] }
    }

    pub fn components(&self) -> &[SimpleType] {
        &self.components
    }

    pub fn rank(&self) -> u32 {
        self.components.iter().map(|c| c.rank()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn num_roots(&self) -> u32 {
        2 * self.components.iter().map(|c| c.positive_roots()).sum::<u32>()
    }

    /// Direct sum.
    pub fn plus(&self, other: &RootSystemType) -> RootSystemType {
        Self::from_components(self.components.iter().chain(other.components.iter()).copied())
    }

    /// Removes one copy of `t`, if present.
    pub fn without_one(&self, t: SimpleType) -> Option<RootSystemType> {
        let idx = self.components.iter().position(|c| *c == t)?;
        let mut components = self.components.clone();
        components.remove(idx);
        Some(RootSystemType { components })
    }

    /// Every type obtained by deleting a nonempty proper sub-multiset of
    /// components... restricted here to deleting one component at a time.
    pub fn delete_component(&self, idx: usize) -> RootSystemType {
        let mut components = self.components.clone();
        components.remove(idx);
        RootSystemType { components }
    }

    /// Compact form with exponents, e.g. `D4+A1^4`.
    pub fn exponent_form(&self) -> String {
        if self.components.is_empty() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.components.len() {
            let c = self.components[i];
            let mut j = i;
            while j < self.components.len() && self.components[j] == c {
                j += 1;
            }
            let k = j - i;
            parts.push(if k == 1 { c.to_string() } else { format!("{c}^{k}") });
            i = j;
        }
        parts.join("+")
    }
}

impl Ord for RootSystemType {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .rank()
            .cmp(&self.rank())
            .then_with(|| self.components.cmp(&other.components))
    }
}

impl PartialOrd for RootSystemType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RootSystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join("+"))
    }
}

impl FromStr for RootSystemType {
    type Err = LatticeError;

    /// Accepts `D4+A1+A1`, `D4+A1^2`, whitespace, and `0` for the empty sum.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(RootSystemType::empty());
        }
        let mut parts = Vec::new();
        for token in s.split('+') {
            let token = token.trim();
            let (base, count) = match token.split_once('^') {
                Some((b, e)) => {
                    let k = e
                        .trim()
                        .parse::<usize>()
                        .map_err(|_| LatticeError::Parse(token.to_string()))?;
                    if k == 0 {
                        return Err(LatticeError::Parse(token.to_string()));
                    }
                    (b.trim(), k)
                }
                None => (token, 1),
            };
            let (family, rank) = parse_letter_rank(base)?;
            let normalized = SimpleType::normalized(family, rank)?;
            for _ in 0..count {
                parts.extend_from_slice(&normalized);
            }
        }
        Ok(RootSystemType::from_components(parts))
    }
}

impl Serialize for RootSystemType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RootSystemType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The affine type `R~` labelling an Okamoto-Painleve pair; `base` is the
/// finite type `R` (so the diagram has `rank(R) + 1` nodes).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AffineType {
    base: SimpleType,
}

impl AffineType {
    /// The eight affine types attached to Painleve equations, in the order
    /// D4..D8, E6, E7, E8.
    pub fn painleve_types() -> Vec<AffineType> {
        let mut v: Vec<AffineType> = (4..=8).map(|k| AffineType { base: SimpleType::d(k) }).collect();
        v.extend((6..=8).map(|k| AffineType { base: SimpleType::e(k) }));
        v
    }

    pub fn new(base: SimpleType) -> Self {
        AffineType { base }
    }

    pub fn base(self) -> SimpleType {
        self.base
    }

    /// Number of components of `Y_red`.
    pub fn node_count(self) -> u32 {
        self.base.rank() + 1
    }

    /// The lattice spanned by the components of `Y` other than the one
    /// meeting the section.
    pub fn classical_part(self) -> SimpleType {
        self.base
    }

    pub fn is_painleve(self) -> bool {
        Self::painleve_types().contains(&self)
    }

    /// Euler number of the Kodaira fiber `I*_{k-4}` (for `D~k`) or
    /// `IV*`, `III*`, `II*` (for `E~6,7,8`).
    pub fn fiber_euler_number(self) -> u32 {
        self.base.rank() + 2
    }

    pub fn painleve_label(self) -> &'static str {
        match (self.base.family(), self.base.rank()) {
            (Family::D, 4) => "PVI",
            (Family::D, 5) => "PV",
            (Family::D, 6) => "PIII(D6)",
            (Family::D, 7) => "PIII(D7)",
            (Family::D, 8) => "PIII(D8)",
            (Family::E, 6) => "PIV",
            (Family::E, 7) => "PII",
            (Family::E, 8) => "PI",
            _ => "-",
        }
    }
}

impl fmt::Display for AffineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}~", self.base)
    }
}

impl FromStr for AffineType {
    type Err = LatticeError;

    /// Accepts `D4`, `D4~` or `~D4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let core = s.trim().trim_start_matches('~').trim_end_matches('~');
        Ok(AffineType { base: core.parse()? })
    }
}
