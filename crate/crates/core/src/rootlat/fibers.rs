//! Complement configurations, Kodaira fiber Euler numbers and the
//! Oguiso-Shioda bound.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::closure::{in_closure, subsystem_closure};
use super::types::{AffineType, Family, RootSystemType, SimpleType};
use super::LatticeError;

/// Euler number bound for a rational elliptic surface.
pub const EULER_BOUND: u32 = 12;

/// A Kodaira fiber type able to carry a given simple root lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KodairaFiber {
    pub name: &'static str,
    /// `n` for `I_n` or `I*_n`; zero otherwise.
    pub index: u32,
    pub euler: u32,
}

impl fmt::Display for KodairaFiber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name {
            "I" | "I*" => write!(f, "{}{}", self.name, self.index),
            _ => f.write_str(self.name),
        }
    }
}

/// All Kodaira fibers whose non-identity components span `t`. For `A1`
/// and `A2` two fibers qualify and both are returned.
pub fn kodaira_realizations(t: SimpleType) -> Vec<KodairaFiber> {
    let k = t.rank();
    let fiber = |name, index, euler| KodairaFiber { name, index, euler };
    match (t.family(), k) {
        (Family::A, 1) => vec![fiber("I", 2, 2), fiber("III", 0, 3)],
        (Family::A, 2) => vec![fiber("I", 3, 3), fiber("IV", 0, 4)],
        (Family::A, _) => vec![fiber("I", k + 1, k + 1)],
        (Family::D, _) => vec![fiber("I*", k - 4, k + 2)],
        (Family::E, 6) => vec![fiber("IV*", 0, 8)],
        (Family::E, 7) => vec![fiber("III*", 0, 9)],
        (Family::E, _) => vec![fiber("II*", 0, 10)],
    }
}

fn simple_euler_min(t: SimpleType) -> u32 {
    kodaira_realizations(t).iter().map(|f| f.euler).min().expect("nonempty")
}

/// Minimal total Euler number of singular fibers realizing `t`.
pub fn euler_min(t: &RootSystemType) -> u32 {
    t.components().iter().map(|&c| simple_euler_min(c)).sum()
}

fn check_painleve(r: AffineType) -> Result<(), LatticeError> {
    if r.is_painleve() {
        Ok(())
    } else {
        Err(LatticeError::UnsupportedType(r.to_string()))
    }
}

/// Nonempty `L` with `classical_part(r) + L` a root subsystem of E8.
pub fn complement_types(r: AffineType) -> Result<BTreeSet<RootSystemType>, LatticeError> {
    check_painleve(r)?;
    let base = r.classical_part();
    Ok(subsystem_closure()
        .iter()
        .filter_map(|t| t.without_one(base))
        .filter(|l| !l.is_empty())
        .collect())
}

/// The members of `complement_types(r)` compatible with the Euler bound
/// once the fiber over `Y` is accounted for.
pub fn fibered_configs(r: AffineType) -> Result<BTreeSet<RootSystemType>, LatticeError> {
    let all = complement_types(r)?;
    let fiber = r.fiber_euler_number();
    Ok(all.into_iter().filter(|l| fiber + euler_min(l) <= EULER_BOUND).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Feasibility {
    pub feasible: bool,
    pub euler_min: u32,
    pub in_table: bool,
    pub reason: String,
}

/// Whether `t` can be the reducible-fiber lattice of a rational elliptic
/// surface: it must embed in E8 and respect the Euler bound.
pub fn oguiso_shioda_feasible(t: &RootSystemType) -> Feasibility {
    let e = euler_min(t);
    let in_table = in_closure(t);
    let (feasible, reason) = match (in_table, e <= EULER_BOUND) {
        (false, _) => (false, format!("{t} is not a proper root subsystem of E8")),
        (true, false) => (false, format!("minimal Euler number {e} exceeds {EULER_BOUND}")),
        (true, true) => (true, format!("minimal Euler number {e} is at most {EULER_BOUND}")),
    };
    Feasibility { feasible, euler_min: e, in_table, reason }
}

/// Closure members failing the Euler bound.
pub fn oguiso_shioda_exclusions() -> Vec<RootSystemType> {
    subsystem_closure()
        .iter()
        .filter(|t| !oguiso_shioda_feasible(t).feasible)
        .cloned()
        .collect()
}

/// Dimension of the family of pairs with `r` components of `Y` and `s`
/// nodal curves.
pub fn moduli_dim(r: i64, s: i64) -> Result<i64, LatticeError> {
    let total = r.checked_add(s).ok_or(LatticeError::OutOfRange(r, s))?;
    if r < 0 || s < 0 || !(0..=10).contains(&total) {
        return Err(LatticeError::OutOfRange(r, s));
    }
    Ok(10 - total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> RootSystemType {
        s.parse().unwrap()
    }

    fn a(s: &str) -> AffineType {
        s.parse().unwrap()
    }

    fn names(set: &BTreeSet<RootSystemType>) -> Vec<String> {
        set.iter().map(|x| x.exponent_form()).collect()
    }

    #[test]
    fn euler_numbers() {
        for (s, e) in [("A1", 2), ("D4", 6), ("E8", 10), ("E7+A1", 11), ("D4+A1^4", 14), ("A1^8", 16)] {
            assert_eq!(euler_min(&t(s)), e, "{s}");
        }
    }

    #[test]
    fn both_realizations_reported() {
        let names: Vec<String> = kodaira_realizations(SimpleType::A1).iter().map(|f| f.to_string()).collect();
        assert_eq!(names, vec!["I2", "III"]);
        assert_eq!(kodaira_realizations(SimpleType::d(6))[0].to_string(), "I*2");
    }

    #[test]
    fn complements() {
        assert_eq!(names(&complement_types(a("E7")).unwrap()), vec!["A1"]);
        assert!(complement_types(a("D7")).unwrap().is_empty());
        assert_eq!(
            names(&complement_types(a("D4")).unwrap()),
            vec!["D4", "A1^4", "A3", "A1^3", "A2", "A1^2", "A1"]
        );
        assert!(matches!(complement_types(a("A3")), Err(LatticeError::UnsupportedType(_))));
    }

    #[test]
    fn fibered() {
        assert_eq!(names(&fibered_configs(a("D4")).unwrap()), vec!["D4", "A3", "A1^3", "A2", "A1^2", "A1"]);
        assert_eq!(names(&fibered_configs(a("D6")).unwrap()), vec!["A1^2", "A1"]);
        assert!(fibered_configs(a("D8")).unwrap().is_empty());
    }

    #[test]
    fn exclusions() {
        let ex: Vec<String> = oguiso_shioda_exclusions().iter().map(|x| x.exponent_form()).collect();
        assert_eq!(ex, vec!["D4+A1^4", "A1^8", "A1^7"]);
        let f = oguiso_shioda_feasible(&t("E7+A1"));
        assert!(f.feasible);
        assert_eq!(f.euler_min, 11);
        assert!(!oguiso_shioda_feasible(&t("A1^9")).in_table);
    }

    #[test]
    fn moduli() {
        assert_eq!(moduli_dim(5, 4).unwrap(), 1);
        assert_eq!(moduli_dim(9, 0).unwrap(), 1);
        assert_eq!(moduli_dim(5, 0).unwrap(), 5);
        assert!(moduli_dim(9, 2).is_err());
        assert!(moduli_dim(-1, 0).is_err());
    }
}
