//! Picard-lattice bookkeeping for rational surfaces carrying an
//! anticanonical cycle.
//!
//! A rational surface obtained from P² by k point blow-ups has Picard
//! lattice Z^{1+k} with basis H, E1, ..., Ek and intersection form
//! diag(+1, -1, ..., -1). An anticanonical cycle is a cycle of rational
//! curves D1 + ... + Dn representing -K = 3H - E1 - ... - Ek; its
//! combinatorial shadow is the list of self-intersection numbers, which
//! is exactly the label data carried by one face of an intersection
//! complex. The blow-up and blow-down operations here mirror the Type I
//! moves and the triple-point arithmetic on the complex side.

use std::fmt;
use std::str::FromStr;

use serde::de::{Deserializer, Error as DeError};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The Picard lattice of a k-fold blow-up of the plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PicardLattice {
    pub exceptional_count: usize,
}

/// An integer divisor class c0·H + c1·E1 + ... in a Picard lattice.
/// `coefficients[0]` is the H coefficient. Trailing zero coefficients are
/// irrelevant: classes compare equal up to zero padding.
#[derive(Clone, Debug, Eq)]
pub struct DivisorClass {
    pub coefficients: Vec<i64>,
}

/// A cycle of rational curves with self-intersection numbers and,
/// optionally, divisor classes in an ambient Picard lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnticanonicalCycle {
    pub selfints: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<DivisorClass>>,
}

/// Errors for divisor classes and cycles.
#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error("class uses exceptional curves beyond the lattice rank: rank allows {expected} coefficients, class has {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cycle has {selfints} self-intersections but {classes} classes")]
    ClassCountMismatch { selfints: usize, classes: usize },
    #[error("cycle carries no divisor classes")]
    MissingClasses,
    #[error("cycle is empty")]
    EmptyCycle,
    #[error("component index {index} out of range for a cycle of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("component {index} has self-intersection {selfint}, not -1")]
    NotMinusOneComponent { index: usize, selfint: i64 },
    #[error("cycle of length {len} is too short, need at least {need}")]
    CycleTooShort { len: usize, need: usize },
    #[error("blow-up count must be positive")]
    ZeroCount,
    #[error("cannot parse divisor class {input:?}: {message}")]
    ClassParse { input: String, message: String },
}

impl DivisorClass {
    pub fn new(coefficients: Vec<i64>) -> DivisorClass {
        DivisorClass { coefficients }
    }

    pub fn zero() -> DivisorClass {
        DivisorClass { coefficients: vec![0] }
    }

    fn coefficient(&self, i: usize) -> i64 {
        self.coefficients.get(i).copied().unwrap_or(0)
    }
}

impl PartialEq for DivisorClass {
    fn eq(&self, other: &DivisorClass) -> bool {
        let n = self.coefficients.len().max(other.coefficients.len());
        (0..n).all(|i| self.coefficient(i) == other.coefficient(i))
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, &c) in self.coefficients.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push(if c < 0 { '-' } else { '+' });
            }
            if c.abs() != 1 {
                out.push_str(&c.abs().to_string());
            }
            if i == 0 {
                out.push('H');
            } else {
                out.push('E');
                out.push_str(&i.to_string());
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl FromStr for DivisorClass {
    type Err = SurfaceError;

    /// Parses sums of terms like `H`, `-E2`, `3H`, `+2E10`; `0` is the
    /// zero class. Whitespace is ignored.
    fn from_str(s: &str) -> Result<DivisorClass, SurfaceError> {
        let err = |message: &str| SurfaceError::ClassParse {
            input: s.to_string(),
            message: message.to_string(),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty class"));
        }
        if compact == "0" {
            return Ok(DivisorClass::zero());
        }
        let bytes = compact.as_bytes();
        let mut i = 0;
        let mut h: i64 = 0;
        let mut exceptional: Vec<(usize, i64)> = Vec::new();
        while i < bytes.len() {
            let sign: i64 = match bytes[i] {
                b'+' => {
                    i += 1;
                    1
                }
                b'-' => {
                    i += 1;
                    -1
                }
                _ => 1,
            };
            let digits_start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let coefficient: i64 = if digits_start == i {
                1
            } else {
                compact[digits_start..i]
                    .parse()
                    .map_err(|_| err("coefficient too large"))?
            };
            match bytes.get(i) {
                Some(b'H') => {
                    i += 1;
                    h += sign * coefficient;
                }
                Some(b'E') => {
                    i += 1;
                    let idx_start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if idx_start == i {
                        return Err(err("E needs an index, like E3"));
                    }
                    let index: usize = compact[idx_start..i]
                        .parse()
                        .map_err(|_| err("exceptional index too large"))?;
                    if index == 0 {
                        return Err(err("exceptional indices start at 1"));
                    }
                    exceptional.push((index, sign * coefficient));
                }
                _ => return Err(err("expected H or E after the coefficient")),
            }
        }
        let top = exceptional.iter().map(|&(i, _)| i).max().unwrap_or(0);
        let mut coefficients = vec![0i64; top + 1];
        coefficients[0] = h;
        for (index, c) in exceptional {
            coefficients[index] += c;
        }
        Ok(DivisorClass { coefficients })
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<DivisorClass, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(D::Error::custom)
    }
}

impl PicardLattice {
    pub fn new(exceptional_count: usize) -> PicardLattice {
        PicardLattice { exceptional_count }
    }

    pub fn rank(&self) -> usize {
        1 + self.exceptional_count
    }

    /// The anticanonical class 3H - E1 - ... - Ek.
    pub fn anticanonical(&self) -> DivisorClass {
        let mut coefficients = vec![-1i64; self.rank()];
        coefficients[0] = 3;
        DivisorClass { coefficients }
    }

    fn embed(&self, class: &DivisorClass) -> Result<Vec<i64>, SurfaceError> {
        if class.coefficients.len() > self.rank() {
            return Err(SurfaceError::DimensionMismatch {
                expected: self.rank(),
                got: class.coefficients.len(),
            });
        }
        let mut v = class.coefficients.clone();
        v.resize(self.rank(), 0);
        Ok(v)
    }

    /// Intersection pairing: H² = 1, Ei² = -1, mixed products 0.
    pub fn pairing(&self, a: &DivisorClass, b: &DivisorClass) -> Result<i64, SurfaceError> {
        let (a, b) = (self.embed(a)?, self.embed(b)?);
        let mut sum = a[0] * b[0];
        for i in 1..self.rank() {
            sum -= a[i] * b[i];
        }
        Ok(sum)
    }
}

/// Checks that classes realize the cycle inside the lattice: each class
/// has the recorded self-intersection, consecutive components meet once,
/// non-adjacent components are disjoint, and the total is anticanonical.
/// Mismatches yield `Ok(false)`; structural problems (missing classes,
/// length conflicts, cycles shorter than 3) are errors.
pub fn is_anticanonical_cycle(
    lattice: &PicardLattice,
    cycle: &AnticanonicalCycle,
) -> Result<bool, SurfaceError> {
    let classes = cycle.classes.as_ref().ok_or(SurfaceError::MissingClasses)?;
    let n = cycle.selfints.len();
    if classes.len() != n {
        return Err(SurfaceError::ClassCountMismatch { selfints: n, classes: classes.len() });
    }
    if n < 3 {
        return Err(SurfaceError::CycleTooShort { len: n, need: 3 });
    }
    for i in 0..n {
        if lattice.pairing(&classes[i], &classes[i])? != cycle.selfints[i] {
            return Ok(false);
        }
        if lattice.pairing(&classes[i], &classes[(i + 1) % n])? != 1 {
            return Ok(false);
        }
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if !adjacent && lattice.pairing(&classes[i], &classes[j])? != 0 {
                return Ok(false);
            }
        }
    }
    let mut total = vec![0i64; lattice.rank()];
    for class in classes {
        for (k, v) in lattice.embed(class)?.into_iter().enumerate() {
            total[k] += v;
        }
    }
    Ok(total == lattice.embed(&lattice.anticanonical())?)
}

/// Self-intersection of the whole cycle: Σ a_i + 2n, each of the n
/// corners (the node, for a one-component cycle) contributing 2.
pub fn cycle_self_intersection(cycle: &AnticanonicalCycle) -> Result<i64, SurfaceError> {
    let n = cycle.selfints.len();
    if n == 0 {
        return Err(SurfaceError::EmptyCycle);
    }
    Ok(cycle.selfints.iter().sum::<i64>() + 2 * n as i64)
}

fn check_index(cycle: &AnticanonicalCycle, index: usize) -> Result<(), SurfaceError> {
    if index >= cycle.selfints.len() {
        return Err(SurfaceError::IndexOutOfRange { index, len: cycle.selfints.len() });
    }
    Ok(())
}

/// Contracts a (-1)-component: the component disappears and both cyclic
/// neighbors gain +1. Needs at least 3 components so the result is still
/// a cycle. Divisor classes do not survive the change of lattice and are
/// dropped.
pub fn blow_down_cycle(
    cycle: &AnticanonicalCycle,
    index: usize,
) -> Result<AnticanonicalCycle, SurfaceError> {
    check_index(cycle, index)?;
    let n = cycle.selfints.len();
    if n < 3 {
        return Err(SurfaceError::CycleTooShort { len: n, need: 3 });
    }
    if cycle.selfints[index] != -1 {
        return Err(SurfaceError::NotMinusOneComponent {
            index,
            selfint: cycle.selfints[index],
        });
    }
    let mut selfints = cycle.selfints.clone();
    selfints[(index + 1) % n] += 1;
    selfints[(index + n - 1) % n] += 1;
    selfints.remove(index);
    Ok(AnticanonicalCycle { selfints, classes: None })
}

/// Blows up the corner where component `index` meets component
/// `index + 1`: both lose 1 and a fresh (-1)-component is inserted
/// between them. A one-component cycle has no corner between distinct
/// components, so at least 2 are required.
pub fn corner_blow_up_cycle(
    cycle: &AnticanonicalCycle,
    index: usize,
) -> Result<AnticanonicalCycle, SurfaceError> {
    check_index(cycle, index)?;
    let n = cycle.selfints.len();
    if n < 2 {
        return Err(SurfaceError::CycleTooShort { len: n, need: 2 });
    }
    let mut selfints = cycle.selfints.clone();
    selfints[index] -= 1;
    selfints[(index + 1) % n] -= 1;
    selfints.insert(index + 1, -1);
    Ok(AnticanonicalCycle { selfints, classes: None })
}

/// Blows up `count` interior points of component `index`, dropping its
/// self-intersection by `count`. This is the surface-level shadow of the
/// edge blow-up on intersection complexes.
pub fn interior_blow_up_cycle(
    cycle: &AnticanonicalCycle,
    index: usize,
    count: u32,
) -> Result<AnticanonicalCycle, SurfaceError> {
    check_index(cycle, index)?;
    if count == 0 {
        return Err(SurfaceError::ZeroCount);
    }
    let mut selfints = cycle.selfints.clone();
    selfints[index] -= count as i64;
    Ok(AnticanonicalCycle { selfints, classes: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(s: &str) -> DivisorClass {
        s.parse().unwrap()
    }

    fn heptagon() -> AnticanonicalCycle {
        AnticanonicalCycle {
            selfints: vec![-1, -1, -2, -2, -1, -2, 0],
            classes: Some(
                ["H-E2-E4", "E4", "E2-E4", "H-E1-E2-E3", "E3", "E1-E3", "H-E1"]
                    .into_iter()
                    .map(class)
                    .collect(),
            ),
        }
    }

    #[test]
    fn pairing_is_the_standard_diagonal_form() {
        let l = PicardLattice::new(4);
        let h = class("H");
        let e2 = class("E2");
        assert_eq!(l.pairing(&h, &h).unwrap(), 1);
        assert_eq!(l.pairing(&e2, &e2).unwrap(), -1);
        assert_eq!(l.pairing(&h, &e2).unwrap(), 0);
        let k = l.anticanonical();
        assert_eq!(l.pairing(&k, &k).unwrap(), 9 - 4);

        let a = class("2H-E1+3E3");
        let b = class("H+E1-E4");
        let sum = DivisorClass::new(
            (0..5).map(|i| a.coefficient(i) + b.coefficient(i)).collect(),
        );
        assert_eq!(
            l.pairing(&sum, &k).unwrap(),
            l.pairing(&a, &k).unwrap() + l.pairing(&b, &k).unwrap()
        );

        let too_big = class("E9");
        assert!(matches!(
            l.pairing(&too_big, &h),
            Err(SurfaceError::DimensionMismatch { expected: 5, got: 10 })
        ));
    }

    #[test]
    fn class_parsing_round_trips() {
        for s in ["H-E2-E4", "-2H+3E1", "0", "E4", "3H-E1-E2-E3-E4", "H"] {
            let c = class(s);
            assert_eq!(c.to_string(), s);
            assert_eq!(class(&c.to_string()), c);
        }
        assert_eq!(class(" H - E2 "), class("H-E2"));
        assert_eq!(class("E1+E1"), class("2E1"));
        assert_eq!(DivisorClass::new(vec![1, 0, -1, 0]), class("H-E2"));
        for bad in ["", "H-", "2X", "E0", "E", "++H"] {
            assert!(bad.parse::<DivisorClass>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn heptagon_cycle_is_anticanonical() {
        let l = PicardLattice::new(4);
        let cycle = heptagon();
        assert!(is_anticanonical_cycle(&l, &cycle).unwrap());
        assert_eq!(cycle_self_intersection(&cycle).unwrap(), 5);
        assert_eq!(l.pairing(&l.anticanonical(), &l.anticanonical()).unwrap(), 5);
    }

    #[test]
    fn perturbed_cycles_fail() {
        let l = PicardLattice::new(4);
        let mut wrong_selfint = heptagon();
        wrong_selfint.selfints[0] = -2;
        assert!(!is_anticanonical_cycle(&l, &wrong_selfint).unwrap());

        let mut wrong_class = heptagon();
        wrong_class.classes.as_mut().unwrap()[1] = class("E3");
        assert!(!is_anticanonical_cycle(&l, &wrong_class).unwrap());

        let mut no_classes = heptagon();
        no_classes.classes = None;
        assert!(matches!(
            is_anticanonical_cycle(&l, &no_classes),
            Err(SurfaceError::MissingClasses)
        ));

        let mut short = heptagon();
        short.selfints.truncate(2);
        short.classes.as_mut().unwrap().truncate(2);
        assert!(matches!(
            is_anticanonical_cycle(&l, &short),
            Err(SurfaceError::CycleTooShort { len: 2, need: 3 })
        ));
    }

    #[test]
    fn blow_down_merges_neighbors() {
        let cycle = AnticanonicalCycle { selfints: vec![-1, -5, -5], classes: None };
        let down = blow_down_cycle(&cycle, 0).unwrap();
        assert_eq!(down.selfints, vec![-4, -4]);
        assert_eq!(
            cycle_self_intersection(&down).unwrap(),
            cycle_self_intersection(&cycle).unwrap() + 1
        );

        assert!(matches!(
            blow_down_cycle(&cycle, 1),
            Err(SurfaceError::NotMinusOneComponent { index: 1, selfint: -5 })
        ));
        assert!(matches!(
            blow_down_cycle(&down, 0),
            Err(SurfaceError::CycleTooShort { .. })
        ));
        assert!(matches!(
            blow_down_cycle(&cycle, 7),
            Err(SurfaceError::IndexOutOfRange { index: 7, len: 3 })
        ));
    }

    #[test]
    fn corner_blow_up_inserts_a_minus_one() {
        let cycle = AnticanonicalCycle { selfints: vec![1, 1, 1], classes: None };
        let up = corner_blow_up_cycle(&cycle, 0).unwrap();
        assert_eq!(up.selfints, vec![0, -1, 0, 1]);
        assert_eq!(
            cycle_self_intersection(&up).unwrap(),
            cycle_self_intersection(&cycle).unwrap() - 1
        );
        let wrap = corner_blow_up_cycle(&cycle, 2).unwrap();
        assert_eq!(wrap.selfints, vec![0, 1, 0, -1]);

        let nodal = AnticanonicalCycle { selfints: vec![3], classes: None };
        assert!(matches!(
            corner_blow_up_cycle(&nodal, 0),
            Err(SurfaceError::CycleTooShort { len: 1, need: 2 })
        ));
    }

    #[test]
    fn interior_blow_up_drops_the_label() {
        let cycle = AnticanonicalCycle { selfints: vec![-1, -1], classes: None };
        let up = interior_blow_up_cycle(&cycle, 1, 3).unwrap();
        assert_eq!(up.selfints, vec![-1, -4]);
        assert!(matches!(
            interior_blow_up_cycle(&cycle, 1, 0),
            Err(SurfaceError::ZeroCount)
        ));
    }

    #[test]
    fn nodal_cycle_self_intersection() {
        let nodal = AnticanonicalCycle { selfints: vec![3], classes: None };
        assert_eq!(cycle_self_intersection(&nodal).unwrap(), 5);
        let empty = AnticanonicalCycle { selfints: vec![], classes: None };
        assert!(matches!(
            cycle_self_intersection(&empty),
            Err(SurfaceError::EmptyCycle)
        ));
    }
}
