//! The seven structural properties a mechanism may be asked to satisfy, and
//! predicates that check them on a concrete matrix.

use alloc::string::ToString;
use core::fmt;
use core::str::FromStr;

use crate::error::Error;
use crate::mechanism::Mechanism;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    /// `Pr[i|i] >= Pr[i|j]` for all `i, j`.
    RowHonesty,
    /// Entries of each row are non-increasing moving away from the diagonal.
    RowMonotone,
    /// `Pr[j|j] >= Pr[i|j]` for all `i, j`.
    ColumnHonesty,
    /// Entries of each column are non-increasing moving away from the diagonal.
    ColumnMonotone,
    /// Constant diagonal.
    Fairness,
    /// Every diagonal entry is at least `1/(n+1)`.
    WeakHonesty,
    /// Centrosymmetry: `Pr[i|j] = Pr[n-i|n-j]`.
    Symmetry,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::RowHonesty,
        Property::RowMonotone,
        Property::ColumnHonesty,
        Property::ColumnMonotone,
        Property::Fairness,
        Property::WeakHonesty,
        Property::Symmetry,
    ];

    pub fn abbrev(self) -> &'static str {
        match self {
            Property::RowHonesty => "RH",
            Property::RowMonotone => "RM",
            Property::ColumnHonesty => "CH",
            Property::ColumnMonotone => "CM",
            Property::Fairness => "F",
            Property::WeakHonesty => "WH",
            Property::Symmetry => "S",
        }
    }

    #[inline]
    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.abbrev())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let p = match s.trim().to_ascii_lowercase().as_str() {
            "rh" | "row-honesty" | "row_honesty" => Property::RowHonesty,
            "rm" | "row-monotone" | "row_monotone" => Property::RowMonotone,
            "ch" | "column-honesty" | "column_honesty" => Property::ColumnHonesty,
            "cm" | "column-monotone" | "column_monotone" => Property::ColumnMonotone,
            "f" | "fairness" | "fair" => Property::Fairness,
            "wh" | "weak-honesty" | "weak_honesty" => Property::WeakHonesty,
            "s" | "symmetry" | "symmetric" => Property::Symmetry,
            _ => return Err(Error::UnknownProperty(s.to_string())),
        };
        Ok(p)
    }
}

/// A subset of the seven properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ConstraintSet(u8);

impl ConstraintSet {
    pub const fn empty() -> Self {
        Self(0)
    }

    pub const fn all() -> Self {
        Self(0b111_1111)
    }

    /// Builds a set from its 7-bit mask (bit `k` = `Property::ALL[k]`).
    pub const fn from_bits(bits: u8) -> Self {
        Self(bits & 0b111_1111)
    }

    pub const fn bits(self) -> u8 {
        self.0
    }

    pub fn contains(self, p: Property) -> bool {
        self.0 & p.bit() != 0
    }

    pub fn insert(&mut self, p: Property) {
        self.0 |= p.bit();
    }

    pub fn with(mut self, p: Property) -> Self {
        self.insert(p);
        self
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: ConstraintSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: ConstraintSet) -> Self {
        Self(self.0 | other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = Property> {
        Property::ALL.into_iter().filter(move |p| self.contains(*p))
    }

    /// Closes the set under RM => RH, CM => CH, CH => WH and the two
    /// fairness implications (F + RH => CH, F + CH => RH).
    pub fn closure(self) -> Self {
        use Property::*;
        let mut set = self;
        loop {
            let before = set;
            if set.contains(RowMonotone) {
                set.insert(RowHonesty);
            }
            if set.contains(ColumnMonotone) {
                set.insert(ColumnHonesty);
            }
            if set.contains(ColumnHonesty) {
                set.insert(WeakHonesty);
            }
            if set.contains(Fairness) && set.contains(RowHonesty) {
                set.insert(ColumnHonesty);
            }
            if set.contains(Fairness) && set.contains(ColumnHonesty) {
                set.insert(RowHonesty);
            }
            if set == before {
                return set;
            }
        }
    }
}

impl FromIterator<Property> for ConstraintSet {
    fn from_iter<I: IntoIterator<Item = Property>>(iter: I) -> Self {
        let mut set = Self::empty();
        for p in iter {
            set.insert(p);
        }
        set
    }
}

impl fmt::Display for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            f.write_str(p.abbrev())?;
        }
        Ok(())
    }
}

impl FromStr for ConstraintSet {
    type Err = Error;

    /// Parses a comma-separated list. Accepts `none`/empty, the canonical names,
    /// `all`, and the aliases `wm-weak` = {WH} and `wm-column` = {WH, RM, CM}.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut set = Self::empty();
        for token in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match token.to_ascii_lowercase().as_str() {
                "none" | "basicdp" => {}
                "all" => set = set.union(Self::all()),
                "wm-weak" => set.insert(Property::WeakHonesty),
                "wm-column" => {
                    set.insert(Property::WeakHonesty);
                    set.insert(Property::RowMonotone);
                    set.insert(Property::ColumnMonotone);
                }
                _ => set.insert(token.parse()?),
            }
        }
        Ok(set)
    }
}

/// Evaluates one property predicate. Inequalities are non-strict with additive
/// slack `tol`; equalities hold within `tol`.
pub fn check_property(m: &Mechanism, prop: Property, tol: f64) -> bool {
    let n = m.n();
    let p = |i: usize, j: usize| m.get(i, j);
    match prop {
        Property::RowHonesty => (0..=n).all(|i| (0..=n).all(|j| p(i, i) >= p(i, j) - tol)),
        Property::ColumnHonesty => (0..=n).all(|j| (0..=n).all(|i| p(j, j) >= p(i, j) - tol)),
        Property::RowMonotone => (0..=n).all(|i| {
            (1..=i).all(|j| p(i, j - 1) <= p(i, j) + tol) && (i..n).all(|j| p(i, j + 1) <= p(i, j) + tol)
        }),
        Property::ColumnMonotone => (0..=n).all(|j| {
            (1..=j).all(|i| p(i - 1, j) <= p(i, j) + tol) && (j..n).all(|i| p(i + 1, j) <= p(i, j) + tol)
        }),
        Property::Fairness => (1..=n).all(|i| (p(i, i) - p(0, 0)).abs() <= tol),
        Property::WeakHonesty => {
            let floor = 1.0 / (n + 1) as f64;
            (0..=n).all(|i| p(i, i) >= floor - tol)
        }
        Property::Symmetry => (0..=n).all(|i| (0..=n).all(|j| (p(i, j) - p(n - i, n - j)).abs() <= tol)),
    }
}

/// The subset of properties that hold on `m`.
pub fn satisfied(m: &Mechanism, tol: f64) -> ConstraintSet {
    Property::ALL
        .into_iter()
        .filter(|&prop| check_property(m, prop, tol))
        .collect()
}
