//! Plain records for validation logs and identity evaluations.

use alloc::string::String;
use core::fmt;

/// One named validation step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckItem {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckItem {
    pub fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        CheckItem {
            name,
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for CheckItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "pass" } else { "FAIL" };
        if self.detail.is_empty() {
            write!(f, "[{tag}] {}", self.name)
        } else {
            write!(f, "[{tag}] {}: {}", self.name, self.detail)
        }
    }
}

/// Both sides of an identity, evaluated independently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs: String,
    pub rhs: String,
    pub passed: bool,
}

impl IdentityCheck {
    /// Compares two displayable values by equality.
    pub fn equal<T: PartialEq + fmt::Display>(name: &'static str, lhs: &T, rhs: &T) -> Self {
        IdentityCheck {
            name,
            lhs: alloc::format!("{lhs}"),
            rhs: alloc::format!("{rhs}"),
            passed: lhs == rhs,
        }
    }

    /// Compares two integers modulo 2.
    pub fn congruent_mod2(name: &'static str, lhs: i64, rhs: i64) -> Self {
        IdentityCheck {
            name,
            lhs: alloc::format!("{lhs}"),
            rhs: alloc::format!("{rhs}"),
            passed: (lhs - rhs).rem_euclid(2) == 0,
        }
    }
}

impl fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "pass" } else { "FAIL" };
        write!(f, "[{tag}] {}: {} vs {}", self.name, self.lhs, self.rhs)
    }
}
