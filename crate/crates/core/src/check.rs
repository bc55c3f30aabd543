//! Named boolean outcomes collected by the verification routines.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Checks(Vec<Check>);

impl Checks {
    pub fn new() -> Self {
        Checks(Vec::new())
    }

    pub fn push(&mut self, name: impl Into<String>, holds: bool) {
        self.0.push(Check {
            name: name.into(),
            holds,
        });
    }

    pub fn extend(&mut self, other: Checks) {
        self.0.extend(other.0);
    }

    /// Appends every check of `other`, prefixing the names.
    pub fn extend_prefixed(&mut self, prefix: &str, other: Checks) {
        for c in other.0 {
            self.0.push(Check {
                name: format!("{prefix}: {}", c.name),
                holds: c.holds,
            });
        }
    }

    pub fn all_hold(&self) -> bool {
        self.0.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.0.iter().filter(|c| !c.holds).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Check> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Checks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            writeln!(f, "[{}] {}", if c.holds { "ok" } else { "FAIL" }, c.name)?;
        }
        Ok(())
    }
}
