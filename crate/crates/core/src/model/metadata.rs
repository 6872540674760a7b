use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

/// Seven-level qualitative scale used for every statement parameter.
///
/// The model stores symbols; numeric anchors are only consulted by the
/// reasoner's certainty heuristics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Qualitative {
    None,
    VeryLow,
    Low,
    Medium,
    High,
    VeryHigh,
    Certain,
}

impl Qualitative {
    pub const ALL: [Qualitative; 7] = [
        Qualitative::None,
        Qualitative::VeryLow,
        Qualitative::Low,
        Qualitative::Medium,
        Qualitative::High,
        Qualitative::VeryHigh,
        Qualitative::Certain,
    ];

    pub fn anchor(self) -> f64 {
        match self {
            Qualitative::None => 0.0,
            Qualitative::VeryLow => 0.1,
            Qualitative::Low => 0.2,
            Qualitative::Medium => 0.5,
            Qualitative::High => 0.8,
            Qualitative::VeryHigh => 0.9,
            Qualitative::Certain => 1.0,
        }
    }

    /// Nearest level to `x`; exact ties go to the lower level.
    pub fn quantize(x: f64) -> Qualitative {
        let mut best = Qualitative::None;
        let mut best_distance = f64::INFINITY;
        for level in Self::ALL {
            let d = (level.anchor() - x).abs();
            if d < best_distance - 1e-12 {
                best = level;
                best_distance = d;
            }
        }
        best
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Qualitative::None => "none",
            Qualitative::VeryLow => "very-low",
            Qualitative::Low => "low",
            Qualitative::Medium => "medium",
            Qualitative::High => "high",
            Qualitative::VeryHigh => "very-high",
            Qualitative::Certain => "certain",
        }
    }
}

impl fmt::Display for Qualitative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown qualitative value `{0}`")]
pub struct UnknownLevel(pub String);

impl FromStr for Qualitative {
    type Err = UnknownLevel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|level| level.symbol() == s)
            .ok_or_else(|| UnknownLevel(s.to_string()))
    }
}

/// Predefined parameter names. Any other identifier is accepted as a
/// user-defined parameter.
pub mod params {
    pub const CERTAINTY: &str = "certainty";
    pub const STRENGTH: &str = "strength";
    pub const INVERSE: &str = "inverse";
    pub const TYPICALITY: &str = "typicality";
    pub const SIMILARITY: &str = "similarity";
    pub const DOMINANCE: &str = "dominance";
    pub const MULTIPLICITY: &str = "multiplicity";
}

/// Statement metadata: at most one value per parameter.
///
/// Entries keep their source order for serialization, but equality and
/// hashing ignore that order.
#[derive(Debug, Clone, Default)]
pub struct Metadata {
    entries: Vec<(String, Qualitative)>,
}

impl Metadata {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns false (and leaves the metadata unchanged) if `name` is
    /// already present.
    pub fn insert(&mut self, name: impl Into<String>, value: Qualitative) -> bool {
        let name = name.into();
        if self.get(&name).is_some() {
            return false;
        }
        self.entries.push((name, value));
        true
    }

    pub fn with(mut self, name: impl Into<String>, value: Qualitative) -> Self {
        self.insert(name, value);
        self
    }

    pub fn get(&self, name: &str) -> Option<Qualitative> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Qualitative)> {
        self.entries.iter().map(|(n, v)| (n.as_str(), *v))
    }

    /// Stated certainty, defaulting to `certain` when absent.
    pub fn certainty(&self) -> Qualitative {
        self.get(params::CERTAINTY).unwrap_or(Qualitative::Certain)
    }

    fn sorted(&self) -> Vec<&(String, Qualitative)> {
        let mut v: Vec<_> = self.entries.iter().collect();
        v.sort();
        v
    }
}

impl PartialEq for Metadata {
    fn eq(&self, other: &Self) -> bool {
        self.entries.len() == other.entries.len()
            && self.entries.iter().all(|(n, v)| other.get(n) == Some(*v))
    }
}

impl Eq for Metadata {}

impl Hash for Metadata {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for (name, value) in self.sorted() {
            name.hash(state);
            value.hash(state);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::hash_map::DefaultHasher;

    fn hash_of(m: &Metadata) -> u64 {
        let mut h = DefaultHasher::new();
        m.hash(&mut h);
        h.finish()
    }

    #[test]
    fn order_is_ignored_for_identity() {
        let a = Metadata::new()
            .with("strength", Qualitative::High)
            .with("inverse", Qualitative::Low);
        let b = Metadata::new()
            .with("inverse", Qualitative::Low)
            .with("strength", Qualitative::High);
        assert_eq!(a, b);
        assert_eq!(hash_of(&a), hash_of(&b));
        assert_eq!(a.iter().next().unwrap().0, "strength");
    }

    #[test]
    fn content_is_not_ignored() {
        let a = Metadata::new().with("certainty", Qualitative::High);
        let b = Metadata::new().with("certainty", Qualitative::Low);
        assert_ne!(a, b);
    }

    #[test]
    fn duplicate_parameter_rejected() {
        let mut m = Metadata::new();
        assert!(m.insert("certainty", Qualitative::High));
        assert!(!m.insert("certainty", Qualitative::Low));
        assert_eq!(m.get("certainty"), Some(Qualitative::High));
    }

    #[test]
    fn quantize_ties_go_down() {
        assert_eq!(Qualitative::quantize(0.35), Qualitative::Low);
        assert_eq!(Qualitative::quantize(0.65), Qualitative::Medium);
        assert_eq!(Qualitative::quantize(0.05), Qualitative::None);
        assert_eq!(Qualitative::quantize(0.8), Qualitative::High);
        assert_eq!(Qualitative::quantize(1.0 - 0.2), Qualitative::High);
        assert_eq!(Qualitative::quantize(0.96), Qualitative::Certain);
    }

    #[test]
    fn symbols_round_trip() {
        for level in Qualitative::ALL {
            assert_eq!(level.symbol().parse::<Qualitative>().unwrap(), level);
            assert_eq!(Qualitative::quantize(level.anchor()), level);
        }
        assert!("huge".parse::<Qualitative>().is_err());
    }
}
