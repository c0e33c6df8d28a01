//! Sign conventions and graph-space descriptors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// How a graph symmetry acts on orientation data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Sign of the induced permutation of edges.
    Even,
    /// Sign of the vertex permutation times `(-1)^{#reversed edges}`.
    Odd,
}

impl Convention {
    pub fn is_even(self) -> bool {
        self == Convention::Even
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Even => "even",
            Convention::Odd => "odd",
        })
    }
}

/// One space of graphs: sign convention, which degenerate edges are allowed,
/// and the minimal vertex valence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Flavor {
    pub convention: Convention,
    pub tadpoles: bool,
    pub multiedges: bool,
    pub min_valence: u8,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown flavor `{0}` (expected even, odd, even* or odd*)")]
pub struct UnknownFlavor(pub String);

impl Flavor {
    pub const EVEN: Flavor = Flavor {
        convention: Convention::Even,
        tadpoles: true,
        multiedges: true,
        min_valence: 3,
    };
    pub const ODD: Flavor = Flavor {
        convention: Convention::Odd,
        tadpoles: false,
        multiedges: true,
        min_valence: 3,
    };
    pub const EVEN_STAR: Flavor = Flavor {
        convention: Convention::Even,
        tadpoles: false,
        multiedges: true,
        min_valence: 3,
    };
    pub const ODD_STAR: Flavor = Flavor {
        convention: Convention::Odd,
        tadpoles: false,
        multiedges: false,
        min_valence: 3,
    };

    pub const ALL: [Flavor; 4] = [Flavor::EVEN, Flavor::EVEN_STAR, Flavor::ODD, Flavor::ODD_STAR];

    /// All valences allowed, tadpoles and multiple edges kept.
    pub fn unrestricted(convention: Convention) -> Flavor {
        Flavor {
            convention,
            tadpoles: true,
            multiedges: true,
            min_valence: 0,
        }
    }

    pub fn with_min_valence(self, min_valence: u8) -> Flavor {
        Flavor { min_valence, ..self }
    }

    /// Name of one of the four standard flavors, if this is one.
    pub fn name(&self) -> Option<&'static str> {
        match *self {
            Flavor::EVEN => Some("even"),
            Flavor::ODD => Some("odd"),
            Flavor::EVEN_STAR => Some("even*"),
            Flavor::ODD_STAR => Some("odd*"),
            _ => None,
        }
    }

    /// Whether this is one of the four flavors that have closed-form
    /// generating functions.
    pub fn is_standard(&self) -> bool {
        self.name().is_some()
    }

    pub fn is_starred(&self) -> bool {
        matches!(*self, Flavor::EVEN_STAR | Flavor::ODD_STAR)
    }

    /// The flavor with tadpoles and multiple edges allowed again. Starred
    /// flavors map to their plain counterpart.
    pub fn unstarred(&self) -> Flavor {
        match self.convention {
            Convention::Even => Flavor::EVEN,
            Convention::Odd => Flavor::ODD,
        }
        .with_min_valence(self.min_valence)
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name() {
            Some(n) => f.write_str(n),
            None => write!(
                f,
                "{}[tadpoles={},multiedges={},min_valence={}]",
                self.convention, self.tadpoles, self.multiedges, self.min_valence
            ),
        }
    }
}

impl FromStr for Flavor {
    type Err = UnknownFlavor;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "even" => Ok(Flavor::EVEN),
            "odd" => Ok(Flavor::ODD),
            "even*" | "even_star" | "evenstar" => Ok(Flavor::EVEN_STAR),
            "odd*" | "odd_star" | "oddstar" => Ok(Flavor::ODD_STAR),
            other => Err(UnknownFlavor(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_parse_roundtrip() {
        for f in Flavor::ALL {
            assert_eq!(f.to_string().parse::<Flavor>().unwrap(), f);
        }
        assert!("even**".parse::<Flavor>().is_err());
        assert_eq!(Flavor::ODD_STAR.unstarred(), Flavor::ODD);
        assert!(Flavor::unrestricted(Convention::Even).name().is_none());
    }
}
