//! Connection sets, Cayley digraphs over `Z_n` and unit orbits.

mod oracle;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zn::{check_modulus, units};

pub use oracle::{brute_force_isomorphic, DEFAULT_ORACLE_CUTOFF};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Digraph,
    Graph,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Digraph => "digraph",
            Mode::Graph => "graph",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "digraph" => Ok(Mode::Digraph),
            "graph" => Ok(Mode::Graph),
            other => Err(Error::InvalidConnectionSet(format!("unknown mode {other:?}"))),
        }
    }
}

/// A subset of `Z_n ∖ {0}`; in graph mode it is also inverse-closed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConnectionSet {
    n: u64,
    members: Vec<u64>,
    mode: Mode,
}

impl ConnectionSet {
    /// Members are deduplicated and sorted; residues must lie in `1..n`.
    pub fn new(n: u64, mut members: Vec<u64>, mode: Mode) -> Result<Self> {
        check_modulus(n)?;
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&s| s == 0 || s >= n) {
            return Err(Error::InvalidConnectionSet(if bad == 0 {
                "0 is not allowed in a connection set".to_string()
            } else {
                format!("{bad} is not a residue mod {n}")
            }));
        }
        if mode == Mode::Graph {
            if let Some(&s) = members
                .iter()
                .find(|&&s| members.binary_search(&(n - s)).is_err())
            {
                return Err(Error::InvalidConnectionSet(format!(
                    "graph mode needs an inverse-closed set: {s} ∈ S but {} ∉ S",
                    n - s
                )));
            }
        }
        Ok(ConnectionSet { n, members, mode })
    }

    /// Adds `-s` for every member before validating.
    pub fn with_inverses(n: u64, mut members: Vec<u64>, mode: Mode) -> Result<Self> {
        let inverses: Vec<u64> = members.iter().map(|&s| (n - s % n) % n).collect();
        members.extend(inverses);
        ConnectionSet::new(n, members, mode)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_inverse_closed(&self) -> bool {
        self.members.iter().all(|&s| self.contains(self.n - s))
    }

    /// `u·S` for a unit `u`.
    pub fn scale(&self, u: u64) -> ConnectionSet {
        let mut members: Vec<u64> = self.members.iter().map(|&s| s * u % self.n).collect();
        members.sort_unstable();
        ConnectionSet {
            n: self.n,
            members,
            mode: self.mode,
        }
    }

    /// Same mode, new members already known to be valid (sorted, nonzero, closed).
    pub(crate) fn with_members(&self, n: u64, members: Vec<u64>) -> ConnectionSet {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        ConnectionSet {
            n,
            members,
            mode: self.mode,
        }
    }
}

impl fmt::Display for ConnectionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for ConnectionSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(&self.members)
    }
}

/// Parses a comma-separated residue list such as `1,2,5`. The empty string
/// is the empty set.
pub fn parse_residues(text: &str) -> Result<Vec<u64>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|item| {
            item.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidConnectionSet(format!("cannot parse residue {item:?}")))
        })
        .collect()
}

/// `Cay(Z_n, S)` with dense adjacency.
#[derive(Debug, Clone)]
pub struct CayleyDigraph {
    n: u64,
    connection: ConnectionSet,
    out: Vec<Vec<u64>>,
    adjacency: Vec<Vec<bool>>,
}

impl CayleyDigraph {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn connection(&self) -> &ConnectionSet {
        &self.connection
    }

    pub fn out_neighbors(&self, g: u64) -> &[u64] {
        &self.out[g as usize]
    }

    pub fn has_arc(&self, from: u64, to: u64) -> bool {
        self.adjacency[from as usize][to as usize]
    }

    pub fn arcs(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(g, outs)| outs.iter().map(move |&h| (g as u64, h)))
    }

    pub(crate) fn adjacency(&self) -> &[Vec<bool>] {
        &self.adjacency
    }
}

pub fn build_cayley(set: &ConnectionSet) -> CayleyDigraph {
    let n = set.n;
    let mut adjacency = vec![vec![false; n as usize]; n as usize];
    let out = (0..n)
        .map(|g| {
            let mut outs: Vec<u64> = set.members.iter().map(|&s| (s + g) % n).collect();
            outs.sort_unstable();
            for &h in &outs {
                adjacency[g as usize][h as usize] = true;
            }
            outs
        })
        .collect();
    CayleyDigraph {
        n,
        connection: set.clone(),
        out,
        adjacency,
    }
}

/// The `Aut(Z_n)`-orbit `{u·S}` of a connection set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub members: Vec<ConnectionSet>,
    pub representative: ConnectionSet,
}

impl Orbit {
    pub fn contains(&self, set: &ConnectionSet) -> bool {
        self.members.binary_search(set).is_ok()
    }
}

pub fn aut_orbit(set: &ConnectionSet) -> Orbit {
    let mut members: Vec<ConnectionSet> = units(set.n)
        .expect("connection set modulus is at least 2")
        .into_iter()
        .map(|u| set.scale(u))
        .collect();
    members.sort();
    members.dedup();
    let representative = members[0].clone();
    Orbit {
        members,
        representative,
    }
}

/// Lexicographically least member of the unit orbit.
pub fn orbit_representative(set: &ConnectionSet) -> ConnectionSet {
    aut_orbit(set).representative
}
