//! Integer compositions: ordered sequences of positive integers.
//!
//! A composition `I = (I_1, ..., I_m)` indexes both the operator word
//! `P_{2I_1} ... P_{2I_m}` and the interpolation polynomial `r_I`. Order
//! matters: `(1,2)` and `(2,1)` are different compositions.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nonempty sequence of positive integers.
///
/// Ordered canonically by length, then lexicographically on the entries.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Domain("composition must be nonempty".into()));
        }
        if entries.contains(&0) {
            return Err(Error::Domain("composition entries must be positive".into()));
        }
        Ok(Composition(entries))
    }

    /// The one-entry composition `(k)`.
    pub fn single(k: u32) -> Self {
        assert!(k >= 1, "composition entries must be positive");
        Composition(vec![k])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// `|I|`, the sum of the entries.
    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `m`, the number of entries.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> u32 {
        self.0[0]
    }

    pub fn last(&self) -> u32 {
        *self.0.last().expect("nonempty")
    }

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &Composition) -> Composition {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Composition(v)
    }

    /// `(self, k)`.
    pub fn push(&self, k: u32) -> Composition {
        assert!(k >= 1);
        let mut v = self.0.clone();
        v.push(k);
        Composition(v)
    }

    /// `I = (J, k)` with `k = I_last`; `J` is `None` when `I = (k)`.
    pub fn split_last(&self) -> (Option<Composition>, u32) {
        let k = self.last();
        if self.0.len() == 1 {
            (None, k)
        } else {
            (Some(Composition(self.0[..self.0.len() - 1].to_vec())), k)
        }
    }

    /// Every split `I = (prefix | suffix)` with both parts nonempty, by
    /// increasing prefix length.
    pub fn prefix_splits(&self) -> Vec<(Composition, Composition)> {
        (1..self.0.len())
            .map(|i| (Composition(self.0[..i].to_vec()), Composition(self.0[i..].to_vec())))
            .collect()
    }

    /// All ways to cut `I` into consecutive nonempty blocks.
    ///
    /// The cut pattern is read off a bitmask over the `m - 1` gaps, so the
    /// uncut composition comes first.
    pub fn subdivisions(&self) -> Vec<Vec<Composition>> {
        let gaps = self.0.len() - 1;
        (0u64..(1u64 << gaps))
            .map(|mask| {
                let mut blocks = Vec::new();
                let mut start = 0;
                for g in 0..gaps {
                    if mask >> g & 1 == 1 {
                        blocks.push(Composition(self.0[start..=g].to_vec()));
                        start = g + 1;
                    }
                }
                blocks.push(Composition(self.0[start..].to_vec()));
                blocks
            })
            .collect()
    }
}

impl Ord for Composition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Composition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<Vec<u32>> for Composition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Composition::new(v)
    }
}

impl From<Composition> for Vec<u32> {
    fn from(c: Composition) -> Self {
        c.0
    }
}

impl fmt::Display for Composition {
    /// Comma-joined entries, e.g. `1,2,1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Composition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let entries = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("invalid composition entry '{p}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Composition::new(entries)
    }
}

/// All `2^(size-1)` compositions of `size` in canonical order.
pub fn enumerate_compositions(size: u32) -> Result<Vec<Composition>> {
    if size == 0 {
        return Err(Error::Domain("composition size must be positive".into()));
    }
    let gaps = size - 1;
    let mut out: Vec<Composition> = (0u64..(1u64 << gaps))
        .map(|mask| {
            let mut entries = Vec::new();
            let mut run = 1;
            for g in 0..gaps {
                if mask >> g & 1 == 1 {
                    entries.push(run);
                    run = 1;
                } else {
                    run += 1;
                }
            }
            entries.push(run);
            Composition(entries)
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Compositions of every size in `1..=max_size`, grouped by size.
pub fn compositions_up_to(max_size: u32) -> Vec<Composition> {
    (1..=max_size)
        .flat_map(|s| enumerate_compositions(s).expect("positive size"))
        .collect()
}
