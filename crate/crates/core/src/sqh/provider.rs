use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::RwLock;

use serde::Serialize;
use thiserror::Error;

use super::{normalize, BaseKind, ProviderTier, SigmaError, TerminalBase};
use crate::branch_moduli::{branch_invariants, CharPair};
use crate::numtheory::gcd;
use crate::scalar::IntScalar;

/// Where a table entry came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Oracle,
    Delorme,
    Manual,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Oracle => "oracle",
            Provenance::Delorme => "delorme",
            Provenance::Manual => "manual",
        })
    }
}

impl FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "oracle" => Ok(Provenance::Oracle),
            "delorme" => Ok(Provenance::Delorme),
            "manual" => Ok(Provenance::Manual),
            other => Err(format!("unknown provenance {other:?}")),
        }
    }
}

#[derive(Debug, Error)]
pub enum TableError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableEntry<T> {
    pub sigma: T,
    pub provenance: Provenance,
}

/// Persistent `sigma` values for terminal pairs, keyed on `(max, min)`.
///
/// On disk: one record `a b sigma provenance` per line, `#` starts a comment.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SigmaTable<T: Ord> {
    entries: BTreeMap<(T, T), TableEntry<T>>,
}

impl<T: IntScalar> SigmaTable<T> {
    pub fn new() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, a: T, b: T, sigma: T, provenance: Provenance) {
        self.entries
            .insert(normalize(a, b), TableEntry { sigma, provenance });
    }

    pub fn get(&self, a: &T, b: &T) -> Option<&TableEntry<T>> {
        self.entries.get(&normalize(a.clone(), b.clone()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(T, T), &TableEntry<T>)> {
        self.entries.iter()
    }

    pub fn read_from(reader: impl BufRead) -> Result<Self, TableError> {
        let mut table = Self::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| TableError::Parse { line: idx + 1, msg };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(err(format!("expected 4 fields, found {}", fields.len())));
            }
            let num = |s: &str| {
                s.parse::<i64>()
                    .ok()
                    .and_then(T::from_i64)
                    .ok_or_else(|| err(format!("bad integer {s:?}")))
            };
            let (a, b, sigma) = (num(fields[0])?, num(fields[1])?, num(fields[2])?);
            if a < T::one() || b < T::one() || sigma.is_negative() {
                return Err(err("values must be positive (sigma non-negative)".into()));
            }
            let provenance = fields[3].parse().map_err(err)?;
            table.insert(a, b, sigma, provenance);
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self, TableError> {
        let file = std::fs::File::open(path)?;
        Self::read_from(std::io::BufReader::new(file))
    }

    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "# a b sigma provenance")?;
        for ((a, b), e) in &self.entries {
            writeln!(w, "{a} {b} {} {}", e.sigma, e.provenance)?;
        }
        Ok(())
    }
}

/// When the one-pair formulas may resolve a coprime terminal pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DelormeTier {
    Disabled,
    /// Only for pairs reached after at least one step, so that comparing the
    /// two routes on the starting pair is not circular.
    BelowTopLevel,
    Enabled,
}

/// Resolves terminal pairs of the recursion, trying in order: the trivial
/// rule, the one-pair formulas for coprime pairs, then the lookup table.
#[derive(Debug)]
pub struct BaseCaseProvider<T: IntScalar> {
    delorme: DelormeTier,
    table: SigmaTable<T>,
    memo: RwLock<HashMap<(T, T), T>>,
}

impl<T: IntScalar> BaseCaseProvider<T> {
    pub fn new(delorme: DelormeTier) -> Self {
        Self::with_table(delorme, SigmaTable::new())
    }

    pub fn with_table(delorme: DelormeTier, table: SigmaTable<T>) -> Self {
        Self {
            delorme,
            table,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn table(&self) -> &SigmaTable<T> {
        &self.table
    }

    pub fn delorme_tier(&self) -> DelormeTier {
        self.delorme
    }

    /// `depth` is the number of recursion steps taken before reaching `(a, b)`.
    pub fn resolve(
        &self,
        a: &T,
        b: &T,
        kind: BaseKind,
        depth: usize,
    ) -> Result<TerminalBase<T>, SigmaError> {
        let (a, b) = normalize(a.clone(), b.clone());
        if kind == BaseKind::Trivial || b <= T::of(2) {
            return Ok(TerminalBase {
                pair: (a, b),
                kind,
                value: T::zero(),
                provider_tier: ProviderTier::Trivial,
            });
        }
        let delorme_allowed = match self.delorme {
            DelormeTier::Disabled => false,
            DelormeTier::BelowTopLevel => depth > 0,
            DelormeTier::Enabled => true,
        };
        if delorme_allowed && gcd(&a, &b).is_one() && a > b {
            let value = self.delorme_sigma(&a, &b)?;
            return Ok(TerminalBase {
                pair: (a, b),
                kind,
                value,
                provider_tier: ProviderTier::CoprimeDelorme,
            });
        }
        if let Some(entry) = self.table.get(&a, &b) {
            return Ok(TerminalBase {
                pair: (a, b),
                kind,
                value: entry.sigma.clone(),
                provider_tier: ProviderTier::Table(entry.provenance),
            });
        }
        Err(SigmaError::BaseCaseUnavailable {
            a: a.to_string(),
            b: b.to_string(),
            kind,
        })
    }

    /// `(a-1)(b-1) - tau_min` of the branch with characteristic pair `(b, a)`.
    fn delorme_sigma(&self, a: &T, b: &T) -> Result<T, SigmaError> {
        let key = (a.clone(), b.clone());
        if let Some(v) = self.memo.read().expect("memo lock").get(&key) {
            return Ok(v.clone());
        }
        let inv = branch_invariants(&CharPair::new(b.clone(), a.clone())?)?;
        let value = inv.mu - inv.tau_min;
        self.memo
            .write()
            .expect("memo lock")
            .insert(key, value.clone());
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_round_trip() {
        let text = "# header\n9 3 0 oracle\n\n4 4 0 manual\n";
        let t = SigmaTable::<i64>::read_from(text.as_bytes()).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.get(&3, &9).unwrap().provenance, Provenance::Oracle);
        let mut out = Vec::new();
        t.write_to(&mut out).unwrap();
        let back = SigmaTable::<i64>::read_from(out.as_slice()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn table_parse_errors() {
        assert!(SigmaTable::<i64>::read_from("9 3 0".as_bytes()).is_err());
        assert!(SigmaTable::<i64>::read_from("9 3 x oracle".as_bytes()).is_err());
        assert!(SigmaTable::<i64>::read_from("9 3 0 guess".as_bytes()).is_err());
        assert!(SigmaTable::<i64>::read_from("9 3 -1 oracle".as_bytes()).is_err());
    }

    #[test]
    fn tiers_in_order() {
        let mut table = SigmaTable::new();
        table.insert(7i64, 3, 99, Provenance::Manual);
        table.insert(9, 3, 0, Provenance::Oracle);
        let p = BaseCaseProvider::with_table(DelormeTier::BelowTopLevel, table);
        let trivial = p.resolve(&5, &2, BaseKind::Trivial, 0).unwrap();
        assert_eq!(trivial.provider_tier, ProviderTier::Trivial);
        // top level: Delorme tier disabled, falls through to the table
        let top = p.resolve(&7, &3, BaseKind::Sigma1, 0).unwrap();
        assert_eq!((top.value, top.provider_tier), (99, ProviderTier::Table(Provenance::Manual)));
        let deep = p.resolve(&7, &3, BaseKind::Sigma1, 1).unwrap();
        assert_eq!((deep.value, deep.provider_tier), (1, ProviderTier::CoprimeDelorme));
        let tab = p.resolve(&9, &3, BaseKind::Sigma0, 2).unwrap();
        assert_eq!(tab.provider_tier, ProviderTier::Table(Provenance::Oracle));
        assert!(p.resolve(&12, &8, BaseKind::SigmaHalf, 1).is_err());
    }
}
