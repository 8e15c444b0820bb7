use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::SymError;

/// Value domain of a symbol. Drives conjugation and random sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Domain {
    Complex,
    Real,
    /// Real and strictly positive (masses, couplings, ħ).
    Positive,
}

impl Domain {
    pub fn is_real(self) -> bool {
        !matches!(self, Domain::Complex)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    name: Arc<str>,
    domain: Domain,
}

impl Symbol {
    pub fn new(name: &str, domain: Domain) -> Self {
        Symbol { name: Arc::from(name), domain }
    }

    pub fn real(name: &str) -> Self {
        Symbol::new(name, Domain::Real)
    }

    pub fn positive(name: &str) -> Self {
        Symbol::new(name, Domain::Positive)
    }

    pub fn complex(name: &str) -> Self {
        Symbol::new(name, Domain::Complex)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn is_real(&self) -> bool {
        self.domain.is_real()
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Coordinate `x0..x5`.
pub fn coord(index: usize) -> Symbol {
    assert!(index < 6, "coordinate index {index} out of range");
    Symbol::real(COORD_NAMES[index])
}

pub const COORD_NAMES: [&str; 6] = ["x0", "x1", "x2", "x3", "x4", "x5"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymbolKind {
    Coordinate(usize),
    Parameter,
}

#[derive(Clone, Debug)]
pub struct SymbolInfo {
    pub symbol: Symbol,
    pub kind: SymbolKind,
}

/// Registry of every name an expression may mention.
#[derive(Clone, Debug)]
pub struct SymbolTable {
    entries: BTreeMap<String, SymbolInfo>,
}

impl SymbolTable {
    pub fn empty() -> Self {
        SymbolTable { entries: BTreeMap::new() }
    }

    /// The six coordinates plus the canonical parameter set.
    pub fn standard() -> Self {
        let mut table = SymbolTable::empty();
        for (i, name) in COORD_NAMES.iter().enumerate() {
            table.insert(Symbol::real(name), SymbolKind::Coordinate(i));
        }
        for name in ["p0", "p1", "p2", "p3", "a0", "a1", "a2", "a3", "a5", "C", "tau"] {
            table.insert(Symbol::real(name), SymbolKind::Parameter);
        }
        for name in ["k0", "k1", "k2", "k3", "pol0", "pol1", "pol2", "pol3", "eps"] {
            table.insert(Symbol::real(name), SymbolKind::Parameter);
        }
        for name in ["hbar", "m0", "kappa", "gamma", "G"] {
            table.insert(Symbol::positive(name), SymbolKind::Parameter);
        }
        table
    }

    pub fn insert(&mut self, symbol: Symbol, kind: SymbolKind) {
        self.entries.insert(symbol.name().to_string(), SymbolInfo { symbol, kind });
    }

    /// Register an additional parameter.
    pub fn add_parameter(&mut self, name: &str, domain: Domain) -> Result<Symbol, SymError> {
        if let Some(info) = self.entries.get(name) {
            if info.symbol.domain() != domain {
                return Err(SymError::Redeclared(name.to_string()));
            }
            return Ok(info.symbol.clone());
        }
        let sym = Symbol::new(name, domain);
        self.insert(sym.clone(), SymbolKind::Parameter);
        Ok(sym)
    }

    pub fn get(&self, name: &str) -> Option<&SymbolInfo> {
        self.entries.get(name)
    }

    pub fn lookup(&self, name: &str) -> Result<Symbol, SymError> {
        self.entries.get(name).map(|info| info.symbol.clone()).ok_or_else(|| SymError::UnknownSymbol(name.to_string()))
    }

    pub fn coordinates(&self) -> Vec<Symbol> {
        let mut coords: Vec<(usize, Symbol)> = self
            .entries
            .values()
            .filter_map(|info| match info.kind {
                SymbolKind::Coordinate(i) => Some((i, info.symbol.clone())),
                SymbolKind::Parameter => None,
            })
            .collect();
        coords.sort_by_key(|(i, _)| *i);
        coords.into_iter().map(|(_, s)| s).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &SymbolInfo> {
        self.entries.values()
    }
}

impl Default for SymbolTable {
    fn default() -> Self {
        SymbolTable::standard()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_table_has_six_coordinates() {
        let t = SymbolTable::standard();
        let coords = t.coordinates();
        assert_eq!(coords.len(), 6);
        assert_eq!(coords[5], coord(5));
        assert!(t.lookup("m0").unwrap().is_real());
        assert!(matches!(t.lookup("nope"), Err(SymError::UnknownSymbol(n)) if n == "nope"));
    }

    #[test]
    fn redeclaring_with_other_domain_fails() {
        let mut t = SymbolTable::standard();
        assert!(t.add_parameter("z", Domain::Complex).is_ok());
        assert!(t.add_parameter("z", Domain::Complex).is_ok());
        assert!(t.add_parameter("z", Domain::Real).is_err());
    }
}
