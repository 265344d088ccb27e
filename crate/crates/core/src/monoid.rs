//! Finite monoids given by explicit multiplication tables.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// JSON layout: `{"elements": [...], "unit": "e", "mul": {"a,b": "c", ...}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonoidSpec {
    pub elements: Vec<String>,
    pub unit: String,
    pub mul: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonoidTable {
    pub name: String,
    elements: Vec<String>,
    unit: usize,
    table: Vec<usize>,
}

impl MonoidTable {
    pub fn from_spec(name: &str, spec: &MonoidSpec) -> Result<Self> {
        let n = spec.elements.len();
        if n == 0 {
            return Err(Error::InvalidTable("monoid has no elements".into()));
        }
        let index = |s: &str| -> Result<usize> {
            spec.elements
                .iter()
                .position(|e| e == s)
                .ok_or_else(|| Error::InvalidTable(format!("unknown element `{s}`")))
        };
        for (i, e) in spec.elements.iter().enumerate() {
            if e.is_empty() || e.contains([',', ':', '{', '}', '[', ']']) {
                return Err(Error::InvalidTable(format!("bad element name `{e}`")));
            }
            if spec.elements[..i].contains(e) {
                return Err(Error::InvalidTable(format!("duplicate element `{e}`")));
            }
        }
        let unit = index(&spec.unit)?;
        let mut table = vec![usize::MAX; n * n];
        for (key, value) in &spec.mul {
            let (a, b) = key
                .split_once(',')
                .ok_or_else(|| Error::InvalidTable(format!("bad key `{key}`")))?;
            table[index(a.trim())? * n + index(b.trim())?] = index(value)?;
        }
        // entries involving the unit may be omitted
        for a in 0..n {
            for (x, y) in [(unit, a), (a, unit)] {
                let slot = &mut table[x * n + y];
                if *slot == usize::MAX {
                    *slot = a;
                }
            }
        }
        if table.contains(&usize::MAX) {
            return Err(Error::InvalidTable(
                "multiplication table is incomplete".into(),
            ));
        }
        let m = MonoidTable {
            name: name.to_string(),
            elements: spec.elements.clone(),
            unit,
            table,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn from_json(name: &str, json: &str) -> Result<Self> {
        let spec: MonoidSpec =
            serde_json::from_str(json).map_err(|e| Error::InvalidTable(e.to_string()))?;
        Self::from_spec(name, &spec)
    }

    /// ℤ/k with elements `0..k-1` under addition.
    pub fn cyclic(k: usize) -> Self {
        let k = k.max(1);
        let table = (0..k * k).map(|i| (i / k + i % k) % k).collect();
        MonoidTable {
            name: format!("Z{k}"),
            elements: (0..k).map(|i| i.to_string()).collect(),
            unit: 0,
            table,
        }
    }

    pub fn trivial() -> Self {
        MonoidTable {
            name: "1".into(),
            elements: vec!["e".into()],
            unit: 0,
            table: vec![0],
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.len();
        for a in 0..n {
            if self.mul(self.unit, a) != a || self.mul(a, self.unit) != a {
                return Err(Error::InvalidTable(format!(
                    "`{}` is not a two-sided unit",
                    self.elements[self.unit]
                )));
            }
            for b in 0..n {
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::InvalidTable(format!(
                            "not associative at ({}, {}, {})",
                            self.elements[a], self.elements[b], self.elements[c]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn name_of(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.len() + b]
    }

    pub fn inverse(&self, a: usize) -> Option<usize> {
        (0..self.len()).find(|&b| self.mul(a, b) == self.unit && self.mul(b, a) == self.unit)
    }

    pub fn is_group(&self) -> bool {
        (0..self.len()).all(|a| self.inverse(a).is_some())
    }

    /// No nontrivial factorization of the unit.
    pub fn unit_indecomposable(&self) -> bool {
        (0..self.len()).all(|a| {
            (0..self.len())
                .all(|b| self.mul(a, b) != self.unit || (a == self.unit && b == self.unit))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_is_group() {
        let z3 = MonoidTable::cyclic(3);
        assert!(z3.is_group());
        assert_eq!(z3.mul(2, 2), 1);
        assert_eq!(z3.inverse(1), Some(2));
        assert!(!z3.unit_indecomposable());
        assert!(MonoidTable::trivial().unit_indecomposable());
    }

    #[test]
    fn json_loading() {
        let json = r#"{"elements":["e","a"],"unit":"e","mul":{"a,a":"a"}}"#;
        let m = MonoidTable::from_json("and", json).unwrap();
        assert!(!m.is_group());
        assert!(m.unit_indecomposable());

        let bad = r#"{"elements":["e","a","b"],"unit":"e","mul":{"a,a":"b","a,b":"e","b,a":"a","b,b":"a"}}"#;
        assert!(MonoidTable::from_json("bad", bad).is_err());
        let incomplete = r#"{"elements":["e","a"],"unit":"e","mul":{}}"#;
        assert!(MonoidTable::from_json("inc", incomplete).is_err());
    }
}
