//! Finite element sets and the JSON set-file format
//! `{"group": "<group>", "elements": [...]}`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dsl::parse_group;
use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};

/// A finite set of elements of one group, iterated in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElementSet {
    group: GroupSpec,
    elements: BTreeSet<Element>,
}

impl ElementSet {
    pub fn new(group: &GroupSpec, elements: impl IntoIterator<Item = Element>) -> Result<Self> {
        let elements: BTreeSet<Element> = elements.into_iter().collect();
        for e in &elements {
            group.check(e)?;
        }
        Ok(ElementSet { group: group.clone(), elements })
    }

    pub(crate) fn from_trusted(group: &GroupSpec, elements: BTreeSet<Element>) -> Self {
        ElementSet { group: group.clone(), elements }
    }

    /// Parses each string in the element syntax of `group`.
    pub fn parse<S: AsRef<str>>(group: &GroupSpec, items: &[S]) -> Result<Self> {
        let elements = items.iter().map(|s| group.parse_element(s.as_ref())).collect::<Result<Vec<_>>>()?;
        Self::new(group, elements)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.elements.contains(e)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Element> + '_ {
        self.elements.iter()
    }

    pub fn elements(&self) -> &BTreeSet<Element> {
        &self.elements
    }

    /// `B = -B`.
    pub fn is_symmetric(&self) -> Result<bool> {
        for e in &self.elements {
            if !self.elements.contains(&self.group.neg_unchecked(e)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub(crate) fn require_symmetric_with_zero(&self) -> Result<()> {
        if !self.contains(&self.group.zero()) {
            return Err(Error::MissingZero);
        }
        for e in &self.elements {
            if !self.elements.contains(&self.group.neg_unchecked(e)?) {
                return Err(Error::NotSymmetric(self.group.format_element(e)));
            }
        }
        Ok(())
    }

    /// Elements rendered in the element syntax, canonical order.
    pub fn to_strings(&self) -> Vec<String> {
        self.elements.iter().map(|e| self.group.format_element(e)).collect()
    }

    /// `self + t`.
    pub fn translate(&self, t: &Element) -> Result<ElementSet> {
        self.group.check(t)?;
        let elements = self.elements.iter().map(|e| self.group.add_unchecked(e, t)).collect::<Result<_>>()?;
        Ok(ElementSet::from_trusted(&self.group, elements))
    }

    pub fn to_set_file(&self) -> SetFile {
        SetFile { group: self.group.to_string(), elements: self.to_strings().into_iter().map(Value::String).collect() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_set_file()).expect("set files serialise")
    }

    pub fn from_json(text: &str) -> Result<ElementSet> {
        let file: SetFile = serde_json::from_str(text).map_err(|e| Error::SetFile(e.to_string()))?;
        file.into_set()
    }
}

/// On-disk form of an [`ElementSet`]. Elements may be JSON strings in the
/// element syntax, or bare JSON integers for single-factor groups.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetFile {
    pub group: String,
    pub elements: Vec<Value>,
}

impl SetFile {
    pub fn into_set(self) -> Result<ElementSet> {
        let group = parse_group(&self.group)?;
        let items = self
            .elements
            .iter()
            .map(|v| match v {
                Value::String(s) => Ok(s.clone()),
                Value::Number(n) => Ok(n.to_string()),
                other => Err(Error::SetFile(format!("unsupported element {other}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        ElementSet::parse(&group, &items)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_file_accepts_numbers_and_strings() {
        let s = ElementSet::from_json(r#"{"group": "Z", "elements": [3, "-1", 0, 3]}"#).unwrap();
        assert_eq!(s.to_strings(), ["0", "-1", "3"]);
        let back = ElementSet::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn set_file_errors() {
        assert!(matches!(ElementSet::from_json("{}"), Err(Error::SetFile(_))));
        assert!(matches!(ElementSet::from_json(r#"{"group":"Z_1","elements":[]}"#), Err(Error::InvalidModulus(1))));
        assert!(ElementSet::from_json(r#"{"group":"Z_4 + Z_2","elements":["(1)"]}"#).is_err());
    }

    #[test]
    fn symmetry_checks() {
        let g = parse_group("Z").unwrap();
        let s = ElementSet::parse(&g, &["0", "1", "-1"]).unwrap();
        assert!(s.is_symmetric().unwrap());
        s.require_symmetric_with_zero().unwrap();
        let t = ElementSet::parse(&g, &["0", "1"]).unwrap();
        assert!(matches!(t.require_symmetric_with_zero(), Err(Error::NotSymmetric(_))));
        let u = ElementSet::parse(&g, &["1", "-1"]).unwrap();
        assert!(matches!(u.require_symmetric_with_zero(), Err(Error::MissingZero)));
    }
}
