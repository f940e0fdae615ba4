//! JSON documents and `builtin:` specs.
//!
//! Every document carries a `kind` tag first. Derived data (group identity and
//! inverses, `>^-1`, the quandle flag) is never read from files.
//!
//! Rack specs: `builtin:trivial:<n>`, `builtin:cyclic:<n>`, `builtin:dihedral:<n>`,
//! `builtin:affine:<n>:<alpha>`, `builtin:transpositions:<degree>`,
//! `builtin:conj:<group>:<n>`, `builtin:core:<group>:<n>`, `builtin:enum:<n>:<i>`
//! (the `i`-th isomorphism class in canonical order). Group specs:
//! `builtin:cyclic:<n>`, `builtin:dihedral:<n>`, `builtin:symmetric:<n>`.
//! Anything else is read as a file path.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::action::RackAction;
use crate::ca::{CellularAutomaton, GlobalMap};
use crate::config::Configuration;
use crate::enumerate::{enumerate_racks, EnumerationFilter};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupKind};
use crate::rack::FiniteRack;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Document {
    Group {
        n: usize,
        mul: Vec<Vec<usize>>,
    },
    Rack {
        n: usize,
        op: Vec<Vec<usize>>,
    },
    Action {
        #[serde(default)]
        rack: Value,
        m: usize,
        act: Vec<Vec<usize>>,
    },
    Config {
        q: usize,
        cells: Vec<usize>,
    },
    Ca {
        #[serde(default)]
        rack: Value,
        q: usize,
        memory: Vec<usize>,
        rule: Vec<usize>,
        /// Pattern indices whose rule entry was filled with 0, never observed.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        unconstrained: Option<Vec<usize>>,
    },
    Map {
        n: usize,
        q: usize,
        table: Vec<usize>,
    },
}

impl Document {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("bad document: {e}")))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&read_text(path.as_ref())?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents serialize")
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Document::Group { .. } => "group",
            Document::Rack { .. } => "rack",
            Document::Action { .. } => "action",
            Document::Config { .. } => "config",
            Document::Ca { .. } => "ca",
            Document::Map { .. } => "map",
        }
    }

    pub fn group(g: &FiniteGroup) -> Self {
        Document::Group { n: g.order(), mul: g.table() }
    }

    pub fn rack(r: &FiniteRack) -> Self {
        Document::Rack { n: r.order(), op: r.table() }
    }

    pub fn action(a: &RackAction) -> Self {
        Document::Action { rack: rack_value(a.rack()), m: a.set_size(), act: a.table() }
    }

    pub fn config(x: &Configuration) -> Self {
        Document::Config { q: x.q, cells: x.cells.clone() }
    }

    pub fn ca(tau: &CellularAutomaton) -> Self {
        Document::Ca {
            rack: rack_value(tau.rack()),
            q: tau.q(),
            memory: tau.memory().to_vec(),
            rule: tau.rule().to_vec(),
            unconstrained: None,
        }
    }

    pub fn map(f: &GlobalMap) -> Self {
        Document::Map { n: f.n, q: f.q, table: f.table.clone() }
    }

    fn wrong_kind(&self, expected: &str) -> Error {
        Error::Invalid(format!("expected a {expected} document, found {}", self.kind()))
    }

    pub fn into_group(self) -> Result<FiniteGroup> {
        match self {
            Document::Group { n, mul } => {
                check_order(n, mul.len())?;
                FiniteGroup::from_table(&mul)
            }
            other => Err(other.wrong_kind("group")),
        }
    }

    pub fn into_rack(self) -> Result<FiniteRack> {
        match self {
            Document::Rack { n, op } => {
                check_order(n, op.len())?;
                FiniteRack::from_table(&op)
            }
            other => Err(other.wrong_kind("rack")),
        }
    }

    /// `rack` falls back to `default_rack` when the document omits it.
    pub fn into_action(self, default_rack: Option<&Arc<FiniteRack>>) -> Result<RackAction> {
        match self {
            Document::Action { rack, m, act } => {
                let rack = pick_rack(&rack, default_rack)?;
                if act.first().is_some_and(|row| row.len() != m) {
                    return Err(Error::Mismatch(format!("action rows do not have m = {m} entries")));
                }
                RackAction::from_table(rack, &act)
            }
            other => Err(other.wrong_kind("action")),
        }
    }

    pub fn into_config(self) -> Result<Configuration> {
        match self {
            Document::Config { q, cells } => Configuration::new(q, cells),
            other => Err(other.wrong_kind("config")),
        }
    }

    /// `rack` falls back to `default_rack` when the document omits it.
    pub fn into_ca(self, default_rack: Option<&Arc<FiniteRack>>) -> Result<CellularAutomaton> {
        match self {
            Document::Ca { rack, q, memory, rule, .. } => {
                let rack = pick_rack(&rack, default_rack)?;
                CellularAutomaton::new(rack, q, memory, rule)
            }
            other => Err(other.wrong_kind("ca")),
        }
    }

    pub fn into_map(self) -> Result<GlobalMap> {
        match self {
            Document::Map { n, q, table } => GlobalMap::new(n, q, table),
            other => Err(other.wrong_kind("map")),
        }
    }
}

fn pick_rack(rack: &Value, default_rack: Option<&Arc<FiniteRack>>) -> Result<Arc<FiniteRack>> {
    match (rack, default_rack) {
        (Value::Null, Some(r)) => Ok(r.clone()),
        (Value::Null, None) => Err(Error::Invalid("document names no rack".into())),
        _ => Ok(Arc::new(rack_from_value(rack)?)),
    }
}

fn check_order(n: usize, rows: usize) -> Result<()> {
    if n != rows {
        return Err(Error::Mismatch(format!("declared n = {n} but the table has {rows} rows")));
    }
    Ok(())
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn rack_value(r: &FiniteRack) -> Value {
    serde_json::to_value(Document::rack(r)).expect("rack serializes")
}

/// A rack given inline as an object, or as a spec string.
pub fn rack_from_value(v: &Value) -> Result<FiniteRack> {
    match v {
        Value::String(spec) => resolve_rack(spec),
        Value::Object(_) => serde_json::from_value::<Document>(v.clone())
            .map_err(|e| Error::Invalid(format!("bad rack object: {e}")))?
            .into_rack(),
        _ => Err(Error::Invalid("rack must be an object, a path or a builtin spec".into())),
    }
}

pub fn resolve_rack(spec: &str) -> Result<FiniteRack> {
    match spec.strip_prefix("builtin:") {
        Some(rest) => builtin_rack(rest),
        None => Document::read(spec)?.into_rack(),
    }
}

pub fn resolve_group(spec: &str) -> Result<FiniteGroup> {
    match spec.strip_prefix("builtin:") {
        Some(rest) => builtin_group(rest),
        None => Document::read(spec)?.into_group(),
    }
}

fn number(field: Option<&str>, what: &str) -> Result<usize> {
    let text = field.ok_or_else(|| Error::Invalid(format!("missing {what}")))?;
    text.parse().map_err(|_| Error::Invalid(format!("bad {what}: {text:?}")))
}

fn group_kind(name: Option<&str>) -> Result<GroupKind> {
    match name {
        Some("cyclic") => Ok(GroupKind::Cyclic),
        Some("dihedral") => Ok(GroupKind::Dihedral),
        Some("symmetric") => Ok(GroupKind::Symmetric),
        other => Err(Error::Invalid(format!("unknown group kind {other:?}"))),
    }
}

fn no_more<'a>(parts: &mut impl Iterator<Item = &'a str>) -> Result<()> {
    match parts.next() {
        None => Ok(()),
        Some(extra) => Err(Error::Invalid(format!("unexpected spec field {extra:?}"))),
    }
}

/// `kind[:param]*`, without the `builtin:` prefix.
pub fn builtin_group(spec: &str) -> Result<FiniteGroup> {
    let mut parts = spec.split(':');
    let kind = group_kind(parts.next())?;
    let n = number(parts.next(), "group parameter")?;
    no_more(&mut parts)?;
    FiniteGroup::builtin(kind, n)
}

/// `kind[:param]*`, without the `builtin:` prefix.
pub fn builtin_rack(spec: &str) -> Result<FiniteRack> {
    let mut parts = spec.split(':');
    let kind = parts.next().unwrap_or_default();
    let rack = match kind {
        "trivial" => FiniteRack::trivial(number(parts.next(), "order")?)?,
        "cyclic" => FiniteRack::cyclic(number(parts.next(), "order")?)?,
        "dihedral" => FiniteRack::dihedral(number(parts.next(), "order")?)?,
        "transpositions" => FiniteRack::transpositions(number(parts.next(), "degree")?)?,
        "affine" => {
            let n = number(parts.next(), "order")?;
            FiniteRack::affine(n, number(parts.next(), "alpha")?)?
        }
        "conj" | "core" => {
            let g = FiniteGroup::builtin(group_kind(parts.next())?, number(parts.next(), "group parameter")?)?;
            if kind == "conj" {
                FiniteRack::conjugation(&g)?
            } else {
                FiniteRack::core(&g)?
            }
        }
        "enum" => {
            let n = number(parts.next(), "order")?;
            let i = number(parts.next(), "class index")?;
            let classes = enumerate_racks(n, EnumerationFilter { up_to_iso: true, quandles_only: false })?;
            let count = classes.len();
            classes
                .into_iter()
                .nth(i)
                .ok_or(Error::IndexOutOfRange { index: i as u128, bound: count as u128 })?
        }
        other => return Err(Error::Invalid(format!("unknown rack kind {other:?}"))),
    };
    no_more(&mut parts)?;
    Ok(rack)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rack_document_round_trip() {
        let d3 = FiniteRack::dihedral(3).unwrap();
        let text = Document::rack(&d3).to_json();
        assert_eq!(text, r#"{"kind":"rack","n":3,"op":[[0,2,1],[2,1,0],[1,0,2]]}"#);
        assert_eq!(Document::parse(&text).unwrap().into_rack().unwrap(), d3);
    }

    #[test]
    fn group_document_recomputes_identity() {
        let text = r#"{"kind":"group","n":2,"mul":[[1,0],[0,1]]}"#;
        let g = Document::parse(text).unwrap().into_group().unwrap();
        assert_eq!(g.identity(), 1);
        assert!(Document::parse(r#"{"kind":"group","n":3,"mul":[[1,0],[0,1]]}"#).unwrap().into_group().is_err());
    }

    #[test]
    fn builtin_specs() {
        assert_eq!(resolve_rack("builtin:dihedral:3").unwrap(), FiniteRack::dihedral(3).unwrap());
        assert_eq!(resolve_rack("builtin:core:cyclic:3").unwrap(), FiniteRack::dihedral(3).unwrap());
        assert_eq!(resolve_rack("builtin:affine:5:4").unwrap(), FiniteRack::dihedral(5).unwrap());
        assert_eq!(resolve_rack("builtin:conj:symmetric:3").unwrap().order(), 6);
        assert_eq!(resolve_rack("builtin:transpositions:3").unwrap().order(), 3);
        assert_eq!(resolve_rack("builtin:enum:2:1").unwrap().order(), 2);
        assert!(resolve_rack("builtin:enum:2:2").is_err());
        assert!(resolve_rack("builtin:dihedral").is_err());
        assert!(resolve_rack("builtin:dihedral:3:4").is_err());
        assert!(resolve_rack("builtin:klein:4").is_err());
        assert_eq!(resolve_group("builtin:symmetric:3").unwrap().order(), 6);
    }

    #[test]
    fn ca_document_with_inline_and_spec_racks() {
        let d3 = Arc::new(FiniteRack::dihedral(3).unwrap());
        let tau = CellularAutomaton::new(d3.clone(), 2, vec![0], vec![0, 1]).unwrap();
        let text = Document::ca(&tau).to_json();
        assert_eq!(Document::parse(&text).unwrap().into_ca(None).unwrap(), tau);
        let by_spec = r#"{"kind":"ca","rack":"builtin:dihedral:3","q":2,"memory":[0],"rule":[0,1]}"#;
        assert_eq!(Document::parse(by_spec).unwrap().into_ca(None).unwrap(), tau);
        let no_rack = r#"{"kind":"ca","q":2,"memory":[0],"rule":[0,1]}"#;
        assert_eq!(Document::parse(no_rack).unwrap().into_ca(Some(&d3)).unwrap(), tau);
        assert!(Document::parse(no_rack).unwrap().into_ca(None).is_err());
    }

    #[test]
    fn other_documents() {
        let x = Configuration::new(2, vec![0, 1, 1]).unwrap();
        let text = Document::config(&x).to_json();
        assert_eq!(text, r#"{"kind":"config","q":2,"cells":[0,1,1]}"#);
        assert_eq!(Document::parse(&text).unwrap().into_config().unwrap(), x);
        let f = GlobalMap::new(1, 2, vec![1, 0]).unwrap();
        assert_eq!(Document::parse(&Document::map(&f).to_json()).unwrap().into_map().unwrap(), f);
        let a = RackAction::regular(Arc::new(FiniteRack::dihedral(3).unwrap())).unwrap();
        assert_eq!(Document::parse(&Document::action(&a).to_json()).unwrap().into_action(None).unwrap(), a);
        assert!(Document::parse(&text).unwrap().into_rack().is_err());
    }
}
