//! The JSON instance-file format.
//!
//! A file has one quantaloid and named categories, functors and distributors over it:
//!
//! ```json
//! {
//!   "quantaloid": {
//!     "objects": ["*"],
//!     "homs": {"*->*": {"elements": ["0", "1"], "leq": [[0, 0], [0, 1], [1, 1]]}},
//!     "composition": {"*->*->*": [[0, 0], [0, 1]]},
//!     "units": {"*": 1}
//!   },
//!   "categories": {"A": {"base": "quantaloid", "objects": [{"name": "a", "type": "*"}], "hom": [[1]]}},
//!   "functors": {"F": {"dom": "A", "cod": "A", "map": [0]}},
//!   "distributors": {}
//! }
//! ```
//!
//! Hom lattices are keyed `"X->Y"`; composition tables are keyed `"X->Y->Z"` with rows
//! indexed by `Q(Y,Z)` and columns by `Q(X,Y)`. A category's `hom[a'][a]` is `A(a', a)`.
//! Indices are authoritative and names are metadata, except that cross-references between
//! sections go by name.
//!
//! Loading checks shapes, index ranges and lattice orders ([`InstanceError`]); the
//! quantaloid, category, functor and distributor axioms are checked separately by
//! [`Instance::validate`].

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::order::FiniteLattice;
use crate::qcat::{QCategory, QDistributor, QFunctor};
use crate::quantaloid::Quantaloid;

/// The name by which categories refer to the file's quantaloid.
pub const BASE_REF: &str = "quantaloid";

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Malformed(String),
    #[error("no {kind} named {name:?}")]
    Unknown { kind: &'static str, name: String },
}

fn malformed(msg: impl Into<String>) -> InstanceError {
    InstanceError::Malformed(msg.into())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeJson {
    pub elements: Vec<String>,
    pub leq: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantaloidJson {
    pub objects: Vec<String>,
    pub homs: BTreeMap<String, LatticeJson>,
    pub composition: BTreeMap<String, Vec<Vec<usize>>>,
    pub units: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectJson {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryJson {
    pub base: String,
    pub objects: Vec<ObjectJson>,
    pub hom: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorJson {
    pub dom: String,
    pub cod: String,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributorJson {
    pub dom: String,
    pub cod: String,
    pub hom: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceJson {
    pub quantaloid: QuantaloidJson,
    #[serde(default)]
    pub categories: BTreeMap<String, CategoryJson>,
    #[serde(default)]
    pub functors: BTreeMap<String, FunctorJson>,
    #[serde(default)]
    pub distributors: BTreeMap<String, DistributorJson>,
}

#[derive(Debug, Clone)]
pub struct FunctorEntry {
    pub dom: String,
    pub cod: String,
    pub functor: QFunctor,
}

#[derive(Debug, Clone)]
pub struct DistributorEntry {
    pub dom: String,
    pub cod: String,
    pub distributor: QDistributor,
}

/// A loaded instance file. Structures are resolved but not yet checked against their axioms.
#[derive(Debug, Clone)]
pub struct Instance {
    pub quantaloid: Arc<Quantaloid>,
    pub categories: BTreeMap<String, Arc<QCategory>>,
    pub functors: BTreeMap<String, FunctorEntry>,
    pub distributors: BTreeMap<String, DistributorEntry>,
}

/// The verifier's verdict on one named structure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureReport {
    pub kind: &'static str,
    pub name: String,
    pub valid: bool,
    pub violations: Vec<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub structures: Vec<StructureReport>,
}

impl ValidationReport {
    pub fn invalid(&self) -> impl Iterator<Item = &StructureReport> {
        self.structures.iter().filter(|s| !s.valid)
    }
}

fn structure<T: Serialize>(kind: &'static str, name: &str, violations: &[T]) -> StructureReport {
    StructureReport {
        kind,
        name: name.to_string(),
        valid: violations.is_empty(),
        violations: violations.iter().map(|v| serde_json::to_value(v).expect("violations serialize")).collect(),
    }
}

impl Instance {
    /// An instance with only a quantaloid.
    pub fn new(quantaloid: Arc<Quantaloid>) -> Self {
        Self { quantaloid, categories: BTreeMap::new(), functors: BTreeMap::new(), distributors: BTreeMap::new() }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, InstanceError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| InstanceError::Io { path: path.display().to_string(), source })?;
        Self::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Self, InstanceError> {
        let raw: InstanceJson = serde_json::from_str(text)?;
        Self::from_json(&raw)
    }

    pub fn from_json(raw: &InstanceJson) -> Result<Self, InstanceError> {
        let q = Arc::new(quantaloid_from_json(&raw.quantaloid)?);
        let mut inst = Self::new(q.clone());
        for (name, c) in &raw.categories {
            if c.base != BASE_REF {
                return Err(malformed(format!("category {name:?}: base must be {BASE_REF:?}, found {:?}", c.base)));
            }
            let mut names = Vec::with_capacity(c.objects.len());
            let mut types = Vec::with_capacity(c.objects.len());
            for o in &c.objects {
                let ty = q.index_of(&o.ty).ok_or_else(|| {
                    malformed(format!("category {name:?}: object {:?} has unknown type {:?}", o.name, o.ty))
                })?;
                names.push(o.name.clone());
                types.push(ty);
            }
            let cat = QCategory::new(q.clone(), names, types, c.hom.clone())
                .map_err(|e| malformed(format!("category {name:?}: {e}")))?;
            inst.categories.insert(name.clone(), Arc::new(cat));
        }
        for (name, f) in &raw.functors {
            let (dom, cod) = (inst.category(&f.dom)?, inst.category(&f.cod)?);
            let functor =
                QFunctor::new(dom, cod, f.map.clone()).map_err(|e| malformed(format!("functor {name:?}: {e}")))?;
            inst.functors.insert(name.clone(), FunctorEntry { dom: f.dom.clone(), cod: f.cod.clone(), functor });
        }
        for (name, d) in &raw.distributors {
            let (dom, cod) = (inst.category(&d.dom)?, inst.category(&d.cod)?);
            let distributor = QDistributor::new(dom, cod, d.hom.clone())
                .map_err(|e| malformed(format!("distributor {name:?}: {e}")))?;
            inst.distributors
                .insert(name.clone(), DistributorEntry { dom: d.dom.clone(), cod: d.cod.clone(), distributor });
        }
        Ok(inst)
    }

    pub fn category(&self, name: &str) -> Result<Arc<QCategory>, InstanceError> {
        self.categories.get(name).cloned().ok_or_else(|| InstanceError::Unknown { kind: "category", name: name.into() })
    }

    pub fn functor(&self, name: &str) -> Result<&FunctorEntry, InstanceError> {
        self.functors.get(name).ok_or_else(|| InstanceError::Unknown { kind: "functor", name: name.into() })
    }

    pub fn distributor(&self, name: &str) -> Result<&DistributorEntry, InstanceError> {
        self.distributors.get(name).ok_or_else(|| InstanceError::Unknown { kind: "distributor", name: name.into() })
    }

    pub fn add_category(&mut self, name: &str, category: Arc<QCategory>) {
        self.categories.insert(name.to_string(), category);
    }

    /// Adds a functor between two categories already present under `dom` and `cod`.
    pub fn add_functor(&mut self, name: &str, dom: &str, cod: &str, functor: QFunctor) -> Result<(), InstanceError> {
        for (side, cat_name, cat) in [("domain", dom, functor.dom()), ("codomain", cod, functor.cod())] {
            let known = self.category(cat_name)?;
            if !Arc::ptr_eq(&known, cat) && *known != **cat {
                return Err(malformed(format!("functor {name:?}: {side} differs from category {cat_name:?}")));
            }
        }
        self.functors.insert(name.to_string(), FunctorEntry { dom: dom.into(), cod: cod.into(), functor });
        Ok(())
    }

    /// Runs every verifier, quantaloid first, then categories, functors and distributors
    /// in name order.
    pub fn validate(&self) -> ValidationReport {
        let mut structures = vec![structure("quantaloid", BASE_REF, &self.quantaloid.verify())];
        for (name, c) in &self.categories {
            structures.push(structure("category", name, &c.verify()));
        }
        for (name, f) in &self.functors {
            structures.push(structure("functor", name, &f.functor.verify()));
        }
        for (name, d) in &self.distributors {
            structures.push(structure("distributor", name, &d.distributor.verify()));
        }
        ValidationReport { valid: structures.iter().all(|s| s.valid), structures }
    }

    pub fn to_json(&self) -> InstanceJson {
        let q = &self.quantaloid;
        let categories = self
            .categories
            .iter()
            .map(|(name, c)| {
                let objects = c
                    .objects()
                    .map(|a| ObjectJson { name: c.name(a).to_string(), ty: q.name(c.ty(a)).to_string() })
                    .collect();
                (name.clone(), CategoryJson { base: BASE_REF.into(), objects, hom: c.hom_rows() })
            })
            .collect();
        let functors = self
            .functors
            .iter()
            .map(|(name, f)| {
                let json = FunctorJson { dom: f.dom.clone(), cod: f.cod.clone(), map: f.functor.map().to_vec() };
                (name.clone(), json)
            })
            .collect();
        let distributors = self
            .distributors
            .iter()
            .map(|(name, d)| {
                let json = DistributorJson { dom: d.dom.clone(), cod: d.cod.clone(), hom: d.distributor.to_rows() };
                (name.clone(), json)
            })
            .collect();
        InstanceJson { quantaloid: quantaloid_to_json(q), categories, functors, distributors }
    }

    /// Pretty-printed JSON with a trailing newline; identical instances give identical bytes.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("instances serialize");
        s.push('\n');
        s
    }
}

fn hom_key(q: &[String], x: usize, y: usize) -> String {
    format!("{}->{}", q[x], q[y])
}

pub fn lattice_to_json(l: &FiniteLattice) -> LatticeJson {
    LatticeJson { elements: l.names().to_vec(), leq: l.order_pairs().into_iter().map(|(i, j)| [i, j]).collect() }
}

pub fn lattice_from_json(raw: &LatticeJson) -> Result<FiniteLattice, InstanceError> {
    let pairs: Vec<(usize, usize)> = raw.leq.iter().map(|p| (p[0], p[1])).collect();
    FiniteLattice::from_pairs(raw.elements.clone(), &pairs).map_err(|e| malformed(e.to_string()))
}

pub fn quantaloid_to_json(q: &Quantaloid) -> QuantaloidJson {
    let names = q.names();
    let mut homs = BTreeMap::new();
    let mut composition = BTreeMap::new();
    for x in q.objects() {
        for y in q.objects() {
            homs.insert(hom_key(names, x, y), lattice_to_json(q.hom(x, y)));
            for z in q.objects() {
                composition.insert(format!("{}->{}->{}", names[x], names[y], names[z]), q.table(x, y, z));
            }
        }
    }
    let units = q.objects().map(|x| (names[x].clone(), q.unit(x))).collect();
    QuantaloidJson { objects: names.to_vec(), homs, composition, units }
}

pub fn quantaloid_from_json(raw: &QuantaloidJson) -> Result<Quantaloid, InstanceError> {
    let names = &raw.objects;
    let n = names.len();
    for (i, name) in names.iter().enumerate() {
        if name.contains("->") {
            return Err(malformed(format!("quantaloid object name {name:?} contains \"->\"")));
        }
        if names[..i].contains(name) {
            return Err(malformed(format!("quantaloid object {name:?} is listed twice")));
        }
    }
    let expect_keys = |what: &str, found: Vec<&String>, wanted: Vec<String>| {
        let mut found: Vec<String> = found.into_iter().cloned().collect();
        found.sort();
        let mut wanted = wanted;
        wanted.sort();
        if found == wanted {
            Ok(())
        } else {
            let extra: Vec<_> = found.iter().filter(|k| !wanted.contains(k)).collect();
            let missing: Vec<_> = wanted.iter().filter(|k| !found.contains(k)).collect();
            Err(malformed(format!("quantaloid {what}: missing keys {missing:?}, unexpected keys {extra:?}")))
        }
    };
    let pairs: Vec<String> =
        (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| hom_key(names, x, y)).collect();
    let triples: Vec<String> = (0..n)
        .flat_map(|x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))))
        .map(|(x, y, z)| format!("{}->{}->{}", names[x], names[y], names[z]))
        .collect();
    expect_keys("homs", raw.homs.keys().collect(), pairs.clone())?;
    expect_keys("composition", raw.composition.keys().collect(), triples.clone())?;
    expect_keys("units", raw.units.keys().collect(), names.clone())?;
    let homs = pairs
        .iter()
        .map(|k| lattice_from_json(&raw.homs[k]).map_err(|e| malformed(format!("hom lattice {k:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let tables = triples.iter().map(|k| raw.composition[k].clone()).collect();
    let units = names.iter().map(|x| raw.units[x]).collect();
    Quantaloid::new(names.clone(), homs, tables, units).map_err(|e| malformed(format!("quantaloid: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantaloid::{boolean_quantale, chain_quantale, endo_quantale};

    fn sample() -> Instance {
        let q = Arc::new(chain_quantale(2).unwrap());
        let mut inst = Instance::new(q.clone());
        let a = Arc::new(
            QCategory::new(q.clone(), vec!["x".into(), "y".into()], vec![0, 0], vec![vec![0, 1], vec![2, 0]]).unwrap(),
        );
        inst.add_category("A", a.clone());
        inst.add_functor("id", "A", "A", QFunctor::identity(&a)).unwrap();
        inst
    }

    #[test]
    fn round_trip_is_byte_stable() {
        let inst = sample();
        let text = inst.to_json_string();
        let back = Instance::from_json_str(&text).unwrap();
        assert_eq!(back.to_json_string(), text);
        assert_eq!(*back.quantaloid, *inst.quantaloid);
        assert!(back.validate().valid);
    }

    #[test]
    fn builders_survive_the_format() {
        for q in [boolean_quantale(), endo_quantale(&FiniteLattice::m3()).unwrap()] {
            let back = quantaloid_from_json(&quantaloid_to_json(&q)).unwrap();
            assert_eq!(back, q);
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let mut v: serde_json::Value = serde_json::from_str(&sample().to_json_string()).unwrap();
        v["categories"]["A"]["colour"] = "red".into();
        assert!(matches!(Instance::from_json_str(&v.to_string()), Err(InstanceError::Json(_))));
    }

    #[test]
    fn non_transitive_order_names_the_pair() {
        let mut raw = sample().to_json();
        raw.quantaloid.homs.get_mut("*->*").unwrap().leq.retain(|p| *p != [2, 0]);
        let err = Instance::from_json(&raw).unwrap_err().to_string();
        assert!(err.contains("not transitive") && err.contains("not 2 <= 0"), "{err}");
    }

    #[test]
    fn broken_unit_is_a_violation_not_a_parse_error() {
        let mut raw = sample().to_json();
        raw.quantaloid.units.insert("*".into(), 1);
        let inst = Instance::from_json(&raw).unwrap();
        let report = inst.validate();
        assert!(!report.valid);
        assert_eq!(report.invalid().next().unwrap().kind, "quantaloid");
    }

    #[test]
    fn dangling_reference_is_malformed() {
        let mut raw = sample().to_json();
        raw.functors.get_mut("id").unwrap().cod = "B".into();
        assert!(matches!(Instance::from_json(&raw), Err(InstanceError::Unknown { .. })));
    }
}
