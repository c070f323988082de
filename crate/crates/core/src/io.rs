//! JSON descriptions of groups, modules, complexes and Weil groups.

use crate::error::{Error, Result};
use crate::ext::{Cocycle2, CocycleJson};
use crate::groupmod::{FiniteGroup, GComplex, GModule};
use crate::intlin::{FgAbGroup, IntMatrix};
use crate::weil::WeilGroupData;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Multiplication table with element names; row `a`, column `b` holds `ab`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

impl GroupJson {
    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupJson { elements: g.names().to_vec(), table: g.table().to_vec() }
    }

    pub fn to_group(&self) -> Result<FiniteGroup> {
        FiniteGroup::from_table(self.elements.clone(), self.table.clone())
    }
}

/// Generators, relations (one vector per relation) and matrices, row-major,
/// for some set of group elements that generates the group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub generators: usize,
    #[serde(default)]
    pub relations: Vec<Vec<i64>>,
    pub action: BTreeMap<String, Vec<Vec<i64>>>,
}

fn rows_of(m: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    m.to_i64_rows().ok_or_else(|| Error::Unsupported("entry does not fit in 64 bits".into()))
}

fn matrix_of(rows: &[Vec<i64>], nrows: usize, ncols: usize, what: &str) -> Result<IntMatrix> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch(format!("{what} should be {nrows}x{ncols}")));
    }
    Ok(IntMatrix::from_rows(rows, ncols))
}

fn element_index(g: &FiniteGroup, key: &str) -> Result<usize> {
    if let Some(i) = g.names().iter().position(|n| n == key) {
        return Ok(i);
    }
    key.parse::<usize>()
        .ok()
        .filter(|&i| i < g.order())
        .ok_or_else(|| Error::DimensionMismatch(format!("unknown group element {key}")))
}

impl ModuleJson {
    pub fn from_module(m: &GModule) -> Result<Self> {
        let g = m.group();
        let n = m.rank();
        let relations = m
            .underlying()
            .relation_cols()
            .iter()
            .map(|c| c.iter().map(|x| x.to_i64()).collect::<Option<Vec<i64>>>())
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Unsupported("entry does not fit in 64 bits".into()))?;
        let mut action = BTreeMap::new();
        for s in g.generators() {
            action.insert(g.name(s).to_string(), rows_of(m.action(s))?);
        }
        Ok(ModuleJson { generators: n, relations, action })
    }

    pub fn to_module(&self, g: &FiniteGroup) -> Result<GModule> {
        let n = self.generators;
        if self.relations.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("relations must have {n} entries")));
        }
        let cols: Vec<Vec<crate::intlin::BigInt>> = self.relations.iter().map(|r| crate::intlin::vec_from_i64(r)).collect();
        let underlying = FgAbGroup::from_relation_cols(n, &cols);
        let gens = self
            .action
            .iter()
            .map(|(k, rows)| Ok((element_index(g, k)?, matrix_of(rows, n, n, "action matrix")?)))
            .collect::<Result<Vec<_>>>()?;
        GModule::from_generators(g, underlying, &gens)
    }
}

/// Terms and differentials keyed by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub terms: BTreeMap<i32, ModuleJson>,
    #[serde(default)]
    pub differentials: BTreeMap<i32, Vec<Vec<i64>>>,
}

impl ComplexJson {
    pub fn from_complex(c: &GComplex) -> Result<Self> {
        let terms = c.terms().iter().map(|(&q, m)| Ok((q, ModuleJson::from_module(m)?))).collect::<Result<_>>()?;
        let mut differentials = BTreeMap::new();
        for &q in c.terms().keys() {
            let d = c.diff(q);
            if d.rows() > 0 && !d.is_zero() {
                differentials.insert(q, rows_of(&d)?);
            }
        }
        Ok(ComplexJson { terms, differentials })
    }

    pub fn to_complex(&self, g: &FiniteGroup) -> Result<GComplex> {
        let terms: BTreeMap<i32, GModule> =
            self.terms.iter().map(|(&q, m)| Ok((q, m.to_module(g)?))).collect::<Result<_>>()?;
        let rank = |q: i32| terms.get(&q).map_or(0, |m| m.rank());
        let diffs = self
            .differentials
            .iter()
            .map(|(&q, rows)| Ok((q, matrix_of(rows, rank(q + 1), rank(q), &format!("d^{q}"))?)))
            .collect::<Result<_>>()?;
        GComplex::new(g, terms, diffs)
    }
}

/// A Weil group as its defining data: group, kernel module and cocycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeilJson {
    pub group: GroupJson,
    pub module: ModuleJson,
    pub cocycle: CocycleJson,
}

impl WeilJson {
    pub fn from_data(wd: &WeilGroupData) -> Result<Self> {
        Ok(WeilJson {
            group: GroupJson::from_group(&wd.formation.group),
            module: ModuleJson::from_module(&wd.cl)?,
            cocycle: wd.weil.cocycle().to_json(),
        })
    }

    pub fn to_cocycle(&self) -> Result<Cocycle2> {
        let g = self.group.to_group()?;
        let m = self.module.to_module(&g)?;
        Cocycle2::from_json(&m, &self.cocycle)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupmod::augmentation_ideal;

    #[test]
    fn module_round_trip() {
        let g = FiniteGroup::symmetric3();
        let m = augmentation_ideal(&g);
        let j = ModuleJson::from_module(&m).unwrap();
        let back = j.to_module(&g).unwrap();
        assert_eq!(back.actions(), m.actions());
        let text = serde_json::to_string(&j).unwrap();
        let again: ModuleJson = serde_json::from_str(&text).unwrap();
        assert_eq!(again, j);
    }

    #[test]
    fn torsion_module_and_complex() {
        let g = FiniteGroup::cyclic(2);
        let j: ModuleJson = serde_json::from_str(r#"{"generators":1,"relations":[[4]],"action":{"g":[[-1]]}}"#).unwrap();
        let m = j.to_module(&g).unwrap();
        assert_eq!(m.underlying().to_string(), "Z/4");
        let cj = ComplexJson { terms: BTreeMap::from([(-1, j.clone()), (0, j)]), differentials: BTreeMap::from([(-1, vec![vec![2]])]) };
        let c = cj.to_complex(&g).unwrap();
        assert_eq!(ComplexJson::from_complex(&c).unwrap(), cj);
        let bad = ComplexJson { terms: cj.terms.clone(), differentials: BTreeMap::from([(-1, vec![vec![1, 1]])]) };
        assert!(bad.to_complex(&g).is_err());
    }

    #[test]
    fn group_round_trip() {
        let g = FiniteGroup::dihedral(4);
        assert_eq!(GroupJson::from_group(&g).to_group().unwrap(), g);
    }
}
