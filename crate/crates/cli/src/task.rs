//! Task files: schema, file references and loading.

use hyperclass::groupmod::{FiniteGroup, GComplex, GModule, Subgroup};
use hyperclass::io::{ComplexJson, GroupJson, ModuleJson};
use hyperclass::tate::TateComplex;
use hyperclass::weil::{synthetic_formation, ClassComplex, FormationSpec};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Schema(String),
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Schema(_) => 2,
            CliError::Compute(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Schema(m) => write!(f, "schema error: {m}"),
            CliError::Compute(m) => write!(f, "compute error: {m}"),
        }
    }
}

pub fn schema<E: fmt::Display>(e: E) -> CliError {
    CliError::Schema(e.to_string())
}

pub fn compute<E: fmt::Display>(e: E) -> CliError {
    CliError::Compute(e.to_string())
}

/// Parse JSON text, separating syntax errors from shape errors. Both carry
/// line and column.
pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| {
        let msg = format!("{origin}: {e}");
        match e.classify() {
            serde_json::error::Category::Data => CliError::Schema(msg),
            _ => CliError::Parse(msg),
        }
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskKind {
    #[default]
    Cohomology,
    Hypercohomology,
    Shift,
    TateNakayama,
    BuildWeil,
    VerifyWeil,
    ExampleSuite,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileRef {
    pub file: PathBuf,
}

/// A value given inline or as a path relative to the task file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Source<T> {
    File(FileRef),
    Inline(T),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Name(String),
    File(FileRef),
    Table(GroupJson),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FormationRef {
    Label(String),
    Spec(FormationSpec),
}

impl FormationRef {
    pub fn spec(&self) -> Result<FormationSpec, CliError> {
        match self {
            FormationRef::Label(s) => s.parse().map_err(schema),
            FormationRef::Spec(s) => Ok(s.clone()),
        }
    }
}

/// `"whole"`, `"all"`, or explicit element lists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Subgroups {
    Named(String),
    Lists(Vec<Vec<usize>>),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskFile {
    pub kind: TaskKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<Source<ModuleJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<Source<ComplexJson>>,
    /// inclusive degree range
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<[i32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q0: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroups: Option<Subgroups>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formation: Option<FormationRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formations: Option<Vec<FormationRef>>,
    /// coordinates of the distinguished class in `H^2(G, complex)`, for a
    /// class complex given by group and complex instead of a formation
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<Vec<i64>>,
    /// reference values keyed by degree (whole group) or `"{0,1}:q"`
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub expected: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_multiple: Option<i64>,
    /// number of seeded random complexes added to a suite
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_budget: Option<usize>,
}

pub fn read_task(path: &Path) -> Result<TaskFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    parse_json(&text, &path.display().to_string())
}

/// Resolves references against a base directory.
pub struct Loader {
    pub base: PathBuf,
}

impl Loader {
    fn read<T: DeserializeOwned>(&self, f: &FileRef) -> Result<T, CliError> {
        let path = self.base.join(&f.file);
        let text = std::fs::read_to_string(&path).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
        parse_json(&text, &path.display().to_string())
    }

    fn source<T: DeserializeOwned + Clone>(&self, s: &Source<T>) -> Result<T, CliError> {
        match s {
            Source::File(f) => self.read(f),
            Source::Inline(t) => Ok(t.clone()),
        }
    }

    pub fn group(&self, g: &GroupRef) -> Result<FiniteGroup, CliError> {
        match g {
            GroupRef::Name(n) => FiniteGroup::named(n).ok_or_else(|| CliError::Schema(format!("unknown group {n:?}"))),
            GroupRef::File(f) => self.read::<GroupJson>(f)?.to_group().map_err(schema),
            GroupRef::Table(t) => t.to_group().map_err(schema),
        }
    }

    pub fn module(&self, g: &FiniteGroup, m: &Source<ModuleJson>) -> Result<GModule, CliError> {
        self.source(m)?.to_module(g).map_err(schema)
    }

    pub fn complex(&self, g: &FiniteGroup, c: &Source<ComplexJson>) -> Result<GComplex, CliError> {
        self.source(c)?.to_complex(g).map_err(schema)
    }
}

/// The coefficients of a task: a complex, or a module in degree 0, or
/// trivial `Z` when neither is given.
pub fn coefficients(t: &TaskFile, l: &Loader, g: &FiniteGroup) -> Result<GComplex, CliError> {
    match (&t.module, &t.complex) {
        (Some(_), Some(_)) => Err(CliError::Schema("give either module or complex, not both".into())),
        (Some(m), None) => Ok(GComplex::concentrated(&l.module(g, m)?, 0)),
        (None, Some(c)) => l.complex(g, c),
        (None, None) => Ok(GComplex::concentrated(&GModule::trivial_z(g), 0)),
    }
}

pub fn required_group(t: &TaskFile, l: &Loader) -> Result<FiniteGroup, CliError> {
    l.group(t.group.as_ref().ok_or_else(|| CliError::Schema("missing field `group`".into()))?)
}

pub fn select_subgroups(t: &TaskFile, g: &FiniteGroup) -> Result<Vec<Subgroup>, CliError> {
    match &t.subgroups {
        None => Ok(vec![g.whole()]),
        Some(Subgroups::Named(s)) if s == "whole" => Ok(vec![g.whole()]),
        Some(Subgroups::Named(s)) if s == "all" => g.subgroups().map_err(compute),
        Some(Subgroups::Named(s)) => Err(CliError::Schema(format!("subgroup selector {s:?}: use \"whole\", \"all\" or element lists"))),
        Some(Subgroups::Lists(ls)) => ls.iter().map(|e| Subgroup::from_elements(g, e.clone()).map_err(schema)).collect(),
    }
}

#[derive(Clone, Debug)]
pub enum FormationInput {
    Builtin(FormationSpec),
    /// group, coefficients and `class` from the task itself
    Custom,
}

impl FormationInput {
    pub fn label(&self) -> String {
        match self {
            FormationInput::Builtin(s) => s.label(),
            FormationInput::Custom => "custom".into(),
        }
    }

    pub fn load(&self, t: &TaskFile, l: &Loader) -> Result<ClassComplex, CliError> {
        match self {
            FormationInput::Builtin(spec) => synthetic_formation(spec).map_err(compute),
            FormationInput::Custom => custom_class_complex(t, l),
        }
    }
}

/// Formations named by the task: `formation`, `formations`, or a class
/// complex given as group, coefficients and class coordinates.
pub fn formations(t: &TaskFile, default_all: bool) -> Result<Vec<FormationInput>, CliError> {
    let mut out = Vec::new();
    for f in t.formation.iter().chain(t.formations.iter().flatten()) {
        out.push(FormationInput::Builtin(f.spec()?));
    }
    if t.class.is_some() {
        out.push(FormationInput::Custom);
    }
    if out.is_empty() {
        if !default_all {
            return Err(CliError::Schema("missing field `formation`".into()));
        }
        out.extend(FormationSpec::builtins().into_iter().map(FormationInput::Builtin));
    }
    Ok(out)
}

/// A class complex from explicit data.
pub fn custom_class_complex(t: &TaskFile, l: &Loader) -> Result<ClassComplex, CliError> {
    let g = required_group(t, l)?;
    let c = coefficients(t, l, &g)?;
    let coords = t.class.as_ref().ok_or_else(|| CliError::Schema("missing field `class`".into()))?;
    let h2 = TateComplex::ordinary(&c, 2).and_then(|tc| tc.cohomology(2)).map_err(compute)?;
    if coords.len() != h2.moduli().len() {
        return Err(CliError::Schema(format!("class needs {} coordinates for H^2 = {h2}", h2.moduli().len())));
    }
    let v: Vec<_> = coords.iter().map(|&x| x.into()).collect();
    Ok(ClassComplex { name: "custom".into(), group: g, complex: c, alpha: h2.class_of(&v) })
}
