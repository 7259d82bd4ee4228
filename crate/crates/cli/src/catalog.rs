//! The bundled group catalog: a `catalog.json` listing `.gens` files and
//! construction recipes, each with its expected order.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use stabcover::constructions::{build, BuiltGroup, GroupSpec};
use stabcover::covering::{CoveringProblem, StabilizerSpec, Target};
use stabcover::permcore::{parse_cycles, PermGroup};

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    /// A `.gens` file, relative to the catalog directory.
    #[serde(default)]
    pub gens: Option<String>,
    /// A `GroupSpec` JSON file, relative to the catalog directory.
    #[serde(default)]
    pub recipe: Option<String>,
    pub order: u128,
    /// 1-based point whose stabilizer is `H`; defaults to the builder's choice.
    #[serde(default)]
    pub point: Option<usize>,
    #[serde(default)]
    pub simple: bool,
    #[serde(default)]
    pub socle: Option<String>,
    /// Generators of the socle `T` when it is a proper subgroup, for the
    /// maximal-subgroup check.
    #[serde(default)]
    pub socle_generators: Vec<String>,
    #[serde(default)]
    pub m0: bool,
    /// Run the exact search (off for groups too large to enumerate cheaply).
    #[serde(default = "yes")]
    pub search: bool,
}

#[derive(Clone, Debug, Deserialize)]
struct CatalogFile {
    entries: Vec<CatalogEntry>,
}

#[derive(Clone, Debug)]
pub struct LoadedEntry {
    pub entry: CatalogEntry,
    /// The recipe with every `gens_file` inlined.
    pub spec: GroupSpec,
    pub built: BuiltGroup,
}

impl LoadedEntry {
    pub fn problem(&self) -> Result<CoveringProblem> {
        problem_for(&self.built, self.built.default_target)
    }

    /// `T` for the maximal-subgroup check: the listed socle generators, or
    /// the group itself when simple.
    pub fn simple_socle(&self) -> Result<Option<PermGroup>> {
        let g = &self.built.group;
        if !self.entry.socle_generators.is_empty() {
            let gens = self
                .entry
                .socle_generators
                .iter()
                .map(|s| parse_cycles(s, g.degree()))
                .collect::<stabcover::Result<Vec<_>>>()?;
            return Ok(Some(PermGroup::new(g.degree(), gens)?));
        }
        Ok(self.entry.simple.then(|| g.clone()))
    }
}

pub fn problem_for(built: &BuiltGroup, target: Target) -> Result<CoveringProblem> {
    Ok(match (target, &built.socle) {
        (Target::Socle, Some(socle)) => {
            CoveringProblem::with_socle(built.group.clone(), built.stabilizer.clone(), socle.clone())?
        }
        (Target::Socle, None) => bail!("socle target requested but the socle is unknown"),
        (Target::Group, _) => CoveringProblem::new(built.group.clone(), built.stabilizer.clone())?,
    })
}

/// Reads a `GroupSpec` JSON file and inlines any `gens_file` it names.
pub fn read_recipe(path: &Path) -> Result<GroupSpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let spec: GroupSpec = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    Ok(spec.inline_files(base)?)
}

/// A `.gens` file as an inline raw recipe.
pub fn gens_spec(path: &Path) -> Result<GroupSpec> {
    let raw = GroupSpec::Raw { degree: None, generators: vec![], gens_file: Some(path.display().to_string()) };
    Ok(raw.inline_files(Path::new(""))?)
}

pub fn load_entry(dir: &Path, entry: &CatalogEntry) -> Result<LoadedEntry> {
    let spec = match (&entry.gens, &entry.recipe) {
        (Some(g), None) => {
            let raw = GroupSpec::Raw { degree: None, generators: vec![], gens_file: Some(g.clone()) };
            raw.inline_files(dir).with_context(|| format!("{}: reading {g}", entry.name))?
        }
        (None, Some(r)) => read_recipe(&dir.join(r)).with_context(|| entry.name.clone())?,
        _ => bail!("{}: give exactly one of `gens` and `recipe`", entry.name),
    };
    let mut built = build(&spec).with_context(|| format!("{}: building", entry.name))?;
    if let Some(p) = entry.point {
        let stab = StabilizerSpec::Point { point: p };
        built.stabilizer = stab.resolve(&built.group)?;
        built.stabilizer_spec = stab;
    }
    if built.group.order() != entry.order {
        bail!("{}: expected order {}, built {}", entry.name, entry.order, built.group.order());
    }
    Ok(LoadedEntry { entry: entry.clone(), spec, built })
}

pub fn catalog_path(dir: &Path) -> PathBuf {
    dir.join("catalog.json")
}

/// Entries in file order; an absent `catalog.json` is an empty catalog.
pub fn read_catalog(dir: &Path) -> Result<Vec<CatalogEntry>> {
    let path = catalog_path(dir);
    if !path.exists() {
        return Ok(Vec::new());
    }
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let file: CatalogFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(file.entries)
}
