//! Instance files: a TOML description of a pipeline instance, optionally
//! with a second model of the same `X` given as a value table.
//!
//! ```toml
//! schema = "glcm-instance/1"
//! seed = 7
//! n_max = 34
//! equivalence_mode = "atoms"
//! x = [0, 1, 5]
//! seeds = [[0, 2, 4]]
//! sections = ["main", "alternate"]
//!
//! [group]
//! kind = "cyclic"
//! n = 6
//! ```

use serde::Deserialize;

use crate::certificate::{Certificate, Check};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Group};
use crate::pipeline::{alt_error_sets, theorem_certificate, EquivalenceMode, PipelineConfig, PipelineInstance};
use crate::quasihom::{morphism_witness, universality_construct, uniqueness_bound, Choice, Model};
use crate::subset::GSubset;

pub const INSTANCE_SCHEMA: &str = "glcm-instance/1";

/// Largest ambient group accepted from a file.
pub const MAX_FILE_ORDER: usize = 1024;

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic { n: usize },
    Dihedral { n: usize },
    Symmetric { n: usize },
    Alternating { n: usize },
    Quaternion,
    Product { factors: Vec<GroupSpec> },
    Permutations { degree: usize, generators: Vec<Vec<usize>> },
    Matrices { p: u32, dim: usize, generators: Vec<Vec<u32>> },
    Table { rows: Vec<Vec<usize>>, labels: Option<Vec<String>> },
}

impl GroupSpec {
    pub fn build(&self) -> Result<Group> {
        let small = |n: usize, lo: usize, hi: usize, what: &str| {
            if n < lo || n > hi {
                Err(Error::Precondition(format!("{what} needs {lo} <= n <= {hi}, got {n}")))
            } else {
                Ok(())
            }
        };
        let g = match self {
            GroupSpec::Cyclic { n } => {
                small(*n, 1, MAX_FILE_ORDER, "cyclic")?;
                FiniteGroup::cyclic(*n)
            }
            GroupSpec::Dihedral { n } => {
                small(*n, 1, MAX_FILE_ORDER / 2, "dihedral")?;
                FiniteGroup::dihedral(*n)
            }
            GroupSpec::Symmetric { n } => {
                small(*n, 1, 6, "symmetric")?;
                FiniteGroup::symmetric(*n)
            }
            GroupSpec::Alternating { n } => {
                small(*n, 1, 6, "alternating")?;
                FiniteGroup::alternating(*n)
            }
            GroupSpec::Quaternion => FiniteGroup::quaternion(),
            GroupSpec::Product { factors } => {
                let mut it = factors.iter();
                let first = it.next().ok_or(Error::Empty("product factors"))?.build()?;
                let mut acc = first;
                for f in it {
                    let next = f.build()?;
                    if acc.order() * next.order() > MAX_FILE_ORDER {
                        return Err(Error::Precondition(format!("product order exceeds {MAX_FILE_ORDER}")));
                    }
                    acc = FiniteGroup::direct_product(&acc, &next);
                }
                acc
            }
            GroupSpec::Permutations { degree, generators } => FiniteGroup::from_permutations(*degree, generators)?,
            GroupSpec::Matrices { p, dim, generators } => FiniteGroup::from_matrices(*p, *dim, generators)?,
            GroupSpec::Table { rows, labels } => FiniteGroup::from_table(rows.clone(), labels.clone())?,
        };
        if g.order() > MAX_FILE_ORDER {
            return Err(Error::Precondition(format!("group order {} exceeds {MAX_FILE_ORDER}", g.order())));
        }
        Ok(g)
    }
}

/// A second model `h : G -> H : T` of the same `X`, for the universality
/// checks. `map` is indexed by ambient elements of `<X>`, in increasing
/// order of ambient index.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub target: GroupSpec,
    pub map: Vec<usize>,
    pub error_set: Vec<usize>,
    /// Optional candidate morphism `Q -> H`, indexed by quotient element.
    pub morphism: Option<Vec<usize>>,
    pub choice_seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Section {
    Main,
    Alternate,
    Universality,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema: String,
    pub name: Option<String>,
    pub seed: Option<u64>,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default)]
    pub equivalence_mode: EquivalenceMode,
    pub group: GroupSpec,
    pub x: Vec<usize>,
    #[serde(default)]
    pub seeds: Vec<Vec<usize>>,
    #[serde(default = "default_sections")]
    pub sections: Vec<Section>,
    #[serde(default)]
    pub checks: Vec<String>,
    pub model: Option<ModelSpec>,
}

fn default_n_max() -> usize {
    crate::pipeline::MIN_HORIZON
}

fn default_sections() -> Vec<Section> {
    vec![Section::Main]
}

fn line_at(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// First line whose key is `key` (as `key = ...` or a `[key]` header).
fn line_of_key(text: &str, key: &str) -> usize {
    for (i, line) in text.lines().enumerate() {
        let t = line.trim_start();
        let header = t.strip_prefix('[').map(|r| r.trim_start_matches('[').starts_with(key)).unwrap_or(false);
        let assign = t.strip_prefix(key).map(|r| r.trim_start().starts_with('=')).unwrap_or(false);
        if header || assign {
            return i + 1;
        }
    }
    1
}

fn at(text: &str, key: &str, e: Error) -> Error {
    Error::Parse { line: line_of_key(text, key), msg: format!("{key}: {e}") }
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<InstanceFile> {
        let file: InstanceFile = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| line_at(text, s.start)).unwrap_or(1);
            Error::Parse { line, msg: e.message().to_string() }
        })?;
        if file.schema != INSTANCE_SCHEMA {
            return Err(at(text, "schema", Error::Precondition(format!("expected \"{INSTANCE_SCHEMA}\""))));
        }
        Ok(file)
    }

    pub fn read(path: &std::path::Path) -> Result<InstanceFile> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse { line: 0, msg: format!("{}: {e}", path.display()) })?;
        Self::parse(&text)
    }

    /// Build the pipeline instance, naming the offending key on failure.
    /// `text` is the source, used only to locate diagnostics.
    pub fn build(&self, text: &str) -> Result<PipelineInstance> {
        if self.n_max < crate::pipeline::MIN_HORIZON {
            return Err(at(text, "n_max", Error::Horizon { got: self.n_max, need: crate::pipeline::MIN_HORIZON }));
        }
        let g = self.group.build().map_err(|e| at(text, "group", e))?;
        let x = GSubset::from_elems(&g, self.x.iter().copied()).map_err(|e| at(text, "x", e))?;
        if !x.is_symmetric() {
            return Err(at(text, "x", Error::NotSymmetric));
        }
        let mut extra = Vec::new();
        for s in &self.seeds {
            extra.push(GSubset::from_elems(&g, s.iter().copied()).map_err(|e| at(text, "seeds", e))?);
        }
        let cfg = PipelineConfig { n_max: self.n_max, mode: self.equivalence_mode, extra_seeds: extra, ..Default::default() };
        PipelineInstance::build(&g, &x, &cfg).map_err(|e| match e {
            Error::Precondition(_) => at(text, "seeds", e),
            Error::Horizon { .. } => at(text, "n_max", e),
            other => other,
        })
    }

    fn model(&self, inst: &PipelineInstance, spec: &ModelSpec, text: &str) -> Result<Model> {
        let target = spec.target.build().map_err(|e| at(text, "model", e))?;
        if spec.map.len() != inst.group.order() {
            return Err(at(text, "map", Error::Precondition(format!("map has {} values, <X> has {} elements", spec.map.len(), inst.group.order()))));
        }
        let err = GSubset::from_elems(&target, spec.error_set.iter().copied()).map_err(|e| at(text, "error_set", e))?;
        Model::new(&inst.group, &target, spec.map.clone(), &err).map_err(|e| at(text, "map", e))
    }

    /// Run every selected section. `checks` (when nonempty) filters the
    /// resulting checks by id; the file's own list applies otherwise.
    pub fn run(&self, text: &str, checks: &[String]) -> Result<Certificate> {
        let inst = self.build(text)?;
        let subject = self.name.clone().unwrap_or_else(|| "instance".into());
        let mut cert = Certificate::new(&subject);
        if let Some(seed) = self.seed {
            cert = cert.with_seed(seed);
        }
        for section in &self.sections {
            match section {
                Section::Main => {
                    let main = theorem_certificate(&inst)?;
                    for (k, v) in main.summary {
                        cert.summary.insert(k, v);
                    }
                    cert.extend(main.checks);
                }
                Section::Alternate => cert.extend(alt_error_sets(&inst)?.checks),
                Section::Universality => {
                    let spec = self.model.as_ref().ok_or_else(|| at(text, "sections", Error::Precondition("universality needs a [model] table".into())))?;
                    let h = self.model(&inst, spec, text)?;
                    let choice = match spec.choice_seed.or(self.seed) {
                        Some(s) => Choice::Seeded(s),
                        None => Choice::Least,
                    };
                    let u = universality_construct(&inst, &h, choice)?;
                    cert.extend(u.checks.iter().cloned());
                    if let Some(rho) = &spec.morphism {
                        let f = Model::from_pipeline(&inst)?;
                        match morphism_witness(&f, &h, rho) {
                            Ok(m) => cert.push(uniqueness_bound(&f, &h, &m, &u.h_tilde, u.l)?),
                            Err(e) => cert.push(Check::new("univ-uniqueness-n", false).note(e.to_string())),
                        }
                    }
                }
            }
        }
        let filter: &[String] = if checks.is_empty() { &self.checks } else { checks };
        if !filter.is_empty() {
            cert.retain_ids(filter);
        }
        Ok(cert)
    }
}
