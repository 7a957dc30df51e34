//! Versioned JSON documents: groups, piles, modules, morphisms, embedding
//! problems and corpus entries. Permutations and points are 1-based on disk.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::ep::{ep_validate, EmbeddingProblem};
use crate::error::{Error, Result};
use crate::group::{group_from_generators_capped, FiniteGroup, GroupHom};
use crate::linalg::FpMatrix;
use crate::module::FpModule;
use crate::pile::{Pile, PileMorphism};

pub const SCHEMA: &str = "pilelab/1";

fn schema_tag() -> Option<String> {
    Some(SCHEMA.to_string())
}

fn check_tag(tag: &Option<String>, what: &str, required: bool) -> Result<()> {
    match tag {
        Some(s) if s == SCHEMA => Ok(()),
        Some(s) => Err(Error::Schema(format!("{what}: unsupported schema {s:?}, expected {SCHEMA:?}"))),
        None if required => Err(Error::Schema(format!("{what}: missing \"schema\" field"))),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PileJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub group: GroupJson,
    pub points: usize,
    /// One permutation of `1..=points` per group generator.
    pub action: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub p: u32,
    pub dim: usize,
    /// One `dim × dim` matrix (list of rows) per group generator.
    pub matrices: Vec<Vec<Vec<u32>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    /// Image of each source generator, as a permutation in the target group's representation.
    pub generator_images: Vec<Vec<usize>>,
    pub point_images: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub source_pile: PileJson,
    pub mid_pile: PileJson,
    pub target_pile: PileJson,
    pub phi: MorphismJson,
    pub alpha: MorphismJson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expected {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub schema: Option<String>,
    pub name: String,
    pub pile: PileJson,
    /// `None`: every prime dividing the group order.
    #[serde(default)]
    pub primes: Option<Vec<u32>>,
    pub expected: Expected,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpCorpusEntry {
    pub schema: Option<String>,
    pub name: String,
    pub ep: EpJson,
    /// Whether the problem has a solution.
    pub expected: Expected,
    /// Number of minimal-kernel steps in the kernel chain.
    pub chain_length: usize,
    pub provenance: String,
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

pub fn read_file<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    parse(&text).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

pub fn group_from_json(g: &GroupJson, cfg: &Config) -> Result<Arc<FiniteGroup>> {
    check_tag(&g.schema, "group", false)?;
    Ok(Arc::new(group_from_generators_capped(g.degree, &g.generators, cfg.group_order_cap)?))
}

/// Top-level group documents must carry the schema tag.
pub fn group_document(g: &GroupJson, cfg: &Config) -> Result<Arc<FiniteGroup>> {
    check_tag(&g.schema, "group", true)?;
    group_from_json(g, cfg)
}

fn one_based(v: &[u32]) -> Vec<usize> {
    v.iter().map(|&x| x as usize + 1).collect()
}

pub fn group_to_json(g: &FiniteGroup, name: Option<&str>) -> GroupJson {
    let (degree, images) = g.permutation_rep();
    GroupJson {
        schema: None,
        name: name.map(str::to_string),
        degree,
        generators: g.generators().iter().map(|&s| one_based(&images[s])).collect(),
    }
}

fn zero_based(v: &[usize], n: usize, what: &str) -> Result<Vec<usize>> {
    v.iter()
        .map(|&x| {
            if x == 0 || x > n {
                Err(Error::Schema(format!("{what}: entry {x} is outside 1..={n}")))
            } else {
                Ok(x - 1)
            }
        })
        .collect()
}

pub fn pile_from_json(p: &PileJson, cfg: &Config) -> Result<Arc<Pile>> {
    check_tag(&p.schema, "pile", false)?;
    let group = group_from_json(&p.group, cfg)?;
    let action = p.action.iter().map(|a| zero_based(a, p.points, "pile action")).collect::<Result<Vec<_>>>()?;
    Ok(Arc::new(Pile::new(group, p.points, &action)?))
}

pub fn pile_document(p: &PileJson, cfg: &Config) -> Result<Arc<Pile>> {
    check_tag(&p.schema, "pile", true)?;
    pile_from_json(p, cfg)
}

pub fn pile_to_json(p: &Pile, name: Option<&str>) -> PileJson {
    PileJson {
        schema: None,
        name: name.map(str::to_string),
        group: group_to_json(p.group(), None),
        points: p.points(),
        action: p.generator_action().iter().map(|a| a.iter().map(|&t| t + 1).collect()).collect(),
    }
}

pub fn module_from_json(m: &ModuleJson, group: &Arc<FiniteGroup>) -> Result<FpModule> {
    check_tag(&m.schema, "module", false)?;
    crate::linalg::check_prime(m.p)?;
    let mats = m
        .matrices
        .iter()
        .map(|rows| {
            if rows.len() != m.dim || rows.iter().any(|r| r.len() != m.dim) {
                return Err(Error::DimensionMismatch { expected: m.dim, got: rows.len() });
            }
            let rows = rows.iter().map(|r| r.iter().map(|&x| (x % m.p) as u8).collect()).collect();
            Ok(FpMatrix::from_rows_with_cols(m.p, m.dim, rows))
        })
        .collect::<Result<Vec<_>>>()?;
    FpModule::new(group.clone(), m.p, m.dim, mats)
}

pub fn module_to_json(m: &FpModule) -> ModuleJson {
    ModuleJson {
        schema: schema_tag(),
        p: m.p(),
        dim: m.dim(),
        matrices: m
            .gen_matrices()
            .iter()
            .map(|a| a.to_rows().into_iter().map(|r| r.into_iter().map(u32::from).collect()).collect())
            .collect(),
    }
}

pub fn morphism_from_json(m: &MorphismJson, source: &Arc<Pile>, target: &Arc<Pile>) -> Result<PileMorphism> {
    check_tag(&m.schema, "morphism", false)?;
    let tg = target.group();
    let degree = tg.degree().ok_or_else(|| Error::Schema("target group has no permutation representation".into()))?;
    let images = m
        .generator_images
        .iter()
        .map(|perm| {
            let img: Vec<u32> = zero_based(perm, degree, "generator image")?.into_iter().map(|x| x as u32).collect();
            tg.find_perm(&img)
                .ok_or_else(|| Error::Schema(format!("generator image {perm:?} is not in the target group")))
        })
        .collect::<Result<Vec<_>>>()?;
    let hom = GroupHom::from_generator_images(source.group().clone(), tg.clone(), &images)?;
    let points = zero_based(&m.point_images, target.points(), "point image")?;
    PileMorphism::new(source.clone(), target.clone(), hom, points)
}

pub fn morphism_to_json(m: &PileMorphism) -> MorphismJson {
    let (_, images) = m.target().group().permutation_rep();
    MorphismJson {
        schema: None,
        generator_images: m
            .source()
            .group()
            .generators()
            .iter()
            .map(|&s| one_based(&images[m.apply_group(s)]))
            .collect(),
        point_images: m.point_map().iter().map(|&x| x + 1).collect(),
    }
}

pub fn ep_from_json(e: &EpJson, cfg: &Config) -> Result<EmbeddingProblem> {
    check_tag(&e.schema, "embedding problem", true)?;
    let g = pile_from_json(&e.source_pile, cfg)?;
    let b = pile_from_json(&e.mid_pile, cfg)?;
    let a = pile_from_json(&e.target_pile, cfg)?;
    let phi = morphism_from_json(&e.phi, &g, &a)?;
    let alpha = morphism_from_json(&e.alpha, &b, &a)?;
    ep_validate(phi, alpha)
}

pub fn ep_to_json(ep: &EmbeddingProblem) -> EpJson {
    EpJson {
        schema: schema_tag(),
        source_pile: pile_to_json(ep.source(), None),
        mid_pile: pile_to_json(ep.mid(), None),
        target_pile: pile_to_json(ep.target(), None),
        phi: morphism_to_json(ep.phi()),
        alpha: morphism_to_json(ep.alpha()),
    }
}

/// Corpus directory contents: `piles/*.json` and `eps/*.json`, sorted by file name.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub piles: Vec<(PathBuf, CorpusEntry)>,
    pub eps: Vec<(PathBuf, EpCorpusEntry)>,
}

fn json_files(dir: &Path) -> Result<Vec<PathBuf>> {
    if !dir.exists() {
        return Ok(Vec::new());
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn load_corpus(dir: &Path) -> Result<Corpus> {
    if !dir.is_dir() {
        return Err(Error::Schema(format!("{} is not a corpus directory", dir.display())));
    }
    let mut piles = Vec::new();
    for f in json_files(&dir.join("piles"))? {
        let entry: CorpusEntry = read_file(&f)?;
        check_tag(&entry.schema, &entry.name, true)?;
        piles.push((f, entry));
    }
    let mut eps = Vec::new();
    for f in json_files(&dir.join("eps"))? {
        let entry: EpCorpusEntry = read_file(&f)?;
        check_tag(&entry.schema, &entry.name, true)?;
        eps.push((f, entry));
    }
    Ok(Corpus { piles, eps })
}
