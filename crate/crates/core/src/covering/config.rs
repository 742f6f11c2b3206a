//! JSON cover descriptions.
//!
//! ```json
//! {"genus": 1, "marked": 0, "degree": 2, "perm": {"a1": [2, 1], "b1": [1, 2]}}
//! {"type": "mod_ell", "genus": 2, "ell": 3}
//! {"type": "abelian", "genus": 2, "orders": [3], "targets": {"a1": [1]}}
//! {"type": "identity", "genus": 2}
//! ```
//!
//! Sheets in `perm` are numbered from 1. Abelian targets default to zero
//! for generators that are not listed. `"forget_unramified": true` drops
//! marked points whose loop has trivial monodromy.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::covering::rep::{Permutation, PermutationRep};
use crate::error::{Error, Result};
use crate::surface::{Letter, SurfaceType};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitConfig {
    genus: usize,
    #[serde(default)]
    marked: usize,
    degree: usize,
    perm: BTreeMap<String, Vec<usize>>,
    #[serde(default)]
    forget_unramified: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum TaggedConfig {
    ModEll {
        genus: usize,
        ell: u64,
    },
    Abelian {
        genus: usize,
        orders: Vec<u64>,
        #[serde(default)]
        targets: BTreeMap<String, Vec<u64>>,
    },
    Identity {
        genus: usize,
        #[serde(default)]
        marked: usize,
    },
}

pub fn rep_from_json_str(text: &str) -> Result<PermutationRep> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    rep_from_json(value)
}

pub fn rep_from_file(path: &Path) -> Result<PermutationRep> {
    rep_from_json_str(&std::fs::read_to_string(path)?)
}

pub fn rep_from_json(value: serde_json::Value) -> Result<PermutationRep> {
    if value.get("type").is_some() {
        let cfg: TaggedConfig =
            serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?;
        return match cfg {
            TaggedConfig::ModEll { genus, ell } => PermutationRep::mod_ell(genus, ell),
            TaggedConfig::Abelian {
                genus,
                orders,
                targets,
            } => {
                let st = SurfaceType::closed(genus);
                let mut tv = vec![vec![0u64; orders.len()]; 2 * genus];
                for (name, t) in targets {
                    let k = generator_slot(&st, &name)?;
                    tv[k] = t;
                }
                PermutationRep::abelian(genus, &orders, &tv)
            }
            TaggedConfig::Identity { genus, marked } => {
                Ok(PermutationRep::identity(SurfaceType::new(genus, marked)))
            }
        };
    }
    let cfg: ExplicitConfig =
        serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?;
    let st = SurfaceType::new(cfg.genus, cfg.marked);
    let mut perms: Vec<Option<Permutation>> = vec![None; st.num_generators()];
    for (name, images) in cfg.perm {
        let k = generator_slot(&st, &name)?;
        if images.len() != cfg.degree {
            return Err(Error::InvalidPermutation {
                gen: name,
                reason: format!(
                    "has {} entries but the degree is {}",
                    images.len(),
                    cfg.degree
                ),
            });
        }
        if images.contains(&0) {
            return Err(Error::InvalidPermutation {
                gen: name,
                reason: "sheets are numbered from 1".into(),
            });
        }
        let p = Permutation::from_images(images.into_iter().map(|x| x - 1).collect()).map_err(
            |reason| Error::InvalidPermutation {
                gen: name.clone(),
                reason,
            },
        )?;
        perms[k] = Some(p);
    }
    let gens = st.generators();
    let perms = perms
        .into_iter()
        .zip(&gens)
        .map(|(p, g)| {
            p.ok_or_else(|| Error::Config(format!("missing permutation for generator `{g}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    let rep = PermutationRep::new(st, perms)?;
    Ok(if cfg.forget_unramified {
        rep.forget_unramified()
    } else {
        rep
    })
}

fn generator_slot(st: &SurfaceType, name: &str) -> Result<usize> {
    let l: Letter = name.parse()?;
    if l.inverse {
        return Err(Error::Config(format!(
            "generator names are lowercase, got `{name}`"
        )));
    }
    st.gen_index(l.gen).ok_or_else(|| Error::LetterOutOfRange {
        letter: name.to_string(),
        genus: st.genus,
        marked: st.marked,
    })
}

/// One-line permutation tables with sheets numbered from 1, keyed by generator.
pub fn rep_to_json(rep: &PermutationRep) -> serde_json::Value {
    let st = rep.surface();
    let perm: serde_json::Map<String, serde_json::Value> = st
        .generators()
        .iter()
        .zip(rep.perms())
        .map(|(g, p)| {
            let imgs: Vec<usize> = p.images().into_iter().map(|x| x + 1).collect();
            (g.to_string(), serde_json::json!(imgs))
        })
        .collect();
    serde_json::json!({
        "genus": st.genus,
        "marked": st.marked,
        "degree": rep.degree(),
        "perm": perm,
    })
}
