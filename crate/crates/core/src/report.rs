//! Report envelope and shared report pieces.
//!
//! Reports serialize with sorted keys and no floating point, so identical
//! inputs give byte-identical output. Integers that can outgrow 64 bits
//! (determinants, lattice indices) are written as decimal strings.

use serde::Serialize;

use crate::covering::Cover;
use crate::curves::TopType;
use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    True,
    False,
    Inconclusive,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::True => 0,
            Verdict::False => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverSummary {
    pub id: String,
    pub base_genus: usize,
    pub base_marked: usize,
    pub degree: usize,
    pub euler_characteristic: i64,
    pub riemann_hurwitz_prediction: i64,
    pub riemann_hurwitz_ok: bool,
    pub genus: i64,
    pub rank: usize,
    /// Cycle lengths of the monodromy around each marked point.
    pub ramification: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gram_det_abs: Option<String>,
}

impl CoverSummary {
    /// With `with_det`, also computes `|det|` of the intersection form.
    pub fn of(cover: &Cover, with_det: bool) -> Self {
        let cx = &cover.complex;
        let st = cover.rep().surface();
        let chi = cx.euler_characteristic();
        let rh = cx.riemann_hurwitz_prediction();
        CoverSummary {
            id: cover.rep().label().to_string(),
            base_genus: st.genus,
            base_marked: st.marked,
            degree: cx.degree(),
            euler_characteristic: chi,
            riemann_hurwitz_prediction: rh,
            riemann_hurwitz_ok: chi == rh,
            genus: cx.genus(),
            rank: cover.lattice.rank(),
            ramification: cx
                .ramification()
                .iter()
                .map(|lens| {
                    let mut l = lens.clone();
                    l.sort_unstable();
                    l
                })
                .collect(),
            gram_det_abs: with_det.then(|| {
                let d = cover.lattice.gram().det();
                d.magnitude().to_string()
            }),
        }
    }
}

/// Sampling knobs shared by the span-based checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SamplingParams {
    pub budget: usize,
    pub window: usize,
    pub rng_seed: u64,
}

impl Default for SamplingParams {
    fn default() -> Self {
        SamplingParams {
            budget: 400,
            window: 50,
            rng_seed: 0,
        }
    }
}

pub fn sigma_strings(sigma: &[TopType]) -> Vec<String> {
    sigma.iter().map(ToString::to_string).collect()
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    check: &'a str,
    verdict: Verdict,
    outcome: &'a str,
    report: &'a T,
}

/// Pretty JSON with a trailing newline.
pub fn render<T: Serialize>(
    check: &str,
    verdict: Verdict,
    outcome: &str,
    report: &T,
) -> Result<String> {
    let env = Envelope {
        schema: SCHEMA_VERSION,
        check,
        verdict,
        outcome,
        report,
    };
    // round trip through Value to sort every object's keys
    let v = serde_json::to_value(&env)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

/// Writes to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &std::path::Path, contents: &str) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(std::path::Path::new("."));
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    std::fs::write(&tmp, contents)?;
    if let Err(e) = std::fs::rename(&tmp, path) {
        let _ = std::fs::remove_file(&tmp);
        return Err(e.into());
    }
    Ok(())
}
