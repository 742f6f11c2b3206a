//! Command-line front end.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::covering::{config, Cover, PermutationRep};
use crate::curves::{standard_pants, TopType};
use crate::error::{Error, Result};
use crate::nilcert::power_lemma_check;
use crate::report::{render, write_atomic, CoverSummary, SamplingParams, Verdict};
use crate::spancheck;
use crate::surface::SurfaceType;

#[derive(Parser, Debug)]
#[command(
    name = "coverhom",
    version,
    about = "Homology of lifted curves on finite branched covers of surfaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a cover and print its summary.
    Build {
        #[command(flatten)]
        cover: CoverArgs,
        /// Also print the permutation table.
        #[arg(long)]
        perms: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one check and write its JSON report.
    Check {
        #[arg(value_enum)]
        name: CheckName,
        #[command(flatten)]
        cover: CoverArgs,
        #[command(flatten)]
        params: CheckArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckName {
    Fullness,
    Symplectic,
    Twistfixed,
    Pants,
    Gap,
    Orbit,
    Powerlemma,
}

impl CheckName {
    pub fn needs_cover(self) -> bool {
        !matches!(self, CheckName::Gap | CheckName::Powerlemma)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Fullness => "fullness",
            CheckName::Symplectic => "symplectic",
            CheckName::Twistfixed => "twistfixed",
            CheckName::Pants => "pants",
            CheckName::Gap => "gap",
            CheckName::Orbit => "orbit",
            CheckName::Powerlemma => "powerlemma",
        }
    }
}

impl std::str::FromStr for CheckName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        <CheckName as ValueEnum>::from_str(s, false)
            .map_err(|_| Error::InvalidParameter(format!("unknown check `{s}`")))
    }
}

#[derive(Args, Debug, Default)]
#[group(multiple = false)]
pub struct CoverArgs {
    /// JSON cover description.
    #[arg(long, value_name = "FILE")]
    pub cover: Option<PathBuf>,
    /// Mod-L homology cover of the closed genus G surface.
    #[arg(long, num_args = 2, value_names = ["G", "L"])]
    pub mod_ell: Option<Vec<u64>>,
    /// Abelian cover as inline JSON: {"genus":..,"orders":[..],"targets":{..}}.
    #[arg(long, value_name = "JSON")]
    pub abelian: Option<String>,
    /// Trivial cover of the closed genus G surface.
    #[arg(long, value_name = "G")]
    pub identity: Option<usize>,
}

impl CoverArgs {
    fn is_set(&self) -> bool {
        self.cover.is_some()
            || self.mod_ell.is_some()
            || self.abelian.is_some()
            || self.identity.is_some()
    }

    pub fn load(&self) -> Result<Cover> {
        let rep = if let Some(path) = &self.cover {
            config::rep_from_file(path)?
        } else if let Some(v) = &self.mod_ell {
            PermutationRep::mod_ell(v[0] as usize, v[1])?
        } else if let Some(text) = &self.abelian {
            let mut value: serde_json::Value = serde_json::from_str(text)?;
            let obj = value
                .as_object_mut()
                .ok_or_else(|| Error::Config("abelian description must be a JSON object".into()))?;
            obj.insert("type".into(), "abelian".into());
            config::rep_from_json(value)?
        } else if let Some(g) = self.identity {
            PermutationRep::identity(SurfaceType::closed(g))
        } else {
            return Err(Error::Config(
                "no cover given: use --cover, --mod-ell, --abelian or --identity".into(),
            ));
        };
        Cover::new(rep)
    }
}

#[derive(Args, Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckArgs {
    /// Curve types, comma separated: nonseparating, separatingH, pants.
    #[arg(long, value_delimiter = ',', default_value = "nonseparating")]
    pub sigma: Vec<String>,
    #[arg(long, default_value_t = 400)]
    pub budget: usize,
    /// Stop after this many curves that leave the rank unchanged (0 disables).
    #[arg(long, default_value_t = 50)]
    pub window: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Base genus for gap.
    #[arg(long, default_value_t = 2)]
    pub g: usize,
    /// Modulus for gap and powerlemma.
    #[arg(long, default_value_t = 3)]
    pub ell: u64,
    /// Number of generators for powerlemma.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Random classes tested by orbit.
    #[arg(long, default_value_t = 50)]
    pub vectors: usize,
    #[arg(long, default_value_t = 100)]
    pub translates: usize,
    /// For gap: also build the cover and test the witness against the sampled integral span.
    #[arg(long)]
    pub cross_check: bool,
}

impl Default for CheckArgs {
    fn default() -> Self {
        CheckArgs {
            sigma: vec!["nonseparating".into()],
            budget: 400,
            window: 50,
            seed: 0,
            out: None,
            g: 2,
            ell: 3,
            n: 3,
            trials: 1000,
            vectors: 50,
            translates: 100,
            cross_check: false,
        }
    }
}

impl CheckArgs {
    /// Parameters as a JSON object with the long flag names as keys
    /// (`cross_check` for `--cross-check`); missing keys take the defaults.
    pub fn from_json(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Ok(Self::default());
        }
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    fn sampling(&self) -> SamplingParams {
        SamplingParams {
            budget: self.budget,
            window: self.window,
            rng_seed: self.seed,
        }
    }

    fn sigma(&self, st: &SurfaceType) -> Result<Vec<TopType>> {
        let mut out = Vec::new();
        for s in &self.sigma {
            let s = s.trim();
            if s.is_empty() {
                continue;
            }
            if s == "pants" {
                out.extend(standard_pants(st)?.types());
                continue;
            }
            let t: TopType = s.parse()?;
            if !t.is_supported(st) {
                return Err(Error::UnsupportedType(format!(
                    "{t} on a surface of genus {}",
                    st.genus
                )));
            }
            out.push(t);
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// A rendered report and its verdict.
pub struct Outcome {
    pub text: String,
    pub verdict: Verdict,
}

fn finish<T: Serialize>(
    name: &str,
    verdict: Verdict,
    outcome: &str,
    report: &T,
) -> Result<Outcome> {
    Ok(Outcome {
        text: render(name, verdict, outcome, report)?,
        verdict,
    })
}

pub fn run_check(name: CheckName, cover: &CoverArgs, args: &CheckArgs) -> Result<Outcome> {
    if name.needs_cover() {
        if !cover.is_set() {
            return Err(Error::Config(format!(
                "check {} needs a cover",
                name.as_str()
            )));
        }
        run_check_with(name, Some(&cover.load()?), args)
    } else {
        run_check_with(name, None, args)
    }
}

/// Runs a check against an already built cover. `gap` and `powerlemma`
/// ignore `cover`; the others require it.
pub fn run_check_with(name: CheckName, cover: Option<&Cover>, args: &CheckArgs) -> Result<Outcome> {
    let p = args.sampling();
    let label = name.as_str();
    match name {
        CheckName::Gap => {
            let r = spancheck::gap_check(args.g, args.ell, &p, args.cross_check)?;
            return finish(label, r.verdict, &r.outcome, &r);
        }
        CheckName::Powerlemma => {
            let r = power_lemma_check(args.n, args.ell, args.trials, args.seed)?;
            let (v, o) = if r.all_passed() {
                (Verdict::True, "ALL_PASS")
            } else {
                (Verdict::False, "FAILED")
            };
            return finish(label, v, o, &r);
        }
        _ => {}
    }
    let c = cover.ok_or_else(|| Error::Config(format!("check {label} needs a cover")))?;
    let st = c.rep().surface();
    match name {
        CheckName::Fullness => {
            let r = spancheck::rational_fullness(c, &args.sigma(&st)?, &p)?;
            finish(label, r.verdict, &r.outcome, &r)
        }
        CheckName::Symplectic => {
            let r = spancheck::symplectic_check(c, &args.sigma(&st)?, &p)?;
            finish(label, r.verdict, &r.outcome, &r)
        }
        CheckName::Twistfixed => {
            let r = spancheck::lemma_twistfixed_check(c, &args.sigma(&st)?, &p)?;
            finish(label, r.verdict, &r.outcome, &r)
        }
        CheckName::Pants => {
            let r = spancheck::pants_span_check(c, &standard_pants(&st)?, &p)?;
            finish(label, r.verdict, &r.outcome, &r)
        }
        CheckName::Orbit => {
            let r =
                spancheck::orbit_check(c, &args.sigma(&st)?, &p, args.vectors, args.translates)?;
            finish(label, r.verdict, &r.outcome, &r)
        }
        CheckName::Gap | CheckName::Powerlemma => unreachable!("handled above"),
    }
}

#[derive(Serialize)]
struct BuildOutput {
    schema: u32,
    summary: CoverSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    perms: Option<serde_json::Value>,
}

pub fn run_build(cover: &CoverArgs, perms: bool) -> Result<String> {
    let c = cover.load()?;
    let out = BuildOutput {
        schema: crate::report::SCHEMA_VERSION,
        summary: CoverSummary::of(&c, true),
        perms: perms.then(|| config::rep_to_json(c.rep())),
    };
    let mut s = serde_json::to_string_pretty(&serde_json::to_value(&out)?)?;
    s.push('\n');
    Ok(s)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Runs the parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let res = match &cli.command {
        Command::Build { cover, perms, out } => run_build(cover, *perms)
            .and_then(|s| emit(&s, out.as_ref()))
            .map(|_| 0),
        Command::Check {
            name,
            cover,
            params,
        } => run_check(*name, cover, params).and_then(|o| {
            emit(&o.text, params.out.as_ref())?;
            Ok(o.verdict.exit_code())
        }),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
