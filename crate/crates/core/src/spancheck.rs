//! Sampling-driven checks on the span of lifted curve classes.
//!
//! Every check draws curves of the requested types, lifts them, and
//! accumulates the classes of all lift components. Sampling stops at full
//! rank, after `window` consecutive curves that leave the rank unchanged,
//! or when the budget runs out.

use std::collections::{BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::covering::{Cover, CoverClass};
use crate::curves::{class_matches_type, CurveSampler, PantsData, SccWord, TopType};
use crate::error::{Error, Result};
use crate::nilcert::{integral_gap_certificate, GapCertificate};
use crate::report::{sigma_strings, CoverSummary, SamplingParams, Verdict};
use crate::surface::Word;
use crate::symplin::{
    det_bareiss, index, is_symplectic_q, perp, restricted_gram, splits_with_perp, Index,
    IntLattice, SpanAccumulator,
};
use crate::twist::{
    check_twist_matrix, lifted_twist_data, orbit_witness, twist_matrix, FixedSpaceAccumulator,
    LiftedTwistData, OrbitVerdict,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    FullRank,
    Stable,
    Budget,
}

/// Sampled lifts and the rational span of their classes.
#[derive(Clone, Debug)]
pub struct SampledSpan {
    pub data: Vec<LiftedTwistData>,
    pub span: SpanAccumulator,
    /// Rank after each sampled curve.
    pub trace: Vec<usize>,
    pub stop: StopReason,
}

impl SampledSpan {
    pub fn saturated(&self) -> bool {
        self.stop != StopReason::Budget
    }

    pub fn classes(&self) -> impl Iterator<Item = &CoverClass> {
        self.data.iter().flat_map(|d| d.classes())
    }
}

fn samplers(cover: &Cover, sigma: &[TopType], rng_seed: u64) -> Result<Vec<CurveSampler>> {
    let st = cover.rep().surface();
    sigma
        .iter()
        .enumerate()
        .map(|(k, t)| CurveSampler::new(&st, t, rng_seed.wrapping_add(k as u64)))
        .collect()
}

/// Draws curves round-robin over the types in `sigma`.
pub fn sample_span(
    cover: &Cover,
    sigma: &[TopType],
    params: &SamplingParams,
) -> Result<SampledSpan> {
    let st = cover.rep().surface();
    let mut span = SpanAccumulator::new(cover.lattice.rank());
    let mut data = Vec::new();
    let mut trace = Vec::new();
    let mut stable = 0;
    let mut sources = samplers(cover, sigma, params.rng_seed)?;
    let mut stop = StopReason::Budget;
    if span.is_full() {
        stop = StopReason::FullRank;
    }
    let mut k = 0;
    while stop == StopReason::Budget && k < params.budget && !sources.is_empty() {
        let n = sources.len();
        let curve = sources[k % n].next().expect("samplers are infinite");
        k += 1;
        if !class_matches_type(&st, &curve) {
            return Err(Error::Internal(format!(
                "sampled `{}` does not match type {}",
                curve.word, curve.ttype
            )));
        }
        let d = lifted_twist_data(cover, &curve)?;
        let mut grew = false;
        for c in d.classes() {
            grew |= span.insert(&c.0);
        }
        data.push(d);
        trace.push(span.rank());
        stable = if grew { 0 } else { stable + 1 };
        if span.is_full() {
            stop = StopReason::FullRank;
        } else if params.window > 0 && stable >= params.window {
            stop = StopReason::Stable;
        }
    }
    Ok(SampledSpan {
        data,
        span,
        trace,
        stop,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FullnessReport {
    pub cover: CoverSummary,
    pub sigma: Vec<String>,
    pub sampling: SamplingParams,
    pub curves_sampled: usize,
    pub stop: StopReason,
    pub rank_trace: Vec<usize>,
    pub rank: usize,
    pub ambient: usize,
    pub verdict: Verdict,
    pub outcome: String,
}

pub fn rational_fullness(
    cover: &Cover,
    sigma: &[TopType],
    params: &SamplingParams,
) -> Result<FullnessReport> {
    let s = sample_span(cover, sigma, params)?;
    let full = s.span.is_full();
    Ok(FullnessReport {
        cover: CoverSummary::of(cover, false),
        sigma: sigma_strings(sigma),
        sampling: *params,
        curves_sampled: s.data.len(),
        stop: s.stop,
        rank_trace: s.trace,
        rank: s.span.rank(),
        ambient: s.span.ambient(),
        verdict: if full {
            Verdict::True
        } else {
            Verdict::Inconclusive
        },
        outcome: if full {
            "FULL".into()
        } else {
            format!("INCONCLUSIVE({})", s.span.rank())
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SymplecticReport {
    pub cover: CoverSummary,
    pub sigma: Vec<String>,
    pub sampling: SamplingParams,
    pub curves_sampled: usize,
    pub stop: StopReason,
    pub rank_trace: Vec<usize>,
    pub dim_w: usize,
    pub dim_w_perp: usize,
    pub restricted_gram_det: String,
    pub symplectic: bool,
    pub splits: bool,
    pub verdict: Verdict,
    pub outcome: String,
}

/// Whether the sampled span is a symplectic subspace. A degenerate sample
/// is inconclusive: a larger sample may still reach a nondegenerate span.
pub fn symplectic_check(
    cover: &Cover,
    sigma: &[TopType],
    params: &SamplingParams,
) -> Result<SymplecticReport> {
    let s = sample_span(cover, sigma, params)?;
    let gram = cover.lattice.gram();
    let w = s.span.to_subspace();
    let wp = perp(&w, gram);
    let symplectic = is_symplectic_q(&w, gram);
    let splits = splits_with_perp(&w, gram);
    if symplectic != splits {
        return Err(Error::Internal(format!(
            "nondegeneracy ({symplectic}) and the splitting H = W + W^perp ({splits}) disagree"
        )));
    }
    if s.span.is_full() && !symplectic {
        return Err(Error::Internal("the full space is not symplectic".into()));
    }
    let det = det_bareiss(restricted_gram(&w.integer_basis(), gram));
    Ok(SymplecticReport {
        cover: CoverSummary::of(cover, false),
        sigma: sigma_strings(sigma),
        sampling: *params,
        curves_sampled: s.data.len(),
        stop: s.stop,
        rank_trace: s.trace,
        dim_w: w.dim(),
        dim_w_perp: wp.dim(),
        restricted_gram_det: det.to_string(),
        symplectic,
        splits,
        verdict: if symplectic {
            Verdict::True
        } else {
            Verdict::Inconclusive
        },
        outcome: if symplectic {
            "SYMPLECTIC".into()
        } else {
            "DEGENERATE_SAMPLE".into()
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistFixedReport {
    pub cover: CoverSummary,
    pub sigma: Vec<String>,
    pub sampling: SamplingParams,
    pub curves_sampled: usize,
    pub stop: StopReason,
    pub rank_trace: Vec<usize>,
    pub dim_span: usize,
    pub dim_perp: usize,
    pub dim_fixed: usize,
    pub perp_in_fixed: bool,
    pub equal: bool,
    pub twist_matrices_checked: usize,
    pub verdict: Verdict,
    pub outcome: String,
}

/// Compares the common fixed space of the sampled lifted twists with the
/// orthogonal complement of the sampled span, each computed on its own.
pub fn lemma_twistfixed_check(
    cover: &Cover,
    sigma: &[TopType],
    params: &SamplingParams,
) -> Result<TwistFixedReport> {
    let s = sample_span(cover, sigma, params)?;
    let lat = &cover.lattice;
    let mut fixed = FixedSpaceAccumulator::new(lat.rank());
    for d in &s.data {
        let m = twist_matrix(lat, d);
        let checks = check_twist_matrix(lat, d, &m);
        if !checks.all() {
            return Err(Error::Internal(format!(
                "lifted twist of `{}` fails {checks:?}",
                d.curve.word
            )));
        }
        fixed.add(&m);
    }
    let f = fixed.subspace();
    let pp = perp(&s.span.to_subspace(), lat.gram());
    let contained = pp.is_subspace_of(&f);
    let equal = contained && f == pp;
    if s.span.is_full() && f.dim() != 0 {
        return Err(Error::Internal(
            "full span but the lifted twists fix a nonzero class".into(),
        ));
    }
    let (verdict, outcome) = match (contained, equal) {
        (true, true) => (Verdict::True, "EQUAL"),
        (true, false) => (Verdict::False, "FIXED_SPACE_TOO_LARGE"),
        (false, _) => (Verdict::False, "CONTAINMENT_FAILED"),
    };
    Ok(TwistFixedReport {
        cover: CoverSummary::of(cover, false),
        sigma: sigma_strings(sigma),
        sampling: *params,
        curves_sampled: s.data.len(),
        stop: s.stop,
        rank_trace: s.trace,
        dim_span: s.span.rank(),
        dim_perp: pp.dim(),
        dim_fixed: f.dim(),
        perp_in_fixed: contained,
        equal,
        twist_matrices_checked: s.data.len(),
        verdict,
        outcome: outcome.into(),
    })
}

/// Closed loops at the smallest sheet of each orbit of the subgroup
/// generated by `gens`, generating the stabilizer of that sheet.
pub fn schreier_loops(cover: &Cover, gens: &[Word]) -> Vec<(usize, Word)> {
    let rep = cover.rep();
    let n = rep.degree();
    let perms: Vec<_> = gens.iter().map(|g| rep.word_perm(g)).collect();
    let mut path: Vec<Option<Word>> = vec![None; n];
    let mut out = Vec::new();
    for root in 0..n {
        if path[root].is_some() {
            continue;
        }
        path[root] = Some(Word::empty());
        let mut orbit = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(s) = queue.pop_front() {
            for (g, p) in gens.iter().zip(&perms) {
                let t = p.apply(s);
                if path[t].is_none() {
                    path[t] = Some(path[s].as_ref().expect("visited").concat(g));
                    orbit.push(t);
                    queue.push_back(t);
                }
            }
        }
        for &s in &orbit {
            for (g, p) in gens.iter().zip(&perms) {
                let t = p.apply(s);
                let ps = path[s].as_ref().expect("visited");
                let pt = path[t].as_ref().expect("visited");
                let w = ps.concat(g).concat(&pt.inverse()).reduce();
                if !w.is_empty() {
                    out.push((root, w));
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct PantsReport {
    pub cover: CoverSummary,
    pub pants_curves: Vec<SccWord>,
    pub sigma: Vec<String>,
    pub sampling: SamplingParams,
    pub curves_sampled: usize,
    pub stop: StopReason,
    pub rank_trace: Vec<usize>,
    pub piece_loops: usize,
    pub dim_u: usize,
    pub u_deficit: usize,
    pub dim_w: usize,
    pub dim_sum: usize,
    pub ambient: usize,
    pub verdict: Verdict,
    pub outcome: String,
}

/// Whether the sampled span together with the classes carried by the
/// preimages of the pants pieces and of the cutting curves is everything.
pub fn pants_span_check(
    cover: &Cover,
    pants: &PantsData,
    params: &SamplingParams,
) -> Result<PantsReport> {
    let lat = &cover.lattice;
    let mut u = SpanAccumulator::new(lat.rank());
    let mut loops = 0;
    for piece in &pants.pieces {
        for (root, w) in schreier_loops(cover, &piece.generators) {
            let (steps, end) = cover.complex.walk(&w, root);
            if end != root {
                return Err(Error::Internal(format!("piece loop `{w}` does not close")));
            }
            u.insert(&lat.walk_class(&steps).0);
            loops += 1;
        }
    }
    for c in &pants.curves {
        for cl in lifted_twist_data(cover, c)?.classes() {
            u.insert(&cl.0);
        }
    }
    let sigma = pants.types();
    let s = sample_span(cover, &sigma, params)?;
    let mut sum = s.span.clone();
    sum.merge(&u);
    let full = sum.is_full();
    Ok(PantsReport {
        cover: CoverSummary::of(cover, false),
        pants_curves: pants.curves.clone(),
        sigma: sigma_strings(&sigma),
        sampling: *params,
        curves_sampled: s.data.len(),
        stop: s.stop,
        rank_trace: s.trace,
        piece_loops: loops,
        dim_u: u.rank(),
        u_deficit: lat.rank() - u.rank(),
        dim_w: s.span.rank(),
        dim_sum: sum.rank(),
        ambient: lat.rank(),
        verdict: if full {
            Verdict::True
        } else {
            Verdict::Inconclusive
        },
        outcome: if full {
            "SPANS".into()
        } else {
            format!("INCONCLUSIVE({})", sum.rank())
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitSample {
    pub v: CoverClass,
    /// Index into the sampled curves of the first curve moving `v`.
    pub curve_index: Option<usize>,
    pub w: Option<CoverClass>,
    pub distinct_translates: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub cover: CoverSummary,
    pub sigma: Vec<String>,
    pub sampling: SamplingParams,
    pub curves_sampled: usize,
    pub stop: StopReason,
    pub translates: usize,
    pub infinite: usize,
    pub inconclusive: usize,
    pub samples: Vec<OrbitSample>,
    pub verdict: Verdict,
    pub outcome: String,
}

/// For random nonzero `v` in the sampled span, looks for a sampled lifted
/// twist moving `v` and confirms `v + n w` are distinct for `n = 1..=translates`.
pub fn orbit_check(
    cover: &Cover,
    sigma: &[TopType],
    params: &SamplingParams,
    vectors: usize,
    translates: usize,
) -> Result<OrbitReport> {
    let s = sample_span(cover, sigma, params)?;
    let lat = &cover.lattice;
    let classes: Vec<&CoverClass> = s.classes().filter(|c| !c.is_zero()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed ^ 0x006f_7262_6974);
    let mut samples = Vec::with_capacity(vectors);
    if !classes.is_empty() {
        while samples.len() < vectors {
            let mut v = CoverClass::zero(lat.rank());
            for _ in 0..3 {
                let c = classes[rng.gen_range(0..classes.len())];
                let k = [-3, -2, -1, 1, 2, 3][rng.gen_range(0..6)];
                v = v.add(&c.scaled(k));
            }
            if v.is_zero() {
                continue;
            }
            let hit = s
                .data
                .iter()
                .enumerate()
                .map(|(i, d)| (i, orbit_witness(lat, d, &v)))
                .find(|(_, (_, ov))| *ov == OrbitVerdict::Infinite);
            samples.push(match hit {
                Some((i, (w, _))) => {
                    let mut seen = BTreeSet::new();
                    let mut cur = v.clone();
                    for _ in 0..translates {
                        cur = cur.add(&w);
                        seen.insert(cur.0.clone());
                    }
                    let ok = seen.len() == translates && !seen.contains(&v.0);
                    OrbitSample {
                        v,
                        curve_index: Some(i),
                        w: Some(w),
                        distinct_translates: seen.len(),
                        verdict: if ok { Verdict::True } else { Verdict::False },
                    }
                }
                None => OrbitSample {
                    v,
                    curve_index: None,
                    w: None,
                    distinct_translates: 0,
                    verdict: Verdict::Inconclusive,
                },
            });
        }
    }
    let infinite = samples
        .iter()
        .filter(|x| x.verdict == Verdict::True)
        .count();
    let inconclusive = samples
        .iter()
        .filter(|x| x.verdict == Verdict::Inconclusive)
        .count();
    let failed = samples.len() - infinite - inconclusive;
    let verdict = if failed > 0 {
        Verdict::False
    } else if infinite == vectors && vectors > 0 {
        Verdict::True
    } else {
        Verdict::Inconclusive
    };
    Ok(OrbitReport {
        cover: CoverSummary::of(cover, false),
        sigma: sigma_strings(sigma),
        sampling: *params,
        curves_sampled: s.data.len(),
        stop: s.stop,
        translates,
        infinite,
        inconclusive,
        samples,
        verdict,
        outcome: match verdict {
            Verdict::True => "INFINITE_ORBITS".into(),
            Verdict::False => "REPEATED_TRANSLATE".into(),
            Verdict::Inconclusive => format!("INCONCLUSIVE({inconclusive})"),
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GapCrossCheck {
    pub cover: CoverSummary,
    pub vectors: usize,
    pub lattice_rank: usize,
    /// Index of the sampled integral span in the full lattice.
    pub index: String,
    pub witness_class: CoverClass,
    pub witness_nonzero: bool,
    pub witness_in_span: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub sampling: SamplingParams,
    pub certificate: GapCertificate,
    pub cross_check: Option<GapCrossCheck>,
    pub verdict: Verdict,
    pub outcome: String,
}

/// The integral span of lifted nonseparating curves on the mod-`ell` cover
/// misses the lift of `[a1, a2]`. With `cross_check`, also builds the cover
/// and tests the claim directly against the sampled integral span.
pub fn gap_check(
    genus: usize,
    ell: u64,
    params: &SamplingParams,
    cross_check: bool,
) -> Result<GapReport> {
    let st = crate::surface::SurfaceType::closed(genus);
    let samples: Vec<SccWord> = if params.budget == 0 {
        Vec::new()
    } else {
        CurveSampler::new(&st, &TopType::Nonseparating, params.rng_seed)?
            .take(params.budget)
            .collect()
    };
    let certificate = integral_gap_certificate(genus, ell, &samples)?;
    let cross = if cross_check {
        let cover = Cover::new(crate::covering::PermutationRep::mod_ell(genus, ell)?)?;
        let lat = &cover.lattice;
        let mut span = IntLattice::new(lat.rank());
        let mut vectors = 0;
        for c in &samples {
            for cl in lifted_twist_data(&cover, c)?.classes() {
                span.insert(&cl.0);
                vectors += 1;
            }
        }
        let (m, witness) =
            crate::covering::lift_class(&cover.complex, lat, &certificate.witness_word, 0)?;
        if m != 1 {
            return Err(Error::Internal(format!(
                "witness lift closes after {m} passes"
            )));
        }
        let idx = match index(&span, &IntLattice::full(lat.rank()))? {
            Index::Finite(n) => n.to_string(),
            Index::Infinite => "infinite".into(),
        };
        Some(GapCrossCheck {
            cover: CoverSummary::of(&cover, false),
            vectors,
            lattice_rank: span.rank(),
            index: idx,
            witness_nonzero: !witness.is_zero(),
            witness_in_span: span.member_z(&witness.0),
            witness_class: witness,
        })
    } else {
        None
    };
    let consistent = cross
        .as_ref()
        .is_none_or(|c| c.witness_nonzero && !c.witness_in_span);
    let (verdict, outcome) = match (certificate.certified, consistent) {
        (true, true) => (Verdict::True, "GAP_CERTIFIED"),
        (true, false) => (Verdict::False, "CROSS_CHECK_FAILED"),
        (false, _) => (Verdict::False, "WITNESS_IN_P"),
    };
    Ok(GapReport {
        sampling: *params,
        certificate,
        cross_check: cross,
        verdict,
        outcome: outcome.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::PermutationRep;
    use crate::curves::standard_pants;
    use crate::surface::SurfaceType;

    fn identity2() -> Cover {
        Cover::new(PermutationRep::identity(SurfaceType::closed(2))).unwrap()
    }

    fn params(budget: usize) -> SamplingParams {
        SamplingParams {
            budget,
            window: 50,
            rng_seed: 1,
        }
    }

    #[test]
    fn fullness_on_identity_from_seeds() {
        let r = rational_fullness(&identity2(), &[TopType::Nonseparating], &params(400)).unwrap();
        assert_eq!(r.outcome, "FULL");
        assert_eq!(r.rank, 4);
        assert!(r.curves_sampled <= 4);
    }

    #[test]
    fn zero_budget_is_inconclusive() {
        let r = rational_fullness(&identity2(), &[TopType::Nonseparating], &params(0)).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.outcome, "INCONCLUSIVE(0)");
    }

    #[test]
    fn separating_curves_alone_see_nothing_downstairs() {
        let r = rational_fullness(&identity2(), &[TopType::Separating(1)], &params(30)).unwrap();
        assert_eq!(r.rank, 0);
        assert_eq!(r.stop, StopReason::Budget);
    }

    #[test]
    fn empty_sigma_is_symplectic() {
        let r = symplectic_check(&identity2(), &[], &params(10)).unwrap();
        assert!(r.symplectic && r.splits);
        assert_eq!((r.dim_w, r.dim_w_perp), (0, 4));
    }

    #[test]
    fn twistfixed_identity() {
        let r =
            lemma_twistfixed_check(&identity2(), &[TopType::Nonseparating], &params(400)).unwrap();
        assert_eq!(r.outcome, "EQUAL");
        assert_eq!((r.dim_fixed, r.dim_perp), (0, 0));
        // a partial sample leaves a nonzero complement, still equal
        let r =
            lemma_twistfixed_check(&identity2(), &[TopType::Nonseparating], &params(2)).unwrap();
        assert_eq!(r.dim_perp, 2);
        assert!(r.perp_in_fixed && r.equal);
    }

    #[test]
    fn pants_on_identity() {
        let cover = identity2();
        let pants = standard_pants(&cover.rep().surface()).unwrap();
        let r = pants_span_check(&cover, &pants, &params(400)).unwrap();
        assert_eq!(r.outcome, "SPANS");
        assert!(r.dim_u < 4);
    }

    #[test]
    fn schreier_loops_close() {
        let cover = Cover::new(PermutationRep::mod_ell(2, 2).unwrap()).unwrap();
        let gens: Vec<Word> = vec!["a1".parse().unwrap(), "b1 a1 B1".parse().unwrap()];
        let loops = schreier_loops(&cover, &gens);
        assert!(!loops.is_empty());
        for (root, w) in loops {
            assert_eq!(cover.rep().act(root, &w), root);
        }
    }

    #[test]
    fn gap_small() {
        let r = gap_check(2, 3, &params(20), false).unwrap();
        assert_eq!(r.outcome, "GAP_CERTIFIED");
    }
}
