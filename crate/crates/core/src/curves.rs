//! Simple closed curves as words, produced by applying Dehn twist
//! automorphisms to seed curves.
//!
//! A twist about a curve `c` that runs through the base vertex is realized
//! by pushing `c` slightly to its left. At each passage of `c` through the
//! vertex, the ends swept by the push-off pick up a copy of `c` read from
//! that passage: a generator leaving through a swept end is prefixed by the
//! inverse, one arriving through a swept end is suffixed by it. Simplicity
//! of sampled curves is never tested; it holds because automorphisms induced
//! by homeomorphisms send simple curves to simple curves.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::surface::{base_class, base_omega, is_primitive, Gen, Letter, SurfaceType, Word};

pub const DEFAULT_WALK_LENGTH: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TopType {
    Nonseparating,
    /// Bounds a subsurface of genus `h` containing no marked points.
    Separating(usize),
    PantsBoundary(String),
}

impl fmt::Display for TopType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopType::Nonseparating => f.write_str("nonseparating"),
            TopType::Separating(h) => write!(f, "separating{h}"),
            TopType::PantsBoundary(label) => write!(f, "pants:{label}"),
        }
    }
}

impl FromStr for TopType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "nonseparating" {
            return Ok(TopType::Nonseparating);
        }
        if let Some(label) = s.strip_prefix("pants:") {
            return Ok(TopType::PantsBoundary(label.to_string()));
        }
        if let Some(rest) = s.strip_prefix("separating") {
            let rest = rest.trim_start_matches('(').trim_end_matches(')');
            if let Ok(h) = rest.parse::<usize>() {
                if h >= 1 {
                    return Ok(TopType::Separating(h));
                }
            }
        }
        Err(Error::UnsupportedType(s.to_string()))
    }
}

impl Serialize for TopType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl TopType {
    /// Whether seeds of this type exist on `st`.
    pub fn is_supported(&self, st: &SurfaceType) -> bool {
        match self {
            TopType::Nonseparating => st.genus >= 1,
            TopType::Separating(h) => *h >= 1 && 2 * h <= st.genus,
            TopType::PantsBoundary(_) => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SccWord {
    pub word: Word,
    #[serde(rename = "type")]
    pub ttype: TopType,
    /// Names of the automorphisms applied to the seed, first applied first.
    pub provenance: Vec<String>,
}

impl SccWord {
    pub fn seed(word: Word, ttype: TopType) -> Self {
        SccWord {
            word,
            ttype,
            provenance: Vec::new(),
        }
    }
}

/// The automorphism of the surface group induced by a Dehn twist.
#[derive(Clone, Debug)]
pub struct TwistAutomorphism {
    name: String,
    curve: Word,
    positive: bool,
    st: SurfaceType,
    images: Vec<Word>,
}

impl TwistAutomorphism {
    /// Twist about the closed curve read off the cyclic word `curve`, which
    /// must be embedded in the one-vertex model: at every passage through
    /// the vertex the swept sectors must be disjoint.
    pub fn about(st: SurfaceType, curve: &Word, positive: bool) -> Result<Self> {
        curve.validate(&st)?;
        let c = curve.letters();
        let m = c.len();
        if m == 0 {
            return Err(Error::EmptyWord);
        }
        let rotation = st.rotation();
        let k = rotation.len();
        let pos = |e| {
            rotation
                .iter()
                .position(|&x| x == e)
                .expect("end in rotation")
        };
        // sector[end slot] = passage index whose push-off sweeps the end
        let mut sector: Vec<Option<usize>> = vec![None; k];
        for p in 0..m {
            let here = c[p];
            let next = c[(p + 1) % m];
            if here.cancels(next) {
                return Err(Error::InvalidParameter(format!(
                    "twist curve `{curve}` backtracks"
                )));
            }
            let i = pos(here.in_end());
            let o = pos(next.out_end());
            let mut t = (o + 1) % k;
            while t != i {
                if sector[t].replace(p).is_some() {
                    return Err(Error::InvalidParameter(format!(
                        "twist curve `{curve}` is not embedded at the base vertex"
                    )));
                }
                t = (t + 1) % k;
            }
        }
        let read_from = |p: usize| curve.rotate((p + 1) % m);
        let images = st
            .generators()
            .into_iter()
            .map(|g| {
                let tail = rotation
                    .iter()
                    .position(|e| e.gen == g && !e.head)
                    .expect("tail end");
                let head = rotation
                    .iter()
                    .position(|e| e.gen == g && e.head)
                    .expect("head end");
                let mut img = Word::gen(g);
                if let Some(p) = sector[tail] {
                    let r = read_from(p);
                    let pre = if positive { r.inverse() } else { r };
                    img = pre.concat(&img);
                }
                if let Some(p) = sector[head] {
                    let r = read_from(p);
                    let post = if positive { r } else { r.inverse() };
                    img = img.concat(&post);
                }
                img.reduce()
            })
            .collect();
        let name = if positive {
            format!("T({curve})")
        } else {
            format!("T^-1({curve})")
        };
        Ok(TwistAutomorphism {
            name,
            curve: curve.clone(),
            positive,
            st,
            images,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn curve(&self) -> &Word {
        &self.curve
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn image(&self, g: Gen) -> &Word {
        &self.images[self.st.gen_index(g).expect("generator in range")]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn inverse(&self) -> TwistAutomorphism {
        Self::about(self.st, &self.curve, !self.positive).expect("inverse of a valid twist")
    }

    /// Image of a word, freely reduced.
    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Vec::new();
        for &l in w.letters() {
            let img = self.image(l.gen);
            if l.inverse {
                out.extend(img.inverse().letters().iter().copied());
            } else {
                out.extend(img.letters().iter().copied());
            }
        }
        Word::new(out).reduce()
    }

    /// The relator goes to a conjugate of itself.
    pub fn preserves_relator(&self) -> bool {
        let r = self.st.relator();
        self.apply(&r).is_conjugate_to(&r)
    }

    /// On the closed surface's homology the map is `x -> x + s*omega(x,t) t`
    /// with `s = +1` for a positive twist; every `zj` maps to a conjugate.
    pub fn acts_as_transvection(&self) -> bool {
        let t = base_class(&self.st, &self.curve);
        let s = if self.positive { 1 } else { -1 };
        self.st.generators().into_iter().all(|g| {
            let img = self.image(g);
            if g.is_marked() {
                return img.is_conjugate_to(&Word::gen(g));
            }
            let x = base_class(&self.st, &Word::gen(g));
            let w = s * base_omega(&x, &t);
            let expected: Vec<i64> = x.0.iter().zip(&t.0).map(|(a, b)| a + w * b).collect();
            base_class(&self.st, img).0 == expected
        })
    }
}

/// Curves `a_i`, `b_i` and the chain curves `a_i a_{i+1}` joining adjacent handles.
pub fn twist_curves(st: &SurfaceType) -> Vec<Word> {
    let mut out: Vec<Word> = (1..=st.genus).map(|i| Word::gen(Gen::A(i))).collect();
    out.extend((1..=st.genus).map(|i| Word::gen(Gen::B(i))));
    out.extend(
        (1..st.genus).map(|i| Word::new(vec![Letter::pos(Gen::A(i)), Letter::pos(Gen::A(i + 1))])),
    );
    out
}

/// Positive and negative twists about [`twist_curves`], each checked
/// against both invariants.
pub fn twist_generators(st: &SurfaceType) -> Result<Vec<TwistAutomorphism>> {
    if st.genus == 0 {
        return Err(Error::InvalidParameter(
            "twist generators need genus at least 1".into(),
        ));
    }
    let mut out = Vec::new();
    for c in twist_curves(st) {
        for positive in [true, false] {
            let t = TwistAutomorphism::about(*st, &c, positive)?;
            if !t.preserves_relator() {
                return Err(Error::Internal(format!(
                    "{} does not preserve the relator",
                    t.name()
                )));
            }
            if !t.acts_as_transvection() {
                return Err(Error::Internal(format!(
                    "{} is not a transvection on homology",
                    t.name()
                )));
            }
            out.push(t);
        }
    }
    Ok(out)
}

/// `a_i`, `b_i` (nonseparating) and, for every `1 <= h <= g/2`, the curve
/// `[a1,b1]...[ah,bh]` cutting off the first `h` handles.
pub fn seed_curves(st: &SurfaceType) -> Vec<SccWord> {
    let mut out = Vec::new();
    for i in 1..=st.genus {
        out.push(SccWord::seed(Word::gen(Gen::A(i)), TopType::Nonseparating));
        out.push(SccWord::seed(Word::gen(Gen::B(i)), TopType::Nonseparating));
    }
    for h in 1..=st.genus / 2 {
        out.push(SccWord::seed(separating_word(h), TopType::Separating(h)));
    }
    out
}

fn separating_word(h: usize) -> Word {
    let mut w = Word::empty();
    for i in 1..=h {
        w = w.concat(&Word::commutator(
            &Word::gen(Gen::A(i)),
            &Word::gen(Gen::B(i)),
        ));
    }
    w
}

/// Deterministic stream of curves of one type: the seeds of that type
/// first, then random walks of twists applied to a random seed.
#[derive(Clone, Debug)]
pub struct CurveSampler {
    seeds: Vec<SccWord>,
    twists: Vec<TwistAutomorphism>,
    rng: ChaCha8Rng,
    walk_length: usize,
    emitted: usize,
}

impl CurveSampler {
    pub fn new(st: &SurfaceType, ttype: &TopType, rng_seed: u64) -> Result<Self> {
        if !ttype.is_supported(st) {
            return Err(Error::UnsupportedType(format!(
                "{ttype} on a surface of genus {}",
                st.genus
            )));
        }
        let seeds: Vec<SccWord> = seed_curves(st)
            .into_iter()
            .filter(|s| &s.ttype == ttype)
            .collect();
        Ok(CurveSampler {
            seeds,
            twists: twist_generators(st)?,
            rng: ChaCha8Rng::seed_from_u64(rng_seed),
            walk_length: DEFAULT_WALK_LENGTH,
            emitted: 0,
        })
    }

    pub fn with_walk_length(mut self, n: usize) -> Self {
        self.walk_length = n;
        self
    }
}

impl Iterator for CurveSampler {
    type Item = SccWord;

    fn next(&mut self) -> Option<SccWord> {
        let out = if self.emitted < self.seeds.len() {
            self.seeds[self.emitted].clone()
        } else {
            let mut cur = self.seeds[self.rng.gen_range(0..self.seeds.len())].clone();
            for _ in 0..self.walk_length {
                let t = &self.twists[self.rng.gen_range(0..self.twists.len())];
                cur.word = t.apply(&cur.word);
                cur.provenance.push(t.name().to_string());
            }
            cur
        };
        self.emitted += 1;
        Some(out)
    }
}

pub fn sample_curves(
    st: &SurfaceType,
    ttype: &TopType,
    count: usize,
    rng_seed: u64,
) -> Result<Vec<SccWord>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    Ok(CurveSampler::new(st, ttype, rng_seed)?
        .take(count)
        .collect())
}

/// Homology consistency of a sampled curve with its tag.
pub fn class_matches_type(st: &SurfaceType, c: &SccWord) -> bool {
    let cls = base_class(st, &c.word);
    match c.ttype {
        TopType::Nonseparating => is_primitive(&cls),
        TopType::Separating(_) => cls.is_zero(),
        TopType::PantsBoundary(_) => true,
    }
}

/// A pants decomposition: the cutting curves and, for each complementary
/// piece, words generating its fundamental group.
#[derive(Clone, Debug, Serialize)]
pub struct PantsData {
    pub curves: Vec<SccWord>,
    pub pieces: Vec<PantsPiece>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PantsPiece {
    pub generators: Vec<Word>,
    /// Boundary loops of the piece, each equal in the surface group to a
    /// conjugate of a cutting curve or its inverse.
    pub boundary: Vec<Word>,
}

impl PantsData {
    pub fn types(&self) -> Vec<TopType> {
        let mut t: Vec<TopType> = self.curves.iter().map(|c| c.ttype.clone()).collect();
        t.sort();
        t.dedup();
        t
    }
}

/// The decomposition of the genus 2 surface by `a1`, `a2` and `[a1,b1]`.
pub fn standard_pants(st: &SurfaceType) -> Result<PantsData> {
    if st.genus != 2 || st.marked != 0 {
        return Err(Error::InvalidParameter(format!(
            "the standard pants decomposition is defined for the closed genus 2 surface, not {st}"
        )));
    }
    let w = |s: &str| -> Word { s.parse().expect("literal word") };
    Ok(PantsData {
        curves: vec![
            SccWord::seed(w("a1"), TopType::Nonseparating),
            SccWord::seed(w("a2"), TopType::Nonseparating),
            SccWord::seed(w("a1 b1 A1 B1"), TopType::Separating(1)),
        ],
        pieces: vec![
            PantsPiece {
                generators: vec![w("a1"), w("b1 a1 B1")],
                boundary: vec![w("a1"), w("b1 a1 B1"), w("a1 b1 A1 B1")],
            },
            PantsPiece {
                generators: vec![w("a2"), w("b2 a2 B2")],
                boundary: vec![w("a2"), w("b2 a2 B2"), w("a2 b2 A2 B2")],
            },
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn seeds() {
        let g1: Vec<String> = seed_curves(&SurfaceType::closed(1))
            .iter()
            .map(|c| c.word.to_string())
            .collect();
        assert_eq!(g1, ["a1", "b1"]);
        let g2 = seed_curves(&SurfaceType::closed(2));
        assert!(g2
            .iter()
            .any(|c| c.word == w("a1 b1 A1 B1") && c.ttype == TopType::Separating(1)));
        for c in &g2 {
            assert!(class_matches_type(&SurfaceType::closed(2), c));
        }
    }

    #[test]
    fn torus_twist_about_a1() {
        let st = SurfaceType::closed(1);
        let t = TwistAutomorphism::about(st, &w("a1"), true).unwrap();
        assert_eq!(t.image(Gen::A(1)), &w("a1"));
        assert_eq!(t.image(Gen::B(1)), &w("A1 b1"));
        let inv = t.inverse();
        assert_eq!(inv.image(Gen::B(1)), &w("a1 b1"));
        assert!(t.acts_as_transvection() && inv.acts_as_transvection());
    }

    #[test]
    fn genus_two_images() {
        let st = SurfaceType::closed(2);
        let t = TwistAutomorphism::about(st, &w("a1"), true).unwrap();
        assert_eq!(t.image(Gen::B(1)), &w("A1 b1"));
        assert_eq!(t.image(Gen::A(2)), &w("A1 a2 a1"));
        assert_eq!(t.image(Gen::B(2)), &w("A1 b2 a1"));
        let t = TwistAutomorphism::about(st, &w("b1"), true).unwrap();
        assert_eq!(t.image(Gen::A(1)), &w("a1 b1"));
        let t = TwistAutomorphism::about(st, &w("a1 a2"), true).unwrap();
        assert_eq!(t.image(Gen::B(1)), &w("A1 A2 b1"));
        assert_eq!(t.image(Gen::B(2)), &w("A2 A1 b2"));
    }

    #[test]
    fn generators_pass_invariants() {
        for (g, n) in [(1, 0), (2, 0), (3, 0), (1, 1), (2, 1), (3, 2), (4, 0)] {
            let st = SurfaceType::new(g, n);
            let gens = twist_generators(&st).unwrap();
            assert_eq!(gens.len(), 2 * (3 * g - 1));
            for t in &gens {
                let inv = t.inverse();
                for x in st.generators() {
                    assert_eq!(
                        inv.apply(&t.apply(&Word::gen(x))),
                        Word::gen(x),
                        "{}",
                        t.name()
                    );
                }
            }
        }
    }

    #[test]
    fn non_embedded_curves_are_rejected() {
        let st = SurfaceType::closed(1);
        assert!(TwistAutomorphism::about(st, &w("a1 A1"), true).is_err());
        assert!(TwistAutomorphism::about(st, &w("a1 a1"), true).is_err());
    }

    #[test]
    fn sampling() {
        let st = SurfaceType::closed(2);
        assert!(sample_curves(&st, &TopType::Nonseparating, 0, 1)
            .unwrap()
            .is_empty());
        let ns = sample_curves(&st, &TopType::Nonseparating, 60, 7).unwrap();
        assert_eq!(ns.len(), 60);
        assert!(ns.iter().all(|c| class_matches_type(&st, c)));
        let again = sample_curves(&st, &TopType::Nonseparating, 60, 7).unwrap();
        assert_eq!(ns, again);
        let sep = sample_curves(&st, &TopType::Separating(1), 40, 3).unwrap();
        assert!(sep.iter().all(|c| base_class(&st, &c.word).is_zero()));
        assert!(sample_curves(&st, &TopType::Separating(2), 5, 3).is_err());
        assert!(sample_curves(&st, &TopType::PantsBoundary("x".into()), 5, 3).is_err());
    }

    #[test]
    fn top_type_strings() {
        for s in ["nonseparating", "separating1", "pants:d1"] {
            assert_eq!(s.parse::<TopType>().unwrap().to_string(), s);
        }
        assert_eq!(
            "separating(2)".parse::<TopType>().unwrap(),
            TopType::Separating(2)
        );
        assert!("separating0".parse::<TopType>().is_err());
        assert!("weird".parse::<TopType>().is_err());
    }

    #[test]
    fn standard_pants_shape() {
        let st = SurfaceType::closed(2);
        let p = standard_pants(&st).unwrap();
        assert_eq!(p.curves.len(), 3 * st.genus - 3);
        for g in &p.pieces[0].generators {
            assert_eq!(base_class(&st, g).0, vec![1, 0, 0, 0]);
        }
        for g in &p.pieces[1].generators {
            assert_eq!(base_class(&st, g).0, vec![0, 0, 1, 0]);
        }
        // the third boundary of each piece is [a1,b1] up to inversion, using the relator
        let sep = &p.curves[2].word;
        assert!(p.pieces[0].boundary[2].is_conjugate_to(sep));
        let via_relator = st
            .relator()
            .concat(&p.pieces[1].boundary[2].inverse())
            .reduce();
        assert_eq!(via_relator, sep.clone());
        assert!(standard_pants(&SurfaceType::closed(3)).is_err());
    }
}
