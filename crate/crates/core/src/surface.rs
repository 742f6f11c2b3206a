//! Fundamental groups of closed oriented surfaces with marked points.
//!
//! The surface of genus `g` with `n` marked points is presented as
//!
//! ```text
//! < a1, b1, ..., ag, bg, z1, ..., zn | [a1,b1] ... [ag,bg] z1 ... zn >
//! ```
//!
//! where `[x,y] = x y X Y` and `zj` is a small loop around the `j`-th marked
//! point. Words are plain letter sequences; free reduction happens only when
//! asked for.
//!
//! The one-vertex cell structure attached to this presentation (one edge per
//! generator, the relator polygon, and one cap disk per `zj`) determines a
//! cyclic order of edge-ends around the vertex, see [`SurfaceType::rotation`].

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceType {
    pub genus: usize,
    pub marked: usize,
}

/// A generator of the surface group. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    A(usize),
    B(usize),
    Z(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: Gen,
    pub inverse: bool,
}

/// One end of a generator edge at the base vertex. The tail end is where a
/// positive traversal leaves the vertex, the head end where it arrives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct End {
    pub gen: Gen,
    pub head: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

/// Class in `H_1(closed surface; Z)` in the basis `[a1],[b1],...,[ag],[bg]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BaseClass(pub Vec<i64>);

impl SurfaceType {
    pub fn new(genus: usize, marked: usize) -> Self {
        SurfaceType { genus, marked }
    }

    pub fn closed(genus: usize) -> Self {
        SurfaceType { genus, marked: 0 }
    }

    /// Generators in the canonical order `a1, b1, ..., ag, bg, z1, ..., zn`.
    pub fn generators(&self) -> Vec<Gen> {
        let mut out = Vec::with_capacity(self.num_generators());
        for i in 1..=self.genus {
            out.push(Gen::A(i));
            out.push(Gen::B(i));
        }
        out.extend((1..=self.marked).map(Gen::Z));
        out
    }

    pub fn num_generators(&self) -> usize {
        2 * self.genus + self.marked
    }

    pub fn contains(&self, gen: Gen) -> bool {
        match gen {
            Gen::A(i) | Gen::B(i) => (1..=self.genus).contains(&i),
            Gen::Z(j) => (1..=self.marked).contains(&j),
        }
    }

    /// Position of `gen` in [`SurfaceType::generators`].
    pub fn gen_index(&self, gen: Gen) -> Option<usize> {
        if !self.contains(gen) {
            return None;
        }
        Some(match gen {
            Gen::A(i) => 2 * (i - 1),
            Gen::B(i) => 2 * (i - 1) + 1,
            Gen::Z(j) => 2 * self.genus + j - 1,
        })
    }

    /// Euler characteristic of the surface with the marked points removed.
    pub fn punctured_euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.marked as i64
    }

    /// `[a1,b1] ... [ag,bg] z1 ... zn`, which is already freely reduced.
    pub fn relator(&self) -> Word {
        let mut letters = Vec::with_capacity(4 * self.genus + self.marked);
        for i in 1..=self.genus {
            letters.push(Letter::pos(Gen::A(i)));
            letters.push(Letter::pos(Gen::B(i)));
            letters.push(Letter::neg(Gen::A(i)));
            letters.push(Letter::neg(Gen::B(i)));
        }
        letters.extend((1..=self.marked).map(|j| Letter::pos(Gen::Z(j))));
        Word(letters)
    }

    /// Counter-clockwise cyclic order of the edge-ends at the base vertex,
    /// starting from the tail end of the first generator.
    ///
    /// Each corner of the relator polygon between consecutive letters `L`,
    /// `L'` makes the end where `L` arrives follow the end where `L'` leaves.
    /// Each cap disk, whose boundary runs along `zj` backwards, makes the
    /// tail of `zj` follow its head.
    pub fn rotation(&self) -> Vec<End> {
        let gens = self.generators();
        if gens.is_empty() {
            return Vec::new();
        }
        let slots = 2 * gens.len();
        let slot =
            |e: End| 2 * self.gen_index(e.gen).expect("generator in range") + e.head as usize;
        let mut succ = vec![usize::MAX; slots];
        let rel = self.relator();
        let letters = rel.letters();
        for k in 0..letters.len() {
            let here = letters[k];
            let next = letters[(k + 1) % letters.len()];
            succ[slot(next.out_end())] = slot(here.in_end());
        }
        for j in 1..=self.marked {
            let z = Gen::Z(j);
            succ[slot(End { gen: z, head: true })] = slot(End {
                gen: z,
                head: false,
            });
        }
        let end_of = |s: usize| End {
            gen: gens[s / 2],
            head: s % 2 == 1,
        };
        let mut order = Vec::with_capacity(slots);
        let start = 0;
        let mut cur = start;
        loop {
            order.push(end_of(cur));
            cur = succ[cur];
            if cur == start {
                break;
            }
        }
        debug_assert_eq!(order.len(), slots, "vertex link must be a single cycle");
        order
    }
}

impl fmt::Display for SurfaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S({},{})", self.genus, self.marked)
    }
}

impl Gen {
    pub fn is_marked(self) -> bool {
        matches!(self, Gen::Z(_))
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::A(i) => write!(f, "a{i}"),
            Gen::B(i) => write!(f, "b{i}"),
            Gen::Z(j) => write!(f, "z{j}"),
        }
    }
}

impl Letter {
    pub fn pos(gen: Gen) -> Self {
        Letter {
            gen,
            inverse: false,
        }
    }

    pub fn neg(gen: Gen) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }

    /// The end through which a traversal of this letter leaves the vertex.
    pub fn out_end(self) -> End {
        End {
            gen: self.gen,
            head: self.inverse,
        }
    }

    /// The end through which a traversal of this letter arrives.
    pub fn in_end(self) -> End {
        End {
            gen: self.gen,
            head: !self.inverse,
        }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (c, i) = match self.gen {
            Gen::A(i) => ('a', i),
            Gen::B(i) => ('b', i),
            Gen::Z(i) => ('z', i),
        };
        let c = if self.inverse {
            c.to_ascii_uppercase()
        } else {
            c
        };
        write!(f, "{c}{i}")
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(tok: &str) -> Result<Self> {
        let bad = || Error::BadToken(tok.to_string());
        let mut chars = tok.chars();
        let head = chars.next().ok_or_else(bad)?;
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let idx: usize = digits.parse().map_err(|_| bad())?;
        if idx == 0 {
            return Err(bad());
        }
        let gen = match head.to_ascii_lowercase() {
            'a' => Gen::A(idx),
            'b' => Gen::B(idx),
            'z' => Gen::Z(idx),
            _ => return Err(bad()),
        };
        Ok(Letter {
            gen,
            inverse: head.is_ascii_uppercase(),
        })
    }
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn gen(gen: Gen) -> Self {
        Word(vec![Letter::pos(gen)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Concatenation without reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn pow(&self, k: usize) -> Word {
        let mut letters = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            letters.extend_from_slice(&self.0);
        }
        Word(letters)
    }

    /// `u v U V`, unreduced.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.concat(v).concat(&u.inverse()).concat(&v.inverse())
    }

    pub fn reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.0 {
            match out.last() {
                Some(&last) if last.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    /// Free reduction followed by stripping cancelling first/last letters.
    pub fn cyclic_reduce(&self) -> Word {
        let r = self.reduce().0;
        let mut lo = 0;
        let mut hi = r.len();
        while hi - lo >= 2 && r[lo].cancels(r[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        Word(r[lo..hi].to_vec())
    }

    /// Conjugacy in the free group on the generators.
    pub fn is_conjugate_to(&self, other: &Word) -> bool {
        let u = self.cyclic_reduce().0;
        let v = other.cyclic_reduce().0;
        if u.len() != v.len() {
            return false;
        }
        if u.is_empty() {
            return true;
        }
        (0..u.len()).any(|s| u[s..].iter().chain(&u[..s]).eq(v.iter()))
    }

    /// Cyclic rotation starting at position `k`.
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::empty();
        }
        let k = k % self.len();
        Word(self.0[k..].iter().chain(&self.0[..k]).copied().collect())
    }

    pub fn has_marked_letters(&self) -> bool {
        self.0.iter().any(|l| l.gen.is_marked())
    }

    pub fn validate(&self, st: &SurfaceType) -> Result<()> {
        for l in &self.0 {
            if !st.contains(l.gen) {
                return Err(Error::LetterOutOfRange {
                    letter: l.to_string(),
                    genus: st.genus,
                    marked: st.marked,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl BaseClass {
    pub fn zero(genus: usize) -> Self {
        BaseClass(vec![0; 2 * genus])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &BaseClass) -> BaseClass {
        BaseClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// Abelianization into `H_1` of the closed surface; `z` letters vanish.
pub fn base_class(st: &SurfaceType, w: &Word) -> BaseClass {
    let mut v = vec![0i64; 2 * st.genus];
    for l in w.letters() {
        match l.gen {
            Gen::A(i) if i <= st.genus => v[2 * (i - 1)] += l.sign(),
            Gen::B(i) if i <= st.genus => v[2 * (i - 1) + 1] += l.sign(),
            _ => {}
        }
    }
    BaseClass(v)
}

/// Intersection form with `omega([a_i],[b_i]) = +1`.
pub fn base_omega(u: &BaseClass, v: &BaseClass) -> i64 {
    u.0.chunks(2)
        .zip(v.0.chunks(2))
        .map(|(x, y)| x[0] * y[1] - x[1] * y[0])
        .sum()
}

/// gcd of the entries is 1; the zero class is not primitive.
pub fn is_primitive(c: &BaseClass) -> bool {
    c.0.iter().fold(0i64, |g, &x| g.gcd(&x)) == 1
}
