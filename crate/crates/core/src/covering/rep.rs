//! Permutation representations of surface groups.
//!
//! Sheets are numbered `0..N` in this API; configuration files and the CLI
//! use `1..=N`. Sheets are acted on from the right: the sheet reached from
//! `s` along the word `x y` is `(s . x) . y`.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::surface::{Gen, Letter, SurfaceType, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u32).collect())
    }

    /// `images[s]` is the image of sheet `s`.
    pub fn from_images(images: Vec<usize>) -> std::result::Result<Self, String> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n {
                return Err(format!("image {} out of range for degree {n}", x + 1));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(format!("image {} repeated", x + 1));
            }
        }
        Ok(Permutation(images.into_iter().map(|x| x as u32).collect()))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, s: usize) -> usize {
        self.0[s] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&x| x as usize).collect()
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.0.len()];
        for (s, &t) in self.0.iter().enumerate() {
            inv[t as usize] = s as u32;
        }
        Permutation(inv)
    }

    /// First `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&t| other.0[t as usize]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(s, &t)| s as u32 == t)
    }

    /// Cycles in order of their smallest element, each starting there.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for s in 0..self.0.len() {
            if seen[s] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut t = s;
            while !seen[t] {
                seen[t] = true;
                cyc.push(t);
                t = self.apply(t);
            }
            out.push(cyc);
        }
        out
    }
}

/// Translation data of a regular cover whose deck group is the finite
/// abelian group `Z/d1 x ... x Z/dk`. Sheet `s` is the group element with
/// mixed-radix digits of `s`, first coordinate varying fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianData {
    pub orders: Vec<u64>,
    /// Group element assigned to each non-marked generator, in generator order.
    pub targets: Vec<Vec<u64>>,
}

impl AbelianData {
    pub fn order(&self) -> usize {
        self.orders.iter().product::<u64>() as usize
    }

    pub fn decode(&self, mut s: usize) -> Vec<u64> {
        self.orders
            .iter()
            .map(|&d| {
                let x = (s as u64) % d;
                s /= d as usize;
                x
            })
            .collect()
    }

    pub fn encode(&self, v: &[u64]) -> usize {
        let mut s = 0u64;
        for (&x, &d) in v.iter().zip(&self.orders).rev() {
            s = s * d + x % d;
        }
        s as usize
    }

    pub fn translate(&self, s: usize, t: &[u64]) -> usize {
        let v: Vec<u64> = self.decode(s).iter().zip(t).map(|(a, b)| a + b).collect();
        self.encode(&v)
    }
}

#[derive(Clone, Debug)]
pub struct PermutationRep {
    st: SurfaceType,
    perms: Vec<Permutation>,
    inverses: Vec<Permutation>,
    abelian: Option<AbelianData>,
    label: String,
}

impl PermutationRep {
    /// `perms` lists one permutation per generator in canonical order.
    pub fn new(st: SurfaceType, perms: Vec<Permutation>) -> Result<Self> {
        Self::build(st, perms, None, "explicit".to_string())
    }

    fn build(
        st: SurfaceType,
        perms: Vec<Permutation>,
        abelian: Option<AbelianData>,
        label: String,
    ) -> Result<Self> {
        let gens = st.generators();
        if perms.len() != gens.len() {
            return Err(Error::DimensionMismatch {
                expected: gens.len(),
                got: perms.len(),
            });
        }
        let degree = perms.first().map_or(1, Permutation::degree);
        if degree == 0 {
            return Err(Error::InvalidParameter("degree must be at least 1".into()));
        }
        for (g, p) in gens.iter().zip(&perms) {
            if p.degree() != degree {
                return Err(Error::InvalidPermutation {
                    gen: g.to_string(),
                    reason: format!("has degree {} but expected {degree}", p.degree()),
                });
            }
        }
        let inverses = perms.iter().map(Permutation::inverse).collect();
        let rep = PermutationRep {
            st,
            perms,
            inverses,
            abelian,
            label,
        };
        if !rep.word_perm(&st.relator()).is_identity() {
            return Err(Error::RelatorNotTrivial);
        }
        if !rep.is_transitive() {
            return Err(Error::Disconnected);
        }
        Ok(rep)
    }

    pub fn identity(st: SurfaceType) -> Self {
        let perms = vec![Permutation::identity(1); st.num_generators()];
        Self::build(
            st,
            perms,
            None,
            format!("identity(g={},n={})", st.genus, st.marked),
        )
        .expect("identity representation is valid")
    }

    /// Regular cover attached to `pi_1 -> A`, `A = Z/orders[0] x ...`, with
    /// `targets[k]` the image of the `k`-th generator among `a1, b1, ...`.
    pub fn abelian(genus: usize, orders: &[u64], targets: &[Vec<u64>]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::InvalidParameter(
                "group orders must be positive".into(),
            ));
        }
        if targets.len() != 2 * genus {
            return Err(Error::DimensionMismatch {
                expected: 2 * genus,
                got: targets.len(),
            });
        }
        for t in targets {
            if t.len() != orders.len() {
                return Err(Error::DimensionMismatch {
                    expected: orders.len(),
                    got: t.len(),
                });
            }
        }
        let total: u128 = orders.iter().map(|&d| d as u128).product();
        if total > 1 << 20 {
            return Err(Error::InvalidParameter(format!(
                "group of order {total} is too large"
            )));
        }
        let data = AbelianData {
            orders: orders.to_vec(),
            targets: targets
                .iter()
                .map(|t| t.iter().zip(orders).map(|(x, d)| x % d).collect())
                .collect(),
        };
        let n = data.order();
        let perms = data
            .targets
            .iter()
            .map(|t| Permutation((0..n).map(|s| data.translate(s, t) as u32).collect()))
            .collect();
        let label = format!(
            "abelian(g={genus},orders={orders:?},targets={:?})",
            data.targets
        );
        Self::build(SurfaceType::closed(genus), perms, Some(data), label)
    }

    /// The cover attached to `pi_1 -> H_1(Sigma; Z/ell)`.
    pub fn mod_ell(genus: usize, ell: u64) -> Result<Self> {
        if ell < 2 {
            return Err(Error::InvalidParameter(format!(
                "ell must be at least 2, got {ell}"
            )));
        }
        if genus == 0 {
            return Err(Error::InvalidParameter("genus must be at least 1".into()));
        }
        let orders = vec![ell; 2 * genus];
        let targets: Vec<Vec<u64>> = (0..2 * genus)
            .map(|k| (0..2 * genus).map(|j| (j == k) as u64).collect())
            .collect();
        let mut rep = Self::abelian(genus, &orders, &targets)?;
        rep.label = format!("mod_ell(g={genus},ell={ell})");
        Ok(rep)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn surface(&self) -> SurfaceType {
        self.st
    }

    pub fn degree(&self) -> usize {
        self.perms[0].degree()
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn inverse_perms(&self) -> &[Permutation] {
        &self.inverses
    }

    pub fn perm(&self, gen: Gen) -> &Permutation {
        &self.perms[self.st.gen_index(gen).expect("generator in range")]
    }

    pub fn abelian_data(&self) -> Option<&AbelianData> {
        self.abelian.as_ref()
    }

    pub fn act_letter(&self, s: usize, l: Letter) -> usize {
        let k = self.st.gen_index(l.gen).expect("letter in range");
        if l.inverse {
            self.inverses[k].apply(s)
        } else {
            self.perms[k].apply(s)
        }
    }

    pub fn act(&self, s: usize, w: &Word) -> usize {
        w.letters().iter().fold(s, |t, &l| self.act_letter(t, l))
    }

    pub fn word_perm(&self, w: &Word) -> Permutation {
        let n = self.degree();
        Permutation((0..n).map(|s| self.act(s, w) as u32).collect())
    }

    fn is_transitive(&self) -> bool {
        let n = self.degree();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut count = 1;
        while let Some(s) = queue.pop_front() {
            for p in self.perms.iter().chain(&self.inverses) {
                let t = p.apply(s);
                if !seen[t] {
                    seen[t] = true;
                    count += 1;
                    queue.push_back(t);
                }
            }
        }
        count == n
    }

    /// A random transitive cover of degree `degree` of the genus `genus`
    /// surface with one marked point: `a_i`, `b_i` are uniform and the
    /// marked loop absorbs the product of commutators.
    pub fn random_branched(genus: usize, degree: usize, rng: &mut impl Rng) -> Result<Self> {
        if degree == 0 || genus == 0 {
            return Err(Error::InvalidParameter(
                "genus and degree must be positive".into(),
            ));
        }
        let st = SurfaceType::new(genus, 1);
        for _ in 0..10_000 {
            let mut perms: Vec<Permutation> = (0..2 * genus)
                .map(|_| {
                    let mut v: Vec<u32> = (0..degree as u32).collect();
                    v.shuffle(rng);
                    Permutation(v)
                })
                .collect();
            let partial = PermutationRep {
                st: SurfaceType::closed(genus),
                inverses: perms.iter().map(Permutation::inverse).collect(),
                perms: perms.clone(),
                abelian: None,
                label: String::new(),
            };
            perms.push(
                partial
                    .word_perm(&SurfaceType::closed(genus).relator())
                    .inverse(),
            );
            match Self::build(
                st,
                perms,
                None,
                format!("random(g={genus},degree={degree})"),
            ) {
                Ok(rep) => return Ok(rep),
                Err(Error::Disconnected) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::InvalidParameter("no transitive cover found".into()))
    }

    /// Drops marked points around which every sheet is unramified.
    pub fn forget_unramified(&self) -> PermutationRep {
        let keep: Vec<usize> = (1..=self.st.marked)
            .filter(|&j| !self.perm(Gen::Z(j)).is_identity())
            .collect();
        let st = SurfaceType::new(self.st.genus, keep.len());
        let mut perms: Vec<Permutation> = self.perms[..2 * self.st.genus].to_vec();
        perms.extend(keep.iter().map(|&j| self.perm(Gen::Z(j)).clone()));
        let mut rep = Self::build(st, perms, self.abelian.clone(), self.label.clone())
            .expect("dropping trivial loops keeps validity");
        if st.marked != self.st.marked {
            rep.label = format!("{} (unramified points forgotten)", self.label);
        }
        rep
    }
}
