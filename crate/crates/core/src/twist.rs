//! Lifts of Dehn twists to a finite cover and their action on homology.
//!
//! The preimage of a curve `w` splits into one component per cycle of the
//! monodromy of `w`; a component over a cycle of length `d_j` covers `w`
//! with degree `d_j`. With `d = lcm(d_j)` and `e_j = d / d_j`, the `d`-th
//! power of the twist lifts to the product of the `e_j`-th powers of the
//! twists about the components, acting as
//! `h -> h + sum_j e_j omega(h, c_j) c_j`.

use num_integer::Integer;
use serde::Serialize;

use crate::covering::{lift_class, Cover, CoverClass, H1Lattice, Step};
use crate::curves::SccWord;
use crate::error::{Error, Result};
use crate::surface::{Letter, Word};
use crate::symplin::{IntMatrix, RatSubspace, SpanAccumulator};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftComponent {
    /// Smallest sheet on the component's cycle (0-based).
    pub sheet: usize,
    pub degree: usize,
    pub class: CoverClass,
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftedTwistData {
    pub curve: SccWord,
    pub components: Vec<LiftComponent>,
    pub d: u64,
    pub e: Vec<u64>,
}

impl LiftedTwistData {
    pub fn degrees(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.degree).collect()
    }

    pub fn classes(&self) -> impl Iterator<Item = &CoverClass> {
        self.components.iter().map(|c| &c.class)
    }

    /// Degree bookkeeping and pairwise disjointness of the components.
    pub fn verify(&self, lat: &H1Lattice, degree: usize) -> Result<()> {
        let total: usize = self.components.iter().map(|c| c.degree).sum();
        if total != degree {
            return Err(Error::Internal(format!(
                "component degrees sum to {total}, not {degree}"
            )));
        }
        let l = self
            .components
            .iter()
            .fold(1u64, |l, c| l.lcm(&(c.degree as u64)));
        if l != self.d {
            return Err(Error::Internal(format!(
                "d = {} but lcm of degrees is {l}",
                self.d
            )));
        }
        for (c, &e) in self.components.iter().zip(&self.e) {
            if e * c.degree as u64 != self.d {
                return Err(Error::Internal("e_j * d_j differs from d".into()));
            }
        }
        for x in &self.components {
            for y in &self.components {
                if lat.omega(&x.class, &y.class) != 0 {
                    return Err(Error::Internal(format!(
                        "lifts of `{}` from sheets {} and {} intersect",
                        self.curve.word, x.sheet, y.sheet
                    )));
                }
            }
        }
        Ok(())
    }
}

pub fn lifted_twist_data(cover: &Cover, curve: &SccWord) -> Result<LiftedTwistData> {
    let rep = cover.rep();
    let perm = rep.word_perm(&curve.word);
    let mut components = Vec::new();
    for cyc in perm.cycles() {
        let sheet = cyc[0];
        let (m, class) = lift_class(&cover.complex, &cover.lattice, &curve.word, sheet)?;
        debug_assert_eq!(m, cyc.len());
        components.push(LiftComponent {
            sheet,
            degree: m,
            class,
        });
    }
    let d = components
        .iter()
        .fold(1u64, |l, c| l.lcm(&(c.degree as u64)));
    let e = components.iter().map(|c| d / c.degree as u64).collect();
    Ok(LiftedTwistData {
        curve: curve.clone(),
        components,
        d,
        e,
    })
}

/// `M` with `M h = h + sum_j e_j omega(h, c_j) c_j` on column vectors.
pub fn twist_matrix(lat: &H1Lattice, data: &LiftedTwistData) -> IntMatrix {
    let r = lat.rank();
    let mut m = IntMatrix::identity(r);
    for (c, &e) in data.components.iter().zip(&data.e) {
        let gc = lat.gram().mul_vec(&c.class.0);
        for (i, &ci) in c.class.0.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            for (j, &gj) in gc.iter().enumerate() {
                if gj != 0 {
                    m.set(i, j, m.get(i, j) + e as i64 * ci * gj);
                }
            }
        }
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TwistMatrixChecks {
    pub symplectic: bool,
    pub unipotent: bool,
    pub fixes_components: bool,
}

impl TwistMatrixChecks {
    pub fn all(&self) -> bool {
        self.symplectic && self.unipotent && self.fixes_components
    }
}

pub fn check_twist_matrix(
    lat: &H1Lattice,
    data: &LiftedTwistData,
    m: &IntMatrix,
) -> TwistMatrixChecks {
    let g = lat.gram();
    let n = m.sub(&IntMatrix::identity(lat.rank()));
    TwistMatrixChecks {
        symplectic: m.transpose().mul(g).mul(m) == *g,
        unipotent: n.mul(&n).is_zero(),
        fixes_components: data.classes().all(|c| m.mul_vec(&c.0) == c.0),
    }
}

/// Accumulates the common fixed space of a family of matrices as the
/// nullspace of the stacked rows of `M - I`.
#[derive(Clone, Debug)]
pub struct FixedSpaceAccumulator {
    rows: SpanAccumulator,
}

impl FixedSpaceAccumulator {
    pub fn new(ambient: usize) -> Self {
        FixedSpaceAccumulator {
            rows: SpanAccumulator::new(ambient),
        }
    }

    pub fn add(&mut self, m: &IntMatrix) {
        let n = self.rows.ambient();
        assert_eq!((m.nrows(), m.ncols()), (n, n), "matrix dimension mismatch");
        let mut row = vec![0i64; n];
        for i in 0..n {
            if self.rows.is_full() {
                return;
            }
            row.copy_from_slice(m.row(i));
            row[i] -= 1;
            if row.iter().any(|&x| x != 0) {
                self.rows.insert(&row);
            }
        }
    }

    pub fn merge(&mut self, other: &FixedSpaceAccumulator) {
        self.rows.merge(&other.rows);
    }

    pub fn dim(&self) -> usize {
        self.rows.ambient() - self.rows.rank()
    }

    pub fn subspace(&self) -> RatSubspace {
        let constraints = self.rows.to_subspace();
        RatSubspace::nullspace(self.rows.ambient(), constraints.basis())
    }
}

/// Common fixed space over Q of all `matrices`; the whole space if empty.
pub fn fixed_space(ambient: usize, matrices: &[IntMatrix]) -> RatSubspace {
    let mut acc = FixedSpaceAccumulator::new(ambient);
    for m in matrices {
        acc.add(m);
    }
    acc.subspace()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OrbitVerdict {
    Infinite,
    Fixed,
}

/// `w = sum_j e_j omega(v, c_j) c_j`; the lifted twist moves `v` to `v + w`,
/// so the orbit of `v` contains every `v + n w`.
pub fn orbit_witness(
    lat: &H1Lattice,
    data: &LiftedTwistData,
    v: &CoverClass,
) -> (CoverClass, OrbitVerdict) {
    let mut w = CoverClass::zero(lat.rank());
    for (c, &e) in data.components.iter().zip(&data.e) {
        let k = e as i64 * lat.omega(v, &c.class);
        if k != 0 {
            w = w.add(&c.class.scaled(k));
        }
    }
    let verdict = if w.is_zero() {
        OrbitVerdict::Fixed
    } else {
        OrbitVerdict::Infinite
    };
    (w, verdict)
}

fn walk_word(cover: &Cover, walk: &[Step]) -> Word {
    let st = cover.rep().surface();
    let gens = st.generators();
    let n = cover.complex.degree();
    Word::new(
        walk.iter()
            .map(|s| {
                let g = gens[s.edge / n];
                if s.forward {
                    Letter::pos(g)
                } else {
                    Letter::neg(g)
                }
            })
            .collect(),
    )
}

/// Action on homology of the lift, fixing the base point on sheet 0, of a
/// surface group automorphism given by its effect on words. Each basis
/// cycle is read as a word based at sheet 0, mapped, and lifted again.
/// Fails when an image does not close up on sheet 0, that is when the
/// automorphism does not lift with that base point fixed.
pub fn automorphism_action(cover: &Cover, f: &dyn Fn(&Word) -> Word) -> Result<IntMatrix> {
    let lat = &cover.lattice;
    let mut cols = Vec::with_capacity(lat.rank());
    for walk in lat.basis_walks() {
        let w = f(&walk_word(cover, walk));
        let (steps, end) = cover.complex.walk(&w, 0);
        if end != 0 {
            return Err(Error::InvalidParameter(
                "automorphism does not lift with the base point on sheet 0 fixed".into(),
            ));
        }
        cols.push(lat.walk_class(&steps).0);
    }
    IntMatrix::from_columns(lat.rank(), &cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::{deck_matrix, PermutationRep};
    use crate::curves::{sample_curves, TopType, TwistAutomorphism};
    use crate::surface::SurfaceType;

    fn scc(s: &str) -> SccWord {
        SccWord::seed(s.parse().unwrap(), TopType::Nonseparating)
    }

    #[test]
    fn identity_cover_data_and_matrix() {
        let cover = Cover::new(PermutationRep::identity(SurfaceType::closed(2))).unwrap();
        let data = lifted_twist_data(&cover, &scc("a1")).unwrap();
        assert_eq!(data.degrees(), vec![1]);
        assert_eq!((data.d, data.e.clone()), (1, vec![1]));
        let m = twist_matrix(&cover.lattice, &data);
        // [b1] -> [b1] - [a1]
        assert_eq!(m.mul_vec(&[0, 1, 0, 0]), vec![-1, 1, 0, 0]);
        assert!(check_twist_matrix(&cover.lattice, &data, &m).all());
    }

    #[test]
    fn mixed_degrees() {
        // degree 3 cover of the once-marked torus where a1 acts as (1)(2 3)
        use crate::covering::Permutation;
        let a = Permutation::from_images(vec![0, 2, 1]).unwrap();
        let b = Permutation::from_images(vec![1, 0, 2]).unwrap();
        let commutator = a.then(&b).then(&a.inverse()).then(&b.inverse());
        let rep =
            PermutationRep::new(SurfaceType::new(1, 1), vec![a, b, commutator.inverse()]).unwrap();
        let cover = Cover::new(rep).unwrap();
        let data = lifted_twist_data(&cover, &scc("a1")).unwrap();
        assert_eq!(data.degrees(), vec![1, 2]);
        assert_eq!((data.d, data.e.clone()), (2, vec![2, 1]));
        data.verify(&cover.lattice, 3).unwrap();
    }

    #[test]
    fn mod_three_components() {
        let cover = Cover::new(PermutationRep::mod_ell(2, 3).unwrap()).unwrap();
        let data = lifted_twist_data(&cover, &scc("a1")).unwrap();
        assert_eq!(data.components.len(), 27);
        assert!(data.degrees().iter().all(|&d| d == 3));
        assert_eq!(data.d, 3);
        assert!(data.e.iter().all(|&e| e == 1));
    }

    #[test]
    fn fixed_space_examples() {
        assert_eq!(fixed_space(4, &[]).dim(), 4);
        let cover = Cover::new(PermutationRep::identity(SurfaceType::closed(2))).unwrap();
        let ms: Vec<IntMatrix> = ["a1", "b1", "a2", "b2"]
            .iter()
            .map(|s| twist_matrix(&cover.lattice, &lifted_twist_data(&cover, &scc(s)).unwrap()))
            .collect();
        assert_eq!(fixed_space(4, &ms).dim(), 0);
        assert_eq!(fixed_space(4, &ms[..1]).dim(), 3);
    }

    #[test]
    fn orbit_examples() {
        let cover = Cover::new(PermutationRep::identity(SurfaceType::closed(2))).unwrap();
        let data = lifted_twist_data(&cover, &scc("a1")).unwrap();
        let lat = &cover.lattice;
        let (w, v) = orbit_witness(lat, &data, &data.components[0].class);
        assert!(w.is_zero() && v == OrbitVerdict::Fixed);
        let (w, v) = orbit_witness(lat, &data, &CoverClass(vec![0, 1, 0, 0]));
        assert_eq!((w.0, v), (vec![-1, 0, 0, 0], OrbitVerdict::Infinite));
        let (w, v) = orbit_witness(lat, &data, &CoverClass::zero(4));
        assert!(w.is_zero() && v == OrbitVerdict::Fixed);
    }

    #[test]
    fn twist_matrices_on_mod_two_cover() {
        let cover = Cover::new(PermutationRep::mod_ell(2, 2).unwrap()).unwrap();
        let lat = &cover.lattice;
        let deck = deck_matrix(&cover.complex, lat, &[1, 1, 0, 1]).unwrap();
        // every element of (Z/2)^4 is its own inverse
        let deck_inv = deck.clone();
        for c in sample_curves(&SurfaceType::closed(2), &TopType::Nonseparating, 12, 5).unwrap() {
            let data = lifted_twist_data(&cover, &c).unwrap();
            data.verify(lat, 16).unwrap();
            let m = twist_matrix(lat, &data);
            assert!(check_twist_matrix(lat, &data, &m).all());
            assert_eq!(deck.mul(&m).mul(&deck_inv), m);
        }
    }

    #[test]
    fn lifted_power_matches_the_automorphism_route() {
        // T_{a1}^3 on the degree 3 cyclic cover where a1 has monodromy of order 3
        let rep = PermutationRep::abelian(2, &[3], &[vec![1], vec![0], vec![0], vec![0]]).unwrap();
        let cover = Cover::new(rep).unwrap();
        let st = SurfaceType::closed(2);
        for curve in ["a1", "b1", "a2", "a1 a2"] {
            let w: Word = curve.parse().unwrap();
            let t = TwistAutomorphism::about(st, &w, true).unwrap();
            let data = lifted_twist_data(&cover, &scc(curve)).unwrap();
            let d = data.d as usize;
            let via_words = automorphism_action(&cover, &|x: &Word| {
                (0..d).fold(x.clone(), |acc, _| t.apply(&acc))
            })
            .unwrap();
            assert_eq!(via_words, twist_matrix(&cover.lattice, &data), "{curve}");
        }
    }
}
