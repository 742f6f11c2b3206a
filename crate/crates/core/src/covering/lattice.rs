//! First homology of the closed cover and its intersection form.
//!
//! A spanning tree of the 1-skeleton and a spanning tree of the dual graph
//! on the remaining edges leave exactly `2 - chi` edges; their fundamental
//! cycles form a basis of `H_1(cover; Z)`. Coordinates of an arbitrary
//! cycle are read off after eliminating the dual-tree edges with face
//! boundaries, leaves last.
//!
//! Intersection numbers come from pushing a closed walk slightly to its
//! left at every vertex it passes through and counting the signed edge
//! ends it sweeps across.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::covering::complex::{CoverComplex, Step};
use crate::error::{Error, Result};
use crate::surface::Word;
use crate::symplin::IntMatrix;

/// Coordinates of a class in the basis of an [`H1Lattice`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoverClass(pub Vec<i64>);

impl CoverClass {
    pub fn zero(rank: usize) -> Self {
        CoverClass(vec![0; rank])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn add(&self, other: &CoverClass) -> CoverClass {
        CoverClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scaled(&self, k: i64) -> CoverClass {
        CoverClass(self.0.iter().map(|a| a * k).collect())
    }
}

#[derive(Clone, Debug)]
pub struct H1Lattice {
    rank: usize,
    generator_edges: Vec<usize>,
    basis: Vec<Vec<Step>>,
    /// Row `e` holds the coordinates of the 1-chain `e`; only sums over
    /// cycles are meaningful.
    edge_coords: Vec<i64>,
    gram: IntMatrix,
}

impl H1Lattice {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    /// Edges whose fundamental cycles make up the basis, in basis order.
    pub fn generator_edges(&self) -> &[usize] {
        &self.generator_edges
    }

    /// Basis cycles as closed walks based at sheet 0.
    pub fn basis_walks(&self) -> &[Vec<Step>] {
        &self.basis
    }

    fn edge_row(&self, e: usize) -> &[i64] {
        &self.edge_coords[e * self.rank..(e + 1) * self.rank]
    }

    /// Coordinates of a closed walk.
    pub fn walk_class(&self, walk: &[Step]) -> CoverClass {
        let mut out = vec![0i64; self.rank];
        for s in walk {
            let sign = s.sign();
            for (o, &x) in out.iter_mut().zip(self.edge_row(s.edge)) {
                *o += sign * x;
            }
        }
        CoverClass(out)
    }

    /// Coordinates of a 1-cycle given as `(edge, coefficient)` pairs.
    pub fn chain_class(&self, chain: &[(usize, i64)]) -> CoverClass {
        let mut out = vec![0i64; self.rank];
        for &(e, c) in chain {
            if c == 0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(self.edge_row(e)) {
                *o += c * x;
            }
        }
        CoverClass(out)
    }

    pub fn omega(&self, x: &CoverClass, y: &CoverClass) -> i64 {
        let gy = self.gram.mul_vec(&y.0);
        x.0.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }
}

fn spanning_tree(cx: &CoverComplex) -> (Vec<bool>, Vec<Option<(usize, usize)>>) {
    let n = cx.num_vertices();
    let e_count = cx.num_edges();
    let mut adj = vec![Vec::new(); n];
    for e in 0..e_count {
        adj[cx.tail(e)].push(e);
        adj[cx.head(e)].push(e);
    }
    let mut in_tree = vec![false; e_count];
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &e in &adj[v] {
            let u = if cx.tail(e) == v {
                cx.head(e)
            } else {
                cx.tail(e)
            };
            if !seen[u] {
                seen[u] = true;
                in_tree[e] = true;
                parent[u] = Some((e, v));
                queue.push_back(u);
            }
        }
    }
    (in_tree, parent)
}

/// Walk from sheet 0 to `v` along the spanning tree.
fn tree_path(cx: &CoverComplex, parent: &[Option<(usize, usize)>], mut v: usize) -> Vec<Step> {
    let mut p = Vec::new();
    while let Some((e, u)) = parent[v] {
        p.push(Step {
            edge: e,
            forward: cx.tail(e) == u,
        });
        v = u;
    }
    p.reverse();
    p
}

fn reversed(walk: &[Step]) -> Vec<Step> {
    walk.iter()
        .rev()
        .map(|s| Step {
            edge: s.edge,
            forward: !s.forward,
        })
        .collect()
}

pub fn homology_lattice(cx: &CoverComplex) -> Result<H1Lattice> {
    let e_count = cx.num_edges();
    let f_count = cx.num_faces();
    let (in_tree, parent) = spanning_tree(cx);
    if parent.iter().skip(1).any(Option::is_none) {
        return Err(Error::Internal(
            "1-skeleton of the cover is disconnected".into(),
        ));
    }

    // incidences of each edge in face boundaries: (face, sign)
    let mut sides: Vec<Vec<(usize, i64)>> = vec![Vec::new(); e_count];
    for (fi, f) in cx.faces().iter().enumerate() {
        for s in &f.boundary {
            sides[s.edge].push((fi, s.sign()));
        }
    }
    for (e, side) in sides.iter().enumerate() {
        if side.len() != 2 || side[0].1 + side[1].1 != 0 {
            return Err(Error::Internal(format!(
                "edge {e} is not bounded by two oppositely oriented face sides"
            )));
        }
    }

    let mut face_adj = vec![Vec::new(); f_count];
    for e in 0..e_count {
        if in_tree[e] {
            continue;
        }
        let (f1, f2) = (sides[e][0].0, sides[e][1].0);
        if f1 != f2 {
            face_adj[f1].push(e);
            face_adj[f2].push(e);
        }
    }
    let mut in_cotree = vec![false; e_count];
    let mut face_parent_edge = vec![None; f_count];
    let mut face_seen = vec![false; f_count];
    let mut face_order = Vec::with_capacity(f_count);
    face_seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        face_order.push(f);
        for &e in &face_adj[f] {
            let (f1, f2) = (sides[e][0].0, sides[e][1].0);
            let h = if f1 == f { f2 } else { f1 };
            if !face_seen[h] {
                face_seen[h] = true;
                in_cotree[e] = true;
                face_parent_edge[h] = Some(e);
                queue.push_back(h);
            }
        }
    }
    if face_order.len() != f_count {
        return Err(Error::Internal(
            "dual graph of the cover is disconnected".into(),
        ));
    }

    let generator_edges: Vec<usize> = (0..e_count)
        .filter(|&e| !in_tree[e] && !in_cotree[e])
        .collect();
    let rank = generator_edges.len();
    let expected = 2 - cx.euler_characteristic();
    if rank as i64 != expected {
        return Err(Error::Internal(format!(
            "found {rank} homology generators but the Euler characteristic predicts {expected}"
        )));
    }

    let face_vecs: Vec<Vec<(usize, i64)>> = cx
        .faces()
        .iter()
        .map(|f| {
            let mut v: Vec<(usize, i64)> = Vec::new();
            for s in &f.boundary {
                match v.iter_mut().find(|(e, _)| *e == s.edge) {
                    Some(slot) => slot.1 += s.sign(),
                    None => v.push((s.edge, s.sign())),
                }
            }
            v
        })
        .collect();

    let mut gen_pos = vec![usize::MAX; e_count];
    for (i, &e) in generator_edges.iter().enumerate() {
        gen_pos[e] = i;
    }
    let mut edge_coords = vec![0i64; e_count * rank];
    let mut chain = vec![0i64; e_count];
    for e in 0..e_count {
        if in_tree[e] {
            continue;
        }
        chain.iter_mut().for_each(|x| *x = 0);
        chain[e] = 1;
        if in_cotree[e] {
            for &f in &face_order {
                let Some(pe) = face_parent_edge[f] else {
                    continue;
                };
                let c = chain[pe];
                if c == 0 {
                    continue;
                }
                let coef = face_vecs[f]
                    .iter()
                    .find(|(x, _)| *x == pe)
                    .map(|p| p.1)
                    .unwrap_or(0);
                if coef.abs() != 1 {
                    return Err(Error::Internal(format!(
                        "dual tree edge {pe} has face coefficient {coef}"
                    )));
                }
                let k = c * coef;
                for &(x, v) in &face_vecs[f] {
                    chain[x] -= k * v;
                }
            }
        }
        let row = &mut edge_coords[e * rank..(e + 1) * rank];
        for (x, &c) in chain.iter().enumerate() {
            if c != 0 && gen_pos[x] != usize::MAX {
                row[gen_pos[x]] = c;
            }
        }
    }

    let basis: Vec<Vec<Step>> = generator_edges
        .iter()
        .map(|&e| {
            let mut w = tree_path(cx, &parent, cx.tail(e));
            w.push(Step {
                edge: e,
                forward: true,
            });
            w.extend(reversed(&tree_path(cx, &parent, cx.head(e))));
            w
        })
        .collect();

    let mut lat = H1Lattice {
        rank,
        generator_edges,
        basis,
        edge_coords,
        gram: IntMatrix::zeros(rank, rank),
    };
    lat.gram = intersection_gram(cx, &lat);
    if !lat.gram.is_skew() {
        return Err(Error::Internal(
            "intersection form is not skew-symmetric".into(),
        ));
    }
    Ok(lat)
}

/// Cochain counting, with sign, the edge ends swept by the left push-off of
/// a closed walk: a head end counts `+1`, a tail end `-1`.
pub fn pushoff_cochain(cx: &CoverComplex, walk: &[Step]) -> Vec<(usize, i64)> {
    let k = cx.rotation().len();
    let m = walk.len();
    let mut out: Vec<(usize, i64)> = Vec::new();
    for idx in 0..m {
        let here = walk[idx];
        let next = walk[(idx + 1) % m];
        let v = cx.step_end(here);
        let i = cx.end_position(here, true);
        let o = cx.end_position(next, false);
        let mut t = (o + 1) % k;
        while t != i {
            let end = cx.rotation()[t];
            let e = cx.end_edge(v, end);
            let c = if end.head { 1 } else { -1 };
            match out.iter_mut().find(|(x, _)| *x == e) {
                Some(slot) => slot.1 += c,
                None => out.push((e, c)),
            }
            t = (t + 1) % k;
        }
    }
    out.retain(|&(_, c)| c != 0);
    out
}

/// Algebraic intersection number of two closed walks.
pub fn walk_intersection(cx: &CoverComplex, alpha: &[Step], beta: &[Step]) -> i64 {
    let kappa = pushoff_cochain(cx, beta);
    alpha
        .iter()
        .map(|s| s.sign() * kappa.iter().find(|(e, _)| *e == s.edge).map_or(0, |p| p.1))
        .sum()
}

/// Gram matrix `G[i][j] = omega(basis_i, basis_j)`.
pub fn intersection_gram(cx: &CoverComplex, lat: &H1Lattice) -> IntMatrix {
    let r = lat.rank();
    let e_count = cx.num_edges();
    let mut gram = IntMatrix::zeros(r, r);
    let mut dense = vec![0i64; e_count];
    for j in 0..r {
        let kappa = pushoff_cochain(cx, &lat.basis[j]);
        for &(e, c) in &kappa {
            dense[e] = c;
        }
        for i in 0..r {
            let x: i64 = lat.basis[i].iter().map(|s| s.sign() * dense[s.edge]).sum();
            gram.set(i, j, x);
        }
        for &(e, _) in &kappa {
            dense[e] = 0;
        }
    }
    gram
}

/// Lifts `w` from `start` and follows it until the lift closes up.
/// Returns the number of passes `m` (the cycle length of `start` under the
/// monodromy of `w`) and the class of the closed lift of `w^m`.
pub fn lift_class(
    cx: &CoverComplex,
    lat: &H1Lattice,
    w: &Word,
    start: usize,
) -> Result<(usize, CoverClass)> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    w.validate(&cx.rep().surface())?;
    if start >= cx.degree() {
        return Err(Error::InvalidParameter(format!(
            "sheet {start} out of range for degree {}",
            cx.degree()
        )));
    }
    let mut steps = Vec::new();
    let mut cur = start;
    let mut m = 0;
    loop {
        let (s, end) = cx.walk(w, cur);
        steps.extend(s);
        m += 1;
        cur = end;
        if cur == start {
            break;
        }
    }
    Ok((m, lat.walk_class(&steps)))
}

/// Matrix (columns are images of basis classes) of the deck translation by
/// the group element `t` of a regular abelian cover.
pub fn deck_matrix(cx: &CoverComplex, lat: &H1Lattice, t: &[u64]) -> Result<IntMatrix> {
    let data = cx.rep().abelian_data().ok_or(Error::NotRegular)?;
    if t.len() != data.orders.len() {
        return Err(Error::DimensionMismatch {
            expected: data.orders.len(),
            got: t.len(),
        });
    }
    let n = cx.degree();
    let cols: Vec<Vec<i64>> = lat
        .basis_walks()
        .iter()
        .map(|walk| {
            let moved: Vec<Step> = walk
                .iter()
                .map(|s| Step {
                    edge: (s.edge / n) * n + data.translate(s.edge % n, t),
                    forward: s.forward,
                })
                .collect();
            lat.walk_class(&moved).0
        })
        .collect();
    IntMatrix::from_columns(lat.rank(), &cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::rep::PermutationRep;
    use crate::surface::{base_class, SurfaceType};
    use crate::symplin::smith_invariants;
    use num_bigint::BigInt;
    use num_traits::{One, Signed};

    fn build(rep: PermutationRep) -> (CoverComplex, H1Lattice) {
        let cx = CoverComplex::build(rep);
        let lat = homology_lattice(&cx).unwrap();
        (cx, lat)
    }

    fn j(g: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(2 * g, 2 * g);
        for i in 0..g {
            m.set(2 * i, 2 * i + 1, 1);
            m.set(2 * i + 1, 2 * i, -1);
        }
        m
    }

    #[test]
    fn identity_cover_is_the_standard_basis() {
        for g in 1..=3 {
            let (cx, lat) = build(PermutationRep::identity(SurfaceType::closed(g)));
            assert_eq!(lat.rank(), 2 * g);
            assert_eq!(
                lat.generator_edges(),
                (0..2 * g).collect::<Vec<_>>().as_slice()
            );
            assert_eq!(lat.gram(), &j(g));
            for w in ["a1", "b1 a1 B1", "a1 a1 B1", "A1 b1 a1 a1"] {
                let word: Word = w.parse().unwrap();
                let (m, cls) = lift_class(&cx, &lat, &word, 0).unwrap();
                assert_eq!(m, 1);
                assert_eq!(cls.0, base_class(&SurfaceType::closed(g), &word).0);
            }
        }
    }

    #[test]
    fn mod_two_cover() {
        let (cx, lat) = build(PermutationRep::mod_ell(2, 2).unwrap());
        assert_eq!(cx.euler_characteristic(), -32);
        assert_eq!(lat.rank(), 34);
        assert_eq!(lat.gram().det().abs(), BigInt::one());
    }

    #[test]
    fn branched_cover_of_sphere_is_a_torus() {
        use crate::covering::rep::Permutation;
        let c = Permutation::from_images(vec![1, 2, 0]).unwrap();
        let rep =
            PermutationRep::new(SurfaceType::new(0, 3), vec![c.clone(), c.clone(), c]).unwrap();
        let (cx, lat) = build(rep);
        assert_eq!(cx.genus(), 1);
        assert_eq!(lat.rank(), 2);
        assert_eq!(lat.gram().det().abs(), BigInt::one());
    }

    #[test]
    fn lift_degrees_and_empty_word() {
        let (cx, lat) = build(PermutationRep::mod_ell(2, 3).unwrap());
        assert_eq!(lat.rank(), 164);
        let a1: Word = "a1".parse().unwrap();
        for s in [0, 5, 80] {
            assert_eq!(lift_class(&cx, &lat, &a1, s).unwrap().0, 3);
        }
        assert!(matches!(
            lift_class(&cx, &lat, &Word::empty(), 0),
            Err(Error::EmptyWord)
        ));
        assert!(lift_class(&cx, &lat, &a1, 81).is_err());
    }

    #[test]
    fn homology_rank_matches_smith_form() {
        // independent route: H_1 = ker d1 / im d2 from the boundary matrices
        let (cx, lat) = build(PermutationRep::mod_ell(1, 3).unwrap());
        let e = cx.num_edges();
        let v = cx.num_vertices();
        let mut d1 = vec![vec![0i64; e]; v];
        for x in 0..e {
            d1[cx.head(x)][x] += 1;
            d1[cx.tail(x)][x] -= 1;
        }
        let d2: Vec<Vec<i64>> = cx
            .faces()
            .iter()
            .map(|f| {
                let mut row = vec![0i64; e];
                for s in &f.boundary {
                    row[s.edge] += s.sign();
                }
                row
            })
            .collect();
        let r1 = smith_invariants(&d1).len();
        let inv2 = smith_invariants(&d2);
        assert!(inv2.iter().all(|x| x.is_one()), "torsion in H_1");
        assert_eq!(e - r1 - inv2.len(), lat.rank());
    }

    #[test]
    fn deck_translations_preserve_the_form() {
        let (cx, lat) = build(PermutationRep::mod_ell(2, 2).unwrap());
        let id = deck_matrix(&cx, &lat, &[0, 0, 0, 0]).unwrap();
        assert!(id.is_identity());
        let d = deck_matrix(&cx, &lat, &[1, 0, 1, 1]).unwrap();
        assert_eq!(d.transpose().mul(lat.gram()).mul(&d), *lat.gram());
        assert!(d.pow(2).is_identity());
        let (cx1, lat1) = build(PermutationRep::identity(SurfaceType::closed(2)));
        assert!(matches!(
            deck_matrix(&cx1, &lat1, &[]),
            Err(Error::NotRegular)
        ));
    }

    #[test]
    fn gram_agrees_with_direct_walk_intersections() {
        let (cx, lat) = build(PermutationRep::mod_ell(1, 3).unwrap());
        let ws: Vec<Word> = ["a1 a1 a1", "b1 b1 b1", "a1 b1 A1 B1", "a1 a1 a1 b1 b1 b1"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        for u in &ws {
            for v in &ws {
                let (wu, _) = cx.walk(u, 0);
                let (wv, _) = cx.walk(v, 4);
                let direct = walk_intersection(&cx, &wu, &wv);
                let via_gram = lat.omega(&lat.walk_class(&wu), &lat.walk_class(&wv));
                assert_eq!(direct, via_gram, "{u} vs {v}");
            }
        }
    }
}
