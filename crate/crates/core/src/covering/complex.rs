//! Cell structure of the closed covering surface.
//!
//! Vertices are the sheets. The edge lifting generator number `k` that
//! leaves sheet `s` has id `k * N + s` and ends at `s . k`. Each sheet
//! carries one lifted relator polygon, and each cycle of the monodromy of
//! `zj` bounds one cap disk, whose size is the ramification index.

use crate::covering::rep::PermutationRep;
use crate::surface::{End, Letter, Word};

/// An oriented edge traversal: edge id and direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub edge: usize,
    pub forward: bool,
}

impl Step {
    pub fn sign(self) -> i64 {
        if self.forward {
            1
        } else {
            -1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FaceKind {
    Polygon { sheet: usize },
    Cap { marked: usize, ramification: usize },
}

#[derive(Clone, Debug)]
pub struct Face {
    pub kind: FaceKind,
    pub boundary: Vec<Step>,
}

#[derive(Clone, Debug)]
pub struct CoverComplex {
    rep: PermutationRep,
    faces: Vec<Face>,
    rotation: Vec<End>,
    rotation_pos: Vec<usize>,
}

impl CoverComplex {
    pub fn build(rep: PermutationRep) -> CoverComplex {
        let st = rep.surface();
        let n = rep.degree();
        let mut faces = Vec::with_capacity(n);
        let relator = st.relator();
        for s in 0..n {
            let (boundary, end) = lift_word(&rep, &relator, s);
            debug_assert_eq!(end, s, "relator lifts to a closed loop");
            faces.push(Face {
                kind: FaceKind::Polygon { sheet: s },
                boundary,
            });
        }
        for j in 1..=st.marked {
            let z = crate::surface::Gen::Z(j);
            let k = st.gen_index(z).expect("marked generator");
            for cyc in rep.perm(z).cycles() {
                let boundary = cyc
                    .iter()
                    .rev()
                    .map(|&s| Step {
                        edge: k * n + s,
                        forward: false,
                    })
                    .collect();
                faces.push(Face {
                    kind: FaceKind::Cap {
                        marked: j,
                        ramification: cyc.len(),
                    },
                    boundary,
                });
            }
        }
        let rotation = st.rotation();
        let mut rotation_pos = vec![0; rotation.len()];
        for (i, e) in rotation.iter().enumerate() {
            rotation_pos[end_slot(&st, *e)] = i;
        }
        CoverComplex {
            rep,
            faces,
            rotation,
            rotation_pos,
        }
    }

    pub fn rep(&self) -> &PermutationRep {
        &self.rep
    }

    pub fn degree(&self) -> usize {
        self.rep.degree()
    }

    pub fn num_vertices(&self) -> usize {
        self.rep.degree()
    }

    pub fn num_edges(&self) -> usize {
        self.rep.degree() * self.rep.surface().num_generators()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    /// `N * chi(punctured base) + sum over j of #cycles(zj)`.
    pub fn riemann_hurwitz_prediction(&self) -> i64 {
        let st = self.rep.surface();
        let caps: usize = (1..=st.marked)
            .map(|j| self.rep.perm(crate::surface::Gen::Z(j)).cycles().len())
            .sum();
        self.degree() as i64 * st.punctured_euler_characteristic() + caps as i64
    }

    pub fn genus(&self) -> i64 {
        (2 - self.euler_characteristic()) / 2
    }

    /// Ramification indices of the caps over each marked point.
    pub fn ramification(&self) -> Vec<Vec<usize>> {
        let st = self.rep.surface();
        let mut out = vec![Vec::new(); st.marked];
        for f in &self.faces {
            if let FaceKind::Cap {
                marked,
                ramification,
            } = f.kind
            {
                out[marked - 1].push(ramification);
            }
        }
        out
    }

    pub fn edge_generator(&self, e: usize) -> usize {
        e / self.degree()
    }

    pub fn tail(&self, e: usize) -> usize {
        e % self.degree()
    }

    pub fn head(&self, e: usize) -> usize {
        let n = self.degree();
        self.rep.perms()[e / n].apply(e % n)
    }

    pub fn step_start(&self, s: Step) -> usize {
        if s.forward {
            self.tail(s.edge)
        } else {
            self.head(s.edge)
        }
    }

    pub fn step_end(&self, s: Step) -> usize {
        if s.forward {
            self.head(s.edge)
        } else {
            self.tail(s.edge)
        }
    }

    pub fn letter_step(&self, sheet: usize, l: Letter) -> (Step, usize) {
        lift_letter(&self.rep, sheet, l)
    }

    /// Edge path lifting `w` from `start`, and the sheet where it ends.
    pub fn walk(&self, w: &Word, start: usize) -> (Vec<Step>, usize) {
        lift_word(&self.rep, w, start)
    }

    /// Position in the counter-clockwise order at every vertex of the edge
    /// end through which `step` leaves (`incoming = false`) or arrives.
    pub(crate) fn end_position(&self, step: Step, incoming: bool) -> usize {
        let k = self.edge_generator(step.edge);
        let head = step.forward == incoming;
        self.rotation_pos[2 * k + head as usize]
    }

    pub(crate) fn rotation(&self) -> &[End] {
        &self.rotation
    }

    /// The edge owning end `e` at vertex `v`.
    pub(crate) fn end_edge(&self, v: usize, e: End) -> usize {
        let st = self.rep.surface();
        let k = st.gen_index(e.gen).expect("end in range");
        let n = self.degree();
        if e.head {
            k * n + self.rep.inverse_perms()[k].apply(v)
        } else {
            k * n + v
        }
    }
}

fn lift_letter(rep: &PermutationRep, sheet: usize, l: Letter) -> (Step, usize) {
    let n = rep.degree();
    let k = rep.surface().gen_index(l.gen).expect("letter in range");
    let next = rep.act_letter(sheet, l);
    let edge = if l.inverse {
        k * n + next
    } else {
        k * n + sheet
    };
    (
        Step {
            edge,
            forward: !l.inverse,
        },
        next,
    )
}

fn lift_word(rep: &PermutationRep, w: &Word, start: usize) -> (Vec<Step>, usize) {
    let mut steps = Vec::with_capacity(w.len());
    let mut cur = start;
    for &l in w.letters() {
        let (step, next) = lift_letter(rep, cur, l);
        steps.push(step);
        cur = next;
    }
    (steps, cur)
}

fn end_slot(st: &crate::surface::SurfaceType, e: End) -> usize {
    2 * st.gen_index(e.gen).expect("end in range") + e.head as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::rep::Permutation;
    use crate::surface::SurfaceType;

    #[test]
    fn identity_cover_counts() {
        let cx = CoverComplex::build(PermutationRep::identity(SurfaceType::closed(2)));
        assert_eq!(
            (cx.num_vertices(), cx.num_edges(), cx.num_faces()),
            (1, 4, 1)
        );
        assert_eq!(cx.euler_characteristic(), -2);
    }

    #[test]
    fn mod_two_euler_characteristic() {
        let cx = CoverComplex::build(PermutationRep::mod_ell(2, 2).unwrap());
        assert_eq!(cx.euler_characteristic(), -32);
        assert_eq!(cx.genus(), 17);
        assert_eq!(cx.riemann_hurwitz_prediction(), -32);
    }

    #[test]
    fn sphere_with_three_branch_points() {
        let c = Permutation::from_images(vec![1, 2, 0]).unwrap();
        let rep =
            PermutationRep::new(SurfaceType::new(0, 3), vec![c.clone(), c.clone(), c]).unwrap();
        let cx = CoverComplex::build(rep);
        // brute-force count: 3 vertices, 9 edges, 3 polygons, 3 caps
        assert_eq!(
            (cx.num_vertices(), cx.num_edges(), cx.num_faces()),
            (3, 9, 6)
        );
        assert_eq!(cx.euler_characteristic(), 0);
        assert_eq!(cx.riemann_hurwitz_prediction(), 0);
        assert_eq!(cx.ramification(), vec![vec![3], vec![3], vec![3]]);
    }

    #[test]
    fn faces_are_closed_loops() {
        let cx = CoverComplex::build(PermutationRep::mod_ell(1, 3).unwrap());
        for f in cx.faces() {
            for (k, s) in f.boundary.iter().enumerate() {
                let next = f.boundary[(k + 1) % f.boundary.len()];
                assert_eq!(cx.step_end(*s), cx.step_start(next));
            }
        }
    }
}
