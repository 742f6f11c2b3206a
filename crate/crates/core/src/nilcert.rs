//! The 2-step nilpotent group `N_n[l]`: the free group on `x_1..x_n` modulo
//! all triple commutators and with commutators of order dividing `lh`,
//! where `lh = l` for odd `l` and `l/2` for even `l`.
//!
//! Elements are kept in the normal form `x_1^{a_1} ... x_n^{a_n} c` with
//! `a` in `Z^n` and `c` central in `wedge^2 (Z/lh)^n`. The commutator
//! `[x_i, x_j] = x_i x_j x_i^-1 x_j^-1` is `e_i ^ e_j`.
//!
//! The map `a_i -> x_i`, `b_i -> 1` from the genus `n` surface group
//! separates the class of the lifted commutator `[a_1, a_2]` from every
//! lifted nonseparating simple closed curve on the mod-`l` homology cover,
//! giving an integral certificate that such lifts do not span.

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curves::{SccWord, TopType};
use crate::error::{Error, Result};
use crate::surface::{base_class, is_primitive, Gen, SurfaceType, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NilParams {
    pub n: usize,
    pub ell: u64,
    pub ell_hat: u64,
}

impl NilParams {
    pub fn new(n: usize, ell: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 generators, got {n}"
            )));
        }
        if ell < 3 {
            return Err(Error::InvalidParameter(format!("need l >= 3, got {ell}")));
        }
        let ell_hat = if ell % 2 == 1 { ell } else { ell / 2 };
        Ok(NilParams { n, ell, ell_hat })
    }

    fn pair(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    fn pairs(&self) -> usize {
        self.n * (self.n - 1) / 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct NilElement {
    pub a: Vec<i64>,
    /// Coefficients of `e_i ^ e_j` for `i < j` in lexicographic order, in `[0, lh)`.
    pub c: Vec<u64>,
}

impl NilElement {
    pub fn identity(p: &NilParams) -> Self {
        NilElement {
            a: vec![0; p.n],
            c: vec![0; p.pairs()],
        }
    }

    /// `x_{i+1}`.
    pub fn generator(p: &NilParams, i: usize) -> Self {
        let mut x = Self::identity(p);
        x.a[i] = 1;
        x
    }

    /// `coef * (e_i ^ e_j)` for `i < j`.
    pub fn central(p: &NilParams, i: usize, j: usize, coef: i64) -> Self {
        let mut x = Self::identity(p);
        x.c[p.pair(i, j)] = coef.rem_euclid(p.ell_hat as i64) as u64;
        x
    }

    pub fn is_identity(&self) -> bool {
        self.a.iter().all(|&x| x == 0) && self.c.iter().all(|&x| x == 0)
    }

    pub fn central_order(&self, p: &NilParams) -> u64 {
        let g = self.c.iter().fold(p.ell_hat, |g, &x| g.gcd(&x));
        p.ell_hat / g
    }
}

fn add_mod(c: &mut u64, delta: i128, m: u64) {
    *c = ((*c as i128 + delta).rem_euclid(m as i128)) as u64;
}

pub fn nil_mul(p: &NilParams, u: &NilElement, v: &NilElement) -> NilElement {
    let m = p.ell_hat;
    let a = u.a.iter().zip(&v.a).map(|(x, y)| x + y).collect();
    let mut c: Vec<u64> = u.c.iter().zip(&v.c).map(|(x, y)| (x + y) % m).collect();
    // moving x_j^{v_j} left past x_i^{u_i} for i > j costs -(u_i v_j) e_j ^ e_i
    for i in 0..p.n {
        if u.a[i] == 0 {
            continue;
        }
        for j in 0..i {
            if v.a[j] != 0 {
                add_mod(&mut c[p.pair(j, i)], -(u.a[i] as i128 * v.a[j] as i128), m);
            }
        }
    }
    NilElement { a, c }
}

pub fn nil_inv(p: &NilParams, u: &NilElement) -> NilElement {
    let m = p.ell_hat;
    let mut c: Vec<u64> = u.c.iter().map(|&x| (m - x) % m).collect();
    for i in 0..p.n {
        for j in 0..i {
            add_mod(&mut c[p.pair(j, i)], -(u.a[i] as i128 * u.a[j] as i128), m);
        }
    }
    NilElement {
        a: u.a.iter().map(|x| -x).collect(),
        c,
    }
}

pub fn nil_pow(p: &NilParams, u: &NilElement, k: u64) -> NilElement {
    let mut out = NilElement::identity(p);
    let mut base = u.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            out = nil_mul(p, &out, &base);
        }
        base = nil_mul(p, &base, &base);
        k >>= 1;
    }
    out
}

pub fn nil_commutator(p: &NilParams, u: &NilElement, v: &NilElement) -> NilElement {
    let uv = nil_mul(p, u, v);
    let uvu = nil_mul(p, &uv, &nil_inv(p, u));
    nil_mul(p, &uvu, &nil_inv(p, v))
}

/// `x_1^{l k_1} ... x_n^{l k_n}`, a free abelian central subgroup.
pub fn in_p(p: &NilParams, u: &NilElement) -> bool {
    in_a(p, u) && u.c.iter().all(|&x| x == 0)
}

/// `P` times the central `wedge^2` part.
pub fn in_a(p: &NilParams, u: &NilElement) -> bool {
    u.a.iter().all(|&x| x.rem_euclid(p.ell as i64) == 0)
}

/// Image of a surface word under `a_i -> x_i`, `b_i -> 1`.
pub fn phi(p: &NilParams, w: &Word) -> Result<NilElement> {
    let mut out = NilElement::identity(p);
    for l in w.letters() {
        match l.gen {
            Gen::Z(_) => return Err(Error::MarkedLetter(l.to_string())),
            Gen::A(i) | Gen::B(i) if i > p.n => {
                return Err(Error::LetterOutOfRange {
                    letter: l.to_string(),
                    genus: p.n,
                    marked: 0,
                })
            }
            Gen::A(i) => {
                let x = NilElement::generator(p, i - 1);
                let x = if l.inverse { nil_inv(p, &x) } else { x };
                out = nil_mul(p, &out, &x);
            }
            Gen::B(_) => {}
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleImage {
    pub word: Word,
    /// Order of the class of the curve in `H_1(Sigma; Z/l)`.
    pub order: u64,
    pub image: NilElement,
    pub in_p: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapCertificate {
    pub genus: usize,
    pub ell: u64,
    pub ell_hat: u64,
    pub witness_word: Word,
    pub witness_image: NilElement,
    pub witness_central_order: u64,
    pub samples_checked: usize,
    pub samples: Vec<SampleImage>,
    pub certified: bool,
}

pub fn witness_word() -> Word {
    Word::commutator(&Word::gen(Gen::A(1)), &Word::gen(Gen::A(2)))
}

/// Checks that `phi(w^m)` lies in `P` for every sample, with `m` the order
/// of the class of `w` mod `l`, and that `phi([a1,a2])` does not. A sample
/// landing outside `P` contradicts the power identity and is an error.
pub fn integral_gap_certificate(
    genus: usize,
    ell: u64,
    samples: &[SccWord],
) -> Result<GapCertificate> {
    let p = NilParams::new(genus, ell)?;
    let st = SurfaceType::closed(genus);
    let mut images = Vec::with_capacity(samples.len());
    for s in samples {
        if s.ttype != TopType::Nonseparating {
            return Err(Error::InvalidParameter(format!(
                "sample `{}` is not nonseparating",
                s.word
            )));
        }
        let cls = base_class(&st, &s.word);
        if !is_primitive(&cls) {
            return Err(Error::InvalidParameter(format!(
                "sample `{}` has a non-primitive class",
                s.word
            )));
        }
        let content = cls.0.iter().fold(ell as i64, |g, &x| g.gcd(&x)) as u64;
        let order = ell / content;
        if order != ell {
            return Err(Error::Internal(format!(
                "primitive class of `{}` has order {order} mod {ell}",
                s.word
            )));
        }
        let x = phi(&p, &s.word)?;
        let image = nil_pow(&p, &x, order);
        let ok = in_p(&p, &image);
        if !ok {
            return Err(Error::Internal(format!(
                "phi of the {order}-th power of `{}` is not in P: power identity violated",
                s.word
            )));
        }
        images.push(SampleImage {
            word: s.word.clone(),
            order,
            image,
            in_p: ok,
        });
    }
    let ww = witness_word();
    let wi = phi(&p, &ww)?;
    let certified = !in_p(&p, &wi) && in_a(&p, &wi);
    Ok(GapCertificate {
        genus,
        ell,
        ell_hat: p.ell_hat,
        witness_word: ww,
        witness_central_order: wi.central_order(&p),
        witness_image: wi,
        samples_checked: images.len(),
        samples: images,
        certified,
    })
}

pub fn random_element(p: &NilParams, rng: &mut impl Rng, spread: i64) -> NilElement {
    NilElement {
        a: (0..p.n).map(|_| rng.gen_range(-spread..=spread)).collect(),
        c: (0..p.pairs())
            .map(|_| rng.gen_range(0..p.ell_hat))
            .collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PowerLemmaReport {
    pub n: usize,
    pub ell: u64,
    pub ell_hat: u64,
    pub trials: usize,
    pub rng_seed: u64,
    pub power_identity_passed: usize,
    pub centrality_passed: usize,
    pub divisibility: bool,
}

impl PowerLemmaReport {
    pub fn all_passed(&self) -> bool {
        self.power_identity_passed == self.trials
            && self.centrality_passed == self.trials
            && self.divisibility
    }
}

/// `(uv)^l = u^l v^l` and centrality of `u^l` on random pairs, and
/// `lh | l(l-1)/2`.
pub fn power_lemma_check(
    n: usize,
    ell: u64,
    trials: usize,
    rng_seed: u64,
) -> Result<PowerLemmaReport> {
    let p = NilParams::new(n, ell)?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut power_ok = 0;
    let mut central_ok = 0;
    for _ in 0..trials {
        let u = random_element(&p, &mut rng, 20);
        let v = random_element(&p, &mut rng, 20);
        let lhs = nil_pow(&p, &nil_mul(&p, &u, &v), ell);
        let rhs = nil_mul(&p, &nil_pow(&p, &u, ell), &nil_pow(&p, &v, ell));
        power_ok += (lhs == rhs) as usize;
        let ul = nil_pow(&p, &u, ell);
        central_ok += (nil_mul(&p, &ul, &v) == nil_mul(&p, &v, &ul)) as usize;
    }
    Ok(PowerLemmaReport {
        n,
        ell,
        ell_hat: p.ell_hat,
        trials,
        rng_seed,
        power_identity_passed: power_ok,
        centrality_passed: central_ok,
        divisibility: (ell * (ell - 1) / 2).is_multiple_of(p.ell_hat),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, ell: u64) -> NilParams {
        NilParams::new(n, ell).unwrap()
    }

    #[test]
    fn params() {
        assert_eq!(p(2, 3).ell_hat, 3);
        assert_eq!(p(2, 4).ell_hat, 2);
        assert_eq!(p(2, 6).ell_hat, 3);
        assert!(NilParams::new(2, 2).is_err());
        assert!(NilParams::new(1, 3).is_err());
    }

    #[test]
    fn multiplication_examples() {
        let q = p(2, 3);
        let x1 = NilElement::generator(&q, 0);
        let x2 = NilElement::generator(&q, 1);
        let xy = nil_mul(&q, &x1, &x2);
        assert_eq!((xy.a.clone(), xy.c.clone()), (vec![1, 1], vec![0]));
        let yx = nil_mul(&q, &x2, &x1);
        assert_eq!((yx.a.clone(), yx.c.clone()), (vec![1, 1], vec![2]));
        let comm = nil_commutator(&q, &x1, &x2);
        assert_eq!(comm, NilElement::central(&q, 0, 1, 1));
    }

    #[test]
    fn powers() {
        let q = p(2, 3);
        let x1 = NilElement::generator(&q, 0);
        let x2 = NilElement::generator(&q, 1);
        assert!(nil_pow(&q, &x1, 0).is_identity());
        let cube = nil_pow(&q, &nil_mul(&q, &x1, &x2), 3);
        assert_eq!(cube.a, vec![3, 3]);
        assert_eq!(cube.c, vec![0]);
        assert_eq!(
            cube,
            nil_mul(&q, &nil_pow(&q, &x1, 3), &nil_pow(&q, &x2, 3))
        );
        assert!(in_p(&q, &nil_pow(&q, &x1, 3)));
    }

    #[test]
    fn subgroup_membership() {
        let q = p(3, 5);
        assert!(in_p(&q, &NilElement::identity(&q)));
        let z = NilElement::central(&q, 0, 2, 1);
        assert!(in_a(&q, &z) && !in_p(&q, &z));
        let mut y = NilElement::central(&q, 1, 2, 3);
        y.a[0] = 5;
        assert!(in_a(&q, &y) && !in_p(&q, &y));
    }

    #[test]
    fn phi_examples() {
        let q = p(2, 3);
        assert!(phi(&q, &"a1 b1 A1 B1".parse().unwrap())
            .unwrap()
            .is_identity());
        assert_eq!(
            phi(&q, &witness_word()).unwrap(),
            NilElement::central(&q, 0, 1, 1)
        );
        let cube = phi(&q, &"a1 a1 a1".parse().unwrap()).unwrap();
        assert!(in_p(&q, &cube));
        assert!(phi(&q, &"z1".parse().unwrap()).is_err());
        assert!(phi(&q, &"a3".parse().unwrap()).is_err());
        assert!(phi(&q, &SurfaceType::closed(2).relator())
            .unwrap()
            .is_identity());
    }

    #[test]
    fn certificate_on_seeds() {
        let st = SurfaceType::closed(2);
        let seeds: Vec<SccWord> = crate::curves::seed_curves(&st)
            .into_iter()
            .filter(|c| c.ttype == TopType::Nonseparating)
            .collect();
        let cert = integral_gap_certificate(2, 3, &seeds).unwrap();
        assert!(cert.certified);
        assert_eq!(cert.witness_central_order, 3);
        let cert4 = integral_gap_certificate(2, 4, &seeds).unwrap();
        assert_eq!(cert4.ell_hat, 2);
        assert_eq!(cert4.witness_central_order, 2);
    }

    #[test]
    fn power_lemma_small_run() {
        let r = power_lemma_check(3, 4, 200, 1).unwrap();
        assert!(r.all_passed());
    }
}
