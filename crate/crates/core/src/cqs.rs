//! Cyclic quotient singularities `Y(n,q)` as cones, their normal form and
//! the generator sequences of `σ ∩ N` and `σ^∨ ∩ M`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    det, hj_expand, lattice_length, pair, primitive_normal, ChainRole, CoeffChain, Int, MVec,
    NVec, RatPoint,
};

/// A two-dimensional cone `<g1, g2>` given in arbitrary lattice coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InputCone {
    pub g1: NVec,
    pub g2: NVec,
}

impl InputCone {
    pub fn new(g1: NVec, g2: NVec) -> Result<Self> {
        for g in [&g1, &g2] {
            if !g.is_primitive() {
                return Err(Error::NonPrimitive {
                    x: g.x.to_string(),
                    y: g.y.to_string(),
                });
            }
        }
        if det(&g1, &g2).is_zero() {
            return Err(Error::Degenerate(format!("generators {g1} and {g2} are parallel")));
        }
        Ok(InputCone { g1, g2 })
    }

    /// The cone `<(1,0), (-q,n)>`.
    pub fn standard(n: &Int, q: &Int) -> Self {
        InputCone {
            g1: NVec::new(1, 0),
            g2: NVec::new(-q, n.clone()),
        }
    }
}

/// Integer 2x2 matrix acting on column vectors, `[[a, b], [c, d]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: Int,
    pub b: Int,
    pub c: Int,
    pub d: Int,
}

impl Mat2 {
    pub fn identity() -> Self {
        Mat2 {
            a: Int::one(),
            b: Int::zero(),
            c: Int::zero(),
            d: Int::one(),
        }
    }

    pub fn det(&self) -> Int {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn apply(&self, v: &NVec) -> NVec {
        NVec::new(&self.a * &v.x + &self.b * &v.y, &self.c * &v.x + &self.d * &v.y)
    }

    /// Acts on `M` by the transpose, so that `<A v, w> = <v, A^T w>`.
    pub fn apply_transpose(&self, w: &MVec) -> MVec {
        MVec::new(&self.a * &w.x + &self.c * &w.y, &self.b * &w.x + &self.d * &w.y)
    }

    /// Inverse of a unimodular matrix.
    pub fn unimodular_inverse(&self) -> Self {
        let s = self.det();
        debug_assert!(s.abs().is_one());
        Mat2 {
            a: &self.d * &s,
            b: -&self.b * &s,
            c: -&self.c * &s,
            d: &self.a * &s,
        }
    }

    pub fn rows(&self) -> [[Int; 2]; 2] {
        [
            [self.a.clone(), self.b.clone()],
            [self.c.clone(), self.d.clone()],
        ]
    }
}

/// `Y(n,q)` with its chains and the change of basis from the input cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub n: Int,
    pub q: Int,
    /// `q^-1 mod n`; the normal form of the cone with generators swapped.
    pub dual_q: Int,
    /// Sends the input `g1 ↦ (1,0)` and `g2 ↦ (-q,n)`; determinant ±1.
    pub transform: Mat2,
    /// Embedding dimension, `len(a_chain) + 2`.
    pub e: usize,
    /// Expansion of `n/(n-q)`, coefficients `a_2..a_{e-1}`.
    pub a_chain: CoeffChain,
    /// Expansion of `n/q`, coefficients `b_1..b_r`.
    pub b_chain: CoeffChain,
    pub input: InputCone,
}

impl NormalForm {
    pub fn from_nq(n: impl Into<Int>, q: impl Into<Int>) -> Result<Self> {
        let (n, q) = (n.into(), q.into());
        if n.is_one() {
            return Err(Error::SmoothCone);
        }
        if n < Int::from(2) || !q.is_positive() || q >= n {
            return Err(Error::Domain(format!("need n >= 2 and 0 < q < n, got ({n}, {q})")));
        }
        if !n.gcd(&q).is_one() {
            return Err(Error::Domain(format!("gcd({n}, {q}) != 1")));
        }
        let input = InputCone::standard(&n, &q);
        Self::assemble(n, q, Mat2::identity(), input)
    }

    fn assemble(n: Int, q: Int, transform: Mat2, input: InputCone) -> Result<Self> {
        let dual_q = mod_inverse(&q, &n);
        let a = hj_expand(&n, &(&n - &q))?;
        let b = hj_expand(&n, &q)?;
        let a_chain = CoeffChain::new(a.coeffs().to_vec(), ChainRole::A)?;
        let b_chain = CoeffChain::new(b.coeffs().to_vec(), ChainRole::B)?;
        Ok(NormalForm {
            e: a_chain.len() + 2,
            n,
            q,
            dual_q,
            transform,
            a_chain,
            b_chain,
            input,
        })
    }

    /// Number of exceptional curves in the minimal resolution.
    pub fn r(&self) -> usize {
        self.b_chain.len()
    }

    /// `q = n - 1`, i.e. `e = 3`.
    pub fn is_hypersurface(&self) -> bool {
        self.e <= 3
    }

    pub fn require_non_hypersurface(&self) -> Result<()> {
        if self.is_hypersurface() {
            Err(Error::HypersurfaceCase {
                n: self.n.to_string(),
                q: self.q.to_string(),
            })
        } else {
            Ok(())
        }
    }

    /// First generator of σ in normal coordinates, `(1,0)`.
    pub fn start_ray(&self) -> NVec {
        NVec::new(1, 0)
    }

    /// Last generator of σ in normal coordinates, `(-q,n)`.
    pub fn end_ray(&self) -> NVec {
        NVec::new(-&self.q, self.n.clone())
    }

    pub fn contains(&self, v: &NVec) -> bool {
        !det(&self.start_ray(), v).is_negative() && !det(v, &self.end_ray()).is_negative()
    }

    pub fn to_input(&self, v: &NVec) -> NVec {
        self.transform.unimodular_inverse().apply(v)
    }

    pub fn to_input_point(&self, p: &RatPoint) -> RatPoint {
        let inv = self.transform.unimodular_inverse();
        let r = |i: &Int| num_rational::BigRational::from_integer(i.clone());
        RatPoint::new(
            r(&inv.a) * &p.x + r(&inv.b) * &p.y,
            r(&inv.c) * &p.x + r(&inv.d) * &p.y,
        )
    }

    /// Pulls a functional on the normal coordinates back to the input coordinates.
    pub fn dual_to_input(&self, w: &MVec) -> MVec {
        self.transform.apply_transpose(w)
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Y({},{})", self.n, self.q)
    }
}

fn mod_inverse(q: &Int, n: &Int) -> Int {
    let eg = q.extended_gcd(n);
    let x = if eg.gcd.is_negative() { -eg.x } else { eg.x };
    x.mod_floor(n)
}

/// Finds a unimodular change of basis sending `g1 ↦ (1,0)`, `g2 ↦ (-q,n)`.
pub fn normalize_cone(c: &InputCone) -> Result<NormalForm> {
    let c = InputCone::new(c.g1.clone(), c.g2.clone())?;
    let (g1, g2) = (&c.g1, &c.g2);
    let d = det(g1, g2);
    let n = d.abs();
    if n.is_one() {
        return Err(Error::SmoothCone);
    }
    let eg = g1.x.extended_gcd(&g1.y);
    let (s, t) = if eg.gcd.is_negative() {
        (-eg.x, -eg.y)
    } else {
        (eg.x, eg.y)
    };
    let (mut c2, mut d2) = (-&g1.y, g1.x.clone());
    if d.is_negative() {
        c2 = -c2;
        d2 = -d2;
    }
    // Second row sends g2 to n; shear the first row so g2's x lands in (-n, 0].
    let x = &s * &g2.x + &t * &g2.y;
    let q = (-&x).mod_floor(&n);
    let k = (-&q - &x) / &n;
    let transform = Mat2 {
        a: &s + &k * &c2,
        b: &t + &k * &d2,
        c: c2,
        d: d2,
    };
    let (img1, img2) = (transform.apply(g1), transform.apply(g2));
    let nf = NormalForm::assemble(n, q, transform, c.clone())?;
    if img1 != nf.start_ray() || img2 != nf.end_ray() || !nf.transform.det().abs().is_one() {
        return Err(Error::consistency(
            "normalize_cone",
            format!("{img1} {img2}"),
            format!("{} {}", nf.start_ray(), nf.end_ray()),
            "-",
        ));
    }
    Ok(nf)
}

/// Generators `w^1..w^e` of `σ^∨ ∩ M`: `w^1 = (0,1)`, `w^2 = (1,1)`,
/// `w^{i+1} = a_i w^i - w^{i-1}`. Index `j` of the result holds `w^{j+1}`.
pub fn w_generators(nf: &NormalForm) -> Result<Vec<MVec>> {
    let mut w = vec![MVec::new(0, 1), MVec::new(1, 1)];
    for a in nf.a_chain.coeffs() {
        let len = w.len();
        let next = w[len - 1].scale(a).sub(&w[len - 2]);
        w.push(next);
    }
    let expected = MVec::new(nf.n.clone(), nf.q.clone());
    match w.last() {
        Some(last) if *last == expected => Ok(w),
        other => Err(Error::consistency(
            "w-sequence endpoint",
            format!("{other:?}"),
            expected,
            nf.a_chain.to_string(),
        )),
    }
}

/// Rays `v^0..v^{r+1}` of the minimal resolution: `v^0 = (1,0)`,
/// `v^1 = (0,1)`, `v^{i+1} = b_i v^i - v^{i-1}`.
pub fn v_rays(nf: &NormalForm) -> Result<Vec<NVec>> {
    let mut v = vec![NVec::new(1, 0), NVec::new(0, 1)];
    for b in nf.b_chain.coeffs() {
        let len = v.len();
        let next = v[len - 1].scale(b).sub(&v[len - 2]);
        v.push(next);
    }
    if v.last() != Some(&nf.end_ray()) {
        return Err(Error::consistency(
            "v-sequence endpoint",
            format!("{:?}", v.last()),
            nf.end_ray(),
            nf.b_chain.to_string(),
        ));
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClassTag {
    Smooth,
    /// `A_m`, a height-one roof of length `m + 1 >= 2`.
    DuValA(Int),
    /// Roof height divides roof length, height at least two.
    T,
    General,
}

/// Classification of the two-dimensional cone `<u, u'>` via the roof
/// through its primitive generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConeClass {
    pub tag: ClassTag,
    /// Primitive roof normal, positive on the cone.
    pub w: MVec,
    pub h: Int,
    pub l: Int,
}

impl ConeClass {
    /// Smooth, Du Val or T: the singularities allowed on a P-resolution.
    pub fn is_t(&self) -> bool {
        !matches!(self.tag, ClassTag::General)
    }

    /// Milnor number `l/h - 1` of the Q-Gorenstein smoothing, for T-type cones.
    pub fn milnor(&self) -> Option<Int> {
        self.is_t().then(|| &self.l / &self.h - 1)
    }
}

impl fmt::Display for ConeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.tag {
            ClassTag::Smooth => write!(f, "smooth"),
            ClassTag::DuValA(m) => write!(f, "A{m}"),
            ClassTag::T => write!(f, "T(h={}, l={})", self.h, self.l),
            ClassTag::General => write!(f, "general(h={}, l={})", self.h, self.l),
        }
    }
}

pub fn classify_cone(u: &NVec, u2: &NVec) -> Result<ConeClass> {
    for g in [u, u2] {
        if !g.is_primitive() {
            return Err(Error::NonPrimitive {
                x: g.x.to_string(),
                y: g.y.to_string(),
            });
        }
    }
    let dt = det(u, u2).abs();
    if dt.is_zero() {
        return Err(Error::Degenerate(format!("cone <{u}, {u2}> is not two-dimensional")));
    }
    let d = u2.sub(u);
    let l = lattice_length(&RatPoint::from_lattice(u), &RatPoint::from_lattice(u2))?.to_integer();
    let w = primitive_normal(&d, u)?;
    let h = pair(u, &w);
    if &l * &h != dt {
        return Err(Error::consistency(
            "det = l*h",
            dt,
            format!("{l}*{h}"),
            format!("<{u},{u2}>"),
        ));
    }
    let tag = if dt.is_one() {
        ClassTag::Smooth
    } else if h.is_one() {
        ClassTag::DuValA(&l - 1)
    } else if l.is_multiple_of(&h) {
        ClassTag::T
    } else {
        ClassTag::General
    };
    Ok(ConeClass { tag, w, h, l })
}

/// `dim T^1 = Σ a_i - 2`, valid for `e >= 4`.
pub fn dim_t1(nf: &NormalForm) -> Result<Int> {
    nf.require_non_hypersurface()?;
    Ok(nf.a_chain.sum() - 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{cf_eval, int, ints, Rat};

    fn nv(x: i64, y: i64) -> NVec {
        NVec::new(x, y)
    }

    fn cone(x1: i64, y1: i64, x2: i64, y2: i64) -> InputCone {
        InputCone::new(nv(x1, y1), nv(x2, y2)).unwrap()
    }

    #[test]
    fn worked_example_normal_form() {
        let nf = normalize_cone(&cone(-2, 3, 4, 3)).unwrap();
        assert_eq!((nf.n.clone(), nf.q.clone()), (int(18), int(11)));
        assert_eq!(nf.a_chain.coeffs(), ints(&[3, 3, 2, 2]));
        assert_eq!(nf.b_chain.coeffs(), ints(&[2, 3, 4]));
        assert_eq!(nf.e, 6);
        assert_eq!(nf.r(), 3);
        // [[1,1],[3,2]] followed by the shear x -> x - y.
        assert_eq!(nf.transform.rows(), [[int(-2), int(-1)], [int(3), int(2)]]);
        assert_eq!(nf.to_input(&nv(-1, 2)), nv(0, 1));
    }

    #[test]
    fn standard_input_is_identity() {
        let nf = normalize_cone(&cone(1, 0, -11, 18)).unwrap();
        assert_eq!((nf.n.clone(), nf.q.clone()), (int(18), int(11)));
        assert_eq!(nf.transform, Mat2::identity());
    }

    #[test]
    fn reversed_generators_give_dual() {
        let nf = normalize_cone(&cone(4, 3, -2, 3)).unwrap();
        assert_eq!((nf.n.clone(), nf.q.clone()), (int(18), int(5)));
        assert_eq!(nf.dual_q, int(11));
        assert_eq!((int(5) * int(11)) % int(18), int(1));
    }

    #[test]
    fn normalize_rejects_bad_cones() {
        assert_eq!(normalize_cone(&InputCone::standard(&int(1), &int(0))), Err(Error::SmoothCone));
        assert!(matches!(InputCone::new(nv(2, 4), nv(1, 0)), Err(Error::NonPrimitive { .. })));
        assert!(matches!(InputCone::new(nv(1, 2), nv(-1, -2)), Err(Error::Degenerate(_))));
        assert_eq!(normalize_cone(&cone(0, 1, 1, 0)), Err(Error::SmoothCone));
    }

    #[test]
    fn w_generators_examples() {
        let nf = NormalForm::from_nq(18, 11).unwrap();
        let w = w_generators(&nf).unwrap();
        assert_eq!(w.len(), 6);
        assert_eq!(w[0], MVec::new(0, 1));
        assert_eq!(w[5], MVec::new(18, 11));
        for i in 1..w.len() - 1 {
            let a = &nf.a_chain.coeffs()[i - 1];
            assert_eq!(w[i - 1].add(&w[i + 1]), w[i].scale(a));
        }

        let nf = NormalForm::from_nq(4, 1).unwrap();
        assert_eq!(nf.a_chain.coeffs(), ints(&[2, 2, 2]));
        let w = w_generators(&nf).unwrap();
        let expect: Vec<MVec> = (0..5).map(|i| MVec::new(i, 1)).collect();
        assert_eq!(w, expect);
    }

    #[test]
    fn v_rays_examples() {
        let nf = NormalForm::from_nq(18, 11).unwrap();
        let v = v_rays(&nf).unwrap();
        assert_eq!(v, vec![nv(1, 0), nv(0, 1), nv(-1, 2), nv(-3, 5), nv(-11, 18)]);
        for pair in v.windows(2) {
            assert_eq!(det(&pair[0], &pair[1]), int(1));
        }
        for i in 1..v.len() - 1 {
            assert_eq!(det(&v[i - 1], &v[i + 1]), nf.b_chain.coeffs()[i - 1]);
        }
        let v = v_rays(&NormalForm::from_nq(2, 1).unwrap()).unwrap();
        assert_eq!(v, vec![nv(1, 0), nv(0, 1), nv(-1, 2)]);
    }

    #[test]
    fn classify_cone_examples() {
        let wahl = classify_cone(&nv(1, 0), &nv(-1, 4)).unwrap();
        assert_eq!(wahl.tag, ClassTag::T);
        assert_eq!((wahl.h.clone(), wahl.l.clone()), (int(2), int(2)));
        assert_eq!(wahl.w, MVec::new(2, 1));
        assert_eq!(wahl.milnor(), Some(int(0)));

        let a1 = classify_cone(&nv(0, 1), &nv(2, 1)).unwrap();
        assert_eq!(a1.tag, ClassTag::DuValA(int(1)));

        let y52 = classify_cone(&nv(1, 0), &nv(-2, 5)).unwrap();
        assert_eq!(y52.tag, ClassTag::General);
        assert_eq!((y52.h.clone(), y52.l.clone()), (int(5), int(1)));
        assert_eq!(y52.milnor(), None);

        let smooth = classify_cone(&nv(1, 0), &nv(0, 1)).unwrap();
        assert_eq!(smooth.tag, ClassTag::Smooth);

        assert!(classify_cone(&nv(2, 0), &nv(0, 1)).is_err());
        assert!(classify_cone(&nv(1, 1), &nv(-1, -1)).is_err());
    }

    #[test]
    fn worked_example_is_t() {
        let c = classify_cone(&nv(1, 0), &nv(-11, 18)).unwrap();
        assert_eq!(c.tag, ClassTag::T);
        assert_eq!((c.h, c.l), (int(3), int(6)));
        assert_eq!(c.w, MVec::new(3, 2));
    }

    #[test]
    fn dim_t1_examples() {
        assert_eq!(dim_t1(&NormalForm::from_nq(18, 11).unwrap()).unwrap(), int(8));
        assert_eq!(dim_t1(&NormalForm::from_nq(4, 1).unwrap()).unwrap(), int(4));
        let err = dim_t1(&NormalForm::from_nq(7, 6).unwrap()).unwrap_err();
        assert!(matches!(err, Error::HypersurfaceCase { .. }));
        assert!(err.to_string().contains("versal base irreducible"));
    }

    /// Non-smooth cyclic quotients `1/(d m^2)(1, d m a - 1)` with `gcd(m, a) = 1`
    /// and `0 < a < m` (or `a = 1` when `m = 1`): the T-family in its usual
    /// parametrization, enumerated directly.
    fn t_family(max_n: i64) -> std::collections::BTreeSet<(i64, i64)> {
        let mut out = std::collections::BTreeSet::new();
        for m in 1..=max_n {
            for d in 1..=max_n {
                let n = d * m * m;
                if n > max_n || n < 2 {
                    continue;
                }
                for a in 1..=m.max(1) {
                    if num_integer::gcd(a, m) != 1 || (m > 1 && a == m) {
                        continue;
                    }
                    let q = (d * m * a - 1).rem_euclid(n);
                    if q > 0 {
                        out.insert((n, q));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn t_test_matches_parametrized_family() {
        let family = t_family(60);
        for n in 2..=60i64 {
            for q in 1..n {
                if num_integer::gcd(n, q) != 1 {
                    continue;
                }
                let c = classify_cone(&nv(1, 0), &nv(-q, n)).unwrap();
                assert_eq!(c.is_t(), family.contains(&(n, q)), "Y({n},{q}) classified {c}");
            }
        }
        assert!(!family.contains(&(5, 2)) && !family.contains(&(5, 3)));
    }

    #[test]
    fn chain_invariants_and_duality() {
        for n in 2..=100i64 {
            for q in 1..n {
                if num_integer::gcd(n, q) != 1 {
                    continue;
                }
                let nf = NormalForm::from_nq(n, q).unwrap();
                assert_eq!(cf_eval(nf.a_chain.coeffs()), Some(Rat::new(int(n), int(n - q))));
                assert_eq!(cf_eval(nf.b_chain.coeffs()), Some(Rat::new(int(n), int(q))));
                assert_eq!(w_generators(&nf).unwrap().len(), nf.e);
                let v = v_rays(&nf).unwrap();
                for i in 1..v.len() - 1 {
                    assert_eq!(det(&v[i - 1], &v[i + 1]), nf.b_chain.coeffs()[i - 1]);
                    assert!(nf.contains(&v[i]));
                }

                let swapped = normalize_cone(&InputCone::new(nf.end_ray(), nf.start_ray()).unwrap()).unwrap();
                assert_eq!(swapped.q, nf.dual_q);
                assert_eq!(swapped.a_chain, nf.a_chain.reversed());
                assert_eq!(swapped.b_chain, nf.b_chain.reversed());
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn unimodular() -> impl Strategy<Value = Mat2> {
            (-6i64..6, -6i64..6, -6i64..6, any::<bool>()).prop_map(|(a, b, c, flip)| {
                // [[1,a],[0,1]] [[1,0],[b,1]] [[1,c],[0,1]], optionally reflected.
                let m = [[1 + a * b, c * (1 + a * b) + a], [b, b * c + 1]];
                let s = if flip { -1 } else { 1 };
                Mat2 { a: int(m[0][0]), b: int(m[0][1]), c: int(s * m[1][0]), d: int(s * m[1][1]) }
            })
        }

        proptest! {
            #[test]
            fn classify_is_unimodular_invariant(
                n in 2i64..80, q in 1i64..80, m in unimodular(),
            ) {
                prop_assume!(q < n && num_integer::gcd(n, q) == 1);
                let (u, u2) = (nv(1, 0), nv(-q, n));
                let base = classify_cone(&u, &u2).unwrap();
                let moved = classify_cone(&m.apply(&u), &m.apply(&u2)).unwrap();
                prop_assert_eq!(&base.tag, &moved.tag);
                prop_assert_eq!(&base.h, &moved.h);
                prop_assert_eq!(&base.l, &moved.l);
            }

            #[test]
            fn normal_form_of_moved_cone(n in 2i64..80, q in 1i64..80, m in unimodular()) {
                prop_assume!(q < n && num_integer::gcd(n, q) == 1);
                let c = InputCone::new(m.apply(&nv(1, 0)), m.apply(&nv(-q, n))).unwrap();
                let nf = normalize_cone(&c).unwrap();
                prop_assert_eq!(nf.n, int(n));
                prop_assert_eq!(nf.q, int(q));
            }
        }
    }
}
