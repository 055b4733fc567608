//! Fans over σ: the minimal resolution, the fans `Σ_k` attached to admissible
//! chains, P-resolution validation and the ray-subset search.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cqs::{classify_cone, v_rays, w_generators, ConeClass, NormalForm};
use crate::error::{Error, Result};
use crate::kset::{rdp_chain, KChain};
use crate::lattice::{chain_string, det, lattice_length, pair, Int, MVec, NVec, Rat, RatPoint};

/// Largest `n` for which [`rdp_fan`] recomputes the hull vertices by lattice
/// point enumeration and compares.
pub const HULL_CHECK_MAX_N: u32 = 4096;

/// Default cap on the number of interior rays for [`brute_force_presolutions`].
pub const DEFAULT_MAX_BRUTE_FORCE_RAYS: usize = 20;

/// The segment cut out of a cone by `<·, w> = h`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Roof {
    pub w: MVec,
    pub h: Int,
    pub l: Int,
    pub start: RatPoint,
    pub end: RatPoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cone {
    pub lo: NVec,
    pub hi: NVec,
    pub roof: Roof,
    pub class: ConeClass,
    /// Chain index `i` of `τ_i` for fans built from a chain.
    pub index: Option<usize>,
}

impl Cone {
    /// A cone with the roof through its primitive generators.
    pub fn intrinsic(lo: &NVec, hi: &NVec) -> Result<Self> {
        let class = classify_cone(lo, hi)?;
        Ok(Cone {
            lo: lo.clone(),
            hi: hi.clone(),
            roof: Roof {
                w: class.w.clone(),
                h: class.h.clone(),
                l: class.l.clone(),
                start: RatPoint::from_lattice(lo),
                end: RatPoint::from_lattice(hi),
            },
            class,
            index: None,
        })
    }
}

/// Rays in counterclockwise order from `(1,0)` to `(-q,n)` and the cones
/// between consecutive rays.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fan {
    pub rays: Vec<NVec>,
    pub cones: Vec<Cone>,
}

impl Fan {
    /// Builds a fan with intrinsic roofs from strictly ordered primitive rays.
    pub fn from_rays(rays: Vec<NVec>) -> Result<Self> {
        if rays.len() < 2 {
            return Err(Error::Degenerate("a fan needs at least two rays".into()));
        }
        let cones = rays
            .windows(2)
            .map(|p| {
                if !det(&p[0], &p[1]).is_positive() {
                    return Err(Error::Degenerate(format!(
                        "rays {} and {} are not in counterclockwise order",
                        p[0], p[1]
                    )));
                }
                Cone::intrinsic(&p[0], &p[1])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Fan { rays, cones })
    }

    pub fn interior_rays(&self) -> &[NVec] {
        &self.rays[1..self.rays.len() - 1]
    }

    pub fn same_cone(&self, other: &Fan) -> bool {
        self.rays.first() == other.rays.first() && self.rays.last() == other.rays.last()
    }
}

impl fmt::Display for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("]")
    }
}

pub fn minimal_resolution_fan(nf: &NormalForm) -> Result<Fan> {
    Fan::from_rays(v_rays(nf)?)
}

/// Checks that `k` is in `K(Y)` for this normal form.
fn check_admissible(nf: &NormalForm, k: &KChain) -> Result<()> {
    let a = nf.a_chain.coeffs();
    let fits = k.len() == a.len() && k.k.iter().zip(a).all(|(k, a)| k <= a);
    if !fits || KChain::new(k.k.clone()).as_ref() != Some(k) {
        return Err(Error::Domain(format!(
            "chain {k} is not admissible for a-chain {}",
            nf.a_chain
        )));
    }
    Ok(())
}

/// Direction of the ray through `<·, w_i> / q_i = <·, w_{i-1}> / q_{i-1}`,
/// normalized to a primitive vector inside σ.
fn roof_corner_ray(nf: &NormalForm, d: &MVec) -> Result<NVec> {
    let (dir, _) = NVec::new(-&d.y, d.x.clone()).primitive_part()?;
    if nf.contains(&dir) {
        Ok(dir)
    } else if nf.contains(&dir.neg()) {
        Ok(dir.neg())
    } else {
        Err(Error::consistency("roof corner inside σ", dir, "a ray of σ", "-"))
    }
}

fn point_at_height(v: &NVec, w: &MVec, h: &Int) -> Result<RatPoint> {
    let s = pair(v, w);
    if !s.is_positive() {
        return Err(Error::consistency("roof normal positive on ray", s, "> 0", "-"));
    }
    Ok(RatPoint::on_ray(v, &Rat::new(h.clone(), s)))
}

/// The fan `Σ_k` of an admissible chain.
///
/// Rays sit where consecutive roof lines `<·, w^i> = q_i` meet; the cone
/// `τ_i` carries the roof at height `q_i` of lattice length `(a_i - k_i) q_i`.
/// Cones with `a_i = k_i` collapse to a ray and are dropped.
pub fn build_sigma_k(nf: &NormalForm, k: &KChain) -> Result<Fan> {
    check_admissible(nf, k)?;
    let chain = k.to_string();
    let w = w_generators(nf)?;
    let wi = |i: usize| &w[i - 1];
    let e = nf.e;

    // corners[j] is the ray c_{j+2}: c_2 = (1,0), c_i for 3 <= i <= e-1, c_e = (-q,n).
    let mut corners = vec![nf.start_ray()];
    for i in 3..e {
        let d = wi(i).scale(k.q(i - 1)).sub(&wi(i - 1).scale(k.q(i)));
        corners.push(roof_corner_ray(nf, &d)?);
    }
    corners.push(nf.end_ray());

    let mut rays = vec![nf.start_ray()];
    let mut cones = Vec::new();
    for i in 2..e {
        let (lo, hi) = (&corners[i - 2], &corners[i - 1]);
        let excess = &nf.a_chain.coeffs()[i - 2] - k.k_at(i);
        let collapsed = lo == hi;
        if collapsed != excess.is_zero() {
            return Err(Error::consistency(
                format!("τ_{i} collapses iff a_i = k_i"),
                collapsed,
                excess.is_zero(),
                chain,
            ));
        }
        if collapsed {
            continue;
        }
        let h = k.q(i).clone();
        let l = &excess * &h;
        let roof = Roof {
            w: wi(i).clone(),
            start: point_at_height(lo, wi(i), &h)?,
            end: point_at_height(hi, wi(i), &h)?,
            h,
            l,
        };
        let measured = lattice_length(&roof.start, &roof.end)?;
        if measured != Rat::from_integer(roof.l.clone()) {
            return Err(Error::consistency(format!("roof length of τ_{i}"), measured, &roof.l, chain));
        }
        let class = classify_cone(lo, hi)?;
        if class.w != roof.w || class.h != roof.h || class.l != roof.l {
            return Err(Error::consistency(
                format!("intrinsic roof of τ_{i}"),
                format!("w={} h={} l={}", class.w, class.h, class.l),
                format!("w={} h={} l={}", roof.w, roof.h, roof.l),
                chain,
            ));
        }
        rays.push(hi.clone());
        cones.push(Cone {
            lo: lo.clone(),
            hi: hi.clone(),
            roof,
            class,
            index: Some(i),
        });
    }
    let fan = Fan { rays, cones };
    let report = validate_presolution(&fan);
    if let Some(v) = report.violation {
        return Err(Error::Validation(format!("Σ_{chain}: {v}")));
    }
    Ok(fan)
}

pub fn rdp_fan(nf: &NormalForm) -> Result<Fan> {
    nf.require_non_hypersurface()?;
    let rdp = KChain::new(rdp_chain(nf.e - 2)).expect("the RDP chain is a zero chain");
    let fan = build_sigma_k(nf, &rdp)?;
    if nf.n <= Int::from(HULL_CHECK_MAX_N) {
        let hull = hull_boundary(nf, false)?;
        if hull != fan.rays {
            return Err(Error::consistency(
                "RDP fan vs hull vertices",
                Fan::from_rays(fan.rays.clone())?,
                Fan::from_rays(hull)?,
                chain_string(&rdp.k),
            ));
        }
    }
    for c in &fan.cones {
        if !(c.roof.h.is_one() && c.class.is_t()) {
            return Err(Error::consistency("RDP roof height", &c.roof.h, 1, chain_string(&rdp.k)));
        }
    }
    Ok(fan)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Malformed(String),
    /// Cone `cone` is not smooth, Du Val or T.
    NotT { cone: usize, class: String },
    /// Roofs of cones `ray - 1` and `ray` do not meet on the shared ray.
    RoofGap { ray: usize },
    /// The roof path does not bend strictly at interior ray `ray`.
    NotConvex { ray: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Malformed(s) => write!(f, "malformed fan: {s}"),
            Violation::NotT { cone, class } => write!(f, "cone {cone} is not a T-cone ({class})"),
            Violation::RoofGap { ray } => write!(f, "roofs do not meet on ray {ray}"),
            Violation::NotConvex { ray } => write!(f, "roof path not strictly convex at ray {ray}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violation: Option<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks the P-resolution conditions in order: T-cones only, continuous
/// roofs, strictly convex roof path. Reports the first violation.
pub fn validate_presolution(fan: &Fan) -> ValidationReport {
    let fail = |v| ValidationReport { violation: Some(v) };
    if fan.cones.is_empty() || fan.cones.len() + 1 != fan.rays.len() {
        return fail(Violation::Malformed("ray and cone counts disagree".into()));
    }
    for (j, c) in fan.cones.iter().enumerate() {
        let on_roof = |p: &RatPoint, ray: &NVec| {
            p.pair(&c.roof.w) == Rat::from_integer(c.roof.h.clone())
                && (&p.x * Rat::from_integer(ray.y.clone()) == &p.y * Rat::from_integer(ray.x.clone()))
        };
        if c.lo != fan.rays[j] || c.hi != fan.rays[j + 1] || !on_roof(&c.roof.start, &c.lo) || !on_roof(&c.roof.end, &c.hi) {
            return fail(Violation::Malformed(format!("cone {j} does not match its rays or roof")));
        }
    }
    if let Some((j, c)) = fan.cones.iter().enumerate().find(|(_, c)| !c.class.is_t()) {
        return fail(Violation::NotT {
            cone: j,
            class: c.class.to_string(),
        });
    }
    for (j, pair_) in fan.cones.windows(2).enumerate() {
        if pair_[0].roof.end != pair_[1].roof.start {
            return fail(Violation::RoofGap { ray: j + 1 });
        }
    }
    for (j, pair_) in fan.cones.windows(2).enumerate() {
        let (a, b) = (&pair_[0].roof, &pair_[1].roof);
        // Compare <x,w_a>/h_a with <x,w_b>/h_b on the far ray of the second cone.
        let x = &pair_[1].hi;
        if pair(x, &a.w) * &b.h <= pair(x, &b.w) * &a.h {
            return fail(Violation::NotConvex { ray: j + 1 });
        }
    }
    ValidationReport { violation: None }
}

fn ceil_div(a: &Int, b: &Int) -> Int {
    -((-a).div_floor(b))
}

/// Nonzero lattice points of the triangle `conv{0, (1,0), (-q,n)}`.
pub fn triangle_points(nf: &NormalForm) -> Vec<NVec> {
    let (n, q) = (&nf.n, &nf.q);
    let mut pts = Vec::new();
    let mut y = Int::zero();
    while &y <= n {
        let lo = ceil_div(&(-q * &y), n);
        let width: Int = n - (q + 1) * &y;
        let hi = width.div_floor(n);
        let mut x = lo;
        while x <= hi {
            if !(x.is_zero() && y.is_zero()) {
                pts.push(NVec::new(x.clone(), y.clone()));
            }
            x += 1;
        }
        y += 1;
    }
    pts
}

/// The compact boundary of `conv(σ ∩ N \ {0})` from `(1,0)` to `(-q,n)`, by
/// gift wrapping over the lattice points of the triangle. With
/// `with_collinear` every boundary lattice point is returned, otherwise only
/// vertices.
pub fn hull_boundary(nf: &NormalForm, with_collinear: bool) -> Result<Vec<NVec>> {
    let pts = triangle_points(nf);
    let end = nf.end_ray();
    let mut path = vec![nf.start_ray()];
    let mut guard = 0usize;
    while path.last() != Some(&end) {
        guard += 1;
        if guard > pts.len() {
            return Err(Error::consistency("hull walk terminates", guard, pts.len(), "-"));
        }
        let cur = path.last().expect("path is nonempty").clone();
        let mut best: Option<NVec> = None;
        for p in pts.iter().filter(|p| det(&cur, p).is_positive()) {
            let Some(b) = &best else {
                best = Some(p.clone());
                continue;
            };
            let turn = det(&b.sub(&cur), &p.sub(&cur));
            let replace = match turn.cmp(&Int::zero()) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => {
                    let nearer = p.sub(&cur).content() < b.sub(&cur).content();
                    nearer == with_collinear
                }
            };
            if replace {
                best = Some(p.clone());
            }
        }
        match best {
            Some(b) => path.push(b),
            None => return Err(Error::consistency("hull walk reaches (-q,n)", &cur, &end, "-")),
        }
    }
    Ok(path)
}

/// Primitive rays strictly inside σ through lattice points of
/// `conv{0, (1,0), (-q,n)}`, counterclockwise.
pub fn dominating_rays(nf: &NormalForm) -> Vec<NVec> {
    let (s, e) = (nf.start_ray(), nf.end_ray());
    let mut rays: Vec<NVec> = triangle_points(nf)
        .into_iter()
        .filter(|p| p.is_primitive() && det(&s, p).is_positive() && det(p, &e).is_positive())
        .collect();
    rays.sort_by(|a, b| det(b, a).cmp(&Int::zero()));
    rays
}

/// Every subset of the dominating fan's interior rays that passes
/// [`validate_presolution`] with intrinsic roofs.
pub fn brute_force_presolutions(nf: &NormalForm, max_rays: usize) -> Result<Vec<Fan>> {
    nf.require_non_hypersurface()?;
    let interior = dominating_rays(nf);
    if interior.len() > max_rays {
        return Err(Error::ResourceGuard(format!(
            "{} has {} candidate rays, above the limit of {max_rays}",
            nf,
            interior.len()
        )));
    }
    let mut found = Vec::new();
    for mask in 0u64..(1u64 << interior.len()) {
        let mut rays = vec![nf.start_ray()];
        rays.extend(
            interior
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, r)| r.clone()),
        );
        rays.push(nf.end_ray());
        let fan = Fan::from_rays(rays)?;
        if validate_presolution(&fan).is_ok() {
            found.push(fan);
        }
    }
    found.sort_by(|a, b| a.rays.cmp(&b.rays));
    Ok(found)
}
