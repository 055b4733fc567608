//! Milnor numbers and component dimensions, each computed two ways: from the
//! chains `(a, k, q)` and from the roofs of the fans.

use num_integer::Integer;
use num_traits::Zero;

use crate::cqs::{dim_t1, v_rays, NormalForm};
use crate::error::{Error, Result};
use crate::kset::{enumerate_ky, KChain};
use crate::lattice::{cf_eval, chain_string, det, ints, Int};
use crate::presolution::{build_sigma_k, validate_presolution, Fan};

/// One reduced component of the versal base space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentReport {
    pub k_chain: KChain,
    pub fan: Fan,
    pub milnor_toric: Int,
    pub milnor_stevens: Int,
    pub dim_toric: Int,
    pub dim_stevens: Int,
    pub is_artin: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularityReport {
    pub nf: NormalForm,
    pub r: usize,
    pub nu: Int,
    pub dim_t1: Int,
    pub h1_theta: Int,
    /// Lexicographic by `k_chain`.
    pub components: Vec<ComponentReport>,
    pub warnings: Vec<String>,
}

/// `Σ l(τ)/h(τ)` over the two-dimensional cones; every quotient must be exact.
pub fn roof_ratio_sum(fan: &Fan) -> Result<Int> {
    let mut total = Int::zero();
    for c in &fan.cones {
        let (ratio, rem) = c.roof.l.div_rem(&c.roof.h);
        if !rem.is_zero() {
            return Err(Error::Validation(format!(
                "roof l/h = {}/{} is not integral on <{}, {}>",
                c.roof.l, c.roof.h, c.lo, c.hi
            )));
        }
        total += ratio;
    }
    Ok(total)
}

/// `b_2(F) = Σ l/h - 1`.
pub fn milnor_toric(fan: &Fan) -> Result<Int> {
    Ok(roof_ratio_sum(fan)? - 1)
}

/// `b_2(F) = dim T^1 - 3(e-3) + #{2 < i < e-1 : q_i = 1} + 2`.
pub fn milnor_stevens(nf: &NormalForm, k: &KChain) -> Result<Int> {
    let t1 = dim_t1(nf)?;
    let e = Int::from(nf.e);
    Ok(t1 - 3 * (e - 3) + Int::from(k.unit_q_count()) + 2)
}

/// `ν = Σ det(v^{i-1}, v^{i+1})` over the interior rays of the minimal
/// resolution; checked against `Σ b_i`.
pub fn nu(nf: &NormalForm) -> Result<Int> {
    let v = v_rays(nf)?;
    let total: Int = v.windows(3).map(|t| det(&t[0], &t[2])).sum();
    let b_sum = nf.b_chain.sum();
    if total != b_sum {
        return Err(Error::consistency("ν = Σ b_i", &total, &b_sum, nf.b_chain.to_string()));
    }
    Ok(total)
}

pub fn r(nf: &NormalForm) -> usize {
    nf.r()
}

/// `h^1(Θ) = Σ (b_i - 1) = ν - r`.
pub fn h1_theta(nf: &NormalForm) -> Result<Int> {
    Ok(nu(nf)? - Int::from(nf.r()))
}

/// `dim S_k = ν - 3r + 2 Σ l/h - 2`.
pub fn dim_toric(nf: &NormalForm, fan: &Fan) -> Result<Int> {
    nf.require_non_hypersurface()?;
    if let Some(v) = validate_presolution(fan).violation {
        return Err(Error::Validation(v.to_string()));
    }
    let r = Int::from(nf.r());
    Ok(nu(nf)? - 3 * r + 2 * roof_ratio_sum(fan)? - 2)
}

/// `dim S_k = #{2 < i < e-1 : q_i = 1} + Σ (a_i - k_i)`.
pub fn dim_stevens(nf: &NormalForm, k: &KChain) -> Result<Int> {
    nf.require_non_hypersurface()?;
    let a = nf.a_chain.coeffs();
    if k.len() != a.len() {
        return Err(Error::Domain(format!("chain {k} has the wrong length for a-chain {}", nf.a_chain)));
    }
    let excess: Int = a.iter().zip(&k.k).map(|(a, k)| a - k).sum();
    Ok(Int::from(k.unit_q_count()) + excess)
}

/// `dim S_1 - dim S_2 = 2 Σ_{Σ_1} l/h - 2 Σ_{Σ_2} l/h`.
pub fn dim_difference(fan1: &Fan, fan2: &Fan) -> Result<Int> {
    if !fan1.same_cone(fan2) {
        return Err(Error::Domain("fans subdivide different cones".into()));
    }
    Ok(2 * (roof_ratio_sum(fan1)? - roof_ratio_sum(fan2)?))
}

fn check(what: &str, left: &Int, right: &Int, k: &KChain) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::consistency(what, left, right, k.to_string()))
    }
}

pub fn component(nf: &NormalForm, k: &KChain) -> Result<ComponentReport> {
    let fan = build_sigma_k(nf, k)?;
    let report = ComponentReport {
        milnor_toric: milnor_toric(&fan)?,
        milnor_stevens: milnor_stevens(nf, k)?,
        dim_toric: dim_toric(nf, &fan)?,
        dim_stevens: dim_stevens(nf, k)?,
        is_artin: k.is_rdp(),
        k_chain: k.clone(),
        fan,
    };
    check("milnor toric = stevens", &report.milnor_toric, &report.milnor_stevens, k)?;
    check("dim toric = stevens", &report.dim_toric, &report.dim_stevens, k)?;
    Ok(report)
}

/// Every component of `Y`, with all cross-route identities asserted.
pub fn component_table(nf: &NormalForm) -> Result<SingularityReport> {
    nf.require_non_hypersurface()?;
    let nu = nu(nf)?;
    let r = nf.r();
    let ri = Int::from(r);
    let h1 = h1_theta(nf)?;
    let components = enumerate_ky(&nf.a_chain)
        .iter()
        .map(|k| component(nf, k))
        .collect::<Result<Vec<_>>>()?;

    for c in &components {
        let k = &c.k_chain;
        check(
            "dim = h1(Θ) + 2 b2 - 2r",
            &c.dim_toric,
            &(&h1 + 2 * &c.milnor_toric - 2 * &ri),
            k,
        )?;
        let excess: Int = nf.a_chain.coeffs().iter().zip(&k.k).map(|(a, k)| a - k).sum();
        let sum_lh = roof_ratio_sum(&c.fan)?;
        // #{q_i = 1} + Σ(a_i - k_i) = ν - 3r + 2 Σ l/h - 2
        check(
            "unit-q count bridge",
            &Int::from(k.unit_q_count()),
            &(&nu - 3 * &ri + 2 * sum_lh - 2 - excess),
            k,
        )?;
    }

    let artin = components
        .iter()
        .find(|c| c.is_artin)
        .ok_or_else(|| Error::consistency("Artin component present", "absent", "present", "-"))?;
    for c in &components {
        if c.dim_toric > artin.dim_toric {
            return Err(Error::consistency(
                "Artin component has maximal dimension",
                &artin.dim_toric,
                &c.dim_toric,
                c.k_chain.to_string(),
            ));
        }
    }
    for c1 in &components {
        for c2 in &components {
            check(
                "dimension difference from roofs",
                &dim_difference(&c1.fan, &c2.fan)?,
                &(&c1.dim_toric - &c2.dim_toric),
                &c1.k_chain,
            )?;
        }
    }

    Ok(SingularityReport {
        r,
        nu,
        dim_t1: dim_t1(nf)?,
        h1_theta: h1,
        warnings: known_divergences(nf),
        components,
        nf: nf.clone(),
    })
}

/// Chains that appear in the literature for specific singularities but are
/// not admissible.
const QUOTED_CHAINS: &[(i64, i64, &[i64], &[i64])] = &[(18, 11, &[2, 3, 1, 2], &[1, 3, 1, 2])];

/// Notes for inputs whose commonly quoted chain data does not match `K(Y)`.
pub fn known_divergences(nf: &NormalForm) -> Vec<String> {
    let mut out = Vec::new();
    for &(n, q, quoted, admissible) in QUOTED_CHAINS {
        if nf.n != Int::from(n) {
            continue;
        }
        let (quoted, admissible) = if nf.q == Int::from(q) {
            (ints(quoted), ints(admissible))
        } else if nf.dual_q == Int::from(q) {
            let rev = |v: &[i64]| ints(&v.iter().rev().copied().collect::<Vec<_>>());
            (rev(quoted), rev(admissible))
        } else {
            continue;
        };
        let value = match cf_eval(&quoted) {
            Some(v) => v.to_string(),
            None => "undefined".to_string(),
        };
        out.push(format!(
            "chain {} quoted in the literature for {nf} is not admissible (continued fraction = {value}, not 0); \
             the admissible chain {} carries the quoted invariants",
            chain_string(&quoted),
            chain_string(&admissible),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int;
    use crate::presolution::{minimal_resolution_fan, rdp_fan, Fan};

    fn chain(v: &[i64]) -> KChain {
        KChain::new(ints(v)).unwrap()
    }

    fn y18() -> NormalForm {
        NormalForm::from_nq(18, 11).unwrap()
    }

    #[test]
    fn worked_example_milnor() {
        let nf = y18();
        for (k, m) in [(&[1, 2, 2, 1], 3), (&[3, 1, 2, 2], 1), (&[1, 3, 1, 2], 2)] {
            let k = chain(k);
            let fan = build_sigma_k(&nf, &k).unwrap();
            assert_eq!(milnor_toric(&fan).unwrap(), int(m), "{k}");
            assert_eq!(milnor_stevens(&nf, &k).unwrap(), int(m), "{k}");
        }
    }

    #[test]
    fn worked_example_dimensions() {
        let nf = y18();
        assert_eq!((nu(&nf).unwrap(), r(&nf)), (int(9), 3));
        assert_eq!(h1_theta(&nf).unwrap(), int(6));
        for (k, d) in [(&[1, 2, 2, 1], 6), (&[3, 1, 2, 2], 2), (&[1, 3, 1, 2], 4)] {
            let k = chain(k);
            let fan = build_sigma_k(&nf, &k).unwrap();
            assert_eq!(dim_toric(&nf, &fan).unwrap(), int(d), "{k}");
            assert_eq!(dim_stevens(&nf, &k).unwrap(), int(d), "{k}");
        }
    }

    #[test]
    fn dim_difference_examples() {
        let nf = y18();
        let rdp = rdp_fan(&nf).unwrap();
        let s1 = build_sigma_k(&nf, &chain(&[3, 1, 2, 2])).unwrap();
        let s2 = build_sigma_k(&nf, &chain(&[1, 3, 1, 2])).unwrap();
        assert_eq!(dim_difference(&rdp, &s2).unwrap(), int(2));
        assert_eq!(dim_difference(&rdp, &s1).unwrap(), int(4));
        assert_eq!(dim_difference(&s1, &s1).unwrap(), int(0));
        let other = rdp_fan(&NormalForm::from_nq(4, 1).unwrap()).unwrap();
        assert!(dim_difference(&rdp, &other).is_err());
    }

    #[test]
    fn small_nu_and_h1() {
        let nf = NormalForm::from_nq(2, 1).unwrap();
        assert_eq!((nu(&nf).unwrap(), r(&nf)), (int(2), 1));
        assert_eq!(h1_theta(&nf).unwrap(), int(1));
    }

    #[test]
    fn identity_fans_of_t_singularities() {
        // Y(18,11) itself: one cone, l/h = 2.
        let nf = y18();
        let id = Fan::from_rays(vec![nf.start_ray(), nf.end_ray()]).unwrap();
        assert_eq!(milnor_toric(&id).unwrap(), int(1));
        // ν - 3r + 2·2 - 2 with ν = 9, r = 3
        assert_eq!(dim_toric(&nf, &id).unwrap(), int(2));

        let wahl = NormalForm::from_nq(4, 1).unwrap();
        let id = Fan::from_rays(vec![wahl.start_ray(), wahl.end_ray()]).unwrap();
        assert_eq!(milnor_toric(&id).unwrap(), int(0));
    }

    #[test]
    fn component_table_examples() {
        let rep = component_table(&y18()).unwrap();
        let pairs: Vec<(Int, Int)> = rep
            .components
            .iter()
            .map(|c| (c.milnor_toric.clone(), c.dim_toric.clone()))
            .collect();
        assert_eq!(pairs, vec![(int(3), int(6)), (int(2), int(4)), (int(1), int(2))]);
        assert!(rep.components[0].is_artin);
        assert_eq!(rep.dim_t1, int(8));
        assert_eq!(rep.warnings.len(), 1);
        assert!(rep.warnings[0].contains("(2,3,1,2)"));
        assert!(rep.warnings[0].contains("= 1,"));

        let rep = component_table(&NormalForm::from_nq(4, 1).unwrap()).unwrap();
        let ks: Vec<String> = rep.components.iter().map(|c| c.k_chain.to_string()).collect();
        assert_eq!(ks, vec!["(1,2,1)", "(2,1,2)"]);
        let dims: Vec<Int> = rep.components.iter().map(|c| c.dim_toric.clone()).collect();
        assert_eq!(dims, vec![int(3), int(1)]);
        assert!(rep.warnings.is_empty());
    }

    #[test]
    fn dual_gets_reversed_warning() {
        let rep = component_table(&NormalForm::from_nq(18, 5).unwrap()).unwrap();
        assert_eq!(rep.warnings.len(), 1);
        assert!(rep.warnings[0].contains("(2,1,3,2)"));
    }

    #[test]
    fn hypersurface_is_rejected() {
        let nf = NormalForm::from_nq(9, 8).unwrap();
        assert!(matches!(component_table(&nf), Err(Error::HypersurfaceCase { .. })));
        assert!(milnor_stevens(&nf, &chain(&[1, 1])).is_err());
    }

    #[test]
    fn dim_toric_rejects_invalid_fans() {
        let nf = y18();
        let minimal = minimal_resolution_fan(&nf).unwrap();
        assert!(matches!(dim_toric(&nf, &minimal), Err(Error::Validation(_))));
    }

    #[test]
    fn sweep_to_sixty() {
        for n in 3..=60i64 {
            for q in 1..n - 1 {
                if num_integer::gcd(n, q) == 1 {
                    let nf = NormalForm::from_nq(n, q).unwrap();
                    component_table(&nf).unwrap_or_else(|e| panic!("Y({n},{q}): {e}"));
                }
            }
        }
    }
}
