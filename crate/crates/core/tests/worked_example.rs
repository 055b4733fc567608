use cqs_core::{
    brute_force_presolutions, component_table, dim_difference, milnor_stevens, minimal_resolution_fan,
    normalize_cone, rdp_fan, validate_presolution, InputCone, Int, NVec, NormalForm, Violation,
};

fn nv(x: i64, y: i64) -> NVec {
    NVec::new(x, y)
}

fn sigma() -> NormalForm {
    normalize_cone(&InputCone::new(nv(-2, 3), nv(4, 3)).unwrap()).unwrap()
}

fn input_rays(nf: &NormalForm, rays: &[NVec]) -> Vec<NVec> {
    rays.iter().map(|r| nf.to_input(r)).collect()
}

#[test]
fn normal_form_of_the_example_cone() {
    let nf = sigma();
    assert_eq!((nf.n.clone(), nf.q.clone()), (Int::from(18), Int::from(11)));
    assert_eq!(nf.a_chain.to_string(), "(3,3,2,2)");
    assert_eq!(nf.b_chain.to_string(), "(2,3,4)");
    assert_eq!(nf.to_input(&nf.start_ray()), nv(-2, 3));
    assert_eq!(nf.to_input(&nf.end_ray()), nv(4, 3));
}

#[test]
fn minimal_and_rdp_fans_of_the_example_cone() {
    let nf = sigma();
    let min = minimal_resolution_fan(&nf).unwrap();
    assert_eq!(
        input_rays(&nf, &min.rays),
        vec![nv(-2, 3), nv(-1, 2), nv(0, 1), nv(1, 1), nv(4, 3)]
    );
    assert!(matches!(validate_presolution(&min).violation, Some(Violation::NotConvex { .. })));

    let rdp = rdp_fan(&nf).unwrap();
    assert_eq!(input_rays(&nf, &rdp.rays), vec![nv(-2, 3), nv(0, 1), nv(1, 1), nv(4, 3)]);
    assert!(validate_presolution(&rdp).is_ok());
}

#[test]
fn components_and_both_routes() {
    let nf = sigma();
    let report = component_table(&nf).unwrap();
    let rows: Vec<(String, i64, i64, usize)> = report
        .components
        .iter()
        .map(|c| {
            (
                c.k_chain.to_string(),
                c.milnor_toric.to_string().parse().unwrap(),
                c.dim_toric.to_string().parse().unwrap(),
                c.fan.cones.len(),
            )
        })
        .collect();
    assert_eq!(
        rows,
        vec![
            ("(1,2,2,1)".to_string(), 3, 6, 3),
            ("(1,3,1,2)".to_string(), 2, 4, 2),
            ("(3,1,2,2)".to_string(), 1, 2, 1),
        ]
    );
    for c in &report.components {
        assert_eq!(c.milnor_toric, milnor_stevens(&nf, &c.k_chain).unwrap());
        assert_eq!(c.dim_toric, c.dim_stevens);
    }
    assert_eq!(report.nu, Int::from(9));
    assert_eq!(report.h1_theta, Int::from(6));
    assert_eq!(report.dim_t1, Int::from(8));
    let (artin, sigma1) = (&report.components[0], &report.components[2]);
    assert_eq!(dim_difference(&artin.fan, &sigma1.fan).unwrap(), Int::from(4));
}

#[test]
fn ray_subset_search_finds_the_same_fans() {
    let nf = sigma();
    let report = component_table(&nf).unwrap();
    let mut expected: Vec<_> = report.components.iter().map(|c| c.fan.rays.clone()).collect();
    expected.sort();
    let found: Vec<_> = brute_force_presolutions(&nf, 20).unwrap().into_iter().map(|f| f.rays).collect();
    assert_eq!(found, expected);
}

#[test]
fn reversed_generators_give_the_dual() {
    let nf = normalize_cone(&InputCone::new(nv(4, 3), nv(-2, 3)).unwrap()).unwrap();
    assert_eq!((nf.n.clone(), nf.q.clone()), (Int::from(18), Int::from(5)));
    let report = component_table(&nf).unwrap();
    assert_eq!(report.components.len(), 3);
    assert!(report.warnings.iter().any(|w| w.contains("(2,1,3,2)")));
}
