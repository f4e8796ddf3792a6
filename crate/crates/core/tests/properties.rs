use num_complex::Complex64;
use opnodal::atlas::{self, ChartPoint, Params, PainleveType};
use opnodal::flow::{self, IntegratorConfig, PathSpec};
use opnodal::riccati::{self, UPoly};
use opnodal::rootlat::{self, AffineType, RootSystemType, SimpleType};
use proptest::prelude::*;

type C = Complex64;

fn simple() -> impl Strategy<Value = SimpleType> {
    prop_oneof![
        (1u32..9).prop_map(SimpleType::a),
        (4u32..9).prop_map(SimpleType::d),
        (6u32..9).prop_map(SimpleType::e),
    ]
}

fn complex(r: f64) -> impl Strategy<Value = C> {
    (-r..r, -r..r).prop_map(|(a, b)| C::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn type_strings_round_trip(parts in prop::collection::vec(simple(), 0..4)) {
        let t = RootSystemType::from_components(parts);
        prop_assert_eq!(t.to_string().parse::<RootSystemType>().unwrap(), t.clone());
        prop_assert_eq!(t.exponent_form().parse::<RootSystemType>().unwrap(), t);
    }

    #[test]
    fn embeddings_classify_back(parts in prop::collection::vec(simple(), 1..4)) {
        let t = RootSystemType::from_components(parts);
        match rootlat::find_embedding(&t) {
            Ok(e) => prop_assert_eq!(rootlat::classify_gram(&e.gram()).unwrap(), t),
            Err(_) => prop_assert!(rootlat::table2().rows.iter().all(|r| !r.types.contains(&t))),
        }
    }

    #[test]
    fn transitions_round_trip(k in 0usize..3, params in prop::collection::vec(complex(1.0), 4), t in complex(1.5),
                              x in complex(1.5), y in complex(1.5)) {
        let pt = PainleveType::full_atlas()[k];
        prop_assume!(pt.punctures().iter().all(|&z| (t - z).norm() > 0.1));
        prop_assume!(x.norm() > 0.2 && y.norm() > 0.2);
        let p = Params::new(pt, params[..pt.param_names().len()].to_vec()).unwrap();
        for i in atlas::charts(pt).unwrap() {
            for j in atlas::neighbors(pt, i) {
                let Ok((a, b)) = atlas::transition(&p, i, j, t, x, y) else { continue };
                if a.norm().max(b.norm()) > 1e2 {
                    continue;
                }
                prop_assert!(atlas::round_trip_error(&p, i, j, t, x, y).unwrap() < 1e-12);
                prop_assert!(atlas::consistency_residual(&p, i, j, t, x, y).unwrap() < 1e-9);
            }
        }
    }

    #[test]
    fn configurations_are_complement_types(k in 0usize..3, bits in prop::collection::vec(0u8..3, 4)) {
        let pt = [PainleveType::D4t, PainleveType::E6t, PainleveType::D5t][k];
        let values: Vec<f64> = bits[..pt.param_names().len()].iter().map(|&b| b as f64 - 1.0).collect();
        let r = riccati::config_at_params(&Params::real(pt, &values).unwrap()).unwrap();
        if !r.root_type.is_empty() {
            let allowed = rootlat::complement_types(pt.short_name().parse::<AffineType>().unwrap()).unwrap();
            prop_assert!(allowed.contains(&r.root_type), "{:?} at {:?}", r.root_type, values);
        }
    }

    #[test]
    fn polynomial_roots_are_recovered(roots in prop::collection::vec(complex(2.0), 1..5)) {
        prop_assume!(roots.iter().enumerate().all(|(i, a)| roots[..i].iter().all(|b| (a - b).norm() > 0.1)));
        let p = roots.iter().fold(UPoly::constant(C::new(1.0, 0.0)), |acc, &r| acc.mul(&UPoly::new(vec![-r, C::new(1.0, 0.0)])));
        let found = p.roots();
        prop_assert_eq!(found.len(), roots.len());
        for r in &roots {
            prop_assert!(found.iter().any(|z| (z - r).norm() < 1e-8), "{} not in {:?}", r, found);
        }
    }

    #[test]
    fn riccati_methods_agree(x0 in complex(0.5), t0 in complex(1.0)) {
        let l = riccati::find_locus(PainleveType::E7t, "C").unwrap();
        let ode = riccati::reduce(l).instantiate(&Params::real(PainleveType::E7t, &[-0.5]).unwrap()).unwrap();
        let path = PathSpec::new(vec![t0, t0 + 0.3]).unwrap();
        let cfg = IntegratorConfig::default();
        let a = flow::integrate_riccati(&ode, &path, x0, &cfg).unwrap();
        let b = riccati::solve_via_linear(&ode, x0, &path, &cfg).unwrap();
        let end = t0 + 0.3;
        let (va, vb) = (flow::riccati_value(a.sample_at(end).unwrap()), flow::riccati_value(b.sample_at(end).unwrap()));
        prop_assert!((va - vb).norm() < 1e-6 * (1.0 + va.norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn integration_is_deterministic(y0 in complex(1.0), t1 in 0.2f64..1.0) {
        let p = Params::real(PainleveType::E6t, &[0.3, -0.2]).unwrap();
        let path = PathSpec::real(&[0.0, t1]).unwrap();
        let init = ChartPoint::new(0, C::new(0.1, 0.0), y0);
        let a = flow::integrate_atlas(&p, &path, init, &IntegratorConfig::default()).unwrap();
        let b = flow::integrate_atlas(&p, &path, init, &IntegratorConfig::default()).unwrap();
        prop_assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn on_locus_flow_stays_on_locus(y0 in complex(0.8), kinf in -1.0f64..1.0) {
        let p = Params::real(PainleveType::E6t, &[0.0, kinf]).unwrap();
        let path = PathSpec::real(&[0.0, 0.3]).unwrap();
        let tr = flow::integrate_atlas(&p, &path, ChartPoint::new(0, C::new(0.0, 0.0), y0), &IntegratorConfig::default()).unwrap();
        prop_assert!(tr.samples.iter().filter(|s| s.chart == 0).all(|s| s.x.norm() < 1e-12));
    }
}
