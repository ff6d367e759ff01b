use std::sync::Arc;

use proptest::prelude::*;
use qpfaff::ncpoly::Polynomial;
use qpfaff::qalgebras::QuantumMatrix;
use qpfaff::{ParameterTable, Rational};

fn algebra() -> QuantumMatrix {
    let t = ParameterTable::seeded(3, ParameterTable::lambda_for_seed(4), 4).unwrap();
    QuantumMatrix::new(Arc::new(t)).unwrap()
}

/// Random polynomial of degree up to 4 in the entries of a 3x3 matrix.
fn poly(a: &QuantumMatrix) -> impl Strategy<Value = Polynomial> {
    let gens = a.presentation().generators().to_vec();
    let term = (
        prop::collection::vec(0..gens.len(), 0..=4),
        -5i64..=5,
        1i64..=3,
    );
    prop::collection::vec(term, 0..4).prop_map(move |terms| {
        let mut f = Polynomial::zero();
        for (letters, num, den) in terms {
            let word: Vec<_> = letters.iter().map(|&k| gens[k]).collect();
            f.add_scaled(&Polynomial::word(&word), &Rational::new(num, den));
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_is_idempotent(f in poly(&algebra())) {
        let a = algebra();
        let nf = a.presentation().normal_form(&f).unwrap();
        prop_assert_eq!(a.presentation().normal_form(&nf).unwrap(), nf.clone());
        prop_assert!(nf.terms().all(|(w, _)| a.presentation().is_normal_word(w)));
    }

    #[test]
    fn normal_form_respects_products(f in poly(&algebra()), g in poly(&algebra())) {
        let a = algebra();
        let p = a.presentation();
        let direct = p.normal_form(&f.multiply(&g)).unwrap();
        let staged = p.product(&p.normal_form(&f).unwrap(), &p.normal_form(&g).unwrap()).unwrap();
        prop_assert_eq!(direct, staged);
    }

    #[test]
    fn fast_reducer_matches_reference(f in poly(&algebra())) {
        let a = algebra();
        let p = a.presentation();
        p.set_cache_enabled(false);
        let fast = p.normal_form(&f).unwrap();
        p.set_cache_enabled(true);
        prop_assert_eq!(&fast, &p.normal_form(&f).unwrap());
        prop_assert_eq!(fast, p.normal_form_reference(&f, 1_000_000).unwrap());
    }
}
