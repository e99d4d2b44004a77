use proptest::prelude::*;
use raptor_bounds::galois::{phi, zero_sum_count_brute, FieldElement, FieldSpec};

const ORDERS: [u32; 9] = [2, 3, 4, 5, 7, 8, 16, 256, 251];

fn field_and_elements(n: usize) -> impl Strategy<Value = (FieldSpec, Vec<FieldElement>)> {
    proptest::sample::select(&ORDERS[..]).prop_flat_map(move |q| {
        proptest::collection::vec(0..q, n).prop_map(move |xs| {
            let f = FieldSpec::of_order(q).unwrap();
            let es = xs.iter().map(|&x| f.element(x).unwrap()).collect();
            (f, es)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn ring_axioms((f, e) in field_and_elements(3)) {
        let (a, b, c) = (e[0], e[1], e[2]);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, FieldElement::ZERO), a);
        prop_assert_eq!(f.mul(a, FieldElement::ONE), a);
        prop_assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
    }

    #[test]
    fn inverses((f, e) in field_and_elements(2)) {
        let (a, b) = (e[0], e[1]);
        if a.is_zero() {
            prop_assert!(f.inv(a).is_err());
        } else {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
            prop_assert_eq!(f.mul(f.div(b, a).unwrap(), a), b);
        }
    }

    #[test]
    fn characteristic_annihilates((f, e) in field_and_elements(1)) {
        prop_assert_eq!(f.int_scale(f.characteristic() as u64, e[0]), FieldElement::ZERO);
        // Frobenius is additive
        let p = f.characteristic();
        let frob = |x: FieldElement| (1..p).fold(x, |acc, _| f.mul(acc, x));
        let (f2, e2) = (f.clone(), e[0]);
        let y = f2.add(e2, FieldElement::ONE);
        prop_assert_eq!(frob(y), f.add(frob(e2), FieldElement::ONE));
    }
}

#[test]
fn composition_indexing_is_a_bijection() {
    for q in ORDERS {
        let f = FieldSpec::of_order(q).unwrap();
        for i in 0..q as usize {
            assert_eq!(f.index_of_element(f.element_of_index(i)), i);
        }
    }
}

#[test]
fn zero_sum_formula_matches_enumeration() {
    for q in [2u32, 3, 4, 5, 7, 8, 16] {
        let f = FieldSpec::of_order(q).unwrap();
        for l in 0..=6u32 {
            assert_eq!(phi(l, &f), zero_sum_count_brute(l, &f).unwrap(), "q = {q}, l = {l}");
        }
    }
}
