mod common;

use common::{even_sum, scrambled_pair, unimodular};
use fmlat::smith::verify;
use fmlat::{
    discriminant_group, is_primitive_sublattice, orthogonal_complement, parse_lattice_expr, smith_normal_form,
    IntMatrix, Lattice, SublatticeSpec,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sum_multiplies_det_and_adds_signature((_, a) in even_sum(), (_, b) in even_sum()) {
        let s = Lattice::direct_sum(&[&a, &b]).unwrap();
        prop_assert_eq!(s.det(), a.det() * b.det());
        prop_assert_eq!(s.rank(), a.rank() + b.rank());
        let (sa, sb, ss) = (a.signature(), b.signature(), s.signature());
        prop_assert_eq!(ss.positive, sa.positive + sb.positive);
        prop_assert_eq!(ss.negative, sa.negative + sb.negative);
    }

    #[test]
    fn scaling_scales_det_and_flips_signature((_, l) in even_sum(), k in prop::sample::select(vec![-3i64, -2, -1, 2, 3])) {
        let s = l.scaled(k).unwrap();
        prop_assert_eq!(s.det(), l.det() * k.pow(l.rank() as u32));
        prop_assert_eq!(s.gram().determinant().unwrap(), s.det());
        let (a, b) = (l.signature(), s.signature());
        if k > 0 {
            prop_assert_eq!(a, b);
        } else {
            prop_assert_eq!((a.positive, a.negative), (b.negative, b.positive));
        }
    }

    #[test]
    fn basis_change_preserves_invariants((_, l, m) in scrambled_pair()) {
        prop_assert_eq!(l.det(), m.det());
        prop_assert_eq!(l.signature(), m.signature());
        prop_assert_eq!(l.is_even(), m.is_even());
        let (a, b) = (discriminant_group(&l).unwrap(), discriminant_group(&m).unwrap());
        prop_assert_eq!(a.cyclic_orders, b.cyclic_orders);
    }

    #[test]
    fn discriminant_order_is_abs_det((_, _, m) in scrambled_pair()) {
        let g = discriminant_group(&m).unwrap();
        prop_assert_eq!(g.order(), m.det().unsigned_abs());
        for w in g.cyclic_orders.windows(2) {
            prop_assert_eq!(w[1] % w[0], 0);
        }
    }

    #[test]
    fn snf_contract(rows in prop::collection::vec(prop::collection::vec(-30i64..=30, 4), 1..=5)) {
        let m = IntMatrix::from_rows(&rows).unwrap();
        let s = smith_normal_form(&m).unwrap();
        prop_assert!(verify(&m, &s).is_ok(), "{:?}", verify(&m, &s));
        for v in s.kernel_basis().unwrap() {
            prop_assert!(m.mul_vec(&v).unwrap().iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn snf_is_basis_independent(rows in prop::collection::vec(prop::collection::vec(-9i64..=9, 3), 3), p in unimodular(3), q in unimodular(3)) {
        let m = IntMatrix::from_rows(&rows).unwrap();
        let n = p.mul(&m).unwrap().mul(&q).unwrap();
        prop_assert_eq!(smith_normal_form(&m).unwrap().diagonal, smith_normal_form(&n).unwrap().diagonal);
    }

    /// In the unimodular lattice U^3 + E8(-1), the complement of a primitive
    /// nondegenerate sublattice is primitive and the ranks add up.
    #[test]
    fn complement_rank_and_primitivity(gens in prop::collection::vec(prop::collection::vec(-2i64..=2, 14), 1..=3)) {
        let ambient = parse_lattice_expr("U+U+U+E8(-1)").unwrap();
        let Ok(spec) = SublatticeSpec::new(ambient.clone(), gens) else { return Ok(()) };
        let Ok(prim) = is_primitive_sublattice(&spec) else { return Ok(()) };
        let sat = SublatticeSpec::new(ambient.clone(), prim.saturation.clone()).unwrap();
        prop_assert!(is_primitive_sublattice(&sat).unwrap().primitive);
        let induced = Lattice::from_gram_allow_degenerate(sat.induced_gram().unwrap()).unwrap();
        let c = orthogonal_complement(&sat).unwrap();
        prop_assert_eq!(c.rank() + sat.generators.len(), 14);
        if c.rank() > 0 {
            let cspec = SublatticeSpec::new(ambient, c.basis.clone()).unwrap();
            prop_assert!(is_primitive_sublattice(&cspec).unwrap().primitive);
            if !induced.is_degenerate() {
                // |A| of a primitive sublattice and its complement agree in a unimodular lattice
                let lc = c.lattice.unwrap();
                prop_assert_eq!(lc.det().abs(), induced.det().abs());
            }
        }
    }
}
