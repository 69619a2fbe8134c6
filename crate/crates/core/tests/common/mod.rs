#![allow(dead_code)]

use fmlat::{parse_lattice_expr, IntMatrix, Lattice};
use proptest::prelude::*;

/// Small even blocks; `|A|` of any sum of a few of them stays enumerable.
pub const EVEN_BLOCKS: &[&str] = &[
    "U", "U(2)", "U(3)", "U(-2)", "<2>", "<-2>", "<4>", "<-6>", "<10>", "E8(-1)", "[[2,1],[1,-4]]",
];

/// The one non-diagonal block not expressible in the expression grammar.
pub fn block(name: &str) -> Lattice {
    if name == "[[2,1],[1,-4]]" {
        Lattice::from_rows(&[vec![2, 1], vec![1, -4]]).unwrap()
    } else {
        parse_lattice_expr(name).unwrap()
    }
}

pub fn even_sum() -> impl Strategy<Value = (String, Lattice)> {
    prop::collection::vec(prop::sample::select(EVEN_BLOCKS), 1..=3).prop_map(|parts| {
        let blocks: Vec<Lattice> = parts.iter().map(|p| block(p)).collect();
        let l = Lattice::direct_sum(&blocks.iter().collect::<Vec<_>>()).unwrap();
        (parts.join("+"), l)
    })
}

/// A product of elementary matrices `I + k e_ij` and sign flips.
pub fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    let ops = prop::collection::vec((0..n, 0..n, -2i64..=2, any::<bool>()), 0..=2 * n);
    ops.prop_map(move |ops| {
        let mut p = IntMatrix::identity(n);
        for (i, j, k, flip) in ops {
            let mut e = IntMatrix::identity(n);
            if i != j {
                e[(i, j)] = k;
            } else if flip {
                e[(i, i)] = -1;
            }
            p = p.mul(&e).unwrap();
        }
        p
    })
}

/// An even sum together with a scrambled copy of it.
pub fn scrambled_pair() -> impl Strategy<Value = (String, Lattice, Lattice)> {
    even_sum().prop_flat_map(|(expr, l)| {
        let n = l.rank();
        (Just(expr), Just(l), unimodular(n))
            .prop_map(|(expr, l, p)| {
                let m = l.change_basis(&p).unwrap();
                (expr, l, m)
            })
    })
}
