//! The discriminant group `A_L = L*/L` and its forms `b_L`, `q_L`.
//!
//! With `U G V = D` the Smith form of the Gram matrix, `L* = G^{-1} Z^n` has basis
//! `V e_i / d_i`, so the nontrivial factors `Z/d_i` of `A_L` are generated by the
//! lifts `x_i = V e_i / d_i`. A dual vector `y` has coordinates `d_i (V^{-1} y)_i`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fqf::FiniteQuadraticForm;
use crate::lattice::Lattice;
use crate::matrix::IntMatrix;
use crate::rational::{frac_string, mod1, mod2, Rational};
use crate::smith::smith_normal_form;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantGroup {
    /// Orders `d_i > 1`, a divisibility chain.
    pub cyclic_orders: Vec<u64>,
    /// Generator lifts in `L* ⊆ L ⊗ Q`, in lattice coordinates.
    pub generator_lifts: Vec<Vec<Rational>>,
    /// Lift numerators: columns of `V`, reduced mod `d_i`.
    lift_columns: Vec<Vec<i64>>,
    /// `(U_i mod d_i) G`; pairs with a dual vector to give `d_i` times its
    /// `i`-th coordinate, up to multiples of `d_i`.
    coordinate_rows: Vec<Vec<i64>>,
}

impl DiscriminantGroup {
    pub fn order(&self) -> u64 {
        self.cyclic_orders.iter().product()
    }

    /// `A_L` coordinates of a dual vector given as `numerators / den`.
    pub fn coordinates(&self, numerators: &[i64], den: i64) -> Result<Vec<u64>> {
        self.coordinate_rows
            .iter()
            .zip(&self.cyclic_orders)
            .map(|(row, &d)| {
                let dot: i128 = row.iter().zip(numerators).map(|(&a, &b)| a as i128 * b as i128).sum();
                if dot % den as i128 != 0 {
                    return Err(Error::invalid("vector does not lie in the dual lattice"));
                }
                Ok((dot / den as i128).rem_euclid(d as i128) as u64)
            })
            .collect()
    }

    /// Action of an isometry `M` (columns are images of basis vectors) on `A_L`,
    /// as a matrix on generator coordinates.
    pub fn induced_action(&self, m: &IntMatrix) -> Result<IntMatrix> {
        let k = self.cyclic_orders.len();
        let mut out = IntMatrix::zeros(k, k);
        for j in 0..k {
            let image = m.mul_vec(&self.lift_columns[j])?;
            let coords = self.coordinates(&image, self.cyclic_orders[j] as i64)?;
            for (i, c) in coords.into_iter().enumerate() {
                out[(i, j)] = c as i64;
            }
        }
        Ok(out)
    }
}

impl Serialize for DiscriminantGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json {
            cyclic_orders: Vec<u64>,
            generator_lifts: Vec<Vec<String>>,
        }
        Json {
            cyclic_orders: self.cyclic_orders.clone(),
            generator_lifts: self
                .generator_lifts
                .iter()
                .map(|v| v.iter().map(frac_string).collect())
                .collect(),
        }
        .serialize(s)
    }
}

/// Symmetric residues in `(-d/2, d/2]`.
fn reduce_mod(v: &[BigInt], d: i64) -> Vec<i64> {
    let m = BigInt::from(d);
    v.iter()
        .map(|x| {
            let r = x.mod_floor(&m).to_i64().expect("residue below modulus");
            if 2 * r > d { r - d } else { r }
        })
        .collect()
}

pub fn discriminant_group(l: &Lattice) -> Result<DiscriminantGroup> {
    l.require_nondegenerate()?;
    let s = smith_normal_form(l.gram())?;
    let mut cyclic_orders = Vec::new();
    let mut lift_columns = Vec::new();
    let mut coordinate_rows = Vec::new();
    let mut generator_lifts = Vec::new();
    for (i, &d) in s.diagonal.iter().enumerate() {
        if d > 1 {
            // Lifts only matter modulo L, and the coordinate functional
            // `d_i (V^{-1} x)_i = (U G x)_i` only modulo d_i, so both are
            // reduced to keep the raw transforms' (possibly huge) entries out.
            let col = reduce_mod(&s.right.column(i), d);
            let u = reduce_mod(s.left.row(i), d);
            let row = (0..l.rank())
                .map(|j| {
                    let mut acc: i64 = 0;
                    for (k, &uk) in u.iter().enumerate() {
                        let t = uk.checked_mul(l.gram()[(k, j)]).ok_or(Error::Overflow("coordinate row"))?;
                        acc = acc.checked_add(t).ok_or(Error::Overflow("coordinate row"))?;
                    }
                    Ok(acc)
                })
                .collect::<Result<Vec<i64>>>()?;
            generator_lifts.push(col.iter().map(|&v| Rational::new(v, d)).collect());
            lift_columns.push(col);
            coordinate_rows.push(row);
            cyclic_orders.push(d as u64);
        }
    }
    Ok(DiscriminantGroup {
        cyclic_orders,
        generator_lifts,
        lift_columns,
        coordinate_rows,
    })
}

fn generator_values(l: &Lattice, g: &DiscriminantGroup) -> Result<(Vec<Rational>, Vec<Vec<Rational>>)> {
    let k = g.cyclic_orders.len();
    let mut q = Vec::with_capacity(k);
    let mut b = vec![vec![Rational::from_integer(0); k]; k];
    for i in 0..k {
        let di = g.cyclic_orders[i] as i64;
        for j in 0..k {
            let dj = g.cyclic_orders[j] as i64;
            let num = l.pair(&g.lift_columns[i], &g.lift_columns[j])?;
            let den = di.checked_mul(dj).ok_or(Error::Overflow("discriminant form"))?;
            b[i][j] = mod1(Rational::new(num, den));
            if i == j {
                q.push(mod2(Rational::new(num, den)));
            }
        }
    }
    Ok((q, b))
}

/// `q_L` on the canonical generators of [`discriminant_group`].
pub fn discriminant_form(l: &Lattice) -> Result<FiniteQuadraticForm> {
    l.require_even()?;
    let g = discriminant_group(l)?;
    let (q, b) = generator_values(l, &g)?;
    FiniteQuadraticForm::new(&g.cyclic_orders, &q, &b)
}

/// `b_L` alone, available for odd lattices.
pub fn discriminant_bilinear(l: &Lattice) -> Result<(DiscriminantGroup, Vec<Vec<Rational>>)> {
    let g = discriminant_group(l)?;
    let (_, b) = generator_values(l, &g)?;
    Ok((g, b))
}

/// `p`-primary data of `A_L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PAnalysis {
    pub p: u64,
    pub is_p_elementary: bool,
    /// `a` with `A_L ≅ (Z/p)^a`, when p-elementary.
    pub a: Option<usize>,
    /// Number of cyclic factors of the `p`-part.
    pub l_p: usize,
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn p_analysis_of(group: &DiscriminantGroup, p: u64) -> Result<PAnalysis> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let l_p = group.cyclic_orders.iter().filter(|&&d| d % p == 0).count();
    let is_p_elementary = group.cyclic_orders.iter().all(|&d| d == p);
    Ok(PAnalysis {
        p,
        is_p_elementary,
        a: is_p_elementary.then_some(group.cyclic_orders.len()),
        l_p,
    })
}

pub fn p_analysis(l: &Lattice, p: u64) -> Result<PAnalysis> {
    p_analysis_of(&discriminant_group(l)?, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_lattice_expr;

    fn lat(e: &str) -> Lattice {
        parse_lattice_expr(e).unwrap()
    }

    #[test]
    fn groups_of_named_lattices() {
        assert_eq!(discriminant_group(&lat("U(2)")).unwrap().cyclic_orders, vec![2, 2]);
        assert_eq!(discriminant_group(&lat("U(3)")).unwrap().cyclic_orders, vec![3, 3]);
        assert_eq!(discriminant_group(&lat("E8(-2)")).unwrap().cyclic_orders, vec![2; 8]);
        assert!(discriminant_group(&lat("U+E8")).unwrap().cyclic_orders.is_empty());
        // F_3 = U(2)+E8(-2)+<-6>: (Z/2)^10 + Z/6 as a chain
        let g = discriminant_group(&lat("U(2)+E8(-2)+<-6>")).unwrap();
        let mut expected = vec![2u64; 10];
        expected.push(6);
        assert_eq!(g.cyclic_orders, expected);
        assert_eq!(g.order(), 1024 * 6);
    }

    #[test]
    fn lifts_lie_in_dual() {
        let l = lat("U(2)+<-12>");
        let g = discriminant_group(&l).unwrap();
        for (lift, &d) in g.generator_lifts.iter().zip(&g.cyclic_orders) {
            for e in 0..l.rank() {
                let mut basis = vec![0; l.rank()];
                basis[e] = 1;
                let pairing: Rational = lift
                    .iter()
                    .zip(l.gram().mul_vec(&basis).unwrap())
                    .map(|(x, gi)| x * Rational::from_integer(gi))
                    .sum();
                assert!(pairing.is_integer());
            }
            assert!(lift.iter().all(|x| (x * Rational::from_integer(d as i64)).is_integer()));
        }
    }

    #[test]
    fn u2_form_values() {
        let q = discriminant_form(&lat("U(2)")).unwrap();
        assert_eq!(q.q_generator(0), Rational::from_integer(0));
        assert_eq!(q.q_generator(1), Rational::from_integer(0));
        assert_eq!(q.b_generator(0, 1), Rational::new(1, 2));
        assert_eq!(q.q_value(&[1, 1]), Rational::from_integer(1));
    }

    #[test]
    fn u3_generators_isotropic() {
        let q = discriminant_form(&lat("U(3)")).unwrap();
        assert_eq!(q.q_generator(0), Rational::from_integer(0));
        assert_eq!(q.q_generator(1), Rational::from_integer(0));
        let b = q.b_generator(0, 1);
        assert!(b == Rational::new(1, 3) || b == Rational::new(2, 3));
    }

    #[test]
    fn rank_one_form() {
        for n in 1..6 {
            let q = discriminant_form(&Lattice::rank_one(-4 * n).unwrap()).unwrap();
            assert_eq!(q.orders(), &[4 * n as u64]);
            assert_eq!(q.q_generator(0), mod2(Rational::new(-1, 4 * n)));
        }
    }

    #[test]
    fn odd_lattice_has_only_bilinear_form() {
        let l = lat("<1>+<-3>");
        assert_eq!(discriminant_form(&l), Err(Error::NotEven));
        let (g, b) = discriminant_bilinear(&l).unwrap();
        assert_eq!(g.cyclic_orders, vec![3]);
        assert_eq!(b[0][0], Rational::new(2, 3));
    }

    #[test]
    fn p_analysis_examples() {
        let a = p_analysis(&lat("U(2)"), 2).unwrap();
        assert_eq!((a.is_p_elementary, a.a, a.l_p), (true, Some(2), 2));
        let a = p_analysis(&lat("U(3)"), 3).unwrap();
        assert_eq!((a.is_p_elementary, a.a, a.l_p), (true, Some(2), 2));
        let a = p_analysis(&lat("U(2)+E8(-2)+<-6>"), 2).unwrap();
        assert_eq!((a.is_p_elementary, a.l_p), (false, 11));
        assert!(p_analysis(&lat("U"), 4).is_err());
    }
}
