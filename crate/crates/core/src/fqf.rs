//! Finite quadratic forms `q: A -> Q/2Z` on finite abelian groups.
//!
//! A form is stored on a fixed generator tuple `g_1, ..., g_k` of orders
//! `d_1, ..., d_k` (so `A = ⊕ Z/d_i`). Every value of `q` lies in `(1/E)Z / 2Z` and
//! every value of `b` in `(1/E)Z / Z`, where `E` is the exponent of `A`. Values are
//! therefore kept as integer numerators: `q` modulo `2E` and `b` modulo `E`.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::matrix::IntMatrix;
use crate::rational::{frac_string, lcm_all, mod1, mod2, parse_frac, Rational};

/// Upper bound on `|A|` for any full element enumeration.
pub const ENUMERATION_CAP: u64 = 1_000_000;
/// Default upper bound on `|A|` for automorphism enumeration.
pub const AUTOMORPHISM_GROUP_CAP: u64 = 10_000;
/// Upper bound on the number of automorphisms collected.
pub const AUTOMORPHISM_COUNT_CAP: usize = 100_000;
/// Upper bound on `|A[2]|` for the `u(2)`/`v(2)` component search.
pub const U2V2_CAP: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteQuadraticForm {
    orders: Vec<u64>,
    exponent: u64,
    /// numerators of `q(g_i)` modulo `2E`
    q: Vec<u64>,
    /// numerators of `b(g_i, g_j)` modulo `E`
    b: Vec<Vec<u64>>,
}

fn numerator_over(r: Rational, e: u64, what: &str) -> Result<i64> {
    let scaled = r * Rational::from_integer(e as i64);
    if !scaled.is_integer() {
        return Err(Error::invalid(format!(
            "{what} = {} does not lie in (1/{e})Z",
            frac_string(&r)
        )));
    }
    Ok(scaled.to_integer())
}

impl FiniteQuadraticForm {
    /// Builds a form from generator orders, `q(g_i)` and the full symmetric matrix
    /// `b(g_i, g_j)`. Checks that the data defines a well-defined form on `⊕ Z/d_i`.
    pub fn new(orders: &[u64], q: &[Rational], b: &[Vec<Rational>]) -> Result<Self> {
        let k = orders.len();
        if q.len() != k || b.len() != k || b.iter().any(|r| r.len() != k) {
            return Err(Error::invalid("q and b must match the number of generators"));
        }
        if orders.contains(&0) {
            return Err(Error::invalid("generator orders must be positive"));
        }
        let e = lcm_all(orders.iter().copied());
        let e_i = i64::try_from(e).map_err(|_| Error::Overflow("exponent"))?;
        let two_e = e_i.checked_mul(2).ok_or(Error::Overflow("exponent"))?;
        let mut qn = Vec::with_capacity(k);
        let mut bn = vec![vec![0u64; k]; k];
        for i in 0..k {
            let d = orders[i] as i64;
            let qi = q[i];
            if !(qi * Rational::from_integer(d)).is_integer() {
                return Err(Error::invalid(format!(
                    "q(g_{i}) = {} is incompatible with order {d}",
                    frac_string(&qi)
                )));
            }
            if !(qi * Rational::from_integer(d * d) / Rational::from_integer(2)).is_integer() {
                return Err(Error::invalid(format!(
                    "q({d} g_{i}) = {d}^2 * {} is not 0 mod 2",
                    frac_string(&qi)
                )));
            }
            if mod1(b[i][i]) != mod1(qi) {
                return Err(Error::invalid(format!("b(g_{i}, g_{i}) differs from q(g_{i}) mod 1")));
            }
            qn.push(numerator_over(qi, e, "q")?.rem_euclid(two_e) as u64);
            for j in 0..k {
                if mod1(b[i][j]) != mod1(b[j][i]) {
                    return Err(Error::invalid("b is not symmetric"));
                }
                if !(b[i][j] * Rational::from_integer(d)).is_integer() {
                    return Err(Error::invalid(format!(
                        "b(g_{i}, g_{j}) = {} is incompatible with order {d}",
                        frac_string(&b[i][j])
                    )));
                }
                bn[i][j] = numerator_over(b[i][j], e, "b")?.rem_euclid(e_i) as u64;
            }
        }
        Ok(FiniteQuadraticForm {
            orders: orders.to_vec(),
            exponent: e,
            q: qn,
            b: bn,
        })
    }

    /// The cyclic form `Z/d` with `q(g) = value`.
    pub fn cyclic(d: u64, value: Rational) -> Result<Self> {
        Self::new(&[d], &[value], &[vec![value]])
    }

    /// The form on the trivial group.
    pub fn trivial() -> Self {
        FiniteQuadraticForm {
            orders: Vec::new(),
            exponent: 1,
            q: Vec::new(),
            b: Vec::new(),
        }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn num_generators(&self) -> usize {
        self.orders.len()
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// `|A|`.
    pub fn size(&self) -> Result<u64> {
        self.orders.iter().try_fold(1u64, |acc, &d| {
            acc.checked_mul(d).ok_or(Error::Overflow("group order"))
        })
    }

    pub fn q_generator(&self, i: usize) -> Rational {
        Rational::new(self.q[i] as i64, self.exponent as i64)
    }

    pub fn b_generator(&self, i: usize, j: usize) -> Rational {
        Rational::new(self.b[i][j] as i64, self.exponent as i64)
    }

    fn two_e(&self) -> u64 {
        2 * self.exponent
    }

    /// Numerator of `q(x)` over `E`, in `[0, 2E)`.
    pub fn q_num(&self, x: &[u64]) -> u64 {
        let two_e = self.two_e() as i128;
        let mut acc: i128 = 0;
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            let xi = x[i] as i128;
            acc = (acc + xi * xi % two_e * self.q[i] as i128) % two_e;
            for j in i + 1..x.len() {
                acc = (acc + 2 * (xi * x[j] as i128 % two_e) * self.b[i][j] as i128) % two_e;
            }
        }
        acc as u64
    }

    /// Numerator of `b(x, y)` over `E`, in `[0, E)`.
    pub fn b_num(&self, x: &[u64], y: &[u64]) -> u64 {
        let e = self.exponent as i128;
        let mut acc: i128 = 0;
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            for j in 0..y.len() {
                acc = (acc + (x[i] as i128 * y[j] as i128 % e) * self.b[i][j] as i128) % e;
            }
        }
        acc as u64
    }

    pub fn q_value(&self, x: &[u64]) -> Rational {
        Rational::new(self.q_num(x) as i64, self.exponent as i64)
    }

    pub fn b_value(&self, x: &[u64], y: &[u64]) -> Rational {
        Rational::new(self.b_num(x, y) as i64, self.exponent as i64)
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.orders.len()]
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(y)
            .zip(&self.orders)
            .map(|((&a, &b), &d)| (a + b) % d)
            .collect()
    }

    pub fn scale(&self, x: &[u64], t: u64) -> Vec<u64> {
        x.iter()
            .zip(&self.orders)
            .map(|(&a, &d)| ((a as u128 * t as u128) % d as u128) as u64)
            .collect()
    }

    pub fn order_of(&self, x: &[u64]) -> u64 {
        lcm_all(x.iter().zip(&self.orders).map(|(&a, &d)| d / a.gcd(&d)))
    }

    /// Mixed-radix index of an element.
    pub fn index_of(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.orders)
            .rev()
            .fold(0, |acc, (&a, &d)| acc * d + a)
    }

    pub fn coords_of(&self, mut idx: u64) -> Vec<u64> {
        self.orders
            .iter()
            .map(|&d| {
                let c = idx % d;
                idx /= d;
                c
            })
            .collect()
    }

    /// Fails when `|A|` exceeds `cap`.
    pub fn check_size(&self, cap: u64, what: &str) -> Result<u64> {
        let n = self.size().map_err(|_| Error::cap(what, cap))?;
        if n > cap {
            return Err(Error::cap(format!("{what}: |A| = {n}"), cap));
        }
        Ok(n)
    }

    /// Calls `f(x, q_num(x), b_row(x))` for every element, where `b_row[j]` is the
    /// numerator of `b(x, g_j)`. Elements are visited in mixed-radix order with the
    /// first coordinate most significant.
    pub fn for_each_element<F: FnMut(&[u64], u64, &[u64])>(&self, cap: u64, mut f: F) -> Result<()> {
        self.check_size(cap, "element enumeration")?;
        let k = self.orders.len();
        let mut coords = vec![0u64; k];
        let mut qs = vec![0u64; k + 1];
        let mut bs = vec![vec![0u64; k]; k + 1];
        self.visit(0, &mut coords, &mut qs, &mut bs, &mut f);
        Ok(())
    }

    fn visit<F: FnMut(&[u64], u64, &[u64])>(
        &self,
        level: usize,
        coords: &mut Vec<u64>,
        qs: &mut Vec<u64>,
        bs: &mut Vec<Vec<u64>>,
        f: &mut F,
    ) {
        let k = self.orders.len();
        if level == k {
            f(coords, qs[k], &bs[k]);
            return;
        }
        let e = self.exponent as u128;
        let two_e = 2 * e;
        for t in 0..self.orders[level] {
            coords[level] = t;
            let tt = t as u128;
            let q = (qs[level] as u128
                + (tt * tt % two_e) * self.q[level] as u128
                + 2 * tt * bs[level][level] as u128)
                % two_e;
            qs[level + 1] = q as u64;
            for j in 0..k {
                bs[level + 1][j] =
                    ((bs[level][j] as u128 + tt * self.b[level][j] as u128) % e) as u64;
            }
            self.visit(level + 1, coords, qs, bs, f);
        }
        coords[level] = 0;
    }

    /// `(A, -q)`.
    pub fn negated(&self) -> Self {
        let e = self.exponent;
        FiniteQuadraticForm {
            orders: self.orders.clone(),
            exponent: e,
            q: self.q.iter().map(|&v| (2 * e - v) % (2 * e)).collect(),
            b: self
                .b
                .iter()
                .map(|row| row.iter().map(|&v| (e - v) % e).collect())
                .collect(),
        }
    }

    /// Values of `q` and `b` on the generators as rationals.
    pub fn generator_values(&self) -> (Vec<Rational>, Vec<Vec<Rational>>) {
        let k = self.orders.len();
        let q = (0..k).map(|i| self.q_generator(i)).collect();
        let b = (0..k)
            .map(|i| (0..k).map(|j| self.b_generator(i, j)).collect())
            .collect();
        (q, b)
    }

    /// Orthogonal direct sum.
    pub fn orthogonal_sum(&self, other: &Self) -> Result<Self> {
        let (q1, b1) = self.generator_values();
        let (q2, b2) = other.generator_values();
        let k1 = q1.len();
        let k = k1 + q2.len();
        let zero = Rational::from_integer(0);
        let mut b = vec![vec![zero; k]; k];
        for i in 0..k1 {
            b[i][..k1].copy_from_slice(&b1[i]);
        }
        for i in 0..q2.len() {
            b[k1 + i][k1..].copy_from_slice(&b2[i]);
        }
        let orders: Vec<u64> = self.orders.iter().chain(&other.orders).copied().collect();
        let q: Vec<Rational> = q1.into_iter().chain(q2).collect();
        Self::new(&orders, &q, &b)
    }

    /// Restriction to the `p`-primary part, on generators `(d_i / p^v) g_i`.
    pub fn p_part(&self, p: u64) -> Result<Self> {
        let mut orders = Vec::new();
        let mut mult = Vec::new();
        let mut idx = Vec::new();
        for (i, &d) in self.orders.iter().enumerate() {
            let mut pv = 1;
            while d % (pv * p) == 0 {
                pv *= p;
            }
            if pv > 1 {
                orders.push(pv);
                mult.push((d / pv) as i64);
                idx.push(i);
            }
        }
        let k = orders.len();
        let q: Vec<Rational> = (0..k)
            .map(|a| self.q_generator(idx[a]) * Rational::from_integer(mult[a] * mult[a]))
            .map(mod2)
            .collect();
        let b: Vec<Vec<Rational>> = (0..k)
            .map(|a| {
                (0..k)
                    .map(|c| {
                        mod1(self.b_generator(idx[a], idx[c]) * Rational::from_integer(mult[a] * mult[c]))
                    })
                    .collect()
            })
            .collect();
        Self::new(&orders, &q, &b)
    }

    /// `true` when `b` has trivial radical.
    pub fn is_nondegenerate(&self) -> Result<bool> {
        let mut radical = 0u64;
        self.for_each_element(ENUMERATION_CAP, |_, _, brow| {
            if brow.iter().all(|&v| v == 0) {
                radical += 1;
            }
        })?;
        Ok(radical == 1)
    }

    pub(crate) fn require_nondegenerate(&self) -> Result<()> {
        if self.is_nondegenerate()? {
            Ok(())
        } else {
            Err(Error::Degenerate("bilinear form has a nontrivial radical".into()))
        }
    }

    /// Multiset of `(element order, q value)` over all elements.
    pub fn value_profile(&self) -> Result<BTreeMap<(u64, Rational), u64>> {
        let mut out = BTreeMap::new();
        self.for_each_element(ENUMERATION_CAP, |x, qn, _| {
            let key = (self.order_of(x), Rational::new(qn as i64, self.exponent as i64));
            *out.entry(key).or_insert(0) += 1;
        })?;
        Ok(out)
    }

    /// Isomorphism type of `A` as sorted prime powers.
    pub fn elementary_divisors(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for &d in &self.orders {
            let mut rest = d;
            let mut p = 2;
            while rest > 1 {
                if p * p > rest {
                    out.push(rest);
                    break;
                }
                let mut pk = 1;
                while rest % p == 0 {
                    rest /= p;
                    pk *= p;
                }
                if pk > 1 {
                    out.push(pk);
                }
                p += 1;
            }
        }
        out.sort_unstable();
        out
    }
}

#[derive(Serialize, Deserialize)]
struct FqfJson {
    cyclic_orders: Vec<u64>,
    q: Vec<String>,
    b: Vec<Vec<String>>,
}

impl Serialize for FiniteQuadraticForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (q, b) = self.generator_values();
        FqfJson {
            cyclic_orders: self.orders.clone(),
            q: q.iter().map(frac_string).collect(),
            b: b.iter().map(|r| r.iter().map(frac_string).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteQuadraticForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = FqfJson::deserialize(d)?;
        let parse = |s: &String| parse_frac(s).ok_or_else(|| D::Error::custom(format!("bad fraction {s:?}")));
        let q = j.q.iter().map(parse).collect::<std::result::Result<Vec<_>, _>>()?;
        let b = j
            .b
            .iter()
            .map(|r| r.iter().map(parse).collect::<std::result::Result<Vec<_>, _>>())
            .collect::<std::result::Result<Vec<_>, _>>()?;
        FiniteQuadraticForm::new(&j.cyclic_orders, &q, &b).map_err(D::Error::custom)
    }
}

/// D4 root lattice Gram matrix, used to validate `v(2)`.
pub const D4_GRAM: [[i64; 4]; 4] = [[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]];

/// The standard forms `u(2)` and `v(2)` on `(Z/2)^2`.
pub fn fqf_standard(name: &str) -> Result<FiniteQuadraticForm> {
    let half = Rational::new(1, 2);
    let (q0, q1) = match name {
        "u2" => (0, 0),
        "v2" => (1, 1),
        other => return Err(Error::invalid(format!("unknown standard form {other:?}"))),
    };
    let q = [Rational::from_integer(q0), Rational::from_integer(q1)];
    let b = vec![vec![Rational::from_integer(0), half], vec![half, Rational::from_integer(0)]];
    let form = FiniteQuadraticForm::new(&[2, 2], &q, &b)?;
    if name == "v2" {
        let d4 = Lattice::from_rows(&D4_GRAM.iter().map(|r| r.to_vec()).collect::<Vec<_>>())?;
        let reference = crate::discriminant::discriminant_form(&d4)?;
        if !fqf_isometric(&form, &reference)? {
            return Err(Error::invalid("v(2) table does not match the D4 discriminant form"));
        }
    }
    Ok(form)
}

/// Signature mod 8 from the Gauss sum `Σ exp(πi q(x)) = sqrt|A| exp(2πi σ/8)`.
pub fn gauss_milgram_signature(q: &FiniteQuadraticForm) -> Result<u8> {
    Ok(gauss_sum(q)?.residue)
}

/// The normalized Gauss sum and the residue it determines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussSum {
    pub re: f64,
    pub im: f64,
    pub residue: u8,
    /// Largest deviation of the normalized sum from the eighth root of unity.
    pub error: f64,
}

pub const GAUSS_TOLERANCE: f64 = 1e-9;

pub fn gauss_sum(q: &FiniteQuadraticForm) -> Result<GaussSum> {
    q.check_size(ENUMERATION_CAP, "Gauss sum")?;
    q.require_nondegenerate()?;
    let two_e = q.two_e() as usize;
    let mut hist = vec![0u64; two_e];
    q.for_each_element(ENUMERATION_CAP, |_, qn, _| hist[qn as usize] += 1)?;
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for (k, &c) in hist.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let angle = std::f64::consts::PI * k as f64 / q.exponent as f64;
        re += c as f64 * angle.cos();
        im += c as f64 * angle.sin();
    }
    let norm = (q.size()? as f64).sqrt();
    let (re, im) = (re / norm, im / norm);
    let theta = im.atan2(re);
    let sigma = (theta * 4.0 / std::f64::consts::PI).round() as i64;
    let root = sigma as f64 * std::f64::consts::PI / 4.0;
    let error = (re - root.cos()).abs().max((im - root.sin()).abs());
    if error > GAUSS_TOLERANCE {
        return Err(Error::invalid(format!(
            "normalized Gauss sum {re}+{im}i is not an eighth root of unity"
        )));
    }
    Ok(GaussSum {
        re,
        im,
        residue: sigma.rem_euclid(8) as u8,
        error,
    })
}

/// A group of automorphisms of a finite quadratic form. Each element is an integer
/// matrix whose column `j` holds the coordinates of the image of `g_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FqfAutomorphismGroup {
    pub orders: Vec<u64>,
    pub elements: Vec<IntMatrix>,
}

impl FqfAutomorphismGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(orders: &[u64]) -> IntMatrix {
        IntMatrix::identity(orders.len())
    }

    /// `-id`, reduced.
    pub fn negation(orders: &[u64]) -> IntMatrix {
        let mut m = IntMatrix::zeros(orders.len(), orders.len());
        for (i, &d) in orders.iter().enumerate() {
            m[(i, i)] = ((d - 1) % d) as i64;
        }
        m
    }

    /// Builds the group from a list of elements, sorting and deduplicating.
    pub fn from_elements(orders: &[u64], mut elements: Vec<IntMatrix>) -> Self {
        elements.sort();
        elements.dedup();
        FqfAutomorphismGroup {
            orders: orders.to_vec(),
            elements,
        }
    }

    pub fn reduce(orders: &[u64], m: &IntMatrix) -> IntMatrix {
        let mut out = m.clone();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out[(i, j)] = m[(i, j)].rem_euclid(orders[i] as i64);
            }
        }
        out
    }

    /// `(a ∘ b)`: apply `b` first.
    pub fn compose(orders: &[u64], a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        let k = orders.len();
        let mut out = IntMatrix::zeros(k, k);
        for i in 0..k {
            let d = orders[i] as i128;
            for j in 0..k {
                let mut acc: i128 = 0;
                for l in 0..k {
                    acc = (acc + a[(i, l)] as i128 * b[(l, j)] as i128) % d;
                }
                out[(i, j)] = acc.rem_euclid(d) as i64;
            }
        }
        out
    }

    pub fn apply(orders: &[u64], a: &IntMatrix, x: &[u64]) -> Vec<u64> {
        (0..orders.len())
            .map(|i| {
                let d = orders[i] as i128;
                let acc: i128 = (0..x.len()).map(|j| a[(i, j)] as i128 * x[j] as i128 % d).sum();
                acc.rem_euclid(d) as u64
            })
            .collect()
    }

    pub fn contains(&self, m: &IntMatrix) -> bool {
        self.elements.binary_search(m).is_ok()
    }

    pub fn compose_elems(&self, a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        Self::compose(&self.orders, a, b)
    }

    pub fn inverse(&self, a: &IntMatrix) -> IntMatrix {
        let id = Self::identity(&self.orders);
        let mut prev = id.clone();
        let mut cur = a.clone();
        while cur != id {
            prev = cur.clone();
            cur = self.compose_elems(&cur, a);
        }
        prev
    }

    /// Closed under composition (which implies inverses for a finite set).
    pub fn is_closed(&self) -> bool {
        self.elements.iter().all(|a| {
            self.elements
                .iter()
                .all(|b| self.contains(&self.compose_elems(a, b)))
        })
    }

    /// Subgroup generated by `gens`.
    pub fn generated(orders: &[u64], gens: &[IntMatrix]) -> Self {
        let id = Self::identity(orders);
        let mut seen = std::collections::BTreeSet::new();
        seen.insert(id.clone());
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = Self::compose(orders, g, &x);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        FqfAutomorphismGroup {
            orders: orders.to_vec(),
            elements: seen.into_iter().collect(),
        }
    }

    /// Checks that `m` is an automorphism of `q`.
    pub fn is_automorphism(q: &FiniteQuadraticForm, m: &IntMatrix) -> bool {
        let k = q.num_generators();
        if m.rows() != k || m.cols() != k {
            return false;
        }
        let images: Vec<Vec<u64>> = (0..k)
            .map(|j| {
                let mut e = q.zero();
                if k > 0 {
                    e[j] = 1;
                }
                Self::apply(q.orders(), m, &e)
            })
            .collect();
        for i in 0..k {
            if q.order_of(&images[i]) != q.orders[i] || q.q_num(&images[i]) != q.q[i] {
                return false;
            }
            for j in 0..k {
                if q.b_num(&images[i], &images[j]) != q.b[i][j] {
                    return false;
                }
            }
        }
        // bijective iff the images generate A
        span_size(q, &images).ok() == q.size().ok()
    }
}

fn span_size(q: &FiniteQuadraticForm, gens: &[Vec<u64>]) -> Result<u64> {
    let n = q.check_size(ENUMERATION_CAP, "span")?;
    let mut in_span = vec![false; n as usize];
    let mut members = vec![q.zero()];
    in_span[0] = true;
    for g in gens {
        let mut i = 0;
        while i < members.len() {
            let y = q.add(&members[i], g);
            let idx = q.index_of(&y) as usize;
            if !in_span[idx] {
                in_span[idx] = true;
                members.push(y);
            }
            i += 1;
        }
    }
    Ok(members.len() as u64)
}

enum Mode {
    First,
    All,
}

struct IsometrySearch<'a> {
    src: &'a FiniteQuadraticForm,
    dst: &'a FiniteQuadraticForm,
    candidates: Vec<Vec<Vec<u64>>>,
    in_span: Vec<bool>,
    span: Vec<Vec<u64>>,
    images: Vec<Vec<u64>>,
    found: Vec<IntMatrix>,
    mode: Mode,
}

impl IsometrySearch<'_> {
    /// `live[i]` indexes the candidates for generator `level + i` that pair correctly
    /// with every image chosen so far (forward checking).
    fn run(&mut self, level: usize, live: &[Vec<usize>]) -> Result<bool> {
        let k = self.src.num_generators();
        if level == k {
            let cols: Vec<Vec<i64>> = self
                .images
                .iter()
                .map(|c| c.iter().map(|&v| v as i64).collect())
                .collect();
            self.found.push(IntMatrix::from_columns(&cols, self.dst.num_generators())?);
            if self.found.len() > AUTOMORPHISM_COUNT_CAP {
                return Err(Error::cap("automorphism count", AUTOMORPHISM_COUNT_CAP as u64));
            }
            return Ok(matches!(self.mode, Mode::First));
        }
        let d = self.src.orders[level];
        for &ci in &live[0] {
            let x = self.candidates[level][ci].clone();
            // injectivity: no nonzero multiple of x may already lie in the span
            let independent = (1..d).all(|t| {
                let y = self.dst.scale(&x, t);
                !self.in_span[self.dst.index_of(&y) as usize]
            });
            if !independent {
                continue;
            }
            let mut next = Vec::with_capacity(live.len() - 1);
            for (off, list) in live[1..].iter().enumerate() {
                let m = level + 1 + off;
                let want = self.src.b[level][m];
                let kept: Vec<usize> = list
                    .iter()
                    .copied()
                    .filter(|&cj| self.dst.b_num(&x, &self.candidates[m][cj]) == want)
                    .collect();
                if kept.is_empty() {
                    break;
                }
                next.push(kept);
            }
            if next.len() + 1 < live.len() {
                continue;
            }
            let base = self.span.len();
            for t in 1..d {
                let tx = self.dst.scale(&x, t);
                for s in 0..base {
                    let y = self.dst.add(&self.span[s], &tx);
                    self.in_span[self.dst.index_of(&y) as usize] = true;
                    self.span.push(y);
                }
            }
            self.images.push(x);
            let stop = self.run(level + 1, &next)?;
            self.images.pop();
            for y in self.span.drain(base..) {
                self.in_span[self.dst.index_of(&y) as usize] = false;
            }
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn search(src: &FiniteQuadraticForm, dst: &FiniteQuadraticForm, mode: Mode, cap: u64) -> Result<Vec<IntMatrix>> {
    let n = dst.check_size(cap, "isometry search")?;
    if src.size()? != n || src.exponent != dst.exponent {
        return Ok(Vec::new());
    }
    let mut buckets: HashMap<(u64, u64), Vec<Vec<u64>>> = HashMap::new();
    dst.for_each_element(cap, |x, qn, _| {
        buckets
            .entry((dst.order_of(x), qn))
            .or_default()
            .push(x.to_vec());
    })?;
    let candidates = (0..src.num_generators())
        .map(|i| buckets.get(&(src.orders[i], src.q[i])).cloned().unwrap_or_default())
        .collect();
    let mut in_span = vec![false; n as usize];
    in_span[0] = true;
    let mut s = IsometrySearch {
        src,
        dst,
        candidates,
        in_span,
        span: vec![dst.zero()],
        images: Vec::new(),
        found: Vec::new(),
        mode,
    };
    let live: Vec<Vec<usize>> = s.candidates.iter().map(|c| (0..c.len()).collect()).collect();
    if !live.is_empty() {
        s.run(0, &live)?;
    } else {
        s.run(0, &[Vec::new()])?;
    }
    Ok(s.found)
}

/// Cheap isometry invariants: group structure, value profile and Gauss–Milgram residue.
fn invariants_match(q1: &FiniteQuadraticForm, q2: &FiniteQuadraticForm) -> Result<bool> {
    if q1.elementary_divisors() != q2.elementary_divisors() {
        return Ok(false);
    }
    if q1.value_profile()? != q2.value_profile()? {
        return Ok(false);
    }
    Ok(gauss_milgram_signature(q1)? == gauss_milgram_signature(q2)?)
}

/// An isometry `q1 -> q2` (columns are images of the generators of `q1`), if any.
pub fn find_isometry(q1: &FiniteQuadraticForm, q2: &FiniteQuadraticForm) -> Result<Option<IntMatrix>> {
    q1.check_size(ENUMERATION_CAP, "isometry test")?;
    q2.check_size(ENUMERATION_CAP, "isometry test")?;
    q1.require_nondegenerate()?;
    q2.require_nondegenerate()?;
    if !invariants_match(q1, q2)? {
        return Ok(None);
    }
    Ok(search(q1, q2, Mode::First, ENUMERATION_CAP)?.pop())
}

pub fn fqf_isometric(q1: &FiniteQuadraticForm, q2: &FiniteQuadraticForm) -> Result<bool> {
    Ok(find_isometry(q1, q2)?.is_some())
}

/// `O(q)` with the default cap on `|A|`.
pub fn fqf_automorphisms(q: &FiniteQuadraticForm) -> Result<FqfAutomorphismGroup> {
    fqf_automorphisms_capped(q, AUTOMORPHISM_GROUP_CAP)
}

pub fn fqf_automorphisms_capped(q: &FiniteQuadraticForm, cap: u64) -> Result<FqfAutomorphismGroup> {
    q.check_size(cap, "automorphism enumeration")?;
    let found = search(q, q, Mode::All, cap)?;
    Ok(FqfAutomorphismGroup::from_elements(q.orders(), found))
}

/// Whether `q` has an orthogonal summand isometric to `u(2)` or `v(2)`.
pub fn has_u2_or_v2_component(q: &FiniteQuadraticForm) -> Result<bool> {
    Ok(find_u2_or_v2_component(q)?.is_some())
}

/// A splitting pair `(x, y)` spanning `u(2)` or `v(2)`, with the name of the form.
pub fn find_u2_or_v2_component(q: &FiniteQuadraticForm) -> Result<Option<(&'static str, Vec<u64>, Vec<u64>)>> {
    let basis: Vec<Vec<u64>> = q
        .orders()
        .iter()
        .enumerate()
        .filter(|(_, &d)| d % 2 == 0)
        .map(|(i, &d)| {
            let mut v = q.zero();
            v[i] = d / 2;
            v
        })
        .collect();
    let l = basis.len() as u32;
    let count = 1u64.checked_shl(l).filter(|&c| c <= U2V2_CAP);
    let Some(count) = count else {
        return Err(Error::cap(format!("u(2)/v(2) search over 2^{l} two-torsion elements"), U2V2_CAP));
    };
    let e = q.exponent();
    if !e.is_multiple_of(2) {
        return Ok(None);
    }
    let total = q.size()?;
    let elems: Vec<(Vec<u64>, u64)> = (1..count)
        .map(|mask| {
            let mut x = q.zero();
            for (bit, v) in basis.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    x = q.add(&x, v);
                }
            }
            let qn = q.q_num(&x);
            (x, qn)
        })
        .filter(|(_, qn)| *qn == 0 || *qn == e)
        .collect();
    let generators: Vec<Vec<u64>> = (0..q.num_generators())
        .map(|i| {
            let mut g = q.zero();
            g[i] = 1;
            g
        })
        .collect();
    for (i, (x, qx)) in elems.iter().enumerate() {
        for (y, qy) in &elems[i + 1..] {
            if qx != qy || q.b_num(x, y) != e / 2 {
                continue;
            }
            // |span(x,y)^⊥| = |A| / |image of z -> (b(z,x), b(z,y))|
            let mut image = std::collections::BTreeSet::new();
            image.insert((0u64, 0u64));
            loop {
                let before = image.len();
                let current: Vec<(u64, u64)> = image.iter().copied().collect();
                for g in &generators {
                    let w = (q.b_num(g, x), q.b_num(g, y));
                    for &(a, c) in &current {
                        image.insert(((a + w.0) % e, (c + w.1) % e));
                    }
                }
                if image.len() == before {
                    break;
                }
            }
            let perp = total / image.len() as u64;
            let xy = q.add(x, y);
            let meets_trivially = [x, y, &xy].iter().all(|h| q.b_num(h, x) != 0 || q.b_num(h, y) != 0);
            if perp * 4 == total && meets_trivially {
                let name = if *qx == 0 { "u2" } else { "v2" };
                return Ok(Some((name, x.clone(), y.clone())));
            }
        }
    }
    Ok(None)
}

fn mobius(mut n: u64) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Number of elements `x` with `d x = 0`.
pub fn count_killed_by(q: &FiniteQuadraticForm, d: u64) -> u64 {
    q.orders().iter().map(|&di| di.gcd(&d)).product()
}

/// Number of elements of order exactly `d`.
pub fn order_d_element_count(q: &FiniteQuadraticForm, d: u64) -> Result<u64> {
    if d == 0 {
        return Err(Error::invalid("order must be positive"));
    }
    let mut total: i128 = 0;
    for e in (1..=d).filter(|e| d.is_multiple_of(*e)) {
        total += mobius(d / e) as i128 * count_killed_by(q, e) as i128;
    }
    Ok(total as u64)
}
