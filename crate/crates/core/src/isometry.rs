//! Integer isometry groups of small lattices, their action on the discriminant
//! group, and the bounded classification of binary even lattices.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::discriminant::{discriminant_form, discriminant_group};
use crate::error::{Error, Result};
use crate::fqf::{fqf_automorphisms, fqf_isometric, FiniteQuadraticForm, FqfAutomorphismGroup};
use crate::lattice::Lattice;
use crate::matrix::IntMatrix;

/// Upper bound on the number of isometries collected for a definite lattice.
pub const ISOMETRY_COUNT_CAP: usize = 100_000;
/// Largest rank accepted for definite isometry enumeration.
pub const MAX_DEFINITE_RANK: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsometrySet {
    pub gram: IntMatrix,
    /// Matrices `M` (columns are images of basis vectors) with `M^T G M = G`, sorted.
    pub elements: Vec<IntMatrix>,
    /// Whether the set is certified to be all of `O(L)`.
    pub complete: bool,
    /// Entry bound used by a bounded search, if any.
    pub bound: Option<i64>,
    pub method: String,
}

impl IsometrySet {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, m: &IntMatrix) -> bool {
        self.elements.binary_search(m).is_ok()
    }

    /// Closed under products; inverses follow for a finite set.
    pub fn is_closed(&self) -> Result<bool> {
        for a in &self.elements {
            for b in &self.elements {
                if !self.contains(&a.mul(b)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Default entry bound for indefinite binary isometry searches: `3 * max|G_ij|`.
pub fn default_binary_bound(gram: &IntMatrix) -> i64 {
    (3 * gram.max_abs()).max(1)
}

fn is_perfect_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as f64).sqrt().round() as i64;
    (r - 1..=r + 1).any(|s| s >= 0 && s * s == n)
}

fn det2(v: &[i64], w: &[i64]) -> i64 {
    v[0] * w[1] - v[1] * w[0]
}

/// Vectors `v` with `|v_i| <= bound` and `v^T G v = norm`, in lexicographic order.
fn box_vectors_of_norm(gram: &IntMatrix, norm: i64, bound: i64) -> Result<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    for x in -bound..=bound {
        for y in -bound..=bound {
            let v = [x, y];
            if gram.pair(&v, &v)? == norm {
                out.push(v.to_vec());
            }
        }
    }
    Ok(out)
}

/// All `P` with `|P_ij| <= bound`, `det P = ±1` and `P^T g1 P = g2`, for 2x2 Grams.
fn binary_transforms(g1: &IntMatrix, g2: &IntMatrix, bound: i64, first_only: bool) -> Result<Vec<IntMatrix>> {
    let firsts = box_vectors_of_norm(g1, g2[(0, 0)], bound)?;
    let seconds = box_vectors_of_norm(g1, g2[(1, 1)], bound)?;
    let mut out = Vec::new();
    for v in &firsts {
        for w in &seconds {
            if det2(v, w).abs() != 1 || g1.pair(v, w)? != g2[(0, 1)] {
                continue;
            }
            out.push(IntMatrix::from_columns(&[v.clone(), w.clone()], 2)?);
            if first_only {
                return Ok(out);
            }
        }
    }
    Ok(out)
}

/// Lattice vectors of norm at most `max_norm` for a positive-definite Gram matrix,
/// by Fincke–Pohst enumeration. The zero vector is excluded.
pub fn short_vectors(gram: &IntMatrix, max_norm: i64) -> Result<Vec<Vec<i64>>> {
    let n = gram.rows();
    let mut q = vec![vec![0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            q[i][j] = gram[(i, j)] as f64;
        }
    }
    for i in 0..n {
        if q[i][i] <= 0.0 {
            return Err(Error::precondition("short vector enumeration needs a positive-definite form"));
        }
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    fn rec(
        i: usize,
        budget: f64,
        q: &[Vec<f64>],
        x: &mut Vec<i64>,
        gram: &IntMatrix,
        max_norm: i64,
        out: &mut Vec<Vec<i64>>,
    ) -> Result<()> {
        let n = x.len();
        let center: f64 = -(i + 1..n).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
        let radius = (budget.max(0.0) / q[i][i]).sqrt() + 1e-6;
        let lo = (center - radius).ceil() as i64;
        let hi = (center + radius).floor() as i64;
        for v in lo..=hi {
            x[i] = v;
            let t = v as f64 - center;
            let rest = budget - q[i][i] * t * t;
            if rest < -1e-6 {
                continue;
            }
            if i == 0 {
                if x.iter().any(|&c| c != 0) {
                    let norm = gram.pair(x, x)?;
                    if norm <= max_norm {
                        out.push(x.clone());
                    }
                }
            } else {
                rec(i - 1, rest, q, x, gram, max_norm, out)?;
            }
        }
        x[i] = 0;
        Ok(())
    }
    if n > 0 {
        rec(n - 1, max_norm as f64 + 1e-6, &q, &mut x, gram, max_norm, &mut out)?;
    }
    Ok(out)
}

fn definite_isometries(gram: &IntMatrix) -> Result<Vec<IntMatrix>> {
    let n = gram.rows();
    let max_diag = (0..n).map(|i| gram[(i, i)]).max().unwrap_or(0);
    // each candidate carries G v so that pairings are plain dot products
    let mut by_norm: BTreeMap<i64, Vec<(Vec<i64>, Vec<i64>)>> = BTreeMap::new();
    for v in short_vectors(gram, max_diag)? {
        let gv = gram.mul_vec(&v)?;
        let norm = crate::matrix::dot(&v, &gv)?;
        by_norm.entry(norm).or_default().push((v, gv));
    }
    let candidates: Vec<Vec<(Vec<i64>, Vec<i64>)>> = (0..n)
        .map(|i| by_norm.get(&gram[(i, i)]).cloned().unwrap_or_default())
        .collect();
    struct Search<'a> {
        gram: &'a IntMatrix,
        candidates: Vec<Vec<(Vec<i64>, Vec<i64>)>>,
        chosen: Vec<usize>,
        found: Vec<IntMatrix>,
    }
    impl Search<'_> {
        fn dfs(&mut self, level: usize) -> Result<()> {
            let n = self.gram.rows();
            if level == n {
                let cols: Vec<Vec<i64>> = (0..n).map(|j| self.candidates[j][self.chosen[j]].0.clone()).collect();
                let m = IntMatrix::from_columns(&cols, n)?;
                if m.determinant()?.abs() == 1 {
                    self.found.push(m);
                    if self.found.len() > ISOMETRY_COUNT_CAP {
                        return Err(Error::cap("isometry count", ISOMETRY_COUNT_CAP as u64));
                    }
                }
                return Ok(());
            }
            for c in 0..self.candidates[level].len() {
                let v = &self.candidates[level][c].0;
                let fits = (0..level).all(|j| {
                    let gw = &self.candidates[j][self.chosen[j]].1;
                    let dot: i128 = v.iter().zip(gw).map(|(&a, &b)| a as i128 * b as i128).sum();
                    dot == self.gram[(j, level)] as i128
                });
                if fits {
                    self.chosen.push(c);
                    self.dfs(level + 1)?;
                    self.chosen.pop();
                }
            }
            Ok(())
        }
    }
    let mut search = Search {
        gram,
        candidates,
        chosen: Vec::new(),
        found: Vec::new(),
    };
    search.dfs(0)?;
    Ok(search.found)
}

/// `O(L)` for rank-1 lattices, indefinite binary lattices (bounded search) and
/// definite lattices of rank at most 8.
pub fn lattice_isometries(l: &Lattice, bound: i64) -> Result<IsometrySet> {
    l.require_nondegenerate()?;
    let gram = l.gram().clone();
    let n = l.rank();
    if n == 1 {
        let elements = vec![IntMatrix::from_rows(&[vec![-1]])?, IntMatrix::identity(1)];
        return Ok(IsometrySet {
            gram,
            elements,
            complete: true,
            bound: None,
            method: "rank one: {+1, -1}".into(),
        });
    }
    if l.is_definite() {
        if n > MAX_DEFINITE_RANK {
            return Err(Error::Unsupported(format!(
                "definite isometry enumeration is limited to rank {MAX_DEFINITE_RANK}"
            )));
        }
        let positive = if l.signature().positive > 0 { gram.clone() } else { gram.neg()? };
        let mut elements = definite_isometries(&positive)?;
        elements.sort();
        return Ok(IsometrySet {
            gram,
            elements,
            complete: true,
            bound: None,
            method: "definite: backtracking over short vectors".into(),
        });
    }
    if n == 2 {
        let mut elements = binary_transforms(&gram, &gram, bound, false)?;
        elements.sort();
        let square = is_perfect_square(-l.det());
        let mut set = IsometrySet {
            gram,
            elements,
            complete: false,
            bound: Some(bound),
            method: String::new(),
        };
        set.complete = square && set.is_closed()?;
        set.method = if set.complete {
            format!("indefinite binary, square discriminant: exhaustive search |entries| <= {bound}, closed")
        } else if square {
            format!("indefinite binary: search |entries| <= {bound} not closed; increase bound")
        } else {
            format!("indefinite binary, non-square discriminant: O(L) is infinite, search |entries| <= {bound}")
        };
        return Ok(set);
    }
    Err(Error::Unsupported(format!(
        "isometry groups of indefinite lattices of rank {n} are not computed"
    )))
}

/// The image of a set of isometries in `O(A_L)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedImage {
    pub image: FqfAutomorphismGroup,
    /// `|iso| / |image|` when `iso` is a group.
    pub kernel_size: usize,
    /// One isometry over each image element, aligned with `image.elements`.
    pub preimages: Vec<IntMatrix>,
}

pub fn induced_on_discriminant(l: &Lattice, iso: &IsometrySet) -> Result<InducedImage> {
    l.require_even()?;
    let group = discriminant_group(l)?;
    let mut map: BTreeMap<IntMatrix, IntMatrix> = BTreeMap::new();
    for m in &iso.elements {
        let action = group.induced_action(m)?;
        map.entry(action).or_insert_with(|| m.clone());
    }
    let (elements, preimages): (Vec<_>, Vec<_>) = map.into_iter().unzip();
    let kernel_size = if elements.is_empty() { 0 } else { iso.order() / elements.len() };
    Ok(InducedImage {
        image: FqfAutomorphismGroup {
            orders: group.cyclic_orders.clone(),
            elements,
        },
        kernel_size,
        preimages,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Surjectivity {
    Surjective,
    NotSurjective,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurjectivityReport {
    pub status: Surjectivity,
    pub image_order: usize,
    pub target_order: usize,
    /// `(element of O(A_L), isometry mapping to it)` for every element in the image.
    pub certificate: Vec<(IntMatrix, IntMatrix)>,
    pub isometries_complete: bool,
    pub note: String,
    #[serde(skip)]
    pub target: Option<FqfAutomorphismGroup>,
    #[serde(skip)]
    pub image: Option<FqfAutomorphismGroup>,
    /// Why the answer is inconclusive, when it is.
    #[serde(skip)]
    pub cause: Option<Error>,
}

impl SurjectivityReport {
    fn inconclusive(cause: Error) -> Self {
        SurjectivityReport {
            status: Surjectivity::Inconclusive,
            image_order: 0,
            target_order: 0,
            certificate: Vec::new(),
            isometries_complete: false,
            note: cause.to_string(),
            target: None,
            image: None,
            cause: Some(cause),
        }
    }

    /// The error to raise when a definite answer is required.
    pub fn inconclusive_error(&self) -> Error {
        self.cause.clone().unwrap_or_else(|| {
            Error::Unsupported(format!("surjectivity undetermined: {}", self.note))
        })
    }
}

/// Decides whether `O(L) -> O(A_L)` is onto by enumerating both groups.
pub fn is_surjective_on_discriminant(l: &Lattice) -> Result<SurjectivityReport> {
    let q = discriminant_form(l)?;
    let target = match fqf_automorphisms(&q) {
        Ok(t) => t,
        Err(e) if e.is_inconclusive() => return Ok(SurjectivityReport::inconclusive(e)),
        Err(e) => return Err(e),
    };
    // -1 on L induces -1 on A_L, so O(A_L) = {+-1} is always hit.
    let orders = q.orders().to_vec();
    let neg = FqfAutomorphismGroup::negation(&orders);
    let id = FqfAutomorphismGroup::identity(&orders);
    if target.elements.iter().all(|g| *g == id || *g == neg) {
        let n = l.rank();
        let minus = IntMatrix::identity(n).neg()?;
        let mut certificate = vec![(id, IntMatrix::identity(n))];
        if neg != certificate[0].0 {
            certificate.push((neg, minus));
        }
        return Ok(SurjectivityReport {
            status: Surjectivity::Surjective,
            image_order: target.order(),
            target_order: target.order(),
            certificate,
            isometries_complete: false,
            note: "O(A_L) is contained in {+1, -1}, both induced by +-1 on L".into(),
            image: Some(target.clone()),
            target: Some(target),
            cause: None,
        });
    }
    let bound = default_binary_bound(l.gram());
    let iso = match lattice_isometries(l, bound) {
        Ok(iso) => iso,
        Err(e @ (Error::Unsupported(_) | Error::CapExceeded { .. })) => {
            return Ok(SurjectivityReport::inconclusive(e))
        }
        Err(e) => return Err(e),
    };
    let induced = induced_on_discriminant(l, &iso)?;
    let image_order = induced.image.order();
    let target_order = target.order();
    let status = if image_order == target_order {
        Surjectivity::Surjective
    } else if iso.complete {
        Surjectivity::NotSurjective
    } else {
        Surjectivity::Inconclusive
    };
    let certificate = induced
        .image
        .elements
        .iter()
        .cloned()
        .zip(induced.preimages.iter().cloned())
        .collect();
    Ok(SurjectivityReport {
        status,
        image_order,
        target_order,
        certificate,
        isometries_complete: iso.complete,
        note: iso.method.clone(),
        target: Some(target),
        image: Some(induced.image),
        cause: None,
    })
}

/// A unimodular `P` with `|P_ij| <= bound` and `P^T g1 P = g2`, if one exists.
pub fn binary_equivalence(g1: &IntMatrix, g2: &IntMatrix, bound: i64) -> Result<Option<IntMatrix>> {
    for g in [g1, g2] {
        if g.rows() != 2 || !g.is_symmetric() {
            return Err(Error::invalid("binary_equivalence expects symmetric 2x2 Gram matrices"));
        }
        if g.determinant()? == 0 {
            return Err(Error::Degenerate("binary Gram matrix has determinant 0".into()));
        }
    }
    if g1.determinant()? != g2.determinant()? {
        return Ok(None);
    }
    Ok(binary_transforms(g1, g2, bound, true)?.pop())
}

#[derive(Debug, Clone, Serialize)]
pub struct BinaryClass {
    pub representative: IntMatrix,
    pub members: Vec<IntMatrix>,
    pub signature: (usize, usize),
    pub discriminant_form: FiniteQuadraticForm,
    /// Indices of classes with identical signature and isometric forms; these may be
    /// the same class with an equivalence beyond the transform bound.
    pub possibly_equal_to: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GenusScan {
    pub det: i64,
    pub coeff_bound: i64,
    pub transform_bound: i64,
    pub candidates: usize,
    pub classes: Vec<BinaryClass>,
    pub caveat: String,
}

impl GenusScan {
    /// Classes sharing signature and discriminant form with `l`.
    pub fn genus_of(&self, l: &Lattice) -> Result<Vec<usize>> {
        let q = discriminant_form(l)?;
        let sig = l.signature().pair();
        let mut out = Vec::new();
        for (i, c) in self.classes.iter().enumerate() {
            if c.signature == sig && fqf_isometric(&c.discriminant_form, &q)? {
                out.push(i);
            }
        }
        Ok(out)
    }
}

fn rep_key(m: &IntMatrix) -> (i64, i64, Vec<Vec<i64>>) {
    let rows = m.to_rows();
    let sum = rows.iter().flatten().map(|v| v.abs()).sum();
    (m.max_abs(), sum, rows)
}

/// Bounded classification of even binary lattices `[[2a, b], [b, 2c]]` of a given
/// determinant `4ac - b^2`.
pub fn binary_genus_scan(det: i64, coeff_bound: i64, transform_bound: i64) -> Result<GenusScan> {
    if det == 0 {
        return Err(Error::precondition("determinant must be nonzero"));
    }
    let mut candidates = Vec::new();
    for a in -coeff_bound..=coeff_bound {
        for c in -coeff_bound..=coeff_bound {
            for b in -2 * coeff_bound..=2 * coeff_bound {
                if 4 * a * c - b * b == det {
                    candidates.push(IntMatrix::from_rows(&[vec![2 * a, b], vec![b, 2 * c]])?);
                }
            }
        }
    }
    let mut groups: Vec<Vec<IntMatrix>> = Vec::new();
    'next: for cand in &candidates {
        for g in groups.iter_mut() {
            for member in g.iter() {
                if binary_equivalence(member, cand, transform_bound)?.is_some() {
                    g.push(cand.clone());
                    continue 'next;
                }
            }
        }
        groups.push(vec![cand.clone()]);
    }
    let mut classes = Vec::new();
    for mut members in groups {
        members.sort_by_key(rep_key);
        let representative = members[0].clone();
        let lattice = Lattice::from_gram(representative.clone())?;
        classes.push(BinaryClass {
            signature: lattice.signature().pair(),
            discriminant_form: discriminant_form(&lattice)?,
            representative,
            members,
            possibly_equal_to: Vec::new(),
        });
    }
    classes.sort_by_key(|c| rep_key(&c.representative));
    for i in 0..classes.len() {
        for j in 0..classes.len() {
            if i != j
                && classes[i].signature == classes[j].signature
                && fqf_isometric(&classes[i].discriminant_form, &classes[j].discriminant_form)?
            {
                classes[i].possibly_equal_to.push(j);
            }
        }
    }
    let caveat = format!(
        "complete for candidates with |a|,|c| <= {coeff_bound}, |b| <= {}; classes merged only by \
         explicit transforms with entries <= {transform_bound}",
        2 * coeff_bound
    );
    Ok(GenusScan {
        det,
        coeff_bound,
        transform_bound,
        candidates: candidates.len(),
        classes,
        caveat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_lattice_expr;

    fn lat(e: &str) -> Lattice {
        parse_lattice_expr(e).unwrap()
    }

    fn m(rows: &[[i64; 2]; 2]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn o_u3_has_four_elements() {
        let l = lat("U(3)");
        let iso = lattice_isometries(&l, 9).unwrap();
        assert_eq!(iso.order(), 4);
        assert!(iso.complete);
        assert!(iso.contains(&m(&[[0, 1], [1, 0]])));
        assert!(iso.contains(&m(&[[-1, 0], [0, -1]])));
    }

    #[test]
    fn o_u_and_rank_one() {
        let iso = lattice_isometries(&lat("U"), 3).unwrap();
        assert_eq!(iso.order(), 4);
        assert!(iso.complete);
        let iso = lattice_isometries(&lat("<-2>"), 3).unwrap();
        assert_eq!(iso.order(), 2);
    }

    #[test]
    fn non_square_discriminant_is_incomplete() {
        // x^2 - 3y^2 has infinitely many units
        let l = Lattice::from_rows(&[vec![2, 0], vec![0, -6]]).unwrap();
        let iso = lattice_isometries(&l, 10).unwrap();
        assert!(!iso.complete);
        assert!(iso.order() >= 4);
    }

    #[test]
    fn definite_groups() {
        let a2 = Lattice::from_rows(&[vec![2, -1], vec![-1, 2]]).unwrap();
        assert_eq!(lattice_isometries(&a2, 0).unwrap().order(), 12);
        let d4 = Lattice::from_rows(&crate::fqf::D4_GRAM.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
            .unwrap();
        assert_eq!(lattice_isometries(&d4, 0).unwrap().order(), 1152);
        let neg = lat("<-2>+<-2>");
        assert_eq!(lattice_isometries(&neg, 0).unwrap().order(), 8);
        assert!(lattice_isometries(&lat("E8"), 0).unwrap_err().is_inconclusive());
    }

    #[test]
    fn rank_three_indefinite_unsupported() {
        assert!(matches!(lattice_isometries(&lat("U+<2>"), 5), Err(Error::Unsupported(_))));
    }

    #[test]
    fn induced_images() {
        let l = lat("U(3)");
        let iso = lattice_isometries(&l, 9).unwrap();
        let img = induced_on_discriminant(&l, &iso).unwrap();
        assert_eq!(img.image.order(), 4);
        assert_eq!(img.kernel_size, 1);

        let l = lat("U");
        let iso = lattice_isometries(&l, 3).unwrap();
        let img = induced_on_discriminant(&l, &iso).unwrap();
        assert_eq!(img.image.order(), 1);
        assert_eq!(img.kernel_size, 4);

        let l = lat("<-4>");
        let iso = lattice_isometries(&l, 3).unwrap();
        assert_eq!(induced_on_discriminant(&l, &iso).unwrap().image.order(), 2);
    }

    #[test]
    fn surjectivity_examples() {
        let r = is_surjective_on_discriminant(&lat("U(3)")).unwrap();
        assert_eq!((r.status, r.image_order, r.target_order), (Surjectivity::Surjective, 4, 4));
        assert_eq!(r.certificate.len(), 4);
        let r = is_surjective_on_discriminant(&lat("U(2)")).unwrap();
        assert_eq!(r.status, Surjectivity::Surjective);
        assert_eq!(r.target_order, 2);
        // only ±1 preserve q = -1/8 mod 2 on Z/8
        let r = is_surjective_on_discriminant(&lat("<-8>")).unwrap();
        assert_eq!((r.status, r.target_order), (Surjectivity::Surjective, 2));
        // u in {1, 7, 17, 23} preserve q = -1/24 mod 2 on Z/24
        let r = is_surjective_on_discriminant(&lat("<-24>")).unwrap();
        assert_eq!((r.status, r.image_order, r.target_order), (Surjectivity::NotSurjective, 2, 4));
        // O(A) trivial: no isometry search needed even in unsupported rank
        let r = is_surjective_on_discriminant(&lat("U+<2>")).unwrap();
        assert_eq!((r.status, r.target_order), (Surjectivity::Surjective, 1));
        // O(A) = {1, 11, 19, 29} on Z/30, and rank-3 indefinite isometries are not enumerated
        let r = is_surjective_on_discriminant(&lat("U+<30>")).unwrap();
        assert_eq!(r.status, Surjectivity::Inconclusive);
    }

    #[test]
    fn equivalence_examples() {
        let u3 = m(&[[0, 3], [3, 0]]);
        let swap = binary_equivalence(&u3, &u3, 1).unwrap();
        assert!(swap.is_some());
        let other = m(&[[2, 1], [1, -4]]);
        assert_eq!(binary_equivalence(&u3, &other, 10).unwrap(), None);
        let u = m(&[[0, 1], [1, 0]]);
        let sheared = m(&[[0, 1], [1, 2]]);
        let p = binary_equivalence(&u, &sheared, 3).unwrap().unwrap();
        assert_eq!(u.congruent(&p).unwrap(), sheared);
    }

    #[test]
    fn genus_scan_small_determinants() {
        let scan = binary_genus_scan(-1, 3, 10).unwrap();
        let indefinite: Vec<_> = scan.classes.iter().filter(|c| c.signature == (1, 1)).collect();
        assert_eq!(indefinite.len(), 1);
        assert!(binary_equivalence(&indefinite[0].representative, &m(&[[0, 1], [1, 0]]), 10)
            .unwrap()
            .is_some());

        let scan = binary_genus_scan(-4, 5, 10).unwrap();
        let u2 = lat("U(2)");
        let g = scan.genus_of(&u2).unwrap();
        assert_eq!(g.len(), 1);
        assert!(binary_equivalence(&scan.classes[g[0]].representative, u2.gram(), 10)
            .unwrap()
            .is_some());
        assert_eq!(scan.classes.len(), 2);
        assert!(binary_genus_scan(0, 3, 3).is_err());
    }
}
