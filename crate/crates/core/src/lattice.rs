//! Integral symmetric lattices given by Gram matrices.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{cmul, IntMatrix};
use crate::smith::{narrow_basis, smith_normal_form};

/// Gram matrix of E8 in the Cartan convention (Bourbaki node order).
pub const E8_CARTAN: [[i64; 8]; 8] = [
    [2, 0, -1, 0, 0, 0, 0, 0],
    [0, 2, 0, -1, 0, 0, 0, 0],
    [-1, 0, 2, -1, 0, 0, 0, 0],
    [0, -1, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, -1],
    [0, 0, 0, 0, 0, 0, -1, 2],
];

/// Default coordinate height for the hyperbolic-plane search.
pub const DEFAULT_HYPERBOLIC_HEIGHT: i64 = 10;

/// Largest number of coordinate vectors the hyperbolic search will visit.
const HYPERBOLIC_SEARCH_CAP: u64 = 1_000_000;

/// How a diagonal block of a lattice was built, when known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "scale", rename_all = "snake_case")]
pub enum BlockKind {
    /// `U(k)`.
    Hyperbolic(i64),
    /// `E8(k)`.
    E8(i64),
    /// `<m>`.
    RankOne(i64),
    /// Anything without a recognised shape.
    Gram,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Block {
    pub kind: BlockKind,
    pub start: usize,
    pub len: usize,
}

#[derive(Clone)]
pub struct Lattice {
    gram: IntMatrix,
    labels: Vec<String>,
    blocks: Vec<Block>,
    det: i64,
    signature: Signature,
}

/// Counts of positive, negative and zero eigenvalue signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn pair(&self) -> (usize, usize) {
        (self.positive, self.negative)
    }

    pub fn is_indefinite(&self) -> bool {
        self.positive > 0 && self.negative > 0
    }

    /// `p - n`.
    pub fn index(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasicInvariants {
    pub rank: usize,
    pub det: i64,
    pub signature: (usize, usize),
    pub even: bool,
    pub degenerate: bool,
}

impl Lattice {
    /// A nondegenerate lattice from a symmetric Gram matrix.
    pub fn from_gram(gram: IntMatrix) -> Result<Self> {
        let l = Self::from_gram_allow_degenerate(gram)?;
        if l.det == 0 {
            return Err(Error::Degenerate("Gram matrix has determinant 0".into()));
        }
        Ok(l)
    }

    /// Like [`Lattice::from_gram`] but accepts a zero determinant; the result reports
    /// [`Lattice::is_degenerate`].
    pub fn from_gram_allow_degenerate(gram: IntMatrix) -> Result<Self> {
        if !gram.is_square() || gram.rows() == 0 {
            return Err(Error::invalid("Gram matrix must be square of positive size"));
        }
        if !gram.is_symmetric() {
            return Err(Error::invalid("Gram matrix is not symmetric"));
        }
        let n = gram.rows();
        let det = gram.determinant()?;
        let signature = exact_signature(&gram);
        Ok(Lattice {
            labels: (0..n).map(|i| format!("b{i}")).collect(),
            blocks: vec![Block {
                kind: BlockKind::Gram,
                start: 0,
                len: n,
            }],
            gram,
            det,
            signature,
        })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_gram(IntMatrix::from_rows(rows)?)
    }

    fn with_block(mut self, kind: BlockKind, labels: Vec<String>) -> Self {
        self.blocks = vec![Block {
            kind,
            start: 0,
            len: self.rank(),
        }];
        self.labels = labels;
        self
    }

    /// `U(k)`: Gram `[[0, k], [k, 0]]`.
    pub fn hyperbolic(k: i64) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("U(0) is degenerate"));
        }
        let l = Self::from_rows(&[vec![0, k], vec![k, 0]])?;
        Ok(l.with_block(BlockKind::Hyperbolic(k), vec!["e".into(), "f".into()]))
    }

    /// `E8(k)`: the Cartan Gram matrix scaled by `k`.
    pub fn e8(k: i64) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("E8(0) is degenerate"));
        }
        let rows: Vec<Vec<i64>> = E8_CARTAN
            .iter()
            .map(|r| r.iter().map(|&v| cmul(v, k)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let l = Self::from_rows(&rows)?;
        Ok(l.with_block(BlockKind::E8(k), (1..=8).map(|i| format!("r{i}")).collect()))
    }

    /// `<m>`.
    pub fn rank_one(m: i64) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("<0> is degenerate"));
        }
        let l = Self::from_rows(&[vec![m]])?;
        Ok(l.with_block(BlockKind::RankOne(m), vec!["v".into()]))
    }

    /// The K3 lattice `E8(-1)^2 + U^3`.
    pub fn k3() -> Result<Self> {
        let e = Self::e8(-1)?;
        let u = Self::hyperbolic(1)?;
        Self::direct_sum(&[&e, &e, &u, &u, &u])
    }

    /// `U^3`, the second cohomology of an abelian surface.
    pub fn abelian_h2() -> Result<Self> {
        let u = Self::hyperbolic(1)?;
        Self::direct_sum(&[&u, &u, &u])
    }

    pub fn direct_sum(parts: &[&Lattice]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::invalid("empty direct sum"));
        }
        let grams: Vec<&IntMatrix> = parts.iter().map(|l| &l.gram).collect();
        let gram = IntMatrix::block_diag(&grams);
        let mut det: i64 = 1;
        for p in parts {
            det = det
                .checked_mul(p.det)
                .ok_or(Error::Overflow("determinant of direct sum"))?;
        }
        let mut blocks = Vec::new();
        let mut labels = Vec::new();
        let mut offset = 0;
        for (idx, p) in parts.iter().enumerate() {
            for b in &p.blocks {
                blocks.push(Block {
                    start: b.start + offset,
                    ..*b
                });
            }
            labels.extend(p.labels.iter().map(|s| format!("{}.{s}", idx + 1)));
            offset += p.rank();
        }
        let signature = Signature {
            positive: parts.iter().map(|p| p.signature.positive).sum(),
            negative: parts.iter().map(|p| p.signature.negative).sum(),
            zero: parts.iter().map(|p| p.signature.zero).sum(),
        };
        Ok(Lattice {
            gram,
            labels,
            blocks,
            det,
            signature,
        })
    }

    /// `L(k)`: the same group with the form multiplied by `k`.
    pub fn scaled(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("scale must be nonzero"));
        }
        let gram = self.gram.scale(k)?;
        let mut det = self.det;
        for _ in 0..self.rank() {
            det = det.checked_mul(k).ok_or(Error::Overflow("determinant of L(k)"))?;
        }
        let signature = if k > 0 {
            self.signature
        } else {
            Signature {
                positive: self.signature.negative,
                negative: self.signature.positive,
                zero: self.signature.zero,
            }
        };
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let kind = match b.kind {
                    BlockKind::Hyperbolic(a) => BlockKind::Hyperbolic(cmul(a, k)?),
                    BlockKind::E8(a) => BlockKind::E8(cmul(a, k)?),
                    BlockKind::RankOne(a) => BlockKind::RankOne(cmul(a, k)?),
                    BlockKind::Gram => BlockKind::Gram,
                };
                Ok(Block { kind, ..*b })
            })
            .collect::<Result<_>>()?;
        Ok(Lattice {
            gram,
            labels: self.labels.clone(),
            blocks,
            det,
            signature,
        })
    }

    /// The lattice in a new basis: Gram `P^T G P` for unimodular `P`. Block structure
    /// is forgotten.
    pub fn change_basis(&self, p: &IntMatrix) -> Result<Self> {
        if p.determinant()?.abs() != 1 {
            return Err(Error::invalid("basis change must be unimodular"));
        }
        Self::from_gram_allow_degenerate(self.gram.congruent(p)?)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.rank() {
            return Err(Error::invalid("label count does not match rank"));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn det(&self) -> i64 {
        self.det
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn is_degenerate(&self) -> bool {
        self.det == 0
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)] % 2 == 0)
    }

    pub fn is_indefinite(&self) -> bool {
        self.signature.is_indefinite()
    }

    pub fn is_definite(&self) -> bool {
        !self.is_degenerate() && !self.is_indefinite()
    }

    pub fn is_unimodular(&self) -> bool {
        self.det.abs() == 1
    }

    /// `b(x, y)` for coordinate vectors.
    pub fn pair(&self, x: &[i64], y: &[i64]) -> Result<i64> {
        self.gram.pair(x, y)
    }

    pub fn basic_invariants(&self) -> BasicInvariants {
        BasicInvariants {
            rank: self.rank(),
            det: self.det,
            signature: self.signature.pair(),
            even: self.is_even(),
            degenerate: self.is_degenerate(),
        }
    }

    /// Expression-style description, e.g. `U(2)+E8(-2)+<-4>`.
    pub fn describe(&self) -> String {
        self.blocks
            .iter()
            .map(|b| match b.kind {
                BlockKind::Hyperbolic(1) => "U".to_string(),
                BlockKind::Hyperbolic(k) => format!("U({k})"),
                BlockKind::E8(1) => "E8".to_string(),
                BlockKind::E8(k) => format!("E8({k})"),
                BlockKind::RankOne(m) => format!("<{m}>"),
                BlockKind::Gram => {
                    let sub: Vec<Vec<i64>> = (b.start..b.start + b.len)
                        .map(|i| self.gram.row(i)[b.start..b.start + b.len].to_vec())
                        .collect();
                    format!("{sub:?}")
                }
            })
            .collect::<Vec<_>>()
            .join("+")
    }

    pub(crate) fn require_nondegenerate(&self) -> Result<()> {
        if self.is_degenerate() {
            Err(Error::Degenerate(format!("{} has determinant 0", self.describe())))
        } else {
            Ok(())
        }
    }

    pub(crate) fn require_even(&self) -> Result<()> {
        if self.is_even() {
            Ok(())
        } else {
            Err(Error::NotEven)
        }
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.gram == other.gram
    }
}

impl Eq for Lattice {}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice({}: {:?})", self.describe(), self.gram)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    gram: IntMatrix,
    #[serde(default)]
    labels: Vec<String>,
}

impl Serialize for Lattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeJson {
            gram: self.gram.clone(),
            labels: self.labels.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = LatticeJson::deserialize(d)?;
        let l = Lattice::from_gram_allow_degenerate(j.gram).map_err(serde::de::Error::custom)?;
        if j.labels.is_empty() {
            Ok(l)
        } else {
            l.with_labels(j.labels).map_err(serde::de::Error::custom)
        }
    }
}

/// Signature by exact symmetric Gaussian elimination over the rationals.
fn exact_signature(gram: &IntMatrix) -> Signature {
    let n = gram.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer(BigInt::from(gram[(i, j)])))
                .collect()
        })
        .collect();
    let mut sig = Signature {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                a.swap(k, i);
                for row in a.iter_mut() {
                    row.swap(k, i);
                }
            } else if let Some((i, j)) = (k..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_zero())
            {
                // row/col i += row/col j makes the diagonal 2*a[i][j] != 0
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[i][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][i] += v;
                }
                a.swap(k, i);
                for row in a.iter_mut() {
                    row.swap(k, i);
                }
            } else {
                sig.zero = n - k;
                return sig;
            }
        }
        let pivot = a[k][k].clone();
        if pivot.is_positive() {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for c in k..n {
                let v = &f * &a[k][c];
                a[i][c] -= v;
            }
            for r in k..n {
                let v = &f * &a[r][k];
                a[r][i] -= v;
            }
        }
    }
    sig
}

/// A sublattice given by generators in ambient coordinates.
#[derive(Debug, Clone)]
pub struct SublatticeSpec {
    pub ambient: Lattice,
    pub generators: Vec<Vec<i64>>,
}

impl SublatticeSpec {
    pub fn new(ambient: Lattice, generators: Vec<Vec<i64>>) -> Result<Self> {
        let n = ambient.rank();
        if generators.is_empty() {
            return Err(Error::invalid("a sublattice needs at least one generator"));
        }
        if let Some(g) = generators.iter().find(|g| g.len() != n) {
            return Err(Error::invalid(format!(
                "generator {g:?} has length {}, ambient rank is {n}",
                g.len()
            )));
        }
        if generators.iter().all(|g| g.iter().all(|&x| x == 0)) {
            return Err(Error::invalid("generators span the zero subgroup"));
        }
        Ok(SublatticeSpec { ambient, generators })
    }

    fn generator_matrix(&self) -> Result<IntMatrix> {
        IntMatrix::from_rows(&self.generators)
    }

    /// Gram matrix of the generators.
    pub fn induced_gram(&self) -> Result<IntMatrix> {
        let m = self.generator_matrix()?;
        m.mul(self.ambient.gram())?.mul(&m.transpose())
    }
}

/// The orthogonal complement of a sublattice, with its basis in ambient coordinates.
#[derive(Debug, Clone, Serialize)]
pub struct Complement {
    pub basis: Vec<Vec<i64>>,
    /// `None` when the complement is zero.
    pub lattice: Option<Lattice>,
    pub degenerate: bool,
}

impl Complement {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

pub fn orthogonal_complement(spec: &SublatticeSpec) -> Result<Complement> {
    spec.ambient.require_nondegenerate()?;
    let pairing = spec.generator_matrix()?.mul(spec.ambient.gram())?;
    let basis = smith_normal_form(&pairing)?.kernel_basis()?;
    if basis.is_empty() {
        return Ok(Complement {
            basis,
            lattice: None,
            degenerate: false,
        });
    }
    let b = IntMatrix::from_columns(&basis, spec.ambient.rank())?;
    let lattice = Lattice::from_gram_allow_degenerate(spec.ambient.gram().congruent(&b)?)?;
    Ok(Complement {
        degenerate: lattice.is_degenerate(),
        basis,
        lattice: Some(lattice),
    })
}

/// Outcome of [`is_primitive_sublattice`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Primitivity {
    pub primitive: bool,
    /// Index of the generated subgroup in its saturation.
    pub index: i64,
    /// Basis of `(span ⊗ Q) ∩ L`.
    pub saturation: Vec<Vec<i64>>,
}

pub fn is_primitive_sublattice(spec: &SublatticeSpec) -> Result<Primitivity> {
    let m = spec.generator_matrix()?;
    let s = smith_normal_form(&m)?;
    let k = m.rows();
    if s.rank() < k {
        let dep = s.left_kernel_basis()?.remove(0);
        return Err(Error::Dependent(dep));
    }
    let mut index: i64 = 1;
    for &d in &s.diagonal {
        index = index.checked_mul(d).ok_or(Error::Overflow("sublattice index"))?;
    }
    let saturation = narrow_basis((0..k).map(|i| s.right_inv.row(i).to_vec()).collect())?;
    Ok(Primitivity {
        primitive: index == 1,
        index,
        saturation,
    })
}

/// Result of looking for an orthogonal summand isometric to `U`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum HyperbolicSummand {
    /// A `U` block in the constructor expression.
    Structural { block: usize, e: Vec<i64>, f: Vec<i64> },
    /// Found by the bounded search; the split was verified.
    Found { e: Vec<i64>, f: Vec<i64>, height: i64 },
    /// Nothing up to the stated coordinate height. Not a proof of absence.
    NotFound { height: i64 },
}

impl HyperbolicSummand {
    pub fn is_found(&self) -> bool {
        !matches!(self, HyperbolicSummand::NotFound { .. })
    }
}

pub fn has_hyperbolic_summand(l: &Lattice, height: i64) -> Result<HyperbolicSummand> {
    l.require_nondegenerate()?;
    l.require_even()?;
    let n = l.rank();
    for (idx, b) in l.blocks.iter().enumerate() {
        if b.kind == BlockKind::Hyperbolic(1) {
            let mut e = vec![0; n];
            let mut f = vec![0; n];
            e[b.start] = 1;
            f[b.start + 1] = 1;
            return Ok(HyperbolicSummand::Structural { block: idx, e, f });
        }
    }
    if n < 2 {
        return Ok(HyperbolicSummand::NotFound { height });
    }

    // shrink the height until the box fits the search cap
    let mut h = height.max(0);
    while h > 0 && (2 * h as u64 + 1).checked_pow(n as u32).is_none_or(|c| c > HYPERBOLIC_SEARCH_CAP) {
        h -= 1;
    }

    let mut isotropic: Vec<Vec<i64>> = Vec::new();
    let mut v = vec![-h; n];
    loop {
        let nonzero = v.iter().any(|&x| x != 0);
        if nonzero && l.pair(&v, &v)? == 0 {
            isotropic.push(v.clone());
        }
        let mut i = 0;
        while i < n && v[i] == h {
            v[i] = -h;
            i += 1;
        }
        if i == n {
            break;
        }
        v[i] += 1;
    }

    for e in &isotropic {
        let e_first = e.iter().find(|&&x| x != 0).copied().unwrap_or(0);
        if e_first < 0 {
            continue;
        }
        for f in &isotropic {
            if l.pair(e, f)? != 1 {
                continue;
            }
            let spec = SublatticeSpec::new(l.clone(), vec![e.clone(), f.clone()])?;
            let c = orthogonal_complement(&spec)?;
            let splits = c.rank() == n - 2
                && c.lattice
                    .as_ref()
                    .is_none_or(|m| m.det().checked_neg() == Some(l.det()));
            if splits {
                return Ok(HyperbolicSummand::Found {
                    e: e.clone(),
                    f: f.clone(),
                    height: h,
                });
            }
        }
    }
    Ok(HyperbolicSummand::NotFound { height: h })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperbolic_invariants() {
        let u = Lattice::hyperbolic(1).unwrap();
        let inv = u.basic_invariants();
        assert_eq!((inv.rank, inv.det, inv.signature, inv.even), (2, -1, (1, 1), true));
        let u3 = Lattice::hyperbolic(3).unwrap();
        assert_eq!(u3.det(), -9);
        assert_eq!(u3.signature().pair(), (1, 1));
    }

    #[test]
    fn e8_is_even_unimodular_positive() {
        let e = Lattice::e8(1).unwrap();
        assert_eq!(e.det(), 1);
        assert_eq!(e.signature().pair(), (8, 0));
        assert!(e.is_even());
        let e2 = Lattice::e8(-2).unwrap();
        assert_eq!(e2.det(), 256);
        assert_eq!(e2.signature().pair(), (0, 8));
    }

    #[test]
    fn k3_lattice() {
        let l = Lattice::k3().unwrap();
        assert_eq!(l.rank(), 22);
        assert_eq!(l.det(), -1);
        assert_eq!(l.signature().pair(), (3, 19));
        assert!(l.is_even());
    }

    #[test]
    fn degenerate_signature_counts_zero() {
        let l = Lattice::from_gram_allow_degenerate(IntMatrix::from_rows(&[vec![0]]).unwrap())
            .unwrap();
        assert!(l.is_degenerate());
        assert_eq!(l.signature().zero, 1);
        let l = Lattice::from_gram_allow_degenerate(
            IntMatrix::from_rows(&[vec![2, 2], vec![2, 2]]).unwrap(),
        )
        .unwrap();
        assert_eq!(l.signature(), Signature { positive: 1, negative: 0, zero: 1 });
        assert!(Lattice::from_rows(&[vec![0]]).is_err());
    }

    #[test]
    fn asymmetric_gram_rejected() {
        assert!(Lattice::from_rows(&[vec![0, 1], vec![2, 0]]).is_err());
    }

    #[test]
    fn complement_of_diagonal_in_u() {
        let u = Lattice::hyperbolic(1).unwrap();
        let c = orthogonal_complement(&SublatticeSpec::new(u.clone(), vec![vec![1, 1]]).unwrap())
            .unwrap();
        assert_eq!(c.rank(), 1);
        let v = &c.basis[0];
        assert!(v == &vec![1, -1] || v == &vec![-1, 1]);
        assert_eq!(c.lattice.unwrap().gram()[(0, 0)], -2);
        assert!(!c.degenerate);
    }

    #[test]
    fn complement_of_isotropic_line_is_degenerate() {
        let u = Lattice::hyperbolic(1).unwrap();
        let c = orthogonal_complement(&SublatticeSpec::new(u, vec![vec![1, 0]]).unwrap()).unwrap();
        assert_eq!(c.basis.len(), 1);
        assert_eq!(c.basis[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1, 0]);
        assert!(c.degenerate);
    }

    #[test]
    fn complement_of_whole_lattice_is_empty() {
        let u = Lattice::hyperbolic(1).unwrap();
        let c = orthogonal_complement(&SublatticeSpec::new(u, vec![vec![1, 0], vec![0, 1]]).unwrap())
            .unwrap();
        assert_eq!(c.rank(), 0);
        assert!(c.lattice.is_none());
    }

    #[test]
    fn primitivity_examples() {
        let u = Lattice::hyperbolic(1).unwrap();
        let p = is_primitive_sublattice(&SublatticeSpec::new(u.clone(), vec![vec![2, 0]]).unwrap())
            .unwrap();
        assert!(!p.primitive);
        assert_eq!(p.index, 2);
        assert_eq!(p.saturation[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1, 0]);

        let p = is_primitive_sublattice(&SublatticeSpec::new(u.clone(), vec![vec![1, 1]]).unwrap())
            .unwrap();
        assert!(p.primitive);

        let p = is_primitive_sublattice(
            &SublatticeSpec::new(u.clone(), vec![vec![1, -1], vec![1, 1]]).unwrap(),
        )
        .unwrap();
        assert!(!p.primitive);
        assert_eq!(p.index, 2);
        let sat = IntMatrix::from_rows(&p.saturation).unwrap();
        assert_eq!(sat.determinant().unwrap().abs(), 1);

        let err = is_primitive_sublattice(
            &SublatticeSpec::new(u, vec![vec![1, 2], vec![2, 4]]).unwrap(),
        )
        .unwrap_err();
        match err {
            Error::Dependent(c) => assert_eq!(c[0] * 1 + c[1] * 2, 0),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn hyperbolic_summand_detection() {
        let l = Lattice::direct_sum(&[&Lattice::hyperbolic(1).unwrap(), &Lattice::rank_one(-4).unwrap()])
            .unwrap();
        assert!(matches!(
            has_hyperbolic_summand(&l, 10).unwrap(),
            HyperbolicSummand::Structural { block: 0, .. }
        ));
        let u2 = Lattice::hyperbolic(2).unwrap();
        assert_eq!(
            has_hyperbolic_summand(&u2, 10).unwrap(),
            HyperbolicSummand::NotFound { height: 10 }
        );
        // U in a sheared basis is found by search
        let sheared = Lattice::from_rows(&[vec![0, 1], vec![1, 2]]).unwrap();
        assert!(matches!(
            has_hyperbolic_summand(&sheared, 10).unwrap(),
            HyperbolicSummand::Found { .. }
        ));
    }

    #[test]
    fn scaling_swaps_signature_for_negative_factor() {
        let l = Lattice::direct_sum(&[&Lattice::hyperbolic(1).unwrap(), &Lattice::rank_one(4).unwrap()])
            .unwrap();
        let m = l.scaled(-3).unwrap();
        assert_eq!(m.signature().pair(), (1, 2));
        assert_eq!(m.det(), -4 * -27);
        assert_eq!(m.describe(), "U(-3)+<-12>");
    }
}
