//! Picard lattice arithmetic.
//!
//! A [`GramLattice`] is an even integral lattice of signature `(1, rank - 1)`
//! given by its Gram matrix in a fixed basis. Divisor classes are integer
//! coordinate vectors in that basis ([`DivClass`]); rational combinations
//! ([`RatClass`]) appear when classes are only known up to `Q`-linear
//! equivalence.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest absolute value accepted for a Gram entry or an input coordinate.
///
/// Keeps every intersection number of classes met during enumeration inside
/// `i64`.
pub const MAX_ENTRY: i64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("NotSquare: Gram matrix is not square (row {row} has {len} entries, expected {rank})")]
    NotSquare { row: usize, len: usize, rank: usize },
    #[error("Empty: Gram matrix has no rows")]
    Empty,
    #[error("NotSymmetric: entry ({i},{j}) = {a} differs from ({j},{i}) = {b}")]
    NotSymmetric { i: usize, j: usize, a: i64, b: i64 },
    #[error("NotEven: diagonal entry {i} is {value}")]
    NotEven { i: usize, value: i64 },
    #[error("WrongSignature: found ({positive},{negative}) with {zero} zero directions, expected (1,{expected_negative})")]
    WrongSignature {
        positive: usize,
        negative: usize,
        zero: usize,
        expected_negative: usize,
    },
    #[error("EntryTooLarge: entry {value} exceeds the supported magnitude {MAX_ENTRY}")]
    EntryTooLarge { value: i64 },
    #[error("DimensionMismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("NegativeSquare: L^2 = {0} < 0")]
    NegativeSquare(i64),
    #[error("ZeroPolarizationSquare: L^2 must be positive")]
    ZeroPolarizationSquare,
}

/// An integral divisor class, as coordinates in the lattice basis.
///
/// The derived ordering is lexicographic on coordinates; every listing of
/// classes produced by this crate is sorted by it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivClass(Vec<i64>);

impl DivClass {
    pub fn new(coords: Vec<i64>) -> Self {
        DivClass(coords)
    }

    pub fn zero(rank: usize) -> Self {
        DivClass(vec![0; rank])
    }

    /// The `i`-th basis vector.
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        DivClass(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Gcd of the coordinates; zero for the zero class.
    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &c| g.gcd(&c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    pub fn scale(&self, k: i64) -> Self {
        DivClass(self.0.iter().map(|&c| c * k).collect())
    }

    /// Exact division of every coordinate by `k`, if possible.
    pub fn div_exact(&self, k: i64) -> Option<Self> {
        if k == 0 || self.0.iter().any(|&c| c % k != 0) {
            return None;
        }
        Some(DivClass(self.0.iter().map(|&c| c / k).collect()))
    }

    pub fn to_rational(&self) -> RatClass {
        RatClass(
            self.0
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }
}

impl fmt::Display for DivClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &DivClass {
    type Output = DivClass;
    fn add(self, rhs: &DivClass) -> DivClass {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch in class addition");
        DivClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DivClass {
    type Output = DivClass;
    fn sub(self, rhs: &DivClass) -> DivClass {
        assert_eq!(
            self.rank(),
            rhs.rank(),
            "rank mismatch in class subtraction"
        );
        DivClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &DivClass {
    type Output = DivClass;
    fn neg(self) -> DivClass {
        DivClass(self.0.iter().map(|c| -c).collect())
    }
}

/// A rational divisor class. Coordinates are kept as reduced fractions with
/// positive denominators (the normal form of [`BigRational`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatClass(Vec<BigRational>);

impl RatClass {
    pub fn new(coords: Vec<BigRational>) -> Self {
        RatClass(coords)
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: &BigRational, other: &RatClass, b: &BigRational) -> RatClass {
        assert_eq!(self.rank(), other.rank());
        RatClass(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
    }

    /// The integral class, when every coordinate is an integer.
    pub fn to_integral(&self) -> Option<DivClass> {
        self.0
            .iter()
            .map(|c| {
                if c.is_integer() {
                    i64::try_from(c.to_integer()).ok()
                } else {
                    None
                }
            })
            .collect::<Option<Vec<_>>>()
            .map(DivClass)
    }
}

impl fmt::Display for RatClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Counts of positive, negative and zero directions of a symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Exact inertia of a symmetric integer matrix.
///
/// Symmetric Gaussian elimination over `Q`: pivot on a nonzero diagonal
/// entry when one exists; otherwise, for a nonzero off-diagonal entry
/// `a_ij` with `a_ii = a_jj = 0`, the congruence `e_i <- e_i + e_j` creates
/// the pivot `2 a_ij`. By Sylvester's law the signs of the pivots give the
/// inertia.
pub fn signature(gram: &[Vec<i64>]) -> Signature {
    let n = gram.len();
    let mut m: Vec<Vec<BigRational>> = gram
        .iter()
        .map(|row| {
            row.iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect()
        })
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut sig = Signature {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    while !active.is_empty() {
        let pivot = match active.iter().position(|&i| !m[i][i].is_zero()) {
            Some(p) => p,
            None => {
                let pair = active.iter().enumerate().find_map(|(a, &i)| {
                    active[a + 1..]
                        .iter()
                        .find(|&&j| !m[i][j].is_zero())
                        .map(|&j| (a, i, j))
                });
                match pair {
                    Some((a, i, j)) => {
                        // e_i <- e_i + e_j, applied as a congruence.
                        for k in 0..n {
                            let v = m[j][k].clone();
                            m[i][k] += v;
                        }
                        for k in 0..n {
                            let v = m[k][j].clone();
                            m[k][i] += v;
                        }
                        a
                    }
                    None => {
                        sig.zero += active.len();
                        break;
                    }
                }
            }
        };
        let p = active.remove(pivot);
        let d = m[p][p].clone();
        if d.is_positive() {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
        for &i in &active {
            let factor = &m[i][p] / &d;
            if factor.is_zero() {
                continue;
            }
            for &j in &active {
                let delta = &factor * &m[p][j];
                m[i][j] -= delta;
            }
        }
    }
    sig
}

/// An even integral lattice of signature `(1, rank - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramLattice {
    gram: Vec<Vec<i64>>,
    basis_names: Vec<String>,
}

impl GramLattice {
    /// Validates `gram` as the Gram matrix of an even hyperbolic lattice.
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let rank = gram.len();
        let names = (0..rank).map(|i| format!("e{}", i + 1)).collect();
        Self::with_names(gram, names)
    }

    pub fn with_names(gram: Vec<Vec<i64>>, basis_names: Vec<String>) -> Result<Self, LatticeError> {
        let rank = gram.len();
        if rank == 0 {
            return Err(LatticeError::Empty);
        }
        for (row, r) in gram.iter().enumerate() {
            if r.len() != rank {
                return Err(LatticeError::NotSquare {
                    row,
                    len: r.len(),
                    rank,
                });
            }
            if let Some(&value) = r.iter().find(|v| v.abs() > MAX_ENTRY) {
                return Err(LatticeError::EntryTooLarge { value });
            }
        }
        if basis_names.len() != rank {
            return Err(LatticeError::DimensionMismatch {
                expected: rank,
                found: basis_names.len(),
            });
        }
        for i in 0..rank {
            for j in i + 1..rank {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric {
                        i,
                        j,
                        a: gram[i][j],
                        b: gram[j][i],
                    });
                }
            }
        }
        for (i, row) in gram.iter().enumerate() {
            if row[i] % 2 != 0 {
                return Err(LatticeError::NotEven { i, value: row[i] });
            }
        }
        let sig = signature(&gram);
        if sig.positive != 1 || sig.zero != 0 {
            return Err(LatticeError::WrongSignature {
                positive: sig.positive,
                negative: sig.negative,
                zero: sig.zero,
                expected_negative: rank - 1,
            });
        }
        Ok(GramLattice { gram, basis_names })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn check_class(&self, x: &DivClass) -> Result<(), LatticeError> {
        if x.rank() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                found: x.rank(),
            });
        }
        Ok(())
    }

    /// The intersection number `x.y`.
    pub fn pair(&self, x: &DivClass, y: &DivClass) -> Result<i64, LatticeError> {
        self.check_class(x)?;
        self.check_class(y)?;
        Ok(self.dot(x.coords(), y.coords()))
    }

    /// The intersection number of two rational classes.
    pub fn pair_rational(&self, x: &RatClass, y: &RatClass) -> Result<BigRational, LatticeError> {
        for v in [x.rank(), y.rank()] {
            if v != self.rank() {
                return Err(LatticeError::DimensionMismatch {
                    expected: self.rank(),
                    found: v,
                });
            }
        }
        let mut acc = BigRational::zero();
        for (i, row) in self.gram.iter().enumerate() {
            if x.0[i].is_zero() {
                continue;
            }
            let mut inner = BigRational::zero();
            for (j, &g) in row.iter().enumerate() {
                if g != 0 {
                    inner += &y.0[j] * BigRational::from_integer(BigInt::from(g));
                }
            }
            acc += &x.0[i] * inner;
        }
        Ok(acc)
    }

    /// `x.y` on raw coordinates of matching length.
    ///
    /// Panics if the value does not fit in `i64`; inputs are bounded by
    /// [`MAX_ENTRY`] and enumeration radii stay far below that limit.
    pub(crate) fn dot(&self, x: &[i64], y: &[i64]) -> i64 {
        debug_assert_eq!(x.len(), self.rank());
        debug_assert_eq!(y.len(), self.rank());
        let mut acc: i128 = 0;
        for (i, row) in self.gram.iter().enumerate() {
            if x[i] == 0 {
                continue;
            }
            let inner: i128 = row
                .iter()
                .zip(y)
                .map(|(&g, &v)| g as i128 * v as i128)
                .sum();
            acc += x[i] as i128 * inner;
        }
        i64::try_from(acc).expect("intersection number overflows i64")
    }

    pub(crate) fn sq(&self, x: &DivClass) -> i64 {
        self.dot(x.coords(), x.coords())
    }

    pub(crate) fn ip(&self, x: &DivClass, y: &DivClass) -> i64 {
        self.dot(x.coords(), y.coords())
    }

    /// The linear form `y -> x.y` as an integer vector (`gram * x`).
    pub fn dual_vector(&self, x: &DivClass) -> Vec<i64> {
        self.gram
            .iter()
            .map(|row| row.iter().zip(x.coords()).map(|(g, c)| g * c).sum())
            .collect()
    }

    /// The lattice in the basis given by the columns of `change`:
    /// Gram matrix `Uᵀ G U`.
    pub fn transformed(&self, change: &Unimodular) -> GramLattice {
        let n = self.rank();
        let u = &change.forward;
        let mut g = vec![vec![0i64; n]; n];
        for (i, gi) in g.iter_mut().enumerate() {
            for (j, gij) in gi.iter_mut().enumerate() {
                let ui: Vec<i64> = (0..n).map(|k| u[k][i]).collect();
                let uj: Vec<i64> = (0..n).map(|k| u[k][j]).collect();
                *gij = self.dot(&ui, &uj);
            }
        }
        GramLattice {
            gram: g,
            basis_names: self.basis_names.clone(),
        }
    }
}

/// A unimodular change of basis together with its inverse.
///
/// New basis vectors are the columns of `forward`; a class with old
/// coordinates `x` has new coordinates `inverse * x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unimodular {
    pub forward: Vec<Vec<i64>>,
    pub inverse: Vec<Vec<i64>>,
}

impl Unimodular {
    pub fn identity(n: usize) -> Self {
        let id: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        Unimodular {
            forward: id.clone(),
            inverse: id,
        }
    }

    /// A random product of `steps` elementary moves (column additions with
    /// multipliers in `[-2, 2]`, swaps, sign flips).
    pub fn random<R: Rng>(n: usize, steps: usize, rng: &mut R) -> Self {
        let mut u = Unimodular::identity(n);
        if n == 0 {
            return u;
        }
        for _ in 0..steps {
            match rng.gen_range(0..3) {
                0 if n > 1 => {
                    let i = rng.gen_range(0..n);
                    let mut j = rng.gen_range(0..n - 1);
                    if j >= i {
                        j += 1;
                    }
                    let k = [-2, -1, 1, 2][rng.gen_range(0..4)];
                    // column_i += k * column_j ; inverse: row_j -= k * row_i
                    for row in u.forward.iter_mut() {
                        row[i] += k * row[j];
                    }
                    let ri = u.inverse[i].clone();
                    for (c, v) in u.inverse[j].iter_mut().enumerate() {
                        *v -= k * ri[c];
                    }
                }
                1 if n > 1 => {
                    let i = rng.gen_range(0..n);
                    let j = (i + 1 + rng.gen_range(0..n - 1)) % n;
                    for row in u.forward.iter_mut() {
                        row.swap(i, j);
                    }
                    u.inverse.swap(i, j);
                }
                _ => {
                    let i = rng.gen_range(0..n);
                    for row in u.forward.iter_mut() {
                        row[i] = -row[i];
                    }
                    for v in u.inverse[i].iter_mut() {
                        *v = -*v;
                    }
                }
            }
        }
        u
    }

    /// New coordinates of a class given in old coordinates.
    pub fn to_new(&self, x: &DivClass) -> DivClass {
        DivClass(mat_vec(&self.inverse, x.coords()))
    }

    /// Old coordinates of a class given in new coordinates.
    pub fn to_old(&self, x: &DivClass) -> DivClass {
        DivClass(mat_vec(&self.forward, x.coords()))
    }
}

fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Genus `L^2/2 + 1` of the smooth curves in `|L|`.
pub fn genus_of(l: &DivClass, lat: &GramLattice) -> Result<i64, LatticeError> {
    let sq = lat.pair(l, l)?;
    if sq < 0 {
        return Err(LatticeError::NegativeSquare(sq));
    }
    Ok(sq / 2 + 1)
}

/// Brill–Noether number `rho(g, d, 1) = 2d - 2 - g` for pencils of degree `d`.
pub fn brill_noether_rho(g: i64, d: i64) -> i64 {
    2 * d - 2 - g
}

/// The rational class `-2N + (2(d + N^2)/L^2) L` with its intersection
/// numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaCandidate {
    pub class: RatClass,
    pub square: BigRational,
    pub degree_l: BigRational,
    pub degree_n: BigRational,
}

/// Evaluates the candidate class for the unique `L`-orthogonal rational curve
/// on a rank-two deformation spanned by `N` and `L`.
///
/// `degree_l` vanishes exactly when `N.L = N^2 + d`.
pub fn gamma_candidate(
    n: &DivClass,
    l: &DivClass,
    d: i64,
    lat: &GramLattice,
) -> Result<GammaCandidate, LatticeError> {
    let l2 = lat.pair(l, l)?;
    let n2 = lat.pair(n, n)?;
    if l2 == 0 {
        return Err(LatticeError::ZeroPolarizationSquare);
    }
    let coef = BigRational::new(BigInt::from(2) * BigInt::from(d + n2), BigInt::from(l2));
    let minus_two = BigRational::from_integer(BigInt::from(-2));
    let class = n.to_rational().combine(&minus_two, &l.to_rational(), &coef);
    let square = lat.pair_rational(&class, &class)?;
    let degree_l = lat.pair_rational(&class, &l.to_rational())?;
    let degree_n = lat.pair_rational(&class, &n.to_rational())?;
    Ok(GammaCandidate {
        class,
        square,
        degree_l,
        degree_n,
    })
}

/// `floor(sqrt(q))` for a nonnegative rational `q`.
pub(crate) fn floor_sqrt(q: &BigRational) -> BigInt {
    if !q.is_positive() {
        return BigInt::zero();
    }
    // floor(sqrt(q)) == floor(sqrt(floor(q))) for q >= 0.
    q.floor().to_integer().sqrt()
}

pub(crate) fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}
