//! Arithmetic and Gaussian elimination over GF(p^m).
//!
//! Elements of GF(p^m) are polynomials of degree below `m` over GF(p) reduced
//! modulo a monic irreducible polynomial. An element is encoded by the index
//! `c_0 + c_1 p + ... + c_{m-1} p^{m-1}` of its coefficient list, so zero and one
//! are always indices 0 and 1 and the element "x" is index `p`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;
/// Largest supported matrix side.
pub const MAX_MATRIX_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GaloisError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds 2^16")]
    TooLarge { p: u32, m: u32 },
    #[error("modulus must have {expected} coefficients below {p} and be monic")]
    BadModulus { expected: usize, p: u32 },
    #[error("modulus is reducible over GF({0})")]
    Reducible(u32),
    #[error("zero has no multiplicative inverse")]
    InverseOfZero,
    #[error("element index {index} is outside a field of order {q}")]
    ForeignElement { index: u32, q: u32 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("dimension mismatch: {0}")]
    Dimension(&'static str),
    #[error("matrix of {rows}x{cols} exceeds the 64x64 cap")]
    MatrixTooLarge { rows: usize, cols: usize },
}

/// A field element, identified by its canonical index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Characteristic, extension degree and modulus of GF(p^m).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    p: u32,
    m: u32,
    /// Monic modulus, low-to-high, `m + 1` coefficients. `[0, 1]` for prime fields.
    modulus: Vec<u32>,
}

// Conway polynomials for p = 2, m = 1..=8 (low-to-high).
const BINARY_CONWAY: [&[u32]; 8] = [
    &[1, 1],
    &[1, 1, 1],
    &[1, 1, 0, 1],
    &[1, 1, 0, 0, 1],
    &[1, 0, 1, 0, 0, 1],
    &[1, 1, 0, 1, 1, 0, 1],
    &[1, 1, 0, 0, 0, 0, 0, 1],
    &[1, 0, 1, 1, 1, 0, 0, 0, 1],
];

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Self, GaloisError> {
        Self::new(p, 1, None)
    }

    /// GF(p^m) with an explicit modulus, or the built-in default when `None`.
    pub fn new(p: u32, m: u32, modulus: Option<Vec<u32>>) -> Result<Self, GaloisError> {
        if !is_prime(p) {
            return Err(GaloisError::NotPrime(p));
        }
        if m == 0 {
            return Err(GaloisError::ZeroDegree);
        }
        match p.checked_pow(m) {
            Some(q) if q <= MAX_ORDER => {}
            _ => return Err(GaloisError::TooLarge { p, m }),
        }
        if m == 1 {
            return Ok(FieldSpec { p, m, modulus: vec![0, 1] });
        }
        let modulus = match modulus {
            Some(c) => {
                let ok = c.len() == m as usize + 1 && c.iter().all(|&x| x < p) && c[m as usize] == 1;
                if !ok {
                    return Err(GaloisError::BadModulus { expected: m as usize + 1, p });
                }
                if !poly_irreducible(&c, p) {
                    return Err(GaloisError::Reducible(p));
                }
                c
            }
            None => default_modulus(p, m),
        };
        Ok(FieldSpec { p, m, modulus })
    }

    /// GF(q) for a prime power q, with the default modulus.
    pub fn of_order(q: u32) -> Result<Self, GaloisError> {
        let mut p = 2;
        while p <= q && !q.is_multiple_of(p) {
            p += 1;
        }
        let mut m = 0;
        let mut r = q;
        while r > 1 && r.is_multiple_of(p) {
            r /= p;
            m += 1;
        }
        if r != 1 || q < 2 {
            return Err(GaloisError::NotPrime(q));
        }
        Self::new(p, m, None)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn order(&self) -> u32 {
        self.p.pow(self.m)
    }
}

fn default_modulus(p: u32, m: u32) -> Vec<u32> {
    if p == 2 && m <= 8 {
        return BINARY_CONWAY[m as usize - 1].to_vec();
    }
    // Smallest monic irreducible in lexicographic order of (c_{m-1}, ..., c_0).
    let count = p.pow(m);
    for idx in 0..count {
        let mut c = to_digits(idx, p, m as usize);
        c.push(1);
        if c[0] != 0 && poly_irreducible(&c, p) {
            return c;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

fn to_digits(mut idx: u32, p: u32, m: usize) -> Vec<u32> {
    let mut d = vec![0; m];
    for slot in d.iter_mut() {
        *slot = idx % p;
        idx /= p;
    }
    d
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Remainder of `a` modulo monic `b` over GF(p); both low-to-high.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        if lead != 0 {
            let shift = r.len() - 1 - db;
            for (i, &bc) in b.iter().enumerate() {
                let sub = (lead as u64 * bc as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
        r.pop();
    }
    r
}

/// Trial division by every monic polynomial of degree 1..=m/2.
fn poly_irreducible(c: &[u32], p: u32) -> bool {
    let m = c.len() - 1;
    if m <= 1 {
        return true;
    }
    for d in 1..=m / 2 {
        for idx in 0..p.pow(d as u32) {
            let mut div = to_digits(idx, p, d);
            div.push(1);
            if poly_rem(c, &div, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

#[derive(Debug)]
struct Tables {
    spec: FieldSpec,
    q: u32,
    primitive: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
}

/// GF(p^m) with precomputed log/exp tables. Cloning is cheap.
#[derive(Clone)]
pub struct GaloisField {
    t: Arc<Tables>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.t.spec.p, self.t.spec.m)
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.t, &other.t) || self.t.spec == other.t.spec
    }
}

impl Eq for GaloisField {}

impl GaloisField {
    pub fn new(spec: &FieldSpec) -> Self {
        let p = spec.p;
        let m = spec.m as usize;
        let q = spec.order();
        let slow_mul = |a: u32, b: u32| -> u32 {
            if m == 1 {
                return (a as u64 * b as u64 % p as u64) as u32;
            }
            let da = to_digits(a, p, m);
            let db = to_digits(b, p, m);
            let mut prod = vec![0u32; 2 * m - 1];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
                }
            }
            from_digits(&poly_rem(&prod, &spec.modulus, p), p)
        };
        let mut primitive = 1;
        let mut exp = vec![1u32];
        if q > 2 {
            for g in 2..q {
                let mut pw = Vec::with_capacity(q as usize - 1);
                let mut x = 1u32;
                loop {
                    pw.push(x);
                    x = slow_mul(x, g);
                    if x == 1 {
                        break;
                    }
                }
                if pw.len() == q as usize - 1 {
                    primitive = g;
                    exp = pw;
                    break;
                }
            }
        }
        let mut log = vec![0u32; q as usize];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        let neg = (0..q)
            .map(|a| {
                let d: Vec<u32> = to_digits(a, p, m).iter().map(|&c| (p - c) % p).collect();
                from_digits(&d, p)
            })
            .collect();
        GaloisField { t: Arc::new(Tables { spec: spec.clone(), q, primitive, exp, log, neg }) }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.t.spec
    }

    pub fn order(&self) -> u32 {
        self.t.q
    }

    pub fn characteristic(&self) -> u32 {
        self.t.spec.p
    }

    /// Validates an index as an element of this field.
    pub fn element(&self, index: u32) -> Result<Fe, GaloisError> {
        if index < self.t.q {
            Ok(Fe(index))
        } else {
            Err(GaloisError::ForeignElement { index, q: self.t.q })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.t.q).map(Fe)
    }

    /// Smallest-index element of multiplicative order q - 1.
    pub fn primitive_element(&self) -> Fe {
        Fe(self.t.primitive)
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.t.spec.p;
        if self.t.spec.m == 1 {
            return Fe((a.0 + b.0) % p);
        }
        if p == 2 {
            return Fe(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        Fe(out)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.t.neg[a.0 as usize])
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let n = self.t.q - 1;
        let l = (self.t.log[a.0 as usize] + self.t.log[b.0 as usize]) % n;
        Fe(self.t.exp[l as usize])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, GaloisError> {
        if a.0 == 0 {
            return Err(GaloisError::InverseOfZero);
        }
        let n = self.t.q - 1;
        let l = (n - self.t.log[a.0 as usize]) % n;
        Ok(Fe(self.t.exp[l as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, GaloisError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe::ZERO;
        }
        let n = (self.t.q - 1) as u64;
        let l = (self.t.log[a.0 as usize] as u64 * (e % n)) % n;
        Fe(self.t.exp[l as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn order_of(&self, a: Fe) -> Result<u32, GaloisError> {
        if a.0 == 0 {
            return Err(GaloisError::InverseOfZero);
        }
        let n = self.t.q - 1;
        let l = self.t.log[a.0 as usize];
        Ok(n / gcd(n, l))
    }

    fn check(&self, a: Fe) -> Result<Fe, GaloisError> {
        self.element(a.0)
    }

    /// Range-checked arithmetic, for callers holding untrusted indices.
    pub fn try_op(&self, op: FieldOp, a: Fe, b: Fe) -> Result<Fe, GaloisError> {
        let (a, b) = (self.check(a)?, self.check(b)?);
        Ok(match op {
            FieldOp::Add => self.add(a, b),
            FieldOp::Sub => self.sub(a, b),
            FieldOp::Mul => self.mul(a, b),
            FieldOp::Div => self.div(a, b)?,
        })
    }

    /// `sum_i a_i b_i`.
    pub fn dot(&self, a: &[Fe], b: &[Fe]) -> Fe {
        a.iter().zip(b).fold(Fe::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// Scales `v` so its first nonzero coordinate is one. Zero vectors are unchanged.
    pub fn normalize(&self, v: &[Fe]) -> Vec<Fe> {
        match v.iter().find(|x| !x.is_zero()) {
            Some(&lead) => {
                let s = self.inv(lead).expect("nonzero");
                v.iter().map(|&x| self.mul(x, s)).collect()
            }
            None => v.to_vec(),
        }
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Dense row-major matrix over a Galois field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: GaloisField,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl Matrix {
    pub fn new(field: &GaloisField, rows: usize, cols: usize, data: Vec<Fe>) -> Result<Self, GaloisError> {
        if rows > MAX_MATRIX_DIM || cols > MAX_MATRIX_DIM {
            return Err(GaloisError::MatrixTooLarge { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(GaloisError::Dimension("element count differs from rows x cols"));
        }
        for &x in &data {
            field.check(x)?;
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    pub fn identity(field: &GaloisField, n: usize) -> Result<Self, GaloisError> {
        let mut data = vec![Fe::ZERO; n * n];
        for i in 0..n {
            data[i * n + i] = Fe::ONE;
        }
        Matrix::new(field, n, n, data)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: &GaloisField, columns: &[Vec<Fe>]) -> Result<Self, GaloisError> {
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(GaloisError::Dimension("columns of unequal length"));
        }
        let cols = columns.len();
        let mut data = vec![Fe::ZERO; rows * cols];
        for (j, c) in columns.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                data[i * cols + j] = x;
            }
        }
        Matrix::new(field, rows, cols, data)
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }

    pub fn column(&self, c: usize) -> Vec<Fe> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn scale_row(&mut self, r: usize, s: Fe) {
        for c in 0..self.cols {
            let i = r * self.cols + c;
            self.data[i] = self.field.mul(self.data[i], s);
        }
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<Fe>> = self.data.chunks(self.cols.max(1)).map(<[Fe]>::to_vec).collect();
        if self.cols == 0 {
            return 0;
        }
        echelon(&self.field, &mut rows, self.cols).len()
    }

    /// Any `x` with `self * x = rhs`, or `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &[Fe]) -> Result<Option<Vec<Fe>>, GaloisError> {
        if rhs.len() != self.rows {
            return Err(GaloisError::Dimension("right-hand side length differs from row count"));
        }
        for &x in rhs {
            self.field.check(x)?;
        }
        Ok(solve_rows(&self.field, &self.data, self.rows, self.cols, rhs))
    }
}

/// Reduces `rows` (each of width `width`) to reduced row echelon form in place
/// and returns the pivot columns.
fn echelon(f: &GaloisField, rows: &mut [Vec<Fe>], width: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let s = f.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, s);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn solve_rows(f: &GaloisField, data: &[Fe], rows: usize, cols: usize, rhs: &[Fe]) -> Option<Vec<Fe>> {
    let mut aug: Vec<Vec<Fe>> = (0..rows)
        .map(|r| {
            let mut row = data[r * cols..(r + 1) * cols].to_vec();
            row.push(rhs[r]);
            row
        })
        .collect();
    let pivots = echelon(f, &mut aug, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Fe::ZERO; cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols];
    }
    Some(x)
}

/// Rank of a list of column vectors.
pub fn rank_of_columns(f: &GaloisField, columns: &[&[Fe]]) -> usize {
    let Some(first) = columns.first() else {
        return 0;
    };
    let height = first.len();
    let mut rows: Vec<Vec<Fe>> = columns.iter().map(|c| c.to_vec()).collect();
    echelon(f, &mut rows, height).len()
}

/// Coefficients expressing `target` in the given columns, if it lies in their span.
pub fn express(f: &GaloisField, basis: &[&[Fe]], target: &[Fe]) -> Option<Vec<Fe>> {
    let rows = target.len();
    let cols = basis.len();
    let mut data = vec![Fe::ZERO; rows * cols];
    for (j, b) in basis.iter().enumerate() {
        for (i, &x) in b.iter().enumerate() {
            data[i * cols + j] = x;
        }
    }
    solve_rows(f, &data, rows, cols, target)
}

/// Whether `target` lies in the span of the `basis` column vectors.
pub fn in_span(f: &GaloisField, basis: &[Vec<Fe>], target: &[Fe]) -> Result<bool, GaloisError> {
    if basis.iter().any(|b| b.len() != target.len()) {
        return Err(GaloisError::Dimension("basis vectors and target differ in length"));
    }
    for &x in basis.iter().flatten().chain(target) {
        f.check(x)?;
    }
    let refs: Vec<&[Fe]> = basis.iter().map(Vec::as_slice).collect();
    Ok(express(f, &refs, target).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, m: u32) -> GaloisField {
        GaloisField::new(&FieldSpec::new(p, m, None).unwrap())
    }

    #[test]
    fn small_prime_arithmetic() {
        let f2 = gf(2, 1);
        assert_eq!(f2.add(Fe(1), Fe(1)), Fe(0));
        let f5 = gf(5, 1);
        assert_eq!(f5.mul(Fe(3), Fe(4)), Fe(2));
        assert_eq!(f5.inv(Fe(0)), Err(GaloisError::InverseOfZero));
        assert_eq!(f5.sub(Fe(1), Fe(3)), Fe(3));
    }

    /// Multiplication table of GF(4) from polynomial reduction mod x^2+x+1,
    /// worked by hand: x*x = x+1, x*(x+1) = 1, (x+1)*(x+1) = x.
    #[test]
    fn gf4_multiplication_matches_polynomial_reduction() {
        let f = GaloisField::new(&FieldSpec::new(2, 2, Some(vec![1, 1, 1])).unwrap());
        let (x, x1) = (Fe(2), Fe(3));
        assert_eq!(f.mul(x, x), x1);
        assert_eq!(f.mul(x, x1), Fe::ONE);
        assert_eq!(f.mul(x1, x1), x);
    }

    #[test]
    fn primitive_elements() {
        assert_eq!(gf(2, 1).primitive_element(), Fe(1));
        assert_eq!(gf(5, 1).primitive_element(), Fe(2));
        assert_eq!(gf(2, 2).primitive_element(), Fe(2));
        assert_eq!(gf(11, 1).primitive_element(), Fe(2));
        let f = gf(3, 2);
        assert_eq!(f.order_of(f.primitive_element()).unwrap(), 8);
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(FieldSpec::new(4, 1, None), Err(GaloisError::NotPrime(4)));
        assert_eq!(FieldSpec::new(2, 17, None), Err(GaloisError::TooLarge { p: 2, m: 17 }));
        assert_eq!(FieldSpec::new(2, 2, Some(vec![1, 0, 1])), Err(GaloisError::Reducible(2)));
        assert!(matches!(FieldSpec::new(2, 2, Some(vec![1, 1])), Err(GaloisError::BadModulus { .. })));
        assert_eq!(FieldSpec::of_order(9).unwrap().degree(), 2);
        assert!(FieldSpec::of_order(12).is_err());
    }

    #[test]
    fn default_moduli_are_irreducible() {
        for (p, m) in [(2, 3), (2, 8), (3, 2), (3, 3), (5, 2), (7, 2), (2, 12)] {
            let s = FieldSpec::new(p, m, None).unwrap();
            assert!(poly_irreducible(s.modulus(), p), "GF({p}^{m})");
        }
    }

    #[test]
    fn foreign_elements_are_rejected() {
        let f = gf(3, 1);
        assert!(matches!(f.try_op(FieldOp::Add, Fe(1), Fe(7)), Err(GaloisError::ForeignElement { .. })));
        assert_eq!(f.try_op(FieldOp::Div, Fe(2), Fe(2)), Ok(Fe::ONE));
        let m3 = Matrix::identity(&f, 2).unwrap();
        assert!(Matrix::new(&f, 1, 1, vec![Fe(5)]).is_err());
        assert_eq!(m3.rank(), 2);
    }

    #[test]
    fn span_examples() {
        let f2 = gf(2, 1);
        assert!(in_span(&f2, &[vec![Fe(0), Fe(1)], vec![Fe(1), Fe(1)]], &[Fe(1), Fe(0)]).unwrap());
        let f3 = gf(3, 1);
        assert!(!in_span(&f3, &[vec![Fe(1), Fe(1)], vec![Fe(2), Fe(2)]], &[Fe(1), Fe(0)]).unwrap());
        assert!(in_span(&f3, &[vec![Fe(1)]], &[Fe(1), Fe(0)]).is_err());
    }

    #[test]
    fn solve_returns_a_solution_or_none() {
        let f = gf(5, 1);
        let m = Matrix::from_columns(&f, &[vec![Fe(1), Fe(2)], vec![Fe(3), Fe(1)]]).unwrap();
        let x = m.solve(&[Fe(4), Fe(3)]).unwrap().unwrap();
        let back: Vec<Fe> = (0..2).map(|r| f.add(f.mul(m.get(r, 0), x[0]), f.mul(m.get(r, 1), x[1]))).collect();
        assert_eq!(back, [Fe(4), Fe(3)]);
        let singular = Matrix::from_columns(&f, &[vec![Fe(1), Fe(2)], vec![Fe(2), Fe(4)]]).unwrap();
        assert_eq!(singular.solve(&[Fe(1), Fe(0)]).unwrap(), None);
        assert!(singular.solve(&[Fe(1)]).is_err());
    }
}
