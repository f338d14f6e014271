//! Storage schemes: which linear combination of the `k` objects each server holds.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::galois::{self, Fe, FieldSpec, GaloisError, GaloisField};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodebookError {
    #[error(transparent)]
    Field(#[from] GaloisError),
    #[error("need n >= k >= 1 (got n = {n}, k = {k})")]
    BadShape { n: usize, k: usize },
    #[error("column {0} is the zero vector")]
    ZeroColumn(usize),
    #[error("column {0} does not have k coordinates")]
    ColumnLength(usize),
    #[error("generator columns have rank {rank} < k = {k}")]
    RankDeficient { rank: usize, k: usize },
    #[error("replica count for object {0} is zero")]
    ZeroReplicas(usize),
    #[error("service rate must be positive")]
    NonPositiveRate,
    #[error("field of order {q} is too small: {need}")]
    FieldTooSmall { q: u32, need: &'static str },
    #[error("constructed code failed the MDS check")]
    NotMds,
    #[error("k = {0} is outside the supported range")]
    KOutOfRange(usize),
    #[error("invalid LRC profile: {0}")]
    Profile(&'static str),
}

/// `n` servers, each storing one linear combination of `k` objects and serving
/// requests at rate `mu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StorageScheme {
    field: GaloisField,
    k: usize,
    columns: Vec<Vec<Fe>>,
    mu: Rational,
}

impl StorageScheme {
    /// Validates and wraps an explicit list of generator columns.
    pub fn explicit(spec: &FieldSpec, k: usize, columns: Vec<Vec<Fe>>, mu: Rational) -> Result<Self, CodebookError> {
        Self::with_field(GaloisField::new(spec), k, columns, mu)
    }

    pub fn with_field(field: GaloisField, k: usize, columns: Vec<Vec<Fe>>, mu: Rational) -> Result<Self, CodebookError> {
        let n = columns.len();
        if k == 0 || n < k {
            return Err(CodebookError::BadShape { n, k });
        }
        if mu <= Rational::zero() {
            return Err(CodebookError::NonPositiveRate);
        }
        for (j, c) in columns.iter().enumerate() {
            if c.len() != k {
                return Err(CodebookError::ColumnLength(j));
            }
            for &x in c {
                field.element(x.index())?;
            }
            if c.iter().all(|x| x.is_zero()) {
                return Err(CodebookError::ZeroColumn(j));
            }
        }
        let refs: Vec<&[Fe]> = columns.iter().map(Vec::as_slice).collect();
        let rank = galois::rank_of_columns(&field, &refs);
        if rank < k {
            return Err(CodebookError::RankDeficient { rank, k });
        }
        Ok(StorageScheme { field, k, columns, mu })
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }

    pub fn mu(&self) -> Rational {
        self.mu
    }

    pub fn columns(&self) -> &[Vec<Fe>] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &[Fe] {
        &self.columns[j]
    }

    /// Same columns, different per-server rate.
    pub fn with_mu(&self, mu: Rational) -> Result<Self, CodebookError> {
        Self::with_field(self.field.clone(), self.k, self.columns.clone(), mu)
    }

    /// Appends one server.
    pub fn with_column(&self, column: Vec<Fe>) -> Result<Self, CodebookError> {
        let mut cols = self.columns.clone();
        cols.push(column);
        Self::with_field(self.field.clone(), self.k, cols, self.mu)
    }

    /// Codeword `(c_1 . x, ..., c_n . x)` for data `x`.
    pub fn encode(&self, data: &[Fe]) -> Vec<Fe> {
        self.columns.iter().map(|c| self.field.dot(c, data)).collect()
    }

    /// Index of the object whose unit vector (up to scale) column `j` is, if any.
    pub fn systematic_object(&self, j: usize) -> Option<usize> {
        let c = &self.columns[j];
        let nz: Vec<usize> = (0..self.k).filter(|&i| !c[i].is_zero()).collect();
        (nz.len() == 1).then(|| nz[0])
    }

    /// Whether every `k` columns are linearly independent.
    pub fn is_mds(&self) -> bool {
        let mut ok = true;
        for_each_subset(self.n(), self.k, &mut |s| {
            let cols: Vec<&[Fe]> = s.iter().map(|&j| self.columns[j].as_slice()).collect();
            if galois::rank_of_columns(&self.field, &cols) < self.k {
                ok = false;
            }
            ok
        });
        ok
    }
}

/// Calls `f` on each `size`-subset of `0..n` in lexicographic order until it returns false.
pub(crate) fn for_each_subset(n: usize, size: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    if size > n {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let mut i = size;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - size + i {
                idx[i] += 1;
                for j in i + 1..size {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn unit(k: usize, i: usize) -> Vec<Fe> {
    let mut v = vec![Fe::ZERO; k];
    v[i] = Fe::ONE;
    v
}

fn binary() -> GaloisField {
    GaloisField::new(&FieldSpec::prime(2).expect("2 is prime"))
}

/// Unit vectors `e_i`, object `i` repeated `replicas[i]` times.
pub fn make_replication(k: usize, replicas: &[usize], mu: Rational) -> Result<StorageScheme, CodebookError> {
    if replicas.len() != k {
        return Err(CodebookError::BadShape { n: replicas.len(), k });
    }
    if let Some(i) = replicas.iter().position(|&r| r == 0) {
        return Err(CodebookError::ZeroReplicas(i));
    }
    let columns = replicas.iter().enumerate().flat_map(|(i, &r)| (0..r).map(move |_| unit(k, i))).collect();
    StorageScheme::with_field(binary(), k, columns, mu)
}

/// An `[n, k]` MDS code.
///
/// Systematic codes are the extended Reed-Solomon code on the evaluation points
/// `0, 1, ..., q-1, inf` (first `n` of them) brought to the form `[I | A]`, with
/// each parity column scaled so its first nonzero entry is one; this needs
/// `n <= q + 1` (any `q` for a single parity). Non-systematic codes are Vandermonde columns
/// `(1, x, ..., x^{k-1})` on the nonzero points `x = 1, ..., n` (by index), so no
/// column is a unit vector; this needs `n <= q - 1`.
pub fn make_mds(n: usize, k: usize, spec: &FieldSpec, systematic: bool, mu: Rational) -> Result<StorageScheme, CodebookError> {
    if k == 0 || n < k {
        return Err(CodebookError::BadShape { n, k });
    }
    let f = GaloisField::new(spec);
    let q = f.order() as usize;
    let vandermonde = |x: Fe| -> Vec<Fe> { (0..k).map(|e| f.pow(x, e as u64)).collect() };
    let columns = if n == k {
        (0..k).map(|i| unit(k, i)).collect()
    } else if systematic && n == k + 1 {
        // Single parity: the all-ones column works over every field.
        let mut cols: Vec<Vec<Fe>> = (0..k).map(|i| unit(k, i)).collect();
        cols.push(vec![Fe::ONE; k]);
        cols
    } else if systematic {
        if n > q + 1 {
            return Err(CodebookError::FieldTooSmall { q: q as u32, need: "systematic MDS needs n <= q + 1" });
        }
        let mut g: Vec<Vec<Fe>> = (0..n.min(q)).map(|x| vandermonde(Fe(x as u32))).collect();
        if n == q + 1 {
            g.push(unit(k, k - 1));
        }
        systematize(&f, &g, k)?
    } else {
        if n + 1 > q {
            return Err(CodebookError::FieldTooSmall { q: q as u32, need: "non-systematic MDS needs n <= q - 1" });
        }
        (1..=n).map(|x| vandermonde(Fe(x as u32))).collect()
    };
    let s = StorageScheme::with_field(f, k, columns, mu)?;
    if !s.is_mds() {
        return Err(CodebookError::NotMds);
    }
    Ok(s)
}

/// Rewrites columns `g` as `B^{-1} g` where `B` is the first `k` columns, and
/// normalizes the non-identity columns.
fn systematize(f: &GaloisField, g: &[Vec<Fe>], k: usize) -> Result<Vec<Vec<Fe>>, CodebookError> {
    let basis: Vec<&[Fe]> = g[..k].iter().map(Vec::as_slice).collect();
    let mut out: Vec<Vec<Fe>> = (0..k).map(|i| unit(k, i)).collect();
    for col in &g[k..] {
        let coords = galois::express(f, &basis, col).ok_or(CodebookError::NotMds)?;
        out.push(f.normalize(&coords));
    }
    Ok(out)
}

/// Binary `[2^k - 1, k]` Simplex code. Column `v` (1-based) has bit `i` of `v` in row `i`.
pub fn make_simplex(k: usize, mu: Rational) -> Result<StorageScheme, CodebookError> {
    if !(2..=4).contains(&k) {
        return Err(CodebookError::KOutOfRange(k));
    }
    let columns = (1u32..(1 << k)).map(|v| (0..k).map(|i| Fe((v >> i) & 1)).collect()).collect();
    StorageScheme::with_field(binary(), k, columns, mu)
}

/// Binary first-order Reed-Muller code RM(1, k-1), length `2^{k-1}`.
///
/// Point `x_i` of F_2^{k-1} has coordinate `j` equal to bit `j-1` of `i`. Row `r_j`
/// (`j >= 1`) is the indicator of `x_{i,j} = 0` and `r_0` is all ones; the rows are
/// stacked as `r_{k-1}, ..., r_1, r_0`. The systematic variant replaces the last
/// row by the sum of all rows.
pub fn make_rm1(k: usize, systematic: bool, mu: Rational) -> Result<StorageScheme, CodebookError> {
    if !(2..=8).contains(&k) {
        return Err(CodebookError::KOutOfRange(k));
    }
    let n = 1usize << (k - 1);
    let indicator = |j: usize, i: usize| -> u32 { u32::from((i >> (j - 1)) & 1 == 0) };
    let columns = (0..n)
        .map(|i| {
            let mut col: Vec<u32> = (1..k).rev().map(|j| indicator(j, i)).collect();
            let last = if systematic { (col.iter().sum::<u32>() + 1) % 2 } else { 1 };
            col.push(last);
            col.into_iter().map(Fe).collect()
        })
        .collect();
    StorageScheme::with_field(binary(), k, columns, mu)
}

/// One local group of a Pyramid-style LRC: `r` objects plus `ell - r` local parities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalGroup {
    /// Object indices (0-based), `r` of them.
    pub objects: Vec<usize>,
    /// Coefficients of each local parity over `objects`, one vector per parity.
    pub parities: Vec<Vec<Fe>>,
}

/// `(ell, r)` information locality layout with `p` global parities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LrcProfile {
    pub k: usize,
    pub ell: usize,
    pub r: usize,
    pub groups: Vec<LocalGroup>,
    pub global_parities: usize,
}

impl LrcProfile {
    /// Consecutive groups of `r` objects, each extended to a systematic `[ell, r]`
    /// MDS local code (see [`make_mds`]).
    pub fn pyramid(k: usize, ell: usize, r: usize, global_parities: usize, spec: &FieldSpec) -> Result<Self, CodebookError> {
        if r == 0 || ell <= r || !k.is_multiple_of(r) {
            return Err(CodebookError::Profile("need ell > r >= 1 and r dividing k"));
        }
        let local = make_mds(ell, r, spec, true, Rational::one())?;
        let parities: Vec<Vec<Fe>> = local.columns()[r..].to_vec();
        let groups = (0..k / r)
            .map(|g| LocalGroup { objects: (g * r..(g + 1) * r).collect(), parities: parities.clone() })
            .collect();
        Ok(LrcProfile { k, ell, r, groups, global_parities })
    }

    /// The `(12, 4)` layout with `(4, 2)` locality: local parities `a+b, a+2b` and
    /// `c+d, 3c+4d`, plus four global parities.
    pub fn example_12_4() -> Self {
        let c = |a: u32, b: u32| vec![Fe(a), Fe(b)];
        LrcProfile {
            k: 4,
            ell: 4,
            r: 2,
            groups: vec![
                LocalGroup { objects: vec![0, 1], parities: vec![c(1, 1), c(1, 2)] },
                LocalGroup { objects: vec![2, 3], parities: vec![c(1, 1), c(3, 4)] },
            ],
            global_parities: 4,
        }
    }

    pub fn n(&self) -> usize {
        self.k + self.groups.iter().map(|g| g.parities.len()).sum::<usize>() + self.global_parities
    }

    /// Server indices of group `g` in the layout produced by [`make_lrc`]:
    /// systematic servers first, then local parities.
    pub fn group_servers(&self, g: usize) -> (Vec<usize>, Vec<usize>) {
        let systematic = self.groups[g].objects.clone();
        let start = self.k + self.groups[..g].iter().map(|x| x.parities.len()).sum::<usize>();
        let parity = (start..start + self.groups[g].parities.len()).collect();
        (systematic, parity)
    }

    pub fn global_servers(&self) -> Vec<usize> {
        let start = self.n() - self.global_parities;
        (start..self.n()).collect()
    }

    fn validate(&self, f: &GaloisField) -> Result<(), CodebookError> {
        let (k, ell, r) = (self.k, self.ell, self.r);
        if r == 0 || ell <= r || k == 0 {
            return Err(CodebookError::Profile("need ell > r >= 1"));
        }
        if self.groups.len() * r != k {
            return Err(CodebookError::Profile("groups must partition the objects into k/r groups"));
        }
        let mut seen = vec![false; k];
        for g in &self.groups {
            if g.objects.len() != r {
                return Err(CodebookError::Profile("each group holds r objects"));
            }
            for &o in &g.objects {
                if o >= k || seen[o] {
                    return Err(CodebookError::Profile("groups must partition the objects"));
                }
                seen[o] = true;
            }
            if g.parities.len() != ell - r || g.parities.iter().any(|p| p.len() != r) {
                return Err(CodebookError::Profile("each group has ell - r parities over its r objects"));
            }
            for &x in g.parities.iter().flatten() {
                f.element(x.index())?;
            }
            // Local code [I_r | parities] must have minimum distance ell - r + 1,
            // i.e. every r of its ell columns are independent.
            let mut cols: Vec<Vec<Fe>> = (0..r).map(|i| unit(r, i)).collect();
            cols.extend(g.parities.iter().cloned());
            let mut mds = true;
            for_each_subset(ell, r, &mut |s| {
                let sub: Vec<&[Fe]> = s.iter().map(|&j| cols[j].as_slice()).collect();
                mds = galois::rank_of_columns(f, &sub) == r;
                mds
            });
            if !mds {
                return Err(CodebookError::Profile("local group code has distance below ell - r + 1"));
            }
        }
        Ok(())
    }
}

/// Pyramid-style LRC. Columns: `e_0, ..., e_{k-1}`, then each
/// group's local parities (group order), then `p` global parities
/// `(1, x, ..., x^{k-1})` on the nonzero points `x = 1, ..., p`.
pub fn make_lrc(profile: &LrcProfile, spec: &FieldSpec, mu: Rational) -> Result<StorageScheme, CodebookError> {
    let f = GaloisField::new(spec);
    profile.validate(&f)?;
    let k = profile.k;
    let q = f.order() as usize;
    if profile.global_parities + 1 > q {
        return Err(CodebookError::FieldTooSmall { q: q as u32, need: "global parities need p <= q - 1 nonzero points" });
    }
    let mut columns: Vec<Vec<Fe>> = Vec::with_capacity(profile.n());
    columns.extend((0..k).map(|o| unit(k, o)));
    for g in &profile.groups {
        for coeffs in &g.parities {
            let mut col = vec![Fe::ZERO; k];
            for (&o, &c) in g.objects.iter().zip(coeffs) {
                col[o] = c;
            }
            columns.push(col);
        }
    }
    for x in 1..=profile.global_parities {
        columns.push((0..k).map(|e| f.pow(Fe(x as u32), e as u64)).collect());
    }
    StorageScheme::with_field(f, k, columns, mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn cols(s: &StorageScheme) -> Vec<Vec<u32>> {
        s.columns().iter().map(|c| c.iter().map(|x| x.index()).collect()).collect()
    }

    #[test]
    fn replication_layouts() {
        let s = make_replication(2, &[2, 2], int(1)).unwrap();
        assert_eq!(cols(&s), [[1, 0], [1, 0], [0, 1], [0, 1]]);
        let one = make_replication(1, &[1], int(1)).unwrap();
        assert_eq!(cols(&one), [[1]]);
        assert_eq!(make_replication(2, &[4, 4], int(1)).unwrap().n(), 8);
        assert_eq!(make_replication(2, &[1, 0], int(1)), Err(CodebookError::ZeroReplicas(1)));
    }

    #[test]
    fn systematic_mds_over_gf3() {
        let s = make_mds(4, 2, &FieldSpec::prime(3).unwrap(), true, int(1)).unwrap();
        assert_eq!(cols(&s), [[1, 0], [0, 1], [1, 1], [1, 2]]);
        assert!(s.is_mds());
    }

    #[test]
    fn mds_edge_cases() {
        let id = make_mds(3, 3, &FieldSpec::prime(2).unwrap(), true, int(1)).unwrap();
        assert_eq!(cols(&id), [[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        let ns = make_mds(8, 2, &FieldSpec::prime(11).unwrap(), false, int(1)).unwrap();
        assert!(ns.is_mds());
        assert!((0..8).all(|j| ns.systematic_object(j).is_none()));
        assert!(matches!(
            make_mds(5, 2, &FieldSpec::prime(3).unwrap(), true, int(1)),
            Err(CodebookError::FieldTooSmall { .. })
        ));
        for (n, k, q) in [(6, 3, 5), (8, 3, 7), (10, 4, 11), (5, 3, 4), (9, 3, 8)] {
            let s = make_mds(n, k, &FieldSpec::of_order(q).unwrap(), true, int(1)).unwrap();
            assert!(s.is_mds(), "[{n},{k}] over GF({q})");
            assert!((0..k).all(|i| s.systematic_object(i) == Some(i)));
        }
    }

    #[test]
    fn simplex_columns() {
        let s2 = make_simplex(2, int(1)).unwrap();
        assert_eq!(cols(&s2), [[1, 0], [0, 1], [1, 1]]);
        let s3 = make_simplex(3, int(1)).unwrap();
        assert_eq!(s3.n(), 7);
        assert_eq!(make_simplex(4, int(1)).unwrap().n(), 15);
        assert_eq!(make_simplex(5, int(1)), Err(CodebookError::KOutOfRange(5)));
    }

    #[test]
    fn reed_muller_matrix() {
        let s = make_rm1(4, false, int(1)).unwrap();
        let rows: Vec<Vec<u32>> = (0..4).map(|r| s.columns().iter().map(|c| c[r].index()).collect()).collect();
        assert_eq!(
            rows,
            [[1, 1, 1, 1, 0, 0, 0, 0], [1, 1, 0, 0, 1, 1, 0, 0], [1, 0, 1, 0, 1, 0, 1, 0], [1, 1, 1, 1, 1, 1, 1, 1]]
        );
        assert_eq!(cols(&make_rm1(2, false, int(1)).unwrap()), [[1, 1], [0, 1]]);
        let sys = make_rm1(4, true, int(1)).unwrap();
        for i in 0..4 {
            assert!((0..8).any(|j| sys.systematic_object(j) == Some(i)));
        }
        assert_eq!(make_rm1(1, false, int(1)), Err(CodebookError::KOutOfRange(1)));
    }

    #[test]
    fn reed_muller_encoding() {
        // Symbols a, b, c, d as unit vectors; the codeword lists each server's combination.
        let s = make_rm1(4, false, int(1)).unwrap();
        let names = ["a", "b", "c", "d"];
        let words: Vec<alloc::string::String> = s
            .columns()
            .iter()
            .map(|c| {
                let parts: Vec<&str> = (0..4).filter(|&i| c[i] == Fe::ONE).map(|i| names[i]).collect();
                parts.join("+")
            })
            .collect();
        assert_eq!(words, ["a+b+c+d", "a+b+d", "a+c+d", "a+d", "b+c+d", "b+d", "c+d", "d"]);
        let data = [Fe(1), Fe(0), Fe(1), Fe(1)];
        assert_eq!(s.encode(&data)[0], Fe(1));
    }

    #[test]
    fn example_lrc_layout() {
        let p = LrcProfile::example_12_4();
        let s = make_lrc(&p, &FieldSpec::prime(5).unwrap(), int(1)).unwrap();
        assert_eq!(s.n(), 12);
        let got = cols(&s);
        assert_eq!(&got[..8], [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 0, 0], [1, 2, 0, 0], [0, 0, 1, 1], [0, 0, 3, 4]]);
        for g in &got[8..] {
            assert!(g.iter().all(|&x| x != 0));
        }
        assert_eq!(p.group_servers(1), (vec![2, 3], vec![6, 7]));
        assert_eq!(p.global_servers(), vec![8, 9, 10, 11]);
    }

    #[test]
    fn single_parity_lrc() {
        let p = LrcProfile::pyramid(3, 4, 3, 0, &FieldSpec::prime(2).unwrap()).unwrap();
        let s = make_lrc(&p, &FieldSpec::prime(2).unwrap(), int(1)).unwrap();
        assert_eq!(cols(&s), [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]);
    }

    #[test]
    fn lrc_profile_validation() {
        let mut p = LrcProfile::example_12_4();
        p.groups[0].parities[1] = vec![Fe(1), Fe(1)];
        assert!(matches!(make_lrc(&p, &FieldSpec::prime(5).unwrap(), int(1)), Err(CodebookError::Profile(_))));
        let mut p = LrcProfile::example_12_4();
        p.groups[1].objects = vec![1, 3];
        assert!(matches!(make_lrc(&p, &FieldSpec::prime(5).unwrap(), int(1)), Err(CodebookError::Profile(_))));
        let p = LrcProfile::example_12_4();
        assert!(make_lrc(&p, &FieldSpec::prime(3).unwrap(), int(1)).is_err());
    }

    #[test]
    fn explicit_schemes() {
        let f2 = FieldSpec::prime(2).unwrap();
        let c = |v: &[u32]| v.iter().map(|&x| Fe(x)).collect::<Vec<_>>();
        let hybrid = StorageScheme::explicit(&f2, 2, vec![c(&[1, 0]), c(&[1, 0]), c(&[0, 1]), c(&[1, 1])], int(1)).unwrap();
        assert!(!hybrid.is_mds());
        let f3 = FieldSpec::prime(3).unwrap();
        let coded = StorageScheme::explicit(&f3, 2, vec![c(&[1, 0]), c(&[0, 1]), c(&[1, 1]), c(&[1, 2])], int(1)).unwrap();
        assert!(coded.is_mds());
        let id = StorageScheme::explicit(&f2, 3, vec![c(&[1, 0, 0]), c(&[0, 1, 0]), c(&[0, 0, 1])], int(1)).unwrap();
        assert!(id.is_mds());
        assert_eq!(
            StorageScheme::explicit(&f2, 2, vec![c(&[1, 0]), c(&[0, 0])], int(1)),
            Err(CodebookError::ZeroColumn(1))
        );
        assert_eq!(
            StorageScheme::explicit(&f2, 2, vec![c(&[1, 0]), c(&[1, 0])], int(1)),
            Err(CodebookError::RankDeficient { rank: 1, k: 2 })
        );
        assert_eq!(
            StorageScheme::explicit(&f2, 1, vec![c(&[1])], int(0)),
            Err(CodebookError::NonPositiveRate)
        );
    }

    #[test]
    fn constructions_are_deterministic() {
        let a = make_mds(8, 3, &FieldSpec::prime(7).unwrap(), true, int(1)).unwrap();
        let b = make_mds(8, 3, &FieldSpec::prime(7).unwrap(), true, int(1)).unwrap();
        assert_eq!(a, b);
    }
}
