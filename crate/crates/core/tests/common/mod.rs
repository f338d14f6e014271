#![allow(dead_code)]

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use srr_core::codebook::{make_mds, make_replication, LrcProfile, StorageScheme};
use srr_core::galois::{self, Fe, FieldSpec};
use srr_core::rational::{int, ratio, Rational};

pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.0.next_u64() % n
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below((hi - lo + 1) as u64) as usize
    }

    /// Uniform multiple of `1/den` in `[0, max]`.
    pub fn rational(&mut self, max: Rational, den: i128) -> Rational {
        let steps = (max * Rational::from_integer(den)).floor().to_integer();
        Rational::new(self.below(steps as u64 + 1) as i128, den)
    }
}

pub fn cols(rows: &[&[u32]]) -> Vec<Vec<Fe>> {
    rows.iter().map(|c| c.iter().map(|&x| Fe(x)).collect()).collect()
}

pub fn scheme(q: u32, k: usize, columns: &[&[u32]], mu: Rational) -> StorageScheme {
    StorageScheme::explicit(&FieldSpec::of_order(q).unwrap(), k, cols(columns), mu).unwrap()
}

/// Random full-rank scheme with `k <= n <= max_n` nonzero columns over GF(q).
pub fn random_scheme(rng: &mut Rng, q: u32, k: usize, max_n: usize) -> StorageScheme {
    let spec = FieldSpec::of_order(q).unwrap();
    let f = galois::GaloisField::new(&spec);
    loop {
        let n = rng.range(k, max_n);
        let columns: Vec<Vec<Fe>> = (0..n)
            .map(|_| loop {
                let c: Vec<Fe> = (0..k).map(|_| Fe(rng.below(q as u64) as u32)).collect();
                if c.iter().any(|x| !x.is_zero()) {
                    break c;
                }
            })
            .collect();
        let refs: Vec<&[Fe]> = columns.iter().map(Vec::as_slice).collect();
        if galois::rank_of_columns(&f, &refs) == k {
            return StorageScheme::explicit(&spec, k, columns, int(1)).unwrap();
        }
    }
}

pub fn rep22() -> StorageScheme {
    make_replication(2, &[2, 2], int(1)).unwrap()
}

pub fn mds42() -> StorageScheme {
    make_mds(4, 2, &FieldSpec::prime(3).unwrap(), true, int(1)).unwrap()
}

/// Replication with four copies of each of two objects.
pub fn fig3_replication() -> StorageScheme {
    make_replication(2, &[4, 4], int(1)).unwrap()
}

pub fn fig3_mds(systematic: bool) -> StorageScheme {
    make_mds(8, 2, &FieldSpec::prime(11).unwrap(), systematic, int(1)).unwrap()
}

/// (a, a, a, b, b, b, a+b, a+2b) over GF(11); 2 is primitive there.
pub fn fig3_hybrid() -> StorageScheme {
    scheme(11, 2, &[&[1, 0], &[1, 0], &[1, 0], &[0, 1], &[0, 1], &[0, 1], &[1, 1], &[1, 2]], int(1))
}

/// (a, b, a+b, a+2b) is the systematic [4,2] MDS code; (a, a, b, b) replication;
/// the two-object hybrid is (a, a, b, a+b).
pub fn fig1_hybrid() -> StorageScheme {
    scheme(2, 2, &[&[1, 0], &[1, 0], &[0, 1], &[1, 1]], int(1))
}

pub fn lrc_example() -> (StorageScheme, LrcProfile) {
    let p = LrcProfile::example_12_4();
    let s = srr_core::codebook::make_lrc(&p, &FieldSpec::prime(13).unwrap(), int(1)).unwrap();
    (s, p)
}

pub fn r(n: i128, d: i128) -> Rational {
    ratio(n, d)
}

pub fn v(xs: &[(i128, i128)]) -> Vec<Rational> {
    xs.iter().map(|&(n, d)| ratio(n, d)).collect()
}
