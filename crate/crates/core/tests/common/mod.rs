#![allow(dead_code)]

use num_bigint::BigUint;
use rand::seq::index::sample;
use rand::Rng;

use qcbound::expansion::{expand, ShiftAssignment};
use qcbound::matrix::{Grid, PolyMatrix, PunctureSet, WeightMatrix};
use qcbound::ring::RingPoly;

pub struct Instance {
    pub proto: WeightMatrix,
    pub h: PolyMatrix,
    pub puncture: PunctureSet,
}

/// Random distinct shifts for every entry of `proto`.
pub fn random_shifts<R: Rng>(rng: &mut R, proto: &WeightMatrix, n: u32) -> ShiftAssignment {
    let rows = (0..proto.rows())
        .map(|r| {
            (0..proto.cols())
                .map(|c| {
                    let mut s: Vec<u32> =
                        sample(rng, n as usize, proto.get(r, c) as usize).into_iter().map(|x| x as u32).collect();
                    s.sort_unstable();
                    s
                })
                .collect()
        })
        .collect();
    ShiftAssignment::new(rows).unwrap()
}

/// J in 2..=4, L in J+1..=7, entries at most 3, N in 3..=8, |P| < J.
pub fn random_instance<R: Rng>(rng: &mut R) -> Instance {
    let j = rng.gen_range(2..=4usize);
    let l = rng.gen_range(j + 1..=7usize);
    let proto = loop {
        let rows: Vec<Vec<u32>> = (0..j).map(|_| (0..l).map(|_| rng.gen_range(0..=3)).collect()).collect();
        if let Ok(w) = WeightMatrix::new(rows) {
            break w;
        }
    };
    let n = rng.gen_range(3..=8u32);
    let h = expand(&proto, &random_shifts(rng, &proto, n), n).unwrap();
    let k = rng.gen_range(0..j);
    let mut cols: Vec<usize> = sample(rng, l, k).into_vec();
    cols.sort_unstable();
    Instance { proto, h, puncture: PunctureSet::new(cols).unwrap() }
}

pub fn random_poly<R: Rng>(rng: &mut R, n: u32) -> RingPoly {
    let bits: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.4)).collect();
    RingPoly::from_bits(&bits).unwrap()
}

pub fn weight_grid(rows: Vec<Vec<u32>>) -> WeightMatrix {
    WeightMatrix::from_grid(Grid::from_rows(rows).unwrap())
}

/// Every permutation of `0..n`, by recursion on the first unused index.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(n, used, cur, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut vec![false; n], &mut Vec::new(), &mut out);
    out
}

pub fn naive_perm_int(rows: &[Vec<u32>]) -> BigUint {
    permutations(rows.len())
        .iter()
        .map(|p| p.iter().enumerate().map(|(r, &c)| BigUint::from(rows[r][c])).product::<BigUint>())
        .sum()
}

pub fn naive_perm_ring(h: &PolyMatrix) -> RingPoly {
    let n = h.modulus();
    let mut acc = RingPoly::zero(n).unwrap();
    for p in permutations(h.rows()) {
        let mut term = RingPoly::one(n).unwrap();
        for (r, &c) in p.iter().enumerate() {
            term = term.checked_mul(h.get(r, c)).unwrap();
        }
        acc = acc.checked_add(&term).unwrap();
    }
    acc
}
