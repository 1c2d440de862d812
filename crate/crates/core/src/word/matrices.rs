use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use super::QuadraticWord;

/// The integer matrices of a word.
///
/// * `a[l - 1]` holds the coefficients of `A_l(z) = sum_{j<l} eps(sigma(j)) z_{k(sigma(j))}`,
///   the position of polygon vertex `l` relative to vertex 1.
/// * `t[k - 1]` holds the coefficients of `T_k = A_{tau(2k)+1} - A_{tau(2k-1)}`,
///   the translation gluing `alpha_k` onto `alpha_hat_k`.
/// * `phi[l - 1][k - 1]` is the coefficient of `m_l` in `T_k`, the
///   intersection index of `beta_l` and `beta_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionData {
    pub a: Vec<Vec<i64>>,
    pub t: Vec<Vec<i64>>,
    pub phi: Vec<Vec<i64>>,
}

impl IntersectionData {
    /// Row `l` of `A` for `l` in `1..=2n+1`, with `A_{2n+1} = A_1`.
    pub fn a_row(&self, l: usize) -> &[i64] {
        let m = self.a.len();
        &self.a[(l - 1) % m]
    }

    /// `T_k(z)` as an integer combination evaluated on arbitrary values.
    pub fn apply_t<T>(&self, k: usize, z: &[T]) -> T
    where
        T: Copy + Default + core::ops::Add<Output = T> + core::ops::Mul<f64, Output = T>,
    {
        self.t[k - 1].iter().zip(z).fold(T::default(), |acc, (&c, &v)| acc + v * c as f64)
    }

    /// `A_l(z)` evaluated on arbitrary values.
    pub fn apply_a<T>(&self, l: usize, z: &[T]) -> T
    where
        T: Copy + Default + core::ops::Add<Output = T> + core::ops::Mul<f64, Output = T>,
    {
        self.a_row(l).iter().zip(z).fold(T::default(), |acc, (&c, &v)| acc + v * c as f64)
    }
}

pub fn matrices(word: &QuadraticWord) -> IntersectionData {
    let n = word.n();
    let m = 2 * n;
    let mut a = vec![vec![0i64; n]; m];
    for l in 1..m {
        let prev = a[l - 1].clone();
        let letter = word.letter_at(l);
        a[l] = prev;
        a[l][letter.index - 1] += letter.sign as i64;
    }
    let row = |l: usize| &a[(l - 1) % m];
    let t: Vec<Vec<i64>> = (1..=n)
        .map(|k| {
            let hi = row(word.pos_minus(k) + 1);
            let lo = row(word.pos_plus(k));
            hi.iter().zip(lo).map(|(x, y)| x - y).collect()
        })
        .collect();
    let phi = (0..n).map(|l| (0..n).map(|k| t[k][l]).collect()).collect();
    IntersectionData { a, t, phi }
}

/// Rank over Q of an integer matrix, by fraction-free elimination.
pub fn int_rank(mat: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = mat.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for j in c + 1..cols {
                let v = &m[rank][c] * &m[r][j] - &m[r][c] * &m[rank][j];
                m[r][j] = v / &prev;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}
