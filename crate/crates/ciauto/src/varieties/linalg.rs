//! Dense linear algebra over a prime field.

use super::field::PrimeField;

/// Row space kept in semi-echelon form: each row has a leading 1 at its
/// pivot and zeros at the pivots of all earlier rows. Reducing against the
/// rows in order therefore clears every pivot column.
#[derive(Clone, Debug)]
pub struct RowSpace {
    field: PrimeField,
    ncols: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl RowSpace {
    pub fn new(field: PrimeField, ncols: usize) -> Self {
        RowSpace { field, ncols, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    pub fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        let f = self.field;
        for (p, row) in &self.rows {
            let c = v[*p];
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row).skip(*p) {
                    if r != 0 {
                        *x = f.sub(*x, f.mul(c, r));
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v.to_vec()).iter().all(|&x| x == 0)
    }

    /// Adds `v`; true when it enlarged the space.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        debug_assert_eq!(v.len(), self.ncols);
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(v[p]);
        for x in v.iter_mut().skip(p) {
            *x = self.field.mul(*x, inv);
        }
        self.rows.push((p, v));
        true
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.rows.iter().map(|r| r.1.as_slice())
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.0).collect()
    }
}

pub fn rank(field: PrimeField, rows: &[Vec<u64>]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let mut space = RowSpace::new(field, first.len());
    for r in rows {
        space.insert(r.clone());
        if space.is_full() {
            break;
        }
    }
    space.dim()
}

/// Basis of `{x : M x = 0}` for an `m × ncols` matrix.
pub fn kernel(field: PrimeField, rows: &[Vec<u64>], ncols: usize) -> Vec<Vec<u64>> {
    let f = field;
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..m.len()).find(|&k| m[k][c] != 0) else { continue };
        m.swap(r, k);
        let inv = f.inv(m[r][c]);
        for x in m[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for k in 0..m.len() {
            if k != r && m[k][c] != 0 {
                let s = m[k][c];
                let pivot_row = m[r].clone();
                for (x, y) in m[k].iter_mut().zip(&pivot_row) {
                    *x = f.sub(*x, f.mul(s, *y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0; ncols];
            v[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m[i][fc]);
            }
            v
        })
        .collect()
}

pub fn mat_vec(field: PrimeField, m: &[Vec<u64>], v: &[u64]) -> Vec<u64> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b))))
        .collect()
}

pub fn mat_mul(field: PrimeField, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).fold(0, |acc, (&x, br)| field.add(acc, field.mul(x, br[j]))))
                .collect()
        })
        .collect()
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse(field: PrimeField, m: &[Vec<u64>]) -> Option<Vec<Vec<u64>>> {
    let n = m.len();
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    for c in 0..n {
        let k = (c..n).find(|&k| a[k][c] != 0)?;
        a.swap(c, k);
        let inv = field.inv(a[c][c]);
        for x in a[c].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for k in 0..n {
            if k != c && a[k][c] != 0 {
                let s = a[k][c];
                let pr = a[c].clone();
                for (x, y) in a[k].iter_mut().zip(&pr) {
                    *x = field.sub(*x, field.mul(s, *y));
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
