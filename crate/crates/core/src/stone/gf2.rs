//! Dense matrices over GF(2), rows packed into `u64`.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GF2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl GF2Matrix {
    pub const MAX_COLS: usize = 64;

    pub fn zero(rows: usize, cols: usize) -> GF2Matrix {
        assert!(cols <= Self::MAX_COLS, "at most 64 columns");
        GF2Matrix {
            rows,
            cols,
            data: vec![0; rows],
        }
    }

    pub fn identity(n: usize) -> GF2Matrix {
        let mut m = GF2Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Build from rows of bits; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vec<bool>]) -> GF2Matrix {
        let mut m = GF2Matrix::zero(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row {i} has the wrong length");
            for (j, &b) in r.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i] >> j & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        if b {
            self.data[i] |= 1 << j;
        } else {
            self.data[i] &= !(1 << j);
        }
    }

    pub fn row(&self, i: usize) -> Vec<bool> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    /// `M·v`.
    pub fn mul_vec(&self, v: &[bool]) -> Vec<bool> {
        let packed = v.iter().enumerate().fold(0u64, |acc, (j, &b)| acc | (b as u64) << j);
        self.data.iter().map(|r| (r & packed).count_ones() % 2 == 1).collect()
    }

    /// Reduced row echelon form and its pivot columns. Pivots are chosen as
    /// the first row (top to bottom) with a one in the leftmost open column.
    pub fn rref(&self) -> (GF2Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| m.get(i, c)) else {
                continue;
            };
            m.data.swap(r, p);
            for i in 0..self.rows {
                if i != r && m.get(i, c) {
                    m.data[i] ^= m.data[r];
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }
}

impl fmt::Display for GF2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let s: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

/// A nonzero `w` with `M·w = 0`, i.e. a functional vanishing on the row
/// space, when that space is proper; `None` when the rows span everything.
pub fn annihilator_witness(m: &GF2Matrix) -> Option<Vec<bool>> {
    let (r, pivots) = m.rref();
    let free = (0..m.cols()).find(|c| !pivots.contains(c))?;
    let mut w = vec![false; m.cols()];
    w[free] = true;
    for (i, &p) in pivots.iter().enumerate() {
        w[p] = r.get(i, free);
    }
    Some(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_witness() {
        let m = GF2Matrix::from_rows(3, &[vec![true, false, false], vec![false, true, false]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(annihilator_witness(&m), Some(vec![false, false, true]));
        assert_eq!(annihilator_witness(&GF2Matrix::identity(4)), None);
    }

    #[test]
    fn dependent_rows() {
        let m = GF2Matrix::from_rows(
            3,
            &[vec![true, true, false], vec![false, true, true], vec![true, false, true]],
        );
        assert_eq!(m.rank(), 2);
        let w = annihilator_witness(&m).unwrap();
        assert!(w.iter().any(|&b| b));
        assert!(m.mul_vec(&w).iter().all(|&b| !b));
    }
}
