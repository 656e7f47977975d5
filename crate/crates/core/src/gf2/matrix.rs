//! Row reduction over GF(2).

use super::{BitWord, Gf2Error};

/// Reduced row echelon form with leftmost pivots.
///
/// Rows are ordered by pivot column; every pivot column is a unit column. For a
/// fixed row space the result is unique, which makes it usable as a canonical
/// form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<BitWord>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(ncols: usize, rows: &[BitWord]) -> Result<Self, Gf2Error> {
        let mut work = Vec::with_capacity(rows.len());
        for row in rows {
            row.check_len(ncols).map_err(|_| Gf2Error::LengthMismatch {
                expected: ncols,
                found: row.len(),
            })?;
            work.push(row.clone());
        }
        let mut pivots = Vec::new();
        let mut top = 0;
        for col in 0..ncols {
            if top == work.len() {
                break;
            }
            let Some(found) = (top..work.len()).find(|&i| work[i].get(col)) else {
                continue;
            };
            work.swap(top, found);
            let pivot_row = work[top].clone();
            for (i, row) in work.iter_mut().enumerate() {
                if i != top && row.get(col) {
                    *row ^= &pivot_row;
                }
            }
            pivots.push(col);
            top += 1;
        }
        work.truncate(top);
        Ok(Self {
            ncols,
            rows: work,
            pivots,
        })
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[BitWord] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the row space: the result is zero on every pivot
    /// column and is the canonical representative of `v` modulo the row space.
    pub fn reduce(&self, v: &BitWord) -> Result<BitWord, Gf2Error> {
        v.check_len(self.ncols).map_err(|_| Gf2Error::LengthMismatch {
            expected: self.ncols,
            found: v.len(),
        })?;
        let mut out = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out.get(p) {
                out ^= row;
            }
        }
        Ok(out)
    }

    pub fn contains(&self, v: &BitWord) -> Result<bool, Gf2Error> {
        Ok(self.reduce(v)?.is_zero())
    }

    /// Columns without a pivot, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Basis of `{x : row · x = 0 for every row}`, one vector per free column.
    pub fn null_space(&self) -> Vec<BitWord> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut x = BitWord::unit(self.ncols, f);
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if row.get(f) {
                        x.set(p, true);
                    }
                }
                x
            })
            .collect()
    }
}

/// GF(2) row rank. An empty row list has rank 0.
pub fn rank(rows: &[BitWord]) -> Result<usize, Gf2Error> {
    let Some(first) = rows.first() else {
        return Ok(0);
    };
    Ok(Echelon::new(first.len(), rows)?.rank())
}

/// `e · Hᵀ` for a parity-check matrix given by its rows.
pub fn syndrome(parity_check: &[BitWord], e: &BitWord) -> Result<BitWord, Gf2Error> {
    let mut out = BitWord::zeros(parity_check.len());
    for (i, row) in parity_check.iter().enumerate() {
        if row.dot(e)? {
            out.set(i, true);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(rows: &[&str]) -> Vec<BitWord> {
        rows.iter().map(|r| r.parse().unwrap()).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&words(&["110", "011", "101"])).unwrap(), 2);
        assert_eq!(rank(&words(&["000"])).unwrap(), 0);
        assert_eq!(rank(&words(&["1000", "0100", "0010", "0001"])).unwrap(), 4);
        assert_eq!(rank(&[]).unwrap(), 0);
    }

    #[test]
    fn rank_rejects_ragged_rows() {
        assert!(rank(&words(&["110", "01"])).is_err());
    }

    #[test]
    fn echelon_is_canonical() {
        let a = Echelon::new(4, &words(&["1100", "0110"])).unwrap();
        let b = Echelon::new(4, &words(&["1010", "0110", "1100"])).unwrap();
        assert_eq!(a.rows(), b.rows());
        assert_eq!(a.pivots(), &[0, 1]);
        assert_eq!(a.rows(), &words(&["1010", "0110"])[..]);
    }

    #[test]
    fn null_space_is_orthogonal() {
        let e = Echelon::new(5, &words(&["11010", "01101"])).unwrap();
        let ns = e.null_space();
        assert_eq!(ns.len(), 3);
        for x in &ns {
            for row in e.rows() {
                assert!(!row.dot(x).unwrap());
            }
        }
        assert_eq!(rank(&ns).unwrap(), 3);
    }

    #[test]
    fn syndrome_dimension_mismatch() {
        let h = words(&["111"]);
        assert!(syndrome(&h, &"1111".parse().unwrap()).is_err());
        assert!(syndrome(&h, &"000".parse().unwrap()).unwrap().is_zero());
    }
}
