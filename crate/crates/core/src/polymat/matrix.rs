use std::fmt;

use crate::error::{Error, Result};
use crate::ff::{Fe, Field};

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl Matrix {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    pub fn from_rows(field: &Field, cols: usize, rows: &[Vec<Fe>]) -> Result<Matrix> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::LengthMismatch(format!("row of length {} for {cols} columns", r.len())));
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix { field: field.clone(), rows: rows.len(), cols, data })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Fe>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.rows {
            return Err(Error::LengthMismatch("matrix product dimensions".into()));
        }
        let k = &self.field;
        let mut r = Matrix::zero(k, self.rows, o.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = k.add(r.get(i, j), k.mul(a, o.get(l, j)));
                    r.set(i, j, v);
                }
            }
        }
        Ok(r)
    }

    pub fn mul_vec(&self, v: &[Fe]) -> Vec<Fe> {
        let k = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(Fe::ZERO, |acc, (&a, &b)| k.add(acc, k.mul(a, b)))
            })
            .collect()
    }

    /// Reduced row echelon form in place; returns pivot columns. Pivots are
    /// chosen left to right, first nonzero row at or below the current one.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let k = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = k.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let v = k.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = k.sub(self.get(i, j), k.mul(f, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// RREF with zero rows removed.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let piv = m.rref_in_place();
        m.data.truncate(piv.len() * m.cols);
        m.rows = piv.len();
        (m, piv)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : M v = 0}`, one vector per free column in column order,
    /// with a 1 in that free position.
    pub fn kernel(&self) -> Vec<Vec<Fe>> {
        let k = &self.field;
        let (r, piv) = self.rref();
        let mut is_piv = vec![false; self.cols];
        for &p in &piv {
            is_piv[p] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_piv[c]) {
            let mut v = vec![Fe::ZERO; self.cols];
            v[free] = Fe::ONE;
            for (i, &p) in piv.iter().enumerate() {
                v[p] = k.neg(r.get(i, free));
            }
            out.push(v);
        }
        out
    }

    /// Stacks rows of `o` below `self`.
    pub fn vstack(&self, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.cols {
            return Err(Error::LengthMismatch("vstack column count".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&o.data);
        Ok(Matrix { field: self.field.clone(), rows: self.rows + o.rows, cols: self.cols, data })
    }

    /// A solution of `M x = b`, or `None`.
    pub fn solve(&self, b: &[Fe]) -> Option<Vec<Fe>> {
        let k = &self.field;
        let mut aug = Matrix::zero(k, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let piv = aug.rref_in_place();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Fe::ZERO; self.cols];
        for (i, &p) in piv.iter().enumerate() {
            x[p] = aug.get(i, self.cols);
        }
        Some(x)
    }

    /// One row per line, entries space separated.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|&a| self.field.format(a)).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}
