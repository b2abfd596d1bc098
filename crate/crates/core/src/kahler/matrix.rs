use crate::error::{Error, Result};
use crate::jet::{Jet, SeriesAlgebra, TJet};

/// Square matrix of jets (or t-series of jets) expected to satisfy
/// `entry(i, j) == conj(entry(j, i))`. Conjugation acts on coefficients,
/// which is the function conjugate in the real coordinates `x, y`.
#[derive(Clone, Debug)]
pub struct HermitianJetMatrix<T> {
    n: usize,
    entries: Vec<T>,
}

impl<T: SeriesAlgebra> HermitianJetMatrix<T> {
    pub fn from_entries(n: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {n}x{n} matrix",
                entries.len()
            )));
        }
        Ok(HermitianJetMatrix { n, entries })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        HermitianJetMatrix { n, entries }
    }

    pub fn try_from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Result<T>) -> Result<Self> {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j)?);
            }
        }
        Ok(HermitianJetMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.n + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn map<U: SeriesAlgebra>(&self, f: impl Fn(&T) -> U) -> HermitianJetMatrix<U> {
        HermitianJetMatrix {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: SeriesAlgebra>(
        &self,
        f: impl Fn(&T) -> Result<U>,
    ) -> Result<HermitianJetMatrix<U>> {
        Ok(HermitianJetMatrix {
            n: self.n,
            entries: self.entries.iter().map(f).collect::<Result<_>>()?,
        })
    }

    /// `max |entry(i,j) - conj(entry(j,i))|` over all pairs.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                let d = self.get(i, j).max_abs_diff(&self.get(j, i).conjugate());
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> Result<T> {
        let idx: Vec<usize> = (0..self.n).collect();
        self.minor_det(&idx, &idx)
    }

    /// Permanent: the determinant's expansion with every sign positive.
    /// On coefficient moduli it majorises the determinant's intermediates.
    pub fn permanent(&self) -> Result<T> {
        let idx: Vec<usize> = (0..self.n).collect();
        self.expand(&idx, &idx, false)
    }

    fn minor_det(&self, rows: &[usize], cols: &[usize]) -> Result<T> {
        self.expand(rows, cols, true)
    }

    fn expand(&self, rows: &[usize], cols: &[usize], signed: bool) -> Result<T> {
        match rows.len() {
            0 => Err(Error::InvalidInput("determinant of an empty matrix".into())),
            1 => Ok(self.get(rows[0], cols[0]).clone()),
            2 => {
                let a = self.get(rows[0], cols[0]).mul_checked(self.get(rows[1], cols[1]))?;
                let b = self.get(rows[0], cols[1]).mul_checked(self.get(rows[1], cols[0]))?;
                if signed {
                    a.sub_checked(&b)
                } else {
                    a.add_checked(&b)
                }
            }
            _ => {
                let sub_rows = &rows[1..];
                let mut acc: Option<T> = None;
                for (k, &c) in cols.iter().enumerate() {
                    let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                    let term = self.get(rows[0], c).mul_checked(&self.expand(sub_rows, &sub_cols, signed)?)?;
                    acc = Some(match acc {
                        None => term,
                        Some(a) if k % 2 == 0 || !signed => a.add_checked(&term)?,
                        Some(a) => a.sub_checked(&term)?,
                    });
                }
                Ok(acc.expect("nonempty"))
            }
        }
    }

    /// Adjugate (transposed cofactor matrix): `adj(g) g = det(g) I`.
    pub fn adjugate(&self) -> Result<HermitianJetMatrix<T>> {
        let n = self.n;
        if n == 1 {
            // adj of a 1x1 matrix is the identity; represent it as g/g's unit
            return Err(Error::Unsupported("adjugate of a 1x1 matrix; use the entry directly".into()));
        }
        let all: Vec<usize> = (0..n).collect();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                // adj[i][j] = (-1)^{i+j} M_{j i}
                let rows: Vec<usize> = all.iter().copied().filter(|&r| r != j).collect();
                let cols: Vec<usize> = all.iter().copied().filter(|&c| c != i).collect();
                let m = self.minor_det(&rows, &cols)?;
                entries.push(if (i + j) % 2 == 0 { m } else { m.neg() });
            }
        }
        Ok(HermitianJetMatrix { n, entries })
    }
}

impl HermitianJetMatrix<Jet> {
    /// Entrywise evaluation at a point of the complexified chart.
    pub fn eval_complex(&self, point: &[crate::jet::C64]) -> nalgebra::DMatrix<crate::jet::C64> {
        nalgebra::DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j).eval_complex(point))
    }

    pub fn eval(&self, point: &[f64]) -> nalgebra::DMatrix<crate::jet::C64> {
        nalgebra::DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j).eval(point))
    }

    /// `t`-independent series matrix with this matrix as constant term.
    pub fn constant_in_t(&self, max_order: usize) -> HermitianJetMatrix<TJet> {
        self.map(|j| TJet::constant_in_t(j, max_order))
    }
}

impl HermitianJetMatrix<TJet> {
    pub fn coeff(&self, m: usize) -> HermitianJetMatrix<Jet> {
        self.map(|s| s.coeff(m).clone())
    }

    pub fn t_derive(&self) -> HermitianJetMatrix<TJet> {
        self.map(TJet::t_derive)
    }

    pub fn max_order(&self) -> usize {
        self.entries.iter().map(TJet::max_order).min().unwrap_or(0)
    }
}
