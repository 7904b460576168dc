use crate::error::{Error, Result};

/// Square band matrix with `lower` sub- and `upper` super-diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    lower: usize,
    upper: usize,
    /// Row-major, each row spanning columns `i − lower ..= i + lower + upper`
    /// so that pivoting fill-in has room.
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, lower: usize, upper: usize) -> Self {
        Self {
            n,
            lower,
            upper,
            data: vec![0.0; n * (2 * lower + upper + 1)],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn width(&self) -> usize {
        2 * self.lower + self.upper + 1
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.lower >= i && j <= i + self.lower + self.upper);
        i * self.width() + (j + self.lower - i)
    }

    pub fn in_band(&self, i: usize, j: usize) -> bool {
        j + self.lower >= i && j <= i + self.upper
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j + self.lower < i || j > i + self.lower + self.upper {
            0.0
        } else {
            self.data[self.slot(i, j)]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside the band");
        let s = self.slot(i, j);
        self.data[s] = v;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.lower);
                let hi = (i + self.upper).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// LU factorization with partial pivoting, consuming the matrix.
    pub fn factorize(mut self) -> Result<BandedLu> {
        let n = self.n;
        let kl = self.lower;
        let reach = self.lower + self.upper;
        let mut pivots = vec![0usize; n];
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = self.get(k, k).abs();
            for i in k + 1..=last {
                let v = self.get(i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::SingularMatrix { row: k });
            }
            pivots[k] = p;
            let right = (k + reach).min(n - 1);
            if p != k {
                for j in k..=right {
                    let a = self.slot(k, j);
                    let b = self.slot(p, j);
                    self.data.swap(a, b);
                }
            }
            let diag = self.get(k, k);
            for i in k + 1..=last {
                let s = self.slot(i, k);
                let factor = self.data[s] / diag;
                self.data[s] = factor;
                if factor != 0.0 {
                    for j in k + 1..=right {
                        let kj = self.get(k, j);
                        let ij = self.slot(i, j);
                        self.data[ij] -= factor * kj;
                    }
                }
            }
        }
        Ok(BandedLu { lu: self, pivots })
    }
}

/// Factorized band matrix; solves reuse the factors.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedLu {
    lu: BandMatrix,
    pivots: Vec<usize>,
}

impl BandedLu {
    pub fn size(&self) -> usize {
        self.lu.n
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        let n = self.lu.n;
        let kl = self.lu.lower;
        let reach = self.lu.lower + self.lu.upper;
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                x.swap(k, p);
            }
            let xk = x[k];
            for i in k + 1..=(k + kl).min(n - 1) {
                x[i] -= self.lu.get(i, k) * xk;
            }
        }
        for k in (0..n).rev() {
            let mut acc = x[k];
            for j in k + 1..=(k + reach).min(n - 1) {
                acc -= self.lu.get(k, j) * x[j];
            }
            x[k] = acc / self.lu.get(k, k);
        }
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}
