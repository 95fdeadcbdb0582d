//! Fitting ideals of finitely presented modules over `Q[t]`.
//!
//! A module `M` is given by a presentation `R^a --A--> R^b --> M --> 0` with
//! `A` a `b x a` matrix. `F^h(M)` is generated by the `(b-h) x (b-h)` minors
//! of `A`. Since `Q[t]` is a principal ideal domain, every ideal is stored by
//! its monic generator (the gcd of the minors).
//!
//! When `b - h <= 0` the only minor is the empty one and `F^h(M) = R`. When
//! `a < b - h` there are no minors of the required size and the ideal is
//! zero.

use num_traits::Zero;
use thiserror::Error;

use crate::poly::UniPoly;
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FittingError {
    #[error("presentation declares a {rows}x{cols} matrix but row {row} has {got} entries")]
    RaggedRow {
        rows: usize,
        cols: usize,
        row: usize,
        got: usize,
    },
    #[error("presentation declares {rows} rows but has {got}")]
    RowCount { rows: usize, got: usize },
    #[error("row or column index {index} out of range")]
    IndexOutOfRange { index: usize },
    #[error("elementary operation needs distinct indices")]
    SameIndex,
    #[error("scaling by zero is not invertible")]
    ZeroScale,
    #[error("column combination has {got} coefficients for {cols} columns")]
    CombinationLength { cols: usize, got: usize },
}

/// `R^a -> R^b -> M -> 0` over `R = Q[t]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedModule {
    target_rank: usize,
    source_rank: usize,
    matrix: Vec<Vec<UniPoly>>,
}

/// Ideal of `Q[t]` stored by its monic generator, or zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrincipalIdeal {
    generator: UniPoly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FittingRank {
    Rank(usize),
    /// `F^0(M)` is already nonzero.
    NoZeroIdeal,
}

/// Ideals of a field are zero or the whole field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldIdeal {
    Zero,
    Unit,
}

/// Invertible operations on a presentation; none of them changes the
/// module being presented.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementaryOp {
    /// row[to] += factor * row[from]
    AddRowMultiple {
        from: usize,
        to: usize,
        factor: UniPoly,
    },
    SwapRows(usize, usize),
    ScaleRow { row: usize, by: Q },
    /// col[to] += factor * col[from]
    AddColumnMultiple {
        from: usize,
        to: usize,
        factor: UniPoly,
    },
    SwapColumns(usize, usize),
    ScaleColumn { column: usize, by: Q },
    /// Appends `sum coeffs[j] * col[j]` as a new column: a redundant relation.
    AppendColumnCombination(Vec<UniPoly>),
}

impl PrincipalIdeal {
    pub fn new(generator: &UniPoly) -> Self {
        PrincipalIdeal {
            generator: generator.monic(),
        }
    }

    pub fn zero() -> Self {
        PrincipalIdeal {
            generator: UniPoly::zero(),
        }
    }

    pub fn unit() -> Self {
        PrincipalIdeal {
            generator: UniPoly::one(),
        }
    }

    pub fn generator(&self) -> &UniPoly {
        &self.generator
    }

    pub fn is_zero(&self) -> bool {
        self.generator.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.generator.degree() == Some(0)
    }

    /// Ideal containment `other ⊆ self`.
    pub fn contains(&self, other: &PrincipalIdeal) -> bool {
        self.generator.divides(&other.generator)
    }

    pub fn product(&self, other: &PrincipalIdeal) -> PrincipalIdeal {
        PrincipalIdeal::new(&self.generator.mul(&other.generator))
    }

    /// Image under `Q[t] -> Q`, `t -> c`.
    pub fn evaluate_at(&self, c: &Q) -> FieldIdeal {
        if self.generator.eval(c).is_zero() {
            FieldIdeal::Zero
        } else {
            FieldIdeal::Unit
        }
    }

    /// Extension along `Q[t] -> Q[t]`, `t -> u(t)`.
    pub fn substitute(&self, u: &UniPoly) -> PrincipalIdeal {
        PrincipalIdeal::new(&self.generator.compose(u))
    }
}

impl PresentedModule {
    pub fn new(
        target_rank: usize,
        source_rank: usize,
        matrix: Vec<Vec<UniPoly>>,
    ) -> Result<Self, FittingError> {
        if matrix.len() != target_rank {
            return Err(FittingError::RowCount {
                rows: target_rank,
                got: matrix.len(),
            });
        }
        for (row, entries) in matrix.iter().enumerate() {
            if entries.len() != source_rank {
                return Err(FittingError::RaggedRow {
                    rows: target_rank,
                    cols: source_rank,
                    row,
                    got: entries.len(),
                });
            }
        }
        Ok(PresentedModule {
            target_rank,
            source_rank,
            matrix,
        })
    }

    /// `R/(f)`.
    pub fn cyclic(f: &UniPoly) -> Self {
        PresentedModule {
            target_rank: 1,
            source_rank: 1,
            matrix: vec![vec![f.clone()]],
        }
    }

    /// `R^b` with no relations.
    pub fn free(rank: usize) -> Self {
        PresentedModule {
            target_rank: rank,
            source_rank: 0,
            matrix: vec![Vec::new(); rank],
        }
    }

    /// `R/(d_1) ⊕ ... ⊕ R/(d_n)`.
    pub fn diagonal(entries: &[UniPoly]) -> Self {
        let n = entries.len();
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { entries[i].clone() } else { UniPoly::zero() })
                    .collect()
            })
            .collect();
        PresentedModule {
            target_rank: n,
            source_rank: n,
            matrix,
        }
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    pub fn matrix(&self) -> &[Vec<UniPoly>] {
        &self.matrix
    }

    pub fn fitting_ideal(&self, h: usize) -> PrincipalIdeal {
        let Some(size) = self.target_rank.checked_sub(h).filter(|&s| s > 0) else {
            return PrincipalIdeal::unit();
        };
        if self.source_rank < size {
            return PrincipalIdeal::zero();
        }
        let mut acc = UniPoly::zero();
        for rows in combinations(self.target_rank, size) {
            for cols in combinations(self.source_rank, size) {
                let minor: Vec<Vec<UniPoly>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| self.matrix[i][j].clone()).collect())
                    .collect();
                acc = acc.gcd(&determinant(minor));
                if acc.degree() == Some(0) {
                    return PrincipalIdeal::unit();
                }
            }
        }
        PrincipalIdeal::new(&acc)
    }

    /// Largest `h` with `F^h(M) = 0`.
    pub fn fitting_rank(&self) -> FittingRank {
        (0..=self.target_rank)
            .take_while(|&h| self.fitting_ideal(h).is_zero())
            .last()
            .map_or(FittingRank::NoZeroIdeal, FittingRank::Rank)
    }

    /// Block diagonal presentation of `self ⊕ other`.
    pub fn direct_sum(&self, other: &PresentedModule) -> PresentedModule {
        let b = self.target_rank + other.target_rank;
        let a = self.source_rank + other.source_rank;
        let mut matrix = vec![vec![UniPoly::zero(); a]; b];
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                matrix[i][j] = e.clone();
            }
        }
        for (i, row) in other.matrix.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                matrix[self.target_rank + i][self.source_rank + j] = e.clone();
            }
        }
        PresentedModule {
            target_rank: b,
            source_rank: a,
            matrix,
        }
    }

    /// `M ⊗ Q` along `t -> c`.
    pub fn base_change_evaluate(&self, c: &Q) -> FieldPresentation {
        FieldPresentation {
            target_rank: self.target_rank,
            source_rank: self.source_rank,
            matrix: self
                .matrix
                .iter()
                .map(|row| row.iter().map(|e| e.eval(c)).collect())
                .collect(),
        }
    }

    /// `M ⊗ Q[t]` along `t -> u(t)`.
    pub fn substitute(&self, u: &UniPoly) -> PresentedModule {
        PresentedModule {
            target_rank: self.target_rank,
            source_rank: self.source_rank,
            matrix: self
                .matrix
                .iter()
                .map(|row| row.iter().map(|e| e.compose(u)).collect())
                .collect(),
        }
    }

    pub fn apply(&mut self, op: &ElementaryOp) -> Result<(), FittingError> {
        let rows = self.target_rank;
        let cols = self.source_rank;
        let check = |i: usize, bound: usize| {
            if i < bound {
                Ok(())
            } else {
                Err(FittingError::IndexOutOfRange { index: i })
            }
        };
        match op {
            ElementaryOp::AddRowMultiple { from, to, factor } => {
                check(*from, rows)?;
                check(*to, rows)?;
                if from == to {
                    return Err(FittingError::SameIndex);
                }
                for j in 0..cols {
                    let add = self.matrix[*from][j].mul(factor);
                    self.matrix[*to][j] = self.matrix[*to][j].add(&add);
                }
            }
            ElementaryOp::SwapRows(i, k) => {
                check(*i, rows)?;
                check(*k, rows)?;
                self.matrix.swap(*i, *k);
            }
            ElementaryOp::ScaleRow { row, by } => {
                check(*row, rows)?;
                if by.is_zero() {
                    return Err(FittingError::ZeroScale);
                }
                for e in &mut self.matrix[*row] {
                    *e = e.scale(by);
                }
            }
            ElementaryOp::AddColumnMultiple { from, to, factor } => {
                check(*from, cols)?;
                check(*to, cols)?;
                if from == to {
                    return Err(FittingError::SameIndex);
                }
                for row in &mut self.matrix {
                    let add = row[*from].mul(factor);
                    row[*to] = row[*to].add(&add);
                }
            }
            ElementaryOp::SwapColumns(j, k) => {
                check(*j, cols)?;
                check(*k, cols)?;
                for row in &mut self.matrix {
                    row.swap(*j, *k);
                }
            }
            ElementaryOp::ScaleColumn { column, by } => {
                check(*column, cols)?;
                if by.is_zero() {
                    return Err(FittingError::ZeroScale);
                }
                for row in &mut self.matrix {
                    row[*column] = row[*column].scale(by);
                }
            }
            ElementaryOp::AppendColumnCombination(coeffs) => {
                if coeffs.len() != cols {
                    return Err(FittingError::CombinationLength {
                        cols,
                        got: coeffs.len(),
                    });
                }
                for row in &mut self.matrix {
                    let new = row
                        .iter()
                        .zip(coeffs)
                        .fold(UniPoly::zero(), |acc, (e, c)| acc.add(&e.mul(c)));
                    row.push(new);
                }
                self.source_rank += 1;
            }
        }
        Ok(())
    }
}

/// A presentation over the field `Q`, obtained by evaluating at a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldPresentation {
    target_rank: usize,
    source_rank: usize,
    matrix: Vec<Vec<Q>>,
}

impl FieldPresentation {
    pub fn matrix(&self) -> &[Vec<Q>] {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        let mut m = self.matrix.clone();
        let mut rank = 0;
        for col in 0..self.source_rank {
            let Some(pivot) = (rank..self.target_rank).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            let inv = m[rank][col].recip();
            for i in rank + 1..self.target_rank {
                if m[i][col].is_zero() {
                    continue;
                }
                let factor = &m[i][col] * &inv;
                for j in col..self.source_rank {
                    let sub = &factor * &m[rank][j];
                    m[i][j] -= sub;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Over a field some `(b-h)`-minor is nonzero exactly when the rank is
    /// at least `b-h`.
    pub fn fitting_ideal(&self, h: usize) -> FieldIdeal {
        match self.target_rank.checked_sub(h) {
            None | Some(0) => FieldIdeal::Unit,
            Some(size) if self.rank() >= size => FieldIdeal::Unit,
            Some(_) => FieldIdeal::Zero,
        }
    }
}

/// Fraction-free (Bareiss) determinant.
pub fn determinant(mut m: Vec<Vec<UniPoly>>) -> UniPoly {
    let n = m.len();
    if n == 0 {
        return UniPoly::one();
    }
    let mut negate = false;
    let mut prev = UniPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return UniPoly::zero();
            };
            m.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}
