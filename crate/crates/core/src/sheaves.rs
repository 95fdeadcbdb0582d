//! Split bundles on the projective line and maps between them.
//!
//! A map `O(s_1) ⊕ ... -> O(t_1) ⊕ ...` is a matrix whose `(i, j)` entry is a
//! binary form of degree `t_i - s_j`. Slots of negative degree hold tagged
//! zero forms.

use num_traits::Zero;
use thiserror::Error;

use crate::fitting::PresentedModule;
use crate::forms::{BinaryForm, DivisorP1, FormError};
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SheafError {
    #[error("entry ({row}, {col}) has degree {got}, slot requires {expected}")]
    SlotDegree {
        row: usize,
        col: usize,
        expected: i64,
        got: i64,
    },
    #[error("expected {expected} rows, got {got}")]
    RowCount { expected: usize, got: usize },
    #[error("row {row}: expected {expected} columns, got {got}")]
    ColumnCount {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("cannot compose: {0:?} does not match {1:?}")]
    ShapeMismatch(SplitBundle, SplitBundle),
    #[error("line subsheaf needs a single-summand source, got {0:?}")]
    NotRankOne(SplitBundle),
    #[error("the embedding of a line subsheaf must be nonzero")]
    ZeroEmbedding,
    #[error("quasi-maps live in O ⊕ O, got target {0:?}")]
    NotTrivialRankTwo(SplitBundle),
    #[error("quasi-maps need source degree -n with n >= 0, got {0}")]
    PositiveSourceDegree(i64),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// `O(a_1) ⊕ ... ⊕ O(a_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SplitBundle {
    twists: Vec<i64>,
}

impl SplitBundle {
    pub fn new(twists: Vec<i64>) -> Self {
        SplitBundle { twists }
    }

    pub fn line(a: i64) -> Self {
        SplitBundle { twists: vec![a] }
    }

    /// `O(d) ⊕ O(-d)`.
    pub fn sl2(d: i64) -> Self {
        SplitBundle { twists: vec![d, -d] }
    }

    pub fn trivial(rank: usize) -> Self {
        SplitBundle {
            twists: vec![0; rank],
        }
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn degree(&self) -> i64 {
        self.twists.iter().sum()
    }

    /// `self ⊗ O(k)`.
    pub fn twist(&self, k: i64) -> SplitBundle {
        SplitBundle {
            twists: self.twists.iter().map(|a| a + k).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SheafMap {
    source: SplitBundle,
    target: SplitBundle,
    entries: Vec<Vec<BinaryForm>>,
}

impl SheafMap {
    pub fn new(
        source: SplitBundle,
        target: SplitBundle,
        entries: Vec<Vec<BinaryForm>>,
    ) -> Result<Self, SheafError> {
        if entries.len() != target.rank() {
            return Err(SheafError::RowCount {
                expected: target.rank(),
                got: entries.len(),
            });
        }
        for (row, line) in entries.iter().enumerate() {
            if line.len() != source.rank() {
                return Err(SheafError::ColumnCount {
                    row,
                    expected: source.rank(),
                    got: line.len(),
                });
            }
            for (col, e) in line.iter().enumerate() {
                let expected = target.twists[row] - source.twists[col];
                if e.degree() != expected {
                    return Err(SheafError::SlotDegree {
                        row,
                        col,
                        expected,
                        got: e.degree(),
                    });
                }
            }
        }
        Ok(SheafMap {
            source,
            target,
            entries,
        })
    }

    pub fn zero(source: SplitBundle, target: SplitBundle) -> Self {
        let entries = target
            .twists
            .iter()
            .map(|t| source.twists.iter().map(|s| BinaryForm::zero(t - s)).collect())
            .collect();
        SheafMap {
            source,
            target,
            entries,
        }
    }

    pub fn identity(bundle: SplitBundle) -> Self {
        let mut map = SheafMap::zero(bundle.clone(), bundle);
        for i in 0..map.entries.len() {
            map.entries[i][i] = BinaryForm::one();
        }
        map
    }

    pub fn source(&self) -> &SplitBundle {
        &self.source
    }

    pub fn target(&self) -> &SplitBundle {
        &self.target
    }

    pub fn entries(&self) -> &[Vec<BinaryForm>] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> &BinaryForm {
        &self.entries[row][col]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(BinaryForm::is_zero)
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &SheafMap) -> Result<SheafMap, SheafError> {
        if f.target != self.source {
            return Err(SheafError::ShapeMismatch(
                f.target.clone(),
                self.source.clone(),
            ));
        }
        let mut out = SheafMap::zero(f.source.clone(), self.target.clone());
        for i in 0..self.target.rank() {
            for j in 0..f.source.rank() {
                let mut acc = out.entries[i][j].clone();
                for k in 0..self.source.rank() {
                    acc = acc.add(&self.entries[i][k].mul(&f.entries[k][j]))?;
                }
                out.entries[i][j] = acc;
            }
        }
        Ok(out)
    }

    /// Same matrix viewed as `source(k) -> target(k)`.
    pub fn twisted(&self, k: i64) -> SheafMap {
        SheafMap {
            source: self.source.twist(k),
            target: self.target.twist(k),
            entries: self.entries.clone(),
        }
    }

    pub fn scale(&self, c: &Q) -> SheafMap {
        SheafMap {
            source: self.source.clone(),
            target: self.target.clone(),
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|e| e.scale(c)).collect())
                .collect(),
        }
    }
}

/// `O(m) ⊂ E`, given by a nonzero column.
#[derive(Debug, Clone)]
pub struct LineSubsheaf {
    embedding: SheafMap,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QuasiMapClass {
    GenuineMap,
    QuasiMapWithDefect(DivisorP1),
}

impl LineSubsheaf {
    pub fn new(embedding: SheafMap) -> Result<Self, SheafError> {
        if embedding.source.rank() != 1 {
            return Err(SheafError::NotRankOne(embedding.source.clone()));
        }
        if embedding.is_zero() {
            return Err(SheafError::ZeroEmbedding);
        }
        Ok(LineSubsheaf { embedding })
    }

    /// `O(m) -> E` given by the column `entries`.
    pub fn from_column(
        source_degree: i64,
        target: SplitBundle,
        entries: Vec<BinaryForm>,
    ) -> Result<Self, SheafError> {
        let rows = entries.into_iter().map(|e| vec![e]).collect();
        Self::new(SheafMap::new(SplitBundle::line(source_degree), target, rows)?)
    }

    pub fn source_degree(&self) -> i64 {
        self.embedding.source.twists[0]
    }

    pub fn target(&self) -> &SplitBundle {
        &self.embedding.target
    }

    pub fn embedding(&self) -> &SheafMap {
        &self.embedding
    }

    pub fn column(&self) -> impl Iterator<Item = &BinaryForm> {
        self.embedding.entries.iter().map(|row| &row[0])
    }

    /// Normalized gcd of the column entries.
    pub fn content(&self) -> BinaryForm {
        BinaryForm::gcd_all(self.column()).expect("embedding is nonzero")
    }

    /// Divisor where `O(m)` fails to be a subbundle.
    pub fn defect(&self) -> DivisorP1 {
        DivisorP1::new(&self.content()).expect("content is nonzero")
    }

    /// The saturation: the column divided by its content.
    pub fn normalization(&self) -> LineSubsheaf {
        let g = self.content();
        let entries = self
            .column()
            .map(|e| {
                e.exact_div(&g)
                    .expect("content is nonzero")
                    .expect("content divides every entry")
            })
            .collect();
        LineSubsheaf::from_column(
            self.source_degree() + g.degree(),
            self.target().clone(),
            entries,
        )
        .expect("quotient of a valid column is valid")
    }

    /// Representative with the leading coefficient of the first nonzero
    /// entry equal to 1.
    pub fn canonical(&self) -> LineSubsheaf {
        let lead = self
            .column()
            .find_map(|e| e.leading_coefficient().cloned())
            .expect("embedding is nonzero");
        LineSubsheaf {
            embedding: self.embedding.scale(&lead.recip()),
        }
    }

    /// `g · self`, i.e. `O(m - deg g) -> O(m) -> E`.
    pub fn multiplied_by(&self, g: &BinaryForm) -> Result<LineSubsheaf, SheafError> {
        let entries = self.column().map(|e| e.mul(g)).collect();
        LineSubsheaf::from_column(self.source_degree() - g.degree(), self.target().clone(), entries)
    }

    /// Recomputes the defect on the charts `w = 1` and `z = 1` as the
    /// vanishing locus of `F^{r-1}` of the cokernel, glues the two, and
    /// compares with [`defect`](Self::defect).
    pub fn defect_agrees_with_fitting(&self) -> bool {
        let r = self.target().rank();
        let chart_ideal = |chart: &dyn Fn(&BinaryForm) -> crate::poly::UniPoly| {
            let rows = self.column().map(|e| vec![chart(e)]).collect();
            PresentedModule::new(r, 1, rows)
                .expect("column presentation")
                .fitting_ideal(r - 1)
        };
        let on_w = chart_ideal(&BinaryForm::chart_w);
        let on_z = chart_ideal(&BinaryForm::chart_z);
        if on_w.is_zero() || on_z.is_zero() {
            return false;
        }
        // the w = 1 chart sees everything except w = 0, whose multiplicity
        // is the order of vanishing at t = 0 on the z = 1 chart, and
        // symmetrically
        let glue = |finite: &crate::poly::UniPoly,
                    at_missing: usize,
                    lift: fn(&crate::poly::UniPoly, i64) -> Result<BinaryForm, FormError>,
                    missing: BinaryForm| {
            let deg = finite.degree().unwrap() as i64;
            lift(finite, deg)
                .map(|f| f.mul(&missing.pow(at_missing as u32)))
                .ok()
                .and_then(|f| DivisorP1::new(&f).ok())
        };
        let from_w = glue(
            on_w.generator(),
            on_z.generator().valuation().unwrap(),
            BinaryForm::from_chart_w,
            BinaryForm::w(),
        );
        let from_z = glue(
            on_z.generator(),
            on_w.generator().valuation().unwrap(),
            BinaryForm::from_chart_z,
            BinaryForm::z(),
        );
        let defect = self.defect();
        from_w.as_ref() == Some(&defect) && from_z.as_ref() == Some(&defect)
    }

    /// Classifies `O(-n) -> O ⊕ O` as a map to the flag variety or a
    /// quasi-map with defect.
    pub fn quasimap_classify(&self) -> Result<QuasiMapClass, SheafError> {
        if self.target().twists() != [0, 0] {
            return Err(SheafError::NotTrivialRankTwo(self.target().clone()));
        }
        if self.source_degree() > 0 {
            return Err(SheafError::PositiveSourceDegree(self.source_degree()));
        }
        let defect = self.defect();
        let class = if defect.is_empty() {
            QuasiMapClass::GenuineMap
        } else {
            QuasiMapClass::QuasiMapWithDefect(defect)
        };
        if self.source_degree() == -1 {
            let det = self.coefficient_determinant().expect("degree-one column");
            assert_eq!(
                det.is_zero(),
                class != QuasiMapClass::GenuineMap,
                "determinant criterion disagrees with the defect"
            );
        }
        Ok(class)
    }

    /// `ad - bc` for a column `(az + bw; cz + dw)` into `O ⊕ O`.
    pub fn coefficient_determinant(&self) -> Option<Q> {
        let col: Vec<&BinaryForm> = self.column().collect();
        if col.len() != 2 || col.iter().any(|e| e.degree() != 1) {
            return None;
        }
        let (a, b) = (&col[0].coeffs()[0], &col[0].coeffs()[1]);
        let (c, d) = (&col[1].coeffs()[0], &col[1].coeffs()[1]);
        Some(a * d - b * c)
    }
}

/// Equality of moduli points: embeddings agreeing up to a nonzero scalar.
impl PartialEq for LineSubsheaf {
    fn eq(&self, other: &Self) -> bool {
        self.canonical().embedding == other.canonical().embedding
    }
}

impl Eq for LineSubsheaf {}

impl std::hash::Hash for LineSubsheaf {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.canonical().embedding.hash(state);
    }
}

impl PartialOrd for LineSubsheaf {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders canonical representatives by source degree, then column.
impl Ord for LineSubsheaf {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let a = self.canonical();
        let b = other.canonical();
        a.source_degree()
            .cmp(&b.source_degree())
            .then_with(|| a.column().cmp(b.column()))
    }
}
