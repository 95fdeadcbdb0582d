//! Seeded random generators for forms, presentations, line subsheaves and
//! Higgs fields. The same seed always yields the same sequence.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fitting::{ElementaryOp, PresentedModule};
use crate::forms::{BinaryForm, Point};
use crate::higgs::HiggsField;
use crate::poly::UniPoly;
use crate::rational::{q_frac, Q};
use crate::sheaves::{LineSubsheaf, SplitBundle};

/// A nilpotent field together with the data it was built from.
#[derive(Debug, Clone)]
pub struct BuiltNilpotent {
    pub field: HiggsField,
    pub kernel: LineSubsheaf,
    pub h: BinaryForm,
    /// Distinct points of `div(h)` with multiplicities, when `h` was built
    /// from linear factors.
    pub factors: Vec<(Point, u32)>,
}

#[derive(Debug, Clone)]
pub struct Corpus {
    rng: ChaCha8Rng,
}

impl Corpus {
    pub fn new(seed: u64) -> Self {
        Corpus {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Numerator in `[-bound, bound]`, denominator in `[1, 3]`.
    pub fn rational(&mut self, bound: i64) -> Q {
        let n = self.rng.gen_range(-bound..=bound);
        let d = self.rng.gen_range(1..=3);
        q_frac(n, d)
    }

    pub fn nonzero_rational(&mut self, bound: i64) -> Q {
        loop {
            let x = self.rational(bound);
            if x != Q::from_integer(0.into()) {
                return x;
            }
        }
    }

    pub fn small_int(&mut self, bound: i64) -> i64 {
        self.rng.gen_range(-bound..=bound)
    }

    /// Any form of the given degree; about one coefficient in three is zero.
    pub fn form(&mut self, degree: i64) -> BinaryForm {
        if degree < 0 {
            return BinaryForm::zero(degree);
        }
        let coeffs = (0..=degree)
            .map(|_| {
                if self.rng.gen_ratio(1, 3) {
                    Q::from_integer(0.into())
                } else {
                    self.rational(4)
                }
            })
            .collect();
        BinaryForm::new(degree, coeffs).expect("coefficient count matches")
    }

    pub fn nonzero_form(&mut self, degree: i64) -> BinaryForm {
        assert!(degree >= 0, "no nonzero forms of negative degree");
        loop {
            let f = self.form(degree);
            if !f.is_zero() {
                return f;
            }
        }
    }

    pub fn point(&mut self) -> Point {
        if self.rng.gen_ratio(1, 6) {
            Point::Infinity
        } else {
            Point::Finite(self.rational(3))
        }
    }

    /// `count` distinct points.
    pub fn distinct_points(&mut self, count: usize) -> Vec<Point> {
        let mut out: Vec<Point> = Vec::with_capacity(count);
        while out.len() < count {
            let p = self.point();
            if !out.contains(&p) {
                out.push(p);
            }
        }
        out
    }

    /// A nonzero multiple of `prod l_i^{e_i}` of the given degree; with
    /// `squarefree` every `e_i` is 1.
    pub fn split_form(&mut self, degree: i64, squarefree: bool) -> (BinaryForm, Vec<(Point, u32)>) {
        let mut factors: Vec<(Point, u32)> = Vec::new();
        if squarefree {
            factors = self
                .distinct_points(degree as usize)
                .into_iter()
                .map(|p| (p, 1))
                .collect();
        } else {
            for _ in 0..degree {
                let p = self.point();
                match factors.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, e)) => *e += 1,
                    None => factors.push((p, 1)),
                }
            }
        }
        factors.sort();
        let scalar = self.nonzero_rational(4);
        let form = factors
            .iter()
            .fold(BinaryForm::constant(scalar), |acc, (p, e)| acc.mul(&p.linear_form().pow(*e)));
        (form, factors)
    }

    /// Primitive `(s; t): O(k) -> O(d) ⊕ O(-d)`. Needs `k == d` or
    /// `k <= -d`.
    pub fn primitive_column(&mut self, d: i64, k: i64) -> LineSubsheaf {
        assert!(k == d || k <= -d, "no primitive column O({k}) -> O({d}) + O({})", -d);
        let target = SplitBundle::sl2(d);
        loop {
            let s = self.form(d - k);
            let t = self.form(-d - k);
            if s.is_zero() && t.is_zero() {
                continue;
            }
            if let Ok(l) = LineSubsheaf::from_column(k, target.clone(), vec![s, t]) {
                if l.content().degree() == 0 {
                    return l;
                }
            }
        }
    }

    /// Kernel degrees `k` admitting a nilpotent on `O(d) ⊕ O(-d)` with
    /// twist `ℓ` and `0 <= deg h = 2k + ℓ <= max_h`.
    pub fn kernel_degrees(d: i64, ell: i64, max_h: i64) -> Vec<i64> {
        (-ell / 2..=d)
            .filter(|&k| (k == d || k <= -d) && 2 * k + ell <= max_h)
            .collect()
    }

    /// A nonzero nilpotent built as `h · (st, -s²; t², -st)` with `h` split
    /// over the rationals, `deg h <= max_h`.
    pub fn split_nilpotent(&mut self, max_h: i64, squarefree: bool) -> BuiltNilpotent {
        loop {
            let d = self.rng.gen_range(0..=2);
            let ell = 2 * self.rng.gen_range(0..=3);
            let ks = Self::kernel_degrees(d, ell, max_h);
            let Some(&k) = ks.choose(&mut self.rng) else {
                continue;
            };
            let kernel = self.primitive_column(d, k);
            let (h, factors) = self.split_form(2 * k + ell, squarefree);
            let field = HiggsField::build_from(&kernel, &h, ell).expect("degrees are consistent");
            return BuiltNilpotent {
                field,
                kernel,
                h,
                factors,
            };
        }
    }

    /// A nonzero nilpotent with an arbitrary (not necessarily split)
    /// cofactor.
    pub fn nilpotent(&mut self, max_h: i64) -> BuiltNilpotent {
        loop {
            let d = self.rng.gen_range(0..=3);
            let ell = 2 * self.rng.gen_range(0..=3);
            let ks = Self::kernel_degrees(d, ell, max_h);
            let Some(&k) = ks.choose(&mut self.rng) else {
                continue;
            };
            let kernel = self.primitive_column(d, k);
            let h = self.nonzero_form(2 * k + ell);
            let field = HiggsField::build_from(&kernel, &h, ell).expect("degrees are consistent");
            return BuiltNilpotent {
                field,
                kernel,
                h,
                factors: Vec::new(),
            };
        }
    }

    /// Traceless field with random slots; roughly half are built nilpotent.
    pub fn traceless(&mut self) -> HiggsField {
        if self.rng.gen_bool(0.5) {
            return self.nilpotent(6).field;
        }
        let d = self.rng.gen_range(0..=2);
        let ell = 2 * self.rng.gen_range(0..=2);
        HiggsField::new(d, ell, self.form(ell), self.form(ell + 2 * d), self.form(ell - 2 * d))
            .expect("slot degrees match")
    }

    /// Line subsheaf of `target` of source degree `m`, with a common factor
    /// of random degree multiplied in about half the time.
    pub fn line_subsheaf(&mut self, target: &SplitBundle, m: i64) -> LineSubsheaf {
        loop {
            let entries: Vec<BinaryForm> = target.twists().iter().map(|&a| self.form(a - m)).collect();
            if let Ok(l) = LineSubsheaf::from_column(m, target.clone(), entries) {
                return l;
            }
        }
    }

    pub fn line_subsheaf_with_defect(&mut self, target: &SplitBundle) -> LineSubsheaf {
        let max = *target.twists().iter().max().expect("nonempty bundle");
        let m = max - self.rng.gen_range(0..=3);
        let base = self.line_subsheaf(target, m);
        let extra = self.rng.gen_range(0..=2);
        if extra == 0 {
            return base;
        }
        let (g, _) = self.split_form(extra, false);
        base.multiplied_by(&g).expect("nonzero multiplier")
    }

    pub fn poly(&mut self, max_degree: usize) -> UniPoly {
        let deg = self.rng.gen_range(0..=max_degree);
        UniPoly::new((0..=deg).map(|_| self.rational(3)).collect())
    }

    /// Presentation with `b <= 3`, `a <= 3`, entries of degree at most 2.
    pub fn presented_module(&mut self) -> PresentedModule {
        let b = self.rng.gen_range(0..=3);
        let a = self.rng.gen_range(0..=3);
        let matrix = (0..b)
            .map(|_| {
                (0..a)
                    .map(|_| {
                        if self.rng.gen_ratio(1, 4) {
                            UniPoly::zero()
                        } else {
                            self.poly(2)
                        }
                    })
                    .collect()
            })
            .collect();
        PresentedModule::new(b, a, matrix).expect("shape is consistent")
    }

    /// A random operation valid for `m`'s current shape.
    pub fn elementary_op(&mut self, m: &PresentedModule) -> ElementaryOp {
        let (b, a) = (m.target_rank(), m.source_rank());
        loop {
            match self.rng.gen_range(0..7) {
                0 if b >= 2 => {
                    let (from, to) = self.two_indices(b);
                    return ElementaryOp::AddRowMultiple {
                        from,
                        to,
                        factor: self.poly(1),
                    };
                }
                1 if b >= 2 => {
                    let (i, j) = self.two_indices(b);
                    return ElementaryOp::SwapRows(i, j);
                }
                2 if b >= 1 => {
                    return ElementaryOp::ScaleRow {
                        row: self.rng.gen_range(0..b),
                        by: self.nonzero_rational(3),
                    }
                }
                3 if a >= 2 => {
                    let (from, to) = self.two_indices(a);
                    return ElementaryOp::AddColumnMultiple {
                        from,
                        to,
                        factor: self.poly(1),
                    };
                }
                4 if a >= 2 => {
                    let (i, j) = self.two_indices(a);
                    return ElementaryOp::SwapColumns(i, j);
                }
                5 if a >= 1 => {
                    return ElementaryOp::ScaleColumn {
                        column: self.rng.gen_range(0..a),
                        by: self.nonzero_rational(3),
                    }
                }
                6 if a <= 4 => {
                    return ElementaryOp::AppendColumnCombination(
                        (0..a).map(|_| self.poly(1)).collect(),
                    )
                }
                _ if a == 0 && b == 0 => {
                    return ElementaryOp::AppendColumnCombination(Vec::new());
                }
                _ => {}
            }
        }
    }

    fn two_indices(&mut self, n: usize) -> (usize, usize) {
        let i = self.rng.gen_range(0..n);
        let mut j = self.rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        (i, j)
    }
}
