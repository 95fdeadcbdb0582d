//! Traceless twisted endomorphisms of `E = O(d) ⊕ O(-d)`.
//!
//! A Higgs field with twist `O(ℓ)` is the matrix `(p, q; r, -p)` mapping `E`
//! to `E(ℓ)`, with `deg p = ℓ`, `deg q = ℓ + 2d` and `deg r = ℓ - 2d`.
//!
//! A nonzero nilpotent field has rank one, its columns lie in its kernel,
//! and it factors uniquely (up to the scalar convention) as
//!
//! ```text
//! h · (st, -s²; t², -st)
//! ```
//!
//! where `(s; t)` is a primitive column spanning the kernel `O(k) ⊂ E` and
//! `h` is a section of `O(2k + ℓ)`. This is the composition
//! `E -> E/λ ≅ λ⁻¹ --h--> λ ⊗ O(ℓ) -> E(ℓ)` with `λ = O(k)`.

use thiserror::Error;

use crate::forms::{BinaryForm, DivisorP1, FormError};
use crate::sheaves::{LineSubsheaf, SheafError, SheafMap, SplitBundle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HiggsError {
    #[error("twist degree {0} must be even")]
    OddTwist(i64),
    #[error("twist degree {0} must be nonnegative")]
    NegativeTwist(i64),
    #[error("splitting index d = {0} must be nonnegative")]
    NegativeSplitting(i64),
    #[error("slot {slot} must have degree {expected}, got {got}")]
    SlotDegree {
        slot: &'static str,
        expected: i64,
        got: i64,
    },
    #[error("slot {slot} has negative degree {degree} and must be zero")]
    NonzeroNegativeSlot { slot: &'static str, degree: i64 },
    #[error("the Higgs field is zero")]
    ZeroField,
    #[error("the Higgs field is not nilpotent")]
    NotNilpotent,
    #[error("kernel column must be primitive (gcd 1), its content is {0}")]
    NotPrimitive(BinaryForm),
    #[error("kernel column must map into O(d) ⊕ O(-d), got {0:?}")]
    NotSl2(SplitBundle),
    #[error("cofactor must be nonzero")]
    ZeroCofactor,
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HiggsField {
    d: i64,
    ell: i64,
    p: BinaryForm,
    q: BinaryForm,
    r: BinaryForm,
}

/// `φ = h · (st, -s²; t², -st)` with `gcd(s, t) = 1`.
///
/// The leading coefficient of `s` (of `t` when `s = 0`) is 1; `h` absorbs the
/// scalar. `k` is the degree of the kernel line bundle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalNilpotent {
    pub s: BinaryForm,
    pub t: BinaryForm,
    pub h: BinaryForm,
    pub k: i64,
}

impl HiggsField {
    pub fn new(
        d: i64,
        ell: i64,
        p: BinaryForm,
        q: BinaryForm,
        r: BinaryForm,
    ) -> Result<Self, HiggsError> {
        if d < 0 {
            return Err(HiggsError::NegativeSplitting(d));
        }
        if ell < 0 {
            return Err(HiggsError::NegativeTwist(ell));
        }
        if ell % 2 != 0 {
            return Err(HiggsError::OddTwist(ell));
        }
        for (slot, form, expected) in [("p", &p, ell), ("q", &q, ell + 2 * d), ("r", &r, ell - 2 * d)] {
            if form.degree() != expected {
                return Err(HiggsError::SlotDegree {
                    slot,
                    expected,
                    got: form.degree(),
                });
            }
            if expected < 0 && !form.is_zero() {
                return Err(HiggsError::NonzeroNegativeSlot {
                    slot,
                    degree: expected,
                });
            }
        }
        Ok(HiggsField { d, ell, p, q, r })
    }

    pub fn zero(d: i64, ell: i64) -> Result<Self, HiggsError> {
        Self::new(
            d,
            ell,
            BinaryForm::zero(ell),
            BinaryForm::zero(ell + 2 * d),
            BinaryForm::zero(ell - 2 * d),
        )
    }

    /// The field `h · (st, -s²; t², -st)` built from a primitive kernel
    /// column `(s; t): O(k) -> O(d) ⊕ O(-d)` and a nonzero `h` of degree
    /// `2k + ℓ`.
    pub fn build_from(
        kernel: &LineSubsheaf,
        h: &BinaryForm,
        ell: i64,
    ) -> Result<HiggsField, HiggsError> {
        let twists = kernel.target().twists();
        if twists.len() != 2 || twists[0] != -twists[1] || twists[0] < 0 {
            return Err(HiggsError::NotSl2(kernel.target().clone()));
        }
        let d = twists[0];
        if h.is_zero() {
            return Err(HiggsError::ZeroCofactor);
        }
        let content = kernel.content();
        if content.degree() != 0 {
            return Err(HiggsError::NotPrimitive(content));
        }
        let k = kernel.source_degree();
        if h.degree() != 2 * k + ell {
            return Err(HiggsError::SlotDegree {
                slot: "h",
                expected: 2 * k + ell,
                got: h.degree(),
            });
        }
        let col: Vec<&BinaryForm> = kernel.column().collect();
        let (s, t) = (col[0], col[1]);
        let p = h.mul(s).mul(t);
        let q = h.mul(s).mul(s).neg();
        let r = h.mul(t).mul(t);
        Self::new(d, ell, p, q, r)
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn ell(&self) -> i64 {
        self.ell
    }

    pub fn p(&self) -> &BinaryForm {
        &self.p
    }

    pub fn q(&self) -> &BinaryForm {
        &self.q
    }

    pub fn r(&self) -> &BinaryForm {
        &self.r
    }

    pub fn bundle(&self) -> SplitBundle {
        SplitBundle::sl2(self.d)
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero() && self.r.is_zero()
    }

    /// `φ: E -> E(ℓ)` as a sheaf map.
    pub fn as_map(&self) -> SheafMap {
        let e = self.bundle();
        SheafMap::new(
            e.clone(),
            e.twist(self.ell),
            vec![
                vec![self.p.clone(), self.q.clone()],
                vec![self.r.clone(), self.p.neg()],
            ],
        )
        .expect("slot degrees validated at construction")
    }

    /// `-det φ = p² + qr`, a section of `O(2ℓ)`.
    pub fn minus_determinant(&self) -> BinaryForm {
        self.p
            .mul(&self.p)
            .add(&self.q.mul(&self.r))
            .expect("both terms have degree 2ℓ")
    }

    pub fn is_nilpotent(&self) -> bool {
        self.minus_determinant().is_zero()
    }

    /// `φ(ℓ) ∘ φ: E -> E(2ℓ)`.
    pub fn square(&self) -> SheafMap {
        let phi = self.as_map();
        phi.twisted(self.ell)
            .compose(&phi)
            .expect("twisted copy composes")
    }

    fn require_nonzero_nilpotent(&self) -> Result<(), HiggsError> {
        if self.is_zero() {
            return Err(HiggsError::ZeroField);
        }
        if !self.is_nilpotent() {
            return Err(HiggsError::NotNilpotent);
        }
        Ok(())
    }

    pub fn canonical_form(&self) -> Result<CanonicalNilpotent, HiggsError> {
        self.require_nonzero_nilpotent()?;
        // a nonzero column spans the kernel; divide out its content
        let first = [&self.p, &self.r];
        let second = [&self.q, &self.p];
        let column = if first.iter().any(|e| !e.is_zero()) {
            first
        } else {
            second
        };
        let content = BinaryForm::gcd_all(column)?;
        let mut s = column[0].exact_div(&content)?.expect("content divides");
        let mut t = column[1].exact_div(&content)?.expect("content divides");
        let k = if !s.is_zero() {
            self.d - s.degree()
        } else {
            -self.d - t.degree()
        };
        // zero entries carry the slot degree dictated by k
        if s.is_zero() {
            s = BinaryForm::zero(self.d - k);
        }
        if t.is_zero() {
            t = BinaryForm::zero(-self.d - k);
        }
        let lead = s
            .leading_coefficient()
            .or_else(|| t.leading_coefficient())
            .cloned()
            .expect("primitive column is nonzero");
        let inv = lead.recip();
        s = s.scale(&inv);
        t = t.scale(&inv);
        let h = if !s.is_zero() {
            self.q.neg().exact_div(&s.mul(&s))?
        } else {
            self.r.exact_div(&t.mul(&t))?
        }
        .expect("nilpotent field factors through its kernel");
        let canonical = CanonicalNilpotent { s, t, h, k };
        debug_assert_eq!(canonical.reassemble(self.d, self.ell).as_ref(), Ok(self));
        Ok(canonical)
    }

    /// The saturated kernel `O(k) ⊂ E`.
    pub fn kernel_subbundle(&self) -> Result<LineSubsheaf, HiggsError> {
        self.canonical_form()?.kernel(self.d)
    }

    /// Divisor of zeroes of `φ`: `div(h) = div(gcd(p, q, r))`.
    pub fn irregularity(&self) -> Result<DivisorP1, HiggsError> {
        Ok(DivisorP1::new(&self.canonical_form()?.h)?)
    }
}

impl CanonicalNilpotent {
    pub fn kernel(&self, d: i64) -> Result<LineSubsheaf, HiggsError> {
        Ok(LineSubsheaf::from_column(
            self.k,
            SplitBundle::sl2(d),
            vec![self.s.clone(), self.t.clone()],
        )?)
    }

    pub fn reassemble(&self, d: i64, ell: i64) -> Result<HiggsField, HiggsError> {
        HiggsField::build_from(&self.kernel(d)?, &self.h, ell)
    }
}

/// Whether `O(m)` admits a nonzero map to `O(d) ⊕ O(-d)`, i.e. some slot
/// degree `±d - m` is nonnegative.
pub fn line_embeds(m: i64, d: i64) -> bool {
    m <= d.abs()
}
