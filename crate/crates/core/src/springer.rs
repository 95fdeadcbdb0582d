//! Fibers of the partial Springer resolution over a nilpotent Higgs field.
//!
//! A point of the fiber over `(E, φ)` in component `m` is a line subsheaf
//! `λ = O(m) ⊂ E` with
//!
//! 1. `λ ⊂ ker φ`,
//! 2. `im φ ⊂ (λ ⊗ O(ℓ))(-df(λ))`,
//! 3. `λ² ⊗ O(ℓ)` has a nonzero section, i.e. `2m + ℓ >= 0` on the line.
//!
//! Writing `φ = h · (st, -s²; t², -st)` with primitive kernel `(s; t)` of
//! degree `k`, condition 1 forces `λ = g · (s; t)` with `g` a form of degree
//! `k - m`, and then `df(λ) = div(g)` and condition 2 reads `g² | h`. Fiber
//! points in component `m` are therefore the effective divisors `D` of degree
//! `k - m` with `2D <= div(h)`.
//!
//! Enumeration is pluggable through [`FiberStrategy`]; strategies are looked
//! up by name in a [`StrategyRegistry`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::forms::{BinaryForm, DivisorFactor, FormError};
use crate::higgs::{CanonicalNilpotent, HiggsError, HiggsField};
use crate::rational::Q;
use crate::sheaves::{LineSubsheaf, SheafError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpringerError {
    #[error(transparent)]
    Higgs(#[from] HiggsError),
    #[error(transparent)]
    Sheaf(#[from] SheafError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("line subsheaf maps into {got:?}, the Higgs bundle is {expected:?}")]
    BundleMismatch {
        expected: crate::sheaves::SplitBundle,
        got: crate::sheaves::SplitBundle,
    },
    #[error("point fails condition {condition}")]
    ConditionFailed { condition: u8 },
    #[error("section space of O({degree}) is empty: need 2m + ℓ >= 0")]
    BelowBound { degree: i64 },
    #[error("strategy {strategy:?} cannot handle irregularity {irregularity}: {reason}")]
    Unsupported {
        strategy: &'static str,
        irregularity: BinaryForm,
        reason: &'static str,
    },
    #[error("unknown fiber strategy {0:?}")]
    UnknownStrategy(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `φ ∘ λ`, nonzero.
    Image(Vec<BinaryForm>),
    /// `g²` where `g` is the content of `λ`; it does not divide `h`.
    SquaredContent(BinaryForm),
    /// Degree of `λ² ⊗ O(ℓ)`, negative.
    Degree(i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConditionOutcome {
    Pass,
    Fail { condition: u8, witness: Witness },
}

impl ConditionOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, ConditionOutcome::Pass)
    }
}

pub fn check_conditions(
    phi: &HiggsField,
    lambda: &LineSubsheaf,
) -> Result<ConditionOutcome, SpringerError> {
    let canonical = phi.canonical_form()?;
    check_with_canonical(phi, &canonical, lambda)
}

fn check_with_canonical(
    phi: &HiggsField,
    canonical: &CanonicalNilpotent,
    lambda: &LineSubsheaf,
) -> Result<ConditionOutcome, SpringerError> {
    if lambda.target() != &phi.bundle() {
        return Err(SpringerError::BundleMismatch {
            expected: phi.bundle(),
            got: lambda.target().clone(),
        });
    }
    let image = phi.as_map().compose(lambda.embedding())?;
    if !image.is_zero() {
        return Ok(ConditionOutcome::Fail {
            condition: 1,
            witness: Witness::Image(image.entries().iter().map(|r| r[0].clone()).collect()),
        });
    }
    let g = lambda.content();
    let g2 = g.mul(&g);
    if !g2.divides(&canonical.h) {
        return Ok(ConditionOutcome::Fail {
            condition: 2,
            witness: Witness::SquaredContent(g2),
        });
    }
    let degree = 2 * lambda.source_degree() + phi.ell();
    if degree < 0 {
        return Ok(ConditionOutcome::Fail {
            condition: 3,
            witness: Witness::Degree(degree),
        });
    }
    Ok(ConditionOutcome::Pass)
}

/// `((E, φ), λ)` satisfying all three conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberPoint {
    higgs: HiggsField,
    lambda: LineSubsheaf,
}

impl FiberPoint {
    pub fn new(higgs: HiggsField, lambda: LineSubsheaf) -> Result<Self, SpringerError> {
        match check_conditions(&higgs, &lambda)? {
            ConditionOutcome::Pass => Ok(FiberPoint {
                higgs,
                lambda: lambda.canonical(),
            }),
            ConditionOutcome::Fail { condition, .. } => {
                Err(SpringerError::ConditionFailed { condition })
            }
        }
    }

    pub fn higgs(&self) -> &HiggsField {
        &self.higgs
    }

    pub fn lambda(&self) -> &LineSubsheaf {
        &self.lambda
    }

    pub fn component_degree(&self) -> i64 {
        self.lambda.source_degree()
    }
}

/// Fiber over `(E, φ)` inside the component of degree `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberDescription {
    pub higgs: HiggsField,
    pub component_degree: i64,
    /// Sorted canonical representatives, no duplicates.
    pub points: Vec<FiberPoint>,
    /// Set when irreducible non-linear factors of the irregularity could
    /// contribute further points defined over an extension field; those
    /// are not listed.
    pub unresolved: bool,
}

impl FiberDescription {
    fn from_lambdas(
        phi: &HiggsField,
        m: i64,
        lambdas: impl IntoIterator<Item = LineSubsheaf>,
        unresolved: bool,
    ) -> Result<Self, SpringerError> {
        let mut points = lambdas
            .into_iter()
            .map(|l| FiberPoint::new(phi.clone(), l))
            .collect::<Result<Vec<_>, _>>()?;
        points.sort_by(|a, b| a.lambda.cmp(&b.lambda));
        points.dedup_by(|a, b| a.lambda == b.lambda);
        Ok(FiberDescription {
            higgs: phi.clone(),
            component_degree: m,
            points,
            unresolved,
        })
    }
}

pub trait FiberStrategy: Send + Sync {
    fn name(&self) -> &'static str;

    fn describe(&self) -> &'static str;

    fn enumerate(&self, phi: &HiggsField, m: i64) -> Result<FiberDescription, SpringerError>;
}

/// Enumerates sub-divisors `D` with `2D <= div(h)` from the factorization of
/// `h` into points.
#[derive(Debug, Default, Clone, Copy)]
pub struct DivisorStrategy;

impl FiberStrategy for DivisorStrategy {
    fn name(&self) -> &'static str {
        "divisor"
    }

    fn describe(&self) -> &'static str {
        "half-multiplicity sub-divisors of the irregularity"
    }

    fn enumerate(&self, phi: &HiggsField, m: i64) -> Result<FiberDescription, SpringerError> {
        let canonical = phi.canonical_form()?;
        let kernel = canonical.kernel(phi.d())?;
        let target = canonical.k - m;
        if target < 0 {
            return FiberDescription::from_lambdas(phi, m, [], false);
        }
        let mut linear = Vec::new();
        let mut symbolic_capacity = 0i64;
        for (factor, mult) in canonical.h.factor_into_divisors()? {
            let half = i64::from(mult / 2);
            match factor {
                DivisorFactor::Point(p) => linear.push((p.linear_form(), half)),
                DivisorFactor::Symbolic(block) => symbolic_capacity += block.degree() * half,
            }
        }
        let linear_capacity: i64 = linear.iter().map(|(_, h)| h).sum();
        let unresolved =
            symbolic_capacity > 0 && target >= 1 && target <= linear_capacity + symbolic_capacity;
        let caps: Vec<i64> = linear.iter().map(|(_, h)| *h).collect();
        let lambdas = bounded_compositions(&caps, target)
            .into_iter()
            .map(|counts| {
                let g = linear
                    .iter()
                    .zip(&counts)
                    .fold(BinaryForm::one(), |acc, ((l, _), &c)| acc.mul(&l.pow(c as u32)));
                kernel.multiplied_by(&g)
            })
            .collect::<Result<Vec<_>, _>>()?;
        FiberDescription::from_lambdas(phi, m, lambdas, unresolved)
    }
}

/// Runs the condition checker over every kernel multiple `g · (s; t)` with
/// `g` a product of linear forms dividing `h`. Requires `h` to split into
/// rational linear factors.
#[derive(Debug, Default, Clone, Copy)]
pub struct BruteForceStrategy;

impl BruteForceStrategy {
    /// Distinct normalized linear forms dividing `h`, found by trial
    /// division over the rational-root candidates of the affine chart plus
    /// the point at infinity.
    fn linear_divisors(h: &BinaryForm) -> Vec<BinaryForm> {
        let mut candidates = vec![BinaryForm::w()];
        let affine = h.chart_w();
        if !affine.is_constant() {
            candidates.extend(
                affine
                    .rational_roots()
                    .into_iter()
                    .map(|r| BinaryForm::linear(Q::from_integer(1.into()), -r)),
            );
        }
        candidates.into_iter().filter(|l| l.divides(h)).collect()
    }
}

impl FiberStrategy for BruteForceStrategy {
    fn name(&self) -> &'static str {
        "brute-force"
    }

    fn describe(&self) -> &'static str {
        "condition check over all kernel multiples by products of linear divisors"
    }

    fn enumerate(&self, phi: &HiggsField, m: i64) -> Result<FiberDescription, SpringerError> {
        let canonical = phi.canonical_form()?;
        let kernel = canonical.kernel(phi.d())?;
        let pool = Self::linear_divisors(&canonical.h);
        let mut rest = canonical.h.clone();
        for l in &pool {
            while let Some(q) = rest.exact_div(l)? {
                rest = q;
            }
        }
        if rest.degree() > 0 {
            return Err(SpringerError::Unsupported {
                strategy: self.name(),
                irregularity: canonical.h.clone(),
                reason: "irregularity does not split into rational linear factors",
            });
        }
        let target = canonical.k - m;
        let mut found = Vec::new();
        if target >= 0 {
            for choice in multisets(pool.len(), target as usize) {
                let g = choice
                    .iter()
                    .fold(BinaryForm::one(), |acc, &i| acc.mul(&pool[i]));
                let lambda = kernel.multiplied_by(&g)?;
                if check_with_canonical(phi, &canonical, &lambda)?.passed() {
                    found.push(lambda);
                }
            }
        }
        FiberDescription::from_lambdas(phi, m, found, false)
    }
}

/// Name-indexed collection of fiber strategies.
#[derive(Clone)]
pub struct StrategyRegistry {
    strategies: BTreeMap<&'static str, Arc<dyn FiberStrategy>>,
}

impl StrategyRegistry {
    pub fn empty() -> Self {
        StrategyRegistry {
            strategies: BTreeMap::new(),
        }
    }

    /// Replaces any strategy already registered under the same name.
    pub fn register(&mut self, strategy: Arc<dyn FiberStrategy>) {
        self.strategies.insert(strategy.name(), strategy);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn FiberStrategy>, SpringerError> {
        self.strategies
            .get(name)
            .cloned()
            .ok_or_else(|| SpringerError::UnknownStrategy(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.strategies.keys().copied()
    }
}

impl Default for StrategyRegistry {
    fn default() -> Self {
        let mut reg = StrategyRegistry::empty();
        reg.register(Arc::new(DivisorStrategy));
        reg.register(Arc::new(BruteForceStrategy));
        reg
    }
}

impl fmt::Debug for StrategyRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.strategies.keys()).finish()
    }
}

/// Fiber in component `m` using the default strategy.
pub fn enumerate_fiber(phi: &HiggsField, m: i64) -> Result<FiberDescription, SpringerError> {
    DivisorStrategy.enumerate(phi, m)
}

/// Irregularity is multiplicity free, checked chart by chart.
pub fn is_globally_regular(phi: &HiggsField) -> Result<bool, SpringerError> {
    let h = phi.canonical_form()?.h;
    Ok(h.chart_w().is_squarefree() && h.chart_z().is_squarefree())
}

/// `h^0(O(2m + ℓ)) = 2m + ℓ + 1`, the rank of the fiber bundle over the
/// component of degree `m`.
pub fn section_space_dimension(m: i64, ell: i64) -> Result<u64, SpringerError> {
    let degree = 2 * m + ell;
    if degree < 0 {
        return Err(SpringerError::BelowBound { degree });
    }
    Ok(degree as u64 + 1)
}

/// Number of vectors `0 <= c_i <= floor(e_i / 2)` with `sum c_i = n`.
pub fn fiber_size_from_multiplicities(multiplicities: &[u32], n: i64) -> u64 {
    if n < 0 {
        return 0;
    }
    // dp[j] = number of ways to reach total j
    let n = n as usize;
    let mut dp = vec![0u64; n + 1];
    dp[0] = 1;
    for &e in multiplicities {
        let cap = (e / 2) as usize;
        let mut next = vec![0u64; n + 1];
        for (j, &ways) in dp.iter().enumerate() {
            if ways == 0 {
                continue;
            }
            for c in 0..=cap.min(n - j) {
                next[j + c] += ways;
            }
        }
        dp = next;
    }
    dp[n]
}

/// Vectors `c` with `0 <= c_i <= caps[i]` and `sum c = total`.
fn bounded_compositions(caps: &[i64], total: i64) -> Vec<Vec<i64>> {
    fn go(caps: &[i64], left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        match caps.split_first() {
            None => {
                if left == 0 {
                    out.push(cur.clone());
                }
            }
            Some((&cap, rest)) => {
                for c in 0..=cap.min(left) {
                    cur.push(c);
                    go(rest, left - c, cur, out);
                    cur.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(caps, total, &mut Vec::new(), &mut out);
    out
}

/// Non-decreasing index sequences of length `size` over `0..n`.
fn multisets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, size, &mut Vec::new(), &mut out);
    out
}
