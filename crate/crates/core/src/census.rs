//! Dimension and component-count formulas for the SL2 global nilpotent cone
//! over a curve of genus `g` with twisting line bundle of even degree `degL`.
//!
//! Only SL2 is covered: `dim B = 2` and the single positive root are fixed.
//! The general Bun_B dimension is `-<α, 2ρ> + dim(B)(g - 1)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("degree of the twisting bundle must be even, got {0}")]
    OddDegree(i64),
    #[error("genus {0} is too small: the formula needs g >= 2")]
    GenusTooSmall(u32),
    #[error("genus {0} is too large for a 64-bit square-root count")]
    GenusTooLarge(u32),
    #[error("not a vector bundle for genus {0}")]
    NotVectorBundle(u32),
    #[error("component d = {d} lies below the bound d >= -degL/2 = {bound}")]
    BelowBound { d: i64, bound: i64 },
    #[error("h0 - h1 = {got} but Riemann-Roch gives {expected}")]
    RiemannRoch { expected: i64, got: i64 },
    #[error("cohomology dimensions must be nonnegative")]
    NegativeCohomology,
    #[error("empty component range {lo}:{hi}")]
    EmptyRange { lo: i64, hi: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `degL >= 2g`
    #[serde(rename = "large")]
    Large,
    /// `0 < degL <= 2g - 2`
    #[serde(rename = "intermediate")]
    Intermediate,
    /// `degL <= 0`
    #[serde(rename = "nonpositive")]
    NonPositive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusInput {
    pub g: u32,
    #[serde(rename = "degL")]
    pub deg_l: i64,
    /// Inclusive range of component indices to tabulate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_range: Option<(i64, i64)>,
}

impl CensusInput {
    pub fn new(g: u32, deg_l: i64) -> Self {
        CensusInput {
            g,
            deg_l,
            d_range: None,
        }
    }

    pub fn with_range(mut self, lo: i64, hi: i64) -> Self {
        self.d_range = Some((lo, hi));
        self
    }

    pub fn regime(&self) -> Result<Regime, CensusError> {
        regime(self.g, self.deg_l)
    }
}

/// The integer components `d > bound`, described by the bound alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerFamily {
    pub exclusive_lower_bound: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentFamilies {
    pub integer_family: IntegerFamily,
    pub square_root_degree: i64,
    pub square_root_count: u64,
    pub zero_section_present: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComponentKind {
    #[serde(rename = "square-root")]
    SquareRoot,
    #[serde(rename = "integer")]
    Integer,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRow {
    pub d: i64,
    pub kind: ComponentKind,
    /// Number of components with this index.
    pub count: u64,
    pub bun_b_dimension: i64,
    /// Fiber rank over the closure of Bun_B, known for `g <= 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bundle_rank: Option<i64>,
    /// `bundle_rank` plus the dimension of the base it lives over.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub g: u32,
    #[serde(rename = "degL")]
    pub deg_l: i64,
    pub regime: Regime,
    pub component_families: ComponentFamilies,
    pub dimension: i64,
    /// `dim Bun_SL2 = 3(g - 1)`, present when the zero section is.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_section_dimension: Option<i64>,
    pub components: Vec<ComponentRow>,
}

pub fn regime(g: u32, deg_l: i64) -> Result<Regime, CensusError> {
    if deg_l % 2 != 0 {
        return Err(CensusError::OddDegree(deg_l));
    }
    let g = i64::from(g);
    Ok(if deg_l >= 2 * g {
        Regime::Large
    } else if deg_l > 0 {
        Regime::Intermediate
    } else {
        Regime::NonPositive
    })
}

pub fn square_root_count(g: u32) -> Result<u64, CensusError> {
    if g >= 32 {
        return Err(CensusError::GenusTooLarge(g));
    }
    Ok(1u64 << (2 * g))
}

pub fn nilcone_census(input: &CensusInput) -> Result<CensusReport, CensusError> {
    let regime = input.regime()?;
    let g = input.g;
    let gi = i64::from(g);
    let deg_l = input.deg_l;
    let bound = -deg_l / 2;
    let roots = square_root_count(g)?;
    let zero_section_present = deg_l <= 2 * gi - 2;

    let mut components = Vec::new();
    if let Some((lo, hi)) = input.d_range {
        if lo > hi {
            return Err(CensusError::EmptyRange { lo, hi });
        }
        for d in lo.max(bound)..=hi {
            let (kind, count) = if d == bound {
                (ComponentKind::SquareRoot, roots)
            } else {
                (ComponentKind::Integer, 1)
            };
            let bundle_rank = springer_bundle_rank(g, d, deg_l).ok();
            components.push(ComponentRow {
                d,
                kind,
                count,
                bun_b_dimension: bun_b_dimension(d, g),
                bundle_rank,
                dimension: bundle_rank.map(|r| r + base_dimension(g, d, deg_l)),
            });
        }
    }

    Ok(CensusReport {
        g,
        deg_l,
        regime,
        component_families: ComponentFamilies {
            integer_family: IntegerFamily {
                exclusive_lower_bound: bound,
            },
            square_root_degree: bound,
            square_root_count: roots,
            zero_section_present,
        },
        dimension: deg_l + gi - 1,
        zero_section_dimension: zero_section_present.then_some(3 * (gi - 1)),
        components,
    })
}

/// Dimension of the part of the closure of Bun_B carrying component `d`.
/// At `g = 1` the square-root component sits over the divisor where
/// `λ² ⊗ L` has a section, which has codimension one.
fn base_dimension(g: u32, d: i64, deg_l: i64) -> i64 {
    let full = bun_b_dimension(d, g);
    if g == 1 && 2 * d + deg_l == 0 {
        full - 1
    } else {
        full
    }
}

/// Irreducible components of the stable locus, `g >= 2`.
pub fn stable_census(g: u32, deg_l: i64) -> Result<i64, CensusError> {
    if g < 2 {
        return Err(CensusError::GenusTooSmall(g));
    }
    Ok(match regime(g, deg_l)? {
        Regime::Large => deg_l / 2,
        Regime::Intermediate => deg_l / 2 + 1,
        Regime::NonPositive => 1,
    })
}

/// Dimension of the component of Bun_B of degree `alpha`.
pub fn bun_b_dimension(alpha: i64, g: u32) -> i64 {
    -2 * alpha + 2 * (i64::from(g) - 1)
}

/// Euler characteristic of a line bundle of degree `deg`.
pub fn riemann_roch(g: u32, deg: i64) -> i64 {
    deg + 1 - i64::from(g)
}

pub fn springer_bundle_rank(g: u32, d: i64, deg_l: i64) -> Result<i64, CensusError> {
    if deg_l % 2 != 0 {
        return Err(CensusError::OddDegree(deg_l));
    }
    let bound = -deg_l / 2;
    if d < bound {
        return Err(CensusError::BelowBound { d, bound });
    }
    match g {
        0 => Ok(2 * d + deg_l + 1),
        1 if d == bound => Ok(1),
        1 => Ok(2 * d + deg_l),
        _ => Err(CensusError::NotVectorBundle(g)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CgSmoothness {
    pub smooth: bool,
    pub dimension: i64,
}

/// Smoothness of the cone of pairs `(λ, s)` with `deg λ = d`, at a point
/// where `h0 = h^0(λ)`, `h1 = h^1(λ)`.
pub fn cg_smoothness(
    g: u32,
    d: i64,
    s_is_zero: bool,
    h0: i64,
    h1: i64,
) -> Result<CgSmoothness, CensusError> {
    if g < 2 {
        return Err(CensusError::GenusTooSmall(g));
    }
    if h0 < 0 || h1 < 0 {
        return Err(CensusError::NegativeCohomology);
    }
    let expected = riemann_roch(g, d);
    if h0 - h1 != expected {
        return Err(CensusError::RiemannRoch {
            expected,
            got: h0 - h1,
        });
    }
    let gi = i64::from(g);
    let smooth = d > 2 * gi - 2
        || !s_is_zero
        || (d < gi && h0 == 1)
        || (gi <= d && d <= 2 * gi - 2 && h1 == 0);
    Ok(CgSmoothness {
        smooth,
        dimension: d,
    })
}
