//! Bundled invariant suite, run by `nilcone selftest`.
//!
//! Each [`Check`] draws its cases from a seeded [`Corpus`] and reports the
//! number of cases tried together with a description of every failure.

use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::census::{self, CensusInput};
use crate::corpus::Corpus;
use crate::fitting::{PresentedModule, PrincipalIdeal};
use crate::forms::{BinaryForm, DivisorP1};
use crate::higgs::HiggsField;
use crate::json::{render, JsonCodec};
use crate::poly::UniPoly;
use crate::rational::{q, Q};
use crate::sheaves::{LineSubsheaf, QuasiMapClass, SplitBundle};
use crate::springer::{
    check_conditions, enumerate_fiber, fiber_size_from_multiplicities, is_globally_regular,
    BruteForceStrategy, FiberStrategy,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;

    fn run(&self, corpus: &mut Corpus) -> CheckReport;
}

/// Failure log capped so a systematic bug does not flood the report.
struct Tally {
    name: &'static str,
    cases: usize,
    failures: Vec<String>,
}

impl Tally {
    const MAX_FAILURES: usize = 10;

    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < Self::MAX_FAILURES {
            self.failures.push(describe());
        }
    }

    fn finish(self) -> CheckReport {
        CheckReport {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
        }
    }
}

fn worked_example() -> HiggsField {
    HiggsField::new(
        0,
        2,
        BinaryForm::zero(2),
        BinaryForm::from_ints(&[1, 0, 0]),
        BinaryForm::zero(2),
    )
    .expect("valid slots")
}

struct WorkedExample;

impl Check for WorkedExample {
    fn name(&self) -> &'static str {
        "worked-example-fiber"
    }

    fn run(&self, _corpus: &mut Corpus) -> CheckReport {
        let mut t = Tally::new(self.name());
        let phi = worked_example();
        let expected = LineSubsheaf::from_column(
            -1,
            SplitBundle::sl2(0),
            vec![BinaryForm::z(), BinaryForm::zero(1)],
        )
        .expect("nonzero column");
        match enumerate_fiber(&phi, -1) {
            Ok(fiber) => t.case(
                fiber.points.len() == 1 && fiber.points[0].lambda() == &expected && !fiber.unresolved,
                || format!("fiber in component -1 is {fiber:?}"),
            ),
            Err(e) => t.case(false, || e.to_string()),
        }
        for a in -4..=4i64 {
            for b in -4..=4i64 {
                if a == 0 && b == 0 {
                    continue;
                }
                let lambda = LineSubsheaf::from_column(
                    -1,
                    SplitBundle::sl2(0),
                    vec![BinaryForm::from_ints(&[a, b]), BinaryForm::zero(1)],
                )
                .expect("nonzero column");
                let outcome = check_conditions(&phi, &lambda).map(|o| o.passed());
                let expect_pass = b == 0;
                t.case(outcome == Ok(expect_pass), || {
                    format!("candidate ({a}z + {b}w; 0) gave {outcome:?}")
                });
            }
        }
        t.finish()
    }
}

struct RegularSingleton {
    cases: usize,
}

impl Check for RegularSingleton {
    fn name(&self) -> &'static str {
        "regular-singleton"
    }

    fn run(&self, corpus: &mut Corpus) -> CheckReport {
        let mut t = Tally::new(self.name());
        for _ in 0..self.cases {
            let built = corpus.split_nilpotent(6, true);
            let k = built.kernel.source_degree();
            let mut ok = is_globally_regular(&built.field) == Ok(true);
            for m in (k - 4)..=(k + 2) {
                let fiber = match enumerate_fiber(&built.field, m) {
                    Ok(f) => f,
                    Err(_) => {
                        ok = false;
                        continue;
                    }
                };
                let lambdas: Vec<&LineSubsheaf> = fiber.points.iter().map(|p| p.lambda()).collect();
                ok &= if m == k {
                    lambdas == vec![&built.kernel]
                } else {
                    lambdas.is_empty()
                };
            }
            t.case(ok, || format!("field {:?}", built.field));
        }
        t.finish()
    }
}

struct DivisibilityAndCounts {
    squarefree: usize,
    repeated: usize,
}

impl Check for DivisibilityAndCounts {
    fn name(&self) -> &'static str {
        "divisibility-and-counts"
    }

    fn run(&self, corpus: &mut Corpus) -> CheckReport {
        let mut t = Tally::new(self.name());
        let plan = std::iter::repeat(true)
            .take(self.squarefree)
            .chain(std::iter::repeat(false).take(self.repeated));
        for squarefree in plan {
            let built = corpus.split_nilpotent(6, squarefree);
            let k = built.kernel.source_degree();
            let irr = DivisorP1::new(&built.h).expect("nonzero cofactor");
            let mults: Vec<u32> = built.factors.iter().map(|(_, e)| *e).collect();
            let mut ok = true;
            for m in (k - 4)..=(k + 1) {
                let (Ok(fiber), Ok(oracle)) = (
                    enumerate_fiber(&built.field, m),
                    BruteForceStrategy.enumerate(&built.field, m),
                ) else {
                    ok = false;
                    continue;
                };
                ok &= fiber.points.iter().all(|p| p.lambda().defect().times(2).le(&irr));
                ok &= fiber.points.len() as u64 == fiber_size_from_multiplicities(&mults, k - m);
                ok &= fiber == oracle;
            }
            t.case(ok, || format!("field {:?}", built.field));
        }
        t.finish()
    }
}

struct FittingPresentation {
    sequences: usize,
}

impl Check for FittingPresentation {
    fn name(&self) -> &'static str {
        "fitting-presentation-independence"
    }

    fn run(&self, corpus: &mut Corpus) -> CheckReport {
        let mut t = Tally::new(self.name());
        for _ in 0..self.sequences {
            let original = corpus.presented_module();
            let mut m = original.clone();
            let len = corpus.small_int(4).unsigned_abs() + 1;
            let mut ok = true;
            for _ in 0..len {
                let op = corpus.elementary_op(&m);
                ok &= m.apply(&op).is_ok();
            }
            for h in 0..=original.target_rank() + 1 {
                ok &= m.fitting_ideal(h) == original.fitting_ideal(h);
            }
            t.case(ok, || format!("presentation {original:?}"));
        }
        t.finish()
    }
}

struct FittingSumsAndLength {
    cases: usize,
}

impl Check for FittingSumsAndLength {
    fn name(&self) -> &'static str {
        "fitting-direct-sum-and-length"
    }

    fn run(&self, corpus: &mut Corpus) -> CheckReport {
        let mut t = Tally::new(self.name());
        for _ in 0..self.cases {
            let a = corpus.presented_module();
            let b = corpus.presented_module();
            let sum = a.direct_sum(&b);
            t.case(
                sum.fitting_ideal(0) == a.fitting_ideal(0).product(&b.fitting_ideal(0)),
                || format!("{a:?} + {b:?}"),
            );
        }
        for _ in 0..self.cases {
            let count = corpus.small_int(3).unsigned_abs() as usize + 1;
            let ks: Vec<u32> = (0..count).map(|_| corpus.small_int(4).unsigned_abs() as u32).collect();
            let m = PresentedModule::diagonal(
                &ks.iter().map(|&k| UniPoly::t().pow(k)).collect::<Vec<_>>(),
            );
            let total: u32 = ks.iter().sum();
            t.case(
                m.fitting_ideal(0) == PrincipalIdeal::new(&UniPoly::t().pow(total)),
                || format!("lengths {ks:?}"),
            );
        }
        t.finish()
    }
}

struct FittingBaseChange {
    modules: usize,
    points: i64,
}

impl Check for FittingBaseChange {
    fn name(&self) -> &'static str {
        "fitting-base-change"
    }

    fn run(&self, corpus: &mut Corpus) -> CheckReport {
        let mut t = Tally::new(self.name());
        for _ in 0..self.modules {
            let m = corpus.presented_module();
            let mut points: Vec<Q> = (-self.points / 2..self.points - self.points / 2).map(q).collect();
            // include a root of F^0 when there is one
            let f0 = m.fitting_ideal(0);
            if !f0.is_zero() {
                points.extend(f0.generator().rational_roots());
            }
            for c in &points {
                let field = m.base_change_evaluate(c);
                for h in 0..=m.target_rank() {
                    let expected = m.fitting_ideal(h).evaluate_at(c);
                    t.case(field.fitting_ideal(h) == expected, || {
                        format!("{m:?} at t = {c}, h = {h}")
                    });
                }
            }
            let u = loop {
                let u = corpus.poly(2);
                if !u.is_constant() {
                    break u;
                }
            };
            t.case(
                m.substitute(&u).fitting_ideal(0) == f0.substitute(&u),
                || format!("{m:?} under t -> {u}"),
            );
        }
        t.finish()
    }
}

struct DefectVersusFitting {
    cases: usize,
}

impl Check for DefectVersusFitting {
    fn name(&self) -> &'static str {
        "defect-versus-fitting"
    }

    fn run(&self, corpus: &mut Corpus) -> CheckReport {
        let mut t = Tally::new(self.name());
        for _ in 0..self.cases {
            let d = corpus.small_int(2).abs();
            let l = corpus.line_subsheaf_with_defect(&SplitBundle::sl2(d));
            let n = l.normalization();
            let ok = l.defect_agrees_with_fitting()
                && n.defect().is_empty()
                && n.source_degree() == l.source_degree() + l.defect().degree();
            t.case(ok, || format!("{l:?}"));
        }
        t.finish()
    }
}

struct CensusGolden;

impl Check for CensusGolden {
    fn name(&self) -> &'static str {
        "census-golden"
    }

    fn run(&self, _corpus: &mut Corpus) -> CheckReport {
        let mut t = Tally::new(self.name());
        let dim = |g, l| census::nilcone_census(&CensusInput::new(g, l)).map(|r| r.dimension);
        for l in (0..=20).step_by(2) {
            t.case(dim(0, l) == Ok(l - 1), || format!("g = 0, degL = {l}"));
        }
        for l in (2..=20).step_by(2) {
            t.case(dim(1, l) == Ok(l), || format!("g = 1, degL = {l}"));
        }
        for g in 0..=6u32 {
            for l in (2 * i64::from(g)..=24).step_by(2) {
                let r = census::nilcone_census(&CensusInput::new(g, l));
                t.case(
                    r.as_ref().is_ok_and(|r| {
                        r.dimension == l + i64::from(g) - 1
                            && r.component_families.square_root_count == 1 << (2 * g)
                    }),
                    || format!("g = {g}, degL = {l}: {r:?}"),
                );
            }
        }
        let stable: Vec<_> = [4, 2, 0].iter().map(|&l| census::stable_census(2, l)).collect();
        t.case(stable == vec![Ok(2), Ok(2), Ok(1)], || format!("stable counts {stable:?}"));
        for l in (0..=12).step_by(2) {
            for d in -l / 2..=20 {
                let rank = census::springer_bundle_rank(0, d, l);
                let total = rank.map(|r| r + census::bun_b_dimension(d, 0));
                t.case(total == Ok(l - 1), || format!("g = 0, degL = {l}, d = {d}"));
            }
        }
        t.finish()
    }
}

struct QuasiMaps {
    cases: usize,
}

impl Check for QuasiMaps {
    fn name(&self) -> &'static str {
        "quasimap-determinant"
    }

    fn run(&self, corpus: &mut Corpus) -> CheckReport {
        let mut t = Tally::new(self.name());
        for _ in 0..self.cases {
            let (a, b) = (corpus.rational(3), corpus.rational(3));
            let (c, d) = if corpus.small_int(1) == 0 {
                let x = corpus.rational(2);
                (a.clone() * &x, b.clone() * &x)
            } else {
                (corpus.rational(3), corpus.rational(3))
            };
            if a.is_zero() && b.is_zero() && c.is_zero() && d.is_zero() {
                continue;
            }
            let det = a.clone() * &d - b.clone() * &c;
            let column = vec![
                BinaryForm::linear(a.clone(), b.clone()),
                BinaryForm::linear(c.clone(), d.clone()),
            ];
            let l = LineSubsheaf::from_column(-1, SplitBundle::trivial(2), column)
                .expect("nonzero column");
            let class = l.quasimap_classify();
            let genuine = matches!(class, Ok(QuasiMapClass::GenuineMap));
            let map_degree = -l.normalization().source_degree();
            let params = l.column().map(|f| f.coeffs().len()).sum::<usize>();
            let ok = class.is_ok()
                && genuine == !det.is_zero()
                && l.defect().degree() + map_degree == 1
                && params == 4;
            t.case(ok, || format!("({a}, {b}; {c}, {d}) gave {class:?}"));
        }
        t.finish()
    }
}

struct CanonicalRoundTrip {
    nilpotents: usize,
    traceless: usize,
}

impl Check for CanonicalRoundTrip {
    fn name(&self) -> &'static str {
        "canonical-round-trip"
    }

    fn run(&self, corpus: &mut Corpus) -> CheckReport {
        let mut t = Tally::new(self.name());
        for i in 0..self.nilpotents {
            let built = if i % 2 == 0 {
                corpus.nilpotent(6)
            } else {
                corpus.split_nilpotent(6, false)
            };
            let phi = &built.field;
            let back = phi
                .canonical_form()
                .and_then(|c| c.reassemble(phi.d(), phi.ell()));
            t.case(back.as_ref() == Ok(phi), || format!("{phi:?} came back as {back:?}"));
        }
        for _ in 0..self.traceless {
            let phi = corpus.traceless();
            t.case(phi.is_nilpotent() == phi.square().is_zero(), || format!("{phi:?}"));
        }
        t.finish()
    }
}

struct JsonRoundTrip {
    cases: usize,
}

impl Check for JsonRoundTrip {
    fn name(&self) -> &'static str {
        "json-round-trip"
    }

    fn run(&self, corpus: &mut Corpus) -> CheckReport {
        fn again<T: JsonCodec>(x: &T) -> bool {
            let text = render(&x.to_json());
            match serde_json::from_str(&text).map(|v| T::from_json(&v)) {
                Ok(Ok(y)) => render(&y.to_json()) == text,
                _ => false,
            }
        }
        let mut t = Tally::new(self.name());
        for _ in 0..self.cases {
            let built = corpus.split_nilpotent(6, false);
            let phi = &built.field;
            let k = built.kernel.source_degree();
            let mut ok = again(phi) && again(&built.kernel) && again(&built.h);
            ok &= phi.canonical_form().is_ok_and(|c| again(&c));
            ok &= enumerate_fiber(phi, k - 1).is_ok_and(|f| again(&f));
            let m = corpus.presented_module();
            ok &= again(&m) && again(&m.fitting_ideal(0)) && again(&m.fitting_rank());
            t.case(ok, || format!("{phi:?}"));
        }
        t.finish()
    }
}

/// Default case counts meet or exceed the acceptance thresholds.
pub fn default_checks() -> Vec<Arc<dyn Check>> {
    vec![
        Arc::new(WorkedExample),
        Arc::new(RegularSingleton { cases: 500 }),
        Arc::new(DivisibilityAndCounts {
            squarefree: 500,
            repeated: 300,
        }),
        Arc::new(FittingPresentation { sequences: 120 }),
        Arc::new(FittingSumsAndLength { cases: 100 }),
        Arc::new(FittingBaseChange {
            modules: 30,
            points: 20,
        }),
        Arc::new(DefectVersusFitting { cases: 250 }),
        Arc::new(CensusGolden),
        Arc::new(QuasiMaps { cases: 1200 }),
        Arc::new(CanonicalRoundTrip {
            nilpotents: 500,
            traceless: 1000,
        }),
        Arc::new(JsonRoundTrip { cases: 500 }),
    ]
}

/// Runs every check; each check gets its own corpus derived from `seed`.
pub fn run_all(checks: &[Arc<dyn Check>], seed: u64) -> Vec<CheckReport> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = checks
            .iter()
            .enumerate()
            .map(|(i, check)| {
                let check = Arc::clone(check);
                scope.spawn(move || check.run(&mut Corpus::new(seed.wrapping_add(i as u64))))
            })
            .collect();
        handles
            .into_iter()
            .zip(checks)
            .map(|(h, check)| {
                h.join().unwrap_or_else(|_| CheckReport {
                    name: check.name(),
                    cases: 0,
                    failures: vec!["check panicked".into()],
                })
            })
            .collect()
    })
}
