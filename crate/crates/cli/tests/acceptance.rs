//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! Random inputs come from the library's seeded corpus; the expected
//! answers come from the oracles in this file.

use std::collections::BTreeSet;
use std::process::Command;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use nilcone::census::{self, CensusInput};
use nilcone::corpus::Corpus;
use nilcone::fitting::{FieldIdeal, PresentedModule, PrincipalIdeal};
use nilcone::forms::{BinaryForm, Point};
use nilcone::higgs::HiggsField;
use nilcone::json::JsonCodec;
use nilcone::poly::UniPoly;
use nilcone::rational::{q, Q};
use nilcone::sheaves::{LineSubsheaf, QuasiMapClass, SplitBundle};
use nilcone::springer::{check_conditions, enumerate_fiber, ConditionOutcome};

const SEED: u64 = 20_240_601;

struct Outcome {
    cases: usize,
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        }
    }

    fn require(&mut self, label: &str, got: usize, at_least: usize) {
        self.check(got >= at_least, || format!("{label}: {got} < {at_least}"));
    }
}

// ---------------------------------------------------------------------------
// oracles

/// Order of vanishing of `f` at `p`, by repeated synthetic division.
fn ord_at(f: &BinaryForm, p: &Point) -> u32 {
    assert!(!f.is_zero());
    match p {
        Point::Infinity => f.coeffs().iter().position(|c| !c.is_zero()).unwrap() as u32,
        Point::Finite(r) => {
            // f(z, 1) = sum c_i z^(n-i): coefficients from the top degree down
            let mut coeffs: Vec<Q> = f.coeffs().to_vec();
            let mut order = 0;
            while coeffs.len() > 1 {
                let mut quotient = Vec::with_capacity(coeffs.len() - 1);
                let mut acc = Q::zero();
                for c in &coeffs {
                    acc = acc * r + c;
                    quotient.push(acc.clone());
                }
                if !quotient.pop().unwrap().is_zero() {
                    break;
                }
                coeffs = quotient;
                order += 1;
            }
            order
        }
    }
}

/// Identically zero iff zero at `deg + 1` distinct points.
fn vanishes_identically(f: &BinaryForm) -> bool {
    (0..=f.degree().max(0)).all(|i| f.eval(&q(i), &Q::one()).is_zero())
}

/// Every `c` with `0 <= c_i <= caps_i`, `sum c = n`, listed one by one.
fn count_vectors(caps: &[u32], n: i64) -> u64 {
    if n < 0 {
        return 0;
    }
    match caps.split_first() {
        None => u64::from(n == 0),
        Some((&cap, rest)) => (0..=i64::from(cap)).map(|c| count_vectors(rest, n - c)).sum(),
    }
}

fn multisets(n: usize, size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for mut rest in multisets(n - first, size - 1) {
            rest.iter_mut().for_each(|i| *i += first);
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Determinant by cofactor expansion along the first row.
fn laplace(m: &[Vec<UniPoly>]) -> UniPoly {
    if m.is_empty() {
        return UniPoly::one();
    }
    let mut total = UniPoly::zero();
    for j in 0..m.len() {
        let minor: Vec<Vec<UniPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let term = m[0][j].mul(&laplace(&minor));
        total = if j % 2 == 0 { total.add(&term) } else { total.sub(&term) };
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Monic gcd of all `(b - h)`-minors; standard conventions at the edges.
fn fitting_oracle(m: &PresentedModule, h: usize) -> UniPoly {
    let (b, a) = (m.target_rank(), m.source_rank());
    if h >= b {
        return UniPoly::one();
    }
    let size = b - h;
    let mut g = UniPoly::zero();
    for rows in subsets(b, size) {
        for cols in subsets(a, size) {
            let sub: Vec<Vec<UniPoly>> = rows
                .iter()
                .map(|&r| cols.iter().map(|&c| m.matrix()[r][c].clone()).collect())
                .collect();
            g = g.gcd(&laplace(&sub));
        }
    }
    g
}

fn rank_over_q(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone() / &m[rank][c];
                for k in c..cols {
                    let v = m[rank][k].clone() * &f;
                    m[r][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn worked_example() -> HiggsField {
    HiggsField::new(
        0,
        2,
        BinaryForm::zero(2),
        BinaryForm::from_ints(&[1, 0, 0]),
        BinaryForm::zero(2),
    )
    .unwrap()
}

fn column(m: i64, d: i64, entries: Vec<BinaryForm>) -> LineSubsheaf {
    LineSubsheaf::from_column(m, SplitBundle::sl2(d), entries).unwrap()
}

// ---------------------------------------------------------------------------
// criteria

fn worked_example_fiber() -> Outcome {
    let mut out = Outcome::new();
    let phi = worked_example();
    let expected = column(-1, 0, vec![BinaryForm::z(), BinaryForm::zero(1)]);

    let fiber = enumerate_fiber(&phi, -1).unwrap();
    out.check(
        fiber.points.len() == 1 && fiber.points[0].lambda() == &expected,
        || format!("library fiber {fiber:?}"),
    );

    let bin = env!("CARGO_BIN_EXE_nilcone");
    let run = Command::new(bin)
        .args(["fiber", "--m", "-1", "--json", &phi.to_json().to_string()])
        .output()
        .unwrap();
    out.check(run.status.success(), || format!("exit status {}", run.status));
    let doc: Value = serde_json::from_slice(&run.stdout).unwrap_or(Value::Null);
    let points = doc["points"].as_array().cloned().unwrap_or_default();
    out.check(points.len() == 1, || format!("CLI returned {doc}"));
    if let Some(p) = points.first() {
        let got = LineSubsheaf::from_json(&p["lambda"]);
        out.check(got.as_ref() == Ok(&expected), || format!("CLI point {got:?}"));
        let col = &p["lambda"]["entries"];
        out.check(
            col[0][0] == json!({"degree": 1, "coeffs": ["1", "0"]})
                && col[1][0] == json!({"degree": 1, "coeffs": ["0", "0"]}),
            || format!("CLI embedding {col}"),
        );
    }

    // every (s; 0) with s = az + bw not proportional to z fails condition (2)
    for a in -6..=6i64 {
        for b in -6..=6i64 {
            if b == 0 {
                continue;
            }
            let lambda = column(-1, 0, vec![BinaryForm::from_ints(&[a, b]), BinaryForm::zero(1)]);
            let outcome = check_conditions(&phi, &lambda).unwrap();
            out.check(
                matches!(outcome, ConditionOutcome::Fail { condition: 2, .. }),
                || format!("({a}z + {b}w; 0) gave {outcome:?}"),
            );
        }
    }
    out
}

fn regular_singleton() -> Outcome {
    let mut out = Outcome::new();
    let mut corpus = Corpus::new(SEED);
    let mut fields = 0;
    for _ in 0..600 {
        let built = corpus.split_nilpotent(6, true);
        fields += 1;
        out.check(built.factors.iter().all(|(_, e)| *e == 1), || "not squarefree".into());
        let k = built.kernel.source_degree();
        let ell = built.field.ell();
        for m in (-ell / 2 - 1)..=(k + 2) {
            let fiber = enumerate_fiber(&built.field, m).unwrap();
            let lambdas: Vec<&LineSubsheaf> = fiber.points.iter().map(|p| p.lambda()).collect();
            let ok = if m == k {
                lambdas == vec![&built.kernel]
            } else {
                lambdas.is_empty()
            };
            out.check(ok && !fiber.unresolved, || {
                format!("{:?} at m = {m}: {lambdas:?}", built.field)
            });
        }
    }
    out.require("fields", fields, 500);
    out
}

fn divisibility_and_counts() -> Outcome {
    let mut out = Outcome::new();
    let mut corpus = Corpus::new(SEED);
    let mut fields = 0;
    for i in 0..900 {
        // the squarefree corpus of the previous criterion, then repeated roots
        let built = corpus.split_nilpotent(6, i < 600);
        fields += 1;
        let phi = &built.field;
        let k = built.kernel.source_degree();
        let caps: Vec<u32> = built.factors.iter().map(|(_, e)| e / 2).collect();
        let lines: Vec<BinaryForm> = built.factors.iter().map(|(p, _)| p.linear_form()).collect();
        for m in (-phi.ell() / 2 - 1)..=(k + 1) {
            let fiber = enumerate_fiber(phi, m).unwrap();
            for point in &fiber.points {
                let content = point.lambda().content();
                let within = built.factors.iter().all(|(p, e)| 2 * ord_at(&content, p) <= *e);
                let located: u32 = built.factors.iter().map(|(p, _)| ord_at(&content, p)).sum();
                out.check(within && i64::from(located) == content.degree(), || {
                    format!("{phi:?}: point {:?}", point.lambda())
                });
            }
            let expected = count_vectors(&caps, k - m);
            out.check(fiber.points.len() as u64 == expected, || {
                format!("{phi:?} at m = {m}: {} points, formula {expected}", fiber.points.len())
            });
            let mut brute = BTreeSet::new();
            if k - m >= 0 {
                for choice in multisets(lines.len(), (k - m) as usize) {
                    let g = choice.iter().fold(BinaryForm::one(), |acc, &j| acc.mul(&lines[j]));
                    let lambda = built.kernel.multiplied_by(&g).unwrap();
                    if check_conditions(phi, &lambda).unwrap() == ConditionOutcome::Pass {
                        brute.insert(lambda);
                    }
                }
            }
            let listed: BTreeSet<LineSubsheaf> =
                fiber.points.iter().map(|p| p.lambda().clone()).collect();
            out.check(listed == brute, || format!("{phi:?} at m = {m}: oracle disagrees"));
        }
    }
    out.require("fields", fields, 500);
    out
}

fn fitting_suite() -> Outcome {
    let mut out = Outcome::new();
    let mut corpus = Corpus::new(SEED);

    let mut sequences = 0;
    for _ in 0..150 {
        let original = corpus.presented_module();
        for h in 0..=original.target_rank() {
            let oracle = fitting_oracle(&original, h);
            out.check(original.fitting_ideal(h).generator() == &oracle, || {
                format!("{original:?}, h = {h}")
            });
        }
        let mut m = original.clone();
        for _ in 0..6 {
            let op = corpus.elementary_op(&m);
            m.apply(&op).unwrap();
        }
        sequences += 1;
        for h in 0..=original.target_rank() + 1 {
            out.check(m.fitting_ideal(h) == original.fitting_ideal(h), || {
                format!("{original:?} became {m:?}, h = {h}")
            });
        }
    }
    out.require("operation sequences", sequences, 100);

    for _ in 0..150 {
        let a = corpus.presented_module();
        let b = corpus.presented_module();
        let lhs = fitting_oracle(&a.direct_sum(&b), 0);
        let rhs = fitting_oracle(&a, 0).mul(&fitting_oracle(&b, 0)).monic();
        out.check(lhs == rhs, || format!("{a:?} + {b:?}"));
    }

    let mut points_used = BTreeSet::new();
    for _ in 0..40 {
        let m = corpus.presented_module();
        let mut points: Vec<Q> = (-12..=12).map(q).collect();
        points.push(Q::new(1.into(), 2.into()));
        points.push(Q::new((-7).into(), 3.into()));
        for c in points {
            let field = m.base_change_evaluate(&c);
            let rank = rank_over_q(field.matrix());
            for h in 0..=m.target_rank() {
                let need = m.target_rank() - h;
                let oracle = if need == 0 || rank >= need {
                    FieldIdeal::Unit
                } else {
                    FieldIdeal::Zero
                };
                let image = if fitting_oracle(&m, h).eval(&c).is_zero() {
                    FieldIdeal::Zero
                } else {
                    FieldIdeal::Unit
                };
                out.check(field.fitting_ideal(h) == oracle && oracle == image, || {
                    format!("{m:?} at t = {c}, h = {h}")
                });
            }
            points_used.insert(c);
        }
    }
    out.require("evaluation points", points_used.len(), 20);

    for _ in 0..100 {
        let count = corpus.small_int(3).unsigned_abs() as usize + 1;
        let ks: Vec<u32> = (0..count).map(|_| corpus.small_int(5).unsigned_abs() as u32).collect();
        let m = PresentedModule::diagonal(&ks.iter().map(|&k| UniPoly::t().pow(k)).collect::<Vec<_>>());
        let total: u32 = ks.iter().sum();
        out.check(
            m.fitting_ideal(0) == PrincipalIdeal::new(&UniPoly::t().pow(total)),
            || format!("lengths {ks:?}"),
        );
    }

    let mut subsheaves = 0;
    for _ in 0..250 {
        let d = corpus.small_int(2).abs();
        let l = corpus.line_subsheaf_with_defect(&SplitBundle::sl2(d));
        subsheaves += 1;
        let defect = l.defect();
        let col: Vec<&BinaryForm> = l.column().collect();
        for (chart, local) in [
            ("w = 1", defect.form().chart_w()),
            ("z = 1", defect.form().chart_z()),
        ] {
            let entries: Vec<Vec<UniPoly>> = col
                .iter()
                .map(|f| vec![if chart == "w = 1" { f.chart_w() } else { f.chart_z() }])
                .collect();
            let m = PresentedModule::new(entries.len(), 1, entries).unwrap();
            let ideal = m.fitting_ideal(m.target_rank() - 1);
            out.check(ideal.generator() == &local.monic(), || {
                format!("{l:?} on chart {chart}")
            });
        }
        out.check(l.defect_agrees_with_fitting(), || format!("{l:?}"));
    }
    out.require("line subsheaves", subsheaves, 200);
    out
}

fn census_golden() -> Outcome {
    let mut out = Outcome::new();
    let report = |g, l| census::nilcone_census(&CensusInput::new(g, l)).unwrap();
    for l in (0..=30).step_by(2) {
        out.check(report(0, l).dimension == l - 1, || format!("g = 0, degL = {l}"));
    }
    for l in (2..=30).step_by(2) {
        out.check(report(1, l).dimension == l, || format!("g = 1, degL = {l}"));
    }
    for g in 0..=10u32 {
        for l in (2 * i64::from(g)..=40).step_by(2) {
            let r = report(g, l);
            out.check(
                r.dimension == l + i64::from(g) - 1
                    && r.component_families.square_root_count == 4u64.pow(g)
                    && r.component_families.integer_family.exclusive_lower_bound == -l / 2,
                || format!("g = {g}, degL = {l}: {r:?}"),
            );
        }
    }
    let stable: Vec<i64> = [4, 2, 0]
        .iter()
        .map(|&l| census::stable_census(2, l).unwrap())
        .collect();
    out.check(stable == vec![2, 2, 1], || format!("stable counts {stable:?}"));
    for l in (0..=20).step_by(2) {
        for d in -l / 2..=20 {
            let rank = census::springer_bundle_rank(0, d, l).unwrap();
            out.check(rank + census::bun_b_dimension(d, 0) == l - 1, || {
                format!("degL = {l}, d = {d}")
            });
        }
    }
    let bin = env!("CARGO_BIN_EXE_nilcone");
    let run = Command::new(bin).args(["census", "--g", "0", "--degL", "4"]).output().unwrap();
    let doc: Value = serde_json::from_slice(&run.stdout).unwrap_or(Value::Null);
    out.check(doc["dimension"] == json!(3), || format!("CLI census {doc}"));
    out
}

fn quasimap_example() -> Outcome {
    let mut out = Outcome::new();
    let mut corpus = Corpus::new(SEED);
    let mut columns = 0;
    let mut genuine_seen = 0;
    let mut degenerate_seen = 0;
    while columns < 1200 {
        let mut c: Vec<Q> = (0..4).map(|_| corpus.rational(3)).collect();
        if columns % 3 == 0 {
            // force a rank-one coefficient matrix
            let x = corpus.rational(2);
            c[2] = c[0].clone() * &x;
            c[3] = c[1].clone() * &x;
        }
        if c.iter().all(Zero::is_zero) {
            continue;
        }
        columns += 1;
        let det = c[0].clone() * &c[3] - c[1].clone() * &c[2];
        let l = LineSubsheaf::from_column(
            -1,
            SplitBundle::trivial(2),
            vec![
                BinaryForm::linear(c[0].clone(), c[1].clone()),
                BinaryForm::linear(c[2].clone(), c[3].clone()),
            ],
        )
        .unwrap();
        let class = l.quasimap_classify().unwrap();
        let genuine = class == QuasiMapClass::GenuineMap;
        if genuine {
            genuine_seen += 1;
        } else {
            degenerate_seen += 1;
        }
        out.check(genuine == !det.is_zero(), || format!("{c:?}: {class:?}"));
        // a degree-1 column either is a map of degree 1 or has a one-point
        // defect and saturates to a constant map
        let map_degree = -l.normalization().source_degree();
        let coefficients: usize = l.column().map(|f| f.coeffs().len()).sum();
        out.check(
            l.defect().degree() + map_degree == 1 && coefficients == 4 && coefficients - 1 == 3,
            || format!("{c:?}: defect {:?}", l.defect()),
        );
        if let QuasiMapClass::QuasiMapWithDefect(d) = &class {
            out.check(d.degree() == 1, || format!("{c:?}: defect {d:?}"));
        }
    }
    out.require("columns", columns, 1000);
    out.require("genuine maps", genuine_seen, 100);
    out.require("quasi-maps", degenerate_seen, 100);
    out
}

fn canonical_round_trip() -> Outcome {
    let mut out = Outcome::new();
    let mut corpus = Corpus::new(SEED);
    let mut round_trips = 0;
    for i in 0..600 {
        let built = if i % 2 == 0 {
            corpus.nilpotent(6)
        } else {
            corpus.split_nilpotent(6, false)
        };
        let phi = &built.field;
        let c = phi.canonical_form().unwrap();
        let back = HiggsField::build_from(&c.kernel(phi.d()).unwrap(), &c.h, phi.ell()).unwrap();
        round_trips += 1;
        out.check(&back == phi, || format!("{phi:?} came back as {back:?}"));
        // the recovered kernel is the one it was built from, up to scalar
        out.check(c.kernel(phi.d()).unwrap() == built.kernel, || {
            format!("{phi:?}: kernel {c:?}")
        });
        out.check(c.s.gcd(&c.t).map(|g| g.degree()) == Ok(0), || format!("{c:?} not primitive"));
    }
    out.require("round trips", round_trips, 500);

    let mut fields = 0;
    let (mut nil, mut non) = (0, 0);
    for _ in 0..1200 {
        let phi = corpus.traceless();
        fields += 1;
        let det = phi.p().mul(phi.p()).add(&phi.q().mul(phi.r())).unwrap();
        let oracle = vanishes_identically(&det);
        if oracle {
            nil += 1;
        } else {
            non += 1;
        }
        out.check(
            phi.is_nilpotent() == oracle && phi.square().is_zero() == oracle,
            || format!("{phi:?}"),
        );
    }
    out.require("traceless fields", fields, 1000);
    out.require("nilpotent fields", nil, 100);
    out.require("non-nilpotent fields", non, 100);
    out
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("1 worked-example fiber", worked_example_fiber),
        ("2 globally-regular singleton", regular_singleton),
        ("3 divisibility law and fiber counts", divisibility_and_counts),
        ("4 Fitting suite", fitting_suite),
        ("5 census golden values", census_golden),
        ("6 quasi-map determinant criterion", quasimap_example),
        ("7 canonical-form round trip", canonical_round_trip),
    ];
    let mut all = true;
    for (name, run) in criteria {
        let outcome = run();
        let pass = outcome.failures.is_empty();
        all &= pass;
        println!(
            "{} criterion {name} ({} checks)",
            if pass { "PASS" } else { "FAIL" },
            outcome.cases
        );
        for f in &outcome.failures {
            println!("    {f}");
        }
    }
    if !all {
        std::process::exit(1);
    }
}
