//! Regression batteries shared by the command line and the test suites.
//!
//! Each battery returns a [`CheckReport`]: how many instances were checked,
//! which failed, and a few lines of detail.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::folcheck::{functor_law_suite, transfer_suite, TransferSuiteConfig};
use crate::hyper::partition::BaseOrder;
use crate::hyper::{
    compare2, is_unlimited, nu1, nu2, nunustar_check, nunustar_direct, partition_level2,
    saturate_chain, star_nu, well_order_criterion, Hyper1, Hyper2, Level2Class, WellOrderStatus,
};
use crate::lr::random::{random_extension_instance, random_table_relator};
use crate::lr::{alpha_gamma_roundtrip_check, extend_ultrafilter_step, CylUF, LocalRelator, LrError};
use crate::folcheck::model::tuples;
use crate::poly::q;
use crate::seq::{Expr, Pred, Rel, Sort, Verdict};

use crate::stone::{
    beta_product_compare, brute_force_ultrafilters, dual_span_check, enumerate_ultrafilters,
    DUAL_SPAN_BOUND,
};

/// Default seed of the randomized batteries.
pub const DEFAULT_SEED: u64 = 20_240_611;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub instances: u64,
    pub failures: Vec<String>,
    pub details: Vec<String>,
}

impl CheckReport {
    fn new(name: &str) -> CheckReport {
        CheckReport {
            name: name.to_string(),
            ..CheckReport::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.instances > 0
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn h1(e: Expr) -> Hyper1 {
    Hyper1::from_expr(e).expect("battery terms are well formed")
}

fn n() -> Expr {
    Expr::inner()
}

fn slot_rel(r: Rel) -> Pred {
    Pred::cmp(r, Expr::slot(0), Expr::slot(1))
}

/// Probes for the level-2 partition.
pub fn probe_battery() -> Vec<Hyper1> {
    vec![
        nu1(q(0)),
        nu1(q(1)),
        nu1(q(5)),
        Hyper1::omega(),
        h1(Expr::mul(n(), n())),
        h1(Expr::add(Expr::mul(Expr::int(2), n()), Expr::int(1))),
    ]
}

/// Positive infinitesimals of the comparison battery.
pub fn infinitesimal_battery() -> Vec<Hyper1> {
    let inv = |d: Expr| h1(Expr::div(Expr::int(1), d));
    vec![
        Hyper1::epsilon(),
        inv(Expr::mul(Expr::add(n(), Expr::int(1)), Expr::add(n(), Expr::int(1)))),
        inv(Expr::add(Expr::mul(Expr::int(2), n()), Expr::int(1))),
        inv(Expr::add(Expr::mul(n(), n()), Expr::int(5))),
        h1(Expr::div(Expr::int(2), Expr::add(n(), Expr::int(3)))),
    ]
}

/// Functor laws for index sets up to `max_s` and carriers up to `k`.
pub fn functor_laws(max_s: usize, k: usize) -> CheckReport {
    let mut rep = CheckReport::new("functor laws");
    match functor_law_suite(max_s, k) {
        Ok(r) => {
            rep.instances = r.instances();
            rep.failures = r.failures;
            rep.details = r
                .laws
                .iter()
                .map(|(law, t)| format!("{law}: {} checked, {} failed", t.checked, t.failed))
                .collect();
        }
        Err(e) => rep.failures.push(e.to_string()),
    }
    rep
}

/// The exhaustive sentence battery.
pub fn transfer(cfg: &TransferSuiteConfig) -> CheckReport {
    let mut rep = CheckReport::new("transfer");
    match transfer_suite(cfg) {
        Ok(r) => {
            rep.instances = r.instances as u64;
            rep.failures = r
                .failures
                .iter()
                .map(|f| format!("|A|={} R={:?} |S|={} point {}: {} ({} vs {})", f.carrier, f.relation, f.index_size, f.point, f.sentence, f.standard, f.star))
                .collect();
            rep.details = vec![
                format!("{} sentences per instance", r.sentences),
                format!("{} sentence evaluations", r.checks),
                format!("{} instances with an empty carrier", r.empty_instances),
            ];
        }
        Err(e) => rep.failures.push(e.to_string()),
    }
    rep
}

/// Facts about the two embeddings of `*ℕ` into `**ℕ`.
pub fn level2_facts() -> CheckReport {
    let mut rep = CheckReport::new("level-2 facts");
    let w = Hyper1::omega();
    let expect = |rep: &mut CheckReport, x: &Hyper2, r: Rel, y: &Hyper2, want: Verdict| {
        let got = compare2(x, y, r);
        rep.check(got == want, || format!("{x} {} {y}: got {got}, expected {want}", r.symbol()));
    };
    for a in [0, 1, 5] {
        let s = nu1(q(a));
        rep.check(nu2(&s).fragment_eq(&star_nu(&s)), || format!("ν(ν({a})) ≠ *ν(ν({a}))"));
        expect(&mut rep, &nu2(&s), Rel::Eq, &star_nu(&s), Verdict::True);
        expect(&mut rep, &star_nu(&w), Rel::Gt, &nu2(&s), Verdict::True);
    }
    expect(&mut rep, &star_nu(&w), Rel::Lt, &nu2(&w), Verdict::True);
    expect(&mut rep, &star_nu(&w), Rel::Ne, &nu2(&w), Verdict::True);
    rep.check(!star_nu(&w).fragment_eq(&nu2(&w)), || "*ν(ω) and ν(ω) share a representative".into());
    let sq = h1(Expr::mul(n(), n()));
    expect(&mut rep, &nu2(&w), Rel::Gt, &star_nu(&sq), Verdict::True);
    let eps = infinitesimal_battery();
    for e in &eps {
        for f in &eps {
            expect(&mut rep, &nu2(e), Rel::Lt, &star_nu(f), Verdict::True);
        }
    }
    let probes = probe_battery();
    let cases: Vec<(Hyper2, Level2Class)> = vec![
        (nu2(&nu1(q(0))), Level2Class::StandardStandard),
        (star_nu(&nu1(q(5))), Level2Class::StandardStandard),
        (star_nu(&w), Level2Class::StarNuOfUnlimited),
        (star_nu(&sq), Level2Class::StarNuOfUnlimited),
        (nu2(&w), Level2Class::StarUnlimited),
        (nu2(&sq), Level2Class::StarUnlimited),
    ];
    for (x, want) in cases {
        let got = partition_level2(&x, &probes);
        rep.check(got.as_ref().ok() == Some(&want), || format!("partition of {x}: {got:?}, expected {want}"));
    }
    rep
}

/// Relations, written in `x` (first argument) and `y`, for the criterion battery.
pub fn nunustar_relations() -> Vec<Pred> {
    let mut out: Vec<Pred> = [Rel::Lt, Rel::Le, Rel::Eq, Rel::Ne, Rel::Gt, Rel::Ge]
        .into_iter()
        .map(slot_rel)
        .collect();
    out.push(Pred::cmp(Rel::Lt, Expr::slot(0), Expr::add(Expr::slot(1), Expr::int(3))));
    out.push(Pred::cmp(Rel::Eq, Expr::modulo(Expr::slot(0), 2), Expr::int(0)));
    out.push(Pred::And(vec![
        Pred::cmp(Rel::Gt, Expr::slot(0), Expr::int(2)),
        slot_rel(Rel::Le),
    ]));
    out
}

/// Elements for the criterion battery.
pub fn nunustar_elements() -> Vec<Hyper1> {
    vec![
        nu1(q(0)),
        nu1(q(3)),
        Hyper1::omega(),
        h1(Expr::mul(Expr::int(2), n())),
        h1(Expr::modulo(n(), 3)),
        h1(Expr::mul(n(), n())),
        h1(Expr::sub(Expr::int(0), n())),
        h1(Expr::sub(n(), Expr::int(5))),
    ]
}

/// The standard-set criterion against direct iterated evaluation.
pub fn nunustar_agreement() -> CheckReport {
    let mut rep = CheckReport::new("nunustar criterion");
    let (rels, elems) = (nunustar_relations(), nunustar_elements());
    let (mut decided, mut undecided, mut unsupported) = (0u64, 0u64, 0u64);
    for r in &rels {
        for a in &elems {
            for b in &elems {
                let direct = nunustar_direct(r, a, b);
                match nunustar_check(r, a, b) {
                    Ok(c) if c.is_decided() && direct.is_decided() => {
                        decided += 1;
                        rep.check(c == direct, || format!("R = {r}, a = {a}, b = {b}: {c} vs {direct}"));
                    }
                    Ok(_) => undecided += 1,
                    Err(_) => unsupported += 1,
                }
            }
        }
    }
    rep.details = vec![format!(
        "{decided} decided on both sides, {undecided} undetermined on one side, {unsupported} outside the criterion's scope"
    )];
    rep
}

/// `*ν(a) ≤ ν(a)` on ℕ and ℤ batteries.
pub fn well_order() -> CheckReport {
    let mut rep = CheckReport::new("well-order criterion");
    // Periodic elements such as n mod 3 are left out: their comparison
    // depends on the ultrafilter.
    let nat: Vec<Hyper1> = vec![
        nu1(q(0)),
        nu1(q(3)),
        Hyper1::omega(),
        h1(Expr::mul(Expr::int(2), n())),
        h1(Expr::mul(n(), n())),
        h1(Expr::add(n(), Expr::int(7))),
    ];
    match well_order_criterion(BaseOrder::Nat, &nat) {
        Ok(r) => {
            for e in &r.entries {
                rep.check(e.direct == Verdict::True && e.via_set == Verdict::True, || {
                    format!("ℕ: *ν({0}) ≤ ν({0}) gave {1} / {2}", e.element, e.direct, e.via_set)
                });
            }
            rep.check(r.status == WellOrderStatus::ConsistentWithWellOrdered, || format!("ℕ status {:?}", r.status));
        }
        Err(e) => rep.failures.push(e.to_string()),
    }
    let minus_omega = h1(Expr::sub(Expr::int(0), n()));
    let mut int = nat;
    int.push(minus_omega.clone());
    match well_order_criterion(BaseOrder::Int, &int) {
        Ok(r) => {
            let witness = r.entries.iter().find(|e| e.direct == Verdict::False);
            rep.check(witness.map(|e| e.element.expr()) == Some(minus_omega.expr()), || {
                format!("ℤ: False witness {:?}, expected -ω", witness.map(|e| e.element.to_string()))
            });
            rep.check(witness.map(|e| e.via_set.clone()) == Some(Verdict::False), || "ℤ: the set criterion misses -ω".into());
            rep.check(r.status == WellOrderStatus::WitnessedNonWellOrdered, || format!("ℤ status {:?}", r.status));
        }
        Err(e) => rep.failures.push(e.to_string()),
    }
    rep
}

/// The chain `x > k`, `k < 50`.
pub fn saturation() -> CheckReport {
    let mut rep = CheckReport::new("saturation");
    let fam = slot_rel(Rel::Gt);
    match saturate_chain(&fam, Sort::Nat, 50, 1000) {
        Ok(r) => {
            for (k, v) in r.verdicts.iter().enumerate() {
                rep.check(*v == Verdict::True, || format!("condition x > {k} is {v}"));
            }
            let u = is_unlimited(&r.element);
            rep.check(u == Verdict::True, || format!("{} is_unlimited = {u}", r.element));
            rep.details.push(format!("element {}", r.element));
        }
        Err(e) => rep.failures.push(e.to_string()),
    }
    rep
}

/// Round trip for every principal relator with `|B| ≤ 2`, `|E| ≤ 3` and
/// `|X| ≤ 2`, and for `tables` seeded table-backed relators.
pub fn lr_roundtrip(tables: usize, seed: u64) -> CheckReport {
    let mut rep = CheckReport::new("lr round trip");
    let mut relators = Vec::new();
    for nb in 1..=2 {
        for ne in 0..=3 {
            for p in tuples(&vec![nb; ne]) {
                relators.push(LocalRelator::sized(nb, ne, CylUF::PrincipalAt(p)).expect("valid point"));
            }
        }
    }
    let principal = relators.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..tables {
        let nb = 1 + (rand::Rng::gen_range(&mut rng, 0..2));
        let ne = 1 + (rand::Rng::gen_range(&mut rng, 0..3));
        relators.push(random_table_relator(&mut rng, nb, ne, 8));
    }
    let results: Vec<(String, Result<bool, LrError>)> = relators
        .par_iter()
        .flat_map(|lr| {
            (1..=2).into_par_iter().map(move |nx| {
                let r = alpha_gamma_roundtrip_check(lr, nx).map(|r| r.passed());
                (format!("{:?} with |X| = {nx}", lr.uf()), r)
            })
        })
        .collect();
    for (what, r) in results {
        rep.check(matches!(r, Ok(true)), || format!("{what}: {r:?}"));
    }
    rep.details.push(format!("{principal} principal and {tables} table-backed relators"));
    rep
}

/// Seeded extension requests with `|B| ≤ 3`, `|E| ≤ 4`, `|I| ≤ 2`.
pub fn extension(count: usize, seed: u64) -> CheckReport {
    let mut rep = CheckReport::new("extension step");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rejected = 0;
    for k in 0..count {
        let inst = random_extension_instance(&mut rng, 3, 4, 2);
        match extend_ultrafilter_step(&inst.lr, &inst.eta, &inst.u) {
            Ok(x) => rep.check(x.verified(), || {
                format!("#{k}: projection {} pullback {}", x.projection_ok, x.pullback_ok)
            }),
            Err(LrError::IncompatibleUltrafilters) => rejected += 1,
            Err(e) => rep.check(false, || format!("#{k}: {e}")),
        }
    }
    rep.details.push(format!("{} extended, {rejected} rejected as incompatible", count - rejected));
    rep
}

/// Ultrafilter enumeration, the product comparison and the dual span.
pub fn stone() -> CheckReport {
    let mut rep = CheckReport::new("stone and GF(2)");
    for a in 0..=4 {
        let fast = enumerate_ultrafilters(a).expect("small");
        let mut fast_sorted = fast.clone();
        fast_sorted.sort();
        let brute = brute_force_ultrafilters(a).expect("small");
        rep.check(fast.len() == a && fast_sorted == brute, || format!("|A| = {a}: {} vs {}", fast.len(), brute.len()));
    }
    for b in 0..=DUAL_SPAN_BOUND {
        let r = dual_span_check(b, DUAL_SPAN_BOUND).expect("within bound");
        rep.check(r.full(), || format!("|B| = {b}: rank {}", r.rank));
    }
    for a in 0..=3 {
        for b in 0..=3 {
            let r = beta_product_compare(a, b).expect("small");
            rep.check(r.bijective(), || format!("β({a}×{b}): {r:?}"));
        }
    }
    rep
}

/// Every battery, in a fixed order.
pub fn run_all(seed: u64) -> Vec<CheckReport> {
    vec![
        functor_laws(3, 3),
        transfer(&TransferSuiteConfig::default()),
        level2_facts(),
        nunustar_agreement(),
        lr_roundtrip(24, seed),
        extension(100, seed),
        stone(),
        well_order(),
        saturation(),
    ]
}
