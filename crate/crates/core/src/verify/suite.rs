use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{check_product_rule, CheckReport, Context, Registry, Subject, Verdict};
use crate::arrangement::{random_essential, MultiArrangement, Multiplicity};
use crate::error::{Error, Result};
use crate::groebner::GbConfig;
use crate::logmod::Engine;
use crate::ratpoly::LaurentPolynomial;
use crate::stpoly::st_bipoly;

const EX1: &str = include_str!("../../../../fixtures/ex1.arr");
const EX2_A: &str = include_str!("../../../../fixtures/ex2_A.arr");
const EX2_APRIME: &str = include_str!("../../../../fixtures/ex2_Aprime.arr");
const EX2_B: &str = include_str!("../../../../fixtures/ex2_B.arr");
const GENERIC_3_4: &str = include_str!("../../../../fixtures/generic_3_4.arr");
const BOOL1: &str = include_str!("../../../../fixtures/bool1.arr");
const BOOL2: &str = include_str!("../../../../fixtures/bool2.arr");
const BOOL3: &str = include_str!("../../../../fixtures/bool3.arr");
const BRAID3: &str = include_str!("../../../../fixtures/braid3.arr");
const MULTI_X2Y: &str = include_str!("../../../../fixtures/multi_x2y.arr");

/// Known values for a fixture. Empty fields are not checked.
#[derive(Clone, Debug, Default)]
pub struct Reference {
    pub psi: Option<String>,
    pub st: Option<Vec<i64>>,
    pub chi: Option<Vec<i64>>,
    pub exponents: Option<Vec<i64>>,
    pub tame: Option<bool>,
    /// `(p, pd Omega^p)`.
    pub pd_omega: Vec<(usize, usize)>,
    /// `(p, entries)` for `D^p`.
    pub betti_d: Vec<(usize, Vec<((usize, i64), u64)>)>,
    /// `(p, entries)` for `Omega^p`.
    pub betti_omega: Vec<(usize, Vec<((usize, i64), u64)>)>,
}

#[derive(Clone, Debug)]
pub struct CorpusItem {
    pub id: String,
    pub ma: MultiArrangement,
    pub reference: Reference,
    /// Orders `d` at which the algebra side is computed.
    pub algebra_orders: Vec<u32>,
}

impl CorpusItem {
    pub fn new(id: &str, ma: MultiArrangement) -> Self {
        CorpusItem {
            id: id.to_string(),
            ma,
            reference: Reference::default(),
            algebra_orders: vec![1],
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProductPair {
    pub id: String,
    pub first: MultiArrangement,
    pub second: MultiArrangement,
}

#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub name: String,
    pub items: Vec<CorpusItem>,
    pub pairs: Vec<ProductPair>,
}

fn fixture(text: &str) -> MultiArrangement {
    MultiArrangement::parse(text).expect("bundled fixture parses")
}

/// Bundled fixtures with their known values.
pub fn paper_corpus() -> Corpus {
    let mut ex1 = CorpusItem::new("ex1", fixture(EX1));
    ex1.reference = Reference {
        psi: Some("-x^4*t^3 + 4*x^3*t^2 - 5*x^2*t - x*t + 2*x + 1".into()),
        st: Some(vec![1, 3, 5, 4, 1]),
        chi: Some(vec![-3, 6, -4, 1]),
        tame: Some(true),
        betti_d: vec![(2, vec![((0, 3), 4), ((1, 4), 1)])],
        betti_omega: vec![(1, vec![((0, -1), 4), ((1, 0), 1)])],
        ..Reference::default()
    };
    ex1.algebra_orders = vec![1, 2];

    let mut a = CorpusItem::new("ex2_A", fixture(EX2_A));
    a.reference = Reference {
        exponents: Some(vec![1, 3, 3, 3]),
        tame: Some(true),
        ..Reference::default()
    };
    let mut ap = CorpusItem::new("ex2_Aprime", fixture(EX2_APRIME));
    ap.reference = Reference {
        st: Some(vec![1, 4, 9, 16, 21, 21, 17, 10, 4, 1]),
        tame: Some(true),
        ..Reference::default()
    };
    let mut b = CorpusItem::new("ex2_B", fixture(EX2_B));
    b.reference = Reference {
        st: Some(vec![1, 4, 9, 16, 21, 21, 17, 9, 3, 1]),
        tame: Some(false),
        pd_omega: vec![(1, 2)],
        ..Reference::default()
    };

    let mut small = Vec::new();
    for (id, text, chi) in [
        ("bool1", BOOL1, vec![-1, 1]),
        ("bool2", BOOL2, vec![1, -2, 1]),
        ("bool3", BOOL3, vec![-1, 3, -3, 1]),
        ("generic_3_4", GENERIC_3_4, vec![-3, 6, -4, 1]),
        ("braid3", BRAID3, vec![-6, 11, -6, 1]),
    ] {
        let mut item = CorpusItem::new(id, fixture(text));
        item.reference.chi = Some(chi);
        item.algebra_orders = vec![1, 2, 3];
        small.push(item);
    }
    small[4].reference.exponents = Some(vec![1, 2, 3]);
    let mut multi = CorpusItem::new("multi_x2y", fixture(MULTI_X2Y));
    multi.algebra_orders = vec![1, 2, 3];

    let mut items = vec![ex1, a, ap, b];
    items.extend(small);
    items.push(multi);

    let empty1 = MultiArrangement::parse("ell 1\n").expect("empty arrangement");
    let pairs = vec![
        ProductPair {
            id: "bool1*bool1".into(),
            first: fixture(BOOL1),
            second: fixture(BOOL1),
        },
        ProductPair {
            id: "bool2*bool1".into(),
            first: fixture(BOOL2),
            second: fixture(BOOL1),
        },
        ProductPair {
            id: "ex1*bool1".into(),
            first: fixture(EX1),
            second: fixture(BOOL1),
        },
        ProductPair {
            id: "empty1*bool2".into(),
            first: empty1,
            second: fixture(BOOL2),
        },
        ProductPair {
            id: "multi_x2y*bool1".into(),
            first: fixture(MULTI_X2Y),
            second: fixture(BOOL1),
        },
    ];
    Corpus {
        name: "paper".into(),
        items,
        pairs,
    }
}

/// `count` random essential simple arrangements with `l` in {2, 3} and at
/// most 7 hyperplanes, then `count / 5` small random multiarrangements in
/// the plane with `|m| <= 12`. Coefficients lie in `[-2, 2]`.
pub fn random_corpus(seed: u64, count: usize) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut items = Vec::new();
    for k in 0..count {
        let ell = if k % 4 == 0 { 2 } else { 3 };
        let n = rng.gen_range(ell..=if ell == 2 { 5 } else { 7 });
        let a = random_essential(ell, n, 2, &mut rng);
        items.push(CorpusItem::new(&format!("rand{k:03}"), MultiArrangement::simple(a)));
    }
    for k in 0..count / 5 {
        let n = rng.gen_range(2..=4);
        let a = random_essential(2, n, 2, &mut rng);
        let mut m: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        while m.iter().sum::<u32>() > 12 {
            let i = m.iter().position(|&v| v > 1).unwrap();
            m[i] -= 1;
        }
        let ma = MultiArrangement {
            arrangement: a,
            multiplicity: Multiplicity(m),
        };
        items.push(CorpusItem::new(&format!("multi{k:03}"), ma));
    }
    Corpus {
        name: "random".into(),
        items,
        pairs: Vec::new(),
    }
}

/// One item per arrangement file, named by file stem.
pub fn file_corpus<P: AsRef<Path>>(paths: &[P]) -> Result<Corpus> {
    let mut items = Vec::new();
    for p in paths {
        let p = p.as_ref();
        let text = std::fs::read_to_string(p)?;
        let ma = MultiArrangement::parse(&text)?;
        let id = p
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "input".into());
        items.push(CorpusItem::new(&id, ma));
    }
    Ok(Corpus {
        name: "file".into(),
        items,
        pairs: Vec::new(),
    })
}

fn betti_entries(table: &crate::groebner::BettiTable) -> Vec<((usize, i64), u64)> {
    table.entries.iter().map(|(&k, &v)| (k, v)).collect()
}

fn coeff_list(p: &LaurentPolynomial) -> String {
    match p.integer_coeffs() {
        Some(v) => format!("{v:?}"),
        None => p.render_with("x"),
    }
}

fn compare(name: &str, subject: Subject, claimed: String, computed: String) -> CheckReport {
    let verdict = if claimed == computed { Verdict::Pass } else { Verdict::Fail };
    let mut r = CheckReport::new(name, subject, claimed, computed, verdict);
    if verdict == Verdict::Fail {
        r = r.witness("mismatch", true);
    }
    r
}

/// Comparisons against the known values of a fixture.
pub(super) fn check_reference(engine: &Engine, item: &CorpusItem) -> Vec<CheckReport> {
    const NAME: &str = "reference_values";
    let r = &item.reference;
    let ma = &item.ma;
    let subject = |what: &str| Subject::new(&item.id, ma).with("value", what);
    let mut out = Vec::new();
    let mut push = |what: &str, f: &dyn Fn() -> Result<(String, String)>| {
        out.push(match f() {
            Ok((claimed, computed)) => compare(NAME, subject(what), claimed, computed),
            Err(e) => CheckReport::from_error(NAME, subject(what), &e),
        });
    };
    if let Some(psi) = &r.psi {
        push("psi", &|| Ok((psi.clone(), st_bipoly(engine, ma)?.psi.render())));
    }
    if let Some(st) = &r.st {
        push("st", &|| Ok((format!("{st:?}"), coeff_list(&st_bipoly(engine, ma)?.st()))));
    }
    if let Some(chi) = &r.chi {
        push("chi", &|| {
            Ok((format!("{chi:?}"), coeff_list(&st_bipoly(engine, ma)?.chi())))
        });
    }
    if let Some(exps) = &r.exponents {
        push("exponents", &|| {
            let f = engine.freeness(ma)?;
            let computed = if f.free && f.saito_constant.is_some() {
                format!("{:?}", f.degrees)
            } else {
                format!("not free (pd {})", f.pd)
            };
            Ok((format!("{exps:?}"), computed))
        });
    }
    if let Some(tame) = r.tame {
        push("tame", &|| Ok((tame.to_string(), engine.tameness(ma)?.tame.to_string())));
    }
    for &(p, pd) in &r.pd_omega {
        push(&format!("pd_omega{p}"), &|| {
            Ok((pd.to_string(), engine.omega_module(ma, p)?.pd.to_string()))
        });
    }
    for (p, entries) in &r.betti_d {
        push(&format!("betti_d{p}"), &|| {
            Ok((
                format!("{entries:?}"),
                format!("{:?}", betti_entries(&engine.derivation_module(ma, *p)?.betti)),
            ))
        });
    }
    for (p, entries) in &r.betti_omega {
        push(&format!("betti_omega{p}"), &|| {
            Ok((
                format!("{entries:?}"),
                format!("{:?}", betti_entries(&engine.omega_module(ma, *p)?.betti)),
            ))
        });
    }
    out
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Orders `d` for the polynomial-side checks.
    pub orders: Vec<u32>,
    pub eta_attempts: u32,
    pub parallel: bool,
    /// Restrict to these checks; `product_rule` names the pair checks.
    pub checks: Option<Vec<String>>,
    pub config: GbConfig,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            orders: vec![1, 2, 3],
            eta_attempts: 16,
            parallel: true,
            checks: None,
            config: GbConfig::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub not_applicable: usize,
    pub beyond_theorem: usize,
    pub hard_failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub items: Vec<String>,
    pub tally: Tally,
    pub reports: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.tally.fail == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        for r in &self.reports {
            s.push_str(&r.text_line());
            s.push('\n');
        }
        let t = &self.tally;
        s.push_str(&format!(
            "suite {} seed {}: {} items, {} pass, {} fail ({} hard), {} not applicable, {} beyond theorem\n",
            self.suite,
            self.seed,
            self.items.len(),
            t.pass,
            t.fail,
            t.hard_failures,
            t.not_applicable,
            t.beyond_theorem
        ));
        s
    }

    /// Reports grouped by check name, for summaries.
    pub fn by_check(&self) -> BTreeMap<&str, Vec<&CheckReport>> {
        let mut m: BTreeMap<&str, Vec<&CheckReport>> = BTreeMap::new();
        for r in &self.reports {
            m.entry(r.check.as_str()).or_default().push(r);
        }
        m
    }
}

/// Runs every registered check on every item, then the product pairs.
/// Items may be processed concurrently; report order follows the corpus.
pub fn run_suite(corpus: &Corpus, options: &SuiteOptions) -> Result<SuiteReport> {
    let registry = match &options.checks {
        None => Registry::standard(),
        Some(names) => {
            let per_item: Vec<String> = names.iter().filter(|n| *n != "product_rule").cloned().collect();
            Registry::standard().select(&per_item)?
        }
    };
    let run_pairs = options
        .checks
        .as_ref()
        .is_none_or(|n| n.iter().any(|c| c == "product_rule"));
    if options.orders.iter().any(|&d| d == 0) {
        return Err(Error::Input("orders must be at least 1".into()));
    }
    let ctx = Context {
        engine: Engine::new(options.config.clone()),
        seed: options.seed,
        orders: options.orders.clone(),
        eta_attempts: options.eta_attempts,
    };
    let per_item: Vec<Vec<CheckReport>> = if options.parallel {
        corpus.items.par_iter().map(|it| registry.run_item(&ctx, it)).collect()
    } else {
        corpus.items.iter().map(|it| registry.run_item(&ctx, it)).collect()
    };
    let mut reports: Vec<CheckReport> = per_item.into_iter().flatten().collect();
    if run_pairs {
        for pair in &corpus.pairs {
            reports.push(check_product_rule(&ctx.engine, &pair.id, &pair.first, &pair.second));
        }
    }
    let mut tally = Tally::default();
    for r in &reports {
        match r.verdict {
            Verdict::Pass => tally.pass += 1,
            Verdict::Fail => tally.fail += 1,
            Verdict::NotApplicable => tally.not_applicable += 1,
            Verdict::BeyondTheorem => tally.beyond_theorem += 1,
        }
        if r.hard {
            tally.hard_failures += 1;
        }
    }
    Ok(SuiteReport {
        suite: corpus.name.clone(),
        seed: options.seed,
        items: corpus.items.iter().map(|i| i.id.clone()).collect(),
        tally,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn random_corpus_is_deterministic() {
        let a = random_corpus(7, 12);
        let b = random_corpus(7, 12);
        let ra: Vec<String> = a.items.iter().map(|i| i.ma.render()).collect();
        let rb: Vec<String> = b.items.iter().map(|i| i.ma.render()).collect();
        assert_eq!(ra, rb);
        assert_eq!(a.items.len(), 12 + 2);
        for it in &a.items {
            assert!(it.ma.is_essential());
            assert!(it.ma.ell() <= 3 && it.ma.arrangement.len() <= 7 && it.ma.total() <= 12);
        }
    }

    #[test]
    fn empty_corpus() {
        let r = run_suite(&Corpus::default(), &SuiteOptions::default()).unwrap();
        assert!(r.reports.is_empty() && r.all_passed());
        assert_eq!(r.to_json()["tally"]["pass"], json!(0));
    }

    #[test]
    fn small_items_pass() {
        let mut c = paper_corpus();
        c.items.retain(|i| ["bool2", "generic_3_4", "multi_x2y"].contains(&i.id.as_str()));
        c.pairs.retain(|p| p.id == "bool1*bool1" || p.id == "empty1*bool2");
        let opts = SuiteOptions {
            parallel: false,
            ..SuiteOptions::default()
        };
        let r = run_suite(&c, &opts).unwrap();
        let failing: Vec<String> = r
            .reports
            .iter()
            .filter(|r| r.verdict == Verdict::Fail)
            .map(|r| r.text_line())
            .collect();
        assert!(failing.is_empty(), "{failing:#?}");
        assert!(r.tally.pass > 10);
    }
}
