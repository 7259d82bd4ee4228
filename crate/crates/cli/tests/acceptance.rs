//! Acceptance criteria. Each test writes one `[criterion N] PASS|FAIL` line
//! straight to stderr (bypassing capture) and then asserts.

use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use stabcover::classprod::{find_near_cover_pair, verify_three_class};
use stabcover::constructions::{
    affine_certificate, build_affine, build_twisted_wreath, diagonal_certificate, fp_lemma_check, index_lemma_check,
    lift_certificate, m0_lemma_check, named_group, twisted_certificate, DiagonalGroup, GroupSpec, TwistedSpec,
};
use stabcover::covering::{
    gamma_exact, lower_bound_counting, oracle_gamma_dfs, verify_certificate, CoveringProblem, GammaStatus,
    SearchConfig, VerifyMode,
};
use stabcover_cli::catalog::{load_entry, read_catalog, LoadedEntry};
use stabcover_cli::certify::certify_point;
use stabcover_cli::scan::scan;

fn catalog_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../catalog")
}

fn report(n: u32, what: &str, ok: bool, detail: String) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "[criterion {n}] {verdict} {what}: {detail}");
    assert!(ok, "criterion {n} failed: {detail}");
}

fn within(start: Instant, secs: u64) -> (bool, Duration) {
    let t = start.elapsed();
    (t < Duration::from_secs(secs), t)
}

fn small_catalog_pairs() -> Vec<LoadedEntry> {
    let dir = catalog_dir();
    read_catalog(&dir)
        .unwrap()
        .iter()
        .filter(|e| e.search && e.order <= 200)
        .map(|e| load_entry(&dir, e).unwrap())
        .collect()
}

#[test]
fn criterion_01_diagonal_upper_bound() {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut ok = true;
    for (k, len, size) in [(2usize, 4usize, 3600u128), (3, 7, 216000)] {
        let d = DiagonalGroup::named("A5", k).unwrap();
        let (cert, _) = diagonal_certificate(&d).unwrap();
        let r = verify_certificate(&cert, VerifyMode::Exhaustive).unwrap();
        ok &= cert.len() == len && r.passed && r.product_size == Some(size) && d.b.order() == size;
        details.push(format!("k={k}: {} conjugators, popcount {:?}", cert.len(), r.product_size));
    }
    let (fast, t) = within(start, 60);
    details.push(format!("{t:.1?}"));
    report(1, "diagonal 3k-2 certificates", ok && fast, details.join(", "));
}

#[test]
fn criterion_02_diagonal_lower_bound() {
    let d = DiagonalGroup::named("A5", 2).unwrap();
    let p = CoveringProblem::new(d.b.clone(), d.delta.clone()).unwrap();
    let r = gamma_exact(&p, &SearchConfig::default()).unwrap();
    let lower = lower_bound_counting(3600, 60);
    let ok = r.is_exact() && r.value.is_some_and(|v| v >= 2) && lower == Some(2) && r.value >= lower;
    report(2, "diagonal lower bound", ok, format!("gamma = {:?}, counting bound = {lower:?}", r.value));
}

#[test]
fn criterion_03_affine_bound() {
    let start = Instant::now();
    let cases: [(u64, usize, Vec<Vec<i64>>, usize); 5] = [
        (3, 1, vec![vec![2]], 3),
        (5, 1, vec![vec![2]], 4),
        (7, 1, vec![vec![3]], 4),
        (13, 1, vec![vec![2]], 5),
        (3, 2, vec![vec![2, 0, 0, 1], vec![2, 1, 2, 0]], 5),
    ];
    let mut ok = true;
    let mut details = Vec::new();
    for (p, l, h, max) in cases {
        let a = build_affine(p, l, &h, "affine").unwrap();
        let (cert, _) = affine_certificate(&a).unwrap();
        let r = verify_certificate(&cert, VerifyMode::Exhaustive).unwrap();
        ok &= r.passed && cert.len() <= max && r.covers_target;
        details.push(format!("p={p},l={l}: {} ≤ {max} ({})", cert.len(), if r.passed { "verified" } else { "not verified" }));
    }
    let (fast, t) = within(start, 30);
    details.push(format!("{t:.1?}"));
    report(3, "affine 1 + l⌈log₂p⌉ certificates", ok && fast, details.join(", "));
}

#[test]
fn criterion_04_class_products() {
    let start = Instant::now();
    let mut ok = true;
    let mut details = Vec::new();
    for name in ["A5", "A6", "PSL(2,7)", "PSL(2,11)"] {
        let t = named_group(name).unwrap();
        let w = find_near_cover_pair(&t).unwrap();
        let passed = match &w {
            Some(w) => {
                let v = verify_three_class(&t, w).unwrap();
                v.passed && v.near_cover
            }
            None => false,
        };
        ok &= passed;
        details.push(format!("{name}: {}", if passed { "verified" } else { "missing" }));
    }
    let (fast, t) = within(start, 60);
    details.push(format!("{t:.1?}"));
    report(4, "three-class factorization", ok && fast, details.join(", "));
}

#[test]
fn criterion_05_fp_lemma() {
    let start = Instant::now();
    let r = fp_lemma_check(1_000_000);
    let (fast, t) = within(start, 10);
    let ok = r.passed && r.equality_at == vec![5] && r.violations.is_empty() && r.primes_checked == 78498;
    report(
        5,
        "5^⌈log₂p⌉ ≤ p³ for primes ≤ 10⁶",
        ok && fast,
        format!("{} primes, equality at {:?}, {t:.1?}", r.primes_checked, r.equality_at),
    );
}

fn twisted_spec(file: &str) -> TwistedSpec {
    let text = std::fs::read_to_string(catalog_dir().join("recipes").join(file)).unwrap();
    match serde_json::from_str::<GroupSpec>(&text).unwrap() {
        GroupSpec::TwistedWreath(t) => t,
        other => panic!("{other:?}"),
    }
}

#[test]
fn criterion_06_twisted_wreath() {
    let start = Instant::now();
    let tw1 = build_twisted_wreath(&twisted_spec("twisted_a5_k1.json"), "twisted_wreath").unwrap();
    let (c1, _) = twisted_certificate(&tw1).unwrap();
    let r1 = verify_certificate(&c1, VerifyMode::Exhaustive).unwrap();
    let tw2 = build_twisted_wreath(&twisted_spec("twisted_s5_k2.json"), "twisted_wreath").unwrap();
    let (c2, trace) = twisted_certificate(&tw2).unwrap();
    let r2 = verify_certificate(&c2, VerifyMode::Witnessed).unwrap();
    let (fast, t) = within(start, 120);
    let ok = c1.len() == 5
        && tw1.group.order() == 3600
        && r1.passed
        && c2.len() == 10
        && tw2.group.order() == 432000
        && r2.passed
        && r2.witnesses_checked >= 119;
    report(
        6,
        "twisted wreath 5k certificates",
        ok && fast,
        format!(
            "k=1: {} conjugators, socle covered {}; k=2: {} conjugators, {} witnesses ({} in trace), passed {}; {t:.1?}",
            c1.len(),
            r1.covers_target,
            c2.len(),
            r2.witnesses_checked,
            trace.witnesses,
            r2.passed
        ),
    );
}

#[test]
fn criterion_07_product_action_lift() {
    let base = certify_point(&GroupSpec::Named { name: "A5".into() }, 1, &SearchConfig::default()).unwrap();
    let base_ok = verify_certificate(&base, VerifyMode::Exhaustive).unwrap().passed;
    let lifted = lift_certificate(&base, 2).unwrap();
    let r = verify_certificate(&lifted, VerifyMode::Exhaustive).unwrap();
    let ok = base_ok && lifted.len() == base.len() && r.passed && r.group_order == 3600;
    report(
        7,
        "product-action lift",
        ok,
        format!("base length {}, lifted length {}, |B| = {}, verified {}", base.len(), lifted.len(), r.group_order, r.passed),
    );
}

#[test]
fn criterion_08_oracle_equivalence() {
    let start = Instant::now();
    let mut ok = true;
    let mut checked = Vec::new();
    for e in small_catalog_pairs() {
        let p = e.problem().unwrap();
        let r = gamma_exact(&p, &SearchConfig::default()).unwrap();
        if r.status == GammaStatus::Infinite {
            continue;
        }
        let oracle = oracle_gamma_dfs(&p, 12).unwrap();
        ok &= r.is_exact() && r.value == Some(oracle);
        checked.push(format!("{}={}", e.entry.name, oracle));
    }
    let (fast, t) = within(start, 120);
    ok &= checked.len() >= 8;
    report(8, "search matches oracle", ok && fast, format!("{} pairs [{}], {t:.1?}", checked.len(), checked.join(" ")));
}

#[test]
fn criterion_09_pruning_soundness() {
    let mut ok = true;
    let mut n = 0;
    for e in small_catalog_pairs() {
        let p = e.problem().unwrap();
        let a = gamma_exact(&p, &SearchConfig::default()).unwrap();
        let b = gamma_exact(&p, &SearchConfig::default().without_pruning()).unwrap();
        ok &= a.status == b.status && a.value == b.value;
        n += 1;
    }
    report(9, "pruning does not change gamma", ok && n >= 8, format!("{n} pairs agree"));
}

#[test]
fn criterion_10_index_lemma() {
    let dir = catalog_dir();
    let mut applicable = 0;
    let mut ok = true;
    for e in read_catalog(&dir).unwrap() {
        let l = load_entry(&dir, &e).unwrap();
        let r = index_lemma_check(l.built.group.order(), l.built.stabilizer.order());
        if r.applicable {
            applicable += 1;
            ok &= r.passed;
        }
    }
    report(10, "log|G|/log|H| ≤ log|G:H|", ok && applicable > 0, format!("{applicable} qualifying pairs"));
}

#[test]
fn criterion_11_maximal_subgroups() {
    let start = Instant::now();
    let a5 = named_group("A5").unwrap();
    let cases = [("A5", a5.clone(), a5.clone()), ("S5", named_group("S5").unwrap(), a5), {
        let g = named_group("PSL(2,7)").unwrap();
        ("PSL(2,7)", g.clone(), g)
    }];
    let mut ok = true;
    let mut details = Vec::new();
    for (name, g, t) in cases {
        let r = m0_lemma_check(&g, &t).unwrap();
        let min = r.maximal.iter().map(|m| m.intersection_order).min().unwrap_or(0);
        ok &= r.passed;
        details.push(format!("{name}: {} maximal, min |M∩T| = {min}", r.maximal.len()));
    }
    let (fast, t) = within(start, 300);
    details.push(format!("{t:.1?}"));
    report(11, "|M ∩ T| ≥ 6", ok && fast, details.join(", "));
}

#[test]
fn criterion_12_scan_ratios() {
    let r = scan(&catalog_dir(), &SearchConfig::default()).unwrap();
    let s = &r.summary;
    let ok = s.failures.is_empty() && s.inconsistent_rows.is_empty() && s.exact_ratios_at_most_3 && s.exact_rows > 0;
    report(
        12,
        "γ/log₂n ≤ 3 on every exact catalog row",
        ok,
        format!(
            "{} rows, {} exact, max ratio {:?} ({:?}), failures {:?}",
            r.rows.len(),
            s.exact_rows,
            s.max_exact_ratio,
            s.max_exact_ratio_entry,
            s.failures
        ),
    );
}
