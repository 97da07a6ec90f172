//! The acceptance criteria, run in order with one PASS or FAIL line each.
//! Exits non-zero if any criterion fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use coercion_core::coercion::CoercionS;
use coercion_core::translate::Options;
use coercion_harness::invariants::compose_closure;
use coercion_harness::props::{admin_elimination, context_decomposition, substitution_commutes};
use coercion_harness::{run_corpus, space_run, Check, CorpusConfig, Dialect, Fuel, Record, Summary};
use coercion_surface::{alpha_eq_s, alpha_eq_x, parse_coercion_s, parse_term_s, parse_term_x};

type Verdict = Result<String, String>;

type Criterion = (&'static str, fn() -> Verdict);

fn forge(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_coercion-forge")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8 output"))
}

fn example(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("examples");
    p.push(name);
    p.display().to_string()
}

/// A trace line: the rule (`start` for the initial state) and the term text.
fn trace(stdout: &str) -> Vec<(String, String)> {
    stdout
        .lines()
        .filter_map(|l| {
            if let Some(t) = l.strip_prefix("start: ") {
                return Some(("start".to_string(), t.to_string()));
            }
            let (head, term) = l.strip_prefix("step ")?.split_once(": ")?;
            let rule = head.split_whitespace().nth(2)?;
            Some((rule.to_string(), term.to_string()))
        })
        .collect()
}

/// Finds `expected` in order within `lines`. A rule of `None` matches any.
fn subsequence(
    lines: &[(String, String)],
    expected: &[(Option<&str>, &str)],
    same: impl Fn(&str, &str) -> bool,
) -> Result<(), String> {
    let mut it = lines.iter();
    for (rule, term) in expected {
        let found = it.any(|(r, t)| rule.is_none_or(|x| x == r) && same(t, term));
        if !found {
            return Err(format!("missing {} `{term}`", rule.unwrap_or("state")));
        }
    }
    Ok(())
}

fn same_s(a: &str, b: &str) -> bool {
    matches!((parse_term_s(a), parse_term_s(b)), (Ok(x), Ok(y)) if alpha_eq_s(&x, &y))
}

fn same_x(a: &str, b: &str) -> bool {
    matches!((parse_term_x(a), parse_term_x(b)), (Ok(x), Ok(y)) if alpha_eq_x(&x, &y))
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let spent = start.elapsed();
    if spent > limit {
        return Err(format!("took {spent:.2?}, limit {limit:?}"));
    }
    Ok(())
}

fn fig1() -> Verdict {
    let start = Instant::now();
    let (code, out) = forge(&["bench", "evenodd", "4", "--dialect", "lams"]);
    if code != 0 {
        return Err(format!("λS bench exited {code}"));
    }
    let lams = [
        (Some("start"), "odd 4"),
        (None, "(even 3)<Bool?^p>"),
        (None, "(odd (3 - 1))<Bool!><Bool?^p>"),
        (Some("R-MergeC"), "(odd (3 - 1))<id{Bool}>"),
        (Some("R-Op"), "(odd 2)<id{Bool}>"),
        (None, "(even (2 - 1))<Bool?^p><id{Bool}>"),
        (Some("R-MergeC"), "(even (2 - 1))<Bool?^p>"),
        (Some("R-Op"), "(even 1)<Bool?^p>"),
    ];
    subsequence(&trace(&out), &lams, same_s).map_err(|e| format!("λS: {e}"))?;
    let (code, out) = forge(&["bench", "evenodd", "4", "--dialect", "lamsx"]);
    if code != 0 {
        return Err(format!("λSx bench exited {code}"));
    }
    let lamsx = [
        (Some("start"), "odd (4, id{Bool})"),
        (None, "even (4 - 1, Bool?^p ;; id{Bool})"),
        (Some("R-Cmp"), "even (4 - 1, Bool?^p)"),
        (Some("R-Op"), "even (3, Bool?^p)"),
        (None, "odd (3 - 1, Bool! ;; Bool?^p)"),
        (Some("R-Cmp"), "odd (3 - 1, id{Bool})"),
        (Some("R-Op"), "odd (2, id{Bool})"),
    ];
    subsequence(&trace(&out), &lamsx, same_x).map_err(|e| format!("λSx: {e}"))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("{:.2?}", start.elapsed()))
}

fn examples() -> Verdict {
    let start = Instant::now();
    let (code, out) = forge(&["eval", &example("example1.lams"), "--trace"]);
    let s = trace(&out);
    if code != 0 || out.lines().last() != Some("5<<Int!>>") {
        return Err(format!("example 1 exited {code} with {:?}", out.lines().last()));
    }
    let u = r"\x:Dyn. (x<Int?^p> + 2)<Int!>";
    let steps_s = [
        (Some("R-Wrap"), format!("({u}) (3<Int!>)<Int?^p><Int!>")),
        (Some("R-MergeC"), format!("({u}) (3<Int!>)<Int?^p;id{{Int}};Int!>")),
        (Some("R-Beta"), "(3<<Int!>><Int?^p> + 2)<Int!><Int?^p;id{Int};Int!>".to_string()),
        (Some("R-MergeC"), "(3<<Int!>><Int?^p> + 2)<Int!>".to_string()),
        (Some("R-Op"), "5<Int!>".to_string()),
    ];
    let steps_s: Vec<_> = steps_s.iter().map(|(r, t)| (*r, t.as_str())).collect();
    subsequence(&s, &steps_s, same_s).map_err(|e| format!("example 1: {e}"))?;

    let (code, out) = forge(&["eval", &example("example2.lamsx"), "--trace"]);
    if code != 0 || out.lines().last() != Some("5<<Int!>>") {
        return Err(format!("example 2 exited {code} with {:?}", out.lines().last()));
    }
    let ux = r"\ (x:Dyn, k:Dyn). let k1 = Int! ;; k in (x<Int?^p> + 2)<k1>";
    let steps_x = [
        (Some("R-Crc"), format!("({ux})<<Int! => Int?^p>> (3, Int!)")),
        (Some("R-Wrap"), format!("let k2 = Int?^p ;; Int! in ({ux}) (3<Int!>, k2)")),
        (Some("R-Cmp"), format!("let k2 = Int?^p;id{{Int}};Int! in ({ux}) (3<Int!>, k2)")),
        (Some("R-Let"), format!("({ux}) (3<Int!>, Int?^p;id{{Int}};Int!)")),
        (Some("R-Crc"), format!("({ux}) (3<<Int!>>, Int?^p;id{{Int}};Int!)")),
        (Some("R-Beta"), "let k1 = Int! ;; (Int?^p;id{Int};Int!) in (3<<Int!>><Int?^p> + 2)<k1>".to_string()),
        (Some("R-Cmp"), "let k1 = Int! in (3<<Int!>><Int?^p> + 2)<k1>".to_string()),
        (Some("R-Let"), "(3<<Int!>><Int?^p> + 2)<Int!>".to_string()),
        (Some("R-Op"), "5<Int!>".to_string()),
    ];
    let steps_x: Vec<_> = steps_x.iter().map(|(r, t)| (*r, t.as_str())).collect();
    subsequence(&trace(&out), &steps_x, same_x).map_err(|e| format!("example 2: {e}"))?;

    let expected = format!("({ux})<Int! => Int?^p> (3, Int!)");
    let (code, out) = forge(&["translate", &example("example1.lams")]);
    if code != 0 || !same_x(out.trim(), &expected) {
        return Err(format!("translation of example 1 is `{}`", out.trim()));
    }
    let (_, out) = forge(&["translate", "-e", u]);
    if !same_x(out.trim(), ux) {
        return Err(format!("translation of U is `{}`", out.trim()));
    }
    let (_, out) = forge(&["translate", "-e", &format!("({u})<Int! -> Int?^p> 3")]);
    if !same_x(out.trim(), &format!("({ux})<Int! => Int?^p> (3, id{{Int}})")) {
        return Err(format!("translation of the inner application is `{}`", out.trim()));
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("{:.2?}", start.elapsed()))
}

fn crc(s: &str) -> CoercionS {
    parse_coercion_s(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn composition() -> Verdict {
    // Left, right, and the composition printed without sugar.
    let table = [
        // The five worked examples.
        ("id{Bool};Bool!", "Bool?^p;id{Bool}", "id{Bool}"),
        ("id{Dyn -> Dyn};(Dyn -> Dyn)!", "Int?^p;id{Int}", "bot{(Dyn -> Dyn), p, Int}"),
        ("(Int?^p;id{Int}) -> (id{Bool};Bool!)", "(id{Int};Int!) -> id{Dyn}", "id{Int} -> id{Bool};Bool!"),
        ("Int?^p;id{Int}", "id{Int};Int!", "Int?^p;id{Int};Int!"),
        ("id{Int};Int!", "Int?^p;id{Int};Int!", "id{Int};Int!"),
        // One case per composition rule.
        ("id{Dyn}", "Int?^p;id{Int}", "Int?^p;id{Int}"),
        ("Int?^p;id{Int}", "bot{Int, q, Bool}", "Int?^p;bot{Int, q, Bool}"),
        ("id{Int};Int!", "id{Dyn}", "id{Int};Int!"),
        ("id{Int};Int!", "Int?^p;id{Int}", "id{Int}"),
        ("bot{Int, p, Bool}", "id{Bool};Bool!", "bot{Int, p, Bool}"),
        ("id{Int};Int!", "Bool?^p;id{Bool}", "bot{Int, p, Bool}"),
        ("id{Int}", "bot{Int, p, Bool}", "bot{Int, p, Bool}"),
        ("id{Int}", "id{Int};Int!", "id{Int};Int!"),
        ("id{Int}", "id{Int}", "id{Int}"),
        ("(Int?^p;id{Int}) -> (id{Int};Int!)", "id{Dyn -> Dyn}", "Int?^p;id{Int} -> id{Int};Int!"),
        ("(Int?^q;id{Int}) -> (id{Int};Int!)", "(id{Int};Int!) -> (Int?^p;id{Int})", "id{Int -> Int}"),
        (
            "(id{Int};Int!) -> (Int?^p;id{Int})",
            "(Int?^q;id{Int}) -> (id{Int};Int!)",
            "(Int?^q;id{Int};Int!) -> (Int?^p;id{Int};Int!)",
        ),
    ];
    for (l, r, want) in table {
        let got = crc(l).compose(&crc(r)).map_err(|e| format!("{l} ⨟ {r}: {e}"))?;
        if got != crc(want) {
            return Err(format!("{l} ⨟ {r} = {}, expected {want}", got.render(false)));
        }
    }
    Ok(format!("{} cases", table.len()))
}

fn space() -> Verdict {
    let start = Instant::now();
    for dialect in [Dialect::Lams, Dialect::Lamsx] {
        let small = space_run(dialect, 10, |_| {})?;
        let mut over = None;
        for n in [1_000, 100_000] {
            let r = space_run(dialect, n, |s| {
                if dialect == Dialect::Lams && s.term > small.max_term_size && over.is_none() {
                    over = Some(s.term);
                }
            })?;
            if (r.max_coercion_size, r.max_term_size) != (small.max_coercion_size, small.max_term_size) {
                return Err(format!(
                    "{dialect} n={n}: sizes ({}, {}) differ from n=10 ({}, {})",
                    r.max_coercion_size, r.max_term_size, small.max_coercion_size, small.max_term_size
                ));
            }
        }
        if let Some(t) = over {
            return Err(format!("λS term size {t} exceeds the n=10 maximum {}", small.max_term_size));
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{:.2?}", start.elapsed()))
}

fn corpus(n: u64, check: Check) -> (Vec<Record>, Summary) {
    let cfg = CorpusConfig { depth: 8, fuel: Fuel { lam_s: 100_000, lam_sx: 1_000_000 }, ..CorpusConfig::default() };
    let records = run_corpus(0..n, check, &cfg);
    let summary = Summary::of(&records);
    (records, summary)
}

fn first_failure(records: &[Record]) -> String {
    records.iter().find(|r| r.verdict.is_failure()).map(|r| format!("seed {}: {:?}", r.seed, r.verdict)).unwrap_or_default()
}

fn differential() -> Verdict {
    let (records, s) = corpus(1000, Check::Differential);
    if s.disagree + s.violations > 0 {
        return Err(format!("{s}; {}", first_failure(&records)));
    }
    if s.blame < 50 || s.fuel < 5 {
        return Err(format!("{s}; need at least 50 blame and 5 out of fuel"));
    }
    Ok(s.to_string())
}

fn simulation() -> Verdict {
    assert!(!CorpusConfig::default().opts.opt_trop);
    let (records, s) = corpus(500, Check::Simulation);
    if s.violations + s.disagree > 0 {
        return Err(format!("{s}; {}", first_failure(&records)));
    }
    Ok(format!("{} programs simulated", s.total))
}

fn metatheory() -> Verdict {
    let (records, s) = corpus(1000, Check::Invariants);
    if s.violations + s.disagree > 0 {
        return Err(format!("{s}; {}", first_failure(&records)));
    }
    for seed in 0..4 {
        let found = compose_closure(seed, 5_000)
            .or_else(|| substitution_commutes(seed, 300))
            .or_else(|| admin_elimination(seed, 300))
            .or_else(|| context_decomposition(seed, 300));
        if let Some(e) = found {
            return Err(format!("seed {seed}: {e}"));
        }
    }
    Ok(format!("{} programs, 0 violations", s.total))
}

fn typed_translation() -> Verdict {
    for opt_trop in [false, true] {
        let cfg = CorpusConfig { opts: Options { opt_trop }, ..CorpusConfig::default() };
        let records = run_corpus(0..1000, Check::TypedTranslation, &cfg);
        let s = Summary::of(&records);
        if s.violations > 0 {
            return Err(format!("{s}; {}", first_failure(&records)));
        }
    }
    Ok("1000 programs, both translation modes".to_string())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("even/odd golden traces", fig1),
        ("worked example traces and translation", examples),
        ("composition table", composition),
        ("space efficiency", space),
        ("differential semantics", differential),
        ("simulation", simulation),
        ("metatheory invariants", metatheory),
        ("typed translation", typed_translation),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
