//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the table is always printed; exits nonzero if any fails.

use std::process::{Command, ExitCode, Stdio};
use std::time::{Duration, Instant};

use dihedral_isotopy::verify::{self, CheckResult, VerifyConfig};

const BIN: &str = env!("CARGO_BIN_EXE_dihedral-isotopy");

struct Criterion {
    id: u32,
    title: &'static str,
    checks: Vec<CheckResult>,
}

impl Criterion {
    fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    fn elapsed(&self) -> Duration {
        self.checks.iter().map(|c| c.elapsed).sum()
    }
}

struct Run {
    stdout: String,
    code: Option<i32>,
    elapsed: Duration,
    peak_kib: Option<u64>,
}

/// Runs the binary, sampling its peak resident set from /proc while it runs.
fn run_bin(args: &[&str]) -> Run {
    let start = Instant::now();
    let mut child = Command::new(BIN)
        .args(args)
        .env_remove("DIHEDRAL_ISOTOPY_THREADS")
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .expect("binary runs");
    let status_path = format!("/proc/{}/status", child.id());
    let mut peak_kib = None;
    let out = std::thread::scope(|s| {
        let reader = s.spawn(|| {
            let mut buf = String::new();
            std::io::Read::read_to_string(child.stdout.as_mut().expect("piped"), &mut buf).expect("utf-8 output");
            buf
        });
        while !reader.is_finished() {
            if let Some(kib) = std::fs::read_to_string(&status_path).ok().and_then(|s| vm_hwm(&s)) {
                peak_kib = Some(peak_kib.map_or(kib, |p: u64| p.max(kib)));
            }
            std::thread::sleep(Duration::from_millis(5));
        }
        reader.join().expect("reader thread")
    });
    let code = child.wait().expect("child exits").code();
    Run { stdout: out, code, elapsed: start.elapsed(), peak_kib }
}

fn vm_hwm(status: &str) -> Option<u64> {
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn cli_check(name: &str, args: &[&str], expect_first_line: &str, max: Duration, max_kib: Option<u64>) -> CheckResult {
    let run = run_bin(args);
    let mut label = format!("{name} (cli: {})", args.join(" "));
    if let (Some(_), Some(kib)) = (max_kib, run.peak_kib) {
        label.push_str(&format!(", peak RSS {} MiB", kib / 1024));
    }
    let mut check = verify::timed(label, || {
        let first = run.stdout.lines().next().unwrap_or("");
        if run.code != Some(0) {
            return Ok(Some(format!("exit code {:?}", run.code)));
        }
        if first != expect_first_line {
            return Ok(Some(format!("printed {first:?}, expected {expect_first_line:?}")));
        }
        if run.elapsed > max {
            return Ok(Some(format!("took {:?}, limit {max:?}", run.elapsed)));
        }
        if let (Some(limit), Some(peak)) = (max_kib, run.peak_kib) {
            if peak > limit {
                return Ok(Some(format!("peak RSS {peak} KiB, limit {limit} KiB")));
            }
        }
        Ok(None)
    });
    check.elapsed = run.elapsed;
    check
}

fn within(mut c: CheckResult, max: Duration) -> CheckResult {
    if c.passed() && c.elapsed > max {
        c.status = verify::Status::Fail;
        c.counterexample = Some(format!("took {:?}, limit {max:?}", c.elapsed));
    }
    c
}

fn main() -> ExitCode {
    let config = VerifyConfig::default();
    let second = Duration::from_secs(1);
    let criteria = vec![
        Criterion {
            id: 1,
            title: "n=9: classify and count both report 11",
            checks: vec![
                cli_check("classify", &["classify", "--n", "9"], "classes: 11", second, None),
                cli_check("count", &["count", "--n", "9"], "11", second, None),
                verify::check_known_count(9, 11, &config),
            ],
        },
        Criterion {
            id: 2,
            title: "n=25: classify and count both report 33781",
            checks: vec![
                cli_check(
                    "classify",
                    &["classify", "--n", "25"],
                    "classes: 33781",
                    Duration::from_secs(300),
                    Some(512 * 1024),
                ),
                cli_check("count", &["count", "--n", "25"], "33781", Duration::from_secs(300), Some(512 * 1024)),
            ],
        },
        Criterion {
            id: 3,
            title: "cycle index at 2: 22 for n=9, 67562 for n=25",
            checks: vec![within(verify::check_orbit_count(9, 22), second), within(verify::check_orbit_count(25, 67562), second)],
        },
        Criterion {
            id: 4,
            title: "closed form for Aff(1,p²) = enumeration, p=3 summands",
            checks: vec![verify::check_closed_form(&[3, 5, 7]), verify::check_p3_summands()],
        },
        Criterion {
            id: 5,
            title: "affine sweep count = cycle-index count",
            checks: vec![verify::check_count_equality(&[3, 5, 7, 9, 11, 13, 15, 21, 25], &config)],
        },
        Criterion {
            id: 6,
            title: "χ criterion = table-only isotopy search on all pairs",
            checks: {
                let start = Instant::now();
                let mut checks =
                    vec![verify::check_oracle_equivalence(&[3, 5, 7], &config), verify::check_naive_agreement(&[3, 5], &config)];
                let total = start.elapsed();
                checks.push(verify::timed("total runtime < 10 min", || {
                    Ok((total > Duration::from_secs(600)).then(|| format!("took {total:?}")))
                }));
                checks
            },
        },
        Criterion {
            id: 7,
            title: "induced transversal operation = Z_n^A",
            checks: vec![verify::check_identification(&[3, 5, 7, 9, 11, 13, 15], Some((25, 100)), 0)],
        },
        Criterion {
            id: 8,
            title: "fixed-point lemmas and S0–S4 cycle types",
            checks: vec![verify::check_lemmas(&[3, 5, 7]), verify::check_family_predictions(&[3, 5, 7])],
        },
        Criterion {
            id: 9,
            title: "property suite",
            checks: vec![
                verify::check_random_right_loops(200, 101),
                verify::check_isotope_identity(9),
                verify::check_chi_closure(&[3, 5, 7, 9]),
                verify::check_evaluate_at_one(50),
                verify::check_subgroup_independence(&[3, 5, 7, 9, 11, 13, 15], &config),
            ],
        },
    ];

    let mut all = true;
    for c in &criteria {
        let tag = if c.passed() { "PASS" } else { "FAIL" };
        println!("{tag} criterion {}: {} ({:.3}s)", c.id, c.title, c.elapsed().as_secs_f64());
        for check in &c.checks {
            println!("    {check}");
        }
        all &= c.passed();
    }
    let failed = criteria.iter().filter(|c| !c.passed()).count();
    println!("{} criteria, {} failed", criteria.len(), failed);
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
